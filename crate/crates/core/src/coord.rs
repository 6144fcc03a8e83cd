//! Jet coordinates and the coordinate spaces they live on.
//!
//! A point of the second-order space carries base coordinates `x_i`, fibre
//! coordinates `y_mu`, first derivatives `z_{i mu}` and symmetric second
//! derivatives `z_{k i mu}`. All indices are 1-based.

use std::fmt;

use crate::error::{Error, Result};

/// A single named coordinate.
///
/// The derived ordering (`X < Y < Z < Z2`, then lexicographic on indices) is
/// the canonical order used by monomials and by covector tuples.
///
/// `Z2(k, i, mu)` must be stored with `k <= i`; build it through
/// [`CoordId::z2`], which canonicalizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoordId {
    X(usize),
    Y(usize),
    Z(usize, usize),
    Z2(usize, usize, usize),
}

impl CoordId {
    pub fn x(i: usize) -> Self {
        CoordId::X(i)
    }

    pub fn y(mu: usize) -> Self {
        CoordId::Y(mu)
    }

    /// `z_{i mu}`: derivative of `y_mu` along `x_i`.
    pub fn z(i: usize, mu: usize) -> Self {
        CoordId::Z(i, mu)
    }

    /// `z_{k i mu}` with the base indices sorted so that `k <= i`.
    pub fn z2(k: usize, i: usize, mu: usize) -> Self {
        if k <= i {
            CoordId::Z2(k, i, mu)
        } else {
            CoordId::Z2(i, k, mu)
        }
    }

    pub fn is_canonical(&self) -> bool {
        match *self {
            CoordId::Z2(k, i, _) => k <= i,
            _ => true,
        }
    }

    /// True for `Z` and `Z2`, the derivative (jet) coordinates.
    pub fn is_jet(&self) -> bool {
        matches!(self, CoordId::Z(..) | CoordId::Z2(..))
    }

    /// Smallest space order that admits this coordinate.
    pub fn order(&self) -> Order {
        match self {
            CoordId::X(_) => Order::Base,
            CoordId::Y(_) => Order::Config,
            CoordId::Z(..) => Order::F1,
            CoordId::Z2(..) => Order::F2,
        }
    }

    /// Checks the indices against the dimension pair, ignoring the order tag.
    pub fn fits(&self, n: usize, m: usize) -> bool {
        let base = |i: usize| (1..=n).contains(&i);
        let fibre = |mu: usize| (1..=m).contains(&mu);
        match *self {
            CoordId::X(i) => base(i),
            CoordId::Y(mu) => fibre(mu),
            CoordId::Z(i, mu) => base(i) && fibre(mu),
            CoordId::Z2(k, i, mu) => k <= i && base(k) && base(i) && fibre(mu),
        }
    }
}

impl fmt::Display for CoordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoordId::X(i) => write!(f, "x{i}"),
            CoordId::Y(mu) => write!(f, "y{mu}"),
            CoordId::Z(i, mu) => write!(f, "z{i}_{mu}"),
            CoordId::Z2(k, i, mu) => write!(f, "z{k}_{i}_{mu}"),
        }
    }
}

/// Which of the four coordinate sets a space carries: `U`, `U x V`, `F1` or `F2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Base,
    Config,
    F1,
    F2,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Order::Base => "U",
            Order::Config => "UxV",
            Order::F1 => "F1",
            Order::F2 => "F2",
        };
        f.write_str(s)
    }
}

/// Base dimension `n`, fibre dimension `m` and the coordinate set in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetSpace {
    n: usize,
    m: usize,
    order: Order,
}

impl JetSpace {
    pub fn new(n: usize, m: usize, order: Order) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidDims { n, m });
        }
        Ok(JetSpace { n, m, order })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// Same dimensions, different coordinate set.
    pub fn with_order(&self, order: Order) -> Self {
        JetSpace { order, ..*self }
    }

    pub fn contains(&self, c: CoordId) -> bool {
        c.order() <= self.order && c.fits(self.n, self.m)
    }

    /// Every coordinate of the space, in canonical order. Second derivatives
    /// appear once per `k <= i` slot.
    pub fn coords(&self) -> Vec<CoordId> {
        let (n, m) = (self.n, self.m);
        let mut out: Vec<CoordId> = (1..=n).map(CoordId::X).collect();
        if self.order >= Order::Config {
            out.extend((1..=m).map(CoordId::Y));
        }
        if self.order >= Order::F1 {
            for i in 1..=n {
                for mu in 1..=m {
                    out.push(CoordId::Z(i, mu));
                }
            }
        }
        if self.order >= Order::F2 {
            for k in 1..=n {
                for i in k..=n {
                    for mu in 1..=m {
                        out.push(CoordId::Z2(k, i, mu));
                    }
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.coords().len()
    }
}

impl fmt::Display for JetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, m={})", self.order, self.n, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_is_canonicalized() {
        assert_eq!(CoordId::z2(2, 1, 1), CoordId::Z2(1, 2, 1));
        assert!(CoordId::z2(3, 1, 2).is_canonical());
        assert!(!CoordId::Z2(2, 1, 1).is_canonical());
    }

    #[test]
    fn coordinate_counts() {
        let f2 = JetSpace::new(2, 1, Order::F2).unwrap();
        let coords = f2.coords();
        assert_eq!(coords.len(), 8);
        assert_eq!(
            coords,
            vec![
                CoordId::X(1),
                CoordId::X(2),
                CoordId::Y(1),
                CoordId::Z(1, 1),
                CoordId::Z(2, 1),
                CoordId::Z2(1, 1, 1),
                CoordId::Z2(1, 2, 1),
                CoordId::Z2(2, 2, 1),
            ]
        );
        assert_eq!(f2.with_order(Order::Config).dim(), 3);
    }

    #[test]
    fn membership_respects_order_and_bounds() {
        let cfg = JetSpace::new(2, 2, Order::Config).unwrap();
        assert!(cfg.contains(CoordId::Y(2)));
        assert!(!cfg.contains(CoordId::Z(1, 1)));
        assert!(!cfg.contains(CoordId::X(3)));
        assert!(!cfg.contains(CoordId::X(0)));
        assert!(JetSpace::new(0, 1, Order::F1).is_err());
    }

    #[test]
    fn ordering_is_kind_then_indices() {
        let mut v = vec![
            CoordId::Z2(1, 1, 1),
            CoordId::Y(2),
            CoordId::Z(1, 2),
            CoordId::X(3),
            CoordId::Z(1, 1),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                CoordId::X(3),
                CoordId::Y(2),
                CoordId::Z(1, 1),
                CoordId::Z(1, 2),
                CoordId::Z2(1, 1, 1)
            ]
        );
    }
}
