//! Total derivatives and jet prolongation of polynomial maps `f: U -> V`.

use std::collections::BTreeMap;

use crate::coord::{CoordId, JetSpace, Order};
use crate::error::{Error, Result};
use crate::expr::Expr;

/// A simultaneous substitution whose replacement expressions all live on
/// one declared target space.
#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    target: JetSpace,
    map: BTreeMap<CoordId, Expr>,
}

impl Substitution {
    pub fn new(target: JetSpace) -> Self {
        Substitution {
            target,
            map: BTreeMap::new(),
        }
    }

    pub fn target(&self) -> JetSpace {
        self.target
    }

    pub fn bind(&mut self, c: CoordId, value: Expr) -> Result<()> {
        if value.coords().iter().any(|d| !self.target.contains(*d)) {
            return Err(Error::MixedSpace {
                coord: c,
                target: self.target,
            });
        }
        self.map.insert(c, value);
        Ok(())
    }

    pub fn get(&self, c: CoordId) -> Option<&Expr> {
        self.map.get(&c)
    }

    pub fn bindings(&self) -> &BTreeMap<CoordId, Expr> {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        e.substitute(&self.map)
    }
}

/// Builds a substitution from raw pairs, checking every value against `target`.
pub fn substitute(e: &Expr, target: JetSpace, bindings: &[(CoordId, Expr)]) -> Result<Expr> {
    let mut s = Substitution::new(target);
    for (c, v) in bindings {
        s.bind(*c, v.clone())?;
    }
    s.apply(e)
}

/// `D_k g = dg/dx_k + z_{k s} dg/dy_s + z_{k i s} dg/dz_{i s}` for `g` on `F1`.
///
/// Results live on `F2`. Inputs that already contain second-order jet
/// coordinates are rejected: their total derivative would need `F3`.
pub fn total_derivative(space: &JetSpace, g: &Expr, k: usize) -> Result<Expr> {
    if !(1..=space.n()).contains(&k) {
        return Err(Error::IndexOutOfRange {
            coord: format!("D{k}"),
            n: space.n(),
            m: space.m(),
        });
    }
    let f1 = space.with_order(Order::F1);
    let mut out = g.diff(CoordId::X(k));
    for c in g.coords() {
        if !f1.contains(c) {
            return match c {
                CoordId::Z2(..) => Err(Error::OrderExceeded(format!(
                    "total derivative of an expression containing {c}"
                ))),
                _ => Err(Error::NotInSpace {
                    coord: c,
                    space: f1,
                }),
            };
        }
        match c {
            CoordId::Y(s) => out += g.diff(c) * Expr::coord(CoordId::Z(k, s)),
            CoordId::Z(i, s) => out += g.diff(c) * Expr::coord(CoordId::z2(k, i, s)),
            _ => {}
        }
    }
    Ok(out)
}

/// A polynomial map `U -> V`, one component per fibre coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap {
    n: usize,
    m: usize,
    components: Vec<Expr>,
}

impl PolyMap {
    pub fn new(n: usize, components: Vec<Expr>) -> Result<Self> {
        let m = components.len();
        let base = JetSpace::new(n, m.max(1), Order::Base)?;
        if m == 0 {
            return Err(Error::BadArity("a map needs at least one component".into()));
        }
        for f in &components {
            if let Some(c) = f.coords().into_iter().find(|c| !base.contains(*c)) {
                return Err(Error::NotInSpace {
                    coord: c,
                    space: base,
                });
            }
            if !f.is_polynomial() {
                return Err(Error::NotPolynomial(f.to_string()));
            }
        }
        Ok(PolyMap { n, m, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn base(&self) -> JetSpace {
        JetSpace::new(self.n, self.m, Order::Base).expect("validated dims")
    }

    /// `d f_mu / d x_i`.
    pub fn first(&self, i: usize, mu: usize) -> Expr {
        self.components[mu - 1].diff(CoordId::X(i))
    }

    /// `d^2 f_mu / d x_k d x_i`.
    pub fn second(&self, k: usize, i: usize, mu: usize) -> Expr {
        self.first(i, mu).diff(CoordId::X(k))
    }
}

/// The substitution realizing `jf` (order 1) or its second-order extension.
pub fn prolong(f: &PolyMap, order: u8) -> Result<Substitution> {
    if !(1..=2).contains(&order) {
        return Err(Error::OrderExceeded(format!(
            "prolongation of order {order}"
        )));
    }
    let mut s = Substitution::new(f.base());
    for mu in 1..=f.m() {
        s.bind(CoordId::Y(mu), f.components()[mu - 1].clone())?;
        for i in 1..=f.n() {
            s.bind(CoordId::Z(i, mu), f.first(i, mu))?;
        }
        if order == 2 {
            for k in 1..=f.n() {
                for i in k..=f.n() {
                    s.bind(CoordId::Z2(k, i, mu), f.second(k, i, mu))?;
                }
            }
        }
    }
    Ok(s)
}
