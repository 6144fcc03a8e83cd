//! Two-tier zero testing: exact ring normalization first, then random
//! sampling for expressions whose functions keep them out of the normal form.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coord::CoordId;
use crate::error::{Error, Result};
use crate::expr::Expr;

pub const DEFAULT_TRIALS: usize = 20;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Total assignment of values to a set of canonical coordinates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Point(BTreeMap<CoordId, f64>);

impl Point {
    pub fn new() -> Self {
        Point::default()
    }

    pub fn set(&mut self, c: CoordId, v: f64) {
        debug_assert!(c.is_canonical(), "non-canonical coordinate {c:?}");
        self.0.insert(c, v);
    }

    pub fn get(&self, c: CoordId) -> Option<f64> {
        self.0.get(&c).copied()
    }

    pub fn values(&self) -> &BTreeMap<CoordId, f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest absolute coordinate value.
    pub fn sup_norm(&self) -> f64 {
        self.0.values().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn eval(&self, e: &Expr) -> Result<f64> {
        e.eval(&self.0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (idx, (c, v)) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}={v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ZeroVerdict {
    ExactZero,
    ProbablyZero { samples: usize, tol: f64 },
    NonZero { witness: Point, value: f64 },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        !matches!(self, ZeroVerdict::NonZero { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ZeroVerdict::ExactZero => "exact-zero",
            ZeroVerdict::ProbablyZero { .. } => "probably-zero",
            ZeroVerdict::NonZero { .. } => "nonzero",
        }
    }
}

impl fmt::Display for ZeroVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroVerdict::ExactZero => f.write_str("exact-zero"),
            ZeroVerdict::ProbablyZero { samples, tol } => {
                write!(f, "probably-zero ({samples} samples, tol {tol:e})")
            }
            ZeroVerdict::NonZero { witness, value } => write!(f, "nonzero: {value} at {witness}"),
        }
    }
}

/// Trial count, tolerance and seed for the sampling tier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroTest {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest {
            trials: DEFAULT_TRIALS,
            tol: DEFAULT_TOL,
            seed: 0,
        }
    }
}

impl ZeroTest {
    pub fn new(trials: usize, tol: f64, seed: u64) -> Self {
        ZeroTest { trials, tol, seed }
    }

    pub fn check(&self, e: &Expr) -> Result<ZeroVerdict> {
        is_zero(e, self.trials, self.tol, self.seed)
    }
}

/// Draws up to `trials` admissible points uniformly from `[-half, half]^coords`
/// and evaluates `f` at each; points where `f` hits a domain error are
/// redrawn, at most `10 * trials` times in total.
pub(crate) fn sample_eval<F>(
    coords: &[CoordId],
    trials: usize,
    half: f64,
    rng: &mut ChaCha8Rng,
    mut f: F,
) -> Result<Vec<(Point, f64)>>
where
    F: FnMut(&Point) -> Result<f64>,
{
    let mut out = Vec::with_capacity(trials);
    let mut redraws = 0usize;
    while out.len() < trials {
        let mut p = Point::new();
        for &c in coords {
            p.set(c, rng.gen_range(-half..=half));
        }
        match f(&p) {
            Ok(v) => out.push((p, v)),
            Err(Error::EvalDomain(msg)) => {
                redraws += 1;
                if redraws > 10 * trials {
                    return Err(Error::EvalDomain(format!(
                        "gave up after {redraws} redraws: {msg}"
                    )));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Decides whether `e` vanishes identically.
///
/// `ExactZero` when the canonical form is empty; otherwise `e` is sampled at
/// `trials` points of `[-1, 1]^k` over its own coordinates and declared
/// `ProbablyZero` when `|e(p)| <= tol * (1 + |p|_inf)` everywhere, or
/// `NonZero` with the first failing point.
pub fn is_zero(e: &Expr, trials: usize, tol: f64, seed: u64) -> Result<ZeroVerdict> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if e.is_zero() {
        return Ok(ZeroVerdict::ExactZero);
    }
    let coords: Vec<CoordId> = e.coords().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (p, v) in sample_eval(&coords, trials, 1.0, &mut rng, |p| p.eval(e))? {
        if v.abs() > tol * (1.0 + p.sup_norm()) {
            return Ok(ZeroVerdict::NonZero {
                witness: p,
                value: v,
            });
        }
    }
    Ok(ZeroVerdict::ProbablyZero {
        samples: trials,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::FuncName;

    fn x(i: usize) -> Expr {
        Expr::coord(CoordId::X(i))
    }
    fn y(mu: usize) -> Expr {
        Expr::coord(CoordId::Y(mu))
    }

    #[test]
    fn exact_ring_identity() {
        let e = (x(1) + y(1)).pow(2).unwrap()
            - x(1).pow(2).unwrap()
            - Expr::int(2) * x(1) * y(1)
            - y(1).pow(2).unwrap();
        assert_eq!(is_zero(&e, 20, 1e-9, 1).unwrap(), ZeroVerdict::ExactZero);
    }

    #[test]
    fn distinct_coordinates_are_nonzero() {
        let v = is_zero(&(x(1) - y(1)), 20, 1e-9, 1).unwrap();
        match v {
            ZeroVerdict::NonZero { witness, value } => {
                let dx = witness.get(CoordId::X(1)).unwrap() - witness.get(CoordId::Y(1)).unwrap();
                assert!((dx - value).abs() < 1e-15);
                assert!(value.abs() > 1e-9);
            }
            other => panic!("expected NonZero, got {other:?}"),
        }
    }

    #[test]
    fn pythagorean_identity_is_probably_zero() {
        let s = Expr::func(FuncName::Sin, x(1));
        let c = Expr::func(FuncName::Cos, x(1));
        let e = s.pow(2).unwrap() + c.pow(2).unwrap() - Expr::one();
        assert!(!e.is_zero());
        assert_eq!(
            is_zero(&e, 20, 1e-9, 7).unwrap(),
            ZeroVerdict::ProbablyZero {
                samples: 20,
                tol: 1e-9
            }
        );
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let e = Expr::func(FuncName::Exp, x(1)) - Expr::one() - x(1);
        let a = is_zero(&e, 5, 1e-9, 42).unwrap();
        let b = is_zero(&e, 5, 1e-9, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn singular_samples_are_redrawn_then_given_up() {
        // log(-1 - x^2) is never defined
        let e = Expr::func(FuncName::Log, -Expr::one() - x(1).pow(2).unwrap());
        assert!(matches!(is_zero(&e, 3, 1e-9, 0), Err(Error::EvalDomain(_))));
        // log(x) is defined on half the samples
        let e = Expr::func(FuncName::Log, x(1)) - Expr::func(FuncName::Log, x(1));
        assert_eq!(is_zero(&e, 3, 1e-9, 0).unwrap(), ZeroVerdict::ExactZero);
        let e = Expr::func(FuncName::Log, x(1).pow(2).unwrap())
            - Expr::int(2) * Expr::func(FuncName::Log, x(1));
        assert!(matches!(
            is_zero(&e, 10, 1e-9, 0).unwrap(),
            ZeroVerdict::ProbablyZero { .. }
        ));
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(is_zero(&x(1), 0, 1e-9, 0).is_err());
    }
}
