//! Numeric cross-checks: seeded sampling of jet points, central differences
//! against symbolic partials, and pointwise zero tests of Euler expressions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coord::{CoordId, JetSpace, Order};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::kernel::Lagrangian;
use crate::zero::{sample_eval, Point, ZeroVerdict};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub trials: usize,
    /// Half-width of the sampling cube.
    pub half_width: f64,
    pub tol: f64,
    pub fd_step: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            trials: 20,
            half_width: 1.0,
            tol: 1e-9,
            fd_step: 1e-5,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        for (name, v) in [
            ("box", self.half_width),
            ("tol", self.tol),
            ("fd_step", self.fd_step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// `trials` uniform points of `[-box, box]` over every coordinate of `space`.
pub fn sample(space: &JetSpace, cfg: &SamplerConfig) -> Result<Vec<Point>> {
    cfg.validate()?;
    let coords = space.coords();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pts = sample_eval(&coords, cfg.trials, cfg.half_width, &mut rng, |_| Ok(0.0))?;
    Ok(pts.into_iter().map(|(p, _)| p).collect())
}

/// Largest `|fd - exact| / (1 + |exact|)` over the sampled points, where `fd`
/// is the central difference of `e` along `c` and `exact` the symbolic partial.
pub fn finite_diff_check(e: &Expr, c: CoordId, cfg: &SamplerConfig) -> Result<f64> {
    cfg.validate()?;
    let exact = e.diff(c);
    let mut coords = e.coords();
    coords.insert(c);
    let coords: Vec<CoordId> = coords.into_iter().collect();
    let h = cfg.fd_step;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let errs = sample_eval(&coords, cfg.trials, cfg.half_width, &mut rng, |p| {
        let at = |shift: f64| {
            let base = p.get(c).unwrap_or(0.0);
            e.eval_with(&|d| if d == c { Some(base + shift) } else { p.get(d) })
        };
        let fd = (at(h)? - at(-h)?) / (2.0 * h);
        let ex = p.eval(&exact)?;
        Ok((fd - ex).abs() / (1.0 + ex.abs()))
    })?;
    Ok(errs.into_iter().map(|(_, v)| v).fold(0.0, f64::max))
}

/// The separate terms whose sum is `E_mu(L)`, each with its sign applied.
pub fn euler_pieces(l: &Lagrangian, mu: usize) -> Vec<Expr> {
    let body = l.body();
    let mut pieces = vec![body.diff(CoordId::Y(mu))];
    for k in 1..=l.n() {
        let p = body.diff(CoordId::Z(k, mu));
        if p.is_zero() {
            continue;
        }
        pieces.push(-p.diff(CoordId::X(k)));
        for s in 1..=l.m() {
            pieces.push(-(p.diff(CoordId::Y(s)) * Expr::coord(CoordId::Z(k, s))));
            for i in 1..=l.n() {
                pieces.push(-(p.diff(CoordId::Z(i, s)) * Expr::coord(CoordId::z2(k, i, s))));
            }
        }
    }
    pieces.retain(|e| !e.is_zero());
    pieces
}

/// Evaluates every Euler term separately at sampled `F2` points and sums in
/// floating point, so no symbolic cancellation is involved. A component
/// whose terms are all identically zero is `ExactZero`.
pub fn numeric_euler_zero(l: &Lagrangian, cfg: &SamplerConfig) -> Result<Vec<ZeroVerdict>> {
    cfg.validate()?;
    let f2 = l.space().with_order(Order::F2);
    let coords = f2.coords();
    let mut out = Vec::with_capacity(l.m());
    for mu in 1..=l.m() {
        let pieces = euler_pieces(l, mu);
        if pieces.is_empty() {
            out.push(ZeroVerdict::ExactZero);
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(mu as u64));
        let values = sample_eval(&coords, cfg.trials, cfg.half_width, &mut rng, |p| {
            pieces.iter().map(|e| p.eval(e)).sum::<Result<f64>>()
        })?;
        let verdict = match values.into_iter().find(|(_, v)| v.abs() > cfg.tol) {
            Some((witness, value)) => ZeroVerdict::NonZero { witness, value },
            None => ZeroVerdict::ProbablyZero {
                samples: cfg.trials,
                tol: cfg.tol,
            },
        };
        out.push(verdict);
    }
    Ok(out)
}
