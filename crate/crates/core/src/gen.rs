//! Seeded random generators for expressions, forms, maps and Lagrangians.
//!
//! Property suites draw their inputs from here so that every run with the
//! same seed sees the same corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coord::{CoordId, JetSpace, Order};
use crate::expr::{rational, Expr, FuncName};
use crate::forms::{Covector, DiffForm};
use crate::jet::PolyMap;
use crate::kernel::Lagrangian;

/// The generator every suite draws from.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coefficient<R: Rng>(rng: &mut R) -> Expr {
    let mut k = rng.gen_range(1..=5);
    if rng.gen_bool(0.5) {
        k = -k;
    }
    if rng.gen_bool(0.2) {
        Expr::constant(rational(k, rng.gen_range(2..=4)))
    } else {
        Expr::int(k)
    }
}

/// A polynomial with up to `max_terms` terms of total degree `<= max_degree`
/// in the given coordinates.
pub fn poly<R: Rng>(rng: &mut R, coords: &[CoordId], max_degree: u32, max_terms: usize) -> Expr {
    let mut out = Expr::zero();
    let terms = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..terms {
        let degree = rng.gen_range(0..=max_degree);
        let mut t = coefficient(rng);
        for _ in 0..degree {
            if let Some(c) = coords.choose(rng) {
                t = t * Expr::coord(*c);
            }
        }
        out += t;
    }
    out
}

/// Like [`poly`], with some terms multiplied by `sin`, `cos`, `exp` or
/// `log(2 + u^2)` of a small polynomial.
pub fn smooth<R: Rng>(rng: &mut R, coords: &[CoordId], max_degree: u32, max_terms: usize) -> Expr {
    let mut out = poly(rng, coords, max_degree, max_terms);
    let extra = rng.gen_range(1..=2);
    for _ in 0..extra {
        let arg = poly(rng, coords, 2, 2);
        let f = match rng.gen_range(0..4) {
            0 => Expr::func(FuncName::Sin, arg),
            1 => Expr::func(FuncName::Cos, arg),
            2 => Expr::func(FuncName::Exp, arg),
            _ => Expr::func(
                FuncName::Log,
                Expr::int(2) + arg.pow(2).expect("nonnegative power"),
            ),
        };
        out += f * poly(rng, coords, 1, 2);
    }
    out
}

pub fn dims<R: Rng>(rng: &mut R, max_n: usize, max_m: usize) -> (usize, usize) {
    (rng.gen_range(1..=max_n), rng.gen_range(1..=max_m))
}

fn subsets(items: &[Covector], size: usize) -> Vec<Vec<Covector>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (idx, c) in items.iter().enumerate() {
        for mut rest in subsets(&items[idx + 1..], size - 1) {
            rest.insert(0, *c);
            out.push(rest);
        }
    }
    out
}

/// A `degree`-form on `space` using only the given covectors, with random
/// polynomial coefficients over the space's coordinates.
pub fn form_over<R: Rng>(
    rng: &mut R,
    space: JetSpace,
    covectors: &[Covector],
    degree: usize,
    max_degree: u32,
    max_terms: usize,
) -> DiffForm {
    let coords = space.coords();
    let mut out = DiffForm::zero(space, degree);
    let mut tuples = subsets(covectors, degree);
    tuples.shuffle(rng);
    let keep = rng.gen_range(1..=tuples.len().clamp(1, 4));
    for key in tuples.into_iter().take(keep) {
        let c = poly(rng, &coords, max_degree, max_terms);
        out.add_term(c, &key)
            .expect("covectors and coefficients belong to the space");
    }
    out
}

/// Random form on `U x V` of the given degree.
pub fn config_form<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    degree: usize,
    max_degree: u32,
) -> DiffForm {
    let space = JetSpace::new(n, m, Order::Config).expect("positive dims");
    let cov: Vec<Covector> = space.coords().into_iter().map(Covector).collect();
    form_over(rng, space, &cov, degree, max_degree, 3)
}

/// Random `n`-form on `F1` built only from `dx` and `dy`.
pub fn horizontal_form<R: Rng>(rng: &mut R, n: usize, m: usize, max_degree: u32) -> DiffForm {
    let space = JetSpace::new(n, m, Order::F1).expect("positive dims");
    let cov: Vec<Covector> = space
        .with_order(Order::Config)
        .coords()
        .into_iter()
        .map(Covector)
        .collect();
    form_over(rng, space, &cov, n, max_degree, 3)
}

/// Random form of any degree on `F1`, covectors drawn from all of `F1`.
pub fn f1_form<R: Rng>(rng: &mut R, n: usize, m: usize, max_degree: u32) -> DiffForm {
    let space = JetSpace::new(n, m, Order::F1).expect("positive dims");
    let cov: Vec<Covector> = space.coords().into_iter().map(Covector).collect();
    let degree = rng.gen_range(0..=cov.len().min(3));
    form_over(rng, space, &cov, degree, max_degree, 3)
}

pub fn polymap<R: Rng>(rng: &mut R, n: usize, m: usize, max_degree: u32) -> PolyMap {
    let xs: Vec<CoordId> = (1..=n).map(CoordId::X).collect();
    let comps = (0..m).map(|_| poly(rng, &xs, max_degree, 3)).collect();
    PolyMap::new(n, comps).expect("x-only polynomials")
}

/// Generic polynomial Lagrangian on `F1`.
pub fn lagrangian<R: Rng>(rng: &mut R, n: usize, m: usize, max_degree: u32) -> Lagrangian {
    let space = JetSpace::new(n, m, Order::F1).expect("positive dims");
    Lagrangian::new(n, m, poly(rng, &space.coords(), max_degree, 4)).expect("F1 coordinates")
}

/// Sum of a few random multi-affine monomials `z_{s_1 sigma_1} ... z_{s_r sigma_r}`
/// with polynomial coefficients on `U x V`. Coefficients are not
/// antisymmetrized, so the result is usually not null.
pub fn multi_affine<R: Rng>(rng: &mut R, n: usize, m: usize, max_degree: u32) -> Expr {
    let config = JetSpace::new(n, m, Order::Config)
        .expect("positive dims")
        .coords();
    let mut out = Expr::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut slots: Vec<usize> = (1..=n).collect();
        slots.shuffle(rng);
        let r = rng.gen_range(0..=n);
        let mut t = poly(rng, &config, max_degree, 2);
        for &s in &slots[..r] {
            t = t * Expr::coord(CoordId::Z(s, rng.gen_range(1..=m)));
        }
        out += t;
    }
    out
}
