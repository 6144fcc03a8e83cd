//! The Euler mapping `L -> E(L)` and its kernel.
//!
//! A first-order Lagrangian has vanishing Euler form exactly when it is
//! multi-affine in the jet coordinates with coefficients antisymmetric in the
//! fibre indices and a set of first-order conditions on those coefficients
//! holds. Equivalently `L dx_1 ^ ... ^ dx_n = h(rho)` for a unique closed
//! `n`-form `rho` on `U x V`, and then `rho = d eta` locally, so
//! `L dx = h(d eta)`. This module computes each object in that chain and the
//! maps between them.

use std::collections::{BTreeMap, BTreeSet};

use crate::coord::{CoordId, JetSpace, Order};
use crate::error::{Error, Result};
use crate::expr::{integer, Expr, Rational};
use crate::forms::{
    contact, contact_slot, exterior_d, horizontalize, slot_form, Covector, DiffForm,
};
use crate::jet::total_derivative;
use crate::normal::{z_normal_form, ZMonomial};
use crate::zero::{ZeroTest, ZeroVerdict};

/// A function on `F1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lagrangian {
    space: JetSpace,
    body: Expr,
}

impl Lagrangian {
    pub fn new(n: usize, m: usize, body: Expr) -> Result<Self> {
        let space = JetSpace::new(n, m, Order::F1)?;
        for c in body.coords() {
            if !space.contains(c) {
                return Err(match c {
                    CoordId::Z2(..) if c.fits(n, m) => {
                        Error::OrderExceeded(format!("Lagrangian depends on {c}"))
                    }
                    _ => Error::NotInSpace { coord: c, space },
                });
            }
        }
        Ok(Lagrangian { space, body })
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn m(&self) -> usize {
        self.space.m()
    }

    pub fn space(&self) -> JetSpace {
        self.space
    }

    pub fn body(&self) -> &Expr {
        &self.body
    }
}

/// Components `E_mu(L)` of the Euler form `E_mu omega_mu` on `F2`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerForm {
    space: JetSpace,
    components: Vec<Expr>,
}

impl EulerForm {
    /// Fails unless every component is affine in each second-order jet coordinate.
    pub fn new(space: JetSpace, components: Vec<Expr>) -> Result<Self> {
        let space = space.with_order(Order::F2);
        if components.len() != space.m() {
            return Err(Error::BadArity(format!(
                "{} components for m={}",
                components.len(),
                space.m()
            )));
        }
        for e in &components {
            let nf = z_normal_form(e)?;
            for mono in nf.keys() {
                if let Some((c, _)) = mono
                    .factors()
                    .iter()
                    .find(|(c, k)| matches!(c, CoordId::Z2(..)) && *k > 1)
                {
                    return Err(Error::OrderExceeded(format!(
                        "Euler component nonlinear in {c}"
                    )));
                }
            }
        }
        Ok(EulerForm { space, components })
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn space(&self) -> JetSpace {
        self.space
    }

    /// True when every component normalizes to zero.
    pub fn is_exact_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    pub fn verdicts(&self, test: &ZeroTest) -> Result<Vec<ZeroVerdict>> {
        self.components
            .iter()
            .enumerate()
            .map(|(idx, e)| {
                ZeroTest {
                    seed: test.seed.wrapping_add(idx as u64),
                    ..*test
                }
                .check(e)
            })
            .collect()
    }

    /// `E_mu omega_mu` as a 1-form on `F2`.
    pub fn to_form(&self) -> Result<DiffForm> {
        let mut out = DiffForm::zero(self.space, 1);
        for (idx, e) in self.components.iter().enumerate() {
            out = out.add(&contact(self.space, idx + 1)?.scale(e)?)?;
        }
        Ok(out)
    }
}

/// Euler expressions expanded term by term:
/// `dL/dy_mu - d2L/dx_k dz_{k mu} - d2L/dy_s dz_{k mu} z_{k s} - d2L/dz_{i s} dz_{k mu} z_{k i s}`.
pub fn euler(l: &Lagrangian) -> EulerForm {
    let (n, m) = (l.n(), l.m());
    let body = l.body();
    let mut components = Vec::with_capacity(m);
    for mu in 1..=m {
        let mut e = body.diff(CoordId::Y(mu));
        for k in 1..=n {
            let p = body.diff(CoordId::Z(k, mu));
            if p.is_zero() {
                continue;
            }
            e = e - p.diff(CoordId::X(k));
            for c in p.coords() {
                match c {
                    CoordId::Y(s) => e = e - p.diff(c) * Expr::coord(CoordId::Z(k, s)),
                    CoordId::Z(i, s) => e = e - p.diff(c) * Expr::coord(CoordId::z2(k, i, s)),
                    _ => {}
                }
            }
        }
        components.push(e);
    }
    EulerForm::new(l.space(), components)
        .expect("Euler components of a first-order Lagrangian are affine in z2")
}

/// `dL/dy_mu - D_k (dL/dz_{k mu})`, through the total derivative.
pub fn euler_via_total_derivative(l: &Lagrangian) -> Result<Vec<Expr>> {
    let space = l.space();
    (1..=l.m())
        .map(|mu| {
            let mut e = l.body().diff(CoordId::Y(mu));
            for k in 1..=l.n() {
                e = e - total_derivative(&space, &l.body().diff(CoordId::Z(k, mu)), k)?;
            }
            Ok(e)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HessianResidual {
    pub i: usize,
    pub k: usize,
    pub sigma: usize,
    pub mu: usize,
    pub residual: Expr,
    pub verdict: ZeroVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientResidual {
    pub mu: usize,
    /// `None` when the first-order part could not be separated by z-monomials
    /// and was tested pointwise instead.
    pub monomial: Option<ZMonomial>,
    pub residual: Expr,
    pub verdict: ZeroVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelReport {
    /// `d2L/dz_{i s} dz_{k mu} + d2L/dz_{k s} dz_{i mu}` for `i <= k`, `s <= mu`.
    pub hessian: Vec<HessianResidual>,
    /// z-coefficients of `dL/dy_mu - d2L/dx_k dz_{k mu} - d2L/dy_s dz_{k mu} z_{k s}`.
    /// Empty when some Hessian residual is nonzero.
    pub coefficients: Vec<CoefficientResidual>,
    pub verdict: bool,
}

fn hessian_residuals(l: &Lagrangian, test: &ZeroTest) -> Result<Vec<HessianResidual>> {
    let (n, m) = (l.n(), l.m());
    let grads: BTreeMap<(usize, usize), Expr> = (1..=n)
        .flat_map(|i| (1..=m).map(move |mu| (i, mu)))
        .map(|(i, mu)| ((i, mu), l.body().diff(CoordId::Z(i, mu))))
        .collect();
    let mut out = Vec::new();
    let mut seed = test.seed;
    for i in 1..=n {
        for k in i..=n {
            for sigma in 1..=m {
                for mu in sigma..=m {
                    let a = grads[&(i, sigma)].diff(CoordId::Z(k, mu));
                    let b = grads[&(k, sigma)].diff(CoordId::Z(i, mu));
                    let residual = a + b;
                    let verdict = ZeroTest { seed, ..*test }.check(&residual)?;
                    seed = seed.wrapping_add(1);
                    out.push(HessianResidual {
                        i,
                        k,
                        sigma,
                        mu,
                        residual,
                        verdict,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Slot indices `s` and fibre indices `sigma` of a multi-affine monomial.
type Shape = (Vec<usize>, Vec<usize>);

/// All multi-affine z-monomials `z_{s_1 sigma_1} ... z_{s_r sigma_r}` with
/// `s_1 < ... < s_r`, including the empty one.
fn multi_affine_monomials(n: usize, m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let slots: Vec<usize> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        let r = slots.len();
        let total = m.pow(r as u32);
        for code in 0..total {
            let mut c = code;
            let mut sigmas = vec![0; r];
            for a in (0..r).rev() {
                sigmas[a] = c % m + 1;
                c /= m;
            }
            out.push((slots.clone(), sigmas));
        }
    }
    out
}

fn z_monomial(slots: &[usize], sigmas: &[usize]) -> ZMonomial {
    ZMonomial::from_coords(slots.iter().zip(sigmas).map(|(&s, &sg)| CoordId::Z(s, sg)))
}

/// First-order part of the Euler expressions once the second-order part is
/// known to vanish.
fn first_order_part(l: &Lagrangian, mu: usize) -> Expr {
    let body = l.body();
    let mut e = body.diff(CoordId::Y(mu));
    for k in 1..=l.n() {
        let p = body.diff(CoordId::Z(k, mu));
        if p.is_zero() {
            continue;
        }
        e = e - p.diff(CoordId::X(k));
        for s in 1..=l.m() {
            e = e - p.diff(CoordId::Y(s)) * Expr::coord(CoordId::Z(k, s));
        }
    }
    e
}

/// Tests `E(L) = 0` through the equivalent system: symmetry of the
/// z-Hessian, then the separated z-coefficients of the first-order part.
pub fn kernel_check(l: &Lagrangian, test: &ZeroTest) -> Result<KernelReport> {
    let hessian = hessian_residuals(l, test)?;
    let mut coefficients = Vec::new();
    if hessian.iter().all(|r| r.verdict.is_zero()) {
        let shapes = multi_affine_monomials(l.n(), l.m());
        let mut seed = test.seed.wrapping_add(hessian.len() as u64);
        for mu in 1..=l.m() {
            let part = first_order_part(l, mu);
            match z_normal_form(&part) {
                Ok(nf) => {
                    let mut keys: BTreeSet<ZMonomial> =
                        shapes.iter().map(|(s, sg)| z_monomial(s, sg)).collect();
                    keys.extend(nf.keys().cloned());
                    for key in keys {
                        let residual = nf.get(&key).cloned().unwrap_or_default();
                        let verdict = ZeroTest { seed, ..*test }.check(&residual)?;
                        seed = seed.wrapping_add(1);
                        coefficients.push(CoefficientResidual {
                            mu,
                            monomial: Some(key),
                            residual,
                            verdict,
                        });
                    }
                }
                Err(Error::NotPolynomialInJets(_)) => {
                    let verdict = ZeroTest { seed, ..*test }.check(&part)?;
                    seed = seed.wrapping_add(1);
                    coefficients.push(CoefficientResidual {
                        mu,
                        monomial: None,
                        residual: part,
                        verdict,
                    });
                }
                Err(e) => return Err(e),
            }
        }
    }
    let verdict = hessian.iter().all(|r| r.verdict.is_zero())
        && !coefficients.is_empty()
        && coefficients.iter().all(|r| r.verdict.is_zero());
    Ok(KernelReport {
        hessian,
        coefficients,
        verdict,
    })
}

/// `f_0` plus the coefficient family `f^{s_1..s_r}_{sigma_1..sigma_r}` of a
/// multi-affine Lagrangian; `s` strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    space: JetSpace,
    f0: Expr,
    coeffs: BTreeMap<(Vec<usize>, Vec<usize>), Expr>,
}

impl Decomposition {
    pub fn new(
        space: JetSpace,
        f0: Expr,
        coeffs: BTreeMap<(Vec<usize>, Vec<usize>), Expr>,
    ) -> Result<Self> {
        let config = space.with_order(Order::Config);
        let check = |e: &Expr| -> Result<()> {
            match e.coords().into_iter().find(|c| !config.contains(*c)) {
                Some(c) => Err(Error::NotInSpace {
                    coord: c,
                    space: config,
                }),
                None => Ok(()),
            }
        };
        check(&f0)?;
        for ((s, sigma), v) in &coeffs {
            check(v)?;
            let increasing = s.windows(2).all(|w| w[0] < w[1]);
            let in_range = s.iter().all(|i| (1..=space.n()).contains(i))
                && sigma.iter().all(|mu| (1..=space.m()).contains(mu));
            if s.is_empty() || s.len() != sigma.len() || !increasing || !in_range {
                return Err(Error::BadArity(format!(
                    "bad coefficient index s={s:?}, sigma={sigma:?}"
                )));
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Decomposition {
            space: space.with_order(Order::Config),
            f0,
            coeffs,
        })
    }

    pub fn space(&self) -> JetSpace {
        self.space
    }

    pub fn f0(&self) -> &Expr {
        &self.f0
    }

    /// Nonzero coefficients keyed by `(s, sigma)`.
    pub fn coeffs(&self) -> &BTreeMap<(Vec<usize>, Vec<usize>), Expr> {
        &self.coeffs
    }

    pub fn coefficient(&self, s: &[usize], sigma: &[usize]) -> Expr {
        self.coeffs
            .get(&(s.to_vec(), sigma.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    /// `f_0 + sum f^s_sigma z_{s_1 sigma_1} ... z_{s_r sigma_r}`.
    pub fn reconstruct(&self) -> Expr {
        let mut out = self.f0.clone();
        for ((s, sigma), v) in &self.coeffs {
            out += z_monomial(s, sigma).to_expr() * v.clone();
        }
        out
    }

    /// Every coefficient must flip sign under a transposition of fibre
    /// indices and vanish when a fibre index repeats.
    pub fn check_antisymmetry(&self, test: &ZeroTest) -> Result<()> {
        for ((s, sigma), v) in &self.coeffs {
            for a in 0..sigma.len() {
                for b in a + 1..sigma.len() {
                    if sigma[a] == sigma[b] {
                        if !test.check(v)?.is_zero() {
                            return Err(Error::AntisymmetryViolated(format!(
                                "f^{s:?}_{sigma:?} = {v} has a repeated fibre index"
                            )));
                        }
                        continue;
                    }
                    let mut swapped = sigma.clone();
                    swapped.swap(a, b);
                    let sum = v + &self.coefficient(s, &swapped);
                    if !test.check(&sum)?.is_zero() {
                        return Err(Error::AntisymmetryViolated(format!(
                            "f^{s:?}_{sigma:?} + f^{s:?}_{swapped:?} = {sum}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn factorial(r: usize) -> Rational {
    (1..=r as i64).fold(integer(1), |acc, k| acc * integer(k))
}

/// Reads the multi-affine decomposition off the z-normal form.
///
/// Fails with `NotInKernelCandidate` when the z-Hessian condition fails, and
/// cross-checks the top-order coefficients against `n`-th mixed partials.
pub fn decompose(l: &Lagrangian, test: &ZeroTest) -> Result<Decomposition> {
    if let Some(r) = hessian_residuals(l, test)?
        .into_iter()
        .find(|r| !r.verdict.is_zero())
    {
        return Err(Error::NotInKernelCandidate(format!(
            "d2L/dz{i}_{s} dz{k}_{mu} + d2L/dz{k}_{s} dz{i}_{mu} = {res} does not vanish",
            i = r.i,
            k = r.k,
            s = r.sigma,
            mu = r.mu,
            res = r.residual
        )));
    }
    let nf = z_normal_form(l.body())?;
    let mut f0 = Expr::zero();
    let mut coeffs = BTreeMap::new();
    for (mono, coef) in nf {
        let mut slots = Vec::new();
        let mut sigmas = Vec::new();
        for (c, e) in mono.factors() {
            match (c, e) {
                (CoordId::Z(i, mu), 1) if !slots.contains(i) => {
                    slots.push(*i);
                    sigmas.push(*mu);
                }
                _ => {
                    return Err(Error::NotInKernelCandidate(format!(
                        "monomial {mono} is not multi-affine across base indices"
                    )))
                }
            }
        }
        if slots.is_empty() {
            f0 = coef;
        } else {
            coeffs.insert((slots, sigmas), coef);
        }
    }
    let d = Decomposition::new(l.space(), f0, coeffs)?;
    d.check_antisymmetry(test)?;

    // top-order coefficients are the n-th mixed partials
    let n = l.n();
    let top: Vec<usize> = (1..=n).collect();
    for (_, sigma) in multi_affine_monomials(n, l.m())
        .into_iter()
        .filter(|(s, _)| s.len() == n)
    {
        let mut partial = l.body().clone();
        for (&i, &mu) in top.iter().zip(&sigma) {
            partial = partial.diff(CoordId::Z(i, mu));
        }
        let diff = partial - d.coefficient(&top, &sigma);
        if !test.check(&diff)?.is_zero() {
            return Err(Error::NotInKernelCandidate(format!(
                "top-order coefficient for sigma={sigma:?} disagrees with the mixed partial"
            )));
        }
    }
    Ok(d)
}

/// The decomposition by descending recursion: top-order coefficients are
/// mixed partials, lower orders subtract the contributions of higher ones,
/// and `f_0` is what remains.
pub fn recursive_coefficients(l: &Lagrangian) -> Result<Decomposition> {
    let (n, m) = (l.n(), l.m());
    let mut shapes = multi_affine_monomials(n, m);
    shapes.retain(|(s, _)| !s.is_empty());
    shapes.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.cmp(b)));
    // (shape, coefficient, z-monomial)
    let mut found: Vec<(Shape, Expr, Expr)> = Vec::new();
    for (s, sigma) in shapes {
        let vars: Vec<CoordId> = s
            .iter()
            .zip(&sigma)
            .map(|(&i, &mu)| CoordId::Z(i, mu))
            .collect();
        let mut value = l.body().clone();
        for &v in &vars {
            value = value.diff(v);
        }
        for ((hs, _), coef, mono) in &found {
            if hs.len() <= s.len() {
                continue;
            }
            let mut dm = mono.clone();
            for &v in &vars {
                dm = dm.diff(v);
            }
            if !dm.is_zero() {
                value = value - coef * &dm;
            }
        }
        if let Some(c) = value.coords().into_iter().find(CoordId::is_jet) {
            return Err(Error::NotInKernelCandidate(format!(
                "coefficient for s={s:?}, sigma={sigma:?} still depends on {c}"
            )));
        }
        let mono = z_monomial(&s, &sigma).to_expr();
        found.push(((s, sigma), value, mono));
    }
    let mut f0 = l.body().clone();
    for (_, coef, mono) in &found {
        f0 = f0 - coef * mono;
    }
    let coeffs = found.into_iter().map(|(k, v, _)| (k, v)).collect();
    Decomposition::new(l.space(), f0, coeffs)
}

/// `rho = f_0 dx + sum_{s, sigma} (1/r!) f^s_sigma dx_1 ^ .. dy_{sigma_a} (slot s_a) .. ^ dx_n`.
pub fn build_rho(d: &Decomposition) -> Result<DiffForm> {
    let space = d.space();
    let mut rho = DiffForm::volume(space).scale(d.f0())?;
    for ((s, sigma), v) in d.coeffs() {
        let weight = Expr::constant(factorial(s.len()).recip()) * v.clone();
        rho = rho.add(&slot_form(space, s, sigma)?.scale(&weight)?)?;
    }
    Ok(rho)
}

/// Radial homotopy potential about the origin: `d eta = rho` for closed
/// polynomial `rho` on `U` or `U x V`.
pub fn poincare_potential(rho: &DiffForm) -> Result<DiffForm> {
    let rho = if rho.space().order() > Order::Config {
        rho.restrict(Order::Config)?
    } else {
        rho.clone()
    };
    let p = rho.degree();
    if p == 0 {
        return Err(Error::BadDegree {
            expected: 1,
            found: 0,
        });
    }
    for c in rho.terms().values() {
        if !c.is_polynomial() {
            return Err(Error::NotPolynomial(c.to_string()));
        }
    }
    if !exterior_d(&rho).is_zero() {
        return Err(Error::NotClosed);
    }
    let mut eta = DiffForm::zero(rho.space(), p - 1);
    for (key, coef) in rho.terms() {
        // integral of t^(p-1) a(t u) over [0, 1], term by term
        let mut averaged = Expr::zero();
        for (mono, c) in coef.terms() {
            let weight = integer(p as i64 + mono.coord_degree() as i64);
            averaged += Expr::term(c / weight, mono.clone());
        }
        for (j, cov) in key.iter().enumerate() {
            let mut rest = key.clone();
            rest.remove(j);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let piece = Expr::coord(cov.coord()) * averaged.scale(&integer(sign));
            eta.add_term(piece, &rest)?;
        }
    }
    Ok(eta)
}

/// `L` with `L dx_1 ^ ... ^ dx_n = h(d eta)` for an `(n-1)`-form `eta` on `U x V`.
pub fn generate_null(eta: &DiffForm) -> Result<Lagrangian> {
    let eta = if eta.space().order() > Order::Config {
        eta.restrict(Order::Config)?
    } else {
        eta.clone()
    };
    let space = eta.space();
    if eta.degree() + 1 != space.n() {
        return Err(Error::BadDegree {
            expected: space.n() - 1,
            found: eta.degree(),
        });
    }
    let h = horizontalize(&exterior_d(&eta).lift(Order::F1)?)?;
    Lagrangian::new(space.n(), space.m(), h.volume_coefficient())
}

/// `L = df_i/dx_i + (df_i/dy_s) z_{i s}` for functions `f_i` on `U x V`.
pub fn divergence_lagrangian(n: usize, m: usize, f: &[Expr]) -> Result<Lagrangian> {
    if f.len() != n {
        return Err(Error::BadArity(format!("{} functions for n={n}", f.len())));
    }
    let config = JetSpace::new(n, m, Order::Config)?;
    let mut body = Expr::zero();
    for (idx, fi) in f.iter().enumerate() {
        if let Some(c) = fi.coords().into_iter().find(|c| !config.contains(*c)) {
            return Err(Error::NotInSpace {
                coord: c,
                space: config,
            });
        }
        let i = idx + 1;
        body += fi.diff(CoordId::X(i));
        for s in 1..=m {
            body += fi.diff(CoordId::Y(s)) * Expr::coord(CoordId::Z(i, s));
        }
    }
    Lagrangian::new(n, m, body)
}

/// `lambda = L dx + (dL/dz_{i s}) omega^i_s`; `h(lambda) = L dx`.
pub fn sniatycki_form(l: &Lagrangian) -> Result<DiffForm> {
    let space = l.space();
    let mut out = DiffForm::volume(space).scale(l.body())?;
    for i in 1..=l.n() {
        for s in 1..=l.m() {
            let g = l.body().diff(CoordId::Z(i, s));
            if g.is_zero() {
                continue;
            }
            out = out.add(&contact_slot(space, i, s)?.scale(&g)?)?;
        }
    }
    Ok(out)
}

/// Input for the explicit low-dimensional formulas.
#[derive(Debug, Clone, PartialEq)]
pub enum NullData {
    /// A function `F` on `U x V` (`n = 1`).
    One(Expr),
    /// The 1-form `f_i dx_i + g_mu dy_mu` on `U x V` (`n = 2`).
    Two { f: Vec<Expr>, g: Vec<Expr> },
}

fn levi_civita(i: usize, j: usize) -> i64 {
    match (i, j) {
        (1, 2) => 1,
        (2, 1) => -1,
        _ => 0,
    }
}

/// Closed-form null Lagrangians for `n = 1` and `n = 2`.
pub fn closed_form_null(n: usize, m: usize, data: &NullData) -> Result<Lagrangian> {
    let config = JetSpace::new(n, m, Order::Config)?;
    let check = |e: &Expr| -> Result<()> {
        match e.coords().into_iter().find(|c| !config.contains(*c)) {
            Some(c) => Err(Error::NotInSpace {
                coord: c,
                space: config,
            }),
            None => Ok(()),
        }
    };
    let z = |i: usize, mu: usize| Expr::coord(CoordId::Z(i, mu));
    match (n, data) {
        (1, NullData::One(big_f)) => {
            check(big_f)?;
            let mut body = big_f.diff(CoordId::X(1));
            for mu in 1..=m {
                body += big_f.diff(CoordId::Y(mu)) * z(1, mu);
            }
            Lagrangian::new(1, m, body)
        }
        (2, NullData::Two { f, g }) if f.len() == 2 && g.len() == m => {
            f.iter().chain(g).try_for_each(check)?;
            let mut body = Expr::zero();
            for i in 1..=2 {
                for j in 1..=2 {
                    let eps = levi_civita(i, j);
                    if eps == 0 {
                        continue;
                    }
                    let mut inner = f[j - 1].diff(CoordId::X(i));
                    for mu in 1..=m {
                        let lin = g[mu - 1].diff(CoordId::X(i)) - f[i - 1].diff(CoordId::Y(mu));
                        inner += lin * z(j, mu);
                        for s in 1..=m {
                            inner += g[mu - 1].diff(CoordId::Y(s)) * z(i, s) * z(j, mu);
                        }
                    }
                    body += inner.scale(&integer(eps));
                }
            }
            Lagrangian::new(2, m, body)
        }
        _ => Err(Error::BadArity(format!(
            "closed forms exist for n=1 with a function or n=2 with (f1, f2; g1..g{m}); got n={n} with {}",
            match data {
                NullData::One(_) => "a function".to_string(),
                NullData::Two { f, g } => format!("{} f and {} g components", f.len(), g.len()),
            }
        ))),
    }
}

/// `eta = f_i dx_i + g_mu dy_mu` on `U x V` with `n = 2`.
pub fn one_form_from_data(m: usize, f: &[Expr], g: &[Expr]) -> Result<DiffForm> {
    let space = JetSpace::new(2, m, Order::Config)?;
    let mut eta = DiffForm::zero(space, 1);
    for (i, fi) in f.iter().enumerate() {
        eta.add_term(fi.clone(), &[Covector::dx(i + 1)])?;
    }
    for (mu, gm) in g.iter().enumerate() {
        eta.add_term(gm.clone(), &[Covector::dy(mu + 1)])?;
    }
    Ok(eta)
}
