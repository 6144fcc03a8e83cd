//! Exterior algebra over jet spaces.
//!
//! A [`DiffForm`] stores one coefficient per strictly increasing tuple of
//! basis covectors. Anything built from an unsorted tuple is folded into
//! that storage with the sign of the sorting permutation.

use std::collections::BTreeMap;
use std::fmt;

use crate::coord::{CoordId, JetSpace, Order};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{prolong, PolyMap};

/// A basis one-form `d c`. Ordered like the underlying coordinate, so
/// `dx < dy < dz < dz2`, then by indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Covector(pub CoordId);

impl Covector {
    pub fn dx(i: usize) -> Self {
        Covector(CoordId::X(i))
    }

    pub fn dy(mu: usize) -> Self {
        Covector(CoordId::Y(mu))
    }

    pub fn dz(i: usize, mu: usize) -> Self {
        Covector(CoordId::Z(i, mu))
    }

    pub fn dz2(k: usize, i: usize, mu: usize) -> Self {
        Covector(CoordId::z2(k, i, mu))
    }

    pub fn coord(&self) -> CoordId {
        self.0
    }
}

impl fmt::Display for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

/// Sorts `v` in place and returns the permutation sign, or `None` when a
/// covector repeats (the wedge vanishes).
pub fn sort_with_sign(v: &mut [Covector]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Projections whose horizontal forms [`is_horizontal`] recognizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// `F1 -> U`: only `dx` covectors allowed.
    Pi1,
    /// `F1 -> U x V`: `dx` and `dy` allowed.
    Pi10,
    /// `F2 -> U x V`: `dx` and `dy` allowed.
    Pi20,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffForm {
    space: JetSpace,
    degree: usize,
    terms: BTreeMap<Vec<Covector>, Expr>,
}

impl DiffForm {
    pub fn zero(space: JetSpace, degree: usize) -> Self {
        DiffForm {
            space,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A 0-form.
    pub fn scalar(space: JetSpace, f: Expr) -> Result<Self> {
        let mut out = DiffForm::zero(space, 0);
        out.add_term(f, &[])?;
        Ok(out)
    }

    /// `coef * c_1 ^ ... ^ c_p` for covectors in any order.
    pub fn monomial(space: JetSpace, coef: Expr, covectors: &[Covector]) -> Result<Self> {
        let mut out = DiffForm::zero(space, covectors.len());
        out.add_term(coef, covectors)?;
        Ok(out)
    }

    pub fn basis(space: JetSpace, covectors: &[Covector]) -> Result<Self> {
        DiffForm::monomial(space, Expr::one(), covectors)
    }

    /// `dx_1 ^ ... ^ dx_n`.
    pub fn volume(space: JetSpace) -> Self {
        let cov: Vec<Covector> = (1..=space.n()).map(Covector::dx).collect();
        DiffForm::basis(space, &cov).expect("dx covectors belong to every space")
    }

    pub fn space(&self) -> JetSpace {
        self.space
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Covector>, Expr> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, covectors: &[Covector]) -> Expr {
        let mut key = covectors.to_vec();
        match sort_with_sign(&mut key) {
            None => Expr::zero(),
            Some(sign) => self
                .terms
                .get(&key)
                .map(|c| c.scale(&crate::expr::integer(sign as i64)))
                .unwrap_or_default(),
        }
    }

    /// Coefficient of `dx_1 ^ ... ^ dx_n`.
    pub fn volume_coefficient(&self) -> Expr {
        let cov: Vec<Covector> = (1..=self.space.n()).map(Covector::dx).collect();
        self.coefficient(&cov)
    }

    /// Adds `coef * c_1 ^ ... ^ c_p`, sign-normalizing the tuple.
    pub fn add_term(&mut self, coef: Expr, covectors: &[Covector]) -> Result<()> {
        if covectors.len() != self.degree {
            return Err(Error::BadDegree {
                expected: self.degree,
                found: covectors.len(),
            });
        }
        for c in covectors {
            if !self.space.contains(c.0) {
                return Err(Error::NotInSpace {
                    coord: c.0,
                    space: self.space,
                });
            }
        }
        if let Some(c) = coef.coords().into_iter().find(|c| !self.space.contains(*c)) {
            return Err(Error::NotInSpace {
                coord: c,
                space: self.space,
            });
        }
        self.add_term_unchecked(coef, covectors);
        Ok(())
    }

    fn add_term_unchecked(&mut self, coef: Expr, covectors: &[Covector]) {
        if coef.is_zero() {
            return;
        }
        let mut key = covectors.to_vec();
        let Some(sign) = sort_with_sign(&mut key) else {
            return;
        };
        let coef = if sign < 0 { -coef } else { coef };
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &DiffForm) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(self.space, other.space));
        }
        if self.degree != other.degree {
            return Err(Error::BadDegree {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term_unchecked(v.clone(), k);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffForm) -> Result<DiffForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffForm {
        self.map_coefficients(|c| -c)
    }

    /// Multiplies every coefficient by `f`; `f` must live on the form's space.
    pub fn scale(&self, f: &Expr) -> Result<DiffForm> {
        if let Some(c) = f.coords().into_iter().find(|c| !self.space.contains(*c)) {
            return Err(Error::NotInSpace {
                coord: c,
                space: self.space,
            });
        }
        Ok(self.map_coefficients(|c| c * f))
    }

    fn map_coefficients<F: Fn(&Expr) -> Expr>(&self, f: F) -> DiffForm {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), f(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        DiffForm {
            space: self.space,
            degree: self.degree,
            terms,
        }
    }

    /// Same form viewed on a higher-order space with the same dimensions.
    pub fn lift(&self, order: Order) -> Result<DiffForm> {
        if order < self.space.order() {
            return Err(Error::OrderExceeded(format!(
                "cannot restrict a form on {} to {order}",
                self.space
            )));
        }
        Ok(DiffForm {
            space: self.space.with_order(order),
            ..self.clone()
        })
    }

    /// Views the form on a lower-order space when every coordinate it uses
    /// belongs there.
    pub fn restrict(&self, order: Order) -> Result<DiffForm> {
        let target = self.space.with_order(order);
        for (k, v) in &self.terms {
            for c in k.iter().map(|c| c.0).chain(v.coords()) {
                if !target.contains(c) {
                    return Err(Error::NotInSpace {
                        coord: c,
                        space: target,
                    });
                }
            }
        }
        Ok(DiffForm {
            space: target,
            ..self.clone()
        })
    }

    /// Replaces each covector by a 1-form and each coefficient through
    /// `coef`, multiplying out in tuple order.
    fn map_covectors<C, I>(&self, target: JetSpace, coef: C, image: I) -> Result<DiffForm>
    where
        C: Fn(&Expr) -> Result<Expr>,
        I: Fn(Covector) -> Result<DiffForm>,
    {
        let mut cache: BTreeMap<Covector, DiffForm> = BTreeMap::new();
        let mut out = DiffForm::zero(target, self.degree);
        for (key, c) in &self.terms {
            let mut acc = DiffForm::scalar(target, coef(c)?)?;
            for cov in key {
                if !cache.contains_key(cov) {
                    cache.insert(*cov, image(*cov)?);
                }
                acc = wedge(&acc, &cache[cov])?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (key, coef)) in self.terms.iter().enumerate() {
            let basis: Vec<String> = key.iter().map(ToString::to_string).collect();
            let basis = basis.join("^");
            let single = coef.num_terms() == 1;
            let negative = single
                && coef
                    .terms()
                    .next()
                    .map(|(_, c)| num_traits::Signed::is_negative(c))
                    .unwrap_or(false);
            let mag = if negative { -coef } else { coef.clone() };
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if key.is_empty() {
                if single {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            } else if mag == Expr::one() {
                f.write_str(&basis)?;
            } else if single {
                write!(f, "{mag}*{basis}")?;
            } else {
                write!(f, "({mag})*{basis}")?;
            }
        }
        Ok(())
    }
}

/// Exterior product.
pub fn wedge(a: &DiffForm, b: &DiffForm) -> Result<DiffForm> {
    if a.space != b.space {
        return Err(Error::SpaceMismatch(a.space, b.space));
    }
    let mut out = DiffForm::zero(a.space, a.degree + b.degree);
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            let mut key = ka.clone();
            key.extend_from_slice(kb);
            out.add_term_unchecked(ca * cb, &key);
        }
    }
    Ok(out)
}

/// Exterior derivative: `d(f du_I) = sum_c (df/dc) dc ^ du_I`.
pub fn exterior_d(a: &DiffForm) -> DiffForm {
    let mut out = DiffForm::zero(a.space, a.degree + 1);
    for (key, coef) in &a.terms {
        for c in coef.coords() {
            let partial = coef.diff(c);
            if partial.is_zero() {
                continue;
            }
            let mut tuple = Vec::with_capacity(key.len() + 1);
            tuple.push(Covector(c));
            tuple.extend_from_slice(key);
            out.add_term_unchecked(partial, &tuple);
        }
    }
    out
}

/// `omega_mu = dy_mu - z_{j mu} dx_j` on `F1` (or `F2`).
pub fn contact(space: JetSpace, mu: usize) -> Result<DiffForm> {
    if space.order() < Order::F1 {
        return Err(Error::OrderExceeded(format!(
            "contact forms need F1, got {space}"
        )));
    }
    let mut out = DiffForm::basis(space, &[Covector::dy(mu)])?;
    for j in 1..=space.n() {
        out.add_term(-Expr::coord(CoordId::Z(j, mu)), &[Covector::dx(j)])?;
    }
    Ok(out)
}

/// `dx_1 ^ ... ^ dx_n` with slot `s_a` replaced by the 1-form `pieces[a]`.
fn slotted(space: JetSpace, slots: &[usize], pieces: &[DiffForm]) -> Result<DiffForm> {
    let mut acc = DiffForm::scalar(space, Expr::one())?;
    for i in 1..=space.n() {
        let factor = match slots.iter().position(|&s| s == i) {
            Some(a) => pieces[a].clone(),
            None => DiffForm::basis(space, &[Covector::dx(i)])?,
        };
        acc = wedge(&acc, &factor)?;
    }
    Ok(acc)
}

/// `omega^i_sigma = dx_1 ^ ... ^ omega_sigma (slot i) ^ ... ^ dx_n`.
pub fn contact_slot(space: JetSpace, i: usize, sigma: usize) -> Result<DiffForm> {
    slotted(space, &[i], &[contact(space, sigma)?])
}

/// `dx_1 ^ ... ^ dx_n` with `dy_{sigma_a}` in slot `s_a`.
pub fn slot_form(space: JetSpace, slots: &[usize], sigmas: &[usize]) -> Result<DiffForm> {
    if slots.len() != sigmas.len() {
        return Err(Error::BadArity(format!(
            "{} slots for {} fibre indices",
            slots.len(),
            sigmas.len()
        )));
    }
    let pieces = sigmas
        .iter()
        .map(|&s| DiffForm::basis(space, &[Covector::dy(s)]))
        .collect::<Result<Vec<_>>>()?;
    slotted(space, slots, &pieces)
}

/// True when no stored covector is vertical over the projection.
pub fn is_horizontal(a: &DiffForm, target: Projection) -> bool {
    a.terms.keys().flatten().all(|c| match target {
        Projection::Pi1 => matches!(c.0, CoordId::X(_)),
        Projection::Pi10 | Projection::Pi20 => matches!(c.0, CoordId::X(_) | CoordId::Y(_)),
    })
}

/// The horizontalization `h`: substitutes `dy_mu -> z_{j mu} dx_j`.
///
/// Forms on `U` or `U x V` are lifted to `F1` first. Fails on any `dz`
/// covector.
pub fn horizontalize(a: &DiffForm) -> Result<DiffForm> {
    if let Some(c) = a.terms.keys().flatten().find(|c| c.0.is_jet()) {
        return Err(Error::NotHorizontal(c.0));
    }
    let target = a.space.with_order(a.space.order().max(Order::F1));
    a.map_covectors(
        target,
        |c| Ok(c.clone()),
        |cov| match cov.0 {
            CoordId::Y(mu) => {
                let mut img = DiffForm::zero(target, 1);
                for j in 1..=target.n() {
                    img.add_term(Expr::coord(CoordId::Z(j, mu)), &[Covector::dx(j)])?;
                }
                Ok(img)
            }
            _ => DiffForm::basis(target, &[cov]),
        },
    )
}

/// Pullback `jf^* a` to a form on `U`.
pub fn pullback_along_jet(a: &DiffForm, f: &PolyMap) -> Result<DiffForm> {
    let space = a.space;
    if f.n() != space.n() || f.m() != space.m() {
        return Err(Error::BadArity(format!(
            "map with n={}, m={} cannot pull back a form on {space}",
            f.n(),
            f.m()
        )));
    }
    let base = space.with_order(Order::Base);
    let sub = prolong(f, 2)?;
    let grad = |g: &Expr| -> Result<DiffForm> {
        let mut img = DiffForm::zero(base, 1);
        for j in 1..=base.n() {
            img.add_term(g.diff(CoordId::X(j)), &[Covector::dx(j)])?;
        }
        Ok(img)
    };
    a.map_covectors(
        base,
        |c| sub.apply(c),
        |cov| match cov.0 {
            CoordId::X(i) => DiffForm::basis(base, &[Covector::dx(i)]),
            CoordId::Y(mu) => grad(&f.components()[mu - 1]),
            CoordId::Z(i, mu) => grad(&f.first(i, mu)),
            CoordId::Z2(k, i, mu) => grad(&f.second(k, i, mu)),
        },
    )
}
