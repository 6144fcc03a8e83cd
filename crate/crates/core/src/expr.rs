//! Exact symbolic expressions over jet coordinates.
//!
//! An [`Expr`] is kept in a canonical sum-of-monomials form with exact
//! rational coefficients. Monomials are products of [`Atom`]s raised to
//! nonzero integer powers, where an atom is a coordinate, an elementary
//! function applied to a (canonical) expression, or the reciprocal of a sum.
//! Every constructor and operation renormalizes, so two expressions that are
//! equal as elements of that Laurent polynomial ring compare equal
//! structurally. Identities that need function-specific rewriting
//! (`sin^2 + cos^2 = 1`) are out of reach of the normal form and are left to
//! the sampling test in [`crate::zero`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coord::CoordId;
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FuncName {
    Sin,
    Cos,
    Exp,
    Log,
}

impl FuncName {
    pub fn name(&self) -> &'static str {
        match self {
            FuncName::Sin => "sin",
            FuncName::Cos => "cos",
            FuncName::Exp => "exp",
            FuncName::Log => "log",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "sin" => Some(FuncName::Sin),
            "cos" => Some(FuncName::Cos),
            "exp" => Some(FuncName::Exp),
            "log" => Some(FuncName::Log),
            _ => None,
        }
    }
}

/// Multiplicative generator of the expression ring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Coord(CoordId),
    Func(FuncName, Arc<Expr>),
    /// `1/p` for a sum `p` of at least two terms whose leading coefficient is 1.
    Recip(Arc<Expr>),
}

impl Atom {
    fn contains(&self, c: CoordId) -> bool {
        match self {
            Atom::Coord(d) => *d == c,
            Atom::Func(_, arg) | Atom::Recip(arg) => arg.depends_on(c),
        }
    }

    fn collect_coords(&self, out: &mut BTreeSet<CoordId>) {
        match self {
            Atom::Coord(c) => {
                out.insert(*c);
            }
            Atom::Func(_, arg) | Atom::Recip(arg) => arg.collect_coords(out),
        }
    }

    /// Derivative of the atom itself (exponent handled by the caller).
    fn diff(&self, c: CoordId) -> Expr {
        match self {
            Atom::Coord(d) => {
                if *d == c {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Atom::Func(f, arg) => {
                let inner = arg.diff(c);
                if inner.is_zero() {
                    return Expr::zero();
                }
                let outer = match f {
                    FuncName::Sin => Expr::func(FuncName::Cos, (**arg).clone()),
                    FuncName::Cos => -Expr::func(FuncName::Sin, (**arg).clone()),
                    FuncName::Exp => Expr::func(FuncName::Exp, (**arg).clone()),
                    // arg depends on c, so it is not the zero expression
                    FuncName::Log => arg.pow(-1).expect("nonconstant argument"),
                };
                outer * inner
            }
            Atom::Recip(p) => {
                let inner = p.diff(c);
                if inner.is_zero() {
                    return Expr::zero();
                }
                let sq = Expr::from_monomial(Monomial(vec![(self.clone(), 2)]));
                -(sq * inner)
            }
        }
    }
}

/// Product of atoms with nonzero integer exponents, sorted by atom.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Atom, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, i32)] {
        &self.0
    }

    pub fn from_factors(mut factors: Vec<(Atom, i32)>) -> Self {
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Atom, i32)> = Vec::with_capacity(factors.len());
        for (a, e) in factors {
            match out.last_mut() {
                Some((last, le)) if *last == a => *le += e,
                _ => out.push((a, e)),
            }
        }
        out.retain(|(_, e)| *e != 0);
        Monomial(out)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Sum of exponents over coordinate atoms only.
    pub fn coord_degree(&self) -> i32 {
        self.0
            .iter()
            .filter(|(a, _)| matches!(a, Atom::Coord(_)))
            .map(|(_, e)| *e)
            .sum()
    }

    /// Polynomial in coordinates: only coordinate atoms with positive exponents.
    pub fn is_polynomial(&self) -> bool {
        self.0
            .iter()
            .all(|(a, e)| matches!(a, Atom::Coord(_)) && *e > 0)
    }

    pub fn exponent_of(&self, c: CoordId) -> i32 {
        self.0
            .iter()
            .find(|(a, _)| *a == Atom::Coord(c))
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

/// Exact expression in canonical sum-of-monomials form.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    terms: BTreeMap<Monomial, Rational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Expr { terms }
    }

    pub fn int(v: i64) -> Self {
        Expr::constant(integer(v))
    }

    pub fn coord(c: CoordId) -> Self {
        Expr::from_monomial(Monomial(vec![(Atom::Coord(c), 1)]))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Expr::term(Rational::one(), m)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    /// Applies an elementary function. Folds only the exact values at zero
    /// (`sin 0`, `cos 0`, `exp 0`) and `log 1`.
    pub fn func(f: FuncName, arg: Expr) -> Self {
        match f {
            FuncName::Sin if arg.is_zero() => return Expr::zero(),
            FuncName::Cos | FuncName::Exp if arg.is_zero() => return Expr::one(),
            FuncName::Log if arg == Expr::one() => return Expr::zero(),
            _ => {}
        }
        Expr::from_monomial(Monomial(vec![(Atom::Func(f, Arc::new(arg)), 1)]))
    }

    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Self {
        let mut acc = Expr::zero();
        for e in items {
            acc += e;
        }
        acc
    }

    pub fn product<I: IntoIterator<Item = Expr>>(items: I) -> Self {
        items.into_iter().fold(Expr::one(), |acc, e| acc * e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn mul_ref(&self, other: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Integer power. Negative powers of a single term invert it directly;
    /// negative powers of a sum become a reciprocal atom.
    pub fn pow(&self, k: i32) -> Result<Expr> {
        if k >= 0 {
            let mut acc = Expr::one();
            let mut base = self.clone();
            let mut k = k as u32;
            while k > 0 {
                if k & 1 == 1 {
                    acc = acc.mul_ref(&base);
                }
                k >>= 1;
                if k > 0 {
                    base = base.mul_ref(&base);
                }
            }
            return Ok(acc);
        }
        match self.terms.len() {
            0 => Err(Error::DivisionByZero),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                let inv_c = c.recip();
                let mut out = Expr::constant(num_traits::pow::Pow::pow(&inv_c, (-k) as u32));
                let mut plain = Vec::new();
                for (a, e) in m.factors() {
                    match a {
                        // (1/p)^(e*k) with e*k < 0 is p^(-e*k)
                        Atom::Recip(p) => out = out.mul_ref(&p.pow(-e * k)?),
                        _ => plain.push((a.clone(), e * k)),
                    }
                }
                Ok(out.mul_ref(&Expr::from_monomial(Monomial::from_factors(plain))))
            }
            _ => {
                let (_, lead) = self.terms.iter().next().unwrap();
                let lead = lead.clone();
                let normalized = self.scale(&lead.recip());
                let atom = Atom::Recip(Arc::new(normalized));
                let c = num_traits::pow::Pow::pow(&lead.recip(), (-k) as u32);
                Ok(Expr::term(c, Monomial(vec![(atom, -k)])))
            }
        }
    }

    /// Exact partial derivative; distinct coordinates are independent.
    pub fn diff(&self, c: CoordId) -> Expr {
        let mut out = Expr::zero();
        for (m, coef) in &self.terms {
            let factors = m.factors();
            for (idx, (atom, e)) in factors.iter().enumerate() {
                if !atom.contains(c) {
                    continue;
                }
                let d_atom = atom.diff(c);
                if d_atom.is_zero() {
                    continue;
                }
                let mut rest: Vec<(Atom, i32)> = factors.to_vec();
                rest[idx].1 -= 1;
                if rest[idx].1 == 0 {
                    rest.remove(idx);
                }
                let k = coef * integer(*e as i64);
                let part = Expr::term(k, Monomial(rest)).mul_ref(&d_atom);
                out += part;
            }
        }
        out
    }

    pub fn depends_on(&self, c: CoordId) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors().iter().any(|(a, _)| a.contains(c)))
    }

    /// All coordinates that occur anywhere, including inside function arguments.
    pub fn coords(&self) -> BTreeSet<CoordId> {
        let mut out = BTreeSet::new();
        self.collect_coords(&mut out);
        out
    }

    fn collect_coords(&self, out: &mut BTreeSet<CoordId>) {
        for m in self.terms.keys() {
            for (a, _) in m.factors() {
                a.collect_coords(out);
            }
        }
    }

    /// True when the expression is a polynomial in its coordinates (no
    /// functions, reciprocals or negative powers).
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    pub fn has_functions(&self) -> bool {
        self.terms.keys().any(|m| {
            m.factors()
                .iter()
                .any(|(a, _)| !matches!(a, Atom::Coord(_)))
        })
    }

    /// Simultaneous substitution; unbound coordinates pass through.
    pub fn substitute(&self, bindings: &BTreeMap<CoordId, Expr>) -> Result<Expr> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut out = Expr::zero();
        for (m, coef) in &self.terms {
            let mut acc = Expr::constant(coef.clone());
            let mut untouched = Vec::new();
            for (atom, e) in m.factors() {
                match atom {
                    Atom::Coord(c) => match bindings.get(c) {
                        Some(v) => acc = acc.mul_ref(&v.pow(*e)?),
                        None => untouched.push((atom.clone(), *e)),
                    },
                    Atom::Func(f, arg) => {
                        let arg2 = arg.substitute(bindings)?;
                        if arg2 == **arg {
                            untouched.push((atom.clone(), *e));
                        } else {
                            acc = acc.mul_ref(&Expr::func(*f, arg2).pow(*e)?);
                        }
                    }
                    Atom::Recip(p) => {
                        let p2 = p.substitute(bindings)?;
                        if p2 == **p {
                            untouched.push((atom.clone(), *e));
                        } else {
                            acc = acc.mul_ref(&p2.pow(-*e)?);
                        }
                    }
                }
            }
            out += acc.mul_ref(&Expr::from_monomial(Monomial(untouched)));
        }
        Ok(out)
    }

    /// Floating-point evaluation. `lookup` supplies coordinate values.
    pub fn eval_with<F>(&self, lookup: &F) -> Result<f64>
    where
        F: Fn(CoordId) -> Option<f64>,
    {
        let mut total = 0.0;
        for (m, coef) in &self.terms {
            let mut v = coef.to_f64().unwrap_or(f64::NAN);
            for (atom, e) in m.factors() {
                let base = match atom {
                    Atom::Coord(c) => {
                        lookup(*c).ok_or_else(|| Error::EvalDomain(format!("no value for {c}")))?
                    }
                    Atom::Func(f, arg) => {
                        let a = arg.eval_with(lookup)?;
                        match f {
                            FuncName::Sin => a.sin(),
                            FuncName::Cos => a.cos(),
                            FuncName::Exp => a.exp(),
                            FuncName::Log => {
                                if a <= 0.0 {
                                    return Err(Error::EvalDomain(format!("log of {a}")));
                                }
                                a.ln()
                            }
                        }
                    }
                    Atom::Recip(p) => {
                        let a = p.eval_with(lookup)?;
                        if a.abs() < 1e-12 {
                            return Err(Error::EvalDomain("reciprocal of zero".into()));
                        }
                        1.0 / a
                    }
                };
                if *e < 0 && base.abs() < 1e-12 {
                    return Err(Error::EvalDomain(format!("negative power of {base}")));
                }
                v *= base.powi(*e);
            }
            total += v;
        }
        if !total.is_finite() {
            return Err(Error::EvalDomain("non-finite value".into()));
        }
        Ok(total)
    }

    pub fn eval(&self, point: &BTreeMap<CoordId, f64>) -> Result<f64> {
        self.eval_with(&|c| point.get(&c).copied())
    }
}

impl From<CoordId> for Expr {
    fn from(c: CoordId) -> Self {
        Expr::coord(c)
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::int(v)
    }
}

impl AddAssign for Expr {
    fn add_assign(&mut self, rhs: Expr) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, rhs: Expr) -> Expr {
        self += rhs;
        self
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(mut self) -> Expr {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        self.mul_ref(&rhs)
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        self.mul_ref(rhs)
    }
}

fn fmt_atom(f: &mut fmt::Formatter<'_>, atom: &Atom, e: i32) -> fmt::Result {
    match atom {
        Atom::Coord(c) => write!(f, "{c}")?,
        Atom::Func(name, arg) => write!(f, "{}({})", name.name(), arg)?,
        Atom::Recip(p) => {
            // stored as 1/p, so (1/p)^e prints as p^(-e)
            return write!(f, "({p})^(-{e})");
        }
    }
    if e < 0 {
        write!(f, "^({e})")
    } else if e > 1 {
        write!(f, "^{e}")
    } else {
        Ok(())
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    for (idx, (atom, e)) in m.factors().iter().enumerate() {
        if idx > 0 {
            f.write_str("*")?;
        }
        fmt_atom(f, atom, *e)?;
    }
    Ok(())
}

fn fmt_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                fmt_rational(f, &mag)?;
            } else {
                if !mag.is_one() {
                    fmt_rational(f, &mag)?;
                    f.write_str("*")?;
                }
                fmt_monomial(f, m)?;
            }
        }
        Ok(())
    }
}
