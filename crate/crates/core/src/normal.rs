//! Coefficient extraction with respect to the jet coordinates.

use std::collections::BTreeMap;
use std::fmt;

use crate::coord::CoordId;
use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, Monomial};

/// Monomial in the `Z`/`Z2` coordinates only, with positive exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZMonomial(Vec<(CoordId, u32)>);

impl ZMonomial {
    pub fn one() -> Self {
        ZMonomial(Vec::new())
    }

    pub fn from_coords<I: IntoIterator<Item = CoordId>>(coords: I) -> Self {
        let mut map: BTreeMap<CoordId, u32> = BTreeMap::new();
        for c in coords {
            *map.entry(c).or_default() += 1;
        }
        ZMonomial(map.into_iter().collect())
    }

    pub fn factors(&self) -> &[(CoordId, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_expr(&self) -> Expr {
        Expr::from_monomial(Monomial::from_factors(
            self.0
                .iter()
                .map(|(c, e)| (Atom::Coord(*c), *e as i32))
                .collect(),
        ))
    }
}

impl fmt::Display for ZMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (idx, (c, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            write!(f, "{c}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

pub type ZNormalForm = BTreeMap<ZMonomial, Expr>;

/// Splits `e` into z-monomials with coefficients free of `Z`/`Z2`.
///
/// Fails when a jet coordinate occurs inside a function argument, inside a
/// reciprocal, or with a negative exponent.
pub fn z_normal_form(e: &Expr) -> Result<ZNormalForm> {
    let mut out: ZNormalForm = BTreeMap::new();
    for (m, coef) in e.terms() {
        let mut jets = Vec::new();
        let mut rest = Vec::new();
        for (atom, exp) in m.factors() {
            match atom {
                Atom::Coord(c) if c.is_jet() => {
                    if *exp < 0 {
                        return Err(Error::NotPolynomialInJets(format!(
                            "{c} appears with exponent {exp}"
                        )));
                    }
                    jets.push((*c, *exp as u32));
                }
                Atom::Coord(_) => rest.push((atom.clone(), *exp)),
                Atom::Func(_, arg) | Atom::Recip(arg) => {
                    if let Some(c) = arg.coords().into_iter().find(CoordId::is_jet) {
                        return Err(Error::NotPolynomialInJets(format!(
                            "{c} appears inside a non-polynomial factor"
                        )));
                    }
                    rest.push((atom.clone(), *exp));
                }
            }
        }
        let key = ZMonomial(jets);
        let piece = Expr::term(coef.clone(), Monomial::from_factors(rest));
        let slot = out.entry(key).or_default();
        *slot += piece;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Inverse of [`z_normal_form`].
pub fn rebuild(form: &ZNormalForm) -> Expr {
    Expr::sum(form.iter().map(|(m, c)| &m.to_expr() * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::FuncName;

    fn c(id: CoordId) -> Expr {
        Expr::coord(id)
    }

    #[test]
    fn affine_read_off() {
        let e = c(CoordId::Y(1)) + c(CoordId::X(1)) * c(CoordId::Z(1, 1));
        let nf = z_normal_form(&e).unwrap();
        assert_eq!(nf.len(), 2);
        assert_eq!(nf[&ZMonomial::one()], c(CoordId::Y(1)));
        assert_eq!(
            nf[&ZMonomial::from_coords([CoordId::Z(1, 1)])],
            c(CoordId::X(1))
        );
    }

    #[test]
    fn jacobian_determinant() {
        let e =
            c(CoordId::Z(1, 1)) * c(CoordId::Z(2, 2)) - c(CoordId::Z(1, 2)) * c(CoordId::Z(2, 1));
        let nf = z_normal_form(&e).unwrap();
        assert_eq!(nf.len(), 2);
        assert_eq!(
            nf[&ZMonomial::from_coords([CoordId::Z(1, 1), CoordId::Z(2, 2)])],
            Expr::int(1)
        );
        assert_eq!(
            nf[&ZMonomial::from_coords([CoordId::Z(1, 2), CoordId::Z(2, 1)])],
            Expr::int(-1)
        );
        assert_eq!(rebuild(&nf), e);
    }

    #[test]
    fn rejects_jets_inside_functions() {
        let e = Expr::func(FuncName::Sin, c(CoordId::Z(1, 1)));
        assert!(matches!(
            z_normal_form(&e),
            Err(Error::NotPolynomialInJets(_))
        ));
        let e = c(CoordId::Z(1, 1)).pow(-1).unwrap();
        assert!(matches!(
            z_normal_form(&e),
            Err(Error::NotPolynomialInJets(_))
        ));
    }

    #[test]
    fn function_coefficients_are_kept() {
        let s = Expr::func(FuncName::Exp, c(CoordId::Y(1)));
        let e = &s * &c(CoordId::Z(1, 1)) + s.clone();
        let nf = z_normal_form(&e).unwrap();
        assert_eq!(nf[&ZMonomial::one()], s);
        assert_eq!(rebuild(&nf), e);
    }
}
