//! Text grammar for expressions and forms.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' exponent)*
//! exponent:= '-' exponent | primary
//! primary := number | coord | covector | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Coordinates are written `x1`, `y2`, `z1_2` and `z1_2_3`; covectors put a
//! `d` in front. `*` multiplies and wedges. `^` raises a scalar to an integer
//! power, or wedges two forms of positive degree. Numbers, including
//! decimals, are read as exact rationals.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::coord::{CoordId, JetSpace, Order};
use crate::error::{Error, Result};
use crate::expr::{Expr, FuncName, Rational};
use crate::forms::{wedge, Covector, DiffForm};
use crate::jet::PolyMap;
use crate::kernel::Lagrangian;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((
                pos,
                Tok::Num(parse_number(&s).ok_or_else(|| syntax(pos, format!("bad number `{s}`")))?),
            ));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((
                pos,
                Tok::Ident(chars[start..i].iter().map(|(_, c)| c).collect()),
            ));
        } else if "+-*/^()".contains(ch) {
            out.push((pos, Tok::Op(ch)));
            i += 1;
        } else {
            return Err(syntax(pos, format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

fn parse_number(s: &str) -> Option<Rational> {
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Some(Rational::new(numer, denom))
}

enum Ident {
    Coord(CoordId),
    Cov(CoordId),
    Func(FuncName),
}

fn classify(name: &str, pos: usize, n: usize, m: usize) -> Result<Ident> {
    if let Some(f) = FuncName::from_name(name) {
        return Ok(Ident::Func(f));
    }
    let (cov, rest) = match name.strip_prefix('d') {
        Some(r) if r.starts_with(['x', 'y', 'z']) => (true, r),
        _ => (false, name),
    };
    let unknown = || syntax(pos, format!("unknown identifier `{name}`"));
    let letter = rest.chars().next().ok_or_else(unknown)?;
    let idx: Vec<usize> = rest[1..]
        .split('_')
        .map(|p| {
            if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                None
            } else {
                p.parse().ok()
            }
        })
        .collect::<Option<_>>()
        .ok_or_else(unknown)?;
    let c = match (letter, idx.as_slice()) {
        ('x', [i]) => CoordId::X(*i),
        ('y', [mu]) => CoordId::Y(*mu),
        ('z', [i, mu]) => CoordId::Z(*i, *mu),
        ('z', [k, i, mu]) => CoordId::z2(*k, *i, *mu),
        _ => return Err(unknown()),
    };
    if !c.fits(n, m) {
        return Err(Error::IndexOutOfRange {
            coord: name.to_string(),
            n,
            m,
        });
    }
    Ok(if cov { Ident::Cov(c) } else { Ident::Coord(c) })
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    space: JetSpace,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected `{op}`")))
        }
    }

    fn scalar_of(&self, f: &DiffForm) -> Option<Expr> {
        (f.degree() == 0).then(|| f.coefficient(&[]))
    }

    fn expr(&mut self) -> Result<DiffForm> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            let neg = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                return Ok(acc);
            };
            let rhs = self.term()?;
            let rhs = if neg { rhs.neg() } else { rhs };
            acc = acc.add(&rhs).map_err(|_| {
                syntax(
                    pos,
                    format!(
                        "cannot add forms of degree {} and {}",
                        acc.degree(),
                        rhs.degree()
                    ),
                )
            })?;
        }
    }

    fn term(&mut self) -> Result<DiffForm> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = wedge(&acc, &rhs)?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                let d = self
                    .scalar_of(&rhs)
                    .ok_or_else(|| syntax(pos, "divisor must be a scalar"))?;
                acc = acc.scale(&d.pow(-1)?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<DiffForm> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn exponent(&mut self) -> Result<DiffForm> {
        if self.eat('-') {
            Ok(self.exponent()?.neg())
        } else {
            self.primary()
        }
    }

    fn power(&mut self) -> Result<DiffForm> {
        let mut acc = self.primary()?;
        loop {
            let pos = self.pos();
            if !self.eat('^') {
                return Ok(acc);
            }
            let rhs = self.exponent()?;
            acc = match (acc.degree(), rhs.degree()) {
                (0, 0) => {
                    let k = self
                        .scalar_of(&rhs)
                        .and_then(|e| e.as_constant())
                        .filter(|c| c.is_integer())
                        .and_then(|c| c.to_integer().to_i32())
                        .ok_or_else(|| syntax(pos, "exponent must be an integer constant"))?;
                    let base = self.scalar_of(&acc).expect("degree 0");
                    DiffForm::scalar(self.space, base.pow(k)?)?
                }
                (a, b) if a > 0 && b > 0 => wedge(&acc, &rhs)?,
                _ => {
                    return Err(syntax(
                        pos,
                        "`^` needs two scalars or two forms of positive degree",
                    ))
                }
            };
        }
    }

    fn primary(&mut self) -> Result<DiffForm> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(pos, "unexpected end of input"));
        };
        self.at += 1;
        match tok {
            Tok::Num(r) => DiffForm::scalar(self.space, Expr::constant(r)),
            Tok::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Op(c) => Err(syntax(pos, format!("unexpected `{c}`"))),
            Tok::Ident(name) => match classify(&name, pos, self.space.n(), self.space.m())? {
                Ident::Coord(c) => DiffForm::scalar(self.space, Expr::coord(c)),
                Ident::Cov(c) => DiffForm::basis(self.space, &[Covector(c)]),
                Ident::Func(f) => {
                    self.expect('(')?;
                    let arg_pos = self.pos();
                    let arg = self.expr()?;
                    self.expect(')')?;
                    let arg = self
                        .scalar_of(&arg)
                        .ok_or_else(|| syntax(arg_pos, "function argument must be a scalar"))?;
                    DiffForm::scalar(self.space, Expr::func(f, arg))
                }
            },
        }
    }
}

fn run(text: &str, space: JetSpace) -> Result<DiffForm> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        space,
    };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a scalar expression over `F2(n, m)`.
pub fn parse_expr(text: &str, n: usize, m: usize) -> Result<Expr> {
    let space = JetSpace::new(n, m, Order::F2)?;
    let f = run(text, space)?;
    if f.degree() != 0 {
        return Err(syntax(
            0,
            format!("expected a scalar, found a {}-form", f.degree()),
        ));
    }
    Ok(f.coefficient(&[]))
}

/// Parses a form on `space`. A bare `0` takes the expected degree if one is given.
pub fn parse_form(text: &str, space: JetSpace, degree: Option<usize>) -> Result<DiffForm> {
    let f = run(text, space)?;
    match degree {
        Some(d) if f.is_zero() => Ok(DiffForm::zero(space, d)),
        Some(d) if f.degree() != d => Err(Error::BadDegree {
            expected: d,
            found: f.degree(),
        }),
        _ => Ok(f),
    }
}

/// Parses `;`-separated scalar expressions.
pub fn parse_list(text: &str, n: usize, m: usize) -> Result<Vec<Expr>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(';') {
        let e = parse_expr(piece, n, m).map_err(|e| match e {
            Error::Syntax { pos, msg } => Error::Syntax {
                pos: pos + offset,
                msg,
            },
            other => other,
        })?;
        out.push(e);
        offset += piece.len() + 1;
    }
    Ok(out)
}

/// Parses `f: p_1; ...; p_m` (the `f:` prefix is optional) into a map `U -> V`.
pub fn parse_polymap(text: &str, n: usize, m: usize) -> Result<PolyMap> {
    let body = text.trim_start();
    let body = body.strip_prefix("f:").unwrap_or(body);
    let comps = parse_list(body, n, m)?;
    if comps.len() != m {
        return Err(Error::BadArity(format!(
            "expected {m} components, found {}",
            comps.len()
        )));
    }
    PolyMap::new(n, comps)
}

pub fn parse_lagrangian(text: &str, n: usize, m: usize) -> Result<Lagrangian> {
    Lagrangian::new(n, m, parse_expr(text, n, m)?)
}
