//! Text forms for scalars and polynomials.
//!
//! One small recursive-descent grammar covers all three entry points:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' uint)?
//! atom   := number | 'i' | 's' | 'Z' | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero constants, and `sqrt` only of
//! constants. Values are bivariate polynomials in `s` and `Z`.

use std::collections::BTreeMap;

use dashu_int::UBig;
use dashu_ratio::RBig;

use super::poly::Poly;
use super::scalar::{adjoin_sqrt, Scalar, Tower};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(UBig),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = src.chars().collect();
    let mut k = 0;
    while k < cs.len() {
        let c = cs[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < cs.len() && cs[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = cs[start..k].iter().collect();
            out.push(Tok::Num(
                digits.parse().map_err(|_| Error::Parse(digits.clone()))?,
            ));
        } else if c.is_ascii_alphabetic() {
            let start = k;
            while k < cs.len() && cs[k].is_ascii_alphabetic() {
                k += 1;
            }
            out.push(Tok::Ident(cs[start..k].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            k += 1;
        } else {
            return Err(Error::Parse(format!(
                "unexpected character '{}' in {:?}",
                c, src
            )));
        }
    }
    Ok(out)
}

/// Polynomial in `s` and `Z`: key is `(deg_s, deg_Z)`.
type Bi = BTreeMap<(u32, u32), Scalar>;

fn bi_const(c: Scalar) -> Bi {
    let mut m = Bi::new();
    if !c.is_zero() {
        m.insert((0, 0), c);
    }
    m
}

fn bi_add(a: &Bi, b: &Bi, sign: i64) -> Bi {
    let mut out = a.clone();
    for (k, v) in b {
        let v = if sign < 0 { -v } else { v.clone() };
        let e = out.entry(*k).or_insert_with(Scalar::zero);
        *e = &*e + &v;
        if e.is_zero() {
            out.remove(k);
        }
    }
    out
}

fn bi_mul(a: &Bi, b: &Bi) -> Bi {
    let mut out = Bi::new();
    for ((sa, za), va) in a {
        for ((sb, zb), vb) in b {
            let k = (sa + sb, za + zb);
            let e = out.entry(k).or_insert_with(Scalar::zero);
            *e = &*e + &(va * vb);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn bi_constant_value(a: &Bi) -> Option<Scalar> {
    match a.len() {
        0 => Some(Scalar::zero()),
        1 => a.get(&(0, 0)).cloned(),
        _ => None,
    }
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
    allow_s: bool,
    allow_z: bool,
    tower: Tower,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{} in {:?}", msg, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Bi> {
        let mut acc = if self.eat_op('-') {
            bi_add(&Bi::new(), &self.term()?, -1)
        } else {
            self.eat_op('+');
            self.term()?
        };
        loop {
            if self.eat_op('+') {
                acc = bi_add(&acc, &self.term()?, 1);
            } else if self.eat_op('-') {
                acc = bi_add(&acc, &self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Bi> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = bi_mul(&acc, &self.unary()?);
            } else if self.eat_op('/') {
                let d = self.unary()?;
                let d =
                    bi_constant_value(&d).ok_or_else(|| self.err("division by a non-constant"))?;
                let di = d.inv().map_err(|_| self.err("division by zero"))?;
                acc = bi_mul(&acc, &bi_const(di));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Bi> {
        if self.eat_op('-') {
            let v = self.unary()?;
            return Ok(bi_add(&Bi::new(), &v, -1));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Bi> {
        let base = self.atom()?;
        if self.eat_op('^') {
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    e
                }
                _ => return Err(self.err("expected a non-negative integer exponent")),
            };
            let mut acc = bi_const(Scalar::one());
            for _ in 0..e {
                acc = bi_mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Bi> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(bi_const(Scalar::from_rational(RBig::from(n)))),
            Tok::Op('(') => {
                let v = self.expr()?;
                if !self.eat_op(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(bi_const(Scalar::i())),
                "s" if self.allow_s => Ok([((1, 0), Scalar::one())].into_iter().collect()),
                "Z" if self.allow_z => Ok([((0, 1), Scalar::one())].into_iter().collect()),
                "sqrt" => {
                    if !self.eat_op('(') {
                        return Err(self.err("expected '(' after sqrt"));
                    }
                    let v = self.expr()?;
                    if !self.eat_op(')') {
                        return Err(self.err("expected ')'"));
                    }
                    let c =
                        bi_constant_value(&v).ok_or_else(|| self.err("sqrt of a non-constant"))?;
                    let (tower, root) = adjoin_sqrt(&self.tower, &c)?;
                    self.tower = tower;
                    Ok(bi_const(root))
                }
                "s" | "Z" => Err(self.err(&format!("variable '{}' not allowed here", name))),
                other => Err(self.err(&format!("unknown identifier '{}'", other))),
            },
            Tok::Op(c) => Err(self.err(&format!("unexpected '{}'", c))),
        }
    }
}

fn parse_bi(src: &str, allow_s: bool, allow_z: bool) -> Result<Bi> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        src,
        allow_s,
        allow_z,
        tower: Tower::Rat,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Parses `"a/b"`, `"a/b+c/d*i"` or `"(u)+(v)*sqrt(K)"`.
pub fn parse_scalar(src: &str) -> Result<Scalar> {
    let v = parse_bi(src, false, false)?;
    bi_constant_value(&v).ok_or_else(|| Error::Parse(format!("not a constant: {:?}", src)))
}

/// Parses a polynomial in `s`, e.g. `"3*s^2-1/2*s+4"`. `Z` is rejected.
pub fn parse_poly_s(src: &str) -> Result<Poly> {
    let v = parse_bi(src, true, false)?;
    Ok(bi_to_poly(&v, 0))
}

fn bi_to_poly(v: &Bi, z: u32) -> Poly {
    let deg = v.keys().filter(|(_, zz)| *zz == z).map(|(s, _)| *s).max();
    match deg {
        None => Poly::zero(),
        Some(d) => Poly::new(
            (0..=d)
                .map(|k| v.get(&(k, z)).cloned().unwrap_or_else(Scalar::zero))
                .collect(),
        ),
    }
}

/// Parses a polynomial in `Z` with coefficients in `C[s]`, e.g.
/// `"Z^2-(s^3+1)"`. Returns the coefficient of `Z^k` at index `k`.
/// The input must mention `Z`.
pub fn parse_poly_z(src: &str) -> Result<Vec<Poly>> {
    let v = parse_bi(src, true, true)?;
    let deg = v
        .keys()
        .map(|(_, z)| *z)
        .max()
        .filter(|d| *d > 0)
        .ok_or_else(|| Error::Parse(format!("polynomial in Z expected: {:?}", src)))?;
    Ok((0..=deg).map(|k| bi_to_poly(&v, k)).collect())
}
