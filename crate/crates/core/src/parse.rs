//! Expression parsing and printing.
//!
//! Grammar: rational literals `p/q`, two main variables (`t`/`y`,
//! `x`/`y` in curve mode, or a single series variable such as `t` or
//! `u`), the field generator `z`, operators `+ - * / ^` and
//! parentheses. Exponents must be rational literals; `/t^k` is
//! normalized to negative exponents. Laurent mode rejects fractional
//! exponents, series mode allows them on the series variable.

use crate::field::{CycloField, FieldElem};
use crate::hahn::HahnSeries;
use crate::laurent::LaurentPoly;
use crate::rat::Rat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at position {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected {found} at position {pos}, expected {expected}")]
    UnexpectedToken {
        pos: usize,
        found: String,
        expected: String,
    },
    #[error("exponent not allowed here at position {pos}: {detail}")]
    ExponentDomain { pos: usize, detail: String },
    #[error("division at position {pos} requires a nonzero monomial divisor")]
    DivisionDomain { pos: usize },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Num(s.parse().unwrap()), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Ident(s), start));
            }
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            _ => return Err(ParseError::UnexpectedChar { ch: c, pos: i }),
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// A sum of monomials `coeff * v1^e1 * v2^e2` with exact rational
/// exponents; the common value space for all parse targets.
#[derive(Debug, Clone)]
struct MonoSum {
    field: Arc<CycloField>,
    terms: Vec<(Rat, Rat, FieldElem)>, // (e1, e2, coeff), canonical
}

impl MonoSum {
    fn zero(field: &Arc<CycloField>) -> Self {
        MonoSum {
            field: field.clone(),
            terms: vec![],
        }
    }

    fn constant(field: &Arc<CycloField>, c: FieldElem) -> Self {
        let mut s = Self::zero(field);
        if !c.is_zero() {
            s.terms.push((Rat::zero(), Rat::zero(), c));
        }
        s
    }

    fn var(field: &Arc<CycloField>, which: usize) -> Self {
        let mut s = Self::zero(field);
        let (e1, e2) = if which == 0 {
            (Rat::one(), Rat::zero())
        } else {
            (Rat::zero(), Rat::one())
        };
        s.terms.push((e1, e2, FieldElem::one(field)));
        s
    }

    fn normalize(mut self) -> Self {
        self.terms.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        let mut merged: Vec<(Rat, Rat, FieldElem)> = Vec::new();
        for (e1, e2, c) in self.terms {
            match merged.last_mut() {
                Some((f1, f2, acc)) if *f1 == e1 && *f2 == e2 => {
                    *acc = acc.add(&c);
                    if acc.is_zero() {
                        merged.pop();
                    }
                }
                _ => {
                    if !c.is_zero() {
                        merged.push((e1, e2, c));
                    }
                }
            }
        }
        self.terms = merged;
        self
    }

    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        MonoSum {
            field: self.field.clone(),
            terms,
        }
        .normalize()
    }

    fn neg(&self) -> Self {
        MonoSum {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, b, c)| (a.clone(), b.clone(), c.neg()))
                .collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (a1, b1, c1) in &self.terms {
            for (a2, b2, c2) in &other.terms {
                terms.push((a1 + a2, b1 + b2, c1.mul(c2)));
            }
        }
        MonoSum {
            field: self.field.clone(),
            terms,
        }
        .normalize()
    }

    /// Single-monomial inverse, for division.
    fn inverse_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (a, b, c) = &self.terms[0];
        let cinv = c.inv().ok()?;
        Some(MonoSum {
            field: self.field.clone(),
            terms: vec![(-a.clone(), -b.clone(), cinv)],
        })
    }

    fn pow(&self, e: &Rat, pos: usize) -> Result<Self, ParseError> {
        if e.denom().is_one() {
            let n = e.numer();
            let mag: u64 = n.magnitude().try_into().map_err(|_| {
                ParseError::ExponentDomain {
                    pos,
                    detail: "exponent too large".into(),
                }
            })?;
            let mut acc = Self::constant(&self.field, FieldElem::one(&self.field));
            for _ in 0..mag {
                acc = acc.mul(self);
            }
            if n.is_negative() {
                acc = acc.inverse_monomial().ok_or(ParseError::DivisionDomain { pos })?;
            }
            return Ok(acc);
        }
        // fractional exponent: only on a bare monomial with coefficient 1
        if self.terms.len() == 1 && self.terms[0].2.is_one() {
            let (a, b, c) = &self.terms[0];
            return Ok(MonoSum {
                field: self.field.clone(),
                terms: vec![(a * e, b * e, c.clone())],
            });
        }
        Err(ParseError::ExponentDomain {
            pos,
            detail: "fractional exponent on a non-monomial".into(),
        })
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    field: &'a Arc<CycloField>,
    /// main variable names: up to two
    vars: Vec<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_pos(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::UnexpectedToken {
                pos: self.peek_pos(),
                found: format!("{:?}", self.peek()),
                expected: what.into(),
            })
        }
    }

    fn parse_expr(&mut self) -> Result<MonoSum, ParseError> {
        let mut negate = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            negate = true;
        } else if *self.peek() == Tok::Plus {
            self.bump();
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.add(&t);
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.add(&t.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<MonoSum, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f);
                }
                Tok::Slash => {
                    let pos = self.peek_pos();
                    self.bump();
                    let f = self.parse_factor()?;
                    let inv = f
                        .inverse_monomial()
                        .ok_or(ParseError::DivisionDomain { pos })?;
                    acc = acc.mul(&inv);
                }
                // implicit multiplication: `2t`, `t y`, `2(x+1)`
                Tok::Ident(_) | Tok::LParen | Tok::Num(_) => {
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<MonoSum, ParseError> {
        let base = self.parse_atom()?;
        if *self.peek() == Tok::Caret {
            let pos = self.peek_pos();
            self.bump();
            let e = self.parse_exponent()?;
            return base.pow(&e, pos);
        }
        Ok(base)
    }

    /// integer, `-integer`, or parenthesized rational like `(1/2)`.
    fn parse_exponent(&mut self) -> Result<Rat, ParseError> {
        let mut sign = BigInt::one();
        if *self.peek() == Tok::Minus {
            self.bump();
            sign = -sign;
        }
        match self.bump() {
            (Tok::Num(n), _) => Ok(Rat::from_integer(sign * n)),
            (Tok::LParen, _) => {
                let mut inner_sign = sign;
                if *self.peek() == Tok::Minus {
                    self.bump();
                    inner_sign = -inner_sign;
                }
                let num = match self.bump() {
                    (Tok::Num(n), _) => n,
                    (t, pos) => {
                        return Err(ParseError::UnexpectedToken {
                            pos,
                            found: format!("{:?}", t),
                            expected: "rational exponent".into(),
                        })
                    }
                };
                let mut den = BigInt::one();
                if *self.peek() == Tok::Slash {
                    self.bump();
                    den = match self.bump() {
                        (Tok::Num(n), _) => n,
                        (t, pos) => {
                            return Err(ParseError::UnexpectedToken {
                                pos,
                                found: format!("{:?}", t),
                                expected: "denominator".into(),
                            })
                        }
                    };
                }
                self.expect(Tok::RParen, "closing parenthesis")?;
                if den.is_zero() {
                    return Err(ParseError::ExponentDomain {
                        pos: self.peek_pos(),
                        detail: "zero denominator".into(),
                    });
                }
                Ok(Rat::new(inner_sign * num, den))
            }
            (t, pos) => Err(ParseError::UnexpectedToken {
                pos,
                found: format!("{:?}", t),
                expected: "exponent".into(),
            }),
        }
    }

    fn parse_atom(&mut self) -> Result<MonoSum, ParseError> {
        match self.bump() {
            (Tok::Num(n), _) => Ok(MonoSum::constant(
                self.field,
                FieldElem::from_rat(self.field, Rat::from_integer(n)),
            )),
            (Tok::Ident(name), pos) => {
                if let Some(idx) = self.vars.iter().position(|v| *v == name) {
                    Ok(MonoSum::var(self.field, idx))
                } else if name == "z" {
                    Ok(MonoSum::constant(
                        self.field,
                        FieldElem::generator(self.field),
                    ))
                } else {
                    Err(ParseError::UnknownVariable { name, pos })
                }
            }
            (Tok::LParen, _) => {
                let e = self.parse_expr()?;
                self.expect(Tok::RParen, "closing parenthesis")?;
                Ok(e)
            }
            (Tok::Minus, _) => {
                let a = self.parse_factor()?;
                Ok(a.neg())
            }
            (t, pos) => Err(ParseError::UnexpectedToken {
                pos,
                found: format!("{:?}", t),
                expected: "number, variable or parenthesis".into(),
            }),
        }
    }
}

fn parse_to_monosum(
    text: &str,
    vars: &[&str],
    field: &Arc<CycloField>,
) -> Result<MonoSum, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        field,
        vars: vars.iter().map(|s| s.to_string()).collect(),
    };
    let e = p.parse_expr()?;
    if *p.peek() != Tok::End {
        return Err(ParseError::UnexpectedToken {
            pos: p.peek_pos(),
            found: format!("{:?}", p.peek()),
            expected: "end of input".into(),
        });
    }
    Ok(e)
}

/// Parse an element of `k[t, 1/t, y]` (or `k[x, y]` in curve mode).
/// Fractional exponents and negative exponents on the second variable
/// are rejected.
pub fn parse_laurent(
    text: &str,
    t_var: &str,
    y_var: &str,
    field: &Arc<CycloField>,
) -> Result<LaurentPoly, ParseError> {
    let sum = parse_to_monosum(text, &[t_var, y_var], field)?;
    let mut out = LaurentPoly::zero(field);
    for (te, ye, c) in &sum.terms {
        if !te.denom().is_one() {
            return Err(ParseError::ExponentDomain {
                pos: 0,
                detail: format!("fractional exponent {} on {}", te, t_var),
            });
        }
        if !ye.denom().is_one() || ye.is_negative() {
            return Err(ParseError::ExponentDomain {
                pos: 0,
                detail: format!("exponent {} on {} must be a nonnegative integer", ye, y_var),
            });
        }
        let t_exp: i64 = te.numer().try_into().map_err(|_| ParseError::ExponentDomain {
            pos: 0,
            detail: "t exponent out of range".into(),
        })?;
        let y_exp: u32 = ye.numer().try_into().map_err(|_| ParseError::ExponentDomain {
            pos: 0,
            detail: "y exponent out of range".into(),
        })?;
        out = out.add(&LaurentPoly::monomial(field, t_exp, y_exp, c.clone()));
    }
    Ok(out)
}

/// Parse a finite exact Hahn series in a single variable; rational
/// exponents allowed.
pub fn parse_series(
    text: &str,
    var: &str,
    field: &Arc<CycloField>,
) -> Result<HahnSeries, ParseError> {
    let sum = parse_to_monosum(text, &[var], field)?;
    let terms = sum
        .terms
        .into_iter()
        .map(|(e, _, c)| (e, c))
        .collect();
    Ok(HahnSeries::from_terms(field, terms))
}

/// Parse a field element: a polynomial in `z` with rational
/// coefficients.
pub fn parse_field_elem(text: &str, field: &Arc<CycloField>) -> Result<FieldElem, ParseError> {
    let sum = parse_to_monosum(text, &[], field)?;
    let mut acc = FieldElem::zero(field);
    for (_, _, c) in &sum.terms {
        acc = acc.add(c);
    }
    Ok(acc)
}
