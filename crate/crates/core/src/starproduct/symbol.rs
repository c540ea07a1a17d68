//! Exact polynomial phase-space symbols in `(q, p)` with complex coefficients.
//!
//! Symbol grammar (EBNF, whitespace ignored):
//!
//! ```text
//! sum     = product { ("+" | "-") product } ;
//! product = unary { ("*" | "/") unary } ;       (* divisor must be constant *)
//! unary   = "-" unary | power ;
//! power   = atom [ "^" integer ] ;              (* non-negative integer literal *)
//! atom    = number | "q" | "p" | "i" | "(" sum ")" ;
//! ```
//!
//! Printing produces a canonical sum of terms ordered by total degree, then by
//! descending `q` degree; the printed form parses back to the same symbol.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lexer::{describe, tokenize, Cursor, Tok};

/// Monomial exponents `(q degree, p degree)`.
pub type Monomial = (u32, u32);

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolySymbol {
    terms: BTreeMap<Monomial, Complex64>,
}

impl PolySymbol {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: impl Into<Complex64>, q_deg: u32, p_deg: u32) -> Self {
        let mut s = Self::zero();
        s.add_term((q_deg, p_deg), c.into());
        s
    }

    pub fn q() -> Self {
        Self::monomial(1.0, 1, 0)
    }

    pub fn p() -> Self {
        Self::monomial(1.0, 0, 1)
    }

    /// a = (q + i p) / sqrt(2)
    pub fn a() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = Self::monomial(s, 1, 0);
        out.add_term((0, 1), Complex64::new(0.0, s));
        out
    }

    /// conj(a) = (q - i p) / sqrt(2)
    pub fn a_bar() -> Self {
        Self::a().conj()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Complex64)>) -> Self {
        let mut s = Self::zero();
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    fn add_term(&mut self, m: Monomial, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(m).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn coeff(&self, q_deg: u32, p_deg: u32) -> Complex64 {
        self.terms.get(&(q_deg, p_deg)).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree; 0 for constants and for the zero symbol.
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn as_constant(&self) -> Option<Complex64> {
        match self.terms.len() {
            0 => Some(Complex64::new(0.0, 0.0)),
            1 => self.terms.get(&(0, 0)).copied(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self::from_terms(self.terms().map(|(m, v)| (m, v * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a1, b1), c1) in self.terms() {
            for ((a2, b2), c2) in other.terms() {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(1.0);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms().map(|(m, c)| (m, c.conj())))
    }

    /// Mixed partial derivative `d^dq/dq^dq d^dp/dp^dp`.
    pub fn derivative(&self, dq: u32, dp: u32) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in self.terms() {
            if a < dq || b < dp {
                continue;
            }
            let factor = falling(a, dq) * falling(b, dp);
            out.add_term((a - dq, b - dp), c * factor);
        }
        out
    }

    pub fn eval(&self, q: f64, p: f64) -> Complex64 {
        self.terms()
            .map(|((a, b), c)| c * (q.powi(a as i32) * p.powi(b as i32)))
            .sum()
    }

    /// Largest coefficient modulus, 0 for the zero symbol.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn falling(n: u32, k: u32) -> f64 {
    (0..k).map(|j| (n - j) as f64).product()
}

impl FromStr for PolySymbol {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_symbol(text)
    }
}

/// Parses a symbol expression into its expanded canonical polynomial.
pub fn parse_symbol(text: &str) -> Result<PolySymbol> {
    let mut cur = Cursor::new(tokenize(text)?);
    let s = parse_sum(&mut cur)?;
    cur.expect_end()?;
    Ok(s)
}

fn parse_sum(cur: &mut Cursor) -> Result<PolySymbol> {
    let mut acc = parse_product(cur)?;
    loop {
        if cur.eat(&Tok::Plus) {
            acc = acc.add(&parse_product(cur)?);
        } else if cur.eat(&Tok::Minus) {
            acc = acc.sub(&parse_product(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_product(cur: &mut Cursor) -> Result<PolySymbol> {
    let mut acc = parse_unary(cur)?;
    loop {
        if cur.eat(&Tok::Star) {
            acc = acc.mul(&parse_unary(cur)?);
        } else if let Tok::Slash = cur.peek().tok {
            let pos = cur.bump().pos;
            let divisor = parse_unary(cur)?;
            match divisor.as_constant() {
                Some(c) if c != Complex64::new(0.0, 0.0) => acc = acc.scale(c.inv()),
                Some(_) => return Err(Error::parse(pos, "division by zero", &["non-zero constant divisor"])),
                None => {
                    return Err(Error::parse(pos, "division by a non-constant symbol", &["constant divisor"]))
                }
            }
        } else {
            return Ok(acc);
        }
    }
}

fn parse_unary(cur: &mut Cursor) -> Result<PolySymbol> {
    if cur.eat(&Tok::Minus) {
        return Ok(parse_unary(cur)?.scale(-1.0));
    }
    parse_power(cur)
}

fn parse_power(cur: &mut Cursor) -> Result<PolySymbol> {
    let base = parse_atom(cur)?;
    if !cur.eat(&Tok::Caret) {
        return Ok(base);
    }
    let t = cur.bump();
    match t.tok {
        Tok::Num(v) if t.text.bytes().all(|b| b.is_ascii_digit()) && v <= u32::MAX as f64 => {
            Ok(base.pow(v as u32))
        }
        _ => Err(Error::parse(t.pos, format!("unexpected `{}`", describe(&t)), &["non-negative integer exponent"])),
    }
}

fn parse_atom(cur: &mut Cursor) -> Result<PolySymbol> {
    let expected = &["number", "q", "p", "i", "("];
    let t = cur.bump();
    match t.tok {
        Tok::Num(v) => Ok(PolySymbol::constant(v)),
        Tok::LParen => {
            let s = parse_sum(cur)?;
            cur.expect(&Tok::RParen, ")")?;
            Ok(s)
        }
        Tok::Ident(ref name) => match name.as_str() {
            "q" => Ok(PolySymbol::q()),
            "p" => Ok(PolySymbol::p()),
            "i" => Ok(PolySymbol::constant(Complex64::new(0.0, 1.0))),
            _ => Err(Error::parse(t.pos, format!("unknown identifier `{name}`"), expected)),
        },
        _ => Err(Error::parse(t.pos, format!("unexpected `{}`", describe(&t)), expected)),
    }
}

fn write_real(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    // Debug formatting is the shortest representation that round-trips
    write!(f, "{v:?}")
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut order: Vec<(Monomial, Complex64)> = self.terms().collect();
        order.sort_by_key(|((a, b), _)| (a + b, std::cmp::Reverse(*a)));
        for (idx, ((a, b), c)) in order.into_iter().enumerate() {
            let pure_real = c.im == 0.0;
            let negative = pure_real && c.re.is_sign_negative();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let has_monomial = a + b > 0;
            if pure_real {
                let mag = c.re.abs();
                if !(has_monomial && mag == 1.0) {
                    write_real(f, mag)?;
                    if has_monomial {
                        write!(f, "*")?;
                    }
                }
            } else {
                write!(f, "(")?;
                if c.re != 0.0 {
                    write_real(f, c.re)?;
                    write!(f, "{}", if c.im.is_sign_negative() { "-" } else { "+" })?;
                } else if c.im.is_sign_negative() {
                    write!(f, "-")?;
                }
                write_real(f, c.im.abs())?;
                write!(f, "*i)")?;
                if has_monomial {
                    write!(f, "*")?;
                }
            }
            let mut parts = Vec::new();
            for (name, deg) in [("q", a), ("p", b)] {
                match deg {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    d => parts.push(format!("{name}^{d}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
