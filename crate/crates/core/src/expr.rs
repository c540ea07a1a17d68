//! Real-valued expressions in the single variable `n`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" unary)?
//! atom    := number | "n" | func "(" expr ")" | "(" expr ")"
//! func    := "sqrt" | "exp" | "ln"
//! number  := digits ["." digits] [("e" | "E") ["+" | "-"] digits]
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-n^2`
//! reads as `-(n^2)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::lexer::{describe, tokenize, Cursor, Tok};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut cur = Cursor::new(tokenize(src)?);
        let e = parse_expr(&mut cur)?;
        cur.expect_end()?;
        Ok(e)
    }

    pub fn eval(&self, n: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => n,
            Expr::Neg(a) => -a.eval(n),
            Expr::Add(a, b) => a.eval(n) + b.eval(n),
            Expr::Sub(a, b) => a.eval(n) - b.eval(n),
            Expr::Mul(a, b) => a.eval(n) * b.eval(n),
            Expr::Div(a, b) => a.eval(n) / b.eval(n),
            Expr::Pow(a, b) => pow(a.eval(n), b, n),
            Expr::Sqrt(a) => a.eval(n).sqrt(),
            Expr::Exp(a) => a.eval(n).exp(),
            Expr::Ln(a) => a.eval(n).ln(),
        }
    }

    fn is_const(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Sqrt(a) | Expr::Exp(a) | Expr::Ln(a) => a.is_const(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.is_const() && b.is_const()
            }
        }
    }

    /// Symbolic derivative with respect to `n`. Constant subtrees collapse to zero.
    pub fn derivative(&self) -> Expr {
        use Expr::*;
        if self.is_const() {
            return Num(0.0);
        }
        let b = |e: Expr| Box::new(e);
        match self {
            Num(_) => Num(0.0),
            Var => Num(1.0),
            Neg(a) => Neg(b(a.derivative())),
            Add(x, y) => Add(b(x.derivative()), b(y.derivative())),
            Sub(x, y) => Sub(b(x.derivative()), b(y.derivative())),
            Mul(x, y) => Add(
                b(Mul(b(x.derivative()), y.clone())),
                b(Mul(x.clone(), b(y.derivative()))),
            ),
            Div(x, y) => Div(
                b(Sub(
                    b(Mul(b(x.derivative()), y.clone())),
                    b(Mul(x.clone(), b(y.derivative()))),
                )),
                b(Mul(y.clone(), y.clone())),
            ),
            Pow(x, y) if y.is_const() => Mul(
                b(Mul(y.clone(), b(Pow(x.clone(), b(Sub(y.clone(), b(Num(1.0)))))))),
                b(x.derivative()),
            ),
            // d(x^y) = x^y (y' ln x + y x'/x)
            Pow(x, y) => Mul(
                b(self.clone()),
                b(Add(
                    b(Mul(b(y.derivative()), b(Ln(x.clone())))),
                    b(Div(b(Mul(y.clone(), b(x.derivative()))), x.clone())),
                )),
            ),
            Sqrt(x) => Div(b(x.derivative()), b(Mul(b(Num(2.0)), b(self.clone())))),
            Exp(x) => Mul(b(self.clone()), b(x.derivative())),
            Ln(x) => Div(b(x.derivative()), x.clone()),
        }
    }
}

fn pow(base: f64, exponent: &Expr, n: f64) -> f64 {
    if exponent.is_const() {
        let e = exponent.eval(n);
        if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
            return base.powi(e as i32);
        }
        return base.powf(e);
    }
    base.powf(exponent.eval(n))
}

fn parse_expr(cur: &mut Cursor) -> Result<Expr> {
    let mut lhs = parse_term(cur)?;
    loop {
        if cur.eat(&Tok::Plus) {
            lhs = Expr::Add(Box::new(lhs), Box::new(parse_term(cur)?));
        } else if cur.eat(&Tok::Minus) {
            lhs = Expr::Sub(Box::new(lhs), Box::new(parse_term(cur)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_term(cur: &mut Cursor) -> Result<Expr> {
    let mut lhs = parse_unary(cur)?;
    loop {
        if cur.eat(&Tok::Star) {
            lhs = Expr::Mul(Box::new(lhs), Box::new(parse_unary(cur)?));
        } else if cur.eat(&Tok::Slash) {
            lhs = Expr::Div(Box::new(lhs), Box::new(parse_unary(cur)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_unary(cur: &mut Cursor) -> Result<Expr> {
    if cur.eat(&Tok::Minus) {
        return Ok(Expr::Neg(Box::new(parse_unary(cur)?)));
    }
    parse_power(cur)
}

fn parse_power(cur: &mut Cursor) -> Result<Expr> {
    let base = parse_atom(cur)?;
    if cur.eat(&Tok::Caret) {
        let exp = parse_unary(cur)?;
        return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
    }
    Ok(base)
}

const ATOM_START: &[&str] = &["number", "n", "sqrt", "exp", "ln", "("];

fn parse_atom(cur: &mut Cursor) -> Result<Expr> {
    let t = cur.bump();
    match t.tok {
        Tok::Num(v) => Ok(Expr::Num(v)),
        Tok::LParen => {
            let e = parse_expr(cur)?;
            cur.expect(&Tok::RParen, ")")?;
            Ok(e)
        }
        Tok::Ident(ref name) => match name.as_str() {
            "n" => Ok(Expr::Var),
            "sqrt" | "exp" | "ln" => {
                cur.expect(&Tok::LParen, "(")?;
                let arg = Box::new(parse_expr(cur)?);
                cur.expect(&Tok::RParen, ")")?;
                Ok(match name.as_str() {
                    "sqrt" => Expr::Sqrt(arg),
                    "exp" => Expr::Exp(arg),
                    _ => Expr::Ln(arg),
                })
            }
            _ => Err(Error::parse(t.pos, format!("unknown identifier `{name}`"), ATOM_START)),
        },
        _ => Err(Error::parse(t.pos, format!("unexpected `{}`", describe(&t)), ATOM_START)),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var => write!(f, "n"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(a, b) => write!(f, "({a}^{b})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Ln(a) => write!(f, "ln({a})"),
        }
    }
}
