//! Deformation functions f(n) of the generalized annihilation operator `a f(n)`,
//! together with the quantities derived from them: the f-factorial, the star-product
//! amplitude F(n), the commutator target and the deformed oscillator spectrum.
//!
//! Every deformation is defined for real `n >= 0`, since the phase-space symbols
//! substitute `n -> (q^2 + p^2) / (2 hbar)`.
//!
//! Mini-language accepted by [`Deformation::from_str`]:
//!
//! ```text
//! identity            f(n) = 1
//! sqrt_n              f(n) = sqrt(n)
//! qdef:q=<real>       f(n) = sqrt([n]_q / n),  [n]_q = (q^n - q^-n) / (q - q^-1)
//! expr:<expression>   f(n) given by an expression in n (see `expr` module grammar)
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expr::Expr;

/// Default truncation limit for the coherent-state normalization series.
pub const DEFAULT_SERIES_N_MAX: usize = 1000;
/// Default relative tolerance for the coherent-state normalization series.
pub const DEFAULT_SERIES_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum Deformation {
    Identity,
    SqrtN,
    /// Symmetric q-deformation; `q > 0`.
    QDeformed { q: f64 },
    Expr { source: String, expr: Expr, derivative: Expr },
}

impl Deformation {
    pub fn qdef(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidArgument(format!("qdef requires q > 0, got {q}")));
        }
        Ok(Deformation::QDeformed { q })
    }

    pub fn expr(source: &str) -> Result<Self> {
        let expr = Expr::parse(source)?;
        let derivative = expr.derivative();
        Ok(Deformation::Expr { source: source.trim().to_string(), expr, derivative })
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Deformation::Identity)
    }

    /// The sample deformations exercised by the verification suite.
    pub fn registry() -> Vec<Deformation> {
        vec![
            Deformation::Identity,
            Deformation::SqrtN,
            Deformation::QDeformed { q: 1.2 },
            Deformation::expr("sqrt(1+0.1*n)").expect("registry expression parses"),
        ]
    }

    /// f(n) without positivity checks.
    fn raw(&self, n: f64) -> f64 {
        match self {
            Deformation::Identity => 1.0,
            Deformation::SqrtN => n.sqrt(),
            Deformation::QDeformed { .. } => self.raw_squared(n).sqrt(),
            Deformation::Expr { expr, .. } => expr.eval(n),
        }
    }

    fn raw_squared(&self, n: f64) -> f64 {
        match self {
            Deformation::Identity => 1.0,
            Deformation::SqrtN => n,
            Deformation::QDeformed { q } => qbracket_ratio(q.ln(), n).0,
            Deformation::Expr { expr, .. } => {
                let f = expr.eval(n);
                f * f
            }
        }
    }

    fn check(&self, n: f64, value: f64) -> Result<f64> {
        let ok = value.is_finite() && (value > 0.0 || (n == 0.0 && value == 0.0));
        if ok {
            Ok(value)
        } else {
            Err(Error::NonPositiveValue { spec: self.to_string(), n, value })
        }
    }

    fn check_arg(n: f64) -> Result<()> {
        if n.is_finite() && n >= 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("deformation argument must be finite and >= 0, got {n}")))
        }
    }

    /// f(n). Zero is accepted only at n = 0 (e.g. `sqrt_n`).
    pub fn eval(&self, n: f64) -> Result<f64> {
        Self::check_arg(n)?;
        self.check(n, self.raw(n))
    }

    /// f(n)^2, computed without the square root where the closed form allows it.
    pub fn eval_squared(&self, n: f64) -> Result<f64> {
        Self::check_arg(n)?;
        let f = self.raw(n);
        self.check(n, f)?;
        Ok(self.raw_squared(n))
    }

    /// d(f^2)/dn.
    pub fn squared_derivative(&self, n: f64) -> Result<f64> {
        Self::check_arg(n)?;
        let v = match self {
            Deformation::Identity => 0.0,
            Deformation::SqrtN => 1.0,
            Deformation::QDeformed { q } => qbracket_ratio(q.ln(), n).1,
            Deformation::Expr { expr, derivative, .. } => 2.0 * expr.eval(n) * derivative.eval(n),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonPositiveValue { spec: self.to_string(), n, value: v })
        }
    }

    /// df/dn. Infinite for `sqrt_n` at n = 0, reported as an error there.
    pub fn derivative(&self, n: f64) -> Result<f64> {
        Self::check_arg(n)?;
        let v = match self {
            Deformation::Identity => 0.0,
            Deformation::SqrtN => 0.5 / n.sqrt(),
            Deformation::QDeformed { .. } => self.squared_derivative(n)? / (2.0 * self.raw(n)),
            Deformation::Expr { derivative, .. } => derivative.eval(n),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::SingularAmplitude { spec: self.to_string(), n })
        }
    }

    /// Checks positivity of f at every integer 1..=n_max.
    pub fn validate(&self, n_max: usize) -> Result<()> {
        self.eval(0.0)?;
        for k in 1..=n_max {
            let v = self.raw(k as f64);
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NonPositiveValue { spec: self.to_string(), n: k as f64, value: v });
            }
        }
        Ok(())
    }
}

/// `(g, g')` with `g(n) = [n]_q / n = sinh(n l) / (n sinh l)`, `l = ln q`.
/// The removable singularity at n = 0 is handled by a Taylor expansion.
fn qbracket_ratio(l: f64, n: f64) -> (f64, f64) {
    if l == 0.0 {
        return (1.0, 0.0);
    }
    let scale = l / l.sinh();
    let x = n * l;
    if x.abs() < 1e-3 {
        // sinh(x)/x = 1 + x^2/6 + x^4/120 + O(x^6)
        let x2 = x * x;
        let g = scale * (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
        let dg = scale * l * (x / 3.0 + x2 * x / 30.0);
        (g, dg)
    } else {
        let g = x.sinh() / (n * l.sinh());
        let dg = (x * x.cosh() - x.sinh()) / (n * n * l.sinh());
        (g, dg)
    }
}

impl fmt::Display for Deformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Deformation::Identity => write!(f, "identity"),
            Deformation::SqrtN => write!(f, "sqrt_n"),
            Deformation::QDeformed { q } => write!(f, "qdef:q={q:?}"),
            Deformation::Expr { source, .. } => write!(f, "expr:{source}"),
        }
    }
}

impl FromStr for Deformation {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let kinds = &["identity", "sqrt_n", "qdef:q=<real>", "expr:<expression>"];
        let (head, body) = match text.find(':') {
            Some(i) => (&text[..i], Some((i + 1, &text[i + 1..]))),
            None => (text, None),
        };
        match (head, body) {
            ("identity", None) => Ok(Deformation::Identity),
            ("sqrt_n", None) => Ok(Deformation::SqrtN),
            ("qdef", Some((offset, params))) => {
                let mut q = None;
                for item in params.split(',') {
                    let pos = offset + (item.as_ptr() as usize - params.as_ptr() as usize);
                    let (key, value) = item
                        .split_once('=')
                        .ok_or_else(|| Error::parse(pos, format!("expected key=value, found `{item}`"), &["q=<real>"]))?;
                    match key.trim() {
                        "q" => {
                            let v: f64 = value.trim().parse().map_err(|_| {
                                Error::parse(pos + key.len() + 1, format!("`{value}` is not a number"), &["real number"])
                            })?;
                            q = Some(v);
                        }
                        other => return Err(Error::parse(pos, format!("unknown parameter `{other}`"), &["q"])),
                    }
                }
                let q = q.ok_or_else(|| Error::parse(offset, "missing parameter q", &["q=<real>"]))?;
                Deformation::qdef(q)
            }
            ("expr", Some((offset, body))) => Deformation::expr(body).map_err(|e| match e {
                Error::Parse { position, message, expected } => {
                    Error::Parse { position: position + offset, message, expected }
                }
                other => other,
            }),
            _ => Err(Error::parse(0, format!("unknown deformation `{text}`"), kinds)),
        }
    }
}

/// Cumulative log f-factorials: entry k is `sum_{j=1..k} ln f(j)`, entry 0 is 0.
#[derive(Debug, Clone)]
pub struct FFactorialTable {
    spec: Deformation,
    log_values: Vec<f64>,
}

impl FFactorialTable {
    pub fn new(spec: &Deformation, n_max: usize) -> Result<Self> {
        let mut log_values = Vec::with_capacity(n_max + 1);
        log_values.push(0.0);
        let mut acc = 0.0;
        for j in 1..=n_max {
            acc += spec.eval(j as f64)?.ln();
            log_values.push(acc);
        }
        Ok(FFactorialTable { spec: spec.clone(), log_values })
    }

    pub fn spec(&self) -> &Deformation {
        &self.spec
    }

    pub fn n_max(&self) -> usize {
        self.log_values.len() - 1
    }

    pub fn ln_factorial(&self, n: usize) -> Result<f64> {
        self.log_values
            .get(n)
            .copied()
            .ok_or(Error::OutOfRange { n, n_max: self.n_max() })
    }

    /// f(n)! = f(1) f(2) ... f(n); f(0)! = 1.
    pub fn factorial(&self, n: usize) -> Result<f64> {
        Ok(self.ln_factorial(n)?.exp())
    }
}

/// F(n) = ((n+1) f^2(n+1) - n f^2(n)) / (f(n) f(n+1)).
pub fn amplitude(spec: &Deformation, n: f64) -> Result<f64> {
    let f0 = spec.eval(n)?;
    let f1 = spec.eval(n + 1.0)?;
    let denom = f0 * f1;
    let value = commutator_target(spec, n)? / denom;
    if denom == 0.0 || !value.is_finite() {
        return Err(Error::SingularAmplitude { spec: spec.to_string(), n });
    }
    Ok(value)
}

/// (n+1) f^2(n+1) - n f^2(n), the symbol of the deformed ladder commutator.
pub fn commutator_target(spec: &Deformation, n: f64) -> Result<f64> {
    Ok((n + 1.0) * spec.eval_squared(n + 1.0)? - n * spec.eval_squared(n)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub n: usize,
    /// Energy in the units of `hbar * omega` supplied to [`spectrum`].
    pub energy: f64,
}

/// E_n = (hbar omega / 2) [ (n+1) f^2(n+1) + n f^2(n) ] for n = 0..=n_max.
pub fn spectrum(spec: &Deformation, n_max: usize, hbar: f64, omega: f64) -> Result<Vec<SpectrumRow>> {
    if !(hbar > 0.0 && omega > 0.0 && hbar.is_finite() && omega.is_finite()) {
        return Err(Error::InvalidArgument(format!("hbar and omega must be positive, got {hbar}, {omega}")));
    }
    (0..=n_max)
        .map(|n| {
            let x = n as f64;
            let sum = (x + 1.0) * spec.eval_squared(x + 1.0)? + x * spec.eval_squared(x)?;
            Ok(SpectrumRow { n, energy: 0.5 * hbar * omega * sum })
        })
        .collect()
}

/// Log-space terms `ln(s^n / (n! (f(n)!)^2))` of the coherent-state norm series,
/// truncated once a term drops below `tol` times the running sum.
pub(crate) fn norm_series_log_terms(spec: &Deformation, zeta_abs2: f64, tol: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(zeta_abs2 >= 0.0 && zeta_abs2.is_finite()) {
        return Err(Error::InvalidArgument(format!("|zeta|^2 must be finite and >= 0, got {zeta_abs2}")));
    }
    let mut logs = vec![0.0];
    if zeta_abs2 == 0.0 {
        return Ok(logs);
    }
    let ln_s = zeta_abs2.ln();
    // running sum kept relative to the largest term seen so far
    let mut ln_max = 0.0_f64;
    let mut scaled_sum = 1.0_f64;
    let mut ln_term = 0.0;
    for n in 1..=n_max {
        let x = n as f64;
        ln_term += ln_s - x.ln() - 2.0 * spec.eval(x)?.ln();
        logs.push(ln_term);
        if ln_term > ln_max {
            scaled_sum = scaled_sum * (ln_max - ln_term).exp() + 1.0;
            ln_max = ln_term;
        } else {
            scaled_sum += (ln_term - ln_max).exp();
        }
        let ln_sum = ln_max + scaled_sum.ln();
        if ln_term < tol.ln() + ln_sum {
            return Ok(logs);
        }
    }
    Err(Error::SeriesDivergence { n_max, tol })
}

/// N_f = [ sum_n |zeta|^{2n} / (n! (f(n)!)^2) ]^{-1/2}.
pub fn normalization(spec: &Deformation, zeta_abs2: f64, tol: f64) -> Result<f64> {
    normalization_with_limit(spec, zeta_abs2, tol, DEFAULT_SERIES_N_MAX)
}

pub fn normalization_with_limit(spec: &Deformation, zeta_abs2: f64, tol: f64, n_max: usize) -> Result<f64> {
    let logs = norm_series_log_terms(spec, zeta_abs2, tol, n_max)?;
    Ok((-0.5 * log_sum_exp(&logs)).exp())
}

pub(crate) fn log_sum_exp(logs: &[f64]) -> f64 {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // ascending order keeps the small terms from being absorbed early
    let mut rel: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    rel.sort_by(|a, b| a.partial_cmp(b).unwrap());
    max + rel.iter().sum::<f64>().ln()
}
