//! The f-star product on grid fields.
//!
//! `k *_f g = k g + (i hbar/2) F(n) {k, g} - (hbar^2/8) F(n)^2 B2(k, g) + O(hbar^3)`,
//! where `{k, g} = k_q g_p - k_p g_q`, `B2(k, g) = k_qq g_pp - 2 k_qp g_qp + k_pp g_qq`
//! and `n = (q^2+p^2)/(2 hbar)` pointwise. The amplitude F is held constant under
//! the derivatives. The second-order term is experimental.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use super::moyal::moyal_exact;
use crate::deformation::{amplitude, Deformation};
use crate::error::{Error, Result};
use crate::phasespace::{mixed_derivative_auto, Field, PhaseGrid, Profile, RadialProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarOrder {
    First,
    Second,
    /// Full Moyal series; polynomial operands and the identity deformation only.
    Exact,
}

impl fmt::Display for StarOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StarOrder::First => "first",
            StarOrder::Second => "second",
            StarOrder::Exact => "exact",
        })
    }
}

impl FromStr for StarOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(StarOrder::First),
            "second" => Ok(StarOrder::Second),
            "exact" => Ok(StarOrder::Exact),
            _ => Err(Error::parse(0, format!("unknown order `{s}`"), &["first", "second", "exact"])),
        }
    }
}

/// F(n) sampled at `n = (q^2+p^2)/(2 hbar)`.
pub fn amplitude_field(grid: &PhaseGrid, spec: &Deformation, hbar: f64) -> Result<Array2<f64>> {
    if spec.is_identity() {
        return Ok(Array2::from_elem(grid.shape(), 1.0));
    }
    let values = grid.try_sample(|q, p| {
        let n = (q * q + p * p) / (2.0 * hbar);
        match amplitude(spec, n) {
            Ok(v) => Ok(Complex64::new(v, 0.0)),
            Err(Error::NonPositiveValue { .. }) | Err(Error::SingularAmplitude { .. }) => {
                Err(Error::SingularAmplitude { spec: spec.to_string(), n })
            }
            Err(e) => Err(e),
        }
    })?;
    Ok(values.mapv(|v| v.re))
}

/// Poisson bracket `{k, g} = k_q g_p - k_p g_q` on the grid.
pub fn poisson_bracket(k: &Field, g: &Field) -> Result<Array2<Complex64>> {
    k.check_same_grid(g)?;
    let kq = mixed_derivative_auto(k, 1, 0)?;
    let kp = mixed_derivative_auto(k, 0, 1)?;
    let gq = mixed_derivative_auto(g, 1, 0)?;
    let gp = mixed_derivative_auto(g, 0, 1)?;
    let mut out = Array2::zeros(k.grid().shape());
    Zip::from(&mut out)
        .and(kq.values())
        .and(kp.values())
        .and(gq.values())
        .and(gp.values())
        .for_each(|o, &kq, &kp, &gq, &gp| *o = kq * gp - kp * gq);
    Ok(out)
}

fn second_bidifferential(k: &Field, g: &Field) -> Result<Array2<Complex64>> {
    let kqq = mixed_derivative_auto(k, 2, 0)?;
    let kqp = mixed_derivative_auto(k, 1, 1)?;
    let kpp = mixed_derivative_auto(k, 0, 2)?;
    let gqq = mixed_derivative_auto(g, 2, 0)?;
    let gqp = mixed_derivative_auto(g, 1, 1)?;
    let gpp = mixed_derivative_auto(g, 0, 2)?;
    let mut out = Array2::zeros(k.grid().shape());
    Zip::from(&mut out)
        .and(kqq.values())
        .and(kpp.values())
        .and(gqq.values())
        .and(gpp.values())
        .for_each(|o, &kqq, &kpp, &gqq, &gpp| *o = kqq * gpp + kpp * gqq);
    Zip::from(&mut out)
        .and(kqp.values())
        .and(gqp.values())
        .for_each(|o, &kqp, &gqp| *o -= 2.0 * kqp * gqp);
    Ok(out)
}

/// `k *_f g` truncated at `order`.
pub fn fstar_apply(k: &Field, g: &Field, spec: &Deformation, hbar: f64, order: StarOrder) -> Result<Field> {
    k.check_same_grid(g)?;
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
    }
    let grid = *k.grid();
    let label = format!("({}) *f[{order}] ({})", k.label(), g.label());
    if order == StarOrder::Exact {
        return exact_product(k, g, spec, hbar, &grid, label);
    }
    let amp = amplitude_field(&grid, spec, hbar)?;
    let bracket = poisson_bracket(k, g)?;
    let half = Complex64::new(0.0, 0.5 * hbar);
    let mut out = Array2::zeros(grid.shape());
    Zip::from(&mut out)
        .and(k.values())
        .and(g.values())
        .and(&amp)
        .and(&bracket)
        .for_each(|o, &kv, &gv, &f, &b| *o = kv * gv + half * f * b);
    if order == StarOrder::Second {
        let b2 = second_bidifferential(k, g)?;
        let c = -hbar * hbar / 8.0;
        Zip::from(&mut out)
            .and(&amp)
            .and(&b2)
            .for_each(|o, &f, &b| *o += c * f * f * b);
    }
    let product = Field::raw(grid, out, label);
    Ok(match (order, k.profile(), g.profile()) {
        // radial pairs commute under the first-order product, so the result stays radial
        (StarOrder::First, Some(Profile::Radial(a)), Some(Profile::Radial(b))) if a.hbar() == b.hbar() => {
            let profile = RadialProfile::Product(Box::new(a.clone()), Box::new(b.clone()));
            product.with_profile(Some(Profile::Radial(profile)))
        }
        _ => product,
    })
}

fn exact_product(k: &Field, g: &Field, spec: &Deformation, hbar: f64, grid: &PhaseGrid, label: String) -> Result<Field> {
    if !spec.is_identity() {
        return Err(Error::InvalidArgument(format!("exact order is only defined for the identity deformation, got {spec}")));
    }
    match (k.profile(), g.profile()) {
        (Some(Profile::Polynomial(a)), Some(Profile::Polynomial(b))) => {
            Ok(Field::from_symbol(grid, &moyal_exact(a, b, hbar)).with_label(label))
        }
        _ => Err(Error::InvalidArgument("exact order requires polynomial operands".into())),
    }
}

/// `(k *_f g - g *_f k) / hbar`.
pub fn star_commutator(k: &Field, g: &Field, spec: &Deformation, hbar: f64, order: StarOrder) -> Result<Field> {
    let kg = fstar_apply(k, g, spec, hbar, order)?;
    let gk = fstar_apply(g, k, spec, hbar, order)?;
    Ok(kg
        .sub(&gk)?
        .scale(1.0 / hbar)
        .with_label(format!("[{}, {}]_f / hbar", k.label(), g.label())))
}
