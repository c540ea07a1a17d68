//! Phase-space derivatives of grid fields.
//!
//! `Fd4` applies fourth-order finite differences: the central five-point stencil
//! in the interior and one-sided five-point stencils on the two outermost samples
//! of each edge. Repeated application for mixed derivatives loses one order of
//! accuracy per pass near the edges.
//!
//! `Analytic` differentiates the field's registered profile in closed form. For a
//! radial profile `w(u)`, `u = (q^2+p^2)/hbar`, every mixed derivative has the form
//! `sum_k P_k(q, p) w^(k)(u)` with polynomials `P_k` generated by the chain rule.

use ndarray::{Array2, Axis};
use num_complex::Complex64;

use super::field::{Field, Profile, RadialProfile};
use crate::error::{Error, Result};
use crate::starproduct::PolySymbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMethod {
    Fd4,
    /// Closed-form derivatives from the field's profile (radial, polynomial or ladder).
    Analytic,
}

/// (d/dq, d/dp) of `field`.
pub fn gradient(field: &Field, method: DerivativeMethod) -> Result<(Field, Field)> {
    Ok((mixed_derivative(field, 1, 0, method)?, mixed_derivative(field, 0, 1, method)?))
}

/// d^dq/dq^dq d^dp/dp^dp of `field`.
pub fn mixed_derivative(field: &Field, dq: usize, dp: usize, method: DerivativeMethod) -> Result<Field> {
    if dq == 0 && dp == 0 {
        return Ok(field.clone());
    }
    let label = format!("d^({dq},{dp}) {}", field.label());
    match method {
        DerivativeMethod::Fd4 => {
            let mut v = field.values().clone();
            let g = field.grid();
            for _ in 0..dq {
                v = fd4_axis(&v, Axis(0), g.dq())?;
            }
            for _ in 0..dp {
                v = fd4_axis(&v, Axis(1), g.dp())?;
            }
            Ok(Field::raw(*g, v, label))
        }
        DerivativeMethod::Analytic => analytic(field, dq, dp)
            .unwrap_or_else(|| Err(unavailable(field, dq, dp)))
            .map(|v| Field::raw(*field.grid(), v, label)),
    }
}

/// Analytic where the profile allows it, otherwise repeated `Fd4`.
pub(crate) fn mixed_derivative_auto(field: &Field, dq: usize, dp: usize) -> Result<Field> {
    if supports_analytic(field, dq, dp) {
        mixed_derivative(field, dq, dp, DerivativeMethod::Analytic)
    } else {
        mixed_derivative(field, dq, dp, DerivativeMethod::Fd4)
    }
}

pub(crate) fn supports_analytic(field: &Field, dq: usize, dp: usize) -> bool {
    match field.profile() {
        None => false,
        Some(Profile::Polynomial(_)) => true,
        Some(Profile::Radial(r)) => dq + dp <= r.max_order(),
        Some(Profile::Ladder { .. }) => dq + dp <= 1,
    }
}

fn unavailable(field: &Field, dq: usize, dp: usize) -> Error {
    Error::ProfileUnavailable { label: field.label().to_string(), dq, dp }
}

fn analytic(field: &Field, dq: usize, dp: usize) -> Option<Result<Array2<Complex64>>> {
    if !supports_analytic(field, dq, dp) {
        return None;
    }
    let grid = field.grid();
    Some(match field.profile()? {
        Profile::Polynomial(s) => {
            let d = s.derivative(dq as u32, dp as u32);
            Ok(grid.sample(|q, p| d.eval(q, p)))
        }
        Profile::Radial(r) => radial_derivative(field, r, dq, dp),
        Profile::Ladder { raising, spec, hbar } => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let sign = if *raising { -1.0 } else { 1.0 };
            let along_q = dq == 1;
            grid.try_sample(|q, p| {
                let n = (q * q + p * p) / (2.0 * hbar);
                let f = spec.eval(n)?;
                let df = spec.derivative(n)?;
                let a = Complex64::new(s * q, sign * s * p);
                // d(a f)/dx = (da/dx) f + a f'(n) x / hbar
                let (da, x) = if along_q { (Complex64::new(s, 0.0), q) } else { (Complex64::new(0.0, sign * s), p) };
                Ok(da * f + a * (df * x / hbar))
            })
        }
    })
}

fn radial_derivative(field: &Field, profile: &RadialProfile, dq: usize, dp: usize) -> Result<Array2<Complex64>> {
    let hbar = profile.hbar();
    let chain = radial_chain(dq, dp, hbar);
    field.grid().try_sample(|q, p| {
        let u = (q * q + p * p) / hbar;
        let mut acc = 0.0;
        for (k, poly) in chain.iter().enumerate() {
            if poly.is_zero() {
                continue;
            }
            acc += poly.eval(q, p).re * profile.derivative(u, k)?;
        }
        Ok(Complex64::new(acc, 0.0))
    })
}

/// Polynomials `P_k` with d^dq/dq^dq d^dp/dp^dp w(u) = sum_k P_k w^(k)(u).
pub(crate) fn radial_chain(dq: usize, dp: usize, hbar: f64) -> Vec<PolySymbol> {
    let mut chain = vec![PolySymbol::constant(1.0)];
    let dq_u = PolySymbol::monomial(2.0 / hbar, 1, 0);
    let dp_u = PolySymbol::monomial(2.0 / hbar, 0, 1);
    let step = |chain: &Vec<PolySymbol>, along_q: bool| {
        let mut next = vec![PolySymbol::zero(); chain.len() + 1];
        for (k, poly) in chain.iter().enumerate() {
            let (d, du) = if along_q { (poly.derivative(1, 0), &dq_u) } else { (poly.derivative(0, 1), &dp_u) };
            next[k] = next[k].add(&d);
            next[k + 1] = next[k + 1].add(&poly.mul(du));
        }
        next
    };
    for _ in 0..dq {
        chain = step(&chain, true);
    }
    for _ in 0..dp {
        chain = step(&chain, false);
    }
    chain
}

// Fourth-order stencils, coefficients over 12h.
const CENTRAL: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];

/// Fourth-order first derivative along `axis` with spacing `h`.
pub fn fd4_axis(values: &Array2<Complex64>, axis: Axis, h: f64) -> Result<Array2<Complex64>> {
    let len = values.len_of(axis);
    if len < 5 {
        return Err(Error::StencilTooSmall { len });
    }
    let mut out = Array2::zeros(values.dim());
    let inv = 1.0 / (12.0 * h);
    for (src, mut dst) in values.lanes(axis).into_iter().zip(out.lanes_mut(axis)) {
        let apply = |coeffs: &[f64; 5], start: usize, sign: f64, reversed: bool| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, c) in coeffs.iter().enumerate() {
                let idx = if reversed { start - k } else { start + k };
                acc += src[idx] * *c;
            }
            acc * (sign * inv)
        };
        dst[0] = apply(&EDGE0, 0, 1.0, false);
        dst[1] = apply(&EDGE1, 0, 1.0, false);
        for i in 2..len - 2 {
            dst[i] = apply(&CENTRAL, i - 2, 1.0, false);
        }
        // mirrored edge stencils flip sign
        dst[len - 1] = apply(&EDGE0, len - 1, -1.0, true);
        dst[len - 2] = apply(&EDGE1, len - 1, -1.0, true);
    }
    Ok(out)
}
