//! Fock-diagonal Wigner functions and their coherent-state mixture.
//!
//! Normalization convention: `W_n(q, p) = 2 (-1)^n e^{-u} L_n(2u)`, `u = (q^2+p^2)/hbar`,
//! integrates to one against the measure `dq dp / (2 pi hbar)`.

use super::field::{Field, RadialProfile};
use super::grid::PhaseGrid;
use crate::deformation::{log_sum_exp, norm_series_log_terms, Deformation, DEFAULT_SERIES_N_MAX};
use crate::error::Result;

/// Mixture weights `N_f^2 |zeta|^{2n} / (n! (f(n)!)^2)` of the Fock-diagonal sum.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerWeights {
    pub spec: Deformation,
    pub zeta_abs2: f64,
    pub weights: Vec<f64>,
    /// Index of the last retained term.
    pub truncation_n: usize,
}

impl WignerWeights {
    pub fn new(spec: &Deformation, zeta_abs2: f64, tol: f64) -> Result<Self> {
        let logs = norm_series_log_terms(spec, zeta_abs2, tol, DEFAULT_SERIES_N_MAX)?;
        let ln_total = log_sum_exp(&logs);
        let weights: Vec<f64> = logs.iter().map(|l| (l - ln_total).exp()).collect();
        Ok(WignerWeights {
            spec: spec.clone(),
            zeta_abs2,
            truncation_n: weights.len() - 1,
            weights,
        })
    }

    /// N_f^2.
    pub fn norm_squared(&self) -> f64 {
        self.weights[0]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// W_n on `grid`, with its radial profile registered for analytic derivatives.
pub fn fock_wigner(n: usize, grid: &PhaseGrid) -> Result<Field> {
    Field::from_radial(grid, format!("W_{n}"), RadialProfile::fock(n, grid.hbar))
}

/// Coherent-state Wigner function `sum_n weights[n] W_n`.
pub fn fcs_wigner(spec: &Deformation, zeta_abs2: f64, grid: &PhaseGrid, tol: f64) -> Result<Field> {
    let w = WignerWeights::new(spec, zeta_abs2, tol)?;
    let coefficients = w.weights.iter().copied().enumerate().collect();
    let label = format!("W^f[{spec}, |zeta|^2={zeta_abs2:?}, n<={}]", w.truncation_n);
    Field::from_radial(grid, label, RadialProfile::Wigner { coefficients, hbar: grid.hbar })
}
