use num_complex::Complex64;

use super::report::{measure, ResidualReport};
use crate::deformation::{amplitude, commutator_target, Deformation};
use crate::error::Result;
use crate::fit::loglog_slope;
use crate::phasespace::{Field, PhaseGrid};
use crate::starproduct::{star_commutator, StarOrder};

/// Ladder-algebra correspondence on a grid.
#[derive(Debug, Clone)]
pub struct CommutatorReport {
    /// `[A, conj(A)]_f / hbar` from the star product.
    pub numerical: Field,
    /// `(n+1) f^2(n+1) - n f^2(n)`.
    pub target: Field,
    /// Closed-form first-order value `F(n) (f^2 + 2 n f f')`.
    pub closed_form: Field,
    /// `numerical - target`.
    pub deviation: Field,
    pub vs_target: ResidualReport,
    pub vs_closed_form: ResidualReport,
}

/// `F(n) (f^2 + 2 n f f')`, written with `2 f f' = (f^2)'`.
pub fn closed_form_commutator(spec: &Deformation, n: f64) -> Result<f64> {
    Ok(amplitude(spec, n)? * (spec.eval_squared(n)? + n * spec.squared_derivative(n)?))
}

fn sample_real(grid: &PhaseGrid, label: &str, f: impl Fn(f64) -> Result<f64> + Sync) -> Result<Field> {
    let hbar = grid.hbar;
    let values = grid.try_sample(|q, p| Ok(Complex64::new(f((q * q + p * p) / (2.0 * hbar))?, 0.0)))?;
    Field::new(*grid, values, label)
}

/// Compares `[A, conj(A)]_f / hbar`, `A = a f(n)`, with the deformed commutator symbol.
pub fn commutator_report(spec: &Deformation, grid: &PhaseGrid, order: StarOrder) -> Result<CommutatorReport> {
    let hbar = grid.hbar;
    let a = Field::ladder(grid, spec, hbar, false)?;
    let a_bar = Field::ladder(grid, spec, hbar, true)?;
    let numerical = star_commutator(&a, &a_bar, spec, hbar, order)?;
    let target = sample_real(grid, "target", |n| commutator_target(spec, n))?;
    let closed_form = sample_real(grid, "closed_form", |n| closed_form_commutator(spec, n))?;
    let deviation = numerical.sub(&target)?.with_label(format!("commutator deviation [{spec}]"));
    let oracle_gap = numerical.sub(&closed_form)?;
    let build = |identity: &str, residual: &Field| {
        let m = measure(residual, &numerical, None);
        ResidualReport {
            identity: identity.into(),
            spec: spec.to_string(),
            n: None,
            hbar,
            omega: None,
            order,
            max_abs: m.max_abs,
            l2: m.l2,
            imag_max: m.imag_max,
            witness: m.witness,
            grid: *grid,
            energy: None,
            phase_average: None,
        }
    };
    let vs_target = build("commutator_target", &deviation);
    let vs_closed_form = build("commutator_closed_form", &oracle_gap);
    Ok(CommutatorReport { numerical, target, closed_form, deviation, vs_target, vs_closed_form })
}

/// Commutator deviation for `f(n) = 1 + eps n` over a range of `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationSweep {
    /// `(eps, max |deviation|)` inside the residual disc.
    pub samples: Vec<(f64, f64)>,
    /// Least-squares slope of log deviation against log eps.
    pub slope: f64,
}

pub fn linear_deformation_sweep(epsilons: &[f64], grid: &PhaseGrid, r_cut: f64) -> Result<DeformationSweep> {
    let mut samples = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let spec = Deformation::expr(&format!("1+{eps:?}*n"))?;
        let report = commutator_report(&spec, grid, StarOrder::First)?;
        let m = measure(&report.deviation, &report.numerical, Some(r_cut));
        samples.push((eps, m.max_abs));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
    Ok(DeformationSweep { slope: loglog_slope(&xs, &ys)?, samples })
}
