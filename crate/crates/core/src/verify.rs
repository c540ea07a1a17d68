//! The acceptance suite behind `fstar verify`.
//!
//! Every check is deterministic: fixed grids, a seeded RNG for random polynomials,
//! sequential reductions, and no timings in the summary.

use ndarray::s;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::deformation::{spectrum, Deformation};
use crate::error::Result;
use crate::genvalue::{
    associativity_defect, commutator_report, genvalue_residual, hamiltonian_star_wigner, num17, DEFAULT_R_CUT,
};
use crate::phasespace::{fcs_wigner, fock_wigner, gradient, integrate, DerivativeMethod, Field, PhaseGrid};
use crate::starproduct::{moyal_exact, PolySymbol, StarOrder};

/// Grid resolution and sizes used by the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Use 257^2 grids instead of 513^2 where the check allows it.
    pub quick: bool,
}

impl VerifyOptions {
    fn grid(&self) -> PhaseGrid {
        let n = if self.quick { 257 } else { 513 };
        PhaseGrid::square(8.0, n, 1.0).expect("default grid is valid")
    }
}

/// A measured quantity; `threshold` is `None` when the value is reported but not asserted.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub threshold: Option<Bound>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
}

impl Measurement {
    fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Measurement { name: name.into(), value, threshold: Some(Bound::AtMost(limit)) }
    }

    fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Measurement { name: name.into(), value, threshold: Some(Bound::AtLeast(limit)) }
    }

    fn reported(name: impl Into<String>, value: f64) -> Self {
        Measurement { name: name.into(), value, threshold: None }
    }

    pub fn passed(&self) -> bool {
        match self.threshold {
            None => true,
            Some(Bound::AtMost(limit)) => self.value <= limit,
            Some(Bound::AtLeast(limit)) => self.value >= limit,
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::from(self.name.clone()));
        m.insert("value".into(), num17(self.value));
        match self.threshold {
            Some(Bound::AtMost(limit)) => {
                m.insert("at_most".into(), num17(limit));
            }
            Some(Bound::AtLeast(limit)) => {
                m.insert("at_least".into(), num17(limit));
            }
            None => {}
        }
        m.insert("status".into(), Value::from(status(self.passed())));
        Value::Object(m)
    }
}

fn status(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub measurements: Vec<Measurement>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.measurements.iter().all(Measurement::passed)
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("id".into(), Value::from(self.id));
        m.insert("name".into(), Value::from(self.name));
        m.insert("status".into(), Value::from(status(self.passed())));
        m.insert("measurements".into(), Value::Array(self.measurements.iter().map(Measurement::to_json).collect()));
        Value::Object(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub options: VerifyOptions,
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("mode".into(), Value::from(if self.options.quick { "quick" } else { "full" }));
        m.insert("status".into(), Value::from(status(self.passed())));
        m.insert("checks".into(), Value::Array(self.checks.iter().map(Check::to_json).collect()));
        Value::Object(m)
    }
}

/// `H * W_n = (n + 1/2) W_n` for the undeformed oscillator, `n = 0..=10`.
pub fn check_moyal_genvalue(opts: VerifyOptions) -> Result<Check> {
    let grid = opts.grid();
    let measurements = (0..=10)
        .map(|n| {
            let r = genvalue_residual(&Deformation::Identity, n, &grid, 1.0, StarOrder::First, DEFAULT_R_CUT)?;
            Ok(Measurement::at_most(format!("max_abs n={n}"), r.max_abs, 1e-8))
        })
        .collect::<Result<_>>()?;
    Ok(Check { id: 1, name: "moyal_genvalue", measurements })
}

/// `max |Im(H *_f W_n)|` for every registry deformation and `n <= 10`.
pub fn check_imaginary_part(opts: VerifyOptions) -> Result<Check> {
    let grid = opts.grid();
    let mut measurements = Vec::new();
    for spec in Deformation::registry() {
        let mut worst = 0.0f64;
        for n in 0..=10 {
            let w = fock_wigner(n, &grid)?;
            worst = worst.max(hamiltonian_star_wigner(&spec, &w, 1.0, StarOrder::First)?.max_imag());
        }
        measurements.push(Measurement::at_most(format!("imag_max {spec}"), worst, 1e-10));
    }
    Ok(Check { id: 2, name: "imaginary_part", measurements })
}

/// Fock and nonlinear coherent-state Wigner functions integrate to one.
pub fn check_normalization(opts: VerifyOptions) -> Result<Check> {
    let grid = opts.grid();
    let mut fock = 0.0f64;
    for n in 0..=20 {
        fock = fock.max((integrate(&fock_wigner(n, &grid)?).re - 1.0).abs());
    }
    let mut measurements = vec![Measurement::at_most("fock n<=20", fock, 1e-6)];
    for spec in Deformation::registry() {
        let mut worst = 0.0f64;
        for zeta2 in [0.5, 1.0, 2.0] {
            let w = fcs_wigner(&spec, zeta2, &grid, crate::deformation::DEFAULT_SERIES_TOL)?;
            worst = worst.max((integrate(&w).re - 1.0).abs());
        }
        measurements.push(Measurement::at_most(format!("coherent {spec}"), worst, 1e-6));
    }
    Ok(Check { id: 3, name: "wigner_normalization", measurements })
}

fn random_polynomial(rng: &mut ChaCha8Rng, degree: u32) -> PolySymbol {
    let mut terms = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            terms.push(((a, b), c));
        }
    }
    PolySymbol::from_terms(terms)
}

/// Exact Moyal product: `[a, conj(a)] / hbar = 1` and associativity on random polynomials.
pub fn check_moyal_algebra(_opts: VerifyOptions) -> Result<Check> {
    let mut ladder = 0.0f64;
    for hbar in [1.0, 0.37, 1e-3] {
        let (a, ab) = (PolySymbol::a(), PolySymbol::a_bar());
        let comm = moyal_exact(&a, &ab, hbar).sub(&moyal_exact(&ab, &a, hbar)).scale(1.0 / hbar);
        ladder = ladder.max(comm.sub(&PolySymbol::constant(1.0)).max_abs_coeff());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut assoc = 0.0f64;
    for _ in 0..25 {
        let hbar = rng.random_range(0.05..2.0);
        let (k, g, h) = (random_polynomial(&mut rng, 4), random_polynomial(&mut rng, 4), random_polynomial(&mut rng, 4));
        let left = moyal_exact(&moyal_exact(&k, &g, hbar), &h, hbar);
        let right = moyal_exact(&k, &moyal_exact(&g, &h, hbar), hbar);
        assoc = assoc.max(left.sub(&right).max_abs_coeff() / left.max_abs_coeff());
    }
    Ok(Check {
        id: 4,
        name: "moyal_algebra",
        measurements: vec![
            Measurement::at_most("ladder commutator - 1", ladder, 4.0 * f64::EPSILON),
            Measurement::at_most("associativity relative", assoc, 1e-12),
        ],
    })
}

/// `[A, conj(A)]_f / hbar` against 1 (identity) and the closed form (sqrt_n).
pub fn check_commutator(opts: VerifyOptions) -> Result<Check> {
    let grid = opts.grid();
    let identity = commutator_report(&Deformation::Identity, &grid, StarOrder::First)?;
    let sqrt_n = commutator_report(&Deformation::SqrtN, &grid, StarOrder::First)?;
    Ok(Check {
        id: 5,
        name: "commutator_correspondence",
        measurements: vec![
            Measurement::at_most("identity vs 1", identity.vs_target.max_abs, 1e-10),
            Measurement::at_most("sqrt_n vs closed form", sqrt_n.vs_closed_form.max_abs, 1e-8),
            Measurement::reported("sqrt_n vs 2n+1", sqrt_n.vs_target.max_abs),
        ],
    })
}

pub const ASSOC_HBARS: [f64; 3] = [1e-1, 1e-2, 1e-3];

/// Log-log slope of the sqrt_n associativity defect for `k = q`, `g = p`, `h = q + p`.
pub fn check_associativity(opts: VerifyOptions) -> Result<Check> {
    let grid = opts.grid();
    let field = |s: &str| -> Result<Field> { Ok(Field::from_symbol(&grid, &s.parse()?)) };
    let study =
        associativity_defect(&field("q")?, &field("p")?, &field("q + p")?, &Deformation::SqrtN, &ASSOC_HBARS, StarOrder::First)?;
    let mut measurements: Vec<Measurement> =
        study.samples.iter().map(|(hbar, d)| Measurement::reported(format!("defect hbar={hbar:?}"), *d)).collect();
    measurements.push(Measurement::at_least("slope", study.slope, 1.9));
    Ok(Check { id: 6, name: "associativity_scaling", measurements })
}

/// Closed-form spectra, evaluated independently.
pub fn check_spectrum(_opts: VerifyOptions) -> Result<Check> {
    let identity = spectrum(&Deformation::Identity, 100, 1.0, 1.0)?;
    let exact = identity.iter().all(|row| row.energy == row.n as f64 + 0.5);
    let sqrt_n = spectrum(&Deformation::SqrtN, 100, 1.0, 1.0)?;
    let rel = sqrt_n
        .iter()
        .map(|row| {
            let n = row.n as f64;
            let expected = ((n + 1.0).powi(2) + n * n) / 2.0;
            (row.energy - expected).abs() / expected
        })
        .fold(0.0, f64::max);
    Ok(Check {
        id: 7,
        name: "spectrum_closed_form",
        measurements: vec![
            Measurement::at_most("identity mismatches", if exact { 0.0 } else { 1.0 }, 0.0),
            Measurement::at_most("sqrt_n relative", rel, 1e-12),
        ],
    })
}

/// Fourth-order finite differences against analytic radial gradients of `W_4`.
pub fn check_derivatives(_opts: VerifyOptions) -> Result<Check> {
    let grid = PhaseGrid::square(6.0, 257, 1.0)?;
    let w = fock_wigner(4, &grid)?;
    let (fq, fp) = gradient(&w, DerivativeMethod::Fd4)?;
    let (aq, ap) = gradient(&w, DerivativeMethod::Analytic)?;
    let interior = s![2..grid.n_q - 2, 2..grid.n_p - 2];
    let diff = |a: &Field, b: &Field| {
        let (a, b) = (a.values().slice(interior), b.values().slice(interior));
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    };
    let worst = diff(&fq, &aq).max(diff(&fp, &ap));
    Ok(Check { id: 8, name: "derivative_crosscheck", measurements: vec![Measurement::at_most("fd4 vs analytic", worst, 1e-6)] })
}

/// Runs checks 1-8. Determinism (identical summaries across runs) is checked by
/// comparing the output of two runs.
pub fn run(opts: VerifyOptions) -> Result<Summary> {
    let checks = [
        check_moyal_genvalue,
        check_imaginary_part,
        check_normalization,
        check_moyal_algebra,
        check_commutator,
        check_associativity,
        check_spectrum,
        check_derivatives,
    ]
    .iter()
    .map(|check| check(opts))
    .collect::<Result<Vec<_>>>()?;
    Ok(Summary { options: opts, checks })
}

