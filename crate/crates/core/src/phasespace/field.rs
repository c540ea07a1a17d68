use ndarray::{Array2, Zip};
use num_complex::Complex64;

use super::grid::PhaseGrid;
use super::special::{binomial, generalized_laguerre_sequence};
use crate::deformation::Deformation;
use crate::error::{Error, Result};
use crate::starproduct::PolySymbol;

/// Closed-form description attached to a field so derivatives can be taken exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Radial(RadialProfile),
    Polynomial(PolySymbol),
    /// `a f(n)` (lowering) or `conj(a) f(n)` (raising), with `n = (q^2+p^2)/(2 hbar)`.
    Ladder { raising: bool, spec: Deformation, hbar: f64 },
}

/// A function `w(u)` of `u = (q^2 + p^2) / hbar` only.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialProfile {
    /// `sum_n c_n W_n(u)` with `W_n(u) = 2 (-1)^n e^{-u} L_n(2u)`.
    Wigner { coefficients: Vec<(usize, f64)>, hbar: f64 },
    /// `(hbar omega / 2) [ (n+1) f^2(n+1) + n f^2(n) ]` at `n = u / 2`.
    Hamiltonian { spec: Deformation, hbar: f64, omega: f64 },
    /// Pointwise product of two radial profiles sharing the same `hbar`.
    Product(Box<RadialProfile>, Box<RadialProfile>),
}

impl RadialProfile {
    pub fn fock(n: usize, hbar: f64) -> Self {
        RadialProfile::Wigner { coefficients: vec![(n, 1.0)], hbar }
    }

    pub fn hbar(&self) -> f64 {
        match self {
            RadialProfile::Wigner { hbar, .. } | RadialProfile::Hamiltonian { hbar, .. } => *hbar,
            RadialProfile::Product(a, _) => a.hbar(),
        }
    }

    /// Highest u-derivative order available in closed form.
    pub fn max_order(&self) -> usize {
        match self {
            RadialProfile::Wigner { .. } => usize::MAX,
            RadialProfile::Hamiltonian { spec, .. } if spec.is_identity() => usize::MAX,
            RadialProfile::Hamiltonian { .. } => 1,
            RadialProfile::Product(a, b) => a.max_order().min(b.max_order()),
        }
    }

    pub fn value(&self, u: f64) -> Result<f64> {
        self.derivative(u, 0)
    }

    /// k-th derivative with respect to `u`.
    pub fn derivative(&self, u: f64, k: usize) -> Result<f64> {
        match self {
            RadialProfile::Wigner { coefficients, .. } => Ok(wigner_derivative(coefficients, u, k)),
            RadialProfile::Hamiltonian { spec, hbar, omega } => {
                let scale = 0.5 * hbar * omega;
                let n = 0.5 * u;
                match k {
                    0 => Ok(scale * ((n + 1.0) * spec.eval_squared(n + 1.0)? + n * spec.eval_squared(n)?)),
                    1 => {
                        let dn = spec.eval_squared(n + 1.0)?
                            + (n + 1.0) * spec.squared_derivative(n + 1.0)?
                            + spec.eval_squared(n)?
                            + n * spec.squared_derivative(n)?;
                        Ok(0.5 * scale * dn)
                    }
                    _ if spec.is_identity() => Ok(0.0),
                    _ => Err(Error::InvalidArgument(format!("Hamiltonian profile has no derivative of order {k}"))),
                }
            }
            RadialProfile::Product(a, b) => (0..=k).try_fold(0.0, |acc, j| {
                Ok(acc + binomial(k, j) * a.derivative(u, j)? * b.derivative(u, k - j)?)
            }),
        }
    }
}

/// d^k/du^k of `sum_n c_n 2 (-1)^n e^{-u} L_n(2u)`, using
/// d^j/dx^j L_n(x) = (-1)^j L_{n-j}^(j)(x).
fn wigner_derivative(coefficients: &[(usize, f64)], u: f64, k: usize) -> f64 {
    let n_max = coefficients.iter().map(|(n, _)| *n).max().unwrap_or(0);
    let x = 2.0 * u;
    let mut seq = vec![0.0; n_max + 1];
    let mut total = 0.0;
    for j in 0..=k.min(n_max) {
        generalized_laguerre_sequence(j as f64, x, &mut seq[..=n_max - j]);
        let factor = binomial(k, j) * 2f64.powi(j as i32);
        let mut inner = 0.0;
        for &(n, c) in coefficients {
            if n < j {
                continue;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            inner += c * sign * seq[n - j];
        }
        total += factor * inner;
    }
    let sign_k = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    2.0 * sign_k * (-u).exp() * total
}

/// Complex samples of a phase-space function on a [`PhaseGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: PhaseGrid,
    values: Array2<Complex64>,
    label: String,
    profile: Option<Profile>,
}

impl Field {
    pub fn new(grid: PhaseGrid, values: Array2<Complex64>, label: impl Into<String>) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(Error::InvalidArgument(format!(
                "field has shape {:?}, grid expects {:?}",
                values.dim(),
                grid.shape()
            )));
        }
        if let Some(((i, j), v)) = values.indexed_iter().find(|(_, v)| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "non-finite value {v} at ({}, {})",
                grid.q(i),
                grid.p(j)
            )));
        }
        Ok(Field { grid, values, label: label.into(), profile: None })
    }

    pub fn from_fn<F>(grid: &PhaseGrid, label: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        Field::new(*grid, grid.sample(f), label)
    }

    pub fn constant(grid: &PhaseGrid, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Field {
            grid: *grid,
            values: Array2::from_elem(grid.shape(), c),
            label: format!("{c}"),
            profile: Some(Profile::Polynomial(PolySymbol::constant(c))),
        }
    }

    /// Samples a polynomial symbol and keeps it as the field's profile.
    pub fn from_symbol(grid: &PhaseGrid, symbol: &PolySymbol) -> Self {
        let values = grid.sample(|q, p| symbol.eval(q, p));
        Field {
            grid: *grid,
            values,
            label: symbol.to_string(),
            profile: Some(Profile::Polynomial(symbol.clone())),
        }
    }

    pub fn from_radial(grid: &PhaseGrid, label: impl Into<String>, profile: RadialProfile) -> Result<Self> {
        let hbar = profile.hbar();
        let values = grid.try_sample(|q, p| Ok(Complex64::new(profile.value((q * q + p * p) / hbar)?, 0.0)))?;
        let mut field = Field::new(*grid, values, label)?;
        field.profile = Some(Profile::Radial(profile));
        Ok(field)
    }

    /// Deformed ladder symbol `a f(n)` (or `conj(a) f(n)` when `raising`).
    pub fn ladder(grid: &PhaseGrid, spec: &Deformation, hbar: f64, raising: bool) -> Result<Self> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sign = if raising { -1.0 } else { 1.0 };
        let values = grid.try_sample(|q, p| {
            let f = spec.eval((q * q + p * p) / (2.0 * hbar))?;
            Ok(Complex64::new(s * q, sign * s * p) * f)
        })?;
        let label = if raising { format!("abar*f(n) [{spec}]") } else { format!("a*f(n) [{spec}]") };
        let mut field = Field::new(*grid, values, label)?;
        field.profile = Some(Profile::Ladder { raising, spec: spec.clone(), hbar });
        Ok(field)
    }

    pub fn with_profile(mut self, profile: Option<Profile>) -> Self {
        self.profile = profile;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<Complex64> {
        self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn profile(&self) -> Option<&Profile> {
        self.profile.as_ref()
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[[i, j]]
    }

    pub(crate) fn raw(grid: PhaseGrid, values: Array2<Complex64>, label: impl Into<String>) -> Self {
        Field { grid, values, label: label.into(), profile: None }
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn zip_with(&self, other: &Field, label: String, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Field> {
        self.check_same_grid(other)?;
        let mut values = Array2::zeros(self.grid.shape());
        Zip::from(&mut values)
            .and(&self.values)
            .and(&other.values)
            .for_each(|o, &a, &b| *o = f(a, b));
        Ok(Field::raw(self.grid, values, label))
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, format!("({})+({})", self.label, other.label), |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, format!("({})-({})", self.label, other.label), |a, b| a - b)
    }

    pub fn mul(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, format!("({})*({})", self.label, other.label), |a, b| a * b)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Field {
        let c = c.into();
        Field::raw(self.grid, self.values.mapv(|v| v * c), format!("{c}*({})", self.label))
    }

    /// Complex conjugate; the profile is carried over where it has a conjugate form.
    pub fn conj(&self) -> Field {
        let profile = self.profile.as_ref().map(|p| match p {
            Profile::Radial(r) => Profile::Radial(r.clone()),
            Profile::Polynomial(s) => Profile::Polynomial(s.conj()),
            Profile::Ladder { raising, spec, hbar } => {
                Profile::Ladder { raising: !raising, spec: spec.clone(), hbar: *hbar }
            }
        });
        Field {
            grid: self.grid,
            values: self.values.mapv(|v| v.conj()),
            label: format!("conj({})", self.label),
            profile,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasespace::special::laguerre;

    #[test]
    fn wigner_derivatives_match_finite_differences() {
        let profile = RadialProfile::Wigner { coefficients: vec![(0, 0.3), (3, 0.5), (6, 0.2)], hbar: 1.0 };
        let h = 1e-4;
        for u in [0.1, 0.9, 2.5, 6.0] {
            for k in 0..3 {
                let fd = (profile.derivative(u + h, k).unwrap() - profile.derivative(u - h, k).unwrap()) / (2.0 * h);
                let exact = profile.derivative(u, k + 1).unwrap();
                assert!((fd - exact).abs() < 1e-6 * (1.0 + exact.abs()), "u={u} k={k}");
            }
        }
    }

    #[test]
    fn fock_profile_value() {
        let p = RadialProfile::fock(4, 1.0);
        let u: f64 = 1.3;
        let direct = 2.0 * (-u).exp() * laguerre(4, 2.0 * u);
        assert!((p.value(u).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_derivative_matches_finite_difference() {
        for spec in Deformation::registry() {
            let p = RadialProfile::Hamiltonian { spec: spec.clone(), hbar: 1.0, omega: 1.3 };
            let h = 1e-5;
            for u in [0.5, 2.0, 7.0] {
                let fd = (p.value(u + h).unwrap() - p.value(u - h).unwrap()) / (2.0 * h);
                assert!((p.derivative(u, 1).unwrap() - fd).abs() < 1e-7, "{spec} u={u}");
            }
        }
        let sq = RadialProfile::Hamiltonian { spec: Deformation::SqrtN, hbar: 1.0, omega: 1.0 };
        assert!(sq.derivative(1.0, 2).is_err());
        assert_eq!(sq.max_order(), 1);
    }

    #[test]
    fn conj_flips_ladder_profile() {
        let g = PhaseGrid::square(2.0, 9, 1.0).unwrap();
        let a = Field::ladder(&g, &Deformation::SqrtN, 1.0, false).unwrap();
        let abar = Field::ladder(&g, &Deformation::SqrtN, 1.0, true).unwrap();
        let c = a.conj();
        assert_eq!(c.values(), abar.values());
        assert_eq!(c.profile(), abar.profile());
    }

    #[test]
    fn rejects_non_finite_values() {
        let g = PhaseGrid::square(1.0, 5, 1.0).unwrap();
        let mut v = Array2::zeros(g.shape());
        v[[1, 1]] = Complex64::new(f64::NAN, 0.0);
        assert!(Field::new(g, v, "bad").is_err());
    }
}
