use ndarray::Zip;
use num_complex::Complex64;

use super::report::{measure, ResidualReport};
use crate::deformation::{spectrum, Deformation};
use crate::error::{Error, Result};
use crate::phasespace::{fock_wigner, integrate, Field, PhaseGrid, RadialProfile};
use crate::starproduct::{amplitude_field, fstar_apply, moyal_apply, poisson_bracket, PolySymbol, StarOrder};

/// Residual region radius in units of `sqrt(hbar)`.
pub const DEFAULT_R_CUT: f64 = 4.0;

/// Deformed oscillator Hamiltonian sampled on a grid with its radial profile registered.
#[derive(Debug, Clone)]
pub struct HamiltonianField {
    pub field: Field,
    pub spec: Deformation,
    pub hbar: f64,
    pub omega: f64,
}

/// `H = (hbar omega/2) [ (n+1) f^2(n+1) + n f^2(n) ]` with `n = (q^2+p^2)/(2 hbar)`.
pub fn build_hamiltonian(spec: &Deformation, grid: &PhaseGrid, omega: f64) -> Result<HamiltonianField> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    let profile = RadialProfile::Hamiltonian { spec: spec.clone(), hbar: grid.hbar, omega };
    let field = Field::from_radial(grid, format!("H[{spec}]"), profile)?;
    Ok(HamiltonianField { field, spec: spec.clone(), hbar: grid.hbar, omega })
}

/// Weyl symbol `omega conj(a) a` of the undeformed oscillator, used for the exact Moyal route.
pub fn oscillator_symbol(omega: f64) -> PolySymbol {
    PolySymbol::a_bar().mul(&PolySymbol::a()).scale(omega)
}

/// `(i hbar/2) F(n) (h_q w_p - h_p w_q)`.
pub fn bracket_term(h: &Field, w: &Field, spec: &Deformation, hbar: f64) -> Result<Field> {
    let amp = amplitude_field(h.grid(), spec, hbar)?;
    let mut bracket = poisson_bracket(h, w)?;
    let half = Complex64::new(0.0, 0.5 * hbar);
    Zip::from(&mut bracket).and(&amp).for_each(|b, &f| *b *= half * f);
    Field::new(*h.grid(), bracket, format!("bracket({}, {})", h.label(), w.label()))
}

/// The star product `H * W_n` used by the genvalue check.
///
/// The identity deformation uses the exact Moyal product with the oscillator symbol
/// `omega conj(a) a`; other deformations use the f-star product at `order` with the
/// deformed Hamiltonian field.
pub fn hamiltonian_star_wigner(
    spec: &Deformation,
    w: &Field,
    omega: f64,
    order: StarOrder,
) -> Result<Field> {
    let grid = w.grid();
    if spec.is_identity() {
        moyal_apply(&oscillator_symbol(omega), w, grid.hbar)
    } else {
        let h = build_hamiltonian(spec, grid, omega)?;
        fstar_apply(&h.field, w, spec, grid.hbar, order)
    }
}

/// Residual `H * W_n - E_n W_n` of the star-genvalue equation.
pub fn genvalue_residual(
    spec: &Deformation,
    n: usize,
    grid: &PhaseGrid,
    omega: f64,
    order: StarOrder,
    r_cut: f64,
) -> Result<ResidualReport> {
    let hbar = grid.hbar;
    let w = fock_wigner(n, grid)?;
    let energy = spectrum(spec, n, hbar, omega)?[n].energy;
    let star = hamiltonian_star_wigner(spec, &w, omega, order)?;
    let residual = star.sub(&w.scale(energy))?;
    let m = measure(&residual, &star, Some(r_cut));
    Ok(ResidualReport {
        identity: "genvalue".into(),
        spec: spec.to_string(),
        n: Some(n),
        hbar,
        omega: Some(omega),
        order: if spec.is_identity() { StarOrder::Exact } else { order },
        max_abs: m.max_abs,
        l2: m.l2,
        imag_max: m.imag_max,
        witness: m.witness,
        grid: *grid,
        energy: Some(energy),
        phase_average: Some(integrate(&star).re),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonian_examples() {
        let g = PhaseGrid::new((-2.0, 2.0), (-2.0, 2.0), 9, 9, 1.0, 0.5).unwrap();
        let h = build_hamiltonian(&Deformation::Identity, &g, 1.0).unwrap();
        for ((i, j), v) in h.field.values().indexed_iter() {
            let (q, p) = (g.q(i), g.p(j));
            assert!((v.re - ((q * q + p * p) / 2.0 + 0.5)).abs() < 1e-14);
        }
        let exact = PhaseGrid::new((-2.0, 2.0), (-2.0, 2.0), 5, 5, 1.0, 0.0).unwrap();
        let h = build_hamiltonian(&Deformation::Identity, &exact, 1.0).unwrap();
        assert_eq!(h.field.at(3, 3).re, 1.5);
        let s = build_hamiltonian(&Deformation::SqrtN, &exact, 1.0).unwrap();
        assert_eq!(s.field.at(3, 3).re, 2.5);
    }

    #[test]
    fn hamiltonian_is_radially_symmetric() {
        let g = PhaseGrid::square(6.0, 97, 1.0).unwrap();
        for spec in Deformation::registry() {
            let h = build_hamiltonian(&spec, &g, 1.0).unwrap();
            let v = h.field.values();
            let last = g.n_q - 2;
            for i in 0..g.n_q - 1 {
                for j in 0..g.n_p - 1 {
                    assert!((v[[i, j]] - v[[j, i]]).norm() < 1e-12);
                    assert!((v[[i, j]] - v[[last - i, j]]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bracket_examples() {
        let g = PhaseGrid::new((-2.0, 2.0), (-2.0, 2.0), 9, 9, 0.5, 0.0).unwrap();
        let q = Field::from_symbol(&g, &PolySymbol::q());
        let p = Field::from_symbol(&g, &PolySymbol::p());
        let b = bracket_term(&q, &p, &Deformation::Identity, 0.5).unwrap();
        assert!(b.values().iter().all(|v| *v == Complex64::new(0.0, 0.25)));
        let q2 = Field::from_symbol(&g, &"q^2".parse().unwrap());
        let p2 = Field::from_symbol(&g, &"p^2".parse().unwrap());
        let b = bracket_term(&q2, &p2, &Deformation::Identity, 0.5).unwrap();
        let (i, j) = (6, 6);
        assert_eq!((g.q(i), g.p(j)), (1.0, 1.0));
        assert_eq!(b.at(i, j), Complex64::new(0.0, 2.0 * 0.5));
    }

    #[test]
    fn radial_bracket_vanishes() {
        let g = PhaseGrid::square(5.0, 101, 1.0).unwrap();
        let w = fock_wigner(3, &g).unwrap();
        for spec in Deformation::registry() {
            let h = build_hamiltonian(&spec, &g, 1.0).unwrap();
            let b = bracket_term(&h.field, &w, &spec, 1.0).unwrap();
            assert!(b.max_abs() <= 1e-12, "{spec}: {}", b.max_abs());
        }
    }

    #[test]
    fn sho_genvalue_small_grid() {
        let g = PhaseGrid::square(8.0, 257, 1.0).unwrap();
        for n in [0, 3, 7] {
            let r = genvalue_residual(&Deformation::Identity, n, &g, 1.0, StarOrder::First, DEFAULT_R_CUT).unwrap();
            assert!(r.max_abs <= 1e-8, "n={n} {}", r.max_abs);
            assert!(r.imag_max <= 1e-10);
            assert_eq!(r.energy, Some(n as f64 + 0.5));
        }
    }

    #[test]
    fn sqrt_n_residual_is_pointwise_mismatch() {
        let g = PhaseGrid::square(6.0, 129, 1.0).unwrap();
        let r = genvalue_residual(&Deformation::SqrtN, 1, &g, 1.0, StarOrder::First, DEFAULT_R_CUT).unwrap();
        // first-order bracket vanishes for radial pairs, leaving (H - E_1) W_1
        let h = build_hamiltonian(&Deformation::SqrtN, &g, 1.0).unwrap();
        let w = fock_wigner(1, &g).unwrap();
        let oracle = h.field.sub(&Field::constant(&g, 2.5)).unwrap().mul(&w).unwrap();
        let (i, j) = g.nearest(r.witness.q, r.witness.p);
        assert!((oracle.at(i, j) - r.witness.value).norm() < 1e-12);
        assert!(r.max_abs > 0.1);
    }
}
