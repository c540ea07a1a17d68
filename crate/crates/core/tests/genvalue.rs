use fstar_core::deformation::spectrum;
use fstar_core::genvalue::{
    associativity_defect, bracket_term, build_hamiltonian, commutator_report, genvalue_residual, linear_deformation_sweep,
    DEFAULT_R_CUT,
};
use fstar_core::phasespace::{fock_wigner, Field, PhaseGrid};
use fstar_core::{Deformation, Error, StarOrder};

#[test]
fn genvalue_energy_matches_independent_closed_form() {
    let grid = PhaseGrid::square(6.0, 65, 1.0).unwrap();
    for spec in Deformation::registry() {
        for n in [0usize, 2, 7] {
            let r = genvalue_residual(&spec, n, &grid, 1.3, StarOrder::First, DEFAULT_R_CUT).unwrap();
            let x = n as f64;
            let independent = 0.5 * 1.3 * ((x + 1.0) * spec.eval(x + 1.0).unwrap().powi(2) + x * spec.eval(x).unwrap().powi(2));
            let e = r.energy.unwrap();
            assert!((e - independent).abs() <= 1e-12 * independent);
            assert_eq!(e, spectrum(&spec, n, 1.0, 1.3).unwrap()[n].energy);
        }
    }
}

#[test]
fn sqrt_n_residual_regression() {
    // reference norms recorded from a run checked against the closed forms below
    let golden = [
        (0usize, 5.869021826689085e-1, 1.5976683105619525e0),
        (1, 3.9431120121777314e0, 4.180323991923565e0),
        (3, 2.3263221216996904e1, 2.0570034306229616e1),
    ];
    let grid = PhaseGrid::square(6.0, 129, 1.0).unwrap();
    for (n, max_abs, l2) in golden {
        let r = genvalue_residual(&Deformation::SqrtN, n, &grid, 1.0, StarOrder::First, DEFAULT_R_CUT).unwrap();
        assert!((r.max_abs - max_abs).abs() <= 1e-9, "n={n} max_abs {:?}", r.max_abs);
        assert!((r.l2 - l2).abs() <= 1e-9, "n={n} l2 {:?}", r.l2);
    }
}

#[test]
fn sqrt_n_ground_state_residual_peak() {
    // first order leaves (H - E_0) W_0 = 2 n (n+1) e^{-2n}, maximal at n = 1/sqrt(2)
    let grid = PhaseGrid::square(6.0, 257, 1.0).unwrap();
    let r = genvalue_residual(&Deformation::SqrtN, 0, &grid, 1.0, StarOrder::First, DEFAULT_R_CUT).unwrap();
    let n = std::f64::consts::FRAC_1_SQRT_2;
    let peak = 2.0 * n * (n + 1.0) * (-2.0 * n).exp();
    assert!((r.max_abs - peak).abs() <= 1e-3 * peak, "{} vs {peak}", r.max_abs);
}

#[test]
fn phase_average_of_the_star_product() {
    // for the undeformed oscillator int (H * W_n) dmu = E_n
    let grid = PhaseGrid::square(8.0, 257, 1.0).unwrap();
    for n in [0usize, 4] {
        let r = genvalue_residual(&Deformation::Identity, n, &grid, 1.0, StarOrder::First, DEFAULT_R_CUT).unwrap();
        assert!((r.phase_average.unwrap() - (n as f64 + 0.5)).abs() <= 1e-9);
    }
}

#[test]
fn hamiltonian_mirror_symmetry() {
    let grid = PhaseGrid::square(5.0, 65, 1.0).unwrap();
    let last = grid.n_q - 2;
    for spec in Deformation::registry() {
        let h = build_hamiltonian(&spec, &grid, 1.0).unwrap();
        for (i, j) in [(0, 3), (7, 40), (31, 31)] {
            assert!((h.field.at(i, j) - h.field.at(last - i, last - j)).norm() <= 1e-12);
        }
    }
}

#[test]
fn bracket_of_radial_pair_vanishes_on_all_levels() {
    let grid = PhaseGrid::square(6.0, 97, 1.0).unwrap();
    let spec = Deformation::qdef(1.2).unwrap();
    let h = build_hamiltonian(&spec, &grid, 1.0).unwrap();
    for n in 0..=10 {
        let b = bracket_term(&h.field, &fock_wigner(n, &grid).unwrap(), &spec, 1.0).unwrap();
        assert!(b.max_abs() <= 1e-12);
    }
}

#[test]
fn small_deformation_commutator_is_linear_in_eps() {
    // f = 1 + eps n gives a deviation eps (2n - 1) + O(eps^2 n^2); the disc reaches n = 8
    let grid = PhaseGrid::square(4.0, 65, 1.0).unwrap();
    let eps = [1e-4, 1e-5, 1e-6];
    let sweep = linear_deformation_sweep(&eps, &grid, DEFAULT_R_CUT).unwrap();
    assert!((sweep.slope - 1.0).abs() <= 1e-2, "{}", sweep.slope);
    for (e, dev) in sweep.samples {
        assert!((dev / e - 15.0).abs() <= 0.3, "{e}: {dev}");
    }
}

#[test]
fn commutator_report_fields_are_consistent() {
    let grid = PhaseGrid::square(4.0, 33, 1.0).unwrap();
    let r = commutator_report(&Deformation::qdef(1.2).unwrap(), &grid, StarOrder::First).unwrap();
    let rebuilt = r.numerical.sub(&r.target).unwrap();
    assert_eq!(rebuilt.values(), r.deviation.values());
    assert!(r.vs_closed_form.max_abs <= 1e-10);
}

#[test]
fn exact_zero_associativity_is_reported() {
    let grid = PhaseGrid::square(3.0, 17, 1.0).unwrap();
    let field = |s: &str| Field::from_symbol(&grid, &s.parse().unwrap());
    let result =
        associativity_defect(&field("q"), &field("p"), &field("q + p"), &Deformation::Identity, &[1e-1, 1e-2, 1e-3], StarOrder::Exact);
    assert!(matches!(result, Err(Error::DegenerateFit { .. })));
}
