use fstar_core::phasespace::{fock_wigner, Field, PhaseGrid};
use fstar_core::starproduct::{fstar_apply, moyal_apply, moyal_exact};
use fstar_core::{Deformation, PolySymbol, StarOrder};
use num_complex::Complex64;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn polynomial(max_degree: u32) -> impl Strategy<Value = PolySymbol> {
    prop::collection::vec(((0..=max_degree, 0..=max_degree), coeff()), 1..6).prop_map(move |terms| {
        PolySymbol::from_terms(terms.into_iter().filter(|((a, b), _)| a + b <= max_degree))
    })
}

fn relative_gap(a: &PolySymbol, b: &PolySymbol) -> f64 {
    a.sub(b).max_abs_coeff() / a.max_abs_coeff().max(b.max_abs_coeff()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moyal_is_associative(k in polynomial(4), g in polynomial(4), h in polynomial(4), hbar in 0.05f64..2.0) {
        let left = moyal_exact(&moyal_exact(&k, &g, hbar), &h, hbar);
        let right = moyal_exact(&k, &moyal_exact(&g, &h, hbar), hbar);
        prop_assert!(relative_gap(&left, &right) <= 1e-12);
    }

    #[test]
    fn moyal_is_bilinear(k in polynomial(3), g in polynomial(3), h in polynomial(3), c in coeff()) {
        let left = moyal_exact(&k.scale(c).add(&g), &h, 0.7);
        let right = moyal_exact(&k, &h, 0.7).scale(c).add(&moyal_exact(&g, &h, 0.7));
        prop_assert!(relative_gap(&left, &right) <= 1e-13);
    }

    #[test]
    fn conjugation_reverses_order(k in polynomial(3), g in polynomial(3)) {
        // conj(k * g) = conj(g) * conj(k)
        let left = moyal_exact(&k, &g, 0.9).conj();
        let right = moyal_exact(&g.conj(), &k.conj(), 0.9);
        prop_assert!(relative_gap(&left, &right) <= 1e-13);
    }

    #[test]
    fn printed_symbols_parse_back(k in polynomial(4)) {
        let back: PolySymbol = k.to_string().parse().unwrap();
        prop_assert!(relative_gap(&k, &back) <= 1e-15);
    }
}

#[test]
fn first_order_identity_product_matches_moyal_truncation() {
    // for linear symbols the Moyal series stops after the first order
    let grid = PhaseGrid::square(3.0, 41, 1.0).unwrap();
    let k: PolySymbol = "2*q - i*p + 1".parse().unwrap();
    let g: PolySymbol = "q^3 + p^2*q".parse().unwrap();
    for hbar in [1.0, 0.25] {
        let out = fstar_apply(
            &Field::from_symbol(&grid, &k),
            &Field::from_symbol(&grid, &g),
            &Deformation::Identity,
            hbar,
            StarOrder::First,
        )
        .unwrap();
        let exact = Field::from_symbol(&grid, &moyal_exact(&k, &g, hbar));
        assert!(out.max_abs_diff(&exact).unwrap() <= 1e-12);
    }
}

#[test]
fn fstar_tends_to_pointwise_product() {
    let grid = PhaseGrid::square(3.0, 41, 1.0).unwrap();
    let q = Field::from_symbol(&grid, &PolySymbol::q());
    let p = Field::from_symbol(&grid, &"p + q^2".parse().unwrap());
    let plain = q.mul(&p).unwrap();
    let mut previous = f64::INFINITY;
    for hbar in [1e-1, 1e-2, 1e-3, 1e-4] {
        let gap = fstar_apply(&q, &p, &Deformation::SqrtN, hbar, StarOrder::First).unwrap().max_abs_diff(&plain).unwrap();
        assert!(gap < previous);
        previous = gap;
    }
    assert!(previous < 1e-3);
}

#[test]
fn moyal_apply_agrees_with_exact_product_on_polynomials() {
    let grid = PhaseGrid::square(2.0, 33, 0.8).unwrap();
    let h: PolySymbol = "q^2*p + i*p^3".parse().unwrap();
    let w: PolySymbol = "q^4 - 2*q*p".parse().unwrap();
    let applied = moyal_apply(&h, &Field::from_symbol(&grid, &w), 0.8).unwrap();
    let exact = Field::from_symbol(&grid, &moyal_exact(&h, &w, 0.8));
    assert!(applied.max_abs_diff(&exact).unwrap() <= 1e-11);
}

#[test]
fn annihilation_lowers_the_vacuum_to_zero() {
    // a * W_0 = 0 for the Wigner function of the ground state
    let grid = PhaseGrid::square(7.0, 129, 1.0).unwrap();
    let out = moyal_apply(&PolySymbol::a(), &fock_wigner(0, &grid).unwrap(), 1.0).unwrap();
    assert!(out.max_abs() <= 1e-14);
}
