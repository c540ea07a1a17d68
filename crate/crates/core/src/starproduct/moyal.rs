use std::collections::hash_map::Entry;
use std::collections::HashMap;

use num_complex::Complex64;

use super::symbol::PolySymbol;
use crate::error::Result;
use crate::phasespace::{mixed_derivative_auto, Field};
use crate::phasespace::special::binomial;

fn factorial(m: u32) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

/// Coefficient `(i hbar / 2)^m / m!` of the m-th bidifferential power.
fn order_coefficient(hbar: f64, m: u32) -> Complex64 {
    Complex64::new(0.0, 0.5 * hbar).powu(m) / factorial(m)
}

/// Exact Moyal product of two polynomial symbols.
///
/// `k * g = sum_m (i hbar/2)^m / m! sum_j (-1)^j C(m,j) (d_q^{m-j} d_p^j k)(d_p^{m-j} d_q^j g)`;
/// the series stops at `min(deg k, deg g)`.
pub fn moyal_exact(k: &PolySymbol, g: &PolySymbol, hbar: f64) -> PolySymbol {
    let top = k.max_degree().min(g.max_degree());
    let mut out = PolySymbol::zero();
    for m in 0..=top {
        let coeff = order_coefficient(hbar, m);
        for j in 0..=m {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let left = k.derivative(m - j, j);
            let right = g.derivative(j, m - j);
            if left.is_zero() || right.is_zero() {
                continue;
            }
            let c = coeff * (sign * binomial(m as usize, j as usize));
            out = out.add(&left.mul(&right).scale(c));
        }
    }
    out
}

/// Left Moyal multiplication `h * w` of a grid field by a polynomial symbol.
///
/// Derivatives of `w` come from its registered profile when available and from
/// repeated fourth-order stencils otherwise.
pub fn moyal_apply(h: &PolySymbol, w: &Field, hbar: f64) -> Result<Field> {
    let grid = *w.grid();
    let mut acc = ndarray::Array2::<Complex64>::zeros(grid.shape());
    let mut cache: HashMap<(usize, usize), Field> = HashMap::new();
    for m in 0..=h.max_degree() {
        let coeff = order_coefficient(hbar, m);
        for j in 0..=m {
            let left = h.derivative(m - j, j);
            if left.is_zero() {
                continue;
            }
            // right factor: d_q^j d_p^{m-j} w
            let key = (j as usize, (m - j) as usize);
            let dw = match cache.entry(key) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(mixed_derivative_auto(w, key.0, key.1)?),
            };
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let c = coeff * (sign * binomial(m as usize, j as usize));
            let left_vals = grid.sample(|q, p| left.eval(q, p));
            ndarray::Zip::from(&mut acc)
                .and(&left_vals)
                .and(dw.values())
                .for_each(|o, &l, &r| *o += c * l * r);
        }
    }
    Ok(Field::raw(grid, acc, format!("({h}) *M ({})", w.label())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasespace::{fock_wigner, gradient, DerivativeMethod, PhaseGrid};

    fn sym(s: &str) -> PolySymbol {
        s.parse().unwrap()
    }

    #[test]
    fn simple_products() {
        assert_eq!(moyal_exact(&sym("q"), &sym("q"), 0.7), sym("q^2"));
        let hbar = 0.3;
        let expected = sym("q*p").add(&PolySymbol::constant(Complex64::new(0.0, hbar / 2.0)));
        assert_eq!(moyal_exact(&sym("q"), &sym("p"), hbar), expected);
    }

    #[test]
    fn ladder_commutator_is_one() {
        for hbar in [1.0, 0.25, 3.0] {
            let a = PolySymbol::a();
            let ab = PolySymbol::a_bar();
            let comm = moyal_exact(&a, &ab, hbar).sub(&moyal_exact(&ab, &a, hbar)).scale(1.0 / hbar);
            let diff = comm.sub(&PolySymbol::constant(1.0));
            assert!(diff.max_abs_coeff() < 1e-15, "hbar={hbar}: {comm}");
        }
    }

    #[test]
    fn constant_symbol_is_identity() {
        let g = PhaseGrid::square(4.0, 65, 1.0).unwrap();
        let w = fock_wigner(3, &g).unwrap();
        let out = moyal_apply(&PolySymbol::constant(1.0), &w, 1.0).unwrap();
        assert_eq!(out.values(), w.values());
    }

    #[test]
    fn oscillator_symbol_on_vacuum() {
        let g = PhaseGrid::square(6.0, 257, 1.0).unwrap();
        let w = fock_wigner(0, &g).unwrap();
        let out = moyal_apply(&sym("(q^2+p^2)/2"), &w, 1.0).unwrap();
        let expected = w.scale(0.5);
        assert!(out.max_abs_diff(&expected).unwrap() < 1e-8);
    }

    #[test]
    fn linear_symbol_has_two_terms() {
        let hbar = 0.8;
        let g = PhaseGrid::square(5.0, 129, hbar).unwrap();
        let w = fock_wigner(0, &g).unwrap();
        let out = moyal_apply(&PolySymbol::q(), &w, hbar).unwrap();
        let (_, dp) = gradient(&w, DerivativeMethod::Analytic).unwrap();
        let q = Field::from_symbol(&g, &PolySymbol::q());
        let expected = q.mul(&w).unwrap().add(&dp.scale(Complex64::new(0.0, hbar / 2.0))).unwrap();
        assert!(out.max_abs_diff(&expected).unwrap() < 1e-14);
    }
}
