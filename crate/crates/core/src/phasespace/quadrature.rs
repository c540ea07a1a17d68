use num_complex::Complex64;

use super::field::Field;

/// Trapezoid-rule integral of `field` against `dq dp / (2 pi hbar)`.
///
/// Summation runs sequentially in index order so results are bit-reproducible.
pub fn integrate(field: &Field) -> Complex64 {
    let g = field.grid();
    let mut acc = Complex64::new(0.0, 0.0);
    for ((i, j), v) in field.values().indexed_iter() {
        acc += v * g.trapezoid_weight(i, j);
    }
    acc * (g.dq() * g.dp() / (2.0 * std::f64::consts::PI * g.hbar))
}

/// Grid-weighted L2 norm `sqrt(sum w_ij |v_ij|^2 dq dp)` restricted to points
/// where `mask(q, p)` holds.
pub fn l2_norm_where(field: &Field, mask: impl Fn(f64, f64) -> bool) -> f64 {
    let g = field.grid();
    let mut acc = 0.0;
    for ((i, j), v) in field.values().indexed_iter() {
        if mask(g.q(i), g.p(j)) {
            acc += v.norm_sqr() * g.trapezoid_weight(i, j);
        }
    }
    (acc * g.dq() * g.dp()).sqrt()
}

pub fn l2_norm(field: &Field) -> f64 {
    l2_norm_where(field, |_, _| true)
}
