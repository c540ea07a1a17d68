//! Laguerre polynomials by three-term recurrence.

/// L_n(x), via (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
pub fn laguerre(n: usize, x: f64) -> f64 {
    generalized_laguerre(n, 0.0, x)
}

/// Generalized Laguerre polynomial L_n^(alpha)(x).
pub fn generalized_laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Fills `out[m] = L_m^(alpha)(x)` for m = 0..out.len().
pub fn generalized_laguerre_sequence(alpha: f64, x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = 1.0 + alpha - x;
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit sum L_n^(a)(x) = sum_k (-1)^k C(n+a, n-k) x^k / k!, integer a.
    fn explicit(n: usize, a: usize, x: f64) -> f64 {
        (0..=n)
            .map(|k| {
                let fact: f64 = (1..=k).map(|j| j as f64).product();
                (-1f64).powi(k as i32) * binomial(n + a, n - k) * x.powi(k as i32) / fact
            })
            .sum()
    }

    #[test]
    fn examples() {
        assert_eq!(laguerre(0, 3.7), 1.0);
        assert_eq!(laguerre(5, 0.0), 1.0);
        assert_eq!(laguerre(2, 1.0), -0.5);
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for a in 0..3 {
            for n in 0..12 {
                for x in [0.0, 0.3, 1.7, 4.2, 9.0] {
                    let r = generalized_laguerre(n, a as f64, x);
                    let e = explicit(n, a, x);
                    assert!((r - e).abs() < 1e-10 * (1.0 + e.abs()), "n={n} a={a} x={x}");
                }
            }
        }
    }

    #[test]
    fn sequence_agrees_with_single_evaluations() {
        let mut buf = [0.0; 9];
        generalized_laguerre_sequence(2.0, 1.3, &mut buf);
        for (m, v) in buf.iter().enumerate() {
            assert_eq!(*v, generalized_laguerre(m, 2.0, 1.3));
        }
    }
}
