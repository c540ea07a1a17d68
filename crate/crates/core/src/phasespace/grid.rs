use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Uniform rectangular (q, p) sample grid.
///
/// Sample `i` along q sits at `q_min + (i + offset) * dq` with
/// `dq = (q_max - q_min) / (n_q - 1)`; likewise for p. With `offset = 0.5` every
/// sample is shifted by half a cell, which keeps symmetric grids off the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n_q: usize,
    pub n_p: usize,
    pub hbar: f64,
    /// Shift in units of one cell; 0 disables it, 0.5 is the half-cell shift.
    pub offset: f64,
}

pub const HALF_CELL: f64 = 0.5;

impl Default for PhaseGrid {
    fn default() -> Self {
        PhaseGrid {
            q_min: -8.0,
            q_max: 8.0,
            p_min: -8.0,
            p_max: 8.0,
            n_q: 513,
            n_p: 513,
            hbar: 1.0,
            offset: HALF_CELL,
        }
    }
}

impl PhaseGrid {
    pub fn new(
        q_range: (f64, f64),
        p_range: (f64, f64),
        n_q: usize,
        n_p: usize,
        hbar: f64,
        offset: f64,
    ) -> Result<Self> {
        let g = PhaseGrid {
            q_min: q_range.0,
            q_max: q_range.1,
            p_min: p_range.0,
            p_max: p_range.1,
            n_q,
            n_p,
            hbar,
            offset,
        };
        g.validate()?;
        Ok(g)
    }

    /// Square grid `[-half_width, half_width]^2` with `n` samples per axis and a half-cell shift.
    pub fn square(half_width: f64, n: usize, hbar: f64) -> Result<Self> {
        Self::new((-half_width, half_width), (-half_width, half_width), n, n, hbar, HALF_CELL)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.q_min, self.q_max, self.p_min, self.p_max, self.hbar, self.offset]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGrid("non-finite grid parameter".into()));
        }
        if self.n_q < 2 || self.n_p < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 samples per axis, got {}x{}", self.n_q, self.n_p)));
        }
        if !(self.q_max > self.q_min && self.p_max > self.p_min) {
            return Err(Error::InvalidGrid("bounds must satisfy min < max".into()));
        }
        if self.hbar <= 0.0 {
            return Err(Error::InvalidGrid(format!("hbar must be positive, got {}", self.hbar)));
        }
        if !(0.0..1.0).contains(&self.offset) {
            return Err(Error::InvalidGrid(format!("offset must lie in [0, 1), got {}", self.offset)));
        }
        if self.offset != 0.0 {
            let hits_zero = |min: f64, d: f64, n: usize| (0..n).any(|i| min + (i as f64 + self.offset) * d == 0.0);
            if hits_zero(self.q_min, self.dq(), self.n_q) && hits_zero(self.p_min, self.dp(), self.n_p) {
                return Err(Error::InvalidGrid("shifted grid still contains the origin".into()));
            }
        }
        Ok(())
    }

    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        let g = PhaseGrid { hbar, ..*self };
        g.validate()?;
        Ok(g)
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.n_q - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.n_p - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + (i as f64 + self.offset) * self.dq()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + (j as f64 + self.offset) * self.dp()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_q, self.n_p)
    }

    pub fn len(&self) -> usize {
        self.n_q * self.n_p
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Trapezoid weight of sample (i, j), without the dq dp factor.
    pub fn trapezoid_weight(&self, i: usize, j: usize) -> f64 {
        let wq = if i == 0 || i + 1 == self.n_q { 0.5 } else { 1.0 };
        let wp = if j == 0 || j + 1 == self.n_p { 0.5 } else { 1.0 };
        wq * wp
    }

    /// Grid index nearest to the point (q, p).
    pub fn nearest(&self, q: f64, p: f64) -> (usize, usize) {
        let idx = |x: f64, min: f64, d: f64, n: usize| {
            let k = ((x - min) / d - self.offset).round();
            k.clamp(0.0, (n - 1) as f64) as usize
        };
        (idx(q, self.q_min, self.dq(), self.n_q), idx(p, self.p_min, self.dp(), self.n_p))
    }

    /// Samples `f(q, p)` at every grid point in parallel.
    pub fn sample<F>(&self, f: F) -> Array2<Complex64>
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let n_p = self.n_p;
        let values: Vec<Complex64> = (0..self.len())
            .into_par_iter()
            .map(|k| f(self.q(k / n_p), self.p(k % n_p)))
            .collect();
        Array2::from_shape_vec(self.shape(), values).expect("shape matches sample count")
    }

    /// Fallible sampling; the reported error is the one at the lowest flat index.
    pub fn try_sample<F>(&self, f: F) -> Result<Array2<Complex64>>
    where
        F: Fn(f64, f64) -> Result<Complex64> + Sync,
    {
        let n_p = self.n_p;
        let values: Vec<Result<Complex64>> = (0..self.len())
            .into_par_iter()
            .map(|k| f(self.q(k / n_p), self.p(k % n_p)))
            .collect();
        let values: Result<Vec<Complex64>> = values.into_iter().collect();
        Ok(Array2::from_shape_vec(self.shape(), values?).expect("shape matches sample count"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_avoids_origin() {
        let g = PhaseGrid::default();
        assert_eq!(g.dq(), 1.0 / 32.0);
        assert!((0..g.n_q).all(|i| g.q(i) != 0.0));
        assert_eq!(g.q(0), -8.0 + 1.0 / 64.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(PhaseGrid::new((1.0, -1.0), (-1.0, 1.0), 5, 5, 1.0, 0.0).is_err());
        assert!(PhaseGrid::new((-1.0, 1.0), (-1.0, 1.0), 1, 5, 1.0, 0.0).is_err());
        assert!(PhaseGrid::new((-1.0, 1.0), (-1.0, 1.0), 5, 5, 0.0, 0.0).is_err());
        // dq = 2/3, half shift puts a sample at q = 0, same for p
        assert!(PhaseGrid::new((-1.0, 1.0), (-1.0, 1.0), 4, 4, 1.0, 0.5).is_err());
    }

    #[test]
    fn nearest_point() {
        let g = PhaseGrid::square(1.0, 5, 1.0).unwrap();
        let (i, j) = g.nearest(0.0, 0.0);
        assert!(g.q(i).abs() <= 0.5 * g.dq() + 1e-15);
        assert!(g.p(j).abs() <= 0.5 * g.dp() + 1e-15);
    }
}
