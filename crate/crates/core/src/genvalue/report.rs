use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::phasespace::{l2_norm_where, Field, PhaseGrid};
use crate::starproduct::StarOrder;

/// Location and value of the largest residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub q: f64,
    pub p: f64,
    pub value: Complex64,
}

/// Norms quantifying how well a phase-space identity holds on a grid.
///
/// `max_abs`, `l2` and `witness` are taken over the disc `q^2 + p^2 <= r_cut^2 hbar`
/// (the whole grid when no cut is set); `imag_max` always covers the whole grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub identity: String,
    pub spec: String,
    pub n: Option<usize>,
    pub hbar: f64,
    pub omega: Option<f64>,
    pub order: StarOrder,
    pub max_abs: f64,
    pub l2: f64,
    pub imag_max: f64,
    pub witness: Witness,
    pub grid: PhaseGrid,
    /// Closed-form energy, for genvalue reports.
    pub energy: Option<f64>,
    /// Phase-space average of the star product, for genvalue reports.
    pub phase_average: Option<f64>,
}

pub(crate) struct Metrics {
    pub max_abs: f64,
    pub l2: f64,
    pub imag_max: f64,
    pub witness: Witness,
}

/// Measures `residual` inside the cut; `imag_source` supplies the imaginary-part bound.
pub(crate) fn measure(residual: &Field, imag_source: &Field, r_cut: Option<f64>) -> Metrics {
    let g = residual.grid();
    let radius2 = r_cut.map(|r| r * r * g.hbar);
    let inside = |q: f64, p: f64| radius2.is_none_or(|r2| q * q + p * p <= r2);
    let mut max_abs = 0.0;
    let mut witness = None;
    // strict comparison in index order: ties keep the lowest (q index, p index)
    for ((i, j), v) in residual.values().indexed_iter() {
        let (q, p) = (g.q(i), g.p(j));
        if !inside(q, p) {
            continue;
        }
        let a = v.norm();
        if witness.is_none() || a > max_abs {
            max_abs = a;
            witness = Some(Witness { q, p, value: *v });
        }
    }
    let witness = witness.unwrap_or(Witness { q: g.q(0), p: g.p(0), value: residual.at(0, 0) });
    Metrics {
        max_abs,
        l2: l2_norm_where(residual, inside),
        imag_max: imag_source.max_imag(),
        witness,
    }
}

/// JSON number with 17 significant digits; non-finite values become `null`.
pub fn num17(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(text.parse().expect("formatted float is a valid JSON number"))
}

pub fn grid_json(g: &PhaseGrid) -> Value {
    let mut m = Map::new();
    m.insert("q_min".into(), num17(g.q_min));
    m.insert("q_max".into(), num17(g.q_max));
    m.insert("p_min".into(), num17(g.p_min));
    m.insert("p_max".into(), num17(g.p_max));
    m.insert("n_q".into(), Value::from(g.n_q));
    m.insert("n_p".into(), Value::from(g.n_p));
    m.insert("hbar".into(), num17(g.hbar));
    m.insert("offset".into(), num17(g.offset));
    Value::Object(m)
}

impl ResidualReport {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("identity".into(), Value::from(self.identity.clone()));
        m.insert("spec".into(), Value::from(self.spec.clone()));
        m.insert("n".into(), self.n.map(Value::from).unwrap_or(Value::Null));
        m.insert("hbar".into(), num17(self.hbar));
        m.insert("omega".into(), self.omega.map(num17).unwrap_or(Value::Null));
        m.insert("order".into(), Value::from(self.order.to_string()));
        m.insert("max_abs".into(), num17(self.max_abs));
        m.insert("l2".into(), num17(self.l2));
        m.insert("imag_max".into(), num17(self.imag_max));
        let mut w = Map::new();
        w.insert("q".into(), num17(self.witness.q));
        w.insert("p".into(), num17(self.witness.p));
        w.insert("re".into(), num17(self.witness.value.re));
        w.insert("im".into(), num17(self.witness.value.im));
        m.insert("witness".into(), Value::Object(w));
        m.insert("grid".into(), grid_json(&self.grid));
        if let Some(e) = self.energy {
            m.insert("energy".into(), num17(e));
        }
        if let Some(a) = self.phase_average {
            m.insert("phase_average".into(), num17(a));
        }
        Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num17(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num17(-2.5).to_string(), "-2.5000000000000000e+0");
        assert_eq!(num17(f64::NAN), Value::Null);
        let back: f64 = num17(std::f64::consts::PI).to_string().parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn witness_ties_keep_lowest_index() {
        let g = PhaseGrid::new((-1.0, 1.0), (-1.0, 1.0), 5, 5, 1.0, 0.0).unwrap();
        let f = Field::constant(&g, 3.0);
        let m = measure(&f, &f, None);
        assert_eq!((m.witness.q, m.witness.p), (-1.0, -1.0));
        assert_eq!(m.max_abs, 3.0);
        let cut = measure(&f, &f, Some(0.5));
        assert_eq!((cut.witness.q, cut.witness.p), (-0.5, 0.0));
    }
}
