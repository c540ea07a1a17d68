use crate::deformation::Deformation;
use crate::error::{Error, Result};
use crate::fit::loglog_slope;
use crate::phasespace::{l2_norm, Field};
use crate::starproduct::{fstar_apply, StarOrder};

/// Defects below this are treated as exact zeros.
pub const DEFECT_FLOOR: f64 = 1e-14;

/// `(hbar, ||(k * g) * h - k * (g * h)||_2)` samples and their log-log slope.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociativityStudy {
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
}

/// `(k * g) * h - k * (g * h)` at a single `hbar`.
pub fn associator(k: &Field, g: &Field, h: &Field, spec: &Deformation, hbar: f64, order: StarOrder) -> Result<Field> {
    let star = |a: &Field, b: &Field| fstar_apply(a, b, spec, hbar, order);
    let left = star(&star(k, g)?, h)?;
    let right = star(k, &star(g, h)?)?;
    Ok(left.sub(&right)?.with_label("associator"))
}

fn check_hbar_list(hbar_list: &[f64]) -> Result<()> {
    if let Some(bad) = hbar_list.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
        return Err(Error::InvalidArgument(format!("hbar values must be positive, got {bad}")));
    }
    let mut distinct: Vec<f64> = hbar_list.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InvalidArgument("associativity study needs at least three distinct hbar values".into()));
    }
    let span = (distinct[distinct.len() - 1] / distinct[0]).log10();
    if span < 2.0 - 1e-12 {
        return Err(Error::InvalidArgument(format!("hbar values must span two decades, got {span:.3}")));
    }
    Ok(())
}

/// Measures the associativity defect over `hbar_list` and fits its power law in `hbar`.
///
/// Returns [`Error::DegenerateFit`] (carrying the samples) when every defect is below
/// [`DEFECT_FLOOR`], i.e. the product is associative to rounding.
pub fn associativity_defect(
    k: &Field,
    g: &Field,
    h: &Field,
    spec: &Deformation,
    hbar_list: &[f64],
    order: StarOrder,
) -> Result<AssociativityStudy> {
    check_hbar_list(hbar_list)?;
    let samples = hbar_list
        .iter()
        .map(|&hbar| Ok((hbar, l2_norm(&associator(k, g, h, spec, hbar, order)?))))
        .collect::<Result<Vec<_>>>()?;
    if samples.iter().all(|(_, d)| *d < DEFECT_FLOOR) {
        return Err(Error::DegenerateFit { floor: DEFECT_FLOOR, samples });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
    Ok(AssociativityStudy { slope: loglog_slope(&xs, &ys)?, samples })
}
