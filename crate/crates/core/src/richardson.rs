//! Richardson analysis of sequences computed on geometrically refined meshes.

use crate::error::{Error, Result};

/// Orders outside this range are clamped when turning a fit into an error estimate.
pub const ORDER_CLAMP: (f64, f64) = (1.0, 3.0);

/// Observed order and extrapolation from three successive refinements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RichardsonFit {
    /// Observed convergence order `log(|v1 - v0| / |v2 - v1|) / log(ratio)`.
    pub order: f64,
    /// Extrapolated limit using the clamped order.
    pub extrapolated: f64,
    /// Estimated error of the finest value, `|v2 - v1| / (ratio^p - 1)` with the clamped order.
    pub error: f64,
}

/// Fits `v_k = v + C h_k^p` to three values on meshes with size ratio `ratio` between levels.
pub fn fit(coarse: f64, medium: f64, fine: f64, ratio: f64) -> Result<RichardsonFit> {
    if !(ratio > 1.0) {
        return Err(Error::Parameter(format!(
            "refinement ratio must exceed 1, got {ratio}"
        )));
    }
    if ![coarse, medium, fine].iter().all(|v| v.is_finite()) {
        return Err(Error::Evaluation(
            "non-finite value in Richardson fit".into(),
        ));
    }
    let d1 = medium - coarse;
    let d2 = fine - medium;
    let order = if d2 == 0.0 {
        f64::INFINITY
    } else if d1 == 0.0 {
        0.0
    } else {
        (d1.abs() / d2.abs()).ln() / ratio.ln()
    };
    let p = if order.is_nan() {
        ORDER_CLAMP.0
    } else {
        order.clamp(ORDER_CLAMP.0, ORDER_CLAMP.1)
    };
    let denom = ratio.powf(p) - 1.0;
    Ok(RichardsonFit {
        order,
        extrapolated: fine + d2 / denom,
        error: d2.abs() / denom,
    })
}

/// Fit over the last three entries of a refinement sequence.
pub fn fit_tail(values: &[f64], ratio: f64) -> Result<RichardsonFit> {
    if values.len() < 3 {
        return Err(Error::Parameter(format!(
            "Richardson fit needs 3 levels, got {}",
            values.len()
        )));
    }
    let n = values.len();
    fit(values[n - 3], values[n - 2], values[n - 1], ratio)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_second_order_sequence() {
        let v = |h: f64| 3.0 + 0.7 * h * h;
        let f = fit(v(0.4), v(0.2), v(0.1), 2.0).unwrap();
        assert!((f.order - 2.0).abs() < 1e-10);
        assert!((f.extrapolated - 3.0).abs() < 1e-12);
        assert!((f.error - 0.7 * 0.01).abs() < 1e-12);
    }

    #[test]
    fn clamps_erratic_orders() {
        let f = fit(1.0, 1.0 + 1e-3, 1.0 + 1e-3 + 1e-2, 2.0).unwrap();
        assert!(f.order < 0.0);
        assert!((f.error - 1e-2).abs() < 1e-15);
        let g = fit(1.0, 2.0, 2.0, 2.0).unwrap();
        assert_eq!(g.error, 0.0);
    }

    #[test]
    fn validation() {
        assert!(fit(1.0, 2.0, 3.0, 1.0).is_err());
        assert!(fit(f64::NAN, 2.0, 3.0, 2.0).is_err());
        assert!(fit_tail(&[1.0, 2.0], 2.0).is_err());
    }
}
