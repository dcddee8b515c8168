//! Robustness check for boxes with log-concave densities on `[0, 1]`.

use crate::dist::{Dist, Segment};
use crate::error::{Error, Result};
use crate::prophet::{expected_max, spectrum, Instance};

use super::{robustness_report, RobustnessReport};

const MIN_GRID: usize = 1024;

/// A density sampled on a uniform grid over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity {
    values: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < MIN_GRID {
            return Err(Error::InvalidParameter(format!(
                "density grid has {} points, need at least {MIN_GRID}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(
                "density values must be finite and nonnegative".into(),
            ));
        }
        let d = Self { values };
        let integral = d.trapezoid();
        if (integral - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidParameter(format!(
                "density integrates to {integral}, not 1"
            )));
        }
        Ok(d)
    }

    pub fn from_fn(points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = 1.0 / (points as f64 - 1.0);
        Self::new((0..points).map(|k| f(k as f64 * h)).collect())
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.values.len() as f64 - 1.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn trapezoid(&self) -> f64 {
        let h = self.step();
        self.values.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum()
    }

    /// Piecewise-linear interpolation of the table, renormalized to unit mass.
    pub fn to_dist(&self) -> Result<Dist> {
        let h = self.step();
        let scale = 1.0 / self.trapezoid();
        let n = self.values.len();
        let segments = (0..n - 1)
            .map(|k| Segment {
                lo: k as f64 * h,
                hi: if k + 2 == n { 1.0 } else { (k + 1) as f64 * h },
                f_lo: self.values[k] * scale,
                f_hi: self.values[k + 1] * scale,
            })
            .collect();
        Dist::from_parts(vec![], segments)
    }

    /// Largest second difference of `log f` over the positive part of the grid.
    fn max_log_second_difference(&self) -> f64 {
        self.values
            .windows(3)
            .filter(|w| w.iter().all(|v| *v > 0.0))
            .map(|w| w[2].ln() - 2.0 * w[1].ln() + w[0].ln())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn value_at_one(&self) -> f64 {
        *self.values.last().unwrap()
    }

    fn slope_at_one(&self) -> f64 {
        let n = self.values.len();
        (self.values[n - 1] - self.values[n - 2]) / self.step()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogConcaveReport {
    pub boxes: usize,
    pub log_concave: bool,
    pub max_log_second_difference: f64,
    pub endpoint_conditions: bool,
    pub box_count_condition: bool,
    pub min_hbar_second_difference: f64,
    pub hbar_convex: bool,
    pub t_kw: f64,
    pub t_sc: f64,
    pub thresholds_ordered: bool,
    /// `P(max <= E[max])`, at most one half when the product CDF is convex.
    pub hbar_at_opt: f64,
    pub evaluations: Vec<RobustnessReport>,
    pub holds: bool,
}

/// Checks the log-concave family conditions, convexity of the product CDF, the ordering of
/// `2 T_KW` and `T_SC`, and half-robustness at both ends and the middle of that interval.
pub fn logconcave_robustness_check(densities: &[TabulatedDensity], alpha: f64, beta: f64) -> Result<LogConcaveReport> {
    const TOL: f64 = 1e-9;
    if densities.is_empty() {
        return Err(Error::InvalidParameter("need at least one density".into()));
    }
    let grid_len = densities[0].values.len();
    if densities.iter().any(|d| d.values.len() != grid_len) {
        return Err(Error::InvalidParameter("densities must share one grid".into()));
    }
    let h = densities[0].step();
    let n = densities.len();

    let max_log = densities
        .iter()
        .map(TabulatedDensity::max_log_second_difference)
        .fold(f64::NEG_INFINITY, f64::max);
    // The smooth claim is log f'' <= 0; allow 1e-7 per unit of h^-2 in divided-difference form.
    let log_concave = max_log <= 1e-7;
    let endpoint_conditions = densities
        .iter()
        .all(|d| d.value_at_one() >= alpha - TOL && d.slope_at_one() >= -beta - TOL);
    let box_count_condition = n as f64 >= 1.0 + beta / (alpha * alpha);

    let inst = Instance::new(
        densities
            .iter()
            .map(TabulatedDensity::to_dist)
            .collect::<Result<Vec<_>>>()?,
    )?;
    let hbar: Vec<f64> = (0..grid_len).map(|k| inst.product_cdf(k as f64 * h)).collect();
    let min_second = hbar
        .windows(3)
        .map(|w| w[2] - 2.0 * w[1] + w[0])
        .fold(f64::INFINITY, f64::min);
    let hbar_convex = min_second >= -TOL;

    let opt = expected_max(&inst);
    let spec = spectrum(&inst);
    let t_kw = 0.5 * opt;
    let thresholds_ordered = 2.0 * t_kw <= spec.t_sc + TOL;
    let hbar_at_opt = inst.product_cdf(opt);

    let lo = 2.0 * t_kw;
    let hi = spec.t_sc.max(lo);
    let evaluations: Vec<RobustnessReport> = [lo, 0.5 * (lo + hi), hi]
        .iter()
        .map(|&t| robustness_report(&inst, t).with_bounds(0.5, 0.5))
        .collect();

    let holds = log_concave
        && endpoint_conditions
        && box_count_condition
        && hbar_convex
        && thresholds_ordered
        && hbar_at_opt <= 0.5 + TOL
        && evaluations.iter().all(|r| r.holds);
    Ok(LogConcaveReport {
        boxes: n,
        log_concave,
        max_log_second_difference: max_log,
        endpoint_conditions,
        box_count_condition,
        min_hbar_second_difference: min_second,
        hbar_convex,
        t_kw,
        t_sc: spec.t_sc,
        thresholds_ordered,
        hbar_at_opt,
        evaluations,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_coarse_or_unnormalized() {
        assert!(TabulatedDensity::from_fn(100, |_| 1.0).is_err());
        assert!(TabulatedDensity::from_fn(2048, |_| 2.0).is_err());
    }

    #[test]
    fn increasing_linear_density_passes() {
        let d = TabulatedDensity::from_fn(1025, |x| 2.0 * x).unwrap();
        let r = logconcave_robustness_check(&[d.clone(), d.clone(), d], 2.0, 0.0).unwrap();
        assert!(r.log_concave && r.endpoint_conditions && r.box_count_condition);
        assert!(r.holds, "{r:?}");
    }
}
