//! Searcher payoff when every box best-responds to a single threshold, and the robustness
//! checks built on it.

mod logconcave;
mod tightness;

pub use logconcave::{logconcave_robustness_check, LogConcaveReport, TabulatedDensity};
pub use tightness::{make_general_tightness_instance, make_iid_tightness_instance, make_percentage_instance};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::prophet::{expected_max, nonstrategic_payoff, spectrum, Instance};
use crate::signaling::{best_response, induce_threshold_by_product, SignalKind};

/// `(1 - 1/e) / 2`.
pub fn kw_strategic_bound() -> f64 {
    (1.0 - (-1.0f64).exp()) / 2.0
}

/// Payoffs and ratios of one threshold, optionally with the bounds it was checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessReport {
    pub threshold: f64,
    pub u_strategic: f64,
    pub u_nonstrategic: f64,
    pub opt: f64,
    pub ratio_strategic: f64,
    pub ratio_nonstrategic: f64,
    /// Required strategic ratio (0 when unchecked).
    pub required_strategic: f64,
    /// Required non-strategic ratio (0 when unchecked).
    pub required_nonstrategic: f64,
    pub holds: bool,
    pub notes: Vec<String>,
}

impl RobustnessReport {
    fn with_bounds(mut self, strategic: f64, nonstrategic: f64) -> Self {
        const TOL: f64 = 1e-9;
        self.required_strategic = strategic;
        self.required_nonstrategic = nonstrategic;
        if self.ratio_strategic < strategic - TOL {
            self.holds = false;
            self.notes.push(format!(
                "strategic ratio {:.9} below {:.9}",
                self.ratio_strategic, strategic
            ));
        }
        if self.ratio_nonstrategic < nonstrategic - TOL {
            self.holds = false;
            self.notes.push(format!(
                "non-strategic ratio {:.9} below {:.9}",
                self.ratio_nonstrategic, nonstrategic
            ));
        }
        self
    }
}

/// Searcher payoff at threshold `t` when every box plays its best response.
pub fn strategic_payoff(inst: &Instance, t: f64) -> f64 {
    let mut reach = 1.0;
    let mut payoff = 0.0;
    for d in inst.boxes() {
        let s = best_response(d, t);
        match s.kind {
            SignalKind::NoInformation => return payoff + reach * d.mean(),
            SignalKind::ThresholdSignaling => {
                payoff += reach * s.accept_prob * t;
                reach *= 1.0 - s.accept_prob;
            }
            SignalKind::AlwaysRejected => {}
        }
    }
    payoff
}

/// `T (1 - Π p_i)`, valid when `t` exceeds every prior mean.
pub fn strategic_payoff_closed_form(inst: &Instance, t: f64) -> Result<f64> {
    if t <= inst.max_mean() {
        return Err(Error::InvalidParameter(format!(
            "threshold {t} does not exceed every prior mean"
        )));
    }
    let p: f64 = inst.boxes().iter().map(|d| best_response(d, t).reject_prob()).product();
    Ok(t * (1.0 - p))
}

pub fn robustness_report(inst: &Instance, t: f64) -> RobustnessReport {
    let opt = expected_max(inst);
    let us = strategic_payoff(inst, t);
    let uns = nonstrategic_payoff(inst, t);
    RobustnessReport {
        threshold: t,
        u_strategic: us,
        u_nonstrategic: uns,
        opt,
        ratio_strategic: if opt > 0.0 { us / opt } else { 1.0 },
        ratio_nonstrategic: if opt > 0.0 { uns / opt } else { 1.0 },
        required_strategic: 0.0,
        required_nonstrategic: 0.0,
        holds: true,
        notes: Vec::new(),
    }
}

/// Threshold at half the expected maximum: `(1-1/e)/2` strategic and `1/2` classic.
pub fn check_kw_robustness(inst: &Instance) -> RobustnessReport {
    let t = 0.5 * expected_max(inst);
    robustness_report(inst, t).with_bounds(kw_strategic_bound(), 0.5)
}

/// Upper bound on the prophet value from the pooling cutoffs at `t`.
pub fn opt_upper_bound_cutoffs(inst: &Instance, t: f64) -> Result<f64> {
    if t <= inst.max_mean() {
        return Err(Error::InvalidParameter(format!(
            "threshold {t} does not exceed every prior mean"
        )));
    }
    let mut top_cutoff = f64::NEG_INFINITY;
    let mut top_reject = 0.0;
    let mut sum = 0.0;
    for d in inst.boxes() {
        let s = best_response(d, t);
        let cutoff = s.cutoff.unwrap_or_else(|| d.upper());
        if cutoff > top_cutoff {
            top_cutoff = cutoff;
            top_reject = s.reject_prob();
        }
        sum += t * s.accept_prob;
    }
    Ok(top_reject * top_cutoff + sum)
}

/// IID instance at the fixed-point threshold: both ratios at least one half, and the common
/// rejection probability at most `1 - 1/N`.
pub fn check_iid_robustness(d: &Dist, n: usize) -> Result<RobustnessReport> {
    let inst = Instance::iid(d, n)?;
    let t = spectrum(&inst).t_star;
    let mut report = robustness_report(&inst, t).with_bounds(0.5, 0.5);
    let p = best_response(d, t).reject_prob();
    let cap = 1.0 - 1.0 / n as f64;
    if p > cap + 1e-9 {
        report.holds = false;
        report
            .notes
            .push(format!("rejection probability {p:.9} exceeds {cap:.9}"));
    }
    Ok(report)
}

/// IID instance at the threshold inducing rejection product `(1 - 1/N)^N`: strategic ratio at
/// least `1 - 1/e`.
pub fn check_iid_deviation_guarantee(d: &Dist, n: usize) -> Result<RobustnessReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("needs at least two boxes".into()));
    }
    let inst = Instance::iid(d, n)?;
    let target = (1.0 - 1.0 / n as f64).powi(n as i32);
    let induced = induce_threshold_by_product(&inst, target)?;
    Ok(robustness_report(&inst, induced.threshold).with_bounds(1.0 - (-1.0f64).exp(), 0.0))
}

/// `(1 - x^N) / (2 - x)`; at least one half on `[0, 1 - 1/N]`.
pub fn iid_ratio_helper(x: f64, n: usize) -> f64 {
    (1.0 - x.powi(n as i32)) / (2.0 - x)
}

/// `(1 - x) / (N + 1 - N x^{1/N})`; minimized over `[0, 1]` at `((N-1)/N)^N`.
pub fn cutoff_bound_helper(x: f64, n: usize) -> f64 {
    let nf = n as f64;
    (1.0 - x) / (nf + 1.0 - nf * x.powf(1.0 / nf))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hem_counterexample_payoff_at_no_information() {
        let inst = Instance::new(vec![
            Dist::uniform(0.0, 0.5).unwrap(),
            Dist::uniform(0.0, 0.92).unwrap(),
        ])
        .unwrap();
        assert!(close(strategic_payoff(&inst, 0.2), 0.25, 1e-15));
    }

    #[test]
    fn closed_form_matches_walk() {
        let b = Dist::discrete(&[(0.0, 0.7), (1.0, 0.2), (2.0, 0.1)]).unwrap();
        let inst = Instance::new(vec![b.clone(), Dist::uniform(0.0, 1.5).unwrap(), b]).unwrap();
        for t in [0.8, 1.0, 1.3, 1.9] {
            let a = strategic_payoff(&inst, t);
            let c = strategic_payoff_closed_form(&inst, t).unwrap();
            assert!(close(a, c, 1e-12), "t={t}");
        }
        assert!(strategic_payoff_closed_form(&inst, 0.2).is_err());
    }

    #[test]
    fn iid_checks() {
        let d = Dist::discrete(&[(0.0, 2.0 / 3.0), (1.0, 1.0 / 3.0)]).unwrap();
        let r = check_iid_robustness(&d, 3).unwrap();
        assert!(r.holds, "{:?}", r.notes);
        assert!(close(r.opt, 19.0 / 27.0, 1e-12));
        let pm = Dist::point_mass(2.0).unwrap();
        let r = check_iid_robustness(&pm, 4).unwrap();
        assert!(close(r.ratio_strategic, 1.0, 1e-9) && close(r.ratio_nonstrategic, 1.0, 1e-9));
        let r = check_iid_deviation_guarantee(&pm, 4).unwrap();
        assert!(close(r.ratio_strategic, 1.0, 1e-12));
    }

    #[test]
    fn single_box_upper_bound() {
        let d = Dist::uniform(0.0, 1.0).unwrap();
        let inst = Instance::new(vec![d]).unwrap();
        let b = opt_upper_bound_cutoffs(&inst, 0.75).unwrap();
        assert!(close(b, 0.5 * 0.5 + 0.75 * 0.5, 1e-12));
        assert!(b >= 0.5);
    }

    #[test]
    fn helper_minimum() {
        for n in [2usize, 3, 7, 20] {
            let star = ((n as f64 - 1.0) / n as f64).powi(n as i32);
            let at = cutoff_bound_helper(star, n);
            let want = (1.0 - star) / 2.0;
            assert!(close(at, want, 1e-12));
        }
    }
}
