//! Registry of reproducible cases: equilibrium counterexamples, tightness instances and the
//! robustness suites.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::prophet::{expected_max, nonstrategic_payoff, spectrum};
use crate::report::CaseReport;
use crate::signaling::best_response;
use crate::stackelberg::cases::{reproduce_counterexample, STACKELBERG_CASES};
use crate::strategic::{
    logconcave_robustness_check, make_general_tightness_instance, make_iid_tightness_instance,
    make_percentage_instance, strategic_payoff, TabulatedDensity,
};
use crate::suites::{self, grid};

pub const CASE_IDS: [&str; 14] = [
    "hem-2box",
    "dp-3box",
    "median-3box",
    "medianh-2box",
    "dph-3box",
    "hemh-3box",
    "hemh-2box-positive",
    "dph-2box-positive",
    "general-tightness",
    "iid-tightness",
    "iid-percentage",
    "kw-robustness",
    "iid-robustness",
    "logconcave",
];

pub fn run_case(case_id: &str) -> Result<CaseReport> {
    match case_id {
        id if STACKELBERG_CASES.contains(&id) => reproduce_counterexample(id),
        "general-tightness" => general_tightness(),
        "iid-tightness" => iid_tightness(),
        "iid-percentage" => iid_percentage(),
        "kw-robustness" => Ok(suites::kw_robustness(1000)),
        "iid-robustness" => Ok(suites::iid_robustness(500)),
        "logconcave" => logconcave(),
        other => Err(Error::UnknownCase(other.into())),
    }
}

/// `(1 - (1 - 1/(N-1))^{N-1}) / 2`.
pub fn general_tightness_bound(n: usize) -> f64 {
    let m = (n - 1) as f64;
    (1.0 - (1.0 - 1.0 / m).powf(m)) / 2.0
}

fn general_tightness() -> Result<CaseReport> {
    const EPS: f64 = 1e-3;
    const S: f64 = 1e6;
    let mut r = CaseReport::new(
        "general-tightness",
        "no single threshold beats (1-(1-1/(N-1))^{N-1})/2 under signaling (point mass then long-shot boxes)",
    );
    for n in [3usize, 5, 10] {
        let inst = make_general_tightness_instance(n, EPS, S)?;
        let d = n as f64 - 1.0 - EPS;
        let keep = (1.0 - 1.0 / S).powi(n as i32 - 1);
        let opt = expected_max(&inst);
        r.close(&format!("n{n}_opt"), opt, d * keep + S * (1.0 - keep), 1e-9 * opt);
        let s = spectrum(&inst);
        let hi = s.t_sc.max(s.t_star);
        let best = grid(s.t_kw, hi, 100)
            .map(|t| strategic_payoff(&inst, t) / opt)
            .fold(f64::NEG_INFINITY, f64::max);
        let bound = general_tightness_bound(n) + 0.02;
        r.check(
            &format!("n{n}_best_strategic_ratio"),
            best,
            format!("<= {bound:.6}"),
            best <= bound,
        )
        .headline();
    }
    Ok(r)
}

/// Whichever of `acc` and `x` lies farther from `target`; a NaN `acc` starts the fold.
fn farthest(acc: f64, x: f64, target: f64) -> f64 {
    if acc.is_nan() || (x - target).abs() > (acc - target).abs() {
        x
    } else {
        acc
    }
}

fn iid_tightness() -> Result<CaseReport> {
    const A1: f64 = 0.5;
    let mut r = CaseReport::new(
        "iid-tightness",
        "fixed-point analysis is tight for IID boxes on {N - a1, N + a2}",
    );
    let ns_target = A1 / (A1 + 1.0);
    let s_target = 1.0 / (1.0 + A1);
    for (n, a2) in [(50usize, 500.0), (200, 2000.0)] {
        let inst = make_iid_tightness_instance(n, A1, a2)?;
        let nf = n as f64;
        let opt = expected_max(&inst);
        // Any threshold above the low atom only accepts the high one.
        let ns_worst = grid(nf - A1, nf + a2, 21)
            .skip(1)
            .map(|t| nonstrategic_payoff(&inst, t) / opt)
            .fold(f64::NAN, |acc, x| farthest(acc, x, ns_target));
        r.check(
            &format!("n{n}_nonstrategic_ratio_above_low"),
            ns_worst,
            format!("{} ± 0.05", crate::report::sig6(ns_target)),
            (ns_worst - ns_target).abs() <= 0.05,
        );
        let s_worst = grid(0.0, nf - A1, 21)
            .map(|t| strategic_payoff(&inst, t) / opt)
            .fold(f64::NAN, |acc, x| farthest(acc, x, s_target));
        r.check(
            &format!("n{n}_strategic_ratio_at_or_below_low"),
            s_worst,
            format!("{} ± 0.05", crate::report::sig6(s_target)),
            (s_worst - s_target).abs() <= 0.05,
        )
        .headline();
    }
    Ok(r)
}

/// Threshold `(e-1) n / ((e-2)(n+1))` for the three-point instance with `n^2` boxes.
pub fn percentage_threshold(n: usize) -> f64 {
    let nf = n as f64;
    (E - 1.0) * nf / ((E - 2.0) * (nf + 1.0))
}

/// Strategic ratio of the three-point instance at its designated threshold.
pub fn percentage_ratio(n: usize) -> Result<f64> {
    let inst = make_percentage_instance(n)?;
    Ok(strategic_payoff(&inst, percentage_threshold(n)) / expected_max(&inst))
}

fn iid_percentage() -> Result<CaseReport> {
    const N: usize = 30;
    let mut r = CaseReport::new(
        "iid-percentage",
        "percentage-of-boxes threshold is (1-1/e)-approximate for IID boxes, and asymptotically tight",
    );
    let suite = suites::iid_deviation(500);
    r.rows.extend(suite.rows.iter().cloned().map(|mut row| {
        row.case_id = r.case_id.clone();
        row
    }));

    let inst = make_percentage_instance(N)?;
    let t = percentage_threshold(N);
    let d = &inst.boxes()[0];
    let br = best_response(d, t);
    let nf = N as f64;
    r.close("n30_pooled_unit_mass", br.partial_mass, nf.powi(-2), 1e-12);
    r.close("n30_accept_prob", br.accept_prob, nf.powi(-3) + nf.powi(-2), 1e-12);
    let ratio = percentage_ratio(N)?;
    let target = (1.0 + 1.0 / E) * (E - 2.0) / (E - 1.0);
    r.close("n30_strategic_ratio", ratio, target, 0.05);
    let cap = 1.0 - 1.0 / E + 1e-6;
    r.check(
        "n30_strategic_ratio_cap",
        ratio,
        format!("<= {}", crate::report::sig6(cap)),
        ratio <= cap,
    )
    .headline();
    let trend: Vec<f64> = [10usize, 30, 100]
        .iter()
        .map(|&n| percentage_ratio(n))
        .collect::<Result<_>>()?;
    for (n, v) in [10, 30, 100].iter().zip(&trend) {
        r.info(&format!("n{n}_strategic_ratio"), *v, "trend");
    }
    let decreasing = trend.windows(2).all(|w| w[1] < w[0]);
    r.check("trend_decreasing", f64::from(decreasing), "1", decreasing);
    Ok(r)
}

fn logconcave() -> Result<CaseReport> {
    const POINTS: usize = 1025;
    let mut r = CaseReport::new(
        "logconcave",
        "log-concave boxes with f(1) >= alpha, f'(1) >= -beta: every threshold in [2 T_KW, T_SC] is half-robust",
    );
    for n in [2usize, 5, 10] {
        let u = TabulatedDensity::from_fn(POINTS, |_| 1.0)?;
        let rep = logconcave_robustness_check(&vec![u; n], 1.0, 0.0)?;
        let nf = n as f64;
        let p = format!("n{n}");
        let member = rep.log_concave && rep.endpoint_conditions && rep.box_count_condition;
        r.check(&format!("{p}_family_membership"), f64::from(member), "1", member);
        r.check(
            &format!("{p}_min_hbar_second_difference"),
            rep.min_hbar_second_difference,
            ">= -1e-9",
            rep.hbar_convex,
        );
        r.close(&format!("{p}_t_kw"), rep.t_kw, nf / (2.0 * (nf + 1.0)), 1e-9);
        r.close(&format!("{p}_t_sc"), rep.t_sc, 0.5f64.powf(1.0 / nf), 1e-9);
        r.check(
            &format!("{p}_2t_kw_minus_t_sc"),
            2.0 * rep.t_kw - rep.t_sc,
            "<= 1e-9",
            rep.thresholds_ordered,
        );
        let lo = &rep.evaluations[0];
        let hi = &rep.evaluations[rep.evaluations.len() - 1];
        let worst = lo
            .ratio_strategic
            .min(lo.ratio_nonstrategic)
            .min(hi.ratio_strategic)
            .min(hi.ratio_nonstrategic);
        r.check(
            &format!("{p}_min_ratio_at_endpoints"),
            worst,
            ">= 0.5",
            lo.holds && hi.holds,
        )
        .headline();
    }
    let lin = TabulatedDensity::from_fn(POINTS, |x| 2.0 * x)?;
    let rep = logconcave_robustness_check(&[lin.clone(), lin.clone(), lin], 2.0, 0.0)?;
    r.check("density_2x_n3_holds", f64::from(rep.holds), "1", rep.holds);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert!((general_tightness_bound(3) - 0.375).abs() < 1e-15);
        assert!((percentage_threshold(30) - (E - 1.0) * 30.0 / ((E - 2.0) * 31.0)).abs() < 1e-15);
    }

    #[test]
    fn unknown_case() {
        assert!(matches!(run_case("nope"), Err(Error::UnknownCase(_))));
    }
}
