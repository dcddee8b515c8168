//! Reproductions of the equilibrium counterexamples and the two-box positive results.

use rayon::prelude::*;

use super::{
    eval_profile, solve_dp_two_box, solve_frozen, solve_hem_two_box, solve_median_two_box, v1, Policy, Profile, Regime,
    Strategy,
};
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::prophet::{expected_max, Instance};
use crate::random::{random_continuous, rng_for, TWO_BOX_SEED};
use crate::report::CaseReport;

pub const STACKELBERG_CASES: [&str; 8] = [
    "hem-2box",
    "dp-3box",
    "median-3box",
    "medianh-2box",
    "dph-3box",
    "hemh-3box",
    "hemh-2box-positive",
    "dph-2box-positive",
];

pub fn reproduce_counterexample(case_id: &str) -> Result<CaseReport> {
    match case_id {
        "hem-2box" => hem_two_box(),
        "dp-3box" => dp_three_box(),
        "median-3box" => median_three_box(),
        "medianh-2box" => medianh_two_box(),
        "dph-3box" => dph_three_box(),
        "hemh-3box" => hemh_three_box(),
        "hemh-2box-positive" => two_box_positive(case_id, Policy::HemH),
        "dph-2box-positive" => two_box_positive(case_id, Policy::DpH),
        other => Err(Error::UnknownCase(other.into())),
    }
}

fn binary(p_one: f64) -> Result<Dist> {
    Dist::discrete(&[(0.0, 1.0 - p_one), (1.0, p_one)])
}

fn hem_two_box() -> Result<CaseReport> {
    let mut r = CaseReport::new(
        "hem-2box",
        "HEM is not a half-approximation under deviation (uniform boxes on [0,0.5] and [0,0.92])",
    );
    let h1 = Dist::uniform(0.0, 0.5)?;
    let h2 = Dist::uniform(0.0, 0.92)?;
    let out = solve_hem_two_box(&h1, &h2)?;
    r.close("lambda_1", h1.mean(), 0.25, 1e-12);
    r.close("lambda_2", h2.mean(), 0.46, 1e-12);
    r.close("v1_at_lambda_1", v1(h1.mean(), &h2), 0.4940, 1e-3);
    r.check(
        "box1_no_information",
        f64::from(out.regime == Some(Regime::NoInformation)),
        "1",
        out.regime == Some(Regime::NoInformation),
    );
    r.close("searcher_payoff", out.searcher_payoff, 0.25, 1e-12);
    r.close("opt", out.opt, 0.5053, 1e-3);
    r.below_half(out.ratio_vs_half_opt);
    Ok(r)
}

fn dp_three_box() -> Result<CaseReport> {
    let mut r = CaseReport::new(
        "dp-3box",
        "DP is not a half-approximation under deviation (point mass 0.2, two {0,1} boxes with mean 0.25)",
    );
    let h1 = Dist::point_mass(0.2)?;
    let h = binary(0.25)?;
    // Box 1 has a single possible strategy; the rest is the two-box DP game on boxes 2 and 3.
    let tail = solve_dp_two_box(&h, &h)?;
    r.close("two_box_tail_payoff", tail.searcher_payoff, 0.25, 1e-15);
    let mut strategies = vec![Strategy::FullInformation];
    strategies.extend(tail.profile.strategies().iter().cloned());
    let profile = Profile::new(vec![h1, h.clone(), h], strategies)?;
    let out = eval_profile(Policy::Dp, &profile);
    r.check(
        "box1_threshold",
        out.thresholds[0],
        ">= 0.25",
        out.thresholds[0] >= 0.25,
    );
    r.close("box1_win_prob", out.win_probs[0], 0.0, 0.0);
    r.close("searcher_payoff", out.searcher_payoff, 0.25, 1e-15);
    r.close("opt", out.opt, 0.55, 1e-12);
    r.below_half(out.ratio_vs_half_opt);
    Ok(r)
}

fn median_three_box() -> Result<CaseReport> {
    let mut r = CaseReport::new(
        "median-3box",
        "MEDIAN is not a half-approximation under deviation (point mass 0.39, two {0,1} boxes with mean 0.2)",
    );
    let h1 = Dist::point_mass(0.39)?;
    let h = binary(0.2)?;
    let tail = solve_median_two_box(&h, &h)?;
    r.close("b_m", super::b_m(&h), 0.4, 1e-12);
    let mut strategies = vec![Strategy::FullInformation];
    strategies.extend(tail.profile.strategies().iter().cloned());
    let profile = Profile::new(vec![h1, h.clone(), h], strategies)?;
    let out = eval_profile(Policy::Median, &profile);
    r.close("median_threshold", out.threshold_used, 0.4, 1e-12);
    r.close("box1_win_prob", out.win_probs[0], 0.0, 0.0);
    r.close("box2_win_prob", out.win_probs[1], 0.5, 1e-12);
    r.close("box3_win_prob", out.win_probs[2], 0.25, 1e-12);
    r.close("searcher_payoff", out.searcher_payoff, 0.3, 1e-12);
    r.close("opt", out.opt, 0.6096, 1e-12);
    r.below_half(out.ratio_vs_half_opt);
    Ok(r)
}

fn medianh_priors() -> Result<(Dist, Dist)> {
    let lo = Dist::uniform(0.0, 1.0 / 24.0)?;
    let hi = Dist::uniform(23.0 / 24.0, 1.0)?;
    let h1 = Dist::mixture(&[5.0 / 6.0, 1.0 / 6.0], &[lo.clone(), hi.clone()])?;
    let h2 = Dist::mixture(&[3.0 / 5.0, 2.0 / 5.0], &[lo, hi])?;
    Ok((h1, h2))
}

fn medianh_two_box() -> Result<CaseReport> {
    let mut r = CaseReport::new(
        "medianh-2box",
        "MEDIAN-H is not a half-approximation under deviation (two-piece uniform mixtures)",
    );
    let (h1, h2) = medianh_priors()?;
    r.close("lambda_1", h1.mean(), 13.0 / 72.0, 1e-12);
    r.close("lambda_2", h2.mean(), 97.0 / 240.0, 1e-12);
    let out = solve_frozen(Policy::MedianH, &[h1, h2])?;
    r.close("median_h_threshold", out.threshold_used, 1.0 / 24.0, 1e-12);
    r.close("searcher_payoff", out.searcher_payoff, 13.0 / 72.0, 1e-12);
    let half = 0.5 * out.opt;
    r.check("half_opt", half, "[0.250, 0.254]", (0.250..=0.254).contains(&half));
    r.below_half(out.ratio_vs_half_opt);
    Ok(r)
}

fn dph_three_box() -> Result<CaseReport> {
    let mut r = CaseReport::new(
        "dph-3box",
        "DP-H is not a half-approximation under deviation (point mass 0.25, two {0,1} boxes with mean 0.2)",
    );
    let h = binary(0.2)?;
    let out = solve_frozen(Policy::DpH, &[Dist::point_mass(0.25)?, h.clone(), h])?;
    r.close("box1_threshold", out.thresholds[0], 0.36, 1e-9);
    r.close("box2_threshold", out.thresholds[1], 0.2, 1e-9);
    r.close("searcher_payoff", out.searcher_payoff, 0.2, 1e-12);
    r.close("opt", out.opt, 0.52, 1e-12);
    r.below_half(out.ratio_vs_half_opt);
    Ok(r)
}

fn hemh_three_box() -> Result<CaseReport> {
    let mut r = CaseReport::new(
        "hemh-3box",
        "HEM-H is not a half-approximation under deviation (three IID {0,1} boxes with mean 1/3)",
    );
    let h = binary(1.0 / 3.0)?;
    let out = solve_frozen(Policy::HemH, &[h.clone(), h.clone(), h])?;
    let t = 19.0 / 54.0;
    r.close("t_kw", out.threshold_used, t, 1e-12);
    r.close("opt", out.opt, 19.0 / 27.0, 1e-12);
    r.close(
        "searcher_payoff",
        out.searcher_payoff,
        t * (1.0 - (1.0f64 / 19.0).powi(3)),
        1e-12,
    );
    r.check(
        "payoff_below_t_kw",
        out.searcher_payoff,
        "< 19/54",
        out.searcher_payoff < t,
    );
    r.below_half(out.ratio_vs_half_opt);
    Ok(r)
}

/// Positive two-box results: the frozen HEM and DP policies keep half the prophet value.
fn two_box_positive(case_id: &str, policy: Policy) -> Result<CaseReport> {
    const COUNT: u64 = 500;
    let location = match policy {
        Policy::HemH => "HEM-H is a half-approximation under deviation with two boxes",
        _ => "DP-H is a half-approximation under deviation with two boxes",
    };
    let mut r = CaseReport::new(case_id, location);
    let results: Vec<(f64, f64)> = (0..COUNT)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_for(TWO_BOX_SEED, k);
            let h1 = random_continuous(&mut rng, 10.0);
            let h2 = random_continuous(&mut rng, 10.0);
            let out = solve_frozen(policy, &[h1.clone(), h2.clone()]).expect("valid priors");
            let gap = out.searcher_payoff - 0.5 * out.opt;
            let dp_gap = (out.searcher_payoff - h1.mean().max(h2.mean())).abs();
            (gap, dp_gap)
        })
        .collect();
    let worst = results.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    let fails = results.iter().filter(|x| x.0 < -1e-9).count();
    r.info("instances", COUNT as f64, "");
    r.check("min_payoff_minus_half_opt", worst, ">= -1e-9", worst >= -1e-9)
        .headline();
    r.check("failures", fails as f64, "0", fails == 0);
    if policy == Policy::DpH {
        let worst_dp = results.iter().map(|x| x.1).fold(0.0, f64::max);
        r.check("max_abs_payoff_minus_max_mean", worst_dp, "<= 1e-12", worst_dp <= 1e-12);
    }
    Ok(r)
}

/// Independent check for the MEDIAN-H instance's prophet value.
pub fn medianh_expected_max() -> Result<f64> {
    let (h1, h2) = medianh_priors()?;
    Ok(expected_max(&Instance::new(vec![h1, h2])?))
}
