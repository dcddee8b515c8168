//! Seeded property suites over randomized instances. Each returns a report whose rows carry
//! the worst case found and the number of violations.

use rand::Rng;
use rayon::prelude::*;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::mc::{simulate, SimConfig};
use crate::oracle;
use crate::prophet::{expected_max, nonstrategic_dp_payoff, nonstrategic_payoff, spectrum};
use crate::random::{self, rng_for};
use crate::report::CaseReport;
use crate::signaling::best_response;
use crate::stackelberg::{
    best_response_to_fixed, hem_gap, hem_threshold, solve_hem_two_box, solve_median_two_box, v1, Policy, Profile,
    Regime,
};
use crate::strategic::{
    check_iid_deviation_guarantee, check_iid_robustness, check_kw_robustness, opt_upper_bound_cutoffs,
    strategic_payoff, strategic_payoff_closed_form,
};

pub const SUITES: [&str; 9] = [
    "kw-robustness",
    "iid-robustness",
    "iid-deviation",
    "spectrum",
    "opt-upper-bound",
    "mc-agreement",
    "best-response-oracle",
    "hem-fixed-point",
    "median-oracle",
];

pub fn run_suite(id: &str) -> Result<CaseReport> {
    match id {
        "kw-robustness" => Ok(kw_robustness(1000)),
        "iid-robustness" => Ok(iid_robustness(500)),
        "iid-deviation" => Ok(iid_deviation(500)),
        "spectrum" => Ok(spectrum_properties(500)),
        "opt-upper-bound" => Ok(opt_upper_bound(500)),
        "mc-agreement" => Ok(mc_agreement(200, 100_000)),
        "best-response-oracle" => Ok(best_response_oracle(100)),
        "hem-fixed-point" => Ok(hem_fixed_point(200)),
        "median-oracle" => Ok(median_oracle(100)),
        other => Err(Error::UnknownCase(other.into())),
    }
}

/// `points` evenly spaced values from `lo` to `hi`, hitting both ends exactly.
pub fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let last = points.saturating_sub(1).max(1) as f64;
    (0..points).map(move |j| {
        if j + 1 == points {
            hi
        } else {
            lo + (hi - lo) * j as f64 / last
        }
    })
}

fn min_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(f64::INFINITY, f64::min)
}

fn max_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(f64::NEG_INFINITY, f64::max)
}

/// Threshold at half the expected maximum on random instances.
pub fn kw_robustness(count: u64) -> CaseReport {
    let mut r = CaseReport::new(
        "kw-robustness",
        "half-expected-max threshold is (1-1/e)/2-robust (random instances, N <= 8)",
    );
    let reports: Vec<_> = (0..count)
        .into_par_iter()
        .map(|k| check_kw_robustness(&random::random_instance(&mut rng_for(random::KW_SEED, k))))
        .collect();
    let bound = crate::strategic::kw_strategic_bound();
    let min_s = min_of(reports.iter().map(|x| x.ratio_strategic));
    let min_ns = min_of(reports.iter().map(|x| x.ratio_nonstrategic));
    let fails = reports.iter().filter(|x| !x.holds).count();
    r.info("instances", count as f64, "");
    r.check(
        "min_strategic_ratio",
        min_s,
        format!(">= {bound:.6}"),
        min_s >= bound - 1e-9,
    )
    .headline();
    r.check("min_nonstrategic_ratio", min_ns, ">= 0.5", min_ns >= 0.5 - 1e-9);
    r.check("failures", fails as f64, "0", fails == 0);
    r
}

/// Fixed-point threshold on random IID instances.
pub fn iid_robustness(count: u64) -> CaseReport {
    let mut r = CaseReport::new(
        "iid-robustness",
        "fixed-point threshold is half-robust for IID boxes (random IID instances)",
    );
    let reports: Vec<_> = (0..count)
        .into_par_iter()
        .map(|k| {
            let (d, n) = random::random_iid(&mut rng_for(random::IID_SEED, k));
            check_iid_robustness(&d, n).expect("valid IID instance")
        })
        .collect();
    let min_s = min_of(reports.iter().map(|x| x.ratio_strategic));
    let min_ns = min_of(reports.iter().map(|x| x.ratio_nonstrategic));
    let fails = reports.iter().filter(|x| !x.holds).count();
    r.info("instances", count as f64, "");
    r.check("min_strategic_ratio", min_s, ">= 0.5", min_s >= 0.5 - 1e-9)
        .headline();
    r.check("min_nonstrategic_ratio", min_ns, ">= 0.5", min_ns >= 0.5 - 1e-9);
    r.check("failures", fails as f64, "0 (includes p <= 1 - 1/N)", fails == 0);
    r
}

/// Threshold inducing rejection product `(1-1/N)^N` on random IID instances.
pub fn iid_deviation(count: u64) -> CaseReport {
    let mut r = CaseReport::new(
        "iid-deviation",
        "induced threshold is (1-1/e)-approximate under signaling for IID boxes",
    );
    let reports: Vec<_> = (0..count)
        .into_par_iter()
        .map(|k| {
            let (d, n) = random::random_iid(&mut rng_for(random::DEVIATION_SEED, k));
            check_iid_deviation_guarantee(&d, n).expect("valid IID instance")
        })
        .collect();
    let bound = 1.0 - (-1.0f64).exp();
    let min_s = min_of(reports.iter().map(|x| x.ratio_strategic));
    let fails = reports.iter().filter(|x| !x.holds).count();
    r.info("instances", count as f64, "");
    r.check(
        "min_strategic_ratio",
        min_s,
        format!(">= {bound:.6}"),
        min_s >= bound - 1e-9,
    )
    .headline();
    r.check("failures", fails as f64, "0", fails == 0);
    r
}

/// Classic claims: every spectrum threshold is half-approximate, DP dominates, orderings.
pub fn spectrum_properties(count: u64) -> CaseReport {
    let mut r = CaseReport::new(
        "spectrum",
        "every threshold between T_KW and max(T_SC, T*) is half-approximate",
    );
    let gaps: Vec<[f64; 4]> = (0..count)
        .into_par_iter()
        .map(|k| {
            let inst = random::random_instance(&mut rng_for(random::KW_SEED ^ 0x5, k));
            let opt = expected_max(&inst);
            let s = spectrum(&inst);
            let hi = s.t_sc.max(s.t_star);
            let dp = nonstrategic_dp_payoff(&inst);
            let mut half_gap = f64::INFINITY;
            let mut dp_gap = f64::INFINITY;
            for t in grid(s.t_kw, hi, 21) {
                let u = nonstrategic_payoff(&inst, t);
                half_gap = half_gap.min(u - 0.5 * opt);
                dp_gap = dp_gap.min(dp - u);
            }
            let order = (opt - dp).min(dp - inst.max_mean());
            [half_gap, dp_gap, order, s.t_star - s.t_kw]
        })
        .collect();
    r.info("instances", count as f64, "");
    for (i, name) in [
        "min_payoff_minus_half_opt",
        "min_dp_minus_threshold_payoff",
        "min_ordering_gap",
        "min_t_star_minus_t_kw",
    ]
    .iter()
    .enumerate()
    {
        let m = min_of(gaps.iter().map(|g| g[i]));
        r.check(name, m, ">= -1e-9", m >= -1e-9);
    }
    r.headline();
    r
}

/// Cutoff-based upper bound on the prophet value, and the closed-form strategic payoff.
pub fn opt_upper_bound(count: u64) -> CaseReport {
    let mut r = CaseReport::new("opt-upper-bound", "prophet value is bounded via the pooling cutoffs");
    let res: Vec<(f64, f64)> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_for(random::KW_SEED ^ 0x9, k);
            let inst = random::random_instance(&mut rng);
            let opt = expected_max(&inst);
            let (lo, hi) = (inst.max_mean(), inst.upper());
            let mut bound_gap = f64::INFINITY;
            let mut form_gap: f64 = 0.0;
            for _ in 0..5 {
                let t = lo + (hi - lo) * rng.gen_range(0.001..1.0);
                if t <= lo {
                    // A point mass at the top of the support leaves no valid threshold.
                    continue;
                }
                bound_gap = bound_gap.min(opt_upper_bound_cutoffs(&inst, t).unwrap() - opt);
                form_gap =
                    form_gap.max((strategic_payoff(&inst, t) - strategic_payoff_closed_form(&inst, t).unwrap()).abs());
            }
            (bound_gap, form_gap)
        })
        .collect();
    let b = min_of(res.iter().map(|x| x.0));
    let f = max_of(res.iter().map(|x| x.1));
    r.info("instances", count as f64, "");
    r.check("min_bound_minus_opt", b, ">= -1e-9", b >= -1e-9).headline();
    r.check("max_closed_form_gap", f, "<= 1e-12", f <= 1e-12);
    r
}

fn agrees(mc: f64, se: f64, exact: f64) -> bool {
    // The floor absorbs summation rounding when every playout pays the same amount.
    (mc - exact).abs() <= 4.0 * se + 1e-12 * exact.abs().max(1.0)
}

/// Analytic payoffs against seeded playouts, with and without signaling.
pub fn mc_agreement(count: u64, samples: usize) -> CaseReport {
    let mut r = CaseReport::new(
        "mc-agreement",
        "analytic strategic and classic payoffs match Monte Carlo playouts",
    );
    let res: Vec<(bool, bool, f64)> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_for(random::MC_SEED, k);
            let inst = random::random_instance(&mut rng);
            let s = spectrum(&inst);
            let t = rng.gen_range(0.5 * s.t_kw..1.2 * s.t_sc.max(s.t_star));
            let priors = inst.boxes().to_vec();
            let cfg = SimConfig::new(samples, random::MC_SEED.wrapping_add(k));

            let strategic =
                best_response_to_fixed(&priors, &vec![t; priors.len()]).expect("best responses are contractions");
            let exact_s = strategic_payoff(&inst, t);
            let mc_s = simulate(Policy::Fixed(t), &strategic, cfg).expect("valid config");
            let classic = Profile::full_information(priors).expect("valid priors");
            let exact_ns = nonstrategic_payoff(&inst, t);
            let mc_ns = simulate(Policy::Fixed(t), &classic, cfg).expect("valid config");
            let eval_gap =
                (crate::stackelberg::eval_profile(Policy::Fixed(t), &strategic).searcher_payoff - exact_s).abs();
            (
                agrees(mc_s.payoff_mean, mc_s.payoff_stderr, exact_s),
                agrees(mc_ns.payoff_mean, mc_ns.payoff_stderr, exact_ns),
                eval_gap,
            )
        })
        .collect();
    let both = res.iter().filter(|x| x.0 && x.1).count();
    let gap = max_of(res.iter().map(|x| x.2));
    r.info("pairs", count as f64, "");
    r.info("strategic_within_4se", res.iter().filter(|x| x.0).count() as f64, "");
    r.info("classic_within_4se", res.iter().filter(|x| x.1).count() as f64, "");
    let need = (count as f64 * 0.98).ceil();
    r.check(
        "both_within_4se",
        both as f64,
        format!(">= {need}"),
        both as f64 >= need,
    )
    .headline();
    r.check("profile_eval_vs_walk_gap", gap, "<= 1e-12", gap <= 1e-12);
    r
}

/// Pooled mass from the best response against exhaustive enumeration of two-signal schemes.
pub fn best_response_oracle(count: u64) -> CaseReport {
    const STEP: f64 = 1e-3;
    let mut r = CaseReport::new(
        "best-response-oracle",
        "optimal signaling pools the top mass (exhaustive two-signal enumeration)",
    );
    let res: Vec<(f64, f64)> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_for(random::ORACLE_SEED, k);
            let d = random::random_small_discrete(&mut rng, 6);
            let (lo, hi) = (d.mean(), d.upper());
            let mut worst_gap: f64 = 0.0;
            let mut worst_excess = f64::NEG_INFINITY;
            for j in 0..8 {
                let t = lo + (hi - lo) * (j as f64 + 0.5) / 8.0;
                let br = best_response(&d, t).accept_prob;
                let brute = oracle::max_accept_by_enumeration(d.atoms(), t, STEP);
                let max_atom = d.atoms().iter().map(|a| a.1).fold(0.0, f64::max);
                worst_gap = worst_gap.max((br - brute).abs() / (STEP * max_atom).max(1e-15));
                worst_excess = worst_excess.max(brute - br);
            }
            (worst_gap, worst_excess)
        })
        .collect();
    let gap = max_of(res.iter().map(|x| x.0));
    let excess = max_of(res.iter().map(|x| x.1));
    r.info("priors", count as f64, "");
    r.check("max_gap_in_grid_steps", gap, "<= 1", gap <= 1.0 + 1e-9)
        .headline();
    r.check("max_oracle_excess", excess, "<= 1e-12", excess <= 1e-12);
    r
}

/// HEM two-box pooling regime: fixed point, strict decrease of the gap, shape of `v1`.
pub fn hem_fixed_point(count: usize) -> CaseReport {
    let mut r = CaseReport::new(
        "hem-fixed-point",
        "HEM two-box equilibrium: unique binary pooling fixed point",
    );
    let mut cases = Vec::with_capacity(count);
    let mut k = 0u64;
    while cases.len() < count && k < 100 * count as u64 {
        let mut rng = rng_for(random::HEM_SEED, k);
        k += 1;
        let hi1 = rng.gen_range(0.5..3.0);
        let h1 = random::random_positive_density(&mut rng, hi1);
        let scale = hi1 * rng.gen_range(1.0..4.0);
        let h2 = random::random_continuous(&mut rng, scale);
        let l1 = h1.mean();
        let target = 0.5 * v1(l1, &h2);
        if l1 < target && target < hi1 {
            cases.push((h1, h2));
        }
    }
    let res: Vec<(f64, bool, f64, f64, f64)> = cases
        .par_iter()
        .map(|(h1, h2)| {
            let out = solve_hem_two_box(h1, h2).expect("atomless prior");
            let Some(Regime::Pooling { cutoff }) = out.regime else {
                return (f64::INFINITY, false, f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY);
            };
            let (_, b, _) = h1.conditional_split(cutoff).expect("cutoff inside support");
            let fixed = (b - hem_threshold(&out.profile)).abs();

            let (lo, hi) = (h1.lower(), h1.upper());
            let f: Vec<f64> = (0..200)
                .map(|j| hem_gap(h1, h2, lo + (hi - lo) * (j as f64 + 0.5) / 200.0).expect("inside support"))
                .collect();
            let decreasing = f.windows(2).all(|w| w[1] < w[0]);

            let top = h2.upper();
            let xs: Vec<f64> = (0..=200).map(|j| top * j as f64 / 200.0).collect();
            let vs: Vec<f64> = xs.iter().map(|&x| v1(x, h2)).collect();
            let dx = top / 200.0;
            let max_slope = max_of(vs.windows(2).map(|w| (w[1] - w[0]) / dx));
            let min_slope = min_of(vs.windows(2).map(|w| (w[1] - w[0]) / dx));
            let min_second = min_of(vs.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]));
            (fixed, decreasing, max_slope, min_second, min_slope)
        })
        .collect();
    let fixed = max_of(res.iter().map(|x| x.0));
    let not_decreasing = res.iter().filter(|x| !x.1).count();
    let slope = max_of(res.iter().map(|x| x.2));
    let second = min_of(res.iter().map(|x| x.3));
    let min_slope = min_of(res.iter().map(|x| x.4));
    r.check(
        "pooling_instances",
        cases.len() as f64,
        format!("{count}"),
        cases.len() == count,
    );
    r.check("max_fixed_point_gap", fixed, "<= 1e-9", fixed <= 1e-9)
        .headline();
    r.check(
        "gap_not_strictly_decreasing",
        not_decreasing as f64,
        "0",
        not_decreasing == 0,
    );
    r.check("max_v1_slope", slope, "<= 1 + 1e-9", slope <= 1.0 + 1e-9);
    r.check("min_v1_slope", min_slope, ">= -1e-9", min_slope >= -1e-9);
    r.check("min_v1_second_difference", second, ">= -1e-9", second >= -1e-9);
    r
}

/// MEDIAN two-box: box 2's pooling response against an exhaustive grid of two-atom
/// contractions. The pooling response is only optimal when box 1 reveals nothing or sends its
/// high signal with probability above one half; other draws are counted but not asserted.
pub fn median_oracle(count: usize) -> CaseReport {
    const STEP: f64 = 1e-2;
    let mut r = CaseReport::new(
        "median-oracle",
        "MEDIAN two-box: binary pooling at B_M is box 2's best response",
    );
    let mut checked = Vec::new();
    let mut outside = 0usize;
    let mut k = 0u64;
    while checked.len() < count && k < 50 * count as u64 {
        let mut rng = rng_for(random::MEDIAN_SEED, k);
        k += 1;
        let h1 = random::random_small_discrete(&mut rng, 4);
        let h2 = random::random_small_discrete(&mut rng, 4);
        let out = solve_median_two_box(&h1, &h2).expect("valid priors");
        let g1 = out.profile.posteriors().boxes()[0].atoms().to_vec();
        let high_mass = g1
            .iter()
            .filter(|a| a.0 >= out.threshold_used)
            .map(|a| a.1)
            .sum::<f64>();
        let covered = match out.regime {
            Some(Regime::NoInformation) => true,
            Some(Regime::Pooling { .. }) => high_mass > 0.5 + 1e-12,
            _ => false,
        };
        if covered {
            checked.push((g1, h2.atoms().to_vec(), out.win_probs[1]));
        } else {
            outside += 1;
        }
    }
    let shortfall = max_of(
        checked
            .par_iter()
            .map(|(g1, h2, won)| oracle::best_two_atom_median_response(g1, h2, STEP) - won)
            .collect::<Vec<_>>()
            .into_iter(),
    );
    r.check(
        "instances",
        checked.len() as f64,
        format!("{count}"),
        checked.len() == count,
    );
    r.info(
        "skipped_low_high_mass",
        outside as f64,
        "box 1 high mass <= 1/2: pooling at B_M is not a best response",
    );
    r.check("max_oracle_advantage", shortfall, "<= 1e-9", shortfall <= 1e-9)
        .headline();
    r
}

/// Two discrete priors under which box 2 gains by pooling below `B_M`: box 1's high signal
/// carries mass at most one half.
pub fn median_deviation_example() -> Result<(f64, f64)> {
    let h1 = Dist::discrete(&[(0.0, 0.8), (1.0, 0.2)])?;
    let h2 = h1.clone();
    let out = solve_median_two_box(&h1, &h2)?;
    let g1 = out.profile.posteriors().boxes()[0].atoms().to_vec();
    let best = oracle::best_two_atom_median_response(&g1, h2.atoms(), 1e-2);
    Ok((out.win_probs[1], best))
}
