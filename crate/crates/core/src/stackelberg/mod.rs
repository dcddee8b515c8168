//! Two-box equilibria and profile evaluation for DP, HEM and MEDIAN searchers.
//!
//! The prior-free policies recompute their thresholds from the submitted posterior-mean
//! distributions; the `-H` variants freeze thresholds computed from the priors.

pub mod cases;

pub use cases::{reproduce_counterexample, STACKELBERG_CASES};

use std::fmt;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::prophet::{dp_thresholds, expected_max, median_of_max, threshold_walk, Instance};
use crate::signaling::{best_response, is_mpc, PoolingStrategy, SignalKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    Dp,
    Hem,
    Median,
    DpH,
    HemH,
    MedianH,
    Fixed(f64),
}

impl Policy {
    /// Thresholds computed from submitted strategies rather than priors.
    pub fn is_prior_free(&self) -> bool {
        matches!(self, Policy::Dp | Policy::Hem | Policy::Median)
    }

    /// Per-box acceptance thresholds for a profile.
    pub fn thresholds(&self, profile: &Profile) -> Vec<f64> {
        let n = profile.len();
        match *self {
            Policy::Dp => dp_thresholds(profile.posteriors()),
            Policy::Hem => vec![0.5 * expected_max(profile.posteriors()); n],
            Policy::Median => vec![median_of_max(profile.posteriors()); n],
            Policy::DpH => dp_thresholds(profile.priors()),
            Policy::HemH => vec![0.5 * expected_max(profile.priors()); n],
            Policy::MedianH => vec![median_of_max(profile.priors()); n],
            Policy::Fixed(t) => vec![t; n],
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Dp => write!(f, "DP"),
            Policy::Hem => write!(f, "HEM"),
            Policy::Median => write!(f, "MEDIAN"),
            Policy::DpH => write!(f, "DP-H"),
            Policy::HemH => write!(f, "HEM-H"),
            Policy::MedianH => write!(f, "MEDIAN-H"),
            Policy::Fixed(t) => write!(f, "fixed({t})"),
        }
    }
}

/// How a box reveals its reward. Pooling sends the high signal on the top `1 - reject_prob`
/// of the prior's quantile range.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    FullInformation,
    NoInformation,
    Pooling { reject_prob: f64, low: f64, high: f64 },
    Posterior(Dist),
}

impl Strategy {
    pub fn from_pooling(s: &PoolingStrategy) -> Self {
        match s.kind {
            SignalKind::ThresholdSignaling => Strategy::Pooling {
                reject_prob: s.reject_prob(),
                low: s.low_posterior.unwrap_or(0.0).max(0.0),
                high: s.threshold,
            },
            SignalKind::NoInformation | SignalKind::AlwaysRejected => Strategy::NoInformation,
        }
    }

    /// Distribution of the posterior mean under this strategy.
    pub fn posterior(&self, prior: &Dist) -> Result<Dist> {
        match self {
            Strategy::FullInformation => Ok(prior.clone()),
            Strategy::NoInformation => Dist::point_mass(prior.mean()),
            Strategy::Pooling { reject_prob, low, high } => {
                if *reject_prob <= 0.0 {
                    Dist::point_mass(*high)
                } else if *reject_prob >= 1.0 {
                    Dist::point_mass(*low)
                } else {
                    Dist::discrete(&[(*low, *reject_prob), (*high, 1.0 - reject_prob)])
                }
            }
            Strategy::Posterior(d) => Ok(d.clone()),
        }
    }
}

/// Priors, the strategies the boxes submit, and the resulting posterior-mean distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    priors: Instance,
    strategies: Vec<Strategy>,
    posteriors: Instance,
}

impl Profile {
    /// Validates that every posterior is a mean-preserving contraction of its prior.
    pub fn new(priors: Vec<Dist>, strategies: Vec<Strategy>) -> Result<Self> {
        if priors.len() != strategies.len() {
            return Err(Error::InvalidParameter("one strategy per box is required".into()));
        }
        let mut posts = Vec::with_capacity(priors.len());
        for (i, (h, s)) in priors.iter().zip(&strategies).enumerate() {
            let g = s.posterior(h)?;
            let check = is_mpc(&g, h);
            if !check.holds {
                return Err(Error::NotMpc {
                    index: i,
                    violation: check.max_violation,
                });
            }
            posts.push(g);
        }
        Ok(Self {
            priors: Instance::new(priors)?,
            strategies,
            posteriors: Instance::new(posts)?,
        })
    }

    pub fn full_information(priors: Vec<Dist>) -> Result<Self> {
        let n = priors.len();
        Self::new(priors, vec![Strategy::FullInformation; n])
    }

    pub fn priors(&self) -> &Instance {
        &self.priors
    }

    pub fn posteriors(&self) -> &Instance {
        &self.posteriors
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }
}

/// Which branch a two-box solver took for box 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    NoInformation,
    Pooling {
        cutoff: f64,
    },
    /// Box 1 cannot reach the threshold with any strategy.
    Unreachable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumOutcome {
    pub policy: Policy,
    pub profile: Profile,
    pub searcher_payoff: f64,
    pub win_probs: Vec<f64>,
    pub thresholds: Vec<f64>,
    /// Threshold applied to box 1.
    pub threshold_used: f64,
    pub opt: f64,
    pub ratio_vs_half_opt: f64,
    pub regime: Option<Regime>,
}

/// Evaluates a profile: compute the policy's thresholds, then accept the first posterior mean
/// meeting its box's threshold.
pub fn eval_profile(policy: Policy, profile: &Profile) -> EquilibriumOutcome {
    let thresholds = policy.thresholds(profile);
    let walk = threshold_walk(profile.posteriors(), &thresholds);
    let opt = expected_max(profile.priors());
    EquilibriumOutcome {
        policy,
        profile: profile.clone(),
        searcher_payoff: walk.payoff,
        win_probs: walk.win_probs,
        threshold_used: thresholds[0],
        thresholds,
        opt,
        ratio_vs_half_opt: if opt > 0.0 { walk.payoff / (0.5 * opt) } else { 1.0 },
        regime: None,
    }
}

/// `E[max(x, X_2)]`.
pub fn v1(x: f64, h2: &Dist) -> f64 {
    x * h2.cdf(x) + h2.upper_tail_value(x, false)
}

/// Two-point posterior `{E[X | X < t], E[X | X >= t]}`.
pub fn binary_pooling(d: &Dist, t: f64) -> Result<Dist> {
    let (a, b, m) = d.conditional_split(t)?;
    Dist::discrete(&[(a, m), (b, 1.0 - m)])
}

fn binary_pooling_strategy(d: &Dist, t: f64) -> Result<Strategy> {
    let (a, b, m) = d.conditional_split(t)?;
    Ok(Strategy::Pooling {
        reject_prob: m,
        low: a,
        high: b,
    })
}

/// Half the expected maximum of the submitted posteriors.
pub fn hem_threshold(profile: &Profile) -> f64 {
    0.5 * expected_max(profile.posteriors())
}

/// Mean of the top half of `h2`'s mass: the high signal of its median pooling.
pub fn b_m(h2: &Dist) -> f64 {
    h2.superquantile(0.5).expect("one half is a valid weight")
}

/// `(1/2)(H_1(t) v_1(a(t)) + (1 - H_1(t)) v_1(b(t))) - b(t)`: positive while box 1's high signal
/// falls short of the HEM threshold it induces.
pub fn hem_gap(h1: &Dist, h2: &Dist, t: f64) -> Result<f64> {
    let (a, b, m) = h1.conditional_split(t)?;
    Ok(0.5 * (m * v1(a, h2) + (1.0 - m) * v1(b, h2)) - b)
}

/// Box 1 either reveals nothing or pools at the unique cutoff where its high posterior equals
/// the HEM threshold; box 2 reveals everything.
pub fn solve_hem_two_box(h1: &Dist, h2: &Dist) -> Result<EquilibriumOutcome> {
    if h1.has_atoms() {
        return Err(Error::Unsupported(
            "HEM two-box solver requires an atomless first prior".into(),
        ));
    }
    let priors = vec![h1.clone(), h2.clone()];
    let lambda1 = h1.mean();
    if lambda1 >= 0.5 * v1(lambda1, h2) {
        let profile = Profile::new(priors, vec![Strategy::NoInformation, Strategy::FullInformation])?;
        return Ok(with_regime(eval_profile(Policy::Hem, &profile), Regime::NoInformation));
    }
    let (lo, hi) = (h1.lower(), h1.upper());
    if 0.5 * v1(lambda1, h2) - hi >= 0.0 {
        let profile = Profile::full_information(priors)?;
        return Ok(with_regime(eval_profile(Policy::Hem, &profile), Regime::Unreachable));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if hem_gap(h1, h2, mid)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    // Take the side where the high signal meets the threshold; nudge past rounding if the
    // product-CDF route to the threshold lands a hair above it.
    let mut t = b;
    let mut step = f64::EPSILON * hi.max(1.0);
    for _ in 0..40 {
        let profile = Profile::new(
            priors.clone(),
            vec![binary_pooling_strategy(h1, t)?, Strategy::FullInformation],
        )?;
        let out = eval_profile(Policy::Hem, &profile);
        if out.win_probs[0] > 0.0 || t >= hi {
            return Ok(with_regime(out, Regime::Pooling { cutoff: t }));
        }
        t = (t + step).min(hi);
        step *= 2.0;
    }
    Err(Error::Unsupported(
        "HEM fixed point could not be resolved within rounding".into(),
    ))
}

/// Box 1 reveals nothing when its mean beats box 2's, else pools up to `λ_2`.
pub fn solve_dp_two_box(h1: &Dist, h2: &Dist) -> Result<EquilibriumOutcome> {
    let priors = vec![h1.clone(), h2.clone()];
    let (lambda1, lambda2) = (h1.mean(), h2.mean());
    let (first, regime) = if lambda1 >= lambda2 {
        (Strategy::NoInformation, Regime::NoInformation)
    } else {
        let s = best_response(h1, lambda2);
        let regime = match s.cutoff {
            Some(c) => Regime::Pooling { cutoff: c },
            None => Regime::Unreachable,
        };
        (Strategy::from_pooling(&s), regime)
    };
    let profile = Profile::new(priors, vec![first, Strategy::FullInformation])?;
    Ok(with_regime(eval_profile(Policy::Dp, &profile), regime))
}

/// Box 1 reveals nothing when its mean reaches `B_M`; otherwise both boxes pool with high
/// signal `B_M`.
pub fn solve_median_two_box(h1: &Dist, h2: &Dist) -> Result<EquilibriumOutcome> {
    let priors = vec![h1.clone(), h2.clone()];
    let bm = b_m(h2);
    let lambda1 = h1.mean();
    let second = Strategy::from_pooling(&best_response(h2, bm));
    let (strategies, regime) = if lambda1 >= bm {
        (
            vec![Strategy::NoInformation, Strategy::FullInformation],
            Regime::NoInformation,
        )
    } else {
        let s1 = best_response(h1, bm);
        match s1.kind {
            SignalKind::ThresholdSignaling => (
                vec![Strategy::from_pooling(&s1), second],
                Regime::Pooling {
                    cutoff: s1.cutoff.unwrap_or(bm),
                },
            ),
            _ => (vec![Strategy::FullInformation, second], Regime::Unreachable),
        }
    };
    let profile = Profile::new(priors, strategies)?;
    Ok(with_regime(eval_profile(Policy::Median, &profile), regime))
}

/// Each box best-responds to its own fixed threshold.
pub fn best_response_to_fixed(priors: &[Dist], thresholds: &[f64]) -> Result<Profile> {
    if priors.len() != thresholds.len() {
        return Err(Error::InvalidParameter("one threshold per box is required".into()));
    }
    let strategies = priors
        .iter()
        .zip(thresholds)
        .map(|(h, &t)| Strategy::from_pooling(&best_response(h, t)))
        .collect();
    Profile::new(priors.to_vec(), strategies)
}

/// Frozen policy end to end: thresholds from the priors, best responses, evaluation.
pub fn solve_frozen(policy: Policy, priors: &[Dist]) -> Result<EquilibriumOutcome> {
    if policy.is_prior_free() {
        return Err(Error::InvalidParameter(format!(
            "{policy} recomputes thresholds from strategies"
        )));
    }
    let baseline = Profile::full_information(priors.to_vec())?;
    let thresholds = policy.thresholds(&baseline);
    let profile = best_response_to_fixed(priors, &thresholds)?;
    Ok(eval_profile(policy, &profile))
}

fn with_regime(mut out: EquilibriumOutcome, regime: Regime) -> EquilibriumOutcome {
    out.regime = Some(regime);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn v1_values() {
        let h2 = Dist::uniform(0.0, 0.92).unwrap();
        assert!(close(v1(0.25, &h2), 0.4940, 1e-4));
        assert!(close(v1(0.0, &h2), 0.46, 1e-12));
        assert!(close(v1(0.92, &h2), 0.92, 1e-12));
        assert!(close(v1(0.5, &Dist::uniform(0.0, 1.0).unwrap()), 0.625, 1e-12));
    }

    #[test]
    fn binary_pooling_examples() {
        let g = binary_pooling(&Dist::uniform(0.0, 1.0).unwrap(), 0.5).unwrap();
        assert_eq!(g.atoms().len(), 2);
        assert!(close(g.atoms()[0].0, 0.25, 1e-12) && close(g.atoms()[1].0, 0.75, 1e-12));
        assert!(close(
            b_m(&Dist::discrete(&[(0.0, 0.8), (1.0, 0.2)]).unwrap()),
            0.4,
            1e-12
        ));
        assert!(close(b_m(&Dist::uniform(0.0, 1.0).unwrap()), 0.75, 1e-12));
        assert_eq!(b_m(&Dist::point_mass(0.3).unwrap()), 0.3);
    }

    #[test]
    fn hem_no_information_case() {
        let out = solve_hem_two_box(&Dist::uniform(0.0, 0.5).unwrap(), &Dist::uniform(0.0, 0.92).unwrap()).unwrap();
        assert_eq!(out.regime, Some(Regime::NoInformation));
        assert!(close(out.searcher_payoff, 0.25, 1e-12));
        assert!(out.ratio_vs_half_opt < 1.0);
    }

    #[test]
    fn hem_pooling_fixed_point() {
        let h1 = Dist::uniform(0.0, 1.0).unwrap();
        let h2 = Dist::uniform(0.0, 3.0).unwrap();
        let out = solve_hem_two_box(&h1, &h2).unwrap();
        let Some(Regime::Pooling { cutoff }) = out.regime else {
            panic!("{:?}", out.regime)
        };
        let (_, b, _) = h1.conditional_split(cutoff).unwrap();
        assert!(close(b, hem_threshold(&out.profile), 1e-9));
        assert!(out.win_probs[0] > 0.0);
    }

    #[test]
    fn hem_unreachable_case() {
        let out = solve_hem_two_box(&Dist::uniform(0.0, 0.2).unwrap(), &Dist::uniform(0.0, 1.0).unwrap()).unwrap();
        assert_eq!(out.regime, Some(Regime::Unreachable));
        assert!(out.win_probs[0] < 1e-12);
        assert!(solve_hem_two_box(&Dist::point_mass(0.1).unwrap(), &Dist::uniform(0.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn dp_two_box() {
        let hi = Dist::uniform(0.0, 1.0).unwrap();
        let lo = Dist::uniform(0.0, 0.5).unwrap();
        let out = solve_dp_two_box(&hi, &lo).unwrap();
        assert!(close(out.searcher_payoff, 0.5, 1e-12));
        let out = solve_dp_two_box(&lo, &hi).unwrap();
        assert!(close(out.searcher_payoff, 0.5, 1e-12));
        assert!(out.win_probs[0] > 0.0);
    }

    #[test]
    fn median_two_box_restricted_three_box() {
        let b = Dist::discrete(&[(0.0, 0.8), (1.0, 0.2)]).unwrap();
        let out = solve_median_two_box(&b, &b).unwrap();
        assert!(close(out.searcher_payoff, 0.3, 1e-12));
        assert!(close(out.threshold_used, 0.4, 1e-12));
        let out = solve_median_two_box(&Dist::point_mass(0.5).unwrap(), &b).unwrap();
        assert!(close(out.searcher_payoff, 0.5, 1e-12));
    }

    #[test]
    fn full_information_matches_classic() {
        let priors = vec![
            Dist::uniform(0.0, 1.0).unwrap(),
            Dist::discrete(&[(0.0, 0.5), (2.0, 0.5)]).unwrap(),
        ];
        let profile = Profile::full_information(priors.clone()).unwrap();
        let inst = Instance::new(priors).unwrap();
        let out = eval_profile(Policy::Fixed(0.7), &profile);
        assert!(close(
            out.searcher_payoff,
            crate::prophet::nonstrategic_payoff(&inst, 0.7),
            1e-15
        ));
    }

    #[test]
    fn rejects_non_contraction() {
        let priors = vec![Dist::point_mass(0.5).unwrap()];
        let bad = Strategy::Posterior(Dist::uniform(0.0, 1.0).unwrap());
        assert!(matches!(
            Profile::new(priors, vec![bad]),
            Err(Error::NotMpc { index: 0, .. })
        ));
    }
}
