//! A player's optimal information revelation against a threshold searcher.
//!
//! Against threshold `T`, a player maximizes the probability that the posterior mean reaches
//! `T`. The optimum pools the top `w*` of the prior mass into one signal with mean exactly `T`,
//! where `w*` is the largest mass whose superquantile is still at least `T`.

use crate::dist::{Dist, Piece};
use crate::error::{Error, Result};
use crate::prophet::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    /// The prior mean already meets the threshold; reveal nothing.
    NoInformation,
    /// Pool the top mass into a signal with posterior mean exactly the threshold.
    ThresholdSignaling,
    /// The threshold is above the support; nothing can be accepted.
    AlwaysRejected,
}

/// Optimal response of one player to a fixed threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoolingStrategy {
    pub kind: SignalKind,
    pub threshold: f64,
    /// Lowest reward pooled into the high signal.
    pub cutoff: Option<f64>,
    /// Mass taken from an atom sitting at the cutoff.
    pub partial_mass: f64,
    /// Probability of the high signal, `1 - p`.
    pub accept_prob: f64,
    /// Posterior mean of the low signal.
    pub low_posterior: Option<f64>,
}

impl PoolingStrategy {
    pub fn reject_prob(&self) -> f64 {
        1.0 - self.accept_prob
    }
}

/// Largest `t` at which the pooled region may start (plateaus resolve upward).
fn pooling_walk(d: &Dist, t: f64) -> (f64, f64, f64) {
    // c tracks ∫ (x - t) dH over the pooled mass; pooling stops when it would turn negative.
    let mut c = 0.0;
    let mut w = 0.0;
    for p in d.pieces().iter().rev() {
        match *p {
            Piece::Atom { v, m } => {
                if v >= t {
                    c += (v - t) * m;
                    w += m;
                    if c == 0.0 {
                        return (w, v, m);
                    }
                    continue;
                }
                let delta = c / (t - v);
                if delta <= m {
                    return (w + delta, v, delta);
                }
                c += (v - t) * m;
                w += m;
            }
            Piece::Seg(s) => {
                if s.hi > t {
                    let a = s.lo.max(t);
                    c += s.value_between(a, s.hi) - t * s.mass_between(a, s.hi);
                    w += s.mass_between(a, s.hi);
                }
                let top = s.hi.min(t);
                if top <= s.lo {
                    continue;
                }
                let phi = |y: f64| c + s.value_between(y, top) - t * s.mass_between(y, top);
                if phi(s.lo) > 0.0 {
                    c = phi(s.lo);
                    w += s.mass_between(s.lo, top);
                    continue;
                }
                if phi(s.lo) == 0.0 {
                    return (w + s.mass_between(s.lo, top), s.lo, 0.0);
                }
                // phi is increasing in y on [lo, top] with phi(lo) < 0 <= phi(top).
                let (mut lo, mut hi) = (s.lo, top);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if phi(mid) >= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return (w + s.mass_between(hi, top), hi, 0.0);
            }
        }
    }
    (w, d.lower(), 0.0)
}

/// Best response of a player with prior `d` to threshold `t`.
pub fn best_response(d: &Dist, t: f64) -> PoolingStrategy {
    let lambda = d.mean();
    if t <= lambda {
        return PoolingStrategy {
            kind: SignalKind::NoInformation,
            threshold: t,
            cutoff: None,
            partial_mass: 0.0,
            accept_prob: 1.0,
            low_posterior: None,
        };
    }
    if t > d.upper() {
        return PoolingStrategy {
            kind: SignalKind::AlwaysRejected,
            threshold: t,
            cutoff: None,
            partial_mass: 0.0,
            accept_prob: 0.0,
            low_posterior: Some(lambda),
        };
    }
    let (w, cutoff, partial) = pooling_walk(d, t);
    let w = w.clamp(0.0, 1.0);
    PoolingStrategy {
        kind: SignalKind::ThresholdSignaling,
        threshold: t,
        cutoff: Some(cutoff),
        partial_mass: partial,
        accept_prob: w,
        low_posterior: Some((lambda - t * w) / (1.0 - w)),
    }
}

/// Two-point posterior-mean distribution realized by a pooling strategy.
pub fn binary_reduction(s: &PoolingStrategy, d: &Dist) -> Dist {
    match s.kind {
        SignalKind::NoInformation | SignalKind::AlwaysRejected => {
            Dist::point_mass(d.mean()).expect("prior mean is a valid reward")
        }
        SignalKind::ThresholdSignaling => {
            let a = s.low_posterior.unwrap_or(0.0).max(0.0);
            Dist::discrete(&[(a, 1.0 - s.accept_prob), (s.threshold, s.accept_prob)])
                .expect("pooling split is a valid distribution")
        }
    }
}

/// Result of a mean-preserving-contraction check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpcCheck {
    pub holds: bool,
    /// Largest excess of `∫G` over `∫H`, or the mean gap if larger.
    pub max_violation: f64,
}

/// Whether `g` is a mean-preserving contraction of `h`.
pub fn is_mpc(g: &Dist, h: &Dist) -> MpcCheck {
    const TOL: f64 = 1e-10;
    let mean_gap = (g.mean() - h.mean()).abs();
    let mut grid: Vec<f64> = g.breakpoints();
    grid.extend(h.breakpoints());
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut worst: f64 = 0.0;
    let mut probe = |x: f64| worst = worst.max(g.integrated_cdf(x) - h.integrated_cdf(x));
    for k in 0..grid.len() {
        probe(grid[k]);
        if k + 1 < grid.len() {
            for j in 1..16 {
                probe(grid[k] + (grid[k + 1] - grid[k]) * j as f64 / 16.0);
            }
        }
    }
    let support_ok = g.upper() <= h.upper() + TOL && g.lower() >= h.lower() - TOL;
    let violation = worst.max(mean_gap);
    MpcCheck {
        holds: violation <= TOL && support_ok,
        max_violation: violation,
    }
}

/// A threshold together with per-player rejection probabilities realizing a target product.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedThreshold {
    pub threshold: f64,
    pub reject_probs: Vec<f64>,
}

fn min_rejections(inst: &Instance, t: f64) -> Vec<f64> {
    inst.boxes().iter().map(|d| best_response(d, t).reject_prob()).collect()
}

fn top_atom(d: &Dist) -> Option<f64> {
    match d.pieces().last() {
        Some(Piece::Atom { m, .. }) => Some(*m),
        _ => None,
    }
}

/// Finds `T` whose induced rejection probabilities multiply to `product`.
///
/// Where the minimal product jumps past the target (a top atom at `T`), the players with the
/// jump raise their rejection probability by pooling less of that atom, lowest index first.
pub fn induce_threshold_by_product(inst: &Instance, product: f64) -> Result<InducedThreshold> {
    if !(0.0..1.0).contains(&product) {
        return Err(Error::InvalidParameter(format!(
            "target product {product} outside [0, 1)"
        )));
    }
    let prod = |t: f64| min_rejections(inst, t).iter().product::<f64>();
    let mut lo = inst.max_mean();
    if product == 0.0 {
        return Ok(InducedThreshold {
            threshold: lo,
            reject_probs: min_rejections(inst, lo),
        });
    }
    let mut hi = inst.upper();
    let threshold = if prod(hi) <= product {
        hi
    } else {
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if prod(mid) <= product {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let jump = inst
            .boxes()
            .iter()
            .filter(|d| top_atom(d).is_some())
            .map(Dist::upper)
            .find(|&u| lo <= u && u < hi);
        match jump {
            Some(u) => u,
            None if (prod(hi) - product).abs() < (prod(lo) - product).abs() => hi,
            None => lo,
        }
    };

    let mut reject = min_rejections(inst, threshold);
    for j in 0..inst.len() {
        let current: f64 = reject.iter().product();
        if current >= product {
            break;
        }
        let d = &inst.boxes()[j];
        if d.upper() != threshold || top_atom(d).is_none() {
            continue;
        }
        let others: f64 = reject
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, p)| p)
            .product();
        if others > 0.0 {
            reject[j] = (product / others).clamp(reject[j], 1.0);
        }
    }
    Ok(InducedThreshold {
        threshold,
        reject_probs: reject,
    })
}
