//! Classic (non-strategic) quantities: the prophet value, the half-approximation threshold
//! spectrum, threshold-policy payoffs and backward-induction values.

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::quad::Rule;

/// Mass comparisons against a target level use this absolute slack.
pub const MASS_EPS: f64 = 1e-12;

/// An ordered sequence of boxes as seen by the searcher.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    boxes: Vec<Dist>,
}

impl Instance {
    pub fn new(boxes: Vec<Dist>) -> Result<Self> {
        if boxes.is_empty() {
            return Err(Error::InvalidParameter("an instance needs at least one box".into()));
        }
        Ok(Self { boxes })
    }

    pub fn iid(d: &Dist, n: usize) -> Result<Self> {
        Self::new(vec![d.clone(); n])
    }

    pub fn boxes(&self) -> &[Dist] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn means(&self) -> Vec<f64> {
        self.boxes.iter().map(Dist::mean).collect()
    }

    pub fn max_mean(&self) -> f64 {
        self.boxes.iter().map(Dist::mean).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn upper(&self) -> f64 {
        self.boxes.iter().map(Dist::upper).fold(0.0, f64::max)
    }

    /// `P(max_i X_i <= x)`.
    pub fn product_cdf(&self, x: f64) -> f64 {
        self.boxes.iter().map(|d| d.cdf(x)).product()
    }

    /// `P(max_i X_i < x)`.
    pub fn product_cdf_left(&self, x: f64) -> f64 {
        self.boxes.iter().map(|d| d.cdf_left(x)).product()
    }

    /// Union of all boxes' breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut g: Vec<f64> = self.boxes.iter().flat_map(Dist::breakpoints).collect();
        g.sort_by(f64::total_cmp);
        g.dedup();
        g
    }
}

/// The four classic thresholds of an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSpectrum {
    /// Half the expected maximum.
    pub t_kw: f64,
    /// `sup{t : P(max >= t) >= 1/2}`.
    pub t_sc: f64,
    /// `inf{c : P(max >= c) <= 1/2}`.
    pub median_lower: f64,
    /// Fixed point of `T = Σ E[(X_i - T)^+]`.
    pub t_star: f64,
}

/// `E[max_i X_i]`, integrating `1 - Π H_i` exactly cell by cell.
pub fn expected_max(inst: &Instance) -> f64 {
    let grid = inst.breakpoints();
    let ncell = grid.len().saturating_sub(1);

    // Number of boxes with a density on each cell fixes the polynomial degree there.
    let mut active = vec![0usize; ncell];
    for d in inst.boxes() {
        for s in d.segments() {
            let i0 = grid.partition_point(|&g| g < s.lo);
            let i1 = grid.partition_point(|&g| g < s.hi);
            for a in &mut active[i0..i1] {
                *a += 1;
            }
        }
    }
    let max_active = active.iter().copied().max().unwrap_or(0);
    let rules: Vec<Rule> = (0..=max_active).map(|k| Rule::new(k + 1)).collect();

    let mut total = grid.first().copied().unwrap_or(0.0).max(0.0);
    for k in 0..ncell {
        let (a, b) = (grid[k], grid[k + 1]);
        if active[k] == 0 {
            total += (b - a) * (1.0 - inst.product_cdf(a));
        } else {
            total += rules[active[k]].integrate(a, b, |x| 1.0 - inst.product_cdf(x));
        }
    }
    total
}

/// Smallest `x` with `P(max <= x) >= level` (or `> level` when `strict`).
fn product_inverse(inst: &Instance, level: f64, strict: bool) -> f64 {
    let meets = |p: f64| {
        if strict {
            p > level + MASS_EPS
        } else {
            p >= level - MASS_EPS
        }
    };
    let grid = inst.breakpoints();
    let k = match grid.iter().position(|&g| meets(inst.product_cdf(g))) {
        Some(k) => k,
        None => return inst.upper(),
    };
    if k == 0 {
        return grid[0];
    }
    if !meets(inst.product_cdf_left(grid[k])) {
        return grid[k];
    }
    let (mut lo, mut hi) = (grid[k - 1], grid[k]);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if meets(inst.product_cdf(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// MEDIAN threshold `inf{c : P(max >= c) <= 1/2}`; at an atom of the maximum this is the atom.
pub fn median_of_max(inst: &Instance) -> f64 {
    product_inverse(inst, 0.5, false)
}

fn t_sc(inst: &Instance) -> f64 {
    product_inverse(inst, 0.5, true)
}

/// Fixed point of `T = Σ E[(X_i - T)^+]` by bisection.
pub fn t_star(inst: &Instance) -> f64 {
    let g = |t: f64| inst.boxes().iter().map(|d| d.expected_excess(t)).sum::<f64>() - t;
    let mut lo = 0.0;
    let mut hi = inst.means().iter().sum::<f64>() + inst.upper();
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo < 1e-14 {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn spectrum(inst: &Instance) -> ThresholdSpectrum {
    ThresholdSpectrum {
        t_kw: 0.5 * expected_max(inst),
        t_sc: t_sc(inst),
        median_lower: median_of_max(inst),
        t_star: t_star(inst),
    }
}

/// Outcome of running per-box thresholds over an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Walk {
    pub payoff: f64,
    pub win_probs: Vec<f64>,
}

/// Accept the first box whose value is at least its threshold (ties accepted).
pub fn threshold_walk(inst: &Instance, thresholds: &[f64]) -> Walk {
    assert_eq!(thresholds.len(), inst.len(), "one threshold per box");
    let mut reach = 1.0;
    let mut payoff = 0.0;
    let mut win_probs = Vec::with_capacity(inst.len());
    for (d, &t) in inst.boxes().iter().zip(thresholds) {
        payoff += reach * d.truncated_value(t);
        let stay = d.cdf_left(t);
        win_probs.push(reach * (1.0 - stay));
        reach *= stay;
    }
    Walk { payoff, win_probs }
}

/// Payoff of the single-threshold policy when every box reveals its reward.
pub fn nonstrategic_payoff(inst: &Instance, t: f64) -> f64 {
    threshold_walk(inst, &vec![t; inst.len()]).payoff
}

/// Backward-induction values `V_1, ..., V_N, V_{N+1} = 0`; box `i` is accepted iff its value
/// is at least `V_{i+1}`.
pub fn dp_values(inst: &Instance) -> Vec<f64> {
    let n = inst.len();
    let mut v = vec![0.0; n + 1];
    for i in (0..n).rev() {
        let next = v[i + 1];
        let d = &inst.boxes()[i];
        v[i] = next * d.cdf_left(next) + d.truncated_value(next);
    }
    v
}

/// Per-box acceptance thresholds of the DP policy.
pub fn dp_thresholds(inst: &Instance) -> Vec<f64> {
    dp_values(inst)[1..].to_vec()
}

pub fn nonstrategic_dp_payoff(inst: &Instance) -> f64 {
    dp_values(inst)[0]
}
