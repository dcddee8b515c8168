//! Brute-force references for small discrete priors. These deliberately avoid the
//! superquantile walk and the product-CDF machinery so they can check them.

/// Largest probability of a high signal with posterior mean at least `t`, found by enumerating
/// which atoms are fully pooled plus one fractionally pooled atom on a grid of `step`.
pub fn max_accept_by_enumeration(atoms: &[(f64, f64)], t: f64, step: f64) -> f64 {
    let mean: f64 = atoms.iter().map(|(v, m)| v * m).sum();
    if t <= mean {
        return 1.0;
    }
    let n = atoms.len();
    let ticks = (1.0 / step).round() as usize;
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << n) {
        let (mut mass, mut surplus) = (0.0, 0.0);
        for (i, (v, m)) in atoms.iter().enumerate() {
            if mask & (1 << i) != 0 {
                mass += m;
                surplus += m * (v - t);
            }
        }
        if surplus >= -1e-15 && mass > 0.0 {
            best = best.max(mass);
        }
        for (j, (v, m)) in atoms.iter().enumerate() {
            if mask & (1 << j) != 0 {
                continue;
            }
            for k in 1..=ticks {
                let x = k as f64 / ticks as f64;
                let s = surplus + x * m * (v - t);
                if s >= -1e-15 {
                    best = best.max(mass + x * m);
                }
            }
        }
    }
    best
}

/// `∫_0^x F(y) dy` for a discrete law.
fn integrated_cdf(atoms: &[(f64, f64)], x: f64) -> f64 {
    atoms.iter().map(|(v, m)| m * (x - v).max(0.0)).sum()
}

/// Whether the discrete `g` is a mean-preserving contraction of the discrete `h`. Both
/// integrated CDFs are piecewise linear with kinks at atoms, so checking atoms is exact.
pub fn discrete_is_mpc(g: &[(f64, f64)], h: &[(f64, f64)]) -> bool {
    let mg: f64 = g.iter().map(|(v, m)| v * m).sum();
    let mh: f64 = h.iter().map(|(v, m)| v * m).sum();
    if (mg - mh).abs() > 1e-10 {
        return false;
    }
    g.iter()
        .chain(h)
        .all(|&(x, _)| integrated_cdf(g, x) <= integrated_cdf(h, x) + 1e-12)
}

fn cdf(atoms: &[(f64, f64)], x: f64) -> f64 {
    atoms.iter().filter(|(v, _)| *v <= x).map(|(_, m)| m).sum()
}

fn cdf_left(atoms: &[(f64, f64)], x: f64) -> f64 {
    atoms.iter().filter(|(v, _)| *v < x).map(|(_, m)| m).sum()
}

/// MEDIAN threshold of two discrete posteriors: the first support point where the product CDF
/// reaches one half.
pub fn median_threshold(g1: &[(f64, f64)], g2: &[(f64, f64)]) -> f64 {
    let mut pts: Vec<f64> = g1.iter().chain(g2).map(|a| a.0).collect();
    pts.sort_by(f64::total_cmp);
    pts.into_iter()
        .find(|&x| cdf(g1, x) * cdf(g2, x) >= 0.5 - 1e-12)
        .unwrap_or(f64::INFINITY)
}

/// Box 2's MEDIAN win probability for fixed posteriors.
pub fn median_second_box_win(g1: &[(f64, f64)], g2: &[(f64, f64)]) -> f64 {
    let theta = median_threshold(g1, g2);
    cdf_left(g1, theta) * (1.0 - cdf_left(g2, theta))
}

/// Best MEDIAN win probability for box 2 over two-atom contractions of `h2` on a grid of `step`
/// in both the high-signal mass and the high posterior.
pub fn best_two_atom_median_response(g1: &[(f64, f64)], h2: &[(f64, f64)], step: f64) -> f64 {
    let mean: f64 = h2.iter().map(|(v, m)| v * m).sum();
    let top = h2.iter().map(|a| a.0).fold(0.0, f64::max);
    let bottom = h2.iter().map(|a| a.0).fold(f64::INFINITY, f64::min);
    let ticks = (1.0 / step).round() as usize;
    let mut best = median_second_box_win(g1, &[(mean, 1.0)]);
    let b_ticks = ((top - mean) / step).floor() as usize;
    for i in 1..ticks {
        let w = i as f64 / ticks as f64;
        for j in 0..=b_ticks {
            let b = mean + j as f64 * step;
            let a = (mean - w * b) / (1.0 - w);
            if a < bottom - 1e-12 {
                break;
            }
            let g2 = [(a, 1.0 - w), (b, w)];
            if discrete_is_mpc(&g2, h2) {
                best = best.max(median_second_box_win(g1, &g2));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_matches_hand_values() {
        let d = [(0.0, 0.8), (1.0, 0.2)];
        assert!((max_accept_by_enumeration(&d, 0.4, 1e-3) - 0.5).abs() < 1e-12);
        assert_eq!(max_accept_by_enumeration(&d, 0.1, 1e-3), 1.0);
        assert_eq!(max_accept_by_enumeration(&d, 1.5, 1e-3), 0.0);
    }

    #[test]
    fn mpc_and_median() {
        let h = [(0.0, 0.8), (1.0, 0.2)];
        assert!(discrete_is_mpc(&[(0.0, 0.5), (0.4, 0.5)], &h));
        assert!(discrete_is_mpc(&[(0.1, 0.5), (0.3, 0.5)], &h));
        assert!(!discrete_is_mpc(&[(0.0, 0.9), (2.0, 0.1)], &h));
        let g = [(0.0, 0.5), (0.4, 0.5)];
        assert_eq!(median_threshold(&[(0.39, 1.0)], &g), 0.39);
        assert_eq!(median_threshold(&[(0.5, 1.0)], &g), 0.5);
        assert!((median_second_box_win(&g, &g) - 0.25).abs() < 1e-12);
    }
}
