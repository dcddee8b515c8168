//! Seeded Monte Carlo playouts of the whole game: reward draw, signal, sequential acceptance.
//!
//! Replicate `k` draws from ChaCha8 keyed by the seed on stream `k`, so estimates do not depend
//! on how replicates are spread over threads. Partial sums are combined in replicate order.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::stackelberg::{Policy, Profile, Strategy};

const BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub samples: usize,
    pub seed: u64,
    pub parallel_streams: usize,
}

impl SimConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            parallel_streams: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub payoff_mean: f64,
    pub payoff_stderr: f64,
    pub win_freqs: Vec<f64>,
}

/// Inverse-CDF draw.
pub fn sample(d: &Dist, rng: &mut impl Rng) -> f64 {
    d.quantile(rng.gen::<f64>())
}

#[derive(Clone)]
struct Partial {
    sum: f64,
    sum_sq: f64,
    wins: Vec<u64>,
}

fn play(profile: &Profile, thresholds: &[f64], rng: &mut ChaCha8Rng, wins: &mut [u64]) -> f64 {
    let priors = profile.priors().boxes();
    for (i, (s, prior)) in profile.strategies().iter().zip(priors).enumerate() {
        let u: f64 = rng.gen();
        let (posterior, reward) = match s {
            Strategy::FullInformation => {
                let x = prior.quantile(u);
                (x, x)
            }
            Strategy::NoInformation => (prior.mean(), prior.quantile(u)),
            Strategy::Pooling { reject_prob, low, high } => {
                let post = if u >= *reject_prob { *high } else { *low };
                (post, prior.quantile(u))
            }
            // Only the posterior law is known; its draw is an unbiased stand-in for the reward.
            Strategy::Posterior(g) => {
                let x = g.quantile(u);
                (x, x)
            }
        };
        if posterior >= thresholds[i] {
            wins[i] += 1;
            return reward;
        }
    }
    0.0
}

/// Estimates the searcher's payoff and per-box win frequencies under `policy`.
pub fn simulate(policy: Policy, profile: &Profile, cfg: SimConfig) -> Result<SimResult> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let thresholds = policy.thresholds(profile);
    let n = profile.len();
    let blocks = cfg.samples.div_ceil(BLOCK);
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);

    let run_block = |b: usize| {
        let mut p = Partial {
            sum: 0.0,
            sum_sq: 0.0,
            wins: vec![0; n],
        };
        let end = ((b + 1) * BLOCK).min(cfg.samples);
        for k in b * BLOCK..end {
            let mut rng = base.clone();
            rng.set_stream(k as u64);
            let x = play(profile, &thresholds, &mut rng, &mut p.wins);
            p.sum += x;
            p.sum_sq += x * x;
        }
        p
    };

    let partials: Vec<Partial> = if cfg.parallel_streams <= 1 {
        (0..blocks).map(run_block).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallel_streams)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| (0..blocks).into_par_iter().map(run_block).collect())
    };

    let mut total = Partial {
        sum: 0.0,
        sum_sq: 0.0,
        wins: vec![0; n],
    };
    for p in &partials {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
        for (t, w) in total.wins.iter_mut().zip(&p.wins) {
            *t += w;
        }
    }
    let m = cfg.samples as f64;
    let mean = total.sum / m;
    let var = if cfg.samples > 1 {
        ((total.sum_sq - m * mean * mean) / (m - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(SimResult {
        payoff_mean: mean,
        payoff_stderr: (var / m).sqrt(),
        win_freqs: total.wins.iter().map(|&w| w as f64 / m).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stackelberg::Profile;

    #[test]
    fn point_masses_are_exact() {
        let priors = vec![Dist::point_mass(0.3).unwrap(), Dist::point_mass(0.9).unwrap()];
        let profile = Profile::full_information(priors).unwrap();
        let r = simulate(Policy::Fixed(0.5), &profile, SimConfig::new(1000, 7)).unwrap();
        assert!((r.payoff_mean - 0.9).abs() < 1e-12);
        assert!(r.payoff_stderr < 1e-6);
        assert_eq!(r.win_freqs, vec![0.0, 1.0]);
    }

    #[test]
    fn stream_count_does_not_change_results() {
        let priors = vec![
            Dist::uniform(0.0, 1.0).unwrap(),
            Dist::discrete(&[(0.0, 0.5), (2.0, 0.5)]).unwrap(),
        ];
        let profile = Profile::full_information(priors).unwrap();
        let one = simulate(Policy::Fixed(0.6), &profile, SimConfig::new(20_000, 11)).unwrap();
        let four = simulate(
            Policy::Fixed(0.6),
            &profile,
            SimConfig {
                parallel_streams: 4,
                ..SimConfig::new(20_000, 11)
            },
        )
        .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn rejects_zero_samples() {
        let profile = Profile::full_information(vec![Dist::point_mass(1.0).unwrap()]).unwrap();
        assert!(simulate(Policy::Fixed(0.0), &profile, SimConfig::new(0, 1)).is_err());
    }
}
