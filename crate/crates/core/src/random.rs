//! Seeded generators for the randomized property suites. Every suite derives its instances
//! from a fixed base seed plus the replicate index, so failures are reproducible.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::{Dist, Segment};
use crate::prophet::Instance;

pub const KW_SEED: u64 = 0x6b77_0000;
pub const IID_SEED: u64 = 0x1d1d_0000;
pub const DEVIATION_SEED: u64 = 0xdede_0000;
pub const MC_SEED: u64 = 0x3c3c_0000;
pub const ORACLE_SEED: u64 = 0x0a0a_0000;
pub const HEM_SEED: u64 = 0x4e4e_0000;
pub const TWO_BOX_SEED: u64 = 0x2b2b_0000;
pub const MEDIAN_SEED: u64 = 0x3d3d_0000;

pub fn rng_for(base: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(base.wrapping_add(index))
}

fn dirichlet(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

fn interval(rng: &mut impl Rng, lo: f64, hi: f64) -> (f64, f64) {
    loop {
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        if (a - b).abs() > 1e-3 * (hi - lo) {
            return (a.min(b), a.max(b));
        }
    }
}

/// Mixture of up to three atoms and up to two uniform segments on `[0, 10]`.
pub fn random_box(rng: &mut impl Rng) -> Dist {
    let (atoms, segs) = loop {
        let a = rng.gen_range(0..=3usize);
        let s = rng.gen_range(0..=2usize);
        if a + s > 0 {
            break (a, s);
        }
    };
    let w = dirichlet(rng, atoms + segs);
    let mut atom_list = Vec::with_capacity(atoms);
    for wi in &w[..atoms] {
        atom_list.push((rng.gen_range(0.0..10.0), *wi));
    }
    let mut seg_list = Vec::with_capacity(segs);
    for wi in &w[atoms..] {
        let (lo, hi) = interval(rng, 0.0, 10.0);
        let f = wi / (hi - lo);
        seg_list.push(Segment {
            lo,
            hi,
            f_lo: f,
            f_hi: f,
        });
    }
    Dist::from_parts(atom_list, seg_list).expect("generated box is valid")
}

/// Between two and eight independent random boxes.
pub fn random_instance(rng: &mut impl Rng) -> Instance {
    let n = rng.gen_range(2..=8usize);
    Instance::new((0..n).map(|_| random_box(rng)).collect()).expect("nonempty")
}

/// A random box and a box count for an IID instance.
pub fn random_iid(rng: &mut impl Rng) -> (Dist, usize) {
    (random_box(rng), rng.gen_range(2..=10usize))
}

/// Atomless mixture of one or two uniform or linear pieces inside `[0, scale]`.
pub fn random_continuous(rng: &mut impl Rng, scale: f64) -> Dist {
    let k = rng.gen_range(1..=2usize);
    let w = dirichlet(rng, k);
    let segs = w
        .iter()
        .map(|wi| {
            let (lo, hi) = interval(rng, 0.0, scale);
            let (u, v) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            // Density shape u -> v rescaled to carry mass wi.
            let norm = wi / (0.5 * (u + v) * (hi - lo));
            Segment {
                lo,
                hi,
                f_lo: u * norm,
                f_hi: v * norm,
            }
        })
        .collect();
    Dist::from_parts(vec![], segs).expect("generated density is valid")
}

/// Piecewise-linear density that is strictly positive on its whole support `[0, hi]`.
pub fn random_positive_density(rng: &mut impl Rng, hi: f64) -> Dist {
    let knots = rng.gen_range(2..=5usize);
    let heights: Vec<f64> = (0..=knots).map(|_| rng.gen_range(0.2..1.0)).collect();
    let h = hi / knots as f64;
    let raw: f64 = heights.windows(2).map(|p| 0.5 * (p[0] + p[1]) * h).sum();
    let segs = (0..knots)
        .map(|k| Segment {
            lo: k as f64 * h,
            hi: if k + 1 == knots { hi } else { (k + 1) as f64 * h },
            f_lo: heights[k] / raw,
            f_hi: heights[k + 1] / raw,
        })
        .collect();
    Dist::from_parts(vec![], segs).expect("generated density is valid")
}

/// Up to `max_atoms` atoms on a 0.05 grid in `[0, 1]`.
pub fn random_small_discrete(rng: &mut impl Rng, max_atoms: usize) -> Dist {
    let k = rng.gen_range(2..=max_atoms);
    let w = dirichlet(rng, k);
    let pts: Vec<(f64, f64)> = w
        .iter()
        .map(|wi| (rng.gen_range(0..=20u32) as f64 * 0.05, *wi))
        .collect();
    Dist::discrete(&pts).expect("generated atoms are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_and_valid() {
        for k in 0..50 {
            let a = random_instance(&mut rng_for(KW_SEED, k));
            let b = random_instance(&mut rng_for(KW_SEED, k));
            assert_eq!(a, b);
            for d in a.boxes() {
                assert!((d.total_mass() - 1.0).abs() < 1e-12);
                assert!(d.upper() <= 10.0);
            }
            let c = random_continuous(&mut rng_for(HEM_SEED, k), 10.0);
            assert!(!c.has_atoms());
            let p = random_positive_density(&mut rng_for(HEM_SEED, k), 3.0);
            assert!((p.total_mass() - 1.0).abs() < 1e-12 && p.upper() == 3.0);
        }
    }
}
