use proptest::prelude::*;

use prophet_core::mc::{simulate, SimConfig};
use prophet_core::prophet::{expected_max, nonstrategic_dp_payoff, nonstrategic_payoff, spectrum};
use prophet_core::random::{random_box, random_instance, rng_for};
use prophet_core::signaling::{best_response, binary_reduction, is_mpc, SignalKind};
use prophet_core::strategic::{opt_upper_bound_cutoffs, strategic_payoff, strategic_payoff_closed_form};
use prophet_core::{Dist, Policy, Profile};

fn a_box() -> impl Strategy<Value = Dist> {
    any::<u64>().prop_map(|s| random_box(&mut rng_for(s, 0)))
}

fn an_instance() -> impl Strategy<Value = prophet_core::Instance> {
    any::<u64>().prop_map(|s| random_instance(&mut rng_for(s, 1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cdf_is_monotone_with_left_limits(d in a_box(), x in 0.0f64..10.0, y in 0.0f64..10.0) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(d.cdf(lo) <= d.cdf(hi) + 1e-15);
        prop_assert!(d.cdf_left(x) <= d.cdf(x));
        prop_assert!(d.cdf(-1.0) == 0.0 && (d.cdf(10.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quantile_inverts_cdf(d in a_box(), u in 0.001f64..0.999) {
        let q = d.quantile(u);
        prop_assert!(d.cdf(q) >= u - 1e-12);
        prop_assert!(d.cdf_left(q) <= u + 1e-12);
    }

    #[test]
    fn conditional_split_preserves_mean(d in a_box(), s in 0.0f64..1.0) {
        let t = d.lower() + (d.upper() - d.lower()) * s;
        if let Ok((a, b, m)) = d.conditional_split(t) {
            prop_assert!(a <= b + 1e-12);
            prop_assert!((m * a + (1.0 - m) * b - d.mean()).abs() < 1e-9);
        }
    }

    #[test]
    fn superquantile_decreases_to_the_mean(d in a_box(), w1 in 0.01f64..1.0, w2 in 0.01f64..1.0) {
        let (lo, hi) = if w1 <= w2 { (w1, w2) } else { (w2, w1) };
        prop_assert!(d.superquantile(lo).unwrap() >= d.superquantile(hi).unwrap() - 1e-9);
        prop_assert!((d.superquantile(1.0).unwrap() - d.mean()).abs() < 1e-9);
        prop_assert!(d.superquantile(lo).unwrap() <= d.upper() + 1e-12);
    }

    #[test]
    fn best_response_is_a_contraction_meeting_the_threshold(d in a_box(), s in 0.0f64..1.2) {
        let t = d.mean() + (d.upper() - d.mean()) * s;
        let r = best_response(&d, t);
        let g = binary_reduction(&r, &d);
        prop_assert!(is_mpc(&g, &d).holds);
        match r.kind {
            SignalKind::NoInformation => prop_assert_eq!(r.accept_prob, 1.0),
            SignalKind::AlwaysRejected => prop_assert_eq!(r.accept_prob, 0.0),
            SignalKind::ThresholdSignaling => {
                let mass_at_t = 1.0 - g.cdf_left(t);
                prop_assert!((mass_at_t - r.accept_prob).abs() < 1e-9);
                prop_assert!((d.superquantile(r.accept_prob).unwrap() - t).abs() < 1e-7 * t.max(1.0));
            }
        }
    }

    #[test]
    fn accept_probability_falls_with_threshold(d in a_box(), s1 in 0.0f64..1.0, s2 in 0.0f64..1.0) {
        let span = d.upper() - d.mean();
        let (a, b) = (d.mean() + span * s1.min(s2), d.mean() + span * s1.max(s2));
        prop_assert!(best_response(&d, a).accept_prob >= best_response(&d, b).accept_prob - 1e-12);
    }

    #[test]
    fn classic_orderings(inst in an_instance()) {
        let opt = expected_max(&inst);
        let dp = nonstrategic_dp_payoff(&inst);
        let sum: f64 = inst.means().iter().sum();
        prop_assert!(inst.max_mean() <= dp + 1e-9 && dp <= opt + 1e-9 && opt <= sum + 1e-9);
        let s = spectrum(&inst);
        prop_assert!(nonstrategic_payoff(&inst, s.t_kw) >= 0.5 * opt - 1e-9);
        prop_assert!(nonstrategic_payoff(&inst, s.t_star) >= 0.5 * opt - 1e-9);
        prop_assert!(nonstrategic_payoff(&inst, s.t_sc) <= dp + 1e-9);
    }

    #[test]
    fn strategic_payoff_identities(inst in an_instance(), s in 0.01f64..1.0) {
        let t = inst.max_mean() + (inst.upper() - inst.max_mean()) * s;
        prop_assume!(t > inst.max_mean());
        let walk = strategic_payoff(&inst, t);
        prop_assert!((walk - strategic_payoff_closed_form(&inst, t).unwrap()).abs() < 1e-12);
        prop_assert!(walk <= t + 1e-12);
        prop_assert!(opt_upper_bound_cutoffs(&inst, t).unwrap() >= expected_max(&inst) - 1e-9);
    }

    #[test]
    fn simulation_is_reproducible(inst in an_instance(), seed in any::<u64>()) {
        let profile = Profile::full_information(inst.boxes().to_vec()).unwrap();
        let t = spectrum(&inst).t_kw;
        let cfg = SimConfig::new(2_000, seed);
        let a = simulate(Policy::Fixed(t), &profile, cfg).unwrap();
        let b = simulate(Policy::Fixed(t), &profile, SimConfig { parallel_streams: 3, ..cfg }).unwrap();
        prop_assert_eq!(a, b);
    }
}
