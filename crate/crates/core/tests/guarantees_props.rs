mod common;

use common::{rel, A};
use hcnet::guarantees::{
    critical_power, criticality_feasible, rate_always_active, rate_scheduled, solve_critical_hk, theta,
};
use hcnet::{LinkBudget, LogBase, PathLoss};
use proptest::prelude::*;

fn fig2(snr_db: f64) -> LinkBudget {
    LinkBudget::from_snr_db(1.0, snr_db, A, PathLoss::power_law(4.0).unwrap()).unwrap()
}

#[test]
fn scheduled_rate_at_reuse_three() {
    let l = fig2(0.0);
    let h3 = 2.0 * 3f64.sqrt();
    // θ(1, 2√3) from the closed-form pieces.
    let signal = 9.0 / 256.0;
    let t = 2.0 * h3 - A;
    let s12 = 12f64.sqrt();
    let pi = std::f64::consts::PI;
    let bound = 2.0 * pi / s12 * t.powi(-3) / h3 * 4.0 / 3.0 + pi / s12 * t.powi(-2) / (h3 * h3) * 2.0;
    let th = signal / (bound + signal);
    let r = rate_scheduled(&l, 3, h3, LogBase::Natural).unwrap();
    assert!(rel(r.theta, th) < 1e-12);
    assert!(rel(r.rate, th.ln_1p() / 3.0) < 1e-12);
    assert!(rel(rate_always_active(&l, 2.0, LogBase::Natural).unwrap().rate, 0.149_287_4) < 1e-6);
}

#[test]
fn critical_values_under_base_change_and_scaling() {
    let base = fig2(0.0);
    for k in [3, 4] {
        let h = solve_critical_hk(&base, 2.0, k).unwrap();
        for c in [0.5, 2.0, 10.0] {
            let scaled = LinkBudget::new(c * base.power, c * base.noise, base.distance, base.model.clone()).unwrap();
            let hs = solve_critical_hk(&scaled, 2.0, k).unwrap();
            assert!(rel(hs, h) < 1e-9, "K={k} c={c}");
        }
        // The equation compares like-based logs on both sides.
        let nat = rate_scheduled(&base, k, h, LogBase::Natural).unwrap().rate
            / rate_always_active(&base, 2.0, LogBase::Natural).unwrap().rate;
        let bits = rate_scheduled(&base, k, h, LogBase::Base2).unwrap().rate
            / rate_always_active(&base, 2.0, LogBase::Base2).unwrap().rate;
        assert!((nat - 1.0).abs() < 1e-9 && (bits - 1.0).abs() < 1e-9);
    }
}

#[test]
fn scheduling_verdict_flips_at_critical_distance() {
    let l = fig2(0.0);
    let aa = rate_always_active(&l, 2.0, LogBase::Natural).unwrap().rate;
    for k in [3, 4] {
        let hk = solve_critical_hk(&l, 2.0, k).unwrap();
        for f in [1.01, 1.1, 2.0] {
            assert!(rate_scheduled(&l, k, hk * f, LogBase::Natural).unwrap().rate > aa);
        }
        for f in [0.99, 0.9, 0.6] {
            assert!(rate_scheduled(&l, k, hk * f, LogBase::Natural).unwrap().rate < aa);
        }
    }
}

#[test]
fn power_boundary_at_critical_distance() {
    let l = fig2(0.0);
    for k in [3, 4] {
        let hk = solve_critical_hk(&l, 2.0, k).unwrap();
        let p = critical_power(&l, 2.0, k, hk).unwrap();
        assert!(rel(p.p_k_star, 1.0) < 1e-8);
    }
}

fn feasible_config() -> impl Strategy<Value = (LinkBudget, f64, u32)> {
    (2.5f64..5.0, 0.5f64..3.0, 0.5f64..2.0, 0.0f64..25.0, prop::sample::select(vec![3u32, 4]))
        .prop_map(|(alpha, h, dfrac, snr_db, k)| {
            let link = LinkBudget::from_snr_db(1.0, snr_db, dfrac * h, PathLoss::power_law(alpha).unwrap()).unwrap();
            (link, h, k)
        })
        .prop_filter("criticality must be feasible", |(link, h, k)| {
            criticality_feasible(link, *h, *k).unwrap()
        })
}

proptest! {
    #[test]
    fn theta_increasing_in_h_and_p(alpha in 2.2f64..6.0, d in 0.1f64..5.0, h in 0.2f64..5.0, f in 1.01f64..3.0) {
        let link = LinkBudget::new(1.0, 0.01, d, PathLoss::power_law(alpha).unwrap()).unwrap();
        prop_assert!(theta(&link, h * f).unwrap() > theta(&link, h).unwrap());
        let louder = link.with_power(f).unwrap();
        prop_assert!(theta(&louder, h).unwrap() > theta(&link, h).unwrap());
    }

    #[test]
    fn critical_round_trips((link, h, k) in feasible_config(), margin in 0.0f64..1.0) {
        let aa = rate_always_active(&link, h, LogBase::Natural).unwrap().rate;
        let hk = solve_critical_hk(&link, h, k).unwrap();
        let sched = rate_scheduled(&link, k, hk, LogBase::Natural).unwrap().rate;
        prop_assert!(((sched - aa) / aa).abs() < 1e-9);

        let h_k = hk * (1.0 + margin);
        let cp = critical_power(&link, h, k, h_k).unwrap();
        prop_assert!(cp.feasible);
        let reduced = link.with_power(cp.p_k_star).unwrap();
        let kept = rate_scheduled(&reduced, k, h_k, LogBase::Natural).unwrap().rate;
        prop_assert!(((kept - aa) / aa).abs() < 1e-9);
    }
}
