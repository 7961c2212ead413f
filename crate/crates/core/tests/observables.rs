use qd_haze::algebra::{binary_entropy, C64};
use qd_haze::model::{fragment_entropy_pi_half, kappa, decoherence_factor};
use qd_haze::observables::*;
use qd_haze::{EnvQubit, ModelConfig, SystemQubit, Time};

fn cfg(n: usize, h: f64) -> ModelConfig {
    ModelConfig::new(n, SystemQubit::plus(), EnvQubit::from_haziness(h, 0.5).unwrap()).unwrap()
}

/// I(k) at t = π/2 straight from the binomial fragment spectrum, without the
/// observables layer.
fn pi_half_curve(c: &ModelConfig) -> Vec<f64> {
    let sys = &c.system;
    let lam = |count| decoherence_factor(Time::HALF_PI, &c.env, count).norm();
    let h_e = binary_entropy(kappa(sys, lam(c.n_env))).unwrap();
    (0..=c.n_env)
        .map(|k| {
            if k == 0 {
                return 0.0;
            }
            let h_f = fragment_entropy_pi_half(k, sys, &c.env).unwrap();
            let h_rest = binary_entropy(kappa(sys, lam(c.n_env - k))).unwrap();
            h_f - k as f64 * c.env.haziness() + h_e - h_rest
        })
        .collect()
}

fn scan(curve: &[f64], delta: f64, plateau: f64) -> Option<usize> {
    (1..curve.len()).find(|&k| curve[k] >= (1.0 - delta) * plateau - THRESHOLD_SLACK)
}

#[test]
fn plateau_levels() {
    assert_eq!(plateau_level(&SystemQubit::plus()), 1.0);
    let pointer = SystemQubit::new(1.0, C64::new(0.0, 0.0)).unwrap();
    assert_eq!(plateau_level(&pointer), 0.0);
    let quarter = SystemQubit::new(0.25, C64::new(0.0, 0.0)).unwrap();
    assert!((plateau_level(&quarter) - 0.811278124459133).abs() <= 1e-12);
    assert!(deficit(0.3, &pointer).is_err());
}

#[test]
fn deficit_examples() {
    let plus = SystemQubit::plus();
    assert_eq!(deficit(1.0, &plus).unwrap(), 0.0);
    assert_eq!(deficit(0.0, &plus).unwrap(), 1.0);
    assert!((deficit(0.9, &plus).unwrap() - 0.1).abs() <= 1e-15);
    // clamped at both ends
    assert_eq!(deficit(1.7, &plus).unwrap(), 0.0);
}

#[test]
fn clear_environment_plateau_and_jump() {
    let curve = info_curve(Time::HALF_PI, &cfg(100, 0.0), Method::Auto).unwrap();
    let bits = curve.bits();
    assert_eq!(bits[0], 0.0);
    for (k, i) in bits.iter().enumerate().take(100).skip(1) {
        assert!((i - 1.0).abs() <= 1e-9, "k={k}: {i}");
    }
    assert!((bits[100] - 2.0).abs() <= 1e-9);
    assert!(curve.points.iter().all(|p| p.method == Method::ClosedForm));
}

#[test]
fn hazy_curve_rises_slower_to_the_same_plateau() {
    let clear = info_curve(Time::HALF_PI, &cfg(100, 0.0), Method::Auto).unwrap().bits();
    let hazy = info_curve(Time::HALF_PI, &cfg(100, 0.8), Method::Auto).unwrap().bits();
    for k in 1..100 {
        assert!(hazy[k] <= clear[k] + 1e-12);
    }
    assert!(hazy[5] < 0.9);
    assert!((hazy[50] - 1.0).abs() <= 1e-3);
}

#[test]
fn zero_time_is_silent() {
    for m in [Method::Auto, Method::Schur, Method::ClosedForm] {
        let bits = info_curve(Time::ZERO, &cfg(20, 0.3), m).unwrap().bits();
        assert!(bits.iter().all(|&b| b.abs() <= 1e-12), "{m}: {bits:?}");
    }
}

#[test]
fn deficit_never_grows_with_fragment() {
    for h in [0.0, 0.3, 0.8, 0.95] {
        for t in [Time::pi_ratio(1, 3), Time::HALF_PI, Time::from(1.0)] {
            let c = cfg(40, h);
            let bits = info_curve(t, &c, Method::Auto).unwrap().bits();
            let d: Vec<f64> = bits.iter().map(|&i| deficit(i, &c.system).unwrap()).collect();
            for w in d.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "h={h} t={t}");
            }
        }
    }
}

#[test]
fn one_qubit_record_is_one_minus_h() {
    for h in [0.0, 0.25, 0.5, 0.8, 0.95, 1.0] {
        for n in [3, 100] {
            for m in [Method::Auto, Method::Schur] {
                let (i, _) = mutual_info(Time::HALF_PI, 1, &cfg(n, h), m).unwrap();
                assert!((i - (1.0 - h)).abs() <= 1e-10, "h={h} n={n} {m}: {i}");
            }
        }
    }
}

#[test]
fn minimal_fragment_matches_exhaustive_scan() {
    for h in [0.0, 0.2, 0.5, 0.8, 0.9, 0.95] {
        let c = cfg(100, h);
        let want = scan(&pi_half_curve(&c), 0.1, 1.0);
        let got = min_fragment_for_deficit(0.1, Time::HALF_PI, &c, Method::Auto).unwrap();
        assert_eq!(got, want, "h={h}");
    }
}

#[test]
fn golden_minimal_fragment_at_h_08() {
    let c = cfg(100, 0.8);
    assert_eq!(scan(&pi_half_curve(&c), 0.1, 1.0), Some(13));
    let r = redundancy(0.1, Time::HALF_PI, &c, Method::Auto).unwrap();
    assert_eq!(r.n_frag_delta, Some(13));
    let red = r.redundancy.unwrap();
    assert_eq!((red.numerator, red.denominator), (100, 13));
}

#[test]
fn clear_environment_redundancy_is_environment_size() {
    let r = redundancy(0.1, Time::HALF_PI, &cfg(100, 0.0), Method::Auto).unwrap();
    assert_eq!(r.n_frag_delta, Some(1));
    assert_eq!(r.redundancy.unwrap().value(), 100.0);
}

#[test]
fn redundancy_absent_without_decoherence() {
    // barely any time has passed, so no fragment reaches 90 % of the plateau
    let r = redundancy(0.1, Time::from(0.05), &cfg(60, 0.9), Method::Schur).unwrap();
    assert_eq!(r.n_frag_delta, None);
    assert_eq!(r.redundancy, None);
}

#[test]
fn redundancy_is_rational_in_environment_size() {
    for h in [0.1, 0.4, 0.7, 0.9] {
        for t in [Time::pi_ratio(1, 3), Time::HALF_PI] {
            let r = redundancy(0.1, t, &cfg(50, h), Method::Auto).unwrap();
            if let Some(red) = r.redundancy {
                assert_eq!(red.numerator, 50);
                assert_eq!(Some(red.denominator), r.n_frag_delta);
                assert!(red.denominator >= 1);
            }
        }
    }
}

#[test]
fn overlap_and_deficit_grow_together() {
    let envs: Vec<EnvQubit> = (0..20)
        .map(|i| EnvQubit::from_haziness(i as f64 / 20.0, 0.5).unwrap())
        .collect();
    let pts = deficit_overlap_curve(50, Time::HALF_PI, 100, &SystemQubit::plus(), &envs, Method::Auto).unwrap();
    assert_eq!(pts.len(), 20);
    assert_eq!(pts[0].haziness, 0.0);
    assert_eq!(pts[0].overlap, 0.0);
    assert!(pts[0].deficit <= 1e-12);
    for w in pts.windows(2) {
        assert!(w[1].overlap >= w[0].overlap);
        assert!(w[1].deficit >= w[0].deficit, "{w:?}");
    }
}

#[test]
fn fragment_deficit_agrees_across_paths() {
    for h in [0.5, 0.8, 0.95] {
        let c = cfg(40, h);
        for k in [1, 10, 39, 40] {
            let fast = fragment_deficit(Time::HALF_PI, k, &c, Method::ClosedForm).unwrap();
            let slow = fragment_deficit(Time::HALF_PI, k, &c, Method::Schur).unwrap();
            assert!((fast - slow).abs() <= 1e-10, "h={h} k={k}: {fast} vs {slow}");
        }
        // off the quarter turn the closed form goes through 1 − I/H_S
        let (i, _) = mutual_info(Time::from(1.0), 7, &c, Method::ClosedForm).unwrap();
        let d = fragment_deficit(Time::from(1.0), 7, &c, Method::ClosedForm).unwrap();
        assert_eq!(d, deficit(i, &c.system).unwrap());
    }
}

#[test]
fn method_names_round_trip() {
    for m in [Method::Auto, Method::Schur, Method::ClosedForm, Method::Oracle] {
        assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
    }
    assert!("dense".parse::<Method>().is_err());
}
