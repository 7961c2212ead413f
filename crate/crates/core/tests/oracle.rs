use qd_haze::algebra::{hermitian_eigenvalues, Eigensolver, C64};
use qd_haze::oracle::*;
use qd_haze::{EnvQubit, ModelConfig, SystemQubit, Time};

fn cfg(n: usize, h: f64) -> ModelConfig {
    ModelConfig::new(n, SystemQubit::plus(), EnvQubit::from_haziness(h, 0.5).unwrap()).unwrap()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect())
}

#[test]
fn every_fragment_of_a_size_is_equivalent() {
    let skew = ModelConfig::new(
        5,
        SystemQubit::new(0.4, C64::new(0.1, 0.3)).unwrap(),
        EnvQubit::new(0.65, C64::new(0.15, -0.1)).unwrap(),
    )
    .unwrap();
    for c in [cfg(5, 0.0), cfg(5, 0.6), skew] {
        for t in [Time::from(0.3), Time::HALF_PI, Time::from(2.2)] {
            let mut by_size = [None::<f64>; 6];
            for frag in subsets(5) {
                let i = oracle_mutual_info_subset(t, &c, &frag, Eigensolver::default()).unwrap();
                match by_size[frag.len()] {
                    None => by_size[frag.len()] = Some(i),
                    Some(first) => assert!((i - first).abs() <= 1e-12, "{frag:?}: {i} vs {first}"),
                }
            }
        }
    }
}

#[test]
fn information_is_bounded_and_monotone() {
    for n in 1..=7 {
        for h in [0.0, 0.25, 0.8, 1.0] {
            for t in [Time::ZERO, Time::pi_ratio(1, 7), Time::pi_ratio(1, 3), Time::HALF_PI, Time::from(1.9)] {
                let curve = oracle_info_curve(t, &cfg(n, h)).unwrap();
                assert_eq!(curve[0], 0.0);
                for w in curve.windows(2) {
                    assert!(w[1] >= w[0] - 1e-10, "n={n} h={h} t={t}: {curve:?}");
                }
                for i in curve {
                    assert!((-1e-10..=2.0 + 1e-10).contains(&i));
                }
            }
        }
    }
}

#[test]
fn initial_spectrum_is_a_product() {
    let sys = SystemQubit::new(0.3, C64::new(0.2, 0.1)).unwrap();
    let env = EnvQubit::new(0.6, C64::new(0.1, -0.2)).unwrap();
    let n = 4;
    let c = ModelConfig::new(n, sys, env).unwrap();
    let (sp, sm) = qd_haze::algebra::eig_2x2_hermitian(&sys.matrix()).unwrap();
    let (lp, lm) = (env.lambda_plus(), env.lambda_minus());
    let mut want = Vec::new();
    for s in [sp, sm] {
        for mask in 0u32..1 << n {
            let ones = mask.count_ones() as i32;
            want.push(s * lm.powi(ones) * lp.powi(n as i32 - ones));
        }
    }
    want.sort_by(|a, b| a.total_cmp(b));
    for t in [Time::ZERO, Time::from(0.8), Time::HALF_PI] {
        let state = dense_joint_state(t, &c).unwrap();
        let got = hermitian_eigenvalues(state.matrix()).unwrap();
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() <= 1e-12, "t={t}: {a} vs {b}");
        }
    }
}

#[test]
fn solvers_agree_on_oracle_entropies() {
    let c = cfg(5, 0.4);
    let frag = [1, 3, 4];
    let ql = oracle_mutual_info_subset(Time::from(1.1), &c, &frag, Eigensolver::HouseholderQl).unwrap();
    let jac = oracle_mutual_info_subset(Time::from(1.1), &c, &frag, Eigensolver::Jacobi).unwrap();
    assert!((ql - jac).abs() <= 1e-10);
}

#[test]
fn memory_guard() {
    assert!(dense_joint_state(Time::ZERO, &cfg(MAX_ORACLE_ENV + 1, 0.1)).is_err());
}

#[test]
fn bad_fragment_labels_rejected() {
    let c = cfg(3, 0.2);
    assert!(oracle_mutual_info_subset(Time::HALF_PI, &c, &[0], Eigensolver::default()).is_err());
    assert!(oracle_mutual_info_subset(Time::HALF_PI, &c, &[4], Eigensolver::default()).is_err());
}
