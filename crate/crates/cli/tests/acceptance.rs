//! Acceptance suite: one PASS/FAIL line per criterion with the measured
//! numbers behind it. Runs as a plain binary (`harness = false`) and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use qd_haze::model::{fragment_entropy_pi_half, mutual_info_closed_form};
use qd_haze::observables::{deficit_overlap_curve, info_curve, mutual_info, redundancy, Method};
use qd_haze::oracle::oracle_info_curve;
use qd_haze::schur::{fragment_entropy, mutual_info_schur};
use qd_haze::{EnvQubit, ModelConfig, SystemQubit, Time};

const TIMES: [Time; 5] = [
    Time::ZERO,
    Time::PiRatio { num: 1, den: 7 },
    Time::PiRatio { num: 1, den: 3 },
    Time::HALF_PI,
    Time::Radians(1.9),
];

fn env(h: f64) -> EnvQubit {
    EnvQubit::from_haziness(h, 0.5).unwrap()
}

fn model(n: usize, h: f64) -> ModelConfig {
    ModelConfig::new(n, SystemQubit::plus(), env(h)).unwrap()
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let (mut ds, mut dc) = (0.0f64, 0.0f64);
    for n in 2..=8 {
        for t in TIMES {
            for h in [0.0, 0.25, 0.8, 1.0] {
                let cfg = model(n, h);
                let curve = oracle_info_curve(t, &cfg).unwrap();
                for (k, or) in curve.iter().enumerate() {
                    ds = ds.max((mutual_info_schur(t, k, &cfg).unwrap() - or).abs());
                    dc = dc.max((mutual_info_closed_form(t, k, &cfg).unwrap().bits - or).abs());
                }
            }
        }
    }
    let took = start.elapsed();
    outcome(
        ds <= 1e-8 && dc <= 1e-8 && took <= Duration::from_secs(300),
        format!("max |schur−oracle| = {ds:.2e}, max |closed−oracle| = {dc:.2e}, {took:.1?}"),
    )
}

fn closed_form_cross_check() -> Outcome {
    let sys = SystemQubit::plus();
    let mut worst = 0.0f64;
    for h in [0.1, 0.5, 0.9] {
        for k in (1..=50).chain([100, 200]) {
            let a = fragment_entropy_pi_half(k, &sys, &env(h)).unwrap();
            let b = fragment_entropy(Time::HALF_PI, k, &sys, &env(h)).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    outcome(worst <= 1e-9, format!("max |ΔH_F| = {worst:.2e}"))
}

fn clear_plateau() -> Outcome {
    let bits = info_curve(Time::HALF_PI, &model(100, 0.0), Method::Auto).unwrap().bits();
    let plateau = bits[1..100].iter().map(|i| (i - 1.0).abs()).fold(0.0, f64::max);
    let jump = (bits[100] - 2.0).abs();
    outcome(
        plateau <= 1e-9 && jump <= 1e-9,
        format!("max |I−1| on 1..99 = {plateau:.2e}, |I(100)−2| = {jump:.2e}"),
    )
}

fn single_record() -> Outcome {
    let mut worst = 0.0f64;
    for h in [0.0, 0.25, 0.5, 0.8, 0.95] {
        let (i, _) = mutual_info(Time::HALF_PI, 1, &model(100, h), Method::Auto).unwrap();
        worst = worst.max((i - (1.0 - h)).abs());
    }
    outcome(worst <= 1e-10, format!("max |I−(1−h)| = {worst:.2e}"))
}

fn small_fragment_scaling() -> Outcome {
    let h = 0.95;
    let mut worst = 0.0f64;
    for k in 2..=5 {
        let (i, _) = mutual_info(Time::HALF_PI, k, &model(100, h), Method::Auto).unwrap();
        let linear = (1.0 - h) * k as f64;
        worst = worst.max((i - linear).abs() / linear);
    }
    outcome(worst <= 0.2, format!("max relative gap to (1−h)·#F = {worst:.3}"))
}

fn redundancy_scaling() -> Outcome {
    let hs = [0.90, 0.92, 0.94, 0.96, 0.98, 0.99];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for h in hs {
        let r = redundancy(0.1, Time::HALF_PI, &model(100, h), Method::Auto).unwrap();
        let Some(red) = r.redundancy else {
            return outcome(false, format!("no qualifying fragment at h = {h}"));
        };
        xs.push(1.0 - h);
        ys.push(red.value());
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - a * x - b).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r2 = 1.0 - ss_res / ss_tot;
    let max_r = ys.iter().cloned().fold(0.0, f64::max);
    let clear = redundancy(0.1, Time::HALF_PI, &model(100, 0.0), Method::Auto)
        .unwrap()
        .redundancy
        .map(|r| r.value());
    let ys_txt: Vec<String> = ys.iter().map(|y| format!("{y:.3}")).collect();
    outcome(
        r2 >= 0.98 && b.abs() <= 0.15 * max_r && clear == Some(100.0),
        format!(
            "R = [{}], fit a = {a:.2}, b = {b:.3}, R² = {r2:.4}, |b|/max R = {:.3}, R(h=0) = {clear:?}",
            ys_txt.join(", "),
            b.abs() / max_r
        ),
    )
}

fn totally_hazy_null() -> Outcome {
    let mut worst = (0.0f64, String::new());
    let mut note = |i: f64, what: String| {
        if i > worst.0 {
            worst = (i, what);
        }
    };
    for n in 2..=8 {
        let cfg = model(n, 1.0);
        for t in TIMES {
            for (k, i) in oracle_info_curve(t, &cfg).unwrap().into_iter().enumerate() {
                note(i, format!("oracle n_env={n} n_frag={k} t={t}"));
                note(mutual_info_schur(t, k, &cfg).unwrap(), format!("schur n_env={n} n_frag={k} t={t}"));
                note(
                    mutual_info_closed_form(t, k, &cfg).unwrap().bits,
                    format!("closed-form n_env={n} n_frag={k} t={t}"),
                );
            }
        }
    }
    for t in TIMES {
        for k in [1, 10, 50, 99, 100] {
            let cfg = model(100, 1.0);
            note(mutual_info(t, k, &cfg, Method::Auto).unwrap().0, format!("auto n_env=100 n_frag={k} t={t}"));
        }
    }
    outcome(worst.0 <= 1e-10, format!("max I = {:.6} at {}", worst.0, worst.1))
}

fn deficit_overlap() -> Outcome {
    let envs: Vec<EnvQubit> = (0..20).map(|i| env(i as f64 / 20.0)).collect();
    let pts = deficit_overlap_curve(50, Time::HALF_PI, 100, &SystemQubit::plus(), &envs, Method::Auto).unwrap();
    let worst = pts
        .windows(2)
        .map(|w| w[0].deficit - w[1].deficit)
        .fold(0.0, f64::max);
    let last = pts.last().unwrap();
    outcome(
        worst <= 0.0,
        format!(
            "20 points, largest δ decrease = {worst:.2e}; O ∈ [{:.3e}, {:.3e}], δ ∈ [{:.3e}, {:.3e}]",
            pts[0].overlap, last.overlap, pts[0].deficit, last.deficit
        ),
    )
}

fn performance() -> Outcome {
    let sys = SystemQubit::plus();
    let start = Instant::now();
    fragment_entropy(Time::Radians(1.0), 200, &sys, &env(0.5)).unwrap();
    let frag = start.elapsed();
    let start = Instant::now();
    mutual_info_schur(Time::Radians(1.0), 200, &model(201, 0.5)).unwrap();
    let joint = start.elapsed();
    outcome(
        frag <= Duration::from_secs(10) && joint <= Duration::from_secs(60),
        format!("H_F(#F=200) {frag:.2?} (≤10 s), I_schur(#E=201, #F=200) {joint:.2?} (≤60 s)"),
    )
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 2] = [
        &["--n-env", "30", "--haziness", "0.6", "--t-grid", "0:pi/2:5", "--s01-im", "0.1", "--s01-re", "0.4"],
        &["--n-env", "6", "--r01", "0.3", "--t-grid", "0.2,1.9,pi/2"],
    ];
    let mut total = 0;
    for args in runs {
        let outputs: Vec<Vec<u8>> = ["1", "4", "16"]
            .iter()
            .map(|threads| {
                let out = Command::new(env!("CARGO_BIN_EXE_qd-haze"))
                    .arg("mutual-info")
                    .args(args)
                    .args(["--threads", threads])
                    .output()
                    .expect("run qd-haze");
                assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
                out.stdout
            })
            .collect();
        if outputs.iter().any(|o| o != &outputs[0]) {
            return outcome(false, format!("outputs differ for {args:?}"));
        }
        total += outputs[0].len();
    }
    outcome(true, format!("2 sweeps, {total} bytes, identical at 1/4/16 threads"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("closed-form cross-check at t=π/2", closed_form_cross_check),
        ("clear-environment plateau and jump", clear_plateau),
        ("single-qubit hazy record I=1−h", single_record),
        ("small-fragment scaling (1−h)·#F", small_fragment_scaling),
        ("redundancy scaling with 1−h", redundancy_scaling),
        ("totally hazy null result", totally_hazy_null),
        ("deficit–overlap monotonicity", deficit_overlap),
        ("performance at #F=200", performance),
        ("determinism across thread counts", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
