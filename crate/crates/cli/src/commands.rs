//! The four subcommands as functions from a resolved sweep to CSV text.
//!
//! Grid points are evaluated on a rayon pool of the requested size and
//! collected in grid order, so the bytes produced do not depend on the
//! number of threads.

use rayon::prelude::*;

use qd_haze::algebra::{binary_entropy, C64};
use qd_haze::model::{bimodal_distribution, fragment_entropy_pi_half, good_decoherence_info, mutual_info_closed_form};
use qd_haze::observables::{fragment_deficit, info_curve, mutual_info, redundancy, Method};
use qd_haze::oracle::oracle_info_curve;
use qd_haze::schur::{fragment_entropy, fragment_spectrum, joint_spectrum, mutual_info_schur};
use qd_haze::{EnvQubit, ModelConfig, SystemQubit, Time};

use crate::config::Sweep;

/// A finished table plus the number of rows that carry an error marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub csv: String,
    pub errors: usize,
}

/// Reals at 17 significant digits; `-0` prints as `0`.
pub fn real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .flexible(true)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("in-memory writer");
    String::from_utf8(bytes).expect("csv output is UTF-8")
}

fn row(w: &mut csv::Writer<Vec<u8>>, fields: &[String]) {
    w.write_record(fields).expect("in-memory writer");
}

pub fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

fn marker(e: &qd_haze::Error) -> String {
    format!("error: {e}")
}

/// `t,n_frag,n_env,haziness,method,I_bits` over the (time × fragment) grid,
/// sorted by time then fragment size.
pub fn cmd_mutual_info(sweep: &Sweep) -> Table {
    let mut times = sweep.times.clone();
    times.sort_by(|a, b| a.value().total_cmp(&b.value()));
    let cfg = sweep.model;
    let grid: Vec<(Time, usize)> = times
        .iter()
        .flat_map(|&t| sweep.frags.iter().map(move |&k| (t, k)))
        .collect();
    let results: Vec<qd_haze::Result<(f64, Method)>> = pool(sweep.threads).install(|| {
        grid.par_iter()
            .map(|&(t, k)| mutual_info(t, k, &cfg, sweep.method))
            .collect()
    });
    let mut w = writer();
    row(&mut w, &["t", "n_frag", "n_env", "haziness", "method", "I_bits"].map(String::from));
    let mut errors = 0;
    for (&(t, k), res) in grid.iter().zip(&results) {
        let mut fields = vec![real(t.value()), k.to_string(), cfg.n_env.to_string(), real(cfg.env.haziness())];
        match res {
            Ok((bits, m)) => fields.extend([m.to_string(), real(*bits)]),
            Err(e) => {
                errors += 1;
                fields.extend(["error".to_string(), marker(e)]);
            }
        }
        row(&mut w, &fields);
    }
    Table { csv: finish(w), errors }
}

/// `haziness,delta,t,n_frag_delta,redundancy` over (haziness × time); absent
/// values are empty fields.
pub fn cmd_redundancy(sweep: &Sweep) -> Table {
    let grid: Vec<(f64, Time)> = sweep
        .hazes
        .iter()
        .flat_map(|&h| sweep.times.iter().map(move |&t| (h, t)))
        .collect();
    let results: Vec<qd_haze::Result<_>> = pool(sweep.threads).install(|| {
        grid.par_iter()
            .map(|&(h, t)| {
                let cfg = sweep.model_at(h)?;
                redundancy(sweep.delta, t, &cfg, sweep.method)
            })
            .collect()
    });
    let mut w = writer();
    row(&mut w, &["haziness", "delta", "t", "n_frag_delta", "redundancy"].map(String::from));
    let mut errors = 0;
    for (&(h, t), res) in grid.iter().zip(&results) {
        let mut fields = vec![real(h), real(sweep.delta), real(t.value())];
        match res {
            Ok(r) => {
                fields.push(r.n_frag_delta.map(|k| k.to_string()).unwrap_or_default());
                fields.push(r.redundancy.map(|x| real(x.value())).unwrap_or_default());
            }
            Err(e) => {
                errors += 1;
                fields.extend([marker(e), String::new()]);
            }
        }
        row(&mut w, &fields);
    }
    Table { csv: finish(w), errors }
}

/// `n,P_L,P_R` for one fragment, then an `overlap,deficit` header and its
/// value row. The deficit is taken at the sweep's (single) time, π/2 unless
/// configured otherwise.
pub fn cmd_bimodal(sweep: &Sweep) -> Result<Table, String> {
    let k = sweep.n_frag;
    if k == 0 || k > sweep.model.n_env {
        return Err(format!("n_frag = {k} must lie in 1..={}", sweep.model.n_env));
    }
    let [t] = sweep.times[..] else {
        return Err("bimodal takes a single time".into());
    };
    let cfg = sweep.model;
    let b = bimodal_distribution(k, &cfg.system, &cfg.env).map_err(|e| e.to_string())?;
    let d = pool(sweep.threads)
        .install(|| fragment_deficit(t, k, &cfg, sweep.method))
        .map_err(|e| e.to_string())?;
    let mut w = writer();
    row(&mut w, &["n", "P_L", "P_R"].map(String::from));
    for (n, (l, r)) in b.p_left.iter().zip(&b.p_right).enumerate() {
        row(&mut w, &[n.to_string(), real(*l), real(*r)]);
    }
    row(&mut w, &["overlap", "deficit"].map(String::from));
    row(&mut w, &[real(b.overlap), real(d)]);
    Ok(Table { csv: finish(w), errors: 0 })
}

/// One line of the validation report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max_abs_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.max_abs_deviation <= self.tolerance
    }
}

const TIMES: [Time; 5] = [
    Time::ZERO,
    Time::PiRatio { num: 1, den: 7 },
    Time::PiRatio { num: 1, den: 3 },
    Time::HALF_PI,
    Time::Radians(1.9),
];
const HAZES: [f64; 4] = [0.0, 0.25, 0.8, 1.0];

fn plus_model(n: usize, h: f64) -> ModelConfig {
    ModelConfig::new(n, SystemQubit::plus(), EnvQubit::from_haziness(h, 0.5).expect("h in range"))
        .expect("n ≥ 1")
}

/// Closed-form information; `fault` flips the sign of the imperfect
/// decoherence correction so the harness can prove it notices.
fn closed_form(t: Time, k: usize, cfg: &ModelConfig, fault: bool) -> qd_haze::Result<f64> {
    let info = mutual_info_closed_form(t, k, cfg)?;
    let sign = if fault { -1.0 } else { 1.0 };
    Ok(info.fragment_gain + sign * info.decoherence_correction)
}

fn max_dev(devs: impl IntoParallelIterator<Item = qd_haze::Result<f64>>) -> f64 {
    let devs: Vec<_> = devs.into_par_iter().collect();
    devs.into_iter()
        .map(|d| d.unwrap_or(f64::INFINITY))
        .fold(0.0, |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) })
}

/// Runs every cross-method check.
pub fn run_validation(threads: usize, inject_fault: bool) -> Vec<Check> {
    pool(threads).install(|| {
        let oracle_grid: Vec<(usize, Time, f64)> = (2..=8)
            .flat_map(|n| TIMES.iter().flat_map(move |&t| HAZES.iter().map(move |&h| (n, t, h))))
            .collect();
        // per configuration: (max |schur − oracle|, max |closed form − oracle|)
        let oracle_devs: Vec<qd_haze::Result<(f64, f64)>> = oracle_grid
            .par_iter()
            .map(|&(n, t, h)| {
                let cfg = plus_model(n, h);
                let curve = oracle_info_curve(t, &cfg)?;
                let (mut ds, mut dc) = (0.0f64, 0.0f64);
                for (k, or) in curve.iter().enumerate() {
                    ds = ds.max((mutual_info_schur(t, k, &cfg)? - or).abs());
                    dc = dc.max((closed_form(t, k, &cfg, inject_fault)? - or).abs());
                }
                Ok((ds, dc))
            })
            .collect();
        let schur_oracle = max_dev(oracle_devs.par_iter().map(|r| r.clone().map(|p| p.0)));
        let closed_oracle = max_dev(oracle_devs.par_iter().map(|r| r.clone().map(|p| p.1)));

        let pi_half_grid: Vec<(f64, usize)> = [0.1, 0.5, 0.9]
            .into_iter()
            .flat_map(|h| (1..=50).chain([100, 200]).map(move |k| (h, k)))
            .collect();
        let pi_half = max_dev(pi_half_grid.par_iter().map(|&(h, k)| {
            let env = EnvQubit::from_haziness(h, 0.5)?;
            let sys = SystemQubit::plus();
            Ok((fragment_entropy_pi_half(k, &sys, &env)? - fragment_entropy(Time::HALF_PI, k, &sys, &env)?).abs())
        }));

        // at t = π/2 with r00 = 1/2 every Λ_k vanishes, so the remainder of
        // the environment decoheres S+F perfectly
        let good = max_dev([0.0, 0.3, 0.8].into_par_iter().flat_map_iter(|h| {
            let cfg = plus_model(50, h);
            (1..50).map(move |k| {
                Ok((good_decoherence_info(Time::HALF_PI, k, &cfg)? - closed_form(Time::HALF_PI, k, &cfg, inject_fault)?).abs())
            })
        }));

        let curve_grid: Vec<(Time, f64)> = TIMES
            .iter()
            .chain(&[Time::Radians(0.4), Time::Radians(2.8)])
            .flat_map(|&t| [0.0, 0.25, 0.5, 0.8, 0.95].map(|h| (t, h)))
            .collect();
        let invariants = max_dev(curve_grid.par_iter().map(|&(t, h)| {
            let cfg = plus_model(40, h);
            let mut worst = 0.0f64;
            let mut prev = 0.0;
            for k in 0..=40 {
                let i = closed_form(t, k, &cfg, inject_fault)?;
                worst = worst.max(-i).max(i - 2.0).max(prev - i);
                prev = i;
            }
            Ok(worst)
        }));

        let weights = max_dev([(Time::from(0.7), 0.3), (Time::HALF_PI, 0.9), (Time::from(2.2), 0.6)].par_iter().map(|&(t, h)| {
            let env = EnvQubit::from_haziness(h, 0.5)?;
            let sys = SystemQubit::new(0.4, C64::new(0.3, 0.2))?;
            let wf = fragment_spectrum(t, 120, &sys, &env)?.total_weight();
            let wj = joint_spectrum(t, 120, &ModelConfig::new(150, sys, env)?)?.total_weight();
            Ok((wf - 1.0).abs().max((wj - 1.0).abs()))
        }));

        let mixed_sys = SystemQubit::new(0.3, C64::new(0.1, -0.2)).expect("valid state");
        let mixed_grid: Vec<(usize, Time, f64)> = (2..=6)
            .flat_map(|n| TIMES.iter().flat_map(move |&t| [0.0, 0.25, 0.8].map(move |h| (n, t, h))))
            .collect();
        let mixed = max_dev(mixed_grid.par_iter().map(|&(n, t, h)| {
            let cfg = ModelConfig::new(n, mixed_sys, EnvQubit::from_haziness(h, 0.5)?)?;
            let curve = oracle_info_curve(t, &cfg)?;
            let mut worst = 0.0f64;
            for (k, or) in curve.iter().enumerate() {
                worst = worst.max((closed_form(t, k, &cfg, inject_fault)? - or).abs());
            }
            Ok(worst)
        }));

        let auto_plateau = max_dev([info_curve(Time::HALF_PI, &plus_model(100, 0.0), Method::Auto).map(|c| {
            c.points
                .iter()
                .map(|p| {
                    let want = match p.n_frag {
                        0 => 0.0,
                        100 => 2.0,
                        _ => binary_entropy(0.5).unwrap_or(f64::NAN),
                    };
                    (p.bits - want).abs()
                })
                .fold(0.0, f64::max)
        })]);

        vec![
            Check { name: "oracle_vs_schur", max_abs_deviation: schur_oracle, tolerance: 1e-8 },
            Check { name: "oracle_vs_closed_form", max_abs_deviation: closed_oracle, tolerance: 1e-8 },
            Check { name: "pi_half_vs_schur_entropy", max_abs_deviation: pi_half, tolerance: 1e-9 },
            Check { name: "good_decoherence_vs_closed_form", max_abs_deviation: good, tolerance: 1e-10 },
            Check { name: "closed_form_bounds_and_monotonicity", max_abs_deviation: invariants, tolerance: 1e-9 },
            Check { name: "spectrum_unit_weight", max_abs_deviation: weights, tolerance: 1e-9 },
            Check { name: "mixed_system_closed_form_vs_oracle", max_abs_deviation: mixed, tolerance: 1e-8 },
            Check { name: "clear_environment_plateau", max_abs_deviation: auto_plateau, tolerance: 1e-9 },
        ]
    })
}

/// `check,max_abs_deviation,tolerance,pass`.
pub fn validation_csv(checks: &[Check]) -> String {
    let mut w = writer();
    row(&mut w, &["check", "max_abs_deviation", "tolerance", "pass"].map(String::from));
    for c in checks {
        row(&mut w, &[c.name.to_string(), real(c.max_abs_deviation), real(c.tolerance), c.pass().to_string()]);
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_keep_seventeen_digits() {
        assert_eq!(real(0.1), "1.0000000000000001e-1");
        assert_eq!(real(-0.0), "0.0000000000000000e0");
        let x = std::f64::consts::PI / 7.0;
        assert_eq!(real(x).parse::<f64>().unwrap(), x);
    }
}
