//! Quantities built on top of `I(S:F)`: information curves, the classical
//! plateau, information deficit and redundancy.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::algebra::binary_entropy;
use crate::error::{Error, Result};
use crate::model::{
    bimodal_distribution, information_shortfall_pi_half, mutual_info_closed_form, EnvQubit, ModelConfig, SystemQubit,
};
use crate::oracle::{oracle_info_curve, oracle_mutual_info, MAX_ORACLE_ENV};
use crate::schur::mutual_info_schur;
use crate::time::Time;

/// `auto` picks the oracle for environments of at most this many qubits.
pub const AUTO_ORACLE_MAX_ENV: usize = 8;
/// Absolute slack on the `(1 − δ) H_S` threshold.
pub const THRESHOLD_SLACK: f64 = 1e-12;
/// Negative round-off in `I` down to this size is reported as zero.
pub const ROUNDOFF_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Auto,
    Schur,
    ClosedForm,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Schur => "schur",
            Method::ClosedForm => "closed-form",
            Method::Oracle => "oracle",
        }
    }

    /// The concrete method `auto` resolves to for this request.
    pub fn resolve(self, t: Time, cfg: &ModelConfig) -> Result<Method> {
        match self {
            Method::Auto => Ok(if cfg.n_env <= AUTO_ORACLE_MAX_ENV {
                Method::Oracle
            } else if t.is_half_pi() && cfg.env.is_symmetric_population() {
                Method::ClosedForm
            } else {
                Method::Schur
            }),
            Method::Oracle if cfg.n_env > MAX_ORACLE_ENV => Err(Error::Precondition(format!(
                "method oracle requires n_env ≤ {MAX_ORACLE_ENV} (got {})",
                cfg.n_env
            ))),
            m => Ok(m),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" => Ok(Method::Auto),
            "schur" => Ok(Method::Schur),
            "closed-form" | "closed_form" => Ok(Method::ClosedForm),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::Domain(format!(
                "unknown method `{other}` (expected auto, schur, closed-form or oracle)"
            ))),
        }
    }
}

/// `I(S:F)` in bits for one fragment size, and the method that produced it.
pub fn mutual_info(t: Time, n_frag: usize, cfg: &ModelConfig, method: Method) -> Result<(f64, Method)> {
    let method = method.resolve(t, cfg)?;
    let bits = match method {
        Method::Schur => mutual_info_schur(t, n_frag, cfg)?,
        Method::ClosedForm => mutual_info_closed_form(t, n_frag, cfg)?.bits,
        Method::Oracle => oracle_mutual_info(t, n_frag, cfg)?,
        Method::Auto => unreachable!("resolved above"),
    };
    let bits = if (-ROUNDOFF_FLOOR..0.0).contains(&bits) { 0.0 } else { bits };
    Ok((bits, method))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoPoint {
    pub n_frag: usize,
    pub bits: f64,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoCurve {
    pub t: Time,
    /// One point per fragment size `0..=n_env`, in order.
    pub points: Vec<InfoPoint>,
}

impl InfoCurve {
    pub fn bits(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.bits).collect()
    }
}

pub fn info_curve(t: Time, cfg: &ModelConfig, method: Method) -> Result<InfoCurve> {
    let resolved = method.resolve(t, cfg)?;
    let bits: Vec<f64> = if resolved == Method::Oracle {
        oracle_info_curve(t, cfg)?
            .into_iter()
            .map(|b| if (-ROUNDOFF_FLOOR..0.0).contains(&b) { 0.0 } else { b })
            .collect()
    } else {
        (0..=cfg.n_env)
            .into_par_iter()
            .map(|k| mutual_info(t, k, cfg, resolved).map(|(b, _)| b))
            .collect::<Result<_>>()?
    };
    let points = bits
        .into_iter()
        .enumerate()
        .map(|(n_frag, bits)| InfoPoint {
            n_frag,
            bits,
            method: resolved,
        })
        .collect();
    Ok(InfoCurve { t, points })
}

/// Height of the classical plateau, `H(s00)`.
pub fn plateau_level(sys: &SystemQubit) -> f64 {
    binary_entropy(sys.s00()).expect("s00 is validated as a probability")
}

/// Information deficit `1 − I/H_S` against the plateau level, clamped to
/// `[0, 1]`.
pub fn deficit(info_bits: f64, sys: &SystemQubit) -> Result<f64> {
    let level = plateau_level(sys);
    if level <= 0.0 {
        return Err(Error::Domain(
            "deficit is undefined for a system without entropy to reveal".into(),
        ));
    }
    Ok((1.0 - info_bits / level).clamp(0.0, 1.0))
}

/// Smallest fragment whose information reaches `(1 − δ) H_S`, or `None`.
///
/// Binary search over the monotone curve, then a check of the neighbours
/// of the candidate; a linear scan takes over if that check fails.
pub fn min_fragment_for_deficit(delta: f64, t: Time, cfg: &ModelConfig, method: Method) -> Result<Option<usize>> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("information deficit {delta} must lie in (0, 1)")));
    }
    let level = plateau_level(&cfg.system);
    if level <= 0.0 {
        return Err(Error::Domain(
            "a pointer-state system has no information to record".into(),
        ));
    }
    let threshold = (1.0 - delta) * level - THRESHOLD_SLACK;
    let method = method.resolve(t, cfg)?;
    let mut cache = vec![None; cfg.n_env + 1];
    let mut meets = |k: usize| -> Result<bool> {
        if let Some(v) = cache[k] {
            return Ok(v);
        }
        let v = mutual_info(t, k, cfg, method)?.0 >= threshold;
        cache[k] = Some(v);
        Ok(v)
    };

    if !meets(cfg.n_env)? {
        // monotonicity: nothing smaller qualifies either, but confirm with a scan
        for k in 1..cfg.n_env {
            if meets(k)? {
                return Ok(Some(k));
            }
        }
        return Ok(None);
    }
    let (mut lo, mut hi) = (0usize, cfg.n_env); // meets(lo) false, meets(hi) true
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let below_fails = hi == 1 || !meets(hi - 1)?;
    if meets(hi)? && below_fails {
        return Ok(Some(hi));
    }
    for k in 1..=cfg.n_env {
        if meets(k)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `n_env / k`, kept as a rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Redundancy {
    pub numerator: usize,
    pub denominator: usize,
}

impl Redundancy {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RedundancyResult {
    pub haziness: f64,
    pub delta: f64,
    pub t: Time,
    pub n_frag_delta: Option<usize>,
    pub redundancy: Option<Redundancy>,
}

pub fn redundancy(delta: f64, t: Time, cfg: &ModelConfig, method: Method) -> Result<RedundancyResult> {
    let n_frag_delta = min_fragment_for_deficit(delta, t, cfg, method)?;
    Ok(RedundancyResult {
        haziness: cfg.env.haziness(),
        delta,
        t,
        n_frag_delta,
        redundancy: n_frag_delta.map(|k| Redundancy {
            numerator: cfg.n_env,
            denominator: k,
        }),
    })
}

/// Information deficit of an `n_frag` fragment.
///
/// On the closed-form path with a fragment smaller than the environment the
/// deficit is taken from the shortfall directly: for clear environments it
/// lies far below the round-off of `1 − I/H_S`.
pub fn fragment_deficit(t: Time, n_frag: usize, cfg: &ModelConfig, method: Method) -> Result<f64> {
    let resolved = method.resolve(t, cfg)?;
    let shortfall_form = resolved == Method::ClosedForm
        && t.is_half_pi()
        && cfg.env.is_symmetric_population()
        && n_frag >= 1
        && n_frag < cfg.n_env;
    if shortfall_form {
        let h_s = plateau_level(&cfg.system);
        if h_s <= 0.0 {
            return Err(Error::Domain(
                "deficit is undefined for a system without entropy to reveal".into(),
            ));
        }
        let shortfall = information_shortfall_pi_half(n_frag, cfg.n_env, &cfg.system, &cfg.env)?;
        return Ok((shortfall / h_s).clamp(0.0, 1.0));
    }
    let (bits, _) = mutual_info(t, n_frag, cfg, resolved)?;
    deficit(bits, &cfg.system)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapPoint {
    pub haziness: f64,
    pub overlap: f64,
    pub deficit: f64,
}

/// Peak overlap of the record distribution against the information deficit
/// of an `n_frag` fragment, one point per environment state, sorted by
/// overlap.
pub fn deficit_overlap_curve(
    n_frag: usize,
    t: Time,
    n_env: usize,
    sys: &SystemQubit,
    envs: &[EnvQubit],
    method: Method,
) -> Result<Vec<OverlapPoint>> {
    let mut points: Vec<OverlapPoint> = envs
        .par_iter()
        .map(|env| -> Result<OverlapPoint> {
            let cfg = ModelConfig::new(n_env, *sys, *env)?;
            let bimodal = bimodal_distribution(n_frag, sys, env)?;
            let delta = fragment_deficit(t, n_frag, &cfg, method)?;
            Ok(OverlapPoint {
                haziness: env.haziness(),
                overlap: bimodal.overlap,
                deficit: delta,
            })
        })
        .collect::<Result<_>>()?;
    points.sort_by(|a, b| a.overlap.total_cmp(&b.overlap).then(a.deficit.total_cmp(&b.deficit)));
    Ok(points)
}
