//! The dephasing model: one system qubit coupled to `n_env` identical
//! environment qubits through `H = ½ Σ_k σ_S^z σ_k^z`, and the closed-form
//! expressions that follow from it.

use num_complex::Complex64 as C64;

use crate::algebra::{
    binary_entropy, eig_2x2_hermitian, invert_binary_entropy, log_add_exp, log_binomial_row,
    Complex2x2, Spectrum,
};
use crate::error::{Error, Result};
use crate::schur;
use crate::time::Time;

const STATE_TOLERANCE: f64 = 1e-12;

/// Initial system state `[[s00, s01], [s01*, 1-s00]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemQubit {
    s00: f64,
    s01: C64,
}

impl SystemQubit {
    pub fn new(s00: f64, s01: C64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s00) {
            return Err(Error::InvalidState(format!("s00 = {s00} is not a probability")));
        }
        if s01.norm_sqr() > s00 * (1.0 - s00) + STATE_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "|s01|² = {} exceeds s00·s11 = {}",
                s01.norm_sqr(),
                s00 * (1.0 - s00)
            )));
        }
        Ok(Self { s00, s01 })
    }

    /// `|+⟩⟨+|` with `|+⟩ = (|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        Self {
            s00: 0.5,
            s01: C64::new(0.5, 0.0),
        }
    }

    pub fn s00(&self) -> f64 {
        self.s00
    }

    pub fn s11(&self) -> f64 {
        1.0 - self.s00
    }

    pub fn s01(&self) -> C64 {
        self.s01
    }

    pub fn matrix(&self) -> Complex2x2 {
        Complex2x2::new(self.s00.into(), self.s01, self.s01.conj(), self.s11().into())
    }

    pub fn is_pure(&self) -> bool {
        (self.s00 * self.s11() - self.s01.norm_sqr()).abs() <= STATE_TOLERANCE
    }

    /// A pointer eigenstate never gets correlated with the environment.
    pub fn is_pointer_state(&self) -> bool {
        self.s00 == 0.0 || self.s00 == 1.0
    }
}

/// Initial state of every environment qubit, `ρ_r = [[r00, r01], [r01*, r11]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvQubit {
    r00: f64,
    r01: C64,
    lambda_plus: f64,
    lambda_minus: f64,
    haziness: f64,
}

impl EnvQubit {
    pub fn new(r00: f64, r01: C64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r00) {
            return Err(Error::InvalidState(format!("r00 = {r00} is not a probability")));
        }
        let bound = r00 * (1.0 - r00);
        if r01.norm_sqr() > bound + STATE_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "|r01|² = {} exceeds r00·r11 = {bound}",
                r01.norm_sqr()
            )));
        }
        let m = Complex2x2::new(r00.into(), r01, r01.conj(), (1.0 - r00).into());
        let (lp, lm) = eig_2x2_hermitian(&m)?;
        let lambda_minus = lm.max(0.0);
        let lambda_plus = lp.min(1.0);
        let haziness = binary_entropy(lambda_plus)?;
        Ok(Self {
            r00,
            r01,
            lambda_plus,
            lambda_minus,
            haziness,
        })
    }

    /// Environment qubit with entropy `h` bits and the given population,
    /// taking `r01` real and nonnegative.
    pub fn from_haziness(h: f64, r00: f64) -> Result<Self> {
        let lambda_plus = invert_binary_entropy(h)?;
        if !(0.0..=1.0).contains(&r00) {
            return Err(Error::InvalidState(format!("r00 = {r00} is not a probability")));
        }
        // λ+ = 1/2 + √((r00 − 1/2)² + |r01|²)
        let radius = lambda_plus - 0.5;
        let offset = r00 - 0.5;
        let r01_sqr = radius * radius - offset * offset;
        if r01_sqr < -STATE_TOLERANCE {
            return Err(Error::Domain(format!(
                "haziness {h} is unreachable with r00 = {r00}: with only the coherence \
                 free, entropy can range over [0, H(r00)] = [0, {}]",
                binary_entropy(r00)?
            )));
        }
        let mut env = Self::new(r00, C64::new(r01_sqr.max(0.0).sqrt(), 0.0))?;
        if r00 == 0.5 {
            // keep the requested eigenvalues bit-for-bit
            env.lambda_plus = lambda_plus;
            env.lambda_minus = 1.0 - lambda_plus;
            env.haziness = binary_entropy(lambda_plus)?;
        }
        Ok(env)
    }

    pub fn r00(&self) -> f64 {
        self.r00
    }

    pub fn r11(&self) -> f64 {
        1.0 - self.r00
    }

    pub fn r01(&self) -> C64 {
        self.r01
    }

    pub fn lambda_plus(&self) -> f64 {
        self.lambda_plus
    }

    pub fn lambda_minus(&self) -> f64 {
        self.lambda_minus
    }

    /// `ln det ρ_r`; `-inf` for a pure qubit.
    pub fn log_det(&self) -> f64 {
        if self.lambda_minus == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.lambda_plus.ln() + self.lambda_minus.ln()
        }
    }

    /// Initial entropy in bits.
    pub fn haziness(&self) -> f64 {
        self.haziness
    }

    pub fn matrix(&self) -> Complex2x2 {
        Complex2x2::new(self.r00.into(), self.r01, self.r01.conj(), self.r11().into())
    }

    /// Unitary `W` with `W† ρ_r W = diag(λ+, λ−)`.
    pub fn diagonalizer(&self) -> Complex2x2 {
        let b = self.r01;
        if b.norm() == 0.0 {
            return if self.r00 >= self.r11() {
                Complex2x2::identity()
            } else {
                Complex2x2::new(0.0.into(), 1.0.into(), 1.0.into(), 0.0.into())
            };
        }
        // (b, λ − r00) is an eigenvector for eigenvalue λ
        let col = |lam: f64| {
            let v = (b, C64::new(lam - self.r00, 0.0));
            let n = (v.0.norm_sqr() + v.1.norm_sqr()).sqrt();
            (v.0 / n, v.1 / n)
        };
        let (p0, p1) = col(self.lambda_plus);
        let (m0, m1) = col(self.lambda_minus);
        Complex2x2::new(p0, m0, p1, m1)
    }

    pub fn is_symmetric_population(&self) -> bool {
        self.r00 == 0.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    pub n_env: usize,
    pub system: SystemQubit,
    pub env: EnvQubit,
}

impl ModelConfig {
    pub fn new(n_env: usize, system: SystemQubit, env: EnvQubit) -> Result<Self> {
        if n_env == 0 {
            return Err(Error::Domain("the environment needs at least one qubit".into()));
        }
        Ok(Self { n_env, system, env })
    }
}

/// Per-qubit decoherence factor `cos t + i(r11 − r00) sin t`.
pub fn lambda_k(t: Time, env: &EnvQubit) -> C64 {
    let (c, s) = t.cos_sin();
    C64::new(c, (env.r11() - env.r00()) * s)
}

/// `lambda_k(t)^count`; the empty product is 1.
pub fn decoherence_factor(t: Time, env: &EnvQubit, count: usize) -> C64 {
    let lam = lambda_k(t, env);
    if count == 0 {
        return C64::new(1.0, 0.0);
    }
    match i32::try_from(count) {
        Ok(c) => lam.powi(c),
        Err(_) => C64::from_polar(lam.norm().powf(count as f64), lam.arg() * count as f64),
    }
}

/// The conditional single-qubit operators of the environment after time `t`.
///
/// With `V(t) = exp(−i t σ^z / 2)` these are `A = V(t) ρ_r V(−t)` (system in
/// `|0⟩`), `B = V(−t) ρ_r V(t)` (system in `|1⟩`) and the coherence carrier
/// `C = V(t) ρ_r V(t)`, whose trace is `lambda_k(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalBlocks {
    pub a: Complex2x2,
    pub b: Complex2x2,
    pub c: Complex2x2,
}

pub fn conditional_blocks(t: Time, env: &EnvQubit) -> ConditionalBlocks {
    let (cos, sin) = t.cos_sin();
    let e_minus = C64::new(cos, -sin); // e^{-it}
    let (r00, r11, r01) = (C64::from(env.r00()), C64::from(env.r11()), env.r01());
    let r10 = r01.conj();
    ConditionalBlocks {
        a: Complex2x2::new(r00, r01 * e_minus, r10 * e_minus.conj(), r11),
        b: Complex2x2::new(r00, r01 * e_minus.conj(), r10 * e_minus, r11),
        c: Complex2x2::new(r00 * e_minus, r01, r10, r11 * e_minus.conj()),
    }
}

/// Reduced system state: coherences damped by the whole environment's
/// decoherence factor.
pub fn system_state(t: Time, cfg: &ModelConfig) -> Complex2x2 {
    let lam = decoherence_factor(t, &cfg.env, cfg.n_env);
    let s = &cfg.system;
    let off = s.s01() * lam;
    Complex2x2::new(s.s00().into(), off, off.conj(), s.s11().into())
}

/// Larger eigenvalue of a system state whose coherence is damped by
/// `|Λ| = lam_abs`.
pub fn kappa(sys: &SystemQubit, lam_abs: f64) -> f64 {
    let diff = sys.s11() - sys.s00();
    let coh = 2.0 * sys.s01().norm() * lam_abs;
    0.5 * (1.0 + diff.hypot(coh))
}

/// Mutual information from the exact decomposition into fragment entropy
/// gain plus the imperfect-decoherence correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormInfo {
    pub bits: f64,
    /// `H_F(t) − H_F(0)`.
    pub fragment_gain: f64,
    /// `H(κ_E) − H(κ_{E/F})`.
    pub decoherence_correction: f64,
    /// True when the system starts pure or `t = 0`, the regime the
    /// expression is asserted for.
    pub verified_domain: bool,
}

fn check_fragment(n_frag: usize, n_env: usize) -> Result<()> {
    if n_frag > n_env {
        return Err(Error::Domain(format!(
            "fragment of {n_frag} qubits exceeds the environment of {n_env}"
        )));
    }
    Ok(())
}

/// `H_F(t)`, taking the t = π/2 binomial closed form when it applies and the
/// sector decomposition otherwise.
pub fn fragment_entropy_best(t: Time, n_frag: usize, sys: &SystemQubit, env: &EnvQubit) -> Result<f64> {
    if n_frag == 0 {
        return Ok(0.0);
    }
    if t.is_half_pi() && env.is_symmetric_population() {
        fragment_entropy_pi_half(n_frag, sys, env)
    } else {
        schur::fragment_entropy(t, n_frag, sys, env)
    }
}

pub fn mutual_info_closed_form(t: Time, n_frag: usize, cfg: &ModelConfig) -> Result<ClosedFormInfo> {
    check_fragment(n_frag, cfg.n_env)?;
    let sys = &cfg.system;
    let verified_domain = sys.is_pure() || t.is_zero();
    if sys.is_pointer_state() || n_frag == 0 {
        return Ok(ClosedFormInfo {
            bits: 0.0,
            fragment_gain: 0.0,
            decoherence_correction: 0.0,
            verified_domain,
        });
    }
    let h_f = fragment_entropy_best(t, n_frag, sys, &cfg.env)?;
    let fragment_gain = h_f - n_frag as f64 * cfg.env.haziness();
    let lam_e = decoherence_factor(t, &cfg.env, cfg.n_env).norm();
    let lam_rest = decoherence_factor(t, &cfg.env, cfg.n_env - n_frag).norm();
    let decoherence_correction =
        binary_entropy(kappa(sys, lam_e))? - binary_entropy(kappa(sys, lam_rest))?;
    Ok(ClosedFormInfo {
        bits: fragment_gain + decoherence_correction,
        fragment_gain,
        decoherence_correction,
        verified_domain,
    })
}

/// Fragment entropy increase, exact when the rest of the environment fully
/// decoheres system plus fragment.
pub fn good_decoherence_info(t: Time, n_frag: usize, cfg: &ModelConfig) -> Result<f64> {
    check_fragment(n_frag, cfg.n_env)?;
    if n_frag == 0 || cfg.system.is_pointer_state() {
        return Ok(0.0);
    }
    let h_f = fragment_entropy_best(t, n_frag, &cfg.system, &cfg.env)?;
    Ok(h_f - n_frag as f64 * cfg.env.haziness())
}

/// Spectrum of the fragment at t = π/2 for `r00 = 1/2`: eigenvalue
/// `s00 λ−^n λ+^{F−n} + s11 λ−^{F−n} λ+^n` with multiplicity `C(F, n)`.
pub fn fragment_spectrum_pi_half(n_frag: usize, sys: &SystemQubit, env: &EnvQubit) -> Result<Spectrum> {
    if !env.is_symmetric_population() {
        return Err(Error::Precondition(format!(
            "the t = π/2 closed form needs r00 = 1/2 exactly (got {}); use the sector \
             decomposition instead",
            env.r00()
        )));
    }
    let f = n_frag as u64;
    let log_binom = log_binomial_row(f);
    let ln_p = env.lambda_plus().ln();
    let ln_m = ln_or_neg_inf(env.lambda_minus());
    let ln_s00 = ln_or_neg_inf(sys.s00());
    let ln_s11 = ln_or_neg_inf(sys.s11());
    let mut spec = Spectrum::new();
    for n in 0..=n_frag {
        let left = ln_s00 + scaled_log(n, ln_m) + scaled_log(n_frag - n, ln_p);
        let right = ln_s11 + scaled_log(n_frag - n, ln_m) + scaled_log(n, ln_p);
        spec.push_log(log_add_exp(left, right), log_binom[n]);
    }
    Ok(spec)
}

pub fn fragment_entropy_pi_half(n_frag: usize, sys: &SystemQubit, env: &EnvQubit) -> Result<f64> {
    fragment_spectrum_pi_half(n_frag, sys, env)?.entropy()
}

fn ln_or_neg_inf(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

/// `count · ln x` with `0 · ln 0 = 0`.
fn scaled_log(count: usize, ln_x: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * ln_x
    }
}

/// The two record-count peaks of a fragment at t = π/2.
#[derive(Debug, Clone, PartialEq)]
pub struct Bimodal {
    /// `s00 C(F,n) λ−^n λ+^{F−n}`.
    pub p_left: Vec<f64>,
    /// `s11 C(F,n) λ−^{F−n} λ+^n`.
    pub p_right: Vec<f64>,
    /// `Σ_n P_L(n) P_R(n)`.
    pub overlap: f64,
}

pub fn bimodal_distribution(n_frag: usize, sys: &SystemQubit, env: &EnvQubit) -> Result<Bimodal> {
    if n_frag == 0 {
        return Err(Error::Domain("the bimodal distribution needs n_frag ≥ 1".into()));
    }
    let log_binom = log_binomial_row(n_frag as u64);
    let ln_p = env.lambda_plus().ln();
    let ln_m = ln_or_neg_inf(env.lambda_minus());
    let ln_s00 = ln_or_neg_inf(sys.s00());
    let ln_s11 = ln_or_neg_inf(sys.s11());
    let mut p_left = Vec::with_capacity(n_frag + 1);
    let mut p_right = Vec::with_capacity(n_frag + 1);
    for n in 0..=n_frag {
        let base = log_binom[n];
        p_left.push((base + ln_s00 + scaled_log(n, ln_m) + scaled_log(n_frag - n, ln_p)).exp());
        p_right.push((base + ln_s11 + scaled_log(n_frag - n, ln_m) + scaled_log(n, ln_p)).exp());
    }
    let overlap = p_left.iter().zip(&p_right).map(|(l, r)| l * r).sum();
    Ok(Bimodal {
        p_left,
        p_right,
        overlap,
    })
}

/// `H_S − I(S:F)` in bits at t = π/2 for `r00 = 1/2` and a fragment smaller
/// than the environment.
///
/// There the rest of the environment decoheres S+F completely and the
/// shortfall is `Σ_n C(F,n) [p log₂(1 + q/p) + q log₂(1 + p/q)]` with
/// `p = s00 λ−^n λ+^{F−n}`, `q = s11 λ−^{F−n} λ+^n`. Every term is positive,
/// so this keeps full relative precision where `H_S − I` itself would be
/// lost in cancellation.
pub fn information_shortfall_pi_half(n_frag: usize, n_env: usize, sys: &SystemQubit, env: &EnvQubit) -> Result<f64> {
    if !env.is_symmetric_population() {
        return Err(Error::Precondition(format!(
            "the t = π/2 shortfall needs r00 = 1/2 exactly (got {})",
            env.r00()
        )));
    }
    if n_frag == 0 || n_frag >= n_env {
        return Err(Error::Domain(format!(
            "the shortfall form needs 1 ≤ n_frag < n_env (got {n_frag} of {n_env})"
        )));
    }
    if sys.is_pointer_state() {
        return Ok(0.0);
    }
    let log_binom = log_binomial_row(n_frag as u64);
    let ln_p = env.lambda_plus().ln();
    let ln_m = ln_or_neg_inf(env.lambda_minus());
    let (ln_s00, ln_s11) = (sys.s00().ln(), sys.s11().ln());
    let mut total = 0.0;
    for n in 0..=n_frag {
        let lp = ln_s00 + scaled_log(n, ln_m) + scaled_log(n_frag - n, ln_p);
        let lq = ln_s11 + scaled_log(n_frag - n, ln_m) + scaled_log(n, ln_p);
        // p·ln(1 + q/p) = p·softplus(lq − lp)
        for (a, b) in [(lp, lq), (lq, lp)] {
            if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
                continue;
            }
            total += (log_binom[n] + a).exp() * softplus(b - a);
        }
    }
    Ok(total / std::f64::consts::LN_2)
}

/// `ln(1 + e^x)` without overflow or loss for large |x|.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
