//! Exact spectra of tensor-power mixtures via permutation-symmetric sectors.
//!
//! Every operator in sight is a combination of `X^{⊗n}` for 2×2 matrices `X`.
//! Such operators split over spin sectors `j`: on sector `j` the operator
//! `X^{⊗n}` acts as `det(X)^ν · Sym^{2j}(X)` (with `ν = n/2 − j`), repeated
//! `m(n, j)` times. The fragment state and the joint system-fragment state
//! therefore diagonalize one sector at a time, in time polynomial in `n`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::algebra::{
    binary_entropy, eig_2x2_hermitian, hermitian_eigenvalues_with, log_binomial, Complex2x2,
    Eigensolver, HermitianMatrix, Spectrum, NEGATIVE_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::model::{conditional_blocks, decoherence_factor, system_state, EnvQubit, ModelConfig, SystemQubit};
use crate::time::Time;

/// Largest fragment handled without opting in.
pub const SOFT_FRAGMENT_CAP: usize = 200;
/// Binomial weights are carried as `f64`; past this degree they overflow.
pub const HARD_FRAGMENT_CAP: usize = 1000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SchurOptions {
    /// Permit fragments above [`SOFT_FRAGMENT_CAP`].
    pub allow_large: bool,
    pub solver: Eigensolver,
}

impl SchurOptions {
    fn check(&self, n_frag: usize) -> Result<()> {
        if n_frag > HARD_FRAGMENT_CAP {
            return Err(Error::TooLarge {
                requested: n_frag,
                limit: HARD_FRAGMENT_CAP,
                hint: "symmetric-power weights overflow double precision",
            });
        }
        if n_frag > SOFT_FRAGMENT_CAP && !self.allow_large {
            return Err(Error::TooLarge {
                requested: n_frag,
                limit: SOFT_FRAGMENT_CAP,
                hint: "enable allow_large to go further (cost grows as n^4)",
            });
        }
        if n_frag > SOFT_FRAGMENT_CAP {
            log::warn!("fragment of {n_frag} qubits above the soft cap; expect long runtimes");
        }
        Ok(())
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl SquareMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn mul(&self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        SquareMatrix { dim: n, data }
    }

    pub fn adjoint(&self) -> SquareMatrix {
        let n = self.dim;
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j).conj();
            }
        }
        SquareMatrix { dim: n, data }
    }

    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn pascal(k: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut row = vec![1.0; n + 1];
        for r in 1..n {
            row[r] = rows[n - 1][r - 1] + rows[n - 1][r];
        }
        rows.push(row);
    }
    rows
}

fn powers(z: C64, k: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(k + 1);
    let mut acc = C64::new(1.0, 0.0);
    for _ in 0..=k {
        out.push(acc);
        acc *= z;
    }
    out
}

/// Action of `M^{⊗k}` on the symmetric subspace in the orthonormal Dicke
/// basis (index = number of `|1⟩` factors).
///
/// Entry `[b][a]` is `√(C(k,a)/C(k,b))` times the coefficient of `x^{k−b} y^b`
/// in `(m00 x + m10 y)^{k−a} (m01 x + m11 y)^a`.
pub fn sym_power(m: &Complex2x2, k: usize) -> SquareMatrix {
    let binom = pascal(k);
    let p00 = powers(m.m[0][0], k);
    let p01 = powers(m.m[0][1], k);
    let p10 = powers(m.m[1][0], k);
    let p11 = powers(m.m[1][1], k);
    let dim = k + 1;
    let mut data = vec![C64::new(0.0, 0.0); dim * dim];
    for b in 0..=k {
        for a in 0..=k {
            let lo = (a + b).saturating_sub(k);
            let hi = a.min(b);
            let mut acc = C64::new(0.0, 0.0);
            for r in lo..=hi {
                let w = binom[k - a][b - r] * binom[a][r];
                acc += p00[k + r - a - b] * p10[b - r] * p01[a - r] * p11[r] * w;
            }
            data[b * dim + a] = acc * (binom[k][a] / binom[k][b]).sqrt();
        }
    }
    SquareMatrix { dim, data }
}

/// `ln m(n, j)` with `m(n, j) = C(n, ν) − C(n, ν−1)`, `ν = (n − 2j)/2`.
///
/// Uses `m = C(n, ν) · (2j + 1)/(n − ν + 1)`.
pub fn sector_multiplicity_log(n: usize, two_j: usize) -> Result<f64> {
    if two_j > n || !(n - two_j).is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "sector 2j = {two_j} is incompatible with {n} qubits"
        )));
    }
    let nu = (n - two_j) / 2;
    let ratio = (two_j + 1) as f64 / (n - nu + 1) as f64;
    Ok(log_binomial(n as u64, nu as u64)? + ratio.ln())
}

/// Sector labels `2j` for `n` qubits, in ascending order.
pub fn sector_labels(n: usize) -> impl Iterator<Item = usize> {
    (n % 2..=n).step_by(2)
}

/// Adds the eigenvalues of `ℓ · M` (`ℓ = exp(log_scale)`), each with
/// multiplicity `exp(log_multiplicity)`. The matrix is normalized by its
/// largest entry first so the negativity threshold is relative.
fn push_sector(
    spec: &mut Spectrum,
    m: HermitianMatrix,
    log_scale: f64,
    log_multiplicity: f64,
    solver: Eigensolver,
) -> Result<()> {
    let norm = m.max_abs();
    if norm == 0.0 {
        push_zeros(spec, m.dim(), log_multiplicity);
        return Ok(());
    }
    let unit = m.scaled(1.0 / norm);
    let log_scale = log_scale + norm.ln();
    for mu in hermitian_eigenvalues_with(&unit, solver)? {
        if mu < -NEGATIVE_TOLERANCE {
            return Err(Error::NegativeEigenvalue { value: mu });
        }
        let lv = if mu <= 0.0 { f64::NEG_INFINITY } else { log_scale + mu.ln() };
        spec.push_log(lv, log_multiplicity);
    }
    Ok(())
}

fn push_zeros(spec: &mut Spectrum, count: usize, log_multiplicity: f64) {
    for _ in 0..count {
        spec.push_log(f64::NEG_INFINITY, log_multiplicity);
    }
}

/// Common log-prefactor `ν ln det ρ_r + 2j ln λ+` of a sector, or `None`
/// when the sector vanishes (pure environment, `ν > 0`).
fn sector_log_prefactor(n: usize, two_j: usize, env: &EnvQubit) -> Option<f64> {
    let nu = (n - two_j) / 2;
    let det_part = if nu == 0 {
        0.0
    } else {
        let ld = env.log_det();
        if ld == f64::NEG_INFINITY {
            return None;
        }
        nu as f64 * ld
    };
    Some(det_part + two_j as f64 * env.lambda_plus().ln())
}

fn merge(parts: Vec<Result<Spectrum>>) -> Result<Spectrum> {
    let mut out = Spectrum::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Spectrum of the fragment state
/// `s00 A^{⊗n} + s11 B^{⊗n}` (see [`conditional_blocks`]).
pub fn fragment_spectrum(t: Time, n_frag: usize, sys: &SystemQubit, env: &EnvQubit) -> Result<Spectrum> {
    fragment_spectrum_with(t, n_frag, sys, env, &SchurOptions::default())
}

pub fn fragment_spectrum_with(
    t: Time,
    n_frag: usize,
    sys: &SystemQubit,
    env: &EnvQubit,
    opts: &SchurOptions,
) -> Result<Spectrum> {
    opts.check(n_frag)?;
    if n_frag == 0 {
        return Spectrum::from_values(&[1.0]);
    }
    let blocks = conditional_blocks(t, env);
    let inv = C64::new(1.0 / env.lambda_plus(), 0.0);
    let (a, b) = (blocks.a.scale(inv), blocks.b.scale(inv));
    let (s00, s11) = (sys.s00(), sys.s11());
    let labels: Vec<usize> = sector_labels(n_frag).collect();
    let parts = labels
        .into_par_iter()
        .map(|two_j| -> Result<Spectrum> {
            let mut spec = Spectrum::new();
            let log_mult = sector_multiplicity_log(n_frag, two_j)?;
            let Some(log_pre) = sector_log_prefactor(n_frag, two_j, env) else {
                push_zeros(&mut spec, two_j + 1, log_mult);
                return Ok(spec);
            };
            let sa = sym_power(&a, two_j);
            let sb = sym_power(&b, two_j);
            let d = two_j + 1;
            let m = HermitianMatrix::from_fn(d, |i, j| {
                let upper = sa.get(i, j) * s00 + sb.get(i, j) * s11;
                if i <= j {
                    upper
                } else {
                    (sa.get(j, i) * s00 + sb.get(j, i) * s11).conj()
                }
            });
            push_sector(&mut spec, m, log_pre, log_mult, opts.solver)?;
            Ok(spec)
        })
        .collect();
    merge(parts)
}

/// Fragment entropy `H_F(t)` in bits.
pub fn fragment_entropy(t: Time, n_frag: usize, sys: &SystemQubit, env: &EnvQubit) -> Result<f64> {
    fragment_spectrum(t, n_frag, sys, env)?.entropy()
}

/// Spectrum of the joint system-fragment state, coherences included.
///
/// Per sector the block is
/// `[[s00 Sym(A), s01 Λ_{E/F} Sym(C)], [h.c., s11 Sym(B)]]` scaled by
/// `det(ρ_r)^ν`; the system qubit stays an explicit 2-dimensional factor.
pub fn joint_spectrum(t: Time, n_frag: usize, cfg: &ModelConfig) -> Result<Spectrum> {
    joint_spectrum_with(t, n_frag, cfg, &SchurOptions::default())
}

pub fn joint_spectrum_with(t: Time, n_frag: usize, cfg: &ModelConfig, opts: &SchurOptions) -> Result<Spectrum> {
    if n_frag > cfg.n_env {
        return Err(Error::Domain(format!(
            "fragment of {n_frag} qubits exceeds the environment of {}",
            cfg.n_env
        )));
    }
    opts.check(n_frag)?;
    let env = &cfg.env;
    let sys = &cfg.system;
    let blocks = conditional_blocks(t, env);
    let inv = C64::new(1.0 / env.lambda_plus(), 0.0);
    let (a, b, c) = (blocks.a.scale(inv), blocks.b.scale(inv), blocks.c.scale(inv));
    let coherence = sys.s01() * decoherence_factor(t, env, cfg.n_env - n_frag);
    let (s00, s11) = (sys.s00(), sys.s11());
    let labels: Vec<usize> = sector_labels(n_frag).collect();
    let parts = labels
        .into_par_iter()
        .map(|two_j| -> Result<Spectrum> {
            let mut spec = Spectrum::new();
            let log_mult = sector_multiplicity_log(n_frag, two_j)?;
            let Some(log_pre) = sector_log_prefactor(n_frag, two_j, env) else {
                push_zeros(&mut spec, 2 * (two_j + 1), log_mult);
                return Ok(spec);
            };
            let sa = sym_power(&a, two_j);
            let sb = sym_power(&b, two_j);
            let sc = sym_power(&c, two_j);
            let d = two_j + 1;
            let upper = |i: usize, j: usize| -> C64 {
                match (i < d, j < d) {
                    (true, true) => sa.get(i, j) * s00,
                    (false, false) => sb.get(i - d, j - d) * s11,
                    (true, false) => sc.get(i, j - d) * coherence,
                    (false, true) => unreachable!("lower triangle is mirrored"),
                }
            };
            let m = HermitianMatrix::from_fn(2 * d, |i, j| {
                if i <= j {
                    upper(i, j)
                } else {
                    upper(j, i).conj()
                }
            });
            push_sector(&mut spec, m, log_pre, log_mult, opts.solver)?;
            Ok(spec)
        })
        .collect();
    merge(parts)
}

/// `I(S:F) = H_S + H_F − H_SF` with every entropy taken from an exact
/// spectrum; no decoherence approximation.
pub fn mutual_info_schur(t: Time, n_frag: usize, cfg: &ModelConfig) -> Result<f64> {
    mutual_info_schur_with(t, n_frag, cfg, &SchurOptions::default())
}

pub fn mutual_info_schur_with(t: Time, n_frag: usize, cfg: &ModelConfig, opts: &SchurOptions) -> Result<f64> {
    if n_frag > cfg.n_env {
        return Err(Error::Domain(format!(
            "fragment of {n_frag} qubits exceeds the environment of {}",
            cfg.n_env
        )));
    }
    if n_frag == 0 {
        return Ok(0.0);
    }
    let (lp, lm) = eig_2x2_hermitian(&system_state(t, cfg))?;
    let h_s = binary_entropy(lp.clamp(0.0, 1.0))?;
    debug_assert!((lp + lm - 1.0).abs() < 1e-12);
    let (h_f, h_sf) = rayon::join(
        || fragment_spectrum_with(t, n_frag, &cfg.system, &cfg.env, opts)?.entropy(),
        || joint_spectrum_with(t, n_frag, cfg, opts)?.entropy(),
    );
    Ok(h_s + h_f? - h_sf?)
}
