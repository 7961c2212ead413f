//! Brute-force reference: the full system+environment density matrix, built
//! by explicit Kronecker products and evolved with the diagonal Hamiltonian
//! `½ Σ_k σ_S^z σ_k^z`. Deliberately unoptimized.

use num_complex::Complex64 as C64;

use crate::algebra::{hermitian_eigenvalues_with, Complex2x2, Eigensolver, HermitianMatrix, Spectrum};
use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::time::Time;

/// Environments above this size need `allow_large` (8192² complex ≈ 1 GiB).
pub const MAX_ORACLE_ENV: usize = 12;

/// Density matrix over a subset of the original subsystems. Label 0 is the
/// system, labels `1..=n_env` the environment qubits; the first label is the
/// most significant bit of the row index.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    labels: Vec<usize>,
    matrix: HermitianMatrix,
}

impl DenseState {
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn entropy(&self, solver: Eigensolver) -> Result<f64> {
        let vals = hermitian_eigenvalues_with(&self.matrix, solver)?;
        Spectrum::from_values(&vals)?.entropy()
    }
}

fn kron(a: &[C64], da: usize, b: &[C64], db: usize) -> Vec<C64> {
    let d = da * db;
    let mut out = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..da {
        for j in 0..da {
            let x = a[i * da + j];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k) * d + (j * db + l)] = x * b[k * db + l];
                }
            }
        }
    }
    out
}

fn flat(m: &Complex2x2) -> [C64; 4] {
    [m.m[0][0], m.m[0][1], m.m[1][0], m.m[1][1]]
}

/// Eigenvalue of `½ Σ_k σ_S^z σ_k^z` on a computational basis state.
fn energy(index: usize, n_env: usize) -> f64 {
    let sys_z = if index >> n_env & 1 == 0 { 1.0 } else { -1.0 };
    let ones = (index & ((1usize << n_env) - 1)).count_ones() as f64;
    0.5 * sys_z * (n_env as f64 - 2.0 * ones)
}

/// `exp(−itH) (ρ_S ⊗ ρ_r^{⊗n}) exp(itH)`.
pub fn dense_joint_state(t: Time, cfg: &ModelConfig) -> Result<DenseState> {
    dense_joint_state_with(t, cfg, false)
}

pub fn dense_joint_state_with(t: Time, cfg: &ModelConfig, allow_large: bool) -> Result<DenseState> {
    let n = cfg.n_env;
    if n > MAX_ORACLE_ENV && !allow_large {
        return Err(Error::TooLarge {
            requested: n,
            limit: MAX_ORACLE_ENV,
            hint: "the dense oracle stores 4^(n+1) complex entries",
        });
    }
    let mut rho = flat(&cfg.system.matrix()).to_vec();
    let mut dim = 2;
    let env = flat(&cfg.env.matrix());
    for _ in 0..n {
        rho = kron(&rho, dim, &env, 2);
        dim *= 2;
    }
    let tv = t.value();
    let energies: Vec<f64> = (0..dim).map(|i| energy(i, n)).collect();
    for a in 0..dim {
        for b in 0..dim {
            let de = energies[a] - energies[b];
            if de != 0.0 {
                rho[a * dim + b] *= C64::from_polar(1.0, -tv * de);
            }
        }
    }
    Ok(DenseState {
        labels: (0..=n).collect(),
        matrix: HermitianMatrix::new_unchecked(dim, rho),
    })
}

/// Reduced state on `keep` (labels of the original subsystems, any order;
/// the result keeps the input's ordering).
pub fn partial_trace(state: &DenseState, keep: &[usize]) -> Result<DenseState> {
    if keep.is_empty() {
        return Err(Error::Domain("partial trace needs at least one kept subsystem".into()));
    }
    let nq = state.labels.len();
    let mut kept_pos = Vec::new();
    for (pos, label) in state.labels.iter().enumerate() {
        if keep.contains(label) {
            kept_pos.push(pos);
        }
    }
    for k in keep {
        if !state.labels.contains(k) {
            return Err(Error::Domain(format!("subsystem {k} is not part of this state")));
        }
    }
    let traced_pos: Vec<usize> = (0..nq).filter(|p| !kept_pos.contains(p)).collect();
    // bit of position p within a full index
    let bit = |p: usize| 1usize << (nq - 1 - p);
    let offsets = |positions: &[usize]| -> Vec<usize> {
        let m = positions.len();
        (0..1usize << m)
            .map(|sub| {
                positions
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| sub >> (m - 1 - i) & 1 == 1)
                    .map(|(_, &p)| bit(p))
                    .sum()
            })
            .collect()
    };
    let ko = offsets(&kept_pos);
    let to = offsets(&traced_pos);
    let full = state.matrix.as_slice();
    let big = state.matrix.dim();
    let d = ko.len();
    let mut out = vec![C64::new(0.0, 0.0); d * d];
    for a in 0..d {
        for b in 0..d {
            out[a * d + b] = to.iter().map(|&c| full[(ko[a] | c) * big + (ko[b] | c)]).sum();
        }
    }
    Ok(DenseState {
        labels: kept_pos.iter().map(|&p| state.labels[p]).collect(),
        matrix: HermitianMatrix::new_unchecked(d, out),
    })
}

/// `I(S:F)` for the fragment made of environment qubits `1..=n_frag`.
pub fn oracle_mutual_info(t: Time, n_frag: usize, cfg: &ModelConfig) -> Result<f64> {
    let fragment: Vec<usize> = (1..=n_frag).collect();
    oracle_mutual_info_subset(t, cfg, &fragment, Eigensolver::default())
}

/// `I(S:F)` for an arbitrary set of environment labels.
pub fn oracle_mutual_info_subset(
    t: Time,
    cfg: &ModelConfig,
    fragment: &[usize],
    solver: Eigensolver,
) -> Result<f64> {
    let state = dense_joint_state(t, cfg)?;
    mutual_info_of_state(&state, fragment, solver)
}

fn mutual_info_of_state(state: &DenseState, fragment: &[usize], solver: Eigensolver) -> Result<f64> {
    if fragment.iter().any(|&k| k == 0 || !state.labels.contains(&k)) {
        return Err(Error::Domain(format!(
            "fragment {fragment:?} must name environment qubits of this state"
        )));
    }
    if fragment.is_empty() {
        return Ok(0.0);
    }
    let h_s = partial_trace(state, &[0])?.entropy(solver)?;
    let h_f = partial_trace(state, fragment)?.entropy(solver)?;
    let mut sf = vec![0];
    sf.extend_from_slice(fragment);
    let h_sf = partial_trace(state, &sf)?.entropy(solver)?;
    Ok(h_s + h_f - h_sf)
}

/// `I(S:F)` for every fragment size `0..=n_env`, sharing one dense state.
pub fn oracle_info_curve(t: Time, cfg: &ModelConfig) -> Result<Vec<f64>> {
    let state = dense_joint_state(t, cfg)?;
    (0..=cfg.n_env)
        .map(|k| {
            let fragment: Vec<usize> = (1..=k).collect();
            mutual_info_of_state(&state, &fragment, Eigensolver::default())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{conditional_blocks, system_state, EnvQubit, SystemQubit};

    fn cfg(n: usize, h: f64) -> ModelConfig {
        ModelConfig::new(n, SystemQubit::plus(), EnvQubit::from_haziness(h, 0.5).unwrap()).unwrap()
    }

    #[test]
    fn initial_state_is_product() {
        let c = cfg(2, 0.4);
        let st = dense_joint_state(Time::ZERO, &c).unwrap();
        let s = c.system.matrix();
        let r = c.env.matrix();
        let m = st.matrix();
        // ⟨0 1 0| ρ |1 0 1⟩ = s01 r10 r01
        let want = s.m[0][1] * r.m[1][0] * r.m[0][1];
        assert!((m.get(0b010, 0b101) - want).norm() < 1e-15);
        assert!((m.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_qubit_coherence_block() {
        let sys = SystemQubit::new(0.3, C64::new(0.2, 0.35)).unwrap();
        let env = EnvQubit::new(0.6, C64::new(0.1, -0.2)).unwrap();
        let c = ModelConfig::new(1, sys, env).unwrap();
        let t = Time::from(0.9);
        let m = dense_joint_state(t, &c).unwrap();
        let blk = conditional_blocks(t, &env).c.scale(sys.s01());
        for i in 0..2 {
            for j in 0..2 {
                assert!((m.matrix().get(i, 2 + j) - blk.m[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn tracing_out_environment_gives_system_state() {
        for (h, t) in [(0.3, 0.7), (0.9, 2.2), (0.0, 1.0)] {
            let c = cfg(4, h);
            let t = Time::from(t);
            let st = dense_joint_state(t, &c).unwrap();
            let red = partial_trace(&st, &[0]).unwrap();
            let want = system_state(t, &c);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((red.matrix().get(i, j) - want.m[i][j]).norm() < 1e-12);
                }
            }
        }
        let st = dense_joint_state(Time::HALF_PI, &cfg(3, 0.6)).unwrap();
        let red = partial_trace(&st, &[0]).unwrap();
        assert!(red.matrix().get(0, 1).norm() < 1e-15);
        assert!((red.matrix().get(0, 0).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn staged_and_direct_traces_agree() {
        let st = dense_joint_state(Time::from(0.8), &cfg(4, 0.5)).unwrap();
        let direct = partial_trace(&st, &[0, 2]).unwrap();
        let staged = partial_trace(&partial_trace(&st, &[0, 2, 3]).unwrap(), &[0, 2]).unwrap();
        assert_eq!(direct.labels(), staged.labels());
        let diff = direct
            .matrix()
            .as_slice()
            .iter()
            .zip(staged.matrix().as_slice())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
        let all = partial_trace(&st, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(all, st);
        assert!(partial_trace(&st, &[]).is_err());
        assert!(partial_trace(&st, &[9]).is_err());
    }

    #[test]
    fn maximal_correlation_with_whole_pure_environment() {
        let i = oracle_mutual_info(Time::HALF_PI, 2, &cfg(2, 0.0)).unwrap();
        assert!((i - 2.0).abs() < 1e-10);
    }

    #[test]
    fn memory_guard() {
        let c = cfg(13, 0.2);
        assert!(matches!(dense_joint_state(Time::ZERO, &c), Err(Error::TooLarge { .. })));
    }
}
