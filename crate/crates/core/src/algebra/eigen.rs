//! Eigenvalues of dense complex Hermitian matrices.
//!
//! The default path reduces to a real symmetric tridiagonal matrix with
//! Householder reflections and finishes with implicit-shift QL. The cyclic
//! Jacobi solver is slower but shares no code with it, which makes it useful
//! for cross-checking.

use num_complex::Complex64 as C64;

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};

const QL_MAX_ITER: usize = 60;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Eigensolver {
    #[default]
    HouseholderQl,
    Jacobi,
}

/// All eigenvalues in ascending order, using the default solver.
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    hermitian_eigenvalues_with(m, Eigensolver::default())
}

pub fn hermitian_eigenvalues_with(m: &HermitianMatrix, solver: Eigensolver) -> Result<Vec<f64>> {
    let asym = m.hermitian_asymmetry();
    if asym > 1e-12 * m.max_abs() {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let n = m.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut vals = match solver {
        Eigensolver::HouseholderQl => {
            let (mut d, mut e) = tridiagonalize(m.clone().into_data(), n);
            tridiagonal_ql(&mut d, &mut e)?;
            d
        }
        Eigensolver::Jacobi => jacobi(m.clone().into_data(), n)?,
    };
    vals.sort_by(|a, b| a.total_cmp(b));
    Ok(vals)
}

/// Householder reduction of a Hermitian matrix to real tridiagonal form.
///
/// Returns the diagonal `d` and the off-diagonal `e`, where `e[k]` couples
/// rows `k` and `k+1` and `e[n-1] = 0`. The complex off-diagonal produced by
/// the reflections is replaced by its modulus, which is a diagonal unitary
/// similarity and leaves the spectrum unchanged.
fn tridiagonalize(mut a: Vec<C64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut p = vec![C64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        d[k] = a[k * n + k].re;
        let lo = k + 1;
        // work with the column scaled to unit max entry so that tiny columns
        // do not underflow in the squared norms; the reflector is scale free
        let cmax = (lo..n).map(|i| a[i * n + k].norm()).fold(0.0f64, f64::max);
        if cmax == 0.0 {
            e[k] = 0.0;
            continue;
        }
        for i in lo..n {
            v[i] = a[i * n + k] / cmax;
        }
        let unit_alpha = (lo..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        let alpha = cmax * unit_alpha;
        let x0 = v[lo];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        v[lo] += phase * unit_alpha;
        let vnorm2: f64 = (lo..n).map(|i| v[i].norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // p = τ·S·v on the trailing block
        for i in lo..n {
            let row = &a[i * n..(i + 1) * n];
            let mut acc = C64::new(0.0, 0.0);
            for j in lo..n {
                acc += row[j] * v[j];
            }
            p[i] = acc * tau;
        }
        let vp: C64 = (lo..n).map(|i| v[i].conj() * p[i]).sum();
        let kk = 0.5 * tau * vp.re;
        for i in lo..n {
            p[i] -= v[i] * kk;
        }
        // S ← S − v q† − q v†
        for i in lo..n {
            let (vi, qi) = (v[i], p[i]);
            let row = &mut a[i * n..(i + 1) * n];
            for j in lo..n {
                row[j] -= vi * p[j].conj() + qi * v[j].conj();
            }
        }
        e[k] = alpha;
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + (n - 2)].re;
        e[n - 2] = a[(n - 1) * n + (n - 2)].norm();
    }
    d[n - 1] = a[(n - 1) * n + (n - 1)].re;
    e[n - 1] = 0.0;
    (d, e)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix; eigenvalues
/// are left in `d`, `e` is destroyed.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    // deflate against the norm of the whole matrix: a relative or running
    // test stalls on a leading cluster of round-off sized entries
    let scale = d
        .iter()
        .zip(e.iter())
        .map(|(x, y)| x.abs() + y.abs())
        .fold(0.0f64, f64::max);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                if scale + e[m].abs() == scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::NoConvergence { iterations: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Cyclic complex Jacobi: a diagonal phase makes `a_pq` real, then a real
/// plane rotation annihilates it.
fn jacobi(mut a: Vec<C64>, n: usize) -> Result<Vec<f64>> {
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let target = (f64::EPSILON * f64::EPSILON) * total;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum();
        if off <= target {
            return Ok((0..n).map(|i| a[i * n + i].re).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // column q scaled by e^{-iφ}, row q by e^{iφ}
                let ph = apq / mag;
                for k in 0..n {
                    a[k * n + q] *= ph.conj();
                }
                for k in 0..n {
                    a[q * n + k] *= ph;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = 1.0f64.copysign(theta) / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let (kp, kq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = kp * c - kq * s;
                    a[k * n + q] = kp * s + kq * c;
                }
                for k in 0..n {
                    let (pk, qk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = pk * c - qk * s;
                    a[q * n + k] = pk * s + qk * c;
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: JACOBI_MAX_SWEEPS,
    })
}
