use std::ops::{Add, Mul};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// 2×2 complex matrix in the σ^z eigenbasis (index 0 ↔ σ^z = +1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex2x2 {
    pub m: [[C64; 2]; 2],
}

impl Complex2x2 {
    pub fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Self {
            m: [[m00, m01], [m10, m11]],
        }
    }

    pub fn identity() -> Self {
        Self::diag(1.0, 1.0)
    }

    pub fn diag(a: f64, d: f64) -> Self {
        let z = C64::new(0.0, 0.0);
        Self::new(a.into(), z, z, d.into())
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.m;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_asymmetry(&self) -> f64 {
        let m = &self.m;
        let off = (m[0][1] - m[1][0].conj()).norm();
        off.max(m[0][0].im.abs()).max(m[1][1].im.abs())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_asymmetry() <= HERMITIAN_TOLERANCE * self.max_abs().max(f64::MIN_POSITIVE)
    }
}

impl Mul for Complex2x2 {
    type Output = Complex2x2;

    fn mul(self, rhs: Complex2x2) -> Complex2x2 {
        let (a, b) = (&self.m, &rhs.m);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Complex2x2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl Add for Complex2x2 {
    type Output = Complex2x2;

    fn add(self, rhs: Complex2x2) -> Complex2x2 {
        let (a, b) = (&self.m, &rhs.m);
        Complex2x2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

/// Eigenvalues `(λ+, λ−)` of a Hermitian 2×2 matrix, `λ+ ≥ λ−`.
pub fn eig_2x2_hermitian(m: &Complex2x2) -> Result<(f64, f64)> {
    if !m.is_hermitian() {
        return Err(Error::NotHermitian {
            asymmetry: m.hermitian_asymmetry(),
        });
    }
    let a = m.m[0][0].re;
    let d = m.m[1][1].re;
    let tr = a + d;
    let disc = (a - d).hypot(2.0 * m.m[0][1].norm());
    Ok(((tr + disc) / 2.0, (tr - disc) / 2.0))
}

/// Dense d×d Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl HermitianMatrix {
    /// Validates Hermiticity against `1e-12 · max|m_ij|`.
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        let mat = Self::new_unchecked(dim, data);
        let asym = mat.hermitian_asymmetry();
        if asym > HERMITIAN_TOLERANCE * mat.max_abs() {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        Ok(mat)
    }

    pub fn new_unchecked(dim: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), dim * dim, "data length must be dim²");
        Self { dim, data }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermitian_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Multiplies every entry by a real factor.
    pub fn scaled(mut self, s: f64) -> Self {
        self.data.iter_mut().for_each(|z| *z *= s);
        self
    }

    pub(crate) fn into_data(self) -> Vec<C64> {
        self.data
    }
}
