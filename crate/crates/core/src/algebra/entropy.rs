use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// Eigenvalues in `[-NEGATIVE_TOLERANCE, 0)` are round-off and clamp to zero.
pub const NEGATIVE_TOLERANCE: f64 = 1e-12;
/// Allowed deviation of a density-matrix spectrum's total weight from 1.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

fn neg_x_log2_x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy of a binary distribution `(x, 1-x)`, in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-NEGATIVE_TOLERANCE..=1.0 + NEGATIVE_TOLERANCE).contains(&x) {
        return Err(Error::Domain(format!("binary_entropy: {x} is not a probability")));
    }
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(neg_x_log2_x(x) + neg_x_log2_x(1.0 - x))
}

/// The `x ∈ [1/2, 1]` with `binary_entropy(x) = h`, by bisection.
pub fn invert_binary_entropy(h: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::Domain(format!(
            "invert_binary_entropy: {h} is outside [0, 1]"
        )));
    }
    if h == 0.0 {
        return Ok(1.0);
    }
    if h == 1.0 {
        return Ok(0.5);
    }
    // H is decreasing on [1/2, 1]
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if binary_entropy(mid)? > h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let err = |x: f64| (binary_entropy(x).unwrap_or(f64::INFINITY) - h).abs();
    Ok(if err(lo) <= err(hi) { lo } else { hi })
}

/// One eigenvalue of a spectrum together with its degeneracy, both stored
/// as natural logs. A zero eigenvalue has `log_value = -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumItem {
    pub log_value: f64,
    pub log_multiplicity: f64,
}

impl SpectrumItem {
    pub fn is_zero(&self) -> bool {
        self.log_value == f64::NEG_INFINITY
    }

    pub fn weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            (self.log_multiplicity + self.log_value).exp()
        }
    }
}

/// Multiset of eigenvalues carried in the log domain, so that values like
/// `e^-1000` and multiplicities like `2^200` are representable.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Spectrum {
    items: Vec<SpectrumItem>,
}

impl Spectrum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Plain eigenvalues, each with multiplicity one.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let mut s = Self::new();
        for &v in values {
            s.push_value(v, 0.0)?;
        }
        Ok(s)
    }

    pub fn push_log(&mut self, log_value: f64, log_multiplicity: f64) {
        debug_assert!(!log_value.is_nan() && !log_multiplicity.is_nan());
        self.items.push(SpectrumItem {
            log_value,
            log_multiplicity,
        });
    }

    /// Adds a linear-domain eigenvalue, clamping round-off negatives.
    pub fn push_value(&mut self, value: f64, log_multiplicity: f64) -> Result<()> {
        if value < -NEGATIVE_TOLERANCE || value.is_nan() {
            return Err(Error::NegativeEigenvalue { value });
        }
        let log_value = if value <= 0.0 { f64::NEG_INFINITY } else { value.ln() };
        self.push_log(log_value, log_multiplicity);
        Ok(())
    }

    pub fn extend(&mut self, other: Spectrum) {
        self.items.extend(other.items);
    }

    pub fn items(&self) -> &[SpectrumItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// `Σ multiplicity · value`.
    pub fn total_weight(&self) -> f64 {
        self.items.iter().map(SpectrumItem::weight).sum()
    }

    /// Total number of eigenvalues counted with multiplicity.
    pub fn dimension(&self) -> f64 {
        self.items.iter().map(|it| it.log_multiplicity.exp()).sum()
    }

    /// Expands multiplicities into a sorted list of plain eigenvalues.
    /// Only meaningful when multiplicities are small integers.
    pub fn expanded_values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for it in &self.items {
            let count = it.log_multiplicity.exp().round() as usize;
            let v = if it.is_zero() { 0.0 } else { it.log_value.exp() };
            out.extend(std::iter::repeat_n(v, count));
        }
        out.sort_by(|a, b| a.total_cmp(b));
        out
    }

    pub fn entropy(&self) -> Result<f64> {
        spectrum_entropy(self)
    }
}

/// Von Neumann entropy in bits, `-Σ m·λ·log₂λ`, evaluated term by term as
/// `exp(ln m + ln λ) · ln λ / ln 2`.
pub fn spectrum_entropy(s: &Spectrum) -> Result<f64> {
    let weight = s.total_weight();
    if !((weight - 1.0).abs() <= WEIGHT_TOLERANCE) {
        return Err(Error::WeightViolation { weight });
    }
    let nats: f64 = s
        .items
        .iter()
        .filter(|it| !it.is_zero())
        .map(|it| -(it.log_multiplicity + it.log_value).exp() * it.log_value)
        .sum();
    Ok(nats / LN_2)
}
