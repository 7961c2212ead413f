use crate::error::{Error, Result};

/// Natural log of the binomial coefficient C(n, k).
///
/// Sums `ln((n-k'+i)/i)` over `i = 1..=k'` with `k' = min(k, n-k)`; every
/// term is nonnegative so the relative error stays near `k'·ε`.
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("log_binomial: k={k} exceeds n={n}")));
    }
    let k = k.min(n - k);
    let base = (n - k) as f64;
    Ok((1..=k).map(|i| (base / i as f64).ln_1p()).sum())
}

/// `ln C(n, k)` for every `k = 0..=n`, by the multiplicative recurrence.
pub fn log_binomial_row(n: u64) -> Vec<f64> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0f64;
    row.push(0.0);
    for k in 0..n {
        acc += ((n - k) as f64 / (k + 1) as f64).ln();
        row.push(acc);
    }
    // the recurrence drifts; pin the symmetric half to the direct sums
    let n_us = n as usize;
    for k in 0..=n_us / 2 {
        let direct = log_binomial(n, k as u64).expect("k <= n");
        row[k] = direct;
        row[n_us - k] = direct;
    }
    row
}

/// `ln(e^a + e^b)` without overflow; `-inf` acts as the additive identity.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert!((log_binomial(4, 2).unwrap() - 6f64.ln()).abs() < 1e-15);
        assert_eq!(log_binomial(17, 0).unwrap(), 0.0);
        assert_eq!(log_binomial(17, 17).unwrap(), 0.0);
        assert!((log_binomial(10, 3).unwrap() - 120f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn k_above_n_is_rejected() {
        assert!(matches!(log_binomial(3, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn row_matches_direct() {
        let row = log_binomial_row(57);
        for (k, v) in row.iter().enumerate() {
            let d = log_binomial(57, k as u64).unwrap();
            assert!((v - d).abs() <= 1e-12 * d.max(1.0));
        }
    }

    #[test]
    fn log_add_exp_identities() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 1.5), 1.5);
        assert!((log_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert!((log_add_exp(-1000.0, -1000.0) - (-1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}
