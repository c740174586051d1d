use crate::error::{Error, Result};
use crate::exact::neumaier_sum;

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    Ok(())
}

/// `H(N) = Σ_{k=1..N} 1/k`.
pub fn harmonic(n: usize) -> f64 {
    neumaier_sum((1..=n).rev().map(|k| 1.0 / k as f64))
}

/// `E(t_N^-) = N H(N)`.
pub fn expected_coupling_time(n: usize) -> Result<f64> {
    check_dimension(n)?;
    Ok(n as f64 * harmonic(n))
}

/// `Var(t_N^-) = Σ_{k=1..N} N(k-1)/(N-k+1)^2`, the sum of the geometric variances `q_k/p_k^2`.
pub fn variance_coupling_time(n: usize) -> Result<f64> {
    check_dimension(n)?;
    let nf = n as f64;
    Ok(neumaier_sum((1..=n).map(|k| {
        let rest = (n - k + 1) as f64;
        nf * (k - 1) as f64 / (rest * rest)
    })))
}

/// `(1-p)^n`, evaluated as `exp(n ln(1-p))`.
pub fn geometric_tail(p: f64, n: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!("success probability must lie in (0,1], got {p}")));
    }
    if n < 0.0 || n.is_nan() {
        return Err(Error::invalid(format!("tail index must be nonnegative, got {n}")));
    }
    if n == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    Ok((n * (-p).ln_1p()).exp())
}

/// `P(Γ_1 > k) = (1 - 1/N)^(k-1)` for `k >= 1`: the first backtrack comparison happens at step 2.
pub fn first_backtrack_survival(n: usize, k: u64) -> Result<f64> {
    check_dimension(n)?;
    if k == 0 {
        return Ok(1.0);
    }
    geometric_tail(1.0 / n as f64, (k - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_moments() {
        assert_eq!(expected_coupling_time(1).unwrap(), 1.0);
        assert_eq!(variance_coupling_time(1).unwrap(), 0.0);
        assert!((expected_coupling_time(2).unwrap() - 3.0).abs() < 1e-15);
        assert!((variance_coupling_time(2).unwrap() - 2.0).abs() < 1e-15);
        assert!(expected_coupling_time(0).is_err());
    }

    #[test]
    fn mean_bracket() {
        for n in 2..=2000 {
            let e = expected_coupling_time(n).unwrap();
            let nf = n as f64;
            assert!(nf * (nf - 1.0).ln() <= e && e <= nf * (1.0 + nf.ln()), "n={n}");
        }
    }

    #[test]
    fn tails() {
        assert_eq!(geometric_tail(0.3, 0.0).unwrap(), 1.0);
        assert_eq!(geometric_tail(1.0, 3.0).unwrap(), 0.0);
        assert!((geometric_tail(0.5, 3.0).unwrap() - 0.125).abs() < 1e-15);
        assert!(geometric_tail(0.0, 1.0).is_err());
        assert!(geometric_tail(0.5, -1.0).is_err());
        assert_eq!(first_backtrack_survival(4, 1).unwrap(), 1.0);
        assert!((first_backtrack_survival(4, 3).unwrap() - 0.5625).abs() < 1e-15);
        assert_eq!(first_backtrack_survival(1, 2).unwrap(), 0.0);
    }

    #[test]
    fn exponential_anchor() {
        let n = 10_000usize;
        for t in [0.5, 1.0, 2.0, 3.0] {
            let v = geometric_tail(1.0 / n as f64, n as f64 * t).unwrap();
            let target = (-t).exp();
            assert!((v - target).abs() <= t / n as f64 * target);
        }
    }
}
