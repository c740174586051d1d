use serde::{Deserialize, Serialize};

use super::EmpiricalLaw;
use crate::error::{Error, Result};

/// Below this size the asymptotic p-value is not trusted.
pub const MIN_KS_SAMPLES: usize = 10;

const SERIES_TERMS: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// `P(K > λ)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let q = if lambda < 1.18 {
        // theta-function form converges fast for small λ
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let cdf: f64 = (1..=SERIES_TERMS)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (-m * m * c).exp()
            })
            .sum::<f64>()
            * (2.0 * std::f64::consts::PI).sqrt()
            / lambda;
        1.0 - cdf
    } else {
        let mut sum = 0.0;
        for k in 1..=SERIES_TERMS {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sum += if k % 2 == 1 { term } else { -term };
        }
        2.0 * sum
    };
    q.clamp(0.0, 1.0)
}

fn check_size(law: &EmpiricalLaw) -> Result<()> {
    if law.len() < MIN_KS_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_KS_SAMPLES,
            got: law.len(),
        });
    }
    Ok(())
}

/// One-sample test of `law` against `Exp(1)`.
pub fn ks_exponential(law: &EmpiricalLaw) -> Result<KsResult> {
    check_size(law)?;
    let n = law.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in law.values().iter().enumerate() {
        let f = if x <= 0.0 { 0.0 } else { -(-x).exp_m1() };
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_survival(n.sqrt() * d),
    })
}

/// Two-sample test; ties are handled by stepping over whole blocks of equal values.
pub fn ks_two_sample(a: &EmpiricalLaw, b: &EmpiricalLaw) -> Result<KsResult> {
    check_size(a)?;
    check_size(b)?;
    let (xa, xb) = (a.values(), b.values());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let effective = na * nb / (na + nb);
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_survival(effective.sqrt() * d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_values() {
        // reference values of the Kolmogorov distribution
        assert!((kolmogorov_survival(1.0) - 0.26999967167735456).abs() < 1e-10);
        assert!((kolmogorov_survival(1.3580986393225505) - 0.05).abs() < 1e-9);
        assert!((kolmogorov_survival(1.6276236115189) - 0.01).abs() < 1e-9);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
        // the two series agree where they meet
        let lo = kolmogorov_survival(1.18 - 1e-12);
        let hi = kolmogorov_survival(1.18);
        assert!((lo - hi).abs() < 1e-10);
    }

    #[test]
    fn point_mass() {
        let c = 0.3;
        let law = EmpiricalLaw::new(vec![c; 20]).unwrap();
        let r = ks_exponential(&law).unwrap();
        let f = 1.0 - (-c).exp();
        assert!((r.statistic - f.max(1.0 - f)).abs() < 1e-15);
    }

    #[test]
    fn identical_samples() {
        let law = EmpiricalLaw::new((0..50).map(|i| (i % 7) as f64).collect()).unwrap();
        let r = ks_two_sample(&law, &law).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn disjoint_samples() {
        let a = EmpiricalLaw::new((0..20).map(f64::from).collect()).unwrap();
        let b = EmpiricalLaw::new((100..120).map(f64::from).collect()).unwrap();
        assert_eq!(ks_two_sample(&a, &b).unwrap().statistic, 1.0);
    }

    #[test]
    fn small_samples_refused() {
        let law = EmpiricalLaw::new(vec![1.0; 9]).unwrap();
        assert!(matches!(
            ks_exponential(&law),
            Err(Error::InsufficientData { needed: 10, got: 9 })
        ));
    }
}
