use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ROW_TOLERANCE: f64 = 1e-12;

/// Nearest-neighbour chain on `{0, ..., M}`: up with `up[i]`, down with `down[i]`, hold otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirthDeathChain {
    up: Vec<f64>,
    down: Vec<f64>,
}

impl BirthDeathChain {
    pub fn new(up: Vec<f64>, down: Vec<f64>) -> Result<Self> {
        if up.is_empty() || up.len() != down.len() {
            return Err(Error::invalid("up and down rates must be nonempty and of equal length"));
        }
        let last = up.len() - 1;
        for (i, (&u, &d)) in up.iter().zip(&down).enumerate() {
            if !(u >= 0.0 && d >= 0.0 && u + d <= 1.0 + ROW_TOLERANCE) {
                return Err(Error::invalid(format!("invalid rates at state {i}: up={u}, down={d}")));
            }
        }
        if down[0] != 0.0 || up[last] != 0.0 {
            return Err(Error::invalid("chain must not leave {0..M}"));
        }
        Ok(Self { up, down })
    }

    /// Distance to a fixed target under the flip walk: `i -> i+1` w.p. `(N-i)/N`, `i -> i-1` w.p. `i/N`.
    pub fn ehrenfest(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        let nf = n as f64;
        Self::new(
            (0..=n).map(|i| (n - i) as f64 / nf).collect(),
            (0..=n).map(|i| i as f64 / nf).collect(),
        )
    }

    /// Number of disagreements `N D_N` of the coupled heat-bath walks: down w.p. `k/N`, hold otherwise.
    pub fn coupling_distance(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        let nf = n as f64;
        Self::new(vec![0.0; n + 1], (0..=n).map(|k| k as f64 / nf).collect())
    }

    /// Largest state `M`.
    pub fn max_state(&self) -> usize {
        self.up.len() - 1
    }

    pub fn transition(&self, i: usize, j: usize) -> f64 {
        if i > self.max_state() || j > self.max_state() {
            0.0
        } else if j == i + 1 {
            self.up[i]
        } else if j + 1 == i {
            self.down[i]
        } else if j == i {
            1.0 - self.up[i] - self.down[i]
        } else {
            0.0
        }
    }

    /// Sum of row `i` of the transition matrix.
    pub fn row_sum(&self, i: usize) -> f64 {
        let lo = i.saturating_sub(1);
        (lo..=(i + 1).min(self.max_state()))
            .map(|j| self.transition(i, j))
            .sum()
    }

    /// `P_i(hit target before avoid)` for every state `i`, by a tridiagonal solve
    /// with boundary values 1 at `target` and 0 at `avoid`.
    pub fn hitting_probabilities(&self, target: usize, avoid: usize) -> Result<Vec<f64>> {
        let m = self.max_state();
        if target > m || avoid > m || target == avoid {
            return Err(Error::invalid("target and avoid must be distinct states of the chain"));
        }
        let size = m + 1;
        let mut sub = vec![0.0; size];
        let mut diag = vec![0.0; size];
        let mut sup = vec![0.0; size];
        let mut rhs = vec![0.0; size];
        for i in 0..size {
            if i == target || i == avoid {
                diag[i] = 1.0;
                rhs[i] = if i == target { 1.0 } else { 0.0 };
            } else {
                sub[i] = -self.down[i];
                sup[i] = -self.up[i];
                diag[i] = self.up[i] + self.down[i];
                if diag[i] == 0.0 {
                    return Err(Error::invalid(format!("state {i} is absorbing")));
                }
            }
        }
        solve_tridiagonal(&sub, &diag, &sup, &rhs)
    }

    /// Probability that the chain leaving `start` hits `target` before coming back to `start`.
    pub fn excursion_probability(&self, start: usize, target: usize) -> Result<f64> {
        let h = self.hitting_probabilities(target, start)?;
        let up = if start < self.max_state() { self.up[start] * h[start + 1] } else { 0.0 };
        let down = if start > 0 { self.down[start] * h[start - 1] } else { 0.0 };
        Ok(up + down)
    }
}

/// Thomas algorithm; `sub[0]` and `sup[last]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 {
        return Err(Error::invalid("singular tridiagonal system"));
    }
    c[0] = sup[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i] * c[i - 1];
        if pivot.abs() < f64::MIN_POSITIVE {
            return Err(Error::invalid("singular tridiagonal system"));
        }
        c[i] = if i + 1 < n { sup[i] / pivot } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / pivot;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Closed form for the Ehrenfest chain: from 2, reach 0 before returning to 2
/// only along `2 -> 1 -> 0`, so the probability is `(2/N)(1/N)`.
pub fn ehrenfest_zero_before_return(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("the excursion from state 2 needs N >= 2"));
    }
    let nf = n as f64;
    Ok(2.0 / (nf * nf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_sum_to_one() {
        for n in [1, 2, 7, 50] {
            let e = BirthDeathChain::ehrenfest(n).unwrap();
            let c = BirthDeathChain::coupling_distance(n).unwrap();
            for i in 0..=n {
                assert!((e.row_sum(i) - 1.0).abs() < 1e-14);
                assert!((c.row_sum(i) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn coupling_kernel() {
        let c = BirthDeathChain::coupling_distance(10).unwrap();
        assert!((c.transition(4, 3) - 0.4).abs() < 1e-15);
        assert!((c.transition(4, 4) - 0.6).abs() < 1e-15);
        assert_eq!(c.transition(4, 5), 0.0);
    }

    #[test]
    fn ten_dimensional_excursion() {
        assert!((ehrenfest_zero_before_return(10).unwrap() - 0.02).abs() < 1e-16);
        let e = BirthDeathChain::ehrenfest(10).unwrap();
        assert!((e.excursion_probability(2, 0).unwrap() - 0.02).abs() < 1e-12);
        assert!(ehrenfest_zero_before_return(1).is_err());
    }

    #[test]
    fn gamblers_ruin() {
        // symmetric walk with holding: P_i(hit 4 before 0) = i/4
        let chain = BirthDeathChain::new(
            vec![0.3, 0.3, 0.3, 0.3, 0.0],
            vec![0.0, 0.3, 0.3, 0.3, 0.3],
        )
        .unwrap();
        let h = chain.hitting_probabilities(4, 0).unwrap();
        for (i, v) in h.iter().enumerate() {
            assert!((v - i as f64 / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(BirthDeathChain::new(vec![0.6, 0.0], vec![0.0, 0.6]).is_ok());
        assert!(BirthDeathChain::new(vec![0.6, 0.1], vec![0.0, 0.6]).is_err());
        assert!(BirthDeathChain::new(vec![0.7, 0.0], vec![0.5, 0.6]).is_err());
        let e = BirthDeathChain::ehrenfest(5).unwrap();
        assert!(e.hitting_probabilities(2, 2).is_err());
    }
}
