//! Minimal even-multiplicity index patterns.
//!
//! A window of `2l` coordinate indices belongs to `J_l` when every index occurs
//! an even number of times in it and no shorter contiguous even-length
//! sub-window has that property. For the flip walk a window is
//! even-multiplicity exactly when the walk is back where the window started,
//! so both conditions reduce to comparisons of prefix parity states: the
//! window `(a, b]` is in `J_l` iff `P_a = P_b` and no other pair `a <= x < y <= b`
//! has `P_x = P_y`.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::walk::Configuration;

/// A window `(i_1, ..., i_{2l})` of coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternWindow {
    indices: Vec<usize>,
}

impl PatternWindow {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() || !indices.len().is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "pattern window must have positive even length, got {}",
                indices.len()
            )));
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// The level `l` of a window of length `2l`.
    pub fn level(&self) -> usize {
        self.indices.len() / 2
    }
}

/// Membership of the window in `J_l`, `l` being half its length.
pub fn is_in_j(window: &PatternWindow) -> bool {
    let prev = last_equal_prefix(window.indices());
    let len = window.indices().len();
    prev[len] == 0 && prev[1..len].iter().all(|&p| p < 0)
}

/// For every prefix position `y` in `0..=len`, the last `x < y` whose prefix
/// parity state equals that at `y`, or `-1`.
fn last_equal_prefix(indices: &[usize]) -> Vec<i64> {
    let dimension = indices.iter().max().map_or(1, |&m| m + 1);
    // dimension >= 1 so this cannot fail
    let mut state = Configuration::all_minus(dimension).expect("positive dimension");
    let mut last: FxHashMap<Configuration, i64> = FxHashMap::default();
    let mut prev = Vec::with_capacity(indices.len() + 1);
    prev.push(-1);
    last.insert(state.clone(), 0);
    for (t, &i) in indices.iter().enumerate() {
        state.flip_unchecked(i);
        let y = t as i64 + 1;
        prev.push(last.insert(state.clone(), y).unwrap_or(-1));
    }
    prev
}

fn scan_with_table(prev: &[i64], l: usize, limit: usize) -> Option<u64> {
    let width = 2 * l;
    if limit < width {
        return None;
    }
    // Monotone deque over interior positions y in (k - 2l, k) holding the
    // running maximum of prev[y].
    let mut deque = std::collections::VecDeque::<usize>::new();
    for y in 1..width {
        while deque.back().is_some_and(|&b| prev[b] <= prev[y]) {
            deque.pop_back();
        }
        deque.push_back(y);
    }
    for k in width..=limit {
        let a = k - width;
        while deque.front().is_some_and(|&f| f <= a) {
            deque.pop_front();
        }
        let interior_max = deque.front().map_or(-1, |&f| prev[f]);
        if prev[k] == a as i64 && interior_max < a as i64 {
            return Some(k as u64);
        }
        // slide: position k becomes interior for the next window
        while deque.back().is_some_and(|&b| prev[b] <= prev[k]) {
            deque.pop_back();
        }
        deque.push_back(k);
    }
    None
}

/// `Γ_l`: first `k >= 2l` whose trailing window `(I(k-2l+1), ..., I(k))` is in `J_l`.
///
/// `indices[t]` is `I(t+1)`. Only `k <= min(horizon, indices.len())` is examined.
pub fn scan_first_gamma(indices: &[usize], l: usize, horizon: u64) -> Result<Option<u64>> {
    if l == 0 {
        return Err(Error::invalid("pattern level must be at least 1"));
    }
    let limit = indices.len().min(usize::try_from(horizon).unwrap_or(usize::MAX));
    let prev = last_equal_prefix(&indices[..limit]);
    Ok(scan_with_table(&prev, l, limit))
}

/// `min_l Γ_l` over all levels fitting in the horizon, with the minimizing level.
pub fn min_gamma(indices: &[usize], horizon: u64) -> Option<(u64, usize)> {
    let limit = indices.len().min(usize::try_from(horizon).unwrap_or(usize::MAX));
    let prev = last_equal_prefix(&indices[..limit]);
    (1..=limit / 2)
        .filter_map(|l| scan_with_table(&prev, l, limit).map(|k| (k, l)))
        .min()
}
