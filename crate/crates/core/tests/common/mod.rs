//! Brute-force references shared by the integration and acceptance tests.
#![allow(dead_code)]

use cube_times::walk::Configuration;

/// Every index occurs an even number of times.
pub fn even(window: &[usize]) -> bool {
    let mut counts = std::collections::HashMap::new();
    for &i in window {
        *counts.entry(i).or_insert(0usize) += 1;
    }
    counts.values().all(|c| c % 2 == 0)
}

/// Brute force: even, and no proper contiguous sub-window is even.
pub fn brute_j(window: &[usize]) -> bool {
    let len = window.len();
    if len == 0 || len % 2 == 1 || !even(window) {
        return false;
    }
    for x in 0..len {
        for y in (x + 1)..=len {
            if (x, y) != (0, len) && even(&window[x..y]) {
                return false;
            }
        }
    }
    true
}

/// Brute force first self-intersection on an explicit path.
pub fn brute_self_intersection(n: usize, indices: &[usize]) -> Option<u64> {
    let mut c = Configuration::all_plus(n).unwrap();
    let mut seen = vec![c.clone()];
    for (t, &i) in indices.iter().enumerate() {
        c.flip_in_place(i).unwrap();
        if seen.contains(&c) {
            return Some(t as u64 + 1);
        }
        seen.push(c.clone());
    }
    None
}

pub fn sequences(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

/// Heat-bath law after `t` steps from `+`, by repeated application of the dense
/// `2^N x 2^N` kernel to the start distribution. Bit `i` set means spin `i` is minus.
pub fn dense_law(n: usize, t: u64) -> Vec<f64> {
    let size = 1usize << n;
    let mut kernel = vec![0.0; size * size];
    for x in 0..size {
        for i in 0..n {
            let w = 1.0 / (2 * n) as f64;
            kernel[x * size + (x & !(1 << i))] += w;
            kernel[x * size + (x | (1 << i))] += w;
        }
    }
    let mut v = vec![0.0; size];
    v[0] = 1.0;
    for _ in 0..t {
        let mut next = vec![0.0; size];
        for (x, &p) in v.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for (y, k) in kernel[x * size..(x + 1) * size].iter().enumerate() {
                next[y] += p * k;
            }
        }
        v = next;
    }
    v
}
