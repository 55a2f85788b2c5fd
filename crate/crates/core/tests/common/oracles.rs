//! Reference computations that share no code with the engine.

use std::collections::{BTreeMap, HashSet};

/// Schubert cells of `Gr(k, n)`: one cell per k-subset `s_0 < ... < s_{k-1}`
/// of `{0, ..., n-1}`, of dimension `sum(s_i - i)`. Returns cell counts by dimension.
pub fn schubert_cells(k: usize, n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; k * (n - k) + 1];
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let dim: usize = (0..n)
            .filter(|b| mask >> b & 1 == 1)
            .enumerate()
            .map(|(i, s)| s - i)
            .sum();
        counts[dim] += 1;
    }
    counts
}

/// Number of k-dimensional subspaces of `F_2^n`, by enumerating spans (n <= 6; slow past 5).
pub fn f2_subspaces(k: usize, n: usize) -> u64 {
    assert!(n <= 6);
    let nonzero: Vec<u32> = (1..(1u32 << n)).collect();
    let mut seen = HashSet::new();
    let mut chosen = Vec::new();
    collect_spans(&nonzero, 0, k, &mut chosen, &mut seen);
    seen.len() as u64
}

fn collect_spans(vs: &[u32], from: usize, k: usize, chosen: &mut Vec<u32>, seen: &mut HashSet<u64>) {
    if chosen.len() == k {
        let mut span: HashSet<u32> = HashSet::from([0]);
        for &v in chosen.iter() {
            let extra: Vec<u32> = span.iter().map(|w| w ^ v).collect();
            span.extend(extra);
        }
        if span.len() == 1 << k {
            seen.insert(span.iter().fold(0u64, |acc, w| acc | 1 << w));
        }
        return;
    }
    for i in from..vs.len() {
        chosen.push(vs[i]);
        collect_spans(vs, i + 1, k, chosen, seen);
        chosen.pop();
    }
}

fn binom(n: i128, j: i128) -> i128 {
    (0..j).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Hodge numbers of `S^[2]` read off the generating series
/// `prod_{k>=1} prod_{p,q} (1 - (-1)^{p+q} x^{p+k-1} y^{q+k-1} t^k)^{-(-1)^{p+q} h^{p,q}}`,
/// expanded to order `t^2`. Input and output are `(p, q) -> h`.
pub fn hilbert_square_series(surface: &BTreeMap<(u32, u32), u64>) -> BTreeMap<(u32, u32), u64> {
    // (p, q, power of t) -> coefficient
    let mut series: BTreeMap<(u32, u32, u32), i128> = BTreeMap::from([((0, 0, 0), 1)]);
    for k in 1..=2u32 {
        for (&(p, q), &h) in surface {
            if h == 0 {
                continue;
            }
            let even = (p + q) % 2 == 0;
            let (a, b) = (p + k - 1, q + k - 1);
            let factor: Vec<(u32, i128)> = (0..=2 / k)
                .map(|j| {
                    let c = if even {
                        binom(h as i128 + j as i128 - 1, j as i128)
                    } else {
                        binom(h as i128, j as i128)
                    };
                    (j, c)
                })
                .collect();
            let mut next = BTreeMap::new();
            for (&(x, y, t), &c) in &series {
                for &(j, f) in &factor {
                    if t + k * j > 2 {
                        continue;
                    }
                    *next.entry((x + a * j, y + b * j, t + k * j)).or_insert(0) += c * f;
                }
            }
            series = next;
        }
    }
    series
        .into_iter()
        .filter(|&((_, _, t), c)| t == 2 && c != 0)
        .map(|((p, q, _), c)| ((p, q), u64::try_from(c).expect("Hodge numbers are nonnegative")))
        .collect()
}

/// `chi(S^[2]) = chi(chi + 1) / 2 + chi`.
pub fn hilbert_square_euler(chi: i64) -> i64 {
    chi * (chi + 1) / 2 + chi
}

/// Rank-`r` locus of a generic `e x f` matrix: codimension by direct count
/// of the complement of an `r x r` minor chart, `ef - (r(e + f - r))`.
pub fn rank_locus_codim(e: u32, f: u32, r: u32) -> u32 {
    e * f - r * (e + f - r)
}
