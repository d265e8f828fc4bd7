//! Independent oracles for the integration tests. Nothing here calls into
//! the library's own validation or flow checks.
#![allow(dead_code)]

use std::collections::HashMap;

use itertools::Itertools;

fn choose(n: usize, r: usize) -> usize {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of distinct t-subsets covered, or an error naming a bad subset.
pub fn t_subsets_each_once(v: usize, t: usize, blocks: &[Vec<usize>]) -> Result<usize, String> {
    let mut seen: HashMap<Vec<usize>, u32> = HashMap::new();
    for b in blocks {
        if b.iter().any(|&p| p >= v) {
            return Err(format!("block {b:?} has a point outside 0..{v}"));
        }
        let mut b = b.clone();
        b.sort_unstable();
        if b.windows(2).any(|w| w[0] == w[1]) {
            return Err(format!("block {b:?} repeats a point"));
        }
        for s in b.iter().copied().combinations(t) {
            *seen.entry(s).or_default() += 1;
        }
    }
    if let Some((s, n)) = seen.iter().find(|(_, &n)| n != 1) {
        return Err(format!("{s:?} covered {n} times"));
    }
    if seen.len() != choose(v, t) {
        return Err(format!("{} of {} subsets covered", seen.len(), choose(v, t)));
    }
    Ok(seen.len())
}

pub fn point_sums(v: usize, blocks: &[Vec<usize>], values: &[i64]) -> Vec<i64> {
    assert_eq!(blocks.len(), values.len());
    let mut sums = vec![0; v];
    for (b, &x) in blocks.iter().zip(values) {
        for &p in b {
            sums[p] += x;
        }
    }
    sums
}

pub fn width(values: &[i64]) -> u64 {
    values.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) + 1
}

/// Every value nonzero and every point sum zero.
pub fn is_zero_sum(v: usize, blocks: &[Vec<usize>], values: &[i64]) -> bool {
    values.iter().all(|&x| x != 0) && point_sums(v, blocks, values).iter().all(|&s| s == 0)
}

/// Parses a printed table whose lines hold one or more `p_1 .. p_k value`
/// groups.
pub fn parse_table(text: &str, k: usize) -> (Vec<Vec<usize>>, Vec<i64>) {
    let mut blocks = Vec::new();
    let mut values = Vec::new();
    for line in text.lines() {
        let nums: Vec<i64> = line.split_whitespace().map(|x| x.parse().unwrap()).collect();
        assert_eq!(nums.len() % (k + 1), 0, "bad table line {line:?}");
        for group in nums.chunks(k + 1) {
            blocks.push(group[..k].iter().map(|&p| p as usize).collect());
            values.push(group[k]);
        }
    }
    (blocks, values)
}

/// Sorted block -> value.
pub fn table_map(blocks: &[Vec<usize>], values: &[i64]) -> HashMap<Vec<usize>, i64> {
    blocks
        .iter()
        .zip(values)
        .map(|(b, &x)| {
            let mut b = b.clone();
            b.sort_unstable();
            (b, x)
        })
        .collect()
}
