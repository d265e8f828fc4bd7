//! Edge partitions of complete and complete bipartite graphs.
//!
//! Besides plain 1-factorizations this module provides weighted ones whose
//! every vertex and every 1-factor has total weight zero (k-null
//! 1-factorizations of `K_{n,n}`), and partitions of `K_n` into `n`
//! triangles plus `n - 7` 1-factors together with their standard weighting.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cache;
use crate::error::{Error, Result};
use crate::search::{Budget, SearchConfig};

pub type Edge = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphKind {
    /// `K_n`; edges are `(u, v)` with `u < v`.
    Complete,
    /// `K_{n,n}`; edges are `(left, right)`, both sides numbered `0..n`.
    Bipartite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneFactorization {
    kind: GraphKind,
    n: usize,
    factors: Vec<Vec<Edge>>,
}

impl OneFactorization {
    pub fn new(kind: GraphKind, n: usize, factors: Vec<Vec<Edge>>) -> Result<OneFactorization> {
        let f = OneFactorization { kind, n, factors };
        f.check()?;
        Ok(f)
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Vertex count (complete) or side size (bipartite).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[Vec<Edge>] {
        &self.factors
    }

    fn edge_slot(&self, (a, b): Edge) -> Option<usize> {
        let n = self.n;
        match self.kind {
            GraphKind::Complete if a < b && b < n => Some(a * n + b),
            GraphKind::Bipartite if a < n && b < n => Some(a * n + b),
            _ => None,
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.n;
        let (vertices, edges) = match self.kind {
            GraphKind::Complete => (n, n * n.saturating_sub(1) / 2),
            GraphKind::Bipartite => (2 * n, n * n),
        };
        let mut seen = vec![false; n * n];
        let mut total = 0;
        for (i, factor) in self.factors.iter().enumerate() {
            let mut touched = vec![false; vertices];
            for &e in factor {
                let slot = self.edge_slot(e).ok_or_else(|| Error::malformed(format!("{e:?} is not an edge")))?;
                if std::mem::replace(&mut seen[slot], true) {
                    return Err(Error::malformed(format!("edge {e:?} lies in two factors")));
                }
                let ends = match self.kind {
                    GraphKind::Complete => [e.0, e.1],
                    GraphKind::Bipartite => [e.0, n + e.1],
                };
                for x in ends {
                    if std::mem::replace(&mut touched[x], true) {
                        return Err(Error::malformed(format!("factor {i} meets a vertex twice")));
                    }
                }
            }
            if touched.iter().any(|t| !t) {
                return Err(Error::malformed(format!("factor {i} is not perfect")));
            }
            total += factor.len();
        }
        if total != edges {
            return Err(Error::malformed(format!("factors cover {total} of {edges} edges")));
        }
        Ok(())
    }
}

/// Circle-method 1-factorization of `K_n`: vertex `n - 1` sits in the
/// middle, factor `i` joins it to `i` and pairs `i + j` with `i - j`
/// modulo `n - 1`.
pub fn complete_one_factorization(n: usize) -> Result<OneFactorization> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::precondition(format!("K_{n} has a 1-factorization only for even n >= 2")));
    }
    let m = n - 1;
    let factors = (0..m)
        .map(|i| {
            let mut f = vec![(i, n - 1)];
            for j in 1..n / 2 {
                let (a, b) = ((i + j) % m, (i + m - j) % m);
                f.push((a.min(b), a.max(b)));
            }
            f
        })
        .collect();
    OneFactorization::new(GraphKind::Complete, n, factors)
}

/// Cyclic 1-factorization of `K_{n,n}`: `F_i = {(a, a + i mod n)}`.
pub fn bipartite_one_factorization(n: usize) -> OneFactorization {
    let factors = (0..n).map(|i| (0..n).map(|a| (a, (a + i) % n)).collect()).collect();
    OneFactorization { kind: GraphKind::Bipartite, n, factors }
}

/// A 1-factorization with integer edge weights; `weights[i][e]` belongs to
/// edge `factors[i][e]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedOneFactorization {
    base: OneFactorization,
    weights: Vec<Vec<i64>>,
    k: u64,
}

impl WeightedOneFactorization {
    pub fn new(base: OneFactorization, weights: Vec<Vec<i64>>, k: u64) -> Result<Self> {
        let w = WeightedOneFactorization { base, weights, k };
        w.check()?;
        Ok(w)
    }

    pub fn base(&self) -> &OneFactorization {
        &self.base
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Weighted edges of factor `i`.
    pub fn factor(&self, i: usize) -> impl Iterator<Item = (Edge, i64)> + '_ {
        self.base.factors[i].iter().copied().zip(self.weights[i].iter().copied())
    }

    /// Zero at every vertex, zero on every factor, magnitudes in `1..k`.
    pub fn check(&self) -> Result<()> {
        self.base.check()?;
        let n = self.base.n;
        let vertices = match self.base.kind {
            GraphKind::Complete => n,
            GraphKind::Bipartite => 2 * n,
        };
        let mut at_vertex = vec![0i64; vertices];
        if self.weights.len() != self.base.factors.len() {
            return Err(Error::malformed("weights do not match the factor list"));
        }
        for (i, (factor, ws)) in self.base.factors.iter().zip(&self.weights).enumerate() {
            if factor.len() != ws.len() {
                return Err(Error::malformed(format!("factor {i} has {} weights for {} edges", ws.len(), factor.len())));
            }
            if let Some(w) = ws.iter().find(|&&w| w == 0 || w.unsigned_abs() >= self.k) {
                return Err(Error::Verification(format!("weight {w} is not in ±1..±{}", self.k - 1)));
            }
            if ws.iter().sum::<i64>() != 0 {
                return Err(Error::Verification(format!("factor {i} has nonzero total weight")));
            }
            for (&(a, b), &w) in factor.iter().zip(ws) {
                let other = match self.base.kind {
                    GraphKind::Complete => b,
                    GraphKind::Bipartite => n + b,
                };
                at_vertex[a] += w;
                at_vertex[other] += w;
            }
        }
        if let Some(x) = at_vertex.iter().position(|&s| s != 0) {
            return Err(Error::Verification(format!("vertex {x} has weight {}", at_vertex[x])));
        }
        Ok(())
    }
}

const KNULL_FORMAT: &str = "knull-bipartite-v1";

#[derive(Serialize, Deserialize)]
struct KNullEntry {
    n: usize,
    k: u64,
    /// `matrix[a][b]` is the weight of edge `(a, b)`.
    matrix: Vec<Vec<i64>>,
}

/// Symbol table of the Latin square whose symbol classes are the factors
/// used for `K_{n,n}`: the cyclic square, except that for `n ≡ 2 (mod 4)`
/// the intercalate on rows and columns `{0, n/2}` is switched. With cyclic
/// factors alone no 2-null weighting exists when `n ≡ 2 (mod 4)`: summing
/// `b - a` over the `+1` cells gives `m·n(n-1)/2 ≡ m (mod 2m)` through the
/// diagonals and `0` through rows and columns, `m = n/2` odd.
fn factor_square(n: usize, switched: bool) -> Vec<Vec<usize>> {
    let mut sq: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (b + n - a) % n).collect()).collect();
    if switched {
        let h = n / 2;
        for (a, b) in [(0, 0), (0, h), (h, 0), (h, h)] {
            sq[a][b] = (sq[a][b] + h) % n;
        }
    }
    sq
}

fn weighted_from_matrix(n: usize, k: u64, matrix: &[Vec<i64>], switched: bool) -> Result<WeightedOneFactorization> {
    let sq = factor_square(n, switched);
    let mut factors = vec![Vec::with_capacity(n); n];
    let mut weights = vec![Vec::with_capacity(n); n];
    for a in 0..n {
        for b in 0..n {
            factors[sq[a][b]].push((a, b));
            weights[sq[a][b]].push(matrix[a][b]);
        }
    }
    WeightedOneFactorization::new(OneFactorization::new(GraphKind::Bipartite, n, factors)?, weights, k)
}

/// A `k`-null 1-factorization of `K_{n,n}`.
///
/// The factors are the cyclic ones `F_i = {(a, a + i)}`, except for `k = 2`
/// with `n ≡ 2 (mod 4)`, where a switched intercalate is needed (see
/// `factor_square`).
///
/// Only the parameter ranges known to admit one are accepted: `k = 3` with
/// `n >= 3`, and `k = 2` with `n >= 4` even and `n != 6`.
///
/// * `k = 3`: the weight of `(a, b)` is `c(a + b mod n)`. Every row, column
///   and diagonal then sums `c` over a full residue system (odd `n`), or
///   sums it separately over the even and the odd residues (even `n`), so it
///   is enough for `c` to vanish on those.
/// * `k = 2`, `4 | n`: the factors `F_i` and `F_{i+n/2}` are paired; their
///   union is `n/2` four-cycles, which get alternating signs, half of the
///   cycles in each orientation.
/// * `k = 2`, `n ≡ 2 (mod 4)`: a seeded local search over balanced rows,
///   cached by `n`.
pub fn k_null_bipartite(n: usize, k: u64, cfg: &SearchConfig) -> Result<WeightedOneFactorization> {
    let covered = (k == 3 && n >= 3) || (k == 2 && n >= 4 && n % 2 == 0 && n != 6);
    if !covered {
        return Err(Error::precondition(format!(
            "no {k}-null 1-factorization of K_{{{n},{n}}} is claimed: Lemma 2.5 covers k = 3 with n >= 3 \
             and k = 2 with n even, n != 6 (K_{{2,2}} has none)"
        )));
    }
    if k == 3 {
        return weighted_from_matrix(n, k, &anti_diagonal(n), false);
    }
    if n % 4 == 0 {
        return weighted_from_matrix(n, k, &paired_four_cycles(n), false);
    }
    let name = format!("knull-{n}-{k}.json");
    if let Some(dir) = &cfg.cache_dir {
        if let Some(entry) = cache::load::<KNullEntry>(dir, &name, KNULL_FORMAT) {
            if entry.n == n && entry.k == k && entry.matrix.len() == n && entry.matrix.iter().all(|r| r.len() == n) {
                if let Ok(w) = weighted_from_matrix(n, k, &entry.matrix, true) {
                    return Ok(w);
                }
            }
        }
    }
    let matrix = balance_search(&factor_square(n, true), cfg.budget)?;
    let w = weighted_from_matrix(n, k, &matrix, true)?;
    if let Some(dir) = &cfg.cache_dir {
        cache::store(dir, &name, KNULL_FORMAT, &KNullEntry { n, k, matrix })?;
    }
    Ok(w)
}

/// `2, -1, -1, +1, -1, +1, -1, ...` of the given odd length, or
/// `+1, -1, ...` of even length; always sums to zero.
fn zero_sum_run(len: usize) -> Vec<i64> {
    let head: &[i64] = if len % 2 == 1 { &[2, -1, -1] } else { &[] };
    let tail = (0..len - head.len()).map(|i| if i % 2 == 0 { 1 } else { -1 });
    head.iter().copied().chain(tail).collect()
}

fn anti_diagonal(n: usize) -> Vec<Vec<i64>> {
    let c: Vec<i64> = if n % 2 == 1 {
        zero_sum_run(n)
    } else {
        let half = zero_sum_run(n / 2);
        (0..n).map(|j| half[j / 2]).collect()
    };
    (0..n).map(|a| (0..n).map(|b| c[(a + b) % n]).collect()).collect()
}

fn paired_four_cycles(n: usize) -> Vec<Vec<i64>> {
    let h = n / 2;
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..h {
        for a in 0..h {
            let s = if a < n / 4 { 1 } else { -1 };
            m[a][(a + i) % n] = s;
            m[a + h][(a + i) % n] = -s;
            m[a + h][(a + h + i) % n] = s;
            m[a][(a + i + h) % n] = -s;
        }
    }
    m
}

/// `±1` matrix with zero sums on every row, every column and every symbol
/// class of `square`.
///
/// Rows start balanced and stay balanced: a move swaps a `+1` and a `-1`
/// inside one row, which shifts two column sums and two symbol sums by
/// `±2`. Moves that do not increase the squared imbalance are taken, and a
/// worsening one is taken with probability 1/64. The generator is seeded by
/// `n`, so the result is reproducible.
fn balance_search(square: &[Vec<usize>], budget: u64) -> Result<Vec<Vec<i64>>> {
    let n = square.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + n as u64);
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|_| {
            let mut row: Vec<i64> = (0..n).map(|b| if b < n / 2 { 1 } else { -1 }).collect();
            row.shuffle(&mut rng);
            row
        })
        .collect();
    let mut col = vec![0i64; n];
    let mut sym = vec![0i64; n];
    for (a, row) in m.iter().enumerate() {
        for (b, &x) in row.iter().enumerate() {
            col[b] += x;
            sym[square[a][b]] += x;
        }
    }
    let mut meter = Budget::new(budget);
    let mut cost: i64 = col.iter().chain(&sym).map(|s| s * s).sum();
    let shift = |s: i64, d: i64| (s + d) * (s + d) - s * s;
    while cost > 0 {
        if !meter.tick() {
            return Err(meter.error(format!("2-null 1-factorization of K_{{{n},{n}}}")));
        }
        let a = rng.gen_range(0..n);
        let (p, q) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if m[a][p] != 1 || m[a][q] != -1 {
            continue;
        }
        // p loses 2 and q gains 2, in its column and in its symbol class
        let (sp, sq) = (square[a][p], square[a][q]);
        let delta = shift(col[p], -2) + shift(col[q], 2) + shift(sym[sp], -2) + shift(sym[sq], 2);
        if delta <= 0 || rng.gen_ratio(1, 64) {
            m[a][p] = -1;
            m[a][q] = 1;
            col[p] -= 2;
            col[q] += 2;
            sym[sp] -= 2;
            sym[sq] += 2;
            cost += delta;
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleFactorPartition {
    n: usize,
    triangles: Vec<[usize; 3]>,
    factors: Vec<Vec<Edge>>,
}

impl TriangleFactorPartition {
    pub fn new(n: usize, triangles: Vec<[usize; 3]>, factors: Vec<Vec<Edge>>) -> Result<Self> {
        let p = TriangleFactorPartition { n, triangles, factors };
        p.check()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn factors(&self) -> &[Vec<Edge>] {
        &self.factors
    }

    /// Triangles and factor edges partition `E(K_n)`, there are `n`
    /// triangles and `n - 7` factors, and each vertex is in 3 triangles.
    pub fn check(&self) -> Result<()> {
        let n = self.n;
        if n < 8 || n % 2 == 1 {
            return Err(Error::malformed(format!("order {n} must be even and at least 8")));
        }
        if self.triangles.len() != n || self.factors.len() != n - 7 {
            return Err(Error::malformed(format!(
                "{} triangles and {} factors, expected {n} and {}",
                self.triangles.len(),
                self.factors.len(),
                n - 7
            )));
        }
        let mut seen = vec![false; n * n];
        let mut mark = |a: usize, b: usize| -> Result<()> {
            let (a, b) = (a.min(b), a.max(b));
            if a == b || b >= n || std::mem::replace(&mut seen[a * n + b], true) {
                return Err(Error::malformed(format!("edge ({a},{b}) is invalid or used twice")));
            }
            Ok(())
        };
        let mut per_vertex = vec![0usize; n];
        for t in &self.triangles {
            mark(t[0], t[1])?;
            mark(t[0], t[2])?;
            mark(t[1], t[2])?;
            for &x in t {
                per_vertex[x] += 1;
            }
        }
        if let Some(x) = per_vertex.iter().position(|&c| c != 3) {
            return Err(Error::malformed(format!("vertex {x} lies in {} triangles", per_vertex[x])));
        }
        for (i, f) in self.factors.iter().enumerate() {
            let mut touched = vec![false; n];
            for &(a, b) in f {
                mark(a, b)?;
                for x in [a, b] {
                    if std::mem::replace(&mut touched[x], true) {
                        return Err(Error::malformed(format!("factor {i} meets vertex {x} twice")));
                    }
                }
            }
            if touched.iter().any(|t| !t) {
                return Err(Error::malformed(format!("factor {i} is not perfect")));
            }
        }
        Ok(())
    }
}

const PARTITION_FORMAT: &str = "triangle-partition-v1";

/// Partitions `E(K_n)`, `n` even and at least 8, into `n` triangles with
/// every vertex in three of them and `n - 7` 1-factors.
///
/// Triangle sets are taken from cyclic starters `{i, i+a, i+a+b}` over
/// `Z_n`, tried in lexicographic order of `(a, b)`. The remaining edges form
/// a circulant graph whose difference classes are grouped (see
/// [`class_groups`]); each group is 1-factorized by a backtracking edge
/// colouring. Results are cached by `n`
/// and re-checked on load.
pub fn triangle_factor_partition(n: usize, cfg: &SearchConfig) -> Result<TriangleFactorPartition> {
    if n < 8 || n % 2 == 1 {
        return Err(Error::precondition(format!(
            "K_n splits into n triangles and n - 7 1-factors only for even n >= 8, got n = {n}"
        )));
    }
    let name = format!("partition-{n}.json");
    if let Some(dir) = &cfg.cache_dir {
        if let Some(p) = cache::load::<TriangleFactorPartition>(dir, &name, PARTITION_FORMAT) {
            if p.n == n && p.check().is_ok() {
                return Ok(p);
            }
        }
    }
    let p = search_partition(n, cfg.budget)?;
    if let Some(dir) = &cfg.cache_dir {
        cache::store(dir, &name, PARTITION_FORMAT, &p)?;
    }
    Ok(p)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Groups the difference classes left over by the triangles so that each
/// group's circulant graph has components of even order: a class whose
/// cycles are even stands alone, one whose cycles are odd is paired with
/// such a class (the diameter `n/2` last). `None` if that is impossible.
fn class_groups(n: usize, classes: &[usize]) -> Option<Vec<Vec<usize>>> {
    let even_cycles = |d: usize| (n / gcd(n, d)) % 2 == 0;
    let (good, bad): (Vec<usize>, Vec<usize>) = classes.iter().partition(|&&d| even_cycles(d));
    let mut free = good;
    let mut groups = Vec::new();
    for d in bad {
        let j = free.iter().position(|&g| (n / gcd(n, gcd(d, g))) % 2 == 0)?;
        groups.push(vec![d, free.remove(j)]);
    }
    groups.extend(free.into_iter().map(|g| vec![g]));
    groups.sort();
    Some(groups)
}

/// Edges of the circulant graph on `Z_n` with the given difference classes.
fn circulant_edges(n: usize, classes: &[usize]) -> Vec<Edge> {
    let mut edges = Vec::new();
    for &d in classes {
        let starts = if 2 * d == n { n / 2 } else { n };
        edges.extend((0..starts).map(|x| (x.min((x + d) % n), x.max((x + d) % n))));
    }
    edges
}

fn search_partition(n: usize, budget: u64) -> Result<TriangleFactorPartition> {
    let class = |d: usize| d.min(n - d);
    let mut tried = Vec::new();
    let mut used = 0;
    for a in 1..n {
        for b in 1..n - a {
            let mut classes = [class(a), class(b), class(a + b)];
            classes.sort_unstable();
            if classes[0] == classes[1] || classes[1] == classes[2] || classes[2] == n / 2 || tried.contains(&classes) {
                continue;
            }
            tried.push(classes);
            let rest: Vec<usize> = (1..=n / 2).filter(|d| !classes.contains(d)).collect();
            let Some(groups) = class_groups(n, &rest) else {
                continue;
            };
            let mut factors: Vec<Vec<Edge>> = Vec::with_capacity(n - 7);
            for group in &groups {
                let edges = circulant_edges(n, group);
                let degree = group.iter().map(|&d| if 2 * d == n { 1 } else { 2 }).sum();
                let mut meter = Budget::new(budget.saturating_sub(used));
                let colouring = EdgeColouring::new(n, &edges, degree).run(&mut meter);
                used += meter.used;
                let Some(colour) = colouring else {
                    break;
                };
                let mut parts = vec![Vec::new(); degree];
                for (e, c) in edges.iter().zip(colour) {
                    parts[c].push(*e);
                }
                factors.extend(parts);
            }
            if factors.len() == n - 7 {
                let mut triangles: Vec<[usize; 3]> = (0..n)
                    .map(|i| {
                        let mut t = [i, (i + a) % n, (i + a + b) % n];
                        t.sort_unstable();
                        t
                    })
                    .collect();
                triangles.sort_unstable();
                for f in &mut factors {
                    f.sort_unstable();
                }
                return TriangleFactorPartition::new(n, triangles, factors);
            }
            if used >= budget {
                return Err(Error::BudgetExceeded { context: format!("triangle/1-factor partition of K_{n}"), nodes: used });
            }
        }
    }
    Err(Error::Verification(format!("no cyclic triangle set of K_{n} has a 1-factorizable complement")))
}

/// Proper edge colouring of a regular graph with as many colours as its
/// degree, i.e. a 1-factorization. Most-constrained edge first.
struct EdgeColouring<'a> {
    edges: &'a [Edge],
    colours: usize,
    used_at: Vec<u64>,
    colour: Vec<Option<usize>>,
    incident: Vec<Vec<usize>>,
}

impl<'a> EdgeColouring<'a> {
    fn new(n: usize, edges: &'a [Edge], colours: usize) -> Self {
        assert!(colours <= 64);
        let mut incident = vec![Vec::new(); n];
        for (i, &(a, b)) in edges.iter().enumerate() {
            incident[a].push(i);
            incident[b].push(i);
        }
        EdgeColouring { edges, colours, used_at: vec![0; n], colour: vec![None; edges.len()], incident }
    }

    fn free(&self, e: usize) -> u64 {
        let (a, b) = self.edges[e];
        let all = if self.colours == 64 { u64::MAX } else { (1u64 << self.colours) - 1 };
        all & !(self.used_at[a] | self.used_at[b])
    }

    fn set(&mut self, e: usize, c: usize) {
        let (a, b) = self.edges[e];
        self.used_at[a] |= 1 << c;
        self.used_at[b] |= 1 << c;
        self.colour[e] = Some(c);
    }

    fn clear(&mut self, e: usize, c: usize) {
        let (a, b) = self.edges[e];
        self.used_at[a] &= !(1 << c);
        self.used_at[b] &= !(1 << c);
        self.colour[e] = None;
    }

    fn run(mut self, budget: &mut Budget) -> Option<Vec<usize>> {
        if self.edges.is_empty() {
            return Some(Vec::new());
        }
        // the edges at vertex 0 take colours in order
        let first: Vec<usize> = self.incident[0].clone();
        for (c, &e) in first.iter().enumerate() {
            if c >= self.colours || self.free(e) & (1 << c) == 0 {
                return None;
            }
            self.set(e, c);
        }
        if self.solve(budget) {
            Some(self.colour.into_iter().map(|c| c.expect("all edges coloured")).collect())
        } else {
            None
        }
    }

    fn solve(&mut self, budget: &mut Budget) -> bool {
        let mut best: Option<(u32, usize)> = None;
        for e in 0..self.edges.len() {
            if self.colour[e].is_none() {
                let options = self.free(e).count_ones();
                if options == 0 {
                    return false;
                }
                if best.map_or(true, |(o, _)| options < o) {
                    best = Some((options, e));
                }
            }
        }
        let Some((_, e)) = best else {
            return true;
        };
        let mut options = self.free(e);
        while options != 0 {
            if !budget.tick() {
                return false;
            }
            let c = options.trailing_zeros() as usize;
            options &= options - 1;
            self.set(e, c);
            if self.solve(budget) {
                return true;
            }
            self.clear(e, c);
            if budget.exhausted() {
                return false;
            }
        }
        false
    }
}

/// Weights that make a triangle/1-factor partition of `K_n` sum to zero at
/// every vertex: `+1` on each triangle, and with `v = n - 7` factors,
/// `-3` on the single factor when `v = 1`, otherwise `-1` on `F_1..F_3`
/// and `(-1)^j` on `F_j` for `j >= 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionWeights {
    pub triangles: Vec<i64>,
    /// Weight of every edge of factor `F_{j+1}`.
    pub factors: Vec<i64>,
}

pub fn remark_decompose_weights(p: &TriangleFactorPartition) -> PartitionWeights {
    PartitionWeights { triangles: vec![1; p.triangles.len()], factors: factor_weights(p.factors.len()) }
}

/// `-3` for a single factor, else `-1, -1, -1, +1, -1, +1, ...`.
pub fn factor_weights(count: usize) -> Vec<i64> {
    if count == 1 {
        return vec![-3];
    }
    (1..=count).map(|j| if j <= 3 { -1 } else if j % 2 == 0 { 1 } else { -1 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_method() {
        let f = complete_one_factorization(4).unwrap();
        assert_eq!(f.factors().len(), 3);
        let f = complete_one_factorization(10).unwrap();
        assert_eq!(f.factors().len(), 9);
        assert!(f.factors().iter().all(|x| x.len() == 5));
        assert!(complete_one_factorization(7).is_err());
        assert!(complete_one_factorization(2).is_ok());
    }

    #[test]
    fn cyclic_bipartite() {
        for n in [1, 3, 10] {
            let f = bipartite_one_factorization(n);
            f.check().unwrap();
            assert_eq!(f.factors().len(), n);
            assert_eq!(f.factors().iter().map(Vec::len).sum::<usize>(), n * n);
        }
        assert_eq!(bipartite_one_factorization(3).factors()[1], vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn broken_factorization_rejected() {
        let mut factors = complete_one_factorization(4).unwrap().factors().to_vec();
        factors.pop();
        assert!(OneFactorization::new(GraphKind::Complete, 4, factors).is_err());
    }

    #[test]
    fn k_null_small_cases() {
        let cfg = SearchConfig::default();
        for (n, k) in [(4, 2), (8, 2), (10, 2), (14, 2), (18, 2), (22, 2), (3, 3), (4, 3), (5, 3), (6, 3), (7, 3), (9, 3), (11, 3)] {
            let w = k_null_bipartite(n, k, &cfg).unwrap();
            w.check().unwrap();
            assert_eq!(w.k(), k);
        }
    }

    #[test]
    fn k_null_refusals() {
        let cfg = SearchConfig::default();
        for (n, k) in [(6, 2), (5, 2), (2, 2), (2, 3), (4, 4)] {
            assert!(matches!(k_null_bipartite(n, k, &cfg), Err(Error::Precondition(_))), "{n} {k}");
        }
    }

    #[test]
    fn tampered_weights_fail_check() {
        let w = k_null_bipartite(4, 2, &SearchConfig::default()).unwrap();
        let mut weights = w.weights().to_vec();
        weights[0][0] = -weights[0][0];
        assert!(WeightedOneFactorization::new(w.base().clone(), weights, 2).is_err());
    }

    #[test]
    fn partition_sizes() {
        let cfg = SearchConfig::default();
        for (n, edges_in_factors) in [(8, 4), (10, 15), (12, 30), (14, 49)] {
            let p = triangle_factor_partition(n, &cfg).unwrap();
            assert_eq!(p.triangles().len(), n);
            assert_eq!(p.factors().len(), n - 7);
            assert_eq!(p.factors().iter().map(Vec::len).sum::<usize>(), edges_in_factors);
            assert_eq!(3 * n + edges_in_factors, n * (n - 1) / 2);
        }
        assert!(triangle_factor_partition(9, &cfg).is_err());
        assert!(triangle_factor_partition(6, &cfg).is_err());
    }

    #[test]
    fn remark_weights_balance_every_vertex() {
        let cfg = SearchConfig::default();
        assert_eq!(factor_weights(1), vec![-3]);
        assert_eq!(factor_weights(3), vec![-1, -1, -1]);
        assert_eq!(factor_weights(5), vec![-1, -1, -1, 1, -1]);
        for n in [8, 10, 12, 14] {
            let p = triangle_factor_partition(n, &cfg).unwrap();
            let w = remark_decompose_weights(&p);
            let mut tri = vec![0i64; n];
            let mut fac = vec![0i64; n];
            for (t, &x) in p.triangles().iter().zip(&w.triangles) {
                for &v in t {
                    tri[v] += x;
                }
            }
            for (f, &x) in p.factors().iter().zip(&w.factors) {
                for &(a, b) in f {
                    fac[a] += x;
                    fac[b] += x;
                }
            }
            assert!(tri.iter().all(|&s| s == 3));
            assert!(fac.iter().all(|&s| s == -3));
        }
    }

    #[test]
    fn partition_cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SearchConfig { budget: SearchConfig::DEFAULT_BUDGET, cache_dir: Some(dir.path().to_path_buf()) };
        let cold = triangle_factor_partition(10, &cfg).unwrap();
        assert!(dir.path().join("partition-10.json").exists());
        let warm = triangle_factor_partition(10, &cfg).unwrap();
        assert_eq!(cold, warm);
    }
}
