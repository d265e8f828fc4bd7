//! Block designs: canonical representation, validation and counting.
//!
//! A [`Design`] always stores its blocks sorted, and its block list sorted
//! lexicographically. The position each block had in the list handed to
//! [`Design::new`] is kept in [`Design::origin`], so tables that were written
//! in construction order can be mapped onto the canonical order.

use itertools::Itertools;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rank::bareiss_rank;

pub type Block = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    t: usize,
    v: usize,
    k: usize,
    lambda: usize,
    blocks: Vec<Block>,
    origin: Vec<usize>,
}

impl Design {
    /// Builds a design from blocks in any order.
    ///
    /// Only structural well-formedness is checked here; whether every
    /// `t`-subset is covered `lambda` times is [`validate_design`]'s job.
    pub fn new(t: usize, v: usize, k: usize, lambda: usize, blocks: Vec<Block>) -> Result<Design> {
        if t == 0 || t > k || k > v {
            return Err(Error::malformed(format!(
                "parameters t={t}, k={k}, v={v} must satisfy 1 <= t <= k <= v"
            )));
        }
        if lambda == 0 {
            return Err(Error::malformed("lambda must be positive"));
        }
        let mut keyed = Vec::with_capacity(blocks.len());
        for (idx, mut block) in blocks.into_iter().enumerate() {
            block.sort_unstable();
            if block.len() != k {
                return Err(Error::malformed(format!(
                    "block #{idx} {block:?} has {} points, expected {k}",
                    block.len()
                )));
            }
            if block.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::malformed(format!("block #{idx} {block:?} repeats a point")));
            }
            if let Some(&p) = block.last() {
                if p >= v {
                    return Err(Error::malformed(format!(
                        "block #{idx} {block:?} uses point {p} outside 0..{v}"
                    )));
                }
            }
            keyed.push((block, idx));
        }
        keyed.sort();
        if lambda == 1 {
            if let Some(w) = keyed.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::malformed(format!("duplicate block {:?}", w[0].0)));
            }
        }
        let (blocks, origin) = keyed.into_iter().unzip();
        Ok(Design { t, v, k, lambda, blocks, origin })
    }

    /// Steiner triple system on `v` points.
    pub fn sts(v: usize, blocks: Vec<Block>) -> Result<Design> {
        Design::new(2, v, 3, 1, blocks)
    }

    /// Steiner quadruple system on `v` points.
    pub fn sqs(v: usize, blocks: Vec<Block>) -> Result<Design> {
        Design::new(3, v, 4, 1, blocks)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// Number of blocks.
    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `origin()[i]` is the input position of canonical block `i`.
    pub fn origin(&self) -> &[usize] {
        &self.origin
    }

    /// Reorders values given parallel to the input block order into
    /// canonical block order.
    pub fn to_canonical_order<T: Clone>(&self, by_origin: &[T]) -> Result<Vec<T>> {
        if by_origin.len() != self.b() {
            return Err(Error::LengthMismatch { expected: self.b(), found: by_origin.len() });
        }
        Ok(self.origin.iter().map(|&o| by_origin[o].clone()).collect())
    }

    /// Canonical index of each input position (inverse of [`Design::origin`]).
    pub fn canonical_index_by_origin(&self) -> Vec<usize> {
        let mut inv = vec![0; self.b()];
        for (canon, &o) in self.origin.iter().enumerate() {
            inv[o] = canon;
        }
        inv
    }

    pub fn is_sts(&self) -> bool {
        self.t == 2 && self.k == 3 && self.lambda == 1
    }

    pub fn is_sqs(&self) -> bool {
        self.t == 3 && self.k == 4 && self.lambda == 1
    }

    /// SHA-256 over the compact JSON rendering of the canonical block list.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(&self.blocks).expect("block list serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// Indices of the blocks through each point.
    pub fn point_blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.v];
        for (j, block) in self.blocks.iter().enumerate() {
            for &p in block {
                out[p].push(j);
            }
        }
        out
    }

    /// Index of `block` (sorted) in the canonical list.
    pub fn position(&self, block: &[usize]) -> Option<usize> {
        self.blocks.binary_search_by(|b| b.as_slice().cmp(block)).ok()
    }

    /// Canonical block list with a different design's points mapped through
    /// `map`. Used by constructions that copy a design into a larger one.
    pub fn mapped_blocks<'a>(&'a self, map: impl Fn(usize) -> usize + 'a) -> impl Iterator<Item = Block> + 'a {
        self.blocks.iter().map(move |b| b.iter().map(|&p| map(p)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// The offending `t`-subset.
    pub subset: Vec<usize>,
    /// How many blocks contain it.
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    /// Lexicographically first `t`-subset not covered exactly `lambda` times.
    pub first_violation: Option<Violation>,
    pub violations: usize,
}

pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Colex rank of a sorted subset.
fn colex_rank(subset: &[usize]) -> usize {
    subset.iter().enumerate().map(|(i, &c)| binomial(c, i + 1)).sum()
}

/// Checks that every `t`-subset of points lies in exactly `lambda` blocks.
pub fn validate_design(d: &Design) -> ValidationReport {
    let t = d.t;
    let mut counts = vec![0usize; binomial(d.v, t)];
    for block in &d.blocks {
        for sub in block.iter().copied().combinations(t) {
            counts[colex_rank(&sub)] += 1;
        }
    }
    let violations = counts.iter().filter(|&&c| c != d.lambda).count();
    if violations == 0 {
        return ValidationReport { valid: true, first_violation: None, violations: 0 };
    }
    let first_violation = (0..d.v).combinations(t).find_map(|sub| {
        let count = counts[colex_rank(&sub)];
        (count != d.lambda).then_some(Violation { subset: sub, count })
    });
    ValidationReport { valid: false, first_violation, violations }
}

/// Like [`validate_design`] but as a `Result`, for callers that need a
/// valid design to continue.
pub fn ensure_valid(d: &Design, what: &str) -> Result<()> {
    let report = validate_design(d);
    match report.first_violation {
        None => Ok(()),
        Some(v) => Err(Error::Verification(format!(
            "{what} is not a {}-({},{},{}) design: subset {:?} lies in {} blocks ({} violations)",
            d.t, d.v, d.k, d.lambda, v.subset, v.count, report.violations
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl IncidenceMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, point: usize, block: usize) -> u8 {
        self.entries[point * self.cols + block]
    }

    pub fn row(&self, point: usize) -> &[u8] {
        &self.entries[point * self.cols..(point + 1) * self.cols]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&e| e as usize).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j) as usize).sum())
            .collect()
    }
}

pub fn incidence_matrix(d: &Design) -> IncidenceMatrix {
    let (rows, cols) = (d.v, d.b());
    let mut entries = vec![0u8; rows * cols];
    for (j, block) in d.blocks.iter().enumerate() {
        for &p in block {
            entries[p * cols + j] = 1;
        }
    }
    IncidenceMatrix { rows, cols, entries }
}

/// Exact rank over the rationals.
pub fn rational_rank(m: &IncidenceMatrix) -> usize {
    let rows: Vec<Vec<i64>> = (0..m.rows).map(|i| m.row(i).iter().map(|&e| e as i64).collect()).collect();
    bareiss_rank(&rows)
}

/// The design on the blocks through `x`, with `x` removed and the remaining
/// points renumbered in order.
pub fn derived_design(d: &Design, x: usize) -> Result<Design> {
    if x >= d.v {
        return Err(Error::precondition(format!("point {x} is outside 0..{}", d.v)));
    }
    if d.t < 2 {
        return Err(Error::precondition("derived designs need t >= 2"));
    }
    let blocks = d
        .blocks
        .iter()
        .filter(|b| b.contains(&x))
        .map(|b| b.iter().filter(|&&p| p != x).map(|&p| if p > x { p - 1 } else { p }).collect())
        .collect();
    Design::new(d.t - 1, d.v - 1, d.k - 1, d.lambda, blocks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesignCounts {
    pub b: usize,
    /// Blocks through a point.
    pub r: usize,
    /// Blocks through a pair of points.
    pub pair_replication: usize,
}

pub fn design_counts(d: &Design) -> Result<DesignCounts> {
    ensure_valid(d, "design")?;
    let per_point = d.point_blocks();
    let r = per_point.first().map_or(0, Vec::len);
    if per_point.iter().any(|bs| bs.len() != r) {
        return Err(Error::Verification("replication number differs between points".into()));
    }
    let pair_replication = if d.v >= 2 {
        d.blocks.iter().filter(|b| b.contains(&0) && b.contains(&1)).count()
    } else {
        0
    };
    Ok(DesignCounts { b: d.b(), r, pair_replication })
}
