//! Cyclic Steiner triple systems on `Z_v`.
//!
//! A cyclic STS(v) is determined by its base blocks: one triple per full
//! orbit under `x -> x + 1`, plus the short orbit of `{0, v/3, 2v/3}` when
//! `v ≡ 3 (mod 6)`. Base blocks come from a difference-family search, and
//! flows are assigned orbit by orbit.

use std::fmt;

use crate::design::{ensure_valid, Design};
use crate::error::{Error, Result};
use crate::flow::{ensure_zero_sum, flow_width, FlowAssignment};

pub type Triple = [usize; 3];

/// Difference class `min(d, v - d)` of a nonzero difference.
fn class(d: usize, v: usize) -> usize {
    d.min(v - d)
}

fn classes(block: &Triple, v: usize) -> [usize; 3] {
    let [a, b, c] = *block;
    [class((b + v - a) % v, v), class((c + v - b) % v, v), class((c + v - a) % v, v)]
}

/// Lexicographically least translate of `block` that contains 0.
pub fn normalize(block: &Triple, v: usize) -> Triple {
    block
        .iter()
        .map(|&z| {
            let mut t = block.map(|p| (p + v - z) % v);
            t.sort_unstable();
            t
        })
        .min()
        .expect("three translates")
}

pub fn admissible(v: usize) -> bool {
    v % 6 == 1 || v % 6 == 3
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseBlocks {
    v: usize,
    full: Vec<Triple>,
    short: bool,
}

impl BaseBlocks {
    /// Checks that the full base blocks, together with the short orbit when
    /// `v ≡ 3 (mod 6)`, cover every difference class exactly once.
    pub fn new(v: usize, full: Vec<Triple>, short: bool) -> Result<BaseBlocks> {
        if !admissible(v) || v < 3 {
            return Err(Error::precondition(format!("no STS({v}) exists: v must be 1 or 3 mod 6")));
        }
        if short != (v % 6 == 3) {
            return Err(Error::malformed(format!("a short orbit is present iff v ≡ 3 (mod 6), v = {v}")));
        }
        let expected = if short { (v - 3) / 6 } else { (v - 1) / 6 };
        if full.len() != expected {
            return Err(Error::malformed(format!("STS({v}) needs {expected} full base blocks, got {}", full.len())));
        }
        let mut owner: Vec<Option<String>> = vec![None; v / 2 + 1];
        if short {
            owner[v / 3] = Some("the short orbit".into());
        }
        let mut full_sorted = Vec::with_capacity(full.len());
        for block in full {
            let mut b = block;
            b.sort_unstable();
            if b[2] >= v || b[0] == b[1] || b[1] == b[2] {
                return Err(Error::malformed(format!("{block:?} is not a triple of Z_{v}")));
            }
            for d in classes(&b, v) {
                if let Some(prev) = &owner[d] {
                    return Err(Error::malformed(format!(
                        "difference ±{d} occurs in both {prev} and base block {b:?}"
                    )));
                }
                owner[d] = Some(format!("base block {b:?}"));
            }
            full_sorted.push(b);
        }
        full_sorted.sort_unstable();
        Ok(BaseBlocks { v, full: full_sorted, short })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Full base blocks in lexicographic order; orbit `i` is generated by
    /// `full()[i]`.
    pub fn full(&self) -> &[Triple] {
        &self.full
    }

    pub fn has_short_orbit(&self) -> bool {
        self.short
    }
}

/// Lexicographically least difference family for a cyclic STS(v).
///
/// The smallest uncovered difference class `d` must be the smallest class
/// of the next base block, whose least translate through 0 is then
/// `{0, d, c}`; candidates are tried in increasing `c`, so the first family
/// found is the least one.
pub fn find_base_blocks(v: usize) -> Result<BaseBlocks> {
    if v == 9 {
        return Err(Error::precondition("there is no cyclic STS(9)"));
    }
    if !admissible(v) || v < 3 {
        return Err(Error::precondition(format!("no STS({v}) exists: v must be 1 or 3 mod 6")));
    }
    let short = v % 6 == 3;
    let mut covered = vec![false; v / 2 + 1];
    covered[0] = true;
    if short {
        covered[v / 3] = true;
    }
    let mut chosen = Vec::new();
    if !extend_family(v, &mut covered, &mut chosen) {
        return Err(Error::Verification(format!("no cyclic difference family found for v = {v}")));
    }
    BaseBlocks::new(v, chosen, short)
}

/// Every difference family for a cyclic STS(v), in lexicographic order,
/// stopping after `limit` families.
pub fn difference_families(v: usize, limit: usize) -> Result<Vec<BaseBlocks>> {
    if !admissible(v) || v < 3 {
        return Err(Error::precondition(format!("no STS({v}) exists: v must be 1 or 3 mod 6")));
    }
    let short = v % 6 == 3;
    let mut covered = vec![false; v / 2 + 1];
    covered[0] = true;
    if short {
        covered[v / 3] = true;
    }
    let mut out = Vec::new();
    walk_families(v, &mut covered, &mut Vec::new(), &mut |family| {
        out.push(family.to_vec());
        out.len() < limit
    });
    out.into_iter().map(|full| BaseBlocks::new(v, full, short)).collect()
}

fn extend_family(v: usize, covered: &mut [bool], chosen: &mut Vec<Triple>) -> bool {
    let mut first = None;
    walk_families(v, covered, &mut Vec::new(), &mut |family| {
        first = Some(family.to_vec());
        false
    });
    match first {
        Some(family) => {
            *chosen = family;
            true
        }
        None => false,
    }
}

/// Calls `found` on each complete family; stops when it returns false.
/// Returns false once stopped.
fn walk_families(
    v: usize,
    covered: &mut [bool],
    chosen: &mut Vec<Triple>,
    found: &mut dyn FnMut(&[Triple]) -> bool,
) -> bool {
    let Some(d) = covered.iter().position(|c| !c) else {
        return found(chosen);
    };
    for c in d + 1..v {
        let block = [0, d, c];
        if normalize(&block, v) != block {
            continue;
        }
        let cls = classes(&block, v);
        if cls[0] == cls[1] || cls[1] == cls[2] || cls[0] == cls[2] || cls.iter().any(|&x| covered[x]) {
            continue;
        }
        for &x in &cls {
            covered[x] = true;
        }
        chosen.push(block);
        let go_on = walk_families(v, covered, chosen, found);
        chosen.pop();
        for &x in &cls {
            covered[x] = false;
        }
        if !go_on {
            return false;
        }
    }
    true
}

/// Number of residue classes mod 3 met by the blocks of an orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrbitType {
    Type1 = 1,
    Type2 = 2,
    Type3 = 3,
}

impl fmt::Display for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Type{}", *self as u8)
    }
}

pub fn classify_orbit(block: &Triple, _v: usize) -> OrbitType {
    let mut residues = block.map(|p| p % 3);
    residues.sort_unstable();
    let distinct = 1 + residues.windows(2).filter(|w| w[0] != w[1]).count();
    match distinct {
        1 => OrbitType::Type1,
        2 => OrbitType::Type2,
        _ => OrbitType::Type3,
    }
}

#[derive(Clone, Debug)]
pub struct CyclicSTS {
    base: BaseBlocks,
    design: Design,
    orbit_of_block: Vec<usize>,
    shift_of_block: Vec<usize>,
    orbit_types: Option<Vec<OrbitType>>,
}

impl CyclicSTS {
    pub fn base(&self) -> &BaseBlocks {
        &self.base
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    /// Orbit index of each canonical block; full orbits come first, the
    /// short orbit (if any) is last.
    pub fn orbit_of_block(&self) -> &[usize] {
        &self.orbit_of_block
    }

    /// How far each canonical block is shifted from its base block.
    pub fn shift_of_block(&self) -> &[usize] {
        &self.shift_of_block
    }

    /// Orbit Types (full orbits, then short), defined when `3 | v`.
    pub fn orbit_types(&self) -> Option<&[OrbitType]> {
        self.orbit_types.as_deref()
    }

    pub fn short_orbit_index(&self) -> Option<usize> {
        self.base.short.then_some(self.base.full.len())
    }

    pub fn orbit_count(&self) -> usize {
        self.base.full.len() + usize::from(self.base.short)
    }
}

/// Develops the base blocks into the full design. Blocks are generated orbit
/// by orbit and shift by shift; that order is the design's input order.
pub fn expand_orbits(base: &BaseBlocks) -> Result<CyclicSTS> {
    let v = base.v;
    let mut generators: Vec<(Triple, usize)> = base.full.iter().map(|&b| (b, v)).collect();
    if base.short {
        generators.push(([0, v / 3, 2 * v / 3], v / 3));
    }
    let mut blocks = Vec::new();
    let mut orbit = Vec::new();
    let mut shift = Vec::new();
    for (o, &(b, len)) in generators.iter().enumerate() {
        for s in 0..len {
            blocks.push(b.iter().map(|&p| (p + s) % v).collect());
            orbit.push(o);
            shift.push(s);
        }
    }
    let design = Design::sts(v, blocks)?;
    ensure_valid(&design, &format!("cyclic STS({v})"))?;
    let orbit_of_block = design.to_canonical_order(&orbit)?;
    let shift_of_block = design.to_canonical_order(&shift)?;
    let orbit_types = (v % 3 == 0).then(|| generators.iter().map(|(b, _)| classify_orbit(b, v)).collect());
    Ok(CyclicSTS { base: base.clone(), design, orbit_of_block, shift_of_block, orbit_types })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCensus {
    /// Full orbits of Type 1, 2 and 3.
    pub full: [usize; 3],
    pub short: Option<OrbitType>,
}

impl fmt::Display for OrbitCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .full
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, n)| format!("Type{}×{n}", i + 1))
            .collect();
        write!(f, "full: {}", if parts.is_empty() { "none".to_string() } else { parts.join(", ") })?;
        if let Some(t) = self.short {
            write!(f, "; short: {t}")?;
        }
        Ok(())
    }
}

pub fn orbit_census(c: &CyclicSTS) -> Result<OrbitCensus> {
    let types = c.orbit_types().ok_or_else(|| {
        Error::precondition(format!("classification requires v ≡ 3 (mod 6), got v = {}", c.base.v))
    })?;
    let mut full = [0; 3];
    for t in &types[..c.base.full.len()] {
        full[*t as usize - 1] += 1;
    }
    Ok(OrbitCensus { full, short: c.short_orbit_index().map(|i| types[i]) })
}

/// Whether the translates `block + 3i`, `0 <= i < v/3`, contain every point
/// of `Z_v` exactly once.
pub fn stride_three_translates_partition(block: &Triple, v: usize) -> bool {
    if v % 3 != 0 {
        return false;
    }
    let mut hits = vec![0u8; v];
    for i in 0..v / 3 {
        for &p in block {
            hits[(p + 3 * i) % v] += 1;
        }
    }
    hits.iter().all(|&h| h == 1)
}

/// Which orbit-weighting rule produced a cyclic flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicScheme {
    /// `v ≡ 1 (mod 6)`: one constant per full orbit, constants summing to 0.
    OrbitConstants,
    /// A Type-3 full orbit weighted `-1, +1, +1, ...` by shift.
    TypeThreeOrbit,
    /// Short orbit `-3`, full orbits `2 or 1, -1, +1, ...`.
    ShortOrbitMinusThree,
}

#[derive(Clone, Debug)]
pub struct CyclicFlow {
    pub flow: FlowAssignment,
    pub width: u64,
    pub scheme: CyclicScheme,
}

/// Orbit constants summing to zero: alternating `±1` for an even count,
/// `2, -1, -1` followed by alternating `±1` for an odd one.
fn zero_sum_constants(m: usize) -> Vec<i64> {
    if m % 2 == 0 {
        (0..m).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect()
    } else {
        let mut c = vec![2, -1, -1];
        c.extend((3..m).map(|i| if i % 2 == 1 { 1 } else { -1 }));
        c
    }
}

/// Zero-sum flow on a cyclic STS(v), `v > 7`.
///
/// Every full orbit meets each point three times and the short orbit meets
/// it once, so orbit-constant weights only need `3·Σ full + short = 0`. A
/// Type-3 orbit weighted `-1, +1, +1` by shift mod 3 meets each point once
/// in every shift class and so contributes exactly `+1`.
pub fn assign_flow_cyclic(c: &CyclicSTS) -> Result<CyclicFlow> {
    let v = c.base.v;
    if v == 7 {
        return Err(Error::precondition(
            "STS(7) has no zero-sum flow: its incidence matrix has full rank",
        ));
    }
    if v < 7 {
        return Err(Error::precondition(format!("STS({v}) has no zero-sum flow")));
    }
    let m = c.base.full.len();
    let mut orbit_value: Vec<i64> = vec![0; c.orbit_count()];
    let mut special: Option<usize> = None;
    let scheme = if v % 6 == 1 {
        orbit_value.copy_from_slice(&zero_sum_constants(m));
        CyclicScheme::OrbitConstants
    } else {
        let types = c.orbit_types().expect("3 divides v");
        let short = c.short_orbit_index().expect("v ≡ 3 (mod 6)");
        if let Some(t3) = types[..m].iter().position(|&t| t == OrbitType::Type3) {
            special = Some(t3);
            let others = (0..m).filter(|&o| o != t3);
            for (i, o) in (2..).zip(others) {
                orbit_value[o] = if i % 2 == 0 { -1 } else { 1 };
            }
            orbit_value[short] = if m % 2 == 1 { -1 } else { 2 };
            CyclicScheme::TypeThreeOrbit
        } else {
            orbit_value[short] = -3;
            orbit_value[0] = if m % 2 == 0 { 2 } else { 1 };
            for (i, o) in (1..m).enumerate() {
                orbit_value[o] = if i % 2 == 0 { -1 } else { 1 };
            }
            CyclicScheme::ShortOrbitMinusThree
        }
    };
    let values = c
        .orbit_of_block
        .iter()
        .zip(&c.shift_of_block)
        .map(|(&o, &s)| {
            if Some(o) == special {
                if s % 3 == 0 {
                    -1
                } else {
                    1
                }
            } else {
                orbit_value[o]
            }
        })
        .collect();
    let flow = FlowAssignment::new(&c.design, values)?;
    ensure_zero_sum(&c.design, &flow, &format!("cyclic STS({v}) flow"))?;
    Ok(CyclicFlow { width: flow_width(&flow), flow, scheme })
}
