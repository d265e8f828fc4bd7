//! Zero-sum flows on the blocks of a design.
//!
//! A flow assigns a nonzero integer to every block. It is a zero-sum flow
//! when the values of the blocks through each point add up to zero, and its
//! width is `max |value| + 1`, so a zero-sum flow of width `n` is exactly a
//! zero-sum `n`-flow.

use crate::design::Design;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowAssignment {
    values: Vec<i64>,
    design_hash: String,
}

impl FlowAssignment {
    /// Binds values given in canonical block order to `design`.
    pub fn new(design: &Design, values: Vec<i64>) -> Result<FlowAssignment> {
        FlowAssignment::with_hash(design.digest(), design.b(), values)
    }

    /// Binds values given in the design's input block order.
    pub fn from_origin_order(design: &Design, values: &[i64]) -> Result<FlowAssignment> {
        FlowAssignment::new(design, design.to_canonical_order(values)?)
    }

    pub(crate) fn with_hash(design_hash: String, blocks: usize, values: Vec<i64>) -> Result<FlowAssignment> {
        if values.len() != blocks {
            return Err(Error::LengthMismatch { expected: blocks, found: values.len() });
        }
        if let Some(j) = values.iter().position(|&x| x == 0) {
            return Err(Error::malformed(format!("flow value for block {j} is zero")));
        }
        Ok(FlowAssignment { values, design_hash })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn design_hash(&self) -> &str {
        &self.design_hash
    }

    pub fn negated(&self) -> FlowAssignment {
        FlowAssignment { values: self.values.iter().map(|x| -x).collect(), design_hash: self.design_hash.clone() }
    }

    /// Values in the design's input block order.
    pub fn in_origin_order(&self, design: &Design) -> Result<Vec<i64>> {
        self.check_bound(design)?;
        let mut out = vec![0; self.values.len()];
        for (canon, &o) in design.origin().iter().enumerate() {
            out[o] = self.values[canon];
        }
        Ok(out)
    }

    fn check_bound(&self, design: &Design) -> Result<()> {
        if self.values.len() != design.b() {
            return Err(Error::LengthMismatch { expected: design.b(), found: self.values.len() });
        }
        let expected = design.digest();
        if self.design_hash != expected {
            return Err(Error::HashMismatch { expected, found: self.design_hash.clone() });
        }
        Ok(())
    }
}

pub fn point_weight(d: &Design, f: &FlowAssignment, x: usize) -> Result<i64> {
    f.check_bound(d)?;
    if x >= d.v() {
        return Err(Error::precondition(format!("point {x} is outside 0..{}", d.v())));
    }
    Ok(d.blocks().iter().zip(&f.values).filter(|(b, _)| b.contains(&x)).map(|(_, &w)| w).sum())
}

/// All point weights at once.
pub fn point_weights(d: &Design, f: &FlowAssignment) -> Result<Vec<i64>> {
    f.check_bound(d)?;
    let mut w = vec![0i64; d.v()];
    for (block, &value) in d.blocks().iter().zip(&f.values) {
        for &p in block {
            w[p] += value;
        }
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSumReport {
    pub ok: bool,
    /// Points whose weight is not zero, with that weight.
    pub nonzero_points: Vec<(usize, i64)>,
}

pub fn verify_zero_sum(d: &Design, f: &FlowAssignment) -> Result<ZeroSumReport> {
    let nonzero_points: Vec<(usize, i64)> =
        point_weights(d, f)?.into_iter().enumerate().filter(|&(_, w)| w != 0).collect();
    Ok(ZeroSumReport { ok: nonzero_points.is_empty(), nonzero_points })
}

/// Verifies and turns failure into an error.
pub fn ensure_zero_sum(d: &Design, f: &FlowAssignment, what: &str) -> Result<()> {
    let report = verify_zero_sum(d, f)?;
    if report.ok {
        Ok(())
    } else {
        let shown: Vec<_> = report.nonzero_points.iter().take(8).collect();
        Err(Error::Verification(format!(
            "{what}: {} points have nonzero weight, e.g. {shown:?}",
            report.nonzero_points.len()
        )))
    }
}

/// Smallest `n` with every `|value| <= n - 1`. An empty flow has width 1.
pub fn flow_width(f: &FlowAssignment) -> u64 {
    f.values.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) + 1
}

/// A partition of the blocks into classes with every point in exactly
/// `alpha` blocks of each class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    alpha: usize,
    classes: Vec<Vec<usize>>,
}

impl Resolution {
    pub fn new(d: &Design, alpha: usize, classes: Vec<Vec<usize>>) -> Result<Resolution> {
        let mut seen = vec![false; d.b()];
        for class in &classes {
            for &j in class {
                if j >= d.b() || std::mem::replace(&mut seen[j], true) {
                    return Err(Error::malformed(format!("block index {j} is out of range or repeated")));
                }
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::malformed(format!("block {j} is in no class")));
        }
        for (c, class) in classes.iter().enumerate() {
            let mut count = vec![0usize; d.v()];
            for &j in class {
                for &p in &d.blocks()[j] {
                    count[p] += 1;
                }
            }
            if let Some(p) = count.iter().position(|&n| n != alpha) {
                return Err(Error::malformed(format!(
                    "point {p} lies in {} blocks of class {c}, expected {alpha}",
                    count[p]
                )));
            }
        }
        Ok(Resolution { alpha, classes })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn rho(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }
}

/// Weight of the `i`-th (1-based) member of a family whose members meet
/// every point equally often: `+2, -1, -1`, then `(-1)^i`. Sums to zero over
/// any odd number `>= 3` of members.
pub fn index_weight(i: usize) -> i64 {
    match i {
        1 => 2,
        2 | 3 => -1,
        _ if i % 2 == 0 => 1,
        _ => -1,
    }
}

/// True when some point lies in an odd number of blocks, which rules out a
/// zero-sum 2-flow.
pub fn odd_replication_obstruction(d: &Design) -> bool {
    d.point_blocks().iter().any(|bs| bs.len() % 2 == 1)
}

/// Splits a zero-sum 2-flow into its `+1` and `-1` blocks.
pub fn two_flow_to_resolution(d: &Design, f: &FlowAssignment) -> Result<Resolution> {
    ensure_zero_sum(d, f, "two_flow_to_resolution")?;
    if flow_width(f) > 2 {
        return Err(Error::precondition(format!("flow has width {}, not 2", flow_width(f))));
    }
    let (plus, minus): (Vec<usize>, Vec<usize>) = (0..d.b()).partition(|&j| f.values[j] > 0);
    let r = d.point_blocks().first().map_or(0, Vec::len);
    Resolution::new(d, r / 2, vec![plus, minus])
}

/// `+1` on the first half of the classes, `-1` on the rest.
pub fn resolution_to_two_flow(d: &Design, res: &Resolution) -> Result<FlowAssignment> {
    if res.rho() % 2 == 1 {
        return Err(Error::precondition(format!("resolution has an odd number ({}) of classes", res.rho())));
    }
    let mut values = vec![0i64; d.b()];
    for (c, class) in res.classes.iter().enumerate() {
        let sign = if c < res.rho() / 2 { 1 } else { -1 };
        for &j in class {
            values[j] = sign;
        }
    }
    FlowAssignment::new(d, values)
}
