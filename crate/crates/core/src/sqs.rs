//! Steiner quadruple systems: the two small built-in systems with their
//! flows, doubling and product constructions, and flows on 2-partitionable
//! systems.

use crate::design::{derived_design, ensure_valid, Block, Design};
use crate::error::{Error, Result};
use crate::factorizations::complete_one_factorization;
use crate::flow::{ensure_zero_sum, index_weight, FlowAssignment};
use crate::io::{parse_design, parse_flow, DesignDoc};

const SQS8_DESIGN: &str = include_str!("../fixtures/sqs8.design.json");
const SQS8_FLOW: &str = include_str!("../fixtures/sqs8.flow.json");
const SQS10_DESIGN: &str = include_str!("../fixtures/sqs10.design.json");
const SQS10_FLOW: &str = include_str!("../fixtures/sqs10.flow.json");

/// The unique SQS(8) or SQS(10) with its tabulated flow (width 3 and 2).
/// Point labels of the table are kept in the document.
pub fn builtin_sqs(n: usize) -> Result<(DesignDoc, FlowAssignment)> {
    let (design, flow) = match n {
        8 => (SQS8_DESIGN, SQS8_FLOW),
        10 => (SQS10_DESIGN, SQS10_FLOW),
        _ => return Err(Error::precondition(format!("built-in SQS exist for n = 8 and 10 only, got {n}"))),
    };
    let doc = parse_design(design)?;
    let flow = parse_flow(flow, &doc.design)?;
    Ok((doc, flow))
}

pub fn sqs_admissible(v: usize) -> bool {
    v % 6 == 2 || v % 6 == 4
}

fn require_sqs(d: &Design, what: &str) -> Result<()> {
    if !d.is_sqs() {
        return Err(Error::precondition(format!("{what} must be a Steiner quadruple system")));
    }
    ensure_valid(d, what)
}

/// `⟨a, b, c⟩`: the fourth point of the block through distinct `a, b, c`;
/// if two arguments coincide, the remaining one.
#[derive(Clone, Debug)]
pub struct TernaryOp {
    v: usize,
    table: Vec<usize>,
}

impl TernaryOp {
    pub fn new(q: &Design) -> Result<TernaryOp> {
        if !q.is_sqs() {
            return Err(Error::precondition("the ternary operation needs a Steiner quadruple system"));
        }
        let v = q.v();
        let mut table = vec![usize::MAX; v * v * v];
        for block in q.blocks() {
            for (i, &d) in block.iter().enumerate() {
                let rest: Vec<usize> = block.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &p)| p).collect();
                let (a, b, c) = (rest[0], rest[1], rest[2]);
                for (x, y, z) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                    let slot = &mut table[(x * v + y) * v + z];
                    if *slot != usize::MAX {
                        return Err(Error::Verification(format!("triple {{{a},{b},{c}}} lies in two blocks")));
                    }
                    *slot = d;
                }
            }
        }
        let missing = (0..v * v * v).find(|&i| {
            let (x, y, z) = (i / (v * v), i / v % v, i % v);
            x != y && y != z && x != z && table[i] == usize::MAX
        });
        if let Some(i) = missing {
            return Err(Error::Verification(format!(
                "triple {{{},{},{}}} lies in no block",
                i / (v * v),
                i / v % v,
                i % v
            )));
        }
        Ok(TernaryOp { v, table })
    }

    pub fn apply(&self, a: usize, b: usize, c: usize) -> usize {
        if a == b {
            c
        } else if a == c {
            b
        } else if b == c {
            a
        } else {
            self.table[(a * self.v + b) * self.v + c]
        }
    }
}

pub fn ternary(op: &TernaryOp, a: usize, b: usize, c: usize) -> usize {
    op.apply(a, b, c)
}

fn check_inputs(a: &Design, fa: &FlowAssignment, b: &Design, fb: &FlowAssignment) -> Result<()> {
    require_sqs(a, "first SQS")?;
    require_sqs(b, "second SQS")?;
    ensure_zero_sum(a, fa, "first flow")?;
    ensure_zero_sum(b, fb, "second flow")?;
    for d in [a, b] {
        if d.v() < 8 || !sqs_admissible(d.v()) {
            return Err(Error::precondition(format!(
                "needs SQS orders v ≡ 2 or 4 (mod 6), v >= 8, got {}",
                d.v()
            )));
        }
    }
    Ok(())
}

/// SQS(2v) from two SQS(v) with flows. Both copies keep their flows; the
/// blocks `{a, b, c', d'}` with `{a,b}` and `{c,d}` in the `i`-th 1-factor
/// of `K_v` take weight `2, -1, -1, (-1)^i` by factor index.
pub fn construct_sqs_double(
    a: &Design,
    fa: &FlowAssignment,
    b: &Design,
    fb: &FlowAssignment,
) -> Result<(Design, FlowAssignment)> {
    check_inputs(a, fa, b, fb)?;
    let v = a.v();
    if b.v() != v {
        return Err(Error::precondition(format!("doubling needs two SQS of the same order, got {v} and {}", b.v())));
    }
    let factors = complete_one_factorization(v)?;
    let mut blocks: Vec<Block> = a.blocks().to_vec();
    let mut values: Vec<i64> = fa.values().to_vec();
    blocks.extend(b.mapped_blocks(|p| v + p));
    values.extend_from_slice(fb.values());
    for (i, factor) in factors.factors().iter().enumerate() {
        let w = index_weight(i + 1);
        for &(p, q) in factor {
            for &(r, s) in factor {
                blocks.push(vec![p, q, v + r, v + s]);
                values.push(w);
            }
        }
    }
    let design = Design::sqs(2 * v, blocks)?;
    let flow = FlowAssignment::from_origin_order(&design, &values)?;
    Ok((design, flow))
}

/// SQS(uv) on points `(a, y_j) = j·u + a`.
///
/// 1. `v` copies of `A`, keeping `A`'s flow;
/// 2. for layers `i < j` and each 1-factor `F_m` of `K_u`, the blocks
///    `{(a,y_i), (b,y_i), (c,y_j), (d,y_j)}` with `{a,b}, {c,d}` in `F_m`,
///    weighted `2, -1, -1, (-1)^m` by factor index;
/// 3. for each block `{y_i, y_j, y_t, y_s}` of `B` (`i<j<t<s`) and all
///    `a, b, c`, the block `{(a,y_i), (b,y_j), (c,y_t), (⟨a,b,c⟩,y_s)}`,
///    weighted like the `B`-block.
pub fn construct_sqs_product(
    a: &Design,
    fa: &FlowAssignment,
    b: &Design,
    fb: &FlowAssignment,
) -> Result<(Design, FlowAssignment)> {
    check_inputs(a, fa, b, fb)?;
    let (u, v) = (a.v(), b.v());
    let op = TernaryOp::new(a)?;
    let factors = complete_one_factorization(u)?;
    let at = |point: usize, layer: usize| layer * u + point;

    let mut blocks: Vec<Block> = Vec::with_capacity(u * v * (u * v - 1) * (u * v - 2) / 24);
    let mut values = Vec::with_capacity(blocks.capacity());
    for j in 0..v {
        blocks.extend(a.mapped_blocks(|p| at(p, j)));
        values.extend_from_slice(fa.values());
    }
    for i in 0..v {
        for j in i + 1..v {
            for (m, factor) in factors.factors().iter().enumerate() {
                let w = index_weight(m + 1);
                for &(p, q) in factor {
                    for &(r, s) in factor {
                        blocks.push(vec![at(p, i), at(q, i), at(r, j), at(s, j)]);
                        values.push(w);
                    }
                }
            }
        }
    }
    for (block, &w) in b.blocks().iter().zip(fb.values()) {
        let (i, j, t, s) = (block[0], block[1], block[2], block[3]);
        for x in 0..u {
            for y in 0..u {
                for z in 0..u {
                    blocks.push(vec![at(x, i), at(y, j), at(z, t), at(op.apply(x, y, z), s)]);
                    values.push(w);
                }
            }
        }
    }
    let design = Design::sqs(u * v, blocks)?;
    let flow = FlowAssignment::from_origin_order(&design, &values)?;
    Ok((design, flow))
}

/// Flow on a 2-partitionable SQS and the flow it induces on a derived STS.
#[derive(Clone, Debug)]
pub struct TwoResolvableFlow {
    pub flow: FlowAssignment,
    pub class_weights: Vec<i64>,
    pub derived: Design,
    pub derived_flow: FlowAssignment,
}

/// Checks that `classes` partitions the blocks of `q` into `(v-2)/2`
/// classes that are each a 2-(v,4,1) design.
pub fn check_two_partition(q: &Design, classes: &[Vec<usize>]) -> Result<()> {
    let v = q.v();
    if classes.len() != (v - 2) / 2 {
        return Err(Error::malformed(format!("SQS({v}) splits into {} classes, got {}", (v - 2) / 2, classes.len())));
    }
    let mut seen = vec![false; q.b()];
    for (c, class) in classes.iter().enumerate() {
        let mut blocks = Vec::with_capacity(class.len());
        for &j in class {
            if j >= q.b() || std::mem::replace(&mut seen[j], true) {
                return Err(Error::malformed(format!("block index {j} out of range or repeated")));
            }
            blocks.push(q.blocks()[j].clone());
        }
        let s = Design::new(2, v, 4, 1, blocks)?;
        ensure_valid(&s, &format!("class {c} as an S(2,4,{v})"))?;
    }
    if let Some(j) = seen.iter().position(|s| !s) {
        return Err(Error::malformed(format!("block {j} is in no class")));
    }
    Ok(())
}

/// Weights the classes `2, -1, -1, +1, -1, ...`; each pair `{x, y}` lies in
/// exactly one block of every class, so the derived STS at `x` inherits a
/// zero-sum flow as well.
pub fn assign_flow_2resolvable(q: &Design, classes: &[Vec<usize>], x: usize) -> Result<TwoResolvableFlow> {
    require_sqs(q, "SQS")?;
    let v = q.v();
    if v % 12 != 4 {
        return Err(Error::precondition(format!("a 2-partitionable SQS(v) needs v ≡ 4 (mod 12), got {v}")));
    }
    check_two_partition(q, classes)?;
    let class_weights: Vec<i64> = (1..=classes.len()).map(index_weight).collect();
    let mut values = vec![0; q.b()];
    for (class, &w) in classes.iter().zip(&class_weights) {
        for &j in class {
            values[j] = w;
        }
    }
    let flow = FlowAssignment::new(q, values)?;
    let derived = derived_design(q, x)?;
    let through_x: Vec<i64> =
        q.blocks().iter().zip(flow.values()).filter(|(b, _)| b.contains(&x)).map(|(_, &w)| w).collect();
    let derived_flow = FlowAssignment::from_origin_order(&derived, &through_x)?;
    Ok(TwoResolvableFlow { flow, class_weights, derived, derived_flow })
}
