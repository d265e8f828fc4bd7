//! Recursive Steiner triple system constructions: the `vw` product and the
//! `2v + 7` doubling, with flow transfer.

use crate::design::{ensure_valid, Block, Design};
use crate::error::{Error, Result};
use crate::factorizations::{factor_weights, k_null_bipartite, triangle_factor_partition};
use crate::flow::{ensure_zero_sum, index_weight, FlowAssignment};
use crate::latin::{cyclic_square, transversal_decomposition};
use crate::search::SearchConfig;

fn require_sts(d: &Design, what: &str) -> Result<()> {
    if !d.is_sts() {
        return Err(Error::precondition(format!("{what} must be a Steiner triple system")));
    }
    ensure_valid(d, what)
}

/// STS(vw) on points `j·v + i`: `w` copies of the inner system carrying its
/// flow, and for every outer triple `{p, s, t}` the `v²` triples
/// `{(i,p), (j,s), (L(i,j),t)}` read off the cyclic Latin square, weighted by
/// the broken diagonal they lie on.
pub fn construct_product_sts(
    inner: &Design,
    inner_flow: &FlowAssignment,
    outer: &Design,
) -> Result<(Design, FlowAssignment)> {
    require_sts(inner, "inner design")?;
    require_sts(outer, "outer design")?;
    ensure_zero_sum(inner, inner_flow, "inner flow")?;
    let (v, w) = (inner.v(), outer.v());
    let square = cyclic_square(v);
    let transversals = transversal_decomposition(&square)
        .ok_or_else(|| Error::precondition(format!("the cyclic square of order {v} has no transversal decomposition")))?;

    let mut blocks: Vec<Block> = Vec::with_capacity(v * v * outer.b() + w * inner.b());
    let mut values = Vec::with_capacity(blocks.capacity());
    for j in 0..w {
        for (block, &f) in inner.blocks().iter().zip(inner_flow.values()) {
            blocks.push(block.iter().map(|&i| j * v + i).collect());
            values.push(f);
        }
    }
    for outer_block in outer.blocks() {
        let (p, s, t) = (outer_block[0], outer_block[1], outer_block[2]);
        for (c, tr) in transversals.iter().enumerate() {
            let weight = index_weight(c + 1);
            for &(i, j) in tr.cells() {
                blocks.push(vec![p * v + i, s * v + j, t * v + square.get(i, j)]);
                values.push(weight);
            }
        }
    }
    let design = Design::sts(v * w, blocks)?;
    let flow = FlowAssignment::from_origin_order(&design, &values)?;
    Ok((design, flow))
}

fn require_odd_inner(inner: &Design) -> Result<()> {
    require_sts(inner, "inner design")?;
    if inner.v() % 2 == 0 {
        return Err(Error::precondition(format!("the 2v+7 construction needs odd v, got {}", inner.v())));
    }
    Ok(())
}

/// STS(2v+7): the inner system, the triangles of a partition of `K_{v+7}`
/// on the new points, and inner point `x_i` joined to every edge of the
/// `i`-th 1-factor. New points follow the inner ones.
pub fn construct_plain_2v7(inner: &Design, cfg: &SearchConfig) -> Result<Design> {
    require_odd_inner(inner)?;
    let v = inner.v();
    let partition = triangle_factor_partition(v + 7, cfg)?;
    let mut blocks: Vec<Block> = inner.blocks().to_vec();
    blocks.extend(partition.triangles().iter().map(|tri| tri.iter().map(|&a| v + a).collect()));
    for (x, factor) in partition.factors().iter().enumerate() {
        blocks.extend(factor.iter().map(|&(a, b)| vec![x, v + a, v + b]));
    }
    Design::sts(2 * v + 7, blocks)
}

/// STS(2v+7) with a flow of width `max(k, 2)` from an STS(v) flow of width `k`,
/// for `v ≡ 1 (mod 4)`, `v > 9`.
///
/// With `t = (v - 7) / 2` the new points split into halves `K` and `K'` of
/// `t + 7` points, each partitioned into triangles and `t` 1-factors
/// `M_1..M_t`. `K`'s triangles get `+1`, `K'`'s get `-1`; `x_i` (`i <= t`) is
/// joined to `M_i` on both sides with opposite weights. The edges between the
/// halves carry a 2-null 1-factorization of `K_{t+7,t+7}` whose factor `F_i`
/// is joined to `x_{t+i}`.
///
/// Point layout: inner points, then `K`, then `K'`.
pub fn construct_double_plus7_with_flow(
    inner: &Design,
    inner_flow: &FlowAssignment,
    cfg: &SearchConfig,
) -> Result<(Design, FlowAssignment)> {
    let v = inner.v();
    if v % 4 != 1 || v <= 9 {
        return Err(Error::precondition(format!(
            "Theorem 2.6 requires v ≡ 1 (mod 4), v > 9 (got v = {v}); \
             at v = 9 each half keeps a single factor, which needs weight -3"
        )));
    }
    require_odd_inner(inner)?;
    ensure_zero_sum(inner, inner_flow, "inner flow")?;
    let t = (v - 7) / 2;
    let half = t + 7;
    let partition = triangle_factor_partition(half, cfg)?;
    let bipartite = k_null_bipartite(half, 2, cfg)?;
    let m_weights = factor_weights(t);
    let (k_base, k_prime_base) = (v, v + half);

    let mut blocks: Vec<Block> = inner.blocks().to_vec();
    let mut values: Vec<i64> = inner_flow.values().to_vec();
    for (base, sign) in [(k_base, 1), (k_prime_base, -1)] {
        for tri in partition.triangles() {
            blocks.push(tri.iter().map(|&a| base + a).collect());
            values.push(sign);
        }
    }
    for (base, sign) in [(k_base, 1), (k_prime_base, -1)] {
        for (i, factor) in partition.factors().iter().enumerate() {
            for &(a, b) in factor {
                blocks.push(vec![i, base + a, base + b]);
                values.push(sign * m_weights[i]);
            }
        }
    }
    for i in 0..half {
        for ((a, b), w) in bipartite.factor(i) {
            blocks.push(vec![t + i, k_base + a, k_prime_base + b]);
            values.push(w);
        }
    }
    let design = Design::sts(2 * v + 7, blocks)?;
    let flow = FlowAssignment::from_origin_order(&design, &values)?;
    Ok((design, flow))
}
