//! Exact search for zero-sum flows.
//!
//! Blocks get values from `±1, …, ±(k-1)` in the order `+1, -1, +2, -2, …`.
//! Blocks are ordered once up front: repeatedly take the point with the
//! fewest unordered blocks and append those blocks. A partial assignment is
//! abandoned as soon as some point's weight can no longer be brought back to
//! zero by its remaining blocks.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::design::{incidence_matrix, rational_rank, Design};
use crate::error::{Error, Result};
use crate::flow::{ensure_zero_sum, FlowAssignment};
use crate::search::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Nullity {
    pub rank: usize,
    pub nullity: usize,
}

/// Rank and nullity of the incidence matrix; nullity 0 rules out every
/// zero-sum flow.
pub fn nullity_check(d: &Design) -> Nullity {
    let rank = rational_rank(&incidence_matrix(d));
    Nullity { rank, nullity: d.b() - rank }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Feasible { flow: FlowAssignment, nodes: u64 },
    Infeasible { nodes: u64 },
}

impl SolveOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SolveOutcome::Feasible { nodes, .. } | SolveOutcome::Infeasible { nodes } => *nodes,
        }
    }

    pub fn flow(&self) -> Option<&FlowAssignment> {
        match self {
            SolveOutcome::Feasible { flow, .. } => Some(flow),
            SolveOutcome::Infeasible { .. } => None,
        }
    }
}

/// The fixed block order used by the search.
pub fn block_order(d: &Design) -> Vec<usize> {
    let point_blocks = d.point_blocks();
    let mut placed = vec![false; d.b()];
    let mut open: Vec<usize> = point_blocks.iter().map(Vec::len).collect();
    let mut order = Vec::with_capacity(d.b());
    while order.len() < d.b() {
        let p = (0..d.v()).filter(|&p| open[p] > 0).min_by_key(|&p| (open[p], p)).expect("blocks remain");
        for &j in &point_blocks[p] {
            if !placed[j] {
                placed[j] = true;
                order.push(j);
                for &q in &d.blocks()[j] {
                    open[q] -= 1;
                }
            }
        }
    }
    order
}

struct Search<'a> {
    d: &'a Design,
    order: Vec<usize>,
    candidates: Vec<i64>,
    limit: i64,
    values: Vec<i64>,
    partial: Vec<i64>,
    remaining: Vec<i64>,
    budget: Budget,
}

impl Search<'_> {
    fn run(&mut self, step: usize) -> bool {
        if step == self.order.len() {
            return true;
        }
        if !self.budget.tick() {
            return false;
        }
        let j = self.order[step];
        let block = &self.d.blocks()[j];
        for &p in block {
            self.remaining[p] -= 1;
        }
        for ci in 0..self.candidates.len() {
            let val = self.candidates[ci];
            let mut ok = true;
            for &p in block {
                self.partial[p] += val;
                ok &= self.partial[p].abs() <= self.limit * self.remaining[p];
            }
            if ok {
                self.values[j] = val;
                if self.run(step + 1) {
                    return true;
                }
            }
            for &p in block {
                self.partial[p] -= val;
            }
            if self.budget.exhausted() {
                break;
            }
        }
        for &p in block {
            self.remaining[p] += 1;
        }
        false
    }
}

/// First zero-sum flow of width at most `k` in the canonical search order.
pub fn solve_flow(d: &Design, k: u64, budget: u64) -> Result<SolveOutcome> {
    if k < 2 {
        return Err(Error::precondition(format!("flow width must be at least 2, got {k}")));
    }
    let limit = (k - 1) as i64;
    let mut search = Search {
        d,
        order: block_order(d),
        candidates: (1..=limit).flat_map(|x| [x, -x]).collect(),
        limit,
        values: vec![0; d.b()],
        partial: vec![0; d.v()],
        remaining: d.point_blocks().iter().map(|bs| bs.len() as i64).collect(),
        budget: Budget::new(budget),
    };
    let found = search.run(0);
    search.budget.check(&format!("solve_flow k={k}"))?;
    let nodes = search.budget.used;
    if !found {
        return Ok(SolveOutcome::Infeasible { nodes });
    }
    let flow = FlowAssignment::new(d, search.values)?;
    ensure_zero_sum(d, &flow, "solver witness")?;
    Ok(SolveOutcome::Feasible { flow, nodes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Feasible,
    Infeasible,
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize)]
pub struct Attempt {
    pub k: u64,
    pub verdict: Verdict,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct MinWidthReport {
    pub nullity: Nullity,
    pub attempts: Vec<Attempt>,
    /// Least feasible width, if one was found before `k_max` or the budget ran out.
    pub min_width: Option<u64>,
    pub witness: Option<FlowAssignment>,
}

impl MinWidthReport {
    pub fn budget_exceeded(&self) -> bool {
        self.attempts.iter().any(|a| a.verdict == Verdict::BudgetExceeded)
    }

    pub fn nodes(&self) -> u64 {
        self.attempts.iter().map(|a| a.nodes).sum()
    }
}

/// Tries `k = 2..=k_max` in turn. A design whose incidence matrix has full
/// column rank is reported infeasible for every `k` without searching. The
/// scan stops at the first feasible `k` or the first exhausted budget.
pub fn min_width(d: &Design, k_max: u64, budget: u64) -> Result<MinWidthReport> {
    if k_max < 2 {
        return Err(Error::precondition(format!("k_max must be at least 2, got {k_max}")));
    }
    let nullity = nullity_check(d);
    let mut report = MinWidthReport { nullity, attempts: Vec::new(), min_width: None, witness: None };
    if nullity.nullity == 0 {
        report.attempts = (2..=k_max).map(|k| Attempt { k, verdict: Verdict::Infeasible, nodes: 0 }).collect();
        return Ok(report);
    }
    for k in 2..=k_max {
        match solve_flow(d, k, budget) {
            Ok(SolveOutcome::Feasible { flow, nodes }) => {
                report.attempts.push(Attempt { k, verdict: Verdict::Feasible, nodes });
                report.min_width = Some(k);
                report.witness = Some(flow);
                break;
            }
            Ok(SolveOutcome::Infeasible { nodes }) => {
                report.attempts.push(Attempt { k, verdict: Verdict::Infeasible, nodes })
            }
            Err(Error::BudgetExceeded { nodes, .. }) => {
                report.attempts.push(Attempt { k, verdict: Verdict::BudgetExceeded, nodes });
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStatus {
    /// A flow of width at most the target was found.
    Ok,
    /// No flow up to the target width, for an STS outside the conjecture's
    /// range `v > 7`.
    OutOfScope,
    /// Exhaustively no flow up to the target width.
    CounterexampleCandidate,
    /// The budget ran out; nothing is claimed.
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub name: String,
    pub v: usize,
    pub b: usize,
    pub nullity: usize,
    pub min_width: Option<u64>,
    pub nodes: u64,
    pub millis: u128,
    pub status: ScanStatus,
}

/// Minimum widths up to `k_target` over a family of designs.
pub fn conjecture_scan(family: &[(String, Design)], k_target: u64, budget: u64) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::with_capacity(family.len());
    for (name, d) in family {
        let start = Instant::now();
        let report = min_width(d, k_target, budget)?;
        let status = if report.min_width.is_some() {
            ScanStatus::Ok
        } else if report.budget_exceeded() {
            ScanStatus::Undecided
        } else if d.is_sts() && d.v() <= 7 {
            ScanStatus::OutOfScope
        } else {
            ScanStatus::CounterexampleCandidate
        };
        rows.push(ScanRow {
            name: name.clone(),
            v: d.v(),
            b: d.b(),
            nullity: report.nullity.nullity,
            min_width: report.min_width,
            nodes: report.nodes(),
            millis: start.elapsed().as_millis(),
            status,
        });
    }
    Ok(rows)
}

pub fn scan_json_lines(rows: &[ScanRow]) -> String {
    rows.iter().map(|r| serde_json::to_string(r).expect("row serializes") + "\n").collect()
}

pub fn scan_table(rows: &[ScanRow]) -> String {
    let header = ["design", "v", "b", "nullity", "min width", "nodes", "ms", "status"];
    let cells: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.name.clone(),
                r.v.to_string(),
                r.b.to_string(),
                r.nullity.to_string(),
                r.min_width.map_or("-".to_string(), |k| k.to_string()),
                r.nodes.to_string(),
                r.millis.to_string(),
                match r.status {
                    ScanStatus::Ok => "ok".to_string(),
                    ScanStatus::OutOfScope => "no flow (v <= 7, out of scope)".to_string(),
                    ScanStatus::CounterexampleCandidate => "!!! COUNTEREXAMPLE CANDIDATE !!!".to_string(),
                    ScanStatus::Undecided => "undecided (budget)".to_string(),
                },
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |fields: Vec<&str>| {
        let padded: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec());
    for row in &cells {
        line(row.iter().map(String::as_str).collect());
    }
    out
}
