//! JSON file formats: `design-v1`, `flow-v1` and `resolution-v1`.
//!
//! Designs are read in file order, so a flow or resolution file that lists
//! values or block indices parallel to its design file lines up through
//! [`Design::origin`]. Written files always use canonical block order.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cyclic::BaseBlocks;
use crate::design::Design;
use crate::error::{Error, Result};
use crate::flow::{FlowAssignment, Resolution};

pub const DESIGN_FORMAT: &str = "design-v1";
pub const FLOW_FORMAT: &str = "flow-v1";
pub const RESOLUTION_FORMAT: &str = "resolution-v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicMeta {
    pub v: usize,
    pub full: Vec<[usize; 3]>,
    pub short: bool,
}

impl CyclicMeta {
    pub fn from_base(base: &BaseBlocks) -> CyclicMeta {
        CyclicMeta { v: base.v(), full: base.full().to_vec(), short: base.has_short_orbit() }
    }

    pub fn to_base(&self) -> Result<BaseBlocks> {
        BaseBlocks::new(self.v, self.full.clone(), self.short)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DesignFile {
    format: String,
    t: usize,
    v: usize,
    k: usize,
    lambda: usize,
    blocks: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cyclic: Option<CyclicMeta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FlowFile {
    format: String,
    design_hash: String,
    values: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ResolutionFile {
    format: String,
    classes: Vec<Vec<usize>>,
}

/// A design together with the optional metadata of its file.
#[derive(Clone, Debug)]
pub struct DesignDoc {
    pub design: Design,
    /// Display label of each point.
    pub labels: Option<Vec<String>>,
    pub cyclic: Option<CyclicMeta>,
    pub provenance: Option<serde_json::Value>,
}

impl DesignDoc {
    pub fn new(design: Design) -> DesignDoc {
        DesignDoc { design, labels: None, cyclic: None, provenance: None }
    }
}

fn check_format(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::malformed(format!("expected format {expected:?}, found {found:?}")));
    }
    Ok(())
}

/// Parses a design file. Points outside `0..v` are relabeled by sorted
/// value, and the original values become the labels.
pub fn parse_design(text: &str) -> Result<DesignDoc> {
    let file: DesignFile = serde_json::from_str(text)?;
    check_format(&file.format, DESIGN_FORMAT)?;
    let v = file.v;
    let in_range = file.blocks.iter().flatten().all(|&p| p >= 0 && (p as usize) < v);
    let (blocks, labels) = if in_range {
        let blocks = file.blocks.iter().map(|b| b.iter().map(|&p| p as usize).collect()).collect();
        (blocks, file.labels)
    } else {
        let points: BTreeSet<i64> = file.blocks.iter().flatten().copied().collect();
        if points.len() != v {
            return Err(Error::malformed(format!("blocks use {} distinct points, v = {v}", points.len())));
        }
        let points: Vec<i64> = points.into_iter().collect();
        let index = |p: &i64| points.binary_search(p).expect("collected above");
        let blocks = file.blocks.iter().map(|b| b.iter().map(index).collect()).collect();
        let labels = file.labels.unwrap_or_else(|| points.iter().map(i64::to_string).collect());
        (blocks, Some(labels))
    };
    if let Some(l) = &labels {
        if l.len() != v {
            return Err(Error::malformed(format!("{} labels for {v} points", l.len())));
        }
    }
    let design = Design::new(file.t, v, file.k, file.lambda, blocks)?;
    Ok(DesignDoc { design, labels, cyclic: file.cyclic, provenance: file.provenance })
}

pub fn design_to_json(doc: &DesignDoc) -> String {
    let d = &doc.design;
    let file = DesignFile {
        format: DESIGN_FORMAT.into(),
        t: d.t(),
        v: d.v(),
        k: d.k(),
        lambda: d.lambda(),
        blocks: d.blocks().iter().map(|b| b.iter().map(|&p| p as i64).collect()).collect(),
        labels: doc.labels.clone(),
        cyclic: doc.cyclic.clone(),
        provenance: doc.provenance.clone(),
    };
    serde_json::to_string(&file).expect("design serializes") + "\n"
}

/// Parses a flow file whose values follow `design`'s input block order.
pub fn parse_flow(text: &str, design: &Design) -> Result<FlowAssignment> {
    let file: FlowFile = serde_json::from_str(text)?;
    check_format(&file.format, FLOW_FORMAT)?;
    let expected = design.digest();
    if file.design_hash != expected {
        return Err(Error::HashMismatch { expected, found: file.design_hash });
    }
    FlowAssignment::from_origin_order(design, &file.values)
}

/// Flow values in canonical block order, matching [`design_to_json`].
pub fn flow_to_json(flow: &FlowAssignment) -> String {
    let file = FlowFile {
        format: FLOW_FORMAT.into(),
        design_hash: flow.design_hash().to_string(),
        values: flow.values().to_vec(),
    };
    serde_json::to_string(&file).expect("flow serializes") + "\n"
}

/// Parses a resolution file whose block indices refer to `design`'s input
/// block order. `alpha` is read off the first class.
pub fn parse_resolution(text: &str, design: &Design) -> Result<Resolution> {
    let file: ResolutionFile = serde_json::from_str(text)?;
    check_format(&file.format, RESOLUTION_FORMAT)?;
    let canon = design.canonical_index_by_origin();
    let mut classes = Vec::with_capacity(file.classes.len());
    for class in &file.classes {
        let mut mapped = Vec::with_capacity(class.len());
        for &j in class {
            let c = *canon.get(j).ok_or_else(|| Error::malformed(format!("block index {j} out of range")))?;
            mapped.push(c);
        }
        classes.push(mapped);
    }
    let first = classes.first().map_or(0, Vec::len);
    if design.v() == 0 || (first * design.k()) % design.v() != 0 {
        return Err(Error::malformed("first class does not cover the points evenly"));
    }
    Resolution::new(design, first * design.k() / design.v(), classes)
}

pub fn resolution_to_json(res: &Resolution) -> String {
    let file = ResolutionFile { format: RESOLUTION_FORMAT.into(), classes: res.classes().to_vec() };
    serde_json::to_string(&file).expect("resolution serializes") + "\n"
}

pub fn read_design(path: &Path) -> Result<DesignDoc> {
    parse_design(&fs::read_to_string(path)?)
}

pub fn read_flow(path: &Path, design: &Design) -> Result<FlowAssignment> {
    parse_flow(&fs::read_to_string(path)?, design)
}

pub fn read_resolution(path: &Path, design: &Design) -> Result<Resolution> {
    parse_resolution(&fs::read_to_string(path)?, design)
}
