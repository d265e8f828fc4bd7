use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use steinerflow::compositions::{construct_double_plus7_with_flow, construct_plain_2v7, construct_product_sts};
use steinerflow::cyclic::{assign_flow_cyclic, expand_orbits, find_base_blocks, orbit_census, CyclicScheme};
use steinerflow::design::{ensure_valid, validate_design, Design};
use steinerflow::flow::{ensure_zero_sum, flow_width, resolution_to_two_flow, verify_zero_sum, FlowAssignment, Resolution};
use steinerflow::io::{self, CyclicMeta, DesignDoc};
use steinerflow::resolvable::{affine_sts9, boolean_sqs, find_parallel_resolution, find_two_partition};
use steinerflow::search::SearchConfig;
use steinerflow::solver::{conjecture_scan, min_width, scan_json_lines, scan_table, ScanStatus};
use steinerflow::sqs::{assign_flow_2resolvable, builtin_sqs, construct_sqs_double, construct_sqs_product};
use steinerflow::Error;

#[derive(Parser)]
#[command(name = "steinerflow", version, about = "Steiner systems with zero-sum flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a design (and a flow where the construction gives one).
    Construct(ConstructArgs),
    /// Check a design file and, optionally, a flow file against it.
    Verify {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        flow: Option<PathBuf>,
        /// Print a JSON report instead of the one-line verdict.
        #[arg(long)]
        json: bool,
    },
    /// Find the least width of a zero-sum flow by exact search.
    Solve {
        #[arg(long)]
        design: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_k: u64,
        #[arg(long, default_value_t = SearchConfig::DEFAULT_BUDGET)]
        budget: u64,
        /// Write the witness flow here.
        #[arg(long)]
        out_flow: Option<PathBuf>,
    },
    /// Least flow widths over a list of designs.
    Scan {
        /// One entry per line: a design file (relative to the manifest) or `cyclic:V`.
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 3)]
        k_target: u64,
        #[arg(long, default_value_t = SearchConfig::DEFAULT_BUDGET)]
        budget: u64,
        /// Also write the report as JSON lines.
        #[arg(long)]
        jsonl: Option<PathBuf>,
    },
    /// Orbit Type census of a cyclic STS file.
    Classify {
        #[arg(long)]
        design: PathBuf,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[command(subcommand)]
    kind: ConstructKind,
    /// Output path stem; writes STEM.design.json and STEM.flow.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Skip re-reading and re-verifying the written files.
    #[arg(long, global = true)]
    no_selfcheck: bool,
    /// Node budget for searches.
    #[arg(long, global = true, default_value_t = SearchConfig::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Cyclic STS(v) from the least difference family, or from given base blocks.
    Cyclic {
        #[arg(long)]
        v: usize,
        /// JSON {"v":..,"full":[[..],..],"short":bool}
        #[arg(long)]
        base_blocks: Option<PathBuf>,
    },
    /// STS(vw) from an STS(v) with a flow and an STS(w).
    Product {
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        inner_flow: PathBuf,
        #[arg(long)]
        outer: PathBuf,
    },
    /// STS(2v+7) from an STS(v), with a flow when v ≡ 1 (mod 4), v > 9.
    Double7 {
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        inner_flow: Option<PathBuf>,
        /// Build the design only.
        #[arg(long)]
        plain: bool,
    },
    /// SQS(2v) from two SQS(v) with flows.
    SqsDouble {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        left_flow: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        right_flow: PathBuf,
    },
    /// SQS(uv) from an SQS(u) (left) and an SQS(v) (right) with flows.
    SqsProduct {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        left_flow: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        right_flow: PathBuf,
    },
    /// The tabulated SQS(8) or SQS(10) with its flow.
    SqsBuiltin {
        #[arg(long)]
        n: usize,
    },
    /// The planes of AG(m,2) as an SQS(2^m).
    SqsBoolean {
        #[arg(long)]
        m: u32,
    },
    /// Flow on a 2-partitionable SQS(v), v ≡ 4 (mod 12), plus the derived STS at --point.
    Sqs2resolvable {
        #[arg(long)]
        design: PathBuf,
        /// resolution-v1 file whose classes are S(2,4,v) designs; searched for when absent.
        #[arg(long)]
        resolution: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        point: usize,
    },
    /// The affine STS(9) with the 2-flow of a parallel-class resolution.
    Affine9,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::Precondition(_)) => 2,
        Some(Error::BudgetExceeded { .. }) => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Construct(args) => construct(args),
        Command::Verify { design, flow, json } => verify(&design, flow.as_deref(), json),
        Command::Solve { design, max_k, budget, out_flow } => solve(&design, max_k, budget, out_flow.as_deref()),
        Command::Scan { manifest, k_target, budget, jsonl } => scan(&manifest, k_target, budget, jsonl.as_deref()),
        Command::Classify { design } => classify(&design),
    }
}

fn read_design(path: &Path) -> anyhow::Result<DesignDoc> {
    io::read_design(path).with_context(|| format!("reading {}", path.display()))
}

fn read_flow(path: &Path, d: &Design) -> anyhow::Result<FlowAssignment> {
    io::read_flow(path, d).with_context(|| format!("reading {}", path.display()))
}

fn kind_name(d: &Design) -> String {
    if d.is_sts() {
        format!("STS({})", d.v())
    } else if d.is_sqs() {
        format!("SQS({})", d.v())
    } else {
        format!("{}-({},{},{}) design", d.t(), d.v(), d.k(), d.lambda())
    }
}

/// Everything a construction hands back for writing.
struct Built {
    doc: DesignDoc,
    flow: Option<FlowAssignment>,
    extra: Vec<(&'static str, String)>,
    note: String,
}

fn construct(args: ConstructArgs) -> anyhow::Result<ExitCode> {
    let cfg = SearchConfig { budget: args.budget, ..SearchConfig::from_env() };
    let Some(stem) = args.out else {
        bail!("--out is required");
    };
    let built = build(args.kind, &cfg)?;
    let design_path = with_suffix(&stem, "design.json");
    let flow_path = with_suffix(&stem, "flow.json");
    if let Some(parent) = design_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(&design_path, io::design_to_json(&built.doc))?;
    if let Some(f) = &built.flow {
        fs::write(&flow_path, io::flow_to_json(f))?;
    }
    for (suffix, text) in &built.extra {
        fs::write(with_suffix(&stem, suffix), text)?;
    }
    let d = &built.doc.design;
    if !args.no_selfcheck {
        let reread = read_design(&design_path)?;
        ensure_valid(&reread.design, &kind_name(d))?;
        if built.flow.is_some() {
            let f = read_flow(&flow_path, &reread.design)?;
            ensure_zero_sum(&reread.design, &f, "written flow")?;
        }
    }
    let flow_note = match &built.flow {
        Some(f) => format!("; zero-sum flow of width {}", flow_width(f)),
        None => String::new(),
    };
    println!("{}: {} blocks{flow_note}{}", kind_name(d), d.b(), built.note);
    Ok(ExitCode::SUCCESS)
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn provenance(construction: &str, inputs: &[&Design]) -> serde_json::Value {
    json!({
        "construction": construction,
        "inputs": inputs.iter().map(|d| d.digest()).collect::<Vec<_>>(),
    })
}

fn load_with_flow(design: &Path, flow: &Path) -> anyhow::Result<(Design, FlowAssignment)> {
    let doc = read_design(design)?;
    let f = read_flow(flow, &doc.design)?;
    Ok((doc.design, f))
}

fn build(kind: ConstructKind, cfg: &SearchConfig) -> anyhow::Result<Built> {
    Ok(match kind {
        ConstructKind::Cyclic { v, base_blocks } => {
            let base = match base_blocks {
                Some(path) => {
                    let meta: CyclicMeta = serde_json::from_str(&fs::read_to_string(&path)?)
                        .with_context(|| format!("reading {}", path.display()))?;
                    if meta.v != v {
                        return Err(Error::Malformed(format!("base blocks are for v = {}, not {v}", meta.v)).into());
                    }
                    meta.to_base()?
                }
                None => find_base_blocks(v)?,
            };
            let c = expand_orbits(&base)?;
            let mut doc = DesignDoc::new(c.design().clone());
            doc.cyclic = Some(CyclicMeta::from_base(&base));
            let (flow, note) = if v > 7 {
                let cf = assign_flow_cyclic(&c)?;
                let scheme = match cf.scheme {
                    CyclicScheme::OrbitConstants => "orbit constants",
                    CyclicScheme::TypeThreeOrbit => "Type-3 orbit",
                    CyclicScheme::ShortOrbitMinusThree => "short orbit -3",
                };
                (Some(cf.flow), format!(" ({scheme})"))
            } else {
                (None, "; no zero-sum flow exists".to_string())
            };
            let mut prov = provenance("cyclic", &[]);
            prov["base_blocks"] = json!(base.full());
            doc.provenance = Some(prov);
            Built { doc, flow, extra: vec![], note }
        }
        ConstructKind::Product { inner, inner_flow, outer } => {
            let (inner, f) = load_with_flow(&inner, &inner_flow)?;
            let outer = read_design(&outer)?.design;
            let (d, flow) = construct_product_sts(&inner, &f, &outer)?;
            let mut doc = DesignDoc::new(d);
            doc.provenance = Some(provenance("product", &[&inner, &outer]));
            Built { doc, flow: Some(flow), extra: vec![], note: String::new() }
        }
        ConstructKind::Double7 { inner, inner_flow, plain } => {
            let inner_doc = read_design(&inner)?;
            let inner = inner_doc.design;
            if plain {
                let d = construct_plain_2v7(&inner, cfg)?;
                let mut doc = DesignDoc::new(d);
                doc.provenance = Some(provenance("double7-plain", &[&inner]));
                Built { doc, flow: None, extra: vec![], note: String::new() }
            } else {
                let Some(flow_path) = inner_flow else {
                    return Err(Error::Precondition("flow transfer needs --inner-flow (or pass --plain)".into()).into());
                };
                let f = read_flow(&flow_path, &inner)?;
                let (d, flow) = construct_double_plus7_with_flow(&inner, &f, cfg)?;
                let mut doc = DesignDoc::new(d);
                doc.provenance = Some(provenance("double7", &[&inner]));
                Built { doc, flow: Some(flow), extra: vec![], note: String::new() }
            }
        }
        ConstructKind::SqsDouble { left, left_flow, right, right_flow } => {
            let (a, fa) = load_with_flow(&left, &left_flow)?;
            let (b, fb) = load_with_flow(&right, &right_flow)?;
            let (d, flow) = construct_sqs_double(&a, &fa, &b, &fb)?;
            let mut doc = DesignDoc::new(d);
            doc.provenance = Some(provenance("sqs-double", &[&a, &b]));
            Built { doc, flow: Some(flow), extra: vec![], note: String::new() }
        }
        ConstructKind::SqsProduct { left, left_flow, right, right_flow } => {
            let (a, fa) = load_with_flow(&left, &left_flow)?;
            let (b, fb) = load_with_flow(&right, &right_flow)?;
            let (d, flow) = construct_sqs_product(&a, &fa, &b, &fb)?;
            let mut doc = DesignDoc::new(d);
            doc.provenance = Some(provenance("sqs-product", &[&a, &b]));
            Built { doc, flow: Some(flow), extra: vec![], note: String::new() }
        }
        ConstructKind::SqsBuiltin { n } => {
            let (mut doc, flow) = builtin_sqs(n)?;
            doc.provenance = Some(provenance("sqs-builtin", &[]));
            Built { doc, flow: Some(flow), extra: vec![], note: String::new() }
        }
        ConstructKind::SqsBoolean { m } => {
            let mut doc = DesignDoc::new(boolean_sqs(m)?);
            doc.provenance = Some(provenance("sqs-boolean", &[]));
            Built { doc, flow: None, extra: vec![], note: String::new() }
        }
        ConstructKind::Sqs2resolvable { design, resolution, point } => {
            let q = read_design(&design)?.design;
            let classes = match resolution {
                Some(path) => io::read_resolution(&path, &q)?.classes().to_vec(),
                None => find_two_partition(&q, cfg.budget)?
                    .ok_or_else(|| Error::Verification(format!("SQS({}) has no 2-partition", q.v())))?,
            };
            let r = assign_flow_2resolvable(&q, &classes, point)?;
            let alpha = (q.v() - 1) / 3;
            let res = Resolution::new(&q, alpha, classes)?;
            let mut doc = DesignDoc::new(q.clone());
            doc.provenance = Some(provenance("sqs-2resolvable", &[&q]));
            let mut derived = DesignDoc::new(r.derived.clone());
            derived.provenance = Some(json!({"construction": "derived", "point": point, "inputs": [q.digest()]}));
            let extra = vec![
                ("resolution.json", io::resolution_to_json(&res)),
                ("derived.design.json", io::design_to_json(&derived)),
                ("derived.flow.json", io::flow_to_json(&r.derived_flow)),
            ];
            let note = format!("; derived STS({}) at point {point} carries the class weights", q.v() - 1);
            Built { doc, flow: Some(r.flow), extra, note }
        }
        ConstructKind::Affine9 => {
            let d = affine_sts9();
            let res = find_parallel_resolution(&d, cfg.budget)?
                .ok_or_else(|| Error::Verification("STS(9) resolution not found".into()))?;
            let flow = resolution_to_two_flow(&d, &res)?;
            let mut doc = DesignDoc::new(d);
            doc.provenance = Some(provenance("affine9", &[]));
            let extra = vec![("resolution.json", io::resolution_to_json(&res))];
            Built { doc, flow: Some(flow), extra, note: String::new() }
        }
    })
}

fn verify(design: &Path, flow: Option<&Path>, as_json: bool) -> anyhow::Result<ExitCode> {
    let doc = read_design(design)?;
    let d = &doc.design;
    let report = validate_design(d);
    let mut ok = report.valid;
    let mut parts = Vec::new();
    if report.valid {
        parts.push(format!("valid {}", kind_name(d)));
    } else {
        let v = report.first_violation.as_ref().expect("invalid report names a violation");
        parts.push(format!(
            "invalid {}: {:?} lies in {} blocks, not {} ({} bad {}-subsets)",
            kind_name(d),
            v.subset,
            v.count,
            d.lambda(),
            report.violations,
            d.t()
        ));
    }
    let mut flow_json = serde_json::Value::Null;
    if let Some(path) = flow {
        let f = read_flow(path, d)?;
        let z = verify_zero_sum(d, &f)?;
        let width = flow_width(&f);
        if z.ok {
            parts.push("zero-sum flow".into());
        } else {
            ok = false;
            let pts: Vec<String> = z.nonzero_points.iter().map(|(p, w)| format!("{p} (weight {w})")).collect();
            parts.push(format!("not zero-sum at points {}", pts.join(", ")));
        }
        parts.push(format!("width {width}"));
        flow_json = json!({
            "zero_sum": z.ok,
            "nonzero_points": z.nonzero_points.iter().map(|(p, w)| json!({"point": p, "weight": w})).collect::<Vec<_>>(),
            "width": width,
        });
    }
    if as_json {
        let out = json!({
            "design": {
                "valid": report.valid,
                "t": d.t(), "v": d.v(), "k": d.k(), "lambda": d.lambda(), "b": d.b(),
                "first_violation": report.first_violation.as_ref().map(|v| json!({"subset": v.subset, "count": v.count})),
                "violations": report.violations,
                "digest": d.digest(),
            },
            "flow": flow_json,
            "ok": ok,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{}", parts.join("; "));
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn solve(design: &Path, max_k: u64, budget: u64, out_flow: Option<&Path>) -> anyhow::Result<ExitCode> {
    let d = read_design(design)?.design;
    let report = min_width(&d, max_k, budget)?;
    if report.nullity.nullity == 0 {
        println!("infeasible for all k (nullity 0, rank {})", report.nullity.rank);
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(k) = report.min_width {
        println!("min width {k} (nullity {}, {} nodes)", report.nullity.nullity, report.nodes());
        if let (Some(path), Some(f)) = (out_flow, &report.witness) {
            fs::write(path, io::flow_to_json(f))?;
        }
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(last) = report.attempts.last().filter(|_| report.budget_exceeded()) {
        return Err(Error::BudgetExceeded {
            context: format!("no flow of width < {} found; k = {} undecided", last.k, last.k),
            nodes: report.nodes(),
        }
        .into());
    }
    println!("no zero-sum flow of width <= {max_k} (exhaustive, {} nodes)", report.nodes());
    Ok(ExitCode::SUCCESS)
}

fn scan(manifest: &Path, k_target: u64, budget: u64, jsonl: Option<&Path>) -> anyhow::Result<ExitCode> {
    let text = fs::read_to_string(manifest).with_context(|| format!("reading {}", manifest.display()))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let mut family = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        if let Some(v) = line.strip_prefix("cyclic:") {
            let v: usize = v.trim().parse().with_context(|| format!("bad manifest entry {line:?}"))?;
            let c = expand_orbits(&find_base_blocks(v)?)?;
            family.push((format!("cyclic STS({v})"), c.design().clone()));
        } else {
            family.push((line.to_string(), read_design(&base.join(line))?.design));
        }
    }
    let rows = conjecture_scan(&family, k_target, budget)?;
    print!("{}", scan_table(&rows));
    if let Some(path) = jsonl {
        fs::write(path, scan_json_lines(&rows))?;
    }
    if rows.iter().any(|r| r.status == ScanStatus::CounterexampleCandidate) {
        eprintln!("!!! some design has no zero-sum flow of width <= {k_target}");
        return Ok(ExitCode::from(1));
    }
    if rows.iter().any(|r| r.status == ScanStatus::Undecided) {
        eprintln!("some designs were left undecided by the budget");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn classify(design: &Path) -> anyhow::Result<ExitCode> {
    let doc = read_design(design)?;
    let Some(meta) = doc.cyclic else {
        return Err(Error::Precondition("classify needs the design's \"cyclic\" metadata".into()).into());
    };
    let c = expand_orbits(&meta.to_base()?)?;
    if c.design().digest() != doc.design.digest() {
        return Err(Error::Verification("the cyclic metadata does not generate this design".into()).into());
    }
    match orbit_census(&c) {
        Ok(census) => println!("{census}"),
        Err(Error::Precondition(msg)) => println!("{msg}"),
        Err(e) => return Err(e.into()),
    }
    Ok(ExitCode::SUCCESS)
}
