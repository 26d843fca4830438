//! Batch command surface: every command prints one JSON report.
//!
//! Exit status is 0 when every clause passes, 1 when a clause fails and 2 on
//! unknown commands or malformed input.

pub mod formats;

use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use finspan::burnside::{burnside_product, marks, table_of_marks};
use finspan::duality::verify_duality;
use finspan::groupoid::{compose_global_spans, groupoid_equivalence_skeleton, is_discrete_fibration};
use finspan::gset::gset_iso;
use finspan::mackey::{check_mackey, standard_mackey, MackeyKind};
use finspan::operad::free_algebra_census;
use finspan::span::{compose_spans, hom_monoid, span_to_matrix};
use finspan::{Error, Result};

use formats::*;

#[derive(Parser)]
#[command(name = "finspan", version, about = "Spans of finite G-sets, Burnside and Mackey data, bisets, groupoids and operads")]
struct Cli {
    /// Size of the worker pool used by parallel checks.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add wall-clock time to the report (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group structure.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Finite G-sets.
    #[command(subcommand)]
    Gset(GsetCmd),
    /// Spans of G-sets.
    #[command(subcommand)]
    Span(SpanCmd),
    /// Tables of marks and Burnside products.
    #[command(subcommand)]
    Burnside(BurnsideCmd),
    /// Mackey axiom checks.
    #[command(subcommand)]
    Mackey(MackeyCmd),
    /// Bounded verification of the biset duality.
    #[command(subcommand)]
    Duality(DualityCmd),
    /// Spans of finite groupoids.
    #[command(subcommand)]
    Global(GlobalCmd),
    /// Operadic spans.
    #[command(subcommand)]
    Operad(OperadCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    Info {
        #[arg(long)]
        group: String,
    },
}

#[derive(Subcommand)]
enum GsetCmd {
    Orbits {
        #[arg(long)]
        gset: String,
    },
    Iso {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum SpanCmd {
    /// First span, then second.
    Compose { first: String, second: String },
    /// Count matrix of a span of plain finite sets.
    Matrix {
        span: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Isomorphism classes of spans with apex at most `bound`.
    Hom {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum BurnsideCmd {
    Marks {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    Product {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Burnside,
    Permutation,
}

#[derive(Subcommand)]
enum MackeyCmd {
    /// Either `--data`, or `--group` with `--kind` (and `--gset` for permutation modules).
    Check {
        #[arg(long, conflicts_with_all = ["group", "kind", "gset"])]
        data: Option<String>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(long)]
        gset: Option<String>,
        /// Apex bound for the checked pairs; defaults to the group order.
        #[arg(long)]
        bound: Option<usize>,
    },
}

#[derive(Subcommand)]
enum DualityCmd {
    Verify {
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
        #[arg(long)]
        include_nonseparable: bool,
    },
}

#[derive(Subcommand)]
enum GlobalCmd {
    Compose { first: String, second: String },
    Skeleton {
        #[arg(long)]
        groupoid: String,
    },
}

#[derive(Subcommand)]
enum OperadCmd {
    Census {
        /// `comm`, `assoc`, or an operad table file.
        #[arg(long)]
        operad: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        bound: usize,
        /// Arity truncation for the built-in operads; defaults to `bound`.
        #[arg(long)]
        max_arity: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub pass: bool,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub status: String,
    pub clauses: Vec<Clause>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u64>,
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
}

#[derive(Default)]
struct Body {
    clauses: Vec<Clause>,
    result: Value,
    csv: Option<String>,
}

fn clause(name: &str, pass: bool, witness: Value) -> Clause {
    Clause { name: name.to_string(), pass, witness }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn csv(rows: &[Vec<String>]) -> String {
    rows.iter().map(|r| r.join(",")).collect::<Vec<_>>().join("\n") + "\n"
}

fn digest(inputs: &Inputs) -> String {
    let mut h = Sha256::new();
    for (label, bytes) in &inputs.consumed {
        // builtins and catalog names are identified by label, files by content
        let payload = if bytes.is_empty() { label.as_bytes() } else { bytes.as_slice() };
        h.update((payload.len() as u64).to_le_bytes());
        h.update(payload);
    }
    hex::encode(h.finalize())
}

/// Runs one command line; `args[0]` is the program name.
pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let command: Vec<String> = args.iter().skip(1).cloned().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Output { code: 0, stdout: e.to_string() };
        }
        Err(e) => {
            let kind = match e.kind() {
                ErrorKind::InvalidSubcommand
                | ErrorKind::UnknownArgument
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => "UnknownCommand",
                _ => "MalformedInput",
            };
            let report = Report {
                command,
                inputs_digest: digest(&Inputs::default()),
                status: "error".into(),
                clauses: Vec::new(),
                result: Value::Null,
                error: Some(ErrorReport { kind: kind.into(), message: e.to_string().trim().to_string() }),
                timing_ms: None,
            };
            return Output { code: 2, stdout: render(&report) };
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &mut inputs)),
            Err(e) => Err(Error::MalformedInput(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli.command, &mut inputs),
    };
    let timing_ms = cli.timing.then(|| start.elapsed().as_millis() as u64);
    let inputs_digest = digest(&inputs);
    match outcome {
        Ok(body) => {
            let pass = body.clauses.iter().all(|c| c.pass);
            let code = if pass { 0 } else { 1 };
            if let Some(text) = body.csv {
                return Output { code, stdout: text };
            }
            let report = Report {
                command,
                inputs_digest,
                status: if pass { "pass" } else { "fail" }.into(),
                clauses: body.clauses,
                result: body.result,
                error: None,
                timing_ms,
            };
            Output { code, stdout: render(&report) }
        }
        Err(e) => {
            let report = Report {
                command,
                inputs_digest,
                status: "error".into(),
                clauses: Vec::new(),
                result: Value::Null,
                error: Some(ErrorReport { kind: "MalformedInput".into(), message: e.to_string() }),
                timing_ms,
            };
            Output { code: 2, stdout: render(&report) }
        }
    }
}

fn render(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("serializable") + "\n"
}

fn dispatch(command: &Command, inputs: &mut Inputs) -> Result<Body> {
    match command {
        Command::Group(GroupCmd::Info { group }) => group_info(group, inputs),
        Command::Gset(GsetCmd::Orbits { gset }) => gset_orbits(gset, inputs),
        Command::Gset(GsetCmd::Iso { left, right }) => {
            let x = load_gset(left, inputs)?;
            let y = load_gset(right, inputs)?;
            let iso = gset_iso(&x, &y)?;
            Ok(Body {
                result: json!({ "isomorphic": iso.is_some(), "map": iso.map(|m| m.map().to_vec()) }),
                ..Body::default()
            })
        }
        Command::Span(cmd) => span_cmd(cmd, inputs),
        Command::Burnside(cmd) => burnside_cmd(cmd, inputs),
        Command::Mackey(MackeyCmd::Check { data, group, kind, gset, bound }) => {
            mackey_check(data.as_deref(), group.as_deref(), *kind, gset.as_deref(), *bound, inputs)
        }
        Command::Duality(DualityCmd::Verify { g, h, bound, include_nonseparable }) => {
            let (g, h) = (inputs.group(g)?, inputs.group(h)?);
            let report = verify_duality(&g, &h, *bound, *include_nonseparable)?;
            let clauses =
                report.clauses.iter().map(|c| clause(&c.name, c.pass, Value::String(c.detail.clone()))).collect();
            Ok(Body { clauses, result: to_value(&report), csv: None })
        }
        Command::Global(GlobalCmd::Compose { first, second }) => {
            let (v, base) = inputs.file(first)?;
            let s = global_span_from_value(&v, base.as_deref(), inputs)?;
            let (v, base) = inputs.file(second)?;
            let t = global_span_from_value(&v, base.as_deref(), inputs)?;
            let c = compose_global_spans(&s, &t)?;
            let fib = is_discrete_fibration(c.ingressive());
            let skeleton: Vec<_> = groupoid_equivalence_skeleton(c.apex()).iter().map(|e| e.data()).collect();
            Ok(Body {
                clauses: vec![clause("ingressive leg is a discrete fibration", fib.holds, to_value(&fib))],
                result: json!({ "composite": to_value(&global_span_out(&c)), "apexSkeleton": skeleton }),
                csv: None,
            })
        }
        Command::Global(GlobalCmd::Skeleton { groupoid }) => {
            let (v, base) = inputs.file(groupoid)?;
            let g = groupoid_from_value(&v, base.as_deref(), inputs)?;
            let skeleton: Vec<_> = groupoid_equivalence_skeleton(&g).iter().map(|e| e.data()).collect();
            Ok(Body { result: json!({ "components": skeleton }), ..Body::default() })
        }
        Command::Operad(OperadCmd::Census { operad: name, k, bound, max_arity }) => {
            let op = operad(name, max_arity.unwrap_or(*bound).max(1), inputs)?;
            op.check_axioms()?;
            let census = free_algebra_census(&op, *k, *bound)?;
            let mismatches: Vec<_> = census.rows.iter().filter(|r| r.span_side != r.formula_side).collect();
            Ok(Body {
                clauses: vec![clause("census agreement", census.agrees(), to_value(&mismatches))],
                result: to_value(&census),
                csv: None,
            })
        }
    }
}

fn load_gset(arg: &str, inputs: &mut Inputs) -> Result<finspan::gset::GSet> {
    let (v, base) = inputs.file(arg)?;
    gset_from_value(&v, None, base.as_deref(), inputs)
}

fn load_span(arg: &str, inputs: &mut Inputs) -> Result<finspan::span::Span> {
    let (v, base) = inputs.file(arg)?;
    span_from_value(&v, base.as_deref(), inputs)
}

fn group_info(arg: &str, inputs: &mut Inputs) -> Result<Body> {
    let g = inputs.group(arg)?;
    let lat = g.lattice();
    let bad_subgroup = lat.subgroups().iter().find(|s| g.order() % s.order() != 0);
    let classes: Vec<usize> = g.conjugacy_classes().iter().map(Vec::len).collect();
    let bad_class = classes.iter().find(|&&n| g.order() % n != 0);
    let subgroup_classes: Vec<Value> = (0..lat.num_classes())
        .map(|c| {
            let rep = lat.subgroup(lat.rep(c));
            json!({ "order": rep.order(), "conjugates": lat.class_members(c).len(), "representative": rep.elements() })
        })
        .collect();
    Ok(Body {
        clauses: vec![
            clause("subgroup orders divide the group order", bad_subgroup.is_none(), to_value(&bad_subgroup.map(|s| s.elements()))),
            clause("conjugacy class sizes divide the group order", bad_class.is_none(), to_value(&bad_class)),
        ],
        result: json!({
            "order": g.order(),
            "name": g.name(),
            "abelian": g.is_abelian(),
            "orderProfile": g.order_profile(),
            "subgroups": lat.len(),
            "subgroupClasses": subgroup_classes,
            "conjugacyClassSizes": classes,
        }),
        csv: None,
    })
}

fn gset_orbits(arg: &str, inputs: &mut Inputs) -> Result<Body> {
    let x = load_gset(arg, inputs)?;
    let g = x.group().clone();
    let lat = g.lattice();
    let orbits = x.orbit_decomposition();
    let counted: usize = orbits.iter().map(|o| g.order() / lat.subgroup(o.stabilizer).order()).sum();
    let rows: Vec<Value> = orbits
        .iter()
        .map(|o| json!({ "base": o.base, "size": o.elements.len(), "stabilizer": lat.subgroup(o.stabilizer).elements() }))
        .collect();
    Ok(Body {
        clauses: vec![clause("orbit counting", counted == x.size(), json!({ "counted": counted, "size": x.size() }))],
        result: json!({ "size": x.size(), "orbits": rows }),
        csv: None,
    })
}

fn span_cmd(cmd: &SpanCmd, inputs: &mut Inputs) -> Result<Body> {
    match cmd {
        SpanCmd::Compose { first, second } => {
            let s = load_span(first, inputs)?;
            let t = load_span(second, inputs)?;
            let c = compose_spans(&s, &t).map_err(|e| match e {
                Error::FeetMismatch => malformed("right foot of the first span differs from left foot of the second"),
                other => other,
            })?;
            let class = c.class();
            Ok(Body {
                result: json!({ "composite": to_value(&span_out(&c)), "class": to_value(&class), "apexSize": c.apex().size() }),
                ..Body::default()
            })
        }
        SpanCmd::Matrix { span, format } => {
            let s = load_span(span, inputs)?;
            let m = span_to_matrix(&s)?;
            let text = match format {
                Format::Csv => Some(csv(
                    &m.entries.iter().map(|r| r.iter().map(u64::to_string).collect()).collect::<Vec<_>>(),
                )),
                Format::Json => None,
            };
            Ok(Body { result: json!({ "rows": m.rows, "cols": m.cols, "entries": m.entries }), csv: text, ..Body::default() })
        }
        SpanCmd::Hom { left, right, bound } => {
            let x = load_gset(left, inputs)?;
            let y = load_gset(right, inputs)?;
            let hm = hom_monoid(&x, &y, *bound)?;
            let classes: Vec<Value> =
                hm.classes.iter().map(|c| json!({ "apexSize": c.apex_size(x.group()), "class": to_value(c) })).collect();
            Ok(Body { result: json!({ "bound": bound, "count": classes.len(), "classes": classes }), ..Body::default() })
        }
    }
}

fn burnside_cmd(cmd: &BurnsideCmd, inputs: &mut Inputs) -> Result<Body> {
    match cmd {
        BurnsideCmd::Marks { group, format } => {
            let g = inputs.group(group)?;
            let tom = table_of_marks(&g);
            let lat = g.lattice();
            let subgroups: Vec<&[usize]> = lat.reps().iter().map(|&i| lat.subgroup(i).elements()).collect();
            let det = tom.determinant();
            let text = match format {
                Format::Csv => Some(csv(&tom.rows.iter().map(|r| r.iter().map(i64::to_string).collect()).collect::<Vec<_>>())),
                Format::Json => None,
            };
            Ok(Body {
                clauses: vec![
                    clause("lower triangular", tom.is_lower_triangular(), Value::Null),
                    clause("positive diagonal", tom.diagonal_positive(), Value::Null),
                    clause("nonzero determinant", det != 0.into(), Value::String(det.to_string())),
                ],
                result: json!({ "subgroups": subgroups, "marks": tom.rows }),
                csv: text,
            })
        }
        BurnsideCmd::Product { left, right } => {
            let x = load_gset(left, inputs)?;
            let y = load_gset(right, inputs)?;
            if **x.group() != **y.group() {
                return Err(malformed("the two G-sets live over different groups"));
            }
            let coefficients = burnside_product(&x, &y)?;
            let prod = x.product(&y)?;
            let entrywise: Vec<i64> = marks(&x).iter().zip(marks(&y)).map(|(a, b)| a * b).collect();
            let observed = marks(&prod);
            Ok(Body {
                clauses: vec![clause(
                    "marks multiply",
                    observed == entrywise,
                    json!({ "product": observed, "entrywise": entrywise }),
                )],
                result: json!({ "coefficients": coefficients, "marks": observed }),
                csv: None,
            })
        }
    }
}

fn mackey_check(
    data: Option<&str>,
    group: Option<&str>,
    kind: Option<Kind>,
    gset: Option<&str>,
    bound: Option<usize>,
    inputs: &mut Inputs,
) -> Result<Body> {
    let m = match (data, group, kind) {
        (Some(file), None, None) => {
            let (v, base) = inputs.file(file)?;
            mackey_from_value(&v, base.as_deref(), inputs)?
        }
        (None, Some(g), Some(Kind::Burnside)) => standard_mackey(&MackeyKind::Burnside, &inputs.group(g)?)?,
        (None, Some(g), Some(Kind::Permutation)) => {
            let g = inputs.group(g)?;
            let file = gset.ok_or_else(|| malformed("--kind permutation needs --gset"))?;
            let (v, base) = inputs.file(file)?;
            let x = gset_from_value(&v, Some(&g), base.as_deref(), inputs)?;
            standard_mackey(&MackeyKind::Permutation(x), &g)?
        }
        _ => return Err(malformed("give --data, or --group with --kind")),
    };
    let bound = bound.unwrap_or(m.group().order());
    let report = check_mackey(&m, bound);
    let witness: Vec<Value> = report.violations.iter().take(10).map(to_value).collect();
    Ok(Body {
        clauses: vec![
            clause("identities act as identities", report.identity_failures.is_empty(), to_value(&report.identity_failures)),
            clause("mackey axiom", report.violations.is_empty(), Value::Array(witness)),
        ],
        result: json!({
            "bound": bound,
            "ranks": m.ranks,
            "identitiesChecked": report.identities_checked,
            "pairsChecked": report.pairs_checked,
            "violations": report.violations.len(),
        }),
        csv: None,
    })
}
