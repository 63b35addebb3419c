//! Command dispatch. Every command produces a JSON report and an exit code:
//! 0 when everything passes, 1 when an axiom or premise fails, 2 for input
//! errors.

use std::thread;

use serde_json::{json, Map, Value};
use xprod_core::constructions::{iterated_data, iterated_ttp, ma_build, ma_data, remark1_transport, remark2_lr};
use xprod_core::crossed::{
    brzezinski_product, build_brzezinski, build_mirror, build_ttp, check_brzezinski, check_mirror, check_twisting,
    mirror_product, ttp_product, BRZ_LABELS, MIRROR_LABELS, TWISTING_LABELS,
};
use xprod_core::search::{finalize, SearchMode, SearchPlan};
use xprod_core::tensor::id;
use xprod_core::twosided::{
    build_twosided, build_twosided_forced, canonical_embeddings, evaluate_condition, extract, presentations_agree,
    universal_map, TwoSidedData, CONDITION_LABELS,
};
use xprod_core::{Error, FinAlgebra, Report};

use crate::document::{algebra_json, parse_document, to_canonical_string, Dataset, Document, Instance, Kind, NamedMap};
use crate::report::{conditions, error, is_axiom_failure, matrix, witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Check,
    Build,
    Agree,
    Extract,
    Universal,
    Search,
    Transport,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Build => "build",
            Command::Agree => "agree",
            Command::Extract => "extract",
            Command::Universal => "universal",
            Command::Search => "search",
            Command::Transport => "transport",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Flags {
    pub dataset: Option<String>,
    pub condition: Option<String>,
    pub seed: u64,
    pub force: bool,
    /// Worker threads; never changes the output.
    pub threads: usize,
}

impl Default for Flags {
    fn default() -> Self {
        Flags { dataset: None, condition: None, seed: 0, force: false, threads: 1 }
    }
}

/// `XPROD_THREADS` if set to a positive integer, else the available
/// parallelism.
pub fn threads_from_env() -> usize {
    std::env::var("XPROD_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit: i32,
    pub report: Value,
}

impl Outcome {
    pub fn text(&self) -> String {
        to_canonical_string(&self.report)
    }
}

enum Fail {
    Input(&'static str, String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

struct Body {
    pass: bool,
    fields: Map<String, Value>,
}

fn body(pass: bool, fields: Value) -> Body {
    match fields {
        Value::Object(fields) => Body { pass, fields },
        _ => unreachable!("bodies are objects"),
    }
}

fn input(kind: &'static str, message: impl ToString) -> Fail {
    Fail::Input(kind, message.to_string())
}

fn outcome(mut head: Map<String, Value>, result: Result<Body, Fail>) -> Outcome {
    let (status, exit) = match result {
        Ok(b) => {
            head.extend(b.fields);
            if b.pass {
                ("pass", 0)
            } else {
                ("fail", 1)
            }
        }
        Err(Fail::Core(e)) => {
            head.insert("error".into(), error(&e));
            if is_axiom_failure(&e) {
                ("fail", 1)
            } else {
                ("input-error", 2)
            }
        }
        Err(Fail::Input(kind, message)) => {
            head.insert("error".into(), json!({"kind": kind, "message": message}));
            ("input-error", 2)
        }
    };
    head.insert("status".into(), Value::String(status.into()));
    Outcome { exit, report: Value::Object(head) }
}

/// Parses `text` and runs `command`; parse errors become input-error reports.
pub fn run_text(command: Command, text: &str, flags: &Flags) -> Outcome {
    match parse_document(text) {
        Ok(doc) => run(command, &doc, flags),
        Err(e) => {
            let mut head = Map::new();
            head.insert("command".into(), Value::String(command.name().into()));
            outcome(head, Err(Fail::Input(e.kind(), e.to_string())))
        }
    }
}

pub fn run(command: Command, doc: &Document, flags: &Flags) -> Outcome {
    let mut head = Map::new();
    head.insert("command".into(), Value::String(command.name().into()));
    let name = match &flags.dataset {
        Some(n) => n.clone(),
        None if doc.datasets.len() == 1 => doc.datasets.keys().next().expect("one dataset").clone(),
        None => {
            let msg = "the document has several datasets (or none); choose one with --dataset";
            return outcome(head, Err(input("dataset", msg)));
        }
    };
    head.insert("dataset".into(), Value::String(name.clone()));
    let inst = match doc.instance(&name) {
        Ok(i) => i,
        Err(e) => return outcome(head, Err(Fail::Input(e.kind(), e.to_string()))),
    };
    head.insert("kind".into(), Value::String(doc.datasets[&name].kind.name().into()));
    let threads = flags.threads.max(1);
    let result = match command {
        Command::Check => check(&inst, flags.condition.as_deref(), threads),
        Command::Build => build(&inst, flags.force),
        Command::Agree => twosided_of(&inst).and_then(|d| {
            let r = presentations_agree(&d)?;
            Ok(body(r.all_pass(), json!({"conditions": conditions(&r)})))
        }),
        Command::Extract => extract_cmd(&inst),
        Command::Universal => universal(&inst),
        Command::Search => search(doc, &inst, flags.seed, threads),
        Command::Transport => transport(&inst),
    };
    outcome(head, result)
}

fn twosided_of(inst: &Instance) -> Result<TwoSidedData, Fail> {
    inst.twosided().ok_or_else(|| input("unsupported", "this command needs a twosided, ma or iterated dataset"))
}

fn unknown_label(labels: &[&str], l: &str) -> Fail {
    input("unknown-condition", format!("unknown condition label {l:?}; expected one of {}", labels.join(", ")))
}

fn select(report: Report, labels: &[&str], condition: Option<&str>) -> Result<Report, Fail> {
    match condition {
        None => Ok(report),
        Some(l) if labels.contains(&l) => Ok(report.only(l)),
        Some(l) => Err(unknown_label(labels, l)),
    }
}

/// Evaluates conditions on `threads` workers; the report keeps label order.
fn check_parallel(d: &TwoSidedData, labels: &[&'static str], threads: usize) -> Report {
    let per = labels.len().div_ceil(threads).max(1);
    let parts: Vec<Vec<_>> = thread::scope(|s| {
        let handles: Vec<_> = labels
            .chunks(per)
            .map(|chunk| {
                s.spawn(move || {
                    chunk.iter().map(|&l| (l, evaluate_condition(d, l).expect("known label"))).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut report = Report::default();
    for (label, w) in parts.into_iter().flatten() {
        report.push(label, w);
    }
    report
}

fn check(inst: &Instance, condition: Option<&str>, threads: usize) -> Result<Body, Fail> {
    let report = match inst {
        Instance::Brzezinski(d) => select(check_brzezinski(d), &BRZ_LABELS, condition)?,
        Instance::Mirror(d) => select(check_mirror(d), &MIRROR_LABELS, condition)?,
        Instance::Ttp { a, b, r } => select(check_twisting(r, a, b)?, &TWISTING_LABELS, condition)?,
        _ => {
            let d = twosided_of(inst)?;
            let labels: Vec<&'static str> = match condition {
                None => CONDITION_LABELS.to_vec(),
                Some(l) => match CONDITION_LABELS.iter().find(|&&x| x == l) {
                    Some(&l) => vec![l],
                    None => return Err(unknown_label(&CONDITION_LABELS, l)),
                },
            };
            check_parallel(&d, &labels, threads)
        }
    };
    Ok(body(report.all_pass(), json!({"conditions": conditions(&report)})))
}

fn build(inst: &Instance, force: bool) -> Result<Body, Fail> {
    let algebra: FinAlgebra = match (inst, force) {
        (Instance::TwoSided(d), false) => build_twosided(d)?,
        (Instance::Ma(m), false) => build_twosided(&ma_build(m)?)?,
        (Instance::Ma(m), true) => build_twosided_forced(&ma_data(m)?)?,
        (Instance::Iterated { a, b, c, r1, r2, r3 }, false) => iterated_ttp(a, b, c, r1, r2, r3)?,
        (Instance::Iterated { a, b, c, r1, r2, r3 }, true) => {
            build_twosided_forced(&iterated_data(a, b, c, r1, r2, r3)?)?
        }
        (Instance::TwoSided(d), true) => build_twosided_forced(d)?,
        (Instance::Brzezinski(d), false) => build_brzezinski(d)?,
        (Instance::Brzezinski(d), true) => brzezinski_product(d)?.validate()?,
        (Instance::Mirror(d), false) => build_mirror(d)?,
        (Instance::Mirror(d), true) => mirror_product(d)?.validate()?,
        (Instance::Ttp { a, b, r }, false) => build_ttp(a, b, r)?,
        (Instance::Ttp { a, b, r }, true) => ttp_product(a, b, r)?.validate()?,
        _ => return Err(input("unsupported", "build does not apply to this dataset kind")),
    };
    Ok(body(true, json!({"algebra": algebra_json(&algebra), "forced": force})))
}

fn maps_json(d: &TwoSidedData) -> Value {
    json!({"R1": matrix(&d.r1), "R2": matrix(&d.r2), "R3": matrix(&d.r3), "E": matrix(&d.e)})
}

fn extract_cmd(inst: &Instance) -> Result<Body, Fail> {
    match inst {
        Instance::Extract { m, a, v, c } => {
            let d = extract(m, a, v, c)?;
            Ok(body(true, json!({"maps": maps_json(&d)})))
        }
        _ => {
            let d = twosided_of(inst)?;
            let m = build_twosided(&d)?;
            let back = extract(&m, &d.a, &d.v, &d.c)?;
            let same = back == d;
            Ok(body(same, json!({"maps": maps_json(&back), "round_trip": same})))
        }
    }
}

fn universal(inst: &Instance) -> Result<Body, Fail> {
    match inst {
        Instance::Universal { data, x, fa, fv, fc } => {
            let f = universal_map(data, x, fa, fv, fc)?;
            Ok(body(true, json!({"map": matrix(&f)})))
        }
        _ => {
            let d = twosided_of(inst)?;
            let x = build_twosided(&d)?;
            let [fa, fv, fc] = canonical_embeddings(&d)?;
            let f = universal_map(&d, &x, &fa, &fv, &fc)?;
            let identity = f.to_rows() == id(x.field(), &[x.dim()]).to_rows();
            Ok(body(identity, json!({"map": matrix(&f), "identity": identity})))
        }
    }
}

fn transport(inst: &Instance) -> Result<Body, Fail> {
    let d = twosided_of(inst)?;
    let mut pass = true;
    let mut ran = false;
    let mut fields = Map::new();
    match remark1_transport(&d) {
        Ok(r) => {
            ran = true;
            pass &= r.report.all_pass();
            fields.insert("remark1".into(), json!({"conditions": conditions(&r.report)}));
        }
        Err(Error::Precondition(msg)) => {
            fields.insert("remark1".into(), json!({"skipped": msg}));
        }
        Err(e) => return Err(e.into()),
    }
    match remark2_lr(&d) {
        Ok(r) => {
            ran = true;
            pass &= r.report.all_pass();
            let finding = r.finding.as_ref().map_or(Value::Null, witness);
            fields.insert("remark2".into(), json!({"conditions": conditions(&r.report), "finding": finding}));
        }
        Err(Error::Precondition(msg)) => {
            fields.insert("remark2".into(), json!({"skipped": msg}));
        }
        Err(e) => return Err(e.into()),
    }
    if !ran {
        return Err(input("precondition", "transport needs R1 or R3 to be the flip map"));
    }
    Ok(Body { pass, fields })
}

fn search(doc: &Document, inst: &Instance, seed: u64, threads: usize) -> Result<Body, Fail> {
    let Instance::Search { spec, a, v, c } = inst else {
        return Err(input("unsupported", "search needs a search dataset"));
    };
    let mut spec = spec.clone();
    if let SearchMode::Randomized { budget, .. } = spec.mode {
        spec.mode = SearchMode::Randomized { budget, seed };
    }
    let plan = SearchPlan::new(&spec, a, v, c)?;
    let n = plan.work_len();
    let per = n.div_ceil(threads).max(1);
    let found: Vec<TwoSidedData> = thread::scope(|s| {
        let plan = &plan;
        let handles: Vec<_> =
            (0..n).step_by(per).map(|start| s.spawn(move || plan.run_range(start..(start + per).min(n)))).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    let found = finalize(found);
    let mut fields = json!({
        "count": found.len(),
        "space_size": plan.space_size().to_string(),
        "work_items": n,
        "solutions": solutions_document(doc, a, v, c, &found).to_json(),
    });
    let mode = match spec.mode {
        SearchMode::Exhaustive => "exhaustive",
        SearchMode::Randomized { seed, .. } => {
            fields["seed"] = json!(seed);
            "randomized"
        }
    };
    fields["mode"] = json!(mode);
    Ok(body(true, fields))
}

/// The solutions as a document with one twosided dataset each.
fn solutions_document(
    doc: &Document,
    a: &FinAlgebra,
    v: &xprod_core::PointedSpace,
    c: &FinAlgebra,
    found: &[TwoSidedData],
) -> Document {
    let mut out = Document::new(doc.field);
    out.algebras.insert("A".into(), a.clone());
    out.algebras.insert("C".into(), c.clone());
    out.spaces.insert("V".into(), v.clone());
    let width = found.len().saturating_sub(1).to_string().len();
    let names = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    for (i, d) in found.iter().enumerate() {
        let tag = format!("s{i:0width$}");
        let shapes: [(&str, &xprod_core::TensorMap, &[&str], &[&str]); 4] = [
            ("R1", &d.r1, &["V", "A"], &["A", "V"]),
            ("R2", &d.r2, &["C", "V"], &["V", "C"]),
            ("R3", &d.r3, &["C", "A"], &["A", "C"]),
            ("E", &d.e, &["V", "V"], &["A", "V", "C"]),
        ];
        let mut refs = std::collections::BTreeMap::new();
        refs.insert("A".to_string(), "A".to_string());
        refs.insert("V".to_string(), "V".to_string());
        refs.insert("C".to_string(), "C".to_string());
        for (role, m, dom, cod) in shapes {
            let name = format!("{tag}-{role}");
            out.maps.insert(name.clone(), NamedMap { domain: names(dom), codomain: names(cod), map: m.clone() });
            refs.insert(role.to_string(), name);
        }
        out.datasets.insert(tag, Dataset { kind: Kind::TwoSided, refs, params: Default::default() });
    }
    out
}
