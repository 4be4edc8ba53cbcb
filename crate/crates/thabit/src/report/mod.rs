//! Report serialization: JSON, CSV tables and plain text.
//!
//! Output is a pure function of the report, so it is byte-stable across
//! runs, platforms and worker counts.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundReport;
use crate::enumerate::{EquationSpec, FamilyDescriptor, Mode, SearchBox, SolutionTuple};
use crate::error::{Error, Result};
use crate::solver::{CaseTrace, Counts, Method, SolverReport, StepKind, SuiteReport, SuiteTable};

pub mod bigint_string {
    //! Big integers travel as decimal strings so no consumer truncates them.
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Parse {
                what: "format".into(),
                detail: format!("{s:?} is not json, csv or text"),
            }),
        }
    }
}

/// One step of a report as written to JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSection {
    /// Largest `w` over the cases.
    pub w_max: Option<i64>,
    /// The cap derived from `w_max`: the exponent gap for step 1, `n` for
    /// step 2.
    pub cap: Option<u64>,
    pub per_case: Vec<CaseTrace>,
}

/// The JSON document of one solved equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub spec: EquationSpec,
    pub equation: String,
    pub method: Method,
    pub bounds: BoundReport,
    pub step1: StepSection,
    pub step2: StepSection,
    #[serde(rename = "box")]
    pub final_box: SearchBox,
    pub lm_cap: u64,
    pub solutions: Vec<SolutionTuple>,
    pub families: Vec<FamilyDescriptor>,
    pub counts: Counts,
    pub flags: Vec<String>,
}

impl From<&SolverReport> for ReportDocument {
    fn from(r: &SolverReport) -> Self {
        let cases = |k: StepKind| r.traces.iter().filter(|t| t.step == k).cloned().collect();
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            spec: r.spec,
            equation: r.spec.to_string(),
            method: r.method,
            bounds: r.theorem_bounds.clone(),
            step1: StepSection {
                w_max: r.step1_w_max,
                cap: r.gap_cap,
                per_case: cases(StepKind::GapReduction),
            },
            step2: StepSection {
                w_max: r.step2_w_max,
                cap: r.step2_w_max.map(|_| r.n_cap),
                per_case: cases(StepKind::NReduction),
            },
            final_box: r.final_box,
            lm_cap: r.lm_cap,
            solutions: r.solutions.clone(),
            families: r.families.clone(),
            counts: r.counts,
            flags: r.flags.clone(),
        }
    }
}

impl TryFrom<ReportDocument> for SolverReport {
    type Error = Error;
    fn try_from(d: ReportDocument) -> Result<Self> {
        check_version(d.schema_version)?;
        let mut traces = d.step1.per_case;
        traces.extend(d.step2.per_case);
        Ok(SolverReport {
            spec: d.spec,
            method: d.method,
            theorem_bounds: d.bounds,
            step1_w_max: d.step1.w_max,
            step2_w_max: d.step2.w_max,
            gap_cap: d.step1.cap,
            n_cap: d.final_box.n.hi,
            lm_cap: d.lm_cap,
            final_box: d.final_box,
            solutions: d.solutions,
            families: d.families,
            traces,
            counts: d.counts,
            flags: d.flags,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ReportList {
    schema_version: u32,
    reports: Vec<ReportDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct SuiteDocument {
    schema_version: u32,
    #[serde(flatten)]
    suite: SuiteReport,
}

fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("reports serialize");
    s.push('\n');
    s
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse {
        what: "report JSON".into(),
        detail: e.to_string(),
    }
}

fn check_version(v: u32) -> Result<()> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::Parse {
            what: "report JSON".into(),
            detail: format!("unsupported schema_version {v}"),
        })
    }
}

pub fn report_json(r: &SolverReport) -> String {
    to_json(&ReportDocument::from(r))
}

pub fn parse_report_json(s: &str) -> Result<SolverReport> {
    let doc: ReportDocument = serde_json::from_str(s).map_err(json_err)?;
    SolverReport::try_from(doc)
}

pub fn reports_json(rs: &[SolverReport]) -> String {
    to_json(&ReportList {
        schema_version: SCHEMA_VERSION,
        reports: rs.iter().map(ReportDocument::from).collect(),
    })
}

pub fn parse_reports_json(s: &str) -> Result<Vec<SolverReport>> {
    let list: ReportList = serde_json::from_str(s).map_err(json_err)?;
    check_version(list.schema_version)?;
    list.reports
        .into_iter()
        .map(SolverReport::try_from)
        .collect()
}

pub fn suite_json(s: &SuiteReport) -> String {
    to_json(&SuiteDocument {
        schema_version: SCHEMA_VERSION,
        suite: s.clone(),
    })
}

pub fn parse_suite_json(s: &str) -> Result<SuiteReport> {
    let doc: SuiteDocument = serde_json::from_str(s).map_err(json_err)?;
    check_version(doc.schema_version)?;
    Ok(doc.suite)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Never)
        .flexible(true)
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("ASCII output")
}

/// `d1,d2,l,m,n` rows, one block per report.
pub fn reports_csv(rs: &[SolverReport]) -> String {
    let mut w = csv_writer();
    w.write_record([
        "b",
        "g",
        "base_sign",
        "const_sign",
        "mode",
        "d1",
        "d2",
        "l",
        "m",
        "n",
    ])
    .expect("write");
    for r in rs {
        let s = r.spec;
        for t in &r.solutions {
            let rec = [
                s.b.to_string(),
                s.g.to_string(),
                s.base_sign.to_string(),
                s.const_sign.to_string(),
                s.mode.to_string(),
                t.d1.to_string(),
                t.d2.to_string(),
                t.l.to_string(),
                t.m.to_string(),
                t.n.to_string(),
            ];
            w.write_record(&rec).expect("write");
        }
    }
    finish(w)
}

fn table_csv(w: &mut csv::Writer<Vec<u8>>, t: &SuiteTable) {
    let mut header = vec![t.mode.to_string()];
    header.extend(t.columns.iter().map(u64::to_string));
    w.write_record(&header).expect("write");
    for row in &t.rows {
        let mut rec = vec![row.label.clone()];
        rec.extend(
            row.values
                .iter()
                .map(|v| v.map(|x| x.to_string()).unwrap_or_default()),
        );
        w.write_record(&rec).expect("write");
    }
}

/// The suite tables: a header row `mode,b...` then one row per quantity,
/// tables separated by an empty line.
pub fn suite_csv(s: &SuiteReport) -> String {
    let tables: Vec<String> = s
        .tables
        .iter()
        .map(|t| {
            let mut w = csv_writer();
            table_csv(&mut w, t);
            finish(w)
        })
        .collect();
    tables.join("\n")
}

pub fn report_text(r: &SolverReport) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "{}", r.spec);
    let _ = writeln!(o, "  method: {:?}", r.method);
    let _ = writeln!(
        o,
        "  theorem bounds: n <= {}, l,m <= {}",
        r.theorem_bounds.n_max, r.theorem_bounds.lm_max
    );
    if let (Some(w1), Some(w2)) = (r.step1_w_max, r.step2_w_max) {
        let (l1, l2) = match r.spec.mode {
            Mode::Sum => ("m-l", "n-2"),
            Mode::Diff => ("l-m-2", "n-1"),
        };
        let _ = writeln!(o, "  step 1: {l1} <= {w1}; step 2: {l2} <= {w2}");
    }
    let _ = writeln!(
        o,
        "  search box: n <= {}, l,m <= {} (size relation applied per n)",
        r.n_cap, r.lm_cap
    );
    let c = r.counts;
    let _ = writeln!(
        o,
        "  solutions: {} with n = 0, {} with n >= 1; max l = {}, m = {}, n = {}",
        c.n_eq_0, c.n_ge_1, c.max_l, c.max_m, c.max_n
    );
    for s in &r.solutions {
        let _ = writeln!(o, "    {s}");
    }
    for f in &r.families {
        let _ = writeln!(o, "  family {}", f.describe());
    }
    for f in &r.flags {
        let _ = writeln!(o, "  note: {f}");
    }
    o
}

pub fn suite_text(s: &SuiteReport) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "g = {}, b in {:?}", s.g, s.b_values);
    for t in &s.tables {
        let _ = writeln!(o, "\n{} equations", t.mode);
        let mut line = format!("{:>8}", "b");
        for c in &t.columns {
            let _ = write!(line, "{c:>6}");
        }
        let _ = writeln!(o, "{line}");
        for row in &t.rows {
            let mut line = format!("{:>8}", row.label);
            for v in &row.values {
                let _ = write!(
                    line,
                    "{:>6}",
                    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
                );
            }
            let _ = writeln!(o, "{line}");
        }
        if let Some(tot) = s.totals(t.mode) {
            let _ = writeln!(
                o,
                "  n >= 1: {} over the table, {} over every b",
                tot.table_n_ge_1, tot.all_n_ge_1
            );
        }
    }
    for c in s.cells.iter().filter(|c| !c.tabulated(s.g)) {
        for r in &c.reports {
            let _ = writeln!(
                o,
                "\n{}: {} with n = 0, {} with n >= 1 (box n <= {}, l,m <= {})",
                r.spec, r.counts.n_eq_0, r.counts.n_ge_1, r.n_cap, r.lm_cap
            );
        }
    }
    if !s.flags.is_empty() {
        let _ = writeln!(o, "\nnotes:");
        for f in &s.flags {
            let _ = writeln!(o, "  {f}");
        }
    }
    o
}

/// The two reduction steps of one equation, without the enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepsDocument {
    pub spec: EquationSpec,
    pub equation: String,
    pub method: Method,
    pub step1: StepSection,
    pub step2: StepSection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Versioned<T> {
    schema_version: u32,
    items: Vec<T>,
}

fn versioned<T: Serialize>(items: Vec<T>) -> String {
    to_json(&Versioned {
        schema_version: SCHEMA_VERSION,
        items,
    })
}

pub fn steps_json(rs: &[SolverReport]) -> String {
    versioned(
        rs.iter()
            .map(|r| {
                let d = ReportDocument::from(r);
                StepsDocument {
                    spec: d.spec,
                    equation: d.equation,
                    method: d.method,
                    step1: d.step1,
                    step2: d.step2,
                }
            })
            .collect(),
    )
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One row per reduction case: the spec, the case and the bound it gives.
pub fn steps_csv(rs: &[SolverReport]) -> String {
    let mut w = csv_writer();
    w.write_record([
        "b",
        "g",
        "base_sign",
        "const_sign",
        "mode",
        "step",
        "d1",
        "d2",
        "gap",
        "w",
    ])
    .expect("write");
    for r in rs {
        let s = r.spec;
        for t in &r.traces {
            let step = match t.step {
                StepKind::GapReduction => "1",
                StepKind::NReduction => "2",
            };
            let rec = [
                s.b.to_string(),
                s.g.to_string(),
                s.base_sign.to_string(),
                s.const_sign.to_string(),
                s.mode.to_string(),
                step.to_string(),
                opt(t.d1),
                opt(t.d2),
                opt(t.gap),
                t.w.to_string(),
            ];
            w.write_record(&rec).expect("write");
        }
    }
    finish(w)
}

pub fn steps_text(rs: &[SolverReport]) -> String {
    let mut o = String::new();
    for r in rs {
        let _ = writeln!(o, "{}", r.spec);
        for t in &r.traces {
            let _ = writeln!(
                o,
                "  {:?} d1={} d2={} gap={}: {:?}, eps {}, w <= {}{}",
                t.step,
                opt(t.d1),
                opt(t.d2),
                opt(t.gap),
                t.resolution,
                t.outcome.epsilon.as_deref().unwrap_or("-"),
                t.w,
                t.pin
                    .as_ref()
                    .map(|p| format!(" (pinned at x = {})", p.x))
                    .unwrap_or_default()
            );
        }
        let _ = writeln!(
            o,
            "  step 1 max: {}; step 2 max: {}",
            opt(r.step1_w_max),
            opt(r.step2_w_max)
        );
    }
    o
}

/// The theorem bounds of one `(b, g, mode)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsEntry {
    pub b: u64,
    pub g: u64,
    pub mode: Mode,
    pub bounds: BoundReport,
}

pub fn bounds_json(es: &[BoundsEntry]) -> String {
    versioned(es.to_vec())
}

pub fn bounds_csv(es: &[BoundsEntry]) -> String {
    let mut w = csv_writer();
    w.write_record([
        "b",
        "g",
        "mode",
        "n_max",
        "lm_max",
        "gap_bound",
        "step2_n_bound",
    ])
    .expect("write");
    for e in es {
        let r = &e.bounds;
        let rec = [
            e.b.to_string(),
            e.g.to_string(),
            e.mode.to_string(),
            r.n_max.to_string(),
            r.lm_max.to_string(),
            r.gap_bound.to_string(),
            r.step2_n_bound.to_string(),
        ];
        w.write_record(&rec).expect("write");
    }
    finish(w)
}

pub fn bounds_text(es: &[BoundsEntry]) -> String {
    let mut o = String::new();
    for e in es {
        let r = &e.bounds;
        let _ = writeln!(o, "b = {}, g = {}, {}:", e.b, e.g, e.mode);
        let _ = writeln!(
            o,
            "  C1 < {}, C2 < {}, H = {}, n + 1.6 < {}",
            r.c1, r.c2, r.h, r.l_bound
        );
        let _ = writeln!(o, "  n <= {}, l,m <= {}", r.n_max, r.lm_max);
        let _ = writeln!(
            o,
            "  before reduction: gap <= {}, n <= {}",
            r.gap_bound, r.step2_n_bound
        );
    }
    o
}

pub fn families_json(fs: &[FamilyDescriptor]) -> String {
    versioned(fs.to_vec())
}

pub fn families_csv(fs: &[FamilyDescriptor]) -> String {
    let mut w = csv_writer();
    w.write_record([
        "b",
        "g",
        "base_sign",
        "const_sign",
        "mode",
        "d1",
        "d2",
        "l0",
        "dl",
        "m0",
        "dm",
        "n0",
        "dn",
        "t_min",
    ])
    .expect("write");
    for f in fs {
        let s = f.spec;
        let mut rec = vec![
            s.b.to_string(),
            s.g.to_string(),
            s.base_sign.to_string(),
            s.const_sign.to_string(),
            s.mode.to_string(),
        ];
        let nums = [
            f.d1, f.d2, f.l.base, f.l.step, f.m.base, f.m.step, f.n.base, f.n.step, f.t_min,
        ];
        rec.extend(nums.iter().map(u64::to_string));
        w.write_record(&rec).expect("write");
    }
    finish(w)
}

pub fn families_text(fs: &[FamilyDescriptor]) -> String {
    fs.iter()
        .map(|f| format!("{}: {}\n", f.spec, f.describe()))
        .collect()
}
