//! A grid of equations: every sign choice for each `b`, one base `g`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{multiplicative_dependence, reference, solve, SolverOptions, SolverReport};
use crate::enumerate::{check_solution, EquationSpec, Mode};

/// All four sign choices of one `(b, mode)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteCell {
    pub b: u64,
    pub mode: Mode,
    pub reports: Vec<SolverReport>,
    pub error: Option<String>,
}

impl SuiteCell {
    fn fold<T: Ord>(&self, f: impl Fn(&SolverReport) -> Option<T>) -> Option<T> {
        self.reports.iter().filter_map(f).max()
    }

    fn total(&self, f: impl Fn(&SolverReport) -> u64) -> u64 {
        self.reports.iter().map(f).sum()
    }

    /// Whether `log b / log g` is irrational, i.e. the cell is in the
    /// reduction tables.
    pub fn tabulated(&self, g: u64) -> bool {
        multiplicative_dependence(self.b, g).is_none()
    }

    /// The cell's value in the row `label`, if defined.
    pub fn row_value(&self, label: &str) -> Option<i64> {
        if self.error.is_some() {
            return None;
        }
        let v = match label {
            "m-l<=" | "l-m-2<=" => self.fold(|r| r.step1_w_max)?,
            "n-2<=" | "n-1<=" => self.fold(|r| r.step2_w_max)?,
            "n_b" => self.fold(|r| Some(r.n_cap))? as i64,
            "ml_b" => self.fold(|r| Some(r.lm_cap))? as i64,
            "N0=" => self.total(|r| r.counts.n_eq_0) as i64,
            "N=" => self.total(|r| r.counts.n_ge_1) as i64,
            "l<=" => self.fold(|r| Some(r.counts.max_l))? as i64,
            "m<=" => self.fold(|r| Some(r.counts.max_m))? as i64,
            "n<=" => self.fold(|r| Some(r.counts.max_n))? as i64,
            _ => return None,
        };
        Some(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    /// One cell per column; `None` where the value is undefined.
    pub values: Vec<Option<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteTable {
    pub mode: Mode,
    pub columns: Vec<u64>,
    pub rows: Vec<TableRow>,
}

impl SuiteTable {
    pub fn row(&self, label: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteTotals {
    pub mode: Mode,
    /// Solutions with `n >= 1` over the tabulated columns.
    pub table_n_ge_1: u64,
    /// The same over every `b`, including those with rational
    /// `log b / log g`.
    pub all_n_ge_1: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub g: u64,
    pub b_values: Vec<u64>,
    pub cells: Vec<SuiteCell>,
    pub tables: Vec<SuiteTable>,
    pub totals: Vec<SuiteTotals>,
    pub flags: Vec<String>,
}

impl SuiteReport {
    pub fn table(&self, mode: Mode) -> Option<&SuiteTable> {
        self.tables.iter().find(|t| t.mode == mode)
    }

    pub fn cell(&self, b: u64, mode: Mode) -> Option<&SuiteCell> {
        self.cells.iter().find(|c| c.b == b && c.mode == mode)
    }

    pub fn totals(&self, mode: Mode) -> Option<&SuiteTotals> {
        self.totals.iter().find(|t| t.mode == mode)
    }
}

fn row_labels(mode: Mode) -> [&'static str; 9] {
    match mode {
        Mode::Sum => [
            "m-l<=", "n-2<=", "n_b", "ml_b", "N0=", "N=", "l<=", "m<=", "n<=",
        ],
        Mode::Diff => [
            "l-m-2<=", "n-1<=", "n_b", "ml_b", "N0=", "N=", "l<=", "m<=", "n<=",
        ],
    }
}

fn run_cell(b: u64, g: u64, mode: Mode, opts: &SolverOptions) -> SuiteCell {
    let result = EquationSpec::all_signs(b, g, mode).and_then(|specs| {
        specs
            .par_iter()
            .map(|s| solve(s, opts))
            .collect::<crate::Result<Vec<_>>>()
    });
    match result {
        Ok(reports) => SuiteCell {
            b,
            mode,
            reports,
            error: None,
        },
        Err(e) => SuiteCell {
            b,
            mode,
            reports: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Solves every `(b, mode)` of the grid. The difference equations share
/// one `M`, taken at the largest `b`, unless `opts.bound_base` says
/// otherwise. A failing cell is recorded and the rest still run.
pub fn run_suite(b_values: &[u64], g: u64, modes: &[Mode], opts: &SolverOptions) -> SuiteReport {
    let max_b = b_values.iter().copied().max().unwrap_or(2);
    let jobs: Vec<(u64, Mode)> = modes
        .iter()
        .flat_map(|&m| b_values.iter().map(move |&b| (b, m)))
        .collect();
    let cells: Vec<SuiteCell> = jobs
        .par_iter()
        .map(|&(b, mode)| {
            let mut o = opts.clone();
            if mode == Mode::Diff && o.bound_base.is_none() {
                o.bound_base = Some(max_b);
            }
            run_cell(b, g, mode, &o)
        })
        .collect();

    let mut tables = Vec::new();
    let mut totals = Vec::new();
    let mut flags = Vec::new();
    for &mode in modes {
        let mine: Vec<&SuiteCell> = cells.iter().filter(|c| c.mode == mode).collect();
        let tab: Vec<&SuiteCell> = mine.iter().copied().filter(|c| c.tabulated(g)).collect();
        let rows = row_labels(mode)
            .iter()
            .map(|label| TableRow {
                label: label.to_string(),
                values: tab.iter().map(|c| c.row_value(label)).collect(),
            })
            .collect();
        tables.push(SuiteTable {
            mode,
            columns: tab.iter().map(|c| c.b).collect(),
            rows,
        });
        let count = |cs: &[&SuiteCell]| {
            cs.iter()
                .map(|c| c.row_value("N=").unwrap_or(0) as u64)
                .sum()
        };
        totals.push(SuiteTotals {
            mode,
            table_n_ge_1: count(&tab),
            all_n_ge_1: count(&mine),
        });
        for c in &mine {
            if let Some(e) = &c.error {
                flags.push(format!("{mode} b={}: failed: {e}", c.b));
            }
        }
    }
    if g == 10 {
        flags.extend(compare_with_reference(&cells, &tables, &totals, b_values));
    }
    SuiteReport {
        g,
        b_values: b_values.to_vec(),
        cells,
        tables,
        totals,
        flags,
    }
}

/// Discrepancies against the published base-10 values.
fn compare_with_reference(
    cells: &[SuiteCell],
    tables: &[SuiteTable],
    totals: &[SuiteTotals],
    b_values: &[u64],
) -> Vec<String> {
    let mut flags = Vec::new();
    for t in tables {
        for &(mode, label, values) in reference::ROWS {
            if mode != t.mode {
                continue;
            }
            let Some(row) = t.row(label) else { continue };
            for (i, b) in reference::COLUMNS.iter().enumerate() {
                let Some(j) = t.columns.iter().position(|c| c == b) else {
                    continue;
                };
                if let Some(v) = row.values[j] {
                    if v != values[i] as i64 {
                        flags.push(format!(
                            "{mode} {label} b={b}: computed {v}, published {}",
                            values[i]
                        ));
                    }
                }
            }
        }
    }
    let full_range = (2..=12).all(|b| b_values.contains(&b));
    for t in totals {
        if !full_range {
            break;
        }
        match t.mode {
            Mode::Sum => flags.push(format!(
                "sum: {} solutions with n >= 1 over the tabulated b, {} including b = 10 (published total {})",
                t.table_n_ge_1,
                t.all_n_ge_1,
                reference::SUM_TOTAL
            )),
            Mode::Diff if t.all_n_ge_1 != reference::DIFF_TOTAL => flags.push(format!(
                "diff: {} solutions with n >= 1 including b = 10, published {}",
                t.all_n_ge_1,
                reference::DIFF_TOTAL
            )),
            Mode::Diff => {}
        }
    }
    for (b, published) in reference::SUM_N0_EXTRAS {
        let Some(c) = cells.iter().find(|c| c.b == b && c.mode == Mode::Sum) else {
            continue;
        };
        let extras = n0_extras(c);
        if extras.len() as u64 != published {
            flags.push(format!(
                "sum b={b}: {} solutions with n = 0 besides (l,m) = (1,1), published {published}: {}",
                extras.len(),
                extras.join(" ")
            ));
        }
    }
    flags.extend(check_representations(cells));
    flags
}

/// `n = 0` solutions other than `(d1, d2, 1, 1, 0)`, as strings.
pub fn n0_extras(cell: &SuiteCell) -> Vec<String> {
    cell.reports
        .iter()
        .flat_map(|r| r.solutions.iter())
        .filter(|s| s.n == 0 && !(s.l == 1 && s.m == 1))
        .map(|s| s.to_string())
        .collect()
}

/// Checks the published `b = 2` sample representations against the
/// computed solution sets.
fn check_representations(cells: &[SuiteCell]) -> Vec<String> {
    let mut flags = Vec::new();
    for (mode, s, c, t) in reference::REPRESENTATIONS {
        let Some(cell) = cells.iter().find(|x| x.b == 2 && x.mode == mode) else {
            continue;
        };
        let Some(report) = cell
            .reports
            .iter()
            .find(|r| r.spec.base_sign == s && r.spec.const_sign == c)
        else {
            continue;
        };
        if report.solutions.contains(&t) {
            continue;
        }
        let valid = check_solution(&report.spec, &t);
        let near: Vec<String> = report
            .solutions
            .iter()
            .filter(|x| x.n == t.n && x.d1 == t.d1 && x.d2 == t.d2)
            .map(|x| x.to_string())
            .collect();
        flags.push(format!(
            "published representation {t} of {} {}; matching solutions with the same digits and n: {}",
            report.spec,
            if valid { "is missing from the solution set" } else { "does not satisfy the equation" },
            if near.is_empty() { "none".to_string() } else { near.join(" ") }
        ));
    }
    flags
}
