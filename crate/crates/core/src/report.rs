//! Report rendering in text, CSV and JSON-like form.
//!
//! Rationals are printed exactly and as a 20-significant-digit decimal; a
//! trailing `...` marks a truncated expansion. In JSON-like output every
//! rational is an object `{"exact": "p/q", "decimal": "..."}` and
//! [`rational_from_json`] reads it back without loss.

use std::fmt::Write;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::complement::ComplementResult;
use crate::decision::{DecisionProblem, ValueReport};
use crate::error::Error;
use crate::mechanism::AuditReport;
use crate::rational::{format_both, format_decimal, format_exact, parse_rational, Rational};
use crate::scenario::serialize_signal;
use crate::signal::Signal;

pub const DECIMAL_DIGITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    JsonLike,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json-like" | "json" => Ok(Format::JsonLike),
            other => Err(format!("unknown format `{other}` (text, csv, json-like)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Number(Rational),
    Text(String),
    Flag(bool),
}

impl From<Rational> for Cell {
    fn from(v: Rational) -> Self {
        Cell::Number(v)
    }
}

impl From<&Rational> for Cell {
    fn from(v: &Rational) -> Self {
        Cell::Number(v.clone())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Number(v) => format_both(v),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => if *b { "yes" } else { "no" }.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Number(v) => rational_to_json(v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Flag(b) => Value::Bool(*b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// A titled list of fields, tables, preformatted blocks and notes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub title: String,
    pub fields: Vec<(String, Cell)>,
    pub tables: Vec<Table>,
    pub blocks: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Report::default()
        }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl Into<Cell>) -> &mut Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn table(&mut self, table: Table) -> &mut Self {
        self.tables.push(table);
        self
    }

    pub fn block(&mut self, name: impl Into<String>, text: impl Into<String>) -> &mut Self {
        self.blocks.push((name.into(), text.into()));
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn field_value(&self, key: &str) -> Option<&Cell> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Csv => self.to_csv(),
            Format::JsonLike => self.to_json_like(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("== {} ==\n", self.title);
        let width = self.fields.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        for (k, v) in &self.fields {
            let _ = writeln!(out, "{k:<width$}  {}", v.text());
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n[{}]", t.name);
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|c| {
                    cells
                        .iter()
                        .map(|r| r[c].chars().count())
                        .chain(std::iter::once(t.columns[c].chars().count()))
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |row: &[String]| {
                row.iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "{}", line(&t.columns));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        for (name, text) in &self.blocks {
            let _ = writeln!(out, "\n[{name}]");
            out.push_str(text);
            if !text.ends_with('\n') {
                out.push('\n');
            }
        }
        if !self.notes.is_empty() {
            out.push('\n');
            for n in &self.notes {
                let _ = writeln!(out, "note: {n}");
            }
        }
        out
    }

    /// One CSV section per part, separated by blank lines. Rational cells
    /// expand into an exact column and a `_decimal` column.
    pub fn to_csv(&self) -> String {
        let mut sections = Vec::new();
        let mut summary = vec![vec!["title".to_string(), self.title.clone(), String::new()]];
        for (k, v) in &self.fields {
            let (exact, decimal) = csv_pair(v);
            summary.push(vec![k.clone(), exact, decimal]);
        }
        sections.push(csv_section(&["key", "value", "decimal"], summary));
        for t in &self.tables {
            let numeric: Vec<bool> = (0..t.columns.len())
                .map(|c| t.rows.iter().any(|r| matches!(r[c], Cell::Number(_))))
                .collect();
            let mut header = vec!["table".to_string()];
            for (c, name) in t.columns.iter().enumerate() {
                header.push(name.clone());
                if numeric[c] {
                    header.push(format!("{name}_decimal"));
                }
            }
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    let mut row = vec![t.name.clone()];
                    for (c, cell) in r.iter().enumerate() {
                        let (exact, decimal) = csv_pair(cell);
                        row.push(exact);
                        if numeric[c] {
                            row.push(decimal);
                        }
                    }
                    row
                })
                .collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            sections.push(csv_section(&header, rows));
        }
        if !self.blocks.is_empty() {
            let rows = self.blocks.iter().map(|(n, t)| vec![n.clone(), t.clone()]).collect();
            sections.push(csv_section(&["block", "text"], rows));
        }
        if !self.notes.is_empty() {
            let rows = self.notes.iter().map(|n| vec![n.clone()]).collect();
            sections.push(csv_section(&["note"], rows));
        }
        sections.join("\n")
    }

    pub fn to_json_value(&self) -> Value {
        let mut fields = Map::new();
        for (k, v) in &self.fields {
            fields.insert(k.clone(), v.json());
        }
        let tables: Vec<Value> = self
            .tables
            .iter()
            .map(|t| {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        let mut obj = Map::new();
                        for (c, cell) in t.columns.iter().zip(r) {
                            obj.insert(c.clone(), cell.json());
                        }
                        Value::Object(obj)
                    })
                    .collect();
                json!({ "name": t.name, "rows": rows })
            })
            .collect();
        let blocks: Map<String, Value> = self
            .blocks
            .iter()
            .map(|(n, t)| (n.clone(), Value::String(t.clone())))
            .collect();
        json!({
            "title": self.title,
            "fields": fields,
            "tables": tables,
            "blocks": blocks,
            "notes": self.notes,
        })
    }

    pub fn to_json_like(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("serializable");
        s.push('\n');
        s
    }
}

fn csv_pair(cell: &Cell) -> (String, String) {
    match cell {
        Cell::Number(v) => (format_exact(v), format_decimal(v, DECIMAL_DIGITS)),
        other => (other.text(), String::new()),
    }
}

fn csv_section(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn rational_to_json(v: &Rational) -> Value {
    json!({ "exact": format_exact(v), "decimal": format_decimal(v, DECIMAL_DIGITS) })
}

/// Reads a rational written by [`rational_to_json`].
pub fn rational_from_json(value: &Value) -> Result<Rational, Error> {
    value
        .get("exact")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::InvalidNumber(value.to_string()))
        .and_then(parse_rational)
}

pub fn signal_block(signal: &Signal) -> String {
    serialize_signal(signal)
}

/// Payoff of a signal with its per-message breakdown.
pub fn eval_report(problem: &DecisionProblem, signal: &Signal) -> Result<Report, Error> {
    let mut r = Report::new(format!("eval {}", signal.name()));
    r.field("signal", signal.name());
    r.field("U", problem.exante_payoff(signal)?);
    r.field("full-information U", problem.full_info_payoff());
    let mut t = Table::new("messages", &["message", "probability", "action", "interim payoff", "posterior"]);
    let mut tied = Vec::new();
    for m in signal.messages() {
        let p = m.marginal_probability(problem.prior())?;
        let (action, value, posterior) = match problem.induced_action(m) {
            Some(choice) => {
                if choice.tied {
                    tied.push(m.label().to_string());
                }
                let post = m.posterior(problem.prior())?;
                let post = post.weights().iter().map(format_exact).collect::<Vec<_>>().join(" ");
                (
                    problem.actions()[choice.action].clone(),
                    Cell::from(problem.interim_payoff(m)?),
                    post,
                )
            }
            None => ("-".to_string(), Cell::from("-"), "-".to_string()),
        };
        t.push(vec![m.label().into(), p.into(), action.into(), value, posterior.into()]);
    }
    r.table(t);
    if !tied.is_empty() {
        r.note(format!(
            "several actions are optimal after {}; the lowest-index action is reported",
            tied.join(", ")
        ));
    }
    Ok(r)
}

pub fn join_report(problem: &DecisionProblem, left: &Signal, right: &Signal) -> Result<Report, Error> {
    let joined = left.join(right)?;
    let mut r = Report::new(format!("join {} {}", left.name(), right.name()));
    r.field(format!("U({})", left.name()), problem.exante_payoff(left)?);
    r.field(format!("U({})", right.name()), problem.exante_payoff(right)?);
    r.field("U(join)", problem.exante_payoff(&joined)?);
    r.field("messages", joined.messages().len().to_string());
    r.block("join", signal_block(&joined));
    Ok(r)
}

pub fn value_report(v: &ValueReport) -> Report {
    let mut r = Report::new(format!("value of {} given {}", v.added, v.base));
    r.field("added", v.added.as_str());
    r.field("base", v.base.as_str());
    r.field("U(base)", &v.u_before);
    r.field("U(base joined with added)", &v.u_after);
    r.field("value", &v.increment);
    r
}

pub fn complement_report(base: &Signal, full_info: &Rational, c: &ComplementResult) -> Report {
    let mut r = Report::new(format!("complement of {}", base.name()));
    r.field("base", base.name());
    r.field("method", c.method.to_string());
    if let Some(q) = c.grid {
        r.field("grid", format!("1/{q}"));
    }
    r.field("U(complement)", &c.u_complement);
    r.field("U(base joined with complement)", &c.u_join);
    r.field("full-information U", full_info);
    r.field("complete", &c.u_join == full_info);
    r.block("complement", signal_block(&c.complement));
    r
}

pub fn audit_report(title: &str, audit: &AuditReport) -> Report {
    let mut r = Report::new(title.to_string());
    r.field("full-information U", &audit.full_info);
    r.field("revenue", &audit.revenue);
    r.field("IC violations", audit.ic_violations.len().to_string());
    r.field("IR violations", audit.ir_violations.len().to_string());
    r.field("efficient surplus", audit.efficient_surplus);
    r.field("audit", if audit.passes() { "PASS" } else { "FAIL" });
    let mut t = Table::new(
        "types",
        &["type", "weight", "U(own)", "U(with item)", "value", "price", "IR slack"],
    );
    for (row, ir) in audit.rows.iter().zip(&audit.ir_slacks) {
        t.push(vec![
            row.type_id.as_str().into(),
            (&row.weight).into(),
            (&row.u_own).into(),
            (&row.u_with_item).into(),
            (&row.value).into(),
            (&row.price).into(),
            (&ir.slack).into(),
        ]);
    }
    r.table(t);
    let mut t = Table::new("incentive", &["type", "mimics", "IC slack", "status"]);
    for s in &audit.ic_slacks {
        let status = if s.slack < Rational::from_integer(0.into()) { "FAIL" } else { "ok" };
        t.push(vec![
            s.type_id.as_str().into(),
            s.mimicked.as_str().into(),
            (&s.slack).into(),
            status.into(),
        ]);
    }
    r.table(t);
    r
}
