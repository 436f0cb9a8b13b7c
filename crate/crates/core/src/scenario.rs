//! Scenario files.
//!
//! A line-oriented format with `#` comments. Blocks start with a header
//! line; indentation is cosmetic.
//!
//! ```text
//! problem
//!   states: student professional
//!   actions: price-50 price-100
//!   prior: 3/10 7/10
//!   payoff price-50: 50 50
//!   payoff price-100: 0 100
//!
//! signal residential
//!   message house: student [0,91/300); professional [0,559/700)
//!   message apartment: student [91/300,1); professional [559/700,1)
//!
//! signal trivial
//!   message all: states student professional
//!
//! types
//!   type uninformed = trivial weight 1/2
//!   type owner = residential weight 1/2
//!
//! menu offer
//!   item uninformed = full price 15
//!   item owner = civil-status price 58/5
//! ```
//!
//! `message <label>: states <id>...` gives the message full support on the
//! listed states. States missing from a message line have empty support.
//! Numerals are integers, `p/q` fractions or finite decimals. The signal
//! names `trivial` and `full` resolve to the uninformative and the fully
//! revealing signal unless the file defines them.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::decision::{Belief, DecisionProblem};
use crate::error::Error;
use crate::interval::IntervalSet;
use crate::mechanism::{Menu, TypeSpace};
use crate::rational::{format_exact, parse_rational, sum, Rational};
use num_traits::{One, Signed};
use crate::signal::{Message, Signal};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeEntry {
    pub id: String,
    pub signal: String,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MenuEntry {
    pub type_id: String,
    pub signal: String,
    pub price: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MenuSpec {
    pub name: String,
    pub items: Vec<MenuEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioFile {
    pub problem: DecisionProblem,
    pub signals: Vec<Signal>,
    pub types: Option<Vec<TypeEntry>>,
    pub menus: Vec<MenuSpec>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept states without a unique optimal action.
    pub allow_degenerate: bool,
}

impl ScenarioFile {
    /// A declared signal, or the implicit `trivial` / `full`.
    pub fn signal(&self, name: &str) -> Option<Signal> {
        if let Some(s) = self.signals.iter().find(|s| s.name() == name) {
            return Some(s.clone());
        }
        match name {
            "trivial" => Some(Signal::trivial(self.problem.states())),
            "full" => Some(Signal::fully_revealing(self.problem.states())),
            _ => None,
        }
    }

    pub fn require_signal(&self, name: &str) -> Result<Signal, Error> {
        self.signal(name).ok_or_else(|| Error::InvalidSignal {
            signal: name.to_string(),
            reason: "no such signal in the scenario".into(),
        })
    }

    pub fn type_space(&self) -> Result<Option<TypeSpace>, Error> {
        let Some(entries) = &self.types else {
            return Ok(None);
        };
        let mut types = Vec::with_capacity(entries.len());
        let mut weights = Vec::with_capacity(entries.len());
        for e in entries {
            let signal = self.require_signal(&e.signal)?;
            types.push((e.id.clone(), signal));
            weights.push(e.weight.clone());
        }
        TypeSpace::new(types, weights).map(Some)
    }

    pub fn menu(&self, name: &str) -> Result<Menu, Error> {
        let spec = self
            .menus
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::InvalidTypeSpace(format!("no menu named `{name}`")))?;
        let mut menu = Menu::new();
        for item in &spec.items {
            menu.insert(
                item.type_id.clone(),
                self.require_signal(&item.signal)?,
                item.price.clone(),
            );
        }
        Ok(menu)
    }

    /// Canonical text form; parsing it yields an equal scenario.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let p = &self.problem;
        let _ = writeln!(out, "problem");
        let _ = writeln!(out, "  states: {}", p.states().join(" "));
        let _ = writeln!(out, "  actions: {}", p.actions().join(" "));
        let _ = writeln!(out, "  prior: {}", join_numbers(p.prior().weights()));
        for (a, row) in p.actions().iter().zip(p.payoffs()) {
            let _ = writeln!(out, "  payoff {a}: {}", join_numbers(row));
        }
        for s in &self.signals {
            out.push('\n');
            out.push_str(&serialize_signal(s));
        }
        if let Some(types) = &self.types {
            let _ = writeln!(out, "\ntypes");
            for t in types {
                let _ = writeln!(
                    out,
                    "  type {} = {} weight {}",
                    t.id,
                    t.signal,
                    format_exact(&t.weight)
                );
            }
        }
        for m in &self.menus {
            let _ = writeln!(out, "\nmenu {}", m.name);
            for item in &m.items {
                let _ = writeln!(
                    out,
                    "  item {} = {} price {}",
                    item.type_id,
                    item.signal,
                    format_exact(&item.price)
                );
            }
        }
        out
    }
}

fn join_numbers(values: &[Rational]) -> String {
    values.iter().map(format_exact).collect::<Vec<_>>().join(" ")
}

/// One signal block in the scenario grammar.
pub fn serialize_signal(signal: &Signal) -> String {
    let mut out = format!("signal {}\n", signal.name());
    for m in signal.messages() {
        let _ = write!(out, "  message {}:", m.label());
        let nonempty = m.support_states();
        if m.is_simple() && !nonempty.is_empty() {
            let ids: Vec<&str> = nonempty
                .iter()
                .map(|&w| signal.states()[w].as_str())
                .collect();
            let _ = write!(out, " states {}", ids.join(" "));
        } else {
            let parts: Vec<String> = nonempty
                .iter()
                .map(|&w| format!("{} {}", signal.states()[w], m.support_in(w)))
                .collect();
            if !parts.is_empty() {
                let _ = write!(out, " {}", parts.join("; "));
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_scenario(text: &str) -> Result<ScenarioFile, Error> {
    parse_scenario_with(text, ParseOptions::default())
}

pub fn parse_scenario_with(text: &str, options: ParseOptions) -> Result<ScenarioFile, Error> {
    Parser::default().run(text, options)
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Default)]
struct RawProblem {
    header: Option<usize>,
    states: Option<(Pos, Vec<String>)>,
    actions: Option<(Pos, Vec<String>)>,
    prior: Option<(Pos, Vec<Rational>)>,
    payoffs: Vec<(Pos, String, Vec<Rational>)>,
}

/// A state id with its position and half-open intervals.
type StateIntervals = (Pos, String, Vec<(Rational, Rational)>);

enum RawSupport {
    States(Vec<(Pos, String)>),
    Intervals(Vec<StateIntervals>),
}

struct RawMessage {
    pos: Pos,
    label: String,
    support: RawSupport,
}

struct RawSignal {
    pos: Pos,
    name: String,
    messages: Vec<RawMessage>,
}

struct RawTypeEntry {
    pos: Pos,
    entry: TypeEntry,
}

struct RawMenu {
    name: String,
    items: Vec<(Pos, MenuEntry)>,
}

enum Block {
    None,
    Problem,
    Signal,
    Types,
    Menu,
}

#[derive(Default)]
struct Parser {
    problem: RawProblem,
    signals: Vec<RawSignal>,
    types: Option<Vec<RawTypeEntry>>,
    menus: Vec<RawMenu>,
}

/// Whitespace-separated tokens with 1-based columns.
fn tokens(line: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (offset + line[..s].chars().count() + 1, t))
        .collect()
}

fn check_ident(line: usize, column: usize, ident: &str) -> Result<String, Error> {
    if ident.is_empty() || ident.chars().any(|c| ":;=[](),#".contains(c) || c.is_whitespace()) {
        return Err(err(line, column, format!("invalid identifier `{ident}`")));
    }
    Ok(ident.to_string())
}

fn number(line: usize, column: usize, text: &str) -> Result<Rational, Error> {
    parse_rational(text).map_err(|e| err(line, column, e.to_string()))
}

impl Parser {
    fn run(mut self, text: &str, options: ParseOptions) -> Result<ScenarioFile, Error> {
        let mut block = Block::None;
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(i) => &raw_line[..i],
                None => raw_line,
            };
            let toks = tokens(line, 0);
            let Some(&(col, head)) = toks.first() else {
                continue;
            };
            match head {
                "problem" => {
                    if toks.len() != 1 {
                        return Err(err(line_no, toks[1].0, "unexpected text after `problem`"));
                    }
                    if self.problem.header.is_some() {
                        return Err(err(line_no, col, "duplicate problem block"));
                    }
                    self.problem.header = Some(line_no);
                    block = Block::Problem;
                }
                "signal" => {
                    if toks.len() != 2 {
                        return Err(err(line_no, col, "expected `signal <name>`"));
                    }
                    let name = check_ident(line_no, toks[1].0, toks[1].1)?;
                    if self.signals.iter().any(|s| s.name == name) {
                        return Err(err(line_no, toks[1].0, format!("duplicate signal `{name}`")));
                    }
                    self.signals.push(RawSignal {
                        pos: Pos { line: line_no, column: toks[1].0 },
                        name,
                        messages: Vec::new(),
                    });
                    block = Block::Signal;
                }
                "types" => {
                    if toks.len() != 1 {
                        return Err(err(line_no, toks[1].0, "unexpected text after `types`"));
                    }
                    if self.types.is_some() {
                        return Err(err(line_no, col, "duplicate types block"));
                    }
                    self.types = Some(Vec::new());
                    block = Block::Types;
                }
                "menu" => {
                    if toks.len() != 2 {
                        return Err(err(line_no, col, "expected `menu <name>`"));
                    }
                    let name = check_ident(line_no, toks[1].0, toks[1].1)?;
                    if self.menus.iter().any(|m| m.name == name) {
                        return Err(err(line_no, toks[1].0, format!("duplicate menu `{name}`")));
                    }
                    self.menus.push(RawMenu {
                        name,
                        items: Vec::new(),
                    });
                    block = Block::Menu;
                }
                _ => match block {
                    Block::None => {
                        return Err(err(line_no, col, format!("unexpected `{head}` outside a block")))
                    }
                    Block::Problem => self.problem_line(line_no, line, &toks)?,
                    Block::Signal => self.message_line(line_no, line, &toks)?,
                    Block::Types => self.type_line(line_no, &toks)?,
                    Block::Menu => self.item_line(line_no, &toks)?,
                },
            }
        }
        self.finish(options)
    }

    fn problem_line(&mut self, line_no: usize, line: &str, toks: &[(usize, &str)]) -> Result<(), Error> {
        let (col, head) = toks[0];
        let colon = line
            .find(':')
            .ok_or_else(|| err(line_no, col, "expected `key: values`"))?;
        let key_toks = tokens(&line[..colon], 0);
        let values = tokens(&line[colon + 1..], line[..colon + 1].chars().count());
        let pos = Pos { line: line_no, column: col };
        let key: Vec<&str> = key_toks.iter().map(|t| t.1).collect();
        match key.as_slice() {
            ["states"] | ["actions"] => {
                let ids = values
                    .iter()
                    .map(|&(c, t)| check_ident(line_no, c, t))
                    .collect::<Result<Vec<_>, _>>()?;
                if ids.is_empty() {
                    return Err(err(line_no, col, format!("no {} listed", key[0])));
                }
                if key[0] == "states" {
                    if let Some(&(c, _)) = values.iter().find(|t| t.1 == "states") {
                        return Err(err(line_no, c, "`states` is reserved and cannot be a state id"));
                    }
                    if self.problem.states.is_some() {
                        return Err(err(line_no, col, "states listed twice"));
                    }
                    self.problem.states = Some((pos, ids));
                } else {
                    if self.problem.actions.is_some() {
                        return Err(err(line_no, col, "actions listed twice"));
                    }
                    self.problem.actions = Some((pos, ids));
                }
            }
            ["prior"] => {
                let nums = values
                    .iter()
                    .map(|&(c, t)| number(line_no, c, t))
                    .collect::<Result<Vec<_>, _>>()?;
                if self.problem.prior.is_some() {
                    return Err(err(line_no, col, "prior listed twice"));
                }
                self.problem.prior = Some((pos, nums));
            }
            ["payoff", action] => {
                let nums = values
                    .iter()
                    .map(|&(c, t)| number(line_no, c, t))
                    .collect::<Result<Vec<_>, _>>()?;
                self.problem.payoffs.push((
                    Pos { line: line_no, column: key_toks[1].0 },
                    action.to_string(),
                    nums,
                ));
            }
            _ => return Err(err(line_no, col, format!("unknown problem entry `{head}`"))),
        }
        Ok(())
    }

    fn message_line(&mut self, line_no: usize, line: &str, toks: &[(usize, &str)]) -> Result<(), Error> {
        let (col, head) = toks[0];
        if head != "message" {
            return Err(err(line_no, col, format!("expected `message`, found `{head}`")));
        }
        let colon = line
            .find(':')
            .ok_or_else(|| err(line_no, col, "expected `message <label>: ...`"))?;
        let label_toks = tokens(&line[..colon], 0);
        if label_toks.len() != 2 {
            return Err(err(line_no, col, "expected exactly one message label"));
        }
        let label = check_ident(line_no, label_toks[1].0, label_toks[1].1)?;
        let signal = self.signals.last_mut().expect("inside a signal block");
        if signal.messages.iter().any(|m| m.label == label) {
            return Err(err(
                line_no,
                label_toks[1].0,
                format!("duplicate message label `{label}` in signal `{}`", signal.name),
            ));
        }
        let rest = &line[colon + 1..];
        let rest_offset = line[..colon + 1].chars().count();
        let rest_toks = tokens(rest, rest_offset);
        let support = if rest_toks.first().map(|t| t.1) == Some("states") {
            RawSupport::States(
                rest_toks[1..]
                    .iter()
                    .map(|&(c, t)| Ok((Pos { line: line_no, column: c }, check_ident(line_no, c, t)?)))
                    .collect::<Result<_, Error>>()?,
            )
        } else {
            let mut segments = Vec::new();
            let mut seg_start = 0;
            for segment in rest.split(';') {
                let seg_offset = rest_offset + rest[..seg_start].chars().count();
                seg_start += segment.len() + 1;
                let seg_toks = tokens(segment, seg_offset);
                let Some(&(scol, state)) = seg_toks.first() else {
                    if segment.trim().is_empty() && rest.trim().is_empty() {
                        continue;
                    }
                    return Err(err(line_no, seg_offset + 1, "empty state segment"));
                };
                let state = check_ident(line_no, scol, state)?;
                let after = segment.find(state.as_str()).unwrap() + state.len();
                let intervals = parse_intervals(
                    line_no,
                    seg_offset + segment[..after].chars().count(),
                    &segment[after..],
                )?;
                segments.push((Pos { line: line_no, column: scol }, state, intervals));
            }
            RawSupport::Intervals(segments)
        };
        signal.messages.push(RawMessage {
            pos: Pos { line: line_no, column: col },
            label,
            support,
        });
        Ok(())
    }

    fn type_line(&mut self, line_no: usize, toks: &[(usize, &str)]) -> Result<(), Error> {
        // type <id> = <signal> weight <r>
        let shape = toks.len() == 6 && toks[0].1 == "type" && toks[2].1 == "=" && toks[4].1 == "weight";
        if !shape {
            return Err(err(line_no, toks[0].0, "expected `type <id> = <signal> weight <r>`"));
        }
        let entry = TypeEntry {
            id: check_ident(line_no, toks[1].0, toks[1].1)?,
            signal: check_ident(line_no, toks[3].0, toks[3].1)?,
            weight: number(line_no, toks[5].0, toks[5].1)?,
        };
        let types = self.types.as_mut().expect("inside types block");
        if types.iter().any(|t| t.entry.id == entry.id) {
            return Err(err(line_no, toks[1].0, format!("duplicate type `{}`", entry.id)));
        }
        types.push(RawTypeEntry {
            pos: Pos { line: line_no, column: toks[3].0 },
            entry,
        });
        Ok(())
    }

    fn item_line(&mut self, line_no: usize, toks: &[(usize, &str)]) -> Result<(), Error> {
        // item <type-id> = <signal> price <r>
        let shape = toks.len() == 6 && toks[0].1 == "item" && toks[2].1 == "=" && toks[4].1 == "price";
        if !shape {
            return Err(err(line_no, toks[0].0, "expected `item <type-id> = <signal> price <r>`"));
        }
        let entry = MenuEntry {
            type_id: check_ident(line_no, toks[1].0, toks[1].1)?,
            signal: check_ident(line_no, toks[3].0, toks[3].1)?,
            price: number(line_no, toks[5].0, toks[5].1)?,
        };
        let menu = self.menus.last_mut().expect("inside menu block");
        if menu.items.iter().any(|(_, i)| i.type_id == entry.type_id) {
            return Err(err(line_no, toks[1].0, format!("duplicate item for type `{}`", entry.type_id)));
        }
        menu.items.push((Pos { line: line_no, column: toks[1].0 }, entry));
        Ok(())
    }

    fn finish(self, options: ParseOptions) -> Result<ScenarioFile, Error> {
        let header = self
            .problem
            .header
            .ok_or_else(|| err(1, 1, "missing problem block"))?;
        let (_, states) = self
            .problem
            .states
            .ok_or_else(|| err(header, 1, "problem has no `states:` line"))?;
        let (apos, actions) = self
            .problem
            .actions
            .ok_or_else(|| err(header, 1, "problem has no `actions:` line"))?;
        let (ppos, prior) = self
            .problem
            .prior
            .ok_or_else(|| err(header, 1, "problem has no `prior:` line"))?;
        let at = |p: Pos, e: Error| err(p.line, p.column, e.to_string());

        if prior.len() != states.len() {
            return Err(err(
                ppos.line,
                ppos.column,
                format!("invalid prior: {} entries for {} states", prior.len(), states.len()),
            ));
        }
        let prior = Belief::new(prior).map_err(|e| at(ppos, e))?;
        let mut rows: Vec<Option<Vec<Rational>>> = vec![None; actions.len()];
        for (pos, action, row) in self.problem.payoffs {
            let a = actions
                .iter()
                .position(|x| *x == action)
                .ok_or_else(|| err(pos.line, pos.column, format!("unknown action `{action}`")))?;
            if rows[a].is_some() {
                return Err(err(pos.line, pos.column, format!("payoff row for `{action}` given twice")));
            }
            if row.len() != states.len() {
                return Err(err(
                    pos.line,
                    pos.column,
                    format!("payoff row has {} entries for {} states", row.len(), states.len()),
                ));
            }
            rows[a] = Some(row);
        }
        let payoffs = rows
            .into_iter()
            .zip(&actions)
            .map(|(r, a)| r.ok_or_else(|| err(apos.line, apos.column, format!("missing payoff row for `{a}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let problem = if options.allow_degenerate {
            DecisionProblem::new_allow_degenerate(states.clone(), actions, payoffs, prior)
        } else {
            DecisionProblem::new(states.clone(), actions, payoffs, prior)
        }
        .map_err(|e| err(header, 1, e.to_string()))?;

        let n = states.len();
        let state_index = |pos: Pos, id: &str| -> Result<usize, Error> {
            states
                .iter()
                .position(|s| s == id)
                .ok_or_else(|| err(pos.line, pos.column, format!("unknown state `{id}`")))
        };
        let mut signals = Vec::with_capacity(self.signals.len());
        for raw in self.signals {
            let mut messages = Vec::with_capacity(raw.messages.len());
            for m in raw.messages {
                let mut support = vec![IntervalSet::empty(); n];
                let mut seen = BTreeSet::new();
                match m.support {
                    RawSupport::States(list) => {
                        for (pos, id) in list {
                            let w = state_index(pos, &id)?;
                            if !seen.insert(w) {
                                return Err(err(pos.line, pos.column, format!("state `{id}` listed twice")));
                            }
                            support[w] = IntervalSet::full();
                        }
                    }
                    RawSupport::Intervals(list) => {
                        for (pos, id, intervals) in list {
                            let w = state_index(pos, &id)?;
                            if !seen.insert(w) {
                                return Err(err(pos.line, pos.column, format!("state `{id}` listed twice")));
                            }
                            support[w] = IntervalSet::from_intervals(intervals).map_err(|e| at(pos, e))?;
                        }
                    }
                }
                let _ = m.pos;
                messages.push(Message::new(m.label, support));
            }
            let signal = Signal::new(raw.name, states.clone(), messages).map_err(|e| at(raw.pos, e))?;
            signals.push(signal);
        }

        let known = |name: &str| {
            signals.iter().any(|s| s.name() == name) || name == "trivial" || name == "full"
        };
        let types = match self.types {
            None => None,
            Some(raw) => {
                for t in &raw {
                    if !known(&t.entry.signal) {
                        return Err(err(t.pos.line, t.pos.column, format!("unknown signal `{}`", t.entry.signal)));
                    }
                }
                Some(raw.into_iter().map(|t| t.entry).collect::<Vec<_>>())
            }
        };
        let mut menus = Vec::with_capacity(self.menus.len());
        for raw in self.menus {
            for (pos, item) in &raw.items {
                if !known(&item.signal) {
                    return Err(err(pos.line, pos.column, format!("unknown signal `{}`", item.signal)));
                }
                if let Some(types) = &types {
                    if !types.iter().any(|t| t.id == item.type_id) {
                        return Err(err(pos.line, pos.column, format!("unknown type `{}`", item.type_id)));
                    }
                }
            }
            menus.push(MenuSpec {
                name: raw.name,
                items: raw.items.into_iter().map(|(_, i)| i).collect(),
            });
        }
        let scenario = ScenarioFile {
            problem,
            signals,
            types,
            menus,
        };
        if let Some(types) = &scenario.types {
            let weights: Vec<Rational> = types.iter().map(|t| t.weight.clone()).collect();
            let total = sum(&weights);
            if weights.iter().any(|w| w.is_negative()) || !total.is_one() {
                return Err(err(1, 1, format!("type weights must be nonnegative and sum to 1 (sum {total})")));
            }
        }
        Ok(scenario)
    }
}

/// Parses `[l,r) [l,r) ...`; `offset` is the column before `text`.
fn parse_intervals(line: usize, offset: usize, text: &str) -> Result<Vec<(Rational, Rational)>, Error> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let col_of = |byte: usize| offset + text[..byte].chars().count() + 1;
    let mut i = 0;
    while i < chars.len() {
        let (b, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c != '[' {
            return Err(err(line, col_of(b), format!("expected `[`, found `{c}`")));
        }
        let close = text[b..]
            .find(')')
            .map(|k| b + k)
            .ok_or_else(|| err(line, col_of(b), "unterminated interval, expected `)`"))?;
        let inner = &text[b + 1..close];
        let (l, r) = inner
            .split_once(',')
            .ok_or_else(|| err(line, col_of(b), "interval needs two endpoints `[l,r)`"))?;
        let left = number(line, col_of(b + 1), l)?;
        let right = number(line, col_of(b + 2 + l.len()), r)?;
        out.push((left, right));
        while i < chars.len() && chars[i].0 <= close {
            i += 1;
        }
    }
    if out.is_empty() {
        return Err(err(line, offset + 1, "state listed without intervals"));
    }
    Ok(out)
}
