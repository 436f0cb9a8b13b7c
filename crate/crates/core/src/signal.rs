//! Signals as finite partitions of the extended state space `Ω × [0,1)`.
//!
//! A [`Signal`] is a list of [`Message`]s. Each message assigns to every
//! state an [`IntervalSet`]; for every state the messages' sets partition
//! `[0,1)`. The conditional probability of a message in a state is the
//! Lebesgue measure of its set in that state.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::decision::Belief;
use crate::error::Error;
use crate::interval::IntervalSet;
use crate::rational::{int, Rational};

/// Separator used for labels of joined messages.
pub const JOIN_SEPARATOR: &str = "⊗";

/// One cell of a signal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Message {
    label: String,
    /// Indexed by state position; an empty set means the message is never
    /// sent in that state.
    support: Vec<IntervalSet>,
}

impl Message {
    pub fn new(label: impl Into<String>, support: Vec<IntervalSet>) -> Self {
        Self {
            label: label.into(),
            support,
        }
    }

    /// A message sent with certainty in the listed states and never
    /// otherwise.
    pub fn on_states(label: impl Into<String>, n_states: usize, states: &[usize]) -> Self {
        let support = (0..n_states)
            .map(|i| {
                if states.contains(&i) {
                    IntervalSet::full()
                } else {
                    IntervalSet::empty()
                }
            })
            .collect();
        Self::new(label, support)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support(&self) -> &[IntervalSet] {
        &self.support
    }

    pub fn support_in(&self, state: usize) -> &IntervalSet {
        &self.support[state]
    }

    /// `μ(s|ω)` for the state at position `state`.
    pub fn conditional(&self, state: usize) -> Rational {
        self.support[state].measure()
    }

    /// Joint masses `μ(s, ω) = μ(s|ω) μ(ω)` for every state.
    pub fn joint_masses(&self, prior: &Belief) -> Vec<Rational> {
        self.support
            .iter()
            .zip(prior.weights())
            .map(|(set, w)| set.measure() * w)
            .collect()
    }

    /// `μ(s) = Σ_ω μ(s|ω) μ(ω)`.
    pub fn marginal_probability(&self, prior: &Belief) -> Result<Rational, Error> {
        if prior.len() != self.support.len() {
            return Err(Error::InvalidPrior(format!(
                "prior has {} entries but the message covers {} states",
                prior.len(),
                self.support.len()
            )));
        }
        Ok(self
            .joint_masses(prior)
            .iter()
            .fold(Rational::zero(), |acc, m| acc + m))
    }

    /// Bayes posterior `μ(ω|s)`.
    pub fn posterior(&self, prior: &Belief) -> Result<Belief, Error> {
        let total = self.marginal_probability(prior)?;
        if total.is_zero() {
            return Err(Error::NullMessage(self.label.clone()));
        }
        let weights = self
            .joint_masses(prior)
            .into_iter()
            .map(|m| m / &total)
            .collect();
        Belief::new(weights)
    }

    /// Total measure across states; zero iff the message is never sent.
    pub fn total_measure(&self) -> Rational {
        self.support
            .iter()
            .fold(Rational::zero(), |acc, s| acc + s.measure())
    }

    /// True when every state's support is empty or all of `[0,1)`.
    pub fn is_simple(&self) -> bool {
        self.support.iter().all(|s| s.is_empty() || s.is_full())
    }

    /// States in which the message has positive probability.
    pub fn support_states(&self) -> Vec<usize> {
        (0..self.support.len())
            .filter(|&i| !self.support[i].is_empty())
            .collect()
    }

    pub fn intersect(&self, other: &Message) -> Message {
        let support = self
            .support
            .iter()
            .zip(&other.support)
            .map(|(a, b)| a.intersection(b))
            .collect();
        Message::new(
            format!("{}{}{}", self.label, JOIN_SEPARATOR, other.label),
            support,
        )
    }
}

/// A signal: a finite partition of `Ω × [0,1)` into messages.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signal {
    name: String,
    states: Vec<String>,
    messages: Vec<Message>,
}

impl Signal {
    /// Validates labels and the per-state partition property.
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        messages: Vec<Message>,
    ) -> Result<Self, Error> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidSignal {
            signal: name.clone(),
            reason,
        };
        if messages.is_empty() {
            return Err(invalid("a signal needs at least one message".into()));
        }
        let mut labels = BTreeSet::new();
        for m in &messages {
            if !labels.insert(m.label.as_str()) {
                return Err(invalid(format!("duplicate message label `{}`", m.label)));
            }
            if m.support.len() != states.len() {
                return Err(invalid(format!(
                    "message `{}` covers {} states, expected {}",
                    m.label,
                    m.support.len(),
                    states.len()
                )));
            }
        }
        for (i, state) in states.iter().enumerate() {
            let mut union = IntervalSet::empty();
            let mut total = Rational::zero();
            for m in &messages {
                total += m.support[i].measure();
                union = union.union(&m.support[i]);
            }
            if total != union.measure() {
                return Err(invalid(format!("messages overlap in state {state}")));
            }
            if !union.is_full() {
                return Err(invalid(format!("state {state} not fully covered")));
            }
        }
        Ok(Self {
            name,
            states,
            messages,
        })
    }

    /// The uninformative one-message signal.
    pub fn trivial(states: &[String]) -> Self {
        let all: Vec<usize> = (0..states.len()).collect();
        Self {
            name: "trivial".into(),
            states: states.to_vec(),
            messages: vec![Message::on_states("all", states.len(), &all)],
        }
    }

    /// The signal revealing every state; message labels are the state ids.
    pub fn fully_revealing(states: &[String]) -> Self {
        let messages = states
            .iter()
            .enumerate()
            .map(|(i, s)| Message::on_states(s.clone(), states.len(), &[i]))
            .collect();
        Self {
            name: "full".into(),
            states: states.to_vec(),
            messages,
        }
    }

    /// A simple signal from a partition of state indices. Blocks must be
    /// nonempty, disjoint and cover every state.
    pub fn from_partition(
        name: impl Into<String>,
        states: &[String],
        blocks: &[Vec<usize>],
    ) -> Result<Self, Error> {
        let messages = blocks
            .iter()
            .map(|block| {
                let label = block
                    .iter()
                    .map(|&i| states.get(i).cloned().unwrap_or_default())
                    .collect::<Vec<_>>()
                    .join("+");
                Message::on_states(label, states.len(), block)
            })
            .collect();
        Self::new(name, states.to_vec(), messages)
    }

    /// The signal slicing `[0,1)` into `q` equal pieces, independently of
    /// the state.
    pub fn uniform_grid(states: &[String], q: u32) -> Self {
        let q = q.max(1);
        let messages = (0..q)
            .map(|k| {
                let piece = IntervalSet::interval(
                    int(k as i64) / int(q as i64),
                    int(k as i64 + 1) / int(q as i64),
                )
                .expect("grid cell within [0,1)");
                Message::new(format!("g{k}"), vec![piece; states.len()])
            })
            .collect();
        Self {
            name: format!("grid{q}"),
            states: states.to_vec(),
            messages,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn message(&self, label: &str) -> Option<&Message> {
        self.messages.iter().find(|m| m.label == label)
    }

    pub fn state_index(&self, state: &str) -> Result<usize, Error> {
        self.states
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| Error::UnknownState(state.to_string()))
    }

    /// `μ(s|ω)` looked up by message label and state id.
    pub fn conditional_probability(&self, label: &str, state: &str) -> Result<Rational, Error> {
        let idx = self.state_index(state)?;
        let msg = self.message(label).ok_or_else(|| Error::InvalidSignal {
            signal: self.name.clone(),
            reason: format!("no message `{label}`"),
        })?;
        Ok(msg.conditional(idx))
    }

    /// The common refinement `{s ∩ s' | s ∈ self, s' ∈ other}` with
    /// zero-measure cells dropped.
    pub fn join(&self, other: &Signal) -> Result<Signal, Error> {
        if self.states != other.states {
            return Err(Error::StateMismatch);
        }
        let messages = self
            .messages
            .iter()
            .flat_map(|a| other.messages.iter().map(move |b| a.intersect(b)))
            .filter(|m| !m.total_measure().is_zero())
            .collect();
        Ok(Signal {
            name: format!("{}{}{}", self.name, JOIN_SEPARATOR, other.name),
            states: self.states.clone(),
            messages,
        })
    }

    /// True iff every message with positive probability induces a
    /// degenerate posterior. Zero-prior states never break completeness.
    pub fn is_partition_complete(&self, prior: &Belief) -> bool {
        self.messages.iter().all(|m| match m.posterior(prior) {
            Ok(post) => post.weights().iter().any(|w| w.is_one()),
            Err(_) => true,
        })
    }

    /// Canonical form: never-sent messages removed, messages sorted by
    /// their support. Labels are kept; use [`Signal::same_partition`] to
    /// compare signals regardless of labels.
    pub fn normalize(&self) -> Signal {
        let mut messages: Vec<Message> = self
            .messages
            .iter()
            .filter(|m| !m.total_measure().is_zero())
            .cloned()
            .collect();
        messages.sort_by(|a, b| a.support.cmp(&b.support).then(a.label.cmp(&b.label)));
        Signal {
            name: self.name.clone(),
            states: self.states.clone(),
            messages,
        }
    }

    /// Sorted message supports of the normalized signal.
    pub fn partition_key(&self) -> Vec<Vec<IntervalSet>> {
        self.normalize()
            .messages
            .into_iter()
            .map(|m| m.support)
            .collect()
    }

    /// Equality as partitions of `Ω × [0,1)`, ignoring labels and names.
    pub fn same_partition(&self, other: &Signal) -> bool {
        self.states == other.states && self.partition_key() == other.partition_key()
    }

    /// Every message's support is empty or full in each state.
    pub fn is_simple(&self) -> bool {
        self.messages.iter().all(Message::is_simple)
    }

    /// For a simple signal, its partition of state indices (never-sent
    /// messages skipped).
    pub fn state_blocks(&self) -> Result<Vec<Vec<usize>>, Error> {
        if !self.is_simple() {
            return Err(Error::NotSimple(self.name.clone()));
        }
        Ok(self
            .messages
            .iter()
            .map(Message::support_states)
            .filter(|b| !b.is_empty())
            .collect())
    }

    /// Number of messages with positive total measure.
    pub fn effective_len(&self) -> usize {
        self.messages
            .iter()
            .filter(|m| !m.total_measure().is_zero())
            .count()
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "signal {}", self.name)?;
        for m in &self.messages {
            let parts: Vec<String> = m
                .support
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_empty())
                .map(|(i, s)| format!("{} {}", self.states[i], s))
                .collect();
            writeln!(f, "  {}: {}", m.label, parts.join("; "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn states(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("w{i}")).collect()
    }

    fn iv(a: i64, b: i64, c: i64, d: i64) -> IntervalSet {
        IntervalSet::interval(rat(a, b), rat(c, d)).unwrap()
    }

    fn split_signal() -> Signal {
        // w1: [0,3/4) -> a, [3/4,1) -> b ; w2: [0,1/4) -> a, [1/4,1) -> b
        Signal::new(
            "pi",
            states(2),
            vec![
                Message::new("a", vec![iv(0, 1, 3, 4), iv(0, 1, 1, 4)]),
                Message::new("b", vec![iv(3, 4, 1, 1), iv(1, 4, 1, 1)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn conditional_probability_is_interval_length() {
        let pi = split_signal();
        assert_eq!(pi.conditional_probability("a", "w1").unwrap(), rat(3, 4));
        let empty = Message::new("x", vec![IntervalSet::empty(), IntervalSet::full()]);
        assert_eq!(empty.conditional(0), rat(0, 1));
        assert_eq!(
            pi.conditional_probability("a", "w9"),
            Err(Error::UnknownState("w9".into()))
        );
    }

    #[test]
    fn uninformative_message_keeps_prior() {
        let prior = Belief::new(vec![rat(1, 3), rat(2, 3)]).unwrap();
        let all = Message::on_states("all", 2, &[0, 1]);
        assert_eq!(all.marginal_probability(&prior).unwrap(), rat(1, 1));
        assert_eq!(all.posterior(&prior).unwrap(), prior);
    }

    #[test]
    fn null_message_has_no_posterior() {
        let prior = Belief::new(vec![rat(1, 1), rat(0, 1)]).unwrap();
        let m = Message::on_states("only-w2", 2, &[1]);
        assert_eq!(
            m.posterior(&prior),
            Err(Error::NullMessage("only-w2".into()))
        );
    }

    #[test]
    fn validation_errors() {
        let half = Signal::new(
            "half",
            states(2),
            vec![Message::new("a", vec![iv(0, 1, 1, 2), IntervalSet::full()])],
        );
        match half {
            Err(Error::InvalidSignal { reason, .. }) => {
                assert_eq!(reason, "state w1 not fully covered")
            }
            other => panic!("unexpected {other:?}"),
        }
        let dup = Signal::new(
            "dup",
            states(1),
            vec![
                Message::new("a", vec![iv(0, 1, 1, 2)]),
                Message::new("a", vec![iv(1, 2, 1, 1)]),
            ],
        );
        assert!(matches!(dup, Err(Error::InvalidSignal { reason, .. }) if reason.contains("duplicate")));
        let overlap = Signal::new(
            "ov",
            states(1),
            vec![
                Message::new("a", vec![iv(0, 1, 3, 4)]),
                Message::new("b", vec![iv(1, 2, 1, 1)]),
            ],
        );
        assert!(matches!(overlap, Err(Error::InvalidSignal { reason, .. }) if reason.contains("overlap")));
    }

    #[test]
    fn join_with_trivial_and_self() {
        let pi = split_signal();
        let trivial = Signal::trivial(pi.states());
        assert!(pi.join(&trivial).unwrap().same_partition(&pi));
        assert!(pi.join(&pi).unwrap().same_partition(&pi));
        assert_eq!(
            pi.join(&pi).unwrap().normalize().partition_key(),
            pi.normalize().partition_key()
        );
        let labels: Vec<_> = pi
            .join(&trivial)
            .unwrap()
            .messages()
            .iter()
            .map(|m| m.label().to_string())
            .collect();
        assert_eq!(labels, vec!["a⊗all", "b⊗all"]);
    }

    #[test]
    fn join_rejects_other_state_sets() {
        let a = Signal::trivial(&states(2));
        let b = Signal::trivial(&states(3));
        assert_eq!(a.join(&b), Err(Error::StateMismatch));
    }

    #[test]
    fn completeness() {
        let prior = Belief::uniform(3);
        assert!(Signal::fully_revealing(&states(3)).is_partition_complete(&prior));
        assert!(!Signal::trivial(&states(3)).is_partition_complete(&prior));
        // a zero-prior state does not spoil completeness
        let skewed = Belief::new(vec![rat(1, 2), rat(1, 2), rat(0, 1)]).unwrap();
        let pi = Signal::from_partition("p", &states(3), &[vec![0], vec![1, 2]]).unwrap();
        assert!(pi.is_partition_complete(&skewed));
        assert!(!pi.is_partition_complete(&prior));
    }

    #[test]
    fn normalize_drops_null_messages_and_sorts() {
        let pi = Signal::new(
            "p",
            states(2),
            vec![
                Message::new("z", vec![iv(1, 2, 1, 1), IntervalSet::full()]),
                Message::new("never", vec![IntervalSet::empty(), IntervalSet::empty()]),
                Message::new("y", vec![iv(0, 1, 1, 2), IntervalSet::empty()]),
            ],
        )
        .unwrap();
        let n = pi.normalize();
        assert_eq!(n.messages().len(), 2);
        assert_eq!(n.messages()[0].label(), "y");
        // pieces given separately are stored merged
        let merged = IntervalSet::from_intervals(vec![
            (rat(0, 1), rat(1, 2)),
            (rat(1, 2), rat(1, 1)),
        ])
        .unwrap();
        assert!(merged.is_full());
    }

    #[test]
    fn simple_signal_blocks() {
        let pi = Signal::from_partition("p", &states(3), &[vec![0], vec![1, 2]]).unwrap();
        assert!(pi.is_simple());
        assert_eq!(pi.state_blocks().unwrap(), vec![vec![0], vec![1, 2]]);
        assert!(!split_signal().is_simple());
        assert!(split_signal().state_blocks().is_err());
    }

    #[test]
    fn grid_signal_is_valid() {
        let g = Signal::uniform_grid(&states(2), 4);
        assert_eq!(g.messages().len(), 4);
        Signal::new("g", g.states().to_vec(), g.messages().to_vec()).unwrap();
    }
}
