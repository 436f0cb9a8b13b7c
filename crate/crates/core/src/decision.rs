//! Decision problems and the payoff functionals built on them.
//!
//! Payoffs of a signal are computed from joint masses `μ(s, ω)`: for a
//! message `s`, `μ(s) u(s) = max_a Σ_ω μ(s, ω) u(a, ω)`, which avoids
//! normalizing posteriors.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::{int, Rational};
use crate::signal::{Message, Signal};

/// A probability vector over the states of a problem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Belief {
    weights: Vec<Rational>,
}

impl Belief {
    pub fn new(weights: Vec<Rational>) -> Result<Self, Error> {
        if weights.is_empty() {
            return Err(Error::InvalidPrior("empty belief".into()));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidPrior("negative weight".into()));
        }
        let total = weights.iter().fold(Rational::zero(), |acc, w| acc + w);
        if !total.is_one() {
            return Err(Error::InvalidPrior(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            weights: vec![Rational::one() / int(n as i64); n],
        }
    }

    pub fn degenerate(n: usize, state: usize) -> Self {
        let mut weights = vec![Rational::zero(); n];
        weights[state] = Rational::one();
        Self { weights }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Result of an argmax over actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionChoice {
    pub action: usize,
    pub value: Rational,
    /// Another action attains the same value; the lowest index won.
    pub tied: bool,
}

/// States, actions, payoff matrix `u(a, ω)` and prior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionProblem {
    states: Vec<String>,
    actions: Vec<String>,
    /// `payoffs[a][ω]`
    payoffs: Vec<Vec<Rational>>,
    prior: Belief,
    /// Some state lacks a unique optimal action.
    degenerate: bool,
}

impl DecisionProblem {
    /// Builds a problem, requiring a unique optimal action in every state.
    pub fn new(
        states: Vec<String>,
        actions: Vec<String>,
        payoffs: Vec<Vec<Rational>>,
        prior: Belief,
    ) -> Result<Self, Error> {
        let problem = Self::build(states, actions, payoffs, prior)?;
        if problem.degenerate {
            let bad: Vec<&str> = (0..problem.states.len())
                .filter(|&w| problem.state_optimum(w).tied)
                .map(|w| problem.states[w].as_str())
                .collect();
            return Err(Error::InvalidProblem(format!(
                "no unique optimal action in state(s) {}",
                bad.join(", ")
            )));
        }
        Ok(problem)
    }

    /// Like [`DecisionProblem::new`] but accepts states with tied optimal
    /// actions. Constructions that rely on unique optima refuse such
    /// problems.
    pub fn new_allow_degenerate(
        states: Vec<String>,
        actions: Vec<String>,
        payoffs: Vec<Vec<Rational>>,
        prior: Belief,
    ) -> Result<Self, Error> {
        Self::build(states, actions, payoffs, prior)
    }

    fn build(
        states: Vec<String>,
        actions: Vec<String>,
        payoffs: Vec<Vec<Rational>>,
        prior: Belief,
    ) -> Result<Self, Error> {
        if states.is_empty() || actions.is_empty() {
            return Err(Error::InvalidProblem(
                "need at least one state and one action".into(),
            ));
        }
        if has_duplicates(&states) {
            return Err(Error::InvalidProblem("duplicate state id".into()));
        }
        if has_duplicates(&actions) {
            return Err(Error::InvalidProblem("duplicate action id".into()));
        }
        if payoffs.len() != actions.len() || payoffs.iter().any(|row| row.len() != states.len()) {
            return Err(Error::InvalidProblem(format!(
                "payoff matrix must be {} x {}",
                actions.len(),
                states.len()
            )));
        }
        if prior.len() != states.len() {
            return Err(Error::InvalidPrior(format!(
                "prior has {} entries for {} states",
                prior.len(),
                states.len()
            )));
        }
        let mut problem = Self {
            states,
            actions,
            payoffs,
            prior,
            degenerate: false,
        };
        problem.degenerate = (0..problem.states.len()).any(|w| problem.state_optimum(w).tied);
        Ok(problem)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn payoffs(&self) -> &[Vec<Rational>] {
        &self.payoffs
    }

    pub fn payoff(&self, action: usize, state: usize) -> &Rational {
        &self.payoffs[action][state]
    }

    pub fn prior(&self) -> &Belief {
        &self.prior
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Same payoffs, different prior.
    pub fn with_prior(&self, prior: Belief) -> Result<Self, Error> {
        Self::build(
            self.states.clone(),
            self.actions.clone(),
            self.payoffs.clone(),
            prior,
        )
    }

    pub fn state_index(&self, state: &str) -> Result<usize, Error> {
        self.states
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| Error::UnknownState(state.to_string()))
    }

    pub fn action_index(&self, action: &str) -> Result<usize, Error> {
        self.actions
            .iter()
            .position(|a| a == action)
            .ok_or_else(|| Error::UnknownAction(action.to_string()))
    }

    pub(crate) fn require_regular(&self) -> Result<(), Error> {
        if self.degenerate {
            Err(Error::DegenerateProblem)
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_signal(&self, signal: &Signal) -> Result<(), Error> {
        if signal.states() != self.states.as_slice() {
            return Err(Error::StateMismatch);
        }
        Ok(())
    }

    /// `a*(ω)` with its payoff.
    pub fn state_optimum(&self, state: usize) -> ActionChoice {
        argmax((0..self.actions.len()).map(|a| self.payoffs[a][state].clone()))
    }

    /// Best action against unnormalized weights `m(ω)`; the value is
    /// `max_a Σ_ω m(ω) u(a, ω)`. Ties go to the lowest action index.
    pub fn best_response(&self, masses: &[Rational]) -> ActionChoice {
        argmax((0..self.actions.len()).map(|a| {
            masses
                .iter()
                .zip(&self.payoffs[a])
                .filter(|(m, _)| !m.is_zero())
                .fold(Rational::zero(), |acc, (m, u)| acc + m * u)
        }))
    }

    /// `a(μ)` and `max_a Σ_ω μ(ω) u(a, ω)`.
    pub fn optimal_action(&self, belief: &Belief) -> ActionChoice {
        self.best_response(belief.weights())
    }

    /// Interim payoff `u(s)` at the posterior of `message`.
    pub fn interim_payoff(&self, message: &Message) -> Result<Rational, Error> {
        let posterior = message.posterior(&self.prior)?;
        Ok(self.optimal_action(&posterior).value)
    }

    /// Action induced by a message, `None` for a null message.
    pub fn induced_action(&self, message: &Message) -> Option<ActionChoice> {
        let masses = message.joint_masses(&self.prior);
        if masses.iter().all(Zero::is_zero) {
            return None;
        }
        Some(self.best_response(&masses))
    }

    /// `U(π) = Σ_s μ(s) u(s)`.
    pub fn exante_payoff(&self, signal: &Signal) -> Result<Rational, Error> {
        self.check_signal(signal)?;
        Ok(signal
            .messages()
            .iter()
            .map(|m| self.best_response(&m.joint_masses(&self.prior)).value)
            .fold(Rational::zero(), |acc, v| acc + v))
    }

    /// `Ū = Σ_ω μ(ω) u(a*(ω), ω)`.
    pub fn full_info_payoff(&self) -> Rational {
        (0..self.states.len())
            .map(|w| &self.prior.weights()[w] * self.state_optimum(w).value)
            .fold(Rational::zero(), |acc, v| acc + v)
    }

    /// `V(added | base) = U(added ∨ base) − U(base)`.
    pub fn incremental_value(&self, added: &Signal, base: &Signal) -> Result<ValueReport, Error> {
        self.check_signal(added)?;
        self.check_signal(base)?;
        let before = self.exante_payoff(base)?;
        let after = self.exante_payoff(&added.join(base)?)?;
        Ok(ValueReport {
            added: added.name().to_string(),
            base: base.name().to_string(),
            increment: &after - &before,
            u_before: before,
            u_after: after,
        })
    }

    /// `(Ω₁, Ω₂)` for a binary-action problem: `Ω₁` holds the states where
    /// the first action is weakly better.
    pub fn state_action_partition(&self) -> Result<(Vec<usize>, Vec<usize>), Error> {
        if self.actions.len() != 2 {
            return Err(Error::NotBinary(self.actions.len()));
        }
        Ok((0..self.states.len()).partition(|&w| self.payoffs[0][w] >= self.payoffs[1][w]))
    }

    /// Diagonal entries `u_i` when `|A| = |Ω|` and `u(a_i, ω_j) = 0` for
    /// `i ≠ j`.
    pub fn diagonal(&self) -> Option<Vec<Rational>> {
        let n = self.states.len();
        if self.actions.len() != n {
            return None;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && !self.payoffs[i][j].is_zero() {
                    return None;
                }
            }
        }
        Some((0..n).map(|i| self.payoffs[i][i].clone()).collect())
    }

    pub(crate) fn require_diagonal(&self) -> Result<Vec<Rational>, Error> {
        let diag = self.diagonal().ok_or_else(|| {
            Error::NotDiagonal("need |A| = |Ω| and zero off-diagonal payoffs".into())
        })?;
        if diag.iter().any(|u| !u.is_positive()) {
            return Err(Error::NotDiagonal("diagonal payoffs must be positive".into()));
        }
        Ok(diag)
    }

    /// For a simple signal under diagonal payoffs, the state `ω_s` of each
    /// positive-probability block: the maximizer of `μ(ω) u(ω)` within the
    /// block (lowest index on ties).
    pub fn simple_signal_targets(&self, signal: &Signal) -> Result<Vec<usize>, Error> {
        self.check_signal(signal)?;
        let diag = self.require_diagonal()?;
        let blocks = signal.state_blocks()?;
        let prior = self.prior.weights();
        let mut targets = Vec::new();
        for block in blocks {
            let mut best: Option<(usize, Rational)> = None;
            for &w in &block {
                let score = &prior[w] * &diag[w];
                if score.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, b)| &score > b) {
                    best = Some((w, score));
                }
            }
            if let Some((w, _)) = best {
                targets.push(w);
            }
        }
        Ok(targets)
    }

    /// `U(π) = Σ_s μ(ω_s) u(ω_s)` for simple signals and diagonal payoffs.
    pub fn simple_signal_payoff(&self, signal: &Signal) -> Result<Rational, Error> {
        let diag = self.require_diagonal()?;
        let prior = self.prior.weights();
        Ok(self
            .simple_signal_targets(signal)?
            .into_iter()
            .map(|w| &prior[w] * &diag[w])
            .fold(Rational::zero(), |acc, v| acc + v))
    }
}

/// `V(π′|π)` together with both ex-ante payoffs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueReport {
    pub added: String,
    pub base: String,
    pub u_before: Rational,
    pub u_after: Rational,
    pub increment: Rational,
}

fn argmax(values: impl Iterator<Item = Rational>) -> ActionChoice {
    let mut best: Option<ActionChoice> = None;
    for (i, v) in values.enumerate() {
        match &mut best {
            None => {
                best = Some(ActionChoice {
                    action: i,
                    value: v,
                    tied: false,
                })
            }
            Some(b) if v > b.value => {
                *b = ActionChoice {
                    action: i,
                    value: v,
                    tied: false,
                }
            }
            Some(b) if v == b.value => b.tied = true,
            _ => {}
        }
    }
    best.expect("at least one action")
}

fn has_duplicates(ids: &[String]) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    !ids.iter().all(|id| seen.insert(id))
}
