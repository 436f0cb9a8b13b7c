//! Minimal complementary signals.
//!
//! A complement of `π` is a signal `π′` whose join with `π` is
//! payoff-complete, `U(π ∨ π′) = Ū`, and a minimal complement has the
//! lowest `U(π′)` among them. Three constructions are provided:
//!
//! * [`complement_binary`]: the two-message "keep / switch" signal for
//!   binary-action problems.
//! * [`complement_diagonal_simple`]: for diagonal payoffs and simple
//!   signals, reveal every state where the induced action is wrong and pool
//!   the rest.
//! * [`complement_bruteforce`]: exhaustive search over signals built from
//!   the cells of `π` cut by a uniform grid, used as an oracle.
//!
//! The lower-triangular three-state family has a closed-form split,
//! [`closed_form_triangular_split`], and a matching construction
//! [`triangular_complement`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::decision::DecisionProblem;
use crate::error::Error;
use crate::interval::IntervalSet;
use crate::rational::{int, Rational};
use crate::signal::{Message, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComplementMethod {
    Binary,
    DiagonalSimple,
    BruteForce,
    TriangularClosedForm,
}

impl fmt::Display for ComplementMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplementMethod::Binary => "binary",
            ComplementMethod::DiagonalSimple => "diagonal-simple",
            ComplementMethod::BruteForce => "brute-force",
            ComplementMethod::TriangularClosedForm => "triangular-closed-form",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementResult {
    pub complement: Signal,
    /// `U(π′)`
    pub u_complement: Rational,
    /// `U(π ∨ π′)`, equal to `Ū` for every returned complement.
    pub u_join: Rational,
    pub method: ComplementMethod,
    /// Grid denominator used by the brute-force oracle.
    pub grid: Option<u32>,
}

fn finish(
    base: &Signal,
    complement: Signal,
    problem: &DecisionProblem,
    method: ComplementMethod,
    grid: Option<u32>,
) -> Result<ComplementResult, Error> {
    let u_complement = problem.exante_payoff(&complement)?;
    let u_join = problem.exante_payoff(&base.join(&complement)?)?;
    debug_assert_eq!(u_join, problem.full_info_payoff(), "{method} complement incomplete");
    Ok(ComplementResult {
        complement,
        u_complement,
        u_join,
        method,
        grid,
    })
}

fn complement_name(base: &Signal) -> String {
    format!("complement({})", base.name())
}

/// The keep/switch complement for binary-action problems.
///
/// Each cell `(s, ω)` of `π` goes to `keep` when the action induced by `s`
/// is optimal in `ω` and to `switch` otherwise. Cells of null messages go
/// to `keep`. When `switch` would be empty the trivial signal is returned.
pub fn complement_binary(
    base: &Signal,
    problem: &DecisionProblem,
) -> Result<ComplementResult, Error> {
    let (omega1, _) = problem.state_action_partition()?;
    problem.require_regular()?;
    problem.check_signal(base)?;
    let n = problem.states().len();
    let mut keep = vec![IntervalSet::empty(); n];
    let mut switch = vec![IntervalSet::empty(); n];
    for message in base.messages() {
        let induced = problem.induced_action(message).map(|c| c.action);
        for w in 0..n {
            let support = message.support_in(w);
            if support.is_empty() {
                continue;
            }
            let correct_action = if omega1.contains(&w) { 0 } else { 1 };
            let target = match induced {
                Some(a) if a != correct_action => &mut switch,
                _ => &mut keep,
            };
            target[w] = target[w].union(support);
        }
    }
    let complement = if switch.iter().all(IntervalSet::is_empty) {
        Signal::trivial(problem.states()).with_name(complement_name(base))
    } else {
        let mut messages = Vec::new();
        if keep.iter().any(|s| !s.is_empty()) {
            messages.push(Message::new("keep", keep));
        }
        messages.push(Message::new("switch", switch));
        Signal::new(complement_name(base), problem.states().to_vec(), messages)?
    };
    finish(base, complement, problem, ComplementMethod::Binary, None)
}

/// The set `S` of states where the action induced by a simple signal is
/// already optimal (diagonal payoffs).
pub fn correct_states(base: &Signal, problem: &DecisionProblem) -> Result<Vec<usize>, Error> {
    let mut s = problem.simple_signal_targets(base)?;
    s.sort_unstable();
    Ok(s)
}

/// `{{ω} | ω ∉ S} ∪ {S}` for diagonal payoffs and a simple signal.
pub fn complement_diagonal_simple(
    base: &Signal,
    problem: &DecisionProblem,
) -> Result<ComplementResult, Error> {
    problem.require_regular()?;
    problem.require_diagonal()?;
    if !base.is_simple() {
        return Err(Error::NotSimple(base.name().to_string()));
    }
    let keep_states = correct_states(base, problem)?;
    let states = problem.states();
    let n = states.len();
    let mut messages: Vec<Message> = (0..n)
        .filter(|w| !keep_states.contains(w))
        .map(|w| Message::on_states(states[w].clone(), n, &[w]))
        .collect();
    let complement = if messages.is_empty() {
        Signal::trivial(states).with_name(complement_name(base))
    } else {
        if !keep_states.is_empty() {
            messages.push(Message::on_states("keep", n, &keep_states));
        }
        Signal::new(complement_name(base), states.to_vec(), messages)?
    };
    finish(base, complement, problem, ComplementMethod::DiagonalSimple, None)
}

/// Limits for [`complement_bruteforce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceConfig {
    /// Maximum number of messages `K` in the searched signals.
    pub max_messages: usize,
    /// Grid denominator `q`; `π`'s cells are cut at multiples of `1/q`.
    pub grid: u32,
    /// Cap on the number of atom classes (see [`complement_bruteforce`]).
    pub max_classes: usize,
    /// Cap on the number of enumerated assignments.
    pub max_assignments: u128,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        Self {
            max_messages: 2,
            grid: 12,
            max_classes: 12,
            max_assignments: 20_000_000,
        }
    }
}

impl BruteForceConfig {
    pub fn new(max_messages: usize, grid: u32) -> Self {
        Self {
            max_messages,
            grid,
            ..Self::default()
        }
    }
}

/// One class of interchangeable atoms: same state, same message of `π`,
/// same measure.
struct AtomClass {
    state: usize,
    base_message: usize,
    /// Atoms in grid order.
    atoms: Vec<IntervalSet>,
    /// Scaled integer `measure · μ(ω) · u(a, ω)` per action.
    weights: Vec<i128>,
    /// Weight of the action optimal in `state`.
    best_weight: i128,
}

/// Exhaustive minimal-complement search.
///
/// Atoms are the per-state cells of `π ∨ grid(q)`. Payoffs depend only on
/// how much mass of each (state, `π`-message) pair each label receives, so
/// atoms with the same state, `π`-message and measure are interchangeable
/// and only their counts per label are enumerated; the chosen atoms of a
/// class are assigned to labels in grid order. Feasibility
/// (`U(π ∨ π′) = Ū`) is checked exactly. Among feasible assignments the
/// first minimizer of `U(π′)` in enumeration order is returned: classes in
/// (state, `π`-message) order, each class's label counts starting from
/// "all atoms in the first label".
pub fn complement_bruteforce(
    base: &Signal,
    problem: &DecisionProblem,
    config: &BruteForceConfig,
) -> Result<ComplementResult, Error> {
    problem.check_signal(base)?;
    if config.max_messages == 0 || config.grid == 0 {
        return Err(Error::TooLarge(
            "max messages and grid must be at least 1".into(),
        ));
    }
    let classes = atom_classes(base, problem, config.grid)?;
    if classes.len() > config.max_classes {
        return Err(Error::TooLarge(format!(
            "{} atom classes exceed the cap of {}",
            classes.len(),
            config.max_classes
        )));
    }
    let k = config.max_messages;
    let mut total: u128 = 1;
    for c in &classes {
        total = total.saturating_mul(binomial((c.atoms.len() + k - 1) as u128, (k - 1) as u128));
    }
    if total > config.max_assignments {
        return Err(Error::TooLarge(format!(
            "{total} assignments exceed the cap of {}",
            config.max_assignments
        )));
    }

    let mut search = Search {
        classes: &classes,
        k,
        n_actions: problem.actions().len(),
        n_base: base.messages().len(),
        counts: vec![vec![0; k]; classes.len()],
        best: None,
    };
    search.run(0);
    let counts = search.best.map(|(_, c)| c).ok_or(Error::Infeasible {
        grid: config.grid,
        max_messages: k,
    })?;

    let n = problem.states().len();
    let mut supports = vec![vec![IntervalSet::empty(); n]; k];
    for (class, per_label) in classes.iter().zip(&counts) {
        let mut atoms = class.atoms.iter();
        for (label, &count) in per_label.iter().enumerate() {
            for atom in atoms.by_ref().take(count) {
                let cell = &mut supports[label][class.state];
                *cell = cell.union(atom);
            }
        }
    }
    let messages: Vec<Message> = supports
        .into_iter()
        .enumerate()
        .filter(|(_, s)| s.iter().any(|set| !set.is_empty()))
        .map(|(i, s)| Message::new(format!("m{i}"), s))
        .collect();
    let complement = Signal::new(complement_name(base), problem.states().to_vec(), messages)?;
    finish(
        base,
        complement,
        problem,
        ComplementMethod::BruteForce,
        Some(config.grid),
    )
}

fn atom_classes(
    base: &Signal,
    problem: &DecisionProblem,
    q: u32,
) -> Result<Vec<AtomClass>, Error> {
    let grid = Signal::uniform_grid(problem.states(), q);
    let prior = problem.prior().weights();
    let n_actions = problem.actions().len();

    // (state, base message, measure) -> atoms, kept in insertion order
    let mut order: Vec<(usize, usize, Rational)> = Vec::new();
    let mut atoms: BTreeMap<(usize, usize, Rational), Vec<IntervalSet>> = BTreeMap::new();
    for w in 0..problem.states().len() {
        for (si, message) in base.messages().iter().enumerate() {
            for cell in grid.messages() {
                let atom = message.support_in(w).intersection(cell.support_in(w));
                if atom.is_empty() {
                    continue;
                }
                let key = (w, si, atom.measure());
                atoms
                    .entry(key.clone())
                    .or_insert_with(|| {
                        order.push(key);
                        Vec::new()
                    })
                    .push(atom);
            }
        }
    }

    let raw: Vec<(usize, usize, Vec<Rational>, usize)> = order
        .iter()
        .map(|key| {
            let (w, si, measure) = key;
            let weights = (0..n_actions)
                .map(|a| measure * &prior[*w] * problem.payoff(a, *w))
                .collect();
            (*w, *si, weights, problem.state_optimum(*w).action)
        })
        .collect();

    let mut scale = BigInt::one();
    for (_, _, weights, _) in &raw {
        for v in weights {
            scale = scale.lcm(v.denom());
        }
    }
    let scale = Rational::from_integer(scale);
    let mut classes = Vec::with_capacity(raw.len());
    for ((w, si, weights, best), key) in raw.into_iter().zip(order) {
        let scaled: Vec<i128> = weights
            .iter()
            .map(|v| {
                let s = v * &scale;
                debug_assert!(s.is_integer());
                s.to_integer()
                    .to_i128()
                    .filter(|x| x.abs() < (1i128 << 96))
                    .ok_or_else(|| Error::TooLarge("payoff weights overflow".into()))
            })
            .collect::<Result<_, _>>()?;
        classes.push(AtomClass {
            state: w,
            base_message: si,
            best_weight: scaled[best],
            weights: scaled,
            atoms: atoms.remove(&key).unwrap_or_default(),
        });
    }
    Ok(classes)
}

struct Search<'a> {
    classes: &'a [AtomClass],
    k: usize,
    n_actions: usize,
    n_base: usize,
    counts: Vec<Vec<usize>>,
    best: Option<(i128, Vec<Vec<usize>>)>,
}

impl Search<'_> {
    fn run(&mut self, class: usize) {
        if class == self.classes.len() {
            self.evaluate();
            return;
        }
        let n = self.classes[class].atoms.len();
        self.compose(class, 0, n);
    }

    /// Distributes `remaining` atoms of `class` over labels `label..k`,
    /// putting as many as possible in the lower labels first.
    fn compose(&mut self, class: usize, label: usize, remaining: usize) {
        if label + 1 == self.k {
            self.counts[class][label] = remaining;
            self.run(class + 1);
            return;
        }
        for c in (0..=remaining).rev() {
            self.counts[class][label] = c;
            self.compose(class, label + 1, remaining - c);
        }
    }

    fn evaluate(&mut self) {
        let (k, na) = (self.k, self.n_actions);
        // cell sums per (base message, label, action), label sums per (label, action)
        let mut cell = vec![0i128; self.n_base * k * na];
        let mut cell_best = vec![0i128; self.n_base * k];
        let mut label = vec![0i128; k * na];
        for (c, per_label) in self.classes.iter().zip(&self.counts) {
            for (l, &count) in per_label.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                let count = count as i128;
                let cell_idx = c.base_message * k + l;
                cell_best[cell_idx] += count * c.best_weight;
                for a in 0..na {
                    let v = count * c.weights[a];
                    cell[cell_idx * na + a] += v;
                    label[l * na + a] += v;
                }
            }
        }
        for idx in 0..self.n_base * k {
            let max = cell[idx * na..(idx + 1) * na].iter().max().copied().unwrap_or(0);
            if max != cell_best[idx] {
                return;
            }
        }
        let value: i128 = (0..k)
            .map(|l| label[l * na..(l + 1) * na].iter().max().copied().unwrap_or(0))
            .sum();
        if self.best.as_ref().is_none_or(|(b, _)| value < *b) {
            self.best = Some((value, self.counts.clone()));
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Parameters `(u₁, u₂, u₃)` and `(μ₁, μ₂, μ₃)` of the lower-triangular
/// family
///
/// ```text
///        ω1  ω2  ω3
///   a1   u1  u1  u1
///   a2    0  u2  u2
///   a3    0   0  u3
/// ```
///
/// with `0 < u₁ < u₂ < u₃`, a full-support prior and indifference between
/// all actions at the prior: `u₁ = (μ₂ + μ₃) u₂ = μ₃ u₃`.
pub fn triangular_parameters(
    problem: &DecisionProblem,
) -> Result<([Rational; 3], [Rational; 3]), Error> {
    let outside = |why: &str| Error::OutsideFamily(why.to_string());
    if problem.states().len() != 3 || problem.actions().len() != 3 {
        return Err(outside("need 3 states and 3 actions"));
    }
    let p = problem.payoffs();
    let (u1, u2, u3) = (p[0][0].clone(), p[1][1].clone(), p[2][2].clone());
    let zero = Rational::zero();
    let shape = p[0][1] == u1
        && p[0][2] == u1
        && p[1][0] == zero
        && p[1][2] == u2
        && p[2][0] == zero
        && p[2][1] == zero;
    if !shape {
        return Err(outside("payoffs are not lower-triangular of the required form"));
    }
    if !(u1.is_positive() && u1 < u2 && u2 < u3) {
        return Err(outside("need 0 < u1 < u2 < u3"));
    }
    let mu = problem.prior().weights();
    if mu.iter().any(|m| !m.is_positive()) {
        return Err(outside("prior must have full support"));
    }
    if u1 != (&mu[1] + &mu[2]) * &u2 || u1 != &mu[2] * &u3 {
        return Err(outside("prior does not make all actions indifferent"));
    }
    Ok((
        [u1, u2, u3],
        [mu[0].clone(), mu[1].clone(), mu[2].clone()],
    ))
}

/// The split point `a = μ₁u₁ / (μ₃(u₃ − u₁))` of state `ω₃`'s interval.
pub fn closed_form_triangular_split(problem: &DecisionProblem) -> Result<Rational, Error> {
    let ([u1, _, u3], [m1, _, m3]) = triangular_parameters(problem)?;
    let a = (&m1 * &u1) / (&m3 * (&u3 - &u1));
    debug_assert!(a.is_positive() && a < Rational::one());
    Ok(a)
}

/// The type that learns only whether the state is `ω₃`.
pub fn triangular_partial_type(problem: &DecisionProblem) -> Result<Signal, Error> {
    triangular_parameters(problem)?;
    Signal::from_partition("partial", problem.states(), &[vec![0, 1], vec![2]])
}

/// The closed-form complement of the partial type: message `x` on `ω₁`
/// and `ω₃ × [0,a)`, message `y` on `ω₂` and `ω₃ × [a,1)`.
pub fn triangular_complement(problem: &DecisionProblem) -> Result<ComplementResult, Error> {
    let a = closed_form_triangular_split(problem)?;
    let base = triangular_partial_type(problem)?;
    let x = Message::new(
        "x",
        vec![
            IntervalSet::full(),
            IntervalSet::empty(),
            IntervalSet::interval(Rational::zero(), a.clone())?,
        ],
    );
    let y = Message::new(
        "y",
        vec![
            IntervalSet::empty(),
            IntervalSet::full(),
            IntervalSet::interval(a, int(1))?,
        ],
    );
    let complement = Signal::new(complement_name(&base), problem.states().to_vec(), vec![x, y])?;
    finish(
        &base,
        complement,
        problem,
        ComplementMethod::TriangularClosedForm,
        None,
    )
}
