//! Seeded generators of random problems, signals and type spaces used by
//! the property suites and the CLI's randomized checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decision::{Belief, DecisionProblem};
use crate::error::Error;
use crate::interval::IntervalSet;
use crate::mechanism::TypeSpace;
use crate::rational::{int, rat, Rational};
use crate::signal::{Message, Signal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn state_ids(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("w{i}")).collect()
}

pub fn action_ids(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("a{i}")).collect()
}

/// A probability vector with small integer weights in `1..=9`, so every
/// state has positive probability.
pub fn full_support_prior<R: Rng>(rng: &mut R, n: usize) -> Belief {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    Belief::new(raw.into_iter().map(|w| rat(w, total)).collect()).expect("normalized")
}

fn payoff<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(0..=20), rng.gen_range(1..=3))
}

/// Two actions, `n` states, payoffs `k/d` with `k ∈ 0..=20`, `d ∈ 1..=3`,
/// never tied within a state.
pub fn binary_problem<R: Rng>(rng: &mut R, n: usize) -> DecisionProblem {
    loop {
        let rows: Vec<Vec<Rational>> = (0..2).map(|_| (0..n).map(|_| payoff(rng)).collect()).collect();
        if (0..n).any(|w| rows[0][w] == rows[1][w]) {
            continue;
        }
        let prior = full_support_prior(rng, n);
        if let Ok(p) = DecisionProblem::new(state_ids(n), action_ids(2), rows, prior) {
            return p;
        }
    }
}

/// Diagonal payoffs `u_i = k/d` with `k ∈ 1..=20`, `d ∈ 1..=3`, and a
/// full-support prior.
pub fn diagonal_problem<R: Rng>(rng: &mut R, n: usize) -> DecisionProblem {
    let diag: Vec<Rational> = (0..n)
        .map(|_| rat(rng.gen_range(1..=20), rng.gen_range(1..=3)))
        .collect();
    let payoffs = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { diag[i].clone() } else { int(0) })
                .collect()
        })
        .collect();
    DecisionProblem::new(
        state_ids(n),
        action_ids(n),
        payoffs,
        full_support_prior(rng, n),
    )
    .expect("diagonal problem with positive payoffs")
}

/// Random cut points in `(0,1)` with denominators up to `max_denom`.
fn cut_points<R: Rng>(rng: &mut R, max_cuts: usize, max_denom: i64) -> Vec<Rational> {
    let k = rng.gen_range(0..=max_cuts);
    let mut cuts: Vec<Rational> = (0..k)
        .map(|_| {
            let d = rng.gen_range(2..=max_denom.max(2));
            rat(rng.gen_range(1..d), d)
        })
        .collect();
    cuts.sort();
    cuts.dedup();
    cuts
}

fn grid_cut_points<R: Rng>(rng: &mut R, max_cuts: usize, q: i64) -> Vec<Rational> {
    let k = rng.gen_range(0..=max_cuts);
    let mut cuts: Vec<Rational> = (0..k).map(|_| rat(rng.gen_range(1..q), q)).collect();
    cuts.sort();
    cuts.dedup();
    cuts
}

fn signal_from_cuts<R: Rng>(
    rng: &mut R,
    name: &str,
    states: &[String],
    max_messages: usize,
    mut cuts_for_state: impl FnMut(&mut R) -> Vec<Rational>,
) -> Signal {
    let m = rng.gen_range(1..=max_messages.max(1));
    let n = states.len();
    let mut supports = vec![vec![IntervalSet::empty(); n]; m];
    for w in 0..n {
        let cuts = cuts_for_state(rng);
        let mut left = int(0);
        for right in cuts.into_iter().chain(std::iter::once(int(1))) {
            let piece = IntervalSet::interval(left.clone(), right.clone()).expect("ordered cuts");
            let target = rng.gen_range(0..m);
            supports[target][w] = supports[target][w].union(&piece);
            left = right;
        }
    }
    let messages = supports
        .into_iter()
        .enumerate()
        .filter(|(_, s)| s.iter().any(|set| !set.is_empty()))
        .map(|(i, s)| Message::new(format!("s{i}"), s))
        .collect();
    Signal::new(name, states.to_vec(), messages).expect("pieces partition [0,1)")
}

/// A signal with at most `max_messages` messages; each state's `[0,1)` is
/// cut at up to three random rational points and the pieces are dealt to
/// random messages.
pub fn signal<R: Rng>(rng: &mut R, name: &str, states: &[String], max_messages: usize) -> Signal {
    signal_from_cuts(rng, name, states, max_messages, |r| cut_points(r, 3, 12))
}

/// Like [`signal`] but every cut point is a multiple of `1/q`.
pub fn grid_signal<R: Rng>(
    rng: &mut R,
    name: &str,
    states: &[String],
    max_messages: usize,
    q: u32,
) -> Signal {
    signal_from_cuts(rng, name, states, max_messages, |r| {
        grid_cut_points(r, 3, q as i64)
    })
}

/// A uniformly random set partition of the states as a simple signal.
pub fn simple_signal<R: Rng>(rng: &mut R, name: &str, states: &[String]) -> Signal {
    let n = states.len();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for w in order {
        let choice = rng.gen_range(0..=blocks.len());
        if choice == blocks.len() {
            blocks.push(vec![w]);
        } else {
            blocks[choice].push(w);
        }
    }
    for b in blocks.iter_mut() {
        b.sort_unstable();
    }
    blocks.sort();
    Signal::from_partition(name, states, &blocks).expect("partition")
}

/// `n_types` random signals with random positive weights.
pub fn type_space<R: Rng>(
    rng: &mut R,
    problem: &DecisionProblem,
    n_types: usize,
    max_messages: usize,
) -> Result<TypeSpace, Error> {
    let types = (0..n_types)
        .map(|i| {
            let name = format!("t{i}");
            (name.clone(), signal(rng, &name, problem.states(), max_messages))
        })
        .collect();
    let raw: Vec<i64> = (0..n_types).map(|_| rng.gen_range(1..=5)).collect();
    let total: i64 = raw.iter().sum();
    TypeSpace::new(types, raw.into_iter().map(|w| rat(w, total)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = signal(&mut rng(7), "x", &state_ids(3), 3);
        let b = signal(&mut rng(7), "x", &state_ids(3), 3);
        assert_eq!(a, b);
        assert_eq!(binary_problem(&mut rng(3), 4), binary_problem(&mut rng(3), 4));
    }

    #[test]
    fn grid_signals_use_grid_points() {
        let mut r = rng(11);
        for _ in 0..20 {
            let s = grid_signal(&mut r, "g", &state_ids(2), 3, 8);
            for m in s.messages() {
                for set in m.support() {
                    for (l, rgt) in set.intervals() {
                        assert!((l * int(8)).is_integer() && (rgt * int(8)).is_integer());
                    }
                }
            }
        }
    }

    #[test]
    fn binary_problems_have_unique_optima() {
        let mut r = rng(5);
        for _ in 0..50 {
            assert!(!binary_problem(&mut r, 3).is_degenerate());
        }
    }
}
