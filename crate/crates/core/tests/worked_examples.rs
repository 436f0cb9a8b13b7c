//! Worked examples checked against hand-derived values and an independent
//! payoff oracle that never calls `join` or `exante_payoff`.

use infobroker::builtin::builtin;
use infobroker::complement::{complement_binary, complement_bruteforce, BruteForceConfig};
use infobroker::mechanism::enumerate_partitions;
use infobroker::random;
use infobroker::rational::{int, rat, Rational};
use infobroker::{DecisionProblem, Signal};

/// `U(a ∨ b)` by sweeping the breakpoints of both signals state by state
/// and accumulating joint masses per pair of messages.
fn sweep_join_payoff(p: &DecisionProblem, a: &Signal, b: &Signal) -> Rational {
    let n = p.states().len();
    let (ma, mb) = (a.messages().len(), b.messages().len());
    let mut mass = vec![vec![vec![int(0); n]; mb]; ma];
    for w in 0..n {
        let mut cuts = vec![int(0), int(1)];
        for s in a.messages().iter().chain(b.messages()) {
            for (l, r) in s.support()[w].intervals() {
                cuts.push(l.clone());
                cuts.push(r.clone());
            }
        }
        cuts.sort();
        cuts.dedup();
        for pair in cuts.windows(2) {
            let mid = (&pair[0] + &pair[1]) / int(2);
            let owner = |s: &Signal| {
                s.messages()
                    .iter()
                    .position(|m| m.support()[w].intervals().iter().any(|(l, r)| *l <= mid && mid < *r))
                    .expect("signals cover [0,1)")
            };
            let (i, j) = (owner(a), owner(b));
            mass[i][j][w] += (&pair[1] - &pair[0]) * &p.prior().weights()[w];
        }
    }
    let mut total = int(0);
    for row in &mass {
        for cell in row {
            let best = (0..p.actions().len())
                .map(|act| (0..n).fold(int(0), |acc, w| acc + &cell[w] * p.payoff(act, w)))
                .max()
                .expect("at least one action");
            total += best;
        }
    }
    total
}

#[test]
fn monopolist_hand_values() {
    let s = builtin("monopolist").unwrap();
    let p = &s.problem;
    let residential = s.signal("residential").unwrap();
    let civil = s.signal("civil-status").unwrap();
    let trivial = s.signal("trivial").unwrap();
    // house: 3/10·91/300 + 7/10·559/700 = 91/1000 + 559/1000.
    let house = residential.message("house").unwrap();
    assert_eq!(house.marginal_probability(p.prior()).unwrap(), rat(650, 1000));
    // professional share among houses: 559/650.
    assert_eq!(house.posterior(p.prior()).unwrap().weights()[1], rat(559, 650));
    // house charges 100 (86 expected), apartment 50: 13/20·86 + 7/20·50.
    let u = rat(13, 20) * int(86) + rat(7, 20) * int(50);
    assert_eq!(p.exante_payoff(&residential).unwrap(), u);
    assert_eq!(u, rat(367, 5));
    // married: 91/1000 + 7/10·141/700 = 232/1000.
    let married = civil.message("married").unwrap();
    assert_eq!(married.marginal_probability(p.prior()).unwrap(), rat(232, 1000));
    assert_eq!(married.posterior(p.prior()).unwrap().weights()[0], rat(91, 232));
    assert_eq!(p.exante_payoff(&civil).unwrap(), int(70));
    assert_eq!(sweep_join_payoff(p, &residential, &civil), int(85));
    assert_eq!(sweep_join_payoff(p, &trivial, &civil), int(70));
    let c = complement_binary(&residential, p).unwrap();
    assert!(c.complement.same_partition(&civil));
}

#[test]
fn clinical_hand_values() {
    let s = builtin("clinical").unwrap();
    let p = &s.problem;
    let informed = s.signal("informed").unwrap();
    let rec = s.signal("informed-recommendation").unwrap();
    let trivial = s.signal("trivial").unwrap();
    assert_eq!(sweep_join_payoff(p, &informed, &trivial), rat(20, 3));
    assert_eq!(sweep_join_payoff(p, &informed, &rec), int(10));
    // The uninformed type learns w3 and keeps a1 otherwise: 10/3 + 10/3.
    assert_eq!(sweep_join_payoff(p, &trivial, &rec), rat(20, 3));
}

#[test]
fn triangular_hand_values() {
    let s = builtin("triangular").unwrap();
    let p = &s.problem;
    let partial = s.signal("partial").unwrap();
    let split = s.signal("split").unwrap();
    let trivial = s.signal("trivial").unwrap();
    // partial: {w1,w2} mass 3/4 takes a1 or a2 (both 3/4 · ... = 3/4), w3 takes a3 for 1.
    assert_eq!(sweep_join_payoff(p, &partial, &trivial), rat(7, 4));
    assert_eq!(sweep_join_payoff(p, &partial, &split), int(2));
    // x: a1 on 1/2 + 1/6 gives 2/3; y: a2 on 1/4 + 1/12 gives 2/3.
    assert_eq!(sweep_join_payoff(p, &split, &trivial), rat(4, 3));
    let brute = complement_bruteforce(&partial, p, &BruteForceConfig::new(2, 12)).unwrap();
    assert_eq!(brute.u_complement, rat(4, 3));
    assert_eq!(sweep_join_payoff(p, &partial, &brute.complement), int(2));
}

#[test]
fn join_payoff_matches_sweep_oracle() {
    let mut rng = random::rng(21);
    for _ in 0..200 {
        let p = random::binary_problem(&mut rng, 3);
        let a = random::signal(&mut rng, "a", p.states(), 3);
        let b = random::signal(&mut rng, "b", p.states(), 3);
        let joined = a.join(&b).unwrap();
        assert_eq!(p.exante_payoff(&joined).unwrap(), sweep_join_payoff(&p, &a, &b));
    }
}

fn bell(n: usize) -> usize {
    // Bell triangle.
    let mut row = vec![1usize];
    for _ in 1..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    *row.last().unwrap()
}

#[test]
fn partition_counts_follow_the_bell_triangle() {
    let mut rng = random::rng(3);
    for n in 1..=6 {
        let p = random::diagonal_problem(&mut rng, n);
        let parts = enumerate_partitions(&p, 6).unwrap();
        assert_eq!(parts.len(), bell(n), "n = {n}");
        let mut keys: Vec<_> = parts.iter().map(|s| s.partition_key()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), parts.len());
    }
}
