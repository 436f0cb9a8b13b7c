//! Type spaces, menus, and the incentive audit.
//!
//! A type is a privately held signal `π`. A menu offers each type an item
//! `(σ(π), t(π))`. [`verify_menu`] evaluates, exactly, the incentive
//! constraints `V(σ(π)|π) − t(π) ≥ V(σ(π′)|π) − t(π′)`, the participation
//! constraints `V(σ(π)|π) − t(π) ≥ 0`, the expected revenue, and whether the
//! menu extracts the efficient surplus.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::complement::{complement_binary, complement_diagonal_simple};
use crate::decision::DecisionProblem;
use crate::error::Error;
use crate::rational::{int, Rational};
use crate::signal::Signal;

/// Default cap on `|Ω|` for [`enumerate_partitions`].
pub const DEFAULT_PARTITION_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSpace {
    types: Vec<(String, Signal)>,
    weights: Vec<Rational>,
}

impl TypeSpace {
    pub fn new(types: Vec<(String, Signal)>, weights: Vec<Rational>) -> Result<Self, Error> {
        if types.is_empty() {
            return Err(Error::InvalidTypeSpace("no types".into()));
        }
        if types.len() != weights.len() {
            return Err(Error::InvalidTypeSpace(format!(
                "{} types but {} weights",
                types.len(),
                weights.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for (id, _) in &types {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidTypeSpace(format!("duplicate type id `{id}`")));
            }
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidTypeSpace("negative weight".into()));
        }
        let total = weights.iter().fold(Rational::zero(), |a, w| a + w);
        if total != int(1) {
            return Err(Error::InvalidTypeSpace(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self { types, weights })
    }

    /// Equal weight on every type.
    pub fn uniform(types: Vec<(String, Signal)>) -> Result<Self, Error> {
        let n = types.len().max(1) as i64;
        let weights = vec![int(1) / int(n); types.len()];
        Self::new(types, weights)
    }

    pub fn types(&self) -> &[(String, Signal)] {
        &self.types
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<(&Signal, &Rational)> {
        self.types
            .iter()
            .position(|(t, _)| t == id)
            .map(|i| (&self.types[i].1, &self.weights[i]))
    }

    /// Type ids in sorted order.
    pub fn sorted_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.types.iter().map(|(t, _)| t.as_str()).collect();
        ids.sort_unstable();
        ids
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MenuItem {
    pub offered: Signal,
    pub price: Rational,
}

/// One item per type id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Menu {
    items: BTreeMap<String, MenuItem>,
}

impl Menu {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, type_id: impl Into<String>, offered: Signal, price: Rational) {
        self.items.insert(type_id.into(), MenuItem { offered, price });
    }

    pub fn get(&self, type_id: &str) -> Option<&MenuItem> {
        self.items.get(type_id)
    }

    pub fn items(&self) -> impl Iterator<Item = (&String, &MenuItem)> {
        self.items.iter()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The same menu with `delta` added to every price.
    pub fn shift_prices(&self, delta: &Rational) -> Menu {
        Menu {
            items: self
                .items
                .iter()
                .map(|(k, v)| {
                    (
                        k.clone(),
                        MenuItem {
                            offered: v.offered.clone(),
                            price: &v.price + delta,
                        },
                    )
                })
                .collect(),
        }
    }

    fn item(&self, type_id: &str) -> Result<&MenuItem, Error> {
        self.get(type_id)
            .ok_or_else(|| Error::MissingItem(type_id.to_string()))
    }
}

/// `(IC)` slack of `type_id` against mimicking `mimicked`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcSlack {
    pub type_id: String,
    pub mimicked: String,
    /// `V(σ(π)|π) − t(π) − [V(σ(π′)|π) − t(π′)]`; negative means violated.
    pub slack: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrSlack {
    pub type_id: String,
    /// `V(σ(π)|π) − t(π)`.
    pub slack: Rational,
}

/// Per-type line of an audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeAudit {
    pub type_id: String,
    pub weight: Rational,
    /// `U(π)`
    pub u_own: Rational,
    /// `U(σ(π) ∨ π)`
    pub u_with_item: Rational,
    /// `V(σ(π)|π)`
    pub value: Rational,
    pub price: Rational,
    /// `U(σ(π) ∨ π) = Ū`
    pub payoff_complete: bool,
    /// `t(π) = Ū − U(π)`
    pub full_price: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub full_info: Rational,
    pub revenue: Rational,
    /// All ordered pairs of distinct types, sorted by (type, mimicked).
    pub ic_slacks: Vec<IcSlack>,
    pub ir_slacks: Vec<IrSlack>,
    pub ic_violations: Vec<IcSlack>,
    pub ir_violations: Vec<IrSlack>,
    pub efficient_surplus: bool,
    pub rows: Vec<TypeAudit>,
}

impl AuditReport {
    pub fn passes(&self) -> bool {
        self.ic_violations.is_empty() && self.ir_violations.is_empty()
    }
}

/// Exact (IC)/(IR) audit of `menu` over `types`.
pub fn verify_menu(
    menu: &Menu,
    types: &TypeSpace,
    problem: &DecisionProblem,
) -> Result<AuditReport, Error> {
    let ids = types.sorted_ids();
    for id in &ids {
        menu.item(id)?;
    }
    let full_info = problem.full_info_payoff();

    let mut own_u = BTreeMap::new();
    for id in &ids {
        let (signal, _) = types.get(id).expect("listed id");
        own_u.insert(*id, problem.exante_payoff(signal)?);
    }

    let mut rows = Vec::with_capacity(ids.len());
    let mut ic_slacks = Vec::new();
    let mut ir_slacks = Vec::new();
    let mut revenue = Rational::zero();
    for id in &ids {
        let (signal, weight) = types.get(id).expect("listed id");
        let item = menu.item(id)?;
        let u_own = own_u[id].clone();
        let u_with_item = problem.exante_payoff(&item.offered.join(signal)?)?;
        let value = &u_with_item - &u_own;
        let net = &value - &item.price;
        revenue += weight * &item.price;

        for other in &ids {
            if other == id {
                continue;
            }
            let other_item = menu.item(other)?;
            let other_value = problem.exante_payoff(&other_item.offered.join(signal)?)? - &u_own;
            ic_slacks.push(IcSlack {
                type_id: id.to_string(),
                mimicked: other.to_string(),
                slack: &net - (other_value - &other_item.price),
            });
        }
        ir_slacks.push(IrSlack {
            type_id: id.to_string(),
            slack: net,
        });
        rows.push(TypeAudit {
            type_id: id.to_string(),
            weight: weight.clone(),
            payoff_complete: u_with_item == full_info,
            full_price: item.price == &full_info - &u_own,
            u_own,
            u_with_item,
            value,
            price: item.price.clone(),
        });
    }
    let ic_violations = ic_slacks
        .iter()
        .filter(|s| s.slack.is_negative())
        .cloned()
        .collect();
    let ir_violations = ir_slacks
        .iter()
        .filter(|s| s.slack.is_negative())
        .cloned()
        .collect();
    let efficient_surplus = rows.iter().all(|r| r.payoff_complete && r.full_price);
    Ok(AuditReport {
        full_info,
        revenue,
        ic_slacks,
        ir_slacks,
        ic_violations,
        ir_violations,
        efficient_surplus,
        rows,
    })
}

/// Menu pairing each type with `complement(π)` priced at `Ū − U(π)`.
pub fn build_efficient_menu<F>(
    types: &TypeSpace,
    problem: &DecisionProblem,
    mut complement: F,
) -> Result<Menu, Error>
where
    F: FnMut(&Signal) -> Result<Signal, Error>,
{
    let full_info = problem.full_info_payoff();
    let mut menu = Menu::new();
    for (id, signal) in types.types() {
        let offered = complement(signal)?;
        let price = &full_info - problem.exante_payoff(signal)?;
        menu.insert(id.clone(), offered, price);
    }
    Ok(menu)
}

/// Keep/switch complements at full willingness to pay (binary actions).
pub fn build_menu_binary(types: &TypeSpace, problem: &DecisionProblem) -> Result<Menu, Error> {
    problem.state_action_partition()?;
    build_efficient_menu(types, problem, |pi| {
        Ok(complement_binary(pi, problem)?.complement)
    })
}

/// Reveal-or-keep complements at full willingness to pay (diagonal
/// payoffs, simple types).
pub fn build_menu_diagonal(types: &TypeSpace, problem: &DecisionProblem) -> Result<Menu, Error> {
    build_efficient_menu(types, problem, |pi| {
        Ok(complement_diagonal_simple(pi, problem)?.complement)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Choice {
    /// Buy the item intended for this type id.
    Item(String),
    OptOut,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub choice: Choice,
    /// `V(σ|π) − t` of the chosen item, zero for opting out.
    pub net: Rational,
}

/// The utility-maximizing choice of `type_id` among all items and opting
/// out. Ties favor the type's own item, then other items by id, then
/// opting out.
pub fn best_deviation(
    type_id: &str,
    menu: &Menu,
    types: &TypeSpace,
    problem: &DecisionProblem,
) -> Result<Deviation, Error> {
    let (signal, _) = types
        .get(type_id)
        .ok_or_else(|| Error::InvalidTypeSpace(format!("unknown type `{type_id}`")))?;
    let u_own = problem.exante_payoff(signal)?;
    let net_of = |item: &MenuItem| -> Result<Rational, Error> {
        Ok(problem.exante_payoff(&item.offered.join(signal)?)? - &u_own - &item.price)
    };

    let mut best = Deviation {
        choice: Choice::Item(type_id.to_string()),
        net: net_of(menu.item(type_id)?)?,
    };
    for (id, item) in menu.items() {
        if id == type_id {
            continue;
        }
        let net = net_of(item)?;
        if net > best.net {
            best = Deviation {
                choice: Choice::Item(id.clone()),
                net,
            };
        }
    }
    if best.net.is_negative() {
        best = Deviation {
            choice: Choice::OptOut,
            net: Rational::zero(),
        };
    }
    Ok(best)
}

/// All set partitions of the states as simple signals, in
/// restricted-growth order (the coarsest partition first).
pub fn enumerate_partitions(problem: &DecisionProblem, cap: usize) -> Result<Vec<Signal>, Error> {
    let states = problem.states();
    let n = states.len();
    if n > cap {
        return Err(Error::TooLarge(format!(
            "{n} states exceed the partition cap of {cap}"
        )));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().max().map_or(0, |m| m + 1);
        let partition: Vec<Vec<usize>> = (0..blocks)
            .map(|b| (0..n).filter(|&i| rgs[i] == b).collect())
            .collect();
        out.push(Signal::from_partition(
            format!("partition-{}", out.len() + 1),
            states,
            &partition,
        )?);
        if !next_restricted_growth(&mut rgs) {
            break;
        }
    }
    Ok(out)
}

fn next_restricted_growth(rgs: &mut [usize]) -> bool {
    for i in (1..rgs.len()).rev() {
        let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
        if rgs[i] <= prefix_max {
            rgs[i] += 1;
            for x in rgs[i + 1..].iter_mut() {
                *x = 0;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::Belief;
    use crate::rational::rat;

    fn ids(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn diagonal(n: usize) -> DecisionProblem {
        DecisionProblem::new(
            ids("w", n),
            ids("a", n),
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { int(i as i64 + 1) } else { int(0) }).collect())
                .collect(),
            Belief::uniform(n),
        )
        .unwrap()
    }

    #[test]
    fn bell_numbers() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)] {
            let parts = enumerate_partitions(&diagonal(n), DEFAULT_PARTITION_CAP).unwrap();
            assert_eq!(parts.len(), bell);
            assert!(parts.iter().all(Signal::is_simple));
            assert_eq!(parts[0].messages().len(), 1);
            assert_eq!(parts.last().unwrap().messages().len(), n);
        }
        assert!(matches!(
            enumerate_partitions(&diagonal(4), 3),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn type_space_validation() {
        let p = diagonal(2);
        let t = Signal::trivial(p.states());
        assert!(TypeSpace::new(vec![("a".into(), t.clone())], vec![rat(1, 2)]).is_err());
        assert!(TypeSpace::new(
            vec![("a".into(), t.clone()), ("a".into(), t.clone())],
            vec![rat(1, 2), rat(1, 2)]
        )
        .is_err());
        assert!(TypeSpace::new(
            vec![("a".into(), t.clone()), ("b".into(), t)],
            vec![rat(3, 2), rat(-1, 2)]
        )
        .is_err());
    }

    #[test]
    fn missing_item_is_an_error() {
        let p = diagonal(2);
        let types = TypeSpace::uniform(vec![("u".into(), Signal::trivial(p.states()))]).unwrap();
        assert_eq!(
            verify_menu(&Menu::new(), &types, &p),
            Err(Error::MissingItem("u".into()))
        );
    }

    #[test]
    fn singleton_partition_type_gets_trivial_item() {
        let p = diagonal(3);
        let full = Signal::fully_revealing(p.states());
        let types = TypeSpace::uniform(vec![("full".into(), full)]).unwrap();
        let menu = build_menu_diagonal(&types, &p).unwrap();
        let item = menu.get("full").unwrap();
        assert_eq!(item.price, int(0));
        assert!(item.offered.same_partition(&Signal::trivial(p.states())));
    }

    #[test]
    fn price_shift_moves_ir_not_ic() {
        let p = diagonal(3);
        let types = TypeSpace::uniform(
            enumerate_partitions(&p, 6)
                .unwrap()
                .into_iter()
                .map(|s| (s.name().to_string(), s))
                .collect(),
        )
        .unwrap();
        let menu = build_menu_diagonal(&types, &p).unwrap();
        let a = verify_menu(&menu, &types, &p).unwrap();
        let b = verify_menu(&menu.shift_prices(&rat(1, 7)), &types, &p).unwrap();
        for (x, y) in a.ic_slacks.iter().zip(&b.ic_slacks) {
            assert_eq!(x.slack, y.slack);
        }
        for (x, y) in a.ir_slacks.iter().zip(&b.ir_slacks) {
            assert_eq!(&x.slack - rat(1, 7), y.slack);
        }
    }

    #[test]
    fn overpriced_item_leads_to_opt_out() {
        let p = diagonal(2);
        let t = Signal::trivial(p.states());
        let types = TypeSpace::uniform(vec![("u".into(), t)]).unwrap();
        let mut menu = Menu::new();
        menu.insert("u", Signal::fully_revealing(p.states()), int(100));
        let d = best_deviation("u", &menu, &types, &p).unwrap();
        assert_eq!(d.choice, Choice::OptOut);
        let audit = verify_menu(&menu, &types, &p).unwrap();
        assert_eq!(audit.ir_violations.len(), 1);
        assert!(!audit.passes());
    }
}
