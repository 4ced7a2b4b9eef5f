//! The query lower bound for verifying stability with choice oracles.
//!
//! The network has firms `f`, `g`, contract `y` (`f → g`) and `x_1..x_{2n}`
//! (`g → f`). `g`'s rule is known; `f`'s is either the default rule or one
//! of the `C(2n, n)` variants that additionally keep `y` on exactly one
//! `n`-set `X_I`. The empty outcome is stable under the default and blocked
//! by `X_I ∪ {y}` alone under variant `I`. A variant is told apart from the
//! default only by the query `X_I ∪ {y}`, so an adversary answering every
//! query by the default rule keeps some variant alive until all `C(2n, n)`
//! such queries have been made.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use super::partition::x_names;
use crate::choice::{subsets, ChoiceSpec, OracleRole};
use crate::error::ReduceError;
use crate::model::{NetworkBuilder, Outcome, TradingNetwork};
use crate::solve::{all_blocking_sets_exhaustive, find_blocking_set, Budget};

/// Largest `n` the experiment runs for.
pub const ORACLE_EXPERIMENT_CAP: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HiddenSetCheck {
    /// 1-based indices of `I`.
    pub hidden_set: Vec<usize>,
    /// The decider reports the empty outcome unstable.
    pub unstable: bool,
    /// The only blocking set is `X_I ∪ {y}`, by plain enumeration.
    pub unique_block: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub n: usize,
    /// Queries any sound decider must make: one per variant, since each
    /// variant has a single distinguishing input and these are distinct.
    pub queries_needed: u64,
    /// The distinguishing inputs, as 1-based indices of their `x`s (each
    /// also contains `y`).
    pub distinguishing_sets: Vec<Vec<usize>>,
    /// Distinct queries the real decider put to `f` under the default rule.
    pub decider_distinct_queries: u64,
    /// Total queries, repeats included.
    pub decider_total_queries: u64,
    /// The decider's queries include every distinguishing input.
    pub decider_covers_all: bool,
    /// The decider reports the empty outcome stable under the default rule.
    pub default_stable: bool,
    pub hidden_sets: Vec<HiddenSetCheck>,
}

impl OracleReport {
    /// Every check of the experiment came out as the theory predicts.
    pub fn consistent(&self) -> bool {
        self.queries_needed == self.distinguishing_sets.len() as u64
            && self.decider_covers_all
            && self.default_stable
            && self.hidden_sets.iter().all(|h| h.unstable && h.unique_block)
    }
}

/// The oracle-family network with `f`'s hidden set `hidden` (1-based).
pub fn oracle_network(n: usize, hidden: Option<&[usize]>) -> Result<TradingNetwork, ReduceError> {
    let names = x_names(2 * n);
    let mut builder = NetworkBuilder::new();
    builder
        .firm(
            "f",
            ChoiceSpec::OracleFamily {
                role: OracleRole::F,
                n,
                y: "y".into(),
                x: names.clone(),
                hidden_set: hidden.map(<[usize]>::to_vec),
            },
        )
        .firm(
            "g",
            ChoiceSpec::OracleFamily {
                role: OracleRole::G,
                n,
                y: "y".into(),
                x: names.clone(),
                hidden_set: None,
            },
        )
        .contract("y", "f", "g");
    for name in &names {
        builder.contract(name, "g", "f");
    }
    Ok(builder.build()?)
}

pub fn oracle_lower_bound_experiment(n: usize) -> Result<OracleReport, ReduceError> {
    if n == 0 || n > ORACLE_EXPERIMENT_CAP {
        return Err(ReduceError::CapExceeded {
            size: n,
            cap: ORACLE_EXPERIMENT_CAP,
        });
    }
    let budget = Budget::default();
    let default_net = oracle_network(n, None)?;
    let f = default_net.firm_id("f")?;
    let y = default_net.contract_id("y")?;
    let xs: Vec<_> = x_names(2 * n).iter().map(|c| default_net.contract_id(c)).collect::<Result<_, _>>()?;
    let hidden_sets: Vec<Vec<usize>> = (1..=2 * n).combinations(n).collect();

    // Distinguishing inputs: every input to f on which a variant answers
    // differently from the default rule.
    let variants = hidden_sets
        .iter()
        .map(|h| oracle_network(n, Some(h)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut local: Vec<_> = xs.clone();
    local.push(y);
    local.sort();
    let mut distinguishing: Vec<Vec<Outcome>> = vec![Vec::new(); variants.len()];
    for input in subsets(&local) {
        let base = default_net.choice(f).choose(&input);
        for (v, net) in variants.iter().enumerate() {
            if net.choice(f).choose(&input) != base {
                distinguishing[v].push(input.clone());
            }
        }
    }
    let mut required = BTreeSet::new();
    let mut distinguishing_sets = Vec::new();
    for inputs in &distinguishing {
        // A variant with several distinguishing inputs would not force one
        // specific query; the construction guarantees exactly one.
        let [only] = inputs.as_slice() else {
            return Err(ReduceError::NotAWitness);
        };
        required.insert(only.clone());
        let indices = xs.iter().enumerate().filter(|(_, &c)| only.contains(c)).map(|(i, _)| i + 1).collect();
        distinguishing_sets.push(indices);
    }

    // The real decider against the default rule.
    let oracle = default_net.choice(f).as_oracle().expect("f is an oracle firm");
    oracle.reset_queries();
    let verdict = find_blocking_set(&default_net, &Outcome::new(), budget)?;
    let asked = oracle.distinct_queries();
    let decider_total_queries = oracle.query_count();

    let mut checks = Vec::with_capacity(variants.len());
    for (h, net) in hidden_sets.iter().zip(&variants) {
        let block = find_blocking_set(net, &Outcome::new(), budget)?;
        let expected: Outcome = h.iter().map(|&i| xs[i - 1]).chain([y]).collect();
        let all = all_blocking_sets_exhaustive(net, &Outcome::new(), budget)?;
        checks.push(HiddenSetCheck {
            hidden_set: h.clone(),
            unstable: block.as_ref().is_some_and(|b| b.replay(net, &Outcome::new()).unwrap_or(false)),
            unique_block: all == [expected.clone()] && block.is_some_and(|b| b.as_outcome() == expected),
        });
    }

    Ok(OracleReport {
        n,
        queries_needed: required.len() as u64,
        distinguishing_sets,
        decider_distinct_queries: asked.len() as u64,
        decider_total_queries,
        decider_covers_all: required.is_subset(&asked),
        default_stable: verdict.is_none(),
        hidden_sets: checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_needs_two_queries() {
        let report = oracle_lower_bound_experiment(1).unwrap();
        assert_eq!(report.queries_needed, 2);
        assert_eq!(report.distinguishing_sets, vec![vec![1], vec![2]]);
        assert!(report.consistent(), "{report:?}");
    }

    #[test]
    fn rejects_out_of_range_n() {
        assert!(oracle_lower_bound_experiment(0).is_err());
        assert!(oracle_lower_bound_experiment(ORACLE_EXPERIMENT_CAP + 1).is_err());
    }
}
