use std::ops::ControlFlow;

use itertools::Itertools;

use crate::error::SolveError;
use crate::model::{Outcome, TradingNetwork};

use super::engine::{Condition, LocalSearch, Target};
use super::path_cycle::find_blocking_path_or_cycle;
use super::{BlockKind, BlockReport, Budget};

/// A blocking set for `a`, if one exists.
///
/// On a flow network with acceptable `a`, blocking sets exist exactly when
/// blocking paths or cycles do, and the (linear) path-or-cycle search is
/// used; the report then carries the path or cycle kind. Otherwise the
/// search is [`find_blocking_set_general`].
pub fn find_blocking_set(net: &TradingNetwork, a: &Outcome, budget: Budget) -> Result<Option<BlockReport>, SolveError> {
    if net.is_flow_network() && net.is_acceptable(a)? {
        return find_blocking_path_or_cycle(net, a, budget);
    }
    find_blocking_set_general(net, a, budget)
}

/// `a` is acceptable and no non-empty set disjoint from it blocks.
pub fn is_stable(net: &TradingNetwork, a: &Outcome, budget: Budget) -> Result<bool, SolveError> {
    Ok(net.is_acceptable(a)? && find_blocking_set(net, a, budget)?.is_none())
}

/// Exact blocking-set search for any network. Returns a blocking set of
/// minimum size, lexicographically first among those.
///
/// Blocking is a conjunction of one condition per firm on that firm's share
/// of the set, so the search decides contracts one at a time and abandons a
/// branch as soon as some firm's share can no longer be completed into an
/// acceptable one. No monotonicity of acceptability is assumed.
pub fn find_blocking_set_general(net: &TradingNetwork, a: &Outcome, budget: Budget) -> Result<Option<BlockReport>, SolveError> {
    let free = net.all_contracts().difference(a);
    let first = first_match(net, a, &free, Target::NonEmpty, budget)?;
    let Some(first) = first else {
        return Ok(None);
    };
    for k in 1..first.len() {
        if let Some(smaller) = first_match(net, a, &free, Target::Exactly(k), budget)? {
            return Ok(Some(BlockReport::new(net, BlockKind::BlockingSet, smaller.to_vec())));
        }
    }
    let minimal = match first_match(net, a, &free, Target::Exactly(first.len()), budget)? {
        Some(m) => m,
        None => first,
    };
    Ok(Some(BlockReport::new(net, BlockKind::BlockingSet, minimal.to_vec())))
}

fn first_match(net: &TradingNetwork, a: &Outcome, free: &Outcome, target: Target, budget: Budget) -> Result<Option<Outcome>, SolveError> {
    let mut search = LocalSearch::new(net, Condition::AcceptableAlongside(a), free, budget)?;
    let mut found = None;
    let _ = search.run(target, &mut |z| {
        found = Some(z);
        Ok(ControlFlow::Break(()))
    })?;
    Ok(found)
}

/// Plain enumeration of the non-empty subsets of `X ∖ A` in increasing
/// size, each checked directly against the definition. Needs
/// `|X ∖ A| ≤ budget` bits.
pub fn find_blocking_set_exhaustive(net: &TradingNetwork, a: &Outcome, budget: Budget) -> Result<Option<BlockReport>, SolveError> {
    let mut first = None;
    exhaustive(net, a, budget, &mut |z| {
        first = Some(z);
        ControlFlow::Break(())
    })?;
    Ok(first.map(|z: Outcome| BlockReport::new(net, BlockKind::BlockingSet, z.to_vec())))
}

/// Every blocking set of `a`, by plain enumeration.
pub fn all_blocking_sets_exhaustive(net: &TradingNetwork, a: &Outcome, budget: Budget) -> Result<Vec<Outcome>, SolveError> {
    let mut all = Vec::new();
    exhaustive(net, a, budget, &mut |z| {
        all.push(z);
        ControlFlow::Continue(())
    })?;
    Ok(all)
}

fn exhaustive(net: &TradingNetwork, a: &Outcome, budget: Budget, visit: &mut dyn FnMut(Outcome) -> ControlFlow<()>) -> Result<(), SolveError> {
    let free = net.all_contracts().difference(a).to_vec();
    if free.len() > budget.as_bits() as usize {
        return Err(SolveError::BudgetExceeded { examined: 0 });
    }
    for k in 1..=free.len() {
        for combo in free.iter().copied().combinations(k) {
            let z: Outcome = combo.into_iter().collect();
            if net.is_w_acceptable_all(&z, a)? && visit(z).is_break() {
                return Ok(());
            }
        }
    }
    Ok(())
}
