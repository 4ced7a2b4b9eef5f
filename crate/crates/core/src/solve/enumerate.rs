use std::ops::ControlFlow;

use crate::error::SolveError;
use crate::model::{Outcome, TradingNetwork};

use super::engine::{Condition, LocalSearch, Target};
use super::Budget;

/// Calls `visit` on every acceptable outcome, in the search's canonical
/// order, until it breaks.
///
/// Individual rationality is a per-firm condition, so the exact local
/// search applies. At flow-based non-terminals it reduces to equal
/// upstream and downstream counts, which makes the search an enumeration of
/// integral circulations through the terminals; each candidate is then
/// confirmed against the definition.
pub fn for_each_acceptable_outcome(
    net: &TradingNetwork,
    budget: Budget,
    visit: &mut dyn FnMut(&Outcome) -> Result<ControlFlow<()>, SolveError>,
) -> Result<(), SolveError> {
    let all = net.all_contracts();
    let mut search = LocalSearch::new(net, Condition::IndividuallyRational, &all, budget)?;
    let _ = search.run(Target::Any, &mut |candidate| {
        if !net.is_acceptable(&candidate)? {
            return Ok(ControlFlow::Continue(()));
        }
        visit(&candidate)
    })?;
    Ok(())
}

/// All acceptable outcomes, each once.
pub fn enumerate_acceptable_outcomes(net: &TradingNetwork, budget: Budget) -> Result<Vec<Outcome>, SolveError> {
    let mut all = Vec::new();
    for_each_acceptable_outcome(net, budget, &mut |a| {
        all.push(a.clone());
        Ok(ControlFlow::Continue(()))
    })?;
    all.sort();
    Ok(all)
}
