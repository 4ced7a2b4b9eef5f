use crate::error::SolveError;
use crate::model::{ContractId, Outcome, TradingNetwork};

use super::trail::find_locally_blocking_trail;

/// Result of deferred acceptance together with its cost counters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeferredAcceptance {
    pub outcome: Outcome,
    /// Applications of the fixed-point operator, including the final one
    /// that confirms the fixed point.
    pub rounds: usize,
    /// `|X ∖ Y*| + |X ∖ Z*|`: contracts withdrawn by sellers plus contracts
    /// refused by buyers.
    pub rejections: usize,
    /// Choice-function evaluations spent, verification included.
    pub evaluations: u64,
}

/// Generalized Gale–Shapley: iterate `(Y, Z) ↦ (X ∖ R_S(Z|Y), X ∖ R_B(Y|Z))`
/// from `(X, ∅)` and return `Y* ∩ Z*`.
///
/// The operator is monotone for fully substitutable choice functions; this
/// is asserted every round, and the result is checked to be acceptable and
/// free of locally blocking trails before it is returned.
pub fn deferred_acceptance(net: &TradingNetwork) -> Result<DeferredAcceptance, SolveError> {
    let start = net.evaluations();
    let all = net.all_contracts();
    let limit = 2 * net.contract_count() + 1;
    let mut offered = all.clone();
    let mut requested = Outcome::new();
    let mut rounds = 0;
    loop {
        if rounds == limit {
            return Err(SolveError::RoundBudgetExceeded { limit });
        }
        rounds += 1;
        let (seller_rejected, buyer_rejected) = rejections(net, &offered, &requested)?;
        let next_offered = all.difference(&seller_rejected);
        let next_requested = all.difference(&buyer_rejected);
        if !next_offered.is_subset(&offered) || !requested.is_subset(&next_requested) {
            return Err(SolveError::NotMonotone { round: rounds });
        }
        if next_offered == offered && next_requested == requested {
            break;
        }
        offered = next_offered;
        requested = next_requested;
    }
    let outcome = offered.intersection(&requested);
    if !net.is_acceptable(&outcome)? {
        return Err(SolveError::Unverified("the outcome is not acceptable".into()));
    }
    if let Some(block) = find_locally_blocking_trail(net, &outcome)? {
        let names: Vec<_> = block.contracts.iter().map(|&c| net.contract_name(c)).collect();
        return Err(SolveError::Unverified(format!("locally blocking trail [{}]", names.join(", "))));
    }
    Ok(DeferredAcceptance {
        rejections: 2 * all.len() - offered.len() - requested.len(),
        outcome,
        rounds,
        evaluations: net.evaluations() - start,
    })
}

/// `(R_S(Z|Y), R_B(Y|Z))` over all firms. Each firm is offered the same
/// set `Y_f^B ∪ Z_f^S` on both sides, so one evaluation serves both.
fn rejections(net: &TradingNetwork, offered: &Outcome, requested: &Outcome) -> Result<(Outcome, Outcome), SolveError> {
    let mut by_sellers = Outcome::new();
    let mut by_buyers = Outcome::new();
    for f in net.firms() {
        let ups = net.upstream_contracts(f).iter().copied().filter(|&c| offered.contains(c));
        let downs = net.downstream_contracts(f).iter().copied().filter(|&c| requested.contains(c));
        let menu: Outcome = ups.chain(downs).collect();
        if menu.is_empty() {
            continue;
        }
        let chosen = net.choose(f, &menu)?;
        for c in menu.difference(&chosen) {
            if is_upstream(net, f, c) {
                by_buyers.insert(c);
            } else {
                by_sellers.insert(c);
            }
        }
    }
    Ok((by_sellers, by_buyers))
}

fn is_upstream(net: &TradingNetwork, f: crate::model::FirmId, c: ContractId) -> bool {
    net.contract(c).buyer == f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::ChoiceSpec;
    use crate::model::NetworkBuilder;

    #[test]
    fn empty_network() {
        let net = NetworkBuilder::new().build().unwrap();
        let da = deferred_acceptance(&net).unwrap();
        assert!(da.outcome.is_empty());
        assert_eq!(da.rounds, 1);
    }

    #[test]
    fn single_contract_is_signed() {
        let net = NetworkBuilder::new()
            .firm("a", ChoiceSpec::Terminal)
            .firm("b", ChoiceSpec::Terminal)
            .contract("x", "a", "b")
            .build()
            .unwrap();
        let da = deferred_acceptance(&net).unwrap();
        assert_eq!(da.outcome, net.outcome(["x"]).unwrap());
        assert!(da.rounds <= 3);
    }

    #[test]
    fn line_through_flow_firm() {
        let net = NetworkBuilder::new()
            .firm("s", ChoiceSpec::Terminal)
            .firm("t", ChoiceSpec::Terminal)
            .firm("f", ChoiceSpec::flow_based(["sf"], ["ft"]))
            .contract("sf", "s", "f")
            .contract("ft", "f", "t")
            .build()
            .unwrap();
        let da = deferred_acceptance(&net).unwrap();
        assert_eq!(da.outcome, net.all_contracts());
        assert!(da.rounds <= 5);
    }

    #[test]
    fn prefers_top_supplier() {
        // Two suppliers compete for one downstream slot.
        let net = NetworkBuilder::new()
            .firm("s1", ChoiceSpec::Terminal)
            .firm("s2", ChoiceSpec::Terminal)
            .firm("t", ChoiceSpec::Terminal)
            .firm("f", ChoiceSpec::flow_based(["b", "a"], ["c"]))
            .contract("a", "s1", "f")
            .contract("b", "s2", "f")
            .contract("c", "f", "t")
            .build()
            .unwrap();
        let da = deferred_acceptance(&net).unwrap();
        assert_eq!(da.outcome, net.outcome(["b", "c"]).unwrap());
        assert!(da.rejections >= 1);
        assert!(da.evaluations > 0);
    }
}
