use std::collections::VecDeque;

use crate::error::SolveError;
use crate::model::{ContractId, Outcome, TradingNetwork};

use super::{AcceptCache, BlockKind, BlockReport};

/// A locally blocking trail to `a`, if one exists.
///
/// Breadth-first search over the contracts of `X ∖ A`: sources are the
/// contracts their seller accepts alone, a contract steps to a successor
/// when the firm between them accepts the pair, and the search stops at a
/// contract its buyer accepts alone. A shortest such walk never repeats a
/// contract, so it is a trail; conversely every locally blocking trail is
/// such a walk. Pair checks are evaluated lazily and at most once each.
pub fn find_locally_blocking_trail(net: &TradingNetwork, a: &Outcome) -> Result<Option<BlockReport>, SolveError> {
    let found = shortest_walk(net, a, true)?;
    Ok(found.map(|seq| BlockReport::new(net, BlockKind::LocallyBlockingTrail, seq)))
}

/// `a` is acceptable and admits no locally blocking trail.
pub fn is_trail_stable(net: &TradingNetwork, a: &Outcome) -> Result<bool, SolveError> {
    Ok(net.is_acceptable(a)? && find_locally_blocking_trail(net, a)?.is_none())
}

/// Shortest walk over `X ∖ A` from a contract acceptable to its seller
/// alone to one acceptable to its buyer alone. With `check_pairs` false
/// every linked pair is allowed.
pub(crate) fn shortest_walk(net: &TradingNetwork, a: &Outcome, check_pairs: bool) -> Result<Option<Vec<ContractId>>, SolveError> {
    let free = net.all_contracts().difference(a);
    let mut cache = AcceptCache::new(net, a);
    let mut parent: Vec<Option<Option<ContractId>>> = vec![None; net.contract_count()];
    let mut queue = VecDeque::new();
    for x in &free {
        if cache.single(net.contract(x).seller, x)? {
            parent[x.index()] = Some(None);
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        let firm = net.contract(x).buyer;
        if cache.single(firm, x)? {
            let mut seq = vec![x];
            let mut cur = x;
            while let Some(Some(prev)) = parent[cur.index()] {
                seq.push(prev);
                cur = prev;
            }
            seq.reverse();
            return Ok(Some(seq));
        }
        for &next in net.downstream_contracts(firm) {
            if !free.contains(next) || parent[next.index()].is_some() {
                continue;
            }
            if !check_pairs || cache.pair(firm, x, next)? {
                parent[next.index()] = Some(Some(x));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::ChoiceSpec;
    use crate::model::{NetworkBuilder, SequenceKind};

    fn single() -> TradingNetwork {
        NetworkBuilder::new()
            .firm("a", ChoiceSpec::Terminal)
            .firm("b", ChoiceSpec::Terminal)
            .contract("x", "a", "b")
            .build()
            .unwrap()
    }

    #[test]
    fn single_contract_blocks_empty_outcome() {
        let net = single();
        let block = find_locally_blocking_trail(&net, &Outcome::new()).unwrap().unwrap();
        assert_eq!(block.contracts, vec![net.contract_id("x").unwrap()]);
        assert!(block.replay(&net, &Outcome::new()).unwrap());
        assert!(is_trail_stable(&net, &net.all_contracts()).unwrap());
    }

    #[test]
    fn trail_may_revisit_a_firm() {
        // a -> f -> b -> f -> t where f accepts each consecutive pair but the
        // only route to t goes through b and back.
        let net = NetworkBuilder::new()
            .firm("a", ChoiceSpec::Terminal)
            .firm("t", ChoiceSpec::Terminal)
            .firm("f", ChoiceSpec::flow_based(["af", "bf"], ["fb", "ft"]))
            .firm("b", ChoiceSpec::flow_based(["fb"], ["bf"]))
            .contract("af", "a", "f")
            .contract("fb", "f", "b")
            .contract("bf", "b", "f")
            .contract("ft", "f", "t")
            .build()
            .unwrap();
        let block = find_locally_blocking_trail(&net, &Outcome::new()).unwrap().unwrap();
        assert_eq!(net.validate_sequence(&block.contracts), SequenceKind::Path);
        assert!(block.replay(&net, &Outcome::new()).unwrap());
    }

    #[test]
    fn unacceptable_outcome_is_not_trail_stable() {
        let net = NetworkBuilder::new()
            .firm("s", ChoiceSpec::Terminal)
            .firm("t", ChoiceSpec::Terminal)
            .firm("f", ChoiceSpec::flow_based(["sf"], ["ft"]))
            .contract("sf", "s", "f")
            .contract("ft", "f", "t")
            .build()
            .unwrap();
        let a = net.outcome(["ft"]).unwrap();
        assert!(!is_trail_stable(&net, &a).unwrap());
    }
}
