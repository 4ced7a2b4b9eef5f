use std::collections::VecDeque;

use crate::error::SolveError;
use crate::model::{ContractId, FirmId, Outcome, TradingNetwork};

use super::{AcceptCache, BlockKind, BlockReport, Budget, Cumulation, Meter};

/// A sequentially blocking trail to `a`, if one exists.
///
/// Two exhaustive depth-first searches over trails in `X ∖ A`: one grows
/// trails forwards and checks each intermediate firm's cumulative prefix,
/// the other grows them backwards and checks cumulative suffixes. Each
/// condition depends only on the part of the trail already built, so both
/// prunes are exact. Branches that cannot reach a valid last contract
/// (resp. be reached from a valid first contract) in the contract graph of
/// `X ∖ A` are cut as well.
pub fn find_sequentially_blocking_trail(net: &TradingNetwork, a: &Outcome, budget: Budget) -> Result<Option<BlockReport>, SolveError> {
    let free = net.all_contracts().difference(a);
    let mut search = Search {
        net,
        free: &free,
        cache: AcceptCache::new(net, a),
        meter: Meter::new(budget),
        used: vec![false; net.contract_count()],
        seq: VecDeque::new(),
    };
    let mut starts = Vec::new();
    let mut ends = Vec::new();
    for x in &free {
        let c = net.contract(x);
        if search.cache.single(c.seller, x)? {
            starts.push(x);
        }
        if search.cache.single(c.buyer, x)? {
            ends.push(x);
        }
    }
    let to_end = reachable(net, &free, &ends, false);
    let from_start = reachable(net, &free, &starts, true);
    for &x in &starts {
        if to_end[x.index()] && search.forward(x, &to_end)? {
            return Ok(Some(search.report(Cumulation::Prefix)));
        }
    }
    for &x in &ends {
        if from_start[x.index()] && search.backward(x, &from_start)? {
            return Ok(Some(search.report(Cumulation::Suffix)));
        }
    }
    Ok(None)
}

/// `a` is acceptable and admits no sequentially blocking trail.
pub fn is_weakly_trail_stable(net: &TradingNetwork, a: &Outcome, budget: Budget) -> Result<bool, SolveError> {
    Ok(net.is_acceptable(a)? && find_sequentially_blocking_trail(net, a, budget)?.is_none())
}

/// Contracts linked to `seeds` in the contract graph of `free`: those from
/// which a seed is reachable, or with `forward`, those reachable from one.
fn reachable(net: &TradingNetwork, free: &Outcome, seeds: &[ContractId], forward: bool) -> Vec<bool> {
    let mut seen = vec![false; net.contract_count()];
    let mut queue: VecDeque<ContractId> = seeds.iter().copied().collect();
    for &s in seeds {
        seen[s.index()] = true;
    }
    while let Some(x) = queue.pop_front() {
        let c = net.contract(x);
        let next = if forward {
            net.downstream_contracts(c.buyer)
        } else {
            net.upstream_contracts(c.seller)
        };
        for &y in next {
            if free.contains(y) && !seen[y.index()] {
                seen[y.index()] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

struct Search<'a> {
    net: &'a TradingNetwork,
    free: &'a Outcome,
    cache: AcceptCache<'a>,
    meter: Meter,
    used: Vec<bool>,
    seq: VecDeque<ContractId>,
}

impl Search<'_> {
    fn report(&self, how: Cumulation) -> BlockReport {
        BlockReport::new(self.net, BlockKind::SequentiallyBlockingTrail(how), self.seq.iter().copied().collect())
    }

    fn share(&self, firm: FirmId) -> Vec<ContractId> {
        let mut share: Vec<_> = self.seq.iter().copied().filter(|&c| self.net.contract(c).involves(firm)).collect();
        share.sort();
        share
    }

    /// Appends `x`; true (leaving the trail in place) once a trail is found.
    fn forward(&mut self, x: ContractId, viable: &[bool]) -> Result<bool, SolveError> {
        self.meter.tick()?;
        self.seq.push_back(x);
        self.used[x.index()] = true;
        let firm = self.net.contract(x).buyer;
        if self.cache.single(firm, x)? {
            return Ok(true);
        }
        for &next in self.net.downstream_contracts(firm) {
            if !self.free.contains(next) || self.used[next.index()] || !viable[next.index()] {
                continue;
            }
            self.seq.push_back(next);
            let share = self.share(firm);
            self.seq.pop_back();
            if self.cache.check(firm, &share)? && self.forward(next, viable)? {
                return Ok(true);
            }
        }
        self.used[x.index()] = false;
        self.seq.pop_back();
        Ok(false)
    }

    /// Prepends `x`; true (leaving the trail in place) once a trail is found.
    fn backward(&mut self, x: ContractId, viable: &[bool]) -> Result<bool, SolveError> {
        self.meter.tick()?;
        self.seq.push_front(x);
        self.used[x.index()] = true;
        let firm = self.net.contract(x).seller;
        if self.cache.single(firm, x)? {
            return Ok(true);
        }
        for &prev in self.net.upstream_contracts(firm) {
            if !self.free.contains(prev) || self.used[prev.index()] || !viable[prev.index()] {
                continue;
            }
            self.seq.push_front(prev);
            let share = self.share(firm);
            self.seq.pop_front();
            if self.cache.check(firm, &share)? && self.backward(prev, viable)? {
                return Ok(true);
            }
        }
        self.used[x.index()] = false;
        self.seq.pop_front();
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::ChoiceSpec;
    use crate::model::NetworkBuilder;
    use crate::solve::find_locally_blocking_trail;

    #[test]
    fn single_contract_blocks_empty_outcome() {
        let net = NetworkBuilder::new()
            .firm("a", ChoiceSpec::Terminal)
            .firm("b", ChoiceSpec::Terminal)
            .contract("x", "a", "b")
            .build()
            .unwrap();
        let empty = Outcome::new();
        let block = find_sequentially_blocking_trail(&net, &empty, Budget::default()).unwrap().unwrap();
        assert_eq!(block.contracts.len(), 1);
        assert!(block.replay(&net, &empty).unwrap());
    }

    #[test]
    fn distinct_firm_trail_is_sequentially_blocking() {
        let net = NetworkBuilder::new()
            .firm("s", ChoiceSpec::Terminal)
            .firm("t", ChoiceSpec::Terminal)
            .firm("f", ChoiceSpec::flow_based(["sf"], ["fg"]))
            .firm("g", ChoiceSpec::flow_based(["fg"], ["gt"]))
            .contract("sf", "s", "f")
            .contract("fg", "f", "g")
            .contract("gt", "g", "t")
            .build()
            .unwrap();
        let empty = Outcome::new();
        let local = find_locally_blocking_trail(&net, &empty).unwrap().unwrap();
        let weak = find_sequentially_blocking_trail(&net, &empty, Budget::default()).unwrap().unwrap();
        assert_eq!(local.contracts, weak.contracts);
        assert!(weak.replay(&net, &empty).unwrap());
        assert!(is_weakly_trail_stable(&net, &net.all_contracts(), Budget::default()).unwrap());
    }
}
