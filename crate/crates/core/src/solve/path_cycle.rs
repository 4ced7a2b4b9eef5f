use std::collections::HashSet;

use crate::error::SolveError;
use crate::model::{ContractId, FirmId, Outcome, TradingNetwork};

use super::trail::shortest_walk;
use super::{AcceptCache, BlockKind, BlockReport, Budget, Meter};

/// A blocking path or cycle for `a`, if one exists.
///
/// On a flow network with acceptable `a` this is linear: every cycle of
/// `X ∖ A` blocks, since a balanced firm keeps one more contract on each
/// side; and once `X ∖ A` is acyclic, every walk is a path and each
/// intermediate firm again gains one contract per side, so only the two
/// endpoint conditions matter. Everything else uses
/// [`find_blocking_path_or_cycle_by_enumeration`].
pub fn find_blocking_path_or_cycle(net: &TradingNetwork, a: &Outcome, budget: Budget) -> Result<Option<BlockReport>, SolveError> {
    if net.is_flow_network() && net.is_acceptable(a)? {
        if let Some(cycle) = find_cycle(net, a) {
            return Ok(Some(BlockReport::new(net, BlockKind::BlockingCycle, cycle)));
        }
        let path = shortest_walk(net, a, false)?;
        return Ok(path.map(|p| BlockReport::new(net, BlockKind::BlockingPath, p)));
    }
    find_blocking_path_or_cycle_by_enumeration(net, a, budget)
}

/// `a` is acceptable and admits no blocking path or cycle.
pub fn is_path_or_cycle_stable(net: &TradingNetwork, a: &Outcome, budget: Budget) -> Result<bool, SolveError> {
    Ok(net.is_acceptable(a)? && find_blocking_path_or_cycle(net, a, budget)?.is_none())
}

/// A directed cycle among the contracts of `X ∖ A`, by depth-first search
/// over firms.
fn find_cycle(net: &TradingNetwork, a: &Outcome) -> Option<Vec<ContractId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; net.firm_count()];
    // Contract used to enter each open firm.
    let mut via: Vec<Option<ContractId>> = vec![None; net.firm_count()];
    for root in net.firms() {
        if mark[root.index()] != Mark::New {
            continue;
        }
        let mut stack: Vec<(FirmId, usize)> = vec![(root, 0)];
        mark[root.index()] = Mark::Open;
        while let Some(&mut (f, ref mut next)) = stack.last_mut() {
            let downs = net.downstream_contracts(f);
            if *next == downs.len() {
                mark[f.index()] = Mark::Done;
                stack.pop();
                continue;
            }
            let c = downs[*next];
            *next += 1;
            if a.contains(c) {
                continue;
            }
            let g = net.contract(c).buyer;
            match mark[g.index()] {
                Mark::New => {
                    mark[g.index()] = Mark::Open;
                    via[g.index()] = Some(c);
                    stack.push((g, 0));
                }
                Mark::Open => {
                    let mut cycle = vec![c];
                    let mut cur = f;
                    while cur != g {
                        let e = via[cur.index()].expect("open firm entered by a contract");
                        cycle.push(e);
                        cur = net.contract(e).seller;
                    }
                    cycle.reverse();
                    return Some(cycle);
                }
                Mark::Done => {}
            }
        }
    }
    None
}

/// Exhaustive depth-first enumeration of paths and cycles in `X ∖ A`,
/// valid for any network. Paths are extended only through firms that accept
/// the consecutive pair, which is exactly their share of the path; the
/// endpoint conditions are checked as each prefix is closed off. Length is
/// bounded by the number of firms since sellers are distinct.
pub fn find_blocking_path_or_cycle_by_enumeration(net: &TradingNetwork, a: &Outcome, budget: Budget) -> Result<Option<BlockReport>, SolveError> {
    let free = net.all_contracts().difference(a);
    let mut search = Enumeration {
        net,
        free: &free,
        cache: AcceptCache::new(net, a),
        meter: Meter::new(budget),
        seq: Vec::new(),
        sellers: HashSet::new(),
    };
    for first in &free {
        search.seq.push(first);
        search.sellers.insert(net.contract(first).seller);
        let found = search.extend()?;
        search.sellers.clear();
        search.seq.clear();
        if let Some((kind, seq)) = found {
            return Ok(Some(BlockReport::new(net, kind, seq)));
        }
    }
    Ok(None)
}

struct Enumeration<'a> {
    net: &'a TradingNetwork,
    free: &'a Outcome,
    cache: AcceptCache<'a>,
    meter: Meter,
    seq: Vec<ContractId>,
    sellers: HashSet<FirmId>,
}

impl Enumeration<'_> {
    fn extend(&mut self) -> Result<Option<(BlockKind, Vec<ContractId>)>, SolveError> {
        self.meter.tick()?;
        let first = self.seq[0];
        let last = *self.seq.last().expect("non-empty");
        let origin = self.net.contract(first).seller;
        let end = self.net.contract(last).buyer;
        if end == origin {
            // Closed: a cycle if the origin accepts its two contracts.
            if self.cache.pair(origin, last, first)? {
                return Ok(Some((BlockKind::BlockingCycle, self.seq.clone())));
            }
            return Ok(None);
        }
        if self.sellers.contains(&end) {
            return Ok(None);
        }
        if self.cache.single(origin, first)? && self.cache.single(end, last)? {
            return Ok(Some((BlockKind::BlockingPath, self.seq.clone())));
        }
        for &next in self.net.downstream_contracts(end) {
            if !self.free.contains(next) || !self.cache.pair(end, last, next)? {
                continue;
            }
            self.seq.push(next);
            self.sellers.insert(end);
            let found = self.extend()?;
            self.sellers.remove(&end);
            self.seq.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}
