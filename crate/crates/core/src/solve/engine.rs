//! Exact backtracking over contract subsets under per-firm constraints.
//!
//! Both acceptability of an outcome and blocking by a set decompose into
//! one condition per firm on that firm's share of the set. The search
//! decides contracts in canonical order, include before exclude, and after
//! each decision asks each endpoint firm whether its partial share can
//! still be completed into an allowed one. The check is exact: a branch is
//! cut only when no completion of that firm's share is allowed, so no
//! monotonicity of the condition is assumed.
//!
//! Include-first order visits the solutions of a fixed cardinality in
//! lexicographic order of their sorted ids.

use std::collections::HashMap;
use std::ops::ControlFlow;

use super::Budget;
use crate::error::SolveError;
use crate::model::{ContractId, FirmId, Outcome, TradingNetwork};

/// Firms with at most this many candidate contracts get a precomputed
/// completion table; larger firms are checked once their share is decided.
const TABLE_LIMIT: usize = 14;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Condition<'a> {
    /// `C^f(S_f) = S_f`.
    IndividuallyRational,
    /// `S_f ⊆ C^f(A_f ∪ S_f)`.
    AcceptableAlongside(&'a Outcome),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Target {
    Any,
    NonEmpty,
    Exactly(usize),
}

enum Rule {
    Free,
    /// Flow-based non-terminal under individual rationality: equally many
    /// upstream and downstream contracts.
    Balance {
        up_mask: u64,
        ups_after: Vec<u32>,
        downs_after: Vec<u32>,
    },
    /// `feasible[j][bits]`: the first `j` local contracts decided as `bits`
    /// can still be completed.
    Table { feasible: Vec<Vec<bool>> },
    Lazy { cache: HashMap<u64, bool> },
}

struct Slot {
    firm: FirmId,
    local: Vec<ContractId>,
    rule: Rule,
    decided: usize,
    bits: u64,
}

pub(crate) struct LocalSearch<'a> {
    net: &'a TradingNetwork,
    condition: Condition<'a>,
    vars: Vec<ContractId>,
    ends: Vec<[(usize, usize); 2]>,
    slots: Vec<Slot>,
    included: Vec<bool>,
    count: usize,
    nodes: u64,
    limit: u64,
}

impl<'a> LocalSearch<'a> {
    pub(crate) fn new(net: &'a TradingNetwork, condition: Condition<'a>, candidates: &Outcome, budget: Budget) -> Result<Self, SolveError> {
        let vars = candidates.to_vec();
        let mut slot_of: HashMap<FirmId, usize> = HashMap::new();
        let mut slots: Vec<Slot> = Vec::new();
        let mut ends = Vec::with_capacity(vars.len());
        for &c in &vars {
            let contract = net.contract(c);
            let mut pair = [(0, 0); 2];
            for (k, firm) in [contract.seller, contract.buyer].into_iter().enumerate() {
                let slot = *slot_of.entry(firm).or_insert_with(|| {
                    slots.push(Slot {
                        firm,
                        local: Vec::new(),
                        rule: Rule::Free,
                        decided: 0,
                        bits: 0,
                    });
                    slots.len() - 1
                });
                pair[k] = (slot, slots[slot].local.len());
                slots[slot].local.push(c);
            }
            ends.push(pair);
        }
        let mut search = LocalSearch {
            net,
            condition,
            included: vec![false; vars.len()],
            vars,
            ends,
            slots: Vec::new(),
            count: 0,
            nodes: 0,
            limit: budget.nodes(),
        };
        for mut slot in slots {
            if slot.local.len() > 64 {
                return Err(SolveError::BudgetExceeded { examined: 0 });
            }
            slot.rule = search.rule_for(&slot)?;
            search.slots.push(slot);
        }
        Ok(search)
    }

    fn rule_for(&mut self, slot: &Slot) -> Result<Rule, SolveError> {
        let choice = self.net.choice(slot.firm);
        if choice.accepts_everything() {
            return Ok(Rule::Free);
        }
        let d = slot.local.len();
        if let (Condition::IndividuallyRational, Some(fc)) = (self.condition, choice.as_flow_based()) {
            if !fc.is_terminal() {
                let up_mask = slot
                    .local
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| self.net.contract(c).buyer == slot.firm)
                    .fold(0u64, |m, (i, _)| m | 1 << i);
                let mut ups_after = vec![0; d + 1];
                let mut downs_after = vec![0; d + 1];
                for j in (0..d).rev() {
                    let up = up_mask >> j & 1 == 1;
                    ups_after[j] = ups_after[j + 1] + up as u32;
                    downs_after[j] = downs_after[j + 1] + !up as u32;
                }
                return Ok(Rule::Balance {
                    up_mask,
                    ups_after,
                    downs_after,
                });
            }
        }
        if d > TABLE_LIMIT {
            return Ok(Rule::Lazy { cache: HashMap::new() });
        }
        let mut level: Vec<bool> = Vec::with_capacity(1 << d);
        for bits in 0u64..1 << d {
            level.push(self.allowed(slot.firm, &slot.local, bits)?);
        }
        let mut feasible = vec![Vec::new(); d + 1];
        feasible[d] = level;
        for j in (0..d).rev() {
            feasible[j] = (0..1usize << j)
                .map(|bits| feasible[j + 1][bits] || feasible[j + 1][bits | 1 << j])
                .collect();
        }
        Ok(Rule::Table { feasible })
    }

    fn allowed(&self, firm: FirmId, local: &[ContractId], bits: u64) -> Result<bool, SolveError> {
        let share: Outcome = local
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, &c)| c)
            .collect();
        Ok(match self.condition {
            Condition::IndividuallyRational => self.net.is_individually_rational(&share, firm)?,
            Condition::AcceptableAlongside(against) => self.net.is_w_acceptable(&share, against, firm)?,
        })
    }

    fn feasible(&mut self, slot: usize) -> Result<bool, SolveError> {
        let s = &self.slots[slot];
        let (j, bits) = (s.decided, s.bits);
        match &s.rule {
            Rule::Free => Ok(true),
            Rule::Balance {
                up_mask,
                ups_after,
                downs_after,
            } => {
                let ups = (bits & up_mask).count_ones() as i64;
                let downs = (bits & !up_mask).count_ones() as i64;
                let gap = ups - downs;
                Ok(if gap >= 0 {
                    downs_after[j] as i64 >= gap
                } else {
                    ups_after[j] as i64 >= -gap
                })
            }
            Rule::Table { feasible } => Ok(feasible[j][bits as usize]),
            Rule::Lazy { cache } => {
                if j < s.local.len() {
                    return Ok(true);
                }
                if let Some(&hit) = cache.get(&bits) {
                    return Ok(hit);
                }
                let ok = self.allowed(s.firm, &s.local, bits)?;
                if let Rule::Lazy { cache } = &mut self.slots[slot].rule {
                    cache.insert(bits, ok);
                }
                Ok(ok)
            }
        }
    }

    fn set(&mut self, i: usize, include: bool) {
        for (slot, idx) in self.ends[i] {
            let s = &mut self.slots[slot];
            debug_assert_eq!(s.decided, idx);
            s.decided += 1;
            if include {
                s.bits |= 1 << idx;
            }
        }
        self.included[i] = include;
        self.count += include as usize;
    }

    fn unset(&mut self, i: usize) {
        for (slot, idx) in self.ends[i] {
            let s = &mut self.slots[slot];
            s.decided -= 1;
            s.bits &= !(1 << idx);
        }
        self.count -= self.included[i] as usize;
        self.included[i] = false;
    }

    /// Visits every allowed subset matching `target`, in search order,
    /// until `visit` breaks.
    pub(crate) fn run<F>(&mut self, target: Target, visit: &mut F) -> Result<ControlFlow<()>, SolveError>
    where
        F: FnMut(Outcome) -> Result<ControlFlow<()>, SolveError>,
    {
        self.dfs(0, target, visit)
    }

    fn dfs<F>(&mut self, i: usize, target: Target, visit: &mut F) -> Result<ControlFlow<()>, SolveError>
    where
        F: FnMut(Outcome) -> Result<ControlFlow<()>, SolveError>,
    {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(SolveError::BudgetExceeded { examined: self.nodes });
        }
        let n = self.vars.len();
        if i == n {
            let wanted = match target {
                Target::Any => true,
                Target::NonEmpty => self.count > 0,
                Target::Exactly(k) => self.count == k,
            };
            if !wanted {
                return Ok(ControlFlow::Continue(()));
            }
            let found = self
                .vars
                .iter()
                .zip(&self.included)
                .filter(|(_, &inc)| inc)
                .map(|(&c, _)| c)
                .collect();
            return visit(found);
        }
        for include in [true, false] {
            if let Target::Exactly(k) = target {
                if include && self.count == k {
                    continue;
                }
                if !include && self.count + (n - i - 1) < k {
                    continue;
                }
            }
            self.set(i, include);
            let [(a, _), (b, _)] = self.ends[i];
            let result = if self.feasible(a)? && self.feasible(b)? {
                self.dfs(i + 1, target, visit)
            } else {
                Ok(ControlFlow::Continue(()))
            };
            self.unset(i);
            if !matches!(result?, ControlFlow::Continue(())) {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}
