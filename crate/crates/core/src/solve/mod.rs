//! Deferred acceptance and exact searches for blocking structures.
//!
//! Every exponential search takes a [`Budget`] and reports exhaustion of it
//! as [`SolveError::BudgetExceeded`], so callers always see one of three
//! answers: a witness, a verified negative, or "unknown".

mod blocking_set;
mod deferred;
mod engine;
mod enumerate;
mod exists;
mod path_cycle;
mod trail;
mod weak_trail;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, SolveError};
use crate::model::{ContractId, FirmId, Outcome, SequenceKind, TradingNetwork};

pub use blocking_set::{all_blocking_sets_exhaustive, find_blocking_set, find_blocking_set_exhaustive, find_blocking_set_general, is_stable};
pub use deferred::{deferred_acceptance, DeferredAcceptance};
pub use enumerate::{enumerate_acceptable_outcomes, for_each_acceptable_outcome};
pub use exists::{check, exists_outcome, Concept, Verdict};
pub use path_cycle::{find_blocking_path_or_cycle, find_blocking_path_or_cycle_by_enumeration, is_path_or_cycle_stable};
pub use trail::{find_locally_blocking_trail, is_trail_stable};
pub use weak_trail::{find_sequentially_blocking_trail, is_weakly_trail_stable};

/// Environment variable holding the default budget in bits.
pub const BUDGET_ENV: &str = "TRADENET_BUDGET_BITS";

/// Cap on exponential searches, as a power of two of examined nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    bits: u32,
}

impl Budget {
    pub const DEFAULT_BITS: u32 = 26;

    pub fn bits(bits: u32) -> Self {
        Budget { bits: bits.min(62) }
    }

    /// The default budget, overridden by `TRADENET_BUDGET_BITS` if set.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget::bits)
            .unwrap_or_default()
    }

    pub fn as_bits(self) -> u32 {
        self.bits
    }

    /// Number of search nodes the budget allows.
    pub fn nodes(self) -> u64 {
        1u64 << self.bits
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::bits(Self::DEFAULT_BITS)
    }
}

/// Which cumulative sets a sequentially blocking trail satisfies at its
/// intermediate firms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cumulation {
    /// Each firm's share of the trail up to and including its outgoing contract.
    Prefix,
    /// Each firm's share of the trail from its incoming contract onwards.
    Suffix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    LocallyBlockingTrail,
    BlockingPath,
    BlockingCycle,
    BlockingSet,
    SequentiallyBlockingTrail(Cumulation),
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockKind::LocallyBlockingTrail => "locally blocking trail",
            BlockKind::BlockingPath => "blocking path",
            BlockKind::BlockingCycle => "blocking cycle",
            BlockKind::BlockingSet => "blocking set",
            BlockKind::SequentiallyBlockingTrail(Cumulation::Prefix) => "sequentially blocking trail (prefix)",
            BlockKind::SequentiallyBlockingTrail(Cumulation::Suffix) => "sequentially blocking trail (suffix)",
        })
    }
}

/// `contracts` is `(A, firm)`-acceptable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptabilityFact {
    pub firm: FirmId,
    pub contracts: Outcome,
}

/// A blocking structure against some outcome, with the acceptability facts
/// that make it block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockReport {
    pub kind: BlockKind,
    /// In trail order for trails, paths and cycles; sorted for sets.
    pub contracts: Vec<ContractId>,
    pub evidence: Vec<AcceptabilityFact>,
}

impl BlockReport {
    pub(crate) fn new(net: &TradingNetwork, kind: BlockKind, contracts: Vec<ContractId>) -> Self {
        let evidence = required_facts(net, kind, &contracts);
        BlockReport { kind, contracts, evidence }
    }

    pub fn as_outcome(&self) -> Outcome {
        self.contracts.iter().copied().collect()
    }

    /// Re-derives the facts this kind of block needs, checks they match the
    /// recorded evidence, and re-evaluates each against `against`.
    pub fn replay(&self, net: &TradingNetwork, against: &Outcome) -> Result<bool, ModelError> {
        if self.contracts.is_empty() || self.contracts.iter().any(|c| c.index() >= net.contract_count()) {
            return Ok(false);
        }
        let set = self.as_outcome();
        if set.len() != self.contracts.len() || !set.is_disjoint(against) {
            return Ok(false);
        }
        let shape = net.validate_sequence(&self.contracts);
        let shaped = match self.kind {
            BlockKind::LocallyBlockingTrail | BlockKind::SequentiallyBlockingTrail(_) => shape != SequenceKind::Invalid,
            BlockKind::BlockingPath => shape == SequenceKind::Path,
            BlockKind::BlockingCycle => shape == SequenceKind::Cycle,
            BlockKind::BlockingSet => true,
        };
        if !shaped || required_facts(net, self.kind, &self.contracts) != self.evidence {
            return Ok(false);
        }
        for fact in &self.evidence {
            if !net.is_w_acceptable(&fact.contracts, against, fact.firm)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The acceptability facts that define a block of `kind` on `contracts`.
fn required_facts(net: &TradingNetwork, kind: BlockKind, contracts: &[ContractId]) -> Vec<AcceptabilityFact> {
    let fact = |firm: FirmId, cs: &[ContractId]| AcceptabilityFact {
        firm,
        contracts: cs.iter().copied().collect(),
    };
    let seller = |c: ContractId| net.contract(c).seller;
    let buyer = |c: ContractId| net.contract(c).buyer;
    let share = |firm: FirmId, cs: &[ContractId]| -> Vec<ContractId> {
        cs.iter().copied().filter(|&c| net.contract(c).involves(firm)).collect()
    };
    match kind {
        BlockKind::BlockingPath | BlockKind::BlockingCycle | BlockKind::BlockingSet => {
            let set: Outcome = contracts.iter().copied().collect();
            net.firms_of(&set)
                .into_iter()
                .map(|f| AcceptabilityFact {
                    firm: f,
                    contracts: set.filter(|c| net.contract(c).involves(f)),
                })
                .collect()
        }
        BlockKind::LocallyBlockingTrail | BlockKind::SequentiallyBlockingTrail(_) => {
            let m = contracts.len();
            let mut facts = vec![fact(seller(contracts[0]), &contracts[..1])];
            for j in 1..m {
                let f = buyer(contracts[j - 1]);
                let window = match kind {
                    BlockKind::LocallyBlockingTrail => contracts[j - 1..=j].to_vec(),
                    BlockKind::SequentiallyBlockingTrail(Cumulation::Prefix) => share(f, &contracts[..=j]),
                    _ => share(f, &contracts[j - 1..]),
                };
                facts.push(fact(f, &window));
            }
            facts.push(fact(buyer(contracts[m - 1]), &contracts[m - 1..]));
            facts
        }
    }
}

/// Memoized `{contracts}` is `(A, f)`-acceptable checks against a fixed `A`.
pub(crate) struct AcceptCache<'a> {
    net: &'a TradingNetwork,
    against: &'a Outcome,
    memo: std::collections::HashMap<(FirmId, Vec<ContractId>), bool>,
}

impl<'a> AcceptCache<'a> {
    pub(crate) fn new(net: &'a TradingNetwork, against: &'a Outcome) -> Self {
        AcceptCache {
            net,
            against,
            memo: Default::default(),
        }
    }

    /// `contracts` must be sorted and involve `firm`.
    pub(crate) fn check(&mut self, firm: FirmId, contracts: &[ContractId]) -> Result<bool, SolveError> {
        if let Some(&hit) = self.memo.get(&(firm, contracts.to_vec())) {
            return Ok(hit);
        }
        let set: Outcome = contracts.iter().copied().collect();
        let ok = self.net.is_w_acceptable(&set, self.against, firm)?;
        self.memo.insert((firm, contracts.to_vec()), ok);
        Ok(ok)
    }

    pub(crate) fn single(&mut self, firm: FirmId, c: ContractId) -> Result<bool, SolveError> {
        self.check(firm, &[c])
    }

    pub(crate) fn pair(&mut self, firm: FirmId, a: ContractId, b: ContractId) -> Result<bool, SolveError> {
        self.check(firm, &[a.min(b), a.max(b)])
    }
}

/// Node counter shared by the hand-written searches.
pub(crate) struct Meter {
    examined: u64,
    limit: u64,
}

impl Meter {
    pub(crate) fn new(budget: Budget) -> Self {
        Meter {
            examined: 0,
            limit: budget.nodes(),
        }
    }

    pub(crate) fn tick(&mut self) -> Result<(), SolveError> {
        self.examined += 1;
        if self.examined > self.limit {
            return Err(SolveError::BudgetExceeded { examined: self.examined });
        }
        Ok(())
    }
}
