use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::model::{FirmId, Outcome, TradingNetwork};

use super::{
    deferred_acceptance, find_blocking_path_or_cycle, find_blocking_set, find_locally_blocking_trail, find_sequentially_blocking_trail,
    for_each_acceptable_outcome, BlockReport, Budget,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Concept {
    Trail,
    WeakTrail,
    /// Path-or-cycle stability.
    #[serde(rename = "pc")]
    PathOrCycle,
    Stable,
}

impl Concept {
    pub const ALL: [Concept; 4] = [Concept::Trail, Concept::WeakTrail, Concept::PathOrCycle, Concept::Stable];

    pub fn as_str(self) -> &'static str {
        match self {
            Concept::Trail => "trail",
            Concept::WeakTrail => "weak-trail",
            Concept::PathOrCycle => "pc",
            Concept::Stable => "stable",
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Concept {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Concept::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown concept `{s}` (expected trail, weak-trail, pc or stable)"))
    }
}

/// Outcome of checking one concept on one outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// Firms that would drop some of their contracts.
    NotAcceptable { firms: Vec<FirmId> },
    Blocked(BlockReport),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Checks whether `a` satisfies `concept`, with a witness when it does not.
pub fn check(net: &TradingNetwork, a: &Outcome, concept: Concept, budget: Budget) -> Result<Verdict, SolveError> {
    let mut firms = Vec::new();
    for f in net.firms_of(a) {
        if !net.is_individually_rational(a, f)? {
            firms.push(f);
        }
    }
    if !firms.is_empty() {
        return Ok(Verdict::NotAcceptable { firms });
    }
    let block = match concept {
        Concept::Trail => find_locally_blocking_trail(net, a)?,
        Concept::WeakTrail => find_sequentially_blocking_trail(net, a, budget)?,
        Concept::PathOrCycle => find_blocking_path_or_cycle(net, a, budget)?,
        Concept::Stable => find_blocking_set(net, a, budget)?,
    };
    Ok(block.map_or(Verdict::Holds, Verdict::Blocked))
}

/// An outcome satisfying `concept`, or `None` after exhausting every
/// acceptable outcome. Trail stability needs no search: deferred acceptance
/// always produces one.
pub fn exists_outcome(net: &TradingNetwork, concept: Concept, budget: Budget) -> Result<Option<Outcome>, SolveError> {
    if concept == Concept::Trail {
        return Ok(Some(deferred_acceptance(net)?.outcome));
    }
    let mut witness = None;
    for_each_acceptable_outcome(net, budget, &mut |a| {
        if check(net, a, concept, budget)?.holds() {
            witness = Some(a.clone());
            return Ok(ControlFlow::Break(()));
        }
        Ok(ControlFlow::Continue(()))
    })?;
    Ok(witness)
}
