//! Exhaustive auditors for irrelevance of rejected contracts and full
//! substitutability.
//!
//! Both auditors tabulate the choice function over every subset of the
//! firm's contracts and then check the conditions on covering pairs (sets
//! differing in one contract). Set inclusion is transitive, so covering
//! pairs are enough for both conditions to hold on all nested pairs; each
//! reported violation is itself a concrete nested pair.

use thiserror::Error;

use super::ChoiceFunction;
use crate::model::{ContractId, FirmId, Outcome, TradingNetwork};

pub const DEFAULT_AUDIT_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("firm has {size} contracts, above the audit cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
}

/// The four inclusions of full substitutability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    /// `R_B(Y'|Z) ⊆ R_B(Y|Z)` for `Y' ⊆ Y`.
    SameSideBuyer,
    /// `R_S(Z'|Y) ⊆ R_S(Z|Y)` for `Z' ⊆ Z`.
    SameSideSeller,
    /// `R_B(Y|Z) ⊆ R_B(Y|Z')` for `Z' ⊆ Z`.
    CrossSideBuyer,
    /// `R_S(Z|Y) ⊆ R_S(Z|Y')` for `Y' ⊆ Y`.
    CrossSideSeller,
}

impl Clause {
    fn buyer_side(self) -> bool {
        matches!(self, Clause::SameSideBuyer | Clause::CrossSideBuyer)
    }
}

/// Upstream and downstream contracts offered to a firm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Offer {
    pub upstream: Outcome,
    pub downstream: Outcome,
}

impl Offer {
    fn all(&self) -> Outcome {
        self.upstream.union(&self.downstream)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The choice returned contracts that were not offered.
    NotSubset { offered: Outcome, chosen: Outcome },
    /// Dropping rejected contracts from `offered` changed the choice.
    Irc { offered: Outcome, reduced: Outcome },
    /// `contract` is rejected under `first` but accepted under `second`,
    /// although `clause` requires the rejection to persist.
    Substitutability {
        clause: Clause,
        first: Offer,
        second: Offer,
        contract: ContractId,
    },
}

impl Violation {
    /// Re-evaluates `choice` and reports whether the violation is real.
    pub fn replay(&self, choice: &ChoiceFunction) -> bool {
        match self {
            Violation::NotSubset { offered, .. } => !choice.choose(offered).is_subset(offered),
            Violation::Irc { offered, reduced } => {
                let full = choice.choose(offered);
                full.is_subset(reduced) && reduced.is_subset(offered) && choice.choose(reduced) != full
            }
            Violation::Substitutability {
                clause,
                first,
                second,
                contract,
            } => {
                let nested = match clause {
                    Clause::SameSideBuyer => first.upstream.is_subset(&second.upstream) && first.downstream == second.downstream,
                    Clause::SameSideSeller => first.downstream.is_subset(&second.downstream) && first.upstream == second.upstream,
                    Clause::CrossSideBuyer => second.downstream.is_subset(&first.downstream) && first.upstream == second.upstream,
                    Clause::CrossSideSeller => second.upstream.is_subset(&first.upstream) && first.downstream == second.downstream,
                };
                let rejected = |offer: &Offer| {
                    let chosen = choice.choose(&offer.all());
                    let side = if clause.buyer_side() { &offer.upstream } else { &offer.downstream };
                    side.contains(*contract) && !chosen.contains(*contract)
                };
                nested && rejected(first) && !rejected(second)
            }
        }
    }
}

/// Choices tabulated by bitmask over `contracts`.
struct Tabulated<'a> {
    contracts: &'a [ContractId],
    chosen: Vec<u64>,
}

impl<'a> Tabulated<'a> {
    fn new(choice: &ChoiceFunction, contracts: &'a [ContractId], cap: usize, violations: &mut Vec<Violation>) -> Result<Self, AuditError> {
        if contracts.len() > cap || contracts.len() > 30 {
            return Err(AuditError::CapExceeded {
                size: contracts.len(),
                cap,
            });
        }
        let mut chosen = Vec::with_capacity(1 << contracts.len());
        for mask in 0u64..1 << contracts.len() {
            let offered = to_outcome(contracts, mask);
            let picked = choice.choose(&offered);
            if !picked.is_subset(&offered) {
                violations.push(Violation::NotSubset {
                    offered,
                    chosen: picked.clone(),
                });
            }
            chosen.push(to_mask(contracts, &picked) & mask);
        }
        Ok(Tabulated { contracts, chosen })
    }

    fn outcome(&self, mask: u64) -> Outcome {
        to_outcome(self.contracts, mask)
    }
}

fn to_outcome(contracts: &[ContractId], mask: u64) -> Outcome {
    contracts
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &c)| c)
        .collect()
}

fn to_mask(contracts: &[ContractId], set: &Outcome) -> u64 {
    contracts
        .iter()
        .enumerate()
        .filter(|(_, &c)| set.contains(c))
        .fold(0, |m, (i, _)| m | 1 << i)
}

fn bits(mask: u64) -> impl Iterator<Item = u32> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// Checks IRC: `C(Y) ⊆ Z ⊆ Y` implies `C(Z) = C(Y)`.
pub fn audit_irc(choice: &ChoiceFunction, contracts: &[ContractId], cap: usize) -> Result<Vec<Violation>, AuditError> {
    let mut violations = Vec::new();
    let table = Tabulated::new(choice, contracts, cap, &mut violations)?;
    for offered in 0..table.chosen.len() as u64 {
        let chosen = table.chosen[offered as usize];
        for e in bits(offered & !chosen) {
            let reduced = offered & !(1 << e);
            if table.chosen[reduced as usize] != chosen {
                violations.push(Violation::Irc {
                    offered: table.outcome(offered),
                    reduced: table.outcome(reduced),
                });
            }
        }
    }
    Ok(violations)
}

/// Checks the same-side substitutability and cross-side complementarity
/// inclusions for a firm with the given upstream and downstream contracts.
pub fn audit_full_substitutability(
    choice: &ChoiceFunction,
    upstream: &[ContractId],
    downstream: &[ContractId],
    cap: usize,
) -> Result<Vec<Violation>, AuditError> {
    let contracts: Vec<ContractId> = upstream.iter().chain(downstream).copied().collect();
    let mut violations = Vec::new();
    let table = Tabulated::new(choice, &contracts, cap, &mut violations)?;
    let up_all = (1u64 << upstream.len()) - 1;
    let down_all = ((1u64 << contracts.len()) - 1) & !up_all;
    let rejected_b = |m: u64| m & up_all & !table.chosen[m as usize];
    let rejected_s = |m: u64| m & down_all & !table.chosen[m as usize];
    let offer = |m: u64| Offer {
        upstream: table.outcome(m & up_all),
        downstream: table.outcome(m & down_all),
    };
    let mut report = |clause, first: u64, second: u64, diff: u64| {
        if diff != 0 {
            violations.push(Violation::Substitutability {
                clause,
                first: offer(first),
                second: offer(second),
                contract: contracts[diff.trailing_zeros() as usize],
            });
        }
    };
    for m in 0..table.chosen.len() as u64 {
        for e in bits(m & up_all) {
            let smaller = m & !(1 << e);
            report(Clause::SameSideBuyer, smaller, m, rejected_b(smaller) & !rejected_b(m));
            report(Clause::CrossSideSeller, m, smaller, rejected_s(m) & !rejected_s(smaller));
        }
        for e in bits(m & down_all) {
            let smaller = m & !(1 << e);
            report(Clause::SameSideSeller, smaller, m, rejected_s(smaller) & !rejected_s(m));
            report(Clause::CrossSideBuyer, m, smaller, rejected_b(m) & !rejected_b(smaller));
        }
    }
    Ok(violations)
}

/// Runs both audits on one firm of a network.
pub fn audit_firm(net: &TradingNetwork, firm: FirmId, cap: usize) -> Result<Vec<Violation>, AuditError> {
    let choice = net.choice(firm);
    let up = net.upstream_contracts(firm);
    let down = net.downstream_contracts(firm);
    let all: Vec<_> = up.iter().chain(down).copied().collect();
    let mut violations = audit_irc(choice, &all, cap)?;
    violations.extend(
        audit_full_substitutability(choice, up, down, cap)?
            .into_iter()
            .filter(|v| !matches!(v, Violation::NotSubset { .. })),
    );
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::{FlowBasedChoice, PartitionBuyerChoice, PartitionSellerChoice, TableChoice, WeightedContract};

    fn c(i: u32) -> ContractId {
        ContractId(i)
    }

    /// Checks every nested pair directly, without the covering shortcut.
    fn naive_fs_ok(choice: &ChoiceFunction, up: &[ContractId], down: &[ContractId]) -> bool {
        let subsets = |s: &[ContractId]| crate::choice::subsets(s).collect::<Vec<_>>();
        let (ys, zs) = (subsets(up), subsets(down));
        let rb = |y: &Outcome, z: &Outcome| y.difference(&choice.choose(&y.union(z)));
        let rs = |z: &Outcome, y: &Outcome| z.difference(&choice.choose(&y.union(z)));
        for y in &ys {
            for y2 in ys.iter().filter(|y2| y2.is_subset(y)) {
                for z in &zs {
                    for z2 in zs.iter().filter(|z2| z2.is_subset(z)) {
                        let ok = rb(y2, z).is_subset(&rb(y, z))
                            && rs(z2, y).is_subset(&rs(z, y))
                            && rb(y, z).is_subset(&rb(y, z2))
                            && rs(z, y).is_subset(&rs(z, y2));
                        if !ok {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn flow_based_passes() {
        for (u, d) in [(1, 1), (2, 3), (3, 3), (4, 2)] {
            let up: Vec<_> = (0..u).map(c).collect();
            let down: Vec<_> = (u..u + d).map(c).collect();
            let choice = ChoiceFunction::FlowBased(FlowBasedChoice::new(up.iter().rev().copied().collect(), down.clone()));
            let all: Vec<_> = up.iter().chain(&down).copied().collect();
            assert!(audit_irc(&choice, &all, 12).unwrap().is_empty());
            assert!(audit_full_substitutability(&choice, &up, &down, 12).unwrap().is_empty());
            assert!(naive_fs_ok(&choice, &up, &down));
        }
    }

    #[test]
    fn partition_pair_passes() {
        let y = c(0);
        let items: Vec<_> = [1, 1, 2]
            .iter()
            .enumerate()
            .map(|(i, &weight)| WeightedContract {
                contract: c(i as u32 + 1),
                weight,
            })
            .collect();
        let xs: Vec<_> = items.iter().map(|w| w.contract).collect();
        let f = ChoiceFunction::PartitionBuyer(PartitionBuyerChoice::new(y, items.clone()).unwrap());
        let g = ChoiceFunction::PartitionSeller(PartitionSellerChoice::new(y, items).unwrap());
        let all: Vec<_> = std::iter::once(y).chain(xs.iter().copied()).collect();
        assert!(audit_irc(&f, &all, 12).unwrap().is_empty());
        assert!(audit_irc(&g, &all, 12).unwrap().is_empty());
        assert!(audit_full_substitutability(&f, &xs, &[y], 12).unwrap().is_empty());
        assert!(audit_full_substitutability(&g, &[y], &xs, 12).unwrap().is_empty());
    }

    #[test]
    fn irc_counterexample_is_reported() {
        // {a,b} -> {a}, {a} -> ∅: dropping the rejected b changes the choice.
        let (a, b) = (c(0), c(1));
        let table = TableChoice::from_fn(vec![a, b], |o| {
            if o.len() == 2 {
                Outcome::from([a])
            } else if o.contains(b) {
                o.clone()
            } else {
                Outcome::new()
            }
        })
        .unwrap();
        let choice = ChoiceFunction::Table(table);
        let violations = audit_irc(&choice, &[a, b], 12).unwrap();
        assert!(violations.contains(&Violation::Irc {
            offered: Outcome::from([a, b]),
            reduced: Outcome::from([a]),
        }));
        assert!(violations.iter().all(|v| v.replay(&choice)));
    }

    #[test]
    fn same_side_complements_are_reported() {
        // Two upstream contracts taken only together.
        let (a, b) = (c(0), c(1));
        let table = TableChoice::from_fn(vec![a, b], |o| if o.len() == 2 { o.clone() } else { Outcome::new() }).unwrap();
        let choice = ChoiceFunction::Table(table);
        let violations = audit_full_substitutability(&choice, &[a, b], &[], 12).unwrap();
        assert!(!violations.is_empty());
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::Substitutability { clause: Clause::SameSideBuyer, .. })));
        assert!(violations.iter().all(|v| v.replay(&choice)));
    }

    #[test]
    fn cap_is_enforced() {
        let contracts: Vec<_> = (0..5).map(c).collect();
        let choice = ChoiceFunction::FlowBased(FlowBasedChoice::terminal());
        assert_eq!(
            audit_irc(&choice, &contracts, 4),
            Err(AuditError::CapExceeded { size: 5, cap: 4 })
        );
    }
}
