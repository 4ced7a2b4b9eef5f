//! Concrete choice-function families and their auditors.

pub mod audit;
mod flow;
mod oracle;
mod partition;
mod table;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use flow::FlowBasedChoice;
pub use oracle::{OracleFamilyChoice, OracleSide};
pub use partition::{PartitionBuyerChoice, PartitionSellerChoice, WeightedContract};
pub use table::TableChoice;
pub(crate) use table::subsets;

use crate::model::{ContractId, Outcome};

/// A firm's choice function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChoiceFunction {
    FlowBased(FlowBasedChoice),
    PartitionBuyer(PartitionBuyerChoice),
    PartitionSeller(PartitionSellerChoice),
    Oracle(OracleFamilyChoice),
    Table(TableChoice),
}

impl ChoiceFunction {
    /// Evaluates the choice on `offered`, which callers keep inside the
    /// firm's own contracts.
    pub fn choose(&self, offered: &Outcome) -> Outcome {
        match self {
            ChoiceFunction::FlowBased(c) => c.choose(offered),
            ChoiceFunction::PartitionBuyer(c) => c.choose(offered),
            ChoiceFunction::PartitionSeller(c) => c.choose(offered),
            ChoiceFunction::Oracle(c) => c.choose(offered),
            ChoiceFunction::Table(c) => c.choose(offered),
        }
    }

    pub fn as_flow_based(&self) -> Option<&FlowBasedChoice> {
        match self {
            ChoiceFunction::FlowBased(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_oracle(&self) -> Option<&OracleFamilyChoice> {
        match self {
            ChoiceFunction::Oracle(c) => Some(c),
            _ => None,
        }
    }

    /// True for choice functions that keep every offer.
    pub fn accepts_everything(&self) -> bool {
        matches!(self, ChoiceFunction::FlowBased(c) if c.is_terminal())
    }

    /// Builds the choice function described by `spec` for the firm in `ctx`.
    pub(crate) fn resolve(spec: &ChoiceSpec, ctx: &FirmContext<'_>) -> Result<Self, String> {
        match spec {
            ChoiceSpec::Terminal => Ok(ChoiceFunction::FlowBased(FlowBasedChoice::terminal())),
            ChoiceSpec::FlowBased { buyer_pref, seller_pref } => {
                let up = ctx.resolve_all(buyer_pref)?;
                let down = ctx.resolve_all(seller_pref)?;
                ctx.check_permutation(&up, ctx.upstream, "buyer_pref", "upstream")?;
                ctx.check_permutation(&down, ctx.downstream, "seller_pref", "downstream")?;
                Ok(ChoiceFunction::FlowBased(FlowBasedChoice::new(up, down)))
            }
            ChoiceSpec::PartitionF { y, weights } => {
                let y = ctx.resolve(y)?;
                let items = ctx.resolve_weights(weights)?;
                let xs: Vec<_> = items.iter().map(|w| w.contract).collect();
                ctx.check_permutation(&xs, ctx.upstream, "weights", "upstream")?;
                ctx.check_permutation(&[y], ctx.downstream, "y", "downstream")?;
                Ok(ChoiceFunction::PartitionBuyer(PartitionBuyerChoice::new(y, items)?))
            }
            ChoiceSpec::PartitionG { y, weights } => {
                let y = ctx.resolve(y)?;
                let items = ctx.resolve_weights(weights)?;
                let xs: Vec<_> = items.iter().map(|w| w.contract).collect();
                ctx.check_permutation(&xs, ctx.downstream, "weights", "downstream")?;
                ctx.check_permutation(&[y], ctx.upstream, "y", "upstream")?;
                Ok(ChoiceFunction::PartitionSeller(PartitionSellerChoice::new(y, items)?))
            }
            ChoiceSpec::OracleFamily { role, n, y, x, hidden_set } => {
                let y = ctx.resolve(y)?;
                let xs = ctx.resolve_all(x)?;
                let side = match role {
                    OracleRole::F => {
                        ctx.check_permutation(&xs, ctx.upstream, "x", "upstream")?;
                        ctx.check_permutation(&[y], ctx.downstream, "y", "downstream")?;
                        OracleSide::F {
                            hidden_set: hidden_set.as_ref().map(|h| h.iter().copied().collect()),
                        }
                    }
                    OracleRole::G => {
                        if hidden_set.is_some() {
                            return Err("hidden_set is only meaningful for role f".into());
                        }
                        ctx.check_permutation(&xs, ctx.downstream, "x", "downstream")?;
                        ctx.check_permutation(&[y], ctx.upstream, "y", "upstream")?;
                        OracleSide::G
                    }
                };
                Ok(ChoiceFunction::Oracle(OracleFamilyChoice::new(*n, y, xs, side)?))
            }
            ChoiceSpec::Table { entries } => {
                let mut resolved = Vec::with_capacity(entries.len());
                for entry in entries {
                    let offered: Outcome = ctx.resolve_all(&entry.offered)?.into_iter().collect();
                    let chosen: Outcome = ctx.resolve_all(&entry.chosen)?.into_iter().collect();
                    resolved.push((offered, chosen));
                }
                let domain: Vec<_> = ctx.upstream.iter().chain(ctx.downstream).copied().collect();
                Ok(ChoiceFunction::Table(TableChoice::new(domain, resolved)?))
            }
        }
    }

    /// The serializable description of this choice function.
    pub(crate) fn to_spec(&self, name: &dyn Fn(ContractId) -> String) -> ChoiceSpec {
        let names = |ids: &[ContractId]| ids.iter().map(|&c| name(c)).collect::<Vec<_>>();
        let weights = |items: &[WeightedContract]| {
            items
                .iter()
                .map(|w| WeightSpec {
                    contract: name(w.contract),
                    weight: w.weight,
                })
                .collect::<Vec<_>>()
        };
        match self {
            ChoiceFunction::FlowBased(c) if c.is_terminal() => ChoiceSpec::Terminal,
            ChoiceFunction::FlowBased(c) => ChoiceSpec::FlowBased {
                buyer_pref: names(c.buyer_pref()),
                seller_pref: names(c.seller_pref()),
            },
            ChoiceFunction::PartitionBuyer(c) => ChoiceSpec::PartitionF {
                y: name(c.y()),
                weights: weights(c.items()),
            },
            ChoiceFunction::PartitionSeller(c) => ChoiceSpec::PartitionG {
                y: name(c.y()),
                weights: weights(c.items()),
            },
            ChoiceFunction::Oracle(c) => {
                let (role, hidden_set) = match c.side() {
                    OracleSide::F { hidden_set } => (OracleRole::F, hidden_set.as_ref().map(|h| h.iter().copied().collect())),
                    OracleSide::G => (OracleRole::G, None),
                };
                ChoiceSpec::OracleFamily {
                    role,
                    n: c.n(),
                    y: name(c.y()),
                    x: names(c.x()),
                    hidden_set,
                }
            }
            ChoiceFunction::Table(c) => ChoiceSpec::Table {
                entries: c
                    .entries()
                    .into_iter()
                    .map(|(offered, chosen)| TableEntrySpec {
                        offered: offered.iter().map(&name).collect(),
                        chosen: chosen.iter().map(&name).collect(),
                    })
                    .collect(),
            },
        }
    }
}

/// What a choice function needs to know about its firm while being resolved.
pub(crate) struct FirmContext<'a> {
    pub upstream: &'a [ContractId],
    pub downstream: &'a [ContractId],
    pub lookup: &'a dyn Fn(&str) -> Option<ContractId>,
}

impl FirmContext<'_> {
    fn resolve(&self, name: &str) -> Result<ContractId, String> {
        (self.lookup)(name).ok_or_else(|| format!("unknown contract `{name}`"))
    }

    fn resolve_all(&self, names: &[String]) -> Result<Vec<ContractId>, String> {
        names.iter().map(|n| self.resolve(n)).collect()
    }

    fn resolve_weights(&self, weights: &[WeightSpec]) -> Result<Vec<WeightedContract>, String> {
        weights
            .iter()
            .map(|w| {
                Ok(WeightedContract {
                    contract: self.resolve(&w.contract)?,
                    weight: w.weight,
                })
            })
            .collect()
    }

    fn check_permutation(&self, listed: &[ContractId], actual: &[ContractId], field: &str, side: &str) -> Result<(), String> {
        let listed_set: BTreeSet<_> = listed.iter().collect();
        let actual_set: BTreeSet<_> = actual.iter().collect();
        if listed_set.len() != listed.len() {
            return Err(format!("`{field}` lists a contract twice"));
        }
        if listed_set != actual_set {
            return Err(format!("`{field}` must list exactly the firm's {side} contracts"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleRole {
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub contract: String,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntrySpec {
    pub offered: Vec<String>,
    pub chosen: Vec<String>,
}

/// Serializable choice-function description, referencing contracts by
/// their string ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChoiceSpec {
    Terminal,
    FlowBased {
        buyer_pref: Vec<String>,
        seller_pref: Vec<String>,
    },
    PartitionF {
        y: String,
        weights: Vec<WeightSpec>,
    },
    PartitionG {
        y: String,
        weights: Vec<WeightSpec>,
    },
    OracleFamily {
        role: OracleRole,
        n: usize,
        y: String,
        x: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hidden_set: Option<Vec<usize>>,
    },
    Table {
        entries: Vec<TableEntrySpec>,
    },
}

impl ChoiceSpec {
    pub fn flow_based<S: Into<String>>(
        buyer_pref: impl IntoIterator<Item = S>,
        seller_pref: impl IntoIterator<Item = S>,
    ) -> Self {
        ChoiceSpec::FlowBased {
            buyer_pref: buyer_pref.into_iter().map(Into::into).collect(),
            seller_pref: seller_pref.into_iter().map(Into::into).collect(),
        }
    }
}
