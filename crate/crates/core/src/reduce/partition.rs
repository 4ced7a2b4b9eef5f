//! Partition as instability of the empty outcome in a two-firm network.
//!
//! Firm `f` buys `x_1..x_k` from `g` and sells `y` to `g`. `f` keeps `y`
//! only when the offered `x` weight reaches half the total; `g` keeps the
//! longest prefix of offered `x`s whose weight stays within half the total.
//! A blocking set for `∅` is then exactly `X_I ∪ {y}` with `I` a perfect
//! half.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::choice::{ChoiceSpec, WeightSpec};
use crate::error::ReduceError;
use crate::model::{ContractId, NetworkBuilder, Outcome, TradingNetwork};

/// Largest instance the subset-sum oracle accepts.
pub const PARTITION_CAP: usize = 40;

/// Positive integer weights, kept in non-decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PartitionInstance {
    weights: Vec<u64>,
}

impl PartitionInstance {
    /// Sorts the weights; rejects an empty list and zero weights.
    pub fn new(mut weights: Vec<u64>) -> Result<Self, ReduceError> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(ReduceError::InvalidWeights);
        }
        weights.sort_unstable();
        Ok(PartitionInstance { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.weights.iter().sum()
    }
}

impl TryFrom<Vec<u64>> for PartitionInstance {
    type Error = ReduceError;

    fn try_from(weights: Vec<u64>) -> Result<Self, Self::Error> {
        PartitionInstance::new(weights)
    }
}

impl From<PartitionInstance> for Vec<u64> {
    fn from(p: PartitionInstance) -> Self {
        p.weights
    }
}

/// The generated network and its distinguished contracts.
#[derive(Clone, Debug)]
pub struct PartitionReduction {
    pub network: TradingNetwork,
    pub y: ContractId,
    /// `x_1..x_k` in weight order.
    pub xs: Vec<ContractId>,
    /// The outcome whose stability encodes the instance: always `∅`.
    pub challenged: Outcome,
}

impl PartitionReduction {
    /// `X_I ∪ {y}` for 1-based indices `I`.
    pub fn subset_to_blocking_set(&self, indices: &BTreeSet<usize>) -> Result<Outcome, ReduceError> {
        let mut z = Outcome::new();
        z.insert(self.y);
        for &i in indices {
            let c = i.checked_sub(1).and_then(|j| self.xs.get(j)).ok_or(ReduceError::NotAWitness)?;
            z.insert(*c);
        }
        Ok(z)
    }

    /// The 1-based indices `I` of a set `X_I ∪ {y}`.
    pub fn blocking_set_to_subset(&self, z: &Outcome) -> Result<BTreeSet<usize>, ReduceError> {
        if !z.contains(self.y) {
            return Err(ReduceError::NotAWitness);
        }
        let indices: BTreeSet<usize> = self
            .xs
            .iter()
            .enumerate()
            .filter(|(_, &c)| z.contains(c))
            .map(|(i, _)| i + 1)
            .collect();
        if indices.len() + 1 != z.len() {
            return Err(ReduceError::NotAWitness);
        }
        Ok(indices)
    }
}

/// Names `x01, x02, …`, zero-padded so name order is index order.
pub(crate) fn x_names(k: usize) -> Vec<String> {
    let width = k.to_string().len().max(2);
    (1..=k).map(|i| format!("x{i:0width$}")).collect()
}

/// Builds firms `f` and `g` with contracts `y` (`f → g`) and `x_i`
/// (`g → f`) carrying the instance's weights.
pub fn reduce_partition_to_instability(instance: &PartitionInstance) -> Result<PartitionReduction, ReduceError> {
    let names = x_names(instance.len());
    let weights: Vec<WeightSpec> = names
        .iter()
        .zip(instance.weights())
        .map(|(name, &weight)| WeightSpec {
            contract: name.clone(),
            weight,
        })
        .collect();
    let mut builder = NetworkBuilder::new();
    builder
        .firm(
            "f",
            ChoiceSpec::PartitionF {
                y: "y".into(),
                weights: weights.clone(),
            },
        )
        .firm("g", ChoiceSpec::PartitionG { y: "y".into(), weights })
        .contract("y", "f", "g");
    for name in &names {
        builder.contract(name, "g", "f");
    }
    let network = builder.build()?;
    let y = network.contract_id("y")?;
    let xs = names.iter().map(|n| network.contract_id(n)).collect::<Result<_, _>>()?;
    Ok(PartitionReduction {
        network,
        y,
        xs,
        challenged: Outcome::new(),
    })
}

/// Exact subset sum: the lexicographically smallest set of 1-based indices
/// whose weights sum to half the total, if any.
pub fn solve_partition(instance: &PartitionInstance) -> Result<Option<BTreeSet<usize>>, ReduceError> {
    let k = instance.len();
    if k > PARTITION_CAP {
        return Err(ReduceError::CapExceeded { size: k, cap: PARTITION_CAP });
    }
    let total = instance.total();
    if total % 2 == 1 {
        return Ok(None);
    }
    let w = instance.weights();
    let mut suffix = vec![0u64; k + 1];
    for i in (0..k).rev() {
        suffix[i] = suffix[i + 1] + w[i];
    }
    // Include-first depth-first search yields the lexicographically smallest
    // index set; the remaining-weight bound keeps it exact.
    fn dfs(i: usize, need: u64, w: &[u64], suffix: &[u64], picked: &mut Vec<usize>) -> bool {
        if need == 0 {
            return true;
        }
        if i == w.len() || suffix[i] < need {
            return false;
        }
        if w[i] <= need {
            picked.push(i + 1);
            if dfs(i + 1, need - w[i], w, suffix, picked) {
                return true;
            }
            picked.pop();
        }
        dfs(i + 1, need, w, suffix, picked)
    }
    let mut picked = Vec::new();
    Ok(dfs(0, total / 2, w, &suffix, &mut picked).then(|| picked.into_iter().collect()))
}
