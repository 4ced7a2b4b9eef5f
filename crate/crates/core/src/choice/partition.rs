//! Choice functions of the two firms in the Partition gadget.
//!
//! Firm `f` sells the single contract `y` to `g` and buys the weighted
//! contracts `x_1..x_k` from `g`. With `s` half the total weight, `f` always
//! keeps its upstream offers and keeps `y` only if the offered upstream
//! weight reaches `s`; `g` keeps nothing without `y`, and with `y` keeps the
//! longest index prefix of offered `x_i` whose weight stays within `s`.
//!
//! All comparisons against `s` are done on doubled sums so odd totals stay
//! exact.

use crate::model::{ContractId, Outcome};

/// One weighted contract `x_i` with weight `a_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightedContract {
    pub contract: ContractId,
    pub weight: u64,
}

fn check_weights(items: &[WeightedContract]) -> Result<u64, String> {
    if items.is_empty() {
        return Err("at least one weighted contract is required".into());
    }
    if items.iter().any(|w| w.weight == 0) {
        return Err("weights must be positive".into());
    }
    if items.windows(2).any(|w| w[0].weight > w[1].weight) {
        return Err("weights must be listed in non-decreasing order".into());
    }
    Ok(items.iter().map(|w| w.weight).sum())
}

/// `C_Π^f`: the buyer side of the gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionBuyerChoice {
    y: ContractId,
    items: Vec<WeightedContract>,
    total: u64,
}

impl PartitionBuyerChoice {
    pub fn new(y: ContractId, items: Vec<WeightedContract>) -> Result<Self, String> {
        let total = check_weights(&items)?;
        Ok(PartitionBuyerChoice { y, items, total })
    }

    pub fn y(&self) -> ContractId {
        self.y
    }

    pub fn items(&self) -> &[WeightedContract] {
        &self.items
    }

    /// Twice the threshold `s`, i.e. the weight total.
    pub fn doubled_threshold(&self) -> u64 {
        self.total
    }

    pub fn choose(&self, offered: &Outcome) -> Outcome {
        let mut chosen = Outcome::new();
        let mut weight = 0;
        for item in &self.items {
            if offered.contains(item.contract) {
                chosen.insert(item.contract);
                weight += item.weight;
            }
        }
        if offered.contains(self.y) && 2 * weight >= self.total {
            chosen.insert(self.y);
        }
        chosen
    }
}

/// `C_Π^g`: the seller side of the gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSellerChoice {
    y: ContractId,
    items: Vec<WeightedContract>,
    total: u64,
}

impl PartitionSellerChoice {
    pub fn new(y: ContractId, items: Vec<WeightedContract>) -> Result<Self, String> {
        let total = check_weights(&items)?;
        Ok(PartitionSellerChoice { y, items, total })
    }

    /// Unit weights: the counting choice function of the oracle family with
    /// `2n` downstream contracts.
    pub(crate) fn unit(y: ContractId, xs: &[ContractId]) -> Self {
        let items = xs
            .iter()
            .map(|&contract| WeightedContract { contract, weight: 1 })
            .collect();
        PartitionSellerChoice {
            y,
            items,
            total: xs.len() as u64,
        }
    }

    pub fn y(&self) -> ContractId {
        self.y
    }

    pub fn items(&self) -> &[WeightedContract] {
        &self.items
    }

    pub fn doubled_threshold(&self) -> u64 {
        self.total
    }

    pub fn choose(&self, offered: &Outcome) -> Outcome {
        let mut chosen = Outcome::new();
        if !offered.contains(self.y) {
            return chosen;
        }
        chosen.insert(self.y);
        // Prefix sums only grow, so the admissible prefix ends at the first
        // offered contract that pushes the sum past s.
        let mut prefix = 0;
        for item in &self.items {
            if !offered.contains(item.contract) {
                continue;
            }
            prefix += item.weight;
            if 2 * prefix > self.total {
                break;
            }
            chosen.insert(item.contract);
        }
        chosen
    }
}
