use std::collections::HashSet;

use super::{ContractId, TradingNetwork};

/// Shape of an ordered contract list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    /// Distinct contracts, each buyer selling the next contract.
    Trail,
    /// A trail through distinct firms.
    Path,
    /// A trail through distinct sellers whose last buyer is the first seller.
    Cycle,
    Invalid,
}

/// An ordered list of contracts together with its validated shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContractSequence {
    contracts: Vec<ContractId>,
    kind: SequenceKind,
}

impl ContractSequence {
    /// Validates `contracts` against `net`; `None` if it is not even a trail.
    pub fn new(net: &TradingNetwork, contracts: Vec<ContractId>) -> Option<Self> {
        match net.validate_sequence(&contracts) {
            SequenceKind::Invalid => None,
            kind => Some(ContractSequence { contracts, kind }),
        }
    }

    pub fn contracts(&self) -> &[ContractId] {
        &self.contracts
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.contracts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contracts.is_empty()
    }
}

impl TradingNetwork {
    /// Classifies `seq` as the strictest of cycle, path or trail it satisfies.
    pub fn validate_sequence(&self, seq: &[ContractId]) -> SequenceKind {
        if seq.is_empty() || seq.iter().any(|c| c.index() >= self.contract_count()) {
            return SequenceKind::Invalid;
        }
        let mut seen = HashSet::with_capacity(seq.len());
        if !seq.iter().all(|c| seen.insert(*c)) {
            return SequenceKind::Invalid;
        }
        let linked = seq
            .windows(2)
            .all(|w| self.contract(w[0]).buyer == self.contract(w[1]).seller);
        if !linked {
            return SequenceKind::Invalid;
        }
        let mut sellers = HashSet::with_capacity(seq.len() + 1);
        let distinct_sellers = seq.iter().all(|&c| sellers.insert(self.contract(c).seller));
        let last_buyer = self.contract(seq[seq.len() - 1]).buyer;
        if distinct_sellers {
            if last_buyer == self.contract(seq[0]).seller {
                return SequenceKind::Cycle;
            }
            if !sellers.contains(&last_buyer) {
                return SequenceKind::Path;
            }
        }
        SequenceKind::Trail
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::ChoiceSpec;
    use crate::model::NetworkBuilder;

    fn net() -> TradingNetwork {
        let mut b = NetworkBuilder::new();
        for f in ["a", "b", "c", "d"] {
            b.firm(f, ChoiceSpec::Terminal);
        }
        b.contract("ab", "a", "b")
            .contract("ba", "b", "a")
            .contract("bc", "b", "c")
            .contract("cb", "c", "b")
            .contract("bd", "b", "d")
            .contract("ca", "c", "a");
        b.build().unwrap()
    }

    fn kind(net: &TradingNetwork, names: &[&str]) -> SequenceKind {
        let ids: Vec<_> = names.iter().map(|n| net.contract_id(n).unwrap()).collect();
        net.validate_sequence(&ids)
    }

    #[test]
    fn classifies_examples() {
        let net = net();
        assert_eq!(kind(&net, &["ab"]), SequenceKind::Path);
        assert_eq!(kind(&net, &["ab", "ba"]), SequenceKind::Cycle);
        assert_eq!(kind(&net, &["ab", "bc", "cb", "bd"]), SequenceKind::Trail);
        assert_eq!(kind(&net, &["ab", "bc", "ca"]), SequenceKind::Cycle);
        assert_eq!(kind(&net, &["ab", "bc"]), SequenceKind::Path);
    }

    #[test]
    fn rejects_broken_sequences() {
        let net = net();
        assert_eq!(kind(&net, &["ab", "ab"]), SequenceKind::Invalid);
        assert_eq!(kind(&net, &["ab", "ca"]), SequenceKind::Invalid);
        assert_eq!(kind(&net, &[]), SequenceKind::Invalid);
    }

    #[test]
    fn rotated_cycle_is_a_cycle() {
        let net = net();
        assert_eq!(kind(&net, &["bc", "ca", "ab"]), SequenceKind::Cycle);
        assert_eq!(kind(&net, &["ca", "ab", "bc"]), SequenceKind::Cycle);
    }
}
