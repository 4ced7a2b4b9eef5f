use std::collections::btree_set;
use std::collections::BTreeSet;
use std::fmt;

/// Index of a firm inside one [`TradingNetwork`](super::TradingNetwork).
///
/// Ids are assigned in ascending order of the firm's string id, so the
/// numeric order is the canonical iteration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FirmId(pub(crate) u32);

/// Index of a contract inside one [`TradingNetwork`](super::TradingNetwork).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContractId(pub(crate) u32);

impl FirmId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Self {
        FirmId(index as u32)
    }
}

impl ContractId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Self {
        ContractId(index as u32)
    }
}

impl fmt::Display for FirmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f#{}", self.0)
    }
}

impl fmt::Display for ContractId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x#{}", self.0)
    }
}

/// A directed bilateral contract: `seller` sells to `buyer`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Contract {
    pub id: ContractId,
    pub seller: FirmId,
    pub buyer: FirmId,
}

impl Contract {
    pub fn involves(&self, firm: FirmId) -> bool {
        self.seller == firm || self.buyer == firm
    }
}

/// A set of contracts, iterated in canonical id order.
///
/// Used both for outcomes under evaluation and for the offered/chosen sets
/// passed to choice functions. The derived `Ord` is lexicographic over the
/// sorted ids, which is what the searches use to pick canonical witnesses.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome(BTreeSet<ContractId>);

impl Outcome {
    pub fn new() -> Self {
        Outcome(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: ContractId) -> bool {
        self.0.contains(&id)
    }

    pub fn insert(&mut self, id: ContractId) -> bool {
        self.0.insert(id)
    }

    pub fn remove(&mut self, id: ContractId) -> bool {
        self.0.remove(&id)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = ContractId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &Outcome) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Outcome) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &Outcome) -> Outcome {
        self.0.union(&other.0).copied().collect()
    }

    pub fn intersection(&self, other: &Outcome) -> Outcome {
        self.0.intersection(&other.0).copied().collect()
    }

    pub fn difference(&self, other: &Outcome) -> Outcome {
        self.0.difference(&other.0).copied().collect()
    }

    pub fn filter(&self, mut keep: impl FnMut(ContractId) -> bool) -> Outcome {
        self.iter().filter(|&c| keep(c)).collect()
    }

    pub fn to_vec(&self) -> Vec<ContractId> {
        self.iter().collect()
    }
}

impl fmt::Debug for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter().map(|c| c.0)).finish()
    }
}

impl FromIterator<ContractId> for Outcome {
    fn from_iter<I: IntoIterator<Item = ContractId>>(iter: I) -> Self {
        Outcome(iter.into_iter().collect())
    }
}

impl Extend<ContractId> for Outcome {
    fn extend<I: IntoIterator<Item = ContractId>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl IntoIterator for Outcome {
    type Item = ContractId;
    type IntoIter = btree_set::IntoIter<ContractId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a Outcome {
    type Item = ContractId;
    type IntoIter = std::iter::Copied<btree_set::Iter<'a, ContractId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl<const N: usize> From<[ContractId; N]> for Outcome {
    fn from(ids: [ContractId; N]) -> Self {
        ids.into_iter().collect()
    }
}
