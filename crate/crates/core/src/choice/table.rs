use std::collections::HashMap;

use crate::model::{ContractId, Outcome};

/// An explicitly tabulated choice function over every subset of a domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableChoice {
    domain: Vec<ContractId>,
    entries: HashMap<Outcome, Outcome>,
}

impl TableChoice {
    /// Builds a table, checking it is total over the subsets of `domain`
    /// and that every image is contained in its key.
    pub fn new(domain: Vec<ContractId>, entries: Vec<(Outcome, Outcome)>) -> Result<Self, String> {
        let mut domain = domain;
        domain.sort();
        domain.dedup();
        if domain.len() > 20 {
            return Err(format!("table domain of {} contracts is too large", domain.len()));
        }
        let universe: Outcome = domain.iter().copied().collect();
        let mut map = HashMap::with_capacity(entries.len());
        for (offered, chosen) in entries {
            if !offered.is_subset(&universe) {
                return Err(format!("offered set {offered:?} is outside the firm's contracts"));
            }
            if !chosen.is_subset(&offered) {
                return Err(format!("chosen set {chosen:?} is not contained in {offered:?}"));
            }
            if map.insert(offered.clone(), chosen).is_some() {
                return Err(format!("offered set {offered:?} listed twice"));
            }
        }
        let expected = 1usize << domain.len();
        if map.len() != expected {
            return Err(format!(
                "table lists {} offered sets but the firm has {expected} subsets",
                map.len()
            ));
        }
        Ok(TableChoice { domain, entries: map })
    }

    /// Tabulates `rule` over every subset of `domain`.
    pub fn from_fn(domain: Vec<ContractId>, mut rule: impl FnMut(&Outcome) -> Outcome) -> Result<Self, String> {
        let mut domain = domain;
        domain.sort();
        domain.dedup();
        let entries = subsets(&domain)
            .map(|offered| {
                let chosen = rule(&offered);
                (offered, chosen)
            })
            .collect();
        TableChoice::new(domain, entries)
    }

    pub fn domain(&self) -> &[ContractId] {
        &self.domain
    }

    /// Entries in canonical order of the offered set.
    pub fn entries(&self) -> Vec<(&Outcome, &Outcome)> {
        let mut all: Vec<_> = self.entries.iter().collect();
        all.sort();
        all
    }

    pub fn choose(&self, offered: &Outcome) -> Outcome {
        let key = offered.filter(|c| self.domain.binary_search(&c).is_ok());
        self.entries
            .get(&key)
            .cloned()
            .expect("table is total over its domain")
    }
}

/// All subsets of `items`, in order of their bitmask.
pub(crate) fn subsets(items: &[ContractId]) -> impl Iterator<Item = Outcome> + '_ {
    (0u64..1u64 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &c)| c)
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_fn_is_total() {
        let dom = vec![ContractId(2), ContractId(5)];
        let t = TableChoice::from_fn(dom, |o| o.clone()).unwrap();
        assert_eq!(t.entries().len(), 4);
        let both: Outcome = [ContractId(2), ContractId(5)].into();
        assert_eq!(t.choose(&both), both);
    }

    #[test]
    fn rejects_partial_table() {
        let dom = vec![ContractId(0)];
        let err = TableChoice::new(dom, vec![(Outcome::new(), Outcome::new())]).unwrap_err();
        assert!(err.contains("subsets"), "{err}");
    }

    #[test]
    fn rejects_image_outside_key() {
        let a = ContractId(0);
        let entries = vec![(Outcome::new(), Outcome::from([a])), (Outcome::from([a]), Outcome::from([a]))];
        assert!(TableChoice::new(vec![a], entries).is_err());
    }
}
