//! The choice-function family behind the oracle lower bound.
//!
//! Firm `f` buys `x_1..x_{2n}` from `g` and sells `y` to `g`. The default
//! buyer rule keeps `y` only when more than `n` upstream contracts are
//! offered; a hidden `n`-subset `I` additionally keeps `y` when exactly
//! `X_I` is offered. Firm `g` uses the unit-weight prefix rule.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use super::partition::PartitionSellerChoice;
use crate::model::{ContractId, Outcome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleSide {
    /// Buyer of the `x_i`; `hidden_set` holds 1-based indices into `x`.
    F { hidden_set: Option<BTreeSet<usize>> },
    G,
}

/// Oracle-family choice with a built-in query counter.
///
/// Every call to [`choose`](Self::choose) counts as one query and is logged,
/// so experiments can read off both the total and the distinct inputs.
#[derive(Debug)]
pub struct OracleFamilyChoice {
    n: usize,
    y: ContractId,
    x: Vec<ContractId>,
    side: OracleSide,
    queries: AtomicU64,
    log: Mutex<BTreeSet<Outcome>>,
}

impl OracleFamilyChoice {
    pub fn new(n: usize, y: ContractId, x: Vec<ContractId>, side: OracleSide) -> Result<Self, String> {
        if n == 0 {
            return Err("n must be positive".into());
        }
        if x.len() != 2 * n {
            return Err(format!("expected {} contracts x_i, got {}", 2 * n, x.len()));
        }
        if let OracleSide::F { hidden_set: Some(hidden) } = &side {
            if hidden.len() != n {
                return Err(format!("hidden set must have exactly {n} indices"));
            }
            if hidden.iter().any(|&i| i == 0 || i > 2 * n) {
                return Err(format!("hidden set indices must lie in 1..={}", 2 * n));
            }
        }
        Ok(OracleFamilyChoice {
            n,
            y,
            x,
            side,
            queries: AtomicU64::new(0),
            log: Mutex::new(BTreeSet::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn y(&self) -> ContractId {
        self.y
    }

    pub fn x(&self) -> &[ContractId] {
        &self.x
    }

    pub fn side(&self) -> &OracleSide {
        &self.side
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::SeqCst)
    }

    /// Distinct inputs this oracle has been evaluated on.
    pub fn distinct_queries(&self) -> BTreeSet<Outcome> {
        self.log.lock().expect("query log poisoned").clone()
    }

    pub fn reset_queries(&self) {
        self.queries.store(0, Ordering::SeqCst);
        self.log.lock().expect("query log poisoned").clear();
    }

    pub fn choose(&self, offered: &Outcome) -> Outcome {
        self.queries.fetch_add(1, Ordering::SeqCst);
        self.log
            .lock()
            .expect("query log poisoned")
            .insert(offered.clone());
        match &self.side {
            OracleSide::F { hidden_set } => {
                let upstream: Outcome = self.x.iter().copied().filter(|&c| offered.contains(c)).collect();
                let hits_hidden = hidden_set.as_ref().is_some_and(|hidden| {
                    upstream.len() == hidden.len()
                        && hidden.iter().all(|&i| upstream.contains(self.x[i - 1]))
                });
                let mut chosen = upstream;
                if offered.contains(self.y) && (chosen.len() > self.n || hits_hidden) {
                    chosen.insert(self.y);
                }
                chosen
            }
            OracleSide::G => PartitionSellerChoice::unit(self.y, &self.x).choose(offered),
        }
    }
}

impl Clone for OracleFamilyChoice {
    fn clone(&self) -> Self {
        OracleFamilyChoice {
            n: self.n,
            y: self.y,
            x: self.x.clone(),
            side: self.side.clone(),
            queries: AtomicU64::new(self.query_count()),
            log: Mutex::new(self.distinct_queries()),
        }
    }
}

impl PartialEq for OracleFamilyChoice {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.y == other.y && self.x == other.x && self.side == other.side
    }
}

impl Eq for OracleFamilyChoice {}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(n: usize, side: OracleSide) -> OracleFamilyChoice {
        let y = ContractId(0);
        let x = (1..=2 * n as u32).map(ContractId).collect();
        OracleFamilyChoice::new(n, y, x, side).unwrap()
    }

    fn hidden(ix: &[usize]) -> OracleSide {
        OracleSide::F {
            hidden_set: Some(ix.iter().copied().collect()),
        }
    }

    #[test]
    fn hidden_set_accepts_y_on_exact_match() {
        let f = family(1, hidden(&[1]));
        let (y, x1) = (ContractId(0), ContractId(1));
        assert_eq!(f.choose(&Outcome::from([y, x1])), Outcome::from([y, x1]));
    }

    #[test]
    fn default_rejects_y_at_or_below_n() {
        let f = family(1, OracleSide::F { hidden_set: None });
        let (y, x1) = (ContractId(0), ContractId(1));
        assert_eq!(f.choose(&Outcome::from([y, x1])), Outcome::from([x1]));
    }

    #[test]
    fn more_than_n_always_accepts() {
        for side in [OracleSide::F { hidden_set: None }, hidden(&[2, 4])] {
            let f = family(2, side);
            let offered: Outcome = [0, 1, 3, 4].map(ContractId).into();
            assert_eq!(f.choose(&offered), offered);
        }
    }

    #[test]
    fn counter_counts_every_query() {
        let f = family(2, OracleSide::G);
        let offered: Outcome = [0, 1].map(ContractId).into();
        for _ in 0..3 {
            f.choose(&offered);
        }
        assert_eq!(f.query_count(), 3);
        assert_eq!(f.distinct_queries().len(), 1);
        f.reset_queries();
        assert_eq!(f.query_count(), 0);
    }

    #[test]
    fn g_keeps_first_n_offered() {
        let g = family(2, OracleSide::G);
        let offered: Outcome = [0, 2, 3, 4].map(ContractId).into();
        assert_eq!(g.choose(&offered), [0, 2, 3].map(ContractId).into());
        assert!(g.choose(&[1, 2].map(ContractId).into()).is_empty());
    }

    #[test]
    fn rejects_malformed_families() {
        let y = ContractId(0);
        assert!(OracleFamilyChoice::new(2, y, vec![ContractId(1)], OracleSide::G).is_err());
        let x: Vec<_> = (1..=4).map(ContractId).collect();
        assert!(OracleFamilyChoice::new(2, y, x.clone(), hidden(&[1])).is_err());
        assert!(OracleFamilyChoice::new(2, y, x, hidden(&[1, 5])).is_err());
    }
}
