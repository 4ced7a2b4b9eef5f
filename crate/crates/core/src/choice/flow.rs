use crate::model::{ContractId, Outcome};

/// Flow-based choice: a terminal firm keeps everything it is offered; any
/// other firm keeps its `k` best upstream and `k` best downstream offers,
/// where `k` is the smaller of the two offered counts.
///
/// Preference lists are ranked best first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowBasedChoice {
    terminal: bool,
    buyer_pref: Vec<ContractId>,
    seller_pref: Vec<ContractId>,
}

impl FlowBasedChoice {
    pub fn terminal() -> Self {
        FlowBasedChoice {
            terminal: true,
            buyer_pref: Vec::new(),
            seller_pref: Vec::new(),
        }
    }

    pub fn new(buyer_pref: Vec<ContractId>, seller_pref: Vec<ContractId>) -> Self {
        FlowBasedChoice {
            terminal: false,
            buyer_pref,
            seller_pref,
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.terminal
    }

    pub fn buyer_pref(&self) -> &[ContractId] {
        &self.buyer_pref
    }

    pub fn seller_pref(&self) -> &[ContractId] {
        &self.seller_pref
    }

    pub fn choose(&self, offered: &Outcome) -> Outcome {
        if self.terminal {
            return offered.clone();
        }
        let up: Vec<ContractId> = self
            .buyer_pref
            .iter()
            .copied()
            .filter(|&c| offered.contains(c))
            .collect();
        let down: Vec<ContractId> = self
            .seller_pref
            .iter()
            .copied()
            .filter(|&c| offered.contains(c))
            .collect();
        let k = up.len().min(down.len());
        up[..k].iter().chain(&down[..k]).copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(i: u32) -> ContractId {
        ContractId(i)
    }

    #[test]
    fn terminal_keeps_everything() {
        let offered = Outcome::from([c(0), c(3), c(7)]);
        assert_eq!(FlowBasedChoice::terminal().choose(&offered), offered);
    }

    #[test]
    fn all_upstream_offer_is_rejected() {
        let fc = FlowBasedChoice::new(vec![c(0), c(1)], vec![c(2)]);
        assert!(fc.choose(&Outcome::from([c(0), c(1)])).is_empty());
    }

    #[test]
    fn takes_k_best_on_each_side() {
        // up y1 ≻ y2, down z1 ≻ z2; offered {y2, z1, z2}: k = 1.
        let (y1, y2, z1, z2) = (c(0), c(1), c(2), c(3));
        let fc = FlowBasedChoice::new(vec![y1, y2], vec![z1, z2]);
        assert_eq!(fc.choose(&Outcome::from([y2, z1, z2])), Outcome::from([y2, z1]));
        assert_eq!(fc.choose(&Outcome::from([y1, y2, z2])), Outcome::from([y1, z2]));
        assert_eq!(
            fc.choose(&Outcome::from([y1, y2, z1, z2])),
            Outcome::from([y1, y2, z1, z2])
        );
    }
}
