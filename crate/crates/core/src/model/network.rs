use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use petgraph::graph::DiGraph;

use super::{Contract, ContractId, FirmId, Outcome};
use crate::choice::{ChoiceFunction, ChoiceSpec, FirmContext};
use crate::error::ModelError;

/// Collects firms and contracts by string id and builds a [`TradingNetwork`].
#[derive(Clone, Debug, Default)]
pub struct NetworkBuilder {
    firms: Vec<(String, ChoiceSpec)>,
    contracts: Vec<(String, String, String)>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn firm(&mut self, id: impl Into<String>, choice: ChoiceSpec) -> &mut Self {
        self.firms.push((id.into(), choice));
        self
    }

    pub fn contract(&mut self, id: impl Into<String>, seller: impl Into<String>, buyer: impl Into<String>) -> &mut Self {
        self.contracts.push((id.into(), seller.into(), buyer.into()));
        self
    }

    pub fn build(&self) -> Result<TradingNetwork, ModelError> {
        let mut firm_names: Vec<&str> = self.firms.iter().map(|(n, _)| n.as_str()).collect();
        firm_names.sort_unstable();
        if let Some(w) = firm_names.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateFirm(w[0].to_string()));
        }
        let firm_index: HashMap<String, FirmId> = firm_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.to_string(), FirmId::from_index(i)))
            .collect();

        let mut sorted_contracts: Vec<&(String, String, String)> = self.contracts.iter().collect();
        sorted_contracts.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = sorted_contracts.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(ModelError::DuplicateContract(w[0].0.clone()));
        }
        let mut contracts = Vec::with_capacity(sorted_contracts.len());
        let mut contract_names = Vec::with_capacity(sorted_contracts.len());
        let mut upstream = vec![Vec::new(); firm_names.len()];
        let mut downstream = vec![Vec::new(); firm_names.len()];
        for (i, (name, seller, buyer)) in sorted_contracts.into_iter().enumerate() {
            let lookup = |f: &String| {
                firm_index
                    .get(f)
                    .copied()
                    .ok_or_else(|| ModelError::UnknownFirm(f.clone()))
            };
            let (seller, buyer) = (lookup(seller)?, lookup(buyer)?);
            if seller == buyer {
                return Err(ModelError::SelfContract(name.clone()));
            }
            let id = ContractId::from_index(i);
            contracts.push(Contract { id, seller, buyer });
            contract_names.push(name.clone());
            downstream[seller.index()].push(id);
            upstream[buyer.index()].push(id);
        }
        let contract_index: HashMap<String, ContractId> = contract_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), ContractId::from_index(i)))
            .collect();

        let specs: HashMap<&str, &ChoiceSpec> = self.firms.iter().map(|(n, s)| (n.as_str(), s)).collect();
        let lookup = |name: &str| contract_index.get(name).copied();
        let mut choice = Vec::with_capacity(firm_names.len());
        for (i, name) in firm_names.iter().enumerate() {
            let ctx = FirmContext {
                upstream: &upstream[i],
                downstream: &downstream[i],
                lookup: &lookup,
            };
            let resolved = ChoiceFunction::resolve(specs[name], &ctx).map_err(|reason| ModelError::InvalidChoice {
                firm: name.to_string(),
                reason,
            })?;
            choice.push(resolved);
        }

        let mut net = TradingNetwork {
            firm_names: firm_names.into_iter().map(str::to_string).collect(),
            firm_index,
            contracts,
            contract_names,
            contract_index,
            upstream,
            downstream,
            choice,
            flow: false,
            evaluations: AtomicU64::new(0),
        };
        net.flow = net.compute_is_flow_network();
        Ok(net)
    }
}

/// Firms, bilateral contracts and one choice function per firm.
///
/// Immutable once built. Firm and contract ids follow the ascending order of
/// their string ids. Every choice evaluation made through the network bumps
/// an evaluation counter, readable with [`evaluations`](Self::evaluations).
#[derive(Debug)]
pub struct TradingNetwork {
    firm_names: Vec<String>,
    firm_index: HashMap<String, FirmId>,
    contracts: Vec<Contract>,
    contract_names: Vec<String>,
    contract_index: HashMap<String, ContractId>,
    upstream: Vec<Vec<ContractId>>,
    downstream: Vec<Vec<ContractId>>,
    choice: Vec<ChoiceFunction>,
    flow: bool,
    evaluations: AtomicU64,
}

impl Clone for TradingNetwork {
    fn clone(&self) -> Self {
        TradingNetwork {
            firm_names: self.firm_names.clone(),
            firm_index: self.firm_index.clone(),
            contracts: self.contracts.clone(),
            contract_names: self.contract_names.clone(),
            contract_index: self.contract_index.clone(),
            upstream: self.upstream.clone(),
            downstream: self.downstream.clone(),
            choice: self.choice.clone(),
            flow: self.flow,
            evaluations: AtomicU64::new(self.evaluations()),
        }
    }
}

impl TradingNetwork {
    pub fn firm_count(&self) -> usize {
        self.firm_names.len()
    }

    pub fn contract_count(&self) -> usize {
        self.contracts.len()
    }

    pub fn firms(&self) -> impl ExactSizeIterator<Item = FirmId> + '_ {
        (0..self.firm_names.len()).map(FirmId::from_index)
    }

    pub fn contracts(&self) -> &[Contract] {
        &self.contracts
    }

    pub fn contract(&self, id: ContractId) -> &Contract {
        &self.contracts[id.index()]
    }

    /// The full contract set `X`.
    pub fn all_contracts(&self) -> Outcome {
        self.contracts.iter().map(|c| c.id).collect()
    }

    pub fn firm_name(&self, id: FirmId) -> &str {
        &self.firm_names[id.index()]
    }

    pub fn contract_name(&self, id: ContractId) -> &str {
        &self.contract_names[id.index()]
    }

    pub fn firm_id(&self, name: &str) -> Result<FirmId, ModelError> {
        self.firm_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownFirm(name.to_string()))
    }

    pub fn contract_id(&self, name: &str) -> Result<ContractId, ModelError> {
        self.contract_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownContract(name.to_string()))
    }

    /// Builds an outcome from contract string ids.
    pub fn outcome<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<Outcome, ModelError> {
        names.into_iter().map(|n| self.contract_id(n.as_ref())).collect()
    }

    pub fn contract_names_of(&self, outcome: &Outcome) -> Vec<String> {
        outcome.iter().map(|c| self.contract_name(c).to_string()).collect()
    }

    pub fn choice(&self, firm: FirmId) -> &ChoiceFunction {
        &self.choice[firm.index()]
    }

    pub fn choice_spec(&self, firm: FirmId) -> ChoiceSpec {
        self.choice(firm).to_spec(&|c| self.contract_name(c).to_string())
    }

    /// Number of choice evaluations performed through this network so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn reset_evaluations(&self) {
        self.evaluations.store(0, Ordering::Relaxed)
    }

    fn check_firm(&self, f: FirmId) -> Result<(), ModelError> {
        if f.index() < self.firm_names.len() {
            Ok(())
        } else {
            Err(ModelError::UnknownFirm(f.to_string()))
        }
    }

    /// `X_f^B`, the firm's upstream contracts in canonical order.
    pub fn upstream_contracts(&self, f: FirmId) -> &[ContractId] {
        &self.upstream[f.index()]
    }

    /// `X_f^S`, the firm's downstream contracts in canonical order.
    pub fn downstream_contracts(&self, f: FirmId) -> &[ContractId] {
        &self.downstream[f.index()]
    }

    /// `Y ∩ X_f^B`.
    pub fn upstream_of(&self, f: FirmId, y: &Outcome) -> Result<Outcome, ModelError> {
        self.check_firm(f)?;
        Ok(self.upstream[f.index()].iter().copied().filter(|&c| y.contains(c)).collect())
    }

    /// `Y ∩ X_f^S`.
    pub fn downstream_of(&self, f: FirmId, y: &Outcome) -> Result<Outcome, ModelError> {
        self.check_firm(f)?;
        Ok(self.downstream[f.index()].iter().copied().filter(|&c| y.contains(c)).collect())
    }

    /// `Y_f`: the contracts of `y` that involve `f`.
    pub fn restrict(&self, f: FirmId, y: &Outcome) -> Result<Outcome, ModelError> {
        self.check_firm(f)?;
        Ok(y.filter(|c| self.contract(c).involves(f)))
    }

    /// `F(Y)`, the firms party to some contract of `y`.
    pub fn firms_of(&self, y: &Outcome) -> BTreeSet<FirmId> {
        y.iter()
            .flat_map(|c| {
                let c = self.contract(c);
                [c.seller, c.buyer]
            })
            .collect()
    }

    /// Evaluates `C^f` on `offered`, which must consist of `f`'s own contracts.
    pub fn choose(&self, f: FirmId, offered: &Outcome) -> Result<Outcome, ModelError> {
        self.check_firm(f)?;
        for c in offered {
            if c.index() >= self.contracts.len() || !self.contract(c).involves(f) {
                let contract = if c.index() < self.contracts.len() {
                    self.contract_name(c).to_string()
                } else {
                    c.to_string()
                };
                return Err(ModelError::ForeignContract {
                    firm: self.firm_name(f).to_string(),
                    contract,
                });
            }
        }
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        let chosen = self.choice[f.index()].choose(offered);
        if !chosen.is_subset(offered) {
            return Err(ModelError::ChoiceNotSubset {
                firm: self.firm_name(f).to_string(),
            });
        }
        Ok(chosen)
    }

    /// `C_B^f(Y|Z) = C^f(Y_f^B ∪ Z_f^S) ∩ X_f^B`.
    pub fn chosen_buyer(&self, f: FirmId, y: &Outcome, z: &Outcome) -> Result<Outcome, ModelError> {
        let offered = self.upstream_of(f, y)?.union(&self.downstream_of(f, z)?);
        Ok(self.choose(f, &offered)?.filter(|c| self.contract(c).buyer == f))
    }

    /// `C_S^f(Z|Y) = C^f(Z_f^S ∪ Y_f^B) ∩ X_f^S`.
    pub fn chosen_seller(&self, f: FirmId, z: &Outcome, y: &Outcome) -> Result<Outcome, ModelError> {
        let offered = self.downstream_of(f, z)?.union(&self.upstream_of(f, y)?);
        Ok(self.choose(f, &offered)?.filter(|c| self.contract(c).seller == f))
    }

    /// `R_B^f(Y|Z)`: offered upstream contracts the firm turns down.
    pub fn rejected_buyer(&self, f: FirmId, y: &Outcome, z: &Outcome) -> Result<Outcome, ModelError> {
        Ok(self.upstream_of(f, y)?.difference(&self.chosen_buyer(f, y, z)?))
    }

    /// `R_S^f(Z|Y)`: offered downstream contracts the firm turns down.
    pub fn rejected_seller(&self, f: FirmId, z: &Outcome, y: &Outcome) -> Result<Outcome, ModelError> {
        Ok(self.downstream_of(f, z)?.difference(&self.chosen_seller(f, z, y)?))
    }

    /// `C^f(A_f) = A_f`.
    pub fn is_individually_rational(&self, a: &Outcome, f: FirmId) -> Result<bool, ModelError> {
        let local = self.restrict(f, a)?;
        Ok(self.choose(f, &local)? == local)
    }

    /// Individually rational for every firm.
    pub fn is_acceptable(&self, a: &Outcome) -> Result<bool, ModelError> {
        for f in self.firms_of(a) {
            if !self.is_individually_rational(a, f)? {
                return Ok(false);
            }
        }
        // Firms outside F(A) see the empty set, which every choice keeps.
        Ok(true)
    }

    /// `S` is `(W, f)`-acceptable: `S_f ⊆ C^f(W_f ∪ S_f)`.
    pub fn is_w_acceptable(&self, s: &Outcome, w: &Outcome, f: FirmId) -> Result<bool, ModelError> {
        let s_f = self.restrict(f, s)?;
        if s_f.is_empty() {
            return Ok(true);
        }
        let offered = self.restrict(f, w)?.union(&s_f);
        Ok(s_f.is_subset(&self.choose(f, &offered)?))
    }

    /// `(W, f)`-acceptable for every `f ∈ F(S)`.
    pub fn is_w_acceptable_all(&self, s: &Outcome, w: &Outcome) -> Result<bool, ModelError> {
        for f in self.firms_of(s) {
            if !self.is_w_acceptable(s, w, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Terminal sellers (no upstream contracts) and terminal buyers (no
    /// downstream contracts). A firm without contracts is both.
    pub fn classify_terminals(&self) -> (Vec<FirmId>, Vec<FirmId>) {
        let sellers = self.firms().filter(|f| self.upstream[f.index()].is_empty()).collect();
        let buyers = self.firms().filter(|f| self.downstream[f.index()].is_empty()).collect();
        (sellers, buyers)
    }

    pub fn is_terminal(&self, f: FirmId) -> bool {
        self.upstream[f.index()].is_empty() || self.downstream[f.index()].is_empty()
    }

    /// Exactly two terminal agents and every firm flow-based, with the
    /// accept-all rule on exactly the terminal firms.
    pub fn is_flow_network(&self) -> bool {
        self.flow
    }

    fn compute_is_flow_network(&self) -> bool {
        let terminals = self.firms().filter(|&f| self.is_terminal(f)).count();
        terminals == 2
            && self.firms().all(|f| match self.choice(f).as_flow_based() {
                Some(fc) => fc.is_terminal() == self.is_terminal(f),
                None => false,
            })
    }

    /// No firm buys from and sells to another, even via intermediaries.
    pub fn is_acyclic(&self) -> bool {
        let mut graph = DiGraph::<(), ()>::with_capacity(self.firm_count(), self.contract_count());
        let nodes: Vec<_> = self.firms().map(|_| graph.add_node(())).collect();
        for c in &self.contracts {
            graph.add_edge(nodes[c.seller.index()], nodes[c.buyer.index()], ());
        }
        !petgraph::algo::is_cyclic_directed(&graph)
    }
}
