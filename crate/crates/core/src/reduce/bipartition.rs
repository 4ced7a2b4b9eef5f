//! Acyclic vertex bipartition of a digraph as path-or-cycle stability in a
//! flow network.
//!
//! Each vertex `v` becomes a gadget of six firms: `s_v` feeds two lanes,
//! `s_v → a_v → a'_v → t_v` and `s_v → b_v → b'_v → t_v`, and the gadget
//! is wired to the global terminals by `s → s_v` and `t_v → t`. An arc
//! `u → v` adds the cross-gadget contracts `a'_u → a_v` and `b'_u → b_v`.
//! Choosing the `a` lane for the vertices of one part and the `b` lane for
//! the other yields a path-or-cycle-stable outcome exactly when both parts
//! are acyclic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Digraph;
use crate::choice::ChoiceSpec;
use crate::error::ReduceError;
use crate::model::{ContractId, FirmId, NetworkBuilder, Outcome, TradingNetwork};

/// Largest digraph the brute-force bipartition oracle accepts.
pub const BIPARTITION_CAP: usize = 24;

/// A split of the vertex indices into two parts: `q` takes the `b` lanes
/// and `r` the `a` lanes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub q: Vec<usize>,
    pub r: Vec<usize>,
}

impl Bipartition {
    /// Vertices marked `true` go to `q`.
    pub fn from_marks(in_q: &[bool]) -> Self {
        let (q, r): (Vec<usize>, Vec<usize>) = (0..in_q.len()).partition(|&i| in_q[i]);
        Bipartition { q, r }
    }

    /// Membership of each vertex in `q`, after checking this is a partition
    /// of `0..n`.
    pub fn marks(&self, n: usize) -> Result<Vec<bool>, ReduceError> {
        let mut seen = vec![None; n];
        for (part, in_q) in [(&self.q, true), (&self.r, false)] {
            for &v in part {
                if v >= n || seen[v].is_some() {
                    return Err(ReduceError::NotAPartition);
                }
                seen[v] = Some(in_q);
            }
        }
        seen.into_iter().map(|m| m.ok_or(ReduceError::NotAPartition)).collect()
    }
}

/// The firms of one vertex gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub s: FirmId,
    pub a: FirmId,
    pub a_out: FirmId,
    pub b: FirmId,
    pub b_out: FirmId,
    pub t: FirmId,
}

/// The contracts of one vertex gadget, lane by lane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetContracts {
    pub feed: ContractId,
    pub to_a: ContractId,
    pub to_b: ContractId,
    pub a_lane: ContractId,
    pub b_lane: ContractId,
    pub a_exit: ContractId,
    pub b_exit: ContractId,
    pub drain: ContractId,
}

/// The cross-gadget contracts of one arc `u → v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcContracts {
    pub from: usize,
    pub to: usize,
    /// `a'_u → a_v`.
    pub a_link: ContractId,
    /// `b'_u → b_v`.
    pub b_link: ContractId,
}

/// Correspondence between a digraph and its reduced network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    pub source: FirmId,
    pub sink: FirmId,
    pub gadgets: Vec<Gadget>,
    pub gadget_contracts: Vec<GadgetContracts>,
    pub arcs: Vec<ArcContracts>,
}

/// Name-based form of [`ReductionMap`], written next to generated networks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionMapDocument {
    pub source: String,
    pub sink: String,
    pub vertices: BTreeMap<String, GadgetDocument>,
    pub arcs: Vec<ArcDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GadgetDocument {
    pub firms: Vec<String>,
    pub contracts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDocument {
    pub from: String,
    pub to: String,
    pub contracts: Vec<String>,
}

impl ReductionMap {
    pub fn to_document(&self, net: &TradingNetwork, digraph: &Digraph) -> ReductionMapDocument {
        let firm = |f: FirmId| net.firm_name(f).to_string();
        let contract = |c: ContractId| net.contract_name(c).to_string();
        let vertices = self
            .gadgets
            .iter()
            .zip(&self.gadget_contracts)
            .enumerate()
            .map(|(i, (g, c))| {
                let doc = GadgetDocument {
                    firms: [g.s, g.a, g.a_out, g.b, g.b_out, g.t].map(firm).to_vec(),
                    contracts: [c.feed, c.to_a, c.to_b, c.a_lane, c.b_lane, c.a_exit, c.b_exit, c.drain]
                        .map(contract)
                        .to_vec(),
                };
                (digraph.vertex(i).to_string(), doc)
            })
            .collect();
        ReductionMapDocument {
            source: firm(self.source),
            sink: firm(self.sink),
            vertices,
            arcs: self
                .arcs
                .iter()
                .map(|a| ArcDocument {
                    from: digraph.vertex(a.from).to_string(),
                    to: digraph.vertex(a.to).to_string(),
                    contracts: vec![contract(a.a_link), contract(a.b_link)],
                })
                .collect(),
        }
    }

    /// All cross-gadget contracts.
    pub fn links(&self) -> Outcome {
        self.arcs.iter().flat_map(|a| [a.a_link, a.b_link]).collect()
    }
}

fn link(seller: &str, buyer: &str) -> String {
    format!("{seller}>{buyer}")
}

/// Builds the flow network for `digraph`.
///
/// Firms are named `s`, `t` and `v:s`, `v:a`, `v:ap`, `v:b`, `v:bp`, `v:t`
/// per vertex `v`; contracts are named `seller>buyer`. `s_v` prefers its
/// `a` lane, `t_v` prefers its `b` lane, and every lane firm ranks its
/// gadget contract above all cross-gadget contracts, which are ordered by
/// contract id.
pub fn reduce_acyclic_bipartition(digraph: &Digraph) -> Result<(TradingNetwork, ReductionMap), ReduceError> {
    let n = digraph.vertex_count();
    let role = |v: usize, r: &str| format!("{}:{r}", digraph.vertex(v));
    // Cross-gadget contracts entering (resp. leaving) each lane firm.
    let mut a_in = vec![Vec::new(); n];
    let mut a_out = vec![Vec::new(); n];
    let mut b_in = vec![Vec::new(); n];
    let mut b_out = vec![Vec::new(); n];
    for &(u, v) in digraph.arcs() {
        let a = link(&role(u, "ap"), &role(v, "a"));
        let b = link(&role(u, "bp"), &role(v, "b"));
        a_out[u].push(a.clone());
        a_in[v].push(a);
        b_out[u].push(b.clone());
        b_in[v].push(b);
    }
    let ranked = |first: String, mut rest: Vec<String>| {
        rest.sort();
        std::iter::once(first).chain(rest).collect::<Vec<_>>()
    };
    let mut builder = NetworkBuilder::new();
    builder.firm("s", ChoiceSpec::Terminal).firm("t", ChoiceSpec::Terminal);
    for v in 0..n {
        let [s, a, ap, b, bp, t] = ["s", "a", "ap", "b", "bp", "t"].map(|r| role(v, r));
        let feed = link("s", &s);
        let (to_a, to_b) = (link(&s, &a), link(&s, &b));
        let (a_lane, b_lane) = (link(&a, &ap), link(&b, &bp));
        let (a_exit, b_exit) = (link(&ap, &t), link(&bp, &t));
        let drain = link(&t, "t");
        builder
            .firm(&s, ChoiceSpec::flow_based([feed.clone()], [to_a.clone(), to_b.clone()]))
            .firm(&a, ChoiceSpec::flow_based(ranked(to_a.clone(), a_in[v].clone()), vec![a_lane.clone()]))
            .firm(&ap, ChoiceSpec::flow_based(vec![a_lane.clone()], ranked(a_exit.clone(), a_out[v].clone())))
            .firm(&b, ChoiceSpec::flow_based(ranked(to_b.clone(), b_in[v].clone()), vec![b_lane.clone()]))
            .firm(&bp, ChoiceSpec::flow_based(vec![b_lane.clone()], ranked(b_exit.clone(), b_out[v].clone())))
            .firm(&t, ChoiceSpec::flow_based([b_exit.clone(), a_exit.clone()], [drain.clone()]));
        builder
            .contract(&feed, "s", &s)
            .contract(&to_a, &s, &a)
            .contract(&to_b, &s, &b)
            .contract(&a_lane, &a, &ap)
            .contract(&b_lane, &b, &bp)
            .contract(&a_exit, &ap, &t)
            .contract(&b_exit, &bp, &t)
            .contract(&drain, &t, "t");
    }
    for &(u, v) in digraph.arcs() {
        builder
            .contract(link(&role(u, "ap"), &role(v, "a")), role(u, "ap"), role(v, "a"))
            .contract(link(&role(u, "bp"), &role(v, "b")), role(u, "bp"), role(v, "b"));
    }
    let net = builder.build()?;
    let firm = |name: &str| net.firm_id(name);
    let contract = |name: &str| net.contract_id(name);
    let mut gadgets = Vec::with_capacity(n);
    let mut gadget_contracts = Vec::with_capacity(n);
    for v in 0..n {
        let [s, a, ap, b, bp, t] = ["s", "a", "ap", "b", "bp", "t"].map(|r| role(v, r));
        gadgets.push(Gadget {
            s: firm(&s)?,
            a: firm(&a)?,
            a_out: firm(&ap)?,
            b: firm(&b)?,
            b_out: firm(&bp)?,
            t: firm(&t)?,
        });
        gadget_contracts.push(GadgetContracts {
            feed: contract(&link("s", &s))?,
            to_a: contract(&link(&s, &a))?,
            to_b: contract(&link(&s, &b))?,
            a_lane: contract(&link(&a, &ap))?,
            b_lane: contract(&link(&b, &bp))?,
            a_exit: contract(&link(&ap, &t))?,
            b_exit: contract(&link(&bp, &t))?,
            drain: contract(&link(&t, "t"))?,
        });
    }
    let arcs = digraph
        .arcs()
        .iter()
        .map(|&(u, v)| {
            Ok(ArcContracts {
                from: u,
                to: v,
                a_link: contract(&link(&role(u, "ap"), &role(v, "a")))?,
                b_link: contract(&link(&role(u, "bp"), &role(v, "b")))?,
            })
        })
        .collect::<Result<_, ReduceError>>()?;
    let map = ReductionMap {
        source: firm("s")?,
        sink: firm("t")?,
        gadgets,
        gadget_contracts,
        arcs,
    };
    Ok((net, map))
}

/// The outcome routing each `q` vertex through its `b` lane and each `r`
/// vertex through its `a` lane.
pub fn bipartition_to_outcome(map: &ReductionMap, parts: &Bipartition) -> Result<Outcome, ReduceError> {
    let marks = parts.marks(map.gadgets.len())?;
    let mut a = Outcome::new();
    for (c, in_q) in map.gadget_contracts.iter().zip(marks) {
        let lane = if in_q {
            [c.to_b, c.b_lane, c.b_exit]
        } else {
            [c.to_a, c.a_lane, c.a_exit]
        };
        a.extend([c.feed, c.drain]);
        a.extend(lane);
    }
    Ok(a)
}

/// `q` is the set of vertices whose `a` lane is unused in `a`. Fails if `a`
/// uses a cross-gadget contract or if either part induces a cycle.
pub fn outcome_to_bipartition(map: &ReductionMap, net: &TradingNetwork, digraph: &Digraph, a: &Outcome) -> Result<Bipartition, ReduceError> {
    if let Some(c) = map.links().intersection(a).iter().next() {
        return Err(ReduceError::CrossGadgetContract(net.contract_name(c).to_string()));
    }
    let in_q: Vec<bool> = map.gadget_contracts.iter().map(|c| !a.contains(c.a_lane)).collect();
    let in_r: Vec<bool> = in_q.iter().map(|q| !q).collect();
    if !digraph.is_acyclic_part(&in_q) {
        return Err(ReduceError::CyclicPart("Q"));
    }
    if !digraph.is_acyclic_part(&in_r) {
        return Err(ReduceError::CyclicPart("R"));
    }
    Ok(Bipartition::from_marks(&in_q))
}

/// Brute force over 2-colourings: the first bipartition, in increasing
/// order of the bitmask of `q`, whose parts are both acyclic.
pub fn solve_acyclic_bipartition(digraph: &Digraph) -> Result<Option<Bipartition>, ReduceError> {
    let n = digraph.vertex_count();
    if n > BIPARTITION_CAP {
        return Err(ReduceError::CapExceeded {
            size: n,
            cap: BIPARTITION_CAP,
        });
    }
    for mask in 0u64..1 << n {
        let in_q: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let in_r: Vec<bool> = in_q.iter().map(|q| !q).collect();
        if digraph.is_acyclic_part(&in_q) && digraph.is_acyclic_part(&in_r) {
            return Ok(Some(Bipartition::from_marks(&in_q)));
        }
    }
    Ok(None)
}
