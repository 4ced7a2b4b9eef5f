use std::fmt::Write;

use serde::Serialize;
use tradenet_core::choice::audit::{Clause, Offer, Violation};
use tradenet_core::solve::{BlockReport, Budget};
use tradenet_core::{FirmId, Outcome, TradingNetwork};

/// Exit status of a run, a function of the verdict alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunVerdict {
    Yes,
    No,
    UnknownBudget,
}

impl RunVerdict {
    pub fn exit_code(self) -> u8 {
        match self {
            RunVerdict::Yes => 0,
            RunVerdict::No => 3,
            RunVerdict::UnknownBudget => 4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Fact {
    pub firm: String,
    pub contracts: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Outcome { contracts: Vec<String> },
    Block { kind: String, contracts: Vec<String>, evidence: Vec<Fact> },
    NotAcceptable { firms: Vec<String> },
    Violations { violations: Vec<String> },
}

impl Witness {
    pub fn outcome(net: &TradingNetwork, a: &Outcome) -> Self {
        Witness::Outcome {
            contracts: net.contract_names_of(a),
        }
    }

    pub fn block(net: &TradingNetwork, block: &BlockReport) -> Self {
        Witness::Block {
            kind: block.kind.to_string(),
            contracts: block.contracts.iter().map(|&c| net.contract_name(c).to_string()).collect(),
            evidence: block
                .evidence
                .iter()
                .map(|f| Fact {
                    firm: net.firm_name(f.firm).to_string(),
                    contracts: net.contract_names_of(&f.contracts),
                })
                .collect(),
        }
    }

    pub fn not_acceptable(net: &TradingNetwork, firms: &[FirmId]) -> Self {
        Witness::NotAcceptable {
            firms: firms.iter().map(|&f| net.firm_name(f).to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Counters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejections: Option<usize>,
    pub choice_evaluations: u64,
    pub oracle_queries: u64,
}

impl Counters {
    pub fn from_network(net: &TradingNetwork) -> Self {
        Counters {
            choice_evaluations: net.evaluations(),
            oracle_queries: net.firms().filter_map(|f| net.choice(f).as_oracle()).map(|o| o.query_count()).sum(),
            ..Counters::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BudgetInfo {
    pub bits: u32,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub examined: Option<u64>,
}

impl BudgetInfo {
    pub fn new(budget: Budget) -> Self {
        BudgetInfo {
            bits: budget.as_bits(),
            nodes: budget.nodes(),
            examined: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concept: Option<String>,
    pub verdict: RunVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub counters: Counters,
    pub budget: BudgetInfo,
    pub wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl RunReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let verdict = match self.verdict {
            RunVerdict::Yes => "yes",
            RunVerdict::No => "no",
            RunVerdict::UnknownBudget => "unknown (budget exhausted)",
        };
        match &self.concept {
            Some(c) => writeln!(out, "{c}: {verdict}").unwrap(),
            None => writeln!(out, "verdict: {verdict}").unwrap(),
        }
        match &self.witness {
            None => {}
            Some(Witness::Outcome { contracts }) => writeln!(out, "outcome: {{{}}}", contracts.join(", ")).unwrap(),
            Some(Witness::Block { kind, contracts, evidence }) => {
                writeln!(out, "{kind}: [{}]", contracts.join(", ")).unwrap();
                for fact in evidence {
                    writeln!(out, "  {} accepts {{{}}}", fact.firm, fact.contracts.join(", ")).unwrap();
                }
            }
            Some(Witness::NotAcceptable { firms }) => writeln!(out, "not acceptable to: {}", firms.join(", ")).unwrap(),
            Some(Witness::Violations { violations }) => {
                for v in violations {
                    writeln!(out, "violation: {v}").unwrap();
                }
            }
        }
        let c = &self.counters;
        if let (Some(rounds), Some(rejections)) = (c.rounds, c.rejections) {
            writeln!(out, "rounds: {rounds}, rejections: {rejections}").unwrap();
        }
        write!(out, "choice evaluations: {}", c.choice_evaluations).unwrap();
        if c.oracle_queries > 0 {
            write!(out, ", oracle queries: {}", c.oracle_queries).unwrap();
        }
        out.push('\n');
        if let Some(examined) = self.budget.examined {
            writeln!(out, "budget: 2^{} nodes, stopped after {examined}", self.budget.bits).unwrap();
        }
        out
    }
}

fn names(net: &TradingNetwork, set: &Outcome) -> String {
    format!("{{{}}}", net.contract_names_of(set).join(", "))
}

fn offer(net: &TradingNetwork, o: &Offer) -> String {
    format!("{} | {}", names(net, &o.upstream), names(net, &o.downstream))
}

/// One-line description of a violation, naming contracts.
pub fn describe_violation(net: &TradingNetwork, firm: FirmId, v: &Violation) -> String {
    let f = net.firm_name(firm);
    match v {
        Violation::NotSubset { offered, chosen } => {
            format!("{f}: chose {} from {}", names(net, chosen), names(net, offered))
        }
        Violation::Irc { offered, reduced } => {
            format!("{f}: IRC fails: dropping rejected contracts from {} to {} changes the choice", names(net, offered), names(net, reduced))
        }
        Violation::Substitutability { clause, first, second, contract } => {
            let clause = match clause {
                Clause::SameSideBuyer => "same-side (buyer)",
                Clause::SameSideSeller => "same-side (seller)",
                Clause::CrossSideBuyer => "cross-side (buyer)",
                Clause::CrossSideSeller => "cross-side (seller)",
            };
            format!(
                "{f}: {clause}: {} is rejected at ({}) but accepted at ({})",
                net.contract_name(*contract),
                offer(net, first),
                offer(net, second)
            )
        }
    }
}
