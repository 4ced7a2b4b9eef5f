//! JSON documents for networks, outcomes and digraphs.
//!
//! Emitted documents are canonical: firms and contracts sorted by id,
//! outcome contracts sorted, preferences in rank order. Loading and saving
//! a canonical document reproduces it byte for byte.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::choice::ChoiceSpec;
use crate::error::IoError;
use crate::model::{NetworkBuilder, Outcome, TradingNetwork};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub schema_version: u32,
    pub firms: Vec<FirmDocument>,
    pub contracts: Vec<ContractDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FirmDocument {
    pub id: String,
    pub choice: ChoiceSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractDocument {
    pub id: String,
    pub seller: String,
    pub buyer: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeDocument {
    pub schema_version: u32,
    pub contracts: Vec<String>,
}

impl TradingNetwork {
    pub fn to_document(&self) -> NetworkDocument {
        let name = |c| self.contract_name(c).to_string();
        NetworkDocument {
            schema_version: SCHEMA_VERSION,
            firms: self
                .firms()
                .map(|f| FirmDocument {
                    id: self.firm_name(f).to_string(),
                    choice: self.choice(f).to_spec(&name),
                })
                .collect(),
            contracts: self
                .contracts()
                .iter()
                .map(|c| ContractDocument {
                    id: name(c.id),
                    seller: self.firm_name(c.seller).to_string(),
                    buyer: self.firm_name(c.buyer).to_string(),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &NetworkDocument) -> Result<Self, IoError> {
        check_version("network", doc.schema_version)?;
        let mut builder = NetworkBuilder::new();
        for f in &doc.firms {
            builder.firm(&f.id, f.choice.clone());
        }
        for c in &doc.contracts {
            builder.contract(&c.id, &c.seller, &c.buyer);
        }
        builder.build().map_err(|source| IoError::Model {
            context: "network".into(),
            source,
        })
    }

    pub fn outcome_document(&self, a: &Outcome) -> OutcomeDocument {
        OutcomeDocument {
            schema_version: SCHEMA_VERSION,
            contracts: self.contract_names_of(a),
        }
    }

    pub fn outcome_from_document(&self, doc: &OutcomeDocument) -> Result<Outcome, IoError> {
        check_version("outcome", doc.schema_version)?;
        self.outcome(&doc.contracts).map_err(|source| IoError::Model {
            context: "outcome".into(),
            source,
        })
    }
}

fn check_version(context: &str, found: u32) -> Result<(), IoError> {
    if found == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(IoError::SchemaVersion {
            context: context.into(),
            found,
            expected: SCHEMA_VERSION,
        })
    }
}

/// Parses `text`, reporting the position of any syntax or schema error.
pub fn parse_json<T: DeserializeOwned>(context: &str, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse {
        context: context.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    text
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    parse_json(&path.display().to_string(), &text)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    fs::write(path, to_json(value)).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn network_from_json(text: &str) -> Result<TradingNetwork, IoError> {
    TradingNetwork::from_document(&parse_json("network", text)?)
}

pub fn network_to_json(net: &TradingNetwork) -> String {
    to_json(&net.to_document())
}

pub fn load_network(path: &Path) -> Result<TradingNetwork, IoError> {
    let doc: NetworkDocument = read_json(path)?;
    TradingNetwork::from_document(&doc).map_err(|e| match e {
        IoError::Model { source, .. } => IoError::Model {
            context: path.display().to_string(),
            source,
        },
        other => other,
    })
}

pub fn save_network(path: &Path, net: &TradingNetwork) -> Result<(), IoError> {
    write_json(path, &net.to_document())
}

pub fn load_outcome(path: &Path, net: &TradingNetwork) -> Result<Outcome, IoError> {
    let doc: OutcomeDocument = read_json(path)?;
    net.outcome_from_document(&doc)
}

pub fn save_outcome(path: &Path, net: &TradingNetwork, a: &Outcome) -> Result<(), IoError> {
    write_json(path, &net.outcome_document(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::{reduce_acyclic_bipartition, reduce_partition_to_instability, Digraph, PartitionInstance};

    const SINGLE: &str = r#"{
  "schema_version": 1,
  "firms": [
    {
      "id": "a",
      "choice": {
        "kind": "terminal"
      }
    },
    {
      "id": "b",
      "choice": {
        "kind": "terminal"
      }
    }
  ],
  "contracts": [
    {
      "id": "x",
      "seller": "a",
      "buyer": "b"
    }
  ]
}
"#;

    #[test]
    fn canonical_single_contract() {
        let net = network_from_json(SINGLE).unwrap();
        assert_eq!(net.firms().filter(|&f| net.is_terminal(f)).count(), 2);
        assert_eq!(network_to_json(&net), SINGLE);
    }

    #[test]
    fn reductions_round_trip() {
        let d = Digraph::indexed(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let (net, _) = reduce_acyclic_bipartition(&d).unwrap();
        assert_eq!((net.firm_count(), net.contract_count()), (20, 30));
        let text = network_to_json(&net);
        assert_eq!(network_to_json(&network_from_json(&text).unwrap()), text);
        let red = reduce_partition_to_instability(&PartitionInstance::new(vec![1, 1, 2]).unwrap()).unwrap();
        let text = network_to_json(&red.network);
        assert_eq!(network_to_json(&network_from_json(&text).unwrap()), text);
    }

    #[test]
    fn rejects_bad_documents() {
        let self_loop = SINGLE.replace("\"buyer\": \"b\"", "\"buyer\": \"a\"");
        assert!(matches!(network_from_json(&self_loop), Err(IoError::Model { .. })));
        let unknown_kind = SINGLE.replacen("\"terminal\"", "\"magic\"", 1);
        let err = network_from_json(&unknown_kind).unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 7, .. }), "{err}");
        let version = SINGLE.replace("\"schema_version\": 1", "\"schema_version\": 9");
        assert!(matches!(network_from_json(&version), Err(IoError::SchemaVersion { found: 9, .. })));
        let dangling = SINGLE.replace("\"seller\": \"a\"", "\"seller\": \"zz\"");
        assert!(matches!(network_from_json(&dangling), Err(IoError::Model { .. })));
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let net = network_from_json(SINGLE).unwrap();
        let path = dir.path().join("net.json");
        save_network(&path, &net).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), SINGLE);
        let back = load_network(&path).unwrap();
        let a = back.all_contracts();
        let opath = dir.path().join("a.json");
        save_outcome(&opath, &back, &a).unwrap();
        assert_eq!(load_outcome(&opath, &back).unwrap(), a);
        assert!(matches!(load_network(&dir.path().join("missing.json")), Err(IoError::File { .. })));
    }
}
