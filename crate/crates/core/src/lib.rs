//! Exact tools for trading networks with bilateral contracts and fully
//! substitutable choice functions.
//!
//! The crate computes trail-stable outcomes by deferred acceptance, decides
//! and witnesses trail, weak trail, path-or-cycle and set stability, and
//! generates the acyclic-bipartition and Partition hardness instances with
//! brute-force oracles for their source problems.

pub mod choice;
pub mod dot;
pub mod error;
pub mod generate;
pub mod io;
pub mod model;
pub mod reduce;
pub mod solve;

pub use choice::{ChoiceFunction, ChoiceSpec};
pub use error::{GenerateError, IoError, ModelError, ReduceError, SolveError};
pub use model::{Contract, ContractId, ContractSequence, FirmId, NetworkBuilder, Outcome, SequenceKind, TradingNetwork};
