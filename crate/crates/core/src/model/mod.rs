//! Firms, contracts, outcomes and the definitional predicates every solver
//! builds on.

mod network;
mod outcome;
mod sequence;

pub use network::{NetworkBuilder, TradingNetwork};
pub use outcome::{Contract, ContractId, FirmId, Outcome};
pub use sequence::{ContractSequence, SequenceKind};
