//! Hardness constructions with witness translations and brute-force
//! oracles for their source problems.

mod bipartition;
mod digraph;
mod oracle_bound;
mod partition;

pub use bipartition::{
    bipartition_to_outcome, outcome_to_bipartition, reduce_acyclic_bipartition, solve_acyclic_bipartition, ArcContracts, ArcDocument,
    Bipartition, Gadget, GadgetContracts, GadgetDocument, ReductionMap, ReductionMapDocument, BIPARTITION_CAP,
};
pub use digraph::{Digraph, DigraphDocument};
pub use oracle_bound::{oracle_lower_bound_experiment, oracle_network, HiddenSetCheck, OracleReport, ORACLE_EXPERIMENT_CAP};
pub use partition::{reduce_partition_to_instability, solve_partition, PartitionInstance, PartitionReduction, PARTITION_CAP};
