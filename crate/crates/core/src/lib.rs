//! Dualization of monotone CNFs.
//!
//! This crate enumerates the prime implicants of a monotone CNF — the
//! minimal transversals of its clause hypergraph — in a canonical order,
//! analyzes the structure of inputs (degeneracy, read number, acyclicity,
//! tree-width of the incidence graph) to pick orderings with good delay
//! guarantees, and decides duality of a pair of monotone CNFs with the
//! Fredman–Khachiyan procedures, producing compact verifiable certificates
//! for non-dual pairs.

pub mod cnf;
pub mod enumerate;
pub mod fk;
pub mod generate;
pub mod oracle;
pub mod structure;
pub mod varset;

pub use cnf::{
    delta_conditioned, minimize_sets, term_key, Assignment, Clause, CnfError, CompactionMap,
    MonotoneCnf, Reduced, Term, VariableOrdering,
};
pub use varset::{Overlap, VarSet, MAX_VARS};
