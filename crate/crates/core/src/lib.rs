//! Composition-method toolkit for monadic second-order logic on chains and
//! trees.
//!
//! Theories of bounded quantifier depth are hereditarily finite objects.
//! This crate computes them by brute force on finite structures, composes
//! them along sums (finite, ω-indexed and generalized), and builds on that
//! to experiment with ordinals below ω^ω, scattered chains, tame trees and
//! uniformization.

pub mod a2;
pub mod chain_term;
pub mod composition;
pub mod determination;
pub mod error;
pub mod eval;
pub mod formula;
pub mod semigroup;
pub mod ordinal;
pub mod partition;
pub mod serial;
pub mod structure;
pub mod theory;
pub mod tree;
pub mod types;
pub mod uniformize;
pub mod wellorder;

pub use eval::{
    characteristic_formula, decide, decide_in, drop_var, eval_named, eval_theory, insert_empty_var,
    project, reduce,
};
pub use formula::{parse, Formula, ParseError, VariableContext};
pub use serial::{parse_theory, serialize};
pub use structure::{model_check, FiniteStructure, Mask};
pub use theory::{AtomType, Budget, Theory, TheoryError};
pub use types::{enumerate_types, is_formally_possible, TypeSpace};
pub use composition::{
    add, generalized_sum, omega_power, omega_power_tower, omega_sum, sum_finite, TheorySequence,
    Tower,
};
pub use semigroup::{additive_ramsey, idempotent_power, AdditiveColoring, SemigroupTable};
pub use ordinal::{log_of, ord_add, ord_cmp, ord_left_sub, ord_mul, OrdinalCnf, OrdinalError};
pub use partition::{
    compose_partitions, decomposition_search, partition_order_type, theory_of_ordinal, Interval,
    IntervalPartition,
};
pub use chain_term::{Address, ChainError, ChainTerm};
pub use wellorder::{
    evaluate, intended_type, rank, synthesize_wellorder, verify_wellorder, ParamPattern, VerifyReport,
    WellOrderCertificate,
};
pub use a2::{a2_wellorder, A2WellOrder};
pub use determination::{determination_experiment, full_corpus, DeterminationReport, KeyAblation};
pub use error::Error;
pub use tree::{
    cut_decomposition, sim_classes, tameness_profile, tree_corpus, tree_sum, FiniteTree, SimLevel,
    TamenessProfile, TreeDecomposition, TreeError,
};
pub use uniformize::{
    check_pu, lex_uniformize, product_uniformize, swap_test, tree_uniformize, UniformizeError,
    Uniformizer,
};
