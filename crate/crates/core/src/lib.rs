//! Exact linear algebra over prime fields for studying minimum-storage
//! regenerating codes: MSR subspace families, the dimension of spaces of maps
//! fixing them, and the repair schemes of vector MDS codes.

pub mod error;
pub mod field;
pub mod invariant;
pub mod matrix;
pub mod msr_family;
pub mod oracle;
pub mod repair;
pub mod selftest;
pub mod subspace;
pub mod sweep;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use invariant::{decay_trace, invariant_dim, invariant_space, decay_isomorphism_check, DecayTrace, MapConstraint, PrefixOrder};
pub use matrix::{Matrix, Rref};
pub use msr_family::{construct_tensor_family, BoundReport, MsrSubspaceFamily, VerificationReport};
pub use repair::{
    check_msr_scheme, cutset_bound, extract_family, repair_node, BandwidthReport, ConstantRepairScheme,
    GeneralRepairScheme, RepairScheme, SchemeReport, VectorCodeSystematic,
};
pub use subspace::Subspace;
