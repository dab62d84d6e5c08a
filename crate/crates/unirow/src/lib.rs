//! Exact normal forms and equivalence of unimodular rows over quasi-Euclidean
//! rings.
//!
//! The library works with finitely generated modules over the integers,
//! integers modulo n, univariate polynomials over a prime field, and finite
//! products of these. It provides:
//!
//! - exact ring and ideal arithmetic ([`ring`]), including single-row
//!   cancellation to `(d, 0, ..., 0)` by elementary operations;
//! - matrices, elementary operation scripts and Smith normal form with
//!   transformation matrices ([`matrix`]);
//! - invariant factor modules, row tuples and unimodularity ([`module`]);
//! - constructive normalization of unimodular rows to the canonical form
//!   `(delta e_1, e_2, ..., e_k, 0, ..., 0)` with replayable witness scripts
//!   ([`normalize`]);
//! - the determinant invariant deciding elementary equivalence at minimal
//!   length ([`invariant`]);
//! - Nielsen equivalence of generating tuples of finite Abelian groups,
//!   class counts via the extended Euler totient, and explicit move
//!   witnesses ([`nielsen`]);
//! - a brute-force breadth-first orbit oracle for small finite modules
//!   ([`oracle`]);
//! - JSON serialization and a command-line surface ([`json`], [`cli`]).
//!
//! Every decision procedure that answers "equivalent" produces a witness that
//! replays the claimed transformation exactly; all arithmetic is exact.

pub mod cli;
pub mod error;
pub mod invariant;
pub mod json;
pub mod matrix;
pub mod module;
pub mod nielsen;
pub mod normalize;
pub mod oracle;
pub mod ring;

pub use error::{Error, Result};
pub use invariant::{are_e_equivalent, det_invariant, orbit_count, Cardinal, DetInvariant};
pub use matrix::{
    apply_script, determinant, smith_normal_form, whitehead_factorization, ElementaryOp,
    ElementaryScript, ExactMatrix, Side,
};
pub use module::{
    canonical_row, is_unimodular, module_from_relations, relation_ideal, InvariantFactorModule,
    ModuleElement, RowTuple,
};
pub use nielsen::{
    are_nielsen_equivalent, euler_phi, expand_script, nielsen_class_count, nielsen_classes,
    NielsenClassReport, NielsenMove, NielsenMoveSequence, NielsenWitness,
};
pub use normalize::{normalize_row, triangularize, unit_transfer, NormalizationResult};
pub use oracle::{
    enumerate_module_elements, enumerate_unimodular, orbit_partition, GeneratorSet,
    OrbitPartition, DEFAULT_BUDGET,
};
pub use ring::{
    extended_gcd, inverse_mod, quotient_lift, row_cancel, whitehead_ops, Elem, PrincipalIdeal,
    Ring,
};
