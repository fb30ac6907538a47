//! Exact verification toolkit for (2,3)-generating pairs of `SL_12(q)`.
//!
//! Modules, bottom up: [`ff`] finite fields, [`perm`] permutations, [`matq`]
//! matrices over `F_q`, [`gens`] the generator pairs and their words,
//! [`action`] orbits and stabilizer chains, [`certify`] per-claim checks
//! producing [`report::CertificateReport`]s.

pub mod action;
pub mod certify;
pub mod error;
pub mod ff;
pub mod gens;
pub mod matq;
pub mod perm;
pub mod report;

pub use error::{ActionError, CertifyError, FieldError, GensError, MatrixError};
pub use ff::{generates_field, in_prime_subfield, make_field, Field, FieldElement, FieldSpec};
pub use matq::{commutator, conjugate, Matrix, SignedPermutation};
pub use perm::Permutation;
pub use report::{CertificateReport, Check, Verdict};
