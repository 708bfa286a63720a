//! Exact linear algebra for the coincidence of ordinary and Hadamard matrix powers.
//!
//! The crate works over the rationals and over prime fields GF(p), always with
//! exact arithmetic. Around one decision procedure — does `A^r = A^(r)` hold for
//! every positive integer `r`? — it builds three machine-checkable certificates:
//!
//! * a weighted sum of disjoint idempotent (0,1)-matrices ([`spectral_decompose`]),
//! * the permutation canonical form of an idempotent (0,1)-matrix ([`canonical_form`]),
//! * a biorthogonal rank-one factorization ([`rank_one_decompose`]).
//!
//! Every certificate comes with an independent verifier that trusts nothing about
//! how the certificate was produced.

pub mod canonical;
pub mod coincidence;
pub mod decomposition;
pub mod field;
pub mod fixtures;
pub mod generator;
pub mod matrix;
pub mod perm;
pub mod poly;
pub mod rankone;

pub use canonical::{
    canonical_form, canonical_form_forced, classify_indices, is_idempotent_01,
    reconstruct_idempotent, CanonicalError, CanonicalForm, IndexClassification,
};
pub use coincidence::{
    check_finite, check_poly_equiv, check_up_to, CoincidenceError, CoincidenceReport,
    CoincidenceWitness,
};
pub use decomposition::{
    distinct_nonzero_entries, lagrange_polynomial, power_identity_check, spectral_decompose,
    verify_decomposition, DecomposeError, DecompositionDefect, IdempotentDecomposition,
};
pub use field::{FieldError, FieldSpec, Scalar};
pub use generator::{
    enumerate_small, gen_idempotent01, gen_instance, gen_negative, GenError, GenMode, GenParams,
};
pub use matrix::{poly_eval_hadamard, poly_eval_usual, Matrix, MatrixError};
pub use perm::{Permutation, PermutationError};
pub use poly::Polynomial;
pub use rankone::{
    rank_one_decompose, rank_one_from_certificates, strip_permutation, verify_rank_one,
    RankOneDecomposition, RankOneDefect, RankOneError, StrippedTerm,
};
