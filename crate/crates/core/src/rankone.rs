//! Biorthogonal rank-one factorization.
//!
//! For a matrix with coinciding powers over an admissible characteristic,
//! `P A P^T = sum_{i=1}^m mu_i v_i u_i^T` where the `u_i^T` are the rows of
//! `[I U 0 0]`, the `v_i` are the columns of `[I; 0; V; 0]`, and
//! `u_i^T v_j = delta_ij`. The weights repeat the spectral weights, one copy
//! per unit of rank of the corresponding idempotent.

use std::fmt;

use crate::canonical::{canonical_form, CanonicalError, CanonicalForm};
use crate::decomposition::{spectral_decompose, DecomposeError, IdempotentDecomposition};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use crate::perm::Permutation;

/// Certificate data: `permute_similarity(A, sigma) = sum_i mus[i] * vs[i] us[i]^T`.
///
/// Vectors are stored directly, never as block matrices; fields are public so
/// external (possibly tampered) certificates can be represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneDecomposition {
    pub field: FieldSpec,
    pub sigma: Permutation,
    /// Nonzero weights in diagonal-position order; repeats allowed.
    pub mus: Vec<Scalar>,
    /// Row vectors of length n with entries in {0, 1}.
    pub us: Vec<Vec<Scalar>>,
    /// Column vectors of length n with entries in {0, 1}.
    pub vs: Vec<Vec<Scalar>>,
}

impl RankOneDecomposition {
    /// The factorization length, equal to the rank.
    pub fn m(&self) -> usize {
        self.mus.len()
    }

    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    /// `sum_i mus[i] * vs[i] us[i]^T`.
    pub fn reconstruct_permuted(&self) -> Matrix {
        let n = self.n();
        let mut out = Matrix::zero(&self.field, n, n);
        for ((mu, v), u) in self.mus.iter().zip(&self.vs).zip(&self.us) {
            for (r, ve) in v.iter().enumerate() {
                if ve.is_zero() {
                    continue;
                }
                let weight = mu * ve;
                for (c, ue) in u.iter().enumerate() {
                    if ue.is_zero() {
                        continue;
                    }
                    let add = &weight * ue;
                    let cur = out.get(r, c).clone();
                    out.set(r, c, &cur + &add);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankOneError {
    Decompose(DecomposeError),
    Canonical(CanonicalError),
    /// Construction produced data that failed self-verification; a bug.
    InternalContradiction(String),
}

impl fmt::Display for RankOneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankOneError::Decompose(e) => write!(f, "{e}"),
            RankOneError::Canonical(e) => write!(f, "{e}"),
            RankOneError::InternalContradiction(msg) => {
                write!(f, "constructed factorization failed verification: {msg}")
            }
        }
    }
}

impl std::error::Error for RankOneError {}

impl From<DecomposeError> for RankOneError {
    fn from(e: DecomposeError) -> Self {
        RankOneError::Decompose(e)
    }
}

impl From<CanonicalError> for RankOneError {
    fn from(e: CanonicalError) -> Self {
        RankOneError::Canonical(e)
    }
}

/// Row `i` of `[I U 0 0]` for the given canonical form.
fn basis_row(cf: &CanonicalForm, i: usize) -> Vec<Scalar> {
    let field = cf.u().field();
    let [m, s2, _, _] = cf.class_sizes();
    let mut u = vec![field.zero(); cf.n()];
    u[i] = field.one();
    for col in 0..s2 {
        u[m + col] = cf.u().get(i, col).clone();
    }
    u
}

/// Column `i` of `[I; 0; V; 0]` for the given canonical form.
fn basis_col(cf: &CanonicalForm, i: usize) -> Vec<Scalar> {
    let field = cf.v().field();
    let [m, s2, s3, _] = cf.class_sizes();
    let mut v = vec![field.zero(); cf.n()];
    v[i] = field.one();
    for row in 0..s3 {
        v[m + s2 + row] = cf.v().get(row, i).clone();
    }
    v
}

/// Builds the rank-one factorization by composing the spectral decomposition
/// with the canonical form of the summed idempotent. The weight of position
/// `i` is the spectral weight of the unique idempotent with a 1 at diagonal
/// position `i` of the permuted frame. Verified before returning.
pub fn rank_one_decompose(a: &Matrix) -> Result<RankOneDecomposition, RankOneError> {
    let d = spectral_decompose(a)?;
    let e = d.idempotent_sum();
    let cf = canonical_form(&e)?;
    rank_one_from_certificates(a, &d, &cf)
}

/// Assembles the factorization from an existing spectral decomposition of `a`
/// and the canonical form of its summed idempotent, then verifies it.
pub fn rank_one_from_certificates(
    a: &Matrix,
    d: &IdempotentDecomposition,
    cf: &CanonicalForm,
) -> Result<RankOneDecomposition, RankOneError> {
    let rod = assemble(a, d, cf)?;
    if let Some(defect) = verify_rank_one(&rod, a).into_iter().next() {
        return Err(RankOneError::InternalContradiction(defect.to_string()));
    }
    Ok(rod)
}

fn assemble(
    a: &Matrix,
    d: &IdempotentDecomposition,
    cf: &CanonicalForm,
) -> Result<RankOneDecomposition, RankOneError> {
    let m = cf.m();
    let inv = cf.sigma().inverse();
    let mut mus = Vec::with_capacity(m);
    for i in 0..m {
        // Diagonal position i of the permuted frame is original index inv(i);
        // disjointness makes the owning idempotent unique.
        let orig = inv.apply(i);
        let owner = d
            .idempotents
            .iter()
            .position(|e| e.get(orig, orig).is_one())
            .ok_or_else(|| {
                RankOneError::InternalContradiction(format!(
                    "no idempotent owns diagonal position {i}"
                ))
            })?;
        mus.push(d.lambdas[owner].clone());
    }
    let us = (0..m).map(|i| basis_row(cf, i)).collect();
    let vs = (0..m).map(|i| basis_col(cf, i)).collect();
    Ok(RankOneDecomposition {
        field: a.field().clone(),
        sigma: cf.sigma().clone(),
        mus,
        us,
        vs,
    })
}

/// One `mu_i, v_i, u_i` term with coordinates pulled back through the
/// permutation, so that `A = sum_i mu_i v_i u_i^T` directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrippedTerm {
    pub mu: Scalar,
    pub v: Vec<Scalar>,
    pub u: Vec<Scalar>,
}

/// Eliminates the permutation: `u~_i[t] = u_i[sigma(t)]` and likewise for v.
pub fn strip_permutation(rod: &RankOneDecomposition) -> Vec<StrippedTerm> {
    let n = rod.n();
    rod.mus
        .iter()
        .zip(&rod.vs)
        .zip(&rod.us)
        .map(|((mu, v), u)| StrippedTerm {
            mu: mu.clone(),
            v: (0..n).map(|t| v[rod.sigma.apply(t)].clone()).collect(),
            u: (0..n).map(|t| u[rod.sigma.apply(t)].clone()).collect(),
        })
        .collect()
}

/// A reason the verifier rejects a rank-one certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankOneDefect {
    ShapeMismatch,
    FieldMismatch,
    ZeroWeight { i: usize },
    /// An entry of u_i or v_i outside {0, 1}.
    VectorNotZeroOne { kind: char, i: usize, pos: usize },
    /// `u_i^T v_j != delta_ij`.
    BiorthogonalityViolation { i: usize, j: usize },
    ReconstructionMismatch { row: usize, col: usize },
}

impl fmt::Display for RankOneDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankOneDefect::ShapeMismatch => write!(f, "shape mismatch"),
            RankOneDefect::FieldMismatch => write!(f, "field mismatch"),
            RankOneDefect::ZeroWeight { i } => write!(f, "weight {} is zero", i + 1),
            RankOneDefect::VectorNotZeroOne { kind, i, pos } => write!(
                f,
                "{kind}_{} has a non-(0,1) entry at position {}",
                i + 1,
                pos + 1
            ),
            RankOneDefect::BiorthogonalityViolation { i, j } => {
                write!(f, "u_{}^T v_{} != {}", i + 1, j + 1, usize::from(i == j))
            }
            RankOneDefect::ReconstructionMismatch { row, col } => write!(
                f,
                "rank-one reconstruction mismatch at ({}, {})",
                row + 1,
                col + 1
            ),
        }
    }
}

/// Independently rechecks biorthogonality, (0,1)-ness, nonzero weights and
/// the reconstruction against `a`; no reliance on construction internals.
pub fn verify_rank_one(rod: &RankOneDecomposition, a: &Matrix) -> Vec<RankOneDefect> {
    let mut defects = Vec::new();
    let n = rod.n();
    let m = rod.m();
    if !a.is_square()
        || a.rows() != n
        || rod.us.len() != m
        || rod.vs.len() != m
        || rod.us.iter().any(|u| u.len() != n)
        || rod.vs.iter().any(|v| v.len() != n)
    {
        return vec![RankOneDefect::ShapeMismatch];
    }
    if rod.field != *a.field()
        || rod.mus.iter().any(|s| s.field() != a.field())
        || rod.us.iter().flatten().any(|s| s.field() != a.field())
        || rod.vs.iter().flatten().any(|s| s.field() != a.field())
    {
        return vec![RankOneDefect::FieldMismatch];
    }

    for (i, mu) in rod.mus.iter().enumerate() {
        if mu.is_zero() {
            defects.push(RankOneDefect::ZeroWeight { i });
        }
    }
    for (i, u) in rod.us.iter().enumerate() {
        if let Some(pos) = u.iter().position(|s| !s.is_zero_or_one()) {
            defects.push(RankOneDefect::VectorNotZeroOne { kind: 'u', i, pos });
        }
    }
    for (i, v) in rod.vs.iter().enumerate() {
        if let Some(pos) = v.iter().position(|s| !s.is_zero_or_one()) {
            defects.push(RankOneDefect::VectorNotZeroOne { kind: 'v', i, pos });
        }
    }

    for (i, u) in rod.us.iter().enumerate() {
        for (j, v) in rod.vs.iter().enumerate() {
            let mut dot = rod.field.zero();
            for (ue, ve) in u.iter().zip(v) {
                if !ue.is_zero() && !ve.is_zero() {
                    dot = &dot + &(ue * ve);
                }
            }
            let expected_one = i == j;
            if dot.is_one() != expected_one || (!expected_one && !dot.is_zero()) {
                defects.push(RankOneDefect::BiorthogonalityViolation { i, j });
            }
        }
    }

    let target = match a.permute_similarity(&rod.sigma) {
        Ok(t) => t,
        Err(_) => return vec![RankOneDefect::ShapeMismatch],
    };
    let sum = rod.reconstruct_permuted();
    'recon: for row in 0..n {
        for col in 0..n {
            if sum.get(row, col) != target.get(row, col) {
                defects.push(RankOneDefect::ReconstructionMismatch { row, col });
                break 'recon;
            }
        }
    }
    defects
}
