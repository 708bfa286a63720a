//! Permutation canonical form of an idempotent (0,1)-matrix.
//!
//! Indices are split into four classes by the zero-pattern of their row and
//! column; sorting the classes to the front exposes the block shape
//!
//! ```text
//! [ I  U  0  0 ]
//! [ 0  0  0  0 ]
//! [ V  VU 0  0 ]
//! [ 0  0  0  0 ]
//! ```
//!
//! with U free of zero columns, V free of zero rows, and VU again a
//! (0,1)-matrix. The block extraction is only valid when the field
//! characteristic is zero or larger than n; a forced entry point runs it
//! anyway so the small-characteristic failure can be demonstrated.

use std::fmt;

use num::BigUint;

use crate::matrix::{Matrix, MatrixError};
use crate::perm::Permutation;

/// The four-way split of indices by the zero-pattern of row i and column i.
/// Each list is ascending; together they partition `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexClassification {
    /// Row and column both nonzero.
    pub both: Vec<usize>,
    /// Row zero, column nonzero.
    pub col_only: Vec<usize>,
    /// Row nonzero, column zero.
    pub row_only: Vec<usize>,
    /// Row and column both zero.
    pub neither: Vec<usize>,
}

impl IndexClassification {
    /// The classes concatenated in order, i.e. the inverse image list of the
    /// canonical permutation.
    pub fn concatenated(&self) -> Vec<usize> {
        let mut order = self.both.clone();
        order.extend(&self.col_only);
        order.extend(&self.row_only);
        order.extend(&self.neither);
        order
    }

    /// The permutation sending the concatenated classes to positions `0..n`.
    pub fn permutation(&self) -> Permutation {
        let order = self.concatenated();
        let mut images = vec![0; order.len()];
        for (pos, &orig) in order.iter().enumerate() {
            images[orig] = pos;
        }
        Permutation::from_images(images).expect("classes partition the index set")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalError {
    NonSquare {
        rows: usize,
        cols: usize,
    },
    NotIdempotent01,
    /// The characteristic is a prime not exceeding n, where the block form
    /// can break down.
    CharTooSmall {
        p: BigUint,
        n: usize,
    },
    /// A block of the permuted matrix is not what the canonical form demands;
    /// reachable only when the characteristic gate is bypassed.
    StructureViolation {
        block: &'static str,
        row: usize,
        col: usize,
    },
    /// U has a zero column (rejected at construction).
    UZeroColumn {
        col: usize,
    },
    /// V has a zero row (rejected at construction).
    VZeroRow {
        row: usize,
    },
    /// VU has an entry outside {0, 1} (rejected at construction).
    ProductEntryNotZeroOne {
        row: usize,
        col: usize,
    },
    /// U or V has an entry outside {0, 1}.
    BlockNotZeroOne {
        block: &'static str,
    },
    FieldMismatch,
    Dimension {
        detail: String,
    },
}

impl fmt::Display for CanonicalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalError::NonSquare { rows, cols } => {
                write!(f, "canonical form requires a square matrix, got {rows}x{cols}")
            }
            CanonicalError::NotIdempotent01 => {
                write!(f, "input is not an idempotent (0,1)-matrix")
            }
            CanonicalError::CharTooSmall { p, n } => {
                write!(f, "characteristic {p} does not exceed n = {n}")
            }
            CanonicalError::StructureViolation { block, row, col } => write!(
                f,
                "block {block} violates the canonical shape at ({}, {})",
                row + 1,
                col + 1
            ),
            CanonicalError::UZeroColumn { col } => {
                write!(f, "U has a zero column at {}", col + 1)
            }
            CanonicalError::VZeroRow { row } => write!(f, "V has a zero row at {}", row + 1),
            CanonicalError::ProductEntryNotZeroOne { row, col } => write!(
                f,
                "VU has a non-(0,1) entry at ({}, {})",
                row + 1,
                col + 1
            ),
            CanonicalError::BlockNotZeroOne { block } => {
                write!(f, "block {block} has an entry outside {{0, 1}}")
            }
            CanonicalError::FieldMismatch => write!(f, "blocks live in different fields"),
            CanonicalError::Dimension { detail } => write!(f, "inconsistent dimensions: {detail}"),
        }
    }
}

impl std::error::Error for CanonicalError {}

impl From<MatrixError> for CanonicalError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::NonSquare { rows, cols } => CanonicalError::NonSquare { rows, cols },
            other => CanonicalError::Dimension {
                detail: other.to_string(),
            },
        }
    }
}

/// The canonical-form certificate: permutation, rank, and the U, V blocks
/// (W = VU is derived). Constructing one revalidates every block invariant,
/// so an invalid certificate is unrepresentable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    sigma: Permutation,
    m: usize,
    u: Matrix,
    v: Matrix,
    w: Matrix,
}

impl CanonicalForm {
    /// Validates and assembles a certificate. `u` must be m x s2 with no zero
    /// columns, `v` must be s3 x m with no zero rows, both (0,1); their
    /// product must again be (0,1); and the four class sizes must fit inside
    /// `sigma`'s index range.
    pub fn new(
        sigma: Permutation,
        m: usize,
        u: Matrix,
        v: Matrix,
    ) -> Result<Self, CanonicalError> {
        if u.field() != v.field() {
            return Err(CanonicalError::FieldMismatch);
        }
        if u.rows() != m {
            return Err(CanonicalError::Dimension {
                detail: format!("U has {} rows, expected m = {m}", u.rows()),
            });
        }
        if v.cols() != m {
            return Err(CanonicalError::Dimension {
                detail: format!("V has {} columns, expected m = {m}", v.cols()),
            });
        }
        if m + u.cols() + v.rows() > sigma.n() {
            return Err(CanonicalError::Dimension {
                detail: format!(
                    "m + s2 + s3 = {} exceeds n = {}",
                    m + u.cols() + v.rows(),
                    sigma.n()
                ),
            });
        }
        if !u.is_zero_one() {
            return Err(CanonicalError::BlockNotZeroOne { block: "U" });
        }
        if !v.is_zero_one() {
            return Err(CanonicalError::BlockNotZeroOne { block: "V" });
        }
        for col in 0..u.cols() {
            if u.col_is_zero(col) {
                return Err(CanonicalError::UZeroColumn { col });
            }
        }
        for row in 0..v.rows() {
            if v.row_is_zero(row) {
                return Err(CanonicalError::VZeroRow { row });
            }
        }
        let w = v.mat_mul(&u).expect("inner dimension m matches");
        for row in 0..w.rows() {
            for col in 0..w.cols() {
                if !w.get(row, col).is_zero_or_one() {
                    return Err(CanonicalError::ProductEntryNotZeroOne { row, col });
                }
            }
        }
        Ok(CanonicalForm { sigma, m, u, v, w })
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    /// Rank of the idempotent; also the size of the identity block.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    /// The derived product block W = VU.
    pub fn w(&self) -> &Matrix {
        &self.w
    }

    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    /// Sizes of the four index classes: [m, s2, s3, s4].
    pub fn class_sizes(&self) -> [usize; 4] {
        let s2 = self.u.cols();
        let s3 = self.v.rows();
        [self.m, s2, s3, self.n() - self.m - s2 - s3]
    }
}

/// Splits indices by the zero-pattern of their row and column.
pub fn classify_indices(e: &Matrix) -> Result<IndexClassification, CanonicalError> {
    if !e.is_square() {
        return Err(CanonicalError::NonSquare {
            rows: e.rows(),
            cols: e.cols(),
        });
    }
    let mut classes = IndexClassification {
        both: Vec::new(),
        col_only: Vec::new(),
        row_only: Vec::new(),
        neither: Vec::new(),
    };
    for i in 0..e.rows() {
        let row_nonzero = !e.row_is_zero(i);
        let col_nonzero = !e.col_is_zero(i);
        match (row_nonzero, col_nonzero) {
            (true, true) => classes.both.push(i),
            (false, true) => classes.col_only.push(i),
            (true, false) => classes.row_only.push(i),
            (false, false) => classes.neither.push(i),
        }
    }
    Ok(classes)
}

/// True iff every entry is 0 or 1 and `E^2 = E`. Non-square input is simply
/// not an idempotent (0,1)-matrix.
pub fn is_idempotent_01(e: &Matrix) -> bool {
    e.is_square() && e.is_zero_one() && e.mat_mul(e).expect("square").eq(e)
}

/// Computes the canonical form; requires an idempotent (0,1)-matrix and a
/// characteristic that is zero or larger than n.
pub fn canonical_form(e: &Matrix) -> Result<CanonicalForm, CanonicalError> {
    canonical_form_impl(e, true)
}

/// Same extraction with the characteristic gate bypassed, to demonstrate the
/// small-characteristic counterexamples; expect `StructureViolation`.
pub fn canonical_form_forced(e: &Matrix) -> Result<CanonicalForm, CanonicalError> {
    canonical_form_impl(e, false)
}

fn canonical_form_impl(e: &Matrix, enforce_char: bool) -> Result<CanonicalForm, CanonicalError> {
    if !e.is_square() {
        return Err(CanonicalError::NonSquare {
            rows: e.rows(),
            cols: e.cols(),
        });
    }
    if !is_idempotent_01(e) {
        return Err(CanonicalError::NotIdempotent01);
    }
    let n = e.rows();
    if enforce_char && !e.field().characteristic_admits(n) {
        return Err(CanonicalError::CharTooSmall {
            p: e.field().characteristic(),
            n,
        });
    }

    let classes = classify_indices(e)?;
    let sigma = classes.permutation();
    let m = classes.both.len();
    let s2 = classes.col_only.len();
    let s3 = classes.row_only.len();
    let b = e.permute_similarity(&sigma)?;

    // Top-left block must be the identity.
    for row in 0..m {
        for col in 0..m {
            let expect_one = row == col;
            if b.get(row, col).is_one() != expect_one {
                return Err(CanonicalError::StructureViolation {
                    block: "T",
                    row,
                    col,
                });
            }
        }
    }

    let field = e.field();
    let mut u = Matrix::zero(field, m, s2);
    for row in 0..m {
        for col in 0..s2 {
            u.set(row, col, b.get(row, m + col).clone());
        }
    }
    let mut v = Matrix::zero(field, s3, m);
    let mut w = Matrix::zero(field, s3, s2);
    for row in 0..s3 {
        for col in 0..m {
            v.set(row, col, b.get(m + s2 + row, col).clone());
        }
        for col in 0..s2 {
            w.set(row, col, b.get(m + s2 + row, m + col).clone());
        }
    }

    let cf = CanonicalForm::new(sigma, m, u, v)?;
    // The extracted W block must agree with the recomputed product VU.
    for row in 0..s3 {
        for col in 0..s2 {
            if cf.w().get(row, col) != w.get(row, col) {
                return Err(CanonicalError::StructureViolation {
                    block: "W",
                    row,
                    col,
                });
            }
        }
    }
    Ok(cf)
}

/// Rebuilds the idempotent from its certificate as the outer product
/// `[I; 0; V; 0] * [I U 0 0]` pulled back through the permutation.
pub fn reconstruct_idempotent(cf: &CanonicalForm, n: usize) -> Result<Matrix, CanonicalError> {
    if n != cf.n() {
        return Err(CanonicalError::Dimension {
            detail: format!("certificate is for n = {}, requested {n}", cf.n()),
        });
    }
    let field = cf.u().field();
    let [m, s2, s3, _s4] = cf.class_sizes();

    let mut left = Matrix::zero(field, n, m);
    for i in 0..m {
        left.set(i, i, field.one());
    }
    for row in 0..s3 {
        for col in 0..m {
            left.set(m + s2 + row, col, cf.v().get(row, col).clone());
        }
    }

    let mut right = Matrix::zero(field, m, n);
    for i in 0..m {
        right.set(i, i, field.one());
    }
    for row in 0..m {
        for col in 0..s2 {
            right.set(row, m + col, cf.u().get(row, col).clone());
        }
    }

    let block = left.mat_mul(&right)?;
    Ok(block.permute_similarity(&cf.sigma().inverse())?)
}
