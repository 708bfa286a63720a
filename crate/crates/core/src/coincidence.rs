//! Deciding whether ordinary powers coincide with Hadamard powers.
//!
//! For an n x n nonzero matrix it suffices to compare `A^r` with `A^(r)` for
//! `r = 2, ..., n+1`; [`check_up_to`] exists so that tests can probe the
//! equivalence with the unbounded statement empirically.

use std::fmt;

use crate::field::Scalar;
use crate::matrix::{poly_eval_hadamard, poly_eval_usual, Matrix, MatrixError};
use crate::poly::Polynomial;

/// The first power and position where `A^r` and `A^(r)` disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidenceWitness {
    /// Failing exponent, smallest first.
    pub r: usize,
    /// 0-based row of the first mismatch in row-major order.
    pub row: usize,
    /// 0-based column of the first mismatch.
    pub col: usize,
    /// Entry of the ordinary power `A^r`.
    pub lhs: Scalar,
    /// Entry of the Hadamard power `A^(r)`.
    pub rhs: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidenceReport {
    pub holds: bool,
    /// Present exactly when `holds` is false.
    pub witness: Option<CoincidenceWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoincidenceError {
    NonSquare { rows: usize, cols: usize },
    /// The zero matrix is outside the hypothesis of the characterization.
    ZeroMatrix,
    /// The power bound must be at least 2.
    BoundTooSmall { bound: usize },
}

impl fmt::Display for CoincidenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoincidenceError::NonSquare { rows, cols } => {
                write!(f, "coincidence check requires a square matrix, got {rows}x{cols}")
            }
            CoincidenceError::ZeroMatrix => write!(f, "the zero matrix is rejected"),
            CoincidenceError::BoundTooSmall { bound } => {
                write!(f, "power bound {bound} is below 2")
            }
        }
    }
}

impl std::error::Error for CoincidenceError {}

/// Checks `A^r = A^(r)` for `r = 2, ..., n+1`, which settles the property for
/// all positive exponents. Powers are computed incrementally; the witness is
/// the lexicographically first failure (smallest `r`, then row-major).
pub fn check_finite(a: &Matrix) -> Result<CoincidenceReport, CoincidenceError> {
    check_up_to(a, a.rows() + 1)
}

/// Same scan as [`check_finite`] but over `r = 2, ..., max_power`.
pub fn check_up_to(a: &Matrix, max_power: usize) -> Result<CoincidenceReport, CoincidenceError> {
    if !a.is_square() {
        return Err(CoincidenceError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.is_zero() {
        return Err(CoincidenceError::ZeroMatrix);
    }
    if max_power < 2 {
        return Err(CoincidenceError::BoundTooSmall { bound: max_power });
    }
    let mut pow = a.clone();
    let mut hpow = a.clone();
    for r in 2..=max_power {
        pow = pow.mat_mul(a).expect("square matrices of equal size");
        hpow = hpow.hadamard_mul(a).expect("same shape");
        for row in 0..a.rows() {
            for col in 0..a.cols() {
                let lhs = pow.get(row, col);
                let rhs = hpow.get(row, col);
                if lhs != rhs {
                    return Ok(CoincidenceReport {
                        holds: false,
                        witness: Some(CoincidenceWitness {
                            r,
                            row,
                            col,
                            lhs: lhs.clone(),
                            rhs: rhs.clone(),
                        }),
                    });
                }
            }
        }
    }
    Ok(CoincidenceReport {
        holds: true,
        witness: None,
    })
}

/// True iff `p(A) = p^H(A)` for the given constant-term-free polynomial.
pub fn check_poly_equiv(a: &Matrix, p: &Polynomial) -> Result<bool, MatrixError> {
    Ok(poly_eval_usual(p, a)? == poly_eval_hadamard(p, a)?)
}
