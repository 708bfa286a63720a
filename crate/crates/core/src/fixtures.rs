//! Small matrices shared by tests, docs and benches.

use crate::field::Scalar;
use crate::matrix::Matrix;

/// A 4x4 weighted sum of two disjoint rank-one idempotents:
///
/// ```text
/// [ a 0 0 0 ]
/// [ 0 b 0 b ]        a * (1,0,1,0)^T (1,0,0,0)
/// [ a b 0 b ]  =   + b * (0,1,1,0)^T (0,1,0,1)
/// [ 0 0 0 0 ]
/// ```
///
/// For any nonzero weights its ordinary powers coincide with its Hadamard
/// powers, yet no permutation similarity makes it block diagonal with one
/// block per weight.
pub fn disjoint_pair_4x4(a: &Scalar, b: &Scalar) -> Matrix {
    assert!(a.field() == b.field(), "weights from different fields");
    let field = a.field();
    let zero = field.zero();
    let rows = vec![
        vec![a.clone(), zero.clone(), zero.clone(), zero.clone()],
        vec![zero.clone(), b.clone(), zero.clone(), b.clone()],
        vec![a.clone(), b.clone(), zero.clone(), b.clone()],
        vec![zero.clone(), zero.clone(), zero.clone(), zero.clone()],
    ];
    Matrix::from_rows(field, rows).expect("rows are rectangular")
}

/// The first idempotent of [`disjoint_pair_4x4`]: (1,0,1,0)^T (1,0,0,0).
pub fn disjoint_pair_e1(field: &crate::field::FieldSpec) -> Matrix {
    Matrix::from_i64_rows(
        field,
        &[&[1, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0]],
    )
}

/// The second idempotent of [`disjoint_pair_4x4`]: (0,1,1,0)^T (0,1,0,1).
pub fn disjoint_pair_e2(field: &crate::field::FieldSpec) -> Matrix {
    Matrix::from_i64_rows(
        field,
        &[&[0, 0, 0, 0], &[0, 1, 0, 1], &[0, 1, 0, 1], &[0, 0, 0, 0]],
    )
}
