//! The disjoint-idempotent certificate and its independent verifier.
//!
//! A matrix whose ordinary powers coincide with its Hadamard powers is a
//! weighted sum `A = sum_i lambda_i E_i` of idempotent (0,1)-matrices with
//! `E_i E_j = E_i o E_j = 0` for `i != j`. [`spectral_decompose`] builds the
//! certificate through Lagrange interpolation at the distinct nonzero entries;
//! [`verify_decomposition`] rechecks it from scratch using nothing but matrix
//! products, so the two paths stay independently trustworthy.

use std::fmt;

use crate::coincidence::{check_finite, CoincidenceError, CoincidenceWitness};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{poly_eval_usual, Matrix};
use crate::poly::Polynomial;

/// Certificate data: `A = sum_i lambdas[i] * idempotents[i]`.
///
/// Fields are public so that external certificates (including tampered ones)
/// can be represented and fed to the verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentDecomposition {
    pub field: FieldSpec,
    pub n: usize,
    pub lambdas: Vec<Scalar>,
    pub idempotents: Vec<Matrix>,
}

impl IdempotentDecomposition {
    /// Number of weighted idempotents.
    pub fn k(&self) -> usize {
        self.lambdas.len()
    }

    /// Sum of the idempotents.
    pub fn idempotent_sum(&self) -> Matrix {
        let mut sum = Matrix::zero(&self.field, self.n, self.n);
        for e in &self.idempotents {
            sum = sum.add(e).expect("same shape");
        }
        sum
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecomposeError {
    /// The input violates a hypothesis (zero matrix, non-square).
    Coincidence(CoincidenceError),
    /// The coincidence property fails, so no certificate exists.
    PropertyFails(CoincidenceWitness),
    /// Interpolation points must be distinct.
    LagrangeRepeatedValue { i: usize, j: usize },
    /// Interpolation points must be nonzero (the polynomial vanishes at 0).
    LagrangeZeroValue { i: usize },
    LagrangeIndexOutOfRange { index: usize, count: usize },
    /// Post-construction verification failed; indicates a bug, never expected.
    InternalContradiction(DecompositionDefect),
}

impl fmt::Display for DecomposeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecomposeError::Coincidence(e) => write!(f, "{e}"),
            DecomposeError::PropertyFails(w) => write!(
                f,
                "powers diverge at r={}, entry ({}, {}): {} vs {}",
                w.r,
                w.row + 1,
                w.col + 1,
                w.lhs,
                w.rhs
            ),
            DecomposeError::LagrangeRepeatedValue { i, j } => {
                write!(f, "interpolation values {i} and {j} coincide")
            }
            DecomposeError::LagrangeZeroValue { i } => {
                write!(f, "interpolation value {i} is zero")
            }
            DecomposeError::LagrangeIndexOutOfRange { index, count } => {
                write!(f, "interpolation index {index} out of range for {count} values")
            }
            DecomposeError::InternalContradiction(d) => {
                write!(f, "constructed certificate failed verification: {d}")
            }
        }
    }
}

impl std::error::Error for DecomposeError {}

impl From<CoincidenceError> for DecomposeError {
    fn from(e: CoincidenceError) -> Self {
        DecomposeError::Coincidence(e)
    }
}

/// Distinct nonzero entries in order of first row-major occurrence. This is
/// the canonical weight ordering for certificates.
pub fn distinct_nonzero_entries(a: &Matrix) -> Vec<Scalar> {
    let mut seen: Vec<Scalar> = Vec::new();
    for e in a.entries() {
        if !e.is_zero() && !seen.contains(e) {
            seen.push(e.clone());
        }
    }
    seen
}

/// The degree-k interpolation polynomial through the origin that is 1 at
/// `lambdas[i]` and 0 at every other `lambdas[j]`:
///
/// ```text
/// p_i(x) = x * prod_{j != i} (x - lambda_j) / (lambda_i * prod_{j != i} (lambda_i - lambda_j))
/// ```
///
/// `i` is a 0-based index into `lambdas`.
pub fn lagrange_polynomial(lambdas: &[Scalar], i: usize) -> Result<Polynomial, DecomposeError> {
    if i >= lambdas.len() {
        return Err(DecomposeError::LagrangeIndexOutOfRange {
            index: i,
            count: lambdas.len(),
        });
    }
    for (a, la) in lambdas.iter().enumerate() {
        if la.is_zero() {
            return Err(DecomposeError::LagrangeZeroValue { i: a });
        }
        for (b, lb) in lambdas.iter().enumerate().skip(a + 1) {
            if la == lb {
                return Err(DecomposeError::LagrangeRepeatedValue { i: a, j: b });
            }
        }
    }
    let field = lambdas[i].field().clone();
    let mut numer = Polynomial::x(&field);
    let mut denom = lambdas[i].clone();
    for (j, lj) in lambdas.iter().enumerate() {
        if j == i {
            continue;
        }
        // multiply by (x - lambda_j)
        numer = &numer * &Polynomial::from_coeffs(&field, vec![-lj, field.one()]);
        denom = &denom * &(&lambdas[i] - lj);
    }
    let inv = denom.inverse().expect("distinct nonzero points");
    Ok(numer.scale(&inv))
}

/// Builds the certificate for a matrix that passes [`check_finite`]: the
/// weights are the distinct nonzero entries, and each idempotent is the
/// interpolation polynomial of its weight evaluated at the matrix. The result
/// is verified before it is returned.
pub fn spectral_decompose(a: &Matrix) -> Result<IdempotentDecomposition, DecomposeError> {
    let report = check_finite(a)?;
    if !report.holds {
        return Err(DecomposeError::PropertyFails(
            report.witness.expect("failing report carries a witness"),
        ));
    }
    let lambdas = distinct_nonzero_entries(a);
    let mut idempotents = Vec::with_capacity(lambdas.len());
    for i in 0..lambdas.len() {
        let p = lagrange_polynomial(&lambdas, i)?;
        let e = poly_eval_usual(&p, a).expect("square matrix, zero constant term");
        idempotents.push(e);
    }
    let d = IdempotentDecomposition {
        field: a.field().clone(),
        n: a.rows(),
        lambdas,
        idempotents,
    };
    if let Some(defect) = verify_decomposition(&d, a).into_iter().next() {
        return Err(DecomposeError::InternalContradiction(defect));
    }
    Ok(d)
}

/// A reason the verifier rejects a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionDefect {
    ShapeMismatch,
    FieldMismatch,
    /// lambdas and idempotents have different lengths.
    CountMismatch,
    ZeroLambda { i: usize },
    RepeatedLambda { i: usize, j: usize },
    /// Entry of an idempotent outside {0, 1}.
    NotZeroOne { which: usize, row: usize, col: usize },
    NotIdempotent { which: usize },
    /// The zero matrix contributes nothing and would break uniqueness.
    ZeroIdempotent { which: usize },
    /// `E_i E_j != 0` for some ordered pair i != j.
    ProductOverlap { i: usize, j: usize },
    /// `E_i o E_j != 0` for some pair i < j.
    HadamardOverlap { i: usize, j: usize },
    /// `sum_i lambda_i E_i` differs from the target matrix.
    ReconstructionMismatch { row: usize, col: usize },
}

impl fmt::Display for DecompositionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionDefect::ShapeMismatch => write!(f, "shape mismatch"),
            DecompositionDefect::FieldMismatch => write!(f, "field mismatch"),
            DecompositionDefect::CountMismatch => {
                write!(f, "weight and idempotent counts differ")
            }
            DecompositionDefect::ZeroLambda { i } => write!(f, "weight {} is zero", i + 1),
            DecompositionDefect::RepeatedLambda { i, j } => {
                write!(f, "weights {} and {} coincide", i + 1, j + 1)
            }
            DecompositionDefect::NotZeroOne { which, row, col } => write!(
                f,
                "idempotent {} has a non-(0,1) entry at ({}, {})",
                which + 1,
                row + 1,
                col + 1
            ),
            DecompositionDefect::NotIdempotent { which } => {
                write!(f, "matrix {} is not idempotent", which + 1)
            }
            DecompositionDefect::ZeroIdempotent { which } => {
                write!(f, "idempotent {} is the zero matrix", which + 1)
            }
            DecompositionDefect::ProductOverlap { i, j } => {
                write!(f, "E_{} E_{} is nonzero", i + 1, j + 1)
            }
            DecompositionDefect::HadamardOverlap { i, j } => {
                write!(f, "E_{} o E_{} is nonzero", i + 1, j + 1)
            }
            DecompositionDefect::ReconstructionMismatch { row, col } => write!(
                f,
                "reconstruction mismatch at ({}, {})",
                row + 1,
                col + 1
            ),
        }
    }
}

/// Rechecks every certificate invariant against `a`, trusting nothing about
/// how the certificate was produced. Returns all defects found, in a fixed
/// order; an empty list means the certificate is valid. Only plain sequential
/// matrix products are used here, no interpolation machinery.
pub fn verify_decomposition(d: &IdempotentDecomposition, a: &Matrix) -> Vec<DecompositionDefect> {
    let mut defects = Vec::new();
    if !a.is_square() || a.rows() != d.n || d.idempotents.iter().any(|e| {
        e.rows() != d.n || e.cols() != d.n
    }) {
        return vec![DecompositionDefect::ShapeMismatch];
    }
    if d.field != *a.field()
        || d.lambdas.iter().any(|l| l.field() != a.field())
        || d.idempotents.iter().any(|e| e.field() != a.field())
    {
        return vec![DecompositionDefect::FieldMismatch];
    }
    if d.lambdas.len() != d.idempotents.len() {
        return vec![DecompositionDefect::CountMismatch];
    }

    for (i, l) in d.lambdas.iter().enumerate() {
        if l.is_zero() {
            defects.push(DecompositionDefect::ZeroLambda { i });
        }
        for (j, l2) in d.lambdas.iter().enumerate().skip(i + 1) {
            if l == l2 {
                defects.push(DecompositionDefect::RepeatedLambda { i, j });
            }
        }
    }

    for (which, e) in d.idempotents.iter().enumerate() {
        'scan: for row in 0..d.n {
            for col in 0..d.n {
                if !e.get(row, col).is_zero_or_one() {
                    defects.push(DecompositionDefect::NotZeroOne { which, row, col });
                    break 'scan;
                }
            }
        }
        if e.is_zero() {
            defects.push(DecompositionDefect::ZeroIdempotent { which });
        } else if &e.mat_mul(e).expect("square") != e {
            defects.push(DecompositionDefect::NotIdempotent { which });
        }
    }

    for i in 0..d.idempotents.len() {
        for j in 0..d.idempotents.len() {
            if i == j {
                continue;
            }
            let prod = d.idempotents[i]
                .mat_mul(&d.idempotents[j])
                .expect("square");
            if !prod.is_zero() {
                defects.push(DecompositionDefect::ProductOverlap { i, j });
            }
            if i < j {
                let had = d.idempotents[i]
                    .hadamard_mul(&d.idempotents[j])
                    .expect("same shape");
                if !had.is_zero() {
                    defects.push(DecompositionDefect::HadamardOverlap { i, j });
                }
            }
        }
    }

    let mut sum = Matrix::zero(&d.field, d.n, d.n);
    for (l, e) in d.lambdas.iter().zip(&d.idempotents) {
        sum = sum.add(&e.scalar_mul(l)).expect("same shape");
    }
    'recon: for row in 0..d.n {
        for col in 0..d.n {
            if sum.get(row, col) != a.get(row, col) {
                defects.push(DecompositionDefect::ReconstructionMismatch { row, col });
                break 'recon;
            }
        }
    }
    defects
}

/// Checks `A^r = sum_i lambda_i^r E_i = A^(r)` for `r = 1, ..., max_power`,
/// with all three sides computed incrementally.
pub fn power_identity_check(
    d: &IdempotentDecomposition,
    a: &Matrix,
    max_power: usize,
) -> bool {
    if !a.is_square() || a.rows() != d.n {
        return false;
    }
    let mut pow = a.clone();
    let mut hpow = a.clone();
    let mut lambda_pows: Vec<Scalar> = d.lambdas.clone();
    for r in 1..=max_power {
        if r > 1 {
            pow = pow.mat_mul(a).expect("square");
            hpow = hpow.hadamard_mul(a).expect("same shape");
            for (lp, l) in lambda_pows.iter_mut().zip(&d.lambdas) {
                *lp = &*lp * l;
            }
        }
        let mut sum = Matrix::zero(&d.field, d.n, d.n);
        for (lp, e) in lambda_pows.iter().zip(&d.idempotents) {
            sum = sum.add(&e.scalar_mul(lp)).expect("same shape");
        }
        if pow != sum || sum != hpow {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::fixtures;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    fn a23() -> Matrix {
        fixtures::disjoint_pair_4x4(&q().from_i64(2), &q().from_i64(3))
    }

    #[test]
    fn distinct_entries_in_first_occurrence_order() {
        assert_eq!(
            distinct_nonzero_entries(&a23()),
            vec![q().from_i64(2), q().from_i64(3)]
        );
        assert_eq!(
            distinct_nonzero_entries(&Matrix::identity(&q(), 3)),
            vec![q().one()]
        );
        assert!(distinct_nonzero_entries(&Matrix::zero(&q(), 2, 2)).is_empty());
    }

    #[test]
    fn lagrange_polynomial_examples() {
        // Single point: x / 5.
        let single = lagrange_polynomial(&[q().from_i64(5)], 0).unwrap();
        assert_eq!(
            single,
            Polynomial::from_coeffs(&q(), vec![q().zero(), q().from_fraction(1, 5)])
        );

        // Points {2, 3}: p_1 = (3x - x^2)/2, p_2 = (x^2 - 2x)/3.
        let points = [q().from_i64(2), q().from_i64(3)];
        let p1 = lagrange_polynomial(&points, 0).unwrap();
        assert_eq!(
            p1,
            Polynomial::from_coeffs(
                &q(),
                vec![q().zero(), q().from_fraction(3, 2), q().from_fraction(-1, 2)]
            )
        );
        let p2 = lagrange_polynomial(&points, 1).unwrap();
        assert_eq!(
            p2,
            Polynomial::from_coeffs(
                &q(),
                vec![q().zero(), q().from_fraction(-2, 3), q().from_fraction(1, 3)]
            )
        );

        // Interpolation conditions and zero constant term, directly.
        for (i, p) in [&p1, &p2].into_iter().enumerate() {
            assert!(p.constant_term_is_zero());
            assert_eq!(p.degree(), Some(2));
            for (j, pt) in points.iter().enumerate() {
                let val = p.eval(pt);
                assert_eq!(val.is_one(), i == j);
                assert_eq!(val.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn lagrange_polynomial_rejects_bad_points() {
        let points = [q().from_i64(2), q().from_i64(2)];
        assert!(matches!(
            lagrange_polynomial(&points, 0),
            Err(DecomposeError::LagrangeRepeatedValue { .. })
        ));
        let with_zero = [q().zero()];
        assert!(matches!(
            lagrange_polynomial(&with_zero, 0),
            Err(DecomposeError::LagrangeZeroValue { .. })
        ));
        assert!(matches!(
            lagrange_polynomial(&[q().one()], 3),
            Err(DecomposeError::LagrangeIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn lagrange_projector_is_first_fixture_idempotent() {
        let points = [q().from_i64(2), q().from_i64(3)];
        let p1 = lagrange_polynomial(&points, 0).unwrap();
        let e1 = poly_eval_usual(&p1, &a23()).unwrap();
        assert_eq!(e1, fixtures::disjoint_pair_e1(&q()));
    }

    #[test]
    fn spectral_decompose_fixture() {
        let d = spectral_decompose(&a23()).unwrap();
        assert_eq!(d.k(), 2);
        assert_eq!(d.lambdas, vec![q().from_i64(2), q().from_i64(3)]);
        assert_eq!(d.idempotents[0], fixtures::disjoint_pair_e1(&q()));
        assert_eq!(d.idempotents[1], fixtures::disjoint_pair_e2(&q()));
    }

    #[test]
    fn spectral_decompose_trivial_cases() {
        let d = spectral_decompose(&Matrix::identity(&q(), 3)).unwrap();
        assert_eq!(d.k(), 1);
        assert_eq!(d.lambdas, vec![q().one()]);
        assert_eq!(d.idempotents[0], Matrix::identity(&q(), 3));

        let diag = Matrix::from_i64_rows(&q(), &[&[5, 0, 0], &[0, 0, 0], &[0, 0, 5]]);
        let d = spectral_decompose(&diag).unwrap();
        assert_eq!(d.lambdas, vec![q().from_i64(5)]);
        assert_eq!(
            d.idempotents[0],
            Matrix::from_i64_rows(&q(), &[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]])
        );
    }

    #[test]
    fn spectral_decompose_rejects_failing_matrix() {
        let j = Matrix::ones(&q(), 2, 2);
        match spectral_decompose(&j) {
            Err(DecomposeError::PropertyFails(w)) => assert_eq!(w.r, 2),
            other => panic!("expected PropertyFails, got {other:?}"),
        }
        assert!(matches!(
            spectral_decompose(&Matrix::zero(&q(), 2, 2)),
            Err(DecomposeError::Coincidence(CoincidenceError::ZeroMatrix))
        ));
    }

    #[test]
    fn each_lambda_is_an_eigenvalue() {
        let a = a23();
        let d = spectral_decompose(&a).unwrap();
        let m = a.minimal_polynomial().unwrap();
        for l in &d.lambdas {
            assert!(m.eval(l).is_zero(), "{l} is not a root of {m}");
        }
    }

    #[test]
    fn verifier_accepts_fixture_and_rejects_tampering() {
        let a = a23();
        let d = spectral_decompose(&a).unwrap();
        assert!(verify_decomposition(&d, &a).is_empty());

        // Swapped weights: reconstruction breaks.
        let mut swapped = d.clone();
        swapped.lambdas.swap(0, 1);
        let defects = verify_decomposition(&swapped, &a);
        assert!(defects
            .iter()
            .any(|x| matches!(x, DecompositionDefect::ReconstructionMismatch { .. })));

        // E_1 replaced by E_1 + E_2: overlap and reconstruction break.
        let mut merged = d.clone();
        merged.idempotents[0] = merged.idempotents[0].add(&merged.idempotents[1]).unwrap();
        let defects = verify_decomposition(&merged, &a);
        assert!(defects.iter().any(|x| matches!(
            x,
            DecompositionDefect::HadamardOverlap { .. }
                | DecompositionDefect::ProductOverlap { .. }
                | DecompositionDefect::ReconstructionMismatch { .. }
        )));

        // A zero weight and a zero idempotent are both named.
        let mut zeroed = d.clone();
        zeroed.lambdas[0] = q().zero();
        assert!(verify_decomposition(&zeroed, &a)
            .iter()
            .any(|x| matches!(x, DecompositionDefect::ZeroLambda { i: 0 })));

        let mut zero_e = d.clone();
        zero_e.idempotents[1] = Matrix::zero(&q(), 4, 4);
        assert!(verify_decomposition(&zero_e, &a)
            .iter()
            .any(|x| matches!(x, DecompositionDefect::ZeroIdempotent { which: 1 })));
    }

    #[test]
    fn power_identity_on_fixture() {
        let a = a23();
        let d = spectral_decompose(&a).unwrap();
        assert!(power_identity_check(&d, &a, 6));

        let i3 = Matrix::identity(&q(), 3);
        let di = spectral_decompose(&i3).unwrap();
        assert!(power_identity_check(&di, &i3, 10));

        let mut tampered = d.clone();
        tampered.lambdas.swap(0, 1);
        assert!(!power_identity_check(&tampered, &a, 2));
    }

    #[test]
    fn decompose_over_prime_fields() {
        let f5 = FieldSpec::prime_field_u64(5).unwrap();
        let a = fixtures::disjoint_pair_4x4(&f5.from_i64(2), &f5.from_i64(3));
        let d = spectral_decompose(&a).unwrap();
        assert_eq!(d.k(), 2);
        assert!(verify_decomposition(&d, &a).is_empty());
        for e in &d.idempotents {
            assert!(e.is_zero_one());
        }

        // Over GF(2) the only nonzero weight is 1.
        let f2 = FieldSpec::prime_field_u64(2).unwrap();
        let e = fixtures::disjoint_pair_e1(&f2);
        let d = spectral_decompose(&e).unwrap();
        assert_eq!(d.k(), 1);
        assert!(verify_decomposition(&d, &e).is_empty());
    }
}
