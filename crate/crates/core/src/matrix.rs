//! Dense exact matrices with both product structures.
//!
//! Alongside the usual product, power and rank, this module carries the
//! Hadamard (entrywise) product and power, polynomial evaluation in both the
//! usual and the Hadamard sense, the minimal polynomial, and permutation
//! similarity. Matrices with a zero dimension are legal; the canonical-form
//! machinery relies on empty blocks.

use std::fmt;

use crate::field::{FieldSpec, Scalar};
use crate::perm::Permutation;
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    FieldMismatch {
        op: &'static str,
    },
    NonSquare {
        rows: usize,
        cols: usize,
    },
    PermutationSizeMismatch {
        n: usize,
        size: usize,
    },
    /// Polynomial evaluation requires a zero constant term.
    NonzeroConstantTerm,
    RowLength {
        row: usize,
        expected: usize,
        got: usize,
    },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::DimensionMismatch { op, left, right } => write!(
                f,
                "dimension mismatch in {op}: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            MatrixError::FieldMismatch { op } => write!(f, "field mismatch in {op}"),
            MatrixError::NonSquare { rows, cols } => {
                write!(f, "operation requires a square matrix, got {rows}x{cols}")
            }
            MatrixError::PermutationSizeMismatch { n, size } => {
                write!(f, "permutation on {size} indices applied to a {n}x{n} matrix")
            }
            MatrixError::NonzeroConstantTerm => {
                write!(f, "polynomial must have a zero constant term")
            }
            MatrixError::RowLength { row, expected, got } => {
                write!(f, "row {row} has {got} entries, expected {expected}")
            }
        }
    }
}

impl std::error::Error for MatrixError {}

/// A dense row-major matrix over a single exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// `c` times the identity.
    pub fn scalar_identity(field: &FieldSpec, n: usize, c: &Scalar) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// The all-ones matrix J.
    pub fn ones(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![field.one(); rows * cols],
        }
    }

    pub fn from_rows(field: &FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(MatrixError::RowLength {
                    row: i,
                    expected: ncols,
                    got: row.len(),
                });
            }
            for s in row {
                if s.field() != field {
                    return Err(MatrixError::FieldMismatch { op: "from_rows" });
                }
                entries.push(s);
            }
        }
        Ok(Matrix {
            field: field.clone(),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    /// Convenience for tests and fixtures: entries as small integers.
    pub fn from_i64_rows(field: &FieldSpec, rows: &[&[i64]]) -> Self {
        let converted = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, converted).expect("integer rows are rectangular")
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(v.field() == &self.field, "entry from a different field");
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row(r).iter().all(Scalar::is_zero)
    }

    pub fn col_is_zero(&self, c: usize) -> bool {
        (0..self.rows).all(|r| self.get(r, c).is_zero())
    }

    /// True iff every entry is the field's 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero_or_one)
    }

    fn require_same_shape(&self, other: &Matrix, op: &'static str) -> Result<(), MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch { op });
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    fn require_square(&self) -> Result<(), MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.require_same_shape(other, "add")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.require_same_shape(other, "sub")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Entrywise scaling; panics if `c` lives in another field.
    pub fn scalar_mul(&self, c: &Scalar) -> Matrix {
        assert!(c.field() == &self.field, "scalar from a different field");
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    /// The usual matrix product.
    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch { op: "mat_mul" });
        }
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                op: "mat_mul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Matrix::zero(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let sum = &out.entries[i * out.cols + j] + &(a * b);
                    out.entries[i * out.cols + j] = sum;
                }
            }
        }
        Ok(out)
    }

    /// The Hadamard (entrywise) product.
    pub fn hadamard_mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.require_same_shape(other, "hadamard_mul")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// The usual `r`-th power by binary powering; `r` must be positive.
    pub fn mat_pow(&self, r: usize) -> Result<Matrix, MatrixError> {
        self.require_square()?;
        assert!(r >= 1, "mat_pow exponent must be positive");
        let mut result: Option<Matrix> = None;
        let mut base = self.clone();
        let mut r = r;
        loop {
            if r & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(acc) => acc.mat_mul(&base)?,
                });
            }
            r >>= 1;
            if r == 0 {
                break;
            }
            base = base.mat_mul(&base)?;
        }
        Ok(result.expect("r >= 1"))
    }

    /// The `r`-th Hadamard power, entrywise; `r` must be positive.
    pub fn hadamard_pow(&self, r: usize) -> Matrix {
        assert!(r >= 1, "hadamard_pow exponent must be positive");
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.pow(r)).collect(),
        }
    }

    /// Rank over the exact field by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut work: Vec<Vec<Scalar>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !work[r][col].is_zero()) else {
                continue;
            };
            work.swap(rank, pivot);
            let inv = work[rank][col].inverse().expect("pivot is nonzero");
            for r in rank + 1..self.rows {
                if work[r][col].is_zero() {
                    continue;
                }
                let factor = &work[r][col] * &inv;
                for c in col..self.cols {
                    work[r][c] = &work[r][c] - &(&factor * &work[rank][c]);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Applies the matrix to a coordinate vector.
    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// The monic minimal polynomial, as the lcm of the minimal annihilators
    /// of the Krylov sequences seeded by each standard basis vector.
    pub fn minimal_polynomial(&self) -> Result<Polynomial, MatrixError> {
        self.require_square()?;
        let n = self.rows;
        let mut min = Polynomial::one(&self.field);
        for j in 0..n {
            if min.degree() == Some(n) {
                break;
            }
            let ann = self.krylov_annihilator(j);
            min = min.lcm(&ann);
        }
        Ok(min)
    }

    /// Least-degree monic polynomial f with f(A) e_j = 0, found by reducing
    /// the Krylov vectors A^t e_j against an echelon basis while tracking the
    /// combination that produced each reduced vector.
    fn krylov_annihilator(&self, j: usize) -> Polynomial {
        let n = self.rows;
        // (reduced vector with pivot normalized to 1, pivot column, combination)
        let mut basis: Vec<(Vec<Scalar>, usize, Vec<Scalar>)> = Vec::new();
        let mut v: Vec<Scalar> = (0..n)
            .map(|i| if i == j { self.field.one() } else { self.field.zero() })
            .collect();
        let mut power = 0usize;
        loop {
            let mut w = v.clone();
            let mut combo = vec![self.field.zero(); power + 1];
            combo[power] = self.field.one();
            for (b, pivot, bc) in &basis {
                if w[*pivot].is_zero() {
                    continue;
                }
                let factor = w[*pivot].clone();
                for t in 0..n {
                    w[t] = &w[t] - &(&factor * &b[t]);
                }
                for (t, c) in bc.iter().enumerate() {
                    combo[t] = &combo[t] - &(&factor * c);
                }
            }
            match w.iter().position(|x| !x.is_zero()) {
                None => return Polynomial::from_coeffs(&self.field, combo),
                Some(pivot) => {
                    let inv = w[pivot].inverse().expect("pivot is nonzero");
                    for t in 0..n {
                        w[t] = &w[t] * &inv;
                    }
                    for c in combo.iter_mut() {
                        *c = &*c * &inv;
                    }
                    basis.push((w, pivot, combo));
                }
            }
            v = self.mul_vec(&v);
            power += 1;
        }
    }

    /// Conjugation by the permutation matrix of `sigma`:
    /// `out[sigma(i)][sigma(j)] = self[i][j]`, i.e. P A P^T.
    pub fn permute_similarity(&self, sigma: &Permutation) -> Result<Matrix, MatrixError> {
        self.require_square()?;
        if sigma.n() != self.rows {
            return Err(MatrixError::PermutationSizeMismatch {
                n: self.rows,
                size: sigma.n(),
            });
        }
        let mut out = Matrix::zero(&self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[sigma.apply(i) * self.cols + sigma.apply(j)] =
                    self.get(i, j).clone();
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Evaluates `p(A) = c_m A^m + ... + c_1 A` by Horner; requires a zero
/// constant term and a square matrix.
pub fn poly_eval_usual(p: &Polynomial, a: &Matrix) -> Result<Matrix, MatrixError> {
    if p.field() != a.field() {
        return Err(MatrixError::FieldMismatch {
            op: "poly_eval_usual",
        });
    }
    if !a.is_square() {
        return Err(MatrixError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !p.constant_term_is_zero() {
        return Err(MatrixError::NonzeroConstantTerm);
    }
    let n = a.rows();
    let Some(m) = p.degree() else {
        return Ok(Matrix::zero(a.field(), n, n));
    };
    // p(x) = x q(x); evaluate q by Horner, then one final product with A.
    let mut acc = Matrix::scalar_identity(a.field(), n, &p.coeff(m));
    for i in (1..m).rev() {
        acc = acc.mat_mul(a)?;
        acc = acc.add(&Matrix::scalar_identity(a.field(), n, &p.coeff(i)))?;
    }
    acc.mat_mul(a)
}

/// Evaluates `p^H(A) = c_m A^(m) + ... + c_1 A` with incremental Hadamard
/// powers; entry (i, j) of the result equals `p(a_ij)`.
pub fn poly_eval_hadamard(p: &Polynomial, a: &Matrix) -> Result<Matrix, MatrixError> {
    if p.field() != a.field() {
        return Err(MatrixError::FieldMismatch {
            op: "poly_eval_hadamard",
        });
    }
    if !p.constant_term_is_zero() {
        return Err(MatrixError::NonzeroConstantTerm);
    }
    let mut out = Matrix::zero(a.field(), a.rows(), a.cols());
    let Some(m) = p.degree() else {
        return Ok(out);
    };
    let mut hpow = a.clone();
    for r in 1..=m {
        if r > 1 {
            hpow = hpow.hadamard_mul(a)?;
        }
        let c = p.coeff(r);
        if !c.is_zero() {
            out = out.add(&hpow.scalar_mul(&c))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime_field_u64(p).unwrap()
    }

    #[test]
    fn mat_mul_examples() {
        let x = Matrix::from_i64_rows(&q(), &[&[3, -1], &[2, 7]]);
        assert_eq!(Matrix::identity(&q(), 2).mat_mul(&x).unwrap(), x);
        let j = Matrix::ones(&q(), 2, 2);
        assert_eq!(
            j.mat_mul(&j).unwrap(),
            Matrix::from_i64_rows(&q(), &[&[2, 2], &[2, 2]])
        );
        let j2 = Matrix::ones(&gf(2), 2, 2);
        assert!(j2.mat_mul(&j2).unwrap().is_zero());
    }

    #[test]
    fn mat_mul_rejects_mismatches() {
        let a = Matrix::zero(&q(), 2, 3);
        let b = Matrix::zero(&q(), 2, 3);
        assert!(matches!(
            a.mat_mul(&b),
            Err(MatrixError::DimensionMismatch { .. })
        ));
        let c = Matrix::zero(&gf(5), 3, 2);
        assert!(matches!(a.mat_mul(&c), Err(MatrixError::FieldMismatch { .. })));
    }

    #[test]
    fn hadamard_mul_examples() {
        let a = Matrix::from_i64_rows(&q(), &[&[1, 2], &[3, 0]]);
        assert_eq!(a.hadamard_mul(&Matrix::ones(&q(), 2, 2)).unwrap(), a);
        let b = Matrix::from_i64_rows(&q(), &[&[5, 0], &[1, 7]]);
        assert_eq!(
            a.hadamard_mul(&b).unwrap(),
            Matrix::from_i64_rows(&q(), &[&[5, 0], &[3, 0]])
        );
        assert!(a.hadamard_mul(&Matrix::zero(&q(), 2, 2)).unwrap().is_zero());
    }

    #[test]
    fn mat_pow_examples() {
        let d = Matrix::from_i64_rows(&q(), &[&[2, 0], &[0, 3]]);
        assert_eq!(d.mat_pow(1).unwrap(), d);
        assert_eq!(
            d.mat_pow(3).unwrap(),
            Matrix::from_i64_rows(&q(), &[&[8, 0], &[0, 27]])
        );
        // Entry (3, 2) of the square of the two-weight fixture at (2, 3).
        let a = fixtures::disjoint_pair_4x4(&q().from_i64(2), &q().from_i64(3));
        assert_eq!(a.mat_pow(2).unwrap().get(2, 1), &q().from_i64(9));
    }

    #[test]
    fn hadamard_pow_examples() {
        let e = Matrix::from_i64_rows(&q(), &[&[1, 0], &[1, 1]]);
        assert_eq!(e.hadamard_pow(5), e);
        let a = Matrix::from_i64_rows(&q(), &[&[2, -1]]);
        assert_eq!(a.hadamard_pow(2), Matrix::from_i64_rows(&q(), &[&[4, 1]]));
        assert_eq!(a.hadamard_pow(1), a);
    }

    #[test]
    fn poly_eval_usual_examples() {
        let a = Matrix::from_i64_rows(&q(), &[&[1, 4], &[2, -1]]);
        let x = Polynomial::x(&q());
        assert_eq!(poly_eval_usual(&x, &a).unwrap(), a);

        // x^2 - x annihilates an idempotent.
        let e = Matrix::from_i64_rows(&q(), &[&[1, 1], &[0, 0]]);
        let p = Polynomial::from_i64_coeffs(&q(), &[0, -1, 1]);
        assert!(poly_eval_usual(&p, &e).unwrap().is_zero());

        let constant = Polynomial::from_i64_coeffs(&q(), &[1, 1]);
        assert!(matches!(
            poly_eval_usual(&constant, &a),
            Err(MatrixError::NonzeroConstantTerm)
        ));
    }

    #[test]
    fn poly_eval_hadamard_examples() {
        let a = Matrix::from_i64_rows(&q(), &[&[2, 3], &[0, 1]]);
        let sq = Polynomial::from_i64_coeffs(&q(), &[0, 0, 1]);
        assert_eq!(
            poly_eval_hadamard(&sq, &a).unwrap(),
            Matrix::from_i64_rows(&q(), &[&[4, 9], &[0, 1]])
        );

        // x(x-2)(x-3) kills every entry of the (2, 3) fixture entrywise.
        let a23 = fixtures::disjoint_pair_4x4(&q().from_i64(2), &q().from_i64(3));
        let p = Polynomial::from_i64_coeffs(&q(), &[0, 6, -5, 1]);
        assert!(poly_eval_hadamard(&p, &a23).unwrap().is_zero());

        let x = Polynomial::x(&q());
        assert_eq!(poly_eval_hadamard(&x, &a).unwrap(), a);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(&q(), 4).rank(), 4);
        let a23 = fixtures::disjoint_pair_4x4(&q().from_i64(2), &q().from_i64(3));
        assert_eq!(a23.rank(), 2);
        assert_eq!(Matrix::ones(&gf(2), 3, 3).rank(), 1);
        assert_eq!(Matrix::zero(&q(), 3, 5).rank(), 0);
        assert_eq!(Matrix::zero(&q(), 0, 0).rank(), 0);
    }

    #[test]
    fn minimal_polynomial_examples() {
        assert_eq!(
            Matrix::identity(&q(), 3).minimal_polynomial().unwrap(),
            Polynomial::from_i64_coeffs(&q(), &[-1, 1])
        );
        let nilpotent = Matrix::from_i64_rows(&q(), &[&[0, 1], &[0, 0]]);
        assert_eq!(
            nilpotent.minimal_polynomial().unwrap(),
            Polynomial::from_i64_coeffs(&q(), &[0, 0, 1])
        );
        let a23 = fixtures::disjoint_pair_4x4(&q().from_i64(2), &q().from_i64(3));
        assert_eq!(
            a23.minimal_polynomial().unwrap(),
            Polynomial::from_i64_coeffs(&q(), &[0, 6, -5, 1])
        );
    }

    #[test]
    fn minimal_polynomial_annihilates() {
        let a = Matrix::from_i64_rows(&q(), &[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let m = a.minimal_polynomial().unwrap();
        assert!(m.is_monic());
        assert!(m.degree().unwrap() <= 3);
        // m has a nonzero constant term here, so evaluate by explicit powers.
        let n = 3;
        let mut acc = Matrix::scalar_identity(&q(), n, &m.coeff(0));
        let mut pw = Matrix::identity(&q(), n);
        for i in 1..=m.degree().unwrap() {
            pw = pw.mat_mul(&a).unwrap();
            acc = acc.add(&pw.scalar_mul(&m.coeff(i))).unwrap();
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn permute_similarity_examples() {
        let a23 = fixtures::disjoint_pair_4x4(&q().from_i64(2), &q().from_i64(3));
        assert_eq!(
            a23.permute_similarity(&Permutation::identity(4)).unwrap(),
            a23
        );

        let d = Matrix::from_i64_rows(&q(), &[&[2, 0], &[0, 3]]);
        assert_eq!(
            d.permute_similarity(&Permutation::transposition(2, 0, 1)).unwrap(),
            Matrix::from_i64_rows(&q(), &[&[3, 0], &[0, 2]])
        );

        // Sum of the two fixture idempotents, pushed to block form.
        let e = fixtures::disjoint_pair_4x4(&q().one(), &q().one());
        let sigma = Permutation::from_images(vec![0, 1, 3, 2]).unwrap();
        assert_eq!(
            e.permute_similarity(&sigma).unwrap(),
            Matrix::from_i64_rows(
                &q(),
                &[&[1, 0, 0, 0], &[0, 1, 1, 0], &[0, 0, 0, 0], &[1, 1, 1, 0]]
            )
        );
    }

    #[test]
    fn zero_dimension_matrices() {
        let empty = Matrix::zero(&q(), 0, 3);
        let tall = Matrix::zero(&q(), 3, 0);
        let product = tall.mat_mul(&empty).unwrap();
        assert_eq!((product.rows(), product.cols()), (3, 3));
        assert!(product.is_zero());
        assert_eq!(Matrix::identity(&q(), 0).rank(), 0);
    }

    fn arb_field() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![Just(q()), Just(gf(2)), Just(gf(5)), Just(gf(11))]
    }

    fn arb_square(field: FieldSpec, n: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-4i64..=4, n * n).prop_map(move |vals| {
            let entries = vals.iter().map(|&v| field.from_i64(v)).collect();
            Matrix {
                field: field.clone(),
                rows: n,
                cols: n,
                entries,
            }
        })
    }

    fn arb_square_any() -> impl Strategy<Value = Matrix> {
        (arb_field(), 1usize..=4).prop_flat_map(|(f, n)| arb_square(f, n))
    }

    proptest! {
        #[test]
        fn power_laws(a in arb_square_any(), r in 1usize..=3, s in 1usize..=3) {
            let usual = a.mat_pow(r + s).unwrap();
            let split = a.mat_pow(r).unwrap().mat_mul(&a.mat_pow(s).unwrap()).unwrap();
            prop_assert_eq!(usual, split);

            let had = a.hadamard_pow(r + s);
            let had_split = a.hadamard_pow(r).hadamard_mul(&a.hadamard_pow(s)).unwrap();
            prop_assert_eq!(had, had_split);
        }

        #[test]
        fn hadamard_eval_matches_entrywise(a in arb_square_any(), coeffs in proptest::collection::vec(-3i64..=3, 1..=4)) {
            let mut full = vec![0i64];
            full.extend(coeffs);
            let p = Polynomial::from_i64_coeffs(a.field(), &full);
            let lhs = poly_eval_hadamard(&p, &a).unwrap();
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    prop_assert_eq!(lhs.get(r, c), &p.eval(a.get(r, c)));
                }
            }
        }

        #[test]
        fn permute_similarity_roundtrip(a in arb_square_any(), seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut images: Vec<usize> = (0..a.rows()).collect();
            images.shuffle(&mut rng);
            let sigma = Permutation::from_images(images).unwrap();
            let there = a.permute_similarity(&sigma).unwrap();
            let back = there.permute_similarity(&sigma.inverse()).unwrap();
            prop_assert_eq!(back, a.clone());
            prop_assert_eq!(there.rank(), a.rank());
        }

        #[test]
        fn minimal_polynomial_bounds(a in arb_square_any()) {
            let m = a.minimal_polynomial().unwrap();
            prop_assert!(m.is_monic());
            prop_assert!(m.degree().unwrap() <= a.rows());
        }
    }
}
