//! Deterministic construction of positive instances, negative instances, and
//! exhaustive small-case enumeration.
//!
//! Positive instances are built backwards through the canonical block shape:
//! sample U and V, read off the biorthogonal rank-one pieces, group them into
//! idempotents, attach distinct nonzero weights, and scramble by a random
//! permutation similarity. The ground-truth certificate ships with the
//! matrix. All randomness comes from ChaCha8 seeded with a caller-supplied
//! 64-bit seed, so identical parameters reproduce identical instances.

use std::fmt;

use num::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coincidence::{check_finite, CoincidenceError, CoincidenceReport};
use crate::decomposition::IdempotentDecomposition;
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use crate::perm::Permutation;

/// Name of the pinned generator algorithm, recorded in certificate metadata.
pub const RNG_ALGORITHM: &str = "chacha8";

/// How the U block is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    /// Each column of U carries exactly one 1, which makes VU a (0,1)-matrix
    /// by construction.
    SafeColumns,
    /// U and V are sampled freely and resampled until the structural
    /// constraints hold; reaches patterns SafeColumns cannot.
    Rejection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub seed: u64,
    pub field: FieldSpec,
    /// Size of the identity block; the rank of the generated idempotent.
    pub m: usize,
    /// Number of zero-row / nonzero-column indices (width of U).
    pub s2: usize,
    /// Number of nonzero-row / zero-column indices (height of V).
    pub s3: usize,
    /// Number of zero-row / zero-column indices.
    pub s4: usize,
    /// Number of weight groups, between 1 and m.
    pub k: usize,
    pub mode: GenMode,
}

impl GenParams {
    pub fn n(&self) -> usize {
        self.m + self.s2 + self.s3 + self.s4
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.m < 1 {
            return Err(GenError::InvalidShape("m must be at least 1".into()));
        }
        if self.k < 1 || self.k > self.m {
            return Err(GenError::InvalidShape(format!(
                "k must lie in 1..={}, got {}",
                self.m, self.k
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    InvalidShape(String),
    /// The field has fewer than the required number of distinct nonzero values.
    FieldTooSmall { needed: usize },
    RejectionBudgetExhausted { attempts: usize },
    MutationBudgetExhausted { attempts: usize },
    EnumerationBudgetExceeded { budget: u64 },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::InvalidShape(msg) => write!(f, "invalid shape: {msg}"),
            GenError::FieldTooSmall { needed } => {
                write!(f, "field has fewer than {needed} distinct nonzero elements")
            }
            GenError::RejectionBudgetExhausted { attempts } => {
                write!(f, "rejection sampling failed after {attempts} attempts")
            }
            GenError::MutationBudgetExhausted { attempts } => {
                write!(f, "no failing mutation found after {attempts} attempts")
            }
            GenError::EnumerationBudgetExceeded { budget } => {
                write!(f, "enumeration would exceed the budget of {budget} matrices")
            }
        }
    }
}

impl std::error::Error for GenError {}

/// Bit grids for the sampled blocks; converted to field matrices on demand.
struct Blocks {
    m: usize,
    s2: usize,
    s3: usize,
    s4: usize,
    u: Vec<Vec<bool>>,
    v: Vec<Vec<bool>>,
}

impl Blocks {
    fn n(&self) -> usize {
        self.m + self.s2 + self.s3 + self.s4
    }

    /// The rank-one piece v_i u_i^T in the unscrambled frame.
    fn piece(&self, field: &FieldSpec, i: usize) -> Matrix {
        let n = self.n();
        let mut rows: Vec<usize> = vec![i];
        rows.extend(
            (0..self.s3).filter(|&p| self.v[p][i]).map(|p| self.m + self.s2 + p),
        );
        let mut cols: Vec<usize> = vec![i];
        cols.extend((0..self.s2).filter(|&q| self.u[i][q]).map(|q| self.m + q));
        let mut out = Matrix::zero(field, n, n);
        for &r in &rows {
            for &c in &cols {
                out.set(r, c, field.one());
            }
        }
        out
    }
}

fn sample_blocks(
    rng: &mut ChaCha8Rng,
    params: &GenParams,
) -> Result<Blocks, GenError> {
    let (m, s2, s3) = (params.m, params.s2, params.s3);
    match params.mode {
        GenMode::SafeColumns => {
            let mut u = vec![vec![false; s2]; m];
            for q in 0..s2 {
                u[rng.gen_range(0..m)][q] = true;
            }
            let mut v = vec![vec![false; m]; s3];
            for row in v.iter_mut() {
                for bit in row.iter_mut() {
                    *bit = rng.gen_bool(0.5);
                }
                if !row.iter().any(|&b| b) {
                    row[rng.gen_range(0..m)] = true;
                }
            }
            Ok(Blocks {
                m,
                s2,
                s3,
                s4: params.s4,
                u,
                v,
            })
        }
        GenMode::Rejection => {
            const BUDGET: usize = 1000;
            'attempt: for _ in 0..BUDGET {
                let u: Vec<Vec<bool>> = (0..m)
                    .map(|_| (0..s2).map(|_| rng.gen_bool(0.5)).collect())
                    .collect();
                let v: Vec<Vec<bool>> = (0..s3)
                    .map(|_| (0..m).map(|_| rng.gen_bool(0.5)).collect())
                    .collect();
                for q in 0..s2 {
                    if !(0..m).any(|i| u[i][q]) {
                        continue 'attempt;
                    }
                }
                for row in &v {
                    if !row.iter().any(|&b| b) {
                        continue 'attempt;
                    }
                }
                // VU must be a (0,1)-matrix as an integer count, so the
                // rank-one pieces stay disjoint over every characteristic.
                for p in 0..s3 {
                    for q in 0..s2 {
                        let count = (0..m).filter(|&i| v[p][i] && u[i][q]).count();
                        if count > 1 {
                            continue 'attempt;
                        }
                    }
                }
                return Ok(Blocks {
                    m,
                    s2,
                    s3,
                    s4: params.s4,
                    u,
                    v,
                });
            }
            Err(GenError::RejectionBudgetExhausted { attempts: BUDGET })
        }
    }
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffle keeps a bijection")
}

/// `k` distinct nonzero field elements; small numerators and denominators
/// over Q, uniform nonzero residues over GF(p).
fn sample_distinct_nonzero(
    rng: &mut ChaCha8Rng,
    field: &FieldSpec,
    k: usize,
) -> Result<Vec<Scalar>, GenError> {
    if !field.has_distinct_nonzero(k) {
        return Err(GenError::FieldTooSmall { needed: k });
    }
    let mut out: Vec<Scalar> = Vec::with_capacity(k);
    let span = k as i64 + 6;
    while out.len() < k {
        let cand = match field {
            FieldSpec::Rational => {
                field.from_fraction(rng.gen_range(-span..=span), rng.gen_range(1..=3))
            }
            FieldSpec::PrimeField(p) => match p.to_u64() {
                Some(pu) => field.from_i64(rng.gen_range(1..pu) as i64),
                // For huge moduli, a 63-bit sample is effectively uniform
                // enough for test-instance purposes.
                None => field.from_i64(rng.gen_range(1..i64::MAX)),
            },
        };
        if cand.is_zero() || out.contains(&cand) {
            continue;
        }
        out.push(cand);
    }
    Ok(out)
}

/// A random idempotent (0,1)-matrix of rank `m` with the requested class
/// sizes, scrambled by a random permutation similarity.
pub fn gen_idempotent01(params: &GenParams) -> Result<Matrix, GenError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let blocks = sample_blocks(&mut rng, params)?;
    let mut e = Matrix::zero(&params.field, blocks.n(), blocks.n());
    for i in 0..params.m {
        e = e.add(&blocks.piece(&params.field, i)).expect("same shape");
    }
    let tau = random_permutation(&mut rng, blocks.n());
    let e = e.permute_similarity(&tau).expect("square");
    debug_assert!(crate::canonical::is_idempotent_01(&e));
    Ok(e)
}

/// A positive instance with its ground-truth certificate. The m rank-one
/// pieces are split into k nonempty groups (contiguous blocks of a seeded
/// shuffle), each group summed into an idempotent and weighted by a distinct
/// nonzero element.
pub fn gen_instance(params: &GenParams) -> Result<(Matrix, IdempotentDecomposition), GenError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    gen_instance_rng(&mut rng, params)
}

fn gen_instance_rng(
    rng: &mut ChaCha8Rng,
    params: &GenParams,
) -> Result<(Matrix, IdempotentDecomposition), GenError> {
    let field = &params.field;
    let blocks = sample_blocks(rng, params)?;
    let n = blocks.n();

    let mut piece_order: Vec<usize> = (0..params.m).collect();
    piece_order.shuffle(rng);
    let mut cuts: Vec<usize> = (1..params.m).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(params.k - 1).collect();
    cuts.sort_unstable();
    cuts.push(params.m);

    let lambdas = sample_distinct_nonzero(rng, field, params.k)?;

    let mut idempotents = Vec::with_capacity(params.k);
    let mut start = 0;
    for &end in &cuts {
        let mut group_sum = Matrix::zero(field, n, n);
        for &i in &piece_order[start..end] {
            group_sum = group_sum.add(&blocks.piece(field, i)).expect("same shape");
        }
        idempotents.push(group_sum);
        start = end;
    }

    let mut a = Matrix::zero(field, n, n);
    for (l, e) in lambdas.iter().zip(&idempotents) {
        a = a.add(&e.scalar_mul(l)).expect("same shape");
    }

    let tau = random_permutation(rng, n);
    let a = a.permute_similarity(&tau).expect("square");
    let idempotents = idempotents
        .into_iter()
        .map(|e| e.permute_similarity(&tau).expect("square"))
        .collect();

    let report = check_finite(&a).expect("generated instance is square and nonzero");
    assert!(report.holds, "constructed positive instance must pass");

    Ok((
        a,
        IdempotentDecomposition {
            field: field.clone(),
            n,
            lambdas,
            idempotents,
        },
    ))
}

/// A matrix that fails the coincidence check, produced by mutating a positive
/// instance (one entry changed, or one row scaled) until the check fails.
pub fn gen_negative(seed: u64, field: &FieldSpec, n: usize) -> Result<Matrix, GenError> {
    if n < 2 {
        return Err(GenError::InvalidShape(
            "negative instances need n >= 2".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const BUDGET: usize = 64;
    for _ in 0..BUDGET {
        let m = rng.gen_range(1..=n);
        let rest = n - m;
        let s2 = rng.gen_range(0..=rest);
        let s3 = rng.gen_range(0..=rest - s2);
        let s4 = rest - s2 - s3;
        let k_cap = match field {
            FieldSpec::Rational => m,
            FieldSpec::PrimeField(p) => {
                let nonzero = p.to_u64().map_or(u64::MAX, |pu| pu - 1);
                m.min(usize::try_from(nonzero).unwrap_or(usize::MAX))
            }
        };
        let params = GenParams {
            seed: 0, // unused on this path; rng is threaded through
            field: field.clone(),
            m,
            s2,
            s3,
            s4,
            k: rng.gen_range(1..=k_cap),
            mode: GenMode::SafeColumns,
        };
        let Ok((mut a, _)) = gen_instance_rng(&mut rng, &params) else {
            continue;
        };

        let scale_possible = field.has_distinct_nonzero(2);
        if scale_possible && rng.gen_bool(0.5) {
            // Scale a nonzero row by something outside {0, 1}.
            let nonzero_rows: Vec<usize> = (0..n).filter(|&r| !a.row_is_zero(r)).collect();
            let row = *nonzero_rows.choose(&mut rng).expect("a is nonzero");
            let c = loop {
                let cand = sample_distinct_nonzero(&mut rng, field, 1)
                    .expect("field checked")
                    .pop()
                    .expect("one sample");
                if !cand.is_one() {
                    break cand;
                }
            };
            for col in 0..n {
                let scaled = &(a.get(row, col).clone()) * &c;
                a.set(row, col, scaled);
            }
        } else {
            let row = rng.gen_range(0..n);
            let col = rng.gen_range(0..n);
            let fresh = loop {
                let cand = match field {
                    FieldSpec::Rational => {
                        field.from_fraction(rng.gen_range(-6i64..=6), rng.gen_range(1..=3))
                    }
                    FieldSpec::PrimeField(p) => match p.to_u64() {
                        Some(pu) => field.from_i64(rng.gen_range(0..pu) as i64),
                        None => field.from_i64(rng.gen_range(0..i64::MAX)),
                    },
                };
                if &cand != a.get(row, col) {
                    break cand;
                }
            };
            a.set(row, col, fresh);
        }

        match check_finite(&a) {
            Ok(report) if !report.holds => return Ok(a),
            // Still passing, or mutated down to the zero matrix: try again.
            Ok(_) | Err(CoincidenceError::ZeroMatrix) => continue,
            Err(e) => unreachable!("square matrix, bound fixed: {e}"),
        }
    }
    Err(GenError::MutationBudgetExhausted { attempts: BUDGET })
}

/// Every n x n matrix with entries from `pool`, in lexicographic order of the
/// row-major entry sequence, paired with its coincidence report (`None` for
/// the zero matrix, which the check rejects by hypothesis).
pub fn enumerate_small(
    field: &FieldSpec,
    n: usize,
    pool: &[Scalar],
    budget: u64,
) -> Result<Vec<(Matrix, Option<CoincidenceReport>)>, GenError> {
    if n < 1 {
        return Err(GenError::InvalidShape("enumeration needs n >= 1".into()));
    }
    if pool.is_empty() {
        return Err(GenError::InvalidShape("entry pool is empty".into()));
    }
    if pool.iter().any(|s| s.field() != field) {
        return Err(GenError::InvalidShape(
            "pool entry from a different field".into(),
        ));
    }
    let cells = n * n;
    let total = (pool.len() as u128)
        .checked_pow(cells as u32)
        .filter(|&t| t <= budget as u128)
        .ok_or(GenError::EnumerationBudgetExceeded { budget })?;

    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0usize; cells];
    loop {
        let entries: Vec<Scalar> = digits.iter().map(|&d| pool[d].clone()).collect();
        let rows: Vec<Vec<Scalar>> = entries.chunks(n).map(<[Scalar]>::to_vec).collect();
        let matrix = Matrix::from_rows(field, rows).expect("rectangular by construction");
        let report = if matrix.is_zero() {
            None
        } else {
            Some(check_finite(&matrix).expect("square and nonzero"))
        };
        out.push((matrix, report));

        // Odometer increment, last cell fastest.
        let mut pos = cells;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < pool.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{canonical_form, is_idempotent_01, reconstruct_idempotent};
    use crate::decomposition::verify_decomposition;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime_field_u64(p).unwrap()
    }

    fn params(seed: u64, field: FieldSpec, m: usize, s2: usize, s3: usize, s4: usize, k: usize, mode: GenMode) -> GenParams {
        GenParams {
            seed,
            field,
            m,
            s2,
            s3,
            s4,
            k,
            mode,
        }
    }

    #[test]
    fn idempotent_generation_examples() {
        let e = gen_idempotent01(&params(7, q(), 2, 1, 1, 0, 1, GenMode::SafeColumns)).unwrap();
        assert_eq!(e.rows(), 4);
        assert!(is_idempotent_01(&e));
        assert_eq!(e.rank(), 2);

        // m = n: the scrambled identity is the identity.
        let e = gen_idempotent01(&params(3, q(), 3, 0, 0, 0, 1, GenMode::SafeColumns)).unwrap();
        assert_eq!(e, Matrix::identity(&q(), 3));

        // Rank 1 with two inert indices: a single diagonal 1.
        let e = gen_idempotent01(&params(11, q(), 1, 0, 0, 2, 1, GenMode::SafeColumns)).unwrap();
        let ones: Vec<(usize, usize)> = (0..3)
            .flat_map(|r| (0..3).map(move |c| (r, c)))
            .filter(|&(r, c)| e.get(r, c).is_one())
            .collect();
        assert_eq!(ones.len(), 1);
        assert_eq!(ones[0].0, ones[0].1);
    }

    #[test]
    fn invalid_shapes_are_rejected() {
        assert!(matches!(
            gen_idempotent01(&params(0, q(), 0, 1, 1, 0, 1, GenMode::SafeColumns)),
            Err(GenError::InvalidShape(_))
        ));
        assert!(matches!(
            gen_instance(&params(0, q(), 2, 0, 0, 0, 3, GenMode::SafeColumns)),
            Err(GenError::InvalidShape(_))
        ));
    }

    #[test]
    fn instance_ships_with_valid_certificate() {
        let (a, d) = gen_instance(&params(42, q(), 3, 2, 1, 1, 2, GenMode::SafeColumns)).unwrap();
        assert!(check_finite(&a).unwrap().holds);
        assert!(verify_decomposition(&d, &a).is_empty());
        assert_eq!(d.k(), 2);
    }

    #[test]
    fn full_rank_single_group_is_scaled_identity() {
        let (a, d) = gen_instance(&params(17, q(), 3, 0, 0, 0, 1, GenMode::SafeColumns)).unwrap();
        let lambda = &d.lambdas[0];
        assert_eq!(a, Matrix::identity(&q(), 3).scalar_mul(lambda));
    }

    #[test]
    fn gf2_instances_are_idempotents() {
        // Over GF(2) only k = 1 is possible and the weight is 1, so the
        // instance equals its own idempotent.
        let (a, d) = gen_instance(&params(5, gf(2), 2, 1, 0, 0, 1, GenMode::SafeColumns)).unwrap();
        assert!(is_idempotent_01(&a));
        assert_eq!(d.lambdas, vec![gf(2).one()]);
        assert!(matches!(
            gen_instance(&params(5, gf(2), 2, 1, 0, 0, 2, GenMode::SafeColumns)),
            Err(GenError::FieldTooSmall { needed: 2 })
        ));
    }

    #[test]
    fn negative_instances_fail_the_check() {
        for seed in 0..8 {
            let a = gen_negative(seed, &q(), 4).unwrap();
            assert!(!check_finite(&a).unwrap().holds);
        }
        let a = gen_negative(1, &gf(5), 3).unwrap();
        assert!(!check_finite(&a).unwrap().holds);
        assert!(matches!(
            gen_negative(0, &q(), 1),
            Err(GenError::InvalidShape(_))
        ));
    }

    #[test]
    fn generation_is_deterministic() {
        let p = params(99, gf(11), 3, 1, 2, 0, 2, GenMode::Rejection);
        assert_eq!(gen_instance(&p).unwrap(), gen_instance(&p).unwrap());
        assert_eq!(gen_idempotent01(&p).unwrap(), gen_idempotent01(&p).unwrap());
        assert_eq!(
            gen_negative(7, &q(), 3).unwrap(),
            gen_negative(7, &q(), 3).unwrap()
        );
    }

    #[test]
    fn enumerate_small_gf2() {
        let f = gf(2);
        let pool = [f.zero(), f.one()];
        let all = enumerate_small(&f, 2, &pool, 1 << 24).unwrap();
        assert_eq!(all.len(), 16);
        assert_eq!(all.iter().filter(|(_, r)| r.is_none()).count(), 1);
        // Exactly the nonzero idempotents pass over GF(2).
        for (matrix, report) in &all {
            if let Some(report) = report {
                assert_eq!(report.holds, is_idempotent_01(matrix));
            }
        }
    }

    #[test]
    fn enumerate_one_by_one_over_q() {
        let f = q();
        let pool = [f.zero(), f.one(), f.from_i64(2)];
        let all = enumerate_small(&f, 1, &pool, 100).unwrap();
        assert_eq!(all.len(), 3);
        assert!(all[0].1.is_none()); // zero matrix
        assert!(all[1].1.as_ref().unwrap().holds); // [1]
        assert!(all[2].1.as_ref().unwrap().holds); // [2]: 1x1 powers always coincide
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        let f = q();
        let pool = [f.zero(), f.one(), f.from_i64(2)];
        assert!(matches!(
            enumerate_small(&f, 5, &pool, 1 << 24),
            Err(GenError::EnumerationBudgetExceeded { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn generated_instances_verify(
            seed in 0u64..10_000,
            m in 1usize..=4,
            s2 in 0usize..=2,
            s3 in 0usize..=2,
            s4 in 0usize..=1,
            field_pick in 0usize..3,
            rejection in proptest::bool::ANY,
        ) {
            let field = [q(), gf(5), gf(11)][field_pick].clone();
            let k_cap = if field == gf(5) { m.min(4) } else { m };
            let mode = if rejection { GenMode::Rejection } else { GenMode::SafeColumns };
            let p = params(seed, field, m, s2, s3, s4, 1 + seed as usize % k_cap, mode);
            let (a, d) = gen_instance(&p).unwrap();
            prop_assert!(check_finite(&a).unwrap().holds);
            prop_assert!(verify_decomposition(&d, &a).is_empty());
        }

        #[test]
        fn generated_idempotents_roundtrip(
            seed in 0u64..10_000,
            m in 1usize..=4,
            s2 in 0usize..=3,
            s3 in 0usize..=3,
            s4 in 0usize..=2,
            rejection in proptest::bool::ANY,
        ) {
            let mode = if rejection { GenMode::Rejection } else { GenMode::SafeColumns };
            let p = params(seed, q(), m, s2, s3, s4, 1, mode);
            let e = gen_idempotent01(&p).unwrap();
            prop_assert!(is_idempotent_01(&e));
            let cf = canonical_form(&e).unwrap();
            prop_assert_eq!(cf.m(), e.rank());
            prop_assert_eq!(reconstruct_idempotent(&cf, e.rows()).unwrap(), e);
        }
    }
}
