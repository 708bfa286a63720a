//! Deterministic instance builders shared by the benchmarks.

use hadamat::{gen_idempotent01, gen_instance, FieldSpec, GenMode, GenParams, Matrix};

/// A passing instance of size roughly `n` (rank half, the rest split across
/// the border classes), deterministic in `seed`.
pub fn positive_instance(field: &FieldSpec, n: usize, seed: u64) -> Matrix {
    let m = (n / 2).max(1);
    let rest = n - m;
    let s2 = rest / 2;
    let s3 = rest - s2;
    let k = m.min(3);
    let params = GenParams {
        seed,
        field: field.clone(),
        m,
        s2,
        s3,
        s4: 0,
        k,
        mode: GenMode::SafeColumns,
    };
    gen_instance(&params).expect("valid benchmark shape").0
}

/// An idempotent (0,1)-matrix of size roughly `n`, deterministic in `seed`.
pub fn idempotent_instance(field: &FieldSpec, n: usize, seed: u64) -> Matrix {
    let m = (n / 2).max(1);
    let rest = n - m;
    let params = GenParams {
        seed,
        field: field.clone(),
        m,
        s2: rest / 2,
        s3: rest - rest / 2,
        s4: 0,
        k: 1,
        mode: GenMode::SafeColumns,
    };
    gen_idempotent01(&params).expect("valid benchmark shape")
}

pub fn rational() -> FieldSpec {
    FieldSpec::rational()
}

pub fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime_field_u64(p).expect("prime modulus")
}
