//! The certificate document: a JSON-compatible record of everything an
//! independent verifier needs.
//!
//! Scalars are serialized in their exact text form; idempotents and (0,1)
//! vectors are rows of `0`/`1` characters; permutations are 1-based image
//! arrays. Serialization is byte-deterministic for a given certificate.

use std::fmt;

use serde::{Deserialize, Serialize};

use hadamat::{
    CanonicalForm, CoincidenceWitness, FieldError, FieldSpec, IdempotentDecomposition, Matrix,
    Permutation, RankOneDecomposition, Scalar,
};

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    ZeroMatrix,
    CharTooSmall,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::ZeroMatrix => "zero_matrix",
            Status::CharTooSmall => "char_too_small",
            Status::Error => "error",
        };
        f.write_str(name)
    }
}

/// First failing power and position, 1-based indices.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct WitnessSection {
    pub r: usize,
    pub i: usize,
    pub j: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DecompositionSection {
    pub k: usize,
    pub lambdas: Vec<String>,
    /// Each idempotent as rows of '0'/'1' characters.
    pub idempotents: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CanonicalSection {
    /// 1-based image array of the canonical permutation.
    pub sigma: Vec<usize>,
    pub m: usize,
    pub class_sizes: [usize; 4],
    /// Rows of U (m rows of s2 bits).
    pub u: Vec<String>,
    /// Rows of V (s3 rows of m bits).
    pub v: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RankOneSection {
    pub sigma: Vec<usize>,
    pub mus: Vec<String>,
    pub us: Vec<String>,
    pub vs: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct MetaSection {
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<CanonicalSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rankone: Option<RankOneSection>,
    pub meta: MetaSection,
}

impl Certificate {
    pub fn new(status: Status, field: Option<&FieldSpec>) -> Self {
        Certificate {
            status,
            reason: None,
            witness: None,
            decomposition: None,
            canonical: None,
            rankone: None,
            meta: MetaSection {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                seed: None,
                field: field.map(ToString::to_string),
                rng: None,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("certificate serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Structural problems when mapping a certificate back to exact objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateError {
    BadBitChar { string: String },
    BitRowLength { expected: usize, got: usize },
    RowCount { expected: usize, got: usize },
    CountMismatch { detail: String },
    Scalar(FieldError),
    SigmaNotAPermutation,
    SigmaLength { expected: usize, got: usize },
}

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateError::BadBitChar { string } => {
                write!(f, "bit row {string:?} contains a character outside 0/1")
            }
            CertificateError::BitRowLength { expected, got } => {
                write!(f, "bit row has {got} characters, expected {expected}")
            }
            CertificateError::RowCount { expected, got } => {
                write!(f, "bit matrix has {got} rows, expected {expected}")
            }
            CertificateError::CountMismatch { detail } => write!(f, "{detail}"),
            CertificateError::Scalar(e) => write!(f, "{e}"),
            CertificateError::SigmaNotAPermutation => {
                write!(f, "sigma is not a permutation (1-based images expected)")
            }
            CertificateError::SigmaLength { expected, got } => {
                write!(f, "sigma has {got} images, expected {expected}")
            }
        }
    }
}

impl std::error::Error for CertificateError {}

impl From<FieldError> for CertificateError {
    fn from(e: FieldError) -> Self {
        CertificateError::Scalar(e)
    }
}

fn bit_string(entries: &[Scalar]) -> String {
    entries.iter().map(|s| if s.is_one() { '1' } else { '0' }).collect()
}

fn parse_bit_row(field: &FieldSpec, text: &str, expected: usize) -> Result<Vec<Scalar>, CertificateError> {
    if text.len() != expected {
        return Err(CertificateError::BitRowLength {
            expected,
            got: text.len(),
        });
    }
    text.chars()
        .map(|c| match c {
            '0' => Ok(field.zero()),
            '1' => Ok(field.one()),
            _ => Err(CertificateError::BadBitChar {
                string: text.to_string(),
            }),
        })
        .collect()
}

fn parse_bit_matrix(
    field: &FieldSpec,
    rows: &[String],
    nrows: usize,
    ncols: usize,
) -> Result<Matrix, CertificateError> {
    if rows.len() != nrows {
        return Err(CertificateError::RowCount {
            expected: nrows,
            got: rows.len(),
        });
    }
    if nrows == 0 {
        return Ok(Matrix::zero(field, 0, ncols));
    }
    let parsed: Result<Vec<Vec<Scalar>>, _> = rows
        .iter()
        .map(|r| parse_bit_row(field, r, ncols))
        .collect();
    Ok(Matrix::from_rows(field, parsed?).expect("validated rectangular"))
}

fn parse_sigma(images_1based: &[usize], n: usize) -> Result<Permutation, CertificateError> {
    if images_1based.len() != n {
        return Err(CertificateError::SigmaLength {
            expected: n,
            got: images_1based.len(),
        });
    }
    let images: Vec<usize> = images_1based
        .iter()
        .map(|&i| i.checked_sub(1).ok_or(CertificateError::SigmaNotAPermutation))
        .collect::<Result<_, _>>()?;
    Permutation::from_images(images).map_err(|_| CertificateError::SigmaNotAPermutation)
}

fn sigma_images_1based(sigma: &Permutation) -> Vec<usize> {
    sigma.images().iter().map(|&i| i + 1).collect()
}

pub fn witness_section(w: &CoincidenceWitness) -> WitnessSection {
    WitnessSection {
        r: w.r,
        i: w.row + 1,
        j: w.col + 1,
        lhs: w.lhs.render(),
        rhs: w.rhs.render(),
    }
}

pub fn decomposition_section(d: &IdempotentDecomposition) -> DecompositionSection {
    DecompositionSection {
        k: d.k(),
        lambdas: d.lambdas.iter().map(Scalar::render).collect(),
        idempotents: d
            .idempotents
            .iter()
            .map(|e| (0..e.rows()).map(|r| bit_string(e.row(r))).collect())
            .collect(),
    }
}

pub fn decomposition_from_section(
    sec: &DecompositionSection,
    field: &FieldSpec,
    n: usize,
) -> Result<IdempotentDecomposition, CertificateError> {
    if sec.k != sec.lambdas.len() || sec.k != sec.idempotents.len() {
        return Err(CertificateError::CountMismatch {
            detail: format!(
                "k = {} but {} lambdas and {} idempotents",
                sec.k,
                sec.lambdas.len(),
                sec.idempotents.len()
            ),
        });
    }
    let lambdas: Result<Vec<Scalar>, FieldError> = sec
        .lambdas
        .iter()
        .map(|t| field.parse_scalar(t))
        .collect();
    let idempotents: Result<Vec<Matrix>, CertificateError> = sec
        .idempotents
        .iter()
        .map(|rows| parse_bit_matrix(field, rows, n, n))
        .collect();
    Ok(IdempotentDecomposition {
        field: field.clone(),
        n,
        lambdas: lambdas?,
        idempotents: idempotents?,
    })
}

pub fn canonical_section(cf: &CanonicalForm) -> CanonicalSection {
    CanonicalSection {
        sigma: sigma_images_1based(cf.sigma()),
        m: cf.m(),
        class_sizes: cf.class_sizes(),
        u: (0..cf.u().rows()).map(|r| bit_string(cf.u().row(r))).collect(),
        v: (0..cf.v().rows()).map(|r| bit_string(cf.v().row(r))).collect(),
    }
}

/// Raw canonical parts; block validation happens in `CanonicalForm::new`, so
/// a semantically invalid certificate surfaces as a verification failure
/// rather than a parse error.
pub struct CanonicalParts {
    pub sigma: Permutation,
    pub m: usize,
    pub u: Matrix,
    pub v: Matrix,
    pub class_sizes: [usize; 4],
}

pub fn canonical_parts_from_section(
    sec: &CanonicalSection,
    field: &FieldSpec,
    n: usize,
) -> Result<CanonicalParts, CertificateError> {
    let [m, s2, s3, s4] = sec.class_sizes;
    if m != sec.m {
        return Err(CertificateError::CountMismatch {
            detail: format!("m = {} but class_sizes[0] = {m}", sec.m),
        });
    }
    if m + s2 + s3 + s4 != n {
        return Err(CertificateError::CountMismatch {
            detail: format!("class sizes sum to {}, expected n = {n}", m + s2 + s3 + s4),
        });
    }
    let sigma = parse_sigma(&sec.sigma, n)?;
    let u = parse_bit_matrix(field, &sec.u, m, s2)?;
    let v = parse_bit_matrix(field, &sec.v, s3, m)?;
    Ok(CanonicalParts {
        sigma,
        m,
        u,
        v,
        class_sizes: sec.class_sizes,
    })
}

pub fn rankone_section(rod: &RankOneDecomposition) -> RankOneSection {
    RankOneSection {
        sigma: sigma_images_1based(&rod.sigma),
        mus: rod.mus.iter().map(Scalar::render).collect(),
        us: rod.us.iter().map(|u| bit_string(u)).collect(),
        vs: rod.vs.iter().map(|v| bit_string(v)).collect(),
    }
}

pub fn rankone_from_section(
    sec: &RankOneSection,
    field: &FieldSpec,
    n: usize,
) -> Result<RankOneDecomposition, CertificateError> {
    if sec.mus.len() != sec.us.len() || sec.mus.len() != sec.vs.len() {
        return Err(CertificateError::CountMismatch {
            detail: format!(
                "{} weights, {} u vectors, {} v vectors",
                sec.mus.len(),
                sec.us.len(),
                sec.vs.len()
            ),
        });
    }
    let sigma = parse_sigma(&sec.sigma, n)?;
    let mus: Result<Vec<Scalar>, FieldError> =
        sec.mus.iter().map(|t| field.parse_scalar(t)).collect();
    let us: Result<Vec<Vec<Scalar>>, CertificateError> = sec
        .us
        .iter()
        .map(|u| parse_bit_row(field, u, n))
        .collect();
    let vs: Result<Vec<Vec<Scalar>>, CertificateError> = sec
        .vs
        .iter()
        .map(|v| parse_bit_row(field, v, n))
        .collect();
    Ok(RankOneDecomposition {
        field: field.clone(),
        sigma,
        mus: mus?,
        us: us?,
        vs: vs?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hadamat::{fixtures, rank_one_decompose, spectral_decompose};

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    #[test]
    fn decomposition_section_roundtrip() {
        let a = fixtures::disjoint_pair_4x4(&q().from_i64(2), &q().from_i64(3));
        let d = spectral_decompose(&a).unwrap();
        let sec = decomposition_section(&d);
        assert_eq!(sec.k, 2);
        assert_eq!(sec.lambdas, vec!["2", "3"]);
        assert_eq!(sec.idempotents[0], vec!["1000", "0000", "1000", "0000"]);
        let back = decomposition_from_section(&sec, &q(), 4).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn rankone_section_roundtrip() {
        let a = fixtures::disjoint_pair_4x4(&q().from_i64(2), &q().from_i64(3));
        let rod = rank_one_decompose(&a).unwrap();
        let sec = rankone_section(&rod);
        assert_eq!(sec.sigma, vec![1, 2, 4, 3]);
        assert_eq!(sec.mus, vec!["2", "3"]);
        assert_eq!(sec.us, vec!["1000", "0110"]);
        assert_eq!(sec.vs, vec!["1001", "0101"]);
        let back = rankone_from_section(&sec, &q(), 4).unwrap();
        assert_eq!(back, rod);
    }

    #[test]
    fn canonical_section_roundtrip() {
        let e = fixtures::disjoint_pair_e1(&q())
            .add(&fixtures::disjoint_pair_e2(&q()))
            .unwrap();
        let cf = hadamat::canonical_form(&e).unwrap();
        let sec = canonical_section(&cf);
        assert_eq!(sec.sigma, vec![1, 2, 4, 3]);
        assert_eq!(sec.m, 2);
        assert_eq!(sec.class_sizes, [2, 1, 1, 0]);
        assert_eq!(sec.u, vec!["0", "1"]);
        assert_eq!(sec.v, vec!["11"]);
        let parts = canonical_parts_from_section(&sec, &q(), 4).unwrap();
        let rebuilt = CanonicalForm::new(parts.sigma, parts.m, parts.u, parts.v).unwrap();
        assert_eq!(&rebuilt, &cf);
    }

    #[test]
    fn structural_errors_are_reported() {
        assert!(matches!(
            parse_bit_row(&q(), "10x1", 4),
            Err(CertificateError::BadBitChar { .. })
        ));
        assert!(matches!(
            parse_bit_row(&q(), "101", 4),
            Err(CertificateError::BitRowLength { .. })
        ));
        assert!(matches!(
            parse_sigma(&[1, 1, 2], 3),
            Err(CertificateError::SigmaNotAPermutation)
        ));
        assert!(matches!(
            parse_sigma(&[0, 1, 2], 3),
            Err(CertificateError::SigmaNotAPermutation)
        ));
    }

    #[test]
    fn json_roundtrip_is_deterministic() {
        let a = fixtures::disjoint_pair_4x4(&q().from_i64(2), &q().from_i64(3));
        let d = spectral_decompose(&a).unwrap();
        let mut cert = Certificate::new(Status::Holds, Some(&q()));
        cert.decomposition = Some(decomposition_section(&d));
        let once = cert.to_json();
        let twice = Certificate::from_json(&once).unwrap().to_json();
        assert_eq!(once, twice);
    }
}
