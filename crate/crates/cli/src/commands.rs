//! Command implementations shared by the binary and the test suites.
//!
//! Exit codes are stable across commands: 0 for success / property holds,
//! 1 for property or verification failures, 2 for usage, parse and
//! hypothesis errors.

use serde::{Deserialize, Serialize};

use hadamat::{
    canonical_form, canonical_form_forced, check_finite, distinct_nonzero_entries, gen_idempotent01,
    gen_instance, gen_negative, rank_one_from_certificates, spectral_decompose,
    verify_decomposition, verify_rank_one, CanonicalError, CanonicalForm, CoincidenceError,
    DecomposeError, FieldSpec, GenMode, GenParams, IdempotentDecomposition, Matrix,
    RankOneError, Scalar,
};

use crate::certificate::{
    canonical_parts_from_section, canonical_section, decomposition_from_section,
    decomposition_section, rankone_from_section, rankone_section, witness_section, Certificate,
    Status,
};
use crate::format::{parse_field_flag, parse_matrix_file, render_matrix_file};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone)]
pub struct CommandOutcome {
    pub certificate: Certificate,
    pub exit_code: u8,
}

fn parse_error_outcome(message: String) -> CommandOutcome {
    let mut cert = Certificate::new(Status::Error, None);
    cert.reason = Some(message);
    CommandOutcome {
        certificate: cert,
        exit_code: EXIT_USAGE,
    }
}

fn coincidence_error_outcome(e: &CoincidenceError, field: &FieldSpec) -> CommandOutcome {
    let status = match e {
        CoincidenceError::ZeroMatrix => Status::ZeroMatrix,
        _ => Status::Error,
    };
    let mut cert = Certificate::new(status, Some(field));
    cert.reason = Some(e.to_string());
    CommandOutcome {
        certificate: cert,
        exit_code: EXIT_USAGE,
    }
}

fn decompose_error_outcome(e: DecomposeError, field: &FieldSpec) -> CommandOutcome {
    match e {
        DecomposeError::PropertyFails(w) => {
            let mut cert = Certificate::new(Status::Fails, Some(field));
            cert.witness = Some(witness_section(&w));
            CommandOutcome {
                certificate: cert,
                exit_code: EXIT_FAIL,
            }
        }
        DecomposeError::Coincidence(c) => coincidence_error_outcome(&c, field),
        other => {
            let mut cert = Certificate::new(Status::Error, Some(field));
            cert.reason = Some(other.to_string());
            CommandOutcome {
                certificate: cert,
                exit_code: EXIT_USAGE,
            }
        }
    }
}

fn canonical_error_outcome(e: CanonicalError, field: &FieldSpec) -> CommandOutcome {
    let (status, exit_code) = match &e {
        CanonicalError::CharTooSmall { .. } => (Status::CharTooSmall, EXIT_USAGE),
        CanonicalError::StructureViolation { .. } => (Status::Error, EXIT_FAIL),
        _ => (Status::Error, EXIT_USAGE),
    };
    let mut cert = Certificate::new(status, Some(field));
    cert.reason = Some(e.to_string());
    CommandOutcome {
        certificate: cert,
        exit_code,
    }
}

/// `check`: does `A^r = A^(r)` for r = 2, ..., n+1?
pub fn run_check(matrix_text: &str) -> CommandOutcome {
    let a = match parse_matrix_file(matrix_text) {
        Ok(a) => a,
        Err(e) => return parse_error_outcome(e.to_string()),
    };
    match check_finite(&a) {
        Ok(report) if report.holds => CommandOutcome {
            certificate: Certificate::new(Status::Holds, Some(a.field())),
            exit_code: EXIT_OK,
        },
        Ok(report) => {
            let mut cert = Certificate::new(Status::Fails, Some(a.field()));
            cert.witness = report.witness.as_ref().map(witness_section);
            CommandOutcome {
                certificate: cert,
                exit_code: EXIT_FAIL,
            }
        }
        Err(e) => coincidence_error_outcome(&e, a.field()),
    }
}

/// `decompose`: the disjoint-idempotent certificate.
pub fn run_decompose(matrix_text: &str) -> CommandOutcome {
    let a = match parse_matrix_file(matrix_text) {
        Ok(a) => a,
        Err(e) => return parse_error_outcome(e.to_string()),
    };
    match spectral_decompose(&a) {
        Ok(d) => {
            let mut cert = Certificate::new(Status::Holds, Some(a.field()));
            cert.decomposition = Some(decomposition_section(&d));
            CommandOutcome {
                certificate: cert,
                exit_code: EXIT_OK,
            }
        }
        Err(e) => decompose_error_outcome(e, a.field()),
    }
}

/// `canonical`: block form of an idempotent (0,1)-matrix. With `force`, the
/// characteristic gate is bypassed to expose the small-characteristic
/// structure violation.
pub fn run_canonical(matrix_text: &str, force: bool) -> CommandOutcome {
    let e = match parse_matrix_file(matrix_text) {
        Ok(e) => e,
        Err(err) => return parse_error_outcome(err.to_string()),
    };
    let result = if force {
        canonical_form_forced(&e)
    } else {
        canonical_form(&e)
    };
    match result {
        Ok(cf) => {
            let mut cert = Certificate::new(Status::Holds, Some(e.field()));
            cert.canonical = Some(canonical_section(&cf));
            CommandOutcome {
                certificate: cert,
                exit_code: EXIT_OK,
            }
        }
        Err(err) => canonical_error_outcome(err, e.field()),
    }
}

/// `rankone`: full certificate with decomposition, canonical form of the
/// summed idempotent, and the biorthogonal rank-one factorization.
pub fn run_rankone(matrix_text: &str) -> CommandOutcome {
    let a = match parse_matrix_file(matrix_text) {
        Ok(a) => a,
        Err(e) => return parse_error_outcome(e.to_string()),
    };
    let d = match spectral_decompose(&a) {
        Ok(d) => d,
        Err(e) => return decompose_error_outcome(e, a.field()),
    };
    let cf = match canonical_form(&d.idempotent_sum()) {
        Ok(cf) => cf,
        Err(e) => return canonical_error_outcome(e, a.field()),
    };
    match rank_one_from_certificates(&a, &d, &cf) {
        Ok(rod) => {
            let mut cert = Certificate::new(Status::Holds, Some(a.field()));
            cert.decomposition = Some(decomposition_section(&d));
            cert.canonical = Some(canonical_section(&cf));
            cert.rankone = Some(rankone_section(&rod));
            CommandOutcome {
                certificate: cert,
                exit_code: EXIT_OK,
            }
        }
        Err(RankOneError::Decompose(e)) => decompose_error_outcome(e, a.field()),
        Err(RankOneError::Canonical(e)) => canonical_error_outcome(e, a.field()),
        Err(e @ RankOneError::InternalContradiction(_)) => {
            let mut cert = Certificate::new(Status::Error, Some(a.field()));
            cert.reason = Some(e.to_string());
            CommandOutcome {
                certificate: cert,
                exit_code: EXIT_USAGE,
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Positive,
    Negative,
    Idempotent,
}

#[derive(Clone, Debug)]
pub struct GenerateRequest {
    pub kind: GenKind,
    pub field: FieldSpec,
    pub seed: u64,
    pub m: usize,
    pub s2: usize,
    pub s3: usize,
    pub s4: usize,
    pub k: usize,
    pub mode: GenMode,
    /// Size for negative instances, which are shaped internally.
    pub n: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct GeneratedArtifacts {
    pub matrix_file: String,
    pub certificate: Certificate,
}

/// `generate`: writes a matrix file plus its ground-truth certificate.
/// Usage errors come back as messages for exit code 2.
pub fn run_generate(req: &GenerateRequest) -> Result<GeneratedArtifacts, String> {
    let params = GenParams {
        seed: req.seed,
        field: req.field.clone(),
        m: req.m,
        s2: req.s2,
        s3: req.s3,
        s4: req.s4,
        k: req.k,
        mode: req.mode,
    };
    let mut artifacts = match req.kind {
        GenKind::Positive => {
            let (a, d) = gen_instance(&params).map_err(|e| e.to_string())?;
            let mut cert = Certificate::new(Status::Holds, Some(a.field()));
            cert.decomposition = Some(decomposition_section(&d));
            GeneratedArtifacts {
                matrix_file: render_matrix_file(&a),
                certificate: cert,
            }
        }
        GenKind::Idempotent => {
            let e = gen_idempotent01(&params).map_err(|e| e.to_string())?;
            let mut cert = Certificate::new(Status::Holds, Some(e.field()));
            // The canonical ground truth exists only over admissible characteristic.
            if e.field().characteristic_admits(e.rows()) {
                let cf = canonical_form(&e).expect("generated idempotent has a canonical form");
                cert.canonical = Some(canonical_section(&cf));
            }
            GeneratedArtifacts {
                matrix_file: render_matrix_file(&e),
                certificate: cert,
            }
        }
        GenKind::Negative => {
            let n = req.n.ok_or_else(|| "--n is required for --kind negative".to_string())?;
            let a = gen_negative(req.seed, &req.field, n).map_err(|e| e.to_string())?;
            let report = check_finite(&a).expect("negative instance is square and nonzero");
            let mut cert = Certificate::new(Status::Fails, Some(a.field()));
            cert.witness = report.witness.as_ref().map(witness_section);
            GeneratedArtifacts {
                matrix_file: render_matrix_file(&a),
                certificate: cert,
            }
        }
    };
    artifacts.certificate.meta.seed = Some(req.seed);
    artifacts.certificate.meta.rng = Some(hadamat::generator::RNG_ALGORITHM.to_string());
    Ok(artifacts)
}

/// `verify`: rechecks every section present in the certificate against the
/// matrix file. Returns the exit code and a human-readable message naming the
/// first failing check, if any.
pub fn run_verify(matrix_text: &str, cert_json: &str) -> (u8, String) {
    let a = match parse_matrix_file(matrix_text) {
        Ok(a) => a,
        Err(e) => return (EXIT_USAGE, format!("matrix: {e}")),
    };
    let cert = match Certificate::from_json(cert_json) {
        Ok(c) => c,
        Err(e) => return (EXIT_USAGE, format!("certificate: {e}")),
    };
    let field = a.field().clone();
    let n = a.rows();

    if let Some(w) = &cert.witness {
        if let Err(msg) = verify_witness(w, &a) {
            return (EXIT_FAIL, format!("witness: {msg}"));
        }
    }

    // The canonical section describes the summed idempotent when a
    // decomposition section is present, and the input matrix itself otherwise.
    let mut canonical_target = a.clone();

    if let Some(sec) = &cert.decomposition {
        let d = match decomposition_from_section(sec, &field, n) {
            Ok(d) => d,
            Err(e) => return (EXIT_USAGE, format!("decomposition: {e}")),
        };
        let defects = verify_decomposition(&d, &a);
        if let Some(first) = defects.first() {
            return (EXIT_FAIL, format!("decomposition: {first}"));
        }
        canonical_target = d.idempotent_sum();
    }

    if let Some(sec) = &cert.canonical {
        let parts = match canonical_parts_from_section(sec, &field, n) {
            Ok(p) => p,
            Err(e) => return (EXIT_USAGE, format!("canonical: {e}")),
        };
        let cf = match CanonicalForm::new(parts.sigma, parts.m, parts.u, parts.v) {
            Ok(cf) => cf,
            Err(e) => return (EXIT_FAIL, format!("canonical: {e}")),
        };
        if cf.class_sizes() != parts.class_sizes {
            return (EXIT_FAIL, "canonical: class size mismatch".to_string());
        }
        let rebuilt = match hadamat::reconstruct_idempotent(&cf, n) {
            Ok(r) => r,
            Err(e) => return (EXIT_FAIL, format!("canonical: {e}")),
        };
        if rebuilt != canonical_target {
            return (EXIT_FAIL, "canonical: reconstruction mismatch".to_string());
        }
    }

    if let Some(sec) = &cert.rankone {
        let rod = match rankone_from_section(sec, &field, n) {
            Ok(r) => r,
            Err(e) => return (EXIT_USAGE, format!("rankone: {e}")),
        };
        let defects = verify_rank_one(&rod, &a);
        if let Some(first) = defects.first() {
            return (EXIT_FAIL, format!("rankone: {first}"));
        }
    }

    (EXIT_OK, "ok: all present sections verify".to_string())
}

fn verify_witness(w: &crate::certificate::WitnessSection, a: &Matrix) -> Result<(), String> {
    let n = a.rows();
    if w.r < 2 || w.r > n + 1 {
        return Err(format!("power {} outside 2..={}", w.r, n + 1));
    }
    if w.i < 1 || w.i > n || w.j < 1 || w.j > n {
        return Err("entry index out of range".to_string());
    }
    let lhs = a
        .field()
        .parse_scalar(&w.lhs)
        .map_err(|e| format!("lhs: {e}"))?;
    let rhs = a
        .field()
        .parse_scalar(&w.rhs)
        .map_err(|e| format!("rhs: {e}"))?;
    if lhs == rhs {
        return Err("lhs and rhs coincide".to_string());
    }
    let pow = a.mat_pow(w.r).map_err(|e| e.to_string())?;
    let hpow = a.hadamard_pow(w.r);
    if pow.get(w.i - 1, w.j - 1) != &lhs {
        return Err(format!(
            "ordinary power entry is {}, certificate says {}",
            pow.get(w.i - 1, w.j - 1),
            w.lhs
        ));
    }
    if hpow.get(w.i - 1, w.j - 1) != &rhs {
        return Err(format!(
            "Hadamard power entry is {}, certificate says {}",
            hpow.get(w.i - 1, w.j - 1),
            w.rhs
        ));
    }
    Ok(())
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct EnumerateReport {
    pub field: String,
    pub n: usize,
    pub pool: Vec<String>,
    pub total: usize,
    pub holds: usize,
    pub fails: usize,
    pub zero_matrices: usize,
    /// True iff the finite power check and certificate existence agree on
    /// every nonzero matrix.
    pub certificate_agreement: bool,
    /// Enumeration indices of any disagreements.
    pub mismatches: Vec<usize>,
}

/// A valid certificate exists iff the canonical candidate is valid: weights
/// are the distinct nonzero entries, and each idempotent is the indicator of
/// its weight's positions. Any valid certificate is forced into this shape by
/// the verifier's disjointness and nonzero-idempotent rules.
fn certificate_exists(a: &Matrix) -> bool {
    let lambdas = distinct_nonzero_entries(a);
    if lambdas.is_empty() {
        return false;
    }
    let n = a.rows();
    let field = a.field().clone();
    let idempotents: Vec<Matrix> = lambdas
        .iter()
        .map(|l| {
            let mut e = Matrix::zero(&field, n, n);
            for r in 0..n {
                for c in 0..n {
                    if a.get(r, c) == l {
                        e.set(r, c, field.one());
                    }
                }
            }
            e
        })
        .collect();
    let d = IdempotentDecomposition {
        field,
        n,
        lambdas,
        idempotents,
    };
    verify_decomposition(&d, a).is_empty()
}

/// `enumerate`: every n x n matrix over the pool, tabulated, with the finite
/// check cross-validated against certificate existence.
pub fn run_enumerate(
    field_flag: &str,
    n: usize,
    pool_csv: &str,
    budget: u64,
) -> Result<(EnumerateReport, u8), String> {
    let field = parse_field_flag(field_flag).map_err(|e| e.to_string())?;
    let pool: Vec<Scalar> = pool_csv
        .split(',')
        .map(|t| field.parse_scalar(t.trim()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let all = hadamat::enumerate_small(&field, n, &pool, budget).map_err(|e| e.to_string())?;

    let mut report = EnumerateReport {
        field: field_flag.to_string(),
        n,
        pool: pool.iter().map(Scalar::render).collect(),
        total: all.len(),
        holds: 0,
        fails: 0,
        zero_matrices: 0,
        certificate_agreement: true,
        mismatches: Vec::new(),
    };
    for (index, (matrix, outcome)) in all.iter().enumerate() {
        match outcome {
            None => report.zero_matrices += 1,
            Some(r) if r.holds => report.holds += 1,
            Some(_) => report.fails += 1,
        }
        if let Some(r) = outcome {
            if r.holds != certificate_exists(matrix) {
                report.certificate_agreement = false;
                report.mismatches.push(index);
            }
        }
    }
    let exit = if report.certificate_agreement {
        EXIT_OK
    } else {
        EXIT_FAIL
    };
    Ok((report, exit))
}
