//! Split Weil witnesses for valid monomials and coverage certificates.
//!
//! For a valid `Δ` the family of induced CM-types `φ_s(t) = φ(t∘s)`,
//! `s ∈ Δ`, is balanced: `Σ_s φ_s(t) = |(t∘Δ) ∩ Φ| = p` for every `t`. The
//! product of the corresponding CM abelian varieties, with the diagonal
//! action of the Galois closure, is then of split Weil type, and its Weil
//! classes pull back onto the lines indexed by the translates `t∘Δ`. One
//! witness per Galois orbit therefore covers every valid monomial.
//!
//! The split hermitian form is not constructed here; it is implied by the
//! balance condition.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cm::{validate_cm_type, CmType, RegularCmType};
use crate::group::{build_group, embedding_set, EmbeddingSet};
use crate::pohlmann::{enumerate_valid, galois_orbits, valid_delta, EnumError};
use crate::points::{binomial, k_subsets, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{delta} is not a valid monomial of degree {p}")]
    NotValid { delta: PointSet, p: usize },
    #[error("balanced sum at element {element} is {value}, expected {p}")]
    BalanceFailure { element: usize, value: usize, p: usize },
    #[error("expected {expected} CM-types in the family, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("CM-types in the family live on different groups")]
    GroupMismatch,
    #[error(transparent)]
    Enum(#[from] EnumError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FamilyMember {
    /// The embedding `s ∈ Δ`.
    pub point: usize,
    /// Group elements `t` with `t∘s ∈ Φ`.
    pub members: PointSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct WeilData {
    /// Rank of `H^1` of the product over the Galois closure.
    pub d: usize,
    pub weil_rank_over_f: usize,
    pub weil_dim_over_q: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SplitWeilWitness {
    pub phi: PointSet,
    pub delta: PointSet,
    pub p: usize,
    pub family: Vec<FamilyMember>,
    /// `Σ_{s∈Δ} φ_s(t)` indexed by group element `t`.
    pub balanced_transcript: Vec<usize>,
    pub covered_translates: Vec<PointSet>,
    pub weil_data: WeilData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CoverageCertificate {
    pub phi: PointSet,
    pub p: usize,
    pub orbit_reps: Vec<PointSet>,
    pub witnesses: Vec<SplitWeilWitness>,
    pub coverage: Vec<PointSet>,
    pub valid_set: Vec<PointSet>,
    pub verdict: bool,
}

fn translates_of(carrier: &EmbeddingSet, delta: PointSet) -> Vec<PointSet> {
    let set: BTreeSet<PointSet> = carrier
        .group()
        .elements()
        .map(|t| carrier.translate(t, delta))
        .collect();
    set.into_iter().collect()
}

pub fn split_weil_witness(
    phi: &CmType,
    delta: PointSet,
    p: usize,
) -> Result<SplitWeilWitness, WitnessError> {
    if !valid_delta(phi, delta, p) {
        return Err(WitnessError::NotValid { delta, p });
    }
    let group = phi.group();
    let family: Vec<RegularCmType> = delta.iter().map(|s| phi.induced(s)).collect();
    let balanced_transcript: Vec<usize> = group
        .elements()
        .map(|t| family.iter().filter(|f| f.contains(t)).count())
        .collect();
    if let Some((element, &value)) = balanced_transcript
        .iter()
        .enumerate()
        .find(|(_, &v)| v != p)
    {
        return Err(WitnessError::BalanceFailure { element, value, p });
    }
    Ok(SplitWeilWitness {
        phi: phi.members(),
        delta,
        p,
        family: delta
            .iter()
            .zip(&family)
            .map(|(point, f)| FamilyMember {
                point,
                members: f.members(),
            })
            .collect(),
        balanced_transcript,
        covered_translates: translates_of(phi.carrier(), delta),
        weil_data: WeilData {
            d: 2 * p,
            weil_rank_over_f: 1,
            weil_dim_over_q: group.order(),
        },
    })
}

/// Whether `Σ_i φ_i(t) = p` for every group element `t`.
pub fn is_balanced_family(families: &[RegularCmType], p: usize) -> Result<bool, WitnessError> {
    if families.len() != 2 * p {
        return Err(WitnessError::SizeMismatch {
            expected: 2 * p,
            got: families.len(),
        });
    }
    let Some(first) = families.first() else {
        return Ok(true);
    };
    let group = first.group();
    if families.iter().any(|f| f.group() != group) {
        return Err(WitnessError::GroupMismatch);
    }
    Ok(group
        .elements()
        .all(|t| families.iter().filter(|f| f.contains(t)).count() == p))
}

/// One witness per Galois orbit of valid monomials, and the check that
/// their translates exhaust the valid set.
pub fn coverage_certificate(phi: &CmType, p: usize) -> Result<CoverageCertificate, WitnessError> {
    let valid = enumerate_valid(phi, p);
    let orbits = galois_orbits(&valid, phi.carrier())?;
    let orbit_reps: Vec<PointSet> = orbits.iter().map(|o| o[0]).collect();
    let witnesses = orbit_reps
        .par_iter()
        .map(|&d| split_weil_witness(phi, d, p))
        .collect::<Result<Vec<_>, _>>()?;
    let coverage: BTreeSet<PointSet> = witnesses
        .iter()
        .flat_map(|w| w.covered_translates.iter().copied())
        .collect();
    let coverage: Vec<PointSet> = coverage.into_iter().collect();
    Ok(CoverageCertificate {
        phi: phi.members(),
        p,
        verdict: coverage == valid,
        orbit_reps,
        witnesses,
        coverage,
        valid_set: valid,
    })
}

/// The individual checks run by the verifier, in the order they are run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Parse,
    GroupAxioms,
    EmbeddingSet,
    CmType,
    Degree,
    DeltaValidity,
    OrbitRepresentative,
    InducedType,
    BalancedTranscript,
    Translates,
    WeilData,
    Coverage,
    Verdict,
    ContentHash,
}

impl Check {
    pub fn code(self) -> &'static str {
        match self {
            Check::Parse => "E_PARSE",
            Check::GroupAxioms => "E_GROUP",
            Check::EmbeddingSet => "E_EMBEDDING",
            Check::CmType => "E_CMTYPE",
            Check::Degree => "E_DEGREE",
            Check::DeltaValidity => "E_DELTA_INVALID",
            Check::OrbitRepresentative => "E_ORBIT_REP",
            Check::InducedType => "E_INDUCED_TYPE",
            Check::BalancedTranscript => "E_TRANSCRIPT",
            Check::Translates => "E_TRANSLATES",
            Check::WeilData => "E_WEIL_DATA",
            Check::Coverage => "E_COVERAGE",
            Check::Verdict => "E_VERDICT",
            Check::ContentHash => "E_CONTENT_HASH",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    pub check: Check,
    pub code: &'static str,
    pub certificate: Option<usize>,
    pub witness: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(check: Check, message: impl Into<String>) -> Self {
        Diagnostic {
            check,
            code: check.code(),
            certificate: None,
            witness: None,
            message: message.into(),
        }
    }

    fn at(mut self, certificate: usize, witness: Option<usize>) -> Self {
        self.certificate = Some(certificate);
        self.witness = witness;
        self
    }
}

/// Outcome of verification: pass, or the first failing check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verification {
    pub passed: bool,
    pub certificates_checked: usize,
    pub witnesses_checked: usize,
    pub failure: Option<Diagnostic>,
}

impl Verification {
    pub fn fail(diag: Diagnostic) -> Self {
        Verification {
            passed: false,
            certificates_checked: 0,
            witnesses_checked: 0,
            failure: Some(diag),
        }
    }
}

/// The instance a certificate speaks about, as raw data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedInstance<'a> {
    pub order: usize,
    pub iota: usize,
    pub table: &'a [Vec<usize>],
    pub factors: &'a [Vec<usize>],
    pub cm_type: &'a [usize],
}

/// Re-checks certificates from raw data: group axioms, CM-type axioms,
/// validity of every witnessed monomial, induced types, balance,
/// translates and coverage of a brute-force valid set.
///
/// Fails with [`EnumError::CapExceeded`] when a brute-force recount would
/// exceed `cap` subsets.
pub fn verify_witness(
    instance: &CertifiedInstance<'_>,
    certificates: &[CoverageCertificate],
    cap: u128,
) -> Result<Verification, EnumError> {
    let group = match build_group(instance.order, instance.table, instance.iota) {
        Ok(g) => Arc::new(g),
        Err(e) => return Ok(Verification::fail(Diagnostic::new(Check::GroupAxioms, e.to_string()))),
    };
    let carrier = match embedding_set(&group, instance.factors) {
        Ok(s) => Arc::new(s),
        Err(e) => return Ok(Verification::fail(Diagnostic::new(Check::EmbeddingSet, e.to_string()))),
    };
    if let Some(&bad) = instance.cm_type.iter().find(|&&s| s >= carrier.len()) {
        return Ok(Verification::fail(Diagnostic::new(
            Check::CmType,
            format!("point {bad} out of range"),
        )));
    }
    let members = PointSet::from_indices(instance.cm_type.iter().copied());
    let phi = match validate_cm_type(&carrier, members) {
        Ok(c) => c,
        Err(e) => return Ok(Verification::fail(Diagnostic::new(Check::CmType, e.to_string()))),
    };
    let m = carrier.len();
    for cert in certificates.iter().filter(|c| 2 * c.p <= m) {
        let count = binomial(m, 2 * cert.p);
        if count > cap {
            return Err(EnumError::CapExceeded { m, k: 2 * cert.p, count, cap });
        }
    }

    let mut witnesses_checked = 0;
    for (ci, cert) in certificates.iter().enumerate() {
        if let Err(diag) = verify_one(&phi, cert) {
            let witness = diag.witness;
            let mut v = Verification::fail(diag.at(ci, witness));
            v.certificates_checked = ci;
            v.witnesses_checked = witnesses_checked;
            return Ok(v);
        }
        witnesses_checked += cert.witnesses.len();
    }
    Ok(Verification {
        passed: true,
        certificates_checked: certificates.len(),
        witnesses_checked,
        failure: None,
    })
}

/// Validity recomputed from the definition: translate `Δ`, intersect with `Φ`.
fn direct_valid(phi: &CmType, delta: PointSet, p: usize) -> bool {
    let carrier = phi.carrier();
    if delta.len() != 2 * p || !delta.is_subset(carrier.all()) {
        return false;
    }
    carrier.group().elements().all(|t| {
        delta
            .iter()
            .filter(|&s| phi.contains(carrier.act(t, s)))
            .count()
            == p
    })
}

fn verify_one(phi: &CmType, cert: &CoverageCertificate) -> Result<(), Diagnostic> {
    let carrier = phi.carrier();
    let group = carrier.group();
    let p = cert.p;
    let fail = |check, wi: Option<usize>, msg: String| {
        let mut d = Diagnostic::new(check, msg);
        d.witness = wi;
        d
    };

    if cert.phi != phi.members() {
        return Err(fail(Check::CmType, None, format!("certificate CM-type {} differs from instance", cert.phi)));
    }
    if 2 * p > carrier.len() {
        return Err(fail(Check::Degree, None, format!("degree {p} exceeds m/2 = {}", carrier.half())));
    }
    for (wi, w) in cert.witnesses.iter().enumerate() {
        let at = Some(wi);
        if w.phi != phi.members() {
            return Err(fail(Check::CmType, at, format!("witness CM-type {} differs from instance", w.phi)));
        }
        if w.p != p || w.delta.len() != 2 * p {
            return Err(fail(
                Check::Degree,
                at,
                format!("witness degree {} with |delta| = {}, certificate degree {p}", w.p, w.delta.len()),
            ));
        }
        if !direct_valid(phi, w.delta, p) {
            return Err(fail(Check::DeltaValidity, at, format!("{} fails the validity criterion", w.delta)));
        }
        let least = group
            .elements()
            .map(|t| carrier.translate(t, w.delta))
            .min()
            .unwrap_or(w.delta);
        if least != w.delta {
            return Err(fail(
                Check::OrbitRepresentative,
                at,
                format!("{} is not the least element of its orbit ({least} is)", w.delta),
            ));
        }
        let points: Vec<usize> = w.family.iter().map(|f| f.point).collect();
        if points != w.delta.to_vec() {
            return Err(fail(Check::InducedType, at, "family is not indexed by delta in increasing order".into()));
        }
        for f in &w.family {
            let expected: PointSet = group
                .elements()
                .filter(|&t| phi.contains(carrier.act(t, f.point)))
                .collect();
            if f.members != expected {
                return Err(fail(
                    Check::InducedType,
                    at,
                    format!("induced type at point {} is {}, expected {expected}", f.point, f.members),
                ));
            }
        }
        let transcript: Vec<usize> = group
            .elements()
            .map(|t| w.family.iter().filter(|f| f.members.contains(t)).count())
            .collect();
        if transcript != w.balanced_transcript || transcript.iter().any(|&v| v != p) {
            return Err(fail(
                Check::BalancedTranscript,
                at,
                format!("transcript {:?} is not identically {p}", w.balanced_transcript),
            ));
        }
        let translates: BTreeSet<PointSet> = group
            .elements()
            .map(|t| carrier.translate(t, w.delta))
            .collect();
        if w.covered_translates != translates.into_iter().collect::<Vec<_>>() {
            return Err(fail(Check::Translates, at, "covered translates do not match".into()));
        }
        let expected = WeilData {
            d: 2 * p,
            weil_rank_over_f: 1,
            weil_dim_over_q: group.order(),
        };
        if w.weil_data != expected {
            return Err(fail(Check::WeilData, at, format!("weil data {:?}, expected {expected:?}", w.weil_data)));
        }
    }

    let reps: Vec<PointSet> = cert.witnesses.iter().map(|w| w.delta).collect();
    if reps != cert.orbit_reps {
        return Err(fail(Check::Coverage, None, "orbit representatives do not match witnesses".into()));
    }
    let union: BTreeSet<PointSet> = cert
        .witnesses
        .iter()
        .flat_map(|w| w.covered_translates.iter().copied())
        .collect();
    let union: Vec<PointSet> = union.into_iter().collect();
    if union != cert.coverage {
        return Err(fail(Check::Coverage, None, "coverage is not the union of covered translates".into()));
    }
    let valid: Vec<PointSet> = k_subsets(carrier.len(), 2 * p)
        .filter(|&d| direct_valid(phi, d, p))
        .collect();
    if valid != cert.valid_set {
        return Err(fail(
            Check::Coverage,
            None,
            format!("valid set has {} monomials, certificate lists {}", valid.len(), cert.valid_set.len()),
        ));
    }
    if union != valid {
        return Err(fail(Check::Coverage, None, "witness translates do not cover the valid set".into()));
    }
    if !cert.verdict {
        return Err(fail(Check::Verdict, None, "verdict is false although coverage holds".into()));
    }
    Ok(())
}
