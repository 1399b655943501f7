//! Reports, certificate documents and oracle summaries.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cm::enumerate_cm_types;
use crate::error::Result;
use crate::io::canonical::{content_hash, to_canonical_json};
use crate::io::instance::{Instance, InstanceSpec};
use crate::lattice::{check_via_system, lattice_rank, orbit_matrix, reduced_validity_system, LatticeRank};
use crate::pohlmann::{
    classify, classify_parallel, enumerate_valid, enumerate_valid_bruteforce, galois_orbits,
    DecompositionReport,
};
use crate::points::{k_subsets, PointSet};
use crate::witness::{coverage_certificate, verify_witness, Check, CertifiedInstance, CoverageCertificate, Diagnostic, Verification};
use crate::cm::CmType;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CERTIFICATE_KIND: &str = "cmhodge-certificate";

/// Runs `f` on a dedicated pool of `jobs` threads (0 means rayon's default).
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InstanceEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub iota: usize,
    pub table: Vec<Vec<usize>>,
    pub factors: Vec<Vec<usize>>,
    pub cm_type: Vec<usize>,
    pub embedding_count: usize,
}

impl InstanceEcho {
    pub fn of(instance: &Instance) -> Self {
        InstanceEcho {
            name: instance.spec.name.clone(),
            order: instance.group.order(),
            iota: instance.group.iota(),
            table: instance.group.rows(),
            factors: instance.carrier.subgroups(),
            cm_type: instance.phi.members().to_vec(),
            embedding_count: instance.carrier.len(),
        }
    }

    pub fn to_spec(&self) -> InstanceSpec {
        InstanceSpec {
            name: self.name.clone(),
            order: self.order,
            iota: self.iota,
            table: self.table.clone(),
            factors: self.factors.clone(),
            cm_type: self.cm_type.clone(),
            degrees: Default::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeSummary {
    pub p: usize,
    pub hodge_dim: usize,
    /// Dimension of the span of `p`-fold products of degree-2 classes of
    /// the variety itself.
    pub lefschetz_dim: usize,
    pub exotic_count: usize,
    pub exotic_deltas: Vec<PointSet>,
    pub orbit_count: usize,
    pub valid_pair_count: usize,
}

impl From<&DecompositionReport> for DegreeSummary {
    fn from(r: &DecompositionReport) -> Self {
        DegreeSummary {
            p: r.p,
            hodge_dim: r.hodge_dim,
            lefschetz_dim: r.lefschetz_dim,
            exotic_count: r.exotic_deltas.len(),
            exotic_deltas: r.exotic_deltas.clone(),
            orbit_count: r.orbits.len(),
            valid_pair_count: r.valid_pair_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HodgeEntry {
    pub p: usize,
    pub q: usize,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HodgeRow {
    pub r: usize,
    pub entries: Vec<HodgeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub tool_version: String,
    pub instance: InstanceEcho,
    pub degrees: Vec<DegreeSummary>,
    pub hodge_numbers: Vec<HodgeRow>,
    pub lattice_rank: LatticeRank,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Vec<CoverageCertificate>>,
    pub content_hash: String,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }
}

/// Hash of the canonical form with the `contentHash` key removed.
fn hash_without_key<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    if let Value::Object(map) = &mut v {
        map.remove("contentHash");
    }
    content_hash(&v)
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub degrees: Vec<usize>,
    pub jobs: usize,
    pub certificates: bool,
}

fn classify_all(phi: &CmType, degrees: &[usize], parallel: bool) -> Result<Vec<DecompositionReport>> {
    let run = |&p: &usize| if parallel { classify_parallel(phi, p) } else { classify(phi, p) };
    let out: std::result::Result<Vec<_>, _> = if parallel {
        degrees.par_iter().map(run).collect()
    } else {
        degrees.iter().map(run).collect()
    };
    Ok(out?)
}

pub fn analyze(instance: &Instance, opts: &AnalyzeOptions) -> Result<Report> {
    let parallel = opts.jobs != 1;
    let phi = &instance.phi;
    let m = instance.carrier.len();
    let reports = with_jobs(opts.jobs, || classify_all(phi, &opts.degrees, parallel))?;
    let certificates = if opts.certificates {
        Some(certificates_for(instance, &opts.degrees, opts.jobs)?)
    } else {
        None
    };
    let hodge_numbers = (0..=m)
        .map(|r| HodgeRow {
            r,
            entries: phi
                .hodge_numbers(r)
                .into_iter()
                .map(|((p, q), count)| HodgeEntry {
                    p,
                    q,
                    count: count as u64,
                })
                .collect(),
        })
        .collect();
    let mut report = Report {
        tool_version: TOOL_VERSION.to_string(),
        instance: InstanceEcho::of(instance),
        degrees: reports.iter().map(DegreeSummary::from).collect(),
        hodge_numbers,
        lattice_rank: lattice_rank(&orbit_matrix(phi)),
        certificates,
        content_hash: String::new(),
    };
    report.content_hash = hash_without_key(&report)?;
    Ok(report)
}

fn certificates_for(instance: &Instance, degrees: &[usize], jobs: usize) -> Result<Vec<CoverageCertificate>> {
    let phi = &instance.phi;
    let certs: std::result::Result<Vec<_>, _> = with_jobs(jobs, || {
        degrees.par_iter().map(|&p| coverage_certificate(phi, p)).collect()
    });
    Ok(certs?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CertificateDocument {
    pub kind: String,
    pub tool_version: String,
    pub instance: InstanceEcho,
    pub certificates: Vec<CoverageCertificate>,
    pub content_hash: String,
}

impl CertificateDocument {
    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn recompute_hash(&self) -> Result<String> {
        hash_without_key(self)
    }

    /// Refreshes the content hash after an edit.
    pub fn seal(&mut self) -> Result<()> {
        self.content_hash = self.recompute_hash()?;
        Ok(())
    }
}

pub fn certificate_document(instance: &Instance, degrees: &[usize], jobs: usize) -> Result<CertificateDocument> {
    let mut doc = CertificateDocument {
        kind: CERTIFICATE_KIND.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        instance: InstanceEcho::of(instance),
        certificates: certificates_for(instance, degrees, jobs)?,
        content_hash: String::new(),
    };
    doc.seal()?;
    Ok(doc)
}

/// Parses and verifies a certificate document.
pub fn verify_document(text: &str, cap: u128) -> Result<Verification> {
    let doc: CertificateDocument = serde_json::from_str(text)?;
    verify_certificate_document(&doc, cap)
}

pub fn verify_certificate_document(doc: &CertificateDocument, cap: u128) -> Result<Verification> {
    if doc.kind != CERTIFICATE_KIND {
        return Ok(Verification::fail(Diagnostic::new(
            Check::Parse,
            format!("unexpected document kind {:?}", doc.kind),
        )));
    }
    let inst = &doc.instance;
    let certified = CertifiedInstance {
        order: inst.order,
        iota: inst.iota,
        table: &inst.table,
        factors: &inst.factors,
        cm_type: &inst.cm_type,
    };
    let mut verdict = verify_witness(&certified, &doc.certificates, cap)?;
    if verdict.passed {
        let expected_m: usize = inst
            .factors
            .iter()
            .map(|h| inst.order / h.len().max(1))
            .sum();
        if inst.embedding_count != expected_m {
            verdict.passed = false;
            verdict.failure = Some(Diagnostic::new(
                Check::EmbeddingSet,
                format!("embeddingCount {} but factors give {expected_m}", inst.embedding_count),
            ));
        } else if doc.recompute_hash()? != doc.content_hash {
            verdict.passed = false;
            verdict.failure = Some(Diagnostic::new(
                Check::ContentHash,
                "content hash does not match the document",
            ));
        }
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeltaListing {
    pub p: usize,
    pub count: usize,
    pub deltas: Vec<PointSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeltasDocument {
    pub tool_version: String,
    pub instance: InstanceEcho,
    pub orbits_only: bool,
    pub degrees: Vec<DeltaListing>,
}

pub fn deltas_document(instance: &Instance, degrees: &[usize], orbits_only: bool, jobs: usize) -> Result<DeltasDocument> {
    let phi = &instance.phi;
    let listings: std::result::Result<Vec<DeltaListing>, crate::error::Error> = with_jobs(jobs, || {
        degrees
            .par_iter()
            .map(|&p| {
                let valid = enumerate_valid(phi, p);
                let count = valid.len();
                let deltas = if orbits_only {
                    galois_orbits(&valid, &instance.carrier)?
                        .into_iter()
                        .map(|o| o[0])
                        .collect()
                } else {
                    valid
                };
                Ok(DeltaListing { p, count, deltas })
            })
            .collect()
    });
    Ok(DeltasDocument {
        tool_version: TOOL_VERSION.to_string(),
        instance: InstanceEcho::of(instance),
        orbits_only,
        degrees: listings?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleEntry {
    pub phi: PointSet,
    pub p: usize,
    pub bruteforce: usize,
    pub optimized: usize,
    pub system: usize,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleReport {
    pub tool_version: String,
    pub instance: InstanceEcho,
    pub cm_types_checked: usize,
    pub entries: Vec<OracleEntry>,
    pub agree: bool,
}

/// Compares the three routes to the valid set at one degree: brute force,
/// the pruned search, and filtering all `2p`-subsets through the reduced
/// linear system.
pub fn oracle_entry(phi: &CmType, p: usize, cap: u128) -> Result<OracleEntry> {
    let brute = enumerate_valid_bruteforce(phi, p, cap)?;
    let optimized = enumerate_valid(phi, p);
    let system = reduced_validity_system(phi, p);
    let filtered: Vec<PointSet> = k_subsets(phi.carrier().len(), 2 * p)
        .filter(|&d| check_via_system(&system, d, p))
        .collect();
    Ok(OracleEntry {
        phi: phi.members(),
        p,
        agree: brute == optimized && brute == filtered,
        bruteforce: brute.len(),
        optimized: optimized.len(),
        system: filtered.len(),
    })
}

pub struct OracleOptions {
    pub degrees: Vec<usize>,
    pub cap: u128,
    pub all_types: bool,
    pub type_cap: usize,
    pub jobs: usize,
}

pub fn oracle(instance: &Instance, opts: &OracleOptions) -> Result<OracleReport> {
    let types: Vec<CmType> = if opts.all_types {
        enumerate_cm_types(&instance.carrier, opts.type_cap)?.collect()
    } else {
        vec![instance.phi.clone()]
    };
    let jobs: Vec<(usize, usize)> = (0..types.len())
        .flat_map(|i| opts.degrees.iter().map(move |&p| (i, p)))
        .collect();
    let entries: Result<Vec<OracleEntry>> = with_jobs(opts.jobs, || {
        jobs.par_iter()
            .map(|&(i, p)| oracle_entry(&types[i], p, opts.cap))
            .collect()
    });
    let entries = entries?;
    Ok(OracleReport {
        tool_version: TOOL_VERSION.to_string(),
        instance: InstanceEcho::of(instance),
        cm_types_checked: types.len(),
        agree: entries.iter().all(|e| e.agree),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::catalog::catalog;
    use crate::pohlmann::DEFAULT_SUBSET_CAP;

    #[test]
    fn cyclic4_report() {
        let inst = catalog("cyclic:4").unwrap().build().unwrap();
        let opts = AnalyzeOptions {
            degrees: vec![0, 1, 2],
            jobs: 1,
            certificates: false,
        };
        let r = analyze(&inst, &opts).unwrap();
        let dims: Vec<usize> = r.degrees.iter().map(|d| d.hodge_dim).collect();
        assert_eq!(dims, vec![1, 2, 1]);
        assert_eq!(r.lattice_rank.raw, 3);
        let json = r.to_json().unwrap();
        assert!(json.ends_with("}\n"));
        assert_eq!(analyze(&inst, &AnalyzeOptions { jobs: 3, ..opts }).unwrap().to_json().unwrap(), json);
    }

    #[test]
    fn certificate_document_round_trip() {
        let inst = catalog("elementary-abelian:4").unwrap().build().unwrap();
        let doc = certificate_document(&inst, &[0, 1, 2], 1).unwrap();
        let text = doc.to_json().unwrap();
        let v = verify_document(&text, DEFAULT_SUBSET_CAP).unwrap();
        assert!(v.passed, "{v:?}");

        let mut tampered = doc.clone();
        tampered.content_hash = "00".into();
        let v = verify_certificate_document(&tampered, DEFAULT_SUBSET_CAP).unwrap();
        assert_eq!(v.failure.unwrap().check, Check::ContentHash);

        assert!(verify_document("{", DEFAULT_SUBSET_CAP).is_err());
    }

    #[test]
    fn oracle_agrees_on_klein() {
        let inst = catalog("elementary-abelian:4").unwrap().build().unwrap();
        let opts = OracleOptions {
            degrees: vec![0, 1, 2],
            cap: DEFAULT_SUBSET_CAP,
            all_types: true,
            type_cap: 20,
            jobs: 2,
        };
        let r = oracle(&inst, &opts).unwrap();
        assert!(r.agree);
        assert_eq!(r.cm_types_checked, 4);
    }

    #[test]
    fn deltas_orbits_only() {
        let inst = catalog("elementary-abelian:4").unwrap().build().unwrap();
        let d = deltas_document(&inst, &[1], true, 1).unwrap();
        assert_eq!(d.degrees[0].count, 4);
        assert_eq!(d.degrees[0].deltas.len(), 2);
    }
}
