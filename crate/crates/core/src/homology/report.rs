use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::TruncatedAlgebra;
use crate::format::emit;
use crate::detector::{detect_sequential_walks, CertificateJson, DetectorConfig, SequentialWalkCertificate};
use crate::reduction::{standard_reduction, ReductionError};

use super::{default_bound, global_dimension, inj_dim, proj_dim, simple, string_module, HomDim, HomologyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "NOT_SHOD")]
    NotShod,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NotShod => "NOT_SHOD",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// The reduction of one sequential walk and the dimensions of the string
/// module of the reduced walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub certificate: CertificateJson,
    pub walk: String,
    pub retained: Vec<String>,
    pub cut: Vec<String>,
    pub reduced_dim: usize,
    /// `name: source -> target`.
    pub reduced_arrows: Vec<String>,
    pub reduced_relations: Vec<String>,
    /// Empty when the reduced walk is a single point.
    pub reduced_walk: Vec<String>,
    pub module_dims: Vec<(String, usize)>,
    pub pd: HomDim,
    pub id: HomDim,
}

/// A certificate whose middle segments are not independent arrows of the
/// subcategory, so the reduction does not apply to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub walk: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShodReport {
    pub algebra: String,
    pub dim: usize,
    pub top_relations: Vec<String>,
    pub global_dimension: HomDim,
    pub max_walk_len: usize,
    pub syzygy_bound: usize,
    pub witnesses: Vec<Witness>,
    pub skipped: Vec<Skipped>,
    pub verdict: Verdict,
}

/// Runs the reduction pipeline on one certificate.
pub fn witness(a: &TruncatedAlgebra, cert: &SequentialWalkCertificate) -> Result<Witness, HomologyError> {
    witness_memo(a, cert, &mut HashMap::new())
}

/// Reduced algebra, reduced walk and module support, as text.
type MemoKey = (String, Vec<String>, Vec<(String, usize)>);

/// Many certificates of one algebra reduce to the same module; their
/// dimensions are computed once.
fn witness_memo(a: &TruncatedAlgebra, cert: &SequentialWalkCertificate, memo: &mut HashMap<MemoKey, (HomDim, HomDim)>) -> Result<Witness, HomologyError> {
    let q = a.quiver();
    let r = standard_reduction(a, cert)?;
    let b = TruncatedAlgebra::build(&r.presented)?;
    let bq = b.quiver();
    let module = match &r.w2 {
        Some(w) => string_module(&b, w)?,
        None => {
            let junction = cert.u(q).target();
            let x = r.retained.iter().position(|&p| p == junction).expect("junction is retained");
            simple(&b, x)
        }
    };
    let reduced_walk = r.w2.as_ref().map(|w| w.tokens(bq)).unwrap_or_default();
    let module_dims: Vec<(String, usize)> = module.support().into_iter().map(|x| (bq.point_name(x).to_string(), module.dims()[x])).collect();
    let key = (emit(&r.presented), reduced_walk.clone(), module_dims.clone());
    let (pd, id) = match memo.get(&key) {
        Some(&dims) => dims,
        None => {
            let bound = default_bound(&b);
            let dims = (proj_dim(&b, &module, bound)?, inj_dim(&b, &module, bound)?);
            memo.insert(key, dims);
            dims
        }
    };
    Ok(Witness {
        certificate: cert.to_json(q),
        walk: cert.full_walk.display(q).to_string(),
        retained: r.retained.iter().map(|&x| q.point_name(x).to_string()).collect(),
        cut: r.cut.iter().map(|&c| r.eae_quiver.quiver.arrow(c).name.clone()).collect(),
        reduced_dim: b.dim(),
        reduced_arrows: bq.arrows().iter().map(|ar| format!("{}: {} -> {}", ar.name, bq.point_name(ar.source), bq.point_name(ar.target))).collect(),
        reduced_relations: r.presented.relations.iter().map(|rel| rel.display(bq)).collect(),
        reduced_walk,
        module_dims,
        pd,
        id,
    })
}

/// Detects sequential walks and, for each one, checks that the string
/// module of the reduced walk has projective and injective dimension above
/// one. Any certificate failing that check is an error, never a verdict.
pub fn shod_obstruction_report(a: &TruncatedAlgebra, cfg: &DetectorConfig) -> Result<ShodReport, HomologyError> {
    a.require_admissible()?;
    let certs = detect_sequential_walks(a, cfg)?;
    let q = a.quiver();
    let mut witnesses = Vec::with_capacity(certs.len());
    let mut skipped = Vec::new();
    let mut memo = HashMap::new();
    for cert in &certs {
        let w = match witness_memo(a, cert, &mut memo) {
            Ok(w) => w,
            Err(HomologyError::Reduction(e @ (ReductionError::SegmentResidueZero(_) | ReductionError::SegmentResiduesDependent(_)))) => {
                skipped.push(Skipped { walk: cert.full_walk.display(q).to_string(), reason: e.to_string() });
                continue;
            }
            Err(e) => return Err(e),
        };
        if !w.pd.exceeds(1) || !w.id.exceeds(1) {
            return Err(HomologyError::InternalInconsistency(format!("walk {} gives pd {} and id {}", w.walk, w.pd, w.id)));
        }
        witnesses.push(w);
    }
    let bound = default_bound(a);
    Ok(ShodReport {
        algebra: a.bound().name.clone(),
        dim: a.dim(),
        top_relations: a.top_relations()?.iter().map(|r| r.display(q)).collect(),
        global_dimension: global_dimension(a, bound)?,
        max_walk_len: cfg.max_walk_len,
        syzygy_bound: bound,
        verdict: if witnesses.is_empty() { Verdict::Inconclusive } else { Verdict::NotShod },
        witnesses,
        skipped,
    })
}
