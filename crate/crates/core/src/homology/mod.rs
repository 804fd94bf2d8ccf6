//! Modules over a bound quiver algebra: representations, string modules,
//! minimal projective resolutions and the dimensions they measure.

mod report;
mod representation;
mod resolution;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use report::{shod_obstruction_report, witness, ShodReport, Skipped, Verdict, Witness};
pub use representation::{injective, projective, simple, string_module, Representation};
pub use resolution::{default_bound, ext_simple_dims, global_dimension, inj_dim, minimal_resolution, proj_dim, projective_cover, syzygy, HomDim, ProjectiveCover, SYZYGY_GROWTH_CAP};

use crate::algebra::{AlgebraError, TruncatedAlgebra};
use crate::detector::{assemble, check_sequential, top_index, Candidate, DetectorConfig, DetectorError, Orientation, SequentialWalkCertificate};
use crate::linalg::Mat;
use crate::quiver::{Letter, QuiverError, Walk};
use crate::reduction::ReductionError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Detector(#[from] DetectorError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("module is zero")]
    ZeroModule,
    #[error("walk `{0}` is not reduced")]
    NotReduced(String),
    #[error("not a string module: relation `{0}` does not vanish")]
    NotAString(String),
    #[error("relation `{0}` does not act by zero")]
    RelationNotSatisfied(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("bad module spec `{0}`: expected simple:<point>, proj:<point>, inj:<point> or string:<walk>")]
    BadModuleSpec(String),
}

/// Addresses one of the standard modules of an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleSpec {
    Simple(String),
    Projective(String),
    Injective(String),
    /// Walk tokens, or a point name for a one-point string.
    String(String),
}

impl FromStr for ModuleSpec {
    type Err = HomologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HomologyError::BadModuleSpec(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let rest = rest.trim();
        if rest.is_empty() {
            return Err(bad());
        }
        match kind.trim() {
            "simple" => Ok(ModuleSpec::Simple(rest.into())),
            "proj" => Ok(ModuleSpec::Projective(rest.into())),
            "inj" => Ok(ModuleSpec::Injective(rest.into())),
            "string" => Ok(ModuleSpec::String(rest.into())),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleSpec::Simple(x) => write!(f, "simple:{x}"),
            ModuleSpec::Projective(x) => write!(f, "proj:{x}"),
            ModuleSpec::Injective(x) => write!(f, "inj:{x}"),
            ModuleSpec::String(w) => write!(f, "string:{w}"),
        }
    }
}

impl ModuleSpec {
    pub fn build(&self, a: &TruncatedAlgebra) -> Result<Representation, HomologyError> {
        let q = a.quiver();
        match self {
            ModuleSpec::Simple(x) => Ok(simple(a, q.point(x)?)),
            ModuleSpec::Projective(x) => Ok(projective(a, q.point(x)?)),
            ModuleSpec::Injective(x) => Ok(injective(a, q.point(x)?)),
            ModuleSpec::String(w) => match q.point(w) {
                Ok(x) => Ok(simple(a, x)),
                Err(_) => string_module(a, &Walk::parse(q, w)?),
            },
        }
    }
}

/// At most one arrow in and one arrow out at every point.
pub fn is_nakayama(a: &TruncatedAlgebra) -> bool {
    let q = a.quiver();
    (0..q.num_points()).all(|x| q.arrows_from(x).count() <= 1 && q.arrows_into(x).count() <= 1)
}

/// Generated by paths.
pub fn is_monomial(a: &TruncatedAlgebra) -> bool {
    a.top_relations().map(|t| t.iter().all(|r| r.is_monomial())).unwrap_or(false)
}

/// Connected with no cycle in the underlying graph, parallel arrows and
/// loops included.
pub fn is_tree(a: &TruncatedAlgebra) -> bool {
    let q = a.quiver();
    let n = q.num_points();
    if n == 0 || q.num_arrows() + 1 != n {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for b in q.arrows_from(x).chain(q.arrows_into(x)) {
            let ar = q.arrow(b);
            for y in [ar.source, ar.target] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn is_uniserial(m: &Representation) -> bool {
    m.is_uniserial()
}

/// A point of the support that is the source of a top relation. Requires
/// projective dimension at least two.
pub fn support_starts_top_relation(a: &TruncatedAlgebra, m: &Representation) -> Result<Option<usize>, HomologyError> {
    if !proj_dim(a, m, default_bound(a))?.exceeds(1) {
        return Err(HomologyError::PreconditionUnmet("projective dimension is at most one".into()));
    }
    let tops = a.top_relations()?;
    Ok(m.support().into_iter().find(|&x| tops.iter().any(|r| r.source() == x)))
}

/// Builds `u w' v` from a uniserial module of projective and injective
/// dimension at least two over a monomial algebra of global dimension two:
/// `u` ends and `v` starts in the support, and `w'` runs along the support
/// between them.
pub fn sequential_walk_from_uniserial(a: &TruncatedAlgebra, m: &Representation) -> Result<SequentialWalkCertificate, HomologyError> {
    let unmet = |s: &str| Err(HomologyError::PreconditionUnmet(s.into()));
    if !is_monomial(a) {
        return unmet("algebra is not monomial");
    }
    let bound = default_bound(a);
    if global_dimension(a, bound)? != HomDim::Finite(2) {
        return unmet("global dimension is not two");
    }
    if !m.is_uniserial() {
        return unmet("module is not uniserial");
    }
    if !proj_dim(a, m, bound)?.exceeds(1) || !inj_dim(a, m, bound)?.exceeds(1) {
        return unmet("projective or injective dimension is at most one");
    }
    let (points, arrows) = composition_path(a, m);
    let tops = a.top_relations()?;
    let q = a.quiver();
    let cfg = DetectorConfig::for_algebra(a);
    for i in 0..points.len() {
        for j in i..points.len() {
            for rho in tops.iter().filter(|r| r.target() == points[i]) {
                for sigma in tops.iter().filter(|r| r.source() == points[j]) {
                    let w_prime = (i < j).then(|| Walk::new(q, arrows[i..j].iter().map(|&b| Letter::direct(b)).collect()).expect("support path composes"));
                    let cand = Candidate {
                        rho: rho.clone(),
                        u_branch: rho.paths().next().unwrap().clone(),
                        sigma: sigma.clone(),
                        v_branch: sigma.paths().next().unwrap().clone(),
                        w_prime,
                        orientation: Orientation::Forward,
                    };
                    if !check_sequential(a, &cand, &cfg)?.is_empty() {
                        continue;
                    }
                    let full_walk = assemble(&Orientation::Forward.walk(q, &cand.u_branch), cand.w_prime.as_ref(), &Orientation::Forward.walk(q, &cand.v_branch))
                        .expect("checked candidates compose");
                    return Ok(SequentialWalkCertificate {
                        rho_index: top_index(tops, q, rho)?,
                        sigma_index: top_index(tops, q, sigma)?,
                        rho: cand.rho,
                        u_branch: cand.u_branch,
                        sigma: cand.sigma,
                        v_branch: cand.v_branch,
                        w_prime: cand.w_prime,
                        orientation: Orientation::Forward,
                        full_walk,
                    });
                }
            }
        }
    }
    Err(HomologyError::InternalInconsistency("no sequential walk along the support of a uniserial module".into()))
}

/// Points of the radical layers of a uniserial module, top first, with an
/// arrow between consecutive layers acting nontrivially.
fn composition_path(a: &TruncatedAlgebra, m: &Representation) -> (Vec<usize>, Vec<usize>) {
    let q = a.quiver();
    let series = m.radical_series();
    let layer_point = |k: usize| {
        let next = series.get(k + 1).cloned().unwrap_or_else(|| vec![0; m.num_points()]);
        (0..m.num_points()).find(|&x| series[k][x] > next[x]).expect("uniserial layers are simple")
    };
    let points: Vec<usize> = (0..series.len()).map(layer_point).collect();
    let x = points[0];
    let rad = &m.radical_subspaces()[x];
    let comp = if rad.rows() == 0 { (0..m.dims()[x]).collect() } else { rad.complement_columns() };
    let mut v = representation::units(&comp[..1], m.dims()[x]).row(0).to_vec();
    let mut arrows = Vec::new();
    for k in 0..points.len() - 1 {
        let deeper = m.radical_power(k + 2);
        let arrow = q
            .arrows_from(points[k])
            .filter(|&b| q.arrow(b).target == points[k + 1])
            .find(|&b| {
                let w = m.map(b).apply(&v);
                !in_span(&deeper[points[k + 1]], &w)
            })
            .expect("consecutive layers are joined by an arrow");
        v = m.map(arrow).apply(&v);
        arrows.push(arrow);
    }
    (points, arrows)
}

fn in_span(basis: &Mat, v: &[crate::scalar::Scalar]) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    basis.rows() > 0 && basis.vstack(&Mat::from_rows(v.len(), vec![v.to_vec()])).rank() == basis.rows()
}

#[cfg(test)]
mod tests;
