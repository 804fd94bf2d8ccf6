//! Sequential walks: checking a proposed decomposition `w = u w' v` and
//! enumerating all of them up to a length bound.
//!
//! The disjointness condition on `w'` is split in two: no directed subpath of
//! `w'` lies in the ideal, and no directed subpath of `w'` sits on a branch of
//! a top relation in a way that touches the inner points of the branches of
//! `ρ` or `σ`. How "touches" is read is configurable, see [`B2Reading`].
//! Directed stretches crossing from `u` into `w'` or from `w'` into `v` must
//! also avoid the ideal, so the walk carries no zero relation besides `u`
//! and `v` (see [`DetectorConfig::junctions`]).

mod extension;
mod search;
mod string;

pub use extension::{detect_c_sequential_walks, relation_extension_quiver, CSequentialWalk, ExtensionQuiver};
pub use string::{detect_intertwined_double_zero, detect_sequential_pairs, find_bands, is_string_algebra, IntertwinedDoubleZero};

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, LinComb, TruncatedAlgebra};
use crate::quiver::{Letter, Path, Quiver, Walk};
use search::{junction_paths, Conditions, Search};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectorError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("not a top relation: `{0}`")]
    RelationNotTop(String),
    #[error("algebra has a non-monomial top relation")]
    NotMonomialAlgebra,
    #[error("algebra is not a string algebra")]
    NotStringAlgebra,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `u` and `v` are paths.
    Forward,
    /// `u` and `v` are inverses of paths.
    Inverse,
}

impl Orientation {
    pub fn flip(self) -> Orientation {
        match self {
            Orientation::Forward => Orientation::Inverse,
            Orientation::Inverse => Orientation::Forward,
        }
    }

    /// A relation branch read in this orientation.
    pub fn walk(self, q: &Quiver, branch: &Path) -> Walk {
        let w = Walk::from_path(q, branch).expect("relation branches are nontrivial");
        match self {
            Orientation::Forward => w,
            Orientation::Inverse => w.inverse(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Forward => "forward",
            Orientation::Inverse => "inverse",
        }
    }
}

/// Which subpaths of `w'` lying on a top relation branch are forbidden.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum B2Reading {
    /// The subpath itself passes through an inner point of a branch of `ρ`
    /// or `σ` (a point other than their sources and targets).
    #[default]
    SubpathMeetsInnerPoint,
    /// Some branch of the relation carrying the subpath passes through such
    /// an inner point, wherever the subpath lies.
    RelationMeetsInnerPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectorConfig {
    /// Bound on the letters of `w'`.
    pub max_walk_len: usize,
    pub max_band_len: usize,
    pub b2: B2Reading,
    /// Quantify over an echelon basis of the whole ideal instead of the top
    /// relations when looking for relation branches.
    pub widen_to_ideal: bool,
    /// Additionally forbid `w'` from visiting any inner point of a branch of
    /// `ρ` or `σ`.
    pub strict_points: bool,
    /// Forbid directed stretches running from `u` into `w'`, or from `w'`
    /// into `v`, that lie in the ideal.
    pub junctions: bool,
    /// Worker threads for the candidate grid; 1 runs inline.
    pub threads: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig { max_walk_len: 8, max_band_len: 8, b2: B2Reading::default(), widen_to_ideal: false, strict_points: false, junctions: true, threads: 1 }
    }
}

impl DetectorConfig {
    /// Walk bound `max(8, 2 * arrows)`.
    pub fn for_algebra(a: &TruncatedAlgebra) -> Self {
        DetectorConfig { max_walk_len: 8.max(2 * a.quiver().num_arrows()), ..Default::default() }
    }

    pub fn with_max_walk_len(self, max_walk_len: usize) -> Self {
        DetectorConfig { max_walk_len, ..self }
    }
}

/// Why a candidate is not a sequential walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    NotABranch,
    WrongEndpoints,
    NotReduced,
    InIdeal(Path),
    OnRelation(Path),
    InnerPoint(usize),
    SharesArrow(usize),
    AcrossJunction(Path),
}

impl Failure {
    /// Name of the violated condition.
    pub fn condition(&self) -> &'static str {
        match self {
            Failure::NotABranch | Failure::WrongEndpoints | Failure::NotReduced => "(a)",
            Failure::InIdeal(_) => "(b1)",
            Failure::OnRelation(_) | Failure::InnerPoint(_) => "(b2)",
            Failure::SharesArrow(_) => "(c)",
            Failure::AcrossJunction(_) => "(junction)",
        }
    }

    pub fn describe(&self, q: &Quiver) -> String {
        let what = match self {
            Failure::NotABranch => "u or v is not a branch of its relation".to_string(),
            Failure::WrongEndpoints => "u, w' and v do not compose".to_string(),
            Failure::NotReduced => "walk is not reduced".to_string(),
            Failure::InIdeal(p) => format!("{} lies in the ideal", p.display(q)),
            Failure::OnRelation(p) => format!("{} lies on a relation branch meeting u or v", p.display(q)),
            Failure::InnerPoint(x) => format!("w' visits inner point {}", q.point_name(*x)),
            Failure::SharesArrow(a) => format!("w' uses arrow {} of a branch", q.arrow(*a).name),
            Failure::AcrossJunction(p) => format!("{} runs across an end of w' and lies in the ideal", p.display(q)),
        };
        format!("{} {}", self.condition(), what)
    }
}

/// A proposed decomposition `w = u w' v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub rho: LinComb,
    pub u_branch: Path,
    pub sigma: LinComb,
    pub v_branch: Path,
    pub w_prime: Option<Walk>,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequentialWalkCertificate {
    pub rho_index: usize,
    pub sigma_index: usize,
    pub rho: LinComb,
    pub u_branch: Path,
    pub sigma: LinComb,
    pub v_branch: Path,
    /// `None` when `u` and `v` meet directly.
    pub w_prime: Option<Walk>,
    pub orientation: Orientation,
    pub full_walk: Walk,
}

/// Serialized form of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateJson {
    pub rho: String,
    pub u: Vec<String>,
    pub w_prime: Vec<String>,
    pub v: Vec<String>,
    pub sigma: String,
    pub orientation: Orientation,
}

impl SequentialWalkCertificate {
    pub fn u(&self, q: &Quiver) -> Walk {
        self.orientation.walk(q, &self.u_branch)
    }

    pub fn v(&self, q: &Quiver) -> Walk {
        self.orientation.walk(q, &self.v_branch)
    }

    pub fn w_prime_len(&self) -> usize {
        self.w_prime.as_ref().map_or(0, Walk::len)
    }

    pub fn candidate(&self) -> Candidate {
        Candidate {
            rho: self.rho.clone(),
            u_branch: self.u_branch.clone(),
            sigma: self.sigma.clone(),
            v_branch: self.v_branch.clone(),
            w_prime: self.w_prime.clone(),
            orientation: self.orientation,
        }
    }

    pub fn to_json(&self, q: &Quiver) -> CertificateJson {
        CertificateJson {
            rho: self.rho.display(q),
            u: self.u(q).tokens(q),
            w_prime: self.w_prime.as_ref().map(|w| w.tokens(q)).unwrap_or_default(),
            v: self.v(q).tokens(q),
            sigma: self.sigma.display(q),
            orientation: self.orientation,
        }
    }

    /// `(u)(w')(v)` in token syntax.
    pub fn display(&self, q: &Quiver) -> String {
        let wp = self.w_prime.as_ref().map(|w| w.display(q).to_string()).unwrap_or_default();
        format!("({})({})({})", self.u(q).display(q), wp, self.v(q).display(q))
    }

    fn sort_key(&self) -> (usize, usize, usize, Vec<Letter>, Orientation) {
        (self.rho_index, self.sigma_index, self.w_prime_len(), self.full_walk.letters().to_vec(), self.orientation)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub(crate) fn top_index(tops: &[LinComb], q: &Quiver, r: &LinComb) -> Result<usize, DetectorError> {
    tops.iter().position(|t| t.proportional(r)).ok_or_else(|| DetectorError::RelationNotTop(r.display(q)))
}

/// `u w' v`, or `None` when the pieces do not compose.
pub(crate) fn assemble(u: &Walk, w_prime: Option<&Walk>, v: &Walk) -> Option<Walk> {
    match w_prime {
        Some(w) => u.then(w)?.then(v),
        None => u.then(v),
    }
}

/// Checks every condition and returns the violations; empty means the
/// candidate is a sequential walk.
pub fn check_sequential(a: &TruncatedAlgebra, cand: &Candidate, cfg: &DetectorConfig) -> Result<Vec<Failure>, DetectorError> {
    let tops = a.top_relations()?;
    let q = a.quiver();
    let ri = top_index(tops, q, &cand.rho)?;
    let si = top_index(tops, q, &cand.sigma)?;
    if !tops[ri].paths().any(|p| *p == cand.u_branch) || !tops[si].paths().any(|p| *p == cand.v_branch) {
        return Ok(vec![Failure::NotABranch]);
    }
    let u = cand.orientation.walk(q, &cand.u_branch);
    let v = cand.orientation.walk(q, &cand.v_branch);
    let Some(full) = assemble(&u, cand.w_prime.as_ref(), &v) else {
        return Ok(vec![Failure::WrongEndpoints]);
    };
    let mut failures = Vec::new();
    if !full.is_reduced() {
        failures.push(Failure::NotReduced);
    }
    if let Some(w) = &cand.w_prime {
        let cond = Conditions::sequential(a, &tops[ri], &tops[si], cfg);
        let subpaths = w.directed_subpaths(q);
        failures.extend(subpaths.iter().filter(|p| a.contains_path(p)).map(|p| Failure::InIdeal(p.clone())));
        failures.extend(subpaths.iter().filter(|p| !a.contains_path(p) && cond.on_relation(p)).map(|p| Failure::OnRelation(p.clone())));
        if cfg.strict_points {
            let pts: BTreeSet<usize> = w.points().iter().copied().filter(|x| cond.is_inner(*x)).collect();
            failures.extend(pts.into_iter().map(Failure::InnerPoint));
        }
        let arrows: BTreeSet<usize> = w.letters().iter().map(|l| l.arrow).filter(|&x| cond.is_forbidden(x)).collect();
        failures.extend(arrows.into_iter().map(Failure::SharesArrow));
    }
    if cfg.junctions {
        let bad: Vec<Path> = junction_paths(a, &u, cand.w_prime.as_ref(), &v).into_iter().filter(|p| a.contains_path(p)).collect();
        let minimal = bad.iter().filter(|p| !bad.iter().any(|o| o != *p && p.contains_subpath(o)));
        failures.extend(minimal.cloned().map(Failure::AcrossJunction));
    }
    Ok(failures)
}

pub fn is_sequential(a: &TruncatedAlgebra, cand: &Candidate, cfg: &DetectorConfig) -> Result<bool, DetectorError> {
    Ok(check_sequential(a, cand, cfg)?.is_empty())
}

/// Runs `f` over the grid, on a pool when more than one thread is asked for.
pub(crate) fn run_grid<T: Send>(cells: Vec<(usize, usize)>, threads: usize, f: impl Fn(usize, usize) -> Vec<T> + Sync + Send) -> Vec<T> {
    if threads > 1 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            return pool.install(|| cells.par_iter().flat_map_iter(|&(i, j)| f(i, j)).collect());
        }
    }
    cells.into_iter().flat_map(|(i, j)| f(i, j)).collect()
}

/// Every sequential walk with `|w'| <= max_walk_len`, ordered by
/// (ρ index, σ index, |w'|, letters of the full walk, orientation).
pub fn detect_sequential_walks(a: &TruncatedAlgebra, cfg: &DetectorConfig) -> Result<Vec<SequentialWalkCertificate>, DetectorError> {
    let tops = a.top_relations()?;
    let q = a.quiver();
    let n = tops.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mut found = run_grid(cells, cfg.threads, |i, j| {
        let cond = Conditions::sequential(a, &tops[i], &tops[j], cfg);
        let mut out = Vec::new();
        for orientation in [Orientation::Forward, Orientation::Inverse] {
            for ub in tops[i].paths() {
                for vb in tops[j].paths() {
                    let u = orientation.walk(q, ub);
                    let v = orientation.walk(q, vb);
                    let search = Search::between(&cond, &[u.clone()], &[v.clone()], cfg.max_walk_len);
                    for w in search.run() {
                        let full = assemble(&u, w.as_ref(), &v).expect("search respects endpoints");
                        out.push(SequentialWalkCertificate {
                            rho_index: i,
                            sigma_index: j,
                            rho: tops[i].clone(),
                            u_branch: ub.clone(),
                            sigma: tops[j].clone(),
                            v_branch: vb.clone(),
                            w_prime: w,
                            orientation,
                            full_walk: full,
                        });
                    }
                }
            }
        }
        out
    });
    found.sort_by_cached_key(SequentialWalkCertificate::sort_key);
    Ok(found)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::TruncatedAlgebra;
    use crate::quiver::BoundQuiver;
    use crate::scalar::{Field, Scalar};

    pub(crate) fn algebra(points: &[&str], arrows: &[(&str, &str, &str)], rels: &[&[(i64, &str)]]) -> TruncatedAlgebra {
        let q = Quiver::new(
            points.iter().map(|s| s.to_string()).collect(),
            arrows.iter().map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string())).collect(),
        )
        .unwrap();
        let relations: Vec<LinComb> = rels
            .iter()
            .map(|r| LinComb::from_terms(&q, r.iter().map(|(c, p)| (Scalar::from_int(*c), Path::parse(&q, p).unwrap())).collect()).unwrap())
            .collect();
        let b = BoundQuiver::new("t", q, relations, 2, Field::Rationals).unwrap();
        let b = b.with_truncation(b.longest_branch() + 2);
        TruncatedAlgebra::build_auto(&b, 12).unwrap()
    }

    pub(crate) fn kronecker(rels: &[&[(i64, &str)]]) -> TruncatedAlgebra {
        algebra(&["1", "2", "3"], &[("a1", "1", "2"), ("b1", "1", "2"), ("a2", "2", "3"), ("b2", "2", "3")], rels)
    }

    pub(crate) fn seven_vertex() -> TruncatedAlgebra {
        let mut arrows = Vec::new();
        let names: Vec<(String, String, String, String)> =
            (1..=5).map(|i| (format!("a{i}"), format!("b{i}"), (i + 1).to_string(), String::new())).collect();
        for (a, b, mid, _) in &names {
            arrows.push((a.as_str(), "7", mid.as_str()));
            arrows.push((b.as_str(), mid.as_str(), "1"));
        }
        algebra(&["1", "2", "3", "4", "5", "6", "7"], &arrows, &[&[(1, "a1*b1"), (1, "a2*b2")], &[(1, "a3*b3"), (1, "a4*b4"), (1, "a5*b5")]])
    }

    pub(crate) fn six_point_pair() -> TruncatedAlgebra {
        algebra(
            &["1", "2", "3", "4", "5", "6"],
            &[("alpha", "1", "4"), ("beta", "4", "5"), ("gamma", "4", "3"), ("delta", "3", "2"), ("sigma", "6", "4"), ("eps", "6", "5")],
            &[&[(1, "alpha*beta")], &[(1, "gamma*delta")], &[(1, "sigma*beta")]],
        )
    }

    pub(crate) fn band() -> TruncatedAlgebra {
        algebra(
            &["1", "2", "3", "4", "5", "6"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4"), ("d", "3", "4"), ("e", "4", "5"), ("f", "5", "6")],
            &[&[(1, "a*b")], &[(1, "b*d")], &[(1, "d*e")], &[(1, "e*f")]],
        )
    }

    pub(crate) fn a4() -> TruncatedAlgebra {
        algebra(&["1", "2", "3", "4"], &[("alpha", "1", "2"), ("beta", "2", "3"), ("gamma", "3", "4")], &[&[(1, "alpha*beta")], &[(1, "beta*gamma")]])
    }

    fn cand(a: &TruncatedAlgebra, rho: usize, u: &str, sigma: usize, v: &str, w: &str, o: Orientation) -> Candidate {
        let q = a.quiver();
        let tops = a.top_relations().unwrap();
        Candidate {
            rho: tops[rho].clone(),
            u_branch: Path::parse(q, u).unwrap(),
            sigma: tops[sigma].clone(),
            v_branch: Path::parse(q, v).unwrap(),
            w_prime: (!w.is_empty()).then(|| Walk::parse(q, w).unwrap()),
            orientation: o,
        }
    }

    fn conditions(fs: &[Failure]) -> Vec<&'static str> {
        let mut c: Vec<_> = fs.iter().map(Failure::condition).collect();
        c.dedup();
        c
    }

    #[test]
    fn commutativity_square_walk_is_rejected() {
        let a = kronecker(&[&[(1, "a1*a2"), (1, "b1*b2")]]);
        let c = cand(&a, 0, "a1*a2", 0, "b1*b2", "~b2 ~a1", Orientation::Forward);
        let f = check_sequential(&a, &c, &DetectorConfig::default()).unwrap();
        assert_eq!(conditions(&f), ["(b2)", "(c)"]);
        assert!(detect_sequential_walks(&a, &DetectorConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn zero_relation_square_has_the_walk() {
        let a = kronecker(&[&[(1, "a1*a2")]]);
        let found = detect_sequential_walks(&a, &DetectorConfig::default()).unwrap();
        let walks: Vec<String> = found.iter().map(|c| c.full_walk.display(a.quiver()).to_string()).collect();
        assert!(walks.contains(&"a1 a2 ~b2 ~b1 a1 a2".to_string()), "{walks:?}");
    }

    #[test]
    fn sequential_pair_quiver_is_rejected_by_b2() {
        let a = six_point_pair();
        let q = a.quiver();
        let tops: Vec<String> = a.top_relations().unwrap().iter().map(|r| r.display(q)).collect();
        let ri = tops.iter().position(|t| t == "alpha*beta").unwrap();
        let si = tops.iter().position(|t| t == "gamma*delta").unwrap();
        let c = cand(&a, ri, "alpha*beta", si, "gamma*delta", "~eps sigma", Orientation::Forward);
        let f = check_sequential(&a, &c, &DetectorConfig::default()).unwrap();
        assert_eq!(f, [Failure::OnRelation(Path::parse(q, "sigma").unwrap())]);
    }

    #[test]
    fn seven_vertex_walk_is_accepted() {
        let a = seven_vertex();
        let c = cand(&a, 0, "a1*b1", 0, "a2*b2", "~b3 ~a3", Orientation::Forward);
        assert_eq!(check_sequential(&a, &c, &DetectorConfig::default()).unwrap(), []);
        let found = detect_sequential_walks(&a, &DetectorConfig::default()).unwrap();
        assert!(found.iter().any(|f| f.candidate() == c));
    }

    #[test]
    fn overlapping_relations_have_no_walk() {
        assert!(detect_sequential_walks(&a4(), &DetectorConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn relation_not_top_is_an_error() {
        let a = kronecker(&[&[(1, "a1*a2")]]);
        let mut c = cand(&a, 0, "a1*a2", 0, "a1*a2", "~b2 ~b1", Orientation::Forward);
        c.sigma = LinComb::path(Path::parse(a.quiver(), "b1*b2").unwrap());
        assert!(matches!(check_sequential(&a, &c, &DetectorConfig::default()), Err(DetectorError::RelationNotTop(_))));
    }

    #[test]
    fn band_walk_depends_on_reading() {
        let a = band();
        let q = a.quiver();
        let tops: Vec<String> = a.top_relations().unwrap().iter().map(|r| r.display(q)).collect();
        let ri = tops.iter().position(|t| t == "a*b").unwrap();
        let si = tops.iter().position(|t| t == "e*f").unwrap();
        let c = cand(&a, ri, "a*b", si, "e*f", "c ~d c", Orientation::Forward);
        assert!(is_sequential(&a, &c, &DetectorConfig::default()).unwrap());
        let strict = DetectorConfig { b2: B2Reading::RelationMeetsInnerPoint, ..Default::default() };
        assert!(!is_sequential(&a, &c, &strict).unwrap());
    }

    #[test]
    fn zero_relation_across_the_seam_is_rejected() {
        // b*d straddles u = a b and w' = d; the reduced module would be projective
        let a = band();
        let q = a.quiver();
        let tops: Vec<String> = a.top_relations().unwrap().iter().map(|r| r.display(q)).collect();
        let ri = tops.iter().position(|t| t == "a*b").unwrap();
        let si = tops.iter().position(|t| t == "e*f").unwrap();
        let c = cand(&a, ri, "a*b", si, "e*f", "d", Orientation::Forward);
        let failures = check_sequential(&a, &c, &DetectorConfig::default()).unwrap();
        let shown: Vec<String> = failures.iter().map(|f| f.describe(q)).collect();
        assert_eq!(shown, ["(junction) b*d runs across an end of w' and lies in the ideal", "(junction) d*e runs across an end of w' and lies in the ideal"]);
        let loose = DetectorConfig { junctions: false, ..Default::default() };
        assert!(is_sequential(&a, &c, &loose).unwrap());
        let walks: Vec<String> = detect_sequential_walks(&a, &DetectorConfig::default()).unwrap().iter().map(|c| c.full_walk.display(q).to_string()).collect();
        assert!(!walks.contains(&"a b d e f".to_string()));
        assert!(walks.contains(&"a b c e f".to_string()));
    }

    #[test]
    fn threaded_search_matches_inline() {
        let a = seven_vertex();
        let one = detect_sequential_walks(&a, &DetectorConfig::default()).unwrap();
        let four = detect_sequential_walks(&a, &DetectorConfig { threads: 4, ..Default::default() }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn certificates_reverify() {
        for a in [kronecker(&[&[(1, "a1*a2")]]), seven_vertex(), band(), six_point_pair()] {
            let cfg = DetectorConfig::default();
            for c in detect_sequential_walks(&a, &cfg).unwrap() {
                assert_eq!(check_sequential(&a, &c.candidate(), &cfg).unwrap(), [], "{}", c.display(a.quiver()));
            }
        }
    }
}
