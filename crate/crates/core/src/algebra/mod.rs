//! The truncated path algebra `kQ/I`.
//!
//! Everything is computed inside `kQ / kQ^{>M}` with `M = N + g_max`, where
//! `N` is the truncation and `g_max` the longest relation branch. For an
//! admissible ideal (`kQ^{>=N} ⊆ I`) the ideal restricted to lengths `< N`
//! is exactly the projection of the two-sided span of the generators, so the
//! quotient below length `N` is the algebra itself.

mod lincomb;

pub use lincomb::LinComb;

use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::linalg::{add_scaled, unit, Echelon, SparseVec};
use crate::quiver::{enumerate_paths, BoundQuiver, Path, Quiver, QuiverError};
use crate::scalar::Scalar;

pub const DEFAULT_PATH_CAP: usize = 200_000;
pub const DEFAULT_TRUNCATION_CAP: usize = 12;
pub const DEFAULT_MINIMALITY_TERM_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("more than {0} paths below the truncation bound")]
    PathExplosion(usize),
    #[error("ideal is not admissible at truncation {0}")]
    NotAdmissible(usize),
    #[error("combination endpoints do not match")]
    EndpointMismatch,
    #[error("relation does not lie in the ideal")]
    NotInIdeal,
    #[error("relation has {0} terms, above the cap of {1}")]
    TooManyTerms(usize, usize),
}

#[derive(Clone, Debug, Default)]
struct Block {
    /// Ideal restricted to paths of length < N.
    ideal: Echelon,
    /// Path ids (length < N) that are not pivots: the normal-form basis.
    basis: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    bound: BoundQuiver,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    blocks: Vec<Block>,
    admissible: bool,
    top: Vec<LinComb>,
    path_cap: usize,
    opposite: OnceLock<Box<TruncatedAlgebra>>,
}

impl TruncatedAlgebra {
    pub fn build(q: &BoundQuiver) -> Result<Self, AlgebraError> {
        Self::build_with_cap(q, DEFAULT_PATH_CAP)
    }

    pub fn build_with_cap(q: &BoundQuiver, path_cap: usize) -> Result<Self, AlgebraError> {
        if q.truncation < 2 {
            return Err(QuiverError::TruncationTooSmall(q.truncation).into());
        }
        let q = &BoundQuiver::new(q.name.clone(), q.quiver.clone(), q.relations.clone(), q.truncation, q.field)?;
        let n = q.truncation;
        let g_max = q.longest_branch();
        let m = n + g_max;
        let paths = enumerate_paths(&q.quiver, m, path_cap).ok_or(AlgebraError::PathExplosion(path_cap))?;
        let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let np = q.quiver.num_points();

        let mut ends_at: Vec<Vec<usize>> = vec![Vec::new(); np];
        let mut starts_at: Vec<Vec<usize>> = vec![Vec::new(); np];
        for (i, p) in paths.iter().enumerate() {
            ends_at[p.target()].push(i);
            starts_at[p.source()].push(i);
        }

        let mut full: Vec<Echelon> = vec![Echelon::new(); np * np];
        let mut blocks: Vec<Block> = vec![Block::default(); np * np];
        for g in &q.relations {
            let g_min = g.min_len();
            for &pi in &ends_at[g.source()] {
                let p = &paths[pi];
                if p.len() + g_min > m {
                    continue;
                }
                for &qi in &starts_at[g.target()] {
                    let r = &paths[qi];
                    if p.len() + g_min + r.len() > m {
                        continue;
                    }
                    let mut whole = SparseVec::new();
                    let mut below = SparseVec::new();
                    for (b, x) in g.terms() {
                        let len = p.len() + b.len() + r.len();
                        if len > m {
                            continue;
                        }
                        let prod = p.concat(b).and_then(|pb| pb.concat(r)).expect("endpoints compose");
                        let id = index[&prod];
                        add_scaled(&mut whole, x, &unit(id));
                        if len < n {
                            add_scaled(&mut below, x, &unit(id));
                        }
                    }
                    let key = p.source() * np + r.target();
                    full[key].insert(&whole);
                    blocks[key].ideal.insert(&below);
                }
            }
        }

        let admissible = paths
            .iter()
            .enumerate()
            .filter(|(_, p)| p.len() == n)
            .all(|(i, p)| full[p.source() * np + p.target()].contains(&unit(i)));

        for (i, p) in paths.iter().enumerate() {
            if p.len() < n {
                let b = &mut blocks[p.source() * np + p.target()];
                if !b.ideal.is_pivot(i) {
                    b.basis.push(i);
                }
            }
        }

        let mut alg = TruncatedAlgebra {
            bound: q.clone(),
            paths,
            index,
            blocks,
            admissible,
            top: Vec::new(),
            path_cap,
            opposite: OnceLock::new(),
        };
        if admissible {
            alg.top = alg.compute_top_relations();
        }
        Ok(alg)
    }

    /// Builds at the quiver's truncation and raises it one step at a time
    /// until the ideal is admissible, giving up above `cap`.
    pub fn build_auto(q: &BoundQuiver, cap: usize) -> Result<Self, AlgebraError> {
        let mut n = q.truncation;
        loop {
            let alg = Self::build(&q.with_truncation(n))?;
            if alg.admissible {
                return Ok(alg);
            }
            if n >= cap {
                return Err(AlgebraError::NotAdmissible(n));
            }
            n += 1;
        }
    }

    /// Builds and rejects non-admissible input.
    pub fn build_admissible(q: &BoundQuiver) -> Result<Self, AlgebraError> {
        let alg = Self::build(q)?;
        alg.require_admissible()?;
        Ok(alg)
    }

    pub fn require_admissible(&self) -> Result<(), AlgebraError> {
        if self.admissible {
            Ok(())
        } else {
            Err(AlgebraError::NotAdmissible(self.truncation()))
        }
    }

    /// True iff every path of length N lies in the ideal generated by the
    /// relations (computed modulo paths longer than N + g_max).
    pub fn verify_admissible(&self) -> bool {
        self.admissible
    }

    pub fn bound(&self) -> &BoundQuiver {
        &self.bound
    }

    pub fn quiver(&self) -> &Quiver {
        &self.bound.quiver
    }

    pub fn truncation(&self) -> usize {
        self.bound.truncation
    }

    pub fn num_points(&self) -> usize {
        self.bound.quiver.num_points()
    }

    fn block(&self, x: usize, y: usize) -> &Block {
        &self.blocks[x * self.num_points() + y]
    }

    /// Normal-form basis of `e_x A e_y`, in path order.
    pub fn basis(&self, x: usize, y: usize) -> impl Iterator<Item = &Path> {
        self.block(x, y).basis.iter().map(|&i| &self.paths[i])
    }

    pub fn basis_ids(&self, x: usize, y: usize) -> &[usize] {
        &self.block(x, y).basis
    }

    pub fn block_dim(&self, x: usize, y: usize) -> usize {
        self.block(x, y).basis.len()
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.basis.len()).sum()
    }

    pub fn path(&self, id: usize) -> &Path {
        &self.paths[id]
    }

    pub fn path_id(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Coordinates of `e` over path ids; paths of length >= N are dropped
    /// since they lie in the ideal.
    pub fn to_vec(&self, e: &LinComb) -> SparseVec {
        let mut v = SparseVec::new();
        for (p, x) in e.terms() {
            if p.len() < self.truncation() {
                add_scaled(&mut v, x, &unit(self.index[p]));
            }
        }
        v
    }

    pub fn to_lincomb(&self, x: usize, y: usize, v: &SparseVec) -> LinComb {
        let mut c = LinComb::zero(x, y);
        for (id, s) in v {
            c.add_term(self.paths[*id].clone(), s.clone());
        }
        c
    }

    /// Reduces a vector supported on block `(x, y)` to normal form.
    pub fn reduce_vec(&self, x: usize, y: usize, v: &SparseVec) -> SparseVec {
        self.block(x, y).ideal.reduce(v)
    }

    pub fn normal_form(&self, e: &LinComb) -> LinComb {
        let v = self.reduce_vec(e.source(), e.target(), &self.to_vec(e));
        self.to_lincomb(e.source(), e.target(), &v)
    }

    /// Normal form of the product of two paths (zero if not composable).
    pub fn multiply_paths(&self, p: &Path, r: &Path) -> SparseVec {
        match p.concat(r) {
            Some(pr) if pr.len() < self.truncation() => self.reduce_vec(pr.source(), pr.target(), &unit(self.index[&pr])),
            _ => SparseVec::new(),
        }
    }

    pub fn multiply(&self, a: &LinComb, b: &LinComb) -> LinComb {
        if a.target() != b.source() {
            return LinComb::zero(a.source(), b.target());
        }
        let mut v = SparseVec::new();
        for (p, x) in a.terms() {
            for (r, y) in b.terms() {
                add_scaled(&mut v, &(x * y), &self.multiply_paths(p, r));
            }
        }
        self.to_lincomb(a.source(), b.target(), &v)
    }

    /// Membership in the ideal.
    pub fn contains(&self, e: &LinComb) -> bool {
        self.reduce_vec(e.source(), e.target(), &self.to_vec(e)).is_empty()
    }

    pub fn contains_path(&self, p: &Path) -> bool {
        p.len() >= self.truncation() || self.reduce_vec(p.source(), p.target(), &unit(self.index[p])).is_empty()
    }

    /// Echelon basis of the ideal in `e_x kQ e_y` below the truncation.
    pub fn ideal_rows(&self, x: usize, y: usize) -> Vec<LinComb> {
        self.block(x, y).ideal.rows().map(|(_, r)| self.to_lincomb(x, y, r)).collect()
    }

    /// Assembles a combination from raw terms, reporting non-parallel input.
    pub fn combination(&self, terms: Vec<(Scalar, Path)>) -> Result<LinComb, AlgebraError> {
        LinComb::from_terms(self.quiver(), terms).map_err(|e| match e {
            QuiverError::MixedEndpoints(_) => AlgebraError::EndpointMismatch,
            other => other.into(),
        })
    }

    /// Representatives of a basis of `I / (kQ⁺I + IkQ⁺)`, one list entry per
    /// basis vector, ordered by (source, target, leading path).
    pub fn top_relations(&self) -> Result<&[LinComb], AlgebraError> {
        self.require_admissible()?;
        Ok(&self.top)
    }

    /// Top relations starting at `x` and ending at `y`.
    pub fn top_relation_count(&self, x: usize, y: usize) -> usize {
        self.top.iter().filter(|r| r.source() == x && r.target() == y).count()
    }

    fn compute_top_relations(&self) -> Vec<LinComb> {
        let n = self.truncation();
        let np = self.num_points();
        let q = self.quiver();
        let shift = |v: &SparseVec, left: Option<usize>, right: Option<usize>| -> SparseVec {
            let mut out = SparseVec::new();
            for (id, x) in v {
                let mut p = self.paths[*id].clone();
                if let Some(a) = left {
                    p = Path::arrow(q, a).concat(&p).unwrap();
                }
                if let Some(a) = right {
                    p = p.concat(&Path::arrow(q, a)).unwrap();
                }
                if p.len() <= n {
                    add_scaled(&mut out, x, &unit(self.index[&p]));
                }
            }
            out
        };
        let mut top = Vec::new();
        for x in 0..np {
            for y in 0..np {
                let mut generated = Echelon::new();
                for a in q.arrows_from(x) {
                    for (_, r) in self.block(q.arrow(a).target, y).ideal.rows() {
                        generated.insert(&shift(r, Some(a), None));
                    }
                }
                for a in q.arrows_into(y) {
                    for (_, r) in self.block(x, q.arrow(a).source).ideal.rows() {
                        generated.insert(&shift(r, None, Some(a)));
                    }
                }
                let mut ideal: Vec<SparseVec> = self.block(x, y).ideal.rows().map(|(_, r)| r.clone()).collect();
                ideal.extend(
                    self.paths
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| p.len() == n && p.source() == x && p.target() == y)
                        .map(|(i, _)| unit(i)),
                );
                let mut reps = Echelon::new();
                for r in &ideal {
                    let rest = generated.reduce(r);
                    reps.insert(&rest);
                }
                for (_, r) in reps.rows() {
                    top.push(self.to_lincomb(x, y, r));
                }
            }
        }
        top
    }

    /// The algebra of the opposite bound quiver, built once on demand.
    pub fn opposite(&self) -> &TruncatedAlgebra {
        self.opposite.get_or_init(|| {
            let op = TruncatedAlgebra::build_with_cap(&self.bound.opposite(), self.path_cap).expect("opposite of a valid algebra builds");
            Box::new(op)
        })
    }

    /// Minimal in the sense that no nonempty proper sub-sum of its terms lies
    /// in the ideal.
    pub fn is_minimal_relation(&self, r: &LinComb) -> Result<bool, AlgebraError> {
        self.is_minimal_relation_capped(r, DEFAULT_MINIMALITY_TERM_CAP)
    }

    pub fn is_minimal_relation_capped(&self, r: &LinComb, cap: usize) -> Result<bool, AlgebraError> {
        if !self.contains(r) {
            return Err(AlgebraError::NotInIdeal);
        }
        let m = r.len();
        if m > cap {
            return Err(AlgebraError::TooManyTerms(m, cap));
        }
        if m < 2 {
            return Ok(false);
        }
        let full = (1u64 << m) - 1;
        Ok((1..full).all(|mask| !self.contains(&r.subset(|i| mask >> i & 1 == 1))))
    }
}

pub fn is_monomial_relation(r: &LinComb) -> bool {
    r.is_monomial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::tests::kronecker_chain;
    use crate::scalar::Field;

    fn rel(q: &Quiver, terms: &[(i64, &str)]) -> LinComb {
        LinComb::from_terms(q, terms.iter().map(|(c, p)| (Scalar::from_int(*c), Path::parse(q, p).unwrap())).collect()).unwrap()
    }

    fn kronecker(rels: &[&[(i64, &str)]], n: usize) -> TruncatedAlgebra {
        let q = kronecker_chain();
        let relations = rels.iter().map(|r| rel(&q, r)).collect();
        TruncatedAlgebra::build(&BoundQuiver::new("k", q, relations, n, Field::Rationals).unwrap()).unwrap()
    }

    fn line(names: &[&str], rels: &[&str], n: usize) -> TruncatedAlgebra {
        let pts: Vec<String> = (1..=names.len() + 1).map(|i| i.to_string()).collect();
        let arrows = names.iter().enumerate().map(|(i, a)| (a.to_string(), pts[i].clone(), pts[i + 1].clone())).collect();
        let q = Quiver::new(pts, arrows).unwrap();
        let relations = rels.iter().map(|r| rel(&q, &[(1, r)])).collect();
        TruncatedAlgebra::build(&BoundQuiver::new("line", q, relations, n, Field::Rationals).unwrap()).unwrap()
    }

    #[test]
    fn kronecker_chain_dimensions() {
        // 3 idempotents + 4 arrows + (4 length-two paths - 1 relation)
        assert_eq!(kronecker(&[&[(1, "a1*a2"), (1, "b1*b2")]], 3).dim(), 10);
        assert_eq!(kronecker(&[&[(1, "a1*a2")]], 3).dim(), 10);
    }

    #[test]
    fn a4_with_two_zero_relations() {
        let a = line(&["alpha", "beta", "gamma"], &["alpha*beta", "beta*gamma"], 4);
        assert_eq!(a.dim(), 7);
        assert!(a.verify_admissible());
        let tops: Vec<String> = a.top_relations().unwrap().iter().map(|r| r.display(a.quiver())).collect();
        assert_eq!(tops, ["alpha*beta", "beta*gamma"]);
        assert!(line(&["alpha", "beta", "gamma"], &["alpha*beta", "beta*gamma"], 3).verify_admissible());
    }

    #[test]
    fn loop_without_relations_is_never_admissible() {
        let q = Quiver::new(vec!["1".into()], vec![("l".into(), "1".into(), "1".into())]).unwrap();
        for n in 2..6 {
            let b = BoundQuiver::new("loop", q.clone(), vec![], n, Field::Rationals).unwrap();
            assert!(!TruncatedAlgebra::build(&b).unwrap().verify_admissible());
        }
        let b = BoundQuiver::new("loop", q, vec![], 2, Field::Rationals).unwrap();
        assert_eq!(TruncatedAlgebra::build_auto(&b, 12).unwrap_err(), AlgebraError::NotAdmissible(12));
    }

    #[test]
    fn membership() {
        let a = kronecker(&[&[(1, "a1*a2"), (1, "b1*b2")]], 3);
        let q = a.quiver().clone();
        assert!(a.contains(&rel(&q, &[(1, "a1*a2"), (1, "b1*b2")])));
        assert!(!a.contains(&rel(&q, &[(1, "a1*b2")])));
        assert!(a.contains(&LinComb::zero(0, 2)));
        assert!(a.contains(&rel(&q, &[(3, "a1*a2"), (3, "b1*b2")])));
    }

    #[test]
    fn top_relation_of_commutativity_square() {
        let a = kronecker(&[&[(2, "a1*a2"), (2, "b1*b2")]], 3);
        let tops = a.top_relations().unwrap();
        assert_eq!(tops.len(), 1);
        assert!(tops[0].proportional(&rel(a.quiver(), &[(1, "a1*a2"), (1, "b1*b2")])));
        assert!(a.is_minimal_relation(&tops[0]).unwrap());
        assert!(!is_monomial_relation(&tops[0]));
    }

    #[test]
    fn minimality_errors() {
        let a = kronecker(&[&[(1, "a1*a2"), (1, "b1*b2")]], 3);
        let q = a.quiver().clone();
        assert_eq!(a.is_minimal_relation(&rel(&q, &[(1, "a1*b2")])), Err(AlgebraError::NotInIdeal));
        let terms = vec![(Scalar::one(), Path::parse(&q, "a1*a2").unwrap()), (Scalar::one(), Path::parse(&q, "a2").unwrap())];
        assert_eq!(a.combination(terms).unwrap_err(), AlgebraError::EndpointMismatch);
    }

    #[test]
    fn truncation_at_relation_length_keeps_generator_on_top() {
        let a = line(&["a", "b", "c"], &["a*b*c"], 3);
        assert!(a.verify_admissible());
        let tops: Vec<String> = a.top_relations().unwrap().iter().map(|r| r.display(a.quiver())).collect();
        assert_eq!(tops, ["a*b*c"]);
    }

    #[test]
    fn prime_field_build() {
        let q = kronecker_chain();
        let r = rel(&q, &[(1, "a1*a2"), (6, "b1*b2")]);
        let b = BoundQuiver::new("k", q, vec![r], 3, Field::Prime(7)).unwrap();
        let a = TruncatedAlgebra::build(&b).unwrap();
        assert_eq!(a.dim(), 10);
    }
}
