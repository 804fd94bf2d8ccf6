//! Full subcategories, arrow cuts and the standard reduction attached to a
//! sequential walk.

mod based;

pub use based::{full_subcategory, BasedAlgebra, BasisElement};

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::algebra::{AlgebraError, LinComb, TruncatedAlgebra, DEFAULT_PATH_CAP};
use crate::detector::SequentialWalkCertificate;
use crate::linalg::{add_scaled, unit, CoordEchelon, Echelon, Mat, SparseVec};
use crate::quiver::{enumerate_paths, BoundQuiver, Letter, Path, Quiver, QuiverError, Sign, Walk};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("segment `{0}` of the middle walk vanishes modulo the square of the radical")]
    SegmentResidueZero(String),
    #[error("segment `{0}` of the middle walk is dependent on the other segments modulo the square of the radical")]
    SegmentResiduesDependent(String),
    #[error("cut does not split: the arrows kept and the ideal of the cut arrows do not form a direct sum")]
    CutNotConsistent,
    #[error("reduced walk does not span a full subcategory: {0}")]
    NotFullSubcategory(String),
    #[error("certificate does not fit the algebra: {0}")]
    BadCertificate(String),
}

/// The quiver of a based algebra, with each arrow's representative in
/// `rad \ rad²`.
#[derive(Clone, Debug)]
pub struct GabrielQuiver {
    pub quiver: Quiver,
    pub reps: Vec<SparseVec>,
}

/// An arrow representative the caller wants seated first.
#[derive(Clone, Debug)]
pub struct Preferred {
    pub source: usize,
    pub target: usize,
    pub rep: SparseVec,
    pub name: String,
    /// Fail instead of skipping when the residue is not new in `rad/rad²`.
    pub required: bool,
}

fn fresh_name(q: &Quiver, taken: &BTreeSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    let mut k = 2;
    while taken.contains(&name) || q.arrow_by_name(&name).is_ok() {
        name = format!("{base}_{k}");
        k += 1;
    }
    name
}

fn element_name(b: &BasedAlgebra, i: usize, a_quiver: Option<&Quiver>) -> String {
    match (a_quiver, b.elements()[i].rep.terms().next()) {
        (Some(q), Some((p, _))) if b.elements()[i].rep.len() == 1 && !p.is_trivial() => {
            p.arrows().iter().map(|&x| q.arrow(x).name.as_str()).collect::<Vec<_>>().join("_")
        }
        _ => format!("x{i}"),
    }
}

/// Gabriel quiver with default representatives: per block, echelon
/// complement of `rad²` in `rad` over the basis order.
pub fn quiver_of(b: &BasedAlgebra, ambient: Option<&Quiver>) -> GabrielQuiver {
    quiver_with_preferred(b, ambient, &[]).expect("no required representatives").0
}

/// Gabriel quiver whose arrows start with the preferred residues that are
/// independent modulo `rad²`. Returns the arrow chosen for each preferred
/// entry.
pub fn quiver_with_preferred(b: &BasedAlgebra, ambient: Option<&Quiver>, preferred: &[Preferred]) -> Result<(GabrielQuiver, Vec<Option<usize>>), ReductionError> {
    let k = b.num_points();
    let mut quiver = Quiver::new(b.points().to_vec(), Vec::new())?;
    let mut reps = Vec::new();
    let mut seated = vec![None; preferred.len()];
    let mut taken = BTreeSet::new();
    for x in 0..k {
        for y in 0..k {
            let rad = b.rad_power(1, x, y);
            let mut span = b.rad_power(2, x, y);
            let mut add = |rep: SparseVec, name: String, quiver: &mut Quiver| {
                let name = fresh_name(quiver, &taken, &name);
                taken.insert(name.clone());
                let idx = quiver.add_arrow(name, x, y).expect("name is fresh");
                reps.push(rep);
                idx
            };
            for (n, p) in preferred.iter().enumerate() {
                if p.source != x || p.target != y {
                    continue;
                }
                if let Some(prev) = preferred[..n].iter().position(|o| o.source == x && o.target == y && o.rep == p.rep) {
                    seated[n] = seated[prev];
                    continue;
                }
                let new_in_rad = rad.contains(&p.rep) && span.insert(&p.rep);
                if new_in_rad {
                    seated[n] = Some(add(p.rep.clone(), p.name.clone(), &mut quiver));
                } else if p.required {
                    return Err(if b.rad_power(2, x, y).contains(&p.rep) {
                        ReductionError::SegmentResidueZero(p.name.clone())
                    } else {
                        ReductionError::SegmentResiduesDependent(p.name.clone())
                    });
                }
            }
            for i in b.block(x, y).filter(|&i| i >= k) {
                if span.rank() == rad.rank() {
                    break;
                }
                if span.insert(&unit(i)) {
                    add(unit(i), element_name(b, i, ambient), &mut quiver);
                }
            }
        }
    }
    Ok((GabrielQuiver { quiver, reps }, seated))
}

/// True when the cut meets either every branch of the relation or none.
pub fn is_consistent_cut(relation: &LinComb, cut: &[usize]) -> bool {
    let hits: Vec<bool> = relation.paths().map(|p| p.arrows().iter().any(|a| cut.contains(a))).collect();
    hits.iter().all(|&h| h) || hits.iter().all(|&h| !h)
}

#[derive(Clone, Debug)]
pub struct Cut {
    /// The quotient by the ideal of the cut arrows, realized on the
    /// subalgebra generated by the remaining arrows.
    pub algebra: BasedAlgebra,
    pub quiver: GabrielQuiver,
    /// Index in the old quiver of each remaining arrow.
    pub kept: Vec<usize>,
    pub ideal_dim: usize,
}

/// Cuts the arrows `cut` of `gq`. The subalgebra `C` generated by the other
/// arrows and the ideal `E` generated by the cut arrows must satisfy
/// `C ⊕ E = R`; then `C ≅ R/E` is the section of the split extension.
pub fn cut_arrows(b: &BasedAlgebra, gq: &GabrielQuiver, cut: &[usize]) -> Result<Cut, ReductionError> {
    let k = b.num_points();
    let n = gq.quiver.num_arrows();
    let kept: Vec<usize> = (0..n).filter(|a| !cut.contains(a)).collect();

    let mut sub = CoordEchelon::new();
    let mut basis: Vec<SparseVec> = Vec::new();
    let mut frontier: Vec<SparseVec> = Vec::new();
    for x in 0..k {
        let v = unit(b.idempotent(x));
        sub.push(&v).expect("idempotents are independent");
        basis.push(v.clone());
        frontier.push(v);
    }
    while let Some(v) = frontier.pop() {
        for &a in &kept {
            let w = b.mul_vec(&v, &gq.reps[a]);
            if !w.is_empty() && sub.push(&w).is_some() {
                basis.push(w.clone());
                frontier.push(w);
            }
        }
    }

    let mut ideal = Echelon::new();
    let mut frontier: Vec<SparseVec> = Vec::new();
    for &a in cut {
        if ideal.insert(&gq.reps[a]) {
            frontier.push(gq.reps[a].clone());
        }
    }
    while let Some(v) = frontier.pop() {
        for r in &gq.reps {
            for w in [b.mul_vec(&v, r), b.mul_vec(r, &v)] {
                if ideal.insert(&w) {
                    frontier.push(w);
                }
            }
        }
    }

    let mut both = Echelon::new();
    for (_, r) in ideal.rows() {
        both.insert(r);
    }
    let independent = basis.iter().all(|v| both.insert(v));
    if !independent || sub.rank() + ideal.rank() != b.dim() {
        return Err(ReductionError::CutNotConsistent);
    }

    let block_of = |v: &SparseVec| {
        let e = &b.elements()[*v.keys().next().unwrap()];
        (e.source, e.target)
    };
    // idempotents first, then by block, keeping generation order inside it
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order[k..].sort_by_key(|&i| (b.elements()[*basis[i].keys().next_back().unwrap()].degree, block_of(&basis[i]), i));
    let basis: Vec<SparseVec> = order.iter().map(|&i| basis[i].clone()).collect();
    let mut coords = CoordEchelon::new();
    for v in &basis {
        coords.push(v).unwrap();
    }
    let to_c = |v: &SparseVec| coords.coords(v).expect("product stays in the subalgebra");
    let elements = basis
        .iter()
        .map(|v| {
            let (s, t) = block_of(v);
            BasisElement { source: s, target: t, degree: 0, rep: b.lift(v).unwrap() }
        })
        .collect();
    let products = basis.iter().map(|u| basis.iter().map(|v| to_c(&b.mul_vec(u, v))).collect()).collect();
    let algebra = BasedAlgebra::from_parts(b.field(), b.points().to_vec(), b.ambient_points().to_vec(), elements, products);

    let mut quiver = Quiver::new(b.points().to_vec(), Vec::new())?;
    let mut reps = Vec::new();
    for &a in &kept {
        let ar = gq.quiver.arrow(a);
        quiver.add_arrow(ar.name.clone(), ar.source, ar.target)?;
        reps.push(to_c(&gq.reps[a]));
    }
    Ok(Cut { algebra, quiver: GabrielQuiver { quiver, reps }, kept, ideal_dim: ideal.rank() })
}

/// Value of a path of the Gabriel quiver in the algebra.
fn evaluate(b: &BasedAlgebra, gq: &GabrielQuiver, p: &Path) -> SparseVec {
    let mut v = unit(b.idempotent(p.source()));
    for &a in p.arrows() {
        v = b.mul_vec(&v, &gq.reps[a]);
        if v.is_empty() {
            break;
        }
    }
    v
}

/// Presents `b` by its Gabriel quiver and the top relations of the kernel
/// of path evaluation, with truncation one above the Loewy length.
pub fn present_as_bound_quiver(b: &BasedAlgebra, gq: &GabrielQuiver, name: &str) -> Result<BoundQuiver, ReductionError> {
    let loewy = b.loewy_length();
    let q = &gq.quiver;
    let truncation = (loewy + 1).max(2);
    let paths = enumerate_paths(q, loewy, DEFAULT_PATH_CAP).ok_or(AlgebraError::PathExplosion(DEFAULT_PATH_CAP))?;
    let mut blocks: BTreeMap<(usize, usize), Vec<&Path>> = BTreeMap::new();
    for p in paths.iter().filter(|p| p.len() >= 2) {
        blocks.entry((p.source(), p.target())).or_default().push(p);
    }
    let index: HashMap<&Path, usize> = blocks.values().flat_map(|ps| ps.iter().enumerate().map(|(i, p)| (*p, i))).collect();
    let mut kernel: BTreeMap<(usize, usize), Vec<SparseVec>> = BTreeMap::new();
    for ((x, y), ps) in &blocks {
        let cols: Vec<usize> = b.block(*x, *y).collect();
        let rows: Vec<Vec<Scalar>> = ps
            .iter()
            .map(|p| {
                let v = evaluate(b, gq, p);
                cols.iter().map(|c| v.get(c).cloned().unwrap_or_else(Scalar::zero)).collect()
            })
            .collect();
        let m = Mat::from_rows(cols.len(), rows);
        let (ker, _) = m.left_kernel();
        let rows = (0..ker.rows()).map(|r| ker.row(r).iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, s)| (i, s.clone())).collect());
        kernel.insert((*x, *y), rows.collect());
    }
    // The kernel is already a two-sided ideal, so its decomposable part is
    // spanned by products with single arrows. Paths past the Loewy length
    // vanish through the truncation.
    let mut decomposable: BTreeMap<(usize, usize), Echelon> = BTreeMap::new();
    for (&(x, y), rows) in &kernel {
        let ps = &blocks[&(x, y)];
        let arrows = q.arrows_into(x).map(|a| (a, true)).chain(q.arrows_from(y).map(|a| (a, false)));
        for (a, before) in arrows.collect::<Vec<_>>() {
            let arrow = Path::arrow(q, a);
            let key = if before { (q.arrow(a).source, y) } else { (x, q.arrow(a).target) };
            for row in rows {
                let mut v = SparseVec::new();
                for (i, s) in row {
                    let p = if before { arrow.concat(ps[*i]) } else { ps[*i].concat(&arrow) };
                    if let Some(j) = p.as_ref().and_then(|p| index.get(p)) {
                        add_scaled(&mut v, s, &unit(*j));
                    }
                }
                if !v.is_empty() {
                    decomposable.entry(key).or_default().insert(&v);
                }
            }
        }
    }
    let mut tops = Vec::new();
    for (&(x, y), rows) in &kernel {
        let ps = &blocks[&(x, y)];
        let span = decomposable.entry((x, y)).or_default();
        for row in rows {
            if span.insert(row) {
                let mut c = LinComb::zero(x, y);
                for (i, s) in row {
                    c.add_term(ps[*i].clone(), s.clone());
                }
                tops.push(c);
            }
        }
    }
    Ok(BoundQuiver::new(name, q.clone(), tops, truncation, b.field())?)
}

/// Everything produced along the standard reduction.
#[derive(Clone, Debug)]
pub struct StandardReduction {
    /// Retained points, as ambient indices.
    pub retained: Vec<usize>,
    pub eae: BasedAlgebra,
    pub eae_quiver: GabrielQuiver,
    /// Arrows of the `eAe` quiver that were cut.
    pub cut: Vec<usize>,
    pub ideal_dim: usize,
    pub reduced: BasedAlgebra,
    pub presented: BoundQuiver,
    /// The walk `w''` in the presented quiver; `None` when `w'` is trivial.
    pub w2: Option<Walk>,
}

/// Points kept by the reduction: endpoints of both relations, second point
/// of every branch, and the ends of each maximal directed run of `w'`.
pub fn retained_points(a: &TruncatedAlgebra, cert: &SequentialWalkCertificate) -> Vec<usize> {
    let q = a.quiver();
    let mut pts = BTreeSet::new();
    for r in [&cert.rho, &cert.sigma] {
        pts.insert(r.source());
        pts.insert(r.target());
        for p in r.paths() {
            pts.insert(q.arrow(p.arrows()[0]).target);
        }
    }
    if let Some(w) = &cert.w_prime {
        for (s, e) in w.runs() {
            pts.insert(w.points()[s]);
            pts.insert(w.points()[e]);
        }
    }
    pts.into_iter().collect()
}

pub fn standard_reduction(a: &TruncatedAlgebra, cert: &SequentialWalkCertificate) -> Result<StandardReduction, ReductionError> {
    let q = a.quiver();
    let retained = retained_points(a, cert);
    let eae = full_subcategory(a, &retained)?;
    let local = |x: usize| retained.iter().position(|&p| p == x).unwrap();
    let element_of = |p: &Path| -> SparseVec {
        let nf = a.normal_form(&LinComb::path(p.clone()));
        let x = local(p.source());
        let y = local(p.target());
        let mut v = SparseVec::new();
        for (path, s) in nf.terms() {
            let i = eae
                .block(x, y)
                .find(|&i| eae.elements()[i].rep.terms().next().map(|(r, _)| r) == Some(path))
                .expect("normal forms use basis paths");
            add_scaled(&mut v, s, &unit(i));
        }
        v
    };
    let name_of = |p: &Path| p.arrows().iter().map(|&x| q.arrow(x).name.as_str()).collect::<Vec<_>>().join("_");

    // segments of w' between consecutive retained points
    let mut segments: Vec<(Path, Sign)> = Vec::new();
    if let Some(w) = &cert.w_prime {
        let mut start = 0;
        for i in 1..=w.len() {
            if retained.contains(&w.points()[i]) {
                let piece = w.slice(start, i).unwrap();
                let sign = piece.letters()[0].sign;
                let path = piece.underlying_path(q).ok_or_else(|| ReductionError::BadCertificate("segment changes direction".into()))?;
                segments.push((path, sign));
                start = i;
            }
        }
    }
    let mut preferred: Vec<Preferred> = segments
        .iter()
        .map(|(p, _)| Preferred { source: local(p.source()), target: local(p.target()), rep: element_of(p), name: name_of(p), required: true })
        .collect();
    // pieces of the relation branches between retained points
    let mut branch_pieces = Vec::new();
    for r in [&cert.rho, &cert.sigma] {
        for p in r.paths() {
            let pts = p.points(q);
            let mut start = 0;
            for i in 1..pts.len() {
                if retained.contains(&pts[i]) {
                    let piece = Path::from_arrows(q, p.arrows()[start..i].to_vec()).unwrap();
                    if !a.contains_path(&piece) {
                        branch_pieces.push(piece);
                    }
                    start = i;
                }
            }
        }
    }
    let n_seg = preferred.len();
    preferred.extend(branch_pieces.iter().map(|p| Preferred {
        source: local(p.source()),
        target: local(p.target()),
        rep: element_of(p),
        name: name_of(p),
        required: false,
    }));
    let (eae_quiver, seated) = quiver_with_preferred(&eae, Some(q), &preferred)?;

    let walk_arrows: BTreeSet<usize> = seated[..n_seg].iter().map(|s| s.unwrap()).collect();
    let branch_arrows: BTreeSet<usize> = seated[n_seg..].iter().flatten().copied().collect();
    let walk_points: BTreeSet<usize> = match &cert.w_prime {
        Some(w) => w.points().iter().filter(|x| retained.contains(x)).map(|&x| local(x)).collect(),
        None => BTreeSet::from([local(cert.rho.target())]),
    };
    let cut: Vec<usize> = (0..eae_quiver.quiver.num_arrows())
        .filter(|a| {
            let ar = eae_quiver.quiver.arrow(*a);
            walk_points.contains(&ar.source) && walk_points.contains(&ar.target) && !walk_arrows.contains(a) && !branch_arrows.contains(a)
        })
        .collect();
    let cut_result = cut_arrows(&eae, &eae_quiver, &cut)?;

    let renumber: HashMap<usize, usize> = cut_result.kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let bq = &cut_result.quiver.quiver;
    for a in 0..bq.num_arrows() {
        let old = cut_result.kept[a];
        let ar = bq.arrow(a);
        if walk_points.contains(&ar.source) && walk_points.contains(&ar.target) && !walk_arrows.contains(&old) && !branch_arrows.contains(&old) {
            return Err(ReductionError::NotFullSubcategory(ar.name.clone()));
        }
    }
    let w2 = if segments.is_empty() {
        None
    } else {
        let letters: Vec<Letter> = segments
            .iter()
            .zip(&seated)
            .map(|((_, sign), s)| Letter { arrow: renumber[&s.unwrap()], sign: *sign })
            .collect();
        Some(Walk::new(bq, letters)?)
    };
    let presented = present_as_bound_quiver(&cut_result.algebra, &cut_result.quiver, &format!("{}_reduced", a.bound().name))?;
    Ok(StandardReduction {
        retained,
        eae,
        eae_quiver,
        cut,
        ideal_dim: cut_result.ideal_dim,
        reduced: cut_result.algebra,
        presented,
        w2,
    })
}
