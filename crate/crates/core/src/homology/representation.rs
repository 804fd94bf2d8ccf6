use crate::algebra::{LinComb, TruncatedAlgebra};
use crate::linalg::{dense_to_sparse, sparse_to_dense, Mat};
use crate::quiver::{Path, Sign, Walk};
use crate::scalar::Scalar;

use super::HomologyError;

/// A finite-dimensional right module given by a vector space at every point
/// and a matrix per arrow. Vectors are rows: an arrow `a: x -> y` sends
/// `v` in the fiber at `x` to `v * maps[a]`, so a path `a b` acts by
/// `maps[a] * maps[b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    dims: Vec<usize>,
    arrows: Vec<(usize, usize)>,
    maps: Vec<Mat>,
}

impl Representation {
    /// Checks shapes and that every top relation of `a` acts by zero.
    pub fn new(a: &TruncatedAlgebra, dims: Vec<usize>, maps: Vec<Mat>) -> Result<Self, HomologyError> {
        let q = a.quiver();
        if dims.len() != q.num_points() || maps.len() != q.num_arrows() {
            return Err(HomologyError::ShapeMismatch(format!("expected {} fibers and {} maps", q.num_points(), q.num_arrows())));
        }
        let arrows: Vec<(usize, usize)> = q.arrows().iter().map(|ar| (ar.source, ar.target)).collect();
        for (i, m) in maps.iter().enumerate() {
            let (s, t) = arrows[i];
            if m.rows() != dims[s] || m.cols() != dims[t] {
                return Err(HomologyError::ShapeMismatch(format!("map of `{}` is {}x{}, expected {}x{}", q.arrow(i).name, m.rows(), m.cols(), dims[s], dims[t])));
            }
        }
        let r = Representation { dims, arrows, maps };
        if let Some(rel) = r.failing_relation(a) {
            return Err(HomologyError::RelationNotSatisfied(rel.display(q)));
        }
        Ok(r)
    }

    pub(crate) fn from_raw(dims: Vec<usize>, arrows: Vec<(usize, usize)>, maps: Vec<Mat>) -> Self {
        Representation { dims, arrows, maps }
    }

    pub fn zero(a: &TruncatedAlgebra) -> Self {
        let q = a.quiver();
        let arrows = q.arrows().iter().map(|ar| (ar.source, ar.target)).collect();
        Representation { dims: vec![0; q.num_points()], arrows, maps: vec![Mat::zeros(0, 0); q.num_arrows()] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.dims.len()).filter(|&x| self.dims[x] > 0).collect()
    }

    pub fn num_points(&self) -> usize {
        self.dims.len()
    }

    pub fn map(&self, arrow: usize) -> &Mat {
        &self.maps[arrow]
    }

    pub fn path_matrix(&self, p: &Path) -> Mat {
        let mut m = Mat::identity(self.dims[p.source()]);
        for &a in p.arrows() {
            m = m.mul(&self.maps[a]);
        }
        m
    }

    /// The action of a combination of parallel paths.
    pub fn act(&self, c: &LinComb) -> Mat {
        let mut out = Mat::zeros(self.dims[c.source()], self.dims[c.target()]);
        for (p, s) in c.terms() {
            let m = self.path_matrix(p);
            for r in 0..out.rows() {
                for col in 0..out.cols() {
                    let v = out.get(r, col) + &(s * m.get(r, col));
                    out.set(r, col, v);
                }
            }
        }
        out
    }

    /// A top relation acting by a nonzero matrix, if any.
    pub fn failing_relation(&self, a: &TruncatedAlgebra) -> Option<LinComb> {
        let tops = a.top_relations().ok()?;
        tops.iter().find(|r| !self.act(r).is_zero()).cloned()
    }

    pub fn satisfies_relations(&self, a: &TruncatedAlgebra) -> bool {
        self.failing_relation(a).is_none()
    }

    /// `Hom(-, k)`: a module over the opposite algebra, whose arrows keep
    /// their indices.
    pub fn dual(&self) -> Representation {
        Representation {
            dims: self.dims.clone(),
            arrows: self.arrows.iter().map(|&(s, t)| (t, s)).collect(),
            maps: self.maps.iter().map(Mat::transpose).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self.maps.iter().zip(&other.maps).map(|(m, n)| block_diagonal(m, n)).collect();
        Representation { dims, arrows: self.arrows.clone(), maps }
    }

    /// Subspace of the fiber at each point spanned by the images of arrows.
    pub fn radical_subspaces(&self) -> Vec<Mat> {
        (0..self.num_points())
            .map(|y| {
                let mut rows = Mat::zeros(0, self.dims[y]);
                for (a, &(_, t)) in self.arrows.iter().enumerate() {
                    if t == y && self.maps[a].rows() > 0 {
                        rows = rows.vstack(&self.maps[a]);
                    }
                }
                rows.row_basis()
            })
            .collect()
    }

    pub fn radical(&self) -> Representation {
        self.sub(&self.radical_subspaces())
    }

    /// Dimension vector of `M / M rad`.
    pub fn top_dims(&self) -> Vec<usize> {
        self.radical_subspaces().iter().zip(&self.dims).map(|(r, d)| d - r.rows()).collect()
    }

    pub fn top(&self) -> Representation {
        self.quotient(&self.radical_subspaces())
    }

    /// Vectors killed by every arrow.
    pub fn socle_subspaces(&self) -> Vec<Mat> {
        let zero: Vec<Mat> = self.dims.iter().map(|&d| Mat::zeros(0, d)).collect();
        self.preimage_layer(&zero)
    }

    pub fn socle_dims(&self) -> Vec<usize> {
        self.socle_subspaces().iter().map(Mat::rows).collect()
    }

    /// `{v : v a in inner for every arrow a}` at each point.
    fn preimage_layer(&self, inner: &[Mat]) -> Vec<Mat> {
        (0..self.num_points())
            .map(|x| {
                let d = self.dims[x];
                let mut constraints: Vec<Mat> = Vec::new();
                for (a, &(s, t)) in self.arrows.iter().enumerate() {
                    if s != x {
                        continue;
                    }
                    // v * maps[a] lies in inner[t] iff it is killed by the
                    // columns annihilating inner[t]
                    constraints.push(self.maps[a].mul(&annihilator_columns(&inner[t], self.dims[t])));
                }
                let mut all = Mat::zeros(d, 0);
                for c in constraints {
                    all = hstack(&all, &c);
                }
                all.left_kernel().0.row_basis()
            })
            .collect()
    }

    /// Ascending chain `soc^1 M ⊂ soc^2 M ⊂ ... ⊂ M`, as dimension vectors.
    pub fn socle_series(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current: Vec<Mat> = self.dims.iter().map(|&d| Mat::zeros(0, d)).collect();
        loop {
            let next = self.preimage_layer(&current);
            let dims: Vec<usize> = next.iter().map(Mat::rows).collect();
            if dims == current.iter().map(Mat::rows).collect::<Vec<_>>() {
                break;
            }
            out.push(dims.clone());
            current = next;
            if dims == self.dims {
                break;
            }
        }
        out
    }

    /// Dimension vectors of `M, M rad, M rad², ...` down to the last nonzero
    /// power.
    pub fn radical_series(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut m = self.clone();
        while !m.is_zero() {
            out.push(m.dims.clone());
            m = m.radical();
        }
        out
    }

    pub fn loewy_length(&self) -> usize {
        self.radical_series().len()
    }

    /// Row bases of `M rad^k` at every point.
    pub fn radical_power(&self, k: usize) -> Vec<Mat> {
        let mut spaces: Vec<Mat> = self.dims.iter().map(|&d| Mat::identity(d)).collect();
        for _ in 0..k {
            spaces = self.image_layer(&spaces);
        }
        spaces
    }

    /// `M / M rad^k`.
    pub fn radical_quotient(&self, k: usize) -> Representation {
        self.quotient(&self.radical_power(k))
    }

    fn image_layer(&self, spaces: &[Mat]) -> Vec<Mat> {
        (0..self.num_points())
            .map(|y| {
                let mut rows = Mat::zeros(0, self.dims[y]);
                for (a, &(s, t)) in self.arrows.iter().enumerate() {
                    if t == y && spaces[s].rows() > 0 {
                        rows = rows.vstack(&spaces[s].mul(&self.maps[a]));
                    }
                }
                rows.row_basis()
            })
            .collect()
    }

    /// The subrepresentation on row bases `spaces`, which must be closed
    /// under the arrows.
    pub fn sub(&self, spaces: &[Mat]) -> Representation {
        let maps = self
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let rows = (0..spaces[s].rows())
                    .map(|r| {
                        let image = self.maps[a].apply(spaces[s].row(r));
                        coords_in(&spaces[t], &image).expect("subspace is closed under the arrows")
                    })
                    .collect();
                Mat::from_rows(spaces[t].rows(), rows)
            })
            .collect();
        Representation { dims: spaces.iter().map(Mat::rows).collect(), arrows: self.arrows.clone(), maps }
    }

    /// The quotient by the subrepresentation on row bases `spaces`; the
    /// basis at each point is the unit vectors off the pivots of `spaces`.
    pub fn quotient(&self, spaces: &[Mat]) -> Representation {
        let comps: Vec<Vec<usize>> = spaces
            .iter()
            .zip(&self.dims)
            .map(|(s, &d)| if s.rows() == 0 { (0..d).collect() } else { s.complement_columns() })
            .collect();
        let maps = self
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let full = spaces[t].vstack(&units(&comps[t], self.dims[t]));
                let rows = comps[s]
                    .iter()
                    .map(|&c| {
                        let coords = coords_in(&full, self.maps[a].row(c)).expect("full basis");
                        coords[spaces[t].rows()..].to_vec()
                    })
                    .collect();
                Mat::from_rows(comps[t].len(), rows)
            })
            .collect();
        Representation { dims: comps.iter().map(Vec::len).collect(), arrows: self.arrows.clone(), maps }
    }

    pub fn is_uniserial(&self) -> bool {
        let mut series = self.radical_series();
        series.push(vec![0; self.num_points()]);
        series.len() > 1 && series.windows(2).all(|w| w[0].iter().zip(&w[1]).map(|(a, b)| a - b).sum::<usize>() == 1)
    }
}

fn block_diagonal(m: &Mat, n: &Mat) -> Mat {
    let mut out = Mat::zeros(m.rows() + n.rows(), m.cols() + n.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.set(r, c, m.get(r, c).clone());
        }
    }
    for r in 0..n.rows() {
        for c in 0..n.cols() {
            out.set(m.rows() + r, m.cols() + c, n.get(r, c).clone());
        }
    }
    out
}

pub(crate) fn hstack(a: &Mat, b: &Mat) -> Mat {
    a.transpose().vstack(&b.transpose()).transpose()
}

pub(crate) fn units(cols: &[usize], d: usize) -> Mat {
    let mut m = Mat::zeros(cols.len(), d);
    for (r, &c) in cols.iter().enumerate() {
        m.set(r, c, Scalar::one());
    }
    m
}

/// Coordinates of `v` in the independent rows of `basis`.
pub(crate) fn coords_in(basis: &Mat, v: &[Scalar]) -> Option<Vec<Scalar>> {
    if basis.rows() == 0 {
        return v.iter().all(Scalar::is_zero).then(Vec::new);
    }
    basis.coords_of(v)
}

/// A `d x k` matrix whose left kernel is exactly the row space of `inner`.
fn annihilator_columns(inner: &Mat, d: usize) -> Mat {
    if inner.rows() == 0 {
        return Mat::identity(d);
    }
    // right kernel of inner: vectors c with inner * c = 0
    inner.transpose().left_kernel().0.transpose()
}

/// The representation of a reduced walk: one basis vector per visit, each
/// letter identifying the vectors of its two ends. Checked against the
/// relations.
pub fn string_module(a: &TruncatedAlgebra, w: &Walk) -> Result<Representation, HomologyError> {
    let q = a.quiver();
    if !w.is_reduced() {
        return Err(HomologyError::NotReduced(w.display(q).to_string()));
    }
    let pts = w.points();
    let mut dims = vec![0; q.num_points()];
    let slot: Vec<usize> = pts
        .iter()
        .map(|&x| {
            dims[x] += 1;
            dims[x] - 1
        })
        .collect();
    let mut maps: Vec<Mat> = q.arrows().iter().map(|ar| Mat::zeros(dims[ar.source], dims[ar.target])).collect();
    for (i, l) in w.letters().iter().enumerate() {
        let (from, to) = match l.sign {
            Sign::Direct => (i, i + 1),
            Sign::Inverse => (i + 1, i),
        };
        maps[l.arrow].set(slot[from], slot[to], Scalar::one());
    }
    let arrows = q.arrows().iter().map(|ar| (ar.source, ar.target)).collect();
    let r = Representation::from_raw(dims, arrows, maps);
    match r.failing_relation(a) {
        Some(rel) => Err(HomologyError::NotAString(rel.display(q))),
        None => Ok(r),
    }
}

pub fn simple(a: &TruncatedAlgebra, x: usize) -> Representation {
    let q = a.quiver();
    let mut dims = vec![0; q.num_points()];
    dims[x] = 1;
    let maps = q.arrows().iter().map(|ar| Mat::zeros(dims[ar.source], dims[ar.target])).collect();
    Representation::from_raw(dims, q.arrows().iter().map(|ar| (ar.source, ar.target)).collect(), maps)
}

/// `e_x A`: the fiber at `y` has the normal-form paths `x -> y` as basis and
/// an arrow acts by right multiplication.
pub fn projective(a: &TruncatedAlgebra, x: usize) -> Representation {
    let q = a.quiver();
    let n = q.num_points();
    let dims: Vec<usize> = (0..n).map(|y| a.block_dim(x, y)).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(b, ar)| {
            let arrow = Path::arrow(q, b);
            let targets = a.basis_ids(x, ar.target);
            let rows = a
                .basis(x, ar.source)
                .map(|p| {
                    let prod = a.multiply_paths(p, &arrow);
                    let v = dense_to_sparse(&targets.iter().map(|id| prod.get(id).cloned().unwrap_or_else(Scalar::zero)).collect::<Vec<_>>());
                    sparse_to_dense(&v, targets.len())
                })
                .collect();
            Mat::from_rows(targets.len(), rows)
        })
        .collect();
    Representation::from_raw(dims, q.arrows().iter().map(|ar| (ar.source, ar.target)).collect(), maps)
}

/// `D(A e_x)`, computed as the dual of a projective of the opposite algebra.
pub fn injective(a: &TruncatedAlgebra, x: usize) -> Representation {
    projective(a.opposite(), x).dual()
}
