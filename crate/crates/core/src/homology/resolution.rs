use serde::Serialize;

use crate::algebra::TruncatedAlgebra;
use crate::linalg::Mat;
use crate::scalar::Scalar;

use super::representation::{projective, simple, units, Representation};
use super::HomologyError;

/// A projective or injective dimension, or the number of syzygies computed
/// without reaching zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HomDim {
    Finite(usize),
    BoundExceeded(usize),
}

impl HomDim {
    pub fn finite(self) -> Option<usize> {
        match self {
            HomDim::Finite(n) => Some(n),
            HomDim::BoundExceeded(_) => None,
        }
    }

    /// True when the dimension is known to be larger than `n`.
    pub fn exceeds(self, n: usize) -> bool {
        match self {
            HomDim::Finite(d) => d > n,
            HomDim::BoundExceeded(b) => b >= n,
        }
    }
}

impl std::fmt::Display for HomDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HomDim::Finite(n) => write!(f, "{n}"),
            HomDim::BoundExceeded(b) => write!(f, ">{b}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    /// Point of each indecomposable summand, in order.
    pub summands: Vec<usize>,
    pub projective: Representation,
    /// Per point, the map from the fiber of the projective to that of the
    /// module.
    pub map: Vec<Mat>,
    pub kernel: Representation,
}

/// `P -> M` with `P = ⊕ P_y^{top(M)_y}`, sending the generator of each
/// summand to a top basis vector. The kernel is the first syzygy.
pub fn projective_cover(a: &TruncatedAlgebra, m: &Representation) -> Result<ProjectiveCover, HomologyError> {
    if m.is_zero() {
        return Err(HomologyError::ZeroModule);
    }
    let n = m.num_points();
    let mut summands = Vec::new();
    let mut generators: Vec<Vec<Scalar>> = Vec::new();
    for (y, rad) in m.radical_subspaces().iter().enumerate() {
        let comp: Vec<usize> = if rad.rows() == 0 { (0..m.dims()[y]).collect() } else { rad.complement_columns() };
        let u = units(&comp, m.dims()[y]);
        for r in 0..u.rows() {
            summands.push(y);
            generators.push(u.row(r).to_vec());
        }
    }
    let mut proj: Option<Representation> = None;
    let mut images: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n];
    for (y, g) in summands.iter().zip(&generators) {
        let p = projective(a, *y);
        for z in 0..n {
            for path in a.basis(*y, z) {
                images[z].push(m.path_matrix(path).apply(g));
            }
        }
        proj = Some(match proj {
            None => p,
            Some(q) => q.direct_sum(&p),
        });
    }
    let projective = proj.expect("nonzero module has a top");
    let map: Vec<Mat> = (0..n).map(|z| Mat::from_rows(m.dims()[z], std::mem::take(&mut images[z]))).collect();
    let mut kernels = Vec::with_capacity(n);
    for (z, f) in map.iter().enumerate() {
        if f.rank() != m.dims()[z] {
            return Err(HomologyError::InternalInconsistency(format!("cover is not onto at point {z}")));
        }
        kernels.push(f.left_kernel().0);
    }
    let kernel = projective.sub(&kernels);
    Ok(ProjectiveCover { summands, projective, map, kernel })
}

pub fn syzygy(a: &TruncatedAlgebra, m: &Representation) -> Result<Representation, HomologyError> {
    Ok(projective_cover(a, m)?.kernel)
}

/// Tops of the terms of the minimal projective resolution: entry `i` gives
/// the multiplicity of each indecomposable projective in the `i`-th term.
/// Stops after `terms` terms or at the first zero syzygy.
pub fn minimal_resolution(a: &TruncatedAlgebra, m: &Representation, terms: usize) -> Result<Vec<Vec<usize>>, HomologyError> {
    let mut out = Vec::new();
    let mut current = m.clone();
    while out.len() < terms && !current.is_zero() {
        out.push(current.top_dims());
        current = syzygy(a, &current)?;
    }
    Ok(out)
}

/// Syzygies larger than this multiple of the algebra's dimension end the
/// resolution early; over algebras of infinite global dimension they can
/// grow exponentially.
pub const SYZYGY_GROWTH_CAP: usize = 2;

/// Counts syzygies until one vanishes; gives up after `bound` of them, or
/// once the `d`-th syzygy (`d >= 2`) outgrows [`SYZYGY_GROWTH_CAP`] times
/// `dim A`, answering `BoundExceeded(d - 1)`. Either way the projective
/// dimension is larger than the number returned.
pub fn proj_dim(a: &TruncatedAlgebra, m: &Representation, bound: usize) -> Result<HomDim, HomologyError> {
    if m.is_zero() {
        return Err(HomologyError::ZeroModule);
    }
    let cap = SYZYGY_GROWTH_CAP * a.dim().max(1);
    let mut current = m.clone();
    for d in 0..=bound {
        current = syzygy(a, &current)?;
        if current.is_zero() {
            return Ok(HomDim::Finite(d));
        }
        if d >= 1 && d < bound && current.total_dim() > cap {
            return Ok(HomDim::BoundExceeded(d));
        }
    }
    Ok(HomDim::BoundExceeded(bound))
}

/// Projective dimension of the dual over the opposite algebra.
pub fn inj_dim(a: &TruncatedAlgebra, m: &Representation, bound: usize) -> Result<HomDim, HomologyError> {
    proj_dim(a.opposite(), &m.dual(), bound)
}

/// `table[i][y] = dim Ext^i(S_x, S_y)` for `i <= i_max`.
pub fn ext_simple_dims(a: &TruncatedAlgebra, x: usize, i_max: usize) -> Result<Vec<Vec<usize>>, HomologyError> {
    let mut table = minimal_resolution(a, &simple(a, x), i_max + 1)?;
    table.resize(i_max + 1, vec![0; a.num_points()]);
    Ok(table)
}

/// Largest projective dimension of a simple module.
pub fn global_dimension(a: &TruncatedAlgebra, bound: usize) -> Result<HomDim, HomologyError> {
    let mut best = 0;
    for x in 0..a.num_points() {
        match proj_dim(a, &simple(a, x), bound)? {
            HomDim::Finite(d) => best = best.max(d),
            exceeded => return Ok(exceeded),
        }
    }
    Ok(HomDim::Finite(best))
}

/// Default syzygy bound: the dimension of the algebra.
pub fn default_bound(a: &TruncatedAlgebra) -> usize {
    a.dim()
}
