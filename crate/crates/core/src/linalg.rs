//! Exact linear algebra: sparse echelon forms keyed by a global column order,
//! and small dense matrices acting on row vectors.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Sparse vector over ordered column indices; zero entries are never stored.
pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn unit(col: usize) -> SparseVec {
    SparseVec::from([(col, Scalar::one())])
}

/// `target += coeff * v`
pub fn add_scaled(target: &mut SparseVec, coeff: &Scalar, v: &SparseVec) {
    if coeff.is_zero() {
        return;
    }
    for (k, x) in v {
        let term = coeff * x;
        match target.get_mut(k) {
            Some(y) => {
                *y = &*y + &term;
                if y.is_zero() {
                    target.remove(k);
                }
            }
            None => {
                if !term.is_zero() {
                    target.insert(*k, term);
                }
            }
        }
    }
}

pub fn scaled(v: &SparseVec, coeff: &Scalar) -> SparseVec {
    if coeff.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (*k, x * coeff)).collect()
}

/// Reduced row echelon form whose pivot in each row is the row's largest
/// column. Rows are normalized to 1 at the pivot and vanish at every other
/// pivot column, so reduction is a single pass.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.rows.iter().map(|(k, v)| (*k, v))
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for (k, x) in v {
            if let Some(row) = self.rows.get(k) {
                add_scaled(&mut out, &-x, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns false when it was already contained.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&pivot, lead)) = r.iter().next_back() else {
            return false;
        };
        let r = scaled(&r, &lead.inverse());
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                add_scaled(row, &-c, &r);
            }
        }
        self.rows.insert(pivot, r);
        true
    }
}

/// Echelon form that remembers how each row was built from the inserted
/// generators, so members of the span can be written in generator
/// coordinates.
#[derive(Clone, Debug, Default)]
pub struct CoordEchelon {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
    generators: usize,
}

impl CoordEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    fn reduce_tracked(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut out = v.clone();
        let mut combo = SparseVec::new();
        for (k, x) in v {
            if let Some((row, c)) = self.rows.get(k) {
                add_scaled(&mut out, &-x, row);
                add_scaled(&mut combo, x, c);
            }
        }
        (out, combo)
    }

    /// Tries to add `v` as the next generator; refuses dependent vectors.
    /// On success the generator's index is returned.
    pub fn push(&mut self, v: &SparseVec) -> Option<usize> {
        let (r, used) = self.reduce_tracked(v);
        let (&pivot, lead) = r.iter().next_back()?;
        let index = self.generators;
        let mut combo = unit(index);
        add_scaled(&mut combo, &-Scalar::one(), &used);
        let inv = lead.inverse();
        let r = scaled(&r, &inv);
        let combo = scaled(&combo, &inv);
        for (row, c) in self.rows.values_mut() {
            if let Some(x) = row.get(&pivot).cloned() {
                add_scaled(row, &-&x, &r);
                add_scaled(c, &-x, &combo);
            }
        }
        self.rows.insert(pivot, (r, combo));
        self.generators += 1;
        Some(index)
    }

    /// Coordinates of `v` in terms of the accepted generators, or `None`
    /// when `v` is outside their span.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        let (r, combo) = self.reduce_tracked(v);
        r.is_empty().then_some(combo)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_tracked(v).0.is_empty()
    }
}

/// Dense matrix; vectors are rows and maps act on the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Mat { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Scalar::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(k, j);
                if !b.is_zero() {
                    *o = &*o + &(a * b);
                }
            }
        }
        out
    }

    /// Stacks rows of `self` on top of rows of `other`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form (pivots leftmost) and its pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(r) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, lead);
            let inv = m.get(lead, c).inverse();
            for j in 0..m.cols {
                let v = m.get(lead, j) * &inv;
                m.set(lead, j, v);
            }
            for i in 0..m.rows {
                if i == lead {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(lead, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the row space (the nonzero rows of the RREF).
    pub fn row_basis(&self) -> Mat {
        let (r, piv) = self.rref();
        Mat { rows: piv.len(), cols: self.cols, data: r.data[..piv.len() * self.cols].to_vec() }
    }

    /// Basis of `{v : v * self = 0}`. The basis restricted to the returned
    /// free coordinates is the identity, so any member `v` of the kernel has
    /// coordinates `v[free[i]]`.
    pub fn left_kernel(&self) -> (Mat, Vec<usize>) {
        let t = self.transpose();
        let (r, pivots) = t.rref();
        let n = self.rows;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(free.len(), n);
        for (i, &f) in free.iter().enumerate() {
            basis.set(i, f, Scalar::one());
            for (pr, &pc) in pivots.iter().enumerate() {
                let v = -r.get(pr, f);
                basis.set(i, pc, v);
            }
        }
        (basis, free)
    }

    /// Columns not hit by a pivot of the row space: unit vectors on them
    /// complete a basis of the row space to the whole space.
    pub fn complement_columns(&self) -> Vec<usize> {
        let (_, pivots) = self.rref();
        (0..self.cols).filter(|c| !pivots.contains(c)).collect()
    }

    /// Coordinates of `v` with respect to the rows of `self`, assumed
    /// linearly independent.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut ech = CoordEchelon::new();
        for r in 0..self.rows {
            let sv: SparseVec = dense_to_sparse(self.row(r));
            ech.push(&sv).expect("rows must be independent");
        }
        let combo = ech.coords(&dense_to_sparse(v))?;
        Some((0..self.rows).map(|i| combo.get(&i).cloned().unwrap_or_else(Scalar::zero)).collect())
    }
}

pub fn dense_to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn sparse_to_dense(v: &SparseVec, len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for (k, x) in v {
        out[*k] = x.clone();
    }
    out
}
