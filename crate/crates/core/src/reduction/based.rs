use crate::algebra::{LinComb, TruncatedAlgebra};
use crate::linalg::{add_scaled, unit, Echelon, SparseVec};
use crate::scalar::{Field, Scalar};

use super::ReductionError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub source: usize,
    pub target: usize,
    /// Largest `n` with the element in the `n`-th radical power.
    pub degree: usize,
    /// The element written in the ambient path algebra.
    pub rep: LinComb,
}

/// A basic algebra given by a basis of block elements `e_x b e_y` and its
/// structure constants. The first `num_points` elements are the primitive
/// idempotents, in point order.
#[derive(Clone, Debug)]
pub struct BasedAlgebra {
    field: Field,
    points: Vec<String>,
    ambient: Vec<usize>,
    elements: Vec<BasisElement>,
    products: Vec<Vec<SparseVec>>,
    /// `rad_powers[n - 1][x * k + y]` spans the `n`-th radical power in the
    /// block `(x, y)`, for `n` below the Loewy length.
    rad_powers: Vec<Vec<Echelon>>,
}

impl BasedAlgebra {
    /// Assembles the algebra; `elements[..points.len()]` must be the
    /// idempotents. Degrees are recomputed.
    pub(crate) fn from_parts(field: Field, points: Vec<String>, ambient: Vec<usize>, elements: Vec<BasisElement>, products: Vec<Vec<SparseVec>>) -> Self {
        let mut b = BasedAlgebra { field, points, ambient, elements, products, rad_powers: Vec::new() };
        b.compute_radical();
        b
    }

    fn compute_radical(&mut self) {
        let k = self.num_points();
        let mut first = vec![Echelon::new(); k * k];
        for (i, e) in self.elements.iter().enumerate().skip(k) {
            first[e.source * k + e.target].insert(&unit(i));
        }
        let mut powers = Vec::new();
        let mut current = first;
        while current.iter().any(|e| e.rank() > 0) {
            let mut next = vec![Echelon::new(); k * k];
            for x in 0..k {
                for z in 0..k {
                    for (_, row) in current[x * k + z].rows() {
                        for (j, e) in self.elements.iter().enumerate().skip(k) {
                            if e.source == z {
                                next[x * k + e.target].insert(&self.mul_vec(row, &unit(j)));
                            }
                        }
                    }
                }
            }
            powers.push(current);
            current = next;
        }
        for i in 0..self.elements.len() {
            let e = &self.elements[i];
            let block = e.source * k + e.target;
            let degree = powers.iter().take_while(|p| p[block].contains(&unit(i))).count();
            self.elements[i].degree = degree;
        }
        self.rad_powers = powers;
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    /// Point indices in the ambient algebra.
    pub fn ambient_points(&self) -> &[usize] {
        &self.ambient
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn idempotent(&self, x: usize) -> usize {
        x
    }

    pub fn mul(&self, i: usize, j: usize) -> &SparseVec {
        &self.products[i][j]
    }

    pub fn mul_vec(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in u {
            for (j, y) in v {
                let p = &self.products[*i][*j];
                if !p.is_empty() {
                    add_scaled(&mut out, &(x * y), p);
                }
            }
        }
        out
    }

    /// Smallest `n` with `rad^n = 0`.
    pub fn loewy_length(&self) -> usize {
        self.rad_powers.len() + 1
    }

    /// Span of the `n`-th radical power (`n >= 1`) in block `(x, y)`.
    pub fn rad_power(&self, n: usize, x: usize, y: usize) -> Echelon {
        let k = self.num_points();
        self.rad_powers.get(n - 1).map(|p| p[x * k + y].clone()).unwrap_or_default()
    }

    pub fn block(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(move |&i| self.elements[i].source == x && self.elements[i].target == y)
    }

    pub fn block_dim(&self, x: usize, y: usize) -> usize {
        self.block(x, y).count()
    }

    /// The vector written in the ambient path algebra.
    pub fn lift(&self, v: &SparseVec) -> Option<LinComb> {
        let mut it = v.iter();
        let (first, _) = it.next()?;
        let e = &self.elements[*first];
        let mut c = LinComb::zero(e.rep.source(), e.rep.target());
        for (i, x) in v {
            c = c.plus(&self.elements[*i].rep.scaled(x));
        }
        Some(c)
    }

    /// Checks the structural invariants: orthogonal idempotents summing to
    /// one, associativity, and a nilpotent radical.
    pub fn verify(&self) -> Result<(), String> {
        let k = self.num_points();
        let n = self.dim();
        for x in 0..k {
            for y in 0..k {
                let expect = if x == y { unit(x) } else { SparseVec::new() };
                if self.products[x][y] != expect {
                    return Err(format!("idempotents {x}, {y} are not orthogonal"));
                }
            }
        }
        for i in 0..n {
            let mut left = SparseVec::new();
            let mut right = SparseVec::new();
            for x in 0..k {
                add_scaled(&mut left, &Scalar::one(), &self.products[x][i]);
                add_scaled(&mut right, &Scalar::one(), &self.products[i][x]);
            }
            if left != unit(i) || right != unit(i) {
                return Err(format!("idempotents do not sum to the unit on element {i}"));
            }
        }
        for i in k..n {
            for j in k..n {
                let ij = &self.products[i][j];
                for l in k..n {
                    if self.mul_vec(ij, &unit(l)) != self.mul_vec(&unit(i), &self.products[j][l]) {
                        return Err(format!("product of {i}, {j}, {l} is not associative"));
                    }
                }
            }
        }
        if self.loewy_length() > n + 1 {
            return Err("radical is not nilpotent".into());
        }
        Ok(())
    }
}

/// The algebra `eAe` for `e` the sum of the idempotents at `pts`, with the
/// normal-form paths as basis.
pub fn full_subcategory(a: &TruncatedAlgebra, pts: &[usize]) -> Result<BasedAlgebra, ReductionError> {
    let mut pts = pts.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.is_empty() {
        return Err(ReductionError::EmptyPointSet);
    }
    a.require_admissible()?;
    let local = |x: usize| pts.iter().position(|&p| p == x);
    let mut ids: Vec<usize> = Vec::new();
    for &x in &pts {
        for &y in &pts {
            ids.extend_from_slice(a.basis_ids(x, y));
        }
    }
    ids.sort_unstable_by(|i, j| {
        let (p, q) = (a.path(*i), a.path(*j));
        (p.len(), local(p.source())).cmp(&(q.len(), local(q.source()))).then(p.cmp(q))
    });
    let position: std::collections::HashMap<usize, usize> = ids.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let elements: Vec<BasisElement> = ids
        .iter()
        .map(|&i| {
            let p = a.path(i);
            BasisElement { source: local(p.source()).unwrap(), target: local(p.target()).unwrap(), degree: 0, rep: LinComb::path(p.clone()) }
        })
        .collect();
    let products = ids
        .iter()
        .map(|&i| {
            ids.iter()
                .map(|&j| a.multiply_paths(a.path(i), a.path(j)).into_iter().map(|(id, x)| (position[&id], x)).collect())
                .collect()
        })
        .collect();
    let names = pts.iter().map(|&x| a.quiver().point_name(x).to_string()).collect();
    Ok(BasedAlgebra::from_parts(a.bound().field, names, pts, elements, products))
}
