//! Quivers, paths and walks.

pub(crate) mod bound;
mod walk;

pub use bound::BoundQuiver;
pub use walk::{same_direction, Letter, Sign, Walk};

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("quiver has no points")]
    NoPoints,
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("arrows do not compose: `{0}` then `{1}`")]
    NotComposable(String, String),
    #[error("walk must contain at least one letter")]
    EmptyWalk,
    #[error("relation branch shorter than two: `{0}`")]
    RelationBranchTooShort(String),
    #[error("relation paths are not parallel: `{0}`")]
    MixedEndpoints(String),
    #[error("relation is zero")]
    ZeroRelation,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient cannot be read in the field: `{0}`")]
    CoefficientOutsideField(String),
    #[error("truncation must be at least 2, got {0}")]
    TruncationTooSmall(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver. Points and arrows keep their declaration order, which
/// fixes every downstream enumeration order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Quiver {
    points: Vec<String>,
    arrows: Vec<Arrow>,
    point_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl Quiver {
    pub fn new(points: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Self, QuiverError> {
        let mut q = Quiver::default();
        for p in points {
            q.add_point(p)?;
        }
        if q.points.is_empty() {
            return Err(QuiverError::NoPoints);
        }
        for (name, s, t) in arrows {
            let s = q.point(&s)?;
            let t = q.point(&t)?;
            q.add_arrow(name, s, t)?;
        }
        Ok(q)
    }

    pub fn add_point(&mut self, name: String) -> Result<usize, QuiverError> {
        if self.point_index.contains_key(&name) {
            return Err(QuiverError::DuplicatePoint(name));
        }
        self.point_index.insert(name.clone(), self.points.len());
        self.points.push(name);
        Ok(self.points.len() - 1)
    }

    pub fn add_arrow(&mut self, name: String, source: usize, target: usize) -> Result<usize, QuiverError> {
        if self.arrow_index.contains_key(&name) {
            return Err(QuiverError::DuplicateArrow(name));
        }
        assert!(source < self.points.len() && target < self.points.len());
        self.arrow_index.insert(name.clone(), self.arrows.len());
        self.arrows.push(Arrow { name, source, target });
        Ok(self.arrows.len() - 1)
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn point_name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn point(&self, name: &str) -> Result<usize, QuiverError> {
        self.point_index.get(name).copied().ok_or_else(|| QuiverError::UnknownPoint(name.to_string()))
    }

    pub fn arrow_by_name(&self, name: &str) -> Result<usize, QuiverError> {
        self.arrow_index.get(name).copied().ok_or_else(|| QuiverError::UnknownArrow(name.to_string()))
    }

    pub fn arrows_from(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].source == x)
    }

    pub fn arrows_into(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == x)
    }

    /// Same points, every arrow reversed (arrow indices are preserved).
    pub fn opposite(&self) -> Quiver {
        let mut q = self.clone();
        for a in &mut q.arrows {
            std::mem::swap(&mut a.source, &mut a.target);
        }
        q
    }
}

/// A path: a source point followed by composable arrows. Paths are ordered
/// by length, then lexicographically by arrow index, then by source.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    source: usize,
    target: usize,
    arrows: Vec<usize>,
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Path {
    pub fn trivial(x: usize) -> Self {
        Path { source: x, target: x, arrows: Vec::new() }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Self {
        let ar = q.arrow(a);
        Path { source: ar.source, target: ar.target, arrows: vec![a] }
    }

    pub fn new(q: &Quiver, source: usize, arrows: Vec<usize>) -> Result<Self, QuiverError> {
        let mut at = source;
        for (i, &a) in arrows.iter().enumerate() {
            let ar = q.arrow(a);
            if ar.source != at {
                let prev = if i == 0 { q.point_name(source).to_string() } else { q.arrow(arrows[i - 1]).name.clone() };
                return Err(QuiverError::NotComposable(prev, ar.name.clone()));
            }
            at = ar.target;
        }
        Ok(Path { source, target: at, arrows })
    }

    /// Builds a nontrivial path from arrow indices.
    pub fn from_arrows(q: &Quiver, arrows: Vec<usize>) -> Result<Self, QuiverError> {
        let first = *arrows.first().ok_or(QuiverError::EmptyWalk)?;
        Path::new(q, q.arrow(first).source, arrows)
    }

    pub fn parse(q: &Quiver, text: &str) -> Result<Self, QuiverError> {
        let arrows = text
            .split(['*', ' '])
            .filter(|t| !t.is_empty())
            .map(|t| q.arrow_by_name(t))
            .collect::<Result<Vec<_>, _>>()?;
        Path::from_arrows(q, arrows)
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    /// Visited points in order; `len() + 1` entries.
    pub fn points(&self, q: &Quiver) -> Vec<usize> {
        let mut pts = vec![self.source];
        pts.extend(self.arrows.iter().map(|&a| q.arrow(a).target));
        pts
    }

    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.target != other.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path { source: self.source, target: other.target, arrows })
    }

    /// True when `other` occurs as a contiguous run of arrows in `self`.
    pub fn contains_subpath(&self, other: &Path) -> bool {
        if other.is_trivial() {
            return false;
        }
        self.arrows.windows(other.len()).any(|w| w == other.arrows.as_slice())
    }

    pub fn uses_arrow(&self, a: usize) -> bool {
        self.arrows.contains(&a)
    }

    /// The same path read in the opposite quiver.
    pub fn reversed(&self) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.reverse();
        Path { source: self.target, target: self.source, arrows }
    }

    /// `a1*a2*a3`, or `e_x` for a trivial path.
    pub fn display(&self, q: &Quiver) -> String {
        if self.is_trivial() {
            return format!("e_{}", q.point_name(self.source));
        }
        self.arrows.iter().map(|&a| q.arrow(a).name.as_str()).collect::<Vec<_>>().join("*")
    }
}

/// All paths of length at most `max_len`, in path order. Returns `None`
/// once more than `cap` paths would be produced.
pub fn enumerate_paths(q: &Quiver, max_len: usize, cap: usize) -> Option<Vec<Path>> {
    let mut all: Vec<Path> = (0..q.num_points()).map(Path::trivial).collect();
    let mut layer = all.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &layer {
            for a in q.arrows_from(p.target) {
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                next.push(Path { source: p.source, target: q.arrow(a).target, arrows });
            }
        }
        if next.is_empty() {
            break;
        }
        if all.len() + next.len() > cap {
            return None;
        }
        next.sort();
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort();
    Some(all)
}
