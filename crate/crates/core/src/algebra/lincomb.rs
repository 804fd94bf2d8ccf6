use std::collections::BTreeMap;

use crate::quiver::{Path, Quiver, QuiverError};
use crate::scalar::{Field, Scalar};

/// A linear combination of parallel paths with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb {
    source: usize,
    target: usize,
    terms: BTreeMap<Path, Scalar>,
}

impl LinComb {
    pub fn zero(source: usize, target: usize) -> Self {
        LinComb { source, target, terms: BTreeMap::new() }
    }

    pub fn path(p: Path) -> Self {
        let mut c = LinComb::zero(p.source(), p.target());
        c.terms.insert(p, Scalar::one());
        c
    }

    /// Sums the terms; coefficients of repeated paths are combined. Fails if
    /// the paths are not parallel or the list is empty.
    pub fn from_terms(q: &Quiver, terms: Vec<(Scalar, Path)>) -> Result<Self, QuiverError> {
        let first = terms.first().ok_or(QuiverError::ZeroRelation)?.1.clone();
        let mut c = LinComb::zero(first.source(), first.target());
        for (x, p) in terms {
            if p.source() != c.source || p.target() != c.target {
                let shown: Vec<String> = vec![first.display(q), p.display(q)];
                return Err(QuiverError::MixedEndpoints(shown.join(", ")));
            }
            c.add_term(p, x);
        }
        Ok(c)
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of branches.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.terms.keys()
    }

    pub fn coefficient(&self, p: &Path) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Path::len).max().unwrap_or(0)
    }

    pub fn min_len(&self) -> usize {
        self.terms.keys().map(Path::len).min().unwrap_or(0)
    }

    pub fn add_term(&mut self, p: Path, x: Scalar) {
        assert!(p.source() == self.source && p.target() == self.target, "term is not parallel");
        let sum = &self.coefficient(&p) + &x;
        if sum.is_zero() {
            self.terms.remove(&p);
        } else {
            self.terms.insert(p, sum);
        }
    }

    pub fn scaled(&self, x: &Scalar) -> LinComb {
        let mut c = LinComb::zero(self.source, self.target);
        if !x.is_zero() {
            c.terms = self.terms.iter().map(|(p, y)| (p.clone(), y * x)).collect();
        }
        c
    }

    pub fn plus(&self, other: &LinComb) -> LinComb {
        assert!(self.source == other.source && self.target == other.target, "sum of non-parallel combinations");
        let mut c = self.clone();
        for (p, x) in &other.terms {
            c.add_term(p.clone(), x.clone());
        }
        c
    }

    /// Sub-combination on the chosen terms (by position in path order).
    pub fn subset(&self, mask: impl Fn(usize) -> bool) -> LinComb {
        let mut c = LinComb::zero(self.source, self.target);
        c.terms = self.terms.iter().enumerate().filter(|(i, _)| mask(*i)).map(|(_, (p, x))| (p.clone(), x.clone())).collect();
        c
    }

    /// Rescaled so the coefficient of the largest path is 1.
    pub fn normalized(&self) -> LinComb {
        match self.terms.iter().next_back() {
            Some((_, lead)) => self.scaled(&lead.inverse()),
            None => self.clone(),
        }
    }

    /// Equal up to a nonzero scalar.
    pub fn proportional(&self, other: &LinComb) -> bool {
        self.source == other.source && self.target == other.target && self.normalized() == other.normalized()
    }

    /// Coefficients mapped into `field`; terms that vanish there are dropped.
    pub fn in_field(&self, field: Field) -> Option<LinComb> {
        let mut c = LinComb::zero(self.source, self.target);
        for (p, x) in &self.terms {
            c.add_term(p.clone(), field.convert(x)?);
        }
        Some(c)
    }

    pub fn reversed(&self) -> LinComb {
        LinComb {
            source: self.target,
            target: self.source,
            terms: self.terms.iter().map(|(p, x)| (p.reversed(), x.clone())).collect(),
        }
    }

    /// Relation syntax, e.g. `2*a1*a2 - 1/3*b1*b2`; `0` for the zero combination.
    pub fn display(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (p, x)) in self.terms.iter().enumerate() {
            let (neg, mag) = if x.is_negative() { (true, -x) } else { (false, x.clone()) };
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&p.display(q));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::tests::kronecker_chain;

    #[test]
    fn combines_and_displays() {
        let q = kronecker_chain();
        let a = Path::parse(&q, "a1*a2").unwrap();
        let b = Path::parse(&q, "b1*b2").unwrap();
        let c = LinComb::from_terms(&q, vec![(Scalar::from_int(2), a.clone()), (Scalar::ratio(-1, 3), b.clone())]).unwrap();
        assert_eq!(c.display(&q), "2*a1*a2 - 1/3*b1*b2");
        let z = c.plus(&c.scaled(&Scalar::from_int(-1)));
        assert!(z.is_zero());
        assert!(c.proportional(&c.scaled(&Scalar::from_int(5))));
        assert_eq!(c.normalized().coefficient(&b), Scalar::one());
    }

    #[test]
    fn rejects_non_parallel_terms() {
        let q = kronecker_chain();
        let a = Path::parse(&q, "a1").unwrap();
        let b = Path::parse(&q, "a2").unwrap();
        let err = LinComb::from_terms(&q, vec![(Scalar::one(), a), (Scalar::one(), b)]).unwrap_err();
        assert!(matches!(err, QuiverError::MixedEndpoints(_)));
    }
}
