use super::{Quiver, QuiverError};
use crate::algebra::LinComb;
use crate::scalar::{is_prime, Field};

/// A quiver with generating relations, a nilpotency bound `truncation` such
/// that every path of that length is expected to lie in the ideal, and the
/// ground field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundQuiver {
    pub name: String,
    pub quiver: Quiver,
    pub relations: Vec<LinComb>,
    pub truncation: usize,
    pub field: Field,
}

impl BoundQuiver {
    pub fn new(name: impl Into<String>, quiver: Quiver, relations: Vec<LinComb>, truncation: usize, field: Field) -> Result<Self, QuiverError> {
        if truncation < 2 {
            return Err(QuiverError::TruncationTooSmall(truncation));
        }
        if let Field::Prime(p) = field {
            if !is_prime(p) {
                return Err(QuiverError::NotPrime(p));
            }
        }
        let relations = relations
            .iter()
            .map(|r| r.in_field(field).ok_or_else(|| QuiverError::CoefficientOutsideField(r.display(&quiver))))
            .collect::<Result<Vec<_>, _>>()?;
        for r in &relations {
            validate_relation(&quiver, r)?;
        }
        Ok(BoundQuiver { name: name.into(), quiver, relations, truncation, field })
    }

    pub fn longest_branch(&self) -> usize {
        self.relations.iter().map(LinComb::max_len).max().unwrap_or(0)
    }

    pub fn is_monomial(&self) -> bool {
        self.relations.iter().all(LinComb::is_monomial)
    }

    /// Arrows reversed, relation paths reversed; same truncation and field.
    pub fn opposite(&self) -> BoundQuiver {
        BoundQuiver {
            name: format!("{}_op", self.name),
            quiver: self.quiver.opposite(),
            relations: self.relations.iter().map(LinComb::reversed).collect(),
            truncation: self.truncation,
            field: self.field,
        }
    }

    pub fn with_truncation(&self, truncation: usize) -> BoundQuiver {
        BoundQuiver { truncation, ..self.clone() }
    }
}

/// Relations must be nonzero, parallel, and made of paths of length >= 2.
pub(crate) fn validate_relation(q: &Quiver, r: &LinComb) -> Result<(), QuiverError> {
    if r.is_zero() {
        return Err(QuiverError::ZeroRelation);
    }
    for p in r.paths() {
        if p.len() < 2 {
            return Err(QuiverError::RelationBranchTooShort(r.display(q)));
        }
    }
    Ok(())
}
