//! The monomial side: sequential pairs, bands and intertwined double zeros.

use std::collections::BTreeSet;

use super::search::{newest_suffixes_ok, Conditions, Search};
use super::{assemble, run_grid, DetectorConfig, DetectorError, Orientation, SequentialWalkCertificate};
use crate::algebra::{LinComb, TruncatedAlgebra};
use crate::quiver::{Letter, Path, Sign, Walk};

fn monomial_tops(a: &TruncatedAlgebra) -> Result<&[LinComb], DetectorError> {
    let tops = a.top_relations()?;
    if tops.iter().all(LinComb::is_monomial) {
        Ok(tops)
    } else {
        Err(DetectorError::NotMonomialAlgebra)
    }
}

fn single_branch(r: &LinComb) -> &Path {
    r.paths().next().expect("relations are nonzero")
}

/// Reduced walks `u w' v` with `u`, `v` zero relations pointing the same way
/// and no zero relation inside `w'`.
pub fn detect_sequential_pairs(a: &TruncatedAlgebra, cfg: &DetectorConfig) -> Result<Vec<SequentialWalkCertificate>, DetectorError> {
    let tops = monomial_tops(a)?;
    let q = a.quiver();
    let cond = Conditions::relation_free(a);
    let n = tops.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mut found = run_grid(cells, cfg.threads, |i, j| {
        let mut out = Vec::new();
        for orientation in [Orientation::Forward, Orientation::Inverse] {
            let (ub, vb) = (single_branch(&tops[i]), single_branch(&tops[j]));
            let u = orientation.walk(q, ub);
            let v = orientation.walk(q, vb);
            for w in Search::between(&cond, &[u.clone()], &[v.clone()], cfg.max_walk_len).run() {
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
        out
    });
    found.sort_by_cached_key(SequentialWalkCertificate::sort_key);
    Ok(found)
}

/// Monomial relations, at most two arrows in and out of each point, and for
/// each arrow at most one continuation on either side avoiding the ideal.
pub fn is_string_algebra(a: &TruncatedAlgebra) -> bool {
    let Ok(tops) = a.top_relations() else {
        return false;
    };
    if !tops.iter().all(LinComb::is_monomial) {
        return false;
    }
    let q = a.quiver();
    if (0..q.num_points()).any(|x| q.arrows_from(x).count() > 2 || q.arrows_into(x).count() > 2) {
        return false;
    }
    let survives = |x: usize, y: usize| !a.contains_path(&Path::from_arrows(q, vec![x, y]).unwrap());
    (0..q.num_arrows()).all(|b| {
        let ar = q.arrow(b);
        q.arrows_from(ar.target).filter(|&g| survives(b, g)).count() <= 1 && q.arrows_into(ar.source).filter(|&d| survives(d, b)).count() <= 1
    })
}

fn is_proper_power(letters: &[Letter]) -> bool {
    let n = letters.len();
    (1..n).filter(|d| n % d == 0).any(|d| (d..n).all(|i| letters[i] == letters[i - d]))
}

fn rotations_and_inverses(b: &Walk) -> Vec<Walk> {
    let mut out = Vec::new();
    for w in [b.clone(), b.inverse()] {
        for k in 0..w.len() {
            let rot = if k == 0 { w.clone() } else { w.slice(k, w.len()).unwrap().then(&w.slice(0, k).unwrap()).unwrap() };
            if !out.contains(&rot) {
                out.push(rot);
            }
        }
    }
    out
}

fn canonical(b: &Walk) -> Walk {
    rotations_and_inverses(b).into_iter().min_by(|x, y| x.letters().cmp(y.letters())).unwrap()
}

/// Bands up to `max_band_len`, one per rotation and inversion class, ordered
/// by length and letters.
pub fn find_bands(a: &TruncatedAlgebra, cfg: &DetectorConfig) -> Result<Vec<Walk>, DetectorError> {
    if !is_string_algebra(a) {
        return Err(DetectorError::NotStringAlgebra);
    }
    let q = a.quiver();
    let cond = Conditions::relation_free(a);
    let mut found: BTreeSet<(usize, Vec<Letter>)> = BTreeSet::new();
    let mut letters = Vec::new();
    for x in 0..q.num_points() {
        closed_walks(&cond, x, x, cfg.max_band_len, &mut letters, &mut |ls| {
            if let Some(b) = accept_band(&cond, ls) {
                found.insert((b.len(), b.letters().to_vec()));
            }
        });
    }
    Ok(found.into_iter().map(|(_, ls)| Walk::new(q, ls).unwrap()).collect())
}

fn closed_walks(cond: &Conditions, origin: usize, at: usize, max_len: usize, letters: &mut Vec<Letter>, emit: &mut dyn FnMut(&[Letter])) {
    let q = cond.alg().quiver();
    if !letters.is_empty() && at == origin {
        emit(letters);
    }
    if letters.len() >= max_len {
        return;
    }
    let options: Vec<Letter> = q.arrows_from(at).map(Letter::direct).chain(q.arrows_into(at).map(Letter::inverse)).collect();
    for l in options {
        if letters.last().is_some_and(|p| p.cancels(l)) {
            continue;
        }
        letters.push(l);
        if newest_suffixes_ok(cond, letters) {
            closed_walks(cond, origin, l.end(q), max_len, letters, emit);
        }
        letters.pop();
    }
}

fn accept_band(cond: &Conditions, letters: &[Letter]) -> Option<Walk> {
    let q = cond.alg().quiver();
    let has_both = letters.iter().any(|l| l.sign == Sign::Direct) && letters.iter().any(|l| l.sign == Sign::Inverse);
    if !has_both || is_proper_power(letters) || letters.last().unwrap().cancels(letters[0]) {
        return None;
    }
    let b = Walk::new(q, letters.to_vec()).ok()?;
    let twice = b.power(2)?;
    if twice.directed_subpaths(q).iter().any(|p| cond.alg().contains_path(p)) {
        return None;
    }
    Some(canonical(&b))
}

/// `ρ₁ w₁ w₂ w₃ ρ₂` with `w₂` a rotation or inverse of a band.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwinedDoubleZero {
    pub rho1_index: usize,
    pub rho2_index: usize,
    pub orientation: Orientation,
    pub u: Walk,
    pub w1: Option<Walk>,
    pub band: Walk,
    pub w3: Option<Walk>,
    pub v: Walk,
    pub full_walk: Walk,
}

fn join(parts: &[Option<&Walk>]) -> Option<Walk> {
    let mut acc: Option<Walk> = None;
    for w in parts.iter().flatten() {
        acc = Some(match acc {
            None => (*w).clone(),
            Some(a) => a.then(w)?,
        });
    }
    acc
}

impl IntertwinedDoubleZero {
    /// `w₁ w₂ⁿ w₃`, the middle part with the band repeated `n` times.
    pub fn pumped_interior(&self, n: usize) -> Option<Walk> {
        let band = self.band.power(n)?;
        join(&[self.w1.as_ref(), Some(&band), self.w3.as_ref()])
    }

    /// The sequential-walk reading `u = ρ₁`, `w' = w₁ w₂ⁿ w₃`, `v = ρ₂`.
    pub fn pumped_certificate(&self, a: &TruncatedAlgebra, n: usize) -> Option<SequentialWalkCertificate> {
        let q = a.quiver();
        let tops = a.top_relations().ok()?;
        let w_prime = self.pumped_interior(n)?;
        let full = assemble(&self.u, Some(&w_prime), &self.v)?;
        let rho = tops[self.rho1_index].clone();
        let sigma = tops[self.rho2_index].clone();
        debug_assert_eq!(self.orientation.walk(q, single_branch(&rho)), self.u);
        Some(SequentialWalkCertificate {
            rho_index: self.rho1_index,
            sigma_index: self.rho2_index,
            u_branch: single_branch(&rho).clone(),
            v_branch: single_branch(&sigma).clone(),
            rho,
            sigma,
            w_prime: Some(w_prime),
            orientation: self.orientation,
            full_walk: full,
        })
    }
}

/// Intertwined double zeros whose middle part has at most `max_walk_len`
/// letters, one per full walk.
pub fn detect_intertwined_double_zero(a: &TruncatedAlgebra, cfg: &DetectorConfig) -> Result<Vec<IntertwinedDoubleZero>, DetectorError> {
    let bands = find_bands(a, cfg)?;
    let tops = monomial_tops(a)?;
    let q = a.quiver();
    let forms: Vec<Walk> = bands.iter().flat_map(rotations_and_inverses).collect();
    if forms.is_empty() {
        return Ok(Vec::new());
    }
    let cond = Conditions::relation_free(a);
    let mut out: Vec<IntertwinedDoubleZero> = Vec::new();
    let mut seen = BTreeSet::new();
    for i in 0..tops.len() {
        for j in 0..tops.len() {
            for orientation in [Orientation::Forward, Orientation::Inverse] {
                let u = orientation.walk(q, single_branch(&tops[i]));
                let v = orientation.walk(q, single_branch(&tops[j]));
                for w in Search::between(&cond, &[u.clone()], &[v.clone()], cfg.max_walk_len).run().into_iter().flatten() {
                    let stripped = join(&[u.slice(1, u.len()).as_ref(), Some(&w), v.slice(0, v.len() - 1).as_ref()]).unwrap();
                    if stripped.directed_subpaths(q).iter().any(|p| a.contains_path(p)) {
                        continue;
                    }
                    let Some((k, f)) = (0..w.len()).find_map(|k| {
                        forms.iter().find(|f| k + f.len() <= w.len() && w.letters()[k..k + f.len()] == *f.letters()).map(|f| (k, f))
                    }) else {
                        continue;
                    };
                    let full = assemble(&u, Some(&w), &v).unwrap();
                    if !seen.insert(full.letters().to_vec()) {
                        continue;
                    }
                    out.push(IntertwinedDoubleZero {
                        rho1_index: i,
                        rho2_index: j,
                        orientation,
                        u: u.clone(),
                        w1: w.slice(0, k),
                        band: f.clone(),
                        w3: w.slice(k + f.len(), w.len()),
                        v: v.clone(),
                        full_walk: full,
                    });
                }
            }
        }
    }
    out.sort_by_key(|d| (d.rho1_index, d.rho2_index, d.full_walk.len(), d.full_walk.letters().to_vec(), d.orientation));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{a4, algebra, band, kronecker, six_point_pair};
    use super::*;

    #[test]
    fn string_algebra_recognition() {
        // gamma follows both alpha and sigma without a relation
        assert!(!is_string_algebra(&six_point_pair()));
        assert!(is_string_algebra(&kronecker(&[&[(1, "a1*a2")], &[(1, "b1*b2")]])));
        assert!(!is_string_algebra(&kronecker(&[&[(1, "a1*a2"), (1, "b1*b2")]])));
    }

    #[test]
    fn sequential_pair_quiver_pair_is_found() {
        let a = six_point_pair();
        let found = detect_sequential_pairs(&a, &DetectorConfig::default()).unwrap();
        let walks: Vec<String> = found.iter().map(|c| c.full_walk.display(a.quiver()).to_string()).collect();
        assert!(walks.contains(&"alpha beta ~eps sigma gamma delta".to_string()), "{walks:?}");
        assert!(detect_sequential_pairs(&a4(), &DetectorConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn pairs_need_monomial_algebra() {
        let a = kronecker(&[&[(1, "a1*a2"), (1, "b1*b2")]]);
        assert_eq!(detect_sequential_pairs(&a, &DetectorConfig::default()), Err(DetectorError::NotMonomialAlgebra));
    }

    #[test]
    fn band_quiver_band() {
        let a = band();
        let bands = find_bands(&a, &DetectorConfig::default()).unwrap();
        let shown: Vec<String> = bands.iter().map(|b| b.display(a.quiver()).to_string()).collect();
        assert_eq!(shown, ["c ~d"]);
        assert!(find_bands(&a4(), &DetectorConfig::default()).unwrap().is_empty());
        let cycle = algebra(&["1", "2"], &[("x", "1", "2"), ("y", "2", "1")], &[&[(1, "x*y")], &[(1, "y*x")]]);
        assert!(find_bands(&cycle, &DetectorConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn band_quiver_double_zero() {
        let a = band();
        let found = detect_intertwined_double_zero(&a, &DetectorConfig::default()).unwrap();
        let walks: Vec<String> = found.iter().map(|d| d.full_walk.display(a.quiver()).to_string()).collect();
        assert!(walks.contains(&"a b c ~d c e f".to_string()), "{walks:?}");
        assert_eq!(detect_intertwined_double_zero(&six_point_pair(), &DetectorConfig::default()), Err(DetectorError::NotStringAlgebra));
        // both Kronecker subquivers carry bands
        let gentle = kronecker(&[&[(1, "a1*a2")], &[(1, "b1*b2")]]);
        let bands: Vec<String> = find_bands(&gentle, &DetectorConfig::default()).unwrap().iter().map(|b| b.display(gentle.quiver()).to_string()).collect();
        assert_eq!(bands[..3], ["a1 ~b1", "a2 ~b2", "a1 b2 ~a2 ~b1"]);
        let found = detect_intertwined_double_zero(&gentle, &DetectorConfig::default()).unwrap();
        let walks: Vec<String> = found.iter().map(|d| d.full_walk.display(gentle.quiver()).to_string()).collect();
        assert!(walks.contains(&"a1 a2 ~b2 ~a1 b1 ~a1 b1 b2".to_string()), "{walks:?}");
    }

    #[test]
    fn power_detection() {
        let l = |a| Letter::direct(a);
        assert!(is_proper_power(&[l(0), l(1), l(0), l(1)]));
        assert!(!is_proper_power(&[l(0), l(1), l(0)]));
    }
}
