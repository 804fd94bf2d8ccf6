//! Depth-first enumeration of the middle part `w'` of a walk `u w' v`.
//!
//! Every condition placed on `w'` is closed under taking prefixes, so the
//! search prunes as soon as the newest letter breaks one.

use std::collections::{BTreeSet, VecDeque};

use super::{B2Reading, DetectorConfig};
use crate::algebra::{LinComb, TruncatedAlgebra};
use crate::quiver::{Letter, Path, Sign, Walk};

pub(crate) struct Conditions<'a> {
    alg: &'a TruncatedAlgebra,
    /// Arrows on the branches of `ρ` and `σ`.
    forbidden: BTreeSet<usize>,
    /// Points of those branches other than the branch's own endpoints.
    inner: BTreeSet<usize>,
    /// Branches of each relation consulted for (b2), and whether the
    /// relation passes through an inner point.
    taus: Vec<(Vec<Path>, bool)>,
    b2: Option<B2Reading>,
    strict_points: bool,
    junctions: bool,
}

impl<'a> Conditions<'a> {
    pub(crate) fn sequential(alg: &'a TruncatedAlgebra, rho: &LinComb, sigma: &LinComb, cfg: &DetectorConfig) -> Self {
        let q = alg.quiver();
        let mut forbidden = BTreeSet::new();
        let mut inner = BTreeSet::new();
        for b in rho.paths().chain(sigma.paths()) {
            forbidden.extend(b.arrows().iter().copied());
            let pts = b.points(q);
            inner.extend(pts[1..pts.len() - 1].iter().copied());
        }
        let relations: Vec<LinComb> = if cfg.widen_to_ideal {
            let n = alg.num_points();
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).flat_map(|(x, y)| alg.ideal_rows(x, y)).collect()
        } else {
            alg.top_relations().map(|t| t.to_vec()).unwrap_or_default()
        };
        let taus = relations
            .iter()
            .map(|t| {
                let branches: Vec<Path> = t.paths().cloned().collect();
                let meets = branches.iter().any(|b| b.points(q).iter().any(|x| inner.contains(x)));
                (branches, meets)
            })
            .collect();
        Conditions { alg, forbidden, inner, taus, b2: Some(cfg.b2), strict_points: cfg.strict_points, junctions: cfg.junctions }
    }

    /// Only forbids directed subpaths of `w'`, or running across its ends,
    /// that lie in the ideal.
    pub(crate) fn relation_free(alg: &'a TruncatedAlgebra) -> Self {
        Conditions { alg, forbidden: BTreeSet::new(), inner: BTreeSet::new(), taus: Vec::new(), b2: None, strict_points: false, junctions: true }
    }

    pub(crate) fn alg(&self) -> &TruncatedAlgebra {
        self.alg
    }

    pub(crate) fn is_inner(&self, x: usize) -> bool {
        self.inner.contains(&x)
    }

    pub(crate) fn is_forbidden(&self, a: usize) -> bool {
        self.forbidden.contains(&a)
    }

    pub(crate) fn on_relation(&self, p: &Path) -> bool {
        let carried = |bs: &Vec<Path>| bs.iter().any(|b| b.contains_subpath(p));
        match self.b2 {
            None => false,
            Some(B2Reading::SubpathMeetsInnerPoint) => {
                p.points(self.alg.quiver()).iter().any(|x| self.inner.contains(x)) && self.taus.iter().any(|(bs, _)| carried(bs))
            }
            Some(B2Reading::RelationMeetsInnerPoint) => self.taus.iter().any(|(bs, meets)| *meets && carried(bs)),
        }
    }

    pub(crate) fn path_ok(&self, p: &Path) -> bool {
        !self.alg.contains_path(p) && !self.on_relation(p)
    }
}

/// The forward path under a sign-constant run of letters.
pub(crate) fn run_path(alg: &TruncatedAlgebra, run: &[Letter]) -> Path {
    let mut arrows: Vec<usize> = run.iter().map(|l| l.arrow).collect();
    if run[0].sign == Sign::Inverse {
        arrows.reverse();
    }
    Path::from_arrows(alg.quiver(), arrows).expect("runs of a walk compose")
}

/// Directed stretches of `u w' v` running across an end of `w'` (or across
/// the seam of `u v` when `w'` is empty), without the first letter of `u`
/// or the last letter of `v`.
pub(crate) fn junction_paths(alg: &TruncatedAlgebra, u: &Walk, w_prime: Option<&Walk>, v: &Walk) -> Vec<Path> {
    let mut letters: Vec<Letter> = u.letters().to_vec();
    letters.extend(w_prime.map(|w| w.letters().to_vec()).unwrap_or_default());
    letters.extend_from_slice(v.letters());
    let seams = [u.len(), u.len() + w_prime.map_or(0, Walk::len)];
    let n = letters.len();
    let mut out = Vec::new();
    for i in 1..n {
        for j in i + 1..n {
            if letters[j - 1].sign != letters[i].sign {
                break;
            }
            if seams.iter().any(|&s| i < s && s < j) {
                out.push(run_path(alg, &letters[i..j]));
            }
        }
    }
    out
}

/// True when no directed subpath ending at the last letter violates `cond`.
pub(crate) fn newest_suffixes_ok(cond: &Conditions, letters: &[Letter]) -> bool {
    let n = letters.len();
    let sign = letters[n - 1].sign;
    let mut k = n - 1;
    while k > 0 && letters[k - 1].sign == sign {
        k -= 1;
    }
    (k..n).rev().all(|i| cond.path_ok(&run_path(cond.alg(), &letters[i..])))
}

pub(crate) struct Search<'a> {
    cond: &'a Conditions<'a>,
    start: usize,
    target: usize,
    us: Vec<Walk>,
    vs: Vec<Walk>,
    banned_first: Vec<Letter>,
    banned_last: Vec<Letter>,
    allow_empty: bool,
    max_len: usize,
    dist: Vec<usize>,
}

impl<'a> Search<'a> {
    /// Middle parts joining the common target of `us` to the common source
    /// of `vs`, keeping every `u w' v` reduced.
    pub(crate) fn between(cond: &'a Conditions<'a>, us: &[Walk], vs: &[Walk], max_len: usize) -> Self {
        let start = us[0].target();
        let target = vs[0].source();
        let lasts: Vec<Letter> = us.iter().map(|u| *u.letters().last().unwrap()).collect();
        let firsts: Vec<Letter> = vs.iter().map(|v| v.letters()[0]).collect();
        let allow_empty = start == target && lasts.iter().all(|l| firsts.iter().all(|f| !l.cancels(*f)));
        let q = cond.alg().quiver();
        let mut dist = vec![usize::MAX; q.num_points()];
        dist[target] = 0;
        let mut queue = VecDeque::from([target]);
        while let Some(x) = queue.pop_front() {
            for a in q.arrows_from(x).chain(q.arrows_into(x)) {
                if cond.is_forbidden(a) {
                    continue;
                }
                let ar = q.arrow(a);
                let y = if ar.source == x { ar.target } else { ar.source };
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        Search {
            cond,
            start,
            target,
            us: us.to_vec(),
            vs: vs.to_vec(),
            banned_first: lasts.iter().map(|l| l.flipped()).collect(),
            banned_last: firsts.iter().map(|l| l.flipped()).collect(),
            allow_empty,
            max_len,
            dist,
        }
    }

    /// All admissible middle parts in depth-first order; `None` stands for
    /// the empty middle part.
    pub(crate) fn run(&self) -> Vec<Option<Walk>> {
        let mut out = Vec::new();
        if self.allow_empty && self.junctions_ok(None) {
            out.push(None);
        }
        let mut letters = Vec::new();
        self.dfs(&mut letters, self.start, &mut out);
        out
    }

    fn junctions_ok(&self, w: Option<&Walk>) -> bool {
        let alg = self.cond.alg();
        !self.cond.junctions
            || self.us.iter().all(|u| self.vs.iter().all(|v| junction_paths(alg, u, w, v).iter().all(|p| !alg.contains_path(p))))
    }

    fn dfs(&self, letters: &mut Vec<Letter>, at: usize, out: &mut Vec<Option<Walk>>) {
        let q = self.cond.alg().quiver();
        if let Some(last) = letters.last() {
            if at == self.target && !self.banned_last.contains(last) {
                let w = Walk::new(q, letters.clone()).expect("search builds composable walks");
                if self.junctions_ok(Some(&w)) {
                    out.push(Some(w));
                }
            }
        }
        if letters.len() >= self.max_len {
            return;
        }
        let options: Vec<Letter> = q.arrows_from(at).map(Letter::direct).chain(q.arrows_into(at).map(Letter::inverse)).collect();
        for l in options {
            if self.cond.is_forbidden(l.arrow) {
                continue;
            }
            match letters.last() {
                Some(prev) if prev.cancels(l) => continue,
                None if self.banned_first.contains(&l) => continue,
                _ => {}
            }
            let next = l.end(q);
            if self.dist[next] == usize::MAX || letters.len() + 1 + self.dist[next] > self.max_len {
                continue;
            }
            if self.cond.strict_points && self.cond.is_inner(next) {
                continue;
            }
            letters.push(l);
            if newest_suffixes_ok(self.cond, letters) {
                self.dfs(letters, next, out);
            }
            letters.pop();
        }
    }
}
