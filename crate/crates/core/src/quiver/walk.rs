use std::fmt;

use super::{Path, Quiver, QuiverError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Direct,
    Inverse,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Direct => Sign::Inverse,
            Sign::Inverse => Sign::Direct,
        }
    }
}

/// An arrow or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub arrow: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn direct(arrow: usize) -> Self {
        Letter { arrow, sign: Sign::Direct }
    }

    pub fn inverse(arrow: usize) -> Self {
        Letter { arrow, sign: Sign::Inverse }
    }

    pub fn flipped(self) -> Self {
        Letter { arrow: self.arrow, sign: self.sign.flip() }
    }

    pub fn start(self, q: &Quiver) -> usize {
        let a = q.arrow(self.arrow);
        match self.sign {
            Sign::Direct => a.source,
            Sign::Inverse => a.target,
        }
    }

    pub fn end(self, q: &Quiver) -> usize {
        let a = q.arrow(self.arrow);
        match self.sign {
            Sign::Direct => a.target,
            Sign::Inverse => a.source,
        }
    }

    pub fn token(self, q: &Quiver) -> String {
        let name = &q.arrow(self.arrow).name;
        match self.sign {
            Sign::Direct => name.clone(),
            Sign::Inverse => format!("~{name}"),
        }
    }

    pub fn cancels(self, next: Letter) -> bool {
        self.arrow == next.arrow && self.sign != next.sign
    }
}

/// A nontrivial walk. The visited points are stored alongside the letters,
/// so every predicate is answerable without the quiver.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    letters: Vec<Letter>,
    points: Vec<usize>,
}

impl Walk {
    pub fn new(q: &Quiver, letters: Vec<Letter>) -> Result<Self, QuiverError> {
        let first = letters.first().ok_or(QuiverError::EmptyWalk)?;
        let mut points = vec![first.start(q)];
        for (i, l) in letters.iter().enumerate() {
            if l.start(q) != points[i] {
                return Err(QuiverError::NotComposable(letters[i - 1].token(q), l.token(q)));
            }
            points.push(l.end(q));
        }
        Ok(Walk { letters, points })
    }

    /// Parses space-separated tokens such as `a1 a2 ~b2 ~b1`.
    pub fn parse(q: &Quiver, text: &str) -> Result<Self, QuiverError> {
        let letters = text
            .split_whitespace()
            .map(|tok| match tok.strip_prefix('~') {
                Some(name) => q.arrow_by_name(name).map(Letter::inverse),
                None => q.arrow_by_name(tok).map(Letter::direct),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Walk::new(q, letters)
    }

    pub fn from_path(q: &Quiver, p: &Path) -> Option<Self> {
        if p.is_trivial() {
            return None;
        }
        Some(Walk::new(q, p.arrows().iter().map(|&a| Letter::direct(a)).collect()).expect("paths compose"))
    }

    /// The walk traversing `p` backwards.
    pub fn from_path_inverse(q: &Quiver, p: &Path) -> Option<Self> {
        Walk::from_path(q, p).map(|w| w.inverse())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn source(&self) -> usize {
        self.points[0]
    }

    pub fn target(&self) -> usize {
        *self.points.last().unwrap()
    }

    /// The `len() + 1` visited points, with multiplicity.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Strictly alternating signs. Walks that backtrack (`a ~a`) are not
    /// counted as zigzags.
    pub fn is_zigzag(&self) -> bool {
        self.is_reduced() && self.letters.windows(2).all(|w| w[0].sign != w[1].sign)
    }

    pub fn inverse(&self) -> Walk {
        let letters = self.letters.iter().rev().map(|l| l.flipped()).collect();
        let mut points = self.points.clone();
        points.reverse();
        Walk { letters, points }
    }

    /// Concatenation, when `other` starts where `self` ends.
    pub fn then(&self, other: &Walk) -> Option<Walk> {
        if self.target() != other.source() {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        Some(Walk { letters, points })
    }

    /// Repeats a closed walk `n >= 1` times.
    pub fn power(&self, n: usize) -> Option<Walk> {
        if n == 0 || self.source() != self.target() {
            return None;
        }
        let mut w = self.clone();
        for _ in 1..n {
            w = w.then(self)?;
        }
        Some(w)
    }

    /// Sub-walk of letters `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Option<Walk> {
        if start >= end || end > self.letters.len() {
            return None;
        }
        Some(Walk { letters: self.letters[start..end].to_vec(), points: self.points[start..=end].to_vec() })
    }

    /// `Some(sign)` when every letter has that sign.
    pub fn direction(&self) -> Option<Sign> {
        let s = self.letters[0].sign;
        self.letters.iter().all(|l| l.sign == s).then_some(s)
    }

    /// The underlying forward path of a sign-constant walk.
    pub fn underlying_path(&self, q: &Quiver) -> Option<Path> {
        match self.direction()? {
            Sign::Direct => Some(Path::new(q, self.source(), self.letters.iter().map(|l| l.arrow).collect()).unwrap()),
            Sign::Inverse => Some(Path::new(q, self.target(), self.letters.iter().rev().map(|l| l.arrow).collect()).unwrap()),
        }
    }

    /// Maximal sign-constant runs as `(start, end)` letter ranges.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut start = 0;
        for i in 1..=self.letters.len() {
            if i == self.letters.len() || self.letters[i].sign != self.letters[start].sign {
                runs.push((start, i));
                start = i;
            }
        }
        runs
    }

    /// Every contiguous sign-constant sub-run, as a forward path; deduplicated,
    /// ordered by (length, position).
    pub fn directed_subpaths(&self, q: &Quiver) -> Vec<Path> {
        let mut found: Vec<(usize, usize, Path)> = Vec::new();
        for (s, e) in self.runs() {
            for i in s..e {
                for j in i + 1..=e {
                    let p = self.slice(i, j).unwrap().underlying_path(q).unwrap();
                    found.push((j - i, i, p));
                }
            }
        }
        found.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut out: Vec<Path> = Vec::new();
        for (_, _, p) in found {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    pub fn uses_arrow(&self, a: usize) -> bool {
        self.letters.iter().any(|l| l.arrow == a)
    }

    pub fn tokens(&self, q: &Quiver) -> Vec<String> {
        self.letters.iter().map(|l| l.token(q)).collect()
    }

    pub fn display<'a>(&'a self, q: &'a Quiver) -> impl fmt::Display + 'a {
        DisplayWalk(self, q)
    }
}

struct DisplayWalk<'a>(&'a Walk, &'a Quiver);

impl fmt::Display for DisplayWalk<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.tokens(self.1).join(" "))
    }
}

/// Both walks are paths, or both are inverses of paths.
pub fn same_direction(u: &Walk, v: &Walk) -> bool {
    match (u.direction(), v.direction()) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}
