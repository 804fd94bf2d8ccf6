//! Corpus loading and seeded generators shared by the integration suites.
//! Also compiled into the acceptance target of the command-line crate.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use seqwalk_core::algebra::{LinComb, TruncatedAlgebra};
use seqwalk_core::format;
use seqwalk_core::homology::{default_bound, global_dimension, HomDim};
use seqwalk_core::quiver::{enumerate_paths, BoundQuiver, Path, Quiver};
use seqwalk_core::scalar::Field;

pub const CORPUS: [&str; 8] = [
    "kronecker_chain_comm",
    "kronecker_chain_mono",
    "gentle_chain",
    "sequential_pair",
    "overlap_a4",
    "seven_vertex",
    "tree_gldim2",
    "band_double_zero",
];

pub fn corpus_dir() -> PathBuf {
    // Resolves from either crate of the workspace.
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus"))
}

pub fn corpus_path(name: &str) -> PathBuf {
    corpus_dir().join(format!("{name}.bq"))
}

pub fn corpus_text(name: &str) -> String {
    std::fs::read_to_string(corpus_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load(name: &str) -> TruncatedAlgebra {
    let parsed = format::parse(&corpus_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    parsed.build().unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn corpus() -> Vec<(&'static str, TruncatedAlgebra)> {
    CORPUS.iter().map(|&n| (n, load(n))).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn quiver(n: usize, arrows: &[(usize, usize)]) -> Quiver {
    let points = (1..=n).map(|i| i.to_string()).collect();
    let arrows = arrows.iter().enumerate().map(|(i, &(s, t))| (format!("x{}", i + 1), (s + 1).to_string(), (t + 1).to_string())).collect();
    Quiver::new(points, arrows).expect("generated quiver is valid")
}

/// Drops duplicates and any path containing another one.
fn minimal(mut paths: Vec<Path>) -> Vec<Path> {
    paths.sort();
    paths.dedup();
    let keep: Vec<Path> = paths
        .iter()
        .filter(|p| !paths.iter().any(|o| o != *p && p.contains_subpath(o)))
        .cloned()
        .collect();
    keep
}

fn bound(name: String, q: Quiver, zeros: Vec<Path>) -> BoundQuiver {
    let relations: Vec<LinComb> = minimal(zeros).into_iter().map(LinComb::path).collect();
    let longest = relations.iter().map(LinComb::max_len).max().unwrap_or(0);
    BoundQuiver::new(name, q, relations, longest.max(1) + 2, Field::Rationals).expect("zero relations are valid")
}

fn pick_zeros(rng: &mut ChaCha8Rng, q: &Quiver, max_len: usize, max_count: usize) -> Vec<Path> {
    let candidates: Vec<Path> = enumerate_paths(q, max_len, 10_000)
        .expect("small quiver")
        .into_iter()
        .filter(|p| p.len() >= 2)
        .collect();
    let k = rng.gen_range(0..=max_count).min(candidates.len());
    candidates.choose_multiple(rng, k).cloned().collect()
}

fn admissible(b: &BoundQuiver) -> Option<TruncatedAlgebra> {
    TruncatedAlgebra::build_auto(b, format::AUTO_TRUNCATION_CAP).ok()
}

/// Connected monomial algebra on at most 6 points and 8 arrows, with at
/// most two arrows between any two points. Mostly acyclic; about one in
/// five carries an oriented cycle bounded by its relations.
pub fn random_monomial(rng: &mut ChaCha8Rng, index: usize) -> TruncatedAlgebra {
    loop {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(n - 1..=8.min(n * (n - 1)));
        let mut rank: Vec<usize> = (0..n).collect();
        rank.shuffle(rng);
        let orient = |x: usize, y: usize| if rank[x] < rank[y] { (x, y) } else { (y, x) };
        let mut arrows: Vec<(usize, usize)> = (1..n).map(|i| orient(i, rng.gen_range(0..i))).collect();
        let cyclic = rng.gen_bool(0.2);
        while arrows.len() < m {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if x == y {
                continue;
            }
            let (s, t) = orient(x, y);
            if arrows.iter().filter(|&&(a, b)| (a, b) == (s, t) || (a, b) == (t, s)).count() >= 2 {
                continue;
            }
            arrows.push(if cyclic && arrows.len() + 1 == m { (t, s) } else { (s, t) });
        }
        let q = quiver(n, &arrows);
        let zeros = pick_zeros(rng, &q, 3, if cyclic { 6 } else { 4 });
        if let Some(a) = admissible(&bound(format!("random_{index}"), q, zeros)) {
            return a;
        }
    }
}

fn gldim_two(a: &TruncatedAlgebra) -> bool {
    global_dimension(a, default_bound(a)).ok() == Some(HomDim::Finite(2))
}

/// Linear or cyclic Nakayama algebra given by zero relations, global
/// dimension exactly two.
pub fn nakayama_gldim2(rng: &mut ChaCha8Rng, index: usize) -> TruncatedAlgebra {
    loop {
        let n = rng.gen_range(3..=7);
        let cyclic = rng.gen_bool(0.3);
        let arrows: Vec<(usize, usize)> = if cyclic { (0..n).map(|i| (i, (i + 1) % n)).collect() } else { (0..n - 1).map(|i| (i, i + 1)).collect() };
        let q = quiver(n, &arrows);
        let count = rng.gen_range(1..=n);
        let zeros: Vec<Path> = (0..count)
            .filter_map(|_| {
                let start = rng.gen_range(0..n);
                let len = rng.gen_range(2..=4);
                let steps: Vec<usize> = (0..len).map(|k| (start + k) % n).collect();
                if !cyclic && steps.iter().any(|&k| k >= n - 1) {
                    return None;
                }
                Some(Path::new(&q, start, steps).expect("consecutive arrows compose"))
            })
            .collect();
        if zeros.is_empty() {
            continue;
        }
        if let Some(a) = admissible(&bound(format!("nakayama_{index}"), q, zeros)) {
            if gldim_two(&a) {
                return a;
            }
        }
    }
}

/// Monomial algebra on a randomly oriented tree, global dimension two.
pub fn tree_monomial_gldim2(rng: &mut ChaCha8Rng, index: usize) -> TruncatedAlgebra {
    loop {
        let n = rng.gen_range(4..=8);
        let arrows: Vec<(usize, usize)> = (1..n)
            .map(|i| {
                let j = rng.gen_range(0..i);
                if rng.gen_bool(0.5) {
                    (i, j)
                } else {
                    (j, i)
                }
            })
            .collect();
        let q = quiver(n, &arrows);
        let zeros = pick_zeros(rng, &q, 3, 4);
        if zeros.is_empty() {
            continue;
        }
        if let Some(a) = admissible(&bound(format!("tree_{index}"), q, zeros)) {
            if gldim_two(&a) {
                return a;
            }
        }
    }
}

pub fn family(seed: u64, count: usize, gen: fn(&mut ChaCha8Rng, usize) -> TruncatedAlgebra) -> Vec<TruncatedAlgebra> {
    let mut r = rng(seed);
    (0..count).map(|i| gen(&mut r, i)).collect()
}
