mod common;

use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use seqwalk_core::algebra::TruncatedAlgebra;
use seqwalk_core::detector::{detect_sequential_walks, DetectorConfig};
use seqwalk_core::format::{emit, parse};
use seqwalk_core::homology::{default_bound, ext_simple_dims, global_dimension, inj_dim, injective, proj_dim, projective, simple, HomDim};
use seqwalk_core::quiver::enumerate_paths;
use seqwalk_core::reduction::standard_reduction;

/// Paths from `x` to `y` lying in the ideal while none of their proper
/// subpaths do: the minimal zero relations of a monomial algebra.
fn minimal_zero_paths(a: &TruncatedAlgebra, x: usize, y: usize) -> usize {
    let q = a.quiver();
    let n = a.bound().truncation;
    enumerate_paths(q, n, 200_000)
        .unwrap()
        .into_iter()
        .filter(|p| p.len() >= 2 && p.source() == x && p.target() == y && a.contains_path(p))
        .filter(|p| {
            let ar = p.arrows();
            let head = seqwalk_core::quiver::Path::from_arrows(q, ar[..ar.len() - 1].to_vec()).unwrap();
            let tail = seqwalk_core::quiver::Path::from_arrows(q, ar[1..].to_vec()).unwrap();
            !a.contains_path(&head) && !a.contains_path(&tail)
        })
        .count()
}

fn check_ext_low_degrees(a: &TruncatedAlgebra) -> Result<(), String> {
    let q = a.quiver();
    for x in 0..a.num_points() {
        let table = ext_simple_dims(a, x, 2).map_err(|e| e.to_string())?;
        for y in 0..a.num_points() {
            let arrows = q.arrows_from(x).filter(|&b| q.arrow(b).target == y).count();
            if table[1][y] != arrows {
                return Err(format!("Ext1(S{x}, S{y}) = {} but {arrows} arrows", table[1][y]));
            }
            let zeros = minimal_zero_paths(a, x, y);
            if table[2][y] != zeros {
                return Err(format!("Ext2(S{x}, S{y}) = {} but {zeros} minimal zero paths", table[2][y]));
            }
        }
    }
    Ok(())
}

fn check_duality(a: &TruncatedAlgebra) -> Result<(), String> {
    let bound = default_bound(a);
    for x in 0..a.num_points() {
        let p = projective(a, x);
        let i = injective(a, x);
        if p.dual().dual() != p || i.dual().dual() != i {
            return Err(format!("double dual differs at {x}"));
        }
        if proj_dim(a, &p, bound).map_err(|e| e.to_string())? != HomDim::Finite(0) {
            return Err(format!("P{x} not projective"));
        }
        if inj_dim(a, &i, bound).map_err(|e| e.to_string())? != HomDim::Finite(0) {
            return Err(format!("I{x} not injective"));
        }
        let s = simple(a, x);
        if s.dual() != simple(a.opposite(), x) {
            return Err(format!("dual of S{x} is not the simple of the opposite"));
        }
    }
    // Global dimension is attained on simples from either side.
    let gl = global_dimension(a, bound).map_err(|e| e.to_string())?;
    let op = global_dimension(a.opposite(), bound).map_err(|e| e.to_string())?;
    if let (HomDim::Finite(g), HomDim::Finite(h)) = (gl, op) {
        let ids: Vec<HomDim> = (0..a.num_points()).map(|x| inj_dim(a, &simple(a, x), bound).unwrap()).collect();
        let max_id = ids.iter().filter_map(|d| d.finite()).max().unwrap_or(0);
        if g != h || max_id != g {
            return Err(format!("gldim {g}, opposite {h}, largest id of a simple {max_id}"));
        }
    }
    Ok(())
}

fn check_round_trip(a: &TruncatedAlgebra) -> Result<(), String> {
    let text = emit(a.bound());
    let again = parse(&text).map_err(|e| e.to_string())?;
    if emit(&again.bound) != text {
        return Err(format!("emit is not stable:\n{text}"));
    }
    let b = again.build().map_err(|e| e.to_string())?;
    if b.dim() != a.dim() {
        return Err(format!("dimension {} after round trip, {} before", b.dim(), a.dim()));
    }
    Ok(())
}

fn check_presentation(a: &TruncatedAlgebra, limit: usize) -> Result<(), String> {
    let certs = detect_sequential_walks(a, &DetectorConfig::default().with_max_walk_len(5)).map_err(|e| e.to_string())?;
    for cert in certs.iter().take(limit) {
        let Ok(r) = standard_reduction(a, cert) else { continue };
        let b = TruncatedAlgebra::build(&r.presented).map_err(|e| e.to_string())?;
        b.require_admissible().map_err(|e| e.to_string())?;
        for x in 0..b.num_points() {
            for y in 0..b.num_points() {
                if b.block_dim(x, y) != r.reduced.block_dim(x, y) {
                    return Err(format!("block ({x},{y}) is {} presented, {} reduced", b.block_dim(x, y), r.reduced.block_dim(x, y)));
                }
                let ext2 = ext_simple_dims(&b, x, 2).map_err(|e| e.to_string())?[2][y];
                if ext2 != b.top_relation_count(x, y) {
                    return Err(format!("presented Ext2({x},{y}) = {ext2}, {} relations", b.top_relation_count(x, y)));
                }
            }
        }
    }
    Ok(())
}

#[test]
fn corpus_ext_and_duality() {
    for (name, a) in common::corpus() {
        check_duality(&a).unwrap_or_else(|e| panic!("{name}: {e}"));
        if a.bound().is_monomial() {
            check_ext_low_degrees(&a).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

#[test]
fn corpus_reductions_present_faithfully() {
    for (name, a) in common::corpus() {
        check_presentation(&a, usize::MAX).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, rng_seed: RngSeed::Fixed(0xe72), ..ProptestConfig::default() })]

    #[test]
    fn ext_in_low_degrees_counts_arrows_and_zero_relations(seed in any::<u64>()) {
        let a = common::random_monomial(&mut common::rng(seed), 0);
        let r = check_ext_low_degrees(&a);
        prop_assert!(r.is_ok(), "{:?}\n{}", r, emit(a.bound()));
    }

    #[test]
    fn duality_exchanges_projectives_and_injectives(seed in any::<u64>()) {
        let a = common::random_monomial(&mut common::rng(seed), 0);
        let r = check_duality(&a);
        prop_assert!(r.is_ok(), "{:?}\n{}", r, emit(a.bound()));
    }

    #[test]
    fn emit_and_parse_round_trip(seed in any::<u64>()) {
        let a = common::random_monomial(&mut common::rng(seed), 0);
        let r = check_round_trip(&a);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn reductions_present_faithfully(seed in any::<u64>()) {
        let a = common::random_monomial(&mut common::rng(seed), 0);
        let r = check_presentation(&a, 12);
        prop_assert!(r.is_ok(), "{:?}\n{}", r, emit(a.bound()));
    }
}
