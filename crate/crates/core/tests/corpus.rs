mod common;

use seqwalk_core::algebra::TruncatedAlgebra;
use seqwalk_core::format::{emit, parse};
use seqwalk_core::homology::{default_bound, global_dimension, HomDim};

#[test]
fn commutative_kronecker_chain_shape() {
    let parsed = parse(&common::corpus_text("kronecker_chain_comm")).unwrap();
    let b = &parsed.bound;
    assert_eq!(b.quiver.num_points(), 3);
    assert_eq!(b.quiver.num_arrows(), 4);
    assert_eq!(b.relations.len(), 1);
    assert!(!parsed.explicit_truncation);
}

#[test]
fn every_corpus_algebra_is_admissible() {
    for (name, a) in common::corpus() {
        a.require_admissible().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(a.dim() > a.num_points(), "{name}");
    }
}

#[test]
fn emitted_files_parse_back_to_the_same_algebra() {
    for (name, a) in common::corpus() {
        let text = emit(a.bound());
        let again = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
        assert!(again.explicit_truncation, "{name}: emit fixes the truncation");
        assert_eq!(emit(&again.bound), text, "{name}");
        let b = again.build().unwrap();
        assert_eq!(b.dim(), a.dim(), "{name}");
        for x in 0..a.num_points() {
            for y in 0..a.num_points() {
                assert_eq!(b.block_dim(x, y), a.block_dim(x, y), "{name} block ({x},{y})");
            }
        }
    }
}

#[test]
fn global_dimensions_of_the_corpus() {
    let expected = [
        ("kronecker_chain_comm", 2),
        ("kronecker_chain_mono", 2),
        ("gentle_chain", 2),
        ("overlap_a4", 3),
        ("seven_vertex", 2),
        ("tree_gldim2", 2),
    ];
    for (name, gl) in expected {
        let a = common::load(name);
        assert_eq!(global_dimension(&a, default_bound(&a)).unwrap(), HomDim::Finite(gl), "{name}");
    }
}

#[test]
fn opposite_of_opposite_is_the_algebra() {
    for (name, a) in common::corpus() {
        let op = a.opposite();
        assert_eq!(op.dim(), a.dim(), "{name}");
        let back = TruncatedAlgebra::build(&op.bound().opposite()).unwrap();
        let body = |t: String| t.lines().skip(1).collect::<Vec<_>>().join("\n");
        assert_eq!(body(emit(back.bound())), body(emit(a.bound())), "{name}");
        for x in 0..a.num_points() {
            for y in 0..a.num_points() {
                assert_eq!(op.block_dim(y, x), a.block_dim(x, y), "{name}");
            }
        }
    }
}

#[test]
fn auto_truncation_stops_at_the_cap() {
    let parsed = parse("quiver loop\npoints 1\narrow l 1 1\n").unwrap();
    assert!(parsed.build().is_err(), "powers of a free loop never vanish");
    // Only b*a survives among the longer paths.
    let text = "quiver cycle\npoints 1 2\narrow a 1 2\narrow b 2 1\nrel a*b\n";
    let a = parse(text).unwrap().build().unwrap();
    assert_eq!(a.dim(), 5);
}
