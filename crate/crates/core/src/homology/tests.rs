use super::*;
use crate::detector::tests::{a4, algebra, kronecker, seven_vertex};
use crate::detector::detect_sequential_walks;
use crate::reduction::standard_reduction;

fn pt(a: &TruncatedAlgebra, name: &str) -> usize {
    a.quiver().point(name).unwrap()
}

fn dims_named(a: &TruncatedAlgebra, m: &Representation) -> Vec<(String, usize)> {
    m.support().into_iter().map(|x| (a.quiver().point_name(x).to_string(), m.dims()[x])).collect()
}

fn named(pairs: &[(&str, usize)]) -> Vec<(String, usize)> {
    pairs.iter().map(|(n, d)| (n.to_string(), *d)).collect()
}

fn tree() -> TruncatedAlgebra {
    algebra(
        &["1", "2", "3", "4", "5", "6", "7"],
        &[("alpha", "1", "2"), ("beta", "2", "3"), ("c", "3", "5"), ("gamma", "4", "5"), ("delta", "5", "6"), ("eps", "6", "7")],
        &[&[(1, "alpha*beta")], &[(1, "gamma*delta*eps")]],
    )
}

/// The reduced algebra of the seven-point walkthrough and the module of the
/// reduced walk.
fn seven_vertex_b() -> (TruncatedAlgebra, Representation) {
    let a = seven_vertex();
    let cert = detect_sequential_walks(&a, &DetectorConfig::default())
        .unwrap()
        .into_iter()
        .find(|c| c.full_walk.display(a.quiver()).to_string() == "a1 b1 ~b3 ~a3 a2 b2")
        .unwrap();
    let r = standard_reduction(&a, &cert).unwrap();
    let b = TruncatedAlgebra::build(&r.presented).unwrap();
    let m = string_module(&b, r.w2.as_ref().unwrap()).unwrap();
    (b, m)
}

#[test]
fn projective_dimensions_of_basic_modules() {
    // e1, a1, b1, a1 b2, b1 a2, b1 b2: only a1 a2 lies in the ideal
    let a = kronecker(&[&[(1, "a1*a2")]]);
    assert_eq!(projective(&a, 0).total_dim(), 6);
    let s = simple(&a, 1);
    assert_eq!(s.dims(), [0, 1, 0]);
    let a7 = seven_vertex();
    assert_eq!(projective(&a7, pt(&a7, "7")).total_dim(), 9);
    for x in 0..a7.num_points() {
        assert!(projective(&a7, x).satisfies_relations(&a7));
        assert!(injective(&a7, x).satisfies_relations(&a7));
        assert_eq!(projective(&a7, x).top_dims(), simple(&a7, x).dims());
        assert_eq!(injective(&a7, x).socle_dims(), simple(&a7, x).dims());
    }
}

#[test]
fn string_modules() {
    let a = a4();
    let q = a.quiver();
    let m = string_module(&a, &Walk::parse(q, "alpha").unwrap()).unwrap();
    assert_eq!(m.dims(), [1, 1, 0, 0]);
    assert!(matches!(string_module(&a, &Walk::parse(q, "alpha beta").unwrap()), Err(HomologyError::NotAString(_))));
    let k = kronecker(&[&[(1, "a1*a2")], &[(1, "b1*b2")]]);
    let back = string_module(&k, &Walk::parse(k.quiver(), "a1 ~b1 a1").unwrap()).unwrap();
    assert_eq!(back.dims(), [2, 2, 0]);
    assert!(back.is_uniserial() == false);
    assert!(matches!(string_module(&k, &Walk::parse(k.quiver(), "a1 ~a1").unwrap()), Err(HomologyError::NotReduced(_))));
}

#[test]
fn series_and_tops() {
    let (b, m) = seven_vertex_b();
    assert_eq!(dims_named(&b, &m), named(&[("1", 1), ("7", 1)]));
    assert_eq!(m.socle_series().len(), 2);
    assert_eq!(m.loewy_length(), 2);
    assert!(m.is_uniserial());
    let p7 = projective(&b, pt(&b, "7"));
    assert_eq!(p7.top().dims(), simple(&b, pt(&b, "7")).dims());
    let semi = simple(&b, 0).direct_sum(&simple(&b, 2));
    assert_eq!(semi.top_dims(), semi.dims());
    assert!(!semi.is_uniserial());
}

#[test]
fn seven_vertex_walkthrough_resolution() {
    let (b, m) = seven_vertex_b();
    let cover = projective_cover(&b, &m).unwrap();
    assert_eq!(cover.summands, [pt(&b, "7")]);
    assert_eq!(dims_named(&b, &cover.kernel), named(&[("1", 1), ("2", 1), ("3", 1)]));
    let s7 = syzygy(&b, &simple(&b, pt(&b, "7"))).unwrap();
    assert_eq!(dims_named(&b, &s7), named(&[("1", 2), ("2", 1), ("3", 1)]));
    assert_eq!(proj_dim(&b, &m, 10).unwrap(), HomDim::Finite(2));
    assert_eq!(inj_dim(&b, &m, 10).unwrap(), HomDim::Finite(2));
    assert_eq!(support_starts_top_relation(&b, &m).unwrap(), Some(pt(&b, "7")));
    let res = minimal_resolution(&b, &m, 5).unwrap();
    let at = |name: &str| pt(&b, name);
    assert_eq!(res.len(), 3);
    assert_eq!(res[1][at("2")] + res[1][at("3")], 2);
    assert_eq!(res[2][at("1")], 1);
}

#[test]
fn worked_dimensions() {
    let gentle = kronecker(&[&[(1, "a1*a2")], &[(1, "b1*b2")]]);
    let sincere = string_module(&gentle, &Walk::parse(gentle.quiver(), "a1 b2").unwrap()).unwrap();
    assert_eq!(proj_dim(&gentle, &sincere, 10).unwrap(), HomDim::Finite(2));
    assert_eq!(inj_dim(&gentle, &sincere, 10).unwrap(), HomDim::Finite(2));
    assert_eq!(support_starts_top_relation(&gentle, &sincere).unwrap(), Some(0));

    let t = tree();
    let m = string_module(&t, &Walk::parse(t.quiver(), "c ~gamma").unwrap()).unwrap();
    assert_eq!(dims_named(&t, &m), named(&[("3", 1), ("4", 1), ("5", 1)]));
    assert_eq!(proj_dim(&t, &m, 20).unwrap(), HomDim::Finite(2));
    assert_eq!(inj_dim(&t, &m, 20).unwrap(), HomDim::Finite(2));
    assert!(is_tree(&t));
    assert!(matches!(sequential_walk_from_uniserial(&t, &m), Err(HomologyError::PreconditionUnmet(_))));
}

#[test]
fn ext_and_global_dimension() {
    let a = kronecker(&[&[(1, "a1*a2")]]);
    assert_eq!(ext_simple_dims(&a, 0, 3).unwrap()[2][2], 1);
    let a7 = seven_vertex();
    let ext = ext_simple_dims(&a7, pt(&a7, "7"), 3).unwrap();
    assert_eq!(ext[0][pt(&a7, "7")], 1);
    assert_eq!(ext[2][pt(&a7, "1")], 2);
    assert_eq!(global_dimension(&a7, 20).unwrap(), HomDim::Finite(2));
    assert_eq!(global_dimension(&a4(), 20).unwrap(), HomDim::Finite(3));
    let hereditary = algebra(&["1", "2", "3"], &[("x", "1", "2"), ("y", "2", "3")], &[]);
    assert_eq!(global_dimension(&hereditary, 20).unwrap(), HomDim::Finite(1));
    let semisimple = algebra(&["1"], &[], &[]);
    assert_eq!(global_dimension(&semisimple, 20).unwrap(), HomDim::Finite(0));
}

#[test]
fn bound_exceeded_on_self_injective_loop() {
    let a = algebra(&["1"], &[("x", "1", "1")], &[&[(1, "x*x")]]);
    let s = simple(&a, 0);
    assert_eq!(proj_dim(&a, &s, 5).unwrap(), HomDim::BoundExceeded(5));
    assert!(proj_dim(&a, &s, 5).unwrap().exceeds(1));
}

#[test]
fn injective_modules_have_injective_dimension_zero() {
    for a in [a4(), seven_vertex(), tree()] {
        for x in 0..a.num_points() {
            assert_eq!(inj_dim(&a, &injective(&a, x), 20).unwrap(), HomDim::Finite(0));
            assert_eq!(proj_dim(&a, &projective(&a, x), 20).unwrap(), HomDim::Finite(0));
        }
    }
}

#[test]
fn predicates() {
    assert!(is_nakayama(&a4()));
    assert!(!is_nakayama(&kronecker(&[&[(1, "a1*a2")]])));
    assert!(is_monomial(&a4()));
    assert!(!is_monomial(&kronecker(&[&[(1, "a1*a2"), (1, "b1*b2")]])));
    assert!(!is_tree(&kronecker(&[&[(1, "a1*a2")]])));
    let a = a4();
    for x in 0..4 {
        assert!(is_uniserial(&simple(&a, x)));
    }
}

#[test]
fn uniserial_walk_construction() {
    let a = algebra(
        &["1", "2", "3", "4", "5"],
        &[("x1", "1", "2"), ("x2", "2", "3"), ("x3", "3", "4"), ("x4", "4", "5")],
        &[&[(1, "x1*x2")], &[(1, "x3*x4")]],
    );
    let s3 = simple(&a, 2);
    let cert = sequential_walk_from_uniserial(&a, &s3).unwrap();
    assert_eq!(cert.full_walk.display(a.quiver()).to_string(), "x1 x2 x3 x4");
    assert!(cert.w_prime.is_none());
    assert!(check_sequential(&a, &cert.candidate(), &DetectorConfig::default()).unwrap().is_empty());
    assert!(matches!(sequential_walk_from_uniserial(&a, &simple(&a, 0)), Err(HomologyError::PreconditionUnmet(_))));
    assert!(matches!(support_starts_top_relation(&a, &simple(&a, 4)), Err(HomologyError::PreconditionUnmet(_))));
}

#[test]
fn module_specs() {
    let a = seven_vertex();
    assert_eq!("simple:7".parse::<ModuleSpec>().unwrap(), ModuleSpec::Simple("7".into()));
    assert_eq!("string:~a1 a2".parse::<ModuleSpec>().unwrap().build(&a).unwrap().dims(), [0, 1, 1, 0, 0, 0, 1]);
    assert_eq!("proj:7".parse::<ModuleSpec>().unwrap().build(&a).unwrap().total_dim(), 9);
    assert_eq!("inj:1".parse::<ModuleSpec>().unwrap().build(&a).unwrap().total_dim(), 9);
    assert_eq!("string:4".parse::<ModuleSpec>().unwrap().build(&a).unwrap().total_dim(), 1);
    assert!("bogus:1".parse::<ModuleSpec>().is_err());
    assert!("simple:".parse::<ModuleSpec>().is_err());
    assert!(matches!("simple:9".parse::<ModuleSpec>().unwrap().build(&a), Err(HomologyError::Quiver(_))));
    let spec: ModuleSpec = "string:~a1 a2".parse().unwrap();
    assert_eq!(spec.to_string().parse::<ModuleSpec>().unwrap(), spec);
}

#[test]
fn reports() {
    let cfg = DetectorConfig::default();
    let r = shod_obstruction_report(&seven_vertex(), &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::NotShod);
    assert!(r.witnesses.iter().all(|w| w.pd.exceeds(1) && w.id.exceeds(1)));
    // middle parts crossing three of the paths 7 -> 1 have dependent segments
    assert!(r.skipped.iter().all(|s| s.reason.contains("dependent")));
    assert!(!r.skipped.is_empty());
    let w = r.witnesses.iter().find(|w| w.walk == "a1 b1 ~b3 ~a3 a2 b2").unwrap();
    assert_eq!((w.pd, w.id), (HomDim::Finite(2), HomDim::Finite(2)));
    let prime = shod_obstruction_report(&kronecker(&[&[(1, "a1*a2")]]), &cfg).unwrap();
    assert_eq!(prime.verdict, Verdict::NotShod);
    let square = shod_obstruction_report(&kronecker(&[&[(1, "a1*a2"), (1, "b1*b2")]]), &cfg).unwrap();
    assert_eq!(square.verdict, Verdict::Inconclusive);
}

