mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use silting_core::complex::{is_isomorphic, IsoOptions, PathMatrix, ProjComplex};
use silting_core::hom::hom_dim_table;
use silting_core::linalg::Field;
use silting_core::quiver::{AlgebraElement, PathAlgebra, Quiver};
use silting_core::random::{random_complex, ComplexParams};
use silting_core::recollement::{idempotent_recollement, idempotent_recollement_by_labels};
use silting_core::Error;

fn iso(x: &ProjComplex, y: &ProjComplex) -> bool {
    is_isomorphic(x, y, &IsoOptions::default()).unwrap().isomorphic
}

fn bar(rec_b: &Arc<PathAlgebra>, v: &str, shift: i32) -> ProjComplex {
    stalk(rec_b, v, shift)
}

#[test]
fn ka3_structure() {
    let a = ka3(Field::Rational);
    let rec = idempotent_recollement_by_labels(&a, &["3"]).unwrap();
    assert_eq!(rec.c.vertex_count(), 1);
    assert_eq!(rec.c.dim(), 1);
    assert_eq!(rec.b.quiver().vertices(), ["1", "2"]);
    assert_eq!(rec.b.quiver().arrows().len(), 1);
    assert_eq!(rec.b.dim(), 3);
    let names: Vec<Vec<String>> = rec
        .resolutions
        .iter()
        .map(|r| r.generators.iter().map(|&p| a.path_name(p)).collect())
        .collect();
    assert_eq!(names, [vec!["ab".to_string()], vec!["b".to_string()]]);
    assert!(iso(&rec.resolution_complex(0), &i2(&a)));
    assert!(iso(&rec.resolution_complex(1), &s2(&a)));
}

#[test]
fn invalid_subsets() {
    let a = ka3(Field::Rational);
    assert_eq!(idempotent_recollement(&a, &[0]).unwrap_err(), Error::ArrowLeavesSubset("a".into()));
    assert_eq!(idempotent_recollement(&a, &[1]).unwrap_err(), Error::ArrowLeavesSubset("b".into()));
    assert_eq!(idempotent_recollement(&a, &[]).unwrap_err(), Error::InvalidSubset);
    assert_eq!(idempotent_recollement(&a, &[0, 1, 2]).unwrap_err(), Error::InvalidSubset);
    assert!(idempotent_recollement(&a, &[1, 2]).is_ok());
}

#[test]
fn sinks_give_semisimple_c() {
    // 1 -> 3 <- 2, 1 -> 4
    let q = Quiver::new(&["1", "2", "3", "4"], &[("x", "1", "3"), ("y", "2", "3"), ("z", "1", "4")]).unwrap();
    let a = Arc::new(PathAlgebra::new(q, Field::Rational).unwrap());
    let rec = idempotent_recollement_by_labels(&a, &["3", "4"]).unwrap();
    assert_eq!(rec.c.dim(), 2);
    assert!(rec.c.quiver().arrows().is_empty());
    assert_eq!(rec.resolutions[0].generators.len(), 2);
}

#[test]
fn j_lower_shriek_and_i_upper_star() {
    let a = ka3(Field::Rational);
    let rec = idempotent_recollement_by_labels(&a, &["3"]).unwrap();
    let c_stalk = ProjComplex::stalk(rec.c.clone(), 0, 0);
    assert_eq!(rec.j_lower_shriek(&c_stalk).unwrap(), stalk(&a, "3", 0));
    assert!(rec.j_lower_shriek(&ProjComplex::zero(rec.c.clone())).unwrap().is_zero());
    assert_eq!(rec.j_lower_shriek(&stalk(&a, "3", 0)).unwrap_err(), Error::AlgebraMismatch);

    assert_eq!(rec.i_upper_star(&stalk(&a, "1", 0)).unwrap(), bar(&rec.b, "1", 0));
    assert!(rec.i_upper_star(&rec.j_lower_shriek(&c_stalk.shift(2)).unwrap()).unwrap().is_zero());
    // the P3 term dies and ab maps to zero
    let i = rec.i_upper_star(&i2(&a)).unwrap();
    assert!(iso(&i, &bar(&rec.b, "1", 0)));
    // S_1 = (P2 -a-> P1) survives unchanged
    let s1 = two_term(&a, "2", "1", &["a"]);
    assert!(iso(&rec.i_upper_star(&s1).unwrap(), &two_term(&rec.b, "2", "1", &["a"])));
}

#[test]
fn i_star_fixtures() {
    for field in [Field::Rational, Field::prime(5).unwrap()] {
        let a = ka3(field);
        let rec = idempotent_recollement_by_labels(&a, &["3"]).unwrap();
        let (p1, p2) = (bar(&rec.b, "1", 0), bar(&rec.b, "2", 0));
        assert!(iso(&rec.i_star(&p1).unwrap(), &i2(&a)));
        assert!(iso(&rec.i_star(&p2).unwrap(), &s2(&a)));
        assert!(rec.i_star(&ProjComplex::zero(rec.b.clone())).unwrap().is_zero());
        let ty = p1.shift(1).direct_sum(&p2).unwrap();
        assert!(iso(&rec.i_star(&ty).unwrap(), &i2(&a).shift(1).direct_sum(&s2(&a)).unwrap()));
        let both = p1.direct_sum(&p2).unwrap();
        assert!(iso(&rec.i_star(&both).unwrap(), &i2(&a).direct_sum(&s2(&a)).unwrap()));
        // the simple B-module at 1 is the simple A-module at 1
        let s1_bar = two_term(&rec.b, "2", "1", &["a"]);
        assert!(iso(&rec.i_star(&s1_bar).unwrap(), &two_term(&a, "2", "1", &["a"])));
        assert_eq!(rec.i_star(&stalk(&a, "1", 0)).unwrap_err(), Error::AlgebraMismatch);
    }
}

#[test]
fn i_star_on_a_longer_quiver() {
    // A_5 with S = {4, 5}: P̄_1 resolves by x1x2x3 from P4
    let a = linear(5, Field::Rational);
    let rec = idempotent_recollement_by_labels(&a, &["4", "5"]).unwrap();
    assert_eq!(rec.c.dim(), 3);
    for v in 0..3 {
        assert_eq!(rec.resolutions[v].generators.len(), 1);
        let m = rec.i_star(&ProjComplex::stalk(rec.b.clone(), v, 0)).unwrap();
        assert_eq!(m.graded_multiset(), vec![(-1, 3), (0, v)]);
    }
}

fn random_pair(seed: u64, alg: &Arc<PathAlgebra>) -> (ProjComplex, ProjComplex) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = ComplexParams::default();
    (random_complex(&mut rng, alg, &p), random_complex(&mut rng, alg, &p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn j_lower_shriek_is_fully_faithful(seed in any::<u64>()) {
        let a = linear(4, Field::Rational);
        let rec = idempotent_recollement_by_labels(&a, &["3", "4"]).unwrap();
        let (x, y) = random_pair(seed, &rec.c);
        let (jx, jy) = (rec.j_lower_shriek(&x).unwrap(), rec.j_lower_shriek(&y).unwrap());
        prop_assert_eq!(hom_dim_table(&x, &y, Some((-3, 3))).unwrap(), hom_dim_table(&jx, &jy, Some((-3, 3))).unwrap());
    }

    #[test]
    fn i_star_is_fully_faithful(seed in any::<u64>()) {
        let a = linear(4, Field::Rational);
        let rec = idempotent_recollement_by_labels(&a, &["4"]).unwrap();
        let (x, y) = random_pair(seed, &rec.b);
        let (ix, iy) = (rec.i_star(&x).unwrap(), rec.i_star(&y).unwrap());
        prop_assert_eq!(hom_dim_table(&x, &y, Some((-3, 3))).unwrap(), hom_dim_table(&ix, &iy, Some((-3, 3))).unwrap());
    }

    #[test]
    fn i_upper_star_kills_add_ea(seed in any::<u64>()) {
        let a = linear(4, Field::Rational);
        let rec = idempotent_recollement_by_labels(&a, &["3", "4"]).unwrap();
        let (x, _) = random_pair(seed, &rec.c);
        prop_assert!(rec.i_upper_star(&rec.j_lower_shriek(&x).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn differential_entries_transport() {
    // over A_4 with S = {4}: (P̄2 -x1-> P̄1) goes to the cone of the resolutions
    let a = linear(4, Field::Rational);
    let rec = idempotent_recollement_by_labels(&a, &["4"]).unwrap();
    let b = &rec.b;
    let mut d = PathMatrix::zero(&[0], &[1]);
    d.set(0, 0, AlgebraElement::basis(b.path_by_names(&["x1"]).unwrap(), b.field().one()));
    let y = ProjComplex::new(
        b.clone(),
        [(-1, vec![1]), (0, vec![0])].into(),
        [(-1, d)].into(),
    )
    .unwrap();
    // the B-module S_1 is again simple over A
    assert!(iso(&rec.i_star(&y).unwrap(), &two_term(&a, "2", "1", &["x1"])));
    assert_eq!(rec.i_star_unminimized(&y).unwrap().size(), 4);
}
