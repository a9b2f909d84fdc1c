mod common;

use std::sync::Arc;

use common::*;
use silting_core::complex::{is_isomorphic, IsoOptions, ProjComplex};
use silting_core::glue::{
    add_equivalent, check_co_aisle_agreement, check_generation, check_presilting, check_star_condition, glue, glue_shortcut,
    lattice_rank, same_decomposition, GenerationOutcome, GlueOptions,
};
use silting_core::linalg::Field;
use silting_core::quiver::PathAlgebra;
use silting_core::recollement::{idempotent_recollement_by_labels, IdempotentRecollement};
use silting_core::Error;

fn iso(x: &ProjComplex, y: &ProjComplex) -> bool {
    is_isomorphic(x, y, &IsoOptions::default()).unwrap().isomorphic
}

fn setup(field: Field) -> (Arc<PathAlgebra>, IdempotentRecollement) {
    let a = ka3(field);
    let rec = idempotent_recollement_by_labels(&a, &["3"]).unwrap();
    (a, rec)
}

fn c_canonical(rec: &IdempotentRecollement) -> Vec<ProjComplex> {
    vec![ProjComplex::stalk(rec.c.clone(), 0, 0)]
}

fn paper_t_b(rec: &IdempotentRecollement) -> Vec<ProjComplex> {
    vec![stalk(&rec.b, "1", 1).direct_sum(&stalk(&rec.b, "2", 0)).unwrap()]
}

#[test]
fn ka3_example() {
    for field in [Field::Rational, Field::prime(5).unwrap()] {
        let (a, rec) = setup(field);
        let cert = glue(&rec, &c_canonical(&rec), &paper_t_b(&rec), &GlueOptions::default()).unwrap();
        assert_eq!(cert.describe(), "P1[1] ⊕ P2 ⊕ P3");
        assert!(cert.decomposition.iter().all(|(_, m)| *m == 1));
        let p = &cert.pieces[0];
        assert!(iso(&p.m, &i2(&a).shift(1).direct_sum(&s2(&a)).unwrap()));
        assert!(iso(&p.t_tilde, &stalk(&a, "1", 1).direct_sum(&stalk(&a, "2", 0)).unwrap()));
        assert!(iso(&p.u_shifted, &stalk(&a, "3", 2).direct_sum(&stalk(&a, "3", 1)).unwrap()));
        p.to_m.check().unwrap();
        assert_eq!(p.to_m.target(), &p.m);
        assert!(cert.star.passed());
        assert!(cert.presilting.passed());
        assert!(cert.generation.generated());
        assert!(cert.generation.k0.unimodular);
        assert!(cert.co_aisle.passed());
        assert!(cert.passed());
    }
}

#[test]
fn canonical_inputs_glue_to_a() {
    let (a, rec) = setup(Field::Rational);
    let t_b = vec![ProjComplex::stalk_sum(rec.b.clone(), &[0, 1], 0)];
    let cert = glue(&rec, &c_canonical(&rec), &t_b, &GlueOptions::default()).unwrap();
    let canonical: Vec<ProjComplex> = ["1", "2", "3"].iter().map(|v| stalk(&a, v, 0)).collect();
    assert!(add_equivalent(&cert.t, &canonical).unwrap());
    assert_eq!(cert.generation.outcome, GenerationOutcome::Generated { depth: 0, found: vec![1, 2, 0] });
}

#[test]
fn empty_t_b_is_partial() {
    let (a, rec) = setup(Field::Rational);
    let cert = glue(&rec, &c_canonical(&rec), &[], &GlueOptions::default()).unwrap();
    assert_eq!(cert.t, vec![stalk(&a, "3", 0)]);
    assert!(cert.presilting.passed());
    assert!(cert.star.passed());
    assert_eq!(cert.generation.outcome, GenerationOutcome::NotGenerated);
    let short = glue_shortcut(&rec, &[], &GlueOptions::default()).unwrap();
    assert_eq!(short.t, cert.t);
}

#[test]
fn shortcut_agrees() {
    let (_, rec) = setup(Field::Rational);
    let t_b = paper_t_b(&rec);
    let full = glue(&rec, &c_canonical(&rec), &t_b, &GlueOptions::default()).unwrap();
    let short = glue_shortcut(&rec, &t_b, &GlueOptions::default()).unwrap();
    assert_eq!(short.describe(), "P1[1] ⊕ P2 ⊕ P3");
    assert!(same_decomposition(&full.t, &short.t).unwrap());
    assert!(short.passed());
}

#[test]
fn shortcut_split_of_s2() {
    let (a, rec) = setup(Field::Rational);
    let short = glue_shortcut(&rec, &[stalk(&rec.b, "2", 0)], &GlueOptions::default()).unwrap();
    let p = &short.pieces[0];
    assert!(iso(&p.m, &s2(&a)));
    assert_eq!(p.t_tilde, stalk(&a, "2", 0));
    assert_eq!(p.u_shifted, stalk(&a, "3", 1));
    p.to_u.check().unwrap();
}

#[test]
fn shortcut_rejects_positive_degrees() {
    let (_, rec) = setup(Field::Rational);
    let err = glue_shortcut(&rec, &[stalk(&rec.b, "1", -1)], &GlueOptions::default()).unwrap_err();
    assert!(matches!(err, Error::ShortcutInapplicable(_)));
}

#[test]
fn inputs_must_be_nonpositive() {
    let (_, rec) = setup(Field::Rational);
    let t_b = vec![stalk(&rec.b, "1", -1), stalk(&rec.b, "2", 0)];
    let err = glue(&rec, &c_canonical(&rec), &t_b, &GlueOptions::default()).unwrap_err();
    assert_eq!(err, Error::NotNonPositive("T_B"));
}

#[test]
fn corrupted_certificate_fails_star() {
    let (a, rec) = setup(Field::Rational);
    let mut cert = glue(&rec, &c_canonical(&rec), &paper_t_b(&rec), &GlueOptions::default()).unwrap();
    assert!(check_star_condition(&cert).unwrap().passed());
    let p = &mut cert.pieces[0];
    p.t_tilde = p.m.clone();
    p.u_shifted = ProjComplex::zero(a.clone());
    p.layers.clear();
    let report = check_star_condition(&cert).unwrap();
    // Hom(I2[1], P3[2]) ≠ 0
    assert_eq!(report.orthogonality_witness, Some((0, 0, 1)));
    assert_eq!(report.trace_failure, None);
}

#[test]
fn generation_examples() {
    let a = ka3(Field::Rational);
    let canonical: Vec<ProjComplex> = ["1", "2", "3"].iter().map(|v| stalk(&a, v, 0)).collect();
    assert!(matches!(check_generation(&canonical, 3).unwrap().outcome, GenerationOutcome::Generated { depth: 0, .. }));
    let shifted = vec![stalk(&a, "1", 1), stalk(&a, "2", 0), stalk(&a, "3", 0)];
    assert!(matches!(check_generation(&shifted, 3).unwrap().outcome, GenerationOutcome::Generated { depth: 0, .. }));
    let lone = check_generation(&[stalk(&a, "1", 0)], 3).unwrap();
    assert_eq!(lone.outcome, GenerationOutcome::NotGenerated);
    assert_eq!(lone.k0.rank, 1);

    // P3[1] is the cone of P2 -> S2
    let t = vec![stalk(&a, "1", 0), stalk(&a, "2", 0), s2(&a)];
    let r = check_generation(&t, 3).unwrap();
    assert!(matches!(r.outcome, GenerationOutcome::Generated { depth: 1, .. }));
    assert!(!r.steps.is_empty());
    // with depth 0 the search stops short
    assert_eq!(check_generation(&t, 0).unwrap().outcome, GenerationOutcome::Inconclusive);
}

#[test]
fn lattice_screen() {
    assert_eq!(lattice_rank(&[vec![1, 0], vec![0, 1]], 2), (2, true));
    assert_eq!(lattice_rank(&[vec![2, 0], vec![0, 1]], 2), (2, false));
    assert_eq!(lattice_rank(&[vec![2, 0], vec![3, 0], vec![0, -1]], 2), (2, true));
    assert_eq!(lattice_rank(&[vec![1, 1]], 2), (1, false));
    assert_eq!(lattice_rank(&[vec![2, 4], vec![3, 7]], 2), (2, false));
    assert_eq!(lattice_rank(&[vec![2, 3], vec![3, 5]], 2), (2, true));
}

#[test]
fn simples_are_not_presilting() {
    let a = ka3(Field::Rational);
    let s1 = two_term(&a, "2", "1", &["a"]);
    let report = check_presilting(&[s1, s2(&a)]).unwrap();
    let w = report.witness.expect("Hom(S_i, S_j[1]) ≠ 0 for an arrow");
    assert_eq!(w.shift, 1);
}

#[test]
fn co_aisle_probes() {
    let (a, rec) = setup(Field::Rational);
    let cert = glue(&rec, &c_canonical(&rec), &paper_t_b(&rec), &GlueOptions::default()).unwrap();
    let probes: Vec<ProjComplex> = ["1", "2", "3"].iter().map(|v| stalk(&a, v, 0)).collect();
    assert!(check_co_aisle_agreement(&cert, &probes).unwrap().passed());
    let r = check_co_aisle_agreement(&cert, &cert.t).unwrap();
    assert!(r.probes.iter().all(|p| p.left && p.right));
    // Hom(I2[1], P3[2]) ≠ 0 on both sides
    let m = cert.pieces[0].m.clone();
    let r = check_co_aisle_agreement(&cert, &[m]).unwrap();
    assert!(r.passed());
    assert!(!r.probes[0].left);
}

#[test]
fn deterministic() {
    let (_, rec) = setup(Field::Rational);
    let one = glue(&rec, &c_canonical(&rec), &paper_t_b(&rec), &GlueOptions::default()).unwrap();
    let two = glue(&rec, &c_canonical(&rec), &paper_t_b(&rec), &GlueOptions::default()).unwrap();
    assert_eq!(one.t, two.t);
    assert_eq!(one.generation.steps, two.generation.steps);
    assert_eq!(format!("{:?}", one.pieces), format!("{:?}", two.pieces));
}
