#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;
use std::sync::Arc;

use silting_core::complex::{PathMatrix, ProjComplex};
use silting_core::linalg::Field;
use silting_core::quiver::{AlgebraElement, PathAlgebra, Quiver};

pub fn ka3(field: Field) -> Arc<PathAlgebra> {
    let q = Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
    Arc::new(PathAlgebra::new(q, field).unwrap())
}

/// Vertex index of label `v`.
pub fn vx(alg: &PathAlgebra, v: &str) -> usize {
    alg.quiver().vertex_index(v).unwrap()
}

/// The path with the given arrow names, or the trivial path at `v` if empty.
pub fn path(alg: &PathAlgebra, names: &[&str]) -> AlgebraElement {
    let i = alg.path_by_names(names).unwrap();
    AlgebraElement::basis(i, alg.field().one())
}

/// `P_v` in degree `-shift`.
pub fn stalk(alg: &Arc<PathAlgebra>, v: &str, shift: i32) -> ProjComplex {
    ProjComplex::stalk(alg.clone(), vx(alg, v), 0).shift(shift)
}

/// `P_from --path--> P_to` in degrees `-1, 0`.
pub fn two_term(alg: &Arc<PathAlgebra>, from: &str, to: &str, names: &[&str]) -> ProjComplex {
    let (s, t) = (vx(alg, from), vx(alg, to));
    let mut d = PathMatrix::zero(&[t], &[s]);
    let e = if names.is_empty() {
        AlgebraElement::basis(alg.idempotent_index(s), alg.field().one())
    } else {
        path(alg, names)
    };
    d.set(0, 0, e);
    ProjComplex::new(
        alg.clone(),
        BTreeMap::from([(-1, vec![s]), (0, vec![t])]),
        BTreeMap::from([(-1, d)]),
    )
    .unwrap()
}

/// `I_2 = (P3 -ab-> P1)` over KA₃.
pub fn i2(alg: &Arc<PathAlgebra>) -> ProjComplex {
    two_term(alg, "3", "1", &["a", "b"])
}

/// `S_2 = (P3 -b-> P2)` over KA₃.
pub fn s2(alg: &Arc<PathAlgebra>) -> ProjComplex {
    two_term(alg, "3", "2", &["b"])
}

/// Linear `A_n`: `1 -> 2 -> ... -> n`.
pub fn linear(n: usize, field: Field) -> Arc<PathAlgebra> {
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows: Vec<(String, String, String)> = (1..n)
        .map(|i| (format!("x{i}"), labels[i - 1].clone(), labels[i].clone()))
        .collect();
    let q = Quiver::new(&labels, &arrows).unwrap();
    Arc::new(PathAlgebra::new(q, field).unwrap())
}
