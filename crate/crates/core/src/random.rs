//! Seeded generators of quivers and complexes, used by the probes in the
//! command line tool and by the randomized test suites.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::complex::{cone, ChainMap, PathMatrix, ProjComplex};
use crate::hom::hom_basis;
use crate::linalg::{Field, Scalar};
use crate::quiver::{Arrow, AlgebraElement, PathAlgebra, Quiver};

/// Uniform integer in `[lo, hi]`.
pub fn uniform_i64<R: RngCore + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> i64 {
    assert!(lo <= hi);
    let span = (hi - lo) as u64 + 1;
    lo + (rng.next_u64() % span) as i64
}

/// Uniform index in `0..n`.
pub fn uniform_index<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> usize {
    assert!(n > 0);
    (rng.next_u64() % n as u64) as usize
}

fn coin<R: RngCore + ?Sized>(rng: &mut R, num: u64, den: u64) -> bool {
    rng.next_u64() % den < num
}

fn arrow_name(k: usize) -> String {
    if k < 26 {
        char::from(b'a' + k as u8).to_string()
    } else {
        format!("x{k}")
    }
}

/// An acyclic quiver on vertices `1..=n` with arrows `i → j` only for `i < j`.
///
/// Each pair `i < j` receives an arrow with probability `density` percent
/// (at most `max_parallel` parallel copies); a spanning path of consecutive
/// vertices is added first when `connected` is set.
pub fn random_quiver<R: RngCore + ?Sized>(
    rng: &mut R,
    n: usize,
    density: u64,
    max_parallel: usize,
    connected: bool,
) -> Quiver {
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    let push = |s: usize, t: usize, arrows: &mut Vec<Arrow>| {
        let k = arrows.len();
        arrows.push(Arrow {
            name: arrow_name(k),
            source: s,
            target: t,
        });
    };
    for i in 0..n {
        for j in i + 1..n {
            let base = usize::from(connected && j == i + 1);
            let mut count = base;
            if coin(rng, density, 100) {
                count += 1 + uniform_index(rng, max_parallel.max(1));
            }
            for _ in 0..count.min(max_parallel.max(base)) {
                push(i, j, &mut arrows);
            }
        }
    }
    Quiver::from_indices(vertices, arrows).expect("arrows only go up, so the quiver is acyclic")
}

/// Random element of `e_w A e_v` with integer coefficients in `[-bound, bound]`.
pub fn random_element<R: RngCore + ?Sized>(rng: &mut R, alg: &PathAlgebra, w: usize, v: usize, bound: i64) -> AlgebraElement {
    let field = alg.field();
    let mut e = AlgebraElement::zero();
    for &p in alg.paths(w, v) {
        let c = field.from_i64(uniform_i64(rng, -bound, bound));
        e.add_term(p, c);
    }
    e
}

#[derive(Clone, Copy, Debug)]
pub struct ComplexParams {
    /// number of two-term building blocks
    pub blocks: usize,
    /// maximal number of summands in the target of a block
    pub width: usize,
    /// shifts are drawn from `[-spread, spread]`
    pub spread: i32,
    /// percent chance of gluing the running complex with a random cone
    pub cone_chance: u64,
    pub bound: i64,
}

impl Default for ComplexParams {
    fn default() -> Self {
        ComplexParams {
            blocks: 2,
            width: 2,
            spread: 1,
            cone_chance: 50,
            bound: 2,
        }
    }
}

/// A two-term complex `P_v → ⊕ P_w` in degrees `-1, 0` with random entries,
/// or a stalk when `P_v` has no radical maps out.
pub fn random_two_term<R: RngCore + ?Sized>(rng: &mut R, alg: &Arc<PathAlgebra>, width: usize, bound: i64) -> ProjComplex {
    let n = alg.vertex_count();
    let v = uniform_index(rng, n);
    // Hom(P_v, P_w) = e_w A e_v is spanned by paths w ~> v
    let targets: Vec<usize> = (0..n).filter(|&w| w != v && !alg.paths(w, v).is_empty()).collect();
    if targets.is_empty() || width == 0 {
        return ProjComplex::stalk(alg.clone(), v, 0);
    }
    let k = 1 + uniform_index(rng, width);
    let objs: Vec<usize> = (0..k).map(|_| targets[uniform_index(rng, targets.len())]).collect();
    let mut d = PathMatrix::zero(&objs, &[v]);
    for (i, &w) in objs.iter().enumerate() {
        let mut e = random_element(rng, alg, w, v, bound);
        if e.is_zero() {
            e = AlgebraElement::basis(alg.paths(w, v)[0], alg.field().one());
        }
        d.set(i, 0, e);
    }
    let comps = BTreeMap::from([(-1, vec![v]), (0, objs)]);
    let diffs = BTreeMap::from([(-1, d)]);
    ProjComplex::new(alg.clone(), comps, diffs).expect("two-term complexes are complexes")
}

/// A random bounded complex: shifted two-term blocks, summed, with random
/// cones of chain maps between the pieces.
pub fn random_complex<R: RngCore + ?Sized>(rng: &mut R, alg: &Arc<PathAlgebra>, params: &ComplexParams) -> ProjComplex {
    let shift = |rng: &mut R| uniform_i64(rng, -i64::from(params.spread), i64::from(params.spread)) as i32;
    let mut x = random_two_term(rng, alg, params.width, params.bound);
    let s = shift(rng);
    x = x.shift(s);
    for _ in 1..params.blocks.max(1) {
        let s = shift(rng);
        let y = random_two_term(rng, alg, params.width, params.bound).shift(s);
        if coin(rng, params.cone_chance, 100) {
            if let Some(f) = random_chain_map(rng, &x, &y, params.bound) {
                x = cone(&f).expect("same algebra").z;
                continue;
            }
        }
        x = x.direct_sum(&y).expect("same algebra");
    }
    x
}

/// A random nonzero-in-`K^b` chain map `X → Y`, if `Hom(X, Y) ≠ 0`.
pub fn random_chain_map<R: RngCore + ?Sized>(rng: &mut R, x: &ProjComplex, y: &ProjComplex, bound: i64) -> Option<ChainMap> {
    let basis = hom_basis(x, y, 0).ok()?;
    if basis.dim() == 0 {
        return None;
    }
    let field = x.algebra().field();
    loop {
        let coeffs: Vec<Scalar> = (0..basis.dim()).map(|_| field.from_i64(uniform_i64(rng, -bound, bound))).collect();
        if coeffs.iter().any(|c| !c.is_zero()) {
            return Some(basis.combination(&coeffs));
        }
    }
}

/// Convenience: a random algebra over `field` on `n` vertices.
pub fn random_algebra<R: RngCore + ?Sized>(rng: &mut R, n: usize, density: u64, field: Field) -> Arc<PathAlgebra> {
    let q = random_quiver(rng, n, density, 2, true);
    Arc::new(PathAlgebra::new(q, field).expect("acyclic"))
}
