//! Finite acyclic quivers and their path algebras.
//!
//! Paths compose left to right: for arrows `a: 1 → 2` and `b: 2 → 3` the
//! product `a·b` is the path `ab: 1 → 3`. Right modules are used throughout,
//! with `P_v = e_v A`, so `Hom(P_v, P_w) = e_w A e_v` is spanned by the paths
//! from `w` to `v`, acting by left multiplication.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverError {
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("cycle detected through arrows {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("arrows do not compose into a path: {}", .0.join(","))]
    NotComposable(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver; vertex and arrow order is significant and fixes all
/// downstream orderings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from labels and `(name, from, to)` triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self, QuiverError> {
        let mut labels: Vec<String> = Vec::with_capacity(vertices.len());
        for v in vertices {
            let v = v.as_ref();
            if labels.iter().any(|l| l == v) {
                return Err(QuiverError::DuplicateVertex(v.to_string()));
            }
            labels.push(v.to_string());
        }
        let find = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| QuiverError::UnknownVertex(l.to_string()))
        };
        let mut out: Vec<Arrow> = Vec::with_capacity(arrows.len());
        for (name, from, to) in arrows {
            let name = name.as_ref();
            if out.iter().any(|a| a.name == name) {
                return Err(QuiverError::DuplicateArrow(name.to_string()));
            }
            out.push(Arrow {
                name: name.to_string(),
                source: find(from.as_ref())?,
                target: find(to.as_ref())?,
            });
        }
        Ok(Quiver {
            vertices: labels,
            arrows: out,
        })
    }

    /// Index-based constructor used for generated quivers.
    pub fn from_indices(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let triples: Vec<(String, String, String)> = arrows
            .iter()
            .map(|a| {
                let lbl = |i: usize| {
                    vertices
                        .get(i)
                        .cloned()
                        .ok_or_else(|| QuiverError::UnknownVertex(i.to_string()))
                };
                Ok((a.name.clone(), lbl(a.source)?, lbl(a.target)?))
            })
            .collect::<Result<_, QuiverError>>()?;
        Quiver::new(&vertices, &triples)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Topological order of the vertices, or the arrows of some directed cycle.
    pub fn topological_order(&self) -> Result<Vec<usize>, QuiverError> {
        let n = self.vertices.len();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        let mut order = Vec::with_capacity(n);
        let mut via: Vec<Option<usize>> = vec![None; n];
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            state[start] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                let outgoing: Vec<usize> = (0..self.arrows.len()).filter(|&i| self.arrows[i].source == v).collect();
                if *next < outgoing.len() {
                    let ai = outgoing[*next];
                    *next += 1;
                    let w = self.arrows[ai].target;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            via[w] = Some(ai);
                            stack.push((w, 0));
                        }
                        1 => {
                            let mut cycle = vec![self.arrows[ai].name.clone()];
                            let mut cur = v;
                            while cur != w {
                                let a = via[cur].expect("stack vertex has an entering arrow");
                                cycle.push(self.arrows[a].name.clone());
                                cur = self.arrows[a].source;
                            }
                            cycle.reverse();
                            return Err(QuiverError::Cycle(cycle));
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    order.push(v);
                    stack.pop();
                }
            }
        }
        order.reverse();
        Ok(order)
    }

    /// Quiver with every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    name: a.name.clone(),
                    source: a.target,
                    target: a.source,
                })
                .collect(),
        }
    }

    /// Full subquiver on `keep` (given as vertex indices, kept in quiver order),
    /// with the index maps back into `self` for vertices and arrows.
    pub fn full_subquiver(&self, keep: &[usize]) -> (Quiver, Vec<usize>, Vec<usize>) {
        let mut verts: Vec<usize> = keep.to_vec();
        verts.sort_unstable();
        verts.dedup();
        let pos = |v: usize| verts.iter().position(|&x| x == v);
        let mut arrows = Vec::new();
        let mut arrow_map = Vec::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if let (Some(s), Some(t)) = (pos(a.source), pos(a.target)) {
                arrows.push(Arrow {
                    name: a.name.clone(),
                    source: s,
                    target: t,
                });
                arrow_map.push(i);
            }
        }
        let q = Quiver {
            vertices: verts.iter().map(|&v| self.vertices[v].clone()).collect(),
            arrows,
        };
        (q, verts, arrow_map)
    }
}

/// A path of the quiver; the empty arrow list is the trivial path `e_source`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// Finite linear combination of basis paths, keyed by basis index.
///
/// Elements stored inside path matrices always lie in a single `e_w A e_v`;
/// zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<usize, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn basis(index: usize, coeff: Scalar) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(index, coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, index: usize) -> Option<&Scalar> {
        self.terms.get(&index)
    }

    pub fn add_term(&mut self, index: usize, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&index) {
            Some(c) => {
                let s = &*c + &coeff;
                if s.is_zero() {
                    self.terms.remove(&index);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(index, coeff);
            }
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Scalar) -> AlgebraElement {
        if k.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(&i, c)| (i, c * k)).collect(),
        }
    }

    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(&i, c)| (i, -c)).collect(),
        }
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Path algebra `KQ` of a finite acyclic quiver.
#[derive(Debug, Clone)]
pub struct PathAlgebra {
    quiver: Quiver,
    field: Field,
    basis: Vec<Path>,
    lookup: BTreeMap<(usize, Vec<usize>), usize>,
    /// `products[i * dim + j]` is the basis index of `basis[i]·basis[j]`.
    products: Vec<Option<u32>>,
    /// `between[w][v]` lists the basis paths from `w` to `v`.
    between: Vec<Vec<Vec<usize>>>,
}

impl PartialEq for PathAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.quiver == other.quiver
    }
}

impl Eq for PathAlgebra {}

impl PathAlgebra {
    /// Enumerates the path basis (by length, then arrow indices) and the
    /// multiplication table. Fails on a directed cycle.
    pub fn new(quiver: Quiver, field: Field) -> Result<Self, QuiverError> {
        quiver.topological_order()?;
        let n = quiver.vertex_count();
        let mut basis: Vec<Path> = (0..n)
            .map(|v| Path {
                source: v,
                target: v,
                arrows: Vec::new(),
            })
            .collect();
        let mut layer: Vec<Path> = basis.clone();
        while !layer.is_empty() {
            let mut next: Vec<Path> = Vec::new();
            for p in &layer {
                for (ai, a) in quiver.arrows.iter().enumerate() {
                    if a.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        next.push(Path {
                            source: p.source,
                            target: a.target,
                            arrows,
                        });
                    }
                }
            }
            next.sort_by(|x, y| x.arrows.cmp(&y.arrows));
            basis.extend(next.iter().cloned());
            layer = next;
        }
        let lookup: BTreeMap<(usize, Vec<usize>), usize> = basis
            .iter()
            .enumerate()
            .map(|(i, p)| ((p.source, p.arrows.clone()), i))
            .collect();
        let dim = basis.len();
        let mut products = vec![None; dim * dim];
        for (i, p) in basis.iter().enumerate() {
            for (j, q) in basis.iter().enumerate() {
                if p.target != q.source {
                    continue;
                }
                let mut arrows = p.arrows.clone();
                arrows.extend_from_slice(&q.arrows);
                products[i * dim + j] = Some(lookup[&(p.source, arrows)] as u32);
            }
        }
        let mut between = vec![vec![Vec::new(); n]; n];
        for (i, p) in basis.iter().enumerate() {
            between[p.source][p.target].push(i);
        }
        Ok(PathAlgebra {
            quiver,
            field,
            basis,
            lookup,
            products,
            between,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn path(&self, index: usize) -> &Path {
        &self.basis[index]
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.quiver.vertices[v]
    }

    /// Basis index of the trivial path `e_v`.
    pub fn idempotent_index(&self, v: usize) -> usize {
        v
    }

    pub fn idempotent(&self, v: usize) -> AlgebraElement {
        AlgebraElement::basis(v, self.field.one())
    }

    /// Basis index of the path with the given source and arrow sequence.
    pub fn path_index(&self, source: usize, arrows: &[usize]) -> Option<usize> {
        self.lookup.get(&(source, arrows.to_vec())).copied()
    }

    /// Resolves a list of arrow names into a basis path.
    pub fn path_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<usize, QuiverError> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| {
                self.quiver
                    .arrow_index(n.as_ref())
                    .ok_or_else(|| QuiverError::UnknownArrow(n.as_ref().to_string()))
            })
            .collect::<Result<_, _>>()?;
        let Some(first) = idx.first() else {
            return Err(QuiverError::NotComposable(Vec::new()));
        };
        let src = self.quiver.arrows[*first].source;
        self.path_index(src, &idx).ok_or_else(|| {
            QuiverError::NotComposable(names.iter().map(|n| n.as_ref().to_string()).collect())
        })
    }

    /// Basis paths from `from` to `to`, i.e. a basis of `e_from A e_to`.
    pub fn paths(&self, from: usize, to: usize) -> &[usize] {
        &self.between[from][to]
    }

    /// Basis of `Hom(P_v, P_w) = e_w A e_v`: the paths from `w` to `v`.
    pub fn hom_proj_basis(&self, v: usize, w: usize) -> &[usize] {
        self.paths(w, v)
    }

    /// Dimension of `P_v = e_v A` (paths starting at `v`).
    pub fn projective_dim(&self, v: usize) -> usize {
        self.between[v].iter().map(Vec::len).sum()
    }

    /// Product of two basis paths, if they compose.
    pub fn basis_product(&self, i: usize, j: usize) -> Option<usize> {
        self.products[i * self.basis.len() + j].map(|k| k as usize)
    }

    /// Bilinear extension of path concatenation.
    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                if let Some(k) = self.basis_product(i, j) {
                    out.add_term(k, a * b);
                }
            }
        }
        out
    }

    /// Whether every term of `x` is a path from `w` to `v`.
    pub fn lies_in(&self, x: &AlgebraElement, w: usize, v: usize) -> bool {
        x.terms().all(|(i, _)| {
            let p = &self.basis[i];
            p.source == w && p.target == v
        })
    }

    /// Coefficient of `e_v` in `x`.
    pub fn trivial_coefficient(&self, x: &AlgebraElement, v: usize) -> Scalar {
        x.coefficient(v).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Path algebra of the opposite quiver; basis index maps are returned by
    /// [`PathAlgebra::opposite_path`].
    pub fn opposite(&self) -> PathAlgebra {
        PathAlgebra::new(self.quiver.opposite(), self.field).expect("opposite of an acyclic quiver is acyclic")
    }

    /// Index in `op` of the reverse of basis path `i`.
    pub fn opposite_path(&self, op: &PathAlgebra, i: usize) -> usize {
        let p = &self.basis[i];
        let rev: Vec<usize> = p.arrows.iter().rev().copied().collect();
        op.path_index(p.target, &rev).expect("reversed path exists in the opposite quiver")
    }

    /// Human readable name of a basis path: `e3`, `ab`, or `a*b` for multi-letter names.
    pub fn path_name(&self, i: usize) -> String {
        let p = &self.basis[i];
        if p.arrows.is_empty() {
            return alloc::format!("e{}", self.quiver.vertices[p.source]);
        }
        let names: Vec<&str> = p.arrows.iter().map(|&a| self.quiver.arrows[a].name.as_str()).collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join("*")
        }
    }

    pub fn element_name(&self, x: &AlgebraElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (i, c)) in x.terms().enumerate() {
            let name = self.path_name(i);
            let neg = matches!(c.as_rational(), Some(r) if r.is_negative());
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let abs = if neg { -c } else { c.clone() };
            if !abs.is_one() {
                out.push_str(&abs.to_string());
            }
            out.push_str(&name);
        }
        out
    }
}
