//! The recollement `D(A/AeA) ⇄ D(A) ⇄ D(eAe)` of an idempotent
//! `e = Σ_{v∈S} e_v` with `eA(1-e) = 0`, and the functors `j_!`, `i_*`, `i^*`
//! on complexes of projectives.
//!
//! `eAe` is the path algebra of the full subquiver on `S` and `A/AeA` the one
//! on the complement: no path leaves `S`, so every path between complement
//! vertices avoids `S`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::complex::{cone, minimize, ChainMap, PathMatrix, ProjComplex};
use crate::quiver::{AlgebraElement, PathAlgebra};
use crate::{Error, Result};

/// The two-term resolution `0 → ⊕_p P_{t(p)} → P_v → P̄_v → 0` of a
/// projective `A/AeA`-module, `p` running over the paths from `v` into `S`
/// whose earlier vertices lie outside `S`.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// vertex of `A`
    pub vertex: usize,
    /// basis indices in `A` of the generating paths
    pub generators: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct IdempotentRecollement {
    pub algebra: Arc<PathAlgebra>,
    /// `S`, sorted
    pub subset: Vec<usize>,
    /// `eAe`
    pub c: Arc<PathAlgebra>,
    /// `A/AeA`
    pub b: Arc<PathAlgebra>,
    c_vertices: Vec<usize>,
    c_arrows: Vec<usize>,
    b_vertices: Vec<usize>,
    b_arrows: Vec<usize>,
    /// indexed by vertex of `B`
    pub resolutions: Vec<Resolution>,
}

/// Builds the recollement for the vertex subset `subset` of `A`.
pub fn idempotent_recollement(alg: &Arc<PathAlgebra>, subset: &[usize]) -> Result<IdempotentRecollement> {
    let q = alg.quiver();
    let n = q.vertex_count();
    let mut s: Vec<usize> = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.is_empty() || s.len() == n || s.iter().any(|&v| v >= n) {
        return Err(Error::InvalidSubset);
    }
    let in_s = |v: usize| s.binary_search(&v).is_ok();
    if let Some(a) = q.arrows().iter().find(|a| in_s(a.source) && !in_s(a.target)) {
        return Err(Error::ArrowLeavesSubset(a.name.clone()));
    }
    let comp: Vec<usize> = (0..n).filter(|&v| !in_s(v)).collect();
    let (cq, c_vertices, c_arrows) = q.full_subquiver(&s);
    let (bq, b_vertices, b_arrows) = q.full_subquiver(&comp);
    let c = Arc::new(PathAlgebra::new(cq, alg.field())?);
    let b = Arc::new(PathAlgebra::new(bq, alg.field())?);

    let mut resolutions = Vec::new();
    for &v in &b_vertices {
        let generators: Vec<usize> = (0..alg.dim())
            .filter(|&i| {
                let p = alg.path(i);
                p.source == v && in_s(p.target) && p.arrows[..p.arrows.len() - 1].iter().all(|&a| !in_s(q.arrows()[a].target))
            })
            .collect();
        // exactness: the generators span e_v A e A freely
        let covered: usize = generators.iter().map(|&p| alg.projective_dim(alg.path(p).target)).sum();
        let expected = (0..alg.dim())
            .filter(|&i| alg.path(i).source == v && in_s(alg.path(i).target))
            .count();
        if covered != expected {
            return Err(Error::Internal(alloc::format!(
                "resolution of vertex {} is not exact ({covered} vs {expected})",
                alg.vertex_label(v)
            )));
        }
        resolutions.push(Resolution { vertex: v, generators });
    }
    Ok(IdempotentRecollement {
        algebra: alg.clone(),
        subset: s,
        c,
        b,
        c_vertices,
        c_arrows,
        b_vertices,
        b_arrows,
        resolutions,
    })
}

/// Builds the recollement from vertex labels.
pub fn idempotent_recollement_by_labels<S: AsRef<str>>(alg: &Arc<PathAlgebra>, labels: &[S]) -> Result<IdempotentRecollement> {
    let subset = labels
        .iter()
        .map(|l| {
            alg.quiver()
                .vertex_index(l.as_ref())
                .ok_or_else(|| Error::VertexOutsideSubset(l.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    idempotent_recollement(alg, &subset)
}

fn transport(from: &PathAlgebra, to: &PathAlgebra, vertices: &[usize], arrows: &[usize], x: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (i, c) in x.terms() {
        let p = from.path(i);
        let mapped: Vec<usize> = p.arrows.iter().map(|&a| arrows[a]).collect();
        let j = to
            .path_index(vertices[p.source], &mapped)
            .expect("paths of a full subquiver are paths of the quiver");
        out.add_term(j, c.clone());
    }
    out
}

fn transport_complex(
    x: &ProjComplex,
    to: &Arc<PathAlgebra>,
    vmap: impl Fn(usize) -> usize,
    entry: impl Fn(&AlgebraElement) -> AlgebraElement,
) -> Result<ProjComplex> {
    let comps: BTreeMap<i32, Vec<usize>> = x
        .degrees()
        .map(|n| (n, x.component(n).iter().map(|&v| vmap(v)).collect()))
        .collect();
    let mut diffs = BTreeMap::new();
    for n in x.degrees() {
        let Some(d) = x.differential(n) else { continue };
        let rows: Vec<usize> = d.rows().iter().map(|&v| vmap(v)).collect();
        let cols: Vec<usize> = d.cols().iter().map(|&v| vmap(v)).collect();
        let mut m = PathMatrix::zero(&rows, &cols);
        for i in 0..rows.len() {
            for j in 0..cols.len() {
                m.set(i, j, entry(d.get(i, j)));
            }
        }
        diffs.insert(n, m);
    }
    ProjComplex::new(to.clone(), comps, diffs)
}

impl IdempotentRecollement {
    pub fn in_subset(&self, v: usize) -> bool {
        self.subset.binary_search(&v).is_ok()
    }

    /// Vertex of `A` for a vertex of `B`.
    pub fn b_vertex(&self, v: usize) -> usize {
        self.b_vertices[v]
    }

    /// Vertex of `A` for a vertex of `C`.
    pub fn c_vertex(&self, v: usize) -> usize {
        self.c_vertices[v]
    }

    /// The resolution of `P̄_v` as a complex over `A` in degrees `-1, 0`.
    pub fn resolution_complex(&self, v: usize) -> ProjComplex {
        let alg = &self.algebra;
        let r = &self.resolutions[v];
        let tops: Vec<usize> = r.generators.iter().map(|&p| alg.path(p).target).collect();
        let mut d = PathMatrix::zero(&[r.vertex], &tops);
        for (j, &p) in r.generators.iter().enumerate() {
            d.set(0, j, AlgebraElement::basis(p, alg.field().one()));
        }
        ProjComplex::new(
            alg.clone(),
            BTreeMap::from([(-1, tops), (0, alloc::vec![r.vertex])]),
            BTreeMap::from([(-1, d)]),
        )
        .expect("resolutions are complexes")
    }

    /// `j_! = - ⊗_{eAe} eA`: relabels `P_v^C` as `P_v^A`.
    pub fn j_lower_shriek(&self, x: &ProjComplex) -> Result<ProjComplex> {
        if x.algebra() != &self.c {
            return Err(Error::AlgebraMismatch);
        }
        transport_complex(x, &self.algebra, |v| self.c_vertices[v], |e| {
            transport(&self.c, &self.algebra, &self.c_vertices, &self.c_arrows, e)
        })
    }

    /// `i^* = - ⊗_A A/AeA`: deletes the summands at `S`.
    pub fn i_upper_star(&self, z: &ProjComplex) -> Result<ProjComplex> {
        if z.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let b_index: BTreeMap<usize, usize> = self.b_vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let comps: BTreeMap<i32, Vec<usize>> = z
            .degrees()
            .map(|n| (n, z.component(n).iter().filter_map(|v| b_index.get(v).copied()).collect()))
            .collect();
        let mut diffs = BTreeMap::new();
        for n in z.degrees() {
            let Some(d) = z.differential(n) else { continue };
            let rows: Vec<usize> = (0..d.rows().len()).filter(|&i| !self.in_subset(d.rows()[i])).collect();
            let cols: Vec<usize> = (0..d.cols().len()).filter(|&j| !self.in_subset(d.cols()[j])).collect();
            let rv: Vec<usize> = rows.iter().map(|&i| b_index[&d.rows()[i]]).collect();
            let cv: Vec<usize> = cols.iter().map(|&j| b_index[&d.cols()[j]]).collect();
            let mut m = PathMatrix::zero(&rv, &cv);
            for (a, &i) in rows.iter().enumerate() {
                for (c, &j) in cols.iter().enumerate() {
                    m.set(a, c, self.to_b(d.get(i, j)));
                }
            }
            diffs.insert(n, m);
        }
        ProjComplex::new(self.b.clone(), comps, diffs)
    }

    /// Image in `A/AeA` of an element between complement vertices.
    fn to_b(&self, x: &AlgebraElement) -> AlgebraElement {
        let alg = &self.algebra;
        let q = alg.quiver();
        let mut out = AlgebraElement::zero();
        for (i, c) in x.terms() {
            let p = alg.path(i);
            // paths touching S die in the quotient
            let touches = self.in_subset(p.source) || p.arrows.iter().any(|&a| self.in_subset(q.arrows()[a].target));
            if touches {
                continue;
            }
            let b_arrow = |a: usize| self.b_arrows.iter().position(|&x| x == a).expect("arrow between complement vertices");
            let b_src = self.b_vertices.iter().position(|&v| v == p.source).expect("complement vertex");
            let arrows: Vec<usize> = p.arrows.iter().map(|&a| b_arrow(a)).collect();
            let j = self.b.path_index(b_src, &arrows).expect("path of the subquiver");
            out.add_term(j, c.clone());
        }
        out
    }

    fn b_to_a(&self, x: &AlgebraElement) -> AlgebraElement {
        transport(&self.b, &self.algebra, &self.b_vertices, &self.b_arrows, x)
    }

    /// `i_* = - ⊗^L_{A/AeA} A/AeA`, minimized.
    pub fn i_star(&self, y: &ProjComplex) -> Result<ProjComplex> {
        Ok(minimize(&self.i_star_unminimized(y)?).complex)
    }

    /// The total complex of the resolutions of the components of `Y`: the cone
    /// of the map from the syzygy complex to `Y` read over `A`.
    pub fn i_star_unminimized(&self, y: &ProjComplex) -> Result<ProjComplex> {
        if y.algebra() != &self.b {
            return Err(Error::AlgebraMismatch);
        }
        let alg = &self.algebra;
        let one = alg.field().one();
        let top = transport_complex(y, alg, |v| self.b_vertices[v], |e| self.b_to_a(e))?;
        // syzygy complex: one summand P_{t(p)} per generator p of each summand
        let gens_of = |v: usize| &self.resolutions[v].generators;
        let mut syz_comps = BTreeMap::new();
        let mut syz_index: BTreeMap<i32, Vec<usize>> = BTreeMap::new(); // first generator slot per summand
        for n in y.degrees() {
            let mut obj = Vec::new();
            let mut starts = Vec::new();
            for &v in y.component(n) {
                starts.push(obj.len());
                obj.extend(gens_of(v).iter().map(|&p| alg.path(p).target));
            }
            syz_comps.insert(n, obj);
            syz_index.insert(n, starts);
        }
        let mut syz_diffs = BTreeMap::new();
        for n in y.degrees() {
            let Some(d) = y.differential(n) else { continue };
            let mut m = PathMatrix::zero(&syz_comps[&(n + 1)], &syz_comps[&n]);
            for i in 0..d.rows().len() {
                for j in 0..d.cols().len() {
                    let (w, v) = (d.rows()[i], d.cols()[j]);
                    for (qi, c) in self.b_to_a(d.get(i, j)).terms() {
                        // q · p is again a generator of w
                        for (k, &p) in gens_of(v).iter().enumerate() {
                            let qp = alg
                                .basis_product(qi, p)
                                .ok_or_else(|| Error::Internal(String::from("lift of a differential entry is not composable")))?;
                            let slot = gens_of(w)
                                .iter()
                                .position(|&g| g == qp)
                                .ok_or_else(|| Error::Internal(String::from("lifted path is not a generator")))?;
                            let (r, col) = (syz_index[&(n + 1)][i] + slot, syz_index[&n][j] + k);
                            let t = alg.path(p).target;
                            m.entry_mut(r, col).add_term(t, c.clone());
                        }
                    }
                }
            }
            syz_diffs.insert(n, m);
        }
        let syz = ProjComplex::new(alg.clone(), syz_comps.clone(), syz_diffs)?;
        let mut inc = BTreeMap::new();
        for n in y.degrees() {
            let mut m = PathMatrix::zero(top.component(n), syz.component(n));
            for (j, &v) in y.component(n).iter().enumerate() {
                for (k, &p) in gens_of(v).iter().enumerate() {
                    m.set(j, syz_index[&n][j] + k, AlgebraElement::basis(p, one.clone()));
                }
            }
            inc.insert(n, m);
        }
        let f = ChainMap::new(syz, top, inc)?;
        Ok(cone(&f)?.z)
    }
}
