//! Hom spaces in `K^b(proj-A)`: chain maps modulo null-homotopic maps.
//!
//! A graded map `X → Y` of degree `r` (components `X^n → Y^{n+r}`) is
//! coordinatized by one scalar per path in each entry's Hom space
//! `e_w A e_v`. Chain maps are the kernel of `f ↦ d f − f d`, null-homotopic
//! maps the image of `h ↦ d h + h d`, and `Hom(X, Y[k])` is their quotient.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{ChainMap, PathMatrix, ProjComplex};
use crate::linalg::{Field, Matrix, RowSpace, Scalar};
use crate::quiver::{AlgebraElement, PathAlgebra};
use crate::Result;

/// Coordinates on graded maps `X → Y` of one degree.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    degree: i32,
    blocks: Vec<Block>,
    dim: usize,
}

#[derive(Clone, Debug)]
struct Block {
    /// source degree
    n: i32,
    rows: Vec<usize>,
    cols: Vec<usize>,
    /// per entry (row-major): first coordinate and the basis paths
    entries: Vec<(usize, Vec<usize>)>,
}

impl Layout {
    pub(crate) fn new(alg: &PathAlgebra, x: &ProjComplex, y: &ProjComplex, degree: i32) -> Layout {
        let mut blocks = Vec::new();
        let mut dim = 0;
        for n in x.degrees() {
            let cols = x.component(n);
            let rows = y.component(n + degree);
            if cols.is_empty() || rows.is_empty() {
                continue;
            }
            let mut entries = Vec::with_capacity(rows.len() * cols.len());
            for &w in rows {
                for &v in cols {
                    let paths = alg.paths(w, v).to_vec();
                    entries.push((dim, paths.clone()));
                    dim += paths.len();
                }
            }
            blocks.push(Block {
                n,
                rows: rows.to_vec(),
                cols: cols.to_vec(),
                entries,
            });
        }
        Layout { degree, blocks, dim }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    fn block_index(&self, n: i32) -> Option<usize> {
        self.blocks.binary_search_by_key(&n, |b| b.n).ok()
    }

    /// Coordinate of path `path` in entry `(i, j)` of the component at source degree `n`.
    fn coord(&self, n: i32, i: usize, j: usize, path: usize) -> Option<usize> {
        let b = &self.blocks[self.block_index(n)?];
        let (off, paths) = &b.entries[i * b.cols.len() + j];
        paths.iter().position(|&p| p == path).map(|k| off + k)
    }

    pub(crate) fn to_vec<'a>(&self, field: Field, comp: impl Fn(i32) -> Option<&'a PathMatrix>) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.dim];
        for b in &self.blocks {
            let Some(m) = comp(b.n) else { continue };
            debug_assert!(m.rows() == b.rows.as_slice() && m.cols() == b.cols.as_slice());
            for i in 0..b.rows.len() {
                for j in 0..b.cols.len() {
                    let (off, paths) = &b.entries[i * b.cols.len() + j];
                    for (idx, c) in m.get(i, j).terms() {
                        let k = paths.iter().position(|&p| p == idx).expect("entry in its Hom space");
                        out[off + k] = c.clone();
                    }
                }
            }
        }
        out
    }

    pub(crate) fn from_vec(&self, v: &[Scalar]) -> BTreeMap<i32, PathMatrix> {
        let mut out = BTreeMap::new();
        for b in &self.blocks {
            let mut m = PathMatrix::zero(&b.rows, &b.cols);
            for i in 0..b.rows.len() {
                for j in 0..b.cols.len() {
                    let (off, paths) = &b.entries[i * b.cols.len() + j];
                    let mut e = AlgebraElement::zero();
                    for (k, &p) in paths.iter().enumerate() {
                        e.add_term(p, v[off + k].clone());
                    }
                    m.set(i, j, e);
                }
            }
            if !m.is_zero() {
                out.insert(b.n, m);
            }
        }
        out
    }

    /// Iterates coordinates as `(source degree, row, col, path)`.
    fn units(&self) -> impl Iterator<Item = (i32, usize, usize, usize)> + '_ {
        self.blocks.iter().flat_map(|b| {
            let c = b.cols.len();
            b.entries
                .iter()
                .enumerate()
                .flat_map(move |(e, (_, paths))| paths.iter().map(move |&p| (b.n, e / c, e % c, p)))
        })
    }
}

/// Matrix of `f ↦ d_Y ∘ f + sign · f ∘ d_X` from graded maps of `src.degree`
/// to graded maps of `dst.degree = src.degree + 1`.
fn differential_operator(
    alg: &PathAlgebra,
    x: &ProjComplex,
    y: &ProjComplex,
    src: &Layout,
    dst: &Layout,
    sign: i64,
) -> Matrix {
    let field = alg.field();
    let s = field.from_i64(sign);
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(src.dim());
    for (n, i, j, p) in src.units() {
        let mut col = vec![field.zero(); dst.dim()];
        let unit = AlgebraElement::basis(p, field.one());
        // d_Y ∘ f: the entry moves to row a of Y^{n+deg+1}, same source degree n
        if let Some(d) = y.differential(n + src.degree) {
            for a in 0..d.rows().len() {
                let e = d.get(a, i);
                if e.is_zero() {
                    continue;
                }
                for (q, c) in alg.multiply(e, &unit).terms() {
                    let k = dst.coord(n, a, j, q).expect("coordinate exists");
                    col[k] = &col[k] + c;
                }
            }
        }
        // f ∘ d_X: the entry lands at source degree n-1, column b of X^{n-1}
        if let Some(d) = x.differential(n - 1) {
            for b in 0..d.cols().len() {
                let e = d.get(j, b);
                if e.is_zero() {
                    continue;
                }
                for (q, c) in alg.multiply(&unit, e).terms() {
                    let k = dst.coord(n - 1, i, b, q).expect("coordinate exists");
                    col[k] = &col[k] + &(c * &s);
                }
            }
        }
        cols.push(col);
    }
    Matrix::from_columns(field, dst.dim(), &cols).expect("consistent field")
}

/// Exact support window `[lo_Y - hi_X, hi_Y - lo_X]` outside which
/// `Hom(X, Y[k])` vanishes; `None` if either complex is zero.
pub fn support_window(x: &ProjComplex, y: &ProjComplex) -> Option<(i32, i32)> {
    Some((y.lo()? - x.hi()?, y.hi()? - x.lo()?))
}

/// The cycle/boundary data of `Hom^•(X, Y')` in degree 0 for `Y' = Y[k]`.
struct HomSystem {
    layout: Layout,
    cycles: Vec<Vec<Scalar>>,
    boundaries: RowSpace,
}

fn hom_system(x: &ProjComplex, yk: &ProjComplex) -> HomSystem {
    let alg = x.algebra();
    let field = alg.field();
    let f0 = Layout::new(alg, x, yk, 0);
    let f1 = Layout::new(alg, x, yk, 1);
    let fm1 = Layout::new(alg, x, yk, -1);
    // chain condition d f - f d = 0
    let cycles = if f0.dim() == 0 {
        Vec::new()
    } else {
        differential_operator(alg, x, yk, &f0, &f1, -1).kernel_basis()
    };
    let mut boundaries = RowSpace::new(field, f0.dim());
    if fm1.dim() > 0 && f0.dim() > 0 {
        let h = differential_operator(alg, x, yk, &fm1, &f0, 1);
        for j in 0..h.cols() {
            boundaries.insert(&h.column(j));
        }
    }
    HomSystem {
        layout: f0,
        cycles,
        boundaries,
    }
}

/// `dim Hom(X, Y[k])`.
pub fn hom_dim(x: &ProjComplex, y: &ProjComplex, k: i32) -> Result<usize> {
    x.same_algebra(y)?;
    match support_window(x, y) {
        Some((lo, hi)) if (lo..=hi).contains(&k) => {}
        _ => return Ok(0),
    }
    let sys = hom_system(x, &y.shift(k));
    Ok(sys.cycles.len() - sys.boundaries.rank())
}

/// `k ↦ dim Hom(X, Y[k])` over `window` (default: the exact support window).
pub fn hom_dim_table(x: &ProjComplex, y: &ProjComplex, window: Option<(i32, i32)>) -> Result<BTreeMap<i32, usize>> {
    x.same_algebra(y)?;
    let Some((lo, hi)) = window.or_else(|| support_window(x, y)) else {
        return Ok(BTreeMap::new());
    };
    (lo..=hi).map(|k| Ok((k, hom_dim(x, y, k)?))).collect()
}

/// A basis of `Hom_{K^b}(X, Y[k])` by chain-map representatives.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub source: ProjComplex,
    pub target: ProjComplex,
    pub shift: i32,
    /// Chain maps `X → Y[k]`, linearly independent modulo homotopy, in
    /// canonical order (by leading coordinate of the reduced echelon form).
    pub representatives: Vec<ChainMap>,
    layout: Layout,
    boundaries: RowSpace,
    reduced: Matrix,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// `Y[k]`, the common target of the representatives.
    pub fn shifted_target(&self) -> ProjComplex {
        self.target.shift(self.shift)
    }

    fn coords_of(&self, f: &ChainMap) -> Vec<Scalar> {
        let field = self.source.algebra().field();
        self.layout.to_vec(field, |n| f.component_ref(n))
    }

    /// Coefficients of the class of `f: X → Y[k]` in the representative basis;
    /// `None` if `f` is not a chain map into `Y[k]`.
    pub fn coordinates(&self, f: &ChainMap) -> Option<Vec<Scalar>> {
        if f.source() != &self.source || f.target() != &self.shifted_target() || f.check().is_err() {
            return None;
        }
        let r = self.boundaries.reduce(&self.coords_of(f));
        if self.dim() == 0 {
            return r.iter().all(Scalar::is_zero).then(Vec::new);
        }
        self.reduced.solve(&r).ok().flatten()
    }

    /// Whether the chain map `f: X → Y[k]` is null-homotopic.
    pub fn is_null_homotopic(&self, f: &ChainMap) -> bool {
        self.boundaries.contains(&self.coords_of(f))
    }

    /// `Σ c_i · rep_i`.
    pub fn combination(&self, coeffs: &[Scalar]) -> ChainMap {
        assert_eq!(coeffs.len(), self.dim());
        let field = self.source.algebra().field();
        let mut v = vec![field.zero(); self.layout.dim()];
        for (c, rep) in coeffs.iter().zip(&self.representatives) {
            if c.is_zero() {
                continue;
            }
            for (k, x) in self.coords_of(rep).iter().enumerate() {
                if !x.is_zero() {
                    v[k] = &v[k] + &(c * x);
                }
            }
        }
        ChainMap::from_parts(self.source.clone(), self.shifted_target(), self.layout.from_vec(&v))
    }
}

/// Chain-map representatives of a basis of `Hom(X, Y[k])`.
pub fn hom_basis(x: &ProjComplex, y: &ProjComplex, k: i32) -> Result<HomBasis> {
    x.same_algebra(y)?;
    let yk = y.shift(k);
    let field = x.algebra().field();
    let sys = hom_system(x, &yk);
    let mut span = sys.boundaries.clone();
    for z in &sys.cycles {
        span.insert(z);
    }
    let b_pivots = sys.boundaries.pivots();
    let mut reps_vec: Vec<Vec<Scalar>> = Vec::new();
    for (row, p) in span.basis().iter().zip(span.pivots()) {
        if !b_pivots.contains(p) {
            reps_vec.push(sys.boundaries.reduce(row));
        }
    }
    let representatives = reps_vec
        .iter()
        .map(|v| ChainMap::from_parts(x.clone(), yk.clone(), sys.layout.from_vec(v)))
        .collect();
    let reduced = Matrix::from_columns(field, sys.layout.dim(), &reps_vec)?;
    Ok(HomBasis {
        source: x.clone(),
        target: y.clone(),
        shift: k,
        representatives,
        layout: sys.layout,
        boundaries: sys.boundaries,
        reduced,
    })
}

/// Whether a chain map is null-homotopic.
pub fn is_null_homotopic(f: &ChainMap) -> bool {
    let x = f.source();
    let y = f.target();
    let alg = x.algebra();
    let sys_layout = Layout::new(alg, x, y, 0);
    let fm1 = Layout::new(alg, x, y, -1);
    let v = sys_layout.to_vec(alg.field(), |n| f.component_ref(n));
    if v.iter().all(Scalar::is_zero) {
        return true;
    }
    if fm1.dim() == 0 {
        return false;
    }
    let h = differential_operator(alg, x, y, &fm1, &sys_layout, 1);
    matches!(h.solve(&v), Ok(Some(_)))
}

/// Solves `compose(φ) ≃ g` for a chain map `φ: P → Q`, where `compose` is a
/// linear map from graded maps `P → Q` to graded maps `g.source() → g.target()`
/// given on coordinates by `contribution`.
fn solve_factorization(
    p: &ProjComplex,
    q: &ProjComplex,
    g: &ChainMap,
    contribution: impl Fn(&Layout, (i32, usize, usize, usize)) -> Vec<(usize, Scalar)>,
) -> Result<Option<ChainMap>> {
    let (m, w) = (g.source(), g.target());
    let alg = m.algebra();
    let field = alg.field();
    let phi = Layout::new(alg, p, q, 0);
    let phi1 = Layout::new(alg, p, q, 1);
    let hom = Layout::new(alg, m, w, -1);
    let out = Layout::new(alg, m, w, 0);
    if phi.dim() == 0 {
        return Ok(is_null_homotopic(g).then(|| ChainMap::zero(p, q)));
    }
    // rows: [chain condition on φ ; compose(φ) - (d h + h d)], columns: [φ | h]
    let chain = differential_operator(alg, p, q, &phi, &phi1, -1);
    let mut big = Matrix::zeros(field, phi1.dim() + out.dim(), phi.dim() + hom.dim());
    for r in 0..phi1.dim() {
        for c in 0..phi.dim() {
            let x = chain.get(r, c);
            if !x.is_zero() {
                big.set(r, c, x.clone());
            }
        }
    }
    for (c, unit) in phi.units().enumerate() {
        for (r, x) in contribution(&out, unit) {
            let cur = big.get(phi1.dim() + r, c) + &x;
            big.set(phi1.dim() + r, c, cur);
        }
    }
    if hom.dim() > 0 {
        let h = differential_operator(alg, m, w, &hom, &out, 1);
        for r in 0..out.dim() {
            for c in 0..hom.dim() {
                let x = h.get(r, c);
                if !x.is_zero() {
                    big.set(phi1.dim() + r, phi.dim() + c, -x);
                }
            }
        }
    }
    let mut b = vec![field.zero(); phi1.dim()];
    b.extend(out.to_vec(field, |d| g.component_ref(d)));
    let Some(sol) = big.solve(&b)? else {
        return Ok(None);
    };
    let comps = phi.from_vec(&sol[..phi.dim()]);
    Ok(Some(ChainMap::from_parts(p.clone(), q.clone(), comps)))
}

/// Solves `φ ∘ f ≃ g` for a chain map `φ: N → W`, given `f: M → N` and `g: M → W`.
pub fn factor_through(f: &ChainMap, g: &ChainMap) -> Result<Option<ChainMap>> {
    if f.source() != g.source() {
        return Err(crate::Error::ComplexMismatch);
    }
    f.source().same_algebra(g.target())?;
    let alg = f.source().algebra().clone();
    let one = alg.field().one();
    solve_factorization(f.target(), g.target(), g, |out, (deg, i, j, p)| {
        let mut acc = Vec::new();
        let Some(fm) = f.component_ref(deg) else { return acc };
        let unit = AlgebraElement::basis(p, one.clone());
        for col in 0..fm.cols().len() {
            let e = fm.get(j, col);
            if !e.is_zero() {
                for (q, x) in alg.multiply(&unit, e).terms() {
                    acc.push((out.coord(deg, i, col, q).expect("coordinate exists"), x.clone()));
                }
            }
        }
        acc
    })
}

/// Solves `p ∘ φ ≃ g` for a chain map `φ: W → N`, given `p: N → M` and `g: W → M`.
pub fn factor_through_right(p: &ChainMap, g: &ChainMap) -> Result<Option<ChainMap>> {
    if p.target() != g.target() {
        return Err(crate::Error::ComplexMismatch);
    }
    p.source().same_algebra(g.source())?;
    let alg = p.source().algebra().clone();
    let one = alg.field().one();
    solve_factorization(g.source(), p.source(), g, |out, (deg, i, j, path)| {
        let mut acc = Vec::new();
        let Some(pm) = p.component_ref(deg) else { return acc };
        let unit = AlgebraElement::basis(path, one.clone());
        for row in 0..pm.rows().len() {
            let e = pm.get(row, i);
            if !e.is_zero() {
                for (q, x) in alg.multiply(e, &unit).terms() {
                    acc.push((out.coord(deg, row, j, q).expect("coordinate exists"), x.clone()));
                }
            }
        }
        acc
    })
}

/// `s(M, T)`: the largest `k ≥ 0` with `Hom(M, T_i[k]) ≠ 0` for some `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SupStatistic(pub Option<u32>);

impl SupStatistic {
    pub fn value(self) -> Option<u32> {
        self.0
    }
}

pub fn s_sup(m: &ProjComplex, t: &[ProjComplex]) -> Result<SupStatistic> {
    let mut best: Option<u32> = None;
    for ti in t {
        m.same_algebra(ti)?;
        let Some((_, hi)) = support_window(m, ti) else { continue };
        let mut k = hi;
        while k >= 0 && best.is_none_or(|b| k as u32 > b) {
            if hom_dim(m, ti, k)? > 0 {
                best = Some(k as u32);
                break;
            }
            k -= 1;
        }
    }
    Ok(SupStatistic(best))
}

/// A nonzero class in `Hom(T_a, T_b[shift])` with `shift > 0`.
#[derive(Clone, Debug)]
pub struct NonPositivityWitness {
    pub source_index: usize,
    pub target_index: usize,
    pub shift: i32,
    pub map: ChainMap,
}

#[derive(Clone, Debug)]
pub struct NonPositivityReport {
    pub pairs_checked: usize,
    pub witness: Option<NonPositivityWitness>,
}

impl NonPositivityReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks `Hom(T, T'[i]) = 0` for all `T, T'` in the set and all `i > 0`
/// (the exact support window bounds `i`).
pub fn is_nonpositive(t: &[ProjComplex]) -> Result<NonPositivityReport> {
    let mut pairs = 0;
    for (a, x) in t.iter().enumerate() {
        for (b, y) in t.iter().enumerate() {
            x.same_algebra(y)?;
            pairs += 1;
            let Some((_, hi)) = support_window(x, y) else { continue };
            for k in 1..=hi {
                let basis = hom_basis(x, y, k)?;
                if let Some(map) = basis.representatives.into_iter().next() {
                    return Ok(NonPositivityReport {
                        pairs_checked: pairs,
                        witness: Some(NonPositivityWitness {
                            source_index: a,
                            target_index: b,
                            shift: k,
                            map,
                        }),
                    });
                }
            }
        }
    }
    Ok(NonPositivityReport {
        pairs_checked: pairs,
        witness: None,
    })
}

/// The dual statistic: the largest `k ≥ 0` with `Hom(T_i[-k], M) ≠ 0`.
pub fn s_inf(m: &ProjComplex, t: &[ProjComplex]) -> Result<SupStatistic> {
    let mut best: Option<u32> = None;
    for ti in t {
        m.same_algebra(ti)?;
        // Hom(T[-k], M) = Hom(T, M[k])
        let Some((_, hi)) = support_window(ti, m) else { continue };
        let mut k = hi;
        while k >= 0 && best.is_none_or(|b| k as u32 > b) {
            if hom_dim(ti, m, k)? > 0 {
                best = Some(k as u32);
                break;
            }
            k -= 1;
        }
    }
    Ok(SupStatistic(best))
}
