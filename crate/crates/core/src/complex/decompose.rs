use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{is_isomorphic, minimize, ChainMap, IsoOptions, PathMatrix, ProjComplex};
use crate::hom::{hom_basis, HomBasis};
use crate::linalg::{Field, Matrix, Scalar};
use crate::random::uniform_i64;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Summand {
    pub complex: ProjComplex,
    pub multiplicity: usize,
    /// `End/rad End` was shown to be one-dimensional, so the summand is
    /// indecomposable. When unset, no nontrivial idempotent was found but
    /// the semisimple quotient is larger than the field.
    pub local_certified: bool,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub minimal: ProjComplex,
    /// Sorted by smallest vertex index, then by lowest degree.
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn total_count(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }

    /// `P1[1] ⊕ P2 ⊕ P3`, with `^m` for multiplicities above one.
    pub fn describe(&self) -> String {
        if self.summands.is_empty() {
            return String::from("0");
        }
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| {
                let d = s.complex.describe();
                if s.multiplicity > 1 {
                    format!("{d}^{}", s.multiplicity)
                } else {
                    d
                }
            })
            .collect();
        parts.join(" ⊕ ")
    }
}

/// Splits a complex along the connected components of its differential.
pub fn split_connected(x: &ProjComplex) -> Vec<ProjComplex> {
    if x.is_zero() {
        return Vec::new();
    }
    // union-find over all summands, numbered degree by degree
    let mut offset = BTreeMap::new();
    let mut total = 0;
    for n in x.degrees() {
        offset.insert(n, total);
        total += x.component(n).len();
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for n in x.degrees() {
        let Some(d) = x.differential(n) else { continue };
        for i in 0..d.rows().len() {
            for j in 0..d.cols().len() {
                if !d.get(i, j).is_zero() {
                    let a = find(&mut parent, offset[&(n + 1)] + i);
                    let b = find(&mut parent, offset[&n] + j);
                    parent[a] = b;
                }
            }
        }
    }
    let root: Vec<usize> = (0..total).map(|i| find(&mut parent, i)).collect();
    let mut roots: Vec<usize> = Vec::new();
    for &r in &root {
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    roots
        .into_iter()
        .map(|r| x.restrict(|n, i, _| root[offset[&n] + i] == r).0)
        .collect()
}

/// Krull–Schmidt decomposition of `X` in `K^b(proj-A)` (characteristic 0).
pub fn decompose(x: &ProjComplex) -> Result<Decomposition> {
    let alg = x.algebra();
    if alg.field() != Field::Rational {
        return Err(Error::UnsupportedField("decomposition"));
    }
    let minimal = minimize(x).complex;
    let mut pieces: Vec<(ProjComplex, bool)> = Vec::new();
    for c in split_connected(&minimal) {
        split_into(&c, &mut pieces)?;
    }
    let pieces = pieces.into_iter().map(|(c, l)| (normalize_scalars(&c), l));
    let opts = IsoOptions::default();
    let mut groups: Vec<Summand> = Vec::new();
    'outer: for (c, local) in pieces {
        for g in groups.iter_mut() {
            if is_isomorphic(&g.complex, &c, &opts)?.isomorphic {
                g.multiplicity += 1;
                g.local_certified &= local;
                continue 'outer;
            }
        }
        groups.push(Summand {
            complex: c,
            multiplicity: 1,
            local_certified: local,
        });
    }
    groups.sort_by_key(|s| sort_key(&s.complex));
    Ok(Decomposition { minimal, summands: groups })
}

/// Rescales summands so that the first nonzero entry of every row of every
/// differential has leading coefficient one; an isomorphism of complexes.
fn normalize_scalars(x: &ProjComplex) -> ProjComplex {
    let Some(lo) = x.lo() else { return x.clone() };
    let alg = x.algebra();
    let comps: Vec<Vec<usize>> = x.degrees().map(|n| x.component(n).to_vec()).collect();
    let mut diffs: Vec<PathMatrix> = x.degrees().skip(1).map(|n| x.differential_or_zero(n - 1)).collect();
    for k in 0..diffs.len() {
        for i in 0..diffs[k].rows().len() {
            let Some(lead) = (0..diffs[k].cols().len())
                .map(|j| diffs[k].get(i, j))
                .find(|e| !e.is_zero())
                .and_then(|e| e.terms().next().map(|(_, c)| c.clone()))
            else {
                continue;
            };
            let inv = lead.inv().expect("nonzero");
            for j in 0..diffs[k].cols().len() {
                let e = diffs[k].get(i, j).scale(&inv);
                diffs[k].set(i, j, e);
            }
            if k + 1 < diffs.len() {
                for r in 0..diffs[k + 1].rows().len() {
                    let e = diffs[k + 1].get(r, i).scale(&lead);
                    diffs[k + 1].set(r, i, e);
                }
            }
        }
    }
    ProjComplex::from_parts(alg.clone(), lo, comps, diffs)
}

fn sort_key(x: &ProjComplex) -> (usize, i32, usize) {
    let v = x.degrees().flat_map(|n| x.component(n).iter().copied()).min().unwrap_or(usize::MAX);
    (v, x.lo().unwrap_or(0), x.size())
}

/// The endomorphism algebra `End_{K^b}(C)` in the coordinates of a Hom basis.
struct EndAlgebra {
    basis: HomBasis,
    /// `table[i][j]` = coordinates of `f_i ∘ f_j`
    table: Vec<Vec<Vec<Scalar>>>,
    one: Vec<Scalar>,
    field: Field,
}

impl EndAlgebra {
    fn new(c: &ProjComplex) -> Result<Self> {
        let basis = hom_basis(c, c, 0)?;
        let field = c.algebra().field();
        let n = basis.dim();
        let coords = |f: &ChainMap| {
            basis
                .coordinates(f)
                .ok_or_else(|| Error::Internal(String::from("endomorphism outside its Hom space")))
        };
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let g = basis.representatives[i].compose(&basis.representatives[j])?;
                table[i][j] = coords(&g)?;
            }
        }
        let one = coords(&ChainMap::identity(c))?;
        Ok(EndAlgebra { basis, table, one, field })
    }

    fn dim(&self) -> usize {
        self.one.len()
    }

    fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&xy * c);
                    }
                }
            }
        }
        out
    }

    /// Dimension of `End / rad End`, via the radical of the trace form.
    fn semisimple_dim(&self) -> usize {
        let n = self.dim();
        // tr(L_k) for each basis element
        let tr: Vec<Scalar> = (0..n)
            .map(|k| (0..n).fold(self.field.zero(), |acc, j| &acc + &self.table[k][j][j]))
            .collect();
        let form = Matrix::from_fn(self.field, n, n, |i, j| {
            self.table[i][j]
                .iter()
                .zip(&tr)
                .fold(self.field.zero(), |acc, (c, t)| &acc + &(c * t))
        });
        form.rank()
    }

    fn poly_eval(&self, p: &[Scalar], z: &[Scalar]) -> Vec<Scalar> {
        // Horner
        let mut acc = vec![self.field.zero(); self.dim()];
        for c in p.iter().rev() {
            acc = self.mul(&acc, z);
            for (a, o) in acc.iter_mut().zip(&self.one) {
                *a = &*a + &(c * o);
            }
        }
        acc
    }

    /// Monic minimal polynomial of `z`, coefficients from low to high degree.
    fn minimal_polynomial(&self, z: &[Scalar]) -> Vec<Scalar> {
        let mut powers: Vec<Vec<Scalar>> = vec![self.one.clone()];
        loop {
            let next = self.mul(powers.last().unwrap(), z);
            let m = Matrix::from_columns(self.field, self.dim(), &powers).expect("one field");
            if let Ok(Some(c)) = m.solve(&next) {
                let mut p: Vec<Scalar> = c.into_iter().map(|x| -x).collect();
                p.push(self.field.one());
                return p;
            }
            powers.push(next);
        }
    }
}

fn trim(p: &mut Vec<Scalar>) {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
}

fn poly_sub(a: &[Scalar], b: &[Scalar], field: Field) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let mut out: Vec<Scalar> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| field.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| field.zero());
            &x - &y
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_mul(a: &[Scalar], b: &[Scalar], field: Field) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(&mut out);
    out
}

/// `(q, r)` with `a = q b + r`.
fn poly_divmod(a: &[Scalar], b: &[Scalar], field: Field) -> (Vec<Scalar>, Vec<Scalar>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let lead = b.last().expect("nonzero divisor").inv().expect("nonzero");
    let mut q = vec![field.zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - b.len();
        let c = r.last().unwrap() * &lead;
        for (i, y) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &(&c * y);
        }
        q[k] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// `(g, u, v)` with `u a + v b = g = gcd(a, b)`.
fn poly_xgcd(a: &[Scalar], b: &[Scalar], field: Field) -> (Vec<Scalar>, Vec<Scalar>, Vec<Scalar>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut u0, mut u1) = (vec![field.one()], Vec::new());
    let (mut v0, mut v1) = (Vec::new(), vec![field.one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1, field);
        let u2 = poly_sub(&u0, &poly_mul(&q, &u1, field), field);
        let v2 = poly_sub(&v0, &poly_mul(&q, &v1, field), field);
        r0 = core::mem::replace(&mut r1, r);
        u0 = core::mem::replace(&mut u1, u2);
        v0 = core::mem::replace(&mut v1, v2);
    }
    (r0, u0, v0)
}

/// `p(t + r)`.
fn taylor_shift(p: &[Scalar], r: &Scalar, field: Field) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::new();
    let lin = vec![r.clone(), field.one()];
    for c in p.iter().rev() {
        out = poly_mul(&out, &lin, field);
        if out.is_empty() {
            out.push(field.zero());
        }
        out[0] = &out[0] + c;
        trim(&mut out);
    }
    out
}

/// A nontrivial idempotent of `E` obtained from `z`: if the minimal
/// polynomial of `z - r` is `t^a q(t)` with `a > 0`, `q(0) ≠ 0` and `deg q > 0`,
/// then `v(z - r) q(z - r)` is one, for Bézout coefficients `u t^a + v q = 1`.
fn idempotent_from(e: &EndAlgebra, z: &[Scalar], shifts: &[i64]) -> Option<Vec<Scalar>> {
    let field = e.field;
    let m = e.minimal_polynomial(z);
    if m.len() <= 2 {
        return None;
    }
    for &r in shifts {
        let rs = field.from_i64(r);
        let mr = taylor_shift(&m, &rs, field);
        let a = mr.iter().take_while(|c| c.is_zero()).count();
        if a == 0 || a + 1 == mr.len() {
            continue;
        }
        let q = mr[a..].to_vec();
        let mut ta = vec![field.zero(); a];
        ta.push(field.one());
        let (g, _, v) = poly_xgcd(&ta, &q, field);
        debug_assert_eq!(g.len(), 1);
        let ginv = g[0].inv()?;
        let v: Vec<Scalar> = v.iter().map(|c| c * &ginv).collect();
        let zr: Vec<Scalar> = z.iter().zip(&e.one).map(|(x, o)| x - &(&rs * o)).collect();
        let vq = poly_mul(&v, &q, field);
        let idem = e.poly_eval(&vq, &zr);
        if idem.iter().any(|c| !c.is_zero()) && idem != e.one {
            return Some(idem);
        }
    }
    None
}

fn find_idempotent(e: &EndAlgebra) -> Option<Vec<Scalar>> {
    let n = e.dim();
    let field = e.field;
    let shifts = [0, 1, -1, 2, -2, 3, -3];
    let unit = |i: usize| {
        let mut v = vec![field.zero(); n];
        v[i] = field.one();
        v
    };
    for i in 0..n {
        if let Some(x) = idempotent_from(e, &unit(i), &shifts) {
            return Some(x);
        }
    }
    for i in 0..n {
        for j in 0..n {
            let p = e.mul(&unit(i), &unit(j));
            if let Some(x) = idempotent_from(e, &p, &shifts) {
                return Some(x);
            }
            if i < j {
                let s: Vec<Scalar> = (0..n).map(|k| if k == i || k == j { field.one() } else { field.zero() }).collect();
                if let Some(x) = idempotent_from(e, &s, &shifts) {
                    return Some(x);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xdec0);
    for _ in 0..32 {
        let z: Vec<Scalar> = (0..n).map(|_| field.from_i64(uniform_i64(&mut rng, -3, 3))).collect();
        if let Some(x) = idempotent_from(e, &z, &shifts) {
            return Some(x);
        }
    }
    None
}

fn split_into(c: &ProjComplex, out: &mut Vec<(ProjComplex, bool)>) -> Result<()> {
    if c.size() <= 1 {
        out.push((c.clone(), true));
        return Ok(());
    }
    let e = EndAlgebra::new(c)?;
    if e.dim() == 1 || e.semisimple_dim() == 1 {
        out.push((c.clone(), true));
        return Ok(());
    }
    let Some(idem) = find_idempotent(&e) else {
        out.push((c.clone(), false));
        return Ok(());
    };
    let x = strict_idempotent(&e.basis.combination(&idem))?;
    let y = ChainMap::identity(c).sub(&x)?;
    for p in [&x, &y] {
        let part = image_of(p)?;
        for q in split_connected(&part) {
            split_into(&q, out)?;
        }
    }
    Ok(())
}

/// Lifts a homotopy idempotent of a minimal complex to a strict one.
///
/// `x² - x` is null-homotopic, hence has all entries in the radical and is
/// nilpotent; the iteration `x ↦ 3x² - 2x³` squares that defect each time.
fn strict_idempotent(x: &ChainMap) -> Result<ChainMap> {
    let mut x = x.clone();
    let field = x.source().algebra().field();
    for _ in 0..64 {
        let x2 = x.compose(&x)?;
        if x2.sub(&x)?.is_zero() {
            return Ok(x);
        }
        let x3 = x2.compose(&x)?;
        x = x2.scale(&field.from_i64(3)).sub(&x3.scale(&field.from_i64(2)))?;
    }
    Err(Error::Internal(String::from("idempotent lifting did not converge")))
}

/// The summand cut out by a strict idempotent chain map `x`.
pub(crate) fn image_of(x: &ChainMap) -> Result<ProjComplex> {
    let c = x.source();
    let alg = c.algebra();
    let field = alg.field();
    let mut iotas = BTreeMap::new();
    let mut pis = BTreeMap::new();
    let mut comps = BTreeMap::new();
    for n in c.degrees() {
        let obj = c.component(n);
        let xn = x.component(n);
        let top = xn.top(field);
        let cols = top.rref().pivots;
        if cols.is_empty() {
            continue;
        }
        let rows = Matrix::from_fn(field, cols.len(), obj.len(), |a, i| top.get(i, cols[a]).clone())
            .rref()
            .pivots;
        let all_rows: Vec<usize> = (0..obj.len()).collect();
        let iota = xn.select(&all_rows, &cols);
        let u = xn.select(&rows, &cols);
        let uinv = invert_unipotent(alg, &u, field)?;
        let pi = uinv.compose(alg, &xn.select(&rows, &all_rows));
        comps.insert(n, cols.iter().map(|&j| obj[j]).collect::<Vec<_>>());
        iotas.insert(n, iota);
        pis.insert(n, pi);
    }
    let mut diffs = BTreeMap::new();
    for n in c.degrees() {
        if let (Some(i), Some(p), Some(d)) = (iotas.get(&n), pis.get(&(n + 1)), c.differential(n)) {
            diffs.insert(n, p.compose(alg, &d.compose(alg, i)));
        }
    }
    ProjComplex::new(alg.clone(), comps, diffs)
}

/// Inverse of a square path matrix whose reduction mod the radical is invertible.
fn invert_unipotent(alg: &crate::quiver::PathAlgebra, u: &PathMatrix, field: Field) -> Result<PathMatrix> {
    let top = u.top(field);
    let dinv = top
        .inverse()?
        .ok_or_else(|| Error::Internal(String::from("summand block not invertible mod radical")))?;
    let dinv = PathMatrix::from_top(u.cols(), u.rows(), &dinv);
    // u = d (1 + n) with n = d⁻¹ u - 1 nilpotent
    let id = PathMatrix::identity(alg, u.cols());
    let n = dinv.compose(alg, u).sub(&id);
    let mut acc = id.clone();
    let mut term = id;
    loop {
        term = term.compose(alg, &n).neg();
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    Ok(acc.compose(alg, &dinv))
}
