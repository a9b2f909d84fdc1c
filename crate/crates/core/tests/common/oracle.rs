//! Brute-force Hom spaces in the homotopy category.
//!
//! Each projective `P_v = e_v A` is realized as the vector space on paths
//! starting at `v`, with `A` acting on the right by concatenation. Graded maps
//! are arbitrary linear maps constrained to commute with the right action of
//! every vertex and arrow; nothing here uses the identification
//! `Hom(P_v, P_w) = e_w A e_v` or the library's linear algebra.

use num_rational::BigRational;
use num_traits::{One, Zero};
use silting_core::complex::ProjComplex;
use silting_core::linalg::Scalar;
use silting_core::quiver::PathAlgebra;

#[derive(Clone, Debug, PartialEq)]
pub enum F {
    Q(BigRational),
    P(u64, u64),
}

impl F {
    fn zero_like(&self) -> F {
        match self {
            F::Q(_) => F::Q(BigRational::zero()),
            F::P(_, p) => F::P(0, *p),
        }
    }
    fn one_like(&self) -> F {
        match self {
            F::Q(_) => F::Q(BigRational::one()),
            F::P(_, p) => F::P(1, *p),
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            F::Q(x) => x.is_zero(),
            F::P(x, _) => *x == 0,
        }
    }
    fn add(&self, o: &F) -> F {
        match (self, o) {
            (F::Q(a), F::Q(b)) => F::Q(a + b),
            (F::P(a, p), F::P(b, _)) => F::P((a + b) % p, *p),
            _ => unreachable!(),
        }
    }
    fn neg(&self) -> F {
        match self {
            F::Q(a) => F::Q(-a),
            F::P(a, p) => F::P((p - a) % p, *p),
        }
    }
    fn sub(&self, o: &F) -> F {
        self.add(&o.neg())
    }
    fn mul(&self, o: &F) -> F {
        match (self, o) {
            (F::Q(a), F::Q(b)) => F::Q(a * b),
            (F::P(a, p), F::P(b, _)) => F::P(((*a as u128 * *b as u128) % *p as u128) as u64, *p),
            _ => unreachable!(),
        }
    }
    fn inv(&self) -> F {
        match self {
            F::Q(a) => F::Q(a.recip()),
            F::P(a, p) => {
                // Fermat
                let (mut base, mut e, mut r) = (*a as u128, *p - 2, 1u128);
                let m = *p as u128;
                while e > 0 {
                    if e & 1 == 1 {
                        r = r * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                F::P(r as u64, *p)
            }
        }
    }
    pub fn from_scalar(s: &Scalar) -> F {
        match s {
            Scalar::Q(r) => F::Q(BigRational::new(r.numer(), r.denom())),
            Scalar::Fp { value, p } => F::P(*value, *p),
        }
    }
}

/// Rank by Gaussian elimination; rows are consumed.
pub fn rank(mut rows: Vec<Vec<F>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = rows[r][j].mul(&f);
                    rows[i][j] = rows[i][j].sub(&t);
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of the null space of `rows` (as a list of row constraints on `n` unknowns).
pub fn null_space(mut rows: Vec<Vec<F>>, n: usize, unit: &F) -> Vec<Vec<F>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..n {
                    let t = rows[r][j].mul(&f);
                    rows[i][j] = rows[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![unit.zero_like(); n];
        v[free] = unit.one_like();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = rows[i][free].neg();
        }
        out.push(v);
    }
    out
}

type Word = (usize, Vec<usize>); // start vertex, arrows

struct Realized {
    /// per degree: the basis words of the underlying space, grouped by summand
    bases: Vec<Vec<Word>>,
    lo: i32,
}

/// Oracle view of an acyclic quiver: arrow endpoints only.
pub struct Q {
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub n: usize,
}

impl Q {
    pub fn of(alg: &PathAlgebra) -> Q {
        let q = alg.quiver();
        Q {
            src: q.arrows().iter().map(|a| a.source).collect(),
            tgt: q.arrows().iter().map(|a| a.target).collect(),
            n: q.vertex_count(),
        }
    }

    fn end(&self, w: &Word) -> usize {
        w.1.last().map_or(w.0, |&a| self.tgt[a])
    }

    /// All words starting at `v`.
    fn words_from(&self, v: usize) -> Vec<Word> {
        let mut out = vec![(v, vec![])];
        let mut i = 0;
        while i < out.len() {
            let e = self.end(&out[i]);
            for a in 0..self.src.len() {
                if self.src[a] == e {
                    let mut w = out[i].clone();
                    w.1.push(a);
                    out.push(w);
                }
            }
            i += 1;
        }
        out
    }
}

fn concat(q: &Q, x: &Word, y: &Word) -> Option<Word> {
    if q.end(x) != y.0 {
        return None;
    }
    let mut w = x.clone();
    w.1.extend(&y.1);
    Some(w)
}

fn realize(q: &Q, x: &ProjComplex) -> Realized {
    let lo = x.lo().unwrap_or(0);
    let bases = x
        .degrees()
        .map(|n| {
            x.component(n)
                .iter()
                .flat_map(|&v| q.words_from(v))
                .collect()
        })
        .collect();
    Realized { bases, lo }
}

impl Realized {
    fn basis(&self, n: i32) -> &[Word] {
        let i = n - self.lo;
        if i < 0 || i as usize >= self.bases.len() {
            &[]
        } else {
            &self.bases[i as usize]
        }
    }
}

/// Summand offsets of degree `n`: index of the first word of each summand.
fn offsets(q: &Q, x: &ProjComplex, n: i32) -> Vec<usize> {
    let mut off = vec![0];
    for &v in x.component(n) {
        let k = q.words_from(v).len();
        off.push(off.last().unwrap() + k);
    }
    off
}

/// Underlying matrix (rows = target words, cols = source words) of `d^n`.
fn diff_matrix(q: &Q, alg: &PathAlgebra, x: &ProjComplex, rx: &Realized, n: i32, unit: &F) -> Vec<Vec<F>> {
    let src = rx.basis(n);
    let tgt = rx.basis(n + 1);
    let mut m = vec![vec![unit.zero_like(); src.len()]; tgt.len()];
    let Some(d) = x.differential(n) else { return m };
    let so = offsets(q, x, n);
    let to = offsets(q, x, n + 1);
    for (j, _) in x.component(n).iter().enumerate() {
        for (i, _) in x.component(n + 1).iter().enumerate() {
            // left multiplication by the entry: P_v -> P_w, word p ↦ entry·p
            for (pidx, c) in d.get(i, j).terms() {
                let path = alg.path(pidx);
                let e: Word = (path.source, path.arrows.clone());
                for (k, p) in src[so[j]..so[j + 1]].iter().enumerate() {
                    if let Some(w) = concat(q, &e, p) {
                        let row = tgt[to[i]..to[i + 1]].iter().position(|t| *t == w).unwrap() + to[i];
                        m[row][so[j] + k] = m[row][so[j] + k].add(&F::from_scalar(c));
                    }
                }
            }
        }
    }
    m
}

/// Right action of generator `g` (vertex `g < n`, else arrow `g - n`) on the
/// space of words `b`.
fn action(q: &Q, b: &[Word], g: usize, unit: &F) -> Vec<Vec<F>> {
    let mut m = vec![vec![unit.zero_like(); b.len()]; b.len()];
    for (j, w) in b.iter().enumerate() {
        let image = if g < q.n {
            (q.end(w) == g).then(|| w.clone())
        } else {
            let a = g - q.n;
            (q.end(w) == q.src[a]).then(|| {
                let mut w = w.clone();
                w.1.push(a);
                w
            })
        };
        if let Some(img) = image {
            // words are unique within a summand; the image stays in the same summand
            let start = b[..=j].iter().rposition(|x| x.1.is_empty() && x.0 == w.0).unwrap();
            let i = b[start..].iter().position(|x| *x == img).unwrap() + start;
            m[i][j] = unit.one_like();
        }
    }
    m
}

struct Graded {
    /// (source degree, rows, cols, offset)
    blocks: Vec<(i32, usize, usize, usize)>,
    dim: usize,
}

fn graded(rx: &Realized, ry: &Realized, xdeg: std::ops::Range<i32>, r: i32) -> Graded {
    let mut blocks = Vec::new();
    let mut dim = 0;
    for n in xdeg {
        let (c, rr) = (rx.basis(n).len(), ry.basis(n + r).len());
        if c * rr > 0 {
            blocks.push((n, rr, c, dim));
            dim += rr * c;
        }
    }
    Graded { blocks, dim }
}

impl Graded {
    fn at(&self, n: i32) -> Option<(usize, usize, usize)> {
        self.blocks.iter().find(|b| b.0 == n).map(|b| (b.1, b.2, b.3))
    }
}

/// Constraints on graded maps of degree `r` that say "commutes with the right
/// action", as rows over the coordinates of `g`.
fn linearity(q: &Q, rx: &Realized, ry: &Realized, g: &Graded, r: i32, unit: &F) -> Vec<Vec<F>> {
    let mut rows = Vec::new();
    for &(n, nr, nc, off) in &g.blocks {
        for gen in 0..q.n + q.src.len() {
            let ax = action(q, rx.basis(n), gen, unit);
            let ay = action(q, ry.basis(n + r), gen, unit);
            // (ay F - F ax)[i][j] = sum_k ay[i][k] F[k][j] - F[i][k] ax[k][j]
            for i in 0..nr {
                for j in 0..nc {
                    let mut row = vec![unit.zero_like(); g.dim];
                    for k in 0..nr {
                        if !ay[i][k].is_zero() {
                            row[off + k * nc + j] = row[off + k * nc + j].add(&ay[i][k]);
                        }
                    }
                    for k in 0..nc {
                        if !ax[k][j].is_zero() {
                            row[off + i * nc + k] = row[off + i * nc + k].sub(&ax[k][j]);
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    rows
}

/// `dim Hom_{K^b}(X, Y[k])` by brute force.
pub fn hom_dim(alg: &PathAlgebra, x: &ProjComplex, y: &ProjComplex, k: i32) -> usize {
    let q = Q::of(alg);
    let unit = F::from_scalar(&alg.field().one());
    let rx = realize(&q, x);
    let ry = realize(&q, y);
    let (ylo, yhi) = (y.lo().unwrap_or(0), y.hi().unwrap_or(-1));
    let xdeg = x.degrees();
    // maps X^n -> Y^{n+k} of degree k; chain condition d_Y f = (-1)^k f d_X
    let g0 = graded(&rx, &ry, xdeg.clone(), k);
    let gm = graded(&rx, &ry, xdeg.clone(), k - 1);
    let mut cons = linearity(&q, &rx, &ry, &g0, k, &unit);
    let sign = if k % 2 == 0 { unit.one_like() } else { unit.neg() };
    let dx: Vec<_> = (x.lo().unwrap_or(0) - 1..=x.hi().unwrap_or(-1)).map(|n| (n, diff_matrix(&q, alg, x, &rx, n, &unit))).collect();
    let dy: Vec<_> = (ylo - 1..=yhi).map(|n| (n, diff_matrix(&q, alg, y, &ry, n, &unit))).collect();
    let dmat = |ds: &Vec<(i32, Vec<Vec<F>>)>, n: i32| ds.iter().find(|d| d.0 == n).map(|d| d.1.clone());
    // chain rows: for each n, d_Y^{n+k} f^n - sign f^{n+1} d_X^n = 0 (as maps X^n -> Y^{n+k+1})
    for n in x.lo().unwrap_or(0) - 1..=x.hi().unwrap_or(-1) {
        let rows_t = ry.basis(n + k + 1).len();
        let cols_s = rx.basis(n).len();
        for i in 0..rows_t {
            for j in 0..cols_s {
                let mut row = vec![unit.zero_like(); g0.dim];
                if let (Some((nr, nc, off)), Some(d)) = (g0.at(n), dmat(&dy, n + k)) {
                    for t in 0..nr {
                        if !d[i][t].is_zero() {
                            row[off + t * nc + j] = row[off + t * nc + j].add(&d[i][t]);
                        }
                    }
                }
                if let (Some((_, nc, off)), Some(d)) = (g0.at(n + 1), dmat(&dx, n)) {
                    for t in 0..nc {
                        if !d[t][j].is_zero() {
                            let v = sign.mul(&d[t][j]);
                            row[off + i * nc + t] = row[off + i * nc + t].sub(&v);
                        }
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    cons.push(row);
                }
            }
        }
    }
    let z = null_space(cons, g0.dim, &unit).len();
    // homotopies: h of degree k-1 A-linear; boundary d_Y h + (-1)^{k-1}... use
    // d_Y h - sign' h d_X with sign' = (-1)^{k-1} so that the image lies in Z
    let hs = null_space(linearity(&q, &rx, &ry, &gm, k - 1, &unit), gm.dim, &unit);
    let sign_h = if (k - 1) % 2 == 0 { unit.one_like() } else { unit.neg() };
    let mut images = Vec::new();
    for h in &hs {
        let mut v = vec![unit.zero_like(); g0.dim];
        for &(n, nr, nc, off) in &g0.blocks {
            for i in 0..nr {
                for j in 0..nc {
                    let mut acc = unit.zero_like();
                    // d_Y^{n+k-1} h^n
                    if let (Some((hr, hc, hoff)), Some(d)) = (gm.at(n), dmat(&dy, n + k - 1)) {
                        for t in 0..hr {
                            if !d[i][t].is_zero() && !h[hoff + t * hc + j].is_zero() {
                                acc = acc.add(&d[i][t].mul(&h[hoff + t * hc + j]));
                            }
                        }
                    }
                    // h^{n+1} d_X^n
                    if let (Some((_, hc, hoff)), Some(d)) = (gm.at(n + 1), dmat(&dx, n)) {
                        for t in 0..hc {
                            if !d[t][j].is_zero() && !h[hoff + i * hc + t].is_zero() {
                                let term = h[hoff + i * hc + t].mul(&d[t][j]).mul(&sign_h);
                                acc = acc.sub(&term);
                            }
                        }
                    }
                    v[off + i * nc + j] = acc;
                }
            }
        }
        images.push(v);
    }
    let b = if images.is_empty() { 0 } else { rank(images) };
    z - b
}
