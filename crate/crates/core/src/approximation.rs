//! Left approximations: `add(T)[s]`-envelopes, left minimization and the
//! inductive `susp(T)`-envelope with its truncation triangle
//! `V_M → M → U_M →`, plus the dual `cosusp(T)`-precover.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{cocone, cone, decompose, minimize, split_connected, ChainMap, ProjComplex, Triangle};
use crate::hom::{factor_through, factor_through_right, hom_basis, hom_dim, s_inf, s_sup, support_window, SupStatistic};
use crate::linalg::{Field, Matrix, RowSpace};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetClass {
    /// `add(T)[s]`
    AddShift(i32),
    /// `add(T)[-s]`, for precovers
    AddNegShift(i32),
    Susp,
    Cosusp,
}

/// One indecomposable summand `T_i[shift]` of an approximation target.
#[derive(Clone, Debug)]
pub struct TargetSummand {
    pub t_index: usize,
    pub shift: i32,
    /// The unshifted indecomposable piece of `T_i`.
    pub piece: ProjComplex,
}

impl TargetSummand {
    pub fn object(&self) -> ProjComplex {
        self.piece.shift(self.shift)
    }
}

/// One stage of the inductive construction.
#[derive(Clone, Debug)]
pub struct Layer {
    pub shift: i32,
    pub summands: Vec<TargetSummand>,
    /// `s` of the object entering the stage and of the cocone (resp. cone) it leaves behind
    pub s_before: u32,
    pub s_after: Option<u32>,
    /// minimal cocone (resp. cone) of the stage's approximation, the input of the next stage
    pub residue: ProjComplex,
}

#[derive(Clone, Debug)]
pub struct EnvelopeResult {
    pub class: TargetClass,
    /// `M → N` for envelopes, `N → M` for precovers.
    pub map: ChainMap,
    pub minimal: bool,
    /// `V → M → U →`: the cocone of an envelope, or the cone of a precover.
    pub triangle: Triangle,
    /// Minimal models of the outer terms of the triangle.
    pub v: ProjComplex,
    pub u: ProjComplex,
    /// Target summands and matching map components (one-layer classes only).
    pub summands: Vec<TargetSummand>,
    pub components: Vec<ChainMap>,
    /// Construction trace of the inductive classes, outermost stage first.
    pub layers: Vec<Layer>,
}

/// Indecomposable pieces of the objects of `T`, one per isomorphism class
/// within each `T_i`. Over `𝔽_p` the pieces are connected components of the
/// minimal model, which need not be indecomposable; minimality is then
/// still certified independently.
pub fn generator_pieces(t: &[ProjComplex]) -> Result<Vec<(usize, ProjComplex)>> {
    let mut out = Vec::new();
    for (i, ti) in t.iter().enumerate() {
        if ti.algebra().field() == Field::Rational {
            for s in decompose(ti)?.summands {
                out.push((i, s.complex));
            }
        } else {
            for c in split_connected(&minimize(ti).complex) {
                out.push((i, c));
            }
        }
    }
    Ok(out)
}

fn assemble(m: &ProjComplex, class: TargetClass, summands: Vec<TargetSummand>, components: Vec<ChainMap>) -> Result<EnvelopeResult> {
    let map = if components.is_empty() {
        ChainMap::zero(m, &ProjComplex::zero(m.algebra().clone()))
    } else {
        ChainMap::stack(&components.iter().collect::<Vec<_>>())?
    };
    let triangle = cocone(&map)?;
    let v = minimize(&triangle.x).complex;
    let u = map.target().clone();
    Ok(EnvelopeResult {
        class,
        map,
        minimal: false,
        triangle,
        v,
        u,
        summands,
        components,
        layers: Vec::new(),
    })
}

fn pieces_of(t: &[ProjComplex]) -> Vec<(usize, ProjComplex)> {
    t.iter().cloned().enumerate().collect()
}

fn preenvelope_on(m: &ProjComplex, pieces: &[(usize, ProjComplex)], s: i32) -> Result<EnvelopeResult> {
    let mut summands = Vec::new();
    let mut components = Vec::new();
    for (i, p) in pieces {
        for rep in hom_basis(m, p, s)?.representatives {
            summands.push(TargetSummand {
                t_index: *i,
                shift: s,
                piece: p.clone(),
            });
            components.push(rep);
        }
    }
    assemble(m, TargetClass::AddShift(s), summands, components)
}

/// `M → ⊕ T_i[s]` with one copy of `T_i[s]` per basis element of `Hom(M, T_i[s])`.
pub fn add_shift_preenvelope(m: &ProjComplex, t: &[ProjComplex], s: i32) -> Result<EnvelopeResult> {
    preenvelope_on(m, &pieces_of(t), s)
}

/// Greedily drops target summands whose map component factors through the
/// remaining ones, then certifies left minimality.
pub fn left_minimize(env: &EnvelopeResult) -> Result<EnvelopeResult> {
    let m = env.map.source();
    let mut keep: Vec<usize> = (0..env.components.len()).collect();
    for j in 0..env.components.len() {
        let rest: Vec<&ChainMap> = keep.iter().filter(|&&k| k != j).map(|&k| &env.components[k]).collect();
        if rest.is_empty() {
            continue;
        }
        let f_rest = ChainMap::stack(&rest)?;
        if factor_through(&f_rest, &env.components[j])?.is_some() {
            keep.retain(|&k| k != j);
        }
    }
    let summands = keep.iter().map(|&k| env.summands[k].clone()).collect();
    let components = keep.iter().map(|&k| env.components[k].clone()).collect();
    let mut out = assemble(m, env.class, summands, components)?;
    out.minimal = is_left_minimal(&out.map)?;
    Ok(out)
}

/// `f: M → N` is left minimal iff the left ideal `{k ∈ End(N) : k f ≃ 0}`
/// is nilpotent.
pub fn is_left_minimal(f: &ChainMap) -> Result<bool> {
    minimality(f, true)
}

/// `p: N → M` is right minimal iff the right ideal `{k ∈ End(N) : p k ≃ 0}`
/// is nilpotent.
pub fn is_right_minimal(p: &ChainMap) -> Result<bool> {
    minimality(p, false)
}

fn minimality(f: &ChainMap, left: bool) -> Result<bool> {
    let n = if left { f.target() } else { f.source() };
    if n.is_zero() {
        return Ok(true);
    }
    let end = hom_basis(n, n, 0)?;
    let hom = hom_basis(f.source(), f.target(), 0)?;
    let field = n.algebra().field();
    let coords = |g: &ChainMap| {
        hom.coordinates(g)
            .ok_or_else(|| Error::Internal(String::from("composite outside its Hom space")))
    };
    let mut images = Vec::new();
    for k in &end.representatives {
        let c = if left { k.compose(f)? } else { f.compose(k)? };
        images.push(coords(&c)?);
    }
    let ideal = Matrix::from_columns(field, hom.dim(), &images)?.kernel_basis();
    if ideal.is_empty() {
        return Ok(true);
    }
    // powers of the ideal until they vanish or stabilize
    let elems: Vec<ChainMap> = ideal.iter().map(|v| end.combination(v)).collect();
    let mut power = elems.clone();
    let mut last_rank = usize::MAX;
    loop {
        let mut span = RowSpace::new(field, end.dim());
        let mut next = Vec::new();
        for a in &elems {
            for b in &power {
                let ab = a.compose(b)?;
                let v = end
                    .coordinates(&ab)
                    .ok_or_else(|| Error::Internal(String::from("endomorphism outside its Hom space")))?;
                if span.insert(&v) {
                    next.push(end.combination(&v));
                }
            }
        }
        if span.rank() == 0 {
            return Ok(true);
        }
        if span.rank() >= last_rank {
            return Ok(false);
        }
        last_rank = span.rank();
        power = next;
    }
}

/// First `(T index, k)` with `Hom(V, T_i[k]) ≠ 0` for `k ≥ 0`.
pub fn right_orthogonality_witness(v: &ProjComplex, pieces: &[(usize, ProjComplex)]) -> Result<Option<(usize, i32)>> {
    for (i, p) in pieces {
        let Some((_, hi)) = support_window(v, p) else { continue };
        for k in 0..=hi {
            if hom_dim(v, p, k)? > 0 {
                return Ok(Some((*i, k)));
            }
        }
    }
    Ok(None)
}

/// First `(T index, k)` with `Hom(T_i[-k], U) ≠ 0` for `k ≥ 0`.
pub fn left_orthogonality_witness(u: &ProjComplex, pieces: &[(usize, ProjComplex)]) -> Result<Option<(usize, i32)>> {
    for (i, p) in pieces {
        let Some((_, hi)) = support_window(p, u) else { continue };
        for k in 0..=hi {
            if hom_dim(p, u, k)? > 0 {
                return Ok(Some((*i, k)));
            }
        }
    }
    Ok(None)
}

struct Stage {
    /// `M → U`, with `U` minimal
    map: ChainMap,
    layers: Vec<Layer>,
}

fn susp_stage(m: &ProjComplex, pieces: &[(usize, ProjComplex)], budget: u32) -> Result<Stage> {
    let objs: Vec<ProjComplex> = pieces.iter().map(|p| p.1.clone()).collect();
    let Some(s) = s_sup(m, &objs)?.value() else {
        return Ok(Stage {
            map: ChainMap::zero(m, &ProjComplex::zero(m.algebra().clone())),
            layers: Vec::new(),
        });
    };
    if budget == 0 {
        return Err(Error::Internal(String::from("envelope recursion deeper than s + 1")));
    }
    let h = left_minimize(&preenvelope_on(m, pieces, s as i32)?)?;
    let c_tri = &h.triangle;
    let c_min = minimize(&c_tri.x);
    let c = c_min.complex.clone();
    let u = c_tri.u.compose(&c_min.from_min)?;
    let s_after = s_sup(&c, &objs)?.value();
    if s_after.is_some_and(|t| t >= s) {
        return Err(Error::Internal(String::from("s did not decrease along the envelope recursion")));
    }
    let inner = susp_stage(&c, pieces, budget - 1)?;
    let g = &inner.map;
    let e = g.target().clone();
    // homotopy pushout of E <- C -> M: X = cone((g, -u)ᵗ: C → E ⊕ M)
    let neg_u = u.scale(&m.algebra().field().from_i64(-1));
    let gu = ChainMap::stack(&[g, &neg_u])?;
    let x = cone(&gu)?;
    let incl = ChainMap::summand_inclusion(&[&e, m], 1)?;
    let f = x.v.compose(&incl)?;
    let xm = minimize(&x.z);
    let f = xm.to_min.compose(&f)?;
    let mut layers = vec![Layer {
        shift: s as i32,
        summands: h.summands.clone(),
        s_before: s,
        s_after,
        residue: c.clone(),
    }];
    layers.extend(inner.layers);
    Ok(Stage {
        map: ChainMap::from_parts(m.clone(), xm.complex, f.components().clone()),
        layers,
    })
}

/// The `susp(T)`-envelope `f: M → U_M` and its triangle `V_M → M → U_M →`.
///
/// `minimal` records the left-minimality certificate of `f`; the caller can
/// check `V_M ∈ ⊥susp(T)` with [`right_orthogonality_witness`].
pub fn susp_envelope(m: &ProjComplex, t: &[ProjComplex]) -> Result<EnvelopeResult> {
    let pieces = generator_pieces(t)?;
    susp_envelope_on(m, &pieces)
}

pub fn susp_envelope_on(m: &ProjComplex, pieces: &[(usize, ProjComplex)]) -> Result<EnvelopeResult> {
    let objs: Vec<ProjComplex> = pieces.iter().map(|p| p.1.clone()).collect();
    let budget = s_sup(m, &objs)?.value().map_or(1, |s| s + 2);
    let stage = susp_stage(m, pieces, budget)?;
    let triangle = cocone(&stage.map)?;
    let v = minimize(&triangle.x).complex;
    let u = stage.map.target().clone();
    let minimal = is_left_minimal(&stage.map)?;
    Ok(EnvelopeResult {
        class: TargetClass::Susp,
        map: stage.map,
        minimal,
        triangle,
        v,
        u,
        summands: Vec::new(),
        components: Vec::new(),
        layers: stage.layers,
    })
}

fn precover_on(m: &ProjComplex, pieces: &[(usize, ProjComplex)], s: i32) -> Result<(Vec<TargetSummand>, Vec<ChainMap>)> {
    let mut summands = Vec::new();
    let mut components = Vec::new();
    for (i, p) in pieces {
        let src = p.shift(-s);
        for rep in hom_basis(&src, m, 0)?.representatives {
            summands.push(TargetSummand {
                t_index: *i,
                shift: -s,
                piece: p.clone(),
            });
            components.push(rep);
        }
    }
    Ok((summands, components))
}

fn right_minimize(components: &[ChainMap]) -> Result<Vec<usize>> {
    let mut keep: Vec<usize> = (0..components.len()).collect();
    for j in 0..components.len() {
        let rest: Vec<&ChainMap> = keep.iter().filter(|&&k| k != j).map(|&k| &components[k]).collect();
        if rest.is_empty() {
            continue;
        }
        let p_rest = ChainMap::row(&rest)?;
        if factor_through_right(&p_rest, &components[j])?.is_some() {
            keep.retain(|&k| k != j);
        }
    }
    Ok(keep)
}

fn cosusp_stage(m: &ProjComplex, pieces: &[(usize, ProjComplex)], budget: u32) -> Result<Stage> {
    let objs: Vec<ProjComplex> = pieces.iter().map(|p| p.1.clone()).collect();
    let Some(s) = s_inf(m, &objs)?.value() else {
        return Ok(Stage {
            map: ChainMap::zero(&ProjComplex::zero(m.algebra().clone()), m),
            layers: Vec::new(),
        });
    };
    if budget == 0 {
        return Err(Error::Internal(String::from("precover recursion deeper than s + 1")));
    }
    let (summands, components) = precover_on(m, pieces, s as i32)?;
    let keep = right_minimize(&components)?;
    let summands: Vec<TargetSummand> = keep.iter().map(|&k| summands[k].clone()).collect();
    let kept: Vec<&ChainMap> = keep.iter().map(|&k| &components[k]).collect();
    let p = ChainMap::row(&kept)?;
    let c_tri = cone(&p)?;
    let c_min = minimize(&c_tri.z);
    let c = c_min.complex.clone();
    let w = c_min.to_min.compose(&c_tri.v)?;
    let s_after = s_inf(&c, &objs)?.value();
    if s_after.is_some_and(|t| t >= s) {
        return Err(Error::Internal(String::from("s did not decrease along the precover recursion")));
    }
    let inner = cosusp_stage(&c, pieces, budget - 1)?;
    let q = &inner.map;
    let e = q.source().clone();
    // homotopy pullback of M -> C <- E: X = cocone((w, -q): M ⊕ E → C)
    let neg_q = q.scale(&m.algebra().field().from_i64(-1));
    let wq = ChainMap::row(&[&w, &neg_q])?;
    let x = cocone(&wq)?;
    let proj = ChainMap::summand_projection(&[m, &e], 0)?;
    let f = proj.compose(&x.u)?;
    let xm = minimize(&x.x);
    let f = f.compose(&xm.from_min)?;
    let mut layers = vec![Layer {
        shift: -(s as i32),
        summands,
        s_before: s,
        s_after,
        residue: c.clone(),
    }];
    layers.extend(inner.layers);
    Ok(Stage {
        map: ChainMap::from_parts(xm.complex, m.clone(), f.components().clone()),
        layers,
    })
}

/// The `cosusp(T)`-precover `f: V → M` and its triangle `V → M → U →` with
/// `Hom(T_i[-k], U) = 0` for all `k ≥ 0`.
pub fn cosusp_precover(m: &ProjComplex, t: &[ProjComplex]) -> Result<EnvelopeResult> {
    let pieces = generator_pieces(t)?;
    let objs: Vec<ProjComplex> = pieces.iter().map(|p| p.1.clone()).collect();
    let budget = s_inf(m, &objs)?.value().map_or(1, |s| s + 2);
    let stage = cosusp_stage(m, &pieces, budget)?;
    let triangle = cone(&stage.map)?;
    let u = minimize(&triangle.z).complex;
    let v = stage.map.source().clone();
    let minimal = is_right_minimal(&stage.map)?;
    Ok(EnvelopeResult {
        class: TargetClass::Cosusp,
        map: stage.map,
        minimal,
        triangle,
        v,
        u,
        summands: Vec::new(),
        components: Vec::new(),
        layers: stage.layers,
    })
}

/// Whether every basis map `M → T_i[k]` (`k ≥ 0`, within the support window)
/// factors through the envelope `f: M → N`.
pub fn factorization_certificate(f: &ChainMap, pieces: &[(usize, ProjComplex)]) -> Result<Option<(usize, i32)>> {
    let m = f.source();
    for (i, p) in pieces {
        let Some((_, hi)) = support_window(m, p) else { continue };
        for k in 0..=hi {
            for rep in hom_basis(m, p, k)?.representatives {
                if factor_through(f, &rep)?.is_none() {
                    return Ok(Some((*i, k)));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub s: SupStatistic,
    pub target_size: usize,
    pub factorization: bool,
}

#[derive(Clone, Debug)]
pub struct WeakPreenvelopingReport {
    pub probes: Vec<ProbeReport>,
}

impl WeakPreenvelopingReport {
    pub fn passed(&self) -> bool {
        self.probes.iter().all(|p| p.factorization)
    }
}

/// For each probe `M`: `s(M, T)` is finite and the `add(T)[s]`-preenvelope
/// exists, with every basis map `M → T_i[s]` factoring through it.
pub fn weakly_preenveloping_check(t: &[ProjComplex], probes: &[ProjComplex]) -> Result<WeakPreenvelopingReport> {
    let mut out = Vec::new();
    for m in probes {
        let s = s_sup(m, t)?;
        let Some(sv) = s.value() else {
            out.push(ProbeReport {
                s,
                target_size: 0,
                factorization: true,
            });
            continue;
        };
        let env = add_shift_preenvelope(m, t, sv as i32)?;
        let mut ok = true;
        for ti in t {
            for rep in hom_basis(m, ti, sv as i32)?.representatives {
                ok &= factor_through(&env.map, &rep)?.is_some();
            }
        }
        out.push(ProbeReport {
            s,
            target_size: env.map.target().size(),
            factorization: ok,
        });
    }
    Ok(WeakPreenvelopingReport { probes: out })
}
