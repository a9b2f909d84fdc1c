//! Gluing silting complexes along an idempotent recollement, with the
//! certificates: condition (⋆), presilting, generation and agreement of the
//! `⊥>0`-classes on probes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::approximation::{generator_pieces, right_orthogonality_witness, susp_envelope_on, Layer};
use crate::complex::{cone, decompose, is_isomorphic, minimize, split_connected, ChainMap, IsoOptions, PathMatrix, ProjComplex};
use crate::hom::{hom_basis, hom_dim, is_nonpositive, support_window, NonPositivityReport};
use crate::linalg::Field;
use crate::random::{random_complex, ComplexParams};
use crate::recollement::IdempotentRecollement;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct GlueOptions {
    /// saturation depth for the generation check
    pub depth: usize,
    /// seed of the random co-aisle probes
    pub seed: u64,
    pub random_probes: usize,
}

impl Default for GlueOptions {
    fn default() -> Self {
        GlueOptions {
            depth: 3,
            seed: 0,
            random_probes: 10,
        }
    }
}

/// The triangle `T̃_Y → i_*T_Y → U[1] →` for one `T_Y ∈ T_B`.
#[derive(Clone, Debug)]
pub struct GluedPiece {
    pub input: usize,
    /// `i_*T_Y`
    pub m: ProjComplex,
    pub t_tilde: ProjComplex,
    /// `U[1]`, minimal
    pub u_shifted: ProjComplex,
    pub to_m: ChainMap,
    pub to_u: ChainMap,
    /// Envelope trace; shifts are relative to `j_!T_C[1]`. Empty for the shortcut.
    pub layers: Vec<Layer>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarReport {
    /// first piece whose `U[1]` is not visibly in `susp(j_!T_C)[1]`, with the reason
    pub trace_failure: Option<(usize, String)>,
    /// `(piece, T_C index, k)` with `Hom(T̃, j_!T_C[k]) ≠ 0`, `k ≥ 1`
    pub orthogonality_witness: Option<(usize, usize, i32)>,
}

impl StarReport {
    pub fn passed(&self) -> bool {
        self.trace_failure.is_none() && self.orthogonality_witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationStep {
    pub depth: usize,
    /// pool indices of the source and target of the coned map
    pub source: usize,
    pub target: usize,
    pub shift: i32,
    pub basis_index: usize,
    /// pool indices of the new pieces of the cone
    pub produced: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenerationOutcome {
    /// `found[v]` is the pool index of a shift of `P_v`.
    Generated { depth: usize, found: Vec<usize> },
    Inconclusive,
    /// The K₀ classes do not span `ℤ^n`.
    NotGenerated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0Report {
    /// classes of the indecomposable pieces in the basis `[P_v]`
    pub matrix: Vec<Vec<i64>>,
    pub rank: usize,
    pub unimodular: bool,
}

#[derive(Clone, Debug)]
pub struct GenerationReport {
    pub outcome: GenerationOutcome,
    pub k0: K0Report,
    /// pieces normalized so that their top degree is 0
    pub pool: Vec<ProjComplex>,
    pub steps: Vec<GenerationStep>,
}

impl GenerationReport {
    pub fn generated(&self) -> bool {
        matches!(self.outcome, GenerationOutcome::Generated { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeAgreement {
    /// `Hom(Z, T[k]) = 0` for all `k > 0`
    pub left: bool,
    /// `Hom(Z, (j_!T_C ⊕ i_*T_B)[k]) = 0` for all `k > 0`
    pub right: bool,
}

#[derive(Clone, Debug)]
pub struct CoAisleReport {
    pub probes: Vec<ProbeAgreement>,
}

impl CoAisleReport {
    pub fn passed(&self) -> bool {
        self.probes.iter().all(|p| p.left == p.right)
    }

    pub fn first_violation(&self) -> Option<usize> {
        self.probes.iter().position(|p| p.left != p.right)
    }
}

#[derive(Clone, Debug)]
pub struct GlueCertificate {
    pub recollement: IdempotentRecollement,
    pub t_c: Vec<ProjComplex>,
    pub t_b: Vec<ProjComplex>,
    pub shortcut: bool,
    /// `j_!T_C`
    pub j_t_c: Vec<ProjComplex>,
    pub pieces: Vec<GluedPiece>,
    /// `j_!T_C ∪ {T̃_Y}`, zero objects dropped
    pub t: Vec<ProjComplex>,
    /// isomorphism classes of indecomposable summands of `⊕T` with multiplicities
    pub decomposition: Vec<(ProjComplex, usize)>,
    pub star: StarReport,
    pub presilting: NonPositivityReport,
    pub generation: GenerationReport,
    pub co_aisle: CoAisleReport,
}

impl GlueCertificate {
    pub fn passed(&self) -> bool {
        self.star.passed() && self.presilting.passed() && self.generation.generated() && self.generation.k0.unimodular && self.co_aisle.passed()
    }

    /// `P1[1] ⊕ P2 ⊕ P3`
    pub fn describe(&self) -> String {
        describe_classes(&self.decomposition)
    }
}

pub fn describe_classes(classes: &[(ProjComplex, usize)]) -> String {
    if classes.is_empty() {
        return String::from("0");
    }
    let parts: Vec<String> = classes
        .iter()
        .map(|(c, m)| if *m > 1 { format!("{}^{m}", c.describe()) } else { c.describe() })
        .collect();
    parts.join(" ⊕ ")
}

/// Indecomposable summands of `⊕ t` up to isomorphism, with multiplicities,
/// sorted by smallest vertex and lowest degree. Over `𝔽_p` the pieces are the
/// connected components of the minimal model.
pub fn summand_classes(t: &[ProjComplex]) -> Result<Vec<(ProjComplex, usize)>> {
    let Some(first) = t.first() else { return Ok(Vec::new()) };
    let alg = first.algebra().clone();
    let sum = ProjComplex::direct_sum_all(alg.clone(), t)?;
    if alg.field() == Field::Rational {
        return Ok(decompose(&sum)?.summands.into_iter().map(|s| (s.complex, s.multiplicity)).collect());
    }
    let mut out: Vec<(ProjComplex, usize)> = Vec::new();
    for c in split_connected(&minimize(&sum).complex) {
        match find_iso(&out.iter().map(|p| p.0.clone()).collect::<Vec<_>>(), &c)? {
            Some(i) => out[i].1 += 1,
            None => out.push((c, 1)),
        }
    }
    out.sort_by_key(|(c, _)| (sort_key(c), c.lo()));
    Ok(out)
}

fn sort_key(c: &ProjComplex) -> usize {
    c.degrees().flat_map(|n| c.component(n).iter().copied()).min().unwrap_or(usize::MAX)
}

fn find_iso(pool: &[ProjComplex], x: &ProjComplex) -> Result<Option<usize>> {
    let shape = x.graded_multiset();
    for (i, p) in pool.iter().enumerate() {
        if p.graded_multiset() == shape && is_isomorphic(p, x, &IsoOptions::default())?.isomorphic {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Whether two sets have the same indecomposable summands with the same
/// multiplicities.
pub fn same_decomposition(a: &[ProjComplex], b: &[ProjComplex]) -> Result<bool> {
    let (da, db) = (summand_classes(a)?, summand_classes(b)?);
    if da.len() != db.len() {
        return Ok(false);
    }
    let pool: Vec<ProjComplex> = db.iter().map(|p| p.0.clone()).collect();
    let mut used = alloc::vec![false; db.len()];
    for (c, m) in &da {
        match find_iso(&pool, c)? {
            Some(i) if !used[i] && db[i].1 == *m => used[i] = true,
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Whether `add(⊕a) = add(⊕b)`.
pub fn add_equivalent(a: &[ProjComplex], b: &[ProjComplex]) -> Result<bool> {
    let (da, db) = (summand_classes(a)?, summand_classes(b)?);
    let pa: Vec<ProjComplex> = da.into_iter().map(|p| p.0).collect();
    let pb: Vec<ProjComplex> = db.into_iter().map(|p| p.0).collect();
    for x in &pa {
        if find_iso(&pb, x)?.is_none() {
            return Ok(false);
        }
    }
    for x in &pb {
        if find_iso(&pa, x)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_inputs(rec: &IdempotentRecollement, t_c: &[ProjComplex], t_b: &[ProjComplex]) -> Result<()> {
    if t_c.iter().any(|x| x.algebra() != &rec.c) || t_b.iter().any(|x| x.algebra() != &rec.b) {
        return Err(Error::AlgebraMismatch);
    }
    if !is_nonpositive(t_c)?.passed() {
        return Err(Error::NotNonPositive("T_C"));
    }
    if !is_nonpositive(t_b)?.passed() {
        return Err(Error::NotNonPositive("T_B"));
    }
    Ok(())
}

/// Glues `T_C` and `T_B`: for each `T_Y ∈ T_B`, `T̃_Y` is the cocone of the
/// `susp(j_!T_C)[1]`-envelope of `i_*T_Y`, and `T = j_!T_C ∪ {T̃_Y}`.
pub fn glue(rec: &IdempotentRecollement, t_c: &[ProjComplex], t_b: &[ProjComplex], opts: &GlueOptions) -> Result<GlueCertificate> {
    check_inputs(rec, t_c, t_b)?;
    let j_t_c = t_c.iter().map(|x| rec.j_lower_shriek(x)).collect::<Result<Vec<_>>>()?;
    let target = shifted_targets(&j_t_c)?;
    let mut pieces = Vec::new();
    for (i, y) in t_b.iter().enumerate() {
        let m = rec.i_star(y)?;
        let env = susp_envelope_on(&m, &target)?;
        let xm = minimize(&env.triangle.x);
        let to_m = env.triangle.u.compose(&xm.from_min)?;
        pieces.push(GluedPiece {
            input: i,
            m,
            t_tilde: xm.complex,
            u_shifted: env.u.clone(),
            to_m,
            to_u: env.map,
            layers: env.layers,
        });
    }
    certify(rec, t_c, t_b, false, j_t_c, pieces, opts)
}

/// The shortcut for `T_C = {eAe}` and `T_B` in degrees `≤ 0`: split the
/// minimal model of `i_*(⊕T_B)` into its `(1-e)A`-subcomplex `T̃` and the
/// quotient `U[1]` in `add(eA)`.
pub fn glue_shortcut(rec: &IdempotentRecollement, t_b: &[ProjComplex], opts: &GlueOptions) -> Result<GlueCertificate> {
    let c = rec.c.clone();
    let c_stalk = ProjComplex::stalk_sum(c.clone(), &(0..c.vertex_count()).collect::<Vec<_>>(), 0);
    let t_c = alloc::vec![c_stalk];
    check_inputs(rec, &t_c, t_b)?;
    for (i, y) in t_b.iter().enumerate() {
        if minimize(y).complex.hi().is_some_and(|h| h > 0) {
            return Err(Error::ShortcutInapplicable(format!("T_B[{i}] has components in positive degrees")));
        }
    }
    let j_t_c = t_c.iter().map(|x| rec.j_lower_shriek(x)).collect::<Result<Vec<_>>>()?;
    let mut pieces = Vec::new();
    if !t_b.is_empty() {
        let sum = ProjComplex::direct_sum_all(rec.b.clone(), t_b)?;
        let p = rec.i_star(&sum)?;
        let (sub, sub_picks) = p.restrict(|_, _, v| !rec.in_subset(v));
        let (quot, quot_picks) = p.restrict(|_, _, v| rec.in_subset(v));
        let alg = p.algebra();
        let mut inc = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for n in p.degrees() {
            let all: Vec<usize> = (0..p.component(n).len()).collect();
            let id = PathMatrix::identity(alg, p.component(n));
            inc.insert(n, id.select(&all, &sub_picks[&n]));
            proj.insert(n, id.select(&quot_picks[&n], &all));
        }
        let to_m = ChainMap::new(sub.clone(), p.clone(), inc)?;
        let to_u = ChainMap::new(p.clone(), quot.clone(), proj)?;
        pieces.push(GluedPiece {
            input: 0,
            m: p,
            t_tilde: sub,
            u_shifted: quot,
            to_m,
            to_u,
            layers: Vec::new(),
        });
    }
    certify(rec, &t_c, t_b, true, j_t_c, pieces, opts)
}

fn shifted_targets(j_t_c: &[ProjComplex]) -> Result<Vec<(usize, ProjComplex)>> {
    let shifted: Vec<ProjComplex> = j_t_c.iter().map(|x| x.shift(1)).collect();
    generator_pieces(&shifted)
}

fn certify(
    rec: &IdempotentRecollement,
    t_c: &[ProjComplex],
    t_b: &[ProjComplex],
    shortcut: bool,
    j_t_c: Vec<ProjComplex>,
    pieces: Vec<GluedPiece>,
    opts: &GlueOptions,
) -> Result<GlueCertificate> {
    let t: Vec<ProjComplex> = j_t_c
        .iter()
        .cloned()
        .chain(pieces.iter().map(|p| p.t_tilde.clone()))
        .filter(|x| !x.is_zero())
        .collect();
    let decomposition = summand_classes(&t)?;
    let presilting = is_nonpositive(&t)?;
    let generation = check_generation(&t, opts.depth)?;
    let mut cert = GlueCertificate {
        recollement: rec.clone(),
        t_c: t_c.to_vec(),
        t_b: t_b.to_vec(),
        shortcut,
        j_t_c,
        pieces,
        t,
        decomposition,
        star: StarReport {
            trace_failure: None,
            orthogonality_witness: None,
        },
        presilting,
        generation,
        co_aisle: CoAisleReport { probes: Vec::new() },
    };
    cert.star = check_star_condition(&cert)?;
    let probes = default_probes(&cert, opts.random_probes, opts.seed)?;
    cert.co_aisle = check_co_aisle_agreement(&cert, &probes)?;
    Ok(cert)
}

/// Re-verifies condition (⋆) from the stored triangles: `U[1]` lies in
/// `add(eA)` with an envelope trace in non-negative shifts of
/// `j_!T_C[1]` (for the shortcut: in degrees `≤ -1`), and
/// `Hom(T̃, j_!T_C[k]) = 0` for `k ≥ 1`.
pub fn check_star_condition(cert: &GlueCertificate) -> Result<StarReport> {
    let rec = &cert.recollement;
    let target = shifted_targets(&cert.j_t_c)?;
    let mut report = StarReport {
        trace_failure: None,
        orthogonality_witness: None,
    };
    for (i, p) in cert.pieces.iter().enumerate() {
        let u = &p.u_shifted;
        let outside = u.degrees().any(|n| u.component(n).iter().any(|&v| !rec.in_subset(v)));
        let failure = if outside {
            Some(String::from("U has a summand outside add(eA)"))
        } else if cert.shortcut && u.hi().is_some_and(|h| h > -1) {
            Some(String::from("U[1] has components in degrees above -1"))
        } else if p.layers.iter().any(|l| l.shift < 0 || l.summands.iter().any(|s| s.t_index >= cert.j_t_c.len())) {
            Some(String::from("envelope trace leaves susp(j_!T_C)[1]"))
        } else {
            None
        };
        if let Some(f) = failure {
            report.trace_failure.get_or_insert((i, f));
        }
        if report.orthogonality_witness.is_none() {
            if let Some((ti, k)) = right_orthogonality_witness(&p.t_tilde, &target)? {
                report.orthogonality_witness = Some((i, ti, k + 1));
            }
        }
    }
    Ok(report)
}

/// The non-positivity report of `T`.
pub fn check_presilting(t: &[ProjComplex]) -> Result<NonPositivityReport> {
    is_nonpositive(t)
}

fn normalize(x: &ProjComplex) -> ProjComplex {
    match x.hi() {
        Some(h) => x.shift(h),
        None => x.clone(),
    }
}

fn pieces_of(x: &ProjComplex) -> Result<Vec<ProjComplex>> {
    if x.algebra().field() == Field::Rational {
        Ok(decompose(x)?.summands.into_iter().map(|s| s.complex).collect())
    } else {
        Ok(split_connected(&minimize(x).complex))
    }
}

/// K₀ class of `x`: alternating sum of multiplicities of each `P_v`.
pub fn k0_class(x: &ProjComplex) -> Vec<i64> {
    let mut out = alloc::vec![0i64; x.algebra().vertex_count()];
    for n in x.degrees() {
        let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        for &v in x.component(n) {
            out[v] += sign;
        }
    }
    out
}

/// Rank of the integer row lattice and whether it is all of `ℤ^n`
/// (equivalently, the maximal minors have gcd 1).
pub fn lattice_rank(rows: &[Vec<i64>], n: usize) -> (usize, bool) {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut rank = 0;
    let mut unit_pivots = true;
    for col in 0..n {
        // Euclid on the column below `rank` until one nonzero entry remains
        loop {
            let nz: Vec<usize> = (rank..m.len()).filter(|&r| m[r][col] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&r) = nz.first() {
                    m.swap(rank, r);
                    if m[rank][col].abs() != 1 {
                        unit_pivots = false;
                    }
                    rank += 1;
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&r| m[r][col].abs()).unwrap();
            for &r in &nz {
                if r != p {
                    let q = m[r][col] / m[p][col];
                    let pivot_row = m[p].clone();
                    for (a, b) in m[r].iter_mut().zip(&pivot_row) {
                        *a -= q * b;
                    }
                }
            }
        }
    }
    (rank, rank == n && unit_pivots)
}

/// Depth-bounded search for every `P_v` in the thick closure of `T`:
/// starting from the indecomposable pieces of `T` (up to shift), repeatedly
/// adjoin the pieces of cones of Hom-basis maps between pool objects.
pub fn check_generation(t: &[ProjComplex], depth: usize) -> Result<GenerationReport> {
    let mut pool: Vec<ProjComplex> = Vec::new();
    let n = t.first().map_or(0, |x| x.algebra().vertex_count());
    for x in t {
        for p in pieces_of(x)? {
            let p = normalize(&p);
            if find_iso(&pool, &p)?.is_none() {
                pool.push(p);
            }
        }
    }
    let matrix: Vec<Vec<i64>> = pool.iter().map(k0_class).collect();
    let (rank, unimodular) = lattice_rank(&matrix, n);
    let k0 = K0Report { matrix, rank, unimodular };
    let found_all = |pool: &[ProjComplex]| -> Option<Vec<usize>> {
        (0..n)
            .map(|v| pool.iter().position(|p| p.size() == 1 && p.component(0) == [v]))
            .collect()
    };
    if !unimodular || n == 0 {
        let outcome = if n == 0 { GenerationOutcome::Inconclusive } else { GenerationOutcome::NotGenerated };
        return Ok(GenerationReport {
            outcome,
            k0,
            pool,
            steps: Vec::new(),
        });
    }
    let mut steps = Vec::new();
    if let Some(found) = found_all(&pool) {
        return Ok(GenerationReport {
            outcome: GenerationOutcome::Generated { depth: 0, found },
            k0,
            pool,
            steps,
        });
    }
    for d in 1..=depth {
        let snapshot = pool.len();
        for i in 0..snapshot {
            for j in 0..snapshot {
                let (x, y) = (pool[i].clone(), pool[j].clone());
                let Some((lo, hi)) = support_window(&x, &y) else { continue };
                for k in lo..=hi {
                    for (b, rep) in hom_basis(&x, &y, k)?.representatives.iter().enumerate() {
                        let c = cone(rep)?.z;
                        let mut produced = Vec::new();
                        for p in pieces_of(&c)? {
                            let p = normalize(&p);
                            if find_iso(&pool, &p)?.is_none() {
                                produced.push(pool.len());
                                pool.push(p);
                            }
                        }
                        if produced.is_empty() {
                            continue;
                        }
                        steps.push(GenerationStep {
                            depth: d,
                            source: i,
                            target: j,
                            shift: k,
                            basis_index: b,
                            produced,
                        });
                        if let Some(found) = found_all(&pool) {
                            return Ok(GenerationReport {
                                outcome: GenerationOutcome::Generated { depth: d, found },
                                k0,
                                pool,
                                steps,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(GenerationReport {
        outcome: GenerationOutcome::Inconclusive,
        k0,
        pool,
        steps,
    })
}

fn vanishes_above_zero(z: &ProjComplex, objs: &[ProjComplex]) -> Result<bool> {
    for x in objs {
        let Some((_, hi)) = support_window(z, x) else { continue };
        for k in 1..=hi {
            if hom_dim(z, x, k)? != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// For each probe `Z`, compares `Hom(Z, T[>0]) = 0` with
/// `Hom(Z, (j_!T_C ⊕ i_*T_B)[>0]) = 0`.
pub fn check_co_aisle_agreement(cert: &GlueCertificate, probes: &[ProjComplex]) -> Result<CoAisleReport> {
    let s: Vec<ProjComplex> = cert
        .j_t_c
        .iter()
        .cloned()
        .chain(cert.t_b.iter().map(|y| cert.recollement.i_star(y)).collect::<Result<Vec<_>>>()?)
        .collect();
    let mut out = Vec::new();
    for z in probes {
        out.push(ProbeAgreement {
            left: vanishes_above_zero(z, &cert.t)?,
            right: vanishes_above_zero(z, &s)?,
        });
    }
    Ok(CoAisleReport { probes: out })
}

/// All `P_v`, the objects of `T`, each `i_*T_Y` and `count` seeded random complexes.
pub fn default_probes(cert: &GlueCertificate, count: usize, seed: u64) -> Result<Vec<ProjComplex>> {
    let alg = cert.recollement.algebra.clone();
    let mut probes: Vec<ProjComplex> = (0..alg.vertex_count()).map(|v| ProjComplex::stalk(alg.clone(), v, 0)).collect();
    probes.extend(cert.t.iter().cloned());
    for y in &cert.t_b {
        probes.push(cert.recollement.i_star(y)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = ComplexParams::default();
    for _ in 0..count {
        probes.push(random_complex(&mut rng, &alg, &params));
    }
    Ok(probes)
}
