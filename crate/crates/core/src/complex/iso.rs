use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{minimize, ChainMap, Minimized, ProjComplex};
use crate::hom::hom_basis;
use crate::linalg::Scalar;
use crate::Result;

#[derive(Clone, Copy, Debug)]
pub struct IsoOptions {
    pub seed: u64,
    /// random combinations tried after the basis elements themselves
    pub trials: usize,
    /// coefficients are drawn from `[-bound, bound]`
    pub bound: i64,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions {
            seed: 0x5117,
            trials: 64,
            bound: 7,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IsoResult {
    pub isomorphic: bool,
    /// `false` only for a negative answer that rests on random sampling
    pub certain: bool,
    pub source_min: Minimized,
    pub target_min: Minimized,
    /// An isomorphism of complexes between the minimal models.
    pub witness: Option<ChainMap>,
}

impl IsoResult {
    /// The witness transported to a homotopy equivalence `X → Y`.
    pub fn witness_between_originals(&self) -> Option<ChainMap> {
        let w = self.witness.as_ref()?;
        let f = w.compose(&self.source_min.to_min).ok()?;
        self.target_min.from_min.compose(&f).ok()
    }
}

/// Decides `X ≅ Y` in `K^b(proj-A)`.
///
/// Minimal models are isomorphic in `K^b` iff they are isomorphic as
/// complexes, and a chain map between minimal complexes is an isomorphism iff
/// it is invertible modulo the radical in each degree. Candidates are the Hom
/// basis and random integer combinations of it, so a positive answer is
/// always certified by a witness and a negative one is certain whenever the
/// graded multisets differ.
pub fn is_isomorphic(x: &ProjComplex, y: &ProjComplex, opts: &IsoOptions) -> Result<IsoResult> {
    x.same_algebra(y)?;
    let source_min = minimize(x);
    let target_min = minimize(y);
    let (a, b) = (&source_min.complex, &target_min.complex);
    let mut out = IsoResult {
        isomorphic: false,
        certain: true,
        witness: None,
        source_min: source_min.clone(),
        target_min: target_min.clone(),
    };
    let mut ma = a.graded_multiset();
    let mut mb = b.graded_multiset();
    ma.sort_unstable();
    mb.sort_unstable();
    if ma != mb {
        return Ok(out);
    }
    if a.is_zero() {
        out.isomorphic = true;
        out.witness = Some(ChainMap::zero(a, b));
        return Ok(out);
    }
    let basis = hom_basis(a, b, 0)?;
    if let Some(w) = find_invertible(&basis, opts) {
        out.isomorphic = true;
        out.witness = Some(w);
    } else {
        out.certain = basis.dim() == 0;
    }
    Ok(out)
}

fn find_invertible(basis: &crate::hom::HomBasis, opts: &IsoOptions) -> Option<ChainMap> {
    if let Some(f) = basis.representatives.iter().find(|f| f.is_degreewise_invertible()) {
        return Some(f.clone());
    }
    if basis.dim() < 2 {
        return None;
    }
    let field = basis.source.algebra().field();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.trials {
        let coeffs: Vec<Scalar> = (0..basis.dim())
            .map(|_| field.from_i64(crate::random::uniform_i64(&mut rng, -opts.bound, opts.bound)))
            .collect();
        let f = basis.combination(&coeffs);
        if f.is_degreewise_invertible() {
            return Some(f);
        }
    }
    None
}
