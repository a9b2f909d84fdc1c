use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{PathMatrix, ProjComplex};
use crate::linalg::Scalar;
use crate::{Error, Result};

/// A degree-0 map of complexes `f: X → Y` (components `f^n: X^n → Y^n`).
///
/// Whether it commutes with the differentials is checked by
/// [`ChainMap::check`]; constructors used inside the crate produce chain maps
/// by construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainMap {
    source: ProjComplex,
    target: ProjComplex,
    comps: BTreeMap<i32, PathMatrix>,
}

impl ChainMap {
    /// Validated constructor: shapes, Hom spaces and commutation.
    pub fn new(source: ProjComplex, target: ProjComplex, comps: BTreeMap<i32, PathMatrix>) -> Result<Self> {
        source.same_algebra(&target)?;
        let alg = source.algebra().clone();
        let mut clean = BTreeMap::new();
        for (n, m) in comps {
            if m.rows() != target.component(n) || m.cols() != source.component(n) {
                if m.is_zero() {
                    continue;
                }
                return Err(Error::Shape {
                    degree: n,
                    detail: alloc::string::String::from("chain map component has the wrong shape"),
                });
            }
            if let Some((row, col)) = m.first_misplaced(&alg) {
                return Err(Error::EntryOutsideHomSpace { degree: n, row, col });
            }
            if !m.is_zero() {
                clean.insert(n, m);
            }
        }
        let f = ChainMap {
            source,
            target,
            comps: clean,
        };
        f.check()?;
        Ok(f)
    }

    pub(crate) fn from_parts(source: ProjComplex, target: ProjComplex, comps: BTreeMap<i32, PathMatrix>) -> Self {
        let comps = comps
            .into_iter()
            .filter(|(n, m)| !m.is_zero() && !source.component(*n).is_empty() && !target.component(*n).is_empty())
            .collect();
        let f = ChainMap { source, target, comps };
        debug_assert!(f.check().is_ok(), "internal construction produced a non-chain map");
        f
    }

    /// Builds a map from components without checking commutation.
    pub(crate) fn graded(source: ProjComplex, target: ProjComplex, comps: BTreeMap<i32, PathMatrix>) -> Self {
        let comps = comps.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        ChainMap { source, target, comps }
    }

    pub fn zero(source: &ProjComplex, target: &ProjComplex) -> Self {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            comps: BTreeMap::new(),
        }
    }

    pub fn identity(x: &ProjComplex) -> Self {
        let alg = x.algebra();
        let comps = x
            .degrees()
            .filter(|&n| !x.component(n).is_empty())
            .map(|n| (n, PathMatrix::identity(alg, x.component(n))))
            .collect();
        ChainMap {
            source: x.clone(),
            target: x.clone(),
            comps,
        }
    }

    pub fn source(&self) -> &ProjComplex {
        &self.source
    }

    pub fn target(&self) -> &ProjComplex {
        &self.target
    }

    /// `f^n`, zero-filled where not stored.
    pub fn component(&self, n: i32) -> PathMatrix {
        self.comps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| PathMatrix::zero(self.target.component(n), self.source.component(n)))
    }

    pub fn component_ref(&self, n: i32) -> Option<&PathMatrix> {
        self.comps.get(&n)
    }

    pub fn components(&self) -> &BTreeMap<i32, PathMatrix> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Verifies `d_Y ∘ f = f ∘ d_X` in every degree.
    pub fn check(&self) -> Result<()> {
        let alg = self.source.algebra();
        let lo = self.source.lo().into_iter().chain(self.target.lo()).min();
        let hi = self.source.hi().into_iter().chain(self.target.hi()).max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Ok(());
        };
        for n in lo - 1..=hi {
            let left = match (self.target.differential(n), self.comps.get(&n)) {
                (Some(d), Some(f)) => d.compose(alg, f),
                _ => PathMatrix::zero(self.target.component(n + 1), self.source.component(n)),
            };
            let right = match (self.comps.get(&(n + 1)), self.source.differential(n)) {
                (Some(f), Some(d)) => f.compose(alg, d),
                _ => PathMatrix::zero(self.target.component(n + 1), self.source.component(n)),
            };
            if let Some((row, col)) = left.sub(&right).first_nonzero() {
                return Err(Error::NotAChainMap { degree: n, row, col });
            }
        }
        Ok(())
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &ChainMap) -> Result<ChainMap> {
        if g.target != self.source {
            return Err(Error::ComplexMismatch);
        }
        let alg = self.source.algebra();
        let comps = g
            .comps
            .iter()
            .filter_map(|(n, gm)| self.comps.get(n).map(|fm| (*n, fm.compose(alg, gm))))
            .collect();
        Ok(ChainMap::graded(g.source.clone(), self.target.clone(), comps))
    }

    fn combine(&self, other: &ChainMap, neg: bool) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ComplexMismatch);
        }
        let mut comps = self.comps.clone();
        for (n, m) in &other.comps {
            let m = if neg { m.neg() } else { m.clone() };
            let e = match comps.remove(n) {
                Some(x) => x.add(&m),
                None => m,
            };
            comps.insert(*n, e);
        }
        Ok(ChainMap::graded(self.source.clone(), self.target.clone(), comps))
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(other, true)
    }

    pub fn scale(&self, k: &Scalar) -> ChainMap {
        ChainMap::graded(
            self.source.clone(),
            self.target.clone(),
            self.comps.iter().map(|(n, m)| (*n, m.scale(k))).collect(),
        )
    }

    /// `f[k]: X[k] → Y[k]`, `(f[k])^n = f^{n+k}`.
    pub fn shift(&self, k: i32) -> ChainMap {
        ChainMap {
            source: self.source.shift(k),
            target: self.target.shift(k),
            comps: self.comps.iter().map(|(n, m)| (n - k, m.clone())).collect(),
        }
    }

    /// Same components viewed between other (equal-shaped) complexes.
    pub(crate) fn retarget(&self, source: ProjComplex, target: ProjComplex) -> ChainMap {
        ChainMap::graded(source, target, self.comps.clone())
    }

    /// `(f, g)^t: X → Y ⊕ Z` for maps out of a common source.
    pub fn stack(maps: &[&ChainMap]) -> Result<ChainMap> {
        let first = maps.first().ok_or_else(|| Error::Internal("empty stack".into()))?;
        let source = first.source.clone();
        let mut target = ProjComplex::zero(source.algebra().clone());
        for m in maps {
            if m.source != source {
                return Err(Error::ComplexMismatch);
            }
            target = target.direct_sum(&m.target)?;
        }
        let comps = source
            .degrees()
            .map(|n| {
                let rows: Vec<&[usize]> = maps.iter().map(|m| m.target.component(n)).collect();
                let mat = PathMatrix::blocks(&rows, &[source.component(n)], |i, _| maps[i].comps.get(&n).cloned());
                (n, mat)
            })
            .collect();
        Ok(ChainMap::graded(source, target, comps))
    }

    /// `(f, g): X ⊕ Y → Z` for maps into a common target.
    pub fn row(maps: &[&ChainMap]) -> Result<ChainMap> {
        let first = maps.first().ok_or_else(|| Error::Internal("empty row".into()))?;
        let target = first.target.clone();
        let mut source = ProjComplex::zero(target.algebra().clone());
        for m in maps {
            if m.target != target {
                return Err(Error::ComplexMismatch);
            }
            source = source.direct_sum(&m.source)?;
        }
        let comps = source
            .degrees()
            .map(|n| {
                let cols: Vec<&[usize]> = maps.iter().map(|m| m.source.component(n)).collect();
                let mat = PathMatrix::blocks(&[target.component(n)], &cols, |_, j| maps[j].comps.get(&n).cloned());
                (n, mat)
            })
            .collect();
        Ok(ChainMap::graded(source, target, comps))
    }

    /// Inclusion of the `index`-th summand into a direct sum built with
    /// [`ProjComplex::direct_sum`] from `parts`.
    pub fn summand_inclusion(parts: &[&ProjComplex], index: usize) -> Result<ChainMap> {
        let alg = parts
            .first()
            .ok_or_else(|| Error::Internal("no summands".into()))?
            .algebra()
            .clone();
        let sum = ProjComplex::direct_sum_all(alg.clone(), parts.iter().copied())?;
        let x = parts[index];
        let comps = x
            .degrees()
            .map(|n| {
                let rows: Vec<&[usize]> = parts.iter().map(|p| p.component(n)).collect();
                let mat = PathMatrix::blocks(&rows, &[x.component(n)], |i, _| {
                    (i == index).then(|| PathMatrix::identity(&alg, x.component(n)))
                });
                (n, mat)
            })
            .collect();
        Ok(ChainMap::graded(x.clone(), sum, comps))
    }

    /// Projection of a direct sum of `parts` onto the `index`-th summand.
    pub fn summand_projection(parts: &[&ProjComplex], index: usize) -> Result<ChainMap> {
        let alg = parts
            .first()
            .ok_or_else(|| Error::Internal("no summands".into()))?
            .algebra()
            .clone();
        let sum = ProjComplex::direct_sum_all(alg.clone(), parts.iter().copied())?;
        let x = parts[index];
        let comps = x
            .degrees()
            .map(|n| {
                let cols: Vec<&[usize]> = parts.iter().map(|p| p.component(n)).collect();
                let mat = PathMatrix::blocks(&[x.component(n)], &cols, |_, j| {
                    (j == index).then(|| PathMatrix::identity(&alg, x.component(n)))
                });
                (n, mat)
            })
            .collect();
        Ok(ChainMap::graded(sum, x.clone(), comps))
    }

    /// Whether every component is invertible modulo the radical, which for
    /// complexes of projectives over a finite-dimensional algebra makes the
    /// map an isomorphism of complexes.
    pub fn is_degreewise_invertible(&self) -> bool {
        let field = self.source.algebra().field();
        let lo = self.source.lo().into_iter().chain(self.target.lo()).min();
        let hi = self.source.hi().into_iter().chain(self.target.hi()).max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return true;
        };
        (lo..=hi).all(|n| {
            let (s, t) = (self.source.component(n), self.target.component(n));
            if s.len() != t.len() {
                return false;
            }
            if s.is_empty() {
                return true;
            }
            self.component(n).top(field).rank() == s.len()
        })
    }
}
