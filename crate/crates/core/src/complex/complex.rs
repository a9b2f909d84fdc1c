use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::PathMatrix;
use crate::quiver::PathAlgebra;
use crate::{Error, Result};

/// A bounded cochain complex of finitely generated projectives.
///
/// Component `n` is a list of vertices, one indecomposable summand `P_v`
/// each; the differential `d^n` has degree `+1`. Empty components at either
/// end are trimmed, so `lo`/`hi` are the true support.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProjComplex {
    algebra: Arc<PathAlgebra>,
    lo: i32,
    comps: Vec<Vec<usize>>,
    /// `diffs[i]` maps `comps[i]` to `comps[i + 1]`.
    diffs: Vec<PathMatrix>,
}

impl ProjComplex {
    pub fn zero(algebra: Arc<PathAlgebra>) -> Self {
        ProjComplex {
            algebra,
            lo: 0,
            comps: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// `P_v` concentrated in degree `degree`.
    pub fn stalk(algebra: Arc<PathAlgebra>, v: usize, degree: i32) -> Self {
        Self::stalk_sum(algebra, &[v], degree)
    }

    pub fn stalk_sum(algebra: Arc<PathAlgebra>, obj: &[usize], degree: i32) -> Self {
        let mut c = ProjComplex {
            algebra,
            lo: degree,
            comps: alloc::vec![obj.to_vec()],
            diffs: Vec::new(),
        };
        c.trim();
        c
    }

    /// Validated constructor from per-degree components and differentials.
    ///
    /// Missing differentials are zero. Fails on shape mismatches, entries
    /// outside their Hom space, or `d∘d ≠ 0` (reporting the first failure).
    pub fn new(
        algebra: Arc<PathAlgebra>,
        components: BTreeMap<i32, Vec<usize>>,
        differentials: BTreeMap<i32, PathMatrix>,
    ) -> Result<Self> {
        let nv = algebra.vertex_count();
        for (&n, c) in &components {
            if let Some(&v) = c.iter().find(|&&v| v >= nv) {
                return Err(Error::Shape {
                    degree: n,
                    detail: format!("vertex index {v} out of range"),
                });
            }
        }
        let degrees = components
            .iter()
            .filter(|(_, c)| !c.is_empty())
            .map(|(&n, _)| n);
        let (lo, hi) = match (degrees.clone().min(), degrees.max()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => {
                if let Some((&n, _)) = differentials.iter().find(|(_, d)| !d.is_zero()) {
                    return Err(Error::Shape {
                        degree: n,
                        detail: String::from("nonzero differential on the zero complex"),
                    });
                }
                return Ok(Self::zero(algebra));
            }
        };
        let empty = Vec::new();
        let comp = |n: i32| components.get(&n).unwrap_or(&empty);
        for (&n, d) in &differentials {
            if d.rows() != comp(n + 1).as_slice() || d.cols() != comp(n).as_slice() {
                if d.rows().len() * d.cols().len() == 0 && comp(n + 1).len() * comp(n).len() == 0 {
                    continue;
                }
                return Err(Error::Shape {
                    degree: n,
                    detail: format!(
                        "differential is {}x{}, components are {}x{}",
                        d.rows().len(),
                        d.cols().len(),
                        comp(n + 1).len(),
                        comp(n).len()
                    ),
                });
            }
            if let Some((row, col)) = d.first_misplaced(&algebra) {
                return Err(Error::EntryOutsideHomSpace { degree: n, row, col });
            }
        }
        let comps: Vec<Vec<usize>> = (lo..=hi).map(|n| comp(n).clone()).collect();
        let diffs: Vec<PathMatrix> = (lo..hi)
            .map(|n| match differentials.get(&n) {
                Some(d) if d.rows() == comp(n + 1).as_slice() && d.cols() == comp(n).as_slice() => d.clone(),
                _ => PathMatrix::zero(comp(n + 1), comp(n)),
            })
            .collect();
        let c = ProjComplex {
            algebra,
            lo,
            comps,
            diffs,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    /// Unchecked constructor for internal use; trims and debug-asserts `d∘d = 0`.
    pub(crate) fn from_parts(algebra: Arc<PathAlgebra>, lo: i32, comps: Vec<Vec<usize>>, diffs: Vec<PathMatrix>) -> Self {
        debug_assert_eq!(diffs.len(), comps.len().saturating_sub(1));
        let mut c = ProjComplex {
            algebra,
            lo,
            comps,
            diffs,
        };
        c.trim();
        debug_assert!(c.check_square_zero().is_ok(), "internal construction produced d∘d ≠ 0");
        c
    }

    fn trim(&mut self) {
        while self.comps.last().is_some_and(Vec::is_empty) {
            self.comps.pop();
            self.diffs.pop();
        }
        while self.comps.first().is_some_and(Vec::is_empty) {
            self.comps.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        if self.comps.is_empty() {
            self.lo = 0;
            self.diffs.clear();
        }
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for i in 1..self.diffs.len() {
            let dd = self.diffs[i].compose(&self.algebra, &self.diffs[i - 1]);
            if let Some((row, col)) = dd.first_nonzero() {
                return Err(Error::NotAComplex {
                    degree: self.lo + i as i32 - 1,
                    row,
                    col,
                });
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        &self.algebra
    }

    pub fn same_algebra(&self, other: &ProjComplex) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Lowest nonzero degree (`None` for the zero complex).
    pub fn lo(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.lo)
    }

    pub fn hi(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.lo + self.comps.len() as i32 - 1)
    }

    /// Degrees `lo..=hi` (empty for the zero complex).
    pub fn degrees(&self) -> core::ops::Range<i32> {
        self.lo..self.lo + self.comps.len() as i32
    }

    pub fn component(&self, n: i32) -> &[usize] {
        let i = n - self.lo;
        if i < 0 {
            return &[];
        }
        self.comps.get(i as usize).map_or(&[], Vec::as_slice)
    }

    /// `d^n`, or `None` where it is necessarily zero.
    pub fn differential(&self, n: i32) -> Option<&PathMatrix> {
        let i = n - self.lo;
        if i < 0 {
            return None;
        }
        self.diffs.get(i as usize)
    }

    /// `d^n` as an explicit (possibly empty) matrix.
    pub fn differential_or_zero(&self, n: i32) -> PathMatrix {
        self.differential(n)
            .cloned()
            .unwrap_or_else(|| PathMatrix::zero(self.component(n + 1), self.component(n)))
    }

    /// Total number of indecomposable summands over all degrees.
    pub fn size(&self) -> usize {
        self.comps.iter().map(Vec::len).sum()
    }

    /// Multiset of `(degree, vertex)` pairs, sorted.
    pub fn graded_multiset(&self) -> Vec<(i32, usize)> {
        let mut out: Vec<(i32, usize)> = self
            .degrees()
            .flat_map(|n| self.component(n).iter().map(move |&v| (n, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// `X[k]`: `(X[k])^n = X^{n+k}` with differential `(-1)^k d`.
    pub fn shift(&self, k: i32) -> ProjComplex {
        ProjComplex {
            algebra: self.algebra.clone(),
            lo: if self.is_zero() { 0 } else { self.lo - k },
            comps: self.comps.clone(),
            diffs: self.diffs.iter().map(|d| d.signed(k)).collect(),
        }
    }

    /// Degreewise concatenation with block-diagonal differentials.
    pub fn direct_sum(&self, other: &ProjComplex) -> Result<ProjComplex> {
        self.same_algebra(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().unwrap().max(other.hi().unwrap());
        let comps: Vec<Vec<usize>> = (lo..=hi)
            .map(|n| [self.component(n), other.component(n)].concat())
            .collect();
        let diffs = (lo..hi)
            .map(|n| {
                PathMatrix::blocks(
                    &[self.component(n + 1), other.component(n + 1)],
                    &[self.component(n), other.component(n)],
                    |i, j| match (i, j) {
                        (0, 0) => self.differential(n).cloned(),
                        (1, 1) => other.differential(n).cloned(),
                        _ => None,
                    },
                )
            })
            .collect();
        Ok(ProjComplex::from_parts(self.algebra.clone(), lo, comps, diffs))
    }

    pub fn direct_sum_all<'a>(algebra: Arc<PathAlgebra>, items: impl IntoIterator<Item = &'a ProjComplex>) -> Result<ProjComplex> {
        let mut acc = ProjComplex::zero(algebra);
        for x in items {
            acc = acc.direct_sum(x)?;
        }
        Ok(acc)
    }

    /// Whether every differential entry lies in the radical.
    pub fn is_minimal(&self) -> bool {
        self.diffs.iter().all(|d| {
            (0..d.rows().len()).all(|i| (0..d.cols().len()).all(|j| d.rows()[i] != d.cols()[j] || d.get(i, j).is_zero()))
        })
    }

    /// Subcomplex or quotient spanned by selected summands in each degree.
    ///
    /// The caller guarantees the selection is closed under the differential
    /// in the required direction.
    pub(crate) fn restrict(&self, keep: impl Fn(i32, usize, usize) -> bool) -> (ProjComplex, BTreeMap<i32, Vec<usize>>) {
        let mut picks = BTreeMap::new();
        let mut comps = Vec::new();
        for n in self.degrees() {
            let idx: Vec<usize> = (0..self.component(n).len())
                .filter(|&i| keep(n, i, self.component(n)[i]))
                .collect();
            comps.push(idx.iter().map(|&i| self.component(n)[i]).collect::<Vec<_>>());
            picks.insert(n, idx);
        }
        let diffs = self
            .degrees()
            .take(self.comps.len().saturating_sub(1))
            .map(|n| self.differential_or_zero(n).select(&picks[&(n + 1)], &picks[&n]))
            .collect();
        (
            ProjComplex::from_parts(self.algebra.clone(), self.lo, comps, diffs),
            picks,
        )
    }

    /// Human readable summary such as `P1[1]` or `(P3 -ab-> P1)`.
    pub fn describe(&self) -> String {
        let alg = &self.algebra;
        if self.is_zero() {
            return String::from("0");
        }
        if self.comps.len() == 1 {
            let shift = -self.lo;
            let body = obj_name(alg, &self.comps[0]);
            let body = if self.comps[0].len() > 1 { format!("({body})") } else { body };
            return with_shift(body, shift);
        }
        if self.degrees().all(|n| self.differential(n).is_none_or(|d| d.is_zero())) {
            let mut stalks: Vec<(usize, i32)> = self.degrees().flat_map(|n| self.component(n).iter().map(move |&v| (v, n))).collect();
            stalks.sort_unstable();
            let parts: Vec<String> = stalks
                .into_iter()
                .map(|(v, n)| with_shift(format!("P{}", alg.vertex_label(v)), -n))
                .collect();
            return parts.join(" ⊕ ");
        }
        let hi = self.hi().unwrap();
        let mut s = String::new();
        for n in self.degrees() {
            s.push_str(&obj_name(alg, self.component(n)));
            if n < hi {
                let d = self.differential_or_zero(n);
                let label = if d.rows().len() == 1 && d.cols().len() == 1 {
                    alg.element_name(d.get(0, 0))
                } else {
                    String::from("d")
                };
                s.push_str(&format!(" -{label}-> "));
            }
        }
        with_shift(format!("({s})"), -hi)
    }
}

fn obj_name(alg: &PathAlgebra, obj: &[usize]) -> String {
    if obj.is_empty() {
        return String::from("0");
    }
    let parts: Vec<String> = obj.iter().map(|&v| format!("P{}", alg.vertex_label(v))).collect();
    parts.join("+")
}

fn with_shift(body: String, shift: i32) -> String {
    if shift == 0 {
        body
    } else {
        format!("{body}[{shift}]")
    }
}
