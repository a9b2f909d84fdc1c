use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{ChainMap, PathMatrix, ProjComplex};
use crate::quiver::{AlgebraElement, PathAlgebra};
use crate::{Error, Result};

fn dual_matrix(alg: &PathAlgebra, op: &PathAlgebra, m: &PathMatrix) -> PathMatrix {
    let mut out = PathMatrix::zero(m.cols(), m.rows());
    for i in 0..m.rows().len() {
        for j in 0..m.cols().len() {
            let mut e = AlgebraElement::zero();
            for (p, c) in m.get(i, j).terms() {
                e.add_term(alg.opposite_path(op, p), c.clone());
            }
            out.set(j, i, e);
        }
    }
    out
}

/// `Hom_A(X, A)` as a complex over `op = A^op`: degree `n` goes to `-n` and
/// each differential is transposed with its paths reversed. Applying it twice
/// returns `X`.
pub fn dual_complex(x: &ProjComplex, op: &Arc<PathAlgebra>) -> Result<ProjComplex> {
    let alg = x.algebra();
    if op.field() != alg.field() || op.quiver() != &alg.quiver().opposite() {
        return Err(Error::AlgebraMismatch);
    }
    let Some(hi) = x.hi() else {
        return Ok(ProjComplex::zero(op.clone()));
    };
    let comps: Vec<Vec<usize>> = (x.degrees()).rev().map(|n| x.component(n).to_vec()).collect();
    let diffs = (x.degrees().rev().skip(1))
        .map(|n| dual_matrix(alg, op, &x.differential_or_zero(n)))
        .collect();
    Ok(ProjComplex::from_parts(op.clone(), -hi, comps, diffs))
}

/// The dual of `f: X → Y`, a map `Y* → X*`.
pub fn dual_map(f: &ChainMap, op: &Arc<PathAlgebra>) -> Result<ChainMap> {
    let alg = f.source().algebra();
    let src = dual_complex(f.target(), op)?;
    let tgt = dual_complex(f.source(), op)?;
    let comps = f
        .components()
        .iter()
        .map(|(&n, m)| (-n, dual_matrix(alg, op, m)))
        .collect();
    Ok(ChainMap::from_parts(src, tgt, comps))
}
