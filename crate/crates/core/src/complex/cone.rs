use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{ChainMap, PathMatrix, ProjComplex};
use crate::Result;

/// A distinguished triangle `X --u--> Y --v--> Z --w--> X[1]` realized by
/// explicit complexes and chain maps.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub x: ProjComplex,
    pub y: ProjComplex,
    pub z: ProjComplex,
    pub u: ChainMap,
    pub v: ChainMap,
    pub w: ChainMap,
}

/// Mapping cone: `C^n = X^{n+1} ⊕ Y^n`, `d = [[-d_X, 0], [f, d_Y]]`.
///
/// Returns the triangle `X --f--> Y --ι--> C(f) --π--> X[1]`.
pub fn cone(f: &ChainMap) -> Result<Triangle> {
    let x = f.source();
    let y = f.target();
    x.same_algebra(y)?;
    let alg = x.algebra().clone();
    let (lo, hi) = match (support(x, -1), support(y, 0)) {
        (None, None) => {
            let z = ProjComplex::zero(alg);
            return Ok(Triangle {
                x: x.clone(),
                y: y.clone(),
                u: f.clone(),
                v: ChainMap::zero(y, &z),
                w: ChainMap::zero(&z, &x.shift(1)),
                z,
            });
        }
        (a, b) => {
            let lo = a.into_iter().chain(b).map(|r| r.0).min().unwrap();
            let hi = a.into_iter().chain(b).map(|r| r.1).max().unwrap();
            (lo, hi)
        }
    };
    let comps: Vec<Vec<usize>> = (lo..=hi).map(|n| [x.component(n + 1), y.component(n)].concat()).collect();
    let diffs: Vec<PathMatrix> = (lo..hi)
        .map(|n| {
            PathMatrix::blocks(
                &[x.component(n + 2), y.component(n + 1)],
                &[x.component(n + 1), y.component(n)],
                |i, j| match (i, j) {
                    (0, 0) => x.differential(n + 1).map(PathMatrix::neg),
                    (1, 0) => f.component_ref(n + 1).cloned(),
                    (1, 1) => y.differential(n).cloned(),
                    _ => None,
                },
            )
        })
        .collect();
    let z = ProjComplex::from_parts(alg.clone(), lo, comps, diffs);
    let x1 = x.shift(1);
    let mut v = BTreeMap::new();
    let mut w = BTreeMap::new();
    for n in lo..=hi {
        let (xa, yb) = (x.component(n + 1), y.component(n));
        if !yb.is_empty() {
            v.insert(
                n,
                PathMatrix::blocks(&[xa, yb], &[yb], |i, _| (i == 1).then(|| PathMatrix::identity(&alg, yb))),
            );
        }
        if !xa.is_empty() {
            w.insert(
                n,
                PathMatrix::blocks(&[xa], &[xa, yb], |_, j| (j == 0).then(|| PathMatrix::identity(&alg, xa))),
            );
        }
    }
    Ok(Triangle {
        x: x.clone(),
        y: y.clone(),
        u: f.clone(),
        v: ChainMap::from_parts(y.clone(), z.clone(), v),
        w: ChainMap::from_parts(z.clone(), x1, w),
        z,
    })
}

/// `cocone(f) := C(f)[-1]`, as the triangle `cocone(f) --p--> X --f--> Y --> cocone(f)[1]`.
///
/// Concretely `cocone^n = X^n ⊕ Y^{n-1}` with `d = [[d_X, 0], [-f, -d_Y]]`
/// and `p = (id, 0)`.
pub fn cocone(f: &ChainMap) -> Result<Triangle> {
    let t = cone(f)?;
    let k = t.z.shift(-1);
    let x = f.source().clone();
    // the projection C(f) → X[1] shifted back by one is the projection k → X
    let p = t.w.shift(-1).retarget(k.clone(), x.clone());
    debug_assert!(p.check().is_ok());
    Ok(Triangle {
        x: k,
        y: x,
        z: f.target().clone(),
        u: p,
        v: f.clone(),
        w: t.v.retarget(f.target().clone(), t.z.clone()),
    })
}

fn support(c: &ProjComplex, offset: i32) -> Option<(i32, i32)> {
    Some((c.lo()? + offset, c.hi()? + offset))
}
