use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{ChainMap, PathMatrix, ProjComplex};

/// A minimal model together with mutually inverse homotopy equivalences.
#[derive(Clone, Debug)]
pub struct Minimized {
    pub complex: ProjComplex,
    /// `X → min`.
    pub to_min: ChainMap,
    /// `min → X`.
    pub from_min: ChainMap,
}

/// Gaussian elimination of every differential entry with a nonzero trivial
/// path coefficient.
///
/// Over an acyclic quiver `e_v A e_v = K`, so such an entry is a unit
/// `λ e_v: P_v → P_v` and the pair of summands it connects splits off as a
/// contractible complex. The total rank drops at each step, so the loop
/// terminates; the result has all differential entries in the radical.
pub fn minimize(x: &ProjComplex) -> Minimized {
    let alg = x.algebra().clone();
    let lo = x.lo().unwrap_or(0);
    let mut comps: Vec<Vec<usize>> = x.degrees().map(|n| x.component(n).to_vec()).collect();
    let mut diffs: Vec<PathMatrix> = x.degrees().skip(1).map(|n| x.differential_or_zero(n - 1)).collect();
    // from_min and to_min, keyed by degree; identity until touched
    let mut iota: BTreeMap<i32, PathMatrix> = BTreeMap::new();
    let mut proj: BTreeMap<i32, PathMatrix> = BTreeMap::new();
    for n in x.degrees() {
        iota.insert(n, PathMatrix::identity(&alg, x.component(n)));
        proj.insert(n, PathMatrix::identity(&alg, x.component(n)));
    }

    while let Some((i, r, c)) = find_unit(&diffs) {
        let n = lo + i as i32;
        let d = diffs[i].clone();
        let v = d.cols()[c];
        let lambda_inv = d.get(r, c).coefficient(v).expect("unit entry").inv().expect("nonzero");
        let keep_c: Vec<usize> = (0..comps[i].len()).filter(|&j| j != c).collect();
        let keep_r: Vec<usize> = (0..comps[i + 1].len()).filter(|&j| j != r).collect();
        let new_src: Vec<usize> = keep_c.iter().map(|&j| comps[i][j]).collect();
        let new_tgt: Vec<usize> = keep_r.iter().map(|&j| comps[i + 1][j]).collect();

        let mut reduced = PathMatrix::zero(&new_tgt, &new_src);
        for (a, &ra) in keep_r.iter().enumerate() {
            let dac = d.get(ra, c);
            for (b, &cb) in keep_c.iter().enumerate() {
                let mut e = d.get(ra, cb).clone();
                if !dac.is_zero() {
                    let t = alg.multiply(dac, d.get(r, cb)).scale(&lambda_inv);
                    e = e.sub(&t);
                }
                reduced.set(a, b, e);
            }
        }

        // step maps: iota_s: new → old, proj_s: old → new
        let mut iota_n = PathMatrix::zero(&comps[i], &new_src);
        for (b, &cb) in keep_c.iter().enumerate() {
            iota_n.set(cb, b, alg.idempotent(comps[i][cb]));
            let t = d.get(r, cb).scale(&lambda_inv).neg();
            iota_n.set(c, b, t);
        }
        let mut iota_n1 = PathMatrix::zero(&comps[i + 1], &new_tgt);
        for (a, &ra) in keep_r.iter().enumerate() {
            iota_n1.set(ra, a, alg.idempotent(comps[i + 1][ra]));
        }
        let mut proj_n = PathMatrix::zero(&new_src, &comps[i]);
        for (b, &cb) in keep_c.iter().enumerate() {
            proj_n.set(b, cb, alg.idempotent(comps[i][cb]));
        }
        let mut proj_n1 = PathMatrix::zero(&new_tgt, &comps[i + 1]);
        for (a, &ra) in keep_r.iter().enumerate() {
            proj_n1.set(a, ra, alg.idempotent(comps[i + 1][ra]));
            let t = d.get(ra, c).scale(&lambda_inv).neg();
            proj_n1.set(a, r, t);
        }

        let old_iota_n = iota.remove(&n).unwrap();
        iota.insert(n, old_iota_n.compose(&alg, &iota_n));
        let old_iota_n1 = iota.remove(&(n + 1)).unwrap();
        iota.insert(n + 1, old_iota_n1.compose(&alg, &iota_n1));
        let old_proj_n = proj.remove(&n).unwrap();
        proj.insert(n, proj_n.compose(&alg, &old_proj_n));
        let old_proj_n1 = proj.remove(&(n + 1)).unwrap();
        proj.insert(n + 1, proj_n1.compose(&alg, &old_proj_n1));

        if i > 0 {
            let prev = &diffs[i - 1];
            let all: Vec<usize> = (0..prev.cols().len()).collect();
            diffs[i - 1] = prev.select(&keep_c, &all);
        }
        if i + 1 < diffs.len() {
            let next = &diffs[i + 1];
            let all: Vec<usize> = (0..next.rows().len()).collect();
            diffs[i + 1] = next.select(&all, &keep_r);
        }
        diffs[i] = reduced;
        comps[i] = new_src;
        comps[i + 1] = new_tgt;
    }

    let min = ProjComplex::from_parts(alg, lo, comps, diffs);
    let to_min = ChainMap::from_parts(x.clone(), min.clone(), proj);
    let from_min = ChainMap::from_parts(min.clone(), x.clone(), iota);
    Minimized {
        complex: min,
        to_min,
        from_min,
    }
}

fn find_unit(diffs: &[PathMatrix]) -> Option<(usize, usize, usize)> {
    for (i, d) in diffs.iter().enumerate() {
        for r in 0..d.rows().len() {
            for c in 0..d.cols().len() {
                let v = d.cols()[c];
                if d.rows()[r] == v && d.get(r, c).coefficient(v).is_some() {
                    return Some((i, r, c));
                }
            }
        }
    }
    None
}
