//! Independent brute-force routes kept as test oracles: a raw scan of the
//! extended affine Weyl group against the coroot-positivity test, checked
//! elementwise against the production dilated-alcove enumeration.

use crate::admissible::{dilated_simples, is_u_admissible, BoundaryLevel};
use crate::affine::AffineElement;
use crate::rootdata::{Coweight, RootSystem};
use crate::weyl::enumerate_weyl;
use crate::Result;

/// Scan all `t_b w` with coweight coordinates of `b` in `[-u-1, u+1]` and
/// `w` over the whole finite Weyl group, keeping the ones mapping the
/// dilated simples to positive coroots. Every member of the index set has
/// coordinates bounded by `u`, so the box is exhaustive.
pub fn brute_force_scan(rs: &RootSystem, lv: &BoundaryLevel) -> Result<Vec<AffineElement>> {
    let n = rs.rank();
    let weyl = enumerate_weyl(rs, 50_000)?;
    let pu = dilated_simples(rs, lv.u);
    let bound = lv.u + 1;
    let width = (2 * bound + 1) as usize;
    let total = width.pow(n as u32);
    let found: Vec<Vec<AffineElement>> = crate::exec::map_indices(total, |mut t| {
        let mut coords = vec![0i64; n];
        for c in coords.iter_mut() {
            *c = (t % width) as i64 - bound;
            t /= width;
        }
        let b = rs.coweight_from_coords(&coords);
        let mut hits = Vec::new();
        for w in &weyl {
            let x = AffineElement {
                kind: rs.kind,
                b: b.clone(),
                w: w.clone(),
            };
            if is_u_admissible(rs, &x, &pu) {
                hits.push(x);
            }
        }
        hits
    });
    Ok(found.into_iter().flatten().collect())
}

/// Sorted canonical forms `(b, matrix)` for elementwise set comparison.
pub fn element_keys(elems: &[AffineElement]) -> Vec<(Vec<crate::Q>, Vec<i64>)> {
    let mut keys: Vec<(Vec<crate::Q>, Vec<i64>)> = elems
        .iter()
        .map(|x| (x.b.0.clone(), x.w.mat.clone()))
        .collect();
    keys.sort();
    keys
}

/// Membership count over a box, the slow route to `|Sigma_u| = e u^l`.
pub fn brute_force_sigma_count(rs: &RootSystem, u: i64, bound: i64) -> usize {
    let n = rs.rank();
    let width = (2 * bound + 1) as usize;
    let total = width.pow(n as u32);
    let counts = crate::exec::map_indices(total, |mut t| {
        let mut coords = vec![0i64; n];
        for c in coords.iter_mut() {
            *c = (t % width) as i64 - bound;
            t /= width;
        }
        let b: Coweight = rs.coweight_from_coords(&coords);
        usize::from(crate::admissible::sigma_u_membership(rs, u, &b))
    });
    counts.into_iter().sum()
}
