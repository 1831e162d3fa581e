//! Boundary admissible levels, the membership test for the dilated-alcove
//! index set, its enumeration, and the realized admissible weights.

use crate::affine::{
    antidominant_split, omega_u_translate, AffineCoroot, AffineElement, SplitTranslation,
};
use crate::rootdata::{Coweight, RootSystem};
use crate::{q, Error, Q, Result};
use num::{integer::gcd, Signed, Zero};

/// A boundary admissible level `k = -h^vee + h^vee/u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryLevel {
    pub u: i64,
    pub k: Q,
    /// `k + h^vee = h^vee / u`.
    pub shift: Q,
}

pub fn validate_level(rs: &RootSystem, u: i64) -> Result<BoundaryLevel> {
    if u < 1 {
        return Err(Error::LevelGcd {
            u,
            what: "positivity".into(),
            gcd: 0,
        });
    }
    let g = gcd(u, rs.dual_coxeter);
    if g != 1 {
        return Err(Error::LevelGcd {
            u,
            what: format!("h^vee = {}", rs.dual_coxeter),
            gcd: g,
        });
    }
    let g = gcd(u, rs.lacing);
    if g != 1 {
        return Err(Error::LevelGcd {
            u,
            what: format!("r^vee = {}", rs.lacing),
            gcd: g,
        });
    }
    let shift = Q::new(rs.dual_coxeter, u);
    Ok(BoundaryLevel {
        u,
        k: shift - q(rs.dual_coxeter),
        shift,
    })
}

/// The `u`-dilated simple affine coroots `{u c - theta^vee} ∪ {alpha_i^vee}`.
#[derive(Debug, Clone)]
pub struct DilatedSimples {
    pub u: i64,
    pub coroots: Vec<AffineCoroot>,
}

pub fn dilated_simples(rs: &RootSystem, u: i64) -> DilatedSimples {
    let mut coroots = vec![AffineCoroot {
        finite: rs.theta_coroot.iter().map(|&x| -x).collect(),
        level: u,
    }];
    for i in 0..rs.rank() {
        let mut f = vec![0i64; rs.rank()];
        f[i] = 1;
        coroots.push(AffineCoroot::finite_part(f));
    }
    DilatedSimples { u, coroots }
}

/// `x(Pi_u) ⊂ Phi^vee_+`, coroot by coroot.
pub fn is_u_admissible(rs: &RootSystem, x: &AffineElement, pu: &DilatedSimples) -> bool {
    pu.coroots
        .iter()
        .all(|cr| x.act_coroot(rs, cr).is_positive())
}

/// Membership of a translation part in the index set: either
/// `u + (theta^vee, b_minus) > 0`, or it vanishes and `u_b^{-1}(theta^vee)`
/// is a negative coroot.
pub fn sigma_u_membership(rs: &RootSystem, u: i64, b: &Coweight) -> bool {
    let sp = antidominant_split(rs, b);
    split_is_member(rs, u, &sp)
}

fn split_is_member(rs: &RootSystem, u: i64, sp: &SplitTranslation) -> bool {
    let t = q(u) + rs.form_coroot(&rs.theta_coroot, &sp.b_minus);
    if t.is_positive() {
        return true;
    }
    if t.is_zero() {
        let th = Coweight(rs.theta_coroot.iter().map(|&x| q(x)).collect());
        let img = sp.u_inv_apply(rs, &th);
        return img.0.iter().all(|x| !x.is_positive());
    }
    false
}

/// One enumerated admissible class: the length-zero orbit of `p_b` under the
/// dilated diagram automorphisms, its canonical representative, and its
/// realized weight.
#[derive(Debug, Clone)]
pub struct AdmissibleClass {
    pub class_id: usize,
    pub rep: SplitTranslation,
    pub orbit: Vec<SplitTranslation>,
    pub weight: AffineWeight,
}

/// An affine weight in pairing coordinates: `pairings[i] = <lambda, alpha_i^vee>`
/// for the finite nodes, the level `<lambda, c>`, and the tracked delta
/// coefficient. Equality of weights is taken modulo the delta coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineWeight {
    pub pairings: Vec<Q>,
    pub level: Q,
    pub delta: Q,
}

impl AffineWeight {
    pub fn same_mod_delta(&self, other: &AffineWeight) -> bool {
        self.pairings == other.pairings && self.level == other.level
    }

    /// `<lambda, alpha + n c>` for an affine coroot.
    pub fn pair_affine(&self, cr: &AffineCoroot) -> Q {
        let mut s = q(cr.level) * self.level;
        for (i, &c) in cr.finite.iter().enumerate() {
            if c != 0 {
                s += q(c) * self.pairings[i];
            }
        }
        s
    }
}

/// `lambda = p_b . (k w_0)` via the dot action, all exact.
pub fn realize_weight(rs: &RootSystem, lv: &BoundaryLevel, sp: &SplitTranslation) -> AffineWeight {
    let n = rs.rank();
    // lambda0 = k w_0 + rho: finite pairings all 1, level k + h^vee
    let mut pairings: Vec<Q> = vec![q(1); n];
    let mut level = lv.shift;
    let mut delta = Q::zero();

    // apply u^{-1}: <u^{-1} lam, alpha_i^vee> = <lam, u(alpha_i^vee)>
    let mut new_pairings = vec![Q::zero(); n];
    for (i, np) in new_pairings.iter_mut().enumerate() {
        let mut e = Coweight::zero(n);
        e.0[i] = q(1);
        let img = sp.u_apply(rs, &e);
        *np = img
            .0
            .iter()
            .zip(&pairings)
            .map(|(c, p)| *c * *p)
            .sum();
    }
    pairings = new_pairings;

    // apply t_b: pairings += level * G b; delta -= <lam, b> + level (b,b)/2
    let pair_b: Q = pairings
        .iter()
        .zip(&sp.b.0)
        .map(|(p, c)| *p * *c)
        .sum();
    let bb = rs.form(&sp.b, &sp.b);
    for (i, p) in pairings.iter_mut().enumerate() {
        let mut gb = Q::zero();
        for j in 0..n {
            gb += rs.gram[i][j] * sp.b.0[j];
        }
        *p += level * gb;
    }
    delta -= pair_b + level * bb / q(2);

    // subtract rho
    for p in pairings.iter_mut() {
        *p -= q(1);
    }
    level -= q(rs.dual_coxeter);
    debug_assert_eq!(level, lv.k);
    AffineWeight {
        pairings,
        level,
        delta,
    }
}

/// The modular anomaly `s_lambda = |lambda+rho|^2/(2(k+h)) - |rho|^2/(2h)`,
/// finite parts throughout.
pub fn anomaly(rs: &RootSystem, lv: &BoundaryLevel, w: &AffineWeight) -> Q {
    let n = rs.rank();
    let p: Vec<Q> = w.pairings.iter().map(|x| *x + q(1)).collect();
    let mut norm = Q::zero();
    for i in 0..n {
        for j in 0..n {
            norm += p[i] * rs.gram_inv[i][j] * p[j];
        }
    }
    norm / (q(2) * lv.shift) - rs.rho_sq / (q(2) * rs.dual_coxeter)
}

/// Regular-dominance spot check: `<lambda + rho, alpha^vee>` avoids
/// `{0, -1, -2, ...}` for every positive real affine coroot of level at most
/// `max_level`.
pub fn dominance_spot_check(
    rs: &RootSystem,
    w: &AffineWeight,
    max_level: i64,
) -> std::result::Result<(), AffineCoroot> {
    let rho_pairings: Vec<Q> = vec![q(1); rs.rank()];
    let lam_rho = AffineWeight {
        pairings: w
            .pairings
            .iter()
            .zip(&rho_pairings)
            .map(|(a, b)| *a + *b)
            .collect(),
        level: w.level + q(rs.dual_coxeter),
        delta: Q::zero(),
    };
    for lvl in 0..=max_level {
        for cr in &rs.pos_coroots {
            for sgn in [1i64, -1] {
                if lvl == 0 && sgn < 0 {
                    continue;
                }
                let c = AffineCoroot {
                    finite: cr.iter().map(|&x| sgn * x).collect(),
                    level: lvl,
                };
                if !c.is_real(rs) {
                    continue;
                }
                let v = lam_rho.pair_affine(&c);
                if v.is_integer() && !v.is_positive() {
                    return Err(c);
                }
            }
        }
    }
    Ok(())
}

/// Antidominant cells of the dilated alcove: `b_minus = -sum c_i w_i` with
/// `sum marks_i c_i <= u`.
fn alcove_cells(rs: &RootSystem, u: i64) -> Vec<Coweight> {
    let n = rs.rank();
    let mut cells = Vec::new();
    let mut c = vec![0i64; n];
    fn rec(
        rs: &RootSystem,
        i: usize,
        rem: i64,
        c: &mut Vec<i64>,
        out: &mut Vec<Coweight>,
    ) {
        let n = rs.rank();
        if i == n {
            let mut v = Coweight::zero(n);
            for j in 0..n {
                for k in 0..n {
                    v.0[k] -= q(c[j]) * rs.fundamental_coweights[j].0[k];
                }
            }
            out.push(v);
            return;
        }
        let mut ci = 0;
        while ci * rs.marks[i] <= rem {
            c[i] = ci;
            rec(rs, i + 1, rem - ci * rs.marks[i], c, out);
            ci += 1;
        }
        c[i] = 0;
    }
    rec(rs, 0, u, &mut c, &mut cells);
    cells
}

/// Enumerate all admissible classes for the level: exactly `u^rank` classes
/// of `e` members each. Cells of the dilated antidominant alcove are expanded
/// to their Weyl orbits in parallel, filtered by membership, then grouped
/// into orbits of the length-zero translations.
pub fn enumerate_admissible(rs: &RootSystem, lv: &BoundaryLevel) -> Result<Vec<AdmissibleClass>> {
    let u = lv.u;
    let cells = alcove_cells(rs, u);
    let per_cell: Vec<Vec<Coweight>> = crate::exec::map_vec(cells, |bm| {
        let mut members = Vec::new();
        for b in crate::weyl::orbit(rs, &bm) {
            if sigma_u_membership(rs, u, &b) {
                members.push(b);
            }
        }
        members
    });
    let mut members: Vec<Coweight> = per_cell.into_iter().flatten().collect();
    members.sort();
    members.dedup();

    let expected = rs.e as u128 * (u as u128).pow(rs.rank() as u32);
    if members.len() as u128 != expected {
        return Err(Error::Internal(format!(
            "enumeration found {} members, expected {}",
            members.len(),
            expected
        )));
    }

    // group into orbits of the length-zero right translations
    let index: std::collections::HashMap<&Coweight, usize> =
        members.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut assigned = vec![false; members.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..members.len() {
        if assigned[start] {
            continue;
        }
        let mut orbit = vec![start];
        assigned[start] = true;
        let mut frontier = vec![start];
        while let Some(idx) = frontier.pop() {
            let sp = antidominant_split(rs, &members[idx]);
            for &j in &rs.j_set {
                let next = omega_u_translate(rs, &sp, j, u);
                let ni = *index.get(&next.b).ok_or_else(|| {
                    Error::Internal("length-zero translate left the member set".into())
                })?;
                if !assigned[ni] {
                    assigned[ni] = true;
                    orbit.push(ni);
                    frontier.push(ni);
                }
            }
        }
        if orbit.len() as i64 != rs.e {
            return Err(Error::Internal(format!(
                "orbit size {} != e = {}",
                orbit.len(),
                rs.e
            )));
        }
        orbit.sort_unstable();
        groups.push(orbit);
    }

    // canonical representative: lexicographically smallest member
    let mut classes: Vec<AdmissibleClass> = groups
        .into_iter()
        .map(|g| {
            let orbit: Vec<SplitTranslation> = g
                .iter()
                .map(|&i| antidominant_split(rs, &members[i]))
                .collect();
            let rep = orbit[0].clone();
            let weight = realize_weight(rs, lv, &rep);
            AdmissibleClass {
                class_id: 0,
                rep,
                orbit,
                weight,
            }
        })
        .collect();
    classes.sort_by(|a, b| {
        (&a.rep.b_minus, &a.rep.b)
            .partial_cmp(&(&b.rep.b_minus, &b.rep.b))
            .unwrap()
    });
    for (i, c) in classes.iter_mut().enumerate() {
        c.class_id = i;
        // the weight is class data: every member realizes it
        for m in &c.orbit {
            let w = realize_weight(rs, lv, m);
            if !w.same_mod_delta(&c.weight) {
                return Err(Error::Internal(
                    "orbit members realize different weights".into(),
                ));
            }
        }
    }
    if classes.len() as u128 != (lv.u as u128).pow(rs.rank() as u32) {
        return Err(Error::Internal("class count != u^rank".into()));
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::antidominant_split;
    use crate::rootdata::{build_root_system, CartanKind};
    use crate::{q, qr};

    fn rs(name: &str) -> RootSystem {
        build_root_system(CartanKind::parse(name).unwrap())
    }

    #[test]
    fn level_examples() {
        let a1 = rs("A1");
        let lv = validate_level(&a1, 3).unwrap();
        assert_eq!(lv.k, qr(-4, 3));
        let b2 = rs("B2");
        assert!(matches!(validate_level(&b2, 2), Err(Error::LevelGcd { .. })));
        let a2 = rs("A2");
        assert!(validate_level(&a2, 3).is_err());
        assert!(validate_level(&a2, 1).is_ok());
    }

    #[test]
    fn dilated_simples_at_u1_are_affine_simples() {
        let b2 = rs("B2");
        let pu = dilated_simples(&b2, 1);
        assert_eq!(pu.coroots.len(), 3);
        assert_eq!(pu.coroots[0].level, 1);
        let neg_theta: Vec<i64> = b2.theta_coroot.iter().map(|&x| -x).collect();
        assert_eq!(pu.coroots[0].finite, neg_theta);
        for (i, cr) in pu.coroots[1..].iter().enumerate() {
            assert_eq!(cr.level, 0);
            assert_eq!(cr.finite.iter().sum::<i64>(), 1);
            assert_eq!(cr.finite[i], 1);
        }
    }

    #[test]
    fn eps_multiplicative_over_splits() {
        let b2 = rs("B2");
        let lv = validate_level(&b2, 5).unwrap();
        let classes = enumerate_admissible(&b2, &lv).unwrap();
        for a in &classes {
            for b in &classes {
                let prod = a.rep.u.compose(&b.rep.u);
                assert_eq!(
                    prod.sign(&b2),
                    a.rep.sign_u() * b.rep.sign_u(),
                );
            }
        }
    }

    #[test]
    fn identity_is_admissible_for_dilated_diagram() {
        let a2 = rs("A2");
        let pu = dilated_simples(&a2, 2);
        assert!(is_u_admissible(&a2, &AffineElement::identity(&a2), &pu));
    }

    #[test]
    fn a1_u3_membership_table() {
        let a1 = rs("A1");
        let w = qr(1, 2);
        for n in [0i64, -1, -2, 1, 2, 3] {
            assert!(
                sigma_u_membership(&a1, 3, &Coweight(vec![q(n) * w])),
                "n = {n}"
            );
        }
        assert!(!sigma_u_membership(&a1, 3, &Coweight(vec![q(-3) * w])));
        // x = t_{-3w} fails on the dilated node directly
        let pu = dilated_simples(&a1, 3);
        let x = AffineElement::translation(&a1, Coweight(vec![q(-3) * w]));
        assert!(!is_u_admissible(&a1, &x, &pu));
        // pi_{3w} = t_{3w} s passes
        let sp = antidominant_split(&a1, &Coweight(vec![q(3) * w]));
        assert!(is_u_admissible(&a1, &sp.element, &pu));
    }

    #[test]
    fn membership_agrees_with_direct_test() {
        for (name, u) in [("A2", 2), ("B2", 5), ("G2", 5)] {
            let rs = rs(name);
            let pu = dilated_simples(&rs, u);
            for x0 in -(u + 1)..=(u + 1) {
                for x1 in -(u + 1)..=(u + 1) {
                    let b = rs.coweight_from_coords(&[x0, x1]);
                    let sp = antidominant_split(&rs, &b);
                    assert_eq!(
                        sigma_u_membership(&rs, u, &b),
                        is_u_admissible(&rs, &sp.element, &pu),
                        "{name} ({x0},{x1})"
                    );
                }
            }
        }
    }

    #[test]
    fn a2_u2_member_count() {
        let a2 = rs("A2");
        let mut count = 0;
        for x0 in -4i64..=4 {
            for x1 in -4i64..=4 {
                if sigma_u_membership(&a2, 2, &a2.coweight_from_coords(&[x0, x1])) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 12); // e u^l = 3 * 4
    }

    #[test]
    fn enumerate_a1_u3_classes() {
        let a1 = rs("A1");
        let lv = validate_level(&a1, 3).unwrap();
        let classes = enumerate_admissible(&a1, &lv).unwrap();
        assert_eq!(classes.len(), 3);
        let w = qr(1, 2);
        let reps: Vec<Q> = classes.iter().map(|c| c.rep.b.0[0]).collect();
        assert_eq!(reps, vec![q(-2) * w, q(-1) * w, q(0) * w]);
        // orbits pair {0,3w},{-w,2w},{-2w,w}
        for (rep, partner) in [(q(0), q(3)), (q(-1), q(2)), (q(-2), q(1))] {
            let cl = classes
                .iter()
                .find(|c| c.rep.b.0[0] == rep * w)
                .unwrap();
            let mut bs: Vec<Q> = cl.orbit.iter().map(|m| m.b.0[0]).collect();
            bs.sort();
            let mut expect = vec![rep * w, partner * w];
            expect.sort();
            assert_eq!(bs, expect);
        }
    }

    #[test]
    fn enumerate_counts() {
        for (name, u, classes_expect) in [("A2", 2, 4), ("G2", 5, 25)] {
            let rsx = rs(name);
            let lv = validate_level(&rsx, u).unwrap();
            let classes = enumerate_admissible(&rsx, &lv).unwrap();
            assert_eq!(classes.len(), classes_expect, "{name}");
            let members: usize = classes.iter().map(|c| c.orbit.len()).sum();
            assert_eq!(members as i64, rsx.e * (u as i64).pow(2), "{name}");
        }
    }

    #[test]
    fn a1_u3_weights() {
        let a1 = rs("A1");
        let lv = validate_level(&a1, 3).unwrap();
        let classes = enumerate_admissible(&a1, &lv).unwrap();
        // finite parts k w0 - (2n/3) wbar: pairings 0, -2/3, -4/3
        let mut finite: Vec<Q> = classes.iter().map(|c| c.weight.pairings[0]).collect();
        finite.sort();
        assert_eq!(finite, vec![qr(-4, 3), qr(-2, 3), q(0)]);
        for c in &classes {
            assert_eq!(c.weight.level, qr(-4, 3));
        }
    }

    #[test]
    fn a1_u3_vacuum_anomaly() {
        let a1 = rs("A1");
        let lv = validate_level(&a1, 3).unwrap();
        let classes = enumerate_admissible(&a1, &lv).unwrap();
        let vac = classes
            .iter()
            .find(|c| c.weight.pairings[0].is_zero())
            .unwrap();
        assert_eq!(anomaly(&a1, &lv, &vac.weight), qr(1, 4));
    }

    #[test]
    fn weights_distinct_across_classes() {
        let b2 = rs("B2");
        let lv = validate_level(&b2, 5).unwrap();
        let classes = enumerate_admissible(&b2, &lv).unwrap();
        for i in 0..classes.len() {
            for j in 0..i {
                assert!(!classes[i].weight.same_mod_delta(&classes[j].weight));
            }
        }
    }

    #[test]
    fn dominance_spot_checks() {
        let a1 = rs("A1");
        let lv = validate_level(&a1, 3).unwrap();
        for c in enumerate_admissible(&a1, &lv).unwrap() {
            assert!(dominance_spot_check(&a1, &c.weight, 10).is_ok());
        }
    }
}
