//! The extended affine Weyl group `W~ = Wbar ⋉ t_{P^vee}`, real affine
//! coroots, inversion sets, and the antidominant factorization `t_b = p_b u_b`
//! with `p_b` mapping the fundamental alcove into the dilated one.

use crate::rootdata::{CartanKind, Coweight, RootSystem};
use crate::weyl::WeylElement;
use crate::{q, Error, Q, Result};
use num::Zero;

/// A real affine coroot `alpha + n c` with integral finite part and level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineCoroot {
    pub finite: Vec<i64>,
    pub level: i64,
}

impl AffineCoroot {
    pub fn finite_part(finite: Vec<i64>) -> Self {
        AffineCoroot { finite, level: 0 }
    }

    pub fn is_positive(&self) -> bool {
        if self.level != 0 {
            return self.level > 0;
        }
        self.finite.iter().all(|&x| x >= 0) && self.finite.iter().any(|&x| x != 0)
    }

    /// Membership in the real affine coroot system: coroots of short norm
    /// occur at every level, the long ones only at levels divisible by the
    /// lacing number.
    pub fn is_real(&self, rs: &RootSystem) -> bool {
        rs.lacing == 1 || rs.coroot_is_short(&self.finite) || self.level % rs.lacing == 0
    }
}

/// An element `t_b * w` of the extended affine Weyl group. Tagged with its
/// root-system kind so cross-system composition is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineElement {
    pub kind: CartanKind,
    pub b: Coweight,
    pub w: WeylElement,
}

impl AffineElement {
    pub fn identity(rs: &RootSystem) -> Self {
        AffineElement {
            kind: rs.kind,
            b: Coweight::zero(rs.rank()),
            w: WeylElement::identity(rs.rank()),
        }
    }

    pub fn translation(rs: &RootSystem, b: Coweight) -> Self {
        AffineElement {
            kind: rs.kind,
            b,
            w: WeylElement::identity(rs.rank()),
        }
    }

    pub fn finite(rs: &RootSystem, w: WeylElement) -> Self {
        AffineElement {
            kind: rs.kind,
            b: Coweight::zero(rs.rank()),
            w,
        }
    }

    /// `(t_b w)(t_{b'} w') = t_{b + w(b')} (w w')`.
    pub fn compose(&self, other: &AffineElement) -> Result<AffineElement> {
        if self.kind != other.kind {
            return Err(Error::RootSystemMismatch);
        }
        Ok(AffineElement {
            kind: self.kind,
            b: self.b.add(&self.w.apply(&other.b)),
            w: self.w.compose(&other.w),
        })
    }

    /// `(t_b w)^{-1} = t_{-w^{-1}(b)} w^{-1}`.
    pub fn inverse(&self) -> AffineElement {
        let wi = self.w.inverse();
        AffineElement {
            kind: self.kind,
            b: wi.apply(&self.b).neg(),
            w: wi,
        }
    }

    /// Action on an affine coroot:
    /// `(t_b w)(alpha + n c) = w(alpha) + (n - (w(alpha), b)) c`.
    pub fn act_coroot(&self, rs: &RootSystem, cr: &AffineCoroot) -> AffineCoroot {
        let wf = self.w.apply_ints(&cr.finite);
        let shift = rs.form_coroot(&wf, &self.b);
        debug_assert!(shift.is_integer());
        AffineCoroot {
            level: cr.level - shift.to_integer(),
            finite: wf,
        }
    }

    /// Affine action on the coroot space: `x -> w(x) + b`.
    pub fn act_point(&self, x: &Coweight) -> Coweight {
        self.w.apply(x).add(&self.b)
    }
}

/// All positive real affine coroots with level up to `max_level`.
fn positive_affine_coroots(rs: &RootSystem, max_level: i64) -> Vec<AffineCoroot> {
    let mut out = Vec::new();
    for lvl in 0..=max_level {
        for cr in &rs.pos_coroots {
            let c = AffineCoroot {
                finite: cr.clone(),
                level: lvl,
            };
            if c.is_real(rs) {
                out.push(c);
            }
            if lvl > 0 {
                let c = AffineCoroot {
                    finite: cr.iter().map(|&x| -x).collect(),
                    level: lvl,
                };
                if c.is_real(rs) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// The inversion set `Phi^vee(x) = Phi^vee_+ \cap x^{-1}(Phi^vee_-)`,
/// computed by a bounded level scan. A positive coroot `alpha + n c` maps to
/// level `n - (w(alpha), b)`, so once `n` exceeds `max_alpha |(alpha, b)|`
/// every image is positive; scanning levels up to that bound is exhaustive.
pub fn inversion_set(rs: &RootSystem, x: &AffineElement) -> Vec<AffineCoroot> {
    let mut bound = 0i64;
    for cr in &rs.pos_coroots {
        let v = rs.form_coroot(cr, &x.b);
        debug_assert!(v.is_integer());
        bound = bound.max(v.to_integer().abs());
    }
    let mut out = Vec::new();
    for cr in positive_affine_coroots(rs, bound + 1) {
        let img = x.act_coroot(rs, &cr);
        if !img.is_positive() {
            out.push(cr);
        }
    }
    out
}

pub fn length(rs: &RootSystem, x: &AffineElement) -> usize {
    inversion_set(rs, x).len()
}

/// The factorization `t_b = p u` of a translation: `u` finite with
/// `u(b) = b_minus` antidominant, and `p = t_b u^{-1}` has no finite
/// inversions. Holds the data every enumeration consumer needs.
#[derive(Debug, Clone)]
pub struct SplitTranslation {
    pub b: Coweight,
    /// Reduced word of the finite part `u`, in application order.
    pub u_word: Vec<u8>,
    pub u: WeylElement,
    pub b_minus: Coweight,
    /// The alcove element `p = t_b u^{-1}`.
    pub element: AffineElement,
}

impl SplitTranslation {
    /// Sign of the finite part, `(-1)^{l(u)}`.
    pub fn sign_u(&self) -> i64 {
        if self.u_word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn length_pi(&self, rs: &RootSystem) -> usize {
        length(rs, &self.element)
    }

    pub fn sign_pi(&self, rs: &RootSystem) -> i64 {
        if self.length_pi(rs) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `u^{-1}(v)`.
    pub fn u_inv_apply(&self, rs: &RootSystem, v: &Coweight) -> Coweight {
        let mut v = v.clone();
        for &i in self.u_word.iter().rev() {
            v = rs.reflect(i as usize, &v);
        }
        v
    }

    /// `u(v)`.
    pub fn u_apply(&self, rs: &RootSystem, v: &Coweight) -> Coweight {
        let mut v = v.clone();
        for &i in &self.u_word {
            v = rs.reflect(i as usize, &v);
        }
        v
    }
}

/// Greedy antidominant descent: apply `s_i` while `(alpha_i, current) > 0`,
/// lowest index first. The resulting word is reduced and the finite part is
/// the unique one whose finite inversions all pair nonzero against `b`.
pub fn antidominant_split(rs: &RootSystem, b: &Coweight) -> SplitTranslation {
    let n = rs.rank();
    let mut v = b.clone();
    let mut word: Vec<u8> = Vec::new();
    'outer: loop {
        for i in 0..n {
            if rs.pairing_root(i, &v) > Q::zero() {
                v = rs.reflect(i, &v);
                word.push(i as u8);
                continue 'outer;
            }
        }
        break;
    }
    let u = crate::weyl::from_word(rs, &word);
    let element = AffineElement {
        kind: rs.kind,
        b: b.clone(),
        w: u.inverse(),
    };
    SplitTranslation {
        b: b.clone(),
        u_word: word,
        u,
        b_minus: v,
        element,
    }
}

/// The length-zero generators `p_{w_j}` for `j` in the mark-1 node set; the
/// group they generate together with the identity is `P^vee/Q^vee`.
pub fn omega_generators(rs: &RootSystem) -> Vec<SplitTranslation> {
    rs.j_set
        .iter()
        .map(|&j| antidominant_split(rs, &rs.fundamental_coweights[j]))
        .collect()
}

/// Right translation by the length-zero part of `t_{u w_j}`:
/// `p_b p_{u w_j} = p_{b + u_b^{-1}(u w_j)}`.
pub fn omega_u_translate(
    rs: &RootSystem,
    p: &SplitTranslation,
    j: usize,
    u: i64,
) -> SplitTranslation {
    let t = rs.fundamental_coweights[j].scale(q(u));
    let shifted = p.b.add(&p.u_inv_apply(rs, &t));
    antidominant_split(rs, &shifted)
}
