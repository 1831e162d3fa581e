//! Property-based invariants: group laws, form invariance, length/sign
//! behavior, lattice pairings, quotient arithmetic, phase arithmetic.

use admissible::affine::{antidominant_split, length, AffineElement};
use admissible::modular::PhasePower;
use admissible::rootdata::{build_root_system, CartanKind, Coweight, RootSystem};
use admissible::snf::smith_normal_form;
use admissible::spaltenstein::{s_u_quotient, weyl_action_on_s_u};
use admissible::weyl::{from_word, WeylElement};
use admissible::{q, qr, Q};
use num::Zero;
use proptest::prelude::*;

fn b2() -> RootSystem {
    build_root_system(CartanKind::parse("B2").unwrap())
}

fn a3() -> RootSystem {
    build_root_system(CartanKind::parse("A3").unwrap())
}

fn arb_rational() -> impl Strategy<Value = Q> {
    (-24i64..24, 1i64..8).prop_map(|(n, d)| qr(n, d))
}

fn arb_coweight(rank: usize) -> impl Strategy<Value = Coweight> {
    proptest::collection::vec(arb_rational(), rank).prop_map(Coweight)
}

fn arb_lattice_point(rank: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-6i64..=6, rank)
}

fn arb_word(rank: usize) -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(0..rank as u8, 0..12)
}

fn arb_affine(rs: &RootSystem) -> impl Strategy<Value = AffineElement> {
    let rank = rs.rank();
    let rs = rs.clone();
    (arb_lattice_point(rank), arb_word(rank)).prop_map(move |(coords, word)| AffineElement {
        kind: rs.kind,
        b: rs.coweight_from_coords(&coords),
        w: from_word(&rs, &word),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn form_is_symmetric(v in arb_coweight(2), w in arb_coweight(2)) {
        let rs = b2();
        prop_assert_eq!(rs.form(&v, &w), rs.form(&w, &v));
    }

    #[test]
    fn reflections_preserve_form(v in arb_coweight(3), w in arb_coweight(3), word in arb_word(3)) {
        let rs = a3();
        let x = from_word(&rs, &word);
        prop_assert_eq!(rs.form(&x.apply(&v), &x.apply(&w)), rs.form(&v, &w));
    }

    #[test]
    fn coweight_pairings_land_in_z_over_m(x in arb_lattice_point(2), y in arb_lattice_point(2)) {
        let rs = b2();
        let v = rs.coweight_from_coords(&x);
        let w = rs.coweight_from_coords(&y);
        let f = rs.form(&v, &w) * q(rs.m);
        prop_assert!(f.is_integer());
    }

    #[test]
    fn affine_inverse_law(x in arb_affine(&b2())) {
        let e = x.compose(&x.inverse()).unwrap();
        prop_assert!(e.b.is_zero());
        prop_assert!(e.w.is_identity());
    }

    #[test]
    fn affine_associativity(x in arb_affine(&b2()), y in arb_affine(&b2()), z in arb_affine(&b2())) {
        let lhs = x.compose(&y).unwrap().compose(&z).unwrap();
        let rhs = x.compose(&y.compose(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn length_subadditive_sign_multiplicative(x in arb_affine(&b2()), y in arb_affine(&b2())) {
        let rs = b2();
        let (lx, ly) = (length(&rs, &x), length(&rs, &y));
        let lxy = length(&rs, &x.compose(&y).unwrap());
        prop_assert!(lxy <= lx + ly);
        // epsilon(xy) = epsilon(x) epsilon(y)
        prop_assert_eq!(lxy % 2, (lx + ly) % 2);
    }

    #[test]
    fn split_reassembles_translation(coords in arb_lattice_point(2)) {
        let rs = b2();
        let b = rs.coweight_from_coords(&coords);
        let sp = antidominant_split(&rs, &b);
        // t_b = pi_b u_b
        let t = sp.element.compose(&AffineElement::finite(&rs, sp.u.clone())).unwrap();
        prop_assert_eq!(&t.b, &b);
        prop_assert!(t.w.is_identity());
        // b_minus is antidominant and in the Weyl orbit
        for i in 0..2 {
            prop_assert!(rs.pairing_root(i, &sp.b_minus) <= Q::zero());
        }
        prop_assert_eq!(sp.u.apply(&b), sp.b_minus);
    }

    #[test]
    fn quotient_reduce_lift_roundtrip(coords in arb_lattice_point(2), word in arb_word(2)) {
        let rs = b2();
        let quot = s_u_quotient(&rs, 5);
        let v = rs.coweight_from_coords(&coords);
        let t = quot.reduce(&rs, &v);
        prop_assert_eq!(quot.reduce(&rs, &quot.lift(&rs, &t)), t.clone());
        // group action law: w2(w1 x) = (w2 w1) x
        let w1 = from_word(&rs, &word);
        let w2 = WeylElement::simple(&rs, 0);
        let lhs = weyl_action_on_s_u(&rs, &quot, &w2, &weyl_action_on_s_u(&rs, &quot, &w1, &t));
        let rhs = weyl_action_on_s_u(&rs, &quot, &w2.compose(&w1), &t);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn snf_transforms_are_exact(entries in proptest::collection::vec(-9i128..=9, 9)) {
        let s = smith_normal_form(&entries, 3);
        // left * m * right == diag
        let mul = |a: &[i128], b: &[i128]| -> Vec<i128> {
            let mut c = vec![0i128; 9];
            for i in 0..3 {
                for k in 0..3 {
                    for j in 0..3 {
                        c[i * 3 + j] += a[i * 3 + k] * b[k * 3 + j];
                    }
                }
            }
            c
        };
        let lmr = mul(&mul(&s.left, &entries), &s.right);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(lmr[i * 3 + j], if i == j { s.diag[i] } else { 0 });
            }
        }
        for w in s.diag.windows(2) {
            if w[1] != 0 {
                prop_assert_eq!(w[1] % w[0].max(1), 0);
            }
        }
    }

    #[test]
    fn phase_multiplication_matches_complex(a in arb_rational(), b in arb_rational()) {
        let (pa, pb) = (PhasePower::new(a), PhasePower::new(b));
        let lhs = pa.mul(pb).value();
        let rhs = pa.value() * pb.value();
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert!((pa.value().norm() - 1.0).abs() < 1e-15);
    }
}

/// Dilated-simple images under enumerated elements stay positive, level by
/// level, and the grading pairing u (alpha, rho) + n h never vanishes on real
/// affine coroots (the isolated-fixed-point content of the grading argument;
/// checked exhaustively for |n| <= 3 on ranks <= 4).
#[test]
fn grading_pairing_never_vanishes() {
    for (name, us) in [
        ("A1", vec![3i64, 5]),
        ("A2", vec![2, 5]),
        ("B2", vec![5, 7]),
        ("A3", vec![3, 5]),
        ("B3", vec![3]),
        ("C3", vec![5]),
        ("G2", vec![5, 7]),
        ("D4", vec![5]),
        ("F4", vec![5]),
    ] {
        let rs = build_root_system(CartanKind::parse(name).unwrap());
        for u in us {
            for n in -3i64..=3 {
                for cr in &rs.pos_coroots {
                    for sgn in [1i64, -1] {
                        let c = admissible::affine::AffineCoroot {
                            finite: cr.iter().map(|&x| sgn * x).collect(),
                            level: n,
                        };
                        if !c.is_real(&rs) {
                            continue;
                        }
                        let ht: i64 = c.finite.iter().sum();
                        assert_ne!(u * ht + n * rs.dual_coxeter, 0, "{name} u={u}");
                    }
                }
            }
        }
    }
}

/// Images of the dilated simples under every enumerated element are positive
/// affine coroots (level >= 0; positive finite part at level zero).
#[test]
fn dilated_images_positive() {
    use admissible::admissible::{dilated_simples, enumerate_admissible, validate_level};
    for (name, u) in [("A2", 2i64), ("B2", 5), ("G2", 5)] {
        let rs = build_root_system(CartanKind::parse(name).unwrap());
        let lv = validate_level(&rs, u).unwrap();
        let pu = dilated_simples(&rs, u);
        for c in enumerate_admissible(&rs, &lv).unwrap() {
            for m in &c.orbit {
                for cr in &pu.coroots {
                    let img = m.element.act_coroot(&rs, cr);
                    assert!(img.level >= 0);
                    assert!(img.is_positive());
                    assert!(img.is_real(&rs), "image must stay a real coroot");
                }
            }
        }
    }
}
