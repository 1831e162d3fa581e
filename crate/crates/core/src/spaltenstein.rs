//! Levi-restricted fixed points: the finite quotient `S_u = P^vee / u Q^vee`,
//! Weyl orbits and stabilizers on it, the Levi admissibility test, the
//! closed-form count of restricted classes, and the scan for count-one rows.

use crate::admissible::{
    dilated_simples, enumerate_admissible, validate_level, AdmissibleClass, BoundaryLevel,
};
use crate::affine::SplitTranslation;
use crate::rootdata::{Coweight, LeviDatum, RootSystem};
use crate::snf::{smith_normal_form, unimodular_inverse};
use crate::weyl::WeylElement;
use crate::{Error, Result};

/// Default ceiling for explicit subgroup/orbit enumeration.
pub const BRUTE_GATE: u128 = 1_000_000;

/// Smith-normal-form presentation of `S_u = P^vee / u Q^vee`.
///
/// Coordinates run through the coweight-basis integer coordinates of a
/// lattice point; `left * x mod diag` is the canonical residue vector.
#[derive(Debug, Clone)]
pub struct SuQuotient {
    pub u: i64,
    n: usize,
    pub diag: Vec<i128>,
    left: Vec<i128>,
    left_inv: Vec<i128>,
}

/// Canonical representative of an element of `S_u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionClass {
    pub residues: Vec<i128>,
}

pub fn s_u_quotient(rs: &RootSystem, u: i64) -> SuQuotient {
    let n = rs.rank();
    // columns: u * alpha_j^vee in coweight coordinates, entry i = u * a[j][i]
    let m: Vec<i128> = (0..n * n)
        .map(|t| {
            let (i, j) = (t / n, t % n);
            (u as i128) * (rs.cartan[j][i] as i128)
        })
        .collect();
    let snf = smith_normal_form(&m, n);
    let left_inv = unimodular_inverse(&snf.left, n);
    let q = SuQuotient {
        u,
        n,
        diag: snf.diag,
        left: snf.left,
        left_inv,
    };
    let order: i128 = q.diag.iter().product();
    debug_assert_eq!(
        order,
        (rs.e as i128) * (u as i128).pow(n as u32),
        "|S_u| != e u^l"
    );
    q
}

impl SuQuotient {
    pub fn order(&self) -> u128 {
        self.diag.iter().map(|&d| d as u128).product()
    }

    /// Reduce a coweight-lattice point to its canonical class.
    pub fn reduce(&self, rs: &RootSystem, v: &Coweight) -> TorsionClass {
        let x = rs.coweight_coords(v);
        self.reduce_coords(&x)
    }

    pub fn reduce_coords(&self, x: &[i64]) -> TorsionClass {
        let n = self.n;
        let residues = (0..n)
            .map(|i| {
                let mut s: i128 = 0;
                for j in 0..n {
                    s += self.left[i * n + j] * (x[j] as i128);
                }
                s.rem_euclid(self.diag[i])
            })
            .collect();
        TorsionClass { residues }
    }

    /// A coweight-lattice point representing the class.
    pub fn lift(&self, rs: &RootSystem, t: &TorsionClass) -> Coweight {
        let n = self.n;
        let x: Vec<i64> = (0..n)
            .map(|i| {
                let mut s: i128 = 0;
                for j in 0..n {
                    s += self.left_inv[i * n + j] * t.residues[j];
                }
                i64::try_from(s).expect("lift overflow")
            })
            .collect();
        rs.coweight_from_coords(&x)
    }

    /// All classes, in lexicographic residue order.
    pub fn all_classes(&self) -> Vec<TorsionClass> {
        let mut out = vec![TorsionClass {
            residues: vec![0; self.n],
        }];
        for (i, &d) in self.diag.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for t in out {
                for r in 0..d {
                    let mut t2 = t.clone();
                    t2.residues[i] = r;
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    }
}

/// The linear Weyl action descends to `S_u`.
pub fn weyl_action_on_s_u(
    rs: &RootSystem,
    quot: &SuQuotient,
    w: &WeylElement,
    x: &TorsionClass,
) -> TorsionClass {
    let v = quot.lift(rs, x);
    quot.reduce(rs, &w.apply(&v))
}

/// Orbit/stabilizer data of one class under the Levi Weyl group.
#[derive(Debug, Clone)]
pub struct OrbitReport {
    pub orbit_size: u128,
    pub stabilizer_order: u128,
    pub free: bool,
    pub members: Vec<TorsionClass>,
}

pub fn stabilizer_order(
    rs: &RootSystem,
    quot: &SuQuotient,
    levi: &LeviDatum,
    x: &TorsionClass,
) -> Result<OrbitReport> {
    if levi.weyl_order > BRUTE_GATE {
        return Err(Error::GateExceeded(format!(
            "|W_f| = {} exceeds the orbit gate; use count_closed_form",
            levi.weyl_order
        )));
    }
    let gens: Vec<WeylElement> = levi
        .subset
        .iter()
        .map(|&i| WeylElement::simple(rs, i))
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(x.clone());
    let mut frontier = vec![x.clone()];
    while let Some(y) = frontier.pop() {
        for g in &gens {
            let z = weyl_action_on_s_u(rs, quot, g, &y);
            if seen.insert(z.clone()) {
                frontier.push(z);
            }
        }
    }
    let orbit_size = seen.len() as u128;
    assert_eq!(levi.weyl_order % orbit_size, 0, "orbit does not divide |W_f|");
    let stab = levi.weyl_order / orbit_size;
    Ok(OrbitReport {
        orbit_size,
        stabilizer_order: stab,
        free: stab == 1,
        members: seen.into_iter().collect(),
    })
}

/// `pi_b(Pi_u)` avoids the Levi coroots.
pub fn is_levi_admissible(
    rs: &RootSystem,
    sp: &SplitTranslation,
    u: i64,
    levi: &LeviDatum,
) -> bool {
    let pu = dilated_simples(rs, u);
    for cr in &pu.coroots {
        let img = sp.element.act_coroot(rs, cr);
        if img.level == 0 && levi.pos_coroots.iter().any(|c| *c == img.finite) {
            return false;
        }
    }
    true
}

/// Sommers-style fixed point count of one Weyl element on `S_u`,
/// by exhaustive scan (gated by the quotient size).
pub fn fixed_point_count(
    rs: &RootSystem,
    quot: &SuQuotient,
    w: &WeylElement,
) -> Result<u128> {
    if quot.order() > BRUTE_GATE {
        return Err(Error::GateExceeded("S_u too large for exhaustive scan".into()));
    }
    let classes = quot.all_classes();
    let counts = crate::exec::map_vec(classes, |x| {
        u128::from(weyl_action_on_s_u(rs, quot, w, &x) == x)
    });
    Ok(counts.into_iter().sum())
}

/// `(1/|W_f|) u^{l-j} (u - m_1)...(u - m_j)`, an exact integer.
pub fn count_closed_form(rs: &RootSystem, lv: &BoundaryLevel, levi: &LeviDatum) -> Result<i128> {
    let l = rs.rank();
    let j = levi.semisimple_rank();
    let u = lv.u as i128;
    let mut num: i128 = u.pow((l - j) as u32);
    for &m in &levi.exponents {
        num *= u - m as i128;
    }
    let den = levi.weyl_order as i128;
    if num % den != 0 {
        return Err(Error::NotIntegral {
            context: "count_closed_form".into(),
            value: format!("{num}/{den}"),
        });
    }
    Ok(num / den)
}

/// Levi-restricted classes: the admissible classes surviving the Levi test,
/// grouped into Levi-Weyl orbits; one canonical representative class each.
pub fn enumerate_levi_admissible(
    rs: &RootSystem,
    lv: &BoundaryLevel,
    levi: &LeviDatum,
) -> Result<Vec<AdmissibleClass>> {
    let classes = enumerate_admissible(rs, lv)?;
    levi_restrict_classes(rs, lv, levi, &classes)
}

/// Same as [`enumerate_levi_admissible`] but reusing already-enumerated
/// classes.
pub fn levi_restrict_classes(
    rs: &RootSystem,
    lv: &BoundaryLevel,
    levi: &LeviDatum,
    classes: &[AdmissibleClass],
) -> Result<Vec<AdmissibleClass>> {
    // member translation -> class index
    let mut member_class: std::collections::HashMap<Coweight, usize> =
        std::collections::HashMap::new();
    for c in classes {
        for m in &c.orbit {
            member_class.insert(m.b.clone(), c.class_id);
        }
    }
    let keep: Vec<bool> = crate::exec::map_vec(classes.to_vec(), |c| {
        let first = is_levi_admissible(rs, &c.rep, lv.u, levi);
        // the test is right-translation invariant; check on the whole orbit
        for m in &c.orbit {
            assert_eq!(
                is_levi_admissible(rs, m, lv.u, levi),
                first,
                "levi admissibility not class-invariant"
            );
        }
        first
    });

    // group surviving classes under the Levi Weyl action b -> s_i(b)
    let mut group_of: Vec<Option<usize>> = vec![None; classes.len()];
    let mut reps = Vec::new();
    for start in 0..classes.len() {
        if !keep[start] || group_of[start].is_some() {
            continue;
        }
        let gid = reps.len();
        group_of[start] = Some(gid);
        let mut frontier = vec![start];
        while let Some(ci) = frontier.pop() {
            for m in &classes[ci].orbit {
                for &i in &levi.subset {
                    let moved = rs.reflect(i, &m.b);
                    let target = *member_class.get(&moved).ok_or_else(|| {
                        Error::Internal("levi reflection left the admissible set".into())
                    })?;
                    if group_of[target].is_none() {
                        assert!(keep[target], "levi orbit mixes kept and dropped classes");
                        group_of[target] = Some(gid);
                        frontier.push(target);
                    }
                }
            }
        }
        reps.push(start);
    }
    let out: Vec<AdmissibleClass> = reps.into_iter().map(|i| classes[i].clone()).collect();
    let expected = count_closed_form(rs, lv, levi)?;
    if out.len() as i128 != expected {
        return Err(Error::Internal(format!(
            "levi class count {} != closed form {}",
            out.len(),
            expected
        )));
    }
    Ok(out)
}

/// Free-orbit count in `S_u` divided by `e`; the brute-force route to the
/// closed-form count.
pub fn brute_force_levi_count(
    rs: &RootSystem,
    lv: &BoundaryLevel,
    levi: &LeviDatum,
) -> Result<i128> {
    let quot = s_u_quotient(rs, lv.u);
    if quot.order() > BRUTE_GATE || levi.weyl_order > BRUTE_GATE {
        return Err(Error::GateExceeded("brute-force levi count".into()));
    }
    let classes = quot.all_classes();
    let free_flags = crate::exec::map_vec(classes, |x| {
        stabilizer_order(rs, &quot, levi, &x).map(|r| r.free)
    });
    let mut free = 0i128;
    for f in free_flags {
        if f? {
            free += 1;
        }
    }
    let denom = (levi.weyl_order as i128) * (rs.e as i128);
    if free % denom != 0 {
        return Err(Error::NotIntegral {
            context: "free-orbit count".into(),
            value: format!("{free}/{denom}"),
        });
    }
    Ok(free / denom)
}

/// One hit of the count-one scan.
#[derive(Debug, Clone)]
pub struct TableHit {
    pub kind: crate::rootdata::CartanKind,
    pub u: i64,
    pub fixture: String,
    pub count: i128,
}

/// Scan the shipped Levi fixtures over all kinds up to `max_rank` and valid
/// `u <= max_u`, reporting every configuration whose restricted class count
/// is exactly one.
pub fn table1_scan(max_rank: usize, max_u: i64) -> Vec<TableHit> {
    let mut hits = Vec::new();
    for kind in crate::rootdata::kinds_up_to_rank(max_rank) {
        let rs = crate::rootdata::build_root_system(kind);
        for u in 2..=max_u {
            let lv = match validate_level(&rs, u) {
                Ok(lv) => lv,
                Err(_) => continue,
            };
            let mut fixtures: Vec<(String, LeviDatum)> = Vec::new();
            if let Ok(l) = crate::rootdata::levi_fixture(&rs, "principal", u) {
                fixtures.push(("principal".into(), l));
            }
            if let Ok(l) = crate::rootdata::levi_fixture(&rs, "blocks", u) {
                fixtures.push((format!("blocks(u={u})"), l));
            }
            if let Ok(l) = crate::rootdata::levi_fixture(&rs, "A6", u) {
                fixtures.push(("A6".into(), l));
            }
            for (name, levi) in fixtures {
                if let Ok(c) = count_closed_form(&rs, &lv, &levi) {
                    if c == 1 {
                        hits.push(TableHit {
                            kind,
                            u,
                            fixture: name,
                            count: c,
                        });
                    }
                }
            }
        }
    }
    hits
}

/// The label of an admissible class in `P^vee/uP^vee`: coweight coordinates
/// of any member, mod u. Constant on classes; a bijection onto the quotient.
pub fn class_label_mod_u(rs: &RootSystem, u: i64, b: &Coweight) -> Vec<i64> {
    rs.coweight_coords(b)
        .iter()
        .map(|&x| x.rem_euclid(u))
        .collect()
}
