//! Finite root-system data for the simple types, in Bourbaki numbering.
//!
//! Everything downstream consumes the [`RootSystem`] built here: Cartan
//! matrix, symmetrizers, the invariant form on the coroot space, marks and
//! comarks of the corresponding untwisted affine diagram, positive (co)roots,
//! exponents, and fundamental coweights. Vectors in the coroot space are
//! stored with exact rational coordinates in the simple-coroot basis; weights
//! elsewhere use pairing coordinates against the simple coroots.
//!
//! Numbering convention: simple roots follow Bourbaki (Plates I-IX). In
//! particular for E-types the branch node is alpha_2 attached to alpha_4, for
//! B_n the short simple root is alpha_n, for C_n the long one is alpha_n, and
//! for G_2 alpha_1 is short.

use crate::{q, Error, Q, Result};
use num::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// A simple finite type, e.g. `A3`, `E7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanKind {
    pub family: Family,
    pub rank: usize,
}

impl CartanKind {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanKind { family, rank })
        } else {
            Err(Error::InvalidRank {
                family: family.letter(),
                rank,
            })
        }
    }

    /// Parse e.g. "A1", "e7", "D4".
    pub fn parse(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => {
                return Err(Error::Internal(format!("cannot parse root system `{s}`")));
            }
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Internal(format!("cannot parse rank in `{s}`")))?;
        CartanKind::new(fam, rank)
    }
}

impl fmt::Display for CartanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A vector in the (finite) coroot space, exact coordinates in the
/// simple-coroot basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coweight(pub Vec<Q>);

impl Coweight {
    pub fn zero(rank: usize) -> Self {
        Coweight(vec![Q::zero(); rank])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Coweight(v.iter().map(|&x| q(x)).collect())
    }

    pub fn add(&self, other: &Coweight) -> Coweight {
        Coweight(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a + *b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Coweight) -> Coweight {
        Coweight(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a - *b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Coweight {
        Coweight(self.0.iter().map(|a| -*a).collect())
    }

    pub fn scale(&self, c: Q) -> Coweight {
        Coweight(self.0.iter().map(|a| *a * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }
}

/// Square rational matrix helpers used by the construction code.
pub(crate) fn rat_mat_inv(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&r| !aug[r][c].is_zero())
            .expect("singular matrix");
        aug.swap(c, p);
        let pv = aug[c][c];
        for x in aug[c].iter_mut() {
            *x /= pv;
        }
        for r in 0..n {
            if r != c && !aug[r][c].is_zero() {
                let f = aug[r][c];
                for j in 0..2 * n {
                    let s = aug[c][j];
                    aug[r][j] -= f * s;
                }
            }
        }
    }
    aug.into_iter().map(|row| row[n..].to_vec()).collect()
}

pub(crate) fn rat_det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut m: Vec<Vec<Q>> = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let p = match (c..n).find(|&r| !m[r][c].is_zero()) {
            Some(p) => p,
            None => return Q::zero(),
        };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for j in c..n {
                let s = m[c][j];
                m[r][j] -= f * s;
            }
        }
    }
    det
}

/// Finite root system plus the affine labels of its untwisted extension.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub kind: CartanKind,
    /// Cartan matrix, `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    pub cartan: Vec<Vec<i64>>,
    /// Symmetrizers `d_i = (alpha_i, alpha_i)/2`, normalized so long roots
    /// have `d = 1`.
    pub d: Vec<Q>,
    /// Gram matrix of the form on the coroot space,
    /// `gram[i][j] = (alpha_i^vee, alpha_j^vee) = a_ij / d_j`.
    pub gram: Vec<Vec<Q>>,
    pub gram_inv: Vec<Vec<Q>>,
    /// Fundamental coweights in simple-coroot coordinates (row j of A^{-1}).
    pub fundamental_coweights: Vec<Coweight>,
    /// Positive roots, coordinates in the simple-root basis.
    pub pos_roots: Vec<Vec<i64>>,
    /// Positive coroots, coordinates in the simple-coroot basis.
    pub pos_coroots: Vec<Vec<i64>>,
    /// Highest root, simple-root coordinates (= finite marks).
    pub marks: Vec<i64>,
    /// Finite comarks; the affine node has mark = comark = 1.
    pub comarks: Vec<i64>,
    /// Coroot of the highest root, simple-coroot coordinates.
    pub theta_coroot: Vec<i64>,
    pub coxeter: i64,
    pub dual_coxeter: i64,
    /// Lacing number of the dual affine diagram (1, 2 or 3).
    pub lacing: i64,
    /// Least positive integer with `(P^vee, P^vee) in Z/m`.
    pub m: i64,
    /// Index of the coroot lattice in the coweight lattice, `|P^vee/Q^vee|`.
    pub e: i64,
    /// Nodes with mark 1 (minuscule coweight nodes).
    pub j_set: Vec<usize>,
    /// The coroot-space vector representing the finite Weyl vector:
    /// `(rho, alpha_i^vee) = 1` for all i.
    pub rho: Coweight,
    /// `|rho|^2` under the form.
    pub rho_sq: Q,
    /// Exponents of the finite Weyl group, increasing.
    pub exponents: Vec<i64>,
    /// Order of the finite Weyl group.
    pub weyl_order: u128,
}

fn cartan_matrix(kind: CartanKind) -> Vec<Vec<i64>> {
    let n = kind.rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let single = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match kind.family {
        Family::A => {
            for i in 0..n - 1 {
                single(&mut a, i, i + 1);
            }
        }
        Family::B => {
            for i in 0..n - 2 {
                single(&mut a, i, i + 1);
            }
            // alpha_{n-1} long, alpha_n short
            a[n - 2][n - 1] = -1;
            a[n - 1][n - 2] = -2;
        }
        Family::C => {
            for i in 0..n - 2 {
                single(&mut a, i, i + 1);
            }
            a[n - 2][n - 1] = -2;
            a[n - 1][n - 2] = -1;
        }
        Family::D => {
            for i in 0..n - 3 {
                single(&mut a, i, i + 1);
            }
            single(&mut a, n - 3, n - 2);
            single(&mut a, n - 3, n - 1);
        }
        Family::E => {
            // chain 1-3-4-5-6(-7(-8)), branch node 2 attached to 4
            let chain: Vec<usize> = [0usize, 2, 3, 4, 5, 6, 7][..n - 1].to_vec();
            for w in chain.windows(2) {
                single(&mut a, w[0], w[1]);
            }
            single(&mut a, 1, 3);
        }
        Family::F => {
            single(&mut a, 0, 1);
            a[1][2] = -1;
            a[2][1] = -2;
            single(&mut a, 2, 3);
        }
        Family::G => {
            // alpha_1 short: <alpha_2, alpha_1^vee> = -3
            a[0][1] = -3;
            a[1][0] = -1;
        }
    }
    a
}

fn symmetrizer(a: &[Vec<i64>]) -> Vec<Q> {
    let n = a.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    d[0] = Some(Q::one());
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                if i != j && a[i][j] != 0 {
                    if let (Some(di), None) = (d[i], d[j]) {
                        d[j] = Some(di * q(a[i][j]) / q(a[j][i]));
                        changed = true;
                    }
                }
            }
        }
    }
    let d: Vec<Q> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
    let mx = d.iter().cloned().max().unwrap();
    d.into_iter().map(|x| x / mx).collect()
}

/// Positive roots by closing simple roots under root strings.
fn positive_roots(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut roots: std::collections::BTreeSet<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|k| i64::from(k == i)).collect())
        .collect();
    let mut frontier: Vec<Vec<i64>> = roots.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for r in frontier {
            for i in 0..n {
                let p: i64 = (0..n).map(|j| r[j] * a[i][j]).sum();
                // alpha_i-string through r: r + alpha_i is a root iff m - p > 0
                let mut m = 0i64;
                loop {
                    let mut rm = r.clone();
                    rm[i] -= m + 1;
                    if roots.contains(&rm) {
                        m += 1;
                    } else {
                        break;
                    }
                }
                if m - p > 0 {
                    let mut nr = r.clone();
                    nr[i] += 1;
                    if roots.insert(nr.clone()) {
                        next.push(nr);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Vec<i64>> = roots.into_iter().collect();
    out.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    out
}

fn family_weyl_order(family: Family, rank: usize) -> u128 {
    let fact = |k: usize| -> u128 { (1..=k as u128).product() };
    match family {
        Family::A => fact(rank + 1),
        Family::B | Family::C => (1u128 << rank) * fact(rank),
        Family::D => (1u128 << (rank - 1)) * fact(rank),
        Family::G => 12,
        Family::F => 1152,
        Family::E => match rank {
            6 => 51_840,
            7 => 2_903_040,
            8 => 696_729_600,
            _ => unreachable!(),
        },
    }
}

/// Exponents from the conjugate partition of the height distribution of the
/// positive coroots. Works for reducible subsystems as well, since height
/// counts add over components.
pub(crate) fn exponents_from_heights(pos_coroots: &[Vec<i64>]) -> Vec<i64> {
    let mut counts: Vec<i64> = Vec::new();
    for cr in pos_coroots {
        let h = cr.iter().sum::<i64>() as usize;
        if counts.len() < h {
            counts.resize(h, 0);
        }
        counts[h - 1] += 1;
    }
    let mut exps = Vec::new();
    let mut j = 1i64;
    loop {
        let c = counts.iter().filter(|&&x| x >= j).count() as i64;
        if c == 0 {
            break;
        }
        exps.push(c);
        j += 1;
    }
    exps.sort_unstable();
    exps
}

pub fn build_root_system(kind: CartanKind) -> RootSystem {
    let n = kind.rank;
    let a = cartan_matrix(kind);
    let d = symmetrizer(&a);
    let gram: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| q(a[i][j]) / d[j]).collect())
        .collect();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(gram[i][j], gram[j][i], "gram not symmetric");
        }
    }
    let gram_inv = rat_mat_inv(&gram);
    let a_rat: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let a_inv = rat_mat_inv(&a_rat);
    let fundamental_coweights: Vec<Coweight> = (0..n).map(|j| Coweight(a_inv[j].clone())).collect();

    let pos_roots = positive_roots(&a);
    let root_norm_half = |r: &[i64]| -> Q {
        let mut s = Q::zero();
        for i in 0..n {
            for j in 0..n {
                s += q(r[i] * r[j] * a[i][j]) * d[i];
            }
        }
        s / q(2)
    };
    let theta = pos_roots.last().unwrap().clone();
    assert!(root_norm_half(&theta).is_one(), "highest root must be long");
    let pos_coroots: Vec<Vec<i64>> = pos_roots
        .iter()
        .map(|r| {
            let da = root_norm_half(r);
            (0..n)
                .map(|i| {
                    let c = q(r[i]) * d[i] / da;
                    assert!(c.is_integer());
                    c.to_integer()
                })
                .collect()
        })
        .collect();
    let theta_coroot: Vec<i64> = pos_coroots.last().unwrap().clone();
    let marks = theta.clone();
    let comarks: Vec<i64> = (0..n)
        .map(|i| {
            let c = q(marks[i]) * d[i];
            assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    let coxeter = 1 + marks.iter().sum::<i64>();
    let dual_coxeter = 1 + comarks.iter().sum::<i64>();
    let lacing = {
        let dm = d.iter().cloned().min().unwrap();
        let r = Q::one() / dm;
        assert!(r.is_integer());
        r.to_integer()
    };
    let e = {
        let det = rat_det(&a_rat);
        assert!(det.is_integer() && det.is_positive());
        det.to_integer()
    };
    let j_set: Vec<usize> = (0..n).filter(|&i| marks[i] == 1).collect();

    // (rho, alpha_i^vee) = 1 for all i  =>  rho = G^{-1} * ones
    let rho = Coweight(
        (0..n)
            .map(|i| (0..n).map(|j| gram_inv[i][j]).sum())
            .collect(),
    );
    let mut rho_sq = Q::zero();
    for i in 0..n {
        for j in 0..n {
            rho_sq += rho.0[i] * gram[i][j] * rho.0[j];
        }
    }

    let mut m = 1i64;
    for ci in &fundamental_coweights {
        for cj in &fundamental_coweights {
            let mut v = Q::zero();
            for i in 0..n {
                for j in 0..n {
                    v += ci.0[i] * gram[i][j] * cj.0[j];
                }
            }
            let den = *v.denom();
            m = m / num::integer::gcd(m, den) * den;
        }
    }

    let exponents = exponents_from_heights(&pos_coroots);
    let weyl_order = family_weyl_order(kind.family, n);

    let rs = RootSystem {
        kind,
        cartan: a,
        d,
        gram,
        gram_inv,
        fundamental_coweights,
        pos_roots,
        pos_coroots,
        marks,
        comarks,
        theta_coroot,
        coxeter,
        dual_coxeter,
        lacing,
        m,
        e,
        j_set,
        rho,
        rho_sq,
        exponents,
        weyl_order,
    };
    rs.validate();
    rs
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.kind.rank
    }

    /// Construction-time sanity checks tying independent routes together.
    fn validate(&self) {
        let n = self.rank();
        // Shephard-Todd: prod (m_i + 1) = |W|, sum m_i = number of positive coroots
        let prod: u128 = self.exponents.iter().map(|&m| (m + 1) as u128).product();
        assert_eq!(prod, self.weyl_order, "Shephard-Todd order mismatch");
        let s: i64 = self.exponents.iter().sum();
        assert_eq!(s as usize, self.pos_coroots.len());
        assert_eq!(
            self.pos_roots.len() as i64 * 2,
            self.coxeter * n as i64,
            "|Phi_+| != h*l/2"
        );
        // (theta^vee, theta^vee) = 2
        assert_eq!(self.form_ints(&self.theta_coroot, &self.theta_coroot), q(2));
        // s_i^2 = id and braid relations, on coroot coordinates
        let id = crate::weyl::WeylElement::identity(n);
        for i in 0..n {
            let si = crate::weyl::WeylElement::simple(self, i);
            assert_eq!(si.compose(&si), id, "s_i^2 != id");
            for j in 0..i {
                let sj = crate::weyl::WeylElement::simple(self, j);
                let ord = match self.cartan[i][j] * self.cartan[j][i] {
                    0 => 2,
                    1 => 3,
                    2 => 4,
                    3 => 6,
                    _ => unreachable!(),
                };
                let mut p = id.clone();
                for _ in 0..ord {
                    p = p.compose(&si.compose(&sj));
                }
                assert_eq!(p, id, "braid relation failed");
            }
        }
    }

    /// `<alpha_i, v>` for a coroot-space vector v.
    pub fn pairing_root(&self, i: usize, v: &Coweight) -> Q {
        (0..self.rank()).map(|k| q(self.cartan[k][i]) * v.0[k]).sum()
    }

    /// The invariant form on coroot-space vectors.
    pub fn form(&self, v: &Coweight, w: &Coweight) -> Q {
        let n = self.rank();
        let mut s = Q::zero();
        for i in 0..n {
            if v.0[i].is_zero() {
                continue;
            }
            for j in 0..n {
                s += v.0[i] * self.gram[i][j] * w.0[j];
            }
        }
        s
    }

    pub(crate) fn form_ints(&self, v: &[i64], w: &[i64]) -> Q {
        let n = self.rank();
        let mut s = Q::zero();
        for i in 0..n {
            if v[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += q(v[i]) * self.gram[i][j] * q(w[j]);
            }
        }
        s
    }

    /// Form value `(coroot, v)` for an integer coroot vector.
    pub fn form_coroot(&self, coroot: &[i64], v: &Coweight) -> Q {
        let n = self.rank();
        let mut s = Q::zero();
        for i in 0..n {
            if coroot[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += q(coroot[i]) * self.gram[i][j] * v.0[j];
            }
        }
        s
    }

    /// Simple reflection on a coroot-space vector.
    pub fn reflect(&self, i: usize, v: &Coweight) -> Coweight {
        let p = self.pairing_root(i, v);
        let mut out = v.clone();
        out.0[i] -= p;
        out
    }

    /// Membership in the coweight lattice: all pairings with simple roots
    /// integral.
    pub fn in_coweight_lattice(&self, v: &Coweight) -> bool {
        (0..self.rank()).all(|i| self.pairing_root(i, v).is_integer())
    }

    /// Membership in the coroot lattice: integer coordinates.
    pub fn in_coroot_lattice(&self, v: &Coweight) -> bool {
        v.0.iter().all(|x| x.is_integer())
    }

    /// Pairing coordinates `<alpha_i, v>` of a coweight-lattice point.
    pub fn coweight_coords(&self, v: &Coweight) -> Vec<i64> {
        (0..self.rank())
            .map(|i| {
                let p = self.pairing_root(i, v);
                assert!(p.is_integer());
                p.to_integer()
            })
            .collect()
    }

    /// Inverse of `coweight_coords`.
    pub fn coweight_from_coords(&self, x: &[i64]) -> Coweight {
        let n = self.rank();
        let mut v = Coweight::zero(n);
        for (j, &c) in x.iter().enumerate() {
            for k in 0..n {
                v.0[k] += q(c) * self.fundamental_coweights[j].0[k];
            }
        }
        v
    }

    /// `(alpha, rho)` for a positive root alpha given in root coordinates:
    /// the weighted height `sum c_i d_i`.
    pub fn weighted_height(&self, root: &[i64]) -> Q {
        root.iter()
            .zip(&self.d)
            .map(|(&c, &di)| q(c) * di)
            .sum()
    }

    /// True if the integer coroot vector is a short coroot (norm 2), i.e.
    /// the coroot of a long root.
    pub fn coroot_is_short(&self, coroot: &[i64]) -> bool {
        self.form_ints(coroot, coroot) == q(2)
    }
}

/// A standard-Levi datum: a subset of simple-root nodes.
#[derive(Debug, Clone)]
pub struct LeviDatum {
    pub subset: Vec<usize>,
    /// Irreducible factors of the induced subdiagram.
    pub components: Vec<CartanKind>,
    /// Exponents of the Levi Weyl group (multiset union over factors).
    pub exponents: Vec<i64>,
    pub weyl_order: u128,
    /// Positive coroots of the Levi subsystem (coordinates in the ambient
    /// simple-coroot basis: support inside `subset`).
    pub pos_coroots: Vec<Vec<i64>>,
}

impl LeviDatum {
    pub fn semisimple_rank(&self) -> usize {
        self.exponents.len()
    }
}

/// Classify a connected induced subdiagram given by `nodes` (ambient indices)
/// with the ambient Cartan matrix restricted to it.
fn classify_component(rs: &RootSystem, nodes: &[usize]) -> CartanKind {
    let k = nodes.len();
    let a = |i: usize, j: usize| rs.cartan[nodes[i]][nodes[j]];
    if k == 1 {
        return CartanKind::new(Family::A, 1).unwrap();
    }
    let mut triple = None;
    let mut double = None;
    let mut deg = vec![0usize; k];
    for i in 0..k {
        for j in 0..k {
            if i != j && a(i, j) != 0 {
                deg[i] += 1;
                let bond = a(i, j) * a(j, i);
                if bond == 3 {
                    triple = Some((i, j));
                } else if bond == 2 && i < j {
                    double = Some((i, j));
                }
            }
        }
    }
    if triple.is_some() {
        return CartanKind::new(Family::G, 2).unwrap();
    }
    if let Some((i, j)) = double {
        if k == 2 {
            return CartanKind::new(Family::B, 2).unwrap();
        }
        if deg[i] == 2 && deg[j] == 2 {
            return CartanKind::new(Family::F, 4).unwrap();
        }
        // chain with the double bond at one end; B if the end node is the
        // short root (its coroot pairs -2 against the neighbor root)
        let (end, inner) = if deg[i] == 1 { (i, j) } else { (j, i) };
        let fam = if a(end, inner) == -2 { Family::B } else { Family::C };
        return CartanKind::new(fam, k).unwrap();
    }
    if let Some(branch) = (0..k).find(|&i| deg[i] == 3) {
        // arm lengths from the branch node
        let mut arms = Vec::new();
        for s in (0..k).filter(|&j| j != branch && a(branch, j) != 0) {
            let mut len = 1;
            let mut prev = branch;
            let mut cur = s;
            loop {
                let next = (0..k).find(|&t| t != prev && t != cur && a(cur, t) != 0);
                match next {
                    Some(t) => {
                        prev = cur;
                        cur = t;
                        len += 1;
                    }
                    None => break,
                }
            }
            arms.push(len);
        }
        arms.sort_unstable();
        return match arms.as_slice() {
            [1, 1, _] => CartanKind::new(Family::D, k).unwrap(),
            [1, 2, _] => CartanKind::new(Family::E, k).unwrap(),
            _ => panic!("unrecognized branched diagram"),
        };
    }
    CartanKind::new(Family::A, k).unwrap()
}

pub fn levi_datum(rs: &RootSystem, subset: &[usize]) -> Result<LeviDatum> {
    let n = rs.rank();
    let mut seen = vec![false; n];
    for &i in subset {
        if i >= n || seen[i] {
            return Err(Error::BadLeviIndex { index: i, rank: n });
        }
        seen[i] = true;
    }
    let mut subset: Vec<usize> = subset.to_vec();
    subset.sort_unstable();

    // connected components of the induced diagram
    let mut components = Vec::new();
    let mut assigned = vec![false; subset.len()];
    for s in 0..subset.len() {
        if assigned[s] {
            continue;
        }
        let mut comp = vec![s];
        assigned[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for y in 0..subset.len() {
                if !assigned[y] && rs.cartan[subset[x]][subset[y]] != 0 {
                    assigned[y] = true;
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        let nodes: Vec<usize> = comp.iter().map(|&x| subset[x]).collect();
        components.push(classify_component(rs, &nodes));
    }
    components.sort();

    let pos_coroots: Vec<Vec<i64>> = rs
        .pos_coroots
        .iter()
        .filter(|cr| {
            (0..n).all(|i| cr[i] == 0 || subset.contains(&i))
        })
        .cloned()
        .collect();
    let exponents = exponents_from_heights(&pos_coroots);
    let weyl_order: u128 = components
        .iter()
        .map(|c| family_weyl_order(c.family, c.rank))
        .product();
    assert_eq!(
        weyl_order,
        exponents.iter().map(|&m| (m + 1) as u128).product::<u128>(),
        "Shephard-Todd mismatch for Levi"
    );
    assert_eq!(exponents.len(), subset.len());
    Ok(LeviDatum {
        subset,
        components,
        exponents,
        weyl_order,
        pos_coroots,
    })
}

/// Named Levi fixtures used by the trivial-W-algebra table scan and the CLI.
///
/// `principal` is the full diagram. `A6` is the A6 chain {1,3,4,5,6,7}
/// inside E7. `blocks` realizes, for classical types of rank n = u*l/2 (or
/// A_{ul}), the regular nilpotent of partition [u,...,u(,1)] as gl_u blocks:
/// nodes {tu+1,...,tu+u-1} for t = 0,1,.... The block subsets are a
/// convention (one standard choice per partition row), not forced by the
/// counting data.
pub fn levi_fixture(rs: &RootSystem, name: &str, u: i64) -> Result<LeviDatum> {
    let n = rs.rank();
    match name {
        "principal" => levi_datum(rs, &(0..n).collect::<Vec<_>>()),
        "A6" if rs.kind == CartanKind::new(Family::E, 7).unwrap() => {
            // Bourbaki nodes 1,3,4,5,6,7 -> zero-based
            levi_datum(rs, &[0, 2, 3, 4, 5, 6])
        }
        "blocks" => {
            let u = u as usize;
            if u < 1 {
                return Err(Error::UnknownFixture(name.into()));
            }
            let nblocks = match rs.kind.family {
                // A_{ul}: partition [u^l, 1] of ul + 1
                Family::A if (n % u) == 0 => n / u,
                // B_n: so_{2n+1}, [u^l, 1], n = ul/2; C_n: sp_{2n}, [u^l];
                // D_n: so_{2n}, [u^l]; one gl_u block per pair of u's.
                Family::B | Family::C | Family::D if (2 * n) % u == 0 && ((2 * n / u) % 2 == 0) => {
                    n / u
                }
                _ => return Err(Error::UnknownFixture(format!("blocks(u={u}) for {}", rs.kind))),
            };
            let mut subset = Vec::new();
            for t in 0..nblocks {
                for s in 0..u - 1 {
                    subset.push(t * u + s);
                }
            }
            if subset.iter().any(|&i| i >= n) {
                return Err(Error::UnknownFixture(format!("blocks(u={u}) for {}", rs.kind)));
            }
            levi_datum(rs, &subset)
        }
        _ => Err(Error::UnknownFixture(name.into())),
    }
}

/// All kinds of rank at most `max_rank`, for scans.
pub fn kinds_up_to_rank(max_rank: usize) -> Vec<CartanKind> {
    let mut out = Vec::new();
    for r in 1..=max_rank {
        for f in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G] {
            if let Ok(k) = CartanKind::new(f, r) {
                out.push(k);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qr;

    #[test]
    fn a1_basic_data() {
        let rs = build_root_system(CartanKind::parse("A1").unwrap());
        assert_eq!(rs.dual_coxeter, 2);
        assert_eq!(rs.e, 2);
        assert_eq!(rs.m, 2);
        assert_eq!(rs.exponents, vec![1]);
        assert_eq!(rs.theta_coroot, vec![1]);
        assert_eq!(rs.form_ints(&[1], &[1]), q(2));
        assert_eq!(rs.rho_sq, qr(1, 2));
    }

    #[test]
    fn g2_basic_data() {
        let rs = build_root_system(CartanKind::parse("G2").unwrap());
        assert_eq!(rs.dual_coxeter, 4);
        assert_eq!(rs.coxeter, 6);
        assert_eq!(rs.lacing, 3);
        assert_eq!(rs.e, 1);
        assert_eq!(rs.exponents, vec![1, 5]);
        assert_eq!(rs.pos_roots.len(), 6);
    }

    #[test]
    fn e7_exponents_and_order() {
        let rs = build_root_system(CartanKind::parse("E7").unwrap());
        assert_eq!(rs.dual_coxeter, 18);
        assert_eq!(rs.exponents, vec![1, 5, 7, 9, 11, 13, 17]);
        assert_eq!(rs.weyl_order, 2_903_040);
    }

    #[test]
    fn known_exponent_tables() {
        for (name, exps) in [
            ("A3", vec![1, 2, 3]),
            ("B3", vec![1, 3, 5]),
            ("C3", vec![1, 3, 5]),
            ("D4", vec![1, 3, 3, 5]),
            ("F4", vec![1, 5, 7, 11]),
            ("E6", vec![1, 4, 5, 7, 8, 11]),
            ("E8", vec![1, 7, 11, 13, 17, 19, 23, 29]),
        ] {
            let rs = build_root_system(CartanKind::parse(name).unwrap());
            assert_eq!(rs.exponents, exps, "{name}");
        }
    }

    #[test]
    fn affine_sum_rule_all_kinds() {
        for kind in kinds_up_to_rank(8) {
            let rs = build_root_system(kind);
            assert_eq!(rs.dual_coxeter, 1 + rs.comarks.iter().sum::<i64>());
            assert_eq!(rs.coxeter, 1 + rs.marks.iter().sum::<i64>());
            // coroot heights bounded by... the *short* coroot of theta has
            // height h^vee - 1; heights in general stay below r^vee h^vee.
            let top = rs
                .pos_coroots
                .iter()
                .map(|c| c.iter().sum::<i64>())
                .max()
                .unwrap();
            assert!(top < rs.lacing * rs.dual_coxeter);
            assert_eq!(rs.theta_coroot.iter().sum::<i64>(), rs.dual_coxeter - 1);
        }
    }

    #[test]
    fn gram_positive_definite_all_kinds() {
        for kind in kinds_up_to_rank(8) {
            let rs = build_root_system(kind);
            for t in 1..=rs.rank() {
                let minor: Vec<Vec<Q>> =
                    (0..t).map(|i| rs.gram[i][..t].to_vec()).collect();
                assert!(rat_det(&minor) > Q::zero(), "{kind} minor {t}");
            }
        }
    }

    #[test]
    fn fundamental_coweight_forms() {
        let rs = build_root_system(CartanKind::parse("A1").unwrap());
        let w = &rs.fundamental_coweights[0];
        assert_eq!(rs.form(w, w), qr(1, 2));
        let rs = build_root_system(CartanKind::parse("A2").unwrap());
        let (w1, w2) = (&rs.fundamental_coweights[0], &rs.fundamental_coweights[1]);
        assert_eq!(rs.form(w1, w2), qr(1, 3));
        assert_eq!(rs.form(w1, w1), qr(2, 3));
    }

    #[test]
    fn reflections_preserve_form() {
        let rs = build_root_system(CartanKind::parse("B3").unwrap());
        let v = Coweight(vec![qr(1, 2), qr(-2, 3), q(5)]);
        let w = Coweight(vec![q(1), qr(7, 5), qr(-1, 4)]);
        for i in 0..3 {
            let (vi, wi) = (rs.reflect(i, &v), rs.reflect(i, &w));
            assert_eq!(rs.form(&vi, &wi), rs.form(&v, &w));
        }
    }

    #[test]
    fn levi_components_a3() {
        let rs = build_root_system(CartanKind::parse("A3").unwrap());
        let l = levi_datum(&rs, &[0, 2]).unwrap();
        assert_eq!(l.components.len(), 2);
        assert!(l.components.iter().all(|c| c.family == Family::A && c.rank == 1));
        assert_eq!(l.exponents, vec![1, 1]);
        assert_eq!(l.weyl_order, 4);
    }

    #[test]
    fn levi_empty_is_trivial() {
        let rs = build_root_system(CartanKind::parse("G2").unwrap());
        let l = levi_datum(&rs, &[]).unwrap();
        assert_eq!(l.weyl_order, 1);
        assert_eq!(l.semisimple_rank(), 0);
        assert!(l.exponents.is_empty());
    }

    #[test]
    fn levi_a6_in_e7() {
        let rs = build_root_system(CartanKind::parse("E7").unwrap());
        let l = levi_fixture(&rs, "A6", 0).unwrap();
        assert_eq!(l.components, vec![CartanKind::new(Family::A, 6).unwrap()]);
        assert_eq!(l.exponents, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(l.weyl_order, 5040);
    }

    #[test]
    fn levi_rejects_bad_indices() {
        let rs = build_root_system(CartanKind::parse("A2").unwrap());
        assert!(levi_datum(&rs, &[0, 0]).is_err());
        assert!(levi_datum(&rs, &[5]).is_err());
    }

    #[test]
    fn levi_classification_bc() {
        let rs = build_root_system(CartanKind::parse("B4").unwrap());
        let l = levi_datum(&rs, &[1, 2, 3]).unwrap();
        assert_eq!(l.components, vec![CartanKind::new(Family::B, 3).unwrap()]);
        let rs = build_root_system(CartanKind::parse("C4").unwrap());
        let l = levi_datum(&rs, &[1, 2, 3]).unwrap();
        assert_eq!(l.components, vec![CartanKind::new(Family::C, 3).unwrap()]);
    }

    #[test]
    fn blocks_fixture_a4_u5() {
        // A4 = sl_5, u=5, l=1: partition [5]... blocks needs n % u == 0;
        // sl_{ul+1} has rank ul: A4 with u=2 -> blocks {1}, {3} (zero-based {0},{2})
        let rs = build_root_system(CartanKind::parse("A4").unwrap());
        let l = levi_fixture(&rs, "blocks", 2).unwrap();
        assert_eq!(l.subset, vec![0, 2]);
        assert_eq!(l.weyl_order, 4);
    }

    #[test]
    fn invalid_ranks_rejected() {
        assert!(CartanKind::parse("D3").is_err());
        assert!(CartanKind::parse("E9").is_err());
        assert!(CartanKind::parse("F5").is_err());
        assert!(CartanKind::parse("B1").is_err());
        assert!(CartanKind::parse("A0").is_err());
    }
}
