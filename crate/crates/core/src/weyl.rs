//! Finite Weyl group elements as integer matrices on coroot coordinates.

use crate::rootdata::{Coweight, RootSystem};
use crate::{q, Error, Q, Result};
use num::Zero;

/// A finite Weyl group element, stored as its matrix in the simple-coroot
/// basis (column j = image of alpha_j^vee). Equality and hashing go through
/// the matrix; reduced words are recovered on demand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub n: usize,
    /// Row-major n*n.
    pub mat: Vec<i64>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        let mut mat = vec![0; n * n];
        for i in 0..n {
            mat[i * n + i] = 1;
        }
        WeylElement { n, mat }
    }

    pub fn simple(rs: &RootSystem, i: usize) -> Self {
        let n = rs.rank();
        let mut w = Self::identity(n);
        // s_i(v)_i = v_i - sum_j a_ji v_j
        for j in 0..n {
            w.mat[i * n + j] -= rs.cartan[j][i];
        }
        w
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Matrix product: `self * other` acts as other-then-self.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.n;
        debug_assert_eq!(n, other.n);
        let mut mat = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.mat[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    mat[i * n + j] += a * other.mat[k * n + j];
                }
            }
        }
        WeylElement { n, mat }
    }

    pub fn apply(&self, v: &Coweight) -> Coweight {
        let n = self.n;
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            for j in 0..n {
                let a = self.mat[i * n + j];
                if a != 0 {
                    out[i] += q(a) * v.0[j];
                }
            }
        }
        Coweight(out)
    }

    pub fn apply_ints(&self, v: &[i64]) -> Vec<i64> {
        let n = self.n;
        let mut out = vec![0i64; n];
        for i in 0..n {
            for j in 0..n {
                out[i] += self.mat[i * n + j] * v[j];
            }
        }
        out
    }

    /// Exact inverse (the matrix is unimodular).
    pub fn inverse(&self) -> WeylElement {
        let n = self.n;
        let m: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| q(self.mat[i * n + j])).collect())
            .collect();
        let inv = crate::rootdata::rat_mat_inv(&m);
        let mut mat = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                assert!(inv[i][j].is_integer());
                mat[i * n + j] = inv[i][j].to_integer();
            }
        }
        WeylElement { n, mat }
    }

    /// Dimension of the fixed space, `rank - rank(M - I)` over the rationals.
    pub fn fixed_space_dim(&self) -> usize {
        let n = self.n;
        let mut m: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| q(self.mat[i * n + j]) - if i == j { q(1) } else { q(0) })
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for col in 0..n {
            if let Some(p) = (rank..n).find(|&r| !m[r][col].is_zero()) {
                m.swap(rank, p);
                let pv = m[rank][col];
                for x in m[rank].iter_mut() {
                    *x /= pv;
                }
                for r in 0..n {
                    if r != rank && !m[r][col].is_zero() {
                        let f = m[r][col];
                        for j in 0..n {
                            let s = m[rank][j];
                            m[r][j] -= f * s;
                        }
                    }
                }
                rank += 1;
            }
        }
        n - rank
    }

    /// Canonical reduced word (greedy smallest descent), read in application
    /// order: `self = s_{w[len-1]} ... s_{w[0]}`. Peeling a right descent
    /// strips the first-applied letter, so the letters come off in
    /// application order already.
    pub fn reduced_word(&self, rs: &RootSystem) -> Vec<u8> {
        let n = self.n;
        let mut cur = self.clone();
        let mut word = Vec::new();
        'outer: loop {
            for i in 0..n {
                // descent: cur(alpha_i^vee) negative
                let mut img = vec![0i64; n];
                for r in 0..n {
                    img[r] = cur.mat[r * n + i];
                }
                if img.iter().all(|&x| x <= 0) && img.iter().any(|&x| x != 0) {
                    cur = cur.compose(&WeylElement::simple(rs, i));
                    word.push(i as u8);
                    continue 'outer;
                }
            }
            break;
        }
        assert!(cur.is_identity(), "descent did not reach the identity");
        debug_assert_eq!(
            word.len(),
            rs.pos_coroots
                .iter()
                .filter(|cr| self.apply_ints(cr).iter().all(|&x| x <= 0))
                .count(),
            "word length vs finite inversion count"
        );
        word
    }

    pub fn length(&self, rs: &RootSystem) -> usize {
        self.reduced_word(rs).len()
    }

    pub fn sign(&self, rs: &RootSystem) -> i64 {
        if self.length(rs) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Build a Weyl element from a word in application order
/// (`word = [i_1, ..., i_t]` gives `s_{i_t} ... s_{i_1}`).
pub fn from_word(rs: &RootSystem, word: &[u8]) -> WeylElement {
    let mut w = WeylElement::identity(rs.rank());
    for &i in word {
        w = WeylElement::simple(rs, i as usize).compose(&w);
    }
    w
}

/// Enumerate the subgroup generated by the simple reflections in `gens`,
/// failing if it exceeds `gate` elements.
pub fn enumerate_subgroup(
    rs: &RootSystem,
    gens: &[usize],
    gate: usize,
) -> Result<Vec<WeylElement>> {
    let id = WeylElement::identity(rs.rank());
    let gens: Vec<WeylElement> = gens.iter().map(|&i| WeylElement::simple(rs, i)).collect();
    let mut seen = std::collections::HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![id.clone()];
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let x = g.compose(w);
                if seen.insert(x.clone()) {
                    if seen.len() > gate {
                        return Err(Error::GateExceeded(format!(
                            "subgroup enumeration past {gate} elements"
                        )));
                    }
                    out.push(x.clone());
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// The full finite Weyl group (gated).
pub fn enumerate_weyl(rs: &RootSystem, gate: usize) -> Result<Vec<WeylElement>> {
    enumerate_subgroup(rs, &(0..rs.rank()).collect::<Vec<_>>(), gate)
}

/// Orbit of a coroot-space vector under the full Weyl group, breadth-first.
pub fn orbit(rs: &RootSystem, start: &Coweight) -> Vec<Coweight> {
    let mut seen = std::collections::HashSet::new();
    seen.insert(start.clone());
    let mut out = vec![start.clone()];
    let mut frontier = vec![start.clone()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for i in 0..rs.rank() {
                let w = rs.reflect(i, v);
                if seen.insert(w.clone()) {
                    out.push(w.clone());
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_root_system, CartanKind};

    #[test]
    fn weyl_orders_by_bfs() {
        for (name, n) in [("A2", 6), ("B2", 8), ("G2", 12), ("A3", 24), ("B3", 48)] {
            let rs = build_root_system(CartanKind::parse(name).unwrap());
            let w = enumerate_weyl(&rs, 100).unwrap();
            assert_eq!(w.len(), n, "{name}");
            assert_eq!(w.len() as u128, rs.weyl_order);
        }
    }

    #[test]
    fn word_roundtrip() {
        let rs = build_root_system(CartanKind::parse("B3").unwrap());
        for w in enumerate_weyl(&rs, 100).unwrap() {
            let word = w.reduced_word(&rs);
            assert_eq!(from_word(&rs, &word), w);
        }
    }

    #[test]
    fn longest_element_length() {
        let rs = build_root_system(CartanKind::parse("G2").unwrap());
        let max = enumerate_weyl(&rs, 100)
            .unwrap()
            .iter()
            .map(|w| w.length(&rs))
            .max()
            .unwrap();
        assert_eq!(max, rs.pos_roots.len());
    }

    #[test]
    fn orbit_of_rho_is_regular() {
        let rs = build_root_system(CartanKind::parse("B2").unwrap());
        assert_eq!(orbit(&rs, &rs.rho).len() as u128, rs.weyl_order);
    }

    #[test]
    fn gate_is_enforced() {
        let rs = build_root_system(CartanKind::parse("A3").unwrap());
        assert!(enumerate_weyl(&rs, 5).is_err());
    }
}
