//! Smith normal form over the integers, with both transform matrices.
//!
//! Sizes here are tiny (rank <= 8), so the plain gcd-pivot algorithm in i128
//! is plenty; growth is bounded well below overflow at desk scale.

/// `left * m * right = diag(d)` with `left`, `right` unimodular.
#[derive(Debug, Clone)]
pub struct Snf {
    pub n: usize,
    pub diag: Vec<i128>,
    pub left: Vec<i128>,
    pub right: Vec<i128>,
}

pub fn smith_normal_form(m: &[i128], n: usize) -> Snf {
    let mut a = m.to_vec();
    let mut left = ident(n);
    let mut right = ident(n);
    for t in 0..n {
        loop {
            // find the nonzero pivot of least magnitude in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    let v = a[i * n + j];
                    if v != 0 && best.map_or(true, |(bi, bj)| v.abs() < a[bi * n + bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match best {
                Some(p) => p,
                None => break,
            };
            swap_rows(&mut a, &mut left, n, t, pi);
            swap_cols(&mut a, &mut right, n, t, pj);
            let p = a[t * n + t];
            let mut clean = true;
            for i in t + 1..n {
                let f = a[i * n + t].div_euclid(p);
                if f != 0 {
                    add_row(&mut a, &mut left, n, i, t, -f);
                }
                if a[i * n + t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let f = a[t * n + j].div_euclid(p);
                if f != 0 {
                    add_col(&mut a, &mut right, n, j, t, -f);
                }
                if a[t * n + j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // enforce divisibility of the remaining block by the pivot
                let mut fixed = true;
                'scan: for i in t + 1..n {
                    for j in t + 1..n {
                        if a[i * n + j] % p != 0 {
                            add_row(&mut a, &mut left, n, t, i, 1);
                            fixed = false;
                            break 'scan;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
        }
        if a[t * n + t] < 0 {
            negate_row(&mut a, &mut left, n, t);
        }
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    Snf {
        n,
        diag,
        left,
        right,
    }
}

fn ident(n: usize) -> Vec<i128> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn swap_rows(a: &mut [i128], left: &mut [i128], n: usize, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    for j in 0..n {
        a.swap(r1 * n + j, r2 * n + j);
        left.swap(r1 * n + j, r2 * n + j);
    }
}

fn swap_cols(a: &mut [i128], right: &mut [i128], n: usize, c1: usize, c2: usize) {
    if c1 == c2 {
        return;
    }
    for i in 0..n {
        a.swap(i * n + c1, i * n + c2);
        right.swap(i * n + c1, i * n + c2);
    }
}

fn add_row(a: &mut [i128], left: &mut [i128], n: usize, dst: usize, src: usize, f: i128) {
    for j in 0..n {
        a[dst * n + j] += f * a[src * n + j];
        left[dst * n + j] += f * left[src * n + j];
    }
}

fn add_col(a: &mut [i128], right: &mut [i128], n: usize, dst: usize, src: usize, f: i128) {
    for i in 0..n {
        a[i * n + dst] += f * a[i * n + src];
        right[i * n + dst] += f * right[i * n + src];
    }
}

fn negate_row(a: &mut [i128], left: &mut [i128], n: usize, r: usize) {
    for j in 0..n {
        a[r * n + j] = -a[r * n + j];
        left[r * n + j] = -left[r * n + j];
    }
}

/// Exact inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &[i128], n: usize) -> Vec<i128> {
    use crate::rootdata::rat_mat_inv;
    use crate::q;
    let rat: Vec<Vec<crate::Q>> = (0..n)
        .map(|i| (0..n).map(|j| q(m[i * n + j] as i64)).collect())
        .collect();
    let inv = rat_mat_inv(&rat);
    let mut out = vec![0i128; n * n];
    for i in 0..n {
        for j in 0..n {
            assert!(inv[i][j].is_integer(), "matrix not unimodular");
            out[i * n + j] = inv[i][j].to_integer() as i128;
        }
    }
    out
}
