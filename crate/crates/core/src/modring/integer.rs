//! Integer (`Z`) linear algebra on small matrices with overflow-checked
//! `i128` arithmetic: Hermite form, kernels, Smith invariants, determinants.

use super::ext_gcd;
use crate::error::{Error, Result};

fn ck_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("integer elimination"))
}

fn ck_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("integer elimination"))
}

fn combine(s: i128, p: i128, t: i128, q: i128) -> Result<i128> {
    ck_add(ck_mul(s, p)?, ck_mul(t, q)?)
}

/// Row-style Hermite normal form of the lattice spanned by `rows`
/// (each of length `k`): echelon, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`, zero rows dropped.
pub fn hermite_rows(k: usize, rows: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    if let Some(r) = a.iter().find(|r| r.len() != k) {
        return Err(Error::Dimension(format!("row of length {} (expected {k})", r.len())));
    }
    let mut r = 0;
    for j in 0..k {
        if r >= a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&p| a[p][j] != 0) else { continue };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][j] == 0 {
                continue;
            }
            let (x, y) = (a[r][j], a[i][j]);
            let (g, s, t) = ext_gcd(x, y);
            let (u, v) = (-(y / g), x / g);
            for c in j..k {
                let (p, q) = (a[r][c], a[i][c]);
                a[r][c] = combine(s, p, t, q)?;
                a[i][c] = combine(u, p, v, q)?;
            }
        }
        if a[r][j] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        let piv = a[r][j];
        for i in 0..r {
            let q = a[i][j].div_euclid(piv);
            if q != 0 {
                for c in j..k {
                    a[i][c] = ck_add(a[i][c], -ck_mul(q, a[r][c])?)?;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    Ok(a)
}

/// Basis of `{v in Z^c : m v = 0}` for an `r x c` matrix given by rows.
/// The result is saturated: it spans the full integer kernel.
pub fn integer_kernel(c: usize, m: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let r = m.len();
    let aug: Vec<Vec<i128>> = (0..c)
        .map(|j| {
            let mut row: Vec<i128> = m.iter().map(|mr| mr[j]).collect();
            row.extend((0..c).map(|t| i128::from(t == j)));
            row
        })
        .collect();
    Ok(hermite_rows(r + c, &aug)?
        .into_iter()
        .filter(|row| row[..r].iter().all(|&x| x == 0))
        .map(|row| row[r..].to_vec())
        .collect())
}

/// Nonzero Smith invariants `d1 | d2 | ...` (all positive) of the matrix.
pub fn smith_invariants(rows: &[Vec<i128>]) -> Result<Vec<i128>> {
    let k = rows.first().map_or(0, Vec::len);
    let mut a = hermite_rows(k, rows)?;
    let nr = a.len();
    let mut diag = Vec::new();
    for t in 0..nr {
        // Move the pivot of row t to column t.
        let Some(pc) = (t..k).find(|&j| a[t][j] != 0) else { break };
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut changed = false;
            for j in t + 1..k {
                if a[t][j] == 0 {
                    continue;
                }
                let (x, y) = (a[t][t], a[t][j]);
                if y % x == 0 {
                    let q = y / x;
                    for row in a.iter_mut() {
                        row[j] = ck_add(row[j], -ck_mul(q, row[t])?)?;
                    }
                } else {
                    let (g, s, tt) = ext_gcd(x, y);
                    let (u, v) = (-(y / g), x / g);
                    for row in a.iter_mut() {
                        let (p, q) = (row[t], row[j]);
                        row[t] = combine(s, p, tt, q)?;
                        row[j] = combine(u, p, v, q)?;
                    }
                    changed = true;
                }
            }
            for i in t + 1..nr {
                if a[i][t] == 0 {
                    continue;
                }
                let (x, y) = (a[t][t], a[i][t]);
                if y % x == 0 {
                    let q = y / x;
                    for c in 0..k {
                        a[i][c] = ck_add(a[i][c], -ck_mul(q, a[t][c])?)?;
                    }
                } else {
                    let (g, s, tt) = ext_gcd(x, y);
                    let (u, v) = (-(y / g), x / g);
                    for c in 0..k {
                        let (p, q) = (a[t][c], a[i][c]);
                        a[t][c] = combine(s, p, tt, q)?;
                        a[i][c] = combine(u, p, v, q)?;
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        diag.push(a[t][t].abs());
    }
    diag.retain(|&d| d != 0);
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let (g, _, _) = ext_gcd(diag[i], diag[j]);
            let l = ck_mul(diag[i] / g, diag[j])?;
            diag[i] = g;
            diag[j] = l;
        }
    }
    Ok(diag)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i128>]) -> Result<i128> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(1);
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&p| a[p][k] != 0) else { return Ok(0) };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ck_add(ck_mul(a[i][j], a[k][k])?, -ck_mul(a[i][k], a[k][j])?)?;
                a[i][j] = num / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

/// Index of the lattice spanned by `rows` inside its saturation
/// `(Q-span) cap Z^k`, i.e. the product of the Smith invariants.
pub fn saturation_index(rows: &[Vec<i128>]) -> Result<i128> {
    smith_invariants(rows)?.into_iter().try_fold(1i128, ck_mul)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &[Vec<i128>]) -> i128 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn hermite_example() {
        let h = hermite_rows(2, &[vec![2, 4], vec![3, 1]]).unwrap();
        // (3,1) - (2,4) = (1,-3), reduced by (0,10) to (1,7).
        assert_eq!(h, vec![vec![1, 7], vec![0, 10]]);
    }

    #[test]
    fn kernel_example() {
        // x + y + z = 0 has kernel of rank 2.
        let k = integer_kernel(3, &[vec![1, 1, 1]]).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v.iter().sum::<i128>(), 0);
        }
        // Saturated: 2x - 2y = 0 has kernel spanned by (1, 1).
        let k = integer_kernel(2, &[vec![2, -2]]).unwrap();
        assert_eq!(k, vec![vec![1, 1]]);
    }

    #[test]
    fn smith_example() {
        assert_eq!(smith_invariants(&[vec![2, 0], vec![0, 3]]).unwrap(), vec![1, 6]);
        assert_eq!(smith_invariants(&[vec![2, 4], vec![4, 8]]).unwrap(), vec![2]);
        assert_eq!(saturation_index(&[vec![2, 0], vec![0, 2]]).unwrap(), 4);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn square() -> impl Strategy<Value = Vec<Vec<i128>>> {
            (1usize..=5).prop_flat_map(|n| {
                proptest::collection::vec(proptest::collection::vec(-6i128..=6, n), n)
            })
        }

        proptest! {
            #[test]
            fn bareiss_matches_cofactor(m in square()) {
                prop_assert_eq!(determinant(&m).unwrap(), cofactor_det(&m));
            }

            #[test]
            fn smith_product_is_abs_det(m in square()) {
                let det = cofactor_det(&m);
                let inv = smith_invariants(&m).unwrap();
                if det != 0 {
                    prop_assert_eq!(inv.len(), m.len());
                    prop_assert_eq!(inv.iter().product::<i128>(), det.abs());
                } else {
                    prop_assert!(inv.len() < m.len());
                }
            }

            #[test]
            fn kernel_vectors_vanish(m in square()) {
                let c = m.len();
                let ker = integer_kernel(c, &m).unwrap();
                for v in &ker {
                    for row in &m {
                        prop_assert_eq!(row.iter().zip(v).map(|(a, b)| a * b).sum::<i128>(), 0);
                    }
                }
                let rank = hermite_rows(c, &m).unwrap().len();
                prop_assert_eq!(ker.len() + rank, c);
                if !ker.is_empty() {
                    prop_assert_eq!(saturation_index(&ker).unwrap(), 1);
                }
            }
        }
    }
}
