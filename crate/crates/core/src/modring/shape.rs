use super::{ext_gcd, factorize, gcd, inverse_mod};
use crate::error::{Error, Result};

/// Invariant factors `d1 | d2 | ... | dk` of a finite abelian group, each
/// `>= 2`. The empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbelianShape {
    factors: Vec<u64>,
}

impl AbelianShape {
    pub fn trivial() -> Self {
        AbelianShape::default()
    }

    /// Validates an explicit divisibility chain.
    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<Self> {
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::Precondition(format!("invariant factors {factors:?} must be >= 2")));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Precondition(format!("{factors:?} is not a divisibility chain")));
        }
        Ok(AbelianShape { factors })
    }

    /// Shape of a product of cyclic groups of the given orders (zeros not
    /// allowed; ones are dropped).
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        // Split into prime powers, then recombine largest-with-largest.
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &d in orders {
            assert!(d >= 1, "cyclic order must be positive");
            for (p, e) in factorize(d) {
                by_prime.entry(p).or_default().push(p.pow(e));
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable();
            for (slot, q) in factors.iter_mut().rev().zip(powers.iter().rev()) {
                *slot *= q;
            }
        }
        AbelianShape { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// Number of invariant factors (minimal number of generators).
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    /// Direct product.
    pub fn product(&self, other: &Self) -> Self {
        let mut all = self.factors.clone();
        all.extend_from_slice(&other.factors);
        Self::from_cyclic_orders(&all)
    }
}

impl std::fmt::Display for AbelianShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Diagonal of a Smith form over `Z/nZ` for the matrix with the given rows
/// (each of length `cols`): `cols` divisors of `n` forming a divisibility
/// chain, where `n` stands for a zero diagonal entry.
///
/// Each entry `d_i` contributes a factor `Z/d_i` to the cokernel
/// `(Z/n)^cols / span(rows)`.
pub fn smith_diagonal(n: u64, cols: usize, rows: &[Vec<u64>]) -> Vec<u64> {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols);
            r.iter().map(|x| x % n).collect()
        })
        .collect();
    let nrows = a.len();
    let mut diag = Vec::with_capacity(cols);
    let mut t = 0;
    while t < nrows.min(cols) {
        // Pivot: any entry with the smallest gcd against n.
        let mut best: Option<(u64, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let g = gcd(x, n);
                    if best.map_or(true, |(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            normalize_pivot(&mut a, t, n);
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..nrows {
                let x = a[i][t];
                if x == 0 {
                    continue;
                }
                if x % p == 0 {
                    let q = x / p;
                    for j in t..cols {
                        a[i][j] = (a[i][j] + n - q * a[t][j] % n) % n;
                    }
                } else {
                    gcdex_rows(&mut a, t, i, t, n);
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..cols {
                let x = a[t][j];
                if x == 0 {
                    continue;
                }
                if x % p == 0 {
                    let q = x / p;
                    for row in a.iter_mut().skip(t) {
                        row[j] = (row[j] + n - q * row[t] % n) % n;
                    }
                } else {
                    gcdex_cols(&mut a, t, j, t, n);
                    dirty = true;
                    break;
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(a[t][t]);
        t += 1;
    }
    diag.resize(cols, n);
    // Enforce the divisibility chain; every entry divides n, so lcm does too.
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = gcd(diag[i], diag[j]);
            let l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

/// Scales row `t` by a unit so that `a[t][t] = gcd(a[t][t], n)`.
fn normalize_pivot(a: &mut [Vec<u64>], t: usize, n: u64) {
    let x = a[t][t];
    let u = normalizing_unit(x, n);
    if u != 1 {
        for y in a[t].iter_mut() {
            *y = *y * u % n;
        }
    }
}

/// A unit `u` mod `n` with `u * x = gcd(x, n) (mod n)`, for `x != 0 mod n`.
pub(crate) fn normalizing_unit(x: u64, n: u64) -> u64 {
    let g = gcd(x, n);
    let m = n / g;
    if m == 1 {
        return 1;
    }
    let u0 = inverse_mod((x / g) % m, m).expect("x/g is a unit mod n/g");
    let mut u = u0;
    while gcd(u, n) != 1 {
        u += m;
    }
    u % n
}

/// Unimodular combination of rows `r` and `i` making `a[i][col] = 0` and
/// `a[r][col] = gcd` of the two entries.
pub(crate) fn gcdex_rows(a: &mut [Vec<u64>], r: usize, i: usize, col: usize, n: u64) {
    let x = a[r][col] as i128;
    let y = a[i][col] as i128;
    let (g, s, t) = ext_gcd(x, y);
    let (u, v) = (-(y / g), x / g);
    let ni = n as i128;
    for j in 0..a[r].len() {
        let p = a[r][j] as i128;
        let q = a[i][j] as i128;
        a[r][j] = (s * p + t * q).rem_euclid(ni) as u64;
        a[i][j] = (u * p + v * q).rem_euclid(ni) as u64;
    }
}

fn gcdex_cols(a: &mut [Vec<u64>], c: usize, j: usize, row: usize, n: u64) {
    let x = a[row][c] as i128;
    let y = a[row][j] as i128;
    let (g, s, t) = ext_gcd(x, y);
    let (u, v) = (-(y / g), x / g);
    let ni = n as i128;
    for r in a.iter_mut() {
        let p = r[c] as i128;
        let q = r[j] as i128;
        r[c] = (s * p + t * q).rem_euclid(ni) as u64;
        r[j] = (u * p + v * q).rem_euclid(ni) as u64;
    }
}

/// Shape of the cokernel `(Z/n)^cols / span(rows)`.
pub(crate) fn cokernel_shape(n: u64, cols: usize, rows: &[Vec<u64>]) -> AbelianShape {
    let diag = smith_diagonal(n, cols, rows);
    AbelianShape::from_cyclic_orders(&diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_orders_recombine() {
        assert_eq!(AbelianShape::from_cyclic_orders(&[2, 3]).factors(), &[6]);
        assert_eq!(AbelianShape::from_cyclic_orders(&[4, 6]).factors(), &[2, 12]);
        assert_eq!(AbelianShape::from_cyclic_orders(&[1, 1]).factors(), &[] as &[u64]);
        assert_eq!(AbelianShape::from_cyclic_orders(&[9, 3, 5]).factors(), &[3, 45]);
    }

    #[test]
    fn chain_validation() {
        assert!(AbelianShape::from_invariant_factors(vec![2, 4]).is_ok());
        assert!(AbelianShape::from_invariant_factors(vec![4, 2]).is_err());
        assert!(AbelianShape::from_invariant_factors(vec![1, 2]).is_err());
        let s = AbelianShape::from_invariant_factors(vec![]).unwrap();
        assert_eq!((s.order(), s.exponent()), (1, 1));
    }

    #[test]
    fn normalizing_unit_is_unit() {
        for n in 2..40u64 {
            for x in 1..n {
                let u = normalizing_unit(x, n);
                assert_eq!(gcd(u, n), 1, "x={x} n={n}");
                assert_eq!(u * x % n, gcd(x, n) % n, "x={x} n={n}");
            }
        }
    }

    #[test]
    fn smith_examples() {
        // (Z/4)^2 / <(2,0)> = Z/2 x Z/4.
        assert_eq!(cokernel_shape(4, 2, &[vec![2, 0]]).factors(), &[2, 4]);
        // (Z/6)^2 / <(1,2)> is cyclic of order 6.
        assert_eq!(cokernel_shape(6, 2, &[vec![1, 2], vec![3, 0]]).factors(), &[6]);
        assert_eq!(cokernel_shape(6, 2, &[vec![1, 0], vec![0, 1]]).factors(), &[] as &[u64]);
    }

    /// Brute-force group structure of a finite abelian group given as a
    /// list of element orders: the number of elements of each order fixes
    /// the isomorphism class.
    fn order_histogram(shape: &AbelianShape) -> Vec<(u64, usize)> {
        let f = shape.factors();
        let mut hist = std::collections::BTreeMap::new();
        let mut idx = vec![0u64; f.len()];
        loop {
            let ord = idx
                .iter()
                .zip(f)
                .map(|(&x, &d)| d / gcd(x, d))
                .fold(1u64, super::super::lcm);
            *hist.entry(ord).or_insert(0usize) += 1;
            let mut k = 0;
            loop {
                if k == f.len() {
                    return hist.into_iter().collect();
                }
                idx[k] += 1;
                if idx[k] < f[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn shape_invariants(orders in proptest::collection::vec(1u64..30, 0..4)) {
                let s = AbelianShape::from_cyclic_orders(&orders);
                prop_assert!(s.factors().windows(2).all(|w| w[1] % w[0] == 0));
                prop_assert!(s.factors().iter().all(|&d| d >= 2));
                let expected: u128 = orders.iter().map(|&d| d as u128).product();
                prop_assert_eq!(s.order(), expected);
                let exp = orders.iter().copied().fold(1u64, super::super::super::lcm);
                prop_assert_eq!(s.exponent(), exp);
                if expected <= 10_000 {
                    // Element-order census of the product equals that of the shape.
                    let direct = AbelianShape { factors: orders.iter().copied().filter(|&d| d > 1).collect() };
                    prop_assert_eq!(order_histogram(&direct), order_histogram(&s));
                }
            }
        }
    }
}
