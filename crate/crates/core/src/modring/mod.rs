//! Exact arithmetic over `Z/nZ`: integer helpers, matrices, Howell forms,
//! submodules of `(Z/nZ)^k` and their invariant factors.
//!
//! Moduli are capped at `2^31 - 1`, so a product of two reduced residues
//! always fits in a `u64`.

mod howell;
pub mod integer;
mod matrix;
mod shape;

pub use howell::{howell_basis, kernel, subgroup_shape, Submodule};
pub use matrix::{ModMatrix, ResidueMatrix};
pub use shape::{smith_diagonal, AbelianShape};

use crate::error::{Error, Result};

/// Largest supported modulus.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// A modulus `n` with `1 <= n <= 2^31 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || n > MAX_MODULUS {
            return Err(Error::ModulusOutOfRange(n));
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn reduce_i128(self, x: i128) -> u64 {
        x.rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        (self.0 - a) % self.0
    }

    pub fn inverse(self, a: u64) -> Option<u64> {
        inverse_mod(a, self.0)
    }

    pub fn is_unit(self, a: u64) -> bool {
        gcd(a % self.0, self.0) == 1
    }

    /// Prime factorization `[(p, e)]` with increasing primes.
    pub fn factorization(self) -> Vec<(u64, u32)> {
        factorize(self.0)
    }

    /// All positive divisors in increasing order.
    pub fn divisors(self) -> Vec<u64> {
        divisors(self.0)
    }

    /// If `n = p^s` for a prime `p` and `s >= 1`, returns `(p, s)`.
    pub fn prime_power(self) -> Option<(u64, u32)> {
        match self.factorization().as_slice() {
            [(p, s)] => Some((*p, *s)),
            _ => None,
        }
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// `p`-adic valuation, with a distinct value for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Equal,
            (Valuation::Infinite, _) => Greater,
            (_, Valuation::Infinite) => Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

/// Largest `e` with `p^e | x`; [`Valuation::Infinite`] for `x = 0`.
pub fn valuation(x: i64, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x == 0 {
        return Ok(Valuation::Infinite);
    }
    let mut x = x.unsigned_abs();
    let mut e = 0;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    Ok(Valuation::Finite(e))
}

/// Valuation of a nonzero unsigned integer; panics on zero or `p < 2`.
pub(crate) fn val_u64(mut x: u64, p: u64) -> u32 {
    assert!(x != 0 && p >= 2);
    let mut e = 0;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    e
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Extended gcd on signed integers: `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn inverse_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (g, s, _) = ext_gcd((a % n) as i128, n as i128);
    (g == 1).then(|| s.rem_euclid(n as i128) as u64)
}

/// `gcd(a, b^inf)`: the largest divisor of `a` supported on primes of `b`.
pub fn gcd_power(a: u64, b: u64) -> Result<u64> {
    if a == 0 {
        return Err(Error::ZeroArgument("a"));
    }
    if b == 0 {
        return Err(Error::ZeroArgument("b"));
    }
    let mut part = 1;
    let mut rest = a;
    loop {
        let g = gcd(rest, b);
        if g == 1 {
            return Ok(part);
        }
        part *= g;
        rest /= g;
    }
}

/// `n * 2^{-v_2(n)}`.
pub fn odd_part(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroArgument("n"));
    }
    Ok(n >> n.trailing_zeros())
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let current = out.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            out.extend(current.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Checked integer power.
pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp).ok_or(Error::Overflow("power"))
}

/// Whether `x` is a square modulo `n` (brute force; `n` is small wherever
/// this is used).
pub fn is_square_mod(x: u64, n: u64) -> bool {
    let x = x % n;
    (0..n).any(|y| y * y % n == x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(12, 2).unwrap(), Valuation::Finite(2));
        assert_eq!(valuation(0, 3).unwrap(), Valuation::Infinite);
        assert_eq!(valuation(-27, 3).unwrap(), Valuation::Finite(3));
        // 2 d^2 with d = 6 is 72 = 8 * 9.
        assert_eq!(valuation(2 * 36, 2).unwrap(), Valuation::Finite(3));
        assert_eq!(valuation(12, 4), Err(Error::NotPrime(4)));
        assert_eq!(valuation(12, 1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn infinity_sorts_last() {
        assert!(Valuation::Infinite > Valuation::Finite(u32::MAX));
        assert_eq!(
            [Valuation::Infinite, Valuation::Finite(1)].iter().min(),
            Some(&Valuation::Finite(1))
        );
    }

    #[test]
    fn gcd_power_examples() {
        assert_eq!(gcd_power(12, 2).unwrap(), 4);
        assert_eq!(gcd_power(45, 1).unwrap(), 1);
        // max_k gcd(360, 6^k) stabilizes at k = 3.
        let brute = (1..10u32).map(|k| gcd(360, 6u64.pow(k))).max().unwrap();
        assert_eq!(brute, 72);
        assert_eq!(gcd_power(360, 6).unwrap(), brute);
        assert!(gcd_power(0, 3).is_err());
        assert!(gcd_power(3, 0).is_err());
    }

    #[test]
    fn odd_part_examples() {
        assert_eq!(odd_part(40).unwrap(), 5);
        assert_eq!(odd_part(1).unwrap(), 1);
        for k in 0..=20 {
            assert_eq!(odd_part(1 << k).unwrap(), 1);
        }
    }

    #[test]
    fn modulus_range() {
        assert!(Modulus::new(0).is_err());
        assert!(Modulus::new(MAX_MODULUS).is_ok());
        assert_eq!(
            Modulus::new(MAX_MODULUS + 1),
            Err(Error::ModulusOutOfRange(MAX_MODULUS + 1))
        );
        let m = Modulus::new(MAX_MODULUS).unwrap();
        let a = MAX_MODULUS - 1;
        assert_eq!(m.mul(a, a), 1);
    }

    #[test]
    fn divisors_and_factorization() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(Modulus::new(27).unwrap().prime_power(), Some((3, 3)));
        assert_eq!(Modulus::new(12).unwrap().prime_power(), None);
        assert_eq!(Modulus::new(1).unwrap().prime_power(), None);
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -20i128..20 {
            for b in -20i128..20 {
                let (g, s, t) = ext_gcd(a, b);
                assert_eq!(s * a + t * b, g);
                assert_eq!(g as u64, gcd(a.unsigned_abs() as u64, b.unsigned_abs() as u64));
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn gcd_power_divides_and_is_supported(a in 1u64..5000, b in 1u64..200) {
                let g = gcd_power(a, b).unwrap();
                prop_assert_eq!(a % g, 0);
                let all_primes_divide_b = factorize(a).iter().all(|(p, _)| b % p == 0);
                prop_assert_eq!(g == a, all_primes_divide_b);
                for (p, _) in factorize(g) {
                    prop_assert_eq!(b % p, 0);
                }
                // gcd(a / g, b) = 1: nothing b-primary is left.
                prop_assert_eq!(gcd(a / g, b), 1);
            }
        }
    }
}
