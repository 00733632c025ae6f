use super::{gcd, Modulus};
use crate::error::{Error, Result};

/// Rectangular matrix over `Z/nZ`, row-major, entries reduced into `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ModMatrix {
    /// Builds a matrix from signed integer entries, reducing each mod `n`.
    pub fn new(modulus: Modulus, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ModMatrix {
            modulus,
            rows,
            cols,
            entries: entries.iter().map(|&x| modulus.reduce(x)).collect(),
        })
    }

    /// Builds a matrix from already reduced residues. Entries `>= n` are
    /// reduced as well.
    pub fn from_residues(modulus: Modulus, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let n = modulus.get();
        Ok(ModMatrix {
            modulus,
            rows,
            cols,
            entries: entries.into_iter().map(|x| x % n).collect(),
        })
    }

    /// Builds a matrix from rows of residues; all rows must have length `cols`.
    pub fn from_rows(modulus: Modulus, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row of length {} (expected {cols})", r.len())));
            }
            entries.extend(r.iter().map(|x| x % modulus.get()));
        }
        Ok(ModMatrix { modulus, rows: rows.len(), cols, entries })
    }

    pub fn zero(modulus: Modulus, rows: usize, cols: usize) -> Self {
        ModMatrix { modulus, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(modulus: Modulus, k: usize) -> Self {
        let mut m = Self::zero(modulus, k, k);
        for i in 0..k {
            m.entries[i * k + i] = 1 % modulus.get();
        }
        m
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        ModMatrix { modulus: self.modulus, rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &ModMatrix) -> Result<ModMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.get(), other.modulus.get()));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = self.modulus.get();
        let mut entries = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let e = &mut entries[i * other.cols + j];
                    *e = (*e + a * other.get(k, j)) % n;
                }
            }
        }
        Ok(ModMatrix { modulus: self.modulus, rows: self.rows, cols: other.cols, entries })
    }

    /// `m * v` for a column vector `v`.
    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        let n = self.modulus.get();
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * (b % n)) % n)
            })
            .collect())
    }
}

/// A 2x2 matrix over `Z/nZ`, entries `[a, b, c, d]` for `[[a, b], [c, d]]`.
///
/// Ordering compares the modulus first, then the entry tuple; this is the
/// deterministic order used for group closures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueMatrix {
    n: u64,
    e: [u64; 4],
}

impl ResidueMatrix {
    pub fn new(modulus: Modulus, entries: [i64; 4]) -> Self {
        ResidueMatrix { n: modulus.get(), e: entries.map(|x| modulus.reduce(x)) }
    }

    pub fn from_residues(modulus: Modulus, entries: [u64; 4]) -> Self {
        let n = modulus.get();
        ResidueMatrix { n, e: entries.map(|x| x % n) }
    }

    pub fn identity(modulus: Modulus) -> Self {
        Self::scalar(modulus, 1)
    }

    pub fn zero(modulus: Modulus) -> Self {
        Self::scalar(modulus, 0)
    }

    pub fn scalar(modulus: Modulus, x: i64) -> Self {
        Self::new(modulus, [x, 0, 0, x])
    }

    pub fn diag(modulus: Modulus, x: i64, y: i64) -> Self {
        Self::new(modulus, [x, 0, 0, y])
    }

    pub fn modulus(&self) -> Modulus {
        Modulus(self.n)
    }

    pub fn entries(&self) -> [u64; 4] {
        self.e
    }

    /// Entry at row `i`, column `j`.
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.e[2 * i + j]
    }

    /// Coordinates in `(Z/n)^4` (row-major).
    pub fn to_vec(&self) -> Vec<u64> {
        self.e.to_vec()
    }

    pub fn from_vec(modulus: Modulus, v: &[u64]) -> Self {
        Self::from_residues(modulus, [v[0], v[1], v[2], v[3]])
    }

    pub fn to_mod_matrix(&self) -> ModMatrix {
        ModMatrix { modulus: self.modulus(), rows: 2, cols: 2, entries: self.e.to_vec() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.n, o.n);
        let n = self.n;
        let [a, b, c, d] = self.e;
        let [p, q, r, s] = o.e;
        ResidueMatrix {
            n,
            e: [
                (a * p + b * r) % n,
                (a * q + b * s) % n,
                (c * p + d * r) % n,
                (c * q + d * s) % n,
            ],
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.n;
        let mut e = self.e;
        for (x, y) in e.iter_mut().zip(o.e) {
            *x = (*x + y) % n;
        }
        ResidueMatrix { n, e }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.n;
        let mut e = self.e;
        for (x, y) in e.iter_mut().zip(o.e) {
            *x = (*x + n - y) % n;
        }
        ResidueMatrix { n, e }
    }

    pub fn scale(&self, k: i64) -> Self {
        let m = self.modulus();
        let k = m.reduce(k);
        ResidueMatrix { n: self.n, e: self.e.map(|x| m.mul(x, k)) }
    }

    pub fn det(&self) -> u64 {
        let n = self.n;
        let [a, b, c, d] = self.e;
        (a * d % n + n - b * c % n) % n
    }

    pub fn trace(&self) -> u64 {
        (self.e[0] + self.e[3]) % self.n
    }

    pub fn is_invertible(&self) -> bool {
        gcd(self.det(), self.n) == 1
    }

    pub fn inverse(&self) -> Option<Self> {
        let inv = self.modulus().inverse(self.det())?;
        Some(self.adjugate().scale(inv as i64))
    }

    /// `[[d, -b], [-c, a]]`.
    pub fn adjugate(&self) -> Self {
        let m = self.modulus();
        let [a, b, c, d] = self.e;
        ResidueMatrix { n: self.n, e: [d, m.neg(b), m.neg(c), a] }
    }

    pub fn is_scalar(&self) -> bool {
        self.e[1] == 0 && self.e[2] == 0 && self.e[0] == self.e[3]
    }

    pub fn is_zero(&self) -> bool {
        self.e == [0; 4]
    }

    /// `g * self * g^{-1}`.
    pub fn conjugate_by(&self, g: &Self) -> Result<Self> {
        let gi = g.inverse().ok_or(Error::NotInvertible { modulus: self.n })?;
        Ok(g.mul(self).mul(&gi))
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        self.mul(o) == o.mul(self)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::identity(self.modulus());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Image under `Z/n -> Z/m`; requires `m | n`.
    pub fn reduce_to(&self, m: Modulus) -> Result<Self> {
        if self.n % m.get() != 0 {
            return Err(Error::Precondition(format!("{} does not divide {}", m, self.n)));
        }
        Ok(Self::from_residues(m, self.e))
    }

    /// The same representatives read modulo a multiple `m` of `n`.
    pub fn lift_to(&self, m: Modulus) -> Result<Self> {
        if m.get() % self.n != 0 {
            return Err(Error::Precondition(format!("{} does not divide {}", self.n, m)));
        }
        Ok(Self::from_residues(m, self.e))
    }
}

impl std::fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.n)
    }
}
