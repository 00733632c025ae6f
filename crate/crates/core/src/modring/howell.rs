//! Howell normal form and submodules of `(Z/nZ)^k`.
//!
//! Convention for the canonical form: rows in strict echelon order; every
//! pivot is a divisor of `n` (as a residue in `[1, n)`); entries above a
//! pivot lie in `[0, pivot)`; and for every column prefix, the rows whose
//! pivots lie beyond the prefix span all of the row span that vanishes on
//! that prefix (the Howell property). Together these make the form unique
//! for a given span.

use super::matrix::ModMatrix;
use super::shape::{cokernel_shape, gcdex_rows, normalizing_unit, AbelianShape};
use super::Modulus;
use crate::error::{Error, Result};

/// Howell form of the row span of `rows` (vectors of length `k`) over `Z/n`.
pub(crate) fn howell_rows(n: u64, k: usize, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    if n == 1 {
        return Vec::new();
    }
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x % n).collect::<Vec<u64>>())
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut r = 0;
    for j in 0..k {
        if r >= a.len() {
            break;
        }
        // Bring a nonzero entry to position r and clear the column below it.
        let mut i = r + 1;
        if a[r][j] == 0 {
            if let Some(p) = (r + 1..a.len()).find(|&p| a[p][j] != 0) {
                a.swap(r, p);
                i = p + 1;
            } else {
                continue;
            }
        }
        while i < a.len() {
            if a[i][j] != 0 {
                gcdex_rows(&mut a, r, i, j, n);
            }
            i += 1;
        }
        let u = normalizing_unit(a[r][j], n);
        if u != 1 {
            for x in a[r].iter_mut() {
                *x = *x * u % n;
            }
        }
        let p = a[r][j];
        for i in 0..r {
            let q = a[i][j] / p;
            if q != 0 {
                for c in j..k {
                    a[i][c] = (a[i][c] + n - q * a[r][c] % n) % n;
                }
            }
        }
        let ann = n / p;
        if ann != n {
            let extra: Vec<u64> = a[r].iter().map(|&x| x * ann % n).collect();
            if extra.iter().any(|&x| x != 0) {
                a.push(extra);
            }
        }
        r += 1;
    }
    a.truncate(r);
    debug_assert!(a.iter().all(|row| row.iter().any(|&x| x != 0)));
    a
}

/// Canonical basis of the row span; see the module documentation for the
/// convention.
pub fn howell_basis(m: &ModMatrix) -> ModMatrix {
    let n = m.modulus();
    let rows = howell_rows(n.get(), m.cols(), &m.row_vecs());
    ModMatrix::from_rows(n, m.cols(), &rows).expect("rows have the right length")
}

/// Generators of the right kernel `{v : m v = 0}`, in Howell form.
pub fn kernel(m: &ModMatrix) -> Vec<Vec<u64>> {
    let n = m.modulus().get();
    let (r, c) = (m.rows(), m.cols());
    // Row j of the augmented matrix is (column j of m | e_j); the Howell
    // property applied at prefix length r isolates the kernel.
    let aug: Vec<Vec<u64>> = (0..c)
        .map(|j| {
            let mut row: Vec<u64> = (0..r).map(|i| m.get(i, j)).collect();
            row.extend((0..c).map(|t| u64::from(t == j) % n));
            row
        })
        .collect();
    howell_rows(n, r + c, &aug)
        .into_iter()
        .filter(|row| row[..r].iter().all(|&x| x == 0))
        .map(|row| row[r..].to_vec())
        .collect()
}

/// Invariant factors of the subgroup of `(Z/n)^k` generated by `gens`.
pub fn subgroup_shape(modulus: Modulus, k: usize, gens: &[Vec<u64>]) -> Result<AbelianShape> {
    Ok(Submodule::from_generators(modulus, k, gens)?.shape())
}

/// A submodule of `(Z/nZ)^k`, stored by its Howell basis, so `==` is
/// equality of submodules.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Submodule {
    modulus: Modulus,
    dim: usize,
    basis: Vec<Vec<u64>>,
}

impl Submodule {
    pub fn from_generators(modulus: Modulus, dim: usize, gens: &[Vec<u64>]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != dim) {
            return Err(Error::Dimension(format!("generator of length {} in dimension {dim}", g.len())));
        }
        Ok(Submodule { modulus, dim, basis: howell_rows(modulus.get(), dim, gens) })
    }

    pub fn zero(modulus: Modulus, dim: usize) -> Self {
        Submodule { modulus, dim, basis: Vec::new() }
    }

    pub fn full(modulus: Modulus, dim: usize) -> Self {
        let gens: Vec<Vec<u64>> = (0..dim)
            .map(|i| (0..dim).map(|j| u64::from(i == j)).collect())
            .collect();
        Self::from_generators(modulus, dim, &gens).expect("unit vectors")
    }

    /// Right kernel of `m`.
    pub fn kernel_of(m: &ModMatrix) -> Self {
        Submodule { modulus: m.modulus(), dim: m.cols(), basis: kernel(m) }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The canonical (Howell) basis.
    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    fn pivot(row: &[u64]) -> (usize, u64) {
        let j = row.iter().position(|&x| x != 0).expect("basis rows are nonzero");
        (j, row[j])
    }

    pub fn order(&self) -> u128 {
        let n = self.modulus.get();
        self.basis
            .iter()
            .map(|row| (n / Self::pivot(row).1) as u128)
            .product()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let n = self.modulus.get();
        let mut w: Vec<u64> = v.iter().map(|x| x % n).collect();
        for row in &self.basis {
            let (j, p) = Self::pivot(row);
            if w[..j].iter().any(|&x| x != 0) {
                return false;
            }
            if w[j] % p != 0 {
                return false;
            }
            let q = w[j] / p;
            for c in j..self.dim {
                w[c] = (w[c] + n - q * row[c] % n) % n;
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subset_of(&self, other: &Submodule) -> bool {
        self.modulus == other.modulus
            && self.dim == other.dim
            && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.check_compatible(other)?;
        let mut gens = self.basis.clone();
        gens.extend_from_slice(&other.basis);
        Submodule::from_generators(self.modulus, self.dim, &gens)
    }

    /// Invariant factors of this module as an abstract group.
    pub fn shape(&self) -> AbelianShape {
        self.quotient_shape_unchecked(&Submodule::zero(self.modulus, self.dim))
    }

    /// Invariant factors of `self / sub`; `sub` must be contained in `self`.
    pub fn quotient_shape(&self, sub: &Submodule) -> Result<AbelianShape> {
        self.check_compatible(sub)?;
        if !sub.is_subset_of(self) {
            return Err(Error::Precondition("quotient by a non-submodule".into()));
        }
        Ok(self.quotient_shape_unchecked(sub))
    }

    fn quotient_shape_unchecked(&self, sub: &Submodule) -> AbelianShape {
        let n = self.modulus.get();
        let p = self.basis.len();
        // Relations R = {c in (Z/n)^p : sum c_i a_i in sub}; the quotient is
        // (Z/n)^p / R.
        let rel = self.coefficient_kernel(&self.basis, sub);
        let rel_gens: Vec<Vec<u64>> = rel.into_iter().map(|v| v[..p].to_vec()).collect();
        cokernel_shape(n, p, &rel_gens)
    }

    /// Generators of `{(c, t) : sum c_i v_i - sum t_j s_j = 0}` where `s_j`
    /// runs over the basis of `target`.
    fn coefficient_kernel(&self, vs: &[Vec<u64>], target: &Submodule) -> Vec<Vec<u64>> {
        let n = self.modulus;
        let dim = target.dim;
        let p = vs.len();
        let q = target.basis.len();
        // Matrix with columns v_1..v_p, -s_1..-s_q (dim x (p+q)).
        let mut entries = vec![0u64; dim * (p + q)];
        for (c, v) in vs.iter().enumerate() {
            for (r, &x) in v.iter().enumerate() {
                entries[r * (p + q) + c] = x % n.get();
            }
        }
        for (c, s) in target.basis.iter().enumerate() {
            for (r, &x) in s.iter().enumerate() {
                entries[r * (p + q) + p + c] = n.neg(x);
            }
        }
        let m = ModMatrix::from_residues(n, dim, p + q, entries).expect("sizes match");
        kernel(&m)
    }

    /// Image under the linear map `v -> v L` for a `dim x dim'` matrix `L`.
    pub fn image(&self, l: &ModMatrix) -> Result<Submodule> {
        self.check_map(l)?;
        let gens: Vec<Vec<u64>> = self
            .basis
            .iter()
            .map(|v| row_times(v, l))
            .collect();
        Submodule::from_generators(self.modulus, l.cols(), &gens)
    }

    /// `{x in self : x L in target}`.
    pub fn preimage(&self, l: &ModMatrix, target: &Submodule) -> Result<Submodule> {
        self.check_map(l)?;
        if target.dim != l.cols() || target.modulus != self.modulus {
            return Err(Error::Dimension("target does not match the map".into()));
        }
        let images: Vec<Vec<u64>> = self.basis.iter().map(|v| row_times(v, l)).collect();
        let coeffs = self.coefficient_kernel(&images, target);
        let n = self.modulus;
        let gens: Vec<Vec<u64>> = coeffs
            .iter()
            .map(|c| {
                let mut x = vec![0u64; self.dim];
                for (ci, b) in c.iter().zip(&self.basis) {
                    for (xj, bj) in x.iter_mut().zip(b) {
                        *xj = n.add(*xj, n.mul(*ci, *bj));
                    }
                }
                x
            })
            .collect();
        Submodule::from_generators(self.modulus, self.dim, &gens)
    }

    /// Kernel of `v -> v L` restricted to this module.
    pub fn kernel_of_map(&self, l: &ModMatrix) -> Result<Submodule> {
        let zero = Submodule::zero(self.modulus, l.cols());
        self.preimage(l, &zero)
    }

    /// `{k v : v in self}`.
    pub fn scaled(&self, k: u64) -> Submodule {
        let n = self.modulus;
        let gens: Vec<Vec<u64>> = self
            .basis
            .iter()
            .map(|v| v.iter().map(|&x| n.mul(x, k % n.get())).collect())
            .collect();
        Submodule::from_generators(self.modulus, self.dim, &gens).expect("same dimension")
    }

    /// Every element, in lexicographic order of coefficient vectors over
    /// the basis (duplicates removed). Only for small modules.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let n = self.modulus;
        let orders: Vec<u64> = self
            .basis
            .iter()
            .map(|row| n.get() / Self::pivot(row).1)
            .collect();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut idx = vec![0u64; orders.len()];
        loop {
            let mut v = vec![0u64; self.dim];
            for (c, row) in idx.iter().zip(&self.basis) {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = n.add(*x, n.mul(*c, y));
                }
            }
            out.push(v);
            let mut k = 0;
            loop {
                if k == orders.len() {
                    out.sort();
                    out.dedup();
                    return out;
                }
                idx[k] += 1;
                if idx[k] < orders[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn check_compatible(&self, other: &Submodule) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.get(), other.modulus.get()));
        }
        if self.dim != other.dim {
            return Err(Error::Dimension(format!("dimensions {} and {}", self.dim, other.dim)));
        }
        Ok(())
    }

    fn check_map(&self, l: &ModMatrix) -> Result<()> {
        if l.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(self.modulus.get(), l.modulus().get()));
        }
        if l.rows() != self.dim {
            return Err(Error::Dimension(format!("map with {} rows on dimension {}", l.rows(), self.dim)));
        }
        Ok(())
    }
}

/// Row vector times matrix.
pub(crate) fn row_times(v: &[u64], l: &ModMatrix) -> Vec<u64> {
    let n = l.modulus();
    (0..l.cols())
        .map(|j| {
            v.iter()
                .enumerate()
                .fold(0u64, |acc, (i, &x)| n.add(acc, n.mul(x, l.get(i, j))))
        })
        .collect()
}
