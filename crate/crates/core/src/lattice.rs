//! Integral lattices given by Gram matrices: the rank-3 lattice of a product
//! of isogenous curves, the Kummer lattice and its sum with a hyperbolic
//! plane.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::modring::integer::{determinant, hermite_rows};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
    label: String,
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>, label: impl Into<String>) -> Result<Self> {
        let r = gram.len();
        if r == 0 {
            return Err(Error::ZeroArgument("rank"));
        }
        if gram.iter().any(|row| row.len() != r) {
            return Err(Error::Dimension("Gram matrix is not square".into()));
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Precondition(format!("Gram matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(GramLattice { gram, label: label.into() })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, row)| row[i] % 2 == 0)
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &GramLattice, label: impl Into<String>) -> GramLattice {
        let (a, b) = (self.rank(), other.rank());
        let mut gram = vec![vec![0i64; a + b]; a + b];
        for i in 0..a {
            gram[i][..a].copy_from_slice(&self.gram[i]);
        }
        for i in 0..b {
            gram[a + i][a..].copy_from_slice(&other.gram[i]);
        }
        GramLattice { gram, label: label.into() }
    }
}

pub fn gram_determinant(l: &GramLattice) -> Result<i128> {
    let rows: Vec<Vec<i128>> = l.gram.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    determinant(&rows)
}

/// The hyperbolic plane `[[0, 1], [1, 0]]`.
pub fn hyperbolic_plane() -> GramLattice {
    GramLattice::new(vec![vec![0, 1], vec![1, 0]], "U").expect("symmetric")
}

/// `[[0, 1, 1], [1, 0, d], [1, d, 0]]`, of determinant `2d` and signature
/// `(1, 2)`.
pub fn build_family_gram(d: u64) -> Result<GramLattice> {
    if d == 0 {
        return Err(Error::ZeroArgument("d"));
    }
    let d = i64::try_from(d).map_err(|_| Error::Overflow("d"))?;
    let l = GramLattice::new(vec![vec![0, 1, 1], vec![1, 0, d], vec![1, d, 0]], format!("family d={d}"))?;
    let sig = signature(&l)?;
    if sig != (1, 2, 0) {
        return Err(Error::TheoremViolation(format!("family lattice has signature {sig:?}")));
    }
    Ok(l)
}

/// Supports of the first-order Reed-Muller code of length 16, generated by
/// the all-ones word and the four coordinate functionals on `F_2^4`
/// (points indexed by `0..16` through their binary digits).
fn reed_muller_generators() -> Vec<Vec<u8>> {
    let mut gens = vec![vec![1u8; 16]];
    for bit in 0..4 {
        gens.push((0..16).map(|v| ((v >> bit) & 1) as u8).collect());
    }
    gens
}

/// Rank 16 lattice spanned by sixteen orthogonal classes of square `-2` and
/// the half-sums over Reed-Muller codewords. Built in doubled coordinates
/// (the classes become `2 e_v`, half-sums become 0/1 vectors) so everything
/// stays integral; the Gram is divided by 4 at the end.
pub fn build_kummer_lattice() -> Result<GramLattice> {
    let mut gens: Vec<Vec<i128>> = (0..16).map(|v| (0..16).map(|w| if v == w { 2 } else { 0 }).collect()).collect();
    gens.extend(reed_muller_generators().into_iter().map(|w| w.into_iter().map(i128::from).collect()));
    let basis = hermite_rows(16, &gens)?;
    if basis.len() != 16 {
        return Err(Error::TheoremViolation(format!("glued lattice has rank {}", basis.len())));
    }
    let mut gram = vec![vec![0i64; 16]; 16];
    for i in 0..16 {
        for j in 0..16 {
            // Ambient form -2 I on actual coordinates = doubled / 2.
            let scaled: i128 = (0..16).map(|t| -2 * basis[i][t] * basis[j][t]).sum();
            if scaled % 4 != 0 {
                return Err(Error::TheoremViolation(format!("non-integral pairing {scaled}/4")));
            }
            gram[i][j] = (scaled / 4) as i64;
        }
    }
    let l = GramLattice::new(gram, "Kummer lattice")?;
    let det = gram_determinant(&l)?;
    if !l.is_even() || det.abs() != 64 || signature(&l)? != (0, 16, 0) {
        return Err(Error::TheoremViolation(format!(
            "glued lattice: even {}, det {det}, not the expected even negative definite lattice of discriminant 64",
            l.is_even()
        )));
    }
    Ok(l)
}

/// Kummer lattice plus a hyperbolic plane.
pub fn build_lambda_prod() -> Result<GramLattice> {
    Ok(build_kummer_lattice()?.direct_sum(&hyperbolic_plane(), "Kummer lattice + U"))
}

/// Ranks in `0 -> Kummer lattice -> NS -> family lattice`: `16 + 3 = 19`.
pub fn kummer_ns_rank() -> (usize, usize, usize) {
    (16, 3, 19)
}

/// `(positive, negative, zero)` eigenvalue counts, by congruence
/// diagonalization over `Q`.
pub fn signature(l: &GramLattice) -> Result<(usize, usize, usize)> {
    let r = l.rank();
    let mut a: Vec<Vec<BigRational>> = l
        .gram
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut diag = Vec::with_capacity(r);
    for i in 0..r {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..r).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..r).find(|&j| !a[i][j].is_zero()) {
                // Replace basis vector i by e_i + e_j; its square becomes 2 a_ij.
                for k in 0..r {
                    let add = a[j][k].clone();
                    a[i][k] += add;
                }
                for k in 0..r {
                    let add = a[k][j].clone();
                    a[k][i] += add;
                }
            }
        }
        let p = a[i][i].clone();
        if p.is_zero() {
            diag.push(p);
            continue;
        }
        for j in i + 1..r {
            let f = a[j][i].clone() / p.clone();
            if f.is_zero() {
                continue;
            }
            for k in i..r {
                let sub = f.clone() * a[i][k].clone();
                a[j][k] -= sub;
            }
            for k in i..r {
                let sub = f.clone() * a[k][i].clone();
                a[k][j] -= sub;
            }
        }
        diag.push(p);
    }
    let pos = diag.iter().filter(|x| x.is_positive()).count();
    let neg = diag.iter().filter(|x| x.is_negative()).count();
    Ok((pos, neg, r - pos - neg))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeReport {
    pub label: String,
    pub rank: usize,
    pub determinant: i128,
    pub even: bool,
    pub signature: (usize, usize),
    pub degenerate: bool,
}

pub fn lattice_report(l: &GramLattice) -> Result<LatticeReport> {
    let determinant = gram_determinant(l)?;
    let (pos, neg, zero) = signature(l)?;
    if (zero > 0) != (determinant == 0) {
        return Err(Error::TheoremViolation("signature and determinant disagree on degeneracy".into()));
    }
    Ok(LatticeReport {
        label: l.label.clone(),
        rank: l.rank(),
        determinant,
        even: l.is_even(),
        signature: (pos, neg),
        degenerate: determinant == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cofactor(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 1 {
            return m[0][0] as i128;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] as i128 * cofactor(&minor)
            })
            .sum()
    }

    #[test]
    fn small_examples() {
        let u = hyperbolic_plane();
        let r = lattice_report(&u).unwrap();
        assert_eq!((r.rank, r.determinant, r.even, r.signature), (2, -1, true, (1, 1)));
        assert_eq!(gram_determinant(&build_family_gram(1).unwrap()).unwrap(), 2);
        assert_eq!(gram_determinant(&build_family_gram(2).unwrap()).unwrap(), 4);
        let r = lattice_report(&build_family_gram(5).unwrap()).unwrap();
        assert_eq!((r.rank, r.determinant, r.even, r.signature), (3, 10, true, (1, 2)));
        for d in 1..=50 {
            let g = build_family_gram(d).unwrap();
            assert_eq!(gram_determinant(&g).unwrap(), 2 * d as i128);
            assert_eq!(cofactor(g.gram()), 2 * d as i128);
        }
        assert!(GramLattice::new(vec![vec![1, 2], vec![3, 4]], "x").is_err());
        let degenerate = GramLattice::new(vec![vec![0, 0], vec![0, 0]], "zero").unwrap();
        assert!(lattice_report(&degenerate).unwrap().degenerate);
    }

    #[test]
    fn kummer_lattice() {
        let k = build_kummer_lattice().unwrap();
        let r = lattice_report(&k).unwrap();
        assert_eq!((r.rank, r.determinant, r.even, r.signature), (16, 64, true, (0, 16)));
        // Index of the orthogonal span of the sixteen classes: 2^16 / 2^6 = (2^5)^2.
        assert_eq!((1i128 << 16) / r.determinant, (1 << 5) * (1 << 5));
        // The sixteen classes (doubled coordinates 2 e_v) lie in the lattice:
        // reducing against the Hermite basis leaves no remainder.
        let mut gens: Vec<Vec<i128>> = (0..16).map(|v| (0..16).map(|w| if v == w { 2 } else { 0 }).collect()).collect();
        gens.extend(reed_muller_generators().into_iter().map(|w| w.into_iter().map(i128::from).collect()));
        let basis = hermite_rows(16, &gens).unwrap();
        for v in 0..16 {
            let mut e: Vec<i128> = (0..16).map(|w| if v == w { 2 } else { 0 }).collect();
            for b in &basis {
                let p = b.iter().position(|&x| x != 0).unwrap();
                let q = e[p] / b[p];
                assert_eq!(e[p] % b[p], 0);
                for t in 0..16 {
                    e[t] -= q * b[t];
                }
            }
            assert!(e.iter().all(|&x| x == 0));
        }
        let p = build_lambda_prod().unwrap();
        let r = lattice_report(&p).unwrap();
        assert_eq!((r.rank, r.determinant, r.even), (18, -64, true));
        for i in 0..16 {
            assert_eq!(p.gram()[i][16], 0);
            assert_eq!(p.gram()[i][17], 0);
        }
    }

    proptest! {
        #[test]
        fn determinant_matches_cofactor(n in 1usize..=6, seed in proptest::collection::vec(-5i64..=5, 36)) {
            let mut g = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..=i {
                    g[i][j] = seed[i * 6 + j];
                    g[j][i] = seed[i * 6 + j];
                }
            }
            let l = GramLattice::new(g.clone(), "random").unwrap();
            prop_assert_eq!(gram_determinant(&l).unwrap(), cofactor(&g));
            let (p, q, z) = signature(&l).unwrap();
            prop_assert_eq!(p + q + z, n);
            prop_assert_eq!(z == 0, cofactor(&g) != 0);
            let sign = if q % 2 == 0 { 1 } else { -1 };
            if z == 0 {
                prop_assert_eq!(cofactor(&g).signum(), sign);
            }
        }
    }
}
