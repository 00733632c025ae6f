//! Normal forms of abelian subgroups of `GL2(Z/l^s)` for odd `l`, after
//! reduction to level `l^{s'}` with `s' = ceil(s/2)`.
//!
//! Conjugators satisfy `g * (H mod l^{s'}) * g^{-1} ⊂ family`.

use super::commutant::mu;
use super::MatrixGroup;
use crate::error::{Error, Result};
use crate::modring::{gcd, is_prime, is_square_mod, val_u64, Modulus, ResidueMatrix};

/// One of the three families containing abelian subgroups up to conjugacy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormalFormKind {
    /// Diagonal matrices with unit entries.
    SplitCartan,
    /// `{[[x, eps l^t y], [y, x]] : x^2 - eps l^t y^2 a unit}`, `0 <= t < s'`.
    /// `epsilon` is `1` or the least positive quadratic non-residue mod `l`.
    NonsplitCartan { t: u32, epsilon: u64 },
    /// `{[[x, y], [0, x + l^t y]] : x a unit}`, `1 <= t <= s'`.
    BorelAbelian { t: u32 },
}

impl std::fmt::Display for NormalFormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormalFormKind::SplitCartan => write!(f, "split-cartan"),
            NormalFormKind::NonsplitCartan { t, epsilon } => write!(f, "nonsplit-cartan(t={t},eps={epsilon})"),
            NormalFormKind::BorelAbelian { t } => write!(f, "borel-abelian(t={t})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormTag {
    pub kind: NormalFormKind,
    pub ell: u64,
    /// `l^{s'}`.
    pub level: u64,
    /// Invertible over `Z/l^{s'}`.
    pub conjugator: ResidueMatrix,
}

impl NormalFormTag {
    /// Membership in the tagged family, using the defining conditions.
    pub fn family_contains(&self, x: &ResidueMatrix) -> bool {
        family_contains(self.kind, self.ell, self.level, x)
    }

    /// Whether `g h g^{-1}` lies in the family, for `h` at any level
    /// divisible by `l^{s'}`.
    pub fn maps_into_family(&self, h: &ResidueMatrix) -> Result<bool> {
        let level = Modulus::new(self.level)?;
        let h = h.reduce_to(level)?;
        Ok(self.family_contains(&h.conjugate_by(&self.conjugator)?))
    }
}

/// Membership of `x` (over `Z/level`) in the family `kind`.
pub fn family_contains(kind: NormalFormKind, ell: u64, level: u64, x: &ResidueMatrix) -> bool {
    if x.modulus().get() != level {
        return false;
    }
    let unit = |v: u64| gcd(v, ell) == 1;
    let [a, b, c, d] = x.entries();
    let q = level;
    match kind {
        NormalFormKind::SplitCartan => b == 0 && c == 0 && unit(a) && unit(d),
        NormalFormKind::NonsplitCartan { t, epsilon } => {
            // x = [[X, eps l^t Y], [Y, X]] with X = a, Y = c.
            let elt = epsilon * ell.pow(t) % q;
            if a != d || b != elt * c % q {
                return false;
            }
            let norm = (a * a % q + q - elt * (c * c % q) % q) % q;
            unit(norm)
        }
        NormalFormKind::BorelAbelian { t } => {
            let lt = ell.pow(t) % q;
            c == 0 && unit(a) && d == (a + lt * b) % q
        }
    }
}

/// Finds a normal form for an abelian subgroup `H < GL2(Z/l^s)`, `l` odd.
pub fn classify_abelian(h: &MatrixGroup, ell: u64, s: u32) -> Result<NormalFormTag> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell == 2 {
        return Err(Error::Precondition("normal forms are only available for odd primes".into()));
    }
    if s == 0 {
        return Err(Error::ZeroArgument("s"));
    }
    let n = ell.checked_pow(s).ok_or(Error::Overflow("l^s"))?;
    if h.modulus().get() != n {
        return Err(Error::ModulusMismatch(h.modulus().get(), n));
    }
    if !h.is_abelian() {
        return Err(Error::Precondition("subgroup is not abelian".into()));
    }
    let s_prime = s.div_ceil(2);
    let level = Modulus::new(ell.pow(s_prime))?;
    let q = level.get();

    // The generator with minimal scalar depth; depths of products are at
    // least the minimum over generators.
    let mut best: Option<(u32, ResidueMatrix)> = None;
    for g in h.generators() {
        if g.is_scalar() {
            continue;
        }
        let m = mu(g, ell, s)?;
        if best.map_or(true, |(bm, _)| m < bm) {
            best = Some((m, *g));
        }
    }
    let split = |conj| NormalFormTag { kind: NormalFormKind::SplitCartan, ell, level: q, conjugator: conj };
    let Some((mu_min, a)) = best.filter(|(m, _)| *m < s_prime) else {
        return Ok(split(ResidueMatrix::identity(level)));
    };

    // A' = (A - delta I) / l^mu, reduced to level l^{s'}; non-scalar mod l.
    let [alpha, beta, gamma, delta] = a.entries();
    let scale = ell.pow(mu_min);
    let diff = (alpha + n - delta) % n;
    let ap = ResidueMatrix::from_residues(level, [diff / scale, beta / scale, gamma / scale, 0]);

    // Cyclic vector w: P = [w | A'w] invertible mod l, so P^{-1} A' P is the
    // companion matrix [[0, -det], [1, tr]].
    let p = [[1u64, 0], [0, 1], [1, 1]]
        .into_iter()
        .map(|w| {
            let aw0 = (ap.at(0, 0) * w[0] + ap.at(0, 1) * w[1]) % q;
            let aw1 = (ap.at(1, 0) * w[0] + ap.at(1, 1) * w[1]) % q;
            ResidueMatrix::from_residues(level, [w[0], aw0, w[1], aw1])
        })
        .find(|p| p.is_invertible())
        .ok_or_else(|| Error::TheoremViolation("no cyclic vector for a non-scalar matrix".into()))?;
    let p_inv = p.inverse().expect("invertible");
    let tr = ap.trace();
    let det = ap.det();

    let roots: Vec<u64> = (0..q).filter(|&r| (r * r % q + det + q - tr * r % q) % q == 0).collect();
    let kind;
    let g;
    if let Some(&r1) = roots.iter().find(|&&r| (tr + q - 2 * r % q) % q % ell != 0) {
        // Two roots distinct mod l: diagonalize the companion matrix with
        // eigenvector columns (-r2, 1), (-r1, 1).
        let r2 = (tr + q - r1) % q;
        let v = ResidueMatrix::new(level, [-(r2 as i64), -(r1 as i64), 1, 1]);
        kind = NormalFormKind::SplitCartan;
        g = v.inverse().expect("distinct eigenvalues mod l").mul(&p_inv);
    } else if !roots.is_empty() {
        // Roots x and x + l^t y congruent mod l, t maximal, y a unit.
        let (x, t, y) = roots
            .iter()
            .map(|&x| {
                let r2 = (tr + q - x) % q;
                let diff = (r2 + q - x) % q;
                if diff == 0 {
                    (x, s_prime, 1u64)
                } else {
                    let t = val_u64(diff, ell);
                    (x, t, diff / ell.pow(t))
                }
            })
            .max_by_key(|&(x, t, _)| (t, std::cmp::Reverse(x)))
            .expect("nonempty");
        let lt = ell.pow(t) % q;
        let qm = ResidueMatrix::from_residues(level, [0, y, 1, (x + lt * y) % q]);
        kind = NormalFormKind::BorelAbelian { t };
        g = qm.mul(&p_inv);
    } else {
        // Irreducible: det = x^2 - eps l^t y^2 with x = tr/2.
        let half = level.inverse(2).expect("l odd");
        let x = tr * half % q;
        let disc = (x * x % q + q - det) % q;
        if disc == 0 {
            return Err(Error::TheoremViolation("irreducible polynomial with square discriminant".into()));
        }
        let t = val_u64(disc, ell);
        let u = disc / ell.pow(t);
        let epsilon = if is_square_mod(u % ell, ell) { 1 } else { least_nonresidue(ell) };
        let depth = ell.pow(s_prime - t);
        let target = u * level.inverse(epsilon).expect("unit") % depth;
        let y = (1..q)
            .find(|&y| y * y % depth == target)
            .ok_or_else(|| Error::TheoremViolation("no square root for the non-split form".into()))?;
        // (c, d) = (0, 1): R = [[y, -x], [0, 1]] satisfies C R = R N.
        let r = ResidueMatrix::new(level, [y as i64, -(x as i64), 0, 1]);
        kind = NormalFormKind::NonsplitCartan { t, epsilon };
        g = r.inverse().expect("y is a unit").mul(&p_inv);
    }
    Ok(NormalFormTag { kind, ell, level: q, conjugator: g })
}

fn least_nonresidue(ell: u64) -> u64 {
    (2..ell).find(|&e| !is_square_mod(e, ell)).expect("odd prime has a non-residue")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn group(n: u64, gens: &[[i64; 4]]) -> MatrixGroup {
        MatrixGroup::with_default_cap(m(n), gens.iter().map(|g| ResidueMatrix::new(m(n), *g)).collect()).unwrap()
    }

    fn assert_sound(h: &MatrixGroup, tag: &NormalFormTag) {
        for x in h.closure().unwrap() {
            assert!(tag.maps_into_family(x).unwrap(), "{x} not mapped into {:?}", tag.kind);
        }
    }

    #[test]
    fn examples() {
        let h = MatrixGroup::scalars(m(5));
        let tag = classify_abelian(&h, 5, 1).unwrap();
        assert_eq!(tag.kind, NormalFormKind::SplitCartan);
        assert_eq!(tag.conjugator, ResidueMatrix::identity(m(5)));

        let h = group(5, &[[0, 2, 1, 0]]);
        let tag = classify_abelian(&h, 5, 1).unwrap();
        assert_eq!(tag.kind, NormalFormKind::NonsplitCartan { t: 0, epsilon: 2 });
        assert_sound(&h, &tag);

        let h = group(5, &[[1, 1, 0, 1]]);
        let tag = classify_abelian(&h, 5, 1).unwrap();
        assert_eq!(tag.kind, NormalFormKind::BorelAbelian { t: 1 });
        assert_sound(&h, &tag);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(classify_abelian(&MatrixGroup::scalars(m(4)), 2, 2).is_err());
        assert!(classify_abelian(&MatrixGroup::full(m(3)), 3, 1).is_err());
    }

    #[test]
    fn higher_level_examples() {
        // mod 27, s' = 2.
        let h = group(27, &[[1, 3, 0, 1], [2, 0, 0, 2]]);
        let tag = classify_abelian(&h, 3, 3).unwrap();
        assert_eq!(tag.level, 9);
        assert_sound(&h, &tag);
        let h = group(25, &[[0, 3, 1, 0]]);
        let tag = classify_abelian(&h, 5, 2).unwrap();
        assert!(matches!(tag.kind, NormalFormKind::NonsplitCartan { t: 0, .. }));
        assert_sound(&h, &tag);
        let h = group(49, &[[3, 0, 0, 5]]);
        let tag = classify_abelian(&h, 7, 2).unwrap();
        assert_eq!(tag.kind, NormalFormKind::SplitCartan);
        assert_sound(&h, &tag);
    }

    #[test]
    fn every_cyclic_subgroup_mod_9_and_25() {
        for (ell, s) in [(3u64, 2u32), (5, 1), (3, 3)] {
            let n = ell.pow(s);
            for g in MatrixGroup::full(m(n)).closure().unwrap().iter().step_by(if n == 27 { 97 } else { 1 }) {
                let h = MatrixGroup::with_default_cap(m(n), vec![*g]).unwrap();
                let tag = classify_abelian(&h, ell, s).unwrap();
                assert!(tag.conjugator.is_invertible());
                assert_sound(&h, &tag);
            }
        }
    }
}
