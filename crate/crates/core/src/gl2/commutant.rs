use crate::error::{Error, Result};
use crate::modring::{is_prime, val_u64, AbelianShape, ModMatrix, Modulus, ResidueMatrix, Submodule};

/// The commutant of a single matrix, with the structured generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commutant {
    /// `None` for scalar input.
    pub mu: Option<u32>,
    /// `A'` with `l^mu A' - A` scalar, for non-scalar input.
    pub a_prime: Option<ResidueMatrix>,
    /// `I`, `A'` and `l^{s-mu} E_ij`; or the four `E_ij` for scalar input.
    pub generators: Vec<ResidueMatrix>,
    /// The commutant as a submodule of `M2(Z/l^s) = (Z/l^s)^4`.
    pub module: Submodule,
    pub shape: AbelianShape,
}

fn check_prime_power(a: &ResidueMatrix, ell: u64, s: u32) -> Result<u64> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if s == 0 {
        return Err(Error::ZeroArgument("s"));
    }
    let n = ell.checked_pow(s).ok_or(Error::Overflow("l^s"))?;
    if a.modulus().get() != n {
        return Err(Error::ModulusMismatch(a.modulus().get(), n));
    }
    Ok(n)
}

/// Depth to which `A` is congruent to a scalar:
/// `min(v(alpha - delta), v(beta), v(gamma))` for `A = [[alpha, beta], [gamma, delta]]`.
/// Scalar matrices are rejected.
pub fn mu(a: &ResidueMatrix, ell: u64, s: u32) -> Result<u32> {
    let n = check_prime_power(a, ell, s)?;
    if a.is_scalar() {
        return Err(Error::Precondition(format!("{a} is scalar, so mu is undefined")));
    }
    let [alpha, beta, gamma, delta] = a.entries();
    let diff = (alpha + n - delta) % n;
    Ok([diff, beta, gamma]
        .into_iter()
        .filter(|&x| x != 0)
        .map(|x| val_u64(x, ell))
        .min()
        .expect("non-scalar matrix has a nonzero entry"))
}

fn unit_matrices(modulus: Modulus) -> Vec<ResidueMatrix> {
    (0..4)
        .map(|k| {
            let mut e = [0u64; 4];
            e[k] = 1;
            ResidueMatrix::from_residues(modulus, e)
        })
        .collect()
}

/// `{M : AM = MA}` over `Z/l^s`, built from `I`, `A'` and the depth-`(s - mu)`
/// part `l^{s-mu} M2` rather than by solving a linear system.
pub fn commutant(a: &ResidueMatrix, ell: u64, s: u32) -> Result<Commutant> {
    let n = check_prime_power(a, ell, s)?;
    let modulus = a.modulus();
    if a.is_scalar() {
        let generators = unit_matrices(modulus);
        let module = Submodule::full(modulus, 4);
        let shape = module.shape();
        return Ok(Commutant { mu: None, a_prime: None, generators, module, shape });
    }
    let mu = mu(a, ell, s)?;
    let [alpha, beta, gamma, delta] = a.entries();
    let scale = ell.pow(mu);
    // Exact division of representatives: each is divisible by l^mu.
    let diff = (alpha + n - delta) % n;
    let a_prime = ResidueMatrix::from_residues(modulus, [diff / scale, beta / scale, gamma / scale, 0]);
    let depth = ell.pow(s - mu) as i64;
    let mut generators = vec![ResidueMatrix::identity(modulus), a_prime];
    generators.extend(unit_matrices(modulus).into_iter().map(|e| e.scale(depth)));
    let vecs: Vec<Vec<u64>> = generators.iter().map(ResidueMatrix::to_vec).collect();
    let module = Submodule::from_generators(modulus, 4, &vecs)?;
    let shape = module.shape();
    Ok(Commutant { mu: Some(mu), a_prime: Some(a_prime), generators, module, shape })
}

/// `{F in M2(Z/n) : M' F = F M}` for every pair `(M, M')`, as a submodule of
/// `(Z/n)^4` (row-major coordinates of `F`).
pub fn intertwiner_module(modulus: Modulus, pairs: &[(ResidueMatrix, ResidueMatrix)]) -> Result<Submodule> {
    let n = modulus.get();
    let basis = unit_matrices(modulus);
    let mut entries = Vec::with_capacity(pairs.len() * 16);
    for (m, mp) in pairs {
        if m.modulus() != modulus || mp.modulus() != modulus {
            return Err(Error::ModulusMismatch(modulus.get(), m.modulus().get()));
        }
        // Column j is vec(M' E_j - E_j M).
        let cols: Vec<[u64; 4]> = basis.iter().map(|e| mp.mul(e).sub(&e.mul(m)).entries()).collect();
        for r in 0..4 {
            for c in &cols {
                entries.push(c[r] % n);
            }
        }
    }
    if pairs.is_empty() {
        return Ok(Submodule::full(modulus, 4));
    }
    let sys = ModMatrix::from_residues(modulus, 4 * pairs.len(), 4, entries)?;
    Ok(Submodule::kernel_of(&sys))
}

/// Matrices commuting with every element of `gens`.
pub fn simultaneous_commutant(modulus: Modulus, gens: &[ResidueMatrix]) -> Result<Submodule> {
    let pairs: Vec<_> = gens.iter().map(|g| (*g, *g)).collect();
    intertwiner_module(modulus, &pairs)
}

/// Number of `M` with `AM = MA`, by enumerating all `n^4` matrices.
pub fn exhaustive_commutant_order(a: &ResidueMatrix) -> u64 {
    let n = a.modulus().get();
    let [p, q, r, t] = a.entries();
    let mut count = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    // AM = [[px + qz, py + qw], [rx + tz, ry + tw]],
                    // MA = [[xp + yr, xq + yt], [zp + wr, zq + wt]].
                    if (q * z) % n == (y * r) % n
                        && (p * y + q * w) % n == (x * q + y * t) % n
                        && (r * x + t * z) % n == (z * p + w * r) % n
                    {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    /// Largest depth mu with A scalar mod l^mu, by searching scalars.
    fn scalar_depth(a: &ResidueMatrix, ell: u64, s: u32) -> u32 {
        (0..=s)
            .rev()
            .find(|&k| {
                let q = ell.pow(k);
                (0..q).any(|x| {
                    let e = a.entries();
                    e[0] % q == x && e[3] % q == x && e[1] % q == 0 && e[2] % q == 0
                })
            })
            .unwrap()
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(&ResidueMatrix::new(m(9), [1, 1, 0, 1]), 3, 2).unwrap(), 0);
        assert_eq!(mu(&ResidueMatrix::new(m(9), [1, 3, 0, 1]), 3, 2).unwrap(), 1);
        // v3(4 - 1) = 1 and beta = gamma = 0, so the minimum is 1.
        let a = ResidueMatrix::new(m(27), [4, 0, 0, 1]);
        assert_eq!(mu(&a, 3, 3).unwrap(), 1);
        assert_eq!(scalar_depth(&a, 3, 3), 1);
        assert!(mu(&ResidueMatrix::identity(m(9)), 3, 2).is_err());
        assert!(mu(&ResidueMatrix::new(m(9), [1, 1, 0, 1]), 3, 3).is_err());
        assert!(mu(&ResidueMatrix::new(m(9), [1, 1, 0, 1]), 9, 1).is_err());
    }

    #[test]
    fn commutant_examples() {
        let c = commutant(&ResidueMatrix::identity(m(5)), 5, 1).unwrap();
        assert_eq!(c.shape.factors(), &[5, 5, 5, 5]);
        let c = commutant(&ResidueMatrix::diag(m(5), 1, 2), 5, 1).unwrap();
        assert_eq!(c.shape.factors(), &[5, 5]);
        assert_eq!(exhaustive_commutant_order(&ResidueMatrix::diag(m(5), 1, 2)), 25);
        let a = ResidueMatrix::new(m(9), [1, 3, 0, 1]);
        let c = commutant(&a, 3, 2).unwrap();
        assert_eq!(c.module.order(), exhaustive_commutant_order(&a) as u128);
        assert_eq!(c.module.order(), 729);
        assert_eq!(c.shape.factors(), &[3, 3, 9, 9]);
    }

    #[test]
    fn mu_consistency_all_small() {
        for (ell, s) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
            let n = ell.pow(s);
            for e in 0..n.pow(4) {
                let ent = [e % n, (e / n) % n, (e / n / n) % n, (e / n / n / n) % n];
                let a = ResidueMatrix::from_residues(m(n), ent);
                if a.is_scalar() {
                    continue;
                }
                let mu = mu(&a, ell, s).unwrap();
                assert!(mu < s);
                assert_eq!(scalar_depth(&a, ell, s), mu, "{a}");
            }
        }
    }

    #[test]
    fn structured_matches_linear_system() {
        for (ell, s) in [(2u64, 2u32), (3, 2), (5, 1)] {
            let n = ell.pow(s);
            for e in (0..n.pow(4)).step_by(7) {
                let ent = [e % n, (e / n) % n, (e / n / n) % n, (e / n / n / n) % n];
                let a = ResidueMatrix::from_residues(m(n), ent);
                let c = commutant(&a, ell, s).unwrap();
                let lin = simultaneous_commutant(m(n), &[a]).unwrap();
                assert_eq!(c.module, lin, "{a}");
            }
        }
    }

    #[test]
    fn intertwiners_examples() {
        assert_eq!(intertwiner_module(m(7), &[]).unwrap().order(), 7u128.pow(4));
        let d = ResidueMatrix::diag(m(5), 2, 3);
        let e = ResidueMatrix::diag(m(5), 3, 2);
        let same = intertwiner_module(m(5), &[(d, d)]).unwrap();
        assert_eq!(same.shape().factors(), &[5, 5]);
        assert!(same.contains(&[1, 0, 0, 4]));
        let anti = intertwiner_module(m(5), &[(d, e)]).unwrap();
        assert_eq!(anti.shape().factors(), &[5, 5]);
        assert!(anti.contains(&[0, 1, 3, 0]));
        assert!(!anti.contains(&[1, 0, 0, 0]));
    }
}
