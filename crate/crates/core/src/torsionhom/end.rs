//! Fixed endomorphisms of a torsion module: invariant factors and the rank
//! of successive layers.

use crate::error::{Error, Result};
use crate::gl2::{simultaneous_commutant, MatrixGroup};
use crate::modring::{AbelianShape, Modulus, ResidueMatrix, Submodule};

/// `End_k(E_n) ≅ Z/n × Z/n1 × (Z/n2)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndStructure {
    pub n: Modulus,
    pub n1: u64,
    pub n2: u64,
}

impl EndStructure {
    pub fn new(n: Modulus, n1: u64, n2: u64) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n1 % n2 != 0 || n.get() % n1 != 0 {
            return Err(Error::Precondition(format!("need n2 | n1 | n, got n = {n:?}, n1 = {n1}, n2 = {n2}")));
        }
        Ok(EndStructure { n, n1, n2 })
    }

    /// `n1 n2^2`, the order of the endomorphisms modulo scalars.
    pub fn quotient_order(&self) -> u128 {
        self.n1 as u128 * self.n2 as u128 * self.n2 as u128
    }
}

/// Commutant shape together with the divisor-scan values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndReport {
    pub structure: EndStructure,
    pub shape: AbelianShape,
    /// Largest divisor of `n` modulo which the generators commute.
    pub scan_n1: u64,
    /// Largest divisor of `n` modulo which the generators are scalar.
    pub scan_n2: u64,
}

impl EndReport {
    pub fn agrees(&self) -> bool {
        self.scan_n1 == self.structure.n1 && self.scan_n2 == self.structure.n2
    }
}

/// Computes the commutant and reads off `(n1, n2)`; fails if the invariant
/// factors are not `(n2, n2, n1, n)`.
pub fn end_report(image: &MatrixGroup) -> Result<EndReport> {
    let modulus = image.modulus();
    let n = modulus.get();
    let module = simultaneous_commutant(modulus, image.generators())?;
    let shape = module.shape();
    let mut f = vec![1u64; 4usize.saturating_sub(shape.factors().len())];
    f.extend_from_slice(shape.factors());
    if f.len() != 4 || f[3] != n || f[0] != f[1] {
        return Err(Error::TheoremViolation(format!("commutant {shape} is not of the form (n2, n2, n1, {n})")));
    }
    let structure = EndStructure::new(modulus, f[2], f[0])
        .map_err(|_| Error::TheoremViolation(format!("commutant {shape} has non-dividing factors")))?;
    let mut scan_n1 = 1;
    let mut scan_n2 = 1;
    for m in modulus.divisors() {
        let reduced = image.reduce_to(Modulus::new(m)?)?;
        if reduced.is_abelian() {
            scan_n1 = scan_n1.max(m);
        }
        if reduced.scalar_image_trivial() {
            scan_n2 = scan_n2.max(m);
        }
    }
    Ok(EndReport { structure, shape, scan_n1, scan_n2 })
}

/// As [`end_report`], additionally requiring the divisor scan to agree.
pub fn end_invariants(image: &MatrixGroup) -> Result<EndStructure> {
    let report = end_report(image)?;
    if !report.agrees() {
        return Err(Error::TheoremViolation(format!(
            "commutant gives (n1, n2) = ({}, {}), divisor scan gives ({}, {})",
            report.structure.n1, report.structure.n2, report.scan_n1, report.scan_n2
        )));
    }
    Ok(report.structure)
}

/// `dim_{F_l}` of `End_k(E_{l^s}) / (End_k(E_{l^{s-1}}) ∘ [l])`: 4 for a
/// trivial image modulo scalars, 2 for an abelian image, 1 otherwise.
pub fn rank_jump(image: &MatrixGroup, ell: u64, s: u32) -> Result<u32> {
    if !crate::modring::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if s == 0 {
        return Err(Error::ZeroArgument("s"));
    }
    let n = crate::modring::checked_pow(ell, s)?;
    let modulus = image.modulus();
    if modulus.get() != n {
        return Err(Error::ModulusMismatch(modulus.get(), n));
    }
    let top = simultaneous_commutant(modulus, image.generators())?;
    let lower = if s == 1 {
        Submodule::zero(modulus, 4)
    } else {
        let below = Modulus::new(n / ell)?;
        let reduced = image.reduce_to(below)?;
        let gens: Vec<Vec<u64>> = simultaneous_commutant(below, reduced.generators())?
            .basis()
            .iter()
            .map(|v| {
                ResidueMatrix::from_vec(below, v)
                    .lift_to(modulus)
                    .map(|x| x.scale(ell as i64).to_vec())
            })
            .collect::<Result<_>>()?;
        Submodule::from_generators(modulus, 4, &gens)?
    };
    let quotient = top.quotient_shape(&lower)?;
    if quotient.factors().iter().any(|&f| f != ell) {
        return Err(Error::TheoremViolation(format!("layer quotient {quotient} is not elementary")));
    }
    let rank = quotient.rank() as u32;
    let expected = if image.scalar_image_trivial() {
        4
    } else if image.is_abelian() {
        2
    } else {
        1
    };
    if rank != expected {
        return Err(Error::TheoremViolation(format!("rank jump {rank}, expected {expected}")));
    }
    Ok(rank)
}
