//! The sequence `0 -> Hom(φ(E_m), E'_m) -> Hom(E_n, E'_n) -> H -> 0` and the
//! divisibility relations between fixed homomorphisms and endomorphisms.

use super::{
    geometric_hom_fixed, invariant_homs, matrix_span, right_multiplication, IsogenyData, PairAction,
};
use crate::error::{Error, Result};
use crate::gl2::simultaneous_commutant;
use crate::modring::{gcd, AbelianShape, ResidueMatrix, Submodule};

/// Orders and shapes of the three terms, produced only when every exactness
/// check passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessCertificate {
    pub n: u64,
    pub m: u64,
    pub left: AbelianShape,
    pub middle_order: u128,
    pub h: AbelianShape,
}

fn vector_order(n: u64, v: &[u64]) -> u64 {
    n / v.iter().fold(n, |g, &x| gcd(g, x))
}

/// A basis vector of `a` missing from `b`, if any.
fn witness_outside(a: &Submodule, b: &Submodule) -> Option<Vec<u64>> {
    a.basis().iter().find(|v| !b.contains(v)).cloned()
}

fn not_exact(reason: &str, witness: Vec<u64>) -> Error {
    Error::NotExact { reason: reason.to_string(), witness }
}

pub fn hom_to_end_sequence(action: &PairAction, iso: &IsogenyData) -> Result<ExactnessCertificate> {
    iso.check_equivariant(action)?;
    let modulus = iso.modulus();
    let n = modulus.get();
    let m = iso.m();
    let k = n / m;
    // phi(E_m) is spanned by the columns of (n/m) Φ; find a generator c.
    let scaled = iso.phi().scale(k as i64);
    let cols: Vec<Vec<u64>> = (0..2).map(|j| vec![scaled.at(0, j), scaled.at(1, j)]).collect();
    let image = Submodule::from_generators(modulus, 2, &cols)?;
    let c = image
        .elements()
        .into_iter()
        .find(|v| vector_order(n, v) == m)
        .filter(|_| image.order() == m as u128)
        .ok_or_else(|| Error::Precondition(format!("φ(E_{m}) is not cyclic of order {m}")))?;
    // Coordinates of each column on c.
    let lambda: Vec<u64> = cols
        .iter()
        .map(|v| {
            (0..m)
                .find(|&l| c.iter().zip(v).all(|(&ci, &vi)| modulus.mul(ci, l) == vi))
                .expect("column lies in the cyclic span of c")
        })
        .collect();
    // g in Hom(φ(E_m), E'_m) is determined by t = g(c) in E'_m; its image is
    // the rank-one matrix t λ^T.
    let left_gens: Vec<ResidueMatrix> = [[k, 0], [0, k]]
        .iter()
        .map(|t| {
            ResidueMatrix::from_residues(
                modulus,
                [
                    modulus.mul(t[0], lambda[0]),
                    modulus.mul(t[0], lambda[1]),
                    modulus.mul(t[1], lambda[0]),
                    modulus.mul(t[1], lambda[1]),
                ],
            )
        })
        .collect();
    let left = matrix_span(modulus, &left_gens);
    if left.order() != (m as u128) * (m as u128) {
        return Err(not_exact("first map is not injective", left.basis().first().cloned().unwrap_or_default()));
    }
    let full = Submodule::full(modulus, 4);
    let post = right_multiplication(&iso.phi_dual());
    let kernel = full.kernel_of_map(&post)?;
    if let Some(w) = witness_outside(&left, &kernel) {
        return Err(not_exact("composite of the two maps is nonzero", w));
    }
    if let Some(w) = witness_outside(&kernel, &left) {
        return Err(not_exact("kernel of composition with the dual is larger than the image", w));
    }
    let image = full.image(&post)?;
    let h = full.kernel_of_map(&right_multiplication(&scaled))?;
    if let Some(w) = witness_outside(&image, &h) {
        return Err(not_exact("image does not lie in H", w));
    }
    if let Some(w) = witness_outside(&h, &image) {
        return Err(not_exact("composition with the dual is not onto H", w));
    }
    let middle_order = full.order();
    if left.order() * h.order() != middle_order {
        return Err(not_exact("orders do not multiply", Vec::new()));
    }
    Ok(ExactnessCertificate { n, m, left: left.shape(), middle_order, h: h.shape() })
}

/// Both sides of the divisibility relation for an untwisted action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCertificate {
    pub m: u64,
    pub hom_quotient: AbelianShape,
    pub end_quotient: AbelianShape,
    /// Kernel of composition with the dual on the quotients.
    pub kernel: AbelianShape,
    pub cokernel: AbelianShape,
}

fn violation(what: &str, dump: String) -> Error {
    Error::TheoremViolation(format!("{what}: {dump}"))
}

pub fn divisibility_check_rational(action: &PairAction, iso: &IsogenyData) -> Result<RationalCertificate> {
    if action.twist_nontrivial() {
        return Err(Error::Precondition("action has a nontrivial twist".into()));
    }
    iso.check_equivariant(action)?;
    let modulus = iso.modulus();
    let m = iso.m();
    let homs = invariant_homs(action)?.module;
    let geo = geometric_hom_fixed(iso, false).module;
    let hom_quotient = homs.quotient_shape(&geo)?;
    let ends = simultaneous_commutant(modulus, &action.target_images())?;
    let scalars = matrix_span(modulus, &[ResidueMatrix::identity(modulus)]);
    let end_quotient = ends.quotient_shape(&scalars)?;
    let post = right_multiplication(&iso.phi_dual());
    let image = homs.image(&post)?.sum(&scalars)?;
    let dump = || {
        format!(
            "action {:?}, Φ = {}, Φ∨ = {}, d = {}, Hom quotient {hom_quotient}, End quotient {end_quotient}",
            action.pairs(),
            iso.phi(),
            iso.phi_dual(),
            iso.degree()
        )
    };
    if !image.is_subset_of(&ends) {
        return Err(violation("composition with the dual leaves the fixed endomorphisms", dump()));
    }
    let kernel = homs.preimage(&post, &scalars)?.quotient_shape(&geo)?;
    let cokernel = ends.quotient_shape(&image)?;
    let m128 = m as u128;
    if (m128 * end_quotient.order()) % hom_quotient.order() != 0 {
        return Err(violation("order relation fails", dump()));
    }
    if (m * end_quotient.exponent()) % hom_quotient.exponent() != 0 {
        return Err(violation("exponent relation fails", dump()));
    }
    if !kernel.is_cyclic() || m128 % kernel.order() != 0 {
        return Err(violation(&format!("kernel {kernel} is not cyclic of order dividing {m}"), dump()));
    }
    if m % cokernel.exponent() != 0 {
        return Err(violation(&format!("cokernel {cokernel} is not {m}-torsion"), dump()));
    }
    Ok(RationalCertificate { m, hom_quotient, end_quotient, kernel, cokernel })
}

/// Both sides of the divisibility relation for a twisted action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedCertificate {
    pub m: u64,
    pub hom_quotient: AbelianShape,
    /// Endomorphisms fixed by the kernel of `χ` modulo those fixed by all
    /// generators.
    pub end_ratio: AbelianShape,
    pub kernel: AbelianShape,
}

pub fn divisibility_check_twisted(action: &PairAction, iso: &IsogenyData) -> Result<TwistedCertificate> {
    if !action.twist_nontrivial() {
        return Err(Error::Precondition("action has a trivial twist".into()));
    }
    iso.check_equivariant(action)?;
    let modulus = iso.modulus();
    let n = modulus.get();
    let m = iso.m();
    let homs = invariant_homs(action)?.module;
    let geo = geometric_hom_fixed(iso, true).module;
    let hom_quotient = homs.quotient_shape(&geo)?;
    let ends = simultaneous_commutant(modulus, &action.target_images())?;
    let ends_sub = simultaneous_commutant(modulus, &action.kernel_target_images())?;
    let end_ratio = ends_sub.quotient_shape(&ends)?;
    let post = right_multiplication(&iso.phi_dual());
    let dump = || {
        format!(
            "action {:?}, Φ = {}, Φ∨ = {}, d = {}, Hom quotient {hom_quotient}, End ratio {end_ratio}",
            action.pairs(),
            iso.phi(),
            iso.phi_dual(),
            iso.degree()
        )
    };
    if !homs.image(&post)?.is_subset_of(&ends_sub) {
        return Err(violation("composition with the dual leaves the kernel-fixed endomorphisms", dump()));
    }
    let kernel = homs.preimage(&post, &ends)?.quotient_shape(&geo)?;
    let g2 = gcd(2, n) as u128;
    let m2 = (m as u128) * (m as u128);
    if (g2.pow(4) * m2) % kernel.order() != 0 || (g2 * m2) % kernel.exponent() as u128 != 0 {
        return Err(violation(&format!("kernel {kernel} exceeds its bound"), dump()));
    }
    if (g2.pow(4) * m2 * end_ratio.order()) % hom_quotient.order() != 0 {
        return Err(violation("order relation fails", dump()));
    }
    if (g2 * m2 * end_ratio.exponent() as u128) % hom_quotient.exponent() as u128 != 0 {
        return Err(violation("exponent relation fails", dump()));
    }
    Ok(TwistedCertificate { m, hom_quotient, end_ratio, kernel })
}
