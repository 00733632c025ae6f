//! Galois-fixed homomorphisms between torsion modules of isogenous elliptic
//! curves, presented by matrices.
//!
//! Conventions: torsion points are column vectors; a Galois element `σ`
//! acts on `E_n` by `M_σ` and on `E'_n` by `M'_σ`; it acts on
//! `Hom(E_n, E'_n)` by `F ↦ M'_σ F M_σ^{-1}`, so the fixed homomorphisms are
//! `{F : M'_σ F = F M_σ}`. A matrix `F` is stored in `(Z/n)^4` by its
//! row-major coordinates. The twist character `χ` enters only through the
//! equivariance precondition `M'_σ Φ = χ_σ Φ M_σ` of the isogeny matrix `Φ`.

mod end;
pub mod random;
mod sequence;

pub use end::{end_invariants, end_report, rank_jump, EndReport, EndStructure};
pub use sequence::{
    divisibility_check_rational, divisibility_check_twisted, hom_to_end_sequence, ExactnessCertificate,
    RationalCertificate, TwistedCertificate,
};

use crate::error::{Error, Result};
use crate::gl2::intertwiner_module;
use crate::modring::{gcd, AbelianShape, ModMatrix, Modulus, ResidueMatrix, Submodule};

/// Galois action on a pair of torsion modules: generator images
/// `(M_σ, M'_σ, χ_σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAction {
    modulus: Modulus,
    pairs: Vec<(ResidueMatrix, ResidueMatrix, i8)>,
}

impl PairAction {
    pub fn new(modulus: Modulus, pairs: Vec<(ResidueMatrix, ResidueMatrix, i8)>) -> Result<Self> {
        for (i, (m, mp, chi)) in pairs.iter().enumerate() {
            if m.modulus() != modulus || mp.modulus() != modulus {
                return Err(Error::ModulusMismatch(modulus.get(), m.modulus().get().max(mp.modulus().get())));
            }
            if !m.is_invertible() || !mp.is_invertible() {
                return Err(Error::NotInvertible { modulus: modulus.get() });
            }
            if *chi != 1 && *chi != -1 {
                return Err(Error::Precondition(format!("character value {chi} at generator {i} is not +-1")));
            }
        }
        Ok(PairAction { modulus, pairs })
    }

    /// Untwisted action with the same matrices on both sides.
    pub fn diagonal(modulus: Modulus, gens: &[ResidueMatrix]) -> Result<Self> {
        Self::new(modulus, gens.iter().map(|g| (*g, *g, 1)).collect())
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn pairs(&self) -> &[(ResidueMatrix, ResidueMatrix, i8)] {
        &self.pairs
    }

    pub fn twist_nontrivial(&self) -> bool {
        self.pairs.iter().any(|p| p.2 == -1)
    }

    /// Images `M'_σ` on the target curve.
    pub fn target_images(&self) -> Vec<ResidueMatrix> {
        self.pairs.iter().map(|p| p.1).collect()
    }

    /// Images of Schreier generators of the kernel of `χ`, acting on the
    /// target. With transversal `{1, t}` for a generator `t` with
    /// `χ(t) = -1`: `s` and `t s t^{-1}` for `χ(s) = 1`; `s t^{-1}` and `t s`
    /// for `χ(s) = -1`. Without any `χ = -1` this is just the generators.
    pub fn kernel_target_images(&self) -> Vec<ResidueMatrix> {
        let Some(t) = self.pairs.iter().find(|p| p.2 == -1).map(|p| p.1) else {
            return self.target_images();
        };
        let ti = t.inverse().expect("validated invertible");
        let mut out = Vec::new();
        for (_, s, chi) in &self.pairs {
            if *chi == 1 {
                out.push(*s);
                out.push(t.mul(s).mul(&ti));
            } else {
                out.push(s.mul(&ti));
                out.push(t.mul(s));
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// A cyclic isogeny of degree `d`, through its matrices on `n`-torsion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsogenyData {
    d: u64,
    phi: ResidueMatrix,
    phi_dual: ResidueMatrix,
}

impl IsogenyData {
    /// Validates `Φ∨Φ = ΦΦ∨ = d I` and that `ker Φ` on `(Z/n)^2` is cyclic of
    /// order `gcd(d, n)`.
    pub fn new(d: u64, phi: ResidueMatrix, phi_dual: ResidueMatrix) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroArgument("d"));
        }
        let modulus = phi.modulus();
        if phi_dual.modulus() != modulus {
            return Err(Error::ModulusMismatch(modulus.get(), phi_dual.modulus().get()));
        }
        let n = modulus.get();
        let d_id = ResidueMatrix::scalar(modulus, (d % n) as i64);
        if phi_dual.mul(&phi) != d_id || phi.mul(&phi_dual) != d_id {
            return Err(Error::Precondition(format!("{phi_dual} * {phi} is not {d} I")));
        }
        let ker = Submodule::kernel_of(&phi.to_mod_matrix());
        let shape = ker.shape();
        if ker.order() != gcd(d, n) as u128 || !shape.is_cyclic() {
            return Err(Error::Precondition(format!(
                "kernel of {phi} is {shape}, expected cyclic of order gcd({d}, {n})"
            )));
        }
        Ok(IsogenyData { d, phi, phi_dual })
    }

    /// `Φ = diag(d, 1)`, `Φ∨ = diag(1, d)`: kernel spanned by the first basis
    /// vector (reduced mod `n`).
    pub fn canonical(modulus: Modulus, d: u64) -> Result<Self> {
        let dd = (d % modulus.get()) as i64;
        Self::new(d, ResidueMatrix::diag(modulus, dd, 1), ResidueMatrix::diag(modulus, 1, dd))
    }

    pub fn degree(&self) -> u64 {
        self.d
    }

    pub fn phi(&self) -> ResidueMatrix {
        self.phi
    }

    pub fn phi_dual(&self) -> ResidueMatrix {
        self.phi_dual
    }

    pub fn modulus(&self) -> Modulus {
        self.phi.modulus()
    }

    /// `gcd(d, n)`.
    pub fn m(&self) -> u64 {
        gcd(self.d, self.modulus().get())
    }

    /// Checks `M'_σ Φ = χ_σ Φ M_σ` and `M_σ Φ∨ = χ_σ Φ∨ M'_σ` for every
    /// generator.
    pub fn check_equivariant(&self, action: &PairAction) -> Result<()> {
        if action.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch(action.modulus().get(), self.modulus().get()));
        }
        for (index, (m, mp, chi)) in action.pairs().iter().enumerate() {
            let chi = *chi as i64;
            if mp.mul(&self.phi) != self.phi.mul(m).scale(chi) {
                return Err(Error::NotEquivariant { index, detail: format!("M'Φ != χΦM for M = {m}, M' = {mp}") });
            }
            if m.mul(&self.phi_dual) != self.phi_dual.mul(mp).scale(chi) {
                return Err(Error::NotEquivariant { index, detail: format!("MΦ∨ != χΦ∨M' for M = {m}, M' = {mp}") });
            }
        }
        Ok(())
    }
}

/// Submodule of `(Z/n)^4` spanned by the given matrices.
pub fn matrix_span(modulus: Modulus, mats: &[ResidueMatrix]) -> Submodule {
    let gens: Vec<Vec<u64>> = mats.iter().map(ResidueMatrix::to_vec).collect();
    Submodule::from_generators(modulus, 4, &gens).expect("dimension 4")
}

/// The linear map `F ↦ F X` on row-major coordinates, as a 4x4 matrix
/// acting on row vectors.
pub fn right_multiplication(x: &ResidueMatrix) -> ModMatrix {
    let [x0, x1, x2, x3] = x.entries();
    ModMatrix::from_residues(
        x.modulus(),
        4,
        4,
        vec![x0, x1, 0, 0, x2, x3, 0, 0, 0, 0, x0, x1, 0, 0, x2, x3],
    )
    .expect("4x4")
}

/// The linear map `F ↦ X F` on row-major coordinates.
pub fn left_multiplication(x: &ResidueMatrix) -> ModMatrix {
    let [x0, x1, x2, x3] = x.entries();
    ModMatrix::from_residues(
        x.modulus(),
        4,
        4,
        vec![x0, 0, x2, 0, 0, x0, 0, x2, x1, 0, x3, 0, 0, x1, 0, x3],
    )
    .expect("4x4")
}

/// Fixed homomorphisms `{F : M'_σ F = F M_σ}` and their shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantHoms {
    pub module: Submodule,
    pub shape: AbelianShape,
}

pub fn invariant_homs(action: &PairAction) -> Result<InvariantHoms> {
    let pairs: Vec<_> = action.pairs().iter().map(|(m, mp, _)| (*m, *mp)).collect();
    let module = intertwiner_module(action.modulus(), &pairs)?;
    let shape = module.shape();
    Ok(InvariantHoms { module, shape })
}

/// The fixed part of `Z Φ / n` inside the homomorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricFixed {
    pub generator: ResidueMatrix,
    pub module: Submodule,
    pub shape: AbelianShape,
}

/// `<Φ>` (cyclic of order `n`) when the twist is trivial; otherwise the
/// elements fixed by `x ↦ -x`, namely `<(n / gcd(2, n)) Φ>`.
pub fn geometric_hom_fixed(iso: &IsogenyData, twist_nontrivial: bool) -> GeometricFixed {
    let n = iso.modulus().get();
    let generator = if twist_nontrivial {
        iso.phi().scale((n / gcd(2, n)) as i64)
    } else {
        iso.phi()
    };
    let module = matrix_span(iso.modulus(), &[generator]);
    let shape = module.shape();
    GeometricFixed { generator, module, shape }
}

/// Shape of the fixed homomorphisms modulo the fixed geometric part.
pub fn transcendental_quotient(action: &PairAction, iso: &IsogenyData) -> Result<AbelianShape> {
    iso.check_equivariant(action)?;
    let homs = invariant_homs(action)?;
    let geo = geometric_hom_fixed(iso, action.twist_nontrivial());
    homs.module.quotient_shape(&geo.module)
}

/// Whether `f ∘ g∨ ∘ [n / gcd(d n', n)] = 0`, which is equivalent to `f`
/// factoring through `[n'] ∘ g` when `n' gcd(d, n) = gcd(d n', n)`.
pub fn factorization_criterion(f: &ResidueMatrix, g: &IsogenyData, n_prime: u64) -> Result<bool> {
    let n = g.modulus().get();
    if f.modulus().get() != n {
        return Err(Error::ModulusMismatch(f.modulus().get(), n));
    }
    if n_prime == 0 {
        return Err(Error::ZeroArgument("n'"));
    }
    let d = g.degree();
    let big = gcd(d.checked_mul(n_prime).ok_or(Error::Overflow("d n'"))?, n);
    if n_prime.checked_mul(gcd(d, n)) != Some(big) {
        return Err(Error::Precondition(format!("n' gcd(d, n) = {} gcd({d}, {n}) differs from gcd(d n', n) = {big}", n_prime)));
    }
    Ok(f.mul(&g.phi_dual()).scale((n / big) as i64).is_zero())
}

/// Exhaustive check for `h` with `f = h (n' g)`; for `n <= 12`.
pub fn factorization_oracle(f: &ResidueMatrix, g: &IsogenyData, n_prime: u64) -> Result<bool> {
    let n = g.modulus().get();
    if n > 12 {
        return Err(Error::CapExceeded { cap: 12, partial: n as usize });
    }
    let target = g.phi().scale(n_prime as i64 % n as i64);
    let modulus = g.modulus();
    for e in 0..n.pow(4) {
        let h = ResidueMatrix::from_residues(modulus, [e % n, e / n % n, e / n / n % n, e / n / n / n]);
        if h.mul(&target) == *f {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn all_matrices(n: u64) -> impl Iterator<Item = ResidueMatrix> {
        (0..n.pow(4)).map(move |e| ResidueMatrix::from_residues(m(n), [e % n, e / n % n, e / n / n % n, e / n / n / n]))
    }

    #[test]
    fn multiplication_maps() {
        let x = ResidueMatrix::new(m(7), [1, 2, 3, 4]);
        let f = ResidueMatrix::new(m(7), [5, 6, 0, 2]);
        let right = crate::modring::ModMatrix::from_rows(m(7), 4, &[f.to_vec()]).unwrap().mul(&right_multiplication(&x)).unwrap();
        assert_eq!(right.row(0), f.mul(&x).to_vec().as_slice());
        let left = crate::modring::ModMatrix::from_rows(m(7), 4, &[f.to_vec()]).unwrap().mul(&left_multiplication(&x)).unwrap();
        assert_eq!(left.row(0), x.mul(&f).to_vec().as_slice());
    }

    #[test]
    fn invariant_hom_examples() {
        let a = PairAction::new(m(7), vec![]).unwrap();
        assert_eq!(invariant_homs(&a).unwrap().shape.factors(), &[7, 7, 7, 7]);
        let d = ResidueMatrix::diag(m(5), 2, 3);
        let e = ResidueMatrix::diag(m(5), 3, 2);
        let same = invariant_homs(&PairAction::new(m(5), vec![(d, d, 1)]).unwrap()).unwrap();
        let brute = all_matrices(5).filter(|f| d.mul(f) == f.mul(&d)).count();
        assert_eq!(same.module.order(), brute as u128);
        assert_eq!(same.shape.factors(), &[5, 5]);
        let anti = invariant_homs(&PairAction::new(m(5), vec![(d, e, 1)]).unwrap()).unwrap();
        let brute: Vec<_> = all_matrices(5).filter(|f| e.mul(f) == f.mul(&d)).collect();
        assert_eq!(anti.module.order(), brute.len() as u128);
        assert!(brute.iter().all(|f| f.at(0, 0) == 0 && f.at(1, 1) == 0));
    }

    #[test]
    fn geometric_examples() {
        let iso = IsogenyData::canonical(m(5), 1).unwrap();
        assert!(geometric_hom_fixed(&iso, true).shape.is_trivial());
        let iso = IsogenyData::canonical(m(4), 1).unwrap();
        let g = geometric_hom_fixed(&iso, true);
        assert_eq!(g.shape.order(), 2);
        assert_eq!(g.generator, iso.phi().scale(2));
        let iso = IsogenyData::canonical(m(6), 1).unwrap();
        assert_eq!(geometric_hom_fixed(&iso, false).shape.order(), 6);
    }

    #[test]
    fn isogeny_validation() {
        assert!(IsogenyData::canonical(m(12), 4).is_ok());
        // diag(2, 2) is not cyclic-kernel mod 4.
        let bad = IsogenyData::new(4, ResidueMatrix::diag(m(4), 2, 2), ResidueMatrix::diag(m(4), 2, 2));
        assert!(bad.is_err());
        let bad = IsogenyData::new(2, ResidueMatrix::diag(m(4), 2, 1), ResidueMatrix::diag(m(4), 1, 1));
        assert!(bad.is_err());
    }

    #[test]
    fn transcendental_examples() {
        let iso = IsogenyData::canonical(m(3), 1).unwrap();
        let q = transcendental_quotient(&PairAction::new(m(3), vec![]).unwrap(), &iso).unwrap();
        assert_eq!(q.factors(), &[3, 3, 3]);
        let cartan = crate::gl2::MatrixGroup::split_cartan(m(5));
        let action = PairAction::diagonal(m(5), cartan.generators()).unwrap();
        let iso = IsogenyData::canonical(m(5), 1).unwrap();
        assert_eq!(transcendental_quotient(&action, &iso).unwrap().factors(), &[5]);
        let bad = PairAction::new(m(5), vec![(ResidueMatrix::diag(m(5), 1, 2), ResidueMatrix::identity(m(5)), 1)]).unwrap();
        assert!(matches!(transcendental_quotient(&bad, &iso), Err(Error::NotEquivariant { index: 0, .. })));
    }

    #[test]
    fn factorization_examples() {
        let g = IsogenyData::canonical(m(5), 1).unwrap();
        for f in all_matrices(5).step_by(37) {
            assert!(factorization_criterion(&f, &g, 1).unwrap());
            assert!(factorization_oracle(&f, &g, 1).unwrap());
        }
        let g = IsogenyData::canonical(m(4), 2).unwrap();
        let f = ResidueMatrix::diag(m(4), 1, 0);
        assert_eq!(factorization_criterion(&f, &g, 1).unwrap(), factorization_oracle(&f, &g, 1).unwrap());
        let g = IsogenyData::canonical(m(6), 3).unwrap();
        let f = ResidueMatrix::diag(m(6), 2, 0);
        assert_eq!(factorization_criterion(&f, &g, 2).unwrap(), factorization_oracle(&f, &g, 2).unwrap());
        // Hypothesis violated: n = 4, d = 2, n' = 3 gives 3 * 2 != gcd(6, 4).
        let g = IsogenyData::canonical(m(4), 2).unwrap();
        assert!(factorization_criterion(&ResidueMatrix::identity(m(4)), &g, 3).is_err());
    }

    #[test]
    fn schreier_images() {
        let n = m(7);
        let a = ResidueMatrix::new(n, [1, 1, 0, 1]);
        let b = ResidueMatrix::diag(n, 3, 1);
        let action = PairAction::new(n, vec![(a, a, 1), (b, b.scale(-1), -1)]).unwrap();
        let imgs = action.kernel_target_images();
        let t = b.scale(-1);
        assert!(imgs.contains(&a));
        assert!(imgs.contains(&t.mul(&a).mul(&t.inverse().unwrap())));
        assert!(imgs.contains(&t.mul(&t)));
    }
}
