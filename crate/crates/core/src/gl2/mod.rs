//! Subgroups of `GL2(Z/nZ)`: closures, commutants, the scalar-depth
//! invariant `mu`, abelian normal forms, exhaustive abelian-subgroup
//! enumeration, and finite subgroups of `GL2(R)` with rational trace and
//! determinant.

mod commutant;
mod enumerate;
mod normal_form;
mod real;

pub use commutant::{commutant, exhaustive_commutant_order, intertwiner_module, mu, simultaneous_commutant, Commutant};
pub use enumerate::{enumerate_abelian, order_histogram, AbelianCensus, AbelianClass, ENUMERATION_CAP};
pub use normal_form::{classify_abelian, NormalFormKind, NormalFormTag};
pub use real::{classify_finite_real, FiniteRealGroup, QuadInt, RealQuadMatrix};

use std::collections::HashSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::modring::{gcd, Modulus, ResidueMatrix};

/// Default bound on the size of a computed closure.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// A finitely generated subgroup of `GL2(Z/nZ)` with a lazily computed,
/// sorted element list.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    modulus: Modulus,
    generators: Vec<ResidueMatrix>,
    cap: usize,
    closure: OnceLock<std::result::Result<Vec<ResidueMatrix>, Error>>,
}

impl MatrixGroup {
    pub fn new(modulus: Modulus, generators: Vec<ResidueMatrix>, cap: usize) -> Result<Self> {
        for g in &generators {
            if g.modulus() != modulus {
                return Err(Error::ModulusMismatch(modulus.get(), g.modulus().get()));
            }
            if !g.is_invertible() {
                return Err(Error::NotInvertible { modulus: modulus.get() });
            }
        }
        Ok(MatrixGroup { modulus, generators, cap, closure: OnceLock::new() })
    }

    pub fn with_default_cap(modulus: Modulus, generators: Vec<ResidueMatrix>) -> Result<Self> {
        Self::new(modulus, generators, DEFAULT_CLOSURE_CAP)
    }

    pub fn trivial(modulus: Modulus) -> Self {
        Self::with_default_cap(modulus, Vec::new()).expect("no generators")
    }

    /// All of `GL2(Z/nZ)`: elementary matrices and `diag(u, 1)` for units `u`.
    pub fn full(modulus: Modulus) -> Self {
        let n = modulus.get();
        let mut gens = vec![
            ResidueMatrix::new(modulus, [1, 1, 0, 1]),
            ResidueMatrix::new(modulus, [1, 0, 1, 1]),
        ];
        gens.extend(unit_generators(n).into_iter().map(|u| ResidueMatrix::diag(modulus, u as i64, 1)));
        Self::with_default_cap(modulus, gens).expect("invertible generators")
    }

    /// Diagonal matrices with unit entries.
    pub fn split_cartan(modulus: Modulus) -> Self {
        let mut gens = Vec::new();
        for u in unit_generators(modulus.get()) {
            gens.push(ResidueMatrix::diag(modulus, u as i64, 1));
            gens.push(ResidueMatrix::diag(modulus, 1, u as i64));
        }
        Self::with_default_cap(modulus, gens).expect("invertible generators")
    }

    /// Scalar matrices `uI` for units `u`.
    pub fn scalars(modulus: Modulus) -> Self {
        let gens = unit_generators(modulus.get())
            .into_iter()
            .map(|u| ResidueMatrix::scalar(modulus, u as i64))
            .collect();
        Self::with_default_cap(modulus, gens).expect("invertible generators")
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn generators(&self) -> &[ResidueMatrix] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Same generators with a different closure cap.
    pub fn with_cap(&self, cap: usize) -> Self {
        MatrixGroup { modulus: self.modulus, generators: self.generators.clone(), cap, closure: OnceLock::new() }
    }

    /// Every element, sorted by entry tuple.
    pub fn closure(&self) -> Result<&[ResidueMatrix]> {
        match self.closure.get_or_init(|| compute_closure(self.modulus, &self.generators, self.cap)) {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.closure()?.len())
    }

    pub fn contains(&self, m: &ResidueMatrix) -> Result<bool> {
        Ok(self.closure()?.binary_search(m).is_ok())
    }

    /// Whether the group is abelian; generators commuting pairwise suffices.
    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].commutes_with(&g[j])))
    }

    /// Whether every element is scalar (the image modulo scalars is trivial).
    pub fn scalar_image_trivial(&self) -> bool {
        self.generators.iter().all(ResidueMatrix::is_scalar)
    }

    /// Generators reduced modulo a divisor `m` of `n`.
    pub fn reduce_to(&self, m: Modulus) -> Result<MatrixGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.reduce_to(m))
            .collect::<Result<Vec<_>>>()?;
        MatrixGroup::new(m, gens, self.cap)
    }

    /// `[GL2(Z/nZ) : H]`.
    pub fn index(&self) -> Result<u128> {
        let ambient = gl2_order(self.modulus);
        let h = self.order()? as u128;
        if ambient % h != 0 {
            return Err(Error::TheoremViolation(format!("subgroup order {h} does not divide {ambient}")));
        }
        Ok(ambient / h)
    }
}

/// `[GL2(Z/nZ) : H]`.
pub fn subgroup_index(h: &MatrixGroup) -> Result<u128> {
    h.index()
}

/// `|GL2(Z/nZ)| = prod_{p^k || n} p^{4(k-1)} (p^2 - 1)(p^2 - p)`.
pub fn gl2_order(modulus: Modulus) -> u128 {
    modulus
        .factorization()
        .into_iter()
        .map(|(p, k)| {
            let p = p as u128;
            p.pow(4 * (k - 1)) * (p * p - 1) * (p * p - p)
        })
        .product()
}

/// Units of `Z/n` (all of them; moduli here are small).
fn unit_generators(n: u64) -> Vec<u64> {
    (1..n).filter(|&u| gcd(u, n) == 1 && u != 1).collect()
}

fn compute_closure(modulus: Modulus, gens: &[ResidueMatrix], cap: usize) -> Result<Vec<ResidueMatrix>> {
    let id = ResidueMatrix::identity(modulus);
    let mut seen: HashSet<ResidueMatrix> = HashSet::from([id]);
    let mut frontier = vec![id];
    if cap == 0 {
        return Err(Error::CapExceeded { cap, partial: 1 });
    }
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap, partial: seen.len() });
                }
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<ResidueMatrix> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}
