//! Bounds on transcendental Brauer classes: field-degree budgets, the
//! constant `c`, the `n`-torsion bound built from endomorphism structures,
//! `H^1(G, Z^r)` for finite integral actions, and the explicit constants for
//! K3 surfaces and for products over `Q`.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::modring::integer::{determinant, integer_kernel, saturation_index};
use crate::modring::{gcd, gcd_power, is_prime, val_u64, ModMatrix, Modulus, Submodule};
use crate::torsionhom::EndStructure;

/// Degrees `[L:k]` that can occur for the splitting field of a product.
pub const ALLOWED_SPLITTING_DEGREES: [u32; 7] = [1, 2, 3, 4, 6, 8, 12];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    /// Principal homogeneous space of an abelian surface.
    AbelianTorsor,
    KummerK3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceScenario {
    pub n: Modulus,
    pub d: u64,
    pub period: u64,
    pub twist_nontrivial: bool,
    pub base_change_degree_l: u32,
    pub kind: SurfaceKind,
}

impl SurfaceScenario {
    pub fn new(
        n: Modulus,
        d: u64,
        period: u64,
        twist_nontrivial: bool,
        base_change_degree_l: u32,
        kind: SurfaceKind,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroArgument("d"));
        }
        if period == 0 {
            return Err(Error::ZeroArgument("period"));
        }
        if kind == SurfaceKind::KummerK3 && period > 2 {
            return Err(Error::Precondition(format!("Kummer surfaces come from torsors of period <= 2, got {period}")));
        }
        if !ALLOWED_SPLITTING_DEGREES.contains(&base_change_degree_l) {
            return Err(Error::Precondition(format!(
                "[L:k] = {base_change_degree_l} is not one of {ALLOWED_SPLITTING_DEGREES:?}"
            )));
        }
        Ok(SurfaceScenario { n, d, period, twist_nontrivial, base_change_degree_l, kind })
    }
}

/// Bound on `[k':k]`: `gcd(per, n^inf)^4`, capped at `2^4` for Kummer
/// surfaces.
pub fn field_degree_budget(s: &SurfaceScenario) -> Result<u64> {
    let g = gcd_power(s.period, s.n.get())?;
    let b = g.checked_pow(4).ok_or(Error::Overflow("field degree budget"))?;
    Ok(match s.kind {
        SurfaceKind::AbelianTorsor => b,
        SurfaceKind::KummerK3 => b.min(16),
    })
}

/// `gcd(d, n)` for a trivial twist, `gcd(2 d^2, n)` otherwise.
pub fn c_constant(s: &SurfaceScenario) -> Result<u64> {
    let n = s.n.get();
    if !s.twist_nontrivial {
        return Ok(gcd(s.d, n));
    }
    let d = s.d % n;
    // gcd(2 d^2, n) = gcd(2 d^2 mod n, n), computed without overflow.
    let v = Modulus::new(n)?;
    Ok(gcd(v.mul(2 % n, v.mul(d, d)), n))
}

/// One labelled factor of a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundFactor {
    pub label: String,
    pub value: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCertificate {
    pub bound: BigUint,
    pub factors: Vec<BoundFactor>,
    /// Whether the Brauer quotient embeds isomorphically into the
    /// homomorphism quotient; otherwise the bound is an upper bound only.
    pub embedding_is_isomorphism: bool,
}

fn factor(label: impl Into<String>, value: u64) -> BoundFactor {
    BoundFactor { label: label.into(), value: BigUint::from(value) }
}

/// Upper bound for `#((Br)_n / (Br_1)_n)`.
///
/// Trivial twist: `gcd(d, n) n1 n2^2` from the structure of the target
/// curve's fixed endomorphisms. Nontrivial twist: `gcd(2, n)^4 gcd(d, n)^2`
/// times `(n1'/n1)(n2'/n2)^2`, where `kernel_end` is the structure for the
/// kernel of the twist character.
pub fn brauer_n_torsion_bound(
    s: &SurfaceScenario,
    end: &EndStructure,
    kernel_end: Option<&EndStructure>,
) -> Result<BoundCertificate> {
    let n = s.n.get();
    if end.n != s.n {
        return Err(Error::ModulusMismatch(n, end.n.get()));
    }
    let m = gcd(s.d, n);
    let mut factors = Vec::new();
    if s.twist_nontrivial {
        let k = kernel_end.ok_or_else(|| {
            Error::Precondition("a nontrivial twist needs the endomorphism structure over the quadratic extension".into())
        })?;
        if k.n != s.n {
            return Err(Error::ModulusMismatch(n, k.n.get()));
        }
        if k.n1 % end.n1 != 0 || k.n2 % end.n2 != 0 {
            return Err(Error::Precondition(format!(
                "extension structure ({}, {}) does not contain ({}, {})",
                k.n1, k.n2, end.n1, end.n2
            )));
        }
        let g2 = gcd(2, n);
        factors.push(factor("gcd(2,n)^4", g2.pow(4)));
        factors.push(factor("gcd(d,n)^2", m * m));
        factors.push(factor("n1'/n1", k.n1 / end.n1));
        factors.push(factor("(n2'/n2)^2", (k.n2 / end.n2).pow(2)));
    } else {
        factors.push(factor("gcd(d,n)", m));
        factors.push(factor("n1", end.n1));
        factors.push(factor("n2^2", end.n2 * end.n2));
    }
    let bound = factors.iter().fold(BigUint::from(1u32), |acc, f| acc * &f.value);
    let coprime_period = gcd(s.period, n) == 1;
    let embedding_is_isomorphism = s.base_change_degree_l == 1
        && match s.kind {
            SurfaceKind::AbelianTorsor => coprime_period,
            SurfaceKind::KummerK3 => n % 2 == 1,
        };
    Ok(BoundCertificate { bound, factors, embedding_is_isomorphism })
}

/// A finite group acting on `Z^r` through invertible integer matrices
/// (row-major, acting on column vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerActionGroup {
    rank: usize,
    generators: Vec<Vec<i64>>,
}

/// Default bound on the closure of an integral action.
pub const INTEGER_ACTION_CAP: usize = 100_000;

impl IntegerActionGroup {
    pub fn new(rank: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroArgument("rank"));
        }
        for g in &generators {
            if g.len() != rank * rank {
                return Err(Error::Dimension(format!("generator with {} entries for rank {rank}", g.len())));
            }
            let rows: Vec<Vec<i128>> = g.chunks(rank).map(|r| r.iter().map(|&x| x as i128).collect()).collect();
            let det = determinant(&rows)?;
            if det != 1 && det != -1 {
                return Err(Error::Precondition(format!("generator with determinant {det}")));
            }
        }
        Ok(IntegerActionGroup { rank, generators })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    fn mul(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
        let r = self.rank;
        let mut out = vec![0i64; r * r];
        for i in 0..r {
            for j in 0..r {
                let mut acc = 0i64;
                for t in 0..r {
                    acc = a[i * r + t]
                        .checked_mul(b[t * r + j])
                        .and_then(|x| acc.checked_add(x))
                        .ok_or(Error::Overflow("integer action closure"))?;
                }
                out[i * r + j] = acc;
            }
        }
        Ok(out)
    }

    /// All elements; fails with `CapExceeded` for infinite or huge groups.
    pub fn elements(&self, cap: usize) -> Result<Vec<Vec<i64>>> {
        let r = self.rank;
        let id: Vec<i64> = (0..r * r).map(|k| i64::from(k % (r + 1) == 0)).collect();
        let mut seen: HashSet<Vec<i64>> = HashSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in &self.generators {
                let y = self.mul(&x, g)?;
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded { cap, partial: seen.len() + 1 });
                    }
                    seen.insert(y.clone());
                    frontier.push(y);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }
}

/// Pieces of `H^1(G, Z^r) ≅ (Z^r/|G|)^G / ((Z^r)^G / |G|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Report {
    pub group_order: u64,
    /// `#(Z^r/|G|)^G`.
    pub fixed_mod_order: u128,
    /// Rank of the fixed sublattice `(Z^r)^G`.
    pub fixed_lattice_rank: usize,
    pub h1_order: u128,
}

pub fn h1_integer_action(g: &IntegerActionGroup) -> Result<H1Report> {
    h1_integer_action_capped(g, INTEGER_ACTION_CAP)
}

pub fn h1_integer_action_capped(g: &IntegerActionGroup, cap: usize) -> Result<H1Report> {
    let r = g.rank();
    let order = g.elements(cap)?.len() as u64;
    let modulus = Modulus::new(order)?;
    // Stacked rows of (g - I) for every generator.
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for gen in g.generators() {
        for i in 0..r {
            rows.push((0..r).map(|j| gen[i * r + j] as i128 - i128::from(i == j)).collect());
        }
    }
    let fixed_mod = if rows.is_empty() {
        Submodule::full(modulus, r)
    } else {
        let entries: Vec<i64> = rows.iter().flatten().map(|&x| x as i64).collect();
        Submodule::kernel_of(&ModMatrix::new(modulus, rows.len(), r, &entries)?)
    };
    let lattice = integer_kernel(r, &rows)?;
    if !lattice.is_empty() && saturation_index(&lattice)? != 1 {
        return Err(Error::TheoremViolation("fixed sublattice is not saturated".into()));
    }
    let reduced: Vec<Vec<u64>> = lattice
        .iter()
        .map(|v| v.iter().map(|&x| x.rem_euclid(order as i128) as u64).collect())
        .collect();
    let lattice_mod = Submodule::from_generators(modulus, r, &reduced)?;
    if !lattice_mod.is_subset_of(&fixed_mod) {
        return Err(Error::TheoremViolation("fixed lattice does not reduce into the fixed points".into()));
    }
    let h1_order = fixed_mod.order() / lattice_mod.order();
    let bound = (order as u128).checked_pow(r as u32).ok_or(Error::Overflow("|G|^r"))?;
    if bound % h1_order != 0 {
        return Err(Error::TheoremViolation(format!("#H^1 = {h1_order} does not divide |G|^r = {bound}")));
    }
    Ok(H1Report { group_order: order, fixed_mod_order: fixed_mod.order(), fixed_lattice_rank: lattice.len(), h1_order })
}

/// `|GL_r(F_3)|`.
pub fn gl_f3_order(r: u32) -> BigUint {
    let q = BigUint::from(3u32);
    let qr = q.pow(r);
    (0..r).fold(BigUint::from(1u32), |acc, i| acc * (&qr - q.pow(i)))
}

/// `|GL_r(F_3)|^r`, a multiple of `#(Br_1 X / Br_0 X)` when the geometric
/// Picard group is free of rank `r`.
pub fn algebraic_brauer_constant(r: u32) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::ZeroArgument("r"));
    }
    if r > 20 {
        return Err(Error::Precondition(format!("Picard rank {r} exceeds 20")));
    }
    Ok(gl_f3_order(r).pow(r))
}

/// `e^{22 - r}`: cardinality bound for a subgroup of `(Q/Z)^{22-r}` of
/// exponent `e`.
pub fn k3_card_from_exponent(e: u64, r: u32) -> Result<BigUint> {
    if e == 0 {
        return Err(Error::ZeroArgument("e"));
    }
    if !(1..=20).contains(&r) {
        return Err(Error::Precondition(format!("Picard rank {r} outside 1..=20")));
    }
    Ok(BigUint::from(e).pow(22 - r))
}

/// The bound over `Q` together with its ingredients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverQBound {
    /// Largest possible order of a transcendental class: `n / gcd(d, n) <= 8`
    /// forces `n <= 8 gcd(d, n) <= 8d`, attained at `n = 8d`.
    pub max_order: u64,
    /// `max_order^3`, from `Br(Y-bar) ≅ (Q/Z)^3`.
    pub bound: BigUint,
}

pub fn over_q_bound(d: u64) -> Result<OverQBound> {
    if d == 0 {
        return Err(Error::ZeroArgument("d"));
    }
    let max_order = d.checked_mul(8).ok_or(Error::Overflow("8d"))?;
    debug_assert_eq!(max_order / gcd(d, max_order), 8);
    Ok(OverQBound { max_order, bound: BigUint::from(max_order).pow(3) })
}

/// `l^{B(l, 24 r l^{4v}) + v_l(2 d^2)}` for a caller-supplied `B`.
pub fn ell_primary_budget(ell: u64, r: u64, v: u32, d: u64, b: impl Fn(u64, u64) -> u32) -> Result<BigUint> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if r == 0 {
        return Err(Error::ZeroArgument("r"));
    }
    if d == 0 {
        return Err(Error::ZeroArgument("d"));
    }
    let arg = ell
        .checked_pow(4 * v)
        .and_then(|x| x.checked_mul(24))
        .and_then(|x| x.checked_mul(r))
        .ok_or(Error::Overflow("24 r l^{4v}"))?;
    let exp = b(ell, arg) + val_u64(2, ell) + 2 * val_u64(d, ell);
    Ok(BigUint::from(ell).pow(exp))
}
