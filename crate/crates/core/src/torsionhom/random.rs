//! Seeded random instances: subgroups of `GL2(Z/n)` and equivariant pairs
//! of actions with an isogeny.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{IsogenyData, PairAction};
use crate::error::{Error, Result};
use crate::gl2::MatrixGroup;
use crate::modring::{gcd, Modulus, ResidueMatrix};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix<R: Rng>(rng: &mut R, modulus: Modulus) -> ResidueMatrix {
    let n = modulus.get();
    ResidueMatrix::from_residues(modulus, [0; 4].map(|_| rng.gen_range(0..n)))
}

pub fn random_unit<R: Rng>(rng: &mut R, modulus: Modulus) -> u64 {
    let n = modulus.get();
    loop {
        let u = rng.gen_range(0..n);
        if gcd(u, n) == 1 {
            return u % n;
        }
    }
}

pub fn random_gl2<R: Rng>(rng: &mut R, modulus: Modulus) -> ResidueMatrix {
    loop {
        let g = random_matrix(rng, modulus);
        if g.is_invertible() {
            return g;
        }
    }
}

/// A subgroup generated by one to three matrices of the form
/// `uI + vB + tY` with a shared `B`, a random divisor `t` of `n` and random
/// `Y`, mixed with occasional arbitrary elements. This reaches images that
/// are scalar or abelian modulo various divisors.
pub fn random_subgroup<R: Rng>(rng: &mut R, modulus: Modulus) -> MatrixGroup {
    let divisors = modulus.divisors();
    let b = random_matrix(rng, modulus);
    let count = rng.gen_range(1..=3);
    let mut gens = Vec::with_capacity(count);
    let scalar_only = rng.gen_bool(0.3);
    while gens.len() < count {
        let g = if rng.gen_bool(0.15) {
            random_gl2(rng, modulus)
        } else {
            let u = rng.gen_range(0..modulus.get()) as i64;
            let v = if scalar_only { 0 } else { rng.gen_range(0..modulus.get()) as i64 };
            let t = *divisors.choose(rng).expect("n has divisors") as i64;
            ResidueMatrix::scalar(modulus, u)
                .add(&b.scale(v))
                .add(&random_matrix(rng, modulus).scale(t))
        };
        if g.is_invertible() {
            gens.push(g);
        }
    }
    MatrixGroup::with_default_cap(modulus, gens).expect("invertible generators")
}

/// Shape of the generators drawn for the source action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Scalar,
    SplitCartan,
    NonsplitCartan,
    Borel,
    General,
}

const KINDS: [InstanceKind; 5] = [
    InstanceKind::Scalar,
    InstanceKind::SplitCartan,
    InstanceKind::NonsplitCartan,
    InstanceKind::Borel,
    InstanceKind::General,
];

fn draw_generator<R: Rng>(rng: &mut R, modulus: Modulus, kind: InstanceKind, eps: i64) -> ResidueMatrix {
    let n = modulus.get();
    let mut r = || rng.gen_range(0..n) as i64;
    match kind {
        InstanceKind::Scalar => ResidueMatrix::scalar(modulus, r()),
        InstanceKind::SplitCartan => ResidueMatrix::diag(modulus, r(), r()),
        InstanceKind::NonsplitCartan => {
            let (x, y) = (r(), r());
            ResidueMatrix::new(modulus, [x, eps * y, y, x])
        }
        InstanceKind::Borel => ResidueMatrix::new(modulus, [r(), r(), 0, r()]),
        InstanceKind::General => ResidueMatrix::new(modulus, [r(), r(), r(), r()]),
    }
}

/// An equivariant pair of actions with an isogeny of degree `d` on
/// `n`-torsion, plus the draw kind.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub kind: InstanceKind,
    pub action: PairAction,
    pub iso: IsogenyData,
}

/// Draws generators `M` of the chosen kind, keeps those whose lower-left
/// entry is a multiple of `gcd(d, n)` (exactly the ones preserving the
/// kernel of `Φ = diag(d, 1)`), sets `M'` so that `M' Φ = Φ M`, and then
/// changes bases on both sides by random invertible matrices. With `twisted`
/// the target matrices are multiplied by a character taking the value `-1`
/// at least once.
pub fn random_instance<R: Rng>(rng: &mut R, modulus: Modulus, d: u64, twisted: bool) -> Result<RandomInstance> {
    let n = modulus.get();
    let canonical = IsogenyData::canonical(modulus, d)?;
    let dd = d % n;
    let kind = *KINDS.choose(rng).expect("nonempty");
    let eps = (1..n.max(2)).find(|&e| !crate::modring::is_square_mod(e, n)).unwrap_or(1) as i64;
    let count = rng.gen_range(1..=3);
    let mut pairs = Vec::with_capacity(count);
    let mut attempts = 0;
    while pairs.len() < count {
        attempts += 1;
        if attempts > 10_000 {
            return Err(Error::CapExceeded { cap: 10_000, partial: pairs.len() });
        }
        let m = draw_generator(rng, modulus, kind, eps);
        if !m.is_invertible() {
            continue;
        }
        let [a, b, g, e] = m.entries();
        // Solve d c = g mod n.
        let Some(c) = (0..n).find(|&c| modulus.mul(dd, c) == g) else {
            continue;
        };
        let mp = ResidueMatrix::from_residues(modulus, [a, modulus.mul(dd, b), c, e]);
        pairs.push((m, mp, 1i8));
    }
    if twisted {
        for p in pairs.iter_mut() {
            if rng.gen_bool(0.5) {
                p.2 = -1;
            }
        }
        let i = rng.gen_range(0..pairs.len());
        pairs[i].2 = -1;
        for p in pairs.iter_mut() {
            p.1 = p.1.scale(p.2 as i64);
        }
    }
    let p = random_gl2(rng, modulus);
    let q = random_gl2(rng, modulus);
    let (pi, qi) = (p.inverse().expect("invertible"), q.inverse().expect("invertible"));
    let pairs: Vec<_> = pairs
        .into_iter()
        .map(|(m, mp, chi)| (p.mul(&m).mul(&pi), q.mul(&mp).mul(&qi), chi))
        .collect();
    let iso = IsogenyData::new(d, q.mul(&canonical.phi()).mul(&pi), p.mul(&canonical.phi_dual()).mul(&qi))?;
    let action = PairAction::new(modulus, pairs)?;
    iso.check_equivariant(&action)?;
    Ok(RandomInstance { kind, action, iso })
}
