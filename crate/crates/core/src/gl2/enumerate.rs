//! Exhaustive enumeration of abelian subgroups of `GL2(Z/l^s)` up to
//! conjugacy, for small `l^s`.
//!
//! Every abelian subgroup is reached from the trivial group by repeatedly
//! adjoining a cyclic subgroup generated by an element of the centralizer.
//! Only one representative per conjugacy class is expanded: if
//! `R = x H x^{-1}`, then `<H, g>` is conjugate to `<R, x g x^{-1}>`.
//! Classes are tracked by computing the full conjugation orbit of each new
//! representative, so deduplication is exact.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::{gl2_order, MatrixGroup};
use crate::error::{Error, Result};
use crate::modring::{is_prime, Modulus, ResidueMatrix};

/// Largest ambient group order accepted by [`enumerate_abelian`].
pub const ENUMERATION_CAP: usize = 4000;

/// One conjugacy class of abelian subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianClass {
    pub order: usize,
    /// Number of subgroups in the class.
    pub class_size: usize,
    /// Generators of the canonical representative (the member whose sorted
    /// element list is lexicographically least).
    pub generators: Vec<ResidueMatrix>,
    /// Elements of the canonical representative, sorted.
    pub elements: Vec<ResidueMatrix>,
}

impl AbelianClass {
    pub fn group(&self) -> MatrixGroup {
        let modulus = self.elements[0].modulus();
        MatrixGroup::with_default_cap(modulus, self.generators.clone()).expect("elements are invertible")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianCensus {
    pub ell: u64,
    pub s: u32,
    pub ambient_order: usize,
    /// Sorted by order, then by representative.
    pub classes: Vec<AbelianClass>,
    pub max_order: usize,
    /// `l^{3s}`.
    pub bound: u64,
}

impl AbelianCensus {
    pub fn total_subgroups(&self) -> usize {
        self.classes.iter().map(|c| c.class_size).sum()
    }
}

type Bits = Vec<u64>;

fn set_bit(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn has_bit(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn iter_bits(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(w, &word)| {
        (0..64).filter(move |k| word >> k & 1 == 1).map(move |k| w * 64 + k)
    })
}

struct Ambient {
    n: u64,
    elems: Vec<ResidueMatrix>,
    /// Index by base-n encoding of entries; `u32::MAX` if not invertible.
    index: Vec<u32>,
    inverse: Vec<u32>,
    words: usize,
}

impl Ambient {
    fn new(modulus: Modulus) -> Result<Self> {
        let elems = MatrixGroup::full(modulus).closure()?.to_vec();
        let n = modulus.get();
        let mut index = vec![u32::MAX; (n as usize).pow(4)];
        for (i, e) in elems.iter().enumerate() {
            index[Self::encode(n, e)] = i as u32;
        }
        let mut amb = Ambient { n, words: elems.len().div_ceil(64), elems, index, inverse: Vec::new() };
        amb.inverse = amb.elems.iter().map(|e| amb.idx(&e.inverse().expect("invertible"))).collect();
        Ok(amb)
    }

    fn encode(n: u64, e: &ResidueMatrix) -> usize {
        let [a, b, c, d] = e.entries();
        (((a * n + b) * n + c) * n + d) as usize
    }

    fn idx(&self, e: &ResidueMatrix) -> u32 {
        self.index[Self::encode(self.n, e)]
    }

    fn mul(&self, i: usize, j: usize) -> usize {
        self.idx(&self.elems[i].mul(&self.elems[j])) as usize
    }

    fn empty(&self) -> Bits {
        vec![0; self.words]
    }

    /// `x S x^{-1}`.
    fn conjugate_set(&self, set: &Bits, x: usize) -> Bits {
        let xi = self.inverse[x] as usize;
        let mut out = self.empty();
        for h in iter_bits(set) {
            set_bit(&mut out, self.mul(self.mul(x, h), xi));
        }
        out
    }
}

/// Enumerates the abelian subgroups of `GL2(Z/l^s)` up to conjugacy, for odd
/// `l` and `|GL2(Z/l^s)| <= ENUMERATION_CAP` (that is, `l^s` in
/// `{3, 5, 7, 9}`). Fails if some subgroup exceeds `l^{3s}`.
pub fn enumerate_abelian(ell: u64, s: u32) -> Result<AbelianCensus> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell == 2 {
        return Err(Error::Precondition("enumeration is only available for odd primes".into()));
    }
    if s == 0 {
        return Err(Error::ZeroArgument("s"));
    }
    let n = ell.checked_pow(s).filter(|&n| n <= 64).ok_or(Error::CapExceeded {
        cap: ENUMERATION_CAP,
        partial: usize::MAX,
    })?;
    let modulus = Modulus::new(n)?;
    let ambient_order = gl2_order(modulus);
    if ambient_order > ENUMERATION_CAP as u128 {
        return Err(Error::CapExceeded { cap: ENUMERATION_CAP, partial: ambient_order as usize });
    }
    let amb = Ambient::new(modulus)?;
    let size = amb.elems.len();
    let id = amb.idx(&ResidueMatrix::identity(modulus)) as usize;

    // Centralizer of each element, as bitsets.
    let centralizers: Vec<Bits> = (0..size)
        .into_par_iter()
        .map(|i| {
            let mut b = amb.empty();
            for j in 0..size {
                if amb.elems[i].commutes_with(&amb.elems[j]) {
                    set_bit(&mut b, j);
                }
            }
            b
        })
        .collect();

    // Distinct cyclic subgroups, each with its least-index generator.
    let mut cyclic: Vec<(usize, Bits)> = Vec::new();
    let mut seen_cyclic: HashSet<Bits> = HashSet::new();
    for g in 0..size {
        let mut b = amb.empty();
        let mut x = id;
        loop {
            set_bit(&mut b, x);
            x = amb.mul(x, g);
            if x == id {
                break;
            }
        }
        if seen_cyclic.insert(b.clone()) {
            cyclic.push((g, b));
        }
    }

    // Conjugation by a generating set of the ambient group.
    let ambient_gens: Vec<usize> = MatrixGroup::full(modulus)
        .generators()
        .iter()
        .map(|g| amb.idx(g) as usize)
        .collect();

    let mut known: HashSet<Bits> = HashSet::new();
    struct Rep {
        set: Bits,
        gens: Vec<usize>,
        class_size: usize,
        canonical: Bits,
    }
    let mut reps: Vec<Rep> = Vec::new();

    let orbit = |start: &Bits| -> Vec<Bits> {
        let mut seen: HashSet<Bits> = HashSet::from([start.clone()]);
        let mut out = vec![start.clone()];
        let mut frontier = vec![start.clone()];
        while let Some(set) = frontier.pop() {
            for &x in &ambient_gens {
                let c = amb.conjugate_set(&set, x);
                if seen.insert(c.clone()) {
                    out.push(c.clone());
                    frontier.push(c);
                }
            }
        }
        out
    };
    let canonical_key = |b: &Bits| -> Vec<usize> { iter_bits(b).collect() };

    let mut trivial = amb.empty();
    set_bit(&mut trivial, id);
    let orb = orbit(&trivial);
    known.extend(orb.iter().cloned());
    reps.push(Rep { set: trivial.clone(), gens: Vec::new(), class_size: orb.len(), canonical: trivial });

    let mut frontier: Vec<usize> = vec![0];
    while !frontier.is_empty() {
        // Candidate extensions of each frontier representative, computed in
        // parallel and consumed in a fixed order.
        let candidates: Vec<Vec<(Bits, Vec<usize>)>> = frontier
            .par_iter()
            .map(|&r| {
                let rep = &reps[r];
                let mut cent = amb.empty();
                for w in cent.iter_mut() {
                    *w = u64::MAX;
                }
                for &g in &rep.gens {
                    for (c, z) in cent.iter_mut().zip(&centralizers[g]) {
                        *c &= z;
                    }
                }
                let members: Vec<usize> = iter_bits(&rep.set).collect();
                let mut out = Vec::new();
                for (g, cyc) in &cyclic {
                    if !has_bit(&cent, *g) || has_bit(&rep.set, *g) {
                        continue;
                    }
                    let mut j = amb.empty();
                    for &h in &members {
                        for c in iter_bits(cyc) {
                            set_bit(&mut j, amb.mul(h, c));
                        }
                    }
                    let mut gens = rep.gens.clone();
                    gens.push(*g);
                    out.push((j, gens));
                }
                out
            })
            .collect();
        let mut next = Vec::new();
        for (set, gens) in candidates.into_iter().flatten() {
            if known.contains(&set) {
                continue;
            }
            let orb = orbit(&set);
            let canonical = orb.iter().min_by_key(|b| canonical_key(b)).expect("nonempty").clone();
            known.extend(orb.iter().cloned());
            next.push(reps.len());
            reps.push(Rep { set, gens, class_size: orb.len(), canonical });
        }
        frontier = next;
    }

    let bound = ell.pow(3 * s);
    let mut classes: Vec<AbelianClass> = reps
        .iter()
        .map(|rep| {
            let elements: Vec<ResidueMatrix> = iter_bits(&rep.canonical).map(|i| amb.elems[i]).collect();
            AbelianClass {
                order: elements.len(),
                class_size: rep.class_size,
                generators: generating_set(&amb, &rep.canonical),
                elements,
            }
        })
        .collect();
    classes.sort_by(|a, b| (a.order, &a.elements).cmp(&(b.order, &b.elements)));
    let max_order = classes.iter().map(|c| c.order).max().unwrap_or(1);
    if max_order as u64 > bound {
        return Err(Error::TheoremViolation(format!(
            "abelian subgroup of order {max_order} exceeds l^(3s) = {bound}"
        )));
    }
    Ok(AbelianCensus { ell, s, ambient_order: size, classes, max_order, bound })
}

/// Greedy generating set for an abelian subgroup given as a bitset: scan the
/// elements in order and keep those outside the span of the previous ones.
fn generating_set(amb: &Ambient, set: &Bits) -> Vec<ResidueMatrix> {
    let id = amb.idx(&ResidueMatrix::identity(amb.elems[0].modulus())) as usize;
    let mut span = amb.empty();
    set_bit(&mut span, id);
    let mut gens = Vec::new();
    for x in iter_bits(set) {
        if has_bit(&span, x) {
            continue;
        }
        gens.push(amb.elems[x]);
        // span <- span * <x>
        let members: Vec<usize> = iter_bits(&span).collect();
        let mut p = id;
        loop {
            p = amb.mul(p, x);
            if p == id {
                break;
            }
            for &h in &members {
                set_bit(&mut span, amb.mul(h, p));
            }
        }
    }
    gens
}

/// Histogram of classes by order (number of classes, number of subgroups).
pub fn order_histogram(census: &AbelianCensus) -> BTreeMap<usize, (usize, usize)> {
    let mut h = BTreeMap::new();
    for c in &census.classes {
        let e = h.entry(c.order).or_insert((0, 0));
        e.0 += 1;
        e.1 += c.class_size;
    }
    h
}


#[cfg(test)]
mod larger {
    #[test]
    fn nine_and_seven_within_bound() {
        let c = super::enumerate_abelian(3, 2).unwrap();
        assert_eq!(c.ambient_order, 3888);
        assert!(c.max_order <= 729);
        // I + 3 M2 (order 81) times {+-I} is abelian of order 162.
        assert!(c.max_order >= 162);
        let c = super::enumerate_abelian(7, 1).unwrap();
        assert_eq!(c.max_order, 48);
    }
}
