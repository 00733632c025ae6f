//! Finite subgroups of `GL2(R)` whose elements have rational trace and
//! determinant, with matrices over `Z[sqrt d]` and exact arithmetic.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// `a + b sqrt(d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    pub a: i64,
    pub b: i64,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { a: 0, b: 0 };
    pub const ONE: QuadInt = QuadInt { a: 1, b: 0 };

    pub fn new(a: i64, b: i64) -> Self {
        QuadInt { a, b }
    }

    pub fn int(a: i64) -> Self {
        QuadInt { a, b: 0 }
    }

    fn add(self, o: Self) -> Result<Self> {
        Ok(QuadInt { a: ck(self.a.checked_add(o.a))?, b: ck(self.b.checked_add(o.b))? })
    }

    fn sub(self, o: Self) -> Result<Self> {
        Ok(QuadInt { a: ck(self.a.checked_sub(o.a))?, b: ck(self.b.checked_sub(o.b))? })
    }

    fn mul(self, o: Self, d: i64) -> Result<Self> {
        let bb = ck(ck(self.b.checked_mul(o.b))?.checked_mul(d))?;
        Ok(QuadInt {
            a: ck(ck(self.a.checked_mul(o.a))?.checked_add(bb))?,
            b: ck(ck(self.a.checked_mul(o.b))?.checked_add(ck(self.b.checked_mul(o.a))?))?,
        })
    }
}

fn ck(x: Option<i64>) -> Result<i64> {
    x.ok_or(Error::Overflow("Z[sqrt d] arithmetic"))
}

impl std::fmt::Display for QuadInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}r"),
            (a, b) if b < 0 => write!(f, "{a}-{}r", -b),
            (a, b) => write!(f, "{a}+{b}r"),
        }
    }
}

/// A 2x2 matrix over `Z[sqrt d]` for a positive non-square `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealQuadMatrix {
    d: i64,
    e: [QuadInt; 4],
}

impl RealQuadMatrix {
    pub fn new(d: i64, e: [QuadInt; 4]) -> Result<Self> {
        if d <= 0 || is_square(d) {
            return Err(Error::Precondition(format!("d = {d} must be a positive non-square")));
        }
        Ok(RealQuadMatrix { d, e })
    }

    /// Integer matrix viewed over `Z[sqrt d]`.
    pub fn integer(d: i64, e: [i64; 4]) -> Result<Self> {
        Self::new(d, e.map(QuadInt::int))
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn entries(&self) -> [QuadInt; 4] {
        self.e
    }

    pub fn identity(d: i64) -> Result<Self> {
        Self::integer(d, [1, 0, 0, 1])
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.d != o.d {
            return Err(Error::Precondition(format!("mixed radicands {} and {}", self.d, o.d)));
        }
        let d = self.d;
        let [a, b, c, dd] = self.e;
        let [p, q, r, s] = o.e;
        Ok(RealQuadMatrix {
            d,
            e: [
                a.mul(p, d)?.add(b.mul(r, d)?)?,
                a.mul(q, d)?.add(b.mul(s, d)?)?,
                c.mul(p, d)?.add(dd.mul(r, d)?)?,
                c.mul(q, d)?.add(dd.mul(s, d)?)?,
            ],
        })
    }

    pub fn trace(&self) -> Result<QuadInt> {
        self.e[0].add(self.e[3])
    }

    pub fn det(&self) -> Result<QuadInt> {
        let [a, b, c, d] = self.e;
        a.mul(d, self.d)?.sub(b.mul(c, self.d)?)
    }

    /// Inverse, when the determinant is `+-1` (the only units arising here
    /// with rational determinant).
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let det = self.det()?;
        let sign = match det {
            QuadInt { a: 1, b: 0 } => 1,
            QuadInt { a: -1, b: 0 } => -1,
            _ => return Err(Error::Precondition(format!("determinant {det} is not +-1"))),
        };
        let [a, b, c, d] = self.e;
        let neg = |x: QuadInt| QuadInt::new(-x.a, -x.b);
        let s = |x: QuadInt| QuadInt::new(sign * x.a, sign * x.b);
        Ok(RealQuadMatrix { d: self.d, e: [s(d), s(neg(b)), s(neg(c)), s(a)] })
    }

    pub fn is_identity(&self) -> bool {
        self.e == [QuadInt::ONE, QuadInt::ZERO, QuadInt::ZERO, QuadInt::ONE]
    }

    pub fn is_minus_identity(&self) -> bool {
        let m1 = QuadInt::int(-1);
        self.e == [m1, QuadInt::ZERO, QuadInt::ZERO, m1]
    }
}

fn is_square(d: i64) -> bool {
    d >= 0 && {
        let r = (d as f64).sqrt() as i64;
        (r.saturating_sub(1)..=r + 1).any(|x| x * x == d)
    }
}

/// Isomorphism type of a finite group with rational traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiniteRealGroup {
    Cyclic(u32),
    /// Dihedral group of the given order.
    Dihedral(u32),
}

impl std::fmt::Display for FiniteRealGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FiniteRealGroup::Cyclic(k) => write!(f, "C{k}"),
            FiniteRealGroup::Dihedral(k) => write!(f, "D{k}"),
        }
    }
}

/// Characteristic polynomials `T^2 - tr T + det` allowed for finite-order
/// elements with rational trace and determinant, as `(tr, det)`.
const ALLOWED_CHARPOLYS: [(i64, i64); 6] = [(2, 1), (-2, 1), (0, -1), (0, 1), (-1, 1), (1, 1)];

/// Closure bound; the largest admissible group has 12 elements.
const REAL_CLOSURE_CAP: usize = 24;

/// Classifies the finite group generated by `gens`. Every element must have
/// rational trace and determinant; the result is checked against the list of
/// admissible characteristic polynomials and the `-I` condition for dihedral
/// groups of order 4, 8, 12.
pub fn classify_finite_real(gens: &[RealQuadMatrix]) -> Result<FiniteRealGroup> {
    let d = match gens.first() {
        Some(g) => g.d,
        None => return Ok(FiniteRealGroup::Cyclic(1)),
    };
    let id = RealQuadMatrix::identity(d)?;
    let mut seen: BTreeSet<RealQuadMatrix> = BTreeSet::from([id]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g)?;
            let (tr, det) = (y.trace()?, y.det()?);
            if tr.b != 0 || det.b != 0 {
                return Err(Error::Precondition(format!("element with irrational trace {tr} or determinant {det}")));
            }
            if seen.insert(y) {
                if seen.len() > REAL_CLOSURE_CAP {
                    return Err(Error::CapExceeded { cap: REAL_CLOSURE_CAP, partial: seen.len() });
                }
                frontier.push(y);
            }
        }
    }
    let order = seen.len() as u32;
    let mut has_full_order_element = false;
    for x in &seen {
        let (tr, det) = (x.trace()?.a, x.det()?.a);
        if !ALLOWED_CHARPOLYS.contains(&(tr, det)) {
            return Err(Error::TheoremViolation(format!(
                "element with characteristic polynomial T^2 - ({tr})T + ({det})"
            )));
        }
        let ord = element_order(x)?;
        if ![1, 2, 3, 4, 6].contains(&ord) {
            return Err(Error::TheoremViolation(format!("element of order {ord}")));
        }
        has_full_order_element |= ord == order;
    }
    let group = if has_full_order_element {
        FiniteRealGroup::Cyclic(order)
    } else {
        FiniteRealGroup::Dihedral(order)
    };
    match group {
        FiniteRealGroup::Cyclic(k) if [1, 2, 3, 4, 6].contains(&k) => {}
        FiniteRealGroup::Dihedral(k) if [4, 6, 8, 12].contains(&k) => {
            if k != 6 && !seen.iter().any(RealQuadMatrix::is_minus_identity) {
                return Err(Error::TheoremViolation(format!("dihedral group of order {k} without -I")));
            }
        }
        other => return Err(Error::TheoremViolation(format!("unexpected group type {other}"))),
    }
    Ok(group)
}

fn element_order(x: &RealQuadMatrix) -> Result<u32> {
    let mut p = *x;
    for k in 1..=12 {
        if p.is_identity() {
            return Ok(k);
        }
        p = p.mul(x)?;
    }
    Err(Error::TheoremViolation("element of order greater than 12".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(d: i64, e: [i64; 4]) -> RealQuadMatrix {
        RealQuadMatrix::integer(d, e).unwrap()
    }

    #[test]
    fn examples() {
        let d = 2;
        assert_eq!(classify_finite_real(&[int(d, [0, -1, 1, 0])]).unwrap(), FiniteRealGroup::Cyclic(4));
        let klein = classify_finite_real(&[int(d, [-1, 0, 0, -1]), int(d, [0, 1, 1, 0])]).unwrap();
        assert_eq!(klein, FiniteRealGroup::Dihedral(4));
        let c3 = int(d, [0, -1, 1, -1]);
        assert_eq!(c3.mul(&c3).unwrap().mul(&c3).unwrap(), RealQuadMatrix::identity(d).unwrap());
        assert_eq!(classify_finite_real(&[c3]).unwrap(), FiniteRealGroup::Cyclic(3));
        assert_eq!(classify_finite_real(&[]).unwrap(), FiniteRealGroup::Cyclic(1));
    }

    #[test]
    fn rejects_irrational_and_infinite() {
        let r = RealQuadMatrix::new(2, [QuadInt::new(0, 1), QuadInt::ZERO, QuadInt::ZERO, QuadInt::int(1)]).unwrap();
        assert!(matches!(classify_finite_real(&[r]), Err(Error::Precondition(_))));
        let shear = int(3, [1, 1, 0, 1]);
        assert!(matches!(classify_finite_real(&[shear]), Err(Error::CapExceeded { .. })));
        assert!(RealQuadMatrix::integer(4, [1, 0, 0, 1]).is_err());
    }

    #[test]
    fn rotation_by_sqrt_conjugate() {
        // [[1, r], [0, 1]] conjugates integer groups into Z[sqrt d] matrices
        // with irrational entries but rational traces.
        let d = 3;
        let p = RealQuadMatrix::new(d, [QuadInt::ONE, QuadInt::new(0, 1), QuadInt::ZERO, QuadInt::ONE]).unwrap();
        let pi = p.inverse_unimodular().unwrap();
        let g = p.mul(&int(d, [1, -1, 1, 0])).unwrap().mul(&pi).unwrap();
        assert_ne!(g.entries()[1].b, 0);
        assert_eq!(classify_finite_real(&[g]).unwrap(), FiniteRealGroup::Cyclic(6));
    }

    /// Integer generators of the admissible groups, with their types.
    fn standard() -> Vec<(Vec<[i64; 4]>, FiniteRealGroup)> {
        use FiniteRealGroup::*;
        let (c3, c4, c6, swap) = ([0, -1, 1, -1], [0, -1, 1, 0], [1, -1, 1, 0], [0, 1, 1, 0]);
        vec![
            (vec![], Cyclic(1)),
            (vec![[-1, 0, 0, -1]], Cyclic(2)),
            (vec![c3], Cyclic(3)),
            (vec![c4], Cyclic(4)),
            (vec![c6], Cyclic(6)),
            (vec![[-1, 0, 0, -1], swap], Dihedral(4)),
            (vec![c3, swap], Dihedral(6)),
            (vec![c4, swap], Dihedral(8)),
            (vec![c6, swap], Dihedral(12)),
        ]
    }

    proptest::proptest! {
        #[test]
        fn conjugated_standard_groups(
            which in 0usize..9,
            d in proptest::sample::select(vec![2i64, 3, 5, 7]),
            k in -3i64..=3,
            lower in proptest::bool::ANY,
        ) {
            let (gens, expected) = standard().swap_remove(which);
            let r = QuadInt::new(0, k);
            let e = if lower { [QuadInt::ONE, QuadInt::ZERO, r, QuadInt::ONE] } else { [QuadInt::ONE, r, QuadInt::ZERO, QuadInt::ONE] };
            let p = RealQuadMatrix::new(d, e).unwrap();
            let pi = p.inverse_unimodular().unwrap();
            let conj: Vec<_> = gens.iter().map(|g| p.mul(&int(d, *g)).unwrap().mul(&pi).unwrap()).collect();
            proptest::prop_assert_eq!(classify_finite_real(&conj).unwrap(), expected);
        }
    }
}
