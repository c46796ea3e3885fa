//! Arithmetic, canonical enumeration, and line structure for `Z_q^n`.
//!
//! Elements are digit vectors in little-endian order: digit `j` carries
//! weight `q^j` in the canonical mixed-radix index, and every dense table in
//! this crate is laid out in that index order. For `q = 2` the index is the
//! element's bitmask, which the hot paths exploit.

use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

/// The contract a group implementation provides to the rest of the crate:
/// the group operations plus a canonical enumeration of elements. Dense
/// tables are always indexed by that enumeration, so another finite group
/// can be dropped in by implementing this trait.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn identity(&self) -> GroupElement;
    fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement>;
    fn inv(&self, a: &GroupElement) -> Result<GroupElement>;
    fn element_at(&self, index: usize) -> Result<GroupElement>;
    fn index_of(&self, a: &GroupElement) -> Result<usize>;
}

/// The group `Z_q^n`: `n`-digit vectors with component-wise addition mod `q`.
///
/// `q` does not have to be prime; primality is only required by
/// [`enumerate_1dim_subspaces`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    q: u64,
    n: u32,
    order: usize,
}

impl GroupSpec {
    pub fn new(q: u64, n: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::ModulusTooSmall(q));
        }
        if n == 0 {
            return Err(Error::DimensionZero);
        }
        let order = q
            .checked_pow(n)
            .and_then(|o| usize::try_from(o).ok())
            .ok_or(Error::OrderOverflow { q, n })?;
        Ok(Self { q, n, order })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            digits: vec![0; self.n as usize],
        }
    }

    /// Builds an element from digits, validating length and range.
    pub fn element(&self, digits: Vec<u64>) -> Result<GroupElement> {
        if digits.len() != self.n as usize {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: digits.len(),
            });
        }
        if let Some(&digit) = digits.iter().find(|&&d| d >= self.q) {
            return Err(Error::DigitOutOfRange { digit, q: self.q });
        }
        Ok(GroupElement { digits })
    }

    pub fn conforms(&self, a: &GroupElement) -> bool {
        a.digits.len() == self.n as usize && a.digits.iter().all(|&d| d < self.q)
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        if a.digits.len() != self.n as usize {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: a.digits.len(),
            });
        }
        if let Some(&digit) = a.digits.iter().find(|&&d| d >= self.q) {
            return Err(Error::DigitOutOfRange { digit, q: self.q });
        }
        Ok(())
    }

    /// Component-wise addition mod `q`.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let digits = a
            .digits
            .iter()
            .zip(&b.digits)
            .map(|(&x, &y)| (x + y) % self.q)
            .collect();
        Ok(GroupElement { digits })
    }

    /// Component-wise negation mod `q`.
    pub fn inv(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let digits = a.digits.iter().map(|&x| (self.q - x) % self.q).collect();
        Ok(GroupElement { digits })
    }

    /// The element at a mixed-radix index: digit `j` has weight `q^j`.
    pub fn element_at(&self, index: usize) -> Result<GroupElement> {
        if index >= self.order {
            return Err(Error::IndexOutOfRange {
                index,
                order: self.order,
            });
        }
        let q = self.q as usize;
        let mut rest = index;
        let digits = (0..self.n)
            .map(|_| {
                let d = (rest % q) as u64;
                rest /= q;
                d
            })
            .collect();
        Ok(GroupElement { digits })
    }

    pub fn index_of(&self, a: &GroupElement) -> Result<usize> {
        self.check(a)?;
        let q = self.q as usize;
        let mut index = 0usize;
        for &d in a.digits.iter().rev() {
            index = index * q + d as usize;
        }
        Ok(index)
    }

    /// Index-level group operation; the workhorse of every dense loop.
    ///
    /// Both indices must be below `order`.
    #[inline]
    pub fn combine_indices(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.order && b < self.order);
        if self.q == 2 {
            return a ^ b;
        }
        let q = self.q as usize;
        let (mut a, mut b) = (a, b);
        let mut out = 0usize;
        let mut weight = 1usize;
        for _ in 0..self.n {
            out += ((a % q + b % q) % q) * weight;
            a /= q;
            b /= q;
            weight *= q;
        }
        out
    }

    /// Index-level inverse.
    #[inline]
    pub fn invert_index(&self, a: usize) -> usize {
        debug_assert!(a < self.order);
        if self.q == 2 {
            return a;
        }
        let q = self.q as usize;
        let mut a = a;
        let mut out = 0usize;
        let mut weight = 1usize;
        for _ in 0..self.n {
            out += ((q - a % q) % q) * weight;
            a /= q;
            weight *= q;
        }
        out
    }

    /// Reduces every digit mod `target.q` and re-indexes in the target group.
    /// Requires equal dimensions.
    pub fn reduce_index(&self, index: usize, target: &GroupSpec) -> Result<usize> {
        if target.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: target.n as usize,
            });
        }
        debug_assert!(index < self.order);
        let q = self.q as usize;
        let p = target.q as usize;
        let mut rest = index;
        let mut out = 0usize;
        let mut weight = 1usize;
        for _ in 0..self.n {
            out += (rest % q % p) * weight;
            rest /= q;
            weight *= p;
        }
        Ok(out)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_at(i).expect("index in range"))
    }
}

impl FiniteGroup for GroupSpec {
    fn order(&self) -> usize {
        self.order
    }
    fn identity(&self) -> GroupElement {
        GroupSpec::identity(self)
    }
    fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        GroupSpec::mul(self, a, b)
    }
    fn inv(&self, a: &GroupElement) -> Result<GroupElement> {
        GroupSpec::inv(self, a)
    }
    fn element_at(&self, index: usize) -> Result<GroupElement> {
        GroupSpec::element_at(self, index)
    }
    fn index_of(&self, a: &GroupElement) -> Result<usize> {
        GroupSpec::index_of(self, a)
    }
}

/// An element of some `Z_q^n`, stored as little-endian digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GroupElement {
    digits: Vec<u64>,
}

impl GroupElement {
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u64> {
        self.digits
    }

    pub fn is_identity(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// A one-dimensional subspace (line) of `Z_p^n`: the `p` multiples of a
/// canonical basis vector whose first nonzero digit is 1.
#[derive(Debug, Clone)]
pub struct Subspace {
    spec: GroupSpec,
    basis: GroupElement,
    members: Vec<GroupElement>,
    member_indices: Vec<usize>,
}

impl Subspace {
    pub fn p(&self) -> u64 {
        self.spec.q()
    }

    pub fn basis(&self) -> &GroupElement {
        &self.basis
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn member_indices(&self) -> &[usize] {
        &self.member_indices
    }
}

/// Enumerates all `(p^n - 1) / (p - 1)` lines of `Z_p^n`.
///
/// The lines cover the nonzero elements exactly once: any two of them
/// intersect only in 0. Order is deterministic (by smallest member index).
pub fn enumerate_1dim_subspaces(p: u64, n: u32) -> Result<Vec<Subspace>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let spec = GroupSpec::new(p, n)?;
    let mut seen = vec![false; spec.order()];
    let mut out = Vec::new();
    for index in 1..spec.order() {
        if seen[index] {
            continue;
        }
        let elem = spec.element_at(index)?;
        let lead = *elem.digits().iter().find(|&&d| d != 0).expect("nonzero");
        let basis = scale(&spec, &elem, mod_inverse(lead, p));
        let mut members = Vec::with_capacity(p as usize);
        let mut member_indices = Vec::with_capacity(p as usize);
        for c in 0..p {
            let member = scale(&spec, &basis, c);
            let member_index = spec.index_of(&member)?;
            seen[member_index] = true;
            members.push(member);
            member_indices.push(member_index);
        }
        out.push(Subspace {
            spec,
            basis,
            members,
            member_indices,
        });
    }
    Ok(out)
}

fn scale(spec: &GroupSpec, a: &GroupElement, c: u64) -> GroupElement {
    let digits = a.digits().iter().map(|&d| d * c % spec.q()).collect();
    GroupElement { digits }
}

pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x.is_multiple_of(2) {
        return x == 2;
    }
    let mut d = 3;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn smallest_prime_divisor(q: u64) -> u64 {
    debug_assert!(q >= 2);
    if q.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    q
}

// c^(p-2) mod p, p prime.
fn mod_inverse(c: u64, p: u64) -> u64 {
    let mut base = c as u128 % p as u128;
    let mut exp = p - 2;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        exp >>= 1;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(GroupSpec::new(2, 3).unwrap().order(), 8);
        assert_eq!(GroupSpec::new(4, 2).unwrap().order(), 16);
        // composite q is fine for plain group arithmetic
        assert_eq!(GroupSpec::new(6, 1).unwrap().order(), 6);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(GroupSpec::new(1, 3), Err(Error::ModulusTooSmall(1))));
        assert!(matches!(GroupSpec::new(2, 0), Err(Error::DimensionZero)));
        assert!(matches!(
            GroupSpec::new(2, 64),
            Err(Error::OrderOverflow { .. })
        ));
        assert!(GroupSpec::new(2, 63).is_ok());
    }

    #[test]
    fn mul_examples() {
        let z2 = GroupSpec::new(2, 3).unwrap();
        let a = z2.element(vec![0, 1, 1]).unwrap();
        let b = z2.element(vec![1, 0, 1]).unwrap();
        assert_eq!(z2.mul(&a, &b).unwrap(), z2.element(vec![1, 1, 0]).unwrap());

        let z3 = GroupSpec::new(3, 2).unwrap();
        let a = z3.element(vec![1, 2]).unwrap();
        let b = z3.element(vec![2, 2]).unwrap();
        assert_eq!(z3.mul(&a, &b).unwrap(), z3.element(vec![0, 1]).unwrap());

        assert_eq!(z3.mul(&a, &z3.identity()).unwrap(), a);
    }

    #[test]
    fn inv_examples() {
        let z2 = GroupSpec::new(2, 4).unwrap();
        for a in z2.elements() {
            assert_eq!(z2.inv(&a).unwrap(), a); // self-inverse in characteristic 2
        }
        let z3 = GroupSpec::new(3, 2).unwrap();
        let a = z3.element(vec![1, 2]).unwrap();
        assert_eq!(z3.inv(&a).unwrap(), z3.element(vec![2, 1]).unwrap());
        assert_eq!(z3.inv(&z3.identity()).unwrap(), z3.identity());
    }

    #[test]
    fn mixed_radix_indexing() {
        let z2 = GroupSpec::new(2, 3).unwrap();
        assert_eq!(
            z2.element_at(5).unwrap(),
            z2.element(vec![1, 0, 1]).unwrap()
        );
        let z3 = GroupSpec::new(3, 2).unwrap();
        assert_eq!(z3.element_at(7).unwrap(), z3.element(vec![1, 2]).unwrap());
        assert!(matches!(
            z3.element_at(9),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn index_roundtrip_and_index_ops() {
        for spec in [
            GroupSpec::new(2, 5).unwrap(),
            GroupSpec::new(3, 3).unwrap(),
            GroupSpec::new(6, 2).unwrap(),
        ] {
            for i in 0..spec.order() {
                let a = spec.element_at(i).unwrap();
                assert_eq!(spec.index_of(&a).unwrap(), i);
                assert_eq!(
                    spec.invert_index(i),
                    spec.index_of(&spec.inv(&a).unwrap()).unwrap()
                );
                for j in 0..spec.order() {
                    let b = spec.element_at(j).unwrap();
                    let ab = spec.mul(&a, &b).unwrap();
                    assert_eq!(spec.combine_indices(i, j), spec.index_of(&ab).unwrap());
                }
            }
        }
    }

    #[test]
    fn abelian_and_associative() {
        let spec = GroupSpec::new(4, 2).unwrap();
        for a in 0..spec.order() {
            for b in 0..spec.order() {
                assert_eq!(spec.combine_indices(a, b), spec.combine_indices(b, a));
                for c in 0..spec.order() {
                    assert_eq!(
                        spec.combine_indices(spec.combine_indices(a, b), c),
                        spec.combine_indices(a, spec.combine_indices(b, c))
                    );
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let z2 = GroupSpec::new(2, 3).unwrap();
        let z4 = GroupSpec::new(2, 4).unwrap();
        let short = z2.element(vec![1, 0, 1]).unwrap();
        assert!(matches!(
            z4.mul(&short, &z4.identity()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reduce_index_projects_digits() {
        let z6 = GroupSpec::new(6, 2).unwrap();
        let z2 = GroupSpec::new(2, 2).unwrap();
        let a = z6.element(vec![5, 4]).unwrap();
        let idx = z6.index_of(&a).unwrap();
        let reduced = z6.reduce_index(idx, &z2).unwrap();
        assert_eq!(z2.element_at(reduced).unwrap().digits(), &[1, 0]);
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(enumerate_1dim_subspaces(2, 2).unwrap().len(), 3);
        assert_eq!(enumerate_1dim_subspaces(3, 2).unwrap().len(), 4);
        assert_eq!(enumerate_1dim_subspaces(2, 4).unwrap().len(), 15);
        assert_eq!(enumerate_1dim_subspaces(3, 3).unwrap().len(), 13);
    }

    #[test]
    fn subspaces_require_prime_modulus() {
        assert!(matches!(enumerate_1dim_subspaces(4, 2), Err(Error::NotPrime(4))));
        assert!(matches!(enumerate_1dim_subspaces(6, 2), Err(Error::NotPrime(6))));
    }

    #[test]
    fn subspaces_partition_nonzero_elements() {
        for (p, n) in [(2u64, 4u32), (3, 2), (5, 2)] {
            let lines = enumerate_1dim_subspaces(p, n).unwrap();
            let order = GroupSpec::new(p, n).unwrap().order();
            let mut hits = vec![0usize; order];
            for line in &lines {
                assert_eq!(line.members().len(), p as usize);
                assert_eq!(line.member_indices()[0], 0);
                // canonical representative: first nonzero digit is 1
                assert_eq!(
                    *line.basis().digits().iter().find(|&&d| d != 0).unwrap(),
                    1
                );
                for &idx in line.member_indices() {
                    hits[idx] += 1;
                }
            }
            assert_eq!(hits[0], lines.len());
            assert!(hits[1..].iter().all(|&h| h == 1));
            // pairwise intersections are exactly {0}
            for i in 0..lines.len() {
                for j in i + 1..lines.len() {
                    let a: std::collections::BTreeSet<_> =
                        lines[i].member_indices().iter().copied().collect();
                    let b: std::collections::BTreeSet<_> =
                        lines[j].member_indices().iter().copied().collect();
                    let common: Vec<_> = a.intersection(&b).copied().collect();
                    assert_eq!(common, vec![0]);
                }
            }
        }
    }

    #[test]
    fn primality_helpers() {
        assert!(is_prime(2) && is_prime(3) && is_prime(13));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(91));
        assert_eq!(smallest_prime_divisor(12), 2);
        assert_eq!(smallest_prime_divisor(15), 3);
        assert_eq!(smallest_prime_divisor(13), 13);
    }
}
