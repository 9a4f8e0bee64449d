//! Table-driven arithmetic in GF(p^e).
//!
//! An element is stored as a `u32` whose base-`p` digits are the coefficients
//! of its polynomial representative (constant term in the least significant
//! digit). The modulus is fixed per `(p, e)`: the Conway polynomial for the
//! small fields listed in `CONWAY`, otherwise the least primitive polynomial
//! when monic polynomials are ordered by the integer whose base-`p` digits are
//! their coefficients. Either way the class of `x` generates the
//! multiplicative group, which is what the log/antilog tables rely on.

use std::fmt;

use thiserror::Error;

pub type Elem = u32;

pub const DEFAULT_ORDER_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {order} exceeds the cap {cap}")]
    TooLarge { order: u64, cap: u64 },
    #[error("GF({sub}) is not a subfield of GF({order})")]
    NotASubfield { sub: u32, order: u32 },
}

/// Conway polynomials, coefficients from the constant term up, monic.
const CONWAY: &[(u32, &[u32])] = &[
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, &[2, 2, 1]),
    (3, &[1, 2, 0, 1]),
    (3, &[2, 0, 0, 2, 1]),
    (5, &[2, 4, 1]),
    (7, &[3, 6, 1]),
];

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    add: Option<Vec<Elem>>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.e, self.modulus)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e`, or returns `None` if it is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

pub fn make_field(p: u32, e: u32) -> Result<FiniteField, FieldError> {
    make_field_capped(p, e, DEFAULT_ORDER_CAP)
}

pub fn make_field_capped(p: u32, e: u32, cap: u64) -> Result<FiniteField, FieldError> {
    if !is_prime(p as u64) {
        return Err(FieldError::NotPrime(p as u64));
    }
    if e == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let order = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
    if order > cap {
        return Err(FieldError::TooLarge { order, cap });
    }
    let q = order as u32;
    if e == 1 {
        // x - g with g the least primitive root, matching the Conway convention
        for g in 1..p {
            if let Some(f) = FiniteField::with_modulus(p, 1, q, vec![(p - g) % p, 1]) {
                return Ok(f);
            }
        }
    }
    let conway = CONWAY
        .iter()
        .find(|(cp, poly)| *cp == p && poly.len() == e as usize + 1)
        .map(|(_, poly)| poly.to_vec());
    if let Some(modulus) = conway {
        if let Some(f) = FiniteField::with_modulus(p, e, q, modulus) {
            return Ok(f);
        }
    }
    // Search monic degree-e polynomials in increasing order of their encoding.
    for low in 0..q {
        let mut modulus = digits(low, p, e as usize);
        modulus.push(1);
        if modulus[0] == 0 {
            continue;
        }
        if let Some(f) = FiniteField::with_modulus(p, e, q, modulus) {
            return Ok(f);
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

/// The field of order `q`, which must be a prime power.
pub fn field_of_order(q: u64) -> Result<FiniteField, FieldError> {
    let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
    make_field(p, e)
}

fn digits(mut a: u32, p: u32, len: usize) -> Vec<u32> {
    let mut d = Vec::with_capacity(len + 1);
    for _ in 0..len {
        d.push(a % p);
        a /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl FiniteField {
    /// Builds the tables if `modulus` is primitive, otherwise returns `None`.
    fn with_modulus(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Option<Self> {
        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * n);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![0u32; e as usize];
        cur[0] = 1;
        for i in 0..n {
            let a = from_digits(&cur, p);
            if log[a as usize] != u32::MAX {
                return None;
            }
            log[a as usize] = i as u32;
            exp.push(a);
            // multiply by x and reduce
            let top = cur[e as usize - 1];
            for k in (1..e as usize).rev() {
                cur[k] = cur[k - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for k in 0..e as usize {
                    cur[k] = (cur[k] + (p - top) * modulus[k]) % p;
                }
            }
        }
        if from_digits(&cur, p) != 1 {
            return None;
        }
        exp.extend_from_within(..);
        let mut f = Self {
            p,
            e,
            q,
            modulus,
            exp,
            log,
            add: None,
        };
        if p != 2 && q <= 256 {
            let mut t = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = f.add_digits(a, b);
                }
            }
            f.add = Some(t);
        }
        Some(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.q
    }

    /// The class of `x`, a generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        self.exp[1 % self.exp.len().max(1)]
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            a ^ b
        } else if let Some(t) = &self.add {
            t[(a * self.q + b) as usize]
        } else {
            self.add_digits(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            None
        } else {
            let l = self.log[a as usize];
            Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64 * (k % (self.q as u64 - 1));
        self.exp[(l % (self.q as u64 - 1)) as usize]
    }

    /// Discrete logarithm to the base of [`primitive_element`](Self::primitive_element).
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, i: u64) -> Elem {
        self.exp[(i % (self.q as u64 - 1)) as usize]
    }

    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u64)
    }

    /// Trace to the prime field, returned as an integer in `0..p`.
    pub fn absolute_trace(&self, a: Elem) -> u32 {
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.e {
            t = self.add(t, x);
            x = self.frobenius(x);
        }
        debug_assert!(t < self.p);
        t
    }

    /// Images of the elements of `sub` under a fixed embedding into this
    /// field: the class of `x` in `sub` goes to the least root of
    /// `sub`'s modulus.
    pub fn subfield_embedding(&self, sub: &FiniteField) -> Result<Vec<Elem>, FieldError> {
        if sub.p != self.p || self.e % sub.e != 0 {
            return Err(FieldError::NotASubfield {
                sub: sub.q,
                order: self.q,
            });
        }
        let eval = |z: Elem| {
            sub.modulus
                .iter()
                .rev()
                .fold(0, |acc, &c| self.add(self.mul(acc, z), c))
        };
        let root = self
            .elements()
            .find(|&z| eval(z) == 0)
            .expect("a subfield modulus splits in the extension");
        let mut powers = vec![1 as Elem];
        for _ in 1..sub.e {
            let last = *powers.last().unwrap();
            powers.push(self.mul(last, root));
        }
        Ok(sub
            .elements()
            .map(|a| {
                digits(a, self.p, sub.e as usize)
                    .iter()
                    .zip(&powers)
                    .fold(0, |acc, (&c, &pw)| self.add(acc, self.mul(c, pw)))
            })
            .collect())
    }
}

/// A coordinate vector over a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldVector {
    pub coords: Vec<Elem>,
}

impl FieldVector {
    pub fn new(coords: Vec<Elem>) -> Self {
        Self { coords }
    }

    pub fn zero(len: usize) -> Self {
        Self {
            coords: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, f: &FiniteField, other: &FieldVector) -> FieldVector {
        FieldVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, f: &FiniteField, s: Elem) -> FieldVector {
        FieldVector::new(self.coords.iter().map(|&a| f.mul(a, s)).collect())
    }

    /// Scales so the first nonzero coordinate is 1. Zero stays zero.
    pub fn normalized(&self, f: &FiniteField) -> FieldVector {
        match self.coords.iter().find(|&&c| c != 0) {
            Some(&lead) => self.scale(f, f.inv(lead).unwrap()),
            None => self.clone(),
        }
    }

    /// Mixed-radix index of the coordinates, first coordinate most significant.
    pub fn index(&self, q: u32) -> usize {
        self.coords
            .iter()
            .fold(0usize, |acc, &c| acc * q as usize + c as usize)
    }

    pub fn from_index(mut idx: usize, q: u32, len: usize) -> FieldVector {
        let mut coords = vec![0; len];
        for c in coords.iter_mut().rev() {
            *c = (idx % q as usize) as Elem;
            idx /= q as usize;
        }
        FieldVector::new(coords)
    }
}

/// One representative per 1-dimensional subspace of `GF(q)^dim`, each with
/// first nonzero coordinate 1, in increasing lexicographic order of the
/// coordinate tuples.
pub fn enumerate_subspace_reps(f: &FiniteField, dim: usize) -> Vec<FieldVector> {
    let q = f.q();
    let mut reps = Vec::new();
    for lead in (0..dim).rev() {
        let tail = dim - lead - 1;
        let count = (q as usize).pow(tail as u32);
        for t in 0..count {
            let mut coords = vec![0; lead];
            coords.push(1);
            coords.extend(FieldVector::from_index(t, q, tail).coords);
            reps.push(FieldVector::new(coords));
        }
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FiniteField) {
        let q = f.q();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_hold_exhaustively_up_to_64() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64] {
            let f = field_of_order(q).unwrap();
            check_axioms(&f);
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for q in [4u64, 8, 9, 16, 25, 27, 64, 81, 128, 256, 343] {
            let f = field_of_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements().step_by(3) {
                    assert_eq!(
                        f.frobenius(f.add(a, b)),
                        f.add(f.frobenius(a), f.frobenius(b))
                    );
                }
            }
        }
    }

    #[test]
    fn small_cases() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.mul(2, 2), 1);
        assert!(matches!(make_field(4, 1), Err(FieldError::NotPrime(4))));
        assert!(matches!(make_field(2, 17), Err(FieldError::TooLarge { .. })));
        assert!(matches!(field_of_order(12), Err(FieldError::NotPrimePower(12))));
    }

    #[test]
    fn gf16_has_cyclic_group_of_order_15() {
        let f = make_field(2, 4).unwrap();
        let g = f.primitive_element();
        let mut x = 1;
        let mut order = 0;
        loop {
            x = f.mul(x, g);
            order += 1;
            if x == 1 {
                break;
            }
        }
        assert_eq!(order, 15);
    }

    #[test]
    fn conway_moduli_are_used_for_small_fields() {
        assert_eq!(make_field(2, 6).unwrap().modulus(), &[1, 1, 0, 1, 1, 0, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[2, 2, 1]);
        // prime fields: x - g with g the least primitive root
        assert_eq!(make_field(7, 1).unwrap().primitive_element(), 3);
        assert_eq!(make_field(13, 1).unwrap().primitive_element(), 2);
    }

    #[test]
    fn trace_takes_both_values_in_characteristic_two() {
        let f = make_field(2, 4).unwrap();
        let ones = f.elements().filter(|&a| f.absolute_trace(a) == 1).count();
        assert_eq!(ones, 8);
    }

    #[test]
    fn subfield_embedding_is_a_ring_homomorphism() {
        for (p, e_small, e_big) in [(2, 1, 3), (2, 2, 4), (2, 2, 6), (2, 3, 6), (3, 1, 2), (3, 2, 4)] {
            let small = make_field(p, e_small).unwrap();
            let big = make_field(p, e_big).unwrap();
            let phi = big.subfield_embedding(&small).unwrap();
            for a in small.elements() {
                for b in small.elements() {
                    let (a, b) = (a as usize, b as usize);
                    assert_eq!(phi[small.add(a as u32, b as u32) as usize], big.add(phi[a], phi[b]));
                    assert_eq!(phi[small.mul(a as u32, b as u32) as usize], big.mul(phi[a], phi[b]));
                }
            }
            let q = small.q() as u64;
            assert!(phi.iter().all(|&z| big.pow(z, q) == z));
        }
        let a = make_field(2, 2).unwrap();
        let b = make_field(2, 3).unwrap();
        assert!(b.subfield_embedding(&a).is_err());
    }

    #[test]
    fn projective_representatives() {
        let cases = [(2u64, 3usize, 7usize), (4, 3, 21), (3, 4, 40)];
        for (q, dim, count) in cases {
            let f = field_of_order(q).unwrap();
            let reps = enumerate_subspace_reps(&f, dim);
            assert_eq!(reps.len(), count);
            assert!(reps.windows(2).all(|w| w[0] < w[1]));
            // Every nonzero vector is a multiple of exactly one representative.
            let mut seen = vec![0u32; (q as usize).pow(dim as u32)];
            for r in &reps {
                assert_eq!(r.normalized(&f), *r);
                for s in 1..f.q() {
                    seen[r.scale(&f, s).index(f.q())] += 1;
                }
            }
            assert_eq!(seen[0], 0);
            assert!(seen[1..].iter().all(|&c| c == 1));
        }
    }
}
