//! Finite fields F_q, q = p^k, with elements packed as base-p integers.
//!
//! An element c_0 + c_1 x + ... + c_{k-1} x^{k-1} of F_p[x]/(modulus) is stored
//! as the integer c_0 + c_1 p + ... + c_{k-1} p^{k-1}. Zero is 0 and one is 1.
//! For q <= 256 the addition and multiplication tables are filled once from
//! the polynomial arithmetic; larger fields use the polynomial arithmetic
//! directly.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::arith::{checked_pow, is_prime, prime_factors};
use crate::error::{Error, Result};

const MAX_Q: u64 = 1 << 20;
const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    q: u32,
    value: u32,
}

impl FieldElement {
    /// Packed base-p value.
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field_size(self) -> u32 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareClass {
    Yes,
    No,
    Zero,
}

/// Handle to an immutable finite field. Cloning is cheap.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    pub(crate) irreducibles: Mutex<HashMap<u32, Arc<Vec<u64>>>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p())
            .field("k", &self.k())
            .field("modulus", &self.inner.modulus)
            .field("generator", &self.inner.generator)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.q == other.inner.q
    }
}

impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.inner.p, self.inner.k)
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts "p^k" or a bare prime power such as "9".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p, k) = match s.split_once('^') {
            Some((p, k)) => {
                let p = p.trim().parse::<u64>().map_err(|e| Error::Parse(format!("{s}: {e}")))?;
                let k = k.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{s}: {e}")))?;
                (p, k)
            }
            None => {
                let q = s.parse::<u64>().map_err(|e| Error::Parse(format!("{s}: {e}")))?;
                prime_power(q).ok_or_else(|| Error::Parse(format!("{q} is not a prime power")))?
            }
        };
        make_field(p, k)
    }
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut k = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        k += 1;
    }
    Some((p, k))
}

/// Builds F_{p^k} with the lowest irreducible modulus (packed order) and the
/// lowest generator of the multiplicative group.
pub fn make_field(p: u64, k: u32) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Precondition("extension degree must be positive".into()));
    }
    let q = match checked_pow(p, k) {
        Some(q) if q <= MAX_Q => q as u32,
        _ => return Err(Error::FieldTooLarge { p, k }),
    };
    let p = p as u32;
    let modulus = lowest_irreducible(p, k);
    let mut inner = FieldInner {
        p,
        k,
        q,
        modulus,
        generator: 0,
        add: Vec::new(),
        mul: Vec::new(),
        neg: Vec::new(),
        inv: Vec::new(),
        irreducibles: Mutex::new(HashMap::new()),
    };
    inner.neg = (0..q).map(|a| inner.neg_slow(a)).collect();
    if q <= TABLE_LIMIT {
        let n = q as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for a in 0..q {
            for b in 0..q {
                add[a as usize * n + b as usize] = inner.add_slow(a, b);
                mul[a as usize * n + b as usize] = inner.mul_slow(a, b);
            }
        }
        inner.add = add;
        inner.mul = mul;
    }
    let order = (q - 1) as u64;
    let primes = prime_factors(order);
    let generator = (1..q)
        .find(|&g| primes.iter().all(|&l| inner.pow_slow(g, order / l) != 1))
        .ok_or_else(|| Error::Invariant("no generator found".into()))?;
    inner.generator = generator;
    let mut inv = vec![0u32; q as usize];
    let mut cur = 1u32;
    let mut powers = Vec::with_capacity(q as usize - 1);
    for _ in 0..q - 1 {
        powers.push(cur);
        cur = inner.mul_fast(cur, generator);
    }
    if cur != 1 {
        return Err(Error::Invariant("generator order mismatch".into()));
    }
    for (i, &x) in powers.iter().enumerate() {
        let j = (order as usize - i) % order as usize;
        inv[x as usize] = powers[j];
    }
    inner.inv = inv;
    Ok(FieldSpec { inner: Arc::new(inner) })
}

fn digits(mut v: u32, p: u32, k: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(k as usize);
    for _ in 0..k {
        d.push(v % p);
        v /= p;
    }
    d
}

fn pack(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic `m`, coefficients over F_p, low first.
fn poly_rem_fp(a: &mut Vec<u32>, m: &[u32], p: u32) {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let off = a.len() - dm;
            for i in 0..dm {
                a[off + i] = (a[off + i] + p - (lead * m[i]) % p) % p;
            }
        }
    }
}

fn lowest_irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = p.pow(k);
    for idx in 0..count {
        let mut m = digits(idx, p, k);
        m.push(1);
        if m[0] == 0 {
            continue;
        }
        if irreducible_fp(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree <= deg/2.
fn irreducible_fp(m: &[u32], p: u32) -> bool {
    let deg = (m.len() - 1) as u32;
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d) {
            let mut g = digits(idx, p, d);
            g.push(1);
            let mut r = m.to_vec();
            poly_rem_fp(&mut r, &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldInner {
    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (digits(a, self.p, self.k), digits(b, self.p, self.k));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        pack(&s, self.p)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let d: Vec<u32> = digits(a, self.p, self.k).iter().map(|&x| (self.p - x) % self.p).collect();
        pack(&d, self.p)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (digits(a, self.p, self.k), digits(b, self.p, self.k));
        let mut prod = vec![0u32; 2 * self.k as usize];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        poly_rem_fp(&mut prod, &self.modulus, self.p);
        prod.resize(self.k as usize, 0);
        pack(&prod, self.p)
    }

    fn mul_fast(&self, a: u32, b: u32) -> u32 {
        if self.mul.is_empty() {
            self.mul_slow(a, b)
        } else {
            self.mul[a as usize * self.q as usize + b as usize]
        }
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_fast(acc, base);
            }
            base = self.mul_fast(base, base);
            e >>= 1;
        }
        acc
    }
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Coefficients of the defining polynomial over F_p, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.wrap(self.inner.generator)
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.q() {
            return Err(Error::Precondition(format!("{value} is not an element of F_{}", self.q())));
        }
        Ok(self.wrap(value))
    }

    /// Element from its coefficient sequence over Z/p (constant term first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.k() as usize || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(Error::Precondition(format!("{coeffs:?} is not a canonical F_{} element", self.q())));
        }
        Ok(self.wrap(pack(coeffs, self.p())))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        digits(a.value, self.p(), self.k())
    }

    pub(crate) fn wrap(&self, value: u32) -> FieldElement {
        FieldElement { q: self.inner.q, value }
    }

    pub(crate) fn irreducible_cache(&self) -> &Mutex<HashMap<u32, Arc<Vec<u64>>>> {
        &self.inner.irreducibles
    }

    fn check(&self, a: FieldElement) -> Result<u32> {
        if a.q != self.inner.q {
            return Err(Error::MixedFields(self.inner.q, a.q));
        }
        Ok(a.value)
    }

    // Raw arithmetic on packed values. Callers guarantee values are < q.

    #[inline]
    pub fn add_raw(&self, a: u32, b: u32) -> u32 {
        let i = &self.inner;
        if i.add.is_empty() {
            if i.k == 1 {
                (a + b) % i.p
            } else {
                i.add_slow(a, b)
            }
        } else {
            i.add[a as usize * i.q as usize + b as usize]
        }
    }

    #[inline]
    pub fn neg_raw(&self, a: u32) -> u32 {
        self.inner.neg[a as usize]
    }

    #[inline]
    pub fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let i = &self.inner;
        if i.mul.is_empty() {
            if i.k == 1 {
                ((a as u64 * b as u64) % i.p as u64) as u32
            } else {
                i.mul_slow(a, b)
            }
        } else {
            i.mul[a as usize * i.q as usize + b as usize]
        }
    }

    /// Inverse of a nonzero packed value; `inv_raw(0)` returns 0.
    #[inline]
    pub fn inv_raw(&self, a: u32) -> u32 {
        self.inner.inv[a as usize]
    }

    pub fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.add_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.sub_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.mul_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.neg_raw(self.check(a)?)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        let a = self.check(a)?;
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.wrap(self.inv_raw(a)))
    }

    /// Square-and-multiply; `pow(0, 0)` is 1 by convention.
    pub fn pow(&self, a: FieldElement, e: u64) -> Result<FieldElement> {
        Ok(self.wrap(self.pow_raw(self.check(a)?, e)))
    }

    pub fn is_square(&self, a: FieldElement) -> Result<SquareClass> {
        let a = self.check(a)?;
        if self.p() == 2 {
            return Err(Error::Precondition("square classes need odd q".into()));
        }
        Ok(match a {
            0 => SquareClass::Zero,
            _ if self.pow_raw(a, (self.q() as u64 - 1) / 2) == 1 => SquareClass::Yes,
            _ => SquareClass::No,
        })
    }

    /// Quadratic character of a packed value: 0, 1 or -1.
    pub fn eta_raw(&self, a: u32) -> i32 {
        if a == 0 {
            0
        } else if self.pow_raw(a, (self.q() as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// All q elements in packed order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q()).map(move |v| self.wrap(v))
    }
}

pub fn enumerate_elements(spec: &FieldSpec) -> Vec<FieldElement> {
    spec.elements().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.generator().value(), 2);
        let two = f3.element(2).unwrap();
        assert_eq!(f3.mul(two, two).unwrap().value(), 1);

        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let x = f4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f4.coeffs(f4.mul(x, x).unwrap()), vec![1, 1]);
        assert_eq!(f4.pow(x, 2).unwrap(), f4.mul(x, x).unwrap());

        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(make_field(2, 21), Err(Error::FieldTooLarge { .. })));

        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.inv(f5.element(2).unwrap()).unwrap().value(), 3);
        assert_eq!(f5.pow(f5.element(2).unwrap(), 4).unwrap().value(), 1);
        assert_eq!(f5.pow(f5.zero(), 0).unwrap().value(), 1);
        assert_eq!(f5.is_square(f5.element(4).unwrap()).unwrap(), SquareClass::Yes);
        assert_eq!(f5.is_square(f5.element(2).unwrap()).unwrap(), SquareClass::No);
        assert_eq!(f5.is_square(f5.zero()).unwrap(), SquareClass::Zero);
        assert!(f4.is_square(x).is_err());
    }

    #[test]
    fn errors() {
        let f3 = make_field(3, 1).unwrap();
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f3.inv(f3.zero()).unwrap_err(), Error::DivisionByZero);
        assert_eq!(f3.add(f3.one(), f5.one()).unwrap_err(), Error::MixedFields(3, 5));
    }

    #[test]
    fn f9_choices() {
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert_eq!(f9.coeffs(f9.generator()), vec![1, 1]);
        let all = enumerate_elements(&f9);
        assert_eq!(all.len(), 9);
        assert_eq!(all[0].value(), 0);
    }

    #[test]
    fn parse_and_display() {
        let f: FieldSpec = "3^2".parse().unwrap();
        assert_eq!(f.to_string(), "3^2");
        let g: FieldSpec = "9".parse().unwrap();
        assert_eq!(f, g);
        assert!("6".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn large_field_uses_polynomial_arithmetic() {
        let f = make_field(2, 10).unwrap();
        let g = f.generator();
        assert_eq!(f.pow(g, 1023).unwrap(), f.one());
        let a = f.element(777).unwrap();
        assert_eq!(f.mul(a, f.inv(a).unwrap()).unwrap(), f.one());
    }
}
