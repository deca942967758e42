//! Polynomials over F_q, places, factorization and the enumerations used by
//! the experiments.
//!
//! Monic polynomials of degree n are indexed by the integer
//! c_0 + c_1 q + ... + c_{n-1} q^{n-1} built from their non-leading
//! coefficients; this index order is the enumeration order everywhere.

mod residue;
mod sieve;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf::{FieldElement, FieldSpec};

pub use residue::ResidueField;
pub use sieve::irreducible_indices;

/// Degree of a polynomial; the zero polynomial has degree `MinusInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field, self.to_text())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let show_c = c != 1 || i == 0;
            match (show_c, i) {
                (_, 0) => write!(f, "{c}")?,
                (true, 1) => write!(f, "{c}t")?,
                (false, 1) => write!(f, "t")?,
                (true, _) => write!(f, "{c}t^{i}")?,
                (false, _) => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then the packed coefficient order.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl Poly {
    /// Builds a polynomial from packed coefficients (constant term first).
    pub fn new(field: &FieldSpec, coeffs: Vec<u32>) -> Result<Poly> {
        if let Some(&c) = coeffs.iter().find(|&&c| c >= field.q()) {
            return Err(Error::Precondition(format!("{c} is not an element of F_{}", field.q())));
        }
        Ok(Self::from_raw(field, coeffs))
    }

    pub(crate) fn from_raw(field: &FieldSpec, mut coeffs: Vec<u32>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_elements(field: &FieldSpec, coeffs: &[FieldElement]) -> Result<Poly> {
        let raw = coeffs
            .iter()
            .map(|c| {
                if c.field_size() != field.q() {
                    Err(Error::MixedFields(field.q(), c.field_size()))
                } else {
                    Ok(c.value())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(field, raw))
    }

    pub fn zero(field: &FieldSpec) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldSpec) -> Poly {
        Self::constant(field, 1)
    }

    pub fn constant(field: &FieldSpec, c: u32) -> Poly {
        Self::from_raw(field, vec![c])
    }

    /// c·t^e.
    pub fn monomial(field: &FieldSpec, c: u32, e: u32) -> Poly {
        let mut v = vec![0u32; e as usize + 1];
        v[e as usize] = c;
        Self::from_raw(field, v)
    }

    pub fn t(field: &FieldSpec) -> Poly {
        Self::monomial(field, 1, 1)
    }

    /// The monic polynomial of degree `n` with the given index.
    pub fn from_monic_index(field: &FieldSpec, n: u32, index: u64) -> Poly {
        let q = field.q() as u64;
        let mut v = Vec::with_capacity(n as usize + 1);
        let mut r = index;
        for _ in 0..n {
            v.push((r % q) as u32);
            r /= q;
        }
        v.push(1);
        Poly { field: field.clone(), coeffs: v }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            l => Degree::Finite(l as u32 - 1),
        }
    }

    /// Degree of a nonzero polynomial.
    pub fn deg(&self) -> Result<u32> {
        self.degree().finite().ok_or(Error::ZeroPolynomial("degree"))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn coeffs_raw(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field.wrap(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn leading(&self) -> FieldElement {
        self.field.wrap(self.coeffs.last().copied().unwrap_or(0))
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coeff(0)
    }

    /// Index of a monic polynomial among M_n.
    pub fn monic_index(&self) -> Option<u64> {
        if !self.is_monic() {
            return None;
        }
        let n = self.coeffs.len() - 1;
        Some(pack(&self.coeffs[..n], self.field.q()))
    }

    /// Packed index of the residue mod t^m (coefficients 0..m).
    pub fn residue_index(&self, m: u32) -> u64 {
        let m = m as usize;
        let take = self.coeffs.len().min(m);
        pack(&self.coeffs[..take], self.field.q())
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields(self.field.q(), other.field.q()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.add_raw(self.coeffs.get(i).copied().unwrap_or(0), other.coeffs.get(i).copied().unwrap_or(0)))
            .collect();
        Ok(Self::from_raw(f, v))
    }

    pub fn neg(&self) -> Poly {
        let v = self.coeffs.iter().map(|&c| self.field.neg_raw(c)).collect();
        Self::from_raw(&self.field, v)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Poly {
        let v = self.coeffs.iter().map(|&x| self.field.mul_raw(x, c)).collect();
        Self::from_raw(&self.field, v)
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let f = &self.field;
        let mut v = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add_raw(v[i + j], f.mul_raw(a, b));
            }
        }
        Ok(Self::from_raw(f, v))
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Quotient and remainder with deg(rem) < deg(divisor).
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv_lead = f.inv_raw(*divisor.coeffs.last().unwrap());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul_raw(rem[i + dd], inv_lead);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = f.sub_raw(rem[i + j], f.mul_raw(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    /// Splits a nonzero polynomial as (leading coefficient, monic part).
    pub fn monic_part(&self) -> Result<(FieldElement, Poly)> {
        let lead = *self.coeffs.last().ok_or(Error::ZeroPolynomial("monic part"))?;
        Ok((self.field.wrap(lead), self.scale(self.field.inv_raw(lead))))
    }

    /// f*(t) = t^{deg f} f(1/t), i.e. reversal of the coefficient sequence.
    pub fn involute(&self) -> Poly {
        let mut v = self.coeffs.clone();
        v.reverse();
        Self::from_raw(&self.field, v)
    }

    /// Comma-separated packed coefficients, constant term first ("0" for zero).
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse(field: &FieldSpec, text: &str) -> Result<Poly> {
        let coeffs = text
            .split(',')
            .map(|s| s.trim().parse::<u32>().map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Poly::new(field, coeffs)
    }
}

pub(crate) fn pack(digits: &[u32], q: u32) -> u64 {
    digits.iter().rev().fold(0u64, |acc, &c| acc * q as u64 + c as u64)
}

pub(crate) fn unpack(mut index: u64, q: u32, len: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push((index % q as u64) as u32);
        index /= q as u64;
    }
    v
}

/// A finite place: a monic irreducible polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct PlaceData {
    prime: Poly,
    degree: u32,
    residue_size: u64,
}

impl fmt::Debug for PlaceData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({})", self.prime)
    }
}

impl PlaceData {
    /// Validates that `prime` is monic and irreducible.
    pub fn new(prime: Poly) -> Result<PlaceData> {
        if !prime.is_monic() || prime.deg()? == 0 {
            return Err(Error::Precondition(format!("{prime} is not a monic nonconstant polynomial")));
        }
        let fac = factorize(&prime)?;
        if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
            return Err(Error::Precondition(format!("{prime} is not irreducible")));
        }
        Ok(Self::from_irreducible(prime))
    }

    pub(crate) fn from_irreducible(prime: Poly) -> PlaceData {
        let degree = prime.deg().expect("nonzero");
        let residue_size = (prime.field.q() as u64).pow(degree);
        PlaceData { prime, degree, residue_size }
    }

    pub fn prime(&self) -> &Poly {
        &self.prime
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn residue_size(&self) -> u64 {
        self.residue_size
    }

    /// Index of the prime among monic polynomials of its degree.
    pub fn index(&self) -> u64 {
        self.prime.monic_index().expect("monic")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(PlaceData, u32)>,
}

impl Factorization {
    /// unit · Π P^e.
    pub fn product(&self, field: &FieldSpec) -> Poly {
        let mut acc = Poly::constant(field, self.unit.value());
        for (p, e) in &self.factors {
            acc = acc.mul(&p.prime.pow(*e)).expect("same field");
        }
        acc
    }
}

/// Complete factorization by trial division with every monic polynomial of
/// degree 1, 2, ... in index order. A reducible trial divisor can never divide
/// because its own factors were removed earlier.
pub fn factorize(f: &Poly) -> Result<Factorization> {
    let (unit, mut rem) = f.monic_part().map_err(|_| Error::ZeroPolynomial("factorize"))?;
    let field = f.field.clone();
    let q = field.q() as u64;
    let mut factors: Vec<(PlaceData, u32)> = Vec::new();
    let mut d = 1u32;
    while 2 * d <= rem.deg()? {
        let count = q.pow(d);
        let mut idx = 0u64;
        while idx < count && 2 * d <= rem.deg()? {
            let g = Poly::from_monic_index(&field, d, idx);
            let mut e = 0;
            loop {
                let (quot, r) = rem.divrem(&g)?;
                if !r.is_zero() {
                    break;
                }
                rem = quot;
                e += 1;
            }
            if e > 0 {
                factors.push((PlaceData::from_irreducible(g), e));
            }
            idx += 1;
        }
        d += 1;
    }
    if rem.deg()? > 0 {
        match factors.last_mut() {
            Some((p, e)) if p.prime == rem => *e += 1,
            _ => factors.push((PlaceData::from_irreducible(rem), 1)),
        }
    }
    Ok(Factorization { unit, factors })
}

/// (c, P, m) with f = c·P^m, m >= 1, or `None` if f is not of that shape.
pub fn prime_power_form(f: &Poly) -> Result<Option<(FieldElement, PlaceData, u32)>> {
    let fac = factorize(f)?;
    Ok(match fac.factors.as_slice() {
        [(p, m)] => Some((fac.unit, p.clone(), *m)),
        _ => None,
    })
}

/// Monic polynomials of degree `n` whose index lies in `range`, in index order.
pub fn monic_range(field: &FieldSpec, n: u32, range: Range<u64>) -> impl Iterator<Item = Poly> + '_ {
    range.map(move |i| Poly::from_monic_index(field, n, i))
}

/// All q^n monic polynomials of degree n.
pub fn enumerate_monic(field: &FieldSpec, n: u32) -> impl Iterator<Item = Poly> + '_ {
    monic_range(field, n, 0..monic_count(field, n))
}

pub fn monic_count(field: &FieldSpec, n: u32) -> u64 {
    (field.q() as u64).pow(n)
}

/// All monic irreducibles of degree `d`, in index order.
pub fn enumerate_irreducibles(field: &FieldSpec, d: u32) -> Result<Vec<PlaceData>> {
    if d == 0 {
        return Err(Error::Precondition("irreducible degree must be >= 1".into()));
    }
    let idx = irreducible_indices(field, d, Exec::default())?;
    Ok(idx.iter().map(|&i| PlaceData::from_irreducible(Poly::from_monic_index(field, d, i))).collect())
}

/// The q^{h+1} polynomials f with deg(f − A) <= h, in index order of the
/// low coefficients.
pub fn interval(a: &Poly, h: u32) -> Result<impl Iterator<Item = Poly> + '_> {
    let n = a.deg()?;
    if h >= n {
        return Err(Error::Precondition(format!("interval needs deg A = {n} > h = {h}")));
    }
    let field = a.field();
    let q = field.q();
    let count = (q as u64).pow(h + 1);
    Ok((0..count).map(move |i| {
        let mut v = a.coeffs.clone();
        let low = unpack(i, q, h as usize + 1);
        v[..=h as usize].copy_from_slice(&low);
        Poly::from_raw(field, v)
    }))
}
