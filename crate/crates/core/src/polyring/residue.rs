use crate::error::{Error, Result};
use crate::gf::FieldSpec;

use super::{pack, unpack, Poly};

/// The quotient ring F_q[x]/(P) for a monic P of degree d >= 1; a field when
/// P is irreducible. Elements are packed base-q integers of d digits.
#[derive(Clone, Debug)]
pub struct ResidueField {
    field: FieldSpec,
    modulus: Vec<u32>,
    degree: usize,
    size: u64,
}

impl ResidueField {
    pub fn new(modulus: &Poly) -> Result<ResidueField> {
        if !modulus.is_monic() || modulus.deg()? == 0 {
            return Err(Error::Precondition(format!("{modulus} is not monic of positive degree")));
        }
        let degree = modulus.deg()? as usize;
        let size = (modulus.field().q() as u64)
            .checked_pow(degree as u32)
            .ok_or_else(|| Error::SizeBound("residue ring too large".into()))?;
        Ok(ResidueField { field: modulus.field().clone(), modulus: modulus.coeffs_raw().to_vec(), degree, size })
    }

    pub fn base(&self) -> &FieldSpec {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn digits(&self, a: u64) -> Vec<u32> {
        unpack(a, self.field.q(), self.degree)
    }

    pub fn pack(&self, digits: &[u32]) -> u64 {
        pack(digits, self.field.q())
    }

    /// Image of a polynomial in the quotient.
    pub fn reduce(&self, f: &Poly) -> u64 {
        let mut v = f.coeffs_raw().to_vec();
        self.reduce_vec(&mut v);
        self.pack(&v)
    }

    fn reduce_vec(&self, v: &mut Vec<u32>) {
        let f = &self.field;
        let d = self.degree;
        while v.len() > d {
            let lead = v.pop().unwrap();
            if lead != 0 {
                let off = v.len() - d;
                for i in 0..d {
                    v[off + i] = f.sub_raw(v[off + i], f.mul_raw(lead, self.modulus[i]));
                }
            }
        }
        v.resize(d, 0);
    }

    /// Class of x.
    pub fn x(&self) -> u64 {
        let mut v = vec![0, 1];
        self.reduce_vec(&mut v);
        self.pack(&v)
    }

    pub fn constant(&self, c: u32) -> u64 {
        c as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| self.field.add_raw(x, y)).collect();
        self.pack(&s)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| self.field.sub_raw(x, y)).collect();
        self.pack(&s)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let f = &self.field;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * self.degree - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = f.add_raw(prod[i + j], f.mul_raw(x, y));
            }
        }
        self.reduce_vec(&mut prod);
        self.pack(&prod)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// Indicator of nonzero squares, indexed by packed element.
    pub fn square_table(&self) -> Vec<bool> {
        let mut sq = vec![false; self.size as usize];
        for y in 1..self.size {
            sq[self.mul(y, y) as usize] = true;
        }
        sq
    }
}
