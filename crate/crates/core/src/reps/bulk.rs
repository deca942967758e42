//! Bulk evaluation of Λ_ρ for the Legendre curve on all prime powers of one
//! degree n.
//!
//! Work in F_{q^n}^× = ⟨g⟩ with N = q^n − 1. For τ = g^ℓ,
//!   Σ_x η(x(x−1)(x−τ)) = η(τ) Σ_i h[i] F[i−ℓ],
//! with F[i] = η(g^i − 1) and h[i] = η(g^i) F[i], so one cyclic
//! cross-correlation gives the degree-n trace at every τ. A Frobenius orbit
//! of size d is the set of roots of a degree-d prime P, and its common value
//! is a_{P,n/d}. Minimal polynomials are built in the log domain with Zech
//! logarithms, truncated to the digits that key the result.

use std::sync::Mutex;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::arith::prime_factors;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf::FieldSpec;
use crate::polyring::{Poly, ResidueField};

use super::DegreeWeights;

const ZERO: u32 = u32::MAX;
/// q^n above which the engine runs one instance at a time.
const HEAVY: u64 = 1 << 20;
/// q^n above which the engine refuses.
pub(crate) const BULK_LIMIT: u64 = 60_000_000;

static HEAVY_LOCK: Mutex<()> = Mutex::new(());

struct LogField {
    n: u64,
    zech: Vec<u32>,
    /// F_q value of g^{j·N/(q−1)}.
    sub: Vec<u32>,
    step: u64,
}

impl LogField {
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if a == ZERO {
            return b;
        }
        if b == ZERO {
            return a;
        }
        let d = if b >= a { b - a } else { (b as u64 + self.n - a as u64) as u32 };
        let z = self.zech[d as usize];
        if z == ZERO {
            ZERO
        } else {
            ((a as u64 + z as u64) % self.n) as u32
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == ZERO || b == ZERO {
            ZERO
        } else {
            ((a as u64 + b as u64) % self.n) as u32
        }
    }

    fn to_base(&self, a: u32) -> Result<u32> {
        if a == ZERO {
            return Ok(0);
        }
        if a as u64 % self.step != 0 {
            return Err(Error::Invariant("minimal polynomial coefficient outside F_q".into()));
        }
        Ok(self.sub[(a as u64 / self.step) as usize])
    }
}

/// The first monic M of degree n (index order) whose root x generates F_{q^n}^×.
/// If x has multiplicative order q^n − 1 in F_q[x]/(M), the unit group has at
/// least q^n − 1 elements, so M is irreducible.
pub(crate) fn primitive_modulus(field: &FieldSpec, n: u32) -> Result<Poly> {
    let q = field.q() as u64;
    let size = q.pow(n);
    let order = size - 1;
    let primes = prime_factors(order);
    for idx in 1..size {
        if idx % q == 0 {
            continue;
        }
        let m = Poly::from_monic_index(field, n, idx);
        let r = ResidueField::new(&m)?;
        let x = r.x();
        if r.pow(x, order) != 1 {
            continue;
        }
        if primes.iter().all(|&l| r.pow(x, order / l) != 1) {
            return Ok(m);
        }
    }
    Err(Error::Invariant(format!("no primitive polynomial of degree {n}")))
}

/// Zech table, subfield map and the character table F[i] = η(g^i − 1).
fn build_tables(field: &FieldSpec, n: u32) -> Result<(LogField, Vec<i8>)> {
    let q = field.q();
    let modulus = primitive_modulus(field, n)?;
    let mc = modulus.coeffs_raw();
    let d = n as usize;
    let size = (q as u64).pow(n);
    let big_n = size - 1;
    let mut pw = vec![1u64; d];
    for i in 1..d {
        pw[i] = pw[i - 1] * q as u64;
    }
    let mut antilog = vec![0u32; big_n as usize];
    let mut log = vec![ZERO; size as usize];
    let mut cur = vec![0u32; d];
    cur[0] = 1;
    for i in 0..big_n {
        let packed: u64 = cur.iter().zip(&pw).map(|(&c, &w)| c as u64 * w).sum();
        antilog[i as usize] = packed as u32;
        if log[packed as usize] != ZERO {
            return Err(Error::Invariant("modulus is not primitive".into()));
        }
        log[packed as usize] = i as u32;
        let lead = cur[d - 1];
        for j in (1..d).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if lead != 0 {
            for j in 0..d {
                cur[j] = field.sub_raw(cur[j], field.mul_raw(lead, mc[j]));
            }
        }
    }
    let shift = |v: u32, c: u32| -> u32 {
        let d0 = v % q;
        v - d0 + field.add_raw(d0, c)
    };
    let minus_one = field.neg_raw(1);
    let mut zech = vec![ZERO; big_n as usize];
    let mut chi = vec![0i8; big_n as usize];
    for i in 0..big_n as usize {
        let a = antilog[i];
        zech[i] = log[shift(a, 1) as usize];
        let l = log[shift(a, minus_one) as usize];
        chi[i] = if l == ZERO {
            0
        } else if l % 2 == 0 {
            1
        } else {
            -1
        };
    }
    let step = big_n / (q as u64 - 1);
    let mut sub = Vec::with_capacity(q as usize - 1);
    for j in 0..q as u64 - 1 {
        let v = antilog[(j * step) as usize];
        if v >= q {
            return Err(Error::Invariant("subfield element with nonconstant digits".into()));
        }
        sub.push(v);
    }
    Ok((LogField { n: big_n, zech, sub, step }, chi))
}

/// corr[ℓ] = Σ_i h[i] F[i−ℓ] by one packed complex FFT.
fn correlate(chi: &[i8]) -> Result<Vec<i64>> {
    let n = chi.len();
    let mut z: Vec<Complex<f64>> = chi
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let h = if i % 2 == 0 { f } else { -f };
            Complex::new(h as f64, f as f64)
        })
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut z);
    let half = Complex::new(0.5, 0.0);
    let half_i = Complex::new(0.0, -0.5);
    for k in 0..=n / 2 {
        let j = (n - k) % n;
        let (zk, zj) = (z[k], z[j]);
        let hk = (zk + zj.conj()) * half;
        let fk = (zk - zj.conj()) * half_i;
        let hj = (zj + zk.conj()) * half;
        let fj = (zj - zk.conj()) * half_i;
        z[k] = hk * fk.conj();
        z[j] = hj * fj.conj();
    }
    planner.plan_fft_inverse(n).process(&mut z);
    let scale = n as f64;
    let mut out = Vec::with_capacity(n);
    for c in &z {
        let v = c.re / scale;
        let r = v.round();
        if (v - r).abs() > 0.25 {
            return Err(Error::Numerical(format!("correlation rounding error {}", (v - r).abs())));
        }
        out.push(r as i64);
    }
    Ok(out)
}

pub(crate) fn legendre_weights(
    field: &FieldSpec,
    n: u32,
    digits: u32,
    bad: [i64; 2],
    exec: Exec,
) -> Result<DegreeWeights> {
    let q = field.q() as u64;
    let size = q
        .checked_pow(n)
        .filter(|&s| s <= BULK_LIMIT)
        .ok_or_else(|| Error::SizeBound(format!("Legendre weights over {}^{n} polynomials", q)))?;
    let _guard = if size > HEAVY { Some(HEAVY_LOCK.lock().unwrap_or_else(|e| e.into_inner())) } else { None };

    let (lf, chi) = build_tables(field, n)?;
    let corr = correlate(&chi)?;
    drop(chi);
    let big_n = lf.n;
    let half = big_n / 2;
    let trace = |l: u64| -> i64 {
        let s = corr[l as usize];
        if l % 2 == 0 {
            -s
        } else {
            s
        }
    };

    let chunks = exec.map_chunks(big_n - 1, 1 << 14, |r| -> Result<Vec<(u64, i64)>> {
        let mut out = Vec::new();
        let mut orbit = Vec::with_capacity(n as usize);
        for l in r.start + 1..r.end + 1 {
            orbit.clear();
            orbit.push(l);
            let mut x = l * q % big_n;
            let mut is_rep = true;
            while x != l {
                if x < l {
                    is_rep = false;
                    break;
                }
                orbit.push(x);
                x = x * q % big_n;
            }
            if !is_rep {
                continue;
            }
            let d = orbit.len() as u32;
            let a = trace(l);
            if (a as i128) * (a as i128) > 4 * size as i128 {
                return Err(Error::Invariant(format!("Hasse bound fails: a = {a} over F_{{{q}^{n}}}")));
            }
            let len = if d == n { digits as usize } else { d as usize + 1 };
            let mut c = vec![ZERO; len];
            c[0] = 0;
            for &b in &orbit {
                let gamma = ((b + half) % big_n) as u32;
                for k in (1..len).rev() {
                    c[k] = lf.add(c[k - 1], lf.mul(gamma, c[k]));
                }
                c[0] = lf.mul(gamma, c[0]);
            }
            let key = if d == n {
                let mut key = 0u64;
                for k in (0..len).rev() {
                    key = key * q + lf.to_base(c[k])? as u64;
                }
                key
            } else {
                let coeffs = c.iter().map(|&v| lf.to_base(v)).collect::<Result<Vec<u32>>>()?;
                Poly::from_raw(field, coeffs).pow(n / d).residue_index(digits)
            };
            out.push((key, d as i64 * a));
        }
        Ok(out)
    });
    let mut entries = Vec::new();
    for c in chunks {
        entries.extend(c?);
    }
    let t = Poly::t(field);
    let t1 = Poly::new(field, vec![field.neg_raw(1), 1])?;
    entries.push((t.pow(n).residue_index(digits), bad[0].pow(n)));
    entries.push((t1.pow(n).residue_index(digits), bad[1].pow(n)));
    Ok(DegreeWeights::from_unsorted(n, digits, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn primitive_moduli() {
        let f5 = make_field(5, 1).unwrap();
        let m = primitive_modulus(&f5, 2).unwrap();
        let r = ResidueField::new(&m).unwrap();
        let ord = (1..=24u64).find(|&k| r.pow(r.x(), k) == 1).unwrap();
        assert_eq!(ord, 24);
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(primitive_modulus(&f3, 1).unwrap().coeffs_raw(), &[1, 1]);
    }

    #[test]
    fn zech_table_is_consistent() {
        let f7 = make_field(7, 1).unwrap();
        let (lf, chi) = build_tables(&f7, 2).unwrap();
        assert_eq!(lf.zech[(lf.n / 2) as usize], ZERO);
        assert_eq!(chi[0], 0);
        // (1 + g^i) + (−1) = g^i
        for i in 0..lf.n as u32 {
            let s = lf.add(lf.add(i, 0), (lf.n / 2) as u32);
            assert_eq!(s, i);
        }
        assert_eq!(lf.sub.len(), 6);
        assert_eq!(lf.sub[0], 1);
    }
}
