//! Sieve for monic irreducibles of a given degree.
//!
//! Every reducible monic f of degree d has a monic irreducible factor P of
//! degree e <= d/2, so marking all products P·g with g monic of degree d − e
//! leaves exactly the irreducibles unmarked. The cofactor g runs through an
//! odometer on its coefficients and the product is updated in place, so each
//! step costs O(e) field operations instead of a full multiplication.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf::FieldSpec;

use super::unpack;

const SIEVE_LIMIT: u64 = 1 << 31;

/// Indices (in M_d order) of the monic irreducibles of degree d; cached per field.
pub fn irreducible_indices(field: &FieldSpec, d: u32, exec: Exec) -> Result<Arc<Vec<u64>>> {
    if d == 0 {
        return Err(Error::Precondition("irreducible degree must be >= 1".into()));
    }
    if let Some(v) = field.irreducible_cache().lock().unwrap().get(&d) {
        return Ok(v.clone());
    }
    let v = Arc::new(compute(field, d, exec)?);
    field.irreducible_cache().lock().unwrap().insert(d, v.clone());
    Ok(v)
}

fn compute(field: &FieldSpec, d: u32, exec: Exec) -> Result<Vec<u64>> {
    let q = field.q() as u64;
    let size = q
        .checked_pow(d)
        .filter(|&s| s <= SIEVE_LIMIT)
        .ok_or_else(|| Error::SizeBound(format!("sieve over {}^{d} monic polynomials", field.q())))?;
    if d == 1 {
        return Ok((0..q).collect());
    }
    let bits: Vec<AtomicU64> = (0..size.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
    let mut jobs: Vec<(u32, u64)> = Vec::new();
    for e in 1..=d / 2 {
        for &p in irreducible_indices(field, e, exec)?.iter() {
            jobs.push((e, p));
        }
    }
    exec.for_each(&jobs, |&(e, p)| mark_multiples(field, d, e, p, &bits));
    let mut out = Vec::new();
    for (w, word) in bits.iter().enumerate() {
        let mut free = !word.load(Ordering::Relaxed);
        while free != 0 {
            let b = free.trailing_zeros() as u64;
            let idx = w as u64 * 64 + b;
            if idx >= size {
                break;
            }
            out.push(idx);
            free &= free - 1;
        }
    }
    Ok(out)
}

fn mark_multiples(field: &FieldSpec, d: u32, e: u32, p_index: u64, bits: &[AtomicU64]) {
    let q = field.q();
    let (d, e) = (d as usize, e as usize);
    let r = d - e;
    let mut pc = unpack(p_index, q, e);
    pc.push(1);
    let mut pow = vec![1u64; d];
    for i in 1..d {
        pow[i] = pow[i - 1] * q as u64;
    }
    // g = t^r, f = P·t^r
    let mut g = vec![0u32; r];
    let mut f = vec![0u32; d];
    let mut idx = 0u64;
    for i in 0..e {
        f[r + i] = pc[i];
        idx += pc[i] as u64 * pow[r + i];
    }
    loop {
        bits[(idx / 64) as usize].fetch_or(1 << (idx % 64), Ordering::Relaxed);
        let mut j = 0;
        loop {
            if j == r {
                return;
            }
            let old = g[j];
            let new = if old + 1 < q { old + 1 } else { 0 };
            let delta = field.sub_raw(new, old);
            g[j] = new;
            for (i, &c) in pc.iter().enumerate() {
                let pos = j + i;
                let o = f[pos];
                let n = field.add_raw(o, field.mul_raw(delta, c));
                f[pos] = n;
                idx = idx + n as u64 * pow[pos] - o as u64 * pow[pos];
            }
            if new != 0 {
                break;
            }
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::irreducible_count;
    use crate::gf::make_field;
    use crate::polyring::{factorize, Poly};

    #[test]
    fn counts_match_necklace_formula() {
        for (p, k, dmax) in [(2u64, 1u32, 10u32), (3, 1, 7), (2, 2, 5), (5, 1, 5), (3, 2, 4), (7, 1, 4)] {
            let f = make_field(p, k).unwrap();
            for d in 1..=dmax {
                let v = irreducible_indices(&f, d, Exec::Sequential).unwrap();
                assert_eq!(v.len() as u64, irreducible_count(f.q() as u64, d), "q={} d={d}", f.q());
            }
        }
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        for (p, k, dmax) in [(3u64, 1u32, 5u32), (3, 2, 3), (2, 2, 4)] {
            let f = make_field(p, k).unwrap();
            for d in 1..=dmax {
                let sieve = irreducible_indices(&f, d, Exec::Parallel).unwrap();
                let trial: Vec<u64> = (0..(f.q() as u64).pow(d))
                    .filter(|&i| {
                        let fac = factorize(&Poly::from_monic_index(&f, d, i)).unwrap();
                        fac.factors.len() == 1 && fac.factors[0].1 == 1
                    })
                    .collect();
                assert_eq!(*sieve, trial, "q={} d={d}", f.q());
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let f = make_field(2, 2).unwrap();
        let a = compute(&f, 6, Exec::Sequential).unwrap();
        let b = compute(&f, 6, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
