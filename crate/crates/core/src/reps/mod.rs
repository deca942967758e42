//! Galois representations given by their local data, and the generalized von
//! Mangoldt function Λ_ρ(c·P^m) = deg P · a_{ρ,P,m}.

mod bulk;
pub(crate) mod legendre;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf::FieldSpec;
use crate::polyring::{irreducible_indices, prime_power_form, PlaceData, Poly};

pub use legendre::{legendre_rep, LegendreRep};

/// Local data of a representation ρ of the Galois group of F_q(t).
pub trait Representation: Send + Sync {
    /// Selector string ("trivial", "legendre").
    fn id(&self) -> &'static str;
    fn field(&self) -> &FieldSpec;
    fn dim(&self) -> u32;
    /// q-weight w.
    fn weight(&self) -> u32;
    /// Finite places where inertia acts nontrivially.
    fn ramified_places(&self) -> &[PlaceData];
    /// Dimension of the inertia invariants at v.
    fn local_dim(&self, v: &PlaceData) -> u32;
    /// a_{ρ,v,m} = Tr(Frob_v^m | V^{I_v}).
    fn local_trace(&self, v: &PlaceData, m: u32) -> Result<i64>;

    /// Λ_ρ on all prime powers of degree n, keyed by their residue mod
    /// t^digits (digits <= n; digits = n keys by the full monic index).
    fn degree_weights(&self, n: u32, digits: u32, exec: Exec) -> Result<Arc<DegreeWeights>> {
        weights_by_places(self, n, digits, exec).map(Arc::new)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VonMangoldtValue {
    pub value: i64,
}

impl VonMangoldtValue {
    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

/// Λ_ρ restricted to the prime powers of one degree n, aggregated by residue
/// class mod t^digits. Keys are sorted and unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeWeights {
    pub degree: u32,
    pub digits: u32,
    pub entries: Vec<(u64, i64)>,
}

impl DegreeWeights {
    pub(crate) fn from_unsorted(degree: u32, digits: u32, mut entries: Vec<(u64, i64)>) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(u64, i64)> = Vec::with_capacity(entries.len());
        for (k, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == k => last.1 += v,
                _ => merged.push((k, v)),
            }
        }
        DegreeWeights { degree, digits, entries: merged }
    }

    /// Σ_{f ∈ M_n} Λ_ρ(f).
    pub fn total(&self) -> i128 {
        self.entries.iter().map(|e| e.1 as i128).sum()
    }

    /// Re-keys by the residue mod t^digits for a smaller `digits`.
    pub fn truncate(&self, q: u32, digits: u32) -> Result<DegreeWeights> {
        if digits > self.digits {
            return Err(Error::Precondition(format!("cannot refine {} digits to {digits}", self.digits)));
        }
        if digits == self.digits {
            return Ok(self.clone());
        }
        let modulus = (q as u64).pow(digits);
        let v = self.entries.iter().map(|&(k, w)| (k % modulus, w)).collect();
        Ok(Self::from_unsorted(self.degree, digits, v))
    }

    /// Dense table of Λ_ρ over M_n in index order (needs digits = n).
    pub fn dense(&self, q: u32) -> Result<Vec<i64>> {
        if self.digits != self.degree {
            return Err(Error::Precondition("dense table needs full keys".into()));
        }
        let size = (q as u64).pow(self.degree) as usize;
        let mut t = vec![0i64; size];
        for &(k, w) in &self.entries {
            t[k as usize] = w;
        }
        Ok(t)
    }

    /// W[r] = Σ_{prime powers f ≡ r mod t^m} Λ_ρ(f) over all q^m residues.
    pub fn residue_table(&self, q: u32, m: u32) -> Result<Vec<i64>> {
        let n = self.degree;
        let size = (q as u64).pow(m) as usize;
        let mut t = vec![0i64; size];
        if m <= n {
            if m > self.digits {
                return Err(Error::Precondition(format!("weights keyed by {} digits, need {m}", self.digits)));
            }
            let modulus = (q as u64).pow(m);
            for &(k, w) in &self.entries {
                t[(k % modulus) as usize] += w;
            }
        } else {
            if self.digits != n {
                return Err(Error::Precondition("residues beyond the degree need full keys".into()));
            }
            let lead = (q as u64).pow(n);
            for &(k, w) in &self.entries {
                t[(k + lead) as usize] += w;
            }
        }
        Ok(t)
    }
}

/// Generic route: enumerate irreducibles P of each degree d | n and evaluate
/// d·a_{ρ,P,n/d} through `local_trace`.
pub fn weights_by_places<R: Representation + ?Sized>(
    rep: &R,
    n: u32,
    digits: u32,
    exec: Exec,
) -> Result<DegreeWeights> {
    check_digits(n, digits)?;
    let field = rep.field();
    let mut entries = Vec::new();
    for d in (1..=n).filter(|d| n % d == 0) {
        let primes = irreducible_indices(field, d, exec)?;
        let chunks = exec.map_chunks(primes.len() as u64, 4096, |r| {
            let mut out = Vec::with_capacity((r.end - r.start) as usize);
            for i in r {
                let p = Poly::from_monic_index(field, d, primes[i as usize]);
                let key = p.pow(n / d).residue_index(digits);
                let v = PlaceData::from_irreducible(p);
                out.push(rep.local_trace(&v, n / d).map(|a| (key, d as i64 * a)));
            }
            out
        });
        for c in chunks {
            for e in c {
                entries.push(e?);
            }
        }
    }
    Ok(DegreeWeights::from_unsorted(n, digits, entries))
}

fn check_digits(n: u32, digits: u32) -> Result<()> {
    if n == 0 || digits == 0 || digits > n {
        return Err(Error::Precondition(format!("need 1 <= digits <= n, got n = {n}, digits = {digits}")));
    }
    Ok(())
}

/// Λ_ρ(f) = deg P · a_{ρ,P,m} if f = c·P^m, else 0.
pub fn von_mangoldt<R: Representation + ?Sized>(rep: &R, f: &Poly) -> Result<VonMangoldtValue> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("von Mangoldt"));
    }
    if f.field() != rep.field() {
        return Err(Error::MixedFields(rep.field().q(), f.field().q()));
    }
    let value = match prime_power_form(f)? {
        Some((_, p, m)) => p.degree() as i64 * rep.local_trace(&p, m)?,
        None => 0,
    };
    Ok(VonMangoldtValue { value })
}

/// The trivial representation: Λ_1 is the classical von Mangoldt function.
#[derive(Debug, Clone)]
pub struct TrivialRep {
    field: FieldSpec,
}

pub fn trivial_rep(spec: &FieldSpec) -> TrivialRep {
    TrivialRep { field: spec.clone() }
}

impl Representation for TrivialRep {
    fn id(&self) -> &'static str {
        "trivial"
    }

    fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn dim(&self) -> u32 {
        1
    }

    fn weight(&self) -> u32 {
        0
    }

    fn ramified_places(&self) -> &[PlaceData] {
        &[]
    }

    fn local_dim(&self, _v: &PlaceData) -> u32 {
        1
    }

    fn local_trace(&self, _v: &PlaceData, m: u32) -> Result<i64> {
        if m == 0 {
            return Err(Error::Precondition("local trace exponent must be >= 1".into()));
        }
        Ok(1)
    }

    fn degree_weights(&self, n: u32, digits: u32, exec: Exec) -> Result<Arc<DegreeWeights>> {
        check_digits(n, digits)?;
        let field = &self.field;
        let modulus = (field.q() as u64).pow(digits);
        let mut entries = Vec::new();
        for d in (1..=n).filter(|d| n % d == 0) {
            let primes = irreducible_indices(field, d, exec)?;
            if d == n {
                entries.extend(primes.iter().map(|&i| (i % modulus, n as i64)));
            } else {
                for &i in primes.iter() {
                    let f = Poly::from_monic_index(field, d, i).pow(n / d);
                    entries.push((f.residue_index(digits), d as i64));
                }
            }
        }
        Ok(Arc::new(DegreeWeights::from_unsorted(n, digits, entries)))
    }
}

/// Builds a representation from its CLI selector.
pub fn rep_by_name(name: &str, spec: &FieldSpec) -> Result<Box<dyn Representation>> {
    match name {
        "trivial" => Ok(Box::new(trivial_rep(spec))),
        "legendre" => Ok(Box::new(legendre_rep(spec)?)),
        other => Err(Error::Parse(format!("unknown representation {other:?}"))),
    }
}
