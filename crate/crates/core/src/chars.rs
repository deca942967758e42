//! The unit group Γ(t^m) = (F_q[t]/t^m)^×, its Dirichlet characters, and
//! character evaluation through a discrete-log table.
//!
//! Residues mod t^m are packed base-q integers of m digits (digit i is the
//! coefficient of t^i). Discrete logs are stored as mixed-radix codes
//! Σ e_i R_i with R_i = o_0···o_{i−1}.

use std::fmt;

use num_complex::Complex64;

use crate::arith::{lcm, prime_factors};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::polyring::{pack, unpack, Poly};

pub const UNIT_GROUP_LIMIT: u64 = 10_000_000;
const NONUNIT: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct UnitGroupTable {
    field: FieldSpec,
    m: u32,
    size: u64,
    order: u64,
    gens: Vec<u64>,
    orders: Vec<u64>,
    radix: Vec<u64>,
    exponent: u64,
    dlog: Vec<u32>,
    constant_code: u32,
}

impl UnitGroupTable {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn modulus_exponent(&self) -> u32 {
        self.m
    }

    /// (q−1)·q^{m−1}.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// q^m, the number of residues.
    pub fn residue_count(&self) -> u64 {
        self.size
    }

    pub fn generators(&self) -> &[u64] {
        &self.gens
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// lcm of the generator orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Product of residues mod t^m.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let f = &self.field;
        let (q, m) = (f.q(), self.m as usize);
        let (da, db) = (unpack(a, q, m), unpack(b, q, m));
        let mut out = vec![0u32; m];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db[..m - i].iter().enumerate() {
                out[i + j] = f.add_raw(out[i + j], f.mul_raw(x, y));
            }
        }
        pack(&out, q)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let (mut base, mut acc) = (a, 1u64);
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

    /// Residue of f mod t^m.
    pub fn residue(&self, f: &Poly) -> u64 {
        let c = f.coeffs_raw();
        let m = (self.m as usize).min(c.len());
        pack(&c[..m], self.field.q())
    }

    /// Mixed-radix discrete log, or None for non-units.
    pub fn dlog_code(&self, r: u64) -> Option<u32> {
        let c = *self.dlog.get(r as usize)?;
        (c != NONUNIT).then_some(c)
    }

    /// Exponent vector of a unit residue.
    pub fn dlog(&self, r: u64) -> Option<Vec<u64>> {
        self.dlog_code(r).map(|c| self.split(c))
    }

    fn split(&self, code: u32) -> Vec<u64> {
        self.orders.iter().zip(&self.radix).map(|(&o, &r)| (code as u64 / r) % o).collect()
    }

    /// Packed residue of the generator of the constants F_q^×.
    pub fn constant_generator(&self) -> u64 {
        self.field.generator().value() as u64
    }

    /// Units with constant term 1, in index order: residue 1 + q·j for j < q^{m−1}.
    pub fn principal_units(&self) -> impl Iterator<Item = u64> + '_ {
        let q = self.field.q() as u64;
        (0..self.size / q).map(move |j| 1 + q * j)
    }

    /// All characters, or only the even ones; optionally without φ_tr.
    pub fn characters(&self, even_only: bool, exclude_trivial: bool) -> Vec<DirichletCharacter> {
        let mut out = Vec::new();
        let mut e = vec![0u64; self.orders.len()];
        loop {
            let chi = self.character(e.clone());
            if (!even_only || chi.even) && !(exclude_trivial && chi.is_trivial()) {
                out.push(chi);
            }
            let mut i = 0;
            loop {
                if i == e.len() {
                    return out;
                }
                e[i] += 1;
                if e[i] < self.orders[i] {
                    break;
                }
                e[i] = 0;
                i += 1;
            }
        }
    }

    /// The character with the given exponent vector (reduced mod the orders).
    pub fn character(&self, exps: Vec<u64>) -> DirichletCharacter {
        let exps: Vec<u64> = exps.iter().zip(&self.orders).map(|(&e, &o)| e % o).collect();
        let weights: Vec<u64> =
            exps.iter().zip(&self.orders).map(|(&e, &o)| e * (self.exponent / o) % self.exponent).collect();
        let mut chi =
            DirichletCharacter { exps, orders: self.orders.clone(), weights, exponent: self.exponent, even: false };
        chi.even = chi.phase(self, self.constant_code) == 0;
        chi
    }

    pub fn trivial_character(&self) -> DirichletCharacter {
        self.character(vec![0; self.orders.len()])
    }

    /// Parses "e_1/o_1,...,e_r/o_r" against this table's decomposition.
    pub fn parse_character(&self, text: &str) -> Result<DirichletCharacter> {
        let parts: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if parts.len() != self.orders.len() {
            return Err(Error::Parse(format!("expected {} components in {text:?}", self.orders.len())));
        }
        let mut exps = Vec::new();
        for (p, &o) in parts.iter().zip(&self.orders) {
            let (e, d) = p.split_once('/').ok_or_else(|| Error::Parse(format!("bad component {p:?}")))?;
            let e: u64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
            let d: u64 = d.parse().map_err(|_| Error::Parse(format!("bad order {d:?}")))?;
            if d != o || e >= o {
                return Err(Error::Parse(format!("component {p:?} does not match order {o}")));
            }
            exps.push(e);
        }
        Ok(self.character(exps))
    }

    /// χ(f) in the complex embedding; 0 if t | f.
    pub fn evaluate(&self, chi: &DirichletCharacter, f: &Poly) -> Complex64 {
        self.evaluate_residue(chi, self.residue(f))
    }

    pub fn evaluate_residue(&self, chi: &DirichletCharacter, r: u64) -> Complex64 {
        match self.dlog_code(r) {
            Some(c) => root_of_unity(chi.phase(self, c), self.exponent),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// χ(u) for u running over `principal_units`.
    pub fn principal_values(&self, chi: &DirichletCharacter) -> Vec<Complex64> {
        let roots = roots_of_unity(self.exponent);
        self.principal_units().map(|u| roots[chi.phase(self, self.dlog[u as usize]) as usize]).collect()
    }

    /// W'[j] = Σ_{c ∈ F_q^×} W[c·(1 + q j)]: folds a residue table onto the
    /// principal units, on which even characters are determined.
    pub fn fold_even(&self, w: &[i64]) -> Result<Vec<i64>> {
        if w.len() as u64 != self.size {
            return Err(Error::Precondition("residue table has the wrong length".into()));
        }
        let f = &self.field;
        let (q, m) = (f.q(), self.m as usize);
        let mut out = vec![0i64; (self.size / q as u64) as usize];
        for (r, &v) in w.iter().enumerate() {
            if v == 0 || r as u64 % q as u64 == 0 {
                continue;
            }
            let c = f.inv_raw(r as u32 % q);
            let scaled: Vec<u32> = unpack(r as u64, q, m).into_iter().map(|d| f.mul_raw(d, c)).collect();
            out[(pack(&scaled, q) / q as u64) as usize] += v;
        }
        Ok(out)
    }
}

fn root_of_unity(k: u64, n: u64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

fn roots_of_unity(n: u64) -> Vec<Complex64> {
    (0..n).map(|k| root_of_unity(k, n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    exps: Vec<u64>,
    orders: Vec<u64>,
    weights: Vec<u64>,
    exponent: u64,
    even: bool,
}

impl DirichletCharacter {
    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// χ̄.
    pub fn conj(&self) -> DirichletCharacter {
        let exps = self.exps.iter().zip(&self.orders).map(|(&e, &o)| (o - e) % o).collect();
        let weights = self.weights.iter().map(|&w| (self.exponent - w) % self.exponent).collect();
        DirichletCharacter { exps, orders: self.orders.clone(), weights, exponent: self.exponent, even: self.even }
    }

    /// k with χ(g) = exp(2πi k / exponent) for the unit g of the given dlog code.
    fn phase(&self, tbl: &UnitGroupTable, code: u32) -> u64 {
        let mut k = 0u64;
        for ((&w, &o), &r) in self.weights.iter().zip(&tbl.orders).zip(&tbl.radix) {
            if w != 0 {
                k += w * ((code as u64 / r) % o);
            }
        }
        k % self.exponent
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().zip(&self.orders).map(|(e, o)| format!("{e}/{o}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Decomposes Γ(t^m) into cyclic factors. At each step the unit of largest
/// order in Γ/H (first in index order on ties) is adjoined after correcting
/// it so that its cyclic group meets H trivially.
pub fn build_unit_group(spec: &FieldSpec, m: u32) -> Result<UnitGroupTable> {
    if m == 0 {
        return Err(Error::Precondition("modulus exponent must be >= 1".into()));
    }
    let q = spec.q() as u64;
    let size = q
        .checked_pow(m)
        .filter(|&s| s <= u32::MAX as u64)
        .ok_or_else(|| Error::SizeBound(format!("residue ring mod t^{m} over F_{q}")))?;
    let order = (q - 1) * size / q;
    if order > UNIT_GROUP_LIMIT {
        return Err(Error::SizeBound(format!("|Γ(t^{m})| = {order} exceeds {UNIT_GROUP_LIMIT}")));
    }
    let mut tbl = UnitGroupTable {
        field: spec.clone(),
        m,
        size,
        order,
        gens: Vec::new(),
        orders: Vec::new(),
        radix: Vec::new(),
        exponent: 1,
        dlog: vec![NONUNIT; size as usize],
        constant_code: 0,
    };
    tbl.dlog[1] = 0;
    // elements of H indexed by code
    let mut elems: Vec<u64> = vec![1];
    let primes = prime_factors(order);
    while (elems.len() as u64) < order {
        let index = order / elems.len() as u64;
        let mut best: Option<(u64, u64)> = None;
        for r in (0..size).filter(|r| r % q != 0) {
            if tbl.dlog[r as usize] != NONUNIT {
                continue;
            }
            let mut k = index;
            for &l in &primes {
                while k % l == 0 && tbl.dlog[tbl.pow(r, k / l) as usize] != NONUNIT {
                    k /= l;
                }
            }
            if best.map_or(true, |(_, o)| k > o) {
                best = Some((r, k));
                if k == index {
                    break;
                }
            }
        }
        let (g, o) = best.ok_or_else(|| Error::Invariant("no unit outside the subgroup".into()))?;
        let s = tbl.split(tbl.dlog[tbl.pow(g, o) as usize]);
        let mut g2 = g;
        for (j, (&sj, &gj)) in s.iter().zip(&tbl.gens).enumerate() {
            if sj % o != 0 {
                return Err(Error::Invariant(format!("generator correction not divisible at factor {j}")));
            }
            let oj = tbl.orders[j];
            g2 = tbl.mul(g2, tbl.pow(gj, (oj - sj / o % oj) % oj));
        }
        let base = elems.len() as u64;
        let mut cur = elems.clone();
        for e in 1..o {
            for (c, x) in cur.iter_mut().enumerate() {
                *x = tbl.mul(*x, g2);
                if tbl.dlog[*x as usize] != NONUNIT {
                    return Err(Error::Invariant("cyclic factors are not independent".into()));
                }
                tbl.dlog[*x as usize] = (e * base + c as u64) as u32;
            }
            elems.extend_from_slice(&cur);
        }
        if tbl.mul(cur[0], g2) != 1 {
            return Err(Error::Invariant("generator order mismatch".into()));
        }
        tbl.gens.push(g2);
        tbl.orders.push(o);
        tbl.radix.push(base);
        tbl.exponent = lcm(tbl.exponent, o);
    }
    if tbl.orders.iter().product::<u64>() != order {
        return Err(Error::Invariant("orders do not multiply to |Γ|".into()));
    }
    tbl.constant_code = tbl.dlog[tbl.constant_generator() as usize];
    Ok(tbl)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct OrthogonalityReport {
    pub q: u32,
    pub m: u32,
    /// Largest deviation in the residue-pair, character-pair and even relations.
    pub max_deviation: [f64; 3],
    pub violations: Vec<String>,
}

impl OrthogonalityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation.iter().all(|&d| d <= tol)
    }
}

/// Checks the three orthogonality relations by direct summation, recording
/// every pair whose deviation exceeds `tol`.
pub fn orthogonality_check(tbl: &UnitGroupTable, tol: f64) -> OrthogonalityReport {
    let units: Vec<u64> = (0..tbl.size).filter(|r| tbl.dlog[*r as usize] != NONUNIT).collect();
    let chars = tbl.characters(false, false);
    let values: Vec<Vec<Complex64>> =
        chars.iter().map(|c| units.iter().map(|&u| tbl.evaluate_residue(c, u)).collect()).collect();
    let g = units.len() as f64;
    let mut dev = [0.0f64; 3];
    let mut violations = Vec::new();
    let mut record = |rel: usize, dev: &mut [f64; 3], d: f64, what: String| {
        dev[rel] = dev[rel].max(d);
        if d > tol {
            violations.push(what);
        }
    };
    for a in 0..units.len() {
        for b in 0..units.len() {
            let s: Complex64 = values.iter().map(|v| v[a] * v[b].conj()).sum::<Complex64>() / chars.len() as f64;
            let want = if a == b { 1.0 } else { 0.0 };
            let d = (s - want).norm();
            record(0, &mut dev, d, format!("residues {} {}", units[a], units[b]));
        }
    }
    for i in 0..chars.len() {
        for j in 0..chars.len() {
            let s: Complex64 = values[i].iter().zip(&values[j]).map(|(x, y)| x * y.conj()).sum::<Complex64>() / g;
            let want = if i == j { 1.0 } else { 0.0 };
            record(1, &mut dev, (s - want).norm(), format!("characters {} {}", chars[i], chars[j]));
        }
    }
    let even: Vec<(usize, Vec<Complex64>)> =
        chars.iter().enumerate().filter(|(_, c)| c.is_even()).map(|(i, c)| (i, tbl.principal_values(c))).collect();
    let n_even = even.len() as f64;
    for (i, vi) in &even {
        for (j, vj) in &even {
            let s: Complex64 = vi.iter().zip(vj).map(|(x, y)| x * y.conj()).sum::<Complex64>() / n_even;
            let want = if i == j { 1.0 } else { 0.0 };
            record(2, &mut dev, (s - want).norm(), format!("even characters {} {}", chars[*i], chars[*j]));
        }
    }
    OrthogonalityReport { q: tbl.field.q(), m: tbl.m, max_deviation: dev, violations }
}
