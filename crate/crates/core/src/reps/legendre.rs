//! The rank-2 representation on the Tate module of the Legendre curve
//! E: y² = x(x−1)(x−t) over F_q(t).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf::FieldSpec;
use crate::polyring::{PlaceData, Poly, ResidueField};

use super::{bulk, check_digits, DegreeWeights, Representation};

pub struct LegendreRep {
    field: FieldSpec,
    ramified: Vec<PlaceData>,
    bad: [i64; 2],
    traces: RwLock<HashMap<(u32, u64), i64>>,
    bulk: Mutex<HashMap<u32, Arc<DegreeWeights>>>,
}

impl std::fmt::Debug for LegendreRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LegendreRep").field("field", &self.field).field("bad_traces", &self.bad).finish()
    }
}

/// Requires characteristic p > 3.
pub fn legendre_rep(spec: &FieldSpec) -> Result<LegendreRep> {
    if spec.p() <= 3 {
        return Err(Error::Precondition(format!("the Legendre curve needs characteristic > 3 (got p = {})", spec.p())));
    }
    let t = Poly::t(spec);
    let t_minus_1 = Poly::new(spec, vec![spec.neg_raw(1), 1])?;
    let bad = [nodal_trace(spec, 0), nodal_trace(spec, 1)];
    for a in bad {
        if a != 1 && a != -1 {
            return Err(Error::Invariant(format!("multiplicative reduction trace {a} is not ±1")));
        }
    }
    Ok(LegendreRep {
        field: spec.clone(),
        ramified: vec![PlaceData::from_irreducible(t), PlaceData::from_irreducible(t_minus_1)],
        bad,
        traces: RwLock::new(HashMap::new()),
        bulk: Mutex::new(HashMap::new()),
    })
}

/// q − #E_ns(F_q) for y² = x(x−1)(x−τ), τ ∈ F_q a packed value, counting
/// smooth affine points plus the point at infinity.
fn nodal_trace(f: &FieldSpec, tau: u32) -> i64 {
    let one = 1;
    let three = f.add_raw(f.add_raw(1, 1), 1);
    let two = f.add_raw(1, 1);
    let s = f.add_raw(one, tau);
    let mut smooth = 0i64;
    for x in 0..f.q() {
        let g = f.mul_raw(f.mul_raw(x, f.sub_raw(x, one)), f.sub_raw(x, tau));
        // g'(x) = 3x² − 2(1+τ)x + τ
        let dg = f.add_raw(f.sub_raw(f.mul_raw(three, f.mul_raw(x, x)), f.mul_raw(f.mul_raw(two, s), x)), tau);
        for y in 0..f.q() {
            if f.mul_raw(y, y) != g {
                continue;
            }
            if y == 0 && dg == 0 {
                continue;
            }
            smooth += 1;
        }
    }
    f.q() as i64 - (smooth + 1)
}

/// a = q_v + 1 − #E(κ_v) = −Σ_x η(x(x−1)(x−τ)) over κ_v = F_q[t]/P, τ = t mod P.
pub(crate) fn point_count_trace(prime: &Poly) -> Result<i64> {
    let r = ResidueField::new(prime)?;
    let tau = r.x();
    let sq = r.square_table();
    let mut sum = 0i64;
    for x in 0..r.size() {
        let v = r.mul(r.mul(x, r.sub(x, 1)), r.sub(x, tau));
        if v != 0 {
            sum += if sq[v as usize] { 1 } else { -1 };
        }
    }
    Ok(-sum)
}

impl LegendreRep {
    fn ramified_slot(&self, v: &PlaceData) -> Option<usize> {
        self.ramified.iter().position(|r| r == v)
    }

    /// Trace of Frob_v^m at a place of good reduction.
    pub fn good_trace(&self, v: &PlaceData, m: u32) -> Result<i64> {
        if self.ramified_slot(v).is_some() {
            return Err(Error::Precondition(format!("{v:?} is a place of bad reduction")));
        }
        if v.prime().field() != &self.field {
            return Err(Error::MixedFields(self.field.q(), v.prime().field().q()));
        }
        if m == 0 {
            return Err(Error::Precondition("local trace exponent must be >= 1".into()));
        }
        let key = (v.degree(), v.index());
        let cached = self.traces.read().unwrap().get(&key).copied();
        let a1 = match cached {
            Some(a) => a,
            None => {
                let a = point_count_trace(v.prime())?;
                let qv = v.residue_size() as i128;
                if (a as i128) * (a as i128) > 4 * qv {
                    return Err(Error::Invariant(format!("Hasse bound fails at {v:?}: a = {a}")));
                }
                self.traces.write().unwrap().insert(key, a);
                a
            }
        };
        power_sum(a1, v.residue_size(), m)
    }

    /// Trace at one of the two places of multiplicative reduction.
    pub fn bad_trace(&self, v: &PlaceData, m: u32) -> Result<i64> {
        let slot = self
            .ramified_slot(v)
            .ok_or_else(|| Error::Precondition(format!("{v:?} is not a place of bad reduction")))?;
        if m == 0 {
            return Err(Error::Precondition("local trace exponent must be >= 1".into()));
        }
        Ok(self.bad[slot].pow(m))
    }

    /// (a_{t,1}, a_{t−1,1}).
    pub fn bad_traces(&self) -> [i64; 2] {
        self.bad
    }

    /// Λ_ρ on degree-n prime powers through the bulk convolution engine.
    pub fn bulk_weights(&self, n: u32, digits: u32, exec: Exec) -> Result<Arc<DegreeWeights>> {
        check_digits(n, digits)?;
        let cached = self.bulk.lock().unwrap().get(&n).cloned();
        if let Some(w) = cached {
            if w.digits >= digits {
                return Ok(Arc::new(w.truncate(self.field.q(), digits)?));
            }
        }
        let w = Arc::new(bulk::legendre_weights(&self.field, n, digits, self.bad, exec)?);
        self.bulk.lock().unwrap().insert(n, w.clone());
        Ok(w)
    }
}

/// s_m = a·s_{m−1} − Q·s_{m−2}, s_0 = 2, s_1 = a.
fn power_sum(a: i64, qv: u64, m: u32) -> Result<i64> {
    let (a, qv) = (a as i128, qv as i128);
    let (mut prev, mut cur) = (2i128, a);
    for _ in 1..m {
        let next = a * cur - qv * prev;
        prev = cur;
        cur = next;
    }
    i64::try_from(cur).map_err(|_| Error::SizeBound("local trace overflows i64".into()))
}

impl Representation for LegendreRep {
    fn id(&self) -> &'static str {
        "legendre"
    }

    fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn dim(&self) -> u32 {
        2
    }

    fn weight(&self) -> u32 {
        1
    }

    fn ramified_places(&self) -> &[PlaceData] {
        &self.ramified
    }

    fn local_dim(&self, v: &PlaceData) -> u32 {
        if self.ramified_slot(v).is_some() {
            1
        } else {
            2
        }
    }

    fn local_trace(&self, v: &PlaceData, m: u32) -> Result<i64> {
        if self.ramified_slot(v).is_some() {
            self.bad_trace(v, m)
        } else {
            self.good_trace(v, m)
        }
    }

    fn degree_weights(&self, n: u32, digits: u32, exec: Exec) -> Result<Arc<DegreeWeights>> {
        self.bulk_weights(n, digits, exec)
    }
}
