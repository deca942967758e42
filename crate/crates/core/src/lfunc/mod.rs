//! Twisted L-functions L_Q(T, ρ⊗χ) for Q = t^m: cohomological traces from
//! residue-aggregated weights, reconstruction by Newton's identities,
//! good/mixed/heavy classification and unitarized Frobenius eigenphases.

mod roots;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

pub use roots::inverse_roots;

use crate::chars::{build_unit_group, DirichletCharacter, UnitGroupTable};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::polyring::enumerate_monic;
use crate::reps::{von_mangoldt, Representation};

/// Largest q^n for which degree-n weights are computed.
pub const TRACE_BUDGET: u64 = 45_000_000;
/// Purity tolerance on unitarized inverse-root moduli.
pub const TOL_RH: f64 = 1e-6;
/// Companion-matrix root residual bound, relative to the largest coefficient.
pub const TOL_ROOT: f64 = 1e-8;
/// Coefficients checked beyond the largest possible degree m·dim.
pub const GUARD: u32 = 4;

/// Largest n with q^n within the trace budget.
pub fn max_feasible_degree(q: u32) -> u32 {
    let mut n = 0;
    let mut s = 1u64;
    while s * q as u64 <= TRACE_BUDGET {
        s *= q as u64;
        n += 1;
    }
    n
}

/// Truncation bound m·dim + GUARD.
pub fn guard_bound(dim: u32, m: u32) -> u32 {
    m * dim + GUARD
}

/// W_n[r] = Σ_{prime powers f ∈ M_n, f ≡ r mod t^m} Λ_ρ(f) for n = 1..=degrees,
/// with the fold onto principal units used by even characters.
#[derive(Debug, Clone)]
pub struct WeightTables {
    pub rep: String,
    pub q: u32,
    pub m: u32,
    pub dim: u32,
    pub weight: u32,
    full: Vec<Vec<i64>>,
    folded: Vec<Vec<i64>>,
}

impl WeightTables {
    pub fn build<R: Representation + ?Sized>(
        rep: &R,
        tbl: &UnitGroupTable,
        degrees: u32,
        exec: Exec,
    ) -> Result<WeightTables> {
        let q = rep.field().q();
        if tbl.field() != rep.field() {
            return Err(Error::MixedFields(q, tbl.field().q()));
        }
        let m = tbl.modulus_exponent();
        let mut full = Vec::new();
        let mut folded = Vec::new();
        for n in 1..=degrees {
            if (q as u64).checked_pow(n).map_or(true, |s| s > TRACE_BUDGET) {
                return Err(Error::SizeBound(format!("traces of degree {n} over F_{q}")));
            }
            let w = rep.degree_weights(n, n.min(m), exec)?;
            let t = w.residue_table(q, m)?;
            folded.push(tbl.fold_even(&t)?);
            full.push(t);
        }
        Ok(WeightTables { rep: rep.id().to_string(), q, m, dim: rep.dim(), weight: rep.weight(), full, folded })
    }

    pub fn degrees(&self) -> u32 {
        self.full.len() as u32
    }

    pub fn residue_table(&self, n: u32) -> &[i64] {
        &self.full[n as usize - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceSeries {
    pub rep: String,
    pub character: String,
    /// b[n−1] = b_{ρ⊗χ,n}.
    #[serde(serialize_with = "ser_complex")]
    pub b: Vec<Complex64>,
}

fn ser_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| [c.re, c.im]))
}

/// b_n(χ) = Σ_r χ(r) W_n[r] for n = 1..=tables.degrees().
pub fn trace_series(tbl: &UnitGroupTable, tables: &WeightTables, chi: &DirichletCharacter) -> TraceSeries {
    let b = if chi.is_even() {
        let vals = tbl.principal_values(chi);
        tables.folded.iter().map(|w| dot(&vals, w)).collect()
    } else {
        let vals: Vec<Complex64> = (0..tbl.residue_count()).map(|r| tbl.evaluate_residue(chi, r)).collect();
        tables.full.iter().map(|w| dot(&vals, w)).collect()
    };
    TraceSeries { rep: tables.rep.clone(), character: chi.to_string(), b }
}

fn dot(vals: &[Complex64], w: &[i64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (v, &x) in vals.iter().zip(w) {
        if x != 0 {
            s += v * x as f64;
        }
    }
    s
}

/// b_n(χ) = Σ_{f ∈ M_n} χ(f) Λ_ρ(f) by enumerating every monic polynomial.
pub fn trace_series_direct<R: Representation + ?Sized>(
    rep: &R,
    tbl: &UnitGroupTable,
    chi: &DirichletCharacter,
    degrees: u32,
) -> Result<TraceSeries> {
    let mut b = Vec::new();
    for n in 1..=degrees {
        let mut s = Complex64::new(0.0, 0.0);
        for f in enumerate_monic(rep.field(), n) {
            let v = tbl.evaluate(chi, &f);
            if v.norm() == 0.0 {
                continue;
            }
            let lam = von_mangoldt(rep, &f)?.value;
            if lam != 0 {
                s += v * lam as f64;
            }
        }
        b.push(s);
    }
    Ok(TraceSeries { rep: rep.id().to_string(), character: chi.to_string(), b })
}

/// Coefficients c_0..c_D of L(T) from T d/dT log L(T) = Σ b_n T^n:
/// c_0 = 1, c_j = (1/j) Σ_{i=1..j} b_i c_{j−i}.
pub fn reconstruct_l(b: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for j in 1..=b.len() {
        let s: Complex64 = (1..=j).map(|i| b[i - 1] * c[j - i]).sum();
        c.push(s / j as f64);
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// L/(1−T) is a polynomial whose inverse roots are pure of weight w+1.
    Good,
    /// L is a polynomial but L/(1−T) is not, or its roots fail purity.
    Mixed,
    /// L is not a polynomial.
    Heavy,
    /// The trace series is too short to reach the guard window.
    Undetermined,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::Good => "good",
            Classification::Mixed => "mixed",
            Classification::Heavy => "heavy",
            Classification::Undetermined => "undetermined",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LData {
    pub q: u32,
    pub weight: u32,
    /// Largest possible degree of L, m·dim.
    pub degree_bound: u32,
    #[serde(serialize_with = "ser_complex")]
    pub coefficients: Vec<Complex64>,
    pub tol_coeff: f64,
    /// Largest |c_j| over the guard window j ∈ [m·dim, D].
    pub window_max: Option<f64>,
    pub classification: Classification,
    /// |L(1)|, the remainder of the division by 1 − T.
    pub trivial_zero_remainder: Option<f64>,
    /// M(T) = L(T)/(1−T) when it is a polynomial.
    #[serde(serialize_with = "ser_opt_complex")]
    pub m_coeffs: Option<Vec<Complex64>>,
    pub s: Option<u32>,
    /// Unitarized inverse roots γ/q^{(1+w)/2} of M, or of L when 1 − T does
    /// not divide it.
    #[serde(serialize_with = "ser_complex")]
    pub unitarized_roots: Vec<Complex64>,
    pub purity_deviation: Option<f64>,
    pub root_residual: Option<f64>,
    /// A non-pure root lies within a factor q^{1/4} of the unit circle.
    pub borderline: bool,
    pub eigenphases: Option<Vec<f64>>,
}

fn ser_opt_complex<S: serde::Serializer>(v: &Option<Vec<Complex64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_complex(v, s),
        None => s.serialize_none(),
    }
}

/// Reconstructs and classifies L from b_1..b_D; degree_bound = m·dim.
pub fn classify(b: &[Complex64], q: u32, weight: u32, degree_bound: u32) -> Result<LData> {
    classify_with(b, q, weight, degree_bound, TOL_RH)
}

/// `classify` with an explicit purity tolerance.
pub fn classify_with(b: &[Complex64], q: u32, weight: u32, degree_bound: u32, tol_rh: f64) -> Result<LData> {
    let coefficients = reconstruct_l(b);
    let tol_coeff = 1e-6 * b.iter().enumerate().map(|(i, x)| x.norm() / (i + 1) as f64).fold(0.0, f64::max);
    let d = b.len();
    let bound = degree_bound as usize;
    let mut ld = LData {
        q,
        weight,
        degree_bound,
        coefficients,
        tol_coeff,
        window_max: None,
        classification: Classification::Undetermined,
        trivial_zero_remainder: None,
        m_coeffs: None,
        s: None,
        unitarized_roots: Vec::new(),
        purity_deviation: None,
        root_residual: None,
        borderline: false,
        eigenphases: None,
    };
    if d < bound {
        return Ok(ld);
    }
    let window = ld.coefficients[bound..=d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    ld.window_max = Some(window);
    if window > tol_coeff {
        ld.classification = Classification::Heavy;
        return Ok(ld);
    }
    let mut l: Vec<Complex64> = ld.coefficients[..bound].to_vec();
    while l.len() > 1 && l.last().unwrap().norm() <= tol_coeff {
        l.pop();
    }
    let remainder: Complex64 = l.iter().sum();
    ld.trivial_zero_remainder = Some(remainder.norm());
    let scale_for = |j: usize| (q as f64).powf(j as f64 * (1 + weight) as f64 / 2.0);
    let (poly, divided) = if remainder.norm() > tol_coeff {
        (l, false)
    } else {
        let mut mc = Vec::with_capacity(l.len() - 1);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &l[..l.len() - 1] {
            acc += c;
            mc.push(acc);
        }
        (mc, true)
    };
    let scaled: Vec<Complex64> = poly.iter().enumerate().map(|(j, c)| c / scale_for(j)).collect();
    let (gammas, residual) = inverse_roots(&scaled)?;
    if residual > TOL_ROOT {
        return Err(Error::Numerical(format!(
            "root residual {residual:.3e} exceeds {TOL_ROOT:e} for coefficients {scaled:?}"
        )));
    }
    let dev = gammas.iter().map(|g| (g.norm() - 1.0).abs()).fold(0.0, f64::max);
    let gap = (q as f64).powf(0.25);
    ld.borderline = gammas.iter().any(|g| {
        let r = g.norm();
        (r - 1.0).abs() > tol_rh && r > 1.0 / gap && r < gap
    });
    ld.root_residual = Some(residual);
    ld.purity_deviation = Some(dev);
    ld.unitarized_roots = gammas;
    if !divided {
        ld.classification = Classification::Mixed;
        return Ok(ld);
    }
    ld.s = Some(poly.len() as u32 - 1);
    ld.m_coeffs = Some(poly);
    if dev <= tol_rh {
        ld.classification = Classification::Good;
        let mut phases: Vec<f64> = ld.unitarized_roots.iter().map(|g| g.arg()).collect();
        phases.sort_by(f64::total_cmp);
        ld.eigenphases = Some(phases);
    } else {
        ld.classification = Classification::Mixed;
    }
    Ok(ld)
}

/// Tr(θ^n) = Σ exp(i n θ_k) over the eigenphases of a good character.
pub fn trace_from_theta(ld: &LData, n: u32) -> Result<Complex64> {
    let phases = ld
        .eigenphases
        .as_ref()
        .ok_or_else(|| Error::Precondition(format!("character is {}, not good", ld.classification)))?;
    Ok(phases.iter().map(|&t| Complex64::from_polar(1.0, n as f64 * t)).sum())
}

/// JSON record per character.
#[derive(Debug, Clone, Serialize)]
pub struct CharRecord {
    #[serde(rename = "char")]
    pub character: String,
    pub classification: Classification,
    #[serde(rename = "S")]
    pub s: Option<u32>,
    #[serde(serialize_with = "ser_complex")]
    pub coefficients: Vec<Complex64>,
    pub eigenphases: Option<Vec<f64>>,
    pub residuals: Residuals,
}

#[derive(Debug, Clone, Serialize)]
pub struct Residuals {
    pub root: Option<f64>,
    pub purity: Option<f64>,
    pub trivial_zero: Option<f64>,
    pub window: Option<f64>,
    pub borderline: bool,
}

impl CharRecord {
    pub fn new(chi: &DirichletCharacter, ld: &LData) -> CharRecord {
        CharRecord {
            character: chi.to_string(),
            classification: ld.classification,
            s: ld.s,
            coefficients: ld.coefficients.clone(),
            eigenphases: ld.eigenphases.clone(),
            residuals: Residuals {
                root: ld.root_residual,
                purity: ld.purity_deviation,
                trivial_zero: ld.trivial_zero_remainder,
                window: ld.window_max,
                borderline: ld.borderline,
            },
        }
    }
}

/// Trace series and L-data for every even character mod t^m.
pub struct CharacterAnalysis {
    pub table: UnitGroupTable,
    pub tables: WeightTables,
    pub characters: Vec<(DirichletCharacter, TraceSeries, LData)>,
}

impl CharacterAnalysis {
    pub fn run<R: Representation + ?Sized>(rep: &R, m: u32, degrees: u32, exec: Exec) -> Result<CharacterAnalysis> {
        Self::run_with(rep, m, degrees, exec, TOL_RH)
    }

    pub fn run_with<R: Representation + ?Sized>(
        rep: &R,
        m: u32,
        degrees: u32,
        exec: Exec,
        tol_rh: f64,
    ) -> Result<CharacterAnalysis> {
        let table = build_unit_group(rep.field(), m)?;
        let tables = WeightTables::build(rep, &table, degrees, exec)?;
        let chars = table.characters(true, false);
        let (q, w, bound) = (rep.field().q(), rep.weight(), m * rep.dim());
        let results = exec.map(&chars, |chi| {
            let ts = trace_series(&table, &tables, chi);
            classify_with(&ts.b, q, w, bound, tol_rh).map(|ld| (chi.clone(), ts, ld))
        });
        let characters = results.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(CharacterAnalysis { table, tables, characters })
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &(DirichletCharacter, TraceSeries, LData)> {
        self.characters.iter().filter(|c| !c.0.is_trivial())
    }

    pub fn trivial(&self) -> &(DirichletCharacter, TraceSeries, LData) {
        self.characters.iter().find(|c| c.0.is_trivial()).expect("trivial character is always present")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub rep: String,
    pub q: u32,
    pub m: u32,
    pub degrees: u32,
    pub characters: usize,
    /// S over good nontrivial even characters.
    pub histogram: BTreeMap<u32, usize>,
    pub good: usize,
    pub mixed: usize,
    pub heavy: usize,
    pub undetermined: usize,
    pub borderline: usize,
    pub majority: Option<u32>,
    pub trivial_character: Classification,
}

impl Census {
    pub fn from_analysis(a: &CharacterAnalysis) -> Census {
        let mut c = Census {
            rep: a.tables.rep.clone(),
            q: a.tables.q,
            m: a.tables.m,
            degrees: a.tables.degrees(),
            characters: 0,
            histogram: BTreeMap::new(),
            good: 0,
            mixed: 0,
            heavy: 0,
            undetermined: 0,
            borderline: 0,
            majority: None,
            trivial_character: a.trivial().2.classification,
        };
        for (_, _, ld) in a.nontrivial() {
            c.characters += 1;
            match ld.classification {
                Classification::Good => {
                    c.good += 1;
                    *c.histogram.entry(ld.s.unwrap()).or_default() += 1;
                }
                Classification::Mixed => c.mixed += 1,
                Classification::Heavy => c.heavy += 1,
                Classification::Undetermined => c.undetermined += 1,
            }
            if ld.borderline {
                c.borderline += 1;
            }
        }
        c.majority = c.histogram.iter().max_by_key(|(s, n)| (**n, std::cmp::Reverse(**s))).map(|(s, _)| *s);
        c
    }
}

/// Degree census of M(T, ρ⊗χ) over the nontrivial even characters mod t^m,
/// using traces up to min(m·dim + GUARD, feasible degree).
pub fn degree_census<R: Representation + ?Sized>(rep: &R, m: u32, exec: Exec) -> Result<Census> {
    Ok(Census::from_analysis(&census_analysis(rep, m, exec, TOL_RH)?))
}

/// The analysis behind `degree_census`, at the census truncation degree.
pub fn census_analysis<R: Representation + ?Sized>(
    rep: &R,
    m: u32,
    exec: Exec,
    tol_rh: f64,
) -> Result<CharacterAnalysis> {
    let mut d = guard_bound(rep.dim(), m).min(max_feasible_degree(rep.field().q()));
    if d < m * rep.dim() {
        // no guard window is reachable: every character is undetermined
        d = 1;
    }
    CharacterAnalysis::run_with(rep, m, d, exec, tol_rh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::reps::{legendre_rep, trivial_rep};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn newton_closed_form() {
        for q in [3.0f64, 5.0] {
            let b: Vec<Complex64> = (1..=8).map(|n| c(q.powi(n) - 1.0)).collect();
            let l = reconstruct_l(&b);
            // (1−T)/(1−qT) = 1 + Σ_{j≥1} (q−1) q^{j−1} T^j
            assert!((l[0] - 1.0).norm() < 1e-12);
            for j in 1..=8 {
                assert!((l[j] - (q - 1.0) * q.powi(j as i32 - 1)).norm() < 1e-6);
            }
        }
        assert!(reconstruct_l(&[c(0.0); 5]).iter().skip(1).all(|x| x.norm() == 0.0));
    }

    #[test]
    fn trivial_character_series() {
        let f3 = make_field(3, 1).unwrap();
        let rep = trivial_rep(&f3);
        let tbl = build_unit_group(&f3, 3).unwrap();
        let tables = WeightTables::build(&rep, &tbl, 6, Exec::Sequential).unwrap();
        let ts = trace_series(&tbl, &tables, &tbl.trivial_character());
        for (i, b) in ts.b.iter().enumerate() {
            assert!((b - (3f64.powi(i as i32 + 1) - 1.0)).norm() < 1e-9);
        }
        let ld = classify(&ts.b, 3, 0, 3).unwrap();
        assert_eq!(ld.classification, Classification::Heavy);
    }

    #[test]
    fn aggregated_matches_direct() {
        for (p, m) in [(3u64, 3u32), (5, 2)] {
            let f = make_field(p, 1).unwrap();
            let tbl = build_unit_group(&f, m).unwrap();
            let reps: Vec<Box<dyn Representation>> = if p == 5 {
                vec![Box::new(trivial_rep(&f)), Box::new(legendre_rep(&f).unwrap())]
            } else {
                vec![Box::new(trivial_rep(&f))]
            };
            for rep in &reps {
                let tables = WeightTables::build(rep.as_ref(), &tbl, 4, Exec::Parallel).unwrap();
                for chi in tbl.characters(false, false) {
                    let a = trace_series(&tbl, &tables, &chi);
                    let d = trace_series_direct(rep.as_ref(), &tbl, &chi, 4).unwrap();
                    for (x, y) in a.b.iter().zip(&d.b) {
                        assert!((x - y).norm() <= 1e-8 * (1.0 + y.norm()));
                    }
                }
            }
        }
    }

    #[test]
    fn legendre_b1_point_count() {
        let f5 = make_field(5, 1).unwrap();
        let rep = legendre_rep(&f5).unwrap();
        let tbl = build_unit_group(&f5, 1).unwrap();
        let tables = WeightTables::build(&rep, &tbl, 1, Exec::Sequential).unwrap();
        let b1 = trace_series(&tbl, &tables, &tbl.trivial_character()).b[0];
        let mut want = 0i64;
        for a in 1..5u32 {
            let p = crate::polyring::Poly::new(&f5, vec![f5.neg_raw(a), 1]).unwrap();
            want += crate::reps::legendre::point_count_trace(&p).unwrap();
        }
        // t − 1 has multiplicative reduction
        let t1 = crate::polyring::Poly::new(&f5, vec![4, 1]).unwrap();
        want += rep.bad_traces()[1] - crate::reps::legendre::point_count_trace(&t1).unwrap();
        assert!((b1 - want as f64).norm() < 1e-9);
    }

    #[test]
    fn trivial_rep_census_and_round_trip() {
        let f3 = make_field(3, 1).unwrap();
        let rep = trivial_rep(&f3);
        let census = degree_census(&rep, 5, Exec::Parallel).unwrap();
        assert_eq!(census.characters, 80);
        // characters of conductor t^j contribute S = j − 2
        let want: BTreeMap<u32, usize> = [(0, 2), (1, 6), (2, 18), (3, 54)].into_iter().collect();
        assert_eq!(census.histogram, want);
        assert_eq!(census.majority, Some(3));
        assert_eq!(census.trivial_character, Classification::Heavy);

        let a = CharacterAnalysis::run(&rep, 5, 9, Exec::Parallel).unwrap();
        for (chi, ts, ld) in a.nontrivial() {
            assert_eq!(ld.coefficients[0], c(1.0));
            let s = ld.s.unwrap() as f64;
            assert!(trace_from_theta(ld, 0).unwrap().re == s);
            for n in 1..=9u32 {
                let tr = trace_from_theta(ld, n).unwrap();
                assert!(tr.norm() <= s + 1e-9);
                let back = -(3f64.powf(n as f64 / 2.0)) * tr - 1.0;
                let b = ts.b[n as usize - 1];
                assert!((back - b).norm() <= 1e-6 * b.norm().max(1.0), "{chi} n={n}");
            }
            let (_, _, ldc) = a.characters.iter().find(|x| x.0 == chi.conj()).unwrap();
            let (t1, t2) = (trace_from_theta(ld, 2).unwrap(), trace_from_theta(ldc, 2).unwrap());
            assert!((t1 - t2.conj()).norm() < 1e-6);
        }

        let small = degree_census(&rep, 2, Exec::Sequential).unwrap();
        assert_eq!(small.histogram.get(&0), Some(&2));
    }

    #[test]
    fn undetermined_without_window() {
        let ld = classify(&[c(1.0), c(2.0)], 3, 0, 5).unwrap();
        assert_eq!(ld.classification, Classification::Undetermined);
        assert!(trace_from_theta(&ld, 1).is_err());
    }
}
