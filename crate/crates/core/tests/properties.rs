//! Property tests for the algebraic invariants of each module.

use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;

use shortvar::chars::{build_unit_group, UnitGroupTable};
use shortvar::experiments::{dense_weights, interval_sums};
use shortvar::gf::{make_field, FieldSpec};
use shortvar::lfunc::reconstruct_l;
use shortvar::polyring::{enumerate_irreducibles, enumerate_monic, factorize, interval, Poly};
use shortvar::reps::{legendre_rep, trivial_rep, Representation};
use shortvar::Exec;

const FIELDS: [(u64, u32); 11] =
    [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (5, 2), (3, 3), (7, 2), (3, 4)];

fn fields() -> &'static Vec<FieldSpec> {
    static F: OnceLock<Vec<FieldSpec>> = OnceLock::new();
    F.get_or_init(|| FIELDS.iter().map(|&(p, k)| make_field(p, k).unwrap()).collect())
}

fn tables() -> &'static Vec<UnitGroupTable> {
    static T: OnceLock<Vec<UnitGroupTable>> = OnceLock::new();
    T.get_or_init(|| {
        [(3u64, 1u32, 4u32), (5, 1, 3), (2, 2, 3), (2, 1, 6), (7, 1, 2), (3, 2, 2)]
            .iter()
            .map(|&(p, k, m)| build_unit_group(&make_field(p, k).unwrap(), m).unwrap())
            .collect()
    })
}

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = (usize, Vec<u32>)> {
    (0..FIELDS.len(), prop::collection::vec(any::<u32>(), 1..=max_deg + 1))
}

fn make_poly(fi: usize, raw: &[u32], nonzero_constant: bool) -> Poly {
    let f = &fields()[fi];
    let q = f.q();
    let mut c: Vec<u32> = raw.iter().map(|x| x % q).collect();
    let last = c.len() - 1;
    c[last] = 1 + c[last] % (q - 1);
    if nonzero_constant {
        c[0] = 1 + raw[0] % (q - 1);
    }
    Poly::new(f, c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(fi in 0..FIELDS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fields()[fi];
        let q = f.q();
        let (a, b, c) = (f.element(a % q).unwrap(), f.element(b % q).unwrap(), f.element(c % q).unwrap());
        prop_assert_eq!(f.add(a, b).unwrap(), f.add(b, a).unwrap());
        prop_assert_eq!(f.mul(a, b).unwrap(), f.mul(b, a).unwrap());
        prop_assert_eq!(f.add(f.add(a, b).unwrap(), c).unwrap(), f.add(a, f.add(b, c).unwrap()).unwrap());
        prop_assert_eq!(f.mul(f.mul(a, b).unwrap(), c).unwrap(), f.mul(a, f.mul(b, c).unwrap()).unwrap());
        let lhs = f.mul(a, f.add(b, c).unwrap()).unwrap();
        let rhs = f.add(f.mul(a, b).unwrap(), f.mul(a, c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.add(a, f.neg(a).unwrap()).unwrap(), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()).unwrap(), f.one());
        } else {
            prop_assert!(f.inv(a).is_err());
        }
        // Frobenius is additive
        let p = f.p() as u64;
        let fr = |x| f.pow(x, p).unwrap();
        prop_assert_eq!(fr(f.add(a, b).unwrap()), f.add(fr(a), fr(b)).unwrap());
    }

    #[test]
    fn polynomial_ring_laws((fi, ra) in poly_strategy(6), rb in prop::collection::vec(any::<u32>(), 1..=5)) {
        let a = make_poly(fi, &ra, false);
        let b = make_poly(fi, &rb, false);
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        let (quot, rem) = a.divrem(&b).unwrap();
        prop_assert_eq!(quot.mul(&b).unwrap().add(&rem).unwrap(), a.clone());
        if !rem.is_zero() {
            prop_assert!(rem.deg().unwrap() < b.deg().unwrap());
        }
        prop_assert_eq!(Poly::parse(a.field(), &a.to_text()).unwrap(), a.clone());
    }

    #[test]
    fn factorization_reassembles((fi, ra) in poly_strategy(6)) {
        let a = make_poly(fi, &ra, false);
        let fac = factorize(&a).unwrap();
        prop_assert_eq!(fac.product(a.field()), a);
        for (p, _) in &fac.factors {
            prop_assert!(p.prime().is_monic());
            prop_assert_eq!(factorize(p.prime()).unwrap().factors.len(), 1);
        }
    }

    #[test]
    fn involution_laws((fi, ra) in poly_strategy(8), rb in prop::collection::vec(any::<u32>(), 1..=6)) {
        let a = make_poly(fi, &ra, true);
        let b = make_poly(fi, &rb, false);
        prop_assert_eq!(a.involute().involute(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap().involute(), a.involute().mul(&b.involute()).unwrap());
        // f* has constant term equal to the leading coefficient of f
        prop_assert_eq!(a.involute().constant_term(), a.leading());
        prop_assert_eq!(a.involute().deg().unwrap(), a.deg().unwrap());
    }

    #[test]
    fn dlog_is_a_homomorphism(ti in 0..6usize, x in any::<u64>(), y in any::<u64>()) {
        let t = &tables()[ti];
        let q = t.field().q() as u64;
        let size = t.residue_count();
        let unit = |v: u64| {
            let r = v % size;
            if r % q == 0 { r + 1 } else { r }
        };
        let (a, b) = (unit(x), unit(y));
        let (da, db) = (t.dlog(a).unwrap(), t.dlog(b).unwrap());
        let dab = t.dlog(t.mul(a, b)).unwrap();
        for ((i, &o), (&ea, &eb)) in t.orders().iter().enumerate().zip(da.iter().zip(&db)) {
            prop_assert_eq!(dab[i], (ea + eb) % o);
        }
        for chi in t.characters(false, false).iter().step_by(7) {
            let (ca, cb) = (t.evaluate_residue(chi, a), t.evaluate_residue(chi, b));
            let cab = t.evaluate_residue(chi, t.mul(a, b));
            prop_assert!((cab - ca * cb).norm() < 1e-10);
            prop_assert!((ca.norm() - 1.0).abs() < 1e-12);
            prop_assert!((ca.powu(t.exponent() as u32) - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn newton_recurrence_inverts_power_sums(roots in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 0..6)) {
        let g: Vec<Complex64> = roots.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let d = g.len().max(1) + 3;
        let b: Vec<Complex64> = (1..=d as u32).map(|n| -g.iter().map(|z| z.powu(n)).sum::<Complex64>()).collect();
        let mut want = vec![Complex64::new(1.0, 0.0)];
        for z in &g {
            let mut next = want.clone();
            next.push(Complex64::new(0.0, 0.0));
            for k in 1..next.len() {
                next[k] -= z * want[k - 1];
            }
            want = next;
        }
        want.resize(d + 1, Complex64::new(0.0, 0.0));
        let got = reconstruct_l(&b);
        prop_assert_eq!(got.len(), d + 1);
        for (x, y) in got.iter().zip(&want) {
            prop_assert!((x - y).norm() <= 1e-8 * (1.0 + y.norm()), "{:?} vs {:?}", got, want);
        }
    }
}

#[test]
fn generator_powers_enumerate_units_once() {
    for f in fields() {
        let g = f.generator();
        let mut seen = vec![false; f.q() as usize];
        let mut x = f.one();
        for _ in 0..f.q() - 1 {
            assert!(!seen[x.value() as usize], "q={} repeats", f.q());
            seen[x.value() as usize] = true;
            x = f.mul(x, g).unwrap();
        }
        assert_eq!(x, f.one());
        assert!(!seen[0]);
    }
}

#[test]
fn full_field_axioms_up_to_81() {
    for f in fields() {
        let q = f.q();
        let el: Vec<_> = (0..q).map(|v| f.element(v).unwrap()).collect();
        for &a in &el {
            for &b in &el {
                assert_eq!(f.add(a, b).unwrap(), f.add(b, a).unwrap());
                assert_eq!(f.mul(a, b).unwrap(), f.mul(b, a).unwrap());
                if q <= 27 {
                    for &c in &el {
                        let lhs = f.mul(a, f.add(b, c).unwrap()).unwrap();
                        let rhs = f.add(f.mul(a, b).unwrap(), f.mul(a, c).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                        assert_eq!(f.mul(f.mul(a, b).unwrap(), c).unwrap(), f.mul(a, f.mul(b, c).unwrap()).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn intervals_partition_monic_polynomials() {
    let f = make_field(3, 1).unwrap();
    for n in 1..=6u32 {
        for h in 0..n {
            let mut hits = vec![0u8; 3usize.pow(n)];
            for b in enumerate_monic(&f, n - h - 1) {
                let a = b.mul(&Poly::monomial(&f, 1, h + 1)).unwrap();
                for g in interval(&a, h).unwrap() {
                    hits[g.monic_index().unwrap() as usize] += 1;
                }
            }
            assert!(hits.iter().all(|&c| c == 1), "n={n} h={h}");
        }
    }
}

#[test]
fn legendre_traces_satisfy_hasse() {
    for q in [5u64, 7] {
        let f = make_field(q, 1).unwrap();
        let rep = legendre_rep(&f).unwrap();
        for d in 1..=4u32 {
            for v in enumerate_irreducibles(&f, d).unwrap() {
                let a = rep.local_trace(&v, 1).unwrap();
                let qv = v.residue_size() as i64;
                assert!(a * a <= 4 * qv, "q={q} P={} a={a}", v.prime());
            }
        }
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let f = make_field(5, 1).unwrap();
    let legendre = legendre_rep(&f).unwrap();
    let trivial = trivial_rep(&make_field(3, 1).unwrap());
    for rep in [&legendre as &dyn Representation, &trivial] {
        let a = dense_weights(rep, 6, Exec::Sequential).unwrap();
        let b = dense_weights(rep, 6, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let q = rep.field().q();
        assert_eq!(interval_sums(&a, q, 2, Exec::Sequential), interval_sums(&b, q, 2, Exec::Parallel));
    }
}
