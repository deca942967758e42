//! Inverse roots of Π(1 − γ_i T) from its coefficients: eigenvalues of the
//! companion matrix by a complex Schur decomposition, then Newton polishing.
//!
//! A k-fold root comes out of the eigensolver as a cluster of radius about
//! ε^{1/k}. Clusters are replaced by their mean, which cancels the leading
//! perturbation, and polished as a simple root of the (k−1)-th derivative.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const SCHUR_EPS: f64 = 1e-14;
const SCHUR_ITERS: usize = 10_000;
const POLISH_STEPS: usize = 4;
/// Roots closer than this (relative to their modulus) form one cluster.
const CLUSTER: f64 = 1e-3;

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn derivative(p: &[Complex64]) -> Vec<Complex64> {
    let d = p.len() - 1;
    p[..d].iter().enumerate().map(|(i, &c)| c * (d - i) as f64).collect()
}

fn newton(p: &[Complex64], mut z: Complex64) -> Complex64 {
    if p.len() < 2 {
        return z;
    }
    let dp = derivative(p);
    for _ in 0..POLISH_STEPS {
        let d = horner(&dp, z);
        if d.norm() == 0.0 {
            break;
        }
        let step = horner(p, z) / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
    }
    z
}

/// Groups roots by single linkage at relative distance CLUSTER.
fn clusters(roots: &[Complex64]) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..roots.len()).collect();
    fn find(l: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let scale = roots[i].norm().max(roots[j].norm()).max(1e-300);
            if (roots[i] - roots[j]).norm() <= CLUSTER * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..roots.len() {
        let r = find(&mut label, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// γ_1..γ_S for coefficients [1, a_1, ..., a_S] of Π(1 − γ_i T), with the
/// largest relative residual |P(γ)| / max|a_j|.
pub fn inverse_roots(a: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    if a.is_empty() || (a[0] - 1.0).norm() > 1e-12 {
        return Err(Error::Precondition("coefficients must start with 1".into()));
    }
    let s = a.len() - 1;
    if s == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let mut comp = DMatrix::<Complex64>::zeros(s, s);
    for j in 0..s {
        comp[(0, j)] = -a[j + 1];
    }
    for i in 1..s {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    let schur = nalgebra::linalg::Schur::try_new(comp, SCHUR_EPS, SCHUR_ITERS)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let raw: Vec<Complex64> = (0..s).map(|i| t[(i, i)]).collect();
    // [1, a_1, ..., a_S] is also z^S + a_1 z^{S−1} + ... + a_S, highest first
    let p = a.to_vec();
    let mut roots = Vec::with_capacity(s);
    for group in clusters(&raw) {
        let k = group.len();
        let mean = group.iter().map(|&i| raw[i]).sum::<Complex64>() / k as f64;
        let mut q = p.clone();
        for _ in 1..k {
            q = derivative(&q);
        }
        let z = newton(&q, mean);
        roots.extend(std::iter::repeat(z).take(k));
    }
    let scale = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let residual = roots.iter().map(|&z| horner(&p, z).norm() / scale).fold(0.0, f64::max);
    Ok((roots, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_known_roots() {
        // (1 − 2T)(1 + T)(1 − iT) expanded by hand-free multiplication
        let gammas = [Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)];
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &g in &gammas {
            let mut next = c.clone();
            next.push(Complex64::new(0.0, 0.0));
            for j in 1..next.len() {
                next[j] -= g * c[j - 1];
            }
            c = next;
        }
        let (mut r, res) = inverse_roots(&c).unwrap();
        assert!(res < 1e-12);
        r.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        assert!((r[0] - gammas[1]).norm() < 1e-10);
        assert!((r[1] - gammas[2]).norm() < 1e-10);
        assert!((r[2] - gammas[0]).norm() < 1e-10);
    }

    #[test]
    fn multiple_roots_are_resolved() {
        // (1 + 3T)³ scaled by 3: three inverse roots at −1
        let c: Vec<Complex64> = [1.0, 3.0, 3.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let (r, res) = inverse_roots(&c).unwrap();
        assert!(res < 1e-14);
        for z in r {
            assert!((z + 1.0).norm() < 1e-12, "{z}");
        }
        // double root next to a simple one
        let c: Vec<Complex64> = [1.0, -1.0, -1.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let (mut r, _) = inverse_roots(&c).unwrap();
        r.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        assert!((r[0] + 1.0).norm() < 1e-12 && (r[1] - 1.0).norm() < 1e-12 && (r[2] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn degree_zero() {
        let (r, res) = inverse_roots(&[Complex64::new(1.0, 0.0)]).unwrap();
        assert!(r.is_empty() && res == 0.0);
    }
}
