//! Haar-random unitary matrices and Monte Carlo trace moments.
//!
//! Samples come from a ChaCha8 generator. Block b of a run draws from stream b
//! of the run seed, so results do not depend on how blocks are scheduled.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;

pub const GENERATOR: &str = "ChaCha8";
const BLOCK: u64 = 1000;
/// χ² critical value at the 1% level with 19 degrees of freedom.
pub const CHI2_CRIT_19: f64 = 36.191;

#[derive(Debug, Clone)]
pub struct UnitarySample {
    pub size: usize,
    pub matrix: DMatrix<Complex64>,
}

impl UnitarySample {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        if self.size == 1 {
            return vec![self.matrix[(0, 0)]];
        }
        let (_, t) = nalgebra::linalg::Schur::new(self.matrix.clone()).unpack();
        (0..self.size).map(|i| t[(i, i)]).collect()
    }

    /// Eigenphases in (−π, π].
    pub fn eigenphases(&self) -> Vec<f64> {
        self.eigenvalues().iter().map(|z| z.arg()).collect()
    }

    /// max |(U*U − I)_{ij}|.
    pub fn orthonormality_residual(&self) -> f64 {
        let g = self.matrix.adjoint() * &self.matrix;
        let mut r = 0.0f64;
        for i in 0..self.size {
            for j in 0..self.size {
                let want = if i == j { 1.0 } else { 0.0 };
                r = r.max((g[(i, j)] - want).norm());
            }
        }
        r
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }
}

fn draw(size: usize, rng: &mut ChaCha8Rng) -> UnitarySample {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::<Complex64>::from_fn(size, size, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..size {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..size {
            q[(i, j)] *= phase;
        }
    }
    UnitarySample { size, matrix: q }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// One Haar-distributed S×S unitary: Ginibre matrix, QR, and column j
/// multiplied by the phase r_jj/|r_jj| so that the triangular factor has
/// positive diagonal.
pub fn sample_haar(size: usize, seed: u64) -> Result<UnitarySample> {
    if size == 0 {
        return Err(Error::Precondition("matrix size must be >= 1".into()));
    }
    Ok(draw(size, &mut block_rng(seed, 0)))
}

/// Runs f on `samples` Haar matrices in seed-partitioned blocks and returns
/// the values in sample order.
fn sample_values<R, F>(size: usize, samples: u64, seed: u64, exec: Exec, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(&UnitarySample) -> R + Sync,
{
    let blocks = exec.map_chunks(samples, BLOCK, |r| {
        let mut rng = block_rng(seed, r.start / BLOCK);
        r.map(|_| f(&draw(size, &mut rng))).collect::<Vec<R>>()
    });
    blocks.into_iter().flatten().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub n: u32,
    pub size: usize,
    pub samples: u64,
    pub mean: f64,
    pub stderr: f64,
    pub expected: f64,
}

impl MomentEstimate {
    /// |mean − expected| ≤ k·stderr (exact agreement counts when stderr is 0).
    pub fn within(&self, k: f64) -> bool {
        (self.mean - self.expected).abs() <= k * self.stderr + 1e-12
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Stats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Stats {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    fn mean(&self) -> f64 {
        self.mean
    }

    fn stderr(&self) -> f64 {
        let n = self.count as f64;
        (self.m2.max(0.0) / (n - 1.0) / n).sqrt()
    }
}

fn trace_power(eigs: &[Complex64], n: u32) -> Complex64 {
    eigs.iter().map(|z| z.powu(n)).sum()
}

/// Mean of |Tr(g^n)|² over N Haar samples; expected value min{n, S}.
pub fn trace_moment(size: usize, n: u32, samples: u64, seed: u64, exec: Exec) -> Result<MomentEstimate> {
    if size == 0 {
        return Err(Error::Precondition("matrix size must be >= 1".into()));
    }
    if samples < 100 {
        return Err(Error::Precondition("need at least 100 samples".into()));
    }
    let vals = sample_values(size, samples, seed, exec, |u| trace_power(&u.eigenvalues(), n).norm_sqr());
    let mut st = Stats::default();
    for v in vals {
        st.push(v);
    }
    Ok(MomentEstimate { n, size, samples, mean: st.mean(), stderr: st.stderr(), expected: n.min(size as u32) as f64 })
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseCheck {
    pub k: i32,
    pub mean: [f64; 2],
    pub stderr: f64,
    pub expected: f64,
    pub pass: bool,
}

/// Sample means of |Tr(g^n)|²·det(g)^k: min{n,S} for k = 0 and 0 otherwise,
/// each judged against 4 standard errors.
pub fn phase_invariance_check(
    size: usize,
    n: u32,
    samples: u64,
    seed: u64,
    ks: &[i32],
    exec: Exec,
) -> Result<Vec<PhaseCheck>> {
    if size == 0 || samples < 2 {
        return Err(Error::Precondition("need size >= 1 and at least 2 samples".into()));
    }
    let vals = sample_values(size, samples, seed, exec, |u| {
        let e = u.eigenvalues();
        let det: Complex64 = e.iter().product();
        (trace_power(&e, n).norm_sqr(), det)
    });
    let nn = samples as f64;
    Ok(ks
        .iter()
        .map(|&k| {
            let xs: Vec<Complex64> = vals.iter().map(|&(t, d)| d.powi(k) * t).collect();
            let mean: Complex64 = xs.iter().sum::<Complex64>() / nn;
            let var = xs.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / (nn - 1.0);
            let stderr = (var / nn).sqrt();
            let expected = if k == 0 { n.min(size as u32) as f64 } else { 0.0 };
            let pass = (mean - expected).norm() <= 4.0 * stderr + 1e-12;
            PhaseCheck { k, mean: [mean.re, mean.im], stderr, expected, pass }
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct UniformityTest {
    pub size: usize,
    pub samples: u64,
    pub bins: Vec<u64>,
    pub chi2: f64,
    pub critical: f64,
    pub pass: bool,
}

/// χ² test of the pooled eigenphases against the uniform law, 20 bins.
pub fn eigenphase_uniformity(size: usize, samples: u64, seed: u64, exec: Exec) -> Result<UniformityTest> {
    if size == 0 || samples == 0 {
        return Err(Error::Precondition("need size >= 1 and samples >= 1".into()));
    }
    const NB: usize = 20;
    let phases = sample_values(size, samples, seed, exec, |u| u.eigenphases());
    let mut bins = vec![0u64; NB];
    for p in phases.iter().flatten() {
        let x = (p + std::f64::consts::PI) / std::f64::consts::TAU;
        bins[((x * NB as f64) as usize).min(NB - 1)] += 1;
    }
    let total = (samples * size as u64) as f64;
    let e = total / NB as f64;
    let chi2 = bins.iter().map(|&b| (b as f64 - e).powi(2) / e).sum();
    Ok(UniformityTest { size, samples, bins, chi2, critical: CHI2_CRIT_19, pass: chi2 <= CHI2_CRIT_19 })
}

/// Mean of Tr(g) with its standard error, by real and imaginary parts.
pub fn trace_mean(size: usize, samples: u64, seed: u64, exec: Exec) -> Result<(Complex64, [f64; 2])> {
    if size == 0 || samples < 2 {
        return Err(Error::Precondition("need size >= 1 and at least 2 samples".into()));
    }
    let vals = sample_values(size, samples, seed, exec, |u| u.matrix.trace());
    let (mut re, mut im) = (Stats::default(), Stats::default());
    for v in vals {
        re.push(v.re);
        im.push(v.im);
    }
    Ok((Complex64::new(re.mean(), im.mean()), [re.stderr(), im.stderr()]))
}
