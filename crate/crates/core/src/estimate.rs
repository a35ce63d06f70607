//! Interferometric phase estimation: encode `θ` with `exp(iHθ)`, measure in
//! the eigenbasis of the symmetric logarithmic derivative, estimate `θ` by
//! maximum likelihood and compare the spread with the Cramér-Rao bound.
//!
//! The Fisher information used throughout this module is the one of the
//! encoded family, [`measures::qfi_standard`].

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, unitary_exp, ComplexMatrix, EigenDecomposition, C64, I};
use crate::measures::{self, QFI_NULL_TOL};
use crate::random;
use crate::states::DensityMatrix;

/// Fisher information at or below this marks the probe as insensitive.
pub const FLAT_TOL: f64 = 1e-10;
/// Points of the coarse likelihood scan over the window.
pub const LIKELIHOOD_GRID: usize = 512;
/// Golden-section refinement stops when the bracket is this narrow.
pub const GOLDEN_TOL: f64 = 1e-8;
pub const DEFAULT_BATCHES: usize = 100;
pub const DEFAULT_WINDOW: (f64, f64) = (0.0, FRAC_PI_2);

fn check_generator(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<()> {
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: h.dim(),
        });
    }
    h.check_hermitian()
}

/// `exp(iHθ) ρ exp(-iHθ)`.
pub fn encode_phase(rho: &DensityMatrix, h: &ComplexMatrix, theta: f64) -> Result<DensityMatrix> {
    check_generator(rho, h)?;
    rho.conjugate(&unitary_exp(h, theta)?)
}

/// `∂θ ρ_θ = i[H, ρ_θ]`.
fn phase_derivative(rho_theta: &ComplexMatrix, h: &ComplexMatrix) -> ComplexMatrix {
    (&(h * rho_theta) - &(rho_theta * h)).scale(I)
}

/// Symmetric logarithmic derivative together with its eigenbasis.
#[derive(Clone, Debug)]
pub struct SldMeasurement {
    pub sld: ComplexMatrix,
    /// Eigenbasis of the SLD; columns are the measurement vectors.
    pub basis: EigenDecomposition,
}

/// Solves `L ρ + ρ L = 2 ∂ρ` in the eigenbasis of `ρ`; pairs with
/// `p_i + p_j <= QFI_NULL_TOL` get `L_ij = 0`.
pub fn symmetric_log_derivative(
    rho: &ComplexMatrix,
    drho: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(rho)?;
    let d = eig.to_eigenbasis(drho);
    let p = &eig.eigenvalues;
    let n = p.len();
    let l = ComplexMatrix::from_fn(n, |i, j| {
        let s = p[i] + p[j];
        if s > QFI_NULL_TOL {
            d[(i, j)] * (2.0 / s)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(eig.from_eigenbasis(&l).hermitian_part())
}

/// Optimal measurement for estimating `θ` around `theta` with generator `h`.
pub fn sld_measurement_basis(
    rho: &DensityMatrix,
    h: &ComplexMatrix,
    theta: f64,
) -> Result<SldMeasurement> {
    let rho_theta = encode_phase(rho, h, theta)?;
    let drho = phase_derivative(rho_theta.matrix(), h);
    let sld = symmetric_log_derivative(rho_theta.matrix(), &drho)?;
    let basis = eig_hermitian(&sld)?;
    Ok(SldMeasurement { sld, basis })
}

pub fn cramer_rao_from_fisher(fisher: f64, shots: u64) -> Result<f64> {
    if fisher.is_nan() || fisher <= 0.0 {
        return Err(Error::ZeroFisher);
    }
    if shots == 0 {
        return Err(Error::InvalidConfig("shots must be at least 1".into()));
    }
    Ok(1.0 / (shots as f64 * fisher))
}

/// `1 / (ν F)` with `F` the Fisher information of `exp(iHθ) ρ exp(-iHθ)`.
pub fn cramer_rao_bound(rho: &DensityMatrix, h: &ComplexMatrix, shots: u64) -> Result<f64> {
    let f = measures::qfi_standard(rho, h)?;
    if f <= FLAT_TOL {
        return Err(Error::ZeroFisher);
    }
    cramer_rao_from_fisher(f, shots)
}

/// Outcome probabilities of a fixed projective measurement as a function of `θ`.
///
/// With `H = V diag(d) V†`, `P_k(θ) = Re Σ_ij c_kij exp(i(d_i - d_j)θ)` where
/// `c_kij = conj(b_ki) (V†ρV)_ij b_kj` and `b_k = V† (measurement vector k)`.
#[derive(Clone, Debug)]
pub struct OutcomeModel {
    freqs: Vec<f64>,
    coeffs: Vec<Vec<C64>>,
}

impl OutcomeModel {
    pub fn new(
        rho: &DensityMatrix,
        h: &ComplexMatrix,
        measurement: &ComplexMatrix,
    ) -> Result<Self> {
        check_generator(rho, h)?;
        let heig = eig_hermitian(h)?;
        let n = rho.dim();
        let r = heig.to_eigenbasis(rho.matrix());
        let b = &heig.eigenvectors.adjoint() * measurement;
        let mut freqs = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                freqs.push(heig.eigenvalues[i] - heig.eigenvalues[j]);
            }
        }
        let coeffs = (0..n)
            .map(|k| {
                let mut c = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        c.push(b[(i, k)].conj() * r[(i, j)] * b[(j, k)]);
                    }
                }
                c
            })
            .collect();
        Ok(Self { freqs, coeffs })
    }

    pub fn outcomes(&self) -> usize {
        self.coeffs.len()
    }

    pub fn probabilities(&self, theta: f64) -> Vec<f64> {
        let phases: Vec<C64> = self
            .freqs
            .iter()
            .map(|&w| C64::from_polar(1.0, w * theta))
            .collect();
        self.coeffs
            .iter()
            .map(|c| c.iter().zip(&phases).map(|(a, e)| a * e).sum::<C64>().re)
            .collect()
    }

    pub fn derivatives(&self, theta: f64) -> Vec<f64> {
        let phases: Vec<C64> = self
            .freqs
            .iter()
            .map(|&w| C64::from_polar(1.0, w * theta) * C64::new(0.0, w))
            .collect();
        self.coeffs
            .iter()
            .map(|c| c.iter().zip(&phases).map(|(a, e)| a * e).sum::<C64>().re)
            .collect()
    }

    /// `Σ_k P_k'(θ)² / P_k(θ)` over outcomes with nonzero probability.
    pub fn classical_fisher(&self, theta: f64) -> f64 {
        self.probabilities(theta)
            .iter()
            .zip(self.derivatives(theta))
            .filter(|(p, _)| **p > 1e-15)
            .map(|(p, dp)| dp * dp / p)
            .sum()
    }

    pub fn log_likelihood(&self, counts: &[u64], theta: f64) -> f64 {
        self.probabilities(theta)
            .iter()
            .zip(counts)
            .filter(|(_, &n)| n > 0)
            .map(|(p, &n)| n as f64 * p.max(1e-300).ln())
            .sum()
    }
}

/// Inputs of one estimation experiment.
#[derive(Clone, Debug)]
pub struct EstimationConfig {
    pub probe: DensityMatrix,
    /// Full-space Hermitian generator, e.g. `H_A ⊗ 1`.
    pub generator: ComplexMatrix,
    pub theta_true: f64,
    pub shots: u64,
    pub seed: u64,
    pub theta_window: (f64, f64),
    pub batches: usize,
}

impl EstimationConfig {
    pub fn new(
        probe: DensityMatrix,
        generator: ComplexMatrix,
        theta_true: f64,
        shots: u64,
        seed: u64,
    ) -> Self {
        Self {
            probe,
            generator,
            theta_true,
            shots,
            seed,
            theta_window: DEFAULT_WINDOW,
            batches: DEFAULT_BATCHES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_generator(&self.probe, &self.generator)?;
        let (lo, hi) = self.theta_window;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidConfig(format!(
                "empty theta window [{lo}, {hi}]"
            )));
        }
        if !(lo..=hi).contains(&self.theta_true) {
            return Err(Error::InvalidConfig(format!(
                "theta {} outside window [{lo}, {hi}]",
                self.theta_true
            )));
        }
        if self.shots == 0 || self.batches < 2 {
            return Err(Error::InvalidConfig(
                "need at least 1 shot and 2 batches".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimationResult {
    /// Mean of the per-batch estimates.
    pub theta_hat: f64,
    pub batch_estimates: Vec<f64>,
    /// Unbiased sample variance of the per-batch estimates.
    pub variance_empirical: f64,
    /// Standard error of `theta_hat`.
    pub standard_error: f64,
    pub crb: f64,
    pub fisher_quantum: f64,
    /// Fisher information of the chosen measurement at `theta_true`.
    pub fisher_classical: f64,
    /// Outcome probabilities at `theta_true`.
    pub probabilities: Vec<f64>,
    /// Counts per outcome in the first batch.
    pub outcome_histogram: Vec<u64>,
}

impl EstimationResult {
    pub fn variance_to_crb(&self) -> f64 {
        self.variance_empirical / self.crb
    }

    pub fn bias(&self, theta_true: f64) -> f64 {
        self.theta_hat - theta_true
    }
}

fn sample_counts<R: Rng>(rng: &mut R, probs: &[f64], shots: u64) -> Vec<u64> {
    let total: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p.max(0.0) / total;
        cdf.push(acc);
    }
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u: f64 = rng.random();
        let k = cdf.iter().position(|&c| u < c).unwrap_or(probs.len() - 1);
        counts[k] += 1;
    }
    counts
}

/// Maximizes `f` on `[lo, hi]`: uniform scan, then golden section around the best point.
pub fn maximize_on_interval(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let n = LIKELIHOOD_GRID;
    let step = (hi - lo) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(n - 1)]);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let refined = 0.5 * (a + b);
    if f(refined) >= values[best] {
        refined
    } else {
        grid[best]
    }
}

/// Runs `batches` independent experiments of `shots` measurements each.
///
/// Batch `b` draws from its own stream seeded with `seed + b`, so results do
/// not depend on scheduling.
pub fn simulate_estimation(config: &EstimationConfig) -> Result<EstimationResult> {
    config.validate()?;
    let fisher_quantum = measures::qfi_standard(&config.probe, &config.generator)?;
    if fisher_quantum <= FLAT_TOL {
        return Err(Error::FlatLikelihood(fisher_quantum));
    }
    let crb = cramer_rao_from_fisher(fisher_quantum, config.shots)?;
    let sld = sld_measurement_basis(&config.probe, &config.generator, config.theta_true)?;
    let model = OutcomeModel::new(&config.probe, &config.generator, &sld.basis.eigenvectors)?;
    let probabilities = model.probabilities(config.theta_true);
    let fisher_classical = model.classical_fisher(config.theta_true);
    let (lo, hi) = config.theta_window;

    let runs: Vec<(f64, Vec<u64>)> = (0..config.batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = random::rng(config.seed.wrapping_add(b as u64));
            let counts = sample_counts(&mut rng, &probabilities, config.shots);
            let est = maximize_on_interval(|t| model.log_likelihood(&counts, t), lo, hi);
            (est, counts)
        })
        .collect();

    let batch_estimates: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let m = batch_estimates.len() as f64;
    let mean = batch_estimates.iter().sum::<f64>() / m;
    let var = batch_estimates
        .iter()
        .map(|t| (t - mean).powi(2))
        .sum::<f64>()
        / (m - 1.0);
    Ok(EstimationResult {
        theta_hat: mean,
        variance_empirical: var,
        standard_error: (var / m).sqrt(),
        crb,
        fisher_quantum,
        fisher_classical,
        probabilities,
        outcome_histogram: runs[0].1.clone(),
        batch_estimates,
    })
}
