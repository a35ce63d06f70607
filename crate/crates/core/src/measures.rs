//! Discord-type correlation measures.
//!
//! Normalization of the quantum Fisher information: [`qfi`] returns
//! `Σ_{i<j} (p_i - p_j)² / (p_i + p_j) |<ψ_i|H|ψ_j>|²`, which equals the
//! variance of `H` on pure states and sits between the skew information and
//! twice the skew information on every state. [`qfi_standard`] is four times
//! that: the Fisher information of the family `exp(iHθ) ρ exp(-iHθ)` with
//! respect to `θ`, i.e. `Tr(ρ L²)` for the symmetric logarithmic derivative.

use nalgebra::{Matrix3, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, embed_local, pauli, ComplexMatrix, EigenDecomposition, Subsystem, C64,
};
use crate::optimize::{self, GridSpec, Objective, OrbitProblem};
use crate::states::{entropy_bits, DensityMatrix};

/// Pairs with `p_i + p_j` at or below this are left out of the QFI sum.
pub const QFI_NULL_TOL: f64 = 1e-12;
/// Minimum gap between consecutive eigenvalues of a requested spectrum.
pub const SPECTRUM_GAP: f64 = 1e-9;
/// Reported values above `-VALUE_CLAMP` but below zero are reported as zero.
pub const VALUE_CLAMP: f64 = 1e-10;
/// Eigenvalues of ρ below this are taken as exact zeros when forming `√ρ`;
/// the square root would otherwise turn eigensolver noise (~1e-16) into
/// ~1e-8 errors in the skew information.
pub const SQRT_FLOOR: f64 = 1e-13;

/// Starts used when a measure falls back to [`optimize::multistart_minimize`].
pub const DEFAULT_STARTS: usize = 8;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Strictly increasing list of eigenvalues fixing the orbit of local observables.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSpec(Vec<f64>);

impl SpectrumSpec {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() || eigenvalues.iter().any(|l| !l.is_finite()) {
            return Err(Error::DegenerateSpectrum(f64::NAN));
        }
        let min_gap = eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if min_gap < SPECTRUM_GAP {
            return Err(Error::DegenerateSpectrum(min_gap));
        }
        Ok(Self(eigenvalues))
    }

    /// `(-1, +1)`.
    pub fn qubit() -> Self {
        Self(vec![-1.0, 1.0])
    }

    /// Evenly spaced eigenvalues on `[-1, 1]`; `(-1, +1)` for a qubit.
    pub fn default_for(dim: usize) -> Self {
        if dim <= 1 {
            return Self(vec![0.0]);
        }
        Self(
            (0..dim)
                .map(|k| -1.0 + 2.0 * k as f64 / (dim - 1) as f64)
                .collect(),
        )
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(c, r)` with spectrum `(c - r, c + r)`; only meaningful for two levels.
    pub fn center_radius(&self) -> (f64, f64) {
        let (lo, hi) = (self.0[0], self.0[self.0.len() - 1]);
        ((lo + hi) / 2.0, (hi - lo) / 2.0)
    }

    pub(crate) fn check_matches(&self, dim: usize) -> Result<()> {
        if self.len() != dim {
            return Err(Error::SpectrumMismatch {
                expected: dim,
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// Hermitian observable acting on one side of a bipartite system.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalObservable {
    side: Subsystem,
    local: ComplexMatrix,
}

impl LocalObservable {
    pub fn new(side: Subsystem, local: ComplexMatrix) -> Result<Self> {
        local.check_hermitian()?;
        Ok(Self {
            side,
            local: local.hermitian_part(),
        })
    }

    /// `c·1 + r·(n·σ)` for a qubit spectrum `(c - r, c + r)` and unit `n`.
    pub fn qubit(side: Subsystem, spectrum: &SpectrumSpec, n: [f64; 3]) -> Result<Self> {
        spectrum.check_matches(2)?;
        let (c, r) = spectrum.center_radius();
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let unit = [n[0] / norm, n[1] / norm, n[2] / norm];
        let k = &ComplexMatrix::identity(2).scale_real(c) + &pauli::along(unit).scale_real(r);
        Ok(Self { side, local: k })
    }

    /// `U diag(spectrum) U†`.
    pub fn from_unitary(
        side: Subsystem,
        spectrum: &SpectrumSpec,
        u: &ComplexMatrix,
    ) -> Result<Self> {
        spectrum.check_matches(u.dim())?;
        let d = ComplexMatrix::from_real_diagonal(spectrum.values());
        let k = &(u * &d) * &u.adjoint();
        Ok(Self {
            side,
            local: k.hermitian_part(),
        })
    }

    pub fn side(&self) -> Subsystem {
        self.side
    }

    pub fn local(&self) -> &ComplexMatrix {
        &self.local
    }

    /// `K ⊗ 1` or `1 ⊗ K`.
    pub fn embedded(&self, dims: (usize, usize)) -> Result<ComplexMatrix> {
        embed_local(&self.local, self.side, dims)
    }

    /// Unit Bloch direction of the traceless part, for qubit observables.
    pub fn bloch_direction(&self) -> Option<[f64; 3]> {
        if self.local.dim() != 2 {
            return None;
        }
        let comps: Vec<f64> = pauli::basis()
            .iter()
            .map(|s| self.local.trace_product(s).re / 2.0)
            .collect();
        let norm = comps.iter().map(|c| c * c).sum::<f64>().sqrt();
        (norm > 0.0).then(|| [comps[0] / norm, comps[1] / norm, comps[2] / norm])
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Multistart,
    GridOracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Multistart => "multistart",
            Method::GridOracle => "grid-oracle",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub iterations: usize,
    pub evaluations: usize,
    /// `|value - oracle value|` when the result was certified against the grid oracle.
    pub oracle_gap: Option<f64>,
    /// Best objective value after each iteration of the winning run.
    pub trace: Vec<f64>,
}

/// Value of a measure with the observable attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureReport {
    pub value: f64,
    pub minimizer: Option<LocalObservable>,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl MeasureReport {
    pub(crate) fn new(value: f64, minimizer: Option<LocalObservable>, method: Method) -> Self {
        Self {
            value: clamp_value(value),
            minimizer,
            method,
            diagnostics: Diagnostics::default(),
        }
    }
}

/// Interferometric power: the raw minimum of [`qfi`] and a quarter of it.
#[derive(Clone, Debug, PartialEq)]
pub struct QipReport {
    pub raw: MeasureReport,
    pub normalized: f64,
}

pub(crate) fn clamp_value(v: f64) -> f64 {
    if v < 0.0 && v > -VALUE_CLAMP {
        0.0
    } else {
        v
    }
}

fn check_operator(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<()> {
    if k.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: k.dim(),
        });
    }
    k.check_hermitian()
}

/// Precomputed `√ρ` for repeated skew-information evaluations.
#[derive(Clone, Debug)]
pub struct SkewEvaluator {
    rho: ComplexMatrix,
    sqrt_rho: ComplexMatrix,
}

impl SkewEvaluator {
    pub fn new(rho: &DensityMatrix) -> Self {
        Self {
            rho: rho.matrix().clone(),
            sqrt_rho: floored_sqrt(rho),
        }
    }

    /// `Tr(ρK²) - Tr(√ρ K √ρ K)`.
    pub fn eval(&self, k: &ComplexMatrix) -> f64 {
        let k2 = k * k;
        let sk = &self.sqrt_rho * k;
        let v = self.rho.trace_product(&k2).re - sk.trace_product(&sk).re;
        v.max(0.0)
    }
}

fn floored_sqrt(rho: &DensityMatrix) -> ComplexMatrix {
    let eig = eig_hermitian(rho.matrix()).expect("validated states are Hermitian");
    eig.map(|l| C64::new(if l > SQRT_FLOOR { l.sqrt() } else { 0.0 }, 0.0))
}

/// Wigner-Yanase skew information `-½ Tr([√ρ, K]²)`.
pub fn skew_information(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    check_operator(rho, k)?;
    Ok(SkewEvaluator::new(rho).eval(k))
}

pub fn skew_information_local(rho: &DensityMatrix, k: &LocalObservable) -> Result<f64> {
    skew_information(rho, &k.embedded(rho.dims())?)
}

/// Precomputed spectral decomposition for repeated QFI evaluations.
#[derive(Clone, Debug)]
pub struct QfiEvaluator {
    eig: EigenDecomposition,
    weights: Vec<f64>,
}

impl QfiEvaluator {
    pub fn new(rho: &DensityMatrix) -> Self {
        let eig = eig_hermitian(rho.matrix()).expect("validated states are Hermitian");
        let n = eig.dim();
        let p: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0)).collect();
        let mut weights = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let s = p[i] + p[j];
                if s > QFI_NULL_TOL {
                    weights[i * n + j] = (p[i] - p[j]).powi(2) / s;
                }
            }
        }
        Self { eig, weights }
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    /// `(p_i - p_j)² / (p_i + p_j)`, zero for excluded pairs; row-major.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// [`qfi`] for a full-space Hermitian generator.
    pub fn eval(&self, h: &ComplexMatrix) -> f64 {
        let hb = self.eig.to_eigenbasis(h);
        let n = hb.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += self.weights[i * n + j] * hb[(i, j)].norm_sqr();
            }
        }
        0.5 * acc
    }
}

/// Quantum Fisher information in variance units (see module docs).
pub fn qfi(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<f64> {
    check_operator(rho, h)?;
    Ok(QfiEvaluator::new(rho).eval(h))
}

/// `Tr(ρ L²) = 4 · qfi`: Fisher information of `exp(iHθ) ρ exp(-iHθ)` in `θ`.
pub fn qfi_standard(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<f64> {
    Ok(4.0 * qfi(rho, h)?)
}

pub fn qfi_local(rho: &DensityMatrix, h: &LocalObservable) -> Result<f64> {
    qfi(rho, &h.embedded(rho.dims())?)
}

fn require_qubit(rho: &DensityMatrix, side: Subsystem) -> Result<()> {
    match rho.subsystem_dim(side) {
        2 => Ok(()),
        d => Err(Error::NotAQubit(d)),
    }
}

fn embedded_paulis(rho: &DensityMatrix, side: Subsystem) -> [ComplexMatrix; 3] {
    pauli::basis().map(|s| embed_local(&s, side, rho.dims()).expect("qubit side checked"))
}

/// Real symmetric `M` with `nᵀ M n = qfi(ρ, (n·σ) on side)` for every unit `n`.
pub fn qfi_quadratic_form(rho: &DensityMatrix, side: Subsystem) -> Result<[[f64; 3]; 3]> {
    require_qubit(rho, side)?;
    let ev = QfiEvaluator::new(rho);
    let s = embedded_paulis(rho, side).map(|m| ev.eig.to_eigenbasis(&m));
    let n = rho.dim();
    let mut m = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in a..3 {
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    acc += ev.weights[i * n + j] * (s[a][(i, j)] * s[b][(i, j)].conj()).re;
                }
            }
            m[a][b] = 0.5 * acc;
            m[b][a] = 0.5 * acc;
        }
    }
    Ok(m)
}

/// `W_ab = Tr(√ρ σ_a √ρ σ_b)` with the Paulis on `side`; the skew information
/// of `n·σ` is `1 - nᵀ W n`.
pub fn skew_correlation_matrix(rho: &DensityMatrix, side: Subsystem) -> Result<[[f64; 3]; 3]> {
    require_qubit(rho, side)?;
    let sqrt_rho = floored_sqrt(rho);
    let s = embedded_paulis(rho, side).map(|m| &sqrt_rho * &m);
    let mut w = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in a..3 {
            let v = s[a].trace_product(&s[b]).re;
            w[a][b] = v;
            w[b][a] = v;
        }
    }
    Ok(w)
}

/// `(λ_min, v_min, λ_max, v_max)` of a real symmetric 3x3 matrix.
fn extreme_eigenpairs(m: &[[f64; 3]; 3]) -> (f64, [f64; 3], f64, [f64; 3]) {
    let eig = SymmetricEigen::new(Matrix3::from_fn(|i, j| m[i][j]));
    let (mut lo, mut hi) = (0, 0);
    for k in 1..3 {
        if eig.eigenvalues[k] < eig.eigenvalues[lo] {
            lo = k;
        }
        if eig.eigenvalues[k] > eig.eigenvalues[hi] {
            hi = k;
        }
    }
    let col = |k: usize| {
        [
            eig.eigenvectors[(0, k)],
            eig.eigenvectors[(1, k)],
            eig.eigenvectors[(2, k)],
        ]
    };
    (eig.eigenvalues[lo], col(lo), eig.eigenvalues[hi], col(hi))
}

/// Local quantum uncertainty: minimum skew information over local observables
/// on `side` with the given spectrum.
///
/// Qubit sides use the closed form `r² (1 - λ_max(W))`; larger subsystems fall
/// back to [`optimize::multistart_minimize`].
pub fn lqu(rho: &DensityMatrix, side: Subsystem, spectrum: &SpectrumSpec) -> Result<MeasureReport> {
    spectrum.check_matches(rho.subsystem_dim(side))?;
    if rho.subsystem_dim(side) != 2 {
        let problem = OrbitProblem::new(rho, side, spectrum.clone(), Objective::Skew)?;
        return optimize::multistart_minimize(&problem, DEFAULT_STARTS, DEFAULT_SEED);
    }
    let w = skew_correlation_matrix(rho, side)?;
    let (_, _, lmax, vmax) = extreme_eigenpairs(&w);
    let (_, r) = spectrum.center_radius();
    let minimizer = LocalObservable::qubit(side, spectrum, vmax)?;
    Ok(MeasureReport::new(
        r * r * (1.0 - lmax),
        Some(minimizer),
        Method::ClosedForm,
    ))
}

/// Interferometric power: minimum of [`qfi`] over local generators on `side`
/// with the given spectrum (`raw`), and a quarter of it (`normalized`).
pub fn qip(rho: &DensityMatrix, side: Subsystem, spectrum: &SpectrumSpec) -> Result<QipReport> {
    spectrum.check_matches(rho.subsystem_dim(side))?;
    let raw = if rho.subsystem_dim(side) != 2 {
        let problem = OrbitProblem::new(rho, side, spectrum.clone(), Objective::Qfi)?;
        optimize::multistart_minimize(&problem, DEFAULT_STARTS, DEFAULT_SEED)?
    } else {
        let m = qfi_quadratic_form(rho, side)?;
        let (lmin, vmin, _, _) = extreme_eigenpairs(&m);
        let (_, r) = spectrum.center_radius();
        let minimizer = LocalObservable::qubit(side, spectrum, vmin)?;
        MeasureReport::new(r * r * lmin, Some(minimizer), Method::ClosedForm)
    };
    Ok(QipReport {
        normalized: raw.value / 4.0,
        raw,
    })
}

/// Runs the sphere-grid oracle on the same problem and records the gap.
pub fn certify(
    report: &mut MeasureReport,
    rho: &DensityMatrix,
    side: Subsystem,
    spectrum: &SpectrumSpec,
    objective: Objective,
    grid: &GridSpec,
) -> Result<f64> {
    let problem = OrbitProblem::new(rho, side, spectrum.clone(), objective)?;
    let oracle = optimize::sphere_grid_minimize(&problem, grid)?;
    let gap = (report.value - oracle.value).abs();
    report.diagnostics.oracle_gap = Some(gap);
    Ok(gap)
}

/// `S(A) + S(B) - S(AB)` in bits.
pub fn mutual_information(rho: &DensityMatrix) -> f64 {
    entropy_bits(&rho.reduced(Subsystem::A)) + entropy_bits(&rho.reduced(Subsystem::B))
        - entropy_bits(rho.matrix())
}

/// Conditional entropy `Σ_k p_k S(ρ_{other|k})` after measuring `n·σ` on `side`.
fn measured_conditional_entropy(rho: &DensityMatrix, side: Subsystem, n: [f64; 3]) -> f64 {
    let half_id = ComplexMatrix::identity(2).scale_real(0.5);
    let half_n = pauli::along(n).scale_real(0.5);
    let mut total = 0.0;
    for proj in [&half_id + &half_n, &half_id - &half_n] {
        let p = embed_local(&proj, side, rho.dims()).expect("qubit side checked");
        let post = &(&p * rho.matrix()) * &p;
        let cond =
            crate::linalg::partial_trace(&post, rho.dims(), side.other()).expect("dims valid");
        let weight = cond.trace().re;
        if weight > 1e-15 {
            total +=
                weight * entropy_bits(&cond.scale(C64::new(1.0 / weight, 0.0)).hermitian_part());
        }
    }
    total
}

/// Grid used for the entropic-discord maximization.
pub fn discord_grid() -> GridSpec {
    GridSpec::new(2048, 5).expect("valid grid")
}

/// Entropic discord over rank-1 projective measurements on a qubit `side`:
/// `I(ρ) - max_n I(ρ after measuring n·σ)`, in bits.
pub fn entropic_discord(rho: &DensityMatrix, side: Subsystem) -> Result<MeasureReport> {
    require_qubit(rho, side)?;
    let best = optimize::minimize_on_sphere(
        |n| measured_conditional_entropy(rho, side, n),
        &discord_grid(),
    );
    // I(ρ') = S(other) - Σ p_k S(other|k)
    let s_other = entropy_bits(&rho.reduced(side.other()));
    let max_post_mi = s_other - best.value;
    let value = mutual_information(rho) - max_post_mi;
    let minimizer = LocalObservable::qubit(side, &SpectrumSpec::qubit(), best.direction)?;
    let mut report = MeasureReport::new(value, Some(minimizer), Method::GridOracle);
    report.diagnostics.iterations = best.rounds;
    report.diagnostics.evaluations = best.evaluations;
    Ok(report)
}

/// Whether `side` carries no discord, judged by LQU with the default spectrum.
pub fn is_classical_quantum(rho: &DensityMatrix, side: Subsystem, tol: f64) -> bool {
    let spectrum = SpectrumSpec::default_for(rho.subsystem_dim(side));
    lqu(rho, side, &spectrum)
        .map(|r| r.value <= tol)
        .unwrap_or(false)
}
