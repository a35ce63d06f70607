//! Minimization over the unitary orbit of fixed-spectrum local observables.
//!
//! Two routes: a deterministic sphere-grid search over Bloch directions
//! (qubits only, used as an oracle for the closed forms) and a multistart
//! pattern search over special-unitary conjugations (any dimension).

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{embed_local, pauli, unitary_exp, ComplexMatrix, Subsystem, C64, ONE, ZERO};
use crate::measures::{
    LocalObservable, MeasureReport, Method, QfiEvaluator, SkewEvaluator, SpectrumSpec,
};
use crate::random;
use crate::states::DensityMatrix;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Wigner-Yanase skew information.
    Skew,
    /// Quantum Fisher information, variance normalization.
    Qfi,
}

/// Minimize `objective(ρ, K)` over local `K` on `side` with eigenvalues `spectrum`.
#[derive(Clone, Debug)]
pub struct OrbitProblem<'a> {
    pub state: &'a DensityMatrix,
    pub side: Subsystem,
    pub spectrum: SpectrumSpec,
    pub objective: Objective,
}

impl<'a> OrbitProblem<'a> {
    pub fn new(
        state: &'a DensityMatrix,
        side: Subsystem,
        spectrum: SpectrumSpec,
        objective: Objective,
    ) -> Result<Self> {
        spectrum.check_matches(state.subsystem_dim(side))?;
        Ok(Self {
            state,
            side,
            spectrum,
            objective,
        })
    }

    pub fn local_dim(&self) -> usize {
        self.state.subsystem_dim(self.side)
    }

    fn evaluator(&self) -> Evaluator {
        match self.objective {
            Objective::Skew => Evaluator::Skew(SkewEvaluator::new(self.state)),
            Objective::Qfi => Evaluator::Qfi(QfiEvaluator::new(self.state)),
        }
    }
}

enum Evaluator {
    Skew(SkewEvaluator),
    Qfi(QfiEvaluator),
}

impl Evaluator {
    fn eval(&self, problem: &OrbitProblem<'_>, k: &LocalObservable) -> f64 {
        let full = k
            .embedded(problem.state.dims())
            .expect("dimension checked by problem");
        match self {
            Evaluator::Skew(e) => e.eval(&full),
            Evaluator::Qfi(e) => e.eval(&full),
        }
    }
}

/// Point in the minimization domain.
#[derive(Clone, Debug, PartialEq)]
pub enum ObservableParams<'p> {
    /// Bloch direction of a qubit observable (normalized internally).
    Direction([f64; 3]),
    /// Exponential coordinates `x` of `U = exp(i Σ x_k G_k)` over the
    /// generalized Gell-Mann basis (`d² - 1` entries).
    Unitary(&'p [f64]),
}

/// Builds the observable `U diag(Λ) U†` or `c + r n·σ` for the given point.
pub fn observable_at(
    problem: &OrbitProblem<'_>,
    params: &ObservableParams<'_>,
) -> Result<LocalObservable> {
    match params {
        ObservableParams::Direction(n) => {
            if problem.local_dim() != 2 {
                return Err(Error::NotAQubit(problem.local_dim()));
            }
            LocalObservable::qubit(problem.side, &problem.spectrum, *n)
        }
        ObservableParams::Unitary(x) => {
            let d = problem.local_dim();
            if x.len() != d * d - 1 {
                return Err(Error::DimensionMismatch {
                    expected: d * d - 1,
                    found: x.len(),
                });
            }
            let u = unitary_from_coordinates(d, x);
            LocalObservable::from_unitary(problem.side, &problem.spectrum, &u)
        }
    }
}

/// Objective value at one point of the domain.
pub fn objective_eval(problem: &OrbitProblem<'_>, params: &ObservableParams<'_>) -> Result<f64> {
    let k = observable_at(problem, params)?;
    Ok(problem.evaluator().eval(problem, &k))
}

/// Traceless Hermitian basis of `d x d` matrices, `d² - 1` elements.
pub fn gell_mann(d: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    let unit = |r: usize, c: usize, v: C64| {
        ComplexMatrix::from_fn(d, |i, j| if (i, j) == (r, c) { v } else { ZERO })
    };
    for j in 0..d {
        for k in (j + 1)..d {
            out.push(&unit(j, k, ONE) + &unit(k, j, ONE));
            out.push(&unit(j, k, C64::new(0.0, -1.0)) + &unit(k, j, C64::new(0.0, 1.0)));
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..d)
            .map(|i| match i.cmp(&l) {
                std::cmp::Ordering::Less => norm,
                std::cmp::Ordering::Equal => -(l as f64) * norm,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        out.push(ComplexMatrix::from_real_diagonal(&diag));
    }
    out
}

/// `exp(i Σ x_k G_k)`.
pub fn unitary_from_coordinates(d: usize, x: &[f64]) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(d);
    for (g, &xk) in gell_mann(d).iter().zip(x) {
        h = &h + &g.scale_real(xk);
    }
    unitary_exp(&h, 1.0).expect("generator is Hermitian")
}

/// Resolution of the sphere-grid oracle.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    resolution: usize,
    refinement_rounds: usize,
}

impl GridSpec {
    pub const MIN_RESOLUTION: usize = 64;
    /// Side length of the local tangent-plane grid used by each refinement round.
    pub const LOCAL_POINTS: usize = 17;
    /// Each refinement round shrinks the search radius by this factor.
    pub const SHRINK: f64 = 8.0;

    pub fn new(resolution: usize, refinement_rounds: usize) -> Result<Self> {
        if resolution < Self::MIN_RESOLUTION {
            return Err(Error::InvalidConfig(format!(
                "grid resolution {resolution} is below {}",
                Self::MIN_RESOLUTION
            )));
        }
        Ok(Self {
            resolution,
            refinement_rounds,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn refinement_rounds(&self) -> usize {
        self.refinement_rounds
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            resolution: 2048,
            refinement_rounds: 2,
        }
    }
}

/// Fibonacci lattice of `n` quasi-uniform unit vectors.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * k as f64;
            [rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect()
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Orthonormal pair spanning the tangent plane at unit `n`.
fn tangent_basis(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if n[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let u = normalize(cross(n, helper));
    let v = cross(n, u);
    (u, v)
}

/// Result of a sphere search.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SphereMinimum {
    pub value: f64,
    pub direction: [f64; 3],
    pub evaluations: usize,
    pub rounds: usize,
}

/// Index of the first minimum; NaN never wins.
fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] || values[best].is_nan() {
            best = i;
        }
    }
    best
}

/// Minimizes `f` over the unit sphere: Fibonacci lattice, then local
/// tangent-plane grids around the incumbent. A round whose best point is
/// interior shrinks the window `SHRINK` times; one on the edge only recenters.
///
/// Points are evaluated in parallel but reduced in index order, so the result
/// only depends on `f` and `grid`.
pub fn minimize_on_sphere<F>(f: F, grid: &GridSpec) -> SphereMinimum
where
    F: Fn([f64; 3]) -> f64 + Sync,
{
    let points = fibonacci_sphere(grid.resolution);
    let values: Vec<f64> = points.par_iter().map(|&n| f(n)).collect();
    let best = argmin(&values);
    let mut incumbent = (values[best], points[best]);
    let mut evaluations = points.len();

    let m = GridSpec::LOCAL_POINTS;
    let half = (m / 2) as isize;
    let mut radius = (4.0 * std::f64::consts::PI / grid.resolution as f64).sqrt();
    for _ in 0..grid.refinement_rounds {
        let (u, v) = tangent_basis(incumbent.1);
        let step = radius / half as f64;
        let n0 = incumbent.1;
        let local: Vec<[f64; 3]> = (-half..=half)
            .flat_map(|a| (-half..=half).map(move |b| (a, b)))
            .map(|(a, b)| {
                let (da, db) = (a as f64 * step, b as f64 * step);
                normalize([
                    n0[0] + da * u[0] + db * v[0],
                    n0[1] + da * u[1] + db * v[1],
                    n0[2] + da * u[2] + db * v[2],
                ])
            })
            .collect();
        let vals: Vec<f64> = local.par_iter().map(|&n| f(n)).collect();
        evaluations += local.len();
        let k = argmin(&vals);
        if vals[k] < incumbent.0 {
            incumbent = (vals[k], local[k]);
        }
        // a minimum on the edge may lie outside the window: recenter before zooming
        let (row, col) = (k / m, k % m);
        let on_edge = row == 0 || col == 0 || row == m - 1 || col == m - 1;
        if !on_edge {
            radius /= GridSpec::SHRINK;
        }
    }
    debug_assert_eq!(m, 2 * half as usize + 1);
    SphereMinimum {
        value: incumbent.0,
        direction: incumbent.1,
        evaluations,
        rounds: grid.refinement_rounds,
    }
}

/// Brute-force oracle for qubit orbit problems.
pub fn sphere_grid_minimize(problem: &OrbitProblem<'_>, grid: &GridSpec) -> Result<MeasureReport> {
    if problem.local_dim() != 2 {
        return Err(Error::NotAQubit(problem.local_dim()));
    }
    let evaluator = problem.evaluator();
    let (c, r) = problem.spectrum.center_radius();
    let dims = problem.state.dims();
    let side = problem.side;
    let id = ComplexMatrix::identity(2).scale_real(c);
    let eval = |n: [f64; 3]| {
        let k = &id + &pauli::along(n).scale_real(r);
        let full = embed_local(&k, side, dims).expect("qubit side");
        match &evaluator {
            Evaluator::Skew(e) => e.eval(&full),
            Evaluator::Qfi(e) => e.eval(&full),
        }
    };
    let best = minimize_on_sphere(eval, grid);
    let minimizer = LocalObservable::qubit(side, &problem.spectrum, best.direction)?;
    let mut report = MeasureReport::new(best.value, Some(minimizer), Method::GridOracle);
    report.diagnostics.iterations = best.rounds;
    report.diagnostics.evaluations = best.evaluations;
    Ok(report)
}

/// Pattern-search schedule for [`multistart_minimize`].
pub const INITIAL_STEP: f64 = 0.3;
pub const STEP_SHRINK: f64 = 0.5;
pub const MIN_STEP: f64 = 1e-7;
const MAX_ITERATIONS: usize = 100_000;

struct LocalRun {
    x: Vec<f64>,
    value: f64,
    iterations: usize,
    evaluations: usize,
    trace: Vec<f64>,
}

/// Compass search from `x0`: try ±step along each coordinate, keep any
/// improvement, halve the step when a full sweep fails.
fn pattern_search(f: &impl Fn(&[f64]) -> f64, x0: Vec<f64>) -> LocalRun {
    let mut x = x0;
    let mut value = f(&x);
    let mut evaluations = 1;
    let mut step = INITIAL_STEP;
    let mut trace = vec![value];
    let mut iterations = 0;
    while step >= MIN_STEP && iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut improved = false;
        for k in 0..x.len() {
            for sign in [1.0, -1.0] {
                let mut trial = x.clone();
                trial[k] += sign * step;
                let v = f(&trial);
                evaluations += 1;
                if v < value {
                    x = trial;
                    value = v;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= STEP_SHRINK;
        }
        trace.push(value);
    }
    LocalRun {
        x,
        value,
        iterations,
        evaluations,
        trace,
    }
}

/// Multistart pattern search over `U diag(Λ) U†`, any subsystem dimension.
///
/// Start points are drawn from one seeded stream before any run starts; runs
/// execute in parallel and the best is chosen by start index on ties, so the
/// output is identical for identical inputs.
pub fn multistart_minimize(
    problem: &OrbitProblem<'_>,
    starts: usize,
    seed: u64,
) -> Result<MeasureReport> {
    let d = problem.local_dim();
    if problem.spectrum.len() != d {
        return Err(Error::SpectrumMismatch {
            expected: d,
            found: problem.spectrum.len(),
        });
    }
    if starts == 0 {
        return Err(Error::InvalidConfig(
            "multistart needs at least one start".into(),
        ));
    }
    let evaluator = problem.evaluator();
    let dims = problem.state.dims();
    let diag = ComplexMatrix::from_real_diagonal(problem.spectrum.values());
    let generators = gell_mann(d);
    let f = |x: &[f64]| {
        let mut h = ComplexMatrix::zeros(d);
        for (g, &xk) in generators.iter().zip(x) {
            h = &h + &g.scale_real(xk);
        }
        let u = unitary_exp(&h, 1.0).expect("Hermitian generator");
        let k = (&(&u * &diag) * &u.adjoint()).hermitian_part();
        let full = embed_local(&k, problem.side, dims).expect("dimension checked");
        match &evaluator {
            Evaluator::Skew(e) => e.eval(&full),
            Evaluator::Qfi(e) => e.eval(&full),
        }
    };

    let mut rng = random::rng(seed);
    let x0s: Vec<Vec<f64>> = (0..starts)
        .map(|_| {
            (0..d * d - 1)
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect()
        })
        .collect();
    let runs: Vec<LocalRun> = x0s
        .into_par_iter()
        .map(|x0| pattern_search(&f, x0))
        .collect();

    let best = argmin(&runs.iter().map(|r| r.value).collect::<Vec<_>>());
    let total_evals = runs.iter().map(|r| r.evaluations).sum();
    let total_iters = runs.iter().map(|r| r.iterations).sum();
    let winner = &runs[best];
    let u = unitary_from_coordinates(d, &winner.x);
    let minimizer = LocalObservable::from_unitary(problem.side, &problem.spectrum, &u)?;
    let mut report = MeasureReport::new(winner.value, Some(minimizer), Method::Multistart);
    report.diagnostics.iterations = total_iters;
    report.diagnostics.evaluations = total_evals;
    report.diagnostics.trace = winner.trace.clone();
    Ok(report)
}
