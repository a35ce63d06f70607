//! Randomized invariant checks over the measures.
//!
//! Each property reports its worst-case residual against a fixed tolerance; a
//! residual above the tolerance fails the property. All draws come from one
//! seeded stream per suite.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{embed_local, Subsystem};
use crate::measures::{self, lqu, qip, skew_information, SpectrumSpec};
use crate::optimize::{sphere_grid_minimize, GridSpec, Objective, OrbitProblem};
use crate::random;
use crate::states::{apply_channel, cq_example, Channel, DensityMatrix};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Suite {
    InequalityChain,
    Oracle,
    LocalUnitary,
    Monotonicity,
    Symmetry,
    CqZero,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::InequalityChain,
        Suite::Oracle,
        Suite::LocalUnitary,
        Suite::Monotonicity,
        Suite::Symmetry,
        Suite::CqZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::InequalityChain => "inequality-chain",
            Suite::Oracle => "oracle",
            Suite::LocalUnitary => "local-unitary",
            Suite::Monotonicity => "monotonicity",
            Suite::Symmetry => "symmetry",
            Suite::CqZero => "cq-zero",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite `{s}`")))
    }
}

/// Sample sizes and tolerances of the checks.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Multiplier applied to every QFI the suite computes; 1 except in mutation tests.
    pub qfi_scale: f64,
    pub calibration_states: usize,
    pub chain_states: usize,
    pub oracle_states: usize,
    pub unitary_states: usize,
    pub monotonicity_states: usize,
    pub symmetry_states: usize,
    pub cq_states: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 20_141_001,
            qfi_scale: 1.0,
            calibration_states: 100,
            chain_states: 1000,
            oracle_states: 200,
            unitary_states: 100,
            monotonicity_states: 20,
            symmetry_states: 100,
            cq_states: 50,
        }
    }
}

pub const CHAIN_SLACK: f64 = 1e-9;
pub const ORACLE_TOL: f64 = 1e-4;
pub const INVARIANCE_TOL: f64 = 1e-6;
pub const CQ_ZERO_TOL: f64 = 1e-8;
pub const ASYMMETRY_MIN: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyResult {
    pub name: String,
    pub suite: Suite,
    pub cases: usize,
    /// Largest observed violation measure; the property holds when it is `<= tolerance`.
    pub worst_residual: f64,
    pub tolerance: f64,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.worst_residual <= self.tolerance
    }
}

struct Tracker {
    name: String,
    suite: Suite,
    tolerance: f64,
    worst: f64,
    cases: usize,
}

impl Tracker {
    fn new(suite: Suite, name: &str, tolerance: f64) -> Self {
        Self {
            name: format!("{}/{}", suite.name(), name),
            suite,
            tolerance,
            worst: f64::NEG_INFINITY,
            cases: 0,
        }
    }

    fn record(&mut self, residual: f64) {
        self.cases += 1;
        // NaN residuals count as failures
        self.worst = if residual.is_nan() {
            f64::INFINITY
        } else {
            self.worst.max(residual)
        };
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            name: self.name,
            suite: self.suite,
            cases: self.cases,
            worst_residual: self.worst,
            tolerance: self.tolerance,
        }
    }
}

pub fn run(suites: &[Suite], config: &SuiteConfig) -> Result<Vec<PropertyResult>> {
    let mut out = Vec::new();
    for &s in suites {
        let mut rng = random::rng(config.seed ^ (s as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let results = match s {
            Suite::InequalityChain => inequality_chain(&mut rng, config)?,
            Suite::Oracle => oracle(&mut rng, config)?,
            Suite::LocalUnitary => local_unitary(&mut rng, config)?,
            Suite::Monotonicity => monotonicity(&mut rng, config)?,
            Suite::Symmetry => symmetry(&mut rng, config)?,
            Suite::CqZero => cq_zero(&mut rng, config)?,
        };
        out.extend(results);
    }
    Ok(out)
}

fn random_side<R: Rng>(rng: &mut R) -> Subsystem {
    if rng.random_bool(0.5) {
        Subsystem::A
    } else {
        Subsystem::B
    }
}

/// `¼ · qfi_standard`, i.e. the variance-normalized QFI, times the mutation factor.
fn scaled_qfi(rho: &DensityMatrix, h: &crate::ComplexMatrix, config: &SuiteConfig) -> Result<f64> {
    Ok(config.qfi_scale * 0.25 * measures::qfi_standard(rho, h)?)
}

fn inequality_chain<R: Rng>(rng: &mut R, config: &SuiteConfig) -> Result<Vec<PropertyResult>> {
    let mut calib = Tracker::new(
        Suite::InequalityChain,
        "pure-state calibration",
        CHAIN_SLACK,
    );
    for _ in 0..config.calibration_states {
        let rho = random::pure_state(rng, (2, 2));
        let side = random_side(rng);
        let k = embed_local(&random::hermitian(rng, 2), side, (2, 2))?;
        calib.record((scaled_qfi(&rho, &k, config)? - skew_information(&rho, &k)?).abs());
    }
    let mut bounds = Tracker::new(
        Suite::InequalityChain,
        "skew <= qfi/4 <= 2 skew",
        CHAIN_SLACK,
    );
    for _ in 0..config.chain_states {
        let rho = random::any_state(rng, (2, 2));
        let side = random_side(rng);
        let k = embed_local(&random::hermitian(rng, 2), side, (2, 2))?;
        let skew = skew_information(&rho, &k)?;
        let f = scaled_qfi(&rho, &k, config)?;
        bounds.record((skew - f).max(f - 2.0 * skew));
    }
    Ok(vec![calib.finish(), bounds.finish()])
}

fn oracle<R: Rng>(rng: &mut R, config: &SuiteConfig) -> Result<Vec<PropertyResult>> {
    let spectrum = SpectrumSpec::qubit();
    let grid = GridSpec::default();
    let mut lqu_t = Tracker::new(Suite::Oracle, "lqu closed form vs grid", ORACLE_TOL);
    let mut qip_t = Tracker::new(Suite::Oracle, "qip closed form vs grid", ORACLE_TOL);
    let states: Vec<(DensityMatrix, Subsystem)> = (0..config.oracle_states)
        .map(|_| (random::any_state(rng, (2, 2)), random_side(rng)))
        .collect();
    for (rho, side) in &states {
        let closed = lqu(rho, *side, &spectrum)?.value;
        let pb = OrbitProblem::new(rho, *side, spectrum.clone(), Objective::Skew)?;
        lqu_t.record((closed - sphere_grid_minimize(&pb, &grid)?.value).abs());

        let closed = config.qfi_scale * qip(rho, *side, &spectrum)?.raw.value;
        let pb = OrbitProblem::new(rho, *side, spectrum.clone(), Objective::Qfi)?;
        qip_t.record((closed - sphere_grid_minimize(&pb, &grid)?.value).abs());
    }
    Ok(vec![lqu_t.finish(), qip_t.finish()])
}

fn local_unitary<R: Rng>(rng: &mut R, config: &SuiteConfig) -> Result<Vec<PropertyResult>> {
    let spectrum = SpectrumSpec::qubit();
    let mut t = Tracker::new(
        Suite::LocalUnitary,
        "lqu invariant under U_A ⊗ U_B",
        INVARIANCE_TOL,
    );
    let mut q = Tracker::new(
        Suite::LocalUnitary,
        "qip invariant under U_A ⊗ U_B",
        INVARIANCE_TOL,
    );
    for _ in 0..config.unitary_states {
        let rho = random::any_state(rng, (2, 2));
        let moved =
            rho.apply_local_unitaries(&random::unitary(rng, 2), &random::unitary(rng, 2))?;
        t.record(
            (lqu(&rho, Subsystem::A, &spectrum)?.value
                - lqu(&moved, Subsystem::A, &spectrum)?.value)
                .abs(),
        );
        let before = config.qfi_scale * qip(&rho, Subsystem::A, &spectrum)?.raw.value;
        let after = config.qfi_scale * qip(&moved, Subsystem::A, &spectrum)?.raw.value;
        q.record((before - after).abs());
    }
    Ok(vec![t.finish(), q.finish()])
}

fn monotonicity<R: Rng>(rng: &mut R, config: &SuiteConfig) -> Result<Vec<PropertyResult>> {
    let spectrum = SpectrumSpec::qubit();
    let mut t = Tracker::new(
        Suite::Monotonicity,
        "lqu_A nonincreasing under B channels",
        INVARIANCE_TOL,
    );
    for _ in 0..config.monotonicity_states {
        let rho = random::any_state(rng, (2, 2));
        let before = lqu(&rho, Subsystem::A, &spectrum)?.value;
        for _ in 0..10 {
            let s: f64 = rng.random_range(0.0..=1.0);
            for ch in [Channel::Depolarizing(s), Channel::Dephasing(s)] {
                let after = lqu(
                    &apply_channel(&rho, Subsystem::B, ch)?,
                    Subsystem::A,
                    &spectrum,
                )?
                .value;
                t.record(after - before);
            }
        }
    }
    Ok(vec![t.finish()])
}

fn symmetry<R: Rng>(rng: &mut R, config: &SuiteConfig) -> Result<Vec<PropertyResult>> {
    let spectrum = SpectrumSpec::qubit();
    let mut t = Tracker::new(Suite::Symmetry, "pure-state lqu_A = lqu_B", INVARIANCE_TOL);
    for _ in 0..config.symmetry_states {
        let rho = random::pure_state(rng, (2, 2));
        t.record(
            (lqu(&rho, Subsystem::A, &spectrum)?.value - lqu(&rho, Subsystem::B, &spectrum)?.value)
                .abs(),
        );
    }
    // one witness: residual is how far it is from showing lqu_A ≈ 0 < lqu_B
    let mut w = Tracker::new(Suite::Symmetry, "asymmetry witness", 0.0);
    let cq = cq_example();
    let a = lqu(&cq, Subsystem::A, &spectrum)?.value;
    let b = lqu(&cq, Subsystem::B, &spectrum)?.value;
    w.record((a - CQ_ZERO_TOL).max(ASYMMETRY_MIN - b));
    Ok(vec![t.finish(), w.finish()])
}

fn cq_zero<R: Rng>(rng: &mut R, config: &SuiteConfig) -> Result<Vec<PropertyResult>> {
    let spectrum = SpectrumSpec::qubit();
    let mut l = Tracker::new(
        Suite::CqZero,
        "lqu vanishes on classical-quantum states",
        CQ_ZERO_TOL,
    );
    let mut q = Tracker::new(
        Suite::CqZero,
        "qip vanishes on classical-quantum states",
        CQ_ZERO_TOL,
    );
    for _ in 0..config.cq_states {
        let rho = random::classical_quantum_state(rng, (2, 2));
        l.record(lqu(&rho, Subsystem::A, &spectrum)?.value);
        q.record(config.qfi_scale * qip(&rho, Subsystem::A, &spectrum)?.raw.value);
    }
    Ok(vec![l.finish(), q.finish()])
}
