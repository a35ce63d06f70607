//! Validated bipartite density matrices and the probe-state factories.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, check_psd, eig_hermitian, embed_local, partial_trace, tensor_product, ComplexMatrix,
    Subsystem, C64, ONE, ZERO,
};

/// Tolerance on `|Tr ρ - 1|`.
pub const TRACE_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite operator on `A ⊗ B`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: (usize, usize),
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `matrix` as a state on a `dims.0 x dims.1` space.
    ///
    /// Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero and the trace is
    /// renormalized.
    pub fn new(matrix: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 || matrix.dim() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch {
                expected: dims.0 * dims.1,
                found: matrix.dim(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::Parse("matrix has non-finite entries".into()));
        }
        matrix.check_hermitian()?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let eig = eig_hermitian(&matrix)?;
        check_psd(&eig.eigenvalues)?;
        let matrix = if eig.eigenvalues[0] < 0.0 {
            let total: f64 = eig.eigenvalues.iter().map(|l| l.max(0.0)).sum();
            eig.map(|l| C64::new(l.max(0.0) / total, 0.0))
        } else {
            matrix
        };
        Ok(Self { dims, matrix })
    }

    pub fn from_pure(v: &DVector<C64>, dims: (usize, usize)) -> Result<Self> {
        Self::new(ComplexMatrix::projector(v), dims)
    }

    pub fn maximally_mixed(dims: (usize, usize)) -> Self {
        let d = dims.0 * dims.1;
        Self {
            dims,
            matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
        }
    }

    pub fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        Self::new(tensor_product(a, b), (a.dim(), b.dim()))
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn subsystem_dim(&self, side: Subsystem) -> usize {
        match side {
            Subsystem::A => self.dims.0,
            Subsystem::B => self.dims.1,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Reduced state on `side`.
    pub fn reduced(&self, side: Subsystem) -> ComplexMatrix {
        partial_trace(&self.matrix, self.dims, side).expect("dims validated at construction")
    }

    /// `U ρ U†` for a unitary on the full space.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        let m = &(u * &self.matrix) * &u.adjoint();
        Self::new(m.hermitian_part(), self.dims)
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
    pub fn apply_local_unitaries(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self> {
        if ua.dim() != self.dims.0 || ub.dim() != self.dims.1 {
            return Err(Error::DimensionMismatch {
                expected: self.dims.0 * self.dims.1,
                found: ua.dim() * ub.dim(),
            });
        }
        self.conjugate(&tensor_product(ua, ub))
    }

    /// JSON form `{"dims":[da,db],"matrix":[[re,im],...]}`, row-major.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateFile::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_state()
    }
}

/// On-disk state schema shared with the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub matrix: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn into_state(self) -> Result<DensityMatrix> {
        let [da, db] = self.dims;
        let d = da * db;
        if self.matrix.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: self.matrix.len(),
            });
        }
        let entries: Vec<C64> = self
            .matrix
            .iter()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        DensityMatrix::new(ComplexMatrix::from_row_major(d, &entries)?, (da, db))
    }
}

impl From<&DensityMatrix> for StateFile {
    fn from(rho: &DensityMatrix) -> Self {
        StateFile {
            dims: [rho.dims.0, rho.dims.1],
            matrix: rho
                .matrix
                .row_major()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
        });
    }
    Ok(())
}

/// One-parameter Bell-diagonal probe, written out entrywise.
pub fn make_rho_q(p: f64) -> Result<DensityMatrix> {
    check_p(p)?;
    let d = (1.0 + p) / 4.0;
    let m = (1.0 - p) / 4.0;
    let corner = p * (p + 1.0) / 4.0;
    let inner = -(p - 1.0) * p / 4.0;
    let matrix = ComplexMatrix::from_real_rows([
        [d, 0.0, 0.0, corner],
        [0.0, m, inner, 0.0],
        [0.0, inner, m, 0.0],
        [corner, 0.0, 0.0, d],
    ]);
    DensityMatrix::new(matrix, (2, 2))
}

/// The same probe prepared by the circuit: two qubits in `(1 + p σz)/2`,
/// Hadamard on A, then CNOT with A as control.
pub fn make_rho_q_circuit(p: f64) -> Result<DensityMatrix> {
    check_p(p)?;
    let local = ComplexMatrix::from_real_diagonal(&[(1.0 + p) / 2.0, (1.0 - p) / 2.0]);
    let input = DensityMatrix::product(&local, &local)?;
    let after_h = apply_gate(&input, Gate::Hadamard, &[0])?;
    apply_gate(&after_h, Gate::Cnot, &[0, 1])
}

/// The classically correlated probe with the same purity as [`make_rho_q`].
pub fn make_rho_c(p: f64) -> Result<DensityMatrix> {
    check_p(p)?;
    let (a, b, c) = (0.25, p * p / 4.0, p / 4.0);
    let matrix =
        ComplexMatrix::from_real_rows([[a, b, c, c], [b, a, c, c], [c, c, a, b], [c, c, b, a]]);
    DensityMatrix::new(matrix, (2, 2))
}

/// `|Φ+> = (|00> + |11>)/√2`.
pub fn bell_phi_plus() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = DVector::from_vec(vec![C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)]);
    DensityMatrix::from_pure(&v, (2, 2)).expect("Bell state is valid")
}

/// `½|0><0| ⊗ |0><0| + ½|1><1| ⊗ |+><+|`: zero discord from A, nonzero from B.
pub fn cq_example() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let spec = ClassicalQuantumSpec {
        weights: vec![0.5, 0.5],
        basis: vec![
            DVector::from_vec(vec![ONE, ZERO]),
            DVector::from_vec(vec![ZERO, ONE]),
        ],
        conditionals: vec![
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
            ComplexMatrix::projector(&DVector::from_vec(vec![C64::new(s, 0.0), C64::new(s, 0.0)])),
        ],
    };
    make_classical_quantum(&spec).expect("valid preset")
}

/// `Σ c_i |i><i|_A ⊗ ρ_B^i`.
#[derive(Clone, Debug)]
pub struct ClassicalQuantumSpec {
    pub weights: Vec<f64>,
    pub basis: Vec<DVector<C64>>,
    pub conditionals: Vec<ComplexMatrix>,
}

impl ClassicalQuantumSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.weights.len();
        if n == 0 || self.basis.len() != n || self.conditionals.len() != n {
            return Err(Error::InvalidSpec(format!(
                "need equal, nonzero counts of weights ({}), basis vectors ({}) and conditional states ({})",
                n,
                self.basis.len(),
                self.conditionals.len()
            )));
        }
        if self.weights.iter().any(|&c| c.is_nan() || c < 0.0) {
            return Err(Error::InvalidSpec("weights must be nonnegative".into()));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpec(format!("weights sum to {total}, not 1")));
        }
        let da = self.basis[0].len();
        if self.basis.iter().any(|v| v.len() != da) || n > da {
            return Err(Error::InvalidSpec(
                "basis vectors must share a dimension ≥ their count".into(),
            ));
        }
        for (i, u) in self.basis.iter().enumerate() {
            for (j, v) in self.basis.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                if (u.dotc(v) - C64::new(expected, 0.0)).norm() > 1e-10 {
                    return Err(Error::InvalidSpec(format!(
                        "basis not orthonormal at ({i}, {j})"
                    )));
                }
            }
        }
        let db = self.conditionals[0].dim();
        for (i, rb) in self.conditionals.iter().enumerate() {
            if rb.dim() != db {
                return Err(Error::InvalidSpec(
                    "conditional states differ in dimension".into(),
                ));
            }
            DensityMatrix::new(rb.clone(), (1, db))
                .map_err(|e| Error::InvalidSpec(format!("conditional state {i}: {e}")))?;
        }
        Ok(())
    }
}

pub fn make_classical_quantum(spec: &ClassicalQuantumSpec) -> Result<DensityMatrix> {
    spec.validate()?;
    let da = spec.basis[0].len();
    let db = spec.conditionals[0].dim();
    let mut acc = ComplexMatrix::zeros(da * db);
    for ((&c, v), rb) in spec.weights.iter().zip(&spec.basis).zip(&spec.conditionals) {
        let term = tensor_product(&ComplexMatrix::projector(v), rb).scale_real(c);
        acc = &acc + &term;
    }
    DensityMatrix::new(acc.hermitian_part(), (da, db))
}

/// `Tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().trace_product(rho.matrix()).re
}

/// Von Neumann entropy in bits of any density operator.
pub fn entropy_bits(m: &ComplexMatrix) -> f64 {
    let eig = eig_hermitian(m).expect("density operators are Hermitian");
    eig.eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_bits(rho.matrix())
}

/// Fixed gates of the probe-preparation circuit.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    Hadamard,
    /// Controlled-NOT; targets are `[control, target]`.
    Cnot,
}

impl Gate {
    pub fn arity(self) -> usize {
        match self {
            Gate::Hadamard => 1,
            Gate::Cnot => 2,
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Gate::Hadamard => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                ComplexMatrix::from_real_rows([[s, s], [s, -s]])
            }
            Gate::Cnot => ComplexMatrix::from_real_rows([
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 1.0, 0.0],
            ]),
        }
    }
}

/// `U ρ U†` for a gate acting on qubits of a two-qubit state (0 = A, 1 = B).
pub fn apply_gate(rho: &DensityMatrix, gate: Gate, targets: &[usize]) -> Result<DensityMatrix> {
    if rho.dims() != (2, 2) {
        return Err(Error::BadTarget(format!(
            "gates act on two-qubit states, got dims {:?}",
            rho.dims()
        )));
    }
    if targets.len() != gate.arity() || targets.iter().any(|&t| t > 1) {
        return Err(Error::BadTarget(format!(
            "{gate:?} cannot act on qubits {targets:?}"
        )));
    }
    let u = match (gate, targets) {
        (Gate::Hadamard, [0]) => tensor_product(&gate.matrix(), &linalg::pauli::identity()),
        (Gate::Hadamard, _) => tensor_product(&linalg::pauli::identity(), &gate.matrix()),
        (Gate::Cnot, [0, 1]) => gate.matrix(),
        (Gate::Cnot, [1, 0]) => ComplexMatrix::from_real_rows([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ]),
        _ => {
            return Err(Error::BadTarget(format!(
                "control and target coincide: {targets:?}"
            )))
        }
    };
    rho.conjugate(&u)
}

/// Local noise on one subsystem, strength in `[0, 1]`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Channel {
    /// `ρ -> (1-s) ρ + s Tr_side(ρ) ⊗ 1/d`.
    Depolarizing(f64),
    /// `ρ -> (1-s) ρ + s Σ_k P_k ρ P_k` with computational-basis projectors.
    Dephasing(f64),
}

pub fn apply_channel(
    rho: &DensityMatrix,
    side: Subsystem,
    channel: Channel,
) -> Result<DensityMatrix> {
    let s = match channel {
        Channel::Depolarizing(s) | Channel::Dephasing(s) => s,
    };
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange {
            name: "channel strength",
            value: s,
        });
    }
    let d = rho.subsystem_dim(side);
    let noisy = match channel {
        Channel::Depolarizing(_) => {
            let rest = rho.reduced(side.other());
            let mixed = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
            match side {
                Subsystem::A => tensor_product(&mixed, &rest),
                Subsystem::B => tensor_product(&rest, &mixed),
            }
        }
        Channel::Dephasing(_) => {
            let mut acc = ComplexMatrix::zeros(rho.dim());
            for k in 0..d {
                let mut diag = vec![0.0; d];
                diag[k] = 1.0;
                let pk = embed_local(&ComplexMatrix::from_real_diagonal(&diag), side, rho.dims())?;
                acc = &acc + &(&(&pk * rho.matrix()) * &pk);
            }
            acc
        }
    };
    let mixed = &rho.matrix().scale_real(1.0 - s) + &noisy.scale_real(s);
    DensityMatrix::new(mixed.hermitian_part(), rho.dims())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn rho_q_endpoints() {
        let r0 = make_rho_q(0.0).unwrap();
        assert!(
            r0.matrix()
                .max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25))
                < 1e-15
        );
        let r1 = make_rho_q(1.0).unwrap();
        assert!(r1.matrix().max_abs_diff(bell_phi_plus().matrix()) < 1e-15);
    }

    #[test]
    fn rho_q_circuit_matches_explicit_matrix() {
        for p in [0.0, 0.1, 0.5, 0.77, 1.0] {
            let a = make_rho_q(p).unwrap();
            let b = make_rho_q_circuit(p).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn rho_c_endpoints() {
        let r0 = make_rho_c(0.0).unwrap();
        assert!(
            r0.matrix()
                .max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25))
                < 1e-15
        );
        let r1 = make_rho_c(1.0).unwrap();
        let eig = eig_hermitian(r1.matrix()).unwrap();
        assert!((eig.eigenvalues[3] - 1.0).abs() < 1e-12);
        assert!(eig.eigenvalues[..3].iter().all(|l| l.abs() < 1e-12));
    }

    #[test]
    fn factories_reject_out_of_range() {
        for p in [-0.01, 1.01, f64::NAN] {
            assert!(matches!(make_rho_q(p), Err(Error::OutOfRange { .. })));
            assert!(matches!(make_rho_c(p), Err(Error::OutOfRange { .. })));
        }
    }

    #[test]
    fn purities_match_closed_form() {
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let expected = 0.25 * (1.0 + p * p).powi(2);
            assert!((purity(&make_rho_q(p).unwrap()) - expected).abs() < 1e-12);
            assert!((purity(&make_rho_c(p).unwrap()) - expected).abs() < 1e-12);
        }
        assert!((purity(&bell_phi_plus()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropies() {
        assert!(von_neumann_entropy(&bell_phi_plus()).abs() < 1e-12);
        assert!((entropy_bits(&ComplexMatrix::identity(2).scale_real(0.5)) - 1.0).abs() < 1e-12);
        let d = ComplexMatrix::from_real_diagonal(&[0.75, 0.25]);
        let expected = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((entropy_bits(&d) - expected).abs() < 1e-12);
        assert!((expected - (2.0 - 0.75 * 3f64.log2())).abs() < 1e-15);
    }

    #[test]
    fn classical_quantum_factory() {
        let rb = random::qubit_state(&mut random::rng(3));
        let single = ClassicalQuantumSpec {
            weights: vec![1.0],
            basis: vec![DVector::from_vec(vec![ONE, ZERO])],
            conditionals: vec![rb.clone()],
        };
        let rho = make_classical_quantum(&single).unwrap();
        let expected = tensor_product(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0]), &rb);
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-15);

        let two = ClassicalQuantumSpec {
            weights: vec![0.5, 0.5],
            basis: vec![
                DVector::from_vec(vec![ONE, ZERO]),
                DVector::from_vec(vec![ZERO, ONE]),
            ],
            conditionals: vec![
                ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
                ComplexMatrix::from_real_diagonal(&[0.0, 1.0]),
            ],
        };
        let rho = make_classical_quantum(&two).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn classical_quantum_spec_errors() {
        let mut spec = ClassicalQuantumSpec {
            weights: vec![0.6, 0.5],
            basis: vec![
                DVector::from_vec(vec![ONE, ZERO]),
                DVector::from_vec(vec![ZERO, ONE]),
            ],
            conditionals: vec![ComplexMatrix::identity(2).scale_real(0.5); 2],
        };
        assert!(matches!(
            make_classical_quantum(&spec),
            Err(Error::InvalidSpec(_))
        ));
        spec.weights = vec![0.5, 0.5];
        spec.basis[1] = DVector::from_vec(vec![ONE, ZERO]);
        assert!(matches!(
            make_classical_quantum(&spec),
            Err(Error::InvalidSpec(_))
        ));
        spec.basis[1] = DVector::from_vec(vec![ZERO, ONE]);
        spec.conditionals[1] = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(
            make_classical_quantum(&spec),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn gates() {
        let mut rng = random::rng(11);
        let rho = random::any_state(&mut rng, (2, 2));
        for q in [0, 1] {
            let twice = apply_gate(
                &apply_gate(&rho, Gate::Hadamard, &[q]).unwrap(),
                Gate::Hadamard,
                &[q],
            )
            .unwrap();
            assert!(twice.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        }
        let ten = ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 1.0, 0.0]);
        let out = apply_gate(
            &DensityMatrix::new(ten, (2, 2)).unwrap(),
            Gate::Cnot,
            &[0, 1],
        )
        .unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 0.0, 1.0]))
                < 1e-15
        );

        assert!(matches!(
            apply_gate(&rho, Gate::Cnot, &[0, 0]),
            Err(Error::BadTarget(_))
        ));
        assert!(matches!(
            apply_gate(&rho, Gate::Hadamard, &[2]),
            Err(Error::BadTarget(_))
        ));
        assert!(matches!(
            apply_gate(&rho, Gate::Hadamard, &[0, 1]),
            Err(Error::BadTarget(_))
        ));
        for g in [Gate::Hadamard, Gate::Cnot] {
            assert!(linalg::unitarity_residual(&g.matrix()) < 1e-12);
        }
    }

    #[test]
    fn validation_errors() {
        let not_herm = ComplexMatrix::from_real_rows([[0.5, 0.1], [0.0, 0.5]]);
        assert!(matches!(
            DensityMatrix::new(not_herm, (1, 2)),
            Err(Error::NotHermitian(_))
        ));
        let bad_trace = ComplexMatrix::from_real_diagonal(&[0.5, 0.6]);
        assert!(matches!(
            DensityMatrix::new(bad_trace, (1, 2)),
            Err(Error::InvalidTrace(_))
        ));
        let neg = ComplexMatrix::from_real_diagonal(&[1.1, -0.1]);
        assert!(matches!(
            DensityMatrix::new(neg, (1, 2)),
            Err(Error::NegativeEigenvalue(_))
        ));
        let wrong_dims = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(matches!(
            DensityMatrix::new(wrong_dims, (2, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0 + 5e-11, -5e-11]);
        let rho = DensityMatrix::new(m, (1, 2)).unwrap();
        let eig = eig_hermitian(rho.matrix()).unwrap();
        assert!(eig.eigenvalues[0] >= 0.0);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let rho = make_rho_q(0.3).unwrap();
        let back = DensityMatrix::from_json(&rho.to_json()).unwrap();
        assert_eq!(back, rho);
        let bad = r#"{"dims":[1,2],"matrix":[[1.2,0],[0,0],[0,0],[-0.2,0]]}"#;
        assert!(matches!(
            DensityMatrix::from_json(bad),
            Err(Error::NegativeEigenvalue(_))
        ));
        assert!(matches!(
            DensityMatrix::from_json("{"),
            Err(Error::Parse(_))
        ));
        let short = r#"{"dims":[2,2],"matrix":[[1,0]]}"#;
        assert!(matches!(
            DensityMatrix::from_json(short),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn channels_keep_states_valid() {
        let rho = make_rho_q(0.8).unwrap();
        for ch in [Channel::Depolarizing(1.0), Channel::Dephasing(1.0)] {
            let out = apply_channel(&rho, Subsystem::B, ch).unwrap();
            assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
            // B-side channels leave the A marginal untouched.
            assert!(
                out.reduced(Subsystem::A)
                    .max_abs_diff(&rho.reduced(Subsystem::A))
                    < 1e-14
            );
        }
        let full = apply_channel(&rho, Subsystem::B, Channel::Depolarizing(1.0)).unwrap();
        let expected = tensor_product(
            &rho.reduced(Subsystem::A),
            &ComplexMatrix::identity(2).scale_real(0.5),
        );
        assert!(full.matrix().max_abs_diff(&expected) < 1e-14);
        assert!(apply_channel(&rho, Subsystem::B, Channel::Dephasing(1.5)).is_err());
    }
}
