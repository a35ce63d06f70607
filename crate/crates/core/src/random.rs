//! Seeded random states, observables and unitaries for tests and the check suite.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::states::DensityMatrix;

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng as Rng64;

pub fn rng(seed: u64) -> Rng64 {
    Rng64::seed_from_u64(seed)
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniformly distributed unit vector in `C^dim`.
pub fn pure_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| gaussian_c64(rng));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Uniform unit vector in `R^3`.
pub fn unit_direction<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Random pure state `|ψ><ψ|` on `dims`.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, dims: (usize, usize)) -> DensityMatrix {
    let v = pure_vector(rng, dims.0 * dims.1);
    DensityMatrix::from_pure(&v, dims).expect("normalized vector")
}

/// Induced-measure mixed state `G G† / Tr(G G†)` with a `d x rank` Ginibre matrix.
pub fn mixed_state<R: Rng + ?Sized>(
    rng: &mut R,
    dims: (usize, usize),
    rank: usize,
) -> DensityMatrix {
    let d = dims.0 * dims.1;
    let g = nalgebra::DMatrix::from_fn(d, rank, |_, _| gaussian_c64(rng));
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    let m = ComplexMatrix::from_matrix(gg / C64::new(tr, 0.0)).expect("square");
    DensityMatrix::new(m.hermitian_part(), dims).expect("Ginibre states are valid")
}

/// Mixed state with a rank drawn uniformly from `1..=d`.
pub fn any_state<R: Rng + ?Sized>(rng: &mut R, dims: (usize, usize)) -> DensityMatrix {
    let rank = rng.random_range(1..=dims.0 * dims.1);
    mixed_state(rng, dims, rank)
}

/// Random Hermitian matrix with Gaussian entries.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian_c64(rng));
    g.hermitian_part()
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<DVector<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = DVector::from_fn(dim, |_, _| gaussian_c64(rng));
        for c in &cols {
            let proj = c.dotc(&v);
            v -= c * proj;
        }
        let n = v.norm();
        if n > 1e-8 {
            cols.push(v / C64::new(n, 0.0));
        }
    }
    let mut m = nalgebra::DMatrix::from_element(dim, dim, ZERO);
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    ComplexMatrix::from_matrix(m).expect("square")
}

/// Random single-qubit density matrix with Bloch vector strictly inside the ball.
pub fn qubit_state<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let n = unit_direction(rng);
    let r: f64 = rng.random_range(0.0..1.0);
    let bloch = crate::linalg::pauli::along([r * n[0], r * n[1], r * n[2]]);
    (&ComplexMatrix::identity(2) + &bloch).scale_real(0.5)
}

/// Random classical-quantum state on `dims`: weights from normalized uniforms,
/// a Haar-random basis of A, and random conditional states of B.
pub fn classical_quantum_state<R: Rng + ?Sized>(
    rng: &mut R,
    dims: (usize, usize),
) -> DensityMatrix {
    use crate::states::{make_classical_quantum, ClassicalQuantumSpec};
    let (da, db) = dims;
    let raw: Vec<f64> = (0..da).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let u = unitary(rng, da);
    let mut spec = ClassicalQuantumSpec {
        weights: raw.iter().map(|w| w / total).collect(),
        basis: (0..da)
            .map(|k| u.as_matrix().column(k).into_owned())
            .collect(),
        conditionals: (0..da)
            .map(|_| any_state(rng, (1, db)).matrix().clone())
            .collect(),
    };
    // normalized weights can miss unit sum by an ulp
    let head: f64 = spec.weights[..da - 1].iter().sum();
    spec.weights[da - 1] = 1.0 - head;
    make_classical_quantum(&spec).expect("random spec is valid")
}
