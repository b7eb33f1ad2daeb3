//! Seeded random generators for unitaries, Kraus sets and states, used by
//! the property and acceptance tests.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::kraus::KrausSet;
use crate::linalg::{BlockDiag, ComplexMatrix, DensityState, Signature, C64};

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Uniformly random phase `e^{iθ}`.
pub fn phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Random unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    isometry(rng, n, n)
}

/// Random isometry `V` (`V†V = I`) with `rows ≥ cols`.
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "an isometry cannot increase the dimension");
    let g = gaussian_matrix(rng, rows, cols);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for c in 0..cols {
        let mut v: Vec<C64> = (0..rows).map(|r| g.get(r, c)).collect();
        // two passes keep the columns orthogonal to working precision
        for _ in 0..2 {
            for q in &basis {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        basis.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(rows, cols, |r, c| basis[c][r])
}

/// Random decomposition with `count` members. With `trace_preserving` the
/// members are the row blocks of a random isometry, so `Σ E†E = I`; `count`
/// is raised to `⌈dim σ / dim τ⌉` when needed. Otherwise the members are
/// Gaussian, scaled so that the largest eigenvalue of `Σ E†E` is a random
/// `c ∈ [0.5, 1)`.
pub fn kraus_set<R: Rng + ?Sized>(
    rng: &mut R,
    input: &Signature,
    output: &Signature,
    count: usize,
    trace_preserving: bool,
) -> KrausSet {
    let (din, dout) = (input.dim(), output.dim());
    let ops: Vec<ComplexMatrix> = if trace_preserving {
        let count = count.max(din.div_ceil(dout));
        let v = isometry(rng, count * dout, din);
        (0..count).map(|k| v.submatrix(k * dout, 0, dout, din)).collect()
    } else {
        let gs: Vec<ComplexMatrix> = (0..count).map(|_| gaussian_matrix(rng, dout, din)).collect();
        let sum = gs
            .iter()
            .fold(ComplexMatrix::zeros(din, din), |acc, g| &acc + &(&g.adjoint() * g));
        let c: f64 = rng.gen_range(0.5..1.0);
        let scale = (c / sum.max_eigenvalue()).sqrt();
        gs.iter().map(|g| g.scale_real(scale)).collect()
    };
    KrausSet::with_tol(input.clone(), output.clone(), ops, 1e-9).expect("normalized by construction")
}

/// Random density state of unit trace: `G G†` in every block, normalized.
pub fn density_state<R: Rng + ?Sized>(rng: &mut R, signature: &Signature) -> DensityState {
    let raw: Vec<ComplexMatrix> = signature
        .blocks()
        .iter()
        .map(|&n| {
            let g = gaussian_matrix(rng, n, n);
            &g * &g.adjoint()
        })
        .collect();
    let total: f64 = raw.iter().map(|b| b.trace().re).sum();
    let blocks = raw.iter().map(|b| b.scale_real(1.0 / total)).collect();
    DensityState::from_blocks(BlockDiag::new(signature.clone(), blocks).expect("shapes match"), 1e-9)
        .expect("positive by construction")
}

/// Random pure state `|ψ⟩⟨ψ|` on a single block of dimension `n`.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let v = gaussian_matrix(rng, n, 1);
    let norm = v.frobenius_norm();
    let v = v.scale_real(1.0 / norm);
    &v * &v.adjoint()
}
