//! Complex dense linear algebra and signature arithmetic.

mod matrix;
mod signature;
mod state;

pub use matrix::{adjoint, is_psd, tensor, ComplexMatrix, C64, ONE, ZERO};
pub use signature::{dim, dsum, embed_gate, injection, permutation_matrix, qbit_tensor, tensor_sig, Signature};
pub use state::{basis_elements, BlockDiag, DensityState};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("expected {rows}x{cols} = {} entries, found {found}", rows * cols)]
    EntryCount { rows: usize, cols: usize, found: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("cannot {op} matrices of shapes {left:?} and {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("signature must have at least one block")]
    EmptySignature,
    #[error("signature blocks must be positive")]
    ZeroBlock,
    #[error("gate of shape {shape:?} cannot act on {targets} qubit(s)")]
    GateDimension { targets: usize, shape: (usize, usize) },
    #[error("target qubit {target} out of range for a {qubits}-qubit register")]
    TargetOutOfRange { target: usize, qubits: usize },
    #[error("qubit {0} listed twice as a target")]
    DuplicateTarget(usize),
    #[error("expected {expected} blocks, found {found}")]
    BlockCount { expected: usize, found: usize },
    #[error("block {block} should be {expected}x{expected}, found {shape:?}")]
    BlockShape {
        block: usize,
        expected: usize,
        shape: (usize, usize),
    },
    #[error("operator has off-block-diagonal entries of modulus {0:.3e}")]
    OffBlockMass(f64),
    #[error("block {block} is not Hermitian")]
    NotHermitian { block: usize },
    #[error("block {block} has negative eigenvalue {min_eigenvalue:.6e}")]
    NotPositive { block: usize, min_eigenvalue: f64 },
    #[error("total trace {0} outside [0, 1]")]
    TraceOutOfRange(f64),
}
