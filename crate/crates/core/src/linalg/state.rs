//! Elements of `V_σ` and density states.

use super::matrix::{is_psd, ComplexMatrix, C64};
use super::signature::Signature;
use super::LinalgError;

/// A tuple of square matrices, one per signature block: an element of `V_σ`
/// with no positivity requirement.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDiag {
    signature: Signature,
    blocks: Vec<ComplexMatrix>,
}

impl BlockDiag {
    pub fn new(signature: Signature, blocks: Vec<ComplexMatrix>) -> Result<Self, LinalgError> {
        if blocks.len() != signature.block_count() {
            return Err(LinalgError::BlockCount {
                expected: signature.block_count(),
                found: blocks.len(),
            });
        }
        for (i, (b, &n)) in blocks.iter().zip(signature.blocks()).enumerate() {
            if b.shape() != (n, n) {
                return Err(LinalgError::BlockShape {
                    block: i,
                    expected: n,
                    shape: b.shape(),
                });
            }
        }
        Ok(Self { signature, blocks })
    }

    pub fn zero(signature: &Signature) -> Self {
        Self {
            blocks: signature.blocks().iter().map(|&n| ComplexMatrix::zeros(n, n)).collect(),
            signature: signature.clone(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// Sum of the block traces.
    pub fn trace(&self) -> C64 {
        self.blocks.iter().map(ComplexMatrix::trace).sum()
    }

    /// The block-diagonal operator on `H_σ`.
    pub fn to_full(&self) -> ComplexMatrix {
        ComplexMatrix::block_diagonal(&self.blocks)
    }

    /// Reads the diagonal blocks of `m`, failing if any entry outside them
    /// exceeds `tol` in modulus.
    pub fn from_full(signature: &Signature, m: &ComplexMatrix, tol: f64) -> Result<Self, LinalgError> {
        let d = signature.dim();
        if m.shape() != (d, d) {
            return Err(LinalgError::Shape {
                op: "block extraction",
                left: (d, d),
                right: m.shape(),
            });
        }
        let mut owner = Vec::with_capacity(d);
        for (i, &n) in signature.blocks().iter().enumerate() {
            owner.extend(std::iter::repeat_n(i, n));
        }
        let mut off = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                if owner[r] != owner[c] {
                    off = off.max(m.get(r, c).norm());
                }
            }
        }
        if off > tol {
            return Err(LinalgError::OffBlockMass(off));
        }
        let blocks = signature
            .blocks()
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let o = signature.offset(i);
                m.submatrix(o, o, n, n)
            })
            .collect();
        Ok(Self {
            signature: signature.clone(),
            blocks,
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.signature, other.signature, "signature mismatch");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.blocks.iter().all(|b| is_psd(b, tol))
    }
}

/// A positive element of `V_σ` with trace at most one.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState(BlockDiag);

impl DensityState {
    /// Validates Hermiticity, positivity and the trace bound within `tol`.
    pub fn new(signature: Signature, blocks: Vec<ComplexMatrix>, tol: f64) -> Result<Self, LinalgError> {
        Self::from_blocks(BlockDiag::new(signature, blocks)?, tol)
    }

    pub fn from_blocks(blocks: BlockDiag, tol: f64) -> Result<Self, LinalgError> {
        for (i, b) in blocks.blocks().iter().enumerate() {
            if !b.is_hermitian(tol) {
                return Err(LinalgError::NotHermitian { block: i });
            }
            let min = b.min_eigenvalue();
            if min < -tol {
                return Err(LinalgError::NotPositive {
                    block: i,
                    min_eigenvalue: min,
                });
            }
        }
        let tr = blocks.trace().re;
        if !(-tol..=1.0 + tol).contains(&tr) {
            return Err(LinalgError::TraceOutOfRange(tr));
        }
        Ok(Self(blocks))
    }

    /// The scalar `1` on the signature `(1)`.
    pub fn unit() -> Self {
        Self(BlockDiag {
            signature: Signature::unit(),
            blocks: vec![ComplexMatrix::identity(1)],
        })
    }

    pub fn zero(signature: &Signature) -> Self {
        Self(BlockDiag::zero(signature))
    }

    /// Pure state `|ψ⟩⟨ψ|` in block `block` of the signature.
    pub fn pure(signature: &Signature, block: usize, psi: &ComplexMatrix, tol: f64) -> Result<Self, LinalgError> {
        let mut blocks = BlockDiag::zero(signature).blocks;
        blocks[block] = psi * &psi.adjoint();
        Self::new(signature.clone(), blocks, tol)
    }

    pub fn signature(&self) -> &Signature {
        self.0.signature()
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        self.0.blocks()
    }

    pub fn as_block_diag(&self) -> &BlockDiag {
        &self.0
    }

    pub fn into_block_diag(self) -> BlockDiag {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn to_full(&self) -> ComplexMatrix {
        self.0.to_full()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }
}

/// The matrix units `e^{(i)}_{jk}` of every block, block by block and
/// row-major within a block. They span `V_σ`.
pub fn basis_elements(signature: &Signature) -> Vec<BlockDiag> {
    let mut out = Vec::new();
    for (i, &n) in signature.blocks().iter().enumerate() {
        for j in 0..n {
            for k in 0..n {
                let mut e = BlockDiag::zero(signature);
                e.blocks[i] = ComplexMatrix::unit(j, k, n);
                out.push(e);
            }
        }
    }
    out
}
