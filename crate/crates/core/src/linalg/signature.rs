//! Signatures: shapes of mixed classical/quantum state spaces.

use std::fmt;

use super::matrix::{ComplexMatrix, ONE, ZERO};
use super::LinalgError;

/// A tuple of block dimensions `(n_1, …, n_s)`. The state space `V_σ` is the
/// product of the full matrix algebras `M(ℂ, n_i)`, and the underlying
/// Hilbert space `H_σ` is the direct sum of the `ℂ^{n_i}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Signature(Vec<usize>);

impl Signature {
    pub fn new(blocks: Vec<usize>) -> Result<Self, LinalgError> {
        if blocks.is_empty() {
            return Err(LinalgError::EmptySignature);
        }
        if blocks.contains(&0) {
            return Err(LinalgError::ZeroBlock);
        }
        Ok(Self(blocks))
    }

    /// The trivial signature `(1)` of the empty context.
    pub fn unit() -> Self {
        Self(vec![1])
    }

    /// `(1, 1)`, one classical bit.
    pub fn bit() -> Self {
        Self(vec![1, 1])
    }

    /// `(2)`, one qubit.
    pub fn qbit() -> Self {
        Self(vec![2])
    }

    /// A single block of dimension `n`.
    pub fn single(n: usize) -> Self {
        assert!(n > 0, "zero-dimensional block");
        Self(vec![n])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.0
    }

    pub fn block_count(&self) -> usize {
        self.0.len()
    }

    /// `Σ n_i`, the dimension of `H_σ`.
    pub fn dim(&self) -> usize {
        self.0.iter().sum()
    }

    /// Offset of block `i` inside `H_σ`.
    pub fn offset(&self, i: usize) -> usize {
        self.0[..i].iter().sum()
    }

    /// Concatenation `σ ⊕ τ`.
    pub fn dsum(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `σ ⊗ τ`: pairwise products `n_i·m_j` in lexicographic block order.
    pub fn tensor(&self, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .flat_map(|&n| other.0.iter().map(move |&m| n * m))
                .collect(),
        )
    }

    /// `qbit ⊗ σ`.
    pub fn qbit_tensor(&self) -> Self {
        Self::qbit().tensor(self)
    }

    /// The unitary identification of `ℂ^{dim σ} ⊗ ℂ^{dim τ}` (Kronecker
    /// order) with `H_{σ⊗τ}` (block-major order). It is the identity when
    /// both signatures are single blocks.
    pub fn tensor_iso(&self, other: &Self) -> ComplexMatrix {
        let dim_t = other.dim();
        let n = self.dim() * dim_t;
        let target = self.tensor(other);
        let mut perm = vec![0usize; n];
        let mut block = 0;
        for (i, &ni) in self.0.iter().enumerate() {
            for (j, &mj) in other.0.iter().enumerate() {
                let base = target.offset(block);
                for a in 0..ni {
                    for b in 0..mj {
                        let kron = (self.offset(i) + a) * dim_t + other.offset(j) + b;
                        perm[kron] = base + a * mj + b;
                    }
                }
                block += 1;
            }
        }
        permutation_matrix(&perm)
    }

    /// The isometry embedding `H_σ` as block `i` of `H_{σ⊕σ}`.
    pub fn injection(&self, i: usize) -> ComplexMatrix {
        injection(i, self)
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

pub fn dim(sig: &Signature) -> usize {
    sig.dim()
}

pub fn dsum(a: &Signature, b: &Signature) -> Signature {
    a.dsum(b)
}

pub fn tensor_sig(a: &Signature, b: &Signature) -> Signature {
    a.tensor(b)
}

pub fn qbit_tensor(a: &Signature) -> Signature {
    a.qbit_tensor()
}

/// `inj_i : H_σ → H_{σ⊕σ}` for `i ∈ {0, 1}`.
pub fn injection(i: usize, sig: &Signature) -> ComplexMatrix {
    assert!(i < 2, "injection index must be 0 or 1");
    let d = sig.dim();
    ComplexMatrix::from_fn(2 * d, d, |r, c| if r == i * d + c { ONE } else { ZERO })
}

/// Permutation matrix `P` with `P|k⟩ = |perm[k]⟩`.
pub fn permutation_matrix(perm: &[usize]) -> ComplexMatrix {
    let n = perm.len();
    ComplexMatrix::from_fn(n, n, |r, c| if perm[c] == r { ONE } else { ZERO })
}

/// Lifts `u`, acting on the listed qubits in listed order, to an operator on
/// an `n`-qubit register. Qubit 0 is the leading (most significant) factor.
pub fn embed_gate(u: &ComplexMatrix, targets: &[usize], n: usize) -> Result<ComplexMatrix, LinalgError> {
    let k = targets.len();
    if !u.is_square() || u.rows() != 1 << k {
        return Err(LinalgError::GateDimension {
            targets: k,
            shape: u.shape(),
        });
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(LinalgError::TargetOutOfRange { target: t, qubits: n });
        }
        if targets[..i].contains(&t) {
            return Err(LinalgError::DuplicateTarget(t));
        }
    }
    let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
    let sub = |x: usize| targets.iter().fold(0, |acc, &t| (acc << 1) | bit(x, t));
    let mask: usize = targets.iter().map(|&t| 1 << (n - 1 - t)).sum();
    let dim = 1 << n;
    Ok(ComplexMatrix::from_fn(dim, dim, |r, c| {
        if r & !mask == c & !mask {
            u.get(sub(r), sub(c))
        } else {
            ZERO
        }
    }))
}
