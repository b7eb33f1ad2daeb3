//! Variable-to-factor layout.
//!
//! The Hilbert space of a context `Γ` is a register of two-dimensional
//! factors. Read as a Kronecker product, most significant first, the factors
//! are the bits of `Γ` in reverse declaration order followed by its qubits in
//! declaration order. With all blocks of equal size this is exactly the
//! block-major order of the signature `Γ.signature()`: the bits spell the
//! block index and the qubits the position inside a block.
//!
//! Every permutation the denotation needs is computed here from two factor
//! lists over the same names.

use crate::lang::{Context, Kind, Name};
use crate::linalg::{permutation_matrix, ComplexMatrix};

/// The factor list of a context.
pub fn factors(ctx: &Context) -> Vec<Name> {
    let mut out: Vec<Name> = ctx.bits().into_iter().rev().cloned().collect();
    out.extend(ctx.qubits().into_iter().cloned());
    out
}

/// Factors of `ctx` with `lead` moved in front of the other variables of
/// its kind: a qubit goes right after the bits, a bit to the very front.
/// In both positions the variable is the leading factor of the primitive
/// operators (`|0⟩ ⊗ −` inside each block, or the `σ ⊕ σ` summand).
pub fn with_leading(ctx: &Context, lead: &[Name]) -> Vec<Name> {
    let rest = lead.iter().fold(ctx.clone(), |c, n| c.without(n));
    let kind = ctx.kind_of(&lead[0]).expect("leading variable is declared");
    debug_assert!(lead.iter().all(|n| ctx.kind_of(n) == Some(kind)));
    let f = factors(&rest);
    let split = match kind {
        Kind::Bit => 0,
        Kind::Qbit => rest.bits().len(),
    };
    let mut out = f[..split].to_vec();
    out.extend(lead.iter().cloned());
    out.extend_from_slice(&f[split..]);
    out
}

/// Factors of `inner` (a context without `lead`) with `lead` inserted as the
/// leading qubits, the order produced by `qbit ⊗ −` and alternation.
pub fn with_leading_qubits(inner: &Context, lead: &[Name]) -> Vec<Name> {
    let f = factors(inner);
    let split = inner.bits().len();
    let mut out = f[..split].to_vec();
    out.extend(lead.iter().cloned());
    out.extend_from_slice(&f[split..]);
    out
}

/// The permutation taking each basis vector written in the `from` order
/// to the same assignment written in the `to` order.
pub fn permutation(from: &[Name], to: &[Name]) -> ComplexMatrix {
    let n = from.len();
    assert_eq!(n, to.len(), "factor lists differ in length");
    // where each `from` factor sits in `to`
    let target: Vec<usize> = from
        .iter()
        .map(|f| {
            to.iter()
                .position(|t| t == f)
                .expect("factor lists over the same names")
        })
        .collect();
    let perm: Vec<usize> = (0..1usize << n)
        .map(|idx| {
            (0..n).fold(0usize, |acc, i| {
                let bit = (idx >> (n - 1 - i)) & 1;
                acc | bit << (n - 1 - target[i])
            })
        })
        .collect();
    permutation_matrix(&perm)
}
