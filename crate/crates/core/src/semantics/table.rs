//! The primitive decompositions on bare signatures: allocation, discarding,
//! merging, measurement and gates.

use crate::kraus::{KrausError, KrausSet};
use crate::linalg::{ComplexMatrix, Signature};

fn lift(sigma: &Signature, kron: &ComplexMatrix, input_is_tensor: bool) -> ComplexMatrix {
    let iso = Signature::qbit().tensor_iso(sigma);
    if input_is_tensor {
        kron * &iso.adjoint()
    } else {
        &iso * kron
    }
}

/// `⟦new qbit q := 0⟧ = {|0⟩ ⊗ −} : σ → qbit⊗σ`.
pub fn new_qbit(sigma: &Signature) -> Result<KrausSet, KrausError> {
    let op = ComplexMatrix::ket(0, 2).tensor(&ComplexMatrix::identity(sigma.dim()));
    KrausSet::new(sigma.clone(), sigma.qbit_tensor(), [lift(sigma, &op, false)])
}

/// `⟦new bit b := 0⟧ = {inj₀} : σ → σ⊕σ`.
pub fn new_bit(sigma: &Signature) -> Result<KrausSet, KrausError> {
    KrausSet::new(sigma.clone(), sigma.dsum(sigma), [sigma.injection(0)])
}

/// `⟦discard q⟧ = {⟨0| ⊗ id, ⟨1| ⊗ id} : qbit⊗σ → σ`.
pub fn discard_qbit(sigma: &Signature) -> Result<KrausSet, KrausError> {
    let id = ComplexMatrix::identity(sigma.dim());
    let ops = (0..2).map(|i| lift(sigma, &ComplexMatrix::ket(i, 2).adjoint().tensor(&id), true));
    KrausSet::new(sigma.qbit_tensor(), sigma.clone(), ops)
}

/// `⟦merge⟧ = {inj₀†, inj₁†} : σ⊕σ → σ`; also the discard of a bit.
pub fn merge(sigma: &Signature) -> Result<KrausSet, KrausError> {
    let ops = (0..2).map(|i| sigma.injection(i).adjoint());
    KrausSet::new(sigma.dsum(sigma), sigma.clone(), ops)
}

/// `⟦measure q⟧ = {inj₀ ∘ Π₀, inj₁ ∘ Π₁} : qbit⊗σ → (qbit⊗σ)⊕(qbit⊗σ)`.
pub fn measure(sigma: &Signature) -> Result<KrausSet, KrausError> {
    let t = sigma.qbit_tensor();
    let iso = Signature::qbit().tensor_iso(sigma);
    let id = ComplexMatrix::identity(sigma.dim());
    let ops = (0..2).map(|i| {
        let proj = ComplexMatrix::product([&iso, &ComplexMatrix::projector(i, 2).tensor(&id), &iso.adjoint()])
            .expect("nonempty");
        &t.injection(i) * &proj
    });
    KrausSet::new(t.clone(), t.dsum(&t), ops)
}

/// `⟦q̄ *= U⟧ = {U}` on a single block.
pub fn gate(u: &ComplexMatrix) -> Result<KrausSet, KrausError> {
    let sig = Signature::single(u.rows());
    KrausSet::new(sig.clone(), sig, [u.clone()])
}
