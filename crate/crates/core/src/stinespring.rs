//! Stinespring representations `T(ρ) = V†(ρ ⊗ I_A)V` of Kraus sets.
//!
//! `V : H_τ → H_σ ⊗ A` maps the output space of `T : σ → τ` into the input
//! space tensored with an ancilla `A`. From a decomposition `S` the ancilla
//! has one basis vector `|E⟩` per member and `Vψ = Σ E†ψ ⊗ |E⟩`; reading
//! the ancilla components back gives the members again.

use thiserror::Error;

use crate::kraus::{alternate, alternation_element, KrausError, KrausSet};
use crate::linalg::{basis_elements, ComplexMatrix, Signature};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StinespringError {
    #[error("the empty decomposition has no Stinespring representation in this construction")]
    EmptySet,
    #[error("representation has shape {found:?}, expected {expected:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error(transparent)]
    Kraus(#[from] KrausError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StinespringRep {
    input: Signature,
    output: Signature,
    ancilla_dim: usize,
    v: ComplexMatrix,
}

impl StinespringRep {
    pub fn new(
        input: Signature,
        output: Signature,
        ancilla_dim: usize,
        v: ComplexMatrix,
    ) -> Result<Self, StinespringError> {
        let expected = (input.dim() * ancilla_dim, output.dim());
        if v.shape() != expected || ancilla_dim == 0 {
            return Err(StinespringError::DimensionMismatch {
                expected,
                found: v.shape(),
            });
        }
        Ok(Self {
            input,
            output,
            ancilla_dim,
            v,
        })
    }

    pub fn input(&self) -> &Signature {
        &self.input
    }

    pub fn output(&self) -> &Signature {
        &self.output
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn v(&self) -> &ComplexMatrix {
        &self.v
    }

    /// `V†(m ⊗ I_A)V`.
    pub fn channel(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let lifted = m.tensor(&ComplexMatrix::identity(self.ancilla_dim));
        ComplexMatrix::product([&self.v.adjoint(), &lifted, &self.v]).expect("nonempty")
    }

    /// `(I ⊗ ⟨k|)V`, the adjoint of the `k`-th Kraus member.
    fn component(&self, k: usize) -> ComplexMatrix {
        let bra = ComplexMatrix::ket(k, self.ancilla_dim).adjoint();
        &ComplexMatrix::identity(self.input.dim()).tensor(&bra) * &self.v
    }
}

/// `V = Σ_k E_k† ⊗ |k⟩` with `k` following the canonical member order.
pub fn to_stinespring(s: &KrausSet) -> Result<StinespringRep, StinespringError> {
    if s.is_empty() {
        return Err(StinespringError::EmptySet);
    }
    build(s.input(), s.output(), s.ops().iter().cloned())
}

fn build(
    input: &Signature,
    output: &Signature,
    members: impl ExactSizeIterator<Item = ComplexMatrix>,
) -> Result<StinespringRep, StinespringError> {
    let a = members.len();
    let v = members
        .enumerate()
        .fold(ComplexMatrix::zeros(input.dim() * a, output.dim()), |acc, (k, e)| {
            &acc + &e.adjoint().tensor(&ComplexMatrix::ket(k, a))
        });
    StinespringRep::new(input.clone(), output.clone(), a, v)
}

/// Checks `V†(ρ ⊗ I_A)V = S(ρ)` on every spanning element of `V_σ`.
pub fn verify_stinespring(s: &KrausSet, rep: &StinespringRep, tol: f64) -> Result<bool, StinespringError> {
    let expected = (s.input().dim() * rep.ancilla_dim, s.output().dim());
    if rep.input != *s.input() || rep.output != *s.output() || rep.v.shape() != expected {
        return Err(StinespringError::DimensionMismatch {
            expected,
            found: rep.v.shape(),
        });
    }
    Ok(basis_elements(s.input()).iter().all(|e| {
        let full = e.to_full();
        rep.channel(&full).approx_eq(&s.apply_full(&full), tol)
    }))
}

/// Reads off `E_k = ((I ⊗ ⟨k|)V)†` for each ancilla basis vector.
pub fn from_stinespring(rep: &StinespringRep) -> Result<KrausSet, StinespringError> {
    let ops = (0..rep.ancilla_dim).map(|k| rep.component(k).adjoint());
    Ok(KrausSet::new(rep.input.clone(), rep.output.clone(), ops)?)
}

/// The representation `(A' ⊗ A, W)` of `S • T` with
/// `Wψ = Σ Alt(Ê, F̂)†ψ ⊗ |F⟩ ⊗ |E⟩`; the composite ancilla index is
/// `index(F)·|S| + index(E)`.
pub fn alternation_stinespring(s: &KrausSet, t: &KrausSet) -> Result<StinespringRep, StinespringError> {
    if s.is_empty() || t.is_empty() {
        return Err(StinespringError::EmptySet);
    }
    // signature checks
    let alt = alternate(s, t)?;
    let (input, output) = (s.input(), s.output());
    let members: Vec<ComplexMatrix> = t
        .ops()
        .iter()
        .flat_map(|f| {
            s.ops()
                .iter()
                .map(move |e| alternation_element(input, output, e, f, s.len(), t.len()))
        })
        .collect();
    build(alt.input(), alt.output(), members.into_iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kraus::ext_equal;
    use crate::linalg::DensityState;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn mat(rows: usize, cols: usize, v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(rows, cols, v)
    }
    fn q() -> Signature {
        Signature::qbit()
    }
    fn set(ops: &[ComplexMatrix]) -> KrausSet {
        KrausSet::new(q(), q(), ops.to_vec()).unwrap()
    }
    fn x() -> ComplexMatrix {
        mat(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }
    fn z() -> ComplexMatrix {
        mat(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }
    fn h() -> ComplexMatrix {
        mat(2, 2, &[1.0, 1.0, 1.0, -1.0]).scale_real(FRAC_1_SQRT_2)
    }

    #[test]
    fn singleton_unitary() {
        let s = set(&[h()]);
        let rep = to_stinespring(&s).unwrap();
        assert_eq!(rep.ancilla_dim(), 1);
        assert_eq!(rep.v(), &h().adjoint());
        assert!(verify_stinespring(&s, &rep, 1e-12).unwrap());
    }

    #[test]
    fn dephasing_representation() {
        let p0 = ComplexMatrix::projector(0, 2);
        let p1 = ComplexMatrix::projector(1, 2);
        let s = set(&[p0.clone(), p1.clone()]);
        let rep = to_stinespring(&s).unwrap();
        assert_eq!(rep.ancilla_dim(), 2);
        let want = &p0.tensor(&ComplexMatrix::ket(0, 2)) + &p1.tensor(&ComplexMatrix::ket(1, 2));
        assert_eq!(rep.v(), &want);
        assert!(verify_stinespring(&s, &rep, 1e-12).unwrap());
        let rho = mat(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert_eq!(rep.channel(&rho), mat(2, 2, &[0.5, 0.0, 0.0, 0.5]));
        assert!(ext_equal(&from_stinespring(&rep).unwrap(), &s, 1e-12).unwrap());
    }

    #[test]
    fn isometric_for_unital_pair() {
        let s = set(&[x().scale_real(FRAC_1_SQRT_2), z().scale_real(FRAC_1_SQRT_2)]);
        let rep = to_stinespring(&s).unwrap();
        assert_eq!(rep.ancilla_dim(), 2);
        assert!((&rep.v().adjoint() * rep.v()).approx_eq(&ComplexMatrix::identity(2), 1e-12));
    }

    #[test]
    fn wrong_channel_fails_verification() {
        let id = KrausSet::identity(&q());
        let rep = StinespringRep::new(q(), q(), 1, x().adjoint()).unwrap();
        assert!(!verify_stinespring(&id, &rep, 1e-9).unwrap());
        let bit = Signature::bit();
        let bad = StinespringRep::new(bit.clone(), bit, 2, ComplexMatrix::zeros(4, 2)).unwrap();
        assert!(matches!(
            verify_stinespring(&id, &bad, 1e-9),
            Err(StinespringError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn round_trips() {
        let s = set(&[h()]);
        assert_eq!(from_stinespring(&to_stinespring(&s).unwrap()).unwrap(), s);
        let rep = StinespringRep::new(q(), q(), 1, h().adjoint().tensor(&ComplexMatrix::ket(0, 1))).unwrap();
        assert_eq!(from_stinespring(&rep).unwrap(), s);
    }

    #[test]
    fn empty_set_is_rejected() {
        let empty = KrausSet::zero(&q(), &q());
        assert_eq!(to_stinespring(&empty), Err(StinespringError::EmptySet));
        assert_eq!(
            alternation_stinespring(&empty, &KrausSet::identity(&q())),
            Err(StinespringError::EmptySet)
        );
    }

    #[test]
    fn from_stinespring_checks_trace_condition() {
        let rep = StinespringRep::new(q(), q(), 1, ComplexMatrix::identity(2).scale_real(2.0)).unwrap();
        assert!(matches!(
            from_stinespring(&rep),
            Err(StinespringError::Kraus(KrausError::TraceConditionViolated { .. }))
        ));
    }

    #[test]
    fn alternation_representations() {
        let id = KrausSet::identity(&q());
        let w = alternation_stinespring(&id, &set(&[x()])).unwrap();
        assert_eq!(w.ancilla_dim(), 1);
        let cnot = mat(4, 4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.]);
        assert_eq!(w.v(), &cnot.adjoint());

        let deph = set(&[ComplexMatrix::projector(0, 2), ComplexMatrix::projector(1, 2)]);
        let w = alternation_stinespring(&id, &deph).unwrap();
        assert_eq!(w.ancilla_dim(), 2);
        assert!(verify_stinespring(&alternate(&id, &deph).unwrap(), &w, 1e-12).unwrap());

        let rho = DensityState::pure(
            &Signature::single(4),
            0,
            &ComplexMatrix::from_real(4, 1, &[0.5; 4]),
            1e-9,
        )
        .unwrap();
        let via_w = w.channel(&rho.to_full());
        let direct = alternate(&id, &deph).unwrap().apply(&rho).unwrap();
        assert!(via_w.approx_eq(&direct.to_full(), 1e-12));
    }
}
