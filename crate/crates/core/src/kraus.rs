//! Kraus decompositions as morphisms between signatures.
//!
//! A [`KrausSet`] is a finite set of nonzero operators `E : H_σ → H_τ` with
//! `Σ E†E ≤ I`. Composition multiplies pairwise and then coalesces: zero
//! products are dropped and `ℓ` equal operators `K` become the single
//! operator `√ℓ·K`. Quantum alternation `S • T` superposes two sets under the
//! control of a qubit; it is defined on decompositions, not on the
//! superoperators they denote, so phases that are invisible for `S` alone
//! become visible in `S • T`.

use thiserror::Error;

use crate::linalg::{
    basis_elements, injection, is_psd, BlockDiag, ComplexMatrix, DensityState, LinalgError, Signature,
};

/// Entrywise tolerance used to detect equal (and zero) operators when
/// coalescing.
pub const COALESCE_TOL: f64 = 1e-12;

/// Default tolerance for positivity and equality judgements.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KrausError {
    #[error("operator has shape {found:?}, expected {expected:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("Σ E†E exceeds the identity by {excess:.3e}")]
    TraceConditionViolated { excess: f64 },
    #[error("{what}: signature {left} does not match {right}")]
    SignatureMismatch {
        what: &'static str,
        left: Signature,
        right: Signature,
    },
    #[error("expected {expected} branches, found {found}")]
    BranchCountMismatch { expected: usize, found: usize },
    #[error("result leaks {0:.3e} outside the block diagonal")]
    NonBlockDiagonalResult(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn check_sig(what: &'static str, left: &Signature, right: &Signature) -> Result<(), KrausError> {
    if left == right {
        Ok(())
    } else {
        Err(KrausError::SignatureMismatch {
            what,
            left: left.clone(),
            right: right.clone(),
        })
    }
}

/// A Kraus decomposition `S : σ → τ`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    input: Signature,
    output: Signature,
    ops: Vec<ComplexMatrix>,
}

/// Drops zero operators and folds repeated operators into `√ℓ·K` until no
/// two members are equal, then sorts canonically (descending
/// lexicographic order on rounded entries, so `Π₀` precedes `Π₁`).
fn coalesce(raw: Vec<ComplexMatrix>) -> Vec<ComplexMatrix> {
    let mut ops: Vec<ComplexMatrix> = raw.into_iter().filter(|e| !e.is_zero(COALESCE_TOL)).collect();
    loop {
        let mut groups: Vec<(ComplexMatrix, usize)> = Vec::with_capacity(ops.len());
        for op in ops {
            match groups.iter_mut().find(|(k, _)| k.approx_eq(&op, COALESCE_TOL)) {
                Some((_, count)) => *count += 1,
                None => groups.push((op, 1)),
            }
        }
        let collided = groups.iter().any(|&(_, l)| l > 1);
        ops = groups
            .into_iter()
            .map(|(k, l)| if l > 1 { k.scale_real((l as f64).sqrt()) } else { k })
            .collect();
        if !collided {
            break;
        }
    }
    ops.sort_by_cached_key(|e| std::cmp::Reverse(e.canonical_key()));
    ops
}

impl KrausSet {
    /// Builds a set from a multiset of operators, validating `Σ E†E ≤ I`
    /// within [`DEFAULT_TOL`].
    pub fn new(
        input: Signature,
        output: Signature,
        raw: impl IntoIterator<Item = ComplexMatrix>,
    ) -> Result<Self, KrausError> {
        Self::with_tol(input, output, raw, DEFAULT_TOL)
    }

    pub fn with_tol(
        input: Signature,
        output: Signature,
        raw: impl IntoIterator<Item = ComplexMatrix>,
        tol: f64,
    ) -> Result<Self, KrausError> {
        let expected = (output.dim(), input.dim());
        let raw: Vec<ComplexMatrix> = raw.into_iter().collect();
        if let Some(bad) = raw.iter().find(|e| e.shape() != expected) {
            return Err(KrausError::DimensionMismatch {
                expected,
                found: bad.shape(),
            });
        }
        let set = Self {
            ops: coalesce(raw),
            input,
            output,
        };
        let excess = set.kraus_sum().max_eigenvalue() - 1.0;
        if excess > tol {
            return Err(KrausError::TraceConditionViolated { excess });
        }
        Ok(set)
    }

    /// `{I}` on `σ`.
    pub fn identity(sig: &Signature) -> Self {
        Self {
            input: sig.clone(),
            output: sig.clone(),
            ops: vec![ComplexMatrix::identity(sig.dim())],
        }
    }

    /// The empty decomposition of the zero map.
    pub fn zero(input: &Signature, output: &Signature) -> Self {
        Self {
            input: input.clone(),
            output: output.clone(),
            ops: Vec::new(),
        }
    }

    pub fn input(&self) -> &Signature {
        &self.input
    }

    pub fn output(&self) -> &Signature {
        &self.output
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `Σ E†E`.
    pub fn kraus_sum(&self) -> ComplexMatrix {
        let d = self.input.dim();
        self.ops
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, e| &acc + &(&e.adjoint() * e))
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.kraus_sum()
            .approx_eq(&ComplexMatrix::identity(self.input.dim()), tol)
    }

    /// `Σ E m E†` on the full Hilbert space.
    pub fn apply_full(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let d = self.output.dim();
        self.ops.iter().fold(ComplexMatrix::zeros(d, d), |acc, e| {
            &acc + &ComplexMatrix::product([e, m, &e.adjoint()]).expect("nonempty")
        })
    }

    /// Action on an arbitrary element of `V_σ`; the result must be block
    /// diagonal within `tol`.
    pub fn apply_blocks(&self, rho: &BlockDiag, tol: f64) -> Result<BlockDiag, KrausError> {
        check_sig("apply", rho.signature(), &self.input)?;
        let full = self.apply_full(&rho.to_full());
        BlockDiag::from_full(&self.output, &full, tol).map_err(|e| match e {
            LinalgError::OffBlockMass(m) => KrausError::NonBlockDiagonalResult(m),
            other => other.into(),
        })
    }

    /// Action on a density state.
    pub fn apply(&self, rho: &DensityState) -> Result<DensityState, KrausError> {
        let out = self.apply_blocks(rho.as_block_diag(), DEFAULT_TOL)?;
        Ok(DensityState::from_blocks(out, DEFAULT_TOL)?)
    }
}

pub fn make_kraus(
    input: Signature,
    output: Signature,
    raw: impl IntoIterator<Item = ComplexMatrix>,
) -> Result<KrausSet, KrausError> {
    KrausSet::new(input, output, raw)
}

/// `S ∘ T`: apply `T` first.
pub fn compose(s: &KrausSet, t: &KrausSet) -> Result<KrausSet, KrausError> {
    check_sig("compose", &t.output, &s.input)?;
    let raw = s
        .ops
        .iter()
        .flat_map(|e| t.ops.iter().map(move |f| e * f))
        .collect::<Vec<_>>();
    KrausSet::new(t.input.clone(), s.output.clone(), raw)
}

/// `Σ_k Π_k ⊗ E_k` for a `control_dim`-dimensional control, mapped into
/// block-major order on `(control_dim) ⊗ σ → (control_dim) ⊗ τ`.
fn controlled_sum(
    control_dim: usize,
    input: &Signature,
    output: &Signature,
    terms: &[(usize, ComplexMatrix)],
) -> ComplexMatrix {
    let control = Signature::single(control_dim);
    let mut acc = ComplexMatrix::zeros(control_dim * output.dim(), control_dim * input.dim());
    for (k, e) in terms {
        acc = &acc + &ComplexMatrix::projector(*k, control_dim).tensor(e);
    }
    ComplexMatrix::product([&control.tensor_iso(output), &acc, &control.tensor_iso(input).adjoint()]).expect("nonempty")
}

/// `Alt_q(E/√|T|, F/√|S|)`, one element of `S • T` before coalescing.
pub(crate) fn alternation_element(
    input: &Signature,
    output: &Signature,
    e: &ComplexMatrix,
    f: &ComplexMatrix,
    s_len: usize,
    t_len: usize,
) -> ComplexMatrix {
    controlled_sum(
        2,
        input,
        output,
        &[
            (0, e.scale_real(1.0 / (t_len as f64).sqrt())),
            (1, f.scale_real(1.0 / (s_len as f64).sqrt())),
        ],
    )
}

/// Quantum alternation `S • T : qbit⊗σ → qbit⊗τ`.
///
/// When one side is empty only the other branch survives:
/// `S • ∅ = {Π₀⊗E}`, `∅ • T = {Π₁⊗F}`, `∅ • ∅ = ∅`.
pub fn alternate(s: &KrausSet, t: &KrausSet) -> Result<KrausSet, KrausError> {
    check_sig("alternate (input)", &s.input, &t.input)?;
    check_sig("alternate (output)", &s.output, &t.output)?;
    let (input, output) = (&s.input, &s.output);
    let raw: Vec<ComplexMatrix> = match (s.is_empty(), t.is_empty()) {
        (true, true) => Vec::new(),
        (false, true) => s
            .ops
            .iter()
            .map(|e| controlled_sum(2, input, output, &[(0, e.clone())]))
            .collect(),
        (true, false) => t
            .ops
            .iter()
            .map(|f| controlled_sum(2, input, output, &[(1, f.clone())]))
            .collect(),
        (false, false) => s
            .ops
            .iter()
            .flat_map(|e| {
                t.ops
                    .iter()
                    .map(move |f| alternation_element(input, output, e, f, s.len(), t.len()))
            })
            .collect(),
    };
    KrausSet::new(input.qbit_tensor(), output.qbit_tensor(), raw)
}

/// Alternation over an `n`-qubit control register with `2ⁿ` branches.
///
/// Each element is `Σ_k Π_k ⊗ E_k / √(∏_{j≠k} |S_j|)` for a tuple
/// `(E_0, …)` ranging over the product of the branches. Empty branches
/// contribute no term and no factor, matching [`alternate`].
pub fn alternate_case(branches: &[KrausSet], n: usize) -> Result<KrausSet, KrausError> {
    let count = 1usize << n;
    if branches.len() != count {
        return Err(KrausError::BranchCountMismatch {
            expected: count,
            found: branches.len(),
        });
    }
    let first = &branches[0];
    for b in &branches[1..] {
        check_sig("case (input)", &first.input, &b.input)?;
        check_sig("case (output)", &first.output, &b.output)?;
    }
    let control = Signature::single(count);
    let input = control.tensor(&first.input);
    let output = control.tensor(&first.output);

    let live: Vec<usize> = (0..count).filter(|&k| !branches[k].is_empty()).collect();
    if live.is_empty() {
        return Ok(KrausSet::zero(&input, &output));
    }
    let sizes: Vec<usize> = live.iter().map(|&k| branches[k].len()).collect();
    let total: f64 = sizes.iter().map(|&l| l as f64).product();

    let mut raw = Vec::new();
    let mut idx = vec![0usize; live.len()];
    loop {
        let terms: Vec<(usize, ComplexMatrix)> = live
            .iter()
            .zip(&idx)
            .zip(&sizes)
            .map(|((&k, &i), &len)| {
                let others = total / len as f64;
                (k, branches[k].ops[i].scale_real(1.0 / others.sqrt()))
            })
            .collect();
        raw.push(controlled_sum(count, &first.input, &first.output, &terms));

        // odometer over the product of branch indices
        let mut pos = live.len();
        loop {
            if pos == 0 {
                return KrausSet::new(input, output, raw);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `S ⊕ T : σ⊕σ → τ⊕τ`, acting as `(ρ₀, ρ₁) ↦ (S ρ₀, T ρ₁)`.
pub fn branch_sum(s: &KrausSet, t: &KrausSet) -> Result<KrausSet, KrausError> {
    check_sig("branch sum (input)", &s.input, &t.input)?;
    check_sig("branch sum (output)", &s.output, &t.output)?;
    let embed = |i: usize, e: &ComplexMatrix| {
        ComplexMatrix::product([&injection(i, &s.output), e, &injection(i, &s.input).adjoint()]).expect("nonempty")
    };
    let raw = s
        .ops
        .iter()
        .map(|e| embed(0, e))
        .chain(t.ops.iter().map(|f| embed(1, f)))
        .collect::<Vec<_>>();
    KrausSet::new(s.input.dsum(&s.input), s.output.dsum(&s.output), raw)
}

pub fn apply(s: &KrausSet, rho: &DensityState) -> Result<DensityState, KrausError> {
    s.apply(rho)
}

/// One Choi matrix per input block: `Σ_{a,b} |a⟩⟨b| ⊗ S(|a⟩⟨b|)` with
/// `a, b` ranging over block `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiFamily {
    input: Signature,
    output: Signature,
    members: Vec<ComplexMatrix>,
}

impl ChoiFamily {
    pub fn input(&self) -> &Signature {
        &self.input
    }

    pub fn output(&self) -> &Signature {
        &self.output
    }

    pub fn members(&self) -> &[ComplexMatrix] {
        &self.members
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.members
            .iter()
            .zip(&other.members)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// Frobenius distance summed in quadrature over the members.
    pub fn distance(&self, other: &Self) -> f64 {
        self.members
            .iter()
            .zip(&other.members)
            .map(|(a, b)| (a - b).frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

pub fn to_choi(s: &KrausSet) -> ChoiFamily {
    let d_out = s.output.dim();
    let members = s
        .input
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let off = s.input.offset(i);
            let dim = n * d_out;
            let mut acc = ComplexMatrix::zeros(dim, dim);
            for e in &s.ops {
                // vec = Σ_a |a⟩ ⊗ E|off + a⟩
                let v = ComplexMatrix::from_fn(dim, 1, |r, _| {
                    let (a, o) = (r / d_out, r % d_out);
                    e.get(o, off + a)
                });
                acc = &acc + &(&v * &v.adjoint());
            }
            acc
        })
        .collect();
    ChoiFamily {
        input: s.input.clone(),
        output: s.output.clone(),
        members,
    }
}

fn check_pair(what: &'static str, s: &KrausSet, t: &KrausSet) -> Result<(), KrausError> {
    check_sig(what, &s.input, &t.input)?;
    check_sig(what, &s.output, &t.output)
}

/// `S ≃ T`: both decompositions denote the same superoperator on `V_σ`.
pub fn ext_equal(s: &KrausSet, t: &KrausSet, tol: f64) -> Result<bool, KrausError> {
    check_pair("extensional equality", s, t)?;
    Ok(to_choi(s).max_abs_diff(&to_choi(t)) <= tol)
}

/// `S ⊑ T`: `T − S` is completely positive on `V_σ`.
pub fn lowner_leq(s: &KrausSet, t: &KrausSet, tol: f64) -> Result<bool, KrausError> {
    check_pair("Löwner order", s, t)?;
    let (cs, ct) = (to_choi(s), to_choi(t));
    Ok(cs.members.iter().zip(&ct.members).all(|(a, b)| is_psd(&(b - a), tol)))
}

/// True iff `S = {U}` for a unitary `U`.
pub fn is_reversible(s: &KrausSet, tol: f64) -> bool {
    s.input == s.output && s.ops.len() == 1 && s.ops[0].is_unitary(tol)
}

/// Sum of `tr(K ρ K†)` over the members, i.e. the total probability in the
/// operational reading of a decomposition.
pub fn outcome_probabilities(s: &KrausSet, rho: &DensityState) -> Vec<f64> {
    let full = rho.to_full();
    s.ops
        .iter()
        .map(|k| {
            ComplexMatrix::product([k, &full, &k.adjoint()])
                .expect("nonempty")
                .trace()
                .re
        })
        .collect()
}

/// Checks that `S` maps every spanning element of `V_σ` to `V_τ`.
pub fn preserves_blocks(s: &KrausSet, tol: f64) -> bool {
    basis_elements(&s.input).iter().all(|e| s.apply_blocks(e, tol).is_ok())
}
