//! Denotational semantics: typed programs to Kraus decompositions.
//!
//! [`denote`] builds each statement from the primitive decompositions in
//! [`table`], with [`layout`] deciding where each variable lives. [`eval_direct`] is a
//! separate evaluator that updates density matrices statement by statement
//! from index arithmetic alone, and serves as a cross-check.

mod direct;
pub mod layout;
pub mod table;

use thiserror::Error;

use crate::kraus::{alternate, alternate_case, branch_sum, compose, KrausError, KrausSet};
use crate::lang::{Context, CoreStmt, Kind, LangError, Name, Typed, TypedProgram};
use crate::linalg::{embed_gate, ComplexMatrix, DensityState, Signature};

pub use direct::eval_direct;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Kraus(#[from] KrausError),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error("initial state has signature {found}, but the context {context} needs {expected}")]
    StateSignature {
        context: String,
        expected: Signature,
        found: Signature,
    },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("`{0}` is a bit, but measurement statistics require a qbit")]
    KindError(String),
}

/// A decomposition together with the contexts that fix its layout.
#[derive(Clone, Debug, PartialEq)]
pub struct Denotation {
    pub kraus: KrausSet,
    pub input: Context,
    pub output: Context,
}

fn conjugate(
    set: &KrausSet,
    p_out: &ComplexMatrix,
    p_in: &ComplexMatrix,
    input: &Context,
    output: &Context,
) -> Result<KrausSet, KrausError> {
    let ops = set
        .ops()
        .iter()
        .map(|e| ComplexMatrix::product([p_out, e, p_in]).expect("nonempty"));
    KrausSet::new(input.signature(), output.signature(), ops)
}

/// The denotation of one typed statement.
pub fn denote(t: &Typed) -> Result<Denotation, SemanticsError> {
    let (g, g2) = (&t.input, &t.output);
    let kraus = match &t.stmt {
        CoreStmt::Skip => KrausSet::identity(&g.signature()),
        CoreStmt::New { name, kind } => {
            let (set, from) = match kind {
                Kind::Qbit => (
                    table::new_qbit(&g.signature())?,
                    layout::with_leading_qubits(g, std::slice::from_ref(name)),
                ),
                Kind::Bit => {
                    let mut from = vec![name.clone()];
                    from.extend(layout::factors(g));
                    (table::new_bit(&g.signature())?, from)
                }
            };
            let p = layout::permutation(&from, &layout::factors(g2));
            conjugate(&set, &p, &ComplexMatrix::identity(g.signature().dim()), g, g2)?
        }
        CoreStmt::Discard { name } => {
            let lead = layout::with_leading(g, std::slice::from_ref(name));
            let p = layout::permutation(&layout::factors(g), &lead);
            let set = match g.kind_of(name) {
                Some(Kind::Qbit) => table::discard_qbit(&g2.signature())?,
                _ => table::merge(&g2.signature())?,
            };
            conjugate(&set, &ComplexMatrix::identity(g2.signature().dim()), &p, g, g2)?
        }
        CoreStmt::Apply { targets, gate } => {
            let qubits = g.qubits();
            let pos: Vec<usize> = targets
                .iter()
                .map(|n| qubits.iter().position(|q| *q == n).expect("typed target"))
                .collect();
            let u = embed_gate(&gate.matrix, &pos, qubits.len()).map_err(KrausError::from)?;
            let blocks = g.signature().block_count();
            let sig = g.signature();
            KrausSet::new(sig.clone(), sig, [ComplexMatrix::identity(blocks).tensor(&u)])?
        }
        CoreStmt::Measure {
            control,
            then_branch,
            else_branch,
        } => {
            let sig = g.signature();
            let lead = layout::with_leading(g, std::slice::from_ref(control));
            let p = layout::permutation(&layout::factors(g), &lead);
            let back = ComplexMatrix::block_diagonal(&[p.adjoint(), p.adjoint()]);
            let raw = table::measure(&g.without(control).signature())?;
            let meas = KrausSet::new(
                sig.clone(),
                sig.dsum(&sig),
                raw.ops()
                    .iter()
                    .map(|e| ComplexMatrix::product([&back, e, &p]).expect("nonempty")),
            )?;
            let s = reorder(denote_block(then_branch, g)?, g2)?;
            let u = reorder(denote_block(else_branch, g)?, g2)?;
            let split = compose(&branch_sum(&s.kraus, &u.kraus)?, &meas)?;
            compose(&table::merge(&g2.signature())?, &split)?
        }
        CoreStmt::If {
            control,
            then_branch,
            else_branch,
        } => {
            let controls = std::slice::from_ref(control);
            let inner = g.without(control);
            let s = denote_block(then_branch, &inner)?;
            let u = reorder(denote_block(else_branch, &inner)?, &s.output)?;
            let alt = alternate(&s.kraus, &u.kraus)?;
            alternation_layout(&alt, controls, g, &inner, &s.output, g2)?
        }
        CoreStmt::Case { controls, arms } => {
            let inner = controls.iter().fold(g.clone(), |c, q| c.without(q));
            let branches = arms
                .iter()
                .map(|arm| denote_block(arm, &inner))
                .collect::<Result<Vec<_>, _>>()?;
            let inner_out = branches[0].output.clone();
            let sets = branches
                .into_iter()
                .map(|d| reorder(d, &inner_out).map(|d| d.kraus))
                .collect::<Result<Vec<_>, _>>()?;
            let alt = alternate_case(&sets, controls.len())?;
            alternation_layout(&alt, controls, g, &inner, &inner_out, g2)?
        }
    };
    Ok(Denotation {
        kraus,
        input: g.clone(),
        output: g2.clone(),
    })
}

/// Moves an alternation, which has its controls leading inside each block,
/// into the layouts of the surrounding contexts.
fn alternation_layout(
    alt: &KrausSet,
    controls: &[Name],
    g: &Context,
    inner: &Context,
    inner_out: &Context,
    g2: &Context,
) -> Result<KrausSet, KrausError> {
    let p_in = layout::permutation(&layout::factors(g), &layout::with_leading_qubits(inner, controls));
    let p_out = layout::permutation(&layout::with_leading_qubits(inner_out, controls), &layout::factors(g2));
    conjugate(alt, &p_out, &p_in, g, g2)
}

/// Permutes the output of `d` into the variable order of `target`, which
/// must hold the same variables.
fn reorder(d: Denotation, target: &Context) -> Result<Denotation, SemanticsError> {
    if &d.output == target {
        return Ok(d);
    }
    let p = layout::permutation(&layout::factors(&d.output), &layout::factors(target));
    let id = ComplexMatrix::identity(d.input.signature().dim());
    Ok(Denotation {
        kraus: conjugate(&d.kraus, &p, &id, &d.input, target)?,
        input: d.input,
        output: target.clone(),
    })
}

/// Sequential composition of a block, starting from `{I}` on `ctx`.
pub fn denote_block(block: &[Typed], ctx: &Context) -> Result<Denotation, SemanticsError> {
    let mut acc = Denotation {
        kraus: KrausSet::identity(&ctx.signature()),
        input: ctx.clone(),
        output: ctx.clone(),
    };
    for t in block {
        let d = denote(t)?;
        acc = Denotation {
            kraus: compose(&d.kraus, &acc.kraus)?,
            input: acc.input,
            output: d.output,
        };
    }
    Ok(acc)
}

pub fn denote_program(p: &TypedProgram) -> Result<Denotation, SemanticsError> {
    denote_block(&p.body, &p.input)
}

/// All variables zero: `|0…0⟩⟨0…0|` in block 0. For the empty context this
/// is the scalar 1 on `(1)`.
pub fn default_state(ctx: &Context) -> DensityState {
    let sig = ctx.signature();
    let psi = ComplexMatrix::ket(0, sig.blocks()[0]);
    DensityState::pure(&sig, 0, &psi, 1e-9).expect("unit vector")
}

fn initial_state(p: &TypedProgram, initial: Option<&DensityState>) -> Result<DensityState, SemanticsError> {
    match initial {
        None => Ok(default_state(&p.input)),
        Some(rho) => {
            let expected = p.input.signature();
            if rho.signature() != &expected {
                return Err(SemanticsError::StateSignature {
                    context: p.input.to_string(),
                    expected,
                    found: rho.signature().clone(),
                });
            }
            Ok(rho.clone())
        }
    }
}

/// Applies the denotation of the whole program to `initial`, or to
/// [`default_state`] of the input context.
pub fn run(p: &TypedProgram, initial: Option<&DensityState>) -> Result<DensityState, SemanticsError> {
    let rho = initial_state(p, initial)?;
    Ok(denote_program(p)?.kraus.apply(&rho)?)
}

/// `(Pr[q = 0], Pr[q = 1])` for a state laid out by `ctx`.
pub fn measure_stats(rho: &DensityState, q: &Name, ctx: &Context) -> Result<(f64, f64), SemanticsError> {
    match ctx.kind_of(q) {
        None => return Err(SemanticsError::UnknownName(q.to_string())),
        Some(Kind::Bit) => return Err(SemanticsError::KindError(q.to_string())),
        Some(Kind::Qbit) => {}
    }
    if rho.signature() != &ctx.signature() {
        return Err(SemanticsError::StateSignature {
            context: ctx.to_string(),
            expected: ctx.signature(),
            found: rho.signature().clone(),
        });
    }
    let qubits = ctx.qubits();
    let m = qubits.len();
    let shift = m - 1 - qubits.iter().position(|n| *n == q).expect("qubit");
    let mut p = [0.0; 2];
    for block in rho.blocks() {
        for x in 0..block.rows() {
            p[(x >> shift) & 1] += block.get(x, x).re;
        }
    }
    Ok((p[0], p[1]))
}
