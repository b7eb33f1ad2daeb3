//! Direct density-matrix evaluator.
//!
//! Shares nothing with [`super::denote`] beyond the typed tree: basis
//! indices are decoded into per-variable values, operators are filled in
//! entry by entry from those values, and each top-level statement updates
//! the density matrix in place of building a program-level decomposition.
//! Alternations still need Kraus lists for their branches; those are built
//! here with the same coalescing rule, and combined entrywise.

use super::SemanticsError;
use crate::kraus::{KrausError, COALESCE_TOL, DEFAULT_TOL};
use crate::lang::{Context, CoreStmt, Kind, Name, Typed, TypedProgram};
use crate::linalg::{BlockDiag, ComplexMatrix, DensityState, C64, ONE, ZERO};

/// Basis of a context: the value of every variable, in context order, for
/// each full-space index.
struct Basis {
    ctx: Context,
    values: Vec<Vec<u8>>,
}

impl Basis {
    fn new(ctx: &Context) -> Self {
        let dim = ctx.signature().dim();
        let values = (0..dim).map(|idx| decode(ctx, idx)).collect();
        Self {
            ctx: ctx.clone(),
            values,
        }
    }

    fn dim(&self) -> usize {
        self.values.len()
    }

    fn value(&self, idx: usize, name: &Name) -> u8 {
        self.values[idx][self.ctx.position(name).expect("declared")]
    }

    /// Index of the basis vector whose variables take the values that
    /// `lookup` gives by name.
    fn index_of(&self, lookup: impl Fn(&Name) -> u8) -> usize {
        let vals: Vec<u8> = self.ctx.vars().iter().map(|(n, _)| lookup(n)).collect();
        encode(&self.ctx, &vals)
    }
}

/// Bits give the block number with the first-declared bit least
/// significant; qubits give the offset with the first-declared most
/// significant.
fn decode(ctx: &Context, idx: usize) -> Vec<u8> {
    let m = ctx.qubits().len();
    let (mut block, offset) = (idx >> m, idx & ((1 << m) - 1));
    let mut qi = 0;
    ctx.vars()
        .iter()
        .map(|(_, k)| match k {
            Kind::Bit => {
                let v = (block & 1) as u8;
                block >>= 1;
                v
            }
            Kind::Qbit => {
                qi += 1;
                ((offset >> (m - qi)) & 1) as u8
            }
        })
        .collect()
}

fn encode(ctx: &Context, vals: &[u8]) -> usize {
    let m = ctx.qubits().len();
    let (mut block, mut offset) = (0usize, 0usize);
    let (mut bi, mut qi) = (0, 0);
    for ((_, k), &v) in ctx.vars().iter().zip(vals) {
        match k {
            Kind::Bit => {
                block |= (v as usize) << bi;
                bi += 1;
            }
            Kind::Qbit => {
                qi += 1;
                offset |= (v as usize) << (m - qi);
            }
        }
    }
    (block << m) | offset
}

/// Whether `y` (over `out`) and `x` (over `inp`) agree on every variable of
/// `out` outside `except`.
fn agree(out: &Basis, y: usize, inp: &Basis, x: usize, except: &[Name]) -> bool {
    out.ctx
        .vars()
        .iter()
        .filter(|(n, _)| !except.contains(n))
        .all(|(n, _)| out.value(y, n) == inp.value(x, n))
}

fn operator(out: &Basis, inp: &Basis, f: impl Fn(usize, usize) -> C64) -> ComplexMatrix {
    ComplexMatrix::from_fn(out.dim(), inp.dim(), f)
}

fn coalesce(mut ops: Vec<ComplexMatrix>) -> Vec<ComplexMatrix> {
    loop {
        ops.retain(|e| !e.is_zero(COALESCE_TOL));
        let mut groups: Vec<(ComplexMatrix, usize)> = Vec::new();
        for e in ops {
            match groups.iter_mut().find(|(k, _)| k.max_abs_diff(&e) <= COALESCE_TOL) {
                Some(g) => g.1 += 1,
                None => groups.push((e, 1)),
            }
        }
        let done = groups.iter().all(|g| g.1 == 1);
        ops = groups
            .into_iter()
            .map(|(k, l)| k.scale_real((l as f64).sqrt()))
            .collect();
        if done {
            return ops;
        }
    }
}

fn projector(b: &Basis, q: &Name, v: u8) -> ComplexMatrix {
    operator(b, b, |r, c| if r == c && b.value(r, q) == v { ONE } else { ZERO })
}

fn gate_operator(t: &Typed, targets: &[Name], u: &ComplexMatrix) -> ComplexMatrix {
    let b = Basis::new(&t.input);
    let sub = |i: usize| {
        targets
            .iter()
            .fold(0usize, |acc, n| (acc << 1) | b.value(i, n) as usize)
    };
    operator(&b, &b, |r, c| {
        if agree(&b, r, &b, c, targets) {
            u.get(sub(r), sub(c))
        } else {
            ZERO
        }
    })
}

/// Statement-level Kraus list.
fn ops(t: &Typed) -> Vec<ComplexMatrix> {
    let (inp, out) = (Basis::new(&t.input), Basis::new(&t.output));
    match &t.stmt {
        CoreStmt::Skip => vec![ComplexMatrix::identity(inp.dim())],
        CoreStmt::New { name, .. } => vec![operator(&out, &inp, |y, x| {
            if out.value(y, name) == 0 && agree(&out, y, &inp, x, std::slice::from_ref(name)) {
                ONE
            } else {
                ZERO
            }
        })],
        CoreStmt::Discard { name } => (0..2u8)
            .map(|v| {
                operator(&out, &inp, |y, x| {
                    if inp.value(x, name) == v && agree(&out, y, &inp, x, &[]) {
                        ONE
                    } else {
                        ZERO
                    }
                })
            })
            .collect(),
        CoreStmt::Apply { targets, gate } => vec![gate_operator(t, targets, &gate.matrix)],
        CoreStmt::Measure {
            control,
            then_branch,
            else_branch,
        } => {
            let mut all = Vec::new();
            for (v, branch) in [then_branch, else_branch].into_iter().enumerate() {
                let p = projector(&inp, control, v as u8);
                let r = relabel(&output_of(branch, &t.input), &t.output);
                all.extend(
                    block_ops(branch, &t.input)
                        .iter()
                        .map(|k| ComplexMatrix::product([&r, k, &p]).expect("nonempty")),
                );
            }
            coalesce(all)
        }
        CoreStmt::If {
            control,
            then_branch,
            else_branch,
        } => {
            let inner = t.input.without(control);
            let target = output_of(then_branch, &inner);
            let branches = [then_branch, else_branch].map(|b| {
                let r = relabel(&output_of(b, &inner), &target);
                block_ops(b, &inner).iter().map(|k| &r * k).collect()
            });
            alternation(t, std::slice::from_ref(control), &branches)
        }
        CoreStmt::Case { controls, arms } => {
            let inner = controls.iter().fold(t.input.clone(), |c, q| c.without(q));
            let target = output_of(&arms[0], &inner);
            let branches: Vec<Vec<ComplexMatrix>> = arms
                .iter()
                .map(|a| {
                    let r = relabel(&output_of(a, &inner), &target);
                    block_ops(a, &inner).iter().map(|k| &r * k).collect()
                })
                .collect();
            alternation(t, controls, &branches)
        }
    }
}

fn block_ops(block: &[Typed], ctx: &Context) -> Vec<ComplexMatrix> {
    let mut acc = vec![ComplexMatrix::identity(ctx.signature().dim())];
    for t in block {
        let next = ops(t);
        acc = coalesce(next.iter().flat_map(|e| acc.iter().map(move |f| e * f)).collect());
    }
    acc
}

/// Moves each basis vector over `from` to the one over `to` with the same
/// variable values.
fn relabel(from: &Context, to: &Context) -> ComplexMatrix {
    let (inp, out) = (Basis::new(from), Basis::new(to));
    operator(&out, &inp, |y, x| {
        if inp.index_of(|n| out.value(y, n)) == x {
            ONE
        } else {
            ZERO
        }
    })
}

fn output_of(block: &[Typed], ctx: &Context) -> Context {
    block.last().map_or_else(|| ctx.clone(), |t| t.output.clone())
}

/// Elements `Σ_k Π_k ⊗ E_k / √(∏_{j≠k} |B_j|)` over all choices of one
/// operator from each nonempty branch, assembled entry by entry.
fn alternation(t: &Typed, controls: &[Name], branches: &[Vec<ComplexMatrix>]) -> Vec<ComplexMatrix> {
    let (inp, out) = (Basis::new(&t.input), Basis::new(&t.output));
    let inner_in = controls.iter().fold(t.input.clone(), |c, q| c.without(q));
    let inner_out = controls.iter().fold(t.output.clone(), |c, q| c.without(q));
    let (bi, bo) = (Basis::new(&inner_in), Basis::new(&inner_out));

    let label = |b: &Basis, i: usize| {
        controls
            .iter()
            .fold(0usize, |acc, q| (acc << 1) | b.value(i, q) as usize)
    };
    let restrict_in: Vec<usize> = (0..inp.dim()).map(|x| bi.index_of(|n| inp.value(x, n))).collect();
    let restrict_out: Vec<usize> = (0..out.dim()).map(|y| bo.index_of(|n| out.value(y, n))).collect();

    let live: Vec<usize> = (0..branches.len()).filter(|&k| !branches[k].is_empty()).collect();
    if live.is_empty() {
        return Vec::new();
    }
    let total: f64 = live.iter().map(|&k| branches[k].len() as f64).product();

    // every choice of one operator per live branch
    let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
    for &k in &live {
        choices = choices
            .into_iter()
            .flat_map(|c| {
                (0..branches[k].len()).map(move |i| {
                    let mut c = c.clone();
                    c.push(i);
                    c
                })
            })
            .collect();
    }

    let elements = choices
        .iter()
        .map(|choice| {
            operator(&out, &inp, |y, x| {
                let k = label(&inp, x);
                if label(&out, y) != k {
                    return ZERO;
                }
                match live.iter().position(|&l| l == k) {
                    None => ZERO,
                    Some(slot) => {
                        let e = &branches[k][choice[slot]];
                        let norm = (total / branches[k].len() as f64).sqrt();
                        e.get(restrict_out[y], restrict_in[x]) / norm
                    }
                }
            })
        })
        .collect();
    coalesce(elements)
}

fn sandwich(ops: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    let d = ops.first().map_or(0, |e| e.rows());
    ops.iter().fold(ComplexMatrix::zeros(d, d), |acc, e| {
        &acc + &ComplexMatrix::product([e, rho, &e.adjoint()]).expect("nonempty")
    })
}

/// One statement applied to a full density matrix over `t.input`.
fn step(t: &Typed, rho: &ComplexMatrix) -> ComplexMatrix {
    let (inp, out) = (Basis::new(&t.input), Basis::new(&t.output));
    match &t.stmt {
        CoreStmt::Skip => rho.clone(),
        CoreStmt::New { name, .. } => ComplexMatrix::from_fn(out.dim(), out.dim(), |r, c| {
            if out.value(r, name) != 0 || out.value(c, name) != 0 {
                return ZERO;
            }
            let x = inp.index_of(|n| out.value(r, n));
            let x2 = inp.index_of(|n| out.value(c, n));
            rho.get(x, x2)
        }),
        CoreStmt::Discard { name } => ComplexMatrix::from_fn(out.dim(), out.dim(), |r, c| {
            (0..2u8)
                .map(|v| {
                    let out = &out;
                    let pick = |y: usize| move |n: &Name| if n == name { v } else { out.value(y, n) };
                    rho.get(inp.index_of(pick(r)), inp.index_of(pick(c)))
                })
                .sum()
        }),
        CoreStmt::Apply { targets, gate } => {
            let u = gate_operator(t, targets, &gate.matrix);
            ComplexMatrix::product([&u, rho, &u.adjoint()]).expect("nonempty")
        }
        CoreStmt::Measure {
            control,
            then_branch,
            else_branch,
        } => {
            let d = out.dim();
            [then_branch, else_branch]
                .into_iter()
                .enumerate()
                .fold(ComplexMatrix::zeros(d, d), |acc, (v, branch)| {
                    let p = projector(&inp, control, v as u8);
                    let part = ComplexMatrix::product([&p, rho, &p]).expect("nonempty");
                    let r = relabel(&output_of(branch, &t.input), &t.output);
                    let done = steps(branch, part);
                    &acc + &ComplexMatrix::product([&r, &done, &r.adjoint()]).expect("nonempty")
                })
        }
        CoreStmt::If { .. } | CoreStmt::Case { .. } => sandwich(&ops(t), rho),
    }
}

fn steps(block: &[Typed], rho: ComplexMatrix) -> ComplexMatrix {
    block.iter().fold(rho, |r, t| step(t, &r))
}

/// Evaluates `p` on `initial` (or the all-zero state of its input context)
/// by direct density-matrix updates.
pub fn eval_direct(p: &TypedProgram, initial: Option<&DensityState>) -> Result<DensityState, SemanticsError> {
    let rho = super::initial_state(p, initial)?;
    let out = steps(&p.body, rho.to_full());
    let ctx = output_of(&p.body, &p.input);
    let blocks = BlockDiag::from_full(&ctx.signature(), &out, DEFAULT_TOL).map_err(KrausError::from)?;
    Ok(DensityState::from_blocks(blocks, DEFAULT_TOL).map_err(KrausError::from)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_inverts_decode() {
        let ctx = Context::from_vars([
            (Name::plain("a"), Kind::Bit),
            (Name::plain("q"), Kind::Qbit),
            (Name::plain("b"), Kind::Bit),
            (Name::plain("r"), Kind::Qbit),
        ])
        .unwrap();
        for idx in 0..16 {
            assert_eq!(encode(&ctx, &decode(&ctx, idx)), idx);
        }
        // b is the newest bit, so the most significant part of the index
        assert_eq!(decode(&ctx, 0b1000), vec![0, 0, 1, 0]);
        assert_eq!(decode(&ctx, 0b0110), vec![1, 1, 0, 0]);
    }
}
