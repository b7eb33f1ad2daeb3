//! Typechecking, meta-level expansion and elaboration.
//!
//! The checker walks the surface tree with an environment of meta-level
//! loop variables, so `for` loops are unrolled, register indices resolved,
//! gate expressions evaluated and `case` arms expanded to all `2ⁿ` labels
//! while the typing judgement is checked. The result is a tree of
//! [`Typed`] core statements, each annotated with its input and output
//! contexts.

use std::f64::consts::PI;

use super::ast::*;
use super::context::{Context, Name};
use super::error::{LangError, LangErrorKind};
use crate::linalg::{ComplexMatrix, C64, ONE, ZERO};

/// A gate with its evaluated matrix. `source` is the constant surface form
/// used when printing elaborated programs.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub source: GateExpr,
    pub matrix: ComplexMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoreStmt {
    Skip,
    New {
        name: Name,
        kind: Kind,
    },
    Apply {
        targets: Vec<Name>,
        gate: Gate,
    },
    Discard {
        name: Name,
    },
    Measure {
        control: Name,
        then_branch: Vec<Typed>,
        else_branch: Vec<Typed>,
    },
    If {
        control: Name,
        then_branch: Vec<Typed>,
        else_branch: Vec<Typed>,
    },
    /// Arms in label order: arm `k` runs on the classical state `|k⟩` of
    /// the controls, the first control being the most significant bit.
    Case {
        controls: Vec<Name>,
        arms: Vec<Vec<Typed>>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Typed {
    pub stmt: CoreStmt,
    pub input: Context,
    pub output: Context,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypedProgram {
    pub body: Vec<Typed>,
    pub input: Context,
    pub output: Context,
}

/// Evaluates a closed expression; `Err` carries the first free name.
pub fn eval_const(e: &Expr) -> Result<f64, String> {
    eval(e, &[])
}

fn eval(e: &Expr, env: &[(String, i64)]) -> Result<f64, String> {
    Ok(match e {
        Expr::Int(n) => *n as f64,
        Expr::Real(x) => *x,
        Expr::Pi => PI,
        Expr::Var(v) => match env.iter().rev().find(|(n, _)| n == v) {
            Some(&(_, value)) => value as f64,
            None => return Err(v.clone()),
        },
        Expr::Neg(a) => -eval(a, env)?,
        Expr::Sqrt(a) => eval(a, env)?.sqrt(),
        Expr::Binary(op, a, b) => {
            let (a, b) = (eval(a, env)?, eval(b, env)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
            }
        }
    })
}

pub fn typecheck(program: &Program, initial: &Context) -> Result<TypedProgram, LangError> {
    let mut checker = Checker { env: Vec::new() };
    let (body, output) = checker.block(&program.body, initial)?;
    Ok(TypedProgram {
        body,
        input: initial.clone(),
        output,
    })
}

struct Checker {
    env: Vec<(String, i64)>,
}

fn err<T>(kind: LangErrorKind, span: Span) -> Result<T, LangError> {
    Err(LangError::new(kind, span))
}

impl Checker {
    fn value(&self, e: &Expr, span: Span) -> Result<f64, LangError> {
        eval(e, &self.env).map_err(|name| LangError::new(LangErrorKind::NonConstantBound(name), span))
    }

    fn int(&self, e: &Expr, span: Span) -> Result<i64, LangError> {
        let v = self.value(e, span)?;
        if !v.is_finite() || (v - v.round()).abs() > 1e-9 || v.abs() > 1e15 {
            return err(
                LangErrorKind::BadIndex(format!("`{e}` evaluates to {v}, not an integer")),
                span,
            );
        }
        Ok(v.round() as i64)
    }

    fn resolve(&self, var: &VarRef) -> Result<Name, LangError> {
        match &var.index {
            None => Ok(Name::plain(&var.name)),
            Some(e) => {
                let i = self.int(e, var.span)?;
                if i < 0 {
                    return err(
                        LangErrorKind::BadIndex(format!("`{}[{i}]` has a negative index", var.name)),
                        var.span,
                    );
                }
                Ok(Name::indexed(&var.name, i))
            }
        }
    }

    /// Resolves a reference to a declared variable of the given kind.
    fn lookup(
        &self,
        var: &VarRef,
        ctx: &Context,
        want: Option<Kind>,
        construct: &'static str,
    ) -> Result<Name, LangError> {
        let name = self.resolve(var)?;
        match ctx.kind_of(&name) {
            None => err(LangErrorKind::UnknownName(name.to_string()), var.span),
            Some(found) => match want {
                Some(expected) if expected != found => err(
                    LangErrorKind::KindError {
                        name: name.to_string(),
                        found,
                        expected,
                        construct,
                    },
                    var.span,
                ),
                _ => Ok(name),
            },
        }
    }

    fn block(&mut self, block: &Block, ctx: &Context) -> Result<(Vec<Typed>, Context), LangError> {
        let mut out = Vec::new();
        let mut ctx = ctx.clone();
        for stmt in block {
            ctx = self.stmt(stmt, &ctx, &mut out)?;
        }
        Ok((out, ctx))
    }

    /// Checks a branch of an alternation controlled by `controls`.
    fn branch(&mut self, block: &Block, ctx: &Context, controls: &[Name]) -> Result<(Vec<Typed>, Context), LangError> {
        let inner = controls.iter().fold(ctx.clone(), |c, q| c.without(q));
        let result = self.block(block, &inner).map_err(|e| match &e.kind {
            LangErrorKind::UnknownName(n) if controls.iter().any(|q| q.to_string() == *n) => {
                LangError::new(LangErrorKind::ControlCapture { control: n.clone() }, e.span)
            }
            _ => e,
        })?;
        for t in &result.0 {
            if let Some(q) = controls.iter().find(|q| mentions(t, q)) {
                return err(LangErrorKind::ControlCapture { control: q.to_string() }, t.span);
            }
        }
        Ok(result)
    }

    fn stmt(&mut self, stmt: &Stmt, ctx: &Context, out: &mut Vec<Typed>) -> Result<Context, LangError> {
        let span = stmt.span;
        let mut emit = |core: CoreStmt, output: Context| {
            out.push(Typed {
                stmt: core,
                input: ctx.clone(),
                output: output.clone(),
                span,
            });
            Ok(output)
        };
        match &stmt.kind {
            StmtKind::Skip => emit(CoreStmt::Skip, ctx.clone()),
            StmtKind::New { kind, var } => {
                let name = self.resolve(var)?;
                if ctx.contains(&name) {
                    return err(LangErrorKind::DuplicateName(name.to_string()), var.span);
                }
                let output = ctx.with(name.clone(), *kind);
                emit(CoreStmt::New { name, kind: *kind }, output)
            }
            StmtKind::Discard(var) => {
                let name = self.lookup(var, ctx, None, "`discard`")?;
                let output = ctx.without(&name);
                emit(CoreStmt::Discard { name }, output)
            }
            StmtKind::Apply { targets, gate } => {
                let mut names: Vec<Name> = Vec::with_capacity(targets.len());
                for t in targets {
                    let n = self.lookup(t, ctx, Some(Kind::Qbit), "a gate application")?;
                    if names.contains(&n) {
                        return err(LangErrorKind::DuplicateTarget(n.to_string()), t.span);
                    }
                    names.push(n);
                }
                let gate = self.gate(gate, names.len(), span)?;
                emit(CoreStmt::Apply { targets: names, gate }, ctx.clone())
            }
            StmtKind::Measure {
                control,
                then_branch,
                else_branch,
            } => {
                let control = self.lookup(control, ctx, Some(Kind::Qbit), "`measure`")?;
                let (t, c1) = self.block(then_branch, ctx)?;
                let (e, c2) = self.block(else_branch, ctx)?;
                same_contexts("measure", &c1, &c2, span)?;
                emit(
                    CoreStmt::Measure {
                        control,
                        then_branch: t,
                        else_branch: e,
                    },
                    c1,
                )
            }
            StmtKind::If {
                control,
                then_branch,
                else_branch,
            } => {
                let q = self.lookup(control, ctx, Some(Kind::Qbit), "a quantum `if`")?;
                let controls = [q.clone()];
                let (t, c1) = self.branch(then_branch, ctx, &controls)?;
                let (e, c2) = self.branch(else_branch, ctx, &controls)?;
                same_contexts("if", &c1, &c2, span)?;
                let output = reinsert(ctx, &controls, &c1);
                emit(
                    CoreStmt::If {
                        control: q,
                        then_branch: t,
                        else_branch: e,
                    },
                    output,
                )
            }
            StmtKind::Case { controls, arms } => {
                let mut names: Vec<Name> = Vec::with_capacity(controls.len());
                for c in controls {
                    let n = self.lookup(c, ctx, Some(Kind::Qbit), "a quantum `case`")?;
                    if names.contains(&n) {
                        return err(LangErrorKind::DuplicateTarget(n.to_string()), c.span);
                    }
                    names.push(n);
                }
                let plan = expand_arms(arms, names.len(), span)?;
                let mut typed_arms = Vec::with_capacity(plan.len());
                let mut first: Option<Context> = None;
                for (label, arm) in plan.into_iter().enumerate() {
                    let bound = match &arm.label {
                        ArmLabel::Bind(v) => {
                            self.env.push((v.clone(), label as i64));
                            true
                        }
                        _ => false,
                    };
                    let result = self.branch(&arm.body, ctx, &names);
                    if bound {
                        self.env.pop();
                    }
                    let (body, c) = result?;
                    match &first {
                        None => first = Some(c),
                        Some(c0) => same_contexts("case", c0, &c, arm.span)?,
                    }
                    typed_arms.push(body);
                }
                let output = reinsert(ctx, &names, first.as_ref().expect("at least one arm"));
                emit(
                    CoreStmt::Case {
                        controls: names,
                        arms: typed_arms,
                    },
                    output,
                )
            }
            StmtKind::For { var, lo, hi, body } => {
                let lo = self.int(lo, span)?;
                let hi = self.int(hi, span)?;
                let mut ctx = ctx.clone();
                for i in lo..=hi {
                    self.env.push((var.clone(), i));
                    let result = self.block(body, &ctx);
                    self.env.pop();
                    let (typed, c) = result?;
                    out.extend(typed);
                    ctx = c;
                }
                Ok(ctx)
            }
        }
    }

    fn gate(&self, gate: &GateExpr, targets: usize, span: Span) -> Result<Gate, LangError> {
        let dim = 1usize << targets;
        let single = |what: &str| -> Result<(), LangError> {
            if targets == 1 {
                Ok(())
            } else {
                err(
                    LangErrorKind::BadGate(format!("{what} acts on one qubit, given {targets}")),
                    span,
                )
            }
        };
        let diag = |d: C64| {
            ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
                (0, 0) => ONE,
                (1, 1) => d,
                _ => ZERO,
            })
        };
        Ok(match gate {
            GateExpr::Named(b) => {
                single(b.name())?;
                Gate {
                    source: gate.clone(),
                    matrix: builtin_matrix(*b),
                }
            }
            GateExpr::Rk(e) => {
                single("Rk")?;
                let k = self.int(e, span)?;
                if !(0..=62).contains(&k) {
                    return err(LangErrorKind::BadGate(format!("Rk({k}) needs 0 <= k <= 62")), span);
                }
                let theta = 2.0 * PI / (1u64 << k) as f64;
                Gate {
                    source: GateExpr::Rk(Expr::Int(k)),
                    matrix: diag(C64::from_polar(1.0, theta)),
                }
            }
            GateExpr::Phase(e) => {
                let theta = self.value(e, span)?;
                Gate {
                    source: GateExpr::Phase(Expr::Real(theta)),
                    matrix: ComplexMatrix::identity(dim).scale(C64::from_polar(1.0, theta)),
                }
            }
            GateExpr::Matrix(m) => {
                if m.shape() != (dim, dim) {
                    return err(
                        LangErrorKind::BadGate(format!(
                            "a {}x{} matrix cannot act on {targets} qubit(s)",
                            m.rows(),
                            m.cols()
                        )),
                        span,
                    );
                }
                if !m.is_unitary(1e-9) {
                    return err(LangErrorKind::BadGate("matrix literal is not unitary".into()), span);
                }
                Gate {
                    source: gate.clone(),
                    matrix: m.clone(),
                }
            }
            GateExpr::Oracle { table, point } => {
                let x = self.int(point, span)?;
                let size = table.values().len() as i64;
                if !(0..size).contains(&x) {
                    return err(
                        LangErrorKind::BadIndex(format!("Uf point {x} outside 0..{}", size - 1)),
                        span,
                    );
                }
                let flip = table.eval(x as usize);
                if targets == 1 {
                    let b = if flip { Builtin::X } else { Builtin::I };
                    Gate {
                        source: GateExpr::Named(b),
                        matrix: builtin_matrix(b),
                    }
                } else {
                    // transposition of |0⟩ and |f(x)⟩
                    let swap = |i: usize| if flip && i < 2 { 1 - i } else { i };
                    let m = ComplexMatrix::from_fn(dim, dim, |r, c| if swap(c) == r { ONE } else { ZERO });
                    Gate {
                        source: GateExpr::Matrix(m.clone()),
                        matrix: m,
                    }
                }
            }
        })
    }
}

pub fn builtin_matrix(b: Builtin) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| C64::new(re, im);
    let m = |v: [C64; 4]| ComplexMatrix::new(2, 2, v.to_vec()).expect("2x2");
    match b {
        Builtin::I => ComplexMatrix::identity(2),
        Builtin::X => m([ZERO, ONE, ONE, ZERO]),
        Builtin::Y => m([ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]),
        Builtin::Z => m([ONE, ZERO, ZERO, c(-1.0, 0.0)]),
        Builtin::H => m([c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]),
        Builtin::S => m([ONE, ZERO, ZERO, c(0.0, 1.0)]),
        Builtin::T => m([ONE, ZERO, ZERO, C64::from_polar(1.0, PI / 4.0)]),
    }
}

fn same_contexts(construct: &'static str, a: &Context, b: &Context, span: Span) -> Result<(), LangError> {
    if a.same_vars(b) {
        Ok(())
    } else {
        err(
            LangErrorKind::BranchContextMismatch {
                construct,
                left: a.to_string(),
                right: b.to_string(),
            },
            span,
        )
    }
}

/// Puts the controls back at their original positions in `ctx`.
fn reinsert(ctx: &Context, controls: &[Name], branch_out: &Context) -> Context {
    let mut placed: Vec<(usize, &Name)> = controls
        .iter()
        .map(|q| (ctx.position(q).expect("declared"), q))
        .collect();
    placed.sort();
    placed
        .into_iter()
        .fold(branch_out.clone(), |c, (pos, q)| c.inserted(pos, q.clone(), Kind::Qbit))
}

/// Orders arms by label, expanding a trailing `_` or binding arm.
fn expand_arms(arms: &[Arm], n: usize, span: Span) -> Result<Vec<Arm>, LangError> {
    let count = 1usize << n;
    let mut slots: Vec<Option<&Arm>> = vec![None; count];
    for (i, arm) in arms.iter().enumerate() {
        match &arm.label {
            ArmLabel::Bits(bits) => {
                if bits.len() != n {
                    return err(
                        LangErrorKind::CaseArms(format!("label |{bits}> should have {n} bit(s)")),
                        arm.span,
                    );
                }
                let k = usize::from_str_radix(bits, 2).expect("bitstring");
                if slots[k].is_some() {
                    return err(
                        LangErrorKind::CaseArms(format!("label |{bits}> appears twice")),
                        arm.span,
                    );
                }
                slots[k] = Some(arm);
            }
            ArmLabel::Default | ArmLabel::Bind(_) => {
                if i + 1 != arms.len() {
                    return err(
                        LangErrorKind::CaseArms("a catch-all arm must come last".into()),
                        arm.span,
                    );
                }
                for s in slots.iter_mut().filter(|s| s.is_none()) {
                    *s = Some(arm);
                }
            }
        }
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(k, s)| match s {
            Some(a) => Ok(a.clone()),
            None => err(
                LangErrorKind::CaseArms(format!("no arm for |{:0width$b}>", k, width = n)),
                span,
            ),
        })
        .collect()
}

fn mentions(t: &Typed, q: &Name) -> bool {
    let any = |b: &[Typed]| b.iter().any(|s| mentions(s, q));
    match &t.stmt {
        CoreStmt::Skip => false,
        CoreStmt::New { name, .. } | CoreStmt::Discard { name } => name == q,
        CoreStmt::Apply { targets, .. } => targets.contains(q),
        CoreStmt::Measure {
            control,
            then_branch,
            else_branch,
        }
        | CoreStmt::If {
            control,
            then_branch,
            else_branch,
        } => control == q || any(then_branch) || any(else_branch),
        CoreStmt::Case { controls, arms } => controls.contains(q) || arms.iter().any(|a| any(a)),
    }
}

fn var_ref(name: &Name) -> VarRef {
    VarRef {
        name: name.base.clone(),
        index: name.index.map(Expr::Int),
        span: Span::default(),
    }
}

fn surface(block: &[Typed]) -> Block {
    block
        .iter()
        .map(|t| Stmt {
            span: t.span,
            kind: match &t.stmt {
                CoreStmt::Skip => StmtKind::Skip,
                CoreStmt::New { name, kind } => StmtKind::New {
                    kind: *kind,
                    var: var_ref(name),
                },
                CoreStmt::Apply { targets, gate } => StmtKind::Apply {
                    targets: targets.iter().map(var_ref).collect(),
                    gate: gate.source.clone(),
                },
                CoreStmt::Discard { name } => StmtKind::Discard(var_ref(name)),
                CoreStmt::Measure {
                    control,
                    then_branch,
                    else_branch,
                } => StmtKind::Measure {
                    control: var_ref(control),
                    then_branch: surface(then_branch),
                    else_branch: surface(else_branch),
                },
                CoreStmt::If {
                    control,
                    then_branch,
                    else_branch,
                } => StmtKind::If {
                    control: var_ref(control),
                    then_branch: surface(then_branch),
                    else_branch: surface(else_branch),
                },
                CoreStmt::Case { controls, arms } => StmtKind::Case {
                    controls: controls.iter().map(var_ref).collect(),
                    arms: arms
                        .iter()
                        .enumerate()
                        .map(|(k, body)| Arm {
                            label: ArmLabel::Bits(format!("{:0width$b}", k, width = controls.len())),
                            body: surface(body),
                            span: t.span,
                        })
                        .collect(),
                },
            },
        })
        .collect()
}

/// The loop-free core program: loops unrolled, indices literal, oracle
/// gates replaced by their matrices and `case` arms listed exhaustively.
pub fn elaborate(typed: &TypedProgram) -> Program {
    Program {
        body: surface(&typed.body),
    }
}

/// A statement that breaks the closed-system reading of alternation, where
/// every branch is a unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct LintWarning {
    pub span: Span,
    pub message: String,
}

/// Flags `new`, `discard` and `measure` inside alternation branches.
pub fn lint_unitary_branches(typed: &TypedProgram) -> Vec<LintWarning> {
    fn walk(block: &[Typed], inside: bool, out: &mut Vec<LintWarning>) {
        for t in block {
            let what = match &t.stmt {
                CoreStmt::New { .. } => Some("`new`"),
                CoreStmt::Discard { .. } => Some("`discard`"),
                CoreStmt::Measure { .. } => Some("`measure`"),
                _ => None,
            };
            if inside {
                if let Some(what) = what {
                    out.push(LintWarning {
                        span: t.span,
                        message: format!("{what} inside an alternation branch is not a unitary operation"),
                    });
                }
            }
            match &t.stmt {
                CoreStmt::Measure {
                    then_branch,
                    else_branch,
                    ..
                } => {
                    walk(then_branch, inside, out);
                    walk(else_branch, inside, out);
                }
                CoreStmt::If {
                    then_branch,
                    else_branch,
                    ..
                } => {
                    walk(then_branch, true, out);
                    walk(else_branch, true, out);
                }
                CoreStmt::Case { arms, .. } => arms.iter().for_each(|a| walk(a, true, out)),
                _ => {}
            }
        }
    }
    let mut out = Vec::new();
    walk(&typed.body, false, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    fn check(src: &str, ctx: &Context) -> Result<TypedProgram, LangError> {
        typecheck(&parse(src).unwrap(), ctx)
    }

    fn kind(src: &str, ctx: &Context) -> LangErrorKind {
        check(src, ctx).unwrap_err().kind
    }

    #[test]
    fn control_capture() {
        let ctx = Context::qubits_named(&["q"]);
        assert_eq!(
            kind("if q then { q *= X } else { skip }", &ctx),
            LangErrorKind::ControlCapture { control: "q".into() }
        );
        let ctx = Context::qubits_named(&["q", "r"]);
        assert_eq!(
            kind(
                "if q then { skip } else { if r then { skip } else { discard q } }",
                &ctx
            ),
            LangErrorKind::ControlCapture { control: "q".into() }
        );
        assert_eq!(
            kind("if q then { new qbit q } else { new qbit q }", &ctx),
            LangErrorKind::ControlCapture { control: "q".into() }
        );
    }

    #[test]
    fn branch_context_mismatch() {
        let ctx = Context::qubits_named(&["q0", "q1"]);
        let e = check("if q0 then { discard q1 } else { skip }", &ctx).unwrap_err();
        assert_eq!(
            e.to_string(),
            "1:1: branches of `if` end in different contexts: [] vs [q1:qbit]"
        );
        assert!(matches!(
            kind("measure q0 then { discard q1 } else { skip }", &ctx),
            LangErrorKind::BranchContextMismatch {
                construct: "measure",
                ..
            }
        ));
    }

    #[test]
    fn unknown_names_and_kinds() {
        let ctx = Context::new();
        assert_eq!(kind("x *= H", &ctx), LangErrorKind::UnknownName("x".into()));
        let e = check("new bit b; if b then { skip } else { skip }", &ctx).unwrap_err();
        assert_eq!(e.to_string(), "1:15: `b` is a bit, but a quantum `if` requires a qbit");
        assert!(matches!(
            kind("new bit b; b *= X", &ctx),
            LangErrorKind::KindError { .. }
        ));
        assert_eq!(
            kind("new qbit a; new qbit a", &ctx),
            LangErrorKind::DuplicateName("a".into())
        );
        assert_eq!(
            kind("new qbit a; a, a *= [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]", &ctx),
            LangErrorKind::DuplicateTarget("a".into())
        );
    }

    #[test]
    fn deutsch_program_is_well_typed() {
        let src = "new qbit q0, q1\nq0 *= H\nq1 *= X\nq1 *= H\n\
                   if q0 then { q1 *= Uf(01, 0) } else { q1 *= Uf(01, 1) }\nq0 *= H";
        let t = check(src, &Context::new()).unwrap();
        assert_eq!(t.output, Context::qubits_named(&["q0", "q1"]));
    }

    #[test]
    fn if_keeps_control_position() {
        let ctx = Context::qubits_named(&["a", "q", "b"]);
        let t = check(
            "if q then { discard a; new qbit a } else { discard a; new qbit a }",
            &ctx,
        )
        .unwrap();
        assert_eq!(t.output, Context::qubits_named(&["b", "q", "a"]));
    }

    #[test]
    fn loops_unroll_and_bounds_must_be_constant() {
        let t = check(
            "new qbit q[1], q[2], q[3]\nfor i = 1 to 3 { for k = 2 to 3 - i + 1 { q[i] *= Rk(k) } }",
            &Context::new(),
        )
        .unwrap();
        let gates = t
            .body
            .iter()
            .filter(|s| matches!(s.stmt, CoreStmt::Apply { .. }))
            .count();
        assert_eq!(gates, 3);
        let t = check("for i = 3 to 1 { skip }", &Context::new()).unwrap();
        assert!(t.body.is_empty());
        assert_eq!(
            kind("for i = 1 to n { skip }", &Context::new()),
            LangErrorKind::NonConstantBound("n".into())
        );
        assert!(matches!(
            kind("new qbit q[0 - 1]", &Context::new()),
            LangErrorKind::BadIndex(_)
        ));
        assert!(matches!(
            kind("new qbit q[1 / 2]", &Context::new()),
            LangErrorKind::BadIndex(_)
        ));
    }

    #[test]
    fn case_arms_expand() {
        let ctx = Context::qubits_named(&["a", "b", "y"]);
        let t = check("case (a, b) of |x> -> { y *= Uf(0001, x) }", &ctx).unwrap();
        let CoreStmt::Case { arms, .. } = &t.body[0].stmt else {
            panic!()
        };
        assert_eq!(arms.len(), 4);
        let gates: Vec<&GateExpr> = arms
            .iter()
            .map(|a| match &a[0].stmt {
                CoreStmt::Apply { gate, .. } => &gate.source,
                _ => panic!(),
            })
            .collect();
        assert_eq!(
            gates,
            [
                &GateExpr::Named(Builtin::I),
                &GateExpr::Named(Builtin::I),
                &GateExpr::Named(Builtin::I),
                &GateExpr::Named(Builtin::X)
            ]
        );
        assert!(matches!(
            kind("case (a, b) of |00> -> { } |01> -> { }", &ctx),
            LangErrorKind::CaseArms(_)
        ));
        assert!(matches!(
            kind("case (a) of |0> -> { } |0> -> { }", &ctx),
            LangErrorKind::CaseArms(_)
        ));
        assert!(matches!(
            kind("case (a) of |_> -> { } |0> -> { }", &ctx),
            LangErrorKind::CaseArms(_)
        ));
        assert!(matches!(
            kind("case (a) of |01> -> { } |_> -> { }", &ctx),
            LangErrorKind::CaseArms(_)
        ));
        assert_eq!(
            kind("case (a) of |0> -> { a *= X } |1> -> { }", &ctx),
            LangErrorKind::ControlCapture { control: "a".into() }
        );
    }

    #[test]
    fn gate_validation() {
        let ctx = Context::qubits_named(&["a", "b"]);
        assert!(matches!(kind("a, b *= H", &ctx), LangErrorKind::BadGate(_)));
        assert!(matches!(kind("a *= [[1, 1], [0, 1]]", &ctx), LangErrorKind::BadGate(_)));
        assert!(matches!(kind("a *= Uf(01, 2)", &ctx), LangErrorKind::BadIndex(_)));
        assert!(check("a, b *= Phase(pi)", &ctx).is_ok());
    }

    #[test]
    fn elaboration_reparses_and_retypes() {
        let ctx = Context::qubits_named(&["a", "b", "y"]);
        let src = "for i = 0 to 1 { if a then { skip } else { b *= Rk(i + 1) } }\n\
                   case (a, b) of |x> -> { y *= Uf(0110, x) }";
        let t = check(src, &ctx).unwrap();
        let core = elaborate(&t);
        let reparsed = parse(&core.to_string()).unwrap();
        assert_eq!(reparsed, core);
        let again = typecheck(&reparsed, &ctx).unwrap();
        assert_eq!(again.output, t.output);
        assert_eq!(
            again.body,
            t.body
                .iter()
                .cloned()
                .map(|mut s| {
                    s.span = Span::default();
                    s
                })
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn lint_flags_non_unitary_branches() {
        let ctx = Context::qubits_named(&["a", "b"]);
        let t = check(
            "if a then { measure b then { } else { } } else { skip }\nmeasure a then { } else { }",
            &ctx,
        )
        .unwrap();
        let w = lint_unitary_branches(&t);
        assert_eq!(w.len(), 1);
        assert!(w[0].message.contains("`measure`"));
    }
}
