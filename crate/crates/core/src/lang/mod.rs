//! The surface language: parsing, printing, typing and elaboration.

pub mod ast;
mod check;
mod context;
mod error;
mod lexer;
mod parser;
mod pretty;

pub use ast::{
    Arm, ArmLabel, BinOp, Block, Builtin, Expr, GateExpr, Kind, Program, Span, Stmt, StmtKind, TruthTable, VarRef,
};
pub use check::{
    builtin_matrix, elaborate, eval_const, lint_unitary_branches, typecheck, CoreStmt, Gate, LintWarning, Typed,
    TypedProgram,
};
pub use context::{Context, Name};
pub use error::{LangError, LangErrorKind};
pub use parser::parse;

/// Parses and typechecks `src` from the context `initial`.
pub fn compile(src: &str, initial: &Context) -> Result<TypedProgram, LangError> {
    typecheck(&parse(src)?, initial)
}
