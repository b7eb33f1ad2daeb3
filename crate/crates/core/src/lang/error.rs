use std::fmt;

use thiserror::Error;

use super::ast::{Kind, Span};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum LangErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("control qubit `{control}` is used inside a branch of its own alternation")]
    ControlCapture { control: String },
    #[error("branches of `{construct}` end in different contexts: {left} vs {right}")]
    BranchContextMismatch {
        construct: &'static str,
        left: String,
        right: String,
    },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("`{name}` is a {found}, but {construct} requires a {expected}")]
    KindError {
        name: String,
        found: Kind,
        expected: Kind,
        construct: &'static str,
    },
    #[error("`{0}` is already declared")]
    DuplicateName(String),
    #[error("`{0}` appears more than once")]
    DuplicateTarget(String),
    #[error("`{0}` is not a loop variable; bounds, indices and angles must be constant")]
    NonConstantBound(String),
    #[error("invalid index: {0}")]
    BadIndex(String),
    #[error("invalid gate: {0}")]
    BadGate(String),
    #[error("invalid case arms: {0}")]
    CaseArms(String),
}

#[derive(Clone, Debug, PartialEq, Error)]
pub struct LangError {
    pub kind: LangErrorKind,
    pub span: Span,
}

impl LangError {
    pub fn new(kind: LangErrorKind, span: Span) -> Self {
        Self { kind, span }
    }
}

impl fmt::Display for LangError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.kind)
    }
}
