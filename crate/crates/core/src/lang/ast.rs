//! Abstract syntax of the surface language.

use std::fmt;

use crate::linalg::ComplexMatrix;

/// Source position (1-based). Positions never take part in equality, so two
/// trees that differ only in layout compare equal.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub fn new(line: usize, col: usize) -> Self {
        Self { line, col }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Qbit,
    Bit,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Qbit => "qbit",
            Kind::Bit => "bit",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Meta-level arithmetic: loop bounds, register indices, rotation angles.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Real(f64),
    Pi,
    Var(String),
    Neg(Box<Expr>),
    Sqrt(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

/// A variable reference, optionally indexed: `q` or `q[i + 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct VarRef {
    pub name: String,
    pub index: Option<Expr>,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
}

impl Builtin {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "I" => Builtin::I,
            "X" => Builtin::X,
            "Y" => Builtin::Y,
            "Z" => Builtin::Z,
            "H" => Builtin::H,
            "S" => Builtin::S,
            "T" => Builtin::T,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::I => "I",
            Builtin::X => "X",
            Builtin::Y => "Y",
            Builtin::Z => "Z",
            Builtin::H => "H",
            Builtin::S => "S",
            Builtin::T => "T",
        }
    }
}

/// Truth table of `f : 𝔹ⁿ → 𝔹`, indexed by `x = 0 … 2ⁿ − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    values: Vec<bool>,
}

impl TruthTable {
    pub fn new(values: Vec<bool>) -> Option<Self> {
        let len = values.len();
        if len == 0 || !len.is_power_of_two() {
            return None;
        }
        Some(Self {
            n: len.trailing_zeros() as usize,
            values,
        })
    }

    /// Parses a bitstring such as `0110`.
    pub fn from_bits(bits: &str) -> Option<Self> {
        let values = bits
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Self::new(values)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Self {
        Self {
            n,
            values: (0..1usize << n).map(f).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn eval(&self, x: usize) -> bool {
        self.values[x]
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }

    pub fn is_balanced(&self) -> bool {
        2 * self.values.iter().filter(|&&v| v).count() == self.values.len()
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.values {
            f.write_str(if v { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateExpr {
    Named(Builtin),
    /// `R_k = Π₀ + e^{2πi/2^k} Π₁`.
    Rk(Expr),
    /// Global phase `e^{iθ}`.
    Phase(Expr),
    Matrix(ComplexMatrix),
    /// `U_x` for the function `table`: transposes `|0⟩` with `|f(x)⟩`.
    Oracle {
        table: TruthTable,
        point: Expr,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ArmLabel {
    /// An explicit classical state such as `|01>`.
    Bits(String),
    /// `|_>`: every label not listed earlier.
    Default,
    /// `|x>`: every label not listed earlier, with `x` bound to its value.
    Bind(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arm {
    pub label: ArmLabel,
    pub body: Block,
    pub span: Span,
}

pub type Block = Vec<Stmt>;

#[derive(Clone, Debug, PartialEq)]
pub enum StmtKind {
    Skip,
    New {
        kind: Kind,
        var: VarRef,
    },
    Apply {
        targets: Vec<VarRef>,
        gate: GateExpr,
    },
    Discard(VarRef),
    Measure {
        control: VarRef,
        then_branch: Block,
        else_branch: Block,
    },
    If {
        control: VarRef,
        then_branch: Block,
        else_branch: Block,
    },
    Case {
        controls: Vec<VarRef>,
        arms: Vec<Arm>,
    },
    For {
        var: String,
        lo: Expr,
        hi: Expr,
        body: Block,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

impl Stmt {
    pub fn new(kind: StmtKind) -> Self {
        Self {
            kind,
            span: Span::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Program {
    pub body: Block,
}
