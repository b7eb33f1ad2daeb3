//! Pretty-printer. Output re-parses to an equal tree.

use std::fmt::{self, Write};

use super::ast::*;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Real(x) => write!(f, "{x:?}"),
            Expr::Pi => f.write_str("pi"),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Sqrt(e) => write!(f, "sqrt({e})"),
            Expr::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {sym} {b})")
            }
        }
    }
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.index {
            // top-level parentheses are redundant inside brackets
            Some(e) => write!(f, "{}[{}]", self.name, strip_parens(&e.to_string())),
            None => f.write_str(&self.name),
        }
    }
}

fn strip_parens(s: &str) -> &str {
    if s.starts_with('(') && s.ends_with(')') {
        let inner = &s[1..s.len() - 1];
        // only when the outer pair matches
        let mut depth = 0i32;
        for c in inner.chars() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return s;
                    }
                }
                _ => {}
            }
        }
        return inner;
    }
    s
}

impl fmt::Display for GateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateExpr::Named(b) => f.write_str(b.name()),
            GateExpr::Rk(e) => write!(f, "Rk({})", strip_parens(&e.to_string())),
            GateExpr::Phase(e) => write!(f, "Phase({})", strip_parens(&e.to_string())),
            GateExpr::Oracle { table, point } => {
                write!(f, "Uf({table}, {})", strip_parens(&point.to_string()))
            }
            GateExpr::Matrix(m) => {
                f.write_char('[')?;
                for r in 0..m.rows() {
                    if r > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_char('[')?;
                    for c in 0..m.cols() {
                        if c > 0 {
                            f.write_str(", ")?;
                        }
                        let z = m.get(r, c);
                        write!(f, "({:?}, {:?})", z.re, z.im)?;
                    }
                    f.write_char(']')?;
                }
                f.write_char(']')
            }
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn write_block(f: &mut fmt::Formatter<'_>, block: &Block, depth: usize) -> fmt::Result {
    if block.is_empty() {
        return f.write_str("{ }");
    }
    f.write_str("{\n")?;
    for s in block {
        write_stmt(f, s, depth + 1)?;
    }
    write!(f, "{}}}", "  ".repeat(depth))
}

fn write_stmt(f: &mut fmt::Formatter<'_>, stmt: &Stmt, depth: usize) -> fmt::Result {
    let pad = "  ".repeat(depth);
    f.write_str(&pad)?;
    match &stmt.kind {
        StmtKind::Skip => f.write_str("skip")?,
        StmtKind::New { kind, var } => write!(f, "new {kind} {var}")?,
        StmtKind::Apply { targets, gate } => write!(f, "{} *= {gate}", join(targets))?,
        StmtKind::Discard(v) => write!(f, "discard {v}")?,
        StmtKind::Measure {
            control,
            then_branch,
            else_branch,
        }
        | StmtKind::If {
            control,
            then_branch,
            else_branch,
        } => {
            let kw = if matches!(stmt.kind, StmtKind::Measure { .. }) {
                "measure"
            } else {
                "if"
            };
            write!(f, "{kw} {control} then ")?;
            write_block(f, then_branch, depth)?;
            f.write_str(" else ")?;
            write_block(f, else_branch, depth)?;
        }
        StmtKind::Case { controls, arms } => {
            writeln!(f, "case ({}) of", join(controls))?;
            for (i, arm) in arms.iter().enumerate() {
                let label = match &arm.label {
                    ArmLabel::Bits(b) => b.as_str(),
                    ArmLabel::Default => "_",
                    ArmLabel::Bind(v) => v.as_str(),
                };
                write!(f, "{pad}  |{label}> -> ")?;
                write_block(f, &arm.body, depth + 1)?;
                if i + 1 < arms.len() {
                    f.write_char('\n')?;
                }
            }
        }
        StmtKind::For { var, lo, hi, body } => {
            write!(f, "for {var} = {lo} to {hi} ")?;
            write_block(f, body, depth)?;
        }
    }
    f.write_char('\n')
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_stmt(f, self, 0)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.body {
            write_stmt(f, s, 0)?;
        }
        Ok(())
    }
}
