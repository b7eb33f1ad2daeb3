//! Recursive-descent parser.
//!
//! ```text
//! program := stmt*
//! stmt    := "skip"
//!          | "new" ("qbit" | "bit") var ("," var)*
//!          | var ("," var)* "*=" gate
//!          | "discard" var
//!          | "measure" var "then" block "else" block
//!          | "if" var "then" block "else" block
//!          | "case" "(" var ("," var)* ")" "of" arm+
//!          | "for" IDENT "=" expr "to" expr block
//! arm     := "|" (BITS | "_" | IDENT) ">" "->" block
//! block   := "{" stmt* "}"
//! var     := IDENT ("[" expr "]")?
//! gate    := I | X | Y | Z | H | S | T | "Rk" "(" expr ")" | "Phase" "(" expr ")"
//!          | "Uf" "(" BITS "," expr ")" | "[" row ("," row)* "]"
//! ```
//!
//! Statements may be separated by optional semicolons.

use super::ast::*;
use super::error::{LangError, LangErrorKind};
use super::lexer::{tokenize, Tok, Token};
use crate::linalg::{ComplexMatrix, C64};

const KEYWORDS: &[&str] = &[
    "skip", "new", "qbit", "bit", "discard", "measure", "if", "then", "else", "case", "of", "for", "to", "pi", "sqrt",
];

pub fn parse(src: &str) -> Result<Program, LangError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let body = p.stmts_until(&Tok::Eof)?;
    Ok(Program { body })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, LangError> {
        Err(LangError::new(LangErrorKind::Syntax(msg.into()), self.span()))
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, LangError> {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), LangError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), LangError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, LangError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected(what),
        }
    }

    fn stmts_until(&mut self, end: &Tok) -> Result<Block, LangError> {
        let mut out = Vec::new();
        loop {
            while self.eat(&Tok::Semi) {}
            if self.peek() == end {
                return Ok(out);
            }
            if *self.peek() == Tok::Eof {
                return self.unexpected("`}`");
            }
            self.stmt(&mut out)?;
        }
    }

    fn block(&mut self) -> Result<Block, LangError> {
        self.expect(Tok::LBrace, "`{`")?;
        let body = self.stmts_until(&Tok::RBrace)?;
        self.expect(Tok::RBrace, "`}`")?;
        Ok(body)
    }

    fn var(&mut self) -> Result<VarRef, LangError> {
        let span = self.span();
        let name = self.ident("a variable name")?;
        let index = if self.eat(&Tok::LBracket) {
            let e = self.expr()?;
            self.expect(Tok::RBracket, "`]`")?;
            Some(e)
        } else {
            None
        };
        Ok(VarRef { name, index, span })
    }

    fn var_list(&mut self) -> Result<Vec<VarRef>, LangError> {
        let mut vars = vec![self.var()?];
        while self.eat(&Tok::Comma) {
            vars.push(self.var()?);
        }
        Ok(vars)
    }

    fn stmt(&mut self, out: &mut Block) -> Result<(), LangError> {
        let span = self.span();
        let push = |out: &mut Block, kind| out.push(Stmt { kind, span });
        if self.eat_keyword("skip") {
            push(out, StmtKind::Skip);
        } else if self.eat_keyword("new") {
            let kind = if self.eat_keyword("qbit") {
                Kind::Qbit
            } else if self.eat_keyword("bit") {
                Kind::Bit
            } else {
                return self.unexpected("`qbit` or `bit`");
            };
            for var in self.var_list()? {
                out.push(Stmt {
                    span: var.span,
                    kind: StmtKind::New { kind, var },
                });
            }
        } else if self.eat_keyword("discard") {
            push(out, StmtKind::Discard(self.var()?));
        } else if self.eat_keyword("measure") {
            let control = self.var()?;
            self.expect_keyword("then")?;
            let then_branch = self.block()?;
            self.expect_keyword("else")?;
            let else_branch = self.block()?;
            push(
                out,
                StmtKind::Measure {
                    control,
                    then_branch,
                    else_branch,
                },
            );
        } else if self.eat_keyword("if") {
            let control = self.var()?;
            self.expect_keyword("then")?;
            let then_branch = self.block()?;
            self.expect_keyword("else")?;
            let else_branch = self.block()?;
            push(
                out,
                StmtKind::If {
                    control,
                    then_branch,
                    else_branch,
                },
            );
        } else if self.eat_keyword("case") {
            self.expect(Tok::LParen, "`(`")?;
            let controls = self.var_list()?;
            self.expect(Tok::RParen, "`)`")?;
            self.expect_keyword("of")?;
            let mut arms = Vec::new();
            while *self.peek() == Tok::Bar {
                arms.push(self.arm()?);
            }
            if arms.is_empty() {
                return self.unexpected("a case arm `|...> ->`");
            }
            push(out, StmtKind::Case { controls, arms });
        } else if self.eat_keyword("for") {
            let var = self.ident("a loop variable")?;
            self.expect(Tok::Eq, "`=`")?;
            let lo = self.expr()?;
            self.expect_keyword("to")?;
            let hi = self.expr()?;
            let body = self.block()?;
            push(out, StmtKind::For { var, lo, hi, body });
        } else if matches!(self.peek(), Tok::Ident(_)) {
            let targets = self.var_list()?;
            self.expect(Tok::StarEq, "`*=`")?;
            let gate = self.gate()?;
            push(out, StmtKind::Apply { targets, gate });
        } else {
            return self.unexpected("a statement");
        }
        Ok(())
    }

    fn arm(&mut self) -> Result<Arm, LangError> {
        let span = self.span();
        self.expect(Tok::Bar, "`|`")?;
        let label = match self.peek().clone() {
            Tok::Number(bits) if bits.chars().all(|c| c == '0' || c == '1') => {
                self.bump();
                ArmLabel::Bits(bits)
            }
            Tok::Underscore => {
                self.bump();
                ArmLabel::Default
            }
            Tok::Ident(_) => ArmLabel::Bind(self.ident("an arm label")?),
            _ => return self.unexpected("a bitstring, `_` or a name"),
        };
        self.expect(Tok::Gt, "`>`")?;
        self.expect(Tok::Arrow, "`->`")?;
        let body = self.block()?;
        Ok(Arm { label, body, span })
    }

    fn gate(&mut self) -> Result<GateExpr, LangError> {
        if *self.peek() == Tok::LBracket {
            return self.matrix().map(GateExpr::Matrix);
        }
        let name = match self.peek().clone() {
            Tok::Ident(s) => s,
            _ => return self.unexpected("a gate"),
        };
        if let Some(b) = Builtin::from_name(&name) {
            self.bump();
            return Ok(GateExpr::Named(b));
        }
        match name.as_str() {
            "Rk" | "Phase" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(if name == "Rk" {
                    GateExpr::Rk(e)
                } else {
                    GateExpr::Phase(e)
                })
            }
            "Uf" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let table = match self.peek().clone() {
                    Tok::Number(bits) => match TruthTable::from_bits(&bits) {
                        Some(t) => t,
                        None => return self.error(format!("truth table `{bits}` must be a bitstring of length 2^n")),
                    },
                    _ => return self.unexpected("a truth table bitstring"),
                };
                self.bump();
                self.expect(Tok::Comma, "`,`")?;
                let point = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(GateExpr::Oracle { table, point })
            }
            _ => self.error(format!("unknown gate `{name}`")),
        }
    }

    fn matrix(&mut self) -> Result<ComplexMatrix, LangError> {
        let start = self.span();
        self.expect(Tok::LBracket, "`[`")?;
        let mut rows: Vec<Vec<C64>> = Vec::new();
        loop {
            self.expect(Tok::LBracket, "`[`")?;
            let mut row = vec![self.entry()?];
            while self.eat(&Tok::Comma) {
                row.push(self.entry()?);
            }
            self.expect(Tok::RBracket, "`]`")?;
            rows.push(row);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBracket, "`]`")?;
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LangError::new(
                LangErrorKind::Syntax("matrix rows have different lengths".into()),
                start,
            ));
        }
        let n = rows.len();
        ComplexMatrix::new(n, cols, rows.into_iter().flatten().collect())
            .map_err(|e| LangError::new(LangErrorKind::Syntax(e.to_string()), start))
    }

    /// A matrix entry: `expr` or `(re, im)`, constant-folded.
    fn entry(&mut self) -> Result<C64, LangError> {
        let span = self.span();
        let value = |e: Expr| {
            super::check::eval_const(&e).map_err(|name| LangError::new(LangErrorKind::NonConstantBound(name), span))
        };
        if self.eat(&Tok::LParen) {
            let re = self.expr()?;
            if self.eat(&Tok::Comma) {
                let im = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(C64::new(value(re)?, value(im)?));
            }
            self.expect(Tok::RParen, "`)` or `,`")?;
            return Ok(C64::new(value(re)?, 0.0));
        }
        Ok(C64::new(value(self.expr()?)?, 0.0))
    }

    fn expr(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, LangError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, LangError> {
        match self.peek().clone() {
            Tok::Number(raw) => {
                self.bump();
                if raw.contains(['.', 'e', 'E']) {
                    match raw.parse::<f64>() {
                        Ok(x) if x.is_finite() => Ok(Expr::Real(x)),
                        _ => self.error(format!("bad number `{raw}`")),
                    }
                } else {
                    match raw.parse::<i64>() {
                        Ok(n) => Ok(Expr::Int(n)),
                        Err(_) => self.error(format!("integer `{raw}` out of range")),
                    }
                }
            }
            Tok::Ident(s) if s == "pi" => {
                self.bump();
                Ok(Expr::Pi)
            }
            Tok::Ident(s) if s == "sqrt" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Sqrt(Box::new(e)))
            }
            Tok::Ident(_) => Ok(Expr::Var(self.ident("an expression")?)),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => self.unexpected("an expression"),
        }
    }
}
