//! Typing contexts and the state-space layout they induce.

use std::fmt;

use super::ast::Kind;
use crate::linalg::Signature;

/// A resolved variable name: `q` or `q[3]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    pub base: String,
    pub index: Option<i64>,
}

impl Name {
    pub fn plain(base: impl Into<String>) -> Self {
        Self {
            base: base.into(),
            index: None,
        }
    }

    pub fn indexed(base: impl Into<String>, index: i64) -> Self {
        Self {
            base: base.into(),
            index: Some(index),
        }
    }

    /// Parses `q` or `q[3]`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let valid = |b: &str| {
            let mut cs = b.chars();
            matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
                && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
        };
        match s.split_once('[') {
            Some((base, rest)) => {
                let idx = rest.strip_suffix(']')?.trim().parse().ok()?;
                valid(base).then(|| Self::indexed(base, idx))
            }
            None => valid(s).then(|| Self::plain(s)),
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}[{i}]", self.base),
            None => f.write_str(&self.base),
        }
    }
}

/// Ordered list of declared variables.
///
/// The induced layout: bits select one of `2^k` blocks (the `j`-th bit of
/// the context is bit `j` of the block index, so the most recently
/// declared bit is the most significant), and each block is the register of
/// all `m` qubits with the first-listed qubit as the leading tensor factor.
/// The signature is therefore `(2^m, …, 2^m)` with `2^k` blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    vars: Vec<(Name, Kind)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vars(vars: impl IntoIterator<Item = (Name, Kind)>) -> Result<Self, Name> {
        let mut ctx = Self::new();
        for (n, k) in vars {
            if ctx.contains(&n) {
                return Err(n);
            }
            ctx.vars.push((n, k));
        }
        Ok(ctx)
    }

    /// Context of plain qubit names, in order.
    pub fn qubits_named(names: &[&str]) -> Self {
        Self::from_vars(names.iter().map(|n| (Name::plain(*n), Kind::Qbit))).expect("distinct names")
    }

    pub fn vars(&self) -> &[(Name, Kind)] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn position(&self, name: &Name) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.position(name).is_some()
    }

    pub fn kind_of(&self, name: &Name) -> Option<Kind> {
        self.vars.iter().find(|(n, _)| n == name).map(|&(_, k)| k)
    }

    pub fn push(&mut self, name: Name, kind: Kind) {
        debug_assert!(!self.contains(&name));
        self.vars.push((name, kind));
    }

    pub fn with(&self, name: Name, kind: Kind) -> Self {
        let mut c = self.clone();
        c.push(name, kind);
        c
    }

    /// Same variables with the same kinds, in any order.
    pub fn same_vars(&self, other: &Context) -> bool {
        self.len() == other.len() && self.vars.iter().all(|(n, k)| other.kind_of(n) == Some(*k))
    }

    /// The context without `name`.
    pub fn without(&self, name: &Name) -> Self {
        Self {
            vars: self.vars.iter().filter(|(n, _)| n != name).cloned().collect(),
        }
    }

    /// Inserts at `pos`, clamped to the end.
    pub fn inserted(&self, pos: usize, name: Name, kind: Kind) -> Self {
        let mut vars = self.vars.clone();
        vars.insert(pos.min(vars.len()), (name, kind));
        Self { vars }
    }

    pub fn qubits(&self) -> Vec<&Name> {
        self.of_kind(Kind::Qbit)
    }

    pub fn bits(&self) -> Vec<&Name> {
        self.of_kind(Kind::Bit)
    }

    fn of_kind(&self, kind: Kind) -> Vec<&Name> {
        self.vars.iter().filter(|(_, k)| *k == kind).map(|(n, _)| n).collect()
    }

    pub fn signature(&self) -> Signature {
        let blocks = 1usize << self.bits().len();
        let dim = 1usize << self.qubits().len();
        Signature::new(vec![dim; blocks]).expect("positive blocks")
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (n, k)) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}:{k}")?;
        }
        f.write_str("]")
    }
}
