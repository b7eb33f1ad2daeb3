//! Generators for the standard example programs.
//!
//! Each generator writes source text and parses it, so the corpus also
//! exercises the front end. Programs that denote a unitary on an existing
//! register (QFT, the oracle) come with the context they expect.

use std::fmt::Write;

use thiserror::Error;

use crate::lang::{parse, Context, Kind, Name, Program};

pub use crate::lang::TruthTable;

/// Largest Deutsch–Jozsa input arity.
pub const MAX_DJ_ARITY: usize = 4;
/// Largest QFT register.
pub const MAX_QFT_QUBITS: usize = 6;
/// Largest Grover oracle arity.
pub const MAX_ORACLE_ARITY: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusError {
    #[error("arity {found} is not supported here (allowed: {min}..={max})")]
    UnsupportedArity { found: usize, min: usize, max: usize },
    #[error("marked element {x0} does not fit in {n} bit(s)")]
    MarkedOutOfRange { x0: usize, n: usize },
}

fn arity_check(found: usize, min: usize, max: usize) -> Result<(), CorpusError> {
    if (min..=max).contains(&found) {
        Ok(())
    } else {
        Err(CorpusError::UnsupportedArity { found, min, max })
    }
}

fn parsed(src: &str) -> Program {
    parse(src).unwrap_or_else(|e| panic!("generated program does not parse: {e}\n{src}"))
}

fn register(base: &str, lo: usize, n: usize) -> Vec<String> {
    (lo..lo + n).map(|i| format!("{base}[{i}]")).collect()
}

pub fn deutsch_source(f: &TruthTable) -> Result<String, CorpusError> {
    arity_check(f.arity(), 1, 1)?;
    Ok(format!(
        "new qbit q0, q1\n\
         q0 *= H\n\
         q1 *= X\n\
         q1 *= H\n\
         if q0 then {{ q1 *= Uf({f}, 0) }} else {{ q1 *= Uf({f}, 1) }}\n\
         q0 *= H\n"
    ))
}

/// Deutsch's algorithm for `f : 𝔹 → 𝔹`.
pub fn gen_deutsch(f: &TruthTable) -> Result<Program, CorpusError> {
    deutsch_source(f).map(|s| parsed(&s))
}

pub fn deutsch_jozsa_source(f: &TruthTable) -> Result<String, CorpusError> {
    let n = f.arity();
    arity_check(n, 1, MAX_DJ_ARITY)?;
    let q0 = register("q0", 0, n).join(", ");
    let mut s = String::new();
    writeln!(s, "new qbit {q0}").unwrap();
    writeln!(s, "new qbit q1").unwrap();
    writeln!(s, "for i = 0 to {} {{ q0[i] *= H }}", n - 1).unwrap();
    writeln!(s, "q1 *= X").unwrap();
    writeln!(s, "q1 *= H").unwrap();
    writeln!(s, "case ({q0}) of |x> -> {{ q1 *= Uf({f}, x) }}").unwrap();
    writeln!(s, "for i = 0 to {} {{ q0[i] *= H }}", n - 1).unwrap();
    Ok(s)
}

/// Deutsch–Jozsa for `f : 𝔹ⁿ → 𝔹`, `n ≤ 4`. The input register is
/// `q0[0] … q0[n-1]`, with `q0[0]` the most significant bit of `x`.
pub fn gen_deutsch_jozsa(f: &TruthTable) -> Result<Program, CorpusError> {
    deutsch_jozsa_source(f).map(|s| parsed(&s))
}

pub fn qft_source(n: usize) -> Result<String, CorpusError> {
    arity_check(n, 1, MAX_QFT_QUBITS)?;
    Ok(format!(
        "for i = 1 to {n} {{\n\
         \x20 q[i] *= H\n\
         \x20 for k = 2 to {n} - i + 1 {{\n\
         \x20   if q[k + i - 1] then {{ skip }} else {{ q[i] *= Rk(k) }}\n\
         \x20 }}\n\
         }}\n"
    ))
}

/// The QFT circuit on `q[1] … q[n]`, without the final swaps, so it equals
/// the DFT up to reversal of the qubit order.
pub fn gen_qft(n: usize) -> Result<Program, CorpusError> {
    qft_source(n).map(|s| parsed(&s))
}

/// `q[1] … q[n]`.
pub fn qft_context(n: usize) -> Context {
    qubits(&register("q", 1, n))
}

pub fn grover_oracle_source(x0: usize, n: usize) -> Result<String, CorpusError> {
    arity_check(n, 1, MAX_ORACLE_ARITY)?;
    if x0 >= 1 << n {
        return Err(CorpusError::MarkedOutOfRange { x0, n });
    }
    let f = TruthTable::from_fn(n, |x| x == x0);
    let x = register("x", 0, n).join(", ");
    Ok(format!("case ({x}) of |k> -> {{ y *= Uf({f}, k) }}\n"))
}

/// `Ũ_f` for the indicator of `x0`, on `x[0] … x[n-1], y`.
pub fn gen_grover_oracle(x0: usize, n: usize) -> Result<Program, CorpusError> {
    grover_oracle_source(x0, n).map(|s| parsed(&s))
}

/// `x[0] … x[n-1], y`.
pub fn oracle_context(n: usize) -> Context {
    let mut names = register("x", 0, n);
    names.push("y".into());
    qubits(&names)
}

fn qubits(names: &[String]) -> Context {
    Context::from_vars(names.iter().map(|s| (Name::parse(s).expect("valid name"), Kind::Qbit))).expect("distinct names")
}

/// A program with the context it runs in.
#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub source: String,
    pub program: Program,
    pub input: Context,
}

impl Entry {
    fn new(name: impl Into<String>, source: String, input: Context) -> Self {
        Self {
            name: name.into(),
            program: parsed(&source),
            source,
            input,
        }
    }
}

/// Every example program, with small fixed parameters.
pub fn all() -> Vec<Entry> {
    let ab = || Context::qubits_named(&["q0", "q1"]);
    let mut out = vec![
        Entry::new("controlled-not", "if q0 then { skip } else { q1 *= X }\n".into(), ab()),
        Entry::new(
            "toffoli",
            "if q0 then { skip } else { if q1 then { skip } else { q2 *= X } }\n".into(),
            Context::qubits_named(&["q0", "q1", "q2"]),
        ),
        Entry::new(
            "controlled-phase",
            "if q0 then { skip } else { q1 *= Phase(pi) }\n".into(),
            ab(),
        ),
        Entry::new("dephase", "measure q0 then { skip } else { skip }\n".into(), ab()),
        Entry::new(
            "measure-branches",
            "measure q0 then { q1 *= H } else { new bit b; discard b; q1 *= X }\n".into(),
            ab(),
        ),
        Entry::new(
            "open-branches",
            "if q0 then { discard q1; new qbit q1 } else { q1 *= H }\n".into(),
            ab(),
        ),
        Entry::new(
            "reordered-branches",
            "if q0 then { discard q1; new qbit q1; q2 *= X } else { q1 *= H }\n".into(),
            Context::qubits_named(&["q0", "q1", "q2"]),
        ),
        Entry::new(
            "reordered-measure",
            "measure q0 then { q2 *= H } else { discard q1; new qbit q1; q2 *= Y }\n".into(),
            Context::qubits_named(&["q0", "q1", "q2"]),
        ),
    ];
    for bits in ["00", "01", "10", "11"] {
        let f = TruthTable::from_bits(bits).expect("table");
        out.push(Entry::new(
            format!("deutsch-{bits}"),
            deutsch_source(&f).unwrap(),
            Context::new(),
        ));
    }
    for bits in ["0000", "0110", "00111100"] {
        let f = TruthTable::from_bits(bits).expect("table");
        out.push(Entry::new(
            format!("deutsch-jozsa-{bits}"),
            deutsch_jozsa_source(&f).unwrap(),
            Context::new(),
        ));
    }
    for n in 1..=4 {
        out.push(Entry::new(format!("qft-{n}"), qft_source(n).unwrap(), qft_context(n)));
    }
    for (x0, n) in [(1, 1), (3, 2), (0, 2), (5, 3)] {
        out.push(Entry::new(
            format!("grover-oracle-{n}-{x0}"),
            grover_oracle_source(x0, n).unwrap(),
            oracle_context(n),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::typecheck;

    #[test]
    fn every_entry_typechecks() {
        for e in all() {
            typecheck(&e.program, &e.input).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn arity_limits() {
        let big = TruthTable::from_fn(5, |_| false);
        assert_eq!(
            gen_deutsch_jozsa(&big).unwrap_err(),
            CorpusError::UnsupportedArity {
                found: 5,
                min: 1,
                max: 4
            }
        );
        assert!(gen_deutsch(&TruthTable::from_bits("0110").unwrap()).is_err());
        assert!(gen_qft(0).is_err() && gen_qft(7).is_err());
        assert_eq!(
            gen_grover_oracle(4, 2).unwrap_err(),
            CorpusError::MarkedOutOfRange { x0: 4, n: 2 }
        );
    }

    #[test]
    fn qft_unrolls_to_expected_gate_count() {
        let p = gen_qft(3).unwrap();
        let t = typecheck(&p, &qft_context(3)).unwrap();
        assert_eq!(t.body.len(), 3 + 3);
    }
}
