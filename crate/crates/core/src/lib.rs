//! Kraus-decomposition semantics for a small quantum programming language
//! with quantum alternation (`if q then P else Q`, `case (q̄) of …`).
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: dense complex matrices, signatures and block states;
//! * [`kraus`]: Kraus decompositions, composition, alternation, Choi
//!   families, extensional equality and the Löwner order;
//! * [`stinespring`]: Stinespring representations of decompositions;
//! * [`lang`]: lexer, parser, pretty-printer, typechecker and elaborator;
//! * [`semantics`]: the denotational map into Kraus decompositions and an
//!   independent density-matrix evaluator;
//! * [`corpus`]: generators for the standard example programs;
//! * [`demo`]: packaged demonstrations used by the command-line tool.

pub mod corpus;
pub mod demo;
pub mod kraus;
pub mod lang;
pub mod linalg;
pub mod random;
pub mod semantics;
pub mod stinespring;
