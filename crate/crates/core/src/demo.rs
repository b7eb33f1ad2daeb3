//! Packaged demonstrations: the algorithm examples and the two negative
//! results (phase sensitivity of alternation and non-monotonicity).

use std::f64::consts::PI;

use crate::corpus::{self, TruthTable};
use crate::kraus::{alternate, ext_equal, lowner_leq, to_choi, KrausSet, DEFAULT_TOL};
use crate::lang::{typecheck, Context, Name};
use crate::linalg::{permutation_matrix, ComplexMatrix, DensityState, Signature, C64};
use crate::semantics::{denote_program, measure_stats, run};

pub const NAMES: [&str; 6] = ["deutsch", "dj", "qft", "toffoli", "nonmonotone", "phase"];

#[derive(Clone, Debug, PartialEq)]
pub struct Decision {
    pub table: TruthTable,
    pub constant: bool,
    /// Probability that the whole input register reads zero.
    pub p_zero: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QftRow {
    pub n: usize,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToffoliReport {
    pub exact_match: bool,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NonmonotoneReport {
    pub empty_below_t: bool,
    pub s_below_s: bool,
    pub alternation_ordered: bool,
    /// Least eigenvalue of `(S•T)(ρ) − (S•∅)(ρ)` at `ρ = |+⟩⟨+|`.
    pub witness_eigenvalue: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseReport {
    pub branches_equal: bool,
    pub alternations_equal: bool,
    pub choi_distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Report {
    Deutsch(Vec<Decision>),
    DeutschJozsa { n: usize, rows: Vec<Decision> },
    Qft(Vec<QftRow>),
    Toffoli(ToffoliReport),
    Nonmonotone(NonmonotoneReport),
    Phase(PhaseReport),
}

/// Runs a demonstration by name.
pub fn by_name(name: &str) -> Option<Report> {
    Some(match name {
        "deutsch" => Report::Deutsch(deutsch()),
        "dj" => Report::DeutschJozsa {
            n: 2,
            rows: deutsch_jozsa(2),
        },
        "qft" => Report::Qft(qft()),
        "toffoli" => Report::Toffoli(toffoli()),
        "nonmonotone" => Report::Nonmonotone(nonmonotone()),
        "phase" => Report::Phase(phase()),
        _ => return None,
    })
}

fn decide(p: crate::lang::Program, table: TruthTable, register: &[Name]) -> Decision {
    let typed = typecheck(&p, &Context::new()).expect("corpus program typechecks");
    let rho = run(&typed, None).expect("corpus program runs");
    let p_zero = all_zero_probability(&rho, register, &typed.output);
    Decision {
        constant: table.is_constant(),
        table,
        p_zero,
    }
}

/// Probability that every qubit in `register` reads 0.
pub fn all_zero_probability(rho: &DensityState, register: &[Name], ctx: &Context) -> f64 {
    if let [q] = register {
        return measure_stats(rho, q, ctx).expect("declared qubit").0;
    }
    let qubits = ctx.qubits();
    let m = qubits.len();
    let mask: usize = register
        .iter()
        .map(|r| 1 << (m - 1 - qubits.iter().position(|q| *q == r).expect("declared qubit")))
        .sum();
    rho.blocks()
        .iter()
        .map(|b| {
            (0..b.rows())
                .filter(|x| x & mask == 0)
                .map(|x| b.get(x, x).re)
                .sum::<f64>()
        })
        .sum()
}

pub fn deutsch() -> Vec<Decision> {
    ["00", "01", "10", "11"]
        .iter()
        .map(|bits| {
            let f = TruthTable::from_bits(bits).expect("table");
            decide(corpus::gen_deutsch(&f).expect("n = 1"), f, &[Name::plain("q0")])
        })
        .collect()
}

/// Every constant and balanced function of arity `n`, `n ≤ 3`.
pub fn admissible_tables(n: usize) -> Vec<TruthTable> {
    let size = 1usize << n;
    (0u64..1 << size)
        .map(|mask| TruthTable::from_fn(n, |x| mask >> x & 1 == 1))
        .filter(|t| t.is_constant() || t.is_balanced())
        .collect()
}

pub fn deutsch_jozsa(n: usize) -> Vec<Decision> {
    let register: Vec<Name> = (0..n as i64).map(|i| Name::indexed("q0", i)).collect();
    admissible_tables(n)
        .into_iter()
        .map(|f| decide(corpus::gen_deutsch_jozsa(&f).expect("small arity"), f, &register))
        .collect()
}

/// `ω^{jk}/√N` with `ω = e^{2πi/N}`.
pub fn dft(n: usize) -> ComplexMatrix {
    let size = 1usize << n;
    let norm = (size as f64).sqrt();
    ComplexMatrix::from_fn(size, size, |j, k| {
        C64::from_polar(1.0 / norm, 2.0 * PI * ((j * k) % size) as f64 / size as f64)
    })
}

/// Reverses the order of `n` qubits.
pub fn bit_reversal(n: usize) -> ComplexMatrix {
    let perm: Vec<usize> = (0..1usize << n)
        .map(|k| (0..n).fold(0, |acc, i| acc << 1 | (k >> i & 1)))
        .collect();
    permutation_matrix(&perm)
}

/// What the swap-free QFT circuit computes: the DFT followed by reversing
/// the qubit order.
pub fn qft_reference(n: usize) -> ComplexMatrix {
    &bit_reversal(n) * &dft(n)
}

/// The unitary denoted by the QFT program on `n` qubits.
pub fn qft_unitary(n: usize) -> ComplexMatrix {
    let p = corpus::gen_qft(n).expect("supported size");
    let typed = typecheck(&p, &corpus::qft_context(n)).expect("typechecks");
    let k = denote_program(&typed).expect("denotes").kraus;
    assert_eq!(k.len(), 1, "the QFT program denotes a single operator");
    k.ops()[0].clone()
}

pub fn qft() -> Vec<QftRow> {
    (1..=4)
        .map(|n| QftRow {
            n,
            max_deviation: qft_unitary(n).max_abs_diff(&qft_reference(n)),
        })
        .collect()
}

pub fn toffoli_matrix() -> ComplexMatrix {
    let perm: Vec<usize> = (0..8).map(|k| if k >= 6 { k ^ 1 } else { k }).collect();
    permutation_matrix(&perm)
}

pub fn toffoli() -> ToffoliReport {
    let e = corpus::all()
        .into_iter()
        .find(|e| e.name == "toffoli")
        .expect("corpus entry");
    let typed = typecheck(&e.program, &e.input).expect("typechecks");
    let k = denote_program(&typed).expect("denotes").kraus;
    let dev = if k.len() == 1 {
        k.ops()[0].max_abs_diff(&toffoli_matrix())
    } else {
        f64::INFINITY
    };
    ToffoliReport {
        exact_match: dev <= 1e-12,
        max_deviation: dev,
    }
}

pub fn nonmonotone() -> NonmonotoneReport {
    let unit = Signature::unit();
    let s = KrausSet::identity(&unit);
    let t = KrausSet::identity(&unit);
    let empty = KrausSet::zero(&unit, &unit);
    let left = alternate(&s, &empty).expect("same signatures");
    let right = alternate(&s, &t).expect("same signatures");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = ComplexMatrix::column(&[C64::new(h, 0.0), C64::new(h, 0.0)]);
    let rho = DensityState::pure(&Signature::qbit(), 0, &plus, DEFAULT_TOL).expect("unit vector");
    let diff = &right.apply(&rho).expect("applies").to_full() - &left.apply(&rho).expect("applies").to_full();
    NonmonotoneReport {
        empty_below_t: lowner_leq(&empty, &t, DEFAULT_TOL).expect("same signatures"),
        s_below_s: lowner_leq(&s, &s, DEFAULT_TOL).expect("same signatures"),
        alternation_ordered: lowner_leq(&left, &right, DEFAULT_TOL).expect("same signatures"),
        witness_eigenvalue: diff.min_eigenvalue(),
    }
}

pub fn phase() -> PhaseReport {
    let unit = Signature::unit();
    let id = KrausSet::identity(&unit);
    let shifted = KrausSet::new(
        unit.clone(),
        unit.clone(),
        [ComplexMatrix::identity(1).scale(C64::from_polar(1.0, PI / 4.0))],
    )
    .expect("unitary");
    let a = alternate(&id, &id).expect("same signatures");
    let b = alternate(&id, &shifted).expect("same signatures");
    PhaseReport {
        branches_equal: ext_equal(&id, &shifted, DEFAULT_TOL).expect("same signatures"),
        alternations_equal: ext_equal(&a, &b, DEFAULT_TOL).expect("same signatures"),
        choi_distance: to_choi(&a).distance(&to_choi(&b)),
    }
}
