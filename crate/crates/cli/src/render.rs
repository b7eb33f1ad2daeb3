//! JSON and text rendering of matrices, states and reports.

use qalt_core::demo::{Decision, Report};
use qalt_core::linalg::{ComplexMatrix, C64};
use serde_json::{json, Value};

/// `-0.0` prints as `0`.
fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub fn complex(z: C64) -> Value {
    json!([clean(z.re), clean(z.im)])
}

/// Row-major nested arrays of `[re, im]` pairs.
pub fn matrix(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| complex(m.get(r, c))).collect()))
            .collect(),
    )
}

pub fn matrices(ms: &[ComplexMatrix]) -> Value {
    Value::Array(ms.iter().map(matrix).collect())
}

fn real_text(x: f64) -> String {
    if x.abs() < 1e-12 {
        return "0".into();
    }
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn complex_text(z: C64) -> String {
    let (re, im) = (real_text(z.re), real_text(z.im));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if z.im < 0.0 => format!("{re}-{}i", real_text(-z.im)),
        _ => format!("{re}+{im}i"),
    }
}

pub fn matrix_text(m: &ComplexMatrix, indent: &str) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| complex_text(m.get(r, c))).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|row| {
            let row: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            format!("{indent}[ {} ]\n", row.join("  "))
        })
        .collect()
}

fn decisions(rows: &[Decision]) -> Value {
    Value::Array(
        rows.iter()
            .map(|d| {
                json!({
                    "table": d.table.to_string(),
                    "constant": d.constant,
                    "p_zero": d.p_zero,
                    "decision": if d.p_zero > 0.5 { "constant" } else { "balanced" },
                })
            })
            .collect(),
    )
}

pub fn report(r: &Report) -> Value {
    match r {
        Report::Deutsch(rows) => json!({ "n": 1, "rows": decisions(rows) }),
        Report::DeutschJozsa { n, rows } => json!({ "n": n, "rows": decisions(rows) }),
        Report::Qft(rows) => json!({
            "rows": rows.iter().map(|r| json!({ "n": r.n, "max_deviation": r.max_deviation })).collect::<Vec<_>>(),
        }),
        Report::Toffoli(t) => json!({ "exact_match": t.exact_match, "max_deviation": t.max_deviation }),
        Report::Nonmonotone(n) => json!({
            "empty_below_t": n.empty_below_t,
            "s_below_s": n.s_below_s,
            "alternation_ordered": n.alternation_ordered,
            "witness_eigenvalue": n.witness_eigenvalue,
        }),
        Report::Phase(p) => json!({
            "branches_equal": p.branches_equal,
            "alternations_equal": p.alternations_equal,
            "choi_distance": p.choi_distance,
        }),
    }
}

fn decisions_text(rows: &[Decision]) -> String {
    let mut s = String::from("f          Pr[all zero]  decision   expected\n");
    for d in rows {
        let got = if d.p_zero > 0.5 { "constant" } else { "balanced" };
        let want = if d.constant { "constant" } else { "balanced" };
        s += &format!(
            "{:<10} {:<13} {:<10} {}\n",
            d.table.to_string(),
            real_text(d.p_zero),
            got,
            want
        );
    }
    s
}

pub fn report_text(r: &Report) -> String {
    match r {
        Report::Deutsch(rows) => format!("Deutsch (n = 1)\n{}", decisions_text(rows)),
        Report::DeutschJozsa { n, rows } => format!("Deutsch-Jozsa (n = {n})\n{}", decisions_text(rows)),
        Report::Qft(rows) => {
            let mut s = String::from("QFT against bit-reversed DFT\n");
            for r in rows {
                s += &format!("n = {}: max deviation {:.3e}\n", r.n, r.max_deviation);
            }
            s
        }
        Report::Toffoli(t) => format!(
            "Toffoli: exact match {} (max deviation {:.3e})\n",
            t.exact_match, t.max_deviation
        ),
        Report::Nonmonotone(n) => format!(
            "S = {{I}}, T = {{I}}, rho = |+><+|\n\
             empty <= T: {}\n\
             S <= S: {}\n\
             S•empty <= S•T: {}\n\
             least eigenvalue of (S•T)(rho) - (S•empty)(rho): {:.10}\n",
            n.empty_below_t, n.s_below_s, n.alternation_ordered, n.witness_eigenvalue
        ),
        Report::Phase(p) => format!(
            "{{I}} vs {{e^(i pi/4) I}}: equal {}\n\
             alternations against {{I}}: equal {}\n\
             Choi distance: {:.10}\n",
            p.branches_equal, p.alternations_equal, p.choi_distance
        ),
    }
}
