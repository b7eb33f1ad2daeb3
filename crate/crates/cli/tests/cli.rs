use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use qalt_core::corpus::{self, TruthTable};
use serde_json::Value;
use tempfile::TempDir;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let path: PathBuf = self.dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path.to_str().unwrap().to_string()
    }
}

fn qalt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qalt"))
        .args(args)
        .env_remove("QALT_TOL")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// A JSON matrix of `[re, im]` pairs as rows of complex pairs.
fn entries(m: &Value) -> Vec<Vec<(f64, f64)>> {
    m.as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
                .collect()
        })
        .collect()
}

fn real_matrix_close(m: &Value, want: &[&[f64]]) -> bool {
    let got = entries(m);
    got.len() == want.len()
        && got.iter().zip(want).all(|(g, w)| {
            g.len() == w.len()
                && g.iter()
                    .zip(*w)
                    .all(|(&(re, im), &x)| (re - x).abs() < 1e-12 && im.abs() < 1e-12)
        })
}

#[test]
fn run_new_qubit() {
    let sb = Sandbox::new();
    let f = sb.file("a.q", "new qbit q\n");
    let out = qalt(&["run", &f, "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["schema"], "qalt/1");
    assert_eq!(doc["command"]["name"], "run");
    assert_eq!(doc["tolerance"].as_f64(), Some(1e-9));
    let r = &doc["result"];
    assert_eq!(r["context"], serde_json::json!(["q:qbit"]));
    assert!(real_matrix_close(&r["blocks"][0], &[&[1.0, 0.0], &[0.0, 0.0]]));
    assert!((r["trace"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let text = qalt(&["run", &f]);
    assert_eq!(code(&text), 0);
    assert!(String::from_utf8_lossy(&text.stdout).contains("trace: 1"));
}

#[test]
fn control_capture_exits_with_a_language_error() {
    let sb = Sandbox::new();
    let f = sb.file("bad.q", "if q then { q *= X } else { skip }\n");
    let out = qalt(&["run", &f, "--input", "q"]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("`q`") && err.contains("1:13"), "{err}");
    assert!(out.stdout.is_empty());

    let f = sb.file("syntax.q", "if q then { } else");
    assert_eq!(code(&qalt(&["run", &f, "--input", "q"])), 1);
}

#[test]
fn deutsch_statistics() {
    let sb = Sandbox::new();
    for (bits, want) in [("00", 1.0), ("11", 1.0), ("01", 0.0), ("10", 0.0)] {
        let src = corpus::deutsch_source(&TruthTable::from_bits(bits).unwrap()).unwrap();
        let f = sb.file("deutsch.q", &src);
        let out = qalt(&["run", &f, "--stats", "q0", "--format", "json"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let stats = &json(&out)["result"]["stats"][0];
        assert_eq!(stats["name"], "q0");
        assert!((stats["p0"].as_f64().unwrap() - want).abs() < 1e-9, "{bits}");
    }
}

#[test]
fn statistics_on_bad_names_are_semantic_errors() {
    let sb = Sandbox::new();
    let f = sb.file("b.q", "new bit b\n");
    assert_eq!(code(&qalt(&["run", &f, "--stats", "b"])), 2);
    assert_eq!(code(&qalt(&["run", &f, "--stats", "zz"])), 2);
}

#[test]
fn denotations() {
    let sb = Sandbox::new();
    let cnot = sb.file("cnot.q", "if q0 then { skip } else { q1 *= X }\n");
    let out = qalt(&["denote", &cnot, "--input", "q0:qbit,q1:qbit", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = &json(&out)["result"];
    assert_eq!(r["kraus"].as_array().unwrap().len(), 1);
    let want: [&[f64]; 4] = [
        &[1., 0., 0., 0.],
        &[0., 1., 0., 0.],
        &[0., 0., 0., 1.],
        &[0., 0., 1., 0.],
    ];
    assert!(real_matrix_close(&r["kraus"][0], &want));
    assert!(r.get("choi").is_none());

    let dephase = sb.file("dephase.q", "measure q then { skip } else { skip }\n");
    let out = qalt(&["denote", &dephase, "--input", "q", "--choi", "--format", "json"]);
    let r = &json(&out)["result"];
    let ops = r["kraus"].as_array().unwrap();
    assert_eq!(ops.len(), 2);
    assert!(real_matrix_close(&ops[0], &[&[1., 0.], &[0., 0.]]));
    assert!(real_matrix_close(&ops[1], &[&[0., 0.], &[0., 1.]]));
    let want: [&[f64]; 4] = [
        &[1., 0., 0., 0.],
        &[0., 0., 0., 0.],
        &[0., 0., 0., 0.],
        &[0., 0., 0., 1.],
    ];
    assert!(real_matrix_close(&r["choi"][0], &want));

    let empty = sb.file("empty.q", "");
    let out = qalt(&["denote", &empty, "--format", "json"]);
    let r = &json(&out)["result"];
    assert_eq!(r["input_signature"], serde_json::json!([1]));
    assert!(real_matrix_close(&r["kraus"][0], &[&[1.0]]));
}

#[test]
fn equivalence_verdicts() {
    let sb = Sandbox::new();
    let phase = sb.file("phase.q", "q *= Phase(pi/4)\n");
    let skip = sb.file("skip.q", "skip\n");
    let out = qalt(&["equiv", &phase, &skip, "--input", "q", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["equal"], true);

    let a = sb.file("a.q", "if q then { skip } else { r *= Phase(pi/4) }\n");
    let b = sb.file("b.q", "if q then { skip } else { skip }\n");
    let out = qalt(&["equiv", &a, &b, "--input", "q,r", "--format", "json"]);
    assert_eq!(code(&out), 4);
    let r = &json(&out)["result"];
    assert_eq!(r["equal"], false);
    assert!(r["choi_distance"].as_f64().unwrap() > 0.1);

    assert_eq!(code(&qalt(&["equiv", &a, &a, "--input", "q,r"])), 0);

    let grow = sb.file("grow.q", "new qbit s\n");
    let out = qalt(&["equiv", &grow, &skip, "--input", "q"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("signature mismatch"));
}

#[test]
fn order_verdicts() {
    let sb = Sandbox::new();
    let skip = sb.file("skip.q", "skip\n");
    let dephase = sb.file("dephase.q", "measure q then { skip } else { skip }\n");
    let roundabout = sb.file(
        "roundabout.q",
        "new qbit r\nr *= H\nmeasure r then { discard r } else { discard r }\n",
    );
    assert_eq!(code(&qalt(&["order", &skip, &skip, "--input", "q"])), 0);
    let out = qalt(&["order", &skip, &dephase, "--input", "q", "--format", "json"]);
    assert_eq!(code(&out), 4);
    assert_eq!(json(&out)["result"]["below"], false);
    assert_eq!(code(&qalt(&["order", &roundabout, &skip, "--input", "q"])), 0);
}

#[test]
fn demonstrations() {
    let out = qalt(&["demo", "nonmonotone", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["result"]["report"];
    assert_eq!(r["empty_below_t"], true);
    assert_eq!(r["s_below_s"], true);
    assert_eq!(r["alternation_ordered"], false);
    let w = r["witness_eigenvalue"].as_f64().unwrap();
    assert!((w - (1.0 - 5f64.sqrt()) / 4.0).abs() < 1e-9);

    let r = json(&qalt(&["demo", "toffoli", "--format", "json"]));
    assert_eq!(r["result"]["report"]["exact_match"], true);

    let r = json(&qalt(&["demo", "phase", "--format", "json"]));
    assert_eq!(r["result"]["report"]["branches_equal"], true);
    assert_eq!(r["result"]["report"]["alternations_equal"], false);

    let r = json(&qalt(&["demo", "qft", "--format", "json"]));
    for row in r["result"]["report"]["rows"].as_array().unwrap() {
        assert!(row["max_deviation"].as_f64().unwrap() < 1e-10);
    }

    for name in ["deutsch", "dj"] {
        let r = json(&qalt(&["demo", name, "--format", "json"]));
        for row in r["result"]["report"]["rows"].as_array().unwrap() {
            let want = if row["constant"] == true {
                "constant"
            } else {
                "balanced"
            };
            assert_eq!(row["decision"], want);
        }
    }

    assert_eq!(code(&qalt(&["demo", "grover"])), 3);
}

#[test]
fn structured_output_is_byte_identical() {
    let sb = Sandbox::new();
    let f = sb.file("p.q", &corpus::qft_source(3).unwrap());
    let args = [
        "denote",
        f.as_str(),
        "--input",
        "q[1],q[2],q[3]",
        "--choi",
        "--format",
        "json",
    ];
    let a = qalt(&args);
    let b = qalt(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn initial_states() {
    let sb = Sandbox::new();
    let f = sb.file("h.q", "q *= H\n");
    let plus = sb.file(
        "plus.json",
        r#"{"blocks": [[[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]]}"#,
    );
    let out = qalt(&["run", &f, "--input", "q", "--init", &plus, "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(real_matrix_close(
        &json(&out)["result"]["blocks"][0],
        &[&[1., 0.], &[0., 0.]]
    ));

    let wrong = sb.file("wrong.json", r#"{"blocks": [[[[1, 0]]]]}"#);
    let out = qalt(&["run", &f, "--input", "q", "--init", &wrong]);
    assert_eq!(code(&out), 2);
    let negative = sb.file("neg.json", r#"{"blocks": [[[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]]}"#);
    assert_eq!(code(&qalt(&["run", &f, "--input", "q", "--init", &negative])), 2);
    let broken = sb.file("broken.json", "{ blocks: ");
    assert_eq!(code(&qalt(&["run", &f, "--input", "q", "--init", &broken])), 3);
}

#[test]
fn io_and_usage_errors() {
    assert_eq!(code(&qalt(&["run", "/nonexistent/program.q"])), 3);
    assert_eq!(code(&qalt(&["run"])), 3);
    assert_eq!(code(&qalt(&["run", "x.q", "--tol", "abc"])), 3);
    assert_eq!(code(&qalt(&["run", "x.q", "--input", "q:qutrit"])), 3);
    assert_eq!(code(&qalt(&["--help"])), 0);
}

#[test]
fn tolerance_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qalt"))
        .args(["demo", "toffoli", "--format", "json"])
        .env("QALT_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(json(&out)["tolerance"].as_f64(), Some(1e-6));
    let out = Command::new(env!("CARGO_BIN_EXE_qalt"))
        .args(["demo", "toffoli", "--format", "json", "--tol", "1e-3"])
        .env("QALT_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(json(&out)["tolerance"].as_f64(), Some(1e-3));
}

#[test]
fn source_from_standard_input_and_lint() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qalt"))
        .args(["run", "-", "--input", "q", "--lint-unitary", "--format", "json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"if q then { new qbit r; discard r } else { skip }\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let warnings = json(&out)["result"]["warnings"].clone();
    assert_eq!(warnings.as_array().unwrap().len(), 2);
    assert!(stderr(&out).contains("`new` inside an alternation branch"));
}
