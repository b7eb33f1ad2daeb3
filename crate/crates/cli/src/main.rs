//! `qalt`: run programs, print denotations, compare programs and replay the
//! packaged demonstrations.

mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qalt_core::demo;
use qalt_core::kraus::{ext_equal, lowner_leq, to_choi, KrausError};
use qalt_core::lang::{compile, lint_unitary_branches, Context, Kind, LangError, LintWarning, Name, TypedProgram};
use qalt_core::linalg::{ComplexMatrix, DensityState, Signature, C64};
use qalt_core::semantics::{denote_program, measure_stats, run, SemanticsError};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

const SCHEMA: &str = "qalt/1";

#[derive(Parser)]
#[command(
    name = "qalt",
    version,
    about = "Kraus semantics for quantum programs with alternation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Numerical tolerance.
    #[arg(long, env = "QALT_TOL", default_value_t = 1e-9, value_parser = tolerance, global = true)]
    tol: f64,
}

#[derive(Args, Clone)]
struct Input {
    /// Variables in scope before the program starts, e.g. `q0:qbit,b:bit`.
    /// A bare name is a qbit.
    #[arg(long, value_parser = context, default_value = "")]
    input: Context,
    /// Report alternation branches that are not unitary.
    #[arg(long)]
    lint_unitary: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program and print the final state.
    Run {
        /// Source file, or `-` for standard input.
        file: String,
        #[command(flatten)]
        input: Input,
        /// Initial state as JSON: `{"blocks": [[[[re, im], ...], ...], ...]}`.
        #[arg(long)]
        init: Option<String>,
        /// Print the outcome probabilities of measuring this qubit.
        #[arg(long = "stats", value_name = "NAME")]
        stats: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the Kraus decomposition a program denotes.
    Denote {
        file: String,
        #[command(flatten)]
        input: Input,
        /// Also print the Choi matrix of every input block.
        #[arg(long)]
        choi: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether two programs denote the same superoperator.
    Equiv {
        left: String,
        right: String,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether the first program is below the second in the Löwner order.
    Order {
        left: String,
        right: String,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// Replay a packaged demonstration.
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(demo::NAMES))]
        name: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn tolerance(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(format!("`{s}` is not a positive tolerance")),
    }
}

fn context(s: &str) -> Result<Context, String> {
    let mut vars = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (name, kind) = match item.split_once(':') {
            Some((n, k)) => (n.trim(), k.trim()),
            None => (item, "qbit"),
        };
        let kind = match kind {
            "qbit" => Kind::Qbit,
            "bit" => Kind::Bit,
            other => return Err(format!("unknown kind `{other}`; expected `qbit` or `bit`")),
        };
        let name = Name::parse(name).ok_or_else(|| format!("`{name}` is not a variable name"))?;
        vars.push((name, kind));
    }
    Context::from_vars(vars).map_err(|n| format!("`{n}` is declared twice"))
}

/// Failure with its exit code.
enum Failure {
    Lang(String, LangError),
    Semantic(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lang(..) => 1,
            Failure::Semantic(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        Failure::Semantic(e.to_string())
    }
}

impl From<KrausError> for Failure {
    fn from(e: KrausError) -> Self {
        Failure::Semantic(e.to_string())
    }
}

struct Outcome {
    result: Value,
    text: String,
    /// `Some(false)` for a negative verdict.
    verdict: Option<bool>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct Document<'a> {
    schema: &'static str,
    command: CommandEcho<'a>,
    tolerance: f64,
    result: &'a Value,
}

#[derive(Serialize)]
struct CommandEcho<'a> {
    name: &'a str,
    args: &'a [String],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    blocks: Vec<Vec<Vec<[f64; 2]>>>,
}

fn read_source(path: &str) -> Result<String, Failure> {
    let result = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(path)
    };
    result.map_err(|e| Failure::Io(format!("{path}: {e}")))
}

fn load(path: &str, input: &Input) -> Result<(TypedProgram, Vec<String>), Failure> {
    let src = read_source(path)?;
    let typed = compile(&src, &input.input).map_err(|e| Failure::Lang(path.to_string(), e))?;
    let warnings = if input.lint_unitary {
        lint_unitary_branches(&typed)
            .into_iter()
            .map(|LintWarning { span, message }| format!("{path}:{span}: {message}"))
            .collect()
    } else {
        Vec::new()
    };
    Ok((typed, warnings))
}

fn load_state(path: &str, tol: f64) -> Result<DensityState, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
    let file: StateFile = serde_json::from_str(&text).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
    let mut blocks = Vec::new();
    for (i, rows) in file.blocks.iter().enumerate() {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Failure::Semantic(format!(
                "{path}: block {i} is not a nonempty square matrix"
            )));
        }
        let data = rows.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
        blocks.push(ComplexMatrix::new(n, n, data).map_err(|e| Failure::Semantic(e.to_string()))?);
    }
    let sig = Signature::new(blocks.iter().map(ComplexMatrix::rows).collect())
        .map_err(|e| Failure::Semantic(format!("{path}: {e}")))?;
    DensityState::new(sig, blocks, tol).map_err(|e| Failure::Semantic(format!("{path}: {e}")))
}

fn signature_json(s: &Signature) -> Value {
    json!(s.blocks())
}

fn context_json(c: &Context) -> Value {
    Value::Array(c.vars().iter().map(|(n, k)| json!(format!("{n}:{k}"))).collect())
}

fn cmd_run(file: &str, input: &Input, init: Option<&str>, stats: &[String], tol: f64) -> Result<Outcome, Failure> {
    let (typed, warnings) = load(file, input)?;
    let initial = init.map(|p| load_state(p, tol)).transpose()?;
    let rho = run(&typed, initial.as_ref())?;
    let mut probs = Vec::new();
    for s in stats {
        let name = Name::parse(s).ok_or_else(|| Failure::Semantic(format!("`{s}` is not a variable name")))?;
        let (p0, p1) = measure_stats(&rho, &name, &typed.output)?;
        probs.push((s.clone(), p0, p1));
    }

    let mut text = format!("context: {}\nsignature: {}\n", typed.output, rho.signature());
    for (i, b) in rho.blocks().iter().enumerate() {
        text += &format!("block {i}:\n{}", render::matrix_text(b, "  "));
    }
    text += &format!("trace: {}\n", render::complex_text(C64::new(rho.trace(), 0.0)));
    for (s, p0, p1) in &probs {
        text += &format!(
            "Pr[{s} = 0] = {}, Pr[{s} = 1] = {}\n",
            render::complex_text(C64::new(*p0, 0.0)),
            render::complex_text(C64::new(*p1, 0.0))
        );
    }
    let result = json!({
        "context": context_json(&typed.output),
        "signature": signature_json(rho.signature()),
        "blocks": render::matrices(rho.blocks()),
        "trace": rho.trace(),
        "stats": probs.iter().map(|(s, p0, p1)| json!({ "name": s, "p0": p0, "p1": p1 })).collect::<Vec<_>>(),
        "warnings": warnings,
    });
    Ok(Outcome {
        result,
        text,
        verdict: None,
        warnings,
    })
}

fn cmd_denote(file: &str, input: &Input, choi: bool) -> Result<Outcome, Failure> {
    let (typed, warnings) = load(file, input)?;
    let d = denote_program(&typed)?;
    let k = &d.kraus;
    let mut text = format!(
        "{} -> {}\n{} -> {}\n{} Kraus operator{}\n",
        d.input,
        d.output,
        k.input(),
        k.output(),
        k.len(),
        if k.len() == 1 { "" } else { "s" }
    );
    for (i, e) in k.ops().iter().enumerate() {
        text += &format!("E{i}:\n{}", render::matrix_text(e, "  "));
    }
    let mut result = json!({
        "input": context_json(&d.input),
        "output": context_json(&d.output),
        "input_signature": signature_json(k.input()),
        "output_signature": signature_json(k.output()),
        "kraus": render::matrices(k.ops()),
        "warnings": warnings,
    });
    if choi {
        let family = to_choi(k);
        for (i, m) in family.members().iter().enumerate() {
            text += &format!("Choi block {i}:\n{}", render::matrix_text(m, "  "));
        }
        result["choi"] = render::matrices(family.members());
    }
    Ok(Outcome {
        result,
        text,
        verdict: None,
        warnings,
    })
}

fn pair(
    left: &str,
    right: &str,
    input: &Input,
) -> Result<(qalt_core::kraus::KrausSet, qalt_core::kraus::KrausSet, Vec<String>), Failure> {
    let (a, mut warnings) = load(left, input)?;
    let (b, more) = load(right, input)?;
    warnings.extend(more);
    let (a, b) = (denote_program(&a)?.kraus, denote_program(&b)?.kraus);
    if a.input() != b.input() || a.output() != b.output() {
        return Err(Failure::Semantic(format!(
            "signature mismatch: {} -> {} vs {} -> {}",
            a.input(),
            a.output(),
            b.input(),
            b.output()
        )));
    }
    Ok((a, b, warnings))
}

fn cmd_equiv(left: &str, right: &str, input: &Input, tol: f64) -> Result<Outcome, Failure> {
    let (a, b, warnings) = pair(left, right, input)?;
    let equal = ext_equal(&a, &b, tol)?;
    let distance = to_choi(&a).distance(&to_choi(&b));
    Ok(Outcome {
        result: json!({ "equal": equal, "choi_distance": distance, "warnings": warnings }),
        text: format!("equal: {equal}\nChoi distance: {distance:.3e}\n"),
        verdict: Some(equal),
        warnings,
    })
}

fn cmd_order(left: &str, right: &str, input: &Input, tol: f64) -> Result<Outcome, Failure> {
    let (a, b, warnings) = pair(left, right, input)?;
    let below = lowner_leq(&a, &b, tol)?;
    Ok(Outcome {
        result: json!({ "below": below, "warnings": warnings }),
        text: format!("below: {below}\n"),
        verdict: Some(below),
        warnings,
    })
}

fn cmd_demo(name: &str) -> Result<Outcome, Failure> {
    let report = demo::by_name(name).ok_or_else(|| Failure::Semantic(format!("no demonstration `{name}`")))?;
    Ok(Outcome {
        result: json!({ "demo": name, "report": render::report(&report) }),
        text: render::report_text(&report),
        verdict: None,
        warnings: Vec::new(),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let args: Vec<String> = std::env::args().skip(2).collect();
    let (name, common, outcome) = match &cli.command {
        Command::Run {
            file,
            input,
            init,
            stats,
            common,
        } => ("run", common, cmd_run(file, input, init.as_deref(), stats, common.tol)),
        Command::Denote {
            file,
            input,
            choi,
            common,
        } => ("denote", common, cmd_denote(file, input, *choi)),
        Command::Equiv {
            left,
            right,
            input,
            common,
        } => ("equiv", common, cmd_equiv(left, right, input, common.tol)),
        Command::Order {
            left,
            right,
            input,
            common,
        } => ("order", common, cmd_order(left, right, input, common.tol)),
        Command::Demo { name, common } => ("demo", common, cmd_demo(name)),
    };
    match outcome {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let body = match common.format {
                Format::Text => out.text,
                Format::Json => {
                    let doc = Document {
                        schema: SCHEMA,
                        command: CommandEcho { name, args: &args },
                        tolerance: common.tol,
                        result: &out.result,
                    };
                    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
                }
            };
            if let Err(e) = io::stdout().lock().write_all(body.as_bytes()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(3);
                }
            }
            match out.verdict {
                Some(false) => ExitCode::from(4),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(f) => {
            match &f {
                Failure::Lang(path, e) => eprintln!("error: {path}:{e}"),
                Failure::Semantic(m) | Failure::Io(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
