//! Acceptance suite: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::panic;
use std::process::ExitCode;

use qalt_core::corpus;
use qalt_core::demo;
use qalt_core::kraus::{alternate, ext_equal, is_reversible, KrausSet};
use qalt_core::lang::{parse, typecheck, Context, LangErrorKind, TypedProgram};
use qalt_core::linalg::{permutation_matrix, ComplexMatrix, Signature, C64};
use qalt_core::random;
use qalt_core::semantics::{denote_program, eval_direct, run};
use qalt_core::stinespring::{alternation_stinespring, from_stinespring, to_stinespring, verify_stinespring};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn typed(src: &str, ctx: &Context) -> TypedProgram {
    typecheck(&parse(src).expect("parses"), ctx).expect("typechecks")
}

fn single_op(src: &str, ctx: &Context) -> Result<ComplexMatrix, String> {
    let k = denote_program(&typed(src, ctx)).map_err(|e| e.to_string())?.kraus;
    ensure(k.len() == 1, || format!("{} operators for `{src}`", k.len()))?;
    Ok(k.ops()[0].clone())
}

fn random_sig(rng: &mut StdRng) -> Signature {
    match rng.gen_range(0..4) {
        0 => Signature::single(1),
        1 => Signature::single(2),
        2 => Signature::single(3),
        _ => Signature::new(vec![1, 2]).unwrap(),
    }
}

fn random_set(rng: &mut StdRng, i: &Signature, o: &Signature, tp: bool) -> KrausSet {
    let count = rng.gen_range(1..4);
    random::kraus_set(rng, i, o, count, tp)
}

fn controlled_u() -> Outcome {
    let u = single_op(
        "if q0 then { skip } else { q1 *= X }",
        &Context::qubits_named(&["q0", "q1"]),
    )?;
    let cnot = permutation_matrix(&[0, 1, 3, 2]);
    let d = u.max_abs_diff(&cnot);
    ensure(d <= 1e-12, || format!("deviation {d:e}"))
}

fn toffoli() -> Outcome {
    let src = "if q0 then { skip } else { if q1 then { skip } else { q2 *= X } }";
    let u = single_op(src, &Context::qubits_named(&["q0", "q1", "q2"]))?;
    let toff = permutation_matrix(&[0, 1, 2, 3, 4, 5, 7, 6]);
    let d = u.max_abs_diff(&toff);
    ensure(d <= 1e-12, || format!("deviation {d:e}"))
}

fn dft(n: usize) -> ComplexMatrix {
    let size = 1usize << n;
    ComplexMatrix::from_fn(size, size, |j, k| {
        C64::from_polar(
            1.0 / (size as f64).sqrt(),
            2.0 * PI * ((j * k) % size) as f64 / size as f64,
        )
    })
}

fn reversal(n: usize) -> ComplexMatrix {
    let perm: Vec<usize> = (0..1usize << n)
        .map(|k| (0..n).fold(0, |a, i| a << 1 | (k >> i & 1)))
        .collect();
    permutation_matrix(&perm)
}

fn qft() -> Outcome {
    // which side the reversal goes on, decided by brute force at n = 2
    let u2 = single_op(&corpus::qft_source(2).unwrap(), &corpus::qft_context(2))?;
    let (r, f) = (reversal(2), dft(2));
    let left = u2.max_abs_diff(&(&r * &f)) <= 1e-10;
    let right = u2.max_abs_diff(&(&f * &r)) <= 1e-10;
    ensure(left || right, || "n = 2 matches neither side".into())?;
    for n in 1..=4 {
        let u = single_op(&corpus::qft_source(n).unwrap(), &corpus::qft_context(n))?;
        let want = if left {
            &reversal(n) * &dft(n)
        } else {
            &dft(n) * &reversal(n)
        };
        let d = u.max_abs_diff(&want);
        ensure(d <= 1e-10, || format!("n = {n}: deviation {d:e}"))?;
    }
    Ok(())
}

fn deutsch() -> Outcome {
    let rows = demo::deutsch();
    ensure(rows.len() == 4, || format!("{} functions", rows.len()))?;
    for d in rows {
        let want = if d.constant { 1.0 } else { 0.0 };
        ensure((d.p_zero - want).abs() <= 1e-9, || {
            format!("f = {}: Pr[q0 = 0] = {}", d.table, d.p_zero)
        })?;
    }
    Ok(())
}

fn deutsch_jozsa() -> Outcome {
    for n in [2, 3] {
        let rows = demo::deutsch_jozsa(n);
        let constant = rows.iter().filter(|d| d.constant).count();
        let balanced = rows.iter().filter(|d| d.table.is_balanced()).count();
        ensure(constant == 2 && balanced >= 6, || {
            format!("n = {n}: {constant} constant, {balanced} balanced")
        })?;
        for d in rows {
            let want = if d.constant { 1.0 } else { 0.0 };
            ensure((d.p_zero - want).abs() <= 1e-9, || {
                format!("n = {n}, f = {}: {}", d.table, d.p_zero)
            })?;
        }
    }
    Ok(())
}

fn condition_two() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x02);
    for trial in 0..100 {
        let sig = random_sig(&mut rng);
        let out = random_sig(&mut rng);
        let tp = rng.gen_bool(0.5);
        let s = random_set(&mut rng, &sig, &out, tp);
        let t = random_set(&mut rng, &sig, &out, tp);
        let alt = alternate(&s, &t).map_err(|e| e.to_string())?;
        let rho = random::density_state(&mut rng, &sig).to_full();
        // Kronecker order to the block layout of qbit ⊗ σ
        let q = Signature::qbit();
        let (ji, jo) = (q.tensor_iso(&sig), q.tensor_iso(&out));
        let lay = |j: &ComplexMatrix, m: ComplexMatrix| ComplexMatrix::product([j, &m, &j.adjoint()]).unwrap();
        for (i, branch) in [&s, &t].into_iter().enumerate() {
            let pi = ComplexMatrix::projector(i, 2);
            let got = alt.apply_full(&lay(&ji, pi.tensor(&rho)));
            let want = lay(&jo, pi.tensor(&branch.apply_full(&rho)));
            let d = got.max_abs_diff(&want);
            ensure(d <= 1e-9, || format!("trial {trial}, Π{i}: deviation {d:e}"))?;
        }
    }
    Ok(())
}

fn condition_three() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x03);
    for trial in 0..100 {
        let n = rng.gen_range(1..5);
        let sig = Signature::single(n);
        let one = |u: ComplexMatrix| KrausSet::new(sig.clone(), sig.clone(), [u]).unwrap();
        let s = one(random::unitary(&mut rng, n));
        let t = one(random::unitary(&mut rng, n));
        let alt = alternate(&s, &t).map_err(|e| e.to_string())?;
        ensure(alt.len() == 1, || format!("trial {trial}: {} operators", alt.len()))?;
        ensure(alt.ops()[0].is_unitary(1e-10) && is_reversible(&alt, 1e-10), || {
            format!("trial {trial}: not unitary")
        })?;
    }
    Ok(())
}

fn closure() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x08);
    for trial in 0..100 {
        let (i, o) = (random_sig(&mut rng), random_sig(&mut rng));
        let s = random_set(&mut rng, &i, &o, false);
        let t = random_set(&mut rng, &i, &o, false);
        let alt = alternate(&s, &t).map_err(|e| e.to_string())?;
        let top = alt.kraus_sum().max_eigenvalue();
        ensure(top <= 1.0 + 1e-9, || format!("trial {trial}: largest eigenvalue {top}"))?;
    }
    for trial in 0..100 {
        let (i, o) = (random_sig(&mut rng), random_sig(&mut rng));
        let s = random_set(&mut rng, &i, &o, true);
        let t = random_set(&mut rng, &i, &o, true);
        let alt = alternate(&s, &t).map_err(|e| e.to_string())?;
        ensure(alt.is_trace_preserving(1e-9), || {
            format!("trial {trial}: not trace preserving")
        })?;
    }
    Ok(())
}

fn phase_sensitivity() -> Outcome {
    let unit = Signature::unit();
    let id = KrausSet::identity(&unit);
    let shifted = KrausSet::new(
        unit.clone(),
        unit,
        [ComplexMatrix::identity(1).scale(C64::from_polar(1.0, PI / 4.0))],
    )
    .map_err(|e| e.to_string())?;
    let eq = |a: &KrausSet, b: &KrausSet| ext_equal(a, b, 1e-9).map_err(|e| e.to_string());
    ensure(eq(&id, &shifted)?, || "branches differ".into())?;
    let a = alternate(&id, &id).map_err(|e| e.to_string())?;
    let b = alternate(&id, &shifted).map_err(|e| e.to_string())?;
    ensure(!eq(&a, &b)?, || "alternations agree".into())?;

    let mut rng = StdRng::seed_from_u64(0x09);
    for trial in 0..50 {
        let n = rng.gen_range(1..4);
        let sig = Signature::single(n);
        let one = |u: &ComplexMatrix| KrausSet::new(sig.clone(), sig.clone(), [u.clone()]).unwrap();
        let (u0, v0) = (random::unitary(&mut rng, n), random::unitary(&mut rng, n));
        let theta = random::phase(&mut rng);
        let shared = trial % 2 == 0;
        let extra = if shared {
            C64::new(1.0, 0.0)
        } else {
            C64::from_polar(1.0, rng.gen_range(0.3..6.0))
        };
        let (u1, v1) = (u0.scale(theta), v0.scale(theta * extra));
        let same = eq(
            &alternate(&one(&u0), &one(&v0)).unwrap(),
            &alternate(&one(&u1), &one(&v1)).unwrap(),
        )?;
        ensure(same == shared, || {
            format!("trial {trial}: shared phase {shared}, equal {same}")
        })?;
    }
    Ok(())
}

fn nonmonotonicity() -> Outcome {
    let r = demo::nonmonotone();
    ensure(r.empty_below_t, || "∅ ⊑ T fails".into())?;
    ensure(r.s_below_s, || "S ⊑ S fails".into())?;
    ensure(!r.alternation_ordered, || "S•∅ ⊑ S•T holds".into())?;
    let want = (1.0 - 5f64.sqrt()) / 4.0;
    let d = (r.witness_eigenvalue - want).abs();
    ensure(d <= 1e-9, || format!("witness eigenvalue {}", r.witness_eigenvalue))
}

fn stinespring() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x0b);
    let err = |e: qalt_core::stinespring::StinespringError| e.to_string();
    for trial in 0..100 {
        let (i, o) = (random_sig(&mut rng), random_sig(&mut rng));
        let tp = rng.gen_bool(0.5);
        let s = random_set(&mut rng, &i, &o, tp);
        let rep = to_stinespring(&s).map_err(err)?;
        ensure(verify_stinespring(&s, &rep, 1e-10).map_err(err)?, || {
            format!("trial {trial}: verify")
        })?;
        let back = from_stinespring(&rep).map_err(err)?;
        ensure(ext_equal(&back, &s, 1e-10).unwrap(), || {
            format!("trial {trial}: round trip")
        })?;
    }
    for trial in 0..50 {
        let sig = Signature::single(rng.gen_range(1..4));
        let tp = rng.gen_bool(0.5);
        let s = random_set(&mut rng, &sig, &sig, tp);
        let t = random_set(&mut rng, &sig, &sig, tp);
        let w = alternation_stinespring(&s, &t).map_err(err)?;
        ensure(w.ancilla_dim() == s.len() * t.len(), || {
            format!("trial {trial}: ancilla {}", w.ancilla_dim())
        })?;
        let alt = alternate(&s, &t).unwrap();
        ensure(verify_stinespring(&alt, &w, 1e-10).map_err(err)?, || {
            format!("trial {trial}: alternation")
        })?;
    }
    Ok(())
}

fn cross_evaluator() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x0c);
    for e in corpus::all() {
        let t = typecheck(&e.program, &e.input).map_err(|err| format!("{}: {err}", e.name))?;
        for _ in 0..10 {
            let rho = random::density_state(&mut rng, &e.input.signature());
            let a = run(&t, Some(&rho)).map_err(|err| err.to_string())?;
            let b = eval_direct(&t, Some(&rho)).map_err(|err| err.to_string())?;
            let d = a.max_abs_diff(&b);
            ensure(d <= 1e-9, || format!("{}: deviation {d:e}", e.name))?;
        }
    }
    Ok(())
}

fn typing_rule() -> Outcome {
    let check = |src: &str, names: &[&str]| {
        typecheck(&parse(src).unwrap(), &Context::qubits_named(names))
            .map(|_| ())
            .unwrap_err()
    };
    let cases = [
        (
            "if q then { q *= X } else { skip }",
            &["q"][..],
            "1:13: control qubit `q` is used inside a branch of its own alternation",
        ),
        (
            "case (a, b) of |x> -> { b *= H }",
            &["a", "b"][..],
            "1:25: control qubit `b` is used inside a branch of its own alternation",
        ),
        (
            "if q0 then { discard q1 } else { skip }",
            &["q0", "q1"][..],
            "1:1: branches of `if` end in different contexts: [] vs [q1:qbit]",
        ),
        (
            "measure q0 then { new qbit r } else { skip }",
            &["q0", "q1"][..],
            "1:1: branches of `measure` end in different contexts: [q0:qbit, q1:qbit, r:qbit] vs [q0:qbit, q1:qbit]",
        ),
    ];
    for (src, names, golden) in cases {
        let e = check(src, names);
        let kind_ok = match &e.kind {
            LangErrorKind::ControlCapture { .. } => golden.contains("control qubit"),
            LangErrorKind::BranchContextMismatch { .. } => golden.contains("branches of"),
            _ => false,
        };
        ensure(kind_ok, || format!("`{src}`: {:?}", e.kind))?;
        ensure(e.to_string() == golden, || format!("`{src}`: got \"{e}\""))?;
    }
    // an alternation whose branches only touch other variables is fine
    typecheck(
        &parse("if q0 then { q1 *= H } else { q1 *= X }").unwrap(),
        &Context::qubits_named(&["q0", "q1"]),
    )
    .map_err(|e| e.to_string())?;
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("controlled-U is CNOT", controlled_u),
        ("nested if is Toffoli", toffoli),
        ("QFT matches the DFT up to bit reversal", qft),
        ("Deutsch decides all four functions", deutsch),
        ("Deutsch-Jozsa for n = 2, 3", deutsch_jozsa),
        ("classical control reduces to a branch", condition_two),
        ("unitary branches give a unitary", condition_three),
        ("trace condition and trace preservation are closed", closure),
        ("global phase is visible under alternation", phase_sensitivity),
        ("alternation is not monotone", nonmonotonicity),
        ("Stinespring representations", stinespring),
        ("direct evaluator agrees with the denotation", cross_evaluator),
        ("alternation typing rule and error messages", typing_rule),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(()) => println!("PASS {:>2}. {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
