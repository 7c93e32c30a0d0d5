//! Acceptance criteria, one PASS/FAIL line each.

mod common;

use std::fs;
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use normengine::dsl::RuleKind;
use normengine::pipeline::{analyze, build_program, load_case, run_case, run_corpus, run_lingcase};
use normengine::{
    brute_force_solve, builtin_kb, collect_signature, ground, parse_case, parse_kb, parse_literal,
    solve_all, translate_kb, AnomalyKind, GroundProgram, KbSource, KnowledgeBase, Options,
    Predicate,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn worked() -> normengine::CaseFile {
    parse_case(common::WORKED_CASE).unwrap()
}

fn in_all(a: &normengine::pipeline::Analysis, lit: &str) -> bool {
    let l = parse_literal(lit).unwrap();
    a.result.models.iter().all(|m| m.contains(&l))
}

fn in_none(a: &normengine::pipeline::Analysis, lit: &str) -> bool {
    let l = parse_literal(lit).unwrap();
    !a.result.models.iter().any(|m| m.contains(&l))
}

fn worked_example_reproduction() -> Result<String, String> {
    let t = Instant::now();
    let a = analyze(&builtin_kb(), &worked(), Options::default()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(
        a.result.exhausted && !a.result.models.is_empty(),
        "no complete model set",
    )?;
    for step in [
        "-holds(stop,b,2)",
        "holds(combine(shock,a),b,2)",
        "holds(combine(follows,a),b,1)",
        "must(stop,b,1)",
        "available(brake,stop,b,1)",
        "able(stop,b,1)",
        "p_anomaly",
    ] {
        ensure(in_all(&a, step), format!("{step} missing from some model"))?;
    }
    let f = &a.report.findings;
    ensure(
        f.len() == 1,
        format!("expected one finding, got {}", f.len()),
    )?;
    let got = (
        f[0].kind,
        f[0].property.to_string(),
        f[0].agent.to_string(),
        f[0].time,
    );
    ensure(
        got == (AnomalyKind::PrimaryForm1, "stop".into(), "b".into(), 1),
        format!("finding {}", f[0]),
    )?;
    ensure(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "7-step chain in all {} model(s), finding (stop, b, 1), {:.1} ms",
        a.result.models.len(),
        elapsed.as_secs_f64() * 1e3
    ))
}

fn solver_oracle_equivalence() -> Result<String, String> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut classical, mut naf, mut models) = (0, 0, 0);
    for i in 0..200 {
        let p: GroundProgram = common::random_program(&mut rng, 6, 25);
        ensure(
            p.atom_count() <= 12 && p.rules().len() <= 25,
            "generator out of bounds",
        )?;
        classical += usize::from(p.atoms().iter().any(|l| l.negated));
        naf += usize::from(p.rules().iter().any(|r| !r.naf.is_empty()));
        let fast = solve_all(&p, usize::MAX - 1);
        let brute = brute_force_solve(&p).map_err(|e| e.to_string())?;
        let oracle = common::oracle_models(&p);
        ensure(
            fast.model_set() == brute.model_set() && fast.model_set() == oracle,
            format!("program {i} differs:\n{p}"),
        )?;
        models += fast.models.len();
    }
    ensure(
        classical > 100 && naf > 100,
        "programs rarely use both negations",
    )?;
    let elapsed = t.elapsed();
    ensure(
        elapsed < Duration::from_secs(60),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "200 programs, {models} models, identical to both oracles, {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn non_monotonicity() -> Result<String, String> {
    let kb = builtin_kb();
    let base = analyze(&kb, &worked(), Options::default()).map_err(|e| e.to_string())?;
    ensure(
        in_all(&base, "holds(combine(follows,a),b,1)"),
        "baseline lacks follows",
    )?;
    let mut case = worked();
    case.facts
        .push(parse_literal("-holds(control,b,1)").unwrap());
    let a = analyze(&kb, &case, Options::default()).map_err(|e| e.to_string())?;
    ensure(!a.result.models.is_empty(), "no model")?;
    ensure(
        in_none(&a, "holds(combine(follows,a),b,1)"),
        "follows still derived",
    )?;
    ensure(in_none(&a, "p_anomaly"), "p_anomaly still derived")?;
    Ok(format!(
        "follows and p_anomaly withdrawn from all {} model(s)",
        a.result.models.len()
    ))
}

fn derived_anomaly_switch() -> Result<String, String> {
    let mut kb = builtin_kb();
    kb.merge(parse_kb("r_brakes_failed: -available(brake,stop,b,1).").unwrap())
        .map_err(|e| e.to_string())?;
    let a = analyze(&kb, &worked(), Options::default()).map_err(|e| e.to_string())?;
    ensure(in_all(&a, "d_anomaly"), "d_anomaly missing")?;
    ensure(in_none(&a, "p_anomaly"), "p_anomaly still derived")?;
    ensure(in_all(&a, "-able(stop,b,1)"), "-able(stop,b,1) missing")?;
    let f = &a.report.findings;
    ensure(
        f.len() == 1 && f[0].kind == AnomalyKind::Derived && f[0].violated_rule == "r_danom",
        format!("findings {f:?}"),
    )?;
    Ok(format!("finding: {}", f[0]))
}

fn is_ability_rule(id: &str) -> bool {
    id.starts_with("r_able") || id.starts_with("r_avail")
}

fn form2_anomaly() -> Result<String, String> {
    let case =
        parse_case("#agents a.\n#times 1..1.\nholds(combine(disruptive_factor,gravel),a,1).")
            .unwrap();
    let kb = builtin_kb();
    let expect = |kb: &KnowledgeBase| -> Result<normengine::pipeline::Analysis, String> {
        let a = analyze(kb, &case, Options::default()).map_err(|e| e.to_string())?;
        let f = &a.report.findings;
        ensure(
            f.len() == 1
                && f[0].kind == AnomalyKind::PrimaryForm2
                && f[0].property.to_string() == "combine(disruptive_factor,gravel)"
                && f[0].agent.to_string() == "a"
                && f[0].time == 1,
            format!("findings {f:?}"),
        )?;
        ensure(in_all(&a, "p_anomaly"), "p_anomaly missing")?;
        Ok(a)
    };
    let a = expect(&kb)?;
    let has = |a: &normengine::pipeline::Analysis, p: Predicate| {
        a.result
            .models
            .iter()
            .any(|m| m.iter().any(|l| l.pred() == p))
    };
    ensure(!has(&a, Predicate::Must), "a must atom was derived")?;
    let rule = kb.rule(&a.report.findings[0].violated_rule).unwrap();
    let RuleKind::Implication { body, .. } = &rule.kind else {
        return Err("firing rule is not an implication".into());
    };
    ensure(
        body.iter()
            .all(|l| !matches!(l.pred(), Predicate::Must | Predicate::Able)),
        "firing rule mentions must/able",
    )?;
    let mut bare = kb.clone();
    bare.rules.retain(|r| !is_ability_rule(&r.id));
    let b = expect(&bare)?;
    ensure(
        !has(&b, Predicate::Must) && !has(&b, Predicate::Able),
        "must/able atoms without ability rules",
    )?;
    Ok(format!(
        "{}; no must atoms, and none of must/able once ability rules are removed",
        a.report.findings[0]
    ))
}

fn translation_golden() -> Result<String, String> {
    let golden =
        |name: &str| fs::read_to_string(common::manifest(&format!("tests/golden/{name}"))).unwrap();
    let kb = parse_kb(
        "r_imp: action(a1) & action(a2) -> action(b).\n\
         d_normal: action(a) : action(b).\n\
         d_semi: action(a) : action(b) [action(c)].\n",
    )
    .unwrap();
    let lines: Vec<String> = translate_kb(&kb)
        .rules
        .iter()
        .map(ToString::to_string)
        .collect();
    for image in [
        "action(b) :- action(a1), action(a2).",
        "action(b) :- action(a), not -action(b).",
        "action(b) :- action(a), not -action(b), not -action(c).",
        "-action(a1) :- -action(b), action(a2).",
        "-action(a2) :- -action(b), action(a1).",
    ] {
        ensure(
            lines.iter().any(|l| l == image),
            format!("missing image {image}"),
        )?;
    }
    ensure(
        lines.len() == 5,
        format!("{} rules, expected 5", lines.len()),
    )?;
    let g = GroundProgram::from_rules(translate_kb(&kb).rules);
    ensure(
        g.to_text(true) == golden("schemas.lp"),
        "schemas.lp differs",
    )?;

    let kb = parse_kb(
        "r_imp: holds(control,A,T) -> holds(neg(stop),A,T).\n\
         d_normal: holds(stop,A,T) : holds(stop,A,T+1).\n",
    )
    .unwrap();
    let case = parse_case("#agents a, b.\n#times 1..2.\n").unwrap();
    let sig = collect_signature(&kb, &case).map_err(|e| e.to_string())?;
    let g = ground(&build_program(&kb, &case), &sig).map_err(|e| e.to_string())?;
    ensure(
        g.to_text(true) == golden("schemas_ground.lp"),
        "schemas_ground.lp differs",
    )?;
    Ok("three schemas and contrapositives match 2 golden dumps".into())
}

fn linguistic_stage() -> Result<String, String> {
    let kbs = [KbSource::Builtin];
    let ling = run_lingcase(
        &kbs,
        &common::manifest("data/worked_example.lf"),
        None,
        Options::default(),
    )
    .map_err(|e| e.to_string())?;
    let sem = run_case(
        &kbs,
        &common::manifest("data/worked_example.nc"),
        Options::default(),
    )
    .map_err(|e| e.to_string())?;
    let (x, y) = (ling.report.canonical_json(), sem.report.canonical_json());
    ensure(x == y, format!("reports differ:\n{x}\n---\n{y}"))?;
    Ok(format!("{} identical bytes", x.len()))
}

fn corpus_harness() -> Result<String, String> {
    let dir = common::manifest("corpus");
    let res =
        run_corpus(&[KbSource::Builtin], &dir, Options::default()).map_err(|e| e.to_string())?;
    ensure(
        res.cases.len() >= 8,
        format!("only {} cases", res.cases.len()),
    )?;
    ensure(res.failed() == 0, res.to_text())?;
    let mut slowest = 0.0f64;
    for c in &res.cases {
        let case = load_case(&c.path).map_err(|e| e.to_string())?;
        ensure(
            case.agents.len() <= 4 && case.max_time <= 6,
            format!("{} exceeds 4 agents x 6 intervals", c.case_id),
        )?;
        ensure(
            c.elapsed_ms < 2000.0,
            format!("{} took {:.0} ms", c.case_id, c.elapsed_ms),
        )?;
        slowest = slowest.max(c.elapsed_ms);
    }
    for id in [
        "worked_rear_end",
        "explicit_control",
        "uncontrolled",
        "gravel_single",
        "no_anomaly",
    ] {
        ensure(
            res.cases.iter().any(|c| c.case_id == id),
            format!("case {id} missing"),
        )?;
    }
    Ok(format!(
        "{}/{} cases pass, slowest {:.1} ms",
        res.passed(),
        res.cases.len(),
        slowest
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        ("worked-example reproduction", worked_example_reproduction),
        ("solver-oracle equivalence", solver_oracle_equivalence),
        ("non-monotonicity", non_monotonicity),
        ("derived-anomaly switch", derived_anomaly_switch),
        ("form-2 anomaly", form2_anomaly),
        ("translation golden tests", translation_golden),
        ("linguistic stage", linguistic_stage),
        ("corpus harness", corpus_harness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(check)
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
