mod common;

use normengine::pipeline::build_program;
use normengine::{builtin_kb, collect_signature, ground, ground_relevant, parse_case, solve_all};

fn compare(case_text: &str) {
    let kb = builtin_kb();
    let case = parse_case(case_text).unwrap();
    let sig = collect_signature(&kb, &case).unwrap();
    let program = build_program(&kb, &case);
    let naive = ground(&program, &sig).unwrap();
    let relevant = ground_relevant(&program, &sig).unwrap();
    assert!(relevant.rules().len() <= naive.rules().len());
    let naive_rules: std::collections::HashSet<String> =
        naive.rules().iter().map(|r| naive.rule_text(r)).collect();
    for r in relevant.rules() {
        assert!(
            naive_rules.contains(&relevant.rule_text(r)),
            "{}",
            relevant.rule_text(r)
        );
    }
    let a = solve_all(&naive, 1000);
    let b = solve_all(&relevant, 1000);
    assert!(a.exhausted && b.exhausted);
    assert_eq!(a.model_set(), b.model_set());
}

#[test]
fn relevant_grounding_keeps_models_worked_example() {
    compare(common::WORKED_CASE);
}

#[test]
fn relevant_grounding_keeps_models_uncontrolled() {
    compare(&format!("{}-holds(control,b,1).\n", common::WORKED_CASE));
}

#[test]
fn relevant_grounding_keeps_models_disruptive_factor() {
    compare("#agents a.\n#times 1..2.\nholds(combine(disruptive_factor,gravel),a,1).\n");
}

#[test]
fn relevant_grounding_keeps_models_front_shock() {
    compare(
        "#agents a, b.\n#times 1..2.\nholds(stop,a,1).\nholds(combine(bump,a),b,2).\n\
         holds(combine(shock_pos,front),a,2).\n",
    );
}

#[test]
fn naive_grounding_respects_time_bounds() {
    let kb = builtin_kb();
    let case = parse_case(common::WORKED_CASE).unwrap();
    let sig = collect_signature(&kb, &case).unwrap();
    let g = ground(&build_program(&kb, &case), &sig).unwrap();
    for l in g.atoms() {
        for t in l.args().iter().filter_map(|t| t.as_time()) {
            assert!((1..=2).contains(&t), "{l}");
        }
    }
    // r_follows concludes at T-1, so only T = 2 survives: one instance per
    // (V, W) agent pair.
    let follows = g
        .rules()
        .iter()
        .filter(|r| r.origin.rule == "r_follows")
        .count();
    assert_eq!(follows, 4);
}
