mod common;

use std::fs;

use normengine::pipeline::build_program;
use normengine::{
    builtin_kb, collect_signature, ground, ground_relevant, parse_case, parse_kb, translate_kb,
    GroundProgram, KnowledgeBase,
};

const SCHEMAS: &str = "
r_imp: action(a1) & action(a2) -> action(b).
d_normal: action(a) : action(b).
d_semi: action(a) : action(b) [action(c)].
";

fn golden(name: &str) -> String {
    fs::read_to_string(common::manifest(&format!("tests/golden/{name}"))).unwrap()
}

#[test]
fn three_schemas_match_golden_dump() {
    let kb = parse_kb(SCHEMAS).unwrap();
    let g = GroundProgram::from_rules(translate_kb(&kb).rules);
    assert_eq!(g.to_text(true), golden("schemas.lp"));
}

#[test]
fn schema_images_in_source_order() {
    let kb = parse_kb(SCHEMAS).unwrap();
    let lines: Vec<String> = translate_kb(&kb)
        .rules
        .iter()
        .map(ToString::to_string)
        .collect();
    assert_eq!(
        lines,
        [
            "action(b) :- action(a1), action(a2).",
            "-action(a1) :- -action(b), action(a2).",
            "-action(a2) :- -action(b), action(a1).",
            "action(b) :- action(a), not -action(b).",
            "action(b) :- action(a), not -action(b), not -action(c).",
        ]
    );
}

#[test]
fn schemas_with_variables_ground_to_golden_dump() {
    let kb = parse_kb(
        "r_imp: holds(control,A,T) -> holds(neg(stop),A,T).\n\
         d_normal: holds(stop,A,T) : holds(stop,A,T+1).\n",
    )
    .unwrap();
    let case = parse_case("#agents a, b.\n#times 1..2.\n").unwrap();
    let sig = collect_signature(&kb, &case).unwrap();
    let g = ground(&build_program(&kb, &case), &sig).unwrap();
    assert_eq!(g.to_text(true), golden("schemas_ground.lp"));
}

#[test]
fn worked_example_ground_dump_is_stable() {
    let kb: KnowledgeBase = builtin_kb();
    let case = parse_case(common::WORKED_CASE).unwrap();
    let sig = collect_signature(&kb, &case).unwrap();
    let g = ground_relevant(&build_program(&kb, &case), &sig).unwrap();
    assert_eq!(g.to_text(true), golden("worked_example.lp"));
}
