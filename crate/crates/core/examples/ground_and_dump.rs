// Grounding a knowledge base over a case, naively and by relevance, and
// dumping the ground program in the solver's input syntax.
//
// ```text
// cargo run --example ground_and_dump
// ```

use std::error::Error;

use normengine::pipeline::build_program;
use normengine::{collect_signature, ground, ground_relevant, parse_case, parse_ground, parse_kb};

const KB: &str = "
action(brake).
pcb(brake,stop).
r_bump_not_stop: holds(combine(bump,V),W,T) -> -holds(stop,W,T).
r_avail: action(Act) & pcb(Act,E) : available(Act,E,A,T).
";

const CASE: &str = "#agents a, b.\n#times 1..2.\nholds(combine(bump,a),b,2).\n";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let kb = parse_kb(KB)?;
    let case = parse_case(CASE)?;
    let sig = collect_signature(&kb, &case)?;
    println!(
        "agents: {:?}",
        sig.agents
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );
    println!("properties: {}", sig.properties.len());

    let program = build_program(&kb, &case);
    let naive = ground(&program, &sig)?;
    let relevant = ground_relevant(&program, &sig)?;
    println!("naive grounding: {} rules", naive.rules().len());
    println!("relevant grounding: {} rules", relevant.rules().len());

    let dump = relevant.to_text(true);
    print!("{dump}");
    let reread = parse_ground(&dump)?;
    assert_eq!(reread.to_text(true), dump);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
