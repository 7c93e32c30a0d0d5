// Adding a fact withdraws a conclusion: once b is known not to be in
// control, b can no longer be assumed to have been following a.
//
// ```text
// cargo run --example nonmonotonic
// ```

use std::error::Error;

use normengine::{analyze, builtin_kb, parse_case, parse_literal, Options};

const CASE: &str = "\
#agents a, b.
#times 1..2.
holds(stop,a,1).
holds(combine(bump,a),b,2).
holds(combine(shock_pos,back),a,2).
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let kb = builtin_kb();
    let follows = parse_literal("holds(combine(follows,a),b,1)")?;
    for extra in ["", "-holds(control,b,1)."] {
        let case = parse_case(&format!("{CASE}{extra}\n"))?;
        let a = analyze(&kb, &case, Options::default())?;
        let derived = a.result.models.iter().all(|m| m.contains(&follows));
        println!(
            "with {:<22} follows: {:<5} cause: {}",
            if extra.is_empty() {
                "the four facts"
            } else {
                extra
            },
            derived,
            a.report.cause
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
