// The rear-end collision: "My vehicle was stopped at the stop sign when the
// vehicle hit me from behind."
//
// ```text
// cargo run --example worked_example
// ```

use std::error::Error;

use normengine::{analyze, builtin_kb, parse_case, parse_literal, Options};

const CASE: &str = "\
#case worked_example.
#agents a, b.
#times 1..2.
holds(stop,a,1).
holds(stop_sign,a,1).
holds(combine(bump,a),b,2).
holds(combine(shock_pos,back),a,2).
";

const CHAIN: [&str; 7] = [
    "-holds(stop,b,2)",
    "holds(combine(shock,a),b,2)",
    "holds(combine(follows,a),b,1)",
    "must(stop,b,1)",
    "available(brake,stop,b,1)",
    "able(stop,b,1)",
    "p_anomaly",
];

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let case = parse_case(CASE)?;
    let a = analyze(&builtin_kb(), &case, Options::default())?;
    println!("{} stable model(s)", a.result.models.len());
    for step in CHAIN {
        let lit = parse_literal(step)?;
        let everywhere = a.result.models.iter().all(|m| m.contains(&lit));
        println!(
            "  {step:<32} {}",
            if everywhere { "derived" } else { "MISSING" }
        );
        if !everywhere {
            return Err(format!("{step} not derived").into());
        }
    }
    print!("{}", a.report.to_text());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
