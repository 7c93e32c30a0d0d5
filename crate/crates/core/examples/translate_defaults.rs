// How implications and defaults become logic-program rules.
//
// ```text
// cargo run --example translate_defaults
// ```

use std::error::Error;

use normengine::{parse_kb, translate_rule};

const RULES: &str = "
r_imp: holds(combine(bump,V),W,T) -> -holds(stop,W,T).
r_normal: action(Act) & pcb(Act,E) : available(Act,E,A,T).
r_follows: holds(combine(shock,V),W,T) & holds(combine(shock_pos,back),V,T) : holds(combine(follows,V),W,T-1) [holds(control,W,T-1)].
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let kb = parse_kb(RULES)?;
    for rule in &kb.rules {
        println!("{rule}");
        for lp in translate_rule(rule) {
            println!("    {lp}    % {}", lp.origin);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
