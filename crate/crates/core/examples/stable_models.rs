// Stable models of a small ground program with both negations.
//
// ```text
// cargo run --example stable_models
// ```

use std::error::Error;

use normengine::solver::{least_model, reduct};
use normengine::{brute_force_solve, is_stable, parse_ground, solve_all};

// Two defaults that block each other, and a rule forbidding `c` with `-a`.
const PROGRAM: &str = "
action(a) :- not action(b).
action(b) :- not action(a).
-action(a) :- action(c).
action(c) :- action(b).
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = parse_ground(PROGRAM)?;
    let res = solve_all(&p, 16);
    println!(
        "{} stable model(s), exhausted: {}",
        res.models.len(),
        res.exhausted
    );
    for m in &res.models {
        println!("  {m}");
        println!("    reduct least model: {}", least_model(&reduct(&p, m)));
        assert!(is_stable(&p, m));
    }
    assert_eq!(res.model_set(), brute_force_solve(&p)?.model_set());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
