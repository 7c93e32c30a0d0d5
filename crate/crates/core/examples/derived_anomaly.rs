// An exception to action availability turns the primary anomaly into a
// derived one: b still had to stop, but could not.
//
// ```text
// cargo run --example derived_anomaly
// ```

use std::error::Error;

use normengine::norms::close_ability;
use normengine::{analyze, builtin_kb, parse_case, parse_kb, Options};

const CASE: &str = "\
#agents a, b.
#times 1..2.
holds(stop,a,1).
holds(brake_failure,b,1).
holds(combine(bump,a),b,2).
holds(combine(shock_pos,back),a,2).
";

const EXCEPTION: &str = "r_brake_failure: holds(brake_failure,A,T) -> -available(brake,stop,A,T).";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let case = parse_case(CASE)?;
    let mut kb = builtin_kb();
    println!(
        "without the exception: {}",
        analyze(&kb, &case, Options::default())?.report.cause
    );

    kb.merge(parse_kb(EXCEPTION)?)?;
    close_ability(&mut kb);
    let report = analyze(&kb, &case, Options::default())?.report;
    println!("with the exception:    {}", report.cause);
    println!(
        "p_anomaly: {}, d_anomaly: {}",
        report.primary_anomaly, report.derived_anomaly
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
