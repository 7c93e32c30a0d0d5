// The second form of primary anomaly: an external factor such as gravel or
// oil, with no duty involved.
//
// ```text
// cargo run --example disruptive_factor
// ```

use std::error::Error;

use normengine::{analyze, builtin_kb, parse_case, Options};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let case =
        parse_case("#agents a.\n#times 1..1.\nholds(combine(disruptive_factor,gravel),a,1).")?;
    let report = analyze(&builtin_kb(), &case, Options::default())?.report;
    for f in &report.findings {
        println!("{f}");
    }
    println!("{}", report.cause);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
