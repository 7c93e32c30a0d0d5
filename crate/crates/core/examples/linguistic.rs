// From parser output to semantic facts, then to a report.
//
// ```text
// cargo run --example linguistic
// ```

use std::error::Error;
use std::path::Path;

use normengine::ling::{assign_agents, segment_times};
use normengine::pipeline::{run_lingcase, KbSource};
use normengine::{parse_literals, transform, Lexicon, Options};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/worked_example.lf");
    let lits = parse_literals(&std::fs::read_to_string(&path)?)?;
    let lex = Lexicon::builtin();

    for (verb, t) in segment_times(&lits, &lex)? {
        println!("verb {verb} at interval {t}");
    }
    for m in assign_agents(&lits, &lex)? {
        println!("{:?} of {}: {} is {}", m.role, m.verb, m.noun, m.agent);
    }
    for f in transform(&lits, &lex)?.facts {
        println!("{f}.");
    }

    let a = run_lingcase(&[KbSource::Builtin], &path, None, Options::default())?;
    println!("{}", a.report.cause);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
