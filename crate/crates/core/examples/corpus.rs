// Runs the bundled regression corpus.
//
// ```text
// cargo run --example corpus
// ```

use std::error::Error;
use std::path::Path;

use normengine::pipeline::{run_corpus, KbSource};
use normengine::Options;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let result = run_corpus(&[KbSource::Builtin], &dir, Options::default())?;
    print!("{}", result.to_text());
    if result.failed() > 0 {
        return Err(format!("{} case(s) failed", result.failed()).into());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
