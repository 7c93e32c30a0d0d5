use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use normengine::ground::parse_ground;
use normengine::pipeline::{
    load_kbs, load_lingcase, report_from_ground, run_case, run_corpus, Analysis, AnomalyReport,
    KbSource, Mode, Options, PipelineError, DEFAULT_MODEL_CAP, EXIT_OK,
};

#[derive(Parser)]
#[command(version, about = "Find the anomaly behind a car-crash report")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse a case file (.nc) or a ground program (.lp).
    Solve {
        /// Case file with semantic facts.
        #[arg(long, required_unless_present = "ground", conflicts_with = "ground")]
        case: Option<PathBuf>,
        /// Skip translation and grounding; solve this ground program.
        #[arg(long)]
        ground: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Analyse linguistic facts (.lf) through the lexicon.
    Ling {
        #[arg(long)]
        facts: PathBuf,
        /// Tab-separated lexicon; the built-in French one by default.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Write the derived case file here.
        #[arg(long, value_name = "FILE")]
        dump_case: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every .nc case of a directory and compare with its expectations.
    Corpus {
        #[arg(long)]
        dir: PathBuf,
        /// Knowledge bases (`norms_road` is the built-in one).
        #[arg(long = "kb", default_value = "norms_road")]
        kbs: Vec<String>,
        #[arg(long, default_value = "skeptical")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_MODEL_CAP)]
        models: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Knowledge bases (`norms_road` is the built-in one).
    #[arg(long = "kb", default_value = "norms_road")]
    kbs: Vec<String>,
    #[arg(long, default_value = "skeptical")]
    mode: Mode,
    /// Stop after this many stable models.
    #[arg(long, default_value_t = DEFAULT_MODEL_CAP)]
    models: usize,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Write the merged knowledge base here.
    #[arg(long, value_name = "FILE")]
    dump_kb: Option<PathBuf>,
    /// Write the translated logic program here.
    #[arg(long, value_name = "FILE")]
    dump_program: Option<PathBuf>,
    /// Write the ground program here.
    #[arg(long, value_name = "FILE")]
    dump_ground: Option<PathBuf>,
}

impl RunArgs {
    fn options(&self) -> Options {
        Options {
            mode: self.mode,
            model_cap: self.models,
        }
    }

    fn sources(&self) -> Vec<KbSource> {
        self.kbs.iter().map(|k| KbSource::from_arg(k)).collect()
    }
}

fn write(path: &Path, text: &str) -> Result<(), PipelineError> {
    fs::write(path, text).map_err(|source| PipelineError::Io {
        path: path.into(),
        source,
    })
}

fn dumps(run: &RunArgs, a: &Analysis) -> Result<(), PipelineError> {
    if let Some(p) = &run.dump_kb {
        write(p, &load_kbs(&run.sources())?.to_text())?;
    }
    if let Some(p) = &run.dump_program {
        write(p, &a.program.to_text())?;
    }
    if let Some(p) = &run.dump_ground {
        write(p, &a.ground.to_text(true))?;
    }
    Ok(())
}

fn print_report(r: &AnomalyReport, json: bool) {
    if json {
        println!("{}", r.to_json());
    } else {
        print!("{}", r.to_text());
    }
}

fn run(cli: Cli) -> Result<i32, PipelineError> {
    match cli.command {
        Command::Solve {
            case: Some(case),
            run,
            ..
        } => {
            let a = run_case(&run.sources(), &case, run.options())?;
            dumps(&run, &a)?;
            print_report(&a.report, run.json);
        }
        Command::Solve {
            ground: Some(path),
            run,
            ..
        } => {
            let text = fs::read_to_string(&path).map_err(|source| PipelineError::Io {
                path: path.clone(),
                source,
            })?;
            let g = parse_ground(&text).map_err(|source| PipelineError::Parse {
                path: path.clone(),
                source,
            })?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let (report, _) = report_from_ground(&id, &g, run.options())?;
            print_report(&report, run.json);
        }
        Command::Solve { .. } => unreachable!("clap requires --case or --ground"),
        Command::Ling {
            facts,
            lexicon,
            dump_case,
            run,
        } => {
            if let Some(p) = &dump_case {
                let (case, _) = load_lingcase(&facts, lexicon.as_deref())?;
                write(p, &case.to_text())?;
            }
            let a = normengine::pipeline::run_lingcase(
                &run.sources(),
                &facts,
                lexicon.as_deref(),
                run.options(),
            )?;
            dumps(&run, &a)?;
            print_report(&a.report, run.json);
        }
        Command::Corpus {
            dir,
            kbs,
            mode,
            models,
            json,
        } => {
            let sources: Vec<KbSource> = kbs.iter().map(|k| KbSource::from_arg(k)).collect();
            let opts = Options {
                mode,
                model_cap: models,
            };
            let result = run_corpus(&sources, &dir, opts)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&result).expect("corpus result serializes")
                );
            } else {
                print!("{}", result.to_text());
            }
            return Ok(result.exit_code());
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
