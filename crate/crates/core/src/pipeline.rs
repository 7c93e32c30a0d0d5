//! End-to-end runs: knowledge bases and a case in, an anomaly report out.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::dsl::{parse_case, parse_kb, parse_literals, CaseFile, KnowledgeBase, ParseError};
use crate::ground::{collect_signature, ground_relevant, GroundError, GroundProgram};
use crate::ling::{transform, Lexicon, LingError};
use crate::model::Literal;
use crate::norms::{
    builtin_kb, close_ability, extract_findings, AnomalyFinding, BUILTIN_NAME, ROAD_KB,
};
use crate::solver::{solve_all, SolveResult};
use crate::translate::{translate_kb, LogicProgram, Variant};

pub const REPORT_SCHEMA: &str = "normengine.report/v1";
pub const DEFAULT_MODEL_CAP: usize = 64;

/// Origin label of case facts in logic programs.
pub const CASE_SOURCE: &str = "case";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CORPUS_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NO_MODEL: i32 = 3;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: {source}", path.display())]
    Ling { path: PathBuf, source: LingError },
    #[error("knowledge base: {0}")]
    Kb(String),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error("case `{0}` has no stable model: the facts contradict the knowledge base")]
    NoModel(String),
    #[error("no .nc case files in {}", .0.display())]
    EmptyCorpus(PathBuf),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::NoModel(_) => EXIT_NO_MODEL,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Findings present in every stable model.
    #[default]
    Skeptical,
    /// Findings present in some stable model.
    Credulous,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Skeptical => "skeptical",
            Mode::Credulous => "credulous",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "skeptical" => Ok(Mode::Skeptical),
            "credulous" => Ok(Mode::Credulous),
            _ => Err(format!("unknown mode `{s}` (skeptical or credulous)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub mode: Mode,
    pub model_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mode: Mode::Skeptical,
            model_cap: DEFAULT_MODEL_CAP,
        }
    }
}

/// Where a knowledge base comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KbSource {
    Builtin,
    File(PathBuf),
}

impl KbSource {
    /// `norms_road` names the built-in base; anything else is a path.
    pub fn from_arg(arg: &str) -> KbSource {
        if arg == BUILTIN_NAME {
            KbSource::Builtin
        } else {
            KbSource::File(arg.into())
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub translate_ms: f64,
    pub ground_ms: f64,
    pub solve_ms: f64,
    pub extract_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnomalyReport {
    pub schema: &'static str,
    pub case_id: String,
    pub mode: Mode,
    pub models_found: usize,
    /// False when the model cap cut the enumeration short.
    pub exhausted: bool,
    /// Case facts, sorted.
    pub facts: Vec<String>,
    pub primary_anomaly: bool,
    pub derived_anomaly: bool,
    pub findings: Vec<AnomalyFinding>,
    pub cause: String,
    pub warnings: Vec<String>,
    pub timings_ms: Timings,
}

impl AnomalyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON without timings, byte-identical across runs.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(o) = v.as_object_mut() {
            o.remove("timings_ms");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "case {} ({}, {} model{}{})\n",
            self.case_id,
            self.mode,
            self.models_found,
            if self.models_found == 1 { "" } else { "s" },
            if self.exhausted { "" } else { ", cap reached" }
        );
        s.push_str(&format!("cause: {}\n", self.cause));
        if !self.findings.is_empty() {
            s.push_str("findings:\n");
            for f in &self.findings {
                s.push_str(&format!("  {f}\n"));
            }
        }
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s
    }
}

/// Everything a run produces, for callers that want more than the report.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: AnomalyReport,
    pub program: LogicProgram,
    pub ground: GroundProgram,
    pub result: SolveResult,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.into(),
        source,
    })
}

/// Merges the given bases and closes the ability rules.
pub fn load_kbs(sources: &[KbSource]) -> Result<KnowledgeBase, PipelineError> {
    let mut kb = KnowledgeBase::default();
    for src in sources {
        let (path, text) = match src {
            KbSource::Builtin => (PathBuf::from(BUILTIN_NAME), ROAD_KB.to_string()),
            KbSource::File(p) => (p.clone(), read(p)?),
        };
        let part = parse_kb(&text).map_err(|source| PipelineError::Parse {
            path: path.clone(),
            source,
        })?;
        kb.merge(part)
            .map_err(|e| PipelineError::Kb(format!("{}: {e}", path.display())))?;
    }
    close_ability(&mut kb);
    Ok(kb)
}

/// The knowledge base used when none is given.
pub fn default_kb() -> KnowledgeBase {
    builtin_kb()
}

/// Case facts plus knowledge base as one (non-ground) logic program.
pub fn build_program(kb: &KnowledgeBase, case: &CaseFile) -> LogicProgram {
    let mut program = translate_kb(kb);
    program.extend_facts(&case.facts, CASE_SOURCE);
    program
}

/// Runs translation, grounding, solving and extraction in memory.
pub fn analyze(
    kb: &KnowledgeBase,
    case: &CaseFile,
    opts: Options,
) -> Result<Analysis, PipelineError> {
    let t = Instant::now();
    let program = build_program(kb, case);
    let translate_ms = ms(t);
    let t = Instant::now();
    let sig = collect_signature(kb, case)?;
    let ground = ground_relevant(&program, &sig)?;
    let ground_ms = ms(t);
    let (mut report, result) = report_from_ground(&case.case_id, &ground, opts)?;
    report.warnings.splice(0..0, case.warnings.iter().cloned());
    report.timings_ms.translate_ms = translate_ms;
    report.timings_ms.ground_ms = ground_ms;
    Ok(Analysis {
        report,
        program,
        ground,
        result,
    })
}

/// Solves an already ground program and builds the report. Case facts are
/// the fact rules whose origin is `case`.
pub fn report_from_ground(
    case_id: &str,
    ground: &GroundProgram,
    opts: Options,
) -> Result<(AnomalyReport, SolveResult), PipelineError> {
    let t = Instant::now();
    let result = solve_all(ground, opts.model_cap.max(1));
    let solve_ms = ms(t);
    if result.models.is_empty() {
        return Err(PipelineError::NoModel(case_id.to_string()));
    }
    let t = Instant::now();
    let per_model: Vec<Vec<AnomalyFinding>> = result
        .models
        .iter()
        .map(|m| extract_findings(ground, m))
        .collect();
    let mut findings: Vec<AnomalyFinding> = match opts.mode {
        Mode::Skeptical => per_model[0]
            .iter()
            .filter(|f| per_model.iter().all(|fs| fs.contains(f)))
            .cloned()
            .collect(),
        Mode::Credulous => per_model
            .iter()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    };
    findings.sort();
    let present = |name: &str| {
        let has = |m: &crate::solver::Interpretation| {
            m.iter().any(|l| !l.negated && l.pred().name() == name)
        };
        match opts.mode {
            Mode::Skeptical => result.models.iter().all(has),
            Mode::Credulous => result.models.iter().any(has),
        }
    };
    let primary_anomaly = present("p_anomaly");
    let derived_anomaly = present("d_anomaly");
    let extract_ms = ms(t);

    let cause = findings
        .iter()
        .find(|f| f.kind.is_primary())
        .or(findings.first())
        .map(AnomalyFinding::cause)
        .unwrap_or_else(|| "no anomaly found".to_string());
    let mut facts: Vec<String> = ground
        .rules()
        .iter()
        .filter(|r| r.origin.rule == CASE_SOURCE && r.origin.variant == Variant::Fact)
        .map(|r| ground.atom(r.head).to_string())
        .collect();
    facts.sort();
    facts.dedup();
    let mut warnings = Vec::new();
    if !result.exhausted {
        warnings.push(format!(
            "model cap {} reached; findings cover the enumerated models only",
            opts.model_cap
        ));
    }
    let report = AnomalyReport {
        schema: REPORT_SCHEMA,
        case_id: case_id.to_string(),
        mode: opts.mode,
        models_found: result.models.len(),
        exhausted: result.exhausted,
        facts,
        primary_anomaly,
        derived_anomaly,
        findings,
        cause,
        warnings,
        timings_ms: Timings {
            solve_ms,
            extract_ms,
            ..Timings::default()
        },
    };
    Ok((report, result))
}

pub fn load_case(path: &Path) -> Result<CaseFile, PipelineError> {
    let text = read(path)?;
    let mut case = parse_case(&text).map_err(|source| PipelineError::Parse {
        path: path.into(),
        source,
    })?;
    if case.case_id.is_empty() {
        case.case_id = file_stem(path);
    }
    Ok(case)
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn run_case(
    kbs: &[KbSource],
    case_path: &Path,
    opts: Options,
) -> Result<Analysis, PipelineError> {
    let t = Instant::now();
    let kb = load_kbs(kbs)?;
    let case = load_case(case_path)?;
    let parse_ms = ms(t);
    let mut a = analyze(&kb, &case, opts)?;
    a.report.timings_ms.parse_ms = parse_ms;
    Ok(a)
}

/// Linguistic facts to case, using `lexicon` or the built-in French one.
pub fn load_lingcase(
    lf_path: &Path,
    lexicon: Option<&Path>,
) -> Result<(CaseFile, KnowledgeBase), PipelineError> {
    let lex = match lexicon {
        Some(p) => Lexicon::parse(&read(p)?).map_err(|source| PipelineError::Ling {
            path: p.into(),
            source,
        })?,
        None => Lexicon::builtin(),
    };
    let lits = parse_literals(&read(lf_path)?).map_err(|source| PipelineError::Parse {
        path: lf_path.into(),
        source,
    })?;
    let t = transform(&lits, &lex).map_err(|source| PipelineError::Ling {
        path: lf_path.into(),
        source,
    })?;
    let case = t.to_case(&file_stem(lf_path), &lits);
    let defaults = KnowledgeBase {
        rules: t.defaults,
        facts: vec![],
    };
    Ok((case, defaults))
}

pub fn run_lingcase(
    kbs: &[KbSource],
    lf_path: &Path,
    lexicon: Option<&Path>,
    opts: Options,
) -> Result<Analysis, PipelineError> {
    let t = Instant::now();
    let mut kb = load_kbs(kbs)?;
    let (case, defaults) = load_lingcase(lf_path, lexicon)?;
    kb.merge(defaults)
        .map_err(|e| PipelineError::Kb(e.to_string()))?;
    let parse_ms = ms(t);
    let mut a = analyze(&kb, &case, opts)?;
    a.report.timings_ms.parse_ms = parse_ms;
    Ok(a)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub case_id: String,
    pub path: PathBuf,
    pub passed: bool,
    /// Expected literals missing from at least one model.
    pub missing: Vec<String>,
    /// Literals declared absent but found in at least one model.
    pub unexpected: Vec<String>,
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CorpusResult {
    pub cases: Vec<CaseOutcome>,
}

impl CorpusResult {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.cases.len() - self.passed()
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed() == 0 {
            EXIT_OK
        } else {
            EXIT_CORPUS_FAILED
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.cases {
            let status = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!(
                "{status} {} ({:.1} ms)\n",
                c.case_id, c.elapsed_ms
            ));
            if let Some(e) = &c.error {
                s.push_str(&format!("  error: {e}\n"));
            }
            for l in &c.missing {
                s.push_str(&format!("  - expected {l}\n"));
            }
            for l in &c.unexpected {
                s.push_str(&format!("  + unexpected {l}\n"));
            }
        }
        s.push_str(&format!(
            "{} passed, {} failed\n",
            self.passed(),
            self.failed()
        ));
        s
    }
}

/// Checks a case's `#expected` and `#absent` literals against every model.
pub fn check_case(kb: &KnowledgeBase, case: &CaseFile, opts: Options) -> CaseOutcome {
    let t = Instant::now();
    let mut out = CaseOutcome {
        case_id: case.case_id.clone(),
        path: PathBuf::new(),
        passed: false,
        missing: vec![],
        unexpected: vec![],
        error: None,
        elapsed_ms: 0.0,
    };
    if case.expected.is_none() && case.absent.is_empty() {
        out.error = Some("no #expected or #absent block".into());
    } else {
        match analyze(kb, case, opts) {
            Ok(a) => {
                let in_all = |l: &Literal| a.result.models.iter().all(|m| m.contains(l));
                let in_any = |l: &Literal| a.result.models.iter().any(|m| m.contains(l));
                out.missing = case
                    .expected
                    .iter()
                    .flatten()
                    .filter(|l| !in_all(l))
                    .map(ToString::to_string)
                    .collect();
                out.unexpected = case
                    .absent
                    .iter()
                    .filter(|l| in_any(l))
                    .map(ToString::to_string)
                    .collect();
                out.passed = out.missing.is_empty() && out.unexpected.is_empty();
            }
            Err(e) => out.error = Some(e.to_string()),
        }
    }
    out.elapsed_ms = ms(t);
    out
}

/// Runs every `.nc` case in `dir` against `kbs` plus the directory's own
/// `.nkb` files.
pub fn run_corpus(
    kbs: &[KbSource],
    dir: &Path,
    opts: Options,
) -> Result<CorpusResult, PipelineError> {
    let entries = fs::read_dir(dir).map_err(|source| PipelineError::Io {
        path: dir.into(),
        source,
    })?;
    let mut cases = Vec::new();
    let mut sources = kbs.to_vec();
    let mut extra = Vec::new();
    for e in entries {
        let path = e
            .map_err(|source| PipelineError::Io {
                path: dir.into(),
                source,
            })?
            .path();
        match path.extension().and_then(|x| x.to_str()) {
            Some("nc") => cases.push(path),
            Some("nkb") => extra.push(path),
            _ => {}
        }
    }
    if cases.is_empty() {
        return Err(PipelineError::EmptyCorpus(dir.into()));
    }
    cases.sort();
    extra.sort();
    sources.extend(extra.into_iter().map(KbSource::File));
    let kb = load_kbs(&sources)?;
    let mut result = CorpusResult::default();
    for path in cases {
        let outcome = match load_case(&path) {
            Ok(case) => CaseOutcome {
                path: path.clone(),
                ..check_case(&kb, &case, opts)
            },
            Err(e) => CaseOutcome {
                case_id: file_stem(&path),
                path: path.clone(),
                passed: false,
                missing: vec![],
                unexpected: vec![],
                error: Some(e.to_string()),
                elapsed_ms: 0.0,
            },
        };
        result.cases.push(outcome);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::AnomalyKind;

    const WORKED: &str = "#case worked.\n#agents a, b.\n#times 1..2.\n\
        holds(stop,a,1). holds(stop_sign,a,1).\n\
        holds(combine(bump,a),b,2). holds(combine(shock_pos,back),a,2).\n";

    #[test]
    fn worked_example_report() {
        let case = parse_case(WORKED).unwrap();
        let a = analyze(&builtin_kb(), &case, Options::default()).unwrap();
        let r = &a.report;
        assert_eq!(r.models_found, 1);
        assert!(r.exhausted);
        assert!(r.primary_anomaly);
        assert!(!r.derived_anomaly);
        assert_eq!(r.findings.len(), 1);
        let f = &r.findings[0];
        assert_eq!(f.kind, AnomalyKind::PrimaryForm1);
        assert_eq!(
            (f.property.to_string(), f.agent.to_string(), f.time),
            ("stop".into(), "b".into(), 1)
        );
        assert_eq!(f.violated_rule, "r_panom1");
        assert_eq!(
            r.cause,
            "b did not stop at time 1 although obliged and able"
        );
        assert_eq!(r.facts.len(), 4);
    }

    #[test]
    fn canonical_json_is_stable() {
        let case = parse_case(WORKED).unwrap();
        let kb = builtin_kb();
        let a = analyze(&kb, &case, Options::default()).unwrap().report;
        let b = analyze(&kb, &case, Options::default()).unwrap().report;
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert!(!a.canonical_json().contains("timings_ms"));
        assert!(a.to_json().contains("timings_ms"));
    }

    #[test]
    fn contradictory_case_has_no_model() {
        let case = parse_case("#agents a.\nholds(stop,a,1). -holds(stop,a,1).").unwrap();
        let e = analyze(&builtin_kb(), &case, Options::default()).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_NO_MODEL);
    }

    #[test]
    fn mode_parses() {
        assert_eq!("credulous".parse::<Mode>().unwrap(), Mode::Credulous);
        assert!("bold".parse::<Mode>().is_err());
    }
}
