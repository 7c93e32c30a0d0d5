//! Norm-based reasoning about car-crash reports.
//!
//! A report is a handful of ground facts (`holds(stop,a,1)`, ...). Road norms
//! are written as implications and Reiter defaults in a small rule language,
//! translated to an answer-set program, grounded over the case's agents and
//! time intervals, and solved for stable models. Anomalies (a duty the agent
//! could have fulfilled but did not, or a disruptive factor) are read off the
//! models.
//!
//! ```
//! use normengine::{analyze, builtin_kb, parse_case, Options};
//!
//! let case = parse_case(
//!     "#agents a, b.\n#times 1..2.\n\
//!      holds(stop,a,1). holds(combine(bump,a),b,2). holds(combine(shock_pos,back),a,2).",
//! )
//! .unwrap();
//! let report = analyze(&builtin_kb(), &case, Options::default()).unwrap().report;
//! assert_eq!(report.cause, "b did not stop at time 1 although obliged and able");
//! ```

pub mod dsl;
pub mod ground;
pub mod ling;
pub mod model;
pub mod norms;
pub mod pipeline;
pub mod solver;
pub mod translate;

pub use dsl::{
    parse_case, parse_kb, parse_literal, parse_literals, CaseFile, KnowledgeBase, Rule, RuleKind,
};
pub use ground::{
    collect_signature, ground, ground_relevant, parse_ground, DomainSignature, GroundProgram,
};
pub use ling::{transform, Lexicon};
pub use model::{unify, Atom, Literal, Predicate, Sort, Substitution, Term};
pub use norms::{builtin_kb, extract_findings, AnomalyFinding, AnomalyKind};
pub use pipeline::{analyze, AnomalyReport, KbSource, Mode, Options};
pub use solver::{brute_force_solve, is_stable, solve_all, Interpretation, SolveResult};
pub use translate::{translate_kb, translate_rule, LogicProgram, LpRule};
