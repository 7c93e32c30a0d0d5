//! From parser output (linguistic facts) to semantic facts.
//!
//! The input is a list of `subject/2`, `object/2`, `qualif/2`, `qualif_n/2`
//! and `compl_v/3` literals over words. Three steps turn it into a case:
//!
//! 1. [`segment_times`]: each verb gets an interval; a verb introduced by a
//!    temporal conjunction (`quand`) comes one interval after its governor.
//! 2. [`assign_agents`]: the narrator's vehicle is `a`, every other vehicle
//!    mention gets a fresh constant `b`, `c`, ...
//! 3. [`transform`]: lexicon patterns are instantiated for each fact.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::dsl::{parse_literal, CaseFile, ParseError, Rule, RuleKind};
use crate::model::{Literal, Predicate, Substitution, Symbol, Term};

pub const FRENCH_LEXICON: &str = include_str!("../assets/lexicon_fr.tsv");

/// Constant standing for the narrator's vehicle.
pub const NARRATOR: &str = "a";

#[derive(Debug, Error)]
pub enum LingError {
    #[error("lexicon line {line}: {msg}")]
    Lexicon { line: usize, msg: String },
    #[error("no verb found in the linguistic facts")]
    NoVerbs,
    #[error("`{0}` is not a linguistic fact")]
    NotLinguistic(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LexContext {
    Noun,
    Verb,
    Qualif,
    Possessive,
    Clitic,
    Conj,
    /// Verb complement introduced by this preposition.
    ComplV(String),
}

impl fmt::Display for LexContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexContext::Noun => f.write_str("noun"),
            LexContext::Verb => f.write_str("verb"),
            LexContext::Qualif => f.write_str("qualif"),
            LexContext::Possessive => f.write_str("possessive"),
            LexContext::Clitic => f.write_str("clitic"),
            LexContext::Conj => f.write_str("conj"),
            LexContext::ComplV(p) => write!(f, "compl_v:{p}"),
        }
    }
}

impl std::str::FromStr for LexContext {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "noun" => LexContext::Noun,
            "verb" => LexContext::Verb,
            "qualif" => LexContext::Qualif,
            "possessive" => LexContext::Possessive,
            "clitic" => LexContext::Clitic,
            "conj" => LexContext::Conj,
            s => match s.strip_prefix("compl_v:") {
                Some(p) if !p.is_empty() => LexContext::ComplV(normalize(p)),
                _ => return Err(format!("unknown context `{s}`")),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexPattern {
    /// The noun denotes a vehicle, hence an agent.
    Agent,
    /// The word refers to the narrator's vehicle.
    Narrator,
    /// A temporal conjunction: the subordinate verb happens next.
    Next,
    /// Known word with no semantic contribution.
    Silent,
    /// Literal template over `SUBJ`, `OBJ` and `T`.
    Emit(Literal),
}

impl fmt::Display for LexPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexPattern::Agent => f.write_str("agent"),
            LexPattern::Narrator => f.write_str("narrator"),
            LexPattern::Next => f.write_str("next"),
            LexPattern::Silent => f.write_str("-"),
            LexPattern::Emit(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub lemma: String,
    pub context: LexContext,
    pub pattern: LexPattern,
    /// Emit the literal through a default rule instead of as a fact.
    pub defeasible: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<(String, LexContext), LexiconEntry>,
}

/// Lowercases and drops a reflexive `se_` / `s_` prefix.
pub fn normalize(word: &str) -> String {
    let w = word.to_lowercase();
    match w.strip_prefix("se_").or_else(|| w.strip_prefix("s_")) {
        Some(rest) if !rest.is_empty() => rest.to_string(),
        _ => w,
    }
}

impl Lexicon {
    pub fn builtin() -> Lexicon {
        Lexicon::parse(FRENCH_LEXICON).expect("built-in lexicon parses")
    }

    /// Tab-separated `lemma context pattern [defeasible]`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Lexicon, LingError> {
        let mut lex = Lexicon::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| LingError::Lexicon { line, msg };
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
            if !(3..=4).contains(&cols.len()) {
                return Err(err(format!("expected 3 or 4 columns, got {}", cols.len())));
            }
            let context: LexContext = cols[1].parse().map_err(err)?;
            let pattern = match cols[2] {
                "agent" => LexPattern::Agent,
                "narrator" => LexPattern::Narrator,
                "next" => LexPattern::Next,
                "-" => LexPattern::Silent,
                t => LexPattern::Emit(parse_literal(t).map_err(|e| err(e.to_string()))?),
            };
            let defeasible = match cols.get(3) {
                None | Some(&"") => false,
                Some(&"defeasible") => true,
                Some(other) => return Err(err(format!("unknown flag `{other}`"))),
            };
            if defeasible && !matches!(pattern, LexPattern::Emit(_)) {
                return Err(err("only literal patterns can be defeasible".into()));
            }
            let entry = LexiconEntry {
                lemma: normalize(cols[0]),
                context,
                pattern,
                defeasible,
            };
            let key = (entry.lemma.clone(), entry.context.clone());
            if lex.entries.insert(key, entry).is_some() {
                return Err(err(format!(
                    "duplicate entry for `{}` ({})",
                    cols[0], cols[1]
                )));
            }
        }
        Ok(lex)
    }

    pub fn lookup(&self, word: &str, context: &LexContext) -> Option<&LexiconEntry> {
        self.entries.get(&(normalize(word), context.clone()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    fn has(&self, word: &str, context: LexContext, pattern: &LexPattern) -> bool {
        self.lookup(word, &context)
            .is_some_and(|e| &e.pattern == pattern)
    }

    fn is_temporal(&self, prep: &str) -> bool {
        self.has(prep, LexContext::Conj, &LexPattern::Next)
    }
}

/// A linguistic fact with its words (verbs normalized, nouns as written).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LingFact {
    Subject {
        verb: String,
        noun: String,
    },
    Object {
        verb: String,
        noun: String,
    },
    Qualif {
        verb: String,
        word: String,
    },
    QualifN {
        noun: String,
        word: String,
    },
    ComplV {
        prep: String,
        verb: String,
        word: String,
    },
}

impl LingFact {
    pub fn from_literal(l: &Literal) -> Result<LingFact, LingError> {
        let bad = || LingError::NotLinguistic(l.to_string());
        if l.negated || !l.pred().is_linguistic() {
            return Err(bad());
        }
        let w: Vec<String> = l
            .args()
            .iter()
            .map(|t| t.as_const().map(str::to_string).ok_or_else(bad))
            .collect::<Result<_, _>>()?;
        Ok(match l.pred() {
            Predicate::Subject => LingFact::Subject {
                verb: normalize(&w[0]),
                noun: w[1].clone(),
            },
            Predicate::Object => LingFact::Object {
                verb: normalize(&w[0]),
                noun: w[1].clone(),
            },
            Predicate::Qualif => LingFact::Qualif {
                verb: normalize(&w[0]),
                word: w[1].clone(),
            },
            Predicate::QualifN => LingFact::QualifN {
                noun: w[0].clone(),
                word: w[1].clone(),
            },
            _ => LingFact::ComplV {
                prep: w[0].clone(),
                verb: normalize(&w[1]),
                word: w[2].clone(),
            },
        })
    }
}

fn facts_of(lits: &[Literal]) -> Result<Vec<LingFact>, LingError> {
    lits.iter().map(LingFact::from_literal).collect()
}

fn verbs(facts: &[LingFact], lex: &Lexicon) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut add = |v: String| {
        if !out.contains(&v) {
            out.push(v);
        }
    };
    for f in facts {
        match f {
            LingFact::Subject { verb, .. }
            | LingFact::Object { verb, .. }
            | LingFact::Qualif { verb, .. } => add(verb.clone()),
            LingFact::ComplV { prep, verb, word } => {
                add(verb.clone());
                if lex.is_temporal(prep) {
                    add(normalize(word));
                }
            }
            LingFact::QualifN { .. } => {}
        }
    }
    out
}

/// Interval of each verb, in order of first occurrence.
///
/// Verbs not governed by a temporal conjunction start at 1; a governed verb
/// sits one interval after its governor.
pub fn segment_times(lits: &[Literal], lex: &Lexicon) -> Result<Vec<(String, u32)>, LingError> {
    let facts = facts_of(lits)?;
    let vs = verbs(&facts, lex);
    if vs.is_empty() {
        return Err(LingError::NoVerbs);
    }
    let edges: Vec<(String, String)> = facts
        .iter()
        .filter_map(|f| match f {
            LingFact::ComplV { prep, verb, word } if lex.is_temporal(prep) => {
                Some((verb.clone(), normalize(word)))
            }
            _ => None,
        })
        .collect();
    let mut time: BTreeMap<&str, u32> = vs.iter().map(|v| (v.as_str(), 1)).collect();
    // At most one pass per verb, so cyclic input still terminates.
    for _ in 0..vs.len() {
        let mut changed = false;
        for (gov, sub) in &edges {
            let next = time[gov.as_str()] + 1;
            if time[sub.as_str()] < next {
                time.insert(sub, next);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(vs.iter().map(|v| (v.clone(), time[v.as_str()])).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Subject,
    Object,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentMention {
    pub verb: String,
    pub role: Role,
    pub noun: String,
    pub agent: Symbol,
}

fn fresh_agent(i: usize) -> Symbol {
    const LETTERS: &[u8] = b"bcdefghijklmnopqrstuvwxyz";
    match LETTERS.get(i) {
        Some(&c) => (c as char).to_string(),
        None => format!("v{}", i + 2),
    }
}

/// Agent constant of every subject and object mention, in order.
///
/// A clitic such as `m'` is the narrator. The first mention of a noun
/// carrying a possessive (`qualif_n(véhicule,mon)`) is the narrator too; any
/// other mention is a new vehicle.
pub fn assign_agents(lits: &[Literal], lex: &Lexicon) -> Result<Vec<AgentMention>, LingError> {
    let facts = facts_of(lits)?;
    let possessed: Vec<&str> = facts
        .iter()
        .filter_map(|f| match f {
            LingFact::QualifN { noun, word }
                if lex.has(word, LexContext::Possessive, &LexPattern::Narrator) =>
            {
                Some(noun.as_str())
            }
            _ => None,
        })
        .collect();
    let mut narrator_noun_seen = false;
    let mut fresh = 0;
    let mut out = Vec::new();
    for f in &facts {
        let (verb, noun, role) = match f {
            LingFact::Subject { verb, noun } => (verb, noun, Role::Subject),
            LingFact::Object { verb, noun } => (verb, noun, Role::Object),
            _ => continue,
        };
        let agent = if lex.has(noun, LexContext::Clitic, &LexPattern::Narrator) {
            NARRATOR.to_string()
        } else if !narrator_noun_seen && possessed.contains(&noun.as_str()) {
            narrator_noun_seen = true;
            NARRATOR.to_string()
        } else {
            fresh += 1;
            fresh_agent(fresh - 1)
        };
        out.push(AgentMention {
            verb: verb.clone(),
            role,
            noun: noun.clone(),
            agent,
        });
    }
    Ok(out)
}

/// Output of [`transform`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transformed {
    pub facts: Vec<Literal>,
    /// Default rules for defeasible lexicon entries.
    pub defaults: Vec<Rule>,
    pub agents: Vec<Symbol>,
    pub max_time: u32,
    pub times: Vec<(String, u32)>,
    pub warnings: Vec<String>,
}

impl Transformed {
    /// A case holding the semantic facts. When defaults were produced, the
    /// linguistic facts they depend on are included too.
    pub fn to_case(&self, case_id: &str, ling: &[Literal]) -> CaseFile {
        let mut case = CaseFile::new(case_id, self.agents.clone(), self.max_time);
        case.facts = self.facts.clone();
        if !self.defaults.is_empty() {
            case.facts.extend(ling.iter().cloned());
        }
        case.warnings = self.warnings.clone();
        case
    }
}

/// Semantic facts for a set of linguistic facts.
pub fn transform(lits: &[Literal], lex: &Lexicon) -> Result<Transformed, LingError> {
    let facts = facts_of(lits)?;
    let times = segment_times(lits, lex)?;
    let mentions = assign_agents(lits, lex)?;
    let time_of: BTreeMap<&str, u32> = times.iter().map(|(v, t)| (v.as_str(), *t)).collect();
    let agent_of = |verb: &str, role: Role| {
        mentions
            .iter()
            .find(|m| m.verb == verb && m.role == role)
            .map(|m| m.agent.clone())
    };

    let mut out = Transformed {
        times: times.clone(),
        ..Transformed::default()
    };
    let emit = |out: &mut Transformed, entry: &LexiconEntry, verb: &str, source: &Literal| {
        let LexPattern::Emit(template) = &entry.pattern else {
            return;
        };
        let mut s = Substitution::new();
        s.insert_ground("T".into(), Term::time(time_of[verb]));
        for (var, role) in [("SUBJ", Role::Subject), ("OBJ", Role::Object)] {
            if let Some(a) = agent_of(verb, role) {
                s.insert_ground(var.into(), Term::constant(a));
            }
        }
        let lit = match s.apply(template) {
            Ok(l) if l.is_ground() => l,
            _ => {
                out.warnings.push(format!(
                    "`{}` ({}) with verb `{verb}`: pattern {template} cannot be instantiated",
                    entry.lemma, entry.context
                ));
                return;
            }
        };
        if entry.defeasible {
            let id = format!("lex_{}", out.defaults.len() + 1);
            out.defaults.push(Rule {
                id,
                kind: RuleKind::NormalDefault {
                    pre: vec![source.clone()],
                    conc: lit,
                },
            });
        } else if !out.facts.contains(&lit) {
            out.facts.push(lit);
        }
    };

    for (f, source) in facts.iter().zip(lits) {
        let (word, ctx, verb) = match f {
            LingFact::Qualif { verb, word } => (word, LexContext::Qualif, verb),
            LingFact::ComplV { prep, verb, word } if !lex.is_temporal(prep) => {
                (word, LexContext::ComplV(normalize(prep)), verb)
            }
            _ => continue,
        };
        match lex.lookup(word, &ctx) {
            Some(e) => emit(&mut out, e, verb, source),
            None => out
                .warnings
                .push(format!("no lexicon entry for `{word}` ({ctx})")),
        }
    }
    for (verb, _) in &times {
        let source = facts
            .iter()
            .zip(lits)
            .find(|(f, _)| {
                matches!(f, LingFact::Subject { verb: v, .. } | LingFact::Object { verb: v, .. } if v == verb)
            })
            .map(|(_, l)| l)
            .unwrap_or(&lits[0]);
        match lex.lookup(verb, &LexContext::Verb) {
            Some(e) => emit(&mut out, e, verb, source),
            None => out
                .warnings
                .push(format!("no lexicon entry for `{verb}` (verb)")),
        }
    }
    for m in &mentions {
        let known = lex.has(&m.noun, LexContext::Noun, &LexPattern::Agent)
            || lex.has(&m.noun, LexContext::Clitic, &LexPattern::Narrator);
        if !known {
            out.warnings.push(format!(
                "`{}` is not a known vehicle noun; treated as agent {}",
                m.noun, m.agent
            ));
        }
    }

    let mut agents: Vec<Symbol> = Vec::new();
    if mentions.iter().any(|m| m.agent == NARRATOR) {
        agents.push(NARRATOR.into());
    }
    for m in &mentions {
        if !agents.contains(&m.agent) {
            agents.push(m.agent.clone());
        }
    }
    out.agents = agents;
    let emitted = out
        .facts
        .iter()
        .chain(out.defaults.iter().map(Rule::conclusion))
        .flat_map(|l| l.args().iter().filter_map(Term::as_time));
    out.max_time = times
        .iter()
        .map(|(_, t)| *t)
        .chain(emitted)
        .max()
        .unwrap_or(1);
    Ok(out)
}
