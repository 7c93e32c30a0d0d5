//! The road-domain knowledge base and anomaly extraction.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::dsl::{parse_kb, KnowledgeBase, Rule};
use crate::ground::GroundProgram;
use crate::model::{Literal, Predicate, Term};
use crate::solver::Interpretation;
use crate::translate::Variant;

/// Source text of the built-in knowledge base.
pub const ROAD_KB: &str = include_str!("../assets/norms_road.nkb");

/// Name under which the CLI and pipeline accept the built-in base.
pub const BUILTIN_NAME: &str = "norms_road";

/// Label prefix of the generated "only if" ability rules.
pub const ABLE_ONLY_IF_PREFIX: &str = "r_able_onlyif_";

/// Constant heading a disruptive-factor property `combine(disruptive_factor,X)`.
pub const DISRUPTIVE_FACTOR: &str = "disruptive_factor";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelPredicate {
    pub name: &'static str,
    pub description: &'static str,
}

/// The properties the road norms are written in terms of.
pub const KERNEL: [KernelPredicate; 5] = [
    KernelPredicate {
        name: "stop",
        description: "the vehicle is stationary",
    },
    KernelPredicate {
        name: "run_slowly_enough",
        description: "the vehicle's speed lets it stop before an obstacle",
    },
    KernelPredicate {
        name: "control",
        description: "the driver keeps control of the vehicle",
    },
    KernelPredicate {
        name: "follows",
        description: "combined with V: the vehicle drives behind V in the same lane",
    },
    KernelPredicate {
        name: "disruptive_factor",
        description: "combined with X: an external factor X disturbs the vehicle",
    },
];

/// The built-in road base, with its ability rules closed over the pcb facts.
pub fn builtin_kb() -> KnowledgeBase {
    let mut kb = parse_kb(ROAD_KB).expect("built-in knowledge base parses");
    close_ability(&mut kb);
    kb
}

/// Regenerates the "only if" half of the ability equivalence.
///
/// For each effect `E` with potential causes `Act1..Actn` (facts
/// `action(Acti)` and `pcb(Acti,E)`), emits
/// `r_able_onlyif_E: -available(Act1,E,A,T) & .. -> -able(E,A,T).`
/// Earlier generated rules are replaced, so the call is idempotent.
pub fn close_ability(kb: &mut KnowledgeBase) {
    kb.rules.retain(|r| !r.id.starts_with(ABLE_ONLY_IF_PREFIX));
    let actions: Vec<&Term> = kb
        .facts
        .iter()
        .filter(|f| !f.negated && f.pred() == Predicate::Action)
        .map(|f| &f.args()[0])
        .collect();
    let mut causes: BTreeMap<String, (Term, Vec<Term>)> = BTreeMap::new();
    for f in &kb.facts {
        if f.negated || f.pred() != Predicate::Pcb {
            continue;
        }
        let (act, eff) = (&f.args()[0], &f.args()[1]);
        if !actions.contains(&act) {
            continue;
        }
        let entry = causes
            .entry(eff.to_string())
            .or_insert_with(|| (eff.clone(), vec![]));
        if !entry.1.contains(act) {
            entry.1.push(act.clone());
        }
    }
    let (a, t) = (Term::var("A"), Term::var("T"));
    for (text, (eff, acts)) in causes {
        let body = acts
            .into_iter()
            .map(|act| {
                Literal::build(
                    Predicate::Available,
                    vec![act, eff.clone(), a.clone(), t.clone()],
                )
                .complement()
            })
            .collect();
        let head = Literal::build(Predicate::Able, vec![eff, a.clone(), t.clone()]).complement();
        kb.rules.push(Rule::implication(
            format!("{ABLE_ONLY_IF_PREFIX}{}", label_safe(&text)),
            body,
            head,
        ));
    }
}

fn label_safe(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnomalyKind {
    PrimaryForm1,
    PrimaryForm2,
    Derived,
}

impl AnomalyKind {
    pub fn is_primary(self) -> bool {
        self != AnomalyKind::Derived
    }
}

impl fmt::Display for AnomalyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnomalyKind::PrimaryForm1 => "primary_form1",
            AnomalyKind::PrimaryForm2 => "primary_form2",
            AnomalyKind::Derived => "derived",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AnomalyFinding {
    pub kind: AnomalyKind,
    #[serde(serialize_with = "as_text")]
    pub property: Term,
    #[serde(serialize_with = "as_text")]
    pub agent: Term,
    pub time: u32,
    pub violated_rule: String,
}

fn as_text<S: Serializer>(t: &Term, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(t)
}

impl AnomalyFinding {
    /// One-sentence explanation, e.g. `b did not stop at time 1 although
    /// obliged and able`.
    pub fn cause(&self) -> String {
        let (a, t) = (&self.agent, self.time);
        match self.kind {
            AnomalyKind::PrimaryForm1 => format!(
                "{a} did not {} at time {t} although obliged and able",
                words(&self.property)
            ),
            AnomalyKind::PrimaryForm2 => {
                let factor = match &self.property {
                    Term::Combine(_, x) => words(x),
                    p => words(p),
                };
                format!("{a} was disturbed by the disruptive factor {factor} at time {t}")
            }
            AnomalyKind::Derived => format!(
                "{a} did not {} at time {t} although obliged, being unable to",
                words(&self.property)
            ),
        }
    }
}

impl fmt::Display for AnomalyFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} agent={} time={} rule={}",
            self.kind, self.property, self.agent, self.time, self.violated_rule
        )
    }
}

fn words(t: &Term) -> String {
    match t {
        Term::Combine(p, x) => format!("{} {}", words(p), words(x)),
        Term::Neg(p) => format!("not {}", words(p)),
        t => t.to_string().replace('_', " "),
    }
}

fn is_disruptive(l: &Literal) -> bool {
    !l.negated
        && l.pred() == Predicate::Holds
        && matches!(&l.args()[0], Term::Combine(p, _) if p.as_const() == Some(DISRUPTIVE_FACTOR))
}

/// Anomaly findings witnessed by `m`.
///
/// Each forward rule instance of `ground` that concludes `p_anomaly` or
/// `d_anomaly` and whose body `m` satisfies is one witness. A disruptive
/// factor in the body makes it a second-form primary anomaly; otherwise the
/// body's `must(P,A,T)` literal names the unfulfilled duty.
pub fn extract_findings(ground: &GroundProgram, m: &Interpretation) -> Vec<AnomalyFinding> {
    let holds: HashSet<&Literal> = m.iter().collect();
    let mut out = Vec::new();
    for r in ground.rules() {
        if r.origin.variant != Variant::Forward {
            continue;
        }
        let head = ground.atom(r.head);
        let derived = match (head.negated, head.pred()) {
            (false, Predicate::PAnomaly) => false,
            (false, Predicate::DAnomaly) => true,
            _ => continue,
        };
        if !r.pos.iter().all(|&i| holds.contains(ground.atom(i)))
            || r.naf.iter().any(|&i| holds.contains(ground.atom(i)))
        {
            continue;
        }
        let body: Vec<&Literal> = r.pos.iter().map(|&i| ground.atom(i)).collect();
        let (kind, witness) = if let Some(w) = body.iter().find(|l| is_disruptive(l)) {
            (AnomalyKind::PrimaryForm2, w)
        } else if let Some(w) = body
            .iter()
            .find(|l| !l.negated && l.pred() == Predicate::Must)
        {
            let kind = if derived {
                AnomalyKind::Derived
            } else {
                AnomalyKind::PrimaryForm1
            };
            (kind, w)
        } else {
            continue;
        };
        let args = witness.args();
        let Some(time) = args[2].as_time() else {
            continue;
        };
        out.push(AnomalyFinding {
            kind,
            property: args[0].clone(),
            agent: args[1].clone(),
            time,
            violated_rule: r.origin.rule.clone(),
        });
    }
    out.sort();
    out.dedup();
    out
}
