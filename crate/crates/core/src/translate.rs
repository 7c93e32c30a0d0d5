//! Default rules to logic-program rules.
//!
//! * `A1 & .. & An -> B` becomes `B :- A1, .., An.` plus, for every `Ai`,
//!   the contrapositive `-Ai :- -B, A1, .., Ai-1, Ai+1, .., An.`
//! * `A : B` becomes `B :- A, not -B.`
//! * `A : B [C1 & .. & Cm]` becomes `B :- A, not -B, not -C1, .., not -Cm.`
//!
//! Defaults get no contrapositives.

use std::fmt;

use crate::dsl::{KnowledgeBase, Rule, RuleKind};
use crate::model::Literal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Fact,
    Forward,
    /// Contrapositive on the body literal at this (1-based) position.
    Contrapositive(usize),
    Default,
}

/// Which source rule an [`LpRule`] came from, and how.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Origin {
    pub rule: String,
    pub variant: Variant,
}

impl Origin {
    pub fn new(rule: impl Into<String>, variant: Variant) -> Origin {
        Origin {
            rule: rule.into(),
            variant,
        }
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            Variant::Fact => write!(f, "{}/fact", self.rule),
            Variant::Forward => write!(f, "{}/forward", self.rule),
            Variant::Contrapositive(i) => write!(f, "{}/contra{i}", self.rule),
            Variant::Default => write!(f, "{}/default", self.rule),
        }
    }
}

impl std::str::FromStr for Origin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (rule, tag) = s
            .rsplit_once('/')
            .ok_or_else(|| format!("bad origin `{s}`"))?;
        let variant = match tag {
            "fact" => Variant::Fact,
            "forward" => Variant::Forward,
            "default" => Variant::Default,
            t => t
                .strip_prefix("contra")
                .and_then(|n| n.parse().ok())
                .map(Variant::Contrapositive)
                .ok_or_else(|| format!("bad origin tag `{t}`"))?,
        };
        Ok(Origin::new(rule, variant))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LpRule {
    pub head: Literal,
    pub pos_body: Vec<Literal>,
    /// Literals under negation as failure.
    pub naf_body: Vec<Literal>,
    pub origin: Origin,
}

impl LpRule {
    pub fn fact(head: Literal, origin: Origin) -> LpRule {
        LpRule {
            head,
            pos_body: vec![],
            naf_body: vec![],
            origin,
        }
    }
}

pub(crate) fn write_rule_text<H: fmt::Display, B: fmt::Display>(
    f: &mut impl fmt::Write,
    head: H,
    pos: impl IntoIterator<Item = B>,
    naf: impl IntoIterator<Item = B>,
) -> fmt::Result {
    write!(f, "{head}")?;
    let body: Vec<String> = pos
        .into_iter()
        .map(|l| l.to_string())
        .chain(naf.into_iter().map(|l| format!("not {l}")))
        .collect();
    if !body.is_empty() {
        write!(f, " :- {}", body.join(", "))?;
    }
    f.write_str(".")
}

impl fmt::Display for LpRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rule_text(f, &self.head, &self.pos_body, &self.naf_body)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogicProgram {
    pub rules: Vec<LpRule>,
}

impl LogicProgram {
    /// One rule per line, each followed by its origin as a comment.
    pub fn to_text(&self) -> String {
        self.rules
            .iter()
            .map(|r| format!("{r}  % {}\n", r.origin))
            .collect()
    }

    pub fn extend_facts(&mut self, facts: &[Literal], source: &str) {
        self.rules.extend(
            facts
                .iter()
                .map(|f| LpRule::fact(f.clone(), Origin::new(source, Variant::Fact))),
        );
    }
}

pub fn translate_implication(id: &str, body: &[Literal], head: &Literal) -> Vec<LpRule> {
    let mut out = vec![LpRule {
        head: head.clone(),
        pos_body: body.to_vec(),
        naf_body: vec![],
        origin: Origin::new(
            id,
            if body.is_empty() {
                Variant::Fact
            } else {
                Variant::Forward
            },
        ),
    }];
    for (i, ai) in body.iter().enumerate() {
        let mut pos_body = vec![head.complement()];
        pos_body.extend(
            body.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, l)| l.clone()),
        );
        out.push(LpRule {
            head: ai.complement(),
            pos_body,
            naf_body: vec![],
            origin: Origin::new(id, Variant::Contrapositive(i + 1)),
        });
    }
    out
}

pub fn translate_normal_default(id: &str, pre: &[Literal], conc: &Literal) -> LpRule {
    translate_semi_normal_default(id, pre, conc, &[])
}

pub fn translate_semi_normal_default(
    id: &str,
    pre: &[Literal],
    conc: &Literal,
    constraint: &[Literal],
) -> LpRule {
    let mut naf_body = vec![conc.complement()];
    naf_body.extend(constraint.iter().map(Literal::complement));
    LpRule {
        head: conc.clone(),
        pos_body: pre.to_vec(),
        naf_body,
        origin: Origin::new(id, Variant::Default),
    }
}

pub fn translate_rule(r: &Rule) -> Vec<LpRule> {
    match &r.kind {
        RuleKind::Implication { body, head } => translate_implication(&r.id, body, head),
        RuleKind::NormalDefault { pre, conc } => vec![translate_normal_default(&r.id, pre, conc)],
        RuleKind::SemiNormalDefault {
            pre,
            conc,
            constraint,
        } => vec![translate_semi_normal_default(&r.id, pre, conc, constraint)],
    }
}

/// Static facts first (origin `kb/fact`), then every rule in source order.
pub fn translate_kb(kb: &KnowledgeBase) -> LogicProgram {
    let mut prog = LogicProgram::default();
    prog.extend_facts(&kb.facts, "kb");
    for r in &kb.rules {
        prog.rules.extend(translate_rule(r));
    }
    prog
}
