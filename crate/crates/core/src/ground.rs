//! Instantiation of a [`LogicProgram`] over the finite domains of a case.
//!
//! [`ground`] is the plain cross product: every variable ranges over the
//! domain of its sort. [`ground_relevant`] produces the subset of those
//! instances whose positive body can possibly be derived, which is all a
//! stable model can ever use; it is what the pipeline runs.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::dsl::{CaseFile, KnowledgeBase, ParseError, ParseErrorKind, Parser, Tok};
use crate::model::{Literal, Predicate, Sort, Substitution, Symbol, Term};
use crate::translate::{write_rule_text, LogicProgram, LpRule, Origin, Variant};

pub type AtomId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("constant `{constant}` used both as {first} and as {second}")]
    SortClash {
        constant: String,
        first: &'static str,
        second: &'static str,
    },
    #[error("rule {origin}: variable `{var}` used both as {first} and as {second}")]
    RuleSort {
        origin: String,
        var: String,
        first: Sort,
        second: Sort,
    },
}

/// Finite grounding domains, one per sort.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DomainSignature {
    pub agents: BTreeSet<Term>,
    pub max_time: u32,
    pub properties: BTreeSet<Term>,
    pub actions: BTreeSet<Term>,
    pub effects: BTreeSet<Term>,
    /// Agents plus objects used as the extra argument of composed properties.
    pub entities: BTreeSet<Term>,
    pub words: BTreeSet<Term>,
}

impl DomainSignature {
    pub fn domain(&self, sort: Sort) -> Vec<Term> {
        match sort {
            Sort::Time => (1..=self.max_time).map(Term::TimePoint).collect(),
            _ => self.set(sort).iter().cloned().collect(),
        }
    }

    fn set(&self, sort: Sort) -> &BTreeSet<Term> {
        match sort {
            Sort::Agent => &self.agents,
            Sort::Property => &self.properties,
            Sort::Effect => &self.effects,
            Sort::Entity => &self.entities,
            Sort::Action => &self.actions,
            Sort::Word => &self.words,
            Sort::Time => unreachable!("time domain is a range"),
        }
    }

    pub fn contains(&self, sort: Sort, t: &Term) -> bool {
        match sort {
            Sort::Time => matches!(t, Term::TimePoint(n) if (1..=self.max_time).contains(n)),
            _ => self.set(sort).contains(t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Role {
    Agent,
    Property,
    Action,
    Time,
}

impl Role {
    fn name(self) -> &'static str {
        match self {
            Role::Agent => "an agent",
            Role::Property => "a property",
            Role::Action => "an action",
            Role::Time => "a time",
        }
    }
}

#[derive(Default)]
struct SignatureBuilder {
    sig: DomainSignature,
    roles: BTreeMap<String, BTreeSet<Role>>,
    /// `combine(c, V)` with `V` ranging over agents (`true`) or entities.
    templates: BTreeSet<(String, bool)>,
}

impl SignatureBuilder {
    fn role(&mut self, c: &str, role: Role) {
        self.roles.entry(c.to_string()).or_default().insert(role);
    }

    fn property(&mut self, t: &Term, var_sorts: &BTreeMap<Symbol, Sort>) {
        match t {
            Term::Const(c) => {
                self.role(c, Role::Property);
                self.sig.properties.insert(t.clone());
            }
            Term::Combine(p, a) => {
                if let Term::Const(c) = &**p {
                    self.role(c, Role::Property);
                    match &**a {
                        Term::Const(_) => {
                            self.sig.entities.insert((**a).clone());
                        }
                        Term::Var(v) => {
                            let agent_only = var_sorts.get(v) == Some(&Sort::Agent);
                            self.templates.insert((c.clone(), agent_only));
                        }
                        _ => {}
                    }
                }
                if t.is_ground() {
                    self.sig.properties.insert(t.clone());
                }
            }
            Term::Neg(p) => {
                self.property(p, var_sorts);
                if t.is_ground() {
                    self.sig.properties.insert((**p).clone());
                }
            }
            _ => {}
        }
    }

    fn literal(&mut self, l: &Literal, var_sorts: &BTreeMap<Symbol, Sort>) {
        for (arg, sort) in l.args().iter().zip(l.pred().arg_sorts()) {
            match (sort, arg) {
                (Sort::Agent, Term::Const(c)) => {
                    self.role(c, Role::Agent);
                    self.sig.agents.insert(arg.clone());
                }
                (Sort::Action, Term::Const(c)) => {
                    self.role(c, Role::Action);
                    self.sig.actions.insert(arg.clone());
                }
                (Sort::Word, Term::Const(_)) => {
                    self.sig.words.insert(arg.clone());
                }
                (Sort::Effect, _) => {
                    if arg.is_ground() {
                        self.sig.effects.insert(arg.clone());
                    }
                    self.property(arg, var_sorts);
                }
                (Sort::Property, _) => self.property(arg, var_sorts),
                _ => {}
            }
        }
    }

    fn finish(mut self) -> Result<DomainSignature, GroundError> {
        for a in self.sig.agents.clone() {
            if let Term::Const(c) = &a {
                if c.chars().all(|ch| ch.is_ascii_digit()) {
                    self.role(c, Role::Time);
                }
            }
        }
        for (c, roles) in &self.roles {
            if roles.contains(&Role::Agent) && roles.len() > 1 {
                let other = roles.iter().find(|r| **r != Role::Agent).unwrap();
                return Err(GroundError::SortClash {
                    constant: c.clone(),
                    first: Role::Agent.name(),
                    second: other.name(),
                });
            }
        }
        let sig = &mut self.sig;
        sig.entities.extend(sig.agents.iter().cloned());
        for (c, agent_only) in &self.templates {
            let args = if *agent_only {
                &sig.agents
            } else {
                &sig.entities
            };
            let composed: Vec<Term> = args
                .iter()
                .map(|a| Term::combine(Term::constant(c.clone()), a.clone()))
                .collect();
            sig.properties.extend(composed);
        }
        sig.properties.extend(sig.effects.iter().cloned());
        let negated: Vec<Term> = sig.properties.iter().cloned().map(Term::neg).collect();
        sig.properties.extend(negated);
        Ok(self.sig)
    }
}

pub(crate) fn var_sorts<'a>(
    lits: impl IntoIterator<Item = &'a Literal>,
) -> Result<BTreeMap<Symbol, Sort>, (Symbol, Sort, Sort)> {
    let mut sorts: BTreeMap<Symbol, Sort> = BTreeMap::new();
    let mut clash = None;
    for l in lits {
        l.visit_vars(&mut |v, s| match sorts.get(v).copied() {
            None => {
                sorts.insert(v.clone(), s);
            }
            Some(prev) => match prev.meet(s) {
                Some(m) => {
                    sorts.insert(v.clone(), m);
                }
                None => {
                    clash.get_or_insert((v.clone(), prev, s));
                }
            },
        });
    }
    match clash {
        Some(c) => Err(c),
        None => Ok(sorts),
    }
}

fn lp_var_sorts(r: &LpRule) -> Result<BTreeMap<Symbol, Sort>, GroundError> {
    var_sorts(
        std::iter::once(&r.head)
            .chain(&r.pos_body)
            .chain(&r.naf_body),
    )
    .map_err(|(var, first, second)| GroundError::RuleSort {
        origin: r.origin.to_string(),
        var,
        first,
        second,
    })
}

/// Partitions the constants of a knowledge base and a case by sort.
///
/// Composed properties written with a variable argument, such as
/// `combine(follows,V)`, are instantiated with the case's agents only (or
/// with agents and objects when the variable is not agent-sorted). The
/// property domain is closed under `neg`.
pub fn collect_signature(
    kb: &KnowledgeBase,
    case: &CaseFile,
) -> Result<DomainSignature, GroundError> {
    let mut b = SignatureBuilder::default();
    b.sig.max_time = case.max_time.max(1);
    for a in &case.agents {
        b.role(a, Role::Agent);
        b.sig.agents.insert(Term::constant(a.clone()));
    }
    let none = BTreeMap::new();
    for f in kb.facts.iter().chain(&case.facts) {
        b.literal(f, &none);
    }
    for r in &kb.rules {
        let mut lits: Vec<&Literal> = vec![r.conclusion()];
        match &r.kind {
            crate::dsl::RuleKind::Implication { body, .. } => lits.extend(body),
            crate::dsl::RuleKind::NormalDefault { pre, .. } => lits.extend(pre),
            crate::dsl::RuleKind::SemiNormalDefault {
                pre, constraint, ..
            } => {
                lits.extend(pre);
                lits.extend(constraint);
            }
        }
        let sorts = var_sorts(lits.iter().copied()).map_err(|(var, first, second)| {
            GroundError::RuleSort {
                origin: r.id.clone(),
                var,
                first,
                second,
            }
        })?;
        for l in lits {
            b.literal(l, &sorts);
        }
    }
    b.finish()
}

/// A rule over dense atom ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundRule {
    pub head: AtomId,
    pub pos: Vec<AtomId>,
    pub naf: Vec<AtomId>,
    pub origin: Origin,
}

/// Variable-free program with an atom table in canonical (textual) order.
///
/// Every classical literal is its own atom; `p` and `-p` get distinct ids
/// linked through [`GroundProgram::complement_of`].
#[derive(Debug, Clone, Default)]
pub struct GroundProgram {
    atoms: Vec<Literal>,
    index: HashMap<Literal, AtomId>,
    complement: Vec<Option<AtomId>>,
    rules: Vec<GroundRule>,
}

impl GroundProgram {
    /// Builds a program from ground rules, removing duplicates. Rules and atoms
    /// are ordered by their text.
    ///
    /// # Panics
    /// If a rule is not ground.
    pub fn from_rules(rules: impl IntoIterator<Item = LpRule>) -> GroundProgram {
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for r in rules {
            assert!(
                r.head.is_ground()
                    && r.pos_body.iter().all(Literal::is_ground)
                    && r.naf_body.iter().all(Literal::is_ground),
                "rule `{r}` is not ground"
            );
            if seen.insert((r.head.clone(), r.pos_body.clone(), r.naf_body.clone())) {
                kept.push(r);
            }
        }
        let mut texts: BTreeMap<Literal, String> = BTreeMap::new();
        for r in &kept {
            for l in std::iter::once(&r.head)
                .chain(&r.pos_body)
                .chain(&r.naf_body)
            {
                if !texts.contains_key(l) {
                    texts.insert(l.clone(), l.to_string());
                }
            }
        }
        let mut atoms: Vec<(String, Literal)> = texts.into_iter().map(|(l, t)| (t, l)).collect();
        atoms.sort();
        let atoms: Vec<Literal> = atoms.into_iter().map(|(_, l)| l).collect();
        let index: HashMap<Literal, AtomId> = atoms
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let complement = atoms
            .iter()
            .map(|l| index.get(&l.complement()).copied())
            .collect();
        let mut prog = GroundProgram {
            atoms,
            index,
            complement,
            rules: Vec::with_capacity(kept.len()),
        };
        let mut keyed: Vec<(String, GroundRule)> = kept
            .into_iter()
            .map(|r| {
                let text = r.to_string();
                let g = GroundRule {
                    head: prog.index[&r.head],
                    pos: r.pos_body.iter().map(|l| prog.index[l]).collect(),
                    naf: r.naf_body.iter().map(|l| prog.index[l]).collect(),
                    origin: r.origin,
                };
                (text, g)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.origin.cmp(&b.1.origin)));
        prog.rules = keyed.into_iter().map(|(_, g)| g).collect();
        prog
    }

    pub fn atoms(&self) -> &[Literal] {
        &self.atoms
    }

    pub fn atom(&self, id: AtomId) -> &Literal {
        &self.atoms[id]
    }

    pub fn id_of(&self, l: &Literal) -> Option<AtomId> {
        self.index.get(l).copied()
    }

    pub fn complement_of(&self, id: AtomId) -> Option<AtomId> {
        self.complement[id]
    }

    pub fn rules(&self) -> &[GroundRule] {
        &self.rules
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn to_lp_rule(&self, r: &GroundRule) -> LpRule {
        LpRule {
            head: self.atoms[r.head].clone(),
            pos_body: r.pos.iter().map(|&a| self.atoms[a].clone()).collect(),
            naf_body: r.naf.iter().map(|&a| self.atoms[a].clone()).collect(),
            origin: r.origin.clone(),
        }
    }

    /// Same program over the same atom table with a different rule set.
    pub fn with_rules(&self, rules: Vec<GroundRule>) -> GroundProgram {
        GroundProgram {
            atoms: self.atoms.clone(),
            index: self.index.clone(),
            complement: self.complement.clone(),
            rules,
        }
    }

    pub fn rule_text(&self, r: &GroundRule) -> String {
        let mut s = String::new();
        write_rule_text(
            &mut s,
            &self.atoms[r.head],
            r.pos.iter().map(|&a| &self.atoms[a]),
            r.naf.iter().map(|&a| &self.atoms[a]),
        )
        .expect("writing to a String");
        s
    }

    /// One rule per line, `head :- pos, not naf.`; with `annotated`, each
    /// line ends with `% origin`.
    pub fn to_text(&self, annotated: bool) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&self.rule_text(r));
            if annotated {
                out.push_str(&format!("  % {}", r.origin));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(false))
    }
}

/// Reads the line format written by [`GroundProgram::to_text`]. A trailing
/// `% origin` comment restores the rule's origin.
pub fn parse_ground(text: &str) -> Result<GroundProgram, ParseError> {
    let mut p = Parser::new(text, true)?;
    let mut rules = Vec::new();
    loop {
        while matches!(p.peek(), Tok::Comment(_)) {
            p.bump();
        }
        if p.at_eof() {
            break;
        }
        let at = p.here();
        let head = p.literal()?;
        let (mut pos_body, mut naf_body) = (vec![], vec![]);
        if p.eat(&Tok::ColonDash) {
            loop {
                let is_naf = matches!(p.peek(), Tok::Ident(s) if s == "not")
                    && matches!(p.peek_at(1), Tok::Ident(_) | Tok::Minus);
                if is_naf {
                    p.bump();
                    naf_body.push(p.literal()?);
                } else {
                    pos_body.push(p.literal()?);
                }
                if !p.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        p.expect(&Tok::Dot)?;
        let origin = match p.peek().clone() {
            Tok::Comment(c) => {
                p.bump();
                c.parse::<Origin>().ok()
            }
            _ => None,
        }
        .unwrap_or_else(|| {
            let variant = if pos_body.is_empty() && naf_body.is_empty() {
                Variant::Fact
            } else {
                Variant::Forward
            };
            Origin::new("ground", variant)
        });
        let rule = LpRule {
            head,
            pos_body,
            naf_body,
            origin,
        };
        for l in std::iter::once(&rule.head)
            .chain(&rule.pos_body)
            .chain(&rule.naf_body)
        {
            if !l.is_ground() {
                return Err(p.error_at(at, ParseErrorKind::NonGround(l.to_string())));
            }
        }
        rules.push(rule);
    }
    Ok(GroundProgram::from_rules(rules))
}

/// Applies a ground substitution to a rule. `None` when a time leaves
/// `1..=max_time`, or when a default's conclusion is among its own
/// justifications' complements (such a default can never apply).
fn instantiate(r: &LpRule, s: &Substitution, max_time: u32) -> Option<LpRule> {
    let in_range = |l: &Literal| crate::dsl::time_points(l).iter().all(|t| *t <= max_time);
    let apply = |l: &Literal| s.apply(l).ok().filter(in_range);
    let head = apply(&r.head)?;
    let pos_body = dedup(r.pos_body.iter().map(apply).collect::<Option<Vec<_>>>()?);
    let naf_body = dedup(r.naf_body.iter().map(apply).collect::<Option<Vec<_>>>()?);
    if r.origin.variant == Variant::Default && naf_body.contains(&head) {
        return None;
    }
    Some(LpRule {
        head,
        pos_body,
        naf_body,
        origin: r.origin.clone(),
    })
}

fn dedup(v: Vec<Literal>) -> Vec<Literal> {
    let mut out: Vec<Literal> = Vec::with_capacity(v.len());
    for l in v {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

fn for_each_assignment(
    vars: &[(Symbol, Vec<Term>)],
    s: &mut Substitution,
    f: &mut dyn FnMut(&Substitution),
) {
    match vars.split_first() {
        None => f(s),
        Some(((v, dom), rest)) => {
            for value in dom {
                s.insert_ground(v.clone(), value.clone());
                for_each_assignment(rest, s, f);
            }
            s.remove(v);
        }
    }
}

/// Full cross-product instantiation: every sort-respecting substitution
/// whose times stay within `1..=max_time`.
pub fn ground(program: &LogicProgram, sig: &DomainSignature) -> Result<GroundProgram, GroundError> {
    let mut out = Vec::new();
    for r in &program.rules {
        let vars: Vec<(Symbol, Vec<Term>)> = lp_var_sorts(r)?
            .into_iter()
            .map(|(v, s)| (v, sig.domain(s)))
            .collect();
        for_each_assignment(&vars, &mut Substitution::new(), &mut |s| {
            if let Some(g) = instantiate(r, s, sig.max_time) {
                out.push(g);
            }
        });
    }
    Ok(GroundProgram::from_rules(out))
}

struct Possible {
    set: HashSet<Literal>,
    by_pred: HashMap<(Predicate, bool), Vec<Literal>>,
}

impl Possible {
    fn insert(&mut self, l: Literal) -> bool {
        if self.set.insert(l.clone()) {
            self.by_pred
                .entry((l.pred(), l.negated))
                .or_default()
                .push(l);
            true
        } else {
            false
        }
    }
}

struct Joiner<'a> {
    rule: &'a LpRule,
    sorts: &'a BTreeMap<Symbol, Sort>,
    sig: &'a DomainSignature,
    possible: &'a Possible,
}

impl Joiner<'_> {
    fn run(&self, i: usize, s: &mut Substitution, out: &mut Vec<LpRule>) {
        if i == self.rule.pos_body.len() {
            let free: Vec<(Symbol, Vec<Term>)> = self
                .sorts
                .iter()
                .filter(|(v, _)| s.get(v).is_none())
                .map(|(v, sort)| (v.clone(), self.sig.domain(*sort)))
                .collect();
            for_each_assignment(&free, s, &mut |s| {
                if let Some(g) = instantiate(self.rule, s, self.sig.max_time) {
                    out.push(g);
                }
            });
            return;
        }
        let Ok(pattern) = s.apply(&self.rule.pos_body[i]) else {
            return;
        };
        if pattern.is_ground() {
            if self.possible.set.contains(&pattern) {
                self.run(i + 1, s, out);
            }
            return;
        }
        let Some(cands) = self
            .possible
            .by_pred
            .get(&(pattern.pred(), pattern.negated))
        else {
            return;
        };
        for cand in cands {
            let Some(m) = crate::model::unify(&pattern, cand) else {
                continue;
            };
            let fits = m.iter().all(|(v, t)| {
                self.sorts
                    .get(v)
                    .is_some_and(|srt| self.sig.contains(*srt, t))
            });
            if !fits {
                continue;
            }
            let bound: Vec<Symbol> = m.iter().map(|(v, _)| v.clone()).collect();
            for (v, t) in m.iter() {
                s.insert_ground(v.clone(), t.clone());
            }
            self.run(i + 1, s, out);
            for v in &bound {
                s.remove(v);
            }
        }
    }
}

/// Instances of [`ground`] restricted to rules whose positive body lies in
/// the least fixpoint of "possibly derivable" literals (negation as failure
/// ignored). Rules outside that set can never fire in any stable model.
pub fn ground_relevant(
    program: &LogicProgram,
    sig: &DomainSignature,
) -> Result<GroundProgram, GroundError> {
    let sorts: Vec<BTreeMap<Symbol, Sort>> = program
        .rules
        .iter()
        .map(lp_var_sorts)
        .collect::<Result<_, _>>()?;
    let mut possible = Possible {
        set: HashSet::new(),
        by_pred: HashMap::new(),
    };
    let mut seen: HashSet<LpRule> = HashSet::new();
    let mut out = Vec::new();
    loop {
        let mut fresh = Vec::new();
        for (r, srt) in program.rules.iter().zip(&sorts) {
            let joiner = Joiner {
                rule: r,
                sorts: srt,
                sig,
                possible: &possible,
            };
            joiner.run(0, &mut Substitution::new(), &mut fresh);
        }
        let mut grew = false;
        for g in fresh {
            if seen.insert(g.clone()) {
                grew |= possible.insert(g.head.clone());
                out.push(g);
            }
        }
        if !grew {
            break;
        }
    }
    Ok(GroundProgram::from_rules(out))
}
