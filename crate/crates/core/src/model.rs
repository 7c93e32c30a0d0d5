//! Reified terms, atoms and literals.
//!
//! Properties are encoded as terms so that a handful of fixed predicates
//! (`holds`, `must`, `able`, ...) can quantify over them. A composed property
//! such as "following b" is `combine(follows, b)`, and the negation of a
//! property `p` is the property term `neg(p)`.
//!
//! Sorts are never declared; they follow from the argument position a term
//! occupies (see [`Predicate::arg_sorts`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub type Symbol = String;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("predicate `{pred}` takes {expected} argument(s), got {found}")]
    Arity {
        pred: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("argument {position} of `{pred}` must be {expected}, got `{term}`")]
    Sort {
        pred: &'static str,
        position: usize,
        expected: Sort,
        term: String,
    },
    #[error("time offset {0} outside -1..=1")]
    Offset(i32),
    #[error("time point must be at least 1, got {0}")]
    TimeZero(i64),
    #[error("instantiating `{var}` gives time {value}, below the first interval")]
    TimeOutOfRange { var: Symbol, value: i64 },
    #[error("variable `{var}` is bound to non-time term `{term}` in a time position")]
    NotATime { var: Symbol, term: String },
}

/// Argument sorts. `Effect` refines `Property` and `Agent` refines `Entity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Property,
    Effect,
    Agent,
    /// Extra argument of a composed property: an agent or an object.
    Entity,
    Time,
    Action,
    /// Lexical material of linguistic predicates.
    Word,
}

impl Sort {
    /// Greatest common refinement of two sorts, if they are compatible.
    pub fn meet(self, other: Sort) -> Option<Sort> {
        use Sort::*;
        match (self, other) {
            (a, b) if a == b => Some(a),
            (Property, Effect) | (Effect, Property) => Some(Effect),
            (Entity, Agent) | (Agent, Entity) => Some(Agent),
            _ => None,
        }
    }

    fn is_property_like(self) -> bool {
        matches!(self, Sort::Property | Sort::Effect)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sort::Property => "a property",
            Sort::Effect => "an effect",
            Sort::Agent => "an agent",
            Sort::Entity => "an agent or object",
            Sort::Time => "a time",
            Sort::Action => "an action",
            Sort::Word => "a word",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Symbol),
    Var(Symbol),
    Combine(Box<Term>, Box<Term>),
    /// `T+offset`. A zero offset is always normalised to a plain variable.
    TimeExpr {
        var: Symbol,
        offset: i32,
    },
    TimePoint(u32),
    Neg(Box<Term>),
}

impl Term {
    pub fn constant(name: impl Into<Symbol>) -> Term {
        Term::Const(name.into())
    }

    pub fn var(name: impl Into<Symbol>) -> Term {
        Term::Var(name.into())
    }

    pub fn combine(prop: Term, arg: Term) -> Term {
        Term::Combine(Box::new(prop), Box::new(arg))
    }

    pub fn time(value: u32) -> Term {
        Term::TimePoint(value)
    }

    /// `var + offset`; offset 0 collapses to the variable itself.
    pub fn time_expr(var: impl Into<Symbol>, offset: i32) -> Term {
        let var = var.into();
        if offset == 0 {
            Term::Var(var)
        } else {
            Term::TimeExpr { var, offset }
        }
    }

    /// Negated property, with `neg(neg(p))` normalised to `p`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(prop: Term) -> Term {
        match prop {
            Term::Neg(inner) => *inner,
            other => Term::Neg(Box::new(other)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Const(_) | Term::TimePoint(_) => true,
            Term::Var(_) | Term::TimeExpr { .. } => false,
            Term::Combine(p, a) => p.is_ground() && a.is_ground(),
            Term::Neg(p) => p.is_ground(),
        }
    }

    pub fn as_const(&self) -> Option<&str> {
        match self {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_time(&self) -> Option<u32> {
        match self {
            Term::TimePoint(t) => Some(*t),
            _ => None,
        }
    }

    fn occurs(&self, var: &str) -> bool {
        match self {
            Term::Var(v) | Term::TimeExpr { var: v, .. } => v == var,
            Term::Combine(p, a) => p.occurs(var) || a.occurs(var),
            Term::Neg(p) => p.occurs(var),
            Term::Const(_) | Term::TimePoint(_) => false,
        }
    }

    /// Visit every variable together with the sort of the position it occupies.
    pub fn visit_vars<F: FnMut(&Symbol, Sort)>(&self, sort: Sort, f: &mut F) {
        match self {
            Term::Var(v) => f(v, sort),
            Term::TimeExpr { var, .. } => f(var, Sort::Time),
            Term::Combine(p, a) => {
                p.visit_vars(Sort::Property, f);
                a.visit_vars(Sort::Entity, f);
            }
            Term::Neg(p) => p.visit_vars(Sort::Property, f),
            Term::Const(_) | Term::TimePoint(_) => {}
        }
    }

    /// Whether the term has a shape allowed in a position of the given sort.
    pub fn fits(&self, sort: Sort) -> bool {
        match sort {
            Sort::Time => matches!(
                self,
                Term::Var(_) | Term::TimeExpr { .. } | Term::TimePoint(_)
            ),
            Sort::Property | Sort::Effect => match self {
                Term::Const(_) | Term::Var(_) => true,
                Term::Combine(p, a) => {
                    matches!(**p, Term::Const(_) | Term::Var(_)) && a.fits(Sort::Entity)
                }
                Term::Neg(p) => !matches!(**p, Term::Neg(_)) && p.fits(Sort::Property),
                Term::TimeExpr { .. } | Term::TimePoint(_) => false,
            },
            Sort::Agent | Sort::Entity | Sort::Action | Sort::Word => {
                matches!(self, Term::Const(_) | Term::Var(_))
            }
        }
    }
}

pub(crate) fn is_plain_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_') && !matches!(s, "not" | "neg" | "combine")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) if is_plain_ident(c) => f.write_str(c),
            Term::Const(c) => {
                f.write_str("\"")?;
                for ch in c.chars() {
                    if ch == '"' || ch == '\\' {
                        f.write_str("\\")?;
                    }
                    write!(f, "{ch}")?;
                }
                f.write_str("\"")
            }
            Term::Var(v) => f.write_str(v),
            Term::Combine(p, a) => write!(f, "combine({p},{a})"),
            Term::TimeExpr { var, offset } if *offset > 0 => write!(f, "{var}+{offset}"),
            Term::TimeExpr { var, offset } => write!(f, "{var}{offset}"),
            Term::TimePoint(t) => write!(f, "{t}"),
            Term::Neg(p) => write!(f, "neg({p})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    Holds,
    Must,
    Able,
    Incompatible,
    Action,
    Pcb,
    Available,
    PAnomaly,
    DAnomaly,
    AnomalyInfo,
    Subject,
    Object,
    ComplV,
    Qualif,
    QualifN,
}

impl Predicate {
    pub const ALL: [Predicate; 15] = [
        Predicate::Holds,
        Predicate::Must,
        Predicate::Able,
        Predicate::Incompatible,
        Predicate::Action,
        Predicate::Pcb,
        Predicate::Available,
        Predicate::PAnomaly,
        Predicate::DAnomaly,
        Predicate::AnomalyInfo,
        Predicate::Subject,
        Predicate::Object,
        Predicate::ComplV,
        Predicate::Qualif,
        Predicate::QualifN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Holds => "holds",
            Predicate::Must => "must",
            Predicate::Able => "able",
            Predicate::Incompatible => "incompatible",
            Predicate::Action => "action",
            Predicate::Pcb => "pcb",
            Predicate::Available => "available",
            Predicate::PAnomaly => "p_anomaly",
            Predicate::DAnomaly => "d_anomaly",
            Predicate::AnomalyInfo => "anomaly_info",
            Predicate::Subject => "subject",
            Predicate::Object => "object",
            Predicate::ComplV => "compl_v",
            Predicate::Qualif => "qualif",
            Predicate::QualifN => "qualif_n",
        }
    }

    pub fn from_name(name: &str) -> Option<Predicate> {
        Predicate::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn arg_sorts(self) -> &'static [Sort] {
        use Sort::*;
        match self {
            Predicate::Holds | Predicate::Must | Predicate::Able | Predicate::AnomalyInfo => {
                &[Property, Agent, Time]
            }
            Predicate::Incompatible => &[Property, Property],
            Predicate::Action => &[Action],
            Predicate::Pcb => &[Action, Effect],
            Predicate::Available => &[Action, Effect, Agent, Time],
            Predicate::PAnomaly | Predicate::DAnomaly => &[],
            Predicate::Subject | Predicate::Object | Predicate::Qualif | Predicate::QualifN => {
                &[Word, Word]
            }
            Predicate::ComplV => &[Word, Word, Word],
        }
    }

    pub fn arity(self) -> usize {
        self.arg_sorts().len()
    }

    pub fn is_linguistic(self) -> bool {
        matches!(
            self,
            Predicate::Subject
                | Predicate::Object
                | Predicate::ComplV
                | Predicate::Qualif
                | Predicate::QualifN
        )
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pred: Predicate,
    args: Vec<Term>,
}

impl Atom {
    /// Builds an atom, checking arity and the shape of each argument.
    pub fn new(pred: Predicate, args: Vec<Term>) -> Result<Atom, ModelError> {
        let sorts = pred.arg_sorts();
        if sorts.len() != args.len() {
            return Err(ModelError::Arity {
                pred: pred.name(),
                expected: sorts.len(),
                found: args.len(),
            });
        }
        for (i, (arg, sort)) in args.iter().zip(sorts).enumerate() {
            if !arg.fits(*sort) {
                return Err(ModelError::Sort {
                    pred: pred.name(),
                    position: i + 1,
                    expected: *sort,
                    term: arg.to_string(),
                });
            }
            check_offsets(arg)?;
        }
        Ok(Atom { pred, args })
    }

    pub fn pred(&self) -> Predicate {
        self.pred
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }
}

fn check_offsets(t: &Term) -> Result<(), ModelError> {
    match t {
        Term::TimeExpr { offset, .. } if !(-1..=1).contains(offset) => {
            Err(ModelError::Offset(*offset))
        }
        Term::TimePoint(0) => Err(ModelError::TimeZero(0)),
        Term::Combine(p, a) => check_offsets(p).and(check_offsets(a)),
        Term::Neg(p) => check_offsets(p),
        _ => Ok(()),
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.pred.name())?;
        if self.args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// An atom or its classical (hard) negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal {
            atom,
            negated: false,
        }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal {
            atom,
            negated: true,
        }
    }

    /// Convenience constructor; panics on arity or sort errors.
    pub fn build(pred: Predicate, args: Vec<Term>) -> Literal {
        Literal::pos(Atom::new(pred, args).expect("well-formed atom"))
    }

    pub fn pred(&self) -> Predicate {
        self.atom.pred
    }

    pub fn args(&self) -> &[Term] {
        &self.atom.args
    }

    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            negated: !self.negated,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }

    pub fn visit_vars<F: FnMut(&Symbol, Sort)>(&self, f: &mut F) {
        for (arg, sort) in self.atom.args.iter().zip(self.atom.pred.arg_sorts()) {
            arg.visit_vars(*sort, f);
        }
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v, _| {
            out.insert(v.clone());
        });
        out
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// A literal that may sit under negation-as-failure in a rule body.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NafLiteral {
    pub literal: Literal,
    pub naf: bool,
}

impl fmt::Display for NafLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.naf {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.literal)
    }
}

/// Variable bindings. Kept idempotent: no bound value mentions a bound variable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Symbol, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Term)> {
        self.bindings.iter()
    }

    /// Binds `var` to a ground value without composition. Used by the grounder,
    /// whose values never contain variables.
    pub fn insert_ground(&mut self, var: Symbol, value: Term) {
        debug_assert!(value.is_ground());
        self.bindings.insert(var, value);
    }

    pub fn remove(&mut self, var: &str) {
        self.bindings.remove(var);
    }

    /// Composes `{var ↦ value}` onto this substitution.
    fn bind(&mut self, var: &str, value: Term) -> Result<(), ModelError> {
        let single = Substitution {
            bindings: BTreeMap::from([(var.to_string(), value.clone())]),
        };
        for v in self.bindings.values_mut() {
            *v = single.apply_term(v)?;
        }
        self.bindings.insert(var.to_string(), value);
        Ok(())
    }

    pub fn apply_term(&self, t: &Term) -> Result<Term, ModelError> {
        Ok(match t {
            Term::Const(_) | Term::TimePoint(_) => t.clone(),
            Term::Var(v) => self.bindings.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::TimeExpr { var, offset } => match self.bindings.get(var) {
                None => t.clone(),
                Some(Term::TimePoint(n)) => {
                    let value = i64::from(*n) + i64::from(*offset);
                    if value < 1 {
                        return Err(ModelError::TimeOutOfRange {
                            var: var.clone(),
                            value,
                        });
                    }
                    Term::TimePoint(value as u32)
                }
                Some(Term::Var(w)) => Term::time_expr(w.clone(), *offset),
                Some(Term::TimeExpr { var: w, offset: j }) => {
                    Term::time_expr(w.clone(), j + offset)
                }
                Some(other) => {
                    return Err(ModelError::NotATime {
                        var: var.clone(),
                        term: other.to_string(),
                    })
                }
            },
            Term::Combine(p, a) => Term::combine(self.apply_term(p)?, self.apply_term(a)?),
            Term::Neg(p) => Term::neg(self.apply_term(p)?),
        })
    }

    /// Replaces bound variables; ground iff every variable was bound.
    pub fn apply(&self, l: &Literal) -> Result<Literal, ModelError> {
        let args = l
            .atom
            .args
            .iter()
            .map(|a| self.apply_term(a))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Literal {
            atom: Atom {
                pred: l.atom.pred,
                args,
            },
            negated: l.negated,
        })
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}↦{v}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<(Symbol, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Symbol, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (k, v) in iter {
            // Callers build ground substitutions; composition keeps it sound otherwise.
            let _ = s.bind(&k, v);
        }
        s
    }
}

/// Most general unifier of two literals, if any.
///
/// `T+k` unifies with the time point `n` by binding `T` to `n-k`, provided
/// that value is still a valid interval (at least 1). Terms of the wrong shape
/// for their position, or cyclic bindings, make unification fail.
pub fn unify(a: &Literal, b: &Literal) -> Option<Substitution> {
    if a.negated != b.negated || a.atom.pred != b.atom.pred {
        return None;
    }
    let mut s = Substitution::new();
    for ((x, y), sort) in a
        .atom
        .args
        .iter()
        .zip(&b.atom.args)
        .zip(a.atom.pred.arg_sorts())
    {
        if !unify_terms(&mut s, x, y, *sort) {
            return None;
        }
    }
    Some(s)
}

fn unify_terms(s: &mut Substitution, a: &Term, b: &Term, sort: Sort) -> bool {
    let (Ok(a), Ok(b)) = (s.apply_term(a), s.apply_term(b)) else {
        return false;
    };
    if a == b {
        return true;
    }
    match (&a, &b) {
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            t.fits(sort) && !t.occurs(x) && s.bind(x, t.clone()).is_ok()
        }
        (Term::TimeExpr { var, offset }, Term::TimePoint(n))
        | (Term::TimePoint(n), Term::TimeExpr { var, offset }) => {
            let value = i64::from(*n) - i64::from(*offset);
            value >= 1 && s.bind(var, Term::TimePoint(value as u32)).is_ok()
        }
        (Term::TimeExpr { var: v, offset: k }, Term::TimeExpr { var: w, offset: j }) => {
            v != w && s.bind(v, Term::time_expr(w.clone(), j - k)).is_ok()
        }
        (Term::Combine(p1, a1), Term::Combine(p2, a2)) => {
            unify_terms(s, p1, p2, Sort::Property) && unify_terms(s, a1, a2, Sort::Entity)
        }
        (Term::Neg(p), Term::Neg(q)) => unify_terms(s, p, q, Sort::Property),
        // neg(P) = t  ⇔  P = neg(t)
        (Term::Neg(p), t) | (t, Term::Neg(p)) if sort.is_property_like() => {
            matches!(**p, Term::Var(_)) && unify_terms(s, p, &Term::neg(t.clone()), Sort::Property)
        }
        _ => false,
    }
}
