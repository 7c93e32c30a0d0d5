//! Rule language for knowledge bases (`.nkb`), case files (`.nc`) and
//! linguistic fact lists (`.lf`).
//!
//! ```text
//! % comment
//! pcb(brake,stop).                                   % static fact
//! r1: holds(combine(bump,V),W,T) -> -holds(stop,W,T).
//! r2: a(X) & b(X) : c(X).                            % normal default
//! r3: a(X) : c(X) [d(X) & e(X)].                     % semi-normal default
//! ```
//!
//! Lowercase identifiers and quoted strings are constants, identifiers
//! starting with an uppercase letter or `_` are variables. `-` is classical
//! negation; `T-1` and `T+1` are time offsets.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::model::{Atom, Literal, ModelError, Predicate, Sort, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("rule `{rule}`: variable `{var}` does not occur in the body")]
    UnboundVariable { rule: String, var: String },
    #[error("rule `{rule}`: variable `{var}` used both as {first} and as {second}")]
    VariableSort {
        rule: String,
        var: String,
        first: Sort,
        second: Sort,
    },
    #[error("rules need a label (`id: ...`)")]
    MissingLabel,
    #[error("duplicate rule label `{0}`")]
    DuplicateLabel(String),
    #[error("fact `{0}` is not ground")]
    NonGround(String),
    #[error("time {time} outside declared range 1..{max}")]
    TimeOutOfRange { time: u32, max: u32 },
    #[error("{0}")]
    Directive(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Var(String),
    Quoted(String),
    Int(u32),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    DotDot,
    Colon,
    ColonDash,
    Amp,
    Arrow,
    Minus,
    Plus,
    Hash,
    Comment(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Quoted(s) => write!(f, "\"{s}\""),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::DotDot => f.write_str("`..`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::ColonDash => f.write_str("`:-`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Hash => f.write_str("`#`"),
            Tok::Comment(_) => f.write_str("comment"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(text: &str, keep_comments: bool) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, msg: String| ParseError {
        line,
        col,
        kind: ParseErrorKind::Syntax(msg),
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Token {
                tok,
                line: l0,
                col: c0,
            });
            *i += width;
            *col += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '%' => {
                let start = i + 1;
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                if keep_comments {
                    let body: String = chars[start..i].iter().collect();
                    out.push(Token {
                        tok: Tok::Comment(body.trim().to_string()),
                        line: l0,
                        col: c0,
                    });
                }
                col += i - start + 1;
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '[' => push(Tok::LBracket, 1, &mut i, &mut col),
            ']' => push(Tok::RBracket, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '&' => push(Tok::Amp, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '#' => push(Tok::Hash, 1, &mut i, &mut col),
            '.' if chars.get(i + 1) == Some(&'.') => push(Tok::DotDot, 2, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            ':' if chars.get(i + 1) == Some(&'-') => push(Tok::ColonDash, 2, &mut i, &mut col),
            ':' => push(Tok::Colon, 1, &mut i, &mut col),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut i, &mut col),
            '-' => push(Tok::Minus, 1, &mut i, &mut col),
            '"' => {
                let mut s = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None | Some('\n') => {
                            return Err(err(l0, c0, "unterminated string".into()));
                        }
                        Some('"') => break,
                        Some('\\') => {
                            match chars.get(j + 1) {
                                Some(&e) if e == '"' || e == '\\' => s.push(e),
                                _ => return Err(err(l0, c0, "bad escape in string".into())),
                            }
                            j += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            j += 1;
                        }
                    }
                }
                let width = j + 1 - i;
                push(Tok::Quoted(s), width, &mut i, &mut col);
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let n = s
                    .parse::<u32>()
                    .map_err(|_| err(l0, c0, format!("integer `{s}` too large")))?;
                push(Tok::Int(n), j - i, &mut i, &mut col);
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let tok = if c.is_uppercase() || c == '_' {
                    Tok::Var(s)
                } else {
                    Tok::Ident(s)
                };
                push(tok, j - i, &mut i, &mut col);
            }
            other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(text: &str, keep_comments: bool) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text, keep_comments)?,
            pos: 0,
        })
    }

    fn cur(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.cur().tok
    }

    pub(crate) fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub(crate) fn here(&self) -> (usize, usize) {
        let t = self.cur();
        (t.line, t.col)
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.cur().tok.clone();
        self.pos += 1;
        t
    }

    pub(crate) fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub(crate) fn error_at(&self, (line, col): (usize, usize), kind: ParseErrorKind) -> ParseError {
        ParseError { line, col, kind }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        self.error_at(
            self.here(),
            ParseErrorKind::Syntax(format!("expected {wanted}, found {}", self.peek())),
        )
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Tok::Var(v) => {
                let sign = match self.peek() {
                    Tok::Plus => 1,
                    Tok::Minus => -1,
                    _ => return Ok(Term::Var(v)),
                };
                self.bump();
                match self.bump() {
                    Tok::Int(n) => Ok(Term::time_expr(v, sign * n.min(i32::MAX as u32) as i32)),
                    _ => {
                        self.pos -= 1;
                        Err(self.unexpected("a time offset"))
                    }
                }
            }
            Tok::Int(n) => Ok(Term::TimePoint(n)),
            Tok::Quoted(s) => Ok(Term::Const(s)),
            Tok::Ident(s) if (s == "combine" || s == "neg") && self.peek() == &Tok::LParen => {
                self.bump();
                let first = self.term()?;
                let t = if s == "combine" {
                    self.expect(&Tok::Comma)?;
                    let second = self.term()?;
                    Term::combine(first, second)
                } else {
                    Term::neg(first)
                };
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => Ok(Term::Const(s)),
            _ => {
                self.pos -= 1;
                Err(self.unexpected("a term"))
            }
        }
    }

    pub(crate) fn literal(&mut self) -> Result<Literal, ParseError> {
        let start = self.here();
        let negated = self.eat(&Tok::Minus);
        let name_pos = self.here();
        let name = match self.bump() {
            Tok::Ident(s) => s,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a predicate"));
            }
        };
        let pred = Predicate::from_name(&name)
            .ok_or_else(|| self.error_at(name_pos, ParseErrorKind::UnknownPredicate(name)))?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.term()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen)?;
        }
        let atom = Atom::new(pred, args).map_err(|e| self.error_at(start, e.into()))?;
        Ok(Literal { atom, negated })
    }

    fn conjunction(&mut self) -> Result<Vec<Literal>, ParseError> {
        let mut lits = vec![self.literal()?];
        while self.eat(&Tok::Amp) {
            lits.push(self.literal()?);
        }
        Ok(lits)
    }

    fn ground_fact(&mut self) -> Result<Literal, ParseError> {
        let at = self.here();
        let lit = self.literal()?;
        if !lit.is_ground() {
            return Err(self.error_at(at, ParseErrorKind::NonGround(lit.to_string())));
        }
        Ok(lit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// `body -> head`; an empty body makes the rule a fact.
    Implication { body: Vec<Literal>, head: Literal },
    /// `pre : conc`
    NormalDefault { pre: Vec<Literal>, conc: Literal },
    /// `pre : conc [constraint]`
    SemiNormalDefault {
        pre: Vec<Literal>,
        conc: Literal,
        constraint: Vec<Literal>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub id: String,
    pub kind: RuleKind,
}

impl Rule {
    pub fn implication(id: impl Into<String>, body: Vec<Literal>, head: Literal) -> Rule {
        Rule {
            id: id.into(),
            kind: RuleKind::Implication { body, head },
        }
    }

    pub fn conclusion(&self) -> &Literal {
        match &self.kind {
            RuleKind::Implication { head, .. } => head,
            RuleKind::NormalDefault { conc, .. } | RuleKind::SemiNormalDefault { conc, .. } => conc,
        }
    }

    fn premises(&self) -> &[Literal] {
        match &self.kind {
            RuleKind::Implication { body, .. } => body,
            RuleKind::NormalDefault { pre, .. } | RuleKind::SemiNormalDefault { pre, .. } => pre,
        }
    }

    /// Checks variable sorts and range restriction.
    ///
    /// Agent- and time-sorted variables may be left unbound by the premises:
    /// they range over the finite agents and intervals of the case.
    pub fn check(&self) -> Result<(), ParseErrorKind> {
        let mut sorts: BTreeMap<Symbol, Sort> = BTreeMap::new();
        let mut clash = None;
        let mut record = |v: &Symbol, s: Sort| match sorts.get(v) {
            Some(prev) => match prev.meet(s) {
                Some(m) => {
                    sorts.insert(v.clone(), m);
                }
                None => {
                    clash.get_or_insert((v.clone(), *prev, s));
                }
            },
            None => {
                sorts.insert(v.clone(), s);
            }
        };
        let mut all: Vec<&Literal> = self.premises().iter().collect();
        all.push(self.conclusion());
        if let RuleKind::SemiNormalDefault { constraint, .. } = &self.kind {
            all.extend(constraint);
        }
        for l in &all {
            l.visit_vars(&mut record);
        }
        if let Some((var, first, second)) = clash {
            return Err(ParseErrorKind::VariableSort {
                rule: self.id.clone(),
                var,
                first,
                second,
            });
        }
        let bound: BTreeSet<Symbol> = self.premises().iter().flat_map(|l| l.vars()).collect();
        for l in &all {
            for v in l.vars() {
                let free_ok = matches!(sorts.get(&v), Some(Sort::Agent | Sort::Time));
                if !bound.contains(&v) && !free_ok {
                    return Err(ParseErrorKind::UnboundVariable {
                        rule: self.id.clone(),
                        var: v,
                    });
                }
            }
        }
        Ok(())
    }
}

fn write_conj(f: &mut fmt::Formatter<'_>, lits: &[Literal]) -> fmt::Result {
    for (i, l) in lits.iter().enumerate() {
        if i > 0 {
            f.write_str(" & ")?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleKind::Implication { body, head } if body.is_empty() => write!(f, "{head}."),
            RuleKind::Implication { body, head } => {
                write_conj(f, body)?;
                write!(f, " -> {head}.")
            }
            RuleKind::NormalDefault { pre, conc } => {
                write_conj(f, pre)?;
                write!(f, " : {conc}.")
            }
            RuleKind::SemiNormalDefault {
                pre,
                conc,
                constraint,
            } => {
                write_conj(f, pre)?;
                write!(f, " : {conc} [")?;
                write_conj(f, constraint)?;
                f.write_str("].")
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.kind)
    }
}

/// Renders a rule in the concrete syntax accepted by [`parse_kb`].
pub fn print_rule(r: &Rule) -> String {
    r.to_string()
}

/// Rules plus static ground facts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub rules: Vec<Rule>,
    pub facts: Vec<Literal>,
}

impl KnowledgeBase {
    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// Appends another knowledge base; rule labels must stay unique.
    pub fn merge(&mut self, other: KnowledgeBase) -> Result<(), ParseErrorKind> {
        let mut seen: HashSet<String> = self.rules.iter().map(|r| r.id.clone()).collect();
        for r in &other.rules {
            if !seen.insert(r.id.clone()) {
                return Err(ParseErrorKind::DuplicateLabel(r.id.clone()));
            }
        }
        self.rules.extend(other.rules);
        for f in other.facts {
            if !self.facts.contains(&f) {
                self.facts.push(f);
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.facts {
            out.push_str(&format!("{f}.\n"));
        }
        for r in &self.rules {
            out.push_str(&print_rule(r));
            out.push('\n');
        }
        out
    }
}

fn is_label(p: &Parser) -> bool {
    match (p.peek(), p.peek_at(1)) {
        (Tok::Ident(name), Tok::Colon) => Predicate::from_name(name).is_none(),
        _ => false,
    }
}

pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    let mut p = Parser::new(text, false)?;
    let mut kb = KnowledgeBase::default();
    let mut labels = HashSet::new();
    while !p.at_eof() {
        let start = p.here();
        if !is_label(&p) {
            let lit = p.ground_fact().map_err(|e| match e.kind {
                ParseErrorKind::NonGround(_) => p.error_at(start, ParseErrorKind::MissingLabel),
                _ => e,
            })?;
            if !p.eat(&Tok::Dot) {
                return Err(if matches!(p.peek(), Tok::Arrow | Tok::Colon | Tok::Amp) {
                    p.error_at(start, ParseErrorKind::MissingLabel)
                } else {
                    p.unexpected("`.`")
                });
            }
            if !kb.facts.contains(&lit) {
                kb.facts.push(lit);
            }
            continue;
        }
        let Tok::Ident(id) = p.bump() else {
            unreachable!()
        };
        p.expect(&Tok::Colon)?;
        let body = p.conjunction()?;
        let kind = match p.bump() {
            Tok::Dot if body.len() == 1 => RuleKind::Implication {
                body: vec![],
                head: body.into_iter().next().unwrap(),
            },
            Tok::Arrow => {
                let head = p.literal()?;
                p.expect(&Tok::Dot)?;
                RuleKind::Implication { body, head }
            }
            Tok::Colon => {
                let conc = p.literal()?;
                let kind = if p.eat(&Tok::LBracket) {
                    let constraint = if p.peek() == &Tok::RBracket {
                        vec![]
                    } else {
                        p.conjunction()?
                    };
                    p.expect(&Tok::RBracket)?;
                    RuleKind::SemiNormalDefault {
                        pre: body,
                        conc,
                        constraint,
                    }
                } else {
                    RuleKind::NormalDefault { pre: body, conc }
                };
                p.expect(&Tok::Dot)?;
                kind
            }
            _ => {
                p.pos -= 1;
                return Err(p.unexpected("`->`, `:` or `.`"));
            }
        };
        if !labels.insert(id.clone()) {
            return Err(p.error_at(start, ParseErrorKind::DuplicateLabel(id)));
        }
        let rule = Rule { id, kind };
        rule.check().map_err(|k| p.error_at(start, k))?;
        kb.rules.push(rule);
    }
    Ok(kb)
}

/// One report's input: declared domains, semantic facts and, for regression
/// runs, the literals expected in (or absent from) every stable model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseFile {
    pub case_id: String,
    pub agents: Vec<Symbol>,
    pub max_time: u32,
    pub facts: Vec<Literal>,
    pub expected: Option<Vec<Literal>>,
    pub absent: Vec<Literal>,
    /// Set when facts mention agents that were not declared.
    pub warnings: Vec<String>,
}

impl CaseFile {
    pub fn new(case_id: impl Into<String>, agents: Vec<Symbol>, max_time: u32) -> CaseFile {
        CaseFile {
            case_id: case_id.into(),
            agents,
            max_time,
            facts: vec![],
            expected: None,
            absent: vec![],
            warnings: vec![],
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("#case {}.\n", Term::constant(self.case_id.clone()));
        if !self.agents.is_empty() {
            let agents: Vec<String> = self
                .agents
                .iter()
                .map(|a| Term::constant(a.clone()).to_string())
                .collect();
            out.push_str(&format!("#agents {}.\n", agents.join(",")));
        }
        out.push_str(&format!("#times 1..{}.\n", self.max_time));
        for f in &self.facts {
            out.push_str(&format!("{f}.\n"));
        }
        let list = |lits: &[Literal]| {
            lits.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        if let Some(exp) = self.expected.as_ref().filter(|e| !e.is_empty()) {
            out.push_str(&format!("#expected {}.\n", list(exp)));
        }
        if !self.absent.is_empty() {
            out.push_str(&format!("#absent {}.\n", list(&self.absent)));
        }
        out
    }
}

fn literal_list(p: &mut Parser) -> Result<Vec<Literal>, ParseError> {
    let mut lits = vec![p.ground_fact()?];
    while p.eat(&Tok::Comma) {
        lits.push(p.ground_fact()?);
    }
    p.expect(&Tok::Dot)?;
    Ok(lits)
}

fn symbol(p: &mut Parser) -> Result<Symbol, ParseError> {
    match p.bump() {
        Tok::Ident(s) | Tok::Quoted(s) => Ok(s),
        Tok::Int(n) => Ok(n.to_string()),
        _ => {
            p.pos -= 1;
            Err(p.unexpected("a constant"))
        }
    }
}

pub fn parse_case(text: &str) -> Result<CaseFile, ParseError> {
    let mut p = Parser::new(text, false)?;
    let mut case = CaseFile::new("unnamed", vec![], 0);
    let mut times_declared = false;
    let mut fact_pos = Vec::new();
    while !p.at_eof() {
        if p.eat(&Tok::Hash) {
            let at = p.here();
            let Tok::Ident(directive) = p.bump() else {
                return Err(p.error_at(at, ParseErrorKind::Syntax("expected a directive".into())));
            };
            match directive.as_str() {
                "case" => {
                    case.case_id = symbol(&mut p)?;
                    p.expect(&Tok::Dot)?;
                }
                "agents" => {
                    loop {
                        let a = symbol(&mut p)?;
                        if !case.agents.contains(&a) {
                            case.agents.push(a);
                        }
                        if !p.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    p.expect(&Tok::Dot)?;
                }
                "times" => {
                    let at = p.here();
                    let (Tok::Int(lo), Tok::DotDot, Tok::Int(hi)) = (p.bump(), p.bump(), p.bump())
                    else {
                        return Err(p.error_at(
                            at,
                            ParseErrorKind::Directive("expected `#times 1..N`".into()),
                        ));
                    };
                    if lo != 1 || hi < 1 {
                        return Err(p.error_at(
                            at,
                            ParseErrorKind::Directive(format!(
                                "time range must be 1..N with N >= 1, got {lo}..{hi}"
                            )),
                        ));
                    }
                    case.max_time = hi;
                    times_declared = true;
                    p.expect(&Tok::Dot)?;
                }
                "expected" => {
                    let lits = literal_list(&mut p)?;
                    case.expected.get_or_insert_with(Vec::new).extend(lits);
                }
                "absent" => {
                    let lits = literal_list(&mut p)?;
                    case.absent.extend(lits);
                }
                other => {
                    return Err(p.error_at(
                        at,
                        ParseErrorKind::Directive(format!("unknown directive `#{other}`")),
                    ))
                }
            }
            continue;
        }
        let at = p.here();
        let lit = p.ground_fact()?;
        p.expect(&Tok::Dot)?;
        fact_pos.push(at);
        case.facts.push(lit);
    }
    let max_seen = case.facts.iter().flat_map(time_points).max();
    if !times_declared {
        case.max_time = max_seen.unwrap_or(1);
        if max_seen.is_some() {
            case.warnings
                .push(format!("no #times declaration; using 1..{}", case.max_time));
        }
    }
    for (f, at) in case.facts.iter().zip(&fact_pos) {
        if let Some(t) = time_points(f).into_iter().find(|t| *t > case.max_time) {
            return Err(p.error_at(
                *at,
                ParseErrorKind::TimeOutOfRange {
                    time: t,
                    max: case.max_time,
                },
            ));
        }
    }
    let mut undeclared = Vec::new();
    for f in &case.facts {
        for a in agent_constants(f) {
            if !case.agents.contains(&a) && !undeclared.contains(&a) {
                undeclared.push(a);
            }
        }
    }
    for a in undeclared {
        case.warnings.push(format!(
            "agent `{a}` used but not declared; added to #agents"
        ));
        case.agents.push(a);
    }
    Ok(case)
}

pub(crate) fn time_points(l: &Literal) -> Vec<u32> {
    l.args()
        .iter()
        .zip(l.pred().arg_sorts())
        .filter(|(_, s)| **s == Sort::Time)
        .filter_map(|(t, _)| t.as_time())
        .collect()
}

pub(crate) fn agent_constants(l: &Literal) -> Vec<Symbol> {
    l.args()
        .iter()
        .zip(l.pred().arg_sorts())
        .filter(|(_, s)| **s == Sort::Agent)
        .filter_map(|(t, _)| t.as_const().map(str::to_string))
        .collect()
}

/// Parses a list of ground literals, each terminated by `.` (`.lf` files).
pub fn parse_literals(text: &str) -> Result<Vec<Literal>, ParseError> {
    let mut p = Parser::new(text, false)?;
    let mut out = Vec::new();
    while !p.at_eof() {
        out.push(p.ground_fact()?);
        p.expect(&Tok::Dot)?;
    }
    Ok(out)
}

/// Parses a single literal, possibly with variables.
pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let mut p = Parser::new(text, false)?;
    let l = p.literal()?;
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(l)
}
