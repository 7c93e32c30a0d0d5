//! Stable models of ground programs with classical negation.
//!
//! `p` and `-p` are separate atoms; a candidate containing both is rejected.
//! The search branches on atoms that occur under `not`, trying "false"
//! first, and between branches propagates two bounds:
//!
//! * a lower bound, the least model of the rules whose `not` atoms are all
//!   assigned false, which every stable model below this node contains;
//! * an upper bound, the least model of the rules with no `not` atom assigned
//!   true, which contains every such stable model.
//!
//! Once every `not` atom is assigned the two bounds coincide and form the
//! model.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ground::{AtomId, GroundProgram, GroundRule};
use crate::model::Literal;

/// Atom cap for [`brute_force_solve`].
pub const BRUTE_FORCE_MAX_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("brute force limited to {max} atoms, program has {atoms}")]
    TooLarge { atoms: usize, max: usize },
}

/// A set of ground classical literals, iterated in textual order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Interpretation {
    #[serde(serialize_with = "serialize_literals")]
    literals: Vec<Literal>,
}

fn serialize_literals<S: serde::Serializer>(lits: &[Literal], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(lits.iter().map(ToString::to_string))
}

impl Interpretation {
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Interpretation {
        let mut keyed: Vec<(String, Literal)> =
            lits.into_iter().map(|l| (l.to_string(), l)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        Interpretation {
            literals: keyed.into_iter().map(|(_, l)| l).collect(),
        }
    }

    /// Atom ids are already in textual order.
    pub(crate) fn from_mask(p: &GroundProgram, mask: &[bool]) -> Interpretation {
        Interpretation {
            literals: mask
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| p.atom(i).clone())
                .collect(),
        }
    }

    /// Membership vector over the program's atoms, or `None` if some literal
    /// does not occur in the program.
    pub(crate) fn to_mask(&self, p: &GroundProgram) -> Option<Vec<bool>> {
        let mut mask = vec![false; p.atom_count()];
        for l in &self.literals {
            mask[p.id_of(l)?] = true;
        }
        Some(mask)
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.literals.iter().any(|x| x == l)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.literals.iter()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// False iff some literal occurs together with its complement.
    pub fn is_consistent(&self) -> bool {
        let set: HashSet<&Literal> = self.literals.iter().collect();
        !self
            .literals
            .iter()
            .any(|l| l.negated && set.contains(&l.complement()))
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveResult {
    pub models: Vec<Interpretation>,
    /// False when the model cap stopped the enumeration early.
    pub exhausted: bool,
}

impl SolveResult {
    pub fn model_set(&self) -> BTreeSet<Vec<String>> {
        self.models
            .iter()
            .map(|m| m.iter().map(ToString::to_string).collect())
            .collect()
    }
}

/// Gelfond–Lifschitz reduct: drop every rule with a `not` atom in `m`, strip
/// `not` from the rest.
pub fn reduct(p: &GroundProgram, m: &Interpretation) -> GroundProgram {
    let mask = m.to_mask(p);
    let in_m = |a: AtomId| mask.as_ref().is_some_and(|mk| mk[a]);
    let rules = p
        .rules()
        .iter()
        .filter(|r| !r.naf.iter().any(|&a| in_m(a)))
        .map(|r| GroundRule {
            naf: vec![],
            ..r.clone()
        })
        .collect();
    p.with_rules(rules)
}

/// Least model of a program without `not`. Any `not` literals are ignored.
/// The result may be inconsistent; see [`Interpretation::is_consistent`].
pub fn least_model(p: &GroundProgram) -> Interpretation {
    let eng = Engine::new(p);
    Interpretation::from_mask(p, &eng.least(|_| true))
}

pub fn is_stable(p: &GroundProgram, m: &Interpretation) -> bool {
    if !m.is_consistent() {
        return false;
    }
    let Some(mask) = m.to_mask(p) else {
        return false;
    };
    Engine::new(p).is_stable_mask(&mask)
}

/// Enumerates stable models, stopping after `cap` of them.
pub fn solve_all(p: &GroundProgram, cap: usize) -> SolveResult {
    let eng = Engine::new(p);
    let mut found = Vec::new();
    let mut assign = vec![Val::Unknown; p.atom_count()];
    eng.search(&mut assign, &mut found, cap.saturating_add(1));
    let exhausted = found.len() <= cap;
    found.truncate(cap);
    SolveResult {
        models: found
            .iter()
            .map(|m| Interpretation::from_mask(p, m))
            .collect(),
        exhausted,
    }
}

/// Checks every subset of the program's atoms. Test oracle for [`solve_all`].
pub fn brute_force_solve(p: &GroundProgram) -> Result<SolveResult, SolveError> {
    let n = p.atom_count();
    if n > BRUTE_FORCE_MAX_ATOMS {
        return Err(SolveError::TooLarge {
            atoms: n,
            max: BRUTE_FORCE_MAX_ATOMS,
        });
    }
    let eng = Engine::new(p);
    let mut models = Vec::new();
    for bits in 0u32..(1u32 << n) {
        let mask: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
        if eng.consistent(&mask) && eng.is_stable_mask(&mask) {
            models.push(Interpretation::from_mask(p, &mask));
        }
    }
    Ok(SolveResult {
        models,
        exhausted: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    Unknown,
    True,
    False,
}

struct Engine<'a> {
    p: &'a GroundProgram,
    /// Rules with the atom in their positive body (with multiplicity).
    watch: Vec<Vec<usize>>,
    /// Atoms occurring under `not`, in id order.
    naf_atoms: Vec<AtomId>,
    /// How many rules mention each atom under `not`.
    naf_score: Vec<usize>,
}

impl<'a> Engine<'a> {
    fn new(p: &'a GroundProgram) -> Self {
        let n = p.atom_count();
        let mut watch = vec![Vec::new(); n];
        let mut naf_score = vec![0usize; n];
        for (i, r) in p.rules().iter().enumerate() {
            for &a in &r.pos {
                watch[a].push(i);
            }
            let mut seen = Vec::new();
            for &a in &r.naf {
                if !seen.contains(&a) {
                    naf_score[a] += 1;
                    seen.push(a);
                }
            }
        }
        let naf_atoms = (0..n).filter(|&a| naf_score[a] > 0).collect();
        Engine {
            p,
            watch,
            naf_atoms,
            naf_score,
        }
    }

    fn least(&self, active: impl Fn(&GroundRule) -> bool) -> Vec<bool> {
        let rules = self.p.rules();
        let mut truth = vec![false; self.p.atom_count()];
        let mut missing: Vec<usize> = rules.iter().map(|r| r.pos.len()).collect();
        let enabled: Vec<bool> = rules.iter().map(active).collect();
        let mut queue: Vec<AtomId> = Vec::new();
        for (i, r) in rules.iter().enumerate() {
            if enabled[i] && missing[i] == 0 && !truth[r.head] {
                truth[r.head] = true;
                queue.push(r.head);
            }
        }
        while let Some(a) = queue.pop() {
            for &ri in &self.watch[a] {
                missing[ri] -= 1;
                if missing[ri] == 0 && enabled[ri] {
                    let h = rules[ri].head;
                    if !truth[h] {
                        truth[h] = true;
                        queue.push(h);
                    }
                }
            }
        }
        truth
    }

    fn consistent(&self, mask: &[bool]) -> bool {
        mask.iter()
            .enumerate()
            .all(|(a, &t)| !t || self.p.complement_of(a).is_none_or(|c| !mask[c]))
    }

    fn is_stable_mask(&self, mask: &[bool]) -> bool {
        self.least(|r| !r.naf.iter().any(|&a| mask[a])) == mask
    }

    /// Tightens `assign` to a fixpoint; returns the lower bound, or `None`
    /// on conflict.
    fn propagate(&self, assign: &mut [Val]) -> Option<Vec<bool>> {
        loop {
            let lower = self.least(|r| r.naf.iter().all(|&a| assign[a] == Val::False));
            let upper = self.least(|r| r.naf.iter().all(|&a| assign[a] != Val::True));
            let mut changed = false;
            for &a in &self.naf_atoms {
                if lower[a] {
                    match assign[a] {
                        Val::False => return None,
                        Val::Unknown => {
                            assign[a] = Val::True;
                            changed = true;
                        }
                        Val::True => {}
                    }
                }
                if !upper[a] {
                    match assign[a] {
                        Val::True => return None,
                        Val::Unknown => {
                            assign[a] = Val::False;
                            changed = true;
                        }
                        Val::False => {}
                    }
                }
            }
            for (a, _) in lower.iter().enumerate().filter(|(_, &t)| t) {
                let Some(c) = self.p.complement_of(a) else {
                    continue;
                };
                if lower[c] || assign[c] == Val::True {
                    return None;
                }
                if assign[c] == Val::Unknown {
                    assign[c] = Val::False;
                    changed = true;
                }
            }
            if !changed {
                return Some(lower);
            }
        }
    }

    fn search(&self, assign: &mut [Val], found: &mut Vec<Vec<bool>>, limit: usize) {
        if found.len() >= limit {
            return;
        }
        let Some(lower) = self.propagate(assign) else {
            return;
        };
        let pick = self
            .naf_atoms
            .iter()
            .copied()
            .filter(|&a| assign[a] == Val::Unknown)
            .max_by(|&x, &y| self.naf_score[x].cmp(&self.naf_score[y]).then(y.cmp(&x)));
        match pick {
            None => {
                debug_assert!(self.consistent(&lower) && self.is_stable_mask(&lower));
                found.push(lower);
            }
            Some(a) => {
                for v in [Val::False, Val::True] {
                    let mut branch = assign.to_vec();
                    branch[a] = v;
                    self.search(&mut branch, found, limit);
                    if found.len() >= limit {
                        return;
                    }
                }
            }
        }
    }
}
