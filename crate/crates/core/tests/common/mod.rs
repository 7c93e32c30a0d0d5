#![allow(dead_code)]

use normengine::translate::{LpRule, Origin, Variant};
use normengine::{GroundProgram, Literal, Predicate, Term};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const WORKED_CASE: &str = "\
#case worked_example.
#agents a, b.
#times 1..2.
holds(stop,a,1).
holds(stop_sign,a,1).
holds(combine(bump,a),b,2).
holds(combine(shock_pos,back),a,2).
";

pub fn manifest(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

/// `action(pI)` or its classical negation.
pub fn lit(i: usize, negated: bool) -> Literal {
    let l = Literal::build(Predicate::Action, vec![Term::constant(format!("p{i}"))]);
    if negated {
        l.complement()
    } else {
        l
    }
}

/// A random ground program over `base` atoms (so at most `2 * base`
/// literals) with up to `max_rules` rules using both negations.
pub fn random_program(rng: &mut ChaCha8Rng, base: usize, max_rules: usize) -> GroundProgram {
    let n_rules = rng.gen_range(1..=max_rules);
    let pick = |rng: &mut ChaCha8Rng| lit(rng.gen_range(0..base), rng.gen_bool(0.3));
    let rules: Vec<LpRule> = (0..n_rules)
        .map(|k| {
            let head = pick(rng);
            let pos = (0..rng.gen_range(0..=2))
                .map(|_| pick(rng))
                .collect::<Vec<_>>();
            let naf = (0..rng.gen_range(0..=2))
                .map(|_| pick(rng))
                .collect::<Vec<_>>();
            let variant = if pos.is_empty() && naf.is_empty() {
                Variant::Fact
            } else {
                Variant::Forward
            };
            LpRule {
                head,
                pos_body: pos,
                naf_body: naf,
                origin: Origin::new(format!("g{k}"), variant),
            }
        })
        .collect();
    GroundProgram::from_rules(rules)
}

/// Stable models by definition: every subset of atoms whose reduct has
/// itself as least model, minus sets holding a literal and its complement.
pub fn oracle_models(p: &GroundProgram) -> std::collections::BTreeSet<Vec<String>> {
    let n = p.atom_count();
    assert!(n <= 16, "oracle limited to 16 atoms");
    let mut out = std::collections::BTreeSet::new();
    for mask in 0u32..(1 << n) {
        let inm = |i: usize| mask & (1 << i) != 0;
        let reduct: Vec<_> = p
            .rules()
            .iter()
            .filter(|r| r.naf.iter().all(|&i| !inm(i)))
            .collect();
        let mut least = vec![false; n];
        loop {
            let mut changed = false;
            for r in &reduct {
                if !least[r.head] && r.pos.iter().all(|&i| least[i]) {
                    least[r.head] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if (0..n).any(|i| least[i] != inm(i)) {
            continue;
        }
        let consistent = (0..n).all(|i| !inm(i) || p.complement_of(i).is_none_or(|j| !inm(j)));
        if consistent {
            let mut m: Vec<String> = (0..n)
                .filter(|&i| inm(i))
                .map(|i| p.atom(i).to_string())
                .collect();
            m.sort();
            out.insert(m);
        }
    }
    out
}
