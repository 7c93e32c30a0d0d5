use normengine::dsl::print_rule;
use normengine::{
    parse_kb, parse_literal, translate_rule, unify, Literal, Predicate, Substitution, Term,
};
use proptest::prelude::*;

fn prop_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::constant("stop")),
        Just(Term::constant("control")),
        Just(Term::var("P")),
        Just(Term::var("Q")),
        prop_oneof![Just("a"), Just("b"), Just("back")]
            .prop_map(|x| Term::combine(Term::constant("bump"), Term::constant(x))),
        Just(Term::combine(Term::constant("follows"), Term::var("V"))),
    ];
    (leaf, any::<bool>()).prop_map(|(t, n)| if n { Term::neg(t) } else { t })
}

fn agent_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        Just(Term::constant("a")),
        Just(Term::constant("b")),
        Just(Term::var("A")),
        Just(Term::var("W")),
        Just(Term::var("V")),
    ]
}

fn time_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        (1u32..5).prop_map(Term::time),
        Just(Term::var("T")),
        (-1i32..=1).prop_map(|k| Term::time_expr("T", k)),
        (-1i32..=1).prop_map(|k| Term::time_expr("U", k)),
    ]
}

fn literal() -> impl Strategy<Value = Literal> {
    (
        prop_oneof![
            Just(Predicate::Holds),
            Just(Predicate::Must),
            Just(Predicate::Able)
        ],
        prop_term(),
        agent_term(),
        time_term(),
        any::<bool>(),
    )
        .prop_map(|(pred, p, a, t, neg)| {
            let l = Literal::build(pred, vec![p, a, t]);
            if neg {
                l.complement()
            } else {
                l
            }
        })
}

/// A ground value for every variable the generators use.
fn grounding() -> impl Strategy<Value = Substitution> {
    (
        prop_oneof![Just("stop"), Just("control")],
        prop_oneof![Just("stop"), Just("control")],
        prop_oneof![Just("a"), Just("b")],
        prop_oneof![Just("a"), Just("b")],
        prop_oneof![Just("a"), Just("b")],
        2u32..5,
        2u32..5,
    )
        .prop_map(|(p, q, a, w, v, t, u)| {
            [
                ("P", Term::constant(p)),
                ("Q", Term::constant(q)),
                ("A", Term::constant(a)),
                ("W", Term::constant(w)),
                ("V", Term::constant(v)),
                ("T", Term::time(t)),
                ("U", Term::time(u)),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect()
        })
}

proptest! {
    #[test]
    fn complement_is_an_involution(l in literal()) {
        prop_assert_eq!(l.complement().complement(), l.clone());
        prop_assert_ne!(l.complement(), l);
    }

    #[test]
    fn literal_text_round_trips(l in literal()) {
        prop_assert_eq!(parse_literal(&l.to_string()).unwrap(), l);
    }

    #[test]
    fn unifier_equalises(a in literal(), b in literal()) {
        if let Some(s) = unify(&a, &b) {
            if let (Ok(x), Ok(y)) = (s.apply(&a), s.apply(&b)) {
                prop_assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn unifier_is_symmetric_in_success(a in literal(), b in literal()) {
        prop_assert_eq!(unify(&a, &b).is_some(), unify(&b, &a).is_some());
    }

    // If some ground substitution equalises both literals, unification
    // succeeds and the common instance is an instance of the unified form.
    #[test]
    fn unifier_is_most_general(a in literal(), b in literal(), g in grounding()) {
        let (Ok(ga), Ok(gb)) = (g.apply(&a), g.apply(&b)) else {
            return Ok(());
        };
        if ga != gb {
            return Ok(());
        }
        let s = unify(&a, &b);
        prop_assert!(s.is_some(), "{} and {} have common instance {}", a, b, ga);
        let s = s.unwrap();
        let general = s.apply(&a).unwrap();
        prop_assert!(unify(&general, &ga).is_some(), "{} does not cover {}", general, ga);
    }

    #[test]
    fn substitution_is_idempotent(a in literal(), b in literal()) {
        if let Some(s) = unify(&a, &b) {
            if let Ok(once) = s.apply(&a) {
                prop_assert_eq!(s.apply(&once).unwrap(), once);
            }
        }
    }

    #[test]
    fn ground_substitution_grounds(l in literal(), g in grounding()) {
        if let Ok(x) = g.apply(&l) {
            prop_assert!(x.is_ground());
        }
    }

    #[test]
    fn implication_translation_size(n in 1usize..6) {
        let body: Vec<String> = (0..n).map(|i| format!("action(a{i})")).collect();
        let text = format!("r: {} -> action(b).", body.join(" & "));
        let rule = parse_kb(&text).unwrap().rules.remove(0);
        let lp = translate_rule(&rule);
        prop_assert_eq!(lp.len(), n + 1);
        prop_assert!(lp.iter().all(|r| r.naf_body.is_empty() && r.pos_body.len() == n));
        prop_assert_eq!(print_rule(&rule), text);
    }
}
