mod common;

use std::collections::HashSet;

use common::f;
use polgoi::formula::{Formula, FormulaError};
use polgoi::proof::{enumerate_proofs, Proof, ProofError};
use proptest::prelude::*;

fn polarized(pos: bool) -> BoxedStrategy<Formula> {
    let leaf_pos = prop_oneof![Just(Formula::atom("X")), Just(Formula::atom("Y")), Just(Formula::One)];
    let leaf_neg = prop_oneof![Just(Formula::neg_atom("X")), Just(Formula::neg_atom("Y")), Just(Formula::Bot)];
    // Build both polarities together so recursion can cross a shift.
    let leaves = (leaf_pos, leaf_neg).boxed();
    let both = leaves.prop_recursive(4, 32, 2, |inner| {
        (inner.clone(), inner, 0u8..3).prop_map(|((p1, n1), (p2, n2), k)| match k {
            0 => (Formula::tensor(p1, p2), Formula::par(n1, n2)),
            1 => (Formula::down(n1), Formula::up(p1)),
            _ => (Formula::tensor(Formula::down(n2), p1), Formula::par(Formula::up(p2), n1)),
        })
    });
    if pos {
        both.prop_map(|(p, _)| p).boxed()
    } else {
        both.prop_map(|(_, n)| n).boxed()
    }
}

fn any_formula() -> BoxedStrategy<Formula> {
    prop_oneof![polarized(true), polarized(false)].boxed()
}

proptest! {
    #[test]
    fn formula_text_round_trips(a in any_formula()) {
        prop_assert!(a.well_formed());
        prop_assert_eq!(Formula::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn negation_is_an_involution_that_flips_polarity(a in any_formula()) {
        let n = a.negate();
        prop_assert_eq!(n.negate(), a.clone());
        prop_assert_eq!(n.is_positive(), a.is_negative());
        prop_assert!(n.well_formed());
        prop_assert_eq!(n.size(), a.size());
    }

    #[test]
    fn negation_keeps_operand_order(a in polarized(true), b in polarized(true)) {
        let t = Formula::tensor(a.clone(), b.clone());
        prop_assert_eq!(t.negate(), Formula::par(a.negate(), b.negate()));
    }
}

#[test]
fn grammar_examples() {
    assert_eq!(f("dn (up X | Y^)"), Formula::down(Formula::par(Formula::up(Formula::atom("X")), Formula::neg_atom("Y"))));
    assert_eq!(f("  # comment\n one "), Formula::One);
    assert_eq!(f("(X * dn bot)"), Formula::tensor(Formula::atom("X"), Formula::down(Formula::Bot)));
}

#[test]
fn malformed_formulas_are_rejected() {
    for bad in ["", "X * Y", "(X * Y", "(X | Y)", "(X^ * Y)", "dn X", "up Y^", "X Y", "(X * Y))", "1X"] {
        assert!(Formula::parse(bad).is_err(), "{bad:?} parsed");
    }
    assert!(matches!(Formula::parse("dn X"), Err(FormulaError::Polarity { .. })));
    assert!(matches!(Formula::parse("(X * "), Err(FormulaError::Syntax { .. })));
}

#[test]
fn malformed_proofs_are_rejected() {
    for bad in ["", "(ax X^", "(ax X^) junk", "(tensor (ax X^))", "(ex (ax X^) [0 0])", "(par (ax X^) 0 1)", "(dn (ax X^) 0)", "(cut (ax X^) (ax Y^))", "(up (ax X^) 7)"] {
        assert!(Proof::parse(bad).and_then(|p| p.check().map(|_| p)).is_err(), "{bad:?} accepted");
    }
    let e = Proof::parse("(cut (ax X^) (ax Y^))").unwrap().check().unwrap_err();
    assert!(matches!(e, ProofError::RuleViolation { .. }), "{e}");
}

#[test]
fn enumeration_is_duplicate_free_and_checks() {
    let all = enumerate_proofs(6, &["X", "Y"]);
    assert_eq!(all.len(), 816);
    let distinct: HashSet<&Proof> = all.iter().collect();
    assert_eq!(distinct.len(), all.len());
    for p in &all {
        let s = p.check().unwrap();
        assert_eq!(Proof::parse(&p.to_string()).unwrap(), *p);
        assert!(p.rule_count() <= 6);
        assert!(s.gamma.iter().all(Formula::well_formed));
    }
}

#[test]
fn enumeration_counts_are_cumulative() {
    let per = |k| enumerate_proofs(k, &["X", "Y"]).len();
    let (a, b) = (per(5), per(6));
    assert!(a < b);
    assert!(enumerate_proofs(6, &["X"]).len() < b);
}
