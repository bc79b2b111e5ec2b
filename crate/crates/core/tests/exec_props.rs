mod common;

use common::{data, partial_ex, Labelled, Side};
use polgoi::cutelim::Strategy;
use polgoi::exec::{check_converse, check_invariance, execute};
use polgoi::goi::{interp, Mode};
use polgoi::proof::{for_each_proof, Proof};
use polgoi::relcore::BlockRel;

fn labelled(m: &BlockRel) -> Labelled {
    Labelled { m: m.clone(), labels: (0..m.rows()).collect() }
}

/// Feeding cut pairs back in two rounds, in either order, agrees with
/// feeding them all at once.
fn associativity_holds(p: &Proof) {
    let ip = interp(p, Mode::Rel).unwrap();
    let n = ip.sequent.delta.len();
    let want = execute(p, Mode::Rel).unwrap();
    for (side, m, w) in [(Side::Upper, &ip.upper, &want.0), (Side::Lower, &ip.lower, &want.1)] {
        let all: Vec<usize> = (0..n).collect();
        assert_eq!(partial_ex(&labelled(m), &ip.sequent, &ip.layout, &all, &side).m, *w, "{p}");
        for split in 1..n {
            for order in [(0..split).collect::<Vec<_>>(), (split..n).collect()] {
                let rest: Vec<usize> = all.iter().copied().filter(|d| !order.contains(d)).collect();
                let once = partial_ex(&labelled(m), &ip.sequent, &ip.layout, &order, &side);
                let twice = partial_ex(&once, &ip.sequent, &ip.layout, &rest, &side);
                assert_eq!(twice.m, *w, "{p} split {split}");
            }
        }
    }
}

#[test]
fn cuts_can_be_executed_in_stages() {
    associativity_holds(&data("box_pi1.mllp"));
    let mut seen = 0;
    for_each_proof(8, &["X"], |p, s| {
        if s.delta.len() >= 2 {
            associativity_holds(p);
            seen += 1;
        }
    });
    assert!(seen > 0);
}

#[test]
fn innermost_strategy_is_invariant() {
    let mut checked = 0;
    for_each_proof(8, &["X", "Y"], |p, _| {
        if p.cut_count() > 0 {
            let r = check_invariance(p, Strategy::Innermost, Mode::Rel).unwrap();
            assert!(r.passed(), "{r:?}");
            checked += 1;
        }
    });
    assert!(checked > 1000);
}

#[test]
fn executed_value_has_no_cut_wires() {
    for_each_proof(6, &["X", "Y"], |p, s| {
        let ip = interp(p, Mode::Rel).unwrap();
        let (u, l) = execute(p, Mode::Rel).unwrap();
        assert_eq!(u.rows(), ip.layout.gamma_upper());
        assert_eq!(l.rows(), ip.layout.gamma_lower());
        if s.delta.is_empty() {
            assert_eq!((u, l), (ip.upper, ip.lower));
        }
    });
}

#[test]
fn converse_scan_with_one_atom() {
    let r = check_converse(6, &["X"], Mode::Rel).unwrap();
    assert!(r.proofs_scanned > 0);
    assert!(r.violations.is_empty(), "{:?}", r.violations);
}
