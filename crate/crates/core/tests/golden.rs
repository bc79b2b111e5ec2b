mod common;

use common::{antidiagonal_one, data, delta_pattern, I, ONE, P, DISPLAY_ORDER, U, Z};
use polgoi::cutelim::{normalize, reducible_cuts, step, RedexKind, Strategy};
use polgoi::exec::{execute, square_at};
use polgoi::goi::{interp, Mode};
use polgoi::proof::Proof;
use polgoi::relcore::BlockRel;

#[test]
fn eta_expansion_matrices() {
    let ip = interp(&data("eta_axiom.mllp"), Mode::Rel).unwrap();
    // Wires U_↓, U_{X⊥}, U_X, U_↑.
    let want = BlockRel::from_rows(&[U; 4], &[U; 4], &[&[Z, Z, Z, P], &[Z, Z, I, Z], &[Z, I, Z, Z], &[P, Z, Z, Z]]).unwrap();
    assert_eq!(ip.upper, want);
    assert_eq!(ip.lower, antidiagonal_one());
}

#[test]
fn shifted_tensor_example_matrices() {
    let ip = interp(&data("shifted_tensor.mllp"), Mode::Rel).unwrap();
    assert_eq!(ip.sequent.to_string(), "⊢ [], ↓↑(X ⊗ Y), Y⊥ ⅋ X⊥");
    // Upper wires: U_↓, U_X, U_Y, U_↑ | U_{Y⊥}, U_{X⊥}.
    let first = ip.upper.block(3..6, 0..3);
    let want_first = BlockRel::from_rows(&[U; 3], &[U; 3], &[&[Z, Z, Z], &[P, Z, I], &[P, I, Z]]).unwrap();
    assert_eq!(first, want_first, "rows U_↑, U_Y⊥⅋X⊥ against U_↓, U_X⊗Y");
    let second = ip.upper.block(0..3, 3..6);
    let want_second = BlockRel::from_rows(&[U; 3], &[U; 3], &[&[Z, P, P], &[Z, Z, I], &[Z, I, Z]]).unwrap();
    assert_eq!(second, want_second, "rows U_↓, U_X⊗Y against U_↑, U_Y⊥⅋X⊥");
    // Everything else is empty.
    assert!(ip.upper.block(0..3, 0..3).is_zero());
    assert!(ip.upper.block(3..6, 3..6).is_zero());
    let lower = BlockRel::from_rows(&[ONE; 3], &[ONE; 3], &[&[Z, I, I], &[I, Z, Z], &[I, Z, Z]]).unwrap();
    assert_eq!(ip.lower, lower);
}

#[test]
fn box_extrusion_sequence() {
    let pis: Vec<Proof> = ["box_pi1.mllp", "box_pi2.mllp", "box_pi3.mllp"].iter().map(|n| data(n)).collect();
    for k in 0..2 {
        let redexes = reducible_cuts(&pis[k]);
        let hit = redexes
            .iter()
            .filter(|r| r.kind == RedexKind::BoxExtrusion)
            .any(|r| step(&pis[k], r).unwrap() == pis[k + 1]);
        assert!(hit, "π{} does not extrude to π{}", k + 1, k + 2);
    }
    let (nf, trace) = normalize(&pis[0], Strategy::Leftmost).unwrap();
    assert_eq!(trace[0].1, pis[1]);
    assert_eq!(trace[1].1, pis[2]);
    assert_eq!(nf, data("eta_axiom.mllp"));
    for (i, p) in pis.iter().enumerate() {
        let ip = interp(p, Mode::Rel).unwrap();
        assert_eq!(ip.lower.conjugate(&DISPLAY_ORDER), delta_pattern(i + 1), "f_π{}", i + 1);
        assert_eq!(execute(p, Mode::Rel).unwrap().1, antidiagonal_one());
    }
}

#[test]
fn focus_composites_of_the_examples() {
    // ⟦π⟧ ∘ α lands on U_↑ alone.
    let r = square_at(&data("eta_axiom.mllp"), 0, Mode::Rel).unwrap();
    assert!(r.holds_nontrivially());
    let want = BlockRel::from_rows(&[ONE], &[U; 4], &[&[Z], &[Z], &[Z], &[P]]).unwrap();
    assert_eq!(r.lhs, want);

    // ⟦π⟧ ∘ α lands on both leaves of Y⊥ ⅋ X⊥.
    let r = square_at(&data("shifted_tensor.mllp"), 0, Mode::Rel).unwrap();
    assert!(r.holds_nontrivially());
    let want = BlockRel::from_rows(&[ONE], &[U; 6], &[&[Z], &[Z], &[Z], &[Z], &[P], &[P]]).unwrap();
    assert_eq!(r.lhs, want);
    assert_eq!(r.rhs, want);
}

#[test]
fn eta_lower_layer_ranges_over_the_up_side() {
    let ip = interp(&data("eta_axiom.mllp"), Mode::Rel).unwrap();
    assert!(ip.lower.block(0..2, 0..1).ranges_over(&[1]));
}

#[test]
fn up_terminal_nonfocused_square_is_trivial() {
    let p = data("nonfocused_up.mllp");
    assert_eq!(p.check().unwrap().positives(), 0);
    let r = square_at(&p, 1, Mode::Rel).unwrap();
    assert!(r.passed() && !r.nontrivial, "{r:?}");
    let (_, lower) = execute(&p, Mode::Rel).unwrap();
    assert!(lower.block(0..2, 1..2).is_zero());
}

#[test]
fn degenerate_mode_drops_the_points() {
    let ip = interp(&data("eta_axiom.mllp"), Mode::PInjDegenerate).unwrap();
    assert_eq!(ip.upper.get(0, 3), Z);
    assert_eq!(ip.upper.get(3, 0), Z);
    assert_eq!(ip.upper.get(1, 2), I);
}
