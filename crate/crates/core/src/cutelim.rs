//! One-step cut-elimination and normalization.
//!
//! Rewrites are computed on occurrence labels rather than positions: every
//! formula of a conclusion carries a label, rules are rebuilt by label, and
//! a final exchange restores the original order of the conclusion.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::proof::{check, move_to_end, with_ex, Proof, ProofError, RuleName};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RedexKind {
    AxCut,
    TensorPar,
    UpDown,
    CommuteLeft(RuleName),
    CommuteRight(RuleName),
    BoxExtrusion,
}

impl fmt::Display for RedexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RedexKind::AxCut => write!(f, "AxCut"),
            RedexKind::TensorPar => write!(f, "TensorPar"),
            RedexKind::UpDown => write!(f, "UpDown"),
            RedexKind::CommuteLeft(r) => write!(f, "CommuteLeft({r})"),
            RedexKind::CommuteRight(r) => write!(f, "CommuteRight({r})"),
            RedexKind::BoxExtrusion => write!(f, "BoxExtrusion"),
        }
    }
}

/// A cut node, addressed by its path of premise indices, with the shape of
/// its reduction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Redex {
    pub path: Vec<usize>,
    pub kind: RedexKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// First cut in preorder, skipping cut/cut commutations.
    #[default]
    Leftmost,
    /// First cut in preorder whose premises are cut-free.
    Innermost,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CutElimError {
    #[error("no reducible cut of kind {kind} at {path:?}")]
    InvalidRedex { path: Vec<usize>, kind: RedexKind },
    #[error("normalization exceeded {limit} steps")]
    StepLimitExceeded { limit: usize },
    #[error(transparent)]
    Proof(#[from] ProofError),
}

type Label = u32;

#[derive(Default)]
struct Fresh(Label);

impl Fresh {
    fn next(&mut self) -> Label {
        self.0 += 1;
        self.0
    }
    fn many(&mut self, n: usize) -> Vec<Label> {
        (0..n).map(|_| self.next()).collect()
    }
}

/// A proof paired with labels for its conclusion formulas.
#[derive(Clone, Debug)]
struct Lp {
    proof: Proof,
    labels: Vec<Label>,
}

fn pos(labels: &[Label], l: Label) -> usize {
    labels.iter().position(|&x| x == l).expect("label present")
}

impl Lp {
    fn bring_last(self, l: Label) -> Lp {
        let perm = move_to_end(self.labels.len(), pos(&self.labels, l));
        let labels = perm.iter().map(|&k| self.labels[k]).collect();
        Lp { proof: with_ex(self.proof, perm), labels }
    }

    fn arrange(self, target: &[Label]) -> Proof {
        let perm: Vec<usize> = target.iter().map(|&l| pos(&self.labels, l)).collect();
        with_ex(self.proof, perm)
    }

    fn relabel(mut self, from: Label, to: Label) -> Lp {
        let k = pos(&self.labels, from);
        self.labels[k] = to;
        self
    }
}

fn b_cut(a: Lp, la: Label, b: Lp, lb: Label) -> Lp {
    let a = a.bring_last(la);
    let b = b.bring_last(lb);
    let mut labels = a.labels[..a.labels.len() - 1].to_vec();
    labels.extend_from_slice(&b.labels[..b.labels.len() - 1]);
    Lp { proof: Proof::cut(a.proof, b.proof), labels }
}

fn b_tensor(a: Lp, la: Label, b: Lp, lb: Label, new: Label) -> Lp {
    let a = a.bring_last(la);
    let b = b.bring_last(lb);
    let mut labels = a.labels[..a.labels.len() - 1].to_vec();
    labels.extend_from_slice(&b.labels[..b.labels.len() - 1]);
    labels.push(new);
    Lp { proof: Proof::tensor(a.proof, b.proof), labels }
}

fn b_par(a: Lp, li: Label, lj: Label, new: Label) -> Lp {
    let (i, j) = (pos(&a.labels, li), pos(&a.labels, lj));
    let at = i.min(j);
    let mut labels = Vec::with_capacity(a.labels.len() - 1);
    for (k, &l) in a.labels.iter().enumerate() {
        if k == at {
            labels.push(new);
        } else if k != i && k != j {
            labels.push(l);
        }
    }
    Lp { proof: Proof::par(a.proof, i, j), labels }
}

fn b_down(a: Lp, l: Label, new: Label) -> Lp {
    let i = pos(&a.labels, l);
    let mut labels = a.labels;
    labels[i] = new;
    Lp { proof: Proof::down(a.proof, i), labels }
}

fn b_up(a: Lp, l: Label, new: Label) -> Lp {
    let i = pos(&a.labels, l);
    let mut labels = a.labels;
    labels[i] = new;
    Lp { proof: Proof::up(a.proof, i), labels }
}

/// Conclusion length, computed without building formulas.
pub fn gamma_len(p: &Proof) -> usize {
    match p {
        Proof::Ax(_) => 2,
        Proof::Tensor(a, b) => gamma_len(a) + gamma_len(b) - 1,
        Proof::Par(a, ..) => gamma_len(a) - 1,
        Proof::Down(a, _) | Proof::Up(a, _) | Proof::Ex(a, _) => gamma_len(a),
        Proof::Cut(a, b) => gamma_len(a) + gamma_len(b) - 2,
    }
}

/// The last logical rule of a labelled proof, looking through exchanges.
enum View {
    Ax { labels: Vec<Label> },
    Tensor { a: Lp, la: Label, b: Lp, lb: Label, principal: Label },
    Par { q: Lp, li: Label, lj: Label, principal: Label },
    Down { q: Lp, l: Label, principal: Label },
    Up { q: Lp, l: Label, principal: Label },
    Cut { a: Lp, ca: Label, b: Lp, cb: Label },
}

impl View {
    fn principal(&self) -> Option<Label> {
        match self {
            View::Ax { .. } | View::Cut { .. } => None,
            View::Tensor { principal, .. }
            | View::Par { principal, .. }
            | View::Down { principal, .. }
            | View::Up { principal, .. } => Some(*principal),
        }
    }

    fn rule(&self) -> RuleName {
        match self {
            View::Ax { .. } => RuleName::Ax,
            View::Tensor { .. } => RuleName::Tensor,
            View::Par { .. } => RuleName::Par,
            View::Down { .. } => RuleName::Down,
            View::Up { .. } => RuleName::Up,
            View::Cut { .. } => RuleName::Cut,
        }
    }

    fn is_principal(&self, l: Label) -> bool {
        match self {
            View::Ax { labels } => labels.contains(&l),
            v => v.principal() == Some(l),
        }
    }
}

fn view(p: &Proof, labels: Vec<Label>, fresh: &mut Fresh) -> View {
    let mut p = p;
    let mut labels = labels;
    while let Proof::Ex(q, perm) = p {
        let mut inner = vec![0; labels.len()];
        for (k, &src) in perm.iter().enumerate() {
            inner[src] = labels[k];
        }
        labels = inner;
        p = q;
    }
    match p {
        Proof::Ax(_) => View::Ax { labels },
        Proof::Tensor(a, b) => {
            let na = gamma_len(a) - 1;
            let (la, lb) = (fresh.next(), fresh.next());
            let mut al = labels[..na].to_vec();
            al.push(la);
            let mut bl = labels[na..labels.len() - 1].to_vec();
            bl.push(lb);
            View::Tensor {
                a: Lp { proof: (**a).clone(), labels: al },
                la,
                b: Lp { proof: (**b).clone(), labels: bl },
                lb,
                principal: *labels.last().unwrap(),
            }
        }
        Proof::Par(q, i, j) => {
            let (i, j) = (*i, *j);
            let at = i.min(j);
            let principal = labels[at];
            let (li, lj) = (fresh.next(), fresh.next());
            let n = labels.len() + 1;
            let mut rest = labels.iter().enumerate().filter(|&(k, _)| k != at).map(|(_, &l)| l);
            let mut ql = Vec::with_capacity(n);
            for k in 0..n {
                if k == i {
                    ql.push(li);
                } else if k == j {
                    ql.push(lj);
                } else {
                    ql.push(rest.next().unwrap());
                }
            }
            View::Par { q: Lp { proof: (**q).clone(), labels: ql }, li, lj, principal }
        }
        Proof::Down(q, i) | Proof::Up(q, i) => {
            let l = fresh.next();
            let principal = labels[*i];
            let mut ql = labels;
            ql[*i] = l;
            let q = Lp { proof: (**q).clone(), labels: ql };
            if matches!(p, Proof::Down(..)) {
                View::Down { q, l, principal }
            } else {
                View::Up { q, l, principal }
            }
        }
        Proof::Cut(a, b) => {
            let na = gamma_len(a) - 1;
            let (ca, cb) = (fresh.next(), fresh.next());
            let mut al = labels[..na].to_vec();
            al.push(ca);
            let mut bl = labels[na..].to_vec();
            bl.push(cb);
            View::Cut {
                a: Lp { proof: (**a).clone(), labels: al },
                ca,
                b: Lp { proof: (**b).clone(), labels: bl },
                cb,
            }
        }
        Proof::Ex(..) => unreachable!("exchanges stripped above"),
    }
}

struct CutParts {
    v1: View,
    v2: View,
    c1: Label,
    c2: Label,
    target: Vec<Label>,
    fresh: Fresh,
    p1: Lp,
    p2: Lp,
}

fn split_cut(p: &Proof) -> Option<CutParts> {
    let Proof::Cut(a, b) = p else { return None };
    let mut fresh = Fresh::default();
    let l1 = fresh.many(gamma_len(a));
    let l2 = fresh.many(gamma_len(b));
    let (c1, c2) = (*l1.last().unwrap(), *l2.last().unwrap());
    let mut target = l1[..l1.len() - 1].to_vec();
    target.extend_from_slice(&l2[..l2.len() - 1]);
    let v1 = view(a, l1.clone(), &mut fresh);
    let v2 = view(b, l2.clone(), &mut fresh);
    let p1 = Lp { proof: (**a).clone(), labels: l1 };
    let p2 = Lp { proof: (**b).clone(), labels: l2 };
    Some(CutParts { v1, v2, c1, c2, target, fresh, p1, p2 })
}

fn classify_parts(c: &CutParts) -> RedexKind {
    if matches!(c.v1, View::Ax { .. }) || matches!(c.v2, View::Ax { .. }) {
        return RedexKind::AxCut;
    }
    let (pr1, pr2) = (c.v1.is_principal(c.c1), c.v2.is_principal(c.c2));
    if pr1 && pr2 {
        return match (c.v1.rule(), c.v2.rule()) {
            (RuleName::Up, RuleName::Down) | (RuleName::Down, RuleName::Up) => RedexKind::UpDown,
            _ => RedexKind::TensorPar,
        };
    }
    if !pr1 {
        if c.v1.rule() == RuleName::Down {
            RedexKind::BoxExtrusion
        } else {
            RedexKind::CommuteLeft(c.v1.rule())
        }
    } else if c.v2.rule() == RuleName::Down {
        RedexKind::BoxExtrusion
    } else {
        RedexKind::CommuteRight(c.v2.rule())
    }
}

/// Classifies the cut at the root of `p`.
pub fn classify(p: &Proof) -> Option<RedexKind> {
    split_cut(p).map(|c| classify_parts(&c))
}

/// Every cut node of `p` in preorder, each with its reduction shape.
pub fn reducible_cuts(p: &Proof) -> Vec<Redex> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect(p, &mut path, &mut out);
    out
}

fn collect(p: &Proof, path: &mut Vec<usize>, out: &mut Vec<Redex>) {
    if let Some(kind) = classify(p) {
        out.push(Redex { path: path.clone(), kind });
    }
    for (k, q) in p.premises().into_iter().enumerate() {
        path.push(k);
        collect(q, path, out);
        path.pop();
    }
}

/// Rewrites the root cut of `p`.
fn reduce_root(p: &Proof) -> Option<(RedexKind, Proof)> {
    let parts = split_cut(p)?;
    let kind = classify_parts(&parts);
    let CutParts { v1, v2, c1, c2, target, mut fresh, p1, p2 } = parts;
    let result: Lp = match kind {
        RedexKind::AxCut => {
            if let View::Ax { labels } = &v1 {
                let other = if labels[0] == c1 { labels[1] } else { labels[0] };
                p2.relabel(c2, other)
            } else if let View::Ax { labels } = &v2 {
                let other = if labels[0] == c2 { labels[1] } else { labels[0] };
                p1.relabel(c1, other)
            } else {
                unreachable!()
            }
        }
        RedexKind::TensorPar => {
            let (t, par) = if v1.rule() == RuleName::Tensor { (v1, v2) } else { (v2, v1) };
            let (View::Tensor { a, la, b, lb, .. }, View::Par { q, li, lj, .. }) = (t, par) else {
                return None;
            };
            let t = b_cut(a, la, q, li);
            b_cut(b, lb, t, lj)
        }
        RedexKind::UpDown => {
            let (up, down) = if v1.rule() == RuleName::Up { (v1, v2) } else { (v2, v1) };
            let (View::Up { q: q1, l: l1, .. }, View::Down { q: q2, l: l2, .. }) = (up, down) else {
                return None;
            };
            b_cut(q1, l1, q2, l2)
        }
        RedexKind::BoxExtrusion => {
            let left = !v1.is_principal(c1) && v1.rule() == RuleName::Down;
            if left {
                let View::Down { q, l, principal } = v1 else { unreachable!() };
                b_down(b_cut(q, c1, p2, c2), l, principal)
            } else {
                let View::Down { q, l, principal } = v2 else { unreachable!() };
                b_down(b_cut(p1, c1, q, c2), l, principal)
            }
        }
        RedexKind::CommuteLeft(_) => commute(v1, c1, true, p2, c2, &mut fresh),
        RedexKind::CommuteRight(_) => commute(v2, c2, false, p1, c1, &mut fresh),
    };
    Some((kind, result.arrange(&target)))
}

/// Pushes the cut against `other` above the last rule of `v`. `v_first`
/// records whether `v`'s side is the first premise of the cut.
fn commute(v: View, c: Label, v_first: bool, other: Lp, co: Label, _fresh: &mut Fresh) -> Lp {
    let cut = |inner: Lp| if v_first { b_cut(inner, c, other.clone(), co) } else { b_cut(other.clone(), co, inner, c) };
    match v {
        View::Par { q, li, lj, principal } => b_par(cut(q), li, lj, principal),
        View::Up { q, l, principal } => b_up(cut(q), l, principal),
        View::Tensor { a, la, b, lb, principal } => {
            if a.labels.contains(&c) {
                b_tensor(cut(a), la, b, lb, principal)
            } else {
                b_tensor(a, la, cut(b), lb, principal)
            }
        }
        View::Cut { a, ca, b, cb } => {
            if a.labels.contains(&c) {
                b_cut(cut(a), ca, b, cb)
            } else {
                b_cut(a, ca, cut(b), cb)
            }
        }
        View::Down { q, l, principal } => b_down(cut(q), l, principal),
        View::Ax { .. } => unreachable!("axioms are always principal"),
    }
}

/// Applies one reduction at the cut addressed by `r`.
pub fn step(p: &Proof, r: &Redex) -> Result<Proof, CutElimError> {
    let invalid = || CutElimError::InvalidRedex { path: r.path.clone(), kind: r.kind };
    let node = p.at(&r.path).ok_or_else(invalid)?;
    let (kind, new) = reduce_root(node).ok_or_else(invalid)?;
    if kind != r.kind {
        return Err(invalid());
    }
    p.replace_at(&r.path, new).ok_or_else(invalid)
}

pub fn choose(p: &Proof, strategy: Strategy) -> Option<Redex> {
    let redexes = reducible_cuts(p);
    match strategy {
        Strategy::Leftmost => redexes.into_iter().find(|r| {
            !matches!(r.kind, RedexKind::CommuteLeft(RuleName::Cut) | RedexKind::CommuteRight(RuleName::Cut))
        }),
        Strategy::Innermost => redexes.into_iter().find(|r| {
            let node = p.at(&r.path).unwrap();
            node.premises().iter().all(|q| q.cut_count() == 0)
        }),
    }
}

pub fn default_step_limit(p: &Proof) -> usize {
    let n = p.rule_count().max(2);
    4 * n * n
}

/// Reduces to cut-free form, recording each redex and the proof after it.
pub fn normalize(p: &Proof, strategy: Strategy) -> Result<(Proof, Vec<(Redex, Proof)>), CutElimError> {
    normalize_with_limit(p, strategy, default_step_limit(p))
}

pub fn normalize_with_limit(
    p: &Proof,
    strategy: Strategy,
    limit: usize,
) -> Result<(Proof, Vec<(Redex, Proof)>), CutElimError> {
    check(p)?;
    let mut cur = p.clone();
    let mut trace = Vec::new();
    while let Some(r) = choose(&cur, strategy) {
        if trace.len() >= limit {
            return Err(CutElimError::StepLimitExceeded { limit });
        }
        cur = step(&cur, &r)?;
        trace.push((r, cur.clone()));
    }
    Ok((cur, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::proof::enumerate_proofs;

    fn x_ax() -> Proof {
        Proof::ax(Formula::neg_atom("X"))
    }

    #[test]
    fn cut_free_has_no_redex() {
        let p = Proof::down(Proof::up(x_ax(), 1), 0);
        assert!(reducible_cuts(&p).is_empty());
        let (nf, tr) = normalize(&p, Strategy::Leftmost).unwrap();
        assert_eq!(nf, p);
        assert!(tr.is_empty());
    }

    #[test]
    fn axiom_cut_erases_axiom() {
        let q = Proof::down(Proof::up(x_ax(), 1), 0);
        let ax = Proof::ax(Formula::parse("up X").unwrap());
        let p = Proof::cut(q.clone(), ax);
        let rs = reducible_cuts(&p);
        assert_eq!(rs, vec![Redex { path: vec![], kind: RedexKind::AxCut }]);
        let out = step(&p, &rs[0]).unwrap();
        assert_eq!(check(&out).unwrap().gamma, check(&p).unwrap().gamma);
        assert_eq!(out, q);
    }

    #[test]
    fn subject_reduction_on_enumeration() {
        for p in enumerate_proofs(7, &["X", "Y"]) {
            let s = check(&p).unwrap();
            for strat in [Strategy::Leftmost, Strategy::Innermost] {
                let (nf, trace) = normalize(&p, strat).unwrap();
                assert_eq!(nf.cut_count(), 0);
                for (_, q) in &trace {
                    assert_eq!(check(q).unwrap().gamma, s.gamma, "{p}");
                }
            }
        }
    }

    #[test]
    fn every_cut_is_classified() {
        for p in enumerate_proofs(6, &["X", "Y"]) {
            assert_eq!(reducible_cuts(&p).len(), p.cut_count());
            for r in reducible_cuts(&p) {
                assert!(step(&p, &r).is_ok(), "{p} {r:?}");
            }
        }
    }
}
