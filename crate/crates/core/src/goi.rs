//! Two-layered interpretation of proofs: an upper endomorphism on the
//! unfolded `U` wires of a sequent and a lower one on its `1` wires.

use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Pretty};
use crate::proof::{check, invert_perm, Proof, ProofError, Sequent};
use crate::relcore::{BlockRel, Entry, RelError, RelModel, WireType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoiError {
    #[error("units are not interpreted: {0}")]
    UnitUnsupported(String),
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error(transparent)]
    Rel(#[from] RelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum Mode {
    /// Relations, with maximal `r`/`!` on the singleton.
    #[default]
    Rel,
    /// Partial injections: the `↓` case adds no cross entries.
    PInjDegenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LeafTag {
    /// Part of `A^U`, paired with a `1` leaf.
    InAU,
    /// Part of `A^D`.
    InAD,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LeafRole {
    Literal,
    ShiftDown,
    ShiftUp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Leaf {
    pub tag: LeafTag,
    pub role: LeafRole,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeInfo {
    pub formula: String,
    /// Number of `1` leaves.
    pub one_leaves: usize,
    pub u_layout: Vec<Leaf>,
    /// `au_to_one[k]` is the `U` leaf paired with `1` leaf `k`.
    pub au_to_one: Vec<usize>,
}

fn unit_error(f: &Formula) -> GoiError {
    GoiError::UnitUnsupported(Pretty(f).to_string())
}

fn leaves(f: &Formula, out: &mut Vec<Leaf>) -> Result<(), GoiError> {
    match f {
        Formula::Atom(_) | Formula::NegAtom(_) => out.push(Leaf { tag: LeafTag::InAU, role: LeafRole::Literal }),
        Formula::One | Formula::Bot => return Err(unit_error(f)),
        Formula::Tensor(a, b) | Formula::Par(a, b) => {
            leaves(a, out)?;
            leaves(b, out)?;
        }
        Formula::Down(n) => {
            out.push(Leaf { tag: LeafTag::InAU, role: LeafRole::ShiftDown });
            let start = out.len();
            leaves(n, out)?;
            out[start..].iter_mut().for_each(|l| l.tag = LeafTag::InAD);
        }
        Formula::Up(p) => {
            let start = out.len();
            leaves(p, out)?;
            out[start..].iter_mut().for_each(|l| l.tag = LeafTag::InAD);
            out.push(Leaf { tag: LeafTag::InAU, role: LeafRole::ShiftUp });
        }
    }
    Ok(())
}

pub fn shape(a: &Formula) -> Result<ShapeInfo, GoiError> {
    let mut u_layout = Vec::new();
    leaves(a, &mut u_layout)?;
    let au_to_one: Vec<usize> = (0..u_layout.len()).filter(|&k| u_layout[k].tag == LeafTag::InAU).collect();
    Ok(ShapeInfo { formula: Pretty(a).to_string(), one_leaves: au_to_one.len(), u_layout, au_to_one })
}

/// `(|Ū_A|, |𝟙_A|)`; units count as nothing and are rejected up front.
fn sizes(f: &Formula) -> (usize, usize) {
    match f {
        Formula::Atom(_) | Formula::NegAtom(_) => (1, 1),
        Formula::One | Formula::Bot => (0, 0),
        Formula::Tensor(a, b) | Formula::Par(a, b) => {
            let (x, y) = (sizes(a), sizes(b));
            (x.0 + y.0, x.1 + y.1)
        }
        Formula::Down(g) | Formula::Up(g) => (sizes(g).0 + 1, 1),
    }
}

fn au_mask(f: &Formula, top: bool, out: &mut Vec<bool>) {
    match f {
        Formula::Atom(_) | Formula::NegAtom(_) => out.push(top),
        Formula::One | Formula::Bot => {}
        Formula::Tensor(a, b) | Formula::Par(a, b) => {
            au_mask(a, top, out);
            au_mask(b, top, out);
        }
        Formula::Down(n) => {
            out.push(top);
            au_mask(n, false, out);
        }
        Formula::Up(p) => {
            au_mask(p, false, out);
            out.push(top);
        }
    }
}

/// Structural pairing of `U` leaves: leaf `k` of `Ū_A` meets leaf
/// `pairing(A)[k]` of `Ū_{A⊥}`.
pub fn pairing(a: &Formula) -> Vec<usize> {
    match a {
        Formula::Atom(_) | Formula::NegAtom(_) => vec![0],
        Formula::One | Formula::Bot => vec![],
        Formula::Tensor(p, q) | Formula::Par(p, q) => {
            let shift = sizes(p).0;
            let mut out = pairing(p);
            out.extend(pairing(q).into_iter().map(|k| k + shift));
            out
        }
        Formula::Down(n) => {
            // Ū_{↓N} = U_↓ ⊗ Ū_N against Ū_{↑N⊥} = Ū_{N⊥} ⊗ U_↑.
            let inner = pairing(n);
            let mut out = vec![inner.len()];
            out.extend(inner);
            out
        }
        Formula::Up(p) => {
            let inner = pairing(p);
            let mut out: Vec<usize> = inner.into_iter().map(|k| k + 1).collect();
            out.push(0);
            out
        }
    }
}

/// `mp(A): 𝟙_A → Ū_A`.
pub fn mp(a: &Formula) -> Result<BlockRel, GoiError> {
    let s = shape(a)?;
    let mut r = BlockRel::zero(&vec![WireType::One; s.one_leaves], &vec![WireType::U; s.u_layout.len()]);
    for (k, &leaf) in s.au_to_one.iter().enumerate() {
        r.set(leaf, k, Entry::Point);
    }
    Ok(r)
}

/// `(r_A, !_A)` between `A^U ≅ U^m` and `A^U ⊗ 𝟙_A ≅ U^m ⊗ 1^m`.
pub fn retraction_ra(a: &Formula) -> Result<(BlockRel, BlockRel), GoiError> {
    let m = shape(a)?.one_leaves;
    let au = vec![WireType::U; m];
    let mut cod = au.clone();
    cod.extend(vec![WireType::One; m]);
    let mut r = BlockRel::zero(&au, &cod);
    for k in 0..m {
        r.set(k, k, Entry::Id);
        r.set(m + k, k, Entry::Point);
    }
    let bang = r.transpose();
    Ok((r, bang))
}

/// Where a formula occurrence of a sequent lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Place {
    Gamma(usize),
    /// Cut pair index and side (0 for `A`, 1 for `A⊥`).
    Delta(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub formula: String,
    pub place: Place,
    pub upper: Range<usize>,
    pub lower: Range<usize>,
}

/// Wire spans of each occurrence: `gamma` first, then the flattened cut
/// pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Layout {
    pub occurrences: Vec<Occurrence>,
    pub upper_wires: usize,
    pub lower_wires: usize,
}

impl Layout {
    pub fn of(s: &Sequent) -> Layout {
        let places = (0..s.gamma.len())
            .map(Place::Gamma)
            .chain((0..s.delta.len()).flat_map(|d| [Place::Delta(d, 0), Place::Delta(d, 1)]));
        let formulas = s.gamma.iter().chain(s.delta.iter().flat_map(|(a, b)| [a, b]));
        let (mut u, mut l) = (0, 0);
        let mut occurrences = Vec::new();
        for (place, f) in places.zip(formulas) {
            let (du, dl) = sizes(f);
            occurrences.push(Occurrence { formula: Pretty(f).to_string(), place, upper: u..u + du, lower: l..l + dl });
            u += du;
            l += dl;
        }
        Layout { occurrences, upper_wires: u, lower_wires: l }
    }

    pub fn gamma_spans(&self) -> impl Iterator<Item = &Occurrence> {
        self.occurrences.iter().filter(|o| matches!(o.place, Place::Gamma(_)))
    }

    pub fn gamma_upper(&self) -> usize {
        self.gamma_spans().map(|o| o.upper.len()).sum()
    }

    pub fn gamma_lower(&self) -> usize {
        self.gamma_spans().map(|o| o.lower.len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpPair {
    pub upper: BlockRel,
    pub lower: BlockRel,
    pub sequent: Sequent,
    pub layout: Layout,
}

impl InterpPair {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sequent": self.sequent.to_string(),
            "upper": self.upper.to_json(),
            "lower": self.lower.to_json(),
            "layout": self.layout,
        })
    }
}

/// Origin of a result wire: a premise wire or a fresh one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Src {
    C(usize, usize),
    New,
}

/// One rule application: the conclusion plus how each wire of each layer
/// arises from the premises.
struct Wiring {
    seq: Sequent,
    upper: Vec<Src>,
    lower: Vec<Src>,
    /// For `↓`: premise upper wires in `M^U` and premise lower wires of `𝟙_M`.
    down: Option<(Vec<usize>, Vec<usize>)>,
}

fn occ_count(s: &Sequent) -> usize {
    s.gamma.len() + 2 * s.delta.len()
}

fn delta_occs(s: &Sequent) -> Range<usize> {
    s.gamma.len()..occ_count(s)
}

/// Builds wire sources from a list of `(premise, occurrence)` groups; each
/// group becomes one result occurrence.
fn wire(layouts: &[Layout], groups: &[Vec<(usize, usize)>]) -> (Vec<Src>, Vec<Src>) {
    let (mut up, mut lo) = (Vec::new(), Vec::new());
    for g in groups {
        for &(c, o) in g {
            let occ = &layouts[c].occurrences[o];
            up.extend(occ.upper.clone().map(|w| Src::C(c, w)));
            lo.extend(occ.lower.clone().map(|w| Src::C(c, w)));
        }
    }
    (up, lo)
}

fn rule_wiring(p: &Proof, seqs: &[&Sequent], layouts: &[Layout]) -> Wiring {
    let single = |c: usize, r: Range<usize>| r.map(move |o| vec![(c, o)]);
    match p {
        Proof::Ax(_) => unreachable!("axioms are interpreted directly"),
        Proof::Cut(..) => {
            let (a, b) = (seqs[0], seqs[1]);
            let (na, nb) = (a.gamma.len(), b.gamma.len());
            let groups: Vec<Vec<(usize, usize)>> = single(0, 0..na - 1)
                .chain(single(1, 0..nb - 1))
                .chain(single(0, delta_occs(a)))
                .chain(single(1, delta_occs(b)))
                .chain([vec![(0, na - 1)], vec![(1, nb - 1)]])
                .collect();
            let cut = a.gamma[na - 1].clone();
            let mut gamma = a.gamma[..na - 1].to_vec();
            gamma.extend_from_slice(&b.gamma[..nb - 1]);
            let mut delta = a.delta.clone();
            delta.extend(b.delta.iter().cloned());
            delta.push((cut, b.gamma[nb - 1].clone()));
            let (upper, lower) = wire(layouts, &groups);
            Wiring { seq: Sequent { gamma, delta }, upper, lower, down: None }
        }
        Proof::Tensor(..) => {
            let (a, b) = (seqs[0], seqs[1]);
            let (na, nb) = (a.gamma.len(), b.gamma.len());
            let groups: Vec<Vec<(usize, usize)>> = single(0, 0..na - 1)
                .chain(single(1, 0..nb - 1))
                .chain([vec![(0, na - 1), (1, nb - 1)]])
                .chain(single(0, delta_occs(a)))
                .chain(single(1, delta_occs(b)))
                .collect();
            let mut gamma = a.gamma[..na - 1].to_vec();
            gamma.extend_from_slice(&b.gamma[..nb - 1]);
            gamma.push(Formula::tensor(a.gamma[na - 1].clone(), b.gamma[nb - 1].clone()));
            let mut delta = a.delta.clone();
            delta.extend(b.delta.iter().cloned());
            let (upper, lower) = wire(layouts, &groups);
            Wiring { seq: Sequent { gamma, delta }, upper, lower, down: None }
        }
        Proof::Par(_, i, j) => {
            let a = seqs[0];
            let (i, j) = (*i, *j);
            let at = i.min(j);
            let mut groups = Vec::new();
            let mut gamma = Vec::new();
            for k in 0..a.gamma.len() {
                if k == at {
                    groups.push(vec![(0, i), (0, j)]);
                    gamma.push(Formula::par(a.gamma[i].clone(), a.gamma[j].clone()));
                } else if k != i && k != j {
                    groups.push(vec![(0, k)]);
                    gamma.push(a.gamma[k].clone());
                }
            }
            groups.extend(single(0, delta_occs(a)));
            let (upper, lower) = wire(layouts, &groups);
            Wiring { seq: Sequent { gamma, delta: a.delta.clone() }, upper, lower, down: None }
        }
        Proof::Ex(_, perm) => {
            let a = seqs[0];
            let groups: Vec<Vec<(usize, usize)>> =
                perm.iter().map(|&k| vec![(0, k)]).chain(single(0, delta_occs(a))).collect();
            let gamma = perm.iter().map(|&k| a.gamma[k].clone()).collect();
            let (upper, lower) = wire(layouts, &groups);
            Wiring { seq: Sequent { gamma, delta: a.delta.clone() }, upper, lower, down: None }
        }
        Proof::Up(_, i) | Proof::Down(_, i) => {
            let a = seqs[0];
            let lay = &layouts[0];
            let i = *i;
            let is_down = matches!(p, Proof::Down(..));
            let (mut upper, mut lower) = (Vec::new(), Vec::new());
            for (o, occ) in lay.occurrences.iter().enumerate() {
                let old_u = occ.upper.clone().map(|w| Src::C(0, w));
                if o == i {
                    if is_down {
                        upper.push(Src::New);
                        upper.extend(old_u);
                    } else {
                        upper.extend(old_u);
                        upper.push(Src::New);
                    }
                    lower.push(Src::New);
                } else {
                    upper.extend(old_u);
                    lower.extend(occ.lower.clone().map(|w| Src::C(0, w)));
                }
            }
            let mut gamma = a.gamma.clone();
            gamma[i] = if is_down { Formula::down(a.gamma[i].clone()) } else { Formula::up(a.gamma[i].clone()) };
            let down = is_down.then(|| {
                let mut mu = Vec::new();
                let mut one_m = Vec::new();
                for (o, f) in a.gamma.iter().enumerate() {
                    if o == i {
                        continue;
                    }
                    let occ = &lay.occurrences[o];
                    let mut mask = Vec::new();
                    au_mask(f, true, &mut mask);
                    mu.extend(occ.upper.clone().zip(mask).filter(|&(_, b)| b).map(|(w, _)| w));
                    one_m.extend(occ.lower.clone());
                }
                (mu, one_m)
            });
            Wiring { seq: Sequent { gamma, delta: a.delta.clone() }, upper, lower, down }
        }
    }
}

fn assemble(children: &[&BlockRel], srcs: &[Src], ty: WireType) -> BlockRel {
    let iface = vec![ty; srcs.len()];
    let mut out = BlockRel::zero(&iface, &iface);
    for (i, si) in srcs.iter().enumerate() {
        let Src::C(c1, w1) = *si else { continue };
        for (j, sj) in srcs.iter().enumerate() {
            if let Src::C(c2, w2) = *sj {
                if c1 == c2 {
                    let e = children[c1].get(w1, w2);
                    if e != Entry::Zero {
                        out.set(i, j, e);
                    }
                }
            }
        }
    }
    out
}

fn axiom_perms(n: &Formula) -> (Vec<usize>, Vec<usize>) {
    let pair = pairing(n);
    let (u, m) = sizes(n);
    let inv = invert_perm(&pair);
    let upper: Vec<usize> = (0..u).map(|k| u + pair[k]).chain((0..u).map(|j| inv[j])).collect();
    let lower: Vec<usize> = (0..m).map(|k| m + k).chain(0..m).collect();
    (upper, lower)
}

fn reject_units(s: &Sequent) -> Result<(), GoiError> {
    for f in s.gamma.iter().chain(s.delta.iter().flat_map(|(a, b)| [a, b])) {
        if f.contains_unit() {
            return Err(unit_error(f));
        }
    }
    Ok(())
}

struct Node {
    seq: Sequent,
    layout: Layout,
    upper: BlockRel,
    lower: BlockRel,
}

fn interp_node(p: &Proof, mode: Mode) -> Node {
    if let Proof::Ax(n) = p {
        let seq = Sequent { gamma: vec![n.clone(), n.negate()], delta: vec![] };
        let (pu, pl) = axiom_perms(n);
        let upper = BlockRel::perm(&vec![WireType::U; pu.len()], &pu);
        let lower = BlockRel::perm(&vec![WireType::One; pl.len()], &pl);
        return Node { layout: Layout::of(&seq), seq, upper, lower };
    }
    let kids: Vec<Node> = p.premises().into_iter().map(|q| interp_node(q, mode)).collect();
    let seqs: Vec<&Sequent> = kids.iter().map(|k| &k.seq).collect();
    let layouts: Vec<Layout> = kids.iter().map(|k| k.layout.clone()).collect();
    let w = rule_wiring(p, &seqs, &layouts);
    let ups: Vec<&BlockRel> = kids.iter().map(|k| &k.upper).collect();
    let los: Vec<&BlockRel> = kids.iter().map(|k| &k.lower).collect();
    let mut upper = assemble(&ups, &w.upper, WireType::U);
    let mut lower = assemble(&los, &w.lower, WireType::One);
    if let (Some((mu, one_m)), Mode::Rel) = (&w.down, mode) {
        let top_u = w.upper.iter().position(|&s| s == Src::New).unwrap();
        for (r, s) in w.upper.iter().enumerate() {
            if matches!(s, Src::C(0, x) if mu.contains(x)) {
                upper.set(top_u, r, Entry::Point);
                upper.set(r, top_u, Entry::Point);
            }
        }
        let top_l = w.lower.iter().position(|&s| s == Src::New).unwrap();
        for (r, s) in w.lower.iter().enumerate() {
            if matches!(s, Src::C(0, x) if one_m.contains(x)) {
                lower.set(top_l, r, Entry::Id);
                lower.set(r, top_l, Entry::Id);
            }
        }
    }
    Node { layout: Layout::of(&w.seq), seq: w.seq, upper, lower }
}

/// Interprets a checked proof directly on entry matrices.
pub fn interp(p: &Proof, mode: Mode) -> Result<InterpPair, GoiError> {
    let s = check(p)?;
    reject_units(&s)?;
    let n = interp_node(p, mode);
    debug_assert_eq!(n.seq, s);
    Ok(InterpPair { upper: n.upper, lower: n.lower, sequent: n.seq, layout: n.layout })
}

/// Wire labels used to match the retraction stages of the `↓` case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Lbl {
    One,
    Old(usize),
    Extra(usize),
}

/// `tensor_all(maps)` followed by a reordering of its outputs to `target`.
fn regroup<M: RelModel>(model: &M, groups: Vec<(M::Rel, Vec<Lbl>)>, target: &[Lbl]) -> M::Rel {
    let labels: Vec<Lbl> = groups.iter().flat_map(|g| g.1.clone()).collect();
    let maps: Vec<M::Rel> = groups.into_iter().map(|g| g.0).collect();
    let t = model.tensor_all(&maps);
    let sigma: Vec<usize> = target.iter().map(|l| labels.iter().position(|x| x == l).unwrap()).collect();
    let p = model.perm(model.cod_of(&t), &sigma);
    model.compose(&p, &t).expect("regroup shapes")
}

/// A reordering of `source` inputs followed by `tensor_all(maps)`.
fn ungroup<M: RelModel>(model: &M, source: &[Lbl], src_types: &[WireType], groups: Vec<(M::Rel, Vec<Lbl>)>) -> M::Rel {
    let labels: Vec<Lbl> = groups.iter().flat_map(|g| g.1.clone()).collect();
    let maps: Vec<M::Rel> = groups.into_iter().map(|g| g.0).collect();
    let t = model.tensor_all(&maps);
    let sigma: Vec<usize> = labels.iter().map(|l| source.iter().position(|x| x == l).unwrap()).collect();
    let p = model.perm(src_types, &sigma);
    model.compose(&t, &p).expect("ungroup shapes")
}

/// `perm(σ) ∘ x ∘ perm(σ)⁻¹`, where result wire `k` is wire `σ[k]` of `x`.
fn conj<M: RelModel>(model: &M, x: &M::Rel, sigma: &[usize]) -> M::Rel {
    let dom = model.dom_of(x).to_vec();
    let new: Vec<WireType> = sigma.iter().map(|&s| dom[s]).collect();
    let fwd = model.perm(&dom, sigma);
    let back = model.perm(&new, &invert_perm(sigma));
    model.compose(&fwd, &model.compose(x, &back).unwrap()).unwrap()
}

fn flat_index(srcs: &[Src], offsets: &[usize], new_at: usize) -> Vec<usize> {
    srcs.iter()
        .map(|s| match s {
            Src::C(c, w) => offsets[*c] + w,
            Src::New => new_at,
        })
        .collect()
}

struct LitNode<R> {
    seq: Sequent,
    layout: Layout,
    upper: R,
    lower: R,
}

fn literal_node<M: RelModel>(model: &M, p: &Proof, mode: Mode) -> LitNode<M::Rel> {
    const U: WireType = WireType::U;
    const ONE: WireType = WireType::One;
    if let Proof::Ax(n) = p {
        let seq = Sequent { gamma: vec![n.clone(), n.negate()], delta: vec![] };
        let (pu, pl) = axiom_perms(n);
        let upper = model.perm(&vec![U; pu.len()], &pu);
        let lower = model.perm(&vec![ONE; pl.len()], &pl);
        return LitNode { layout: Layout::of(&seq), seq, upper, lower };
    }
    let kids: Vec<LitNode<M::Rel>> = p.premises().into_iter().map(|q| literal_node(model, q, mode)).collect();
    let seqs: Vec<&Sequent> = kids.iter().map(|k| &k.seq).collect();
    let layouts: Vec<Layout> = kids.iter().map(|k| k.layout.clone()).collect();
    let w = rule_wiring(p, &seqs, &layouts);

    let (upper, lower) = match p {
        Proof::Cut(..) | Proof::Tensor(..) | Proof::Par(..) | Proof::Ex(..) => {
            let layer = |get: &dyn Fn(&LitNode<M::Rel>) -> &M::Rel, srcs: &[Src]| {
                let mut offs = Vec::new();
                let mut acc = 0;
                for k in &kids {
                    offs.push(acc);
                    acc += model.dom_of(get(k)).len();
                }
                let parts: Vec<M::Rel> = kids.iter().map(|k| get(k).clone()).collect();
                conj(model, &model.tensor_all(&parts), &flat_index(srcs, &offs, usize::MAX))
            };
            (layer(&|k| &k.upper, &w.upper), layer(&|k| &k.lower, &w.lower))
        }
        Proof::Up(..) => {
            let x = &kids[0].upper;
            let n = model.dom_of(x).len();
            let big = model.tensor(x, &model.zero(&[U], &[U]));
            let upper = conj(model, &big, &flat_index(&w.upper, &[0], n));
            // Cut the 𝟙_P wires out of the lower layer, then add the fresh wire.
            let f = &kids[0].lower;
            let iface = model.dom_of(f).to_vec();
            let kept: Vec<usize> = w.lower.iter().filter_map(|s| if let Src::C(0, x) = s { Some(*x) } else { None }).collect();
            let restricted = model.compose(
                &model.quasi_proj(&iface, &kept),
                &model.compose(f, &model.quasi_inj(&iface, &kept)).unwrap(),
            )
            .unwrap();
            let big = model.tensor(&restricted, &model.zero(&[ONE], &[ONE]));
            let sigma: Vec<usize> = w
                .lower
                .iter()
                .map(|s| match s {
                    Src::C(_, x) => kept.iter().position(|k| k == x).unwrap(),
                    Src::New => kept.len(),
                })
                .collect();
            (upper, conj(model, &big, &sigma))
        }
        Proof::Down(..) => {
            let (mu, one_m) = w.down.clone().unwrap();
            let m = mu.len();
            debug_assert_eq!(m, one_m.len());
            let (hm, gm) = match mode {
                Mode::Rel => (model.h_m(m), model.g_m(m)),
                Mode::PInjDegenerate => (model.zero(&[ONE], &vec![ONE; m]), model.zero(&vec![ONE; m], &[ONE])),
            };
            let extra = |x: usize, set: &[usize]| set.iter().position(|&y| y == x);

            // Upper: θ⁻ ∘ (h_m ⊗ ⟦π'⟧ ⊗ g_m) ∘ θ.
            let x = &kids[0].upper;
            let n = model.dom_of(x).len();
            let mid_dom: Vec<Lbl> =
                [Lbl::One].into_iter().chain((0..n).map(Lbl::Old)).chain((0..m).map(Lbl::Extra)).collect();
            let mid_cod: Vec<Lbl> =
                (0..m).map(Lbl::Extra).chain((0..n).map(Lbl::Old)).chain([Lbl::One]).collect();
            let mid_cod_t: Vec<WireType> = [vec![ONE; m], vec![U; n], vec![ONE]].concat();
            let mut theta = Vec::new();
            let mut theta_inv = Vec::new();
            for s in &w.upper {
                match *s {
                    Src::New => {
                        theta.push((model.alpha_star(), vec![Lbl::One]));
                        theta_inv.push((model.alpha(), vec![Lbl::One]));
                    }
                    Src::C(_, x) => match extra(x, &mu) {
                        Some(k) => {
                            theta.push((model.r_alpha(), vec![Lbl::Old(x), Lbl::Extra(k)]));
                            theta_inv.push((model.bang_alpha(), vec![Lbl::Old(x), Lbl::Extra(k)]));
                        }
                        None => {
                            theta.push((model.id(&[U]), vec![Lbl::Old(x)]));
                            theta_inv.push((model.id(&[U]), vec![Lbl::Old(x)]));
                        }
                    },
                }
            }
            let th = regroup(model, theta, &mid_dom);
            let mid = model.tensor_all(&[hm.clone(), x.clone(), gm.clone()]);
            let th_inv = ungroup(model, &mid_cod, &mid_cod_t, theta_inv);
            let upper = model.compose(&th_inv, &model.compose(&mid, &th).unwrap()).unwrap();

            // Lower: η⁻ ∘ (h_m ⊗ f_π' ⊗ g_m) ∘ η, with 𝟙_N fed and drained by zero.
            let f = &kids[0].lower;
            let nl = model.dom_of(f).len();
            let n_wires: Vec<usize> = kids[0].layout.occurrences[match p {
                Proof::Down(_, i) => *i,
                _ => unreachable!(),
            }]
            .lower
            .clone()
            .collect();
            let mid_dom: Vec<Lbl> =
                [Lbl::One].into_iter().chain((0..nl).map(Lbl::Old)).chain((0..m).map(Lbl::Extra)).collect();
            let mid_cod: Vec<Lbl> =
                (0..m).map(Lbl::Extra).chain((0..nl).map(Lbl::Old)).chain([Lbl::One]).collect();
            let mid_cod_t = vec![ONE; m + nl + 1];
            let mut eta = Vec::new();
            let mut eta_inv = Vec::new();
            for s in &w.lower {
                match *s {
                    Src::New => {
                        eta.push((model.id(&[ONE]), vec![Lbl::One]));
                        eta_inv.push((model.id(&[ONE]), vec![Lbl::One]));
                    }
                    Src::C(_, x) => match extra(x, &one_m) {
                        Some(k) => {
                            eta.push((model.r_one(), vec![Lbl::Old(x), Lbl::Extra(k)]));
                            eta_inv.push((model.bang_one(), vec![Lbl::Old(x), Lbl::Extra(k)]));
                        }
                        None => {
                            eta.push((model.id(&[ONE]), vec![Lbl::Old(x)]));
                            eta_inv.push((model.id(&[ONE]), vec![Lbl::Old(x)]));
                        }
                    },
                }
            }
            let n_lbls: Vec<Lbl> = n_wires.iter().map(|&x| Lbl::Old(x)).collect();
            eta.push((model.zero(&[], &vec![ONE; n_wires.len()]), n_lbls.clone()));
            eta_inv.push((model.zero(&vec![ONE; n_wires.len()], &[]), n_lbls));
            let et = regroup(model, eta, &mid_dom);
            let mid = model.tensor_all(&[hm, f.clone(), gm]);
            let et_inv = ungroup(model, &mid_cod, &mid_cod_t, eta_inv);
            let lower = model.compose(&et_inv, &model.compose(&mid, &et).unwrap()).unwrap();
            (upper, lower)
        }
        Proof::Ax(_) => unreachable!(),
    };
    LitNode { layout: Layout::of(&w.seq), seq: w.seq, upper, lower }
}

/// Interprets a proof by composing the primitive morphisms of `model`
/// exactly as the case definitions prescribe. Slow, but independent of the
/// shortcuts taken by [`interp`].
pub fn interp_literal<M: RelModel>(model: &M, p: &Proof, mode: Mode) -> Result<(M::Rel, M::Rel, Layout), GoiError> {
    let s = check(p)?;
    reject_units(&s)?;
    let n = literal_node(model, p, mode);
    Ok((n.upper, n.lower, n.layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::enumerate_proofs;
    use crate::relcore::{BlockModel, Window, WindowModel};

    const U: WireType = WireType::U;
    const ONE: WireType = WireType::One;

    fn eta_x() -> Proof {
        Proof::down(Proof::up(Proof::ax(Formula::neg_atom("X")), 1), 0)
    }

    #[test]
    fn shape_tables() {
        let s = shape(&Formula::parse("up X").unwrap()).unwrap();
        assert_eq!(s.one_leaves, 1);
        assert_eq!(s.u_layout.iter().map(|l| l.tag).collect::<Vec<_>>(), vec![LeafTag::InAD, LeafTag::InAU]);
        assert_eq!(s.u_layout[1].role, LeafRole::ShiftUp);
        let s = shape(&Formula::parse("(Y^ | X^)").unwrap()).unwrap();
        assert_eq!((s.one_leaves, s.u_layout.len()), (2, 2));
        assert!(s.u_layout.iter().all(|l| l.tag == LeafTag::InAU));
        assert!(matches!(shape(&Formula::parse("(one * X)").unwrap()), Err(GoiError::UnitUnsupported(_))));
    }

    #[test]
    fn pairing_is_involutive() {
        for text in ["X", "dn (X^ | Y^)", "up (X * dn Y^)", "dn up (X * Y)"] {
            let a = Formula::parse(text).unwrap();
            let (pa, pb) = (pairing(&a), pairing(&a.negate()));
            for k in 0..pa.len() {
                assert_eq!(pb[pa[k]], k, "{text}");
            }
        }
    }

    #[test]
    fn mp_of_up_is_point_into_shift_leaf() {
        let m = mp(&Formula::parse("up X").unwrap()).unwrap();
        assert_eq!(m.get(0, 0), Entry::Zero);
        assert_eq!(m.get(1, 0), Entry::Point);
    }

    #[test]
    fn retraction_splits() {
        for text in ["X", "(Y^ | X^)", "dn up (X * Y)"] {
            let (r, b) = retraction_ra(&Formula::parse(text).unwrap()).unwrap();
            let m = r.cols();
            assert_eq!(b.after(&r).unwrap(), BlockRel::id(&vec![U; m]));
        }
    }

    #[test]
    fn eta_expansion_golden() {
        let ip = interp(&eta_x(), Mode::Rel).unwrap();
        // Wires: U_↓, U_{X⊥} | U_X, U_↑.
        let p = Entry::Point;
        let i = Entry::Id;
        let z = Entry::Zero;
        let want = BlockRel::from_rows(
            &[U; 4],
            &[U; 4],
            &[&[z, z, z, p], &[z, z, i, z], &[z, i, z, z], &[p, z, z, z]],
        )
        .unwrap();
        assert_eq!(ip.upper, want);
        assert_eq!(ip.lower, BlockRel::perm(&[ONE, ONE], &[1, 0]));
    }

    #[test]
    fn literal_matches_direct() {
        for p in enumerate_proofs(6, &["X", "Y"]) {
            for mode in [Mode::Rel, Mode::PInjDegenerate] {
                let ip = interp(&p, mode).unwrap();
                let (u, l, _) = interp_literal(&BlockModel, &p, mode).unwrap();
                assert_eq!(u, ip.upper, "{p}");
                assert_eq!(l, ip.lower, "{p}");
            }
        }
    }

    #[test]
    fn window_literal_matches_direct() {
        let wm = WindowModel::new(Window::new(4, 1).unwrap());
        for p in enumerate_proofs(5, &["X"]) {
            let ip = interp(&p, Mode::Rel).unwrap();
            let (u, l, _) = interp_literal(&wm, &p, Mode::Rel).unwrap();
            assert_eq!(wm.to_block(&u).unwrap(), ip.upper, "{p}");
            assert_eq!(wm.to_block(&l).unwrap(), ip.lower, "{p}");
        }
    }
}
