//! Oracles and helpers shared by the integration tests.
#![allow(dead_code)]

use std::cell::Cell;
use std::collections::BTreeSet;
use std::ops::Range;

use polgoi::exec::sigma_of;
use polgoi::formula::Formula;
use polgoi::goi::{Layout, Place};
use polgoi::proof::{Proof, Sequent};
use polgoi::relcore::{BitMat, BlockRel, Entry, RelError, RelModel, WindowModel, WindowRel, WireType};

pub const U: WireType = WireType::U;
pub const ONE: WireType = WireType::One;

pub const Z: Entry = Entry::Zero;
pub const P: Entry = Entry::Point;
pub const I: Entry = Entry::Id;

pub fn antidiagonal_one() -> BlockRel {
    BlockRel::from_rows(&[ONE, ONE], &[ONE, ONE], &[&[Z, I], &[I, Z]]).unwrap()
}

/// `f_{π_i}` in the order 𝟙↓1, 𝟙↑3 | 𝟙↑1, 𝟙↓2, 𝟙↓3, 𝟙↑2.
pub fn delta_pattern(i: usize) -> BlockRel {
    let d = |j: usize| if i == j { I } else { Z };
    BlockRel::from_rows(
        &[ONE; 6],
        &[ONE; 6],
        &[
            &[Z, d(3), d(1), Z, Z, d(2)],
            &[d(3), Z, Z, Z, I, Z],
            &[d(1), Z, Z, Z, Z, Z],
            &[Z, Z, Z, Z, Z, I],
            &[Z, I, Z, Z, Z, Z],
            &[d(2), Z, Z, I, Z, Z],
        ],
    )
    .unwrap()
}

/// Our cut pairs come out as ↑1, ↓2, ↑2, ↓3.
pub const DISPLAY_ORDER: [usize; 6] = [0, 1, 2, 3, 5, 4];

pub fn data(name: &str) -> Proof {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    Proof::parse(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub fn f(text: &str) -> Formula {
    Formula::parse(text).unwrap()
}

/// Window model that classifies every relation it produces, counting
/// the ones that are not entry matrices.
pub struct CheckedWindow {
    pub inner: WindowModel,
    pub produced: Cell<usize>,
    pub outside: Cell<usize>,
}

impl CheckedWindow {
    pub fn new(inner: WindowModel) -> Self {
        CheckedWindow { inner, produced: Cell::new(0), outside: Cell::new(0) }
    }

    fn seen(&self, r: WindowRel) -> WindowRel {
        self.produced.set(self.produced.get() + 1);
        if self.inner.to_block(&r).is_err() {
            self.outside.set(self.outside.get() + 1);
        }
        r
    }

    fn seen_res(&self, r: Result<WindowRel, RelError>) -> Result<WindowRel, RelError> {
        r.map(|r| self.seen(r))
    }
}

impl RelModel for CheckedWindow {
    type Rel = WindowRel;

    fn dom_of<'a>(&self, r: &'a WindowRel) -> &'a [WireType] {
        &r.dom
    }
    fn cod_of<'a>(&self, r: &'a WindowRel) -> &'a [WireType] {
        &r.cod
    }
    fn id(&self, iface: &[WireType]) -> WindowRel {
        self.seen(self.inner.id(iface))
    }
    fn zero(&self, dom: &[WireType], cod: &[WireType]) -> WindowRel {
        self.seen(self.inner.zero(dom, cod))
    }
    fn perm(&self, dom: &[WireType], sigma: &[usize]) -> WindowRel {
        self.seen(self.inner.perm(dom, sigma))
    }
    fn alpha(&self) -> WindowRel {
        self.seen(self.inner.alpha())
    }
    fn alpha_star(&self) -> WindowRel {
        self.seen(self.inner.alpha_star())
    }
    fn r_one(&self) -> WindowRel {
        self.seen(self.inner.r_one())
    }
    fn bang_one(&self) -> WindowRel {
        self.seen(self.inner.bang_one())
    }
    fn r_alpha(&self) -> WindowRel {
        self.seen(self.inner.r_alpha())
    }
    fn bang_alpha(&self) -> WindowRel {
        self.seen(self.inner.bang_alpha())
    }
    fn compose(&self, g: &WindowRel, f: &WindowRel) -> Result<WindowRel, RelError> {
        self.seen_res(self.inner.compose(g, f))
    }
    fn tensor(&self, f: &WindowRel, g: &WindowRel) -> WindowRel {
        self.seen(self.inner.tensor(f, g))
    }
    fn union(&self, f: &WindowRel, g: &WindowRel) -> Result<WindowRel, RelError> {
        self.seen_res(self.inner.union(f, g))
    }
    fn trace(&self, f: &WindowRel, k: usize) -> Result<WindowRel, RelError> {
        self.seen_res(self.inner.trace(f, k))
    }
}

/// Reflexive-transitive closure by breadth-first search from every node.
pub fn closure_by_search(bits: &BitMat) -> BitMat {
    let n = bits.rows();
    let mut out = BitMat::new(n, n);
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            out.set(x, start);
            for y in 0..n {
                // Row index is the target, column the source.
                if bits.get(y, x) && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    out
}

/// A square layer matrix whose wires carry stable labels, so that cut
/// pairs can be fed back one group at a time.
#[derive(Clone, Debug)]
pub struct Labelled {
    pub m: BlockRel,
    pub labels: Vec<usize>,
}

pub enum Side {
    Upper,
    Lower,
}

fn span(layout: &Layout, d: usize, side: usize, which: &Side) -> Range<usize> {
    let o = layout.occurrences.iter().find(|o| o.place == Place::Delta(d, side)).expect("cut occurrence");
    match which {
        Side::Upper => o.upper.clone(),
        Side::Lower => o.lower.clone(),
    }
}

/// Feeds back the cut pairs `chosen` of `seq`, where `x` still contains
/// every wire of those pairs.
pub fn partial_ex(x: &Labelled, seq: &Sequent, layout: &Layout, chosen: &[usize], which: &Side) -> Labelled {
    let mut fed: Vec<usize> = Vec::new();
    let mut sigma = BlockRel::id(&[]);
    for &d in chosen {
        fed.extend(span(layout, d, 0, which));
        fed.extend(span(layout, d, 1, which));
        let one = Sequent { gamma: vec![], delta: vec![seq.delta[d].clone()] };
        let s = sigma_of(&one);
        sigma = sigma.tensor(match which {
            Side::Upper => &s.upper,
            Side::Lower => &s.lower,
        });
    }
    let fed_set: BTreeSet<usize> = fed.iter().copied().collect();
    let pos = |label: usize| x.labels.iter().position(|&l| l == label).expect("wire still present");
    let kept: Vec<usize> = (0..x.labels.len()).filter(|&k| !fed_set.contains(&x.labels[k])).collect();
    let order: Vec<usize> = kept.iter().copied().chain(fed.iter().map(|&l| pos(l))).collect();
    let conj = x.m.conjugate(&order);
    let kept_types: Vec<WireType> = kept.iter().map(|&k| x.m.dom()[k]).collect();
    let lifted = BlockRel::id(&kept_types).tensor(&sigma);
    let m = lifted.after(&conj).unwrap().trace(fed.len()).unwrap();
    Labelled { m, labels: kept.iter().map(|&k| x.labels[k]).collect() }
}
