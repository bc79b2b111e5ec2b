//! Finite block-matrix model of the fragment of `Rel` used by the
//! interpretation.
//!
//! Wires are either `U` (the naturals) or `1` (a singleton). A morphism
//! between tensors of wires is a matrix of [`Entry`] values, each one of
//! `∅`, the point relation `{(n_α, n_α)}`, or the identity.

mod bitmat;
pub mod codec;
pub mod laws;
pub mod window;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bitmat::BitMat;
pub use codec::{decode, encode, fold_eval};
pub use window::{Window, WindowModel, WindowRel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WireType {
    #[serde(rename = "U")]
    U,
    #[serde(rename = "1")]
    One,
}

impl fmt::Display for WireType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WireType::U => "U",
            WireType::One => "1",
        })
    }
}

/// Ordered as a join-semilattice: `Zero < Point < Id`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Zero,
    Point,
    Id,
}

impl Entry {
    /// Canonical form of an entry on an edge `src → dst`.
    pub fn normalize(self, src: WireType, dst: WireType) -> Entry {
        match self {
            Entry::Point if src == WireType::One && dst == WireType::One => Entry::Id,
            e => e,
        }
    }

    pub fn is_legal(self, src: WireType, dst: WireType) -> bool {
        match self {
            Entry::Zero => true,
            Entry::Point => !(src == WireType::One && dst == WireType::One),
            Entry::Id => src == dst,
        }
    }

    pub fn join(self, other: Entry) -> Entry {
        self.max(other)
    }

    /// `g ∘ f` for entries `f: src → mid`, `g: mid → dst`.
    pub fn then(f: Entry, g: Entry, src: WireType, dst: WireType) -> Entry {
        let raw = match (f, g) {
            (Entry::Zero, _) | (_, Entry::Zero) => Entry::Zero,
            (Entry::Id, e) | (e, Entry::Id) => e,
            (Entry::Point, Entry::Point) => Entry::Point,
        };
        raw.normalize(src, dst)
    }

    pub fn code(self) -> &'static str {
        match self {
            Entry::Zero => "0",
            Entry::Point => "p",
            Entry::Id => "1",
        }
    }

    pub fn from_code(s: &str) -> Option<Entry> {
        match s {
            "0" => Some(Entry::Zero),
            "p" => Some(Entry::Point),
            "1" => Some(Entry::Id),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelError {
    #[error("interface mismatch: {0}")]
    Interface(String),
    #[error("illegal entry {entry:?} on edge {src} -> {dst}")]
    IllegalEntry { entry: Entry, src: WireType, dst: WireType },
    #[error("token {token} outside window of size {size}")]
    TokenOutsideWindow { token: u64, size: u64 },
    #[error("relation is not expressible as an entry matrix: block ({row},{col}) {detail}")]
    NotBlock { row: usize, col: usize, detail: String },
    #[error("json: {0}")]
    Json(String),
}

/// Relation between tensors of wires, stored row-major with rows indexed
/// by the codomain.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockRel {
    dom: Vec<WireType>,
    cod: Vec<WireType>,
    entries: Vec<Entry>,
}

impl fmt::Debug for BlockRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlockRel {:?} -> {:?}", self.dom, self.cod)?;
        for i in 0..self.rows() {
            write!(f, "\n  ")?;
            for j in 0..self.cols() {
                write!(f, "{} ", self.get(i, j).code())?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for BlockRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows() {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.cols() {
                let c = match self.get(i, j) {
                    Entry::Zero => '.',
                    Entry::Point => 'p',
                    Entry::Id => '1',
                };
                write!(f, "{c}")?;
                if j + 1 < self.cols() {
                    write!(f, " ")?;
                }
            }
        }
        Ok(())
    }
}

impl BlockRel {
    pub fn zero(dom: &[WireType], cod: &[WireType]) -> BlockRel {
        BlockRel { dom: dom.to_vec(), cod: cod.to_vec(), entries: vec![Entry::Zero; dom.len() * cod.len()] }
    }

    pub fn id(iface: &[WireType]) -> BlockRel {
        let mut r = BlockRel::zero(iface, iface);
        for k in 0..iface.len() {
            r.entries[k * iface.len() + k] = Entry::Id;
        }
        r
    }

    /// Permutation with output `k` wired to input `sigma[k]`.
    pub fn perm(dom: &[WireType], sigma: &[usize]) -> BlockRel {
        let cod: Vec<WireType> = sigma.iter().map(|&s| dom[s]).collect();
        let mut r = BlockRel::zero(dom, &cod);
        for (k, &s) in sigma.iter().enumerate() {
            r.set(k, s, Entry::Id);
        }
        r
    }

    pub fn from_rows(dom: &[WireType], cod: &[WireType], rows: &[&[Entry]]) -> Result<BlockRel, RelError> {
        if rows.len() != cod.len() || rows.iter().any(|r| r.len() != dom.len()) {
            return Err(RelError::Interface("row/column counts do not match the interfaces".into()));
        }
        let mut out = BlockRel::zero(dom, cod);
        for (i, row) in rows.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                out.try_set(i, j, e)?;
            }
        }
        Ok(out)
    }

    pub fn dom(&self) -> &[WireType] {
        &self.dom
    }

    pub fn cod(&self) -> &[WireType] {
        &self.cod
    }

    pub fn rows(&self) -> usize {
        self.cod.len()
    }

    pub fn cols(&self) -> usize {
        self.dom.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Entry {
        self.entries[row * self.cols() + col]
    }

    /// Sets an entry, normalizing it. Panics on an illegal entry.
    pub fn set(&mut self, row: usize, col: usize, e: Entry) {
        self.try_set(row, col, e).expect("legal entry")
    }

    pub fn try_set(&mut self, row: usize, col: usize, e: Entry) -> Result<(), RelError> {
        let (src, dst) = (self.dom[col], self.cod[row]);
        let e = e.normalize(src, dst);
        if !e.is_legal(src, dst) {
            return Err(RelError::IllegalEntry { entry: e, src, dst });
        }
        let c = self.cols();
        self.entries[row * c + col] = e;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == Entry::Zero)
    }

    pub fn transpose(&self) -> BlockRel {
        let mut t = BlockRel::zero(&self.cod, &self.dom);
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &BlockRel) -> Result<BlockRel, RelError> {
        if f.cod != self.dom {
            return Err(RelError::Interface(format!("compose: {:?} vs {:?}", f.cod, self.dom)));
        }
        let mut out = BlockRel::zero(&f.dom, &self.cod);
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                let g = self.get(i, k);
                if g == Entry::Zero {
                    continue;
                }
                for j in 0..f.cols() {
                    let e = Entry::then(f.get(k, j), g, f.dom[j], self.cod[i]);
                    if e != Entry::Zero {
                        let idx = i * out.cols() + j;
                        out.entries[idx] = out.entries[idx].join(e);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn tensor(&self, g: &BlockRel) -> BlockRel {
        let dom: Vec<WireType> = self.dom.iter().chain(&g.dom).copied().collect();
        let cod: Vec<WireType> = self.cod.iter().chain(&g.cod).copied().collect();
        let mut out = BlockRel::zero(&dom, &cod);
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                out.set(self.rows() + i, self.cols() + j, g.get(i, j));
            }
        }
        out
    }

    pub fn union(&self, g: &BlockRel) -> Result<BlockRel, RelError> {
        if self.dom != g.dom || self.cod != g.cod {
            return Err(RelError::Interface("union of relations with different interfaces".into()));
        }
        let entries = self.entries.iter().zip(&g.entries).map(|(a, b)| a.join(*b)).collect();
        Ok(BlockRel { dom: self.dom.clone(), cod: self.cod.clone(), entries })
    }

    /// Least fixpoint of `x = Id ∪ f ∘ x`, by Warshall elimination. Every
    /// diagonal entry is below `Id`, so its own closure is `Id`.
    pub fn star(&self) -> Result<BlockRel, RelError> {
        if self.dom != self.cod {
            return Err(RelError::Interface("star of a non-endomorphism".into()));
        }
        let n = self.rows();
        let mut x = self.clone();
        for k in 0..n {
            for i in 0..n {
                let a = x.get(i, k);
                if a == Entry::Zero {
                    continue;
                }
                for j in 0..n {
                    let b = x.get(k, j);
                    if b != Entry::Zero {
                        let e = Entry::then(b, a, self.dom[j], self.cod[i]);
                        let idx = i * n + j;
                        x.entries[idx] = x.entries[idx].join(e);
                    }
                }
            }
        }
        for k in 0..n {
            x.entries[k * n + k] = Entry::Id;
        }
        Ok(x)
    }

    /// Trace over the last `k` wires: `f11 ∪ f12 ∘ f22* ∘ f21`.
    pub fn trace(&self, k: usize) -> Result<BlockRel, RelError> {
        let (n_in, n_out) = (self.cols(), self.rows());
        if k > n_in || k > n_out || self.dom[n_in - k..] != self.cod[n_out - k..] {
            return Err(RelError::Interface(format!("trace suffix of length {k} does not match")));
        }
        let (a, b) = (n_out - k, n_in - k);
        let f11 = self.block(0..a, 0..b);
        if k == 0 {
            return Ok(f11);
        }
        let f12 = self.block(0..a, b..n_in);
        let f21 = self.block(a..n_out, 0..b);
        let f22 = self.block(a..n_out, b..n_in);
        f11.union(&f12.after(&f22.star()?)?.after(&f21)?)
    }

    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> BlockRel {
        let mut out = BlockRel::zero(&self.dom[cols.clone()], &self.cod[rows.clone()]);
        for (oi, i) in rows.clone().enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out.set(oi, oj, self.get(i, j));
            }
        }
        out
    }

    /// True iff every row outside `span` is zero.
    pub fn ranges_over(&self, span: &[usize]) -> bool {
        (0..self.rows())
            .filter(|i| !span.contains(i))
            .all(|i| (0..self.cols()).all(|j| self.get(i, j) == Entry::Zero))
    }

    /// Conjugates an endomorphism by a permutation of its wires: the
    /// result's wire `k` is the input's wire `sigma[k]`.
    pub fn conjugate(&self, sigma: &[usize]) -> BlockRel {
        let dom: Vec<WireType> = sigma.iter().map(|&s| self.dom[s]).collect();
        let cod: Vec<WireType> = sigma.iter().map(|&s| self.cod[s]).collect();
        let mut out = BlockRel::zero(&dom, &cod);
        for (i, &si) in sigma.iter().enumerate() {
            for (j, &sj) in sigma.iter().enumerate() {
                out.set(i, j, self.get(si, sj));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<&str>> =
            (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.get(i, j).code()).collect()).collect();
        serde_json::json!({ "dom": self.dom, "cod": self.cod, "entries": rows })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<BlockRel, RelError> {
        #[derive(Deserialize)]
        struct Raw {
            dom: Vec<WireType>,
            cod: Vec<WireType>,
            entries: Vec<Vec<String>>,
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| RelError::Json(e.to_string()))?;
        let mut out = BlockRel::zero(&raw.dom, &raw.cod);
        if raw.entries.len() != raw.cod.len() {
            return Err(RelError::Json("row count differs from codomain length".into()));
        }
        for (i, row) in raw.entries.iter().enumerate() {
            if row.len() != raw.dom.len() {
                return Err(RelError::Json(format!("row {i} has the wrong length")));
            }
            for (j, code) in row.iter().enumerate() {
                let e = Entry::from_code(code).ok_or_else(|| RelError::Json(format!("bad entry code {code:?}")))?;
                out.try_set(i, j, e)?;
            }
        }
        Ok(out)
    }
}

/// Operations shared by the entry-matrix model and the explicit window
/// model. Interpretation code is written against this trait so that the
/// same construction can be replayed on explicit relations.
pub trait RelModel {
    type Rel: Clone + PartialEq + fmt::Debug;

    fn dom_of<'a>(&self, r: &'a Self::Rel) -> &'a [WireType];
    fn cod_of<'a>(&self, r: &'a Self::Rel) -> &'a [WireType];
    fn id(&self, iface: &[WireType]) -> Self::Rel;
    fn zero(&self, dom: &[WireType], cod: &[WireType]) -> Self::Rel;
    fn perm(&self, dom: &[WireType], sigma: &[usize]) -> Self::Rel;
    /// `α: 1 → U`.
    fn alpha(&self) -> Self::Rel;
    /// `α*: U → 1`.
    fn alpha_star(&self) -> Self::Rel;
    /// Maximal relation `1 → 1 ⊗ 1`.
    fn r_one(&self) -> Self::Rel;
    /// Maximal relation `1 ⊗ 1 → 1`.
    fn bang_one(&self) -> Self::Rel;
    /// `r_α: U → U ⊗ 1`.
    fn r_alpha(&self) -> Self::Rel;
    /// `!_α: U ⊗ 1 → U`.
    fn bang_alpha(&self) -> Self::Rel;
    fn compose(&self, g: &Self::Rel, f: &Self::Rel) -> Result<Self::Rel, RelError>;
    fn tensor(&self, f: &Self::Rel, g: &Self::Rel) -> Self::Rel;
    fn union(&self, f: &Self::Rel, g: &Self::Rel) -> Result<Self::Rel, RelError>;
    fn trace(&self, f: &Self::Rel, k: usize) -> Result<Self::Rel, RelError>;

    fn tensor_all(&self, parts: &[Self::Rel]) -> Self::Rel {
        let mut acc = self.id(&[]);
        for p in parts {
            acc = self.tensor(&acc, p);
        }
        acc
    }

    /// `g_m: 1^m → 1`, built as `(! ⊗ 1^{m-2}) ∘ ⋯ ∘ (! ⊗ 1) ∘ !` read
    /// as folding the wires pairwise from the left.
    fn g_m(&self, m: usize) -> Self::Rel {
        let one = [WireType::One];
        match m {
            0 => self.zero(&[], &one),
            1 => self.id(&one),
            _ => {
                let mut acc = self.id(&vec![WireType::One; m]);
                for k in (1..m).rev() {
                    // Fold the first two of the k+1 remaining wires.
                    let step = self.tensor(&self.bang_one(), &self.id(&vec![WireType::One; k - 1]));
                    acc = self.compose(&step, &acc).expect("g_m shapes");
                }
                acc
            }
        }
    }

    /// `h_m: 1 → 1^m`, the converse unfolding with `r`.
    fn h_m(&self, m: usize) -> Self::Rel {
        let one = [WireType::One];
        match m {
            0 => self.zero(&one, &[]),
            1 => self.id(&one),
            _ => {
                let mut acc = self.id(&one);
                for k in 1..m {
                    let step = self.tensor(&self.r_one(), &self.id(&vec![WireType::One; k - 1]));
                    acc = self.compose(&step, &acc).expect("h_m shapes");
                }
                acc
            }
        }
    }

    /// Quasi-injection of wire positions `span` of `iface`.
    fn quasi_inj(&self, iface: &[WireType], span: &[usize]) -> Self::Rel {
        let sub: Vec<WireType> = span.iter().map(|&k| iface[k]).collect();
        let rest: Vec<usize> = (0..iface.len()).filter(|k| !span.contains(k)).collect();
        let rest_t: Vec<WireType> = rest.iter().map(|&k| iface[k]).collect();
        // sub ⊗ I → sub ⊗ rest, then reorder into iface order.
        let padded = self.tensor(&self.id(&sub), &self.zero(&[], &rest_t));
        let order: Vec<usize> = span.iter().chain(&rest).copied().collect();
        let back = self.perm(&[sub.as_slice(), rest_t.as_slice()].concat(), &crate::proof::invert_perm(&order));
        self.compose(&back, &padded).expect("quasi_inj shapes")
    }

    /// Quasi-projection onto wire positions `span` of `iface`.
    fn quasi_proj(&self, iface: &[WireType], span: &[usize]) -> Self::Rel {
        let sub: Vec<WireType> = span.iter().map(|&k| iface[k]).collect();
        let rest: Vec<usize> = (0..iface.len()).filter(|k| !span.contains(k)).collect();
        let rest_t: Vec<WireType> = rest.iter().map(|&k| iface[k]).collect();
        let order: Vec<usize> = span.iter().chain(&rest).copied().collect();
        let front = self.perm(iface, &order);
        let drop = self.tensor(&self.id(&sub), &self.zero(&rest_t, &[]));
        self.compose(&drop, &front).expect("quasi_proj shapes")
    }
}

/// The entry-matrix model.
#[derive(Clone, Copy, Debug, Default)]
pub struct BlockModel;

impl RelModel for BlockModel {
    type Rel = BlockRel;

    fn dom_of<'a>(&self, r: &'a BlockRel) -> &'a [WireType] {
        r.dom()
    }
    fn cod_of<'a>(&self, r: &'a BlockRel) -> &'a [WireType] {
        r.cod()
    }
    fn id(&self, iface: &[WireType]) -> BlockRel {
        BlockRel::id(iface)
    }
    fn zero(&self, dom: &[WireType], cod: &[WireType]) -> BlockRel {
        BlockRel::zero(dom, cod)
    }
    fn perm(&self, dom: &[WireType], sigma: &[usize]) -> BlockRel {
        BlockRel::perm(dom, sigma)
    }
    fn alpha(&self) -> BlockRel {
        prim::alpha()
    }
    fn alpha_star(&self) -> BlockRel {
        prim::alpha_star()
    }
    fn r_one(&self) -> BlockRel {
        prim::r_one()
    }
    fn bang_one(&self) -> BlockRel {
        prim::bang_one()
    }
    fn r_alpha(&self) -> BlockRel {
        prim::r_alpha()
    }
    fn bang_alpha(&self) -> BlockRel {
        prim::bang_alpha()
    }
    fn compose(&self, g: &BlockRel, f: &BlockRel) -> Result<BlockRel, RelError> {
        g.after(f)
    }
    fn tensor(&self, f: &BlockRel, g: &BlockRel) -> BlockRel {
        f.tensor(g)
    }
    fn union(&self, f: &BlockRel, g: &BlockRel) -> Result<BlockRel, RelError> {
        f.union(g)
    }
    fn trace(&self, f: &BlockRel, k: usize) -> Result<BlockRel, RelError> {
        f.trace(k)
    }
}

/// Direct entry-level constructions of the primitive morphisms.
pub mod prim {
    use super::{BlockRel, Entry, WireType};

    const U: WireType = WireType::U;
    const ONE: WireType = WireType::One;

    pub fn alpha() -> BlockRel {
        BlockRel::from_rows(&[ONE], &[U], &[&[Entry::Point]]).unwrap()
    }
    pub fn alpha_star() -> BlockRel {
        BlockRel::from_rows(&[U], &[ONE], &[&[Entry::Point]]).unwrap()
    }
    pub fn r_one() -> BlockRel {
        BlockRel::from_rows(&[ONE], &[ONE, ONE], &[&[Entry::Id], &[Entry::Id]]).unwrap()
    }
    pub fn bang_one() -> BlockRel {
        BlockRel::from_rows(&[ONE, ONE], &[ONE], &[&[Entry::Id, Entry::Id]]).unwrap()
    }
    pub fn r_alpha() -> BlockRel {
        BlockRel::from_rows(&[U], &[U, ONE], &[&[Entry::Id], &[Entry::Point]]).unwrap()
    }
    pub fn bang_alpha() -> BlockRel {
        BlockRel::from_rows(&[U, ONE], &[U], &[&[Entry::Id, Entry::Point]]).unwrap()
    }
    /// Maximal relation `1^m → 1`; empty when `m = 0`.
    pub fn g_m(m: usize) -> BlockRel {
        let dom = vec![ONE; m];
        let mut r = BlockRel::zero(&dom, &[ONE]);
        for j in 0..m {
            r.set(0, j, Entry::Id);
        }
        r
    }
    pub fn h_m(m: usize) -> BlockRel {
        g_m(m).transpose()
    }
}
