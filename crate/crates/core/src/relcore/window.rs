//! Explicit finite relations over a window `{0, …, N-1}` of the naturals.
//!
//! Each `U` wire carries `N` elements and each `1` wire one element, so
//! every relation is a concrete boolean matrix. This backend serves as an
//! independent oracle for the entry-matrix model.

use super::{BitMat, BlockRel, Entry, RelError, RelModel, WireType};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub size: usize,
    pub n_alpha: usize,
}

impl Window {
    pub fn new(size: usize, n_alpha: usize) -> Result<Window, RelError> {
        if size == 0 || n_alpha >= size {
            return Err(RelError::Interface(format!("window needs n_alpha < size, got {n_alpha} >= {size}")));
        }
        Ok(Window { size, n_alpha })
    }

    pub fn width(&self, w: WireType) -> usize {
        match w {
            WireType::U => self.size,
            WireType::One => 1,
        }
    }

    /// Start offset of every wire, plus the total element count.
    pub fn offsets(&self, iface: &[WireType]) -> (Vec<usize>, usize) {
        let mut offs = Vec::with_capacity(iface.len());
        let mut acc = 0;
        for &w in iface {
            offs.push(acc);
            acc += self.width(w);
        }
        (offs, acc)
    }

    fn point_of(&self, w: WireType) -> usize {
        match w {
            WireType::U => self.n_alpha,
            WireType::One => 0,
        }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window { size: 16, n_alpha: 0 }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WindowRel {
    pub dom: Vec<WireType>,
    pub cod: Vec<WireType>,
    /// Rows index codomain elements, columns domain elements.
    pub bits: BitMat,
}

#[derive(Clone, Copy, Debug)]
pub struct WindowModel {
    pub window: Window,
}

impl WindowModel {
    pub fn new(window: Window) -> Self {
        WindowModel { window }
    }

    fn empty(&self, dom: &[WireType], cod: &[WireType]) -> WindowRel {
        let (_, nd) = self.window.offsets(dom);
        let (_, nc) = self.window.offsets(cod);
        WindowRel { dom: dom.to_vec(), cod: cod.to_vec(), bits: BitMat::new(nc, nd) }
    }

    /// Set-level meaning of an entry-matrix relation.
    pub fn from_block(&self, b: &BlockRel) -> WindowRel {
        let mut out = self.empty(b.dom(), b.cod());
        let (od, _) = self.window.offsets(b.dom());
        let (oc, _) = self.window.offsets(b.cod());
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                let (src, dst) = (b.dom()[j], b.cod()[i]);
                match b.get(i, j) {
                    Entry::Zero => {}
                    Entry::Point => {
                        out.bits.set(oc[i] + self.window.point_of(dst), od[j] + self.window.point_of(src));
                    }
                    Entry::Id => {
                        for x in 0..self.window.width(src) {
                            out.bits.set(oc[i] + x, od[j] + x);
                        }
                    }
                }
            }
        }
        out
    }

    /// Classifies every block as `∅`, the point relation, or the identity.
    pub fn to_block(&self, r: &WindowRel) -> Result<BlockRel, RelError> {
        let (od, _) = self.window.offsets(&r.dom);
        let (oc, _) = self.window.offsets(&r.cod);
        let mut out = BlockRel::zero(&r.dom, &r.cod);
        for (i, &dst) in r.cod.iter().enumerate() {
            for (j, &src) in r.dom.iter().enumerate() {
                let blk = r.bits.sub(oc[i]..oc[i] + self.window.width(dst), od[j]..od[j] + self.window.width(src));
                let pairs: Vec<(usize, usize)> = blk.pairs().collect();
                let point = (self.window.point_of(dst), self.window.point_of(src));
                let entry = if pairs.is_empty() {
                    Entry::Zero
                } else if src == dst && pairs.len() == self.window.width(src) && pairs.iter().all(|(a, b)| a == b) {
                    Entry::Id
                } else if pairs == [point] {
                    Entry::Point
                } else {
                    return Err(RelError::NotBlock { row: i, col: j, detail: format!("has pairs {pairs:?}") });
                };
                out.try_set(i, j, entry)?;
            }
        }
        Ok(out)
    }
}

impl RelModel for WindowModel {
    type Rel = WindowRel;

    fn dom_of<'a>(&self, r: &'a WindowRel) -> &'a [WireType] {
        &r.dom
    }
    fn cod_of<'a>(&self, r: &'a WindowRel) -> &'a [WireType] {
        &r.cod
    }
    fn id(&self, iface: &[WireType]) -> WindowRel {
        let (_, n) = self.window.offsets(iface);
        WindowRel { dom: iface.to_vec(), cod: iface.to_vec(), bits: BitMat::identity(n) }
    }
    fn zero(&self, dom: &[WireType], cod: &[WireType]) -> WindowRel {
        self.empty(dom, cod)
    }
    fn perm(&self, dom: &[WireType], sigma: &[usize]) -> WindowRel {
        let cod: Vec<WireType> = sigma.iter().map(|&s| dom[s]).collect();
        let mut out = self.empty(dom, &cod);
        let (od, _) = self.window.offsets(dom);
        let (oc, _) = self.window.offsets(&cod);
        for (k, &s) in sigma.iter().enumerate() {
            for x in 0..self.window.width(dom[s]) {
                out.bits.set(oc[k] + x, od[s] + x);
            }
        }
        out
    }
    fn alpha(&self) -> WindowRel {
        let mut r = self.empty(&[WireType::One], &[WireType::U]);
        r.bits.set(self.window.n_alpha, 0);
        r
    }
    fn alpha_star(&self) -> WindowRel {
        let mut r = self.empty(&[WireType::U], &[WireType::One]);
        r.bits.set(0, self.window.n_alpha);
        r
    }
    fn r_one(&self) -> WindowRel {
        // The maximal relation {⋆} → {⋆} + {⋆}.
        let mut r = self.empty(&[WireType::One], &[WireType::One, WireType::One]);
        r.bits.set(0, 0);
        r.bits.set(1, 0);
        r
    }
    fn bang_one(&self) -> WindowRel {
        let mut r = self.empty(&[WireType::One, WireType::One], &[WireType::One]);
        r.bits.set(0, 0);
        r.bits.set(0, 1);
        r
    }
    fn r_alpha(&self) -> WindowRel {
        // n ↦ (1, n) for all n, and n_α ↦ (2, ⋆).
        let n = self.window.size;
        let mut r = self.empty(&[WireType::U], &[WireType::U, WireType::One]);
        for x in 0..n {
            r.bits.set(x, x);
        }
        r.bits.set(n, self.window.n_alpha);
        r
    }
    fn bang_alpha(&self) -> WindowRel {
        let n = self.window.size;
        let mut r = self.empty(&[WireType::U, WireType::One], &[WireType::U]);
        for x in 0..n {
            r.bits.set(x, x);
        }
        r.bits.set(self.window.n_alpha, n);
        r
    }
    fn compose(&self, g: &WindowRel, f: &WindowRel) -> Result<WindowRel, RelError> {
        if f.cod != g.dom {
            return Err(RelError::Interface(format!("compose: {:?} vs {:?}", f.cod, g.dom)));
        }
        Ok(WindowRel { dom: f.dom.clone(), cod: g.cod.clone(), bits: g.bits.after(&f.bits) })
    }
    fn tensor(&self, f: &WindowRel, g: &WindowRel) -> WindowRel {
        let dom: Vec<WireType> = f.dom.iter().chain(&g.dom).copied().collect();
        let cod: Vec<WireType> = f.cod.iter().chain(&g.cod).copied().collect();
        let mut out = self.empty(&dom, &cod);
        let (r0, c0) = (f.bits.rows(), f.bits.cols());
        for (i, j) in f.bits.pairs() {
            out.bits.set(i, j);
        }
        for (i, j) in g.bits.pairs() {
            out.bits.set(r0 + i, c0 + j);
        }
        out
    }
    fn union(&self, f: &WindowRel, g: &WindowRel) -> Result<WindowRel, RelError> {
        if f.dom != g.dom || f.cod != g.cod {
            return Err(RelError::Interface("union of relations with different interfaces".into()));
        }
        Ok(WindowRel { dom: f.dom.clone(), cod: f.cod.clone(), bits: f.bits.union(&g.bits) })
    }
    fn trace(&self, f: &WindowRel, k: usize) -> Result<WindowRel, RelError> {
        let (nd, nc) = (f.dom.len(), f.cod.len());
        if k > nd || k > nc || f.dom[nd - k..] != f.cod[nc - k..] {
            return Err(RelError::Interface(format!("trace suffix of length {k} does not match")));
        }
        let dom = f.dom[..nd - k].to_vec();
        let cod = f.cod[..nc - k].to_vec();
        let (_, a) = self.window.offsets(&cod);
        let (_, b) = self.window.offsets(&dom);
        let (rows, cols) = (f.bits.rows(), f.bits.cols());
        let f11 = f.bits.sub(0..a, 0..b);
        let f12 = f.bits.sub(0..a, b..cols);
        let f21 = f.bits.sub(a..rows, 0..b);
        let f22 = f.bits.sub(a..rows, b..cols);
        let fb = f12.after(&f22.star()).after(&f21);
        Ok(WindowRel { dom, cod, bits: f11.union(&fb) })
    }
}

impl WindowModel {
    pub fn star(&self, f: &WindowRel) -> Result<WindowRel, RelError> {
        if f.dom != f.cod {
            return Err(RelError::Interface("star of a non-endomorphism".into()));
        }
        Ok(WindowRel { dom: f.dom.clone(), cod: f.cod.clone(), bits: f.bits.star() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::{prim, BlockModel};

    fn wm() -> WindowModel {
        WindowModel::new(Window::new(10, 0).unwrap())
    }

    #[test]
    fn primitives_match_entry_forms() {
        let m = wm();
        let b = BlockModel;
        for (w, e) in [
            (m.alpha(), b.alpha()),
            (m.alpha_star(), b.alpha_star()),
            (m.r_one(), b.r_one()),
            (m.bang_one(), b.bang_one()),
            (m.r_alpha(), b.r_alpha()),
            (m.bang_alpha(), b.bang_alpha()),
        ] {
            assert_eq!(m.to_block(&w).unwrap(), e);
            assert_eq!(m.from_block(&e), w);
        }
    }

    #[test]
    fn alpha_then_star_is_point_relation() {
        let m = wm();
        let r = m.compose(&m.alpha(), &m.alpha_star()).unwrap();
        let pairs: Vec<_> = r.bits.pairs().collect();
        assert_eq!(pairs, vec![(0, 0)]);
    }

    #[test]
    fn g_h_on_singletons() {
        let m = wm();
        for k in 1..5 {
            let r = m.compose(&m.g_m(k), &m.h_m(k)).unwrap();
            assert_eq!(m.to_block(&r).unwrap(), BlockRel::id(&[WireType::One]));
            assert_eq!(m.to_block(&m.g_m(k)).unwrap(), prim::g_m(k));
        }
    }

    #[test]
    fn non_block_relation_is_reported() {
        let m = wm();
        let mut r = m.zero(&[WireType::U], &[WireType::U]);
        r.bits.set(1, 2);
        assert!(m.to_block(&r).is_err());
    }
}
