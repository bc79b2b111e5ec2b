//! The compact closed category `Int(Rel)` over finite labelled sets, with
//! multipointed objects and the positive and negative subcategories.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::relcore::laws::LawOutcome;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntRelError {
    #[error("object mismatch: {0}")]
    Mismatch(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Set = BTreeSet<usize>;

/// A relation between finite carriers of labelled elements. `pairs`
/// holds `(dom index, cod index)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinRel {
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    pub pairs: BTreeSet<(usize, usize)>,
}

impl FinRel {
    pub fn empty(dom: &[String], cod: &[String]) -> FinRel {
        FinRel { dom: dom.to_vec(), cod: cod.to_vec(), pairs: BTreeSet::new() }
    }

    pub fn id(carrier: &[String]) -> FinRel {
        let mut r = FinRel::empty(carrier, carrier);
        r.pairs.extend((0..carrier.len()).map(|k| (k, k)));
        r
    }

    pub fn from_pairs(dom: &[String], cod: &[String], pairs: impl IntoIterator<Item = (usize, usize)>) -> FinRel {
        let mut r = FinRel::empty(dom, cod);
        r.pairs.extend(pairs);
        r
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &FinRel) -> FinRel {
        debug_assert_eq!(f.cod, self.dom);
        let mut out = FinRel::empty(&f.dom, &self.cod);
        for &(a, b) in &f.pairs {
            for &(_, c) in self.pairs.range((b, 0)..=(b, usize::MAX)) {
                out.pairs.insert((a, c));
            }
        }
        out
    }

    pub fn union(&self, g: &FinRel) -> FinRel {
        debug_assert_eq!((&self.dom, &self.cod), (&g.dom, &g.cod));
        let mut out = self.clone();
        out.pairs.extend(g.pairs.iter().copied());
        out
    }

    /// Reflexive-transitive closure by repeated squaring.
    pub fn star(&self) -> FinRel {
        let mut x = FinRel::id(&self.dom).union(self);
        loop {
            let next = x.after(&x);
            if next == x {
                return x;
            }
            x = next;
        }
    }

    pub fn image(&self, s: &Set) -> Set {
        self.pairs.iter().filter(|(a, _)| s.contains(a)).map(|&(_, b)| b).collect()
    }

    pub fn preimage(&self, s: &Set) -> Set {
        self.pairs.iter().filter(|(_, b)| s.contains(b)).map(|&(a, _)| a).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Re-indexes into larger carriers.
    fn embed(&self, dom: &[String], dom_at: usize, cod: &[String], cod_at: usize) -> FinRel {
        FinRel::from_pairs(dom, cod, self.pairs.iter().map(|&(a, b)| (a + dom_at, b + cod_at)))
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<[&str; 2]> =
            self.pairs.iter().map(|&(a, b)| [self.dom[a].as_str(), self.cod[b].as_str()]).collect();
        json!({ "dom": self.dom, "cod": self.cod, "pairs": pairs })
    }

    pub fn from_json(v: &Value) -> Result<FinRel, IntRelError> {
        let err = |m: &str| IntRelError::Json(m.to_string());
        let strings = |k: &str| -> Result<Vec<String>, IntRelError> {
            v.get(k)
                .and_then(Value::as_array)
                .ok_or_else(|| err(&format!("missing {k}")))?
                .iter()
                .map(|x| x.as_str().map(String::from).ok_or_else(|| err("labels must be strings")))
                .collect()
        };
        let (dom, cod) = (strings("dom")?, strings("cod")?);
        let mut r = FinRel::empty(&dom, &cod);
        for p in v.get("pairs").and_then(Value::as_array).ok_or_else(|| err("missing pairs"))? {
            let pair = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| err("pair must have two labels"))?;
            let find = |set: &[String], x: &Value| {
                let s = x.as_str().ok_or_else(|| err("labels must be strings"))?;
                set.iter().position(|y| y == s).ok_or_else(|| err(&format!("unknown label {s}")))
            };
            r.pairs.insert((find(&dom, &pair[0])?, find(&cod, &pair[1])?));
        }
        Ok(r)
    }
}

/// An object `(A⁺, A⁻)` with a multipoint on each side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPObj {
    pub plus: Vec<String>,
    pub minus: Vec<String>,
    pub mp_plus: Set,
    pub mp_minus: Set,
}

pub const STAR: &str = "*";

impl MPObj {
    pub fn new(plus: &[&str], minus: &[&str], mp_plus: &[usize], mp_minus: &[usize]) -> MPObj {
        MPObj {
            plus: plus.iter().map(|s| s.to_string()).collect(),
            minus: minus.iter().map(|s| s.to_string()).collect(),
            mp_plus: mp_plus.iter().copied().collect(),
            mp_minus: mp_minus.iter().copied().collect(),
        }
    }

    /// `(A⁻, A⁺)` with the multipoints swapped.
    pub fn dual(&self) -> MPObj {
        MPObj {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
            mp_plus: self.mp_minus.clone(),
            mp_minus: self.mp_plus.clone(),
        }
    }

    /// `((A⁺ + 1)_1, (A⁻ + 1)_1)`, the fresh point last on each side.
    pub fn shifted(&self) -> MPObj {
        let add = |c: &[String]| c.iter().cloned().chain([STAR.to_string()]).collect::<Vec<_>>();
        MPObj {
            plus: add(&self.plus),
            minus: add(&self.minus),
            mp_plus: [self.plus.len()].into(),
            mp_minus: [self.minus.len()].into(),
        }
    }

    pub fn tensor(&self, other: &MPObj) -> MPObj {
        let sum = |a: &[String], b: &[String]| {
            a.iter().map(|x| format!("L.{x}")).chain(b.iter().map(|x| format!("R.{x}"))).collect::<Vec<_>>()
        };
        let shift = |s: &Set, by: usize| s.iter().map(|k| k + by).collect::<Set>();
        MPObj {
            plus: sum(&self.plus, &other.plus),
            minus: sum(&self.minus, &other.minus),
            mp_plus: self.mp_plus.union(&shift(&other.mp_plus, self.plus.len())).copied().collect(),
            mp_minus: self.mp_minus.union(&shift(&other.mp_minus, self.minus.len())).copied().collect(),
        }
    }

    /// The same carriers with other multipoints.
    pub fn with_mp(&self, mp_plus: Set, mp_minus: Set) -> MPObj {
        MPObj { mp_plus, mp_minus, ..self.clone() }
    }

    pub fn to_json(&self) -> Value {
        let pick = |c: &[String], s: &Set| s.iter().map(|&k| c[k].clone()).collect::<Vec<_>>();
        json!({
            "plus": self.plus,
            "minus": self.minus,
            "mp_plus": pick(&self.plus, &self.mp_plus),
            "mp_minus": pick(&self.minus, &self.mp_minus),
        })
    }

    pub fn from_json(v: &Value) -> Result<MPObj, IntRelError> {
        let err = |m: &str| IntRelError::Json(m.to_string());
        let strings = |k: &str| -> Result<Vec<String>, IntRelError> {
            v.get(k)
                .and_then(Value::as_array)
                .ok_or_else(|| err(&format!("missing {k}")))?
                .iter()
                .map(|x| x.as_str().map(String::from).ok_or_else(|| err("labels must be strings")))
                .collect()
        };
        let (plus, minus) = (strings("plus")?, strings("minus")?);
        let index = |c: &[String], names: Vec<String>| -> Result<Set, IntRelError> {
            names.iter().map(|n| c.iter().position(|x| x == n).ok_or_else(|| err(&format!("unknown label {n}")))).collect()
        };
        let mp_plus = index(&plus, strings("mp_plus")?)?;
        let mp_minus = index(&minus, strings("mp_minus")?)?;
        Ok(MPObj { plus, minus, mp_plus, mp_minus })
    }
}

/// A morphism `(A⁺, A⁻) → (B⁺, B⁻)` given by its four blocks
/// `R11: A⁺ → A⁻`, `R12: A⁺ → B⁺`, `R21: B⁻ → A⁻`, `R22: B⁻ → B⁺`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMor {
    pub src: MPObj,
    pub tgt: MPObj,
    pub r11: FinRel,
    pub r12: FinRel,
    pub r21: FinRel,
    pub r22: FinRel,
}

impl IntMor {
    pub fn empty(src: &MPObj, tgt: &MPObj) -> IntMor {
        IntMor {
            r11: FinRel::empty(&src.plus, &src.minus),
            r12: FinRel::empty(&src.plus, &tgt.plus),
            r21: FinRel::empty(&tgt.minus, &src.minus),
            r22: FinRel::empty(&tgt.minus, &tgt.plus),
            src: src.clone(),
            tgt: tgt.clone(),
        }
    }

    pub fn id(a: &MPObj) -> IntMor {
        IntMor { r12: FinRel::id(&a.plus), r21: FinRel::id(&a.minus), ..IntMor::empty(a, a) }
    }

    /// `self ∘ r`: `r` first, then `self`.
    pub fn after(&self, r: &IntMor) -> Result<IntMor, IntRelError> {
        let s = self;
        if (&r.tgt.plus, &r.tgt.minus) != (&s.src.plus, &s.src.minus) {
            return Err(IntRelError::Mismatch("composite of maps that do not meet".into()));
        }
        let loop_plus = r.r22.after(&s.r11).star(); // (R22 S11)* on B⁺
        let loop_minus = s.r11.after(&r.r22).star(); // (S11 R22)* on B⁻
        let r12 = s.r12.after(&loop_plus).after(&r.r12);
        let r22 = s.r22.union(&s.r12.after(&r.r22).after(&loop_minus).after(&s.r21));
        let r11 = r.r11.union(&r.r21.after(&s.r11).after(&loop_plus).after(&r.r12));
        let r21 = r.r21.after(&loop_minus).after(&s.r21);
        Ok(IntMor { src: r.src.clone(), tgt: s.tgt.clone(), r11, r12, r21, r22 })
    }

    /// `R⊥: B⊥ → A⊥`.
    pub fn dual(&self) -> IntMor {
        IntMor {
            src: self.tgt.dual(),
            tgt: self.src.dual(),
            r11: self.r22.clone(),
            r12: self.r21.clone(),
            r21: self.r12.clone(),
            r22: self.r11.clone(),
        }
    }

    pub fn tensor(&self, s: &IntMor) -> IntMor {
        let (src, tgt) = (self.src.tensor(&s.src), self.tgt.tensor(&s.tgt));
        let sum = |a: &FinRel, b: &FinRel, dom: &[String], cod: &[String]| {
            a.embed(dom, 0, cod, 0).union(&b.embed(dom, a.dom.len(), cod, a.cod.len()))
        };
        IntMor {
            r11: sum(&self.r11, &s.r11, &src.plus, &src.minus),
            r12: sum(&self.r12, &s.r12, &src.plus, &tgt.plus),
            r21: sum(&self.r21, &s.r21, &tgt.minus, &src.minus),
            r22: sum(&self.r22, &s.r22, &tgt.minus, &tgt.plus),
            src,
            tgt,
        }
    }

    pub fn is_pos(&self) -> bool {
        let (a, b) = (&self.src, &self.tgt);
        self.r12.preimage(&b.mp_plus) == a.mp_plus
            && self.r21.image(&b.mp_minus) == a.mp_minus
            && self.r22.preimage(&b.mp_plus).is_empty()
            && self.r22.image(&b.mp_minus).is_empty()
    }

    pub fn is_neg(&self) -> bool {
        let (a, b) = (&self.src, &self.tgt);
        self.r12.image(&a.mp_plus) == b.mp_plus
            && self.r21.preimage(&a.mp_minus) == b.mp_minus
            && self.r11.preimage(&a.mp_minus).is_empty()
            && self.r11.image(&a.mp_plus).is_empty()
    }

    /// The common action of `↓` and `↑` on maps: `⋆ ↦ ⋆` on both sides.
    pub fn shifted(&self) -> IntMor {
        let (src, tgt) = (self.src.shifted(), self.tgt.shifted());
        let mut r12 = self.r12.embed(&src.plus, 0, &tgt.plus, 0);
        r12.pairs.insert((self.src.plus.len(), self.tgt.plus.len()));
        let mut r21 = self.r21.embed(&tgt.minus, 0, &src.minus, 0);
        r21.pairs.insert((self.tgt.minus.len(), self.src.minus.len()));
        IntMor {
            r11: self.r11.embed(&src.plus, 0, &src.minus, 0),
            r22: self.r22.embed(&tgt.minus, 0, &tgt.plus, 0),
            r12,
            r21,
            src,
            tgt,
        }
    }

    pub fn down(&self) -> IntMor {
        self.shifted()
    }

    pub fn up(&self) -> IntMor {
        self.shifted()
    }

    /// `R ↦ R ∪ mp(A⁺)×{⋆} ∪ {⋆}×mp(A⁻)`, a positive map into `↓B`.
    pub fn transpose(&self) -> IntMor {
        let tgt = self.tgt.shifted();
        let src = &self.src;
        let (sp, sm) = (self.tgt.plus.len(), self.tgt.minus.len());
        let mut r12 = self.r12.embed(&src.plus, 0, &tgt.plus, 0);
        r12.pairs.extend(src.mp_plus.iter().map(|&a| (a, sp)));
        let mut r21 = self.r21.embed(&tgt.minus, 0, &src.minus, 0);
        r21.pairs.extend(src.mp_minus.iter().map(|&a| (sm, a)));
        IntMor {
            r11: self.r11.clone(),
            r22: self.r22.embed(&tgt.minus, 0, &tgt.plus, 0),
            r12,
            r21,
            src: src.clone(),
            tgt,
        }
    }

    /// Inverse of [`IntMor::transpose`]: drops every pair through `⋆`.
    /// `base` is the object `B` with `tgt = ↓B`.
    pub fn untranspose(&self, base: &MPObj) -> Result<IntMor, IntRelError> {
        if self.tgt != base.shifted() {
            return Err(IntRelError::Mismatch("target is not the shift of the given object".into()));
        }
        let (sp, sm) = (base.plus.len(), base.minus.len());
        let src = &self.src;
        let keep = |r: &FinRel, dom: &[String], cod: &[String], star_dom: Option<usize>, star_cod: Option<usize>| {
            FinRel::from_pairs(
                dom,
                cod,
                r.pairs.iter().copied().filter(|&(a, b)| Some(a) != star_dom && Some(b) != star_cod),
            )
        };
        Ok(IntMor {
            r11: self.r11.clone(),
            r12: keep(&self.r12, &src.plus, &base.plus, None, Some(sp)),
            r21: keep(&self.r21, &base.minus, &src.minus, Some(sm), None),
            r22: keep(&self.r22, &base.minus, &base.plus, Some(sm), Some(sp)),
            src: src.clone(),
            tgt: base.clone(),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.src.to_json(),
            "target": self.tgt.to_json(),
            "R11": self.r11.to_json(),
            "R12": self.r12.to_json(),
            "R21": self.r21.to_json(),
            "R22": self.r22.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<IntMor, IntRelError> {
        let get = |k: &str| v.get(k).ok_or_else(|| IntRelError::Json(format!("missing {k}")));
        let src = MPObj::from_json(get("source")?)?;
        let tgt = MPObj::from_json(get("target")?)?;
        let m = IntMor {
            r11: FinRel::from_json(get("R11")?)?,
            r12: FinRel::from_json(get("R12")?)?,
            r21: FinRel::from_json(get("R21")?)?,
            r22: FinRel::from_json(get("R22")?)?,
            src,
            tgt,
        };
        let shape = |r: &FinRel, d: &[String], c: &[String]| r.dom == d && r.cod == c;
        let (a, b) = (&m.src, &m.tgt);
        if !(shape(&m.r11, &a.plus, &a.minus)
            && shape(&m.r12, &a.plus, &b.plus)
            && shape(&m.r21, &b.minus, &a.minus)
            && shape(&m.r22, &b.minus, &b.plus))
        {
            return Err(IntRelError::Mismatch("block carriers disagree with the objects".into()));
        }
        Ok(m)
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("{prefix}{k}")).collect()
}

fn random_rel(rng: &mut impl Rng, dom: &[String], cod: &[String], density: f64) -> FinRel {
    let mut r = FinRel::empty(dom, cod);
    for a in 0..dom.len() {
        for b in 0..cod.len() {
            if rng.gen_bool(density) {
                r.pairs.insert((a, b));
            }
        }
    }
    r
}

fn random_subset(rng: &mut impl Rng, n: usize) -> Set {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

/// A random object with carriers of size at most `max`.
pub fn random_obj(rng: &mut impl Rng, name: &str, max: usize) -> MPObj {
    let (p, m) = (rng.gen_range(0..=max), rng.gen_range(0..=max));
    let plus = labels(&format!("{name}+"), p);
    let minus = labels(&format!("{name}-"), m);
    let (mp_plus, mp_minus) = (random_subset(rng, p), random_subset(rng, m));
    MPObj { plus, minus, mp_plus, mp_minus }
}

pub fn random_mor(rng: &mut impl Rng, src: &MPObj, tgt: &MPObj, density: f64) -> IntMor {
    IntMor {
        r11: random_rel(rng, &src.plus, &src.minus, density),
        r12: random_rel(rng, &src.plus, &tgt.plus, density),
        r21: random_rel(rng, &tgt.minus, &src.minus, density),
        r22: random_rel(rng, &tgt.minus, &tgt.plus, density),
        src: src.clone(),
        tgt: tgt.clone(),
    }
}

/// A random positive map `src → tgt`: blocks are drawn at random and then
/// repaired to meet the three positivity conditions. Returns `None` when
/// the multipoints admit no repair (for instance a non-empty `mp(A⁺)` with
/// nothing in `mp(B⁺)` to reach).
pub fn random_pos(rng: &mut impl Rng, src: &MPObj, tgt: &MPObj, density: f64) -> Option<IntMor> {
    let mut r = random_mor(rng, src, tgt, density);
    // Condition 3: R22 avoids mp(B⁻) on the input side and mp(B⁺) on the output.
    r.r22.pairs.retain(|&(a, b)| !tgt.mp_minus.contains(&a) && !tgt.mp_plus.contains(&b));
    // Condition 1: exactly mp(A⁺) reaches mp(B⁺).
    r.r12.pairs.retain(|&(a, b)| src.mp_plus.contains(&a) || !tgt.mp_plus.contains(&b));
    for &a in &src.mp_plus {
        if r.r12.pairs.iter().all(|&(x, b)| x != a || !tgt.mp_plus.contains(&b)) {
            let b = *tgt.mp_plus.iter().nth(rng.gen_range(0..tgt.mp_plus.len().max(1)))?;
            r.r12.pairs.insert((a, b));
        }
    }
    // Condition 2: mp(B⁻) reaches exactly mp(A⁻).
    r.r21.pairs.retain(|&(b, a)| !tgt.mp_minus.contains(&b) || src.mp_minus.contains(&a));
    for &a in &src.mp_minus {
        if r.r21.pairs.iter().all(|&(b, x)| x != a || !tgt.mp_minus.contains(&b)) {
            let b = *tgt.mp_minus.iter().nth(rng.gen_range(0..tgt.mp_minus.len().max(1)))?;
            r.r21.pairs.insert((b, a));
        }
    }
    debug_assert!(r.is_pos());
    Some(r)
}

/// Every map between two objects, for tiny carriers.
pub fn all_mors(src: &MPObj, tgt: &MPObj) -> Vec<IntMor> {
    let slots: Vec<(usize, usize, usize)> = [
        (0, src.plus.len(), src.minus.len()),
        (1, src.plus.len(), tgt.plus.len()),
        (2, tgt.minus.len(), src.minus.len()),
        (3, tgt.minus.len(), tgt.plus.len()),
    ]
    .iter()
    .flat_map(|&(blk, d, c)| (0..d).flat_map(move |a| (0..c).map(move |b| (blk, a, b))))
    .collect();
    assert!(slots.len() <= 20, "hom-set too large to enumerate");
    let base = IntMor::empty(src, tgt);
    (0u32..1 << slots.len())
        .map(|bits| {
            let mut m = base.clone();
            for (k, &(blk, a, b)) in slots.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    let r = match blk {
                        0 => &mut m.r11,
                        1 => &mut m.r12,
                        2 => &mut m.r21,
                        _ => &mut m.r22,
                    };
                    r.pairs.insert((a, b));
                }
            }
            m
        })
        .collect()
}

/// Every multipointed object whose carriers have the given sizes.
pub fn all_objs(name: &str, plus: usize, minus: usize) -> Vec<MPObj> {
    let p = labels(&format!("{name}+"), plus);
    let m = labels(&format!("{name}-"), minus);
    let mut out = Vec::new();
    for sp in 0u32..1 << plus {
        for sm in 0u32..1 << minus {
            let pick = |bits: u32, n: usize| (0..n).filter(|k| bits >> k & 1 == 1).collect::<Set>();
            out.push(MPObj { plus: p.clone(), minus: m.clone(), mp_plus: pick(sp, plus), mp_minus: pick(sm, minus) });
        }
    }
    out
}

/// Searches maps between singleton-carrier objects for one that is
/// positive but not negative.
pub fn pos_not_neg_witness() -> Option<IntMor> {
    for a in all_objs("A", 1, 1) {
        for b in all_objs("B", 1, 1) {
            if let Some(m) = all_mors(&a, &b).into_iter().find(|m| m.is_pos() && !m.is_neg()) {
                return Some(m);
            }
        }
    }
    None
}

/// Every object with carriers of at most `max` elements per side.
fn small_objs(name: &str, max: usize, with_mp: bool) -> Vec<MPObj> {
    let mut out = Vec::new();
    for p in 0..=max {
        for m in 0..=max {
            if with_mp {
                out.extend(all_objs(name, p, m));
            } else {
                out.push(MPObj { plus: labels(&format!("{name}+"), p), minus: labels(&format!("{name}-"), m), mp_plus: Set::new(), mp_minus: Set::new() });
            }
        }
    }
    out
}

fn expect(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn compose(s: &IntMor, r: &IntMor) -> Result<IntMor, String> {
    s.after(r).map_err(|e| e.to_string())
}

/// A random positive map, retrying with fresh objects until one exists.
fn sample_pos(rng: &mut impl Rng, src: Option<&MPObj>, max: usize) -> (MPObj, MPObj, IntMor) {
    loop {
        let a = src.cloned().unwrap_or_else(|| random_obj(rng, "A", max));
        let b = random_obj(rng, "B", max);
        if let Some(r) = random_pos(rng, &a, &b, 0.4) {
            return (a, b, r);
        }
    }
}

/// Runs the `Int(Rel)` suite: category laws, closure of `Pos` and `Neg`,
/// duality, shifts, and the adjunction bijection.
pub fn run_suite(seed: u64, samples: usize) -> Vec<LawOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut o = LawOutcome::new("identities (exhaustive, carriers <= 2)");
    for a in small_objs("A", 2, false) {
        for b in small_objs("B", 2, false) {
            for r in all_mors(&a, &b) {
                o.record(compose(&IntMor::id(&b), &r).and_then(|l| {
                    let rr = compose(&r, &IntMor::id(&a))?;
                    expect(l == r && rr == r, || format!("identity law fails on {}", r.to_json()))
                }));
            }
        }
    }
    out.push(o);

    let mut o = LawOutcome::new("associativity (exhaustive, carriers <= 1)");
    let objs = small_objs("O", 1, false);
    for a in &objs {
        for b in &objs {
            let rs = all_mors(a, b);
            for c in &objs {
                let ss = all_mors(b, c);
                for d in &objs {
                    let ts = all_mors(c, d);
                    for r in &rs {
                        for s in &ss {
                            let sr = s.after(r).expect("composable");
                            for t in &ts {
                                let ts_ = t.after(s).expect("composable");
                                let (x, y) = (t.after(&sr).expect("composable"), ts_.after(r).expect("composable"));
                                o.record(expect(x == y, || format!("associativity fails on {}", r.to_json())));
                            }
                        }
                    }
                }
            }
        }
    }
    out.push(o);

    let mut o = LawOutcome::new("associativity (random, carriers <= 3)");
    for _ in 0..samples {
        let objs: Vec<MPObj> = ["A", "B", "C", "D"].iter().map(|n| random_obj(&mut rng, n, 3)).collect();
        let r = random_mor(&mut rng, &objs[0], &objs[1], 0.35);
        let s = random_mor(&mut rng, &objs[1], &objs[2], 0.35);
        let t = random_mor(&mut rng, &objs[2], &objs[3], 0.35);
        o.record((|| {
            let x = compose(&t, &compose(&s, &r)?)?;
            let y = compose(&compose(&t, &s)?, &r)?;
            expect(x == y, || "associativity fails".into())
        })());
    }
    out.push(o);

    let mut o = LawOutcome::new("pos closed under composition");
    for _ in 0..samples {
        let (a, b, r) = sample_pos(&mut rng, None, 3);
        let (_, c, s) = sample_pos(&mut rng, Some(&b), 3);
        o.record(compose(&s, &r).and_then(|sr| {
            expect(sr.is_pos(), || format!("{} -> {} -> {}: composite not positive", a.to_json(), b.to_json(), c.to_json()))
        }));
    }
    out.push(o);

    let mut o = LawOutcome::new("neg closed under composition");
    for _ in 0..samples {
        // A negative map is the dual of a positive one.
        let (_, b, r) = sample_pos(&mut rng, None, 3);
        let (_, _, s) = sample_pos(&mut rng, Some(&b), 3);
        let (rn, sn) = (r.dual(), s.dual());
        o.record(compose(&rn, &sn).and_then(|x| {
            expect(rn.is_neg() && sn.is_neg() && x.is_neg(), || "composite of negative maps not negative".into())
        }));
    }
    out.push(o);

    let mut o = LawOutcome::new("tensor preserves positivity");
    for _ in 0..samples {
        let (_, _, r) = sample_pos(&mut rng, None, 2);
        let (_, _, s) = sample_pos(&mut rng, None, 2);
        let t = r.tensor(&s);
        o.record(expect(t.is_pos() && r.dual().tensor(&s.dual()).is_neg(), || "tensor of positive maps not positive".into()));
    }
    out.push(o);

    let mut o = LawOutcome::new("duality swaps pos and neg (exhaustive, carriers <= 1)");
    for a in small_objs("A", 1, true) {
        for b in small_objs("B", 1, true) {
            for r in all_mors(&a, &b) {
                let d = r.dual();
                o.record(expect(
                    r.is_pos() == d.is_neg() && r.is_neg() == d.is_pos() && d.dual() == r,
                    || format!("duality fails on {}", r.to_json()),
                ));
            }
        }
    }
    out.push(o);

    let mut o = LawOutcome::new("shift functors");
    for _ in 0..samples {
        let objs: Vec<MPObj> = ["A", "B", "C"].iter().map(|n| random_obj(&mut rng, n, 3)).collect();
        let r = random_mor(&mut rng, &objs[0], &objs[1], 0.4);
        let s = random_mor(&mut rng, &objs[1], &objs[2], 0.4);
        o.record(compose(&s, &r).and_then(|sr| {
            let lhs = sr.down();
            let rhs = compose(&s.down(), &r.down())?;
            expect(
                lhs == rhs && IntMor::id(&objs[0]).down() == IntMor::id(&objs[0].shifted()) && r.down().is_pos() && r.up().is_neg(),
                || "shift is not a functor into pos/neg".into(),
            )
        }));
    }
    out.push(o);

    let mut o = LawOutcome::new("adjunction bijection (exhaustive, singleton carriers)");
    for a in all_objs("A", 1, 1) {
        for b in all_objs("B", 1, 1) {
            o.record(check_bijection(&a, &b));
        }
    }
    out.push(o);

    let mut o = LawOutcome::new("adjunction round trip");
    for _ in 0..samples {
        let a = random_obj(&mut rng, "A", 3);
        let b = random_obj(&mut rng, "B", 3);
        let r = random_mor(&mut rng, &a, &b, 0.4);
        let t = r.transpose();
        o.record(expect(t.is_pos() && t.untranspose(&b).as_ref() == Ok(&r), || format!("round trip fails on {}", r.to_json())));
    }
    out.push(o);

    let mut o = LawOutcome::new("adjunction naturality");
    for _ in 0..samples {
        // g: A' → A positive, R: A → B, h: B → B'.
        let (_, a, g) = sample_pos(&mut rng, None, 2);
        let b = random_obj(&mut rng, "B", 2);
        let b2 = random_obj(&mut rng, "C", 2);
        let r = random_mor(&mut rng, &a, &b, 0.4);
        let h = random_mor(&mut rng, &b, &b2, 0.4);
        o.record((|| {
            let pre = compose(&r, &g)?.transpose() == compose(&r.transpose(), &g)?;
            let post = compose(&h, &r)?.transpose() == compose(&h.down(), &r.transpose())?;
            expect(pre && post, || "transpose is not natural".into())
        })());
    }
    out.push(o);

    let mut o = LawOutcome::new("feedback-free composite is relational composition");
    for _ in 0..samples {
        let objs: Vec<MPObj> = ["A", "B", "C"]
            .iter()
            .map(|n| {
                let mut x = random_obj(&mut rng, n, 3);
                x.minus.clear();
                x.mp_minus.clear();
                x
            })
            .collect();
        let r = random_mor(&mut rng, &objs[0], &objs[1], 0.4);
        let s = random_mor(&mut rng, &objs[1], &objs[2], 0.4);
        o.record(compose(&s, &r).and_then(|sr| {
            expect(sr.r12 == s.r12.after(&r.r12) && sr.r11 == r.r11, || "composite differs from relational composition".into())
        }));
    }
    out.push(o);

    let mut o = LawOutcome::new("positive but not negative witness");
    o.record(expect(pos_not_neg_witness().is_some(), || "no witness among singleton-carrier maps".into()));
    out.push(o);

    out
}

/// Transposition is a bijection from `Int(A, B)` onto `Pos(A, ↓B)`.
pub fn check_bijection(a: &MPObj, b: &MPObj) -> Result<(), String> {
    let plain = all_mors(a, b);
    let positive: BTreeSet<IntMorKey> =
        all_mors(a, &b.shifted()).into_iter().filter(IntMor::is_pos).map(IntMorKey).collect();
    let images: BTreeSet<IntMorKey> = plain.iter().map(|r| IntMorKey(r.transpose())).collect();
    expect(images.len() == plain.len(), || "transpose is not injective".into())?;
    expect(images == positive, || format!("{} positive maps, {} transposes", positive.len(), images.len()))?;
    for t in &positive {
        let back = t.0.untranspose(b).map_err(|e| e.to_string())?;
        expect(back.transpose() == t.0, || "untranspose is not inverse".into())?;
    }
    Ok(())
}

/// Orders maps by their block contents for set comparisons.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntMorKey(IntMor);

impl IntMorKey {
    fn key(&self) -> [&BTreeSet<(usize, usize)>; 4] {
        [&self.0.r11.pairs, &self.0.r12.pairs, &self.0.r21.pairs, &self.0.r22.pairs]
    }
}

impl PartialOrd for IntMorKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntMorKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}
