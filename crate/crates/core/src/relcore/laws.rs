//! Seeded law suites for the relational model. Every law is written once
//! against [`RelModel`] and evaluated both on entry matrices and on the
//! explicit window relations; a case passes when the two sides agree in
//! each model and the entry result denotes the window result.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BlockModel, BlockRel, Entry, RelError, RelModel, Window, WindowModel, WireType};
use crate::formula::Formula;
use crate::goi;

/// Summary of one law over a batch of random cases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawOutcome {
    pub law: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl LawOutcome {
    pub fn new(law: &str) -> LawOutcome {
        LawOutcome { law: law.to_string(), cases: 0, failures: 0, first_failure: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    pub fn record(&mut self, ok: Result<(), String>) {
        self.cases += 1;
        if let Err(msg) = ok {
            self.failures += 1;
            self.first_failure.get_or_insert(msg);
        }
    }
}

pub fn random_iface(rng: &mut impl Rng, min: usize, max: usize) -> Vec<WireType> {
    let n = rng.gen_range(min..=max);
    (0..n).map(|_| if rng.gen_bool(0.7) { WireType::U } else { WireType::One }).collect()
}

/// A random matrix with about `density` of its entries non-zero.
pub fn random_block(rng: &mut impl Rng, dom: &[WireType], cod: &[WireType], density: f64) -> BlockRel {
    let mut r = BlockRel::zero(dom, cod);
    for (i, &dst) in cod.iter().enumerate() {
        for (j, &src) in dom.iter().enumerate() {
            if !rng.gen_bool(density) {
                continue;
            }
            let legal: Vec<Entry> =
                [Entry::Point, Entry::Id].into_iter().filter(|e| e.is_legal(src, dst)).collect();
            if let Some(&e) = legal.choose(rng) {
                r.set(i, j, e);
            }
        }
    }
    r
}

fn cat(parts: &[&[WireType]]) -> Vec<WireType> {
    parts.concat()
}

/// Permutation `A ⊗ B → B ⊗ A`.
fn swap<M: RelModel>(m: &M, a: &[WireType], b: &[WireType]) -> M::Rel {
    let sigma: Vec<usize> = (a.len()..a.len() + b.len()).chain(0..a.len()).collect();
    m.perm(&cat(&[a, b]), &sigma)
}

/// Left and right side of each equation.
pub type Sides<M> = Vec<(<M as RelModel>::Rel, <M as RelModel>::Rel)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    Yanking,
    IteratedYanking,
    Vanishing,
    Naturality,
    Dinaturality,
    Superposing,
    RetractionPadding,
    ZeroTrace,
}

impl Law {
    pub const ALL: [Law; 8] = [
        Law::Yanking,
        Law::IteratedYanking,
        Law::Vanishing,
        Law::Naturality,
        Law::Dinaturality,
        Law::Superposing,
        Law::RetractionPadding,
        Law::ZeroTrace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Yanking => "yanking",
            Law::IteratedYanking => "iterated generalized yanking",
            Law::Vanishing => "vanishing",
            Law::Naturality => "naturality",
            Law::Dinaturality => "dinaturality",
            Law::Superposing => "superposing",
            Law::RetractionPadding => "retraction padding",
            Law::ZeroTrace => "zero trace",
        }
    }
}

/// Random inputs of a law: relations plus the interfaces it needs.
#[derive(Clone, Debug)]
pub struct Case {
    pub rels: Vec<BlockRel>,
    pub ifaces: Vec<Vec<WireType>>,
}

impl Law {
    pub fn sample(self, rng: &mut impl Rng) -> Case {
        let d = rng.gen_range(0.2..0.6);
        let mut iface = |min, max| random_iface(rng, min, max);
        let (x, y, z, a, b) = (iface(0, 2), iface(1, 2), iface(0, 2), iface(0, 2), iface(0, 2));
        let w = iface(0, 2);
        let mut blk = |dom: &[WireType], cod: &[WireType]| random_block(rng, dom, cod, d);
        let rels = match self {
            Law::Yanking => vec![blk(&x, &y), blk(&y, &z)],
            Law::IteratedYanking => vec![blk(&x, &a), blk(&a, &b), blk(&b, &y)],
            Law::Vanishing => vec![blk(&cat(&[&x, &a, &b]), &cat(&[&y, &a, &b]))],
            Law::Naturality => vec![blk(&cat(&[&x, &a]), &cat(&[&y, &a])), blk(&y, &z), blk(&w, &x)],
            Law::Dinaturality => vec![blk(&cat(&[&x, &a]), &cat(&[&y, &b])), blk(&b, &a)],
            Law::Superposing => vec![blk(&w, &z), blk(&cat(&[&x, &a]), &cat(&[&y, &a]))],
            Law::RetractionPadding => {
                let t = if rng.gen_bool(0.5) { WireType::U } else { WireType::One };
                vec![random_block(rng, &cat(&[&x, &[t]]), &cat(&[&y, &[t]]), d)]
            }
            Law::ZeroTrace => vec![blk(&cat(&[&x, &a]), &cat(&[&y, &a]))],
        };
        Case { rels, ifaces: vec![x, y, z, a, b, w] }
    }

/// Both sides of every equation the law asserts on the case.
    pub fn sides<M: RelModel>(self, m: &M, c: &Case, rels: &[M::Rel]) -> Result<Sides<M>, RelError> {
        let [x, y, _z, a, b, _w] = <&[Vec<WireType>; 6]>::try_from(c.ifaces.as_slice())
            .map_err(|_| RelError::Interface("law case needs six interfaces".into()))?;
        let tr = |f: &M::Rel, k: usize| m.trace(f, k);
        Ok(match self {
            Law::Yanking => {
                // f: X → Y, g: Y → Z; Tr^Y(s ∘ (f ⊗ g)) = g ∘ f.
                let (f, g) = (&rels[0], &rels[1]);
                let z = m.cod_of(g).to_vec();
                let body = m.compose(&swap(m, y, &z), &m.tensor(f, g))?;
                let plain = swap(m, y, y);
                vec![(tr(&body, y.len())?, m.compose(g, f)?), (tr(&plain, y.len())?, m.id(y))]
            }
            Law::IteratedYanking => {
                // f: X → A, g: A → B, h: B → Y traced over B ⊗ A.
                let (f, g, h) = (&rels[0], &rels[1], &rels[2]);
                let (nx, na, nb) = (x.len(), a.len(), b.len());
                // X ⊗ B ⊗ A → B ⊗ X ⊗ A
                let pre_sigma: Vec<usize> = (nx..nx + nb).chain(0..nx).chain(nx + nb..nx + nb + na).collect();
                let pre = m.perm(&cat(&[x, b, a]), &pre_sigma);
                // Y ⊗ A ⊗ B → Y ⊗ B ⊗ A
                let ny = y.len();
                let post_sigma: Vec<usize> = (0..ny).chain(ny + na..ny + na + nb).chain(ny..ny + na).collect();
                let post = m.perm(&cat(&[y, a, b]), &post_sigma);
                let body = m.compose(&post, &m.compose(&m.tensor_all(&[h.clone(), f.clone(), g.clone()]), &pre)?)?;
                vec![(tr(&body, na + nb)?, m.compose(h, &m.compose(g, f)?)?)]
            }
            Law::Vanishing => {
                let f = &rels[0];
                let whole = tr(f, a.len() + b.len())?;
                let nested = tr(&tr(f, b.len())?, a.len())?;
                vec![(whole, nested), (tr(f, 0)?, f.clone())]
            }
            Law::Naturality => {
                let (f, g, h) = (&rels[0], &rels[1], &rels[2]);
                let lhs = m.compose(&m.tensor(g, &m.id(a)), &m.compose(f, &m.tensor(h, &m.id(a)))?)?;
                let rhs = m.compose(g, &m.compose(&tr(f, a.len())?, h)?)?;
                vec![(tr(&lhs, a.len())?, rhs)]
            }
            Law::Dinaturality => {
                // f: X ⊗ A → Y ⊗ B, g: B → A.
                let (f, g) = (&rels[0], &rels[1]);
                let lhs = m.compose(&m.tensor(&m.id(y), g), f)?;
                let rhs = m.compose(f, &m.tensor(&m.id(x), g))?;
                vec![(tr(&lhs, a.len())?, tr(&rhs, b.len())?)]
            }
            Law::Superposing => {
                let (g, f) = (&rels[0], &rels[1]);
                vec![(tr(&m.tensor(g, f), a.len())?, m.tensor(g, &tr(f, a.len())?))]
            }
            Law::RetractionPadding => {
                let f = &rels[0];
                let t = *m.dom_of(f).last().expect("padding case has a fed-back wire");
                let (r, bang) = match t {
                    WireType::U => (m.r_alpha(), m.bang_alpha()),
                    WireType::One => (m.r_one(), m.bang_one()),
                };
                let one = [WireType::One];
                let zero = m.zero(&one, &one);
                let lhs = m.compose(
                    &m.tensor(&m.id(y), &bang),
                    &m.compose(&m.tensor(f, &zero), &m.tensor(&m.id(x), &r))?,
                )?;
                vec![(lhs, f.clone())]
            }
            Law::ZeroTrace => {
                let f = &rels[0];
                let za = m.zero(a, a);
                let left = tr(&m.compose(f, &m.tensor(&m.id(x), &za))?, a.len())?;
                let right = tr(&m.compose(&m.tensor(&m.id(y), &za), f)?, a.len())?;
                let xs: Vec<usize> = (0..x.len()).collect();
                let ys: Vec<usize> = (0..y.len()).collect();
                let restricted = m.compose(
                    &m.quasi_proj(&cat(&[y, a]), &ys),
                    &m.compose(f, &m.quasi_inj(&cat(&[x, a]), &xs))?,
                )?;
                vec![(left, restricted.clone()), (right, restricted)]
            }
        })
    }
}

/// Evaluates a law on one case in both models.
pub fn check_case(law: Law, c: &Case, window: &WindowModel) -> Result<(), String> {
    let show = |e: RelError| format!("{}: {e}", law.name());
    let block = law.sides(&BlockModel, c, &c.rels).map_err(show)?;
    let lifted: Vec<_> = c.rels.iter().map(|r| window.from_block(r)).collect();
    let win = law.sides(window, c, &lifted).map_err(show)?;
    for (k, ((bl, br), (wl, wr))) in block.iter().zip(&win).enumerate() {
        if bl != br {
            return Err(format!("{} equation {k}: entry sides differ\n{bl:?}\nvs\n{br:?}", law.name()));
        }
        if wl != wr {
            return Err(format!("{} equation {k}: window sides differ", law.name()));
        }
        if &window.from_block(bl) != wl {
            return Err(format!("{} equation {k}: entry result does not denote the window result", law.name()));
        }
    }
    Ok(())
}

/// `(r_A, !_A)` assembled from `m` copies of `(r_α, !_α)`, regrouped as
/// `U^m ⊗ 1^m`.
pub fn lifted_retraction<M: RelModel>(m: &M, k: usize) -> Result<(M::Rel, M::Rel), RelError> {
    let (r_pairs, bang_pairs) = pairwise(m, k, m.r_alpha(), m.bang_alpha(), WireType::U)?;
    Ok((r_pairs, bang_pairs))
}

/// `(r^m, !^m)` on `1^m`.
pub fn retraction_one<M: RelModel>(m: &M, k: usize) -> Result<(M::Rel, M::Rel), RelError> {
    pairwise(m, k, m.r_one(), m.bang_one(), WireType::One)
}

fn pairwise<M: RelModel>(m: &M, k: usize, r: M::Rel, bang: M::Rel, t: WireType) -> Result<(M::Rel, M::Rel), RelError> {
    let rs = m.tensor_all(&vec![r; k]);
    let bangs = m.tensor_all(&vec![bang; k]);
    let interleaved: Vec<WireType> = (0..k).flat_map(|_| [t, WireType::One]).collect();
    // (t ⊗ 1)^k → t^k ⊗ 1^k
    let sigma: Vec<usize> = (0..k).map(|i| 2 * i).chain((0..k).map(|i| 2 * i + 1)).collect();
    let group = m.perm(&interleaved, &sigma);
    let grouped: Vec<WireType> = sigma.iter().map(|&s| interleaved[s]).collect();
    let ungroup = m.perm(&grouped, &crate::proof::invert_perm(&sigma));
    Ok((m.compose(&group, &rs)?, m.compose(&bangs, &ungroup)?))
}

/// The lifting square of `A^U ⊗ 𝟙_A ⊳ A^U` over `α^m`, all equations.
pub fn lifting_sides<M: RelModel>(m: &M, k: usize) -> Result<Sides<M>, RelError> {
    let (r_a, bang_a) = lifted_retraction(m, k)?;
    let (r_m, bang_m) = retraction_one(m, k)?;
    let p = m.tensor_all(&vec![m.alpha(); k]);
    let p1 = m.tensor(&p, &m.id(&vec![WireType::One; k]));
    Ok(vec![
        (m.compose(&bang_a, &r_a)?, m.id(&vec![WireType::U; k])),
        (m.compose(&bang_m, &r_m)?, m.id(&vec![WireType::One; k])),
        (m.compose(&r_a, &p)?, m.compose(&p1, &r_m)?),
        (m.compose(&bang_a, &p1)?, m.compose(&p, &bang_m)?),
    ])
}

/// A random unit-free formula with at most `depth` nested connectives.
pub fn random_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    let atoms = ["X", "Y"];
    if depth == 0 || rng.gen_bool(0.3) {
        let name = atoms.choose(rng).expect("atoms");
        return if rng.gen_bool(0.5) { Formula::atom(name) } else { Formula::neg_atom(name) };
    }
    match rng.gen_range(0..4) {
        0 => Formula::tensor(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        1 => Formula::par(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        2 => Formula::down(random_formula(rng, depth - 1)),
        _ => Formula::up(random_formula(rng, depth - 1)),
    }
}

/// Lifting squares for the retraction of a formula's shape.
pub fn check_lifting(a: &Formula, window: &WindowModel) -> Result<(), String> {
    let name = format!("lifting at {a}");
    let k = goi::shape(a).map_err(|e| format!("{name}: {e}"))?.one_leaves;
    let (r, bang) = goi::retraction_ra(a).map_err(|e| format!("{name}: {e}"))?;
    let (gr, gb) = lifted_retraction(&BlockModel, k).map_err(|e| format!("{name}: {e}"))?;
    if (r, bang) != (gr, gb) {
        return Err(format!("{name}: interpreter retraction differs from the tensor of (r_α, !_α)"));
    }
    let block = lifting_sides(&BlockModel, k).map_err(|e| format!("{name}: {e}"))?;
    let win = lifting_sides(window, k).map_err(|e| format!("{name}: {e}"))?;
    for (j, ((bl, br), (wl, wr))) in block.iter().zip(&win).enumerate() {
        if bl != br || wl != wr || &window.from_block(bl) != wl {
            return Err(format!("{name}: equation {j} fails"));
        }
    }
    Ok(())
}

/// Runs every model law on `cases` seeded cases plus the lifting squares
/// on `cases` random formulas.
pub fn run_model_laws(seed: u64, cases: usize, window: Window) -> Vec<LawOutcome> {
    let wm = WindowModel::new(window);
    let mut out = Vec::new();
    for (i, law) in Law::ALL.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let mut o = LawOutcome::new(law.name());
        for _ in 0..cases {
            let c = law.sample(&mut rng);
            o.record(check_case(law, &c, &wm));
        }
        out.push(o);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(Law::ALL.len() as u64));
    let mut o = LawOutcome::new("retraction lifting");
    for _ in 0..cases {
        let a = random_formula(&mut rng, 3);
        o.record(check_lifting(&a, &wm));
    }
    out.push(o);
    out
}
