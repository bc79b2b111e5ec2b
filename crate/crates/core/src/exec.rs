//! Execution formulas on both layers and the verifiers built on them.

use serde::Serialize;
use thiserror::Error;

use crate::cutelim::{normalize, CutElimError, Strategy};
use crate::formula::Pretty;
use crate::goi::{interp, mp, pairing, GoiError, InterpPair, Mode};
use crate::proof::{check, Proof, ProofError, Sequent};
use crate::relcore::{BlockModel, BlockRel, Entry, RelError, RelModel, WireType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExecError {
    #[error("conclusion is not focused: {0}")]
    NotFocused(String),
    #[error("layout mismatch: {0}")]
    Layout(String),
    #[error(transparent)]
    Goi(#[from] GoiError),
    #[error(transparent)]
    CutElim(#[from] CutElimError),
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error(transparent)]
    Rel(#[from] RelError),
}

/// The symmetry fed back along the cut wires, one swap per cut pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSymmetry {
    pub upper: BlockRel,
    pub lower: BlockRel,
}

fn swap_perm(pair: &[usize], width: usize) -> Vec<usize> {
    let inv = crate::proof::invert_perm(pair);
    (0..width).map(|k| width + pair[k]).chain((0..width).map(|j| inv[j])).collect()
}

pub fn sigma_of(s: &Sequent) -> CutSymmetry {
    let mut upper = BlockRel::id(&[]);
    let mut lower = BlockRel::id(&[]);
    for (a, _) in &s.delta {
        let pu = pairing(a);
        let w = pu.len();
        upper = upper.tensor(&BlockRel::perm(&vec![WireType::U; 2 * w], &swap_perm(&pu, w)));
        let m = crate::goi::shape(a).map(|sh| sh.one_leaves).unwrap_or(0);
        let id: Vec<usize> = (0..m).collect();
        lower = lower.tensor(&BlockRel::perm(&vec![WireType::One; 2 * m], &swap_perm(&id, m)));
    }
    CutSymmetry { upper, lower }
}

pub fn build_sigma(p: &Proof) -> Result<CutSymmetry, ExecError> {
    Ok(sigma_of(&check(p)?))
}

fn ex_layer(m: &BlockRel, sigma: &BlockRel, gamma: usize) -> Result<BlockRel, ExecError> {
    let n = m.rows();
    if gamma + sigma.rows() != n {
        return Err(ExecError::Layout(format!("{} gamma + {} cut wires vs {n}", gamma, sigma.rows())));
    }
    let ty = m.dom()[..gamma].to_vec();
    let lifted = BlockRel::id(&ty).tensor(sigma);
    Ok(lifted.after(m)?.trace(sigma.rows())?)
}

/// `Tr((Id_Γ ⊗ σ) ∘ M)` over the cut wires, on both layers.
pub fn ex(ip: &InterpPair, sigma: &CutSymmetry) -> Result<(BlockRel, BlockRel), ExecError> {
    let upper = ex_layer(&ip.upper, &sigma.upper, ip.layout.gamma_upper())?;
    let lower = ex_layer(&ip.lower, &sigma.lower, ip.layout.gamma_lower())?;
    Ok((upper, lower))
}

/// Interprets and executes `p`.
pub fn execute(p: &Proof, mode: Mode) -> Result<(BlockRel, BlockRel), ExecError> {
    let ip = interp(p, mode)?;
    ex(&ip, &sigma_of(&ip.sequent))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Layer {
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    /// Reduction step after which the value changed; `None` for the final
    /// comparison against the normal form's own interpretation.
    pub step: Option<usize>,
    pub layer: Layer,
    pub row: usize,
    pub col: usize,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub proof: String,
    pub steps: usize,
    pub mismatch: Option<Mismatch>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

fn first_diff(a: &BlockRel, b: &BlockRel) -> Option<(usize, usize, Entry, Entry)> {
    if a.dom() != b.dom() || a.cod() != b.cod() {
        return Some((usize::MAX, usize::MAX, Entry::Zero, Entry::Zero));
    }
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a.get(i, j) != b.get(i, j) {
                return Some((i, j, a.get(i, j), b.get(i, j)));
            }
        }
    }
    None
}

fn compare(step: Option<usize>, want: &(BlockRel, BlockRel), got: &(BlockRel, BlockRel)) -> Option<Mismatch> {
    for (layer, a, b) in [(Layer::Upper, &want.0, &got.0), (Layer::Lower, &want.1, &got.1)] {
        if let Some((row, col, e, g)) = first_diff(a, b) {
            return Some(Mismatch { step, layer, row, col, expected: e.code().into(), got: g.code().into() });
        }
    }
    None
}

/// Normalizes `p`, checking that every step preserves the executed value
/// on both layers and that the normal form's interpretation equals it.
pub fn check_invariance(p: &Proof, strategy: Strategy, mode: Mode) -> Result<InvarianceReport, ExecError> {
    let base = execute(p, mode)?;
    let mut report = InvarianceReport { proof: p.to_string(), steps: 0, mismatch: None };
    if p.cut_count() == 0 {
        return Ok(report);
    }
    let (nf, trace) = normalize(p, strategy)?;
    report.steps = trace.len();
    for (k, (_, q)) in trace.iter().enumerate() {
        if let Some(m) = compare(Some(k + 1), &base, &execute(q, mode)?) {
            report.mismatch = Some(m);
            return Ok(report);
        }
    }
    let ip = interp(&nf, mode)?;
    report.mismatch = compare(None, &base, &(ip.upper, ip.lower));
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FocusReport {
    pub proof: String,
    /// Index in `gamma` of the formula whose multipoint is tested.
    pub formula: usize,
    pub commutes: bool,
    pub nontrivial: bool,
    pub range_ok: bool,
    /// Entries where the two composites differ: `(row, col, lhs, rhs)`.
    pub witnesses: Vec<(usize, usize, String, String)>,
    #[serde(skip)]
    pub lhs: BlockRel,
    #[serde(skip)]
    pub rhs: BlockRel,
}

impl FocusReport {
    pub fn passed(&self) -> bool {
        self.commutes && self.range_ok
    }

    /// A nontrivially commuting square with the range condition.
    pub fn holds_nontrivially(&self) -> bool {
        self.passed() && self.nontrivial
    }
}

/// The multipoint square for the formula at `gamma[idx]`, with `ℳ` the
/// rest of `gamma`:
/// `Ex(⟦π⟧) ∘ ι mp(A)` against `ι mp(ℳ) ρ ∘ Ex(f_π) ∘ ι_A`.
pub fn square_at(p: &Proof, idx: usize, mode: Mode) -> Result<FocusReport, ExecError> {
    let ip = interp(p, mode)?;
    let (eu, el) = ex(&ip, &sigma_of(&ip.sequent))?;
    let gamma = &ip.sequent.gamma;
    let occ = &ip.layout.occurrences;
    let bm = BlockModel;
    let u_iface = eu.dom().to_vec();
    let l_iface = el.dom().to_vec();

    let a_upper: Vec<usize> = occ[idx].upper.clone().collect();
    let a_lower: Vec<usize> = occ[idx].lower.clone().collect();
    let rest_upper: Vec<usize> = (0..gamma.len()).filter(|&k| k != idx).flat_map(|k| occ[k].upper.clone()).collect();
    let rest_lower: Vec<usize> = (0..gamma.len()).filter(|&k| k != idx).flat_map(|k| occ[k].lower.clone()).collect();

    let mut mp_rest = BlockRel::id(&[]);
    for (k, f) in gamma.iter().enumerate() {
        if k != idx {
            mp_rest = mp_rest.tensor(&mp(f)?);
        }
    }
    let iota_a_u = bm.quasi_inj(&u_iface, &a_upper);
    let iota_a_l = bm.quasi_inj(&l_iface, &a_lower);
    let iota_rest_u = bm.quasi_inj(&u_iface, &rest_upper);
    let rho_rest_l = bm.quasi_proj(&l_iface, &rest_lower);

    let lhs = eu.after(&iota_a_u.after(&mp(&gamma[idx])?)?)?;
    let lower_col = el.after(&iota_a_l)?;
    let rhs = iota_rest_u.after(&mp_rest)?.after(&rho_rest_l)?.after(&lower_col)?;
    let range_ok = lower_col.ranges_over(&rest_lower);
    let mut witnesses = Vec::new();
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            if lhs.get(i, j) != rhs.get(i, j) {
                witnesses.push((i, j, lhs.get(i, j).code().to_string(), rhs.get(i, j).code().to_string()));
            }
        }
    }
    Ok(FocusReport {
        proof: p.to_string(),
        formula: idx,
        commutes: witnesses.is_empty(),
        nontrivial: !lhs.is_zero(),
        range_ok,
        witnesses,
        lhs,
        rhs,
    })
}

/// The square at the focus of a focused proof.
pub fn check_focus(p: &Proof, mode: Mode) -> Result<FocusReport, ExecError> {
    let s = check(p)?;
    if s.positives() != 1 {
        return Err(ExecError::NotFocused(s.to_string()));
    }
    square_at(p, s.focus().unwrap(), mode)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConverseViolation {
    pub proof: String,
    pub sequent: String,
    pub formula: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConverseReport {
    pub proofs_scanned: usize,
    pub squares_checked: usize,
    pub trivial_commutes: usize,
    pub violations: Vec<ConverseViolation>,
}

/// For a proof of a sequent with no positive formula, checks every
/// formula containing a shift: its square must not commute nontrivially.
/// Returns the number of squares checked and any violations.
pub fn converse_on(p: &Proof, s: &Sequent, mode: Mode, report: &mut ConverseReport) -> Result<(), ExecError> {
    if s.positives() != 0 {
        return Ok(());
    }
    report.proofs_scanned += 1;
    for (k, a) in s.gamma.iter().enumerate() {
        if !a.contains_shift() {
            continue;
        }
        let r = square_at(p, k, mode)?;
        report.squares_checked += 1;
        if r.holds_nontrivially() {
            report.violations.push(ConverseViolation {
                proof: p.to_string(),
                sequent: s.to_string(),
                formula: Pretty(a).to_string(),
            });
        } else if r.passed() {
            report.trivial_commutes += 1;
        }
    }
    Ok(())
}

/// Scans every enumerated nonfocused proof up to `budget` rules.
pub fn check_converse(budget: usize, atoms: &[&str], mode: Mode) -> Result<ConverseReport, ExecError> {
    let mut report = ConverseReport::default();
    let mut err = None;
    crate::proof::for_each_proof(budget, atoms, |p, s| {
        if err.is_none() {
            if let Err(e) = converse_on(p, s, mode, &mut report) {
                err = Some(e);
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn eta_x() -> Proof {
        Proof::down(Proof::up(Proof::ax(Formula::neg_atom("X")), 1), 0)
    }

    #[test]
    fn cut_free_sigma_is_empty() {
        let s = build_sigma(&eta_x()).unwrap();
        assert_eq!(s.upper.rows(), 0);
        let ip = interp(&eta_x(), Mode::Rel).unwrap();
        assert_eq!(ex(&ip, &s).unwrap(), (ip.upper.clone(), ip.lower.clone()));
    }

    #[test]
    fn atomic_cut_sigma_is_a_swap() {
        let ax = Proof::ax(Formula::neg_atom("X"));
        let p = Proof::cut(ax.clone(), Proof::ex(ax, vec![1, 0]));
        let s = build_sigma(&p).unwrap();
        assert_eq!(s.upper, BlockRel::perm(&[WireType::U; 2], &[1, 0]));
        assert_eq!(s.lower, BlockRel::perm(&[WireType::One; 2], &[1, 0]));
    }

    #[test]
    fn eta_square_commutes_nontrivially() {
        let r = check_focus(&eta_x(), Mode::Rel).unwrap();
        assert!(r.holds_nontrivially(), "{r:?}");
    }

    #[test]
    fn invariance_small() {
        for p in crate::proof::enumerate_proofs(6, &["X", "Y"]) {
            let r = check_invariance(&p, Strategy::Leftmost, Mode::Rel).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
