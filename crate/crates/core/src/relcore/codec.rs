//! Folding `U^m` into a single `U` with the even/odd pairing
//! `j(1, n) = 2n`, `j(2, n) = 2n + 1`, nested to the left.

use std::collections::BTreeSet;

use super::{BlockRel, Entry, RelError, Window, WindowModel, WindowRel, WireType};

/// `j_m(i, n)` with 0-based component index `i < m`.
pub fn encode(m: usize, i: usize, n: u64) -> u64 {
    assert!(i < m, "component {i} out of {m}");
    if m == 1 {
        n
    } else if i == m - 1 {
        2 * n + 1
    } else {
        2 * encode(m - 1, i, n)
    }
}

/// `k_m(t)`, the inverse of [`encode`].
pub fn decode(m: usize, t: u64) -> (usize, u64) {
    assert!(m >= 1, "cannot decode into an empty tensor");
    if m == 1 {
        (0, t)
    } else if t % 2 == 1 {
        (m - 1, (t - 1) / 2)
    } else {
        decode(m - 1, t / 2)
    }
}

fn all_u(iface: &[WireType]) -> Result<(), RelError> {
    if iface.is_empty() || iface.iter().any(|&w| w != WireType::U) {
        return Err(RelError::Interface("folding needs a non-empty all-U interface".into()));
    }
    Ok(())
}

/// Evaluates the folded relation `j ∘ f ∘ k` on one token.
pub fn fold_eval(f: &BlockRel, token: u64, window: Window) -> Result<BTreeSet<u64>, RelError> {
    all_u(f.dom())?;
    all_u(f.cod())?;
    if token >= window.size as u64 {
        return Err(RelError::TokenOutsideWindow { token, size: window.size as u64 });
    }
    let (i, n) = decode(f.cols(), token);
    let mut out = BTreeSet::new();
    for k in 0..f.rows() {
        match f.get(k, i) {
            Entry::Zero => {}
            Entry::Point => {
                if n == window.n_alpha as u64 {
                    out.insert(encode(f.rows(), k, n));
                }
            }
            Entry::Id => {
                out.insert(encode(f.rows(), k, n));
            }
        }
    }
    Ok(out)
}

/// The same folded evaluation computed from an explicit window relation.
pub fn fold_eval_window(model: &WindowModel, r: &WindowRel, token: u64) -> Result<BTreeSet<u64>, RelError> {
    all_u(&r.dom)?;
    all_u(&r.cod)?;
    let size = model.window.size;
    if token >= size as u64 {
        return Err(RelError::TokenOutsideWindow { token, size: size as u64 });
    }
    let (i, n) = decode(r.dom.len(), token);
    let col = i * size + n as usize;
    let mut out = BTreeSet::new();
    for row in 0..r.bits.rows() {
        if r.bits.get(row, col) {
            out.insert(encode(r.cod.len(), row / size, (row % size) as u64));
        }
    }
    Ok(out)
}
