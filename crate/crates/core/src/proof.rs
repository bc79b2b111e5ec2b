//! Sequent derivations `⊢ [Δ], Γ` with explicit cut bookkeeping.

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, FormulaError, Parser, Pretty};

/// A sequent `⊢ [Δ], Γ`. Each cut pair is `(A, A⊥)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub gamma: Vec<Formula>,
    pub delta: Vec<(Formula, Formula)>,
}

impl Sequent {
    pub fn positives(&self) -> usize {
        self.gamma.iter().filter(|f| f.is_positive()).count()
    }

    /// Index of the unique positive formula of `gamma`, if there is one.
    pub fn focus(&self) -> Option<usize> {
        let mut it = self.gamma.iter().enumerate().filter(|(_, f)| f.is_positive());
        let first = it.next()?.0;
        if it.next().is_some() {
            None
        } else {
            Some(first)
        }
    }

    /// Delta flattened as `A₁, A₁⊥, A₂, A₂⊥, …`.
    pub fn delta_flat(&self) -> Vec<Formula> {
        self.delta.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⊢ [")?;
        for (k, (a, b)) in self.delta.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}, {}", Pretty(a), Pretty(b))?;
        }
        write!(f, "]")?;
        for g in &self.gamma {
            write!(f, ", {}", Pretty(g))?;
        }
        Ok(())
    }
}

pub fn is_focused(s: &Sequent) -> bool {
    s.positives() == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Proof {
    Ax(Formula),
    Tensor(Box<Proof>, Box<Proof>),
    Par(Box<Proof>, usize, usize),
    Down(Box<Proof>, usize),
    Up(Box<Proof>, usize),
    Cut(Box<Proof>, Box<Proof>),
    /// Conclusion position `k` holds premise position `perm[k]`.
    Ex(Box<Proof>, Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum RuleName {
    Ax,
    Tensor,
    Par,
    Down,
    Up,
    Cut,
    Ex,
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleName::Ax => "ax",
            RuleName::Tensor => "tensor",
            RuleName::Par => "par",
            RuleName::Down => "dn",
            RuleName::Up => "up",
            RuleName::Cut => "cut",
            RuleName::Ex => "ex",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofError {
    #[error("{rule} rule violation: {reason}")]
    RuleViolation { rule: RuleName, reason: String },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

fn violation(rule: RuleName, reason: impl Into<String>) -> ProofError {
    ProofError::RuleViolation { rule, reason: reason.into() }
}

impl Proof {
    pub fn ax(n: Formula) -> Proof {
        Proof::Ax(n)
    }
    pub fn tensor(a: Proof, b: Proof) -> Proof {
        Proof::Tensor(Box::new(a), Box::new(b))
    }
    pub fn par(p: Proof, i: usize, j: usize) -> Proof {
        Proof::Par(Box::new(p), i, j)
    }
    pub fn down(p: Proof, i: usize) -> Proof {
        Proof::Down(Box::new(p), i)
    }
    pub fn up(p: Proof, i: usize) -> Proof {
        Proof::Up(Box::new(p), i)
    }
    pub fn cut(a: Proof, b: Proof) -> Proof {
        Proof::Cut(Box::new(a), Box::new(b))
    }
    pub fn ex(p: Proof, perm: Vec<usize>) -> Proof {
        Proof::Ex(Box::new(p), perm)
    }

    pub fn rule(&self) -> RuleName {
        match self {
            Proof::Ax(_) => RuleName::Ax,
            Proof::Tensor(..) => RuleName::Tensor,
            Proof::Par(..) => RuleName::Par,
            Proof::Down(..) => RuleName::Down,
            Proof::Up(..) => RuleName::Up,
            Proof::Cut(..) => RuleName::Cut,
            Proof::Ex(..) => RuleName::Ex,
        }
    }

    pub fn premises(&self) -> Vec<&Proof> {
        match self {
            Proof::Ax(_) => vec![],
            Proof::Tensor(a, b) | Proof::Cut(a, b) => vec![a, b],
            Proof::Par(p, ..) | Proof::Down(p, _) | Proof::Up(p, _) | Proof::Ex(p, _) => vec![p],
        }
    }

    /// Number of logical rules, exchanges not counted.
    pub fn rule_count(&self) -> usize {
        let own = usize::from(!matches!(self, Proof::Ex(..)));
        own + self.premises().iter().map(|p| p.rule_count()).sum::<usize>()
    }

    pub fn cut_count(&self) -> usize {
        let own = usize::from(matches!(self, Proof::Cut(..)));
        own + self.premises().iter().map(|p| p.cut_count()).sum::<usize>()
    }

    /// The subproof at `path` (sequence of premise indices).
    pub fn at(&self, path: &[usize]) -> Option<&Proof> {
        match path.split_first() {
            None => Some(self),
            Some((&k, rest)) => self.premises().get(k).and_then(|p| p.at(rest)),
        }
    }

    /// Replaces the subproof at `path`.
    pub fn replace_at(&self, path: &[usize], new: Proof) -> Option<Proof> {
        let Some((&k, rest)) = path.split_first() else {
            return Some(new);
        };
        let sub = |p: &Proof| p.replace_at(rest, new.clone()).map(Box::new);
        Some(match (self, k) {
            (Proof::Tensor(a, b), 0) => Proof::Tensor(sub(a)?, b.clone()),
            (Proof::Tensor(a, b), 1) => Proof::Tensor(a.clone(), sub(b)?),
            (Proof::Cut(a, b), 0) => Proof::Cut(sub(a)?, b.clone()),
            (Proof::Cut(a, b), 1) => Proof::Cut(a.clone(), sub(b)?),
            (Proof::Par(p, i, j), 0) => Proof::Par(sub(p)?, *i, *j),
            (Proof::Down(p, i), 0) => Proof::Down(sub(p)?, *i),
            (Proof::Up(p, i), 0) => Proof::Up(sub(p)?, *i),
            (Proof::Ex(p, s), 0) => Proof::Ex(sub(p)?, s.clone()),
            _ => return None,
        })
    }

    pub fn check(&self) -> Result<Sequent, ProofError> {
        check(self)
    }

    pub fn parse(text: &str) -> Result<Proof, ProofError> {
        let mut p = Parser::new(text);
        let proof = parse_proof(&mut p)?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.syntax("trailing input").into());
        }
        Ok(proof)
    }
}

/// Computes the conclusion, enforcing every side condition.
pub fn check(p: &Proof) -> Result<Sequent, ProofError> {
    let s = match p {
        Proof::Ax(n) => {
            if !n.well_formed() {
                return Err(violation(RuleName::Ax, format!("ill-formed formula {n}")));
            }
            if !n.is_negative() {
                return Err(violation(RuleName::Ax, format!("axiom formula {} must be negative", Pretty(n))));
            }
            Sequent { gamma: vec![n.clone(), n.negate()], delta: vec![] }
        }
        Proof::Tensor(a, b) => {
            let sa = check(a)?;
            let sb = check(b)?;
            let split = |s: &Sequent, side: &str| -> Result<(), ProofError> {
                let Some((last, rest)) = s.gamma.split_last() else {
                    return Err(violation(RuleName::Tensor, format!("{side} premise is empty")));
                };
                if !last.is_positive() {
                    return Err(violation(RuleName::Tensor, format!("{side} premise must end with a positive formula")));
                }
                if rest.iter().any(|f| f.is_positive()) {
                    return Err(violation(RuleName::Tensor, format!("{side} premise context must be negative")));
                }
                Ok(())
            };
            split(&sa, "left")?;
            split(&sb, "right")?;
            let (p, m) = sa.gamma.split_last().unwrap();
            let (q, n) = sb.gamma.split_last().unwrap();
            let mut gamma: Vec<Formula> = m.to_vec();
            gamma.extend_from_slice(n);
            gamma.push(Formula::tensor(p.clone(), q.clone()));
            let mut delta = sa.delta;
            delta.extend(sb.delta);
            Sequent { gamma, delta }
        }
        Proof::Par(q, i, j) => {
            let s = check(q)?;
            let (i, j) = (*i, *j);
            if i == j || i >= s.gamma.len() || j >= s.gamma.len() {
                return Err(violation(RuleName::Par, format!("bad positions {i},{j} for {} formulas", s.gamma.len())));
            }
            if !s.gamma[i].is_negative() || !s.gamma[j].is_negative() {
                return Err(violation(RuleName::Par, "both components must be negative"));
            }
            let fused = Formula::par(s.gamma[i].clone(), s.gamma[j].clone());
            let at = i.min(j);
            let mut gamma = Vec::with_capacity(s.gamma.len() - 1);
            for (k, f) in s.gamma.iter().enumerate() {
                if k == at {
                    gamma.push(fused.clone());
                } else if k != i && k != j {
                    gamma.push(f.clone());
                }
            }
            Sequent { gamma, delta: s.delta }
        }
        Proof::Down(q, i) => {
            let mut s = check(q)?;
            let i = *i;
            if i >= s.gamma.len() {
                return Err(violation(RuleName::Down, format!("position {i} out of range")));
            }
            if s.positives() > 0 {
                return Err(violation(RuleName::Down, "premise contains a positive formula"));
            }
            s.gamma[i] = Formula::down(s.gamma[i].clone());
            s
        }
        Proof::Up(q, i) => {
            let mut s = check(q)?;
            let i = *i;
            if i >= s.gamma.len() {
                return Err(violation(RuleName::Up, format!("position {i} out of range")));
            }
            if !s.gamma[i].is_positive() {
                return Err(violation(RuleName::Up, "shifted formula must be positive"));
            }
            s.gamma[i] = Formula::up(s.gamma[i].clone());
            s
        }
        Proof::Cut(a, b) => {
            let sa = check(a)?;
            let sb = check(b)?;
            let (Some((fa, ra)), Some((fb, rb))) = (sa.gamma.split_last(), sb.gamma.split_last()) else {
                return Err(violation(RuleName::Cut, "empty premise"));
            };
            if &fa.negate() != fb {
                return Err(violation(
                    RuleName::Cut,
                    format!("cut formulas {} and {} are not dual", Pretty(fa), Pretty(fb)),
                ));
            }
            let mut gamma = ra.to_vec();
            gamma.extend_from_slice(rb);
            let mut delta = sa.delta.clone();
            delta.extend(sb.delta.iter().cloned());
            delta.push((fa.clone(), fb.clone()));
            Sequent { gamma, delta }
        }
        Proof::Ex(q, perm) => {
            let s = check(q)?;
            if !is_permutation(perm, s.gamma.len()) {
                return Err(violation(RuleName::Ex, format!("{perm:?} is not a permutation of {}", s.gamma.len())));
            }
            Sequent { gamma: perm.iter().map(|&k| s.gamma[k].clone()).collect(), delta: s.delta }
        }
    };
    if s.positives() > 1 {
        return Err(violation(p.rule(), format!("conclusion {s} has more than one positive formula")));
    }
    Ok(s)
}

/// Alias kept for call sites that read better with it.
pub fn conclusion(p: &Proof) -> Result<Sequent, ProofError> {
    check(p)
}

pub fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &k in perm {
        if k >= n || seen[k] {
            return false;
        }
        seen[k] = true;
    }
    true
}

pub fn invert_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &v) in perm.iter().enumerate() {
        inv[v] = k;
    }
    inv
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proof::Ax(n) => write!(f, "(ax {n})"),
            Proof::Tensor(a, b) => write!(f, "(tensor {a} {b})"),
            Proof::Par(p, i, j) => write!(f, "(par {p} {i} {j})"),
            Proof::Down(p, i) => write!(f, "(dn {p} {i})"),
            Proof::Up(p, i) => write!(f, "(up {p} {i})"),
            Proof::Cut(a, b) => write!(f, "(cut {a} {b})"),
            Proof::Ex(p, perm) => {
                write!(f, "(ex {p} [")?;
                for (k, v) in perm.iter().enumerate() {
                    if k > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "])")
            }
        }
    }
}

fn parse_index(p: &mut Parser<'_>) -> Result<usize, ProofError> {
    p.skip_ws();
    let start = p.pos;
    while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
        p.pos += 1;
    }
    if start == p.pos {
        return Err(p.syntax("expected index").into());
    }
    std::str::from_utf8(&p.src[start..p.pos])
        .unwrap()
        .parse()
        .map_err(|_| p.syntax("index out of range").into())
}

fn parse_proof(p: &mut Parser<'_>) -> Result<Proof, ProofError> {
    p.expect(b'(')?;
    let kw = p.ident()?;
    let proof = match kw.as_str() {
        "ax" => Proof::Ax(p.formula()?),
        "tensor" => {
            let a = parse_proof(p)?;
            Proof::tensor(a, parse_proof(p)?)
        }
        "cut" => {
            let a = parse_proof(p)?;
            Proof::cut(a, parse_proof(p)?)
        }
        "par" => {
            let q = parse_proof(p)?;
            let i = parse_index(p)?;
            Proof::par(q, i, parse_index(p)?)
        }
        "dn" => {
            let q = parse_proof(p)?;
            Proof::down(q, parse_index(p)?)
        }
        "up" => {
            let q = parse_proof(p)?;
            Proof::up(q, parse_index(p)?)
        }
        "ex" => {
            let q = parse_proof(p)?;
            p.expect(b'[')?;
            let mut perm = vec![parse_index(p)?];
            while p.peek() != Some(b']') {
                perm.push(parse_index(p)?);
            }
            p.expect(b']')?;
            Proof::ex(q, perm)
        }
        other => return Err(p.syntax(&format!("unknown rule '{other}'")).into()),
    };
    p.expect(b')')?;
    Ok(proof)
}

/// Permutation moving position `k` of an `n`-element list to the end.
pub fn move_to_end(n: usize, k: usize) -> Vec<usize> {
    (0..n).filter(|&x| x != k).chain(std::iter::once(k)).collect()
}

/// Wraps `p` in an exchange unless the permutation is the identity.
pub fn with_ex(p: Proof, perm: Vec<usize>) -> Proof {
    if perm.iter().enumerate().all(|(k, &v)| k == v) {
        p
    } else {
        match p {
            // Collapse nested exchanges into one.
            Proof::Ex(q, inner) => {
                let composed: Vec<usize> = perm.iter().map(|&k| inner[k]).collect();
                with_ex(*q, composed)
            }
            q => Proof::Ex(Box::new(q), perm),
        }
    }
}

/// Bounded enumeration of canonical proofs.
///
/// Axioms are atomic. Exchanges appear only to bring the principal formula
/// of a tensor or cut premise to the last position, and are not counted
/// towards the rule budget. Every proof is produced exactly once.
pub fn enumerate_proofs(max_rules: usize, atoms: &[&str]) -> Vec<Proof> {
    let mut all = Vec::new();
    for_each_proof(max_rules, atoms, |p, _| all.push(p.clone()));
    all
}

/// Streams the same proofs as [`enumerate_proofs`], smallest first,
/// together with their conclusions. Only the buckets below `max_rules` are
/// kept in memory.
pub fn for_each_proof(max_rules: usize, atoms: &[&str], mut f: impl FnMut(&Proof, &Sequent)) {
    let mut by_size: Vec<Vec<(Proof, Sequent)>> = vec![Vec::new(); max_rules + 1];
    for size in 1..=max_rules {
        let mut bucket = Vec::new();
        let last = size == max_rules;
        let mut emit = |p: Proof| {
            let s = check(&p).expect("enumerator only builds checked proofs");
            f(&p, &s);
            if !last {
                bucket.push((p, s));
            }
        };
        grow(size, atoms, &by_size, &mut emit);
        by_size[size] = bucket;
    }
}

fn grow(size: usize, atoms: &[&str], by_size: &[Vec<(Proof, Sequent)>], emit: &mut dyn FnMut(Proof)) {
    if size == 1 {
        for a in atoms {
            emit(Proof::Ax(Formula::neg_atom(a)));
        }
        return;
    }
    // Unary rules.
    for (p, s) in &by_size[size - 1] {
        let n = s.gamma.len();
        for i in 0..n {
            for j in 0..n {
                if i != j && s.gamma[i].is_negative() && s.gamma[j].is_negative() {
                    emit(Proof::par(p.clone(), i, j));
                }
            }
        }
        if s.positives() == 0 {
            for i in 0..n {
                emit(Proof::down(p.clone(), i));
            }
        }
        if let Some(i) = s.focus() {
            emit(Proof::up(p.clone(), i));
        }
    }
    // Binary rules.
    for left in 1..size - 1 {
        let right = size - 1 - left;
        for (p1, s1) in &by_size[left] {
            for (p2, s2) in &by_size[right] {
                binary_rules(p1, s1, p2, s2, emit);
            }
        }
    }
}

fn binary_rules(p1: &Proof, s1: &Sequent, p2: &Proof, s2: &Sequent, emit: &mut dyn FnMut(Proof)) {
    // Tensor: both premises focused; the focus is moved to the end.
    if let (Some(f1), Some(f2)) = (s1.focus(), s2.focus()) {
        let a = with_ex(p1.clone(), move_to_end(s1.gamma.len(), f1));
        let b = with_ex(p2.clone(), move_to_end(s2.gamma.len(), f2));
        emit(Proof::tensor(a, b));
    }
    // Cut: any dual pair respecting the one-positive bound of the result.
    for (i, fa) in s1.gamma.iter().enumerate() {
        let dual = fa.negate();
        for (j, fb) in s2.gamma.iter().enumerate() {
            if fb != &dual {
                continue;
            }
            let rest_pos = s1.positives() + s2.positives() - 1;
            if rest_pos > 1 {
                continue;
            }
            let a = with_ex(p1.clone(), move_to_end(s1.gamma.len(), i));
            let b = with_ex(p2.clone(), move_to_end(s2.gamma.len(), j));
            emit(Proof::cut(a, b));
        }
    }
}
