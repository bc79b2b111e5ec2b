//! One line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::{antidiagonal_one, data, delta_pattern, CheckedWindow, I, ONE, P, DISPLAY_ORDER, U, Z};
use polgoi::cutelim::{normalize, reducible_cuts, step, RedexKind, Strategy};
use polgoi::exec::{check_converse, check_focus, check_invariance, execute, sigma_of, square_at};
use polgoi::goi::{interp, interp_literal, Mode};
use polgoi::intrel;
use polgoi::proof::{for_each_proof, is_focused, Proof};
use polgoi::relcore::codec::fold_eval_window;
use polgoi::relcore::laws::{run_model_laws, LawOutcome};
use polgoi::relcore::{decode, encode, fold_eval, BlockRel, Entry, RelModel, Window, WindowModel, WindowRel, WireType};

const ATOMS: [&str; 2] = ["X", "Y"];
const SEED: u64 = 20241017;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq(got: &BlockRel, want: &BlockRel, what: &str) -> Result<(), String> {
    ensure(got == want, || format!("{what}: got {} want {}", got.to_json(), want.to_json()))
}

fn rows(dom: &[WireType], cod: &[WireType], r: &[&[Entry]]) -> BlockRel {
    BlockRel::from_rows(dom, cod, r).unwrap()
}

fn eta_goldens() -> Outcome {
    let ip = interp(&data("eta_axiom.mllp"), Mode::Rel).map_err(|e| e.to_string())?;
    let want = rows(&[U; 4], &[U; 4], &[&[Z, Z, Z, P], &[Z, Z, I, Z], &[Z, I, Z, Z], &[P, Z, Z, Z]]);
    eq(&ip.upper, &want, "upper")?;
    eq(&ip.lower, &antidiagonal_one(), "lower")?;
    Ok("4x4 upper and 2x2 lower exact".into())
}

fn tensor_goldens() -> Outcome {
    let ip = interp(&data("shifted_tensor.mllp"), Mode::Rel).map_err(|e| e.to_string())?;
    eq(&ip.upper.block(3..6, 0..3), &rows(&[U; 3], &[U; 3], &[&[Z, Z, Z], &[P, Z, I], &[P, I, Z]]), "first factor")?;
    eq(&ip.upper.block(0..3, 3..6), &rows(&[U; 3], &[U; 3], &[&[Z, P, P], &[Z, Z, I], &[Z, I, Z]]), "second factor")?;
    ensure(ip.upper.block(0..3, 0..3).is_zero() && ip.upper.block(3..6, 3..6).is_zero(), || "diagonal blocks not empty".into())?;
    eq(&ip.lower, &rows(&[ONE; 3], &[ONE; 3], &[&[Z, I, I], &[I, Z, Z], &[I, Z, Z]]), "lower")?;
    Ok("both factors and the lower antidiagonal exact".into())
}

fn box_extrusion() -> Outcome {
    let pis: Vec<Proof> = ["box_pi1.mllp", "box_pi2.mllp", "box_pi3.mllp"].iter().map(|n| data(n)).collect();
    for k in 0..2 {
        let hit = reducible_cuts(&pis[k])
            .iter()
            .filter(|r| r.kind == RedexKind::BoxExtrusion)
            .any(|r| step(&pis[k], r).is_ok_and(|q| q == pis[k + 1]));
        ensure(hit, || format!("no extrusion from pi{} to pi{}", k + 1, k + 2))?;
    }
    let (nf, _) = normalize(&pis[0], Strategy::Leftmost).map_err(|e| e.to_string())?;
    ensure(nf == data("eta_axiom.mllp"), || format!("normal form {nf}"))?;
    for (i, p) in pis.iter().enumerate() {
        let ip = interp(p, Mode::Rel).map_err(|e| e.to_string())?;
        eq(&ip.lower.conjugate(&DISPLAY_ORDER), &delta_pattern(i + 1), &format!("lower of pi{}", i + 1))?;
        let (_, lower) = execute(p, Mode::Rel).map_err(|e| e.to_string())?;
        eq(&lower, &antidiagonal_one(), &format!("executed lower of pi{}", i + 1))?;
    }
    Ok("two extrusion steps, three delta patterns, executed value antidiagonal".into())
}

fn invariance() -> Outcome {
    let (mut checked, mut steps, mut first) = (0usize, 0usize, None);
    for_each_proof(10, &ATOMS, |p, _| {
        if p.cut_count() == 0 || first.is_some() {
            return;
        }
        match check_invariance(p, Strategy::Leftmost, Mode::Rel) {
            Ok(r) if r.passed() => {
                checked += 1;
                steps += r.steps;
            }
            Ok(r) => first = Some(format!("{r:?}")),
            Err(e) => first = Some(format!("{p}: {e}")),
        }
    });
    match first {
        Some(f) => Err(f),
        None => Ok(format!("{checked} proofs with cuts, {steps} steps, 0 mismatches")),
    }
}

fn focusing() -> Outcome {
    let (mut checked, mut first) = (0usize, None);
    for_each_proof(10, &ATOMS, |p, s| {
        if !is_focused(s) || first.is_some() {
            return;
        }
        match check_focus(p, Mode::Rel) {
            Ok(r) if r.passed() => checked += 1,
            Ok(r) => first = Some(format!("{r:?}")),
            Err(e) => first = Some(format!("{p}: {e}")),
        }
    });
    if let Some(f) = first {
        return Err(f);
    }
    let one = rows(&[ONE], &[U; 4], &[&[Z], &[Z], &[Z], &[P]]);
    let two = rows(&[ONE], &[U; 6], &[&[Z], &[Z], &[Z], &[Z], &[P], &[P]]);
    for (name, want) in [("eta_axiom.mllp", one), ("shifted_tensor.mllp", two)] {
        let r = square_at(&data(name), 0, Mode::Rel).map_err(|e| e.to_string())?;
        ensure(r.holds_nontrivially(), || format!("{name}: {r:?}"))?;
        eq(&r.lhs, &want, name)?;
        eq(&r.rhs, &want, name)?;
    }
    Ok(format!("{checked} focused proofs commute with range condition, 2 example composites exact"))
}

fn converse() -> Outcome {
    let r = check_converse(8, &ATOMS, Mode::Rel).map_err(|e| e.to_string())?;
    ensure(r.violations.is_empty(), || format!("{:?}", r.violations.first()))?;
    ensure(r.squares_checked > 0, || "no squares checked".into())?;
    Ok(format!(
        "{} nonfocused proofs, {} squares, {} trivial commutes, 0 violations",
        r.proofs_scanned, r.squares_checked, r.trivial_commutes
    ))
}

fn summarize(outcomes: &[LawOutcome], min_cases: usize) -> Outcome {
    let cases: usize = outcomes.iter().map(|o| o.cases).sum();
    for o in outcomes {
        ensure(o.passed(), || format!("{}: {} failures, first {:?}", o.law, o.failures, o.first_failure))?;
        ensure(o.cases >= min_cases, || format!("{}: only {} cases", o.law, o.cases))?;
    }
    Ok(format!("{} laws, {cases} cases, 0 failures", outcomes.len()))
}

fn model_laws() -> Outcome {
    summarize(&run_model_laws(SEED, 1000, Window::default()), 1000)
}

fn closure() -> Outcome {
    let window = WindowModel::new(Window::default());
    let checked = CheckedWindow::new(window);
    let (mut proofs, mut first) = (0usize, None);
    for_each_proof(8, &ATOMS, |p, _| {
        if first.is_some() {
            return;
        }
        let res = (|| -> Result<(), String> {
            let fast = interp(p, Mode::Rel).map_err(|e| e.to_string())?;
            let (up, low, layout) = interp_literal(&checked, p, Mode::Rel).map_err(|e| e.to_string())?;
            let classify = |r: &WindowRel| window.to_block(r).map_err(|e| format!("{p}: {e}"));
            eq(&classify(&up)?, &fast.upper, &format!("{p} upper"))?;
            eq(&classify(&low)?, &fast.lower, &format!("{p} lower"))?;
            let sigma = sigma_of(&fast.sequent);
            let run = |m: &WindowRel, s: &BlockRel, gamma: usize| -> Result<BlockRel, String> {
                let ty = checked.dom_of(m)[..gamma].to_vec();
                let lifted = checked.tensor(&checked.id(&ty), &checked.inner.from_block(s));
                let fed = checked.compose(&lifted, m).map_err(|e| e.to_string())?;
                let traced = checked.trace(&fed, s.rows()).map_err(|e| e.to_string())?;
                classify(&traced)
            };
            let want = execute(p, Mode::Rel).map_err(|e| e.to_string())?;
            eq(&run(&up, &sigma.upper, layout.gamma_upper())?, &want.0, &format!("{p} executed upper"))?;
            eq(&run(&low, &sigma.lower, layout.gamma_lower())?, &want.1, &format!("{p} executed lower"))?;
            Ok(())
        })();
        proofs += 1;
        if let Err(e) = res {
            first = Some(e);
        }
    });
    if let Some(f) = first {
        return Err(f);
    }
    let (produced, outside) = (checked.produced.get(), checked.outside.get());
    ensure(outside == 0, || format!("{outside} of {produced} intermediate relations are not entry matrices"))?;
    Ok(format!("{proofs} proofs, {produced} intermediate relations, all entries in {{0, p, 1}}"))
}

fn intrel_suite() -> Outcome {
    summarize(&intrel::run_suite(SEED, 500), 1)
}

fn codec() -> Outcome {
    let w = Window::default();
    let n = w.size as u64;
    for t in 0..n {
        let (i, k) = decode(2, t);
        ensure(encode(2, i, k) == t, || format!("j(k({t})) != {t}"))?;
        ensure(t % 2 == 0 && i == 0 && k == t / 2 || t % 2 == 1 && i == 1 && k == t / 2, || format!("k({t}) = ({i}, {k})"))?;
        for m in 1..=4 {
            let (i, k) = decode(m, t);
            ensure(encode(m, i, k) == t, || format!("arity {m}: j(k({t})) != {t}"))?;
        }
    }
    for k in 0..n {
        ensure(encode(2, 0, k) == 2 * k && encode(2, 1, k) == 2 * k + 1, || format!("j at {k}"))?;
        ensure(decode(2, encode(2, 0, k)) == (0, k) && decode(2, encode(2, 1, k)) == (1, k), || format!("k(j) at {k}"))?;
    }
    let model = WindowModel::new(w);
    let (mut proofs, mut tokens, mut first) = (0usize, 0usize, None);
    for_each_proof(6, &ATOMS, |p, _| {
        if first.is_some() {
            return;
        }
        let res = (|| -> Result<(), String> {
            let fast = interp(p, Mode::Rel).map_err(|e| e.to_string())?;
            let (up, _, _) = interp_literal(&model, p, Mode::Rel).map_err(|e| e.to_string())?;
            for t in 0..n {
                let a = fold_eval(&fast.upper, t, w).map_err(|e| e.to_string())?;
                let b = fold_eval_window(&model, &up, t).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("{p} token {t}: {a:?} vs {b:?}"))?;
                tokens += 1;
            }
            Ok(())
        })();
        proofs += 1;
        if let Err(e) = res {
            first = Some(e);
        }
    });
    match first {
        Some(f) => Err(f),
        None => Ok(format!("codec identities on {n} tokens, folded evaluation agrees on {proofs} proofs x {n} tokens ({tokens})")),
    }
}

struct Criterion {
    name: &'static str,
    tolerance: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { name: "eta-expansion golden matrices", tolerance: "exact, <1s", limit: secs(1), run: eta_goldens },
        Criterion { name: "shifted-tensor golden matrices", tolerance: "exact, <1s", limit: secs(1), run: tensor_goldens },
        Criterion { name: "box extrusion and delta patterns", tolerance: "exact, <1s", limit: secs(1), run: box_extrusion },
        Criterion { name: "execution invariance, proofs <= 10 rules", tolerance: "exact", limit: None, run: invariance },
        Criterion { name: "focusing square, focused proofs <= 10 rules", tolerance: "exact", limit: None, run: focusing },
        Criterion { name: "converse on nonfocused proofs <= 8 rules", tolerance: "exact", limit: None, run: converse },
        Criterion { name: "model laws against the window oracle (N=16)", tolerance: "0 failures, >=1000 cases per law", limit: None, run: model_laws },
        Criterion { name: "entry algebra closure, proofs <= 8 rules", tolerance: "0 failures", limit: None, run: closure },
        Criterion { name: "Int(Rel) suite", tolerance: "0 failures, <60s", limit: secs(60), run: intrel_suite },
        Criterion { name: "codec and folded evaluation, proofs <= 6 rules", tolerance: "exact", limit: None, run: codec },
    ];
    let mut failed = 0;
    for (k, c) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut res = (c.run)();
        let dt = t.elapsed();
        if let (Ok(_), Some(limit)) = (&res, c.limit) {
            if dt > limit {
                res = Err(format!("took {dt:.2?}, limit {limit:?}"));
            }
        }
        let (tag, detail) = match &res {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2}. {} ({}) in {dt:.2?}: {detail}", k + 1, c.name, c.tolerance);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
