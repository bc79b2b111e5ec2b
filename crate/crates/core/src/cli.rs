//! Command-line front end.
//!
//! Settings are resolved in three layers: built-in defaults, then a
//! `key = value` config file (from `--config` or `POLGOI_CONFIG`), then
//! command-line flags.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cutelim::{normalize, CutElimError, Strategy};
use crate::exec::{self, ExecError};
use crate::goi::{self, GoiError, Mode};
use crate::intrel::{self, IntMor, IntRelError};
use crate::proof::{for_each_proof, Proof, ProofError, Sequent};
use crate::relcore::laws::{self, LawOutcome};
use crate::relcore::{BlockRel, RelError, Window};

pub const CONFIG_ENV: &str = "POLGOI_CONFIG";

const DEMO: &str = include_str!("../data/intrel_demo.json");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config {path}:{line}: {msg}")]
    Config { path: PathBuf, line: usize, msg: String },
    #[error("{path}: {source}")]
    Proof { path: PathBuf, source: ProofError },
    #[error(transparent)]
    Goi(#[from] GoiError),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error(transparent)]
    CutElim(#[from] CutElimError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    IntRel(#[from] IntRelError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad input, 3 for internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Config { .. } | CliError::Proof { .. } | CliError::Json(_) => 2,
            _ => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Rel,
    Pinj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Leftmost,
    Innermost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Pretty,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub mode: Mode,
    pub window_size: usize,
    pub n_alpha: usize,
    pub max_size: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub output: Output,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Rel,
            window_size: 16,
            n_alpha: 0,
            max_size: 6,
            seed: 0,
            strategy: Strategy::Leftmost,
            output: Output::Pretty,
        }
    }
}

impl RunConfig {
    pub fn window(&self) -> Result<Window, CliError> {
        Window::new(self.window_size, self.n_alpha).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path, text: &str) -> Result<(), CliError> {
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::Config { path: path.to_path_buf(), line: k + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<u64>().map_err(|_| err(format!("{key} needs a number, got {v:?}")));
            match key {
                "mode" => self.mode = parse_mode(value).ok_or_else(|| err(format!("unknown mode {value:?}")))?,
                "window" | "window_size" => self.window_size = num(value)? as usize,
                "n_alpha" => self.n_alpha = num(value)? as usize,
                "max_size" => self.max_size = num(value)? as usize,
                "seed" => self.seed = num(value)?,
                "strategy" => {
                    self.strategy = parse_strategy(value).ok_or_else(|| err(format!("unknown strategy {value:?}")))?
                }
                "output" => {
                    self.output = match value {
                        "pretty" => Output::Pretty,
                        "json" => Output::Json,
                        _ => return Err(err(format!("unknown output {value:?}"))),
                    }
                }
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        Ok(())
    }

    fn apply_flags(&mut self, g: &GlobalArgs) {
        if let Some(m) = g.mode {
            self.mode = match m {
                ModeArg::Rel => Mode::Rel,
                ModeArg::Pinj => Mode::PInjDegenerate,
            };
        }
        if let Some(s) = g.strategy {
            self.strategy = match s {
                StrategyArg::Leftmost => Strategy::Leftmost,
                StrategyArg::Innermost => Strategy::Innermost,
            };
        }
        self.window_size = g.window.unwrap_or(self.window_size);
        self.n_alpha = g.n_alpha.unwrap_or(self.n_alpha);
        self.max_size = g.max_size.unwrap_or(self.max_size);
        self.seed = g.seed.unwrap_or(self.seed);
        if g.json {
            self.output = Output::Json;
        }
    }
}

fn parse_mode(s: &str) -> Option<Mode> {
    match s {
        "rel" => Some(Mode::Rel),
        "pinj" => Some(Mode::PInjDegenerate),
        _ => None,
    }
}

fn parse_strategy(s: &str) -> Option<Strategy> {
    match s {
        "leftmost" => Some(Strategy::Leftmost),
        "innermost" => Some(Strategy::Innermost),
        _ => None,
    }
}

#[derive(Debug, Parser)]
#[command(name = "polgoi", about = "Two-layered geometry of interaction for polarized multiplicative linear logic")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Config file of `key = value` lines (default: $POLGOI_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Window size of the explicit relational oracle.
    #[arg(long, global = true)]
    window: Option<usize>,
    /// The natural number picked out by the distinguished point.
    #[arg(long = "n-alpha", global = true)]
    n_alpha: Option<usize>,
    /// Rule budget for enumerated proofs.
    #[arg(long = "max-size", global = true)]
    max_size: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    strategy: Option<StrategyArg>,
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a proof file and print its conclusion.
    Check { file: PathBuf },
    /// Print both layers of the interpretation.
    Interp { file: PathBuf },
    /// Print the execution formula on both layers.
    Exec { file: PathBuf },
    /// Eliminate cuts.
    Normalize {
        file: PathBuf,
        /// Print every reduction step.
        #[arg(long)]
        trace: bool,
    },
    /// Run a verifier over every enumerated proof up to --max-size rules.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        /// Comma-separated atom names for enumeration.
        #[arg(long, default_value = "X,Y")]
        atoms: String,
    },
    /// Seeded law suites for the relational model and Int(Rel).
    Laws {
        /// Random cases per law.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// Transpose a map along the shift adjunction; defaults to a bundled example.
    IntrelDemo { file: Option<PathBuf> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    Invariance,
    Focus,
    Converse,
}

/// Parses arguments, runs the command, prints output and returns the exit
/// code: 0 when every requested check passed, 1 when a check failed, 2 on
/// bad input and 3 on an internal error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut out = String::new();
    let code = match run(&cli, &mut out) {
        Ok(passed) => i32::from(!passed),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    print!("{out}");
    code
}

/// Resolves the configuration for a set of flags.
fn resolve_config(g: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    let path = g.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    if let Some(path) = path {
        let text = read(&path)?;
        cfg.apply_file(&path, &text)?;
    }
    cfg.apply_flags(g);
    if cfg.n_alpha >= cfg.window_size {
        return Err(CliError::Usage(format!("n_alpha {} must be below the window size {}", cfg.n_alpha, cfg.window_size)));
    }
    Ok(cfg)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Reads and checks a proof file.
pub fn load_proof(path: &Path) -> Result<(Proof, Sequent), CliError> {
    let text = read(path)?;
    let meaningful = text.lines().any(|l| !l.split('#').next().unwrap_or("").trim().is_empty());
    if !meaningful {
        return Err(CliError::Usage(format!("{} contains no proof", path.display())));
    }
    let wrap = |source| CliError::Proof { path: path.to_path_buf(), source };
    let p = Proof::parse(&text).map_err(wrap)?;
    let s = p.check().map_err(wrap)?;
    Ok((p, s))
}

fn emit_json(out: &mut String, v: &Value) {
    out.push_str(&v.to_string());
    out.push('\n');
}

fn pretty_matrix(out: &mut String, title: &str, r: &BlockRel) {
    let _ = writeln!(out, "{title} ({} -> {}):", iface(r.dom()), iface(r.cod()));
    for i in 0..r.rows() {
        let row: Vec<&str> = (0..r.cols()).map(|j| r.get(i, j).code()).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
}

fn iface(ws: &[crate::relcore::WireType]) -> String {
    if ws.is_empty() {
        return "I".into();
    }
    ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("⊗")
}

fn run(cli: &Cli, out: &mut String) -> Result<bool, CliError> {
    let cfg = resolve_config(&cli.global)?;
    let json = cfg.output == Output::Json;
    match &cli.command {
        Command::Check { file } => {
            let (p, s) = load_proof(file)?;
            if json {
                emit_json(out, &json!({"sequent": s.to_string(), "rules": p.rule_count(), "cuts": p.cut_count()}));
            } else {
                let _ = writeln!(out, "{s}");
                let _ = writeln!(out, "{} rules, {} cuts", p.rule_count(), p.cut_count());
            }
            Ok(true)
        }
        Command::Interp { file } => {
            let (p, _) = load_proof(file)?;
            let ip = goi::interp(&p, cfg.mode)?;
            if json {
                emit_json(out, &ip.to_json());
            } else {
                let _ = writeln!(out, "{}", ip.sequent);
                for o in &ip.layout.occurrences {
                    let _ = writeln!(out, "  {:<24} upper {:?} lower {:?}", o.formula, o.upper, o.lower);
                }
                pretty_matrix(out, "upper", &ip.upper);
                pretty_matrix(out, "lower", &ip.lower);
            }
            Ok(true)
        }
        Command::Exec { file } => {
            let (p, s) = load_proof(file)?;
            let (upper, lower) = exec::execute(&p, cfg.mode)?;
            if json {
                emit_json(out, &json!({"sequent": s.to_string(), "upper": upper.to_json(), "lower": lower.to_json()}));
            } else {
                let _ = writeln!(out, "{s}");
                pretty_matrix(out, "Ex upper", &upper);
                pretty_matrix(out, "Ex lower", &lower);
            }
            Ok(true)
        }
        Command::Normalize { file, trace } => {
            let (p, _) = load_proof(file)?;
            let (nf, steps) = normalize(&p, cfg.strategy)?;
            let nf_seq = nf.check().map_err(|source| CliError::Proof { path: file.clone(), source })?;
            let count = steps.len();
            if json {
                let steps: Vec<Value> = if *trace {
                    steps
                        .iter()
                        .map(|(r, q)| json!({"kind": r.kind.to_string(), "path": r.path, "proof": q.to_string()}))
                        .collect()
                } else {
                    Vec::new()
                };
                emit_json(
                    out,
                    &json!({"steps": steps, "step_count": count, "normal_form": nf.to_string(), "sequent": nf_seq.to_string()}),
                );
            } else {
                if *trace {
                    for (k, (r, q)) in steps.iter().enumerate() {
                        let _ = writeln!(out, "{:>3}. {} at {:?}\n     {}", k + 1, r.kind, r.path, q);
                    }
                }
                let _ = writeln!(out, "normal form after {} steps: {nf}", steps.len());
                let _ = writeln!(out, "{nf_seq}");
            }
            Ok(true)
        }
        Command::Verify { kind, atoms } => verify(&cfg, *kind, atoms, out),
        Command::Laws { cases } => {
            let mut all = laws::run_model_laws(cfg.seed, *cases, cfg.window()?);
            all.extend(intrel::run_suite(cfg.seed, (*cases).min(500)));
            Ok(emit_outcomes(out, &all, json))
        }
        Command::IntrelDemo { file } => {
            let text = match file {
                Some(f) => read(f)?,
                None => DEMO.to_string(),
            };
            intrel_demo(&text, json, out)
        }
    }
}

fn emit_outcomes(out: &mut String, all: &[LawOutcome], json: bool) -> bool {
    for o in all {
        if json {
            emit_json(out, &serde_json::to_value(o).expect("outcome serializes"));
        } else {
            let status = if o.passed() { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{status} {:<55} {:>6} cases {:>4} failures", o.law, o.cases, o.failures);
            if let Some(f) = &o.first_failure {
                let _ = writeln!(out, "     first failure: {f}");
            }
        }
    }
    all.iter().all(LawOutcome::passed)
}

fn verify(cfg: &RunConfig, kind: VerifyKind, atoms: &str, out: &mut String) -> Result<bool, CliError> {
    let atoms: Vec<&str> = atoms.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
    if atoms.is_empty() {
        return Err(CliError::Usage("--atoms needs at least one atom".into()));
    }
    let json = cfg.output == Output::Json;
    if kind == VerifyKind::Converse {
        let r = exec::check_converse(cfg.max_size, &atoms, cfg.mode)?;
        if json {
            let mut v = serde_json::to_value(&r)?;
            v["passed"] = r.violations.is_empty().into();
            emit_json(out, &v);
        } else {
            let _ = writeln!(
                out,
                "converse up to {} rules: {} nonfocused proofs, {} squares, {} commute trivially, {} violations",
                cfg.max_size,
                r.proofs_scanned,
                r.squares_checked,
                r.trivial_commutes,
                r.violations.len()
            );
            for v in &r.violations {
                let _ = writeln!(out, "  violation at {} in {}\n    {}", v.formula, v.sequent, v.proof);
            }
        }
        return Ok(r.violations.is_empty());
    }

    let (mut checked, mut failed) = (0usize, 0usize);
    let mut err = None;
    for_each_proof(cfg.max_size, &atoms, |p, s| {
        if err.is_some() {
            return;
        }
        let report = match kind {
            VerifyKind::Invariance => {
                exec::check_invariance(p, cfg.strategy, cfg.mode).map(|r| (r.passed(), serde_json::to_value(r)))
            }
            VerifyKind::Focus if s.positives() == 1 => {
                exec::check_focus(p, cfg.mode).map(|r| (r.passed(), serde_json::to_value(r)))
            }
            _ => return,
        };
        match report {
            Ok((passed, value)) => {
                checked += 1;
                if !passed {
                    failed += 1;
                }
                if json {
                    let mut v = value.expect("report serializes");
                    v["id"] = json!(checked - 1);
                    v["passed"] = json!(passed);
                    emit_json(out, &v);
                } else if !passed {
                    let _ = writeln!(out, "FAIL {}", value.expect("report serializes"));
                }
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    if !json {
        let what = match kind {
            VerifyKind::Invariance => "invariance",
            _ => "focus",
        };
        let _ = writeln!(out, "{what} up to {} rules: {checked} proofs checked, {failed} failed", cfg.max_size);
    }
    Ok(failed == 0)
}

fn intrel_demo(text: &str, json: bool, out: &mut String) -> Result<bool, CliError> {
    let v: Value = serde_json::from_str(text)?;
    let r = IntMor::from_json(&v)?;
    let t = r.transpose();
    let back = t.untranspose(&r.tgt)?;
    let round_trip = back == r;
    let bijection = if r.src.plus.len() <= 1 && r.src.minus.len() <= 1 && r.tgt.plus.len() <= 1 && r.tgt.minus.len() <= 1 {
        Some(intrel::check_bijection(&r.src, &r.tgt).is_ok())
    } else {
        None
    };
    let passed = t.is_pos() && round_trip && bijection != Some(false);
    if json {
        emit_json(
            out,
            &json!({
                "map": r.to_json(),
                "transpose": t.to_json(),
                "transpose_is_pos": t.is_pos(),
                "round_trip": round_trip,
                "bijection_on_hom_sets": bijection,
            }),
        );
    } else {
        let _ = writeln!(out, "map R: {}\n", serde_json::to_string_pretty(&r.to_json())?);
        let _ = writeln!(out, "transpose R': {}\n", serde_json::to_string_pretty(&t.to_json())?);
        let _ = writeln!(out, "R' positive: {}", t.is_pos());
        let _ = writeln!(out, "stripping R' gives R back: {round_trip}");
        if let Some(b) = bijection {
            let _ = writeln!(out, "transpose is a bijection onto the positive maps: {b}");
        }
    }
    Ok(passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_layers_under_flags() {
        let mut cfg = RunConfig::default();
        cfg.apply_file(Path::new("t.conf"), "# comment\nmode = pinj\nseed=5\nstrategy = innermost # trailing\n")
            .unwrap();
        assert_eq!((cfg.mode, cfg.seed, cfg.strategy), (Mode::PInjDegenerate, 5, Strategy::Innermost));
        let err = cfg.apply_file(Path::new("t.conf"), "window = big").unwrap_err();
        assert!(err.to_string().contains("t.conf:1"));
    }

    #[test]
    fn bad_n_alpha_is_a_usage_error() {
        assert_eq!(main_with_args(["polgoi", "--window", "4", "--n-alpha", "4", "laws", "--cases", "1"]), 2);
    }

    #[test]
    fn bundled_demo_passes() {
        let mut out = String::new();
        assert!(intrel_demo(DEMO, true, &mut out).unwrap());
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["transpose_is_pos"], json!(true));
    }
}
