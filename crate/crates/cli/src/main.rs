//! `nfold`: command-line checks for fundamental n-fold groupoids of finite
//! simplicial sets.
//!
//! Exit codes: 0 pass, 1 check failed, 2 input error, 3 budget exhausted.
//! Inputs and outputs are JSON (schemas under `schemas/`); reports render
//! as text by default and as JSON with `--json`.

use clap::{Parser, Subcommand, ValueEnum};
use nfold_core::compare::{classify, discretize_psg, is_tam, PseudoNFold};
use nfold_core::error::Error;
use nfold_core::fibrancy::{is_kan, is_n2_fibrant, verify_appendix_lifts};
use nfold_core::fundamental::{
    check_iterative, check_lnuph, check_pi0_qn, fundamental_groupoid, pi1_direction_nerve,
    q_n_certified,
};
use nfold_core::groupoid::{groupoid_equivalent, FiniteGroupoid};
use nfold_core::json::{
    groupoid_from_json, msset_from_json, msset_to_json, nfold_from_json,
    sset_from_json, sset_to_json, GroupoidJson, MultiSSetJson,
};
use nfold_core::msset::ordinal_sum;
use nfold_core::nfold::NFoldGroupoid;
use nfold_core::report::Report;
use nfold_core::sset::DecSide;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "nfold", version, about = "fundamental n-fold groupoid toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input file (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Emit reports as JSON.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit reports as text (default).
    #[arg(long, global = true)]
    text: bool,
    /// Truncation bound for operations that build new levels.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Coset-enumeration budget in table rows
    /// (flag > NFOLD_BUDGET env > default 100000).
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Seed recorded in report notes for reproducibility of any sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Last,
    First,
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    #[value(name = "pi0-qn")]
    Pi0Qn,
    #[value(name = "lnerve-b")]
    LnerveB,
    Lnuph,
    Lores,
    Pkloop,
    Ttamsamani,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a simplicial set, multi-simplicial set, n-fold groupoid
    /// core, or groupoid (detected from the JSON shape).
    Validate,
    /// Nerve of a groupoid, truncated at --bound (default 3).
    Nerve,
    /// Décalage of a simplicial set.
    Decalage {
        #[arg(long, value_enum, default_value = "last")]
        side: Side,
    },
    /// Ordinal sum Or_n of a simplicial set.
    Ordsum {
        #[arg(short)]
        n: usize,
        /// Per-direction bounds, e.g. "2,2".
        #[arg(long)]
        bounds: String,
    },
    /// Diagonal of a multi-simplicial set.
    Diag,
    /// Fundamental groupoids in one direction (1-based), nerve-truncated.
    Pi1 {
        #[arg(long)]
        dir: usize,
    },
    /// The fundamental n-fold groupoid of a simplicial set.
    Qn {
        #[arg(short)]
        n: usize,
    },
    /// Weak-globularity report for an n-fold groupoid core.
    CheckWg {
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// Homotopy-discreteness report for an n-fold groupoid core.
    CheckHd,
    /// Algebraic homotopy group ω_k at a basepoint cell.
    Omega {
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// (n,2)-fibrancy report for a multi-simplicial set.
    CheckFibrant,
    /// Corner lifting verification on Or_n of a Kan-certified input.
    VerifyLifts {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        bounds: String,
    },
    /// Higher-groupoid class of a pseudo n-fold groupoid (or the
    /// multinerve view of an n-fold groupoid core).
    Classify,
    /// Discretization of an n-fold groupoid core (lands in Tam).
    Discretize,
    /// Discretization together with the verified chain of equivalences.
    Zigzag,
    /// Named structural identities.
    CheckIdentity {
        #[arg(value_enum)]
        identity: Identity,
        #[arg(short, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
}

#[derive(Serialize)]
struct ErrorJson {
    error: String,
    kind: &'static str,
}

fn fail(kind: &'static str, msg: String, code: u8) -> ExitCode {
    let e = ErrorJson { error: msg, kind };
    eprintln!("{}", serde_json::to_string(&e).unwrap());
    ExitCode::from(code)
}

fn error_exit(e: &Error) -> ExitCode {
    match e {
        Error::Unbounded { .. } => fail("budget", e.to_string(), 3),
        _ => fail("input", e.to_string(), 2),
    }
}

enum LoadedInput {
    MultiSSet(MultiSSetJson),
    Groupoid(GroupoidJson),
}

fn load_input(path: &Option<PathBuf>) -> Result<LoadedInput, String> {
    let path = path.as_ref().ok_or("missing --input")?;
    let data = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&data).map_err(|e| format!("{}: {e}", path.display()))?;
    if value.get("objects").is_some() {
        let g: GroupoidJson = serde_json::from_value(value).map_err(|e| e.to_string())?;
        Ok(LoadedInput::Groupoid(g))
    } else {
        let m: MultiSSetJson = serde_json::from_value(value).map_err(|e| e.to_string())?;
        Ok(LoadedInput::MultiSSet(m))
    }
}

fn parse_bounds(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| e.to_string()))
        .collect()
}

struct Out {
    path: Option<PathBuf>,
}

impl Out {
    fn emit(&self, s: &str) -> Result<(), String> {
        match &self.path {
            None => {
                println!("{s}");
                Ok(())
            }
            Some(p) => std::fs::write(p, format!("{s}\n")).map_err(|e| e.to_string()),
        }
    }

    fn emit_json<T: Serialize>(&self, v: &T) -> Result<(), String> {
        self.emit(&serde_json::to_string_pretty(v).unwrap())
    }
}

fn emit_report(out: &Out, rep: &Report, as_json: bool) -> Result<(), String> {
    if as_json {
        out.emit_json(rep)
    } else {
        out.emit(rep.to_string().trim_end())
    }
}

fn report_exit(rep: &Report) -> ExitCode {
    if rep.is_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli
        .budget
        .or_else(|| {
            std::env::var("NFOLD_BUDGET")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(nfold_core::fundamental::DEFAULT_BUDGET);
    let out = Out {
        path: cli.output.clone(),
    };
    match run(&cli, budget, &out) {
        Ok(code) => code,
        Err(RunError::Input(msg)) => fail("input", msg, 2),
        Err(RunError::Core(e)) => error_exit(&e),
        Err(RunError::Io(msg)) => fail("input", msg, 2),
    }
}

enum RunError {
    Input(String),
    Core(Error),
    Io(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Core(e)
    }
}

fn need_sset(cli: &Cli) -> Result<nfold_core::sset::TruncatedSSet, RunError> {
    match load_input(&cli.input).map_err(RunError::Input)? {
        LoadedInput::MultiSSet(j) => sset_from_json(&j).map_err(RunError::Core),
        LoadedInput::Groupoid(_) => Err(RunError::Input(
            "expected a simplicial set, found a groupoid".into(),
        )),
    }
}

fn need_msset(cli: &Cli) -> Result<nfold_core::msset::TruncatedMultiSSet, RunError> {
    match load_input(&cli.input).map_err(RunError::Input)? {
        LoadedInput::MultiSSet(j) => msset_from_json(&j).map_err(RunError::Core),
        LoadedInput::Groupoid(_) => Err(RunError::Input(
            "expected a multi-simplicial set, found a groupoid".into(),
        )),
    }
}

fn need_nfold(cli: &Cli) -> Result<NFoldGroupoid, RunError> {
    match load_input(&cli.input).map_err(RunError::Input)? {
        LoadedInput::MultiSSet(j) => nfold_from_json(&j).map_err(RunError::Core),
        LoadedInput::Groupoid(_) => Err(RunError::Input(
            "expected an n-fold groupoid core, found a groupoid".into(),
        )),
    }
}

fn need_groupoid(cli: &Cli) -> Result<FiniteGroupoid, RunError> {
    match load_input(&cli.input).map_err(RunError::Input)? {
        LoadedInput::Groupoid(j) => groupoid_from_json(&j).map_err(RunError::Core),
        LoadedInput::MultiSSet(_) => Err(RunError::Input(
            "expected a groupoid, found simplicial data".into(),
        )),
    }
}

fn pseudo_from_input(cli: &Cli) -> Result<PseudoNFold, RunError> {
    match load_input(&cli.input).map_err(RunError::Input)? {
        LoadedInput::MultiSSet(j) => {
            if j.nfold {
                let g = nfold_from_json(&j)?;
                Ok(PseudoNFold::from_nfold(&g, cli.bound.unwrap_or(3))?)
            } else {
                Ok(PseudoNFold::from_core(msset_from_json(&j)?)?)
            }
        }
        LoadedInput::Groupoid(j) => {
            let g = groupoid_from_json(&j)?;
            Ok(PseudoNFold::from_groupoid(&g))
        }
    }
}

fn run(cli: &Cli, budget: usize, out: &Out) -> Result<ExitCode, RunError> {
    let as_json = cli.json;
    let seed_note = cli.seed.map(|s| format!("seed {s}"));
    match &cli.command {
        Command::Validate => {
            let mut rep = match load_input(&cli.input).map_err(RunError::Input)? {
                LoadedInput::Groupoid(j) => match groupoid_from_json(&j) {
                    Ok(g) => g.validate(),
                    Err(e) => {
                        let mut r = Report::new("groupoid axioms");
                        r.violation("load", e.to_string());
                        r
                    }
                },
                LoadedInput::MultiSSet(j) => {
                    let y = msset_from_json(&j)?;
                    if j.nfold {
                        nfold_core::nfold::validate_core(&y)
                    } else {
                        y.validate()
                    }
                }
            };
            if let Some(n) = seed_note {
                rep.note(n);
            }
            emit_report(out, &rep, as_json).map_err(RunError::Io)?;
            Ok(report_exit(&rep))
        }
        Command::Nerve => {
            let g = need_groupoid(cli)?;
            let n = g.nerve(cli.bound.unwrap_or(3));
            out.emit_json(&sset_to_json(&n)).map_err(RunError::Io)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decalage { side } => {
            let x = need_sset(cli)?;
            let dec_side = match side {
                Side::Last => DecSide::Last,
                Side::First => DecSide::First,
            };
            let (dec, _, _) = x.decalage(dec_side)?;
            out.emit_json(&sset_to_json(&dec)).map_err(RunError::Io)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ordsum { n, bounds } => {
            let x = need_sset(cli)?;
            let b = parse_bounds(bounds).map_err(RunError::Input)?;
            if b.len() != *n {
                return Err(RunError::Input(format!(
                    "--bounds must list {n} entries"
                )));
            }
            let or = ordinal_sum(&x, *n, &b)?;
            out.emit_json(&msset_to_json(&or, false)).map_err(RunError::Io)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Diag => {
            let y = need_msset(cli)?;
            out.emit_json(&sset_to_json(&y.diagonal())).map_err(RunError::Io)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Pi1 { dir } => {
            let y = need_msset(cli)?;
            if *dir == 0 || *dir > y.arity() {
                return Err(RunError::Input(format!("--dir must be 1..={}", y.arity())));
            }
            let z = pi1_direction_nerve(&y, dir - 1, budget)?;
            out.emit_json(&msset_to_json(&z, false)).map_err(RunError::Io)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Qn { n } => {
            let x = need_sset(cli)?;
            let kan_to = cli.bound.unwrap_or(3).min(x.bound);
            let r = q_n_certified(&x, *n, budget, kan_to)?;
            let mut v = serde_json::to_value(msset_to_json(&r.groupoid.core, true)).unwrap();
            v["kan-certified"] = serde_json::Value::Bool(r.kan_certified);
            v["kan-checked-to"] = serde_json::Value::from(r.kan_checked_to);
            out.emit(&serde_json::to_string_pretty(&v).unwrap())
                .map_err(RunError::Io)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckWg { kmax } => {
            let g = need_nfold(cli)?;
            let rep = g.is_weakly_globular(*kmax);
            emit_report(out, &rep, as_json).map_err(RunError::Io)?;
            Ok(report_exit(&rep))
        }
        Command::CheckHd => {
            let g = need_nfold(cli)?;
            let (_, _, rep) = g.is_hd();
            emit_report(out, &rep, as_json).map_err(RunError::Io)?;
            Ok(report_exit(&rep))
        }
        Command::Omega { k, basepoint } => {
            let g = need_nfold(cli)?;
            if *k == 0 {
                let (size, _) = g.omega0()?;
                out.emit_json(&serde_json::json!({ "omega0_size": size }))
                    .map_err(RunError::Io)?;
                return Ok(ExitCode::SUCCESS);
            }
            let t = g.omega(*k, *basepoint)?;
            out.emit_json(&serde_json::json!({
                "k": k,
                "order": t.order(),
                "abelian": t.is_abelian(),
                "mul": t.mul,
            }))
            .map_err(RunError::Io)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckFibrant => {
            let y = need_msset(cli)?;
            let rep = is_n2_fibrant(&y, cli.bound.unwrap_or(2))?;
            emit_report(out, &rep, as_json).map_err(RunError::Io)?;
            Ok(report_exit(&rep))
        }
        Command::VerifyLifts { n, bounds } => {
            let x = need_sset(cli)?;
            let b = parse_bounds(bounds).map_err(RunError::Input)?;
            let kan = is_kan(&x, 4.min(x.bound));
            let mut rep = verify_appendix_lifts(&x, *n, &b)?;
            rep.clause("input Kan within bound", kan.is_pass());
            emit_report(out, &rep, as_json).map_err(RunError::Io)?;
            Ok(report_exit(&rep))
        }
        Command::Classify => {
            let x = pseudo_from_input(cli)?;
            let cr = classify(&x);
            if as_json {
                out.emit_json(&serde_json::json!({
                    "class": cr.class.to_string(),
                    "phg": cr.phg,
                    "tam": cr.tam,
                    "gpt_embedded": cr.gpt_embedded,
                    "psg": cr.psg,
                }))
                .map_err(RunError::Io)?;
            } else {
                out.emit(&format!(
                    "class: {}\n{}{}{}{}",
                    cr.class, cr.phg, cr.tam, cr.gpt_embedded, cr.psg
                ))
                .map_err(RunError::Io)?;
            }
            Ok(if cr.class == nfold_core::compare::ClassLabel::None {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Discretize => {
            let x = pseudo_from_input(cli)?;
            let (d, _) = discretize_psg(&x)?;
            out.emit_json(&msset_to_json(&d.core, false)).map_err(RunError::Io)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Zigzag => {
            let x = pseudo_from_input(cli)?;
            let (d, arrows) = discretize_psg(&x)?;
            let mut rep = Report::new("discretization chain");
            rep.clause("discretization lands in Tam", is_tam(&d).is_pass());
            for a in &arrows {
                rep.clause(a.tag.clone(), a.is_equivalence);
            }
            emit_report(out, &rep, as_json).map_err(RunError::Io)?;
            Ok(report_exit(&rep))
        }
        Command::CheckIdentity { identity, n, kmax } => {
            let rep = run_identity(cli, *identity, *n, *kmax, budget)?;
            emit_report(out, &rep, as_json).map_err(RunError::Io)?;
            Ok(report_exit(&rep))
        }
    }
}

fn run_identity(
    cli: &Cli,
    identity: Identity,
    n: usize,
    kmax: usize,
    budget: usize,
) -> Result<Report, RunError> {
    match identity {
        Identity::Pi0Qn => {
            let x = need_sset(cli)?;
            Ok(check_pi0_qn(&x, n, budget)?)
        }
        Identity::LnerveB => {
            let x = need_sset(cli)?;
            let mut rep = Report::new("iterative description");
            for k in 0..=kmax {
                let sub = check_iterative(&x, n, k, budget)?;
                rep.absorb(format!("stage k={k}"), sub);
            }
            Ok(rep)
        }
        Identity::Lnuph => {
            let x = need_sset(cli)?;
            let inner = vec![1usize; n.max(2) - 1];
            Ok(check_lnuph(&x, n.max(3), &inner[..n.max(3) - 1], budget)?)
        }
        Identity::Lores => {
            let x = need_sset(cli)?;
            let mut rep = Report::new("diagonal comparison");
            let or2 = ordinal_sum(&x, 2, &[2, 2])?;
            let diag = or2.diagonal();
            let e_diag = fundamental_groupoid(&diag, budget)?;
            let e_x = fundamental_groupoid(&x, budget)?;
            rep.clause(
                "Π₁(diagonal(Or₂X)) equivalent to Π₁X",
                groupoid_equivalent(&e_diag.groupoid, &e_x.groupoid),
            );
            Ok(rep)
        }
        Identity::Pkloop => {
            let x = need_sset(cli)?;
            let mut rep = Report::new("loop-space model");
            if x.sizes[0] != 1 {
                rep.violation("input", "pkloop check needs a reduced input (one vertex)");
                return Ok(rep);
            }
            let q = nfold_core::fundamental::q_n(&x, 2, budget)?;
            let w = q.w_arrows(1);
            let (n0, _) = w.omega0()?;
            let e = fundamental_groupoid(&x, budget)?;
            let (vg, _) = e.groupoid.vertex_group(0);
            rep.clause(
                format!("|ω₀(W₍₂,₁₎Q₂X)| = |π₁X| ({} = {})", n0, vg.order()),
                n0 == vg.order(),
            );
            let gw = w.direction_groupoid(0, &[]);
            rep.clause("ω₁ of the loop object trivial", gw.is_homotopically_discrete().0);
            Ok(rep)
        }
        Identity::Ttamsamani => {
            let x = need_sset(cli)?;
            let q = nfold_core::fundamental::q_n(&x, 2, budget)?;
            let mut rep = Report::new("discretization identities");
            let view = PseudoNFold::from_nfold(&q, 3)?;
            let (d, arrows) = discretize_psg(&view)?;
            rep.clause("D₂Q₂ lands in Tam", is_tam(&d).is_pass());
            let t = d.fundamental_groupoid()?;
            let p = nfold_core::compare::wg_fundamental(&q)?;
            rep.clause(
                "T⁽²⁾D₂ ≅ Π₀⁽²⁾Q₂",
                nfold_core::groupoid::groupoid_isomorphic(&t, &p),
            );
            for a in &arrows {
                rep.clause(a.tag.clone(), a.is_equivalence);
            }
            Ok(rep)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_parse() {
        assert_eq!(parse_bounds("2, 2").unwrap(), vec![2, 2]);
        assert!(parse_bounds("2,x").is_err());
    }
}
