//! Batch front door for the `continua` library: deterministic generation,
//! checking, auditing, compactification, replay, and net export.
//!
//! Exit codes: `0` success / overall Holds; `1` malformed input or usage
//! error (with a location diagnostic); `2` overall Fails — the counterexample
//! is in the report — or an audit run that caught a violation, or a replay
//! that found a witness it could not re-verify; `3` overall Inconclusive.
//!
//! Every output file is written atomically (temp file in the target
//! directory, then rename), and identical invocations produce byte-identical
//! artifacts.

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use continua::chain::{circle_wrap, run_pi4_chain};
use continua::checkers::{
    check_btw, check_circ, check_conn, check_cpct, check_lc, check_ndegen, check_ord,
    classify_arc, classify_circle, composite_status,
};
use continua::line::{check_real_line, compactify, gen_line_presentation, TreeSpec};
use continua::rat::parse_rat_list;
use continua::report::{parse_report, render_report, replay_against};
use continua::resolution::CheckerKind;
use continua::sawtooth::{default_params, gen_sawtooth};
use continua::tendril::{presentation_from, run_sigma3, run_sigma3_with_audit, Sigma3Params};
use continua::wtable::{UTable, WTable};
use continua::{FiniteNet, Presentation, Resolution, Status, Verdict};

#[derive(Parser)]
#[command(
    name = "continua",
    version,
    about = "Finite-resolution topology on presented spaces: generators, checkers, audits, replay"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a presentation file from a construction.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run a condition checker and write a verdict report.
    Check(CheckArgs),
    /// Adjoin a point at infinity and write the compactified presentation.
    Compactify(CompactifyArgs),
    /// Audit construction invariants.
    #[command(subcommand)]
    Audit(AuditCommand),
    /// Re-verify every witness block of a report against a presentation.
    Replay(ReplayArgs),
    /// Export the exact distance matrix of the leading net points.
    NetExport(NetExportArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Sawtooth graph interpolant of a column table, on a dyadic grid.
    Sawtooth {
        /// Column table file (`col <n> : <s1> <s2> …`).
        #[arg(long)]
        w: PathBuf,
        /// Dyadic grid depth: parameters k/2^depth.
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tendril-cascade set after the given number of stages.
    Sigma3 {
        /// Column table file driving the collapse triggers.
        #[arg(long)]
        w: PathBuf,
        #[arg(long)]
        stages: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Welded chain of tendril-cascade copies with a limit point.
    Pi4 {
        /// Table-of-tables file (`table <m>` blocks of column-table lines).
        #[arg(long)]
        u: PathBuf,
        /// Number of chained copies.
        #[arg(long)]
        m: u32,
        /// Stages per copy.
        #[arg(long)]
        stages: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// The welded chain closed into a loop by three unit-square sides.
    Circle {
        /// Table-of-tables file (`table <m>` blocks of column-table lines).
        #[arg(long)]
        u: PathBuf,
        /// Number of chained copies.
        #[arg(long)]
        m: u32,
        /// Stages per copy.
        #[arg(long)]
        stages: u32,
        /// Grid spacing denominator for the three straight sides.
        #[arg(long, default_value_t = 16)]
        side_denom: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tree-coded line embedding over a parameter grid.
    TreeLine {
        /// Tree file: one node per line as space-separated integers.
        #[arg(long)]
        tree: PathBuf,
        /// Comma-separated rational parameters, e.g. `-1,0,1/2,1,3/2,2`.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Ndegen,
    Cpct,
    Conn,
    Lc,
    Btw,
    Ord,
    Circ,
    Arc,
    Circle,
    RealLine,
}

#[derive(clap::Args)]
struct CheckArgs {
    /// Condition to check.
    #[arg(value_enum)]
    property: Property,
    /// Presentation file.
    #[arg(long)]
    pres: PathBuf,
    /// Number of presentation points in the net.
    #[arg(long)]
    n: usize,
    /// Comma-separated strictly descending ε grid, e.g. `1/4,1/8,1/16`.
    #[arg(long)]
    eps_grid: String,
    /// Comma-separated strictly descending δ grid (may be empty).
    #[arg(long, default_value = "")]
    delta_grid: String,
    /// Budget on scanned tuples / cover centers before giving up.
    #[arg(long)]
    budget: usize,
    /// Declared path-length bound (recorded in verdicts).
    #[arg(long, default_value_t = 256)]
    maxlen: usize,
    /// Verdict report output file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// First endpoint id (check btw only).
    #[arg(long)]
    x: Option<usize>,
    /// Middle point id (check btw only).
    #[arg(long)]
    y: Option<usize>,
    /// Second endpoint id (check btw only).
    #[arg(long)]
    z: Option<usize>,
    /// Basepoint id for the compactification (check real-line only).
    #[arg(long, default_value_t = 0)]
    base: usize,
}

#[derive(clap::Args)]
struct CompactifyArgs {
    #[arg(long)]
    pres: PathBuf,
    /// Basepoint id: the added point sits at distance 1 from it.
    #[arg(long)]
    base: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum AuditCommand {
    /// Re-derive and verify every stage invariant of a tendril-cascade run.
    Stages {
        /// Column table file driving the collapse triggers.
        #[arg(long)]
        w: PathBuf,
        #[arg(long)]
        stages: u32,
    },
}

#[derive(clap::Args)]
struct ReplayArgs {
    /// Verdict report file.
    #[arg(long)]
    report: PathBuf,
    /// Presentation the report was computed from.
    #[arg(long)]
    pres: PathBuf,
}

#[derive(clap::Args)]
struct NetExportArgs {
    #[arg(long)]
    pres: PathBuf,
    /// Number of presentation points to export.
    #[arg(long)]
    n: usize,
    /// Precision exponent recorded in the net header.
    #[arg(long, default_value_t = 0)]
    prec: u32,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Reserve exit 2 for Fails verdicts: usage errors exit 1, while
            // --help and --version stay successful.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Gen(gen) => run_gen(gen),
        Command::Check(args) => run_check(args),
        Command::Compactify(args) => run_compactify(args),
        Command::Audit(AuditCommand::Stages { w, stages }) => run_audit(&w, stages),
        Command::Replay(args) => run_replay(args),
        Command::NetExport(args) => run_net_export(args),
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn run_gen(gen: GenCommand) -> anyhow::Result<u8> {
    let (out, pres) = match gen {
        GenCommand::Sawtooth { w, depth, out } => {
            let table = WTable::parse(&read(&w)?)?;
            (out, gen_sawtooth(&table, depth, &default_params())?)
        }
        GenCommand::Sigma3 { w, stages, out } => {
            let table = WTable::parse(&read(&w)?)?;
            let state = run_sigma3(&table, stages, &Sigma3Params::default())?;
            (out, presentation_from(&state, "sigma3")?)
        }
        GenCommand::Pi4 { u, m, stages, out } => {
            let tables = UTable::parse(&read(&u)?)?;
            (out, run_pi4_chain(&tables, m, stages, &Sigma3Params::default())?)
        }
        GenCommand::Circle { u, m, stages, side_denom, out } => {
            let tables = UTable::parse(&read(&u)?)?;
            (out, circle_wrap(&tables, m, stages, &Sigma3Params::default(), side_denom)?)
        }
        GenCommand::TreeLine { tree, grid, out } => {
            let t = TreeSpec::parse(&read(&tree)?)?;
            let g = parse_rat_list(&grid)?;
            (out, gen_line_presentation(&t, &g)?)
        }
    };
    write_atomic(&out, &pres.render())?;
    println!("wrote {}: {} points", out.display(), pres.len());
    Ok(0)
}

fn run_check(args: CheckArgs) -> anyhow::Result<u8> {
    let pres = read_presentation(&args.pres)?;
    let res = Resolution {
        n_points: args.n,
        eps_grid: parse_rat_list(&args.eps_grid)?,
        delta_grid: parse_rat_list(&args.delta_grid)?,
        max_path_len: args.maxlen,
        tuple_budget: args.budget,
    };
    let verdicts: Vec<Verdict> = if args.property == Property::RealLine {
        let report = check_real_line(&pres, args.base, &res)?;
        report.verdicts().into_iter().cloned().collect()
    } else {
        let net = FiniteNet::from_presentation(&pres, res.n_points.min(pres.len()), 0)?;
        match args.property {
            Property::Ndegen => vec![check_ndegen(&net, &res)?],
            Property::Cpct => vec![check_cpct(&net, &res)?],
            Property::Conn => vec![check_conn(&net, &res)?],
            Property::Lc => vec![check_lc(&net, &res)?],
            Property::Btw => {
                let (x, y, z) = match (args.x, args.y, args.z) {
                    (Some(x), Some(y), Some(z)) => (x, y, z),
                    _ => anyhow::bail!("check btw needs --x, --y, and --z point ids"),
                };
                vec![check_btw(&net, x, y, z, &res)?]
            }
            Property::Ord => vec![check_ord(&net, &res)?],
            Property::Circ => vec![check_circ(&net, &res)?],
            Property::Arc => classify_arc(&net, &res)?,
            Property::Circle => classify_circle(&net, &res)?,
            Property::RealLine => unreachable!("handled above"),
        }
    };
    let overall = composite_status(&verdicts);
    let mut stdout = io::stdout().lock();
    for v in &verdicts {
        writeln!(stdout, "{}: {}", checker_label(&v.checker), v.status.as_str())?;
    }
    writeln!(stdout, "overall: {}", overall.as_str())?;
    if let Some(path) = &args.report {
        write_atomic(path, &render_report(&verdicts))?;
    }
    Ok(status_code(overall))
}

fn run_compactify(args: CompactifyArgs) -> anyhow::Result<u8> {
    let pres = read_presentation(&args.pres)?;
    let cp = compactify(&pres, args.base)?;
    let label = format!("{} compactified", pres.label);
    let out_pres = cp.to_presentation(label)?;
    write_atomic(&args.out, &out_pres.render())?;
    println!(
        "wrote {}: {} points (index 0 is the added point at infinity)",
        args.out.display(),
        out_pres.len()
    );
    Ok(0)
}

fn run_audit(w: &Path, stages: u32) -> anyhow::Result<u8> {
    let table = WTable::parse(&read(w)?)?;
    match run_sigma3_with_audit(&table, stages, &Sigma3Params::default()) {
        Ok((_, reports)) => {
            let mut stdout = io::stdout().lock();
            for report in &reports {
                write!(stdout, "{}", report.render())?;
            }
            writeln!(stdout, "all stages pass")?;
            Ok(0)
        }
        // An invariant violation is a finding with a diagnostic, not
        // malformed input; report it on stdout and exit as a failure.
        Err(e) if e.to_string().contains("audit item") => {
            println!("{e}");
            Ok(2)
        }
        Err(e) => Err(e.into()),
    }
}

fn run_replay(args: ReplayArgs) -> anyhow::Result<u8> {
    let verdicts = parse_report(&read(&args.report)?)?;
    if verdicts.is_empty() {
        anyhow::bail!("report {} contains no verdict blocks", args.report.display());
    }
    let pres = read_presentation(&args.pres)?;
    let mut stdout = io::stdout().lock();
    for v in &verdicts {
        match replay_against(v, &pres) {
            Ok(status) => {
                writeln!(stdout, "{}: {} re-verified", checker_label(&v.checker), status.as_str())?;
            }
            Err(e) => {
                writeln!(stdout, "{}: replay failed: {e}", checker_label(&v.checker))?;
                return Ok(2);
            }
        }
    }
    writeln!(stdout, "report re-verified")?;
    Ok(0)
}

fn run_net_export(args: NetExportArgs) -> anyhow::Result<u8> {
    let pres = read_presentation(&args.pres)?;
    let n = args.n.min(pres.len());
    let net = FiniteNet::from_presentation(&pres, n, args.prec)?;
    write_atomic(&args.out, &net.export())?;
    println!("wrote {}: {n}-point exact distance matrix", args.out.display());
    Ok(0)
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

fn status_code(status: Status) -> u8 {
    match status {
        Status::Holds => 0,
        Status::Fails => 2,
        Status::Inconclusive => 3,
    }
}

fn checker_label(kind: &CheckerKind) -> String {
    match kind {
        CheckerKind::Btw { x, y, z } => format!("btw({x},{y},{z})"),
        other => other.name().to_string(),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))
}

fn read_presentation(path: &Path) -> anyhow::Result<Presentation> {
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "presentation".to_string());
    Ok(Presentation::parse(&read(path)?, label)?)
}

/// Write via a temp file in the same directory, then rename into place.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| anyhow::anyhow!("output path {} has no file name", path.display()))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents)
        .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", tmp.display()))?;
    fs::rename(&tmp, path)
        .map_err(|e| anyhow::anyhow!("cannot move {} into place: {e}", tmp.display()))?;
    Ok(())
}
