//! Command-line front end. Exit codes: 0 success or isospectral, 1 not
//! isospectral, 2 input error, 3 verification failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::builtins::Builtin;
use crate::cycles::{enumerate_prime_cycles, format_cycle_line, CycleSet};
use crate::error::{Error, Result};
use crate::floquet::{verify_with_table, VerifyOptions};
use crate::graph::{parse_graph_with_potential, FundamentalGraph};
use crate::invariants::{invariant_table, Limits};
use crate::isospectral::{compare_with_table, Mode};
use crate::lattice::{self, ZdSpec};
use crate::potential::{format_complex, Potential};
use crate::DEFAULT_LENGTH_CAP;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "floquet",
    version,
    about = "Spectral invariants of Schrödinger operators on periodic graphs"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,

    /// Highest order n (defaults to the number of vertices).
    #[arg(long, global = true)]
    max_n: Option<usize>,

    /// Cap on path and cycle lengths.
    #[arg(long, global = true, default_value_t = DEFAULT_LENGTH_CAP)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GraphArg {
    /// Graph file, or a builtin name such as `kagome` or `zd:3,3`.
    #[arg(long)]
    graph: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of I_n^m and I_n, optionally evaluated at a potential.
    Invariants {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        potential: Option<PathBuf>,
    },
    /// Prime cycles through an added loop, or base cycles with --base.
    Cycles {
        #[command(flatten)]
        graph: GraphArg,
        /// Maximum length (defaults to --max-n).
        #[arg(long)]
        length: Option<usize>,
        /// Keep only this index, e.g. `1,0`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        index: Option<Vec<i64>>,
        /// Base graph cycles instead of cycles through an added loop.
        #[arg(long)]
        base: bool,
    },
    /// Numeric check of the trace formula.
    VerifyTrace {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        potential: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        grid: usize,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact isospectrality test of two potentials.
    Isospectral {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        q1: PathBuf,
        #[arg(long)]
        q2: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Floquet)]
        mode: ModeArg,
    },
    /// Print or write a builtin graph.
    Builtin {
        /// `cycle N`, `pendant`, `kagome`, `zd P1,...,Pd`.
        #[arg(required = true, num_args = 1..)]
        name: Vec<String>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Direct and Fourier forms of the lattice invariants.
    ZdFourier {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<usize>,
        #[arg(long)]
        potential: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Floquet,
    Periodic,
}

struct Ctx<'a> {
    json: bool,
    max_n: Option<usize>,
    limits: Limits,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        max_n: cli.max_n,
        limits: Limits::new(cli.cap),
        out,
        err,
    };
    match dispatch(&mut ctx, cli.command) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {}", e);
            EXIT_INPUT
        }
    }
}

fn dispatch(ctx: &mut Ctx<'_>, command: Command) -> Result<i32> {
    match command {
        Command::Invariants { graph, potential } => {
            invariants(ctx, &graph.graph, potential.as_deref())
        }
        Command::Cycles {
            graph,
            length,
            index,
            base,
        } => cycles(ctx, &graph.graph, length, index, base),
        Command::VerifyTrace {
            graph,
            potential,
            grid,
            samples,
            seed,
            tol,
            csv,
        } => {
            if tol.is_nan() || tol < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "tolerance must be nonnegative, got {}",
                    tol
                )));
            }
            let options = VerifyOptions {
                max_n: ctx.max_n,
                grid,
                samples,
                seed,
                tol,
                limits: ctx.limits,
            };
            verify_trace(
                ctx,
                &graph.graph,
                potential.as_deref(),
                options,
                csv.as_deref(),
            )
        }
        Command::Isospectral {
            graph,
            q1,
            q2,
            mode,
        } => {
            let mode = match mode {
                ModeArg::Floquet => Mode::Floquet,
                ModeArg::Periodic => Mode::Periodic,
            };
            isospectral(ctx, &graph.graph, &q1, &q2, mode)
        }
        Command::Builtin { name, emit } => builtin(ctx, &name.join(" "), emit.as_deref()),
        Command::ZdFourier { p, potential } => zd_fourier(ctx, p, &potential),
    }
}

/// Reads a graph file, or builds a builtin when no such file exists.
fn load_graph(source: &str) -> Result<(FundamentalGraph, Option<Potential>)> {
    let path = Path::new(source);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        return parse_graph_with_potential(&text);
    }
    Ok((source.parse::<Builtin>()?.build()?, None))
}

fn load_potential(path: &Path, nu: usize) -> Result<Potential> {
    let text = fs::read_to_string(path)?;
    let q = Potential::parse(&text)?;
    q.check_size(nu)?;
    Ok(q)
}

fn potential_or_embedded(
    path: Option<&Path>,
    embedded: Option<Potential>,
    nu: usize,
) -> Result<Potential> {
    match (path, embedded) {
        (Some(p), _) => load_potential(p, nu),
        (None, Some(q)) => Ok(q),
        (None, None) => Err(Error::InvalidArgument(
            "a potential is required (--potential)".into(),
        )),
    }
}

fn warn_rank(ctx: &mut Ctx<'_>, g: &FundamentalGraph) {
    if let Some(w) = g.validate_full_rank().warning() {
        let _ = writeln!(ctx.err, "warning: {}", w);
    }
}

fn format_index(m: &[i64]) -> String {
    let parts: Vec<String> = m.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn emit_json(ctx: &mut Ctx<'_>, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    writeln!(ctx.out, "{}", text)?;
    Ok(())
}

fn invariants(ctx: &mut Ctx<'_>, source: &str, potential: Option<&Path>) -> Result<i32> {
    let (g, embedded) = load_graph(source)?;
    warn_rank(ctx, &g);
    let q = match potential {
        Some(p) => Some(load_potential(p, g.vertex_count())?),
        None => embedded,
    };
    let table = invariant_table(&g, ctx.max_n, ctx.limits)?;
    if ctx.json {
        let mut value = table.to_json();
        if let Some(q) = &q {
            let entries: Vec<Value> = table
                .entries()
                .map(|(n, m, p)| json!({"n": n, "m": m, "value": format_complex(&p.evaluate(q))}))
                .collect();
            let marginals: Vec<Value> = (1..=table.max_n())
                .map(|n| json!({"n": n, "value": format_complex(&table.marginal(n).unwrap().evaluate(q))}))
                .collect();
            value["values"] = json!({"entries": entries, "marginals": marginals});
        }
        emit_json(ctx, &value)?;
        return Ok(EXIT_OK);
    }
    for n in 1..=table.max_n() {
        let p = table.marginal(n).unwrap();
        write!(ctx.out, "I_{} = {}", n, p)?;
        if let Some(q) = &q {
            write!(ctx.out, "  [{}]", format_complex(&p.evaluate(q)))?;
        }
        writeln!(ctx.out)?;
        for (order, m, p) in table.entries() {
            if order != n || p.is_zero() {
                continue;
            }
            write!(ctx.out, "  I_{}^{} = {}", n, format_index(m), p)?;
            if let Some(q) = &q {
                write!(ctx.out, "  [{}]", format_complex(&p.evaluate(q)))?;
            }
            writeln!(ctx.out)?;
        }
    }
    Ok(EXIT_OK)
}

fn cycles(
    ctx: &mut Ctx<'_>,
    source: &str,
    length: Option<usize>,
    index: Option<Vec<i64>>,
    base: bool,
) -> Result<i32> {
    let (g, _) = load_graph(source)?;
    let mg = g.modified();
    let max_len = length.or(ctx.max_n).unwrap_or(g.vertex_count());
    let set = if base {
        CycleSet::Base
    } else {
        CycleSet::WithAddedLoop
    };
    if let Some(m) = &index {
        if m.len() != g.dim() {
            return Err(Error::InvalidArgument(format!(
                "index has {} components, graph dimension is {}",
                m.len(),
                g.dim()
            )));
        }
    }
    let cycles: Vec<_> = enumerate_prime_cycles(&mg, max_len, set, ctx.limits.cap)?
        .into_iter()
        .filter(|c| index.as_ref().is_none_or(|m| &c.index == m))
        .collect();
    if ctx.json {
        emit_json(
            ctx,
            &serde_json::to_value(&cycles).expect("cycles serialize"),
        )?;
    } else {
        for c in &cycles {
            writeln!(ctx.out, "{}", format_cycle_line(c))?;
        }
    }
    Ok(EXIT_OK)
}

fn verify_trace(
    ctx: &mut Ctx<'_>,
    source: &str,
    potential: Option<&Path>,
    options: VerifyOptions,
    csv: Option<&Path>,
) -> Result<i32> {
    let (g, embedded) = load_graph(source)?;
    let q = potential_or_embedded(potential, embedded, g.vertex_count())?;
    let max_n = options.max_n.unwrap_or(g.vertex_count());
    let table = invariant_table(&g, Some(max_n), options.limits)?;
    let report = verify_with_table(&g, &q, &table, &options)?;
    if let Some(path) = csv {
        fs::write(path, report.to_csv(g.dim()))?;
    }
    let summary = json!({
        "pass": report.pass,
        "max_n": max_n,
        "points": report.samples.len() / max_n.max(1),
        "max_residual": report.max_residual,
        "max_abs_lhs": report.max_abs_lhs,
        "tolerance": report.tolerance,
        "hermitian": report.hermitian,
    });
    if ctx.json {
        emit_json(ctx, &summary)?;
    } else {
        writeln!(
            ctx.out,
            "{}: max residual {:e} (bound {:e}) over {} quasimomenta, n <= {}",
            if report.pass { "pass" } else { "FAIL" },
            report.max_residual,
            report.tolerance * report.max_abs_lhs.max(1.0),
            summary["points"],
            max_n
        )?;
    }
    if report.hermitian == Some(false) {
        writeln!(
            ctx.err,
            "warning: real potential produced a non-Hermitian matrix or complex trace"
        )?;
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY })
}

fn isospectral(ctx: &mut Ctx<'_>, source: &str, q1: &Path, q2: &Path, mode: Mode) -> Result<i32> {
    let (g, _) = load_graph(source)?;
    let q1 = load_potential(q1, g.vertex_count())?;
    let q2 = load_potential(q2, g.vertex_count())?;
    let table = invariant_table(&g, ctx.max_n, ctx.limits)?;
    let verdict = compare_with_table(&table, &q1, &q2, mode)?;
    let value = verdict.to_json();
    if ctx.json || !verdict.isospectral {
        emit_json(ctx, &value)?;
    } else {
        writeln!(ctx.out, "isospectral")?;
    }
    Ok(if verdict.isospectral {
        EXIT_OK
    } else {
        EXIT_FALSE
    })
}

fn builtin(ctx: &mut Ctx<'_>, name: &str, emit: Option<&Path>) -> Result<i32> {
    let b: Builtin = name.parse()?;
    let g = b.build()?;
    let text = g.to_file_string(None);
    if let Some(path) = emit {
        fs::write(path, &text)?;
    }
    if ctx.json {
        let value = json!({
            "name": b.to_string(),
            "vertices": g.vertex_count(),
            "dim": g.dim(),
            "edges": g.pair_count(),
            "degrees": g.degrees(),
            "file": text,
        });
        emit_json(ctx, &value)?;
    } else if emit.is_none() {
        write!(ctx.out, "{}", text)?;
    }
    Ok(EXIT_OK)
}

fn zd_fourier(ctx: &mut Ctx<'_>, periods: Vec<usize>, potential: &Path) -> Result<i32> {
    let spec = ZdSpec::new(periods)?;
    let q = load_potential(potential, spec.volume())?;
    let direct = lattice::zd_periodic_invariants(&spec, &q)?;
    let i1_fourier = lattice::fourier_i1(&spec, &q)?;
    let i1_direct = crate::potential::to_complex64(&direct[0]);
    let mut rows = vec![json!({
        "name": "I_1",
        "direct": format_complex(&direct[0]),
        "fourier": [i1_fourier.re, i1_fourier.im],
        "residual": (i1_fourier - i1_direct).norm(),
    })];
    if q.is_real() {
        let f = lattice::fourier_invariants(&spec, &q)?;
        let i2 = crate::potential::to_complex64(&direct[1]).re;
        rows.push(json!({
            "name": "I_2",
            "direct": format_complex(&direct[1]),
            "fourier": [f.i2, 0.0],
            "residual": (f.i2 - i2).abs(),
        }));
        for (j, value) in f.quadratic_floquet.iter().enumerate() {
            let (_, quad) = lattice::zd_floquet_invariants(&spec, &q, j)?;
            let exact = crate::potential::to_complex64(&quad).re;
            rows.push(json!({
                "name": format!("I_{}^e{}", spec.periods()[j] + 2, j + 1),
                "direct": format_complex(&quad),
                "fourier": [*value, 0.0],
                "residual": (value - exact).abs(),
            }));
        }
    } else {
        writeln!(
            ctx.err,
            "note: complex potential, only I_1 has a Fourier form"
        )?;
    }
    if ctx.json {
        emit_json(ctx, &json!({"periods": spec.periods(), "invariants": rows}))?;
    } else {
        for r in &rows {
            writeln!(
                ctx.out,
                "{:<10} direct {:<16} fourier {:+.12e}{:+.12e}i  residual {:.3e}",
                r["name"].as_str().unwrap(),
                r["direct"].as_str().unwrap(),
                r["fourier"][0].as_f64().unwrap(),
                r["fourier"][1].as_f64().unwrap(),
                r["residual"].as_f64().unwrap()
            )?;
        }
    }
    Ok(EXIT_OK)
}
