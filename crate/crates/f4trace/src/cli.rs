//! The `f4trace` command line.

use std::path::{Path, PathBuf};
use std::process::Command as Process;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use f4trace_core::analysis::{self, Constant};
use f4trace_core::engine::{self, F4Options, GBResult, OracleMethod, Shape, Status};
use f4trace_core::field::{Fp, DEFAULT_PRIME, MERSENNE_31};
use f4trace_core::verify::{self, Instance, PropertyKind, Subject};
use f4trace_core::{Error, Monomial, Poly, PrimeField};
use rayon::prelude::*;
use serde_json::Value;

use crate::io::{emit, format_system, read_system, read_trace};
use crate::report::{precondition_json, report_json};

pub const DEFAULT_OMEGAS: [f64; 4] = [3.0, 2.81, 2.38, 2.0];
/// (n, delta) pairs of the standard verification battery.
pub const BATTERY: [(usize, u32); 5] = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)];
pub const TABLE_NS: [usize; 7] = [2, 5, 10, 15, 20, 30, 50];
pub const TABLE_DELTAS: [u32; 7] = [2, 5, 10, 15, 20, 30, 50];
/// Seed offset of the second system in trace replays.
pub const REPLAY_OFFSET: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "f4trace", version, about = "Groebner bases over prime fields, F4 traces and their cost model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Generate a random dense system of n polynomials of degree delta.
    Gen(GenArgs),
    /// Compute a Groebner basis.
    Gb(GbArgs),
    /// Build or replay a Groebner trace.
    #[command(subcommand)]
    Trace(TraceCmd),
    /// Check structural properties (one tag or `all`), JSON lines out.
    Verify(VerifyArgs),
    /// Cost model tables and asymptotic constants.
    #[command(subcommand)]
    Cost(CostCmd),
    /// Measured replay operation counts against the cost formulas, CSV out.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(short = 'd', long = "delta")]
    pub delta: u32,
    #[arg(short = 'p', long = "prime", default_value_t = DEFAULT_PRIME)]
    pub prime: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Add random lower-degree terms.
    #[arg(long)]
    pub affine: bool,
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineKind {
    F4,
    Buchberger,
    Lazard,
}

#[derive(Args, Debug)]
pub struct GbArgs {
    pub system: PathBuf,
    #[arg(long, value_enum, default_value_t = EngineKind::F4)]
    pub engine: EngineKind,
    /// Print the reduced basis instead of the minimal one.
    #[arg(long)]
    pub reduced: bool,
    /// Write the basis as a system file.
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum TraceCmd {
    /// Run F4 on a system and record its trace.
    Build {
        system: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Replay a trace on another system of the same shape.
    Run { system: PathBuf, trace: PathBuf },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Property tag, or `all`.
    pub property: String,
    /// Check a system file instead of random instances.
    #[arg(long)]
    pub system: Option<PathBuf>,
    #[arg(short = 'n')]
    pub n: Option<usize>,
    #[arg(short = 'd', long = "delta")]
    pub delta: Option<u32>,
    /// Random instances `<ns>x<deltas>`, e.g. `2,3x2` (default: the standard battery).
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(short = 'p', long = "prime", default_value_t = MERSENNE_31)]
    pub prime: u32,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of consecutive seeds per (n, delta).
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    #[arg(long)]
    pub affine: bool,
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CostCmd {
    /// Per-variable log costs and basis cardinality, CSV.
    Table(TableArgs),
    /// E_p, l(omega), c and g for each (delta, omega), CSV.
    Constants(ConstArgs),
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(short = 'n', long = "n", value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(short = 'd', long = "delta", value_delimiter = ',')]
    pub delta: Vec<u32>,
    /// `<ns>x<deltas>`, e.g. `2,10,20x2,10`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub omega: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    pub precision: usize,
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstArgs {
    #[arg(short = 'd', long = "delta", value_delimiter = ',')]
    pub delta: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub omega: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(short = 'n')]
    pub n: Option<usize>,
    #[arg(short = 'd', long = "delta")]
    pub delta: Option<u32>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(short = 'p', long = "prime", default_value_t = MERSENNE_31)]
    pub prime: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    #[arg(long, default_value_t = 3.0)]
    pub omega: f64,
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Failed,
}

pub fn git_describe() -> String {
    Process::new("git")
        .args(["describe", "--always", "--dirty"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .unwrap_or_else(|| "unknown".to_string())
}

fn log_run(cmd: &str, seed: Option<u64>, p: Option<u32>, n: Option<usize>, delta: Option<u32>) {
    let show = |v: Option<String>| v.unwrap_or_else(|| "-".to_string());
    eprintln!(
        "f4trace {cmd}: seed={} p={} n={} delta={} git={}",
        show(seed.map(|v| v.to_string())),
        show(p.map(|v| v.to_string())),
        show(n.map(|v| v.to_string())),
        show(delta.map(|v| v.to_string())),
        git_describe()
    );
}

/// Parses `<ns>x<deltas>` into its two lists.
pub fn parse_grid(s: &str) -> Result<(Vec<usize>, Vec<u32>)> {
    let (a, b) = s.split_once('x').ok_or_else(|| anyhow!("grid must look like '2,10x2,5', got '{s}'"))?;
    let ns = a.split(',').map(|t| t.trim().parse::<usize>()).collect::<std::result::Result<Vec<_>, _>>();
    let ds = b.split(',').map(|t| t.trim().parse::<u32>()).collect::<std::result::Result<Vec<_>, _>>();
    match (ns, ds) {
        (Ok(ns), Ok(ds)) if !ns.is_empty() && !ds.is_empty() => Ok((ns, ds)),
        _ => bail!("bad grid '{s}'"),
    }
}

fn instance_grid(n: Option<usize>, delta: Option<u32>, grid: Option<&str>) -> Result<Vec<(usize, u32)>> {
    let (ns, ds) = match grid {
        Some(g) => parse_grid(g)?,
        None if n.is_none() && delta.is_none() => return Ok(BATTERY.to_vec()),
        None => (vec![n.unwrap_or(3)], vec![delta.unwrap_or(2)]),
    };
    let ns = n.map_or(ns, |v| vec![v]);
    let ds = delta.map_or(ds, |v| vec![v]);
    Ok(ns.iter().flat_map(|&n| ds.iter().map(move |&d| (n, d))).collect())
}

fn field(p: u32) -> Result<PrimeField> {
    PrimeField::new(p).map_err(|e| anyhow!("--prime: {e}"))
}

fn describe_basis(r: &GBResult, n: usize, field: PrimeField) -> String {
    let lms = r.lm_set();
    let mut s = String::new();
    s.push_str("lm: ");
    let pretty = |m: &Monomial| Poly::monomial(m.clone(), Fp::ONE, field).to_text();
    s.push_str(&lms.iter().map(pretty).collect::<Vec<_>>().join(", "));
    s.push('\n');
    match engine::staircase(&lms, n) {
        Some(st) => s.push_str(&format!("quotient-dimension: {}\n", st.len())),
        None => s.push_str("quotient-dimension: infinite\n"),
    }
    s.push_str(&format!("basis-size: {}\n", r.basis.len()));
    s
}

fn cmd_gen(a: &GenArgs) -> Result<Outcome> {
    log_run("gen", Some(a.seed), Some(a.prime), Some(a.n), Some(a.delta));
    let shape = if a.affine { Shape::Affine } else { Shape::Homogeneous };
    let sys = engine::gen_random_system(a.n, a.delta, field(a.prime)?, shape, a.seed)?;
    emit(a.output.as_deref(), &format_system(&sys))?;
    Ok(Outcome::Ok)
}

fn cmd_gb(a: &GbArgs) -> Result<Outcome> {
    let sys = read_system(&a.system)?;
    log_run("gb", None, Some(sys.field.p()), Some(sys.n), Some(sys.degree()));
    let mut r = match a.engine {
        EngineKind::F4 => engine::f4(&sys.polys, F4Options { minimalize: true, inter_reduce: a.reduced })?,
        EngineKind::Buchberger => engine::oracle_gb(&sys.polys, OracleMethod::Buchberger)?,
        EngineKind::Lazard => engine::oracle_gb(&sys.polys, OracleMethod::Lazard(None))?,
    };
    if a.reduced && a.engine != EngineKind::F4 {
        r.basis = engine::inter_reduce(&r.basis)?;
    }
    print!("{}", describe_basis(&r, sys.n, sys.field));
    if let Some(out) = &a.output {
        emit(Some(out), &format_system(&r.basis))?;
    }
    Ok(Outcome::Ok)
}

fn cmd_trace_build(system: &Path, output: Option<&Path>) -> Result<Outcome> {
    let sys = read_system(system)?;
    log_run("trace build", None, Some(sys.field.p()), Some(sys.n), Some(sys.degree()));
    let (r, t) = engine::f4_build(&sys.polys, F4Options::default())?;
    emit(output, &t.to_text())?;
    eprintln!("rounds: {} zero-reductions: {}", t.rounds.len(), r.zero_reductions());
    Ok(Outcome::Ok)
}

fn cmd_trace_run(system: &Path, trace: &Path) -> Result<Outcome> {
    let sys = read_system(system)?;
    let t = read_trace(trace)?;
    log_run("trace run", None, Some(sys.field.p()), Some(sys.n), Some(sys.degree()));
    let r = engine::f4_trace(&sys.polys, &t, F4Options::default())?;
    match &r.status {
        Status::Ok => {
            println!("status: ok");
            println!("zero-reductions: {}", r.zero_reductions());
            println!("ops: {}", r.ops);
            print!("{}", describe_basis(&r, sys.n, sys.field));
            Ok(Outcome::Ok)
        }
        Status::TraceMismatch { round, reason } => {
            println!("status: trace_mismatch");
            println!("round: {round}");
            println!("reason: {reason}");
            Ok(Outcome::Failed)
        }
    }
}

fn properties(tag: &str) -> Result<Vec<PropertyKind>> {
    if tag == "all" {
        return Ok(PropertyKind::ALL.to_vec());
    }
    PropertyKind::from_tag(tag).map(|k| vec![k]).ok_or_else(|| {
        let tags: Vec<_> = PropertyKind::ALL.iter().map(|k| k.tag()).collect();
        anyhow!("unknown property '{tag}' (expected one of: all, {})", tags.join(", "))
    })
}

fn check_subject(kinds: &[PropertyKind], subj: &Subject, inst: &Instance) -> Result<Vec<Value>> {
    let mut out = Vec::new();
    for &k in kinds {
        match verify::verify(k, subj, inst) {
            Ok(r) => out.push(report_json(&r)),
            Err(Error::PreconditionUnmet(tag)) => {
                out.push(precondition_json(k, inst.n, inst.delta, inst.p, inst.seed, &tag))
            }
            Err(e) => return Err(anyhow!("{} on n={} delta={} seed={:?}: {e}", k.tag(), inst.n, inst.delta, inst.seed)),
        }
    }
    Ok(out)
}

/// Runs the checks; returns JSON lines in canonical (instance, property) order.
pub fn run_verify(a: &VerifyArgs) -> Result<Vec<Value>> {
    let kinds = properties(&a.property)?;
    if let Some(path) = &a.system {
        let sys = read_system(path)?;
        let inst = Instance { n: sys.n, delta: sys.degree(), p: sys.field.p(), seed: None };
        let subj = Subject::new(sys.polys)?;
        return check_subject(&kinds, &subj, &inst);
    }
    let f = field(a.prime)?;
    let shape = if a.affine { Shape::Affine } else { Shape::Homogeneous };
    let mut jobs = Vec::new();
    for (n, d) in instance_grid(a.n, a.delta, a.grid.as_deref())? {
        for s in a.seed..a.seed + a.seeds {
            jobs.push((n, d, s));
        }
    }
    let per_job: Vec<Result<Vec<Value>>> = jobs
        .par_iter()
        .map(|&(n, d, s)| {
            let sys = engine::gen_random_system(n, d, f, shape, s)?;
            let inst = Instance { n, delta: d, p: f.p(), seed: Some(s) };
            check_subject(&kinds, &Subject::new(sys)?, &inst)
        })
        .collect();
    let mut lines = Vec::new();
    for r in per_job {
        lines.extend(r?);
    }
    Ok(lines)
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let (n, d) = match (&a.system, a.grid.as_ref()) {
        (None, None) => (a.n, a.delta),
        _ => (None, None),
    };
    log_run("verify", a.system.is_none().then_some(a.seed), Some(a.prime), n, d);
    let lines = run_verify(a)?;
    let count = |v: &str| lines.iter().filter(|l| l["verdict"] == v).count();
    let (pass, fail, unmet) = (count("pass"), count("fail"), count("precondition_unmet"));
    let mut text = String::new();
    for l in &lines {
        text.push_str(&l.to_string());
        text.push('\n');
    }
    emit(a.output.as_deref(), &text)?;
    eprintln!("verify: {pass} pass, {fail} fail, {unmet} precondition_unmet");
    Ok(if fail == 0 { Outcome::Ok } else { Outcome::Failed })
}

fn omegas(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        DEFAULT_OMEGAS.to_vec()
    } else {
        v.to_vec()
    }
}

/// Grid cells, delta-major like the printed tables.
pub fn table_grid(ns: &[usize], deltas: &[u32], grid: Option<&str>) -> Result<Vec<(usize, u32)>> {
    let (mut gn, mut gd) = match grid {
        Some(g) => parse_grid(g)?,
        None => (TABLE_NS.to_vec(), TABLE_DELTAS.to_vec()),
    };
    if !ns.is_empty() {
        gn = ns.to_vec();
    }
    if !deltas.is_empty() {
        gd = deltas.to_vec();
    }
    Ok(gd.iter().flat_map(|&d| gn.iter().map(move |&n| (n, d))).collect())
}

/// Computes the table cells in parallel, in grid order.
pub fn table_csv(grid: &[(usize, u32)], omegas: &[f64], precision: usize) -> Result<String> {
    let rows: Vec<_> = grid.par_iter().map(|&(n, d)| analysis::table_rows_for(n, d, omegas)).collect();
    let mut all = Vec::new();
    for r in rows {
        all.extend(r?);
    }
    Ok(analysis::emit_csv(&all, precision))
}

fn cmd_cost_table(a: &TableArgs) -> Result<Outcome> {
    let grid = table_grid(&a.n, &a.delta, a.grid.as_deref())?;
    log_run("cost table", None, None, (a.n.len() == 1).then(|| a.n[0]), (a.delta.len() == 1).then(|| a.delta[0]));
    emit(a.output.as_deref(), &table_csv(&grid, &omegas(&a.omega), a.precision)?)?;
    Ok(Outcome::Ok)
}

pub const CONSTANTS_HEADER: &str = "delta,omega,epsilon,E_half,ell,L_omega,c,gain";

pub fn constants_csv(deltas: &[u32], omegas: &[f64], epsilon: f64) -> Result<String> {
    let mut s = String::from(CONSTANTS_HEADER);
    s.push('\n');
    for &d in deltas {
        for &w in omegas {
            let get = |c| analysis::asymptotic_constant(d, w, epsilon, c);
            s.push_str(&format!(
                "{d},{w},{epsilon},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                get(Constant::Ep(0.5))?,
                get(Constant::Ell)?,
                get(Constant::LOmega)?,
                get(Constant::C)?,
                get(Constant::Gain)?
            ));
        }
    }
    Ok(s)
}

fn cmd_cost_constants(a: &ConstArgs) -> Result<Outcome> {
    log_run("cost constants", None, None, None, (a.delta.len() == 1).then(|| a.delta[0]));
    let deltas = if a.delta.is_empty() { vec![2, 3] } else { a.delta.clone() };
    emit(a.output.as_deref(), &constants_csv(&deltas, &omegas(&a.omega), a.epsilon)?)?;
    Ok(Outcome::Ok)
}

pub const BENCH_HEADER: &str = "n,delta,seed,ops_replay,ops_build,cost_measured,cost_bar,ratio";

/// One bench row: replay of the trace of `seed` on `seed + REPLAY_OFFSET`.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub delta: u32,
    pub seed: u64,
    pub ops_replay: u64,
    pub ops_build: u64,
    pub cost_measured: f64,
    pub cost_bar: f64,
}

impl BenchRow {
    pub fn ratio(&self) -> f64 {
        self.ops_replay as f64 / self.cost_measured
    }
}

pub fn bench_row(n: usize, delta: u32, f: PrimeField, seed: u64, omega: f64) -> Result<BenchRow> {
    let sys = engine::gen_random_system(n, delta, f, Shape::Homogeneous, seed)?;
    let sys2 = engine::gen_random_system(n, delta, f, Shape::Homogeneous, seed + REPLAY_OFFSET)?;
    let (built, t) = engine::f4_build(&sys, F4Options::default())?;
    let r = engine::f4_trace(&sys2, &t, F4Options::default())?;
    if let Status::TraceMismatch { round, reason } = &r.status {
        bail!("replay mismatch at round {round} for n={n} delta={delta} seed={seed}: {reason}");
    }
    let tables = analysis::CostTables::new(n, delta)?;
    let measured = analysis::Measured::from_lms(&r.lm_set(), n, tables.big_d);
    let cost_measured = tables.cost_f4t(omega, analysis::CostSource::Measured(&measured)).total_value();
    let cost_bar = tables.cost_f4t(omega, analysis::CostSource::Bar).total_value();
    Ok(BenchRow { n, delta, seed, ops_replay: r.ops, ops_build: built.ops, cost_measured, cost_bar })
}

fn cmd_bench(a: &BenchArgs) -> Result<Outcome> {
    log_run("bench", Some(a.seed), Some(a.prime), a.n, a.delta);
    let f = field(a.prime)?;
    let mut jobs = Vec::new();
    for (n, d) in instance_grid(a.n, a.delta, a.grid.as_deref())? {
        for s in a.seed..a.seed + a.seeds {
            jobs.push((n, d, s));
        }
    }
    let rows: Vec<Result<BenchRow>> = jobs.par_iter().map(|&(n, d, s)| bench_row(n, d, f, s, a.omega)).collect();
    let mut s = String::from(BENCH_HEADER);
    s.push('\n');
    for r in rows {
        let r = r?;
        s.push_str(&format!(
            "{},{},{},{},{},{:.1},{:.1},{:.4}\n",
            r.n,
            r.delta,
            r.seed,
            r.ops_replay,
            r.ops_build,
            r.cost_measured,
            r.cost_bar,
            r.ratio()
        ));
    }
    emit(a.output.as_deref(), &s)?;
    Ok(Outcome::Ok)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Gb(a) => cmd_gb(a),
        Cmd::Trace(TraceCmd::Build { system, output }) => cmd_trace_build(system, output.as_deref()),
        Cmd::Trace(TraceCmd::Run { system, trace }) => cmd_trace_run(system, trace),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Cost(CostCmd::Table(a)) => cmd_cost_table(a),
        Cmd::Cost(CostCmd::Constants(a)) => cmd_cost_constants(a),
        Cmd::Bench(a) => cmd_bench(a),
    }
}

/// Parses `args` and runs; returns the process exit code
/// (0 ok, 1 verification failure, 2 usage or input error).
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli).context("f4trace") {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
