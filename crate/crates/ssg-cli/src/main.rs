//! `ssg`: command-line driver for swap Schelling game experiments.
//!
//! Subcommands: `gen` (graph files), `simulate` (improving-swap dynamics),
//! `check` (equilibrium verdicts), `poa` (exact enumeration vs closed-form
//! bounds), `construct` (the constructive equilibrium profiles) and
//! `reproduce` (named verification suites).
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a checked property was
//! violated (never silently ignored), 3 enumeration or step budget
//! exceeded. Identical arguments and seed produce byte-identical reports.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use swap_schelling::analysis::{
    empirical_poa, theoretical_bound, BoundFamily, BoundParams, BoundSpec, PoAReport, ScanOptions,
};
use swap_schelling::dynamics::{replay_swaps, run_dynamics, Locality, Outcome, Scheduler};
use swap_schelling::equilibrium::{
    build_2xh_alternating, build_4grid_frame, build_8grid_eq, build_cycle_worst,
    build_double_star_eq, build_path_worst, build_pendant_eq, build_regular_gadget_eq,
    build_tree_lse, check_characterization, is_equilibrium, EquilibriumVerdict,
};
use swap_schelling::game::{Coloring, TypeVector};
use swap_schelling::graph::{
    make_cycle, make_cycle_with_pendants, make_double_star, make_grid, make_path,
    make_regular_gadget, parse_graph, serialize_graph, Graph, GridKind,
};
use swap_schelling::rng::SplitMix64;
use swap_schelling::suites::{random_coloring, run_suite, SUITE_NAMES};
use swap_schelling::Error;

#[derive(Parser)]
#[command(name = "ssg", version, about = "Swap Schelling games on graphs: dynamics, equilibria and Price of Anarchy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file for a named topology family.
    Gen(GenArgs),
    /// Run improving-swap dynamics and emit the trace.
    Simulate(SimulateArgs),
    /// Check whether a coloring is a (local) swap equilibrium.
    Check(CheckArgs),
    /// Enumerate colorings exactly and report the empirical Price of Anarchy.
    Poa(PoaArgs),
    /// Build one of the constructive equilibrium profiles.
    Construct(ConstructArgs),
    /// Run a named verification suite and report PASS/FAIL.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Grid4,
    Grid8,
    RegularGadget,
    CyclePendants,
    DoubleStar,
}

#[derive(Args, Clone)]
struct FamilyParams {
    /// Vertex count (path, cycle).
    #[arg(long)]
    n: Option<usize>,
    /// Grid rows.
    #[arg(long)]
    rows: Option<usize>,
    /// Grid columns.
    #[arg(long)]
    cols: Option<usize>,
    /// Gadget degree (regular-gadget) or maximum degree (cycle-pendants).
    #[arg(long)]
    delta: Option<usize>,
    /// Number of gadgets in the ring.
    #[arg(long)]
    q: Option<usize>,
    /// Cycle length for cycle-pendants.
    #[arg(long)]
    cycle_len: Option<usize>,
    /// Leaves per star for double-star.
    #[arg(long)]
    leaves: Option<usize>,
}

fn need(v: Option<usize>, what: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::usage(format!("missing --{what} for this family")))
}

fn build_family(family: Family, p: &FamilyParams) -> Result<Graph, CliError> {
    let g = match family {
        Family::Path => make_path(need(p.n, "n")?)?,
        Family::Cycle => make_cycle(need(p.n, "n")?)?,
        Family::Grid4 => make_grid(need(p.rows, "rows")?, need(p.cols, "cols")?, GridKind::Four)?,
        Family::Grid8 => make_grid(need(p.rows, "rows")?, need(p.cols, "cols")?, GridKind::Eight)?,
        Family::RegularGadget => make_regular_gadget(need(p.delta, "delta")?, need(p.q, "q")?)?,
        Family::CyclePendants => {
            make_cycle_with_pendants(need(p.cycle_len, "cycle-len")?, need(p.delta, "delta")?)?
        }
        Family::DoubleStar => make_double_star(need(p.leaves, "leaves")?)?,
    };
    Ok(g)
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[command(flatten)]
    params: FamilyParams,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LocalityArg {
    Global,
    Local,
}

impl From<LocalityArg> for Locality {
    fn from(l: LocalityArg) -> Locality {
        match l {
            LocalityArg::Global => Locality::Global,
            LocalityArg::Local => Locality::Local,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SchedulerArg {
    First,
    BestGain,
    Random,
}

#[derive(Args)]
struct GraphSource {
    /// Edge-list file to load.
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[command(flatten)]
    params: FamilyParams,
}

impl GraphSource {
    fn load(&self) -> Result<(Graph, String), CliError> {
        if let Some(path) = &self.graph {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            Ok((parse_graph(&text)?, path.display().to_string()))
        } else if let Some(family) = self.family {
            let g = build_family(family, &self.params)?;
            Ok((g, "generated".to_string()))
        } else {
            Err(CliError::usage("provide either --graph FILE or --family".into()))
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Minority count for a two-color game.
    #[arg(long, conflicts_with = "types")]
    o: Option<usize>,
    /// Comma-separated type counts for k colors (e.g. "4,4,4").
    #[arg(long)]
    types: Option<String>,
    /// Initial coloring file; random from the seed when omitted.
    #[arg(long)]
    init: Option<PathBuf>,
    /// Scripted swap list ("u v" per line) replayed instead of a
    /// scheduler; every scripted swap must be profitable.
    #[arg(long, conflicts_with = "scheduler")]
    script: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "global")]
    locality: LocalityArg,
    #[arg(long, value_enum, default_value = "first")]
    scheduler: SchedulerArg,
    /// Master seed: expands via SplitMix64 into the initial coloring and
    /// the random scheduler's stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of swaps; defaults to 4*n*m + 8.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    /// Coloring file (one line of color indices).
    #[arg(long)]
    coloring: PathBuf,
    #[arg(long, value_enum, default_value = "global")]
    locality: LocalityArg,
    /// `direct` checks swap gains; `characterization` uses the two-color
    /// pairwise-sum criterion and cross-checks it against `direct`.
    #[arg(long, value_enum, default_value = "direct")]
    method: CheckMethod,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CheckMethod {
    Direct,
    Characterization,
}

#[derive(Args)]
struct PoaArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Minority count for the two-color game.
    #[arg(long)]
    o: usize,
    #[arg(long, value_enum, default_value = "global")]
    locality: LocalityArg,
    /// Worker threads; defaults to SSG_JOBS, then the machine parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    /// Enumeration budget in utility evaluations.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u128,
    /// Also count equilibria up to grid symmetries.
    #[arg(long, default_value_t = false)]
    symmetry_count: bool,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Construction {
    TreeLse,
    Grid8,
    Frame,
    CycleWorst,
    PathWorst,
    RegularGadget,
    Pendants,
    DoubleStar,
    TwoByH,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    which: Construction,
    /// Tree file for tree-lse.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Comma-separated type counts for tree-lse.
    #[arg(long)]
    types: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    o: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    leaves: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    /// Where to write the graph (stdout when omitted).
    #[arg(long)]
    out_graph: Option<PathBuf>,
    /// Where to write the coloring (stdout when omitted).
    #[arg(long)]
    out_coloring: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Suite name, or `all`.
    name: String,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: String) -> CliError {
        CliError { message, code: 1 }
    }

    fn violation(message: String) -> CliError {
        CliError { message, code: 2 }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match e {
            Error::BudgetExceeded(_) => 3,
            _ => 1,
        };
        CliError { message: e.to_string(), code }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Check(args) => cmd_check(args),
        Command::Poa(args) => cmd_poa(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    }
}

fn emit(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn report_envelope(
    command: &str,
    config: serde_json::Value,
    seed: Option<u64>,
    result: serde_json::Value,
    citations: Vec<String>,
) -> String {
    let mut report = json!({
        "tool": "ssg",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "seed": seed, // null for commands that use no randomness
    });
    report["result"] = result;
    if !citations.is_empty() {
        report["citations"] = json!(citations);
    }
    let mut text = serde_json::to_string_pretty(&report).expect("serializable report");
    text.push('\n');
    text
}

fn parse_types(spec: &str) -> Result<TypeVector, CliError> {
    let counts: Result<Vec<usize>, _> = spec.split(',').map(|t| t.trim().parse()).collect();
    let counts = counts.map_err(|_| CliError::usage(format!("bad --types value `{spec}`")))?;
    Ok(TypeVector::new(counts)?)
}

fn jobs_or_default(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var("SSG_JOBS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        .max(1)
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, CliError> {
    let g = build_family(args.family, &args.params)?;
    emit(&args.out, &serialize_graph(&g))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, CliError> {
    let (g, graph_desc) = args.source.load()?;
    let n = g.n();
    let t = if let Some(spec) = &args.types {
        parse_types(spec)?
    } else if let Some(o) = args.o {
        if o < 1 || o >= n {
            return Err(CliError::usage("need 1 <= o < n".into()));
        }
        TypeVector::two(o, n - o)?
    } else {
        return Err(CliError::usage("provide --o or --types".into()));
    };
    if t.total() != n {
        return Err(CliError::usage(format!("type counts sum to {} but n = {n}", t.total())));
    }

    let mut rng = SplitMix64::new(args.seed);
    let init_rng_seed = rng.next_u64();
    let scheduler_seed = rng.next_u64();
    let init = match &args.init {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            Coloring::parse(&text)?
        }
        None => random_coloring(&t, &mut SplitMix64::new(init_rng_seed)),
    };
    let budget = args.budget.unwrap_or(4 * n * g.m() + 8);
    let trace = if let Some(script_path) = &args.script {
        let text = fs::read_to_string(script_path).map_err(|e| {
            CliError::usage(format!("cannot read {}: {e}", script_path.display()))
        })?;
        let mut swaps = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize, CliError> {
                tok.and_then(|t| t.parse().ok()).ok_or_else(|| {
                    CliError::usage(format!("bad script line {}: `{line}`", i + 1))
                })
            };
            swaps.push((parse(it.next())?, parse(it.next())?));
        }
        replay_swaps(&g, &t, &init, &swaps, args.locality.into())?
    } else {
        let scheduler = match args.scheduler {
            SchedulerArg::First => Scheduler::First,
            SchedulerArg::BestGain => Scheduler::BestGain,
            SchedulerArg::Random => Scheduler::Random { seed: scheduler_seed },
        };
        run_dynamics(&g, &t, &init, args.locality.into(), scheduler, budget)?
    };

    let (outcome_code, outcome_name) = match trace.outcome {
        Outcome::Converged { .. } => (0u8, "converged"),
        Outcome::CycleDetected { .. } => (2, "cycle-detected"),
        Outcome::BudgetExhausted { .. } => (3, "budget-exhausted"),
    };
    let config = json!({
        "graph": graph_desc,
        "n": n,
        "types": t.counts(),
        "locality": args.locality,
        "scheduler": if args.script.is_some() { json!("scripted") } else { json!(args.scheduler) },
        "script": args.script.as_ref().map(|p| p.display().to_string()),
        "budget": budget,
        "init": args.init.as_ref().map(|p| p.display().to_string()),
    });
    let result = serde_json::to_value(&trace).expect("serializable trace");
    let text = report_envelope("simulate", config, Some(args.seed), result, vec![]);
    emit(&args.out, &text)?;
    eprintln!("outcome: {outcome_name} after {} swaps", trace.steps.len());
    Ok(ExitCode::from(outcome_code))
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, CliError> {
    let text = fs::read_to_string(&args.graph)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", args.graph.display())))?;
    let g = parse_graph(&text)?;
    let text = fs::read_to_string(&args.coloring)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", args.coloring.display())))?;
    let c = Coloring::parse(&text)?;
    if c.n() != g.n() {
        return Err(CliError::usage(format!(
            "coloring has {} entries but the graph has {} vertices",
            c.n(),
            g.n()
        )));
    }

    let locality: Locality = args.locality.into();
    let direct: EquilibriumVerdict = is_equilibrium(&g, &c, locality);
    let mut agreement = None;
    let verdict_is_eq = match args.method {
        CheckMethod::Direct => direct.is_equilibrium,
        CheckMethod::Characterization => {
            if locality != Locality::Global {
                return Err(CliError::usage(
                    "the characterization applies to global swaps only".into(),
                ));
            }
            let characterized = check_characterization(&g, &c)?;
            agreement = Some(characterized == direct.is_equilibrium);
            characterized
        }
    };

    let config = json!({
        "graph": args.graph.display().to_string(),
        "coloring": args.coloring.display().to_string(),
        "locality": args.locality,
        "method": args.method,
    });
    let mut result = serde_json::to_value(&direct).expect("serializable verdict");
    result["is_equilibrium"] = json!(verdict_is_eq);
    if let Some(agrees) = agreement {
        result["characterization_agrees_with_direct"] = json!(agrees);
    }
    let text = report_envelope("check", config, None, result, vec![]);
    emit(&args.out, &text)?;

    if agreement == Some(false) {
        return Err(CliError::violation(
            "characterization disagrees with the direct equilibrium check".into(),
        ));
    }
    Ok(ExitCode::SUCCESS)
}

/// Closed-form bound to print next to an empirical report, when the family
/// has one.
fn bound_for(
    family: Option<Family>,
    params: &FamilyParams,
    n: usize,
    o: usize,
    locality: Locality,
) -> Option<BoundSpec> {
    let p = BoundParams {
        n: Some(n),
        o: Some(o),
        rows: params.rows,
        cols: params.cols,
        ..Default::default()
    };
    let family = match (family?, locality) {
        (Family::Path, Locality::Global) => BoundFamily::PathGlobal,
        (Family::Path, Locality::Local) => BoundFamily::PathLocal,
        (Family::Cycle, Locality::Global) => BoundFamily::CycleGlobal,
        (Family::Cycle, Locality::Local) => BoundFamily::CycleLocal,
        (Family::Grid4, Locality::Global) if o == 1 => BoundFamily::Grid4SingleGlobal,
        (Family::Grid4, Locality::Global) => BoundFamily::Grid4Global,
        (Family::Grid8, Locality::Global) if o == 1 => BoundFamily::Grid8SingleGlobal,
        (Family::Grid8, Locality::Global) => BoundFamily::Grid8Global,
        (Family::RegularGadget, Locality::Local) => {
            return theoretical_bound(
                BoundFamily::RegularLocal,
                &BoundParams { max_degree: params.delta, ..Default::default() },
            )
            .ok()
        }
        _ => return None,
    };
    theoretical_bound(family, &p).ok()
}

fn cmd_poa(args: PoaArgs) -> Result<ExitCode, CliError> {
    let (g, graph_desc) = args.source.load()?;
    let n = g.n();
    if args.o < 1 || args.o >= n {
        return Err(CliError::usage("need 1 <= o < n".into()));
    }
    let t = TypeVector::two(args.o, n - args.o)?;
    let jobs = jobs_or_default(args.jobs);
    let opts = ScanOptions {
        jobs,
        budget_evals: args.budget,
        count_up_to_symmetry: args.symmetry_count,
    };
    let locality: Locality = args.locality.into();
    let report: PoAReport = empirical_poa(&g, &t, locality, &opts)?;

    let bound = bound_for(args.source.family, &args.source.params, n, t.minority(), locality);
    let citations: Vec<String> = bound.iter().map(|b| b.source.clone()).collect();
    let text = match args.format {
        OutputFormat::Json => {
            let config = json!({
                "graph": graph_desc,
                "n": n,
                "o": t.minority(),
                "locality": args.locality,
                "jobs": jobs,
                "budget": args.budget.to_string(),
            });
            let mut result = serde_json::to_value(&report).expect("serializable report");
            if let Some(b) = &bound {
                result["theoretical_bound"] = serde_json::to_value(b).expect("serializable bound");
                result["bound_respected"] = json!(b.admits(&report.poa));
            }
            report_envelope("poa", config, None, result, citations)
        }
        OutputFormat::Text => render_poa_text(&graph_desc, &report, bound.as_ref()),
        OutputFormat::Csv => render_poa_csv(&graph_desc, &report, bound.as_ref()),
    };
    emit(&args.out, &text)?;

    if let Some(b) = &bound {
        if !b.admits(&report.poa) {
            return Err(CliError::violation(format!(
                "empirical PoA {} violates the closed-form bound ({})",
                report.poa, b.source
            )));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn render_poa_text(graph: &str, report: &PoAReport, bound: Option<&BoundSpec>) -> String {
    let mut out = String::new();
    let rows = [
        ("graph", graph.to_string()),
        ("locality", format!("{:?}", report.locality).to_lowercase()),
        ("types", format!("{:?}", report.type_counts)),
        ("optimum welfare", report.opt_welfare.to_string()),
        ("worst equilibrium", fmt_opt(&report.worst_eq_welfare)),
        ("best equilibrium", fmt_opt(&report.best_eq_welfare)),
        ("equilibria", report.equilibrium_count.to_string()),
        ("price of anarchy", report.poa.to_string()),
    ];
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        out.push_str(&format!("{k:width$}  {v}\n"));
    }
    if let Some(b) = bound {
        out.push_str(&format!(
            "{:width$}  {:?} {} ({})\n",
            "closed form",
            b.kind,
            fmt_opt(&b.high.or(b.low)),
            b.source
        ));
    }
    out
}

fn render_poa_csv(graph: &str, report: &PoAReport, bound: Option<&BoundSpec>) -> String {
    let mut out = String::from(
        "graph,locality,types,opt_welfare,worst_eq_welfare,best_eq_welfare,equilibrium_count,poa,bound_kind,bound_value\n",
    );
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{}\n",
        graph,
        format!("{:?}", report.locality).to_lowercase(),
        report.type_counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("+"),
        report.opt_welfare,
        fmt_opt(&report.worst_eq_welfare),
        fmt_opt(&report.best_eq_welfare),
        report.equilibrium_count,
        report.poa,
        bound.map_or("-".to_string(), |b| format!("{:?}", b.kind)),
        bound.map_or("-".to_string(), |b| fmt_opt(&b.high.or(b.low))),
    ));
    out
}

fn cmd_construct(args: ConstructArgs) -> Result<ExitCode, CliError> {
    let need = |v: Option<usize>, what: &str| -> Result<usize, CliError> {
        v.ok_or_else(|| CliError::usage(format!("missing --{what} for this construction")))
    };
    let (g, c) = match args.which {
        Construction::TreeLse => {
            let path = args
                .graph
                .as_ref()
                .ok_or_else(|| CliError::usage("tree-lse needs --graph FILE".into()))?;
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            let g = parse_graph(&text)?;
            let spec = args
                .types
                .as_ref()
                .ok_or_else(|| CliError::usage("tree-lse needs --types".into()))?;
            let t = parse_types(spec)?;
            let c = build_tree_lse(&g, &t)?;
            (g, c)
        }
        Construction::Grid8 => {
            let rows = need(args.rows, "rows")?;
            let cols = need(args.cols, "cols")?;
            let o = need(args.o, "o")?;
            let c = build_8grid_eq(rows, cols, o)?;
            (make_grid(rows, cols, GridKind::Eight)?, c)
        }
        Construction::Frame => {
            let n = need(args.n, "n")?;
            let c = build_4grid_frame(n)?;
            (make_grid(n, n, GridKind::Four)?, c)
        }
        Construction::CycleWorst => {
            let n = need(args.n, "n")?;
            let o = need(args.o, "o")?;
            (make_cycle(n)?, build_cycle_worst(n, o)?)
        }
        Construction::PathWorst => {
            let n = need(args.n, "n")?;
            let o = need(args.o, "o")?;
            (make_path(n)?, build_path_worst(n, o)?)
        }
        Construction::RegularGadget => {
            let delta = need(args.delta, "delta")?;
            let q = need(args.q, "q")?;
            (make_regular_gadget(delta, q)?, build_regular_gadget_eq(delta, q)?)
        }
        Construction::Pendants => {
            let o = need(args.o, "o")?;
            let delta = need(args.delta, "delta")?;
            (make_cycle_with_pendants(o, delta)?, build_pendant_eq(o, delta)?)
        }
        Construction::DoubleStar => {
            let leaves = need(args.leaves, "leaves")?;
            let eq = build_double_star_eq(leaves)?;
            (make_double_star(leaves)?, eq.coloring)
        }
        Construction::TwoByH => {
            let h = need(args.h, "h")?;
            (make_grid(2, h, GridKind::Four)?, build_2xh_alternating(h)?)
        }
    };
    emit(&args.out_graph, &serialize_graph(&g))?;
    emit(&args.out_coloring, &c.serialize())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<ExitCode, CliError> {
    let jobs = jobs_or_default(args.jobs);
    let names: Vec<&str> = if args.name == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![args.name.as_str()]
    };
    let mut all_pass = true;
    let mut results = Vec::new();
    for name in names {
        let report = run_suite(name, jobs).map_err(|e| match e {
            Error::UnknownFamily(n) => CliError::usage(format!(
                "unknown experiment `{n}`; known: {}, all",
                SUITE_NAMES.join(", ")
            )),
            other => CliError::from(other),
        })?;
        println!("{}: {}", report.name, if report.pass { "PASS" } else { "FAIL" });
        for line in &report.lines {
            println!("    {line}");
        }
        all_pass &= report.pass;
        results.push(json!({
            "name": report.name,
            "pass": report.pass,
            "lines": report.lines,
        }));
    }
    if let Some(out) = &args.out {
        let config = json!({ "experiment": args.name, "jobs": jobs });
        let text = report_envelope(
            "reproduce",
            config,
            None,
            json!({ "all_pass": all_pass, "suites": results }),
            vec![],
        );
        emit(&Some(out.clone()), &text)?;
    }
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::violation("one or more checks failed".into()))
    }
}
