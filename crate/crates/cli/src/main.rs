use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tcalc::asp::{emit_instance_facts, emit_program, EncodingKind};
use tcalc::bench::{default_exp1_sizes, default_exp2_sizes, run_bench, write_rows, BenchConfig, Experiment, Source};
use tcalc::calculus::{builtin_tc10, builtin_tc6, load_calculus, save_calculus, validate_calculus, Calculus};
use tcalc::oracle::{verify_soundness_with, Sampling};
use tcalc::solver::{enumerate_models_with, parse_instance, solve_with, write_models, Outcome, SolveOptions};
use tcalc::trajectory::{
    classify_checked, covering_grid, ingest_points, parse_points_csv, parse_trajectories, write_trajectories,
    CalcKind, GapPolicy, GridSpec, Trajectory,
};

#[derive(Parser)]
#[command(name = "tcalc", version, about = "Trajectory calculi: ingestion, classification, solving and ASP encodings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn a point CSV (object_id,timestamp,longitude,latitude) into a trajectory file.
    Ingest(IngestArgs),
    /// Classify every pair of trajectories in a trajectory file.
    Relations(RelationsArgs),
    /// Find one model of an instance file.
    Solve(SolveArgs),
    /// List models of an instance file.
    Enumerate(EnumerateArgs),
    /// Write an ASP program for a calculus.
    Emit(EmitArgs),
    /// Check a composition table against trajectories on a small grid.
    Verify(VerifyArgs),
    /// Inspect calculus tables.
    #[command(subcommand)]
    Calculus(CalculusCommand),
    /// Run a benchmark experiment and write CSV rows.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    /// Fail objects with non-adjacent consecutive cells or points outside the box.
    Reject,
    /// Fill jumps with a straight cell line.
    Rasterize,
    /// Snap out-of-box points to the border, then rasterize.
    Clamp,
}

#[derive(Args)]
struct IngestArgs {
    points: PathBuf,
    /// Grid shape, e.g. 100x200.
    #[arg(long, value_parser = parse_shape, required_unless_present = "grid_file")]
    grid: Option<(u32, u32)>,
    /// LAT_MIN,LAT_MAX,LON_MIN,LON_MAX; defaults to the extent of the data.
    #[arg(long, value_parser = parse_bbox, conflicts_with = "grid_file")]
    bbox: Option<[f64; 4]>,
    /// JSON grid with lat_min, lat_max, lon_min, lon_max, rows and cols.
    #[arg(long, conflicts_with = "grid")]
    grid_file: Option<PathBuf>,
    /// Also write the grid used as JSON.
    #[arg(long)]
    grid_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "rasterize")]
    policy: Policy,
    /// Snap out-of-box points to the border under any policy.
    #[arg(long)]
    clamp: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RelationsArgs {
    trajectories: PathBuf,
    #[arg(long, default_value = "tc6")]
    calculus: CalcKind,
    /// Grid shape; read from the file's `# grid` header when omitted.
    #[arg(long, value_parser = parse_shape)]
    grid: Option<(u32, u32)>,
    /// JSON grid, as written by `ingest --grid-out`.
    #[arg(long, conflicts_with = "grid")]
    grid_file: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long)]
    budget_ms: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    instance: PathBuf,
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    budget_ms: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmitArgs {
    /// tc6, tc10 or a calculus JSON file.
    #[arg(long, default_value = "tc6")]
    calculus: String,
    #[arg(long)]
    encoding: EncodingKind,
    /// Append facts for this instance file.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// tc6, tc10 or a calculus JSON file.
    #[arg(long, default_value = "tc6")]
    calculus: String,
    /// Trajectory semantics; inferred from the relation count when omitted.
    #[arg(long)]
    semantics: Option<CalcKind>,
    #[arg(long, value_parser = parse_shape, default_value = "3x3")]
    grid: (u32, u32),
    #[arg(long, default_value_t = 3)]
    max_len: usize,
    /// Sample this many triples instead of checking all of them.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CalculusCommand {
    /// Check the algebraic laws; exits 1 when any fails.
    Validate(CalculusArgs),
    /// Print a calculus as JSON.
    Show(CalculusArgs),
}

#[derive(Args)]
struct CalculusArgs {
    #[arg(long, conflicts_with = "file")]
    calculus: Option<CalcKind>,
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    experiment: Experiment,
    #[arg(long, default_value = "tc6")]
    calculus: CalcKind,
    /// Use trajectories from this file instead of synthetic walks.
    #[arg(long)]
    trajectories: Option<PathBuf>,
    /// Comma-separated element counts (exp1) or known relations per element (exp2).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Element count for exp2.
    #[arg(long, default_value_t = 50)]
    elements: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 600_000)]
    budget_ms: u64,
    /// Run rows concurrently.
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_shape(s: &str) -> Result<(u32, u32), String> {
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected ROWSxCOLS, got {s:?}"))?;
    let r: u32 = r.trim().parse().map_err(|_| format!("bad row count in {s:?}"))?;
    let c: u32 = c.trim().parse().map_err(|_| format!("bad column count in {s:?}"))?;
    Ok((r, c))
}

fn parse_bbox(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    v.try_into().map_err(|_| "expected LAT_MIN,LAT_MAX,LON_MIN,LON_MAX".to_string())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing standard output"),
    }
}

fn grid_file(path: &Path) -> Result<GridSpec> {
    let grid: GridSpec = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    grid.check()?;
    Ok(grid)
}

fn calculus_arg(arg: &str) -> Result<Calculus> {
    match arg {
        "tc6" => Ok(builtin_tc6()),
        "tc10" => Ok(builtin_tc10()),
        path => Ok(load_calculus(&read(Path::new(path))?).with_context(|| format!("loading calculus {path}"))?),
    }
}

fn mean_std(lens: &[usize]) -> (f64, f64) {
    if lens.is_empty() {
        return (0.0, 0.0);
    }
    let n = lens.len() as f64;
    let mean = lens.iter().sum::<usize>() as f64 / n;
    let var = lens.iter().map(|&l| (l as f64 - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn ingest(a: IngestArgs) -> Result<ExitCode> {
    let points = parse_points_csv(&read(&a.points)?).with_context(|| format!("parsing {}", a.points.display()))?;
    let grid = match (&a.grid_file, a.grid, a.bbox) {
        (Some(p), _, _) => grid_file(p)?,
        (None, Some((rows, cols)), Some([lat_min, lat_max, lon_min, lon_max])) => {
            GridSpec::new(lat_min, lat_max, lon_min, lon_max, rows, cols)?
        }
        (None, Some((rows, cols)), None) => covering_grid(&points, rows, cols)?,
        (None, None, _) => bail!("pass --grid or --grid-file"),
    };
    let (policy, clamp) = match a.policy {
        Policy::Reject => (GapPolicy::Reject, a.clamp),
        Policy::Rasterize => (GapPolicy::Rasterize, a.clamp),
        Policy::Clamp => (GapPolicy::Rasterize, true),
    };
    if let Some(p) = &a.grid_out {
        emit(Some(p), &(serde_json::to_string_pretty(&grid)? + "\n"))?;
    }
    let outcome = ingest_points(points, &grid, policy, clamp);
    for (id, reason) in &outcome.skipped {
        eprintln!("skipped {id:?}: {reason}");
    }
    let lens: Vec<usize> = outcome.trajectories.iter().map(Trajectory::len).collect();
    let (mean, std) = mean_std(&lens);
    eprintln!(
        "{} trajectories, {} skipped, mean length {mean:.2}, stddev {std:.2}",
        outcome.trajectories.len(),
        outcome.skipped.len()
    );
    let header = format!(
        "# grid {}x{} bbox {},{},{},{}\n",
        grid.rows, grid.cols, grid.lat_min, grid.lat_max, grid.lon_min, grid.lon_max
    );
    emit(a.out.as_deref(), &(header + &write_trajectories(&outcome.trajectories)))?;
    Ok(ExitCode::SUCCESS)
}

/// The `# grid RxC` header written by `ingest`.
fn header_shape(text: &str) -> Option<(u32, u32)> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .find_map(|l| l.trim().strip_prefix("grid ").and_then(|rest| parse_shape(rest.split_whitespace().next()?).ok()))
}

fn relations(a: RelationsArgs) -> Result<ExitCode> {
    let text = read(&a.trajectories)?;
    let ts = parse_trajectories(&text)?;
    let grid = match &a.grid_file {
        Some(p) => grid_file(p)?,
        None => {
            let (rows, cols) = a
                .grid
                .or_else(|| header_shape(&text))
                .ok_or_else(|| anyhow!("no grid given and the file has no `# grid` header"))?;
            GridSpec::cells(rows, cols)?
        }
    };
    let calc = a.calculus.calculus();
    let mut out = String::from("id1,id2,relation\n");
    for (i, t1) in ts.iter().enumerate() {
        for t2 in &ts[i + 1..] {
            let r = classify_checked(a.calculus, &grid, t1, t2)?;
            out.push_str(&format!("{},{},{}\n", csv_field(&t1.id), csv_field(&t2.id), calc.symbol(r)));
        }
    }
    emit(a.out.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn options(budget_ms: Option<u64>) -> SolveOptions {
    budget_ms.map_or_else(SolveOptions::default, |ms| SolveOptions::with_budget(Duration::from_millis(ms)))
}

fn solve(a: SolveArgs) -> Result<ExitCode> {
    let inst = parse_instance(&read(&a.instance)?).with_context(|| format!("in {}", a.instance.display()))?;
    let (outcome, _) = solve_with(&inst, &options(a.budget_ms))?;
    let (models, code) = match &outcome {
        Outcome::Sat(m) => (vec![m.clone()], 0),
        Outcome::Unsat => (vec![], 1),
        Outcome::Timeout => (vec![], 2),
    };
    emit(a.out.as_deref(), &write_models(&inst, outcome.status(), &models))?;
    if code == 2 {
        eprintln!("error: time budget exhausted");
    }
    Ok(ExitCode::from(code))
}

fn enumerate(a: EnumerateArgs) -> Result<ExitCode> {
    let inst = parse_instance(&read(&a.instance)?).with_context(|| format!("in {}", a.instance.display()))?;
    let e = enumerate_models_with(&inst, a.limit, &options(a.budget_ms))?;
    let status = if !e.complete {
        "timeout"
    } else if e.models.is_empty() {
        "unsat"
    } else {
        "sat"
    };
    emit(a.out.as_deref(), &write_models(&inst, status, &e.models))?;
    let code = match status {
        "sat" => 0,
        "unsat" => 1,
        _ => {
            eprintln!("error: time budget exhausted after {} models", e.models.len());
            2
        }
    };
    Ok(ExitCode::from(code))
}

fn emit_cmd(a: EmitArgs) -> Result<ExitCode> {
    let calc = calculus_arg(&a.calculus)?;
    let mut program = emit_program(&calc, a.encoding);
    if let Some(path) = &a.instance {
        let inst = parse_instance(&read(path)?).with_context(|| format!("in {}", path.display()))?;
        if inst.calculus().symbols() != calc.symbols() {
            bail!("instance uses calculus {} but the program is for {}", inst.calculus().name(), calc.name());
        }
        program.extend(emit_instance_facts(&inst, a.encoding)?);
    }
    emit(a.out.as_deref(), &program.to_string())?;
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let calc = calculus_arg(&a.calculus)?;
    let kind = match a.semantics {
        Some(k) => k,
        None => match calc.len() {
            6 => CalcKind::Tc6,
            10 => CalcKind::Tc10,
            n => bail!("cannot infer trajectory semantics for {n} relations; pass --semantics"),
        },
    };
    if kind.relation_count() != calc.len() {
        bail!("{kind} semantics has {} relations but the calculus has {}", kind.relation_count(), calc.len());
    }
    let grid = GridSpec::cells(a.grid.0, a.grid.1)?;
    let sampling = match a.samples {
        Some(count) => Sampling::Sampled { count, seed: a.seed },
        None => Sampling::Exhaustive,
    };
    let report = verify_soundness_with(&calc, kind, &grid, a.max_len, sampling);
    eprintln!(
        "{} trajectories, {} triples, {} violations",
        report.trajectories, report.triples_checked, report.violation_count
    );
    emit(a.out.as_deref(), &(report.to_json() + "\n"))?;
    Ok(if report.is_sound() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn calculus_source(a: &CalculusArgs) -> Result<Calculus> {
    match (&a.file, a.calculus) {
        (Some(p), _) => Ok(load_calculus(&read(p)?).with_context(|| format!("loading {}", p.display()))?),
        (None, Some(k)) => Ok(k.calculus()),
        (None, None) => bail!("pass --calculus or --file"),
    }
}

fn calculus_cmd(c: CalculusCommand) -> Result<ExitCode> {
    match c {
        CalculusCommand::Validate(a) => {
            let calc = calculus_source(&a)?;
            let report = validate_calculus(&calc);
            if report.is_valid() {
                println!("{}: all laws hold", calc.name());
                Ok(ExitCode::SUCCESS)
            } else {
                for line in report.render(&calc) {
                    println!("{line}");
                }
                Ok(ExitCode::from(1))
            }
        }
        CalculusCommand::Show(a) => {
            print!("{}", save_calculus(&calculus_source(&a)?));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn bench(a: BenchArgs) -> Result<ExitCode> {
    let sizes = a.sizes.unwrap_or_else(|| match a.experiment {
        Experiment::Exp1 => default_exp1_sizes(),
        Experiment::Exp2 => default_exp2_sizes(),
    });
    let mut cfg = BenchConfig::new(a.experiment, a.calculus, sizes);
    cfg.fixed_elements = a.elements;
    cfg.seed = a.seed;
    cfg.budget = Duration::from_millis(a.budget_ms);
    cfg.parallel = a.parallel;
    if let Some(p) = &a.trajectories {
        cfg.source = Source::Trajectories(parse_trajectories(&read(p)?)?);
    }
    let records = run_bench(&cfg)?;
    for r in &records {
        eprintln!(
            "n={} k={} revealed={} degree {}..{} nodes={} {}",
            r.row.n_elements, r.row.known_per_element, r.revealed, r.min_degree, r.max_degree, r.nodes, r.row.status
        );
    }
    let rows: Vec<_> = records.into_iter().map(|r| r.row).collect();
    let mut buf = Vec::new();
    write_rows(&rows, &mut buf)?;
    emit(a.out.as_deref(), &String::from_utf8(buf)?)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Relations(a) => relations(a),
        Command::Solve(a) => solve(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Emit(a) => emit_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Calculus(c) => calculus_cmd(c),
        Command::Bench(a) => bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
