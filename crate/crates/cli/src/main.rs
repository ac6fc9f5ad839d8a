//! `paftd`: probabilistic argumentation by tree decomposition.
//!
//! Every command prints one JSON record on standard output (except
//! `generate`, which prints a `.paf` document, and `decompose --format td`).
//! Exit codes: 0 success, 2 usage error, 3 input error, 4 capacity or timeout.

mod record;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use paftd::dp::{p_ext, p_ext_preprocessed, SolveOptions};
use paftd::generate::{generate_grid, GridSpec};
use paftd::oracle::{Oracle, DEFAULT_CAPACITY};
use paftd::preprocess::{forced_labeling, simplify_for_acc, simplify_for_ext, AccReduction, ExtReduction};
use paftd::scalar::{format_exact, format_significant};
use paftd::treedecomp::{decompose, make_nice, parse_td, validate, write_nice_td, write_td, Heuristic, NiceTd, ParsedTd};
use paftd::{ArgSet, Exact, Paf, PafDocument, Probability, Semantics};

use record::{peak_memory_mb, RunRecord};

#[derive(Parser)]
#[command(name = "paftd", version, about = "Exact probabilistic argumentation via tree decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// P-Ext by dynamic programming over a tree decomposition.
    Solve(SolveArgs),
    /// P-Ext / P-Acc and counts by enumerating subframeworks.
    Oracle(OracleArgs),
    /// Forced labeling and, with a query set, the reduced instance.
    Preprocess(PreprocessArgs),
    /// Tree decomposition of the attack graph.
    Decompose(DecomposeArgs),
    /// Seeded grid instance as a .paf document.
    Generate(GenerateArgs),
    /// Check a decomposition file against an instance.
    ValidateTd(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Float,
    Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeuristicArg {
    MinFill,
    MinDegree,
}

impl HeuristicArg {
    fn heuristic(self) -> Heuristic {
        match self {
            HeuristicArg::MinFill => Heuristic::MinFill,
            HeuristicArg::MinDegree => Heuristic::MinDegree,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (.paf).
    input: PathBuf,
    /// adm, com, stb (or admissible, complete, stable).
    #[arg(long, default_value = "complete")]
    semantics: String,
    #[arg(long, value_enum, default_value = "rational")]
    mode: Mode,
    /// Comma-separated query set; defaults to the file's `set` line.
    #[arg(long)]
    set: Option<String>,
    /// Nice decomposition to use instead of computing one.
    #[arg(long)]
    td_file: Option<PathBuf>,
    /// Apply forced-labeling simplification (complete semantics only).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    preprocess: bool,
    #[arg(long, value_enum, default_value = "min-fill")]
    heuristic: HeuristicArg,
    /// Randomizes heuristic tie-breaking.
    #[arg(long)]
    seed: Option<u64>,
    /// Time budget in seconds.
    #[arg(long, default_value_t = 300.0)]
    timeout: f64,
    /// Include every DP table in the record.
    #[arg(long)]
    trace: bool,
    /// Fail once a table grows beyond this many rows.
    #[arg(long)]
    max_rows: Option<usize>,
    /// Filter rows against the query set while generating them.
    #[arg(long)]
    eager_acceptance: bool,
}

#[derive(Args)]
struct OracleArgs {
    input: PathBuf,
    #[arg(long, default_value = "complete")]
    semantics: String,
    #[arg(long, value_enum, default_value = "rational")]
    mode: Mode,
    /// Comma-separated set for P-Ext.
    #[arg(long, visible_alias = "ext", conflicts_with = "acc")]
    set: Option<String>,
    /// Argument for P-Acc.
    #[arg(long)]
    acc: Option<String>,
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    preprocess: bool,
    /// Refuse instances with more uncertain elements than this.
    #[arg(long, default_value_t = DEFAULT_CAPACITY)]
    capacity: usize,
}

#[derive(Args)]
struct PreprocessArgs {
    input: PathBuf,
    /// Query set to reduce for (complete semantics); defaults to the file's `set` line.
    #[arg(long)]
    set: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TdFormat {
    Json,
    Td,
}

#[derive(Args)]
struct DecomposeArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "min-fill")]
    heuristic: HeuristicArg,
    #[arg(long)]
    seed: Option<u64>,
    /// Emit the plain decomposition instead of the nice one.
    #[arg(long)]
    plain: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: TdFormat,
}

#[derive(Args)]
struct GenerateArgs {
    /// Grid size as `KxN`.
    #[arg(long)]
    grid: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ValidateArgs {
    input: PathBuf,
    #[arg(long)]
    td_file: PathBuf,
}

enum Failure {
    Usage(String),
    Input(String),
    Core(paftd::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::Core(e) if e.is_resource_limit() => 4,
            Failure::Core(paftd::Error::Unsupported(_)) => 2,
            Failure::Core(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Input(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

impl From<paftd::Error> for Failure {
    fn from(e: paftd::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// What a command writes on success.
#[allow(clippy::large_enum_variant)]
enum Output {
    Record(RunRecord),
    Text(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let name = match &cli.command {
        Command::Solve(_) => "solve",
        Command::Oracle(_) => "oracle",
        Command::Preprocess(_) => "preprocess",
        Command::Decompose(_) => "decompose",
        Command::Generate(_) => "generate",
        Command::ValidateTd(_) => "validate-td",
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a).map(Output::Record),
        Command::Oracle(a) => oracle(a).map(Output::Record),
        Command::Preprocess(a) => preprocess(a).map(Output::Record),
        Command::Decompose(a) => decompose_cmd(a),
        Command::Generate(a) => generate(a).map(Output::Text),
        Command::ValidateTd(a) => validate_td(a),
    };
    match result {
        Ok(Output::Text(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Record(mut rec)) => {
            rec.wall_millis = Some(started.elapsed().as_millis() as u64);
            rec.peak_memory_mb = peak_memory_mb();
            let failed = rec.exit_code;
            println!("{}", serde_json::to_string(&rec).expect("record serializes"));
            failed.map_or(ExitCode::SUCCESS, |c| ExitCode::from(c as u8))
        }
        Err(f) => {
            let code = f.exit_code();
            eprintln!("paftd {name}: {}", f.message());
            let rec = RunRecord {
                error: Some(f.message()),
                exit_code: Some(i32::from(code)),
                wall_millis: Some(started.elapsed().as_millis() as u64),
                ..RunRecord::new(name)
            };
            println!("{}", serde_json::to_string(&rec).expect("record serializes"));
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Outcome<PafDocument> {
    paftd::parse_paf(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn semantics(name: &str) -> Outcome<Semantics> {
    name.parse().map_err(|_| Failure::Usage(format!("unknown semantics `{name}`")))
}

fn parse_set(paf: &Paf, list: &str) -> Outcome<ArgSet> {
    let names = list.split(',').map(str::trim).filter(|s| !s.is_empty());
    Ok(paf.af().arg_set(names)?)
}

fn query_set(doc: &PafDocument, flag: Option<&str>) -> Outcome<Option<ArgSet>> {
    match flag {
        Some(list) => parse_set(&doc.paf, list).map(Some),
        None => Ok(doc.set.clone()),
    }
}

fn names(paf: &Paf, set: &ArgSet) -> Vec<String> {
    paf.af().set_names(set).into_iter().map(String::from).collect()
}

/// Answer text and its 15-significant-digit decimal.
trait Answer: Probability {
    fn render(&self) -> (String, String);
}

impl Answer for Exact {
    fn render(&self) -> (String, String) {
        (self.to_string(), format_significant(self, 15))
    }
}

impl Answer for f64 {
    fn render(&self) -> (String, String) {
        let exact = Exact::from_float(*self).unwrap_or_default();
        (self.to_string(), format_significant(&exact, 15))
    }
}

fn set_answer<P: Answer>(rec: &mut RunRecord, p: &P) {
    let (answer, decimal) = p.render();
    rec.answer = Some(answer);
    rec.answer_decimal = Some(decimal);
    rec.mode = Some(P::MODE.to_string());
}

fn load_td(path: &Path, paf: &Paf) -> Outcome<NiceTd> {
    let text = read(path)?;
    let parsed = parse_td(&text, paf.af()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let nice = match parsed {
        ParsedTd::Nice(nice) => nice,
        ParsedTd::Plain(td) => {
            let problems = validate(&td, paf.af());
            if !problems.is_empty() {
                return Err(paftd::Error::InvalidDecomposition(problems).into());
            }
            make_nice(&td)?
        }
    };
    Ok(nice)
}

fn solve(args: SolveArgs) -> Outcome<RunRecord> {
    let doc = load(&args.input)?;
    let sigma = semantics(&args.semantics)?;
    let s = query_set(&doc, args.set.as_deref())?
        .ok_or_else(|| Failure::Usage("no query set: pass --set or add a `set` line".into()))?;
    let td = args.td_file.as_deref().map(|p| load_td(p, &doc.paf)).transpose()?;
    if args.timeout.is_nan() || args.timeout <= 0.0 {
        return Err(Failure::Usage("--timeout must be positive".into()));
    }
    let options = SolveOptions {
        eager_acceptance: args.eager_acceptance,
        deadline: Some(Instant::now() + Duration::from_secs_f64(args.timeout.min(1e9))),
        trace: args.trace,
        heuristic: args.heuristic.heuristic(),
        tie_seed: args.seed,
        max_rows: args.max_rows,
    };
    // a supplied decomposition refers to the unreduced instance
    let preprocess = args.preprocess && td.is_none() && sigma == Semantics::Complete;
    let mut rec = RunRecord::new("solve");
    rec.semantics = Some(sigma.short_name().to_string());
    rec.query = Some("ext".into());
    rec.set = Some(names(&doc.paf, &s));
    rec.preprocessed = Some(preprocess);
    match args.mode {
        Mode::Rational => run_solve::<Exact>(&doc.paf, sigma, &s, td.as_ref(), preprocess, &options, &mut rec)?,
        Mode::Float => run_solve::<f64>(&doc.paf, sigma, &s, td.as_ref(), preprocess, &options, &mut rec)?,
    }
    Ok(rec)
}

fn run_solve<P: Answer>(
    paf: &Paf,
    sigma: Semantics,
    s: &ArgSet,
    td: Option<&NiceTd>,
    preprocess: bool,
    options: &SolveOptions,
    rec: &mut RunRecord,
) -> Outcome<()> {
    let (probability, solution) = if preprocess {
        let pre = p_ext_preprocessed::<P>(paf, sigma, s, options)?;
        rec.removed = Some(pre.removed);
        (pre.probability, pre.solution)
    } else {
        let sol = p_ext::<P>(paf, sigma, s, td, options)?;
        (sol.probability.clone(), Some(sol))
    };
    set_answer(rec, &probability);
    let (width, nodes) = solution.as_ref().map_or((0, 0), |sol| (sol.width, sol.nodes));
    rec.width = Some(width);
    rec.nodes = Some(nodes);
    if let Some(sol) = solution {
        rec.max_table_rows = Some(sol.max_rows());
        rec.trace = sol.trace;
    }
    Ok(())
}

fn oracle(args: OracleArgs) -> Outcome<RunRecord> {
    let doc = load(&args.input)?;
    let sigma = semantics(&args.semantics)?;
    let paf = &doc.paf;
    let mut rec = RunRecord::new("oracle");
    rec.semantics = Some(sigma.short_name().to_string());
    rec.preprocessed = Some(args.preprocess);
    rec.subframeworks = Some(Oracle::new(paf).with_capacity(args.capacity).count_subframeworks()?);

    let acc = match &args.acc {
        Some(name) => Some(paf.af().arg(name)?),
        None if args.set.is_none() => doc.query,
        None => None,
    };
    if let Some(a) = acc {
        rec.query = Some("acc".into());
        rec.argument = Some(paf.af().name(a).to_string());
        let zero = args.preprocess && simplify_for_acc(paf, a)? == AccReduction::Zero;
        let oracle = Oracle::new(paf).with_capacity(args.capacity);
        match args.mode {
            Mode::Rational => {
                let p: Exact = if zero { Exact::from_integer(0.into()) } else { oracle.p_acc(sigma, a)? };
                set_answer(&mut rec, &p);
            }
            Mode::Float => {
                let p: f64 = if zero { 0.0 } else { oracle.p_acc(sigma, a)? };
                set_answer(&mut rec, &p);
            }
        }
        rec.count = Some(oracle.count_acc(sigma, a)?);
        return Ok(rec);
    }

    let Some(s) = query_set(&doc, args.set.as_deref())? else {
        // no query: report the subframework space only
        return Ok(rec);
    };
    rec.query = Some("ext".into());
    rec.set = Some(names(paf, &s));
    let oracle = Oracle::new(paf).with_capacity(args.capacity);
    rec.count = Some(oracle.count_ext(sigma, &s)?);
    let exact: Exact = if args.preprocess && sigma == Semantics::Complete {
        match simplify_for_ext(paf, &s)? {
            ExtReduction::Zero => Exact::from_integer(0.into()),
            ExtReduction::Reduced { paf: reduced, multiplier, set, removed } => {
                rec.removed = Some(removed);
                multiplier * Oracle::new(&reduced).with_capacity(args.capacity).p_ext::<Exact>(sigma, &set)?
            }
        }
    } else {
        oracle.p_ext(sigma, &s)?
    };
    match args.mode {
        Mode::Rational => set_answer(&mut rec, &exact),
        Mode::Float => {
            let p: f64 = if args.preprocess { exact.to_f64() } else { oracle.p_ext(sigma, &s)? };
            set_answer(&mut rec, &p);
        }
    }
    Ok(rec)
}

fn preprocess(args: PreprocessArgs) -> Outcome<RunRecord> {
    let doc = load(&args.input)?;
    let paf = &doc.paf;
    let forced = forced_labeling(paf);
    let mut rec = RunRecord::new("preprocess");
    rec.forced_in = Some(names(paf, &forced.forced_in));
    rec.forced_out = Some(names(paf, &forced.forced_out));
    if let Some(s) = query_set(&doc, args.set.as_deref())? {
        rec.semantics = Some(Semantics::Complete.short_name().to_string());
        rec.query = Some("ext".into());
        rec.set = Some(names(paf, &s));
        match simplify_for_ext(paf, &s)? {
            ExtReduction::Zero => {
                rec.answer = Some("0".into());
                rec.answer_decimal = Some("0".into());
                rec.mode = Some("rational".into());
            }
            ExtReduction::Reduced { multiplier, removed, .. } => {
                rec.multiplier = Some(format_exact(&multiplier));
                rec.removed = Some(removed);
            }
        }
    }
    Ok(rec)
}

fn decompose_cmd(args: DecomposeArgs) -> Outcome<Output> {
    let doc = load(&args.input)?;
    let af = doc.paf.af();
    let td = decompose(af, &args.heuristic.heuristic(), args.seed)?;
    let (text, width, nodes) = if args.plain {
        (write_td(&td, af), td.width(), td.len())
    } else {
        let nice = make_nice(&td)?;
        (write_nice_td(&nice, af), nice.width(), nice.len())
    };
    Ok(match args.format {
        TdFormat::Td => Output::Text(text),
        TdFormat::Json => {
            let mut rec = RunRecord::new("decompose");
            rec.width = Some(width);
            rec.nodes = Some(nodes);
            rec.td = Some(text);
            Output::Record(rec)
        }
    })
}

fn generate(args: GenerateArgs) -> Outcome<String> {
    let bad = || Failure::Usage(format!("--grid expects KxN with positive K and N, got `{}`", args.grid));
    let (k, n) = args.grid.split_once(['x', 'X']).ok_or_else(bad)?;
    let k: usize = k.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if k == 0 || n == 0 {
        return Err(bad());
    }
    let doc = generate_grid(GridSpec::new(k, n, args.seed))?;
    Ok(paftd::serialize_paf(&doc))
}

fn validate_td(args: ValidateArgs) -> Outcome<Output> {
    let doc = load(&args.input)?;
    let af = doc.paf.af();
    let text = read(&args.td_file)?;
    let parsed = parse_td(&text, af).map_err(|e| Failure::Input(format!("{}: {e}", args.td_file.display())))?;
    let (violations, width, nodes) = match &parsed {
        ParsedTd::Plain(td) => (validate(td, af), td.width(), td.len()),
        ParsedTd::Nice(td) => (td.validate(af), td.width(), td.len()),
    };
    let mut rec = RunRecord::new("validate-td");
    rec.valid = Some(violations.is_empty());
    rec.violations = Some(violations.iter().map(|v| v.to_string()).collect());
    rec.width = Some(width);
    rec.nodes = Some(nodes);
    if !violations.is_empty() {
        rec.exit_code = Some(3);
    }
    Ok(Output::Record(rec))
}
