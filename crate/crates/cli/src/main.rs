use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use frieze_core::frieze::{evaluators, frieze_of, DEFAULT_METHOD};
use frieze_core::mutation::{parse_trace, random_walk, replay};
use frieze_core::oracle::DEFAULT_BUDGET;
use frieze_core::separation::{predicates, DEFAULT_PREDICATE};
use frieze_core::{
    build_star_graph, parse_rendered, random_maximal_family, realize_star_graph, render_frieze,
    to_json_lines, validate_frieze, verify_structure_theorem, Error, Family, FriezeGrid, GroundSet,
    Oracle, Rational, StarGraph, TieBreak, Triangle, ValuedFamily, SCHEMA_VERSION,
};

const BUDGET_VAR: &str = "FRIEZE_ORACLE_BUDGET";

#[derive(Parser)]
#[command(
    name = "frieze",
    version,
    about = "Weakly separated families and the SL3-friezes they produce"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct FormatArg {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Check weak separation and maximality of a family file.
    Validate {
        family: PathBuf,
        /// Crossing predicate: definition, cases or chords.
        #[arg(long, default_value = DEFAULT_PREDICATE)]
        predicate: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Star graph, border triangles and structure report at one point.
    Analyze {
        family: PathBuf,
        #[arg(long)]
        x: usize,
        /// Also write the star graph to this file.
        #[arg(long)]
        star_graph_out: Option<PathBuf>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Frieze of a maximal family specialized to 1.
    Frieze {
        family: PathBuf,
        /// How the almost-continuous values are found: algorithm or oracle.
        #[arg(long, default_value = DEFAULT_METHOD)]
        method: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Validate a frieze given as JSON or as rendered text.
    CheckFrieze {
        file: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Exact value of one triangle for a family specialized to 1.
    Oracle {
        family: PathBuf,
        /// Three distinct points, e.g. 1,3,5.
        #[arg(long)]
        triangle: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Replay a mutation trace, or record a random one.
    Mutate {
        family: PathBuf,
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        replay: Option<PathBuf>,
        /// Number of random moves to record as a trace.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Emit a maximal family: a random walk from the canonical family, or
    /// the realization of a star graph.
    Gen {
        #[arg(long, required_unless_present = "star_graph_file")]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, conflicts_with_all = ["n", "steps", "seed"])]
        star_graph_file: Option<PathBuf>,
    },
}

/// A well-formed input that fails a mathematical check.
#[derive(Debug)]
struct Rejected(String);

impl fmt::Display for Rejected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Rejected {}

fn rejected(msg: impl Into<String>) -> anyhow::Error {
    Rejected(msg.into()).into()
}

/// Malformed command-line values that clap cannot see.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Rejected>() {
            return 1;
        }
        if cause.is::<Usage>() || cause.is::<std::io::Error>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::InvalidInput(_) | Error::Format(_) | Error::InconsistentRows(_) => 2,
                Error::InvalidMove(_)
                | Error::FrozenLeaf { .. }
                | Error::NotUnitary { .. }
                | Error::ConverseCondition { .. } => 1,
                Error::ZeroPivot(_) | Error::BudgetExhausted { .. } | Error::Internal(_) => 3,
            };
        }
    }
    3
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_family(path: &Path) -> anyhow::Result<Family> {
    Family::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

/// Insists on a family being maximal weakly separated.
fn require_maximal(family: Family) -> anyhow::Result<Family> {
    if let Some((a, b)) = family.first_crossing_pair() {
        return Err(rejected(format!("not weakly separated: {a} crosses {b}")));
    }
    let size = family.ground().maximal_family_size();
    if family.len() != size {
        return Err(rejected(format!(
            "not maximal: {} triangles, a maximal family on {} points has {size}",
            family.len(),
            family.ground().n()
        )));
    }
    Ok(Family::validated(family.ground(), family.iter().copied())?)
}

fn oracle_from_env() -> anyhow::Result<Oracle> {
    let budget = match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{BUDGET_VAR}='{v}' is not a non-negative integer")))?,
        Err(_) => DEFAULT_BUDGET,
    };
    Ok(Oracle::new(budget, TieBreak::Lexicographic))
}

fn print_json(value: &serde_json::Value) {
    print!("{}", to_json_lines(value));
}

fn points(t: &Triangle) -> [usize; 3] {
    t.points()
}

fn cmd_validate(path: &Path, predicate: &str, format: Format) -> anyhow::Result<()> {
    let registry = predicates();
    let predicate = registry
        .lookup(predicate)
        .map_err(|e| usage(e.to_string()))?;
    let family = load_family(path)?;
    let ground = family.ground();
    let (n, len, size) = (ground.n(), family.len(), ground.maximal_family_size());
    let crossing = family.first_crossing_pair_with(predicate);
    let maximal = crossing.is_none() && len == size;
    let verdict = match crossing {
        Some((a, b)) => format!("not weakly separated: {a} crosses {b}"),
        None if maximal => format!("maximal weakly separated ({len} = 3·{n}−8)"),
        None => format!("weakly separated but not maximal ({len} < 3·{n}−8 = {size})"),
    };
    match format {
        Format::Text => println!("{verdict}"),
        Format::Json => print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "n": n,
            "size": len,
            "maximal_size": size,
            "weakly_separated": crossing.is_none(),
            "maximal": maximal,
            "crossing_pair": crossing.map(|(a, b)| [points(&a), points(&b)]),
        })),
    }
    if maximal {
        Ok(())
    } else {
        Err(rejected(verdict))
    }
}

fn cmd_analyze(
    path: &Path,
    x: usize,
    graph_out: Option<&Path>,
    format: Format,
) -> anyhow::Result<()> {
    let family = load_family(path)?;
    family
        .ground()
        .check_point(x)
        .map_err(|e| usage(format!("--x: {e}")))?;
    let family = require_maximal(family)?;
    let graph = build_star_graph(&family, x)?;
    let report = verify_structure_theorem(&graph);
    let border = graph.border_triangles();
    if let Some(out) = graph_out {
        std::fs::write(out, graph.to_json())
            .with_context(|| format!("cannot write {}", out.display()))?;
    }
    match format {
        Format::Text => {
            println!("x = {x}, n = {}", family.ground().n());
            let tp: Vec<String> = graph
                .triangulation_points()
                .iter()
                .map(|p| p.to_string())
                .collect();
            println!("triangulation points: {}", tp.join(" "));
            let leaves: Vec<String> = graph
                .leaves()
                .iter()
                .map(|(l, p)| format!("{l}->{p}"))
                .collect();
            println!(
                "leaves: {}",
                if leaves.is_empty() {
                    "none".into()
                } else {
                    leaves.join(" ")
                }
            );
            let edges: Vec<String> = graph
                .edges()
                .iter()
                .map(|(a, b)| format!("{a}-{b}"))
                .collect();
            println!("edges: {}", edges.join(" "));
            let bt: Vec<String> = border.iter().map(|t| t.to_string()).collect();
            println!("border triangles: {}", bt.join(" "));
            println!("{report}");
        }
        Format::Json => print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "x": x,
            "n": family.ground().n(),
            "triangulation_points": graph.triangulation_points(),
            "leaves": graph.leaves().iter().map(|(l, p)| [*l, *p]).collect::<Vec<_>>(),
            "edges": graph.edges().iter().map(|(a, b)| [*a, *b]).collect::<Vec<_>>(),
            "border_triangles": border.iter().map(points).collect::<Vec<_>>(),
            "structure": report,
        })),
    }
    if report.ok() {
        Ok(())
    } else {
        Err(rejected(format!(
            "{} structure violation(s)",
            report.violations.len()
        )))
    }
}

fn cmd_frieze(path: &Path, method: &str, format: Format) -> anyhow::Result<()> {
    let registry = evaluators(oracle_from_env()?);
    let method = registry.lookup(method).map_err(|e| usage(e.to_string()))?;
    let family = require_maximal(load_family(path)?)?;
    let grid = frieze_of(&ValuedFamily::all_ones(family)?, method)?;
    let report = validate_frieze(&grid);
    match format {
        Format::Text => {
            print!("{}", render_frieze(&grid));
            println!();
            println!("{report}");
        }
        Format::Json => {
            print!("{}", grid.to_json());
            eprintln!("{report}");
        }
    }
    if report.valid() {
        Ok(())
    } else {
        bail!(Error::Internal(format!(
            "computed frieze fails validation:\n{report}"
        )))
    }
}

fn cmd_check_frieze(path: &Path, format: Format) -> anyhow::Result<()> {
    let text = read(path)?;
    let grid = if text.trim_start().starts_with('{') {
        FriezeGrid::from_json(&text)
    } else {
        parse_rendered(&text)
    }
    .with_context(|| format!("in {}", path.display()))?;
    let report = validate_frieze(&grid);
    match format {
        Format::Text => println!("{report}"),
        Format::Json => print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "valid": report.valid(),
            "sl3": report.sl3(),
            "tame": report.tame(),
            "report": report,
        })),
    }
    if report.valid() {
        Ok(())
    } else {
        let first = report.failures3.iter().chain(&report.failures4).next();
        Err(rejected(match first {
            Some(f) => format!("frieze check failed: {f}"),
            None => "frieze check failed: rows are not periodic".to_string(),
        }))
    }
}

fn parse_triangle(spec: &str, ground: GroundSet) -> anyhow::Result<Triangle> {
    let pts: Vec<usize> = spec
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("--triangle '{spec}' is not a list of points")))?;
    let [a, b, c] = pts[..] else {
        return Err(usage(format!(
            "--triangle '{spec}' must have exactly three points"
        )));
    };
    ground
        .triangle(a, b, c)
        .map_err(|e| usage(format!("--triangle: {e}")))
}

fn cmd_oracle(path: &Path, spec: &str, format: Format) -> anyhow::Result<()> {
    let oracle = oracle_from_env()?;
    let family = load_family(path)?;
    let target = parse_triangle(spec, family.ground())?;
    let family = require_maximal(family)?;
    let value = oracle
        .value(&ValuedFamily::all_ones(family)?, &target)
        .map_err(|e| match e {
            Error::BudgetExhausted { .. } => {
                anyhow::Error::new(e).context(format!("raise the budget with {BUDGET_VAR}"))
            }
            e => e.into(),
        })?;
    match format {
        Format::Text => println!("{target} = {value}"),
        Format::Json => print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "triangle": points(&target),
            "value": value.to_string(),
        })),
    }
    Ok(())
}

fn cmd_mutate(
    path: &Path,
    trace: Option<&Path>,
    random: Option<usize>,
    seed: u64,
    format: Format,
) -> anyhow::Result<()> {
    let start = ValuedFamily::all_ones(require_maximal(load_family(path)?)?)?;
    let (end, lines) = match (trace, random) {
        (Some(trace), _) => {
            let lines =
                parse_trace(&read(trace)?).with_context(|| format!("in {}", trace.display()))?;
            (replay(&start, &lines)?, lines)
        }
        (None, Some(steps)) => random_walk(&start, steps, seed)?,
        (None, None) => return Err(usage("one of --replay or --random is required")),
    };
    let one = Rational::from_integer(1.into());
    let changed = end.values().values().filter(|v| **v != one).count();
    match format {
        Format::Text => {
            for line in &lines {
                println!("{line}");
            }
            eprintln!(
                "{} move(s); {} of {} values differ from 1",
                lines.len(),
                changed,
                end.values().len()
            );
        }
        Format::Json => print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "n": end.ground().n(),
            "moves": lines.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "triangles": end.values().keys().map(points).collect::<Vec<_>>(),
            "values": end.values().values().map(|v| v.to_string()).collect::<Vec<_>>(),
        })),
    }
    Ok(())
}

fn cmd_gen(
    n: Option<usize>,
    steps: usize,
    seed: u64,
    star_graph: Option<&Path>,
) -> anyhow::Result<()> {
    let family = match star_graph {
        Some(path) => {
            let graph = StarGraph::from_json(&read(path)?)
                .with_context(|| format!("in {}", path.display()))?;
            realize_star_graph(&graph)?
        }
        None => {
            let n = n.ok_or_else(|| usage("--n is required"))?;
            let ground = GroundSet::new(n).map_err(|e| usage(format!("--n: {e}")))?;
            random_maximal_family(ground, steps, seed)
        }
    };
    print!("{}", family.to_json());
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Validate {
            family,
            predicate,
            format,
        } => cmd_validate(&family, &predicate, format.format),
        Command::Analyze {
            family,
            x,
            star_graph_out,
            format,
        } => cmd_analyze(&family, x, star_graph_out.as_deref(), format.format),
        Command::Frieze {
            family,
            method,
            format,
        } => cmd_frieze(&family, &method, format.format),
        Command::CheckFrieze { file, format } => cmd_check_frieze(&file, format.format),
        Command::Oracle {
            family,
            triangle,
            format,
        } => cmd_oracle(&family, &triangle, format.format),
        Command::Mutate {
            family,
            replay,
            random,
            seed,
            format,
        } => cmd_mutate(&family, replay.as_deref(), random, seed, format.format),
        Command::Gen {
            n,
            steps,
            seed,
            star_graph_file,
        } => cmd_gen(n, steps, seed, star_graph_file.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
