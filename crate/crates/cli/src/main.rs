// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! `epidemetric` command-line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epidemetric::clustering::{agnes, cut, karate_factions, mislabel_count, mislabeled_vertices};
use epidemetric::electrical::{effective_resistance, resistance_matrix};
use epidemetric::epidemic::{discrepancy_matrix, epidemic, epidemic_matrix};
use epidemetric::generators::{named, Corpus};
use epidemetric::pairs::{format_value, ROUND_TRIP_DIGITS};
use epidemetric::randomwalk::{
    escape_probability_exact, escape_probability_mc, green_function_exact, green_function_mc, WalkConfig,
};
use epidemetric::variational::{modulus, modulus_bruteforce};
use epidemetric::verify::{verify_graphs, VerifyOptions};
use epidemetric::{Error, Graph, PairMatrix};
use serde_json::json;

const THREADS_VAR: &str = "EPIDEMETRIC_THREADS";
const Z_LIMIT: f64 = 4.0;

#[derive(Parser)]
#[command(name = "epidemetric", version, about = "Epidemic quasimetric, effective resistance and modulus on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write distances, epidemic, effective resistance and discrepancy tables.
    Metrics(MetricsArgs),
    /// Epidemic quasimetric for one pair or all pairs.
    Epidemic(PairArgs),
    /// Effective resistance for one pair or all pairs.
    Effres(PairArgs),
    /// Modulus of the connecting family for one pair or all pairs.
    Modulus(ModulusArgs),
    /// Average-linkage clustering on the epidemic quasimetric.
    Cluster(ClusterArgs),
    /// Monte Carlo random-walk estimate against the exact electrical value.
    Simulate(SimulateArgs),
    /// Run the inequality and identity suites and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Source {
    /// Graph file or built-in dataset name.
    #[arg(conflicts_with_all = ["input", "dataset"])]
    source: Option<String>,
    /// Edge-list or adjacency CSV file.
    #[arg(long, conflicts_with = "dataset")]
    input: Option<PathBuf>,
    /// Built-in dataset: karate, path:N, cycle:N, star:N, complete:N,
    /// complete-pendant:N, triangle-failure:N.
    #[arg(long)]
    dataset: Option<String>,
}

#[derive(Args)]
struct Output {
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Significant digits in numeric output; 17 round-trips exactly.
    #[arg(long, default_value_t = ROUND_TRIP_DIGITS, value_parser = parse_digits)]
    digits: usize,
}

fn parse_digits(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(d) if (1..=ROUND_TRIP_DIGITS).contains(&d) => Ok(d),
        _ => Err(format!("expected an integer in 1..={ROUND_TRIP_DIGITS}")),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct MetricsArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PairArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    /// First vertex (1-based); with `--b`, report a single pair.
    #[arg(long, requires = "b")]
    a: Option<usize>,
    /// Second vertex (1-based).
    #[arg(long, requires = "a")]
    b: Option<usize>,
}

#[derive(Args)]
struct ModulusArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Also solve the path-family program directly (small graphs only).
    #[arg(long, requires = "a")]
    bruteforce: bool,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    /// Number of clusters.
    #[arg(long, default_value_t = 2)]
    k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    /// Probability of reaching b before returning to a.
    Escape,
    /// Expected visits to a, counting time 0, before hitting b.
    Green,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    /// Start vertex (1-based); defaults to 1.
    #[arg(long)]
    a: Option<usize>,
    /// Target vertex (1-based); defaults to N.
    #[arg(long)]
    b: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Quantity::Escape)]
    quantity: Quantity,
    /// Per-trial step cap; defaults to 100 N².
    #[arg(long)]
    max_steps: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    /// Verify COUNT seeded random graphs with at most N vertices.
    #[arg(long, num_args = 2, value_names = ["N", "COUNT"], conflicts_with_all = ["source", "input", "dataset"])]
    random: Option<Vec<usize>>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Write report.json into this directory as well as printing it.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    /// Exit 1: a check ran and did not hold.
    Check(String),
    /// Exit 2: bad arguments or unreadable input.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooManyAborts { .. }
            | Error::NotConverged { .. }
            | Error::Eigensolver
            | Error::PathBudgetExceeded { .. } => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| run(cli.command));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("epidemetric: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("epidemetric: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Metrics(args) => metrics(args),
        Command::Epidemic(args) => {
            let g = args.source.load()?;
            match pair(&g, args.a, args.b)? {
                Some((a, b)) => {
                    let r = epidemic(&g, a, b)?;
                    let text = match args.output.format {
                        Format::Json => json!({
                            "a": a + 1, "b": b + 1, "distance": r.distance,
                            "volume_a": r.volume_a, "volume_b": r.volume_b, "epidemic": r.value,
                        })
                        .to_string(),
                        Format::Csv => format!("a,b,distance,volume_a,volume_b,epidemic\n{},{},{},{},{},{}", a + 1, b + 1, r.distance, r.volume_a, r.volume_b, r.value),
                    };
                    emit(&args.output, "epidemic", &text)
                }
                None => emit_table(&args.output, "epidemic", &epidemic_matrix(&g)),
            }
        }
        Command::Effres(args) => {
            let g = args.source.load()?;
            match pair(&g, args.a, args.b)? {
                Some((a, b)) => {
                    let r = effective_resistance(&g, a, b)?;
                    emit_scalar(&args.output, "effres", a, b, &[("effres", r)])
                }
                None => emit_table(&args.output, "effres", &resistance_matrix(&g)?),
            }
        }
        Command::Modulus(args) => modulus_cmd(args),
        Command::Cluster(args) => cluster(args),
        Command::Simulate(args) => simulate(args),
        Command::Verify(args) => verify(args),
    }
}

impl Source {
    fn load(&self) -> CliResult<Graph> {
        match (&self.source, &self.input, &self.dataset) {
            (Some(s), None, None) if Path::new(s).exists() => Ok(Graph::from_file(s)?),
            (Some(s), None, None) => Ok(named(s)?),
            (None, Some(p), None) => Ok(Graph::from_file(p)?),
            (None, None, Some(d)) => Ok(named(d)?),
            _ => Err(Failure::Usage("give a graph with --input PATH, --dataset NAME or a positional source".into())),
        }
    }

    fn is_karate(&self) -> bool {
        self.dataset.as_deref() == Some("karate")
            || (self.source.as_deref() == Some("karate") && !Path::new("karate").exists())
    }
}

fn vertex(g: &Graph, label: usize, flag: &str) -> CliResult<usize> {
    if (1..=g.n()).contains(&label) {
        Ok(label - 1)
    } else {
        Err(Failure::Usage(format!("--{flag} {label} is outside 1..={}", g.n())))
    }
}

fn pair(g: &Graph, a: Option<usize>, b: Option<usize>) -> CliResult<Option<(usize, usize)>> {
    match (a, b) {
        (Some(a), Some(b)) => Ok(Some((vertex(g, a, "a")?, vertex(g, b, "b")?))),
        _ => Ok(None),
    }
}

fn rounded(v: f64, digits: usize) -> f64 {
    format_value(v, digits).parse().unwrap_or(v)
}

fn table_json(t: &PairMatrix, digits: usize) -> String {
    let rows: Vec<Vec<f64>> = (0..t.n()).map(|i| t.row(i).iter().map(|&v| rounded(v, digits)).collect()).collect();
    json!({ "n": t.n(), "values": rows }).to_string()
}

/// Writes `text` to `<out>/<stem>.<ext>` when `--out` is set, else to stdout.
fn emit(output: &Output, stem: &str, text: &str) -> CliResult<()> {
    match &output.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let ext = match output.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let mut body = text.to_owned();
            if !body.ends_with('\n') {
                body.push('\n');
            }
            fs::write(dir.join(format!("{stem}.{ext}")), body)?;
        }
        None => println!("{}", text.trim_end()),
    }
    Ok(())
}

fn emit_table(output: &Output, stem: &str, t: &PairMatrix) -> CliResult<()> {
    let text = match output.format {
        Format::Csv => t.to_csv(output.digits),
        Format::Json => table_json(t, output.digits),
    };
    emit(output, stem, &text)
}

fn emit_scalar(output: &Output, stem: &str, a: usize, b: usize, fields: &[(&str, f64)]) -> CliResult<()> {
    let text = match output.format {
        Format::Csv => {
            let names: Vec<&str> = fields.iter().map(|f| f.0).collect();
            let values: Vec<String> = fields.iter().map(|f| format_value(f.1, output.digits)).collect();
            format!("a,b,{}\n{},{},{}", names.join(","), a + 1, b + 1, values.join(","))
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("a".into(), json!(a + 1));
            obj.insert("b".into(), json!(b + 1));
            for (k, v) in fields {
                obj.insert((*k).into(), json!(rounded(*v, output.digits)));
            }
            serde_json::Value::Object(obj).to_string()
        }
    };
    emit(output, stem, &text)
}

fn metrics(args: MetricsArgs) -> CliResult<()> {
    let g = args.source.load()?;
    let out = Output { out: Some(args.output.out.clone().unwrap_or_else(|| PathBuf::from("."))), ..args.output };
    emit_table(&out, "distances", &g.distance_matrix())?;
    emit_table(&out, "epidemic", &epidemic_matrix(&g))?;
    emit_table(&out, "effres", &resistance_matrix(&g)?)?;
    emit_table(&out, "discrepancy", &discrepancy_matrix(&g)?)
}

fn modulus_cmd(args: ModulusArgs) -> CliResult<()> {
    let p = &args.pair;
    let g = p.source.load()?;
    match pair(&g, p.a, p.b)? {
        Some((a, b)) => {
            let value = modulus(&g, a, b)?;
            let mut fields = vec![("modulus", value)];
            if args.bruteforce {
                let bf = modulus_bruteforce(&g, a, b)?;
                fields.push(("bruteforce", bf.value));
                fields.push(("bruteforce_lower", bf.lower_bound));
            }
            emit_scalar(&p.output, "modulus", a, b, &fields)
        }
        None => {
            let mut t = PairMatrix::zeros(g.n());
            for a in 0..g.n() {
                for b in a + 1..g.n() {
                    let m = modulus(&g, a, b)?;
                    t.set(a, b, m);
                    t.set(b, a, m);
                }
            }
            emit_table(&p.output, "modulus", &t)
        }
    }
}

fn cluster(args: ClusterArgs) -> CliResult<()> {
    let g = args.source.load()?;
    if args.k == 0 || args.k > g.n() {
        return Err(Failure::Usage(format!("--k must lie in 1..={}", g.n())));
    }
    let dend = agnes(&epidemic_matrix(&g))?;
    let part = cut(&dend, args.k)?;
    let dir = args.output.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("dendrogram.json"), dend.to_json() + "\n")?;
    fs::write(dir.join("dendrogram.newick"), dend.to_newick(args.output.digits) + "\n")?;
    fs::write(dir.join("partition.csv"), part.to_csv())?;
    let sizes: Vec<usize> = part.clusters().iter().map(Vec::len).collect();
    println!("clusters {} sizes {sizes:?}", part.k());
    if args.source.is_karate() && args.k == 2 {
        let reference = karate_factions();
        let count = mislabel_count(&part, &reference)?;
        let who: Vec<String> = mislabeled_vertices(&part, &reference)?.iter().map(|v| (v + 1).to_string()).collect();
        let text = format!("mislabels {count}\nvertices {}\n", who.join(" "));
        fs::write(dir.join("mislabels.txt"), &text)?;
        print!("{text}");
    }
    Ok(())
}

fn simulate(args: SimulateArgs) -> CliResult<()> {
    if args.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let g = args.source.load()?;
    let a = vertex(&g, args.a.unwrap_or(1), "a")?;
    let b = vertex(&g, args.b.unwrap_or(g.n()), "b")?;
    if a == b {
        return Err(Failure::Usage("--a and --b must differ".into()));
    }
    let cfg = WalkConfig { seed: args.seed, trials: args.trials, max_steps: args.max_steps };
    let (name, estimate, exact) = match args.quantity {
        Quantity::Escape => ("escape", escape_probability_mc(&g, a, b, &cfg)?, escape_probability_exact(&g, a, b)?),
        Quantity::Green => ("green", green_function_mc(&g, a, b, &cfg)?, green_function_exact(&g, a, b)?),
    };
    let z = estimate.z_score(exact);
    let d = args.output.digits;
    let text = match args.output.format {
        Format::Json => json!({
            "quantity": name, "a": a + 1, "b": b + 1, "trials": args.trials, "seed": args.seed,
            "estimate": rounded(estimate.mean, d), "stderr": rounded(estimate.stderr, d),
            "exact": rounded(exact, d), "z": rounded(z, d),
            "completed": estimate.completed, "aborted": estimate.aborted,
        })
        .to_string(),
        Format::Csv => format!(
            "quantity,a,b,trials,seed,estimate,stderr,exact,z,completed,aborted\n{name},{},{},{},{},{},{},{},{},{},{}",
            a + 1,
            b + 1,
            args.trials,
            args.seed,
            format_value(estimate.mean, d),
            format_value(estimate.stderr, d),
            format_value(exact, d),
            format_value(z, d),
            estimate.completed,
            estimate.aborted
        ),
    };
    emit(&args.output, "simulate", &text)?;
    if z.abs() > Z_LIMIT {
        return Err(Failure::Check(format!("|z| = {:.3} exceeds {Z_LIMIT}", z.abs())));
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> CliResult<()> {
    let graphs = match &args.random {
        Some(sizes) => {
            let (n, count) = (sizes[0], sizes[1]);
            if n < 2 || count == 0 {
                return Err(Failure::Usage("--random needs N >= 2 and COUNT >= 1".into()));
            }
            Corpus { seed: args.seed, count, min_n: n.min(4), max_n: n, ..Corpus::default() }.graphs()
        }
        None => vec![args.source.load()?],
    };
    let report = verify_graphs(&graphs, &VerifyOptions { seed: args.seed, ..VerifyOptions::default() })?;
    let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{text}");
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), text + "\n")?;
    }
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .suites
            .iter()
            .filter(|s| !s.passed)
            .map(|s| format!("{} ({})", s.name, s.worst.as_deref().unwrap_or("no detail")))
            .collect();
        Err(Failure::Check(format!("failed suites: {}", failed.join("; "))))
    }
}
