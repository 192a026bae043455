//! Command-line driver: computes profiles on either path, cross-checks them,
//! and writes CSV/TSV tables ready for plotting.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{self, geometric_sizes, scaling_fit};
use crate::analytic;
use crate::error::DivnetError;
use crate::graph::{self, DivisibilityGraph, EXACT_BRANDES_LIMIT};
use crate::numtheory::build_sieve;
use crate::rational::ExactRational;

/// Default largest N accepted by `betweenness` (and by the betweenness check
/// inside `verify`). Overridden by `DIVNET_MAX_BETWEENNESS_N`.
pub const DEFAULT_MAX_BETWEENNESS_N: u64 = 10_000;
pub const MAX_BETWEENNESS_ENV: &str = "DIVNET_MAX_BETWEENNESS_N";

/// Float tolerance between the two betweenness routes above the exact limit.
pub const BETWEENNESS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "divnet", version, about = "Divisibility network G_N: closed-form vs graph measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Degree of every node.
    Degrees(CommonArgs),
    /// Local clustering coefficient of every node.
    Clustering(CommonArgs),
    /// Consecutive differences c_n - c_{n+1} and s(n) - s(n+1).
    Delta(CommonArgs),
    /// Link density of G_m for m = 2..=N.
    Linkdensity(CommonArgs),
    /// Log-log fit of link density over geometric sizes.
    Scaling(ScalingArgs),
    /// Betweenness centrality of every node.
    Betweenness(CommonArgs),
    /// Floor bands with the degree and clustering shared by their primes.
    Bands(CommonArgs),
    /// Counts of n with s(n) = s(n+1) + k.
    Census(CensusArgs),
    /// Compare the closed-form and graph paths node by node.
    Verify(CommonArgs),
    /// Edge list of G_N, one "i j" pair per line.
    ExportGraph(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Network size N.
    #[arg(long = "n")]
    pub size: Option<i64>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 256)]
    pub nmin: u64,
    #[arg(long, default_value_t = 65_536)]
    pub nmax: u64,
    #[arg(long, default_value_t = 9)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CensusArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// List the pairs with this k instead of the count table.
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Analytic,
    Oracle,
    Both,
}

impl Mode {
    fn analytic(self) -> bool {
        matches!(self, Mode::Analytic | Mode::Both)
    }

    fn oracle(self) -> bool {
        matches!(self, Mode::Oracle | Mode::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    fn delimiter(self) -> u8 {
        match self {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Degrees,
    Clustering,
    Delta,
    LinkDensity,
    Scaling,
    Betweenness,
    Bands,
    Census,
    Verify,
    ExportGraph,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CommandKind::Degrees => "degrees",
            CommandKind::Clustering => "clustering",
            CommandKind::Delta => "delta",
            CommandKind::LinkDensity => "linkdensity",
            CommandKind::Scaling => "scaling",
            CommandKind::Betweenness => "betweenness",
            CommandKind::Bands => "bands",
            CommandKind::Census => "census",
            CommandKind::Verify => "verify",
            CommandKind::ExportGraph => "export-graph",
        };
        f.write_str(name)
    }
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub size: u64,
    pub mode: Mode,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: Option<usize>,
    pub scaling: (u64, u64, usize),
    pub census_k: Option<i64>,
    pub max_betweenness_n: u64,
}

#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or values; exit status 2.
    Config(String),
    /// Failure while computing or writing; exit status 1.
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<DivnetError> for CliError {
    fn from(e: DivnetError) -> Self {
        match e {
            DivnetError::SizeTooSmall { .. }
            | DivnetError::NodeOutOfRange { .. }
            | DivnetError::InvalidInput(_)
            | DivnetError::InvalidFit(_)
            | DivnetError::CrossBand { .. } => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn betweenness_cap(env_value: Option<String>) -> Result<u64, CliError> {
    match env_value {
        None => Ok(DEFAULT_MAX_BETWEENNESS_N),
        Some(v) => v.trim().parse().map_err(|_| {
            CliError::Config(format!("{MAX_BETWEENNESS_ENV} must be a positive integer, got {v:?}"))
        }),
    }
}

impl RunConfig {
    /// Validates parsed flags. `env_cap` is the raw value of
    /// `DIVNET_MAX_BETWEENNESS_N`, if set.
    pub fn from_cli(cli: Cli, env_cap: Option<String>) -> Result<RunConfig, CliError> {
        use CliCommand as C;
        let mut scaling = (256, 65_536, 9);
        let mut census_k = None;
        let (command, common) = match cli.command {
            C::Degrees(c) => (CommandKind::Degrees, c),
            C::Clustering(c) => (CommandKind::Clustering, c),
            C::Delta(c) => (CommandKind::Delta, c),
            C::Linkdensity(c) => (CommandKind::LinkDensity, c),
            C::Scaling(s) => {
                scaling = (s.nmin, s.nmax, s.samples);
                (CommandKind::Scaling, s.common)
            }
            C::Betweenness(c) => (CommandKind::Betweenness, c),
            C::Bands(c) => (CommandKind::Bands, c),
            C::Census(c) => {
                census_k = c.k;
                (CommandKind::Census, c.common)
            }
            C::Verify(c) => (CommandKind::Verify, c),
            C::ExportGraph(c) => (CommandKind::ExportGraph, c),
        };

        let size = match (command, common.size) {
            (CommandKind::Scaling, _) => common.size.unwrap_or(scaling.1 as i64),
            (_, Some(n)) => n,
            (_, None) => return Err(CliError::Config(format!("{command} requires --n"))),
        };
        let min_size = match command {
            CommandKind::Betweenness => 3,
            CommandKind::Delta
            | CommandKind::LinkDensity
            | CommandKind::Bands
            | CommandKind::Census => 2,
            _ => 1,
        };
        if size < min_size {
            return Err(CliError::Config(format!(
                "{command} needs --n >= {min_size}, got {size}"
            )));
        }
        let size = size as u64;

        let mode = match (command, common.mode) {
            (CommandKind::Verify, None | Some(Mode::Both)) => Mode::Both,
            (CommandKind::Verify, Some(m)) => {
                return Err(CliError::Config(format!("verify requires --mode both, got {m:?}")))
            }
            (CommandKind::Scaling | CommandKind::Bands | CommandKind::Census, Some(m))
                if m != Mode::Analytic =>
            {
                return Err(CliError::Config(format!(
                    "{command} has only the analytic path"
                )))
            }
            (_, m) => m.unwrap_or(Mode::Analytic),
        };

        if common.jobs == Some(0) {
            return Err(CliError::Config("--jobs must be positive".into()));
        }
        let max_betweenness_n = betweenness_cap(env_cap)?;
        if command == CommandKind::Betweenness && size > max_betweenness_n {
            return Err(CliError::Config(format!(
                "betweenness is capped at N = {max_betweenness_n}; set {MAX_BETWEENNESS_ENV} to raise it"
            )));
        }
        if command == CommandKind::Scaling {
            let (nmin, nmax, samples) = scaling;
            geometric_sizes(nmin, nmax, samples)?;
        }

        Ok(RunConfig {
            command,
            size,
            mode,
            out: common.out,
            format: common.format,
            jobs: common.jobs,
            scaling,
            census_k,
            max_betweenness_n,
        })
    }
}

/// One cell of an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Exact(ExactRational),
    Real(f64),
}

impl Value {
    fn decimal(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Exact(r) => format_significant(r.to_f64()),
            Value::Real(x) => format_significant(*x),
        }
    }
}

/// Renders `x` with 12 significant digits in the style of C's `%.12g`.
pub fn format_significant(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("exponent");
    if (-4..DIGITS).contains(&exponent) {
        let fixed = format!("{:.*}", (DIGITS - 1 - exponent) as usize, x);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_fraction(mantissa), sign, exponent.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A named series of values over the same keys.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub values: Vec<Value>,
}

/// Per-node values of one or more series, keyed by `index`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureProfile {
    pub index: String,
    pub keys: Vec<u64>,
    pub series: Vec<Series>,
}

/// A header row plus string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl MeasureProfile {
    fn new(index: &str, keys: Vec<u64>) -> Self {
        MeasureProfile { index: index.to_string(), keys, series: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.keys.len());
        self.series.push(Series { name: name.into(), values });
    }

    /// Columns: index, one decimal column per series, then `<name>_exact` for
    /// every series that carries exact rationals.
    pub fn to_table(&self) -> Table {
        let exact: Vec<&Series> = self
            .series
            .iter()
            .filter(|s| s.values.iter().any(|v| matches!(v, Value::Exact(_))))
            .collect();
        let mut header = vec![self.index.clone()];
        header.extend(self.series.iter().map(|s| s.name.clone()));
        header.extend(exact.iter().map(|s| format!("{}_exact", s.name)));
        let rows = self
            .keys
            .iter()
            .enumerate()
            .map(|(i, key)| {
                let mut row = vec![key.to_string()];
                row.extend(self.series.iter().map(|s| s.values[i].decimal()));
                row.extend(exact.iter().map(|s| match &s.values[i] {
                    Value::Exact(r) => r.to_string(),
                    other => other.decimal(),
                }));
                row
            })
            .collect();
        Table { header, rows }
    }
}

pub fn write_table<W: Write>(table: &Table, out: W, format: Format) -> Result<(), CliError> {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(&table.header)?;
    for row in &table.rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes a profile as a plot-ready table at `path`.
pub fn emit_plot_data(profile: &MeasureProfile, path: &Path, format: Format) -> Result<(), CliError> {
    if profile.keys.is_empty() {
        return Err(DivnetError::EmptyProfile.into());
    }
    let file = File::create(path)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    write_table(&profile.to_table(), BufWriter::new(file), format)
}

/// Result of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// Human-readable summary lines (fit parameters, sign statistics).
    pub notes: Vec<String>,
    /// First disagreement found by `verify`, as `(check, n)`.
    pub mismatch: Option<(String, u64)>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.mismatch.is_some() {
            1
        } else {
            0
        }
    }
}

enum Output {
    Table(Table),
    EdgeList(DivisibilityGraph),
}

/// Executes a validated configuration and writes its output.
pub fn run(config: &RunConfig) -> Result<RunReport, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    let mut report = RunReport { notes: Vec::new(), mismatch: None };
    let output = pool.install(|| compute(config, &mut report))?;

    let sink: Box<dyn Write> = match &config.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            CliError::Runtime(format!("cannot write {}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match output {
        Output::Table(table) => write_table(&table, sink, config.format)?,
        Output::EdgeList(g) => graph::write_edge_list(&g, sink)?,
    }
    Ok(report)
}

fn exact_values(values: impl IntoIterator<Item = ExactRational>) -> Vec<Value> {
    values.into_iter().map(Value::Exact).collect()
}

fn compute(config: &RunConfig, report: &mut RunReport) -> Result<Output, CliError> {
    let size = config.size;
    let mode = config.mode;
    let keys = |from: u64, to: u64| (from..=to).collect::<Vec<u64>>();

    let table = match config.command {
        CommandKind::Degrees => {
            let mut profile = MeasureProfile::new("n", keys(1, size));
            if mode.analytic() {
                let tables = build_sieve(size)?;
                let values = analytic::degree_profile(size, &tables)?;
                profile.push("k_analytic", values.iter().map(|&(_, k)| Value::Int(k as i64)).collect());
            }
            if mode.oracle() {
                let g = graph::build_graph(size)?;
                let values = graph::degree_profile_oracle(&g);
                profile.push("k_oracle", values.iter().map(|&(_, k)| Value::Int(k as i64)).collect());
            }
            profile.to_table()
        }
        CommandKind::Clustering => {
            let mut profile = MeasureProfile::new("n", keys(1, size));
            if mode.analytic() {
                let tables = build_sieve(size)?;
                let values = analytic::clustering_profile(size, &tables)?;
                profile.push("c_analytic", exact_values(values.iter().map(|p| p.coefficient)));
            }
            if mode.oracle() {
                let g = graph::build_graph(size)?;
                let values = graph::clustering_profile_oracle(&g);
                profile.push("c_oracle", exact_values(values.iter().map(|&(_, c)| c)));
            }
            profile.to_table()
        }
        CommandKind::Delta => {
            let tables = build_sieve(size)?;
            let mut profile = MeasureProfile::new("n", keys(1, size - 1));
            if mode.analytic() {
                let values = analytic::delta_clustering_profile(size, &tables)?;
                profile.push("delta_c_analytic", exact_values(values.iter().map(|&(_, d)| d)));
            }
            if mode.oracle() {
                let g = graph::build_graph(size)?;
                let c = graph::clustering_profile_oracle(&g);
                let values = c.windows(2).map(|w| w[0].1 - w[1].1);
                profile.push("delta_c_oracle", exact_values(values));
            }
            let delta_s = (1..size)
                .map(|n| analytic::delta_divisor(n, &tables).map(Value::Int))
                .collect::<Result<Vec<_>, _>>()?;
            profile.push("delta_s", delta_s);
            if size >= 3 {
                let stats = analysis::delta_symmetry_stats(size, &tables)?;
                for (name, s) in [("delta_c", &stats.clustering), ("delta_s", &stats.divisor)] {
                    report.notes.push(format!(
                        "{name}: zero={} pos={} neg={} mean={} imbalance={}",
                        s.count_zero,
                        s.count_pos,
                        s.count_neg,
                        format_significant(s.mean.to_f64()),
                        format_significant(s.sign_imbalance()),
                    ));
                }
            }
            profile.to_table()
        }
        CommandKind::LinkDensity => {
            let mut profile = MeasureProfile::new("n", keys(2, size));
            if mode.analytic() {
                let values = (2..=size)
                    .map(analytic::link_density)
                    .collect::<Result<Vec<_>, _>>()?;
                profile.push("ld_analytic", exact_values(values));
            }
            if mode.oracle() {
                let g = graph::build_graph(size)?;
                let values = graph::link_density_prefix_oracle(&g);
                profile.push("ld_oracle", exact_values(values.into_iter().map(|(_, v)| v)));
            }
            profile.to_table()
        }
        CommandKind::Scaling => {
            let (nmin, nmax, samples) = config.scaling;
            let sizes = geometric_sizes(nmin, nmax, samples)?;
            let fit = scaling_fit(&sizes)?;
            report.notes.push(format!(
                "slope={} intercept={} residual={}",
                format_significant(fit.slope),
                format_significant(fit.intercept),
                format_significant(fit.residual)
            ));
            let mut profile = MeasureProfile::new("n", fit.sizes.clone());
            profile.push("ld", exact_values(fit.densities.iter().copied()));
            profile.push(
                "log_n",
                fit.sizes.iter().map(|&n| Value::Real((n as f64).ln())).collect(),
            );
            profile.push(
                "log_ld",
                fit.densities.iter().map(|d| Value::Real(d.to_f64().ln())).collect(),
            );
            profile.to_table()
        }
        CommandKind::Betweenness => {
            let g = graph::build_graph(size)?;
            let exact = size <= EXACT_BRANDES_LIMIT;
            let mut profile = MeasureProfile::new("n", keys(1, size));
            if mode.analytic() {
                let values = if exact {
                    exact_values(graph::betweenness_matrix_exact(&g)?.into_iter().map(|(_, v)| v))
                } else {
                    graph::betweenness_matrix_values(&g)?
                        .into_iter()
                        .map(|(_, v)| Value::Real(v))
                        .collect()
                };
                profile.push("x_analytic", values);
            }
            if mode.oracle() {
                let values = if exact {
                    exact_values(graph::betweenness_brandes_exact(&g)?.into_iter().map(|(_, v)| v))
                } else {
                    graph::betweenness_brandes(&g)?
                        .into_iter()
                        .map(|(_, v)| Value::Real(v))
                        .collect()
                };
                profile.push("x_oracle", values);
            }
            profile.to_table()
        }
        CommandKind::Bands => {
            let tables = build_sieve(size)?;
            let bands = analysis::band_decomposition(size, &tables)?;
            Table {
                header: [
                    "a",
                    "lo",
                    "hi",
                    "prime_count",
                    "prime_degree",
                    "prime_clustering",
                    "prime_clustering_exact",
                ]
                .map(String::from)
                .to_vec(),
                rows: bands
                    .iter()
                    .map(|b| {
                        vec![
                            b.a.to_string(),
                            b.lo.to_string(),
                            b.hi.to_string(),
                            b.prime_count.to_string(),
                            b.prime_degree.to_string(),
                            format_significant(b.prime_clustering.to_f64()),
                            b.prime_clustering.to_string(),
                        ]
                    })
                    .collect(),
            }
        }
        CommandKind::Census => {
            let tables = build_sieve(size)?;
            match config.census_k {
                None => {
                    let census = analysis::heathbrown_census(size, &tables)?;
                    Table {
                        header: vec!["k".into(), "count".into()],
                        rows: census
                            .counts
                            .iter()
                            .map(|(k, c)| vec![k.to_string(), c.to_string()])
                            .collect(),
                    }
                }
                Some(k) => Table {
                    header: vec!["n".into(), "s_n".into(), "s_next".into()],
                    rows: analysis::census_pairs(size, k, &tables)?
                        .into_iter()
                        .map(|n| {
                            vec![
                                n.to_string(),
                                tables.divisor_count(n).to_string(),
                                tables.divisor_count(n + 1).to_string(),
                            ]
                        })
                        .collect(),
                },
            }
        }
        CommandKind::Verify => verify(config, report)?,
        CommandKind::ExportGraph => return Ok(Output::EdgeList(graph::build_graph(size)?)),
    };
    Ok(Output::Table(table))
}

/// Outcome of one cross-path comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub compared: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<u64>,
}

impl CheckResult {
    fn from_pairs<T, F>(name: &'static str, items: impl Iterator<Item = (u64, T, T)>, equal: F) -> Self
    where
        F: Fn(&T, &T) -> bool,
    {
        let mut result = CheckResult { name, compared: 0, mismatches: 0, first_mismatch: None };
        for (n, a, b) in items {
            result.compared += 1;
            if !equal(&a, &b) {
                result.mismatches += 1;
                result.first_mismatch.get_or_insert(n);
            }
        }
        result
    }
}

/// Every cross-path comparison available at size `N`.
pub fn verification_checks(size: u64, max_betweenness_n: u64) -> Result<Vec<CheckResult>, CliError> {
    let tables = build_sieve(size)?;
    let g = graph::build_graph(size)?;
    let mut checks = Vec::new();

    let degrees_a = analytic::degree_profile(size, &tables)?;
    let degrees_o = graph::degree_profile_oracle(&g);
    checks.push(CheckResult::from_pairs(
        "degree",
        degrees_a.iter().zip(&degrees_o).map(|(a, o)| (a.0, a.1, o.1)),
        |a, b| a == b,
    ));

    let clustering_a = analytic::clustering_profile(size, &tables)?;
    let clustering_o = graph::clustering_profile_oracle(&g);
    checks.push(CheckResult::from_pairs(
        "clustering",
        clustering_a
            .iter()
            .zip(&clustering_o)
            .map(|(a, o)| (a.n, a.coefficient, o.1)),
        |a, b| a == b,
    ));

    if size >= 2 {
        let density_o = graph::link_density_prefix_oracle(&g);
        let mut pairs = Vec::with_capacity(density_o.len());
        for (m, ld) in density_o {
            pairs.push((m, analytic::link_density(m)?, ld));
        }
        checks.push(CheckResult::from_pairs("link_density", pairs.into_iter(), |a, b| a == b));
    }

    if size >= 3 && size <= max_betweenness_n {
        if size <= EXACT_BRANDES_LIMIT {
            let matrix = graph::betweenness_matrix_exact(&g)?;
            let brandes = graph::betweenness_brandes_exact(&g)?;
            checks.push(CheckResult::from_pairs(
                "betweenness",
                matrix.iter().zip(&brandes).map(|(m, b)| (m.0, m.1, b.1)),
                |a, b| a == b,
            ));
        } else {
            let matrix = graph::betweenness_matrix_values(&g)?;
            let brandes = graph::betweenness_brandes(&g)?;
            checks.push(CheckResult::from_pairs(
                "betweenness",
                matrix.iter().zip(&brandes).map(|(m, b)| (m.0, m.1, b.1)),
                |a, b| (a - b).abs() <= BETWEENNESS_TOLERANCE,
            ));
        }
    }
    Ok(checks)
}

fn verify(config: &RunConfig, report: &mut RunReport) -> Result<Table, CliError> {
    let checks = verification_checks(config.size, config.max_betweenness_n)?;
    if let Some(bad) = checks.iter().find(|c| c.mismatches > 0) {
        report.mismatch = Some((bad.name.to_string(), bad.first_mismatch.unwrap_or(0)));
    }
    Ok(Table {
        header: ["check", "compared", "mismatches", "first_mismatch"]
            .map(String::from)
            .to_vec(),
        rows: checks
            .iter()
            .map(|c| {
                vec![
                    c.name.to_string(),
                    c.compared.to_string(),
                    c.mismatches.to_string(),
                    c.first_mismatch.map(|n| n.to_string()).unwrap_or_default(),
                ]
            })
            .collect(),
    })
}

/// Parses `args`, runs, reports to stderr and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = match RunConfig::from_cli(cli, std::env::var(MAX_BETWEENNESS_ENV).ok()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("divnet: {e}");
            return 2;
        }
    };
    match run(&config) {
        Ok(report) => {
            for note in &report.notes {
                eprintln!("{note}");
            }
            if let Some((check, n)) = &report.mismatch {
                eprintln!("divnet: verification failed: {check} differs first at n = {n}");
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("divnet: {e}");
            match e {
                CliError::Config(_) => 2,
                CliError::Runtime(_) => 1,
            }
        }
    }
}
