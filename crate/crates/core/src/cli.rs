//! The `booksize` command line.
//!
//! Exit codes: 0 success, 1 a hard check failed, 2 usage or malformed
//! input, 3 a resource cap was hit.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analyze::{
    book_report, coupled_verdicts, histogram_csv, report_text, theorem1_verdict, ReportDocument,
};
use crate::construct::{
    default_target_size, run_pipeline, BlowUpSpec, PipelineConfig, PipelineResult, PipelineSummary,
    SparsifyMode, SparsifySpec,
};
use crate::graph::format::{self, GraphFormat};
use crate::lattice::ConstructionParams;
use crate::verify::{verify_graph, verify_pipeline, CheckStatus, VerifyOptions, VerifyOutcome};
use crate::{Caps, Error, Result, TOOL_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "booksize",
    version,
    about = "Build and verify dense graphs with small books"
)]
pub struct Cli {
    /// Worker threads (defaults to all cores); results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the pre-construction and apply sparsify / prune / blow-up.
    Construct(ConstructArgs),
    /// Triangle statistics for a graph file.
    Analyze(AnalyzeArgs),
    /// Run every hard check against a pipeline or a graph file.
    Verify(VerifyArgs),
    /// One CSV row of statistics per (r, d, |C'|) cell.
    Sweep(SweepArgs),
    /// Re-encode a graph file.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct PipelineArgs {
    /// key=value file; explicit flags take precedence over its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Side length: A = B = {1..r}^d.
    #[arg(long)]
    pub r: Option<u64>,
    /// Dimension.
    #[arg(long)]
    pub d: Option<u64>,
    /// Take C = [r]^d instead of {0..r+1}^d.
    #[arg(long)]
    pub symmetric: bool,
    /// `random`, `random:K`, `greedy` or `greedy:K`; without K the size is
    /// max(1, round(2^(-d/2) |C|)).
    #[arg(long)]
    pub sparsify: Option<String>,
    /// Seed for random sparsification and sampled checks (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Delete edges lying in no triangle.
    #[arg(long)]
    pub prune: bool,
    /// Replace each vertex of A and B by M copies.
    #[arg(long)]
    pub blowup: Option<usize>,
    /// Largest allowed part size.
    #[arg(long)]
    pub cap_part: Option<u64>,
    /// Largest allowed bitset, in bits, for one pair of parts.
    #[arg(long)]
    pub cap_bits: Option<u64>,
    /// Iteration budget of the brute-force triangle oracle.
    #[arg(long)]
    pub cap_oracle: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphEncoding {
    Text,
    Binary,
}

impl From<GraphEncoding> for GraphFormat {
    fn from(e: GraphEncoding) -> Self {
        match e {
            GraphEncoding::Text => GraphFormat::Text,
            GraphEncoding::Binary => GraphFormat::Binary,
        }
    }
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Output graph path; metadata goes to `<out>.meta.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: GraphEncoding,
    /// Only evaluate the bounds at d = r^5 in log space; builds nothing.
    #[arg(long)]
    pub coupled: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Pipeline metadata; defaults to `<in>.meta.json` when that exists.
    #[arg(long)]
    pub meta: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,
    /// Defaults to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Check this graph file instead of building one; `--r`/`--d` (or its
    /// metadata) enable the geometric checks.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub meta: Option<PathBuf>,
    /// A-B edges sampled for the sign-witness check.
    #[arg(long, default_value_t = 100)]
    pub epsilon_edges: usize,
    /// Write the outcome as JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated side lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    pub r: Vec<u64>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', required = true)]
    pub d: Vec<u64>,
    /// Comma-separated |C'| values; `auto` means max(1, round(2^(-d/2)|C|)),
    /// `full` keeps all of C.
    #[arg(long, value_delimiter = ',', default_value = "auto")]
    pub sizes: Vec<String>,
    #[arg(long, value_enum, default_value = "random")]
    pub mode: SweepMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub symmetric: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Random,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportTarget {
    Text,
    Binary,
    /// `pair,i,j,triangles` for every edge.
    EdgesCsv,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub to: ExportTarget,
    #[arg(long)]
    pub out: PathBuf,
}

/// Fully resolved pipeline settings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: ConstructionParams,
    pub symmetric: bool,
    pub sparsify: Option<SparsifySpec>,
    /// Set when the sparsify size was left to the default rule.
    pub sparsify_auto: bool,
    pub prune: bool,
    pub blowup: Option<BlowUpSpec>,
    pub seed: u64,
    pub caps: Caps,
}

impl RunConfig {
    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            params: self.params,
            symmetric: self.symmetric,
            sparsify: self.sparsify,
            prune: self.prune,
            blowup: self.blowup,
            caps: self.caps,
        }
    }
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(k + 1, format!("expected key=value, got `{line}`")))?;
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn config_value<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    map.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| Error::invalid(format!("config key `{key}` has invalid value `{v}`")))
        })
        .transpose()
}

fn parse_sparsify(text: &str) -> Result<(SparsifyMode, Option<usize>)> {
    let (mode, size) = match text.split_once(':') {
        Some((m, s)) => (m, Some(s)),
        None => (text, None),
    };
    let mode = match mode {
        "random" => SparsifyMode::Random,
        "greedy" => SparsifyMode::Greedy,
        other => return Err(Error::invalid(format!("unknown sparsify mode `{other}`"))),
    };
    let size = size
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::invalid(format!("invalid sparsify size `{s}`")))
        })
        .transpose()?;
    Ok((mode, size))
}

impl PipelineArgs {
    fn has_params(&self) -> bool {
        self.r.is_some() || self.d.is_some() || self.config.is_some()
    }

    /// Merges the config file (if any) under the explicit flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => parse_config(&fs::read_to_string(path)?)?,
            None => BTreeMap::new(),
        };
        let r = self
            .r
            .or(config_value(&file, "r")?)
            .ok_or_else(|| Error::invalid("missing --r"))?;
        let d = self
            .d
            .or(config_value(&file, "d")?)
            .ok_or_else(|| Error::invalid("missing --d"))?;
        let params = ConstructionParams::new(r, d)?;
        let symmetric = self.symmetric || config_value(&file, "symmetric")?.unwrap_or(false);
        let prune = self.prune || config_value(&file, "prune")?.unwrap_or(false);
        let seed = self
            .seed
            .or(config_value(&file, "sparsify.seed")?)
            .or(config_value(&file, "seed")?)
            .unwrap_or(0);

        let sparsify_text = match &self.sparsify {
            Some(s) => Some(s.clone()),
            None => file
                .get("sparsify.mode")
                .map(|mode| match file.get("sparsify.size") {
                    Some(size) => format!("{mode}:{size}"),
                    None => mode.clone(),
                }),
        };
        let (sparsify, sparsify_auto) = match sparsify_text {
            None => (None, false),
            Some(text) => {
                let (mode, size) = parse_sparsify(&text)?;
                let n_c = if symmetric { r } else { r + 2 }
                    .checked_pow(u32::try_from(d).unwrap_or(u32::MAX))
                    .and_then(|n| usize::try_from(n).ok());
                let target_size = match (size, n_c) {
                    (Some(k), _) => k,
                    (None, Some(n_c)) => default_target_size(d, n_c),
                    // Oversized C: the build will report the resource error.
                    (None, None) => 1,
                };
                (
                    Some(SparsifySpec {
                        mode,
                        target_size,
                        seed,
                    }),
                    size.is_none(),
                )
            }
        };

        let blowup = self
            .blowup
            .or(config_value(&file, "blowup.m")?)
            .map(|multiplicity| BlowUpSpec { multiplicity });
        let defaults = Caps::default();
        let caps = Caps {
            max_part_size: self
                .cap_part
                .or(config_value(&file, "caps.part")?)
                .unwrap_or(defaults.max_part_size),
            max_matrix_bits: self
                .cap_bits
                .or(config_value(&file, "caps.bits")?)
                .unwrap_or(defaults.max_matrix_bits),
            lattice_nodes: config_value(&file, "caps.lattice")?.unwrap_or(defaults.lattice_nodes),
            oracle_iterations: self
                .cap_oracle
                .or(config_value(&file, "caps.oracle")?)
                .unwrap_or(defaults.oracle_iterations),
        };
        Ok(RunConfig {
            params,
            symmetric,
            sparsify,
            sparsify_auto,
            prune,
            blowup,
            seed,
            caps,
        })
    }
}

/// Written next to every constructed graph as `<out>.meta.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphMetadata {
    pub schema_version: u32,
    pub tool_version: String,
    pub seed: u64,
    pub config: RunConfig,
    pub pipeline: PipelineSummary,
}

pub fn meta_path(graph_path: &Path) -> PathBuf {
    let mut name = graph_path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn read_meta(explicit: Option<&Path>, graph_path: &Path) -> Result<Option<GraphMetadata>> {
    let path = match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let p = meta_path(graph_path);
            if !p.exists() {
                return Ok(None);
            }
            p
        }
    };
    Ok(Some(serde_json::from_str(&fs::read_to_string(path)?)?))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn emit(out: &mut dyn Write, path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn run_construct(args: &ConstructArgs, out: &mut dyn Write) -> Result<i32> {
    if args.coupled {
        let file = match &args.pipeline.config {
            Some(path) => parse_config(&fs::read_to_string(path)?)?,
            None => BTreeMap::new(),
        };
        let r = args
            .pipeline
            .r
            .or(config_value(&file, "r")?)
            .ok_or_else(|| Error::invalid("missing --r"))?;
        let verdicts = coupled_verdicts(r)?;
        emit(out, args.out.as_deref(), &to_json(&verdicts))?;
        return Ok(EXIT_OK);
    }
    let cfg = args.pipeline.resolve()?;
    let out_path = args
        .out
        .as_deref()
        .ok_or_else(|| Error::invalid("construct needs --out"))?;
    let result = run_pipeline(&cfg.pipeline())?;
    format::save(&result.graph, out_path, args.format.into())?;
    let meta = GraphMetadata {
        schema_version: 1,
        tool_version: TOOL_VERSION.to_string(),
        seed: cfg.seed,
        config: cfg,
        pipeline: result.summary.clone(),
    };
    fs::write(meta_path(out_path), to_json(&meta))?;
    let [na, nb, nc] = result.summary.part_sizes;
    writeln!(
        out,
        "wrote {} (A={na} B={nb} C={nc}, {} edges)",
        out_path.display(),
        result.graph.total_edges()
    )?;
    Ok(EXIT_OK)
}

/// The report document for a graph plus whatever metadata accompanies it.
pub fn build_report(
    graph: &crate::TripartiteGraph,
    meta: Option<&GraphMetadata>,
) -> ReportDocument {
    let mut report = book_report(graph);
    let mut doc_meta = (None, None, None);
    if let Some(m) = meta {
        report.verdicts = theorem1_verdict(&m.pipeline, &report);
        doc_meta = (
            Some(m.seed),
            Some(m.pipeline.params),
            Some(m.pipeline.clone()),
        );
    }
    let mut doc = ReportDocument::new(report);
    (doc.seed, doc.params, doc.pipeline) = doc_meta;
    doc
}

/// Report document for an in-memory pipeline run.
pub fn pipeline_report(result: &PipelineResult, seed: u64) -> ReportDocument {
    let mut report = book_report(&result.graph);
    report.verdicts = theorem1_verdict(&result.summary, &report);
    let mut doc = ReportDocument::new(report);
    doc.seed = Some(seed);
    doc.params = Some(result.summary.params);
    doc.pipeline = Some(result.summary.clone());
    doc
}

fn render(doc: &ReportDocument, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => doc.to_json(),
        ReportFormat::Csv => histogram_csv(&doc.report),
        ReportFormat::Text => report_text(doc),
    }
}

fn run_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    let graph = format::load(&args.input)?;
    let meta = read_meta(args.meta.as_deref(), &args.input)?;
    let doc = build_report(&graph, meta.as_ref());
    emit(out, args.out.as_deref(), &render(&doc, args.format))?;
    Ok(EXIT_OK)
}

fn outcome_text(outcome: &VerifyOutcome) -> String {
    let mut s = String::new();
    for c in &outcome.checks {
        let tag = match c.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "skip",
        };
        writeln!(s, "[{tag}] {}: {}", c.name, c.detail).unwrap();
    }
    for v in &outcome.verdicts {
        writeln!(
            s,
            "[verdict {}] {}: {} {} {}",
            if v.passed { "pass" } else { "fail" },
            v.name,
            v.actual,
            v.relation,
            v.bound
        )
        .unwrap();
    }
    s
}

fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let opts_for = |caps: Caps, seed: u64| VerifyOptions {
        caps,
        epsilon_edges: args.epsilon_edges,
        seed,
    };
    let outcome = match &args.input {
        None => {
            let cfg = args.pipeline.resolve()?;
            let result = run_pipeline(&cfg.pipeline())?;
            verify_pipeline(&result, &opts_for(cfg.caps, cfg.seed))?
        }
        Some(path) => {
            let graph = format::load(path)?;
            let meta = read_meta(args.meta.as_deref(), path)?;
            let (params, missing, caps, seed) = match (&meta, args.pipeline.has_params()) {
                (_, true) => {
                    let cfg = args.pipeline.resolve()?;
                    (Some(cfg.params), None, cfg.caps, cfg.seed)
                }
                (Some(m), false) => {
                    let mult = m.pipeline.blowup.map_or(1, |b| b.multiplicity as u64);
                    let p = m.pipeline.pruned_edges;
                    let missing = crate::construct::PairCounts {
                        ab: p.ab * mult * mult,
                        bc: p.bc * mult,
                        ac: p.ac * mult,
                    };
                    (
                        Some(m.pipeline.params),
                        Some(missing),
                        m.config.caps,
                        m.seed,
                    )
                }
                (None, false) => (None, None, Caps::default(), 0),
            };
            let mut outcome =
                verify_graph(&graph, params.as_ref(), missing, &opts_for(caps, seed))?;
            if let Some(m) = &meta {
                outcome.verdicts = theorem1_verdict(&m.pipeline, &book_report(&graph));
            }
            outcome
        }
    };
    out.write_all(outcome_text(&outcome).as_bytes())?;
    if let Some(p) = &args.out {
        fs::write(p, to_json(&outcome))?;
    }
    if outcome.passed() {
        Ok(EXIT_OK)
    } else {
        let names: Vec<_> = outcome.failures().map(|c| c.name.as_str()).collect();
        writeln!(out, "failed: {}", names.join(", "))?;
        Ok(EXIT_ASSERTION)
    }
}

pub const SWEEP_VERDICTS: [&str; 6] = [
    "every_edge_in_triangle",
    "booksize_le_15_pow_d",
    "preconstruction_ab_fraction",
    "uncovered_ab_fraction",
    "vertex_count",
    "density",
];

fn run_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let mut csv = String::from(
        "r,d,mode,size,seed,n_a,n_b,n_c,total_vertices,edges,booksize,uncovered,density_ratio",
    );
    for name in SWEEP_VERDICTS {
        write!(csv, ",{name}").unwrap();
    }
    csv.push_str(",status\n");
    let mode = match args.mode {
        SweepMode::Random => SparsifyMode::Random,
        SweepMode::Greedy => SparsifyMode::Greedy,
    };
    let mode_label = match mode {
        SparsifyMode::Random => "random",
        SparsifyMode::Greedy => "greedy",
    };
    for &r in &args.r {
        for &d in &args.d {
            for size in &args.sizes {
                let params = ConstructionParams::new(r, d)?;
                let side = if args.symmetric { r } else { r + 2 };
                let n_c = side
                    .checked_pow(d as u32)
                    .and_then(|n| usize::try_from(n).ok());
                let target = match (size.as_str(), n_c) {
                    (_, None) => None,
                    ("auto", Some(n_c)) => Some(default_target_size(d, n_c)),
                    ("full", Some(n_c)) => Some(n_c),
                    (k, Some(_)) => Some(
                        k.parse::<usize>()
                            .map_err(|_| Error::invalid(format!("invalid sweep size `{k}`")))?,
                    ),
                };
                let mut cfg = PipelineConfig::new(params);
                cfg.symmetric = args.symmetric;
                cfg.prune = true;
                cfg.sparsify = target.map(|target_size| SparsifySpec {
                    mode,
                    target_size,
                    seed: args.seed,
                });
                let size_label = target.map_or_else(|| size.clone(), |t| t.to_string());
                write!(csv, "{r},{d},{mode_label},{size_label},{}", args.seed).unwrap();
                match run_pipeline(&cfg) {
                    Ok(result) => {
                        let doc = pipeline_report(&result, args.seed);
                        let rep = &doc.report;
                        let [na, nb, nc] = rep.part_sizes;
                        write!(
                            csv,
                            ",{na},{nb},{nc},{},{},{},{},{:.6}",
                            rep.total_vertices,
                            rep.total_edges,
                            rep.booksize,
                            rep.uncovered,
                            rep.density_ratio
                        )
                        .unwrap();
                        for v in &rep.verdicts {
                            write!(csv, ",{}", if v.passed { "pass" } else { "fail" }).unwrap();
                        }
                        csv.push_str(",ok\n");
                    }
                    Err(e @ (Error::Resource { .. } | Error::InvalidInput(_))) => {
                        csv.push_str(&",".repeat(8 + SWEEP_VERDICTS.len()));
                        writeln!(csv, ",skipped: {}", e.to_string().replace(',', ";")).unwrap();
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    emit(out, args.out.as_deref(), &csv)?;
    Ok(EXIT_OK)
}

fn run_export(args: &ExportArgs, out: &mut dyn Write) -> Result<i32> {
    let graph = format::load(&args.input)?;
    match args.to {
        ExportTarget::Text => format::save(&graph, &args.out, GraphFormat::Text)?,
        ExportTarget::Binary => format::save(&graph, &args.out, GraphFormat::Binary)?,
        ExportTarget::EdgesCsv => {
            let counts = crate::analyze::edge_triangle_counts(&graph);
            let mut csv = String::from("pair,i,j,triangles\n");
            for &(e, t) in counts.iter() {
                writeln!(csv, "{},{},{},{t}", e.pair, e.i, e.j).unwrap();
            }
            fs::write(&args.out, csv)?;
        }
    }
    writeln!(out, "wrote {}", args.out.display())?;
    Ok(EXIT_OK)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource { .. } => EXIT_RESOURCE,
        Error::InvalidInput(_) | Error::Parse { .. } | Error::Binary { .. } => EXIT_USAGE,
        Error::Invariant(_) | Error::Io(_) | Error::Json(_) => EXIT_ASSERTION,
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let body = |out: &mut dyn Write| match &cli.command {
        Command::Construct(a) => run_construct(a, out),
        Command::Analyze(a) => run_analyze(a, out),
        Command::Verify(a) => run_verify(a, out),
        Command::Sweep(a) => run_sweep(a, out),
        Command::Export(a) => run_export(a, out),
    };
    match cli.threads {
        None => body(out),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::invalid(format!("cannot start {n} threads: {e}")))?;
            // The sink need not be `Send`; buffer inside the pool.
            let mut buf = Vec::new();
            let code = pool.install(|| body(&mut buf));
            out.write_all(&buf)?;
            code
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(err, "{}", e.render());
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
