//! Command-line front end.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 malformed or inconsistent
//! input, 4 numeric failure.

pub mod bench;
pub mod manifest;
pub mod plot;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use log::warn;

use crate::band::{build_hic_log, build_ld_r2, BandMatrix, DenseOptions};
use crate::compare::{
    adjusted_rand, bakers_gamma_with, first_difference_index, rand_index, BakersGammaOptions,
};
use crate::dendrogram::Dendrogram;
use crate::engine::cluster_with_stats;
use crate::io;
use crate::oracle::{cluster_naive, DenseSimilarity};
use crate::select::{
    loss_curve, select_broken_stick_with, slope_heuristic, BrokenStickRule, SlopeHeuristic,
};

use bench::{bench_cell, BenchEngine, BenchRow};
use manifest::RunManifest;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }

    fn input(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            msg: msg.into(),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        Self::input(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "bandclust",
    version,
    about = "Adjacency-constrained Ward clustering of band similarity matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cluster a similarity matrix and write the merge table.
    Cluster(ClusterArgs),
    /// Choose a number of clusters from a merge table.
    Select(SelectArgs),
    /// Compare two merge tables (and optionally two label files).
    Compare(CompareArgs),
    /// Time the engines on random band matrices.
    Bench(BenchArgs),
    /// Draw a dendrogram.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Coo,
    Dense,
    Genotype,
    Hic,
}

impl InputFormat {
    fn name(self) -> &'static str {
        match self {
            InputFormat::Coo => "coo",
            InputFormat::Dense => "dense",
            InputFormat::Genotype => "genotype",
            InputFormat::Hic => "hic",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(s, true).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Fast,
    Naive,
}

#[derive(Args, Debug)]
struct ClusterArgs {
    /// Input file.
    #[arg(long, required_unless_present = "manifest")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "dense")]
    format: InputFormat,
    /// Bandwidth h: similarities with |i - j| >= h are treated as 0.
    #[arg(long = "band", value_parser = clap::value_parser!(u64).range(1..), required_unless_present = "manifest")]
    band: Option<u64>,
    /// Diagonal shift added to the similarity before clustering.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, value_enum, default_value = "fast")]
    engine: Engine,
    /// Number of objects for coo/hic input (default: largest index).
    #[arg(long)]
    p: Option<usize>,
    /// Average s_ij and s_ji instead of rejecting asymmetric dense input.
    #[arg(long)]
    symmetrize: bool,
    /// Reject entries outside the band instead of dropping them.
    #[arg(long)]
    strict_band: bool,
    /// Output prefix: writes PREFIX.merges, PREFIX.heights, PREFIX.manifest.
    #[arg(long)]
    out: PathBuf,
    /// Re-run the configuration recorded in a manifest.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    BrokenStick,
    Slope,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StickRule {
    Global,
    Conditional,
}

#[derive(Args, Debug)]
struct SelectArgs {
    /// Merge table written by `cluster`.
    #[arg(long)]
    merges: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    /// Largest number of clusters considered by the slope heuristic
    /// (default: p / 2, at least 2).
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    kmax: Option<u64>,
    /// Fraction of the K range, largest K first, used to fit the slope.
    #[arg(long, default_value_t = 0.5)]
    fit_fraction: f64,
    /// Multiplier applied to the fitted minimal penalty.
    #[arg(long, default_value_t = 2.0)]
    multiplier: f64,
    #[arg(long, value_enum, default_value = "conditional")]
    rule: StickRule,
    /// Write "index label" lines here instead of standard output.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    first: PathBuf,
    second: PathBuf,
    #[arg(long, requires = "labels_b")]
    labels_a: Option<PathBuf>,
    #[arg(long, requires = "labels_a")]
    labels_b: Option<PathBuf>,
    /// Also report the unadjusted Rand index.
    #[arg(long)]
    raw_rand: bool,
    /// Largest p for which Baker's gamma uses every pair.
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(2..))]
    cap: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BenchEngineArg {
    Fast,
    Naive,
    Both,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true, value_parser = clap::value_parser!(u64).range(1..))]
    p_list: Vec<u64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true, value_parser = clap::value_parser!(u64).range(1..))]
    h_list: Vec<u64>,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "fast")]
    engine: BenchEngineArg,
    /// CSV destination (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PlotFormat {
    Svg,
    Txt,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long)]
    merges: PathBuf,
    /// Similarity matrix drawn as a heat strip under the leaves.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "dense")]
    matrix_format: InputFormat,
    /// Bandwidth of the heat strip (default: 10, capped at p).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    band: Option<u64>,
    #[arg(long, value_enum, default_value = "txt")]
    format: PlotFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return 0;
            }
            if !matches!(
                e.kind(),
                ErrorKind::MissingRequiredArgument | ErrorKind::InvalidSubcommand
            ) {
                let mut cmd = Cli::command();
                cmd.build();
                let sub = args.get(1).and_then(|a| a.to_str()).unwrap_or_default();
                let usage = match cmd.find_subcommand_mut(sub) {
                    Some(sc) => sc.render_usage(),
                    None => cmd.render_usage(),
                };
                eprintln!("\n{usage}");
            }
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Cluster(a) => cmd_cluster(a),
        Command::Select(a) => cmd_select(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Plot(a) => cmd_plot(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            e.code
        }
    }
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write_err(e: std::io::Error) -> CliError {
    CliError::input(format!("write failed: {e}"))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

/// Settings that determine a band matrix read from disk.
pub struct MatrixSource<'a> {
    pub path: &'a Path,
    pub format: InputFormat,
    pub h: usize,
    pub p: Option<usize>,
    pub symmetrize: bool,
    pub strict_band: bool,
}

/// Reads a matrix in any supported format; `h` is capped at `p`.
pub fn load_matrix(src: &MatrixSource<'_>) -> CliResult<BandMatrix<f64>> {
    let r = open(src.path)?;
    let cap = |p: usize| {
        if src.h > p {
            warn!("bandwidth {} exceeds p = {p}; using h = p", src.h);
        }
        src.h.min(p)
    };
    let m = match src.format {
        InputFormat::Dense => {
            let rows: Vec<Vec<f64>> = io::read_dense_csv(r)?;
            let opts = DenseOptions {
                symmetrize: src.symmetrize,
                strict: src.strict_band,
                ..DenseOptions::default()
            };
            BandMatrix::from_dense(&rows, cap(rows.len().max(1)), opts)?
        }
        InputFormat::Coo => {
            let t: Vec<(usize, usize, f64)> = io::read_coo(r)?;
            let p = src.p.unwrap_or_else(|| io::coo_extent(&t));
            BandMatrix::from_coo(&t, p, cap(p.max(1)), !src.strict_band)?
        }
        InputFormat::Genotype => {
            let g = io::read_genotype_csv(r)?;
            build_ld_r2(&g, cap(g.p()))?
        }
        InputFormat::Hic => {
            let c = io::read_contacts::<f64, _>(r, src.p)?;
            build_hic_log(&c, cap(c.p()))?
        }
    };
    Ok(m)
}

fn cmd_cluster(args: ClusterArgs) -> CliResult {
    let mut cfg = RunManifest {
        engine: match args.engine {
            Engine::Fast => "fast",
            Engine::Naive => "naive",
        }
        .into(),
        lambda: args.lambda,
        symmetrize: args.symmetrize,
        strict_band: args.strict_band,
        format: args.format.name().into(),
        selection: "none".into(),
        ..Default::default()
    };
    let mut p_hint = args.p;
    if let Some(path) = &args.manifest {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let m = RunManifest::parse(&text).map_err(CliError::input)?;
        if InputFormat::from_name(&m.format).is_none()
            || !["fast", "naive"].contains(&m.engine.as_str())
        {
            return Err(CliError::input(
                "manifest names an unknown format or engine",
            ));
        }
        if m.h == 0 {
            return Err(CliError::input("manifest has h = 0"));
        }
        p_hint = Some(m.p);
        cfg = RunManifest {
            selection: "none".into(),
            ..m
        };
    } else {
        let input = args.input.as_ref().expect("required by clap");
        cfg.input = fs::canonicalize(input)
            .unwrap_or_else(|_| input.clone())
            .display()
            .to_string();
        cfg.h = usize::try_from(args.band.expect("required by clap"))
            .map_err(|_| CliError::usage("bandwidth too large"))?;
    }
    if !cfg.lambda.is_finite() {
        return Err(CliError::usage("lambda must be finite"));
    }

    let format = InputFormat::from_name(&cfg.format).expect("validated above");
    let input = PathBuf::from(&cfg.input);
    let m = load_matrix(&MatrixSource {
        path: &input,
        format,
        h: cfg.h,
        p: p_hint,
        symmetrize: cfg.symmetrize,
        strict_band: cfg.strict_band,
    })?;
    let m = if cfg.lambda != 0.0 {
        m.shift_diagonal(cfg.lambda)
    } else {
        m
    };

    let t0 = Instant::now();
    let d = if cfg.engine == "naive" {
        cluster_naive(&DenseSimilarity::from_band(&m))
    } else {
        let (d, stats) = cluster_with_stats(&m);
        cfg.pencil_entries = stats.pencil_entries;
        cfg.heap_max = stats.heap_max_len;
        d
    };
    cfg.wall_time_s = t0.elapsed().as_secs_f64();
    cfg.p = m.p();
    cfg.h = m.h();

    if d.merges().iter().any(|x| !x.height.is_finite()) {
        return Err(CliError {
            code: EXIT_NUMERIC,
            msg: "non-finite linkage encountered".into(),
        });
    }

    let mut w = create(&with_suffix(&args.out, ".merges"))?;
    io::write_merges(&d, &mut w)
        .and_then(|_| w.flush())
        .map_err(write_err)?;
    let mut w = create(&with_suffix(&args.out, ".heights"))?;
    io::write_heights(&d, &mut w)
        .and_then(|_| w.flush())
        .map_err(write_err)?;
    fs::write(with_suffix(&args.out, ".manifest"), cfg.to_text()).map_err(write_err)?;
    println!("p={} h={} merges={}", cfg.p, cfg.h, d.len());
    Ok(())
}

fn read_dendrogram(path: &Path) -> CliResult<Dendrogram<f64>> {
    io::read_merges(open(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn cmd_select(args: SelectArgs) -> CliResult {
    let d = read_dendrogram(&args.merges)?;
    let p = d.p();
    let k = match args.method {
        Method::BrokenStick => {
            let rule = match args.rule {
                StickRule::Global => BrokenStickRule::Global,
                StickRule::Conditional => BrokenStickRule::Conditional,
            };
            select_broken_stick_with(&d, rule)
        }
        Method::Slope if p < 2 => 1,
        Method::Slope => {
            let k_max = match args.kmax {
                Some(k) => usize::try_from(k).unwrap_or(usize::MAX),
                None => (p / 2).clamp(2, p),
            };
            if k_max > p {
                return Err(CliError::usage(format!("--kmax {k_max} exceeds p = {p}")));
            }
            if !(args.fit_fraction > 0.0 && args.fit_fraction <= 1.0)
                || !args.multiplier.is_finite()
            {
                return Err(CliError::usage(
                    "--fit-fraction must be in (0, 1] and --multiplier finite",
                ));
            }
            let params = SlopeHeuristic {
                fit_fraction: args.fit_fraction,
                multiplier: args.multiplier,
            };
            slope_heuristic(&loss_curve(&d), p, k_max, params)?.k
        }
    };
    let part = d.cut(k)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "K={k}").map_err(write_err)?;
    match &args.labels {
        Some(path) => {
            let mut w = create(path)?;
            io::write_labels(&part, &mut w)
                .and_then(|_| w.flush())
                .map_err(write_err)?;
        }
        None => io::write_labels(&part, &mut out).map_err(write_err)?,
    }
    Ok(())
}

/// Fixed-point when short, `%.12g` otherwise; integral values keep a `.0`.
fn fmt_metric(x: f64) -> String {
    let s = io::format_sig(x, io::HEIGHT_DIGITS);
    if s.contains(['.', 'e', 'n', 'i']) {
        s
    } else {
        format!("{s}.0")
    }
}

fn cmd_compare(args: CompareArgs) -> CliResult {
    let a = read_dendrogram(&args.first)?;
    let b = read_dendrogram(&args.second)?;
    let fd = first_difference_index(&a, &b)?;
    let opts = BakersGammaOptions {
        exact_cap: usize::try_from(args.cap).unwrap_or(usize::MAX),
        seed: args.seed,
    };
    let bg = bakers_gamma_with(&a, &b, opts)?;
    let mut line = format!(
        "first_diff={} bakers_gamma={}",
        fmt_metric(fd),
        fmt_metric(bg.value)
    );
    if let Some(seed) = bg.seed {
        line.push_str(&format!(" seed={seed} pairs={}", bg.pairs));
    }
    if let (Some(la), Some(lb)) = (&args.labels_a, &args.labels_b) {
        let pa = io::read_labels(open(la)?)?;
        let pb = io::read_labels(open(lb)?)?;
        line.push_str(&format!(
            " adjusted_rand={}",
            fmt_metric(adjusted_rand(&pa, &pb)?)
        ));
        if args.raw_rand {
            line.push_str(&format!(" rand={}", fmt_metric(rand_index(&pa, &pb)?)));
        }
    }
    println!("{line}");
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> CliResult {
    let engines: &[BenchEngine] = match args.engine {
        BenchEngineArg::Fast => &[BenchEngine::Fast],
        BenchEngineArg::Naive => &[BenchEngine::Naive],
        BenchEngineArg::Both => &[BenchEngine::Fast, BenchEngine::Naive],
    };
    let to_usize = |v: u64| usize::try_from(v).map_err(|_| CliError::usage("value too large"));
    let mut lines = vec![BenchRow::HEADER.to_string()];
    for &p in &args.p_list {
        for &h in &args.h_list {
            for &engine in engines {
                let row = bench_cell(
                    to_usize(p)?,
                    to_usize(h)?,
                    engine,
                    to_usize(args.reps)?,
                    args.seed,
                );
                lines.push(row.to_csv());
            }
        }
    }
    let text = lines.join("\n") + "\n";
    match &args.out {
        Some(path) => fs::write(path, text).map_err(write_err)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> CliResult {
    let d = read_dendrogram(&args.merges)?;
    let matrix = match &args.matrix {
        Some(path) => {
            let h = args
                .band
                .map_or(10, |b| usize::try_from(b).unwrap_or(usize::MAX));
            let m = load_matrix(&MatrixSource {
                path,
                format: args.matrix_format,
                h: h.min(d.p()),
                p: Some(d.p()),
                symmetrize: true,
                strict_band: false,
            })?;
            if m.p() != d.p() {
                return Err(CliError::input(format!(
                    "matrix has p = {} but the dendrogram has p = {}",
                    m.p(),
                    d.p()
                )));
            }
            Some(m)
        }
        None => None,
    };
    let text = match args.format {
        PlotFormat::Txt => plot::render_txt(&d, matrix.as_ref()),
        PlotFormat::Svg => plot::render_svg(&d, matrix.as_ref()),
    };
    match &args.out {
        Some(path) => fs::write(path, text).map_err(write_err)?,
        None => print!("{text}"),
    }
    Ok(())
}
