//! `wavefeat` — command-line front end for the wavelet-feature
//! classification pipeline: inspect datasets, export energy-concentration
//! curves and filter rankings, emit feature matrices, and run seeded
//! train/evaluate experiments with machine-readable JSON/CSV outputs.
//!
//! Exit codes: 0 success, 2 usage error, 3 unreadable or malformed data,
//! 4 infeasible transform parameters for the data.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wavefeat_core::{
    evaluate, filter_bank, npes, npes_of_transform, rank_filters,
    sample_exemplars, ClassifierConfig, Delimiter, Error, EvalReport,
    FeatureConfig, FilterRanking, MdwtConfig, SplitSpec, TimeSeriesDataset,
};

#[derive(Parser)]
#[command(
    name = "wavefeat",
    version,
    about = "Wavelet feature extraction and tree-ensemble classification \
             for labeled time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a dataset: record count, length, classes, smoothness
    Info(InfoArgs),
    /// Export per-class energy-concentration curves and a filter ranking
    Npes(NpesArgs),
    /// Transform series into a feature-matrix CSV
    Transform(TransformArgs),
    /// Train a classifier under a split protocol and report accuracy
    Evaluate(EvaluateArgs),
    /// Rank candidate filters, transform with the best, and evaluate
    Pipeline(PipelineArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DelimiterArg {
    /// Detect from the first line (tab, then comma, then whitespace)
    Auto,
    Tab,
    Comma,
    /// Any run of spaces or tabs
    Space,
}

impl From<DelimiterArg> for Delimiter {
    fn from(d: DelimiterArg) -> Delimiter {
        match d {
            DelimiterArg::Auto => Delimiter::Auto,
            DelimiterArg::Tab => Delimiter::Tab,
            DelimiterArg::Comma => Delimiter::Comma,
            DelimiterArg::Space => Delimiter::Whitespace,
        }
    }
}

#[derive(Args)]
struct DataArgs {
    /// Input dataset: one `label value value …` line per record
    #[arg(long)]
    data: PathBuf,

    /// Merge a second file into --data (e.g. archive TRAIN + TEST halves)
    #[arg(long)]
    merge_with: Option<PathBuf>,

    /// Field separator
    #[arg(long, value_enum, default_value_t = DelimiterArg::Auto)]
    delimiter: DelimiterArg,
}

impl DataArgs {
    fn load(&self) -> Result<TimeSeriesDataset, Error> {
        let d = TimeSeriesDataset::parse_ucr(&self.data, self.delimiter.into())?;
        match &self.merge_with {
            None => Ok(d),
            Some(other) => {
                let o = TimeSeriesDataset::parse_ucr(other, self.delimiter.into())?;
                d.merge(&o)
            }
        }
    }
}

#[derive(Args)]
struct SeedArg {
    /// Base seed for every random choice (splits, sampling, forests)
    #[arg(long, env = "WAVEFEAT_SEED", default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct InfoArgs {
    #[command(flatten)]
    data: DataArgs,
}

#[derive(Args)]
struct NpesArgs {
    #[command(flatten)]
    data: DataArgs,

    /// Candidate filters, comma separated
    #[arg(long, value_delimiter = ',', default_value = "haar,d4,d8,d12,d16,la8,la16,la20")]
    filters: Vec<String>,

    /// Decomposition level
    #[arg(long, default_value_t = 1)]
    level: usize,

    /// Exemplar records sampled per class
    #[arg(long, default_value_t = 10)]
    exemplars: usize,

    /// Energy fraction the ranking scores against
    #[arg(long, default_value_t = 0.95)]
    threshold: f64,

    #[command(flatten)]
    seed: SeedArg,

    /// Directory for the curve CSVs and ranking JSON
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    data: DataArgs,

    /// Filters whose coefficients are concatenated, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    filters: Vec<String>,

    /// Decomposition level
    #[arg(long, default_value_t = 1)]
    level: usize,

    /// Keep the odd-length leftovers as extra features (the default)
    #[arg(long, conflicts_with = "no_extras")]
    extras: bool,

    /// Drop the odd-length leftovers
    #[arg(long)]
    no_extras: bool,

    /// Keep detail coefficients too (full-transform baseline)
    #[arg(long)]
    details: bool,

    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifierArgs {
    /// Classifier: j48 (gain-ratio tree), cart (Gini tree), rforest
    #[arg(long, default_value = "rforest")]
    classifier: String,

    /// Trees in the forest (rforest only)
    #[arg(long, default_value_t = 100)]
    trees: usize,

    /// Columns sampled per split (rforest only; default ⌊√A⌋)
    #[arg(long)]
    mtry: Option<usize>,

    /// Minimum records per split side (default: 2 for trees, 1 for rforest)
    #[arg(long)]
    min_leaf: Option<usize>,

    /// Depth cap for single trees
    #[arg(long)]
    max_depth: Option<usize>,

    /// Reduced-error pruning against a 20% holdout (cart only)
    #[arg(long)]
    prune: bool,

    /// Train every tree on the full sample instead of a bootstrap (rforest)
    #[arg(long)]
    no_bootstrap: bool,
}

impl ClassifierArgs {
    fn resolve(&self) -> Result<ClassifierConfig, Error> {
        let usage = |msg: String| Err(Error::InvalidParameter(msg));
        match self.classifier.as_str() {
            "j48" => {
                if self.prune {
                    return usage("--prune applies to cart only".into());
                }
                Ok(ClassifierConfig::GainRatioTree {
                    min_leaf: self.min_leaf.unwrap_or(2),
                    max_depth: self.max_depth,
                })
            }
            "cart" => Ok(ClassifierConfig::GiniTree {
                min_leaf: self.min_leaf.unwrap_or(2),
                max_depth: self.max_depth,
                prune: self.prune,
            }),
            "rforest" => {
                if self.prune {
                    return usage("--prune applies to cart only".into());
                }
                if self.max_depth.is_some() {
                    return usage("--max-depth applies to single trees only".into());
                }
                Ok(ClassifierConfig::Forest {
                    trees: self.trees,
                    mtry: self.mtry,
                    min_leaf: self.min_leaf.unwrap_or(1),
                    bootstrap: !self.no_bootstrap,
                })
            }
            name @ ("forestpa" | "sysfor") => usage(format!(
                "classifier '{name}' is recognized but not implemented; \
                 choose j48, cart, or rforest"
            )),
            other => usage(format!(
                "unknown classifier '{other}'; choose j48, cart, or rforest"
            )),
        }
    }
}

#[derive(Args)]
struct EvalProtocolArgs {
    /// Protocol: `cv:K` folds, `split:F` train fraction, or `fixed`
    /// (train = --data, test = --test-data)
    #[arg(long, default_value = "cv:10")]
    eval: String,

    /// Test set for --eval fixed
    #[arg(long)]
    test_data: Option<PathBuf>,

    /// Split without per-class stratification
    #[arg(long)]
    no_stratify: bool,
}

impl EvalProtocolArgs {
    /// Returns the dataset to evaluate on plus the split protocol.
    fn resolve(
        &self,
        data: &DataArgs,
        seed: u64,
    ) -> Result<(TimeSeriesDataset, SplitSpec), Error> {
        let train = data.load()?;
        let stratified = !self.no_stratify;
        if let Some(k) = self.eval.strip_prefix("cv:") {
            let k: usize = k.parse().map_err(|_| {
                Error::InvalidParameter(format!("bad fold count in --eval {}", self.eval))
            })?;
            if k < 2 {
                return Err(Error::InvalidParameter(
                    "--eval cv:K needs at least 2 folds".into(),
                ));
            }
            return Ok((train, SplitSpec::KFold { k, seed, stratified }));
        }
        if let Some(f) = self.eval.strip_prefix("split:") {
            let train_fraction: f64 = f.parse().map_err(|_| {
                Error::InvalidParameter(format!("bad fraction in --eval {}", self.eval))
            })?;
            return Ok((
                train,
                SplitSpec::Percentage {
                    train_fraction,
                    seed,
                    stratified,
                },
            ));
        }
        if self.eval == "fixed" {
            let Some(test_path) = &self.test_data else {
                return Err(Error::InvalidParameter(
                    "--eval fixed needs --test-data".into(),
                ));
            };
            let test = TimeSeriesDataset::parse_ucr(test_path, data.delimiter.into())?;
            let all = train.merge(&test)?;
            return Ok((all, SplitSpec::Fixed { train, test }));
        }
        Err(Error::InvalidParameter(format!(
            "unknown --eval protocol '{}'; use cv:K, split:F, or fixed",
            self.eval
        )))
    }
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    data: DataArgs,

    /// Wavelet filters for the features; omit for raw samples
    #[arg(long, value_delimiter = ',')]
    filters: Vec<String>,

    /// Decomposition level
    #[arg(long, default_value_t = 1)]
    level: usize,

    /// Keep the odd-length leftovers as extra features (the default)
    #[arg(long, conflicts_with = "no_extras")]
    extras: bool,

    /// Drop the odd-length leftovers
    #[arg(long)]
    no_extras: bool,

    /// Keep detail coefficients too (full-transform baseline)
    #[arg(long)]
    details: bool,

    #[command(flatten)]
    classifier: ClassifierArgs,

    #[command(flatten)]
    protocol: EvalProtocolArgs,

    #[command(flatten)]
    seed: SeedArg,

    /// Directory for report.json and results.csv (stdout JSON when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    data: DataArgs,

    /// Candidate filters the ranking chooses from, comma separated
    #[arg(long, value_delimiter = ',', default_value = "haar,d4,d8,d12,d16,la8,la16,la20")]
    candidates: Vec<String>,

    /// How many of the best-ranked filters to transform with
    #[arg(long, default_value_t = 2)]
    select_n: usize,

    /// Decomposition level
    #[arg(long, default_value_t = 1)]
    level: usize,

    /// Exemplar records sampled per class for the ranking
    #[arg(long, default_value_t = 10)]
    exemplars: usize,

    /// Energy fraction the ranking scores against
    #[arg(long, default_value_t = 0.95)]
    threshold: f64,

    /// Keep the odd-length leftovers as extra features (the default)
    #[arg(long, conflicts_with = "no_extras")]
    extras: bool,

    /// Drop the odd-length leftovers
    #[arg(long)]
    no_extras: bool,

    #[command(flatten)]
    classifier: ClassifierArgs,

    #[command(flatten)]
    protocol: EvalProtocolArgs,

    #[command(flatten)]
    seed: SeedArg,

    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Everything `pipeline` decided and measured, in one report.
#[derive(Serialize)]
struct PipelineReport {
    ranking: FilterRanking,
    chosen_filters: Vec<String>,
    original_n: usize,
    feature_width: usize,
    /// Attributes kept per original sample, `feature_width / n`.
    compression_ratio: f64,
    evaluation: EvalReport,
    seed: u64,
    version: String,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_) | Error::UnknownFilter { .. } | Error::NoCandidates => 2,
        Error::LevelTooDeep { .. } | Error::SeriesTooShort { .. } => 4,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Info(args) => cmd_info(args),
        Command::Npes(args) => cmd_npes(args),
        Command::Transform(args) => cmd_transform(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Pipeline(args) => cmd_pipeline(args),
    }
}

fn cmd_info(args: InfoArgs) -> Result<(), Error> {
    let d = args.data.load()?;
    println!("records: {}", d.k());
    println!("length: {}", d.n());
    println!("classes: {}", d.class_domain().len());
    let smoothness = d.per_class_smoothness().ok();
    for (class, count) in d.class_domain().iter().zip(d.class_counts()) {
        match smoothness
            .as_ref()
            .and_then(|s| s.iter().find(|(label, _)| label == class))
        {
            Some((_, m)) => {
                println!("  {class}: {count} records, mean smoothness {m:.4}")
            }
            None => println!("  {class}: {count} records"),
        }
    }
    Ok(())
}

/// Keep labels usable as file-name fragments.
fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

fn cmd_npes(args: NpesArgs) -> Result<(), Error> {
    let d = args.data.load()?;
    // Resolve every filter before writing anything.
    for name in &args.filters {
        filter_bank(name)?;
    }
    std::fs::create_dir_all(&args.out).map_err(|e| Error::Io {
        path: args.out.clone(),
        source: e,
    })?;

    // One curve per (class, filter) from the first sampled exemplar of each
    // class — the same exemplars the ranking scores, so the files illustrate
    // exactly what the ranking saw.
    let exemplars = sample_exemplars(&d, args.exemplars, args.seed.seed)?;
    for (class_id, indices) in exemplars.iter().enumerate() {
        let label = &d.class_domain()[class_id];
        let x = d.records()[indices[0]].values();
        let raw = npes(x)?.with_class_label(label.clone());
        write_curve(&args.out, &format!("npes_{}_raw.csv", sanitize(label)), &raw)?;
        for name in &args.filters {
            let f = filter_bank(name)?;
            let curve = npes_of_transform(x, &f, args.level)?
                .with_class_label(label.clone());
            write_curve(
                &args.out,
                &format!("npes_{}_{}.csv", sanitize(label), name),
                &curve,
            )?;
        }
    }

    let ranking = rank_filters(
        &d,
        &args.filters,
        args.level,
        args.exemplars,
        args.threshold,
        args.seed.seed,
    )?;
    let json = serde_json::to_string_pretty(&ranking).map_err(Error::Serialize)?;
    write_atomic(&args.out.join("ranking.json"), json.as_bytes())?;
    for (i, entry) in ranking.entries.iter().enumerate() {
        println!(
            "{}. {} mean M@{} = {:.2}",
            i + 1,
            entry.filter,
            args.threshold,
            entry.score
        );
    }
    Ok(())
}

fn write_curve(
    dir: &Path,
    name: &str,
    curve: &wavefeat_core::NpesCurve,
) -> Result<(), Error> {
    let mut buf = Vec::new();
    curve.write_csv(&mut buf).map_err(|e| Error::Io {
        path: name.into(),
        source: e,
    })?;
    write_atomic(&dir.join(name), &buf)
}

fn mdwt_config(
    filters: &[String],
    level: usize,
    no_extras: bool,
    details: bool,
) -> MdwtConfig {
    MdwtConfig {
        filters: filters.to_vec(),
        j0: level,
        include_extras: !no_extras,
        include_details: details,
    }
}

fn cmd_transform(args: TransformArgs) -> Result<(), Error> {
    let d = args.data.load()?;
    let cfg = mdwt_config(&args.filters, args.level, args.no_extras, args.details);
    let m = wavefeat_core::build_features(&d, &cfg)?;
    let mut buf = Vec::new();
    m.write_csv(&mut buf).map_err(|e| Error::Io {
        path: "feature CSV".into(),
        source: e,
    })?;
    match &args.out {
        Some(path) => write_atomic(path, &buf)?,
        None => {
            std::io::stdout().write_all(&buf).map_err(|e| Error::Io {
                path: "stdout".into(),
                source: e,
            })?;
        }
    }
    eprintln!(
        "{} records × {} features ({} per input sample)",
        m.k(),
        m.width(),
        m.width() as f64 / d.n() as f64
    );
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), Error> {
    let features = if args.filters.is_empty() {
        FeatureConfig::Raw
    } else {
        FeatureConfig::Mdwt(mdwt_config(
            &args.filters,
            args.level,
            args.no_extras,
            args.details,
        ))
    };
    let classifier = args.classifier.resolve()?;
    let (d, split) = args.protocol.resolve(&args.data, args.seed.seed)?;
    let report = evaluate(&d, &features, &classifier, &split, args.seed.seed)?;
    emit_report(&report, args.out.as_deref())
}

fn emit_report(report: &EvalReport, out: Option<&Path>) -> Result<(), Error> {
    let json = serde_json::to_string_pretty(report).map_err(Error::Serialize)?;
    match out {
        None => println!("{json}"),
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io {
                path: dir.to_path_buf(),
                source: e,
            })?;
            write_atomic(&dir.join("report.json"), json.as_bytes())?;
            let table = format!("{}\n{}\n", EvalReport::csv_header(), report.csv_row());
            write_atomic(&dir.join("results.csv"), table.as_bytes())?;
            println!(
                "accuracy {:.2}% ({} features); report written to {}",
                report.accuracy_percent,
                report.feature_width,
                dir.join("report.json").display()
            );
        }
    }
    Ok(())
}

fn cmd_pipeline(args: PipelineArgs) -> Result<(), Error> {
    if args.select_n == 0 || args.select_n > args.candidates.len() {
        return Err(Error::InvalidParameter(format!(
            "--select-n must lie in 1..={} (the candidate count)",
            args.candidates.len()
        )));
    }
    let classifier = args.classifier.resolve()?;
    let (d, split) = args.protocol.resolve(&args.data, args.seed.seed)?;

    let ranking = rank_filters(
        &d,
        &args.candidates,
        args.level,
        args.exemplars,
        args.threshold,
        args.seed.seed,
    )?;
    let chosen_filters: Vec<String> = ranking.entries[..args.select_n]
        .iter()
        .map(|e| e.filter.clone())
        .collect();

    let cfg = mdwt_config(&chosen_filters, args.level, args.no_extras, false);
    let feature_width = wavefeat_core::feature_width(d.n(), &cfg)?;
    let evaluation = evaluate(
        &d,
        &FeatureConfig::Mdwt(cfg),
        &classifier,
        &split,
        args.seed.seed,
    )?;

    let report = PipelineReport {
        ranking,
        chosen_filters,
        original_n: d.n(),
        feature_width,
        compression_ratio: feature_width as f64 / d.n() as f64,
        evaluation,
        seed: args.seed.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let json = serde_json::to_string_pretty(&report).map_err(Error::Serialize)?;
    match &args.out {
        None => println!("{json}"),
        Some(path) => {
            write_atomic(path, json.as_bytes())?;
            println!(
                "chose [{}]; accuracy {:.2}% at {} features ({:.3} per sample); \
                 written to {}",
                report.chosen_filters.join(", "),
                report.evaluation.accuracy_percent,
                report.feature_width,
                report.compression_ratio,
                path.display()
            );
        }
    }
    Ok(())
}

/// Write via a temp file in the destination directory plus an atomic rename,
/// so readers never observe a half-written file.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Error> {
    let io_err = |e: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
