//! The `discaudit` command line.
//!
//! Every command computes all of its artifacts in memory, then writes them
//! into `--out-dir` together with a `manifest.json` describing the run. A
//! failing command writes nothing. [`run`] returns the process exit code:
//! 0 on success, 1 for configuration errors, 2 for data errors and 3 for
//! internal or output errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::audit::{audit_dataset, audit_predictions, sweep_explanatory_up_to, AuditConfig};
use crate::classifiers::{
    predict, train_constant_majority, train_naive_bayes, train_tree, Model, TreeParams,
};
use crate::data::{Dataset, Role, Schema};
use crate::error::{Error, Result};
use crate::ingest::{self, binarize, RawTable, SchemaConfig};
use crate::report::{self, dataset_csv, render, to_json, Report, ReportFormat};
use crate::synthesis::{
    gen_corr_counterexample, gen_figure_fixtures, gen_simpson_merge, gen_simpson_split, Fraction,
};

#[derive(Debug, Parser)]
#[command(
    name = "discaudit",
    version,
    about = "Discrimination audits for binary tabular data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Audit the observed outcomes of a dataset.
    Audit(AuditArgs),
    /// Audit a model's predicted outcomes against the observed data.
    AuditPredictions(AuditPredictionsArgs),
    /// Report class balance and contrast warnings for a dataset.
    Validate(DataArgs),
    /// Train a classifier and save it as JSON.
    Train(TrainArgs),
    /// Apply a saved model and write the predicted dataset.
    Predict(PredictArgs),
    /// Average global score over explanatory subsets of each size.
    Sweep(SweepArgs),
    /// Generate constructed datasets with known scores.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Delimited input file with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Schema config JSON.
    #[arg(long)]
    pub schema: PathBuf,
    /// Field delimiter; `space` and `tab` are accepted by name.
    #[arg(long, default_value = ",")]
    pub delimiter: String,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct AuditOptions {
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Comma-separated explanatory attributes, replacing the schema's.
    /// Pass an empty value for no stratification.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub explanatory: Option<Vec<String>>,
    /// Comma-separated protected attributes, replacing the schema's.
    #[arg(long, value_delimiter = ',')]
    pub protected: Option<Vec<String>>,
    #[arg(long, default_value_t = 3)]
    pub top_k: usize,
    /// Groups below this size are flagged as small.
    #[arg(long, default_value_t = 1)]
    pub min_group_size: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub opts: AuditOptions,
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["predicted", "model"])))]
pub struct AuditPredictionsArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub opts: AuditOptions,
    /// Predictions file: either a file with a 0/1 column named after the
    /// outcome attribute, or a raw file shaped like `--data`.
    #[arg(long)]
    pub predicted: Option<PathBuf>,
    /// Delimiter of `--predicted`; defaults to `--delimiter`.
    #[arg(long)]
    pub predicted_delimiter: Option<String>,
    /// Saved model to apply to `--data`.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Tree,
    NaiveBayes,
    Majority,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value_t = Algorithm::Tree)]
    pub algorithm: Algorithm,
    /// Comma-separated input attributes, or `all-explanatory`.
    #[arg(long, value_delimiter = ',', default_value = "all-explanatory")]
    pub pool: Vec<String>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub min_leaf: usize,
    #[arg(long, default_value_t = 1.0)]
    pub smoothing: f64,
    /// Recorded in the manifest; training is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Permit protected attributes in the pool.
    #[arg(long)]
    pub allow_protected: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub opts: AuditOptions,
    /// Largest subset size; defaults to all explanatory attributes.
    #[arg(long)]
    pub max_k: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[command(subcommand)]
    pub generator: Generator,
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Generator {
    /// A fair group splitting into two extreme halves.
    SimpsonSplit {
        #[arg(long = "K", alias = "k")]
        k: u64,
    },
    /// Two groups under a limit whose union exceeds it.
    SimpsonMerge {
        #[arg(long = "K", alias = "k")]
        k: u64,
        #[arg(long)]
        m: u64,
        /// Exact fraction such as `1/50` or `0.02`.
        #[arg(long)]
        alpha_prime: Fraction,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Two groups contrasting correlation with discrimination.
    Corr {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        w: Fraction,
        #[arg(long = "K", alias = "k")]
        k: u64,
    },
    /// Small two-dimensional fixtures with predictions.
    Figures,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputRecord {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Everything needed to replay a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<InputRecord>,
    /// Digest of the schema config consumed, if any.
    pub schema_digest: Option<String>,
    pub parameters: BTreeMap<String, Value>,
    pub tool_version: String,
    pub outputs: Vec<String>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::Read {
        path: path.display().to_string(),
        source,
    })
}

/// Artifacts of one run, written only once everything has been computed.
struct Run {
    manifest: RunManifest,
    files: Vec<(String, String)>,
}

impl Run {
    fn new(command: &str) -> Self {
        Self {
            manifest: RunManifest {
                command: command.to_string(),
                inputs: Vec::new(),
                schema_digest: None,
                parameters: BTreeMap::new(),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                outputs: Vec::new(),
            },
            files: Vec::new(),
        }
    }

    fn input(&mut self, role: &str, path: &Path) -> Result<Vec<u8>> {
        let bytes = read_bytes(path)?;
        let digest = sha256_hex(&bytes);
        if role == "schema" {
            self.manifest.schema_digest = Some(digest.clone());
        }
        self.manifest.inputs.push(InputRecord {
            role: role.to_string(),
            path: path.display().to_string(),
            sha256: digest,
        });
        Ok(bytes)
    }

    fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("parameters are plain values");
        self.manifest.parameters.insert(key.to_string(), v);
    }

    fn output(&mut self, name: &str, contents: String) {
        self.manifest.outputs.push(name.to_string());
        self.files.push((name.to_string(), contents));
    }

    fn write(mut self, out_dir: &Path) -> Result<RunManifest> {
        std::fs::create_dir_all(out_dir).map_err(|source| Error::Write {
            path: out_dir.display().to_string(),
            source,
        })?;
        self.manifest.outputs.push("manifest.json".to_string());
        let manifest_text = to_json(&self.manifest)?;
        for (name, text) in &self.files {
            report::write_text(&out_dir.join(name), text)?;
        }
        report::write_text(&out_dir.join("manifest.json"), &manifest_text)?;
        Ok(self.manifest)
    }
}

fn parse_delimiter(s: &str) -> Result<u8> {
    match s {
        "space" | " " => Ok(b' '),
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(Error::Config(format!(
            "delimiter must be a single ASCII character, got `{s}`"
        ))),
    }
}

struct Loaded {
    config: SchemaConfig,
    raw: RawTable,
    binarized: ingest::Binarized,
    delimiter: u8,
}

fn load(run: &mut Run, args: &DataArgs) -> Result<Loaded> {
    let delimiter = parse_delimiter(&args.delimiter)?;
    let schema_bytes = run.input("schema", &args.schema)?;
    let config = SchemaConfig::from_json(&String::from_utf8_lossy(&schema_bytes))?;
    let data_bytes = run.input("data", &args.data)?;
    let raw = ingest::parse_raw(data_bytes.as_slice(), delimiter)?;
    let binarized = binarize(&raw, &config)?;
    run.param("delimiter", (delimiter as char).to_string());
    run.param("dropped_missing_rows", binarized.dropped_missing);
    Ok(Loaded {
        config,
        raw,
        binarized,
        delimiter,
    })
}

fn clean_names(names: &[String]) -> Vec<String> {
    names
        .iter()
        .map(|n| n.trim().to_string())
        .filter(|n| !n.is_empty())
        .collect()
}

/// Apply role overrides and build the audit configuration.
fn prepare(run: &mut Run, data: &Dataset, opts: &AuditOptions) -> Result<(Dataset, AuditConfig)> {
    let mut schema: Schema = data.schema().clone();
    if let Some(p) = &opts.protected {
        schema = schema.with_role_override(Role::Protected, &clean_names(p))?;
    }
    if let Some(e) = &opts.explanatory {
        schema = schema.with_role_override(Role::Explanatory, &clean_names(e))?;
    }
    let data = data.with_schema(schema)?;
    let cfg = AuditConfig {
        alpha: opts.alpha,
        top_k: opts.top_k,
        min_group_size: opts.min_group_size,
        ..AuditConfig::from_schema(data.schema())
    };
    run.param("alpha", cfg.alpha);
    run.param("explanatory", &cfg.explanatory);
    run.param("protected", &cfg.protected);
    run.param("top_k", cfg.top_k);
    run.param("min_group_size", cfg.min_group_size);
    run.param("format", format!("{:?}", opts.format).to_lowercase());
    Ok((data, cfg))
}

fn cmd_audit(args: &AuditArgs) -> Result<RunManifest> {
    let mut run = Run::new("audit");
    let loaded = load(&mut run, &args.data)?;
    let (data, cfg) = prepare(&mut run, &loaded.binarized.data, &args.opts)?;
    let report = audit_dataset(&data, &cfg)?;
    let fmt: ReportFormat = args.opts.format.into();
    run.output(
        &format!("audit.{}", fmt.extension()),
        render(&Report::Audit(&report), fmt)?,
    );
    run.write(&args.data.out_dir)
}

/// Predicted outcomes aligned with the observed rows.
fn load_predictions(run: &mut Run, loaded: &Loaded, path: &Path, delimiter: u8) -> Result<Vec<u8>> {
    let bytes = run.input("predicted", path)?;
    let raw = ingest::parse_raw(bytes.as_slice(), delimiter)?;
    let outcome = loaded.binarized.data.schema().outcome_name().to_string();
    if let Ok(col) = raw.column_index(&outcome) {
        return raw
            .rows
            .iter()
            .map(|r| match r[col].as_str() {
                "0" => Ok(0),
                "1" => Ok(1),
                v => Err(Error::Conversion {
                    column: outcome.clone(),
                    value: v.to_string(),
                }),
            })
            .collect();
    }
    if raw.header == loaded.raw.header {
        let pred = binarize(&raw, &loaded.config)?;
        return Ok(pred.data.outcomes());
    }
    Err(Error::Alignment(format!(
        "predictions file has neither an `{outcome}` column nor the data file's header"
    )))
}

fn cmd_audit_predictions(args: &AuditPredictionsArgs) -> Result<RunManifest> {
    let mut run = Run::new("audit-predictions");
    let loaded = load(&mut run, &args.data)?;
    let (observed, cfg) = prepare(&mut run, &loaded.binarized.data, &args.opts)?;
    let predicted = match (&args.predicted, &args.model) {
        (Some(p), _) => {
            let delimiter = match &args.predicted_delimiter {
                Some(d) => parse_delimiter(d)?,
                None => loaded.delimiter,
            };
            run.param("predicted_delimiter", (delimiter as char).to_string());
            observed.with_predictions(&load_predictions(&mut run, &loaded, p, delimiter)?)?
        }
        (None, Some(m)) => {
            let bytes = run.input("model", m)?;
            let model = Model::from_json(&String::from_utf8_lossy(&bytes))?;
            predict(&model, &observed)?
        }
        (None, None) => return Err(Error::Config("pass --predicted or --model".into())),
    };
    let audit = audit_predictions(&observed, &predicted, &cfg)?;
    let fmt: ReportFormat = args.opts.format.into();
    let text = match fmt {
        ReportFormat::Json => to_json(&audit)?,
        _ => render(&Report::Audit(&audit.report), fmt)?,
    };
    run.output(&format!("audit_predictions.{}", fmt.extension()), text);
    run.output("quality.json", to_json(&audit.quality)?);
    run.write(&args.data.out_dir)
}

fn cmd_validate(args: &DataArgs) -> Result<RunManifest> {
    let mut run = Run::new("validate");
    let loaded = load(&mut run, args)?;
    let mut report = serde_json::to_value(ingest::validate(&loaded.binarized.data))?;
    report["dropped_missing_rows"] = json!(loaded.binarized.dropped_missing);
    report["medians"] = json!(loaded.binarized.medians);
    run.output("validation.json", to_json(&report)?);
    run.write(&args.out_dir)
}

fn cmd_train(args: &TrainArgs) -> Result<RunManifest> {
    let mut run = Run::new("train");
    let loaded = load(&mut run, &args.data)?;
    let data = &loaded.binarized.data;
    let pool: Vec<String> = if args.pool.len() == 1 && args.pool[0] == "all-explanatory" {
        data.schema().names_with_role(Role::Explanatory)
    } else {
        clean_names(&args.pool)
    };
    run.param("algorithm", format!("{:?}", args.algorithm).to_lowercase());
    run.param("pool", &pool);
    run.param("seed", args.seed);
    run.param("allow_protected", args.allow_protected);
    let model = match args.algorithm {
        Algorithm::Tree => {
            run.param("max_depth", args.max_depth);
            run.param("min_leaf", args.min_leaf);
            let params = TreeParams {
                max_depth: args.max_depth,
                min_leaf: args.min_leaf,
                allow_protected: args.allow_protected,
            };
            Model::Tree(train_tree(data, &pool, params)?)
        }
        Algorithm::NaiveBayes => {
            run.param("smoothing", args.smoothing);
            Model::NaiveBayes(train_naive_bayes(
                data,
                &pool,
                args.smoothing,
                args.allow_protected,
            )?)
        }
        Algorithm::Majority => Model::Constant(train_constant_majority(data)),
    };
    let predicted = predict(&model, data)?;
    let errors = predicted
        .outcomes()
        .iter()
        .zip(data.outcomes())
        .filter(|(p, d)| **p != *d)
        .count();
    run.param("training_errors", errors);
    run.output("model.json", model.to_json()?);
    run.write(&args.data.out_dir)
}

fn binary_schema_config(data: &Dataset) -> SchemaConfig {
    let header: Vec<String> = data
        .schema()
        .attributes()
        .iter()
        .map(|a| a.name.clone())
        .collect();
    let roles: Vec<(&str, Role)> = data
        .schema()
        .attributes()
        .iter()
        .map(|a| (a.name.as_str(), a.role))
        .collect();
    SchemaConfig::identity(&header, &roles)
}

fn cmd_predict(args: &PredictArgs) -> Result<RunManifest> {
    let mut run = Run::new("predict");
    let loaded = load(&mut run, &args.data)?;
    let bytes = run.input("model", &args.model)?;
    let model = Model::from_json(&String::from_utf8_lossy(&bytes))?;
    let predicted = predict(&model, &loaded.binarized.data)?;
    run.output("predictions.csv", dataset_csv(&predicted));
    run.output(
        "predictions.schema.json",
        to_json(&binary_schema_config(&predicted))?,
    );
    run.write(&args.data.out_dir)
}

fn cmd_sweep(args: &SweepArgs) -> Result<RunManifest> {
    let mut run = Run::new("sweep");
    let loaded = load(&mut run, &args.data)?;
    let (data, cfg) = prepare(&mut run, &loaded.binarized.data, &args.opts)?;
    let max_k = args.max_k.unwrap_or(cfg.explanatory.len());
    run.param("max_k", max_k);
    let sweep = sweep_explanatory_up_to(&data, &cfg, max_k)?;
    let fmt: ReportFormat = args.opts.format.into();
    run.output(
        &format!("sweep.{}", fmt.extension()),
        render(&Report::Sweep(&sweep), fmt)?,
    );
    run.output(
        "sweep.dat",
        render(&Report::Sweep(&sweep), ReportFormat::PlotData)?,
    );
    run.write(&args.data.out_dir)
}

fn synth_outputs(run: &mut Run, prefix: &str, data: &Dataset, expected: String) -> Result<()> {
    run.output(&format!("{prefix}.csv"), dataset_csv(data));
    run.output(
        &format!("{prefix}.schema.json"),
        to_json(&binary_schema_config(data))?,
    );
    run.output(&format!("{prefix}.expected.json"), expected);
    Ok(())
}

fn cmd_synth(args: &SynthArgs) -> Result<RunManifest> {
    let mut run = Run::new("synth");
    match &args.generator {
        Generator::SimpsonSplit { k } => {
            run.param("generator", "simpson-split");
            run.param("K", k);
            let inst = gen_simpson_split(*k)?;
            synth_outputs(
                &mut run,
                "simpson_split",
                &inst.materialize(),
                to_json(&inst)?,
            )?;
        }
        Generator::SimpsonMerge {
            k,
            m,
            alpha_prime,
            alpha,
        } => {
            run.param("generator", "simpson-merge");
            run.param("K", k);
            run.param("m", m);
            run.param("alpha_prime", alpha_prime);
            run.param("alpha", alpha);
            let inst = gen_simpson_merge(*k, *m, *alpha_prime, *alpha)?;
            synth_outputs(
                &mut run,
                "simpson_merge",
                &inst.materialize(),
                to_json(&inst)?,
            )?;
        }
        Generator::Corr { m, w, k } => {
            run.param("generator", "corr");
            run.param("m", m);
            run.param("w", w);
            run.param("K", k);
            let inst = gen_corr_counterexample(*m, *w, *k)?;
            synth_outputs(&mut run, "corr", &inst.materialize(), to_json(&inst)?)?;
        }
        Generator::Figures => {
            run.param("generator", "figures");
            for fig in gen_figure_fixtures() {
                let mut expected = serde_json::Map::new();
                let cfg = AuditConfig::from_schema(fig.observed.schema());
                expected.insert(
                    "observed".into(),
                    serde_json::to_value(audit_dataset(&fig.observed, &cfg)?.glbds)?,
                );
                if let Some(pred) = &fig.predicted {
                    let audit = audit_predictions(&fig.observed, pred, &cfg)?;
                    expected.insert(
                        "predicted".into(),
                        serde_json::to_value(audit.report.glbds)?,
                    );
                    expected.insert(
                        "errors".into(),
                        json!(pred
                            .outcomes()
                            .iter()
                            .zip(fig.observed.outcomes())
                            .filter(|(p, d)| **p != *d)
                            .count()),
                    );
                    run.output(&format!("{}.predicted.csv", fig.name), dataset_csv(pred));
                }
                synth_outputs(
                    &mut run,
                    fig.name,
                    &fig.observed,
                    to_json(&Value::Object(expected))?,
                )?;
            }
        }
    }
    run.write(&args.out_dir)
}

/// Execute a parsed command.
pub fn execute(cli: &Cli) -> Result<RunManifest> {
    match &cli.command {
        Command::Audit(a) => cmd_audit(a),
        Command::AuditPredictions(a) => cmd_audit_predictions(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Train(a) => cmd_train(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
