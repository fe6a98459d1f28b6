//! The `bookimpact` command line.
//!
//! Every subcommand resolves a [`RunConfig`] from an optional `--config` file
//! (TOML, or JSON when the extension is `.json`) overlaid with explicit flags.
//! Reports carry the SHA-256 of the resolved configuration and the crate
//! version. All outputs of a command are computed before anything is written,
//! and each file is written to a temporary sibling and renamed into place.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{AspectCategoryMap, Method};
use crate::aspect::{AspectVocabulary, Scope, SentimentLexicon, DEFAULT_TOP_ASPECTS};
use crate::corpus::{load_corpus, load_dictionary, Tokenizer, TokenizerConfig, DEFAULT_MIN_REVIEWS};
use crate::factors::{CombinationSpec, FactorOptions, Level, Part};
use crate::pipeline::{correlation_report, prepare, train_model, CorrelationReport, PipelineOptions};
use crate::polarity::{read_labeled, Hyperparams, PolarityModel, DEFAULT_TOP_K};
use crate::synth::{generate, SynthSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const MODEL_FILE: &str = "model.json";
pub const TRAIN_REPORT_FILE: &str = "train_report.json";
pub const SCORE_REPORT_FILE: &str = "score_report.json";
pub const CORRELATION_REPORT_FILE: &str = "correlation_report.json";
pub const RENDERED_REPORT_FILE: &str = "report.txt";

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub reviews: Option<PathBuf>,
    pub books: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub aspects: Option<PathBuf>,
    pub training: Option<PathBuf>,
    pub category_map: Option<PathBuf>,
    /// Trained model to load; without it `score` and `correlate` train one.
    pub model: Option<PathBuf>,
    /// Word list switching the tokenizer to dictionary longest-match mode.
    pub dictionary: Option<PathBuf>,
    #[serde(with = "display_from_str")]
    pub combination: CombinationSpec,
    pub min_reviews: usize,
    pub top_k: usize,
    pub top_n: usize,
    pub scope: Scope,
    pub smoothing: bool,
    pub directions: bool,
    pub global_aspects: bool,
    pub method: Method,
    pub disciplines: Vec<String>,
    pub seed: u64,
    pub epochs: u32,
    pub learning_rate: f64,
    pub regularization: f64,
    pub holdout_fraction: f64,
    pub synth: SynthSpec,
    /// Where outputs go. Read from config files but never serialized, so it
    /// affects neither the configuration hash nor report bytes.
    #[serde(skip_serializing)]
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let h = Hyperparams::default();
        Self {
            reviews: None,
            books: None,
            lexicon: None,
            aspects: None,
            training: None,
            category_map: None,
            model: None,
            dictionary: None,
            combination: CombinationSpec::new(Part::HolderAndEvaluator, Level::MacroMicro),
            min_reviews: DEFAULT_MIN_REVIEWS,
            top_k: DEFAULT_TOP_K,
            top_n: DEFAULT_TOP_ASPECTS,
            scope: Scope::Review,
            smoothing: false,
            directions: true,
            global_aspects: false,
            method: Method::Pearson,
            disciplines: Vec::new(),
            seed: h.seed,
            epochs: h.epochs,
            learning_rate: h.learning_rate,
            regularization: h.regularization,
            holdout_fraction: 0.2,
            synth: SynthSpec::default(),
            out_dir: PathBuf::from("out"),
        }
    }
}

mod display_from_str {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            serde_json::from_str(&text).with_context(|| format!("invalid JSON config {}", path.display()))
        } else {
            toml::from_str(&text).with_context(|| format!("invalid TOML config {}", path.display()))
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn hyperparams(&self) -> Hyperparams {
        Hyperparams {
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            regularization: self.regularization,
            seed: self.seed,
        }
    }

    pub fn pipeline_options(&self) -> PipelineOptions {
        PipelineOptions {
            min_reviews: self.min_reviews,
            top_aspects: self.top_n,
            per_discipline_aspects: !self.global_aspects,
            factors: FactorOptions { scope: self.scope, smoothing: self.smoothing, directions: self.directions },
            method: self.method,
            disciplines: self.disciplines.clone(),
        }
    }

    pub fn tokenizer_config(&self) -> Result<TokenizerConfig> {
        Ok(match &self.dictionary {
            Some(path) => TokenizerConfig::dictionary(load_dictionary(path)?),
            None => TokenizerConfig::default(),
        })
    }
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    path.as_deref().with_context(|| format!("--{flag} is required"))
}

#[derive(Debug, Parser)]
#[command(name = "bookimpact", version, about = "Book impact scores from online reviews")]
pub struct Cli {
    /// Worker threads for parallel stages; outputs do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train the review polarity classifier and report holdout accuracy.
    Train(ConfigArgs),
    /// Compute impact scores for one factor combination.
    Score(ConfigArgs),
    /// Correlate scores, factors, aspects and aspect categories with citations.
    Correlate(ConfigArgs),
    /// Generate a synthetic corpus with its lexicon, aspects and training set.
    Synth(ConfigArgs),
    /// Render the JSON reports in the output directory as text tables.
    Report(ConfigArgs),
}

/// Flags mirroring [`RunConfig`]; each given flag overrides the file value.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// TOML or JSON file with RunConfig keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub reviews: Option<PathBuf>,
    #[arg(long)]
    pub books: Option<PathBuf>,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub aspects: Option<PathBuf>,
    #[arg(long)]
    pub training: Option<PathBuf>,
    #[arg(long)]
    pub category_map: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub dictionary: Option<PathBuf>,
    /// For example `holder_and_evaluator/macro_micro`.
    #[arg(long)]
    pub combination: Option<CombinationSpec>,
    #[arg(long)]
    pub min_reviews: Option<usize>,
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long)]
    pub top_n: Option<usize>,
    /// `review` or `sentence`.
    #[arg(long)]
    pub scope: Option<Scope>,
    /// Add-one smoothing of helpfulness ratios.
    #[arg(long)]
    pub smoothing: bool,
    /// Treat every factor as a benefit.
    #[arg(long)]
    pub no_direction: bool,
    /// One aspect set for all disciplines.
    #[arg(long)]
    pub global_aspects: bool,
    /// `pearson` or `spearman`.
    #[arg(long)]
    pub method: Option<Method>,
    /// Restrict to a discipline; repeatable.
    #[arg(long = "discipline")]
    pub disciplines: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub epochs: Option<u32>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub regularization: Option<f64>,
    #[arg(long)]
    pub holdout_fraction: Option<f64>,
    #[arg(long)]
    pub n_books: Option<usize>,
    #[arg(long)]
    pub min_reviews_per_book: Option<usize>,
    #[arg(long)]
    pub max_reviews_per_book: Option<usize>,
    #[arg(long)]
    pub quality_correlation: Option<f64>,
    #[arg(long)]
    pub lexicon_size: Option<usize>,
    #[arg(long)]
    pub aspect_count: Option<usize>,
    #[arg(long)]
    pub helpfulness_sparsity: Option<f64>,
    #[arg(long)]
    pub n_training_docs: Option<usize>,
    #[arg(long)]
    pub n_disciplines: Option<usize>,
    #[arg(long, short = 'o')]
    pub out_dir: Option<PathBuf>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    c.$field = v.clone().into();
                }
            )*};
        }
        set!(reviews, books, lexicon, aspects, training, category_map, model, dictionary);
        set!(combination, min_reviews, top_k, top_n, scope, method, seed, epochs, learning_rate, regularization);
        set!(holdout_fraction, out_dir);
        if self.smoothing {
            c.smoothing = true;
        }
        if self.no_direction {
            c.directions = false;
        }
        if self.global_aspects {
            c.global_aspects = true;
        }
        if !self.disciplines.is_empty() {
            c.disciplines = self.disciplines.clone();
        }
        let s = &mut c.synth;
        if let Some(v) = self.n_books {
            s.n_books = v;
        }
        if let Some(v) = self.min_reviews_per_book {
            s.reviews_per_book.0 = v;
        }
        if let Some(v) = self.max_reviews_per_book {
            s.reviews_per_book.1 = v;
        }
        if let Some(v) = self.quality_correlation {
            s.quality_correlation = v;
        }
        if let Some(v) = self.lexicon_size {
            s.lexicon_size = v;
        }
        if let Some(v) = self.aspect_count {
            s.aspect_count = v;
        }
        if let Some(v) = self.helpfulness_sparsity {
            s.helpfulness_sparsity = v;
        }
        if let Some(v) = self.n_training_docs {
            s.n_training_docs = v;
        }
        if let Some(v) = self.n_disciplines {
            s.n_disciplines = v;
        }
        Ok(c)
    }
}

/// Files produced by one command, written only once all are ready.
#[derive(Debug, Default)]
pub struct Outputs {
    files: BTreeMap<String, Vec<u8>>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.insert(name.into(), bytes);
    }

    pub fn add_json(&mut self, name: impl Into<String>, value: &impl Serialize) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.add(name, bytes);
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.get(name).map(Vec::as_slice)
    }

    pub fn write_all(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for (name, bytes) in &self.files {
            write_atomic(&dir.join(name), bytes)?;
        }
        Ok(())
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Report header shared by every JSON output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
}

impl Provenance {
    fn of(config: &RunConfig) -> Self {
        Self { tool: "bookimpact".into(), version: VERSION.into(), config_hash: config.hash() }
    }
}

/// Discipline names made safe for file names.
pub fn file_stem(discipline: &str) -> String {
    discipline.chars().map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

#[derive(Debug, Serialize)]
struct TrainReport<'a> {
    #[serde(flatten)]
    provenance: Provenance,
    config: &'a RunConfig,
    model_hash: String,
    n_features: usize,
    n_train: usize,
    n_holdout: usize,
    holdout_accuracy: Option<f64>,
}

pub fn cmd_train(config: &RunConfig) -> Result<Outputs> {
    let path = required(&config.training, "training")?;
    let rows = read_labeled(path)?;
    let tokenizer = Tokenizer::new(&config.tokenizer_config()?)?;
    let trained = train_model(&rows, &tokenizer, config.top_k, config.hyperparams(), config.holdout_fraction)?;
    let mut out = Outputs::default();
    out.add(MODEL_FILE, trained.model.to_json()?);
    out.add_json(
        TRAIN_REPORT_FILE,
        &TrainReport {
            provenance: Provenance::of(config),
            config,
            model_hash: trained.model.hash()?,
            n_features: trained.model.feature_space.len(),
            n_train: trained.n_train,
            n_holdout: trained.n_holdout,
            holdout_accuracy: trained.holdout_accuracy,
        },
    )?;
    Ok(out)
}

struct Inputs {
    corpus: crate::corpus::Corpus,
    model: PolarityModel,
    lexicon: SentimentLexicon,
    vocab: AspectVocabulary,
}

fn load_inputs(config: &RunConfig) -> Result<Inputs> {
    let tokenizer_config = config.tokenizer_config()?;
    let corpus = load_corpus(required(&config.reviews, "reviews")?, required(&config.books, "books")?, &tokenizer_config)?;
    let lexicon = SentimentLexicon::load(required(&config.lexicon, "lexicon")?, &tokenizer_config)?;
    let vocab = AspectVocabulary::load(required(&config.aspects, "aspects")?, &tokenizer_config)?;
    let model = match (&config.model, &config.training) {
        (Some(path), _) => PolarityModel::load(path)?,
        (None, Some(path)) => {
            let tokenizer = Tokenizer::new(&tokenizer_config)?;
            train_model(&read_labeled(path)?, &tokenizer, config.top_k, config.hyperparams(), 0.0)?.model
        }
        (None, None) => bail!("either --model or --training is required"),
    };
    Ok(Inputs { corpus, model, lexicon, vocab })
}

#[derive(Debug, Serialize)]
struct ScoreReport<'a> {
    #[serde(flatten)]
    provenance: Provenance,
    config: &'a RunConfig,
    combination: String,
    partitions: Vec<PartitionReport>,
}

#[derive(Debug, Serialize)]
struct PartitionReport {
    discipline: String,
    n_books: usize,
    n_reviews: usize,
    aspects: Vec<String>,
    factor_names: Vec<String>,
    entropy: Vec<f64>,
    weights: Vec<f64>,
    degenerate: Vec<bool>,
    uniform_fallback: bool,
    scores: Vec<BookScore>,
}

#[derive(Debug, Serialize)]
struct BookScore {
    book_id: String,
    score: f64,
    rank: usize,
}

pub fn cmd_score(config: &RunConfig) -> Result<Outputs> {
    let inputs = load_inputs(config)?;
    let partitions = prepare(&inputs.corpus, &inputs.model, &inputs.lexicon, &inputs.vocab, &config.pipeline_options())?;
    let mut out = Outputs::default();
    let mut reports = Vec::new();
    for partition in &partitions {
        let scored = partition.score(config.combination)?;
        let stem = file_stem(&partition.discipline);
        let scores = &scored.report.scores;

        let mut csv = csv::Writer::from_writer(Vec::new());
        csv.write_record(["book_id", "score", "rank"])?;
        for ((id, score), rank) in scores.book_ids.iter().zip(&scores.scores).zip(&scores.ranks) {
            csv.write_record([id.clone(), score.to_string(), rank.to_string()])?;
        }
        out.add(format!("scores_{stem}.csv"), csv.into_inner()?);
        let mut factors = Vec::new();
        scored.matrix.write_csv(&mut factors)?;
        out.add(format!("factors_{stem}.csv"), factors);

        reports.push(PartitionReport {
            discipline: partition.discipline.clone(),
            n_books: partition.corpus.len(),
            n_reviews: partition.corpus.review_count(),
            aspects: partition.table.aspects.words().map(String::from).collect(),
            factor_names: scored.matrix.factor_names.clone(),
            entropy: scored.report.weights.entropy.clone(),
            weights: scored.report.weights.weight.clone(),
            degenerate: scored.report.normalized.degenerate.clone(),
            uniform_fallback: scored.report.weights.uniform_fallback,
            scores: scores
                .book_ids
                .iter()
                .zip(&scores.scores)
                .zip(&scores.ranks)
                .map(|((id, &score), &rank)| BookScore { book_id: id.clone(), score, rank })
                .collect(),
        });
    }
    out.add_json(
        SCORE_REPORT_FILE,
        &ScoreReport {
            provenance: Provenance::of(config),
            config,
            combination: config.combination.to_string(),
            partitions: reports,
        },
    )?;
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CorrelationOutput {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub method: Method,
    pub n_books: BTreeMap<String, usize>,
    #[serde(flatten)]
    pub tables: CorrelationReport,
}

pub fn cmd_correlate(config: &RunConfig) -> Result<Outputs> {
    let inputs = load_inputs(config)?;
    let category_map = match &config.category_map {
        Some(path) => AspectCategoryMap::load(path)?,
        None => AspectCategoryMap::default(),
    };
    let partitions = prepare(&inputs.corpus, &inputs.model, &inputs.lexicon, &inputs.vocab, &config.pipeline_options())?;
    let tables = correlation_report(&partitions, &category_map, config.method)?;
    let mut out = Outputs::default();
    for (name, table) in [
        ("corr_scores.csv", &tables.scores),
        ("corr_factors.csv", &tables.factors),
        ("corr_aspects.csv", &tables.aspects),
        ("corr_categories.csv", &tables.categories),
    ] {
        let mut bytes = Vec::new();
        table.write_csv(&mut bytes)?;
        out.add(name, bytes);
    }
    let n_books = partitions.iter().map(|p| (p.discipline.clone(), p.corpus.len())).collect();
    out.add_json(
        CORRELATION_REPORT_FILE,
        &CorrelationOutput { provenance: Provenance::of(config), method: config.method, n_books, tables },
    )?;
    Ok(out)
}

pub fn cmd_synth(config: &RunConfig) -> Result<()> {
    let spec = SynthSpec { seed: config.seed, ..config.synth.clone() };
    let synth = generate(&spec)?;
    // Generated into a scratch directory first so a failure leaves no
    // partial corpus behind.
    std::fs::create_dir_all(&config.out_dir).with_context(|| format!("cannot create {}", config.out_dir.display()))?;
    let scratch = tempfile::tempdir_in(&config.out_dir)?;
    synth.write_to(scratch.path())?;
    let mut out = Outputs::default();
    for entry in std::fs::read_dir(scratch.path())? {
        let entry = entry?;
        out.add(entry.file_name().to_string_lossy().into_owned(), std::fs::read(entry.path())?);
    }
    out.add_json("synth_spec.json", &spec)?;
    out.write_all(&config.out_dir)
}

pub fn cmd_report(config: &RunConfig) -> Result<String> {
    let path = config.out_dir.join(CORRELATION_REPORT_FILE);
    let text = std::fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
    let report: CorrelationOutput = serde_json::from_str(&text).with_context(|| format!("invalid {}", path.display()))?;
    let mut rendered = String::new();
    let _ = writeln!(
        rendered,
        "{} {} (config {})\nmethod: {}",
        report.provenance.tool,
        report.provenance.version,
        report.provenance.config_hash,
        format!("{:?}", report.method).to_lowercase()
    );
    for (discipline, n) in &report.n_books {
        let _ = writeln!(rendered, "{discipline}: {n} books");
    }
    for table in [&report.tables.scores, &report.tables.factors, &report.tables.aspects, &report.tables.categories] {
        rendered.push('\n');
        rendered.push_str(&table.render());
    }
    write_atomic(&config.out_dir.join(RENDERED_REPORT_FILE), rendered.as_bytes())?;
    Ok(rendered)
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let body = || -> Result<()> {
        match &cli.command {
            Command::Train(args) => {
                let config = args.resolve()?;
                let out = cmd_train(&config)?;
                out.write_all(&config.out_dir)?;
                let report: serde_json::Value = serde_json::from_slice(out.get(TRAIN_REPORT_FILE).unwrap_or(b"{}"))?;
                match report["holdout_accuracy"].as_f64() {
                    Some(acc) => println!("holdout accuracy: {acc:.4}"),
                    None => println!("holdout accuracy: n/a (no holdout)"),
                }
            }
            Command::Score(args) => {
                let config = args.resolve()?;
                cmd_score(&config)?.write_all(&config.out_dir)?;
            }
            Command::Correlate(args) => {
                let config = args.resolve()?;
                cmd_correlate(&config)?.write_all(&config.out_dir)?;
            }
            Command::Synth(args) => cmd_synth(&args.resolve()?)?,
            Command::Report(args) => print!("{}", cmd_report(&args.resolve()?)?),
        }
        Ok(())
    };
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(body),
        None => body(),
    }
}

/// Entry point used by the binary.
pub fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
