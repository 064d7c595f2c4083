//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use wordle_difficulty_core::pipeline::{
    self, ClusterConfig, ClusterMethod, DEFAULT_ALPHA, DEFAULT_FACTORS, DEFAULT_LEVELS,
};
use wordle_difficulty_core::{
    associativity, build_markov, FrequencyTable, Lexicon, ObservedRecord, SimulationReport, Simulator,
    WindowAggregate, Word, BINS,
};

use crate::bundle::{self, ModelBundle};
use crate::error::{Failure, Result};
use crate::formats::{self, BUILTIN};
use crate::parallel;

pub const DEFAULT_REPS: u64 = 10_000;

#[derive(Parser, Debug)]
#[command(name = "wordle-difficulty", version, about = "Simulate, correct and classify Wordle solution words")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Aggregate {
    Sum,
    Mean,
    Max,
}

impl From<Aggregate> for WindowAggregate {
    fn from(a: Aggregate) -> Self {
        match a {
            Aggregate::Sum => WindowAggregate::Sum,
            Aggregate::Mean => WindowAggregate::Mean,
            Aggregate::Max => WindowAggregate::Max,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Ward,
    Average,
    Kmeans,
}

impl From<Method> for ClusterMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Ward => ClusterMethod::Ward,
            Method::Average => ClusterMethod::Average,
            Method::Kmeans => ClusterMethod::Kmeans,
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Selection {
    /// Every dictionary word
    #[arg(long)]
    all: bool,
    /// Comma-separated words
    #[arg(long, value_delimiter = ',')]
    words: Vec<String>,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Run {
    /// Games per word
    #[arg(long, default_value_t = DEFAULT_REPS, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Admit words missing from the dictionary
    #[arg(long)]
    allow_oov: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulated guess distributions of a random-guessing player
    Simulate {
        /// Dictionary file, one word per line (`builtin` for the shipped list)
        #[arg(long)]
        dict: String,
        #[command(flatten)]
        selection: Selection,
        #[command(flatten)]
        run: Run,
        #[command(flatten)]
        output: Output,
    },
    /// Letter-chain model of the dictionary, or associativity of given words
    Markov {
        #[arg(long)]
        dict: String,
        #[arg(long, default_value_t = 0.0)]
        smoothing: f64,
        #[arg(long, value_delimiter = ',')]
        words: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Lexical feature table
    Features {
        #[arg(long)]
        dict: String,
        /// Frequency file with header `word,freq_per_million`
        #[arg(long, default_value = BUILTIN)]
        freq: String,
        #[command(flatten)]
        selection: Selection,
        #[arg(long, default_value_t = 0.0)]
        smoothing: f64,
        #[arg(long, value_enum, default_value = "sum")]
        aggregate: Aggregate,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        threads: Option<u32>,
        #[arg(long)]
        allow_oov: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Fit the expectation-deviation regression and write a bundle
    FitDeviation {
        #[arg(long)]
        dict: String,
        #[arg(long, default_value = BUILTIN)]
        freq: String,
        /// Observed results CSV
        #[arg(long)]
        results: PathBuf,
        #[command(flatten)]
        run: Run,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, conflicts_with = "base")]
        smoothing: Option<f64>,
        /// Bundle to take the other components (and letter chain) from
        #[arg(long)]
        base: Option<String>,
        /// Bundle to write
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Distribution for one word, corrected by a bundle's deviation model
    Predict {
        #[arg(long)]
        word: String,
        /// Bundle file, or `reference`
        #[arg(long)]
        bundle: String,
        #[arg(long, default_value = BUILTIN)]
        dict: String,
        #[arg(long, default_value = BUILTIN)]
        freq: String,
        #[command(flatten)]
        run: Run,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Cluster observed difficulty, extract factors, fit the ordered logit and write a bundle
    FitLevels {
        #[arg(long)]
        dict: String,
        #[arg(long, default_value = BUILTIN)]
        freq: String,
        #[arg(long)]
        results: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_FACTORS)]
        m: usize,
        #[arg(long, value_enum, default_value = "ward")]
        method: Method,
        #[arg(long, value_enum, default_value = "sum")]
        aggregate: Aggregate,
        #[arg(long, conflicts_with = "base")]
        smoothing: Option<f64>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        threads: Option<u32>,
        #[arg(long)]
        allow_oov: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Difficulty level of one word
    Classify {
        #[arg(long)]
        word: String,
        #[arg(long)]
        bundle: String,
        #[arg(long, default_value = BUILTIN)]
        dict: String,
        #[arg(long, default_value = BUILTIN)]
        freq: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Score a bundle against observed results
    Evaluate {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        dict: String,
        #[arg(long, default_value = BUILTIN)]
        freq: String,
        #[arg(long)]
        bundle: String,
        #[command(flatten)]
        run: Run,
        #[command(flatten)]
        output: Output,
    },
    /// Long-format CSV behind the distribution, deviation and level plots
    EmitPlotData {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        dict: String,
        #[arg(long, default_value = BUILTIN)]
        freq: String,
        #[arg(long)]
        bundle: String,
        #[command(flatten)]
        run: Run,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the shipped published-model bundle
    #[command(hide = true)]
    ReferenceBundle {
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `args` and runs the command. Returns the process exit status.
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
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn warn(msg: impl std::fmt::Display) {
    eprintln!("warning: {msg}");
}

fn sink(out: Option<&Path>, inputs: &[&str]) -> Result<Box<dyn Write>> {
    let Some(path) = out else {
        return Ok(Box::new(std::io::BufWriter::new(std::io::stdout().lock())));
    };
    guard_output(path, inputs)?;
    let file = std::fs::File::create(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    Ok(Box::new(std::io::BufWriter::new(file)))
}

fn write_rows<T: Serialize>(mut w: Box<dyn Write>, rows: &[T], format: Format) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            for r in rows {
                csv.serialize(r)?;
            }
            csv.flush()?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Metric {
    metric: String,
    value: String,
}

/// Flattens a JSON value into `metric,value` rows with dotted keys.
fn flatten(prefix: String, v: &Value, out: &mut Vec<Metric>) {
    let key = |k: &dyn std::fmt::Display| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(key(k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(key(&i), x, out)),
        Value::Null => out.push(Metric { metric: prefix, value: String::new() }),
        Value::String(s) => out.push(Metric { metric: prefix, value: s.clone() }),
        other => out.push(Metric { metric: prefix, value: other.to_string() }),
    }
}

/// One JSON object, or its flattened `metric,value` table.
fn write_object<T: Serialize>(mut w: Box<dyn Write>, obj: &T, format: Format) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, obj)?;
            writeln!(w)?;
            w.flush()?;
            Ok(())
        }
        Format::Csv => {
            let mut rows = Vec::new();
            flatten(String::new(), &serde_json::to_value(obj)?, &mut rows);
            write_rows(w, &rows, Format::Csv)
        }
    }
}

fn select(sel: &Selection, lex: &Lexicon) -> Result<Vec<Word>> {
    if sel.all {
        Ok(lex.words().to_vec())
    } else {
        formats::parse_words(&sel.words)
    }
}

fn one_word(token: &str) -> Result<Word> {
    token.trim().parse().map_err(|e| Failure::Data(format!("{e}")))
}

fn frequencies(spec: &str, lex: &Lexicon) -> Result<FrequencyTable> {
    let (table, missing) = formats::load_frequencies(spec, lex)?;
    if !missing.is_empty() {
        let shown: Vec<String> = missing.iter().take(5).map(Word::to_string).collect();
        warn(format!(
            "{} dictionary words have no frequency row and count as 0 (e.g. {})",
            missing.len(),
            shown.join(", ")
        ));
    }
    Ok(table)
}

fn threads(t: Option<u32>) -> Option<usize> {
    t.map(|t| t as usize)
}

#[derive(Serialize)]
struct SimRow {
    word: String,
    p1: f64,
    p2: f64,
    p3: f64,
    p4: f64,
    p5: f64,
    p6: f64,
    px: f64,
    expectation: f64,
    reps: u64,
    seed: u64,
}

impl SimRow {
    fn new(r: &SimulationReport, seed: u64) -> Self {
        let [p1, p2, p3, p4, p5, p6, px] = *r.raw.bins();
        SimRow {
            word: r.word.to_string(),
            p1,
            p2,
            p3,
            p4,
            p5,
            p6,
            px,
            expectation: r.expectation,
            reps: r.reps,
            seed,
        }
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct FeatureRow {
    word: String,
    FREQ: f64,
    Orth: u32,
    N1_C: f64,
    N2_C: f64,
    N3_C: f64,
    UN1_C: f64,
    UN2_C: f64,
    UN3_C: f64,
    MARKOV: f64,
    DISTANCE: f64,
}

fn report_failures<T>(words: &[Word], results: &[wordle_difficulty_core::Result<T>]) -> Result<()> {
    let failed: Vec<String> = words
        .iter()
        .zip(results)
        .filter_map(|(w, r)| r.as_ref().err().map(|e| format!("{w}: {e}")))
        .collect();
    if failed.is_empty() {
        return Ok(());
    }
    for f in &failed {
        eprintln!("error: {f}");
    }
    Err(Failure::Data(format!("{} of {} words failed", failed.len(), words.len())))
}

struct Observed {
    lex: Lexicon,
    freq: FrequencyTable,
    records: Vec<ObservedRecord>,
    words: Vec<Word>,
}

fn observed(dict: &str, freq: &str, results: &Path, allow_oov: bool) -> Result<Observed> {
    let lex = formats::load_dictionary(dict)?;
    let freq = frequencies(freq, &lex)?;
    let records = formats::load_observed_results(results, &lex, allow_oov)?;
    if records.is_empty() {
        return Err(Failure::Data(format!("{}: no result rows", results.display())));
    }
    let words = records.iter().map(|r| r.word).collect();
    Ok(Observed { lex, freq, records, words })
}

fn load_bundle(spec: &str, lex: &Lexicon) -> Result<ModelBundle> {
    let b = ModelBundle::resolve(spec)?;
    if let Some(w) = b.digest_warning(lex) {
        warn(w);
    }
    Ok(b)
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Simulate { dict, selection, run, output } => {
            let lex = formats::load_dictionary(&dict)?;
            let words = select(&selection, &lex)?;
            let pool = parallel::pool(threads(run.threads))?;
            let sim = Simulator::new(&lex);
            let results = parallel::simulate_corpus(&pool, &sim, &words, run.reps, run.seed, run.allow_oov);
            let rows: Vec<SimRow> = results.iter().flatten().map(|r| SimRow::new(r, run.seed)).collect();
            write_rows(
                sink(output.out.as_deref(), &[&dict])?,
                &rows,
                output.format.unwrap_or(Format::Csv),
            )?;
            report_failures(&words, &results)
        }
        Command::Markov { dict, smoothing, words, output } => {
            let lex = formats::load_dictionary(&dict)?;
            let model = build_markov(&lex, smoothing)?;
            let w = sink(output.out.as_deref(), &[&dict])?;
            let format = output.format.unwrap_or(Format::Json);
            if !words.is_empty() {
                #[derive(Serialize)]
                struct Row {
                    word: String,
                    associativity: f64,
                    log_associativity: f64,
                }
                let rows: Vec<Row> = formats::parse_words(&words)?
                    .iter()
                    .map(|w| {
                        let a = associativity(&model, w);
                        Row {
                            word: w.to_string(),
                            associativity: a.raw,
                            log_associativity: a.log_raw,
                        }
                    })
                    .collect();
                return write_rows(w, &rows, format);
            }
            match format {
                Format::Json => write_object(w, &model, Format::Json),
                Format::Csv => {
                    // one row per conditioning letter, `^` for the word start
                    let mut csv = csv::Writer::from_writer(w);
                    let letters = (b'a'..=b'z').map(|c| (c as char).to_string());
                    csv.write_record(std::iter::once("from".to_owned()).chain(letters.clone()))?;
                    let starts = std::iter::once("^".to_owned()).chain(letters);
                    for (from, row) in starts.zip(std::iter::once(&model.first).chain(&model.trans)) {
                        csv.write_record(std::iter::once(from).chain(row.iter().map(f64::to_string)))?;
                    }
                    csv.flush()?;
                    Ok(())
                }
            }
        }
        Command::Features { dict, freq, selection, smoothing, aggregate, threads: t, allow_oov, output } => {
            let lex = formats::load_dictionary(&dict)?;
            let table = frequencies(&freq, &lex)?;
            let words = select(&selection, &lex)?;
            if !allow_oov {
                if let Some(w) = words.iter().find(|w| !lex.contains(w)) {
                    return Err(Failure::Data(format!("{w} is not in the dictionary (pass --allow-oov to admit it)")));
                }
            }
            let markov = build_markov(&lex, smoothing)?;
            let pool = parallel::pool(threads(t))?;
            let results = parallel::feature_table(&pool, &words, &lex, &table, &markov, aggregate.into());
            let rows: Vec<FeatureRow> = words
                .iter()
                .zip(&results)
                .filter_map(|(w, r)| r.as_ref().ok().map(|f| (w, f)))
                .map(|(w, f)| FeatureRow {
                    word: w.to_string(),
                    FREQ: f.FREQ,
                    Orth: f.Orth,
                    N1_C: f.N1_C,
                    N2_C: f.N2_C,
                    N3_C: f.N3_C,
                    UN1_C: f.UN1_C,
                    UN2_C: f.UN2_C,
                    UN3_C: f.UN3_C,
                    MARKOV: f.MARKOV,
                    DISTANCE: f.DISTANCE,
                })
                .collect();
            write_rows(
                sink(output.out.as_deref(), &[&dict, &freq])?,
                &rows,
                output.format.unwrap_or(Format::Csv),
            )?;
            report_failures(&words, &results)
        }
        Command::FitDeviation { dict, freq, results, run, alpha, smoothing, base, out, format } => {
            let obs = observed(&dict, &freq, &results, run.allow_oov)?;
            let base = base.map(|b| load_bundle(&b, &obs.lex)).transpose()?;
            let markov = match &base {
                Some(b) => b.markov.clone(),
                None => build_markov(&obs.lex, smoothing.unwrap_or(0.0))?,
            };
            let pool = parallel::pool(threads(run.threads))?;
            let sim = Simulator::new(&obs.lex);
            let reports = parallel::all_ok(
                &obs.words,
                parallel::simulate_corpus(&pool, &sim, &obs.words, run.reps, run.seed, run.allow_oov),
            )?;
            let deviation = pipeline::fit_deviation_model(&reports, &obs.records, &markov, &obs.freq, alpha)?;
            let level = match base {
                Some(b) => b.level,
                None => bundle::reference_levels(&pool, &obs.lex, &markov, &obs.freq)?,
            };
            #[derive(Serialize)]
            struct Summary<'a> {
                n_words: usize,
                alpha: f64,
                intercept: f64,
                coef_log_assoc: f64,
                coef_log_freq: f64,
                in_sample_mse: f64,
                pearson_log_assoc: Option<f64>,
                sign_convention: &'a str,
            }
            let summary = Summary {
                n_words: obs.words.len(),
                alpha,
                intercept: deviation.lasso.intercept,
                coef_log_assoc: deviation.lasso.coef[0],
                coef_log_freq: deviation.lasso.coef[1],
                in_sample_mse: deviation.in_sample_mse,
                pearson_log_assoc: deviation.pearson_log_assoc,
                sign_convention: pipeline::SIGN_CONVENTION,
            };
            let b = ModelBundle {
                schema_version: bundle::SCHEMA_VERSION,
                markov,
                deviation,
                level,
                metadata: bundle::Metadata {
                    dictionary_digest: bundle::dictionary_digest(&obs.lex),
                    seed: Some(run.seed),
                    reps: Some(run.reps),
                    created: bundle::now(),
                },
            };
            guard_output(&out, &[&dict, &freq, &results.to_string_lossy()])?;
            b.save(&out)?;
            write_object(sink(None, &[])?, &summary, format.unwrap_or(Format::Json))
        }
        Command::FitLevels {
            dict,
            freq,
            results,
            k,
            m,
            method,
            aggregate,
            smoothing,
            base,
            threads: t,
            allow_oov,
            out,
            format,
        } => {
            let obs = observed(&dict, &freq, &results, allow_oov)?;
            let base = base.map(|b| load_bundle(&b, &obs.lex)).transpose()?;
            let markov = match &base {
                Some(b) => b.markov.clone(),
                None => build_markov(&obs.lex, smoothing.unwrap_or(0.0))?,
            };
            let pool = parallel::pool(threads(t))?;
            let features = parallel::all_ok(
                &obs.words,
                parallel::feature_table(&pool, &obs.words, &obs.lex, &obs.freq, &markov, aggregate.into()),
            )?;
            let cluster = ClusterConfig { k, method: method.into() };
            let fit = pipeline::fit_level_model(&obs.records, &features, cluster, m, aggregate.into())?;
            if fit.log_likelihood > -1e-6 {
                warn("the factor scores separate the training levels perfectly; the ordered-logit weights are not identified");
            }
            #[derive(Serialize)]
            struct Summary<'a> {
                n_words: usize,
                k: usize,
                m: usize,
                method: ClusterMethod,
                accuracy: f64,
                macro_auc: f64,
                log_likelihood: f64,
                aic: f64,
                bic: f64,
                beta: &'a [f64],
                cutpoints: &'a [f64],
                eigenvalues: &'a [f64],
                silhouette_by_k: &'a [pipeline::SilhouetteEntry],
            }
            let summary = Summary {
                n_words: obs.words.len(),
                k,
                m,
                method: cluster.method,
                accuracy: fit.accuracy,
                macro_auc: fit.macro_auc,
                log_likelihood: fit.log_likelihood,
                aic: fit.aic,
                bic: fit.bic,
                beta: &fit.model.ologit.beta,
                cutpoints: &fit.model.ologit.cutpoints,
                eigenvalues: &fit.model.factors.eigenvalues,
                silhouette_by_k: &fit.silhouette_by_k,
            };
            let (deviation, seed, reps) = match &base {
                Some(b) => (b.deviation.clone(), b.metadata.seed, b.metadata.reps),
                None => (bundle::zero_deviation(&obs.lex, &markov, &obs.freq)?, None, None),
            };
            let b = ModelBundle {
                schema_version: bundle::SCHEMA_VERSION,
                markov,
                deviation,
                level: fit.model.clone(),
                metadata: bundle::Metadata {
                    dictionary_digest: bundle::dictionary_digest(&obs.lex),
                    seed,
                    reps,
                    created: bundle::now(),
                },
            };
            guard_output(&out, &[&dict, &freq, &results.to_string_lossy()])?;
            b.save(&out)?;
            write_object(sink(None, &[])?, &summary, format.unwrap_or(Format::Json))
        }
        Command::Predict { word, bundle, dict, freq, run, format } => {
            let word = one_word(&word)?;
            let lex = formats::load_dictionary(&dict)?;
            let table = frequencies(&freq, &lex)?;
            let b = load_bundle(&bundle, &lex)?;
            let mut warnings = Vec::new();
            if b.digest_warning(&lex).is_some() {
                warnings.push("dictionary_mismatch".to_owned());
            }
            let sim = Simulator::new(&lex);
            let p = pipeline::predict_distribution(
                &word,
                &sim,
                &b.deviation,
                &b.markov,
                &table,
                run.reps,
                run.seed,
                run.allow_oov,
            )?;
            if p.clamped {
                warn("target expectation was outside the reachable range; correction clamped");
                warnings.push("qp_clamped".to_owned());
            }
            if p.out_of_vocabulary {
                warnings.push("out_of_vocabulary".to_owned());
            }
            let w = sink(None, &[])?;
            match format.unwrap_or(Format::Json) {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        word: String,
                        raw: [f64; BINS],
                        e_delta_pred: f64,
                        corrected: [f64; BINS],
                        warnings: Vec<String>,
                    }
                    let out = Out {
                        word: word.to_string(),
                        raw: *p.raw.bins(),
                        e_delta_pred: p.e_delta_pred,
                        corrected: *p.corrected.bins(),
                        warnings,
                    };
                    write_object(w, &out, Format::Json)
                }
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        word: String,
                        series: &'a str,
                        p1: f64,
                        p2: f64,
                        p3: f64,
                        p4: f64,
                        p5: f64,
                        p6: f64,
                        px: f64,
                        e_delta_pred: f64,
                        warnings: String,
                    }
                    let row = |series, d: &[f64; BINS]| Row {
                        word: word.to_string(),
                        series,
                        p1: d[0],
                        p2: d[1],
                        p3: d[2],
                        p4: d[3],
                        p5: d[4],
                        p6: d[5],
                        px: d[6],
                        e_delta_pred: p.e_delta_pred,
                        warnings: warnings.join(";"),
                    };
                    write_rows(w, &[row("raw", p.raw.bins()), row("corrected", p.corrected.bins())], Format::Csv)
                }
            }
        }
        Command::Classify { word, bundle, dict, freq, format } => {
            let word = one_word(&word)?;
            let lex = formats::load_dictionary(&dict)?;
            let table = frequencies(&freq, &lex)?;
            let b = load_bundle(&bundle, &lex)?;
            if !lex.contains(&word) {
                warn(format!("{word} is not in the dictionary; features are taken relative to it"));
            }
            let c = b.level.classify_word(&word, &lex, &table, &b.markov)?;
            let w = sink(None, &[])?;
            match format.unwrap_or(Format::Json) {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        word: String,
                        scores: &'a [f64],
                        y: f64,
                        level: usize,
                    }
                    let out = Out {
                        word: word.to_string(),
                        scores: &c.scores,
                        y: c.y,
                        level: c.level,
                    };
                    write_object(w, &out, Format::Json)
                }
                Format::Csv => {
                    let mut csv = csv::Writer::from_writer(w);
                    let factors = (1..=c.scores.len()).map(|i| format!("F{i}"));
                    csv.write_record(std::iter::once("word".to_owned()).chain(factors).chain(["y".into(), "level".into()]))?;
                    csv.write_record(
                        std::iter::once(word.to_string())
                            .chain(c.scores.iter().map(f64::to_string))
                            .chain([c.y.to_string(), c.level.to_string()]),
                    )?;
                    csv.flush()?;
                    Ok(())
                }
            }
        }
        Command::Evaluate { results, dict, freq, bundle, run, output } => {
            let ev = evaluation(&results, &dict, &freq, &bundle, &run)?;
            let w = sink(output.out.as_deref(), &[&dict, &freq, &results.to_string_lossy(), &bundle])?;
            write_object(w, &ev.report, output.format.unwrap_or(Format::Json))
        }
        Command::EmitPlotData { results, dict, freq, bundle, run, out } => {
            let ev = evaluation(&results, &dict, &freq, &bundle, &run)?;
            let rows = plot_rows(&ev.words);
            let w = sink(out.as_deref(), &[&dict, &freq, &results.to_string_lossy(), &bundle])?;
            write_rows(w, &rows, Format::Csv)
        }
        Command::ReferenceBundle { out } => {
            let pool = parallel::pool(None)?;
            bundle::build_reference_bundle(&pool)?.save(&out)
        }
    }
}

fn guard_output(out: &Path, inputs: &[&str]) -> Result<()> {
    let Ok(target) = out.canonicalize() else {
        return Ok(());
    };
    for input in inputs.iter().filter(|i| **i != BUILTIN) {
        if Path::new(input).canonicalize().is_ok_and(|p| p == target) {
            return Err(Failure::Usage(format!("refusing to overwrite input file {input}")));
        }
    }
    Ok(())
}

fn evaluation(results: &Path, dict: &str, freq: &str, bundle: &str, run: &Run) -> Result<pipeline::Evaluation> {
    let obs = observed(dict, freq, results, run.allow_oov)?;
    let b = load_bundle(bundle, &obs.lex)?;
    let pool = parallel::pool(threads(run.threads))?;
    let sim = Simulator::new(&obs.lex);
    let reports = parallel::all_ok(
        &obs.words,
        parallel::simulate_corpus(&pool, &sim, &obs.words, run.reps, run.seed, run.allow_oov),
    )?;
    let features = parallel::all_ok(
        &obs.words,
        parallel::feature_table(&pool, &obs.words, &obs.lex, &obs.freq, &b.markov, b.level.aggregate),
    )?;
    let ev = pipeline::evaluate(&obs.records, &reports, &features, &b.markov, &obs.freq, &b.deviation, &b.level)?;
    if ev.report.clamped_predictions > 0 {
        warn(format!("{} predicted corrections were clamped", ev.report.clamped_predictions));
    }
    Ok(ev)
}

#[derive(Debug, Serialize)]
pub struct PlotRow {
    pub figure: u8,
    pub word: String,
    pub series: &'static str,
    pub x: f64,
    pub y: f64,
}

/// Figure 1: per-word bars (actual, simulated, predicted and oracle
/// corrections) with x the try count, 7 for a failure. Figure 2: deviation
/// against log-associativity. Figure 3: observed expectation against cluster
/// label.
pub fn plot_rows(words: &[pipeline::WordEvaluation]) -> Vec<PlotRow> {
    let mut rows = Vec::new();
    for w in words {
        let series = [
            ("actual", &w.actual),
            ("simulated", &w.raw),
            ("predicted", &w.pred_corrected),
            ("oracle", &w.oracle_corrected),
        ];
        for (name, d) in series {
            for (i, y) in d.bins().iter().enumerate() {
                rows.push(PlotRow {
                    figure: 1,
                    word: w.word.to_string(),
                    series: name,
                    x: (i + 1) as f64,
                    y: *y,
                });
            }
        }
    }
    for w in words {
        for (series, y) in [("deviation", w.e_delta), ("predicted_deviation", w.e_delta_pred)] {
            rows.push(PlotRow {
                figure: 2,
                word: w.word.to_string(),
                series,
                x: w.log_assoc,
                y,
            });
        }
    }
    for w in words {
        rows.push(PlotRow {
            figure: 3,
            word: w.word.to_string(),
            series: "level",
            x: w.label as f64,
            y: w.e_actual,
        });
    }
    rows
}
