//! End-to-end procedures: predicting a corrected guess distribution from a
//! simulated one, and assigning difficulty levels from lexical attributes.
//!
//! Deviations are signed as `E(actual) - E(simulated)`, so a positive value
//! means players need more tries than the random-consistent simulation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::associativity::{associativity, MarkovModel};
use crate::distribution::{GuessDistribution, BINS};
use crate::error::{Error, Result};
use crate::features::{feature_vector, standardize, FeatureVector, Standardization, WindowAggregate, FEATURE_COUNT};
use crate::lexicon::{FrequencyTable, Lexicon, ObservedRecord, Word};
use crate::numerics::cluster::{hcluster, kmeans, silhouette, Linkage};
use crate::numerics::factor::{factor_fit, FactorModel};
use crate::numerics::lasso::{lasso_fit, LassoModel};
use crate::numerics::metrics::{accuracy, average_distribution_mse, macro_auc, mean_squared_error, pearson};
use crate::numerics::ologit::{information_criteria, ologit_fit, OrdLogitModel};
use crate::numerics::qp::{qp_correct, QpSolution};
use crate::simulator::{SimulationReport, Simulator};

pub const DEFAULT_ALPHA: f64 = 0.01;
pub const DEFAULT_LEVELS: usize = 4;
pub const DEFAULT_FACTORS: usize = 4;
/// Cluster counts scanned for the silhouette table.
pub const SILHOUETTE_KS: core::ops::RangeInclusive<usize> = 2..=8;
pub const KMEANS_RESTARTS: usize = 50;
pub const KMEANS_SEED: u64 = 0x5EED;
/// Largest tolerated departure from a valid distribution after adding a QP
/// correction, before rescaling.
pub const DRIFT_TOLERANCE: f64 = 1e-9;

pub const SIGN_CONVENTION: &str = "e_delta = E(actual) - E(simulated)";

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeviationObservation {
    pub word: Word,
    pub e_raw: f64,
    pub e_actual: f64,
    pub e_delta: f64,
}

impl DeviationObservation {
    pub fn new(word: Word, e_raw: f64, e_actual: f64) -> Self {
        DeviationObservation {
            word,
            e_raw,
            e_actual,
            e_delta: e_actual - e_raw,
        }
    }
}

/// Pairs each observed record with the report for the same word, in observed
/// order. The two word sets must agree.
pub fn pair_by_word<'a>(
    reports: &'a [SimulationReport],
    observed: &'a [ObservedRecord],
) -> Result<Vec<(&'a SimulationReport, &'a ObservedRecord)>> {
    let by_word: BTreeMap<Word, &SimulationReport> = reports.iter().map(|r| (r.word, r)).collect();
    let rep_words: BTreeSet<Word> = by_word.keys().copied().collect();
    let obs_words: BTreeSet<Word> = observed.iter().map(|o| o.word).collect();
    if rep_words != obs_words {
        return Err(Error::WordSetMismatch {
            only_in_reports: rep_words.difference(&obs_words).map(|w| w.to_string()).collect(),
            only_in_observed: obs_words.difference(&rep_words).map(|w| w.to_string()).collect(),
        });
    }
    Ok(observed.iter().map(|o| (by_word[&o.word], o)).collect())
}

pub fn deviation_observations(
    reports: &[SimulationReport],
    observed: &[ObservedRecord],
) -> Result<Vec<DeviationObservation>> {
    Ok(pair_by_word(reports, observed)?
        .into_iter()
        .map(|(r, o)| DeviationObservation::new(o.word, r.raw.expectation(), o.dist.expectation()))
        .collect())
}

/// The two regressors, before scaling: natural-log associativity and
/// `ln(1 + frequency)`.
pub fn deviation_inputs(w: &Word, markov: &MarkovModel, freq: &FrequencyTable) -> [f64; 2] {
    [associativity(markov, w).log_raw, libm::log1p(freq.get(w))]
}

/// Lasso regression of the expectation deviation on z-scored
/// (log-associativity, log frequency).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeviationModel {
    pub lasso: LassoModel,
    pub feature_mean: [f64; 2],
    pub feature_sd: [f64; 2],
    pub in_sample_mse: f64,
    /// Correlation between log-associativity and the deviation on the
    /// training words; absent when either series is constant.
    pub pearson_log_assoc: Option<f64>,
}

impl DeviationModel {
    /// A model that predicts no deviation, with the given feature scaling.
    pub fn zero(feature_mean: [f64; 2], feature_sd: [f64; 2]) -> Self {
        DeviationModel {
            lasso: LassoModel {
                intercept: 0.0,
                coef: vec![0.0, 0.0],
                alpha: DEFAULT_ALPHA,
            },
            feature_mean,
            feature_sd,
            in_sample_mse: 0.0,
            pearson_log_assoc: None,
        }
    }

    pub fn scale(&self, inputs: &[f64; 2]) -> [f64; 2] {
        core::array::from_fn(|j| (inputs[j] - self.feature_mean[j]) / self.feature_sd[j])
    }

    pub fn predict_inputs(&self, inputs: &[f64; 2]) -> f64 {
        self.lasso.predict(&self.scale(inputs))
    }

    pub fn predict(&self, w: &Word, markov: &MarkovModel, freq: &FrequencyTable) -> f64 {
        self.predict_inputs(&deviation_inputs(w, markov, freq))
    }

    pub fn validate(&self) -> Result<()> {
        self.lasso.validate()?;
        if self.lasso.coef.len() != 2 {
            return Err(Error::Invariant("deviation model needs exactly two coefficients".into()));
        }
        if self.feature_sd.iter().any(|s| !(*s > 0.0) || !s.is_finite())
            || self.feature_mean.iter().any(|m| !m.is_finite())
        {
            return Err(Error::Invariant("deviation scaling needs finite means and positive sds".into()));
        }
        Ok(())
    }
}

/// Population mean and sample sd of each column.
fn column_scaling(rows: &[[f64; 2]], names: [&'static str; 2]) -> Result<([f64; 2], [f64; 2])> {
    let n = rows.len() as f64;
    let mut mean = [0.0; 2];
    let mut sd = [0.0; 2];
    for j in 0..2 {
        mean[j] = rows.iter().map(|r| r[j]).sum::<f64>() / n;
        let ss: f64 = rows.iter().map(|r| (r[j] - mean[j]) * (r[j] - mean[j])).sum();
        sd[j] = libm::sqrt(ss / (n - 1.0));
        if !(sd[j] > 1e-12 * mean[j].abs().max(1.0)) {
            return Err(Error::ZeroVariance { column: names[j] });
        }
    }
    Ok((mean, sd))
}

/// Fits the deviation regression on explicit `(inputs, e_delta)` pairs.
pub fn fit_deviation_inputs(inputs: &[[f64; 2]], e_delta: &[f64], alpha: f64) -> Result<DeviationModel> {
    if inputs.len() != e_delta.len() {
        return Err(Error::LengthMismatch {
            left: inputs.len(),
            right: e_delta.len(),
        });
    }
    if inputs.len() < 2 {
        return Err(Error::InvalidArgument("deviation model needs at least 2 words".into()));
    }
    let (feature_mean, feature_sd) = column_scaling(inputs, ["MARKOV", "FREQ"])?;
    let mut model = DeviationModel::zero(feature_mean, feature_sd);
    let z: Vec<[f64; 2]> = inputs.iter().map(|r| model.scale(r)).collect();
    model.lasso = lasso_fit(&z, e_delta, alpha)?;
    let fitted: Vec<f64> = z.iter().map(|r| model.lasso.predict(r)).collect();
    model.in_sample_mse = mean_squared_error(&fitted, e_delta)?;
    let log_assoc: Vec<f64> = inputs.iter().map(|r| r[0]).collect();
    model.pearson_log_assoc = pearson(&log_assoc, e_delta).ok();
    Ok(model)
}

pub fn fit_deviation_model(
    reports: &[SimulationReport],
    observed: &[ObservedRecord],
    markov: &MarkovModel,
    freq: &FrequencyTable,
    alpha: f64,
) -> Result<DeviationModel> {
    let obs = deviation_observations(reports, observed)?;
    let inputs: Vec<[f64; 2]> = obs.iter().map(|o| deviation_inputs(&o.word, markov, freq)).collect();
    let e_delta: Vec<f64> = obs.iter().map(|o| o.e_delta).collect();
    fit_deviation_inputs(&inputs, &e_delta, alpha)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Correction {
    pub corrected: GuessDistribution,
    pub qp: QpSolution,
}

/// Shifts `raw` so its expectation moves by `e_delta` tries, using the
/// weighted least-squares correction.
pub fn correct_distribution(raw: &GuessDistribution, e_delta: f64) -> Result<Correction> {
    let qp = qp_correct(raw, 100.0 * e_delta);
    let mut bins: [f64; BINS] = core::array::from_fn(|i| raw.bins()[i] + qp.delta[i]);
    let mut drift = 0.0f64;
    for b in bins.iter_mut() {
        if *b < 0.0 {
            drift = drift.max(-*b);
            *b = 0.0;
        }
    }
    let sum: f64 = bins.iter().sum();
    drift = drift.max((sum - 100.0).abs());
    if !(drift <= DRIFT_TOLERANCE) {
        return Err(Error::RenormalizationDrift { drift });
    }
    let bins = bins.map(|b| b * 100.0 / sum);
    Ok(Correction {
        corrected: GuessDistribution::new(bins)?,
        qp,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Prediction {
    pub word: Word,
    pub raw: GuessDistribution,
    pub e_delta_pred: f64,
    pub corrected: GuessDistribution,
    pub clamped: bool,
    pub out_of_vocabulary: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn predict_distribution(
    w: &Word,
    sim: &Simulator,
    dev: &DeviationModel,
    markov: &MarkovModel,
    freq: &FrequencyTable,
    reps: u64,
    seed: u64,
    allow_oov: bool,
) -> Result<Prediction> {
    let report = sim.simulate_word(w, reps, seed, allow_oov)?;
    let e_delta_pred = dev.predict(w, markov, freq);
    let c = correct_distribution(&report.raw, e_delta_pred)?;
    Ok(Prediction {
        word: *w,
        raw: report.raw,
        e_delta_pred,
        corrected: c.corrected,
        clamped: c.qp.clamped,
        out_of_vocabulary: report.out_of_vocabulary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ClusterMethod {
    #[default]
    Ward,
    Average,
    Kmeans,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterConfig {
    pub k: usize,
    pub method: ClusterMethod,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            k: DEFAULT_LEVELS,
            method: ClusterMethod::Ward,
        }
    }
}

/// Difficulty labels 1..=k for expected try counts; higher is harder.
pub fn cluster_levels(expectations: &[f64], k: usize, method: ClusterMethod) -> Result<Vec<usize>> {
    match method {
        ClusterMethod::Ward => hcluster(expectations, k, Linkage::Ward),
        ClusterMethod::Average => hcluster(expectations, k, Linkage::Average),
        ClusterMethod::Kmeans => kmeans(expectations, k, KMEANS_RESTARTS, KMEANS_SEED),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SilhouetteEntry {
    pub k: usize,
    pub score: f64,
}

/// Silhouette of the clustering at each `k` in 2..=8 that the sample size
/// allows.
pub fn silhouette_by_k(expectations: &[f64], method: ClusterMethod) -> Result<Vec<SilhouetteEntry>> {
    let mut out = Vec::new();
    for k in SILHOUETTE_KS.filter(|&k| k <= expectations.len()) {
        let labels = cluster_levels(expectations, k, method)?;
        if labels.iter().collect::<BTreeSet<_>>().len() < 2 {
            continue;
        }
        out.push(SilhouetteEntry {
            k,
            score: silhouette(expectations, &labels)?,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Provenance {
    Fitted,
    Reference,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LevelModel {
    pub standardization: Standardization,
    pub factors: FactorModel,
    pub ologit: OrdLogitModel,
    pub cluster: ClusterConfig,
    #[cfg_attr(feature = "serde", serde(default))]
    pub aggregate: WindowAggregate,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Classification {
    pub level: usize,
    pub y: f64,
    pub scores: Vec<f64>,
}

impl LevelModel {
    pub fn validate(&self) -> Result<()> {
        self.standardization.validate()?;
        self.factors.validate()?;
        self.ologit.validate()?;
        let bad = |m: &str| Err(Error::Invariant(alloc::format!("level model: {m}")));
        if self.factors.variables() != FEATURE_COUNT {
            return bad("factor model must cover all ten features");
        }
        if self.ologit.beta.len() != self.factors.m {
            return bad("one ordered-logit weight per factor");
        }
        if self.cluster.k != self.ologit.k {
            return bad("cluster count must equal the number of levels");
        }
        if self.provenance == Provenance::Reference && (self.factors.m != 4 || self.ologit.k != 4) {
            return bad("the published model has four factors and four levels");
        }
        Ok(())
    }

    pub fn scores(&self, fv: &FeatureVector) -> Vec<f64> {
        self.factors.scores(&self.standardization.apply(fv))
    }

    pub fn classify_features(&self, fv: &FeatureVector) -> Classification {
        let scores = self.scores(fv);
        let (level, y) = self.ologit.classify(&scores);
        Classification { level, y, scores }
    }

    pub fn classify_word(
        &self,
        w: &Word,
        lex: &Lexicon,
        freq: &FrequencyTable,
        markov: &MarkovModel,
    ) -> Result<Classification> {
        let fv = feature_vector(w, lex, freq, markov, self.aggregate)?;
        Ok(self.classify_features(&fv))
    }
}

/// Published factor-score coefficients, one row per feature (FREQ, Orth,
/// N1_C..N3_C, UN1_C..UN3_C, MARKOV, DISTANCE), one column per factor.
pub const REFERENCE_SCORE_COEF: [[f64; 4]; FEATURE_COUNT] = [
    [-0.003, -0.026, 0.035, 1.013],
    [0.196, 0.135, 0.062, 0.024],
    [0.078, 0.578, -0.062, -0.015],
    [0.15, 0.299, 0.25, -0.038],
    [0.215, 0.124, 0.145, -0.027],
    [-0.07, 0.426, 0.46, 0.038],
    [0.025, 0.144, 0.717, -0.018],
    [0.094, -0.137, 0.585, 0.107],
    [0.09, 0.357, 0.478, 0.019],
    [-0.073, -0.56, -0.146, -0.062],
];
pub const REFERENCE_BETA: [f64; 4] = [1.343, 0.823, 0.732, 0.687];
pub const REFERENCE_CUTPOINTS: [f64; 3] = [-2.20, -0.32, 2.00];

/// The published four-factor, four-level model. Its feature scaling was
/// never published, so the caller supplies one (typically fitted on the
/// dictionary).
pub fn reference_level_model(standardization: Standardization) -> Result<LevelModel> {
    let model = LevelModel {
        standardization,
        factors: FactorModel {
            loadings: Vec::new(),
            score_coef: REFERENCE_SCORE_COEF.iter().map(|r| r.to_vec()).collect(),
            m: 4,
            eigenvalues: Vec::new(),
        },
        ologit: OrdLogitModel::new(REFERENCE_BETA.to_vec(), REFERENCE_CUTPOINTS.to_vec())?,
        cluster: ClusterConfig::default(),
        aggregate: WindowAggregate::Sum,
        provenance: Provenance::Reference,
    };
    model.validate()?;
    Ok(model)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelFit {
    pub model: LevelModel,
    pub expectations: Vec<f64>,
    /// Cluster labels used as training targets.
    pub labels: Vec<usize>,
    pub predicted: Vec<usize>,
    pub y: Vec<f64>,
    pub accuracy: f64,
    pub macro_auc: f64,
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub silhouette_by_k: Vec<SilhouetteEntry>,
}

/// Clusters observed expectations into `cluster.k` levels, extracts `m`
/// factors from the standardized features and fits the ordered logit.
/// `features[i]` belongs to `observed[i]`.
pub fn fit_level_model(
    observed: &[ObservedRecord],
    features: &[FeatureVector],
    cluster: ClusterConfig,
    m: usize,
    aggregate: WindowAggregate,
) -> Result<LevelFit> {
    if observed.len() != features.len() {
        return Err(Error::LengthMismatch {
            left: observed.len(),
            right: features.len(),
        });
    }
    let expectations: Vec<f64> = observed.iter().map(|o| o.dist.expectation()).collect();
    let labels = cluster_levels(&expectations, cluster.k, cluster.method)?;
    let (z, standardization) = standardize(features)?;
    let factors = factor_fit(&z, m)?;
    let scores: Vec<Vec<f64>> = z.iter().map(|row| factors.scores(row)).collect();
    let fit = ologit_fit(&scores, &labels)?;
    let model = LevelModel {
        standardization,
        factors,
        ologit: fit.model,
        cluster,
        aggregate,
        provenance: Provenance::Fitted,
    };
    model.validate()?;
    let (predicted, y): (Vec<usize>, Vec<f64>) = scores.iter().map(|s| model.ologit.classify(s)).unzip();
    let probs: Vec<Vec<f64>> = scores.iter().map(|s| model.ologit.probabilities(s)).collect();
    Ok(LevelFit {
        accuracy: accuracy(&predicted, &labels)?,
        macro_auc: macro_auc(&probs, &labels)?,
        log_likelihood: fit.log_likelihood,
        aic: fit.aic,
        bic: fit.bic,
        silhouette_by_k: silhouette_by_k(&expectations, cluster.method)?,
        model,
        expectations,
        labels,
        predicted,
        y,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignedCorrelation {
    /// Deviation taken as `E(actual) - E(simulated)`.
    pub actual_minus_simulated: f64,
    /// Deviation taken as `E(simulated) - E(actual)`.
    pub simulated_minus_actual: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvaluationReport {
    pub n_words: usize,
    pub mse_raw: f64,
    pub mse_pred_corrected: f64,
    pub mse_oracle_corrected: f64,
    pub lasso_mse: f64,
    pub pearson_r_both_signs: Option<SignedCorrelation>,
    pub accuracy: f64,
    pub macro_auc: Option<f64>,
    pub aic: f64,
    pub bic: f64,
    pub silhouette_by_k: Vec<SilhouetteEntry>,
    pub clamped_predictions: usize,
    pub sign_convention: String,
}

/// Per-word values behind an evaluation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WordEvaluation {
    pub word: Word,
    pub actual: GuessDistribution,
    pub raw: GuessDistribution,
    pub pred_corrected: GuessDistribution,
    pub oracle_corrected: GuessDistribution,
    pub log_assoc: f64,
    pub e_actual: f64,
    pub e_delta: f64,
    pub e_delta_pred: f64,
    pub label: usize,
    pub predicted_level: usize,
    pub y: f64,
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub report: EvaluationReport,
    pub words: Vec<WordEvaluation>,
}

/// Scores a deviation model and a level model against observed results.
/// `features[i]` belongs to `observed[i]`; `reports` must cover the same words.
pub fn evaluate(
    observed: &[ObservedRecord],
    reports: &[SimulationReport],
    features: &[FeatureVector],
    markov: &MarkovModel,
    freq: &FrequencyTable,
    dev: &DeviationModel,
    level: &LevelModel,
) -> Result<Evaluation> {
    if observed.len() != features.len() {
        return Err(Error::LengthMismatch {
            left: observed.len(),
            right: features.len(),
        });
    }
    let pairs = pair_by_word(reports, observed)?;
    let expectations: Vec<f64> = observed.iter().map(|o| o.dist.expectation()).collect();
    let labels = cluster_levels(&expectations, level.cluster.k, level.cluster.method)?;

    let mut words = Vec::with_capacity(observed.len());
    let mut scores = Vec::with_capacity(observed.len());
    for (((report, obs), fv), &label) in pairs.iter().zip(features).zip(&labels) {
        let e_delta = obs.dist.expectation() - report.raw.expectation();
        let e_delta_pred = dev.predict(&obs.word, markov, freq);
        let pred = correct_distribution(&report.raw, e_delta_pred)?;
        let oracle = correct_distribution(&report.raw, e_delta)?;
        let class = level.classify_features(fv);
        words.push(WordEvaluation {
            word: obs.word,
            actual: obs.dist,
            raw: report.raw,
            pred_corrected: pred.corrected,
            oracle_corrected: oracle.corrected,
            log_assoc: associativity(markov, &obs.word).log_raw,
            e_actual: obs.dist.expectation(),
            e_delta,
            e_delta_pred,
            label,
            predicted_level: class.level,
            y: class.y,
            clamped: pred.qp.clamped,
        });
        scores.push(class.scores);
    }

    let col = |f: fn(&WordEvaluation) -> GuessDistribution| words.iter().map(f).collect::<Vec<_>>();
    let actual = col(|w| w.actual);
    let e_delta: Vec<f64> = words.iter().map(|w| w.e_delta).collect();
    let e_delta_pred: Vec<f64> = words.iter().map(|w| w.e_delta_pred).collect();
    let log_assoc: Vec<f64> = words.iter().map(|w| w.log_assoc).collect();
    let predicted: Vec<usize> = words.iter().map(|w| w.predicted_level).collect();
    let probs: Vec<Vec<f64>> = scores.iter().map(|s| level.ologit.probabilities(s)).collect();
    let ll = level.ologit.log_likelihood(&scores, &labels);
    let (aic, bic) = information_criteria(ll, level.ologit.parameter_count(), observed.len());

    let report = EvaluationReport {
        n_words: observed.len(),
        mse_raw: average_distribution_mse(&col(|w| w.raw), &actual)?,
        mse_pred_corrected: average_distribution_mse(&col(|w| w.pred_corrected), &actual)?,
        mse_oracle_corrected: average_distribution_mse(&col(|w| w.oracle_corrected), &actual)?,
        lasso_mse: mean_squared_error(&e_delta_pred, &e_delta)?,
        pearson_r_both_signs: pearson(&log_assoc, &e_delta).ok().map(|r| SignedCorrelation {
            actual_minus_simulated: r,
            simulated_minus_actual: -r,
        }),
        accuracy: accuracy(&predicted, &labels)?,
        macro_auc: macro_auc(&probs, &labels).ok(),
        aic,
        bic,
        silhouette_by_k: silhouette_by_k(&expectations, level.cluster.method)?,
        clamped_predictions: words.iter().filter(|w| w.clamped).count(),
        sign_convention: SIGN_CONVENTION.into(),
    };
    Ok(Evaluation { report, words })
}
