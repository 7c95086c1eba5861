//! Binary quality classifiers: balancing, splitting, four model families
//! built from scratch, evaluation, selection, and persistence.

pub mod cart;
mod eval;
mod logistic;
mod smote;
mod split;

pub use eval::{evaluate, metrics_from_confusion, model_select, roc_auc, Confusion, EvalReport};
pub use logistic::LogisticModel;
pub use smote::smote_oversample;
pub use split::stratified_split;

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::delta::{assemble_features, CommitMetricDelta};
use crate::{exec, seed, QualityAttribute};
use cart::{build_tree, positive_fraction, Criterion, Tree, TreeOptions};
use logistic::{fit_logistic, sigmoid, LogisticOptions};

/// Serialized model format version.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("training set is empty")]
    EmptyDataset,
    #[error("dataset contains a single class")]
    SingleClass,
    #[error("minority class needs at least 2 examples")]
    MinorityTooSmall,
    #[error("neighbor count k must be at least 1")]
    InvalidNeighborCount,
    #[error("train fraction must lie strictly between 0 and 1, got {0}")]
    BadTrainFraction(f64),
    #[error("class enhanced={enhanced} has only {count} example(s); need at least 2")]
    TinyClass { enhanced: bool, count: usize },
    #[error("examples have inconsistent feature dimensions")]
    RaggedFeatures,
    #[error("unknown hyperparameter {key:?} for family {family}")]
    UnknownHyperparameter { family: &'static str, key: String },
    #[error("invalid hyperparameter {key:?}: {reason}")]
    InvalidHyperparameter { key: String, reason: String },
    #[error("feature dimension mismatch: model expects {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("ROC-AUC needs both classes present")]
    SingleClassLabels,
    #[error("no candidate models to select from")]
    EmptyCandidates,
    #[error("no model loaded for quality attribute {0}")]
    MissingModel(QualityAttribute),
    #[error("unsupported model format version: expected {expected}, found {found}")]
    FormatVersion { expected: u32, found: u32 },
    #[error("model payload is corrupt: {0}")]
    Payload(#[from] serde_json::Error),
}

/// One training/evaluation example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub features: Vec<f64>,
    /// true = enhanced (the positive class).
    pub label: bool,
    /// Optional provenance.
    pub sha: Option<String>,
}

/// The four model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    DecisionTree,
    RandomForest,
    GradientBoosting,
    Logistic,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 4] = [
        ModelFamily::DecisionTree,
        ModelFamily::RandomForest,
        ModelFamily::GradientBoosting,
        ModelFamily::Logistic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::DecisionTree => "decision_tree",
            ModelFamily::RandomForest => "random_forest",
            ModelFamily::GradientBoosting => "gradient_boosting",
            ModelFamily::Logistic => "logistic",
        }
    }
}

impl std::fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Hyperparameters as a name → value map (integers are given as whole
/// floats; `max_depth = 0` means unlimited).
pub type Hyperparameters = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Fitted {
    Tree { tree: Tree },
    Forest { trees: Vec<Tree> },
    Boosting {
        init: f64,
        learning_rate: f64,
        trees: Vec<Tree>,
    },
    Logistic { model: LogisticModel },
}

/// A fitted binary classifier for one quality attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub family: ModelFamily,
    pub qa: QualityAttribute,
    pub hyperparameters: Hyperparameters,
    pub feature_dim: usize,
    /// Decision threshold on the enhanced-class probability.
    pub threshold: f64,
    fitted: Fitted,
}

impl Model {
    /// Probability of the enhanced class.
    pub fn predict_proba(&self, features: &[f64]) -> Result<f64, ClassifyError> {
        if features.len() != self.feature_dim {
            return Err(ClassifyError::DimensionMismatch {
                expected: self.feature_dim,
                got: features.len(),
            });
        }
        Ok(match &self.fitted {
            Fitted::Tree { tree } => tree.predict(features),
            Fitted::Forest { trees } => {
                trees.iter().map(|t| t.predict(features)).sum::<f64>() / trees.len() as f64
            }
            Fitted::Boosting {
                init,
                learning_rate,
                trees,
            } => {
                let margin = init
                    + learning_rate
                        * trees.iter().map(|t| t.predict(features)).sum::<f64>();
                sigmoid(margin)
            }
            Fitted::Logistic { model } => model.predict_proba(features),
        })
    }

    /// Thresholded label: true = enhanced.
    pub fn predict(&self, features: &[f64]) -> Result<bool, ClassifyError> {
        Ok(self.predict_proba(features)? >= self.threshold)
    }

    /// A zero-weight logistic stand-in that scores 0.5 everywhere; useful as
    /// a placeholder in pipelines.
    pub fn neutral(qa: QualityAttribute) -> Model {
        let dim = qa.feature_arity();
        Model {
            family: ModelFamily::Logistic,
            qa,
            hyperparameters: Hyperparameters::new(),
            feature_dim: dim,
            threshold: 0.5,
            fitted: Fitted::Logistic {
                model: LogisticModel {
                    weights: vec![0.0; dim],
                    bias: 0.0,
                    means: vec![0.0; dim],
                    stds: vec![1.0; dim],
                },
            },
        }
    }
}

/// Fit one model family on a training set.
pub fn fit(
    family: ModelFamily,
    qa: QualityAttribute,
    train: &[LabeledExample],
    hyperparameters: &Hyperparameters,
    fit_seed: u64,
) -> Result<Model, ClassifyError> {
    if train.is_empty() {
        return Err(ClassifyError::EmptyDataset);
    }
    let dim = train[0].features.len();
    if train.iter().any(|e| e.features.len() != dim) {
        return Err(ClassifyError::RaggedFeatures);
    }
    let positives = train.iter().filter(|e| e.label).count();
    if positives == 0 || positives == train.len() {
        return Err(ClassifyError::SingleClass);
    }
    validate_hyperparameters(family, hyperparameters)?;

    let rows: Vec<Vec<f64>> = train.iter().map(|e| e.features.clone()).collect();
    let targets: Vec<f64> = train.iter().map(|e| f64::from(e.label)).collect();
    let all: Vec<usize> = (0..rows.len()).collect();
    let get = |key: &str, default: f64| hyperparameters.get(key).copied().unwrap_or(default);

    let fitted = match family {
        ModelFamily::DecisionTree => {
            let opts = TreeOptions {
                max_depth: get("max_depth", 0.0) as usize,
                min_samples_leaf: get("min_samples_leaf", 1.0) as usize,
                criterion: Criterion::Gini,
                features_per_split: None,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(fit_seed);
            let mut leaf = positive_fraction(&targets);
            Fitted::Tree {
                tree: build_tree(&rows, &targets, all, &opts, &mut rng, &mut leaf),
            }
        }
        ModelFamily::RandomForest => {
            let n_trees = get("n_trees", 100.0) as usize;
            let opts = TreeOptions {
                max_depth: get("max_depth", 0.0) as usize,
                min_samples_leaf: get("min_samples_leaf", 1.0) as usize,
                criterion: Criterion::Gini,
                features_per_split: Some(((dim as f64).sqrt().round() as usize).max(1)),
            };
            let tree_seeds: Vec<u64> = (0..n_trees as u64)
                .map(|t| seed::derive_indexed(fit_seed, "forest-tree", t))
                .collect();
            let trees = exec::map_ordered(tree_seeds, |tree_seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(tree_seed);
                let bootstrap: Vec<usize> =
                    (0..rows.len()).map(|_| rng.gen_range(0..rows.len())).collect();
                let mut leaf = positive_fraction(&targets);
                build_tree(&rows, &targets, bootstrap, &opts, &mut rng, &mut leaf)
            });
            Fitted::Forest { trees }
        }
        ModelFamily::GradientBoosting => {
            let n_stages = get("n_stages", 100.0) as usize;
            let learning_rate = get("learning_rate", 0.1);
            let opts = TreeOptions {
                max_depth: get("max_depth", 3.0) as usize,
                min_samples_leaf: get("min_samples_leaf", 1.0) as usize,
                criterion: Criterion::Mse,
                features_per_split: None,
            };
            fit_boosting(&rows, &targets, n_stages, learning_rate, &opts)
        }
        ModelFamily::Logistic => {
            let opts = LogisticOptions {
                l2: get("l2", 0.0),
                learning_rate: get("learning_rate", 0.1),
                iterations: get("n_iters", 500.0) as usize,
            };
            Fitted::Logistic {
                model: fit_logistic(&rows, &targets, &opts),
            }
        }
    };

    Ok(Model {
        family,
        qa,
        hyperparameters: hyperparameters.clone(),
        feature_dim: dim,
        threshold: 0.5,
        fitted,
    })
}

/// Stagewise additive trees on logistic loss. Each stage fits a regression
/// tree to the residuals `y - p` and replaces each leaf value with the
/// Newton step `sum(residuals) / sum(p (1 - p))`.
fn fit_boosting(
    rows: &[Vec<f64>],
    targets: &[f64],
    n_stages: usize,
    learning_rate: f64,
    opts: &TreeOptions,
) -> Fitted {
    let n = rows.len();
    let mean = targets.iter().sum::<f64>() / n as f64;
    let p0 = mean.clamp(1e-12, 1.0 - 1e-12);
    let init = (p0 / (1.0 - p0)).ln();

    let mut margins = vec![init; n];
    let mut trees = Vec::with_capacity(n_stages);
    let mut rng = ChaCha8Rng::seed_from_u64(0); // unused: boosting has no feature subsampling
    for _ in 0..n_stages {
        let probs: Vec<f64> = margins.iter().map(|m| sigmoid(*m)).collect();
        let residuals: Vec<f64> = targets
            .iter()
            .zip(&probs)
            .map(|(y, p)| y - p)
            .collect();
        let mut leaf = |samples: &[usize]| -> f64 {
            let num: f64 = samples.iter().map(|&i| residuals[i]).sum();
            let den: f64 = samples.iter().map(|&i| probs[i] * (1.0 - probs[i])).sum();
            num / den.max(1e-12)
        };
        let tree = build_tree(
            rows,
            &residuals,
            (0..n).collect(),
            opts,
            &mut rng,
            &mut leaf,
        );
        for (i, margin) in margins.iter_mut().enumerate() {
            *margin += learning_rate * tree.predict(&rows[i]);
        }
        trees.push(tree);
    }
    Fitted::Boosting {
        init,
        learning_rate,
        trees,
    }
}

fn validate_hyperparameters(
    family: ModelFamily,
    hyperparameters: &Hyperparameters,
) -> Result<(), ClassifyError> {
    let known: &[&str] = match family {
        ModelFamily::DecisionTree => &["max_depth", "min_samples_leaf"],
        ModelFamily::RandomForest => &["n_trees", "max_depth", "min_samples_leaf"],
        ModelFamily::GradientBoosting => {
            &["n_stages", "learning_rate", "max_depth", "min_samples_leaf"]
        }
        ModelFamily::Logistic => &["l2", "learning_rate", "n_iters"],
    };
    for (key, value) in hyperparameters {
        if !known.contains(&key.as_str()) {
            return Err(ClassifyError::UnknownHyperparameter {
                family: family.name(),
                key: key.clone(),
            });
        }
        let invalid = |reason: &str| ClassifyError::InvalidHyperparameter {
            key: key.clone(),
            reason: reason.to_string(),
        };
        match key.as_str() {
            "max_depth" => {
                if *value < 0.0 || value.fract() != 0.0 {
                    return Err(invalid("must be a non-negative integer (0 = unlimited)"));
                }
            }
            "min_samples_leaf" | "n_trees" | "n_stages" | "n_iters" => {
                if *value < 1.0 || value.fract() != 0.0 {
                    return Err(invalid("must be a positive integer"));
                }
            }
            "learning_rate" => {
                if !(*value > 0.0) {
                    return Err(invalid("must be positive"));
                }
            }
            "l2" => {
                if *value < 0.0 {
                    return Err(invalid("must be non-negative"));
                }
            }
            _ => unreachable!("key was checked against the known list"),
        }
    }
    Ok(())
}

/// Serialize to the versioned JSON envelope
/// `{format_version, family, qa, hyperparameters, payload}`.
pub fn serialize_model(model: &Model) -> Result<Vec<u8>, ClassifyError> {
    #[derive(Serialize)]
    struct Envelope<'a> {
        format_version: u32,
        family: ModelFamily,
        qa: QualityAttribute,
        hyperparameters: &'a Hyperparameters,
        payload: Payload<'a>,
    }
    #[derive(Serialize)]
    struct Payload<'a> {
        feature_dim: usize,
        threshold: f64,
        fitted: &'a Fitted,
    }
    let envelope = Envelope {
        format_version: MODEL_FORMAT_VERSION,
        family: model.family,
        qa: model.qa,
        hyperparameters: &model.hyperparameters,
        payload: Payload {
            feature_dim: model.feature_dim,
            threshold: model.threshold,
            fitted: &model.fitted,
        },
    };
    Ok(serde_json::to_vec_pretty(&envelope)?)
}

/// Inverse of [`serialize_model`]; checks the format version first.
pub fn deserialize_model(bytes: &[u8]) -> Result<Model, ClassifyError> {
    #[derive(Deserialize)]
    struct VersionProbe {
        format_version: u32,
    }
    let probe: VersionProbe = serde_json::from_slice(bytes)?;
    if probe.format_version != MODEL_FORMAT_VERSION {
        return Err(ClassifyError::FormatVersion {
            expected: MODEL_FORMAT_VERSION,
            found: probe.format_version,
        });
    }
    #[derive(Deserialize)]
    struct Envelope {
        #[allow(dead_code)]
        format_version: u32,
        family: ModelFamily,
        qa: QualityAttribute,
        hyperparameters: Hyperparameters,
        payload: Payload,
    }
    #[derive(Deserialize)]
    struct Payload {
        feature_dim: usize,
        threshold: f64,
        fitted: Fitted,
    }
    let envelope: Envelope = serde_json::from_slice(bytes)?;
    Ok(Model {
        family: envelope.family,
        qa: envelope.qa,
        hyperparameters: envelope.hyperparameters,
        feature_dim: envelope.payload.feature_dim,
        threshold: envelope.payload.threshold,
        fitted: envelope.payload.fitted,
    })
}

/// The documented default hyperparameter grid per family.
pub fn default_grid(family: ModelFamily) -> Vec<Hyperparameters> {
    let hp = |pairs: &[(&str, f64)]| -> Hyperparameters {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    };
    match family {
        ModelFamily::DecisionTree => {
            let mut grid = Vec::new();
            for depth in [3.0, 5.0, 8.0, 0.0] {
                for leaf in [1.0, 5.0, 10.0] {
                    grid.push(hp(&[("max_depth", depth), ("min_samples_leaf", leaf)]));
                }
            }
            grid
        }
        ModelFamily::RandomForest => vec![hp(&[("n_trees", 50.0)]), hp(&[("n_trees", 200.0)])],
        ModelFamily::GradientBoosting => {
            let mut grid = Vec::new();
            for stages in [50.0, 200.0] {
                for rate in [0.05, 0.1] {
                    grid.push(hp(&[("n_stages", stages), ("learning_rate", rate)]));
                }
            }
            grid
        }
        ModelFamily::Logistic => vec![hp(&[("l2", 0.0)]), hp(&[("l2", 0.01)])],
    }
}

/// One grid candidate with its evaluation.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub model: Model,
    pub report: EvalReport,
}

/// Outcome of the full train-evaluate-select pipeline for one attribute.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub selected: Model,
    pub selected_report: EvalReport,
    pub candidates: Vec<(ModelFamily, Hyperparameters, EvalReport)>,
}

/// SMOTE → stratified 70/30 split → grid fit (all families) → select.
///
/// Candidates train concurrently; each derives its own seed, so the outcome
/// is identical regardless of parallelism.
pub fn train_and_select(
    qa: QualityAttribute,
    examples: &[LabeledExample],
    smote_k: usize,
    train_frac: f64,
    base_seed: u64,
) -> Result<TrainOutcome, ClassifyError> {
    let positives = examples.iter().filter(|e| e.label).count();
    let balanced = if positives * 2 == examples.len() {
        examples.to_vec()
    } else {
        smote_oversample(examples, smote_k, seed::derive(base_seed, "smote"))?
    };
    let (train, test) = stratified_split(&balanced, train_frac, seed::derive(base_seed, "split"))?;

    let mut jobs: Vec<(ModelFamily, Hyperparameters, u64)> = Vec::new();
    for family in ModelFamily::ALL {
        for (i, hyperparameters) in default_grid(family).into_iter().enumerate() {
            let candidate_seed = seed::derive_indexed(
                base_seed,
                &format!("fit-{}-{}", qa.code(), family.name()),
                i as u64,
            );
            jobs.push((family, hyperparameters, candidate_seed));
        }
    }

    let results: Vec<Result<Candidate, ClassifyError>> =
        exec::map_ordered(jobs, |(family, hyperparameters, candidate_seed)| {
            let model = fit(family, qa, &train, &hyperparameters, candidate_seed)?;
            let report = evaluate(&model, &train, &test)?;
            Ok(Candidate { model, report })
        });

    let mut candidates = Vec::with_capacity(results.len());
    for result in results {
        candidates.push(result?);
    }
    let summary: Vec<(ModelFamily, Hyperparameters, EvalReport)> = candidates
        .iter()
        .map(|c| (c.model.family, c.model.hyperparameters.clone(), c.report.clone()))
        .collect();
    let (selected, selected_report) = model_select(
        candidates
            .into_iter()
            .map(|c| (c.model, c.report))
            .collect(),
    )?;
    Ok(TrainOutcome {
        selected,
        selected_report,
        candidates: summary,
    })
}

/// Per-attribute verdict for one commit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub enhanced: bool,
    pub proba: f64,
}

/// Classify one commit delta under every requested attribute's model.
pub fn classify_commit(
    models: &BTreeMap<QualityAttribute, Model>,
    delta: &CommitMetricDelta,
    requested: &[QualityAttribute],
) -> Result<BTreeMap<QualityAttribute, Verdict>, ClassifyError> {
    let mut verdicts = BTreeMap::new();
    for qa in requested {
        let model = models.get(qa).ok_or(ClassifyError::MissingModel(*qa))?;
        let features = assemble_features(delta, *qa);
        let proba = model.predict_proba(&features.values)?;
        verdicts.insert(
            *qa,
            Verdict {
                enhanced: proba >= model.threshold,
                proba,
            },
        );
    }
    Ok(verdicts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn separable(n: usize) -> Vec<LabeledExample> {
        (0..n)
            .map(|i| LabeledExample {
                features: vec![i as f64, (i % 3) as f64],
                label: i >= n / 2,
                sha: None,
            })
            .collect()
    }

    #[test]
    fn depth_one_tree_separates_thresholdable_data() {
        let data = separable(20);
        let hp: Hyperparameters = [("max_depth".to_string(), 1.0)].into_iter().collect();
        let model = fit(
            ModelFamily::DecisionTree,
            QualityAttribute::Understandability,
            &data,
            &hp,
            0,
        )
        .unwrap();
        let correct = data
            .iter()
            .filter(|e| model.predict(&e.features).unwrap() == e.label)
            .count();
        assert_eq!(correct, data.len());
    }

    #[test]
    fn constant_label_training_is_rejected() {
        let mut data = separable(10);
        for e in &mut data {
            e.label = true;
        }
        assert!(matches!(
            fit(
                ModelFamily::Logistic,
                QualityAttribute::Reliability,
                &data,
                &Hyperparameters::new(),
                0
            ),
            Err(ClassifyError::SingleClass)
        ));
    }

    #[test]
    fn unknown_hyperparameter_is_named_in_the_error() {
        let data = separable(10);
        let hp: Hyperparameters = [("depth".to_string(), 3.0)].into_iter().collect();
        let err = fit(
            ModelFamily::DecisionTree,
            QualityAttribute::Reliability,
            &data,
            &hp,
            0,
        )
        .unwrap_err();
        assert!(err.to_string().contains("depth"));
    }

    #[test]
    fn same_inputs_same_predictions_all_families() {
        let data = separable(60);
        let probes: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64 * 1.3, 1.0]).collect();
        for family in ModelFamily::ALL {
            let a = fit(family, QualityAttribute::Modularity, &data, &Hyperparameters::new(), 9)
                .unwrap();
            let b = fit(family, QualityAttribute::Modularity, &data, &Hyperparameters::new(), 9)
                .unwrap();
            for probe in &probes {
                assert_eq!(
                    a.predict_proba(probe).unwrap(),
                    b.predict_proba(probe).unwrap(),
                    "family {family}"
                );
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let data = separable(10);
        let model = fit(
            ModelFamily::Logistic,
            QualityAttribute::Maintainability,
            &data,
            &Hyperparameters::new(),
            0,
        )
        .unwrap();
        assert!(matches!(
            model.predict_proba(&[1.0, 2.0, 3.0]),
            Err(ClassifyError::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn neutral_model_scores_one_half() {
        let model = Model::neutral(QualityAttribute::Usability);
        let proba = model.predict_proba(&vec![3.0; 9]).unwrap();
        assert_eq!(proba, 0.5);
    }

    #[test]
    fn round_trip_preserves_predictions_exactly() {
        let data = separable(80);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for family in ModelFamily::ALL {
            let model = fit(
                family,
                QualityAttribute::Understandability,
                &data,
                &Hyperparameters::new(),
                7,
            )
            .unwrap();
            let bytes = serialize_model(&model).unwrap();
            let restored = deserialize_model(&bytes).unwrap();
            for _ in 0..200 {
                let probe = vec![rng.gen_range(-100.0..100.0), rng.gen_range(-5.0..5.0)];
                assert_eq!(
                    model.predict_proba(&probe).unwrap(),
                    restored.predict_proba(&probe).unwrap()
                );
            }
        }
    }

    #[test]
    fn version_mismatch_and_corrupt_payloads_error() {
        let data = separable(10);
        let model = fit(
            ModelFamily::DecisionTree,
            QualityAttribute::Reliability,
            &data,
            &Hyperparameters::new(),
            0,
        )
        .unwrap();
        let bytes = serialize_model(&model).unwrap();
        let bumped = String::from_utf8(bytes.clone())
            .unwrap()
            .replace("\"format_version\": 1", "\"format_version\": 2");
        match deserialize_model(bumped.as_bytes()) {
            Err(ClassifyError::FormatVersion { expected: 1, found: 2 }) => {}
            other => panic!("expected version error, got {other:?}"),
        }
        let truncated = &bytes[..bytes.len() / 2];
        assert!(matches!(
            deserialize_model(truncated),
            Err(ClassifyError::Payload(_))
        ));
    }

    #[test]
    fn grid_sizes_match_the_documented_defaults() {
        assert_eq!(default_grid(ModelFamily::DecisionTree).len(), 12);
        assert_eq!(default_grid(ModelFamily::RandomForest).len(), 2);
        assert_eq!(default_grid(ModelFamily::GradientBoosting).len(), 4);
        assert_eq!(default_grid(ModelFamily::Logistic).len(), 2);
    }

    #[test]
    fn raising_the_threshold_never_increases_recall() {
        let data = separable(40);
        let mut model = fit(
            ModelFamily::GradientBoosting,
            QualityAttribute::Reliability,
            &data,
            &Hyperparameters::new(),
            1,
        )
        .unwrap();
        let mut last_recall = f64::INFINITY;
        for threshold in [0.1, 0.3, 0.5, 0.7, 0.9] {
            model.threshold = threshold;
            let report = evaluate(&model, &data, &data).unwrap();
            assert!(report.recall <= last_recall + 1e-12);
            last_recall = report.recall;
        }
    }

    #[test]
    fn classify_commit_is_independent_per_attribute() {
        let mut models = BTreeMap::new();
        for qa in QualityAttribute::ALL {
            models.insert(qa, Model::neutral(qa));
        }
        let delta = CommitMetricDelta::zero("s");
        let all = classify_commit(&models, &delta, &QualityAttribute::ALL).unwrap();
        assert_eq!(all.len(), 5);
        for verdict in all.values() {
            assert_eq!(verdict.proba, 0.5);
            assert!(verdict.enhanced); // proba == threshold counts as enhanced
        }
        // removing one model leaves the others' outputs unchanged
        models.remove(&QualityAttribute::Modularity);
        let four = classify_commit(
            &models,
            &delta,
            &QualityAttribute::ALL[..4],
        )
        .unwrap();
        for (qa, verdict) in &four {
            assert_eq!(verdict, all.get(qa).unwrap());
        }
        assert!(matches!(
            classify_commit(&models, &delta, &[QualityAttribute::Modularity]),
            Err(ClassifyError::MissingModel(QualityAttribute::Modularity))
        ));
    }
}
