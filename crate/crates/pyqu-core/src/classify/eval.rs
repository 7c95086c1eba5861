//! Evaluation: confusion metrics, ROC-AUC, and model selection.

use serde::{Deserialize, Serialize};

use super::{ClassifyError, LabeledExample, Model};

/// Confusion counts at the model's decision threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

/// Evaluation report for one fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub roc_auc: f64,
    /// `|train accuracy - test accuracy|`, the overfit gate.
    pub delta_accuracy: f64,
    pub confusion: Confusion,
}

/// Evaluate on a test set; `delta_accuracy` compares against the training
/// accuracy. Zero-denominator conventions: precision and recall are 0 when
/// undefined, F1 is 0 when precision + recall is 0, and ROC-AUC falls back
/// to 0.5 when the test set has a single class.
pub fn evaluate(
    model: &Model,
    train: &[LabeledExample],
    test: &[LabeledExample],
) -> Result<EvalReport, ClassifyError> {
    if test.is_empty() {
        return Err(ClassifyError::EmptyTestSet);
    }
    let train_acc = accuracy_of(model, train)?;

    let mut confusion = Confusion {
        tp: 0,
        fp: 0,
        fn_: 0,
        tn: 0,
    };
    let mut scores = Vec::with_capacity(test.len());
    let mut labels = Vec::with_capacity(test.len());
    for example in test {
        let proba = model.predict_proba(&example.features)?;
        let predicted = proba >= model.threshold;
        match (predicted, example.label) {
            (true, true) => confusion.tp += 1,
            (true, false) => confusion.fp += 1,
            (false, true) => confusion.fn_ += 1,
            (false, false) => confusion.tn += 1,
        }
        scores.push(proba);
        labels.push(example.label);
    }

    let (accuracy, precision, recall, f1) = metrics_from_confusion(&confusion);
    let auc = match roc_auc(&scores, &labels) {
        Ok(auc) => auc,
        Err(ClassifyError::SingleClassLabels) => 0.5,
        Err(err) => return Err(err),
    };

    Ok(EvalReport {
        accuracy,
        precision,
        recall,
        f1,
        roc_auc: auc,
        delta_accuracy: (train_acc - accuracy).abs(),
        confusion,
    })
}

/// `(accuracy, precision, recall, f1)` from confusion counts.
pub fn metrics_from_confusion(confusion: &Confusion) -> (f64, f64, f64, f64) {
    let (tp, fp, fn_, tn) = (
        confusion.tp as f64,
        confusion.fp as f64,
        confusion.fn_ as f64,
        confusion.tn as f64,
    );
    let precision = if tp + fp == 0.0 { 0.0 } else { tp / (tp + fp) };
    let recall = if tp + fn_ == 0.0 { 0.0 } else { tp / (tp + fn_) };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let accuracy = (tp + tn) / (tp + fp + fn_ + tn);
    (accuracy, precision, recall, f1)
}

fn accuracy_of(model: &Model, examples: &[LabeledExample]) -> Result<f64, ClassifyError> {
    if examples.is_empty() {
        return Ok(0.0);
    }
    let mut correct = 0usize;
    for example in examples {
        let predicted = model.predict_proba(&example.features)? >= model.threshold;
        if predicted == example.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / examples.len() as f64)
}

/// Area under the ROC curve by the rank (Mann-Whitney) formulation: the
/// probability that a random positive outscores a random negative, ties
/// counted one half. The property suite checks this against exhaustive pair
/// enumeration.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<f64, ClassifyError> {
    let n_pos = labels.iter().filter(|l| **l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(ClassifyError::SingleClassLabels);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|a, b| scores[*a].total_cmp(&scores[*b]));

    // midranks over tied score groups, ranks 1-based
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let midrank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if labels[idx] {
                rank_sum_pos += midrank;
            }
        }
        i = j + 1;
    }

    let n_pos = n_pos as f64;
    let n_neg = n_neg as f64;
    Ok((rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg))
}

/// Pick the best candidate: among those with `delta_accuracy <= 0.1`, the
/// highest F1, ties broken by ROC-AUC, then accuracy, then lexicographic
/// family name. If nothing passes the gate, the globally smallest
/// `delta_accuracy` wins (same tiebreaks among the minima).
pub fn model_select(
    candidates: Vec<(Model, EvalReport)>,
) -> Result<(Model, EvalReport), ClassifyError> {
    if candidates.is_empty() {
        return Err(ClassifyError::EmptyCandidates);
    }
    let gated: Vec<&(Model, EvalReport)> = candidates
        .iter()
        .filter(|(_, r)| r.delta_accuracy <= 0.1)
        .collect();

    let pick = |pool: &[&(Model, EvalReport)]| -> usize {
        let mut best = 0;
        for i in 1..pool.len() {
            if preferred(&pool[i].0, &pool[i].1, &pool[best].0, &pool[best].1) {
                best = i;
            }
        }
        let chosen: *const (Model, EvalReport) = pool[best];
        candidates
            .iter()
            .position(|c| std::ptr::eq(c, chosen))
            .expect("candidate present")
    };

    let index = if gated.is_empty() {
        let min_delta = candidates
            .iter()
            .map(|(_, r)| r.delta_accuracy)
            .fold(f64::INFINITY, f64::min);
        let minima: Vec<&(Model, EvalReport)> = candidates
            .iter()
            .filter(|(_, r)| r.delta_accuracy == min_delta)
            .collect();
        pick(&minima)
    } else {
        pick(&gated)
    };

    Ok(candidates.into_iter().nth(index).expect("index in range"))
}

/// True when (a, ra) beats (b, rb) under the selection tiebreak chain.
fn preferred(a: &Model, ra: &EvalReport, b: &Model, rb: &EvalReport) -> bool {
    if ra.f1 != rb.f1 {
        return ra.f1 > rb.f1;
    }
    if ra.roc_auc != rb.roc_auc {
        return ra.roc_auc > rb.roc_auc;
    }
    if ra.accuracy != rb.accuracy {
        return ra.accuracy > rb.accuracy;
    }
    a.family.name() < b.family.name()
}
