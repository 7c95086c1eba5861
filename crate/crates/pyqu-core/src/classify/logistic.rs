//! Logistic regression trained by full-batch gradient descent, with internal
//! feature standardization. The linear baseline of the model family set.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Per-feature standardization captured at fit time.
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

pub(crate) struct LogisticOptions {
    pub l2: f64,
    pub learning_rate: f64,
    pub iterations: usize,
}

pub(crate) fn fit_logistic(
    rows: &[Vec<f64>],
    labels: &[f64],
    opts: &LogisticOptions,
) -> LogisticModel {
    let n = rows.len();
    let dim = rows.first().map(|r| r.len()).unwrap_or(0);

    let mut means = vec![0.0; dim];
    for row in rows {
        for (m, v) in means.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n as f64;
    }
    let mut stds = vec![0.0; dim];
    for row in rows {
        for ((s, v), m) in stds.iter_mut().zip(row).zip(&means) {
            *s += (v - m) * (v - m);
        }
    }
    for s in &mut stds {
        *s = (*s / n as f64).sqrt();
        if *s == 0.0 {
            *s = 1.0;
        }
    }

    let standardized: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(&means)
                .zip(&stds)
                .map(|((v, m), s)| (v - m) / s)
                .collect()
        })
        .collect();

    let mut weights = vec![0.0; dim];
    let mut bias = 0.0;
    for _ in 0..opts.iterations {
        let mut grad_w = vec![0.0; dim];
        let mut grad_b = 0.0;
        for (row, label) in standardized.iter().zip(labels) {
            let margin = bias + dot(&weights, row);
            let err = sigmoid(margin) - label;
            for (g, v) in grad_w.iter_mut().zip(row) {
                *g += err * v;
            }
            grad_b += err;
        }
        let scale = 1.0 / n as f64;
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= opts.learning_rate * (g * scale + opts.l2 * *w);
        }
        bias -= opts.learning_rate * grad_b * scale;
    }

    LogisticModel {
        weights,
        bias,
        means,
        stds,
    }
}

impl LogisticModel {
    pub fn predict_proba(&self, features: &[f64]) -> f64 {
        let mut margin = self.bias;
        for i in 0..self.weights.len() {
            let z = (features[i] - self.means[i]) / self.stds[i];
            margin += self.weights[i] * z;
        }
        sigmoid(margin)
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
