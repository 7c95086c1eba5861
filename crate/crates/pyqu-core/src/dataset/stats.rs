//! Cohen's kappa, Cochran sample sizing, and simple random sampling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DataError;

/// Chance-corrected inter-annotator agreement.
///
/// `kappa = (p_o - p_e) / (1 - p_e)` over a square agreement-count matrix;
/// `p_o` is the diagonal mass, `p_e` the product of marginals. When expected
/// agreement is exactly 1, the statistic is 1 for perfect observed agreement
/// and undefined otherwise.
pub fn cohens_kappa(matrix: &[Vec<u64>]) -> Result<f64, DataError> {
    let k = matrix.len();
    if k == 0 || matrix.iter().any(|row| row.len() != k) {
        return Err(DataError::BadMatrix);
    }
    let total: u64 = matrix.iter().flatten().sum();
    if total == 0 {
        return Err(DataError::BadMatrix);
    }
    let total = total as f64;
    let observed: u64 = (0..k).map(|i| matrix[i][i]).sum();
    let p_o = observed as f64 / total;
    let mut p_e = 0.0;
    for i in 0..k {
        let row: u64 = matrix[i].iter().sum();
        let col: u64 = matrix.iter().map(|r| r[i]).sum();
        p_e += (row as f64) * (col as f64) / (total * total);
    }
    if p_e >= 1.0 {
        return if (p_o - 1.0).abs() < 1e-12 {
            Ok(1.0)
        } else {
            Err(DataError::KappaUndefined)
        };
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// Population under study for sample sizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Population {
    Infinite,
    Finite(u64),
}

/// Minimum simple-random-sample size for a confidence level and margin of
/// error, with finite-population correction.
///
/// `n0 = z^2 * 0.25 / e^2`, corrected by `n = n0 / (1 + (n0 - 1) / N)` for a
/// finite population, rounded up to the next whole sample. Ceiling is the
/// rounding rule: a sample must be at least as large as the real-valued
/// minimum, and it reproduces the standard published values (385 at 95%/5%
/// uncorrected).
pub fn cochran_sample_size(
    population: Population,
    confidence: f64,
    margin: f64,
) -> Result<u64, DataError> {
    if margin <= 0.0 {
        return Err(DataError::BadMargin(margin));
    }
    let z = match confidence {
        c if (c - 0.90).abs() < 1e-9 => 1.645,
        c if (c - 0.95).abs() < 1e-9 => 1.96,
        c if (c - 0.99).abs() < 1e-9 => 2.576,
        other => return Err(DataError::BadConfidence(other)),
    };
    let n0 = z * z * 0.25 / (margin * margin);
    let n = match population {
        Population::Infinite => n0,
        Population::Finite(0) => return Err(DataError::BadPopulation),
        Population::Finite(n_pop) => {
            let n_pop = n_pop as f64;
            let corrected = n0 / (1.0 + (n0 - 1.0) / n_pop);
            corrected.min(n_pop)
        }
    };
    Ok(n.ceil() as u64)
}

/// Uniform without-replacement sample, deterministic under the seed. A
/// sample of the full size is a permutation.
pub fn srs_sample<T: Clone>(items: &[T], size: usize, seed: u64) -> Result<Vec<T>, DataError> {
    if size > items.len() {
        return Err(DataError::SampleTooLarge {
            size,
            available: items.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..items.len()).collect();
    // partial Fisher-Yates: the first `size` positions become the sample
    for i in 0..size {
        let j = rng.gen_range(i..indices.len());
        indices.swap(i, j);
    }
    Ok(indices[..size].iter().map(|&i| items[i].clone()).collect())
}
