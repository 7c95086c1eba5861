//! Deterministic stratified train/test splitting.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ClassifyError, LabeledExample};

/// Split into train/test preserving class proportions within one example.
///
/// Each class is shuffled under the seed and cut at
/// `round(train_frac * class_size)`, clamped so both parts keep at least one
/// example per class (hence classes of fewer than two examples are
/// rejected).
pub fn stratified_split(
    examples: &[LabeledExample],
    train_frac: f64,
    seed: u64,
) -> Result<(Vec<LabeledExample>, Vec<LabeledExample>), ClassifyError> {
    if !(train_frac > 0.0 && train_frac < 1.0) {
        return Err(ClassifyError::BadTrainFraction(train_frac));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for label in [false, true] {
        let mut class: Vec<&LabeledExample> =
            examples.iter().filter(|e| e.label == label).collect();
        if class.is_empty() {
            continue;
        }
        if class.len() < 2 {
            return Err(ClassifyError::TinyClass {
                enhanced: label,
                count: class.len(),
            });
        }
        class.shuffle(&mut rng);
        let n_train = ((train_frac * class.len() as f64).round() as usize)
            .clamp(1, class.len() - 1);
        for (i, example) in class.into_iter().enumerate() {
            if i < n_train {
                train.push(example.clone());
            } else {
                test.push(example.clone());
            }
        }
    }
    Ok((train, test))
}
