//! Synthetic minority oversampling: grow the minority class to the majority
//! size by interpolating between minority points and their nearest minority
//! neighbors.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ClassifyError, LabeledExample};

/// Oversample the minority class to the majority size.
///
/// Each synthetic sample picks a random minority point `x`, one of its `k`
/// nearest minority neighbors `z` (Euclidean distance, index tiebreak), and
/// emits `x + u * (z - x)` with `u` uniform in [0, 1]. `k` is reduced to
/// `minority_size - 1` when the minority is smaller than `k + 1`.
/// Deterministic under a fixed seed. An already balanced dataset is returned
/// unchanged.
pub fn smote_oversample(
    examples: &[LabeledExample],
    k: usize,
    seed: u64,
) -> Result<Vec<LabeledExample>, ClassifyError> {
    if k == 0 {
        return Err(ClassifyError::InvalidNeighborCount);
    }
    let positives: Vec<usize> = indices_of(examples, true);
    let negatives: Vec<usize> = indices_of(examples, false);
    if positives.is_empty() || negatives.is_empty() {
        return Err(ClassifyError::SingleClass);
    }
    let (minority, majority_len) = if positives.len() < negatives.len() {
        (positives, negatives.len())
    } else if negatives.len() < positives.len() {
        (negatives, positives.len())
    } else {
        return Ok(examples.to_vec());
    };
    if minority.len() < 2 {
        return Err(ClassifyError::MinorityTooSmall);
    }

    let k = k.min(minority.len() - 1);
    let neighbors = nearest_neighbors(examples, &minority, k);

    let minority_label = examples[minority[0]].label;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut output = examples.to_vec();
    for _ in 0..majority_len - minority.len() {
        let base = rng.gen_range(0..minority.len());
        let neighbor = neighbors[base][rng.gen_range(0..k)];
        let u: f64 = rng.gen_range(0.0..=1.0);
        let x = &examples[minority[base]].features;
        let z = &examples[minority[neighbor]].features;
        let features: Vec<f64> = x
            .iter()
            .zip(z)
            .map(|(a, b)| a + u * (b - a))
            .collect();
        output.push(LabeledExample {
            features,
            label: minority_label,
            sha: None,
        });
    }
    Ok(output)
}

fn indices_of(examples: &[LabeledExample], label: bool) -> Vec<usize> {
    examples
        .iter()
        .enumerate()
        .filter(|(_, e)| e.label == label)
        .map(|(i, _)| i)
        .collect()
}

/// For each minority point (positions into `minority`), its `k` nearest
/// minority peers, ordered by distance then index.
fn nearest_neighbors(examples: &[LabeledExample], minority: &[usize], k: usize) -> Vec<Vec<usize>> {
    minority
        .iter()
        .enumerate()
        .map(|(pos, &i)| {
            let mut others: Vec<(f64, usize)> = minority
                .iter()
                .enumerate()
                .filter(|(other_pos, _)| *other_pos != pos)
                .map(|(other_pos, &j)| (distance(&examples[i].features, &examples[j].features), other_pos))
                .collect();
            others.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
            others.into_iter().take(k).map(|(_, pos)| pos).collect()
        })
        .collect()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example(features: Vec<f64>, label: bool) -> LabeledExample {
        LabeledExample {
            features,
            label,
            sha: None,
        }
    }

    fn dataset(minority: usize, majority: usize) -> Vec<LabeledExample> {
        let mut examples = Vec::new();
        for i in 0..minority {
            examples.push(example(vec![i as f64, 1.0], true));
        }
        for i in 0..majority {
            examples.push(example(vec![i as f64, -1.0], false));
        }
        examples
    }

    #[test]
    fn the_reported_totals_reproduce() {
        let balanced = smote_oversample(&dataset(133, 367), 5, 42).unwrap();
        assert_eq!(balanced.len(), 734);
        let positives = balanced.iter().filter(|e| e.label).count();
        assert_eq!(positives, 367);
    }

    #[test]
    fn already_balanced_is_unchanged() {
        let data = dataset(10, 10);
        assert_eq!(smote_oversample(&data, 5, 0).unwrap(), data);
    }

    #[test]
    fn synthetics_lie_on_the_segment_for_two_points() {
        let data = vec![
            example(vec![0.0, 0.0], true),
            example(vec![1.0, 1.0], true),
            example(vec![5.0, 5.0], false),
            example(vec![6.0, 6.0], false),
            example(vec![7.0, 7.0], false),
            example(vec![8.0, 8.0], false),
        ];
        let balanced = smote_oversample(&data, 1, 3).unwrap();
        for synthetic in &balanced[6..] {
            let f = &synthetic.features;
            assert!((f[0] - f[1]).abs() < 1e-12, "on the diagonal segment");
            assert!((0.0..=1.0).contains(&f[0]));
            assert!(synthetic.label);
        }
    }

    #[test]
    fn errors_on_degenerate_inputs() {
        assert!(matches!(
            smote_oversample(&dataset(0, 5), 5, 0),
            Err(ClassifyError::SingleClass)
        ));
        assert!(matches!(
            smote_oversample(&dataset(1, 5), 5, 0),
            Err(ClassifyError::MinorityTooSmall)
        ));
        assert!(matches!(
            smote_oversample(&dataset(3, 5), 0, 0),
            Err(ClassifyError::InvalidNeighborCount)
        ));
    }

    #[test]
    fn deterministic_under_seed() {
        let data = dataset(5, 20);
        assert_eq!(
            smote_oversample(&data, 3, 9).unwrap(),
            smote_oversample(&data, 3, 9).unwrap()
        );
        assert_ne!(
            smote_oversample(&data, 3, 9).unwrap(),
            smote_oversample(&data, 3, 10).unwrap()
        );
    }
}
