//! Property suite: range/totality invariants of the metrics, delta
//! antisymmetry, oracle equivalence for the evaluation metrics, SMOTE
//! geometry, and the statistics invariants.

use proptest::prelude::*;

use pyqu_core::classify::{
    evaluate, fit, metrics_from_confusion, roc_auc, smote_oversample, stratified_split,
    Hyperparameters, LabeledExample, ModelFamily,
};
use pyqu_core::dataset::{cochran_sample_size, cohens_kappa, Population};
use pyqu_core::delta::{aggregate_file_metrics, compute_deltas};
use pyqu_core::metrics::{compute_metric_vector, parse_source, MetricVector, RuleCatalog};
use pyqu_core::mine::RepoTree;
use pyqu_core::QualityAttribute;

/// A small pool of statement templates for generating valid-ish Python.
fn statement(choice: u8, i: usize) -> String {
    match choice % 8 {
        0 => format!("v{i} = {i}\n"),
        1 => format!("def f{i}(a):\n    if a:\n        return {i}\n    return 0\n"),
        2 => format!("# note number {i}.\n"),
        3 => format!("import mod{i}\n"),
        4 => format!("class C{i}:\n    def m(self):\n        self.x = {i}\n"),
        5 => format!("w{i} = [n for n in range({i}) if n]\n"),
        6 => format!("def g{i}():\n    \"\"\"Doc {i}.\"\"\"\n    return {i}\n"),
        7 => format!("t{i}: int = {i}\n"),
        _ => unreachable!(),
    }
}

fn source_from(choices: &[u8]) -> String {
    choices
        .iter()
        .enumerate()
        .map(|(i, c)| statement(*c, i))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratio_metrics_stay_in_range(choices in prop::collection::vec(any::<u8>(), 0..12)) {
        let unit = parse_source("p.py", source_from(&choices));
        let v = compute_metric_vector(&unit, &RuleCatalog::default());
        prop_assert!((0.0..=1.0).contains(&v.scs));
        prop_assert!((0.0..=1.0).contains(&v.apifc));
        prop_assert!((0.0..=1.0).contains(&v.adc));
        prop_assert!((0.0..=1.0).contains(&v.ch));
        prop_assert!((0.0..=1.0).contains(&v.dq));
        prop_assert!(v.hv >= 0.0 && v.ccr >= 0.0 && v.d >= 0.0);
    }

    #[test]
    fn arbitrary_bytes_never_crash_the_metrics(text in "\\PC*") {
        let unit = parse_source("p.py", text);
        let _ = compute_metric_vector(&unit, &RuleCatalog::default());
    }

    #[test]
    fn delta_antisymmetry(
        pre_choices in prop::collection::vec(any::<u8>(), 0..8),
        post_choices in prop::collection::vec(any::<u8>(), 0..8),
    ) {
        let pre = source_from(&pre_choices);
        let post = source_from(&post_choices);
        let mut pair = pyqu_core::mine::SnapshotPair::default();
        pair.pre.insert("a.py".to_string(), pre);
        pair.post.insert("a.py".to_string(), post);
        let mut swapped = pyqu_core::mine::SnapshotPair::default();
        swapped.pre = pair.post.clone();
        swapped.post = pair.pre.clone();

        let catalog = RuleCatalog::default();
        let tree = RepoTree::default();
        let forward = compute_deltas("s", &pair, &catalog, &tree, &tree);
        let backward = compute_deltas("s", &swapped, &catalog, &tree, &tree);
        for (f, b) in forward.as_array().iter().zip(backward.as_array().iter()) {
            prop_assert_eq!(*f, -*b);
        }
    }

    #[test]
    fn count_aggregation_is_additive(
        a_choices in prop::collection::vec(any::<u8>(), 0..6),
        b_choices in prop::collection::vec(any::<u8>(), 0..6),
    ) {
        let catalog = RuleCatalog::default();
        let va = compute_metric_vector(&parse_source("a.py", source_from(&a_choices)), &catalog);
        let vb = compute_metric_vector(&parse_source("b.py", source_from(&b_choices)), &catalog);
        let agg = aggregate_file_metrics(&[va.clone(), vb.clone()]);
        prop_assert_eq!(agg.cc, va.cc + vb.cc);
        prop_assert_eq!(agg.loc, va.loc + vb.loc);
        prop_assert_eq!(agg.afp, va.afp + vb.afp);
        prop_assert_eq!(agg.tc, va.tc + vb.tc);
        prop_assert_eq!(agg.cp_internal, va.cp_internal + vb.cp_internal);
        prop_assert_eq!(agg.cp_external, va.cp_external + vb.cp_external);
        prop_assert!((agg.hv - (va.hv + vb.hv)).abs() < 1e-9);
        prop_assert!((agg.d - (va.d + vb.d)).abs() < 1e-9);
    }

    #[test]
    fn roc_auc_equals_pair_enumeration(
        data in prop::collection::vec((0.0f64..1.0, any::<bool>()), 2..200)
    ) {
        let scores: Vec<f64> = data.iter().map(|(s, _)| (s * 8.0).round() / 8.0).collect();
        let labels: Vec<bool> = data.iter().map(|(_, l)| *l).collect();
        let n_pos = labels.iter().filter(|l| **l).count();
        prop_assume!(n_pos > 0 && n_pos < labels.len());

        let fast = roc_auc(&scores, &labels).unwrap();
        let mut wins = 0.0;
        let mut pairs = 0.0;
        for i in 0..scores.len() {
            if !labels[i] { continue; }
            for j in 0..scores.len() {
                if labels[j] { continue; }
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
        prop_assert!((fast - wins / pairs).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&fast));
    }

    #[test]
    fn confusion_metrics_match_a_brute_force_oracle(
        data in prop::collection::vec((any::<bool>(), any::<bool>()), 1..200)
    ) {
        // oracle: recount everything naively from the raw pairs
        let tp = data.iter().filter(|(p, l)| *p && *l).count() as f64;
        let fp = data.iter().filter(|(p, l)| *p && !*l).count() as f64;
        let fn_ = data.iter().filter(|(p, l)| !*p && *l).count() as f64;
        let tn = data.iter().filter(|(p, l)| !*p && !*l).count() as f64;
        let confusion = pyqu_core::classify::Confusion {
            tp: tp as u64,
            fp: fp as u64,
            fn_: fn_ as u64,
            tn: tn as u64,
        };
        let (accuracy, precision, recall, f1) = metrics_from_confusion(&confusion);
        let expected_precision = if tp + fp == 0.0 { 0.0 } else { tp / (tp + fp) };
        let expected_recall = if tp + fn_ == 0.0 { 0.0 } else { tp / (tp + fn_) };
        prop_assert_eq!(accuracy, (tp + tn) / data.len() as f64);
        prop_assert_eq!(precision, expected_precision);
        prop_assert_eq!(recall, expected_recall);
        if precision + recall > 0.0 {
            prop_assert!((f1 - 2.0 * precision * recall / (precision + recall)).abs() < 1e-15);
        } else {
            prop_assert_eq!(f1, 0.0);
        }
    }

    #[test]
    fn smote_balances_and_stays_in_the_hull(
        minority in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 2..12),
        extra_majority in 1usize..20,
        seed in any::<u64>(),
    ) {
        let mut examples: Vec<LabeledExample> = minority
            .iter()
            .map(|(a, b)| LabeledExample { features: vec![*a, *b], label: true, sha: None })
            .collect();
        let majority_len = minority.len() + extra_majority;
        for i in 0..majority_len {
            examples.push(LabeledExample {
                features: vec![100.0 + i as f64, -50.0],
                label: false,
                sha: None,
            });
        }
        let balanced = smote_oversample(&examples, 5, seed).unwrap();
        let positives = balanced.iter().filter(|e| e.label).count();
        let negatives = balanced.len() - positives;
        prop_assert_eq!(positives, negatives);
        prop_assert_eq!(positives, majority_len);

        // every synthetic lies on a segment between two minority points
        for synthetic in &balanced[examples.len()..] {
            prop_assert!(synthetic.label);
            let s = &synthetic.features;
            let on_some_segment = minority.iter().enumerate().any(|(i, (ax, ay))| {
                minority.iter().enumerate().any(|(j, (bx, by))| {
                    if i == j {
                        return false;
                    }
                    let (dx, dy) = (bx - ax, by - ay);
                    let len_sq = dx * dx + dy * dy;
                    let t = if len_sq == 0.0 {
                        0.0
                    } else {
                        ((s[0] - ax) * dx + (s[1] - ay) * dy) / len_sq
                    };
                    if !(-1e-9..=1.0 + 1e-9).contains(&t) {
                        return false;
                    }
                    let (px, py) = (ax + t * dx, ay + t * dy);
                    ((s[0] - px).powi(2) + (s[1] - py).powi(2)).sqrt() < 1e-6
                })
            });
            prop_assert!(on_some_segment, "synthetic {s:?} off every minority segment");
        }
    }

    #[test]
    fn kappa_is_transpose_invariant(
        m in prop::collection::vec(prop::collection::vec(0u64..50, 3), 3),
    ) {
        let total: u64 = m.iter().flatten().sum();
        prop_assume!(total > 0);
        let t: Vec<Vec<u64>> = (0..3)
            .map(|i| (0..3).map(|j| m[j][i]).collect())
            .collect();
        match (cohens_kappa(&m), cohens_kappa(&t)) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12),
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "asymmetric outcome: {other:?}"),
        }
    }

    #[test]
    fn cochran_is_monotone(populations in prop::collection::vec(1u64..100_000, 2)) {
        let small = populations.iter().min().unwrap();
        let large = populations.iter().max().unwrap();
        let n_small = cochran_sample_size(Population::Finite(*small), 0.95, 0.05).unwrap();
        let n_large = cochran_sample_size(Population::Finite(*large), 0.95, 0.05).unwrap();
        prop_assert!(n_small <= n_large);
        let tight = cochran_sample_size(Population::Finite(*large), 0.95, 0.02).unwrap();
        prop_assert!(tight >= n_large);
    }

    #[test]
    fn stratified_split_is_proportional(
        n_pos in 4usize..40,
        n_neg in 4usize..40,
        seed in any::<u64>(),
    ) {
        let mut examples = Vec::new();
        for i in 0..n_pos {
            examples.push(LabeledExample { features: vec![i as f64], label: true, sha: None });
        }
        for i in 0..n_neg {
            examples.push(LabeledExample { features: vec![-(i as f64)], label: false, sha: None });
        }
        let (train, test) = stratified_split(&examples, 0.7, seed).unwrap();
        prop_assert_eq!(train.len() + test.len(), examples.len());
        let train_pos = train.iter().filter(|e| e.label).count() as f64;
        let expected = 0.7 * n_pos as f64;
        prop_assert!((train_pos - expected).abs() <= 1.0);
    }
}

#[test]
fn threshold_sweep_never_increases_recall() {
    let examples: Vec<LabeledExample> = (0..60)
        .map(|i| LabeledExample {
            features: vec![i as f64, (i % 5) as f64],
            label: i % 3 != 0,
            sha: None,
        })
        .collect();
    let mut model = fit(
        ModelFamily::RandomForest,
        QualityAttribute::Understandability,
        &examples,
        &Hyperparameters::new(),
        11,
    )
    .unwrap();
    let mut last = f64::INFINITY;
    for threshold in [0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95] {
        model.threshold = threshold;
        let report = evaluate(&model, &examples, &examples).unwrap();
        assert!(report.recall <= last + 1e-12);
        last = report.recall;
    }
}

#[test]
fn empty_input_totality_is_complete() {
    let unit = parse_source("e.py", "");
    let v = compute_metric_vector(&unit, &RuleCatalog::default());
    assert_eq!(v, MetricVector::neutral());
}
