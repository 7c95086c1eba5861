//! Commit-level metric aggregation, deltas, and per-attribute feature
//! vectors.
//!
//! Aggregation over one side of a commit: count-like metrics (cc, hv, loc,
//! afp, d, tc, cp) are summed; ratio-like metrics (ccr, cr, scs, apifc, adc,
//! ch, dq) are LoC-weighted means, falling back to a uniform mean when the
//! side has no code. A file missing on one side (added or deleted) stands in
//! as the neutral vector.

use serde::{Deserialize, Serialize};

use crate::metrics::{compute_metric_vector, parse_source, MetricVector, RuleCatalog};
use crate::mine::{repo_reproducibility, RepoTree, SnapshotPair};
use crate::QualityAttribute;

/// Per-metric deltas (post minus pre) for one commit, plus ΔREP.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommitMetricDelta {
    pub sha: String,
    pub d_cc: f64,
    pub d_hv: f64,
    pub d_loc: f64,
    pub d_ccr: f64,
    pub d_cr: f64,
    pub d_scs: f64,
    pub d_afp: f64,
    pub d_apifc: f64,
    pub d_d: f64,
    pub d_adc: f64,
    pub d_ch: f64,
    pub d_cp_internal: f64,
    pub d_cp_external: f64,
    pub d_tc: f64,
    pub d_dq: f64,
    pub d_rep: f64,
    pub files_pre: usize,
    pub files_post: usize,
    /// Any involved file failed to parse on either side.
    pub degraded: bool,
}

impl CommitMetricDelta {
    pub fn zero(sha: impl Into<String>) -> CommitMetricDelta {
        CommitMetricDelta {
            sha: sha.into(),
            d_cc: 0.0,
            d_hv: 0.0,
            d_loc: 0.0,
            d_ccr: 0.0,
            d_cr: 0.0,
            d_scs: 0.0,
            d_afp: 0.0,
            d_apifc: 0.0,
            d_d: 0.0,
            d_adc: 0.0,
            d_ch: 0.0,
            d_cp_internal: 0.0,
            d_cp_external: 0.0,
            d_tc: 0.0,
            d_dq: 0.0,
            d_rep: 0.0,
            files_pre: 0,
            files_post: 0,
            degraded: false,
        }
    }

    /// Deltas in metric order (the fifteen file metrics then rep).
    pub fn as_array(&self) -> [f64; 16] {
        [
            self.d_cc,
            self.d_hv,
            self.d_loc,
            self.d_ccr,
            self.d_cr,
            self.d_scs,
            self.d_afp,
            self.d_apifc,
            self.d_d,
            self.d_adc,
            self.d_ch,
            self.d_cp_internal,
            self.d_cp_external,
            self.d_tc,
            self.d_dq,
            self.d_rep,
        ]
    }

    /// Column names matching [`CommitMetricDelta::as_array`], as used in the
    /// feature CSV.
    pub const COLUMNS: [&'static str; 16] = [
        "d_cc",
        "d_hv",
        "d_loc",
        "d_ccr",
        "d_cr",
        "d_scs",
        "d_afp",
        "d_apifc",
        "d_d",
        "d_adc",
        "d_ch",
        "d_cp_internal",
        "d_cp_external",
        "d_tc",
        "d_dq",
        "d_rep",
    ];
}

/// The ordered feature vector one attribute's classifier consumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QAFeatureVector {
    pub qa: QualityAttribute,
    pub values: Vec<f64>,
}

/// Aggregate per-file vectors for one side of a commit. An empty list yields
/// the neutral vector.
pub fn aggregate_file_metrics(vectors: &[MetricVector]) -> MetricVector {
    if vectors.is_empty() {
        return MetricVector::neutral();
    }
    let total_loc: u64 = vectors.iter().map(|v| v.loc).sum();
    // LoC-weighted mean of a ratio metric; uniform mean when no code at all.
    let ratio = |get: fn(&MetricVector) -> f64| -> f64 {
        if total_loc == 0 {
            vectors.iter().map(get).sum::<f64>() / vectors.len() as f64
        } else {
            vectors
                .iter()
                .map(|v| get(v) * v.loc as f64)
                .sum::<f64>()
                / total_loc as f64
        }
    };
    MetricVector {
        cc: vectors.iter().map(|v| v.cc).sum(),
        hv: vectors.iter().map(|v| v.hv).sum(),
        loc: total_loc,
        ccr: ratio(|v| v.ccr),
        cr: ratio(|v| v.cr),
        scs: ratio(|v| v.scs),
        afp: vectors.iter().map(|v| v.afp).sum(),
        apifc: ratio(|v| v.apifc),
        d: vectors.iter().map(|v| v.d).sum(),
        adc: ratio(|v| v.adc),
        ch: ratio(|v| v.ch),
        cp_internal: vectors.iter().map(|v| v.cp_internal).sum(),
        cp_external: vectors.iter().map(|v| v.cp_external).sum(),
        tc: vectors.iter().map(|v| v.tc).sum(),
        dq: ratio(|v| v.dq),
    }
}

/// Compute the commit's metric deltas from its snapshot pair and the full
/// pre/post trees (the trees feed the repo-level reproducibility score).
pub fn compute_deltas(
    sha: &str,
    pair: &SnapshotPair,
    catalog: &RuleCatalog,
    pre_tree: &RepoTree,
    post_tree: &RepoTree,
) -> CommitMetricDelta {
    let mut degraded = false;
    let mut side = |files: &std::collections::BTreeMap<String, String>,
                    other: &std::collections::BTreeMap<String, String>|
     -> Vec<MetricVector> {
        let mut paths: Vec<&String> = files.keys().chain(other.keys()).collect();
        paths.sort();
        paths.dedup();
        paths
            .iter()
            .map(|path| match files.get(*path) {
                Some(text) => {
                    let unit = parse_source(path.as_str(), text.as_str());
                    if !unit.parse_ok {
                        degraded = true;
                    }
                    compute_metric_vector(&unit, catalog)
                }
                None => MetricVector::neutral(),
            })
            .collect()
    };

    let pre_vectors = side(&pair.pre, &pair.post);
    let post_vectors = side(&pair.post, &pair.pre);
    let pre = aggregate_file_metrics(&pre_vectors);
    let post = aggregate_file_metrics(&post_vectors);

    let rep_pre = repo_reproducibility(pre_tree).rep;
    let rep_post = repo_reproducibility(post_tree).rep;

    CommitMetricDelta {
        sha: sha.to_string(),
        d_cc: post.cc as f64 - pre.cc as f64,
        d_hv: post.hv - pre.hv,
        d_loc: post.loc as f64 - pre.loc as f64,
        d_ccr: post.ccr - pre.ccr,
        d_cr: post.cr - pre.cr,
        d_scs: post.scs - pre.scs,
        d_afp: post.afp as f64 - pre.afp as f64,
        d_apifc: post.apifc - pre.apifc,
        d_d: post.d - pre.d,
        d_adc: post.adc - pre.adc,
        d_ch: post.ch - pre.ch,
        d_cp_internal: post.cp_internal as f64 - pre.cp_internal as f64,
        d_cp_external: post.cp_external as f64 - pre.cp_external as f64,
        d_tc: post.tc as f64 - pre.tc as f64,
        d_dq: post.dq - pre.dq,
        d_rep: rep_post - rep_pre,
        files_pre: pair.pre.len(),
        files_post: pair.post.len(),
        degraded,
    }
}

/// Assemble the attribute's feature vector from a commit delta.
///
/// UN: (ΔCC, ΔHV, ΔCCR, ΔCR, ΔSCS, ΔAPIFC, ΔAFP) — 7
/// RE: (ΔCC, ΔTC, ΔD, ΔSCS, ΔADC) — 5
/// MA: (ΔCC, ΔLoC, ΔCH, ΔCP) with ΔCP = ΔCPint + ΔCPext — 4
/// US: the seven UN deltas, then ΔDQ, ΔREP — 9
/// MO: (ΔCC, ΔCH, ΔCPexternal, ΔCPinternal) — 4
pub fn assemble_features(delta: &CommitMetricDelta, qa: QualityAttribute) -> QAFeatureVector {
    let un = vec![
        delta.d_cc,
        delta.d_hv,
        delta.d_ccr,
        delta.d_cr,
        delta.d_scs,
        delta.d_apifc,
        delta.d_afp,
    ];
    let values = match qa {
        QualityAttribute::Understandability => un,
        QualityAttribute::Reliability => vec![
            delta.d_cc,
            delta.d_tc,
            delta.d_d,
            delta.d_scs,
            delta.d_adc,
        ],
        QualityAttribute::Maintainability => vec![
            delta.d_cc,
            delta.d_loc,
            delta.d_ch,
            delta.d_cp_internal + delta.d_cp_external,
        ],
        QualityAttribute::Usability => {
            let mut v = un;
            v.push(delta.d_dq);
            v.push(delta.d_rep);
            v
        }
        QualityAttribute::Modularity => vec![
            delta.d_cc,
            delta.d_ch,
            delta.d_cp_external,
            delta.d_cp_internal,
        ],
    };
    QAFeatureVector { qa, values }
}

/// Write deltas as a feature CSV: `sha`, one `d_<metric>` column per delta,
/// and one (possibly empty) `label_<qa>` column per attribute.
pub fn write_feature_csv<W: std::io::Write>(
    writer: W,
    deltas: &[CommitMetricDelta],
    labels: Option<&std::collections::BTreeMap<String, std::collections::BTreeMap<QualityAttribute, bool>>>,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["sha".to_string()];
    header.extend(CommitMetricDelta::COLUMNS.iter().map(|s| s.to_string()));
    for qa in QualityAttribute::ALL {
        header.push(format!("label_{}", qa.code_lower()));
    }
    w.write_record(&header)?;
    for delta in deltas {
        let mut record = vec![delta.sha.clone()];
        record.extend(delta.as_array().iter().map(|v| format_float(*v)));
        for qa in QualityAttribute::ALL {
            let label = labels
                .and_then(|m| m.get(&delta.sha))
                .and_then(|per_qa| per_qa.get(&qa));
            record.push(match label {
                Some(true) => "enhanced".to_string(),
                Some(false) => "not_enhanced".to_string(),
                None => String::new(),
            });
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn format_float(v: f64) -> String {
    // shortest round-trip representation, stable across runs
    let mut buffer = ryu_format(v);
    if buffer.ends_with(".0") {
        buffer.truncate(buffer.len() - 2);
    }
    buffer
}

fn ryu_format(v: f64) -> String {
    let mut s = serde_json::to_string(&v).unwrap_or_else(|_| "0".to_string());
    if s == "-0.0" {
        s = "0".to_string();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn vector(loc: u64, cc: u64, scs: f64) -> MetricVector {
        MetricVector {
            cc,
            loc,
            scs,
            ..MetricVector::neutral()
        }
    }

    #[test]
    fn single_file_aggregate_is_identity() {
        let v = vector(10, 3, 0.5);
        assert_eq!(aggregate_file_metrics(std::slice::from_ref(&v)), v);
    }

    #[test]
    fn ratios_are_loc_weighted() {
        let a = vector(10, 3, 1.0);
        let b = vector(30, 4, 0.5);
        let agg = aggregate_file_metrics(&[a, b]);
        assert_eq!(agg.cc, 7);
        assert_eq!(agg.loc, 40);
        assert!((agg.scs - 0.625).abs() < 1e-12);
    }

    #[test]
    fn zero_loc_falls_back_to_uniform_mean() {
        let mut a = MetricVector::neutral();
        a.scs = 1.0;
        let mut b = MetricVector::neutral();
        b.scs = 0.0;
        let agg = aggregate_file_metrics(&[a, b]);
        assert!((agg.scs - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_list_is_neutral() {
        assert_eq!(aggregate_file_metrics(&[]), MetricVector::neutral());
    }

    fn pair(pre: &[(&str, &str)], post: &[(&str, &str)]) -> SnapshotPair {
        SnapshotPair {
            pre: pre
                .iter()
                .map(|(p, t)| (p.to_string(), t.to_string()))
                .collect(),
            post: post
                .iter()
                .map(|(p, t)| (p.to_string(), t.to_string()))
                .collect(),
        }
    }

    #[test]
    fn noop_commit_has_zero_deltas() {
        let text = "def f(a):\n    return a\n";
        let p = pair(&[("a.py", text)], &[("a.py", text)]);
        let catalog = RuleCatalog::default();
        let tree = RepoTree::default();
        let delta = compute_deltas("sha", &p, &catalog, &tree, &tree);
        assert_eq!(delta.as_array(), [0.0; 16]);
        assert!(!delta.degraded);
    }

    #[test]
    fn adding_one_if_moves_only_cc() {
        let before = "def f(a):\n    return a\n";
        let after = "def f(a):\n    if a:\n        pass\n    return a\n";
        let p = pair(&[("a.py", before)], &[("a.py", after)]);
        let catalog = RuleCatalog::default();
        let tree = RepoTree::default();
        let delta = compute_deltas("sha", &p, &catalog, &tree, &tree);
        assert_eq!(delta.d_cc, 1.0);
        assert_eq!(delta.d_tc, 0.0);
        assert_eq!(delta.d_afp, 0.0);
        assert_eq!(delta.d_cp_external, 0.0);
    }

    #[test]
    fn added_file_deltas_equal_its_count_metrics() {
        let text = "def f(a):\n    if a:\n        return 1\n    if not a:\n        return 2\n    return 0\n";
        let p = pair(&[], &[("new.py", text)]);
        let catalog = RuleCatalog::default();
        let tree = RepoTree::default();
        let delta = compute_deltas("sha", &p, &catalog, &tree, &tree);
        // cc: function(1) + if(1) + if(1) + `not` is not a decision point
        assert_eq!(delta.d_cc, 3.0);
        assert!(delta.d_loc > 0.0);
        assert_eq!(delta.files_pre, 0);
        assert_eq!(delta.files_post, 1);
    }

    #[test]
    fn swapping_pre_and_post_negates_every_delta() {
        let before = "import os\n\n\ndef f(a):\n    return os.path.join(a, a)\n";
        let after = "def f(a):\n    # joined manually.\n    return a + '/' + a\n";
        let forward = compute_deltas(
            "sha",
            &pair(&[("a.py", before)], &[("a.py", after)]),
            &RuleCatalog::default(),
            &RepoTree::default(),
            &RepoTree::default(),
        );
        let backward = compute_deltas(
            "sha",
            &pair(&[("a.py", after)], &[("a.py", before)]),
            &RuleCatalog::default(),
            &RepoTree::default(),
            &RepoTree::default(),
        );
        for (f, b) in forward.as_array().iter().zip(backward.as_array().iter()) {
            assert_eq!(*f, -*b);
        }
    }

    #[test]
    fn degraded_flag_is_set_by_parse_failures() {
        let p = pair(&[("a.py", "x = 1\n")], &[("a.py", "def broken(:\n")]);
        let delta = compute_deltas(
            "sha",
            &p,
            &RuleCatalog::default(),
            &RepoTree::default(),
            &RepoTree::default(),
        );
        assert!(delta.degraded);
    }

    #[test]
    fn rep_delta_reflects_tree_changes() {
        let pre = RepoTree {
            files: vec!["main.py".to_string()],
            py_texts: vec![("main.py".to_string(), "x = 1\n".to_string())],
        };
        let post = RepoTree {
            files: vec!["main.py".to_string(), "README.md".to_string()],
            py_texts: vec![("main.py".to_string(), "x = 1\n".to_string())],
        };
        let delta = compute_deltas(
            "sha",
            &pair(&[], &[]),
            &RuleCatalog::default(),
            &pre,
            &post,
        );
        assert!((delta.d_rep - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn feature_vectors_have_the_documented_arity_and_order() {
        let mut delta = CommitMetricDelta::zero("s");
        delta.d_cc = -2.0;
        delta.d_cp_external = -3.0;
        delta.d_cp_internal = 1.0;
        for qa in QualityAttribute::ALL {
            let features = assemble_features(&delta, qa);
            assert_eq!(features.values.len(), qa.feature_arity());
        }
        let un = assemble_features(&delta, QualityAttribute::Understandability);
        assert_eq!(un.values[0], -2.0);
        let mo = assemble_features(&delta, QualityAttribute::Modularity);
        assert_eq!(mo.values[2], -3.0);
        assert_eq!(mo.values[3], 1.0);
        let ma = assemble_features(&delta, QualityAttribute::Maintainability);
        assert_eq!(ma.values[3], -2.0); // ΔCP = internal + external
    }

    #[test]
    fn zero_delta_gives_zero_vectors() {
        let delta = CommitMetricDelta::zero("s");
        for qa in QualityAttribute::ALL {
            let features = assemble_features(&delta, qa);
            assert!(features.values.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn feature_csv_round_trips_through_headers() {
        let mut deltas = vec![CommitMetricDelta::zero("abc")];
        deltas[0].d_cc = -1.5;
        let mut labels = BTreeMap::new();
        labels.insert("abc".to_string(), {
            let mut per_qa = BTreeMap::new();
            per_qa.insert(QualityAttribute::Understandability, true);
            per_qa
        });
        let mut out = Vec::new();
        write_feature_csv(&mut out, &deltas, Some(&labels)).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("sha,d_cc,d_hv"));
        assert!(header.ends_with("label_un,label_re,label_ma,label_us,label_mo"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("abc,-1.5,"));
        assert!(row.contains("enhanced"));
    }
}
