//! The three commit filters. Pure predicates on the record and its
//! snapshots, so they can run in any order.

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{ChangeKind, CommitRecord, SnapshotPair};

/// Filter configuration with the standard defaults baked in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterConfig {
    /// Root keywords; single words get suffix expansion `(s|ed|ing)?`,
    /// multi-word phrases match literally. Case-insensitive, whole-word.
    pub keywords: Vec<String>,
    /// Import roots that mark a file as ML-related.
    pub ml_libraries: Vec<String>,
    /// Maximum number of changed `.py` files.
    pub max_py_files: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            keywords: [
                "refactor",
                "enhance code",
                "improve code",
                "code quality",
                "quality metric",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            ml_libraries: ["keras", "torch", "tensorflow", "sklearn", "numpy", "pandas"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            max_py_files: 5,
        }
    }
}

impl FilterConfig {
    /// One regex per keyword root.
    pub fn keyword_regexes(&self) -> Vec<Regex> {
        self.keywords
            .iter()
            .map(|root| {
                let pattern = if root.split_whitespace().count() > 1 {
                    let escaped = root
                        .split_whitespace()
                        .map(regex::escape)
                        .collect::<Vec<_>>()
                        .join(r"\s+");
                    format!(r"(?i)\b{escaped}\b")
                } else {
                    format!(r"(?i)\b{}(s|ed|ing)?\b", regex::escape(root))
                };
                Regex::new(&pattern).expect("keyword pattern is valid")
            })
            .collect()
    }
}

/// True iff the commit message matches any root keyword.
pub fn keyword_filter(record: &CommitRecord, config: &FilterConfig) -> bool {
    config
        .keyword_regexes()
        .iter()
        .any(|re| re.is_match(&record.message))
}

/// True iff at least one changed file (post side; pre side for deletions)
/// imports any configured ML library root.
///
/// Import scanning is line-based so unparsable revisions still match: the
/// root is the first dotted component of `import X` and any dotted component
/// of the module path in `from X import Y`.
pub fn ml_import_filter(
    record: &CommitRecord,
    snapshots: &SnapshotPair,
    config: &FilterConfig,
) -> bool {
    record.changed_py_files.iter().any(|file| {
        let text = match file.kind {
            ChangeKind::Deleted => snapshots.pre.get(&file.path),
            _ => snapshots.post.get(&file.path),
        };
        text.map(|t| imports_any_root(t, &config.ml_libraries))
            .unwrap_or(false)
    })
}

/// True iff the commit touches at most `max_py_files` Python files. Non-`.py`
/// files never count (records only carry `.py` paths).
pub fn file_count_filter(record: &CommitRecord, config: &FilterConfig) -> bool {
    record.changed_py_files.len() <= config.max_py_files
}

fn imports_any_root(text: &str, roots: &[String]) -> bool {
    for line in text.lines() {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("import ") {
            // `import a.b as c, d.e`
            for part in rest.split(',') {
                let path = part.trim().split_whitespace().next().unwrap_or("");
                let root = path.split('.').next().unwrap_or("");
                if roots.iter().any(|r| r == root) {
                    return true;
                }
            }
        } else if let Some(rest) = trimmed.strip_prefix("from ") {
            let module = rest.split_whitespace().next().unwrap_or("");
            if module
                .split('.')
                .any(|component| roots.iter().any(|r| r == component))
            {
                return true;
            }
        }
    }
    false
}
