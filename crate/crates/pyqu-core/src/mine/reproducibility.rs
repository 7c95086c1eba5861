//! Repo-level reproducibility score: dependency manifest, README, and
//! controlled randomness. Each satisfied component contributes 1/3; a repo
//! that never uses a randomness API counts the seeding component as
//! satisfied.

use serde::{Deserialize, Serialize};

/// Full repository listing at one commit: every blob path, plus the text of
/// every `.py` blob.
#[derive(Debug, Clone, Default)]
pub struct RepoTree {
    pub files: Vec<String>,
    pub py_texts: Vec<(String, String)>,
}

/// Tri-component reproducibility score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepoReproducibility {
    pub has_dependency_file: bool,
    pub has_readme: bool,
    /// `None` when no file uses a randomness API (not applicable, counted as
    /// satisfied), otherwise whether a standard seeding call exists anywhere.
    pub randomness_controlled: Option<bool>,
    /// `(components satisfied) / 3`, one of {0, 1/3, 2/3, 1}.
    pub rep: f64,
}

const DEPENDENCY_FILES: [&str; 4] = ["requirements.txt", "setup.py", "setup.cfg", "pyproject.toml"];

/// Calls that mark randomness as controlled.
const SEEDING_CALLS: [&str; 10] = [
    "random.seed",
    "np.random.seed",
    "numpy.random.seed",
    "torch.manual_seed",
    "torch.cuda.manual_seed",
    "torch.cuda.manual_seed_all",
    "tf.random.set_seed",
    "tf.set_random_seed",
    "tensorflow.random.set_seed",
    "keras.utils.set_random_seed",
];

/// Call prefixes that mark randomness as used.
const RANDOMNESS_USES: [&str; 8] = [
    "random.",
    "np.random.",
    "numpy.random.",
    "torch.rand",
    "torch.normal",
    "tf.random.",
    "tensorflow.random.",
    "keras.initializers.",
];

pub fn repo_reproducibility(tree: &RepoTree) -> RepoReproducibility {
    let has_dependency_file = tree.files.iter().any(|path| {
        is_root(path) && DEPENDENCY_FILES.iter().any(|d| path.eq_ignore_ascii_case(d))
    });
    let has_readme = tree
        .files
        .iter()
        .any(|path| is_root(path) && path.to_ascii_lowercase().starts_with("readme"));

    let uses_randomness = tree
        .py_texts
        .iter()
        .any(|(_, text)| text_calls_any(text, &RANDOMNESS_USES));
    let randomness_controlled = if uses_randomness {
        Some(
            tree.py_texts
                .iter()
                .any(|(_, text)| text_calls_seed(text)),
        )
    } else {
        None
    };

    let satisfied = u32::from(has_dependency_file)
        + u32::from(has_readme)
        + u32::from(randomness_controlled.unwrap_or(true));
    RepoReproducibility {
        has_dependency_file,
        has_readme,
        randomness_controlled,
        rep: f64::from(satisfied) / 3.0,
    }
}

fn is_root(path: &str) -> bool {
    !path.contains('/')
}

fn text_calls_any(text: &str, prefixes: &[&str]) -> bool {
    for line in text.lines() {
        let line = line.trim_start();
        if line.starts_with('#') {
            continue;
        }
        for prefix in prefixes {
            if let Some(idx) = line.find(prefix) {
                // whole-word start: preceded by start or a non-identifier char
                let at_word_start = idx == 0
                    || !line.as_bytes()[idx - 1].is_ascii_alphanumeric()
                        && line.as_bytes()[idx - 1] != b'_'
                        && line.as_bytes()[idx - 1] != b'.';
                if at_word_start {
                    return true;
                }
            }
        }
    }
    false
}

fn text_calls_seed(text: &str) -> bool {
    for line in text.lines() {
        let line = line.trim_start();
        if line.starts_with('#') {
            continue;
        }
        for call in SEEDING_CALLS {
            if let Some(idx) = line.find(call) {
                let at_word_start = idx == 0
                    || !line.as_bytes()[idx - 1].is_ascii_alphanumeric()
                        && line.as_bytes()[idx - 1] != b'_'
                        && line.as_bytes()[idx - 1] != b'.';
                let followed_by_call = line[idx + call.len()..].trim_start().starts_with('(');
                if at_word_start && followed_by_call {
                    return true;
                }
            }
        }
    }
    false
}
