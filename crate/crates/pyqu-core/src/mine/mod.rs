//! Commit mining: walk a git repository's history, apply the three commit
//! filters (keyword, ML import, file count), and extract pre/post file
//! snapshots plus repo-level reproducibility scores.

mod filters;
mod reproducibility;

pub use filters::{file_count_filter, keyword_filter, ml_import_filter, FilterConfig};
pub use reproducibility::{repo_reproducibility, RepoReproducibility, RepoTree};

use std::collections::BTreeMap;
use std::path::Path;

use git2::{Delta, DiffOptions, Oid, Repository, Sort};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MineError {
    #[error("cannot open repository at {path}: {source}")]
    OpenRepo {
        path: String,
        source: git2::Error,
    },
    #[error("cannot resolve revision range {range:?}: {source}")]
    BadRange {
        range: String,
        source: git2::Error,
    },
    #[error("git operation failed: {0}")]
    Git(#[from] git2::Error),
}

/// How a file changed in a commit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChangeKind {
    Added,
    Modified,
    Deleted,
}

/// One changed Python file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangedFile {
    pub path: String,
    pub kind: ChangeKind,
}

/// One mined commit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitRecord {
    pub sha: String,
    pub message: String,
    /// Author time as a UTC unix timestamp.
    pub author_time: i64,
    /// Changed `.py` files relative to the first parent (empty tree for root
    /// commits).
    pub changed_py_files: Vec<ChangedFile>,
    pub parent_sha: Option<String>,
}

/// Pre/post texts of a commit's changed Python files. Added files are absent
/// from `pre`, deleted files absent from `post`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotPair {
    pub pre: BTreeMap<String, String>,
    pub post: BTreeMap<String, String>,
}

/// A readable repository handle for mining.
pub struct MinedRepo {
    repo: Repository,
}

impl MinedRepo {
    pub fn open(path: &Path) -> Result<MinedRepo, MineError> {
        let repo = Repository::open(path).map_err(|source| MineError::OpenRepo {
            path: path.display().to_string(),
            source,
        })?;
        Ok(MinedRepo { repo })
    }

    /// Walk history in topological order (parents before children), starting
    /// from HEAD or restricted to a revspec range like `a..b`.
    ///
    /// Merge commits are diffed against their first parent. Commits whose
    /// objects cannot be read are skipped with a logged warning. An empty or
    /// unborn repository yields an empty list.
    pub fn walk_history(&self, range: Option<&str>) -> Result<Vec<CommitRecord>, MineError> {
        let mut walk = self.repo.revwalk()?;
        walk.set_sorting(Sort::TOPOLOGICAL | Sort::REVERSE)?;
        match range {
            Some(spec) => {
                walk.push_range(spec).map_err(|source| MineError::BadRange {
                    range: spec.to_string(),
                    source,
                })?;
            }
            None => {
                match self.repo.head() {
                    Ok(head) => {
                        if let Some(target) = head.target() {
                            walk.push(target)?;
                        }
                    }
                    // Unborn branch or empty repository: nothing to walk.
                    Err(_) => return Ok(Vec::new()),
                }
            }
        }
        let mut records = Vec::new();
        for oid in walk {
            let oid = match oid {
                Ok(oid) => oid,
                Err(err) => {
                    log::warn!("skipping unreadable object during walk: {err}");
                    continue;
                }
            };
            match self.commit_record(oid) {
                Ok(record) => records.push(record),
                Err(err) => {
                    log::warn!("skipping corrupt commit {oid}: {err}");
                }
            }
        }
        Ok(records)
    }

    fn commit_record(&self, oid: Oid) -> Result<CommitRecord, git2::Error> {
        let commit = self.repo.find_commit(oid)?;
        let parent = commit.parent(0).ok();
        let parent_tree = parent.as_ref().map(|p| p.tree()).transpose()?;
        let tree = commit.tree()?;
        let mut opts = DiffOptions::new();
        let diff =
            self.repo
                .diff_tree_to_tree(parent_tree.as_ref(), Some(&tree), Some(&mut opts))?;
        let mut changed_py_files = Vec::new();
        for delta in diff.deltas() {
            let kind = match delta.status() {
                Delta::Added => ChangeKind::Added,
                Delta::Deleted => ChangeKind::Deleted,
                Delta::Modified | Delta::Typechange => ChangeKind::Modified,
                _ => continue,
            };
            let path = match kind {
                ChangeKind::Deleted => delta.old_file().path(),
                _ => delta.new_file().path(),
            };
            let Some(path) = path else { continue };
            if path.extension().map(|e| e == "py").unwrap_or(false) {
                changed_py_files.push(ChangedFile {
                    path: path.to_string_lossy().into_owned(),
                    kind,
                });
            }
        }
        changed_py_files.sort_by(|a, b| a.path.cmp(&b.path));
        let message = commit.message().unwrap_or("").to_string();
        let author_time = commit.author().when().seconds();
        let parent_sha = parent.as_ref().map(|p| p.id().to_string());
        Ok(CommitRecord {
            sha: oid.to_string(),
            message,
            author_time,
            changed_py_files,
            parent_sha,
        })
    }

    /// Extract pre/post texts for the record's changed files. A missing blob
    /// drops the file from the pair with a warning.
    pub fn snapshot_pair(&self, record: &CommitRecord) -> Result<SnapshotPair, MineError> {
        let commit = self.repo.find_commit(Oid::from_str(&record.sha)?)?;
        let tree = commit.tree()?;
        let parent_tree = commit.parent(0).ok().map(|p| p.tree()).transpose()?;

        let mut pair = SnapshotPair::default();
        for file in &record.changed_py_files {
            let pre = match file.kind {
                ChangeKind::Added => None,
                _ => Some(read_blob(&self.repo, parent_tree.as_ref(), &file.path)),
            };
            let post = match file.kind {
                ChangeKind::Deleted => None,
                _ => Some(read_blob(&self.repo, Some(&tree), &file.path)),
            };
            match (pre, post) {
                (Some(Err(err)), _) | (_, Some(Err(err))) => {
                    log::warn!(
                        "dropping {} from snapshot pair of {}: {err}",
                        file.path,
                        record.sha
                    );
                }
                (pre, post) => {
                    if let Some(Ok(text)) = pre {
                        pair.pre.insert(file.path.clone(), text);
                    }
                    if let Some(Ok(text)) = post {
                        pair.post.insert(file.path.clone(), text);
                    }
                }
            }
        }
        Ok(pair)
    }

    /// Full-tree listing at a commit, with `.py` texts loaded, for the
    /// reproducibility score. `None` stands for the empty tree (pre side of a
    /// root commit).
    pub fn tree_at(&self, sha: Option<&str>) -> Result<RepoTree, MineError> {
        let Some(sha) = sha else {
            return Ok(RepoTree::default());
        };
        let commit = self.repo.find_commit(Oid::from_str(sha)?)?;
        let tree = commit.tree()?;
        let mut files = Vec::new();
        let mut py_texts = Vec::new();
        tree.walk(git2::TreeWalkMode::PreOrder, |dir, entry| {
            if entry.kind() == Some(git2::ObjectType::Blob) {
                let path = format!("{dir}{}", entry.name().unwrap_or(""));
                if path.ends_with(".py") {
                    if let Ok(object) = entry.to_object(&self.repo) {
                        if let Some(blob) = object.as_blob() {
                            py_texts.push((
                                path.clone(),
                                String::from_utf8_lossy(blob.content()).into_owned(),
                            ));
                        }
                    }
                }
                files.push(path);
            }
            git2::TreeWalkResult::Ok
        })?;
        Ok(RepoTree { files, py_texts })
    }
}

fn read_blob(
    repo: &Repository,
    tree: Option<&git2::Tree>,
    path: &str,
) -> Result<String, git2::Error> {
    let tree = tree.ok_or_else(|| {
        git2::Error::from_str("no parent tree (root commit) while reading pre-side blob")
    })?;
    let entry = tree.get_path(Path::new(path))?;
    let object = entry.to_object(repo)?;
    let blob = object
        .as_blob()
        .ok_or_else(|| git2::Error::from_str("tree entry is not a blob"))?;
    Ok(String::from_utf8_lossy(blob.content()).into_owned())
}

/// Verdict of the three filters for one commit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterVerdicts {
    pub keyword: bool,
    pub ml_import: bool,
    pub file_count: bool,
}

impl FilterVerdicts {
    /// A commit enters the candidate set iff all three filters pass.
    pub fn candidate(&self) -> bool {
        self.keyword && self.ml_import && self.file_count
    }
}

/// Apply all three filters to one commit.
pub fn apply_filters(
    record: &CommitRecord,
    snapshots: &SnapshotPair,
    config: &FilterConfig,
) -> FilterVerdicts {
    FilterVerdicts {
        keyword: keyword_filter(record, config),
        ml_import: ml_import_filter(record, snapshots, config),
        file_count: file_count_filter(record, config),
    }
}
