//! Scripted fixture repository used by the mining and pipeline test suites.
//!
//! Not part of the public API. Commit contents, authors, and timestamps are
//! fixed, so the repository (and every SHA in it) is bit-identical across
//! runs.

use std::collections::BTreeMap;
use std::path::Path;

use git2::{Oid, Repository, RepositoryInitOptions, Signature, Time};

/// What the fixture script produced, for asserting against.
pub struct FixtureRepo {
    /// Total commits including the side branch and the merge.
    pub commit_count: usize,
    /// First lines of the messages of the commits that must pass all three
    /// filters, in history order.
    pub expected_candidates: Vec<String>,
    /// Text of `loader.py` after the "Refactored data loader" commit.
    pub loader_post: String,
}

const LOADER_V0: &str = "import numpy as np\n\nnp.random.seed(0)\n\n\ndef load(path):\n    return np.loadtxt(path)\n";
const LOADER_V1: &str = "import numpy as np\n\nnp.random.seed(0)\n\n\ndef load(path):\n    \"\"\"Load a matrix from disk.\"\"\"\n    return np.loadtxt(path)\n";
const LOADER_V2: &str = "import numpy as np\n\nnp.random.seed(0)\n\n\ndef load(path):\n    \"\"\"Load a matrix from disk.\"\"\"\n    return np.loadtxt(path)\n\n\ndef load_many(paths):\n    return [load(p) for p in paths]\n";
const SIDE_PY: &str = "import numpy as np\n\n\ndef experiment():\n    return np.zeros(3)\n";

/// Build the scripted repository at `path` and return the expectations.
pub fn build_fixture_repo(path: &Path) -> FixtureRepo {
    let mut opts = RepositoryInitOptions::new();
    opts.initial_head("main");
    let repo = Repository::init_opts(path, &opts).expect("init fixture repo");
    let mut builder = FixtureBuilder::new(&repo);

    // 1. root commit: manifests plus the initial modules
    builder.set("README.md", "# fixture\n");
    builder.set("requirements.txt", "numpy\n");
    builder.set("loader.py", LOADER_V0);
    builder.set(
        "legacy.py",
        "import pandas as pd\n\n\ndef frame(rows):\n    return pd.DataFrame(rows)\n",
    );
    builder.commit_head("Initial commit\n");

    // 2. candidate: keyword stem + ml import + one file
    builder.set("loader.py", LOADER_V1);
    builder.commit_head("Refactored data loader\n");

    // 3. no keyword
    builder.set("loader.py", LOADER_V2);
    builder.commit_head("Add new feature\n");

    // 4. keyword but no ML import
    builder.set(
        "utils.py",
        "import os\n\n\ndef join(a, b):\n    return os.path.join(a, b)\n",
    );
    builder.commit_head("refactoring: split out helpers\n");

    // 5. candidate: added file importing torch
    builder.set(
        "trainer.py",
        "import torch\n\n\ndef step(model, batch):\n    return model(batch)\n",
    );
    let c5 = builder.commit_head("improve code quality in trainer\n");

    // 6. candidate: exactly five changed .py files (inclusive boundary)
    for i in 0..5 {
        builder.set(
            &format!("m{i}.py"),
            &format!("import numpy as np\n\n\ndef value{i}():\n    return np.float64({i})\n"),
        );
    }
    builder.commit_head("enhance code for five modules\n");

    // 7. six changed .py files: fails the count filter
    for i in 0..5 {
        builder.set(
            &format!("m{i}.py"),
            &format!("import numpy as np\n\n\ndef value{i}():\n    return np.float64({i} + 1)\n"),
        );
    }
    builder.set("utils.py", "import os\n\n\ndef join(a, b):\n    return os.path.join(str(a), str(b))\n");
    builder.commit_head("enhance code for six modules\n");

    // 8. candidate: deletion, ML import visible on the pre side
    builder.remove("legacy.py");
    builder.commit_head("refactor: drop legacy module\n");

    // 9. candidate: two .py files plus three .md files (only .py count)
    builder.set(
        "trainer.py",
        "import torch\n\n\ndef step(model, batch):\n    loss = model(batch)\n    return loss\n",
    );
    builder.set("m0.py", "import numpy as np\n\n\ndef value0():\n    return np.float64(10)\n");
    builder.set("notes0.md", "zero\n");
    builder.set("notes1.md", "one\n");
    builder.set("notes2.md", "two\n");
    let c9 = builder.commit_head("tweak the quality metric pipeline\n");

    // 10. side branch off commit 5
    let side_files = {
        let mut files = builder.files_at(c5);
        files.insert("side.py".to_string(), SIDE_PY.to_string());
        files
    };
    let side = builder.commit_detached("side experiments\n", &side_files, &[c5]);

    // 11. merge: diffed against the first parent (mainline)
    let merge_files = {
        let mut files = builder.files_at(c9);
        files.insert("side.py".to_string(), SIDE_PY.to_string());
        files
    };
    builder.merge_commit("Merge branch 'side'\n", &merge_files, &[c9, side]);

    // 12. candidate: from-import root match
    builder.set(
        "metrics_util.py",
        "from sklearn import metrics\n\n\ndef auc(y, p):\n    return metrics.roc_auc_score(y, p)\n",
    );
    builder.commit_head("refactors everywhere\n");

    // 13. candidate with an unparsable revision: the line-based import scan
    // still sees numpy, downstream metrics run degraded
    builder.set(
        "broken.py",
        "import numpy\n\ndef broken(:\n    return numpy.nan\n",
    );
    builder.commit_head("improve code in broken module\n");

    FixtureRepo {
        commit_count: 13,
        expected_candidates: vec![
            "Refactored data loader".to_string(),
            "improve code quality in trainer".to_string(),
            "enhance code for five modules".to_string(),
            "refactor: drop legacy module".to_string(),
            "tweak the quality metric pipeline".to_string(),
            "refactors everywhere".to_string(),
            "improve code in broken module".to_string(),
        ],
        loader_post: LOADER_V1.to_string(),
    }
}

struct FixtureBuilder<'r> {
    repo: &'r Repository,
    files: BTreeMap<String, String>,
    states: BTreeMap<Oid, BTreeMap<String, String>>,
    tick: i64,
}

impl<'r> FixtureBuilder<'r> {
    fn new(repo: &'r Repository) -> Self {
        FixtureBuilder {
            repo,
            files: BTreeMap::new(),
            states: BTreeMap::new(),
            tick: 1_600_000_000,
        }
    }

    fn set(&mut self, path: &str, text: &str) {
        self.files.insert(path.to_string(), text.to_string());
    }

    fn remove(&mut self, path: &str) {
        self.files.remove(path);
    }

    fn files_at(&self, oid: Oid) -> BTreeMap<String, String> {
        self.states[&oid].clone()
    }

    fn signature(&mut self) -> Signature<'static> {
        self.tick += 60;
        Signature::new(
            "Fixture Author",
            "fixture@example.com",
            &Time::new(self.tick, 0),
        )
        .expect("valid signature")
    }

    fn write_tree(&self, files: &BTreeMap<String, String>) -> Oid {
        let mut tb = self.repo.treebuilder(None).expect("treebuilder");
        for (path, text) in files {
            let blob = self.repo.blob(text.as_bytes()).expect("write blob");
            tb.insert(path, blob, 0o100644).expect("insert tree entry");
        }
        tb.write().expect("write tree")
    }

    /// Commit the current file state on HEAD.
    fn commit_head(&mut self, message: &str) -> Oid {
        let head_parent: Vec<Oid> = match self.repo.head() {
            Ok(head) => head.target().into_iter().collect(),
            Err(_) => Vec::new(),
        };
        let files = self.files.clone();
        self.raw_commit(message, &files, &head_parent, true)
    }

    /// Commit without moving HEAD (for side branches).
    fn commit_detached(
        &mut self,
        message: &str,
        files: &BTreeMap<String, String>,
        parents: &[Oid],
    ) -> Oid {
        self.raw_commit(message, files, parents, false)
    }

    /// Merge commit updating HEAD; `files` becomes the new mainline state.
    fn merge_commit(
        &mut self,
        message: &str,
        files: &BTreeMap<String, String>,
        parents: &[Oid],
    ) -> Oid {
        let oid = self.raw_commit(message, files, parents, true);
        self.files = files.clone();
        oid
    }

    fn raw_commit(
        &mut self,
        message: &str,
        files: &BTreeMap<String, String>,
        parents: &[Oid],
        update_head: bool,
    ) -> Oid {
        let tree_oid = self.write_tree(files);
        let tree = self.repo.find_tree(tree_oid).expect("find tree");
        let parent_commits: Vec<git2::Commit> = parents
            .iter()
            .map(|oid| self.repo.find_commit(*oid).expect("find parent"))
            .collect();
        let parent_refs: Vec<&git2::Commit> = parent_commits.iter().collect();
        let sig = self.signature();
        let oid = self
            .repo
            .commit(
                update_head.then_some("HEAD"),
                &sig,
                &sig,
                message,
                &tree,
                &parent_refs,
            )
            .expect("create commit");
        self.states.insert(oid, files.clone());
        oid
    }
}
