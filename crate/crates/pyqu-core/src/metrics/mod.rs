//! File-level quality metrics for Python source.
//!
//! A [`SourceUnit`] wraps one file's text plus its parse tree and entity
//! index. [`compute_metric_vector`] derives the full fifteen-metric
//! [`MetricVector`]; the per-metric functions are public so each can be
//! exercised and tested on its own.
//!
//! Every operation is total: syntactically invalid source yields the
//! documented degraded value for tree-dependent metrics, never an error, and
//! the text-level metrics keep working on any input. All functions are pure,
//! so units are safe to share across worker threads.

mod advanced;
mod api;
pub mod catalog;
mod complexity;
mod entity;
mod halstead;
mod readability;
mod structure;
mod style;
mod text;
mod typecheck;

pub use advanced::advanced_feature_penalty;
pub use api::api_framework_conformance;
pub use catalog::{
    defect_score, ApiPattern, ApiRule, LintFinding, RuleCatalog, Severity, SeverityWeights,
};
pub use complexity::cyclomatic_complexity;
pub use entity::{CallSite, ClassInfo, EntityIndex, FunctionInfo, ImportInfo, ParamInfo};
pub use halstead::halstead_volume;
pub use readability::comment_readability;
pub use structure::{annotation_doc_consistency, cohesion, coupling, docstring_quality};
pub use style::style_conformance;
pub use text::count_loc_and_ccr;
pub use typecheck::type_consistency;

use serde::{Deserialize, Serialize};
use tree_sitter::{Parser, Tree};

/// One parsed Python source file.
///
/// Immutable after construction; the tree and entity index are computed once
/// at parse time.
pub struct SourceUnit {
    /// Relative path of the file, as given to [`parse_source`].
    pub path: String,
    /// Raw source text (invalid UTF-8 bytes replaced at read time).
    pub text: String,
    /// True iff the text is syntactically valid Python.
    pub parse_ok: bool,
    tree: Option<Tree>,
    index: EntityIndex,
}

impl SourceUnit {
    /// Entity index derived from the parse tree (empty when parsing failed).
    pub fn entity_index(&self) -> &EntityIndex {
        &self.index
    }

    /// The parse tree, present whenever the source was syntactically valid.
    pub(crate) fn tree(&self) -> Option<&Tree> {
        if self.parse_ok {
            self.tree.as_ref()
        } else {
            None
        }
    }
}

impl std::fmt::Debug for SourceUnit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SourceUnit")
            .field("path", &self.path)
            .field("parse_ok", &self.parse_ok)
            .field("bytes", &self.text.len())
            .finish()
    }
}

/// Parse Python source text. Never fails: syntax errors produce a unit with
/// `parse_ok == false` on which tree-dependent metrics return their degraded
/// values.
pub fn parse_source(path: impl Into<String>, text: impl Into<String>) -> SourceUnit {
    let path = path.into();
    let text = text.into();
    let mut parser = Parser::new();
    parser
        .set_language(&tree_sitter_python::LANGUAGE.into())
        .expect("python grammar is compatible with the linked tree-sitter");
    let tree = parser.parse(&text, None);
    let parse_ok = tree
        .as_ref()
        .map(|t| !t.root_node().has_error())
        .unwrap_or(false);
    let index = if parse_ok {
        EntityIndex::from_tree(tree.as_ref().expect("tree present when parse_ok"), &text)
    } else {
        EntityIndex::default()
    };
    SourceUnit {
        path,
        text,
        parse_ok,
        tree,
        index,
    }
}

/// Read and parse a file from disk, replacing invalid UTF-8 bytes.
pub fn parse_file(path: &std::path::Path) -> std::io::Result<SourceUnit> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8_lossy(&bytes).into_owned();
    Ok(parse_source(path.to_string_lossy(), text))
}

/// The fifteen file-level metric values.
///
/// Serializes to a flat JSON object with exactly these keys in this order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricVector {
    /// Cyclomatic complexity summed over all functions.
    pub cc: u64,
    /// Halstead volume in bits.
    pub hv: f64,
    /// Logical lines of code.
    pub loc: u64,
    /// Comment-to-code ratio.
    pub ccr: f64,
    /// Flesch Reading Ease of the comment text.
    pub cr: f64,
    /// Style conformance score in [0, 1].
    pub scs: f64,
    /// Advanced-feature penalty count.
    pub afp: u64,
    /// API/framework conformance in [0, 1].
    pub apifc: f64,
    /// Severity-weighted defect score.
    pub d: f64,
    /// Annotation/docstring consistency in [0, 1].
    pub adc: f64,
    /// Class cohesion in [0, 1].
    pub ch: f64,
    /// References between same-file top-level entities.
    pub cp_internal: u64,
    /// Imports plus references rooted at imported names.
    pub cp_external: u64,
    /// Type-consistency violation count.
    pub tc: u64,
    /// Documented-entity ratio in [0, 1].
    pub dq: f64,
}

impl MetricVector {
    /// The vector an empty source unit produces, and the missing-side stand-in
    /// when a commit adds or deletes a file.
    pub fn neutral() -> MetricVector {
        MetricVector {
            cc: 0,
            hv: 0.0,
            loc: 0,
            ccr: 0.0,
            cr: 0.0,
            scs: 1.0,
            afp: 0,
            apifc: 1.0,
            d: 0.0,
            adc: 0.0,
            ch: 1.0,
            cp_internal: 0,
            cp_external: 0,
            tc: 0,
            dq: 0.0,
        }
    }
}

/// Compute the full metric vector for one unit. Deterministic for fixed
/// `(text, catalog)`.
pub fn compute_metric_vector(unit: &SourceUnit, catalog: &RuleCatalog) -> MetricVector {
    let (loc, _comment_lines, ccr) = count_loc_and_ccr(unit);
    let (cp_internal, cp_external) = coupling(unit);
    MetricVector {
        cc: cyclomatic_complexity(unit),
        hv: halstead_volume(unit),
        loc,
        ccr,
        cr: comment_readability(unit),
        scs: style_conformance(unit, catalog),
        afp: advanced_feature_penalty(unit, catalog),
        apifc: api_framework_conformance(unit, catalog),
        d: defect_score(unit, catalog),
        adc: annotation_doc_consistency(unit),
        ch: cohesion(unit),
        cp_internal,
        cp_external,
        tc: type_consistency(unit),
        dq: docstring_quality(unit),
    }
}

/// Walk every node of a tree in document order, calling `f` on each.
/// Children of `string` and `comment` nodes are not visited.
pub(crate) fn walk_nodes<'t>(tree: &'t Tree, mut f: impl FnMut(tree_sitter::Node<'t>)) {
    let mut cursor = tree.walk();
    let mut done = false;
    while !done {
        let node = cursor.node();
        f(node);
        let descend = node.kind() != "string" && node.kind() != "comment";
        if descend && cursor.goto_first_child() {
            continue;
        }
        loop {
            if cursor.goto_next_sibling() {
                break;
            }
            if !cursor.goto_parent() {
                done = true;
                break;
            }
        }
    }
}
