//! Text-level counting: logical lines, comment lines, and the
//! comment-to-code ratio. Works on any input; the parse tree only refines
//! which lines belong to docstrings.

use std::collections::BTreeSet;

use super::SourceUnit;

/// `(loc, comment_lines, ccr)`.
///
/// `loc` counts non-blank lines that are not pure comment lines.
/// `comment_lines` counts lines whose first non-blank token starts a comment,
/// plus docstring lines. `ccr = comment_lines / max(loc, 1)`.
pub fn count_loc_and_ccr(unit: &SourceUnit) -> (u64, u64, f64) {
    let mut loc: u64 = 0;
    let mut comment_rows: BTreeSet<usize> = BTreeSet::new();

    for (row, line) in unit.text.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            comment_rows.insert(row);
        } else {
            loc += 1;
        }
    }

    for (_, span) in docstring_spans(unit) {
        for row in span {
            comment_rows.insert(row);
        }
    }

    let ccr = comment_rows.len() as f64 / loc.max(1) as f64;
    (loc, comment_rows.len() as u64, ccr)
}

/// Row ranges of every docstring (module, class, and function), with the
/// docstring text content. Empty when the unit did not parse.
pub(crate) fn docstring_spans(unit: &SourceUnit) -> Vec<(String, std::ops::RangeInclusive<usize>)> {
    let Some(tree) = unit.tree() else {
        return Vec::new();
    };
    let mut spans = Vec::new();
    let mut push = |node: tree_sitter::Node| {
        let content = docstring_content(node, &unit.text);
        spans.push((content, node.start_position().row..=node.end_position().row));
    };
    if let Some(doc) = super::entity::docstring_of(tree.root_node(), &unit.text) {
        push(doc);
    }
    super::walk_nodes(tree, |node| {
        if node.kind() == "function_definition" || node.kind() == "class_definition" {
            if let Some(body) = node.child_by_field_name("body") {
                if let Some(doc) = super::entity::docstring_of(body, &unit.text) {
                    push(doc);
                }
            }
        }
    });
    spans
}

/// Strip quotes and prefixes from a string node.
fn docstring_content(node: tree_sitter::Node, text: &str) -> String {
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        if child.kind() == "string_content" {
            return text[child.byte_range()].to_string();
        }
    }
    String::new()
}
