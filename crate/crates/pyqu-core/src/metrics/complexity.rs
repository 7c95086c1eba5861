//! Cyclomatic complexity.
//!
//! Each function or method contributes `1 + decision points in its own body`
//! (nested definitions own their points). Module-level executable code
//! contributes one implicit function plus its decision points; a module whose
//! only statements are definitions and docstrings contributes nothing.
//!
//! Decision points: `if`, `elif`, `while`, `for`, except handlers, `assert`,
//! conditional expressions, each boolean `and`/`or` operator, each
//! comprehension `if` clause, and each `case` arm beyond the first.

use tree_sitter::Node;

use super::SourceUnit;

/// Summed decision complexity of the unit. Degraded mode (parse failure)
/// returns 0.
pub fn cyclomatic_complexity(unit: &SourceUnit) -> u64 {
    let Some(tree) = unit.tree() else { return 0 };

    let mut function_points: Vec<u64> = Vec::new();
    let mut module_points: u64 = 0;
    let mut module_has_code = false;

    // Map from function_definition node id to slot in function_points.
    let mut slots: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();

    super::walk_nodes(tree, |node| {
        if node.kind() == "function_definition" {
            slots.insert(node.id(), function_points.len());
            function_points.push(0);
        }
        if let Some(points) = decision_points(node) {
            match enclosing_function(node) {
                Some(id) => {
                    let slot = slots[&id];
                    function_points[slot] += points;
                }
                None => module_points += points,
            }
        }
        if is_module_level_code(node) {
            module_has_code = true;
        }
    });

    let mut total: u64 = function_points.iter().map(|p| 1 + p).sum();
    if module_has_code || module_points > 0 {
        total += 1 + module_points;
    }
    total
}

fn decision_points(node: Node) -> Option<u64> {
    match node.kind() {
        "if_statement" | "elif_clause" | "while_statement" | "for_statement"
        | "except_clause" | "except_group_clause" | "assert_statement"
        | "conditional_expression" | "boolean_operator" | "if_clause" => Some(1),
        "match_statement" => {
            let mut cursor = node.walk();
            let arms = node
                .child_by_field_name("body")
                .map(|b| {
                    b.children(&mut cursor)
                        .filter(|c| c.kind() == "case_clause")
                        .count() as u64
                })
                .unwrap_or(0);
            Some(arms.saturating_sub(1))
        }
        _ => None,
    }
}

/// Id of the nearest enclosing function definition, if any.
fn enclosing_function(node: Node) -> Option<usize> {
    let mut current = node.parent();
    while let Some(n) = current {
        if n.kind() == "function_definition" {
            return Some(n.id());
        }
        current = n.parent();
    }
    None
}

/// A statement at module level (direct child of the module) that is
/// executable code: not a definition and not the module docstring.
fn is_module_level_code(node: Node) -> bool {
    let Some(parent) = node.parent() else {
        return false;
    };
    if parent.kind() != "module" || !node.is_named() {
        return false;
    }
    match node.kind() {
        "function_definition" | "class_definition" | "decorated_definition" | "comment" => false,
        "expression_statement" => {
            // The module docstring is documentation, not code.
            let is_docstring = node
                .named_child(0)
                .map(|e| e.kind() == "string")
                .unwrap_or(false)
                && is_first_statement(node);
            !is_docstring
        }
        _ => true,
    }
}

fn is_first_statement(node: Node) -> bool {
    let Some(parent) = node.parent() else {
        return false;
    };
    let mut cursor = parent.walk();
    for child in parent.children(&mut cursor) {
        if child.kind() == "comment" {
            continue;
        }
        return child.id() == node.id();
    }
    false
}
