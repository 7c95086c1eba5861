//! Lite type-consistency checker. Three rules:
//!
//! (a) an annotated variable assigned a literal of a different primitive type
//!     (`x: int = "s"`),
//! (b) a function with a primitive return annotation returning a literal of a
//!     different primitive type (one count per offending `return`),
//! (c) a call to a same-file top-level function with an argument count
//!     outside the signature's arity range.
//!
//! Primitive literal typing is strict: `int`, `float`, `str`, and `bool` are
//! distinct (an `int` literal under a `float` annotation counts). Calls using
//! argument splats are skipped. This is deliberately not type inference; it
//! only needs to move consistently when annotations and usage drift apart.

use tree_sitter::Node;

use super::catalog::{LintFinding, Severity};
use super::SourceUnit;

/// Violation count. Degraded mode returns 0.
pub fn type_consistency(unit: &SourceUnit) -> u64 {
    type_findings(unit).len() as u64
}

/// One finding per violation, severity `error`.
pub fn type_findings(unit: &SourceUnit) -> Vec<LintFinding> {
    let Some(tree) = unit.tree() else {
        return Vec::new();
    };
    let text = unit.text.as_str();
    let mut findings = Vec::new();

    super::walk_nodes(tree, |node| match node.kind() {
        "assignment" => {
            let annotation = node
                .child_by_field_name("type")
                .and_then(|t| primitive_name(t, text));
            let value_type = node
                .child_by_field_name("right")
                .and_then(literal_primitive);
            if let (Some(ann), Some(lit)) = (annotation, value_type) {
                if ann != lit {
                    findings.push(LintFinding::new(
                        "TC-LITERAL",
                        Severity::Error,
                        node.start_position().row + 1,
                        format!("annotated {ann} but assigned a {lit} literal"),
                    ));
                }
            }
        }
        "function_definition" => {
            let Some(ret) = node
                .child_by_field_name("return_type")
                .and_then(|t| primitive_name(t, text))
            else {
                return;
            };
            if let Some(body) = node.child_by_field_name("body") {
                check_returns(body, ret, text, &mut findings);
            }
        }
        _ => {}
    });

    check_arities(unit, &mut findings);
    findings.sort_by(|a, b| (a.line, &a.rule_id).cmp(&(b.line, &b.rule_id)));
    findings
}

/// Walk a function body looking for `return <literal>`, without descending
/// into nested definitions (their own annotations govern them).
fn check_returns(node: Node, expected: &'static str, text: &str, findings: &mut Vec<LintFinding>) {
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        match child.kind() {
            "function_definition" | "class_definition" | "lambda" => continue,
            "return_statement" => {
                let value = child.named_child(0);
                if let Some(lit) = value.and_then(literal_primitive) {
                    if lit != expected {
                        findings.push(LintFinding::new(
                            "TC-RETURN",
                            Severity::Error,
                            child.start_position().row + 1,
                            format!("declared -> {expected} but returns a {lit} literal"),
                        ));
                    }
                }
            }
            _ => check_returns(child, expected, text, findings),
        }
    }
}

fn check_arities(unit: &SourceUnit, findings: &mut Vec<LintFinding>) {
    let index = unit.entity_index();
    let top_level: Vec<_> = index
        .functions
        .iter()
        .filter(|f| f.is_top_level && !f.is_method)
        .collect();
    for call in &index.call_sites {
        if call.has_splat {
            continue;
        }
        let Some(path) = call.callee_path.as_deref() else {
            continue;
        };
        if path.contains('.') {
            continue;
        }
        let Some(function) = top_level.iter().find(|f| f.name == path) else {
            continue;
        };
        let (min, max) = function.arity_range();
        let given = call.total_args();
        let too_many = max.map(|m| given > m).unwrap_or(false);
        if given < min || too_many {
            let bound = max.map(|m| m.to_string()).unwrap_or_else(|| "*".to_string());
            findings.push(LintFinding::new(
                "TC-ARITY",
                Severity::Error,
                call.line,
                format!("{path}() takes {min}..{bound} arguments but {given} given"),
            ));
        }
    }
}

fn primitive_name(type_node: Node, text: &str) -> Option<&'static str> {
    let inner = if type_node.kind() == "type" {
        type_node.named_child(0)?
    } else {
        type_node
    };
    if inner.kind() != "identifier" {
        return None;
    }
    match &text[inner.byte_range()] {
        "int" => Some("int"),
        "float" => Some("float"),
        "str" => Some("str"),
        "bool" => Some("bool"),
        _ => None,
    }
}

fn literal_primitive(value: Node) -> Option<&'static str> {
    match value.kind() {
        "integer" => Some("int"),
        "float" => Some("float"),
        "string" => Some("str"),
        "true" | "false" => Some("bool"),
        _ => None,
    }
}
