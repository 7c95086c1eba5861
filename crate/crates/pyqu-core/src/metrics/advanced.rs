//! Advanced-feature penalty: occurrences of constructs that hurt
//! readability. Shipped list: lambda expressions, `eval`/`exec` calls,
//! `global`/`nonlocal` statements, metaclass keyword arguments,
//! comprehensions nested to depth ≥ 2, walrus operators, and chained
//! decorators (two or more on one definition).

use tree_sitter::Node;

use super::catalog::{LintFinding, RuleCatalog, Severity};
use super::SourceUnit;

/// Count of advanced-feature occurrences. Degraded mode returns 0.
pub fn advanced_feature_penalty(unit: &SourceUnit, catalog: &RuleCatalog) -> u64 {
    advanced_feature_findings(unit, catalog).len() as u64
}

/// One finding per occurrence, severity `warning`.
pub fn advanced_feature_findings(unit: &SourceUnit, catalog: &RuleCatalog) -> Vec<LintFinding> {
    let Some(tree) = unit.tree() else {
        return Vec::new();
    };
    let text = unit.text.as_str();
    let mut findings = Vec::new();
    let mut push = |id: &str, node: Node, message: &str| {
        findings.push(LintFinding::new(
            id,
            Severity::Warning,
            node.start_position().row + 1,
            message,
        ));
    };

    super::walk_nodes(tree, |node| match node.kind() {
        // guard: the anonymous `lambda` keyword token shares the kind string
        "lambda" if node.is_named() && catalog.advanced_feature_enabled("lambda") => {
            push("AFP-LAMBDA", node, "lambda expression");
        }
        "call" if catalog.advanced_feature_enabled("dynamic_eval") => {
            if let Some(f) = node.child_by_field_name("function") {
                if f.kind() == "identifier" {
                    let name = &text[f.byte_range()];
                    if name == "eval" || name == "exec" {
                        push("AFP-EVAL", node, "dynamic eval/exec call");
                    }
                }
            }
        }
        "global_statement" | "nonlocal_statement"
            if catalog.advanced_feature_enabled("global_nonlocal") =>
        {
            push("AFP-GLOBAL", node, "global/nonlocal statement");
        }
        "class_definition" if catalog.advanced_feature_enabled("metaclass_argument") => {
            if let Some(args) = node.child_by_field_name("superclasses") {
                let mut cursor = args.walk();
                for arg in args.named_children(&mut cursor) {
                    if arg.kind() == "keyword_argument" {
                        let name = arg
                            .child_by_field_name("name")
                            .map(|n| &text[n.byte_range()]);
                        if name == Some("metaclass") {
                            push("AFP-METACLASS", arg, "metaclass keyword argument");
                        }
                    }
                }
            }
        }
        kind if is_comprehension(kind)
            && catalog.advanced_feature_enabled("nested_comprehension")
            && has_comprehension_ancestor(node) =>
        {
            push("AFP-NESTED-COMP", node, "comprehension nested to depth >= 2");
        }
        "named_expression" if catalog.advanced_feature_enabled("walrus") => {
            push("AFP-WALRUS", node, "walrus operator");
        }
        "decorated_definition" if catalog.advanced_feature_enabled("chained_decorators") => {
            let mut cursor = node.walk();
            let decorators = node
                .children(&mut cursor)
                .filter(|c| c.kind() == "decorator")
                .count();
            if decorators >= 2 {
                push("AFP-DECORATORS", node, "two or more chained decorators");
            }
        }
        _ => {}
    });
    findings
}

fn is_comprehension(kind: &str) -> bool {
    matches!(
        kind,
        "list_comprehension" | "set_comprehension" | "dictionary_comprehension"
            | "generator_expression"
    )
}

fn has_comprehension_ancestor(node: Node) -> bool {
    let mut current = node.parent();
    while let Some(n) = current {
        if is_comprehension(n.kind()) {
            return true;
        }
        current = n.parent();
    }
    false
}
