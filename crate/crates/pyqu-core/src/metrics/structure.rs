//! Structural metrics: annotation/docstring consistency, docstring quality,
//! class cohesion, and coupling.

use std::collections::HashSet;

use tree_sitter::Node;

use super::SourceUnit;

/// ADC: fraction of functions and classes that qualify. A function qualifies
/// with a docstring plus at least one parameter or return annotation; a
/// class qualifies with a docstring alone. Degraded mode returns 0.
pub fn annotation_doc_consistency(unit: &SourceUnit) -> f64 {
    if unit.tree().is_none() {
        return 0.0;
    }
    let index = unit.entity_index();
    let total = index.functions.len() + index.classes.len();
    let qualifying = index
        .functions
        .iter()
        .filter(|f| {
            f.has_docstring
                && (f.has_return_annotation || f.params.iter().any(|p| p.has_annotation))
        })
        .count()
        + index.classes.iter().filter(|c| c.has_docstring).count();
    qualifying as f64 / total.max(1) as f64
}

/// DQ: documented entities over total entities. The module itself is always
/// one entity, documented iff it has a docstring; every class and function is
/// one entity each. Degraded mode returns 0.
pub fn docstring_quality(unit: &SourceUnit) -> f64 {
    if unit.tree().is_none() {
        return 0.0;
    }
    let index = unit.entity_index();
    let total = 1 + index.functions.len() + index.classes.len();
    let documented = usize::from(index.module_docstring)
        + index.functions.iter().filter(|f| f.has_docstring).count()
        + index.classes.iter().filter(|c| c.has_docstring).count();
    documented as f64 / total as f64
}

/// CH: per class, the mean over methods of (fields the method accesses /
/// total fields); classes with no fields or no methods score 1.0 by
/// convention, as does a file without classes. Degraded mode returns 1.0.
pub fn cohesion(unit: &SourceUnit) -> f64 {
    let Some(tree) = unit.tree() else {
        return 1.0;
    };
    let text = unit.text.as_str();
    let mut class_scores: Vec<f64> = Vec::new();

    super::walk_nodes(tree, |node| {
        if node.kind() != "class_definition" {
            return;
        }
        class_scores.push(class_cohesion(node, text));
    });

    if class_scores.is_empty() {
        1.0
    } else {
        class_scores.iter().sum::<f64>() / class_scores.len() as f64
    }
}

fn class_cohesion(class_def: Node, text: &str) -> f64 {
    let Some(body) = class_def.child_by_field_name("body") else {
        return 1.0;
    };

    // Fields: receiver-attribute assignments in methods plus class-level
    // assignment targets (mirrors EntityIndex, recomputed here so nested
    // classes resolve against their own definition).
    let mut fields: HashSet<String> = HashSet::new();
    let mut methods: Vec<Node> = Vec::new();
    let mut cursor = body.walk();
    for stmt in body.children(&mut cursor) {
        let method = match stmt.kind() {
            "function_definition" => Some(stmt),
            "decorated_definition" => stmt
                .child_by_field_name("definition")
                .filter(|d| d.kind() == "function_definition"),
            _ => None,
        };
        if let Some(m) = method {
            methods.push(m);
        } else if stmt.kind() == "expression_statement" {
            if let Some(assign) = stmt.named_child(0).filter(|n| n.kind() == "assignment") {
                if let Some(left) = assign.child_by_field_name("left") {
                    if left.kind() == "identifier" {
                        fields.insert(text[left.byte_range()].to_string());
                    }
                }
            }
        }
    }
    for m in &methods {
        let receiver = super::entity::first_param_name(*m, text);
        if let (Some(receiver), Some(mbody)) = (receiver, m.child_by_field_name("body")) {
            collect_assigned_fields(mbody, text, &receiver, &mut fields);
        }
    }

    if fields.is_empty() || methods.is_empty() {
        return 1.0;
    }

    let total = fields.len() as f64;
    let mut ratio_sum = 0.0;
    for m in &methods {
        let receiver = super::entity::first_param_name(*m, text);
        let mut accessed: HashSet<String> = HashSet::new();
        if let (Some(receiver), Some(mbody)) = (receiver, m.child_by_field_name("body")) {
            collect_accessed_fields(mbody, text, &receiver, &fields, &mut accessed);
        }
        ratio_sum += accessed.len() as f64 / total;
    }
    ratio_sum / methods.len() as f64
}

fn collect_assigned_fields(node: Node, text: &str, receiver: &str, fields: &mut HashSet<String>) {
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        if child.kind() == "assignment" || child.kind() == "augmented_assignment" {
            if let Some(left) = child.child_by_field_name("left") {
                if let Some(field) = receiver_attribute(left, text, receiver) {
                    fields.insert(field);
                }
            }
        }
        collect_assigned_fields(child, text, receiver, fields);
    }
}

fn collect_accessed_fields(
    node: Node,
    text: &str,
    receiver: &str,
    fields: &HashSet<String>,
    accessed: &mut HashSet<String>,
) {
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        if child.kind() == "attribute" {
            if let Some(field) = receiver_attribute(child, text, receiver) {
                if fields.contains(&field) {
                    accessed.insert(field);
                }
            }
        }
        collect_accessed_fields(child, text, receiver, fields, accessed);
    }
}

fn receiver_attribute(node: Node, text: &str, receiver: &str) -> Option<String> {
    if node.kind() != "attribute" {
        return None;
    }
    let obj = node.child_by_field_name("object")?;
    let attr = node.child_by_field_name("attribute")?;
    if obj.kind() == "identifier" && &text[obj.byte_range()] == receiver {
        Some(text[attr.byte_range()].to_string())
    } else {
        None
    }
}

/// CP: `(internal, external)`. External counts import statements plus
/// maximal attribute chains rooted at an imported binding; internal counts
/// references inside one top-level entity's body to another top-level
/// entity's name. Degraded mode returns `(0, 0)`.
pub fn coupling(unit: &SourceUnit) -> (u64, u64) {
    let Some(tree) = unit.tree() else {
        return (0, 0);
    };
    let text = unit.text.as_str();
    let index = unit.entity_index();

    let bindings: HashSet<&str> = index.imported_bindings().into_iter().collect();
    let mut external = index.imports.len() as u64;

    super::walk_nodes(tree, |node| {
        if node.kind() != "attribute" {
            return;
        }
        // Only the outermost attribute of a chain counts.
        if node
            .parent()
            .map(|p| p.kind() == "attribute")
            .unwrap_or(false)
        {
            return;
        }
        if let Some(path) = super::entity::dotted_path(node, text) {
            let root = path.split('.').next().unwrap_or("");
            if bindings.contains(root) {
                external += 1;
            }
        }
    });

    // Internal: entity spans of top-level functions and classes.
    let mut entities: Vec<(String, (usize, usize))> = Vec::new();
    for f in index.functions.iter().filter(|f| f.is_top_level && !f.is_method) {
        entities.push((f.name.clone(), f.body_span));
    }
    for c in index.classes.iter().filter(|c| c.is_top_level) {
        entities.push((c.name.clone(), c.body_span));
    }

    let mut internal: u64 = 0;
    super::walk_nodes(tree, |node| {
        if node.kind() != "identifier" || !is_reference_position(node) {
            return;
        }
        let name = &text[node.byte_range()];
        let Some(target) = entities.iter().find(|(n, _)| n.as_str() == name) else {
            return;
        };
        let pos = node.start_byte();
        // Referenced from inside a *different* entity's span.
        let inside_other = entities
            .iter()
            .any(|(n, span)| n.as_str() != name && pos >= span.0 && pos < span.1);
        let inside_self = pos >= target.1 .0 && pos < target.1 .1;
        if inside_other && !inside_self {
            internal += 1;
        }
    });

    (internal, external)
}

/// An identifier used as a reference, as opposed to being the name in a
/// definition, parameter, attribute, keyword argument, or import.
fn is_reference_position(node: Node) -> bool {
    let Some(parent) = node.parent() else {
        return false;
    };
    match parent.kind() {
        "function_definition" | "class_definition" => {
            parent.child_by_field_name("name") != Some(node)
        }
        "attribute" => parent.child_by_field_name("attribute") != Some(node),
        "keyword_argument" => parent.child_by_field_name("name") != Some(node),
        "parameters" | "typed_parameter" | "default_parameter" | "typed_default_parameter"
        | "lambda_parameters" | "list_splat_pattern" | "dictionary_splat_pattern" => false,
        "dotted_name" | "aliased_import" | "import_prefix" | "relative_import" => false,
        _ => true,
    }
}
