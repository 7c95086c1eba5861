//! Style conformance.
//!
//! `SCS = max(0, 1 - violations / max(loc, 1))`.
//!
//! Shipped rules: E501 (line > 79 chars), W291 (trailing whitespace), W191
//! (tab indentation), E111 (statement indentation not a multiple of four),
//! E225 (missing space around a statement-level `=` or comparison), N802
//! (function/variable name not snake_case), N801 (class name not CapWords),
//! E702 (multiple statements per line via `;`).
//!
//! The first three are text rules and apply to any input; the rest need the
//! parse tree and are skipped in degraded mode.

use tree_sitter::Node;

use super::catalog::{LintFinding, RuleCatalog, Severity};
use super::SourceUnit;

/// Style conformance score in [0, 1].
pub fn style_conformance(unit: &SourceUnit, catalog: &RuleCatalog) -> f64 {
    let (loc, _, _) = super::text::count_loc_and_ccr(unit);
    let violations = style_findings(unit, catalog).len() as f64;
    (1.0 - violations / loc.max(1) as f64).clamp(0.0, 1.0)
}

/// All style findings, severity `convention`.
pub fn style_findings(unit: &SourceUnit, catalog: &RuleCatalog) -> Vec<LintFinding> {
    let mut findings = Vec::new();
    let text = unit.text.as_str();

    for (row, line) in text.lines().enumerate() {
        let lineno = row + 1;
        if catalog.style_rule_enabled("E501") && line.chars().count() > 79 {
            findings.push(LintFinding::new(
                "E501",
                Severity::Convention,
                lineno,
                "line longer than 79 characters",
            ));
        }
        if catalog.style_rule_enabled("W291") && !line.is_empty() && line.ends_with([' ', '\t']) {
            findings.push(LintFinding::new(
                "W291",
                Severity::Convention,
                lineno,
                "trailing whitespace",
            ));
        }
        if catalog.style_rule_enabled("W191") {
            let indent: String = line.chars().take_while(|c| c.is_whitespace()).collect();
            if indent.contains('\t') {
                findings.push(LintFinding::new(
                    "W191",
                    Severity::Convention,
                    lineno,
                    "indentation contains tabs",
                ));
            }
        }
    }

    if let Some(tree) = unit.tree() {
        // Indentation of each line (width, contains-tab), for distinguishing
        // line-leading statements from ones continuing after a semicolon and
        // for leaving tab-indented lines to W191.
        let indents: Vec<(usize, bool)> = text
            .lines()
            .map(|l| {
                let indent: Vec<char> =
                    l.chars().take_while(|c| *c == ' ' || *c == '\t').collect();
                (indent.len(), indent.contains(&'\t'))
            })
            .collect();
        tree_findings(tree, text, &indents, catalog, &mut findings);
    }
    findings.sort_by(|a, b| (a.line, &a.rule_id).cmp(&(b.line, &b.rule_id)));
    findings
}

fn tree_findings(
    tree: &tree_sitter::Tree,
    text: &str,
    indents: &[(usize, bool)],
    catalog: &RuleCatalog,
    findings: &mut Vec<LintFinding>,
) {
    super::walk_nodes(tree, |node| {
        let lineno = node.start_position().row + 1;
        if catalog.style_rule_enabled("E111") && starts_its_line(node, indents) && is_statement(node)
        {
            if node.start_position().column % 4 != 0 {
                findings.push(LintFinding::new(
                    "E111",
                    Severity::Convention,
                    lineno,
                    "indentation is not a multiple of four",
                ));
            }
        }
        match node.kind() {
            "assignment" | "augmented_assignment" | "comparison_operator" => {
                if catalog.style_rule_enabled("E225") {
                    check_operator_spacing(node, text, findings);
                }
                if catalog.style_rule_enabled("N802") && node.kind() != "comparison_operator" {
                    if let Some(left) = node.child_by_field_name("left") {
                        check_target_names(left, text, findings);
                    }
                }
            }
            "function_definition" => {
                if catalog.style_rule_enabled("N802") {
                    if let Some(name) = node.child_by_field_name("name") {
                        let n = &text[name.byte_range()];
                        if !is_snake_case(n) {
                            findings.push(LintFinding::new(
                                "N802",
                                Severity::Convention,
                                lineno,
                                format!("function name {n:?} is not snake_case"),
                            ));
                        }
                    }
                }
            }
            "class_definition" => {
                if catalog.style_rule_enabled("N801") {
                    if let Some(name) = node.child_by_field_name("name") {
                        let n = &text[name.byte_range()];
                        if !is_cap_words(n) {
                            findings.push(LintFinding::new(
                                "N801",
                                Severity::Convention,
                                lineno,
                                format!("class name {n:?} is not CapWords"),
                            ));
                        }
                    }
                }
            }
            _ => {}
        }
        if catalog.style_rule_enabled("E702") && !node.is_named() && &text[node.byte_range()] == ";"
        {
            findings.push(LintFinding::new(
                "E702",
                Severity::Convention,
                lineno,
                "multiple statements on one line (semicolon)",
            ));
        }
    });
}

fn is_statement(node: Node) -> bool {
    let Some(parent) = node.parent() else {
        return false;
    };
    node.is_named()
        && node.kind() != "comment"
        && (parent.kind() == "module" || parent.kind() == "block")
}

fn starts_its_line(node: Node, indents: &[(usize, bool)]) -> bool {
    let pos = node.start_position();
    indents
        .get(pos.row)
        .is_some_and(|(w, has_tab)| *w == pos.column && !has_tab)
}

fn check_operator_spacing(node: Node, text: &str, findings: &mut Vec<LintFinding>) {
    const OPS: [&str; 20] = [
        "=", "+=", "-=", "*=", "/=", "//=", "%=", "**=", "@=", "&=", "|=", "^=", ">>=", "<<=",
        "==", "!=", "<", ">", "<=", ">=",
    ];
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        if child.is_named() {
            continue;
        }
        let token = &text[child.byte_range()];
        if !OPS.contains(&token) {
            continue;
        }
        let before_ok =
            child.start_byte() > 0 && text.as_bytes().get(child.start_byte() - 1) == Some(&b' ');
        let after_ok = text.as_bytes().get(child.end_byte()) == Some(&b' ');
        if !(before_ok && after_ok) {
            findings.push(LintFinding::new(
                "E225",
                Severity::Convention,
                child.start_position().row + 1,
                format!("missing whitespace around {token:?}"),
            ));
        }
    }
}

fn check_target_names(target: Node, text: &str, findings: &mut Vec<LintFinding>) {
    match target.kind() {
        "identifier" => {
            let n = &text[target.byte_range()];
            if !is_snake_case(n) {
                findings.push(LintFinding::new(
                    "N802",
                    Severity::Convention,
                    target.start_position().row + 1,
                    format!("variable name {n:?} is not snake_case"),
                ));
            }
        }
        "pattern_list" | "tuple_pattern" => {
            let mut cursor = target.walk();
            for t in target.named_children(&mut cursor) {
                check_target_names(t, text, findings);
            }
        }
        _ => {}
    }
}

fn is_snake_case(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn is_cap_words(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::parse_source;

    fn scs(text: &str) -> f64 {
        style_conformance(&parse_source("t.py", text), &RuleCatalog::default())
    }

    fn rule_ids(text: &str) -> Vec<String> {
        style_findings(&parse_source("t.py", text), &RuleCatalog::default())
            .into_iter()
            .map(|f| f.rule_id)
            .collect()
    }

    #[test]
    fn clean_file_scores_one() {
        let text = (1..=10).map(|i| format!("v{i} = {i}\n")).collect::<String>();
        assert_eq!(scs(&text), 1.0);
    }

    #[test]
    fn one_violation_in_ten_lines_scores_point_nine() {
        let mut text = (1..=9).map(|i| format!("v{i} = {i}\n")).collect::<String>();
        text.push_str("v10 = 10 \n"); // trailing whitespace
        assert!((scs(&text) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn many_violations_clamp_to_zero() {
        let text = (1..=10)
            .map(|i| format!("V{i}=1;W{i}=2;X{i}=3 \n"))
            .collect::<String>();
        assert_eq!(scs(&text), 0.0);
    }

    #[test]
    fn each_rule_fires() {
        assert_eq!(rule_ids(&format!("x = \"{}\"\n", "a".repeat(90))), vec!["E501"]);
        assert_eq!(rule_ids("x = 1 \n"), vec!["W291"]);
        assert_eq!(rule_ids("if a:\n\tx = 1\n"), vec!["W191"]);
        assert_eq!(rule_ids("if a:\n  x = 1\n"), vec!["E111"]);
        assert_eq!(rule_ids("x=1\n"), vec!["E225"]);
        assert_eq!(rule_ids("if a<b:\n    pass\n"), vec!["E225"]);
        assert_eq!(rule_ids("Bad = 1\n"), vec!["N802"]);
        assert_eq!(rule_ids("def Bad():\n    pass\n"), vec!["N802"]);
        assert_eq!(rule_ids("class lower:\n    pass\n"), vec!["N801"]);
        assert_eq!(rule_ids("x = 1; y = 2\n"), vec!["E702"]);
    }

    #[test]
    fn statements_after_a_semicolon_are_not_indentation_errors() {
        // only the semicolon itself is flagged
        assert_eq!(rule_ids("x = 1; y = 2\n"), vec!["E702"]);
    }

    #[test]
    fn keyword_arguments_are_not_flagged() {
        assert!(rule_ids("f(a=1)\n").is_empty());
        assert!(rule_ids("def f(a=1):\n    pass\n").is_empty());
    }

    #[test]
    fn disabled_rules_do_not_fire() {
        let mut catalog = RuleCatalog::default();
        catalog.style_rules.retain(|r| r.id != "E225");
        let unit = parse_source("t.py", "x=1\n");
        assert!(style_findings(&unit, &catalog).is_empty());
    }

    #[test]
    fn degraded_mode_keeps_text_rules_only() {
        let unit = parse_source("t.py", "def broken(: \n");
        assert!(!unit.parse_ok);
        let ids = style_findings(&unit, &RuleCatalog::default())
            .into_iter()
            .map(|f| f.rule_id)
            .collect::<Vec<_>>();
        assert_eq!(ids, vec!["W291"]);
    }
}
