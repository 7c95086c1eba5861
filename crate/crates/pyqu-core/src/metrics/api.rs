//! API/framework conformance.
//!
//! `APIFC = 1 - violations / max(framework_call_sites, 1)`, clamped to
//! [0, 1]. A framework call site is a call whose callee path is rooted at a
//! name bound by importing one of the catalog's framework roots (`np.mean()`
//! after `import numpy as np`, `CrossEntropyLoss()` after
//! `from torch.nn import CrossEntropyLoss`). Files with no framework call
//! sites vacuously score 1.0.

use super::catalog::{ApiPattern, LintFinding, RuleCatalog, Severity};
use super::SourceUnit;

/// Conformance score in [0, 1]. Degraded mode returns 1.0.
pub fn api_framework_conformance(unit: &SourceUnit, catalog: &RuleCatalog) -> f64 {
    if unit.tree().is_none() {
        return 1.0;
    }
    let sites = framework_call_sites(unit, catalog);
    let violations = api_findings(unit, catalog).len() as f64;
    (1.0 - violations / (sites.max(1) as f64)).clamp(0.0, 1.0)
}

/// Number of calls rooted at a framework import.
pub fn framework_call_sites(unit: &SourceUnit, catalog: &RuleCatalog) -> u64 {
    let index = unit.entity_index();
    let framework_bindings = framework_bindings(unit, catalog);
    index
        .call_sites
        .iter()
        .filter(|c| {
            c.root()
                .map(|r| framework_bindings.iter().any(|b| b == r))
                .unwrap_or(false)
        })
        .count() as u64
}

/// One finding per API rule violation, severity `warning`.
pub fn api_findings(unit: &SourceUnit, catalog: &RuleCatalog) -> Vec<LintFinding> {
    let Some(tree) = unit.tree() else {
        return Vec::new();
    };
    let text = unit.text.as_str();
    let index = unit.entity_index();
    let framework_bindings = framework_bindings(unit, catalog);
    let is_framework_rooted = |root: Option<&str>| {
        root.map(|r| framework_bindings.iter().any(|b| b == r))
            .unwrap_or(false)
    };

    let mut findings = Vec::new();
    for rule in &catalog.api_rules {
        match &rule.pattern {
            ApiPattern::AttributeSubscript { attribute } => {
                super::walk_nodes(tree, |node| {
                    if node.kind() != "subscript" {
                        return;
                    }
                    let Some(value) = node.child_by_field_name("value") else {
                        return;
                    };
                    if value.kind() != "attribute" {
                        return;
                    }
                    let attr = value
                        .child_by_field_name("attribute")
                        .map(|a| &text[a.byte_range()]);
                    if attr == Some(attribute.as_str()) {
                        findings.push(LintFinding::new(
                            &rule.id,
                            Severity::Warning,
                            node.start_position().row + 1,
                            format!("subscript of .{attribute}; {}", rule.recommended),
                        ));
                    }
                });
            }
            ApiPattern::DeprecatedCall { name } => {
                for call in &index.call_sites {
                    if call.leaf() == Some(name.as_str()) && is_framework_rooted(call.root()) {
                        findings.push(LintFinding::new(
                            &rule.id,
                            Severity::Warning,
                            call.line,
                            format!("deprecated call {name}; {}", rule.recommended),
                        ));
                    }
                }
            }
            ApiPattern::SeedInLoop { name } => {
                for call in &index.call_sites {
                    if call.in_loop
                        && call.leaf() == Some(name.as_str())
                        && is_framework_rooted(call.root())
                    {
                        findings.push(LintFinding::new(
                            &rule.id,
                            Severity::Warning,
                            call.line,
                            format!("re-seeding inside a loop; {}", rule.recommended),
                        ));
                    }
                }
            }
        }
    }
    findings.sort_by(|a, b| (a.line, &a.rule_id).cmp(&(b.line, &b.rule_id)));
    findings
}

/// Local names bound by importing a framework root (`np` for
/// `import numpy as np`, `CrossEntropyLoss` for a torch from-import).
fn framework_bindings(unit: &SourceUnit, catalog: &RuleCatalog) -> Vec<String> {
    let mut bindings = Vec::new();
    for import in &unit.entity_index().imports {
        let module_root = import.module.split('.').next().unwrap_or("");
        if catalog.framework_roots.iter().any(|r| r == module_root) {
            bindings.extend(import.bound_names.iter().cloned());
        }
    }
    bindings
}
