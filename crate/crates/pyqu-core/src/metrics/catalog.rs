//! Rule catalog: style rules, advanced-feature list, API rules, and severity
//! weights. The shipped defaults are frozen so metric values are reproducible;
//! every list is configurable.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::SourceUnit;

/// Severity of a lint finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Convention,
    Warning,
    Error,
}

/// One flagged code issue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintFinding {
    pub rule_id: String,
    pub severity: Severity,
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

impl LintFinding {
    pub fn new(rule_id: &str, severity: Severity, line: usize, message: impl Into<String>) -> Self {
        LintFinding {
            rule_id: rule_id.to_string(),
            severity,
            line,
            message: message.into(),
        }
    }
}

/// Weight per severity. The mapping is total: every severity has a weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeverityWeights {
    pub convention: f64,
    pub warning: f64,
    pub error: f64,
}

impl SeverityWeights {
    pub fn weight(&self, severity: Severity) -> f64 {
        match severity {
            Severity::Convention => self.convention,
            Severity::Warning => self.warning,
            Severity::Error => self.error,
        }
    }
}

impl Default for SeverityWeights {
    fn default() -> Self {
        SeverityWeights {
            convention: 1.0,
            warning: 2.0,
            error: 5.0,
        }
    }
}

/// A style check description. The checker implementations live in
/// [`super::style`]; the catalog controls which are active.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StyleRule {
    pub id: String,
    pub description: String,
}

/// Matcher for one API conformance rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ApiPattern {
    /// Subscripting `<expr>.<attribute>[...]`, e.g. the `.data[0]` tensor idiom.
    AttributeSubscript { attribute: String },
    /// Calling a deprecated name; matches the last component of a call path
    /// rooted at a framework import.
    DeprecatedCall { name: String },
    /// Calling a seeding function inside a loop body; matches the last
    /// component of the call path.
    SeedInLoop { name: String },
}

impl ApiPattern {
    fn matcher_names(&self) -> &str {
        match self {
            ApiPattern::AttributeSubscript { attribute } => attribute,
            ApiPattern::DeprecatedCall { name } => name,
            ApiPattern::SeedInLoop { name } => name,
        }
    }
}

/// One API/framework conformance rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiRule {
    pub id: String,
    pub framework: String,
    pub pattern: ApiPattern,
    pub recommended: String,
}

/// The full rule catalog consumed by the metric computations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleCatalog {
    pub style_rules: Vec<StyleRule>,
    pub advanced_features: Vec<String>,
    pub api_rules: Vec<ApiRule>,
    /// Import roots treated as ML frameworks when counting call sites.
    pub framework_roots: Vec<String>,
    pub severity_weights: SeverityWeights,
}

/// Identifiers of the shipped style rules.
pub const STYLE_RULE_IDS: [(&str, &str); 8] = [
    ("E501", "line longer than 79 characters"),
    ("W291", "trailing whitespace"),
    ("W191", "indentation contains tabs"),
    ("E111", "indentation is not a multiple of four"),
    ("E225", "missing whitespace around assignment or comparison operator"),
    ("N802", "function or variable name is not snake_case"),
    ("N801", "class name is not CapWords"),
    ("E702", "multiple statements on one line (semicolon)"),
];

/// Identifiers of the shipped advanced-feature checks.
pub const ADVANCED_FEATURE_IDS: [&str; 7] = [
    "lambda",
    "dynamic_eval",
    "global_nonlocal",
    "metaclass_argument",
    "nested_comprehension",
    "walrus",
    "chained_decorators",
];

impl Default for RuleCatalog {
    fn default() -> Self {
        let style_rules = STYLE_RULE_IDS
            .iter()
            .map(|(id, description)| StyleRule {
                id: (*id).to_string(),
                description: (*description).to_string(),
            })
            .collect();
        let api_rules = vec![
            ApiRule {
                id: "API001".to_string(),
                framework: "pytorch".to_string(),
                pattern: ApiPattern::AttributeSubscript {
                    attribute: "data".to_string(),
                },
                recommended: "use .item() to extract a scalar from a tensor".to_string(),
            },
            ApiRule {
                id: "API002".to_string(),
                framework: "tensorflow".to_string(),
                pattern: ApiPattern::DeprecatedCall {
                    name: "Session".to_string(),
                },
                recommended: "use eager execution or tf.function".to_string(),
            },
            ApiRule {
                id: "API003".to_string(),
                framework: "tensorflow".to_string(),
                pattern: ApiPattern::DeprecatedCall {
                    name: "InteractiveSession".to_string(),
                },
                recommended: "use eager execution or tf.function".to_string(),
            },
            ApiRule {
                id: "API004".to_string(),
                framework: "tensorflow".to_string(),
                pattern: ApiPattern::DeprecatedCall {
                    name: "placeholder".to_string(),
                },
                recommended: "pass tensors directly under eager execution".to_string(),
            },
            ApiRule {
                id: "API005".to_string(),
                framework: "tensorflow".to_string(),
                pattern: ApiPattern::DeprecatedCall {
                    name: "global_variables_initializer".to_string(),
                },
                recommended: "variables initialize eagerly; drop the initializer".to_string(),
            },
            ApiRule {
                id: "API010".to_string(),
                framework: "any".to_string(),
                pattern: ApiPattern::SeedInLoop {
                    name: "seed".to_string(),
                },
                recommended: "seed once before the loop".to_string(),
            },
            ApiRule {
                id: "API011".to_string(),
                framework: "pytorch".to_string(),
                pattern: ApiPattern::SeedInLoop {
                    name: "manual_seed".to_string(),
                },
                recommended: "seed once before the loop".to_string(),
            },
            ApiRule {
                id: "API012".to_string(),
                framework: "tensorflow".to_string(),
                pattern: ApiPattern::SeedInLoop {
                    name: "set_seed".to_string(),
                },
                recommended: "seed once before the loop".to_string(),
            },
        ];
        RuleCatalog {
            style_rules,
            advanced_features: ADVANCED_FEATURE_IDS.iter().map(|s| s.to_string()).collect(),
            api_rules,
            framework_roots: ["keras", "torch", "tensorflow", "sklearn", "numpy", "pandas"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            severity_weights: SeverityWeights::default(),
        }
    }
}

impl RuleCatalog {
    /// Validate rule-id uniqueness and pattern well-formedness.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen = BTreeMap::new();
        for rule in &self.style_rules {
            if seen.insert(rule.id.clone(), ()).is_some() {
                return Err(format!("duplicate rule id: {}", rule.id));
            }
        }
        for rule in &self.api_rules {
            if seen.insert(rule.id.clone(), ()).is_some() {
                return Err(format!("duplicate rule id: {}", rule.id));
            }
            let name = rule.pattern.matcher_names();
            if !is_dotted_identifier(name) {
                return Err(format!(
                    "api rule {} has a pattern that is not a valid dotted identifier: {name:?}",
                    rule.id
                ));
            }
        }
        Ok(())
    }

    pub fn style_rule_enabled(&self, id: &str) -> bool {
        self.style_rules.iter().any(|r| r.id == id)
    }

    pub fn advanced_feature_enabled(&self, id: &str) -> bool {
        self.advanced_features.iter().any(|f| f == id)
    }
}

fn is_dotted_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.split('.').all(|part| {
            let mut chars = part.chars();
            matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        })
}

/// Run all checkers (style, advanced features, API, type consistency) and sum
/// the severity weights of the findings.
pub fn defect_score(unit: &SourceUnit, catalog: &RuleCatalog) -> f64 {
    all_findings(unit, catalog)
        .iter()
        .map(|f| catalog.severity_weights.weight(f.severity))
        .sum()
}

/// Collect the findings of every checker.
pub fn all_findings(unit: &SourceUnit, catalog: &RuleCatalog) -> Vec<LintFinding> {
    let mut findings = super::style::style_findings(unit, catalog);
    findings.extend(super::advanced::advanced_feature_findings(unit, catalog));
    findings.extend(super::api::api_findings(unit, catalog));
    findings.extend(super::typecheck::type_findings(unit));
    findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::parse_source;

    #[test]
    fn default_catalog_validates() {
        RuleCatalog::default().validate().unwrap();
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let mut catalog = RuleCatalog::default();
        catalog.style_rules.push(StyleRule {
            id: "E501".to_string(),
            description: "dup".to_string(),
        });
        assert!(catalog.validate().is_err());
    }

    #[test]
    fn bad_api_pattern_is_rejected() {
        let mut catalog = RuleCatalog::default();
        catalog.api_rules.push(ApiRule {
            id: "API099".to_string(),
            framework: "any".to_string(),
            pattern: ApiPattern::DeprecatedCall {
                name: "not a name!".to_string(),
            },
            recommended: String::new(),
        });
        assert!(catalog.validate().is_err());
    }

    #[test]
    fn clean_file_scores_zero() {
        let unit = parse_source("t.py", "def f():\n    return 1\n");
        assert_eq!(defect_score(&unit, &RuleCatalog::default()), 0.0);
    }

    #[test]
    fn unit_weights_reduce_to_raw_count() {
        let mut catalog = RuleCatalog::default();
        catalog.severity_weights = SeverityWeights {
            convention: 1.0,
            warning: 1.0,
            error: 1.0,
        };
        // one style violation (trailing whitespace) + one AFP (lambda)
        let unit = parse_source("t.py", "f = lambda v: v \n");
        let findings = all_findings(&unit, &catalog);
        assert_eq!(defect_score(&unit, &catalog), findings.len() as f64);
    }
}
