//! Halstead volume.
//!
//! `V = N * log2(n)` where `N` is the total number of operator and operand
//! occurrences and `n` the number of distinct ones.
//!
//! The classification convention is frozen as follows. Operators are every
//! anonymous token that is an operator symbol or keyword (`=`, `+`, `and`,
//! `def`, `return`, ...) plus one synthetic operator per call (`()`),
//! subscript (`[]`), and attribute access (`.`). Pure punctuation
//! (parentheses, brackets, braces, commas, colons, semicolons, arrows, dots
//! in dotted names) does not count. Operands are identifiers and literals
//! (numbers, strings, `True`/`False`/`None`/`...`), keyed by source text.

use std::collections::HashSet;

use super::SourceUnit;

/// Halstead volume in bits. Empty source and degraded mode return 0.
pub fn halstead_volume(unit: &SourceUnit) -> f64 {
    let Some(tree) = unit.tree() else { return 0.0 };

    let mut operators: HashSet<String> = HashSet::new();
    let mut operands: HashSet<String> = HashSet::new();
    let mut total_operators: u64 = 0;
    let mut total_operands: u64 = 0;

    let text = unit.text.as_str();
    super::walk_nodes(tree, |node| {
        if !node.is_named() {
            let token = &text[node.byte_range()];
            if !token.is_empty() && !is_punctuation(token) {
                operators.insert(token.to_string());
                total_operators += 1;
            }
            return;
        }
        match node.kind() {
            "call" => {
                operators.insert("()".to_string());
                total_operators += 1;
            }
            "subscript" => {
                operators.insert("[]".to_string());
                total_operators += 1;
            }
            "attribute" => {
                operators.insert(".".to_string());
                total_operators += 1;
            }
            "identifier" | "integer" | "float" | "string" | "true" | "false" | "none"
            | "ellipsis" => {
                operands.insert(text[node.byte_range()].to_string());
                total_operands += 1;
            }
            _ => {}
        }
    });

    let n_total = (total_operators + total_operands) as f64;
    let n_distinct = (operators.len() + operands.len()) as f64;
    if n_distinct == 0.0 {
        0.0
    } else {
        n_total * n_distinct.log2()
    }
}

fn is_punctuation(token: &str) -> bool {
    matches!(
        token,
        "(" | ")" | "[" | "]" | "{" | "}" | "," | ":" | ";" | "->" | "." | "\\"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::parse_source;

    fn hv(text: &str) -> f64 {
        halstead_volume(&parse_source("t.py", text))
    }

    #[test]
    fn empty_module_is_zero() {
        assert_eq!(hv(""), 0.0);
    }

    #[test]
    fn worked_example_three_distinct_operands() {
        // operators {=, +} (N1=2, n1=2); operands {a, b, c} (N2=3, n2=3)
        let expected = 5.0 * 5.0f64.log2();
        assert!((hv("a = b + c") - expected).abs() < 1e-12);
        assert!((hv("a = b + c") - 11.609640474436812).abs() < 1e-9);
    }

    #[test]
    fn worked_example_repeated_operand() {
        // N = 5, n = 4 → 5 * log2(4) = 10
        assert!((hv("x = x + 1") - 10.0).abs() < 1e-12);
    }

    #[test]
    fn comments_do_not_contribute() {
        assert_eq!(hv("# only a comment\n"), 0.0);
        assert!((hv("x = x + 1  # note\n") - 10.0).abs() < 1e-12);
    }

    #[test]
    fn degraded_mode_is_zero() {
        assert_eq!(hv("def f(:\n"), 0.0);
    }

    #[test]
    fn keywords_count_as_operators() {
        // operators: def, pass → N1=2 n1=2; operands: f → N2=1 n2=1
        let expected = 3.0 * 3.0f64.log2();
        assert!((hv("def f():\n    pass\n") - expected).abs() < 1e-12);
    }
}
