//! The five quality attributes scored per commit.

use serde::{Deserialize, Serialize};

/// One of the five quality attributes a commit can enhance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum QualityAttribute {
    #[serde(rename = "UN")]
    Understandability,
    #[serde(rename = "RE")]
    Reliability,
    #[serde(rename = "MA")]
    Maintainability,
    #[serde(rename = "US")]
    Usability,
    #[serde(rename = "MO")]
    Modularity,
}

impl QualityAttribute {
    /// All five attributes in canonical order (UN, RE, MA, US, MO).
    pub const ALL: [QualityAttribute; 5] = [
        QualityAttribute::Understandability,
        QualityAttribute::Reliability,
        QualityAttribute::Maintainability,
        QualityAttribute::Usability,
        QualityAttribute::Modularity,
    ];

    /// Two-letter code used in file formats and CLI flags.
    pub fn code(self) -> &'static str {
        match self {
            QualityAttribute::Understandability => "UN",
            QualityAttribute::Reliability => "RE",
            QualityAttribute::Maintainability => "MA",
            QualityAttribute::Usability => "US",
            QualityAttribute::Modularity => "MO",
        }
    }

    /// Lowercase code used in CSV column names (`label_un`, ...).
    pub fn code_lower(self) -> &'static str {
        match self {
            QualityAttribute::Understandability => "un",
            QualityAttribute::Reliability => "re",
            QualityAttribute::Maintainability => "ma",
            QualityAttribute::Usability => "us",
            QualityAttribute::Modularity => "mo",
        }
    }

    /// Parse a two-letter code, case-insensitively.
    pub fn from_code(code: &str) -> Option<QualityAttribute> {
        match code.to_ascii_uppercase().as_str() {
            "UN" => Some(QualityAttribute::Understandability),
            "RE" => Some(QualityAttribute::Reliability),
            "MA" => Some(QualityAttribute::Maintainability),
            "US" => Some(QualityAttribute::Usability),
            "MO" => Some(QualityAttribute::Modularity),
            _ => None,
        }
    }

    /// Number of delta features the attribute's classifier consumes.
    pub fn feature_arity(self) -> usize {
        match self {
            QualityAttribute::Understandability => 7,
            QualityAttribute::Reliability => 5,
            QualityAttribute::Maintainability => 4,
            QualityAttribute::Usability => 9,
            QualityAttribute::Modularity => 4,
        }
    }
}

impl std::fmt::Display for QualityAttribute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for QualityAttribute {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        QualityAttribute::from_code(s).ok_or_else(|| format!("unknown quality attribute: {s}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        for qa in QualityAttribute::ALL {
            assert_eq!(QualityAttribute::from_code(qa.code()), Some(qa));
        }
        assert_eq!(QualityAttribute::from_code("xx"), None);
    }

    #[test]
    fn arities_match_the_equations() {
        let arities: Vec<usize> = QualityAttribute::ALL
            .iter()
            .map(|qa| qa.feature_arity())
            .collect();
        assert_eq!(arities, vec![7, 5, 4, 9, 4]);
    }
}
