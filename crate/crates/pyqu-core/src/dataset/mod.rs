//! Labeled-commit datasets and the change-type taxonomy catalog, plus the
//! supporting statistics (Cohen's kappa, sample sizing, simple random
//! sampling).

mod stats;

pub use stats::{cochran_sample_size, cohens_kappa, srs_sample, Population};

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::QualityAttribute;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv error at line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("catalog is invalid: {0}")]
    Catalog(String),
    #[error("catalog json: {0}")]
    CatalogJson(#[from] serde_json::Error),
    #[error("unknown change type(s): {0}")]
    UnknownChangeTypes(String),
    #[error("unsupported dataset version header: {0:?}")]
    DatasetVersion(String),
    #[error("agreement matrix must be square and non-empty")]
    BadMatrix,
    #[error("kappa is undefined when expected agreement is 1 but observed is not")]
    KappaUndefined,
    #[error("margin of error must be positive, got {0}")]
    BadMargin(f64),
    #[error("confidence level must be one of 0.90, 0.95, 0.99; got {0}")]
    BadConfidence(f64),
    #[error("population must be at least 1")]
    BadPopulation,
    #[error("sample size {size} exceeds population {available}")]
    SampleTooLarge { size: usize, available: usize },
}

/// Label of one commit for one attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LabelValue {
    Enhanced,
    NotEnhanced,
    #[default]
    Unlabeled,
}

impl LabelValue {
    fn as_csv(self) -> &'static str {
        match self {
            LabelValue::Enhanced => "enhanced",
            LabelValue::NotEnhanced => "not_enhanced",
            LabelValue::Unlabeled => "",
        }
    }

    fn from_csv(s: &str) -> Option<LabelValue> {
        match s.trim() {
            "enhanced" => Some(LabelValue::Enhanced),
            "not_enhanced" => Some(LabelValue::NotEnhanced),
            "" => Some(LabelValue::Unlabeled),
            _ => None,
        }
    }
}

/// One manually labeled commit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledCommitRecord {
    pub repo: String,
    pub sha: String,
    pub labels: BTreeMap<QualityAttribute, LabelValue>,
    pub change_types: Vec<String>,
    pub annotator_notes: Option<String>,
}

impl LabeledCommitRecord {
    pub fn label(&self, qa: QualityAttribute) -> LabelValue {
        self.labels.get(&qa).copied().unwrap_or_default()
    }
}

const DATASET_VERSION_HEADER: &str = "# pyqu-dataset v1";

/// Save records as CSV with columns `repo, sha, label_un, label_re,
/// label_ma, label_us, label_mo, change_types, notes`, preceded by a version
/// header comment.
pub fn save_dataset(records: &[LabeledCommitRecord], path: &Path) -> Result<(), DataError> {
    let file = std::fs::File::create(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut raw = std::io::BufWriter::new(file);
    writeln!(raw, "{DATASET_VERSION_HEADER}").map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut writer = csv::Writer::from_writer(raw);
    let mut header = vec!["repo".to_string(), "sha".to_string()];
    for qa in QualityAttribute::ALL {
        header.push(format!("label_{}", qa.code_lower()));
    }
    header.push("change_types".to_string());
    header.push("notes".to_string());
    writer.write_record(&header)?;
    for record in records {
        let mut row = vec![record.repo.clone(), record.sha.clone()];
        for qa in QualityAttribute::ALL {
            row.push(record.label(qa).as_csv().to_string());
        }
        row.push(record.change_types.join(";"));
        row.push(record.annotator_notes.clone().unwrap_or_default());
        writer.write_record(&row)?;
    }
    writer.flush().map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(())
}

/// Load a dataset saved by [`save_dataset`]. Round-trips losslessly,
/// including the optional fields.
pub fn load_dataset(path: &Path) -> Result<Vec<LabeledCommitRecord>, DataError> {
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    // version header: the first comment line, when present
    if let Some(first) = text.lines().next() {
        if first.starts_with('#') && first.trim() != DATASET_VERSION_HEADER {
            return Err(DataError::DatasetVersion(first.to_string()));
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let expected: Vec<String> = {
        let mut h = vec!["repo".to_string(), "sha".to_string()];
        for qa in QualityAttribute::ALL {
            h.push(format!("label_{}", qa.code_lower()));
        }
        h.push("change_types".to_string());
        h.push("notes".to_string());
        h
    };
    if headers.iter().collect::<Vec<_>>() != expected.iter().map(String::as_str).collect::<Vec<_>>()
    {
        return Err(DataError::Row {
            line: 2,
            message: format!("unexpected header row: {headers:?}"),
        });
    }

    let mut records = Vec::new();
    for result in reader.records() {
        let row = result?;
        let line = row
            .position()
            .map(|p| p.line())
            .unwrap_or(0);
        if row.len() != expected.len() {
            return Err(DataError::Row {
                line,
                message: format!("expected {} fields, found {}", expected.len(), row.len()),
            });
        }
        let mut labels = BTreeMap::new();
        for (i, qa) in QualityAttribute::ALL.into_iter().enumerate() {
            let raw = row.get(2 + i).unwrap_or("");
            let value = LabelValue::from_csv(raw).ok_or_else(|| DataError::Row {
                line,
                message: format!("bad label value {raw:?} for {qa}"),
            })?;
            labels.insert(qa, value);
        }
        let change_types: Vec<String> = row
            .get(7)
            .unwrap_or("")
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|s| s.to_string())
            .collect();
        let notes = row.get(8).unwrap_or("");
        records.push(LabeledCommitRecord {
            repo: row.get(0).unwrap_or("").to_string(),
            sha: row.get(1).unwrap_or("").to_string(),
            labels,
            change_types,
            annotator_notes: if notes.is_empty() {
                None
            } else {
                Some(notes.to_string())
            },
        });
    }
    Ok(records)
}

/// Check that every referenced change type exists in the catalog. Errors
/// name the offenders.
pub fn validate_change_types(
    records: &[LabeledCommitRecord],
    catalog: &TaxonomyCatalog,
) -> Result<(), DataError> {
    let known: BTreeSet<&str> = catalog.entries.iter().map(|e| e.name.as_str()).collect();
    let mut unknown = BTreeSet::new();
    for record in records {
        for name in &record.change_types {
            if !known.contains(name.as_str()) {
                unknown.insert(name.clone());
            }
        }
    }
    if unknown.is_empty() {
        Ok(())
    } else {
        Err(DataError::UnknownChangeTypes(
            unknown.into_iter().collect::<Vec<_>>().join(", "),
        ))
    }
}

/// Detection tooling referenced by the taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetectionTool {
    PyRef,
    PythonRefMiner,
    #[serde(rename = "R-CPatMiner")]
    RCPatMiner,
}

/// One change type of the taxonomy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyEntry {
    pub category: String,
    pub name: String,
    pub frequency: u64,
    pub novel: bool,
    pub detected_by: Vec<DetectionTool>,
    pub improves: Vec<QualityAttribute>,
}

/// The taxonomy catalog with its transcription notes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyCatalog {
    pub format_version: u32,
    /// Total number of change instances reported alongside the table.
    pub reported_total: u64,
    /// Transcription discrepancies recorded at transcription time.
    pub notes: Vec<String>,
    pub entries: Vec<TaxonomyEntry>,
}

/// The thirteen category names of the shipped catalog.
pub const TAXONOMY_CATEGORIES: [&str; 13] = [
    "Import Restructure",
    "Code Simplification",
    "Migration to Supported API",
    "Use Optimized Features",
    "Enhance Documentation",
    "String Formatting",
    "Enhance Error Handling",
    "Data Reorganization",
    "Function Signature Refinements",
    "Change Scope",
    "Structure Reorganization",
    "Clean up",
    "Rename Identifier",
];

const SHIPPED_TAXONOMY: &str = include_str!("../../data/taxonomy.json");

impl TaxonomyCatalog {
    /// The shipped 61-entry catalog.
    pub fn shipped() -> TaxonomyCatalog {
        parse_taxonomy(SHIPPED_TAXONOMY).expect("shipped catalog is valid")
    }

    /// Entries whose `improves` set contains `qa`.
    pub fn improving(&self, qa: QualityAttribute) -> Vec<&TaxonomyEntry> {
        self.entries
            .iter()
            .filter(|e| e.improves.contains(&qa))
            .collect()
    }

    pub fn entry(&self, name: &str) -> Option<&TaxonomyEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Sum of the transcribed frequencies next to the reported total;
    /// `discrepancy` is `sum - reported_total` when they disagree.
    pub fn frequency_check(&self) -> FrequencyCheck {
        let sum: u64 = self.entries.iter().map(|e| e.frequency).sum();
        FrequencyCheck {
            sum,
            reported_total: self.reported_total,
            discrepancy: if sum == self.reported_total {
                None
            } else {
                Some(sum as i64 - self.reported_total as i64)
            },
        }
    }

    fn validate(&self) -> Result<(), DataError> {
        let mut offenders = Vec::new();
        let mut seen = BTreeSet::new();
        for entry in &self.entries {
            if !seen.insert(entry.name.as_str()) {
                offenders.push(format!("duplicate name {:?}", entry.name));
            }
            if !TAXONOMY_CATEGORIES.contains(&entry.category.as_str()) {
                offenders.push(format!(
                    "unknown category {:?} on {:?}",
                    entry.category, entry.name
                ));
            }
            if entry.improves.is_empty() {
                offenders.push(format!("{:?} improves no quality attribute", entry.name));
            }
        }
        if offenders.is_empty() {
            Ok(())
        } else {
            Err(DataError::Catalog(offenders.join("; ")))
        }
    }
}

/// Result of the frequency-sum check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrequencyCheck {
    pub sum: u64,
    pub reported_total: u64,
    pub discrepancy: Option<i64>,
}

/// Load and validate a taxonomy catalog file.
pub fn load_taxonomy(path: &Path) -> Result<TaxonomyCatalog, DataError> {
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_taxonomy(&text)
}

fn parse_taxonomy(text: &str) -> Result<TaxonomyCatalog, DataError> {
    let catalog: TaxonomyCatalog = serde_json::from_str(text)?;
    catalog.validate()?;
    Ok(catalog)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_catalog_has_61_entries_in_13_categories() {
        let catalog = TaxonomyCatalog::shipped();
        assert_eq!(catalog.entries.len(), 61);
        let categories: BTreeSet<&str> =
            catalog.entries.iter().map(|e| e.category.as_str()).collect();
        assert_eq!(categories.len(), 13);
    }

    #[test]
    fn spot_rows_match_the_table() {
        let catalog = TaxonomyCatalog::shipped();
        assert_eq!(catalog.entry("Document Code").unwrap().frequency, 214);
        assert_eq!(catalog.entry("Extract Method").unwrap().frequency, 289);
        assert_eq!(catalog.entry("Remove Dead Code").unwrap().frequency, 217);
    }

    #[test]
    fn modularity_query_includes_extract_class_not_rename_class() {
        let catalog = TaxonomyCatalog::shipped();
        let names: Vec<&str> = catalog
            .improving(QualityAttribute::Modularity)
            .iter()
            .map(|e| e.name.as_str())
            .collect();
        assert!(names.contains(&"Extract Class"));
        assert!(!names.contains(&"Rename Class"));
    }

    #[test]
    fn frequency_check_records_the_transcription_discrepancy() {
        let catalog = TaxonomyCatalog::shipped();
        let check = catalog.frequency_check();
        assert_eq!(check.reported_total, 2338);
        assert_eq!(check.sum, 2332);
        assert_eq!(check.discrepancy, Some(-6));
        assert!(!catalog.notes.is_empty());
    }

    #[test]
    fn invalid_catalogs_name_the_offenders() {
        let mut catalog = TaxonomyCatalog::shipped();
        catalog.entries[1].name = catalog.entries[0].name.clone();
        let err = catalog.validate().unwrap_err();
        assert!(err.to_string().contains("duplicate name"));

        let mut catalog = TaxonomyCatalog::shipped();
        catalog.entries[0].category = "Mystery".to_string();
        let err = catalog.validate().unwrap_err();
        assert!(err.to_string().contains("Mystery"));

        let mut catalog = TaxonomyCatalog::shipped();
        catalog.entries[0].improves.clear();
        assert!(catalog.validate().is_err());
    }

    fn sample_records() -> Vec<LabeledCommitRecord> {
        let mut labels = BTreeMap::new();
        labels.insert(QualityAttribute::Understandability, LabelValue::Enhanced);
        labels.insert(QualityAttribute::Modularity, LabelValue::NotEnhanced);
        vec![
            LabeledCommitRecord {
                repo: "org/alpha".to_string(),
                sha: "a".repeat(40),
                labels,
                change_types: vec!["Document Code".to_string(), "Extract Method".to_string()],
                annotator_notes: Some("docstrings added, helper extracted".to_string()),
            },
            LabeledCommitRecord {
                repo: "org/beta".to_string(),
                sha: "b".repeat(40),
                labels: BTreeMap::new(),
                change_types: Vec::new(),
                annotator_notes: None,
            },
        ]
    }

    #[test]
    fn dataset_round_trip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        let records = sample_records();
        save_dataset(&records, &path).unwrap();
        let loaded = load_dataset(&path).unwrap();
        // unlabeled attributes normalize to explicit Unlabeled entries
        assert_eq!(loaded.len(), records.len());
        assert_eq!(loaded[0].repo, records[0].repo);
        assert_eq!(loaded[0].change_types, records[0].change_types);
        assert_eq!(loaded[0].annotator_notes, records[0].annotator_notes);
        for qa in QualityAttribute::ALL {
            assert_eq!(loaded[0].label(qa), records[0].label(qa));
            assert_eq!(loaded[1].label(qa), LabelValue::Unlabeled);
        }
    }

    #[test]
    fn empty_dataset_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        save_dataset(&[], &path).unwrap();
        assert!(load_dataset(&path).unwrap().is_empty());
    }

    #[test]
    fn malformed_rows_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let mut text = String::from("# pyqu-dataset v1\n");
        text.push_str("repo,sha,label_un,label_re,label_ma,label_us,label_mo,change_types,notes\n");
        text.push_str("org/x,abc,maybe,,,,,,\n");
        std::fs::write(&path, text).unwrap();
        match load_dataset(&path) {
            Err(DataError::Row { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("maybe"));
            }
            other => panic!("expected row error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_change_types_are_named() {
        let catalog = TaxonomyCatalog::shipped();
        let mut records = sample_records();
        records[0].change_types.push("Quantum Refactor".to_string());
        let err = validate_change_types(&records, &catalog).unwrap_err();
        assert!(err.to_string().contains("Quantum Refactor"));
        records[0].change_types.pop();
        validate_change_types(&records, &catalog).unwrap();
    }
}
