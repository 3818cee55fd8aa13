//! Columnar feature-vector datasets with binary class labels.
//!
//! A [`Dataset`] stores one value vector per feature (symbols for nominal
//! features, reals for numeric ones) plus a label vector. Datasets are
//! immutable after construction; every transformation returns a new one.

mod arff;
mod csv_io;
mod feature_set;

pub use arff::{read_arff, read_arff_file, write_arff, write_arff_file};
pub use csv_io::{read_csv, read_csv_file, write_csv, write_csv_file};
pub use feature_set::{FeatureSet, FeatureSetName};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kind of a feature column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureKind {
    /// Symbols from a finite unordered alphabet (e.g. protocol_type).
    Nominal,
    /// Real-valued. Boolean-like 0/1 columns are loaded as numeric.
    Numeric,
}

/// Binary class label. Multi-class attack labels collapse to `Anomaly`
/// at load time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    Normal,
    Anomaly,
}

impl ClassLabel {
    /// Map a raw label symbol: anything other than "normal"
    /// (case-insensitive) is an anomaly.
    pub fn from_symbol(symbol: &str) -> ClassLabel {
        if symbol.eq_ignore_ascii_case("normal") {
            ClassLabel::Normal
        } else {
            ClassLabel::Anomaly
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ClassLabel::Normal => "normal",
            ClassLabel::Anomaly => "anomaly",
        }
    }
}

/// Declaration of one feature column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureDescriptor {
    pub name: String,
    /// 0-based column position, assigned by `Dataset::new`.
    pub index: usize,
    pub kind: FeatureKind,
    /// Ordered list of distinct symbols; empty for numeric features.
    pub domain: Vec<String>,
}

impl FeatureDescriptor {
    pub fn numeric(name: impl Into<String>) -> FeatureDescriptor {
        FeatureDescriptor {
            name: name.into(),
            index: 0,
            kind: FeatureKind::Numeric,
            domain: Vec::new(),
        }
    }

    pub fn nominal(name: impl Into<String>, domain: Vec<String>) -> FeatureDescriptor {
        FeatureDescriptor {
            name: name.into(),
            index: 0,
            kind: FeatureKind::Nominal,
            domain,
        }
    }

    fn symbol_id(&self, symbol: &str) -> Option<u32> {
        self.domain.iter().position(|s| s == symbol).map(|i| i as u32)
    }
}

/// One feature column. Nominal cells are stored as indices into the
/// descriptor's domain so equality and round-trips stay exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Nominal(Vec<u32>),
    Numeric(Vec<f64>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Nominal(v) => v.len(),
            Column::Numeric(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Borrowed view of a single cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellRef<'a> {
    Symbol(&'a str),
    Number(f64),
}

/// Columnar table of feature values plus a binary class-label column.
///
/// Invariants, enforced at construction:
/// - all columns and the label vector have identical length
/// - feature names are unique, non-empty identifiers
/// - nominal domains contain no duplicate symbols
/// - every nominal cell refers into its descriptor's domain
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    descriptors: Vec<FeatureDescriptor>,
    columns: Vec<Column>,
    labels: Vec<ClassLabel>,
}

/// Characters that would corrupt the ARFF subset if they appeared in a
/// feature name or nominal symbol.
fn arff_safe(token: &str, allow_space: bool) -> bool {
    !token.is_empty()
        && token != "?"
        && token.trim() == token
        && token.chars().all(|c| {
            !matches!(c, ',' | '{' | '}' | '%' | '\'' | '"')
                && if c == ' ' { allow_space } else { !c.is_whitespace() }
        })
}

impl Dataset {
    /// Build a dataset, validating the structural invariants. Descriptor
    /// indices are (re)assigned from column positions.
    pub fn new(
        name: impl Into<String>,
        mut descriptors: Vec<FeatureDescriptor>,
        columns: Vec<Column>,
        labels: Vec<ClassLabel>,
    ) -> Result<Dataset> {
        if descriptors.len() != columns.len() {
            return Err(Error::InvalidDataset(format!(
                "{} descriptors but {} columns",
                descriptors.len(),
                columns.len()
            )));
        }
        let rows = labels.len();
        let mut seen = std::collections::HashSet::new();
        for (i, (desc, col)) in descriptors.iter_mut().zip(&columns).enumerate() {
            desc.index = i;
            if !arff_safe(&desc.name, false) {
                return Err(Error::InvalidDataset(format!(
                    "feature name {:?} is not a plain identifier",
                    desc.name
                )));
            }
            if !seen.insert(desc.name.clone()) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate feature name {:?}",
                    desc.name
                )));
            }
            if col.len() != rows {
                return Err(Error::InvalidDataset(format!(
                    "column {:?} has {} values but the dataset has {} labels",
                    desc.name,
                    col.len(),
                    rows
                )));
            }
            match (desc.kind, col) {
                (FeatureKind::Nominal, Column::Nominal(ids)) => {
                    let mut syms = std::collections::HashSet::new();
                    for s in &desc.domain {
                        if !arff_safe(s, true) {
                            return Err(Error::InvalidDataset(format!(
                                "symbol {:?} in domain of {:?} is not representable",
                                s, desc.name
                            )));
                        }
                        if !syms.insert(s) {
                            return Err(Error::InvalidDataset(format!(
                                "duplicate symbol {:?} in domain of {:?}",
                                s, desc.name
                            )));
                        }
                    }
                    if let Some(&bad) = ids.iter().find(|&&id| id as usize >= desc.domain.len()) {
                        return Err(Error::InvalidDataset(format!(
                            "cell id {} outside the domain of {:?}",
                            bad, desc.name
                        )));
                    }
                }
                (FeatureKind::Numeric, Column::Numeric(vals)) => {
                    if vals.iter().any(|v| !v.is_finite()) {
                        return Err(Error::InvalidDataset(format!(
                            "non-finite value in column {:?}",
                            desc.name
                        )));
                    }
                    if !desc.domain.is_empty() {
                        return Err(Error::InvalidDataset(format!(
                            "numeric feature {:?} carries a domain",
                            desc.name
                        )));
                    }
                }
                _ => {
                    return Err(Error::InvalidDataset(format!(
                        "column kind of {:?} does not match its descriptor",
                        desc.name
                    )));
                }
            }
        }
        Ok(Dataset {
            name: name.into(),
            descriptors,
            columns,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Dataset {
        self.name = name.into();
        self
    }

    /// Number of instances M.
    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.descriptors.len()
    }

    pub fn descriptors(&self) -> &[FeatureDescriptor] {
        &self.descriptors
    }

    pub fn descriptor(&self, index: usize) -> &FeatureDescriptor {
        &self.descriptors[index]
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, index: usize) -> &Column {
        &self.columns[index]
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.descriptors.iter().position(|d| d.name == name)
    }

    /// Borrowed view of one cell.
    pub fn cell(&self, feature: usize, row: usize) -> CellRef<'_> {
        match &self.columns[feature] {
            Column::Nominal(ids) => {
                CellRef::Symbol(&self.descriptors[feature].domain[ids[row] as usize])
            }
            Column::Numeric(vals) => CellRef::Number(vals[row]),
        }
    }

    /// The numeric values of a column, if it is numeric.
    pub fn numeric_column(&self, feature: usize) -> Option<&[f64]> {
        match &self.columns[feature] {
            Column::Numeric(vals) => Some(vals),
            Column::Nominal(_) => None,
        }
    }

    /// Symbols of a nominal column in row order, if it is nominal.
    pub fn symbols(&self, feature: usize) -> Option<Vec<&str>> {
        match &self.columns[feature] {
            Column::Nominal(ids) => {
                let domain = &self.descriptors[feature].domain;
                Some(ids.iter().map(|&id| domain[id as usize].as_str()).collect())
            }
            Column::Numeric(_) => None,
        }
    }

    /// True when `other` declares the same feature names and kinds in the
    /// same order. Nominal domains may differ (a test set may carry
    /// symbols unseen in training).
    pub fn same_schema(&self, other: &Dataset) -> bool {
        self.descriptors.len() == other.descriptors.len()
            && self
                .descriptors
                .iter()
                .zip(&other.descriptors)
                .all(|(a, b)| a.name == b.name && a.kind == b.kind)
    }

    /// Select exactly the member columns of `set`, in set order, keeping
    /// the label column. The source dataset is unmodified.
    pub fn project(&self, set: &FeatureSet) -> Result<Dataset> {
        let mut descriptors = Vec::with_capacity(set.members().len());
        let mut columns = Vec::with_capacity(set.members().len());
        for member in set.members() {
            let idx = self
                .feature_index(member)
                .ok_or_else(|| Error::UnknownFeature(member.clone()))?;
            descriptors.push(self.descriptors[idx].clone());
            columns.push(self.columns[idx].clone());
        }
        Dataset::new(self.name.clone(), descriptors, columns, self.labels.clone())
    }

    /// Partition the feature columns by kind, preserving order within each
    /// part. Both parts carry the full label vector; the recorded layout
    /// permits an exact rejoin.
    pub fn split_by_kind(&self) -> KindSplit {
        let mut nom_desc = Vec::new();
        let mut nom_cols = Vec::new();
        let mut num_desc = Vec::new();
        let mut num_cols = Vec::new();
        let mut layout = Vec::with_capacity(self.descriptors.len());
        for (desc, col) in self.descriptors.iter().zip(&self.columns) {
            layout.push(desc.kind);
            match desc.kind {
                FeatureKind::Nominal => {
                    nom_desc.push(desc.clone());
                    nom_cols.push(col.clone());
                }
                FeatureKind::Numeric => {
                    num_desc.push(desc.clone());
                    num_cols.push(col.clone());
                }
            }
        }
        let nominal = Dataset::new(self.name.clone(), nom_desc, nom_cols, self.labels.clone())
            .expect("split of a valid dataset is valid");
        let numeric = Dataset::new(self.name.clone(), num_desc, num_cols, self.labels.clone())
            .expect("split of a valid dataset is valid");
        KindSplit {
            nominal,
            numeric,
            layout,
        }
    }
}

/// Result of [`Dataset::split_by_kind`]: the two single-kind parts plus
/// the original column interleaving.
#[derive(Debug, Clone)]
pub struct KindSplit {
    pub nominal: Dataset,
    pub numeric: Dataset,
    layout: Vec<FeatureKind>,
}

impl KindSplit {
    /// Reassemble the original dataset.
    pub fn rejoin(&self) -> Dataset {
        self.rejoin_with(&self.nominal, &self.numeric)
            .expect("parts of a split always rejoin")
    }

    /// Interleave replacement parts back into the original column order.
    /// Used after the nominal part has been transformed (its columns may
    /// have become numeric); only the column counts must still match.
    pub fn rejoin_with(&self, nominal: &Dataset, numeric: &Dataset) -> Result<Dataset> {
        let want_nom = self
            .layout
            .iter()
            .filter(|k| **k == FeatureKind::Nominal)
            .count();
        if nominal.n_features() != want_nom || numeric.n_features() != self.layout.len() - want_nom
        {
            return Err(Error::SchemaMismatch(format!(
                "rejoin expects {} nominal and {} numeric columns, got {} and {}",
                want_nom,
                self.layout.len() - want_nom,
                nominal.n_features(),
                numeric.n_features()
            )));
        }
        let mut descriptors = Vec::with_capacity(self.layout.len());
        let mut columns = Vec::with_capacity(self.layout.len());
        let (mut ni, mut mi) = (0, 0);
        for kind in &self.layout {
            let (part, at) = match kind {
                FeatureKind::Nominal => {
                    ni += 1;
                    (nominal, ni - 1)
                }
                FeatureKind::Numeric => {
                    mi += 1;
                    (numeric, mi - 1)
                }
            };
            descriptors.push(part.descriptor(at).clone());
            columns.push(part.column(at).clone());
        }
        Dataset::new(
            nominal.name().to_owned(),
            descriptors,
            columns,
            numeric.labels().to_vec(),
        )
    }
}
