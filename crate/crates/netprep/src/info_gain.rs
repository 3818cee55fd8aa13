//! Entropy and information-gain ranking over discretized data.
//!
//! The gain of a feature F on dataset D is
//! `H(D) - sum_over_values (|D_v|/|D|) * H(D_v)` with H the label entropy
//! in bits. Numeric features are discretized into k equal-frequency bins
//! first; nominal features use their symbols directly as values.

use serde::{Deserialize, Serialize};

use crate::dataset::{ClassLabel, Column, Dataset, FeatureSet};
use crate::discretize;
use crate::error::{Error, Result};

/// Shannon entropy in bits of a count histogram. Zero-count cells
/// contribute nothing (the 0 * log 0 = 0 convention).
pub fn entropy(counts: &[u64]) -> Result<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let total = total as f64;
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total;
            h -= p * p.log2();
        }
    }
    Ok(h)
}

fn label_counts(labels: &[ClassLabel]) -> [u64; 2] {
    let mut counts = [0u64; 2];
    for l in labels {
        match l {
            ClassLabel::Normal => counts[0] += 1,
            ClassLabel::Anomaly => counts[1] += 1,
        }
    }
    counts
}

/// Information gain of one feature, using `k` bins for numeric columns.
/// The discretizer is fitted on the same column it is applied to.
pub fn info_gain(dataset: &Dataset, feature: &str, k: usize) -> Result<f64> {
    let idx = dataset
        .feature_index(feature)
        .ok_or_else(|| Error::UnknownFeature(feature.to_string()))?;
    if dataset.n_rows() == 0 {
        return Err(Error::EmptyDataset);
    }

    let values: Vec<usize> = match dataset.column(idx) {
        Column::Nominal(ids) => ids.iter().map(|&id| id as usize).collect(),
        Column::Numeric(vals) => {
            let model = discretize::fit_equal_frequency(feature, vals, k)?;
            discretize::apply(&model, vals)
        }
    };
    let n_values = values.iter().max().map_or(0, |&m| m + 1);

    let h_labels = entropy(&label_counts(dataset.labels()))?;
    let total = dataset.n_rows() as f64;
    let mut per_value: Vec<[u64; 2]> = vec![[0, 0]; n_values];
    for (v, label) in values.iter().zip(dataset.labels()) {
        match label {
            ClassLabel::Normal => per_value[*v][0] += 1,
            ClassLabel::Anomaly => per_value[*v][1] += 1,
        }
    }
    let mut conditional = 0.0;
    for counts in &per_value {
        let size = counts[0] + counts[1];
        if size > 0 {
            conditional += size as f64 / total * entropy(counts)?;
        }
    }
    Ok(h_labels - conditional)
}

/// A descending information-gain ranking; ties break by ascending
/// feature name so output is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IgRanking {
    pub entries: Vec<RankEntry>,
    pub bins_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub feature: String,
    pub ig: f64,
}

/// Score every member of `features` and sort.
pub fn rank(dataset: &Dataset, features: &FeatureSet, k: usize) -> Result<IgRanking> {
    let mut entries = Vec::with_capacity(features.len());
    for name in features.members() {
        let ig = info_gain(dataset, name, k)?.max(0.0);
        entries.push(RankEntry {
            feature: name.clone(),
            ig,
        });
    }
    entries.sort_by(|a, b| {
        b.ig.partial_cmp(&a.ig)
            .expect("gains are finite")
            .then_with(|| a.feature.cmp(&b.feature))
    });
    Ok(IgRanking {
        entries,
        bins_used: k,
    })
}
