//! Equal-frequency discretization of numeric columns.
//!
//! Values are split into at most `k` bins holding (near-)equal numbers of
//! the training values. Cut points sit at midpoints between adjacent
//! distinct sorted values, so equal values can never straddle a bin
//! boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of bins used when a caller does not override it.
pub const DEFAULT_BINS: usize = 20;

/// Fitted cut points for one feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationModel {
    pub feature: String,
    /// Strictly ascending thresholds; at most `k - 1` of them.
    pub cut_points: Vec<f64>,
    /// Requested bin count.
    pub k: usize,
}

impl DiscretizationModel {
    /// Effective bin count, `|cut_points| + 1`.
    pub fn n_bins(&self) -> usize {
        self.cut_points.len() + 1
    }
}

/// Fit cut points so each bin receives floor(M/k) or ceil(M/k) of the
/// sorted values, except where runs of equal values force a deviation.
/// When duplicates push an ideal boundary, it shifts to the nearest legal
/// midpoint, preferring the smaller left bin on a tie.
pub fn fit_equal_frequency(
    feature: &str,
    column: &[f64],
    k: usize,
) -> Result<DiscretizationModel> {
    if column.is_empty() {
        return Err(Error::EmptyColumn);
    }
    if k < 1 {
        return Err(Error::InvalidBins(k));
    }
    let mut sorted = column.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("dataset values are finite"));
    let m = sorted.len();

    // Legal split positions: indices j where sorted[j-1] < sorted[j].
    let legal: Vec<usize> = (1..m).filter(|&j| sorted[j - 1] < sorted[j]).collect();

    let mut cut_points = Vec::new();
    if !legal.is_empty() {
        let mut chosen = Vec::with_capacity(k.saturating_sub(1));
        for i in 1..k {
            let ideal = i as f64 * m as f64 / k as f64;
            // Nearest legal position; ties go to the smaller left bin.
            let pick = *legal
                .iter()
                .min_by(|&&a, &&b| {
                    let da = (a as f64 - ideal).abs();
                    let db = (b as f64 - ideal).abs();
                    da.partial_cmp(&db).unwrap().then(a.cmp(&b))
                })
                .expect("legal is non-empty");
            if chosen.last() != Some(&pick) {
                chosen.push(pick);
            }
        }
        chosen.sort_unstable();
        chosen.dedup();
        for j in chosen {
            let lo = sorted[j - 1];
            let hi = sorted[j];
            let cut = lo + (hi - lo) / 2.0;
            if cut_points.last().map_or(true, |&prev| cut > prev) {
                cut_points.push(cut);
            }
        }
    }

    Ok(DiscretizationModel {
        feature: feature.to_string(),
        cut_points,
        k,
    })
}

/// Map each value to the count of cut points strictly below it. Values
/// outside the training range clamp to the first or last bin.
pub fn apply(model: &DiscretizationModel, column: &[f64]) -> Vec<usize> {
    column
        .iter()
        .map(|&x| model.cut_points.partition_point(|&c| c < x))
        .collect()
}
