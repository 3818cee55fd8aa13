//! k-nearest-neighbor classifier over the stored training instances.
//! Numeric features contribute squared Euclidean distance; nominal
//! features contribute 0/1 symbol overlap. Because raw distances are
//! compared directly, this classifier makes scale dominance between
//! features observable, which is exactly what normalization is meant to
//! remove.

use crate::dataset::{CellRef, ClassLabel, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct KnnModel {
    train: Dataset,
    k: usize,
}

pub fn train(dataset: &Dataset, k_neighbors: usize) -> Result<KnnModel> {
    if dataset.n_rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(KnnModel {
        train: dataset.clone(),
        k: k_neighbors.max(1),
    })
}

impl KnnModel {
    fn distance_sq(&self, test: &Dataset, test_row: usize, train_row: usize) -> f64 {
        let mut d = 0.0;
        for feature in 0..self.train.n_features() {
            match (
                self.train.cell(feature, train_row),
                test.cell(feature, test_row),
            ) {
                (CellRef::Number(a), CellRef::Number(b)) => {
                    let diff = a - b;
                    d += diff * diff;
                }
                (CellRef::Symbol(a), CellRef::Symbol(b)) => {
                    if a != b {
                        d += 1.0;
                    }
                }
                _ => unreachable!("schema checked before prediction"),
            }
        }
        d
    }

    /// Majority vote over the k nearest training rows; distance ties
    /// break by lower training-row index, vote ties toward Normal.
    pub fn predict(&self, test: &Dataset, row: usize) -> ClassLabel {
        let mut neighbors: Vec<(f64, usize)> = (0..self.train.n_rows())
            .map(|t| (self.distance_sq(test, row, t), t))
            .collect();
        neighbors.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite").then(a.1.cmp(&b.1)));
        let k = self.k.min(neighbors.len());
        let anomalies = neighbors[..k]
            .iter()
            .filter(|(_, t)| self.train.labels()[*t] == ClassLabel::Anomaly)
            .count();
        if anomalies * 2 > k {
            ClassLabel::Anomaly
        } else {
            ClassLabel::Normal
        }
    }
}
