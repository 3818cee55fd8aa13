//! Naive Bayes with Gaussian numeric likelihoods and add-one smoothed
//! nominal likelihoods, accumulated in log space.

use std::collections::HashMap;

use crate::dataset::{CellRef, ClassLabel, Column, Dataset};
use crate::error::{Error, Result};

/// Floor for per-class standard deviations; prevents degenerate spikes
/// on constant or single-instance classes.
const SIGMA_FLOOR: f64 = 1e-9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

#[derive(Debug, Clone)]
struct Gaussian {
    mu: f64,
    sigma: f64,
}

impl Gaussian {
    fn log_pdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        -self.sigma.ln() - LN_SQRT_2PI - 0.5 * z * z
    }
}

#[derive(Debug, Clone)]
enum Likelihood {
    /// Per-class Gaussian.
    Numeric([Gaussian; 2]),
    /// Per-symbol per-class counts plus the training domain size, for
    /// add-one smoothing: P(s|c) = (count + 1) / (n_c + domain_size).
    Nominal {
        counts: HashMap<String, [u64; 2]>,
        domain_size: usize,
    },
}

#[derive(Debug, Clone)]
pub struct NaiveBayesModel {
    class_counts: [u64; 2],
    features: Vec<Likelihood>,
}

fn class_index(label: ClassLabel) -> usize {
    match label {
        ClassLabel::Normal => 0,
        ClassLabel::Anomaly => 1,
    }
}

pub fn train(dataset: &Dataset) -> Result<NaiveBayesModel> {
    if dataset.n_rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut class_counts = [0u64; 2];
    for &label in dataset.labels() {
        class_counts[class_index(label)] += 1;
    }

    let mut features = Vec::with_capacity(dataset.n_features());
    for (desc, col) in dataset.descriptors().iter().zip(dataset.columns()) {
        match col {
            Column::Numeric(vals) => {
                let mut per_class = [(0u64, 0.0f64, 0.0f64); 2]; // n, mean, m2
                for (&v, &label) in vals.iter().zip(dataset.labels()) {
                    let (n, mean, m2) = &mut per_class[class_index(label)];
                    *n += 1;
                    let delta = v - *mean;
                    *mean += delta / *n as f64;
                    *m2 += delta * (v - *mean);
                }
                let gaussians = per_class.map(|(n, mean, m2)| {
                    let sigma = if n < 2 {
                        0.0
                    } else {
                        (m2 / (n - 1) as f64).sqrt()
                    };
                    Gaussian {
                        mu: mean,
                        sigma: sigma.max(SIGMA_FLOOR),
                    }
                });
                features.push(Likelihood::Numeric(gaussians));
            }
            Column::Nominal(ids) => {
                if desc.domain.is_empty() {
                    return Err(Error::EmptyDomain {
                        feature: desc.name.clone(),
                    });
                }
                let mut counts: HashMap<String, [u64; 2]> = HashMap::new();
                for (&id, &label) in ids.iter().zip(dataset.labels()) {
                    counts
                        .entry(desc.domain[id as usize].clone())
                        .or_insert([0, 0])[class_index(label)] += 1;
                }
                features.push(Likelihood::Nominal {
                    counts,
                    domain_size: desc.domain.len(),
                });
            }
        }
    }
    Ok(NaiveBayesModel {
        class_counts,
        features,
    })
}

impl NaiveBayesModel {
    /// Log-posterior (up to the shared evidence term) of one class for
    /// one instance.
    fn score(&self, dataset: &Dataset, row: usize, class: usize) -> f64 {
        let total = (self.class_counts[0] + self.class_counts[1]) as f64;
        let mut score = (self.class_counts[class] as f64 / total).ln();
        for (feature, likelihood) in self.features.iter().enumerate() {
            score += match (likelihood, dataset.cell(feature, row)) {
                (Likelihood::Numeric(gs), CellRef::Number(x)) => gs[class].log_pdf(x),
                (
                    Likelihood::Nominal {
                        counts,
                        domain_size,
                    },
                    CellRef::Symbol(s),
                ) => {
                    let c = counts.get(s).map_or(0, |cs| cs[class]);
                    ((c + 1) as f64 / (self.class_counts[class] as f64 + *domain_size as f64))
                        .ln()
                }
                _ => unreachable!("schema checked before prediction"),
            };
        }
        score
    }

    /// Ties break toward Normal.
    pub fn predict(&self, dataset: &Dataset, row: usize) -> ClassLabel {
        let normal = self.score(dataset, row, 0);
        let anomaly = self.score(dataset, row, 1);
        if anomaly > normal {
            ClassLabel::Anomaly
        } else {
            ClassLabel::Normal
        }
    }
}
