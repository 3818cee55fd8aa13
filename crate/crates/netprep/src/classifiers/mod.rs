//! Built-in classifiers and the evaluation harness.
//!
//! Three small deterministic learners are provided: naive Bayes, an
//! ID3-style decision tree grown to purity, and k-nearest neighbors.
//! [`evaluate`] produces the three performance parameters recorded for
//! every (classifier, dataset) pair: detection rate, false-positive
//! rate, and testing time, with Anomaly as the positive class.

mod decision_tree;
mod knn;
mod naive_bayes;

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dataset::{ClassLabel, Dataset, FeatureKind};
use crate::error::{Error, Result};

pub use decision_tree::DecisionTreeModel;
pub use knn::KnnModel;
pub use naive_bayes::NaiveBayesModel;

/// Classifier selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    NaiveBayes,
    DecisionTree,
    Knn,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::NaiveBayes => "nb",
            Algorithm::DecisionTree => "dt",
            Algorithm::Knn => "knn",
        }
    }

    pub fn parse(s: &str) -> Option<Algorithm> {
        match s.to_ascii_lowercase().as_str() {
            "nb" | "naivebayes" | "naive_bayes" => Some(Algorithm::NaiveBayes),
            "dt" | "decisiontree" | "decision_tree" => Some(Algorithm::DecisionTree),
            "knn" => Some(Algorithm::Knn),
            _ => None,
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-training-run configuration. All three algorithms are fully
/// deterministic, so no seed is needed here.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub knn_k: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { knn_k: 5 }
    }
}

/// A trained model plus the schema it was trained on.
#[derive(Debug, Clone)]
pub struct ClassifierModel {
    algorithm: Algorithm,
    schema: Vec<(String, FeatureKind)>,
    inner: Inner,
}

#[derive(Debug, Clone)]
enum Inner {
    NaiveBayes(NaiveBayesModel),
    DecisionTree(DecisionTreeModel),
    Knn(KnnModel),
}

/// Train `algorithm` on `dataset`. Training is deterministic given the
/// dataset and config; a single-label dataset yields a model that always
/// predicts that label.
pub fn train(
    algorithm: Algorithm,
    dataset: &Dataset,
    config: &TrainConfig,
) -> Result<ClassifierModel> {
    if dataset.n_rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    let inner = match algorithm {
        Algorithm::NaiveBayes => Inner::NaiveBayes(naive_bayes::train(dataset)?),
        Algorithm::DecisionTree => Inner::DecisionTree(decision_tree::train(dataset)?),
        Algorithm::Knn => Inner::Knn(knn::train(dataset, config.knn_k)?),
    };
    Ok(ClassifierModel {
        algorithm,
        schema: dataset
            .descriptors()
            .iter()
            .map(|d| (d.name.clone(), d.kind))
            .collect(),
        inner,
    })
}

impl ClassifierModel {
    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    /// Verify that `dataset` declares the training feature names and
    /// kinds, in order.
    pub fn check_schema(&self, dataset: &Dataset) -> Result<()> {
        let matches = dataset.n_features() == self.schema.len()
            && dataset
                .descriptors()
                .iter()
                .zip(&self.schema)
                .all(|(d, (name, kind))| d.name == *name && d.kind == *kind);
        if matches {
            Ok(())
        } else {
            Err(Error::SchemaMismatch(format!(
                "dataset {:?} does not match the model's training schema",
                dataset.name()
            )))
        }
    }

    /// Predict one instance. The dataset must already satisfy
    /// [`ClassifierModel::check_schema`].
    pub fn predict(&self, dataset: &Dataset, row: usize) -> ClassLabel {
        match &self.inner {
            Inner::NaiveBayes(m) => m.predict(dataset, row),
            Inner::DecisionTree(m) => m.predict(dataset, row),
            Inner::Knn(m) => m.predict(dataset, row),
        }
    }
}

/// Confusion-matrix-derived report for one (classifier, dataset) pair.
/// Anomaly is the positive class; a zero-denominator rate is reported as
/// 0 with its `_defined` flag cleared.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub classifier: String,
    pub dataset: String,
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub r#fn: u64,
    pub detection_rate: f64,
    pub detection_rate_defined: bool,
    pub false_positive_rate: f64,
    pub false_positive_rate_defined: bool,
    /// Prediction wall time over the whole test set, in seconds.
    pub test_time: f64,
}

impl EvaluationReport {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.r#fn
    }
}

/// Predict the whole test set and tally the confusion matrix.
pub fn evaluate(model: &ClassifierModel, test: &Dataset) -> Result<EvaluationReport> {
    model.check_schema(test)?;
    let start = Instant::now();
    let (mut tp, mut fp, mut tn, mut fn_) = (0u64, 0u64, 0u64, 0u64);
    for row in 0..test.n_rows() {
        let predicted = model.predict(test, row);
        match (predicted, test.labels()[row]) {
            (ClassLabel::Anomaly, ClassLabel::Anomaly) => tp += 1,
            (ClassLabel::Anomaly, ClassLabel::Normal) => fp += 1,
            (ClassLabel::Normal, ClassLabel::Normal) => tn += 1,
            (ClassLabel::Normal, ClassLabel::Anomaly) => fn_ += 1,
        }
    }
    let test_time = start.elapsed().as_secs_f64();
    let (detection_rate, detection_rate_defined) = ratio(tp, tp + fn_);
    let (false_positive_rate, false_positive_rate_defined) = ratio(fp, fp + tn);
    Ok(EvaluationReport {
        classifier: model.algorithm.as_str().to_string(),
        dataset: test.name().to_string(),
        tp,
        fp,
        tn,
        r#fn: fn_,
        detection_rate,
        detection_rate_defined,
        false_positive_rate,
        false_positive_rate_defined,
        test_time,
    })
}

fn ratio(num: u64, den: u64) -> (f64, bool) {
    if den == 0 {
        (0.0, false)
    } else {
        (num as f64 / den as f64, true)
    }
}

/// Tab-separated summary of a batch of reports, one line per report.
pub fn write_summary_tsv<W: Write>(reports: &[EvaluationReport], mut sink: W) -> Result<()> {
    writeln!(
        sink,
        "classifier\tdataset\tdetection_rate\tfalse_positive_rate\ttest_time\ttp\tfp\ttn\tfn"
    )?;
    for r in reports {
        writeln!(
            sink,
            "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{}\t{}\t{}\t{}",
            r.classifier,
            r.dataset,
            r.detection_rate,
            r.false_positive_rate,
            r.test_time,
            r.tp,
            r.fp,
            r.tn,
            r.r#fn
        )?;
    }
    sink.flush()?;
    Ok(())
}
