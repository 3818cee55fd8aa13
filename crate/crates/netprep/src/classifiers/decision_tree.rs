//! ID3-style decision tree grown to purity, reusing the crate's entropy
//! machinery for split scoring. Numeric features split on binary
//! midpoint thresholds and may be reused deeper in the tree; nominal
//! features split multiway on their symbols.

use std::collections::{BTreeMap, HashMap};

use crate::dataset::{CellRef, ClassLabel, Column, Dataset};
use crate::error::{Error, Result};
use crate::info_gain::entropy;

#[derive(Debug, Clone)]
pub enum Node {
    Leaf(ClassLabel),
    NumericSplit {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
    NominalSplit {
        feature: usize,
        branches: HashMap<String, Node>,
        /// Majority label at this node; used for symbols unseen here.
        default: ClassLabel,
    },
}

#[derive(Debug, Clone)]
pub struct DecisionTreeModel {
    root: Node,
}

fn counts_of(labels: &[ClassLabel], rows: &[usize]) -> [u64; 2] {
    let mut counts = [0u64; 2];
    for &r in rows {
        match labels[r] {
            ClassLabel::Normal => counts[0] += 1,
            ClassLabel::Anomaly => counts[1] += 1,
        }
    }
    counts
}

fn majority(counts: [u64; 2]) -> ClassLabel {
    // Ties toward Normal.
    if counts[1] > counts[0] {
        ClassLabel::Anomaly
    } else {
        ClassLabel::Normal
    }
}

fn node_entropy(counts: [u64; 2]) -> f64 {
    entropy(&counts).expect("nodes are never empty")
}

enum SplitPlan {
    Numeric { feature: usize, threshold: f64 },
    Nominal { feature: usize },
}

/// Best split at a node: maximum gain, ties broken by feature order and
/// then by smaller threshold. Returns None when every feature is
/// constant across the node's rows.
fn best_split(dataset: &Dataset, rows: &[usize]) -> Option<SplitPlan> {
    let labels = dataset.labels();
    let here = node_entropy(counts_of(labels, rows));
    let total = rows.len() as f64;
    let mut best: Option<(f64, SplitPlan)> = None;

    for (feature, col) in dataset.columns().iter().enumerate() {
        match col {
            Column::Numeric(vals) => {
                let mut pairs: Vec<(f64, ClassLabel)> =
                    rows.iter().map(|&r| (vals[r], labels[r])).collect();
                pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite values"));
                // Prefix label counts; evaluate each boundary between
                // distinct adjacent values, thresholds ascending.
                let mut left = [0u64; 2];
                let all = counts_of(labels, rows);
                for i in 0..pairs.len().saturating_sub(1) {
                    match pairs[i].1 {
                        ClassLabel::Normal => left[0] += 1,
                        ClassLabel::Anomaly => left[1] += 1,
                    }
                    let (a, b) = (pairs[i].0, pairs[i + 1].0);
                    if a >= b {
                        continue;
                    }
                    let right = [all[0] - left[0], all[1] - left[1]];
                    let n_left = (left[0] + left[1]) as f64;
                    let gain = here
                        - n_left / total * node_entropy(left)
                        - (total - n_left) / total * node_entropy(right);
                    if best.as_ref().map_or(true, |(g, _)| gain > *g) {
                        best = Some((
                            gain,
                            SplitPlan::Numeric {
                                feature,
                                threshold: a + (b - a) / 2.0,
                            },
                        ));
                    }
                }
            }
            Column::Nominal(ids) => {
                // BTreeMap keeps the gain summation order (and thus its
                // rounding) identical across runs.
                let mut groups: BTreeMap<u32, [u64; 2]> = BTreeMap::new();
                for &r in rows {
                    let slot = groups.entry(ids[r]).or_insert([0, 0]);
                    match labels[r] {
                        ClassLabel::Normal => slot[0] += 1,
                        ClassLabel::Anomaly => slot[1] += 1,
                    }
                }
                if groups.len() < 2 {
                    continue;
                }
                let gain = here
                    - groups
                        .values()
                        .map(|c| {
                            let n = (c[0] + c[1]) as f64;
                            n / total * node_entropy(*c)
                        })
                        .sum::<f64>();
                if best.as_ref().map_or(true, |(g, _)| gain > *g) {
                    best = Some((gain, SplitPlan::Nominal { feature }));
                }
            }
        }
    }
    best.map(|(_, plan)| plan)
}

fn grow(dataset: &Dataset, rows: Vec<usize>) -> Node {
    let counts = counts_of(dataset.labels(), &rows);
    if counts[0] == 0 || counts[1] == 0 {
        return Node::Leaf(majority(counts));
    }
    // Impure: split whenever any feature still varies here, even at zero
    // gain, so jointly-determining features get separated eventually.
    let Some(plan) = best_split(dataset, &rows) else {
        return Node::Leaf(majority(counts));
    };
    match plan {
        SplitPlan::Numeric { feature, threshold } => {
            let vals = dataset
                .numeric_column(feature)
                .expect("plan matches column kind");
            let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
                rows.into_iter().partition(|&r| vals[r] <= threshold);
            if left_rows.is_empty() || right_rows.is_empty() {
                // Degenerate midpoint from adjacent floats.
                return Node::Leaf(majority(counts));
            }
            Node::NumericSplit {
                feature,
                threshold,
                left: Box::new(grow(dataset, left_rows)),
                right: Box::new(grow(dataset, right_rows)),
            }
        }
        SplitPlan::Nominal { feature } => {
            let ids = match dataset.column(feature) {
                Column::Nominal(ids) => ids,
                Column::Numeric(_) => unreachable!("plan matches column kind"),
            };
            let mut by_symbol: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
            for r in rows {
                by_symbol.entry(ids[r]).or_default().push(r);
            }
            let domain = &dataset.descriptor(feature).domain;
            let branches = by_symbol
                .into_iter()
                .map(|(id, rs)| (domain[id as usize].clone(), grow(dataset, rs)))
                .collect();
            Node::NominalSplit {
                feature,
                branches,
                default: majority(counts),
            }
        }
    }
}

pub fn train(dataset: &Dataset) -> Result<DecisionTreeModel> {
    if dataset.n_rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    let rows: Vec<usize> = (0..dataset.n_rows()).collect();
    Ok(DecisionTreeModel {
        root: grow(dataset, rows),
    })
}

impl DecisionTreeModel {
    pub fn predict(&self, dataset: &Dataset, row: usize) -> ClassLabel {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf(label) => return *label,
                Node::NumericSplit {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    let x = match dataset.cell(*feature, row) {
                        CellRef::Number(x) => x,
                        CellRef::Symbol(_) => unreachable!("schema checked before prediction"),
                    };
                    node = if x <= *threshold { left } else { right };
                }
                Node::NominalSplit {
                    feature,
                    branches,
                    default,
                } => {
                    let s = match dataset.cell(*feature, row) {
                        CellRef::Symbol(s) => s,
                        CellRef::Number(_) => unreachable!("schema checked before prediction"),
                    };
                    match branches.get(s) {
                        Some(child) => node = child,
                        None => return *default,
                    }
                }
            }
        }
    }
}
