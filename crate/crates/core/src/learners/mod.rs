//! Interpretable classifiers: a grid-searched CART tree, a one-vs-rest
//! linear max-margin model, and the most-frequent baseline.

mod linear;
mod tree;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::featurize::DesignMatrix;

pub use linear::{fit_linear, ClassWeight, LinearConfig, LinearFit, LinearModel};
pub(crate) use tree::argmax;
pub use tree::{fit_tree, Criterion, DecisionTree, GridCell, Node, TreeConfig, TreeFit};

/// Encoded training data: one-hot rows plus class indices into `classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: DesignMatrix,
    pub y: Vec<usize>,
    /// Sorted, distinct label strings.
    pub classes: Vec<String>,
}

impl Dataset {
    pub fn new(x: DesignMatrix, labels: &[String]) -> Self {
        assert_eq!(x.n_rows(), labels.len(), "one label per row");
        let mut classes: Vec<String> = labels.to_vec();
        classes.sort();
        classes.dedup();
        let y = labels
            .iter()
            .map(|l| classes.binary_search(l).expect("label present"))
            .collect();
        Dataset { x, y, classes }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub(crate) fn class_counts(&self, rows: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.classes.len()];
        for &r in rows {
            counts[self.y[r]] += 1;
        }
        counts
    }
}

/// Row indices of the train, dev and test portions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub dev: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded shuffle of `0..n` cut at the given train and dev fractions; the
/// remainder is the test portion.
pub fn split_indices(n: usize, train: f64, dev: f64, seed: u64) -> Split {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let n_train = ((n as f64) * train).round() as usize;
    let n_dev = ((n as f64) * dev).round() as usize;
    let n_train = n_train.min(n);
    let n_dev = n_dev.min(n - n_train);
    let test = order.split_off(n_train + n_dev);
    let dev = order.split_off(n_train);
    Split {
        train: order,
        dev,
        test,
    }
}

/// Majority label; ties go to the lexicographically smallest.
pub fn most_frequent_baseline<S: AsRef<str>>(labels: &[S]) -> Option<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for label in labels {
        *counts.entry(label.as_ref()).or_default() += 1;
    }
    let best = counts.values().copied().max()?;
    counts
        .into_iter()
        .find(|&(_, c)| c == best)
        .map(|(l, _)| l.to_string())
}

/// Fraction of positions where prediction equals gold; 0 for empty input.
pub fn accuracy<A: PartialEq<B>, B>(predictions: &[A], gold: &[B]) -> f64 {
    assert_eq!(predictions.len(), gold.len(), "length mismatch");
    if gold.is_empty() {
        return 0.0;
    }
    let hits = predictions
        .iter()
        .zip(gold)
        .filter(|(p, g)| *p == *g)
        .count();
    hits as f64 / gold.len() as f64
}

/// A fitted model of either family.
#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Tree(DecisionTree),
    Linear(LinearModel),
}

impl TrainedModel {
    pub fn predict_row(&self, row: &[usize]) -> usize {
        match self {
            TrainedModel::Tree(t) => t.predict_row(row),
            TrainedModel::Linear(m) => m.predict_row(row),
        }
    }

    pub fn classes(&self) -> &[String] {
        match self {
            TrainedModel::Tree(t) => &t.classes,
            TrainedModel::Linear(m) => &m.classes,
        }
    }

    /// Predicted label strings for the given rows of `x`.
    pub fn predict_labels(&self, x: &DesignMatrix, rows: &[usize]) -> Vec<String> {
        rows.iter()
            .map(|&r| self.classes()[self.predict_row(&x.rows[r])].clone())
            .collect()
    }
}

pub(crate) fn cell_rng(seed: u64, cell: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ cell)
}
