use std::collections::BTreeMap;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{accuracy, cell_rng, Dataset, Split};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Gini,
    Entropy,
}

impl Criterion {
    fn impurity(self, counts: &[usize], total: usize) -> f64 {
        if total == 0 {
            return 0.0;
        }
        let n = total as f64;
        match self {
            Criterion::Gini => {
                1.0 - counts
                    .iter()
                    .map(|&c| {
                        let p = c as f64 / n;
                        p * p
                    })
                    .sum::<f64>()
            }
            Criterion::Entropy => counts
                .iter()
                .filter(|&&c| c > 0)
                .map(|&c| {
                    let p = c as f64 / n;
                    -p * p.log2()
                })
                .sum(),
        }
    }
}

/// Grid and sampling settings for [`fit_tree`].
///
/// `learning_rate`, `n_estimators` and `objective` describe the boosted
/// single-tree setup these trees stand in for; with one estimator they do
/// not affect an exact CART fit and are carried only for the record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeConfig {
    pub criteria: Vec<Criterion>,
    pub depths: Vec<usize>,
    pub max_depth_cap: usize,
    pub row_subsample: f64,
    pub feature_subsample: f64,
    pub min_leaf: usize,
    pub seed: u64,
    pub learning_rate: f64,
    pub n_estimators: usize,
    pub objective: String,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            criteria: vec![Criterion::Gini, Criterion::Entropy],
            depths: (3..=20).collect(),
            max_depth_cap: 10,
            row_subsample: 0.8,
            feature_subsample: 0.8,
            min_leaf: 5,
            seed: 0,
            learning_rate: 0.1,
            n_estimators: 1,
            objective: "multi:softprob".into(),
        }
    }
}

impl TreeConfig {
    pub fn validate(&self) -> Result<()> {
        let frac = |v: f64| v > 0.0 && v <= 1.0;
        if !frac(self.row_subsample) || !frac(self.feature_subsample) {
            return Err(Error::Config("subsample fractions must lie in (0, 1]".into()));
        }
        if self.criteria.is_empty() || self.depths.is_empty() {
            return Err(Error::Config("empty tree grid".into()));
        }
        if self.max_depth_cap == 0 {
            return Err(Error::Config("max_depth_cap must be positive".into()));
        }
        Ok(())
    }

    /// Grid cells in selection-preference order: smaller depth first, then gini.
    pub fn grid(&self) -> Vec<(Criterion, usize)> {
        let mut depths = self.depths.clone();
        depths.sort_unstable();
        let mut criteria = self.criteria.clone();
        criteria.sort();
        criteria.dedup();
        depths
            .iter()
            .flat_map(|&d| criteria.iter().map(move |&c| (c, d)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Node {
    /// Binary split on a one-hot column: rows with the column active go to
    /// `present`, the rest to `absent`.
    Split {
        feature: usize,
        present: usize,
        absent: usize,
    },
    /// Per-class counts of the training rows routed here.
    Leaf { counts: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
    pub classes: Vec<String>,
    pub criterion: Criterion,
    pub depth: usize,
}

impl DecisionTree {
    const ROOT: usize = 0;

    /// Index of the leaf a row (active columns, sorted) falls into.
    pub fn leaf_of(&self, row: &[usize]) -> usize {
        let mut at = Self::ROOT;
        loop {
            match &self.nodes[at] {
                Node::Leaf { .. } => return at,
                Node::Split {
                    feature,
                    present,
                    absent,
                } => {
                    at = if row.binary_search(feature).is_ok() {
                        *present
                    } else {
                        *absent
                    };
                }
            }
        }
    }

    pub fn predict_row(&self, row: &[usize]) -> usize {
        match &self.nodes[self.leaf_of(row)] {
            Node::Leaf { counts } => argmax(counts),
            Node::Split { .. } => unreachable!("leaf_of returns a leaf"),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| matches!(self.nodes[i], Node::Leaf { .. }))
            .collect()
    }

    /// Root-to-leaf conditions `(column, active?)` for every leaf, keyed by leaf index.
    pub fn paths(&self) -> BTreeMap<usize, Vec<(usize, bool)>> {
        let mut out = BTreeMap::new();
        let mut stack = vec![(Self::ROOT, Vec::new())];
        while let Some((at, path)) = stack.pop() {
            match &self.nodes[at] {
                Node::Leaf { .. } => {
                    out.insert(at, path);
                }
                Node::Split {
                    feature,
                    present,
                    absent,
                } => {
                    let mut yes = path.clone();
                    yes.push((*feature, true));
                    let mut no = path;
                    no.push((*feature, false));
                    stack.push((*present, yes));
                    stack.push((*absent, no));
                }
            }
        }
        out
    }
}

/// Index of the largest count; ties resolve to the lowest index.
pub(crate) fn argmax(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub criterion: Criterion,
    pub depth: usize,
    pub dev_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeFit {
    pub tree: DecisionTree,
    pub selected: GridCell,
    pub candidates: Vec<GridCell>,
}

/// Grid-search a CART tree: each (criterion, depth) cell is fit on a seeded
/// row and column subsample of the training rows and scored on the dev rows
/// (training rows when there is no dev portion).
pub fn fit_tree(data: &Dataset, split: &Split, config: &TreeConfig) -> Result<TreeFit> {
    config.validate()?;
    if split.train.is_empty() {
        return Err(Error::EmptyData);
    }
    let eval_rows = if split.dev.is_empty() {
        &split.train
    } else {
        &split.dev
    };
    let gold: Vec<usize> = eval_rows.iter().map(|&r| data.y[r]).collect();

    let grid = config.grid();
    let fits: Vec<(DecisionTree, GridCell)> = grid
        .par_iter()
        .enumerate()
        .map(|(cell, &(criterion, depth))| {
            let tree = grow(data, &split.train, criterion, depth, config, cell as u64);
            let preds: Vec<usize> = eval_rows
                .iter()
                .map(|&r| tree.predict_row(&data.x.rows[r]))
                .collect();
            let cell = GridCell {
                criterion,
                depth,
                dev_accuracy: accuracy(&preds, &gold),
            };
            (tree, cell)
        })
        .collect();

    let mut best = 0;
    for (i, (_, cell)) in fits.iter().enumerate() {
        if cell.dev_accuracy > fits[best].1.dev_accuracy {
            best = i;
        }
    }
    let candidates = fits.iter().map(|(_, c)| c.clone()).collect();
    let (tree, selected) = fits.into_iter().nth(best).expect("non-empty grid");
    Ok(TreeFit {
        tree,
        selected,
        candidates,
    })
}

fn grow(
    data: &Dataset,
    train: &[usize],
    criterion: Criterion,
    depth: usize,
    config: &TreeConfig,
    cell: u64,
) -> DecisionTree {
    let mut rng = cell_rng(config.seed, cell);
    let n_rows = ((train.len() as f64) * config.row_subsample).round().max(1.0) as usize;
    let mut rows: Vec<usize> = sample(&mut rng, train.len(), n_rows.min(train.len()))
        .into_iter()
        .map(|i| train[i])
        .collect();
    rows.sort_unstable();

    let n_cols = data.x.n_cols;
    let mut allowed = vec![false; n_cols];
    if n_cols > 0 {
        let k = ((n_cols as f64) * config.feature_subsample).ceil() as usize;
        for c in sample(&mut rng, n_cols, k.clamp(1, n_cols)) {
            allowed[c] = true;
        }
    }

    let mut builder = Builder {
        data,
        criterion,
        max_depth: depth.min(config.max_depth_cap),
        min_leaf: config.min_leaf.max(1),
        allowed,
        nodes: Vec::new(),
        reached: 0,
    };
    builder.build(rows, 0);
    DecisionTree {
        nodes: builder.nodes,
        classes: data.classes.clone(),
        criterion,
        depth: builder.reached,
    }
}

struct Builder<'a> {
    data: &'a Dataset,
    criterion: Criterion,
    max_depth: usize,
    min_leaf: usize,
    allowed: Vec<bool>,
    nodes: Vec<Node>,
    reached: usize,
}

impl Builder<'_> {
    fn build(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        self.reached = self.reached.max(depth);
        let counts = self.data.class_counts(&rows);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            counts: counts.clone(),
        });

        let impure = counts.iter().filter(|&&c| c > 0).count() > 1;
        if !impure || depth >= self.max_depth || rows.len() < 2 * self.min_leaf {
            return id;
        }
        let Some(feature) = self.best_split(&rows, &counts) else {
            return id;
        };
        let (present, absent): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&r| self.data.x.rows[r].binary_search(&feature).is_ok());
        let present = self.build(present, depth + 1);
        let absent = self.build(absent, depth + 1);
        self.nodes[id] = Node::Split {
            feature,
            present,
            absent,
        };
        id
    }

    /// Column with the largest impurity decrease among splits leaving at
    /// least `min_leaf` rows on each side. A zero decrease still counts, so
    /// interactions such as XOR can be split.
    fn best_split(&self, rows: &[usize], counts: &[usize]) -> Option<usize> {
        let k = counts.len();
        let mut present: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &r in rows {
            let class = self.data.y[r];
            for &c in &self.data.x.rows[r] {
                if self.allowed[c] {
                    present.entry(c).or_insert_with(|| vec![0; k])[class] += 1;
                }
            }
        }
        let n = rows.len();
        let parent = self.criterion.impurity(counts, n);
        let mut best: Option<(usize, f64)> = None;
        for (feature, yes) in present {
            let n_yes: usize = yes.iter().sum();
            let n_no = n - n_yes;
            if n_yes < self.min_leaf || n_no < self.min_leaf {
                continue;
            }
            let no: Vec<usize> = counts.iter().zip(&yes).map(|(t, y)| t - y).collect();
            let child = (n_yes as f64 * self.criterion.impurity(&yes, n_yes)
                + n_no as f64 * self.criterion.impurity(&no, n_no))
                / n as f64;
            let gain = parent - child;
            if best.is_none_or(|(_, g)| gain > g + 1e-12) {
                best = Some((feature, gain));
            }
        }
        best.map(|(f, _)| f)
    }
}
