use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{accuracy, cell_rng, Dataset, Split};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassWeight {
    /// Each sample weighted by `n / (k * n_class)`.
    Balanced,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinearConfig {
    pub c_grid: Vec<f64>,
    pub class_weights: Vec<ClassWeight>,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for LinearConfig {
    fn default() -> Self {
        LinearConfig {
            c_grid: vec![0.001, 0.01],
            class_weights: vec![ClassWeight::Balanced, ClassWeight::None],
            epochs: 20,
            seed: 0,
        }
    }
}

impl LinearConfig {
    pub fn validate(&self) -> Result<()> {
        if self.c_grid.is_empty() || self.class_weights.is_empty() {
            return Err(Error::Config("empty linear grid".into()));
        }
        if self.c_grid.iter().any(|&c| !(c > 0.0)) {
            return Err(Error::Config("C must be positive".into()));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be positive".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<(f64, ClassWeight)> {
        self.c_grid
            .iter()
            .flat_map(|&c| self.class_weights.iter().map(move |&w| (c, w)))
            .collect()
    }
}

/// One-vs-rest linear classifier: one weight vector and bias per class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub classes: Vec<String>,
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub c: f64,
    pub class_weight: ClassWeight,
}

impl LinearModel {
    pub fn scores(&self, row: &[usize]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(w, b)| b + row.iter().map(|&c| w[c]).sum::<f64>())
            .collect()
    }

    pub fn predict_row(&self, row: &[usize]) -> usize {
        let scores = self.scores(row);
        let mut best = 0;
        for (i, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = i;
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub model: LinearModel,
    pub dev_accuracy: f64,
    /// `(C, class weight, dev accuracy)` for every grid cell, in grid order.
    pub candidates: Vec<(f64, ClassWeight, f64)>,
}

/// Grid-search a one-vs-rest hinge-loss classifier. Each binary problem
/// minimises `½‖w‖² + C Σ sᵢ max(0, 1 − yᵢ(w·xᵢ + b))` by seeded stochastic
/// subgradient descent; the bias is a regularised constant column.
pub fn fit_linear(data: &Dataset, split: &Split, config: &LinearConfig) -> Result<LinearFit> {
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

    let fits: Vec<(LinearModel, f64)> = config
        .grid()
        .into_par_iter()
        .enumerate()
        .map(|(cell, (c, weight))| {
            let model = train(data, &split.train, c, weight, config, cell as u64);
            let preds: Vec<usize> = eval_rows
                .iter()
                .map(|&r| model.predict_row(&data.x.rows[r]))
                .collect();
            let acc = accuracy(&preds, &gold);
            (model, acc)
        })
        .collect();

    let mut best = 0;
    for (i, (_, acc)) in fits.iter().enumerate() {
        if *acc > fits[best].1 {
            best = i;
        }
    }
    let candidates = fits
        .iter()
        .map(|(m, acc)| (m.c, m.class_weight, *acc))
        .collect();
    let (model, dev_accuracy) = fits.into_iter().nth(best).expect("non-empty grid");
    Ok(LinearFit {
        model,
        dev_accuracy,
        candidates,
    })
}

fn sample_weights(data: &Dataset, rows: &[usize], mode: ClassWeight) -> Vec<f64> {
    match mode {
        ClassWeight::None => vec![1.0; rows.len()],
        ClassWeight::Balanced => {
            let counts = data.class_counts(rows);
            let present = counts.iter().filter(|&&c| c > 0).count() as f64;
            let n = rows.len() as f64;
            rows.iter()
                .map(|&r| n / (present * counts[data.y[r]] as f64))
                .collect()
        }
    }
}

fn train(
    data: &Dataset,
    rows: &[usize],
    c: f64,
    mode: ClassWeight,
    config: &LinearConfig,
    cell: u64,
) -> LinearModel {
    let k = data.classes.len();
    let d = data.x.n_cols;
    let weights = sample_weights(data, rows, mode);
    let present = data.class_counts(rows);

    let (w, b): (Vec<Vec<f64>>, Vec<f64>) = (0..k)
        .into_par_iter()
        .map(|class| {
            if present[class] == rows.len() {
                // every training row is this class: constant positive score
                return (vec![0.0; d], 1.0);
            }
            if present[class] == 0 {
                return (vec![0.0; d], -1.0);
            }
            let mut rng = cell_rng(config.seed ^ cell.rotate_left(32), class as u64);
            pegasos(data, rows, &weights, class, c, config.epochs, &mut rng)
        })
        .unzip();

    LinearModel {
        classes: data.classes.clone(),
        weights: w,
        bias: b,
        c,
        class_weight: mode,
    }
}

/// Binary Pegasos with a lazily applied shrink factor. Iterates are averaged
/// over the second half of the epochs.
fn pegasos(
    data: &Dataset,
    rows: &[usize],
    sample_weight: &[f64],
    positive: usize,
    c: f64,
    epochs: usize,
    rng: &mut impl rand::Rng,
) -> (Vec<f64>, f64) {
    let n = rows.len();
    let d = data.x.n_cols;
    let lambda = 1.0 / (c * n as f64);
    // w = scale * v, with the bias stored as column d
    let mut v = vec![0.0; d + 1];
    let mut scale = 1.0;
    let mut avg = vec![0.0; d + 1];
    let mut averaged = 0usize;
    let mut order: Vec<usize> = (0..n).collect();
    let mut t = 1.0f64;

    for epoch in 0..epochs {
        order.shuffle(rng);
        for &i in &order {
            let r = rows[i];
            let x = &data.x.rows[r];
            let y = if data.y[r] == positive { 1.0 } else { -1.0 };
            let margin = y * scale * (v[d] + x.iter().map(|&j| v[j]).sum::<f64>());
            let eta = 1.0 / (lambda * (t + 1.0));
            scale *= 1.0 - eta * lambda;
            if margin < 1.0 {
                let step = eta * sample_weight[i] * y / scale;
                for &j in x {
                    v[j] += step;
                }
                v[d] += step;
            }
            if scale < 1e-9 {
                for value in &mut v {
                    *value *= scale;
                }
                scale = 1.0;
            }
            t += 1.0;
        }
        if epoch >= epochs / 2 {
            for (a, value) in avg.iter_mut().zip(&v) {
                *a += scale * value;
            }
            averaged += 1;
        }
    }
    let norm = averaged.max(1) as f64;
    let bias = avg[d] / norm;
    avg.truncate(d);
    for a in &mut avg {
        *a /= norm;
    }
    (avg, bias)
}
