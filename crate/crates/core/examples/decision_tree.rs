//! Fit the tree learner on XOR, which no single feature separates.

use teachgram::featurize::{build_vocabulary, vectorize, FeatureMap, Instance, Provenance};
use teachgram::learners::{accuracy, fit_tree, most_frequent_baseline, split_indices, Dataset, TrainedModel, TreeConfig};

fn main() -> teachgram::Result<()> {
    let instances: Vec<Instance> = (0..400)
        .map(|i| {
            let (a, b) = (i % 2 == 1, (i / 2) % 2 == 1);
            let mut features = FeatureMap::new();
            features.insert("a".into(), a.to_string());
            features.insert("b".into(), b.to_string());
            Instance {
                features,
                label: if a ^ b { "yes" } else { "no" }.into(),
                provenance: Provenance { sentence_id: format!("r{i}"), dependent: 1, head: None },
            }
        })
        .collect();
    let vocab = build_vocabulary(&instances);
    let (x, labels) = vectorize(&instances, &vocab);
    let data = Dataset::new(x, &labels);
    let split = split_indices(data.len(), 0.8, 0.1, 1);
    let fit = fit_tree(&data, &split, &TreeConfig { seed: 1, ..TreeConfig::default() })?;
    println!("selected {:?} depth {}", fit.selected.criterion, fit.selected.depth);

    let predicted = TrainedModel::Tree(fit.tree).predict_labels(&data.x, &split.test);
    let gold: Vec<&str> = split.test.iter().map(|&r| labels[r].as_str()).collect();
    let train: Vec<&str> = split.train.iter().map(|&r| labels[r].as_str()).collect();
    let majority = most_frequent_baseline(&train).unwrap_or_default();
    let baseline = vec![majority; gold.len()];
    println!("tree {:.3}, baseline {:.3}", accuracy(&predicted, &gold), accuracy(&baseline, &gold));
    Ok(())
}
