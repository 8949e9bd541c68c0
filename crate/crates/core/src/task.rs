//! Shared split / fit / evaluate / mine loop behind every classification task.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featurize::{build_vocabulary, vectorize, FeatureVocabulary, Instance};
use crate::learners::{
    accuracy, fit_linear, fit_tree, most_frequent_baseline, split_indices, Dataset, LinearConfig,
    LinearFit, Split, TrainedModel, TreeConfig, TreeFit,
};
use crate::ruleminer::{
    attach_examples, describe_atom, extract_linear_rules, extract_tree_rules, pick_examples,
    render_rule, Chi2Config, ExpectedMode, Glossary, GrammarRule, RuleContext, TOP_FEATURES,
};

/// Settings common to all mining tasks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MiningSettings {
    pub seed: u64,
    /// Train / dev / test fractions.
    pub split: [f64; 3],
    pub min_instances: usize,
    pub max_examples: usize,
    pub top_features: usize,
    pub tree: TreeConfig,
    pub linear: LinearConfig,
    pub chi2: Chi2Config,
}

impl Default for MiningSettings {
    fn default() -> Self {
        MiningSettings {
            seed: 0,
            split: [0.8, 0.1, 0.1],
            min_instances: 50,
            max_examples: 5,
            top_features: TOP_FEATURES,
            tree: TreeConfig::default(),
            linear: LinearConfig::default(),
            chi2: Chi2Config::default(),
        }
    }
}

impl MiningSettings {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let sum: f64 = self.split.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || self.split.iter().any(|&f| f < 0.0) {
            return Err(Error::Config(format!("split ratios {:?} must sum to 1", self.split)));
        }
        self.tree.validate()?;
        self.linear.validate()?;
        self.chi2.validate()
    }

    pub(crate) fn tree_config(&self) -> TreeConfig {
        TreeConfig {
            seed: self.seed,
            ..self.tree.clone()
        }
    }

    pub(crate) fn linear_config(&self) -> LinearConfig {
        LinearConfig {
            seed: self.seed,
            ..self.linear.clone()
        }
    }
}

/// Held-out scores of a task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub model_accuracy: f64,
    pub baseline_accuracy: f64,
    pub baseline_label: String,
    /// Rules extracted (or, for vocabulary, word pairs).
    pub count: usize,
    pub train_size: usize,
    pub dev_size: usize,
    pub test_size: usize,
}

/// Rules mined from a linear model for one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearRule {
    pub class: String,
    pub features: Vec<RankedFeature>,
    pub rendered: String,
    pub examples: Vec<crate::featurize::Provenance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    pub atom: String,
    pub weight: f64,
    pub phrase: String,
}

/// Everything a tree task produces.
#[derive(Debug, Clone)]
pub struct TreeTaskResult {
    pub instances: Vec<Instance>,
    pub split: Split,
    pub vocab: FeatureVocabulary,
    pub fit: TreeFit,
    pub rules: Vec<GrammarRule>,
    pub rule_count: usize,
    pub evaluation: Evaluation,
}

impl TreeTaskResult {
    pub fn model(&self) -> TrainedModel {
        TrainedModel::Tree(self.fit.tree.clone())
    }
}

#[derive(Debug, Clone)]
pub struct LinearTaskResult {
    pub instances: Vec<Instance>,
    pub split: Split,
    pub vocab: FeatureVocabulary,
    pub fit: LinearFit,
    pub rules: Vec<LinearRule>,
    pub evaluation: Evaluation,
}

struct Prepared {
    vocab: FeatureVocabulary,
    data: Dataset,
    split: Split,
    baseline: String,
}

fn prepare(instances: &[Instance], settings: &MiningSettings) -> Result<Prepared> {
    settings.validate()?;
    if instances.is_empty() {
        return Err(Error::EmptyData);
    }
    let split = split_indices(
        instances.len(),
        settings.split[0],
        settings.split[1],
        settings.seed,
    );
    let train: Vec<Instance> = split.train.iter().map(|&i| instances[i].clone()).collect();
    let vocab = build_vocabulary(&train);
    let (x, labels) = vectorize(instances, &vocab);
    let data = Dataset::new(x, &labels);
    let train_labels: Vec<&str> = train.iter().map(|i| i.label.as_str()).collect();
    let baseline = most_frequent_baseline(&train_labels).ok_or(Error::EmptyData)?;
    Ok(Prepared {
        vocab,
        data,
        split,
        baseline,
    })
}

fn evaluate(prep: &Prepared, model: &TrainedModel, count: usize) -> Evaluation {
    let rows = &prep.split.test;
    let gold: Vec<&str> = rows.iter().map(|&r| prep.data.classes[prep.data.y[r]].as_str()).collect();
    let predicted = model.predict_labels(&prep.data.x, rows);
    let predicted: Vec<&str> = predicted.iter().map(String::as_str).collect();
    let baseline = vec![prep.baseline.as_str(); rows.len()];
    Evaluation {
        model_accuracy: accuracy(&predicted, &gold),
        baseline_accuracy: accuracy(&baseline, &gold),
        baseline_label: prep.baseline.clone(),
        count,
        train_size: prep.split.train.len(),
        dev_size: prep.split.dev.len(),
        test_size: rows.len(),
    }
}

/// Token counts per sentence id, for ordering examples.
pub type SentenceLengths = BTreeMap<String, usize>;

/// Split, fit the tree grid, evaluate on the test portion, and mine
/// significant leaves as rules with examples.
pub fn run_tree_task(
    instances: Vec<Instance>,
    settings: &MiningSettings,
    expected_mode: ExpectedMode,
    required_label: Option<&str>,
    ctx: &RuleContext,
    glossary: &Glossary,
    lengths: &SentenceLengths,
) -> Result<TreeTaskResult> {
    let prep = prepare(&instances, settings)?;
    let fit = fit_tree(&prep.data, &prep.split, &settings.tree_config())?;
    let train: Vec<Instance> = prep.split.train.iter().map(|&i| instances[i].clone()).collect();
    let chi2 = Chi2Config {
        expected_mode,
        ..settings.chi2.clone()
    };
    let set = extract_tree_rules(&fit.tree, &prep.vocab, &train, &chi2, required_label)?;
    let len = |id: &str| lengths.get(id).copied().unwrap_or(usize::MAX);
    let rules: Vec<GrammarRule> = set
        .rules
        .into_iter()
        .map(|rule| {
            let mut rule = attach_examples(rule, &instances, len, settings.max_examples);
            rule.rendered = render_rule(&rule, ctx, glossary);
            rule
        })
        .collect();
    let evaluation = evaluate(&prep, &TrainedModel::Tree(fit.tree.clone()), set.rule_count);
    Ok(TreeTaskResult {
        instances,
        split: prep.split,
        vocab: prep.vocab,
        fit,
        rules,
        rule_count: set.rule_count,
        evaluation,
    })
}

/// Split, fit the linear grid, evaluate, and read off the top features of
/// every class.
pub fn run_linear_task(
    instances: Vec<Instance>,
    settings: &MiningSettings,
    ctx: &RuleContext,
    glossary: &Glossary,
    lengths: &SentenceLengths,
) -> Result<LinearTaskResult> {
    let prep = prepare(&instances, settings)?;
    let fit = fit_linear(&prep.data, &prep.split, &settings.linear_config())?;
    let len = |id: &str| lengths.get(id).copied().unwrap_or(usize::MAX);
    let rules: Vec<LinearRule> = extract_linear_rules(&fit.model, &prep.vocab, settings.top_features)
        .into_iter()
        .filter(|c| !c.features.is_empty())
        .map(|class| {
            let features: Vec<RankedFeature> = class
                .features
                .iter()
                .map(|f| RankedFeature {
                    atom: f.atom.clone(),
                    weight: f.weight,
                    phrase: describe_atom(&f.atom, ctx, glossary),
                })
                .collect();
            let shown: Vec<&str> = features.iter().take(3).map(|f| f.phrase.as_str()).collect();
            let rendered = format!(
                "{} when {}.",
                capitalize(&ctx.label_phrase(&class.class, glossary)),
                shown.join(", or ")
            );
            let members = instances.iter().filter(|i| i.label == class.class);
            LinearRule {
                examples: pick_examples(members, len, settings.max_examples),
                class: class.class,
                features,
                rendered,
            }
        })
        .collect();
    let evaluation = evaluate(&prep, &TrainedModel::Linear(fit.model.clone()), rules.len());
    Ok(LinearTaskResult {
        instances,
        split: prep.split,
        vocab: prep.vocab,
        fit,
        rules,
        evaluation,
    })
}

fn capitalize(text: &str) -> String {
    let mut chars = text.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featurize::Provenance;

    fn instance(i: usize, flag: bool) -> Instance {
        let mut features = BTreeMap::new();
        features.insert("dep:upos".to_string(), "NOUN".to_string());
        if flag {
            features.insert("dep:PronType".to_string(), "Int".to_string());
        }
        Instance {
            features,
            label: if flag { "after" } else { "before" }.into(),
            provenance: Provenance {
                sentence_id: format!("s{i}"),
                dependent: 1,
                head: Some(2),
            },
        }
    }

    #[test]
    fn split_ratios_must_sum_to_one() {
        let s = MiningSettings {
            split: [0.5, 0.1, 0.1],
            ..MiningSettings::default()
        };
        assert!(matches!(s.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn tree_task_end_to_end() {
        let data: Vec<Instance> = (0..200).map(|i| instance(i, i % 5 == 0)).collect();
        let res = run_tree_task(
            data,
            &MiningSettings::default(),
            ExpectedMode::Uniform,
            None,
            &RuleContext::word_order("object", "verb"),
            &Glossary::default(),
            &SentenceLengths::new(),
        )
        .unwrap();
        assert_eq!(res.evaluation.model_accuracy, 1.0);
        assert_eq!(res.evaluation.baseline_label, "before");
        assert!(res.rules.iter().all(|r| !r.rendered.is_empty()));
        assert_eq!(res.evaluation.count, res.rule_count);
    }

    #[test]
    fn linear_task_end_to_end() {
        let data: Vec<Instance> = (0..200).map(|i| instance(i, i % 3 == 0)).collect();
        let res = run_linear_task(
            data,
            &MiningSettings::default(),
            &RuleContext::suffix("noun"),
            &Glossary::default(),
            &SentenceLengths::new(),
        )
        .unwrap();
        assert_eq!(res.evaluation.model_accuracy, 1.0);
        let after = res.rules.iter().find(|r| r.class == "after").unwrap();
        assert_eq!(after.features[0].atom, "dep:PronType=Int");
    }
}
