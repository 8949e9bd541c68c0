//! Turn fitted models into grammar rules: tree leaves filtered by a
//! goodness-of-fit test, top-weighted features of linear models, example
//! and exception attachment, and plain-English rendering.

mod chi2;
mod render;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::featurize::{vectorize, FeatureVocabulary, Instance, Provenance};
use crate::learners::{most_frequent_baseline, DecisionTree, LinearModel, Node};

pub use chi2::{
    chi2_relabel, chi2_sf, gamma_q, ln_gamma, pearson, Chi2Config, Chi2Outcome, ExpectedMode,
    Verdict,
};
pub use render::{describe_atom, render_rule, Glossary, RuleContext, RuleTask};

/// Number of features kept per class when reading a linear model.
pub const TOP_FEATURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Condition {
    pub atom: String,
    /// `true` when the atom must be present, `false` when it must be absent.
    pub present: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrammarRule {
    pub conditions: Vec<Condition>,
    pub label: String,
    /// Training rows reaching the leaf, per label.
    pub support: BTreeMap<String, usize>,
    pub chi2: f64,
    pub p_value: f64,
    pub verdict: Verdict,
    pub examples: Vec<Provenance>,
    pub counter_examples: Vec<Provenance>,
    /// All condition-satisfying instances with a different label.
    pub exception_count: usize,
    /// Set when no instance satisfies the rule's conditions with its label.
    pub unattested: bool,
    pub rendered: String,
}

impl GrammarRule {
    pub fn matches(&self, instance: &Instance) -> bool {
        self.conditions
            .iter()
            .all(|c| instance.has_atom(&c.atom) == c.present)
    }

    pub fn support_total(&self) -> usize {
        self.support.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSet {
    /// One candidate per leaf in node order, then the default rule.
    pub rules: Vec<GrammarRule>,
    /// Number of significant leaves.
    pub rule_count: usize,
}

impl RuleSet {
    pub fn significant(&self) -> impl Iterator<Item = &GrammarRule> {
        self.rules
            .iter()
            .filter(|r| r.verdict == Verdict::Significant)
    }

    pub fn default_rule(&self) -> Option<&GrammarRule> {
        self.rules.iter().find(|r| r.verdict == Verdict::Default)
    }
}

fn expected_distribution(mode: ExpectedMode, classes: &[String], marginal: &[usize]) -> Vec<f64> {
    match mode {
        ExpectedMode::Uniform => vec![1.0 / classes.len() as f64; classes.len()],
        ExpectedMode::Empirical => {
            let n: usize = marginal.iter().sum();
            marginal.iter().map(|&c| c as f64 / n as f64).collect()
        }
    }
}

/// One candidate rule per leaf, tested against the null distribution given
/// by `config.expected_mode`, plus a default rule for the overall majority.
///
/// `instances` are the training instances; they are re-routed through the
/// tree to obtain leaf support. When `required_label` is set, only leaves
/// dominated by that label can become rules.
pub fn extract_tree_rules(
    tree: &DecisionTree,
    vocab: &FeatureVocabulary,
    instances: &[Instance],
    config: &Chi2Config,
    required_label: Option<&str>,
) -> Result<RuleSet> {
    let classes = &tree.classes;
    let (x, _) = vectorize(instances, vocab);
    let label_index = |l: &str| classes.iter().position(|c| c == l);

    let mut leaf_counts: BTreeMap<usize, Vec<usize>> = tree
        .leaves()
        .into_iter()
        .map(|l| (l, vec![0; classes.len()]))
        .collect();
    let mut marginal = vec![0; classes.len()];
    for (row, instance) in x.rows.iter().zip(instances) {
        let Some(class) = label_index(&instance.label) else {
            continue;
        };
        marginal[class] += 1;
        if let Some(counts) = leaf_counts.get_mut(&tree.leaf_of(row)) {
            counts[class] += 1;
        }
    }
    let expected = expected_distribution(config.expected_mode, classes, &marginal);
    let required = required_label.and_then(label_index);
    let support_map = |counts: &[usize]| -> BTreeMap<String, usize> {
        classes.iter().cloned().zip(counts.iter().copied()).collect()
    };

    let paths = tree.paths();
    let mut rules = Vec::new();
    for (leaf, counts) in &leaf_counts {
        let conditions = paths[leaf]
            .iter()
            .map(|&(col, present)| Condition {
                atom: vocab.name(col).to_string(),
                present,
            })
            .collect();
        let n: usize = counts.iter().sum();
        let (label, chi2, p_value, verdict) = if n == 0 {
            let label = match &tree.nodes[*leaf] {
                Node::Leaf { counts } => crate::learners::argmax(counts),
                Node::Split { .. } => 0,
            };
            (label, 0.0, 1.0, Verdict::Inconclusive)
        } else {
            let out = chi2_relabel(counts, &expected, config, required)?;
            (out.label, out.statistic, out.p_value, out.verdict)
        };
        rules.push(GrammarRule {
            conditions,
            label: classes[label].clone(),
            support: support_map(counts),
            chi2,
            p_value,
            verdict,
            examples: Vec::new(),
            counter_examples: Vec::new(),
            exception_count: 0,
            unattested: false,
            rendered: String::new(),
        });
    }
    let rule_count = rules
        .iter()
        .filter(|r| r.verdict == Verdict::Significant)
        .count();

    let labels: Vec<&str> = instances.iter().map(|i| i.label.as_str()).collect();
    if let Some(majority) = most_frequent_baseline(&labels) {
        let (chi2, p_value) = if marginal.iter().sum::<usize>() > 0 {
            let (stat, df) = pearson(&marginal, &expected)?;
            (stat, chi2_sf(stat, df))
        } else {
            (0.0, 1.0)
        };
        rules.push(GrammarRule {
            conditions: Vec::new(),
            label: majority,
            support: support_map(&marginal),
            chi2,
            p_value,
            verdict: Verdict::Default,
            examples: Vec::new(),
            counter_examples: Vec::new(),
            exception_count: 0,
            unattested: false,
            rendered: String::new(),
        });
    }
    Ok(RuleSet { rules, rule_count })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureWeight {
    pub atom: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFeatures {
    pub class: String,
    pub features: Vec<FeatureWeight>,
}

/// The `k` most positively weighted features of each class, heaviest first.
pub fn extract_linear_rules(
    model: &LinearModel,
    vocab: &FeatureVocabulary,
    k: usize,
) -> Vec<ClassFeatures> {
    model
        .classes
        .iter()
        .zip(&model.weights)
        .map(|(class, weights)| {
            let mut ranked: Vec<(usize, f64)> = weights
                .iter()
                .copied()
                .enumerate()
                .filter(|&(_, w)| w > 0.0)
                .collect();
            ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            ClassFeatures {
                class: class.clone(),
                features: ranked
                    .into_iter()
                    .take(k)
                    .map(|(col, weight)| FeatureWeight {
                        atom: vocab.name(col).to_string(),
                        weight,
                    })
                    .collect(),
            }
        })
        .collect()
}

/// Order instances shortest sentence first, one per sentence, at most `max`.
pub fn pick_examples<'a, I, F>(candidates: I, sentence_len: F, max: usize) -> Vec<Provenance>
where
    I: IntoIterator<Item = &'a Instance>,
    F: Fn(&str) -> usize,
{
    let mut ranked: Vec<(usize, &Provenance)> = candidates
        .into_iter()
        .map(|i| (sentence_len(&i.provenance.sentence_id), &i.provenance))
        .collect();
    ranked.sort();
    let mut seen = BTreeSet::new();
    ranked
        .into_iter()
        .filter(|(_, p)| seen.insert(p.sentence_id.clone()))
        .take(max)
        .map(|(_, p)| p.clone())
        .collect()
}

/// Attach up to `max_each` examples (conditions hold, label matches) and
/// counter-examples (conditions hold, label differs), shortest sentences first.
pub fn attach_examples<F>(
    mut rule: GrammarRule,
    instances: &[Instance],
    sentence_len: F,
    max_each: usize,
) -> GrammarRule
where
    F: Fn(&str) -> usize,
{
    let matching: Vec<&Instance> = instances.iter().filter(|i| rule.matches(i)).collect();
    let (hits, misses): (Vec<&Instance>, Vec<&Instance>) =
        matching.into_iter().partition(|i| i.label == rule.label);
    rule.exception_count = misses.len();
    rule.unattested = hits.is_empty();
    rule.examples = pick_examples(hits, &sentence_len, max_each);
    rule.counter_examples = pick_examples(misses, &sentence_len, max_each);
    rule
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featurize::{build_vocabulary, FeatureMap};
    use crate::learners::{fit_tree, ClassWeight, Dataset, Split, TreeConfig};

    fn instance(sentence: &str, atoms: &[(&str, &str)], label: &str) -> Instance {
        Instance {
            features: atoms
                .iter()
                .map(|(n, v)| (n.to_string(), v.to_string()))
                .collect::<FeatureMap>(),
            label: label.into(),
            provenance: Provenance {
                sentence_id: sentence.into(),
                dependent: 1,
                head: Some(2),
            },
        }
    }

    fn fit(instances: &[Instance]) -> (DecisionTree, FeatureVocabulary) {
        let vocab = build_vocabulary(instances);
        let (x, y) = vectorize(instances, &vocab);
        let data = Dataset::new(x, &y);
        let split = Split {
            train: (0..instances.len()).collect(),
            dev: vec![],
            test: vec![],
        };
        let config = TreeConfig {
            row_subsample: 1.0,
            feature_subsample: 1.0,
            ..TreeConfig::default()
        };
        (fit_tree(&data, &split, &config).unwrap().tree, vocab)
    }

    fn uniform() -> Chi2Config {
        Chi2Config {
            expected_mode: ExpectedMode::Uniform,
            ..Chi2Config::default()
        }
    }

    #[test]
    fn single_leaf_gives_only_default() {
        let data: Vec<Instance> = (0..30)
            .map(|i| instance(&format!("s{i}"), &[("dep:upos", "NOUN")], "before"))
            .collect();
        let (tree, vocab) = fit(&data);
        let set = extract_tree_rules(&tree, &vocab, &data, &uniform(), None).unwrap();
        assert_eq!(set.rule_count, 0);
        assert_eq!(set.default_rule().unwrap().label, "before");
        assert_eq!(set.rules.iter().filter(|r| r.verdict == Verdict::Default).count(), 1);
    }

    #[test]
    fn interrogative_leaf_becomes_a_rule() {
        let mut data = Vec::new();
        for i in 0..90 {
            data.push(instance(&format!("s{i}"), &[("dep:upos", "NOUN")], "before"));
        }
        for i in 90..120 {
            data.push(instance(
                &format!("s{i}"),
                &[("dep:upos", "NOUN"), ("dep:PronType", "Int")],
                "after",
            ));
        }
        let (tree, vocab) = fit(&data);
        let set = extract_tree_rules(&tree, &vocab, &data, &uniform(), None).unwrap();
        let after: Vec<&GrammarRule> = set.significant().filter(|r| r.label == "after").collect();
        assert_eq!(after.len(), 1);
        assert_eq!(
            after[0].conditions,
            vec![Condition { atom: "dep:PronType=Int".into(), present: true }]
        );
        assert_eq!(set.default_rule().unwrap().label, "before");
        assert_eq!(set.rule_count, set.significant().count());
    }

    #[test]
    fn attached_examples_satisfy_conditions() {
        let mut data = Vec::new();
        for i in 0..20 {
            let label = if i % 4 == 0 { "before" } else { "after" };
            data.push(instance(&format!("s{i}"), &[("dep:PronType", "Int")], label));
        }
        data.push(instance("other", &[], "before"));
        let rule = GrammarRule {
            conditions: vec![Condition { atom: "dep:PronType=Int".into(), present: true }],
            label: "after".into(),
            support: BTreeMap::new(),
            chi2: 0.0,
            p_value: 1.0,
            verdict: Verdict::Significant,
            examples: vec![],
            counter_examples: vec![],
            exception_count: 0,
            unattested: false,
            rendered: String::new(),
        };
        let len = |id: &str| id.len();
        let rule = attach_examples(rule, &data, len, 5);
        assert_eq!(rule.examples.len(), 5);
        assert_eq!(rule.exception_count, 5);
        let by_id: BTreeMap<&str, &Instance> =
            data.iter().map(|i| (i.provenance.sentence_id.as_str(), i)).collect();
        for p in &rule.examples {
            let inst = by_id[p.sentence_id.as_str()];
            assert!(rule.matches(inst) && inst.label == "after");
        }
        for p in &rule.counter_examples {
            let inst = by_id[p.sentence_id.as_str()];
            assert!(rule.matches(inst) && inst.label != "after");
        }
        // shortest first: single-digit ids precede two-digit ones
        assert!(rule.examples[0].sentence_id.len() <= rule.examples[4].sentence_id.len());
    }

    #[test]
    fn rule_without_matches_is_flagged() {
        let rule = GrammarRule {
            conditions: vec![Condition { atom: "x=1".into(), present: true }],
            label: "a".into(),
            support: BTreeMap::new(),
            chi2: 0.0,
            p_value: 1.0,
            verdict: Verdict::Inconclusive,
            examples: vec![],
            counter_examples: vec![],
            exception_count: 0,
            unattested: false,
            rendered: String::new(),
        };
        let rule = attach_examples(rule, &[instance("s", &[], "a")], |_| 1, 5);
        assert!(rule.examples.is_empty() && rule.unattested);
    }

    #[test]
    fn linear_rules_rank_positive_weights() {
        let vocab = FeatureVocabulary::from_names(["a=1".to_string(), "b=1".to_string(), "c=1".to_string()]);
        let model = LinearModel {
            classes: vec!["x".into(), "y".into()],
            weights: vec![vec![2.0, -1.0, 0.5], vec![-2.0, 3.0, 0.1]],
            bias: vec![0.0, 0.0],
            c: 0.01,
            class_weight: ClassWeight::None,
        };
        let rules = extract_linear_rules(&model, &vocab, TOP_FEATURES);
        assert_eq!(rules[0].features[0].atom, "a=1");
        assert_eq!(rules[1].features[0].atom, "b=1");
        assert_eq!(rules[0].features.len(), 2);
        let one = extract_linear_rules(&model, &vocab, 1);
        assert_eq!(one[0].features.len(), 1);
    }

    #[test]
    fn rendered_rule_has_template_shape() {
        let mut support = BTreeMap::new();
        support.insert("after".to_string(), 30);
        support.insert("before".to_string(), 2);
        let rule = GrammarRule {
            conditions: vec![Condition { atom: "dep:PronType=Int".into(), present: true }],
            label: "after".into(),
            support,
            chi2: 0.0,
            p_value: 0.0,
            verdict: Verdict::Significant,
            examples: vec![],
            counter_examples: vec![],
            exception_count: 2,
            unattested: false,
            rendered: String::new(),
        };
        let text = render_rule(&rule, &RuleContext::word_order("object", "verb"), &Glossary::default());
        assert_eq!(
            text,
            "If the object is interrogative pronoun, then the object comes after the verb (94% of 32 cases). Exceptions: 2."
        );
    }
}
