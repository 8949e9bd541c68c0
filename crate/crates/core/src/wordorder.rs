//! Word order as before/after classification over head–dependent arcs.

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::featurize::{extract_context_features, FeatureTemplate, Instance, LemmaVocabulary, Provenance};
use crate::ruleminer::{ExpectedMode, Glossary, RuleContext};
use crate::task::{run_tree_task, MiningSettings, SentenceLengths, TreeTaskResult};

pub const BEFORE: &str = "before";
pub const AFTER: &str = "after";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderTask {
    pub name: String,
    /// Role names used when rendering, e.g. "object" and "verb".
    pub dependent: String,
    pub head: String,
    /// Matched against the base relation (`nsubj:pass` counts as `nsubj`).
    pub deprels: Vec<String>,
    /// Allowed head POS tags; empty means any.
    pub head_upos: Vec<String>,
}

impl OrderTask {
    pub fn new(name: &str, dependent: &str, head: &str, deprel: &str, head_upos: &[&str]) -> Self {
        OrderTask {
            name: name.into(),
            dependent: dependent.into(),
            head: head.into(),
            deprels: vec![deprel.into()],
            head_upos: head_upos.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// subject-verb, object-verb, numeral-noun, adjective-noun, noun-adposition.
    pub fn defaults() -> Vec<OrderTask> {
        vec![
            OrderTask::new("subject-verb", "subject", "verb", "nsubj", &["VERB"]),
            OrderTask::new("object-verb", "object", "verb", "obj", &["VERB"]),
            OrderTask::new("numeral-noun", "numeral", "noun", "nummod", &["NOUN"]),
            OrderTask::new("adjective-noun", "adjective", "noun", "amod", &["NOUN"]),
            OrderTask::new("noun-adposition", "adposition", "noun", "case", &["NOUN", "PROPN", "PRON"]),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if self.deprels.is_empty() {
            return Err(Error::Config(format!("order task {} has no relations", self.name)));
        }
        Ok(())
    }

    pub fn context(&self) -> RuleContext {
        RuleContext::word_order(&self.dependent, &self.head)
    }
}

/// Context features without neighbour POS: the neighbours of a dependent
/// reveal which side of the head it sits on.
pub fn order_template() -> FeatureTemplate {
    FeatureTemplate {
        use_neighbor_pos: false,
        ..FeatureTemplate::default()
    }
}

/// One instance per arc matching the task; the label is "before" when the
/// dependent precedes its head.
pub fn extract_order_instances(
    corpus: &Corpus,
    task: &OrderTask,
    template: &FeatureTemplate,
    lemmas: &LemmaVocabulary,
) -> Vec<Instance> {
    let mut out = Vec::new();
    for sentence in &corpus.sentences {
        for dep in &sentence.tokens {
            let Some(head_index) = dep.head.filter(|&h| h > 0) else {
                continue;
            };
            if !task.deprels.iter().any(|r| r == dep.base_deprel()) {
                continue;
            }
            let Some(head) = sentence.token(head_index) else {
                continue;
            };
            if !task.head_upos.is_empty() && !task.head_upos.iter().any(|u| u == head.upos()) {
                continue;
            }
            out.push(Instance {
                features: extract_context_features(sentence, head_index, dep.index, template, lemmas),
                label: if dep.index < head_index { BEFORE } else { AFTER }.into(),
                provenance: Provenance {
                    sentence_id: sentence.id.clone(),
                    dependent: dep.index,
                    head: Some(head_index),
                },
            });
        }
    }
    out
}

pub fn sentence_lengths(corpus: &Corpus) -> SentenceLengths {
    corpus
        .sentences
        .iter()
        .map(|s| (s.id.clone(), s.len()))
        .collect()
}

/// Extract, fit and mine one word-order task. Returns `Ok(None)` when fewer
/// than `settings.min_instances` arcs match.
pub fn run_order_task(
    corpus: &Corpus,
    task: &OrderTask,
    settings: &MiningSettings,
    lemmas: &LemmaVocabulary,
    glossary: &Glossary,
) -> Result<Option<TreeTaskResult>> {
    task.validate()?;
    let instances = extract_order_instances(corpus, task, &order_template(), lemmas);
    if instances.len() < settings.min_instances {
        return Ok(None);
    }
    run_tree_task(
        instances,
        settings,
        ExpectedMode::Uniform,
        None,
        &task.context(),
        glossary,
        &sentence_lengths(corpus),
    )
    .map(Some)
}
