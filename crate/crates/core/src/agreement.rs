//! Morphological agreement as match / mismatch classification.

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::featurize::{extract_context_features, FeatureTemplate, Instance, LemmaVocabulary, Provenance};
use crate::ruleminer::{ExpectedMode, Glossary, RuleContext};
use crate::task::{run_tree_task, MiningSettings, TreeTaskResult};
use crate::wordorder::sentence_lengths;

pub const AGREE: &str = "1";
pub const DISAGREE: &str = "0";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementTask {
    pub attribute: String,
    pub deprels: Vec<String>,
}

impl AgreementTask {
    pub fn new(attribute: &str) -> Self {
        AgreementTask {
            attribute: attribute.into(),
            deprels: ["nsubj", "obj", "amod", "det"].map(String::from).to_vec(),
        }
    }

    /// Gender and Person.
    pub fn defaults() -> Vec<AgreementTask> {
        vec![AgreementTask::new("Gender"), AgreementTask::new("Person")]
    }

    pub fn validate(&self) -> Result<()> {
        if self.attribute.trim().is_empty() {
            return Err(Error::Config("agreement attribute is empty".into()));
        }
        Ok(())
    }

    /// The attribute itself is withheld from the features; otherwise the
    /// pair of values gives the label away.
    pub fn template(&self) -> FeatureTemplate {
        let mut template = FeatureTemplate::default();
        template.exclude_attributes.insert(self.attribute.clone());
        template
    }
}

/// One instance per arc in the relation set whose head and dependent both
/// carry the attribute; label "1" when the values are equal.
pub fn extract_agreement_instances(
    corpus: &Corpus,
    task: &AgreementTask,
    lemmas: &LemmaVocabulary,
) -> Vec<Instance> {
    let template = task.template();
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
            let (Some(hv), Some(dv)) = (head.feat(&task.attribute), dep.feat(&task.attribute)) else {
                continue;
            };
            out.push(Instance {
                features: extract_context_features(sentence, head_index, dep.index, &template, lemmas),
                label: if hv == dv { AGREE } else { DISAGREE }.into(),
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

/// Extract, fit and mine one agreement task; only leaves dominated by "1"
/// become rules. `Ok(None)` when too few pairs carry the attribute.
pub fn run_agreement_task(
    corpus: &Corpus,
    task: &AgreementTask,
    settings: &MiningSettings,
    lemmas: &LemmaVocabulary,
    glossary: &Glossary,
) -> Result<Option<TreeTaskResult>> {
    task.validate()?;
    let instances = extract_agreement_instances(corpus, task, lemmas);
    if instances.len() < settings.min_instances {
        return Ok(None);
    }
    run_tree_task(
        instances,
        settings,
        ExpectedMode::Empirical,
        Some(AGREE),
        &RuleContext::agreement(&task.attribute),
        glossary,
        &sentence_lengths(corpus),
    )
    .map(Some)
}
