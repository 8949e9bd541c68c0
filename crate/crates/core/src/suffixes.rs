//! Suffix inventories from lemma-aligned decomposition, and "which suffix
//! when" as multiclass classification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::corpus::{Corpus, Sentence, Token};
use crate::error::Result;
use crate::featurize::{atom, extract_context_features, FeatureMap, FeatureTemplate, Instance, LemmaVocabulary, Provenance};
use crate::ruleminer::{Glossary, RuleContext};
use crate::task::{run_linear_task, LinearTaskResult, MiningSettings};
use crate::wordorder::sentence_lengths;

/// Attached to every suffix report.
pub const SANDHI_NOTE: &str = "Suffixes are the remainder of the word form after its longest common \
prefix with the lemma. Sound changes at the morpheme boundary (sandhi) shift the cut: \
\"deshaala\" with lemma \"desh\" yields \"desh + aala\", where a morphological analyser \
would give \"desh + laa\".";

pub const DEFAULT_MIN_COUNT: usize = 10;

/// POS tags with suffix inventories by default.
pub const DEFAULT_POS: [&str; 13] = [
    "NST", "NUM", "NOUN", "PRON", "PART", "ADJ", "VERB", "PROPN", "SCONJ", "DET", "AUX", "ADV", "ADP",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub stem: String,
    pub suffix: String,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Segmentation {
    Decomposed(Decomposition),
    /// Form and lemma share no prefix (e.g. "was" / "be").
    Suppletive,
}

impl Segmentation {
    pub fn suffix(&self) -> Option<&str> {
        match self {
            Segmentation::Decomposed(d) => Some(&d.suffix),
            Segmentation::Suppletive => None,
        }
    }
}

/// Split `form` at its longest common prefix with `lemma`, comparing NFC
/// scalar values. The returned stem and suffix are NFC.
pub fn decompose(form: &str, lemma: &str) -> Segmentation {
    let form: String = form.nfc().collect();
    let lemma: String = lemma.nfc().collect();
    let split = form
        .char_indices()
        .zip(lemma.chars())
        .find(|((_, f), l)| f != l)
        .map_or_else(|| prefix_bytes(&form, lemma.chars().count()), |((i, _), _)| i);
    if split == 0 {
        return Segmentation::Suppletive;
    }
    Segmentation::Decomposed(Decomposition {
        stem: form[..split].to_string(),
        suffix: form[split..].to_string(),
        method: "lcp".into(),
    })
}

/// Byte length of the first `chars` scalar values of `s` (or all of it).
fn prefix_bytes(s: &str, chars: usize) -> usize {
    s.char_indices().nth(chars).map_or(s.len(), |(i, _)| i)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuffixInventory {
    pub upos: String,
    pub counts: BTreeMap<String, usize>,
    pub min_count: usize,
}

impl SuffixInventory {
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn contains(&self, suffix: &str) -> bool {
        self.counts.contains_key(suffix)
    }
}

fn token_suffix(token: &Token) -> Option<String> {
    let lemma = token.lemma.as_deref()?;
    if token.form.is_empty() || lemma.is_empty() {
        return None;
    }
    decompose(&token.form, lemma)
        .suffix()
        .filter(|s| !s.is_empty())
        .map(str::to_string)
}

/// Count non-empty suffixes of every `upos` token and keep those seen at
/// least `min_count` times.
pub fn build_inventory(corpus: &Corpus, upos: &str, min_count: usize) -> SuffixInventory {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (_, token) in corpus.tokens() {
        if token.upos() != upos {
            continue;
        }
        if let Some(suffix) = token_suffix(token) {
            *counts.entry(suffix).or_default() += 1;
        }
    }
    counts.retain(|_, &mut c| c >= min_count);
    SuffixInventory {
        upos: upos.into(),
        counts,
        min_count,
    }
}

/// The token's own attributes and context. The token's lemma is left out:
/// it says which word was inflected, not why.
pub fn suffix_template() -> FeatureTemplate {
    FeatureTemplate {
        use_lemmas: false,
        ..FeatureTemplate::default()
    }
}

fn token_features(sentence: &Sentence, token: &Token, template: &FeatureTemplate, lemmas: &LemmaVocabulary) -> FeatureMap {
    match token.head.filter(|&h| h > 0) {
        Some(head) => extract_context_features(sentence, head, token.index, template, lemmas),
        None => {
            let mut features = FeatureMap::new();
            features.insert("deprel".into(), token.deprel().to_string());
            features.insert("dep:upos".into(), token.upos().to_string());
            for (attr, value) in &token.feats {
                features.insert(format!("dep:{attr}"), value.clone());
            }
            features
        }
    }
}

/// One instance per token of the inventory's POS whose suffix is in the
/// inventory; the label is the suffix.
pub fn extract_suffix_instances(
    corpus: &Corpus,
    inventory: &SuffixInventory,
    template: &FeatureTemplate,
    lemmas: &LemmaVocabulary,
) -> Vec<Instance> {
    let mut out = Vec::new();
    for sentence in &corpus.sentences {
        for token in &sentence.tokens {
            if token.upos() != inventory.upos {
                continue;
            }
            let Some(suffix) = token_suffix(token).filter(|s| inventory.contains(s)) else {
                continue;
            };
            out.push(Instance {
                features: token_features(sentence, token, template, lemmas),
                label: suffix,
                provenance: Provenance {
                    sentence_id: sentence.id.clone(),
                    dependent: token.index,
                    head: token.head.filter(|&h| h > 0),
                },
            });
        }
    }
    out
}

/// Outcome of a suffix task for one POS.
#[derive(Debug, Clone)]
pub enum SuffixOutcome {
    Fitted(Box<LinearTaskResult>),
    /// Fewer than two suffixes, or too few instances.
    Skipped(String),
}

/// Fit a linear model predicting the suffix of `inventory.upos` tokens.
pub fn run_suffix_task(
    corpus: &Corpus,
    inventory: &SuffixInventory,
    settings: &MiningSettings,
    lemmas: &LemmaVocabulary,
    glossary: &Glossary,
) -> Result<SuffixOutcome> {
    if inventory.counts.len() < 2 {
        return Ok(SuffixOutcome::Skipped(format!(
            "{}: {} suffix(es) above the count threshold",
            inventory.upos,
            inventory.counts.len()
        )));
    }
    let instances = extract_suffix_instances(corpus, inventory, &suffix_template(), lemmas);
    if instances.len() < settings.min_instances {
        return Ok(SuffixOutcome::Skipped(format!(
            "{}: {} instances, need {}",
            inventory.upos,
            instances.len(),
            settings.min_instances
        )));
    }
    let pos_phrase = glossary
        .get(&atom("upos", &inventory.upos))
        .map_or_else(|| inventory.upos.to_lowercase(), |p| p.trim_start_matches("a ").trim_start_matches("an ").to_string());
    let res = run_linear_task(
        instances,
        settings,
        &RuleContext::suffix(&pos_phrase),
        glossary,
        &sentence_lengths(corpus),
    )?;
    Ok(SuffixOutcome::Fitted(Box::new(res)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_conllu;

    fn parts(form: &str, lemma: &str) -> (String, String) {
        match decompose(form, lemma) {
            Segmentation::Decomposed(d) => (d.stem, d.suffix),
            Segmentation::Suppletive => panic!("suppletive"),
        }
    }

    #[test]
    fn lcp_cases() {
        assert_eq!(parts("walks", "walk"), ("walk".into(), "s".into()));
        assert_eq!(parts("deshaala", "desh"), ("desh".into(), "aala".into()));
        assert_eq!(parts("walk", "walk"), ("walk".into(), String::new()));
        assert_eq!(parts("sang", "sing"), ("s".into(), "ang".into()));
        assert_eq!(decompose("was", "be"), Segmentation::Suppletive);
        assert_eq!(decompose("went", "go"), Segmentation::Suppletive);
    }

    #[test]
    fn nfc_before_comparison() {
        // "é" decomposed in the form, precomposed in the lemma
        assert_eq!(parts("cafe\u{301}s", "caf\u{e9}"), ("caf\u{e9}".into(), "s".into()));
        assert_eq!(parts("\u{926}\u{947}\u{936}\u{93e}\u{932}\u{93e}", "\u{926}\u{947}\u{936}").1, "\u{93e}\u{932}\u{93e}");
    }

    fn corpus(rows: &[(&str, &str, &str)]) -> Corpus {
        let mut text = String::new();
        for (form, lemma, feats) in rows {
            text += &format!("1\t{form}\t{lemma}\tNOUN\t_\t{feats}\t2\tobl\t_\t_\n2\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_\n\n");
        }
        parse_conllu(&text).unwrap()
    }

    #[test]
    fn inventory_threshold() {
        let mut rows = Vec::new();
        rows.extend(std::iter::repeat_n(("deshlaa", "desh", "_"), 12));
        rows.extend(std::iter::repeat_n(("deshne", "desh", "_"), 8));
        rows.extend(std::iter::repeat_n(("desht", "desh", "_"), 2));
        rows.extend(std::iter::repeat_n(("desh", "desh", "_"), 4));
        let inv = build_inventory(&corpus(&rows), "NOUN", 5);
        assert_eq!(inv.counts, BTreeMap::from([("laa".into(), 12), ("ne".into(), 8)]));
    }

    #[test]
    fn unchanged_forms_give_empty_inventory() {
        let inv = build_inventory(&corpus(&[("desh", "desh", "_"); 20]), "NOUN", 1);
        assert!(inv.is_empty());
    }

    #[test]
    fn case_predicts_suffix() {
        let mut rows = Vec::new();
        for i in 0..200 {
            rows.push(if i % 3 == 0 {
                ("ramne", "ram", "Case=Erg")
            } else {
                ("deshlaa", "desh", "Case=Dat")
            });
        }
        let c = corpus(&rows);
        let inv = build_inventory(&c, "NOUN", DEFAULT_MIN_COUNT);
        let instances = extract_suffix_instances(&c, &inv, &suffix_template(), &LemmaVocabulary::default());
        assert!(instances.iter().all(|i| inv.contains(&i.label)));
        let SuffixOutcome::Fitted(res) = run_suffix_task(&c, &inv, &MiningSettings::default(), &LemmaVocabulary::default(), &Glossary::default()).unwrap()
        else {
            panic!("skipped")
        };
        assert_eq!(res.evaluation.model_accuracy, 1.0);
        let ne = res.rules.iter().find(|r| r.class == "ne").unwrap();
        assert_eq!(ne.features[0].atom, "dep:Case=Erg");
    }

    #[test]
    fn single_suffix_is_skipped() {
        let c = corpus(&[("deshlaa", "desh", "_"); 60]);
        let inv = build_inventory(&c, "NOUN", 10);
        let out = run_suffix_task(&c, &inv, &MiningSettings::default(), &LemmaVocabulary::default(), &Glossary::default()).unwrap();
        assert!(matches!(out, SuffixOutcome::Skipped(_)));
    }
}
