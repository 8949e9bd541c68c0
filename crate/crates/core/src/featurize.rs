//! Categorical context features and their one-hot encoding.
//!
//! A feature is a `name → value` pair such as `dep:Gender → Fem`; its
//! one-hot column is the atom `dep:Gender=Fem`. The template here is a
//! reconstruction of the usual syntactic and lexical signals around a
//! head–dependent arc, not a reproduction of any published feature set.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Sentence};

pub type FeatureMap = BTreeMap<String, String>;

/// Join a feature name and value into its one-hot atom.
pub fn atom(name: &str, value: &str) -> String {
    format!("{name}={value}")
}

/// Which signals [`extract_context_features`] emits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureTemplate {
    pub use_lemmas: bool,
    /// Lemmas outside the `max_lemmas` most frequent are replaced by `OOV`.
    pub max_lemmas: usize,
    pub use_neighbor_pos: bool,
    pub use_codependents: bool,
    pub use_sentence_flags: bool,
    /// Morphological attributes never emitted (the target of an agreement task).
    pub exclude_attributes: BTreeSet<String>,
}

impl Default for FeatureTemplate {
    fn default() -> Self {
        FeatureTemplate {
            use_lemmas: true,
            max_lemmas: 500,
            use_neighbor_pos: true,
            use_codependents: true,
            use_sentence_flags: true,
            exclude_attributes: BTreeSet::new(),
        }
    }
}

/// The frequent-lemma list backing lexical features.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaVocabulary(BTreeSet<String>);

impl LemmaVocabulary {
    /// Keep the `k` most frequent lemmas; ties broken lexicographically.
    pub fn from_corpus(corpus: &Corpus, k: usize) -> Self {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for (_, token) in corpus.tokens() {
            if let Some(lemma) = &token.lemma {
                *counts.entry(lemma).or_default() += 1;
            }
        }
        let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        LemmaVocabulary(
            ranked
                .into_iter()
                .take(k)
                .map(|(l, _)| l.to_string())
                .collect(),
        )
    }

    pub fn from_lemmas<I: IntoIterator<Item = S>, S: Into<String>>(lemmas: I) -> Self {
        LemmaVocabulary(lemmas.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.0.contains(lemma)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Features for the arc `head → dep` (both 1-based token indices).
pub fn extract_context_features(
    sentence: &Sentence,
    head_index: usize,
    dep_index: usize,
    template: &FeatureTemplate,
    lemmas: &LemmaVocabulary,
) -> FeatureMap {
    let mut features = FeatureMap::new();
    let (Some(head), Some(dep)) = (sentence.token(head_index), sentence.token(dep_index)) else {
        return features;
    };

    if let Some(rel) = &dep.deprel {
        features.insert("deprel".into(), rel.clone());
    }
    for (role, token) in [("head", head), ("dep", dep)] {
        if let Some(upos) = &token.upos {
            features.insert(format!("{role}:upos"), upos.clone());
        }
        for (attr, value) in &token.feats {
            if !template.exclude_attributes.contains(attr) {
                features.insert(format!("{role}:{attr}"), value.clone());
            }
        }
        if template.use_lemmas {
            if let Some(lemma) = &token.lemma {
                let value = if lemmas.contains(lemma) {
                    lemma.clone()
                } else {
                    String::from("OOV")
                };
                features.insert(format!("{role}:lemma"), value);
            }
        }
    }

    if template.use_neighbor_pos {
        let neighbors = [
            ("dep:prev_upos", dep_index.checked_sub(1)),
            ("dep:next_upos", Some(dep_index + 1)),
        ];
        for (name, index) in neighbors {
            if let Some(upos) = index
                .and_then(|i| sentence.token(i))
                .and_then(|t| t.upos.clone())
            {
                features.insert(name.into(), upos);
            }
        }
    }

    if template.use_codependents {
        for sibling in sentence.dependents(head_index) {
            if sibling.index == dep_index {
                continue;
            }
            let name = format!("head:child:{}:{}", sibling.deprel(), sibling.upos());
            features.insert(name, "true".into());
        }
    }

    if template.use_sentence_flags {
        sentence_flags(sentence, &mut features);
    }
    features
}

/// `sent:question` when the sentence ends in "?", `sent:int_pron` when any
/// token is an interrogative pronoun.
pub fn sentence_flags(sentence: &Sentence, features: &mut FeatureMap) {
    let ends_with_question = sentence
        .text
        .as_deref()
        .map(|t| t.trim_end().ends_with('?'))
        .or_else(|| sentence.tokens.last().map(|t| t.form.ends_with('?')))
        .unwrap_or(false);
    if ends_with_question {
        features.insert("sent:question".into(), "true".into());
    }
    if sentence
        .tokens
        .iter()
        .any(|t| t.feat("PronType") == Some("Int"))
    {
        features.insert("sent:int_pron".into(), "true".into());
    }
}

/// Where an instance came from. `dependent` is the focus token (the
/// dependent of an arc, the inflected word, or the L1 word of a pair);
/// `head` is its partner (the head, or the aligned L2 word).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Provenance {
    pub sentence_id: String,
    pub dependent: usize,
    pub head: Option<usize>,
}

/// One labelled classification example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub features: FeatureMap,
    pub label: String,
    pub provenance: Provenance,
}

impl Instance {
    pub fn has_atom(&self, atom: &str) -> bool {
        match atom.split_once('=') {
            Some((name, value)) => self.features.get(name).map(String::as_str) == Some(value),
            None => false,
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = String> + '_ {
        self.features.iter().map(|(n, v)| atom(n, v))
    }
}

/// Ordered feature atoms with a reverse index; order is lexicographic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureVocabulary {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl FeatureVocabulary {
    pub fn from_names<I: IntoIterator<Item = String>>(names: I) -> Self {
        let names: BTreeSet<String> = names.into_iter().collect();
        let names: Vec<String> = names.into_iter().collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        FeatureVocabulary { names, index }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, column: usize) -> &str {
        &self.names[column]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, atom: &str) -> Option<usize> {
        self.index.get(atom).copied()
    }
}

pub fn build_vocabulary(instances: &[Instance]) -> FeatureVocabulary {
    FeatureVocabulary::from_names(instances.iter().flat_map(|i| i.atoms()))
}

/// Sparse binary matrix: each row lists its active columns in ascending order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DesignMatrix {
    pub n_cols: usize,
    pub rows: Vec<Vec<usize>>,
}

impl DesignMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].binary_search(&col).is_ok()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|active| {
                let mut dense = vec![0.0; self.n_cols];
                for &c in active {
                    dense[c] = 1.0;
                }
                dense
            })
            .collect()
    }

    /// Rows selected by index, in the given order.
    pub fn select(&self, indices: &[usize]) -> DesignMatrix {
        DesignMatrix {
            n_cols: self.n_cols,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

/// One-hot encode instances; atoms missing from `vocab` are dropped.
pub fn vectorize(instances: &[Instance], vocab: &FeatureVocabulary) -> (DesignMatrix, Vec<String>) {
    let rows = instances
        .iter()
        .map(|instance| {
            let mut active: Vec<usize> = instance.atoms().filter_map(|a| vocab.column(&a)).collect();
            active.sort_unstable();
            active
        })
        .collect();
    let labels = instances.iter().map(|i| i.label.clone()).collect();
    (
        DesignMatrix {
            n_cols: vocab.len(),
            rows,
        },
        labels,
    )
}
