//! Evaluation tables, the materials bundle, and its JSON and HTML forms.

mod site;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::corpus::{Corpus, IngestStats, ParallelPair, Sentence};
use crate::error::{Error, Result};
use crate::featurize::Provenance;
use crate::geninfo::MorphSummary;
use crate::learners::GridCell;
use crate::ruleminer::{GrammarRule, Verdict};
use crate::task::{Evaluation, LinearRule, LinearTaskResult, TreeTaskResult};
use crate::vocabulary::{AdjectiveEntry, CategoryIndex, Candidate};

pub use site::emit_site;

/// JSON schema every emitted bundle satisfies.
pub const BUNDLE_SCHEMA: &str = include_str!("../../schema/bundle.schema.json");

/// The five aspects, in presentation order: (key, title, anchor).
pub const ASPECTS: [(&str, &str, &str); 5] = [
    ("general_information", "General Information", "general-information"),
    ("vocabulary", "Vocabulary", "vocabulary"),
    ("word_order", "Word Order", "word-order"),
    ("suffix_usage", "Suffix Usage", "suffix-usage"),
    ("agreement", "Agreement", "agreement"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRow {
    pub concept: String,
    pub task: String,
    /// Percent, rounded to two decimals.
    pub model_accuracy: f64,
    pub count: usize,
    pub baseline_accuracy: f64,
    /// "97.02 (7)"
    pub model_cell: String,
    /// "96.97"
    pub baseline_cell: String,
}

fn percent(fraction: f64) -> f64 {
    (fraction * 10_000.0).round() / 100.0
}

/// "AA.AA (N)": accuracy in percent with the rule or pair count.
pub fn format_cell(accuracy: f64, count: usize) -> String {
    format!("{:.2} ({count})", percent(accuracy))
}

pub fn format_baseline(accuracy: f64) -> String {
    format!("{:.2}", percent(accuracy))
}

pub fn evaluation_row(concept: &str, task: &str, eval: &Evaluation) -> EvaluationRow {
    EvaluationRow {
        concept: concept.into(),
        task: task.into(),
        model_accuracy: percent(eval.model_accuracy),
        count: eval.count,
        baseline_accuracy: percent(eval.baseline_accuracy),
        model_cell: format_cell(eval.model_accuracy, eval.count),
        baseline_cell: format_baseline(eval.baseline_accuracy),
    }
}

/// Context a rule's examples are displayed in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    /// L2 tokens.
    pub tokens: Vec<String>,
    pub text: String,
    pub transliteration: Option<String>,
    pub translation: Option<String>,
    /// English tokens, for parallel pairs.
    pub source_tokens: Option<Vec<String>>,
}

impl SentenceRecord {
    pub fn from_sentence(s: &Sentence) -> Self {
        SentenceRecord {
            tokens: s.tokens.iter().map(|t| t.form.clone()).collect(),
            text: s.surface(),
            transliteration: s.transliteration(),
            translation: s.translation.clone(),
            source_tokens: None,
        }
    }

    pub fn from_pair(p: &ParallelPair) -> Self {
        SentenceRecord {
            tokens: p.target.tokens.iter().map(|t| t.form.clone()).collect(),
            text: p.target.surface(),
            transliteration: p.target.transliteration(),
            translation: Some(p.source.surface()),
            source_tokens: Some(p.source.tokens.iter().map(|t| t.form.clone()).collect()),
        }
    }

    /// Whether the provenance points at tokens of this record. For parallel
    /// pairs `dependent` indexes the English side and `head` the L2 side.
    fn resolves(&self, p: &Provenance) -> bool {
        let dep_len = self.source_tokens.as_ref().map_or(self.tokens.len(), Vec::len);
        let in_range = |i: usize, n: usize| i >= 1 && i <= n;
        in_range(p.dependent, dep_len) && p.head.is_none_or(|h| in_range(h, self.tokens.len()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedCell {
    pub criterion: String,
    pub depth: usize,
    pub dev_accuracy: f64,
}

impl From<&GridCell> for SelectedCell {
    fn from(c: &GridCell) -> Self {
        SelectedCell {
            criterion: format!("{:?}", c.criterion).to_lowercase(),
            depth: c.depth,
            dev_accuracy: c.dev_accuracy,
        }
    }
}

/// A tree-based task (word order or agreement) as published.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeTaskReport {
    pub name: String,
    pub instances: usize,
    /// Significant rules followed by the default rule.
    pub rules: Vec<GrammarRule>,
    pub rule_count: usize,
    pub evaluation: Evaluation,
    pub model: SelectedCell,
}

impl TreeTaskReport {
    pub fn new(name: &str, res: &TreeTaskResult) -> Self {
        TreeTaskReport {
            name: name.into(),
            instances: res.instances.len(),
            rules: res
                .rules
                .iter()
                .filter(|r| r.verdict != Verdict::Inconclusive)
                .cloned()
                .collect(),
            rule_count: res.rule_count,
            evaluation: res.evaluation.clone(),
            model: SelectedCell::from(&res.fit.selected),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSummary {
    pub c: f64,
    pub class_weight: String,
    pub dev_accuracy: f64,
}

impl From<&LinearTaskResult> for LinearSummary {
    fn from(r: &LinearTaskResult) -> Self {
        LinearSummary {
            c: r.fit.model.c,
            class_weight: format!("{:?}", r.fit.model.class_weight).to_lowercase(),
            dev_accuracy: r.fit.dev_accuracy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuffixReport {
    pub upos: String,
    pub inventory: BTreeMap<String, usize>,
    pub instances: usize,
    pub rules: Vec<LinearRule>,
    pub evaluation: Evaluation,
    pub model: LinearSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexicalReport {
    pub l1: String,
    pub upos: Option<String>,
    pub candidates: Vec<Candidate>,
    pub entropy: f64,
    pub instances: usize,
    pub rules: Vec<LinearRule>,
    pub evaluation: Evaluation,
    pub model: LinearSummary,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GeneralSection {
    pub morphology: Vec<MorphSummary>,
    pub notices: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VocabularySection {
    pub divergent: Vec<LexicalReport>,
    /// Pooled over all divergent words.
    pub evaluation: Option<Evaluation>,
    pub categories: CategoryIndex,
    pub adjectives: Vec<AdjectiveEntry>,
    pub notices: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TaskSection {
    pub tasks: Vec<TreeTaskReport>,
    pub notices: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuffixSection {
    pub segmentation_note: String,
    pub inventories: Vec<SuffixReport>,
    pub notices: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aspects {
    pub general_information: GeneralSection,
    pub vocabulary: VocabularySection,
    pub word_order: TaskSection,
    pub suffix_usage: SuffixSection,
    pub agreement: TaskSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Language {
    pub code: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MaterialsBundle {
    pub language: Language,
    pub aspects: Aspects,
    pub evaluation: Vec<EvaluationRow>,
    /// Every sentence referenced by an example, by id.
    pub sentences: BTreeMap<String, SentenceRecord>,
    pub seed: u64,
    pub config: Value,
    pub ingestion: BTreeMap<String, IngestStats>,
}

impl MaterialsBundle {
    pub fn new(language: &str, seed: u64) -> Self {
        MaterialsBundle {
            language: Language { code: language.into() },
            seed,
            config: Value::Object(Default::default()),
            ..Default::default()
        }
    }

    /// Fill empty sections of `self` from `other` and union the sentence
    /// stores; `self` wins on conflicts.
    pub fn merge(&mut self, other: MaterialsBundle) {
        let a = &mut self.aspects;
        let b = other.aspects;
        if a.general_information == GeneralSection::default() {
            a.general_information = b.general_information;
        }
        if a.vocabulary == VocabularySection::default() {
            a.vocabulary = b.vocabulary;
        }
        if a.word_order == TaskSection::default() {
            a.word_order = b.word_order;
        }
        if a.suffix_usage == SuffixSection::default() {
            a.suffix_usage = b.suffix_usage;
        }
        if a.agreement == TaskSection::default() {
            a.agreement = b.agreement;
        }
        for (k, v) in other.sentences {
            self.sentences.entry(k).or_insert(v);
        }
        for (k, v) in other.ingestion {
            self.ingestion.entry(k).or_insert(v);
        }
    }

    /// Every provenance referenced anywhere in the bundle.
    pub fn references(&self) -> Vec<&Provenance> {
        let a = &self.aspects;
        let mut refs: Vec<&Provenance> = Vec::new();
        for m in &a.general_information.morphology {
            for v in &m.values {
                refs.extend(v.examples.iter().map(|e| &e.example));
            }
        }
        let tree_rules = a.word_order.tasks.iter().chain(&a.agreement.tasks).flat_map(|t| &t.rules);
        for r in tree_rules {
            refs.extend(&r.examples);
            refs.extend(&r.counter_examples);
        }
        for s in &a.suffix_usage.inventories {
            refs.extend(s.rules.iter().flat_map(|r| &r.examples));
        }
        for d in &a.vocabulary.divergent {
            refs.extend(d.rules.iter().flat_map(|r| &r.examples));
        }
        for entries in a.vocabulary.categories.categories.values() {
            refs.extend(entries.iter().flat_map(|e| &e.examples));
        }
        refs.extend(a.vocabulary.adjectives.iter().flat_map(|e| &e.examples));
        refs
    }

    /// Copy every referenced sentence from the corpora into the store.
    pub fn collect_sentences(&mut self, corpus: Option<&Corpus>, pairs: &[ParallelPair]) {
        let wanted: BTreeSet<String> = self.references().iter().map(|p| p.sentence_id.clone()).collect();
        let by_pair: BTreeMap<&str, &ParallelPair> = pairs.iter().map(|p| (p.id.as_str(), p)).collect();
        for id in wanted {
            if self.sentences.contains_key(&id) {
                continue;
            }
            if let Some(p) = by_pair.get(id.as_str()) {
                self.sentences.insert(id, SentenceRecord::from_pair(p));
            } else if let Some(s) = corpus.and_then(|c| c.sentence(&id)) {
                self.sentences.insert(id, SentenceRecord::from_sentence(s));
            }
        }
    }

    /// Every example reference must name a stored sentence and valid tokens.
    pub fn validate(&self) -> Result<()> {
        for p in self.references() {
            let ok = self
                .sentences
                .get(&p.sentence_id)
                .is_some_and(|s| s.resolves(p));
            if !ok {
                return Err(Error::UnresolvedExample {
                    sentence: p.sentence_id.clone(),
                    token: p.dependent,
                });
            }
        }
        Ok(())
    }

    /// Rebuild the evaluation table from the task sections.
    pub fn build_evaluation_table(&mut self) {
        self.evaluation = build_evaluation_table(&self.aspects);
    }
}

/// One row per evaluated task, grouped by concept in aspect order.
pub fn build_evaluation_table(aspects: &Aspects) -> Vec<EvaluationRow> {
    let mut rows = Vec::new();
    if let Some(e) = &aspects.vocabulary.evaluation {
        rows.push(evaluation_row("Vocabulary", "lexical selection", e));
    }
    for t in &aspects.word_order.tasks {
        rows.push(evaluation_row("Word Order", &t.name, &t.evaluation));
    }
    for s in &aspects.suffix_usage.inventories {
        rows.push(evaluation_row("Suffix Usage", &s.upos, &s.evaluation));
    }
    for t in &aspects.agreement.tasks {
        rows.push(evaluation_row("Agreement", &t.name, &t.evaluation));
    }
    rows
}

/// Serializes a JSON value with object keys in sorted order, whatever map
/// type `serde_json` was built with.
struct Sorted<'a>(&'a Value);

impl Serialize for Sorted<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Value::Object(map) => {
                let mut entries: Vec<(&String, &Value)> = map.iter().collect();
                entries.sort_by(|a, b| a.0.cmp(b.0));
                let mut m = serializer.serialize_map(Some(entries.len()))?;
                for (k, v) in entries {
                    m.serialize_entry(k, &Sorted(v))?;
                }
                m.end()
            }
            Value::Array(items) => {
                let mut s = serializer.serialize_seq(Some(items.len()))?;
                for v in items {
                    s.serialize_element(&Sorted(v))?;
                }
                s.end()
            }
            other => other.serialize(serializer),
        }
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value)?;
    let mut text = serde_json::to_string_pretty(&Sorted(&value))?;
    text.push('\n');
    Ok(text)
}

/// Validate example references, then write canonical JSON to `path`.
pub fn emit_json(bundle: &MaterialsBundle, path: &Path) -> Result<()> {
    bundle.validate()?;
    let text = to_canonical_json(bundle)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_bundle(path: &Path) -> Result<MaterialsBundle> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(model: f64, baseline: f64, count: usize) -> Evaluation {
        Evaluation {
            model_accuracy: model,
            baseline_accuracy: baseline,
            baseline_label: "before".into(),
            count,
            train_size: 80,
            dev_size: 10,
            test_size: 10,
        }
    }

    #[test]
    fn table_cells() {
        let row = evaluation_row("Word Order", "subject-verb", &eval(0.9702, 0.9697, 7));
        assert_eq!(row.model_cell, "97.02 (7)");
        assert_eq!(row.baseline_cell, "96.97");
        assert_eq!(format_cell(1.0, 3), "100.00 (3)");
        assert_eq!(format_cell(0.6868, 385), "68.68 (385)");
        assert_eq!(format_baseline(0.5848), "58.48");
    }

    #[test]
    fn canonical_json_round_trips() {
        let mut b = MaterialsBundle::new("mr", 7);
        b.aspects.word_order.notices.push("x".into());
        b.sentences.insert("s1".into(), SentenceRecord {
            tokens: vec!["a".into()],
            text: "a".into(),
            transliteration: None,
            translation: Some("A".into()),
            source_tokens: None,
        });
        let once = to_canonical_json(&b).unwrap();
        let back: MaterialsBundle = serde_json::from_str(&once).unwrap();
        assert_eq!(once, to_canonical_json(&back).unwrap());
        let keys: Vec<&str> = once.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn unresolved_reference_is_an_error() {
        let mut b = MaterialsBundle::new("mr", 0);
        b.aspects.agreement.tasks.push(TreeTaskReport {
            name: "Gender".into(),
            instances: 1,
            rules: vec![GrammarRule {
                conditions: vec![],
                label: "1".into(),
                support: BTreeMap::new(),
                chi2: 0.0,
                p_value: 1.0,
                verdict: Verdict::Default,
                examples: vec![Provenance { sentence_id: "missing".into(), dependent: 1, head: Some(2) }],
                counter_examples: vec![],
                exception_count: 0,
                unattested: false,
                rendered: String::new(),
            }],
            rule_count: 0,
            evaluation: eval(1.0, 1.0, 0),
            model: SelectedCell { criterion: "gini".into(), depth: 3, dev_accuracy: 1.0 },
        });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bundle.json");
        assert!(matches!(emit_json(&b, &path), Err(Error::UnresolvedExample { .. })));
        assert!(!path.exists());
    }
}
