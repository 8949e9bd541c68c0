//! Frequency-ordered summaries of the morphological attributes in a corpus.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::featurize::Provenance;

pub const DEFAULT_MIN_TOTAL: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormExample {
    pub form: String,
    pub count: usize,
    /// The shortest sentence containing the form with this value.
    pub example: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueSummary {
    pub value: String,
    pub count: usize,
    /// Tokens per POS tag carrying the value.
    pub pos: BTreeMap<String, usize>,
    pub examples: Vec<FormExample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphSummary {
    pub attribute: String,
    pub total: usize,
    /// Most frequent first; ties in value order.
    pub values: Vec<ValueSummary>,
}

#[derive(Default)]
struct FormTally {
    count: usize,
    /// (sentence length, sentence id, token index) of the shortest sentence.
    best: Option<(usize, String, usize)>,
}

#[derive(Default)]
struct ValueTally {
    count: usize,
    pos: BTreeMap<String, usize>,
    forms: BTreeMap<String, FormTally>,
}

/// One summary per attribute seen at least `min_total` times, most frequent
/// attribute first, with up to `max_examples` word forms per value.
pub fn summarize_morphology(corpus: &Corpus, max_examples: usize, min_total: usize) -> Vec<MorphSummary> {
    let mut tallies: BTreeMap<&str, BTreeMap<&str, ValueTally>> = BTreeMap::new();
    for sentence in &corpus.sentences {
        let len = sentence.len();
        for token in &sentence.tokens {
            for (attr, value) in &token.feats {
                let v = tallies.entry(attr).or_default().entry(value).or_default();
                v.count += 1;
                *v.pos.entry(token.upos().to_string()).or_default() += 1;
                let f = v.forms.entry(token.form.clone()).or_default();
                f.count += 1;
                let candidate = (len, sentence.id.clone(), token.index);
                if f.best.as_ref().is_none_or(|b| candidate < *b) {
                    f.best = Some(candidate);
                }
            }
        }
    }

    let mut out: Vec<MorphSummary> = tallies
        .into_iter()
        .filter_map(|(attr, values)| {
            let total: usize = values.values().map(|v| v.count).sum();
            if total < min_total {
                return None;
            }
            let mut values: Vec<ValueSummary> = values
                .into_iter()
                .map(|(value, tally)| {
                    let mut forms: Vec<(String, FormTally)> = tally.forms.into_iter().collect();
                    forms.sort_by(|a, b| b.1.count.cmp(&a.1.count).then_with(|| a.0.cmp(&b.0)));
                    let examples = forms
                        .into_iter()
                        .take(max_examples)
                        .filter_map(|(form, f)| {
                            let (_, sentence_id, dependent) = f.best?;
                            Some(FormExample {
                                form,
                                count: f.count,
                                example: Provenance {
                                    sentence_id,
                                    dependent,
                                    head: None,
                                },
                            })
                        })
                        .collect();
                    ValueSummary {
                        value: value.to_string(),
                        count: tally.count,
                        pos: tally.pos,
                        examples,
                    }
                })
                .collect();
            values.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.value.cmp(&b.value)));
            Some(MorphSummary {
                attribute: attr.to_string(),
                total,
                values,
            })
        })
        .collect();
    out.sort_by(|a, b| b.total.cmp(&a.total).then_with(|| a.attribute.cmp(&b.attribute)));
    out
}
