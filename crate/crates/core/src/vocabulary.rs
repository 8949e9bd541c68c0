//! Vocabulary from aligned parallel text: translation tables, words with
//! several context-dependent translations, category word lists and
//! adjective entries.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{ParallelPair, SenseAnnotations, Sentence, TaxonomyResource};
use crate::error::Result;
use crate::featurize::{FeatureMap, Instance, LemmaVocabulary, Provenance};
use crate::learners::split_indices;
use crate::ruleminer::{pick_examples, Glossary, RuleContext};
use crate::task::{run_linear_task, Evaluation, LinearTaskResult, MiningSettings, SentenceLengths};

/// Where one translation link was seen. Indices are 0-based token positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occurrence {
    pub pair: String,
    pub source: usize,
    pub target: usize,
}

impl Occurrence {
    pub fn provenance(&self) -> Provenance {
        Provenance {
            sentence_id: self.pair.clone(),
            dependent: self.source + 1,
            head: Some(self.target + 1),
        }
    }
}

/// L1 lemma → L2 lemma → every link between them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationTable {
    pub entries: BTreeMap<String, BTreeMap<String, Vec<Occurrence>>>,
    /// POS tags observed for each L1 lemma.
    pub l1_upos: BTreeMap<String, BTreeMap<String, usize>>,
}

impl TranslationTable {
    pub fn count(&self, l1: &str, l2: &str) -> usize {
        self.entries
            .get(l1)
            .and_then(|t| t.get(l2))
            .map_or(0, Vec::len)
    }

    pub fn total(&self, l1: &str) -> usize {
        self.entries
            .get(l1)
            .map_or(0, |t| t.values().map(Vec::len).sum())
    }

    /// Most frequent POS of an L1 lemma; ties go to the smaller tag.
    pub fn upos(&self, l1: &str) -> Option<&str> {
        let counts = self.l1_upos.get(l1)?;
        let best = counts.values().copied().max()?;
        counts
            .iter()
            .find(|&(_, &c)| c == best)
            .map(|(u, _)| u.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn l1_key(sentence: &Sentence, index: usize) -> Option<String> {
    sentence
        .tokens
        .get(index)
        .map(|t| t.lemma_or_form().to_lowercase())
}

fn l2_key(sentence: &Sentence, index: usize) -> Option<String> {
    sentence.tokens.get(index).map(|t| t.lemma_or_form())
}

/// Count lemma pairs over alignment links. Each link counts once, so a
/// many-to-many alignment contributes every one of its links.
pub fn aggregate_translations(pairs: &[ParallelPair]) -> TranslationTable {
    let mut table = TranslationTable::default();
    for pair in pairs {
        for &(s, t) in &pair.alignment {
            let (Some(l1), Some(l2)) = (l1_key(&pair.source, s), l2_key(&pair.target, t)) else {
                continue;
            };
            *table
                .l1_upos
                .entry(l1.clone())
                .or_default()
                .entry(pair.source.tokens[s].upos().to_string())
                .or_default() += 1;
            table
                .entries
                .entry(l1)
                .or_default()
                .entry(l2)
                .or_default()
                .push(Occurrence {
                    pair: pair.id.clone(),
                    source: s,
                    target: t,
                });
        }
    }
    table
}

/// Thresholds for keeping a word with divergent translations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterConfig {
    /// Minimum count of each kept translation.
    pub min_count: usize,
    /// Minimum count over the kept translations.
    pub min_total: usize,
    /// Minimum entropy, in bits, of the kept translations.
    pub min_entropy: f64,
    pub exclude_upos: Vec<String>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            min_count: 10,
            min_total: 30,
            min_entropy: 0.3,
            exclude_upos: vec!["PROPN".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub l2: String,
    pub count: usize,
    /// The translation spells the same as the English word.
    pub loanword: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergentPair {
    pub l1: String,
    pub upos: Option<String>,
    /// Kept translations, most frequent first.
    pub candidates: Vec<Candidate>,
    pub total: usize,
    pub entropy: f64,
}

/// Shannon entropy in bits of a count vector.
pub fn entropy_bits(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

fn romanized(text: &str) -> String {
    text.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

fn is_loanword(l1: &str, l2: &str, occurrences: &[Occurrence], pairs: &BTreeMap<&str, &ParallelPair>) -> bool {
    let key = romanized(l1);
    if romanized(l2) == key {
        return true;
    }
    occurrences.iter().any(|o| {
        pairs
            .get(o.pair.as_str())
            .and_then(|p| p.target.tokens.get(o.target))
            .and_then(|t| t.translit.as_deref())
            .is_some_and(|tr| romanized(tr) == key)
    })
}

/// Keep L1 words with at least two translations seen `min_count` times,
/// `min_total` occurrences over those, enough entropy, and an allowed POS.
pub fn filter_divergent_pairs(
    table: &TranslationTable,
    pairs: &[ParallelPair],
    config: &FilterConfig,
) -> Vec<DivergentPair> {
    let by_id: BTreeMap<&str, &ParallelPair> = pairs.iter().map(|p| (p.id.as_str(), p)).collect();
    let mut out = Vec::new();
    for (l1, translations) in &table.entries {
        let upos = table.upos(l1);
        if upos.is_some_and(|u| config.exclude_upos.iter().any(|x| x == u)) {
            continue;
        }
        let mut candidates: Vec<Candidate> = translations
            .iter()
            .filter(|(_, occ)| occ.len() >= config.min_count)
            .map(|(l2, occ)| Candidate {
                l2: l2.clone(),
                count: occ.len(),
                loanword: is_loanword(l1, l2, occ, &by_id),
            })
            .collect();
        if candidates.len() < 2 {
            continue;
        }
        candidates.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.l2.cmp(&b.l2)));
        let counts: Vec<usize> = candidates.iter().map(|c| c.count).collect();
        let total: usize = counts.iter().sum();
        let entropy = entropy_bits(&counts);
        if total < config.min_total || entropy < config.min_entropy {
            continue;
        }
        out.push(DivergentPair {
            l1: l1.clone(),
            upos: upos.map(str::to_string),
            candidates,
            total,
            entropy,
        });
    }
    out
}

/// Context signals for choosing a translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LexicalTemplate {
    /// Tokens on each side of the English word contributing `l1:ctx:*`.
    pub window: usize,
    /// Frequent English lemmas kept as context words.
    pub max_lemmas: usize,
}

impl Default for LexicalTemplate {
    fn default() -> Self {
        LexicalTemplate {
            window: 3,
            max_lemmas: 500,
        }
    }
}

/// Frequent English lemmas across the source side.
pub fn l1_lemma_vocabulary(pairs: &[ParallelPair], k: usize) -> LemmaVocabulary {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for pair in pairs {
        for token in &pair.source.tokens {
            *counts.entry(token.lemma_or_form().to_lowercase()).or_default() += 1;
        }
    }
    let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    LemmaVocabulary::from_lemmas(ranked.into_iter().take(k).map(|(l, _)| l))
}

/// Senses and taxonomy, when available.
#[derive(Debug, Clone, Copy)]
pub struct SenseContext<'a> {
    pub senses: &'a SenseAnnotations,
    pub taxonomy: &'a TaxonomyResource,
}

/// Features of one occurrence, from both sides of the pair. The L2 word's
/// own morphology is left out since it largely spells out the label.
pub fn lexical_features(
    pair: &ParallelPair,
    occ: &Occurrence,
    template: &LexicalTemplate,
    lemmas: &LemmaVocabulary,
    senses: Option<SenseContext<'_>>,
) -> FeatureMap {
    let mut f = FeatureMap::new();
    let src = &pair.source.tokens;
    let lemma_of = |i: usize| {
        let l = src[i].lemma_or_form().to_lowercase();
        if lemmas.contains(&l) {
            l
        } else {
            "OOV".to_string()
        }
    };
    let word = &src[occ.source];
    f.insert("l1:upos".into(), word.upos().to_string());
    f.insert("l1:deprel".into(), word.base_deprel().to_string());
    if occ.source > 0 {
        f.insert("l1:prev_lemma".into(), lemma_of(occ.source - 1));
        f.insert("l1:prev_upos".into(), src[occ.source - 1].upos().to_string());
    }
    if occ.source + 1 < src.len() {
        f.insert("l1:next_lemma".into(), lemma_of(occ.source + 1));
        f.insert("l1:next_upos".into(), src[occ.source + 1].upos().to_string());
    }
    let lo = occ.source.saturating_sub(template.window);
    let hi = (occ.source + template.window + 1).min(src.len());
    for i in (lo..hi).filter(|&i| i != occ.source) {
        let l = src[i].lemma_or_form().to_lowercase();
        if lemmas.contains(&l) {
            f.insert(format!("l1:ctx:{l}"), "true".into());
        }
    }
    if let Some(head) = word.head.filter(|&h| h > 0).and_then(|h| pair.source.token(h)) {
        f.insert("l1:head_lemma".into(), lemma_of(head.index - 1));
        f.insert("l1:head_upos".into(), head.upos().to_string());
    }
    if let Some(ctx) = senses {
        if let Some(sense) = ctx.senses.get(&pair.id, occ.source) {
            f.insert(format!("l1:sense:{sense}"), "true".into());
            for anc in ctx.taxonomy.ancestors(sense) {
                f.insert(format!("l1:sense:{anc}"), "true".into());
            }
        }
    }
    if let Some(target) = pair.target.tokens.get(occ.target) {
        f.insert("l2:deprel".into(), target.base_deprel().to_string());
        if let Some(head) = target.head.filter(|&h| h > 0).and_then(|h| pair.target.token(h)) {
            f.insert("l2:head_upos".into(), head.upos().to_string());
            f.insert("l2:head_lemma".into(), head.lemma_or_form());
            for (attr, value) in &head.feats {
                f.insert(format!("l2:head_{attr}"), value.clone());
            }
        }
    }
    f
}

/// One instance per occurrence of a kept translation.
pub fn lexical_instances(
    divergent: &DivergentPair,
    table: &TranslationTable,
    pairs: &BTreeMap<&str, &ParallelPair>,
    template: &LexicalTemplate,
    lemmas: &LemmaVocabulary,
    senses: Option<SenseContext<'_>>,
) -> Vec<Instance> {
    let Some(translations) = table.entries.get(&divergent.l1) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for cand in &divergent.candidates {
        for occ in translations.get(&cand.l2).into_iter().flatten() {
            let Some(pair) = pairs.get(occ.pair.as_str()) else {
                continue;
            };
            out.push(Instance {
                features: lexical_features(pair, occ, template, lemmas, senses),
                label: cand.l2.clone(),
                provenance: occ.provenance(),
            });
        }
    }
    out.sort_by(|a, b| a.provenance.cmp(&b.provenance));
    out
}

#[derive(Debug, Clone)]
pub enum LexselOutcome {
    Fitted(Box<LinearTaskResult>),
    Skipped(String),
}

#[derive(Debug, Clone)]
pub struct LexicalSelection {
    pub pair: DivergentPair,
    pub outcome: LexselOutcome,
}

/// Source sentence lengths keyed by pair id.
pub fn pair_lengths(pairs: &[ParallelPair]) -> SentenceLengths {
    pairs
        .iter()
        .map(|p| (p.id.clone(), p.source.len()))
        .collect()
}

/// Fit a linear model choosing among the translations of one word.
#[allow(clippy::too_many_arguments)]
pub fn fit_lexical_selection(
    divergent: &DivergentPair,
    table: &TranslationTable,
    pairs: &[ParallelPair],
    template: &LexicalTemplate,
    lemmas: &LemmaVocabulary,
    senses: Option<SenseContext<'_>>,
    settings: &MiningSettings,
    glossary: &Glossary,
) -> Result<LexicalSelection> {
    let by_id: BTreeMap<&str, &ParallelPair> = pairs.iter().map(|p| (p.id.as_str(), p)).collect();
    let instances = lexical_instances(divergent, table, &by_id, template, lemmas, senses);
    let skip = |why: String| LexicalSelection {
        pair: divergent.clone(),
        outcome: LexselOutcome::Skipped(why),
    };
    let split = split_indices(instances.len(), settings.split[0], settings.split[1], settings.seed);
    let train_labels: BTreeSet<&str> = split.train.iter().map(|&i| instances[i].label.as_str()).collect();
    if train_labels.len() < 2 {
        return Ok(skip(format!("{}: a single translation in the training split", divergent.l1)));
    }
    let res = run_linear_task(
        instances,
        settings,
        &RuleContext::lexical(&divergent.l1),
        glossary,
        &pair_lengths(pairs),
    )?;
    Ok(LexicalSelection {
        pair: divergent.clone(),
        outcome: LexselOutcome::Fitted(Box::new(res)),
    })
}

/// Fit every divergent pair in parallel, keeping input order.
#[allow(clippy::too_many_arguments)]
pub fn fit_all_lexical_selections(
    divergent: &[DivergentPair],
    table: &TranslationTable,
    pairs: &[ParallelPair],
    template: &LexicalTemplate,
    lemmas: &LemmaVocabulary,
    senses: Option<SenseContext<'_>>,
    settings: &MiningSettings,
    glossary: &Glossary,
) -> Result<Vec<LexicalSelection>> {
    divergent
        .par_iter()
        .map(|d| fit_lexical_selection(d, table, pairs, template, lemmas, senses, settings, glossary))
        .collect()
}

/// Pool the held-out predictions of all fitted pairs. `count` is the number
/// of pairs.
pub fn aggregate_lexical_evaluation(selections: &[LexicalSelection]) -> Option<Evaluation> {
    let fitted: Vec<&Evaluation> = selections
        .iter()
        .filter_map(|s| match &s.outcome {
            LexselOutcome::Fitted(r) => Some(&r.evaluation),
            LexselOutcome::Skipped(_) => None,
        })
        .collect();
    if fitted.is_empty() {
        return None;
    }
    let test: usize = fitted.iter().map(|e| e.test_size).sum();
    let hits = |f: fn(&Evaluation) -> f64| -> f64 {
        fitted
            .iter()
            .map(|e| (f(e) * e.test_size as f64).round())
            .sum::<f64>()
    };
    let ratio = |x: f64| if test == 0 { 0.0 } else { x / test as f64 };
    Some(Evaluation {
        model_accuracy: ratio(hits(|e| e.model_accuracy)),
        baseline_accuracy: ratio(hits(|e| e.baseline_accuracy)),
        baseline_label: "most frequent translation".into(),
        count: fitted.len(),
        train_size: fitted.iter().map(|e| e.train_size).sum(),
        dev_size: fitted.iter().map(|e| e.dev_size).sum(),
        test_size: test,
    })
}

/// A named category and the senses (or sense POS) that define it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategorySeed {
    pub name: String,
    #[serde(default)]
    pub senses: Vec<String>,
    /// Matches any sense whose id has this POS letter (`walk.v.01` → `v`).
    #[serde(default)]
    pub pos: Option<String>,
}

impl CategorySeed {
    fn new(name: &str, senses: &[&str]) -> Self {
        CategorySeed {
            name: name.into(),
            senses: senses.iter().map(|s| s.to_string()).collect(),
            pos: None,
        }
    }

    /// The twelve default categories, anchored at WordNet-style senses.
    pub fn defaults() -> Vec<CategorySeed> {
        vec![
            CategorySeed::new("food", &["food.n.01", "food.n.02"]),
            CategorySeed::new("relationships", &["relative.n.01", "relationship.n.01", "kin.n.01"]),
            CategorySeed::new("animals", &["animal.n.01"]),
            CategorySeed::new("fruits", &["fruit.n.01", "edible_fruit.n.01"]),
            CategorySeed::new("colors", &["color.n.01", "chromatic_color.n.01"]),
            CategorySeed::new("time", &["time_period.n.01", "time_unit.n.01", "time.n.05"]),
            CategorySeed {
                name: "verbs".into(),
                senses: Vec::new(),
                pos: Some("v".into()),
            },
            CategorySeed::new("body parts", &["body_part.n.01"]),
            CategorySeed::new("vehicle", &["vehicle.n.01"]),
            CategorySeed::new("elements", &["chemical_element.n.01", "element.n.05"]),
            CategorySeed::new("furniture", &["furniture.n.01"]),
            CategorySeed::new("clothing", &["clothing.n.01"]),
        ]
    }

    fn matches(&self, sense: &str, chain: &BTreeSet<String>) -> bool {
        let by_pos = self
            .pos
            .as_deref()
            .is_some_and(|p| sense.split('.').nth(1) == Some(p));
        by_pos || self.senses.iter().any(|s| s == sense || chain.contains(s))
    }
}

/// Categories a sense falls under via itself or its hypernym closure.
pub fn categorize(sense: &str, taxonomy: &TaxonomyResource, seeds: &[CategorySeed]) -> Vec<String> {
    let chain = taxonomy.ancestors(sense);
    seeds
        .iter()
        .filter(|s| s.matches(sense, &chain))
        .map(|s| s.name.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryEntry {
    pub l2: String,
    /// The English lemma.
    pub gloss: String,
    pub count: usize,
    pub examples: Vec<Provenance>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryIndex {
    pub categories: BTreeMap<String, Vec<CategoryEntry>>,
    pub warning: Option<String>,
}

type Tally = BTreeMap<(String, String), Vec<Occurrence>>;

fn to_entries(tally: Tally, lengths: &SentenceLengths, max_examples: usize) -> Vec<CategoryEntry> {
    let len = |id: &str| lengths.get(id).copied().unwrap_or(usize::MAX);
    let mut entries: Vec<CategoryEntry> = tally
        .into_iter()
        .map(|((l2, gloss), occ)| {
            let instances: Vec<Instance> = occ
                .iter()
                .map(|o| Instance {
                    features: FeatureMap::new(),
                    label: String::new(),
                    provenance: o.provenance(),
                })
                .collect();
            CategoryEntry {
                l2,
                gloss,
                count: occ.len(),
                examples: pick_examples(&instances, len, max_examples),
            }
        })
        .collect();
    entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.l2.cmp(&b.l2)).then_with(|| a.gloss.cmp(&b.gloss)));
    entries
}

/// Group aligned L2 words by the category of their English word's sense.
pub fn build_category_index(
    pairs: &[ParallelPair],
    senses: Option<&SenseAnnotations>,
    taxonomy: &TaxonomyResource,
    seeds: &[CategorySeed],
    max_examples: usize,
) -> CategoryIndex {
    let Some(senses) = senses else {
        return CategoryIndex {
            categories: BTreeMap::new(),
            warning: Some("no sense annotations; category index left empty".into()),
        };
    };
    let mut tallies: BTreeMap<String, Tally> = BTreeMap::new();
    for pair in pairs {
        for (s, token) in pair.source.tokens.iter().enumerate() {
            let Some(sense) = senses.get(&pair.id, s) else {
                continue;
            };
            let categories = categorize(sense, taxonomy, seeds);
            if categories.is_empty() {
                continue;
            }
            let gloss = token.lemma_or_form().to_lowercase();
            for t in pair.targets_of(s) {
                let Some(l2) = l2_key(&pair.target, t) else {
                    continue;
                };
                for category in &categories {
                    tallies
                        .entry(category.clone())
                        .or_default()
                        .entry((l2.clone(), gloss.clone()))
                        .or_default()
                        .push(Occurrence {
                            pair: pair.id.clone(),
                            source: s,
                            target: t,
                        });
                }
            }
        }
    }
    let lengths = pair_lengths(pairs);
    CategoryIndex {
        categories: tallies
            .into_iter()
            .map(|(c, t)| (c, to_entries(t, &lengths, max_examples)))
            .collect(),
        warning: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjectiveEntry {
    pub l2: String,
    pub english: String,
    pub count: usize,
    pub synonyms: Vec<String>,
    pub antonyms: Vec<String>,
    pub examples: Vec<Provenance>,
}

/// L2 words aligned to English adjectives, most frequent first, with
/// synonyms and antonyms of the English word from the taxonomy.
pub fn build_adjective_entries(
    pairs: &[ParallelPair],
    taxonomy: &TaxonomyResource,
    senses: Option<&SenseAnnotations>,
    max_examples: usize,
) -> Vec<AdjectiveEntry> {
    let mut tally: Tally = BTreeMap::new();
    let mut tagged: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for pair in pairs {
        for (s, token) in pair.source.tokens.iter().enumerate() {
            if token.upos() != "ADJ" {
                continue;
            }
            let english = token.lemma_or_form().to_lowercase();
            if let Some(sense) = senses.and_then(|a| a.get(&pair.id, s)) {
                tagged.entry(english.clone()).or_default().insert(sense.to_string());
            }
            for t in pair.targets_of(s) {
                if let Some(l2) = l2_key(&pair.target, t) {
                    tally.entry((l2, english.clone())).or_default().push(Occurrence {
                        pair: pair.id.clone(),
                        source: s,
                        target: t,
                    });
                }
            }
        }
    }
    let lengths = pair_lengths(pairs);
    to_entries(tally, &lengths, max_examples)
        .into_iter()
        .map(|e| {
            let word_senses: BTreeSet<String> = match tagged.get(&e.gloss) {
                Some(s) => s.clone(),
                None => taxonomy.senses_of(&e.gloss).map(str::to_string).collect(),
            };
            let mut synonyms = BTreeSet::new();
            let mut antonyms = BTreeSet::new();
            for sense in &word_senses {
                if let Some(members) = taxonomy.sense_lemmas.get(sense) {
                    synonyms.extend(members.iter().filter(|m| **m != e.gloss).cloned());
                }
                for opposite in taxonomy.antonyms_of(sense) {
                    if let Some(members) = taxonomy.sense_lemmas.get(opposite) {
                        antonyms.extend(members.iter().cloned());
                    }
                }
            }
            AdjectiveEntry {
                l2: e.l2,
                english: e.gloss,
                count: e.count,
                synonyms: synonyms.into_iter().collect(),
                antonyms: antonyms.into_iter().collect(),
                examples: e.examples,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_conllu, parse_taxonomy, Corpus};

    fn sentence(rows: &[(&str, &str)]) -> String {
        let mut s = String::new();
        for (i, (form, upos)) in rows.iter().enumerate() {
            let head = if i == 0 { 0 } else { 1 };
            let rel = if i == 0 { "root" } else { "dep" };
            s += &format!("{}\t{form}\t{form}\t{upos}\t_\t_\t{head}\t{rel}\t_\t_\n", i + 1);
        }
        s + "\n"
    }

    fn pairs(rows: &[(&[(&str, &str)], &[(&str, &str)], &str)]) -> Vec<ParallelPair> {
        let src: String = rows.iter().map(|r| sentence(r.0)).collect();
        let tgt: String = rows.iter().map(|r| sentence(r.1)).collect();
        let al: String = rows.iter().map(|r| format!("{}\n", r.2)).collect();
        let (s, t): (Corpus, Corpus) = (parse_conllu(&src).unwrap(), parse_conllu(&tgt).unwrap());
        crate::corpus::parse_alignments(&al, crate::corpus::pair_sentences(&s, &t).unwrap()).unwrap()
    }

    #[test]
    fn single_link() {
        let p = pairs(&[(&[("rice", "NOUN")], &[("bhaat", "NOUN")], "0-0")]);
        let table = aggregate_translations(&p);
        assert_eq!(table.count("rice", "bhaat"), 1);
        assert_eq!(table.upos("rice"), Some("NOUN"));
    }

    fn rice(n_bhaat: usize, n_tandul: usize) -> Vec<ParallelPair> {
        let mut rows: Vec<(&[(&str, &str)], &[(&str, &str)], &str)> = Vec::new();
        for i in 0..n_bhaat + n_tandul {
            if i < n_bhaat {
                rows.push((&[("eat", "VERB"), ("rice", "NOUN")], &[("bhaat", "NOUN"), ("khaa", "VERB")], "0-1 1-0"));
            } else {
                rows.push((&[("buy", "VERB"), ("raw", "ADJ"), ("rice", "NOUN")], &[("kacche", "ADJ"), ("tandul", "NOUN"), ("ghe", "VERB")], "0-2 1-0 2-1"));
            }
        }
        pairs(&rows)
    }

    #[test]
    fn counts_from_construction() {
        let table = aggregate_translations(&rice(3, 2));
        assert_eq!(table.count("rice", "bhaat"), 3);
        assert_eq!(table.count("rice", "tandul"), 2);
        assert_eq!(table.total("rice"), 5);
    }

    #[test]
    fn filtration_thresholds() {
        let p = rice(40, 25);
        let kept = filter_divergent_pairs(&aggregate_translations(&p), &p, &FilterConfig::default());
        let entry = kept.iter().find(|d| d.l1 == "rice").unwrap();
        assert_eq!(entry.candidates.len(), 2);
        assert_eq!(entry.candidates[0].l2, "bhaat");
        assert!((entry.entropy - entropy_bits(&[40, 25])).abs() < 1e-12);

        let lopsided = rice(100, 1);
        let kept = filter_divergent_pairs(&aggregate_translations(&lopsided), &lopsided, &FilterConfig::default());
        assert!(kept.iter().all(|d| d.l1 != "rice"));
    }

    #[test]
    fn proper_nouns_and_loanwords() {
        let mut rows: Vec<(&[(&str, &str)], &[(&str, &str)], &str)> = Vec::new();
        for i in 0..40 {
            rows.push(if i % 2 == 0 {
                (&[("doctor", "NOUN")], &[("vaidya", "NOUN")], "0-0")
            } else {
                (&[("doctor", "NOUN")], &[("Doctor", "NOUN")], "0-0")
            });
            rows.push(if i % 2 == 0 {
                (&[("Pune", "PROPN")], &[("pune", "PROPN")], "0-0")
            } else {
                (&[("Pune", "PROPN")], &[("punyat", "PROPN")], "0-0")
            });
        }
        let p = pairs(&rows);
        let kept = filter_divergent_pairs(&aggregate_translations(&p), &p, &FilterConfig::default());
        assert_eq!(kept.len(), 1);
        let loan: Vec<bool> = kept[0].candidates.iter().map(|c| c.loanword).collect();
        assert_eq!(loan, [true, false]);
    }

    #[test]
    fn lexical_selection_learns_context() {
        let p = rice(60, 40);
        let table = aggregate_translations(&p);
        let kept = filter_divergent_pairs(&table, &p, &FilterConfig::default());
        let lemmas = l1_lemma_vocabulary(&p, 500);
        let sel = fit_lexical_selection(&kept[0], &table, &p, &LexicalTemplate::default(), &lemmas, None, &MiningSettings::default(), &Glossary::default())
            .unwrap();
        let LexselOutcome::Fitted(res) = &sel.outcome else { panic!("skipped") };
        assert_eq!(res.evaluation.model_accuracy, 1.0);
        let tandul = res.rules.iter().find(|r| r.class == "tandul").unwrap();
        assert!(tandul.features.iter().any(|f| f.atom == "l1:ctx:raw=true"));
        let agg = aggregate_lexical_evaluation(&[sel]).unwrap();
        assert_eq!(agg.count, 1);
        assert_eq!(agg.model_accuracy, 1.0);
    }

    fn toy_taxonomy() -> TaxonomyResource {
        parse_taxonomy(
            "banana.n.01\tedible_fruit.n.01\nedible_fruit.n.01\tfood.n.02\nfood.n.02\tsolid.n.01\n",
            "banana.n.01\tbanana\nedible_fruit.n.01\tedible_fruit\nfood.n.02\tfood\nsolid.n.01\tsolid\n\
             good.a.01\tgood\ngood.a.01\tadept\nbad.a.01\tbad\nrun.v.01\trun\n",
            Some("good.a.01\tbad.a.01\n"),
        )
        .unwrap()
    }

    #[test]
    fn categories_follow_hypernyms() {
        let tax = toy_taxonomy();
        let seeds = CategorySeed::defaults();
        assert_eq!(categorize("banana.n.01", &tax, &seeds), ["food", "fruits"]);
        assert_eq!(categorize("run.v.01", &tax, &seeds), ["verbs"]);
        assert!(categorize("solid.n.01", &tax, &seeds).is_empty());
    }

    #[test]
    fn category_index_and_adjectives() {
        let p = pairs(&[
            (&[("banana", "NOUN"), ("good", "ADJ")], &[("kela", "NOUN"), ("chaan", "ADJ")], "0-0 1-1"),
            (&[("banana", "NOUN")], &[("kela", "NOUN")], "0-0"),
        ]);
        let tax = toy_taxonomy();
        let senses = crate::corpus::parse_senses("pair0\t0\tbanana.n.01\npair0\t1\tgood.a.01\n", &tax).unwrap();
        let idx = build_category_index(&p, Some(&senses), &tax, &CategorySeed::defaults(), 5);
        let food = &idx.categories["food"];
        assert_eq!(food.len(), 1);
        assert_eq!((food[0].l2.as_str(), food[0].gloss.as_str(), food[0].count), ("kela", "banana", 1));
        assert!(build_category_index(&p, None, &tax, &CategorySeed::defaults(), 5).warning.is_some());

        let adj = build_adjective_entries(&p, &tax, Some(&senses), 5);
        assert_eq!(adj.len(), 1);
        assert_eq!(adj[0].synonyms, ["adept"]);
        assert_eq!(adj[0].antonyms, ["bad"]);
        assert_eq!(adj[0].examples[0].sentence_id, "pair0");
    }
}
