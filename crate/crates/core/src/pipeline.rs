//! Run configuration and the pipeline stages: ingest, mine, evaluate, render.
//! Every stage writes its artifact under the output directory so later
//! stages can run on their own.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agreement::{run_agreement_task, AgreementTask};
use crate::corpus::{
    apply_transliterations, pair_sentences, parse_alignments, parse_conllu, parse_senses, parse_taxonomy, Corpus,
    IngestStats, ParallelPair, SenseAnnotations, TaxonomyResource,
};
use crate::error::{Error, Result};
use crate::featurize::LemmaVocabulary;
use crate::geninfo::{summarize_morphology, DEFAULT_MIN_TOTAL};
use crate::reporting::{
    emit_json, emit_site, read_bundle, to_canonical_json, EvaluationRow, GeneralSection, LexicalReport, LinearSummary,
    MaterialsBundle, SuffixReport, SuffixSection, TaskSection, TreeTaskReport, VocabularySection,
};
use crate::ruleminer::Glossary;
use crate::suffixes::{build_inventory, run_suffix_task, SuffixOutcome, DEFAULT_MIN_COUNT, DEFAULT_POS, SANDHI_NOTE};
use crate::task::MiningSettings;
use crate::vocabulary::{
    aggregate_lexical_evaluation, aggregate_translations, build_adjective_entries, build_category_index,
    filter_divergent_pairs, fit_all_lexical_selections, l1_lemma_vocabulary, CategorySeed, FilterConfig,
    LexicalTemplate, LexselOutcome, SenseContext,
};
use crate::wordorder::{run_order_task, OrderTask};

/// Input files. Relative paths are resolved against the config file's
/// directory.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputPaths {
    pub treebank: Option<PathBuf>,
    /// English side of the parallel corpus, CoNLL-U.
    pub parallel_source: Option<PathBuf>,
    /// L2 side of the parallel corpus, CoNLL-U.
    pub parallel_target: Option<PathBuf>,
    /// Pharaoh alignments, one line per pair.
    pub alignments: Option<PathBuf>,
    /// `child<TAB>parent` sense pairs.
    pub hypernyms: Option<PathBuf>,
    /// `sense<TAB>lemma` rows.
    pub sense_members: Option<PathBuf>,
    pub antonyms: Option<PathBuf>,
    /// `pair-id<TAB>token-index<TAB>sense` annotations.
    pub senses: Option<PathBuf>,
    /// Romanizations for treebank tokens.
    pub transliterations: Option<PathBuf>,
    /// Romanizations for the L2 side of the parallel corpus.
    pub target_transliterations: Option<PathBuf>,
    /// Extra `atom<TAB>phrase` entries overriding the built-in glossary.
    pub glossary: Option<PathBuf>,
}

/// Which tasks each aspect runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TaskInventory {
    pub word_order: Vec<OrderTask>,
    pub agreement: Vec<AgreementTask>,
    pub suffix_pos: Vec<String>,
    pub suffix_min_count: usize,
    /// Attributes seen fewer times are left out of the general summary.
    pub morphology_min_total: usize,
    /// Frequent treebank lemmas kept as features.
    pub treebank_lemmas: usize,
    pub vocabulary: FilterConfig,
    pub lexical: LexicalTemplate,
    pub categories: Vec<CategorySeed>,
}

impl Default for TaskInventory {
    fn default() -> Self {
        TaskInventory {
            word_order: OrderTask::defaults(),
            agreement: AgreementTask::defaults(),
            suffix_pos: DEFAULT_POS.map(String::from).to_vec(),
            suffix_min_count: DEFAULT_MIN_COUNT,
            morphology_min_total: DEFAULT_MIN_TOTAL,
            treebank_lemmas: 100,
            vocabulary: FilterConfig::default(),
            lexical: LexicalTemplate::default(),
            categories: CategorySeed::defaults(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    #[serde(default = "default_language")]
    pub language: String,
    #[serde(default)]
    pub inputs: InputPaths,
    #[serde(default)]
    pub mining: MiningSettings,
    #[serde(default)]
    pub tasks: TaskInventory,
    /// Output directory; defaults to `out` beside the config file.
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    /// Worker threads; all cores when unset.
    #[serde(default, skip_serializing)]
    pub jobs: Option<usize>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_language() -> String {
    "und".into()
}

impl RunConfig {
    /// A config with default tasks and no inputs.
    pub fn new(seed: u64) -> Self {
        RunConfig {
            seed,
            language: default_language(),
            inputs: InputPaths::default(),
            mining: MiningSettings::default().with_seed(seed),
            tasks: TaskInventory::default(),
            out: None,
            jobs: None,
            base_dir: PathBuf::from("."),
        }
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.base_dir = base_dir.to_path_buf();
        config.mining.seed = config.seed;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf);
        RunConfig::parse(&text, &base)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.mining.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.mining.validate()?;
        for t in &self.tasks.word_order {
            t.validate()?;
        }
        for t in &self.tasks.agreement {
            t.validate()?;
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        match &self.out {
            Some(out) => out.clone(),
            None => self.base_dir.join("out"),
        }
    }

    fn settings(&self) -> MiningSettings {
        self.mining.clone().with_seed(self.seed)
    }

    /// Run `f` on a pool of `jobs` threads, or on the global pool.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.jobs {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Aspect {
    GeneralInformation,
    Vocabulary,
    WordOrder,
    SuffixUsage,
    Agreement,
}

impl Aspect {
    pub const ALL: [Aspect; 5] = [
        Aspect::GeneralInformation,
        Aspect::Vocabulary,
        Aspect::WordOrder,
        Aspect::SuffixUsage,
        Aspect::Agreement,
    ];

    /// Key in the bundle's `aspects` object.
    pub fn key(self) -> &'static str {
        match self {
            Aspect::GeneralInformation => "general_information",
            Aspect::Vocabulary => "vocabulary",
            Aspect::WordOrder => "word_order",
            Aspect::SuffixUsage => "suffix_usage",
            Aspect::Agreement => "agreement",
        }
    }
}

impl fmt::Display for Aspect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Aspect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s.to_lowercase().chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        Ok(match norm.as_str() {
            "general" | "generalinformation" | "geninfo" | "morphology" => Aspect::GeneralInformation,
            "vocabulary" | "vocab" | "lexical" | "lexicalselection" => Aspect::Vocabulary,
            "wordorder" | "order" => Aspect::WordOrder,
            "suffix" | "suffixes" | "suffixusage" => Aspect::SuffixUsage,
            "agreement" | "agree" => Aspect::Agreement,
            _ => return Err(Error::Config(format!("unknown aspect {s:?}"))),
        })
    }
}

/// Everything read from the input files. Missing or unusable inputs leave
/// their slot empty and add a notice.
#[derive(Debug, Clone, Default)]
pub struct LoadedInputs {
    pub treebank: Option<Corpus>,
    pub pairs: Vec<ParallelPair>,
    pub taxonomy: Option<TaxonomyResource>,
    pub senses: Option<SenseAnnotations>,
    pub glossary: Glossary,
    pub stats: BTreeMap<String, IngestStats>,
    pub notices: Vec<String>,
}

fn read(config: &RunConfig, path: &Path) -> Result<String> {
    let path = config.resolve(path);
    std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
}

fn read_conllu(config: &RunConfig, path: &Path) -> Result<Corpus> {
    let corpus = parse_conllu(&read(config, path)?)?;
    Ok(corpus.with_language(config.language.clone()))
}

/// Read every configured input.
pub fn load_inputs(config: &RunConfig) -> Result<LoadedInputs> {
    let inp = &config.inputs;
    let mut out = LoadedInputs::default();
    if let Some(path) = &inp.glossary {
        out.glossary = Glossary::default().merged(Glossary::parse(&read(config, path)?)?);
    }

    match &inp.treebank {
        Some(path) => {
            let mut corpus = read_conllu(config, path)?;
            if let Some(t) = &inp.transliterations {
                apply_transliterations(&mut corpus, &read(config, t)?)?;
            }
            out.stats.insert("treebank".into(), corpus.stats.clone());
            out.treebank = Some(corpus);
        }
        None => out.notices.push("no treebank configured".into()),
    }

    match (&inp.parallel_source, &inp.parallel_target, &inp.alignments) {
        (Some(src), Some(tgt), Some(align)) => {
            let source = read_conllu(config, src)?;
            let mut target = read_conllu(config, tgt)?;
            if let Some(t) = &inp.target_transliterations {
                apply_transliterations(&mut target, &read(config, t)?)?;
            }
            out.stats.insert("parallel_source".into(), source.stats.clone());
            out.stats.insert("parallel_target".into(), target.stats.clone());
            out.pairs = parse_alignments(&read(config, align)?, pair_sentences(&source, &target)?)?;
        }
        (None, None, None) => out.notices.push("no parallel corpus configured".into()),
        (Some(_), Some(_), None) => out.notices.push("parallel corpus has no alignments".into()),
        _ => out.notices.push("parallel corpus needs source, target and alignments".into()),
    }

    match (&inp.hypernyms, &inp.sense_members) {
        (Some(h), Some(m)) => {
            let antonyms = inp.antonyms.as_ref().map(|a| read(config, a)).transpose()?;
            let taxonomy = parse_taxonomy(&read(config, h)?, &read(config, m)?, antonyms.as_deref())?;
            if let Some(s) = &inp.senses {
                let senses = parse_senses(&read(config, s)?, &taxonomy)?;
                out.notices.extend(senses.skipped.iter().map(|s| format!("sense annotations: {s}")));
                out.senses = Some(senses);
            }
            out.taxonomy = Some(taxonomy);
        }
        (None, None) => {}
        _ => out.notices.push("taxonomy needs both hypernyms and sense_members".into()),
    }
    Ok(out)
}

/// Written by the ingest stage.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub stats: BTreeMap<String, IngestStats>,
    pub notices: Vec<String>,
}

pub fn ingest_path(config: &RunConfig) -> PathBuf {
    config.out_dir().join("ingest.json")
}

pub fn partial_path(config: &RunConfig, aspect: Aspect) -> PathBuf {
    config.out_dir().join("partial").join(format!("{}.json", aspect.key()))
}

pub fn evaluation_path(config: &RunConfig) -> PathBuf {
    config.out_dir().join("evaluation.json")
}

pub fn bundle_path(config: &RunConfig) -> PathBuf {
    config.out_dir().join("bundle.json")
}

pub fn site_dir(config: &RunConfig) -> PathBuf {
    config.out_dir().join("site")
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, to_canonical_json(value)?).map_err(|e| Error::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Parse all inputs and write `ingest.json`.
pub fn cmd_ingest(config: &RunConfig) -> Result<IngestReport> {
    let inputs = load_inputs(config)?;
    let report = IngestReport {
        stats: inputs.stats,
        notices: inputs.notices,
    };
    write_json(&ingest_path(config), &report)?;
    Ok(report)
}

fn general_section(config: &RunConfig, inputs: &LoadedInputs) -> GeneralSection {
    let Some(corpus) = &inputs.treebank else {
        return GeneralSection {
            notices: vec!["General Information skipped: no treebank".into()],
            ..Default::default()
        };
    };
    GeneralSection {
        morphology: summarize_morphology(corpus, config.mining.max_examples, config.tasks.morphology_min_total),
        notices: Vec::new(),
    }
}

fn treebank_lemmas(config: &RunConfig, corpus: &Corpus) -> LemmaVocabulary {
    LemmaVocabulary::from_corpus(corpus, config.tasks.treebank_lemmas)
}

fn word_order_section(config: &RunConfig, inputs: &LoadedInputs) -> Result<TaskSection> {
    let Some(corpus) = &inputs.treebank else {
        return Ok(TaskSection {
            notices: vec!["Word Order skipped: no treebank".into()],
            ..Default::default()
        });
    };
    let settings = config.settings();
    let lemmas = treebank_lemmas(config, corpus);
    let results: Vec<_> = config
        .tasks
        .word_order
        .par_iter()
        .map(|t| run_order_task(corpus, t, &settings, &lemmas, &inputs.glossary).map(|r| (t, r)))
        .collect::<Result<_>>()?;
    let mut section = TaskSection::default();
    for (task, res) in results {
        match res {
            Some(res) => section.tasks.push(TreeTaskReport::new(&task.name, &res)),
            None => section.notices.push(format!(
                "{}: fewer than {} instances",
                task.name, settings.min_instances
            )),
        }
    }
    Ok(section)
}

fn agreement_section(config: &RunConfig, inputs: &LoadedInputs) -> Result<TaskSection> {
    let Some(corpus) = &inputs.treebank else {
        return Ok(TaskSection {
            notices: vec!["Agreement skipped: no treebank".into()],
            ..Default::default()
        });
    };
    let settings = config.settings();
    let lemmas = treebank_lemmas(config, corpus);
    let results: Vec<_> = config
        .tasks
        .agreement
        .par_iter()
        .map(|t| run_agreement_task(corpus, t, &settings, &lemmas, &inputs.glossary).map(|r| (t, r)))
        .collect::<Result<_>>()?;
    let mut section = TaskSection::default();
    for (task, res) in results {
        match res {
            Some(res) => section.tasks.push(TreeTaskReport::new(&task.attribute, &res)),
            None => section.notices.push(format!(
                "{}: fewer than {} related pairs carry the attribute",
                task.attribute, settings.min_instances
            )),
        }
    }
    Ok(section)
}

fn suffix_section(config: &RunConfig, inputs: &LoadedInputs) -> Result<SuffixSection> {
    let mut section = SuffixSection {
        segmentation_note: SANDHI_NOTE.into(),
        ..Default::default()
    };
    let Some(corpus) = &inputs.treebank else {
        section.notices.push("Suffix Usage skipped: no treebank".into());
        return Ok(section);
    };
    let settings = config.settings();
    let lemmas = treebank_lemmas(config, corpus);
    let results: Vec<_> = config
        .tasks
        .suffix_pos
        .par_iter()
        .map(|pos| {
            let inv = build_inventory(corpus, pos, config.tasks.suffix_min_count);
            run_suffix_task(corpus, &inv, &settings, &lemmas, &inputs.glossary).map(|out| (inv, out))
        })
        .collect::<Result<_>>()?;
    for (inv, out) in results {
        match out {
            SuffixOutcome::Fitted(res) => section.inventories.push(SuffixReport {
                upos: inv.upos.clone(),
                inventory: inv.counts.clone(),
                instances: res.instances.len(),
                model: LinearSummary::from(res.as_ref()),
                rules: res.rules,
                evaluation: res.evaluation,
            }),
            SuffixOutcome::Skipped(why) => section.notices.push(why),
        }
    }
    Ok(section)
}

fn vocabulary_section(config: &RunConfig, inputs: &LoadedInputs) -> Result<VocabularySection> {
    let mut section = VocabularySection::default();
    if inputs.pairs.is_empty() {
        section.notices.push("Vocabulary skipped: no aligned parallel corpus".into());
        return Ok(section);
    }
    let settings = config.settings();
    let pairs = &inputs.pairs;
    let table = aggregate_translations(pairs);
    let divergent = filter_divergent_pairs(&table, pairs, &config.tasks.vocabulary);
    let lemmas = l1_lemma_vocabulary(pairs, config.tasks.lexical.max_lemmas);
    let sense_ctx = match (&inputs.senses, &inputs.taxonomy) {
        (Some(senses), Some(taxonomy)) => Some(SenseContext { senses, taxonomy }),
        _ => None,
    };
    let selections = fit_all_lexical_selections(
        &divergent,
        &table,
        pairs,
        &config.tasks.lexical,
        &lemmas,
        sense_ctx,
        &settings,
        &inputs.glossary,
    )?;
    section.evaluation = aggregate_lexical_evaluation(&selections);
    for sel in selections {
        match sel.outcome {
            LexselOutcome::Fitted(res) => section.divergent.push(LexicalReport {
                l1: sel.pair.l1.clone(),
                upos: sel.pair.upos.clone(),
                candidates: sel.pair.candidates.clone(),
                entropy: sel.pair.entropy,
                instances: res.instances.len(),
                model: LinearSummary::from(res.as_ref()),
                rules: res.rules,
                evaluation: res.evaluation,
            }),
            LexselOutcome::Skipped(why) => section.notices.push(why),
        }
    }
    match &inputs.taxonomy {
        Some(taxonomy) => {
            section.categories = build_category_index(
                pairs,
                inputs.senses.as_ref(),
                taxonomy,
                &config.tasks.categories,
                settings.max_examples,
            );
            section.adjectives = build_adjective_entries(pairs, taxonomy, inputs.senses.as_ref(), settings.max_examples);
        }
        None => {
            section.notices.push("word categories skipped: no taxonomy".into());
            section.adjectives =
                build_adjective_entries(pairs, &TaxonomyResource::default(), None, settings.max_examples);
        }
    }
    Ok(section)
}

/// Mine one aspect from already loaded inputs into a partial bundle.
pub fn mine_aspect(config: &RunConfig, inputs: &LoadedInputs, aspect: Aspect) -> Result<MaterialsBundle> {
    let mut bundle = MaterialsBundle::new(&config.language, config.seed);
    config.install(|| -> Result<()> {
        let a = &mut bundle.aspects;
        match aspect {
            Aspect::GeneralInformation => a.general_information = general_section(config, inputs),
            Aspect::Vocabulary => a.vocabulary = vocabulary_section(config, inputs)?,
            Aspect::WordOrder => a.word_order = word_order_section(config, inputs)?,
            Aspect::SuffixUsage => a.suffix_usage = suffix_section(config, inputs)?,
            Aspect::Agreement => a.agreement = agreement_section(config, inputs)?,
        }
        Ok(())
    })??;
    bundle.collect_sentences(inputs.treebank.as_ref(), &inputs.pairs);
    Ok(bundle)
}

/// Mine one aspect and write `partial/<aspect>.json`.
pub fn cmd_mine(config: &RunConfig, aspect: Aspect) -> Result<MaterialsBundle> {
    let inputs = load_inputs(config)?;
    let bundle = mine_aspect(config, &inputs, aspect)?;
    write_json(&partial_path(config, aspect), &bundle)?;
    Ok(bundle)
}

/// Merge the partial bundles, mining any aspect without one.
fn merged_partials(config: &RunConfig) -> Result<MaterialsBundle> {
    let mut merged = MaterialsBundle::new(&config.language, config.seed);
    let mut inputs: Option<LoadedInputs> = None;
    for aspect in Aspect::ALL {
        let path = partial_path(config, aspect);
        let partial = if path.exists() {
            read_bundle(&path)?
        } else {
            if inputs.is_none() {
                inputs = Some(load_inputs(config)?);
            }
            let partial = mine_aspect(config, inputs.as_ref().expect("loaded"), aspect)?;
            write_json(&path, &partial)?;
            partial
        };
        merged.merge(partial);
    }
    merged.build_evaluation_table();
    Ok(merged)
}

/// Build the evaluation table from the partial bundles and write
/// `evaluation.json`.
pub fn cmd_evaluate(config: &RunConfig) -> Result<Vec<EvaluationRow>> {
    let bundle = merged_partials(config)?;
    write_json(&evaluation_path(config), &bundle.evaluation)?;
    Ok(bundle.evaluation)
}

/// Assemble the full bundle, then write `bundle.json` and `site/`.
pub fn cmd_render(config: &RunConfig) -> Result<MaterialsBundle> {
    let mut bundle = merged_partials(config)?;
    let ingest_file = ingest_path(config);
    let ingest: IngestReport = if ingest_file.exists() {
        read_json(&ingest_file)?
    } else {
        cmd_ingest(config)?
    };
    bundle.ingestion = ingest.stats;
    bundle.config = serde_json::to_value(config)?;
    emit_json(&bundle, &bundle_path(config))?;
    emit_site(&bundle, &site_dir(config))?;
    Ok(bundle)
}

/// Every stage in order.
pub fn cmd_all(config: &RunConfig) -> Result<MaterialsBundle> {
    cmd_ingest(config)?;
    let inputs = load_inputs(config)?;
    for aspect in Aspect::ALL {
        let partial = mine_aspect(config, &inputs, aspect)?;
        write_json(&partial_path(config, aspect), &partial)?;
    }
    cmd_evaluate(config)?;
    cmd_render(config)
}
