//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use unicode_normalization::UnicodeNormalization;

use teachgram::agreement::{run_agreement_task, AgreementTask};
use teachgram::corpus::{parse_conllu, Corpus};
use teachgram::featurize::{FeatureMap, Instance, LemmaVocabulary, Provenance};
use teachgram::pipeline::{self, cmd_all, mine_aspect, Aspect, LoadedInputs, RunConfig};
use teachgram::reporting::{format_baseline, format_cell, BUNDLE_SCHEMA};
use teachgram::ruleminer::{chi2_relabel, pearson, Chi2Config, ExpectedMode, Glossary, RuleContext, Verdict};
use teachgram::suffixes::{decompose, Segmentation};
use teachgram::synth;
use teachgram::task::{run_tree_task, MiningSettings};
use teachgram::vocabulary::{
    aggregate_translations, filter_divergent_pairs, fit_lexical_selection, l1_lemma_vocabulary, FilterConfig,
    LexicalTemplate, LexselOutcome, SenseContext,
};
use teachgram::wordorder::{run_order_task, OrderTask};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const SEED: u64 = 20231;

// 1. Planted word-order rule recovery.
fn planted_word_order() -> Outcome {
    let start = Instant::now();
    let corpus = parse_conllu(&synth::planted_word_order(2000, 0.10, SEED)).map_err(|e| e.to_string())?;
    let task = OrderTask::new("object-verb", "object", "verb", "obj", &["VERB"]);
    let settings = MiningSettings::default().with_seed(SEED);
    let lemmas = LemmaVocabulary::from_corpus(&corpus, 100);
    let res = run_order_task(&corpus, &task, &settings, &lemmas, &Glossary::default())
        .map_err(|e| e.to_string())?
        .ok_or("too few instances")?;
    let elapsed = start.elapsed();

    let planted = res.rules.iter().find(|r| {
        r.verdict == Verdict::Significant
            && r.label == "after"
            && r.conditions.iter().any(|c| c.atom == "dep:PronType=Int" && c.present)
    });
    ensure!(planted.is_some(), "no significant dep:PronType=Int -> after rule");
    let default = res.rules.iter().find(|r| r.verdict == Verdict::Default);
    ensure!(default.is_some_and(|r| r.label == "before"), "default rule is not \"before\"");

    let e = &res.evaluation;
    ensure!(e.model_accuracy == 1.0, "held-out accuracy {} != 1.0", e.model_accuracy);
    let test_labels: Vec<&str> = res.split.test.iter().map(|&i| res.instances[i].label.as_str()).collect();
    let before = test_labels.iter().filter(|&&l| l == "before").count();
    let majority_share = before.max(test_labels.len() - before) as f64 / test_labels.len() as f64;
    ensure!(
        (e.baseline_accuracy - majority_share).abs() <= 0.01,
        "baseline {} vs held-out majority share {}",
        e.baseline_accuracy,
        majority_share
    );
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!(
        "accuracy {:.4}, baseline {:.4} (held-out majority share {:.4}, planted 0.90), {:.2?}",
        e.model_accuracy, e.baseline_accuracy, majority_share, elapsed
    ))
}

// 2. Chi-squared oracle equivalence.
fn brute_pearson(counts: &[usize], expected: &[f64]) -> f64 {
    let n: usize = counts.iter().sum();
    let mut total = 0.0;
    for i in 0..counts.len() {
        if expected[i] > 0.0 {
            let e = expected[i] * n as f64;
            let d = counts[i] as f64 - e;
            total += d * d / e;
        }
    }
    total
}

fn chi_squared_oracle() -> Outcome {
    let alpha = 0.05;
    let config = Chi2Config { alpha, min_leaf_support: 1, ..Chi2Config::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_stat = 0.0f64;
    let mut worst_p = 0.0f64;
    for t in 0..50 {
        let k = rng.random_range(2..=5);
        let n = rng.random_range(1..=200);
        let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
        let sum: f64 = weights.iter().sum();
        let expected: Vec<f64> = weights.iter().map(|w| w / sum).collect();
        let mut counts = vec![0usize; k];
        for _ in 0..n {
            counts[rng.random_range(0..k)] += 1;
        }
        let (stat, df) = pearson(&counts, &expected).map_err(|e| e.to_string())?;
        let oracle = brute_pearson(&counts, &expected);
        worst_stat = worst_stat.max((stat - oracle).abs());
        ensure!((stat - oracle).abs() <= 1e-9, "table {t}: statistic {stat} vs {oracle}");
        ensure!(df == k - 1, "table {t}: df {df}");

        let oracle_p = ChiSquared::new(df as f64).map_err(|e| e.to_string())?.sf(oracle);
        let out = chi2_relabel(&counts, &expected, &config, None).map_err(|e| e.to_string())?;
        worst_p = worst_p.max((out.p_value - oracle_p).abs());
        ensure!(
            (out.p_value < alpha) == (oracle_p < alpha),
            "table {t}: p {} vs oracle {oracle_p}",
            out.p_value
        );
        let dominant = out.label;
        let enriched = counts[dominant] as f64 / n as f64 > expected[dominant];
        let oracle_verdict = if oracle_p < alpha && enriched { Verdict::Significant } else { Verdict::Inconclusive };
        ensure!(out.verdict == oracle_verdict, "table {t}: verdict {:?} vs {oracle_verdict:?}", out.verdict);
    }

    let a = chi2_relabel(&[30, 10], &[0.5, 0.5], &config, None).map_err(|e| e.to_string())?;
    ensure!(a.statistic == 10.0 && a.df == 1 && a.verdict == Verdict::Significant, "[30,10]: {a:?}");
    let b = chi2_relabel(&[20, 20], &[0.5, 0.5], &config, None).map_err(|e| e.to_string())?;
    ensure!(b.statistic == 0.0 && b.verdict == Verdict::Inconclusive, "[20,20]: {b:?}");
    Ok(format!("50 tables, max |stat diff| {worst_stat:.1e}, max |p diff| {worst_p:.1e}; hand cases exact"))
}

// 3. Tree-vs-baseline separation.
fn row(i: usize, features: &[(&str, &str)], label: &str) -> Instance {
    let features: FeatureMap = features.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    Instance {
        features,
        label: label.into(),
        provenance: Provenance { sentence_id: format!("r{i}"), dependent: 1, head: None },
    }
}

fn tree_vs_baseline() -> Outcome {
    let xor: Vec<Instance> = (0..400)
        .map(|i| {
            let (a, b) = (i % 2 == 1, (i / 2) % 2 == 1);
            row(i, &[("a", &a.to_string()), ("b", &b.to_string())], if a ^ b { "1" } else { "0" })
        })
        .collect();
    let settings = MiningSettings::default().with_seed(SEED);
    let ctx = RuleContext::word_order("x", "y");
    let run = |rows: Vec<Instance>| {
        run_tree_task(rows, &settings, ExpectedMode::Uniform, None, &ctx, &Glossary::default(), &BTreeMap::new())
            .map_err(|e| e.to_string())
    };
    let x = run(xor)?.evaluation;
    ensure!(x.model_accuracy == 1.0, "XOR tree accuracy {}", x.model_accuracy);
    ensure!((x.baseline_accuracy - 0.5).abs() <= 0.05, "XOR baseline {}", x.baseline_accuracy);

    let single: Vec<Instance> = (0..400)
        .map(|i| row(i, &[("a", if i % 3 == 0 { "x" } else { "y" })], "only"))
        .collect();
    let s = run(single)?.evaluation;
    ensure!(s.model_accuracy == 1.0 && s.baseline_accuracy == 1.0, "single class: {s:?}");
    Ok(format!(
        "XOR tree {:.3} vs baseline {:.3}; single class {:.1} / {:.1}",
        x.model_accuracy, x.baseline_accuracy, s.model_accuracy, s.baseline_accuracy
    ))
}

// 4. Suffix decomposition properties.
fn lcp(a: &str, b: &str) -> String {
    a.chars().zip(b.chars()).take_while(|(x, y)| x == y).map(|(x, _)| x).collect()
}

fn suffix_properties() -> Outcome {
    const ALPHABET: [char; 14] = ['a', 'd', 'e', 'h', 'l', 's', 't', 'क', 'त', 'द', 'श', 'ा', 'े', 'ं'];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let word = |rng: &mut ChaCha8Rng, max: usize| -> String {
        let len = rng.random_range(1..=max);
        (0..len).map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())]).collect()
    };
    let mut suppletive = 0;
    for i in 0..1000 {
        let shared = word(&mut rng, 5);
        let (form, lemma) = match i % 3 {
            0 => (format!("{shared}{}", word(&mut rng, 4)), shared.clone()),
            1 => (format!("{shared}{}", word(&mut rng, 4)), format!("{shared}{}", word(&mut rng, 3))),
            _ => (word(&mut rng, 8), word(&mut rng, 8)),
        };
        let (form_n, lemma_n): (String, String) = (form.nfc().collect(), lemma.nfc().collect());
        let prefix = lcp(&form_n, &lemma_n);
        match decompose(&form, &lemma) {
            Segmentation::Decomposed(d) => {
                ensure!(format!("{}{}", d.stem, d.suffix) == form_n, "{form}/{lemma}: {d:?}");
                ensure!(d.stem == prefix, "{form}/{lemma}: stem {} vs lcp {prefix}", d.stem);
            }
            Segmentation::Suppletive => {
                ensure!(prefix.is_empty(), "{form}/{lemma}: suppletive with lcp {prefix}");
                suppletive += 1;
            }
        }
    }
    let Segmentation::Decomposed(d) = decompose("deshaala", "desh") else {
        return Err("deshaala/desh is suppletive".into());
    };
    ensure!((d.stem.as_str(), d.suffix.as_str()) == ("desh", "aala"), "deshaala: {d:?}");

    let corpus = parse_conllu(&synth::treebank(300, SEED)).map_err(|e| e.to_string())?;
    let inputs = LoadedInputs { treebank: Some(corpus), ..Default::default() };
    let bundle = mine_aspect(&RunConfig::new(SEED), &inputs, Aspect::SuffixUsage).map_err(|e| e.to_string())?;
    let note = &bundle.aspects.suffix_usage.segmentation_note;
    ensure!(note.contains("desh + aala") && note.contains("desh + laa"), "sandhi note missing: {note:?}");
    Ok(format!("1000 pairs ({suppletive} with no shared prefix); desh + aala; sandhi note in suffix_usage metadata"))
}

// 5. Lexical selection.
fn lexical_selection() -> Outcome {
    let fixture = synth::planted_parallel(4000, 0.40, SEED);
    let pairs = fixture.pairs().map_err(|e| e.to_string())?;
    let taxonomy = fixture.taxonomy().map_err(|e| e.to_string())?;
    let senses = fixture.senses(&taxonomy).map_err(|e| e.to_string())?;
    let table = aggregate_translations(&pairs);
    let divergent = filter_divergent_pairs(&table, &pairs, &FilterConfig::default());
    let rice = divergent.iter().find(|d| d.l1 == "rice").ok_or("rice filtered out")?;

    let template = LexicalTemplate::default();
    let lemmas = l1_lemma_vocabulary(&pairs, template.max_lemmas);
    let sel = fit_lexical_selection(
        rice,
        &table,
        &pairs,
        &template,
        &lemmas,
        Some(SenseContext { senses: &senses, taxonomy: &taxonomy }),
        &MiningSettings::default().with_seed(SEED),
        &Glossary::default(),
    )
    .map_err(|e| e.to_string())?;
    let LexselOutcome::Fitted(res) = sel.outcome else {
        return Err("rice was not fitted".into());
    };
    let e = &res.evaluation;
    ensure!(e.model_accuracy >= 0.95, "accuracy {}", e.model_accuracy);
    ensure!((e.baseline_accuracy - 0.60).abs() <= 0.05, "baseline {}", e.baseline_accuracy);
    let tandul = res.rules.iter().find(|r| r.class == "tandul").ok_or("no tandul rule")?;
    ensure!(tandul.features.len() <= 20, "{} features", tandul.features.len());
    let raw = tandul.features.iter().position(|f| f.atom.contains("raw"));
    ensure!(raw.is_some(), "raw-context feature not among tandul's top features");
    Ok(format!(
        "rice kept (entropy {:.2}); accuracy {:.4}, baseline {:.4}; {} ranked #{} for tandul",
        rice.entropy,
        e.model_accuracy,
        e.baseline_accuracy,
        tandul.features[raw.unwrap_or(0)].atom,
        raw.unwrap_or(0) + 1
    ))
}

// 6. Agreement relabeling.
fn deprel_of(corpus: &Corpus, p: &Provenance) -> String {
    corpus
        .sentence(&p.sentence_id)
        .and_then(|s| s.token(p.dependent))
        .map(|t| t.deprel().to_string())
        .unwrap_or_default()
}

fn agreement_relabeling() -> Outcome {
    let corpus = parse_conllu(&synth::planted_agreement(400, 0.95, 0.50, SEED)).map_err(|e| e.to_string())?;
    let settings = MiningSettings::default().with_seed(SEED);
    let res = run_agreement_task(&corpus, &AgreementTask::new("Gender"), &settings, &LemmaVocabulary::default(), &Glossary::default())
        .map_err(|e| e.to_string())?
        .ok_or("too few pairs")?;
    let mut per_relation: BTreeMap<String, usize> = BTreeMap::new();
    for i in &res.instances {
        *per_relation.entry(deprel_of(&corpus, &i.provenance)).or_default() += 1;
    }
    for rel in ["amod", "obj"] {
        let n = per_relation.get(rel).copied().unwrap_or(0);
        ensure!(n >= 200, "{rel}: {n} pairs");
    }

    let train: Vec<&Instance> = res.split.train.iter().map(|&i| &res.instances[i]).collect();
    let (mut amod_leaves, mut obj_leaves) = (Vec::new(), Vec::new());
    for rule in res.rules.iter().filter(|r| r.verdict != Verdict::Default) {
        let mut rels: BTreeMap<String, usize> = BTreeMap::new();
        for inst in train.iter().filter(|i| rule.matches(i)) {
            *rels.entry(deprel_of(&corpus, &inst.provenance)).or_default() += 1;
        }
        let total: usize = rels.values().sum();
        let share = |r: &str| rels.get(r).copied().unwrap_or(0) as f64 / total.max(1) as f64;
        if share("amod") >= 0.9 {
            amod_leaves.push(rule);
        } else if share("obj") >= 0.9 {
            obj_leaves.push(rule);
        }
    }
    ensure!(!amod_leaves.is_empty() && !obj_leaves.is_empty(), "tree did not separate amod from obj");
    for r in &amod_leaves {
        ensure!(r.verdict == Verdict::Significant && r.label == "1", "amod leaf {:?} label {}", r.verdict, r.label);
    }
    for r in &obj_leaves {
        ensure!(r.verdict == Verdict::Inconclusive, "obj leaf {:?} (p = {})", r.verdict, r.p_value);
    }
    Ok(format!(
        "{} amod / {} obj pairs; amod leaf significant (p = {:.1e}), obj leaf inconclusive",
        per_relation["amod"], per_relation["obj"], amod_leaves[0].p_value
    ))
}

// 7. End-to-end determinism and format.
fn is_cell(s: &str) -> bool {
    let Some((acc, count)) = s.split_once(' ') else {
        return false;
    };
    is_percent(acc)
        && count.starts_with('(')
        && count.ends_with(')')
        && count.len() > 2
        && count[1..count.len() - 1].bytes().all(|b| b.is_ascii_digit())
}

fn is_percent(s: &str) -> bool {
    let Some((int, frac)) = s.split_once('.') else {
        return false;
    };
    (1..=3).contains(&int.len())
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.len() == 2
        && frac.bytes().all(|b| b.is_ascii_digit())
        && s.parse::<f64>().is_ok_and(|v| (0.0..=100.0).contains(&v))
}

fn determinism_and_format() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config_path = synth::write_fixture_dir(dir.path(), 1500, SEED).map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    for run in ["a", "b"] {
        let mut config = RunConfig::load(&config_path).map_err(|e| e.to_string())?;
        config.out = Some(dir.path().join(run));
        cmd_all(&config).map_err(|e| e.to_string())?;
        bytes.push(std::fs::read(pipeline::bundle_path(&config)).map_err(|e| e.to_string())?);
    }
    ensure!(bytes[0] == bytes[1], "bundle.json differs between runs");

    let schema: serde_json::Value = serde_json::from_str(BUNDLE_SCHEMA).map_err(|e| e.to_string())?;
    let compiled = jsonschema::JSONSchema::compile(&schema).map_err(|e| e.to_string())?;
    let bundle: serde_json::Value = serde_json::from_slice(&bytes[0]).map_err(|e| e.to_string())?;
    if let Err(errors) = compiled.validate(&bundle) {
        let msgs: Vec<String> = errors.take(3).map(|e| format!("{} at {}", e, e.instance_path)).collect();
        return Err(format!("schema: {}", msgs.join("; ")));
    }

    let index = std::fs::read_to_string(dir.path().join("a/site/index.html")).map_err(|e| e.to_string())?;
    let sections = index.matches("<section id=").count();
    ensure!(sections == 5, "{sections} sections in index.html");
    for anchor in ["general-information", "vocabulary", "word-order", "suffix-usage", "agreement"] {
        ensure!(index.contains(&format!("<section id=\"{anchor}\">")), "missing section {anchor}");
    }

    ensure!(format_cell(0.9702, 7) == "97.02 (7)" && format_baseline(0.9697) == "96.97", "reference cell format");
    let rows = bundle["evaluation"].as_array().ok_or("no evaluation table")?;
    ensure!(!rows.is_empty(), "empty evaluation table");
    for r in rows {
        let cell = r["model_cell"].as_str().unwrap_or_default();
        let base = r["baseline_cell"].as_str().unwrap_or_default();
        ensure!(is_cell(cell) && is_percent(base), "malformed cells {cell:?} / {base:?}");
        ensure!(index.contains(cell), "index.html lacks cell {cell}");
    }
    Ok(format!(
        "identical {}-byte bundles; schema valid; 5 sections; {} rows like {:?}",
        bytes[0].len(),
        rows.len(),
        rows[0]["model_cell"].as_str().unwrap_or_default()
    ))
}

// 8. Smoke test on a real treebank.
fn treebank_smoke() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (path, source) = match std::env::var_os("TEACHGRAM_TREEBANK") {
        Some(p) => (PathBuf::from(p), "TEACHGRAM_TREEBANK"),
        None => {
            let p = dir.path().join("treebank.conllu");
            std::fs::write(&p, synth::treebank(1200, SEED)).map_err(|e| e.to_string())?;
            (p, "synthetic stand-in; set TEACHGRAM_TREEBANK for a real one")
        }
    };
    let mut config = RunConfig::new(SEED);
    config.inputs.treebank = Some(path.clone());
    config.out = Some(dir.path().join("out"));
    let bundle = cmd_all(&config).map_err(|e| e.to_string())?;

    let sentences = bundle.ingestion.get("treebank").map_or(0, |s| s.sentences);
    ensure!(sentences >= 1000, "{sentences} sentences, need at least 1000");
    let a = &bundle.aspects;
    ensure!(!a.vocabulary.notices.is_empty(), "vocabulary skipped without a notice");
    let mut evaluations = Vec::new();
    evaluations.extend(a.word_order.tasks.iter().map(|t| (t.name.clone(), t.evaluation.clone())));
    evaluations.extend(a.agreement.tasks.iter().map(|t| (t.name.clone(), t.evaluation.clone())));
    evaluations.extend(a.suffix_usage.inventories.iter().map(|s| (s.upos.clone(), s.evaluation.clone())));
    ensure!(!evaluations.is_empty(), "no classification task completed");
    for (name, e) in &evaluations {
        let ok = |v: f64| v.is_finite() && (0.0..=1.0).contains(&v);
        ensure!(ok(e.model_accuracy) && ok(e.baseline_accuracy), "{name}: {e:?}");
    }
    ensure!(bundle.evaluation.len() == evaluations.len(), "evaluation table has {} rows", bundle.evaluation.len());
    Ok(format!(
        "{} ({sentences} sentences): {} tasks with model and baseline accuracy; {} morphology attributes",
        source,
        evaluations.len(),
        a.general_information.morphology.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("planted word-order rule recovery", planted_word_order),
        ("chi-squared oracle equivalence", chi_squared_oracle),
        ("tree vs baseline separation", tree_vs_baseline),
        ("suffix decomposition properties", suffix_properties),
        ("lexical selection", lexical_selection),
        ("agreement relabeling", agreement_relabeling),
        ("end-to-end determinism and format", determinism_and_format),
        ("treebank smoke test", treebank_smoke),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
