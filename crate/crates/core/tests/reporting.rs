use std::path::Path;

use teachgram::corpus::parse_conllu;
use teachgram::featurize::{LemmaVocabulary, Provenance};
use teachgram::reporting::{emit_json, emit_site, to_canonical_json, MaterialsBundle, TreeTaskReport};
use teachgram::ruleminer::{Glossary, Verdict};
use teachgram::synth::planted_word_order;
use teachgram::task::MiningSettings;
use teachgram::wordorder::{run_order_task, OrderTask};
use teachgram::Error;

fn planted_bundle() -> MaterialsBundle {
    let corpus = parse_conllu(&planted_word_order(600, 0.1, 4)).unwrap();
    let task = OrderTask::new("object-verb", "object", "verb", "obj", &["VERB"]);
    let res = run_order_task(&corpus, &task, &MiningSettings::default().with_seed(4), &LemmaVocabulary::default(), &Glossary::default())
        .unwrap()
        .unwrap();
    let mut bundle = MaterialsBundle::new("mr", 4);
    bundle.aspects.word_order.tasks.push(TreeTaskReport::new("object-verb", &res));
    bundle.collect_sentences(Some(&corpus), &[]);
    bundle.build_evaluation_table();
    bundle
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn site_shows_rule_and_its_examples() {
    let bundle = planted_bundle();
    let rule = bundle.aspects.word_order.tasks[0]
        .rules
        .iter()
        .find(|r| r.verdict == Verdict::Significant && r.label == "after")
        .unwrap();
    assert_eq!(rule.examples.len(), 5);

    let dir = tempfile::tempdir().unwrap();
    emit_site(&bundle, dir.path()).unwrap();
    let page = read(&dir.path().join("word-order.html"));
    assert!(page.contains(&rule.rendered));

    let rule_pages: Vec<String> = std::fs::read_dir(dir.path().join("rules"))
        .unwrap()
        .map(|e| read(&e.unwrap().path()))
        .filter(|html| html.contains(&rule.rendered))
        .collect();
    assert_eq!(rule_pages.len(), 1);
    for ex in &rule.examples {
        let sentence = &bundle.sentences[&ex.sentence_id];
        assert!(rule_pages[0].contains(&format!("id=\"{}\"", ex.sentence_id)));
        assert!(rule_pages[0].contains(sentence.translation.as_deref().unwrap()));
    }
    assert_eq!(rule_pages[0].matches("<div class=\"example\"").count(), 5);
}

#[test]
fn site_is_self_contained() {
    let dir = tempfile::tempdir().unwrap();
    emit_site(&planted_bundle(), dir.path()).unwrap();
    for entry in walk(dir.path()) {
        let text = read(&entry);
        assert!(!text.contains("http://") && !text.contains("https://") && !text.contains("//cdn"), "{entry:?}");
    }
    assert!(dir.path().join("style.css").exists());
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn json_round_trip_is_byte_stable() {
    let bundle = planted_bundle();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bundle.json");
    emit_json(&bundle, &path).unwrap();
    let first = read(&path);
    let back: MaterialsBundle = serde_json::from_str(&first).unwrap();
    assert_eq!(first, to_canonical_json(&back).unwrap());
}

#[test]
fn dangling_example_blocks_both_outputs() {
    let mut bundle = planted_bundle();
    bundle.aspects.word_order.tasks[0].rules[0].examples.push(Provenance {
        sentence_id: "wo-0".into(),
        dependent: 99,
        head: None,
    });
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(emit_json(&bundle, &dir.path().join("b.json")), Err(Error::UnresolvedExample { .. })));
    assert!(matches!(emit_site(&bundle, &dir.path().join("site")), Err(Error::UnresolvedExample { .. })));
    assert!(!dir.path().join("site/index.html").exists());
}

#[test]
fn html_is_escaped() {
    let mut bundle = MaterialsBundle::new("mr", 0);
    bundle.aspects.agreement.notices.push("<script>alert(1)</script>".into());
    let dir = tempfile::tempdir().unwrap();
    emit_site(&bundle, dir.path()).unwrap();
    let index = read(&dir.path().join("index.html"));
    assert!(!index.contains("<script>"));
    assert!(index.contains("&lt;script&gt;"));
}
