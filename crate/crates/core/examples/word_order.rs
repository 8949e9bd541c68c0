//! Recover a planted word-order rule: objects follow the verb only when
//! they are interrogative pronouns.

use teachgram::corpus::parse_conllu;
use teachgram::featurize::LemmaVocabulary;
use teachgram::ruleminer::{Glossary, Verdict};
use teachgram::synth::planted_word_order;
use teachgram::task::MiningSettings;
use teachgram::wordorder::{run_order_task, OrderTask};

fn main() -> teachgram::Result<()> {
    let corpus = parse_conllu(&planted_word_order(2000, 0.1, 7))?;
    let task = OrderTask::new("object-verb", "object", "verb", "obj", &["VERB"]);
    let settings = MiningSettings::default().with_seed(7);
    let lemmas = LemmaVocabulary::from_corpus(&corpus, 100);

    let Some(res) = run_order_task(&corpus, &task, &settings, &lemmas, &Glossary::default())? else {
        println!("too few object arcs");
        return Ok(());
    };
    for rule in res.rules.iter().filter(|r| r.verdict != Verdict::Inconclusive) {
        println!("[{:?}] {}", rule.verdict, rule.rendered);
        for ex in &rule.examples {
            let s = corpus.sentence(&ex.sentence_id).expect("example sentence");
            println!("    {}  ({})", s.surface(), s.translation.as_deref().unwrap_or(""));
        }
    }
    let e = &res.evaluation;
    println!(
        "test accuracy {:.4} vs baseline {:.4} (always \"{}\"), {} rules",
        e.model_accuracy, e.baseline_accuracy, e.baseline_label, e.count
    );
    Ok(())
}
