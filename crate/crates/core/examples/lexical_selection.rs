//! Find English words with several competing translations and learn when
//! each translation is used.

use teachgram::ruleminer::Glossary;
use teachgram::synth::planted_parallel;
use teachgram::task::MiningSettings;
use teachgram::vocabulary::{
    aggregate_lexical_evaluation, aggregate_translations, filter_divergent_pairs, fit_all_lexical_selections,
    l1_lemma_vocabulary, FilterConfig, LexicalTemplate, LexselOutcome, SenseContext,
};

fn main() -> teachgram::Result<()> {
    let fixture = planted_parallel(600, 0.4, 5);
    let pairs = fixture.pairs()?;
    let taxonomy = fixture.taxonomy()?;
    let senses = fixture.senses(&taxonomy)?;

    let table = aggregate_translations(&pairs);
    let divergent = filter_divergent_pairs(&table, &pairs, &FilterConfig::default());
    for d in &divergent {
        let c: Vec<String> = d.candidates.iter().map(|c| format!("{} ({})", c.l2, c.count)).collect();
        println!("{}: {}  entropy {:.2}", d.l1, c.join(", "), d.entropy);
    }

    let template = LexicalTemplate::default();
    let lemmas = l1_lemma_vocabulary(&pairs, template.max_lemmas);
    let selections = fit_all_lexical_selections(
        &divergent,
        &table,
        &pairs,
        &template,
        &lemmas,
        Some(SenseContext { senses: &senses, taxonomy: &taxonomy }),
        &MiningSettings::default().with_seed(5),
        &Glossary::default(),
    )?;
    for sel in &selections {
        if let LexselOutcome::Fitted(res) = &sel.outcome {
            for rule in &res.rules {
                println!("  {}", rule.rendered);
            }
        }
    }
    if let Some(e) = aggregate_lexical_evaluation(&selections) {
        println!("pooled accuracy {:.2}% over {} words, baseline {:.2}%", e.model_accuracy * 100.0, e.count, e.baseline_accuracy * 100.0);
    }
    Ok(())
}
