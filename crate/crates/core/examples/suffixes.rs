//! Split word forms against their lemmas, build a noun suffix inventory and
//! learn which features select each suffix.

use teachgram::corpus::parse_conllu;
use teachgram::featurize::LemmaVocabulary;
use teachgram::ruleminer::Glossary;
use teachgram::suffixes::{build_inventory, decompose, run_suffix_task, Segmentation, SuffixOutcome, SANDHI_NOTE};
use teachgram::synth::treebank;
use teachgram::task::MiningSettings;

fn main() -> teachgram::Result<()> {
    for (form, lemma) in [("deshaala", "desh"), ("ramne", "ram"), ("went", "go")] {
        match decompose(form, lemma) {
            Segmentation::Decomposed(d) => println!("{form} / {lemma}: {} + {}", d.stem, d.suffix),
            Segmentation::Suppletive => println!("{form} / {lemma}: suppletive"),
        }
    }
    println!("\n{SANDHI_NOTE}\n");

    let corpus = parse_conllu(&treebank(1500, 11))?;
    let inventory = build_inventory(&corpus, "NOUN", 10);
    for (suffix, count) in &inventory.counts {
        println!("-{suffix:<6} {count}");
    }
    let settings = MiningSettings::default().with_seed(11);
    match run_suffix_task(&corpus, &inventory, &settings, &LemmaVocabulary::default(), &Glossary::default())? {
        SuffixOutcome::Fitted(res) => {
            for rule in &res.rules {
                println!("{}", rule.rendered);
            }
            println!("test accuracy {:.3} vs baseline {:.3}", res.evaluation.model_accuracy, res.evaluation.baseline_accuracy);
        }
        SuffixOutcome::Skipped(why) => println!("skipped: {why}"),
    }
    Ok(())
}
