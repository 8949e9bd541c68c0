//! Frequency tables of morphological attributes with example word forms.

use teachgram::corpus::parse_conllu;
use teachgram::geninfo::{summarize_morphology, DEFAULT_MIN_TOTAL};
use teachgram::synth::treebank;

fn main() -> teachgram::Result<()> {
    let corpus = parse_conllu(&treebank(500, 2))?;
    println!("{} sentences, {} tokens", corpus.stats.sentences, corpus.stats.tokens);
    for summary in summarize_morphology(&corpus, 3, DEFAULT_MIN_TOTAL) {
        println!("\n{} ({} tokens)", summary.attribute, summary.total);
        for v in &summary.values {
            let forms: Vec<&str> = v.examples.iter().map(|f| f.form.as_str()).collect();
            println!("  {:<8} {:>5}  {}", v.value, v.count, forms.join(", "));
        }
    }
    Ok(())
}
