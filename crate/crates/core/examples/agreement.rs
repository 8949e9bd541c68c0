//! Gender agreement as a binary task. Adjectives agree with their noun in
//! 95% of cases, objects with their verb only by chance; only the first
//! becomes a rule.

use teachgram::agreement::{run_agreement_task, AgreementTask};
use teachgram::corpus::parse_conllu;
use teachgram::featurize::LemmaVocabulary;
use teachgram::ruleminer::Glossary;
use teachgram::synth::planted_agreement;
use teachgram::task::MiningSettings;

fn main() -> teachgram::Result<()> {
    let corpus = parse_conllu(&planted_agreement(600, 0.95, 0.5, 3))?;
    let task = AgreementTask::new("Gender");
    let settings = MiningSettings::default().with_seed(3);
    let res = run_agreement_task(&corpus, &task, &settings, &LemmaVocabulary::default(), &Glossary::default())?
        .expect("enough pairs");

    for rule in &res.rules {
        let support: Vec<String> = rule.support.iter().map(|(l, n)| format!("{l}:{n}")).collect();
        println!(
            "{:<12} p={:<10.3e} [{}] {}",
            format!("{:?}", rule.verdict),
            rule.p_value,
            support.join(" "),
            rule.rendered
        );
    }
    println!("{} rule(s); test accuracy {:.3}", res.rule_count, res.evaluation.model_accuracy);
    Ok(())
}
