use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Condition, GrammarRule, Verdict};
use crate::error::{Error, Result};

const DEFAULT_GLOSSARY: &str = include_str!("glossary.tsv");

/// Plain-English phrases for feature atoms such as `Case=Dat`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Glossary(BTreeMap<String, String>);

impl Default for Glossary {
    fn default() -> Self {
        Glossary::parse(DEFAULT_GLOSSARY).expect("shipped glossary parses")
    }
}

impl Glossary {
    pub fn empty() -> Self {
        Glossary(BTreeMap::new())
    }

    /// Parse `feature-atom<TAB>phrase` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (offset, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (atom, phrase) = line.split_once('\t').ok_or_else(|| Error::Resource {
                file: "glossary".into(),
                line: offset + 1,
                message: "expected feature-atom<TAB>phrase".into(),
            })?;
            map.insert(atom.trim().to_string(), phrase.trim().to_string());
        }
        Ok(Glossary(map))
    }

    /// Entries of `other` override entries here.
    pub fn merged(mut self, other: Glossary) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn get(&self, atom: &str) -> Option<&str> {
        self.0.get(atom).map(String::as_str)
    }

    /// Phrase for an atom, or the atom itself.
    pub fn phrase(&self, atom: &str) -> String {
        self.get(atom).map_or_else(|| atom.to_string(), str::to_string)
    }
}

/// What a rule's label means, for templating.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleTask {
    WordOrder,
    Agreement { attribute: String },
    Suffix,
    Lexical,
}

/// Names the two roles of a rule ("the object", "the verb") and its task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleContext {
    pub dependent: String,
    pub head: String,
    pub task: RuleTask,
}

impl RuleContext {
    pub fn word_order(dependent: &str, head: &str) -> Self {
        RuleContext {
            dependent: format!("the {dependent}"),
            head: format!("the {head}"),
            task: RuleTask::WordOrder,
        }
    }

    pub fn agreement(attribute: &str) -> Self {
        RuleContext {
            dependent: "the dependent".into(),
            head: "its head".into(),
            task: RuleTask::Agreement {
                attribute: attribute.into(),
            },
        }
    }

    pub fn suffix(pos_phrase: &str) -> Self {
        RuleContext {
            dependent: format!("the {pos_phrase}"),
            head: "its head".into(),
            task: RuleTask::Suffix,
        }
    }

    /// Choosing among translations of the English word `l1`.
    pub fn lexical(l1: &str) -> Self {
        RuleContext {
            dependent: format!("\u{201c}{l1}\u{201d}"),
            head: "its translation".into(),
            task: RuleTask::Lexical,
        }
    }

    fn role(&self, prefix: &str) -> &str {
        match prefix {
            "head" => &self.head,
            _ => &self.dependent,
        }
    }

    /// What the label asserts, e.g. "the object comes after the verb".
    pub fn label_phrase(&self, label: &str, glossary: &Glossary) -> String {
        match &self.task {
            RuleTask::WordOrder => format!("{} comes {label} {}", self.dependent, self.head),
            RuleTask::Agreement { attribute } => {
                let attr = glossary
                    .get(attribute)
                    .map_or_else(|| attribute.to_lowercase(), str::to_string);
                if label == "1" {
                    format!("{} agrees with {} in {attr}", self.dependent, self.head)
                } else {
                    format!("{} need not agree with {} in {attr}", self.dependent, self.head)
                }
            }
            RuleTask::Suffix => format!("{} takes the suffix -{label}", self.dependent),
            RuleTask::Lexical => format!("use \u{201c}{label}\u{201d}"),
        }
    }
}

/// Describe one feature atom in words.
pub fn describe_atom(atom: &str, ctx: &RuleContext, glossary: &Glossary) -> String {
    let (name, value) = atom.split_once('=').unwrap_or((atom, ""));
    if name == "deprel" {
        return format!("the relation is {}", glossary.phrase(&format!("deprel={value}")));
    }
    if let Some(flag) = name.strip_prefix("sent:") {
        return match flag {
            "question" => "the sentence is a question".into(),
            "int_pron" => "the sentence contains an interrogative pronoun".into(),
            other => format!("the sentence has {other}"),
        };
    }
    let Some((prefix, rest)) = name.split_once(':') else {
        return glossary.phrase(atom);
    };
    let role = match prefix {
        "l1" => "the English word",
        "l2" => "the translation",
        p => ctx.role(p),
    };
    if let Some(word) = rest.strip_prefix("ctx:") {
        return format!("\u{201c}{word}\u{201d} occurs near {role}");
    }
    if let Some(sense) = rest.strip_prefix("sense:") {
        return format!("{role} has the sense {sense}");
    }
    if let Some(child) = rest.strip_prefix("child:") {
        let (rel, upos) = child.split_once(':').unwrap_or((child, "_"));
        return format!(
            "{role} has another dependent that is {} ({})",
            glossary.phrase(&format!("upos={upos}")),
            glossary.phrase(&format!("deprel={rel}")),
        );
    }
    match rest {
        "upos" => format!("{role} is {}", glossary.phrase(&format!("upos={value}"))),
        "lemma" if value == "OOV" => format!("{role} is an infrequent word"),
        "lemma" => format!("{role} is the word \u{201c}{value}\u{201d}"),
        "prev_upos" => format!(
            "the word before {role} is {}",
            glossary.phrase(&format!("upos={value}"))
        ),
        "next_upos" => format!(
            "the word after {role} is {}",
            glossary.phrase(&format!("upos={value}"))
        ),
        "prev_lemma" => format!("the word before {role} is \u{201c}{value}\u{201d}"),
        "next_lemma" => format!("the word after {role} is \u{201c}{value}\u{201d}"),
        "deprel" => format!("{role} is attached as {}", glossary.phrase(&format!("deprel={value}"))),
        "head_lemma" => format!("{role} depends on \u{201c}{value}\u{201d}"),
        "head_upos" => format!(
            "the head of {role} is {}",
            glossary.phrase(&format!("upos={value}"))
        ),
        attr => match attr.strip_prefix("head_") {
            Some(head_attr) => format!(
                "the head of {role} is {}",
                glossary.phrase(&format!("{head_attr}={value}"))
            ),
            None => format!("{role} is {}", glossary.phrase(&format!("{attr}={value}"))),
        },
    }
}

fn describe_condition(cond: &Condition, ctx: &RuleContext, glossary: &Glossary) -> String {
    let text = describe_atom(&cond.atom, ctx, glossary);
    if cond.present {
        text
    } else {
        negate(&text)
    }
}

fn negate(text: &str) -> String {
    for (from, to) in [(" is ", " is not "), (" has ", " does not have "), (" contains ", " does not contain ")] {
        if let Some(pos) = text.find(from) {
            return format!("{}{}{}", &text[..pos], to, &text[pos + from.len()..]);
        }
    }
    format!("not ({text})")
}

/// "If <conditions>, then <label> (p% of n cases). Exceptions: c."
pub fn render_rule(rule: &GrammarRule, ctx: &RuleContext, glossary: &Glossary) -> String {
    let n: usize = rule.support.values().sum();
    let hits = rule.support.get(&rule.label).copied().unwrap_or(0);
    let pct = if n == 0 { 0.0 } else { 100.0 * hits as f64 / n as f64 };
    let label = ctx.label_phrase(&rule.label, glossary);
    let stats = format!("({pct:.0}% of {n} cases). Exceptions: {}.", rule.exception_count);
    if rule.conditions.is_empty() || rule.verdict == Verdict::Default {
        return format!("In general, {label} {stats}");
    }
    let conditions: Vec<String> = rule
        .conditions
        .iter()
        .map(|c| describe_condition(c, ctx, glossary))
        .collect();
    format!("If {}, then {label} {stats}", conditions.join(" and "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_glossary_covers_common_atoms() {
        let g = Glossary::default();
        assert_eq!(g.get("Case=Dat"), Some("dative case"));
        assert_eq!(g.get("PronType=Int"), Some("interrogative pronoun"));
        assert_eq!(g.get("Gender=Neut"), Some("neuter"));
    }

    #[test]
    fn user_glossary_overrides() {
        let g = Glossary::default().merged(Glossary::parse("Case=Dat\tto-case\n").unwrap());
        assert_eq!(g.phrase("Case=Dat"), "to-case");
    }

    #[test]
    fn malformed_glossary_line() {
        assert!(Glossary::parse("Case=Dat dative\n").is_err());
    }

    #[test]
    fn interrogative_condition_reads_naturally() {
        let ctx = RuleContext::word_order("object", "verb");
        let g = Glossary::default();
        let pos = Condition { atom: "dep:PronType=Int".into(), present: true };
        let neg = Condition { atom: "dep:PronType=Int".into(), present: false };
        assert_eq!(describe_condition(&pos, &ctx, &g), "the object is interrogative pronoun");
        assert_eq!(describe_condition(&neg, &ctx, &g), "the object is not interrogative pronoun");
        assert_eq!(ctx.label_phrase("after", &g), "the object comes after the verb");
    }

    #[test]
    fn other_atoms() {
        let ctx = RuleContext::suffix("noun");
        let g = Glossary::default();
        assert_eq!(describe_atom("dep:Case=Dat", &ctx, &g), "the noun is dative case");
        assert_eq!(describe_atom("deprel=obj", &ctx, &g), "the relation is object");
        assert_eq!(describe_atom("sent:question=true", &ctx, &g), "the sentence is a question");
        assert_eq!(describe_atom("head:upos=VERB", &ctx, &g), "its head is a verb");
        assert_eq!(ctx.label_phrase("laa", &g), "the noun takes the suffix -laa");
        let lex = RuleContext::lexical("rice");
        assert_eq!(describe_atom("l1:ctx:raw=true", &lex, &g), "\u{201c}raw\u{201d} occurs near the English word");
        assert_eq!(lex.label_phrase("tandul", &g), "use \u{201c}tandul\u{201d}");
    }
}
