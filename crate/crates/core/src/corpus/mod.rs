//! Ingestion of treebanks, parallel data and lexical resources.
//!
//! Everything produced here is immutable once parsed and is shared by
//! reference across the mining tasks.

mod conllu;
mod parallel;
mod taxonomy;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use conllu::{apply_transliterations, parse_conllu, write_conllu};
pub use parallel::{pair_sentences, parse_alignments, ParallelPair};
pub use taxonomy::{parse_senses, parse_taxonomy, SenseAnnotations, TaxonomyResource};

/// One syntactic word of a parsed sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub form: String,
    pub lemma: Option<String>,
    pub upos: Option<String>,
    pub xpos: Option<String>,
    pub feats: BTreeMap<String, String>,
    /// Index of the governing token; `Some(0)` is the root, `None` is unannotated.
    pub head: Option<usize>,
    pub deprel: Option<String>,
    pub deps: Option<String>,
    pub misc: Option<String>,
    pub translit: Option<String>,
}

impl Token {
    /// A token with only a surface form; other columns absent.
    pub fn new(index: usize, form: impl Into<String>) -> Self {
        Token {
            index,
            form: form.into(),
            lemma: None,
            upos: None,
            xpos: None,
            feats: BTreeMap::new(),
            head: None,
            deprel: None,
            deps: None,
            misc: None,
            translit: None,
        }
    }

    pub fn feat(&self, attribute: &str) -> Option<&str> {
        self.feats.get(attribute).map(String::as_str)
    }

    pub fn upos(&self) -> &str {
        self.upos.as_deref().unwrap_or("_")
    }

    pub fn deprel(&self) -> &str {
        self.deprel.as_deref().unwrap_or("_")
    }

    /// Lemma, falling back to the lowercased form when no lemma is annotated.
    pub fn lemma_or_form(&self) -> String {
        match &self.lemma {
            Some(lemma) => lemma.clone(),
            None => self.form.to_lowercase(),
        }
    }

    /// The relation label without a language-specific subtype (`obl:tmod` → `obl`).
    pub fn base_deprel(&self) -> &str {
        let rel = self.deprel();
        rel.split(':').next().unwrap_or(rel)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub id: String,
    pub text: Option<String>,
    /// English rendering carried in a `# text_en` comment, when present.
    pub translation: Option<String>,
    pub tokens: Vec<Token>,
}

impl Sentence {
    /// Token by 1-based index.
    pub fn token(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Surface text: the `# text` comment if present, else forms joined by spaces.
    pub fn surface(&self) -> String {
        match &self.text {
            Some(text) => text.clone(),
            None => self
                .tokens
                .iter()
                .map(|t| t.form.as_str())
                .collect::<Vec<_>>()
                .join(" "),
        }
    }

    /// Romanized text built from token transliterations; `None` unless every
    /// token has one.
    pub fn transliteration(&self) -> Option<String> {
        let parts: Option<Vec<&str>> = self.tokens.iter().map(|t| t.translit.as_deref()).collect();
        parts.map(|p| p.join(" ")).filter(|s| !s.is_empty())
    }

    /// Dependents of the token at `head` (1-based), in linear order.
    pub fn dependents(&self, head: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == Some(head))
    }
}

/// Counts reported by ingestion.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub sentences: usize,
    pub tokens: usize,
    pub multiword_tokens_skipped: usize,
    pub empty_nodes_skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub language: String,
    pub sentences: Vec<Sentence>,
    pub stats: IngestStats,
}

impl Corpus {
    pub fn new(language: impl Into<String>, sentences: Vec<Sentence>) -> Self {
        let stats = IngestStats {
            sentences: sentences.len(),
            tokens: sentences.iter().map(Sentence::len).sum(),
            ..IngestStats::default()
        };
        Corpus {
            language: language.into(),
            sentences,
            stats,
        }
    }

    pub fn with_language(mut self, language: impl Into<String>) -> Self {
        self.language = language.into();
        self
    }

    pub fn sentence(&self, id: &str) -> Option<&Sentence> {
        self.sentences.iter().find(|s| s.id == id)
    }

    pub fn tokens(&self) -> impl Iterator<Item = (&Sentence, &Token)> {
        self.sentences
            .iter()
            .flat_map(|s| s.tokens.iter().map(move |t| (s, t)))
    }
}
