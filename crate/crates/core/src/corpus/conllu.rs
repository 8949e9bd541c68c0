use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{Corpus, IngestStats, Sentence, Token};
use crate::error::{Error, Result};

const COLUMNS: usize = 10;

/// Parse CoNLL-U text. Multiword ranges and empty nodes are counted in
/// [`IngestStats`] and dropped.
pub fn parse_conllu(text: &str) -> Result<Corpus> {
    let mut stats = IngestStats::default();
    let mut sentences = Vec::new();
    let mut seen_ids = BTreeSet::new();
    let mut builder = SentenceBuilder::default();

    for (offset, raw) in text.lines().enumerate() {
        let line_no = offset + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if let Some(sentence) = builder.finish(sentences.len() + 1)? {
                push_sentence(&mut sentences, &mut seen_ids, sentence, line_no)?;
            }
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            builder.comment(comment);
            continue;
        }
        let columns: Vec<&str> = line.split('\t').collect();
        if columns.len() != COLUMNS {
            return Err(Error::Conllu {
                line: line_no,
                message: format!("expected {COLUMNS} columns, found {}", columns.len()),
            });
        }
        let id = columns[0];
        if id.contains('-') {
            stats.multiword_tokens_skipped += 1;
            continue;
        }
        if id.contains('.') {
            stats.empty_nodes_skipped += 1;
            continue;
        }
        let token = parse_token(&columns, line_no)?;
        builder.push(token, line_no);
    }
    let end_line = text.lines().count() + 1;
    if let Some(sentence) = builder.finish(sentences.len() + 1)? {
        push_sentence(&mut sentences, &mut seen_ids, sentence, end_line)?;
    }

    stats.sentences = sentences.len();
    stats.tokens = sentences.iter().map(Sentence::len).sum();
    Ok(Corpus {
        language: String::from("und"),
        sentences,
        stats,
    })
}

fn push_sentence(
    sentences: &mut Vec<Sentence>,
    seen: &mut BTreeSet<String>,
    sentence: Sentence,
    line: usize,
) -> Result<()> {
    if !seen.insert(sentence.id.clone()) {
        return Err(Error::Conllu {
            line,
            message: format!("duplicate sentence id {}", sentence.id),
        });
    }
    sentences.push(sentence);
    Ok(())
}

fn optional(field: &str) -> Option<String> {
    (field != "_").then(|| field.to_string())
}

fn parse_token(columns: &[&str], line: usize) -> Result<Token> {
    let bad = |message: String| Error::Conllu { line, message };
    let index: usize = columns[0]
        .parse()
        .map_err(|_| bad(format!("unparsable token index {:?}", columns[0])))?;
    if index == 0 {
        return Err(bad("token index must be at least 1".into()));
    }

    let mut feats = BTreeMap::new();
    if columns[5] != "_" {
        for pair in columns[5].split('|') {
            let (name, value) = pair
                .split_once('=')
                .ok_or_else(|| bad(format!("malformed feature {pair:?}")))?;
            if feats.insert(name.to_string(), value.to_string()).is_some() {
                return Err(bad(format!("feature {name} repeated")));
            }
        }
    }

    let head = match columns[6] {
        "_" => None,
        h => Some(
            h.parse::<usize>()
                .map_err(|_| bad(format!("unparsable head {h:?}")))?,
        ),
    };

    let misc = optional(columns[9]);
    let translit = misc.as_deref().and_then(|m| {
        m.split('|')
            .find_map(|kv| kv.strip_prefix("Translit="))
            .map(str::to_string)
    });

    Ok(Token {
        index,
        form: columns[1].to_string(),
        lemma: optional(columns[2]),
        upos: optional(columns[3]),
        xpos: optional(columns[4]),
        feats,
        head,
        deprel: optional(columns[7]),
        deps: optional(columns[8]),
        misc,
        translit,
    })
}

#[derive(Default)]
struct SentenceBuilder {
    id: Option<String>,
    text: Option<String>,
    translation: Option<String>,
    tokens: Vec<(Token, usize)>,
}

impl SentenceBuilder {
    fn comment(&mut self, body: &str) {
        let Some((key, value)) = body.split_once('=') else {
            return;
        };
        let value = value.trim().to_string();
        match key.trim() {
            "sent_id" => self.id = Some(value),
            "text" => self.text = Some(value),
            "text_en" => self.translation = Some(value),
            _ => {}
        }
    }

    fn push(&mut self, token: Token, line: usize) {
        self.tokens.push((token, line));
    }

    /// Close the current sentence. Comment-only blocks produce nothing.
    fn finish(&mut self, ordinal: usize) -> Result<Option<Sentence>> {
        let builder = std::mem::take(self);
        if builder.tokens.is_empty() {
            return Ok(None);
        }
        let n = builder.tokens.len();
        let mut seen = BTreeSet::new();
        for (token, line) in &builder.tokens {
            if !seen.insert(token.index) {
                return Err(Error::DuplicateToken {
                    line: *line,
                    index: token.index,
                });
            }
        }
        for (position, (token, line)) in builder.tokens.iter().enumerate() {
            if token.index != position + 1 {
                return Err(Error::Conllu {
                    line: *line,
                    message: format!(
                        "token index {} out of sequence (expected {})",
                        token.index,
                        position + 1
                    ),
                });
            }
            if let Some(head) = token.head {
                if head > n {
                    return Err(Error::Conllu {
                        line: *line,
                        message: format!("head {head} does not resolve in a {n}-token sentence"),
                    });
                }
            }
        }
        Ok(Some(Sentence {
            id: builder.id.unwrap_or_else(|| format!("s{ordinal}")),
            text: builder.text,
            translation: builder.translation,
            tokens: builder.tokens.into_iter().map(|(t, _)| t).collect(),
        }))
    }
}

/// Serialize a corpus back to CoNLL-U. Sentence ids are always written, so
/// re-parsing reproduces the same corpus.
pub fn write_conllu(corpus: &Corpus) -> String {
    fn col(value: &Option<String>) -> &str {
        value.as_deref().unwrap_or("_")
    }
    let mut out = String::new();
    for sentence in &corpus.sentences {
        let _ = writeln!(out, "# sent_id = {}", sentence.id);
        if let Some(text) = &sentence.text {
            let _ = writeln!(out, "# text = {text}");
        }
        if let Some(translation) = &sentence.translation {
            let _ = writeln!(out, "# text_en = {translation}");
        }
        for t in &sentence.tokens {
            let feats = if t.feats.is_empty() {
                String::from("_")
            } else {
                t.feats
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join("|")
            };
            let head = t.head.map_or_else(|| String::from("_"), |h| h.to_string());
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                t.index,
                t.form,
                col(&t.lemma),
                col(&t.upos),
                col(&t.xpos),
                feats,
                head,
                col(&t.deprel),
                col(&t.deps),
                col(&t.misc),
            );
        }
        out.push('\n');
    }
    out
}

/// Apply a `sentence-id<TAB>token-index<TAB>romanization` sidecar. Token
/// indices are the 1-based CoNLL-U ids. Returns the number of rows applied.
pub fn apply_transliterations(corpus: &mut Corpus, text: &str) -> Result<usize> {
    let mut rows: BTreeMap<(String, usize), String> = BTreeMap::new();
    for (offset, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [sentence, index, roman] = fields[..] else {
            return Err(Error::Resource {
                file: "transliterations".into(),
                line: offset + 1,
                message: format!("expected 3 columns, found {}", fields.len()),
            });
        };
        let index: usize = index.trim().parse().map_err(|_| Error::Resource {
            file: "transliterations".into(),
            line: offset + 1,
            message: format!("unparsable token index {index:?}"),
        })?;
        rows.insert((sentence.to_string(), index), roman.to_string());
    }
    let mut applied = 0;
    for sentence in &mut corpus.sentences {
        for token in &mut sentence.tokens {
            if let Some(roman) = rows.get(&(sentence.id.clone(), token.index)) {
                token.translit = Some(roman.clone());
                applied += 1;
            }
        }
    }
    Ok(applied)
}
