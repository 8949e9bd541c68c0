use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Corpus, Sentence};
use crate::error::{Error, Result};

/// A translation pair with word alignments. Alignment indices are 0-based
/// positions into `source.tokens` and `target.tokens`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelPair {
    pub id: String,
    pub source: Sentence,
    pub target: Sentence,
    pub alignment: BTreeSet<(usize, usize)>,
}

impl ParallelPair {
    /// Target indices linked to a source position.
    pub fn targets_of(&self, source: usize) -> impl Iterator<Item = usize> + '_ {
        self.alignment
            .range((source, 0)..=(source, usize::MAX))
            .map(|&(_, t)| t)
    }
}

/// Zip two sentence-aligned corpora into unaligned pairs with ids `pair0`,
/// `pair1`, ... in file order.
pub fn pair_sentences(source: &Corpus, target: &Corpus) -> Result<Vec<ParallelPair>> {
    if source.sentences.len() != target.sentences.len() {
        return Err(Error::AlignmentCount {
            found: target.sentences.len(),
            expected: source.sentences.len(),
        });
    }
    Ok(source
        .sentences
        .iter()
        .zip(&target.sentences)
        .enumerate()
        .map(|(i, (s, t))| ParallelPair {
            id: format!("pair{i}"),
            source: s.clone(),
            target: t.clone(),
            alignment: BTreeSet::new(),
        })
        .collect())
}

/// Attach Pharaoh-format alignment lines (`i-j i-j ...`), one per pair.
pub fn parse_alignments(text: &str, mut pairs: Vec<ParallelPair>) -> Result<Vec<ParallelPair>> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() != pairs.len() {
        return Err(Error::AlignmentCount {
            found: lines.len(),
            expected: pairs.len(),
        });
    }
    for (line, pair) in lines.into_iter().zip(pairs.iter_mut()) {
        let bad = |message: String| Error::Alignment {
            pair: pair.id.clone(),
            message,
        };
        let mut links = BTreeSet::new();
        for link in line.split_whitespace() {
            let (s, t) = link
                .split_once('-')
                .ok_or_else(|| bad(format!("malformed link {link:?}")))?;
            let s: usize = s.parse().map_err(|_| bad(format!("malformed link {link:?}")))?;
            let t: usize = t.parse().map_err(|_| bad(format!("malformed link {link:?}")))?;
            if s >= pair.source.len() {
                return Err(bad(format!(
                    "source index {s} out of bounds for {} tokens",
                    pair.source.len()
                )));
            }
            if t >= pair.target.len() {
                return Err(bad(format!(
                    "target index {t} out of bounds for {} tokens",
                    pair.target.len()
                )));
            }
            links.insert((s, t));
        }
        pair.alignment = links;
    }
    Ok(pairs)
}
