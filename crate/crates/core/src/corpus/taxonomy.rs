use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A WordNet-style sense hierarchy: hypernym edges, sense members and
/// antonym pairs, keyed by sense ids such as `bank.n.02`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyResource {
    pub hypernyms: BTreeMap<String, BTreeSet<String>>,
    pub sense_lemmas: BTreeMap<String, BTreeSet<String>>,
    /// Unordered pairs, stored with the smaller id first.
    pub antonyms: BTreeSet<(String, String)>,
}

impl TaxonomyResource {
    /// Transitive hypernym closure of a sense, excluding the sense itself.
    pub fn ancestors(&self, sense: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&str> = vec![sense];
        while let Some(current) = stack.pop() {
            if let Some(parents) = self.hypernyms.get(current) {
                for parent in parents {
                    if seen.insert(parent.clone()) {
                        stack.push(parent);
                    }
                }
            }
        }
        seen
    }

    /// Senses listing `lemma` as a member.
    pub fn senses_of<'a>(&'a self, lemma: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.sense_lemmas
            .iter()
            .filter(move |(_, lemmas)| lemmas.contains(lemma))
            .map(|(sense, _)| sense.as_str())
    }

    pub fn antonyms_of<'a>(&'a self, sense: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.antonyms.iter().filter_map(move |(a, b)| {
            if a == sense {
                Some(b.as_str())
            } else if b == sense {
                Some(a.as_str())
            } else {
                None
            }
        })
    }

    pub fn contains(&self, sense: &str) -> bool {
        self.sense_lemmas.contains_key(sense)
    }

    fn find_cycle(&self) -> Option<Vec<String>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
        for start in self.hypernyms.keys() {
            if marks.contains_key(start.as_str()) {
                continue;
            }
            // (node, next parent position) frames of an explicit DFS
            let mut path: Vec<(&str, Vec<&str>, usize)> = Vec::new();
            let parents = |n: &str| -> Vec<&str> {
                self.hypernyms
                    .get(n)
                    .map(|p| p.iter().map(String::as_str).collect())
                    .unwrap_or_default()
            };
            marks.insert(start, Mark::Open);
            path.push((start, parents(start), 0));
            while let Some((node, next, pos)) = path.last_mut() {
                if *pos == next.len() {
                    marks.insert(node, Mark::Done);
                    path.pop();
                    continue;
                }
                let child = next[*pos];
                *pos += 1;
                match marks.get(child) {
                    Some(Mark::Open) => {
                        let from = path.iter().position(|(n, _, _)| *n == child).unwrap_or(0);
                        let mut cycle: Vec<String> =
                            path[from..].iter().map(|(n, _, _)| n.to_string()).collect();
                        cycle.push(child.to_string());
                        return Some(cycle);
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(child, Mark::Open);
                        path.push((child, parents(child), 0));
                    }
                }
            }
        }
        None
    }
}

fn tsv_rows<'a>(
    text: &'a str,
    file: &'a str,
    columns: usize,
) -> impl Iterator<Item = Result<(usize, Vec<&'a str>)>> + 'a {
    text.lines().enumerate().filter_map(move |(offset, line)| {
        if line.trim().is_empty() || line.starts_with('#') {
            return None;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != columns {
            return Some(Err(Error::Resource {
                file: file.to_string(),
                line: offset + 1,
                message: format!("expected {columns} columns, found {}", fields.len()),
            }));
        }
        Some(Ok((offset + 1, fields)))
    })
}

/// Load a taxonomy from `hypernyms.tsv` (child, parent), `senses.tsv`
/// (sense, lemma) and optional `antonyms.tsv` (sense, sense).
pub fn parse_taxonomy(
    hypernyms: &str,
    senses: &str,
    antonyms: Option<&str>,
) -> Result<TaxonomyResource> {
    let mut taxonomy = TaxonomyResource::default();
    for row in tsv_rows(senses, "senses.tsv", 2) {
        let (_, fields) = row?;
        taxonomy
            .sense_lemmas
            .entry(fields[0].to_string())
            .or_default()
            .insert(fields[1].to_string());
    }
    for row in tsv_rows(hypernyms, "hypernyms.tsv", 2) {
        let (_, fields) = row?;
        for sense in &fields {
            if !taxonomy.contains(sense) {
                return Err(Error::DanglingSense(sense.to_string()));
            }
        }
        taxonomy
            .hypernyms
            .entry(fields[0].to_string())
            .or_default()
            .insert(fields[1].to_string());
    }
    if let Some(antonyms) = antonyms {
        for row in tsv_rows(antonyms, "antonyms.tsv", 2) {
            let (_, fields) = row?;
            for sense in &fields {
                if !taxonomy.contains(sense) {
                    return Err(Error::DanglingSense(sense.to_string()));
                }
            }
            let (a, b) = if fields[0] <= fields[1] {
                (fields[0], fields[1])
            } else {
                (fields[1], fields[0])
            };
            taxonomy.antonyms.insert((a.to_string(), b.to_string()));
        }
    }
    if let Some(cycle) = taxonomy.find_cycle() {
        return Err(Error::TaxonomyCycle(cycle));
    }
    Ok(taxonomy)
}

/// Sense annotations keyed by (pair id, 0-based source token index).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseAnnotations {
    pub senses: BTreeMap<(String, usize), String>,
    /// Human-readable notes for rows dropped because the sense is unknown.
    pub skipped: Vec<String>,
}

impl SenseAnnotations {
    pub fn get(&self, pair: &str, token: usize) -> Option<&str> {
        self.senses
            .get(&(pair.to_string(), token))
            .map(String::as_str)
    }
}

/// Parse `pair-id<TAB>token-index<TAB>sense-id` rows. Rows naming a sense
/// missing from the taxonomy are skipped and reported.
pub fn parse_senses(text: &str, taxonomy: &TaxonomyResource) -> Result<SenseAnnotations> {
    let mut out = SenseAnnotations::default();
    for row in tsv_rows(text, "senses", 3) {
        let (line, fields) = row?;
        let index: usize = fields[1].parse().map_err(|_| Error::Resource {
            file: "senses".into(),
            line,
            message: format!("unparsable token index {:?}", fields[1]),
        })?;
        if !taxonomy.contains(fields[2]) {
            out.skipped
                .push(format!("line {line}: unknown sense {}", fields[2]));
            continue;
        }
        out.senses
            .insert((fields[0].to_string(), index), fields[2].to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SENSES: &str = "banana.n.01\tbanana\nfruit.n.01\tfruit\nfood.n.01\tfood\nbank.n.02\tbank\n";

    #[test]
    fn ancestors_are_transitive() {
        let t = parse_taxonomy("banana.n.01\tfruit.n.01\nfruit.n.01\tfood.n.01\n", SENSES, None).unwrap();
        let anc = t.ancestors("banana.n.01");
        assert!(anc.contains("fruit.n.01") && anc.contains("food.n.01"));
        assert!(!anc.contains("banana.n.01"));
    }

    #[test]
    fn empty_taxonomy_has_no_ancestors() {
        let t = parse_taxonomy("", "", None).unwrap();
        assert!(t.ancestors("banana.n.01").is_empty());
    }

    #[test]
    fn cycle_is_reported() {
        let err = parse_taxonomy(
            "banana.n.01\tfruit.n.01\nfruit.n.01\tfood.n.01\nfood.n.01\tbanana.n.01\n",
            SENSES,
            None,
        )
        .unwrap_err();
        match err {
            Error::TaxonomyCycle(cycle) => {
                assert_eq!(cycle.first(), cycle.last());
                assert_eq!(cycle.len(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_edge_rejected() {
        let err = parse_taxonomy("banana.n.01\tplant.n.02\n", SENSES, None).unwrap_err();
        assert!(matches!(err, Error::DanglingSense(s) if s == "plant.n.02"));
    }

    #[test]
    fn sense_rows_and_unknown_senses() {
        let t = parse_taxonomy("", SENSES, None).unwrap();
        let ann = parse_senses("pair7\t3\tbank.n.02\npair8\t0\tzzz.n.09\n", &t).unwrap();
        assert_eq!(ann.get("pair7", 3), Some("bank.n.02"));
        assert_eq!(ann.senses.len(), 1);
        assert_eq!(ann.skipped.len(), 1);
    }

    #[test]
    fn antonyms_are_symmetric() {
        let senses = "hot.a.01\thot\ncold.a.01\tcold\n";
        let t = parse_taxonomy("", senses, Some("hot.a.01\tcold.a.01\n")).unwrap();
        assert_eq!(t.antonyms_of("cold.a.01").collect::<Vec<_>>(), vec!["hot.a.01"]);
        assert_eq!(t.antonyms_of("hot.a.01").collect::<Vec<_>>(), vec!["cold.a.01"]);
    }
}
