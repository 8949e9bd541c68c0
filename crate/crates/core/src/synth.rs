//! Seeded synthetic corpora with planted regularities, for examples, tests
//! and demos. Word forms are romanized Marathi-like inventions; the English
//! lines are rough glosses.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{
    pair_sentences, parse_alignments, parse_conllu, parse_senses, parse_taxonomy, ParallelPair, SenseAnnotations,
    TaxonomyResource,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Tok {
    form: String,
    lemma: String,
    upos: &'static str,
    feats: Vec<(&'static str, String)>,
    head: usize,
    deprel: &'static str,
}

impl Tok {
    fn new(form: impl Into<String>, lemma: &str, upos: &'static str) -> Self {
        Tok {
            form: form.into(),
            lemma: lemma.into(),
            upos,
            feats: Vec::new(),
            head: 0,
            deprel: "root",
        }
    }

    fn feat(mut self, attr: &'static str, value: &str) -> Self {
        self.feats.push((attr, value.to_string()));
        self
    }
}

/// Tokens in surface order; heads are filled in by position afterwards.
#[derive(Default)]
struct Builder {
    toks: Vec<Tok>,
}

impl Builder {
    fn push(&mut self, tok: Tok) -> usize {
        self.toks.push(tok);
        self.toks.len()
    }

    fn attach(&mut self, dep: usize, head: usize, rel: &'static str) {
        self.toks[dep - 1].head = head;
        self.toks[dep - 1].deprel = rel;
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for t in &self.toks {
            if !out.is_empty() && t.upos != "PUNCT" {
                out.push(' ');
            }
            out.push_str(&t.form);
        }
        out
    }

    fn write(&self, out: &mut String, id: &str, english: Option<&str>) {
        let _ = writeln!(out, "# sent_id = {id}");
        let _ = writeln!(out, "# text = {}", self.text());
        if let Some(en) = english {
            let _ = writeln!(out, "# text_en = {en}");
        }
        for (i, t) in self.toks.iter().enumerate() {
            let mut feats: Vec<String> = t.feats.iter().map(|(a, v)| format!("{a}={v}")).collect();
            feats.sort();
            let feats = if feats.is_empty() { "_".to_string() } else { feats.join("|") };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t_\t{}\t{}\t{}\t_\t_",
                i + 1,
                t.form,
                t.lemma,
                t.upos,
                feats,
                t.head,
                t.deprel
            );
        }
        out.push('\n');
    }
}

fn capitalized(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

/// Pick `round(n * share)` distinct indices.
fn planted_set(n: usize, share: f64, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let k = ((n as f64) * share).round() as usize;
    let mut flags: Vec<bool> = (0..n).map(|i| i < k).collect();
    flags.shuffle(rng);
    flags
}

struct Noun {
    lemma: &'static str,
    gender: &'static str,
    english: &'static str,
    animate: bool,
}

const NOUNS: &[Noun] = &[
    Noun { lemma: "ram", gender: "Masc", english: "Ram", animate: true },
    Noun { lemma: "sita", gender: "Fem", english: "Sita", animate: true },
    Noun { lemma: "mulga", gender: "Masc", english: "the boy", animate: true },
    Noun { lemma: "mulgi", gender: "Fem", english: "the girl", animate: true },
    Noun { lemma: "kutra", gender: "Masc", english: "the dog", animate: true },
    Noun { lemma: "manjar", gender: "Fem", english: "the cat", animate: true },
    Noun { lemma: "pustak", gender: "Neut", english: "the book", animate: false },
    Noun { lemma: "bhakri", gender: "Fem", english: "the bread", animate: false },
    Noun { lemma: "ghar", gender: "Neut", english: "the house", animate: false },
    Noun { lemma: "aamba", gender: "Masc", english: "the mango", animate: false },
    Noun { lemma: "patra", gender: "Neut", english: "the letter", animate: false },
    Noun { lemma: "khurchi", gender: "Fem", english: "the chair", animate: false },
];

const PLACES: &[(&str, &str)] = &[("gaav", "the village"), ("shala", "the school"), ("bazaar", "the market")];

const VERBS: &[(&str, &str, &str)] = &[
    ("khaa", "eats", "ate"),
    ("vach", "reads", "read"),
    ("bagh", "sees", "saw"),
    ("aan", "brings", "brought"),
    ("shodh", "finds", "found"),
];

const ADJS: &[(&str, &str)] = &[("chang", "good"), ("moth", "big"), ("lahan", "small"), ("nav", "new")];

const INT_OBJECTS: &[(&str, &str)] = &[
    ("kay", "what"),
    ("kon", "whom"),
    ("konala", "whom"),
    ("kashala", "what for"),
    ("kiti", "how much"),
    ("kuthla", "which one"),
];

const GENDERS: [&str; 3] = ["Masc", "Fem", "Neut"];

fn gender_ending(gender: &str) -> &'static str {
    match gender {
        "Masc" => "a",
        "Fem" => "i",
        _ => "e",
    }
}

fn adjective(lemma: &str, gender: &str) -> Tok {
    Tok::new(format!("{lemma}{}", gender_ending(gender)), lemma, "ADJ").feat("Gender", gender)
}

fn other_gender(gender: &str, rng: &mut ChaCha8Rng) -> &'static str {
    let others: Vec<&str> = GENDERS.iter().copied().filter(|g| *g != gender).collect();
    others.choose(rng).copied().unwrap_or("Neut")
}

/// CoNLL-U text of `n` SOV sentences in which the object follows the verb
/// exactly when it is an interrogative pronoun (`int_share` of sentences).
/// Another `int_share` of sentences are questions with an interrogative
/// subject, so "is a question" alone does not give the order away.
pub fn planted_word_order(n: usize, int_share: f64, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let int_object = planted_set(n, int_share, &mut rng);
    let mut int_subject = planted_set(n, int_share / (1.0 - int_share).max(f64::EPSILON), &mut rng);
    for (s, o) in int_subject.iter_mut().zip(&int_object) {
        *s &= !o;
    }
    let mut out = String::new();
    for i in 0..n {
        let mut b = Builder::default();
        let (verb, en_verb, _) = *VERBS.choose(&mut rng).expect("verbs");
        let question = int_object[i] || int_subject[i];

        let (subj, en_subj) = if int_subject[i] {
            (Tok::new("kon", "kon", "PRON").feat("PronType", "Int").feat("Case", "Nom"), "who".to_string())
        } else if rng.random_bool(0.3) {
            let (form, g, en) = *[("to", "Masc", "he"), ("ti", "Fem", "she")].choose(&mut rng).expect("pronouns");
            (Tok::new(form, form, "PRON").feat("PronType", "Prs").feat("Gender", g).feat("Case", "Nom"), en.to_string())
        } else {
            let n = NOUNS.iter().filter(|n| n.animate).collect::<Vec<_>>();
            let n = n.choose(&mut rng).expect("nouns");
            (Tok::new(n.lemma, n.lemma, "NOUN").feat("Gender", n.gender).feat("Case", "Nom"), capitalized(n.english))
        };

        let (obj, en_obj) = if int_object[i] {
            let (lemma, en) = *INT_OBJECTS.choose(&mut rng).expect("pronouns");
            (Tok::new(lemma, lemma, "PRON").feat("PronType", "Int").feat("Case", "Acc"), en.to_string())
        } else if rng.random_bool(0.4) {
            let (form, lemma, kind, en) = *[("tyala", "to", "Prs", "him"), ("tila", "ti", "Prs", "her"), ("he", "he", "Dem", "this"), ("te", "te", "Dem", "that")]
                .choose(&mut rng)
                .expect("pronouns");
            (Tok::new(form, lemma, "PRON").feat("PronType", kind).feat("Case", "Acc"), en.to_string())
        } else {
            let n = NOUNS.choose(&mut rng).expect("nouns");
            (Tok::new(n.lemma, n.lemma, "NOUN").feat("Gender", n.gender).feat("Case", "Acc"), n.english.to_string())
        };

        let verb_tok = Tok::new(format!("{verb}to"), verb, "VERB").feat("Tense", "Pres").feat("Person", "3");
        let s = b.push(subj);
        let (o, v) = if int_object[i] {
            let v = b.push(verb_tok);
            (b.push(obj), v)
        } else {
            let o = b.push(obj);
            (o, b.push(verb_tok))
        };
        let p = b.push(Tok::new(if question { "?" } else { "." }, "punct", "PUNCT"));
        b.attach(s, v, "nsubj");
        b.attach(o, v, "obj");
        b.attach(p, v, "punct");
        let english = if int_object[i] {
            format!("{} does {en_subj} {}?", capitalized(&en_obj), en_verb.trim_end_matches('s'))
        } else {
            format!("{} {en_verb} {en_obj}{}", capitalized(&en_subj), if question { "?" } else { "." })
        };
        b.write(&mut out, &format!("wo-{i}"), Some(&english));
    }
    out
}

/// CoNLL-U text with `n` sentences "I ADJ NOUN VERB", each holding one amod
/// and one obj pair. Adjectives share the noun's gender in `amod_match` of
/// sentences; verbs share it in `obj_match` of them.
pub fn planted_agreement(n: usize, amod_match: f64, obj_match: f64, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amod = planted_set(n, amod_match, &mut rng);
    let obj = planted_set(n, obj_match, &mut rng);
    let mut out = String::new();
    for i in 0..n {
        let noun = NOUNS.choose(&mut rng).expect("nouns");
        let (adj, en_adj) = *ADJS.choose(&mut rng).expect("adjectives");
        let (verb, _, en_verb) = *VERBS.choose(&mut rng).expect("verbs");
        let adj_gender = if amod[i] { noun.gender } else { other_gender(noun.gender, &mut rng) };
        let verb_gender = if obj[i] { noun.gender } else { other_gender(noun.gender, &mut rng) };
        let mut b = Builder::default();
        let s = b.push(Tok::new("mi", "mi", "PRON").feat("Person", "1").feat("PronType", "Prs"));
        let a = b.push(adjective(adj, adj_gender));
        let o = b.push(Tok::new(noun.lemma, noun.lemma, "NOUN").feat("Gender", noun.gender));
        let v = b.push(
            Tok::new(format!("{verb}l{}", gender_ending(verb_gender)), verb, "VERB")
                .feat("Gender", verb_gender)
                .feat("Tense", "Past"),
        );
        let p = b.push(Tok::new(".", "punct", "PUNCT"));
        b.attach(s, v, "nsubj");
        b.attach(a, o, "amod");
        b.attach(o, v, "obj");
        b.attach(p, v, "punct");
        let english = format!("I {en_verb} the {en_adj} {}.", noun.english.trim_start_matches("the "));
        b.write(&mut out, &format!("ag-{i}"), Some(&english));
    }
    out
}

fn case_form(lemma: &str, case: &str) -> String {
    let suffix = match case {
        "Erg" => "ne",
        "Acc" | "Dat" => "laa",
        "Loc" => "t",
        "Gen" => "chaa",
        _ => "",
    };
    format!("{lemma}{suffix}")
}

/// A varied treebank of `n` sentences exercising every aspect:
///
/// * SOV order, with interrogative objects after the verb and numerals
///   occasionally after their noun;
/// * case suffixes (`-ne` ergative in the past tense, `-laa` on animate
///   objects, `-t` locative, `-chaa` genitive);
/// * adjectives agreeing in gender with their noun, verbs agreeing with
///   the subject in the present and with the object in the past.
pub fn treebank(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for i in 0..n {
        let mut b = Builder::default();
        let past = rng.random_bool(0.5);
        let int_object = rng.random_bool(0.1);
        let int_subject = !int_object && rng.random_bool(0.05);
        let (verb, en_pres, en_past) = *VERBS.choose(&mut rng).expect("verbs");

        // subject
        let subj_noun = NOUNS.iter().filter(|n| n.animate).collect::<Vec<_>>();
        let subj_noun = *subj_noun.choose(&mut rng).expect("nouns");
        let subj_case = if past { "Erg" } else { "Nom" };
        let subj = if int_subject {
            Tok::new(if past { "konii" } else { "kon" }, "kon", "PRON").feat("PronType", "Int").feat("Case", subj_case)
        } else {
            Tok::new(case_form(subj_noun.lemma, subj_case), subj_noun.lemma, "NOUN")
                .feat("Gender", subj_noun.gender)
                .feat("Case", subj_case)
                .feat("Number", "Sing")
        };

        // object
        let obj_noun = NOUNS.choose(&mut rng).expect("nouns");
        let obj_case = if obj_noun.animate { "Acc" } else { "Nom" };
        let obj = if int_object {
            let (lemma, _) = *INT_OBJECTS.choose(&mut rng).expect("pronouns");
            Tok::new(lemma, lemma, "PRON").feat("PronType", "Int").feat("Case", "Acc")
        } else {
            Tok::new(case_form(obj_noun.lemma, obj_case), obj_noun.lemma, "NOUN")
                .feat("Gender", obj_noun.gender)
                .feat("Case", obj_case)
                .feat("Number", "Sing")
        };

        // verb agreement: subject in the present, unmarked object in the past
        let agree_with = if past && !int_object {
            if obj_case == "Nom" { obj_noun.gender } else { "Neut" }
        } else if int_subject || past {
            "Neut"
        } else {
            subj_noun.gender
        };
        let verb_form = format!(
            "{verb}{}{}",
            if past { "l" } else { "t" },
            gender_ending(agree_with)
        );
        let verb_tok = Tok::new(verb_form, verb, "VERB")
            .feat("Gender", agree_with)
            .feat("Tense", if past { "Past" } else { "Pres" })
            .feat("Person", "3")
            .feat("VerbForm", "Fin");

        let subj_adj = (!int_subject && rng.random_bool(0.3)).then(|| *ADJS.choose(&mut rng).expect("adjectives"));
        let obj_num = (!int_object && rng.random_bool(0.15)).then(|| rng.random_bool(0.15));
        let obj_adj = (!int_object && rng.random_bool(0.3)).then(|| *ADJS.choose(&mut rng).expect("adjectives"));
        let place = rng.random_bool(0.35).then(|| *PLACES.choose(&mut rng).expect("places"));
        let postposition = place.is_some() && rng.random_bool(0.4);

        let mut attach = Vec::new();
        let adj_s = subj_adj.map(|(a, _)| {
            let g = if rng.random_bool(0.95) { subj_noun.gender } else { other_gender(subj_noun.gender, &mut rng) };
            b.push(adjective(a, g))
        });
        let s = b.push(subj);
        if let Some(a) = adj_s {
            attach.push((a, s, "amod"));
        }
        let place_tokens = place.map(|(p, _)| {
            if postposition {
                let noun = b.push(Tok::new(p, p, "NOUN").feat("Case", "Nom").feat("Gender", "Neut"));
                let adp = b.push(Tok::new("madhye", "madhye", "ADP"));
                (noun, Some(adp))
            } else {
                (b.push(Tok::new(case_form(p, "Loc"), p, "NOUN").feat("Case", "Loc").feat("Gender", "Neut")), None)
            }
        });
        let obj_slot = |b: &mut Builder, rng: &mut ChaCha8Rng, attach: &mut Vec<(usize, usize, &'static str)>| {
            let before_num = obj_num == Some(false);
            let num = before_num.then(|| b.push(Tok::new("don", "don", "NUM").feat("NumType", "Card")));
            let adj = obj_adj.map(|(a, _)| {
                let g = if rng.random_bool(0.95) { obj_noun.gender } else { other_gender(obj_noun.gender, rng) };
                b.push(adjective(a, g))
            });
            let o = b.push(obj.clone());
            let num = num.or_else(|| (obj_num == Some(true)).then(|| b.push(Tok::new("don", "don", "NUM").feat("NumType", "Card"))));
            if let Some(n) = num {
                attach.push((n, o, "nummod"));
            }
            if let Some(a) = adj {
                attach.push((a, o, "amod"));
            }
            o
        };
        let (o, v) = if int_object {
            let v = b.push(verb_tok);
            (obj_slot(&mut b, &mut rng, &mut attach), v)
        } else {
            let o = obj_slot(&mut b, &mut rng, &mut attach);
            (o, b.push(verb_tok))
        };
        let question = int_object || int_subject;
        let p = b.push(Tok::new(if question { "?" } else { "." }, "punct", "PUNCT"));
        attach.push((s, v, "nsubj"));
        attach.push((o, v, "obj"));
        attach.push((p, v, "punct"));
        if let Some((noun, adp)) = place_tokens {
            attach.push((noun, v, "obl"));
            if let Some(adp) = adp {
                attach.push((adp, noun, "case"));
            }
        }
        for (d, h, r) in attach {
            b.attach(d, h, r);
        }

        let en_subj = if int_subject { "who".to_string() } else { capitalized(subj_noun.english) };
        let en_obj = if int_object { "what".to_string() } else { obj_noun.english.to_string() };
        let en_verb = if past { en_past } else { en_pres };
        let en_place = place.map(|(_, e)| format!(" in {e}")).unwrap_or_default();
        let english = if int_object {
            format!("What {} {} {}{en_place}?", if past { "did" } else { "does" }, en_subj, en_pres.trim_end_matches('s'))
        } else {
            format!("{} {en_verb} {en_obj}{en_place}{}", capitalized(&en_subj), if question { "?" } else { "." })
        };
        b.write(&mut out, &format!("tb-{i}"), Some(&english));
    }
    out
}

/// An English/L2 parallel corpus with Pharaoh alignments and WordNet-style
/// resources.
#[derive(Debug, Clone)]
pub struct ParallelFixture {
    pub source: String,
    pub target: String,
    pub alignments: String,
    pub hypernyms: String,
    pub sense_members: String,
    pub antonyms: String,
    pub sense_annotations: String,
}

impl ParallelFixture {
    /// Parsed and aligned sentence pairs.
    pub fn pairs(&self) -> Result<Vec<ParallelPair>> {
        let source = parse_conllu(&self.source)?;
        let target = parse_conllu(&self.target)?;
        parse_alignments(&self.alignments, pair_sentences(&source, &target)?)
    }

    pub fn taxonomy(&self) -> Result<TaxonomyResource> {
        parse_taxonomy(&self.hypernyms, &self.sense_members, Some(&self.antonyms))
    }

    pub fn senses(&self, taxonomy: &TaxonomyResource) -> Result<SenseAnnotations> {
        parse_senses(&self.sense_annotations, taxonomy)
    }
}

struct Side {
    toks: Vec<Tok>,
}

fn side(words: &[(&str, &str, &'static str)]) -> Side {
    Side {
        toks: words
            .iter()
            .map(|(form, lemma, upos)| Tok::new(*form, lemma, upos))
            .collect(),
    }
}

/// "rice" is translated "tandul" exactly when "raw" precedes it
/// (`raw_share` of the `n_rice` rice sentences) and "bhaat" otherwise.
/// Filler sentences add a loanword pair (doctor → vaidya / doctor), a
/// proper noun, fruit and animal words, and the adjectives good and bad.
pub fn planted_parallel(n_rice: usize, raw_share: f64, seed: u64) -> ParallelFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = planted_set(n_rice, raw_share, &mut rng);
    let mut src = String::new();
    let mut tgt = String::new();
    let mut align = String::new();
    let mut ann = String::new();
    let mut k = 0usize;

    let mut emit = |s: Side, t: Side, links: &[(usize, usize)], senses: &[(usize, &str)]| {
        let mut bs = Builder { toks: s.toks };
        let mut bt = Builder { toks: t.toks };
        // heads: everything hangs off the verb (last content word)
        for b in [&mut bs, &mut bt] {
            let root = b.toks.iter().position(|t| t.upos == "VERB").unwrap_or(0) + 1;
            for i in 1..=b.toks.len() {
                if i != root {
                    let rel = match b.toks[i - 1].upos {
                        "ADJ" => "amod",
                        "PUNCT" => "punct",
                        "PRON" if i < root => "nsubj",
                        _ => "obj",
                    };
                    b.attach(i, root, rel);
                }
            }
        }
        // adjectives modify the following noun
        for b in [&mut bs, &mut bt] {
            for i in 1..b.toks.len() {
                if b.toks[i - 1].upos == "ADJ" && b.toks[i].upos == "NOUN" {
                    b.attach(i, i + 1, "amod");
                }
            }
        }
        let id = format!("pair{k}");
        let en = bs.text();
        bs.write(&mut src, &id, None);
        bt.write(&mut tgt, &id, Some(&en));
        let line: Vec<String> = links.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        align.push_str(&line.join(" "));
        align.push('\n');
        for (tok, sense) in senses {
            let _ = writeln!(ann, "{id}\t{tok}\t{sense}");
        }
        k += 1;
    };

    let verbs = [("buy", "ghe", "buy.v.01"), ("wash", "dhu", "wash.v.01"), ("want", "pahije", "want.v.01"), ("cook", "shijav", "cook.v.01")];
    let subjects = [("I", "mi"), ("she", "ti"), ("we", "aamhi")];
    for is_raw in raw {
        let (ev, lv, vs) = *verbs.choose(&mut rng).expect("verbs");
        let (es, ls) = *subjects.choose(&mut rng).expect("subjects");
        let today = rng.random_bool(0.3);
        let mut s = vec![(es, es, "PRON"), (ev, ev, "VERB")];
        let mut t = vec![(ls, ls, "PRON")];
        let mut links = vec![(0, 0)];
        if is_raw {
            s.push(("raw", "raw", "ADJ"));
            t.push(("kacche", "kacche", "ADJ"));
            links.push((2, 1));
        }
        s.push(("rice", "rice", "NOUN"));
        let rice_src = s.len() - 1;
        t.push(if is_raw { ("tandul", "tandul", "NOUN") } else { ("bhaat", "bhaat", "NOUN") });
        links.push((rice_src, t.len() - 1));
        if today {
            s.push(("today", "today", "ADV"));
            t.insert(1, ("aaj", "aaj", "ADV"));
            for l in links.iter_mut().skip(1) {
                l.1 += 1;
            }
            links.push((s.len() - 1, 1));
        }
        t.push((lv, lv, "VERB"));
        links.push((1, t.len() - 1));
        s.push((".", ".", "PUNCT"));
        t.push((".", ".", "PUNCT"));
        links.push((s.len() - 1, t.len() - 1));
        links.sort();
        emit(side(&s), side(&t), &links, &[(rice_src, "rice.n.01"), (1, vs)]);
    }

    let fillers: [(&[(&str, &str, &'static str)], &[(&str, &str, &'static str)], &[(usize, usize)], &[(usize, &str)], usize); 7] = [
        (&[("the", "the", "DET"), ("doctor", "doctor", "NOUN"), ("came", "come", "VERB"), (".", ".", "PUNCT")],
         &[("vaidya", "vaidya", "NOUN"), ("aale", "ye", "VERB"), (".", ".", "PUNCT")],
         &[(1, 0), (2, 1), (3, 2)], &[(1, "doctor.n.01")], 24),
        (&[("the", "the", "DET"), ("doctor", "doctor", "NOUN"), ("came", "come", "VERB"), (".", ".", "PUNCT")],
         &[("doctor", "doctor", "NOUN"), ("aale", "ye", "VERB"), (".", ".", "PUNCT")],
         &[(1, 0), (2, 1), (3, 2)], &[(1, "doctor.n.01")], 16),
        (&[("I", "I", "PRON"), ("eat", "eat", "VERB"), ("a", "a", "DET"), ("banana", "banana", "NOUN"), (".", ".", "PUNCT")],
         &[("mi", "mi", "PRON"), ("kela", "kela", "NOUN"), ("khaato", "khaa", "VERB"), (".", ".", "PUNCT")],
         &[(0, 0), (1, 2), (3, 1), (4, 3)], &[(3, "banana.n.01"), (1, "eat.v.01")], 15),
        (&[("I", "I", "PRON"), ("see", "see", "VERB"), ("a", "a", "DET"), ("cow", "cow", "NOUN"), (".", ".", "PUNCT")],
         &[("mi", "mi", "PRON"), ("gaay", "gaay", "NOUN"), ("baghto", "bagh", "VERB"), (".", ".", "PUNCT")],
         &[(0, 0), (1, 2), (3, 1), (4, 3)], &[(3, "cow.n.01"), (1, "see.v.01")], 12),
        (&[("I", "I", "PRON"), ("want", "want", "VERB"), ("good", "good", "ADJ"), ("food", "food", "NOUN"), (".", ".", "PUNCT")],
         &[("mi", "mi", "PRON"), ("changle", "chaangla", "ADJ"), ("anna", "anna", "NOUN"), ("pahije", "pahije", "VERB"), (".", ".", "PUNCT")],
         &[(0, 0), (1, 3), (2, 1), (3, 2), (4, 4)], &[(2, "good.a.01"), (3, "food.n.02")], 14),
        (&[("I", "I", "PRON"), ("want", "want", "VERB"), ("bad", "bad", "ADJ"), ("food", "food", "NOUN"), (".", ".", "PUNCT")],
         &[("mi", "mi", "PRON"), ("vaait", "vaait", "ADJ"), ("anna", "anna", "NOUN"), ("pahije", "pahije", "VERB"), (".", ".", "PUNCT")],
         &[(0, 0), (1, 3), (2, 1), (3, 2), (4, 4)], &[(2, "bad.a.01"), (3, "food.n.02")], 6),
        (&[("I", "I", "PRON"), ("visit", "visit", "VERB"), ("Pune", "Pune", "PROPN"), (".", ".", "PUNCT")],
         &[("mi", "mi", "PRON"), ("punyala", "pune", "PROPN"), ("jaato", "jaa", "VERB"), (".", ".", "PUNCT")],
         &[(0, 0), (1, 2), (2, 1), (3, 3)], &[], 20),
    ];
    for (s, t, links, senses, count) in fillers {
        for _ in 0..count {
            emit(side(s), side(t), links, senses);
        }
    }

    ParallelFixture {
        source: src,
        target: tgt,
        alignments: align,
        hypernyms: [
            "rice.n.01\tgrain.n.02",
            "grain.n.02\tfood.n.02",
            "banana.n.01\tedible_fruit.n.01",
            "edible_fruit.n.01\tproduce.n.01",
            "edible_fruit.n.01\tfruit.n.01",
            "produce.n.01\tfood.n.02",
            "food.n.02\tsolid.n.01",
            "cow.n.01\tcattle.n.01",
            "cattle.n.01\tbovine.n.01",
            "bovine.n.01\tanimal.n.01",
            "doctor.n.01\tmedical_practitioner.n.01",
            "medical_practitioner.n.01\tperson.n.01",
        ]
        .join("\n")
            + "\n",
        sense_members: [
            "rice.n.01\trice", "grain.n.02\tgrain", "food.n.02\tfood", "food.n.02\tsolid_food",
            "banana.n.01\tbanana", "edible_fruit.n.01\tedible_fruit", "produce.n.01\tproduce",
            "fruit.n.01\tfruit", "solid.n.01\tsolid", "cow.n.01\tcow", "cattle.n.01\tcattle",
            "bovine.n.01\tbovine", "animal.n.01\tanimal", "doctor.n.01\tdoctor", "doctor.n.01\tphysician",
            "medical_practitioner.n.01\tmedical_practitioner", "person.n.01\tperson",
            "good.a.01\tgood", "good.a.01\tfine", "bad.a.01\tbad", "bad.a.01\tpoor",
            "buy.v.01\tbuy", "wash.v.01\twash", "want.v.01\twant", "cook.v.01\tcook",
            "eat.v.01\teat", "see.v.01\tsee",
        ]
        .join("\n")
            + "\n",
        antonyms: "good.a.01\tbad.a.01\n".into(),
        sense_annotations: ann,
    }
}

/// File names inside a fixture directory.
pub mod files {
    pub const TREEBANK: &str = "treebank.conllu";
    pub const SOURCE: &str = "parallel.en.conllu";
    pub const TARGET: &str = "parallel.l2.conllu";
    pub const ALIGNMENTS: &str = "parallel.align";
    pub const HYPERNYMS: &str = "hypernyms.tsv";
    pub const SENSE_MEMBERS: &str = "senses.tsv";
    pub const ANTONYMS: &str = "antonyms.tsv";
    pub const SENSE_ANNOTATIONS: &str = "sense_annotations.tsv";
    pub const CONFIG: &str = "teachgram.toml";
}

/// Write a complete input set (treebank, parallel corpus, resources and a
/// run configuration) into `dir` and return the configuration path.
pub fn write_fixture_dir(dir: &Path, sentences: usize, seed: u64) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let par = planted_parallel(sentences / 2, 0.4, seed);
    let config = format!(
        "seed = {seed}\nlanguage = \"mr\"\n\n[inputs]\ntreebank = \"{}\"\nparallel_source = \"{}\"\nparallel_target = \"{}\"\n\
         alignments = \"{}\"\nhypernyms = \"{}\"\nsense_members = \"{}\"\nantonyms = \"{}\"\nsenses = \"{}\"\n",
        files::TREEBANK,
        files::SOURCE,
        files::TARGET,
        files::ALIGNMENTS,
        files::HYPERNYMS,
        files::SENSE_MEMBERS,
        files::ANTONYMS,
        files::SENSE_ANNOTATIONS,
    );
    let outputs = [
        (files::TREEBANK, treebank(sentences, seed)),
        (files::SOURCE, par.source),
        (files::TARGET, par.target),
        (files::ALIGNMENTS, par.alignments),
        (files::HYPERNYMS, par.hypernyms),
        (files::SENSE_MEMBERS, par.sense_members),
        (files::ANTONYMS, par.antonyms),
        (files::SENSE_ANNOTATIONS, par.sense_annotations),
        (files::CONFIG, config),
    ];
    for (name, text) in outputs {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(dir.join(files::CONFIG))
}
