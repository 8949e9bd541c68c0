//! Static HTML rendering of a bundle: an index, one page per aspect, and one
//! page of examples per rule.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{EvaluationRow, LexicalReport, MaterialsBundle, SentenceRecord, SuffixReport, TaskSection, TreeTaskReport, ASPECTS};
use crate::error::{Error, Result};
use crate::featurize::Provenance;
use crate::ruleminer::Verdict;
use crate::task::LinearRule;

const STYLE: &str = "\
body { font-family: sans-serif; max-width: 60em; margin: 2em auto; padding: 0 1em; line-height: 1.5; color: #222; }
nav a { margin-right: 1em; }
table { border-collapse: collapse; margin: 1em 0; }
th, td { border: 1px solid #bbb; padding: 0.25em 0.6em; text-align: left; vertical-align: top; }
th { background: #eee; }
mark { background: #ffe08a; }
.rule { margin: 0.5em 0; }
.default { color: #555; }
.notice { color: #8a4b00; }
.translit { font-style: italic; color: #444; }
.translation { color: #333; }
.example { margin: 0.75em 0; padding-left: 0.75em; border-left: 3px solid #ddd; }
";

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_matches('-').to_string()
}

fn page(title: &str, depth: usize, body: &str) -> String {
    let up = "../".repeat(depth);
    let mut nav = format!("<a href=\"{up}index.html\">Index</a>");
    for (_, name, anchor) in ASPECTS {
        let _ = write!(nav, "<a href=\"{up}{anchor}.html\">{name}</a>");
    }
    format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>{}</title>\n\
         <link rel=\"stylesheet\" href=\"{up}style.css\">\n</head>\n<body>\n<nav>{nav}</nav>\n<h1>{}</h1>\n{body}</body>\n</html>\n",
        escape(title),
        escape(title)
    )
}

fn notices(list: &[String]) -> String {
    list.iter()
        .map(|n| format!("<p class=\"notice\">{}</p>\n", escape(n)))
        .collect()
}

fn marked(tokens: &[String], marks: &BTreeSet<usize>) -> String {
    tokens
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if marks.contains(&(i + 1)) {
                format!("<mark>{}</mark>", escape(t))
            } else {
                escape(t)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// One example: L2 text with the relevant tokens marked, transliteration
/// when known, and the English translation.
fn render_example(bundle: &MaterialsBundle, p: &Provenance) -> String {
    let Some(s) = bundle.sentences.get(&p.sentence_id) else {
        return String::new();
    };
    let mut out = format!("<div class=\"example\" id=\"{}\">\n", escape(&p.sentence_id));
    let (l2_marks, en_marks): (BTreeSet<usize>, BTreeSet<usize>) = match &s.source_tokens {
        Some(_) => (p.head.into_iter().collect(), [p.dependent].into()),
        None => ([p.dependent].into_iter().chain(p.head).collect(), BTreeSet::new()),
    };
    let _ = writeln!(out, "<div class=\"l2\">{}</div>", marked(&s.tokens, &l2_marks));
    if let Some(t) = &s.transliteration {
        let _ = writeln!(out, "<div class=\"translit\">{}</div>", escape(t));
    }
    match (&s.source_tokens, &s.translation) {
        (Some(src), _) => {
            let _ = writeln!(out, "<div class=\"translation\">{}</div>", marked(src, &en_marks));
        }
        (None, Some(t)) => {
            let _ = writeln!(out, "<div class=\"translation\">{}</div>", escape(t));
        }
        (None, None) => {}
    }
    out.push_str("</div>\n");
    out
}

fn sentence_line(s: &SentenceRecord) -> String {
    let mut out = escape(&s.text);
    if let Some(t) = &s.translation {
        let _ = write!(out, " <span class=\"translation\">({})</span>", escape(t));
    }
    out
}

fn evaluation_table(rows: &[EvaluationRow]) -> String {
    if rows.is_empty() {
        return "<p>No tasks were evaluated.</p>\n".into();
    }
    let mut out = String::from("<table>\n<tr><th>Grammar concept</th><th>Task</th><th>Model (count)</th><th>Baseline</th></tr>\n");
    for r in rows {
        let _ = writeln!(
            out,
            "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>",
            escape(&r.concept),
            escape(&r.task),
            escape(&r.model_cell),
            escape(&r.baseline_cell)
        );
    }
    out.push_str("</table>\n");
    out
}

/// Files to write, as (relative path, contents).
struct Site {
    files: Vec<(PathBuf, String)>,
}

impl Site {
    fn add(&mut self, path: impl Into<PathBuf>, contents: String) {
        self.files.push((path.into(), contents));
    }

    /// Write a rule's example page and return a link to it from an aspect page.
    fn rule_page(&mut self, bundle: &MaterialsBundle, id: &str, rendered: &str, examples: &[Provenance], counter: &[Provenance]) -> String {
        let file = format!("rules/{id}.html");
        let mut body = format!("<p class=\"rule\">{}</p>\n<h2>Examples</h2>\n", escape(rendered));
        for p in examples {
            body += &render_example(bundle, p);
        }
        if !counter.is_empty() {
            body += "<h2>Exceptions</h2>\n";
            for p in counter {
                body += &render_example(bundle, p);
            }
        }
        self.add(&file, page(rendered, 1, &body));
        format!(
            "<a href=\"{file}\">{} example{}</a>",
            examples.len(),
            if examples.len() == 1 { "" } else { "s" }
        )
    }
}

fn tree_tasks(site: &mut Site, bundle: &MaterialsBundle, aspect: &str, section: &TaskSection) -> String {
    let mut body = notices(&section.notices);
    if section.tasks.is_empty() {
        body += "<p>No tasks were mined.</p>\n";
    }
    for (ti, task) in section.tasks.iter().enumerate() {
        body += &tree_task(site, bundle, &format!("{aspect}-{ti}-{}", slug(&task.name)), task);
    }
    body
}

fn tree_task(site: &mut Site, bundle: &MaterialsBundle, id: &str, task: &TreeTaskReport) -> String {
    let e = &task.evaluation;
    let mut body = format!(
        "<h2>{}</h2>\n<p>{} instances; {} rule(s); test accuracy {} against baseline {} (\"{}\").</p>\n<ul>\n",
        escape(&task.name),
        task.instances,
        task.rule_count,
        escape(&super::format_cell(e.model_accuracy, e.count)),
        escape(&super::format_baseline(e.baseline_accuracy)),
        escape(&e.baseline_label)
    );
    for (ri, rule) in task.rules.iter().enumerate() {
        let class = if rule.verdict == Verdict::Default { " default" } else { "" };
        let link = site.rule_page(bundle, &format!("{id}-{ri}"), &rule.rendered, &rule.examples, &rule.counter_examples);
        let _ = writeln!(
            body,
            "<li class=\"rule{class}\">{} <small>(p = {:.3e}; {} exception(s); {link})</small></li>",
            escape(&rule.rendered),
            rule.p_value,
            rule.exception_count
        );
    }
    body.push_str("</ul>\n");
    body
}

fn linear_rules(site: &mut Site, bundle: &MaterialsBundle, id: &str, rules: &[LinearRule]) -> String {
    let mut body = String::from("<ul>\n");
    for (ri, rule) in rules.iter().enumerate() {
        let link = site.rule_page(bundle, &format!("{id}-{ri}-{}", slug(&rule.class)), &rule.rendered, &rule.examples, &[]);
        let _ = writeln!(body, "<li class=\"rule\">{} <small>({link})</small></li>", escape(&rule.rendered));
    }
    body.push_str("</ul>\n");
    body
}

fn suffix_report(site: &mut Site, bundle: &MaterialsBundle, si: usize, s: &SuffixReport) -> String {
    let mut body = format!("<h2>{}</h2>\n<table>\n<tr><th>Suffix</th><th>Count</th></tr>\n", escape(&s.upos));
    let mut inv: Vec<(&String, &usize)> = s.inventory.iter().collect();
    inv.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    for (suffix, count) in inv {
        let _ = writeln!(body, "<tr><td>-{}</td><td>{count}</td></tr>", escape(suffix));
    }
    body.push_str("</table>\n");
    let e = &s.evaluation;
    let _ = writeln!(
        body,
        "<p>Test accuracy {} against baseline {}.</p>",
        escape(&super::format_cell(e.model_accuracy, e.count)),
        escape(&super::format_baseline(e.baseline_accuracy))
    );
    body + &linear_rules(site, bundle, &format!("suffix-{si}-{}", slug(&s.upos)), &s.rules)
}

fn lexical_report(site: &mut Site, bundle: &MaterialsBundle, li: usize, d: &LexicalReport) -> String {
    let candidates: Vec<String> = d
        .candidates
        .iter()
        .map(|c| format!("{} ({}{})", escape(&c.l2), c.count, if c.loanword { ", loanword" } else { "" }))
        .collect();
    let body = format!(
        "<h3>{}</h3>\n<p>Translations: {}. Entropy {:.2} bits.</p>\n",
        escape(&d.l1),
        candidates.join(", "),
        d.entropy
    );
    body + &linear_rules(site, bundle, &format!("vocab-{li}-{}", slug(&d.l1)), &d.rules)
}

fn general_page(bundle: &MaterialsBundle) -> String {
    let g = &bundle.aspects.general_information;
    let mut body = notices(&g.notices);
    if g.morphology.is_empty() {
        body += "<p>No morphological attributes were found.</p>\n";
    }
    for m in &g.morphology {
        let _ = writeln!(body, "<h2>{}</h2>\n<p>{} tokens.</p>", escape(&m.attribute), m.total);
        body += "<table>\n<tr><th>Value</th><th>Count</th><th>POS</th><th>Forms</th></tr>\n";
        for v in &m.values {
            let pos: Vec<String> = v.pos.iter().map(|(p, c)| format!("{} {c}", escape(p))).collect();
            let forms: Vec<String> = v
                .examples
                .iter()
                .map(|f| {
                    let line = bundle.sentences.get(&f.example.sentence_id).map(sentence_line).unwrap_or_default();
                    format!("<b>{}</b> ({}): {line}", escape(&f.form), f.count)
                })
                .collect();
            let _ = writeln!(
                body,
                "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>",
                escape(&v.value),
                v.count,
                pos.join(", "),
                forms.join("<br>")
            );
        }
        body += "</table>\n";
    }
    body
}

fn vocabulary_page(site: &mut Site, bundle: &MaterialsBundle) -> String {
    let v = &bundle.aspects.vocabulary;
    let mut body = notices(&v.notices);
    body += "<h2>Words with several translations</h2>\n";
    if let Some(e) = &v.evaluation {
        let _ = writeln!(
            body,
            "<p>Pooled test accuracy {} against baseline {}.</p>",
            escape(&super::format_cell(e.model_accuracy, e.count)),
            escape(&super::format_baseline(e.baseline_accuracy))
        );
    }
    if v.divergent.is_empty() {
        body += "<p>None found.</p>\n";
    }
    for (li, d) in v.divergent.iter().enumerate() {
        body += &lexical_report(site, bundle, li, d);
    }
    body += "<h2>Word categories</h2>\n";
    if let Some(w) = &v.categories.warning {
        let _ = writeln!(body, "<p class=\"notice\">{}</p>", escape(w));
    }
    for (name, entries) in &v.categories.categories {
        let _ = writeln!(body, "<h3>{}</h3>\n<table>\n<tr><th>Word</th><th>English</th><th>Count</th><th>Example</th></tr>", escape(name));
        for e in entries {
            let example = e.examples.first().map(|p| render_example(bundle, p)).unwrap_or_default();
            let _ = writeln!(
                body,
                "<tr><td>{}</td><td>{}</td><td>{}</td><td>{example}</td></tr>",
                escape(&e.l2),
                escape(&e.gloss),
                e.count
            );
        }
        body += "</table>\n";
    }
    body += "<h2>Adjectives</h2>\n";
    if v.adjectives.is_empty() {
        body += "<p>None found.</p>\n";
    } else {
        body += "<table>\n<tr><th>Word</th><th>English</th><th>Count</th><th>Synonyms</th><th>Antonyms</th><th>Example</th></tr>\n";
        for a in &v.adjectives {
            let example = a.examples.first().map(|p| render_example(bundle, p)).unwrap_or_default();
            let _ = writeln!(
                body,
                "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{example}</td></tr>",
                escape(&a.l2),
                escape(&a.english),
                a.count,
                escape(&a.synonyms.join(", ")),
                escape(&a.antonyms.join(", "))
            );
        }
        body += "</table>\n";
    }
    body
}

fn suffix_page(site: &mut Site, bundle: &MaterialsBundle) -> String {
    let s = &bundle.aspects.suffix_usage;
    let mut body = notices(&s.notices);
    if !s.segmentation_note.is_empty() {
        let _ = writeln!(body, "<p>{}</p>", escape(&s.segmentation_note));
    }
    if s.inventories.is_empty() {
        body += "<p>No suffix inventories were mined.</p>\n";
    }
    for (si, inv) in s.inventories.iter().enumerate() {
        body += &suffix_report(site, bundle, si, inv);
    }
    body
}

/// One-line summary of an aspect for the index.
fn summary(bundle: &MaterialsBundle, key: &str) -> String {
    let a = &bundle.aspects;
    let (n, what, notes) = match key {
        "general_information" => (a.general_information.morphology.len(), "attribute(s)", &a.general_information.notices),
        "vocabulary" => (a.vocabulary.divergent.len(), "word(s) with several translations", &a.vocabulary.notices),
        "word_order" => (a.word_order.tasks.len(), "task(s)", &a.word_order.notices),
        "suffix_usage" => (a.suffix_usage.inventories.len(), "suffix inventory(ies)", &a.suffix_usage.notices),
        _ => (a.agreement.tasks.len(), "task(s)", &a.agreement.notices),
    };
    format!("<p>{n} {what}.</p>\n{}", notices(notes))
}

fn index_page(bundle: &MaterialsBundle) -> String {
    let mut body = format!(
        "<p>Language: {}. Seed: {}.</p>\n",
        escape(&bundle.language.code),
        bundle.seed
    );
    for (key, name, anchor) in ASPECTS {
        let _ = writeln!(
            body,
            "<section id=\"{anchor}\">\n<h2><a href=\"{anchor}.html\">{name}</a></h2>\n{}</section>",
            summary(bundle, key)
        );
    }
    body += "<h2>Evaluation</h2>\n";
    body += &evaluation_table(&bundle.evaluation);
    page("Grammar materials", 0, &body)
}

/// Write `index.html`, one page per aspect, per-rule example pages and
/// `style.css` under `out_dir`. The bundle is validated first.
pub fn emit_site(bundle: &MaterialsBundle, out_dir: &Path) -> Result<Vec<PathBuf>> {
    bundle.validate()?;
    let mut site = Site { files: Vec::new() };
    site.add("style.css", STYLE.to_string());
    site.add("index.html", index_page(bundle));
    for (key, name, anchor) in ASPECTS {
        let body = match key {
            "general_information" => general_page(bundle),
            "vocabulary" => vocabulary_page(&mut site, bundle),
            "word_order" => tree_tasks(&mut site, bundle, "order", &bundle.aspects.word_order),
            "suffix_usage" => suffix_page(&mut site, bundle),
            _ => tree_tasks(&mut site, bundle, "agreement", &bundle.aspects.agreement),
        };
        site.add(format!("{anchor}.html"), page(name, 0, &body));
    }
    let mut written = Vec::new();
    for (rel, contents) in site.files {
        let path = out_dir.join(rel);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
