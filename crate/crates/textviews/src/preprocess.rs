//! Text normalization pipeline, in a fixed stage order:
//! lowercase -> strip URLs -> strip non-alphanumerics -> tokenize ->
//! drop stopwords -> lemmatize.
//!
//! The stopword list and lemma table are bundled, versioned data files;
//! behaviour is pinned to those files. The pipeline is idempotent: feeding
//! its own output (rejoined with spaces) back in returns the same tokens.

use regex::Regex;
use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

pub const LEXICON_VERSION: &str = "1";

const STOPWORDS_RAW: &str = include_str!("../data/stopwords.txt");
const LEMMAS_RAW: &str = include_str!("../data/lemmas.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreprocessOptions {
    pub lowercase: bool,
    pub strip_urls: bool,
    pub strip_special: bool,
    pub remove_stopwords: bool,
    pub lemmatize: bool,
    /// Consulted by vocabulary fitting, not by `preprocess` itself.
    pub remove_hapax: bool,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        PreprocessOptions {
            lowercase: true,
            strip_urls: true,
            strip_special: true,
            remove_stopwords: true,
            lemmatize: true,
            remove_hapax: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Lexicons {
    stopwords: HashSet<String>,
    lemmas: HashMap<String, String>,
}

impl Lexicons {
    /// The bundled, versioned lexicons.
    pub fn bundled() -> &'static Lexicons {
        static BUNDLED: OnceLock<Lexicons> = OnceLock::new();
        BUNDLED.get_or_init(|| {
            let stopwords = STOPWORDS_RAW
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_string)
                .collect();
            let lemmas = LEMMAS_RAW
                .lines()
                .map(str::trim_end)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .filter_map(|l| {
                    let (form, lemma) = l.split_once('\t')?;
                    Some((form.to_string(), lemma.to_string()))
                })
                .collect();
            Lexicons { stopwords, lemmas }
        })
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(token)
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }

    pub fn lemma_table(&self) -> &HashMap<String, String> {
        &self.lemmas
    }
}

fn url_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // spans starting with a scheme or a www. prefix, up to whitespace
    RE.get_or_init(|| Regex::new(r"(?i)(?:[a-z][a-z0-9+.\-]*://|www\.)\S*").unwrap())
}

/// Reduce one token to its lemma: bundled lookup table first, then the
/// deterministic suffix rules (ing/ed/es/s), iterated to a fixed point.
/// A rule candidate that would land on a stopword is rejected so that
/// stopword removal (which runs earlier) cannot be re-triggered.
pub fn lemmatize(token: &str, lex: &Lexicons) -> String {
    let mut cur = token.to_string();
    for _ in 0..16 {
        if let Some(lemma) = lex.lemmas.get(&cur) {
            if *lemma == cur {
                return cur;
            }
            cur = lemma.clone();
            continue;
        }
        match strip_suffix(&cur) {
            Some(cand) if !lex.is_stopword(&cand) => cur = cand,
            _ => return cur,
        }
    }
    cur
}

fn strip_suffix(word: &str) -> Option<String> {
    let n = word.chars().count();
    if !word.is_ascii() {
        return None; // suffix rules are for English inflections only
    }
    if let Some(stem) = word.strip_suffix("ing") {
        if stem.len() >= 3 {
            return Some(undouble(stem));
        }
    }
    if let Some(stem) = word.strip_suffix("ed") {
        if stem.len() >= 3 {
            return Some(undouble(stem));
        }
    }
    if let Some(stem) = word.strip_suffix("es") {
        if stem.len() >= 3 && ends_with_sibilant(stem) {
            return Some(stem.to_string());
        }
    }
    if let Some(stem) = word.strip_suffix('s') {
        if n >= 4
            && !word.ends_with("ss")
            && !word.ends_with("us")
            && !word.ends_with("is")
        {
            return Some(stem.to_string());
        }
    }
    None
}

fn ends_with_sibilant(stem: &str) -> bool {
    stem.ends_with('s')
        || stem.ends_with('x')
        || stem.ends_with('z')
        || stem.ends_with("ch")
        || stem.ends_with("sh")
}

/// Collapse the doubled final consonant left by -ing/-ed stripping
/// (running -> runn -> run). Only letters that commonly double.
fn undouble(stem: &str) -> String {
    let bytes = stem.as_bytes();
    if bytes.len() >= 4 {
        let last = bytes[bytes.len() - 1];
        let prev = bytes[bytes.len() - 2];
        if last == prev && b"bdgmnprt".contains(&last) {
            return stem[..stem.len() - 1].to_string();
        }
    }
    stem.to_string()
}

/// Run the full pipeline over one document.
pub fn preprocess(text: &str, opts: &PreprocessOptions, lex: &Lexicons) -> Vec<String> {
    let lowered;
    let mut s: &str = if opts.lowercase {
        lowered = text.to_lowercase();
        &lowered
    } else {
        text
    };

    let stripped_urls;
    if opts.strip_urls {
        stripped_urls = url_regex().replace_all(s, " ");
        s = &stripped_urls;
    }

    let despecialed: String;
    if opts.strip_special {
        despecialed = s
            .chars()
            .map(|c| if c.is_alphanumeric() { c } else { ' ' })
            .collect();
        s = &despecialed;
    }

    s.split_whitespace()
        .filter(|t| !(opts.remove_stopwords && lex.is_stopword(t)))
        .map(|t| {
            if opts.lemmatize {
                lemmatize(t, lex)
            } else {
                t.to_string()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(text: &str) -> Vec<String> {
        preprocess(text, &PreprocessOptions::default(), Lexicons::bundled())
    }

    #[test]
    fn empty_input_is_legal() {
        assert!(pp("").is_empty());
    }

    #[test]
    fn url_stopword_lemma_example() {
        assert_eq!(pp("Visit http://a.b/c The CATS running"), vec!["cat", "run"]);
    }

    #[test]
    fn digits_survive() {
        assert_eq!(pp("2024 Election!!!"), vec!["2024", "election"]);
    }

    #[test]
    fn www_prefixed_spans_are_urls() {
        assert_eq!(pp("go www.example.com/x now"), vec!["go"]);
    }

    #[test]
    fn suffix_rules() {
        let lex = Lexicons::bundled();
        assert_eq!(lemmatize("cats", lex), "cat");
        assert_eq!(lemmatize("running", lex), "run");
        assert_eq!(lemmatize("stopped", lex), "stop");
        assert_eq!(lemmatize("boxes", lex), "box");
        assert_eq!(lemmatize("classes", lex), "class");
        assert_eq!(lemmatize("falling", lex), "fall");
        assert_eq!(lemmatize("election", lex), "election");
        assert_eq!(lemmatize("news", lex), "news");
        // candidate "the" is a stopword: rejected, token kept
        assert_eq!(lemmatize("thes", lex), "thes");
    }

    #[test]
    fn lemma_table_values_are_fixed_points_and_not_stopwords() {
        let lex = Lexicons::bundled();
        for (form, lemma) in lex.lemma_table() {
            assert!(
                !lex.is_stopword(lemma),
                "lemma {lemma} (from {form}) is a stopword"
            );
            assert_eq!(
                &lemmatize(lemma, lex),
                lemma,
                "lemma {lemma} (from {form}) is not a fixed point"
            );
        }
    }

    #[test]
    fn idempotent_on_own_output() {
        let samples = [
            "Visit http://a.b/c The CATS running",
            "Breaking NEWS!!! 500 people fled the cities, officials said...",
            "www.foo.org linked studies & policies; children's stories",
            "added odds fitted ads classes theses",
        ];
        for s in samples {
            let once = pp(s);
            let twice = pp(&once.join(" "));
            assert_eq!(once, twice, "not idempotent on {s:?}");
        }
    }
}
