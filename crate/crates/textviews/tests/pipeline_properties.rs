//! Corpus-level invariants of the preprocessing and vectorization pipeline.

use numcore::Prng;
use textviews::{
    count_vectorize, embed_average, preprocess, tfidf_transform, EmbeddingTable, Lexicons,
    PreprocessOptions, Vocabulary,
};

/// Seeded generator of messy strings: words, digits, URLs, punctuation,
/// some non-ASCII.
fn fuzz_string(rng: &mut Prng) -> String {
    const PIECES: &[&str] = &[
        "the", "CATS", "running", "2024", "Election!!!", "http://a.b/c", "www.site.org/x",
        "breaking", "NEWS:", "officials,", "said...", "stories", "études", "Ünïté", "#tag",
        "@user", "a", "I", "added", "classes", "wasn't", "U.S.", "re-elected", "vote;",
        "falling", "stopped", "policies", "---", "***", "x", "thes", "going",
    ];
    let n = rng.next_below(12) as usize;
    let mut parts = Vec::with_capacity(n);
    for _ in 0..n {
        parts.push(PIECES[rng.next_below(PIECES.len() as u64) as usize]);
    }
    parts.join(" ")
}

#[test]
fn preprocess_idempotent_over_fuzz_corpus() {
    let opts = PreprocessOptions::default();
    let lex = Lexicons::bundled();
    let mut rng = Prng::seed_from_u64(20_240_001);
    for i in 0..1000 {
        let s = fuzz_string(&mut rng);
        let once = preprocess(&s, &opts, lex);
        let twice = preprocess(&once.join(" "), &opts, lex);
        assert_eq!(once, twice, "iteration {i}: input {s:?}");
    }
}

#[test]
fn vocabulary_order_is_reproducible() {
    let lex = Lexicons::bundled();
    let opts = PreprocessOptions::default();
    let texts = [
        "the cats are running from the dogs",
        "dogs and cats vote in the 2024 election",
        "election officials said cats won",
        "dogs dispute the election results",
    ];
    let corpus: Vec<Vec<String>> = texts.iter().map(|t| preprocess(t, &opts, lex)).collect();
    let a = Vocabulary::fit(&corpus).unwrap();
    let b = Vocabulary::fit(&corpus).unwrap();
    assert_eq!(a.terms(), b.terms());
    assert_eq!(a.doc_freq(), b.doc_freq());
}

#[test]
fn tfidf_rows_have_unit_or_zero_norm() {
    let mut rng = Prng::seed_from_u64(7);
    let lex = Lexicons::bundled();
    let opts = PreprocessOptions::default();
    let corpus: Vec<Vec<String>> = (0..30)
        .map(|_| preprocess(&fuzz_string(&mut rng), &opts, lex))
        .collect();
    let vocab = match Vocabulary::fit(&corpus) {
        Ok(v) => v,
        Err(_) => return,
    };
    let counts = count_vectorize(&corpus, &vocab);
    let t = tfidf_transform(&counts, &vocab);
    for i in 0..t.docs() {
        let norm: f64 = t.matrix.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(
            (norm - 1.0).abs() < 1e-9 || norm == 0.0,
            "row {i} norm {norm}"
        );
    }
}

#[test]
fn count_row_sum_equals_in_vocab_token_count() {
    let lex = Lexicons::bundled();
    let opts = PreprocessOptions::default();
    let texts = [
        "cats cats dogs vote vote vote",
        "dogs vote once",
        "unrelatedwordxyz",
    ];
    let corpus: Vec<Vec<String>> = texts.iter().map(|t| preprocess(t, &opts, lex)).collect();
    let vocab = Vocabulary::fit(&corpus).unwrap();
    let counts = count_vectorize(&corpus, &vocab);
    for (i, doc) in corpus.iter().enumerate() {
        let in_vocab = doc.iter().filter(|t| vocab.index_of(t).is_some()).count();
        let row_sum: f64 = counts.matrix.row(i).iter().sum();
        assert_eq!(row_sum as usize, in_vocab, "doc {i}");
    }
}

#[test]
fn embed_average_norm_bounded_by_max_row_norm() {
    let table = EmbeddingTable::parse("a 3.0 4.0\nb 0.0 1.0\nc -3.0 -4.0", None, "mem").unwrap();
    let max_norm = 5.0;
    let tokens: Vec<String> = ["a", "b", "c", "a", "oov"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for k in 0..=tokens.len() {
        let avg = embed_average(&tokens[..k], &table);
        let norm: f64 = avg.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(norm <= max_norm + 1e-12, "k={k} norm {norm}");
    }
}
