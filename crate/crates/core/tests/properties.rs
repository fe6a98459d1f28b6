use std::sync::OnceLock;

use proptest::prelude::*;

use book_impact::aspect::{aspect_polarity, aspect_value, aspect_value_weighted};
use book_impact::corpus::{write_books_csv, write_reviews_jsonl, Tokenizer};
use book_impact::entropy::score;
use book_impact::factors::Direction;
use book_impact::polarity::{build_feature_space, train, LabeledDoc};
use book_impact::{
    filter_books, load_corpus, pearson, significance, Book, Corpus, FactorMatrix, Hyperparams, Label, PolarityModel, Review,
    Scope, SentimentLexicon, TokenizerConfig,
};

fn corpus_from_counts(counts: &[usize]) -> Corpus {
    let books = counts
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let id = format!("b{i:02}");
            let reviews =
                (0..n).map(|r| Review::from_tokens(format!("{id}-{r:03}"), &id, 3, ["ok"], 0, 0).unwrap()).collect();
            Book { book_id: id, title: String::new(), discipline: format!("d{}", i % 2), citation_count: i as u64, reviews }
        })
        .collect();
    Corpus::new(books, TokenizerConfig::default()).unwrap()
}

fn review_text() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z ,.!?\"']{0,40}",
        "\\PC{0,30}",
        Just("翻译很好，价格太贵。".to_string()),
        Just("line\nbreak, \"quoted\" text".to_string()),
    ]
}

proptest! {
    #[test]
    fn filter_is_idempotent_and_strict(counts in prop::collection::vec(0usize..25, 0..12), min in 0usize..15) {
        let corpus = corpus_from_counts(&counts);
        let once = filter_books(&corpus, min);
        prop_assert_eq!(&filter_books(&once, min), &once);
        prop_assert!(once.books().iter().all(|b| b.reviews.len() > min));
        prop_assert_eq!(once.len(), counts.iter().filter(|&&c| c > min).count());
    }

    #[test]
    fn corpus_files_round_trip(
        books in prop::collection::vec(
            ("[A-Za-z ,\"]{0,12}", 0u64..1000, prop::collection::vec((1u8..=5, review_text(), 0u32..20, 0u32..20), 0..4)),
            1..5,
        )
    ) {
        let config = TokenizerConfig::default();
        let tokenizer = Tokenizer::new(&config).unwrap();
        let books: Vec<Book> = books
            .into_iter()
            .enumerate()
            .map(|(i, (title, citations, reviews))| {
                let id = format!("B{i}");
                let reviews = reviews
                    .into_iter()
                    .enumerate()
                    .map(|(r, (star, text, a, b))| {
                        Review::new(format!("{id}-{r}"), &id, star, text, a.min(b), a.max(b), &tokenizer).unwrap()
                    })
                    .collect();
                Book { book_id: id, title, discipline: "x".into(), citation_count: citations, reviews }
            })
            .collect();
        let corpus = Corpus::new(books, config.clone()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (reviews_path, books_path) = (dir.path().join("r.jsonl"), dir.path().join("b.csv"));
        write_reviews_jsonl(&corpus, std::fs::File::create(&reviews_path).unwrap()).unwrap();
        write_books_csv(&corpus, std::fs::File::create(&books_path).unwrap()).unwrap();
        let loaded = load_corpus(&reviews_path, &books_path, &config).unwrap();
        prop_assert_eq!(&loaded, &corpus);

        let mut again = Vec::new();
        write_reviews_jsonl(&loaded, &mut again).unwrap();
        prop_assert_eq!(again, std::fs::read(&reviews_path).unwrap());
    }
}

fn toy_model() -> &'static PolarityModel {
    static MODEL: OnceLock<PolarityModel> = OnceLock::new();
    MODEL.get_or_init(|| {
        let rows = [
            ("good great content", Label::Positive),
            ("great book good price", Label::Positive),
            ("excellent paper good", Label::Positive),
            ("bad awful content", Label::Negative),
            ("awful price bad paper", Label::Negative),
            ("terrible bad book", Label::Negative),
        ];
        let docs: Vec<LabeledDoc> = rows
            .iter()
            .map(|(t, l)| LabeledDoc { tokens: t.split(' ').map(String::from).collect(), label: *l })
            .collect();
        let tokens: Vec<Vec<String>> = docs.iter().map(|d| d.tokens.clone()).collect();
        train(&docs, build_feature_space(&tokens, 2000).unwrap(), Hyperparams::default()).unwrap()
    })
}

const VOCAB: [&str; 12] =
    ["good", "great", "bad", "awful", "content", "price", "paper", "book", "excellent", "terrible", "the", "unseen"];

fn token_seq(max: usize) -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(&VOCAB[..]), 0..max)
}

fn lexicon() -> SentimentLexicon {
    SentimentLexicon::new(
        [("good", 1), ("great", 1), ("excellent", 1), ("bad", -1), ("awful", -1), ("terrible", -1)],
        &TokenizerConfig::default(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn classification_ignores_token_order(tokens in token_seq(20), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let model = toy_model();
        let doc: Vec<String> = tokens.iter().map(|t| t.to_string()).collect();
        let mut shuffled = doc.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(model.decision_score(&doc), model.decision_score(&shuffled));
        prop_assert_eq!(model.classify(&doc), model.classify(&shuffled));
    }

    #[test]
    fn aspect_values_are_bounded(
        sps in prop::collection::vec(-1i8..=1, 0..40),
        h in prop::collection::vec(0.0f64..=1.0, 40),
    ) {
        let plain = aspect_value(sps.iter().copied());
        let weighted = aspect_value_weighted(sps.iter().copied().zip(h.iter().copied()));
        prop_assert!((-1.0..=1.0).contains(&plain));
        prop_assert!((-1.0..=1.0).contains(&weighted));
    }

    #[test]
    fn negating_the_lexicon_negates_polarity(tokens in token_seq(25), scope_sentence in any::<bool>()) {
        let review = Review::from_tokens("r", "b", 3, tokens, 0, 0).unwrap();
        let scope = if scope_sentence { Scope::Sentence } else { Scope::Review };
        let lex = lexicon();
        for aspect in ["content", "price", "paper"] {
            let sp = aspect_polarity(&review, aspect, &lex, scope).sp;
            prop_assert_eq!(aspect_polarity(&review, aspect, &lex.negated(), scope).sp, -sp);
        }
    }
}

fn matrix_strategy() -> impl Strategy<Value = FactorMatrix> {
    (2usize..20, 1usize..5).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(-50.0f64..50.0, m), n),
            prop::collection::vec(any::<bool>(), m),
        )
            .prop_map(move |(values, cost)| {
                FactorMatrix::new(
                    (0..n).map(|i| format!("b{i:02}")).collect(),
                    (0..m).map(|j| format!("f{j}")).collect(),
                    values,
                    cost.into_iter().map(|c| if c { Direction::Cost } else { Direction::Benefit }).collect(),
                )
                .unwrap()
            })
    })
}

proptest! {
    #[test]
    fn weights_sum_to_one_and_scores_lie_in_unit_interval(matrix in matrix_strategy()) {
        let report = score(&matrix).unwrap();
        prop_assert!((report.weights.weight.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(report.weights.weight.iter().all(|&w| w >= 0.0));
        prop_assert!(report.scores.scores.iter().all(|&s| (0.0..=1.0 + 1e-12).contains(&s)));
    }

    #[test]
    fn constant_column_keeps_ranking(matrix in matrix_strategy(), constant in -10.0f64..10.0) {
        let before = score(&matrix).unwrap();
        let mut widened = matrix.clone();
        widened.factor_names.push("constant".into());
        widened.directions.push(Direction::Benefit);
        for row in widened.values.iter_mut() {
            row.push(constant);
        }
        let after = score(&widened).unwrap();
        if !before.weights.uniform_fallback {
            prop_assert_eq!(&after.scores.ranks, &before.scores.ranks);
        }
    }

    #[test]
    fn pearson_is_symmetric_and_affine_invariant(
        pairs in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..40),
        scale in 0.1f64..10.0,
        shift in -50.0f64..50.0,
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let Ok(r) = pearson(&x, &y) else { return Ok(()) };
        prop_assert!((pearson(&y, &x).unwrap() - r).abs() <= 1e-12);
        let moved: Vec<f64> = x.iter().map(|v| scale * v + shift).collect();
        prop_assert!((pearson(&moved, &y).unwrap() - r).abs() <= 1e-9);
        let flipped: Vec<f64> = x.iter().map(|v| -scale * v + shift).collect();
        prop_assert!((pearson(&flipped, &y).unwrap() + r).abs() <= 1e-9);
    }

    #[test]
    fn p_value_decreases_with_abs_r(a in 0.0f64..1.0, b in 0.0f64..1.0, n in 3usize..500, sign in any::<bool>()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let s = if sign { 1.0 } else { -1.0 };
        let p_lo = significance(s * lo, n).unwrap().p_two_tailed;
        let p_hi = significance(s * hi, n).unwrap().p_two_tailed;
        prop_assert!(p_hi <= p_lo, "p({hi}) = {p_hi} > p({lo}) = {p_lo}");
        prop_assert!((0.0..=1.0).contains(&p_lo));
    }
}
