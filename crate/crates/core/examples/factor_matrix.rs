//! Builds the factor matrix of every combination on a generated corpus and
//! writes the richest one as CSV to stdout.

use book_impact::aspect::{extract_candidates, top_aspects};
use book_impact::factors::{helpfulness, FactorTable};
use book_impact::pipeline::train_model;
use book_impact::synth::{generate, SynthSpec};
use book_impact::{filter_books, CombinationSpec, FactorOptions, Hyperparams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let synth = generate(&SynthSpec { n_books: 8, seed: 7, ..SynthSpec::default() })?;
    let tokenizer = book_impact::corpus::Tokenizer::new(synth.corpus.tokenizer_config())?;
    let model = train_model(&synth.training, &tokenizer, 2000, Hyperparams::default(), 0.0)?.model;

    let corpus = filter_books(&synth.corpus, 10);
    let aspects = top_aspects(&extract_candidates(corpus.reviews(), &synth.vocab)?, 10, "synthetic")?;
    println!("aspects: {:?}", aspects.words().collect::<Vec<_>>());

    let first = &corpus.books()[0].reviews[0];
    println!("helpfulness of {}: {}/{} -> {:.5}", first.review_id, first.helpful_yes, first.helpful_total, helpfulness(first, false));

    let table = FactorTable::compute(&corpus, &model, &aspects, &synth.lexicon, FactorOptions::default())?;
    for spec in CombinationSpec::all() {
        println!("{spec:<34} {:?}", table.matrix(spec).factor_names);
    }
    let spec: CombinationSpec = "holder_and_evaluator/macro_micro".parse()?;
    table.matrix(spec).write_csv(std::io::stdout().lock())?;
    Ok(())
}
