//! Generates a corpus with a planted quality signal, runs the full pipeline
//! and prints the correlation tables. Pass a seed and a quality correlation
//! to explore, e.g. `cargo run --example synthetic_pipeline -- 5 0.0`.

use book_impact::analysis::AspectCategoryMap;
use book_impact::corpus::Tokenizer;
use book_impact::pipeline::{correlation_report, prepare, train_model, PipelineOptions};
use book_impact::synth::{generate, SynthSpec};
use book_impact::Hyperparams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let rho = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.9);

    let synth = generate(&SynthSpec { seed, quality_correlation: rho, n_disciplines: 2, n_books: 80, ..SynthSpec::default() })?;
    println!("{} books, {} reviews", synth.corpus.len(), synth.corpus.review_count());
    let tokenizer = Tokenizer::new(synth.corpus.tokenizer_config())?;
    let model = train_model(&synth.training, &tokenizer, 2000, Hyperparams::default(), 0.0)?.model;

    let partitions = prepare(&synth.corpus, &model, &synth.lexicon, &synth.vocab, &PipelineOptions::default())?;
    let report = correlation_report(&partitions, &AspectCategoryMap::default(), Default::default())?;
    for table in [&report.scores, &report.factors, &report.aspects, &report.categories] {
        println!("\n{}", table.render());
    }
    Ok(())
}
