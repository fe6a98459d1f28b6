//! Trains the review polarity classifier on a generated labeled set,
//! reports holdout accuracy and classifies a few unseen reviews.

use book_impact::corpus::{Tokenizer, TokenizerConfig};
use book_impact::pipeline::train_model;
use book_impact::synth::{generate, SynthSpec};
use book_impact::Hyperparams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let synth = generate(&SynthSpec { n_training_docs: 800, ..SynthSpec::default() })?;
    let tokenizer = Tokenizer::new(&TokenizerConfig::default())?;
    let trained = train_model(&synth.training, &tokenizer, 2000, Hyperparams::default(), 0.25)?;
    println!(
        "trained on {} docs, {} features, holdout accuracy {:.3} on {} docs",
        trained.n_train,
        trained.model.feature_space.len(),
        trained.holdout_accuracy.unwrap_or(f64::NAN),
        trained.n_holdout
    );
    println!("model hash {}", trained.model.hash()?);

    for text in ["a brilliant and insightful book", "dull content and awful printing", "the price"] {
        let tokens = tokenizer.tokenize(text);
        let model = &trained.model;
        println!("{:>+8.4} {:?}  {text}", model.decision_score(&tokens), model.classify(&tokens));
    }
    Ok(())
}
