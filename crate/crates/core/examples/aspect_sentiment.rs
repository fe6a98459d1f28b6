use book_impact::aspect::{aspect_polarity, aspect_value, aspect_value_weighted, polarity_from_contributions, Contribution};
use book_impact::corpus::{Review, Tokenizer, TokenizerConfig};
use book_impact::{Scope, SentimentLexicon};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A positive word five tokens away outweighs a negative one ten away,
    // and a closer negative word wins against a farther positive one.
    let far = [Contribution::new("interesting", 1, 5), Contribution::new("expensive", -1, 10)];
    let near = [Contribution::new("interesting", 1, 3), Contribution::new("expensive", -1, 2)];
    println!("sp = {:+} and {:+}", polarity_from_contributions(&far), polarity_from_contributions(&near));

    let config = TokenizerConfig::default();
    let lexicon = SentimentLexicon::new([("good", 1), ("amazing", 1), ("bad", -1), ("expensive", -1)], &config)?;
    let tokenizer = Tokenizer::new(&config)?;
    let review = Review::new(
        "r1",
        "b1",
        4,
        "The content is amazing. Shame the price is bad and the paper is expensive.",
        7,
        9,
        &tokenizer,
    )?;
    for aspect in ["content", "price", "paper"] {
        for scope in [Scope::Review, Scope::Sentence] {
            let p = aspect_polarity(&review, aspect, &lexicon, scope);
            let terms: Vec<String> = p.contributions.iter().map(|c| format!("{}@{}", c.word, c.distance)).collect();
            println!("{aspect:>8} {scope:?}: sp = {:+} from {}", p.sp, terms.join(" "));
        }
    }

    let sps = [1, 1, -1, 0];
    let helpfulness = [0.9, 0.5, 0.2, 1.0];
    println!("VAB = {:.4}", aspect_value(sps));
    println!("VAB' = {:.4}", aspect_value_weighted(sps.into_iter().zip(helpfulness)));
    Ok(())
}
