//! Whitespace and dictionary tokenization, with sentence indices.

use book_impact::corpus::{Tokenizer, TokenizerConfig};
use book_impact::tokenize;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = "The translation is superb. The price, however, is too high!";
    println!("{:?}", tokenize(text, &TokenizerConfig::default())?);

    let stream = Tokenizer::new(&TokenizerConfig::default())?.tokenize_with_sentences(text);
    for (token, sentence) in stream.tokens.iter().zip(&stream.sentences) {
        println!("  sentence {sentence}: {token}");
    }

    // Unsegmented text: greedy longest match against a word list.
    let dictionary = TokenizerConfig::dictionary(["翻译", "质量", "很好", "价格", "太贵"]);
    println!("{:?}", tokenize("翻译质量很好，价格太贵。", &dictionary)?);
    Ok(())
}
