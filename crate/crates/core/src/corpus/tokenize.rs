use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// Characters that close a sentence when they are also members of the
/// configured punctuation set.
pub const SENTENCE_BOUNDARIES: [char; 8] = ['.', '!', '?', ';', '。', '！', '？', '；'];

const DEFAULT_PUNCTUATION: &str = ".,!?;:\"()[]{}<>。！？；，、：“”‘’（）《》【】…";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TokenizerMode {
    #[default]
    Whitespace,
    DictionaryLongestMatch,
}

/// How review text becomes tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub mode: TokenizerMode,
    pub lowercase: bool,
    /// Characters treated as separators and stripped from the output.
    #[serde(with = "char_set")]
    pub punctuation: BTreeSet<char>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dictionary: Option<Vec<String>>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            mode: TokenizerMode::Whitespace,
            lowercase: true,
            punctuation: DEFAULT_PUNCTUATION.chars().collect(),
            dictionary: None,
        }
    }
}

impl TokenizerConfig {
    pub fn dictionary(words: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            mode: TokenizerMode::DictionaryLongestMatch,
            dictionary: Some(words.into_iter().map(Into::into).collect()),
            ..Self::default()
        }
    }

    pub fn is_sentence_boundary(&self, c: char) -> bool {
        SENTENCE_BOUNDARIES.contains(&c) && self.punctuation.contains(&c)
    }

    /// Applies the same case folding the tokenizer applies to text.
    pub fn normalize_word(&self, word: &str) -> String {
        let word = word.trim();
        if self.lowercase {
            word.to_lowercase()
        } else {
            word.to_string()
        }
    }
}

/// A tokenizer compiled from a [`TokenizerConfig`].
#[derive(Debug, Clone)]
pub struct Tokenizer {
    config: TokenizerConfig,
    dictionary: HashSet<String>,
    longest_entry: usize,
}

/// Tokens of one text plus the sentence index of every token.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    pub sentences: Vec<u32>,
}

impl Tokenizer {
    pub fn new(config: &TokenizerConfig) -> Result<Self, CorpusError> {
        let mut dictionary = HashSet::new();
        if config.mode == TokenizerMode::DictionaryLongestMatch {
            for word in config.dictionary.iter().flatten() {
                let word = config.normalize_word(word);
                if !word.is_empty() {
                    dictionary.insert(word);
                }
            }
            if dictionary.is_empty() {
                return Err(CorpusError::EmptyDictionary);
            }
        }
        let longest_entry = dictionary.iter().map(|w| w.chars().count()).max().unwrap_or(0);
        Ok(Self { config: config.clone(), dictionary, longest_entry })
    }

    pub fn config(&self) -> &TokenizerConfig {
        &self.config
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        self.tokenize_with_sentences(text).tokens
    }

    pub fn tokenize_with_sentences(&self, text: &str) -> TokenStream {
        let text = if self.config.lowercase { text.to_lowercase() } else { text.to_string() };
        let mut out = TokenStream::default();
        let mut sentence = 0u32;
        let mut sentence_has_tokens = false;
        let mut chunk = String::new();

        for c in text.chars() {
            let separator = c.is_whitespace() || self.config.punctuation.contains(&c);
            if !separator {
                chunk.push(c);
                continue;
            }
            if !chunk.is_empty() {
                self.emit_chunk(&chunk, sentence, &mut out);
                sentence_has_tokens = true;
                chunk.clear();
            }
            if self.config.is_sentence_boundary(c) && sentence_has_tokens {
                sentence += 1;
                sentence_has_tokens = false;
            }
        }
        if !chunk.is_empty() {
            self.emit_chunk(&chunk, sentence, &mut out);
        }
        out
    }

    fn emit_chunk(&self, chunk: &str, sentence: u32, out: &mut TokenStream) {
        match self.config.mode {
            TokenizerMode::Whitespace => {
                out.tokens.push(chunk.to_string());
                out.sentences.push(sentence);
            }
            TokenizerMode::DictionaryLongestMatch => {
                let chars: Vec<char> = chunk.chars().collect();
                let mut start = 0;
                while start < chars.len() {
                    let max_len = self.longest_entry.min(chars.len() - start);
                    // A single character is always emitted, matched or not.
                    let mut len = 1;
                    for candidate in (2..=max_len).rev() {
                        let word: String = chars[start..start + candidate].iter().collect();
                        if self.dictionary.contains(&word) {
                            len = candidate;
                            break;
                        }
                    }
                    out.tokens.push(chars[start..start + len].iter().collect());
                    out.sentences.push(sentence);
                    start += len;
                }
            }
        }
    }
}

/// Tokenizes `text` under `config`.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Result<Vec<String>, CorpusError> {
    Ok(Tokenizer::new(config)?.tokenize(text))
}

mod char_set {
    use std::collections::BTreeSet;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(set: &BTreeSet<char>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&set.iter().collect::<String>())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeSet<char>, D::Error> {
        Ok(String::deserialize(d)?.chars().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whitespace_mode_lowercases_and_splits() {
        let tokens = tokenize("The content of this book is amazing", &TokenizerConfig::default()).unwrap();
        assert_eq!(tokens, ["the", "content", "of", "this", "book", "is", "amazing"]);
    }

    #[test]
    fn empty_text_has_no_tokens() {
        assert!(tokenize("", &TokenizerConfig::default()).unwrap().is_empty());
        assert!(tokenize("  .,! ", &TokenizerConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn punctuation_is_stripped() {
        let tokens = tokenize("Interesting, but the price is expensive!", &TokenizerConfig::default()).unwrap();
        assert_eq!(tokens, ["interesting", "but", "the", "price", "is", "expensive"]);
    }

    #[test]
    fn dictionary_mode_is_greedy_longest_match() {
        let mut config = TokenizerConfig::dictionary(["AB", "ABC", "D"]);
        config.lowercase = false;
        assert_eq!(tokenize("ABCD", &config).unwrap(), ["ABC", "D"]);
    }

    #[test]
    fn dictionary_mode_emits_unmatched_singletons() {
        let mut config = TokenizerConfig::dictionary(["内容", "很好"]);
        config.lowercase = false;
        assert_eq!(tokenize("这本书内容很好。", &config).unwrap(), ["这", "本", "书", "内容", "很好"]);
    }

    #[test]
    fn dictionary_mode_requires_dictionary() {
        let config = TokenizerConfig { mode: TokenizerMode::DictionaryLongestMatch, ..TokenizerConfig::default() };
        assert!(matches!(tokenize("abc", &config), Err(CorpusError::EmptyDictionary)));
        let config = TokenizerConfig::dictionary(Vec::<String>::new());
        assert!(matches!(tokenize("abc", &config), Err(CorpusError::EmptyDictionary)));
    }

    #[test]
    fn sentence_indices_follow_boundaries() {
        let tokenizer = Tokenizer::new(&TokenizerConfig::default()).unwrap();
        let stream = tokenizer.tokenize_with_sentences("Good content. Bad price!! ok; 很好。");
        assert_eq!(stream.tokens, ["good", "content", "bad", "price", "ok", "很好"]);
        assert_eq!(stream.sentences, [0, 0, 1, 1, 2, 3]);
    }

    #[test]
    fn config_serde_round_trip() {
        let config = TokenizerConfig::dictionary(["a", "b"]);
        let json = serde_json::to_string(&config).unwrap();
        let back: TokenizerConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(config, back);
    }
}
