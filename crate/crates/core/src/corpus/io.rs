use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Book, Corpus, CorpusError, Review, RowDiagnostic, Tokenizer, TokenizerConfig};

#[derive(Debug, Serialize, Deserialize)]
struct ReviewRecord {
    review_id: String,
    book_id: String,
    star: i64,
    text: String,
    helpful_yes: i64,
    helpful_total: i64,
}

#[derive(Debug, Serialize, Deserialize)]
struct BookRecord {
    book_id: String,
    title: String,
    discipline: String,
    citation_count: i64,
}

fn open(path: &Path) -> Result<fs::File, CorpusError> {
    fs::File::open(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

/// Loads, validates and tokenizes a corpus from a JSON Lines review file and
/// a CSV book file. Every malformed row is reported, not just the first.
pub fn load_corpus(reviews_path: &Path, books_path: &Path, config: &TokenizerConfig) -> Result<Corpus, CorpusError> {
    let tokenizer = Tokenizer::new(config)?;
    let books_source = books_path.display().to_string();
    let reviews_source = reviews_path.display().to_string();
    let books = read_books_csv(open(books_path)?, &books_source);
    let reviews = read_reviews_jsonl(open(reviews_path)?, &reviews_source, &tokenizer);

    let (mut books, mut diagnostics) = books?;
    let (reviews, review_diagnostics) = reviews?;
    diagnostics.extend(review_diagnostics);

    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for (i, book) in books.iter().enumerate() {
        index.insert(book.book_id.clone(), i);
    }
    for (line, review) in reviews {
        match index.get(&review.book_id) {
            Some(&i) => books[i].reviews.push(review),
            None => diagnostics.push(RowDiagnostic {
                source: reviews_source.clone(),
                line,
                message: format!("book_id {} does not resolve to a book", review.book_id),
            }),
        }
    }
    if !diagnostics.is_empty() {
        return Err(CorpusError::InvalidRows(diagnostics));
    }
    Corpus::new(books, config.clone())
}

fn csv_io_error(source: &str, e: csv::Error) -> CorpusError {
    CorpusError::Io { path: source.into(), source: std::io::Error::other(e) }
}

type Rows<T> = Result<(T, Vec<RowDiagnostic>), CorpusError>;

/// Parses the book CSV, returning the valid books and a diagnostic per bad row.
pub fn read_books_csv(reader: impl Read, source: &str) -> Rows<Vec<Book>> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::Headers).from_reader(reader);
    let mut books = Vec::new();
    let mut diagnostics = Vec::new();
    let mut seen = BTreeSet::new();
    let headers = csv.headers().map_err(|e| csv_io_error(source, e))?.clone();
    for result in csv.records() {
        let diag = |line: usize, message: String| RowDiagnostic { source: source.to_string(), line, message };
        let row = match result {
            Ok(row) => row,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line() as usize);
                diagnostics.push(diag(line, e.to_string()));
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line() as usize);
        let record: BookRecord = match row.deserialize(Some(&headers)) {
            Ok(r) => r,
            Err(e) => {
                diagnostics.push(diag(line, e.to_string()));
                continue;
            }
        };
        if record.citation_count < 0 {
            diagnostics.push(diag(line, format!("negative citation_count {}", record.citation_count)));
            continue;
        }
        if !seen.insert(record.book_id.clone()) {
            diagnostics.push(diag(line, format!("duplicate book_id {}", record.book_id)));
            continue;
        }
        books.push(Book {
            book_id: record.book_id,
            title: record.title,
            discipline: record.discipline,
            citation_count: record.citation_count as u64,
            reviews: Vec::new(),
        });
    }
    Ok((books, diagnostics))
}

/// Parses the review JSON Lines file into `(line, review)` pairs.
pub fn read_reviews_jsonl(reader: impl Read, source: &str, tokenizer: &Tokenizer) -> Rows<Vec<(usize, Review)>> {
    let mut reviews = Vec::new();
    let mut diagnostics = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let diag = |message: String| RowDiagnostic { source: source.to_string(), line: line_no, message };
        let line = line.map_err(|e| CorpusError::Io { path: source.into(), source: e })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ReviewRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                diagnostics.push(diag(e.to_string()));
                continue;
            }
        };
        if !(1..=5).contains(&record.star) {
            diagnostics.push(diag(format!("review {}: star {} outside [1, 5]", record.review_id, record.star)));
            continue;
        }
        if record.helpful_yes < 0 || record.helpful_total < 0 {
            diagnostics.push(diag(format!("review {}: negative helpfulness votes", record.review_id)));
            continue;
        }
        if record.helpful_yes > record.helpful_total {
            diagnostics.push(diag(format!(
                "review {}: helpful_yes {} exceeds helpful_total {}",
                record.review_id, record.helpful_yes, record.helpful_total
            )));
            continue;
        }
        if !seen.insert(record.review_id.clone()) {
            diagnostics.push(diag(format!("duplicate review_id {}", record.review_id)));
            continue;
        }
        let review = Review::new(
            record.review_id,
            record.book_id,
            record.star as u8,
            record.text,
            u32::try_from(record.helpful_yes).unwrap_or(u32::MAX),
            u32::try_from(record.helpful_total).unwrap_or(u32::MAX),
            tokenizer,
        );
        match review {
            Ok(r) => reviews.push((line_no, r)),
            Err(e) => diagnostics.push(diag(e.to_string())),
        }
    }
    Ok((reviews, diagnostics))
}

/// Writes every review as one JSON object per line, in corpus order.
pub fn write_reviews_jsonl(corpus: &Corpus, mut writer: impl Write) -> std::io::Result<()> {
    for review in corpus.reviews() {
        let record = ReviewRecord {
            review_id: review.review_id.clone(),
            book_id: review.book_id.clone(),
            star: review.star.into(),
            text: review.text.clone(),
            helpful_yes: review.helpful_yes.into(),
            helpful_total: review.helpful_total.into(),
        };
        serde_json::to_writer(&mut writer, &record)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_books_csv(corpus: &Corpus, writer: impl Write) -> std::io::Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    for book in corpus.books() {
        csv.serialize(BookRecord {
            book_id: book.book_id.clone(),
            title: book.title.clone(),
            discipline: book.discipline.clone(),
            citation_count: book.citation_count as i64,
        })?;
    }
    csv.flush()
}

/// Reads a word list: one entry per line, blank lines skipped.
pub fn load_dictionary(path: &Path) -> Result<Vec<String>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BOOKS: &str = "book_id,title,discipline,citation_count\n\
                         b1,Principles of Economics,economics,2261\n\
                         b2,Old Tang Records,literature,346\n";

    fn reviews(lines: &[&str]) -> String {
        lines.join("\n") + "\n"
    }

    fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
        let path = dir.join(name);
        fs::write(&path, body).unwrap();
        path
    }

    #[test]
    fn loads_two_books_three_reviews() {
        let dir = tempfile::tempdir().unwrap();
        let books = write(dir.path(), "books.csv", BOOKS);
        let revs = write(
            dir.path(),
            "reviews.jsonl",
            &reviews(&[
                r#"{"review_id":"r1","book_id":"b1","star":5,"text":"The content is amazing.","helpful_yes":359,"helpful_total":365}"#,
                r#"{"review_id":"r2","book_id":"b1","star":4,"text":"Good translation","helpful_yes":0,"helpful_total":0}"#,
                r#"{"review_id":"r3","book_id":"b2","star":5,"text":"Printing and paper is of too bad a quality.","helpful_yes":9,"helpful_total":10}"#,
            ]),
        );
        let corpus = load_corpus(&revs, &books, &TokenizerConfig::default()).unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.review_count(), 3);
        let r3 = &corpus.book("b2").unwrap().reviews[0];
        assert_eq!((r3.helpful_yes, r3.helpful_total), (9, 10));
        assert_eq!(corpus.book("b1").unwrap().reviews[0].tokens, ["the", "content", "is", "amazing"]);
    }

    #[test]
    fn star_out_of_range_names_the_row() {
        let dir = tempfile::tempdir().unwrap();
        let books = write(dir.path(), "books.csv", BOOKS);
        let revs = write(
            dir.path(),
            "reviews.jsonl",
            &reviews(&[
                r#"{"review_id":"r1","book_id":"b1","star":5,"text":"ok","helpful_yes":0,"helpful_total":0}"#,
                r#"{"review_id":"r2","book_id":"b1","star":6,"text":"ok","helpful_yes":0,"helpful_total":0}"#,
            ]),
        );
        let err = load_corpus(&revs, &books, &TokenizerConfig::default()).unwrap_err();
        let CorpusError::InvalidRows(rows) = err else { panic!("expected row diagnostics") };
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].line, 2);
        assert!(rows[0].message.contains("star 6"), "{}", rows[0].message);
    }

    #[test]
    fn reports_every_bad_row() {
        let dir = tempfile::tempdir().unwrap();
        let books = write(dir.path(), "books.csv", &(BOOKS.to_string() + "b3,Bad,econ,-1\n"));
        let revs = write(
            dir.path(),
            "reviews.jsonl",
            &reviews(&[
                r#"{"review_id":"r1","book_id":"nope","star":5,"text":"ok","helpful_yes":0,"helpful_total":0}"#,
                r#"{"review_id":"r2","book_id":"b1","star":3,"text":"ok","helpful_yes":4,"helpful_total":3}"#,
                r#"not json"#,
            ]),
        );
        let CorpusError::InvalidRows(rows) = load_corpus(&revs, &books, &TokenizerConfig::default()).unwrap_err()
        else {
            panic!("expected row diagnostics")
        };
        let lines: Vec<(usize, bool)> = rows.iter().map(|d| (d.line, d.source.ends_with("books.csv"))).collect();
        assert_eq!(lines, [(4, true), (2, false), (3, false), (1, false)]);
        assert!(rows[3].message.contains("does not resolve"));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let books = write(dir.path(), "books.csv", BOOKS);
        let err = load_corpus(&dir.path().join("absent.jsonl"), &books, &TokenizerConfig::default()).unwrap_err();
        assert!(matches!(err, CorpusError::Io { .. }));
    }

    #[test]
    fn dictionary_file_skips_blank_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = write(dir.path(), "dict.txt", "内容\n\n 很好 \n");
        assert_eq!(load_dictionary(&path).unwrap(), ["内容", "很好"]);
    }
}
