//! Text model for unlabeled domain corpora: tokens, sentences, documents,
//! the rule-based tokenizer and sentence splitter, corpus readers and
//! corpus-level counts.
//!
//! Raw paragraphs may carry wiki-style link markup (`[[Hugo Chávez]]` or
//! `[[target|label]]`). The markup is stripped during segmentation and the
//! tokens it covered get [`Token::has_hyperlink`] set.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::ops::{Add, AddAssign, Range};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Characters split off the edges of a whitespace chunk as their own tokens.
const EDGE_PUNCT: &[char] = &[
    '.', ',', ';', ':', '!', '?', '\'', '"', '(', ')', '[', ']', '{', '}',
];

const TERMINALS: &[&str] = &[".", "!", "?"];
const CLOSERS: &[&str] = &["\"", "'", ")", "]", "}"];
const OPENERS: &[&str] = &["\"", "'", "(", "[", "{"];

/// Lowercased stems (trailing period removed) that never end a sentence.
const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "mt", "ft", "vs", "etc", "e.g", "i.e", "cf",
    "al", "inc", "ltd", "co", "corp", "bros", "no", "nos", "vol", "vols", "fig", "figs", "pp",
    "ed", "eds", "gen", "gov", "sen", "rep", "rev", "hon", "pres", "lt", "col", "sgt", "capt",
    "cmdr", "adm", "maj", "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct",
    "nov", "dec", "u.s", "u.k", "u.n", "e.u", "a.m", "p.m", "approx", "dept", "est", "univ",
    "assn", "ave", "blvd",
];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    #[serde(default)]
    pub has_hyperlink: bool,
}

impl Token {
    /// Builds a token, rejecting empty text and text containing whitespace.
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.is_empty() {
            return Err(Error::Invalid("token text is empty".into()));
        }
        if text.chars().any(char::is_whitespace) {
            return Err(Error::Invalid(format!(
                "token text {text:?} contains whitespace"
            )));
        }
        Ok(Token {
            text,
            has_hyperlink: false,
        })
    }

    pub fn linked(mut self) -> Self {
        self.has_hyperlink = true;
        self
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub doc_id: String,
    pub index: usize,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(doc_id: impl Into<String>, index: usize, tokens: Vec<Token>) -> Self {
        Sentence {
            doc_id: doc_id.into(),
            index,
            tokens,
        }
    }

    /// Builds a sentence from already-tokenized text (one token per
    /// whitespace-separated field). Intended for fixtures and readers of
    /// pre-tokenized files.
    pub fn from_words(doc_id: impl Into<String>, index: usize, text: &str) -> Self {
        let tokens = text
            .split_whitespace()
            .map(|w| Token {
                text: w.to_string(),
                has_hyperlink: false,
            })
            .collect();
        Sentence::new(doc_id, index, tokens)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.text.as_str())
    }

    /// Token texts joined by single spaces.
    pub fn to_line(&self) -> String {
        self.texts().collect::<Vec<_>>().join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub domain: String,
    pub paragraphs: Vec<String>,
    pub sentences: Vec<Sentence>,
}

impl Document {
    /// Builds a document and segments its paragraphs.
    pub fn new(id: impl Into<String>, domain: impl Into<String>, paragraphs: Vec<String>) -> Self {
        let mut doc = Document {
            id: id.into(),
            domain: domain.into(),
            paragraphs,
            sentences: Vec::new(),
        };
        doc.sentences = segment(&doc);
        doc
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn stats(&self) -> CorpusStats {
        CorpusStats {
            paragraph_count: self.paragraphs.len() as u64,
            sentence_count: self.sentences.len() as u64,
            token_count: self.token_count() as u64,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub paragraph_count: u64,
    pub sentence_count: u64,
    pub token_count: u64,
}

impl Add for CorpusStats {
    type Output = CorpusStats;

    fn add(self, rhs: CorpusStats) -> CorpusStats {
        CorpusStats {
            paragraph_count: self.paragraph_count + rhs.paragraph_count,
            sentence_count: self.sentence_count + rhs.sentence_count,
            token_count: self.token_count + rhs.token_count,
        }
    }
}

impl AddAssign for CorpusStats {
    fn add_assign(&mut self, rhs: CorpusStats) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for CorpusStats {
    fn sum<I: Iterator<Item = CorpusStats>>(iter: I) -> Self {
        iter.fold(CorpusStats::default(), Add::add)
    }
}

fn is_clitic(s: &str) -> bool {
    matches!(s, "'s" | "'S" | "n't" | "N'T")
}

/// Byte ranges of the tokens of `text`.
fn token_ranges(text: &str) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for chunk in text.split_whitespace() {
        // split_whitespace yields subslices in order, so find is exact here
        let offset = pos + text[pos..].find(chunk).expect("chunk comes from text");
        pos = offset + chunk.len();
        split_chunk(chunk, offset, &mut out);
    }
    out
}

fn split_chunk(chunk: &str, offset: usize, out: &mut Vec<Range<usize>>) {
    let mut start = 0;
    let mut end = chunk.len();

    let mut trailing = Vec::new();
    while start < end && !is_clitic(&chunk[start..end]) {
        let c = chunk[start..end].chars().next_back().unwrap();
        if !EDGE_PUNCT.contains(&c) {
            break;
        }
        trailing.push(offset + end - c.len_utf8()..offset + end);
        end -= c.len_utf8();
    }

    while start < end && !is_clitic(&chunk[start..end]) {
        let c = chunk[start..end].chars().next().unwrap();
        if !EDGE_PUNCT.contains(&c) {
            break;
        }
        out.push(offset + start..offset + start + c.len_utf8());
        start += c.len_utf8();
    }

    if start < end {
        let core = &chunk[start..end];
        let clitic_len = if core.len() > 3 && (core.ends_with("n't") || core.ends_with("N'T")) {
            3
        } else if core.len() > 2 && (core.ends_with("'s") || core.ends_with("'S")) {
            2
        } else {
            0
        };
        if clitic_len > 0 {
            out.push(offset + start..offset + end - clitic_len);
            out.push(offset + end - clitic_len..offset + end);
        } else {
            out.push(offset + start..offset + end);
        }
    }

    out.extend(trailing.into_iter().rev());
}

/// Splits raw text into tokens: whitespace split, edge punctuation split off
/// one character at a time, and the clitics `'s` / `n't` separated.
pub fn tokenize(text: &str) -> Vec<Token> {
    token_ranges(text)
        .into_iter()
        .map(|r| Token {
            text: text[r].to_string(),
            has_hyperlink: false,
        })
        .collect()
}

/// Removes `[[...]]` link markup, returning the clean text and the byte
/// ranges (in clean coordinates) that were inside links. For
/// `[[target|label]]` only the label is kept. Unterminated markup is left
/// as literal text.
fn strip_links(text: &str) -> (String, Vec<Range<usize>>) {
    if !text.contains("[[") {
        return (text.to_string(), Vec::new());
    }
    let mut clean = String::with_capacity(text.len());
    let mut links = Vec::new();
    let mut rest = text;
    while let Some(open) = rest.find("[[") {
        let Some(close) = rest[open + 2..].find("]]") else {
            break;
        };
        clean.push_str(&rest[..open]);
        let inner = &rest[open + 2..open + 2 + close];
        let label = inner.rsplit('|').next().unwrap_or(inner);
        let start = clean.len();
        clean.push_str(label);
        links.push(start..clean.len());
        rest = &rest[open + 2 + close + 2..];
    }
    clean.push_str(rest);
    (clean, links)
}

/// Tokenizes text that may contain link markup; tokens overlapping a link
/// are flagged with `has_hyperlink`.
pub fn tokenize_with_links(text: &str) -> Vec<Token> {
    let (clean, links) = strip_links(text);
    token_ranges(&clean)
        .into_iter()
        .map(|r| Token {
            text: clean[r.clone()].to_string(),
            has_hyperlink: links.iter().any(|l| l.start < r.end && r.start < l.end),
        })
        .collect()
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

fn is_abbreviation(stem: &str) -> bool {
    let mut chars = stem.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        // initials such as "J. K. Rowling"
        if c.is_uppercase() {
            return true;
        }
    }
    let lower = stem.to_lowercase();
    ABBREVIATIONS.contains(&lower.as_str())
}

/// Splits one paragraph into sentences of tokens.
fn split_paragraph(paragraph: &str) -> Vec<Vec<Token>> {
    let (clean, links) = strip_links(paragraph);
    let ranges = token_ranges(&clean);
    let text = |i: usize| &clean[ranges[i].clone()];
    let space_after = |i: usize| {
        clean[ranges[i].end..]
            .chars()
            .next()
            .is_none_or(char::is_whitespace)
    };
    let attached = |i: usize| i > 0 && ranges[i - 1].end == ranges[i].start;

    let n = ranges.len();
    let mut bounds = Vec::new();
    let mut i = 0;
    while i < n {
        if !TERMINALS.contains(&text(i)) {
            i += 1;
            continue;
        }
        let mut last = i;
        while last + 1 < n && !space_after(last) && CLOSERS.contains(&text(last + 1)) {
            last += 1;
        }
        let ends = if last + 1 == n {
            true
        } else if !space_after(last) {
            false
        } else {
            let next = last + 1;
            let upper_next = starts_upper(text(next))
                || (OPENERS.contains(&text(next)) && next + 1 < n && starts_upper(text(next + 1)));
            let abbreviated = text(i) == "." && attached(i) && is_abbreviation(text(i - 1));
            upper_next && !abbreviated
        };
        if ends {
            bounds.push(last + 1);
        }
        i = last + 1;
    }
    if bounds.last() != Some(&n) && n > 0 {
        bounds.push(n);
    }

    let mut out = Vec::with_capacity(bounds.len());
    let mut start = 0;
    for end in bounds {
        let tokens = (start..end)
            .map(|k| {
                let r = ranges[k].clone();
                Token {
                    has_hyperlink: links.iter().any(|l| l.start < r.end && r.start < l.end),
                    text: clean[r].to_string(),
                }
            })
            .collect();
        out.push(tokens);
        start = end;
    }
    out
}

/// Segments a document's paragraphs into sentences with dense indices.
///
/// A sentence ends at `.`, `!` or `?` (plus any attached closing quotes or
/// brackets) when followed by whitespace and an uppercase token, or at the
/// end of its paragraph. A period directly after a known abbreviation or a
/// single-letter initial does not end a sentence.
pub fn segment(document: &Document) -> Vec<Sentence> {
    document
        .paragraphs
        .iter()
        .flat_map(|p| split_paragraph(p))
        .enumerate()
        .map(|(index, tokens)| Sentence::new(document.id.clone(), index, tokens))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CorpusFormat {
    /// One paragraph per line; a blank line starts a new document.
    #[default]
    Plain,
    /// One `{"id", "domain", "text"}` record per line.
    Jsonl,
    /// One pre-tokenized sentence per line; a blank line starts a new
    /// document. This is the format the corpus extractors write.
    Lines,
}

#[derive(Deserialize)]
struct DocumentRecord {
    id: String,
    #[serde(default)]
    domain: String,
    text: String,
}

/// Lazy document reader over any buffered source.
pub struct CorpusReader<R> {
    lines: std::io::Lines<R>,
    format: CorpusFormat,
    origin: String,
    domain: String,
    line_no: usize,
    ordinal: usize,
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(reader: R, format: CorpusFormat, origin: impl Into<String>) -> Self {
        CorpusReader {
            lines: reader.lines(),
            format,
            origin: origin.into(),
            domain: String::new(),
            line_no: 0,
            ordinal: 0,
        }
    }

    /// Domain tag given to documents from formats that do not carry one.
    pub fn with_domain(mut self, domain: impl Into<String>) -> Self {
        self.domain = domain.into();
        self
    }

    fn next_line(&mut self) -> Option<Result<String>> {
        let line = self.lines.next()?;
        self.line_no += 1;
        Some(line.map_err(|e| Error::parse(&self.origin, self.line_no, e.to_string())))
    }

    fn next_block(&mut self) -> Option<Result<Document>> {
        let mut block = Vec::new();
        loop {
            match self.next_line() {
                None => break,
                Some(Err(e)) => return Some(Err(e)),
                Some(Ok(line)) => {
                    if line.trim().is_empty() {
                        if block.is_empty() {
                            continue;
                        }
                        break;
                    }
                    block.push(line);
                }
            }
        }
        if block.is_empty() {
            return None;
        }
        let id = self.ordinal.to_string();
        self.ordinal += 1;
        let doc = match self.format {
            CorpusFormat::Lines => {
                let sentences = block
                    .iter()
                    .enumerate()
                    .map(|(i, line)| Sentence::new(id.clone(), i, tokenize(line)))
                    .collect();
                Document {
                    id,
                    domain: self.domain.clone(),
                    paragraphs: block,
                    sentences,
                }
            }
            _ => Document::new(id, self.domain.clone(), block),
        };
        Some(Ok(doc))
    }

    fn next_record(&mut self) -> Option<Result<Document>> {
        loop {
            let line = match self.next_line()? {
                Ok(line) => line,
                Err(e) => return Some(Err(e)),
            };
            if line.trim().is_empty() {
                continue;
            }
            let record: DocumentRecord = match serde_json::from_str(&line) {
                Ok(r) => r,
                Err(e) => {
                    return Some(Err(Error::parse(&self.origin, self.line_no, e.to_string())))
                }
            };
            let paragraphs = record
                .text
                .split('\n')
                .filter(|p| !p.trim().is_empty())
                .map(str::to_string)
                .collect();
            return Some(Ok(Document::new(record.id, record.domain, paragraphs)));
        }
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<Document>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.format {
            CorpusFormat::Jsonl => self.next_record(),
            CorpusFormat::Plain | CorpusFormat::Lines => self.next_block(),
        }
    }
}

/// Opens a corpus file for lazy reading.
pub fn load_corpus(
    path: impl AsRef<Path>,
    format: CorpusFormat,
) -> Result<CorpusReader<BufReader<File>>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(CorpusReader::new(
        BufReader::new(file),
        format,
        path.display().to_string(),
    ))
}

/// Sums paragraph, sentence and token counts over a document stream,
/// holding one document at a time.
pub fn corpus_stats<I>(corpus: I) -> Result<CorpusStats>
where
    I: IntoIterator<Item = Result<Document>>,
{
    corpus
        .into_iter()
        .try_fold(CorpusStats::default(), |acc, doc| Ok(acc + doc?.stats()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(Token::as_str).collect()
    }

    fn doc(paragraphs: &[&str]) -> Document {
        Document::new(
            "d",
            "test",
            paragraphs.iter().map(|s| s.to_string()).collect(),
        )
    }

    #[test]
    fn tokenize_examples() {
        assert!(tokenize("").is_empty());
        assert_eq!(
            texts(&tokenize("Mars has four.")),
            ["Mars", "has", "four", "."]
        );
        assert_eq!(
            texts(&tokenize("Chávez's party")),
            ["Chávez", "'s", "party"]
        );
    }

    #[test]
    fn tokenize_edges_and_clitics() {
        assert_eq!(
            texts(&tokenize("(\"Don't!\") isn't")),
            ["(", "\"", "Do", "n't", "!", "\"", ")", "is", "n't"]
        );
        assert_eq!(texts(&tokenize("'s.")), ["'s", "."]);
        assert_eq!(
            texts(&tokenize("3.5 U.S. e-mail")),
            ["3.5", "U.S", ".", "e-mail"]
        );
        assert_eq!(texts(&tokenize("...")), [".", ".", "."]);
    }

    #[test]
    fn tokenize_is_idempotent_on_joined_output() {
        let s = "He said: \"Chávez's party (PSUV) won't lose...\" [sic]";
        let once = tokenize(s);
        let joined = texts(&once).join(" ");
        assert_eq!(tokenize(&joined), once);
    }

    #[test]
    fn token_rejects_whitespace() {
        assert!(Token::new("").is_err());
        assert!(Token::new("a b").is_err());
        assert!(Token::new("ab").is_ok());
    }

    #[test]
    fn link_markup_flags_tokens() {
        let toks = tokenize_with_links("In [[Hugo Chávez]]'s era, [[Caracas|the capital]] grew.");
        let flagged: Vec<_> = toks
            .iter()
            .filter(|t| t.has_hyperlink)
            .map(Token::as_str)
            .collect();
        assert_eq!(flagged, ["Hugo", "Chávez", "the", "capital"]);
        assert_eq!(
            texts(&toks),
            ["In", "Hugo", "Chávez", "'s", "era", ",", "the", "capital", "grew", "."]
        );
        // unterminated markup stays literal
        assert_eq!(texts(&tokenize_with_links("a [[b")), ["a", "[", "[", "b"]);
    }

    #[test]
    fn segment_examples() {
        assert!(segment(&doc(&[])).is_empty());

        let s = segment(&doc(&["A b. C d."]));
        assert_eq!(s.len(), 2);
        assert_eq!(texts(&s[0].tokens), ["A", "b", "."]);
        assert_eq!(texts(&s[1].tokens), ["C", "d", "."]);
        assert_eq!((s[0].index, s[1].index), (0, 1));

        let s = segment(&doc(&["A b c"]));
        assert_eq!(s.len(), 1);
        assert_eq!(texts(&s[0].tokens), ["A", "b", "c"]);
    }

    #[test]
    fn segment_respects_abbreviations_and_quotes() {
        let s = segment(&doc(&[
            "Dr. Smith met J. K. Rowling in the U.S. in May. \"Great!\" She left. it was 3.5 km.",
        ]));
        let lines: Vec<_> = s.iter().map(Sentence::to_line).collect();
        assert_eq!(
            lines,
            [
                "Dr . Smith met J . K . Rowling in the U.S . in May .",
                "\" Great ! \"",
                "She left . it was 3.5 km ."
            ]
        );
    }

    #[test]
    fn segment_indices_dense_across_paragraphs() {
        let d = doc(&["One. Two.", "Three"]);
        let idx: Vec<_> = d.sentences.iter().map(|s| s.index).collect();
        assert_eq!(idx, [0, 1, 2]);
        assert!(d.sentences.iter().all(|s| s.doc_id == "d"));
    }

    #[test]
    fn stats_examples() {
        assert_eq!(
            corpus_stats(std::iter::empty()).unwrap(),
            CorpusStats::default()
        );
        let d = doc(&["A b. D e f g"]);
        assert_eq!(
            corpus_stats([Ok(d)]).unwrap(),
            CorpusStats {
                paragraph_count: 1,
                sentence_count: 2,
                token_count: 7
            }
        );
    }

    #[test]
    fn plain_reader_splits_documents_on_blank_lines() {
        let docs: Vec<_> = CorpusReader::new("p1\np2\n\np3".as_bytes(), CorpusFormat::Plain, "t")
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(docs.len(), 2);
        assert_eq!(docs[0].paragraphs.len(), 2);
        assert_eq!(docs[1].paragraphs.len(), 1);
        assert_eq!((docs[0].id.as_str(), docs[1].id.as_str()), ("0", "1"));

        let empty = CorpusReader::new("".as_bytes(), CorpusFormat::Plain, "t").count();
        assert_eq!(empty, 0);
    }

    #[test]
    fn jsonl_reader_preserves_order_and_reports_line() {
        let input = "{\"id\":\"b\",\"domain\":\"music\",\"text\":\"X y.\\nZ.\"}\n{\"id\":\"a\",\"domain\":\"music\",\"text\":\"Q\"}\n";
        let docs: Vec<_> = CorpusReader::new(input.as_bytes(), CorpusFormat::Jsonl, "t")
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(
            docs.iter().map(|d| d.id.as_str()).collect::<Vec<_>>(),
            ["b", "a"]
        );
        assert_eq!(docs[0].paragraphs.len(), 2);
        assert_eq!(docs[0].domain, "music");

        let bad = "{\"id\":\"a\",\"text\":\"x\"}\nnot json\n";
        let err = corpus_stats(CorpusReader::new(
            bad.as_bytes(),
            CorpusFormat::Jsonl,
            "bad.jsonl",
        ))
        .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn lines_reader_does_not_resegment() {
        let docs: Vec<_> =
            CorpusReader::new("A b . C d .\nE f\n\nG".as_bytes(), CorpusFormat::Lines, "t")
                .collect::<Result<_>>()
                .unwrap();
        assert_eq!(docs[0].sentences.len(), 2);
        assert_eq!(docs[0].sentences[0].len(), 6);
        assert_eq!(docs[1].sentences[0].doc_id, "1");
    }

    #[test]
    fn missing_file_is_an_error() {
        assert!(load_corpus("/nonexistent/corpus.txt", CorpusFormat::Plain).is_err());
    }
}
