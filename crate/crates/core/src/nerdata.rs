//! Labeled NER data: CoNLL-style files, BIO tags, split statistics,
//! few-shot subsampling and joint source/target training sets.

use std::collections::BTreeMap;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Token;
use crate::error::{Error, Result};
use crate::gazetteer::{EntityMention, MentionSource};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledSentence {
    pub tokens: Vec<Token>,
    pub tags: Vec<String>,
}

impl LabeledSentence {
    /// Builds a sentence, checking lengths and the BIO scheme.
    pub fn new(tokens: Vec<Token>, tags: Vec<String>) -> Result<Self> {
        if tokens.len() != tags.len() {
            return Err(Error::Invalid(format!(
                "{} tokens but {} tags",
                tokens.len(),
                tags.len()
            )));
        }
        if let Err(bad) = validate_bio(&tags) {
            return Err(Error::Invalid(format!(
                "invalid BIO tag {:?} at token {}",
                tags[bad[0]], bad[0]
            )));
        }
        Ok(LabeledSentence { tokens, tags })
    }

    /// Convenience constructor from `(token, tag)` pairs.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Self> {
        let tokens = pairs
            .iter()
            .map(|(t, _)| Token::new(*t))
            .collect::<Result<Vec<_>>>()?;
        let tags = pairs.iter().map(|(_, t)| t.to_string()).collect();
        LabeledSentence::new(tokens, tags)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Entity spans as `(start, end, type)`.
    pub fn spans(&self) -> Vec<(usize, usize, &str)> {
        spans_from_tags(&self.tags)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tag<'a> {
    Outside,
    Begin(&'a str),
    Inside(&'a str),
}

fn parse_tag(tag: &str) -> Option<Tag<'_>> {
    if tag == "O" {
        return Some(Tag::Outside);
    }
    let (prefix, ty) = tag.split_once('-')?;
    if ty.is_empty() || ty.chars().any(char::is_whitespace) {
        return None;
    }
    match prefix {
        "B" => Some(Tag::Begin(ty)),
        "I" => Some(Tag::Inside(ty)),
        _ => None,
    }
}

/// Returns the positions of tags that are malformed or that continue an
/// entity (`I-X`) not opened by `B-X`/`I-X` directly before.
pub fn validate_bio<S: AsRef<str>>(tags: &[S]) -> std::result::Result<(), Vec<usize>> {
    let mut bad = Vec::new();
    let mut prev: Option<Tag> = Some(Tag::Outside);
    for (i, tag) in tags.iter().enumerate() {
        let cur = parse_tag(tag.as_ref());
        match cur {
            None => bad.push(i),
            Some(Tag::Inside(ty)) => {
                let continues =
                    matches!(prev, Some(Tag::Begin(p)) | Some(Tag::Inside(p)) if p == ty);
                if !continues {
                    bad.push(i);
                }
            }
            Some(_) => {}
        }
        prev = cur;
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

/// Maximal `B-X I-X*` runs as `(start, end, X)`. A stray `I-X` opens a new
/// run, matching conlleval's reading of invalid input.
pub fn spans_from_tags<S: AsRef<str>>(tags: &[S]) -> Vec<(usize, usize, &str)> {
    let mut out = Vec::new();
    let mut open: Option<(usize, &str)> = None;
    for (i, tag) in tags.iter().enumerate() {
        let tag = parse_tag(tag.as_ref()).unwrap_or(Tag::Outside);
        match tag {
            Tag::Inside(ty) if open.is_some_and(|(_, t)| t == ty) => {}
            _ => {
                if let Some((start, ty)) = open.take() {
                    out.push((start, i, ty));
                }
                match tag {
                    Tag::Begin(ty) | Tag::Inside(ty) => open = Some((i, ty)),
                    Tag::Outside => {}
                }
            }
        }
    }
    if let Some((start, ty)) = open {
        out.push((start, tags.len(), ty));
    }
    out
}

/// BIO tags for a sentence of `len` tokens with the given disjoint spans.
pub fn tags_from_spans(len: usize, spans: &[(usize, usize, &str)]) -> Vec<String> {
    let mut tags = vec!["O".to_string(); len];
    for &(start, end, ty) in spans {
        tags[start] = format!("B-{ty}");
        for tag in &mut tags[start + 1..end] {
            *tag = format!("I-{ty}");
        }
    }
    tags
}

/// Gold mentions of a labeled sentence. The sentence carries no document
/// identity, so `doc_id` is empty and `sentence_index` is 0.
pub fn extract_entities(s: &LabeledSentence) -> Vec<EntityMention> {
    s.spans()
        .into_iter()
        .map(|(start, end, ty)| EntityMention {
            doc_id: String::new(),
            sentence_index: 0,
            start,
            end,
            entity_type: ty.to_string(),
            source: MentionSource::Gold,
        })
        .collect()
}

/// Parses CoNLL-style text: one `token<SEP>tag` line per token (extra
/// middle columns, as in CoNLL-2003, are ignored), blank lines between
/// sentences, `-DOCSTART-` lines skipped.
pub fn parse_conll_str(text: &str, origin: &str) -> Result<Vec<LabeledSentence>> {
    let mut out = Vec::new();
    let mut tokens = Vec::new();
    let mut tags = Vec::new();
    let mut lines = Vec::new();

    let mut flush = |tokens: &mut Vec<Token>, tags: &mut Vec<String>, lines: &mut Vec<usize>| {
        if tokens.is_empty() {
            return Ok(());
        }
        if let Err(bad) = validate_bio(tags) {
            let position = bad[0];
            return Err(Error::Bio {
                origin: origin.to_string(),
                line: lines[position],
                position,
                tag: tags[position].clone(),
            });
        }
        out.push(LabeledSentence {
            tokens: std::mem::take(tokens),
            tags: std::mem::take(tags),
        });
        lines.clear();
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("-DOCSTART-") {
            flush(&mut tokens, &mut tags, &mut lines)?;
            continue;
        }
        let fields: Vec<&str> = line.split([' ', '\t']).filter(|f| !f.is_empty()).collect();
        if fields.len() < 2 {
            return Err(Error::parse(origin, line_no, "expected \"token<SEP>tag\""));
        }
        tokens.push(Token {
            text: fields[0].to_string(),
            has_hyperlink: false,
        });
        tags.push(fields[fields.len() - 1].to_string());
        lines.push(line_no);
    }
    flush(&mut tokens, &mut tags, &mut lines)?;
    Ok(out)
}

pub fn parse_conll(path: impl AsRef<Path>) -> Result<Vec<LabeledSentence>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_conll_str(&text, &path.display().to_string())
}

/// Space-separated `token tag` lines, one blank line after each sentence.
pub fn serialize_conll(sentences: &[LabeledSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        for (tok, tag) in s.tokens.iter().zip(&s.tags) {
            out.push_str(&tok.text);
            out.push(' ');
            out.push_str(tag);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

pub fn write_conll(path: impl AsRef<Path>, sentences: &[LabeledSentence]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, serialize_conll(sentences)).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeCount {
    pub count: usize,
    pub percentage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitStats {
    pub sentence_count: usize,
    pub mention_count: usize,
    pub per_type: BTreeMap<String, TypeCount>,
}

pub fn dataset_stats(split: &[LabeledSentence]) -> SplitStats {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for s in split {
        for (_, _, ty) in s.spans() {
            *counts.entry(ty.to_string()).or_default() += 1;
        }
    }
    let total: usize = counts.values().sum();
    let per_type = counts
        .into_iter()
        .map(|(ty, count)| {
            let percentage = 100.0 * count as f64 / total as f64;
            (ty, TypeCount { count, percentage })
        })
        .collect();
    SplitStats {
        sentence_count: split.len(),
        mention_count: total,
        per_type,
    }
}

/// Draws `n` sentences uniformly without replacement, keeping their
/// original relative order.
pub fn subsample(train: &[LabeledSentence], n: usize, seed: u64) -> Result<Vec<LabeledSentence>> {
    if n > train.len() {
        return Err(Error::Config(format!(
            "cannot sample {n} sentences from a split of {}",
            train.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, train.len(), n).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| train[i].clone()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointConfig {
    pub multiplier: usize,
}

impl Default for JointConfig {
    fn default() -> Self {
        JointConfig { multiplier: 100 }
    }
}

/// Source sentences followed by the target sentences repeated
/// `cfg.multiplier` times.
pub fn build_joint(
    source: &[LabeledSentence],
    target: &[LabeledSentence],
    cfg: &JointConfig,
) -> Result<Vec<LabeledSentence>> {
    if cfg.multiplier == 0 {
        return Err(Error::Config("joint multiplier must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(source.len() + cfg.multiplier * target.len());
    out.extend_from_slice(source);
    for _ in 0..cfg.multiplier {
        out.extend_from_slice(target);
    }
    Ok(out)
}

/// Reads a `raw<TAB>display` label mapping.
pub fn load_label_map(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>> {
    let path = path.as_ref();
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (raw, display) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(&origin, i + 1, "expected \"raw<TAB>display\""))?;
        map.insert(raw.trim().to_string(), display.trim().to_string());
    }
    Ok(map)
}
