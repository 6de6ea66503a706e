//! Pre-training corpus construction: entity-level, task-level and
//! integrated corpora selected from a domain corpus, plus seeded fractional
//! sampling.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Sentence;
use crate::error::{Error, Result};
use crate::gazetteer::{find_mentions, EntityMention, Gazetteer, MentionSource, TypeHierarchy};
use crate::seed::sentence_unit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectorConfig {
    /// Mentions a sentence needs to enter the entity-level corpus.
    pub min_mentions: usize,
    /// Specialized-type mentions a sentence needs to enter the task-level corpus.
    pub min_specialized: usize,
    /// Copies of the task-level corpus in the integrated corpus.
    pub task_upsample: usize,
}

impl Default for SelectorConfig {
    fn default() -> Self {
        SelectorConfig {
            min_mentions: 2,
            min_specialized: 1,
            task_upsample: 2,
        }
    }
}

impl SelectorConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("min_mentions", self.min_mentions),
            ("min_specialized", self.min_specialized),
            ("task_upsample", self.task_upsample),
        ] {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }
}

/// Source of entity mentions for a sentence.
pub trait MentionProvider: Sync {
    fn mentions(&self, sentence: &Sentence) -> Vec<EntityMention>;
}

/// Mentions found by dictionary matching.
#[derive(Debug, Clone, Copy)]
pub struct GazetteerMatcher<'a> {
    pub gazetteer: &'a Gazetteer,
    pub hierarchy: &'a TypeHierarchy,
}

impl<'a> GazetteerMatcher<'a> {
    pub fn new(gazetteer: &'a Gazetteer, hierarchy: &'a TypeHierarchy) -> Self {
        GazetteerMatcher {
            gazetteer,
            hierarchy,
        }
    }
}

impl MentionProvider for GazetteerMatcher<'_> {
    fn mentions(&self, sentence: &Sentence) -> Vec<EntityMention> {
        find_mentions(sentence, self.gazetteer, self.hierarchy)
    }
}

#[derive(Debug, Deserialize, Serialize)]
struct MentionRecord {
    doc_id: String,
    sentence_index: usize,
    start: usize,
    end: usize,
    #[serde(rename = "type")]
    entity_type: String,
}

/// Mentions supplied from outside, e.g. by a trained tagger, keyed by
/// `(doc_id, sentence_index)`.
#[derive(Debug, Clone, Default)]
pub struct ExternalMentions {
    by_sentence: HashMap<(String, usize), Vec<EntityMention>>,
}

impl ExternalMentions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, mention: EntityMention) {
        self.by_sentence
            .entry((mention.doc_id.clone(), mention.sentence_index))
            .or_default()
            .push(mention);
    }

    pub fn len(&self) -> usize {
        self.by_sentence.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_sentence.is_empty()
    }

    pub fn from_jsonl<R: BufRead>(reader: R, origin: &str) -> Result<Self> {
        let mut out = ExternalMentions::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let r: MentionRecord = serde_json::from_str(&line)
                .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
            if r.start >= r.end {
                return Err(Error::parse(
                    origin,
                    line_no,
                    "mention start must be below end",
                ));
            }
            out.insert(EntityMention {
                doc_id: r.doc_id,
                sentence_index: r.sentence_index,
                start: r.start,
                end: r.end,
                entity_type: r.entity_type,
                source: MentionSource::External,
            });
        }
        for ms in out.by_sentence.values_mut() {
            ms.sort_by_key(|m| (m.start, m.end));
        }
        Ok(out)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_jsonl(BufReader::new(file), &path.display().to_string())
    }
}

impl MentionProvider for ExternalMentions {
    fn mentions(&self, sentence: &Sentence) -> Vec<EntityMention> {
        self.by_sentence
            .get(&(sentence.doc_id.clone(), sentence.index))
            .map(|ms| {
                ms.iter()
                    .filter(|m| m.end <= sentence.len())
                    .cloned()
                    .collect()
            })
            .unwrap_or_default()
    }
}

pub fn is_entity_level<P: MentionProvider + ?Sized>(
    s: &Sentence,
    provider: &P,
    cfg: &SelectorConfig,
) -> bool {
    provider.mentions(s).len() >= cfg.min_mentions
}

pub fn is_task_level<P: MentionProvider + ?Sized>(
    s: &Sentence,
    provider: &P,
    specialized: &BTreeSet<String>,
    cfg: &SelectorConfig,
) -> bool {
    provider
        .mentions(s)
        .iter()
        .filter(|m| specialized.contains(&m.entity_type))
        .count()
        >= cfg.min_specialized
}

/// Sentences with at least `cfg.min_mentions` mentions, in input order.
pub fn select_entity_level<'a, I, P>(
    corpus: I,
    provider: &'a P,
    cfg: SelectorConfig,
) -> impl Iterator<Item = Sentence> + 'a
where
    I: IntoIterator<Item = Sentence>,
    I::IntoIter: 'a,
    P: MentionProvider + ?Sized,
{
    corpus
        .into_iter()
        .filter(move |s| is_entity_level(s, provider, &cfg))
}

/// Sentences with at least `cfg.min_specialized` mentions of a specialized
/// type, in input order. Fails when `specialized` is empty.
pub fn select_task_level<'a, I, P>(
    corpus: I,
    provider: &'a P,
    specialized: &'a BTreeSet<String>,
    cfg: SelectorConfig,
) -> Result<impl Iterator<Item = Sentence> + 'a>
where
    I: IntoIterator<Item = Sentence>,
    I::IntoIter: 'a,
    P: MentionProvider + ?Sized,
{
    if specialized.is_empty() {
        return Err(Error::Config(
            "task-level selection needs at least one specialized type".into(),
        ));
    }
    Ok(corpus
        .into_iter()
        .filter(move |s| is_task_level(s, provider, specialized, &cfg)))
}

/// The entity-level corpus followed by `cfg.task_upsample` copies of the
/// task-level corpus. Sentences are duplicated, not reweighted.
pub fn build_integrated<E, T>(
    entity_level: E,
    task_level: T,
    cfg: SelectorConfig,
) -> impl Iterator<Item = Sentence>
where
    E: IntoIterator<Item = Sentence>,
    T: IntoIterator<Item = Sentence>,
    T::IntoIter: Clone,
{
    let task = task_level.into_iter();
    entity_level
        .into_iter()
        .chain(std::iter::repeat_n(task, cfg.task_upsample).flatten())
}

fn check_percent(percent: f64) -> Result<()> {
    if !(0.0..=100.0).contains(&percent) {
        return Err(Error::Config(format!(
            "percent {percent} is outside [0, 100]"
        )));
    }
    Ok(())
}

/// Whether `s` survives fractional sampling at `percent` under `seed`.
pub fn keep_in_sample(s: &Sentence, percent: f64, seed: u64) -> bool {
    percent >= 100.0 || sentence_unit(seed, &s.doc_id, s.index) < percent / 100.0
}

/// Keeps each sentence independently with probability `percent / 100`,
/// decided by a hash of `(seed, doc_id, index)`.
pub fn sample_fraction<I>(
    corpus: I,
    percent: f64,
    seed: u64,
) -> Result<impl Iterator<Item = Sentence>>
where
    I: IntoIterator<Item = Sentence>,
{
    check_percent(percent)?;
    Ok(corpus
        .into_iter()
        .filter(move |s| keep_in_sample(s, percent, seed)))
}

pub fn token_count<'a, I: IntoIterator<Item = &'a Sentence>>(sentences: I) -> usize {
    sentences.into_iter().map(Sentence::len).sum()
}

/// Writes sentences one per line, with a blank line whenever the document
/// changes or a new section starts.
pub struct CorpusWriter<W: Write> {
    out: W,
    last_doc: Option<String>,
    pending_break: bool,
    sentences: usize,
    tokens: usize,
}

impl<W: Write> CorpusWriter<W> {
    pub fn new(out: W) -> Self {
        CorpusWriter {
            out,
            last_doc: None,
            pending_break: false,
            sentences: 0,
            tokens: 0,
        }
    }

    pub fn write(&mut self, s: &Sentence) -> Result<()> {
        let new_doc = self.last_doc.as_deref() != Some(s.doc_id.as_str());
        if self.sentences > 0 && (new_doc || self.pending_break) {
            self.out.write_all(b"\n")?;
        }
        self.out.write_all(s.to_line().as_bytes())?;
        self.out.write_all(b"\n")?;
        if new_doc {
            self.last_doc = Some(s.doc_id.clone());
        }
        self.pending_break = false;
        self.sentences += 1;
        self.tokens += s.len();
        Ok(())
    }

    /// Forces a document boundary before the next sentence.
    pub fn section_break(&mut self) {
        self.pending_break = true;
    }

    pub fn sentences(&self) -> usize {
        self.sentences
    }

    pub fn tokens(&self) -> usize {
        self.tokens
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}
