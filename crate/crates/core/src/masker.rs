//! Masked-language-model example generation with token-level or span-level
//! masking.
//!
//! Span-level masking selects positions exactly like token-level masking,
//! then [`spanify`] migrates each isolated masked position next to its
//! nearest masked neighbour so that masks form contiguous runs. Runs that
//! were already contiguous are left alone. Replacement (mask symbol, random
//! word, or original) is applied afterwards and is identical for both
//! strategies.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Sentence, Token};
use crate::error::{Error, Result};
use crate::seed::sentence_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaskStrategy {
    #[default]
    Token,
    Span,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskingConfig {
    pub mask_rate: f64,
    pub mask_token_prob: f64,
    pub random_token_prob: f64,
    pub keep_prob: f64,
    pub strategy: MaskStrategy,
    pub seed: u64,
    pub min_sentence_len: usize,
    pub mask_symbol: String,
}

impl Default for MaskingConfig {
    fn default() -> Self {
        MaskingConfig {
            mask_rate: 0.15,
            mask_token_prob: 0.8,
            random_token_prob: 0.1,
            keep_prob: 0.1,
            strategy: MaskStrategy::Token,
            seed: 0,
            min_sentence_len: 5,
            mask_symbol: "[MASK]".to_string(),
        }
    }
}

impl MaskingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mask_rate > 0.0 && self.mask_rate < 1.0) {
            return Err(Error::Config(format!(
                "mask rate {} must lie strictly between 0 and 1",
                self.mask_rate
            )));
        }
        for (name, p) in [
            ("mask token probability", self.mask_token_prob),
            ("random token probability", self.random_token_prob),
            ("keep probability", self.keep_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} {p} is outside [0, 1]")));
            }
        }
        let total = self.mask_token_prob + self.random_token_prob + self.keep_prob;
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "replacement probabilities sum to {total}, not 1"
            )));
        }
        if self.min_sentence_len == 0 {
            return Err(Error::Config(
                "minimum sentence length must be at least 1".into(),
            ));
        }
        if self.mask_symbol.is_empty() || self.mask_symbol.chars().any(char::is_whitespace) {
            return Err(Error::Config(format!(
                "mask symbol {:?} must be a non-empty token",
                self.mask_symbol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReplacementKind {
    Mask,
    Random,
    Keep,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskTarget {
    pub pos: usize,
    pub orig: String,
    pub kind: ReplacementKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskedExample {
    pub doc_id: String,
    pub sentence_index: usize,
    pub original_tokens: Vec<Token>,
    pub output_tokens: Vec<String>,
    pub targets: Vec<MaskTarget>,
}

#[derive(Serialize)]
struct ExampleRecord<'a> {
    doc_id: &'a str,
    sentence_index: usize,
    tokens: &'a [String],
    targets: &'a [MaskTarget],
}

impl MaskedExample {
    /// One JSON object on a single line (no trailing newline).
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ExampleRecord {
            doc_id: &self.doc_id,
            sentence_index: self.sentence_index,
            tokens: &self.output_tokens,
            targets: &self.targets,
        })
        .expect("example records always serialize")
    }
}

/// Words eligible as random replacements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
}

impl Vocabulary {
    pub fn new(words: Vec<String>) -> Self {
        Vocabulary { words }
    }

    /// The `k` most frequent token texts (ties broken lexicographically),
    /// never including `exclude`.
    pub fn most_frequent<'a, I>(tokens: I, k: usize, exclude: &str) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for t in tokens {
            if t != exclude {
                *counts.entry(t).or_default() += 1;
            }
        }
        Self::from_counts(counts.into_iter().map(|(w, c)| (w.to_string(), c)), k)
    }

    pub(crate) fn from_counts<I: IntoIterator<Item = (String, u64)>>(counts: I, k: usize) -> Self {
        let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
        ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(k);
        Vocabulary {
            words: ranked.into_iter().map(|(w, _)| w).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }
}

/// Frequency table for building a [`Vocabulary`] incrementally.
#[derive(Debug, Clone, Default)]
pub struct VocabularyCounter {
    counts: HashMap<String, u64>,
}

impl VocabularyCounter {
    pub fn add_sentence(&mut self, s: &Sentence) {
        for t in s.texts() {
            match self.counts.get_mut(t) {
                Some(c) => *c += 1,
                None => {
                    self.counts.insert(t.to_string(), 1);
                }
            }
        }
    }

    pub fn finish(mut self, k: usize, exclude: &str) -> Vocabulary {
        self.counts.remove(exclude);
        Vocabulary::from_counts(self.counts, k)
    }
}

/// Number of positions to mask in a sentence of `length` tokens:
/// `rate * length` rounded half up, at least one.
pub fn mask_count(length: usize, rate: f64) -> usize {
    // the epsilon keeps products such as 0.15 * 10 on the half-up side
    let n = (rate * length as f64 + 0.5 + 1e-9).floor() as usize;
    n.clamp(1, length.max(1))
}

/// Uniformly random masked positions, sorted ascending.
pub fn select_mask_indices<R: Rng + ?Sized>(
    length: usize,
    cfg: &MaskingConfig,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if length < 2 {
        return Err(Error::Invalid(format!(
            "cannot mask a sentence of {length} token(s); need at least 2"
        )));
    }
    let count = mask_count(length, cfg.mask_rate);
    let mut picked = rand::seq::index::sample(rng, length, count).into_vec();
    picked.sort_unstable();
    Ok(picked)
}

/// Moves isolated masked positions next to other masked positions.
///
/// Isolated positions (runs of length one) are visited left to right, once.
/// A position that has meanwhile become part of a run is skipped. Otherwise
/// its nearest other masked position is found (ties go right), the isolated
/// position is unmasked and the free slot adjacent to the partner's run on
/// the side facing it is masked instead. If that slot is unusable the
/// opposite side of the run is tried; if both are, the position stays.
pub fn spanify(masked: &[usize], length: usize) -> Result<Vec<usize>> {
    let mut on = vec![false; length];
    for &i in masked {
        if i >= length {
            return Err(Error::Invalid(format!(
                "masked index {i} is outside a sentence of {length} tokens"
            )));
        }
        on[i] = true;
    }
    let is_isolated =
        |on: &[bool], i: usize| on[i] && !(i > 0 && on[i - 1]) && !(i + 1 < length && on[i + 1]);
    let isolated: Vec<usize> = (0..length).filter(|&i| is_isolated(&on, i)).collect();

    for i in isolated {
        if !is_isolated(&on, i) {
            continue;
        }
        let left = (0..i).rev().find(|&k| on[k]);
        let right = (i + 1..length).find(|&k| on[k]);
        let (partner, partner_is_right) = match (left, right) {
            (None, None) => continue,
            (Some(l), None) => (l, false),
            (None, Some(r)) => (r, true),
            (Some(l), Some(r)) if i - l < r - i => (l, false),
            (Some(_), Some(r)) => (r, true),
        };
        let mut run_start = partner;
        while run_start > 0 && on[run_start - 1] {
            run_start -= 1;
        }
        let mut run_end = partner;
        while run_end + 1 < length && on[run_end + 1] {
            run_end += 1;
        }
        let before = run_start.checked_sub(1);
        let after = Some(run_end + 1).filter(|&p| p < length);
        let (facing, opposite) = if partner_is_right {
            (before, after)
        } else {
            (after, before)
        };
        let slot = [facing, opposite]
            .into_iter()
            .flatten()
            .find(|&p| p != i && !on[p]);
        if let Some(p) = slot {
            on[i] = false;
            on[p] = true;
        }
    }
    Ok((0..length).filter(|&k| on[k]).collect())
}

/// Replaces each selected position with the mask symbol, a random
/// vocabulary word, or itself, with the configured probabilities.
/// `indices` must be sorted and unique. The returned example has empty
/// `doc_id` and `sentence_index` 0.
pub fn apply_replacements<R: Rng + ?Sized>(
    tokens: &[Token],
    indices: &[usize],
    cfg: &MaskingConfig,
    rng: &mut R,
    vocabulary: &Vocabulary,
) -> Result<MaskedExample> {
    if cfg.random_token_prob > 0.0 && vocabulary.is_empty() {
        return Err(Error::Config(
            "random replacement needs a non-empty vocabulary".into(),
        ));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid(
            "mask indices must be strictly increasing".into(),
        ));
    }
    if let Some(&last) = indices.last() {
        if last >= tokens.len() {
            return Err(Error::Invalid(format!(
                "mask index {last} is outside a sentence of {} tokens",
                tokens.len()
            )));
        }
    }

    let mut output: Vec<String> = tokens.iter().map(|t| t.text.clone()).collect();
    let mut targets = Vec::with_capacity(indices.len());
    for &pos in indices {
        let draw: f64 = rng.random();
        let kind = if draw < cfg.mask_token_prob {
            ReplacementKind::Mask
        } else if draw < cfg.mask_token_prob + cfg.random_token_prob {
            ReplacementKind::Random
        } else {
            ReplacementKind::Keep
        };
        match kind {
            ReplacementKind::Mask => output[pos] = cfg.mask_symbol.clone(),
            ReplacementKind::Random => {
                let word = &vocabulary.words[rng.random_range(0..vocabulary.len())];
                if *word == cfg.mask_symbol {
                    return Err(Error::Config(format!(
                        "vocabulary contains the mask symbol {:?}",
                        cfg.mask_symbol
                    )));
                }
                output[pos] = word.clone();
            }
            ReplacementKind::Keep => {}
        }
        targets.push(MaskTarget {
            pos,
            orig: tokens[pos].text.clone(),
            kind,
        });
    }
    Ok(MaskedExample {
        doc_id: String::new(),
        sentence_index: 0,
        original_tokens: tokens.to_vec(),
        output_tokens: output,
        targets,
    })
}

/// A validated configuration bound to its replacement vocabulary.
#[derive(Debug, Clone)]
pub struct Masker {
    cfg: MaskingConfig,
    vocabulary: Vocabulary,
}

impl Masker {
    /// Validates `cfg` and drops the mask symbol from `vocabulary`.
    pub fn new(cfg: MaskingConfig, vocabulary: Vocabulary) -> Result<Self> {
        cfg.validate()?;
        let words = vocabulary
            .words
            .into_iter()
            .filter(|w| *w != cfg.mask_symbol)
            .collect();
        let vocabulary = Vocabulary { words };
        if cfg.random_token_prob > 0.0 && vocabulary.is_empty() {
            return Err(Error::Config(
                "random replacement needs a non-empty vocabulary".into(),
            ));
        }
        Ok(Masker { cfg, vocabulary })
    }

    pub fn config(&self) -> &MaskingConfig {
        &self.cfg
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    /// Masked positions for a sentence, before replacement. `None` when the
    /// sentence is too short to be masked.
    pub fn positions(&self, s: &Sentence) -> Result<Option<Vec<usize>>> {
        Ok(self.positions_with_rng(s)?.map(|(p, _)| p))
    }

    fn positions_with_rng(
        &self,
        s: &Sentence,
    ) -> Result<Option<(Vec<usize>, rand_chacha::ChaCha8Rng)>> {
        if s.len() < self.cfg.min_sentence_len.max(2) {
            return Ok(None);
        }
        let mut rng = sentence_rng(self.cfg.seed, &s.doc_id, s.index);
        let mut indices = select_mask_indices(s.len(), &self.cfg, &mut rng)?;
        if self.cfg.strategy == MaskStrategy::Span {
            indices = spanify(&indices, s.len())?;
        }
        Ok(Some((indices, rng)))
    }

    /// Masks one sentence with a generator seeded from
    /// `(seed, doc_id, index)`. Sentences shorter than the configured
    /// minimum (and never fewer than 2 tokens) yield `None`.
    pub fn mask_sentence(&self, s: &Sentence) -> Result<Option<MaskedExample>> {
        let Some((indices, mut rng)) = self.positions_with_rng(s)? else {
            return Ok(None);
        };
        let mut ex =
            apply_replacements(&s.tokens, &indices, &self.cfg, &mut rng, &self.vocabulary)?;
        ex.doc_id = s.doc_id.clone();
        ex.sentence_index = s.index;
        Ok(Some(ex))
    }
}

/// Lazily masks every sentence long enough to be masked.
pub fn mask_corpus<'a, I>(
    corpus: I,
    masker: &'a Masker,
) -> impl Iterator<Item = Result<MaskedExample>> + 'a
where
    I: IntoIterator<Item = Sentence>,
    I::IntoIter: 'a,
{
    corpus
        .into_iter()
        .filter_map(move |s| masker.mask_sentence(&s).transpose())
}

/// Number of maximal runs of consecutive positions in a sorted index list.
pub fn run_count(sorted: &[usize]) -> usize {
    sorted
        .iter()
        .enumerate()
        .filter(|&(k, &i)| k == 0 || sorted[k - 1] + 1 != i)
        .count()
}
