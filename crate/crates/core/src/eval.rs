//! Entity-level scoring and vocabulary-overlap analysis.
//!
//! A predicted mention counts as correct only when a gold mention in the
//! same sentence has exactly the same span and type. Exact-span matches with
//! a different type are recorded in the confusion table.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nerdata::LabeledSentence;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub gold: usize,
    pub predicted: usize,
    pub correct: usize,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        self.gold += other.gold;
        self.predicted += other.predicted;
        self.correct += other.correct;
    }
}

/// Raw counts; merging is associative and commutative, so shards can be
/// counted independently.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalCounts {
    pub tokens: usize,
    pub per_type: BTreeMap<String, Tally>,
    pub confusion: BTreeMap<(String, String), usize>,
}

impl EvalCounts {
    pub fn add_sentence(&mut self, gold: &LabeledSentence, pred: &LabeledSentence) {
        self.tokens += gold.len();
        let gold_spans = gold.spans();
        let pred_spans = pred.spans();
        let pred_at: HashMap<(usize, usize), &str> =
            pred_spans.iter().map(|&(s, e, t)| ((s, e), t)).collect();

        for &(s, e, ty) in &gold_spans {
            let tally = self.per_type.entry(ty.to_string()).or_default();
            tally.gold += 1;
            match pred_at.get(&(s, e)) {
                Some(&p) if p == ty => tally.correct += 1,
                Some(&p) => {
                    *self
                        .confusion
                        .entry((ty.to_string(), p.to_string()))
                        .or_default() += 1;
                }
                None => {}
            }
        }
        for &(_, _, ty) in &pred_spans {
            self.per_type.entry(ty.to_string()).or_default().predicted += 1;
        }
    }

    pub fn merge(mut self, other: EvalCounts) -> EvalCounts {
        self.tokens += other.tokens;
        for (ty, t) in other.per_type {
            self.per_type.entry(ty).or_default().merge(&t);
        }
        for (k, n) in other.confusion {
            *self.confusion.entry(k).or_default() += n;
        }
        self
    }

    pub fn total(&self) -> Tally {
        let mut t = Tally::default();
        for v in self.per_type.values() {
            t.merge(v);
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    pub fn from_tally(t: &Tally) -> Prf {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(t.correct, t.predicted);
        let recall = ratio(t.correct, t.gold);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Prf {
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub gold: usize,
    pub predicted: usize,
    pub correct: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionEntry {
    pub gold: String,
    pub predicted: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MicroScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub gold: usize,
    pub predicted: usize,
    pub correct: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tokens: usize,
    pub micro: MicroScore,
    pub per_type: BTreeMap<String, TypeScore>,
    pub confusion: Vec<ConfusionEntry>,
}

impl From<&EvalCounts> for EvalReport {
    fn from(c: &EvalCounts) -> Self {
        let total = c.total();
        let micro = Prf::from_tally(&total);
        EvalReport {
            tokens: c.tokens,
            micro: MicroScore {
                precision: micro.precision,
                recall: micro.recall,
                f1: micro.f1,
                gold: total.gold,
                predicted: total.predicted,
                correct: total.correct,
            },
            per_type: c
                .per_type
                .iter()
                .map(|(ty, t)| {
                    let p = Prf::from_tally(t);
                    (
                        ty.clone(),
                        TypeScore {
                            precision: p.precision,
                            recall: p.recall,
                            f1: p.f1,
                            gold: t.gold,
                            predicted: t.predicted,
                            correct: t.correct,
                        },
                    )
                })
                .collect(),
            confusion: c
                .confusion
                .iter()
                .map(|((g, p), &count)| ConfusionEntry {
                    gold: g.clone(),
                    predicted: p.clone(),
                    count,
                })
                .collect(),
        }
    }
}

impl EvalReport {
    /// Share of gold `from_type` mentions whose exact span was predicted as
    /// `to_type`. With `from_type == to_type` this is the type's recall.
    pub fn misclassification_rate(&self, from_type: &str, to_type: &str) -> f64 {
        let Some(from) = self.per_type.get(from_type) else {
            return 0.0;
        };
        if from.gold == 0 {
            return 0.0;
        }
        let hits = if from_type == to_type {
            from.correct
        } else {
            self.confusion
                .iter()
                .find(|c| c.gold == from_type && c.predicted == to_type)
                .map_or(0, |c| c.count)
        };
        hits as f64 / from.gold as f64
    }

    /// Plain-text summary in the layout of the conlleval script, without
    /// its token-accuracy figure. `display` maps raw type names to labels.
    pub fn to_table(&self, display: &BTreeMap<String, String>) -> String {
        let mut out = String::new();
        let m = &self.micro;
        let _ = writeln!(
            out,
            "processed {} tokens with {} phrases; found: {} phrases; correct: {}.",
            self.tokens, m.gold, m.predicted, m.correct
        );
        let _ = writeln!(
            out,
            "{:>17}: precision: {:6.2}%; recall: {:6.2}%; FB1: {:6.2}",
            "overall",
            100.0 * m.precision,
            100.0 * m.recall,
            100.0 * m.f1
        );
        for (ty, s) in &self.per_type {
            let name = display.get(ty).unwrap_or(ty);
            let _ = writeln!(
                out,
                "{:>17}: precision: {:6.2}%; recall: {:6.2}%; FB1: {:6.2}  {}",
                name,
                100.0 * s.precision,
                100.0 * s.recall,
                100.0 * s.f1,
                s.predicted
            );
        }
        out
    }
}

fn check_aligned(gold: &[LabeledSentence], pred: &[LabeledSentence]) -> Result<()> {
    if gold.len() != pred.len() {
        return Err(Error::Misaligned {
            sentence: gold.len().min(pred.len()),
            message: format!(
                "gold has {} sentences, prediction has {}",
                gold.len(),
                pred.len()
            ),
        });
    }
    for (i, (g, p)) in gold.iter().zip(pred).enumerate() {
        let same = g.len() == p.len()
            && g.tokens
                .iter()
                .zip(&p.tokens)
                .all(|(a, b)| a.text == b.text);
        if !same {
            return Err(Error::Misaligned {
                sentence: i,
                message: "gold and predicted tokens differ".into(),
            });
        }
    }
    Ok(())
}

/// Counts over aligned gold/predicted sentences, computed in parallel
/// shards on the current rayon pool.
pub fn count(gold: &[LabeledSentence], pred: &[LabeledSentence]) -> Result<EvalCounts> {
    check_aligned(gold, pred)?;
    Ok(gold
        .par_iter()
        .zip(pred.par_iter())
        .fold(EvalCounts::default, |mut acc, (g, p)| {
            acc.add_sentence(g, p);
            acc
        })
        .reduce(EvalCounts::default, EvalCounts::merge))
}

pub fn score(gold: &[LabeledSentence], pred: &[LabeledSentence]) -> Result<EvalReport> {
    Ok(EvalReport::from(&count(gold, pred)?))
}

pub fn misclassification_rate(
    gold: &[LabeledSentence],
    pred: &[LabeledSentence],
    from_type: &str,
    to_type: &str,
) -> Result<f64> {
    Ok(score(gold, pred)?.misclassification_rate(from_type, to_type))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapMatrix {
    pub domains: Vec<String>,
    /// `values[a][b]` = percentage of domain `a`'s vocabulary also in `b`'s.
    pub values: Vec<Vec<f64>>,
    pub k: usize,
}

fn is_punctuation(word: &str) -> bool {
    !word.chars().any(char::is_alphanumeric)
}

/// The `k` most frequent lowercased words, ignoring stopwords and tokens
/// without any alphanumeric character. Ties are broken lexicographically.
pub fn top_k_vocabulary<I, T>(tokens: I, k: usize, stopwords: &HashSet<String>) -> Vec<String>
where
    I: IntoIterator<Item = T>,
    T: AsRef<str>,
{
    let mut counts: HashMap<String, u64> = HashMap::new();
    for t in tokens {
        let w = t.as_ref().to_lowercase();
        if is_punctuation(&w) || stopwords.contains(&w) {
            continue;
        }
        *counts.entry(w).or_default() += 1;
    }
    let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    ranked.into_iter().map(|(w, _)| w).collect()
}

/// Row-normalized vocabulary overlap between named corpora. Stopwords are
/// compared lowercased.
pub fn vocab_overlap<I, T>(
    corpora: Vec<(String, I)>,
    k: usize,
    stopwords: &HashSet<String>,
) -> Result<OverlapMatrix>
where
    I: IntoIterator<Item = T>,
    T: AsRef<str>,
{
    if k == 0 {
        return Err(Error::Config("vocabulary size k must be at least 1".into()));
    }
    let stop: HashSet<String> = stopwords.iter().map(|s| s.to_lowercase()).collect();
    let mut domains = Vec::with_capacity(corpora.len());
    let mut vocabs: Vec<HashSet<String>> = Vec::with_capacity(corpora.len());
    for (name, tokens) in corpora {
        domains.push(name);
        vocabs.push(top_k_vocabulary(tokens, k, &stop).into_iter().collect());
    }
    let values = vocabs
        .iter()
        .map(|a| {
            vocabs
                .iter()
                .map(|b| {
                    if a.is_empty() {
                        0.0
                    } else {
                        100.0 * a.intersection(b).count() as f64 / a.len() as f64
                    }
                })
                .collect()
        })
        .collect();
    Ok(OverlapMatrix { domains, values, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sent(words: &str, tags: &str) -> LabeledSentence {
        let pairs: Vec<(&str, &str)> = words.split(' ').zip(tags.split(' ')).collect();
        LabeledSentence::from_pairs(&pairs).unwrap()
    }

    #[test]
    fn perfect_prediction() {
        let g = vec![sent("a b c", "B-x I-x O"), sent("d e", "B-y O")];
        let r = score(&g, &g).unwrap();
        assert_eq!(
            (r.micro.precision, r.micro.recall, r.micro.f1),
            (1.0, 1.0, 1.0)
        );
        assert!(r.confusion.is_empty());
    }

    #[test]
    fn half_correct() {
        let g = vec![sent("a b c d", "B-x O B-y O")];
        let p = vec![sent("a b c d", "B-x O O B-z")];
        let r = score(&g, &p).unwrap();
        assert_eq!(
            (r.micro.precision, r.micro.recall, r.micro.f1),
            (0.5, 0.5, 0.5)
        );
    }

    #[test]
    fn confusion_and_misclassification() {
        let g = vec![sent("a b c d e", "B-person O B-person B-person B-person")];
        let p = vec![sent(
            "a b c d e",
            "B-musicalartist O B-musicalartist B-musicalartist B-person",
        )];
        let r = score(&g, &p).unwrap();
        assert_eq!(r.misclassification_rate("person", "musicalartist"), 0.75);
        assert_eq!(r.misclassification_rate("person", "person"), 0.25);
        assert_eq!(r.misclassification_rate("band", "person"), 0.0);
        assert_eq!(
            r.confusion,
            [ConfusionEntry {
                gold: "person".into(),
                predicted: "musicalartist".into(),
                count: 3
            }]
        );
        assert_eq!(
            misclassification_rate(&g, &g, "person", "person").unwrap(),
            1.0
        );
    }

    #[test]
    fn misalignment_is_reported() {
        let g = vec![sent("a b", "O O"), sent("c", "O")];
        assert!(matches!(score(&g, &g[..1]), Err(Error::Misaligned { .. })));
        let p = vec![sent("a b", "O O"), sent("z", "O")];
        assert!(matches!(
            score(&g, &p),
            Err(Error::Misaligned { sentence: 1, .. })
        ));
    }

    #[test]
    fn table_layout() {
        let g = vec![sent("a b c d", "B-x O B-y O")];
        let p = vec![sent("a b c d", "B-x O O B-z")];
        let r = score(&g, &p).unwrap();
        let mut names = BTreeMap::new();
        names.insert("x".to_string(), "Ex".to_string());
        let t = r.to_table(&names);
        assert!(t.starts_with("processed 4 tokens with 2 phrases; found: 2 phrases; correct: 1.\n"));
        assert!(
            t.contains("              Ex: precision: 100.00%; recall: 100.00%; FB1: 100.00  1\n")
        );
    }

    fn words(text: &str) -> Vec<String> {
        text.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn overlap_examples() {
        let none = HashSet::new();
        let a = words("alpha alpha beta");
        let m = vocab_overlap(vec![("a".into(), a.clone()), ("b".into(), a)], 5, &none).unwrap();
        assert_eq!(m.values, [[100.0, 100.0], [100.0, 100.0]]);

        let m = vocab_overlap(
            vec![("a".into(), words("x y")), ("b".into(), words("p q"))],
            5,
            &none,
        )
        .unwrap();
        assert_eq!(m.values[0][1], 0.0);

        let a = words("alpha alpha alpha alpha alpha alpha beta beta beta beta beta gamma gamma gamma gamma delta delta delta eps eps zeta");
        let b = words("alpha alpha alpha alpha alpha alpha beta beta beta beta beta gamma gamma gamma gamma x x x y y eps");
        let m = vocab_overlap(vec![("a".into(), a), ("b".into(), b)], 5, &none).unwrap();
        assert_eq!(m.values[0][1], 60.0);
        assert_eq!(m.values[1][0], 60.0);
    }

    #[test]
    fn top_k_filters_stopwords_and_punctuation() {
        let stop: HashSet<String> = ["the".to_string()].into();
        let v = top_k_vocabulary(["The", "the", ",", "Band", "band", "song", "--"], 10, &stop);
        assert_eq!(v, ["band", "song"]);
        assert!(vocab_overlap(Vec::<(String, Vec<String>)>::new(), 0, &stop).is_err());
    }
}
