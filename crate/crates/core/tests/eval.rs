use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use xner::corpus::Token;
use xner::eval::score;
use xner::nerdata::{parse_conll, parse_conll_str, tags_from_spans, LabeledSentence};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

type SpanSet = BTreeSet<(usize, usize, usize, String)>;

/// Random non-overlapping spans over `len` tokens.
fn random_spans(rng: &mut ChaCha8Rng, len: usize, types: &[&str]) -> Vec<(usize, usize, String)> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < len {
        if rng.random_bool(0.35) {
            let end = (pos + rng.random_range(1..=3)).min(len);
            out.push((
                pos,
                end,
                types[rng.random_range(0..types.len())].to_string(),
            ));
            pos = end;
        } else {
            pos += 1;
        }
    }
    out
}

fn sentence(len: usize, spans: &[(usize, usize, String)]) -> LabeledSentence {
    let tokens = (0..len)
        .map(|i| Token::new(format!("t{i}")).unwrap())
        .collect();
    let borrowed: Vec<_> = spans.iter().map(|(a, b, t)| (*a, *b, t.as_str())).collect();
    LabeledSentence::new(tokens, tags_from_spans(len, &borrowed)).unwrap()
}

fn prf(correct: usize, gold: usize, pred: usize) -> (f64, f64, f64) {
    let p = if pred == 0 {
        0.0
    } else {
        correct as f64 / pred as f64
    };
    let r = if gold == 0 {
        0.0
    } else {
        correct as f64 / gold as f64
    };
    let f = if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    };
    (p, r, f)
}

#[test]
fn score_matches_set_intersection_oracle() {
    let types = ["per", "loc", "org"];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let n = rng.random_range(1..=5);
        let (mut gold, mut pred) = (Vec::new(), Vec::new());
        let (mut gset, mut pset) = (SpanSet::new(), SpanSet::new());
        for si in 0..n {
            let len = rng.random_range(1..=10);
            let g = random_spans(&mut rng, len, &types);
            let p = random_spans(&mut rng, len, &types);
            gset.extend(g.iter().map(|(a, b, t)| (si, *a, *b, t.clone())));
            pset.extend(p.iter().map(|(a, b, t)| (si, *a, *b, t.clone())));
            gold.push(sentence(len, &g));
            pred.push(sentence(len, &p));
        }
        let report = score(&gold, &pred).unwrap();
        let both: SpanSet = gset.intersection(&pset).cloned().collect();
        let (p, r, f) = prf(both.len(), gset.len(), pset.len());
        assert_eq!(report.micro.correct, both.len());
        assert_eq!(report.micro.gold, gset.len());
        assert_eq!(report.micro.predicted, pset.len());
        assert!((report.micro.precision - p).abs() < 1e-12);
        assert!((report.micro.recall - r).abs() < 1e-12);
        assert!((report.micro.f1 - f).abs() < 1e-12);
        for ty in types {
            let of = |s: &SpanSet| s.iter().filter(|x| x.3 == ty).count();
            let (p, r, f) = prf(of(&both), of(&gset), of(&pset));
            match report.per_type.get(ty) {
                Some(s) => {
                    assert_eq!(
                        (s.gold, s.predicted, s.correct),
                        (of(&gset), of(&pset), of(&both))
                    );
                    assert!((s.precision - p).abs() < 1e-12);
                    assert!((s.recall - r).abs() < 1e-12);
                    assert!((s.f1 - f).abs() < 1e-12);
                }
                None => assert_eq!(of(&gset) + of(&pset), 0),
            }
        }
    }
}

#[test]
fn golden_fixture_matches_reference_scorer() {
    let gold = parse_conll(fixture("golden_gold.conll")).unwrap();
    let pred = parse_conll(fixture("golden_pred.conll")).unwrap();
    assert_eq!(gold.len(), 20);
    let report = score(&gold, &pred).unwrap();
    let expected: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("golden_expected.json")).unwrap())
            .unwrap();

    let close = |a: f64, b: &Value| (a - b.as_f64().unwrap()).abs() < 1e-9;
    let micro = &expected["micro"];
    assert!(close(report.micro.precision, &micro["precision"]));
    assert!(close(report.micro.recall, &micro["recall"]));
    assert!(close(report.micro.f1, &micro["f1"]));

    let per_type = expected["per_type"].as_object().unwrap();
    let ours: BTreeSet<&str> = report.per_type.keys().map(String::as_str).collect();
    let theirs: BTreeSet<&str> = per_type.keys().map(String::as_str).collect();
    assert_eq!(ours, theirs);
    for (ty, e) in per_type {
        let s = &report.per_type[ty];
        assert_eq!(s.gold as u64, e["support"].as_u64().unwrap(), "{ty}");
        assert!(close(s.precision, &e["precision"]), "{ty}");
        assert!(close(s.recall, &e["recall"]), "{ty}");
        assert!(close(s.f1, &e["f1"]), "{ty}");
    }
}

#[test]
fn half_correct_fixture_scores_one_half() {
    let report = score(
        &parse_conll_str("A B-per\nB B-loc\n\n", "g").unwrap(),
        &parse_conll_str("A B-per\nB B-org\n\n", "p").unwrap(),
    )
    .unwrap();
    for r in [report.micro.precision, report.micro.recall, report.micro.f1] {
        assert_eq!(r, 0.5);
    }
}

#[test]
fn confusion_counts_exact_span_type_swaps() {
    let gold = parse_conll_str(
        "A B-politician\nB I-politician\nC B-politician\nD O\n\n",
        "g",
    )
    .unwrap();
    let pred = parse_conll_str(
        "A B-person\nB I-person\nC B-politician\nD B-person\n\n",
        "p",
    )
    .unwrap();
    let report = score(&gold, &pred).unwrap();
    assert_eq!(report.misclassification_rate("politician", "person"), 0.5);
    assert_eq!(
        report.misclassification_rate("politician", "politician"),
        0.5
    );
    assert_eq!(report.misclassification_rate("politician", "city"), 0.0);
    assert_eq!(report.misclassification_rate("absent", "person"), 0.0);
}

#[test]
fn misaligned_inputs_are_rejected() {
    let gold = parse_conll_str("A O\n\n", "g").unwrap();
    let pred = parse_conll_str("B O\n\n", "p").unwrap();
    assert!(score(&gold, &pred).is_err());
    assert!(score(&gold, &[]).is_err());
}

#[test]
fn table_lists_display_names() {
    let gold = parse_conll_str("A B-musicalartist\n\n", "g").unwrap();
    let report = score(&gold, &gold).unwrap();
    let names = BTreeMap::from([("musicalartist".to_string(), "Musical Artist".to_string())]);
    let table = report.to_table(&names);
    assert!(table.starts_with("processed 1 tokens with 1 phrases; found: 1 phrases; correct: 1."));
    assert!(table.contains("Musical Artist: precision: 100.00%"));
}

proptest! {
    #[test]
    fn perfect_prediction_scores_one(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = rng.random_range(1..=12);
        let spans = random_spans(&mut rng, len, &["a", "b"]);
        let s = vec![sentence(len, &spans)];
        let r = score(&s, &s).unwrap();
        let expected = if spans.is_empty() { 0.0 } else { 1.0 };
        prop_assert_eq!(r.micro.f1, expected);
    }
}
