use std::collections::BTreeMap;

use proptest::prelude::*;
use xner::corpus::Token;
use xner::nerdata::{
    build_joint, dataset_stats, parse_conll_str, serialize_conll, spans_from_tags, subsample,
    tags_from_spans, validate_bio, JointConfig, LabeledSentence,
};

const TYPES: [&str; 3] = ["politician", "country", "election"];

fn labeled() -> impl Strategy<Value = LabeledSentence> {
    proptest::collection::vec(("[a-z]{1,6}", 0usize..4, 1usize..3), 1..12).prop_map(|parts| {
        let mut tokens = Vec::new();
        let mut tags = Vec::new();
        for (w, ty, len) in parts {
            for k in 0..len {
                tokens.push(Token::new(format!("{w}{k}")).unwrap());
                tags.push(match ty {
                    3 => "O".to_string(),
                    t if k == 0 => format!("B-{}", TYPES[t]),
                    t => format!("I-{}", TYPES[t]),
                });
            }
        }
        LabeledSentence::new(tokens, tags).unwrap()
    })
}

proptest! {
    #[test]
    fn conll_round_trip(split in proptest::collection::vec(labeled(), 0..8)) {
        let text = serialize_conll(&split);
        prop_assert_eq!(parse_conll_str(&text, "mem").unwrap(), split);
    }

    #[test]
    fn tags_and_spans_are_inverse(s in labeled()) {
        let spans = spans_from_tags(&s.tags);
        prop_assert_eq!(tags_from_spans(s.len(), &spans), s.tags.clone());
    }

    #[test]
    fn stats_percentages_sum_to_hundred(split in proptest::collection::vec(labeled(), 1..10)) {
        let st = dataset_stats(&split);
        let total: usize = st.per_type.values().map(|t| t.count).sum();
        prop_assert_eq!(total, st.mention_count);
        if total > 0 {
            let pct: f64 = st.per_type.values().map(|t| t.percentage).sum();
            prop_assert!((pct - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn subsample_is_seeded_ordered_subset(split in proptest::collection::vec(labeled(), 0..30), seed in any::<u64>(), frac in 0.0f64..=1.0) {
        let n = (frac * split.len() as f64) as usize;
        let a = subsample(&split, n, seed).unwrap();
        prop_assert_eq!(a.len(), n);
        prop_assert_eq!(&subsample(&split, n, seed).unwrap(), &a);
        // ordered subsequence of the input
        let mut it = split.iter();
        prop_assert!(a.iter().all(|s| it.any(|t| t == s)));
        prop_assert!(subsample(&split, split.len() + 1, seed).is_err());
    }

    #[test]
    fn joint_size_is_source_plus_multiplied_target(
        src in proptest::collection::vec(labeled(), 0..5),
        tgt in proptest::collection::vec(labeled(), 0..5),
        m in 1usize..20,
    ) {
        let j = build_joint(&src, &tgt, &JointConfig { multiplier: m }).unwrap();
        prop_assert_eq!(j.len(), src.len() + m * tgt.len());
        prop_assert_eq!(&j[..src.len()], &src[..]);
    }
}

#[test]
fn bio_errors_carry_line_and_position() {
    let err = parse_conll_str("A B-x\nB O\n\nC O\nD I-x\n", "f.conll").unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("f.conll") && msg.contains('5'), "{msg}");
    assert_eq!(
        validate_bio(&["O", "I-x", "B-y", "I-x", "Q"]),
        Err(vec![1, 3, 4])
    );
    assert!(parse_conll_str("lonely\n", "f").is_err());
}

#[test]
fn docstart_and_extra_columns_are_tolerated() {
    let text = "-DOCSTART- -X- -X- O\n\nEU NNP B-NP B-ORG\nrejects VBZ B-VP O\n\n";
    let s = parse_conll_str(text, "c").unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].tags, ["B-ORG", "O"]);
    assert_eq!(
        dataset_stats(&s).per_type,
        BTreeMap::from([(
            "ORG".to_string(),
            xner::nerdata::TypeCount {
                count: 1,
                percentage: 100.0
            }
        )])
    );
}

#[test]
fn zero_multiplier_is_rejected() {
    assert!(build_joint(&[], &[], &JointConfig { multiplier: 0 }).is_err());
    assert_eq!(JointConfig::default().multiplier, 100);
}
