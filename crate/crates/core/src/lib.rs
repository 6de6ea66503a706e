//! Data tooling for cross-domain named entity recognition.
//!
//! The crate turns a raw domain corpus and an entity gazetteer into
//! pre-training corpora of increasing task relevance (entity-level,
//! task-level, integrated), generates masked-language-model examples with
//! token- or span-level masking, pre-annotates sentences for human
//! labeling, and handles labeled NER splits: CoNLL I/O, statistics,
//! few-shot subsampling, joint training sets and entity-level scoring.
//!
//! All randomness is derived per sentence from an explicit seed, so every
//! pipeline produces the same bytes regardless of worker count.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod gazetteer;
pub mod masker;
pub mod nerdata;
pub mod parallel;
pub mod seed;
pub mod selector;
pub mod stopwords;

pub use corpus::{
    corpus_stats, load_corpus, segment, tokenize, tokenize_with_links, CorpusFormat, CorpusReader,
    CorpusStats, Document, Sentence, Token,
};
pub use error::{Error, Result};
pub use eval::{misclassification_rate, score, vocab_overlap, EvalReport, OverlapMatrix};
pub use gazetteer::{
    find_mentions, load_gazetteer, load_hierarchy, pre_annotate, resolve_type, EntityMention,
    Gazetteer, MentionSource, PreAnnotation, TypeHierarchy,
};
pub use masker::{
    apply_replacements, mask_corpus, select_mask_indices, spanify, MaskStrategy, MaskedExample,
    Masker, MaskingConfig, ReplacementKind, Vocabulary,
};
pub use nerdata::{
    build_joint, dataset_stats, extract_entities, parse_conll, subsample, validate_bio,
    JointConfig, LabeledSentence, SplitStats,
};
pub use selector::{
    build_integrated, sample_fraction, select_entity_level, select_task_level, ExternalMentions,
    GazetteerMatcher, MentionProvider, SelectorConfig,
};
