use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::{json, Value};

use xner::corpus::{load_corpus, CorpusFormat, Document, Sentence};
use xner::eval::{self, vocab_overlap};
use xner::gazetteer::{
    load_gazetteer, load_hierarchy, pre_annotate, read_type_list, TypeHierarchy,
};
use xner::masker::{MaskStrategy, Masker, MaskingConfig, Vocabulary, VocabularyCounter};
use xner::nerdata::{self, JointConfig};
use xner::parallel::{map_ordered, with_workers, DEFAULT_BATCH};
use xner::selector::{
    is_entity_level, is_task_level, keep_in_sample, CorpusWriter, ExternalMentions,
    GazetteerMatcher, MentionProvider, SelectorConfig,
};
use xner::{stopwords, Error};

#[derive(Debug, Parser)]
#[command(
    name = "xner",
    version,
    about = "Cross-domain NER corpus and evaluation toolkit"
)]
struct Cli {
    /// Worker threads (defaults to available parallelism). Never changes output.
    #[arg(long, global = true, env = "XNER_WORKERS", value_parser = positive)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Paragraph, sentence and token counts of an unlabeled corpus.
    Stats(StatsArgs),
    /// Build an entity-level, task-level or integrated pre-training corpus.
    Extract(ExtractArgs),
    /// Generate masked-language-model examples as JSONL.
    Mask(MaskArgs),
    /// Sentence and per-type mention counts of CoNLL splits.
    NerStats(NerStatsArgs),
    /// Entity-level precision, recall and F1 of predictions against gold.
    Eval(EvalArgs),
    /// Top-k vocabulary overlap between corpora.
    Overlap(OverlapArgs),
    /// Dictionary pre-annotation with hyperlink review flags.
    PreAnnotate(PreAnnotateArgs),
    /// Seeded few-shot subsample of a CoNLL split.
    Subsample(SubsampleArgs),
    /// Source split plus an upsampled target split.
    Joint(JointArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Plain,
    Jsonl,
    Lines,
}

impl From<Format> for CorpusFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Plain => CorpusFormat::Plain,
            Format::Jsonl => CorpusFormat::Jsonl,
            Format::Lines => CorpusFormat::Lines,
        }
    }
}

#[derive(Debug, Args)]
struct CorpusInput {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    /// Domain tag for formats that do not carry one.
    #[arg(long, default_value = "")]
    domain: String,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[command(flatten)]
    corpus: CorpusInput,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Level {
    Entity,
    Task,
    Integrated,
}

#[derive(Debug, Args)]
struct MentionArgs {
    /// Gazetteer TSV ("surface<TAB>type").
    #[arg(long, required_unless_present = "mentions")]
    gazetteer: Option<PathBuf>,
    /// Type hierarchy TSV ("child<TAB>parent").
    #[arg(long)]
    hierarchy: Option<PathBuf>,
    /// Specialized entity types, one per line.
    #[arg(long)]
    specialized: Option<PathBuf>,
    /// External mention JSONL used instead of gazetteer matching.
    #[arg(long, conflicts_with = "gazetteer")]
    mentions: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[command(flatten)]
    corpus: CorpusInput,
    #[command(flatten)]
    mentions: MentionArgs,
    #[arg(long, value_enum, default_value = "entity")]
    level: Level,
    #[arg(long, default_value_t = 2, value_parser = positive)]
    min_mentions: usize,
    #[arg(long, default_value_t = 1, value_parser = positive)]
    min_specialized: usize,
    #[arg(long, default_value_t = 2, value_parser = positive)]
    upsample: usize,
    /// Keep this percentage of output sentences (seeded per sentence).
    #[arg(long, default_value_t = 100.0, value_parser = percent)]
    percent: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Strategy {
    Token,
    Span,
}

#[derive(Debug, Args)]
struct MaskArgs {
    #[command(flatten)]
    corpus: CorpusInput,
    #[arg(long, value_enum, default_value = "token")]
    strategy: Strategy,
    #[arg(long, default_value_t = 0.15, value_parser = open_unit)]
    rate: f64,
    #[arg(long, default_value_t = 0.8, value_parser = closed_unit)]
    mask_prob: f64,
    #[arg(long, default_value_t = 0.1, value_parser = closed_unit)]
    random_prob: f64,
    #[arg(long, default_value_t = 0.1, value_parser = closed_unit)]
    keep_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5, value_parser = positive)]
    min_len: usize,
    #[arg(long, default_value = "[MASK]")]
    mask_token: String,
    /// Size of the random-replacement vocabulary drawn from the corpus.
    #[arg(long, default_value_t = 50_000, value_parser = positive)]
    vocab_size: usize,
    /// Use this word list (one per line) instead of corpus frequencies.
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct NerStatsArgs {
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    /// Label display names ("raw<TAB>display").
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Report how often gold mentions of this type are predicted as --to.
    #[arg(long, requires = "to")]
    from: Option<String>,
    #[arg(long, requires = "from")]
    to: Option<String>,
    /// Write the JSON report here as well.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write a conlleval-style text table here.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OverlapArgs {
    /// Unlabeled corpus as NAME=PATH (repeatable).
    #[arg(long = "corpus", value_parser = named_path)]
    corpora: Vec<(String, PathBuf)>,
    /// CoNLL dataset as NAME=PATH (repeatable).
    #[arg(long = "conll", value_parser = named_path)]
    conll: Vec<(String, PathBuf)>,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    #[arg(long, default_value_t = 5000, value_parser = positive)]
    top_k: usize,
    /// Stopword list, one per line (defaults to a built-in English list).
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PreAnnotateArgs {
    #[command(flatten)]
    corpus: CorpusInput,
    #[arg(long)]
    gazetteer: PathBuf,
    #[arg(long)]
    hierarchy: Option<PathBuf>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct SubsampleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct JointArgs {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long, default_value_t = 100, value_parser = positive)]
    multiplier: usize,
    #[arg(long)]
    output: PathBuf,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn open_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("must lie strictly between 0 and 1".into())
    }
}

fn closed_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err("must lie in [0, 1]".into())
    }
}

fn percent(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if (0.0..=100.0).contains(&v) {
        Ok(v)
    } else {
        Err("must lie in [0, 100]".into())
    }
}

fn named_path(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => {
            Ok((name.to_string(), path.into()))
        }
        _ => Err("expected NAME=PATH".into()),
    }
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(msg) => Failure::Usage(msg),
            other => Failure::Data(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(Error::Stream(e))
    }
}

type CliResult<T> = Result<T, Failure>;

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| {
        Failure::Data(Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    })
}

fn open_corpus(c: &CorpusInput) -> CliResult<impl Iterator<Item = xner::Result<Document>>> {
    Ok(load_corpus(&c.input, c.format.into())?.with_domain(c.domain.clone()))
}

fn sentences_of(c: &CorpusInput) -> CliResult<impl Iterator<Item = xner::Result<Sentence>>> {
    Ok(open_corpus(c)?.flat_map(|d| match d {
        Ok(d) => d.sentences.into_iter().map(Ok).collect::<Vec<_>>(),
        Err(e) => vec![Err(e)],
    }))
}

fn run_stats(args: StatsArgs) -> CliResult<Value> {
    let mut total = xner::CorpusStats::default();
    map_ordered(
        open_corpus(&args.corpus)?,
        256,
        |d| d.stats(),
        |s| {
            total += s;
            Ok(())
        },
    )?;
    Ok(json!({
        "paragraphs": total.paragraph_count,
        "sentences": total.sentence_count,
        "tokens": total.token_count,
    }))
}

fn hierarchy_from(path: &Option<PathBuf>) -> CliResult<TypeHierarchy> {
    Ok(match path {
        Some(p) => load_hierarchy(p)?,
        None => TypeHierarchy::new(),
    })
}

fn run_extract(args: ExtractArgs) -> CliResult<Value> {
    let cfg = SelectorConfig {
        min_mentions: args.min_mentions,
        min_specialized: args.min_specialized,
        task_upsample: args.upsample,
    };
    cfg.validate()?;

    let hierarchy = hierarchy_from(&args.mentions.hierarchy)?;
    let specialized: BTreeSet<String> = match &args.mentions.specialized {
        Some(p) => read_type_list(p)?.into_iter().collect(),
        None => BTreeSet::new(),
    };
    if args.level != Level::Entity && specialized.is_empty() {
        return Err(Failure::Usage(
            "--specialized must list at least one type for task-level and integrated corpora"
                .into(),
        ));
    }

    let gazetteer;
    let external;
    let provider: &dyn MentionProvider = match (&args.mentions.gazetteer, &args.mentions.mentions) {
        (_, Some(m)) => {
            external = ExternalMentions::load(m)?;
            info!("loaded {} external mentions", external.len());
            &external
        }
        (Some(g), None) => {
            let mut g = load_gazetteer(g, None)?;
            g.set_specialized_types(specialized.iter().cloned());
            g.validate(&hierarchy)?;
            info!("loaded gazetteer with {} surface forms", g.len());
            gazetteer = g;
            &GazetteerMatcher::new(&gazetteer, &hierarchy)
        }
        (None, None) => {
            return Err(Failure::Usage(
                "--gazetteer or --mentions is required".into(),
            ))
        }
    };

    let want_entity = args.level != Level::Task;
    let want_task = args.level != Level::Entity;
    let keep = |s: &Sentence| keep_in_sample(s, args.percent, args.seed);

    let mut out = CorpusWriter::new(create(&args.output)?);
    let mut task_spill = BufWriter::new(tempfile::tempfile()?);
    let (mut input_sentences, mut entity_n, mut entity_tokens, mut task_n, mut task_tokens) =
        (0, 0, 0, 0, 0);

    map_ordered(
        sentences_of(&args.corpus)?,
        DEFAULT_BATCH,
        |s| {
            let e = want_entity && is_entity_level(&s, provider, &cfg);
            let t = want_task && is_task_level(&s, provider, &specialized, &cfg);
            (s, e, t)
        },
        |(s, e, t)| {
            input_sentences += 1;
            if e {
                entity_n += 1;
                entity_tokens += s.len();
                if keep(&s) {
                    out.write(&s)?;
                }
            }
            if t {
                task_n += 1;
                task_tokens += s.len();
                if args.level == Level::Task {
                    if keep(&s) {
                        out.write(&s)?;
                    }
                } else {
                    serde_json::to_writer(&mut task_spill, &s)
                        .map_err(|e| Error::Invalid(e.to_string()))?;
                    task_spill.write_all(b"\n")?;
                }
            }
            Ok(())
        },
    )?;

    if args.level == Level::Integrated {
        let mut spill = task_spill.into_inner().map_err(|e| e.into_error())?;
        for _ in 0..cfg.task_upsample {
            spill.seek(SeekFrom::Start(0))?;
            out.section_break();
            for line in BufReader::new(&spill).lines() {
                let s: Sentence =
                    serde_json::from_str(&line?).map_err(|e| Error::Invalid(e.to_string()))?;
                if keep(&s) {
                    out.write(&s)?;
                }
            }
        }
    }

    let (output_sentences, output_tokens) = (out.sentences(), out.tokens());
    out.finish()?;
    Ok(json!({
        "level": format!("{:?}", args.level).to_lowercase(),
        "input_sentences": input_sentences,
        "entity_sentences": entity_n,
        "entity_tokens": entity_tokens,
        "task_sentences": task_n,
        "task_tokens": task_tokens,
        "output_sentences": output_sentences,
        "output_tokens": output_tokens,
    }))
}

fn run_mask(args: MaskArgs) -> CliResult<Value> {
    let cfg = MaskingConfig {
        mask_rate: args.rate,
        mask_token_prob: args.mask_prob,
        random_token_prob: args.random_prob,
        keep_prob: args.keep_prob,
        strategy: match args.strategy {
            Strategy::Token => MaskStrategy::Token,
            Strategy::Span => MaskStrategy::Span,
        },
        seed: args.seed,
        min_sentence_len: args.min_len,
        mask_symbol: args.mask_token.clone(),
    };
    cfg.validate()?;

    let vocabulary = match &args.vocab {
        Some(p) => Vocabulary::new(read_type_list(p)?),
        None => {
            let mut counter = VocabularyCounter::default();
            for s in sentences_of(&args.corpus)? {
                counter.add_sentence(&s?);
            }
            counter.finish(args.vocab_size, &cfg.mask_symbol)
        }
    };
    info!("replacement vocabulary has {} words", vocabulary.len());
    let masker = Masker::new(cfg, vocabulary)?;

    let mut out = create(&args.output)?;
    let (mut examples, mut skipped, mut targets) = (0usize, 0usize, 0usize);
    map_ordered(
        sentences_of(&args.corpus)?,
        DEFAULT_BATCH,
        |s| {
            masker
                .mask_sentence(&s)
                .map(|ex| ex.map(|ex| (ex.to_json(), ex.targets.len())))
        },
        |res| {
            let Some((line, n)) = res? else {
                skipped += 1;
                return Ok(());
            };
            examples += 1;
            targets += n;
            out.write_all(line.as_bytes())?;
            out.write_all(b"\n")?;
            Ok(())
        },
    )?;
    out.flush()?;
    Ok(json!({
        "sentences": examples,
        "skipped": skipped,
        "targets": targets,
        "vocabulary": masker.vocabulary().len(),
    }))
}

fn label_map(path: &Option<PathBuf>) -> CliResult<BTreeMap<String, String>> {
    Ok(match path {
        Some(p) => nerdata::load_label_map(p)?,
        None => BTreeMap::new(),
    })
}

fn run_ner_stats(args: NerStatsArgs) -> CliResult<Value> {
    let names = label_map(&args.labels)?;
    let mut files = Vec::new();
    for path in &args.input {
        let split = nerdata::parse_conll(path)?;
        let st = nerdata::dataset_stats(&split);
        let per_type: BTreeMap<&str, Value> = st
            .per_type
            .iter()
            .map(|(ty, c)| {
                let name = names.get(ty).unwrap_or(ty);
                (
                    name.as_str(),
                    json!({"count": c.count, "percentage": c.percentage}),
                )
            })
            .collect();
        files.push(json!({
            "path": path.display().to_string(),
            "sentence_count": st.sentence_count,
            "mention_count": st.mention_count,
            "per_type": per_type,
        }));
    }
    let summary = json!({ "files": files });
    if let Some(out) = &args.output {
        write_json(out, &summary)?;
    }
    Ok(summary)
}

fn write_json(path: &Path, v: &Value) -> CliResult<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| Error::Invalid(e.to_string()))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn run_eval(args: EvalArgs) -> CliResult<Value> {
    let gold = nerdata::parse_conll(&args.gold)?;
    let pred = nerdata::parse_conll(&args.pred)?;
    let report = eval::score(&gold, &pred)?;
    let names = label_map(&args.labels)?;

    let mut summary = serde_json::to_value(&report).map_err(|e| Error::Invalid(e.to_string()))?;
    if let (Some(from), Some(to)) = (&args.from, &args.to) {
        let rate = report.misclassification_rate(from, to);
        let label = if from == to {
            "correctly classified"
        } else {
            "misclassified"
        };
        summary["misclassification"] = json!({
            "from": from,
            "to": to,
            "rate": rate,
            "label": label,
        });
    }
    if let Some(out) = &args.output {
        write_json(out, &summary)?;
    }
    if let Some(table) = &args.table {
        std::fs::write(table, report.to_table(&names)).map_err(|e| Error::Io {
            path: table.clone(),
            source: e,
        })?;
    }
    Ok(summary)
}

fn run_overlap(args: OverlapArgs) -> CliResult<Value> {
    if args.corpora.is_empty() && args.conll.is_empty() {
        return Err(Failure::Usage(
            "at least one --corpus or --conll is required".into(),
        ));
    }
    let stop: HashSet<String> = match &args.stopwords {
        Some(p) => read_type_list(p)?.into_iter().collect(),
        None => stopwords::english(),
    };
    let mut named: Vec<(String, Vec<String>)> = Vec::new();
    for (name, path) in &args.corpora {
        let mut tokens = Vec::new();
        for doc in load_corpus(path, args.format.into())? {
            for s in doc?.sentences {
                tokens.extend(s.tokens.into_iter().map(|t| t.text));
            }
        }
        named.push((name.clone(), tokens));
    }
    for (name, path) in &args.conll {
        let tokens = nerdata::parse_conll(path)?
            .into_iter()
            .flat_map(|s| s.tokens.into_iter().map(|t| t.text))
            .collect();
        named.push((name.clone(), tokens));
    }
    let m = vocab_overlap(named, args.top_k, &stop)?;
    let summary = serde_json::to_value(&m).map_err(|e| Error::Invalid(e.to_string()))?;
    if let Some(out) = &args.output {
        write_json(out, &summary)?;
    }
    Ok(summary)
}

fn run_pre_annotate(args: PreAnnotateArgs) -> CliResult<Value> {
    let g = load_gazetteer(&args.gazetteer, None)?;
    let h = hierarchy_from(&args.hierarchy)?;
    let mut out = create(&args.output)?;
    let (mut sentences, mut mentions, mut review, mut ambiguous) = (0usize, 0usize, 0usize, 0usize);
    map_ordered(
        sentences_of(&args.corpus)?,
        DEFAULT_BATCH,
        |s| {
            let p = pre_annotate(&s, &g, &h);
            (s, p)
        },
        |(s, p)| {
            sentences += 1;
            mentions += p.tags.iter().filter(|t| t.starts_with("B-")).count();
            review += p.review.len();
            ambiguous += p.ambiguous.len();
            let record = json!({
                "doc_id": s.doc_id,
                "sentence_index": s.index,
                "tokens": s.texts().collect::<Vec<_>>(),
                "tags": p.tags,
                "review": p.review,
                "ambiguous": p.ambiguous,
            });
            out.write_all(record.to_string().as_bytes())?;
            out.write_all(b"\n")?;
            Ok(())
        },
    )?;
    out.flush()?;
    Ok(json!({
        "sentences": sentences,
        "mentions": mentions,
        "review_flags": review,
        "ambiguous": ambiguous,
    }))
}

fn run_subsample(args: SubsampleArgs) -> CliResult<Value> {
    let train = nerdata::parse_conll(&args.input)?;
    if args.n > train.len() {
        return Err(Failure::Usage(format!(
            "--n {} exceeds the {} sentences in {}",
            args.n,
            train.len(),
            args.input.display()
        )));
    }
    let sample = nerdata::subsample(&train, args.n, args.seed)?;
    nerdata::write_conll(&args.output, &sample)?;
    Ok(json!({ "input_sentences": train.len(), "sentences": sample.len() }))
}

fn run_joint(args: JointArgs) -> CliResult<Value> {
    let source = nerdata::parse_conll(&args.source)?;
    let target = nerdata::parse_conll(&args.target)?;
    let joint = nerdata::build_joint(
        &source,
        &target,
        &JointConfig {
            multiplier: args.multiplier,
        },
    )?;
    nerdata::write_conll(&args.output, &joint)?;
    Ok(json!({
        "source_sentences": source.len(),
        "target_sentences": target.len(),
        "multiplier": args.multiplier,
        "sentences": joint.len(),
    }))
}

fn dispatch(command: Command) -> CliResult<Value> {
    match command {
        Command::Stats(a) => run_stats(a),
        Command::Extract(a) => run_extract(a),
        Command::Mask(a) => run_mask(a),
        Command::NerStats(a) => run_ner_stats(a),
        Command::Eval(a) => run_eval(a),
        Command::Overlap(a) => run_overlap(a),
        Command::PreAnnotate(a) => run_pre_annotate(a),
        Command::Subsample(a) => run_subsample(a),
        Command::Joint(a) => run_joint(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));

    let result = with_workers(workers, || dispatch(cli.command)).unwrap_or_else(|e| Err(e.into()));
    match result {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
