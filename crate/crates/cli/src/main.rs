//! `wordvec`: train, evaluate and query word vectors from the command line.
//!
//! Exit codes: 0 on success, 1 for runtime or data errors, 2 for usage
//! errors.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::error::ErrorKind;
use clap::{ArgGroup, Args, CommandFactory, Parser, Subcommand, ValueEnum};
use wordvec::corpus::{build_vocabulary, encode, with_tokens, EncodedCorpus, VocabOptions};
use wordvec::eval::{
    answer_analogy, evaluate, nearest_neighbors, odd_one_out, parse_questions, relation_vector,
    sentence_completion_score, EvalOptions, Query, WordVectors,
};
use wordvec::huffman::{build_huffman, expected_code_length};
use wordvec::io::{load_vectors, save_vectors_binary, save_vectors_text, Checkpoint, VectorFormat};
use wordvec::model::{
    complexity_estimate, Architecture, ComplexityParams, ModelKind, OutputLayer, SigmoidMode,
    StepOptions, TrainingConfig,
};
use wordvec::trainer::{NoHooks, RunOptions, StderrProgress, Trainer};

#[derive(Parser)]
#[command(name = "wordvec", version, about = "CBOW and Skip-gram word vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train vectors on a whitespace-tokenized, newline-delimited corpus.
    Train(TrainArgs),
    /// Score vectors on a word-analogy question file.
    Eval(EvalArgs),
    /// Query a vector file or checkpoint.
    Query(QueryArgs),
    /// Print the training complexity of a model architecture.
    Complexity(ComplexityArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("arch").args(["cbow", "skipgram"])))]
#[command(group(ArgGroup::new("out").required(true).multiple(true).args(["output", "checkpoint"])))]
struct TrainArgs {
    /// Training text.
    corpus: PathBuf,
    /// Continuous bag-of-words.
    #[arg(long)]
    cbow: bool,
    /// Continuous skip-gram (the default).
    #[arg(long)]
    skipgram: bool,
    /// Vector dimensionality.
    #[arg(long, visible_alias = "dim", default_value_t = 300, value_parser = clap::value_parser!(u32).range(1..))]
    size: u32,
    /// Maximum context radius [default: 4 for CBOW, 5 for Skip-gram].
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    window: Option<u32>,
    /// Discard words seen fewer times than this.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    min_count: u64,
    /// Keep at most this many of the most frequent words.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    max_vocab: Option<u64>,
    /// Starting learning rate.
    #[arg(long, default_value_t = 0.025, value_parser = positive_f32)]
    alpha: f32,
    /// Passes over the corpus.
    #[arg(long, visible_alias = "iter", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    epochs: u32,
    /// Worker threads. Runs with more than one are not reproducible.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
    /// Random seed; drawn from the OS and printed when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Always use the full window instead of sampling its radius.
    #[arg(long)]
    static_window: bool,
    /// Lowercase the corpus while reading.
    #[arg(long)]
    lowercase: bool,
    /// Split longer lines into pieces of this many words.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    max_sentence_length: u64,
    /// Evaluate the logistic function exactly instead of by table lookup.
    #[arg(long)]
    exact_sigmoid: bool,
    /// Write vectors here.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write vectors in the binary format instead of text.
    #[arg(long, requires = "output")]
    binary: bool,
    /// Write a checkpoint that `--resume` can continue from.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Write the vocabulary with counts here.
    #[arg(long)]
    save_vocab: Option<PathBuf>,
    /// Continue the run stored in a checkpoint. Model flags are taken from
    /// the checkpoint; the corpus must be the one it was trained on.
    #[arg(long, conflicts_with_all = ["arch", "size", "window", "min_count", "max_vocab", "alpha", "epochs", "seed", "static_window", "exact_sigmoid"])]
    resume: Option<PathBuf>,
    /// Stop after this many positions (with --checkpoint, to train in pieces).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_positions: Option<u64>,
    /// No progress lines on standard error.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Auto,
    Text,
    Binary,
}

impl From<FormatArg> for VectorFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Auto => VectorFormat::Auto,
            FormatArg::Text => VectorFormat::Text,
            FormatArg::Binary => VectorFormat::Binary,
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Vector file or checkpoint.
    vectors: PathBuf,
    /// Question file: ": category" headers followed by four words per line.
    questions: PathBuf,
    /// Search and accept questions only within the most frequent N words.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    restrict_vocab: Option<u64>,
    /// Match question words ignoring case.
    #[arg(long)]
    case_insensitive: bool,
    /// One JSON object per line instead of a table.
    #[arg(long)]
    json: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
}

#[derive(Args)]
struct QueryArgs {
    /// Vector file or checkpoint.
    model: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
    #[command(subcommand)]
    query: QueryCommand,
}

#[derive(Subcommand)]
enum QueryCommand {
    /// Words with the highest cosine similarity.
    Nearest {
        word: String,
        #[arg(short, long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Answer "a is to b as c is to ?".
    Analogy {
        a: String,
        b: String,
        c: String,
        /// Print the k best candidates with their cosines.
        #[arg(short, long, value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        restrict_vocab: Option<u64>,
    },
    /// The word least similar to the mean of all of them.
    OddOneOut {
        #[arg(required = true, num_args = 3..)]
        words: Vec<String>,
    },
    /// Score candidates for the blank in a sentence (needs a checkpoint).
    Complete {
        /// Sentence containing the blank marker once.
        sentence: String,
        #[arg(required = true, num_args = 2..)]
        candidates: Vec<String>,
        #[arg(long, default_value = "___")]
        blank: String,
        /// Context radius [default: the training window].
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        window: Option<u32>,
        #[arg(long)]
        lowercase: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ArchArg {
    Nnlm,
    Rnnlm,
    Cbow,
    Skipgram,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Full,
    Hierarchical,
}

#[derive(Args)]
struct ComplexityArgs {
    #[arg(long, value_enum)]
    arch: ArchArg,
    /// Context words N.
    #[arg(long)]
    n: Option<f64>,
    /// Vector dimensionality D.
    #[arg(long, visible_alias = "size")]
    dim: Option<f64>,
    /// Hidden layer size H.
    #[arg(long)]
    hidden: Option<f64>,
    /// Vocabulary size V.
    #[arg(long)]
    vocab: Option<f64>,
    /// Maximum skip-gram distance C.
    #[arg(long)]
    c: Option<f64>,
    /// Epochs E.
    #[arg(long)]
    epochs: Option<f64>,
    /// Training words T.
    #[arg(long)]
    tokens: Option<f64>,
    /// Output layer [default: full for NNLM/RNNLM, hierarchical otherwise].
    #[arg(long, value_enum)]
    output_layer: Option<OutputArg>,
    /// Use this mean code length instead of log2(V).
    #[arg(long, conflicts_with = "output_layer")]
    code_length: Option<f64>,
    #[arg(long)]
    json: bool,
}

fn positive_f32(s: &str) -> Result<f32, String> {
    match s.parse::<f32>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

/// A problem with the command line found after parsing.
fn usage(kind: ErrorKind, message: impl std::fmt::Display) -> anyhow::Error {
    anyhow::Error::new(Cli::command().error(kind, message))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(args) => cmd_train(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Query(args) => cmd_query(args),
        Command::Complexity(args) => cmd_complexity(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast::<clap::Error>() {
            Ok(usage) => {
                let _ = usage.print();
                ExitCode::from(2)
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn read_corpus(
    path: &Path,
    lowercase: bool,
    vocab: &wordvec::corpus::Vocabulary,
    max_len: usize,
) -> anyhow::Result<EncodedCorpus> {
    let (corpus, _) = with_tokens(open(path)?, lowercase, |t| encode(t, vocab, Some(max_len)))
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(corpus)
}

fn cmd_train(args: TrainArgs) -> anyhow::Result<()> {
    let max_len = args.max_sentence_length as usize;
    let resumed = args.resume.as_deref().map(Checkpoint::load).transpose()?;

    let (vocab, config, seed_note) = match &resumed {
        Some(ckpt) => (ckpt.vocab.clone(), ckpt.config.clone(), "from checkpoint"),
        None => {
            let opts = VocabOptions {
                min_count: args.min_count,
                max_vocab: args.max_vocab.map(|m| m as usize),
            };
            let (vocab, skipped) = with_tokens(open(&args.corpus)?, args.lowercase, |t| {
                build_vocabulary(t, opts)
            })
            .with_context(|| format!("reading {}", args.corpus.display()))?;
            if skipped > 0 {
                eprintln!("skipped {skipped} tokens that are not valid UTF-8");
            }
            let architecture = if args.cbow {
                Architecture::Cbow
            } else {
                Architecture::SkipGram
            };
            let (seed, note) = match args.seed {
                Some(s) => (s, "given"),
                None => {
                    let mut buf = [0u8; 8];
                    getrandom::getrandom(&mut buf)
                        .map_err(|e| anyhow::anyhow!("cannot draw a random seed: {e}"))?;
                    (u64::from_le_bytes(buf), "drawn from the OS")
                }
            };
            let config = TrainingConfig {
                architecture,
                dim: args.size as usize,
                window: args
                    .window
                    .map_or(architecture.default_window(), |w| w as usize),
                epochs: args.epochs as usize,
                alpha: args.alpha,
                min_count: args.min_count,
                workers: args.threads as usize,
                seed,
                static_window: args.static_window,
                step: StepOptions {
                    sigmoid: if args.exact_sigmoid {
                        SigmoidMode::Exact
                    } else {
                        SigmoidMode::Table
                    },
                    cbow_mean_gradient: false,
                },
                ..Default::default()
            };
            (vocab?, config, note)
        }
    };
    let config = TrainingConfig {
        workers: args.threads as usize,
        ..config
    };

    let corpus = read_corpus(&args.corpus, args.lowercase, &vocab, max_len)?;
    let coding = match &resumed {
        Some(ckpt) => ckpt.coding.clone(),
        None => build_huffman(&vocab)?,
    };
    let mut trainer = match &resumed {
        Some(ckpt) => Trainer::resume(
            &corpus,
            &coding,
            config.clone(),
            ckpt.params.clone(),
            ckpt.state.clone(),
        )?,
        None => Trainer::new(&corpus, &coding, config.clone())?,
    };
    if let Some(ckpt) = &resumed {
        if ckpt.corpus_tokens != corpus.num_tokens() as u64 {
            bail!(
                "checkpoint was trained on {} tokens but {} has {}",
                ckpt.corpus_tokens,
                args.corpus.display(),
                corpus.num_tokens()
            );
        }
    }

    let report = match args.max_positions {
        Some(n) => {
            let start = std::time::Instant::now();
            let done = trainer.run_positions(n);
            let secs = start.elapsed().as_secs_f64();
            wordvec::trainer::TrainReport {
                positions: done,
                workers: 1,
                elapsed_secs: secs,
                words_per_second: done as f64 / secs.max(1e-9),
                ..Default::default()
            }
        }
        None if args.quiet => trainer.run(&NoHooks, &RunOptions::default()),
        None => trainer.run(&StderrProgress, &RunOptions::default()),
    };

    if let Some(path) = &args.save_vocab {
        let mut out = BufWriter::new(File::create(path)?);
        vocab.write_text(&mut out)?;
        out.flush()?;
    }
    if let Some(path) = &args.checkpoint {
        Checkpoint::from_trainer(&trainer, &vocab, &corpus, &coding).save(path)?;
    }
    if let Some(path) = &args.output {
        let wv = WordVectors::from_params(&vocab, trainer.params())?;
        if args.binary {
            save_vectors_binary(&wv, path)?;
        } else {
            save_vectors_text(&wv, path)?;
        }
    }

    let ecl = expected_code_length(&coding, &vocab)?;
    let arch = match config.architecture {
        Architecture::Cbow => "cbow",
        Architecture::SkipGram => "skipgram",
    };
    println!("architecture      {arch}");
    println!("vocabulary        {}", vocab.len());
    println!("tokens            {}", corpus.num_tokens());
    println!("sentences         {}", corpus.num_sentences());
    println!("dimensions        {}", config.dim);
    println!("window            {}", config.window);
    println!("epochs            {}", config.epochs);
    println!("seed              {} ({seed_note})", config.seed);
    println!("workers           {}", report.workers);
    println!("positions         {}", report.positions);
    println!("skipped positions {}", report.skipped_positions);
    println!("seconds           {:.2}", report.elapsed_secs);
    println!("words/second      {:.0}", report.words_per_second);
    println!("final lr          {:.6}", report.final_lr);
    println!("mean code length  {ecl:.4}");
    println!("finished          {}", trainer.is_finished());
    Ok(())
}

fn is_checkpoint(path: &Path) -> anyhow::Result<bool> {
    let mut magic = [0u8; 8];
    let mut f = open(path)?;
    let n = f.read(&mut magic)?;
    Ok(n == 8 && &magic == b"WORDVEC\0")
}

fn load_model(path: &Path, format: FormatArg) -> anyhow::Result<(WordVectors, Option<Checkpoint>)> {
    if is_checkpoint(path)? {
        let ckpt = Checkpoint::load(path)?;
        let wv = WordVectors::from_params(&ckpt.vocab, &ckpt.params)?;
        Ok((wv, Some(ckpt)))
    } else {
        let wv = load_vectors(path, format.into())
            .with_context(|| format!("loading {}", path.display()))?;
        Ok((wv, None))
    }
}

fn cmd_eval(args: EvalArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.questions)
        .with_context(|| format!("cannot read {}", args.questions.display()))?;
    let questions =
        parse_questions(&text).with_context(|| format!("parsing {}", args.questions.display()))?;
    let (wv, _) = load_model(&args.vectors, args.format)?;
    let opts = EvalOptions {
        restrict_vocab: args.restrict_vocab.map(|r| r as usize),
        case_insensitive: args.case_insensitive,
        threads: args.threads,
    };
    let report = evaluate(&wv, &questions, &opts)?;
    if args.json {
        print!("{}", report.json_lines());
    } else {
        print!("{report}");
    }
    Ok(())
}

fn check_known(wv: &WordVectors, words: &[&str]) -> anyhow::Result<()> {
    let missing: Vec<String> = words
        .iter()
        .filter(|w| wv.vocab().index_of(w).is_none())
        .map(|w| w.to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(wordvec::Error::OutOfVocabulary(missing).into())
    }
}

fn cmd_query(args: QueryArgs) -> anyhow::Result<()> {
    let (wv, ckpt) = load_model(&args.model, args.format)?;
    match args.query {
        QueryCommand::Nearest { word, k } => {
            for n in nearest_neighbors(&wv, Query::Word(&word), k as usize, &[])? {
                println!("{}\t{:.6}", n.word, n.cosine);
            }
        }
        QueryCommand::Analogy {
            a,
            b,
            c,
            k,
            restrict_vocab,
        } => {
            check_known(&wv, &[&a, &b, &c])?;
            let restrict = restrict_vocab.map(|r| r as usize);
            match k {
                None => match answer_analogy(&wv, &a, &b, &c, restrict)? {
                    Some(d) => println!("{d}"),
                    None => {
                        bail!("no answer: the words fall outside --restrict-vocab or cancel out")
                    }
                },
                Some(k) => {
                    let unit = wv.normalized()?;
                    let mut x = relation_vector(&unit, &[(a.as_str(), b.as_str())])?;
                    let vc = unit.get(&c).expect("checked above");
                    x.iter_mut().zip(vc).for_each(|(x, v)| *x += v);
                    let pool = match restrict {
                        Some(r) if r < unit.len() => truncated(&unit, r)?,
                        _ => unit,
                    };
                    let exclude = [a.as_str(), b.as_str(), c.as_str()];
                    for n in nearest_neighbors(&pool, Query::Vector(&x), k as usize, &exclude)? {
                        println!("{}\t{:.6}", n.word, n.cosine);
                    }
                }
            }
        }
        QueryCommand::OddOneOut { words } => {
            let refs: Vec<&str> = words.iter().map(String::as_str).collect();
            println!("{}", odd_one_out(&wv, &refs)?);
        }
        QueryCommand::Complete {
            sentence,
            candidates,
            blank,
            window,
            lowercase,
        } => {
            let Some(ckpt) = ckpt else {
                bail!("sentence completion needs a checkpoint (train with --checkpoint)");
            };
            let sentence = if lowercase {
                sentence.to_lowercase()
            } else {
                sentence
            };
            let tokens: Vec<&str> = sentence.split_whitespace().collect();
            let cands: Vec<&str> = candidates.iter().map(String::as_str).collect();
            let window = window.map_or(ckpt.config.window, |w| w as usize);
            let done = sentence_completion_score(
                &ckpt.params,
                &ckpt.coding,
                &ckpt.vocab,
                &tokens,
                &blank,
                &cands,
                window,
            )?;
            for s in &done.scores {
                match s.score {
                    Some(v) => println!("{}\t{v:.6}", s.word),
                    None => println!("{}\tout-of-vocabulary", s.word),
                }
            }
            println!("best\t{}", done.best);
        }
    }
    Ok(())
}

/// The first `n` words of `wv`.
fn truncated(wv: &WordVectors, n: usize) -> anyhow::Result<WordVectors> {
    let mut vocab = wv.vocab().clone();
    vocab.truncate(n);
    let values = wv.as_slice()[..n * wv.dim()].to_vec();
    Ok(WordVectors::new(vocab, values, wv.dim())?.normalized()?)
}

fn cmd_complexity(args: ComplexityArgs) -> anyhow::Result<()> {
    let kind = match args.arch {
        ArchArg::Nnlm => ModelKind::Nnlm,
        ArchArg::Rnnlm => ModelKind::Rnnlm,
        ArchArg::Cbow => ModelKind::Cbow,
        ArchArg::Skipgram => ModelKind::SkipGram,
    };
    let output = match (args.code_length, args.output_layer) {
        (Some(l), _) => Some(OutputLayer::CodeLength(l)),
        (None, Some(OutputArg::Full)) => Some(OutputLayer::Full),
        (None, Some(OutputArg::Hierarchical)) => Some(OutputLayer::Hierarchical),
        (None, None) => None,
    };
    let params = ComplexityParams {
        n: args.n,
        d: args.dim,
        h: args.hidden,
        v: args.vocab,
        c: args.c,
        e: args.epochs,
        t: args.tokens,
        output,
    };
    let est = match complexity_estimate(kind, &params) {
        Ok(est) => est,
        Err(wordvec::Error::MissingParameter(name)) => {
            let flag = match name {
                "N" => "--n",
                "D" => "--dim",
                "H" => "--hidden",
                "V" => "--vocab",
                "C" => "--c",
                _ => "",
            };
            return Err(usage(
                ErrorKind::MissingRequiredArgument,
                format!("missing parameter {name} ({flag}) for --arch {kind}"),
            ));
        }
        Err(e) => return Err(e.into()),
    };
    if args.json {
        let rec = serde_json::json!({ "arch": kind.to_string(), "q": est.q, "o": est.o });
        println!("{rec}");
    } else {
        println!("Q = {:.4}", est.q);
        match est.o {
            Some(o) => println!("O = {o:.6e}"),
            None => println!("O = n/a (needs --epochs and --tokens)"),
        }
    }
    Ok(())
}
