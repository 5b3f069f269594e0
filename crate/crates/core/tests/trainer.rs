use std::sync::Mutex;
use std::time::Duration;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wordvec::corpus::{
    build_vocabulary, encode, tokenize, EncodedCorpus, VocabOptions, Vocabulary,
};
use wordvec::eval::{dot, WordVectors};
use wordvec::huffman::{build_huffman, HuffmanCoding};
use wordvec::model::{Architecture, TrainingConfig};
use wordvec::trainer::{
    learning_rate, sample_window, shard_corpus, train, train_with_hooks, RunOptions, TrainHooks,
    TrainProgress,
};

struct Prepared {
    vocab: Vocabulary,
    corpus: EncodedCorpus,
    coding: HuffmanCoding,
}

fn prepare(text: &str) -> Prepared {
    let tokens = tokenize(text, false);
    let opts = VocabOptions {
        min_count: 1,
        max_vocab: None,
    };
    let vocab = build_vocabulary(tokens.iter().cloned(), opts).unwrap();
    let corpus = encode(tokens, &vocab, None);
    let coding = build_huffman(&vocab).unwrap();
    Prepared {
        vocab,
        corpus,
        coding,
    }
}

/// Random sentences over a small vocabulary, including one-word lines.
fn random_text(seed: u64, lines: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    for _ in 0..lines {
        let len = rng.gen_range(1..15);
        let words: Vec<String> = (0..len)
            .map(|_| format!("t{}", rng.gen_range(0..40u32).pow(2) / 40))
            .collect();
        text.push_str(&words.join(" "));
        text.push('\n');
    }
    text
}

fn config(arch: Architecture) -> TrainingConfig {
    TrainingConfig {
        architecture: arch,
        dim: 8,
        window: 3,
        epochs: 2,
        min_count: 1,
        ..Default::default()
    }
}

#[derive(Default)]
struct Recorder {
    pairs: Mutex<Vec<(usize, usize, usize)>>,
    progress: Mutex<Vec<TrainProgress>>,
}

impl TrainHooks for Recorder {
    fn progress(&self, p: &TrainProgress) {
        self.progress.lock().unwrap().push(p.clone());
    }

    fn pair(&self, sentence: usize, center: usize, context: usize) {
        self.pairs.lock().unwrap().push((sentence, center, context));
    }
}

#[test]
fn single_worker_training_is_reproducible() {
    let p = prepare(&random_text(1, 300));
    for arch in [Architecture::Cbow, Architecture::SkipGram] {
        let (a, _) = train(&p.corpus, &p.coding, &config(arch)).unwrap();
        let (b, _) = train(&p.corpus, &p.coding, &config(arch)).unwrap();
        assert_eq!(a, b);
        let other = TrainingConfig {
            seed: 2,
            ..config(arch)
        };
        let (c, _) = train(&p.corpus, &p.coding, &other).unwrap();
        assert_ne!(a, c);
    }
}

#[test]
fn pairs_stay_inside_sentences_and_windows() {
    let p = prepare(&random_text(2, 200));
    for arch in [Architecture::Cbow, Architecture::SkipGram] {
        let cfg = config(arch);
        let rec = Recorder::default();
        train_with_hooks(&p.corpus, &p.coding, &cfg, &rec, &RunOptions::default()).unwrap();
        let pairs = rec.pairs.into_inner().unwrap();
        assert!(!pairs.is_empty());
        for (s, center, context) in pairs {
            let len = p.corpus.sentence(s).len();
            assert!(center < len && context < len);
            assert_ne!(center, context);
            assert!(center.abs_diff(context) <= cfg.window);
        }
    }
}

#[test]
fn sampled_windows_are_symmetric_and_use_every_radius() {
    // One long sentence so that truncation only happens at the ends.
    let p = prepare(&"a b c d e f g h ".repeat(200));
    let cfg = TrainingConfig {
        epochs: 1,
        window: 4,
        ..config(Architecture::Cbow)
    };
    let rec = Recorder::default();
    train_with_hooks(&p.corpus, &p.coding, &cfg, &rec, &RunOptions::default()).unwrap();
    let pairs = rec.pairs.into_inner().unwrap();
    let len = p.corpus.sentence(0).len();
    let mut radius_seen = [false; 5];
    for center in 4..len - 4 {
        let ctx: Vec<usize> = pairs
            .iter()
            .filter(|q| q.1 == center)
            .map(|q| q.2)
            .collect();
        let r = ctx.len() / 2;
        assert_eq!(ctx.len(), 2 * r);
        let expected: Vec<usize> = (center - r..=center + r).filter(|&j| j != center).collect();
        assert_eq!(ctx, expected);
        radius_seen[r] = true;
    }
    assert_eq!(radius_seen, [false, true, true, true, true]);
}

#[test]
fn static_cbow_window_uses_four_history_and_four_future_words() {
    let p = prepare(&"a b c d e f g h i j ".repeat(5));
    let cfg = TrainingConfig {
        epochs: 1,
        window: 4,
        static_window: true,
        ..config(Architecture::Cbow)
    };
    let rec = Recorder::default();
    train_with_hooks(&p.corpus, &p.coding, &cfg, &rec, &RunOptions::default()).unwrap();
    let pairs = rec.pairs.into_inner().unwrap();
    let len = p.corpus.sentence(0).len();
    for center in 0..len {
        let n = pairs.iter().filter(|q| q.1 == center).count();
        let expected = center.min(4) + (len - 1 - center).min(4);
        assert_eq!(n, expected, "position {center}");
    }
}

#[test]
fn every_position_is_visited_once_per_epoch() {
    let p = prepare(&random_text(3, 500));
    let singletons = p.corpus.sentences().filter(|s| s.len() == 1).count() as u64;
    assert!(singletons > 0);
    for workers in [1, 2, 3, 7] {
        let cfg = TrainingConfig {
            workers,
            epochs: 3,
            ..config(Architecture::SkipGram)
        };
        let (params, report) = train(&p.corpus, &p.coding, &cfg).unwrap();
        assert_eq!(report.positions, 3 * p.corpus.num_tokens() as u64);
        assert_eq!(report.skipped_positions, 3 * singletons);
        assert!(report.workers <= workers);
        assert!(params.all_finite());
    }
}

#[test]
fn more_workers_than_sentences_degrades_gracefully() {
    let p = prepare("a b c\nd e\n");
    let cfg = TrainingConfig {
        workers: 16,
        ..config(Architecture::SkipGram)
    };
    let (_, report) = train(&p.corpus, &p.coding, &cfg).unwrap();
    assert_eq!(report.workers, 2);
    assert_eq!(report.positions, 2 * 5);
}

#[test]
fn reported_learning_rate_never_increases() {
    let p = prepare(&random_text(4, 20_000));
    let cfg = TrainingConfig {
        epochs: 2,
        ..config(Architecture::Cbow)
    };
    let rec = Recorder::default();
    let opts = RunOptions {
        report_interval: Duration::ZERO,
    };
    let (_, report) = train_with_hooks(&p.corpus, &p.coding, &cfg, &rec, &opts).unwrap();
    let progress = rec.progress.into_inner().unwrap();
    assert!(progress.len() > 10);
    let floor = cfg.alpha * cfg.lr_floor_ratio;
    for w in progress.windows(2) {
        assert!(w[1].current_lr <= w[0].current_lr);
        assert!(w[1].words_processed >= w[0].words_processed);
    }
    for p in &progress {
        assert!(p.current_lr >= floor && p.current_lr <= cfg.alpha);
    }
    assert!(report.final_lr < cfg.alpha * 0.01);
}

#[test]
fn learning_rate_schedule() {
    assert_eq!(learning_rate(0, 1000, 0.025, 1e-4).unwrap(), 0.025);
    // The floor takes over at the end once the run is at least 10^4 words.
    assert_eq!(
        learning_rate(100_000, 100_000, 0.025, 1e-4).unwrap(),
        0.025 * 1e-4
    );
    let short = learning_rate(1000, 1000, 0.025, 1e-4).unwrap();
    assert!((short - 0.025 / 1001.0).abs() < 1e-9);
    let half = learning_rate(500_000, 1_000_000, 0.025, 1e-4).unwrap();
    assert!((half as f64 - 0.0125).abs() <= 0.025 / 1e6 + 1e-9);
    assert!(learning_rate(0, 0, 0.025, 1e-4).is_err());
}

#[test]
fn window_radius_is_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    assert!((0..100).all(|_| sample_window(1, &mut rng) == 1));
    let mut freq = [0usize; 6];
    let draws = 1_000_000;
    for _ in 0..draws {
        freq[sample_window(5, &mut rng)] += 1;
    }
    assert_eq!(freq[0], 0);
    for &f in &freq[1..] {
        assert!((f as f64 / draws as f64 - 0.2).abs() <= 0.005);
    }
}

#[test]
fn shard_examples() {
    let corpus = EncodedCorpus::from_sentences(&vec![vec![0u32; 3]; 10]);
    let one = shard_corpus(&corpus, 1);
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].sentences, 0..10);
    let two = shard_corpus(&corpus, 2);
    assert_eq!(two[0].sentences, 0..5);
    assert_eq!(two[1].sentences, 5..10);

    let lens = [6, 4, 6, 10, 8, 7];
    let sentences: Vec<Vec<u32>> = lens.iter().map(|&l| vec![0; l]).collect();
    let shards = shard_corpus(&EncodedCorpus::from_sentences(&sentences), 4);
    let sizes: Vec<usize> = shards.iter().map(|s| s.tokens).collect();
    assert!(
        sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 10,
        "{sizes:?}"
    );
}

proptest! {
    #[test]
    fn shards_partition_and_balance(
        lens in prop::collection::vec(1usize..40, 1..120),
        workers in 1usize..9,
    ) {
        let sentences: Vec<Vec<u32>> = lens.iter().map(|&l| vec![0; l]).collect();
        let corpus = EncodedCorpus::from_sentences(&sentences);
        let shards = shard_corpus(&corpus, workers);
        prop_assert!(!shards.is_empty() && shards.len() <= workers);
        let mut next = 0;
        for s in &shards {
            prop_assert_eq!(s.sentences.start, next);
            prop_assert_eq!(s.tokens, lens[s.sentences.clone()].iter().sum::<usize>());
            next = s.sentences.end;
        }
        prop_assert_eq!(next, lens.len());
        let sizes: Vec<usize> = shards.iter().map(|s| s.tokens).collect();
        let spread = sizes.iter().max().unwrap() - sizes.iter().min().unwrap();
        prop_assert!(spread <= *lens.iter().max().unwrap());
        if lens.len() >= workers * 2 && lens.iter().all(|&l| l == lens[0]) {
            prop_assert_eq!(shards.len(), workers);
        }
    }
}

fn cosine(wv: &WordVectors, a: &str, b: &str) -> f32 {
    let (x, y) = (wv.get(a).unwrap(), wv.get(b).unwrap());
    dot(x, y) / (dot(x, x).sqrt() * dot(y, y).sqrt())
}

#[test]
fn words_sharing_contexts_end_up_similar() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut text = String::new();
    for _ in 0..5000 {
        let line = match rng.gen_range(0..4) {
            0 => "x a y",
            1 => "x b y",
            2 => "u c v",
            _ => "u d v",
        };
        text.push_str(line);
        text.push('\n');
    }
    let p = prepare(&text);
    let cfg = TrainingConfig {
        dim: 4,
        window: 1,
        epochs: 1,
        ..config(Architecture::SkipGram)
    };
    let (params, _) = train(&p.corpus, &p.coding, &cfg).unwrap();
    let wv = WordVectors::from_params(&p.vocab, &params).unwrap();
    assert!(cosine(&wv, "a", "b") > cosine(&wv, "a", "c"));
    assert!(cosine(&wv, "c", "d") > cosine(&wv, "c", "b"));
    assert!(cosine(&wv, "a", "b") > 0.5);
}

#[test]
fn parallel_training_produces_usable_vectors() {
    let p = prepare(&random_text(7, 2000));
    let cfg = TrainingConfig {
        workers: 4,
        ..config(Architecture::SkipGram)
    };
    let (params, report) = train(&p.corpus, &p.coding, &cfg).unwrap();
    assert_eq!(report.workers, 4);
    assert!(params.all_finite());
    assert_eq!(report.positions, 2 * p.corpus.num_tokens() as u64);
}

#[test]
fn empty_corpus_is_rejected() {
    let p = prepare("a b\n");
    let empty = EncodedCorpus::new();
    assert!(train(&empty, &p.coding, &config(Architecture::Cbow)).is_err());
}
