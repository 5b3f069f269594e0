//! Epoch loop, dynamic windows, learning-rate schedule and parallel workers.
//!
//! Workers scan disjoint contiguous shards of the corpus and update the
//! same [`ModelParams`] without locks. A shared words-processed counter
//! drives the linearly decaying learning rate; each worker publishes its
//! progress to it every [`COUNTER_FLUSH_WORDS`] words. With a single worker
//! training runs on the calling thread and is fully deterministic.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
use std::time::Instant;
#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
use web_time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::EncodedCorpus;
use crate::error::{Error, Result};
use crate::huffman::HuffmanCoding;
use crate::model::{init_params, Architecture, ModelParams, Stepper, TrainingConfig};

/// Words a worker processes between updates of the shared counter.
pub const COUNTER_FLUSH_WORDS: u64 = 10_000;

// Worker generators draw from a different ChaCha stream than parameter
// initialization, which uses the same seed.
const WORKER_STREAM: u64 = 1;

/// Draw the effective window radius `R`, uniform on `1..=max_window`.
pub fn sample_window<R: Rng + ?Sized>(max_window: usize, rng: &mut R) -> usize {
    debug_assert!(max_window >= 1);
    if max_window <= 1 {
        1
    } else {
        rng.gen_range(1..=max_window)
    }
}

/// Linearly decaying learning rate with a floor at `alpha * floor_ratio`.
pub fn learning_rate(
    words_processed: u64,
    total_words: u64,
    alpha: f32,
    floor_ratio: f32,
) -> Result<f32> {
    if total_words == 0 {
        return Err(Error::EmptyCorpus);
    }
    Ok(schedule(words_processed, total_words, alpha, floor_ratio))
}

#[inline]
fn schedule(words_processed: u64, total_words: u64, alpha: f32, floor_ratio: f32) -> f32 {
    let progress = words_processed as f64 / (total_words as f64 + 1.0);
    let lr = alpha as f64 * (1.0 - progress);
    lr.max(alpha as f64 * floor_ratio as f64) as f32
}

/// A contiguous range of sentences assigned to one worker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shard {
    pub sentences: Range<usize>,
    pub tokens: usize,
}

/// Split the corpus into at most `workers` contiguous shards whose token
/// counts differ by at most the longest sentence. Empty shards are dropped,
/// so fewer shards than workers may be returned.
pub fn shard_corpus(corpus: &EncodedCorpus, workers: usize) -> Vec<Shard> {
    let workers = workers.max(1);
    let n = corpus.num_sentences();
    let total = corpus.num_tokens();
    if workers == 1 || n == 0 {
        return vec![Shard {
            sentences: 0..n,
            tokens: total,
        }];
    }

    // prefix[i] = tokens in sentences 0..i
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0usize);
    for s in corpus.sentences() {
        prefix.push(prefix.last().unwrap() + s.len());
    }

    // Boundary k sits on the last sentence start at or before k * total /
    // workers, or on the one after it.
    let mut options = vec![[0, 0]];
    for k in 1..workers {
        let target = total as f64 * k as f64 / workers as f64;
        let floor = prefix.partition_point(|&p| p as f64 <= target) - 1;
        options.push([floor, (floor + 1).min(n)]);
    }
    options.push([n, n]);
    let bounds = balanced_bounds(&prefix, &options);

    let shards: Vec<Shard> = bounds
        .windows(2)
        .filter(|b| prefix[b[1]] > prefix[b[0]])
        .map(|b| Shard {
            sentences: b[0]..b[1],
            tokens: prefix[b[1]] - prefix[b[0]],
        })
        .collect();
    if shards.is_empty() {
        vec![Shard {
            sentences: 0..n,
            tokens: total,
        }]
    } else {
        shards
    }
}

/// Pick one of the two candidates for every boundary. Preference order:
/// spread (largest minus smallest non-empty shard) within the longest
/// sentence, then fewest empty shards, then smallest spread. For each
/// candidate lower bound on shard size, a left-to-right pass finds the
/// smallest achievable maximum.
fn balanced_bounds(prefix: &[usize], options: &[[usize; 2]]) -> Vec<usize> {
    let size = |a: usize, b: usize| (b >= a).then(|| prefix[b] - prefix[a]);
    let longest = prefix.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    let mut floors: Vec<usize> = options
        .windows(2)
        .flat_map(|w| {
            let (x, y) = (w[0], w[1]);
            [(x[0], y[0]), (x[0], y[1]), (x[1], y[0]), (x[1], y[1])]
        })
        .filter_map(|(a, b)| size(a, b))
        .filter(|&s| s > 0)
        .collect();
    floors.sort_unstable();
    floors.dedup();

    let k = options.len();
    let mut best: Option<((bool, usize, usize), Vec<usize>)> = None;
    for &lo in &floors {
        // cost[c] = (largest shard, empty shards) so far with the boundary
        // at option c; back[i][c] = option chosen for the previous boundary.
        let mut cost = [Some((0usize, 0usize)), None];
        let mut back = vec![[0usize; 2]; k];
        for i in 1..k {
            let mut next: [Option<(usize, usize)>; 2] = [None, None];
            for c in 0..2 {
                for p in 0..2 {
                    let (Some((max, empty)), Some(s)) =
                        (cost[p], size(options[i - 1][p], options[i][c]))
                    else {
                        continue;
                    };
                    if s > 0 && s < lo {
                        continue;
                    }
                    let cand = (max.max(s), empty + (s == 0) as usize);
                    if next[c].is_none_or(|cur| cand < cur) {
                        next[c] = Some(cand);
                        back[i][c] = p;
                    }
                }
            }
            cost = next;
        }
        let Some((max, empty)) = cost[0] else {
            continue;
        };
        let spread = max - lo;
        let key = (spread > longest, empty, spread);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            let mut bounds = vec![0; k];
            let mut c = 0;
            for i in (0..k).rev() {
                bounds[i] = options[i][c];
                c = back[i][c];
            }
            best = Some((key, bounds));
        }
    }
    best.map(|(_, b)| b)
        .unwrap_or_else(|| options.iter().map(|o| o[0]).collect())
}

/// Progress snapshot passed to [`TrainHooks::progress`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrainProgress {
    pub epoch: usize,
    pub words_processed: u64,
    pub total_words: u64,
    pub current_lr: f32,
    pub words_per_second: f64,
}

impl TrainProgress {
    pub fn fraction(&self) -> f64 {
        self.words_processed as f64 / self.total_words.max(1) as f64
    }
}

/// Callbacks invoked during training. The default methods do nothing and
/// compile away.
pub trait TrainHooks: Sync {
    /// Called on worker 0 at most once per [`RunOptions::report_interval`].
    fn progress(&self, _progress: &TrainProgress) {}

    /// Called for every (center, context) position pair that is trained.
    /// For CBOW this is called once per context word of each step.
    #[inline(always)]
    fn pair(&self, _sentence: usize, _center: usize, _context: usize) {}
}

/// Hooks that do nothing.
pub struct NoHooks;

impl TrainHooks for NoHooks {}

/// Prints a progress line to standard error.
pub struct StderrProgress;

impl TrainHooks for StderrProgress {
    fn progress(&self, p: &TrainProgress) {
        eprintln!(
            "epoch {} | {:6.2}% | lr {:.6} | {:.0} words/s",
            p.epoch + 1,
            100.0 * p.fraction(),
            p.current_lr,
            p.words_per_second
        );
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub report_interval: Duration,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            report_interval: Duration::from_secs(1),
        }
    }
}

/// Counters from a training run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Target positions visited, including skipped ones.
    pub positions: u64,
    /// Hierarchical-softmax steps taken.
    pub steps: u64,
    /// Positions with no in-sentence neighbour.
    pub skipped_positions: u64,
    pub workers: usize,
    pub elapsed_secs: f64,
    pub words_per_second: f64,
    pub final_lr: f32,
}

impl TrainReport {
    fn merge(&mut self, other: &WorkerStats) {
        self.positions += other.positions;
        self.steps += other.steps;
        self.skipped_positions += other.skipped;
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct WorkerStats {
    positions: u64,
    steps: u64,
    skipped: u64,
}

/// Position of a single-worker run, sufficient to resume it exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainState {
    pub epoch: usize,
    pub sentence: usize,
    pub position: usize,
    pub words_processed: u64,
    pub rng_seed: [u8; 32],
    pub rng_word_pos: u128,
}

impl TrainState {
    fn start(seed: u64) -> Self {
        let rng = worker_rng(seed, 0);
        TrainState {
            epoch: 0,
            sentence: 0,
            position: 0,
            words_processed: 0,
            rng_seed: rng.get_seed(),
            rng_word_pos: rng.get_word_pos(),
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.rng_seed);
        rng.set_stream(WORKER_STREAM);
        rng.set_word_pos(self.rng_word_pos);
        rng
    }
}

fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(worker as u64));
    rng.set_stream(WORKER_STREAM);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cursor {
    epoch: usize,
    sentence: usize,
    position: usize,
}

struct Worker<'a, H> {
    corpus: &'a EncodedCorpus,
    coding: &'a HuffmanCoding,
    params: &'a ModelParams,
    config: &'a TrainingConfig,
    hooks: &'a H,
    counter: &'a AtomicU64,
    total_words: u64,
    shard: Range<usize>,
    cursor: Cursor,
    rng: ChaCha8Rng,
    stepper: Stepper,
    context: Vec<u32>,
    pending: u64,
    stats: WorkerStats,
    lr: f32,
    reporter: Option<Reporter>,
}

struct Reporter {
    start: Instant,
    last: Instant,
    interval: Duration,
}

impl<H: TrainHooks> Worker<'_, H> {
    fn finished(&self) -> bool {
        self.cursor.epoch >= self.config.epochs
    }

    /// Process up to `budget` positions; returns the number processed.
    fn run(&mut self, budget: u64) -> u64 {
        let mut done = 0;
        let window = self.config.window;
        while done < budget && !self.finished() {
            let sent_idx = self.cursor.sentence;
            if sent_idx >= self.shard.end {
                self.cursor = Cursor {
                    epoch: self.cursor.epoch + 1,
                    sentence: self.shard.start,
                    position: 0,
                };
                continue;
            }
            let sentence = self.corpus.sentence(sent_idx);
            if self.cursor.position >= sentence.len() {
                self.cursor.sentence += 1;
                self.cursor.position = 0;
                continue;
            }
            let t = self.cursor.position;

            self.lr = schedule(
                self.counter.load(Ordering::Relaxed) + self.pending,
                self.total_words,
                self.config.alpha,
                self.config.lr_floor_ratio,
            );

            let r = if self.config.static_window {
                window
            } else {
                sample_window(window, &mut self.rng)
            };
            let lo = t.saturating_sub(r);
            let hi = (t + r).min(sentence.len() - 1);
            let center = sentence[t] as usize;

            if lo == t && hi == t {
                self.stats.skipped += 1;
            } else {
                match self.config.architecture {
                    Architecture::SkipGram => {
                        for j in (lo..=hi).filter(|&j| j != t) {
                            self.hooks.pair(sent_idx, t, j);
                            self.stepper.skipgram(
                                self.params,
                                self.coding,
                                center,
                                sentence[j] as usize,
                                self.lr,
                            );
                            self.stats.steps += 1;
                        }
                    }
                    Architecture::Cbow => {
                        self.context.clear();
                        for j in (lo..=hi).filter(|&j| j != t) {
                            self.hooks.pair(sent_idx, t, j);
                            self.context.push(sentence[j]);
                        }
                        self.stepper
                            .cbow(self.params, self.coding, &self.context, center, self.lr);
                        self.stats.steps += 1;
                    }
                }
            }

            self.stats.positions += 1;
            self.cursor.position += 1;
            self.pending += 1;
            done += 1;
            if self.pending >= COUNTER_FLUSH_WORDS {
                self.flush();
            }
        }
        self.flush();
        done
    }

    fn flush(&mut self) {
        let now_total = self.counter.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if let Some(rep) = &mut self.reporter {
            let now = Instant::now();
            if now.duration_since(rep.last) >= rep.interval {
                rep.last = now;
                let secs = now.duration_since(rep.start).as_secs_f64().max(1e-9);
                self.hooks.progress(&TrainProgress {
                    epoch: self.cursor.epoch.min(self.config.epochs - 1),
                    words_processed: now_total,
                    total_words: self.total_words,
                    current_lr: self.lr,
                    words_per_second: now_total as f64 / secs,
                });
            }
        }
    }
}

/// Owns the parameters of a training run.
pub struct Trainer<'a> {
    corpus: &'a EncodedCorpus,
    coding: &'a HuffmanCoding,
    config: TrainingConfig,
    params: ModelParams,
    state: TrainState,
    report: TrainReport,
}

impl<'a> Trainer<'a> {
    /// Start a fresh run with parameters initialized from `config.seed`.
    pub fn new(
        corpus: &'a EncodedCorpus,
        coding: &'a HuffmanCoding,
        config: TrainingConfig,
    ) -> Result<Self> {
        let params = init_params(coding.num_words(), config.dim, config.seed)?;
        let state = TrainState::start(config.seed);
        Self::resume(corpus, coding, config, params, state)
    }

    /// Continue a run from saved parameters and state.
    pub fn resume(
        corpus: &'a EncodedCorpus,
        coding: &'a HuffmanCoding,
        config: TrainingConfig,
        params: ModelParams,
        state: TrainState,
    ) -> Result<Self> {
        config.validate()?;
        if corpus.num_tokens() == 0 {
            return Err(Error::EmptyCorpus);
        }
        if corpus.max_index_bound() > coding.num_words() {
            return Err(Error::SizeMismatch(format!(
                "corpus uses index {} but the coding has {} words",
                corpus.max_index_bound() - 1,
                coding.num_words()
            )));
        }
        if params.vocab_size() != coding.num_words() || params.dim() != config.dim {
            return Err(Error::SizeMismatch(format!(
                "parameters are {}x{}, expected {}x{}",
                params.vocab_size(),
                params.dim(),
                coding.num_words(),
                config.dim
            )));
        }
        if state.sentence > corpus.num_sentences() {
            return Err(Error::SizeMismatch(
                "training state points past the end of the corpus".into(),
            ));
        }
        Ok(Trainer {
            corpus,
            coding,
            config,
            params,
            state,
            report: TrainReport::default(),
        })
    }

    pub fn config(&self) -> &TrainingConfig {
        &self.config
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn into_params(self) -> ModelParams {
        self.params
    }

    pub fn state(&self) -> &TrainState {
        &self.state
    }

    pub fn total_words(&self) -> u64 {
        self.config.epochs as u64 * self.corpus.num_tokens() as u64
    }

    pub fn is_finished(&self) -> bool {
        self.state.epoch >= self.config.epochs
    }

    /// Train to completion. A run that was resumed part-way continues on
    /// a single worker, whatever the configured worker count.
    pub fn run<H: TrainHooks>(&mut self, hooks: &H, opts: &RunOptions) -> TrainReport {
        if self.is_finished() {
            return self.report.clone();
        }
        let fresh = self.state.words_processed == 0;
        let shards = shard_corpus(self.corpus, self.config.workers);
        if shards.len() <= 1 || !fresh {
            self.run_single(u64::MAX, hooks, opts);
        } else {
            self.run_parallel(&shards, hooks, opts);
        }
        self.report.clone()
    }

    /// Process at most `positions` target positions on the calling thread,
    /// ignoring the worker count. Returns the number processed.
    pub fn run_positions(&mut self, positions: u64) -> u64 {
        let before = self.report.positions;
        self.run_single(positions, &NoHooks, &RunOptions::default());
        self.report.positions - before
    }

    fn run_single<H: TrainHooks>(&mut self, budget: u64, hooks: &H, opts: &RunOptions) {
        let start = Instant::now();
        let counter = AtomicU64::new(self.state.words_processed);
        let mut worker = Worker {
            corpus: self.corpus,
            coding: self.coding,
            params: &self.params,
            config: &self.config,
            hooks,
            counter: &counter,
            total_words: self.total_words(),
            shard: 0..self.corpus.num_sentences(),
            cursor: Cursor {
                epoch: self.state.epoch,
                sentence: self.state.sentence,
                position: self.state.position,
            },
            rng: self.state.rng(),
            stepper: Stepper::new(self.config.dim, self.config.step),
            context: Vec::with_capacity(2 * self.config.window),
            pending: 0,
            stats: WorkerStats::default(),
            lr: self.config.alpha,
            reporter: Some(Reporter {
                start,
                last: start,
                interval: opts.report_interval,
            }),
        };
        worker.run(budget);

        let words = counter.load(Ordering::Relaxed);
        self.state = TrainState {
            epoch: worker.cursor.epoch,
            sentence: worker.cursor.sentence,
            position: worker.cursor.position,
            words_processed: words,
            rng_seed: worker.rng.get_seed(),
            rng_word_pos: worker.rng.get_word_pos(),
        };
        let stats = worker.stats;
        let lr = worker.lr;
        self.finish_report(&[stats], 1, start, lr);
    }

    fn run_parallel<H: TrainHooks>(&mut self, shards: &[Shard], hooks: &H, opts: &RunOptions) {
        let start = Instant::now();
        let counter = AtomicU64::new(self.state.words_processed);
        let total_words = self.total_words();
        let (params, corpus, coding, config) =
            (&self.params, self.corpus, self.coding, &self.config);

        let results: Vec<(WorkerStats, f32)> = std::thread::scope(|scope| {
            let handles: Vec<_> = shards
                .iter()
                .enumerate()
                .map(|(i, shard)| {
                    let counter = &counter;
                    scope.spawn(move || {
                        let mut worker = Worker {
                            corpus,
                            coding,
                            params,
                            config,
                            hooks,
                            counter,
                            total_words,
                            shard: shard.sentences.clone(),
                            cursor: Cursor {
                                epoch: 0,
                                sentence: shard.sentences.start,
                                position: 0,
                            },
                            rng: worker_rng(config.seed, i),
                            stepper: Stepper::new(config.dim, config.step),
                            context: Vec::with_capacity(2 * config.window),
                            pending: 0,
                            stats: WorkerStats::default(),
                            lr: config.alpha,
                            reporter: (i == 0).then_some(Reporter {
                                start,
                                last: start,
                                interval: opts.report_interval,
                            }),
                        };
                        worker.run(u64::MAX);
                        (worker.stats, worker.lr)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("training worker panicked"))
                .collect()
        });

        // Parallel runs cannot be resumed; mark the state as complete.
        self.state.epoch = self.config.epochs;
        self.state.sentence = 0;
        self.state.position = 0;
        self.state.words_processed = counter.load(Ordering::Relaxed);
        let stats: Vec<WorkerStats> = results.iter().map(|r| r.0).collect();
        let lr = results.iter().map(|r| r.1).fold(f32::INFINITY, f32::min);
        self.finish_report(&stats, shards.len(), start, lr);
    }

    fn finish_report(&mut self, stats: &[WorkerStats], workers: usize, start: Instant, lr: f32) {
        let elapsed = start.elapsed().as_secs_f64();
        let before = self.report.positions;
        for s in stats {
            self.report.merge(s);
        }
        let words = self.report.positions - before;
        self.report.workers = workers;
        self.report.elapsed_secs += elapsed;
        self.report.words_per_second = words as f64 / elapsed.max(1e-9);
        self.report.final_lr = lr;
    }
}

/// Train from scratch and return the parameters with the run report.
pub fn train(
    corpus: &EncodedCorpus,
    coding: &HuffmanCoding,
    config: &TrainingConfig,
) -> Result<(ModelParams, TrainReport)> {
    train_with_hooks(corpus, coding, config, &NoHooks, &RunOptions::default())
}

pub fn train_with_hooks<H: TrainHooks>(
    corpus: &EncodedCorpus,
    coding: &HuffmanCoding,
    config: &TrainingConfig,
    hooks: &H,
    opts: &RunOptions,
) -> Result<(ModelParams, TrainReport)> {
    let mut trainer = Trainer::new(corpus, coding, config.clone())?;
    let report = trainer.run(hooks, opts);
    Ok((trainer.into_params(), report))
}
