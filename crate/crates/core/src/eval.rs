//! Vector-offset analogies, the semantic/syntactic question set, nearest
//! neighbours, relation averaging, odd-one-out and sentence completion.
//!
//! All similarity search runs on unit-normalized rows. Ties are broken in
//! favour of the lower vocabulary index.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::huffman::HuffmanCoding;
use crate::model::{log_word_probability, ModelParams};

/// Word vectors with their vocabulary, detached from training.
#[derive(Clone, Debug, PartialEq)]
pub struct WordVectors {
    vocab: Vocabulary,
    vectors: Vec<f32>,
    dim: usize,
    normalized: bool,
}

impl WordVectors {
    pub fn new(vocab: Vocabulary, vectors: Vec<f32>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if vectors.len() != vocab.len() * dim {
            return Err(Error::SizeMismatch(format!(
                "{} values for {} words of dimension {dim}",
                vectors.len(),
                vocab.len()
            )));
        }
        Ok(WordVectors {
            vocab,
            vectors,
            dim,
            normalized: false,
        })
    }

    /// The input (word) vectors of a trained model.
    pub fn from_params(vocab: &Vocabulary, params: &ModelParams) -> Result<Self> {
        if params.vocab_size() != vocab.len() {
            return Err(Error::SizeMismatch(format!(
                "model has {} words, vocabulary {}",
                params.vocab_size(),
                vocab.len()
            )));
        }
        Self::new(vocab.clone(), params.input.to_vec(), params.dim())
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.vectors
    }

    pub fn vector(&self, idx: usize) -> &[f32] {
        &self.vectors[idx * self.dim..(idx + 1) * self.dim]
    }

    pub fn get(&self, word: &str) -> Option<&[f32]> {
        self.vocab.index_of(word).map(|i| self.vector(i))
    }

    /// Copy with every row scaled to unit Euclidean norm. Zero rows are an
    /// error.
    pub fn normalized(&self) -> Result<WordVectors> {
        if self.normalized {
            return Ok(self.clone());
        }
        let mut vectors = self.vectors.clone();
        for (i, row) in vectors.chunks_exact_mut(self.dim).enumerate() {
            let norm = row.iter().map(|&x| x as f64 * x as f64).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "vector of {:?} has norm {norm} and cannot be normalized",
                    self.vocab.word(i)
                )));
            }
            let inv = (1.0 / norm) as f32;
            row.iter_mut().for_each(|x| *x *= inv);
        }
        Ok(WordVectors {
            vocab: self.vocab.clone(),
            vectors,
            dim: self.dim,
            normalized: true,
        })
    }

    fn unit(&self) -> Result<Cow<'_, WordVectors>> {
        if self.normalized {
            Ok(Cow::Borrowed(self))
        } else {
            self.normalized().map(Cow::Owned)
        }
    }

    /// Index of `best` among rows `0..limit`, maximizing `<x, v_w>` and
    /// skipping `exclude`.
    fn argmax_dot(&self, x: &[f32], exclude: &[usize], limit: usize) -> Option<(usize, f32)> {
        let mut best: Option<(usize, f32)> = None;
        for w in 0..limit.min(self.len()) {
            if exclude.contains(&w) {
                continue;
            }
            let s = dot(x, self.vector(w));
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((w, s));
            }
        }
        best
    }
}

/// Dot product with independent accumulators so the loop vectorizes.
#[inline]
pub fn dot(a: &[f32], b: &[f32]) -> f32 {
    let mut acc = [0f32; 8];
    let chunks_a = a.chunks_exact(8);
    let chunks_b = b.chunks_exact(8);
    let rest: f32 = chunks_a
        .remainder()
        .iter()
        .zip(chunks_b.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (ca, cb) in chunks_a.zip(chunks_b) {
        for k in 0..8 {
            acc[k] += ca[k] * cb[k];
        }
    }
    acc.iter().sum::<f32>() + rest
}

fn norm(x: &[f32]) -> f32 {
    dot(x, x).sqrt()
}

/// Looks words up within the `limit` most frequent entries, optionally
/// ignoring case (the most frequent spelling wins).
struct Lookup<'a> {
    wv: &'a WordVectors,
    limit: usize,
    folded: Option<HashMap<String, usize>>,
}

impl<'a> Lookup<'a> {
    fn new(wv: &'a WordVectors, restrict_vocab: Option<usize>, case_insensitive: bool) -> Self {
        let limit = restrict_vocab.unwrap_or(usize::MAX).min(wv.len());
        let folded = case_insensitive.then(|| {
            let mut map = HashMap::with_capacity(limit);
            for i in 0..limit {
                map.entry(wv.vocab.word(i).to_lowercase()).or_insert(i);
            }
            map
        });
        Lookup { wv, limit, folded }
    }

    fn get(&self, word: &str) -> Option<usize> {
        match &self.folded {
            Some(map) => map.get(&word.to_lowercase()).copied(),
            None => self.wv.vocab.index_of(word).filter(|&i| i < self.limit),
        }
    }

    fn same_word(&self, idx: usize, word: &str) -> bool {
        let w = self.wv.vocab.word(idx);
        match self.folded {
            Some(_) => w.to_lowercase() == word.to_lowercase(),
            None => w == word,
        }
    }
}

/// Answer `a : b :: c : ?` with the word nearest to `v_b - v_a + v_c`,
/// excluding the three input words. Returns `None` if an input is out of
/// vocabulary (within `restrict_vocab`) or the offset vector is zero.
pub fn answer_analogy(
    wv: &WordVectors,
    a: &str,
    b: &str,
    c: &str,
    restrict_vocab: Option<usize>,
) -> Result<Option<String>> {
    let unit = wv.unit()?;
    let lookup = Lookup::new(&unit, restrict_vocab, false);
    let (Some(ia), Some(ib), Some(ic)) = (lookup.get(a), lookup.get(b), lookup.get(c)) else {
        return Ok(None);
    };
    Ok(analogy_index(&unit, ia, ib, ic, lookup.limit).map(|i| unit.vocab.word(i).to_owned()))
}

fn analogy_index(unit: &WordVectors, a: usize, b: usize, c: usize, limit: usize) -> Option<usize> {
    let x: Vec<f32> = unit
        .vector(b)
        .iter()
        .zip(unit.vector(a))
        .zip(unit.vector(c))
        .map(|((vb, va), vc)| vb - va + vc)
        .collect();
    if x.iter().all(|&v| v == 0.0) {
        return None;
    }
    unit.argmax_dot(&x, &[a, b, c], limit).map(|(i, _)| i)
}

/// Search for the word nearest to `offset + v_c`, excluding `c` and
/// `exclude`. `offset` is typically a [`relation_vector`].
pub fn answer_with_offset(
    wv: &WordVectors,
    offset: &[f32],
    c: &str,
    exclude: &[&str],
    restrict_vocab: Option<usize>,
) -> Result<Option<String>> {
    if offset.len() != wv.dim() {
        return Err(Error::SizeMismatch(format!(
            "offset has dimension {}, vectors {}",
            offset.len(),
            wv.dim()
        )));
    }
    let unit = wv.unit()?;
    let lookup = Lookup::new(&unit, restrict_vocab, false);
    let Some(ic) = lookup.get(c) else {
        return Ok(None);
    };
    let mut skip = vec![ic];
    skip.extend(exclude.iter().filter_map(|w| unit.vocab.index_of(w)));
    let x: Vec<f32> = offset
        .iter()
        .zip(unit.vector(ic))
        .map(|(o, v)| o + v)
        .collect();
    if x.iter().all(|&v| v == 0.0) {
        return Ok(None);
    }
    Ok(unit
        .argmax_dot(&x, &skip, lookup.limit)
        .map(|(i, _)| unit.vocab.word(i).to_owned()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuestionKind {
    Semantic,
    Syntactic,
}

impl fmt::Display for QuestionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuestionKind::Semantic => "semantic",
            QuestionKind::Syntactic => "syntactic",
        })
    }
}

const SEMANTIC_CATEGORIES: [&str; 5] = [
    "capital-common-countries",
    "capital-world",
    "currency",
    "city-in-state",
    "family",
];

const SYNTACTIC_CATEGORIES: [&str; 9] = [
    "gram1-adjective-to-adverb",
    "gram2-opposite",
    "gram3-comparative",
    "gram4-superlative",
    "gram5-present-participle",
    "gram6-nationality-adjective",
    "gram7-past-tense",
    "gram8-plural",
    "gram9-plural-verbs",
];

/// Kind of a named question category, or `None` for unknown names.
pub fn category_kind(name: &str) -> Option<QuestionKind> {
    if SEMANTIC_CATEGORIES.contains(&name) {
        Some(QuestionKind::Semantic)
    } else if SYNTACTIC_CATEGORIES.contains(&name) || name.starts_with("gram") {
        Some(QuestionKind::Syntactic)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Question {
    pub words: [String; 4],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Category {
    pub name: String,
    pub kind: QuestionKind,
    pub questions: Vec<Question>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuestionSet {
    pub categories: Vec<Category>,
}

impl QuestionSet {
    pub fn num_questions(&self) -> usize {
        self.categories.iter().map(|c| c.questions.len()).sum()
    }
}

/// Parse `: category` headers followed by four-word question lines.
pub fn parse_questions(text: &str) -> Result<QuestionSet> {
    let mut set = QuestionSet::default();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix(':') {
            let name = name.trim();
            let kind = category_kind(name).ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("unknown category {name:?}"),
            })?;
            set.categories.push(Category {
                name: name.to_owned(),
                kind,
                questions: Vec::new(),
            });
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let words: [&str; 4] = words.try_into().map_err(|w: Vec<&str>| Error::Parse {
            line: lineno,
            message: format!("expected 4 words, found {}", w.len()),
        })?;
        let category = set.categories.last_mut().ok_or_else(|| Error::Parse {
            line: lineno,
            message: "question before the first category header".into(),
        })?;
        category.questions.push(Question {
            words: words.map(str::to_owned),
        });
    }
    Ok(set)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Tally {
    pub questions: usize,
    pub attempted: usize,
    pub skipped_oov: usize,
    pub correct: usize,
}

impl Tally {
    /// Correct over attempted; 0 when nothing was attempted.
    pub fn accuracy(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            self.correct as f64 / self.attempted as f64
        }
    }

    /// Correct over all questions, counting skipped ones as wrong.
    pub fn accuracy_all(&self) -> f64 {
        if self.questions == 0 {
            0.0
        } else {
            self.correct as f64 / self.questions as f64
        }
    }

    pub fn coverage(&self) -> f64 {
        if self.questions == 0 {
            0.0
        } else {
            self.attempted as f64 / self.questions as f64
        }
    }

    fn add(&mut self, other: &Tally) {
        self.questions += other.questions;
        self.attempted += other.attempted;
        self.skipped_oov += other.skipped_oov;
        self.correct += other.correct;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CategoryResult {
    pub name: String,
    pub kind: QuestionKind,
    #[serde(flatten)]
    pub tally: Tally,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct EvalReport {
    pub categories: Vec<CategoryResult>,
    pub semantic: Tally,
    pub syntactic: Tally,
    pub total: Tally,
}

impl EvalReport {
    /// One JSON object per category followed by the three aggregates.
    pub fn json_lines(&self) -> String {
        let mut out = String::new();
        let mut push = |name: &str, kind: &str, t: &Tally| {
            let rec = serde_json::json!({
                "name": name,
                "kind": kind,
                "questions": t.questions,
                "attempted": t.attempted,
                "skipped": t.skipped_oov,
                "correct": t.correct,
                "accuracy": t.accuracy(),
                "coverage": t.coverage(),
            });
            out.push_str(&rec.to_string());
            out.push('\n');
        };
        for c in &self.categories {
            push(&c.name, &c.kind.to_string(), &c.tally);
        }
        push("semantic", "aggregate", &self.semantic);
        push("syntactic", "aggregate", &self.syntactic);
        push("total", "aggregate", &self.total);
        out
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<30} {:>9} {:>9} {:>8} {:>8} {:>9}",
            "category", "attempted", "skipped", "correct", "accuracy", "coverage"
        )?;
        let row = |f: &mut fmt::Formatter<'_>, name: &str, t: &Tally| {
            writeln!(
                f,
                "{:<30} {:>9} {:>9} {:>8} {:>7.1}% {:>8.1}%",
                name,
                t.attempted,
                t.skipped_oov,
                t.correct,
                100.0 * t.accuracy(),
                100.0 * t.coverage()
            )
        };
        for c in &self.categories {
            row(f, &c.name, &c.tally)?;
        }
        writeln!(f)?;
        writeln!(f, "Semantic: {:.1}%", 100.0 * self.semantic.accuracy())?;
        writeln!(f, "Syntactic: {:.1}%", 100.0 * self.syntactic.accuracy())?;
        writeln!(
            f,
            "Total: {:.1}% ({} of {} questions attempted, {:.1}% counting skipped as wrong)",
            100.0 * self.total.accuracy(),
            self.total.attempted,
            self.total.questions,
            100.0 * self.total.accuracy_all()
        )
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EvalOptions {
    /// Only the most frequent words are searched and allowed in questions.
    pub restrict_vocab: Option<usize>,
    /// Match question words to the vocabulary ignoring case.
    pub case_insensitive: bool,
    /// Worker threads; 0 uses the available parallelism.
    pub threads: usize,
}

/// Exact-match accuracy per category and in aggregate.
pub fn evaluate(wv: &WordVectors, qs: &QuestionSet, opts: &EvalOptions) -> Result<EvalReport> {
    let unit = wv.unit()?;
    let lookup = Lookup::new(&unit, opts.restrict_vocab, opts.case_insensitive);

    let threads = if opts.threads == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        opts.threads
    };

    let mut report = EvalReport::default();
    for cat in &qs.categories {
        let mut tally = Tally {
            questions: cat.questions.len(),
            ..Default::default()
        };
        let mut resolved = Vec::with_capacity(cat.questions.len());
        for q in &cat.questions {
            let idx: Option<Vec<usize>> = q.words.iter().map(|w| lookup.get(w)).collect();
            match idx {
                Some(idx) => resolved.push((idx[0], idx[1], idx[2], &q.words[3])),
                None => tally.skipped_oov += 1,
            }
        }
        tally.attempted = resolved.len();

        let answer = |&(a, b, c, d): &(usize, usize, usize, &String)| -> bool {
            analogy_index(&unit, a, b, c, lookup.limit).is_some_and(|i| lookup.same_word(i, d))
        };
        tally.correct = if threads > 1 && resolved.len() > 64 {
            let chunk = resolved.len().div_ceil(threads);
            std::thread::scope(|s| {
                let handles: Vec<_> = resolved
                    .chunks(chunk)
                    .map(|part| s.spawn(|| part.iter().filter(|q| answer(q)).count()))
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).sum()
            })
        } else {
            resolved.iter().filter(|q| answer(q)).count()
        };

        match cat.kind {
            QuestionKind::Semantic => report.semantic.add(&tally),
            QuestionKind::Syntactic => report.syntactic.add(&tally),
        }
        report.total.add(&tally);
        report.categories.push(CategoryResult {
            name: cat.name.clone(),
            kind: cat.kind,
            tally,
        });
    }
    Ok(report)
}

/// A nearest-neighbour query.
#[derive(Clone, Copy, Debug)]
pub enum Query<'a> {
    Word(&'a str),
    Vector(&'a [f32]),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Neighbor {
    pub word: String,
    pub cosine: f32,
}

/// The `k` words most cosine-similar to the query, best first. A query word
/// is never its own neighbour.
pub fn nearest_neighbors(
    wv: &WordVectors,
    query: Query<'_>,
    k: usize,
    exclude: &[&str],
) -> Result<Vec<Neighbor>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let unit = wv.unit()?;
    let mut skip: Vec<usize> = exclude
        .iter()
        .filter_map(|w| unit.vocab.index_of(w))
        .collect();
    let x: Vec<f32> = match query {
        Query::Word(w) => {
            let i = unit
                .vocab
                .index_of(w)
                .ok_or_else(|| Error::OutOfVocabulary(vec![w.to_owned()]))?;
            skip.push(i);
            unit.vector(i).to_vec()
        }
        Query::Vector(v) => {
            if v.len() != unit.dim {
                return Err(Error::SizeMismatch(format!(
                    "query has dimension {}, vectors {}",
                    v.len(),
                    unit.dim
                )));
            }
            let n = norm(v);
            if n == 0.0 || !n.is_finite() {
                return Err(Error::InvalidArgument("query vector has zero norm".into()));
            }
            v.iter().map(|x| x / n).collect()
        }
    };

    let mut scored: Vec<(usize, f32)> = (0..unit.len())
        .filter(|i| !skip.contains(i))
        .map(|i| (i, dot(&x, unit.vector(i))))
        .collect();
    let by_rank = |a: &(usize, f32), b: &(usize, f32)| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0));
    if scored.len() > k {
        scored.select_nth_unstable_by(k - 1, by_rank);
        scored.truncate(k);
    }
    scored.sort_by(by_rank);
    Ok(scored
        .into_iter()
        .map(|(i, cosine)| Neighbor {
            word: unit.vocab.word(i).to_owned(),
            cosine,
        })
        .collect())
}

fn resolve<'a>(wv: &WordVectors, words: impl IntoIterator<Item = &'a str>) -> Result<Vec<usize>> {
    let mut missing = Vec::new();
    let mut idx = Vec::new();
    for w in words {
        match wv.vocab.index_of(w) {
            Some(i) => idx.push(i),
            None => missing.push(w.to_owned()),
        }
    }
    if missing.is_empty() {
        Ok(idx)
    } else {
        Err(Error::OutOfVocabulary(missing))
    }
}

/// Mean of `v_y - v_x` over the example pairs, on unit-normalized vectors.
pub fn relation_vector(wv: &WordVectors, pairs: &[(&str, &str)]) -> Result<Vec<f32>> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("at least one pair is needed".into()));
    }
    let unit = wv.unit()?;
    let idx = resolve(&unit, pairs.iter().flat_map(|&(x, y)| [x, y]))?;
    let mut r = vec![0f32; unit.dim];
    for p in idx.chunks_exact(2) {
        for ((acc, y), x) in r.iter_mut().zip(unit.vector(p[1])).zip(unit.vector(p[0])) {
            *acc += y - x;
        }
    }
    let inv = 1.0 / pairs.len() as f32;
    r.iter_mut().for_each(|x| *x *= inv);
    Ok(r)
}

/// The listed word least similar to the mean of all listed words.
pub fn odd_one_out(wv: &WordVectors, words: &[&str]) -> Result<String> {
    if words.len() < 3 {
        return Err(Error::InvalidArgument(
            "odd-one-out needs at least 3 words".into(),
        ));
    }
    let unit = wv.unit()?;
    let idx = resolve(&unit, words.iter().copied())?;
    let mut mean = vec![0f32; unit.dim];
    for &i in &idx {
        for (m, v) in mean.iter_mut().zip(unit.vector(i)) {
            *m += v;
        }
    }
    let n = norm(&mean);
    let mut best: Option<(usize, f32)> = None;
    for &i in &idx {
        let cos = if n > 0.0 {
            dot(unit.vector(i), &mean) / n
        } else {
            0.0
        };
        let better = match best {
            None => true,
            Some((bi, bc)) => cos < bc || (cos == bc && i < bi),
        };
        if better {
            best = Some((i, cos));
        }
    }
    let (i, _) = best.expect("at least three words");
    Ok(unit.vocab.word(i).to_owned())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateScore {
    pub word: String,
    /// Sum of log-probabilities; `None` for out-of-vocabulary candidates.
    pub score: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Completion {
    pub best: String,
    pub scores: Vec<CandidateScore>,
}

/// Score each candidate for the blank by the summed log-probability of the
/// in-vocabulary words within `window` positions of the blank, predicted
/// from the candidate's vector.
pub fn sentence_completion_score(
    params: &ModelParams,
    coding: &HuffmanCoding,
    vocab: &Vocabulary,
    tokens: &[&str],
    blank: &str,
    candidates: &[&str],
    window: usize,
) -> Result<Completion> {
    let blanks: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == blank)
        .map(|(i, _)| i)
        .collect();
    let [pos] = blanks[..] else {
        return Err(Error::InvalidArgument(format!(
            "sentence must contain exactly one blank, found {}",
            blanks.len()
        )));
    };
    if candidates.len() < 2 {
        return Err(Error::InvalidArgument(
            "at least 2 candidates are needed".into(),
        ));
    }
    if params.vocab_size() != vocab.len() || coding.num_words() != vocab.len() {
        return Err(Error::SizeMismatch(
            "model, coding and vocabulary disagree".into(),
        ));
    }

    let lo = pos.saturating_sub(window);
    let hi = (pos + window).min(tokens.len() - 1);
    let targets: Vec<usize> = (lo..=hi)
        .filter(|&j| j != pos)
        .filter_map(|j| vocab.index_of(tokens[j]))
        .collect();

    let mut hidden = vec![0f32; params.dim()];
    let mut best: Option<(usize, f64)> = None;
    let mut scores = Vec::with_capacity(candidates.len());
    for (ci, &cand) in candidates.iter().enumerate() {
        let score = vocab.index_of(cand).map(|w| {
            params.input.read_row(w, &mut hidden);
            targets
                .iter()
                .map(|&u| log_word_probability(params, coding, &hidden, u))
                .sum::<f64>()
        });
        if let Some(s) = score {
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((ci, s));
            }
        }
        scores.push(CandidateScore {
            word: cand.to_owned(),
            score,
        });
    }
    let (bi, _) = best.ok_or_else(|| {
        Error::OutOfVocabulary(candidates.iter().map(|c| c.to_string()).collect())
    })?;
    Ok(Completion {
        best: candidates[bi].to_owned(),
        scores,
    })
}
