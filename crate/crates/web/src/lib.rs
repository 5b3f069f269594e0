//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Results cross the boundary as JSON strings or flat `f32` arrays so the
//! same functions can be exercised by native tests.

use serde::Serialize;
use wasm_bindgen::prelude::*;
use wordvec::corpus::{build_vocabulary, encode, tokenize, VocabOptions, Vocabulary};
use wordvec::eval::{answer_analogy, nearest_neighbors, Query, WordVectors};
use wordvec::huffman::{build_huffman, expected_code_length, HuffmanCoding};
use wordvec::model::{Architecture, TrainingConfig};
use wordvec::trainer::train;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn vocabulary(text: &str, min_count: u64) -> Result<Vocabulary, String> {
    let opts = VocabOptions {
        min_count,
        max_vocab: None,
    };
    build_vocabulary(tokenize(text, true), opts).map_err(err)
}

#[derive(Serialize)]
struct CodeRow<'a> {
    word: &'a str,
    count: u64,
    code: String,
    path: &'a [u32],
}

#[derive(Serialize)]
struct CodeTable<'a> {
    words: Vec<CodeRow<'a>>,
    mean_length: f64,
    inner_nodes: usize,
}

fn code_table(vocab: &Vocabulary, coding: &HuffmanCoding) -> Result<String, String> {
    let words = vocab
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| CodeRow {
            word: &e.word,
            count: e.count,
            code: coding
                .code(i)
                .iter()
                .map(|b| char::from(b'0' + b))
                .collect(),
            path: coding.path(i),
        })
        .collect();
    let table = CodeTable {
        words,
        mean_length: expected_code_length(coding, vocab).map_err(err)?,
        inner_nodes: coding.num_inner(),
    };
    serde_json::to_string(&table).map_err(err)
}

/// Huffman codes for the words of `text` seen at least `min_count` times,
/// as JSON `{words: [{word, count, code, path}], mean_length, inner_nodes}`.
#[wasm_bindgen]
pub fn huffman_codes(text: &str, min_count: u32) -> Result<String, String> {
    let vocab = vocabulary(text, min_count.max(1) as u64)?;
    let coding = build_huffman(&vocab).map_err(err)?;
    code_table(&vocab, &coding)
}

/// A model trained in the page.
#[wasm_bindgen]
pub struct Model {
    vocab: Vocabulary,
    coding: HuffmanCoding,
    vectors: WordVectors,
    positions: u64,
}

#[derive(Serialize)]
struct Neighbor {
    word: String,
    cosine: f32,
}

#[wasm_bindgen]
impl Model {
    /// Train on `text` (one sentence per line, lowercased).
    #[wasm_bindgen(constructor)]
    pub fn new(
        text: &str,
        cbow: bool,
        dim: u32,
        window: u32,
        epochs: u32,
        min_count: u32,
        seed: u32,
    ) -> Result<Model, String> {
        if dim == 0 || window == 0 || epochs == 0 {
            return Err("dimensions, window and epochs must be positive".into());
        }
        let vocab = vocabulary(text, min_count.max(1) as u64)?;
        let corpus = encode(tokenize(text, true), &vocab, Some(1000));
        let coding = build_huffman(&vocab).map_err(err)?;
        let config = TrainingConfig {
            architecture: if cbow {
                Architecture::Cbow
            } else {
                Architecture::SkipGram
            },
            dim: dim as usize,
            window: window as usize,
            epochs: epochs as usize,
            min_count: min_count.max(1) as u64,
            seed: seed as u64,
            workers: 1,
            ..Default::default()
        };
        let (params, report) = train(&corpus, &coding, &config).map_err(err)?;
        let vectors = WordVectors::from_params(&vocab, &params)
            .and_then(|v| v.normalized())
            .map_err(err)?;
        Ok(Model {
            vocab,
            coding,
            vectors,
            positions: report.positions,
        })
    }

    pub fn positions(&self) -> u64 {
        self.positions
    }

    /// Vocabulary in frequency order, as a JSON array of strings.
    pub fn words(&self) -> String {
        let words: Vec<&str> = self
            .vocab
            .entries()
            .iter()
            .map(|e| e.word.as_str())
            .collect();
        serde_json::to_string(&words).unwrap()
    }

    pub fn codes(&self) -> Result<String, String> {
        code_table(&self.vocab, &self.coding)
    }

    /// `[x0, y0, x1, y1, ...]`: the unit vectors projected on their first
    /// two principal components.
    pub fn projection(&self) -> Vec<f32> {
        project_2d(&self.vectors)
    }

    /// JSON array of `{word, cosine}`.
    pub fn nearest(&self, word: &str, k: u32) -> Result<String, String> {
        let found = nearest_neighbors(&self.vectors, Query::Word(word), k.max(1) as usize, &[])
            .map_err(err)?;
        let out: Vec<Neighbor> = found
            .into_iter()
            .map(|n| Neighbor {
                word: n.word,
                cosine: n.cosine,
            })
            .collect();
        serde_json::to_string(&out).map_err(err)
    }

    /// The word `d` with `a : b :: c : d`, or an empty string if there is none.
    pub fn analogy(&self, a: &str, b: &str, c: &str) -> Result<String, String> {
        answer_analogy(&self.vectors, a, b, c, None)
            .map(Option::unwrap_or_default)
            .map_err(err)
    }
}

/// Principal-component projection by power iteration on the covariance.
fn project_2d(wv: &WordVectors) -> Vec<f32> {
    let (n, d) = (wv.len(), wv.dim());
    if n == 0 {
        return Vec::new();
    }
    let mut mean = vec![0f64; d];
    for i in 0..n {
        for (m, &x) in mean.iter_mut().zip(wv.vector(i)) {
            *m += x as f64 / n as f64;
        }
    }
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            wv.vector(i)
                .iter()
                .zip(&mean)
                .map(|(&x, m)| x as f64 - m)
                .collect()
        })
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    let mut axes: Vec<Vec<f64>> = Vec::new();
    for k in 0..2.min(d) {
        // Deterministic start that is not orthogonal to anything in general.
        let mut v: Vec<f64> = (0..d).map(|j| 1.0 + ((j * 7 + k * 3) % 5) as f64).collect();
        for _ in 0..200 {
            let mut next = vec![0f64; d];
            for r in &rows {
                let s = dot(r, &v);
                next.iter_mut().zip(r).for_each(|(o, x)| *o += s * x);
            }
            for a in &axes {
                let s = dot(&next, a);
                next.iter_mut().zip(a).for_each(|(o, x)| *o -= s * x);
            }
            let norm = dot(&next, &next).sqrt();
            if norm < 1e-12 {
                break;
            }
            next.iter_mut().for_each(|x| *x /= norm);
            v = next;
        }
        axes.push(v);
    }
    let mut out = Vec::with_capacity(2 * n);
    for r in &rows {
        out.push(axes.first().map_or(0.0, |a| dot(r, a)) as f32);
        out.push(axes.get(1).map_or(0.0, |a| dot(r, a)) as f32);
    }
    out
}
