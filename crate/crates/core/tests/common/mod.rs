//! Independent reference computations used by the integration tests.
//!
//! Nothing here calls into the training code: losses are recomputed in f64
//! from plain copies of the parameters, and optimal code lengths come from
//! exhaustive search rather than the two-queue construction.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use wordvec::huffman::HuffmanCoding;
use wordvec::model::ModelParams;

/// Plain f64 copy of a parameter set.
#[derive(Clone, Debug)]
pub struct Dense {
    pub dim: usize,
    pub input: Vec<f64>,
    pub nodes: Vec<f64>,
}

impl Dense {
    pub fn of(params: &ModelParams) -> Self {
        Dense {
            dim: params.dim(),
            input: params.input.iter().map(f64::from).collect(),
            nodes: params.nodes.iter().map(f64::from).collect(),
        }
    }

    pub fn input_row(&self, r: usize) -> &[f64] {
        &self.input[r * self.dim..(r + 1) * self.dim]
    }
}

fn sigma(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `-log p(w | h)` written out directly from the tree factorization.
pub fn loss(coding: &HuffmanCoding, nodes: &[f64], dim: usize, h: &[f64], w: usize) -> f64 {
    let mut l = 0.0;
    for (&bit, &n) in coding.code(w).iter().zip(coding.path(w)) {
        let row = &nodes[n as usize * dim..(n as usize + 1) * dim];
        let x: f64 = row.iter().zip(h).map(|(a, b)| a * b).sum();
        let s = if bit == 0 { 1.0 } else { -1.0 };
        l -= sigma(s * x).ln();
    }
    l
}

/// Central differences of `f` at `x`, one coordinate at a time.
pub fn central_diff(x: &[f64], eps: f64, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut x = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = x[i];
            x[i] = orig + eps;
            let up = f(&x);
            x[i] = orig - eps;
            let down = f(&x);
            x[i] = orig;
            (up - down) / (2.0 * eps)
        })
        .collect()
}

/// `|a - b| / max(|a|, |b|)` with Euclidean norms; zero when both vanish.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let scale = norm(a).max(norm(b));
    if scale == 0.0 {
        0.0
    } else {
        norm(&diff) / scale
    }
}

/// Random counts sorted in non-increasing order.
pub fn random_counts<R: Rng>(rng: &mut R, v: usize, max: u64) -> Vec<u64> {
    let mut c: Vec<u64> = (0..v).map(|_| rng.gen_range(1..=max)).collect();
    c.sort_unstable_by(|a, b| b.cmp(a));
    c
}

/// Fill both matrices with values uniform on `(-scale, scale)`.
pub fn randomize<R: Rng>(params: &ModelParams, rng: &mut R, scale: f32) {
    for m in [&params.input, &params.nodes] {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                m.set(r, c, rng.gen_range(-scale..scale));
            }
        }
    }
}

/// Minimum of `sum_w count_w * depth_w` over every full binary tree with
/// the given leaves. Each tree is reachable by some sequence of pairwise
/// merges, and its cost is the sum of the merged weights, so trying every
/// pair at every step (memoized on the sorted multiset) covers them all.
pub fn optimal_weighted_length(counts: &[u64]) -> u64 {
    fn go(w: Vec<u64>, memo: &mut HashMap<Vec<u64>, u64>) -> u64 {
        if w.len() <= 1 {
            return 0;
        }
        if let Some(&c) = memo.get(&w) {
            return c;
        }
        let mut best = u64::MAX;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                let merged = w[i] + w[j];
                let mut rest: Vec<u64> = w
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, &x)| x)
                    .collect();
                rest.push(merged);
                rest.sort_unstable();
                best = best.min(merged + go(rest, memo));
            }
        }
        memo.insert(w, best);
        best
    }
    let mut w = counts.to_vec();
    w.sort_unstable();
    go(w, &mut HashMap::new())
}

pub fn weighted_length(coding: &HuffmanCoding, counts: &[u64]) -> u64 {
    counts
        .iter()
        .enumerate()
        .map(|(w, &c)| c * coding.code_len(w) as u64)
        .sum()
}

/// Shannon entropy in bits of the distribution proportional to `counts`.
pub fn entropy(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum()
}

/// A corpus whose only structure is a grid of `groups x roles` words.
///
/// Word `w{g}_{r}` appears in sentences together with a group marker
/// `g{g}` and a role marker `r{r}`, so after training its vector should be
/// close to a sum of a group direction and a role direction. Every
/// `w{g}_{r} : w{g}_{s} :: w{h}_{r} : w{h}_{s}` analogy then holds.
pub fn grid_corpus<R: Rng>(rng: &mut R, groups: usize, roles: usize, lines: usize) -> String {
    let mut text = String::new();
    for _ in 0..lines {
        let g = rng.gen_range(0..groups);
        let r = rng.gen_range(0..roles);
        let mut sentence = [format!("w{g}_{r}"), format!("g{g}"), format!("r{r}")];
        // Shuffle so that no marker is tied to a fixed offset.
        for i in (1..3).rev() {
            sentence.swap(i, rng.gen_range(0..=i));
        }
        text.push_str(&sentence.join(" "));
        text.push('\n');
    }
    text
}

/// Question file covering every analogy of the grid, one category per
/// pair of roles.
pub fn grid_questions(groups: usize, roles: usize) -> String {
    let mut text = String::new();
    for r in 0..roles {
        for s in 0..roles {
            if r == s {
                continue;
            }
            text.push_str(&format!(": gram-role-{r}-{s}\n"));
            for g in 0..groups {
                for h in 0..groups {
                    if g != h {
                        text.push_str(&format!("w{g}_{r} w{g}_{s} w{h}_{r} w{h}_{s}\n"));
                    }
                }
            }
        }
    }
    text
}
