//! Hierarchical-softmax probabilities and SGD steps.
//!
//! For word `w` with code bits `b_1..b_L` and inner nodes `n_1..n_L`,
//! `p(w | h) = prod_j sigma(s_j * <node[n_j], h>)` with `s_j = +1` for bit 0
//! and `-1` for bit 1. A step on `-log p(w | h)` uses the label
//! `t_j = 1 - b_j`.

use serde::{Deserialize, Serialize};

use super::params::{ModelParams, SharedMatrix};
use crate::huffman::HuffmanCoding;

const TABLE_SIZE: usize = 1000;
const MAX_ACTIVATION: f32 = 6.0;

/// How the logistic function is evaluated during training.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmoidMode {
    /// Precomputed table on `[-6, 6]`; nodes with `|x| > 6` are not updated.
    #[default]
    Table,
    /// `1 / (1 + e^-x)` everywhere, no skipping. Gives exact gradients.
    Exact,
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[inline]
fn sigmoid_f32(x: f32) -> f32 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `log sigma(x)` without overflow.
#[inline]
pub fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

struct SigmoidTable {
    values: Box<[f32]>,
}

impl SigmoidTable {
    fn new() -> Self {
        let values = (0..TABLE_SIZE)
            .map(|i| {
                let x = (i as f32 / TABLE_SIZE as f32 * 2.0 - 1.0) * MAX_ACTIVATION;
                sigmoid_f32(x)
            })
            .collect();
        SigmoidTable { values }
    }

    /// `None` when the activation is outside `[-6, 6]`.
    #[inline]
    fn lookup(&self, x: f32) -> Option<f32> {
        if !(-MAX_ACTIVATION..=MAX_ACTIVATION).contains(&x) {
            return None;
        }
        let scale = TABLE_SIZE as f32 / MAX_ACTIVATION / 2.0;
        let i = ((x + MAX_ACTIVATION) * scale) as usize;
        Some(self.values[i.min(TABLE_SIZE - 1)])
    }
}

/// Options that change the arithmetic of a step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepOptions {
    pub sigmoid: SigmoidMode,
    /// Scale the CBOW error by `1 / |context|` before applying it to each
    /// context vector (the exact gradient of the averaged input). Off by
    /// default: each context vector receives the full error.
    pub cbow_mean_gradient: bool,
}

/// Reusable per-worker buffers for SGD steps.
pub struct Stepper {
    opts: StepOptions,
    table: SigmoidTable,
    hidden: Vec<f32>,
    err: Vec<f32>,
    node: Vec<f32>,
}

impl Stepper {
    pub fn new(dim: usize, opts: StepOptions) -> Self {
        Stepper {
            opts,
            table: SigmoidTable::new(),
            hidden: vec![0.0; dim],
            err: vec![0.0; dim],
            node: vec![0.0; dim],
        }
    }

    pub fn options(&self) -> StepOptions {
        self.opts
    }

    /// Error vector accumulated by the most recent step.
    pub fn error(&self) -> &[f32] {
        &self.err
    }

    /// One step on `-log p(target | hidden)`: updates the inner-node
    /// vectors on the target's path and leaves the error to be
    /// back-propagated into the input in [`Stepper::error`].
    pub fn pair(
        &mut self,
        params: &ModelParams,
        coding: &HuffmanCoding,
        hidden: &[f32],
        target: usize,
        lr: f32,
    ) {
        self.hidden.copy_from_slice(hidden);
        self.hs_update(&params.nodes, coding, target, lr);
    }

    /// Skip-gram: predict `context` from the vector of `center`.
    pub fn skipgram(
        &mut self,
        params: &ModelParams,
        coding: &HuffmanCoding,
        center: usize,
        context: usize,
        lr: f32,
    ) {
        params.input.read_row(center, &mut self.hidden);
        self.hs_update(&params.nodes, coding, context, lr);
        params.input.add_to_row(center, &self.err);
    }

    /// CBOW: predict `target` from the mean of the context vectors.
    /// Returns `false` (no update) for an empty context.
    pub fn cbow(
        &mut self,
        params: &ModelParams,
        coding: &HuffmanCoding,
        context: &[u32],
        target: usize,
        lr: f32,
    ) -> bool {
        if context.is_empty() {
            return false;
        }
        self.hidden.iter_mut().for_each(|x| *x = 0.0);
        for &c in context {
            for (h, cell) in self.hidden.iter_mut().zip(params.input.row(c as usize)) {
                *h += cell.get();
            }
        }
        let inv = 1.0 / context.len() as f32;
        self.hidden.iter_mut().for_each(|x| *x *= inv);

        self.hs_update(&params.nodes, coding, target, lr);

        if self.opts.cbow_mean_gradient {
            self.err.iter_mut().for_each(|x| *x *= inv);
        }
        for &c in context {
            params.input.add_to_row(c as usize, &self.err);
        }
        true
    }

    fn hs_update(&mut self, nodes: &SharedMatrix, coding: &HuffmanCoding, target: usize, lr: f32) {
        self.err.iter_mut().for_each(|x| *x = 0.0);
        for (&bit, &node) in coding.code(target).iter().zip(coding.path(target)) {
            let row = nodes.row(node as usize);
            // Snapshot the row so the dot product runs on plain floats.
            for (dst, cell) in self.node.iter_mut().zip(row) {
                *dst = cell.get();
            }
            let dot = crate::eval::dot(&self.node, &self.hidden);
            let f = match self.opts.sigmoid {
                SigmoidMode::Exact => sigmoid_f32(dot),
                SigmoidMode::Table => match self.table.lookup(dot) {
                    Some(f) => f,
                    None => continue,
                },
            };
            let g = (1.0 - bit as f32 - f) * lr;
            for (e, n) in self.err.iter_mut().zip(&self.node) {
                *e += g * n;
            }
            for ((cell, n), h) in row.iter().zip(&self.node).zip(&self.hidden) {
                cell.set(n + g * h);
            }
        }
    }
}

fn dot_row(row: &[super::params::AtomicF32], hidden: &[f32]) -> f64 {
    row.iter()
        .zip(hidden)
        .map(|(n, &h)| n.get() as f64 * h as f64)
        .sum()
}

/// `log p(w | hidden)` evaluated in double precision with the exact sigmoid.
pub fn log_word_probability(
    params: &ModelParams,
    coding: &HuffmanCoding,
    hidden: &[f32],
    w: usize,
) -> f64 {
    coding
        .code(w)
        .iter()
        .zip(coding.path(w))
        .map(|(&bit, &node)| {
            let x = dot_row(params.nodes.row(node as usize), hidden);
            let sign = if bit == 0 { 1.0 } else { -1.0 };
            log_sigmoid(sign * x)
        })
        .sum()
}

/// `p(w | hidden)` under the hierarchical softmax.
pub fn word_probability(
    params: &ModelParams,
    coding: &HuffmanCoding,
    hidden: &[f32],
    w: usize,
) -> f64 {
    log_word_probability(params, coding, hidden, w).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params::init_params;

    #[test]
    fn zero_nodes_give_huffman_probabilities() {
        let coding = HuffmanCoding::from_counts(&[5, 2, 1, 1]).unwrap();
        let params = init_params(4, 3, 0).unwrap();
        let h = [0.3, -1.0, 2.0];
        let p: Vec<f64> = (0..4)
            .map(|w| word_probability(&params, &coding, &h, w))
            .collect();
        for (got, want) in p.iter().zip([0.5, 0.25, 0.125, 0.125]) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
        let l = -log_word_probability(&params, &coding, &h, 3);
        assert!((l - 3.0 * std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn table_matches_exact_sigmoid() {
        let t = SigmoidTable::new();
        for i in -600..=600 {
            let x = i as f32 / 100.0;
            let got = t.lookup(x).unwrap();
            assert!((got - sigmoid_f32(x)).abs() < 4e-3, "x={x}");
        }
        assert!(t.lookup(6.01).is_none());
        assert!(t.lookup(-6.01).is_none());
        assert!(t.lookup(6.0).is_some());
    }

    #[test]
    fn log_sigmoid_is_stable() {
        assert!((log_sigmoid(0.0) + std::f64::consts::LN_2).abs() < 1e-15);
        assert!(log_sigmoid(-800.0).is_finite());
        assert!((log_sigmoid(-800.0) + 800.0).abs() < 1e-9);
        assert!(log_sigmoid(800.0) <= 0.0);
    }

    #[test]
    fn saturated_path_drives_probability_to_one() {
        let coding = HuffmanCoding::from_counts(&[3, 2, 1]).unwrap();
        let params = init_params(3, 2, 0).unwrap();
        let w = 2;
        // Point each path node along +/- e0 so that s_j * <node, h> > 0.
        for (&bit, &node) in coding.code(w).iter().zip(coding.path(w)) {
            let s = if bit == 0 { 1.0 } else { -1.0 };
            params.nodes.set(node as usize, 0, s);
        }
        let p_small = word_probability(&params, &coding, &[1.0, 0.0], w);
        let p_large = word_probability(&params, &coding, &[1e3, 0.0], w);
        assert!(p_large > p_small);
        assert!(1.0 - p_large < 1e-12);
    }
}
