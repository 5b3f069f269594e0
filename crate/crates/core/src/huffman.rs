//! Huffman coding of the vocabulary for hierarchical softmax.
//!
//! The tree is built with the two-queue merge: leaves sorted by ascending
//! count in one queue, merged nodes appended to a second queue in creation
//! order (which is also ascending by weight). On equal weight the leaf is
//! taken first. Among leaves of equal count, the one with the larger
//! vocabulary index is taken first.
//!
//! Bit convention: the lower-weight operand of each merge is the left child
//! (bit 0), the other operand the right child (bit 1). The k-th merge
//! creates inner node k, so the root is inner node `V - 2`. Paths are stored
//! root first.

use serde::{Deserialize, Serialize};

use crate::corpus::Vocabulary;
use crate::error::{Error, Result};

/// Per-word Huffman codes and inner-node paths, stored contiguously.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuffmanCoding {
    // word w's code and path live at [offsets[w]..offsets[w + 1]]
    offsets: Vec<usize>,
    bits: Vec<u8>,
    nodes: Vec<u32>,
}

impl HuffmanCoding {
    /// Build the coding for arbitrary counts, given in vocabulary order.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let v = counts.len();
        if v < 2 {
            return Err(Error::VocabularyTooSmall(v));
        }

        // Weights of leaves (0..v) followed by inner nodes (v..2v-1).
        let mut weight = Vec::with_capacity(2 * v - 1);
        // Leaves in ascending count order: the vocabulary reversed, stable
        // on ties.
        let mut leaves: Vec<usize> = (0..v).rev().collect();
        if !counts.windows(2).all(|w| w[0] >= w[1]) {
            leaves.sort_by_key(|&i| counts[i]);
        }
        weight.extend_from_slice(counts);

        let mut parent = vec![0usize; 2 * v - 1];
        let mut is_right = vec![false; 2 * v - 1];

        let mut leaf_pos = 0;
        let mut inner_pos = v;
        for k in 0..v - 1 {
            let mut pick = || {
                let leaf = leaves.get(leaf_pos).copied();
                let inner = (inner_pos < v + k).then_some(inner_pos);
                match (leaf, inner) {
                    (Some(l), Some(i)) if weight[l] <= weight[i] => {
                        leaf_pos += 1;
                        l
                    }
                    (_, Some(i)) => {
                        inner_pos += 1;
                        i
                    }
                    (Some(l), None) => {
                        leaf_pos += 1;
                        l
                    }
                    (None, None) => unreachable!("queues exhausted before the root"),
                }
            };
            let left = pick();
            let right = pick();
            let node = v + k;
            weight.push(weight[left] + weight[right]);
            parent[left] = node;
            parent[right] = node;
            is_right[right] = true;
        }

        let root = 2 * v - 2;
        let mut offsets = Vec::with_capacity(v + 1);
        let mut bits = Vec::new();
        let mut nodes = Vec::new();
        offsets.push(0);
        let mut code = Vec::new();
        let mut path = Vec::new();
        for w in 0..v {
            code.clear();
            path.clear();
            let mut cur = w;
            while cur != root {
                code.push(is_right[cur] as u8);
                cur = parent[cur];
                path.push((cur - v) as u32);
            }
            bits.extend(code.iter().rev());
            nodes.extend(path.iter().rev());
            offsets.push(bits.len());
        }

        Ok(HuffmanCoding {
            offsets,
            bits,
            nodes,
        })
    }

    /// Number of coded words.
    pub fn num_words(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of inner nodes: `V - 1`.
    pub fn num_inner(&self) -> usize {
        self.num_words() - 1
    }

    /// Code bits of word `w`, root first.
    pub fn code(&self, w: usize) -> &[u8] {
        &self.bits[self.offsets[w]..self.offsets[w + 1]]
    }

    /// Inner-node indices on the path to word `w`, root first.
    pub fn path(&self, w: usize) -> &[u32] {
        &self.nodes[self.offsets[w]..self.offsets[w + 1]]
    }

    pub fn code_len(&self, w: usize) -> usize {
        self.offsets[w + 1] - self.offsets[w]
    }

    pub fn max_code_len(&self) -> usize {
        (0..self.num_words())
            .map(|w| self.code_len(w))
            .max()
            .unwrap_or(0)
    }

    /// Check internal consistency, e.g. after deserialization.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| {
            Err(Error::InvalidArgument(format!(
                "invalid Huffman coding: {m}"
            )))
        };
        if self.offsets.len() < 3 || self.offsets[0] != 0 {
            return bad("too few words".into());
        }
        if self.bits.len() != self.nodes.len() || *self.offsets.last().unwrap() != self.bits.len() {
            return bad("length mismatch".into());
        }
        if !self.offsets.windows(2).all(|w| w[0] < w[1]) {
            return bad("empty code".into());
        }
        let inner = self.num_inner() as u32;
        if self.bits.iter().any(|&b| b > 1) || self.nodes.iter().any(|&n| n >= inner) {
            return bad("bit or node index out of range".into());
        }
        Ok(())
    }
}

/// Build the Huffman coding for a vocabulary.
pub fn build_huffman(vocab: &Vocabulary) -> Result<HuffmanCoding> {
    let counts: Vec<u64> = vocab.entries().iter().map(|e| e.count).collect();
    HuffmanCoding::from_counts(&counts)
}

/// Frequency-weighted mean code length in bits.
pub fn expected_code_length(coding: &HuffmanCoding, vocab: &Vocabulary) -> Result<f64> {
    if coding.num_words() != vocab.len() {
        return Err(Error::SizeMismatch(format!(
            "coding has {} words, vocabulary has {}",
            coding.num_words(),
            vocab.len()
        )));
    }
    let total = vocab.total_tokens();
    if total == 0 {
        return Err(Error::InvalidVocabulary("all counts are zero".into()));
    }
    let weighted: u128 = (0..vocab.len())
        .map(|w| vocab.count(w) as u128 * coding.code_len(w) as u128)
        .sum();
    Ok(weighted as f64 / total as f64)
}
