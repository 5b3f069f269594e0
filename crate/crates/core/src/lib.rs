//! Word embeddings with the continuous bag-of-words (CBOW) and Skip-gram
//! log-linear models, trained by asynchronous SGD through a Huffman-tree
//! hierarchical softmax, and the tools to evaluate them: vector-offset
//! analogies, nearest neighbours, relation averaging, odd-one-out and
//! sentence completion.
//!
//! A typical pipeline:
//!
//! ```
//! use wordvec::corpus::{build_vocabulary, encode, tokenize, VocabOptions};
//! use wordvec::huffman::build_huffman;
//! use wordvec::model::{Architecture, TrainingConfig};
//! use wordvec::eval::WordVectors;
//!
//! let text = "the cat sat on the mat\nthe dog sat on the log\n";
//! let tokens = tokenize(text, false);
//! let vocab = build_vocabulary(tokens.clone(), VocabOptions { min_count: 1, max_vocab: None }).unwrap();
//! let corpus = encode(tokens, &vocab, None);
//! let coding = build_huffman(&vocab).unwrap();
//! let config = TrainingConfig {
//!     architecture: Architecture::SkipGram,
//!     dim: 8,
//!     epochs: 5,
//!     min_count: 1,
//!     ..Default::default()
//! };
//! let (params, report) = wordvec::trainer::train(&corpus, &coding, &config).unwrap();
//! assert_eq!(report.positions, 5 * 12);
//! let vectors = WordVectors::from_params(&vocab, &params).unwrap();
//! assert_eq!(vectors.dim(), 8);
//! ```

pub mod corpus;
pub mod error;
pub mod eval;
pub mod huffman;
pub mod io;
pub mod model;
pub mod trainer;

pub use error::{Error, Result};
