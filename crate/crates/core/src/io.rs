//! Word-vector interchange files and training checkpoints.
//!
//! Both vector formats start with a text header line `"V D\n"`.
//!
//! * text: one line per word, `word` followed by `D` decimal values with 9
//!   significant digits, separated by single spaces;
//! * binary: per word, the word's UTF-8 bytes, one space, `D` little-endian
//!   IEEE-754 `f32` values and a newline.
//!
//! The binary reader also accepts rows without the trailing newline, as
//! written by some other tools.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{EncodedCorpus, VocabEntry, Vocabulary};
use crate::error::{Error, Result};
use crate::eval::WordVectors;
use crate::huffman::HuffmanCoding;
use crate::model::{ModelParams, SharedMatrix, TrainingConfig};
use crate::trainer::{TrainState, Trainer};

/// Header of a vector file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VectorFileHeader {
    pub vocab_size: usize,
    pub dim: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VectorFormat {
    #[default]
    Auto,
    Text,
    Binary,
}

fn check_word(word: &str) -> Result<()> {
    if word.is_empty() || word.contains(char::is_whitespace) {
        Err(Error::UnrepresentableWord(word.to_owned()))
    } else {
        Ok(())
    }
}

/// Format like C's `%.9g`.
pub fn format_g9(x: f32) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.8e}", x as f64);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let fixed = format!("{:.*}", (8 - exp) as usize, x as f64);
        strip_zeros(&fixed).to_owned()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_vectors_text<W: Write>(wv: &WordVectors, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{} {}", wv.len(), wv.dim())?;
    for i in 0..wv.len() {
        let word = wv.vocab().word(i);
        check_word(word)?;
        out.write_all(word.as_bytes())?;
        for &x in wv.vector(i) {
            write!(out, " {}", format_g9(x))?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_vectors_binary<W: Write>(wv: &WordVectors, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{} {}", wv.len(), wv.dim())?;
    for i in 0..wv.len() {
        let word = wv.vocab().word(i);
        check_word(word)?;
        out.write_all(word.as_bytes())?;
        out.write_all(b" ")?;
        for &x in wv.vector(i) {
            out.write_all(&x.to_le_bytes())?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Save in the text format. Words containing whitespace are rejected
/// before anything is written.
pub fn save_vectors_text<P: AsRef<Path>>(wv: &WordVectors, path: P) -> Result<()> {
    validate_words(wv)?;
    write_vectors_text(wv, File::create(path)?)
}

/// Save in the binary format.
pub fn save_vectors_binary<P: AsRef<Path>>(wv: &WordVectors, path: P) -> Result<()> {
    validate_words(wv)?;
    write_vectors_binary(wv, File::create(path)?)
}

fn validate_words(wv: &WordVectors) -> Result<()> {
    wv.vocab()
        .entries()
        .iter()
        .try_for_each(|e| check_word(&e.word))
}

pub fn load_vectors<P: AsRef<Path>>(path: P, format: VectorFormat) -> Result<WordVectors> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    parse_vectors(&bytes, format)
}

/// Parse a vector file held in memory. Vocabulary counts load as zero.
pub fn parse_vectors(bytes: &[u8], format: VectorFormat) -> Result<WordVectors> {
    let mut r = ByteReader { bytes, pos: 0 };
    let header = r.header()?;
    let format = match format {
        VectorFormat::Auto => {
            if looks_like_text_row(r.peek_line(), header.dim) {
                VectorFormat::Text
            } else {
                VectorFormat::Binary
            }
        }
        f => f,
    };
    let (words, values) = match format {
        VectorFormat::Text => r.text_body(header)?,
        _ => r.binary_body(header)?,
    };
    let entries = words
        .into_iter()
        .map(|word| VocabEntry { word, count: 0 })
        .collect();
    let vocab = Vocabulary::from_entries(entries).map_err(|e| Error::Format {
        offset: 0,
        message: e.to_string(),
    })?;
    WordVectors::new(vocab, values, header.dim)
}

fn looks_like_text_row(line: &[u8], dim: usize) -> bool {
    let Ok(s) = std::str::from_utf8(line) else {
        return false;
    };
    let mut parts = s.split_ascii_whitespace();
    parts.next().is_some() && {
        let rest: Vec<&str> = parts.collect();
        rest.len() == dim && rest.iter().all(|t| t.parse::<f32>().is_ok())
    }
}

struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Format {
            offset: self.pos as u64,
            message: message.into(),
        })
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn peek_line(&self) -> &'a [u8] {
        let rest = &self.bytes[self.pos..];
        let end = rest.iter().position(|&b| b == b'\n').unwrap_or(rest.len());
        &rest[..end]
    }

    fn line(&mut self) -> Option<&'a [u8]> {
        if self.pos >= self.bytes.len() {
            return None;
        }
        let line = self.peek_line();
        self.pos = (self.pos + line.len() + 1).min(self.bytes.len());
        Some(line)
    }

    fn skip_whitespace(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn header(&mut self) -> Result<VectorFileHeader> {
        let Some(line) = self.line() else {
            return self.err("empty file");
        };
        let text = std::str::from_utf8(line).unwrap_or("");
        let nums: Vec<usize> = text
            .split_ascii_whitespace()
            .map(|t| t.parse())
            .collect::<std::result::Result<_, _>>()
            .or_else(|_| self.err("header must be two integers `V D`"))?;
        let [vocab_size, dim] = nums[..] else {
            return self.err("header must be two integers `V D`");
        };
        if dim == 0 {
            return self.err("dimension 0");
        }
        if vocab_size == 0 {
            return self.err("vocabulary size 0");
        }
        Ok(VectorFileHeader { vocab_size, dim })
    }

    fn text_body(&mut self, h: VectorFileHeader) -> Result<(Vec<String>, Vec<f32>)> {
        // each row needs at least a word plus D " x" pairs
        if h.vocab_size.saturating_mul(2 * h.dim + 2) > self.remaining() + 1 {
            return self.err(format!(
                "header declares {} x {} but only {} bytes follow",
                h.vocab_size,
                h.dim,
                self.remaining()
            ));
        }
        let mut words = Vec::with_capacity(h.vocab_size);
        let mut values = Vec::with_capacity(h.vocab_size * h.dim);
        while words.len() < h.vocab_size {
            let start = self.pos;
            let Some(line) = self.line() else {
                return self.err(format!(
                    "expected {} rows, found {}",
                    h.vocab_size,
                    words.len()
                ));
            };
            let fail = |m: String| {
                Err(Error::Format {
                    offset: start as u64,
                    message: m,
                })
            };
            let Ok(text) = std::str::from_utf8(line) else {
                return fail("row is not valid UTF-8".into());
            };
            if text.trim().is_empty() {
                continue;
            }
            let mut parts = text.split_ascii_whitespace();
            let word = parts.next().expect("non-empty line");
            let before = values.len();
            for t in parts {
                match t.parse::<f32>() {
                    Ok(x) => values.push(x),
                    Err(_) => return fail(format!("invalid number {t:?}")),
                }
            }
            if values.len() - before != h.dim {
                return fail(format!(
                    "row for {word:?} has {} values, expected {}",
                    values.len() - before,
                    h.dim
                ));
            }
            words.push(word.to_owned());
        }
        self.skip_whitespace();
        if self.pos != self.bytes.len() {
            return self.err("extra data after the last row");
        }
        Ok((words, values))
    }

    fn binary_body(&mut self, h: VectorFileHeader) -> Result<(Vec<String>, Vec<f32>)> {
        let row_bytes = h.dim * 4;
        // each row needs at least one word byte, a space and the floats
        let min_len = h.vocab_size.checked_mul(row_bytes + 2);
        if min_len.is_none_or(|n| n > self.remaining() + 1) {
            return self.err(format!(
                "header declares {} x {} but only {} bytes follow",
                h.vocab_size,
                h.dim,
                self.remaining()
            ));
        }
        let mut words = Vec::with_capacity(h.vocab_size);
        let mut values = Vec::with_capacity(h.vocab_size * h.dim);
        for _ in 0..h.vocab_size {
            self.skip_whitespace();
            let rest = &self.bytes[self.pos..];
            let Some(len) = rest.iter().position(|&b| b == b' ') else {
                return self.err("unexpected end of file in a word");
            };
            let Ok(word) = std::str::from_utf8(&rest[..len]) else {
                return self.err("word is not valid UTF-8");
            };
            if len == 0 {
                return self.err("empty word");
            }
            self.pos += len + 1;
            if self.remaining() < row_bytes {
                return self.err(format!("unexpected end of file in the vector of {word:?}"));
            }
            let raw = &self.bytes[self.pos..self.pos + row_bytes];
            values.extend(
                raw.chunks_exact(4)
                    .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]])),
            );
            self.pos += row_bytes;
            words.push(word.to_owned());
        }
        self.skip_whitespace();
        if self.pos != self.bytes.len() {
            return self.err("extra data after the last row");
        }
        Ok((words, values))
    }
}

const CHECKPOINT_MAGIC: &[u8; 8] = b"WORDVEC\0";

/// Version written by this build.
pub const CHECKPOINT_VERSION: u32 = 1;

const SECTIONS: [&[u8; 4]; 6] = [b"CONF", b"VOCB", b"HUFF", b"INPT", b"NODE", b"STAT"];

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
struct RunInfo {
    state: TrainState,
    corpus_sentences: u64,
    corpus_tokens: u64,
}

/// Everything needed to resume single-worker training.
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub config: TrainingConfig,
    pub vocab: Vocabulary,
    pub coding: HuffmanCoding,
    pub params: ModelParams,
    pub state: TrainState,
    pub corpus_sentences: u64,
    pub corpus_tokens: u64,
}

impl Checkpoint {
    pub fn from_trainer(
        trainer: &Trainer<'_>,
        vocab: &Vocabulary,
        corpus: &EncodedCorpus,
        coding: &HuffmanCoding,
    ) -> Self {
        Checkpoint {
            config: trainer.config().clone(),
            vocab: vocab.clone(),
            coding: coding.clone(),
            params: trainer.params().clone(),
            state: trainer.state().clone(),
            corpus_sentences: corpus.num_sentences() as u64,
            corpus_tokens: corpus.num_tokens() as u64,
        }
    }

    /// Continue training on `corpus`, which must be the corpus the
    /// checkpoint was taken on.
    pub fn resume<'a>(&'a self, corpus: &'a EncodedCorpus) -> Result<Trainer<'a>> {
        if corpus.num_sentences() as u64 != self.corpus_sentences
            || corpus.num_tokens() as u64 != self.corpus_tokens
        {
            return Err(Error::SizeMismatch(format!(
                "checkpoint was taken on {} sentences / {} tokens, corpus has {} / {}",
                self.corpus_sentences,
                self.corpus_tokens,
                corpus.num_sentences(),
                corpus.num_tokens()
            )));
        }
        Trainer::resume(
            corpus,
            &self.coding,
            self.config.clone(),
            self.params.clone(),
            self.state.clone(),
        )
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        let mut out = BufWriter::new(out);
        out.write_all(CHECKPOINT_MAGIC)?;
        out.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
        out.write_all(&(SECTIONS.len() as u32).to_le_bytes())?;

        let mut vocab = Vec::new();
        self.vocab.write_text(&mut vocab)?;
        let info = RunInfo {
            state: self.state.clone(),
            corpus_sentences: self.corpus_sentences,
            corpus_tokens: self.corpus_tokens,
        };
        let payloads: [Vec<u8>; 6] = [
            serde_json::to_vec(&self.config).expect("config serializes"),
            vocab,
            serde_json::to_vec(&self.coding).expect("coding serializes"),
            matrix_bytes(&self.params.input),
            matrix_bytes(&self.params.nodes),
            serde_json::to_vec(&info).expect("state serializes"),
        ];
        for (tag, payload) in SECTIONS.iter().zip(&payloads) {
            out.write_all(*tag)?;
            out.write_all(&(payload.len() as u64).to_le_bytes())?;
            out.write_all(&crc32fast::hash(payload).to_le_bytes())?;
            out.write_all(payload)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        self.write(File::create(path)?)
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        let mut bytes = Vec::new();
        File::open(path)?.read_to_end(&mut bytes)?;
        Self::parse(&bytes)
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let corrupt = |section: &str, message: String| Error::CorruptSection {
            section: section.to_owned(),
            message,
        };
        if bytes.len() < 16 || &bytes[..8] != CHECKPOINT_MAGIC {
            return Err(corrupt("header", "not a checkpoint file".into()));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if version != CHECKPOINT_VERSION {
            return Err(Error::VersionMismatch {
                found: version,
                expected: CHECKPOINT_VERSION,
            });
        }
        let count = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;

        let mut pos = 16;
        let mut found: Vec<(&[u8], &[u8])> = Vec::new();
        for _ in 0..count {
            if bytes.len() - pos < 16 {
                return Err(corrupt("header", "truncated section header".into()));
            }
            let tag = &bytes[pos..pos + 4];
            let name = String::from_utf8_lossy(tag).into_owned();
            let len = u64::from_le_bytes(bytes[pos + 4..pos + 12].try_into().unwrap());
            let crc = u32::from_le_bytes(bytes[pos + 12..pos + 16].try_into().unwrap());
            pos += 16;
            if len > (bytes.len() - pos) as u64 {
                return Err(corrupt(&name, "truncated".into()));
            }
            let payload = &bytes[pos..pos + len as usize];
            pos += len as usize;
            if crc32fast::hash(payload) != crc {
                return Err(corrupt(&name, "checksum mismatch".into()));
            }
            found.push((tag, payload));
        }
        if pos != bytes.len() {
            return Err(corrupt(
                "trailer",
                "extra bytes after the last section".into(),
            ));
        }

        let section = |tag: &[u8; 4]| -> Result<&[u8]> {
            found
                .iter()
                .find(|(t, _)| *t == tag)
                .map(|(_, p)| *p)
                .ok_or_else(|| corrupt(std::str::from_utf8(tag).unwrap(), "missing".into()))
        };
        let json_err =
            |name: &'static str| move |e: serde_json::Error| corrupt(name, e.to_string());

        let config: TrainingConfig =
            serde_json::from_slice(section(b"CONF")?).map_err(json_err("CONF"))?;
        config
            .validate()
            .map_err(|e| corrupt("CONF", e.to_string()))?;
        let vocab =
            Vocabulary::read_text(section(b"VOCB")?).map_err(|e| corrupt("VOCB", e.to_string()))?;
        let coding: HuffmanCoding =
            serde_json::from_slice(section(b"HUFF")?).map_err(json_err("HUFF"))?;
        coding
            .validate()
            .map_err(|e| corrupt("HUFF", e.to_string()))?;
        if coding.num_words() != vocab.len() {
            return Err(corrupt(
                "HUFF",
                "word count differs from the vocabulary".into(),
            ));
        }
        let input = parse_matrix(section(b"INPT")?).map_err(|m| corrupt("INPT", m))?;
        let nodes = parse_matrix(section(b"NODE")?).map_err(|m| corrupt("NODE", m))?;
        if input.rows() != vocab.len() || input.cols() != config.dim {
            return Err(corrupt(
                "INPT",
                "shape does not match vocabulary and config".into(),
            ));
        }
        let params =
            ModelParams::from_parts(input, nodes).map_err(|e| corrupt("NODE", e.to_string()))?;
        let info: RunInfo = serde_json::from_slice(section(b"STAT")?).map_err(json_err("STAT"))?;

        Ok(Checkpoint {
            config,
            vocab,
            coding,
            params,
            state: info.state,
            corpus_sentences: info.corpus_sentences,
            corpus_tokens: info.corpus_tokens,
        })
    }
}

fn matrix_bytes(m: &SharedMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + m.rows() * m.cols() * 4);
    out.extend_from_slice(&(m.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u64).to_le_bytes());
    for x in m.iter() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

fn parse_matrix(bytes: &[u8]) -> std::result::Result<SharedMatrix, String> {
    if bytes.len() < 16 {
        return Err("truncated matrix header".into());
    }
    let rows = u64::from_le_bytes(bytes[..8].try_into().unwrap());
    let cols = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let body = &bytes[16..];
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(4))
        .ok_or("matrix size overflows")?;
    if expected != body.len() as u64 {
        return Err(format!(
            "{rows}x{cols} matrix needs {expected} bytes, found {}",
            body.len()
        ));
    }
    let values = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    SharedMatrix::from_vec(rows as usize, cols as usize, values).map_err(|e| e.to_string())
}
