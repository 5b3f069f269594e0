//! Tokenization, vocabulary construction and corpus encoding.
//!
//! Corpora are processed in two passes: the first pass counts words and
//! builds a [`Vocabulary`], the second re-reads the text and maps every
//! retained token to its vocabulary index. Sentences are newline-delimited
//! and training windows never cross them.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};

/// One item of a token stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Word(String),
    /// End of a newline-delimited sentence.
    SentenceEnd,
}

/// Streaming whitespace tokenizer.
///
/// Tokens are maximal runs of non-whitespace characters. Tokens that are not
/// valid UTF-8 are dropped and counted in [`Tokenizer::skipped`].
pub struct Tokenizer<R> {
    reader: R,
    lowercase: bool,
    line: Vec<u8>,
    pending: std::vec::IntoIter<Token>,
    skipped: u64,
    done: bool,
}

impl<R: BufRead> Tokenizer<R> {
    pub fn new(reader: R, lowercase: bool) -> Self {
        Tokenizer {
            reader,
            lowercase,
            line: Vec::new(),
            pending: Vec::new().into_iter(),
            skipped: 0,
            done: false,
        }
    }

    /// Number of tokens dropped because they were not valid UTF-8.
    pub fn skipped(&self) -> u64 {
        self.skipped
    }

    fn fill(&mut self) -> io::Result<bool> {
        self.line.clear();
        let n = self.reader.read_until(b'\n', &mut self.line)?;
        if n == 0 {
            return Ok(false);
        }

        let mut tokens = Vec::new();
        for raw in self
            .line
            .split(|b| b.is_ascii_whitespace())
            .filter(|t| !t.is_empty())
        {
            match std::str::from_utf8(raw) {
                Ok(s) => {
                    // Non-ASCII whitespace (e.g. U+00A0) also separates tokens.
                    for word in s.split_whitespace() {
                        let word = if self.lowercase {
                            word.to_lowercase()
                        } else {
                            word.to_owned()
                        };
                        tokens.push(Token::Word(word));
                    }
                }
                Err(_) => self.skipped += 1,
            }
        }
        tokens.push(Token::SentenceEnd);
        self.pending = tokens.into_iter();
        Ok(true)
    }
}

impl<R: BufRead> Iterator for Tokenizer<R> {
    type Item = io::Result<Token>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(tok) = self.pending.next() {
                return Some(Ok(tok));
            }
            if self.done {
                return None;
            }
            match self.fill() {
                Ok(true) => {}
                Ok(false) => {
                    self.done = true;
                    return None;
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
    }
}

/// Hand the tokens of `reader` to `f` as a plain iterator. A read error ends
/// the stream early and is returned instead of `f`'s result. The second
/// value is the number of tokens skipped as invalid UTF-8.
pub fn with_tokens<R, T, F>(reader: R, lowercase: bool, f: F) -> Result<(T, u64)>
where
    R: BufRead,
    F: FnOnce(&mut dyn Iterator<Item = Token>) -> T,
{
    let mut tokenizer = Tokenizer::new(reader, lowercase);
    let mut error = None;
    let out = {
        let mut tokens = tokenizer.by_ref().map_while(|t| match t {
            Ok(tok) => Some(tok),
            Err(e) => {
                error = Some(e);
                None
            }
        });
        f(&mut tokens)
    };
    match error {
        Some(e) => Err(e.into()),
        None => Ok((out, tokenizer.skipped())),
    }
}

/// Tokenize an in-memory string.
pub fn tokenize(text: &str, lowercase: bool) -> Vec<Token> {
    Tokenizer::new(text.as_bytes(), lowercase)
        .map(|t| t.expect("reading from a byte slice cannot fail"))
        .collect()
}

/// A vocabulary entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VocabEntry {
    pub word: String,
    pub count: u64,
}

/// Word-to-index mapping sorted by descending frequency.
///
/// Ties are broken by first occurrence in the scanned corpus, which makes
/// the downstream Huffman tree deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    index: HashMap<String, u32>,
    total_tokens: u64,
}

impl Vocabulary {
    /// Build a vocabulary from entries that are already in rank order.
    ///
    /// Counts must be non-increasing. Zero counts are accepted so that
    /// vector files, which carry no counts, can be loaded.
    pub fn from_entries(entries: Vec<VocabEntry>) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        let mut total_tokens = 0u64;
        for (i, e) in entries.iter().enumerate() {
            if e.word.is_empty() {
                return Err(Error::InvalidVocabulary(format!("entry {i} is empty")));
            }
            if i > 0 && entries[i - 1].count < e.count {
                return Err(Error::InvalidVocabulary(format!(
                    "entry {i} ({}) has count {} above its predecessor",
                    e.word, e.count
                )));
            }
            if index.insert(e.word.clone(), i as u32).is_some() {
                return Err(Error::InvalidVocabulary(format!(
                    "duplicate word {:?}",
                    e.word
                )));
            }
            total_tokens += e.count;
        }
        Ok(Vocabulary {
            entries,
            index,
            total_tokens,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn word(&self, idx: usize) -> &str {
        &self.entries[idx].word
    }

    pub fn count(&self, idx: usize) -> u64 {
        self.entries[idx].count
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).map(|&i| i as usize)
    }

    /// Sum of all counts: the number of retained corpus tokens.
    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Keep the `max` most frequent entries.
    pub fn truncate(&mut self, max: usize) {
        if max >= self.entries.len() {
            return;
        }
        for e in self.entries.drain(max..) {
            self.index.remove(&e.word);
            self.total_tokens -= e.count;
        }
    }

    /// Write one `word count` line per entry, in rank order.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        for e in &self.entries {
            if e.word.contains(char::is_whitespace) {
                return Err(Error::UnrepresentableWord(e.word.clone()));
            }
            writeln!(out, "{} {}", e.word, e.count)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Read the format produced by [`Vocabulary::write_text`].
    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(word), Some(count), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: "expected `word count`".into(),
                });
            };
            let count = count.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("invalid count {count:?}"),
            })?;
            entries.push(VocabEntry {
                word: word.to_owned(),
                count,
            });
        }
        Self::from_entries(entries)
    }
}

/// Vocabulary size limits.
#[derive(Clone, Copy, Debug)]
pub struct VocabOptions {
    pub min_count: u64,
    /// Keep only the most frequent words after min-count filtering.
    pub max_vocab: Option<usize>,
}

impl Default for VocabOptions {
    fn default() -> Self {
        VocabOptions {
            min_count: 5,
            max_vocab: None,
        }
    }
}

/// Count words and build the rank-ordered vocabulary.
pub fn build_vocabulary<I>(tokens: I, opts: VocabOptions) -> Result<Vocabulary>
where
    I: IntoIterator<Item = Token>,
{
    if opts.min_count == 0 {
        return Err(Error::InvalidConfig("min_count must be at least 1".into()));
    }

    // word -> (count, first occurrence)
    let mut counts: HashMap<String, (u64, usize)> = HashMap::new();
    for tok in tokens {
        if let Token::Word(w) = tok {
            let next = counts.len();
            counts.entry(w).or_insert((0, next)).0 += 1;
        }
    }

    let mut words: Vec<(String, u64, usize)> = counts
        .into_iter()
        .filter(|(_, (c, _))| *c >= opts.min_count)
        .map(|(w, (c, first))| (w, c, first))
        .collect();
    words.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    if let Some(max) = opts.max_vocab {
        words.truncate(max);
    }
    if words.is_empty() {
        return Err(Error::EmptyVocabulary {
            min_count: opts.min_count,
        });
    }

    Vocabulary::from_entries(
        words
            .into_iter()
            .map(|(word, count, _)| VocabEntry { word, count })
            .collect(),
    )
}

/// Corpus as sentences of vocabulary indices, stored contiguously.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EncodedCorpus {
    tokens: Vec<u32>,
    // sentence i spans tokens[offsets[i]..offsets[i + 1]]
    offsets: Vec<usize>,
}

impl EncodedCorpus {
    pub fn new() -> Self {
        EncodedCorpus {
            tokens: Vec::new(),
            offsets: vec![0],
        }
    }

    pub fn from_sentences<S: AsRef<[u32]>>(sentences: &[S]) -> Self {
        let mut corpus = Self::new();
        for s in sentences {
            corpus.push_sentence(s.as_ref());
        }
        corpus
    }

    pub fn push_sentence(&mut self, sentence: &[u32]) {
        if self.offsets.is_empty() {
            self.offsets.push(0);
        }
        self.tokens.extend_from_slice(sentence);
        self.offsets.push(self.tokens.len());
    }

    pub fn num_sentences(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn num_tokens(&self) -> usize {
        self.tokens.len()
    }

    pub fn sentence(&self, idx: usize) -> &[u32] {
        &self.tokens[self.offsets[idx]..self.offsets[idx + 1]]
    }

    pub fn sentences(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        (0..self.num_sentences()).map(move |i| self.sentence(i))
    }

    /// Largest vocabulary index plus one, or 0 for an empty corpus.
    pub fn max_index_bound(&self) -> usize {
        self.tokens.iter().max().map_or(0, |&m| m as usize + 1)
    }
}

/// Map tokens to vocabulary indices, dropping out-of-vocabulary words.
///
/// With `max_sentence_len`, longer lines are split into consecutive chunks
/// of at most that many retained tokens, so single-line corpora can still
/// be sharded across workers.
pub fn encode<I>(tokens: I, vocab: &Vocabulary, max_sentence_len: Option<usize>) -> EncodedCorpus
where
    I: IntoIterator<Item = Token>,
{
    let mut corpus = EncodedCorpus::new();
    let mut current: Vec<u32> = Vec::new();
    let max = max_sentence_len.unwrap_or(usize::MAX).max(1);
    for tok in tokens {
        match tok {
            Token::Word(w) => {
                if let Some(idx) = vocab.index_of(&w) {
                    current.push(idx as u32);
                    if current.len() == max {
                        corpus.push_sentence(&current);
                        current.clear();
                    }
                }
            }
            Token::SentenceEnd => {
                corpus.push_sentence(&current);
                current.clear();
            }
        }
    }
    if !current.is_empty() {
        corpus.push_sentence(&current);
    }
    corpus
}

/// Map indices back to words.
pub fn decode<'a>(sentence: &[u32], vocab: &'a Vocabulary) -> Vec<&'a str> {
    sentence.iter().map(|&i| vocab.word(i as usize)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(tokens: &[Token]) -> Vec<Vec<&str>> {
        let mut out = vec![Vec::new()];
        for t in tokens {
            match t {
                Token::Word(w) => out.last_mut().unwrap().push(w.as_str()),
                Token::SentenceEnd => out.push(Vec::new()),
            }
        }
        out.pop();
        out
    }

    #[test]
    fn whitespace_split_two_sentences() {
        let toks = tokenize("the cat sat\non the mat", false);
        assert_eq!(
            words(&toks),
            vec![vec!["the", "cat", "sat"], vec!["on", "the", "mat"]]
        );
    }

    #[test]
    fn empty_input_is_empty_stream() {
        assert!(tokenize("", false).is_empty());
    }

    #[test]
    fn lowercase_folds_case() {
        let toks = tokenize("Big big BIG", true);
        assert_eq!(words(&toks), vec![vec!["big", "big", "big"]]);
        let toks = tokenize("Big big", false);
        assert_eq!(words(&toks), vec![vec!["Big", "big"]]);
    }

    #[test]
    fn invalid_utf8_tokens_are_skipped_and_counted() {
        let bytes: &[u8] = b"good \xff\xfe bad\xc3 fine\n";
        let mut tk = Tokenizer::new(bytes, false);
        let toks: Vec<Token> = tk.by_ref().map(|t| t.unwrap()).collect();
        assert_eq!(words(&toks), vec![vec!["good", "fine"]]);
        assert_eq!(tk.skipped(), 2);
    }

    #[test]
    fn vocabulary_counts_by_hand() {
        let toks = tokenize("the cat sat on the mat", false);
        let v = build_vocabulary(
            toks.clone(),
            VocabOptions {
                min_count: 1,
                max_vocab: None,
            },
        )
        .unwrap();
        let got: Vec<(&str, u64)> = v
            .entries()
            .iter()
            .map(|e| (e.word.as_str(), e.count))
            .collect();
        assert_eq!(
            got,
            vec![("the", 2), ("cat", 1), ("sat", 1), ("on", 1), ("mat", 1)]
        );
        assert_eq!(v.total_tokens(), 6);

        let v = build_vocabulary(
            toks,
            VocabOptions {
                min_count: 2,
                max_vocab: None,
            },
        )
        .unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.word(0), "the");
        assert_eq!(v.count(0), 2);
    }

    #[test]
    fn empty_vocabulary_is_an_error() {
        let err = build_vocabulary(
            Vec::new(),
            VocabOptions {
                min_count: 1,
                max_vocab: None,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyVocabulary { .. }));
        assert!(err.to_string().contains("no words survive min_count"));
    }

    #[test]
    fn max_vocab_keeps_most_frequent() {
        let toks = tokenize("a b b c c c", false);
        let v = build_vocabulary(
            toks,
            VocabOptions {
                min_count: 1,
                max_vocab: Some(2),
            },
        )
        .unwrap();
        assert_eq!(v.entries().len(), 2);
        assert_eq!((v.word(0), v.word(1)), ("c", "b"));
        assert_eq!(v.total_tokens(), 5);
    }

    fn small_vocab() -> Vocabulary {
        Vocabulary::from_entries(vec![
            VocabEntry {
                word: "the".into(),
                count: 2,
            },
            VocabEntry {
                word: "cat".into(),
                count: 1,
            },
        ])
        .unwrap()
    }

    #[test]
    fn encode_drops_oov() {
        let v = small_vocab();
        let c = encode(tokenize("the cat zzz", false), &v, None);
        assert_eq!(c.num_sentences(), 1);
        assert_eq!(c.sentence(0), &[0, 1]);
    }

    #[test]
    fn encode_keeps_all_oov_sentence_as_empty() {
        let v = small_vocab();
        let c = encode(tokenize("zzz yyy\nthe the", false), &v, None);
        assert_eq!(c.num_sentences(), 2);
        assert!(c.sentence(0).is_empty());
        assert_eq!(c.sentence(1), &[0, 0]);
    }

    #[test]
    fn encode_splits_long_lines() {
        let v = small_vocab();
        let c = encode(tokenize("the cat the cat the\ncat", false), &v, Some(2));
        let got: Vec<&[u32]> = c.sentences().collect();
        assert_eq!(got, vec![&[0, 1][..], &[0, 1], &[0], &[1]]);
    }

    #[test]
    fn vocabulary_text_round_trip() {
        let v = small_vocab();
        let mut buf = Vec::new();
        v.write_text(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "the 2\ncat 1\n");
        let back = Vocabulary::read_text(&buf[..]).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn unsorted_entries_are_rejected() {
        let err = Vocabulary::from_entries(vec![
            VocabEntry {
                word: "a".into(),
                count: 1,
            },
            VocabEntry {
                word: "b".into(),
                count: 2,
            },
        ])
        .unwrap_err();
        assert!(matches!(err, Error::InvalidVocabulary(_)));
    }
}
