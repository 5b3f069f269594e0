mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wordvec::corpus::{build_vocabulary, encode, tokenize, VocabEntry, VocabOptions, Vocabulary};
use wordvec::eval::{
    answer_analogy, answer_with_offset, evaluate, nearest_neighbors, odd_one_out, parse_questions,
    relation_vector, sentence_completion_score, EvalOptions, Query, WordVectors,
};
use wordvec::huffman::build_huffman;
use wordvec::model::{Architecture, TrainingConfig};
use wordvec::trainer::train;

fn vocab(words: &[String]) -> Vocabulary {
    Vocabulary::from_entries(
        words
            .iter()
            .map(|w| VocabEntry {
                word: w.clone(),
                count: 1,
            })
            .collect(),
    )
    .unwrap()
}

fn vectors(words: &[String], rows: &[Vec<f32>]) -> WordVectors {
    WordVectors::new(vocab(words), rows.concat(), rows[0].len()).unwrap()
}

/// Grid words `w{g}_{r}` with vector `e_g + e_(G + r)`, plus optional noise.
fn grid_vectors(groups: usize, roles: usize, noise: f32, rng: &mut ChaCha8Rng) -> WordVectors {
    let dim = groups + roles;
    let mut words = Vec::new();
    let mut rows = Vec::new();
    for g in 0..groups {
        for r in 0..roles {
            words.push(format!("w{g}_{r}"));
            let mut v: Vec<f32> = (0..dim).map(|_| rng.gen_range(-noise..=noise)).collect();
            v[g] += 1.0;
            v[groups + r] += 1.0;
            rows.push(v);
        }
    }
    vectors(&words, &rows)
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

fn dot64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn analogy_matches_brute_force_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let words: Vec<String> = (0..5).map(|i| format!("v{i}")).collect();
    let mut checked = 0;
    for _ in 0..500 {
        let rows: Vec<Vec<f32>> = (0..5)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let wv = vectors(&words, &rows);
        let u: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| unit(&r.iter().map(|&x| x as f64).collect::<Vec<_>>()))
            .collect();
        let (a, b, c) = (0, 1, 2);
        let x: Vec<f64> = (0..3).map(|k| u[b][k] - u[a][k] + u[c][k]).collect();
        let mut scores: Vec<(f64, usize)> = (3..5).map(|w| (dot64(&x, &u[w]), w)).collect();
        scores.sort_by(|p, q| q.0.total_cmp(&p.0));
        if scores[0].0 - scores[1].0 < 1e-4 {
            continue;
        }
        let got = answer_analogy(&wv, "v0", "v1", "v2", None).unwrap();
        assert_eq!(got.as_deref(), Some(words[scores[0].1].as_str()));
        checked += 1;
    }
    assert!(checked > 400);
}

#[test]
fn exact_offsets_score_full_marks_even_with_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let qs = parse_questions(&common::grid_questions(6, 3)).unwrap();
    for noise in [0.0, 0.05] {
        let wv = grid_vectors(6, 3, noise, &mut rng);
        let report = evaluate(&wv, &qs, &EvalOptions::default()).unwrap();
        assert_eq!(report.total.correct, qs.num_questions());
        assert_eq!(report.total.accuracy(), 1.0);
    }
}

#[test]
fn positive_scaling_changes_no_answer() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let wv = grid_vectors(5, 2, 0.3, &mut rng);
    let words: Vec<String> = wv
        .vocab()
        .entries()
        .iter()
        .map(|e| e.word.clone())
        .collect();
    let scaled_rows: Vec<Vec<f32>> = (0..wv.len())
        .map(|i| wv.vector(i).iter().map(|x| x * 7.5).collect())
        .collect();
    let scaled = vectors(&words, &scaled_rows);

    let qs = parse_questions(&common::grid_questions(5, 2)).unwrap();
    let opts = EvalOptions::default();
    assert_eq!(
        evaluate(&wv, &qs, &opts).unwrap().total,
        evaluate(&scaled, &qs, &opts).unwrap().total
    );
    for w in &words {
        let near = |v: &WordVectors| -> Vec<String> {
            nearest_neighbors(v, Query::Word(w), 4, &[])
                .unwrap()
                .into_iter()
                .map(|n| n.word)
                .collect()
        };
        assert_eq!(near(&wv), near(&scaled));
    }
    let some: Vec<&str> = words[..5].iter().map(String::as_str).collect();
    assert_eq!(
        odd_one_out(&wv, &some).unwrap(),
        odd_one_out(&scaled, &some).unwrap()
    );
}

#[test]
fn analogy_never_returns_an_input_word() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let wv = grid_vectors(4, 3, 0.5, &mut rng);
    let words: Vec<String> = wv
        .vocab()
        .entries()
        .iter()
        .map(|e| e.word.clone())
        .collect();
    for _ in 0..300 {
        let pick = |rng: &mut ChaCha8Rng| words[rng.gen_range(0..words.len())].clone();
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        if let Some(d) = answer_analogy(&wv, &a, &b, &c, None).unwrap() {
            assert!(d != a && d != b && d != c);
        }
    }
}

#[test]
fn evaluation_ignores_question_order_and_threads() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let wv = grid_vectors(6, 2, 0.6, &mut rng);
    let text = common::grid_questions(6, 2);
    let mut lines: Vec<&str> = text.lines().collect();
    let base = parse_questions(&text).unwrap();
    // Reverse the questions inside each category.
    let mut shuffled = String::new();
    let mut block: Vec<&str> = Vec::new();
    lines.push(": end");
    for l in lines {
        if l.starts_with(':') {
            block.reverse();
            for q in block.drain(..) {
                shuffled.push_str(q);
                shuffled.push('\n');
            }
            if l != ": end" {
                shuffled.push_str(l);
                shuffled.push('\n');
            }
        } else {
            block.push(l);
        }
    }
    let reordered = parse_questions(&shuffled).unwrap();
    let one = EvalOptions {
        threads: 1,
        ..Default::default()
    };
    let four = EvalOptions {
        threads: 4,
        ..Default::default()
    };
    let r1 = evaluate(&wv, &base, &one).unwrap();
    assert!(
        r1.total.correct < r1.total.attempted,
        "noise should cause some misses"
    );
    assert_eq!(r1, evaluate(&wv, &base, &four).unwrap());
    assert_eq!(r1, evaluate(&wv, &reordered, &one).unwrap());
}

#[test]
fn averaged_relation_beats_single_noisy_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let dim = 20;
    let r: Vec<f32> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut words = Vec::new();
    let mut rows = Vec::new();
    for i in 0..10 {
        let x: Vec<f32> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f32> = x
            .iter()
            .zip(&r)
            .map(|(a, b)| a + b + rng.gen_range(-0.6..0.6))
            .collect();
        words.push(format!("x{i}"));
        words.push(format!("y{i}"));
        rows.push(x);
        rows.push(y);
    }
    // Work on unit rows so that the relation vector is comparable.
    let unit_rows: Vec<Vec<f32>> = rows
        .iter()
        .map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f32>().sqrt();
            v.iter().map(|x| x / n).collect()
        })
        .collect();
    let wv = vectors(&words, &unit_rows);
    let cos = |a: &[f32], b: &[f32]| {
        let d: f32 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        d / (a.iter().map(|x| x * x).sum::<f32>().sqrt()
            * b.iter().map(|x| x * x).sum::<f32>().sqrt())
    };
    let pairs: Vec<(String, String)> = (0..10)
        .map(|i| (format!("x{i}"), format!("y{i}")))
        .collect();
    let refs: Vec<(&str, &str)> = pairs
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let avg = relation_vector(&wv, &refs).unwrap();
    let target = {
        // The true offset between unit rows is not exactly r, so compare
        // against the noise-free mean offset direction.
        let mut m = vec![0f32; dim];
        for i in 0..10 {
            let (x, y) = (&rows[2 * i], &rows[2 * i + 1]);
            let (nx, ny) = (
                x.iter().map(|v| v * v).sum::<f32>().sqrt(),
                y.iter().map(|v| v * v).sum::<f32>().sqrt(),
            );
            for k in 0..dim {
                m[k] += (x[k] + r[k]) / ny - x[k] / nx;
            }
        }
        m
    };
    let avg_cos = cos(&avg, &target);
    for p in &refs {
        let single = relation_vector(&wv, &[*p]).unwrap();
        assert!(avg_cos > cos(&single, &target));
    }

    let one = relation_vector(&wv, &refs[..1]).unwrap();
    let twice = relation_vector(&wv, &[refs[0], refs[0]]).unwrap();
    assert_eq!(one, twice);
    let expected: Vec<f32> = wv
        .vector(1)
        .iter()
        .zip(wv.vector(0))
        .map(|(y, x)| y - x)
        .collect();
    for (a, b) in one.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-6);
    }
    let answer = answer_with_offset(&wv, &avg, "x3", &[], None).unwrap();
    assert_eq!(answer.as_deref(), Some("y3"));
}

#[test]
fn odd_one_out_finds_the_stray_cluster_member() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let words: Vec<String> = (0..5).map(|i| format!("c{i}")).collect();
    let mut rows: Vec<Vec<f32>> = (0..4)
        .map(|_| vec![1.0, rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)])
        .collect();
    rows.insert(
        2,
        vec![rng.gen_range(-0.1..0.1), 1.0, rng.gen_range(-0.1..0.1)],
    );
    let wv = vectors(&words, &rows);
    let all: Vec<&str> = words.iter().map(String::as_str).collect();
    assert_eq!(odd_one_out(&wv, &all).unwrap(), "c2");
}

#[test]
fn sentence_completion_prefers_the_observed_neighbour() {
    let text = format!("{}\n{}\n", "a b ".repeat(3000), "c d ".repeat(3000));
    let tokens = tokenize(&text, false);
    let vocab = build_vocabulary(tokens.iter().cloned(), VocabOptions::default()).unwrap();
    let corpus = encode(tokens, &vocab, Some(200));
    let coding = build_huffman(&vocab).unwrap();
    let cfg = TrainingConfig {
        architecture: Architecture::SkipGram,
        dim: 8,
        window: 2,
        ..Default::default()
    };
    let (params, _) = train(&corpus, &coding, &cfg).unwrap();
    let sentence = ["b", "___", "b"];
    let done =
        sentence_completion_score(&params, &coding, &vocab, &sentence, "___", &["c", "a"], 2)
            .unwrap();
    assert_eq!(done.best, "a");
    assert!(done.scores[1].score.unwrap() > done.scores[0].score.unwrap());
}
