"""Produce vector files with gensim for the interchange tests.

Trains a small hierarchical-softmax skip-gram model on a synthetic topic
corpus, writes it in the binary and text word2vec formats, and records
gensim's own nearest-neighbour rankings for ten probe words.

    pip install gensim
    python scripts/reference_vectors.py crates/core/tests/data
"""

import json
import random
import sys
from pathlib import Path

from gensim.models import Word2Vec

TOPICS = 8
WORDS_PER_TOPIC = 25
PROBES = 10
TOP_K = 10


def corpus(rng):
    shared = [f"the{i}" for i in range(10)]
    topics = [[f"t{t}w{i}" for i in range(WORDS_PER_TOPIC)] for t in range(TOPICS)]
    for _ in range(6000):
        words = topics[rng.randrange(TOPICS)]
        n = rng.randint(4, 12)
        yield [rng.choice(words) if rng.random() < 0.8 else rng.choice(shared) for _ in range(n)]


def main(out):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    sentences = list(corpus(random.Random(7)))
    model = Word2Vec(
        sentences,
        vector_size=16,
        window=5,
        min_count=5,
        sg=1,
        hs=1,
        negative=0,
        sample=0,
        epochs=3,
        seed=1,
        workers=1,
    )
    kv = model.wv
    kv.save_word2vec_format(str(out / "gensim.bin"), binary=True)
    kv.save_word2vec_format(str(out / "gensim.txt"), binary=False)

    # Probes whose top-k list has no near-ties, so the ranking is stable
    # across float summation orders. Float32 cosines are good to ~1e-7.
    eligible = {}
    for word in kv.index_to_key:
        ranked = kv.most_similar(word, topn=TOP_K + 1)
        sims = [s for _, s in ranked]
        if min(a - b for a, b in zip(sims, sims[1:])) >= 1e-5:
            eligible[word] = [w for w, _ in ranked[:TOP_K]]
    words = list(eligible)
    step = len(words) / PROBES
    rankings = {words[int(i * step)]: eligible[words[int(i * step)]] for i in range(PROBES)}
    (out / "gensim_neighbors.json").write_text(json.dumps(rankings, indent=1) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/tests/data")
