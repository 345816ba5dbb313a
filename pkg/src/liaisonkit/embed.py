"""Word embeddings trained from scratch on the corpus, for the topic builder.

Skip-gram with negative sampling: unigram^(3/4) negative distribution,
dynamic context windows and linear learning-rate decay.  Updates are applied
in vectorised chunks; with a single worker the whole run is deterministic for
a fixed seed, while extra workers apply lock-free concurrent updates (benign
races, faster, not bit-reproducible).
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError, VocabularyError

FORMAT = "liaisonkit-embedding"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class EmbedConfig:
    dim: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    min_count: int = 5
    seed: int = 1
    learning_rate: float = 0.025
    chunk: int = 512
    workers: int = 1


@dataclass
class Suggestion:
    token: str
    similarity: float


@dataclass
class SuggestionResult:
    suggestions: list[Suggestion]
    unknown_seeds: list[str]


class EmbeddingModel:
    def __init__(self, vocabulary: dict[str, int], vectors: np.ndarray,
                 counts: np.ndarray, config: EmbedConfig):
        self.vocabulary = vocabulary
        self.vectors = vectors
        self.counts = counts
        self.config = config
        self._tokens = [None] * len(vocabulary)
        for tok, idx in vocabulary.items():
            self._tokens[idx] = tok

    def token_of(self, index: int) -> str:
        return self._tokens[index]

    def vector(self, token: str) -> np.ndarray:
        try:
            return self.vectors[self.vocabulary[token]]
        except KeyError:
            raise VocabularyError(f"token {token!r} not in vocabulary") from None


def _build_vocab(sentences: list[list[str]], min_count: int) -> tuple[dict[str, int], np.ndarray]:
    counts: dict[str, int] = {}
    for sent in sentences:
        for tok in sent:
            counts[tok] = counts.get(tok, 0) + 1
    kept = [(tok, c) for tok, c in counts.items() if c >= min_count]
    if not kept:
        raise VocabularyError(f"no token reaches min_count={min_count}")
    kept.sort(key=lambda kv: (-kv[1], kv[0]))
    vocab = {tok: i for i, (tok, _) in enumerate(kept)}
    return vocab, np.array([c for _, c in kept], dtype=np.int64)


def _skipgram_pairs(
    ids: np.ndarray, sent_ids: np.ndarray, window: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """(center, context) id pairs for one epoch with per-token dynamic windows."""
    n = ids.shape[0]
    eff = rng.integers(1, window + 1, size=n)
    centers, contexts = [], []
    for d in range(1, window + 1):
        if n <= d:
            break
        same = sent_ids[: n - d] == sent_ids[d:]
        left = same & (eff[: n - d] >= d)   # center i, context i+d
        right = same & (eff[d:] >= d)       # center i+d, context i
        centers.append(ids[:n - d][left])
        contexts.append(ids[d:][left])
        centers.append(ids[d:][right])
        contexts.append(ids[:n - d][right])
    if not centers:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    return np.concatenate(centers), np.concatenate(contexts)


def train_embeddings(corpus: Iterable[Sequence[str]], config: EmbedConfig = EmbedConfig()) -> EmbeddingModel:
    """Train SGNS vectors over tokenized sentences/paragraphs."""
    sentences = [list(s) for s in corpus if s]
    vocab, counts = _build_vocab(sentences, config.min_count)
    rng = np.random.default_rng(config.seed)

    ids_list, sent_list = [], []
    for si, sent in enumerate(sentences):
        kept = [vocab[t] for t in sent if t in vocab]
        if kept:
            ids_list.append(np.array(kept, dtype=np.int64))
            sent_list.append(np.full(len(kept), si, dtype=np.int64))
    if not ids_list:
        raise VocabularyError("corpus empty after min_count filtering")
    ids = np.concatenate(ids_list)
    sent_ids = np.concatenate(sent_list)

    v = len(vocab)
    w_in = (rng.random((v, config.dim), dtype=np.float64) - 0.5) / config.dim
    w_out = np.zeros((v, config.dim), dtype=np.float64)

    # unigram^(3/4) sampling table as a cumulative distribution
    probs = counts.astype(np.float64) ** 0.75
    cumulative = np.cumsum(probs / probs.sum())

    # pair counts vary by epoch; approximate total for the lr schedule
    approx_pairs_per_epoch = max(1, int(ids.size * (config.window + 1)))
    total_planned = config.epochs * approx_pairs_per_epoch
    processed = 0

    for _ in range(config.epochs):
        centers, contexts = _skipgram_pairs(ids, sent_ids, config.window, rng)
        order = rng.permutation(centers.shape[0])
        centers, contexts = centers[order], contexts[order]
        negs = np.searchsorted(
            cumulative, rng.random((centers.shape[0], config.negatives))
        ).astype(np.int64)

        def run_range(lo: int, hi: int, processed_base: int) -> None:
            done = processed_base
            for start in range(lo, hi, config.chunk):
                stop = min(start + config.chunk, hi)
                lr = max(
                    config.learning_rate * (1.0 - done / total_planned),
                    config.learning_rate * 1e-4,
                )
                _chunk_update(
                    w_in, w_out,
                    centers[start:stop], contexts[start:stop], negs[start:stop],
                    lr, config.negatives,
                )
                done += stop - start

        if config.workers <= 1:
            run_range(0, centers.shape[0], processed)
        else:
            bounds = np.linspace(0, centers.shape[0], config.workers + 1).astype(int)
            threads = [
                threading.Thread(target=run_range, args=(bounds[i], bounds[i + 1], processed))
                for i in range(config.workers)
            ]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
        processed += centers.shape[0]

    return EmbeddingModel(vocab, w_in.astype(np.float32), counts, config)


def _chunk_update(w_in, w_out, centers, contexts, negs, lr, k):
    h = w_in[centers]                                   # B x d
    targets = np.concatenate([contexts[:, None], negs], axis=1)  # B x (1+k)
    vecs = w_out[targets]                               # B x (1+k) x d
    scores = 1.0 / (1.0 + np.exp(-np.einsum("bd,bkd->bk", h, vecs)))
    labels = np.zeros_like(scores)
    labels[:, 0] = 1.0
    g = lr * (labels - scores)
    g[:, 1:][targets[:, 1:] == contexts[:, None]] = 0.0  # skip accidental positives
    grad_h = np.einsum("bk,bkd->bd", g, vecs)
    grad_v = g[:, :, None] * h[:, None, :]
    np.add.at(w_in, centers, grad_h)
    np.add.at(w_out, targets.reshape(-1), grad_v.reshape(-1, w_out.shape[1]))


def suggest_terms(
    model: EmbeddingModel,
    seed_terms: Sequence[str],
    k: int = 10,
    exclude: Iterable[str] = (),
) -> SuggestionResult:
    """Nearest vocabulary tokens to the mean seed vector, by cosine similarity.

    Seeds and excluded tokens never appear in the output; ties break by
    corpus frequency then alphabetically.
    """
    known = [t for t in seed_terms if t in model.vocabulary]
    unknown = [t for t in seed_terms if t not in model.vocabulary]
    if not known:
        raise VocabularyError(f"no seed term in vocabulary: {list(seed_terms)!r}")
    if k < 0:
        raise ValidationError("k must be non-negative")
    query = np.mean([model.vectors[model.vocabulary[t]] for t in known], axis=0)
    qn = np.linalg.norm(query)
    if qn == 0:
        raise ValidationError("degenerate zero query vector")
    norms = np.linalg.norm(model.vectors, axis=1)
    norms[norms == 0] = 1e-12
    sims = (model.vectors @ query) / (norms * qn)
    banned = set(known) | set(unknown) | set(exclude)
    ranked = sorted(
        (
            (-sims[i], -int(model.counts[i]), model.token_of(i))
            for i in range(len(sims))
            if model.token_of(i) not in banned
        ),
    )
    return SuggestionResult(
        suggestions=[
            Suggestion(token=tok, similarity=float(-neg_sim)) for neg_sim, _, tok in ranked[:k]
        ],
        unknown_seeds=unknown,
    )


def save_model(model: EmbeddingModel, path: str | Path) -> None:
    """Header JSON line (config + vocab) followed by the float32 LE matrix."""
    header = {
        "format": FORMAT,
        "version": FORMAT_VERSION,
        "config": asdict(model.config),
        "vocab": [model.token_of(i) for i in range(len(model.vocabulary))],
        "counts": model.counts.tolist(),
        "dim": int(model.vectors.shape[1]),
    }
    with open(path, "wb") as fh:
        fh.write((json.dumps(header, ensure_ascii=False) + "\n").encode("utf-8"))
        fh.write(model.vectors.astype("<f4").tobytes())


def load_model(path: str | Path) -> EmbeddingModel:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode("utf-8"))
        if header.get("format") != FORMAT:
            raise ValidationError(f"{path}: not an embedding model file")
        if header.get("version") != FORMAT_VERSION:
            raise ValidationError(f"{path}: unsupported model version {header.get('version')}")
        vocab_list = header["vocab"]
        dim = header["dim"]
        raw = fh.read()
    vectors = np.frombuffer(raw, dtype="<f4").reshape(len(vocab_list), dim).copy()
    return EmbeddingModel(
        vocabulary={tok: i for i, tok in enumerate(vocab_list)},
        vectors=vectors,
        counts=np.array(header["counts"], dtype=np.int64),
        config=EmbedConfig(**header["config"]),
    )
