"""Document-term matrix with stopword removal and frequency thresholds.

Vocabulary order is deterministic: descending document frequency, ties
broken lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Sequence

import numpy as np

from ..errors import EmptyVocabularyError
from ..text import tokenize


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    text = resources.files("skillscope.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w for w in text.split() if w)


@dataclass
class DocTermMatrix:
    vocab: list[str]
    # parallel arrays per document: term indices and their counts
    doc_indices: list[np.ndarray]
    doc_counts: list[np.ndarray]

    @property
    def n_docs(self) -> int:
        return len(self.doc_indices)

    @property
    def n_terms(self) -> int:
        return len(self.vocab)

    def dense(self) -> np.ndarray:
        out = np.zeros((self.n_docs, self.n_terms), dtype=np.int64)
        for d, (idx, cnt) in enumerate(zip(self.doc_indices, self.doc_counts)):
            out[d, idx] = cnt
        return out

    def doc_tokens(self, d: int) -> np.ndarray:
        """Term indices of document d with multiplicity (LDA token stream)."""
        return np.repeat(self.doc_indices[d], self.doc_counts[d])

    def doc_frequency(self) -> np.ndarray:
        df = np.zeros(self.n_terms, dtype=np.int64)
        for idx in self.doc_indices:
            df[idx] += 1
        return df


def build_dtm(
    texts: Sequence[str],
    min_df: int = 1,
    max_df_fraction: float = 1.0,
    extra_stopwords: frozenset[str] | None = None,
) -> DocTermMatrix:
    if not texts:
        raise EmptyVocabularyError("empty corpus")
    stop = stopwords() | (extra_stopwords or frozenset())
    doc_term_counts: list[dict[str, int]] = []
    df: dict[str, int] = {}
    for text in texts:
        counts: dict[str, int] = {}
        for tok in tokenize(text):
            if tok in stop:
                continue
            counts[tok] = counts.get(tok, 0) + 1
        for term in counts:
            df[term] = df.get(term, 0) + 1
        doc_term_counts.append(counts)

    n = len(texts)
    kept = [t for t, d in df.items() if d >= min_df and d / n <= max_df_fraction]
    if not kept:
        raise EmptyVocabularyError("frequency thresholds eliminated every term")
    vocab = sorted(kept, key=lambda t: (-df[t], t))
    term_id = {t: i for i, t in enumerate(vocab)}

    doc_indices, doc_counts = [], []
    for counts in doc_term_counts:
        pairs = sorted((term_id[t], c) for t, c in counts.items() if t in term_id)
        doc_indices.append(np.array([i for i, _ in pairs], dtype=np.int64))
        doc_counts.append(np.array([c for _, c in pairs], dtype=np.int64))
    return DocTermMatrix(vocab=vocab, doc_indices=doc_indices, doc_counts=doc_counts)


def tfidf_matrix(dtm: DocTermMatrix, smooth_idf: bool = False) -> np.ndarray:
    """tf = raw count, idf = ln(D/df); smooth_idf uses ln((1+D)/(1+df)) + 1."""
    counts = dtm.dense().astype(float)
    df = dtm.doc_frequency().astype(float)
    d = float(dtm.n_docs)
    if smooth_idf:
        idf = np.log((1.0 + d) / (1.0 + df)) + 1.0
    else:
        idf = np.log(d / df)
    return counts * idf


def cluster_terms(
    assignments: Sequence[int],
    dtm: DocTermMatrix,
    top_n: int = 15,
    noise_label: int = -1,
    smooth_idf: bool = False,
) -> dict[int, list[tuple[str, float]]]:
    """Per-cluster mean tf-idf weights, top_n terms, ties lexicographic.

    Documents labeled ``noise_label`` are excluded. Empty clusters are
    skipped. Weights are clipped at zero (idf of an everywhere-present term
    is exactly zero).
    """
    assignments = np.asarray(assignments)
    if len(assignments) != dtm.n_docs:
        raise ValueError("assignments must cover all dtm rows")
    weights = tfidf_matrix(dtm, smooth_idf=smooth_idf)
    out: dict[int, list[tuple[str, float]]] = {}
    for cluster in sorted(set(int(a) for a in assignments) - {noise_label}):
        members = np.flatnonzero(assignments == cluster)
        if members.size == 0:
            continue
        mean_w = weights[members].mean(axis=0)
        order = sorted(range(dtm.n_terms), key=lambda i: (-mean_w[i], dtm.vocab[i]))
        out[cluster] = [(dtm.vocab[i], max(float(mean_w[i]), 0.0)) for i in order[:top_n]]
    return out
