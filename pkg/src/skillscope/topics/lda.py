"""Latent Dirichlet Allocation via collapsed Gibbs sampling.

The sampler integrates out the topic-word and document-topic distributions
and resamples each token's topic from its full conditional. The hot loop is
plain Python over lists (seeded random.Random), which keeps runs
bit-reproducible across platforms; phi and theta are estimated from the
final counts with Dirichlet smoothing.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from ..errors import ConfigError
from .dtm import DocTermMatrix


@dataclass
class LdaConfig:
    K: int = 6
    alpha: float | None = None  # default 50/K
    beta: float = 0.01
    iterations: int = 1000
    seed: int = 0
    vocab_min_df: int = 1
    vocab_max_df_fraction: float = 1.0

    def __post_init__(self):
        if self.K < 1:
            raise ConfigError("K must be >= 1")
        if self.alpha is None:
            self.alpha = 50.0 / self.K
        if self.alpha <= 0 or self.beta <= 0:
            raise ConfigError("alpha and beta must be positive")
        if self.iterations < 1:
            raise ConfigError("iterations must be positive")
        if not (0 < self.vocab_max_df_fraction <= 1):
            raise ConfigError("vocab_max_df_fraction must be in (0,1]")


@dataclass
class LdaModel:
    phi: np.ndarray        # K x V, rows sum to 1
    theta: np.ndarray      # D x K, rows sum to 1
    assignments: list[list[int]]  # per-document per-token topic labels
    vocab: list[str]
    log_likelihood_trace: list[float] = field(default_factory=list)

    def top_terms(self, n: int = 15) -> dict[int, list[tuple[str, float]]]:
        out = {}
        for k in range(self.phi.shape[0]):
            order = sorted(range(len(self.vocab)),
                           key=lambda i: (-self.phi[k, i], self.vocab[i]))
            out[k] = [(self.vocab[i], float(self.phi[k, i])) for i in order[:n]]
        return out


def _log_joint_words(n_kt: np.ndarray, beta: float) -> float:
    """log p(w | z) up to a constant, from topic-word counts."""
    K, V = n_kt.shape
    ll = 0.0
    for k in range(K):
        row = n_kt[k]
        ll += float(gammaln(row + beta).sum() - gammaln(row.sum() + V * beta))
    return ll


def lda_fit(dtm: DocTermMatrix, cfg: LdaConfig) -> LdaModel:
    if dtm.n_docs == 0 or dtm.n_terms == 0:
        raise ConfigError("empty document-term matrix")
    K, V, D = cfg.K, dtm.n_terms, dtm.n_docs
    alpha, beta = float(cfg.alpha), float(cfg.beta)
    rng = random.Random(cfg.seed)

    docs = [list(map(int, dtm.doc_tokens(d))) for d in range(D)]
    z = [[rng.randrange(K) for _ in doc] for doc in docs]

    n_dk = [[0] * K for _ in range(D)]
    n_kt = [[0] * V for _ in range(K)]
    n_k = [0] * K
    for d, doc in enumerate(docs):
        for j, w in enumerate(doc):
            k = z[d][j]
            n_dk[d][k] += 1
            n_kt[k][w] += 1
            n_k[k] += 1

    vbeta = V * beta
    trace: list[float] = []
    rand = rng.random
    krange = range(K)
    for sweep in range(cfg.iterations):
        for d, doc in enumerate(docs):
            zd = z[d]
            ndk = n_dk[d]
            for j, w in enumerate(doc):
                k = zd[j]
                ndk[k] -= 1
                n_kt[k][w] -= 1
                n_k[k] -= 1
                total = 0.0
                cum = []
                for kk in krange:
                    total += (ndk[kk] + alpha) * (n_kt[kk][w] + beta) / (n_k[kk] + vbeta)
                    cum.append(total)
                u = rand() * total
                for kk in krange:
                    if u < cum[kk]:
                        break
                zd[j] = kk
                ndk[kk] += 1
                n_kt[kk][w] += 1
                n_k[kk] += 1
        if sweep % 10 == 0 or sweep == cfg.iterations - 1:
            trace.append(_log_joint_words(np.array(n_kt, dtype=float), beta))

    n_kt_arr = np.array(n_kt, dtype=float)
    n_dk_arr = np.array(n_dk, dtype=float)
    phi = (n_kt_arr + beta) / (n_kt_arr.sum(axis=1, keepdims=True) + vbeta)
    theta = (n_dk_arr + alpha) / (n_dk_arr.sum(axis=1, keepdims=True) + K * alpha)
    return LdaModel(phi=phi, theta=theta, assignments=z, vocab=list(dtm.vocab),
                    log_likelihood_trace=trace)
