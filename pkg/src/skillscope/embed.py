"""Embedding providers behind one interface.

Vectors are numpy float64 arrays, L2-normalized by every provider. The
hashed provider (default) is a deterministic signed-hash bag of token
unigrams and bigrams, good enough for offline tests and desk-scale runs;
the file and http providers plug in externally computed embeddings
(e.g. from a sentence-transformer service).
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import requests

from .errors import (
    ConfigError,
    DimensionMismatchError,
    MissingEmbeddingError,
    ServiceError,
    ZeroVectorError,
)
from .text import tokenize

DEFAULT_DIMENSION = 256


def _normalize(vec: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vec))
    if norm == 0.0 or not np.isfinite(norm):
        raise ZeroVectorError("embedding has zero or non-finite norm")
    return vec / norm


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"{a.shape} vs {b.shape}")
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroVectorError("cosine of a zero vector is undefined")
    return float(np.clip(float(np.dot(a, b)) / (na * nb), -1.0, 1.0))


class HashedProvider:
    """Seeded signed-hash bag of token unigrams+bigrams, L2-normalized."""

    kind = "hashed"

    def __init__(self, dimension: int = DEFAULT_DIMENSION, seed: int = 0):
        if dimension < 1:
            raise ConfigError("dimension must be positive")
        self.dimension = dimension
        self.seed = seed
        self._person = (seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little")

    def _slot(self, feature: str) -> tuple[int, float]:
        h = hashlib.blake2b(feature.encode("utf-8"), digest_size=9,
                            person=self._person).digest()
        idx = int.from_bytes(h[:8], "little") % self.dimension
        sign = 1.0 if h[8] & 1 else -1.0
        return idx, sign

    def embed(self, text: str, key: str | None = None) -> np.ndarray:
        tokens = tokenize(text)
        vec = np.zeros(self.dimension)
        for feature in tokens:
            idx, sign = self._slot(feature)
            vec[idx] += sign
        for a, b in zip(tokens, tokens[1:]):
            idx, sign = self._slot(f"{a} {b}")
            vec[idx] += sign
        return _normalize(vec)

    def embed_batch(self, texts: Sequence[str], keys: Sequence[str] | None = None):
        return [self.embed(t) for t in texts]


class FileProvider:
    """Looks vectors up by key in a CSV-ish file: header ``id,<dim>``, then
    one row per key with <dim> comma-separated reals."""

    kind = "file"

    def __init__(self, path: str | Path):
        self.path = Path(path)
        lines = self.path.read_text(encoding="utf-8").splitlines()
        if not lines:
            raise ConfigError(f"{path}: empty embedding file")
        header = lines[0].split(",")
        if len(header) != 2 or header[0] != "id":
            raise ConfigError(f"{path}: header must be 'id,<dim>'")
        self.dimension = int(header[1])
        self._table: dict[str, np.ndarray] = {}
        for ln, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split(",")
            if len(parts) != self.dimension + 1:
                raise DimensionMismatchError(
                    f"{path}:{ln}: expected {self.dimension} values, got {len(parts) - 1}"
                )
            self._table[parts[0]] = _normalize(np.array([float(x) for x in parts[1:]]))

    def embed(self, text: str, key: str | None = None) -> np.ndarray:
        lookup = key if key is not None else text
        try:
            return self._table[lookup]
        except KeyError:
            raise MissingEmbeddingError(f"no embedding for id {lookup!r}") from None

    def embed_batch(self, texts: Sequence[str], keys: Sequence[str] | None = None):
        keys = keys if keys is not None else texts
        return [self.embed(t, k) for t, k in zip(texts, keys)]


class HttpProvider:
    """POSTs {"texts": [...]} and expects {"vectors": [[...], ...]} in the
    same order; batches of at most 64, three attempts per batch."""

    kind = "http"
    BATCH = 64

    def __init__(self, url: str, dimension: int, auth_token: str | None = None,
                 concurrency: int = 8, max_attempts: int = 3,
                 backoff_base: float = 0.5, post=None):
        self.url = url
        self.dimension = dimension
        self.concurrency = concurrency
        self.max_attempts = max_attempts
        self.backoff_base = backoff_base
        self._headers = {"Content-Type": "application/json"}
        if auth_token:
            self._headers["Authorization"] = f"Bearer {auth_token}"
        self._post = post if post is not None else self._requests_post

    def _requests_post(self, body: dict) -> tuple[int, object]:
        resp = requests.post(self.url, json=body, headers=self._headers, timeout=60)
        try:
            return resp.status_code, resp.json()
        except ValueError:
            return resp.status_code, None

    def _embed_chunk(self, texts: Sequence[str]) -> list[np.ndarray]:
        last = ""
        for attempt in range(self.max_attempts):
            if attempt > 0 and self.backoff_base > 0:
                time.sleep(self.backoff_base * (2 ** (attempt - 1)))
            try:
                status, body = self._post({"texts": list(texts)})
            except (requests.RequestException, OSError) as e:
                last = str(e)
                continue
            if status != 200 or not isinstance(body, dict) or "vectors" not in body:
                last = f"HTTP {status}"
                continue
            vectors = body["vectors"]
            if len(vectors) != len(texts):
                raise ServiceError(f"service returned {len(vectors)} vectors for {len(texts)} texts")
            out = []
            for v in vectors:
                arr = np.asarray(v, dtype=float)
                if arr.shape != (self.dimension,):
                    raise DimensionMismatchError(
                        f"expected dimension {self.dimension}, got {arr.shape}"
                    )
                out.append(_normalize(arr))
            return out
        raise ServiceError(f"embedding service failed after {self.max_attempts} attempts: {last}")

    def embed(self, text: str, key: str | None = None) -> np.ndarray:
        return self._embed_chunk([text])[0]

    def embed_batch(self, texts: Sequence[str], keys: Sequence[str] | None = None):
        chunks = [texts[i:i + self.BATCH] for i in range(0, len(texts), self.BATCH)]
        if len(chunks) <= 1:
            return self._embed_chunk(texts) if texts else []
        with ThreadPoolExecutor(max_workers=self.concurrency) as pool:
            results = list(pool.map(self._embed_chunk, chunks))
        return [v for chunk in results for v in chunk]


def provider_from_spec(spec: dict):
    """Build a provider from its JSON spec {kind, dimension, seed|path|url...}."""
    kind = spec.get("kind", "hashed")
    if kind == "hashed":
        return HashedProvider(dimension=int(spec.get("dimension", DEFAULT_DIMENSION)),
                              seed=int(spec.get("seed", 0)))
    if kind == "file":
        if "path" not in spec:
            raise ConfigError("file provider requires 'path'")
        return FileProvider(spec["path"])
    if kind == "http":
        if "url" not in spec or "dimension" not in spec:
            raise ConfigError("http provider requires 'url' and 'dimension'")
        return HttpProvider(spec["url"], int(spec["dimension"]),
                            auth_token=spec.get("auth"),
                            concurrency=int(spec.get("concurrency", 8)))
    raise ConfigError(f"unknown embedding provider kind {kind!r}")


def embed_text(text: str, provider) -> np.ndarray:
    if not text:
        raise ZeroVectorError("cannot embed empty text")
    return provider.embed(text)


def anchor_centroid(phrases: Iterable[str], provider) -> np.ndarray:
    phrases = list(phrases)
    if not phrases:
        raise ConfigError("anchor_centroid requires at least one phrase")
    mean = np.mean([embed_text(p, provider) for p in phrases], axis=0)
    return _normalize(mean)
