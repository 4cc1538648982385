"""Character-trigram language identification over bundled reference profiles.

Profiles for English, French, Spanish and German are built once from seed
texts shipped with the package. Scoring is additive smoothed log-likelihood
per trigram; the reported confidence is the margin between the best and
second-best language posterior, so ambiguous or garbage text scores low.
"""

from __future__ import annotations

import math
import re
import unicodedata
from functools import lru_cache
from importlib import resources

from .errors import TextTooShortError

MIN_DETECT_CHARS = 20
LANGUAGES = ("en", "fr", "es", "de")

_NON_LETTER_RE = re.compile(r"[^a-zà-öø-ÿœß ]+")
_SPACE_RE = re.compile(r" +")


def _canonical(text: str) -> str:
    text = unicodedata.normalize("NFC", text.casefold())
    text = _NON_LETTER_RE.sub(" ", text)
    return _SPACE_RE.sub(" ", text).strip()


def _trigrams(text: str) -> list[str]:
    padded = f" {text} "
    return [padded[i:i + 3] for i in range(len(padded) - 2)]


class _Profile:
    def __init__(self, lang: str, seed_text: str):
        self.lang = lang
        counts: dict[str, int] = {}
        for tri in _trigrams(_canonical(seed_text)):
            counts[tri] = counts.get(tri, 0) + 1
        total = sum(counts.values())
        vocab = len(counts)
        # Laplace-smoothed log probabilities; unseen trigrams share one floor
        self.logp = {
            tri: math.log((c + 1) / (total + vocab + 1)) for tri, c in counts.items()
        }
        self.floor = math.log(1.0 / (total + vocab + 1))

    def score(self, trigrams: list[str]) -> float:
        logp = self.logp
        floor = self.floor
        return sum(logp.get(tri, floor) for tri in trigrams)


@lru_cache(maxsize=1)
def _profiles() -> list[_Profile]:
    out = []
    for lang in LANGUAGES:
        seed = resources.files("skillscope.data").joinpath(f"lang_seed/{lang}.txt")
        out.append(_Profile(lang, seed.read_text(encoding="utf-8")))
    return out


def detect_language(text: str) -> tuple[str, float]:
    """Return (language_code, confidence in [0, 1]) for the given text.

    Raises TextTooShortError below MIN_DETECT_CHARS characters; callers
    treat that as non-English.
    """
    if len(text) < MIN_DETECT_CHARS:
        raise TextTooShortError(f"need >= {MIN_DETECT_CHARS} chars, got {len(text)}")
    trigrams = _trigrams(_canonical(text))
    if not trigrams:
        raise TextTooShortError("no scorable characters")
    scores = [(p.lang, p.score(trigrams)) for p in _profiles()]
    # posterior via log-sum-exp over total log-likelihoods
    best = max(s for _, s in scores)
    weights = [(lang, math.exp(s - best)) for lang, s in scores]
    z = sum(w for _, w in weights)
    posterior = sorted(((w / z, lang) for lang, w in weights), reverse=True)
    confidence = posterior[0][0] - posterior[1][0]
    return posterior[0][1], confidence
