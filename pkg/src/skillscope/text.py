"""Tokenization shared by cleansing, lexicon matching and topic modeling.

A token is a case-folded run of alphanumerics, optionally joined by
intra-word hyphens ("scikit-learn", "human-in-the-loop") and optionally
carrying trailing '+' or '#' ("c++", "c#"). One tokenizer is used everywhere
so lexicon phrases and document text always segment identically.
"""

import re

_TOKEN_RE = re.compile(r"[a-z0-9]+(?:-[a-z0-9]+)*[+#]*")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.casefold())
