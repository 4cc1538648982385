"""Rule-based cleaning: normalization, boilerplate stripping, language and
length filtering, and calendar-year derivation.

Filter order is fixed (bad_date, non_english, out_of_range, too_short) and a
record failing several filters is counted once, under the first that fires,
so the report conserves counts exactly.
"""

from __future__ import annotations

import datetime as dt
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import ConfigError, TextTooShortError
from .language import detect_language
from .text import tokenize

DEFAULT_BOILERPLATE = [
    "Equal Opportunity Employer",
    "About the Company",
    "Benefits include",
]

REJECT_REASONS = ("bad_date", "non_english", "out_of_range", "too_short")

# only the five XML-standard entities are unescaped (non-goal beyond that)
_ENTITIES = [
    ("&lt;", "<"), ("&gt;", ">"), ("&quot;", '"'), ("&apos;", "'"), ("&amp;", "&"),
]

_CONTROL_RE = re.compile(r"[\x00-\x09\x0b-\x1f\x7f]")
_SPACE_RUN_RE = re.compile(r"[^\S\n]+")
_NL_SPACE_RE = re.compile(r" ?\n ?")
_NL_RUN_RE = re.compile(r"\n+")

_MONTH_DDYYYY_RE = re.compile(
    r"^(January|February|March|April|May|June|July|August|September|October|"
    r"November|December)\s+(\d{1,2}),?\s+(\d{4})$",
    re.IGNORECASE,
)
_SLASH_RE = re.compile(r"^(\d{1,2})/(\d{1,2})/(\d{4})$")
_ISO_RE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})")

_MONTHS = {
    m: i + 1
    for i, m in enumerate(
        ["january", "february", "march", "april", "may", "june", "july",
         "august", "september", "october", "november", "december"]
    )
}


@dataclass
class CleanseConfig:
    boilerplate_patterns: list[str] = field(default_factory=lambda: list(DEFAULT_BOILERPLATE))
    min_tokens: int = 30
    english_confidence_threshold: float = 0.65
    year_range: tuple[int, int] = (2018, 2025)
    date_order: str = "DMY"  # tie-break for ambiguous NN/NN/YYYY dates

    def __post_init__(self):
        if self.min_tokens < 1:
            raise ConfigError("min_tokens must be >= 1")
        if not (0 < self.english_confidence_threshold < 1):
            raise ConfigError("english_confidence_threshold must be in (0,1)")
        lo, hi = self.year_range
        if lo > hi:
            raise ConfigError("year_range must be ordered")
        if self.date_order not in ("DMY", "MDY"):
            raise ConfigError("date_order must be DMY or MDY")

    @classmethod
    def from_file(cls, path: str | Path) -> "CleanseConfig":
        d = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {"boilerplate_patterns", "min_tokens", "english_confidence_threshold",
                 "year_range", "date_order"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown cleanse config keys: {sorted(extra)}")
        if "year_range" in d:
            d["year_range"] = tuple(d["year_range"])
        return cls(**d)


@dataclass(frozen=True)
class Posting:
    id: str
    date: dt.date
    year: int
    description: str


@dataclass
class CleanseReport:
    input: int = 0
    retained: int = 0
    rejected: dict[str, int] = field(default_factory=lambda: {r: 0 for r in REJECT_REASONS})

    def as_dict(self) -> dict:
        return {"input": self.input, "retained": self.retained, "rejected": dict(self.rejected)}


def _boilerplate_res(patterns: Iterable[str]) -> list[re.Pattern]:
    out = []
    for pat in patterns:
        words = pat.split()
        if not words:
            continue
        body = r"\s+".join(re.escape(w) for w in words)
        # phrase plus the remainder of its sentence, through the terminator
        out.append(re.compile(body + r"[^.!?\n]*(?:[.!?]+|(?=\n)|$)\s*", re.IGNORECASE))
    return out


def normalize_text(raw: str, cfg: CleanseConfig | None = None) -> str:
    """Remove control characters, collapse whitespace and strip boilerplate
    sentences. Idempotent."""
    cfg = cfg or CleanseConfig()
    text = _CONTROL_RE.sub(" ", raw)
    text = _SPACE_RUN_RE.sub(" ", text)
    text = _NL_SPACE_RE.sub("\n", text)
    text = _NL_RUN_RE.sub("\n", text)
    patterns = _boilerplate_res(cfg.boilerplate_patterns)
    changed = True
    while changed:  # removal can splice text into a fresh match
        changed = False
        for pat in patterns:
            text, n = pat.subn("", text)
            if n:
                changed = True
    text = _SPACE_RUN_RE.sub(" ", text)
    text = _NL_SPACE_RE.sub("\n", text)
    text = _NL_RUN_RE.sub("\n", text)
    return text.strip()


def parse_date(raw: str, date_order: str = "DMY") -> dt.date | None:
    """Parse ISO-8601, DD/MM/YYYY or MM/DD/YYYY (per hint), or 'Month DD, YYYY'."""
    s = raw.strip()
    if not s:
        return None
    m = _ISO_RE.match(s)
    if m:
        try:
            return dt.date(int(m.group(1)), int(m.group(2)), int(m.group(3)))
        except ValueError:
            return None
    m = _SLASH_RE.match(s)
    if m:
        a, b, year = int(m.group(1)), int(m.group(2)), int(m.group(3))
        day, month = (a, b) if date_order == "DMY" else (b, a)
        if month > 12 and day <= 12:  # unambiguous despite the hint
            day, month = month, day
        try:
            return dt.date(year, month, day)
        except ValueError:
            return None
    m = _MONTH_DDYYYY_RE.match(s)
    if m:
        try:
            return dt.date(int(m.group(3)), _MONTHS[m.group(1).lower()], int(m.group(2)))
        except ValueError:
            return None
    return None


def _unescape(text: str) -> str:
    for entity, char in _ENTITIES:
        text = text.replace(entity, char)
    return text


def cleanse(records, cfg: CleanseConfig | None = None) -> tuple[list[Posting], CleanseReport]:
    """Turn RawRecords into Postings, counting every rejection by reason."""
    cfg = cfg or CleanseConfig()
    report = CleanseReport()
    postings: list[Posting] = []
    lo, hi = cfg.year_range
    for rec in records:
        report.input += 1
        description = normalize_text(_unescape(rec.raw_text), cfg)
        date = parse_date(rec.raw_date, cfg.date_order)
        if date is None:
            report.rejected["bad_date"] += 1
            continue
        try:
            lang, conf = detect_language(description)
        except TextTooShortError:
            report.rejected["non_english"] += 1
            continue
        if lang != "en" or conf < cfg.english_confidence_threshold:
            report.rejected["non_english"] += 1
            continue
        if not (lo <= date.year <= hi):
            report.rejected["out_of_range"] += 1
            continue
        if len(tokenize(description)) < cfg.min_tokens:
            report.rejected["too_short"] += 1
            continue
        report.retained += 1
        postings.append(Posting(id=rec.source_id, date=date, year=date.year,
                                description=description))
    return postings, report
