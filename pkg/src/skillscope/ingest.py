"""Multi-format ingestion: CSV/XML/JSON/LDJSON files plus a paginated REST API.

Each source yields RawRecords in source order. Malformed rows are skipped and
counted, empty-body rows dropped and counted, so for every source
emitted + skipped + dropped_empty equals the number of logical input items.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

import requests

from .errors import (
    ConfigError,
    EndpointUnreachableError,
    FileUnreadableError,
    FormatMismatchError,
)

SOURCE_FORMATS = ("csv", "xml", "json", "ldjson", "api")

_DATE_FLOOR = "2000-01-01"
_DATE_CEIL = "2100-01-01"


@dataclass(frozen=True)
class RawRecord:
    source_id: str
    raw_date: str
    raw_text: str
    source_format: str


@dataclass
class SourceSpec:
    path_or_url: str
    format: str
    date_field: str
    text_field: str
    api_page_size: int | None = None
    api_date_range: tuple[str, str] | None = None
    # generic API plumbing; defaults cover the common REST shape
    api_page_param: str = "page"
    api_items_field: str = "data"
    api_token: str | None = None

    def __post_init__(self):
        if self.format not in SOURCE_FORMATS:
            raise ConfigError(f"unknown source format {self.format!r}")
        if self.date_field == self.text_field:
            raise ConfigError("date_field and text_field must differ")
        if self.api_page_size is not None and self.api_page_size <= 0:
            raise ConfigError("api_page_size must be positive")
        if self.api_date_range is not None:
            start, end = self.api_date_range
            if not (_DATE_FLOOR <= start <= end <= _DATE_CEIL):
                raise ConfigError(f"api_date_range {self.api_date_range} out of order/bounds")

    @property
    def name(self) -> str:
        return Path(self.path_or_url).stem or "source"

    @classmethod
    def from_dict(cls, d: dict) -> "SourceSpec":
        known = {
            "path_or_url", "format", "date_field", "text_field",
            "api_page_size", "api_date_range", "api_page_param",
            "api_items_field", "api_token",
        }
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown source manifest keys: {sorted(extra)}")
        kwargs = dict(d)
        if "api_date_range" in kwargs and kwargs["api_date_range"] is not None:
            kwargs["api_date_range"] = tuple(kwargs["api_date_range"])
        return cls(**kwargs)


@dataclass
class SourceCounts:
    emitted: int = 0
    skipped: int = 0
    dropped_empty: int = 0
    duplicates_removed: int = 0

    def as_dict(self) -> dict:
        return {
            "emitted": self.emitted,
            "skipped": self.skipped,
            "dropped_empty": self.dropped_empty,
            "duplicates_removed": self.duplicates_removed,
        }


def load_manifest(path: str | Path) -> list[SourceSpec]:
    """Read a source manifest (JSON array of SourceSpec objects)."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise FileUnreadableError(f"cannot read manifest {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"manifest {path} is not valid JSON: {e}") from e
    if not isinstance(raw, list):
        raise ConfigError("source manifest must be a JSON array")
    return [SourceSpec.from_dict(d) for d in raw]


def _read_text(path: str | Path) -> str:
    # UTF-8 with replacement keeps maximal text from mixed-encoding dumps
    try:
        return Path(path).read_bytes().decode("utf-8", errors="replace")
    except OSError as e:
        raise FileUnreadableError(f"cannot read {path}: {e}") from e


def parse_file(spec: SourceSpec, counts: SourceCounts | None = None) -> Iterator[RawRecord]:
    """Parse one file source into RawRecords, in file order."""
    if spec.format not in ("csv", "xml", "json", "ldjson"):
        raise ConfigError(f"parse_file cannot handle format {spec.format!r}")
    counts = counts if counts is not None else SourceCounts()
    text = _read_text(spec.path_or_url)
    parser = {
        "csv": _iter_csv,
        "xml": _iter_xml,
        "json": _iter_json,
        "ldjson": _iter_ldjson,
    }[spec.format]
    for ordinal, item in parser(text, spec):
        if item is None:
            counts.skipped += 1
            continue
        raw_date, raw_text = item
        if not raw_text.strip():
            counts.dropped_empty += 1
            continue
        counts.emitted += 1
        yield RawRecord(
            source_id=f"{spec.name}:{ordinal}",
            raw_date=raw_date,
            raw_text=raw_text,
            source_format=spec.format,
        )


def _iter_csv(text: str, spec: SourceSpec):
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise FormatMismatchError(f"{spec.path_or_url}: empty CSV, header required")
    if spec.text_field not in reader.fieldnames or spec.date_field not in reader.fieldnames:
        raise FormatMismatchError(
            f"{spec.path_or_url}: header lacks {spec.date_field!r}/{spec.text_field!r}"
        )
    ordinal = 0
    while True:
        try:
            row = next(reader)
        except StopIteration:
            return
        except csv.Error:
            yield ordinal, None
            ordinal += 1
            continue
        body = row.get(spec.text_field)
        if body is None:
            yield ordinal, None
        else:
            yield ordinal, (str(row.get(spec.date_field) or ""), str(body))
        ordinal += 1


def _iter_xml(text: str, spec: SourceSpec):
    try:
        root = ET.fromstring(text)
    except ET.ParseError as e:
        raise FormatMismatchError(f"{spec.path_or_url}: not well-formed XML: {e}") from e
    ordinal = 0
    for elem in root.iter():
        if elem.find(spec.text_field) is None:
            continue
        body = elem.findtext(spec.text_field) or ""
        date = elem.findtext(spec.date_field) or ""
        yield ordinal, (date, body)
        ordinal += 1


def _iter_json(text: str, spec: SourceSpec):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatMismatchError(f"{spec.path_or_url}: not valid JSON: {e}") from e
    if isinstance(doc, list):
        items = doc
    elif isinstance(doc, dict):
        # auto-detect an object wrapping a single array field
        arrays = [v for v in doc.values() if isinstance(v, list)]
        if len(arrays) != 1:
            raise FormatMismatchError(
                f"{spec.path_or_url}: expected a JSON array or an object with one array field"
            )
        items = arrays[0]
    else:
        raise FormatMismatchError(f"{spec.path_or_url}: top-level JSON must be array or object")
    yield from _iter_objects(items, spec)


def _iter_ldjson(text: str, spec: SourceSpec):
    ordinal = 0
    for line in text.splitlines():
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            yield ordinal, None
            ordinal += 1
            continue
        yield from _pick_fields(ordinal, obj, spec)
        ordinal += 1


def _iter_objects(items: list, spec: SourceSpec):
    for ordinal, obj in enumerate(items):
        yield from _pick_fields(ordinal, obj, spec)


def _pick_fields(ordinal: int, obj, spec: SourceSpec):
    if not isinstance(obj, dict) or spec.text_field not in obj:
        yield ordinal, None
        return
    yield ordinal, (str(obj.get(spec.date_field) or ""), str(obj[spec.text_field]))


# --- API client -------------------------------------------------------------

# transport(url, params, headers) -> (status_code, parsed_json_or_None)
Transport = Callable[[str, dict, dict], tuple[int, object]]


def http_transport(url: str, params: dict, headers: dict) -> tuple[int, object]:
    resp = requests.get(url, params=params, headers=headers, timeout=30)
    try:
        body = resp.json()
    except ValueError:
        body = None
    return resp.status_code, body


class ReplayTransport:
    """Deterministic transport replaying a recorded call sequence.

    Fixture shape: {"calls": [{"status": 200, "body": {...}}, ...]} consumed
    in call order, or {"pages": [{"data": [...]}, ...]} addressed by the page
    query parameter (always status 200).
    """

    def __init__(self, fixture: dict):
        self.calls = list(fixture.get("calls", []))
        self.pages = list(fixture.get("pages", []))
        self.call_count = 0

    @classmethod
    def from_file(cls, path: str | Path) -> "ReplayTransport":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def __call__(self, url: str, params: dict, headers: dict) -> tuple[int, object]:
        self.call_count += 1
        if self.calls:
            entry = self.calls.pop(0)
            return entry.get("status", 200), entry.get("body")
        page = int(params.get("page", params.get(next(iter(params), "page"), 1)))
        idx = page - 1
        if 0 <= idx < len(self.pages):
            return 200, self.pages[idx]
        return 200, {}


@dataclass
class ApiClientStats:
    retries: int = 0
    pages_fetched: int = 0
    pages_skipped: int = 0


def fetch_api(
    spec: SourceSpec,
    transport: Transport | None = None,
    counts: SourceCounts | None = None,
    stats: ApiClientStats | None = None,
    backoff_base: float = 0.5,
    max_attempts: int = 3,
) -> Iterator[RawRecord]:
    """Paginate a REST endpoint until it reports no more items.

    Each page is requested up to ``max_attempts`` times with exponential
    backoff on 5xx/429/transport errors; a page that still fails is fatal.
    A page whose body lacks the items array is skipped and counted.
    """
    if spec.format != "api":
        raise ConfigError("fetch_api requires format 'api'")
    counts = counts if counts is not None else SourceCounts()
    stats = stats if stats is not None else ApiClientStats()
    if transport is None:
        # local replay fixtures keep test/demo runs network-free
        if Path(spec.path_or_url).exists():
            transport = ReplayTransport.from_file(spec.path_or_url)
        else:
            transport = http_transport
    headers = {}
    if spec.api_token:
        headers["Authorization"] = f"Bearer {spec.api_token}"

    page = 1
    ordinal = 0
    while True:
        params: dict = {spec.api_page_param: page}
        if spec.api_page_size:
            params["limit"] = spec.api_page_size
        if spec.api_date_range:
            params["date_from"], params["date_to"] = spec.api_date_range

        body = _fetch_page(spec, transport, params, headers, stats, backoff_base, max_attempts)
        if body is _MALFORMED:
            stats.pages_skipped += 1
            page += 1
            continue
        items = body.get(spec.api_items_field) if isinstance(body, dict) else None
        if not items:
            return
        stats.pages_fetched += 1
        for obj in items:
            result = list(_pick_fields(ordinal, obj, spec))
            for o, item in result:
                if item is None:
                    counts.skipped += 1
                    continue
                raw_date, raw_text = item
                if spec.api_date_range and raw_date:
                    start, end = spec.api_date_range
                    if not (start <= raw_date[:10] <= end):
                        counts.skipped += 1
                        continue
                if not raw_text.strip():
                    counts.dropped_empty += 1
                    continue
                counts.emitted += 1
                yield RawRecord(
                    source_id=f"{spec.name}:{o}",
                    raw_date=raw_date,
                    raw_text=raw_text,
                    source_format="api",
                )
            ordinal += 1
        if spec.api_page_size and len(items) < spec.api_page_size:
            return
        page += 1


_MALFORMED = object()


def _fetch_page(spec, transport, params, headers, stats, backoff_base, max_attempts):
    last_err: str = ""
    for attempt in range(max_attempts):
        if attempt > 0:
            stats.retries += 1
            if backoff_base > 0:
                time.sleep(backoff_base * (2 ** (attempt - 1)))
        try:
            status, body = transport(spec.path_or_url, params, headers)
        except (requests.RequestException, OSError) as e:
            last_err = str(e)
            continue
        if status == 429 or status >= 500:
            last_err = f"HTTP {status}"
            continue
        if status != 200 or body is None or not isinstance(body, (dict, list)):
            return _MALFORMED
        return body
    raise EndpointUnreachableError(
        f"{spec.path_or_url} page {params.get(spec.api_page_param)} failed after "
        f"{max_attempts} attempts: {last_err}"
    )


# --- deduplication ----------------------------------------------------------

def dedup_key(text: str) -> str:
    """128-bit content hash of the case-folded, whitespace-collapsed text."""
    normalized = " ".join(text.casefold().split())
    return hashlib.blake2b(normalized.encode("utf-8"), digest_size=16).hexdigest()


class Deduplicator:
    """Keeps the first record per normalized-text hash, in stream order."""

    def __init__(self):
        self._seen: set[str] = set()
        self.removed = 0
        self.removed_by_source: dict[str, int] = {}

    def filter(self, records: Iterable[RawRecord]) -> Iterator[RawRecord]:
        for rec in records:
            key = dedup_key(rec.raw_text)
            if key in self._seen:
                self.removed += 1
                src = rec.source_id.split(":", 1)[0]
                self.removed_by_source[src] = self.removed_by_source.get(src, 0) + 1
                continue
            self._seen.add(key)
            yield rec


def deduplicate(records: Iterable[RawRecord]) -> Iterator[RawRecord]:
    return Deduplicator().filter(records)
