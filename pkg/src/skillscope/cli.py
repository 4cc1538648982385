"""Pipeline orchestration CLI.

Usage: skillscope <stage> --config run.json [--jobs N] [--seed S] [--out DIR]

Stages: ingest, cleanse, extract, framing, topics, forecast, correlate,
sectors, report, all. Each stage reads only files written by earlier stages,
writes its outputs atomically (temp file + rename) and appends to the run
manifest, so re-running any stage with the same inputs and seed reproduces
byte-identical artifacts.

Exit codes: 0 ok, 2 config error, 3 missing upstream, 4 data error,
5 internal error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .arima import ArimaSpec
from .cleanse import CleanseConfig, Posting, cleanse
from .embed import provider_from_spec
from .errors import ConfigError, DataError, MissingUpstreamError, SkillscopeError
from .framing import AnchorCentroids, FramingResult, aggregate_framing, frame_document
from .ingest import Deduplicator, SourceCounts, fetch_api, load_manifest, parse_file
from .skills import SkillFlags, aggregate_yearly, detect_skills
from .taxonomy import (
    SKILL_CATEGORIES,
    CompiledMatcher,
    load_anchors,
    load_sectors,
    load_taxonomy,
)
from .topics import (
    LdaConfig,
    build_dtm,
    cluster_terms,
    density_topics,
    kmeans_fit,
    lda_fit,
    scaled_min_cluster_size,
    temporal_weights,
)
from .trends import (
    RateSeries,
    forecast_series,
    pearson_matrix,
    sector_rates,
    sector_totals,
)

STAGES = ("ingest", "cleanse", "extract", "framing", "topics",
          "forecast", "correlate", "sectors", "report")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MISSING_UPSTREAM = 3
EXIT_DATA = 4
EXIT_INTERNAL = 5


def derive_seed(seed: int, stage: str) -> int:
    h = hashlib.blake2b(stage.encode("utf-8"), digest_size=8).digest()
    return (seed ^ int.from_bytes(h, "little")) & 0x7FFFFFFFFFFFFFFF


class RunConfig:
    def __init__(self, raw: dict, path: Path):
        self.raw = raw
        self.path = path
        self.sources = raw.get("sources")
        if not self.sources:
            raise ConfigError("config field 'sources' is required")
        self.cleanse_config = raw.get("cleanse_config")
        self.taxonomy = raw.get("taxonomy")
        self.anchors = raw.get("anchors")
        self.sectors = raw.get("sectors")
        self.embedding = dict(raw.get("embedding", {"kind": "hashed", "dimension": 256}))
        self.lda = dict(raw.get("lda", {}))
        self.kmeans = dict(raw.get("kmeans", {"K": 6}))
        self.density = dict(raw.get("density", {}))
        self.forecast = dict(raw.get("forecast", {}))
        self.output_dir = Path(raw.get("output_dir") or os.environ.get("SKILLSCOPE_OUT") or "out")
        self.seed = int(raw.get("seed", 0))
        self.granularity = raw.get("granularity", "year")
        if self.granularity not in ("year", "month"):
            raise ConfigError("granularity must be 'year' or 'month'")
        for field in ("sources", "cleanse_config", "taxonomy", "anchors", "sectors"):
            value = getattr(self, field if field != "cleanse_config" else "cleanse_config")
            if value is not None and not Path(value).exists():
                raise ConfigError(f"config field {field!r}: file not found: {value}")

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        p = Path(path)
        try:
            raw = json.loads(p.read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"config {path} is not valid JSON: {e}") from e
        return cls(raw, p)


# --- artifact IO ------------------------------------------------------------

def atomic_write(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(data, encoding="utf-8")
    os.replace(tmp, path)


def write_json(path: Path, obj) -> None:
    atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    atomic_write(path, buf.getvalue())


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    return rows[0], rows[1:]


def require(path: Path) -> Path:
    if not path.exists():
        raise MissingUpstreamError(path.name)
    return path


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def count_rows(path: Path) -> int:
    text = path.read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if path.suffix == ".csv" and lines:
        return len(lines) - 1
    return len(lines)


class Manifest:
    def __init__(self, out: Path, cfg: RunConfig):
        self.path = out / "run_manifest.json"
        if self.path.exists():
            self.doc = json.loads(self.path.read_text(encoding="utf-8"))
        else:
            self.doc = {"tool_version": __version__, "config": cfg.raw, "stages": {}}
        self.doc["config"] = cfg.raw
        self.doc["tool_version"] = __version__

    def record(self, stage: str, outputs: list[Path], wall_clock: float,
               counts: dict | None = None) -> None:
        self.doc["stages"][stage] = {
            "wall_clock_s": round(wall_clock, 3),
            "counts": counts or {},
            "outputs": {
                p.name: {"sha256": sha256_file(p), "rows": count_rows(p)}
                for p in outputs
            },
        }
        write_json(self.path, self.doc)


# --- shared loaders ---------------------------------------------------------

def load_postings(out: Path) -> list[Posting]:
    path = require(out / "postings.ndjson")
    postings = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        postings.append(Posting(id=d["id"], date=dt.date.fromisoformat(d["date"]),
                                year=d["year"], description=d["description"]))
    return postings


def load_flags(out: Path) -> dict[str, SkillFlags]:
    path = require(out / "skill_flags.ndjson")
    flags = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        flags[d["posting_id"]] = SkillFlags(
            posting_id=d["posting_id"],
            flags={c: bool(d[c]) for c in SKILL_CATEGORIES},
        )
    return flags


def embed_postings(cfg: RunConfig, postings: list[Posting]):
    spec = dict(cfg.embedding)
    if spec.get("kind", "hashed") == "hashed" and "seed" not in spec:
        spec["seed"] = derive_seed(cfg.seed, "embedding")
    provider = provider_from_spec(spec)
    vectors = provider.embed_batch([p.description for p in postings],
                                   keys=[p.id for p in postings])
    return provider, dict(zip((p.id for p in postings), vectors))


def rate_series_from_csv(out: Path) -> dict[str, RateSeries]:
    header, rows = read_csv(require(out / "skill_rates.csv"))
    series: dict[str, list[tuple[int, float]]] = {c: [] for c in SKILL_CATEGORIES}
    for row in rows:
        rec = dict(zip(header, row))
        for cat in SKILL_CATEGORIES:
            series[cat].append((int(rec["year"]), float(rec[cat])))
    return {cat: RateSeries(label=(cat,), points=tuple(pts))
            for cat, pts in series.items()}


# --- stages -----------------------------------------------------------------

def stage_ingest(cfg: RunConfig, out: Path, jobs: int) -> dict:
    specs = load_manifest(cfg.sources)
    per_source: dict[str, SourceCounts] = {}

    def collect(spec):
        counts = SourceCounts()
        if spec.format == "api":
            records = list(fetch_api(spec, counts=counts))
        else:
            records = list(parse_file(spec, counts=counts))
        return records, counts

    if jobs > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(collect, specs))
    else:
        results = [collect(s) for s in specs]

    dedup = Deduplicator()
    lines = []
    for spec, (records, counts) in zip(specs, results):
        per_source[spec.name] = counts
        for rec in dedup.filter(records):
            lines.append(json.dumps({
                "source_id": rec.source_id, "raw_date": rec.raw_date,
                "raw_text": rec.raw_text, "source_format": rec.source_format,
            }, sort_keys=True))
    for name, counts in per_source.items():
        counts.duplicates_removed = dedup.removed_by_source.get(name, 0)

    atomic_write(out / "raw_records.ndjson", "\n".join(lines) + ("\n" if lines else ""))
    report = {name: c.as_dict() for name, c in per_source.items()}
    write_json(out / "ingest_report.json", report)
    return {"records": len(lines), "duplicates_removed": dedup.removed}


def stage_cleanse(cfg: RunConfig, out: Path) -> dict:
    path = require(out / "raw_records.ndjson")
    from .ingest import RawRecord
    records = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            d = json.loads(line)
            records.append(RawRecord(d["source_id"], d["raw_date"],
                                     d["raw_text"], d["source_format"]))
    ccfg = CleanseConfig.from_file(cfg.cleanse_config) if cfg.cleanse_config else CleanseConfig()
    postings, report = cleanse(records, ccfg)
    lines = [json.dumps({"id": p.id, "date": p.date.isoformat(), "year": p.year,
                         "description": p.description}, sort_keys=True)
             for p in postings]
    atomic_write(out / "postings.ndjson", "\n".join(lines) + ("\n" if lines else ""))
    write_json(out / "cleanse_report.json", report.as_dict())
    return report.as_dict()


def stage_extract(cfg: RunConfig, out: Path) -> dict:
    postings = load_postings(out)
    matcher = CompiledMatcher.from_taxonomy(load_taxonomy(cfg.taxonomy))
    flags = [detect_skills(p, matcher) for p in postings]
    lines = [json.dumps({"posting_id": f.posting_id, **{c: f.flags[c] for c in SKILL_CATEGORIES}},
                        sort_keys=True) for f in flags]
    atomic_write(out / "skill_flags.ndjson", "\n".join(lines) + ("\n" if lines else ""))
    yearly = aggregate_yearly(zip(flags, (p.year for p in postings)))
    write_csv(out / "skill_rates.csv",
              ["year", "postings"] + list(SKILL_CATEGORIES),
              [[y.year, y.postings_count] + [y.rate[c] for c in SKILL_CATEGORIES]
               for y in yearly])
    return {"postings": len(postings), "years": len(yearly)}


def stage_framing(cfg: RunConfig, out: Path) -> dict:
    postings = load_postings(out)
    if not postings:
        raise DataError("no postings to frame")
    provider, vectors = embed_postings(cfg, postings)
    anchors = load_anchors(cfg.anchors)
    centroids = AnchorCentroids.from_anchors(anchors, provider)
    results = [frame_document(vectors[p.id], centroids, posting_id=p.id) for p in postings]
    lines = [json.dumps({"posting_id": r.posting_id, "sim_ai": r.sim_ai,
                         "sim_augment": r.sim_augment, "sim_automate": r.sim_automate,
                         "framing_index": r.framing_index}, sort_keys=True)
             for r in results]
    atomic_write(out / "framing.ndjson", "\n".join(lines) + ("\n" if lines else ""))

    years = {p.id: p.year for p in postings}
    by_year = aggregate_framing(results, years)
    write_csv(out / "framing_by_year.csv",
              ["year", "n", "sim_ai", "sim_augment", "sim_automate", "fi"],
              [[s.key[0], s.n, s.mean_sim_ai, s.mean_sim_augment,
                s.mean_sim_automate, s.mean_fi] for s in by_year])

    labels = sector_totals(postings, load_sectors(cfg.sectors))
    sectors = {pid: sec for pid, sec in labels.items() if sec is not None}
    by_sector = aggregate_framing(results, years, sectors=sectors)
    write_csv(out / "framing_by_sector.csv",
              ["year", "sector", "n", "sim_ai", "sim_augment", "sim_automate", "fi"],
              [[s.key[0], s.key[1], s.n, s.mean_sim_ai, s.mean_sim_augment,
                s.mean_sim_automate, s.mean_fi] for s in by_sector])
    return {"documents": len(results), "year_rows": len(by_year),
            "sector_rows": len(by_sector)}


def stage_topics(cfg: RunConfig, out: Path) -> dict:
    postings = load_postings(out)
    if not postings:
        raise DataError("no postings for topic modeling")
    texts = [p.description for p in postings]
    years = [p.year for p in postings]

    lda_cfg = LdaConfig(
        K=int(cfg.lda.get("K", 6)),
        alpha=cfg.lda.get("alpha"),
        beta=float(cfg.lda.get("beta", 0.01)),
        iterations=int(cfg.lda.get("iterations", 1000)),
        seed=derive_seed(cfg.seed, "topics.lda"),
        vocab_min_df=int(cfg.lda.get("vocab_min_df", 2)),
        vocab_max_df_fraction=float(cfg.lda.get("vocab_max_df_fraction", 0.9)),
    )
    dtm = build_dtm(texts, min_df=lda_cfg.vocab_min_df,
                    max_df_fraction=lda_cfg.vocab_max_df_fraction)
    lda = lda_fit(dtm, lda_cfg)
    doc_topics = [int(np.argmax(lda.theta[i])) for i in range(len(texts))]
    write_json(out / "lda_topics.json", {
        "K": lda_cfg.K,
        "topics": {
            str(k): {
                "top_terms": [[t, w] for t, w in terms],
                "size": doc_topics.count(k),
            } for k, terms in lda.top_terms().items()
        },
    })

    _, vectors = embed_postings(cfg, postings)
    emb = np.array([vectors[p.id] for p in postings])
    km = kmeans_fit(emb, int(cfg.kmeans.get("K", 6)),
                    seed=derive_seed(cfg.seed, "topics.kmeans"))
    km_terms = cluster_terms(km.assignments, dtm)
    write_json(out / "kmeans_clusters.json", {
        "K": int(cfg.kmeans.get("K", 6)),
        "wcss": km.wcss,
        "clusters": {
            str(c): {
                "top_terms": [[t, w] for t, w in terms],
                "size": int((km.assignments == c).sum()),
            } for c, terms in km_terms.items()
        },
    })

    mcs = int(cfg.density.get("min_cluster_size",
                              scaled_min_cluster_size(len(postings))))
    dm = density_topics(emb, min_cluster_size=mcs,
                        k_reduced=int(cfg.density.get("k_reduced", 8)),
                        seed=derive_seed(cfg.seed, "topics.density"))
    dm.topic_terms = cluster_terms(dm.labels, dtm)
    write_json(out / "density_topics.json", {
        "min_cluster_size": mcs,
        "all_noise": dm.all_noise,
        "noise_count": int((dm.labels == -1).sum()),
        "topics": {
            str(t): {
                "top_terms": [[term, w] for term, w in dm.topic_terms.get(t, [])],
                "size": size,
            } for t, size in dm.topic_sizes.items()
        },
    })

    matrix = temporal_weights(dm.labels.tolist(), years)
    rows = []
    for year in matrix.years:
        for topic in matrix.topics:
            rows.append([year, topic, matrix.counts[year][topic],
                         float(matrix.weights[year][topic])])
    write_csv(out / "topic_over_time.csv", ["year", "topic_id", "count", "weight"], rows)
    return {"lda_topics": lda_cfg.K, "density_topics": len(dm.topic_sizes),
            "vocab": dtm.n_terms}


def stage_forecast(cfg: RunConfig, out: Path) -> dict:
    series = rate_series_from_csv(out)
    horizon = int(cfg.forecast.get("horizon", 2))
    alpha = float(cfg.forecast.get("smoothing_alpha", 0.5))
    specs = [
        ("smoothed_arima(1,1,1)", ArimaSpec(1, 1, 1, smoothing_alpha=alpha)),
        ("arima(2,0,2)", ArimaSpec(2, 0, 2)),
    ]
    rows = []
    for cat in SKILL_CATEGORIES:
        s = series[cat]
        for spec_name, spec in specs:
            fc = forecast_series(s, spec, horizon=horizon)
            for year, rate in s.points:
                rows.append([cat, spec_name, year, float(rate), float(rate), float(rate), 0])
            for year, point, lower, upper in fc.forecasts:
                rows.append([cat, spec_name, year, float(point), float(lower),
                             float(upper), 1])
    write_csv(out / "forecast.csv",
              ["label", "spec", "year", "value", "lower", "upper", "is_forecast"],
              rows)
    return {"series": len(SKILL_CATEGORIES) * len(specs), "horizon": horizon}


def stage_correlate(cfg: RunConfig, out: Path) -> dict:
    series = rate_series_from_csv(out)
    matrix = pearson_matrix(series)
    rows = []
    for i, label in enumerate(matrix.labels):
        row = [label]
        for j in range(len(matrix.labels)):
            v = matrix.entries[i, j]
            row.append("undefined" if np.isnan(v) else float(v))
        rows.append(row)
    write_csv(out / "correlation.csv", ["category"] + list(matrix.labels), rows)
    lo, hi = matrix.off_diagonal_extremes()
    return {"min_off_diagonal": lo, "max_off_diagonal": hi}


def stage_sectors(cfg: RunConfig, out: Path) -> dict:
    postings = load_postings(out)
    flags = load_flags(out)
    lex = load_sectors(cfg.sectors)
    series = sector_rates(postings, flags, lex)
    by_key: dict[tuple[str, int], dict] = {}
    for s in series:
        cat, sector = s.label
        for year, rate in s.points:
            by_key.setdefault((sector, year), {})[cat] = rate
    labels = sector_totals(postings, lex)
    counts: dict[tuple[str, int], int] = {}
    for p in postings:
        sec = labels.get(p.id)
        if sec is not None:
            counts[(sec, p.year)] = counts.get((sec, p.year), 0) + 1
    rows = []
    for (sector, year) in sorted(by_key):
        rates = by_key[(sector, year)]
        rows.append([sector, year, counts[(sector, year)]]
                    + [float(rates.get(c, 0.0)) for c in SKILL_CATEGORIES])
    write_csv(out / "sector_rates.csv",
              ["sector", "year", "postings"] + list(SKILL_CATEGORIES), rows)
    return {"rows": len(rows)}


REPORT_TABLES = [
    "skill_rates.csv", "framing_by_year.csv", "framing_by_sector.csv",
    "topic_over_time.csv", "forecast.csv", "correlation.csv", "sector_rates.csv",
    "lda_topics.json", "density_topics.json",
]


def stage_report(cfg: RunConfig, out: Path) -> dict:
    for name in REPORT_TABLES + ["cleanse_report.json", "kmeans_clusters.json"]:
        require(out / name)
    cleanse_report = json.loads((out / "cleanse_report.json").read_text(encoding="utf-8"))
    header, rate_rows = read_csv(out / "skill_rates.csv")
    rates_by_year = {r[0]: dict(zip(header, r)) for r in rate_rows}
    fy_header, fy_rows = read_csv(out / "framing_by_year.csv")
    mean_fi = {r[0]: float(dict(zip(fy_header, r))["fi"]) for r in fy_rows}
    density = json.loads((out / "density_topics.json").read_text(encoding="utf-8"))
    corr_header, corr_rows = read_csv(out / "correlation.csv")
    off_diag = []
    for i, row in enumerate(corr_rows):
        for j, v in enumerate(row[1:]):
            if i != j and v != "undefined":
                off_diag.append(float(v))
    fc_header, fc_rows = read_csv(out / "forecast.csv")
    endpoints: dict[str, dict[str, float]] = {}
    for row in fc_rows:
        rec = dict(zip(fc_header, row))
        if rec["is_forecast"] == "1":
            endpoints.setdefault(rec["label"], {})[rec["spec"]] = float(rec["value"])

    tables = {
        name: {"path": name, "rows": count_rows(out / name),
               "sha256": sha256_file(out / name)}
        for name in REPORT_TABLES
    }
    summary = {
        "tool_version": __version__,
        "tables": tables,
        "headline": {
            "input_records": cleanse_report["input"],
            "retained_postings": cleanse_report["retained"],
            "rejections": cleanse_report["rejected"],
            "rates_per_1000_by_year": rates_by_year,
            "mean_framing_index_by_year": mean_fi,
            "density_topic_sizes": {k: v["size"] for k, v in density["topics"].items()},
            "correlation_extremes": {
                "min_off_diagonal": min(off_diag) if off_diag else None,
                "max_off_diagonal": max(off_diag) if off_diag else None,
            },
            "forecast_endpoints": endpoints,
        },
    }
    write_json(out / "summary.json", summary)

    md = ["# skillscope run summary", "",
          f"- tool version: {__version__}",
          f"- input records: {cleanse_report['input']}",
          f"- retained postings: {cleanse_report['retained']}", "",
          "## Tables", ""]
    for name, meta in tables.items():
        md.append(f"- `{name}`: {meta['rows']} rows")
    md += ["", "## Mean framing index by year", ""]
    for year in sorted(mean_fi):
        md.append(f"- {year}: {mean_fi[year]:+.4f}")
    if off_diag:
        md += ["", f"Correlation off-diagonal range: "
                   f"{min(off_diag):.4f} .. {max(off_diag):.4f}"]
    atomic_write(out / "summary.md", "\n".join(md) + "\n")
    return {"tables": len(tables)}


STAGE_FUNCS = {
    "ingest": lambda cfg, out, jobs: stage_ingest(cfg, out, jobs),
    "cleanse": lambda cfg, out, jobs: stage_cleanse(cfg, out),
    "extract": lambda cfg, out, jobs: stage_extract(cfg, out),
    "framing": lambda cfg, out, jobs: stage_framing(cfg, out),
    "topics": lambda cfg, out, jobs: stage_topics(cfg, out),
    "forecast": lambda cfg, out, jobs: stage_forecast(cfg, out),
    "correlate": lambda cfg, out, jobs: stage_correlate(cfg, out),
    "sectors": lambda cfg, out, jobs: stage_sectors(cfg, out),
    "report": lambda cfg, out, jobs: stage_report(cfg, out),
}

STAGE_OUTPUTS = {
    "ingest": ["raw_records.ndjson", "ingest_report.json"],
    "cleanse": ["postings.ndjson", "cleanse_report.json"],
    "extract": ["skill_flags.ndjson", "skill_rates.csv"],
    "framing": ["framing.ndjson", "framing_by_year.csv", "framing_by_sector.csv"],
    "topics": ["lda_topics.json", "kmeans_clusters.json", "density_topics.json",
               "topic_over_time.csv"],
    "forecast": ["forecast.csv"],
    "correlate": ["correlation.csv"],
    "sectors": ["sector_rates.csv"],
    "report": ["summary.json", "summary.md"],
}


def run_stage(name: str, cfg: RunConfig, jobs: int = 1) -> dict:
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(out, cfg)
    started = time.monotonic()
    counts = STAGE_FUNCS[name](cfg, out, jobs)
    elapsed = time.monotonic() - started
    manifest.record(name, [out / f for f in STAGE_OUTPUTS[name]], elapsed, counts)
    return counts


def run_all(cfg: RunConfig, jobs: int = 1) -> None:
    for name in STAGES:
        run_stage(name, cfg, jobs)


def cmd_validate(args) -> int:
    ok = True
    for kind, loader, path in (("taxonomy", load_taxonomy, args.taxonomy),
                               ("anchors", load_anchors, args.anchors),
                               ("sectors", load_sectors, args.sectors)):
        try:
            loader(path)
            print(f"{kind}: OK ({path or 'bundled default'})")
        except SkillscopeError as e:
            print(f"{kind}: INVALID - {e}")
            ok = False
    return EXIT_OK if ok else EXIT_CONFIG


def cmd_demo(args) -> int:
    from .fixtures import write_demo_corpus
    run_path = write_demo_corpus(args.out, seed=args.seed)
    print(f"demo corpus and config written; run: skillscope all --config {run_path}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="skillscope",
                                     description="job-postings corpus analytics pipeline")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in STAGES + ("all",):
        p = sub.add_parser(name, help=f"run the {name} stage" if name != "all"
                           else "run every stage in pipeline order")
        p.add_argument("--config", required=True)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)

    v = sub.add_parser("validate", help="validate lexicon files without running")
    v.add_argument("--taxonomy", default=None)
    v.add_argument("--anchors", default=None)
    v.add_argument("--sectors", default=None)

    d = sub.add_parser("demo", help="write the bundled synthetic demo corpus")
    d.add_argument("--out", required=True)
    d.add_argument("--seed", type=int, default=7)

    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "demo":
            return cmd_demo(args)
        cfg = RunConfig.load(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
            cfg.raw["seed"] = args.seed
        if args.out is not None:
            cfg.output_dir = Path(args.out)
        if args.command == "all":
            run_all(cfg, jobs=args.jobs)
        else:
            run_stage(args.command, cfg, jobs=args.jobs)
        return EXIT_OK
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except MissingUpstreamError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MISSING_UPSTREAM
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except SkillscopeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
