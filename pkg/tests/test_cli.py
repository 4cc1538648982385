import csv
import json
import os
from pathlib import Path

import pytest

from skillscope.cli import (
    EXIT_CONFIG,
    EXIT_MISSING_UPSTREAM,
    EXIT_OK,
    STAGE_OUTPUTS,
    STAGES,
    RunConfig,
    derive_seed,
    main,
    run_stage,
)
from skillscope.fixtures import write_demo_corpus


def results_dir(demo_dir: Path) -> Path:
    return demo_dir / "results"


class TestSmoke:
    def test_all_artifacts_present(self, demo_dir):
        out = results_dir(demo_dir)
        for stage in STAGES:
            for name in STAGE_OUTPUTS[stage]:
                assert (out / name).exists(), name
        manifest = json.loads((out / "run_manifest.json").read_text())
        assert set(manifest["stages"]) == set(STAGES)

    def test_exit_zero_via_main(self, demo_dir):
        assert main(["extract", "--config", str(demo_dir / "run.json")]) == EXIT_OK

    def test_summary_lists_nine_tables(self, demo_dir):
        summary = json.loads((results_dir(demo_dir) / "summary.json").read_text())
        assert len(summary["tables"]) == 9
        for meta in summary["tables"].values():
            assert meta["rows"] >= 0

    def test_summary_retention_matches_cleanse_report(self, demo_dir):
        out = results_dir(demo_dir)
        summary = json.loads((out / "summary.json").read_text())
        report = json.loads((out / "cleanse_report.json").read_text())
        assert summary["headline"]["retained_postings"] == report["retained"]

    def test_summary_correlation_extremes_match_csv(self, demo_dir):
        out = results_dir(demo_dir)
        summary = json.loads((out / "summary.json").read_text())
        with open(out / "correlation.csv", newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        vals = [float(v) for i, r in enumerate(rows)
                for j, v in enumerate(r[1:]) if i != j and v != "undefined"]
        ex = summary["headline"]["correlation_extremes"]
        assert ex["min_off_diagonal"] == pytest.approx(min(vals))
        assert ex["max_off_diagonal"] == pytest.approx(max(vals))


class TestErrors:
    def test_missing_upstream_names_artifact(self, tmp_path, capsys):
        write_demo_corpus(tmp_path)
        code = main(["topics", "--config", str(tmp_path / "run.json")])
        assert code == EXIT_MISSING_UPSTREAM
        assert "postings.ndjson" in capsys.readouterr().err

    def test_config_error_exit_code(self, tmp_path):
        bad = tmp_path / "run.json"
        bad.write_text("{}")  # no sources
        assert main(["all", "--config", str(bad)]) == EXIT_CONFIG

    def test_unreadable_config(self, tmp_path):
        assert main(["all", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG

    def test_invalid_granularity(self, tmp_path):
        run = write_demo_corpus(tmp_path)
        cfg = json.loads(run.read_text())
        cfg["granularity"] = "weekly"
        run.write_text(json.dumps(cfg))
        assert main(["ingest", "--config", str(run)]) == EXIT_CONFIG


class TestDeterminism:
    def test_rerun_produces_identical_checksums(self, demo_dir, tmp_path):
        run1 = results_dir(demo_dir) / "run_manifest.json"
        run_path = write_demo_corpus(tmp_path)
        assert main(["all", "--config", str(run_path),
                     "--out", str(tmp_path / "results")]) == EXIT_OK
        m1 = json.loads(run1.read_text())["stages"]
        m2 = json.loads((tmp_path / "results" / "run_manifest.json").read_text())["stages"]
        for stage in STAGES:
            c1 = {k: v["sha256"] for k, v in m1[stage]["outputs"].items()}
            c2 = {k: v["sha256"] for k, v in m2[stage]["outputs"].items()}
            assert c1 == c2, stage

    def test_stage_isolation_rebuild_identical(self, demo_dir):
        out = results_dir(demo_dir)
        target = out / "skill_rates.csv"
        before = target.read_bytes()
        target.unlink()
        cfg = RunConfig.load(demo_dir / "run.json")
        run_stage("extract", cfg)
        assert target.read_bytes() == before

    def test_seed_changes_model_outputs(self, demo_dir, tmp_path):
        run_path = write_demo_corpus(tmp_path)
        assert main(["all", "--config", str(run_path), "--seed", "99",
                     "--out", str(tmp_path / "alt")]) == EXIT_OK
        a = (results_dir(demo_dir) / "lda_topics.json").read_bytes()
        b = (tmp_path / "alt" / "lda_topics.json").read_bytes()
        assert a != b

    def test_derive_seed_separates_stages(self):
        seeds = {derive_seed(7, name) for name in
                 ("topics.lda", "topics.kmeans", "topics.density", "embedding")}
        assert len(seeds) == 4
        assert derive_seed(7, "topics.lda") == derive_seed(7, "topics.lda")


class TestConfigPlumbing:
    def test_env_var_default_output_dir(self, tmp_path, monkeypatch):
        write_demo_corpus(tmp_path)
        cfg = json.loads((tmp_path / "run.json").read_text())
        del cfg["output_dir"]
        (tmp_path / "run.json").write_text(json.dumps(cfg))
        monkeypatch.setenv("SKILLSCOPE_OUT", str(tmp_path / "envout"))
        assert main(["ingest", "--config", str(tmp_path / "run.json")]) == EXIT_OK
        assert (tmp_path / "envout" / "raw_records.ndjson").exists()

    def test_out_flag_overrides(self, tmp_path):
        write_demo_corpus(tmp_path)
        assert main(["ingest", "--config", str(tmp_path / "run.json"),
                     "--out", str(tmp_path / "flagout")]) == EXIT_OK
        assert (tmp_path / "flagout" / "raw_records.ndjson").exists()

    def test_validate_defaults_ok(self, capsys):
        assert main(["validate"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.count("OK") == 3

    def test_validate_bad_file(self, tmp_path, capsys):
        bad = tmp_path / "t.json"
        bad.write_text('{"categories": {}}')
        assert main(["validate", "--taxonomy", str(bad)]) == EXIT_CONFIG
        assert "INVALID" in capsys.readouterr().out


class TestReports:
    def test_ingest_report_conservation(self, demo_dir):
        report = json.loads((results_dir(demo_dir) / "ingest_report.json").read_text())
        counts = report["postings"]
        raw_lines = (results_dir(demo_dir) / "raw_records.ndjson").read_text().splitlines()
        assert counts["emitted"] - counts["duplicates_removed"] == len(raw_lines)

    def test_forecast_csv_shape(self, demo_dir):
        with open(results_dir(demo_dir) / "forecast.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        labels = {r["label"] for r in rows}
        specs = {r["spec"] for r in rows}
        assert len(labels) == 5 and len(specs) == 2
        for r in rows:
            if r["is_forecast"] == "1":
                assert float(r["lower"]) <= float(r["value"]) <= float(r["upper"])

    def test_postings_ndjson_schema(self, demo_dir):
        lines = (results_dir(demo_dir) / "postings.ndjson").read_text().splitlines()
        assert lines
        for line in lines:
            d = json.loads(line)
            assert set(d) == {"id", "date", "year", "description"}
