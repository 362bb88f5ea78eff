from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from newsbalance.cli import main
from newsbalance.config import RunConfig
from newsbalance.errors import ConfigError

REPO_ROOT = Path(__file__).resolve().parent.parent
SAMPLE_CONFIG = REPO_ROOT / "sample" / "config.json"


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    """A small generated archive plus its config, shared by the CLI tests."""
    directory = tmp_path_factory.mktemp("synth")
    code = main(
        ["synth", "--out", str(directory), "--seed", "11", "--months", "4",
         "--articles-per-month", "10"]
    )
    assert code == 0
    return directory


class TestValidate:
    def test_shipped_sample_config(self, capsys):
        assert main(["validate", "--config", str(SAMPLE_CONFIG)]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["outlets"] == ["daily-alpha", "daily-beta", "daily-gamma"]
        assert summary["parties"] == ["bjp", "congress"]

    def test_missing_config_file(self, capsys):
        assert main(["validate", "--config", "/nonexistent/config.json"]) == 1

    def test_invalid_json_reports_line(self, tmp_path, capsys):
        bad = tmp_path / "config.json"
        bad.write_text('{\n "corpora": {\n', encoding="utf-8")
        assert main(["validate", "--config", str(bad)]) == 1
        err = capsys.readouterr().err
        assert "config.json:" in err

    def test_missing_corpus_path(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"corpora": {"x": "missing.jsonl"}}), encoding="utf-8")
        assert main(["validate", "--config", str(config)]) == 1

    def _rewritten_config(self, synth_dir, tmp_path, **overrides):
        raw = json.loads((synth_dir / "config.json").read_text())
        raw["corpora"] = {k: str(synth_dir / v) for k, v in raw["corpora"].items()}
        raw.update(overrides)
        config = tmp_path / "config.json"
        config.write_text(json.dumps(raw), encoding="utf-8")
        return config

    def test_bad_date_range(self, tmp_path, synth_dir):
        config = self._rewritten_config(
            synth_dir, tmp_path, date_range={"start": "2011-01-01", "end": "2010-01-01"}
        )
        with pytest.raises(ConfigError, match="date_range"):
            RunConfig.from_file(config)

    def test_negative_seed_rejected(self, tmp_path, synth_dir):
        config = self._rewritten_config(synth_dir, tmp_path, seed=-5)
        with pytest.raises(ConfigError, match="seed"):
            RunConfig.from_file(config)

    def test_unknown_metric_rejected(self, tmp_path, synth_dir):
        config = self._rewritten_config(synth_dir, tmp_path, metrics=["cov_head", "zing"])
        with pytest.raises(ConfigError, match="metrics"):
            RunConfig.from_file(config)


class TestCommands:
    def test_metrics_emits_all_series_csv(self, synth_dir, tmp_path):
        out = tmp_path / "out"
        assert main(["metrics", "--config", str(synth_dir / "config.json"), "--out", str(out)]) == 0
        csvs = sorted(p.name for p in (out / "metrics").glob("*__*.csv"))
        assert len(csvs) == 3 * 7  # outlets x metrics
        with (out / "metrics" / "daily-alpha__cov_head.csv").open() as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 4  # months in span
        aggregates = json.loads((out / "metrics" / "aggregates.json").read_text())
        assert set(aggregates["daily-alpha"]) == {
            "cov_head", "cov_content", "pov", "pos_sent", "neg_sent", "subj", "supcomp",
        }

    def test_cluster_outputs(self, synth_dir, tmp_path):
        out = tmp_path / "out"
        assert main(["cluster", "--config", str(synth_dir / "config.json"), "--out", str(out)]) == 0
        payload = json.loads((out / "cluster" / "cluster.json").read_text())
        assert len(payload["labels"]) == 21
        assert (out / "cluster" / "dendrogram_all.newick").exists()
        assert set(payload["by_outlet"]) == {"daily-alpha", "daily-beta", "daily-gamma"}

    def test_geo_outputs(self, synth_dir, tmp_path):
        out = tmp_path / "out"
        assert main(["geo", "--config", str(synth_dir / "config.json"), "--out", str(out)]) == 0
        payload = json.loads((out / "geo" / "geo.json").read_text())
        assert "daily-alpha" in payload["trends"]
        with (out / "geo" / "coverage_state.csv").open() as handle:
            header = handle.readline().strip()
        assert header == "year,outlet,place,count,share"

    def test_probe_outputs(self, synth_dir, tmp_path):
        out = tmp_path / "out"
        assert main(["probe", "--config", str(synth_dir / "config.json"), "--out", str(out)]) == 0
        payload = json.loads((out / "probe" / "probe.json").read_text())
        entry = payload["daily-alpha"]
        assert len(entry["popularity"]) == 1  # 4 months span one year
        year, p_b, p_c = entry["popularity"][0]
        assert p_b + p_c == 1.0

    def test_weat_requires_two_years(self, synth_dir, tmp_path):
        # the 4-month archive covers a single year: weat must exit with a data error
        out = tmp_path / "out"
        code = main(["weat", "--config", str(synth_dir / "config.json"), "--out", str(out)])
        assert code == 2

    def test_commands_run_independently(self, synth_dir, tmp_path):
        out = tmp_path / "solo"
        assert main(["geo", "--config", str(synth_dir / "config.json"), "--out", str(out)]) == 0
        assert not (out / "metrics").exists()


class TestSynth:
    def test_layout(self, synth_dir):
        assert (synth_dir / "config.json").exists()
        corpus_files = sorted(p.name for p in (synth_dir / "corpus").glob("*.jsonl"))
        assert corpus_files == ["daily-alpha.jsonl", "daily-beta.jsonl", "daily-gamma.jsonl"]

    def test_seeded_regeneration_identical(self, tmp_path):
        for name in ("one", "two"):
            assert main(["synth", "--out", str(tmp_path / name), "--seed", "3",
                         "--months", "2", "--articles-per-month", "5"]) == 0
        first = (tmp_path / "one" / "corpus" / "daily-alpha.jsonl").read_bytes()
        second = (tmp_path / "two" / "corpus" / "daily-alpha.jsonl").read_bytes()
        assert first == second


def test_output_dir_env_override(synth_dir, tmp_path, monkeypatch):
    target = tmp_path / "env-out"
    monkeypatch.setenv("NEWSBALANCE_OUT", str(target))
    assert main(["geo", "--config", str(synth_dir / "config.json")]) == 0
    assert (target / "geo" / "geo.json").exists()


def test_provenance_block_written(synth_dir, tmp_path):
    out = tmp_path / "out"
    assert main(["metrics", "--config", str(synth_dir / "config.json"), "--out", str(out)]) == 0
    provenance = json.loads((out / "metrics" / "provenance.json").read_text())
    assert set(provenance) >= {"command", "config_hash", "seed", "tool_version", "generated_at"}
    assert provenance["seed"] == 11
