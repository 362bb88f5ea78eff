"""Run configuration: one JSON file describing corpora, lexicons and knobs.

Relative paths are resolved against the config file's directory. The config
hash used in provenance covers the parsed content except the output
directory, so re-running the same analysis into a different directory keeps
identical provenance and, therefore, identical numeric outputs.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError
from .metrics import MetricId

__all__ = ["RunConfig", "EmbeddingConfig", "ProbeConfig"]

_LINKAGES = ("average", "single", "complete")
_ALIGNMENTS = ("procrustes", "identity")


@dataclass(frozen=True)
class EmbeddingConfig:
    dim: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    min_count: int = 5
    subsample: float = 1e-3
    anchor_count: int = 1000
    alignment: str = "procrustes"


@dataclass(frozen=True)
class ProbeConfig:
    order: int = 3
    smoothing: float = 0.01
    top_k: int = 50
    max_rank: int = 15
    party_tokens: tuple[str, str] = ("BJP", "Congress")
    prompt: str = "This election people will vote for <mask>."


@dataclass
class RunConfig:
    corpora: dict
    date_start: dt.date
    date_end: dt.date
    output_dir: Path
    seed: int
    party_lexicons_path: Path | None = None
    cities_path: Path | None = None
    states_path: Path | None = None
    valence_path: Path | None = None
    modifiers_path: Path | None = None
    subjectivity_path: Path | None = None
    metrics: list = field(default_factory=lambda: list(MetricId))
    linkage: str = "average"
    znormalize: bool = False
    embedding: EmbeddingConfig = EmbeddingConfig()
    weat_positive: tuple = ("good", "honest", "efficient", "superior")
    weat_negative: tuple = ("bad", "dishonest", "inefficient", "inferior")
    probe: ProbeConfig = ProbeConfig()
    config_hash: str = ""

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(raw, base_dir=path.parent)

    @classmethod
    def from_dict(cls, raw: dict, base_dir: str | Path = ".") -> "RunConfig":
        base_dir = Path(base_dir)

        def resolve(value: Any, key: str, must_exist: bool = True) -> Path | None:
            if value is None:
                return None
            if not isinstance(value, str):
                raise ConfigError(f"config key {key}: expected a path string")
            resolved = (base_dir / value).resolve() if not Path(value).is_absolute() else Path(value)
            if must_exist and not resolved.exists():
                raise ConfigError(f"config key {key}: path does not exist: {resolved}")
            return resolved

        corpora_raw = raw.get("corpora")
        if not isinstance(corpora_raw, dict) or not corpora_raw:
            raise ConfigError("config key corpora: expected a non-empty object of outlet -> path")
        corpora = {
            outlet: resolve(p, f"corpora.{outlet}") for outlet, p in sorted(corpora_raw.items())
        }

        dates = raw.get("date_range") or {}
        try:
            date_start = dt.date.fromisoformat(dates.get("start", "0001-01-01"))
            date_end = dt.date.fromisoformat(dates.get("end", "9999-12-31"))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config key date_range: invalid date: {exc}") from exc
        if date_start > date_end:
            raise ConfigError(f"config key date_range: start {date_start} after end {date_end}")

        metric_names = raw.get("metrics")
        if metric_names is None:
            metrics = list(MetricId)
        else:
            try:
                metrics = [MetricId(name) for name in metric_names]
            except ValueError as exc:
                raise ConfigError(f"config key metrics: {exc}") from exc

        clustering = raw.get("clustering") or {}
        linkage = clustering.get("linkage", "average")
        if linkage not in _LINKAGES:
            raise ConfigError(f"config key clustering.linkage: expected one of {_LINKAGES}")

        embedding_raw = raw.get("embedding") or {}
        embedding = EmbeddingConfig(
            dim=int(embedding_raw.get("dim", 100)),
            window=int(embedding_raw.get("window", 5)),
            negatives=int(embedding_raw.get("negatives", 5)),
            epochs=int(embedding_raw.get("epochs", 5)),
            min_count=int(embedding_raw.get("min_count", 5)),
            subsample=float(embedding_raw.get("subsample", 1e-3)),
            anchor_count=int(embedding_raw.get("anchor_count", 1000)),
            alignment=embedding_raw.get("alignment", "procrustes"),
        )
        if embedding.alignment not in _ALIGNMENTS:
            raise ConfigError(f"config key embedding.alignment: expected one of {_ALIGNMENTS}")

        weat_raw = raw.get("weat") or {}
        weat_positive = tuple(weat_raw.get("attributes_positive", ("good", "honest", "efficient", "superior")))
        weat_negative = tuple(weat_raw.get("attributes_negative", ("bad", "dishonest", "inefficient", "inferior")))

        probe_raw = raw.get("probe") or {}
        party_tokens = probe_raw.get("party_tokens", ["BJP", "Congress"])
        if not isinstance(party_tokens, (list, tuple)) or len(party_tokens) != 2:
            raise ConfigError("config key probe.party_tokens: expected exactly 2 tokens")
        probe = ProbeConfig(
            order=int(probe_raw.get("order", 3)),
            smoothing=float(probe_raw.get("smoothing", 0.01)),
            top_k=int(probe_raw.get("top_k", 50)),
            max_rank=int(probe_raw.get("max_rank", 15)),
            party_tokens=(str(party_tokens[0]), str(party_tokens[1])),
            prompt=str(probe_raw.get("prompt", ProbeConfig.prompt)),
        )

        analyzers = raw.get("analyzers") or {}
        gazetteer = raw.get("gazetteer") or {}
        seed = raw.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ConfigError("config key seed: expected a non-negative integer")

        hashable = {k: v for k, v in raw.items() if k != "output_dir"}
        config_hash = hashlib.sha256(
            json.dumps(hashable, sort_keys=True, ensure_ascii=False).encode("utf-8")
        ).hexdigest()

        output_dir = raw.get("output_dir", "out")
        if not isinstance(output_dir, str):
            raise ConfigError("config key output_dir: expected a path string")

        return cls(
            corpora=corpora,
            date_start=date_start,
            date_end=date_end,
            output_dir=(base_dir / output_dir),
            seed=seed,
            party_lexicons_path=resolve(raw.get("party_lexicons"), "party_lexicons"),
            cities_path=resolve(gazetteer.get("cities"), "gazetteer.cities"),
            states_path=resolve(gazetteer.get("states"), "gazetteer.states"),
            valence_path=resolve(analyzers.get("valence"), "analyzers.valence"),
            modifiers_path=resolve(analyzers.get("modifiers"), "analyzers.modifiers"),
            subjectivity_path=resolve(analyzers.get("subjectivity"), "analyzers.subjectivity"),
            metrics=metrics,
            linkage=linkage,
            znormalize=bool(clustering.get("znormalize", False)),
            embedding=embedding,
            weat_positive=weat_positive,
            weat_negative=weat_negative,
            probe=probe,
            config_hash=config_hash,
        )
