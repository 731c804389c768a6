"""Run artifacts: manifests, metrics CSVs, replay logs, benchmark reports.

Every run writes its manifest before any training step; metrics files are
append-only with a stable schema.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .sim import GameEvent


def _code_hash() -> str:
    root = Path(__file__).parent
    digest = hashlib.sha256()
    for py in sorted(root.rglob("*.py")):
        digest.update(py.relative_to(root).as_posix().encode())
        digest.update(py.read_bytes())
    return digest.hexdigest()[:16]


def config_hash(config_dict: dict) -> str:
    raw = json.dumps(config_dict, sort_keys=True, default=str).encode()
    return hashlib.sha256(raw).hexdigest()[:16]


def write_manifest(out_dir, config_dict: dict, seeds: list[int],
                   outputs: dict[str, str]) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {
        "config": config_dict,
        "seeds": seeds,
        "config_hash": config_hash(config_dict),
        "code_hash": _code_hash(),
        "started_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "outputs": outputs,
    }
    path = out / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
    return path


def append_metrics(path, rows, header: str) -> None:
    path = Path(path)
    fresh = not path.exists()
    with open(path, "a") as fh:
        if fresh:
            fh.write(header + "\n")
        for row in rows:
            fh.write(row.csv_row() + "\n")


def write_replay(path, events: list[GameEvent]) -> None:
    with open(path, "w") as fh:
        for e in events:
            fh.write(e.to_json() + "\n")


def read_replay(path) -> list[GameEvent]:
    with open(path) as fh:
        return [GameEvent.from_json(line) for line in fh if line.strip()]


@dataclass
class BenchmarkCell:
    algorithm: str
    setting: str
    difficulty: str
    mean_gap: float | None
    std_gap: float | None
    episodes: int
    seeds: int
    failed: bool = False
    error: str = ""

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.algorithm, self.setting, self.difficulty)


@dataclass
class BenchmarkReport:
    cells: list[BenchmarkCell] = field(default_factory=list)

    CSV_HEADER = "algorithm,setting,difficulty,mean_gap,std_gap,episodes,seeds,failed"

    @property
    def any_failed(self) -> bool:
        return any(c.failed for c in self.cells)

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for c in self.cells:
            mg = "" if c.mean_gap is None else f"{c.mean_gap:.4f}"
            sg = "" if c.std_gap is None else f"{c.std_gap:.4f}"
            lines.append(f"{c.algorithm},{c.setting},{c.difficulty},{mg},{sg},"
                         f"{c.episodes},{c.seeds},{int(c.failed)}")
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        headers = ["algorithm", "setting", "difficulty", "mean_gap", "std_gap",
                   "episodes", "seeds"]
        rows = []
        for c in self.cells:
            mg = "FAILED" if c.failed else f"{c.mean_gap:+.2f}"
            sg = "-" if c.std_gap is None else f"{c.std_gap:.2f}"
            rows.append([c.algorithm, c.setting, c.difficulty, mg, sg,
                         str(c.episodes), str(c.seeds)])
        widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
                  for i, h in enumerate(headers)]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        out = [fmt.format(*headers), fmt.format(*("-" * w for w in widths))]
        out.extend(fmt.format(*r) for r in rows)
        return "\n".join(out) + "\n"
