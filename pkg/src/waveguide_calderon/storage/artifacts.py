"""Run artifacts: JSON reports, CSV tables and stored DN maps."""

from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel

from waveguide_calderon import __version__
from waveguide_calderon.errors import DNMapMismatchError
from waveguide_calderon.forward.dnmap import DNMapMetadata, PartialDNMap

logger = logging.getLogger(__name__)

DNMAP_FORMAT_VERSION = 1


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def format_cell(value: Any) -> str:
    """Deterministic text for one CSV cell."""
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, int | np.integer):
        return str(int(value))
    if isinstance(value, float | np.floating):
        return f"{float(value):.12e}"
    return str(value)


class ArtifactStore:
    """Writes reports under one output directory, stamped with config hash and version."""

    def __init__(self, root: str | Path, config_hash: str, command: str = "") -> None:
        self.root = Path(root)
        self.config_hash = config_hash
        self.command = command

    def path(self, name: str) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        return self.root / name

    def write_json(self, name: str, report: BaseModel | dict[str, Any]) -> Path:
        payload = {
            "command": self.command,
            "config_hash": self.config_hash,
            "version": __version__,
            "report": _plain(report),
        }
        target = self.path(name)
        target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info("wrote %s", target)
        return target

    def write_csv(
        self,
        name: str,
        rows: list[BaseModel] | list[dict[str, Any]],
        columns: list[str] | None = None,
    ) -> Path:
        """One row per record; columns default to the first record's field order."""
        records = [r.model_dump() if isinstance(r, BaseModel) else dict(r) for r in rows]
        if columns is None:
            columns = list(records[0]) if records else []
        target = self.path(name)
        with target.open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for record in records:
                writer.writerow([format_cell(record.get(c)) for c in columns])
        logger.info("wrote %s (%d rows)", target, len(records))
        return target

    def save_dnmap(self, name: str, dn: PartialDNMap) -> Path:
        """``name.npz`` with the matrices and ``name.json`` with the metadata."""
        target = self.path(f"{name}.npz")
        np.savez_compressed(
            target,
            matrix=dn.matrix,
            gram=dn.gram,
            output_weights=dn.output_weights,
            input_positions=dn.input_positions,
            output_positions=dn.output_positions,
        )
        sidecar = {"format_version": DNMAP_FORMAT_VERSION, **dn.metadata.as_dict()}
        self.write_json(f"{name}.json", sidecar)
        return target

    def load_dnmap(self, name: str) -> PartialDNMap:
        payload = json.loads(self.path(f"{name}.json").read_text(encoding="utf-8"))
        meta = dict(payload["report"])
        if meta.pop("format_version", None) != DNMAP_FORMAT_VERSION:
            raise DNMapMismatchError(f"{name}: unsupported DN map format")
        with np.load(self.path(f"{name}.npz")) as data:
            return PartialDNMap(
                np.array(data["matrix"]),
                np.array(data["gram"]),
                np.array(data["output_weights"]),
                np.array(data["input_positions"]),
                np.array(data["output_positions"]),
                DNMapMetadata(**meta),
            )


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with Path(path).open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))
