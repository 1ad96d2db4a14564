import json
import logging
import os
import sys
from pathlib import Path
from typing import IO, Union

import pandas as pd
import yaml

from scenarios import OutputFormat, RunManifest, ScenarioConfig, config_from_dict, config_to_dict

logger = logging.getLogger(__name__)

# Default directory for run output
DEFAULT_OUTPUT_DIR = Path(__file__).resolve().parent.parent / "results"
# Allow overriding the output location via environment variable
OUTPUT_DIR = os.environ.get("FLOQUET_OUTPUT_DIR", str(DEFAULT_OUTPUT_DIR))

CSV_COLUMNS = ["cycle", "observable", "index", "value"]

Destination = Union[str, Path, IO[str]]


def format_value(value: float) -> str:
    """Shortest decimal that reads back to the same double."""
    return repr(float(value))


def records_frame(manifest: RunManifest) -> pd.DataFrame:
    """Manifest records as a table of strings, ready for byte-stable CSV."""
    rows = [
        (str(r.cycle), r.observable, "" if r.index is None else str(r.index), format_value(r.value))
        for r in manifest.records
    ]
    return pd.DataFrame(rows, columns=CSV_COLUMNS, dtype=str)


def manifest_to_dict(manifest: RunManifest) -> dict:
    """JSON-ready form of a run: config, version, wall clock and records."""
    return {
        "config": config_to_dict(manifest.config),
        "version": manifest.version,
        "wall_clock": manifest.wall_clock,
        "records": [
            {"cycle": r.cycle, "observable": r.observable, "index": r.index, "value": r.value}
            for r in manifest.records
        ],
    }


def default_destination(cfg: ScenarioConfig, fmt: OutputFormat) -> Path:
    """``output.path`` if the config sets one, else <OUTPUT_DIR>/<name>.<format>."""
    if cfg.output.path:
        return Path(cfg.output.path)
    return Path(OUTPUT_DIR) / f"{cfg.name}.{fmt.value}"


def _render(manifest: RunManifest, fmt: OutputFormat) -> str:
    if fmt is OutputFormat.CSV:
        return records_frame(manifest).to_csv(index=False, lineterminator="\n")
    return json.dumps(manifest_to_dict(manifest), indent=2) + "\n"


def emit(manifest: RunManifest, fmt: OutputFormat | str, destination: Destination) -> None:
    """Write the manifest as CSV (cycle,observable,index,value) or JSON."""
    text = _render(manifest, OutputFormat(fmt))
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = Path(destination)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise OSError(f"could not write results to {path}: {exc}") from exc
    logger.info("wrote %d records to %s", len(manifest.records), path)


def save_config(cfg: ScenarioConfig, path: Union[str, Path]) -> None:
    """Write a config back out as YAML."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as handle:
            yaml.safe_dump(config_to_dict(cfg), handle, sort_keys=False)
    except OSError as exc:
        raise OSError(f"could not write config to {path}: {exc}") from exc


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """Read and validate a YAML scenario file."""
    path = Path(path)
    try:
        with open(path) as handle:
            data = yaml.safe_load(handle)
    except OSError as exc:
        raise OSError(f"could not read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ValueError(f"{path}: not valid YAML: {exc}") from exc
    try:
        return config_from_dict(data)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc


def write_stdout(manifest: RunManifest, fmt: OutputFormat | str) -> None:
    """Render a manifest to stdout in fmt."""
    emit(manifest, fmt, sys.stdout)
