from __future__ import annotations

import hashlib
import json
import logging
from collections.abc import Callable
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from metronoids import __version__
from metronoids.models.contracts import JSONDict, RunConfig
from metronoids.normalizers.numeric import clean_numbers

logger = logging.getLogger(__name__)

RUN_LOG = "run_log.jsonl"


def run_id(config: RunConfig) -> str:
    """First 16 hex digits of the SHA-256 of the canonical parameter JSON."""
    canonical = json.dumps(
        clean_numbers({"command": config.command, "seed": config.seed, "parameters": config.parameters, "version": config.version}),
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def run_metadata(config: RunConfig) -> JSONDict:
    return {
        "version": config.version,
        "command": config.command,
        "seed": config.seed,
        "parameters": clean_numbers(config.parameters),
        "run_id": run_id(config),
    }


class ExperimentRunner:
    """Writes artifacts for one command and appends run events to a JSON-lines log beside them."""

    def __init__(self, output_root: Path) -> None:
        self.output_root = output_root
        self.output_root.mkdir(parents=True, exist_ok=True)

    def _hash_file(self, file_path: Path) -> str:
        return hashlib.sha256(file_path.read_bytes()).hexdigest()

    def _log(self, event: str, config: RunConfig, **fields: object) -> None:
        record = {
            "event": event,
            "run_id": run_id(config),
            "command": config.command,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            **fields,
        }
        with (self.output_root / RUN_LOG).open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(clean_numbers(record), sort_keys=True) + "\n")

    def run(self, config: RunConfig, produce: Callable[[JSONDict], list[Path]]) -> list[Path]:
        if config.version != __version__:
            config = replace(config, version=__version__)
        source_files = [
            {"filename": Path(p).name, "size_bytes": Path(p).stat().st_size, "sha256": self._hash_file(Path(p))}
            for p in config.inputs
        ]
        self._log("run_started", config, seed=config.seed, parameters=config.parameters, source_files=source_files)
        metadata = run_metadata(config)
        try:
            artifacts = produce(metadata)
        except Exception as exc:
            self._log("run_failed", config, error=f"{type(exc).__name__}: {exc}")
            raise
        for path in artifacts:
            self._log("artifact_written", config, path=str(path), sha256=self._hash_file(path))
        self._log("run_completed", config, artifacts=len(artifacts))
        logger.info("run %s (%s) wrote %d artifact(s)", metadata["run_id"], config.command, len(artifacts))
        return artifacts
