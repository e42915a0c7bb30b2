"""End-to-end evaluation: prompt -> backend -> parse -> grouped metrics.

Runs are resumable: predictions stream to a JSONL log as they complete,
and a rerun with the same log only issues the missing backend calls.
Backend failures become abstentions (pred absent), never aborted runs.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .backends import ChatBackend
from .evalprompt import DEFAULT_N_FRAMES, build_inference_prompt
from .grammar import Label, ParsedResponse, parse_response
from .manifest import SampleRecord
from .metrics import MetricsReport, grouped_report


class BackendUnreachable(RuntimeError):
    """Raised only when not a single sample could be completed."""


@dataclass(frozen=True)
class PredictionRecord:
    sample_id: str
    raw_response: str
    parsed: ParsedResponse
    pred: Label | None
    latency_ms: float
    backend_id: str

    def to_json_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "raw_response": self.raw_response,
            "pred": self.pred.value if self.pred else None,
            "n_check": self.parsed.n_check,
            "format_ok": self.parsed.outer_format_ok,
            "latency_ms": self.latency_ms,
            "backend_id": self.backend_id,
        }


def record_from_response(sample_id: str, raw: str, latency_ms: float, backend_id: str) -> PredictionRecord:
    parsed = parse_response(raw)
    return PredictionRecord(sample_id, raw, parsed, parsed.answer, latency_ms, backend_id)


def load_prediction_log(stream: IO[str] | Iterable[str]) -> list[PredictionRecord]:
    records = []
    for line in stream:
        if not line.strip():
            continue
        obj = json.loads(line)
        records.append(
            record_from_response(
                obj["sample_id"], obj.get("raw_response", ""), float(obj.get("latency_ms", 0.0)), obj.get("backend_id", "")
            )
        )
    return records


@dataclass(frozen=True)
class EvalConfig:
    n_frames: int = DEFAULT_N_FRAMES
    workers: int = 8
    group_by: str | tuple[str, ...] = "generator"
    log_path: str | None = None
    resume: bool = True


def run_eval(
    manifest: Sequence[SampleRecord],
    backend: ChatBackend,
    config: EvalConfig = EvalConfig(),
) -> tuple[list[PredictionRecord], MetricsReport]:
    """Evaluate every manifest sample and score grouped detection metrics.

    Output records are sorted by sample_id, so with a deterministic
    backend the run is byte-identical at any concurrency level.
    """
    done: dict[str, PredictionRecord] = {}
    log_path = Path(config.log_path) if config.log_path else None
    if log_path and config.resume and log_path.exists():
        with log_path.open("r", encoding="utf-8") as fh:
            for rec in load_prediction_log(fh):
                done[rec.sample_id] = rec

    pending = [s for s in manifest if s.sample_id not in done]
    deterministic = getattr(backend, "deterministic_latency", False)

    def call(sample: SampleRecord) -> tuple[PredictionRecord, bool]:
        start = time.monotonic()
        try:
            raw = backend.complete(build_inference_prompt(sample, config.n_frames), sample.sample_id)
            succeeded = True
        except Exception:  # noqa: BLE001 - a failed sample is an abstention
            raw = ""
            succeeded = False
        latency = 0.0 if deterministic else (time.monotonic() - start) * 1000.0
        return record_from_response(sample.sample_id, raw, latency, backend.backend_id), succeeded

    fresh: list[PredictionRecord] = []
    any_success = False
    if pending:
        if config.workers <= 1:
            results = [call(s) for s in pending]
        else:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                results = list(pool.map(call, pending))
        fresh = [rec for rec, _ in results]
        any_success = any(ok for _, ok in results)

    if not done and pending and not any_success:
        raise BackendUnreachable(f"backend {backend.backend_id!r} completed zero of {len(pending)} samples")

    if log_path and fresh:
        log_path.parent.mkdir(parents=True, exist_ok=True)
        with log_path.open("a", encoding="utf-8") as fh:
            for rec in sorted(fresh, key=lambda r: r.sample_id):
                fh.write(json.dumps(rec.to_json_dict()) + "\n")

    for rec in fresh:
        done[rec.sample_id] = rec
    records = sorted(done.values(), key=lambda r: r.sample_id)
    manifest_ids = {s.sample_id for s in manifest}
    report = grouped_report(
        ((r.sample_id, r.pred) for r in records if r.sample_id in manifest_ids),
        manifest,
        config.group_by,
    )
    return records, report
