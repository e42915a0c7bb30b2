"""Manifest schema, ingestion, counterpart pairing, and frame arithmetic.

Two line-delimited JSON files describe a dataset: samples.jsonl (one video
per line) and annotations.jsonl (human artifact/evidence annotations keyed
by sample_id). Ingestion is total — a bad line becomes a recorded
violation, never an aborted load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Iterator

from . import taxonomy
from .grammar import BBox, Label, TimeSpan


class CondMode(str, Enum):
    T2V = "T2V"
    I2V = "I2V"
    TI2V = "TI2V"
    NONE = "None"


class EvidenceKind(str, Enum):
    FAKE_EVIDENCE = "FakeEvidence"
    REAL_EVIDENCE = "RealEvidence"


@dataclass(frozen=True)
class SampleRecord:
    sample_id: str
    label: Label
    generator: str
    cond_mode: CondMode
    duration: float
    fps: float
    width: int
    height: int
    uri: str
    source: str
    counterpart_id: str | None = None
    native_width: int | None = None
    native_height: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def total_frames(self) -> int:
        return max(1, int(round(self.duration * self.fps)))


@dataclass(frozen=True)
class AnnotationInstance:
    path: taxonomy.TaxonomyPath
    explanation: str
    span: TimeSpan
    bbox: BBox
    evidence_kind: EvidenceKind


@dataclass(frozen=True)
class AnnotationRecord:
    sample_id: str
    instances: tuple[AnnotationInstance, ...]


@dataclass(frozen=True)
class CotRecord:
    sample_id: str
    fake_cot: str
    real_cot: str
    source_model: str
    accepted: bool
    rejection_reason: str | None = None


@dataclass(frozen=True)
class ManifestViolation:
    line: int
    code: str
    message: str
    sample_id: str | None = None


class InvalidArgs(ValueError):
    pass


_SAMPLE_FIELDS = {
    "sample_id", "label", "generator", "cond_mode", "duration", "fps",
    "width", "height", "uri", "source", "counterpart_id",
    "native_width", "native_height",
}


def _parse_sample_line(obj: dict, line_no: int) -> tuple[SampleRecord | None, list[ManifestViolation]]:
    violations: list[ManifestViolation] = []
    sid = obj.get("sample_id")

    def bad(code: str, msg: str):
        violations.append(ManifestViolation(line_no, code, msg, sid if isinstance(sid, str) else None))

    if not isinstance(sid, str) or not sid:
        bad("MissingSampleId", "sample_id must be a non-empty string")
        return None, violations

    label = Label.parse(str(obj.get("label", "")))
    if label is None:
        bad("BadLabel", f"label must be Fake or Real, got {obj.get('label')!r}")

    cond_raw = str(obj.get("cond_mode", "None"))
    try:
        cond = CondMode(cond_raw)
    except ValueError:
        bad("BadCondMode", f"cond_mode must be one of {[m.value for m in CondMode]}, got {cond_raw!r}")
        cond = None

    numbers = {}
    for name, code in (
        ("duration", "NonPositiveDuration"),
        ("fps", "NonPositiveFps"),
        ("width", "NonPositiveDimension"),
        ("height", "NonPositiveDimension"),
    ):
        try:
            v = float(obj[name])
        except (KeyError, TypeError, ValueError):
            bad("MissingField", f"{name} missing or non-numeric")
            v = None
        if v is not None and v <= 0:
            bad(code, f"{name} must be > 0, got {v}")
            v = None
        numbers[name] = v

    for name in ("generator", "uri", "source"):
        if not isinstance(obj.get(name), str):
            bad("MissingField", f"{name} missing or not a string")

    counterpart = obj.get("counterpart_id")
    if counterpart is not None and not isinstance(counterpart, str):
        bad("BadCounterpart", "counterpart_id must be a string when present")
        counterpart = None
    if counterpart == sid:
        bad("SelfCounterpart", "a sample cannot be its own counterpart")
        counterpart = None

    if violations:
        return None, violations

    extra = {k: v for k, v in obj.items() if k not in _SAMPLE_FIELDS}
    record = SampleRecord(
        sample_id=sid,
        label=label,
        generator=obj["generator"],
        cond_mode=cond,
        duration=numbers["duration"],
        fps=numbers["fps"],
        width=int(numbers["width"]),
        height=int(numbers["height"]),
        uri=obj["uri"],
        source=obj["source"],
        counterpart_id=counterpart,
        native_width=int(obj["native_width"]) if obj.get("native_width") is not None else None,
        native_height=int(obj["native_height"]) if obj.get("native_height") is not None else None,
        extra=extra,
    )
    return record, []


def _iter_lines(stream: IO[str] | Iterable[str]) -> Iterator[tuple[int, str]]:
    for i, line in enumerate(stream, start=1):
        if line.strip():
            yield i, line


def load_manifest(stream: IO[str] | Iterable[str]) -> tuple[list[SampleRecord], list[ManifestViolation]]:
    """Parse samples.jsonl; every line is handled independently.

    Returns valid records in input order plus per-line violations
    (including duplicate sample_ids). No input can abort the load.
    """
    records: list[SampleRecord] = []
    violations: list[ManifestViolation] = []
    seen: set[str] = set()
    for line_no, line in _iter_lines(stream):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            violations.append(ManifestViolation(line_no, "ParseError", f"invalid JSON: {exc}"))
            continue
        if not isinstance(obj, dict):
            violations.append(ManifestViolation(line_no, "ParseError", "line is not a JSON object"))
            continue
        record, errs = _parse_sample_line(obj, line_no)
        violations.extend(errs)
        if record is None:
            continue
        if record.sample_id in seen:
            violations.append(
                ManifestViolation(line_no, "DuplicateId", f"sample_id {record.sample_id!r} already defined", record.sample_id)
            )
            continue
        seen.add(record.sample_id)
        records.append(record)
    return records, violations


def load_annotations(stream: IO[str] | Iterable[str]) -> tuple[list[AnnotationRecord], list[ManifestViolation]]:
    """Parse annotations.jsonl with the same totality contract as samples."""
    tree = taxonomy.canonical_taxonomy()
    records: list[AnnotationRecord] = []
    violations: list[ManifestViolation] = []
    for line_no, line in _iter_lines(stream):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            violations.append(ManifestViolation(line_no, "ParseError", f"invalid JSON: {exc}"))
            continue
        sid = obj.get("sample_id") if isinstance(obj, dict) else None
        if not isinstance(sid, str) or not sid:
            violations.append(ManifestViolation(line_no, "MissingSampleId", "sample_id must be a non-empty string"))
            continue
        instances = []
        ok = True
        for idx, inst in enumerate(obj.get("instances", [])):
            try:
                path = taxonomy.TaxonomyPath(
                    inst["path"]["l1"], inst["path"].get("l2"), inst["path"].get("l3")
                )
                tree.validate_path(path)
                span = TimeSpan(float(inst["span"]["t_start"]), float(inst["span"]["t_end"]))
                bbox = BBox(
                    float(inst["bbox"]["x_min"]), float(inst["bbox"]["y_min"]),
                    float(inst["bbox"]["x_max"]), float(inst["bbox"]["y_max"]),
                )
                kind = EvidenceKind(inst["evidence_kind"])
                instances.append(AnnotationInstance(path, str(inst.get("explanation", "")), span, bbox, kind))
            except (KeyError, TypeError, ValueError, taxonomy.InvalidPath) as exc:
                violations.append(ManifestViolation(line_no, "BadInstance", f"instance {idx}: {exc}", sid))
                ok = False
        if ok:
            records.append(AnnotationRecord(sid, tuple(instances)))
    return records, violations


def pair_counterparts(records: Iterable[SampleRecord]) -> tuple[list[tuple[SampleRecord, SampleRecord]], list[ManifestViolation]]:
    """All symmetric fake<->real pairs, each reported once (fake first).

    Dangling links, one-way links, and same-label links come back as
    violations instead of pairs.
    """
    by_id = {r.sample_id: r for r in records}
    pairs: list[tuple[SampleRecord, SampleRecord]] = []
    violations: list[ManifestViolation] = []
    emitted: set[frozenset[str]] = set()
    for rec in by_id.values():
        if rec.counterpart_id is None:
            continue
        other = by_id.get(rec.counterpart_id)
        if other is None:
            violations.append(ManifestViolation(0, "DanglingCounterpart", f"{rec.sample_id} links missing {rec.counterpart_id}", rec.sample_id))
            continue
        if other.counterpart_id != rec.sample_id:
            violations.append(ManifestViolation(0, "AsymmetricLink", f"{rec.sample_id} links {other.sample_id} but not vice versa", rec.sample_id))
            continue
        if other.label == rec.label:
            key = frozenset((rec.sample_id, other.sample_id))
            if key not in emitted:
                emitted.add(key)
                violations.append(ManifestViolation(0, "CrossLabelViolation", f"{rec.sample_id} and {other.sample_id} share label {rec.label.value}", rec.sample_id))
            continue
        key = frozenset((rec.sample_id, other.sample_id))
        if key in emitted:
            continue
        emitted.add(key)
        fake, real = (rec, other) if rec.label is Label.FAKE else (other, rec)
        pairs.append((fake, real))
    return pairs, violations


def uniform_frame_indices(total_frames: int, n: int) -> list[int]:
    """floor(i * T / n) for i in 0..n-1: n indices, all < T, non-decreasing.

    Repeats are expected when n > T; the sequence is pure index arithmetic
    and independent of fps.
    """
    if total_frames < 1 or n < 1:
        raise InvalidArgs(f"total_frames and n must be >= 1, got ({total_frames}, {n})")
    return [i * total_frames // n for i in range(n)]


def frame_timestamps(total_frames: int, n: int, fps: float) -> list[float]:
    if fps <= 0:
        raise InvalidArgs(f"fps must be > 0, got {fps}")
    return [idx / fps for idx in uniform_frame_indices(total_frames, n)]


def stats(records: Iterable[SampleRecord], annotations: Iterable[AnnotationRecord] = ()) -> dict:
    """Distribution summary: generators, conditioning, durations, taxonomy."""
    records = list(records)
    by_generator: dict[str, int] = {}
    by_cond: dict[str, int] = {}
    by_label: dict[str, int] = {}
    duration_hist: dict[int, int] = {}
    fps_hist: dict[int, int] = {}
    for r in records:
        by_generator[r.generator] = by_generator.get(r.generator, 0) + 1
        by_cond[r.cond_mode.value] = by_cond.get(r.cond_mode.value, 0) + 1
        by_label[r.label.value] = by_label.get(r.label.value, 0) + 1
        duration_hist[int(r.duration)] = duration_hist.get(int(r.duration), 0) + 1
        fps_hist[int(round(r.fps))] = fps_hist.get(int(round(r.fps)), 0) + 1
    paths = [inst.path for ann in annotations for inst in ann.instances]
    return {
        "n_samples": len(records),
        "by_generator": by_generator,
        "by_cond_mode": by_cond,
        "by_label": by_label,
        "duration_hist_s": dict(sorted(duration_hist.items())),
        "fps_hist": dict(sorted(fps_hist.items())),
        "n_annotation_instances": len(paths),
        "n_partial_paths": sum(1 for p in paths if not p.is_full),
        "taxonomy_distribution": taxonomy.distribution_report(paths),
    }


def dump_sample(record: SampleRecord) -> str:
    """One JSONL line, field names exactly as the schema declares them."""
    obj = {
        "sample_id": record.sample_id,
        "label": record.label.value,
        "generator": record.generator,
        "cond_mode": record.cond_mode.value,
        "duration": record.duration,
        "fps": record.fps,
        "width": record.width,
        "height": record.height,
        "uri": record.uri,
        "source": record.source,
    }
    if record.counterpart_id is not None:
        obj["counterpart_id"] = record.counterpart_id
    if record.native_width is not None:
        obj["native_width"] = record.native_width
    if record.native_height is not None:
        obj["native_height"] = record.native_height
    obj.update(record.extra)
    return json.dumps(obj, sort_keys=False)
