"""Automated dataset-construction requests against an external MLLM.

Two request families: a semantic-consistency filter that asks for a
Pass/Fail verdict on a generated/real video pair, and a chain-of-thought
expansion that turns terse human annotations into step-by-step reasoning
strings (one discovering artifacts in the generated video, one clearing
the matching regions in the real one). Builders are deterministic;
transport is an adapter concern behind a one-method client contract.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Callable, Iterable, Protocol

from . import grammar, taxonomy
from .manifest import AnnotationInstance, AnnotationRecord, CotRecord, EvidenceKind

# Acceptance tolerances for embedded localizations vs the source annotation.
SPAN_TOLERANCE_S = 0.5
BBOX_TOLERANCE_PX = 10.0


class ExpectedSchema(str, Enum):
    VERDICT = "Verdict"
    COT_PAIR = "CotPair"


@dataclass(frozen=True)
class FrameRef:
    uri: str
    timestamp: float


@dataclass(frozen=True)
class TextPart:
    text: str


@dataclass(frozen=True)
class FramePart:
    ref: FrameRef


@dataclass(frozen=True)
class MllmRequest:
    system_text: str
    user_parts: tuple[TextPart | FramePart, ...]
    expected_schema: ExpectedSchema

    def to_json_dict(self) -> dict:
        parts = []
        for p in self.user_parts:
            if isinstance(p, TextPart):
                parts.append({"type": "text", "text": p.text})
            else:
                parts.append({"type": "frame", "uri": p.ref.uri, "timestamp": p.ref.timestamp})
        return {
            "system": self.system_text,
            "user_parts": parts,
            "expected_schema": self.expected_schema.value,
        }


@dataclass(frozen=True)
class CotPair:
    fake_cot: str
    real_cot: str


class EmptyFrames(ValueError):
    pass


class UnpairedAnnotation(ValueError):
    pass


def _frame_parts(frames: Iterable[FrameRef]) -> list[TextPart | FramePart]:
    parts: list[TextPart | FramePart] = []
    for ref in frames:
        parts.append(TextPart(f"[T={ref.timestamp:.2f}s]"))
        parts.append(FramePart(ref))
    return parts


_FILTER_SYSTEM = (
    "You compare a generated video against the real video it was conditioned on. "
    "Judge whether the two depict the same scene, subjects, and action. "
    'Reply with a JSON object {"verdict": "Pass" | "Fail", "reason": "..."} and nothing else.'
)


def build_consistency_filter_request(
    real_caption: str,
    fake_frames: list[FrameRef],
    real_frames: list[FrameRef],
) -> MllmRequest:
    """Pass/Fail semantic-consistency check for a fake/real pair."""
    if not fake_frames or not real_frames:
        raise EmptyFrames("both frame lists must be non-empty")
    parts: list[TextPart | FramePart] = [
        TextPart(f"Reference caption of the real video: {real_caption}"),
        TextPart("Frames of the generated video:"),
        *_frame_parts(fake_frames),
        TextPart("Frames of the real video:"),
        *_frame_parts(real_frames),
        TextPart(
            "Does the generated video preserve the semantics of the real video "
            "(same scene, subjects, and action)? Answer Pass or Fail with a reason."
        ),
    ]
    return MllmRequest(_FILTER_SYSTEM, tuple(parts), ExpectedSchema.VERDICT)


def _load_exemplars() -> dict[str, str]:
    with resources.files("vidspect.data").joinpath("cot_exemplars.json").open("r", encoding="utf-8") as fh:
        return json.load(fh)


_COT_SYSTEM = (
    "You expand terse human artifact annotations on a generated/real video pair "
    "into two detailed reasoning traces. Work through five stages: observe the "
    "frames, understand the annotated evidence, draft the reasoning, review it "
    "against the frames, then conclude. Ground every claim in what the frames "
    "show. Cite each artifact as "
    "<type>[artifact type]</type> in <t>[t_start, t_end]</t> at "
    "<bbox>[x_min, y_min, x_max, y_max]</bbox> in the generated-video trace, and "
    "inspect the matching region as <t>[t_start, t_end]</t> at "
    "<bbox>[x_min, y_min, x_max, y_max]</bbox> in the real-video trace. "
    'Output exactly one JSON object: {"fake_cot_annotation": "...", '
    '"real_cot_annotation": "..."}.'
)


def _instance_payload(inst: AnnotationInstance) -> str:
    tree = taxonomy.canonical_taxonomy()
    name = tree.node(inst.path.deepest).display_name
    return (
        f"- Type: {name}; Explanation: {inst.explanation}; "
        f"Timestamps: [{inst.span.t_start:.2f}, {inst.span.t_end:.2f}]; "
        f"Bounding box: [{inst.bbox.x_min:g}, {inst.bbox.y_min:g}, {inst.bbox.x_max:g}, {inst.bbox.y_max:g}]"
    )


def build_cot_request(
    fake_ann: AnnotationRecord,
    real_evid: AnnotationRecord | None,
    fake_frames: list[FrameRef],
    real_frames: list[FrameRef],
) -> MllmRequest:
    """Reasoning-expansion request for one annotated fake/real pair."""
    if real_evid is None:
        raise UnpairedAnnotation(f"{fake_ann.sample_id} has no paired real-evidence record")
    if not fake_frames or not real_frames:
        raise EmptyFrames("both frame lists must be non-empty")

    exemplars = _load_exemplars()
    tree = taxonomy.canonical_taxonomy()
    l2_codes = []
    for inst in fake_ann.instances:
        l2 = inst.path.l2 or inst.path.l1
        if l2 not in l2_codes:
            l2_codes.append(l2)
    exemplar_parts = []
    for code in l2_codes:
        if code in exemplars:
            name = tree.node(code).display_name
            exemplar_parts.append(TextPart(f"Example for {name}:\n{exemplars[code]}"))

    parts: list[TextPart | FramePart] = [
        TextPart("Annotated artifacts in the generated video:"),
        TextPart("\n".join(_instance_payload(i) for i in fake_ann.instances) or "- none"),
        TextPart("Matching real-video evidence to clear:"),
        TextPart("\n".join(_instance_payload(i) for i in real_evid.instances) or "- none"),
        *exemplar_parts,
        TextPart("Frames of the generated video:"),
        *_frame_parts(fake_frames),
        TextPart("Frames of the real video:"),
        *_frame_parts(real_frames),
        TextPart(
            "Produce the two reasoning traces now, covering every annotated artifact "
            "type with its time span and bounding box."
        ),
    ]
    return MllmRequest(_COT_SYSTEM, tuple(parts), ExpectedSchema.COT_PAIR)


def _covers_instance(blocks: list[grammar.EvidenceBlock], inst: AnnotationInstance) -> tuple[bool, bool]:
    """(type mentioned, type mentioned within span/bbox tolerance)."""
    tree = taxonomy.canonical_taxonomy()
    want = inst.path.deepest
    type_seen = False
    for b in blocks:
        try:
            got = tree.resolve_label(b.type_label or "").deepest
        except taxonomy.UnknownLabel:
            continue
        if got != want:
            continue
        type_seen = True
        if abs(b.span.t_start - inst.span.t_start) > SPAN_TOLERANCE_S:
            continue
        if abs(b.span.t_end - inst.span.t_end) > SPAN_TOLERANCE_S:
            continue
        deltas = (
            abs(b.bbox.x_min - inst.bbox.x_min),
            abs(b.bbox.y_min - inst.bbox.y_min),
            abs(b.bbox.x_max - inst.bbox.x_max),
            abs(b.bbox.y_max - inst.bbox.y_max),
        )
        if max(deltas) > BBOX_TOLERANCE_PX:
            continue
        return True, True
    return type_seen, False


def parse_and_filter_cot(raw: str, source_ann: AnnotationRecord, source_model: str = "") -> CotRecord:
    """Parse a CoT response envelope and accept only annotation-faithful pairs.

    Total: malformed responses come back with accepted=False and a reason,
    never an exception.
    """

    def reject(reason: str) -> CotRecord:
        return CotRecord(source_ann.sample_id, "", "", source_model, False, reason)

    try:
        obj = json.loads(raw)
    except json.JSONDecodeError:
        return reject("ParseFailure")
    if not isinstance(obj, dict):
        return reject("ParseFailure")
    fake_cot = obj.get("fake_cot_annotation")
    real_cot = obj.get("real_cot_annotation")
    if not isinstance(fake_cot, str) or not isinstance(real_cot, str):
        return reject("MissingCotField")
    if not fake_cot.strip() or not real_cot.strip():
        return reject("EmptyCot")

    fake_blocks = [
        b for b in grammar.parse_response(f"<thinking>{fake_cot}</thinking><answer>Fake</answer>").blocks
        if b.kind is grammar.BlockKind.FAKE_EVIDENCE
    ]
    if grammar.count_check_blocks(real_cot, grammar.Label.REAL) < 1:
        return reject("MissingInspectionBlock")

    fake_instances = [i for i in source_ann.instances if i.evidence_kind is EvidenceKind.FAKE_EVIDENCE]
    for inst in fake_instances:
        type_seen, within_tolerance = _covers_instance(fake_blocks, inst)
        if not type_seen:
            return reject("MissingArtifactType")
        if not within_tolerance:
            return reject("EvidenceMismatch")
    if len(fake_blocks) < len(fake_instances):
        return reject("MissingArtifactType")

    return CotRecord(source_ann.sample_id, fake_cot, real_cot, source_model, True, None)


class MllmClient(Protocol):
    """Transport contract: one blocking call, raw text back."""

    def send(self, request: MllmRequest) -> str: ...


@dataclass
class RetryingClient:
    """Wraps any client with bounded retries and exponential backoff."""

    inner: MllmClient
    max_retries: int = 3
    base_delay_s: float = 1.0
    transcript_path: str | None = None
    _sleep: Callable[[float], None] = field(default=time.sleep, repr=False)

    def send(self, request: MllmRequest) -> str:
        last: Exception | None = None
        for attempt in range(self.max_retries):
            try:
                response = self.inner.send(request)
                self._record(request, response, None)
                return response
            except Exception as exc:  # noqa: BLE001 - transport errors are adapter-defined
                last = exc
                self._record(request, None, str(exc))
                if attempt < self.max_retries - 1:
                    self._sleep(self.base_delay_s * (2**attempt))
        raise RuntimeError(f"request failed after {self.max_retries} attempts: {last}")

    def _record(self, request: MllmRequest, response: str | None, error: str | None) -> None:
        if self.transcript_path is None:
            return
        entry = {"request": request.to_json_dict(), "response": response, "error": error, "ts": time.time()}
        with open(self.transcript_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry) + "\n")
