"""Structured-response grammar: parsing, block counting, target serialization.

Completions follow an outer envelope — a thinking section then a one-word
verdict:

    <thinking>...</thinking><answer>Fake</answer>

Inside the thinking text, fake verdicts cite evidence blocks

    <type>Shape Distortion</type> in <t>[1.00, 2.50]</t> at <bbox>[10, 20, 110, 220]</bbox>

while real verdicts cite inspection blocks with the same temporal-spatial
tags but no type:

    <t>[1.00, 2.50]</t> at <bbox>[10, 20, 110, 220]</bbox>

Parsing is total: arbitrary bytes never raise, all failure modes are
encoded in flags. See GRAMMAR.md for the canonical serialization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from . import taxonomy


class Label(str, Enum):
    FAKE = "Fake"
    REAL = "Real"

    @classmethod
    def parse(cls, text: str) -> "Label | None":
        t = text.strip().lower()
        if t == "fake":
            return cls.FAKE
        if t == "real":
            return cls.REAL
        return None


class BlockKind(str, Enum):
    FAKE_EVIDENCE = "FakeEvidence"
    REAL_INSPECTION = "RealInspection"


@dataclass(frozen=True)
class TimeSpan:
    t_start: float
    t_end: float


@dataclass(frozen=True)
class BBox:
    x_min: float
    y_min: float
    x_max: float
    y_max: float


@dataclass(frozen=True)
class EvidenceBlock:
    kind: BlockKind
    span: TimeSpan
    bbox: BBox
    type_label: str | None = None
    raw_text: str = ""


@dataclass(frozen=True)
class ParsedResponse:
    thinking: str
    answer: Label | None
    blocks: tuple[EvidenceBlock, ...]
    outer_format_ok: bool
    n_check: int


class KindMismatch(ValueError):
    """A block's kind contradicts the label being serialized."""


# Numeric token: any decimal float format, sign and exponent tolerated
# (semantic range checks live in validate_evidence, not in the syntax).
_NUM = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_T = rf"<t>\s*\[?\s*({_NUM})\s*,\s*({_NUM})\s*\]?\s*</t>"
_BBOX = rf"<bbox>\s*\[?\s*({_NUM})\s*,\s*({_NUM})\s*,\s*({_NUM})\s*,\s*({_NUM})\s*\]?\s*</bbox>"

# One scan finds both shapes; a leading <type>...</type> prefix, when
# present, is consumed with its t/bbox tail, so the tail of a fake block
# can never be double-counted as an inspection block.
_BLOCK = re.compile(
    rf"(?:<type>\s*([^<>]+?)\s*</type>\s*in\s*)?{_T}\s*at\s*{_BBOX}",
    re.DOTALL,
)

_ANSWER_TAG = re.compile(r"<answer>\s*(fake|real)\s*</answer>", re.IGNORECASE | re.DOTALL)
_THINKING_TAG = re.compile(r"<thinking>(.*?)</thinking>", re.DOTALL)
_OUTER = re.compile(
    r"\s*<thinking>(.*?)</thinking>\s*<answer>\s*(fake|real)\s*</answer>\s*",
    re.IGNORECASE | re.DOTALL,
)


def _scan_blocks(text: str) -> list[EvidenceBlock]:
    blocks = []
    for m in _BLOCK.finditer(text):
        type_label = m.group(1)
        try:
            span = TimeSpan(float(m.group(2)), float(m.group(3)))
            bbox = BBox(*(float(m.group(i)) for i in range(4, 8)))
        except (ValueError, OverflowError):  # pragma: no cover - regex precludes
            continue
        if type_label is not None:
            blocks.append(EvidenceBlock(BlockKind.FAKE_EVIDENCE, span, bbox, type_label, m.group(0)))
        else:
            blocks.append(EvidenceBlock(BlockKind.REAL_INSPECTION, span, bbox, None, m.group(0)))
    return blocks


def _kind_for(pred: Label) -> BlockKind:
    return BlockKind.FAKE_EVIDENCE if pred is Label.FAKE else BlockKind.REAL_INSPECTION


def parse_response(text: str) -> ParsedResponse:
    """Decompose a completion; never raises on any input string.

    outer_format_ok is true iff the whole completion is exactly one
    thinking section followed by one valid answer section (whitespace
    around and between them tolerated). With multiple answer tags the
    format is broken but the answer is still taken from the first
    well-formed tag, so the accuracy reward can apply while the check
    reward stays gated off.
    """
    answers = _ANSWER_TAG.findall(text)
    answer = Label.parse(answers[0]) if answers else None

    outer = _OUTER.fullmatch(text)
    outer_format_ok = outer is not None and len(answers) == 1

    if outer is not None:
        thinking = outer.group(1)
    else:
        think_match = _THINKING_TAG.search(text)
        thinking = think_match.group(1) if think_match else ""

    blocks = tuple(_scan_blocks(text))
    n_check = sum(1 for b in blocks if answer is not None and b.kind == _kind_for(answer))
    return ParsedResponse(thinking, answer, blocks, outer_format_ok, n_check)


def count_check_blocks(text: str, pred: Label) -> int:
    """Number of well-formed blocks matching the pattern pred selects.

    Counting is purely syntactic: unknown type labels, inverted spans, and
    out-of-frame boxes still count. A fake-evidence block never matches
    the inspection pattern (and vice versa).
    """
    kind = _kind_for(pred)
    return sum(1 for b in _scan_blocks(text) if b.kind == kind)


def _fmt_coord(v: float) -> str:
    # integers render bare, everything else at minimal decimals
    if float(v) == int(v):
        return str(int(v))
    return repr(float(v))


def serialize_block(block: EvidenceBlock) -> str:
    body = (
        f"<t>[{block.span.t_start:.2f}, {block.span.t_end:.2f}]</t> at "
        f"<bbox>[{_fmt_coord(block.bbox.x_min)}, {_fmt_coord(block.bbox.y_min)}, "
        f"{_fmt_coord(block.bbox.x_max)}, {_fmt_coord(block.bbox.y_max)}]</bbox>"
    )
    if block.kind == BlockKind.FAKE_EVIDENCE:
        return f"<type>{block.type_label}</type> in {body}"
    return body


def serialize_target(label: Label, thinking: str, blocks: list[EvidenceBlock]) -> str:
    """Build a training-target string for (label, thinking, blocks).

    Blocks are appended to the thinking prose with single spaces;
    parse_response on the result recovers the label, the block count, and
    every span/bbox at the serialized precision.
    """
    required = _kind_for(label)
    for b in blocks:
        if b.kind != required:
            raise KindMismatch(f"{b.kind.value} block under label {label.value}")
    parts = [thinking] if thinking else []
    parts.extend(serialize_block(b) for b in blocks)
    body = " ".join(parts)
    return f"<thinking>{body}</thinking><answer>{label.value}</answer>"


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


def validate_evidence(block: EvidenceBlock, meta) -> list[Violation]:
    """Semantic checks a syntactic count never performs; reports, never mutates.

    `meta` is any record carrying duration, width, and height (a manifest
    SampleRecord qualifies).
    """
    duration, width, height = meta.duration, meta.width, meta.height
    out: list[Violation] = []
    s = block.span
    if s.t_start < 0 or s.t_end > duration:
        out.append(Violation("SpanOutOfRange", f"span [{s.t_start}, {s.t_end}] outside [0, {duration}]"))
    if s.t_end < s.t_start:
        out.append(Violation("DegenerateSpan", f"t_end {s.t_end} precedes t_start {s.t_start}"))
    b = block.bbox
    if b.x_min < 0 or b.y_min < 0 or b.x_max > width or b.y_max > height:
        out.append(Violation("BBoxOutOfFrame", f"bbox outside [0,{width}]x[0,{height}]"))
    if b.x_max <= b.x_min or b.y_max <= b.y_min:
        out.append(Violation("DegenerateBBox", "bbox has no area"))
    if block.kind == BlockKind.FAKE_EVIDENCE:
        try:
            taxonomy.resolve_label(block.type_label or "")
        except taxonomy.UnknownLabel:
            out.append(Violation("UnknownTaxonomyLabel", f"type {block.type_label!r} not in taxonomy"))
    return out
