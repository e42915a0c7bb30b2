"""Shared builders for the test suite."""

from __future__ import annotations

from vidspect.grammar import Label
from vidspect.manifest import CondMode, SampleRecord

FAKE_BLOCK = "<type>Shape Distortion</type> in <t>[1.00, 2.00]</t> at <bbox>[10, 20, 110, 220]</bbox>"
REAL_BLOCK = "<t>[1.00, 2.00]</t> at <bbox>[10, 20, 110, 220]</bbox>"


def completion(pred: str | None, n_blocks: int = 0, format_ok: bool = True) -> str:
    """A completion realizing (pred, n matching blocks, format adherence)."""
    if pred == "Fake":
        blocks = " ".join([FAKE_BLOCK] * n_blocks)
    elif pred == "Real":
        blocks = " ".join([REAL_BLOCK] * n_blocks)
    else:
        blocks = " ".join([FAKE_BLOCK] * n_blocks)
    thinking = f"inspecting the clip {blocks}".strip()
    if pred is None:
        return f"<thinking>{thinking}</thinking> no verdict given"
    body = f"<thinking>{thinking}</thinking><answer>{pred}</answer>"
    if not format_ok:
        body += " trailing commentary breaks the envelope"
    return body


def make_sample(
    sample_id: str,
    label: str = "Fake",
    generator: str = "genA",
    cond_mode: str = "T2V",
    duration: float = 5.0,
    fps: float = 32.0,
    width: int = 455,
    height: int = 256,
    counterpart_id: str | None = None,
    **extra,
) -> SampleRecord:
    return SampleRecord(
        sample_id=sample_id,
        label=Label.parse(label),
        generator=generator,
        cond_mode=CondMode(cond_mode),
        duration=duration,
        fps=fps,
        width=width,
        height=height,
        uri=f"videos/{sample_id}.mp4",
        source="synthetic",
        counterpart_id=counterpart_id,
        extra=extra,
    )


def sample_json_line(sample_id: str, label: str = "Fake", **overrides) -> dict:
    obj = {
        "sample_id": sample_id,
        "label": label,
        "generator": "genA",
        "cond_mode": "T2V",
        "duration": 5.0,
        "fps": 32.0,
        "width": 455,
        "height": 256,
        "uri": f"videos/{sample_id}.mp4",
        "source": "synthetic",
    }
    obj.update(overrides)
    return obj
