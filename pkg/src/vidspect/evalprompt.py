"""Inference prompt construction: timestamped frames plus the output contract."""

from __future__ import annotations

from dataclasses import dataclass

from . import taxonomy
from .manifest import InvalidArgs, SampleRecord, uniform_frame_indices

DEFAULT_N_FRAMES = 16


@dataclass(frozen=True)
class InferencePrompt:
    system_text: str
    # interleaved parts: {"type": "text", "text": ...} | {"type": "frame", "uri": ..., "timestamp": ...}
    user_parts: tuple[dict, ...]
    frame_indices: tuple[int, ...]


def _system_text() -> str:
    names = ", ".join(taxonomy.label_names(taxonomy.Level.L3))
    return (
        "You are a video authenticity analyst. Inspect the provided frames, "
        "sampled uniformly from one video with their timestamps, and decide "
        "whether the video is AI-generated or real.\n"
        "Respond exactly as:\n"
        "<thinking>[your inspection process]</thinking><answer>Fake</answer> or "
        "<thinking>[your inspection process]</thinking><answer>Real</answer>\n"
        "If you answer Fake, cite each artifact inside the thinking section as "
        "<type>[artifact type]</type> in <t>[t_start, t_end]</t> at "
        "<bbox>[x_min, y_min, x_max, y_max]</bbox>, where the artifact type is "
        f"one of: {names}.\n"
        "If you answer Real, record each region you inspected and cleared as "
        "<t>[t_start, t_end]</t> at <bbox>[x_min, y_min, x_max, y_max]</bbox>. "
        "Times are seconds; boxes are pixels in the provided frames."
    )


def build_inference_prompt(sample: SampleRecord, n_frames: int = DEFAULT_N_FRAMES) -> InferencePrompt:
    """Prompt with n uniformly sampled, timestamped frame references."""
    if sample.duration <= 0 or sample.fps <= 0:
        raise InvalidArgs(f"sample {sample.sample_id!r} has non-positive duration or fps")
    if n_frames < 1:
        raise InvalidArgs(f"n_frames must be >= 1, got {n_frames}")
    indices = uniform_frame_indices(sample.total_frames, n_frames)
    parts: list[dict] = []
    for idx in indices:
        ts = idx / sample.fps
        parts.append({"type": "text", "text": f"[T={ts:.2f}s]"})
        parts.append({"type": "frame", "uri": f"{sample.uri}#frame={idx}", "timestamp": ts})
    parts.append({"type": "text", "text": "Is this video AI-generated (Fake) or real (Real)?"})
    return InferencePrompt(_system_text(), tuple(parts), tuple(indices))
