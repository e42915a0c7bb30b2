"""Deterministic per-frame degradations for robustness studies.

Seven conditions beyond the original: JPEG compression, zoom
(center-crop + resize back), seeded gaussian noise, and luminance /
saturation scaling in both directions. Every transform preserves frame
dimensions, clamps to [0, 255], and is a pure function of (frame, spec)
including the noise seed.

The pixel kernels are the hot path: a compiled extension is used when
built, with a bit-identical pure-Python fallback selected at import.
Set VIDSPECT_PURE_PYTHON=1 to force the fallback; see
benchmarks/bench_kernels.py for a speed comparison.
"""

from __future__ import annotations

import hashlib
import io
import math
import os
from dataclasses import dataclass, replace

from PIL import Image

if os.environ.get("VIDSPECT_PURE_PYTHON"):
    from . import _kernels_py as _kernels
else:
    try:
        from . import _kernels_c as _kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _kernels

KERNEL_BACKEND: str = _kernels.BACKEND


class InvalidSpec(ValueError):
    pass


@dataclass(frozen=True)
class Frame:
    """8-bit RGB frame as a flat buffer of width*height*3 bytes."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("frame dimensions must be positive")
        if len(self.pixels) != self.width * self.height * 3:
            raise ValueError(
                f"buffer length {len(self.pixels)} != {self.width}x{self.height}x3"
            )

    @classmethod
    def from_image(cls, image: Image.Image) -> "Frame":
        rgb = image.convert("RGB")
        return cls(rgb.width, rgb.height, rgb.tobytes())

    def to_image(self) -> Image.Image:
        return Image.frombytes("RGB", (self.width, self.height), self.pixels)


# Table-column order for the seven non-origin conditions.
CONDITIONS = (
    "compression",
    "transformation",
    "gaussian_noise",
    "light_down",
    "light_up",
    "color_down",
    "color_up",
)

DEFAULT_JPEG_QUALITY = 50
DEFAULT_ZOOM_FACTOR = 1.2
DEFAULT_NOISE_SIGMA = 10.0
DEFAULT_DOWN_SCALE = 0.7
DEFAULT_UP_SCALE = 1.3


@dataclass(frozen=True)
class DegradationSpec:
    kind: str  # jpeg_compression | zoom | gaussian_noise | light | color
    quality: int | None = None
    factor: float | None = None
    sigma: float | None = None
    seed: int | None = None
    scale: float | None = None

    def validate(self) -> None:
        if self.kind == "jpeg_compression":
            if self.quality is None or not 1 <= self.quality <= 100:
                raise InvalidSpec(f"jpeg quality must be in [1, 100], got {self.quality}")
        elif self.kind == "zoom":
            if self.factor is None or self.factor <= 1:
                raise InvalidSpec(f"zoom factor must be > 1, got {self.factor}")
        elif self.kind == "gaussian_noise":
            if self.sigma is None or self.sigma < 0:
                raise InvalidSpec(f"noise sigma must be >= 0, got {self.sigma}")
            if self.seed is None:
                raise InvalidSpec("gaussian_noise requires a seed")
        elif self.kind in ("light", "color"):
            if self.scale is None or self.scale <= 0:
                raise InvalidSpec(f"{self.kind} scale must be > 0, got {self.scale}")
        else:
            raise InvalidSpec(f"unknown degradation kind {self.kind!r}")


def jpeg_compression(quality: int = DEFAULT_JPEG_QUALITY) -> DegradationSpec:
    return DegradationSpec("jpeg_compression", quality=quality)


def zoom(factor: float = DEFAULT_ZOOM_FACTOR) -> DegradationSpec:
    return DegradationSpec("zoom", factor=factor)


def gaussian_noise(sigma: float = DEFAULT_NOISE_SIGMA, seed: int = 0) -> DegradationSpec:
    return DegradationSpec("gaussian_noise", sigma=sigma, seed=seed)


def light(scale: float) -> DegradationSpec:
    return DegradationSpec("light", scale=scale)


def color(scale: float) -> DegradationSpec:
    return DegradationSpec("color", scale=scale)


def derive_seed(sample_id: str, frame_index: int = 0) -> int:
    """Stable 64-bit seed from (sample_id, frame index)."""
    digest = hashlib.sha256(f"{sample_id}:{frame_index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def with_frame_seed(spec: DegradationSpec, sample_id: str, frame_index: int) -> DegradationSpec:
    if spec.kind != "gaussian_noise":
        return spec
    return replace(spec, seed=derive_seed(sample_id, frame_index))


def degrade_suite(sample_id: str) -> list[DegradationSpec]:
    """The seven non-origin conditions with default parameters, in table order."""
    return [
        jpeg_compression(),
        zoom(),
        gaussian_noise(seed=derive_seed(sample_id)),
        light(DEFAULT_DOWN_SCALE),
        light(DEFAULT_UP_SCALE),
        color(DEFAULT_DOWN_SCALE),
        color(DEFAULT_UP_SCALE),
    ]


def _apply_jpeg(frame: Frame, quality: int) -> Frame:
    buf = io.BytesIO()
    # 4:4:4 pinned so quality is the only knob and q=100 stays near-lossless
    frame.to_image().save(buf, format="JPEG", quality=quality, subsampling=0)
    buf.seek(0)
    return Frame.from_image(Image.open(buf))


def _apply_zoom(frame: Frame, factor: float) -> Frame:
    crop_w = max(1, int(math.floor(frame.width / factor + 0.5)))
    crop_h = max(1, int(math.floor(frame.height / factor + 0.5)))
    off_x = (frame.width - crop_w) // 2
    off_y = (frame.height - crop_h) // 2
    pixels = _kernels.zoom_bilinear(frame.pixels, frame.width, frame.height, crop_w, crop_h, off_x, off_y)
    return Frame(frame.width, frame.height, pixels)


def apply(frame: Frame, spec: DegradationSpec) -> Frame:
    """Apply one degradation; output dimensions always equal input."""
    spec.validate()
    if spec.kind == "jpeg_compression":
        return _apply_jpeg(frame, spec.quality)
    if spec.kind == "zoom":
        return _apply_zoom(frame, spec.factor)
    if spec.kind == "gaussian_noise":
        return Frame(frame.width, frame.height, _kernels.gaussian_noise(frame.pixels, spec.sigma, spec.seed))
    if spec.kind == "light":
        return Frame(frame.width, frame.height, _kernels.light_scale(frame.pixels, spec.scale))
    return Frame(frame.width, frame.height, _kernels.saturation_scale(frame.pixels, spec.scale))


def suite_by_condition(sample_id: str) -> dict[str, DegradationSpec]:
    return dict(zip(CONDITIONS, degrade_suite(sample_id)))
