"""Pure-Python pixel kernels; the import-time fallback backend.

Every function here is the arithmetic twin of the compiled versions in
_kernels_c.pyx: same operation order, same double-precision expressions,
same libm calls, same splitmix64 noise stream. The two backends must
produce bit-identical bytes — the test suite enforces it — so any change
here must be mirrored there.
"""

from __future__ import annotations

from math import cos, floor, log, sqrt

BACKEND = "python"

_MASK64 = (1 << 64) - 1
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53
_TWO_PI = 6.283185307179586


def gaussian_noise(src: bytes, sigma: float, seed: int) -> bytes:
    """Add N(0, sigma^2) per channel sample from a seeded stream, clamp."""
    out = bytearray(len(src))
    state = seed & _MASK64
    for i in range(len(src)):
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z = z ^ (z >> 31)
        u1 = ((z >> 11) + 1) * _INV_2_53
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z = z ^ (z >> 31)
        u2 = ((z >> 11) + 1) * _INV_2_53
        g = sqrt(-2.0 * log(u1)) * cos(_TWO_PI * u2)
        v = floor(src[i] + g * sigma + 0.5)
        if v < 0:
            v = 0
        elif v > 255:
            v = 255
        out[i] = int(v)
    return bytes(out)


def light_scale(src: bytes, scale: float) -> bytes:
    """Scale BT.601 luminance by `scale`: c' = c + (scale-1)*y, clamp."""
    out = bytearray(len(src))
    k = scale - 1.0
    for p in range(0, len(src), 3):
        r = src[p]
        g = src[p + 1]
        b = src[p + 2]
        y = 0.299 * r + 0.587 * g + 0.114 * b
        delta = k * y
        for c in range(3):
            v = floor(src[p + c] + delta + 0.5)
            if v < 0:
                v = 0
            elif v > 255:
                v = 255
            out[p + c] = int(v)
    return bytes(out)


def saturation_scale(src: bytes, scale: float) -> bytes:
    """Scale chroma toward/away from BT.601 luminance: c' = y + scale*(c-y)."""
    out = bytearray(len(src))
    for p in range(0, len(src), 3):
        r = src[p]
        g = src[p + 1]
        b = src[p + 2]
        y = 0.299 * r + 0.587 * g + 0.114 * b
        for c in range(3):
            v = floor(y + scale * (src[p + c] - y) + 0.5)
            if v < 0:
                v = 0
            elif v > 255:
                v = 255
            out[p + c] = int(v)
    return bytes(out)


def zoom_bilinear(src: bytes, width: int, height: int, crop_w: int, crop_h: int, off_x: int, off_y: int) -> bytes:
    """Resample the (off, crop) window back to full size, half-pixel centers."""
    out = bytearray(len(src))
    max_x = crop_w - 1
    max_y = crop_h - 1
    for dy in range(height):
        sy = (dy + 0.5) * crop_h / height - 0.5
        if sy < 0.0:
            sy = 0.0
        elif sy > max_y:
            sy = float(max_y)
        iy0 = int(floor(sy))
        fy = sy - iy0
        iy1 = iy0 + 1 if iy0 + 1 <= max_y else max_y
        row0 = (off_y + iy0) * width
        row1 = (off_y + iy1) * width
        for dx in range(width):
            sx = (dx + 0.5) * crop_w / width - 0.5
            if sx < 0.0:
                sx = 0.0
            elif sx > max_x:
                sx = float(max_x)
            ix0 = int(floor(sx))
            fx = sx - ix0
            ix1 = ix0 + 1 if ix0 + 1 <= max_x else max_x
            p00 = (row0 + off_x + ix0) * 3
            p01 = (row0 + off_x + ix1) * 3
            p10 = (row1 + off_x + ix0) * 3
            p11 = (row1 + off_x + ix1) * 3
            o = (dy * width + dx) * 3
            for c in range(3):
                top = (1.0 - fx) * src[p00 + c] + fx * src[p01 + c]
                bot = (1.0 - fx) * src[p10 + c] + fx * src[p11 + c]
                v = floor((1.0 - fy) * top + fy * bot + 0.5)
                if v < 0:
                    v = 0
                elif v > 255:
                    v = 255
                out[o + c] = int(v)
    return bytes(out)
