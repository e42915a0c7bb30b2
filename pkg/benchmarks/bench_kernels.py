#!/usr/bin/env python3
"""Benchmark the compiled degradation kernels against the pure-Python twins.

Run: python3 benchmarks/bench_kernels.py [--size 455x256] [--repeats 3]

The two backends are bit-identical by contract (the test suite enforces
it); this script measures the speed difference on a typical evaluation
frame.
"""

from __future__ import annotations

import argparse
import math
import time

from vidspect.degrade import _kernels_py

try:
    from vidspect.degrade import _kernels_c
except ImportError:
    _kernels_c = None


def synth_frame(width: int, height: int) -> bytes:
    state = 0x2545F4914F6CDD1D
    out = bytearray(width * height * 3)
    for i in range(len(out)):
        state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
        out[i] = (state >> 33) & 0xFF
    return bytes(out)


def bench(fn, repeats: int) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", default="455x256", help="frame size WxH")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    width, height = (int(v) for v in args.size.lower().split("x"))
    src = synth_frame(width, height)
    crop_w = max(1, int(math.floor(width / 1.2 + 0.5)))
    crop_h = max(1, int(math.floor(height / 1.2 + 0.5)))
    off_x, off_y = (width - crop_w) // 2, (height - crop_h) // 2

    cases = [
        ("gaussian_noise(sigma=10)", lambda k: k.gaussian_noise(src, 10.0, 12345)),
        ("light_scale(1.3)", lambda k: k.light_scale(src, 1.3)),
        ("saturation_scale(0.7)", lambda k: k.saturation_scale(src, 0.7)),
        ("zoom_bilinear(1.2)", lambda k: k.zoom_bilinear(src, width, height, crop_w, crop_h, off_x, off_y)),
    ]

    print(f"frame {width}x{height}, best of {args.repeats}")
    header = f"{'kernel':<26s} {'python':>12s} {'compiled':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for name, call in cases:
        t_py = bench(lambda: call(_kernels_py), args.repeats)
        if _kernels_c is None:
            print(f"{name:<26s} {t_py * 1000:>10.1f}ms {'n/a':>12s} {'n/a':>9s}")
            continue
        assert call(_kernels_c) == call(_kernels_py), f"{name}: backends disagree"
        t_c = bench(lambda: call(_kernels_c), args.repeats)
        print(f"{name:<26s} {t_py * 1000:>10.1f}ms {t_c * 1000:>10.2f}ms {t_py / t_c:>8.0f}x")


if __name__ == "__main__":
    main()
