# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pixel kernels; the preferred backend when built.

Arithmetic twin of _kernels_py.py — identical operation order, double
precision throughout, compiled with -ffp-contract=off and without
-ffast-math so outputs are bit-identical to the pure-Python fallback.
"""

from libc.math cimport cos, floor, log, sqrt
from libc.stdint cimport uint64_t

BACKEND = "c"

cdef double _INV_2_53 = 1.0 / 9007199254740992.0
cdef double _TWO_PI = 6.283185307179586


cdef inline uint64_t _mix(uint64_t state) nogil:
    cdef uint64_t z = state
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


def gaussian_noise(const unsigned char[::1] src, double sigma, seed):
    cdef Py_ssize_t n = src.shape[0]
    out_b = bytearray(n)
    cdef unsigned char[::1] out = out_b
    cdef uint64_t state = <uint64_t>(<unsigned long long>(seed & 0xFFFFFFFFFFFFFFFF))
    cdef uint64_t z
    cdef double u1, u2, g, v
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            state = state + <uint64_t>0x9E3779B97F4A7C15
            z = _mix(state)
            u1 = <double>((z >> 11) + 1) * _INV_2_53
            state = state + <uint64_t>0x9E3779B97F4A7C15
            z = _mix(state)
            u2 = <double>((z >> 11) + 1) * _INV_2_53
            g = sqrt(-2.0 * log(u1)) * cos(_TWO_PI * u2)
            v = floor(src[i] + g * sigma + 0.5)
            if v < 0:
                v = 0
            elif v > 255:
                v = 255
            out[i] = <unsigned char>v
    return bytes(out_b)


def light_scale(const unsigned char[::1] src, double scale):
    cdef Py_ssize_t n = src.shape[0]
    out_b = bytearray(n)
    cdef unsigned char[::1] out = out_b
    cdef double k = scale - 1.0
    cdef double y, delta, v
    cdef Py_ssize_t p, c
    with nogil:
        for p in range(0, n, 3):
            y = 0.299 * src[p] + 0.587 * src[p + 1] + 0.114 * src[p + 2]
            delta = k * y
            for c in range(3):
                v = floor(src[p + c] + delta + 0.5)
                if v < 0:
                    v = 0
                elif v > 255:
                    v = 255
                out[p + c] = <unsigned char>v
    return bytes(out_b)


def saturation_scale(const unsigned char[::1] src, double scale):
    cdef Py_ssize_t n = src.shape[0]
    out_b = bytearray(n)
    cdef unsigned char[::1] out = out_b
    cdef double y, v
    cdef Py_ssize_t p, c
    with nogil:
        for p in range(0, n, 3):
            y = 0.299 * src[p] + 0.587 * src[p + 1] + 0.114 * src[p + 2]
            for c in range(3):
                v = floor(y + scale * (src[p + c] - y) + 0.5)
                if v < 0:
                    v = 0
                elif v > 255:
                    v = 255
                out[p + c] = <unsigned char>v
    return bytes(out_b)


def zoom_bilinear(const unsigned char[::1] src, int width, int height,
                  int crop_w, int crop_h, int off_x, int off_y):
    out_b = bytearray(width * height * 3)
    cdef unsigned char[::1] out = out_b
    cdef int max_x = crop_w - 1
    cdef int max_y = crop_h - 1
    cdef int dy, dx, iy0, iy1, ix0, ix1, c
    cdef Py_ssize_t row0, row1, p00, p01, p10, p11, o
    cdef double sy, sx, fy, fx, top, bot, v
    with nogil:
        for dy in range(height):
            sy = (dy + 0.5) * crop_h / height - 0.5
            if sy < 0.0:
                sy = 0.0
            elif sy > max_y:
                sy = <double>max_y
            iy0 = <int>floor(sy)
            fy = sy - iy0
            iy1 = iy0 + 1 if iy0 + 1 <= max_y else max_y
            row0 = (off_y + iy0) * width
            row1 = (off_y + iy1) * width
            for dx in range(width):
                sx = (dx + 0.5) * crop_w / width - 0.5
                if sx < 0.0:
                    sx = 0.0
                elif sx > max_x:
                    sx = <double>max_x
                ix0 = <int>floor(sx)
                fx = sx - ix0
                ix1 = ix0 + 1 if ix0 + 1 <= max_x else max_x
                p00 = (row0 + off_x + ix0) * 3
                p01 = (row0 + off_x + ix1) * 3
                p10 = (row1 + off_x + ix0) * 3
                p11 = (row1 + off_x + ix1) * 3
                o = (<Py_ssize_t>dy * width + dx) * 3
                for c in range(3):
                    top = (1.0 - fx) * src[p00 + c] + fx * src[p01 + c]
                    bot = (1.0 - fx) * src[p10 + c] + fx * src[p11 + c]
                    v = floor((1.0 - fy) * top + fy * bot + 0.5)
                    if v < 0:
                        v = 0
                    elif v > 255:
                        v = 255
                    out[o + c] = <unsigned char>v
    return bytes(out_b)
