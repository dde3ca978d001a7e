"""Numba kernels for spatially-variant blur and its exact adjoint.

Per pixel the kernel is S = max(2, ceil(|b|) + 1) uniform taps along the blur
vector b, gathered with clamp-to-edge bilinear interpolation. The adjoint
scatters the same taps with the same weights, so <Ax, y> == <x, A^T y> up to
rounding. The bilinear lerp is written in a + f*(b - a) form so constant
images are exact fixed points of the forward operator.

Forward parallelizes over rows; the adjoint must stay serial because taps
scatter across rows.
"""

import numba
import numpy as np


@numba.njit(cache=True, parallel=True)
def blur_forward(src, u, v, out):
    h, w = src.shape
    for r in numba.prange(h):
        for c in range(w):
            uu = u[r, c]
            vv = v[r, c]
            s_count = int(np.ceil(np.sqrt(uu * uu + vv * vv))) + 1
            if s_count < 2:
                s_count = 2
            inv_span = 1.0 / (s_count - 1)
            acc = 0.0
            for s in range(s_count):
                t = s * inv_span
                x = c + t * uu
                y = r + t * vv
                if x < 0.0:
                    x = 0.0
                elif x > w - 1:
                    x = w - 1.0
                if y < 0.0:
                    y = 0.0
                elif y > h - 1:
                    y = h - 1.0
                x0 = int(x)
                y0 = int(y)
                x1 = x0 + 1 if x0 + 1 < w else w - 1
                y1 = y0 + 1 if y0 + 1 < h else h - 1
                fx = x - x0
                fy = y - y0
                top = src[y0, x0] + fx * (src[y0, x1] - src[y0, x0])
                bot = src[y1, x0] + fx * (src[y1, x1] - src[y1, x0])
                acc += top + fy * (bot - top)
            out[r, c] = acc / s_count


@numba.njit(cache=True)
def blur_adjoint(src, u, v, out):
    h, w = src.shape
    for r in range(h):
        for c in range(w):
            uu = u[r, c]
            vv = v[r, c]
            s_count = int(np.ceil(np.sqrt(uu * uu + vv * vv))) + 1
            if s_count < 2:
                s_count = 2
            inv_span = 1.0 / (s_count - 1)
            val = src[r, c] / s_count
            for s in range(s_count):
                t = s * inv_span
                x = c + t * uu
                y = r + t * vv
                if x < 0.0:
                    x = 0.0
                elif x > w - 1:
                    x = w - 1.0
                if y < 0.0:
                    y = 0.0
                elif y > h - 1:
                    y = h - 1.0
                x0 = int(x)
                y0 = int(y)
                x1 = x0 + 1 if x0 + 1 < w else w - 1
                y1 = y0 + 1 if y0 + 1 < h else h - 1
                fx = x - x0
                fy = y - y0
                out[y0, x0] += val * (1.0 - fx) * (1.0 - fy)
                out[y0, x1] += val * fx * (1.0 - fy)
                out[y1, x0] += val * (1.0 - fx) * fy
                out[y1, x1] += val * fx * fy


def warmup():
    """Trigger JIT compilation once so timed paths measure steady state."""
    img = np.zeros((4, 4), np.float64)
    z = np.zeros((4, 4), np.float64)
    out = np.empty_like(img)
    blur_forward(img, z, z, out)
    out[:] = 0.0
    blur_adjoint(img, z, z, out)
