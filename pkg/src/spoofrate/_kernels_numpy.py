"""Vectorized numpy versions of the hot loops.

Signatures and return conventions match :mod:`spoofrate._kernels_numba`
exactly; ``best`` indices are -1 when no grid point is feasible.  Ties
resolve to the first point in magnitude-major order.
"""

import numpy as np

TIN = 0
SIC = 1
_LN2 = np.log(2.0)


def _margin_and_gamma(source, target, mode, thresh):
    gamma = target / (source + 1.0)
    if mode == TIN:
        margin = target - source - thresh
    else:
        margin = thresh - np.log1p(source) / _LN2
    return margin, gamma


def _pick(margin, gamma):
    flat_m = margin.ravel()
    flat_g = gamma.ravel()
    feas = flat_m >= 0.0
    least = int(np.argmax(flat_m))
    if feas.any():
        best = int(np.argmax(np.where(feas, flat_g, -np.inf)))
        return best, float(flat_g[best]), least, float(flat_m[least])
    return -1, -np.inf, least, float(flat_m[least])


def ray_search(hr, hi, gr, gi, sqrt_p, budget, mode, thresh, ur, ui, mags):
    """Best feasible magnitude along the ray ``alpha = m * (ur + 1j*ui)``."""
    h = complex(hr, hi)
    g = complex(gr, gi)
    alpha = mags * complex(ur, ui)
    source = np.abs(h * sqrt_p + g * alpha) ** 2
    target = (gr * gr + gi * gi) * np.maximum(budget - mags * mags, 0.0)
    margin, gamma = _margin_and_gamma(source, target, mode, thresh)
    return _pick(margin, gamma)


def polar_search(hr, hi, gr, gi, sqrt_p, budget, mode, thresh, mags, phases):
    """Best feasible point of the polar grid ``mags x phases``.

    Returns ``(best_i, best_j, best_gamma, least_i, least_j, least_margin)``
    where ``least`` is the point with the largest constraint margin.
    """
    h = complex(hr, hi)
    g = complex(gr, gi)
    alpha = mags[:, None] * np.exp(1j * phases)[None, :]
    source = np.abs(h * sqrt_p + g * alpha) ** 2
    power_left = np.maximum(budget - mags * mags, 0.0)
    target = np.broadcast_to(((gr * gr + gi * gi) * power_left)[:, None], source.shape)
    margin, gamma = _margin_and_gamma(source, target, mode, thresh)
    best, best_g, least, least_m = _pick(margin, gamma)
    nph = phases.shape[0]
    if best >= 0:
        bi, bj = divmod(best, nph)
    else:
        bi, bj = -1, -1
    li, lj = divmod(least, nph)
    return bi, bj, best_g, li, lj, least_m


def moment_sums(hsp, g, alpha, beta, s, x, n):
    """Per-chunk sums of the received-power samples.

    Returns an array ``[sum T, sum T^2, sum S, sum S^2, sum N, sum N^2,
    sum D, sum D^2, sum Y, sum Y^2, sum T*D]`` where T, S, N are the target,
    source and noise powers, D = |source + noise|^2 and Y = |y|^2.
    """
    z = alpha * s + beta * x
    y = hsp * s + g * z + n
    src = hsp * s + g * (alpha * s)
    tgt = g * (beta * x)
    T = tgt.real ** 2 + tgt.imag ** 2
    S = src.real ** 2 + src.imag ** 2
    N = n.real ** 2 + n.imag ** 2
    dn = src + n
    D = dn.real ** 2 + dn.imag ** 2
    Y = y.real ** 2 + y.imag ** 2
    return np.array([
        T.sum(), (T * T).sum(), S.sum(), (S * S).sum(), N.sum(), (N * N).sum(),
        D.sum(), (D * D).sum(), Y.sum(), (Y * Y).sum(), (T * D).sum(),
    ])
