"""numba-compiled versions of the hot loops (see :mod:`spoofrate._kernels_numpy`)."""

import math

import numpy as np
from numba import njit

TIN = 0
SIC = 1
_LN2 = math.log(2.0)


@njit(cache=True)
def _eval_point(hr, hi, gr, gi, sqrt_p, budget, mode, thresh, m, ur, ui):
    ar = m * ur
    ai = m * ui
    re = hr * sqrt_p + gr * ar - gi * ai
    im = hi * sqrt_p + gr * ai + gi * ar
    source = re * re + im * im
    left = budget - m * m
    if left < 0.0:
        left = 0.0
    target = (gr * gr + gi * gi) * left
    gamma = target / (source + 1.0)
    if mode == TIN:
        margin = target - source - thresh
    else:
        margin = thresh - math.log1p(source) / _LN2
    return margin, gamma


@njit(cache=True)
def ray_search(hr, hi, gr, gi, sqrt_p, budget, mode, thresh, ur, ui, mags):
    best = -1
    best_g = -np.inf
    least = 0
    least_m = -np.inf
    for i in range(mags.shape[0]):
        margin, gamma = _eval_point(hr, hi, gr, gi, sqrt_p, budget, mode, thresh,
                                    mags[i], ur, ui)
        if margin > least_m:
            least_m = margin
            least = i
        if margin >= 0.0 and gamma > best_g:
            best_g = gamma
            best = i
    return best, best_g, least, least_m


@njit(cache=True)
def polar_search(hr, hi, gr, gi, sqrt_p, budget, mode, thresh, mags, phases):
    nph = phases.shape[0]
    cs = np.cos(phases)
    sn = np.sin(phases)
    bi = -1
    bj = -1
    best_g = -np.inf
    li = 0
    lj = 0
    least_m = -np.inf
    for i in range(mags.shape[0]):
        for j in range(nph):
            margin, gamma = _eval_point(hr, hi, gr, gi, sqrt_p, budget, mode, thresh,
                                        mags[i], cs[j], sn[j])
            if margin > least_m:
                least_m = margin
                li = i
                lj = j
            if margin >= 0.0 and gamma > best_g:
                best_g = gamma
                bi = i
                bj = j
    return bi, bj, best_g, li, lj, least_m


@njit(cache=True)
def moment_sums(hsp, g, alpha, beta, s, x, n):
    out = np.zeros(11)
    for k in range(s.shape[0]):
        sk = s[k]
        xk = x[k]
        nk = n[k]
        z = alpha * sk + beta * xk
        y = hsp * sk + g * z + nk
        src = hsp * sk + g * (alpha * sk)
        tgt = g * (beta * xk)
        T = tgt.real * tgt.real + tgt.imag * tgt.imag
        S = src.real * src.real + src.imag * src.imag
        N = nk.real * nk.real + nk.imag * nk.imag
        dr = src.real + nk.real
        di = src.imag + nk.imag
        D = dr * dr + di * di
        Y = y.real * y.real + y.imag * y.imag
        out[0] += T
        out[1] += T * T
        out[2] += S
        out[3] += S * S
        out[4] += N
        out[5] += N * N
        out[6] += D
        out[7] += D * D
        out[8] += Y
        out[9] += Y * Y
        out[10] += T * D
    return out
