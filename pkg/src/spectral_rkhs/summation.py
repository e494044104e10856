"""Tail majorants for level sums and Aitken extrapolation.

All tails bound ``sum_{l > L} |w_l Pi_l(m, m')| <= sum_{l > L} w_l d_l / vol``
using ``|B^nu_l| <= 1``, ``d_l <= c l^D`` (``D = dim - 1``) and a monotone
majorant of the weights, then compare the sum with an integral.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special


def power_tail(c: float, amp: float, vol: float, D: int, p: float, L: int) -> float:
    """Bound for weights ``w_l <= amp * l^(-2p)``: ``(c amp / vol) L^(D+1-2p) / (2p-D-1)``."""
    expo = 2.0 * p - D - 1.0
    if expo <= 0:
        return math.inf
    L = max(L, 1)
    return c * amp / vol * L ** (-expo) / expo


def power_levels(c: float, amp: float, vol: float, D: int, p: float, eps: float) -> int:
    """Smallest ``L`` whose :func:`power_tail` is at most ``eps`` (inf-safe)."""
    expo = 2.0 * p - D - 1.0
    if expo <= 0:
        return math.inf
    L = (c * amp / (vol * eps * expo)) ** (1.0 / expo)
    if not math.isfinite(L) or L > 1e15:
        return math.inf
    L = max(1, int(math.ceil(L)))
    while L > 1 and power_tail(c, amp, vol, D, p, L - 1) <= eps:
        L -= 1
    return L


def gaussian_tail(c: float, vol: float, D: int, rate: float, L: int) -> float:
    """Bound for weights ``w_l <= exp(-rate l^2)``.

    ``x^D exp(-rate x^2)`` decreases past ``sqrt(D / (2 rate))``; below that the
    integral comparison does not apply and the bound is reported as infinite.
    """
    if L < math.sqrt(D / (2.0 * rate)):
        return math.inf
    a = (D + 1) / 2.0
    return c / vol * 0.5 * rate ** (-a) * special.gamma(a) * special.gammaincc(a, rate * L * L)


def gaussian_levels(c_of, vol: float, D: int, rate: float, eps: float, lmax: int) -> int:
    L = max(1, int(math.ceil(math.sqrt(D / (2.0 * rate)))))
    while gaussian_tail(c_of(L + 1), vol, D, rate, L) > eps:
        L = int(L * 1.25) + 1
        if L > lmax:
            return math.inf
    lo, hi = max(1, int(L / 1.25) - 1), L
    while lo < hi:
        mid = (lo + hi) // 2
        if gaussian_tail(c_of(mid + 1), vol, D, rate, mid) <= eps:
            hi = mid
        else:
            lo = mid + 1
    return hi


def geometric_tail(c: float, amp: float, vol: float, D: int, mu: float, L: int) -> float:
    """Bound for weights ``w_l <= amp * exp(-mu l)`` (Abel factor ``t^l``, ``mu = -log t``)."""
    if L < D / mu:
        return math.inf
    a = D + 1.0
    return c * amp / vol * special.gamma(a) * special.gammaincc(a, mu * L) / mu**a


def geometric_levels(c: float, amp: float, vol: float, D: int, mu: float, eps: float) -> int:
    L = max(1, int(math.ceil(D / mu)))
    while geometric_tail(c, amp, vol, D, mu, L) > eps:
        L *= 2
    lo, hi = max(1, L // 2), L
    while lo < hi:
        mid = (lo + hi) // 2
        if geometric_tail(c, amp, vol, D, mu, mid) <= eps:
            hi = mid
        else:
            lo = mid + 1
    return hi


def aitken_step(x: np.ndarray) -> np.ndarray:
    """One Aitken delta-squared pass along axis 0; degenerate denominators keep the raw term."""
    x0, x1, x2 = x[:-2], x[1:-1], x[2:]
    d1 = x1 - x0
    den = x2 - 2.0 * x1 + x0
    scale = np.maximum(np.abs(x2), 1e-300)
    ok = np.abs(den) > 64.0 * np.finfo(float).eps * scale
    safe = np.where(ok, den, 1.0)
    return np.where(ok, x0 - d1 * d1 / safe, x2)


def iterated_aitken(seq):
    """Repeated Aitken passes over ``seq`` (axis 0 indexes the sequence).

    Returns ``(estimate, cauchy, table)``: for every column the estimate is the
    last entry of the row whose last two entries agree best, ``cauchy`` is that
    difference, and ``table`` lists the rows.
    """
    x = np.asarray(seq, dtype=float)
    table = [x]
    while table[-1].shape[0] >= 3:
        table.append(aitken_step(table[-1]))
    best = np.full(x.shape[1:], np.inf)
    est = x[-1].copy()
    for row in table:
        if row.shape[0] < 2:
            continue
        diff = np.abs(row[-1] - row[-2])
        better = diff < best
        best = np.where(better, diff, best)
        est = np.where(better, row[-1], est)
    return est[()], best[()], table
