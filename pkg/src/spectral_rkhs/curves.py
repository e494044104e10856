"""Closed embedded curves: arc length, unit-speed reparametrization, kernel pullback.

A connected closed curve of length ``l_M`` is isometric to the round circle of
the same length. The isometry is the arc-length map, so any circle kernel
transports to the curve by evaluating it at arc-length angles.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import interpolate, special

from . import kernels
from .spectra import TWO_PI, Circle


class ImmersionError(ValueError):
    pass


_GL_X, _GL_W = special.roots_legendre(20)


@dataclass
class EmbeddedCurve:
    """``position`` maps an array of parameters ``(N,)`` to points ``(N, dim)``.

    Without an analytic ``derivative`` the velocity is a 4th-order central
    difference with step ``h`` (truncation error ~ h^4, rounding ~ eps / h).
    """

    dim: int
    position: Callable
    derivative: Optional[Callable] = None
    h: float = 1e-5
    panels: int = 256
    _table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("curve must live in R^d with d >= 2")
        ends = self.point(np.array([0.0, TWO_PI]))
        if np.linalg.norm(ends[0] - ends[1]) > 1e-10:
            raise ValueError("curve is not closed")
        edges = np.linspace(0.0, TWO_PI, self.panels + 1)
        pieces = self._integrate(edges[:-1], edges[1:])
        self._table = np.concatenate([[0.0], np.cumsum(pieces)])

    def point(self, theta):
        return np.asarray(self.position(np.atleast_1d(np.asarray(theta, float))), float)

    def velocity(self, theta):
        theta = np.atleast_1d(np.asarray(theta, float))
        if self.derivative is not None:
            return np.asarray(self.derivative(theta), float)
        h, p = self.h, self.position
        return (-p(theta + 2 * h) + 8 * p(theta + h) - 8 * p(theta - h) + p(theta - 2 * h)) / (12 * h)

    def speed(self, theta):
        return np.linalg.norm(self.velocity(theta), axis=-1)

    def _integrate(self, a, b):
        """Gauss-Legendre integral of the speed over each ``[a_i, b_i]``."""
        a, b = np.asarray(a, float), np.asarray(b, float)
        half = 0.5 * (b - a)
        nodes = (0.5 * (a + b))[:, None] + half[:, None] * _GL_X[None, :]
        sp = self.speed(nodes.ravel()).reshape(nodes.shape)
        if np.any(sp < 1e-12):
            raise ImmersionError("speed vanishes: the curve is not immersed")
        return half * (sp @ _GL_W)

    @property
    def length(self) -> float:
        return float(self._table[-1])


def arc_length(curve: EmbeddedCurve, theta):
    """``s(theta) = int_0^theta |c'|`` from the panel table plus one partial panel."""
    theta = np.asarray(theta, float)
    if np.any(theta < 0) or np.any(theta > TWO_PI):
        raise ValueError("theta must lie in [0, 2 pi]")
    flat = theta.reshape(-1)
    width = TWO_PI / curve.panels
    k = np.minimum((flat / width).astype(int), curve.panels - 1)
    out = curve._table[k] + curve._integrate(k * width, flat)
    return out.reshape(theta.shape)[()]


def arc_length_inverse(curve: EmbeddedCurve, s, tol: float = 1e-13):
    """Parameter ``theta`` with ``arc_length(theta) = s``.

    Newton steps on the monotone ``s`` (derivative = speed), kept inside the
    bracketing panel; any entry that leaves the bracket is bisected instead.
    """
    s_arr = np.asarray(s, float)
    total = curve.length
    if np.any(s_arr < 0) or np.any(s_arr > total * (1 + 1e-14)):
        raise ValueError("arc length outside [0, length]")
    target = np.minimum(s_arr.reshape(-1), total)
    width = TWO_PI / curve.panels
    k = np.clip(np.searchsorted(curve._table, target, side="right") - 1, 0, curve.panels - 1)
    lo, hi = k * width, (k + 1) * width
    frac = (target - curve._table[k]) / (curve._table[k + 1] - curve._table[k])
    th = lo + frac * width
    for _ in range(60):
        g = arc_length(curve, th) - target
        lo = np.where(g < 0, th, lo)
        hi = np.where(g > 0, th, hi)
        step = g / curve.speed(th)
        new = th - step
        outside = (new <= lo) | (new >= hi)
        new = np.where(outside, 0.5 * (lo + hi), new)
        done = np.abs(new - th) <= tol * max(1.0, TWO_PI)
        th = new
        if np.all(done):
            break
    else:
        raise ArithmeticError("arc-length inversion did not converge")
    return th.reshape(s_arr.shape)[()]


def isometry_to_circle(curve: EmbeddedCurve):
    """``(phi, scale)``: ``phi(t) = c(s^{-1}(t * scale))`` has constant speed ``scale = l_M / 2pi``."""
    scale = curve.length / TWO_PI

    def phi(t):
        t = np.asarray(t, float)
        return curve.point(np.atleast_1d(arc_length_inverse(curve, t * scale)))

    return phi, scale


def circle_angle(curve: EmbeddedCurve, theta):
    """Angle on the model circle of a curve parameter: ``2 pi s(theta) / l_M``."""
    return np.mod(TWO_PI * arc_length(curve, theta) / curve.length, TWO_PI)


def model_circle(curve: EmbeddedCurve, rescale_metric: bool = False) -> Circle:
    """Circle of the curve's length, or the unit-speed circle after rescaling the metric."""
    return Circle() if rescale_metric else Circle(length=curve.length)


def pullback_kernel(curve: EmbeddedCurve, spec, p, q, rescale_metric: bool = False):
    """``K_M(p, q) = K_circle(2 pi s(p) / l_M, 2 pi s(q) / l_M)``.

    ``p`` and ``q`` are curve parameters. By default the circle keeps the
    curve's length (eigenvalues ``(2 pi k / l_M)^2``); ``rescale_metric``
    instead normalizes the length to ``2 pi``.
    """
    if isinstance(spec, kernels.Sobolev):
        spec = kernels.KernelSpec(spec)
    circ = model_circle(curve, rescale_metric)
    return kernels.evaluate(circ, spec, circle_angle(curve, p), circle_angle(curve, q))


def pullback_gram(curve: EmbeddedCurve, spec, params, rescale_metric: bool = False):
    from .rkhs import gram

    circ = model_circle(curve, rescale_metric)
    return gram(circ, spec, circle_angle(curve, np.asarray(params, float)))


def ellipse(a: float, b: float) -> EmbeddedCurve:
    return EmbeddedCurve(
        2,
        lambda th: np.stack([a * np.cos(th), b * np.sin(th)], axis=-1),
        lambda th: np.stack([-a * np.sin(th), b * np.cos(th)], axis=-1),
    )


def round_circle(radius: float = 1.0) -> EmbeddedCurve:
    return ellipse(radius, radius)


def load_curve_csv(path) -> EmbeddedCurve:
    """Rows ``theta, x1, ..., xd`` sampled on ``[0, 2 pi)``; periodic cubic spline through them."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    try:
        data = np.array([[float(v) for v in r] for r in rows])
    except ValueError:
        data = np.array([[float(v) for v in r] for r in rows[1:]])  # header row
    if data.ndim != 2 or data.shape[1] < 3 or data.shape[0] < 4:
        raise ValueError("curve file needs >= 4 rows of theta, x1, ..., xd (d >= 2)")
    order = np.argsort(data[:, 0])
    data = data[order]
    theta, pts = data[:, 0], data[:, 1:]
    if np.any(np.diff(theta) <= 0) or theta[0] < 0 or theta[-1] > TWO_PI:
        raise ValueError("curve parameters must be distinct and lie in [0, 2 pi]")
    if not math.isclose(theta[-1], TWO_PI, abs_tol=1e-12):
        theta = np.append(theta, theta[0] + TWO_PI)
        pts = np.vstack([pts, pts[:1]])
    else:
        pts[-1] = pts[0]
    spline = interpolate.CubicSpline(theta - theta[0], pts, bc_type="periodic")
    shift = theta[0]
    dspline = spline.derivative()
    return EmbeddedCurve(
        pts.shape[1],
        lambda th: spline(np.mod(th - shift, TWO_PI)),
        lambda th: dspline(np.mod(th - shift, TWO_PI)),
    )
