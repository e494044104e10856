"""Product quadrature on S^1 and S^{d-1} and discrete integral operators."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .spectra import TWO_PI, Circle, Sphere, UnsupportedManifold


@dataclass(frozen=True)
class QuadratureRule:
    manifold: object
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return self.weights.size


def _circle_nodes(count: int) -> np.ndarray:
    return TWO_PI * np.arange(count) / count


def _sphere_rule(d: int, res: int):
    """Nodes and weights on S^{d-1} by peeling off one polar angle at a time.

    ``x = (t, sqrt(1 - t^2) y)`` with ``y`` on ``S^{d-2}`` turns the surface
    measure into ``(1 - t^2)^((d-3)/2) dt dsigma_{d-2}``: a Gauss-Jacobi rule in
    ``t`` times the rule one dimension down. Exact for polynomials of degree
    ``2 res - 1``.
    """
    if d == 2:
        phi = _circle_nodes(2 * res)
        return np.stack([np.cos(phi), np.sin(phi)], axis=1), np.full(2 * res, TWO_PI / (2 * res))
    alpha = (d - 3) / 2.0
    if alpha == 0:
        t, wt = special.roots_legendre(res)
    else:
        t, wt = special.roots_jacobi(res, alpha, alpha)
    sub_x, sub_w = _sphere_rule(d - 1, res)
    rad = np.sqrt(1.0 - t * t)
    x = np.concatenate(
        [np.column_stack([np.full(len(sub_w), ti), ri * sub_x]) for ti, ri in zip(t, rad)]
    )
    w = np.concatenate([wi * sub_w for wi in wt])
    return x, w


def build_rule(manifold, resolution: int) -> QuadratureRule:
    """Circle: ``resolution``-point trapezoid. Sphere: product rule with ``resolution``
    polar nodes per angle and ``2 * resolution`` azimuthal nodes."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if isinstance(manifold, Circle):
        nodes = _circle_nodes(resolution)
        weights = np.full(resolution, manifold.volume / resolution)
    elif isinstance(manifold, Sphere):
        nodes, weights = _sphere_rule(manifold.d, resolution)
        # the rule's total mass is the sphere volume up to rounding
        if abs(weights.sum() - manifold.omega) > 1e-12 * manifold.omega:
            raise ArithmeticError("product rule lost its normalization")
    else:
        raise UnsupportedManifold("no quadrature rule on an unbounded domain")
    return QuadratureRule(manifold, nodes, weights)


def integrate(rule: QuadratureRule, f) -> float:
    vals = np.asarray(f(rule.nodes), dtype=float)
    return float(math.fsum(rule.weights * vals))


def apply_integral_operator(rule: QuadratureRule, kernel, f):
    """Return ``m -> sum_i w_i kernel(m, node_i) f(node_i)``.

    ``kernel`` is called with broadcastable point batches; ``m`` may be a batch.
    """
    fw = rule.weights * np.asarray(f(rule.nodes), dtype=float)
    nodes = rule.nodes

    def applied(m):
        m = np.asarray(m, dtype=float)
        if isinstance(rule.manifold, Circle):
            k = kernel(m[..., None], nodes)
        else:
            k = kernel(m[..., None, :], nodes)
        return np.asarray(k) @ fw

    return applied


def discrete_l2_norm(rule: QuadratureRule, values) -> float:
    values = np.asarray(values, dtype=float)
    return math.sqrt(float(np.sum(rule.weights * values * values)))
