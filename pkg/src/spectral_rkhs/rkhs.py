"""Gram matrices, interpolation, and spectral Sobolev / diffusion norms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from . import kernels
from .kernels import KernelSpec, Sobolev
from .spectra import (
    Circle,
    Sphere,
    eigen_level,
    eigenfunction,
    eigenvalues,
    level_sum,
    multiplicities,
    sphere_harmonics,
)


class SingularSystemError(np.linalg.LinAlgError):
    def __init__(self, message, condition):
        super().__init__(message)
        self.condition = condition


# ------------------------------------------------------- spectral functions


@dataclass
class SpectralFunction:
    """Finitely supported expansion ``sum c_{l,k} f_{l,k}`` in the eigenbasis.

    Keys are ``(l, k)`` with ``1 <= k <= d_l``; a bare ``l`` is read as ``(l, 1)``.
    """

    manifold: object
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, c in self.coeffs.items():
            if isinstance(key, (int, np.integer)):
                key = (int(key), 1)
            ell, k = key
            if not 1 <= k <= eigen_level(self.manifold, ell).mult:
                raise IndexError(f"mode {key} does not exist")
            clean[(int(ell), int(k))] = float(c)
        self.coeffs = clean

    def _lams(self):
        keys = list(self.coeffs)
        lam = np.array([eigen_level(self.manifold, l).lam for l, _ in keys])
        c = np.array([self.coeffs[k] for k in keys])
        return keys, lam, c

    def map(self, factor) -> "SpectralFunction":
        """New function with coefficients scaled by ``factor(l, lam)``."""
        out = {}
        for (l, k), c in self.coeffs.items():
            out[(l, k)] = c * factor(l, eigen_level(self.manifold, l).lam)
        return SpectralFunction(self.manifold, out)

    def l2_norm_sq(self) -> float:
        return float(sum(c * c for c in self.coeffs.values()))

    def max_level(self) -> int:
        return max((l for l, _ in self.coeffs), default=0)

    def __call__(self, m):
        m = np.asarray(m, dtype=float)
        if isinstance(self.manifold, Sphere):
            harm = sphere_harmonics(self.max_level(), m)
            total = 0.0
            for (l, k), c in self.coeffs.items():
                total = total + c * harm[l][k - 1]
            return total + np.zeros(m.shape[:-1])
        total = np.zeros(np.shape(m))
        for (l, k), c in self.coeffs.items():
            total = total + c * eigenfunction(self.manifold, l, k, m)
        return total


def random_spectral_function(manifold, lmax: int, rng: np.random.Generator) -> SpectralFunction:
    coeffs = {}
    for l in range(lmax + 1):
        for k in range(1, eigen_level(manifold, l).mult + 1):
            coeffs[(l, k)] = rng.standard_normal()
    return SpectralFunction(manifold, coeffs)


def sobolev_norm_sq(f: SpectralFunction, s: float, variant: str = "bessel") -> float:
    """``sum (1 + lam)^s c^2`` (``bessel``) or ``sum (1 + lam^s) c^2`` (``riesz-sum``)."""
    keys, lam, c = f._lams()
    if variant == "bessel":
        w = (1.0 + lam) ** s
    elif variant == "riesz-sum":
        w = 1.0 + lam**s
    else:
        raise ValueError(f"unknown norm variant {variant!r}")
    return float(np.sum(w * c * c))


def sobolev_norm(f: SpectralFunction, s: float, variant: str = "bessel") -> float:
    return math.sqrt(sobolev_norm_sq(f, s, variant))


def diffusion_norm_sq(f: SpectralFunction, t: float) -> float:
    if t <= 0:
        raise ValueError("diffusion time must be positive")
    keys, lam, c = f._lams()
    return float(np.sum(np.exp(t * lam) * c * c))


def diffusion_norm(f: SpectralFunction, t: float) -> float:
    return math.sqrt(diffusion_norm_sq(f, t))


def norm_equivalence_bracket(s: float) -> tuple[float, float]:
    """Range of ``(1 + lam^s) / (1 + lam)^s`` over ``lam >= 0``.

    The ratio equals one at ``lam = 0`` and as ``lam -> inf``; its other extreme
    is ``2^(1-s)`` at ``lam = 1``.
    """
    e = 2.0 ** (1.0 - s)
    return min(1.0, e), max(1.0, e)


def apply_bessel_potential(f: SpectralFunction, s: float) -> SpectralFunction:
    """``(I + Delta)^(-s/2) f``."""
    return f.map(lambda l, lam: (1.0 + lam) ** (-s / 2.0))


def apply_riesz_potential(f: SpectralFunction, s: float) -> SpectralFunction:
    """``Delta^(s/2) f``."""
    return f.map(lambda l, lam: lam ** (s / 2.0))


def apply_a_operator(f: SpectralFunction, s: float) -> SpectralFunction:
    """``f_0 (x) f_0 + Delta^(-s/2)`` on the complement of the constants."""
    return f.map(lambda l, lam: 1.0 if l == 0 else lam ** (-s / 2.0))


def heat_propagate(f: SpectralFunction, t: float) -> SpectralFunction:
    return f.map(lambda l, lam: math.exp(-t * lam))


def laplacian(f: SpectralFunction) -> SpectralFunction:
    return f.map(lambda l, lam: lam)


def kernel_section(manifold, s: float, m, L: int) -> SpectralFunction:
    """``K_s(m, .)`` truncated at level ``L`` (Bessel weighting)."""
    coeffs = {}
    for l in range(L + 1):
        lev = eigen_level(manifold, l)
        w = (1.0 + lev.lam) ** (-s)
        for k in range(1, lev.mult + 1):
            coeffs[(l, k)] = w * float(eigenfunction(manifold, l, k, m))
    return SpectralFunction(manifold, coeffs)


def sobolev_inner(f: SpectralFunction, g: SpectralFunction, s: float) -> float:
    total = 0.0
    for key, c in f.coeffs.items():
        if key in g.coeffs:
            lam = eigen_level(f.manifold, key[0]).lam
            total += (1.0 + lam) ** s * c * g.coeffs[key]
    return total


# --------------------------------------------------------------- diag test


class DiagTest(NamedTuple):
    partial: float
    converged: bool
    growth: float  # fitted exponent of L in the partial sums; 0 means logarithmic


def rkhs_diag_test(manifold, s: float, m, L: int, weighting: str = "bessel") -> DiagTest:
    """Partial sum of ``sum_k w_k f_k(m)^2`` through level ``L``.

    Uses the projector diagonals ``Pi_l(m, m) = d_l / vol``. Convergence is
    declared when the level terms decay fast enough for the certified tail to
    reach ``1e-8``; otherwise the growth exponent of the partial sums is fitted
    from the tail of the level terms.
    """
    family = Sobolev(s, weighting)
    w = kernels.spectral_weights(manifold, family, L)
    terms = w * multiplicities(manifold, L) / manifold.volume
    partial = float(np.sum(terms))
    converged = kernels.threshold_exceeded(manifold, family)
    if converged:
        try:
            kernels.choose_levels(manifold, family, kernels.TailBound(1e-8, 10**15))
        except kernels.TruncationError:
            converged = False
    lo = max(1, L // 10)
    ell = np.arange(lo, L + 1)
    slope = np.polyfit(np.log(ell), np.log(terms[lo:]), 1)[0]
    growth = max(0.0, slope + 1.0)
    if abs(slope + 1.0) < 0.05:
        growth = 0.0
    return DiagTest(partial, converged, float(growth))


# ------------------------------------------------------------------- Gram


@dataclass
class GramMatrix:
    points: np.ndarray
    entries: np.ndarray
    spec: KernelSpec
    min_eig_bound: float
    tail: float = 0.0

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))

    def is_psd(self, rel: float = 1e-8) -> bool:
        return self.min_eig_bound >= -rel * self.trace


def min_eigenvalue(a: np.ndarray) -> float:
    """Smallest eigenvalue: dense solver up to 500 rows, Lanczos beyond.

    Lanczos stalls on clustered spectra (low-rank kernels); the dense solver
    takes over then.
    """
    if a.shape[0] > 500:
        try:
            return float(eigsh(a, k=1, which="SA", return_eigenvectors=False, tol=1e-10)[0])
        except ArpackNoConvergence:
            pass
    return float(linalg.eigvalsh(a, subset_by_index=[0, 0])[0])


def gram(manifold, spec: KernelSpec, points) -> GramMatrix:
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if n < 1:
        raise ValueError("Gram matrix needs at least one point")
    iu, ju = np.triu_indices(n)
    val, tail = kernels.evaluate(manifold, spec, points[iu], points[ju])
    entries = np.empty((n, n))
    entries[iu, ju] = val
    entries[ju, iu] = val
    return GramMatrix(points, entries, spec, min_eigenvalue(entries), float(tail))


def interpolate(g: GramMatrix, values, ridge: float = 0.0) -> np.ndarray:
    """Solve ``(G + ridge I) c = values`` by Cholesky."""
    values = np.asarray(values, dtype=float)
    if values.shape != (g.entries.shape[0],):
        raise ValueError("one value per point is required")
    a = g.entries + ridge * np.eye(values.size)
    try:
        factor = linalg.cho_factor(a, lower=True)
    except linalg.LinAlgError as exc:
        cond = float(np.linalg.cond(a))
        raise SingularSystemError(f"Cholesky failed (condition ~ {cond:.3g})", cond) from exc
    return linalg.cho_solve(factor, values)


def interpolant(manifold, g: GramMatrix, coef):
    """``m -> sum_i c_i K(m, points_i)``."""
    pts = g.points

    def f(m):
        m = np.asarray(m, dtype=float)
        if isinstance(manifold, Circle):
            k = kernels.evaluate(manifold, g.spec, m[..., None], pts).value
        else:
            k = kernels.evaluate(manifold, g.spec, m[..., None, :], pts).value
        return np.asarray(k) @ coef

    return f
