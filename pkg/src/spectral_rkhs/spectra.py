"""Laplace-Beltrami spectral data for the circle, spheres and R^n.

Points are plain numpy values: an angle (radians) on the circle, a unit
vector of length ``d`` on ``S^{d-1}``, a coordinate vector on R^n. All
evaluators broadcast over leading axes, so a batch of pairs can be passed as
arrays of angles or ``(..., d)`` arrays of vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy import special

from . import specfun

TWO_PI = 2.0 * math.pi


class UnsupportedManifold(ValueError):
    pass


@dataclass(frozen=True)
class Circle:
    """Round circle of circumference ``length`` (default ``2 pi``).

    Points are angles on the unit-parametrized circle; the arc-length
    coordinate is ``angle * length / (2 pi)``. Eigenvalues scale as
    ``(2 pi k / length)^2``.
    """

    length: float = TWO_PI

    dim = 1

    @property
    def volume(self) -> float:
        return self.length

    @property
    def eig_scale(self) -> float:
        return (TWO_PI / self.length) ** 2


@dataclass(frozen=True)
class Sphere:
    """Unit sphere ``S^{d-1}`` in R^d, ``d >= 3`` (use :class:`Circle` for d = 2)."""

    d: int
    nu: float = field(init=False)
    omega: float = field(init=False)

    def __post_init__(self):
        if self.d < 3:
            raise ValueError("Sphere needs d >= 3; the circle is Circle()")
        object.__setattr__(self, "nu", self.d / 2.0 - 1.0)
        object.__setattr__(
            self, "omega", 2.0 * math.pi ** (self.d / 2.0) / math.gamma(self.d / 2.0)
        )

    @property
    def dim(self) -> int:
        return self.d - 1

    @property
    def volume(self) -> float:
        return self.omega

    eig_scale = 1.0


@dataclass(frozen=True)
class Euclidean:
    n: int

    @property
    def dim(self) -> int:
        return self.n


def is_compact(manifold) -> bool:
    return isinstance(manifold, (Circle, Sphere))


def _require_compact(manifold):
    if not is_compact(manifold):
        raise UnsupportedManifold(
            f"{manifold!r} has continuous spectrum; no eigen-levels"
        )


# --------------------------------------------------------------------- points


def circle_point(theta):
    return np.mod(np.asarray(theta, dtype=float), TWO_PI)[()]


def sphere_point(x, tol: float = 1e-12):
    x = np.asarray(x, dtype=float)
    norm = np.linalg.norm(x, axis=-1)
    if np.any(np.abs(norm - 1.0) > tol):
        raise ValueError("sphere points must have unit norm")
    return x


def random_points(manifold, count: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(manifold, Circle):
        return rng.uniform(0.0, TWO_PI, size=count)
    if isinstance(manifold, Sphere):
        x = rng.standard_normal((count, manifold.d))
        return x / np.linalg.norm(x, axis=1, keepdims=True)
    return rng.standard_normal((count, manifold.n))


def point_from_polar(theta, phi=0.0):
    """Point on S^2 at polar angle ``theta`` from the north pole, azimuth ``phi``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta) + 0 * phi], axis=-1)


def circle_separation(theta, theta2):
    """``(theta2 - theta) mod 2 pi`` in ``[0, 2 pi)``."""
    return np.mod(np.asarray(theta2, float) - np.asarray(theta, float), TWO_PI)


def sphere_cosine(m, m2):
    return np.clip(np.sum(np.asarray(m) * np.asarray(m2), axis=-1), -1.0, 1.0)


def geodesic_distance(manifold, m, m2):
    if isinstance(manifold, Circle):
        delta = circle_separation(m, m2)
        return np.minimum(delta, TWO_PI - delta) * manifold.length / TWO_PI
    if isinstance(manifold, Sphere):
        m, m2 = np.asarray(m), np.asarray(m2)
        # atan2 form keeps accuracy for nearly coincident points
        cross = np.linalg.norm(m - m2, axis=-1)
        plus = np.linalg.norm(m + m2, axis=-1)
        return 2.0 * np.arctan2(cross, plus)
    return np.linalg.norm(np.asarray(m) - np.asarray(m2), axis=-1)


# ---------------------------------------------------------------- eigen data


@dataclass(frozen=True)
class EigenLevel:
    ell: int
    lam: float
    mult: int


def sphere_multiplicity(d: int, ell: int) -> int:
    """``d_ell = (2 ell + d - 2) Gamma(ell + d - 2) / (Gamma(d - 1) Gamma(ell + 1))``.

    Evaluated in log-Gamma space and rounded; the exact integer form
    ``(2 ell + d - 2) binom(ell + d - 3, ell) / (d - 2)`` guards the rounding.
    """
    if ell == 0:
        return 1
    num = (2 * ell + d - 2) * math.comb(ell + d - 3, ell)
    exact, rem = divmod(num, d - 2)
    assert rem == 0
    logval = (
        math.log(2 * ell + d - 2)
        + math.lgamma(ell + d - 2)
        - math.lgamma(d - 1)
        - math.lgamma(ell + 1)
    )
    approx = math.exp(logval)
    if abs(approx - exact) > max(1e-6, 1e-11 * exact):
        raise ArithmeticError(f"multiplicity drift at d={d}, ell={ell}")
    return exact


def eigen_level(manifold, ell: int) -> EigenLevel:
    _require_compact(manifold)
    if ell < 0:
        raise ValueError("level index must be nonnegative")
    if isinstance(manifold, Circle):
        return EigenLevel(ell, manifold.eig_scale * ell * ell, 1 if ell == 0 else 2)
    d = manifold.d
    return EigenLevel(ell, float(ell * (ell + d - 2)), sphere_multiplicity(d, ell))


def eigenvalues(manifold, lmax: int) -> np.ndarray:
    _require_compact(manifold)
    ell = np.arange(lmax + 1, dtype=float)
    if isinstance(manifold, Circle):
        return manifold.eig_scale * ell * ell
    return ell * (ell + manifold.d - 2)


def multiplicities(manifold, lmax: int) -> np.ndarray:
    """Float multiplicities for ``l = 0..lmax`` (log-Gamma form, vectorized)."""
    _require_compact(manifold)
    if isinstance(manifold, Circle):
        out = np.full(lmax + 1, 2.0)
        out[0] = 1.0
        return out
    d = manifold.d
    ell = np.arange(1, lmax + 1, dtype=float)
    logd = (
        np.log(2 * ell + d - 2)
        + special.gammaln(ell + d - 2)
        - special.gammaln(d - 1)
        - special.gammaln(ell + 1)
    )
    vals = np.exp(logd)
    return np.concatenate([[1.0], np.where(vals < 2.0**52, np.rint(vals), vals)])


def multiplicity_majorant(manifold, ell: int) -> float:
    """Constant ``c`` with ``d_l <= c * l^(dim-1)`` for every ``l >= ell >= 1``.

    ``d_l / l^(d-2)`` is a product of factors ``(l + j) / l`` and
    ``(2 l + d - 2) / l``, each decreasing in ``l``, so its value at ``ell``
    bounds all later ones.
    """
    if isinstance(manifold, Circle):
        return 2.0
    d = manifold.d
    return sphere_multiplicity(d, ell) / float(ell) ** (d - 2)


# --------------------------------------------------------------- projectors


def projector(manifold, ell: int, m, m2):
    """Kernel of the orthogonal projection onto the level-``ell`` eigenspace."""
    level = eigen_level(manifold, ell)
    if isinstance(manifold, Circle):
        delta = circle_separation(m, m2)
        if ell == 0:
            return (np.zeros_like(delta) + 1.0 / manifold.volume)[()]
        return (2.0 / manifold.volume * np.cos(ell * delta))[()]
    z = sphere_cosine(m, m2)
    return level.mult / manifold.omega * specfun.gegenbauer_normalized(manifold.nu, ell, z)


def eigenfunction(manifold, ell: int, k: int, m, lmax_cap: int = 50):
    """Real orthonormal eigenfunction ``f_{ell,k}`` (``1 <= k <= d_ell``).

    Circle: ``k = 1`` cosine, ``k = 2`` sine. ``S^2``: ``k = 1`` is the zonal
    harmonic, ``k = 2j`` / ``2j + 1`` carry ``cos(j phi)`` / ``sin(j phi)``.
    """
    level = eigen_level(manifold, ell)
    if not 1 <= k <= level.mult:
        raise IndexError(f"k={k} outside 1..{level.mult}")
    if isinstance(manifold, Circle):
        theta = np.asarray(m, dtype=float)
        if ell == 0:
            return (np.zeros_like(theta) + 1.0 / math.sqrt(manifold.volume))[()]
        amp = math.sqrt(2.0 / manifold.volume)
        trig = np.cos if k == 1 else np.sin
        return (amp * trig(ell * theta))[()]
    if manifold.d != 3:
        raise UnsupportedManifold("explicit eigenfunctions exist only for S^1 and S^2")
    if ell > lmax_cap:
        raise ValueError(f"degree {ell} above cap {lmax_cap}")
    return sphere_harmonics(ell, m)[ell][k - 1]


def sphere_harmonics(lmax: int, m) -> list[np.ndarray]:
    """Real orthonormal harmonics on S^2: entry ``l`` has shape ``(2l+1,) + batch``."""
    m = np.asarray(m, dtype=float)
    z = np.clip(m[..., 2], -1.0, 1.0)
    phi = np.arctan2(m[..., 1], m[..., 0])
    p = specfun.normalized_assoc_legendre(lmax, z)
    out = []
    root2 = math.sqrt(2.0)
    for l in range(lmax + 1):
        rows = [p[l, 0]]
        for j in range(1, l + 1):
            rows.append(root2 * p[l, j] * np.cos(j * phi))
            rows.append(root2 * p[l, j] * np.sin(j * phi))
        out.append(np.stack(rows))
    return out


# ------------------------------------------------------------- level sums


@numba.njit(cache=True)
def _gegenbauer_sums(z, nu, coef):
    # coef: (L1, J); returns (J, P) with sum_l coef[l, j] * B^nu_l(z[p])
    L1, J = coef.shape
    P = z.shape[0]
    out = np.zeros((J, P))
    for p in range(P):
        x = z[p]
        for j in range(J):
            out[j, p] += coef[0, j]
        if L1 > 1:
            bm = 1.0
            b = x
            for j in range(J):
                out[j, p] += coef[1, j] * b
            for l in range(2, L1):
                bn = (2.0 * (l + nu - 1.0) * x * b - (l - 1.0) * bm) / (l + 2.0 * nu - 1.0)
                bm = b
                b = bn
                for j in range(J):
                    out[j, p] += coef[l, j] * b
    return out


def _cos_sums(coef: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """``coef[j, 0] + sum_k coef[j, k] cos(k delta_p)`` for every ``j, p``.

    Blocks ``k = b B + r``: ``exp(i k delta) = exp(i b B delta) exp(i r delta)``,
    so the sum becomes one complex matrix product followed by a phase-weighted
    reduction over blocks.
    """
    J, L1 = coef.shape
    K = L1 - 1
    out = np.repeat(coef[:, :1], delta.size, axis=1)
    if K == 0:
        return out
    block = max(16, int(math.ceil(math.sqrt(K))))
    nblocks = -(-K // block)
    padded = np.zeros((J, nblocks * block))
    padded[:, :K] = coef[:, 1:]
    r = np.arange(1, block + 1, dtype=float)
    inner = np.exp(1j * np.outer(r, delta))  # (block, P)
    # chunk over blocks to bound memory
    step = max(1, int(4e6 // max(1, J * delta.size)))
    acc = np.zeros((J, delta.size), dtype=complex)
    W = padded.reshape(J, nblocks, block)
    for b0 in range(0, nblocks, step):
        b1 = min(nblocks, b0 + step)
        part = np.einsum("jbr,rp->jbp", W[:, b0:b1, :], inner, optimize=True)
        phases = np.exp(1j * np.outer(np.arange(b0, b1, dtype=float) * block, delta))
        acc += np.einsum("jbp,bp->jp", part, phases)
    return out + acc.real


def level_sum(manifold, weights, m, m2):
    """``sum_l weights[..., l] * Pi_l(m, m2)``, broadcasting over point pairs.

    ``weights`` of shape ``(L+1,)`` gives an array shaped like the pair batch;
    ``(J, L+1)`` gives a leading axis of length ``J``.
    """
    _require_compact(manifold)
    w = np.asarray(weights, dtype=float)
    single = w.ndim == 1
    w2 = np.atleast_2d(w)
    lmax = w2.shape[1] - 1
    coef = w2 * (multiplicities(manifold, lmax) / manifold.volume)
    if isinstance(manifold, Circle):
        delta = circle_separation(m, m2)
        shape = delta.shape
        res = _cos_sums(coef, delta.reshape(-1))
    else:
        z = sphere_cosine(m, m2)
        shape = z.shape
        res = _gegenbauer_sums(z.reshape(-1), float(manifold.nu), np.ascontiguousarray(coef.T))
    res = res.reshape((w2.shape[0],) + shape)
    return res[0][()] if single else res
