"""Sobolev, heat and power kernels: spectral sums, closed forms, Abel summation.

Three spectral weightings of the Sobolev family are supported:

``bessel``         ``(1 + lam)^(-s)``      kernel of ``(I + Delta)^(-s)``
``inverse-power``  ``(1 + lam^s)^(-1)``    kernel of ``(I + Delta^s)^(-1)``
``riesz``          ``lam^(-s)`` for ``lam > 0``; the constant mode enters
                   with value one, which is the normalization of the circle
                   closed forms ``1 + (1/pi) sum k^(-2s) cos(k delta)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import mpmath
import numpy as np
from scipy import integrate

from . import specfun
from .spectra import (
    TWO_PI,
    Circle,
    Euclidean,
    Sphere,
    circle_separation,
    eigenvalues,
    geodesic_distance,
    is_compact,
    level_sum,
    multiplicities,
    multiplicity_majorant,
    sphere_multiplicity,
    sphere_cosine,
)
from .summation import (
    gaussian_levels,
    gaussian_tail,
    geometric_levels,
    iterated_aitken,
    power_levels,
    power_tail,
)

WEIGHTINGS = ("bessel", "inverse-power", "riesz")


class KernelError(ArithmeticError):
    pass


class DivergenceError(KernelError):
    """The kernel series diverges at the requested point (e.g. on the diagonal)."""


class RegimeError(KernelError):
    """Off-diagonal evaluation below the RKHS threshold without an Abel policy."""


class TruncationError(KernelError):
    """No truncation level within the cap certifies the requested tail."""


class AbelNonConvergence(KernelError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


# ------------------------------------------------------------------ specs


@dataclass(frozen=True)
class Sobolev:
    s: float
    weighting: str = "bessel"

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError("Sobolev index must be positive")
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"unknown weighting {self.weighting!r}")


@dataclass(frozen=True)
class Heat:
    t: float

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError("heat time must be positive")


@dataclass(frozen=True)
class Power:
    """Kernel of ``L_K^r`` for the Sobolev kernel ``K = base``, ``0 < r <= 1``."""

    base: Sobolev
    r: float

    def __post_init__(self):
        if not 0 < self.r <= 1:
            raise ValueError("power exponent must lie in (0, 1]")


Family = Union[Sobolev, Heat, Power]


@dataclass(frozen=True)
class FixedLevels:
    L: int


@dataclass(frozen=True)
class TailBound:
    eps: float = 1e-8
    L_max: int = 1_000_000


def default_t_sequence():
    return tuple(1.0 - 2.0 ** (-j) for j in range(3, 15))


@dataclass(frozen=True)
class AbelPolicy:
    t_sequence: tuple = field(default_factory=default_t_sequence)
    extrapolation: str = "aitken"
    tol: float = 1e-6
    eps: float = 1e-13

    def __post_init__(self):
        ts = np.asarray(self.t_sequence, dtype=float)
        if ts.size < 1 or np.any(ts <= 0) or np.any(ts >= 1) or np.any(np.diff(ts) <= 0):
            raise ValueError("t_sequence must be strictly increasing inside (0, 1)")
        if self.extrapolation not in ("aitken", "none"):
            raise ValueError("extrapolation must be 'aitken' or 'none'")


@dataclass(frozen=True)
class KernelSpec:
    family: Family
    truncation: Union[FixedLevels, TailBound] = field(default_factory=TailBound)
    abel: AbelPolicy | None = None


class KernelValue(NamedTuple):
    value: object
    tail: float


class AbelResult(NamedTuple):
    value: object
    diagnostics: list
    error: object


# ----------------------------------------------------------------- weights


def _sobolev_weights(manifold, spec: Sobolev, lam: np.ndarray) -> np.ndarray:
    s = spec.s
    if spec.weighting == "bessel":
        return (1.0 + lam) ** (-s)
    if spec.weighting == "inverse-power":
        return 1.0 / (1.0 + lam**s)
    w = np.empty_like(lam)
    w[0] = manifold.volume
    w[1:] = lam[1:] ** (-s)
    return w


def spectral_weights(manifold, family: Family, lmax: int) -> np.ndarray:
    """Per-level weights ``w_l`` for ``l = 0..lmax``."""
    lam = eigenvalues(manifold, lmax)
    if isinstance(family, Heat):
        return np.exp(-family.t * lam)
    if isinstance(family, Power):
        return _sobolev_weights(manifold, family.base, lam) ** family.r
    return _sobolev_weights(manifold, family, lam)


def decay(manifold, family) -> tuple[float, float]:
    """``(amp, p)`` with ``w_l <= amp * l^(-2p)`` for all ``l >= 1``."""
    a = manifold.eig_scale
    if isinstance(family, Power):
        amp, p = decay(manifold, family.base)
        return amp**family.r, p * family.r
    # lam_l >= a l^2 and each weighting is dominated by lam^(-s)
    return a ** (-family.s), family.s


def threshold_exceeded(manifold, family) -> bool:
    """True when the diagonal series converges (``p > dim / 2``)."""
    if isinstance(family, Heat):
        return True
    return decay(manifold, family)[1] > manifold.dim / 2.0


def _majorant(manifold):
    return lambda ell: multiplicity_majorant(manifold, max(1, ell))


def tail_bound(manifold, family, L: int) -> float:
    D = manifold.dim - 1
    c = _majorant(manifold)(L + 1)
    if isinstance(family, Heat):
        return gaussian_tail(c, manifold.volume, D, family.t * manifold.eig_scale, L)
    amp, p = decay(manifold, family)
    return power_tail(c, amp, manifold.volume, D, p, L)


def choose_levels(manifold, family, truncation) -> tuple[int, float]:
    """Truncation level and its certified tail."""
    if isinstance(truncation, FixedLevels):
        return truncation.L, tail_bound(manifold, family, truncation.L)
    D = manifold.dim - 1
    if isinstance(family, Heat):
        L = gaussian_levels(
            _majorant(manifold), manifold.volume, D, family.t * manifold.eig_scale,
            truncation.eps, truncation.L_max,
        )
    else:
        amp, p = decay(manifold, family)
        # majorant at l = 1 dominates all later ones
        c = _majorant(manifold)(1)
        L = power_levels(c, amp, manifold.volume, D, p, truncation.eps)
    if L > truncation.L_max:
        raise TruncationError(
            f"tail <= {truncation.eps:g} needs more than L_max={truncation.L_max} levels"
        )
    return L, tail_bound(manifold, family, L)


def _on_diagonal(manifold, m, m2) -> np.ndarray:
    return np.asarray(geodesic_distance(manifold, m, m2)) == 0.0


# -------------------------------------------------------------- evaluation


def spectral_kernel(manifold, family: Family, m, m2, truncation=None) -> KernelValue:
    """Truncated level sum ``sum_{l <= L} w_l Pi_l(m, m')`` with certified tail.

    Below the threshold only an explicit :class:`FixedLevels` partial sum is
    returned (its tail is infinite); certified evaluation is refused.
    """
    truncation = truncation or TailBound()
    if not threshold_exceeded(manifold, family) and not isinstance(truncation, FixedLevels):
        if np.any(_on_diagonal(manifold, m, m2)):
            raise DivergenceError(
                "kernel series diverges on the diagonal below the RKHS threshold"
            )
        raise RegimeError("off-diagonal evaluation below the threshold needs Abel summation")
    L, tail = choose_levels(manifold, family, truncation)
    value = level_sum(manifold, spectral_weights(manifold, family, L), m, m2)
    return KernelValue(value, tail)


def sobolev_kernel(manifold, spec, m, m2) -> KernelValue:
    """Sobolev kernel; ``spec`` is a :class:`KernelSpec` or a bare :class:`Sobolev`.

    Below the threshold an Abel policy on the spec routes off-diagonal points
    through :func:`abel_kernel` (its extrapolation error is reported as the tail).
    """
    if isinstance(spec, Sobolev):
        spec = KernelSpec(spec)
    family = spec.family
    if not is_compact(manifold):
        return KernelValue(sobolev_euclidean(manifold.n, family.s, m, m2), 0.0)
    if spec.abel is not None and not threshold_exceeded(manifold, family):
        res = abel_kernel(manifold, family, m, m2, spec.abel)
        return KernelValue(res.value, float(np.max(res.error)))
    return spectral_kernel(manifold, family, m, m2, spec.truncation)


def kernel_power(manifold, base_s: float, r: float, m, m2, truncation=None,
                 weighting: str = "bessel", abel: AbelPolicy | None = None) -> KernelValue:
    """Kernel of ``L_K^r``: weights ``w_l(base_s)^r``.

    Off the diagonal and below the threshold, an Abel policy sums the series
    as in :func:`sobolev_kernel`.
    """
    family = Power(Sobolev(base_s, weighting), r)
    if not threshold_exceeded(manifold, family) and not isinstance(truncation, FixedLevels):
        if np.any(_on_diagonal(manifold, m, m2)):
            raise DivergenceError("power kernel is not summable on the diagonal")
        if abel is not None:
            res = abel_kernel(manifold, family, m, m2, abel)
            return KernelValue(res.value, float(np.max(res.error)))
    return spectral_kernel(manifold, family, m, m2, truncation)


def evaluate(manifold, spec: KernelSpec, m, m2) -> KernelValue:
    """Dispatch on the spec's family."""
    family = spec.family
    if isinstance(family, Heat):
        return heat_kernel(manifold, family.t, m, m2, spec.truncation)
    if isinstance(family, Power):
        return kernel_power(manifold, family.base.s, family.r, m, m2, spec.truncation,
                            family.base.weighting, spec.abel)
    return sobolev_kernel(manifold, spec, m, m2)


# -------------------------------------------------------------------- heat


def heat_kernel(manifold, t: float, m, m2, truncation=None, refine: bool = True) -> KernelValue:
    """Heat kernel ``p(m, m', t)``.

    Compact manifolds sum ``exp(-t lam_l) Pi_l``. Where the float sum is within
    its rounding noise of zero (far-apart points, small ``t``), the entry is
    recomputed in extended precision with a tail below a tenth of its value
    (``refine=False`` skips this, e.g. inside quadrature sums where such
    entries are immaterial).
    """
    if t <= 0:
        raise ValueError("heat time must be positive")
    if isinstance(manifold, Euclidean):
        x, y = np.asarray(m, float), np.asarray(m2, float)
        r2 = np.sum((x - y) ** 2, axis=-1)
        return KernelValue(((4.0 * math.pi * t) ** (-manifold.n / 2.0) * np.exp(-r2 / (4.0 * t)))[()], 0.0)
    family = Heat(t)
    truncation = truncation or TailBound(1e-12)
    L, tail = choose_levels(manifold, family, truncation)
    w = spectral_weights(manifold, family, L)
    value = np.asarray(level_sum(manifold, w, m, m2), dtype=float)
    diag = float(np.sum(w * multiplicities(manifold, L)) / manifold.volume)
    noise = 16.0 * np.finfo(float).eps * (L + 1) * diag
    suspect = np.abs(value) <= 10.0 * max(noise, tail)
    if refine and np.any(suspect):
        sep = np.broadcast_to(_separation(manifold, m, m2), value.shape)
        value = value.copy()
        for idx in zip(*np.nonzero(suspect)) if value.ndim else [()]:
            value[idx] = _heat_mp(manifold, t, float(sep[idx]))
    return KernelValue(value[()], tail)


def _separation(manifold, m, m2):
    """Circle: angular separation; sphere: cosine of the angle."""
    if isinstance(manifold, Circle):
        return circle_separation(m, m2)
    return sphere_cosine(m, m2)


def _heat_mp(manifold, t, sep: float, dps: int = 40) -> float:
    with mpmath.workdps(dps):
        eps = mpmath.mpf(1e-30)
        while True:
            L, _ = choose_levels(manifold, Heat(t), TailBound(float(eps), 10**6))
            total = _level_sum_mp(manifold, lambda lam: mpmath.exp(-t * lam), L, sep)
            tail = tail_bound(manifold, Heat(t), L)
            if total > 10 * tail or eps < mpmath.mpf(10) ** (-dps + 5):
                return float(total)
            eps = eps * mpmath.mpf(1e-10)


def _level_sum_mp(manifold, weight, L, sep):
    vol = mpmath.mpf(manifold.volume)
    if isinstance(manifold, Circle):
        delta = mpmath.mpf(sep)
        scale = mpmath.mpf(manifold.eig_scale)
        total = weight(mpmath.mpf(0)) / vol
        for k in range(1, L + 1):
            total += weight(scale * k * k) * 2 / vol * mpmath.cos(k * delta)
        return total
    z = mpmath.mpf(sep)
    nu = mpmath.mpf(manifold.nu)
    d = manifold.d
    bm, bcur = mpmath.mpf(1), z
    total = weight(mpmath.mpf(0)) / vol
    if L >= 1:
        total += weight(mpmath.mpf(d - 1)) * sphere_multiplicity(d, 1) / vol * bcur
    for l in range(2, L + 1):
        bm, bcur = bcur, (2 * (l + nu - 1) * z * bcur - (l - 1) * bm) / (l + 2 * nu - 1)
        total += weight(mpmath.mpf(l * (l + d - 2))) * sphere_multiplicity(d, l) / vol * bcur
    return total


# -------------------------------------------------------------------- Abel


def abel_sequence(manifold, family: Sobolev | Power, m, m2, policy: AbelPolicy | None = None):
    """``K_{s,t}(m, m')`` for every ``t`` of the policy; shape ``(len(t),) + batch``.

    Each inner power series is truncated where its ``t^l``-weighted tail is
    certified below ``policy.eps``.
    """
    policy = policy or AbelPolicy()
    ts = np.asarray(policy.t_sequence, dtype=float)
    D = manifold.dim - 1
    c = _majorant(manifold)(1)
    amp, _ = decay(manifold, family)
    mus = -np.log(ts)
    Ls = [geometric_levels(c, amp, manifold.volume, D, mu, policy.eps) for mu in mus]
    w = spectral_weights(manifold, family, max(Ls))
    rows = []
    # one t at a time: the inner truncation grows like 1 / (1 - t)
    for mu, L in zip(mus, Ls):
        wt = w[: L + 1] * np.exp(-mu * np.arange(L + 1, dtype=float))
        rows.append(np.asarray(level_sum(manifold, wt, m, m2)))
    return np.stack(rows)


def abel_kernel(manifold, family, m, m2, policy: AbelPolicy | None = None) -> AbelResult:
    """Abel sum ``lim_{t -> 1} sum_l w_l t^l Pi_l(m, m')`` off the diagonal.

    ``family`` is a :class:`Sobolev` or :class:`Power` spec, or a bare index
    ``s`` meaning ``Sobolev(s, "inverse-power")``.
    """
    if isinstance(family, Heat):
        raise TypeError("the heat series converges; Abel summation is not needed")
    if not isinstance(family, (Sobolev, Power)):
        family = Sobolev(float(family), "inverse-power")
    policy = policy or AbelPolicy()
    seq = np.asarray(abel_sequence(manifold, family, m, m2, policy))
    ts = list(policy.t_sequence)
    diagnostics = list(zip(ts, seq))
    if np.any(_on_diagonal(manifold, m, m2)) and not threshold_exceeded(manifold, family):
        raise DivergenceError("Abel means diverge on the diagonal")
    if policy.extrapolation == "none":
        est, err = seq[-1], np.abs(seq[-1] - seq[-2]) if len(ts) > 1 else np.inf
    else:
        est, err, _ = iterated_aitken(seq)
    if np.any(np.asarray(err) > policy.tol):
        raise AbelNonConvergence(
            f"extrapolants differ by {np.max(err):.3g} > tol {policy.tol:g}", diagnostics
        )
    return AbelResult(est, diagnostics, err)


# ------------------------------------------------------------ closed forms


def sobolev_closed_circle(s: float, theta, theta2):
    """Closed forms of ``1 + (1/pi) sum_k k^(-2s) cos(k delta)`` for ``s = 1`` and ``1/2``."""
    delta = circle_separation(theta, theta2)
    if s == 1:
        return (1.0 + delta**2 / (4.0 * math.pi) - delta / 2.0 + math.pi / 6.0)[()]
    if s == 0.5:
        if np.any(delta == 0.0):
            raise DivergenceError("K_1/2 is singular on the diagonal")
        # 2 (1 - cos d) = (2 sin(d/2))^2
        return (1.0 - np.log(2.0 * np.sin(0.5 * delta)) / math.pi)[()]
    raise ValueError("closed forms exist for s = 1 and s = 1/2 only")


def circle_half_kernel_from_log(log_delta):
    """``K_1/2`` at separation ``delta = exp(log_delta)`` (tiny ``delta`` allowed).

    ``log(2 sin(delta/2)) = log(delta) + log(sinc)``, evaluated without forming
    ``delta`` so separations far below the float range remain usable.
    """
    log_delta = np.asarray(log_delta, dtype=float)
    if np.any(log_delta > math.log(math.pi)):
        raise ValueError("use sobolev_closed_circle for delta > pi")
    half = 0.5 * np.exp(log_delta)
    sinc = np.where(half > 0, np.sin(half) / np.where(half > 0, half, 1.0), 1.0)
    return (1.0 - (log_delta + np.log(sinc)) / math.pi)[()]


def sobolev_euclidean(n: int, s: float, x, y):
    """Kernel of ``(1 + Delta)^(-s)`` on R^n (Matern form).

    ``2^(1-s-n/2) / (pi^(n/2) Gamma(s)) K_{n/2-s}(rho) rho^(s-n/2)``, ``rho = |x - y|``.
    Off the diagonal this holds for every ``s > 0``; at ``rho = 0`` the limit
    ``Gamma(s - n/2) / ((4 pi)^(n/2) Gamma(s))`` exists only for ``s > n/2``.
    """
    if s <= 0:
        raise specfun.DomainError("Sobolev index must be positive")
    diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    if diff.ndim == 0:
        diff = diff[None]
    rho = np.linalg.norm(diff, axis=-1)
    if s <= n / 2.0 and np.any(rho == 0):
        raise DivergenceError("R^n kernel with s <= n/2 is infinite on the diagonal")
    return _euclidean_radial_closed(n, s, np.atleast_1d(rho)).reshape(rho.shape)[()]


def _euclidean_radial_closed(n, s, rho):
    rho = np.asarray(rho, dtype=float)
    nu = abs(n / 2.0 - s)
    pref = 2.0 ** (1.0 - s - n / 2.0) / (math.pi ** (n / 2.0) * math.gamma(s))
    out = np.empty_like(rho)
    zero = rho == 0
    out[zero] = math.gamma(s - n / 2.0) / ((4.0 * math.pi) ** (n / 2.0) * math.gamma(s))
    r = rho[~zero]
    out[~zero] = pref * specfun.bessel_k(nu, r) * r ** (s - n / 2.0) if r.size else []
    return out


def sobolev_euclidean_radial(n: int, s: float, rho: float, rtol: float = 1e-12) -> float:
    """Direct evaluation of the radial Fourier-Bessel integral for the R^n kernel.

    ``(2 pi)^(-n/2) rho^((2-n)/2) int_0^inf r^(n/2) (1+r^2)^(-s) J_{n/2-1}(r rho) dr``.
    The integrand oscillates with period ``2 pi / rho``; it is integrated over
    half-periods and the alternating partial sums are accelerated with Aitken.
    """
    if rho <= 0:
        raise ValueError("radial integral is evaluated for rho > 0")
    nu = n / 2.0 - 1.0

    def f(r):
        return r ** (n / 2.0) * (1.0 + r * r) ** (-s) * specfun.bessel_j(nu, r * rho)

    h = math.pi / rho
    # settle the non-oscillatory bulk before accelerating
    start = h * max(8, int(math.ceil(4.0 / h)))
    head, _ = integrate.quad(f, 0.0, start, limit=400, epsabs=0, epsrel=rtol)
    partial, pieces = [], 0.0
    a = start
    for _ in range(40):
        piece, _ = integrate.quad(f, a, a + h, epsabs=0, epsrel=rtol, limit=200)
        pieces += piece
        partial.append(pieces)
        a += h
    est, _, _ = iterated_aitken(np.array(partial)[:, None])
    total = head + float(np.asarray(est).ravel()[0])
    return (2.0 * math.pi) ** (-n / 2.0) * rho ** ((2.0 - n) / 2.0) * total
