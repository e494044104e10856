"""Scalar special functions: Gamma, Gegenbauer/Chebyshev, associated Legendre, Bessel.

Gegenbauer polynomials are evaluated by forward three-term recurrence. The
normalized polynomial ``B^nu_l(z) = C^nu_l(z) / C^nu_l(1)`` obeys

    (l + 2 nu - 1) B_l = 2 (l + nu - 1) z B_{l-1} - (l - 1) B_{l-2},

which is well defined for every ``nu >= 0`` and reduces to the Chebyshev
recurrence at ``nu = 0``.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import special


class DomainError(ValueError):
    """Argument outside the domain on which a function is defined here."""


def gamma(x: float) -> float:
    if x <= 0:
        raise DomainError(f"gamma is only supported for x > 0, got {x}")
    # math.gamma raises OverflowError above ~171.62
    return math.gamma(x)


def log_gamma(x):
    return special.gammaln(x)


def _check_nu(nu):
    if nu < 0:
        raise DomainError(f"Gegenbauer index nu must be >= 0, got {nu}")


def gegenbauer(nu: float, ell: int, z):
    """Unnormalized Gegenbauer polynomial ``C^nu_ell(z)``.

    Coefficients of ``(1 - 2 z t + t^2)^(-nu)`` in powers of ``t``. For ``nu = 0``
    the generating function is identically one, so every degree above zero
    vanishes.
    """
    _check_nu(nu)
    if ell < 0:
        raise DomainError("degree must be nonnegative")
    z = np.asarray(z, dtype=float)
    c_prev = np.ones_like(z)
    if ell == 0:
        return c_prev[()]
    c = 2.0 * nu * z
    for l in range(2, ell + 1):
        c_prev, c = c, (2.0 * (l + nu - 1) * z * c - (l + 2 * nu - 2) * c_prev) / l
    return c[()]


def gegenbauer_at_one(nu: float, ell: int) -> float:
    """``C^nu_ell(1) = (2 nu)_ell / ell!``."""
    _check_nu(nu)
    if nu == 0:
        return 1.0 if ell == 0 else 0.0
    return math.exp(
        math.lgamma(ell + 2 * nu) - math.lgamma(2 * nu) - math.lgamma(ell + 1)
    )


def gegenbauer_normalized(nu: float, ell: int, z):
    """Normalized Gegenbauer polynomial ``B^nu_ell(z)``; ``B(1) = 1``, ``B^0 = T``."""
    _check_nu(nu)
    if ell < 0:
        raise DomainError("degree must be nonnegative")
    z = np.asarray(z, dtype=float)
    b_prev = np.ones_like(z)
    if ell == 0:
        return b_prev[()]
    b = z.copy()
    for l in range(2, ell + 1):
        b_prev, b = b, (2.0 * (l + nu - 1) * z * b - (l - 1) * b_prev) / (l + 2 * nu - 1)
    return b[()]


def gegenbauer_normalized_all(nu: float, lmax: int, z) -> np.ndarray:
    """All ``B^nu_l(z)`` for ``l = 0..lmax``; shape ``(lmax + 1,) + z.shape``."""
    _check_nu(nu)
    z = np.asarray(z, dtype=float)
    out = np.empty((lmax + 1,) + z.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = z
    for l in range(2, lmax + 1):
        out[l] = (2.0 * (l + nu - 1) * z * out[l - 1] - (l - 1) * out[l - 2]) / (
            l + 2 * nu - 1
        )
    return out


def chebyshev_t(ell: int, z):
    return gegenbauer_normalized(0.0, ell, z)


@lru_cache(maxsize=64)
def _jacobi_rule(n: int, alpha: float):
    return special.roots_jacobi(n, alpha, 0.0)


def gegenbauer_integral_rep(nu: float, ell, theta: float, nodes: int = 160) -> float:
    """``B^nu_ell(cos theta)`` from its Mehler-Dirichlet type integral.

    The integrand carries ``(cos phi - cos theta)^(nu - 1)``, singular at
    ``phi = theta`` when ``nu < 1``. Writing ``phi = theta (1 + x) / 2`` moves the
    singular factor ``(theta - phi)^(nu - 1)`` into a Gauss-Jacobi weight
    ``(1 - x)^(nu - 1)``; the remaining factor is smooth for ``theta < pi``.
    ``ell`` may be any real number.
    """
    if nu <= 0:
        raise DomainError("integral representation requires nu > 0")
    if not 0.0 < theta < math.pi:
        raise DomainError("integral representation requires 0 < theta < pi")
    x, w = _jacobi_rule(nodes, nu - 1.0)
    phi = 0.5 * theta * (1.0 + x)
    gap = 0.5 * theta * (1.0 - x)  # theta - phi
    # cos(phi) - cos(theta) = 2 sin(gap/2) sin((theta+phi)/2), no cancellation
    ratio = 2.0 * np.sin(0.5 * gap) * np.sin(0.5 * (theta + phi)) / gap
    integral = (0.5 * theta) ** nu * np.sum(w * np.cos((ell + nu) * phi) * ratio ** (nu - 1.0))
    pref = 2.0**nu * math.gamma(nu + 0.5) / (math.gamma(nu) * math.sqrt(math.pi))
    return float(pref * math.sin(theta) ** (1.0 - 2.0 * nu) * integral)


def normalized_assoc_legendre(lmax: int, x) -> np.ndarray:
    """Orthonormal associated Legendre values ``p[l, m]`` for ``0 <= m <= l <= lmax``.

    Normalized so that ``p[l, 0](cos t)`` and ``sqrt(2) p[l, m](cos t) cos(m phi)``,
    ``sqrt(2) p[l, m](cos t) sin(m phi)`` form a real orthonormal basis of the
    degree-``l`` spherical harmonics on the unit sphere in R^3. Uses the standard
    stable recurrences in ``l`` at fixed ``m``. Shape ``(lmax+1, lmax+1) + x.shape``.
    """
    x = np.asarray(x, dtype=float)
    sint = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    p = np.zeros((lmax + 1, lmax + 1) + x.shape)
    p[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, lmax + 1):
        p[m, m] = -math.sqrt((2 * m + 1) / (2.0 * m)) * sint * p[m - 1, m - 1]
    for m in range(0, lmax):
        p[m + 1, m] = math.sqrt(2 * m + 3) * x * p[m, m]
    for m in range(0, lmax + 1):
        for l in range(m + 2, lmax + 1):
            a = math.sqrt((4.0 * l * l - 1) / (l * l - m * m))
            b = math.sqrt(((l - 1) ** 2 - m * m) / (4.0 * (l - 1) ** 2 - 1))
            p[l, m] = a * (x * p[l - 1, m] - b * p[l - 2, m])
    return p


def bessel_k(nu: float, z):
    """Modified Bessel function of the third kind ``K_nu(z)``, real ``nu``, ``z > 0``."""
    if nu < 0:
        raise DomainError("bessel_k expects nu >= 0 (K is even in nu)")
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("bessel_k requires z > 0")
    # scipy's kv returns nan for subnormal orders; K is even in nu, so the error is O(nu^2)
    if nu < 1e-300:
        nu = 0.0
    return special.kv(nu, z)[()]


def bessel_j(nu: float, z):
    """Bessel function of the first kind ``J_nu(z)`` for ``nu > -1``, ``z >= 0``.

    Orders down to ``-1/2`` occur as ``n/2 - 1`` for ``n = 1``.
    """
    if nu <= -1:
        raise DomainError("bessel_j expects nu > -1")
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("bessel_j requires z >= 0")
    return special.jv(nu, z)[()]
