import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from spectral_rkhs import kernels, spectra
from spectral_rkhs.kernels import (
    AbelPolicy,
    FixedLevels,
    Heat,
    KernelSpec,
    Power,
    Sobolev,
    TailBound,
)
from spectral_rkhs.spectra import Circle, Euclidean, Sphere

S2 = Sphere(3)
NORTH = np.array([0.0, 0.0, 1.0])


def on_s2(theta):
    return spectra.point_from_polar(theta)


# ------------------------------------------------------------ oracles


def circle_bessel1(delta):
    """sum over k in Z of e^{ik delta} / (1 + k^2), divided by 2 pi."""
    return np.cosh(math.pi - delta) / (2.0 * math.sinh(math.pi))


def circle_riesz2(delta):
    """1 + (1/pi) sum k^-4 cos(k delta) via the degree-4 Bernoulli polynomial."""
    return 1.0 + (math.pi**4 / 90 - math.pi**2 * delta**2 / 12 + math.pi * delta**3 / 12 - delta**4 / 48) / math.pi


def circle_heat_images(t, delta, images=30):
    n = np.arange(-images, images + 1)
    return float(np.sum(np.exp(-((delta + 2 * math.pi * n) ** 2) / (4 * t))) / math.sqrt(4 * math.pi * t))


def s2_half_inverse_power(z, L=40000):
    """Inverse-power s = 1/2 kernel on S^2 by subtracting the 1/sqrt(2 - 2z) singularity.

    The subtracted series sums in closed form through the Legendre generating
    function; the remainder has O(l^-2) coefficients and is summed directly.
    """
    ell = np.arange(L + 1, dtype=float)
    r = (2 * ell + 1) / (4 * math.pi * (1 + np.sqrt(ell * (ell + 1)))) - (1 - 1 / (ell + 1.5)) / (2 * math.pi)
    # Bonnet recurrence; scipy's eval_legendre breaks down past degree ~2000
    p = np.empty(L + 1)
    p[0], p[1] = 1.0, z
    for l in range(1, L):
        p[l + 1] = ((2 * l + 1) * z * p[l] - l * p[l - 1]) / (l + 1)
    rest = math.fsum(r * p)
    inner, _ = integrate.quad(lambda x: math.sqrt(x) / math.sqrt(1 - 2 * x * z + x * x), 0, 1, epsabs=1e-14)
    return (1 / math.sqrt(2 - 2 * z) - inner) / (2 * math.pi) + rest


# ------------------------------------------------------------ examples


def test_circle_bessel_matches_hyperbolic_form():
    delta = np.linspace(0, 2 * math.pi, 41)
    val, tail = kernels.sobolev_kernel(Circle(), KernelSpec(Sobolev(1.0), FixedLevels(200000)), 0.0, delta)
    np.testing.assert_allclose(val, circle_bessel1(delta), atol=2e-6)
    assert np.max(np.abs(val - circle_bessel1(delta))) <= tail


def test_circle_riesz2_matches_bernoulli():
    delta = np.linspace(0, 2 * math.pi, 33)
    val, tail = kernels.sobolev_kernel(Circle(), KernelSpec(Sobolev(2.0, "riesz"), TailBound(1e-12)), 0.0, delta)
    assert tail <= 1e-12
    np.testing.assert_allclose(val, circle_riesz2(delta), atol=1e-11)


def test_circle_closed_forms():
    assert kernels.sobolev_closed_circle(1, 0.0, 0.0) == pytest.approx(1 + math.pi / 6)
    assert kernels.sobolev_closed_circle(1, 0.0, math.pi) == pytest.approx(1 + math.pi / 4 - math.pi / 2 + math.pi / 6)
    assert kernels.sobolev_closed_circle(0.5, 0.0, math.pi) == pytest.approx(1 - math.log(2) / math.pi)
    with pytest.raises(kernels.DivergenceError):
        kernels.sobolev_closed_circle(0.5, 1.0, 1.0)
    with pytest.raises(ValueError):
        kernels.sobolev_closed_circle(2, 0.0, 1.0)
    assert kernels.circle_half_kernel_from_log(math.log(0.3)) == pytest.approx(
        kernels.sobolev_closed_circle(0.5, 0.0, 0.3), abs=1e-14
    )
    assert kernels.circle_half_kernel_from_log(-1000 * math.pi) == pytest.approx(1 + 1000.0, rel=1e-14)


def test_circle_riesz1_partial_sums_approach_closed_form():
    delta = np.linspace(0.1, 6.0, 12)
    val, _ = kernels.sobolev_kernel(Circle(), KernelSpec(Sobolev(1.0, "riesz"), FixedLevels(100000)), 0.0, delta)
    np.testing.assert_allclose(val, kernels.sobolev_closed_circle(1, 0.0, delta), atol=1e-5)


def test_heat_circle_matches_image_sum():
    for t in (0.05, 0.3, 2.0):
        for delta in (0.0, 1.0, 3.0):
            val, _ = kernels.heat_kernel(Circle(), t, 0.0, delta)
            assert val == pytest.approx(circle_heat_images(t, delta), rel=1e-11)


def test_heat_sphere_brute_force():
    t = 0.2
    theta = np.linspace(0, math.pi, 9)
    ell = np.arange(200)
    z = np.cos(theta)
    brute = np.array(
        [np.sum((2 * ell + 1) / (4 * math.pi) * np.exp(-t * ell * (ell + 1)) * special.eval_legendre(ell, zz)) for zz in z]
    )
    val, tail = kernels.heat_kernel(S2, t, NORTH, on_s2(theta))
    assert tail <= 1e-12
    np.testing.assert_allclose(val, brute, atol=1e-12)


def test_heat_refines_tiny_values():
    val, _ = kernels.heat_kernel(Circle(), 0.01, 0.0, math.pi)
    assert val > 0
    assert val == pytest.approx(circle_heat_images(0.01, math.pi), rel=1e-8)


def test_heat_euclidean():
    val, tail = kernels.heat_kernel(Euclidean(2), 0.5, np.zeros(2), np.array([1.0, 0.0]))
    assert val == pytest.approx(math.exp(-0.5) / (2 * math.pi), rel=1e-14)
    assert tail == 0.0


@pytest.mark.parametrize(
    "n, s, rho, expected",
    [
        (1, 1.0, 0.7, 0.5 * math.exp(-0.7)),
        (3, 1.0, 0.5, math.exp(-0.5) / (4 * math.pi * 0.5)),
        (3, 2.0, 0.0, 1 / (8 * math.pi)),
        (3, 2.0, 1.2, math.exp(-1.2) / (8 * math.pi)),
    ],
)
def test_euclidean_closed_form_examples(n, s, rho, expected):
    x = np.zeros(n)
    y = np.zeros(n)
    y[0] = rho
    assert kernels.sobolev_euclidean(n, s, x, y) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("n, s", [(1, 1.0), (2, 1.5), (3, 2.0), (3, 1.0)])
def test_euclidean_radial_integral_agrees(n, s):
    for rho in (0.3, 1.0, 2.5):
        closed = kernels._euclidean_radial_closed(n, s, np.array([rho]))[0]
        assert kernels.sobolev_euclidean_radial(n, s, rho) == pytest.approx(closed, rel=1e-8)


def test_euclidean_errors():
    with pytest.raises(kernels.DivergenceError):
        kernels.sobolev_euclidean(3, 1.0, np.zeros(3), np.zeros(3))
    with pytest.raises(Exception):
        kernels.sobolev_euclidean(3, 0.0, np.zeros(3), np.ones(3))


# ---------------------------------------------------- truncation and errors


@pytest.mark.parametrize(
    "manifold, family",
    [
        (Circle(), Sobolev(1.5)),
        (S2, Sobolev(2.0)),
        (S2, Sobolev(1.5, "inverse-power")),
        (Sphere(5), Sobolev(3.0)),
        (S2, Heat(0.01)),
    ],
)
def test_tail_bound_is_certified(manifold, family):
    L, tail = kernels.choose_levels(manifold, family, TailBound(1e-4))
    assert tail <= 1e-4
    w = kernels.spectral_weights(manifold, family, 40 * L)
    d = spectra.multiplicities(manifold, 40 * L)
    # diagonal tail dominates every off-diagonal one
    actual = float(np.sum((w * d)[L + 1 :]) / manifold.volume)
    assert actual <= tail


def test_truncation_error_when_levels_exceed_cap():
    with pytest.raises(kernels.TruncationError):
        kernels.sobolev_kernel(Circle(), KernelSpec(Sobolev(1.0)), 0.0, 1.0)


def test_divergence_and_regime_errors():
    with pytest.raises(kernels.DivergenceError):
        kernels.sobolev_kernel(S2, KernelSpec(Sobolev(1.0)), NORTH, NORTH)
    with pytest.raises(kernels.RegimeError):
        kernels.sobolev_kernel(S2, KernelSpec(Sobolev(1.0)), NORTH, on_s2(1.0))
    with pytest.raises(kernels.DivergenceError):
        kernels.kernel_power(S2, 2.0, 0.4, NORTH, NORTH)
    with pytest.raises(ValueError):
        Sobolev(-1.0)
    with pytest.raises(ValueError):
        Sobolev(1.0, "weird")
    with pytest.raises(ValueError):
        Power(Sobolev(1.0), 1.5)
    with pytest.raises(ValueError):
        Heat(0.0)
    with pytest.raises(ValueError):
        AbelPolicy(t_sequence=(0.5, 0.4))


def test_fixed_levels_below_threshold_is_a_partial_sum():
    val, tail = kernels.sobolev_kernel(S2, KernelSpec(Sobolev(1.0), FixedLevels(10)), NORTH, NORTH)
    assert math.isinf(tail)
    ell = np.arange(11)
    assert val == pytest.approx(np.sum((2 * ell + 1) / (4 * math.pi) / (1 + ell * (ell + 1))), rel=1e-13)


def test_threshold():
    assert kernels.threshold_exceeded(Circle(), Sobolev(0.6))
    assert not kernels.threshold_exceeded(Circle(), Sobolev(0.5))
    assert not kernels.threshold_exceeded(S2, Sobolev(1.0))
    assert kernels.threshold_exceeded(S2, Power(Sobolev(4.0), 0.3))
    assert not kernels.threshold_exceeded(S2, Power(Sobolev(2.0), 0.5))


# -------------------------------------------------------------------- Abel


def test_abel_circle_half_matches_log_form():
    delta = np.array([0.05, 0.5, 2.0, 4.0])
    res = kernels.abel_kernel(Circle(), Sobolev(0.5, "riesz"), 0.0, delta[1:])
    np.testing.assert_allclose(res.value, kernels.sobolev_closed_circle(0.5, 0.0, delta[1:]), atol=1e-6)
    assert len(res.diagnostics) == 12
    # close pairs need t nearer one
    long = AbelPolicy(t_sequence=tuple(1 - 2.0**-j for j in range(3, 19)))
    res = kernels.abel_kernel(Circle(), Sobolev(0.5, "riesz"), 0.0, delta, long)
    np.testing.assert_allclose(res.value, kernels.sobolev_closed_circle(0.5, 0.0, delta), atol=1e-6)


@pytest.mark.parametrize("theta", [math.pi / 2, 1.0, 2.5])
def test_abel_s2_half_matches_subtraction_oracle(theta):
    res = kernels.abel_kernel(S2, 0.5, NORTH, on_s2(theta))
    assert float(res.value) == pytest.approx(s2_half_inverse_power(math.cos(theta)), abs=2e-6)


def test_abel_s2_frozen_value():
    # subtraction-oracle value at the equator
    res = kernels.abel_kernel(S2, 0.5, NORTH, on_s2(math.pi / 2))
    assert float(res.value) == pytest.approx(0.0481677231, abs=1e-6)


def test_abel_above_threshold_agrees_with_direct_sum():
    fam = Sobolev(2.0, "inverse-power")
    theta = np.array([0.3, 1.5, 3.0])
    direct, _ = kernels.sobolev_kernel(S2, KernelSpec(fam, TailBound(1e-10)), NORTH, on_s2(theta))
    res = kernels.abel_kernel(S2, fam, NORTH, on_s2(theta))
    np.testing.assert_allclose(res.value, direct, atol=1e-6)


def test_abel_means_grow_on_the_diagonal():
    fam = Sobolev(0.5, "inverse-power")
    pol = AbelPolicy(t_sequence=(0.9, 0.99, 0.999))
    seq = kernels.abel_sequence(S2, fam, NORTH, NORTH, pol)
    assert np.all(np.diff(seq) > 0)
    # K_{s,t}(m, m) ~ c / (1 - t) for s = 1/2 on S^2
    ratio = seq[-1] / seq[-2]
    assert 5 < ratio < 15
    with pytest.raises(kernels.DivergenceError):
        kernels.abel_kernel(S2, fam, NORTH, NORTH, pol)


def test_abel_nonconvergence_reports_diagnostics():
    pol = AbelPolicy(t_sequence=(0.5, 0.6, 0.7), tol=1e-12)
    with pytest.raises(kernels.AbelNonConvergence) as info:
        kernels.abel_kernel(S2, 0.5, NORTH, on_s2(0.2), pol)
    assert len(info.value.diagnostics) == 3


def test_abel_rejects_heat():
    with pytest.raises(TypeError):
        kernels.abel_kernel(S2, Heat(1.0), NORTH, on_s2(1.0))


def test_spec_with_abel_routes_below_threshold():
    spec = KernelSpec(Sobolev(0.5, "inverse-power"), abel=AbelPolicy())
    val, err = kernels.sobolev_kernel(S2, spec, NORTH, on_s2(1.0))
    assert float(val) == pytest.approx(s2_half_inverse_power(math.cos(1.0)), abs=2e-6)
    assert err <= 1e-6


# ------------------------------------------------------------------- powers


def test_power_of_bessel_is_sobolev():
    theta = np.linspace(0, math.pi, 7)
    a, _ = kernels.kernel_power(S2, 4.0, 0.5, NORTH, on_s2(theta), TailBound(1e-10))
    b, _ = kernels.sobolev_kernel(S2, KernelSpec(Sobolev(2.0), TailBound(1e-10)), NORTH, on_s2(theta))
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_power_one_is_the_base():
    a, _ = kernels.kernel_power(Circle(), 2.0, 1.0, 0.0, 1.0, TailBound(1e-10))
    b, _ = kernels.sobolev_kernel(Circle(), KernelSpec(Sobolev(2.0), TailBound(1e-10)), 0.0, 1.0)
    assert a == pytest.approx(b, abs=1e-12)


def test_evaluate_dispatch():
    spec = KernelSpec(Power(Sobolev(3.0), 0.5), TailBound(1e-8))
    a = kernels.evaluate(Circle(), spec, 0.0, 0.4).value
    b = kernels.kernel_power(Circle(), 3.0, 0.5, 0.0, 0.4, TailBound(1e-8)).value
    assert a == b
    h = kernels.evaluate(Circle(), KernelSpec(Heat(0.5)), 0.0, 0.4).value
    # spec default truncation is TailBound(1e-8)
    assert h == pytest.approx(circle_heat_images(0.5, 0.4), abs=1e-8)


# --------------------------------------------------------------- properties


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["bessel", "inverse-power", "riesz"]))
def test_symmetry(seed, weighting):
    rng = np.random.default_rng(seed)
    x = spectra.random_points(S2, 6, rng)
    y = spectra.random_points(S2, 6, rng)
    spec = KernelSpec(Sobolev(1.7, weighting), TailBound(1e-6))
    a = kernels.evaluate(S2, spec, x, y).value
    b = kernels.evaluate(S2, spec, y, x).value
    np.testing.assert_allclose(a, b, atol=1e-14)


@settings(max_examples=20, deadline=None)
@given(st.floats(2.0, 4.0), st.floats(0.01, 1.0))
def test_diagonal_decreases_in_s(s, ds):
    spec1 = KernelSpec(Sobolev(s), TailBound(1e-8))
    spec2 = KernelSpec(Sobolev(s + ds), TailBound(1e-8))
    a = kernels.evaluate(S2, spec1, NORTH, NORTH).value
    b = kernels.evaluate(S2, spec2, NORTH, NORTH).value
    assert b < a


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 2 * math.pi), st.floats(0.0, 2 * math.pi))
def test_circle_kernel_depends_on_separation_only(a, b):
    spec = KernelSpec(Sobolev(1.5), TailBound(1e-9))
    v1 = kernels.evaluate(Circle(), spec, a, b).value
    v2 = kernels.evaluate(Circle(), spec, 0.0, float(spectra.circle_separation(a, b))).value
    assert v1 == pytest.approx(v2, abs=1e-12)


def test_diagonal_dominates():
    spec = KernelSpec(Sobolev(2.5), TailBound(1e-9))
    theta = np.linspace(0.01, math.pi, 50)
    diag = kernels.evaluate(S2, spec, NORTH, NORTH).value
    off = kernels.evaluate(S2, spec, NORTH, on_s2(theta)).value
    assert np.all(np.abs(off) < diag)


def test_euclidean_n3_s1_singularity_slope():
    rho = np.geomspace(1e-4, 1e-2, 10)
    x = np.zeros((10, 3))
    y = np.zeros((10, 3))
    y[:, 0] = rho
    val = kernels.sobolev_euclidean(3, 1.0, x, y)
    slope = np.polyfit(np.log(rho), np.log(val), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.01)
