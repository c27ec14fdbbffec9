import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tracelab.fp import InvalidInput, prime_context
from tracelab.modular import InsufficientCoefficients, delta_coefficients
from tracelab.orbits import (
    Box,
    UpperHalfPoint,
    atoms_csv,
    atoms_svg,
    default_boxes,
    discrepancy_report,
    fourier_side_check,
    hecke_point,
    poly_twisted_measure,
    reduce_with_matrix,
    tail_box,
    twisted_measure,
    untwisted_measure,
)
from tracelab.weights import additive_weight, kloosterman_weight, legendre_weight

I = UpperHalfPoint(0.0, 1.0)


def in_fundamental_domain(z, eps=1e-9):
    return abs(z.real) <= 0.5 + eps and abs(z) >= 1 - eps


points = st.tuples(st.floats(-50, 50), st.floats(1e-4, 20)).map(lambda t: complex(*t))


@given(points)
def test_reduction_matrix(z):
    w, (a, b, c, d) = reduce_with_matrix(z)
    assert a * d - b * c == 1
    assert in_fundamental_domain(w)
    assert (a * z + b) / (c * z + d) == pytest.approx(w, rel=1e-7, abs=1e-7)


@given(points, st.sampled_from([(1, 1, 0, 1), (0, -1, 1, 0), (2, 1, 1, 1), (1, 0, 3, 1)]))
def test_reduction_is_invariant(z, g):
    a, b, c, d = g
    gz = (a * z + b) / (c * z + d)
    w1, _ = reduce_with_matrix(z)
    w2, _ = reduce_with_matrix(gz)
    if abs(abs(w1) - 1) > 1e-6 and abs(abs(w1.real) - 0.5) > 1e-6:
        assert w2 == pytest.approx(w1, abs=1e-6)


def test_boundary_conventions():
    assert reduce_with_matrix(complex(0.5, 2.0))[0] == complex(-0.5, 2.0)
    w, _ = reduce_with_matrix(complex(0.3, math.sqrt(1 - 0.09)))
    assert w.real == pytest.approx(-0.3) and abs(w) == pytest.approx(1)


def test_hecke_points():
    tau = UpperHalfPoint(0.25, 2.0)
    assert hecke_point(7, 3, tau) == UpperHalfPoint(3.25 / 7, 2.0 / 7)
    assert hecke_point(7, None, tau) == UpperHalfPoint(1.75, 14.0)
    with pytest.raises(InvalidInput):
        UpperHalfPoint(0.0, 0.0)


# -- box masses --


@pytest.mark.parametrize("box", default_boxes() + [tail_box()])
def test_box_mass_closed_form_above_arc(box):
    want = 3 / math.pi * (box.x1 - box.x0) * (1 / box.y0 - (0 if math.isinf(box.y1) else 1 / box.y1))
    assert box.hyperbolic_mass() == pytest.approx(want, rel=1e-9)


def test_box_masses_reaching_the_arc():
    assert Box(-0.5, 0.5, 0.5).hyperbolic_mass() == pytest.approx(1.0, rel=1e-9)
    assert Box(-0.5, 0.5, 0.5, 2.0).hyperbolic_mass() == pytest.approx(1 - 1.5 / math.pi, rel=1e-9)
    # the part of the domain below y = 1: 1 - (3/pi)
    assert Box(-0.5, 0.5, 0.0, 1.0).hyperbolic_mass() == pytest.approx(1 - 3 / math.pi, rel=1e-8)


def test_default_boxes_partition_the_strip():
    total = sum(b.hyperbolic_mass() for b in default_boxes()) + tail_box().hyperbolic_mass()
    assert total == pytest.approx(3 / math.pi)
    with pytest.raises(InvalidInput):
        Box(-0.6, 0.0, 1.0, 2.0)


# -- measures --


@pytest.mark.parametrize("p", [11, 101])
def test_untwisted_mass_is_one(p):
    mu = untwisted_measure(p, I)
    assert len(mu) == p + 1
    assert mu.total_mass == pytest.approx(1.0)
    assert all(in_fundamental_domain(complex(x, y)) for x, y in zip(mu.x, mu.y))


@given(st.sampled_from([11, 13, 31]), st.data())
def test_twisted_mass_conservation(p, data):
    lo = data.draw(st.integers(1, p))
    hi = data.draw(st.integers(lo, p))
    K = kloosterman_weight(prime_context(p))
    mu = twisted_measure(p, I, K, (lo, hi))
    want = sum(K[t] for t in range(lo, hi + 1)) / (hi - lo + 1)
    assert mu.total_mass == pytest.approx(want)


def test_interval_validation():
    K = legendre_weight(prime_context(11))
    with pytest.raises(InvalidInput, match="interval"):
        twisted_measure(11, I, K, (0, 5))
    with pytest.raises(InvalidInput):
        twisted_measure(13, I, K)


@pytest.mark.parametrize("phi", [[0, 1], [0, 0, 1], [1, 0, 0, 1]])
def test_poly_measure_counts_fibers(phi):
    p = 13
    mu = poly_twisted_measure(p, I, phi)
    assert mu.total_mass == pytest.approx(1.0)
    # same atoms as the plain orbit over [1, p]
    base = twisted_measure(p, I, additive_weight(prime_context(p), 0))
    assert np.allclose(mu.x, base.x) and np.allclose(mu.y, base.y)


def test_odd_character_vanishes_on_full_interval_at_i():
    # t -> -tbar pairs Hecke points of i, and chi(-1) = -1 when p = 3 mod 4
    p = 211
    rep = discrepancy_report(twisted_measure(p, I, legendre_weight(prime_context(p))), compare=False)
    assert rep["max_deviation"] < 1e-12


def test_untwisted_orbit_equidistributes():
    rep = discrepancy_report(untwisted_measure(1009, UpperHalfPoint(0.1, 1.3)))
    assert rep["max_deviation"] < 0.05
    assert len(rep["boxes"]) == 9


# -- Fourier side --


@pytest.mark.parametrize("p,interval", [(31, None), (31, (3, 17)), (101, (1, 50))])
def test_fourier_side_identity(p, interval):
    f = delta_coefficients(60)
    K = kloosterman_weight(prime_context(p))
    out = fourier_side_check(p, UpperHalfPoint(0.2, 1.1), K, f, [1, 2, 5, 60], interval)
    assert out["relative_discrepancy"] < 1e-10


def test_fourier_side_needs_coefficients():
    f = delta_coefficients(10)
    K = legendre_weight(prime_context(31))
    with pytest.raises(InsufficientCoefficients):
        fourier_side_check(31, I, K, f, [11])
    with pytest.raises(InvalidInput):
        fourier_side_check(31, I, K, f, [])


def test_outputs():
    mu = untwisted_measure(13, UpperHalfPoint(0.1, 1.2))
    csv = atoms_csv(mu).splitlines()
    assert csv[0] == "x,y,re_w,im_w" and len(csv) == 15
    svg = atoms_svg(mu)
    assert svg.startswith("<svg") and svg.count("<circle") <= 14


def exact_mobius(g, z):
    """(az + b)/(cz + d) in exact rational arithmetic on the binary value of z, rounded once."""
    a, b, c, d = g
    x, y = Fraction(z.real), Fraction(z.imag)
    nr, ni, dr, di = a * x + b, a * y, c * x + d, c * y
    den = dr * dr + di * di
    return complex(float((nr * dr + ni * di) / den), float((ni * dr - nr * di) / den))


def test_reduction_on_many_random_points():
    rng = np.random.default_rng(7)
    xs = rng.uniform(-100, 100, 100_000)
    ys = np.exp(rng.uniform(math.log(1e-3), math.log(50), 100_000))
    for z in xs + 1j * ys:
        w, (a, b, c, d) = reduce_with_matrix(z)
        assert a * d - b * c == 1
        assert in_fundamental_domain(w, 1e-12)
        assert abs(exact_mobius((a, b, c, d), z) - w) <= 1e-12 * abs(w)


def test_fourier_side_single_term():
    p, tau = 37, UpperHalfPoint(0.3, 0.9)
    K = kloosterman_weight(prime_context(p))
    f = delta_coefficients(5)
    out = fourier_side_check(p, tau, K, f, [1])
    ts = np.arange(p)
    by_hand = np.sum(K.values * np.exp(2j * np.pi * (tau.z + ts) / p))
    assert complex(*out["direct"]) == pytest.approx(by_hand, rel=1e-12)
    assert complex(*out["dual"]) == pytest.approx(by_hand, rel=1e-10)
    assert complex(*out["hat"]) == pytest.approx(by_hand, rel=1e-10)


def test_fourier_side_random_weight_three_frequencies():
    from tracelab.weights import WeightTable

    p = 101
    rng = np.random.default_rng(3)
    K = WeightTable(prime_context(p), rng.normal(size=p) + 1j * rng.normal(size=p), "random")
    out = fourier_side_check(p, UpperHalfPoint(-0.2, 1.4), K, delta_coefficients(40), [2, 7, 40], (5, 80))
    assert out["relative_discrepancy"] < 1e-8
