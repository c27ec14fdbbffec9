import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tracelab.correlation import corr_sum, is_triangular
from tracelab.fp import InvalidInput, prime_context
from tracelab.resonance import (
    E_direct,
    E_via_fourier,
    ResonanceInstance,
    gamma_of,
    kloosterman_twisted_mult_check,
    resonance_check,
    resonating_matrix,
    sample_instance,
)
from tracelab.weights import (
    WeightTable,
    dft,
    hyper_kloosterman_table,
    kloosterman_weight,
    legendre_weight,
    quadratic_phase_weight,
    weight_from_descriptor,
)


def E_brute(inst, K):
    """Triple sum over u1, u2 and the Kloosterman variable x."""
    p = inst.p
    A = pow(inst.c * inst.d * inst.N, -1, p)
    B = pow(inst.c * inst.N, -1, p)
    u = np.arange(p)
    total = 0j
    for x in range(1, p):
        xb = pow(x, -1, p)
        ph = (inst.e * A * u[:, None] * x + B * u[None, :] * xb + A * u[:, None] * inst.n1 + B * u[None, :] * inst.n2)
        total += np.sum(K.values[:, None] * np.conj(K.values)[None, :] * np.exp(2j * np.pi * (ph % p) / p))
    return total


def weights(p):
    ctx = prime_context(p)
    return [
        kloosterman_weight(ctx),
        legendre_weight(ctx),
        quadratic_phase_weight(ctx),
        weight_from_descriptor(ctx, {"kind": "mixed-char", "chi": 1, "phi1": [0, 3, 0, 1], "phi2": [1, 1]}),
    ]


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_direct_matches_brute_force(p):
    rng = random.Random(p)
    for _ in range(6):
        inst = sample_instance(rng, p)
        for K in weights(p):
            want = E_brute(inst, K)
            assert E_direct(inst, K) == pytest.approx(want, abs=1e-8 * p * p)
            assert E_via_fourier(inst, dft(K)) == pytest.approx(want, abs=1e-8 * p * p)
            assert p * corr_sum(dft(K), gamma_of(inst).mod_p) == pytest.approx(want, abs=1e-8 * p * p)


@given(st.integers(0, 10**6), st.sampled_from([5, 7, 11, 13, 29]), st.sampled_from([2, 3, 4]))
def test_determinant_is_de(seed, p, N):
    if math.gcd(N, p) != 1:
        return
    inst = sample_instance(random.Random(seed), p, N)
    g = gamma_of(inst)
    assert g.det == inst.d * inst.e
    assert g.det % p != 0
    assert (g.a, g.b, g.c, g.d) == (inst.n1, (inst.n1 * inst.n2 - inst.e) // (inst.c * inst.N),
                                    inst.c * inst.d * inst.N, inst.d * inst.n2)


def test_worked_matrix():
    g = resonating_matrix(13, 2, 1, 1, 6, 2, 4)
    assert (g.a, g.b, g.c, g.d) == (2, 1, 2, 4) and g.det == 6
    assert not is_triangular(g.mod_p)
    assert g.mod_p.entries == (1, 7, 1, 2)


def test_worked_example_is_not_a_valid_instance():
    # e = 6 is not prime to N = 2, and n2 = 4 is not prime to cN = 2
    with pytest.raises(InvalidInput, match="coprime"):
        ResonanceInstance(13, 2, 1, 1, 6, 2, 4)


def test_congruence_violation():
    with pytest.raises(InvalidInput, match="divisible"):
        resonating_matrix(13, 2, 1, 1, 1, 2, 2)
    with pytest.raises(InvalidInput):
        ResonanceInstance(13, 2, 1, 1, 1, 2, 3)


def test_zero_weight_gives_zero():
    p = 11
    inst = sample_instance(random.Random(0), p)
    Z = WeightTable(prime_context(p), np.zeros(p))
    assert E_direct(inst, Z) == 0 and E_via_fourier(inst, dft(Z)) == 0


@given(st.floats(0, 2 * math.pi), st.integers(0, 1000))
def test_unimodular_scaling_invariance(theta, seed):
    p = 13
    inst = sample_instance(random.Random(seed), p)
    K = legendre_weight(prime_context(p))
    c = complex(math.cos(theta), math.sin(theta))
    assert E_direct(inst, K * c) == pytest.approx(E_direct(inst, K), abs=1e-9)


def test_twisted_multiplicativity():
    assert kloosterman_twisted_mult_check(1, 1, 3, 5)
    assert kloosterman_twisted_mult_check(4, 7, 9, 1)
    rng = random.Random(1)
    done = 0
    while done < 100:
        c1, c2 = rng.randint(1, 100), rng.randint(1, 100)
        if math.gcd(c1, c2) != 1:
            continue
        assert kloosterman_twisted_mult_check(rng.randint(-50, 50), rng.randint(-50, 50), c1, c2)
        done += 1
    with pytest.raises(InvalidInput):
        kloosterman_twisted_mult_check(1, 1, 4, 6)


def test_resonance_check_deterministic():
    p = 17
    ws = [kloosterman_weight(prime_context(p)), hyper_kloosterman_table(prime_context(p), 3)]
    a = resonance_check(p, ws, 10, seed=3, threads=1)
    b = resonance_check(p, ws, 10, seed=3, threads=4)
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]
    assert max(r.max_discrepancy for r in a) < 1e-6 * p * p
    assert len(a) == 20
