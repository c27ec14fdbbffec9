"""Holomorphic cusp-form coefficients and sums of them twisted by trace weights."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Mapping, Sequence

import numpy as np
from scipy import optimize

from .fp import InvalidInput, is_prime, prime_context
from .weights import WeightTable, weight_from_descriptor


class InsufficientCoefficients(InvalidInput):
    """Raised when a sum needs more coefficients than were computed."""


# -- Ramanujan's tau --


def euler_product_coefficients(n_max: int) -> list[int]:
    """Coefficients of prod_{m>=1} (1 - q^m) up to q^n_max (pentagonal numbers)."""
    f = [0] * (n_max + 1)
    k = 0
    while True:
        hit = False
        for j in (k, -k) if k else (0,):
            e = j * (3 * j - 1) // 2
            if e <= n_max:
                f[e] = -1 if j % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return f


def series_power(f: Sequence[int], alpha: int, n_max: int) -> list[int]:
    """Exact coefficients of F^alpha for an integer series with F(0) = 1.

    Uses n g_n = sum_{k=1}^n ((alpha + 1) k - n) f_k g_{n-k}, skipping the
    zero f_k, so a sparse F costs O(n_max * #nonzero).
    """
    if f[0] != 1:
        raise InvalidInput("series_power needs constant term 1")
    support = [k for k in range(1, min(len(f), n_max + 1)) if f[k]]
    g = [0] * (n_max + 1)
    g[0] = 1
    for n in range(1, n_max + 1):
        acc = 0
        for k in support:
            if k > n:
                break
            acc += ((alpha + 1) * k - n) * f[k] * g[n - k]
        q, r = divmod(acc, n)
        if r:
            raise AssertionError("non-integral coefficient in series_power")
        g[n] = q
    return g


@lru_cache(maxsize=8)
def ramanujan_tau(n_max: int) -> tuple[int, ...]:
    """(0, tau(1), ..., tau(n_max)) from q prod (1 - q^m)^24."""
    if n_max < 1:
        raise InvalidInput(f"n_max must be >= 1, got {n_max}")
    eta24 = series_power(euler_product_coefficients(n_max), 24, n_max - 1)
    return (0, *eta24)


@dataclass(frozen=True, eq=False)
class CuspFormCoeffs:
    """Normalized coefficients rho(n) = a(n) / n^((k-1)/2), stored from index 0."""

    label: str
    weight: int
    level: int
    a: tuple[int, ...]
    rho: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.a) - 1


def delta_coefficients(n_max: int) -> CuspFormCoeffs:
    tau = ramanujan_tau(n_max)
    n = np.arange(1, n_max + 1, dtype=float)
    rho = np.zeros(n_max + 1)
    # divide in two steps: tau(n) fits a double but n^11 may not for large n
    rho[1:] = np.array([float(t) for t in tau[1:]]) / n**5.5
    rho.setflags(write=False)
    return CuspFormCoeffs("Delta", 12, 1, tau, rho)


# -- test functions --


def _bump(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t, dtype=float)
    inside = np.abs(t) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
    return out


def _bump_derivative_polys(max_order: int) -> list[np.ndarray]:
    """P_nu(t, u) with d^nu/dt^nu bump = bump * P_nu, where u = 1/(1 - t^2).

    Coefficient arrays are indexed [i, j] for t^i u^j; the recursion is
    P_{nu+1} = dP/dt + (dP/du)(2 t u^2) - 2 t u^2 P, from u' = 2 t u^2.
    """
    n = 4 * max_order + 2
    out = [np.zeros((n, n))]
    out[0][0, 0] = 1.0
    for _ in range(max_order):
        P = out[-1]
        Q = np.zeros_like(P)
        i, j = np.nonzero(P)
        for a, b in zip(i, j):
            c = P[a, b]
            if a:
                Q[a - 1, b] += a * c
            if b:
                Q[a + 1, b + 1] += 2 * b * c
            Q[a + 1, b + 2] -= 2 * c
        out.append(Q)
    return out


def _bump_derivative(t: np.ndarray, poly: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    u = 1.0 / (1.0 - t * t)
    i, j = np.nonzero(poly)
    acc = sum(poly[a, b] * t**a * u**b for a, b in zip(i, j))
    return _bump(t) * acc


@dataclass(frozen=True)
class TestFunctionV:
    """The bump exp(1 - 1/(1 - t^2)), t = (2x - 3P)/P, supported on [P, 2P]."""

    P: float
    Q: float
    derivative_maxima: tuple[float, ...] = ()

    __test__ = False  # not a pytest class

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return _bump((2 * x - 3 * self.P) / self.P)


def certify_Q(P: float, max_order: int = 4, grid: int = 4001) -> tuple[float, tuple[float, ...]]:
    """Smallest Q with max |x^nu V^(nu)(x)| <= Q^nu, nu = 1..max_order.

    Derivatives are exact; each maximum is located on a grid and then
    refined by a bounded scalar search around the best grid point.
    """
    polys = _bump_derivative_polys(max_order)
    t_grid = np.linspace(-1, 1, grid)[1:-1]
    maxima = []
    for nu in range(1, max_order + 1):
        def g(t, nu=nu):
            x = P * (3 + t) / 2
            return -np.abs(x**nu * (2 / P) ** nu * _bump_derivative(t, polys[nu]))

        vals = g(t_grid)
        k = int(np.argmin(vals))
        lo, hi = t_grid[max(k - 1, 0)], t_grid[min(k + 1, len(t_grid) - 1)]
        best = optimize.minimize_scalar(lambda t: float(g(np.array([t]))[0]), bounds=(lo, hi), method="bounded",
                                        options={"xatol": 1e-12})
        maxima.append(float(-min(best.fun, vals[k])))
    Q = max(1.0, *(m ** (1 / nu) for nu, m in enumerate(maxima, start=1)))
    return Q, tuple(maxima)


def build_V(P: float = 0.5) -> TestFunctionV:
    if not P > 0:
        raise InvalidInput(f"P must be positive, got {P}")
    Q, maxima = certify_Q(P)
    return TestFunctionV(P, Q, maxima)


# -- sums --


def _require(f: CuspFormCoeffs, n: int):
    if f.n_max < n:
        raise InsufficientCoefficients(
            f"need coefficients up to n = {n}, but {f.label} has only n_max = {f.n_max}"
        )


def support_range(P: float, p: int) -> tuple[int, int]:
    return math.ceil(P * p), math.floor(2 * P * p)


def twisted_sum(f: CuspFormCoeffs, K: WeightTable, V: TestFunctionV, p: int | None = None) -> complex:
    """S_V(f, K; p) = sum_n rho(n) K(n) V(n/p), K extended periodically."""
    p = K.p if p is None else p
    if p != K.p:
        raise InvalidInput(f"weight is mod {K.p} but p = {p}")
    lo, hi = support_range(V.P, p)
    _require(f, math.ceil(2 * V.P * p))
    n = np.arange(max(lo, 1), hi + 1)
    return complex(np.sum(f.rho[n] * K.values[n % p] * V(n / p)))


def linear_phase_sum(f: CuspFormCoeffs, alpha: float, x: int) -> complex:
    """sum_{n <= x} rho(n) e(alpha n)."""
    _require(f, x)
    n = np.arange(1, x + 1)
    ph = np.exp(2j * math.pi * np.mod(alpha * n, 1.0))
    return complex(np.sum(f.rho[1 : x + 1] * ph))


def rankin_partial(f: CuspFormCoeffs, x: int) -> float:
    """(1/x) sum_{n <= x} |rho(n)|^2."""
    _require(f, x)
    return float(np.sum(f.rho[1 : x + 1] ** 2) / x)


# -- exponent scans --


def primes_geometric(lo: int, hi: int, count: int) -> list[int]:
    """``count`` distinct primes near a geometric grid between lo and hi."""
    out: list[int] = []
    for target in np.geomspace(lo, hi, count):
        q = max(int(round(target)), out[-1] + 1 if out else 3)
        while not is_prime(q):
            q += 1
        out.append(q)
    if out[-1] > hi:
        # walk back from hi so the grid stays inside [lo, hi]
        q = hi
        while not is_prime(q) or q in out[:-1]:
            q -= 1
        out[-1] = q
    return out


@dataclass
class ScanReport:
    family: Mapping[str, Any]
    P: float
    Q: float
    rows: list[dict]
    slope: float
    intercept: float
    residuals: list[float]
    n_used: int


def _scan_row(f, desc, V, p) -> dict:
    K = weight_from_descriptor(prime_context(p), desc)
    s = twisted_sum(f, K, V, p)
    mag = abs(s)
    return {
        "p": p,
        "weight_label": K.label,
        "P": V.P,
        "Q": V.Q,
        "re": s.real,
        "im": s.imag,
        "abs": mag,
        "local_exponent": math.log(mag) / math.log(p) if mag > 0 else float("-inf"),
    }


def exponent_scan(
    f: CuspFormCoeffs,
    family: Mapping[str, Any],
    primes: Sequence[int],
    P: float = 0.5,
    threads: int = 1,
) -> ScanReport:
    """|S_V(f, K_p; p)| across primes and the OLS slope of log|S_V| on log p."""
    primes = list(primes)
    if len(primes) < 3:
        raise InvalidInput(f"primes: exponent scan needs at least 3 primes, got {len(primes)}")
    if primes != sorted(primes):
        raise InvalidInput("primes: must be sorted ascending")
    V = build_V(P)
    _require(f, math.ceil(2 * P * primes[-1]))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda p: _scan_row(f, family, V, p), primes))
    else:
        rows = [_scan_row(f, family, V, p) for p in primes]
    used = [r for r in rows if r["abs"] >= 1e-8]
    if len(used) < 2:
        raise InvalidInput("too few primes with |S_V| >= 1e-8 to fit a slope")
    lx = np.log([r["p"] for r in used])
    ly = np.log([r["abs"] for r in used])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return ScanReport(dict(family), P, V.Q, rows, float(slope), float(intercept), resid.tolist(), len(used))
