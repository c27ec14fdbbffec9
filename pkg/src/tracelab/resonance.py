"""The two-variable sums E(c,d,e,n1,n2) and their resonating-matrix correlation form."""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .correlation import PglElement, corr_sum
from .fp import InvalidInput, PrimeContext, is_prime, prime_context
from .weights import WeightTable, dft, kloosterman_sum, kloosterman_values


@dataclass(frozen=True)
class ResonanceInstance:
    p: int
    N: int
    c: int
    d: int
    e: int
    n1: int
    n2: int

    def __post_init__(self):
        p, N, c = self.p, self.N, self.c
        problems = []
        if not is_prime(p) or p < 3:
            problems.append(f"p={p} is not an odd prime")
        if N < 2 or math.gcd(N, p) != 1:
            problems.append(f"N={N} must be >= 2 and coprime to p")
        if c < 1 or c % p == 0:
            problems.append(f"c={c} must be positive and prime to p")
        for name in ("d", "e"):
            v = getattr(self, name)
            if v < 1 or math.gcd(v, p * N) != 1:
                problems.append(f"{name}={v} must be positive and coprime to pN")
        if self.n1 == 0 or self.n2 == 0:
            problems.append("n1 and n2 must be nonzero")
        if (self.n1 * self.n2 - self.e) % (c * N):
            problems.append(f"n1 n2 = {self.n1 * self.n2} is not = e mod cN = {c * N}")
        if math.gcd(self.n2, c * N) != 1:
            problems.append(f"n2={self.n2} must be coprime to cN")
        if problems:
            raise InvalidInput("resonance instance: " + "; ".join(problems))

    @property
    def ctx(self) -> PrimeContext:
        return prime_context(self.p)


@dataclass(frozen=True)
class ResonatingMatrix:
    a: int
    b: int
    c: int
    d: int
    mod_p: PglElement

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c


def resonating_matrix(p: int, N: int, c: int, d: int, e: int, n1: int, n2: int) -> ResonatingMatrix:
    """(n1, (n1 n2 - e)/(cN); cdN, d n2), checking only what the matrix itself needs."""
    cN = c * N
    b, r = divmod(n1 * n2 - e, cN)
    if r:
        raise InvalidInput(f"n1 n2 - e = {n1 * n2 - e} is not divisible by cN = {cN}")
    a, cc, dd = n1, c * d * N, d * n2
    if (a * dd - b * cc) % p == 0:
        raise InvalidInput(f"det = {a * dd - b * cc} vanishes mod p = {p}")
    return ResonatingMatrix(a, b, cc, dd, PglElement.make(p, a, b, cc, dd))


def gamma_of(inst: ResonanceInstance) -> ResonatingMatrix:
    return resonating_matrix(inst.p, inst.N, inst.c, inst.d, inst.e, inst.n1, inst.n2)


def _inverses(inst: ResonanceInstance) -> tuple[int, int]:
    """(cdN)^-1 and (cN)^-1 mod p, shared by every evaluation route."""
    ctx = inst.ctx
    return ctx.inverse(inst.c * inst.d * inst.N), ctx.inverse(inst.c * inst.N)


def E_direct(inst: ResonanceInstance, K: WeightTable, kl_row: np.ndarray | None = None) -> complex:
    """sum_{u1,u2} K(u1) conj K(u2) S(e A u1, B u2; p) e((A u1 n1 + B u2 n2)/p).

    A = (cdN)^-1, B = (cN)^-1 mod p. S(x, y; p) = S(1, xy; p) for x != 0 and
    is a Ramanujan sum for x = 0, so one row S(1, . ; p) suffices.
    """
    ctx = inst.ctx
    p = ctx.p
    A, B = _inverses(inst)
    if kl_row is None:
        kl_row = kloosterman_values(ctx, 1)
    u = np.arange(p, dtype=np.int64)
    x = (inst.e * A * u) % p
    y = (B * u) % p
    S = kl_row[(x[:, None] * y[None, :]) % p].astype(complex)
    S[0, :] = np.where(y == 0, p - 1, -1)
    ph1 = ctx.roots[(A * inst.n1 * u) % p]
    ph2 = ctx.roots[(B * inst.n2 * u) % p]
    left = K.values * ph1
    right = np.conj(K.values) * ph2
    return complex(left @ S @ right)


def E_via_fourier(inst: ResonanceInstance, Khat: WeightTable) -> complex:
    """p sum_{z != 0} Khat(A(e z + n1)) conj Khat(-B(z^-1 + n2))."""
    ctx = inst.ctx
    p = ctx.p
    A, B = _inverses(inst)
    z = np.arange(1, p, dtype=np.int64)
    first = Khat.values[(A * (inst.e * z + inst.n1)) % p]
    second = Khat.values[(-B * (ctx.inv[z] + inst.n2)) % p]
    return complex(p * np.sum(first * np.conj(second)))


def kloosterman_twisted_mult_check(m: int, n: int, c1: int, c2: int, tol: float = 1e-9) -> bool:
    """S(m,n;c1c2) = S(m c2bar^2, n; c1) S(m c1bar^2, n; c2) for coprime c1, c2."""
    if math.gcd(c1, c2) != 1:
        raise InvalidInput(f"c1={c1} and c2={c2} must be coprime")
    lhs = kloosterman_sum(m, n, c1 * c2)
    c2bar = pow(c2, -1, c1) if c1 > 1 else 0
    c1bar = pow(c1, -1, c2) if c2 > 1 else 0
    rhs = kloosterman_sum(m * c2bar * c2bar, n, c1) * kloosterman_sum(m * c1bar * c1bar, n, c2)
    return abs(lhs - rhs) <= tol * max(1.0, abs(lhs))


# -- sampling and batch checks --

SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def sample_instance(rng: random.Random, p: int, N: int = 2, C: int = 10) -> ResonanceInstance:
    """c <= C, d and e in {1, l, l1 l2}, n2 prime to cN, n1 the least |n1| solving n1 n2 = e mod cN."""
    ells = [q for q in SMALL_PRIMES if q != p and N % q != 0]
    c = rng.choice([c for c in range(1, C + 1) if c % p != 0])

    def pick() -> int:
        shape = rng.randrange(3)
        if shape == 0:
            return 1
        if shape == 1:
            return rng.choice(ells)
        return rng.choice(ells) * rng.choice(ells)

    d, e = pick(), pick()
    cN = c * N
    while True:
        n2 = rng.randint(1, 10 * cN) * rng.choice((1, -1))
        if math.gcd(n2, cN) == 1:
            break
    r = e * pow(n2, -1, cN) % cN
    n1 = r if r <= cN - r else r - cN
    if n1 == 0:
        n1 = cN
    return ResonanceInstance(p, N, c, d, e, n1, n2)


@dataclass
class ResonanceRecord:
    instance: ResonanceInstance
    weight: str
    E_direct: complex
    E_fourier: complex
    p_corr: complex
    max_discrepancy: float

    def to_dict(self) -> dict:
        out = {"instance": asdict(self.instance), "weight": self.weight}
        g = gamma_of(self.instance)
        out["gamma"] = [g.a, g.b, g.c, g.d]
        out["gamma_mod_p"] = list(g.mod_p.entries)
        for k in ("E_direct", "E_fourier", "p_corr"):
            v = getattr(self, k)
            out[k] = [v.real, v.imag]
        out["max_discrepancy"] = self.max_discrepancy
        return out


def check_instance(inst: ResonanceInstance, K: WeightTable, Khat: WeightTable | None = None,
                   kl_row: np.ndarray | None = None) -> ResonanceRecord:
    Khat = dft(K) if Khat is None else Khat
    ed = E_direct(inst, K, kl_row)
    ef = E_via_fourier(inst, Khat)
    pc = inst.p * corr_sum(Khat, gamma_of(inst).mod_p)
    disc = max(abs(ed - ef), abs(ed - pc), abs(ef - pc))
    return ResonanceRecord(inst, K.label, ed, ef, pc, disc)


def resonance_check(
    p: int,
    weights: Sequence[WeightTable],
    n_instances: int = 100,
    seed: int = 0,
    N: int = 2,
    threads: int = 1,
) -> list[ResonanceRecord]:
    """Sample ``n_instances`` instances and check all three routes for each weight."""
    rng = random.Random(seed)
    instances = [sample_instance(rng, p, N) for _ in range(n_instances)]
    ctx = prime_context(p)
    kl_row = kloosterman_values(ctx, 1)
    hats = [dft(K) for K in weights]
    jobs = [(inst, K, H) for inst in instances for K, H in zip(weights, hats)]

    def run(job):
        inst, K, H = job
        return check_instance(inst, K, H, kl_row)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, jobs))
    return [run(j) for j in jobs]
