"""Arithmetic in F_p and F_{p^2}, Dirichlet characters and the unitary DFT mod p."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi


class InvalidInput(ValueError):
    """Raised when an argument violates an operation's precondition."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    for f in range(3, r + 1, 2):
        if n % f == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root(p: int) -> int:
    """Smallest generator of (Z/pZ)^x for an odd prime ``p``."""
    if p < 3 or not is_prime(p):
        raise InvalidInput(f"p must be an odd prime, got {p}")
    qs = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def e(x: float) -> complex:
    """e(x) = exp(2 pi i x)."""
    return cmath.exp(1j * TWO_PI * x)


class PrimeContext:
    """Tables attached to a fixed odd prime ``p``.

    Holds the smallest primitive root ``g``, the discrete log table
    (``dlog[g**j % p] == j``), modular inverses, a fixed quadratic
    non-residue and the p-th roots of unity ``roots[k] = e(k/p)``.
    Instances are immutable; use :func:`prime_context` to share them.
    """

    __slots__ = ("p", "g", "dlog", "inv", "qnr", "roots", "sqrt_p")

    def __init__(self, p: int):
        g = primitive_root(p)
        dlog = np.full(p, -1, dtype=np.int64)
        x = 1
        for j in range(p - 1):
            dlog[x] = j
            x = x * g % p
        inv = np.zeros(p, dtype=np.int64)
        for a in range(1, p):
            inv[a] = pow(a, p - 2, p)
        roots = np.exp(1j * TWO_PI * np.arange(p) / p)
        for arr in (dlog, inv, roots):
            arr.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "dlog", dlog)
        object.__setattr__(self, "inv", inv)
        # g is a non-residue: an odd power of a generator
        object.__setattr__(self, "qnr", g)
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "sqrt_p", math.sqrt(p))

    def __setattr__(self, name, value):
        raise AttributeError("PrimeContext is immutable")

    def __repr__(self) -> str:
        return f"PrimeContext(p={self.p}, g={self.g})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeContext) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeContext", self.p))

    def __reduce__(self):
        return (prime_context, (self.p,))

    def inverse(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return int(self.inv[a])

    def legendre(self, a: int) -> int:
        a %= self.p
        if a == 0:
            return 0
        return 1 if self.dlog[a] % 2 == 0 else -1


@lru_cache(maxsize=64)
def prime_context(p: int) -> PrimeContext:
    return PrimeContext(p)


def additive_char(ctx: PrimeContext, a: int, x: int) -> complex:
    """e(ax/p)."""
    return complex(ctx.roots[(a * x) % ctx.p])


def fp_sqrt(ctx: PrimeContext, a: int) -> int | None:
    """Square root of ``a`` mod p by Tonelli-Shanks, or None for a non-residue."""
    p = ctx.p
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = ctx.qnr
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@dataclass(frozen=True)
class Fp2Element:
    """a + b*s in F_{p^2} = F_p[s]/(s^2 - qnr)."""

    ctx: PrimeContext
    a: int
    b: int = 0

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.ctx.p)
        object.__setattr__(self, "b", self.b % self.ctx.p)

    def _coerce(self, other) -> "Fp2Element":
        if isinstance(other, Fp2Element):
            return other
        return Fp2Element(self.ctx, int(other), 0)

    def __add__(self, other):
        o = self._coerce(other)
        return Fp2Element(self.ctx, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Fp2Element(self.ctx, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        q = self.ctx.qnr
        return Fp2Element(self.ctx, self.a * o.a + q * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> int:
        return (self.a * self.a - self.ctx.qnr * self.b * self.b) % self.ctx.p

    def conjugate(self) -> "Fp2Element":
        return Fp2Element(self.ctx, self.a, -self.b)

    def inverse(self) -> "Fp2Element":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("0 has no inverse in F_p^2")
        ninv = self.ctx.inverse(n)
        return Fp2Element(self.ctx, self.a * ninv, -self.b * ninv)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def in_fp(self) -> bool:
        return self.b == 0

    def key(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True)
class DirichletCharacter:
    """chi(g^j) = e(index * j / (p-1)), chi(0) = 0."""

    ctx: PrimeContext
    index: int

    def __post_init__(self):
        object.__setattr__(self, "index", self.index % (self.ctx.p - 1))

    @property
    def order(self) -> int:
        n = self.ctx.p - 1
        return n // math.gcd(self.index, n)

    @property
    def is_trivial(self) -> bool:
        return self.index == 0

    @property
    def is_real(self) -> bool:
        return self.index == 0 or 2 * self.index == self.ctx.p - 1

    def table(self) -> np.ndarray:
        p = self.ctx.p
        out = np.zeros(p, dtype=complex)
        j = self.ctx.dlog[1:]
        out[1:] = np.exp(1j * TWO_PI * ((self.index * j) % (p - 1)) / (p - 1))
        if self.is_real:
            out[1:] = np.round(out[1:].real)
        return out

    def __call__(self, x: int) -> complex:
        return char_eval(self, x)


def legendre_character(ctx: PrimeContext) -> DirichletCharacter:
    return DirichletCharacter(ctx, (ctx.p - 1) // 2)


def char_eval(chi: DirichletCharacter, x: int) -> complex:
    ctx = chi.ctx
    x %= ctx.p
    if x == 0:
        return 0j
    k = (chi.index * int(ctx.dlog[x])) % (ctx.p - 1)
    if 2 * k == ctx.p - 1:
        return -1 + 0j
    if k == 0:
        return 1 + 0j
    return cmath.exp(1j * TWO_PI * k / (ctx.p - 1))


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_x chi(x) e(x/p) for non-trivial chi."""
    if chi.is_trivial:
        raise InvalidInput("Gauss sum requested for the trivial character")
    return complex(np.sum(chi.table() * chi.ctx.roots))


def dft_values(ctx: PrimeContext, values: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Unitary DFT mod p by direct summation over the root table."""
    p = ctx.p
    values = np.asarray(values, dtype=complex)
    if values.shape != (p,):
        raise InvalidInput(f"expected {p} values, got shape {values.shape}")
    x = np.arange(p, dtype=np.int64)
    out = np.empty(p, dtype=complex)
    for start in range(0, p, chunk):
        z = np.arange(start, min(start + chunk, p), dtype=np.int64)
        out[z] = ctx.roots[np.outer(z, x) % p] @ values
    return out / ctx.sqrt_p
