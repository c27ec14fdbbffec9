"""Trace weights mod p as explicit length-p complex tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .fp import (
    DirichletCharacter,
    InvalidInput,
    PrimeContext,
    dft_values,
    legendre_character,
    prime_context,
)


@dataclass(frozen=True, eq=False)
class WeightTable:
    """Values K(0), ..., K(p-1) with cached norms.

    ``l2_norm`` is the normalized norm (p^-1 sum |K|^2)^(1/2), so that a
    unimodular weight has norm 1.
    """

    ctx: PrimeContext
    values: np.ndarray
    label: str = "K"
    descriptor: Mapping[str, Any] | None = None
    sup_norm: float = field(init=False)
    l2_norm: float = field(init=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != (self.ctx.p,):
            raise InvalidInput(f"weight needs {self.ctx.p} values, got shape {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        mags = np.abs(vals)
        object.__setattr__(self, "sup_norm", float(mags.max()))
        object.__setattr__(self, "l2_norm", float(math.sqrt(np.sum(mags * mags) / self.ctx.p)))

    @property
    def p(self) -> int:
        return self.ctx.p

    def __len__(self) -> int:
        return self.ctx.p

    def __getitem__(self, n: int) -> complex:
        return complex(self.values[n % self.ctx.p])

    def _check_same(self, other: "WeightTable"):
        if other.ctx.p != self.ctx.p:
            raise InvalidInput(f"weights live mod different primes: {self.p} vs {other.p}")

    def __add__(self, other: "WeightTable") -> "WeightTable":
        self._check_same(other)
        return WeightTable(self.ctx, self.values + other.values, f"({self.label}+{other.label})")

    def __mul__(self, c: complex) -> "WeightTable":
        return WeightTable(self.ctx, complex(c) * self.values, f"{c}*{self.label}")

    __rmul__ = __mul__


def dft(K: WeightTable) -> WeightTable:
    """Unitary Fourier transform: Khat(z) = p^-1/2 sum_x K(x) e(zx/p)."""
    return WeightTable(K.ctx, dft_values(K.ctx, K.values), f"hat({K.label})")


# -- polynomials and rational maps over F_p (coefficients low degree first) --


def _trim(c: list[int]) -> list[int]:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def poly_reduce(coeffs: Sequence[int], p: int) -> list[int]:
    return _trim([int(a) % p for a in coeffs] or [0])


def poly_degree(c: Sequence[int]) -> int:
    return -1 if len(c) == 1 and c[0] == 0 else len(c) - 1


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    db = poly_degree(b)
    lead_inv = pow(b[-1], p - 2, p)
    q = [0] * max(1, len(a) - db)
    while poly_degree(a) >= db:
        shift = len(a) - 1 - db
        f = a[-1] * lead_inv % p
        q[shift] = f
        for i, bc in enumerate(b):
            a[i + shift] = (a[i + shift] - f * bc) % p
        a = _trim(a)
        if a == [0]:
            break
    return _trim(q), a


def poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    while poly_degree(b) >= 0:
        _, r = _poly_divmod(a, b, p)
        a, b = b, r
    inv = pow(a[-1], p - 2, p)
    return [x * inv % p for x in a]


def poly_eval(coeffs: Sequence[int], x, p: int):
    """Horner evaluation mod p; ``x`` may be an int or an int64 array."""
    acc = np.zeros_like(x) if isinstance(x, np.ndarray) else 0
    for a in reversed(coeffs):
        acc = (acc * x + a) % p
    return acc


@dataclass(frozen=True)
class RationalMapFp:
    """R(X)/S(X) over F_p, stored with gcd(R, S) = 1 and monic-free scaling."""

    p: int
    num: tuple[int, ...]
    den: tuple[int, ...] = (1,)

    def __post_init__(self):
        num = poly_reduce(self.num, self.p)
        den = poly_reduce(self.den, self.p)
        if poly_degree(den) < 0:
            raise InvalidInput("denominator of a rational map is identically zero")
        if poly_degree(num) >= 0:
            g = poly_gcd(num, den, self.p)
            if poly_degree(g) > 0:
                num, _ = _poly_divmod(num, g, self.p)
                den, _ = _poly_divmod(den, g, self.p)
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", tuple(den))

    @classmethod
    def poly(cls, p: int, coeffs: Sequence[int]) -> "RationalMapFp":
        return cls(p, tuple(coeffs), (1,))

    @property
    def is_constant(self) -> bool:
        return poly_degree(list(self.num)) <= 0 and poly_degree(list(self.den)) == 0

    @property
    def is_polynomial(self) -> bool:
        return poly_degree(list(self.den)) == 0

    def evaluate_all(self) -> tuple[np.ndarray, np.ndarray]:
        """Values at every x in F_p and the mask of points that are not poles."""
        p = self.p
        x = np.arange(p, dtype=np.int64)
        n = poly_eval(self.num, x, p)
        d = poly_eval(self.den, x, p)
        defined = d != 0
        inv = prime_context(p).inv
        return (n * inv[d]) % p, defined

    def to_json(self) -> dict:
        return {"num": list(self.num), "den": list(self.den)}

    @classmethod
    def from_json(cls, p: int, obj) -> "RationalMapFp":
        if isinstance(obj, Mapping):
            return cls(p, tuple(obj["num"]), tuple(obj.get("den", [1])))
        return cls.poly(p, obj)


def eval_rational(phi: RationalMapFp, x: int) -> int | None:
    p = phi.p
    d = poly_eval(phi.den, x % p, p)
    if d == 0:
        return None
    return poly_eval(phi.num, x % p, p) * pow(d, p - 2, p) % p


# -- the catalog --


def _descr(kind: str, **params) -> dict:
    return {"kind": kind, **params}


def additive_weight(ctx: PrimeContext, a: int) -> WeightTable:
    vals = ctx.roots[(a * np.arange(ctx.p)) % ctx.p]
    return WeightTable(ctx, vals, f"e({a}n/p)", _descr("additive", a=a % ctx.p))


def delta_weight(ctx: PrimeContext, u: int) -> WeightTable:
    vals = np.zeros(ctx.p, dtype=complex)
    vals[u % ctx.p] = ctx.sqrt_p
    return WeightTable(ctx, vals, f"sqrt(p)delta_{u % ctx.p}", _descr("dirac", u=u % ctx.p))


def mixed_char_weight(
    chi: DirichletCharacter, phi1: RationalMapFp, phi2: RationalMapFp
) -> WeightTable:
    """K(n) = e(phi1(n)/p) chi(phi2(n)), and 0 at poles of either map."""
    ctx = chi.ctx
    v1, ok1 = phi1.evaluate_all()
    v2, ok2 = phi2.evaluate_all()
    vals = ctx.roots[v1] * chi.table()[v2]
    vals[~(ok1 & ok2)] = 0
    label = f"e(phi1/p)chi_{chi.index}(phi2)"
    desc = _descr("mixed-char", chi=chi.index, phi1=phi1.to_json(), phi2=phi2.to_json())
    return WeightTable(ctx, vals, label, desc)


def quadratic_phase_weight(ctx: PrimeContext) -> WeightTable:
    w = mixed_char_weight(
        DirichletCharacter(ctx, 0),
        RationalMapFp.poly(ctx.p, [0, 0, 1]),
        RationalMapFp.poly(ctx.p, [1]),
    )
    return WeightTable(ctx, w.values, "e(n^2/p)", w.descriptor)


def character_weight(chi: DirichletCharacter) -> WeightTable:
    ctx = chi.ctx
    w = mixed_char_weight(chi, RationalMapFp.poly(ctx.p, [0]), RationalMapFp.poly(ctx.p, [0, 1]))
    return WeightTable(ctx, w.values, f"chi_{chi.index}(n)", w.descriptor)


def legendre_weight(ctx: PrimeContext) -> WeightTable:
    vals = legendre_character(ctx).table()
    return WeightTable(ctx, vals, "(n/p)", _descr("legendre"))


def kloosterman_sum(a: int, b: int, c: int) -> float:
    """S(a,b;c) = sum over x in (Z/c)^x of e((ax + b xbar)/c)."""
    if c < 1:
        raise InvalidInput(f"modulus must be positive, got {c}")
    if c == 1:
        return 1.0
    xs = [x for x in range(1, c) if math.gcd(x, c) == 1]
    xbar = np.array([pow(x, -1, c) for x in xs], dtype=np.int64)
    x = np.array(xs, dtype=np.int64)
    phase = ((a % c) * x + (b % c) * xbar) % c
    s = np.sum(np.exp(2j * math.pi * phase / c))
    if abs(s.imag) > 1e-9 * max(1.0, c):
        raise AssertionError(f"Kloosterman sum S({a},{b};{c}) not real: {s}")
    return float(s.real)


def kloosterman_values(ctx: PrimeContext, a: int, chunk: int = 256) -> np.ndarray:
    """Unnormalized S(a, n; p) for n = 0..p-1, by direct summation."""
    p = ctx.p
    x = np.arange(1, p, dtype=np.int64)
    ax = (a * x) % p
    xbar = ctx.inv[1:]
    out = np.empty(p)
    for start in range(0, p, chunk):
        n = np.arange(start, min(start + chunk, p), dtype=np.int64)
        ph = (ax[None, :] + n[:, None] * xbar[None, :]) % p
        out[n] = ctx.roots[ph].sum(axis=1).real
    return out


def kloosterman_weight(ctx: PrimeContext, a: int = 1) -> WeightTable:
    """K(n) = S(a, n; p) / sqrt(p)."""
    if a % ctx.p == 0:
        raise InvalidInput("Kloosterman weight needs a != 0 mod p")
    vals = kloosterman_values(ctx, a) / ctx.sqrt_p
    return WeightTable(ctx, vals, f"S({a},n;p)/sqrt(p)", _descr("kloosterman", a=a % ctx.p))


def hyper_kloosterman_values(ctx: PrimeContext, m: int, chunk: int = 256) -> np.ndarray:
    """Kl_m(a; p) for a = 0..p-1, with 0 stored at a = 0.

    Uses S_1(a) = e(a/p), S_k(a) = sum_{t != 0} S_{k-1}(a tbar) e(t/p),
    then normalizes by p^-(m-1)/2.
    """
    if m < 2:
        raise InvalidInput(f"hyper-Kloosterman needs m >= 2, got {m}")
    p = ctx.p
    s = ctx.roots.copy()
    t = np.arange(1, p, dtype=np.int64)
    et = ctx.roots[t]
    tbar = ctx.inv[1:]
    for _ in range(m - 1):
        nxt = np.empty(p, dtype=complex)
        nxt[0] = 0
        for start in range(1, p, chunk):
            a = np.arange(start, min(start + chunk, p), dtype=np.int64)
            nxt[a] = s[(a[:, None] * tbar[None, :]) % p] @ et
        s = nxt
    s[0] = 0
    return s / p ** ((m - 1) / 2)


def hyper_kloosterman_table(ctx: PrimeContext, m: int) -> WeightTable:
    vals = hyper_kloosterman_values(ctx, m)
    return WeightTable(ctx, vals, f"Kl_{m}(n;p)", _descr("hyper-kloosterman", m=m))


def _phi_grid(Phi) -> dict[tuple[int, int], complex]:
    """Normalize a bivariate polynomial to {(i, j): coefficient of U^i V^j}."""
    if isinstance(Phi, Mapping):
        return {(int(i), int(j)): complex(c) for (i, j), c in Phi.items()}
    grid = {}
    for entry in Phi:
        i, j, re, im = entry
        grid[(int(i), int(j))] = complex(re, im)
    return grid


def hk_composite_weight(ctx: PrimeContext, m: int, phi: RationalMapFp, Phi) -> WeightTable:
    """K(n) = Phi(Kl_m(phi(n)), conj Kl_m(phi(n))) where phi(n) is defined, else 0.

    ``Phi`` is ``{(i, j): c}`` or a list of ``[i, j, re, im]`` rows. Points with
    phi(n) = 0 also get 0, since Kl_m is only defined on F_p^x.
    """
    if phi.is_constant:
        raise InvalidInput("hk_composite_weight needs a non-constant phi")
    grid = _phi_grid(Phi)
    kl = hyper_kloosterman_values(ctx, m)
    v, ok = phi.evaluate_all()
    u = kl[v]
    ubar = np.conj(u)
    vals = np.zeros(ctx.p, dtype=complex)
    for (i, j), c in sorted(grid.items()):
        vals += c * u**i * ubar**j
    vals[~ok | (v == 0)] = 0
    rows = [[i, j, c.real, c.imag] for (i, j), c in sorted(grid.items())]
    desc = _descr("hk-composite", m=m, phi=phi.to_json(), Phi=rows)
    return WeightTable(ctx, vals, f"Phi(Kl_{m}(phi(n)))", desc)


def _poly_values(ctx: PrimeContext, phi: Sequence[int]) -> np.ndarray:
    coeffs = poly_reduce(phi, ctx.p)
    if poly_degree(coeffs) < 1:
        raise InvalidInput("fiber weights need a polynomial of degree >= 1")
    return poly_eval(coeffs, np.arange(ctx.p, dtype=np.int64), ctx.p)


def fiber_count_weight(ctx: PrimeContext, phi: Sequence[int]) -> WeightTable:
    """K(x) = #{y : phi(y) = x} - 1."""
    counts = np.bincount(_poly_values(ctx, phi), minlength=ctx.p)
    coeffs = poly_reduce(phi, ctx.p)
    return WeightTable(ctx, counts - 1, "N(phi;x)-1", _descr("fiber-count", phi=coeffs))


def dual_fiber_weight(ctx: PrimeContext, phi: Sequence[int]) -> WeightTable:
    """K'(n) = -p^-1/2 sum_x e(n phi(x)/p) for n != 0, and K'(0) = 0."""
    p = ctx.p
    vals_phi = _poly_values(ctx, phi)
    n = np.arange(p, dtype=np.int64)
    out = -ctx.roots[(n[:, None] * vals_phi[None, :]) % p].sum(axis=1) / ctx.sqrt_p
    out[0] = 0
    coeffs = poly_reduce(phi, p)
    return WeightTable(ctx, out, "K'(phi;n)", _descr("dual-fiber", phi=coeffs))


WEIGHT_KINDS = (
    "dirac",
    "additive",
    "mixed-char",
    "kloosterman",
    "hyper-kloosterman",
    "hk-composite",
    "fiber-count",
    "dual-fiber",
    "legendre",
)


def weight_from_descriptor(ctx: PrimeContext, desc: Mapping[str, Any]) -> WeightTable:
    """Build a weight from its JSON descriptor ``{"kind": ..., params...}``."""
    kind = desc.get("kind")
    p = ctx.p
    try:
        if kind == "dirac":
            return delta_weight(ctx, int(desc.get("u", 1)))
        if kind == "additive":
            return additive_weight(ctx, int(desc.get("a", 1)))
        if kind == "legendre":
            return legendre_weight(ctx)
        if kind == "kloosterman":
            return kloosterman_weight(ctx, int(desc.get("a", 1)))
        if kind == "hyper-kloosterman":
            return hyper_kloosterman_table(ctx, int(desc.get("m", 3)))
        if kind == "mixed-char":
            chi = DirichletCharacter(ctx, int(desc.get("chi", 0)))
            phi1 = RationalMapFp.from_json(p, desc.get("phi1", [0]))
            phi2 = RationalMapFp.from_json(p, desc.get("phi2", [1]))
            return mixed_char_weight(chi, phi1, phi2)
        if kind == "hk-composite":
            phi = RationalMapFp.from_json(p, desc.get("phi", [0, 1]))
            return hk_composite_weight(ctx, int(desc.get("m", 2)), phi, desc.get("Phi", [[1, 0, 1.0, 0.0]]))
        if kind == "fiber-count":
            return fiber_count_weight(ctx, desc.get("phi", [0, 0, 1]))
        if kind == "dual-fiber":
            return dual_fiber_weight(ctx, desc.get("phi", [0, 0, 1]))
    except InvalidInput:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"weight: malformed parameters for kind {kind!r}: {exc}") from exc
    raise InvalidInput(f"weight.kind: unknown weight kind {kind!r}; expected one of {', '.join(WEIGHT_KINDS)}")
