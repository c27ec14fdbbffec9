"""Correlation sums C(K; gamma) over PGL2(F_p) and the structure of their large values."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import kernels
from .fp import (
    DirichletCharacter,
    Fp2Element,
    InvalidInput,
    PrimeContext,
    fp_sqrt,
    is_prime,
    prime_context,
)
from .weights import (
    WeightTable,
    additive_weight,
    character_weight,
    delta_weight,
    dft,
    kloosterman_weight,
    quadratic_phase_weight,
)

GUARD = 1e-6
FULL_STORAGE_MAX_P = 101


@dataclass(frozen=True, order=True)
class PglElement:
    """Canonical representative of a class in PGL2(F_p).

    Entries are scaled so that the first nonzero one among (a, b, c, d) is 1.
    """

    p: int
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def make(cls, p: int, a: int, b: int, c: int, d: int) -> "PglElement":
        a, b, c, d = a % p, b % p, c % p, d % p
        if (a * d - b * c) % p == 0:
            raise InvalidInput(f"singular matrix ({a},{b};{c},{d}) mod {p}")
        lead = next(x for x in (a, b, c, d) if x)
        s = pow(lead, p - 2, p)
        return cls(p, a * s % p, b * s % p, c * s % p, d * s % p)

    @classmethod
    def identity(cls, p: int) -> "PglElement":
        return cls(p, 1, 0, 0, 1)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.p

    @property
    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1)

    def __matmul__(self, other: "PglElement") -> "PglElement":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return PglElement.make(self.p, a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "PglElement":
        return PglElement.make(self.p, self.d, -self.b, -self.c, self.a)

    def act(self, z: int | None) -> int | None:
        return mobius_action(self, z)

    def __str__(self) -> str:
        return f"({self.a},{self.b};{self.c},{self.d})"


def mobius_action(g: PglElement, z: int | None) -> int | None:
    """(az+b)/(cz+d) on P^1(F_p); ``None`` stands for infinity."""
    p = g.p
    if z is None:
        return None if g.c == 0 else g.a * pow(g.c, p - 2, p) % p
    den = (g.c * z + g.d) % p
    if den == 0:
        return None
    return (g.a * z + g.b) * pow(den, p - 2, p) % p


def pgl_arrays(p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Entries of every canonical class, in enumeration order, as int64 arrays."""
    r = np.arange(p, dtype=np.int64)
    # a = 1: any (b, c, d) with d != bc
    b, c, d = (x.ravel() for x in np.meshgrid(r, r, r, indexing="ij"))
    keep = (d - b * c) % p != 0
    b1, c1, d1 = b[keep], c[keep], d[keep]
    a1 = np.ones_like(b1)
    # a = 0, b = 1: c != 0, any d
    c2, d2 = (x.ravel() for x in np.meshgrid(r[1:], r, indexing="ij"))
    a2 = np.zeros_like(c2)
    b2 = np.ones_like(c2)
    return (
        np.concatenate([a1, a2]),
        np.concatenate([b1, b2]),
        np.concatenate([c1, c2]),
        np.concatenate([d1, d2]),
    )


def pgl_enumerate(p: int | PrimeContext) -> Iterator[PglElement]:
    """Each of the p^3 - p classes of PGL2(F_p) exactly once, deterministically."""
    if isinstance(p, PrimeContext):
        p = p.p
    if not is_prime(p):
        raise InvalidInput(f"p must be prime, got {p}")
    for a, b, c, d in zip(*pgl_arrays(p)):
        yield PglElement(p, int(a), int(b), int(c), int(d))


def corr_sum(khat: WeightTable, g: PglElement) -> complex:
    """C(K; g) = sum over z != -d/c of Khat(g z) conj(Khat(z))."""
    p = khat.p
    if g.p != p:
        raise InvalidInput(f"matrix mod {g.p} against weight mod {p}")
    v = khat.values
    total = 0j
    for z in range(p):
        w = mobius_action(g, z)
        if w is None:
            continue
        total += v[w] * v[z].conjugate()
    return complex(total)


# -- fixed points --

PointKey = object  # int in F_p, (a, b) in F_{p^2} \ F_p, or "inf"


@dataclass(frozen=True)
class FixedPointData:
    kind: str  # "scalar", "parabolic", "split", "nonsplit"
    points: tuple = ()

    @property
    def pair_key(self) -> frozenset | None:
        if self.kind in ("split", "nonsplit"):
            return frozenset(_point_key(x) for x in self.points)
        return None


def _point_key(x) -> PointKey:
    if x is None:
        return "inf"
    if isinstance(x, Fp2Element):
        return x.a if x.in_fp() else (x.a, x.b)
    return int(x)


def _key_to_point(ctx: PrimeContext, key):
    if key == "inf":
        return None
    if isinstance(key, tuple):
        return Fp2Element(ctx, *key)
    return Fp2Element(ctx, key, 0)


def _act_fp2(g: PglElement, ctx: PrimeContext, x: Fp2Element | None) -> Fp2Element | None:
    if x is None:
        return None if g.c == 0 else Fp2Element(ctx, g.a * ctx.inverse(g.c))
    den = x * g.c + g.d
    if den.is_zero():
        return None
    return (x * g.a + g.b) / den


def discriminant(g: PglElement) -> int:
    return ((g.a - g.d) ** 2 + 4 * g.b * g.c) % g.p


def fixed_points(g: PglElement) -> FixedPointData:
    """Fixed points of g on P^1, solving c z^2 + (d - a) z - b = 0."""
    p = g.p
    if g.is_identity:
        return FixedPointData("scalar")
    ctx = prime_context(p)
    a, b, c, d = g.entries
    if c == 0:
        if a == d:
            return FixedPointData("parabolic", (None,))
        z = b * ctx.inverse(d - a) % p
        return FixedPointData("split", (z, None))
    disc = discriminant(g)
    inv2c = ctx.inverse(2 * c)
    if disc == 0:
        return FixedPointData("parabolic", ((a - d) * inv2c % p,))
    r = fp_sqrt(ctx, disc)
    if r is not None:
        z1, z2 = sorted(((a - d + r) * inv2c % p, (a - d - r) * inv2c % p))
        return FixedPointData("split", (z1, z2))
    # disc = qnr * t^2, roots (a - d +- t s) / 2c with s^2 = qnr
    t = fp_sqrt(ctx, disc * ctx.inverse(ctx.qnr))
    base = (a - d) * inv2c % p
    z1 = Fp2Element(ctx, base, t * inv2c)
    z2 = Fp2Element(ctx, base, -t * inv2c)
    return FixedPointData("nonsplit", tuple(sorted((z1, z2), key=lambda x: x.key())))


def is_triangular(g: PglElement) -> bool:
    """g in B u Bw u wB, i.e. c = 0 or d = 0 or a = 0."""
    return g.a * g.c * g.d % g.p == 0


# -- spectra --


@dataclass
class CorrelationSpectrum:
    ctx: PrimeContext
    label: str
    M: float
    threshold: float
    n_classes: int
    exceptional: list[tuple[PglElement, complex]]
    values: np.ndarray | None = None
    max_ratio: float = 0.0
    max_ratio_unexceptional: float = 0.0
    parseval_ceiling: float = 0.0
    max_abs: float = 0.0

    @property
    def p(self) -> int:
        return self.ctx.p

    def exceptional_set(self) -> set[PglElement]:
        return {g for g, _ in self.exceptional}

    def elements(self) -> Iterator[PglElement]:
        return pgl_enumerate(self.ctx.p)


def spectrum(
    K: WeightTable,
    M: float,
    threads: int | None = None,
    keep_full: bool | None = None,
    block: int = 1 << 16,
) -> CorrelationSpectrum:
    """C(K; gamma) for every class, with the set where |C| > M sqrt(p) (1 + 1e-6)."""
    ctx = K.ctx
    p = ctx.p
    nthreads = kernels.resolve_threads(threads)
    if keep_full is None:
        keep_full = p <= FULL_STORAGE_MAX_P
    khat = dft(K).values
    a, b, c, d = pgl_arrays(p)
    n = a.shape[0]
    threshold = M * ctx.sqrt_p * (1 + GUARD)
    full = np.empty(n, dtype=complex) if keep_full else None
    exc_idx: list[np.ndarray] = []
    exc_vals: list[np.ndarray] = []
    max_abs = 0.0
    max_unexc = 0.0
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        vals = kernels.corr_batch(khat, ctx.inv, a[lo:hi], b[lo:hi], c[lo:hi], d[lo:hi], nthreads)
        mags = np.abs(vals)
        hit = mags > threshold
        if full is not None:
            full[lo:hi] = vals
        exc_idx.append(np.nonzero(hit)[0] + lo)
        exc_vals.append(vals[hit])
        max_abs = max(max_abs, float(mags.max(initial=0.0)))
        if (~hit).any():
            max_unexc = max(max_unexc, float(mags[~hit].max()))
    idx = np.concatenate(exc_idx)
    evals = np.concatenate(exc_vals)
    exceptional = [
        (PglElement(p, int(a[i]), int(b[i]), int(c[i]), int(d[i])), complex(v))
        for i, v in zip(idx, evals)
    ]
    return CorrelationSpectrum(
        ctx=ctx,
        label=K.label,
        M=M,
        threshold=threshold,
        n_classes=n,
        exceptional=exceptional,
        values=full,
        max_ratio=max_abs / ctx.sqrt_p,
        max_ratio_unexceptional=max_unexc / ctx.sqrt_p,
        parseval_ceiling=p * K.l2_norm**2,
        max_abs=max_abs,
    )


# -- classification --

CELLS = ("triangular", "parabolic", "torus", "normalizer", "unclassified")


@dataclass
class GoodnessReport:
    is_good: bool
    M: float
    pairs: list[frozenset]
    partition: dict[str, list[PglElement]]
    pair_of: dict[PglElement, int] = field(default_factory=dict)

    def counts(self) -> dict[str, int]:
        return {k: len(v) for k, v in self.partition.items()}


def _covers(g: PglElement, ctx: PrimeContext, pair: frozenset) -> str | None:
    """'torus' if g fixes both points of ``pair``, 'normalizer' if it swaps them."""
    x, y = (_key_to_point(ctx, k) for k in sorted(pair, key=repr))
    gx = _act_fp2(g, ctx, x)
    gx_key = _point_key(gx)
    xk, yk = _point_key(x), _point_key(y)
    if gx_key == xk and _point_key(_act_fp2(g, ctx, y)) == yk:
        return "torus"
    if gx_key == yk and _point_key(_act_fp2(g, ctx, y)) == xk:
        return "normalizer"
    return None


def _swappers(h: PglElement, gs: np.ndarray) -> np.ndarray:
    """Mask of trace-zero rows of ``gs`` that swap the two fixed points of semisimple ``h``.

    For traceless 2x2 matrices g H + H g = tr(gH) I, so g conjugates the
    traceless part H of h to -H, exchanging its eigenlines, iff tr(gH) = 0.
    """
    a, b, c, d = h.entries
    return (gs[:, 0] * (a - d) + gs[:, 1] * c + gs[:, 2] * b) % h.p == 0


def classify_exceptional(
    spec: CorrelationSpectrum, M: float | None = None, max_pairs: int | None = None
) -> GoodnessReport:
    """Split the exceptional set into triangular/parabolic/torus/normalizer cells.

    Semisimple elements are covered greedily by at most M fixed-point pairs,
    preferring pairs that absorb non-triangular elements. Whatever is left
    goes to the triangular or parabolic cell when it fits there, and to
    ``unclassified`` otherwise. ``max_pairs`` defaults to floor(M).
    """
    M = spec.M if M is None else M
    max_pairs = int(math.floor(M)) if max_pairs is None else int(max_pairs)
    ctx = spec.ctx
    elems = [g for g, _ in spec.exceptional]
    info = {g: fixed_points(g) for g in elems}
    semisimple = [g for g in elems if info[g].kind in ("split", "nonsplit")]
    # normalizer-minus-torus elements are involutions: trace zero
    involutions = [g for g in semisimple if (g.a + g.d) % ctx.p == 0]
    inv_entries = np.array([g.entries for g in involutions], dtype=np.int64).reshape(-1, 4)
    by_pair: dict[frozenset, list[PglElement]] = {}
    for g in semisimple:
        by_pair.setdefault(info[g].pair_key, []).append(g)

    pairs: list[frozenset] = []
    pair_of: dict[PglElement, int] = {}
    cell_of: dict[PglElement, str] = {}
    while len(pairs) < max_pairs:
        uncovered = [g for g in semisimple if g not in pair_of]
        if not uncovered:
            break
        best = None
        for key in sorted({info[g].pair_key for g in uncovered}, key=lambda k: sorted(map(repr, k))):
            hits = {g: "torus" for g in by_pair.get(key, []) if g not in pair_of}
            for i in np.flatnonzero(_swappers(by_pair[key][0], inv_entries)):
                g = involutions[i]
                if g not in pair_of and g not in hits:
                    hits[g] = "normalizer"
            must = sum(1 for g in hits if not is_triangular(g))
            score = (must, len(hits))
            if best is None or score > best[0]:
                best = (score, key, hits)
        _, key, hits = best
        pairs.append(key)
        for g, cell in hits.items():
            pair_of[g] = len(pairs) - 1
            cell_of[g] = cell

    partition: dict[str, list[PglElement]] = {k: [] for k in CELLS}
    for g in elems:
        if g in cell_of:
            partition[cell_of[g]].append(g)
        elif g.is_identity:
            if pairs:
                pair_of[g] = 0
                partition["torus"].append(g)
            else:
                partition["triangular"].append(g)
        elif is_triangular(g):
            partition["triangular"].append(g)
        elif info[g].kind == "parabolic":
            partition["parabolic"].append(g)
        else:
            partition["unclassified"].append(g)
    is_good = not partition["unclassified"] and len(pairs) <= max_pairs
    return GoodnessReport(is_good, M, pairs, partition, pair_of)


# -- closed-form exceptional sets for the four basic examples --

BASIC_CASES = ("dirac", "additive", "kloosterman", "quadratic", "character")


@dataclass
class BasicCaseResult:
    case: str
    p: int
    M: float
    status: str  # "pass", "fail", "out-of-range"
    reason: str = ""
    expected: int = 0
    observed: int = 0
    missing: list[PglElement] = field(default_factory=list)
    extra: list[PglElement] = field(default_factory=list)
    is_good: bool | None = None
    expected_good: bool | None = None
    convention_flips: list[PglElement] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def basic_weight(case: str, ctx: PrimeContext, k: int | None = None) -> WeightTable:
    if case == "dirac":
        return delta_weight(ctx, 1)
    if case == "additive":
        return additive_weight(ctx, 1)
    if case == "kloosterman":
        return kloosterman_weight(ctx, 1)
    if case == "quadratic":
        return quadratic_phase_weight(ctx)
    if case == "character":
        chi = DirichletCharacter(ctx, (ctx.p - 1) // 2 if k is None else k)
        if chi.is_trivial:
            raise InvalidInput("character case needs a non-trivial character")
        return character_weight(chi)
    raise InvalidInput(f"case: unknown case {case!r}; expected one of {', '.join(BASIC_CASES)}")


def basic_expected(case: str, p: int, k: int | None = None) -> tuple[set[PglElement], bool]:
    """Closed-form exceptional set and whether the weight is good there."""
    mk = lambda a, b, c, d: PglElement.make(p, a, b, c, d)  # noqa: E731
    if case == "dirac":
        return {mk(1, t, 0, 1) for t in range(p)}, True
    if case == "kloosterman":
        return {mk(1, 0, t, 1) for t in range(p)}, True
    if case == "quadratic":
        return {mk(1, 0, 0, 1), mk(-1, 0, 0, 1)}, True
    if case == "additive":
        # stabilizer of -u with u = 1
        return {g for g in pgl_enumerate(p) if mobius_action(g, p - 1) == p - 1}, False
    if case == "character":
        kk = (p - 1) // 2 if k is None else k % (p - 1)
        out = {mk(1, 0, 0, d) for d in range(1, p)}
        if 2 * kk == p - 1:
            out |= {mk(0, 1, c, 0) for c in range(1, p)}
        return out, True
    raise InvalidInput(f"case: unknown case {case!r}")


def _basic_range(case: str, p: int, M: float) -> str | None:
    """Why (case, p, M) lies outside the range where the closed form is known to hold, or None."""
    sq = math.sqrt(p)
    if case in ("dirac", "kloosterman"):
        if p < 17:
            return f"{case} example is stated for p >= 17"
        if M < 3 or M * sq >= p - 3:
            return f"{case} example needs 3 <= M and M sqrt(p) < p - 3"
    elif case == "quadratic":
        if p < 7:
            return "quadratic example is stated for p >= 7"
        if M < 2 or M * sq >= p - 1:
            return "quadratic example needs 2 <= M and M sqrt(p) < p - 1"
    elif case == "character":
        if p < 11:
            return "character example is stated for p >= 11"
        if M < 2 or M * sq >= p - 3:
            return "character example needs 2 <= M and M sqrt(p) < p - 3"
    elif case == "additive":
        if not (1 <= M < sq):
            return "additive example is stated for 1 <= M < sqrt(p)"
    return None


def verify_sec16(
    case: str, p: int, M: float, k: int | None = None, threads: int | None = None
) -> BasicCaseResult:
    """Compare the computed exceptional set with the closed form for a basic example."""
    if case not in BASIC_CASES:
        raise InvalidInput(f"case: unknown case {case!r}; expected one of {', '.join(BASIC_CASES)}")
    if p < 3 or not is_prime(p):
        raise InvalidInput(f"p must be an odd prime, got {p}")
    reason = _basic_range(case, p, M)
    if reason:
        return BasicCaseResult(case, p, M, "out-of-range", reason)
    ctx = prime_context(p)
    K = basic_weight(case, ctx, k)
    spec = spectrum(K, M, threads=threads)
    expected, expected_good = basic_expected(case, p, k)
    observed = spec.exceptional_set()
    report = classify_exceptional(spec, M)
    flips = _convention_flips(spec, dft(K).values)
    missing = sorted(expected - observed)
    extra = sorted(observed - expected)
    ok = not missing and not extra and report.is_good == expected_good
    return BasicCaseResult(
        case,
        p,
        M,
        "pass" if ok else "fail",
        "" if ok else "exceptional set or goodness differs from the closed form",
        len(expected),
        len(observed),
        missing,
        extra,
        report.is_good,
        expected_good,
        flips,
    )


def _convention_flips(spec: CorrelationSpectrum, khat: np.ndarray) -> list[PglElement]:
    """Classes whose membership changes if the sum excludes z = -b/a instead of z = -d/c.

    Under that convention the term at the pole of g counts as 0 and the term
    at z = -b/a (where g z = 0, only when a != 0) is dropped, so the value
    shifts by -Khat(0) conj(Khat(-b/a)).
    """
    if spec.values is None or abs(khat[0]) == 0:
        return []
    p = spec.p
    a, b, c, d = pgl_arrays(p)
    # canonical classes have a in {0, 1}, so -b/a = -b whenever it exists
    shift = np.where(a != 0, khat[0] * np.conj(khat[(-b) % p]), 0)
    before = np.abs(spec.values) > spec.threshold
    after = np.abs(spec.values - shift) > spec.threshold
    idx = np.nonzero(before != after)[0]
    return [PglElement(p, int(a[i]), int(b[i]), int(c[i]), int(d[i])) for i in idx]
