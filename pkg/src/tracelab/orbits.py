"""Twisted Hecke orbits on the modular surface SL2(Z)\\H."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .fp import InvalidInput, prime_context
from .modular import CuspFormCoeffs, InsufficientCoefficients
from .weights import WeightTable, dft, fiber_count_weight

HYPERBOLIC_DENSITY = 3.0 / math.pi  # probability density of dx dy / y^2 on the fundamental domain


@dataclass(frozen=True)
class UpperHalfPoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise InvalidInput(f"point must lie in the upper half plane, got y={self.y}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "UpperHalfPoint":
        return cls(z.real, z.imag)


def hecke_point(p: int, t: int | None, tau: UpperHalfPoint) -> UpperHalfPoint:
    """gamma_t . tau: (tau + t)/p for finite t, p tau for t = infinity (None)."""
    if t is None:
        return UpperHalfPoint(p * tau.x, p * tau.y)
    return UpperHalfPoint((tau.x + t) / p, tau.y / p)


def reduce_with_matrix(z: complex, max_steps: int = 10_000) -> tuple[complex, tuple[int, int, int, int]]:
    """SL2(Z)-reduce ``z`` into |x| <= 1/2, |z| >= 1; also return the reducing matrix.

    Boundary ties go to x <= 0: x = 1/2 is moved to -1/2 and points on the
    unit circle with x > 0 are reflected by z -> -1/z.
    """
    a, b, c, d = 1, 0, 0, 1
    for _ in range(max_steps):
        n = math.floor(z.real + 0.5)
        if n:
            z -= n
            a, b = a - n * c, b - n * d
        if abs(z) < 1.0:
            z = -1.0 / z
            a, b, c, d = -c, -d, a, b
            continue
        break
    else:
        raise RuntimeError("reduction did not terminate")
    if z.real >= 0.5:
        z -= 1
        a, b = a - c, b - d
    if abs(z) == 1.0 and z.real > 0:
        z = -1.0 / z
        a, b, c, d = -c, -d, a, b
    return z, (a, b, c, d)


def reduce_fundamental(pt: UpperHalfPoint) -> UpperHalfPoint:
    return UpperHalfPoint.from_complex(reduce_with_matrix(pt.z)[0])


@dataclass
class TwistedMeasure:
    """Atoms (x_i, y_i) in the fundamental domain with complex weights w_i."""

    x: np.ndarray
    y: np.ndarray
    w: np.ndarray
    normalization: float
    label: str = ""

    def __len__(self) -> int:
        return len(self.w)

    @property
    def total_mass(self) -> complex:
        return complex(np.sum(self.w))


def _reduced_atoms(p: int, tau: UpperHalfPoint, ts: Sequence[int | None]) -> tuple[np.ndarray, np.ndarray]:
    xs = np.empty(len(ts))
    ys = np.empty(len(ts))
    for i, t in enumerate(ts):
        h = hecke_point(p, t, tau)
        z, _ = reduce_with_matrix(h.z)
        xs[i], ys[i] = z.real, z.imag
    return xs, ys


def _interval(p: int, interval: tuple[int, int] | None) -> range:
    lo, hi = (1, p) if interval is None else interval
    if not (1 <= lo <= hi <= p):
        raise InvalidInput(f"interval [{lo}, {hi}] must satisfy 1 <= lo <= hi <= p = {p}")
    return range(lo, hi + 1)


def twisted_measure(
    p: int, tau: UpperHalfPoint, K: WeightTable, interval: tuple[int, int] | None = None
) -> TwistedMeasure:
    """(1/|I|) sum_{t in I} K(t) delta at the reduced point (tau + t)/p."""
    if K.p != p:
        raise InvalidInput(f"weight is mod {K.p} but p = {p}")
    ts = _interval(p, interval)
    xs, ys = _reduced_atoms(p, tau, list(ts))
    norm = 1.0 / len(ts)
    w = K.values[np.array(ts) % p] * norm
    return TwistedMeasure(xs, ys, w, norm, K.label)


def untwisted_measure(p: int, tau: UpperHalfPoint) -> TwistedMeasure:
    """The full Hecke orbit: t = 0..p-1 and t = infinity, each with mass 1/(p+1)."""
    ts: list[int | None] = list(range(p)) + [None]
    xs, ys = _reduced_atoms(p, tau, ts)
    norm = 1.0 / (p + 1)
    return TwistedMeasure(xs, ys, np.full(p + 1, norm, dtype=complex), norm, "T_p")


def poly_twisted_measure(
    p: int, tau: UpperHalfPoint, phi: Sequence[int], interval: tuple[int, int] | None = None
) -> TwistedMeasure:
    """(1/|I|) sum_{x : phi(x) in I} delta at (tau + phi(x))/p, one atom per t in I.

    The atom at t carries the fiber size #{x : phi(x) = t}, so the measure is
    the twisted measure of 1 + (N(phi; t) - 1).
    """
    fiber = fiber_count_weight(prime_context(p), phi)
    counts = WeightTable(fiber.ctx, fiber.values + 1, f"N({phi};t)")
    return twisted_measure(p, tau, counts, interval)


# -- pairing with boxes --


@dataclass(frozen=True)
class Box:
    x0: float
    x1: float
    y0: float
    y1: float = math.inf

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise InvalidInput(f"degenerate box {self}")
        if self.x0 < -0.5 or self.x1 > 0.5:
            raise InvalidInput(f"box {self} leaves the strip |x| <= 1/2")

    def contains(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x >= self.x0) & (x < self.x1) & (y >= self.y0) & (y < self.y1)

    def hyperbolic_mass(self) -> float:
        """(3/pi) integral over the box intersected with the fundamental domain of dx dy / y^2."""
        floor = lambda x: max(self.y0, math.sqrt(max(0.0, 1.0 - x * x)))  # noqa: E731
        if math.isinf(self.y1):
            # the y-integral of y^-2 from floor to infinity is 1/floor
            val, _ = integrate.quad(lambda x: 1.0 / floor(x), self.x0, self.x1, epsabs=1e-12)
        else:
            val, _ = integrate.dblquad(
                lambda y, x: 1.0 / (y * y),
                self.x0,
                self.x1,
                lambda x: min(floor(x), self.y1),
                lambda x: self.y1,
                epsabs=1e-12,
            )
        return HYPERBOLIC_DENSITY * val


DEFAULT_Y_BREAKS = (1.0, 1.25, 1.5, 2.0, 4.0)


def default_boxes() -> list[Box]:
    """The 8-box partition of {|x| <= 1/2, 1 <= y <= 4}: two x-halves by four y-bands."""
    out = []
    for y0, y1 in zip(DEFAULT_Y_BREAKS, DEFAULT_Y_BREAKS[1:]):
        out.append(Box(-0.5, 0.0, y0, y1))
        out.append(Box(0.0, 0.5, y0, y1))
    return out


def tail_box() -> Box:
    return Box(-0.5, 0.5, DEFAULT_Y_BREAKS[-1], math.inf)


def pair_with_box(mu: TwistedMeasure, box: Box) -> tuple[complex, float]:
    """(mass of mu in the box, hyperbolic probability of the box)."""
    return complex(np.sum(mu.w[box.contains(mu.x, mu.y)])), box.hyperbolic_mass()


def discrepancy_report(mu: TwistedMeasure, boxes: Sequence[Box] | None = None, compare: bool = True) -> dict:
    boxes = default_boxes() if boxes is None else list(boxes)
    rows = []
    for bx in boxes + [tail_box()]:
        m, h = pair_with_box(mu, bx)
        rows.append(
            {
                "box": [bx.x0, bx.x1, bx.y0, None if math.isinf(bx.y1) else bx.y1],
                "mass": [m.real, m.imag],
                "hyperbolic": h,
                "deviation": abs(m - h) if compare else abs(m),
            }
        )
    main = rows[: len(boxes)]
    return {
        "label": mu.label,
        "atoms": len(mu),
        "total_mass": [mu.total_mass.real, mu.total_mass.imag],
        "boxes": rows,
        "max_deviation": max(r["deviation"] for r in main),
    }


# -- the Fourier-side identity --


def fourier_side_check(
    p: int,
    tau: UpperHalfPoint,
    K: WeightTable,
    f: CuspFormCoeffs,
    freqs: Sequence[int],
    interval: tuple[int, int] | None = None,
) -> dict:
    """Evaluate sum_{t in I} K(t) g((tau + t)/p) for g(z) = sum_{n in freqs} rho(n) e(nz) three ways.

    ``direct`` sums over the orbit. ``dual`` uses the coefficients
    K'_I(n) = p^-1/2 sum_{t in I} K(t) e(nt/p). ``hat`` rebuilds K'_I from the
    Fourier transform of K as |I|/p Khat(n) plus the shifted terms with
    x != 0, |x| <= p/2.
    """
    ts = np.array(list(_interval(p, interval)))
    freqs = [int(n) for n in freqs]
    if not freqs:
        raise InvalidInput("freqs: need at least one frequency")
    if min(freqs) < 1:
        raise InvalidInput("freqs: frequencies must be positive")
    if max(freqs) > f.n_max:
        raise InsufficientCoefficients(
            f"need coefficients up to n = {max(freqs)}, but {f.label} has only n_max = {f.n_max}"
        )
    ctx = K.ctx
    coeff = np.array([f.rho[n] for n in freqs])
    n_arr = np.array(freqs)
    Kt = K.values[ts % p]
    zt = (tau.z + ts) / p
    direct = complex(np.sum(Kt * (np.exp(2j * math.pi * np.outer(n_arr, zt)) * coeff[:, None]).sum(axis=0)))

    sqrt_p = ctx.sqrt_p
    ph_tau = np.exp(2j * math.pi * n_arr * tau.z / p)
    k_dual = np.array([np.sum(Kt * ctx.roots[(n * ts) % p]) for n in freqs]) / sqrt_p
    dual = complex(sqrt_p * np.sum(coeff * ph_tau * k_dual))

    khat = dft(K).values
    half = (p - 1) // 2
    xs = np.arange(-half, half + 1)
    geo = ctx.roots[np.outer(xs, ts) % p].sum(axis=1)
    k_hat_route = []
    for n in freqs:
        main = len(ts) / p * khat[n % p]
        rest = sum(khat[(n - x) % p] * geo[j] for j, x in enumerate(xs) if x != 0) / p
        k_hat_route.append(main + rest)
    hat = complex(sqrt_p * np.sum(coeff * ph_tau * np.array(k_hat_route)))

    scale = max(abs(direct), abs(dual), abs(hat), 1e-300)
    disc = max(abs(direct - dual), abs(direct - hat)) / scale
    return {
        "p": p,
        "freqs": freqs,
        "interval": [int(ts[0]), int(ts[-1])],
        "direct": [direct.real, direct.imag],
        "dual": [dual.real, dual.imag],
        "hat": [hat.real, hat.imag],
        "relative_discrepancy": disc if scale > 1e-300 else 0.0,
        "measure_value": [direct.real / len(ts), direct.imag / len(ts)],
    }


# -- output --


def atoms_csv(mu: TwistedMeasure) -> str:
    lines = ["x,y,re_w,im_w"]
    for x, y, w in zip(mu.x, mu.y, mu.w):
        lines.append(f"{x:.17g},{y:.17g},{w.real:.17g},{w.imag:.17g}")
    return "\n".join(lines) + "\n"


def atoms_svg(mu: TwistedMeasure, width: int = 480, y_max: float = 4.0) -> str:
    """Fundamental-domain outline and atoms colored by the sign of Re w."""
    y_min = math.sqrt(3) / 2 - 0.05
    height = int(width * (y_max - y_min) / 1.2)

    def px(x: float, y: float) -> tuple[float, float]:
        return ((x + 0.6) / 1.2 * width, (y_max - y) / (y_max - y_min) * height)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    arc = " ".join(
        "{:.2f},{:.2f}".format(*px(math.cos(th), math.sin(th)))
        for th in np.linspace(2 * math.pi / 3, math.pi / 3, 60)
    )
    x0, y0 = px(-0.5, y_max)
    x1, y1 = px(-0.5, math.sqrt(3) / 2)
    x2, y2 = px(0.5, math.sqrt(3) / 2)
    x3, y3 = px(0.5, y_max)
    parts.append(
        f'<polyline fill="none" stroke="black" points="{x0:.2f},{y0:.2f} {x1:.2f},{y1:.2f} {arc} '
        f'{x2:.2f},{y2:.2f} {x3:.2f},{y3:.2f}"/>'
    )
    wmax = float(np.max(np.abs(mu.w))) if len(mu) else 1.0
    for x, y, w in zip(mu.x, mu.y, mu.w):
        if y > y_max:
            continue
        cx, cy = px(x, y)
        color = "#c0392b" if w.real >= 0 else "#2471a3"
        r = 1.0 + 2.0 * abs(w) / (wmax or 1.0)
        parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" fill="{color}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
