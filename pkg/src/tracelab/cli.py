"""Command-line driver: ``trace-lab <subcommand> ...``.

Every run produces one JSON document (schema ``trace-lab/1``) and, when
``--out`` is given, a sibling ``.manifest.json`` with the full config, tool
version, backend and wall time. Exit codes: 0 pass, 1 verification failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__, kernels
from .correlation import (
    PglElement,
    BASIC_CASES,
    classify_exceptional,
    corr_sum,
    pgl_arrays,
    spectrum,
    verify_sec16,
)
from .fp import InvalidInput, is_prime, prime_context
from .jsonio import SCHEMA, dumps
from .modular import build_V, delta_coefficients, exponent_scan, twisted_sum
from .orbits import (
    UpperHalfPoint,
    atoms_csv,
    atoms_svg,
    discrepancy_report,
    fourier_side_check,
    poly_twisted_measure,
    twisted_measure,
    untwisted_measure,
)
from .resonance import resonance_check
from .weights import WEIGHT_KINDS, WeightTable, dft, weight_from_descriptor

# key under which handlers return their main table, used by --format csv
TABLE = ""

CSV_SUBCOMMANDS = ("weight eval", "dft", "corr spectrum", "exponent-scan", "orbit")

SUBCOMMANDS = (
    "weight eval",
    "dft",
    "corr one",
    "corr spectrum",
    "goodness",
    "verify-sec16",
    "twisted-sum",
    "exponent-scan",
    "resonance-check",
    "orbit",
)

# knobs that affect how a run executes but never what it computes
RUNTIME_FIELDS = ("threads", "output", "format")

ALIASES = {
    "quadratic": {"kind": "mixed-char", "chi": 0, "phi1": [0, 0, 1], "phi2": [1]},
    "constant": {"kind": "mixed-char", "chi": 0, "phi1": [0], "phi2": [1]},
}


class ConfigError(InvalidInput):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentConfig:
    subcommand: str
    primes: list[int] = field(default_factory=list)
    weight: dict | None = None
    M: float | None = None
    P: float = 0.5
    interval: list[int] | str | None = None
    seed: int = 0
    threads: int = 1
    output: str | None = None
    format: str = "json"
    options: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown config field")
        return cls(**obj)

    def public(self) -> dict:
        d = self.to_json()
        for k in RUNTIME_FIELDS:
            d.pop(k)
        return d


def parse_weight(text: str) -> dict:
    """``{"kind": ...}`` JSON, or the shorthand ``kind[:key=value,...]``."""
    text = text.strip()
    if text.startswith("{"):
        try:
            desc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("weight", f"invalid JSON: {exc}") from exc
    else:
        kind, _, rest = text.partition(":")
        desc = {"kind": kind}
        for item in filter(None, rest.split(",")):
            key, eq, val = item.partition("=")
            if not eq:
                raise ConfigError("weight", f"expected key=value, got {item!r}")
            try:
                desc[key] = json.loads(val)
            except json.JSONDecodeError:
                desc[key] = val
    kind = desc.get("kind")
    if kind == "character":
        desc = {"kind": "mixed-char", "chi": int(desc.get("k", desc.get("chi", 1))), "phi1": [0], "phi2": [0, 1]}
    elif kind in ALIASES:
        desc = dict(ALIASES[kind])
    if desc.get("kind") not in WEIGHT_KINDS:
        raise ConfigError("weight.kind", f"unknown kind {kind!r}; expected one of {', '.join(WEIGHT_KINDS)}")
    return desc


def _parse_ints(text: str, name: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise ConfigError(name, f"expected comma-separated integers, got {text!r}") from exc


def _parse_floats(text: str, name: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise ConfigError(name, f"expected comma-separated numbers, got {text!r}") from exc


# -- validation --


def validate(cfg: ExperimentConfig) -> None:
    if cfg.subcommand not in SUBCOMMANDS:
        raise ConfigError("subcommand", f"unknown subcommand {cfg.subcommand!r}")
    if not cfg.primes:
        raise ConfigError("primes", "empty prime list")
    for p in cfg.primes:
        if p < 3 or not is_prime(p):
            raise ConfigError("primes", f"{p} is not an odd prime")
    if cfg.M is not None and not cfg.M > 0:
        raise ConfigError("M", f"must be positive, got {cfg.M}")
    if not cfg.P > 0:
        raise ConfigError("P", f"must be positive, got {cfg.P}")
    if cfg.threads < 1:
        raise ConfigError("threads", f"must be >= 1, got {cfg.threads}")
    if cfg.format not in ("json", "csv"):
        raise ConfigError("format", f"expected json or csv, got {cfg.format!r}")
    if cfg.format == "csv" and cfg.subcommand not in CSV_SUBCOMMANDS:
        raise ConfigError("format", f"csv output is available for {', '.join(CSV_SUBCOMMANDS)}")
    if isinstance(cfg.interval, str):
        if cfg.interval not in ("full", "half"):
            raise ConfigError("interval", f"expected lo,hi or full or half, got {cfg.interval!r}")
    elif cfg.interval is not None and len(cfg.interval) != 2:
        raise ConfigError("interval", "expected lo,hi")
    if cfg.subcommand == "exponent-scan" and len(cfg.primes) < 3:
        raise ConfigError("primes", "exponent-scan needs at least 3 primes")
    if cfg.subcommand == "corr one" and len(cfg.options.get("gamma", [])) != 4:
        raise ConfigError("options.gamma", "expected four entries a,b,c,d")
    if cfg.subcommand == "verify-sec16" and cfg.options.get("case") not in BASIC_CASES:
        raise ConfigError("options.case", f"expected one of {', '.join(BASIC_CASES)}")


# -- handlers: each returns (status, result, extra files) --


def _weight(cfg: ExperimentConfig, p: int) -> WeightTable:
    if cfg.weight is None:
        raise ConfigError("weight", "this subcommand needs --weight")
    return weight_from_descriptor(prime_context(p), cfg.weight)


def _values(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in v]


def _weight_doc(K: WeightTable) -> dict:
    return {
        "p": K.p,
        "label": K.label,
        "descriptor": K.descriptor,
        "sup_norm": K.sup_norm,
        "l2_norm": K.l2_norm,
        "values": _values(K.values),
    }


def _values_csv(tables: list[WeightTable]) -> str:
    lines = ["p,n,re,im"]
    for K in tables:
        lines += [f"{K.p},{n},{v.real:.17g},{v.imag:.17g}" for n, v in enumerate(K.values)]
    return "\n".join(lines) + "\n"


def _run_weight_eval(cfg):
    tables = [_weight(cfg, p) for p in cfg.primes]
    return "ok", {"weights": [_weight_doc(K) for K in tables]}, {TABLE: _values_csv(tables)}


def _run_dft(cfg):
    tables = [dft(_weight(cfg, p)) for p in cfg.primes]
    return "ok", {"transforms": [_weight_doc(K) for K in tables]}, {TABLE: _values_csv(tables)}


def _run_corr_one(cfg):
    out = []
    for p in cfg.primes:
        K = _weight(cfg, p)
        g = PglElement.make(p, *cfg.options["gamma"])
        c = corr_sum(dft(K), g)
        out.append({"p": p, "gamma": list(g.entries), "C": c, "ratio": abs(c) / math.sqrt(p)})
    return "ok", {"values": out}, {}


def _pair_json(pair) -> list:
    return [k if isinstance(k, (int, str)) else list(k) for k in sorted(pair, key=repr)]


def _spectrum_doc(spec, with_entries: bool) -> dict:
    doc = {
        "p": spec.p,
        "label": spec.label,
        "M": spec.M,
        "threshold": spec.threshold,
        "n_classes": spec.n_classes,
        "max_ratio": spec.max_ratio,
        "max_ratio_unexceptional": spec.max_ratio_unexceptional,
        "parseval_ceiling": spec.parseval_ceiling,
        "exceptional": [[*g.entries, v.real, v.imag] for g, v in spec.exceptional],
    }
    if with_entries and spec.values is not None:
        a, b, c, d = pgl_arrays(spec.p)
        doc["entries"] = [
            [int(a[i]), int(b[i]), int(c[i]), int(d[i]), float(v.real), float(v.imag)]
            for i, v in enumerate(spec.values)
        ]
    return doc


def _spectrum_csv(spec) -> str:
    a, b, c, d = pgl_arrays(spec.p)
    sq = math.sqrt(spec.p)
    lines = []
    for i, v in enumerate(spec.values):
        lines.append(f"{spec.p},{a[i]},{b[i]},{c[i]},{d[i]},{v.real:.17g},{v.imag:.17g},{abs(v) / sq:.17g}")
    return "\n".join(lines) + "\n"


SPECTRUM_HEADER = "p,a,b,c,d,re_C,im_C,abs_C_over_sqrt_p\n"


def _run_corr_spectrum(cfg):
    M = cfg.M if cfg.M is not None else 3.0
    docs, table = [], SPECTRUM_HEADER
    for p in cfg.primes:
        spec = spectrum(_weight(cfg, p), M, threads=cfg.threads)
        docs.append(_spectrum_doc(spec, with_entries=True))
        if spec.values is not None:
            table += _spectrum_csv(spec)
    files = {TABLE: table}
    if cfg.options.get("csv"):
        files[cfg.options["csv"]] = table
    return "ok", {"spectra": docs}, files


def _report_doc(report, K: WeightTable, norm_bound: float) -> dict:
    return {
        "is_good": report.is_good,
        "M": report.M,
        "pairs": [_pair_json(pr) for pr in report.pairs],
        "counts": report.counts(),
        "partition": {k: [list(g.entries) for g in v] for k, v in report.partition.items()},
        "l2_norm": K.l2_norm,
        "norm_bound": norm_bound,
        "norm_ok": K.l2_norm <= norm_bound * (1 + 1e-12),
    }


def _run_goodness(cfg):
    M = cfg.M if cfg.M is not None else 3.0
    max_pairs = cfg.options.get("pairs")
    norm_bound = float(cfg.options.get("norm_bound") or M)
    docs = []
    all_good = True
    for p in cfg.primes:
        K = _weight(cfg, p)
        spec = spectrum(K, M, threads=cfg.threads)
        rep = classify_exceptional(spec, M, max_pairs)
        doc = _spectrum_doc(spec, with_entries=False)
        doc["report"] = _report_doc(rep, K, norm_bound)
        docs.append(doc)
        all_good &= rep.is_good
    return ("good" if all_good else "not-good"), {"primes": docs}, {}


def _run_verify_basic(cfg):
    M = cfg.M if cfg.M is not None else {"dirac": 3, "kloosterman": 3, "additive": 1}.get(cfg.options["case"], 2)
    rows = []
    failed = False
    for p in cfg.primes:
        r = verify_sec16(cfg.options["case"], p, M, k=cfg.options.get("k"), threads=cfg.threads)
        failed |= r.status == "fail"
        rows.append(
            {
                "p": p,
                "M": M,
                "status": r.status,
                "reason": r.reason,
                "expected": r.expected,
                "observed": r.observed,
                "missing": [list(g.entries) for g in r.missing],
                "extra": [list(g.entries) for g in r.extra],
                "convention_flips": [list(g.entries) for g in r.convention_flips],
                "is_good": r.is_good,
                "expected_good": r.expected_good,
            }
        )
    return ("fail" if failed else "pass"), {"case": cfg.options["case"], "results": rows}, {}


def _run_twisted_sum(cfg):
    V = build_V(cfg.P)
    f = delta_coefficients(max(math.ceil(2 * cfg.P * p) for p in cfg.primes))
    rows = []
    for p in cfg.primes:
        s = twisted_sum(f, _weight(cfg, p), V, p)
        rows.append({"p": p, "S": s, "abs": abs(s)})
    return "ok", {"form": f.label, "P": V.P, "Q": V.Q, "sums": rows}, {}


def _scan_csv(report) -> str:
    lines = ["p,weight_label,P,Q,re_S,im_S,abs_S,local_exponent"]
    for r in report.rows:
        lines.append(
            f"{r['p']},{r['weight_label']},{r['P']:.17g},{r['Q']:.17g},{r['re']:.17g},"
            f"{r['im']:.17g},{r['abs']:.17g},{r['local_exponent']:.17g}"
        )
    return "\n".join(lines) + "\n"


def _run_exponent_scan(cfg):
    if cfg.weight is None:
        raise ConfigError("weight", "exponent-scan needs --weight")
    primes = sorted(cfg.primes)
    f = delta_coefficients(math.ceil(2 * cfg.P * primes[-1]))
    rep = exponent_scan(f, cfg.weight, primes, cfg.P, threads=cfg.threads)
    files = {TABLE: _scan_csv(rep)}
    if cfg.options.get("csv"):
        files[cfg.options["csv"]] = files[TABLE]
    result = {
        "family": rep.family,
        "P": rep.P,
        "Q": rep.Q,
        "rows": rep.rows,
        "slope": rep.slope,
        "intercept": rep.intercept,
        "residuals": rep.residuals,
        "n_used": rep.n_used,
    }
    return "ok", result, files


DEFAULT_RESONANCE_WEIGHTS = ("kloosterman", "quadratic", "legendre")


def _run_resonance(cfg):
    descs = cfg.options.get("weights") or [parse_weight(w) for w in DEFAULT_RESONANCE_WEIGHTS]
    n_inst = int(cfg.options.get("instances", 100))
    N = int(cfg.options.get("N", 2))
    out = []
    failed = False
    for p in cfg.primes:
        ctx = prime_context(p)
        ws = [weight_from_descriptor(ctx, d) for d in descs]
        recs = resonance_check(p, ws, n_inst, seed=cfg.seed, N=N, threads=cfg.threads)
        tol = 1e-6 * p * p
        worst = max(r.max_discrepancy for r in recs)
        failed |= worst >= tol
        out.append(
            {
                "p": p,
                "tolerance": tol,
                "max_discrepancy": worst,
                "instances": [r.to_dict() for r in recs],
            }
        )
    return ("fail" if failed else "pass"), {"weights": descs, "primes": out}, {}


def _run_orbit(cfg):
    tau = UpperHalfPoint(*cfg.options.get("tau", [0.0, 1.0]))
    poly = cfg.options.get("poly")
    docs, files, table = [], {}, ["p,x,y,re_w,im_w"]
    for p in cfg.primes:
        interval = _interval_for(cfg.interval, p)
        if poly is not None:
            mu = poly_twisted_measure(p, tau, poly, interval)
            rep = discrepancy_report(mu, compare=True)
        elif cfg.weight is None:
            mu = untwisted_measure(p, tau)
            rep = discrepancy_report(mu, compare=True)
        else:
            K = _weight(cfg, p)
            mu = twisted_measure(p, tau, K, interval)
            rep = discrepancy_report(mu, compare=bool(cfg.options.get("compare", False)))
            if cfg.options.get("freqs"):
                f = delta_coefficients(max(cfg.options["freqs"]))
                rep["fourier_side"] = fourier_side_check(p, tau, K, f, cfg.options["freqs"], interval)
        rep["p"] = p
        docs.append(rep)
        n = len(cfg.primes)
        if cfg.options.get("svg"):
            files[_suffix(cfg.options["svg"], p, n)] = atoms_svg(mu)
        atoms = atoms_csv(mu)
        if cfg.options.get("csv"):
            files[_suffix(cfg.options["csv"], p, n)] = atoms
        table += [f"{p},{row}" for row in atoms.splitlines()[1:]]
    files[TABLE] = "\n".join(table) + "\n"
    return "ok", {"tau": [tau.x, tau.y], "measures": docs}, files


def _interval_for(spec, p: int) -> tuple[int, int] | None:
    if spec is None or spec == "full":
        return None
    if spec == "half":
        return (1, (p - 1) // 2)
    return (int(spec[0]), int(spec[1]))


def _suffix(path: str, p: int, n: int) -> str:
    if n == 1:
        return path
    pth = Path(path)
    return str(pth.with_name(f"{pth.stem}_p{p}{pth.suffix}"))


HANDLERS = {
    "weight eval": _run_weight_eval,
    "dft": _run_dft,
    "corr one": _run_corr_one,
    "corr spectrum": _run_corr_spectrum,
    "goodness": _run_goodness,
    "verify-sec16": _run_verify_basic,
    "twisted-sum": _run_twisted_sum,
    "exponent-scan": _run_exponent_scan,
    "resonance-check": _run_resonance,
    "orbit": _run_orbit,
}

FAILING = {"fail"}


@dataclass
class RunResult:
    exit_code: int
    document: dict
    files: dict[str, str]
    wall_time: float
    table: str | None = None

    def json(self) -> str:
        return dumps(self.document)

    def text(self, fmt: str = "json") -> str:
        return self.table if fmt == "csv" and self.table is not None else self.json()

    def manifest(self, cfg: ExperimentConfig) -> dict:
        return {
            "schema": SCHEMA,
            "tool": "tracelab",
            "version": __version__,
            "backend": kernels.BACKEND,
            "config": cfg.to_json(),
            "wall_time_s": self.wall_time,
        }


def run(cfg: ExperimentConfig) -> RunResult:
    """Execute one configured experiment; raises ConfigError/InvalidInput on bad input."""
    validate(cfg)
    t0 = time.perf_counter()
    status, result, files = HANDLERS[cfg.subcommand](cfg)
    table = files.pop(TABLE, None)
    doc = {
        "schema": SCHEMA,
        "subcommand": cfg.subcommand,
        "config": cfg.public(),
        "status": status,
        "result": result,
    }
    return RunResult(1 if status in FAILING else 0, doc, files, time.perf_counter() - t0, table)


# -- argument parsing --


def _common(parser: argparse.ArgumentParser, weight: bool = True):
    parser.add_argument("--p", "--primes", dest="primes", default="", help="prime or comma-separated primes")
    if weight:
        parser.add_argument("--weight", help="weight descriptor: JSON or kind[:key=value,...]")
    parser.add_argument("--M", type=float, default=None, help="correlation threshold M")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $TRACE_LAB_THREADS or 1)")
    parser.add_argument("--out", default=None, help="write the result here (plus a .manifest.json)")
    parser.add_argument("--format", default="json", choices=("json", "csv"),
                        help="csv prints the main table instead of the JSON document")
    parser.add_argument("--config", default=None, help="load an ExperimentConfig JSON instead of flags")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trace-lab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"trace-lab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    w = sub.add_parser("weight", help="weight tables").add_subparsers(dest="action", required=True)
    _common(w.add_parser("eval", help="evaluate a weight table"))

    _common(sub.add_parser("dft", help="unitary DFT of a weight"))

    corr = sub.add_parser("corr", help="correlation sums").add_subparsers(dest="action", required=True)
    one = corr.add_parser("one", help="C(K; gamma) for one matrix")
    _common(one)
    one.add_argument("--gamma", required=True, help="a,b,c,d")
    spec = corr.add_parser("spectrum", help="C(K; gamma) for all of PGL2(F_p)")
    _common(spec)
    spec.add_argument("--csv", default=None, help="CSV dump of (a,b,c,d,Re C,Im C,|C|/sqrt p)")

    good = sub.add_parser("goodness", help="classify the exceptional set")
    _common(good)
    good.add_argument("--pairs", type=int, default=None, help="max fixed-point pairs (default floor(M))")
    good.add_argument("--norm-bound", type=float, default=None, help="bound for ||K||_2 (default M)")

    sec = sub.add_parser("verify-sec16", help="check the four basic examples' exceptional sets")
    _common(sec, weight=False)
    sec.add_argument("--case", required=True, choices=BASIC_CASES)
    sec.add_argument("--k", type=int, default=None, help="character index for --case character")

    ts = sub.add_parser("twisted-sum", help="S_V(Delta, K; p)")
    _common(ts)
    ts.add_argument("--P", type=float, default=0.5)

    es = sub.add_parser("exponent-scan", help="log|S_V| against log p")
    _common(es)
    es.add_argument("--P", type=float, default=0.5)
    es.add_argument("--csv", default=None)

    rc = sub.add_parser("resonance-check", help="E_direct = E_fourier = p C(K; gamma)")
    _common(rc, weight=False)
    rc.add_argument("--weights", default=None, help="semicolon-separated weight descriptors")
    rc.add_argument("--instances", type=int, default=100)
    rc.add_argument("--N", type=int, default=2)

    ob = sub.add_parser("orbit", help="twisted Hecke orbit measures")
    _common(ob)
    ob.add_argument("--tau", default="0,1", help="x,y")
    ob.add_argument("--interval", default=None, help="lo,hi within [1,p], or full, or half for [1,(p-1)/2]")
    ob.add_argument("--poly", default=None, help="coefficients of phi, low degree first")
    ob.add_argument("--freqs", default=None, help="frequencies for the Fourier-side check")
    ob.add_argument("--compare", action="store_true", help="compare twisted masses with hyperbolic ones")
    ob.add_argument("--svg", default=None)
    ob.add_argument("--csv", default=None)
    return ap


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    sub = ns.command if getattr(ns, "action", None) is None else f"{ns.command} {ns.action}"
    opts: dict[str, Any] = {}
    for key in ("case", "k", "pairs", "instances", "N", "csv", "svg"):
        if getattr(ns, key, None) is not None:
            opts[key] = getattr(ns, key)
    if getattr(ns, "norm_bound", None) is not None:
        opts["norm_bound"] = ns.norm_bound
    if getattr(ns, "gamma", None):
        opts["gamma"] = _parse_ints(ns.gamma, "gamma")
    if getattr(ns, "tau", None):
        opts["tau"] = _parse_floats(ns.tau, "tau")
    if getattr(ns, "poly", None):
        opts["poly"] = _parse_ints(ns.poly, "poly")
    if getattr(ns, "freqs", None):
        opts["freqs"] = _parse_ints(ns.freqs, "freqs")
    if getattr(ns, "compare", False):
        opts["compare"] = True
    if getattr(ns, "weights", None):
        opts["weights"] = [parse_weight(w) for w in ns.weights.split(";") if w.strip()]
    interval = getattr(ns, "interval", None)
    if interval is not None and interval not in ("full", "half"):
        interval = _parse_ints(interval, "interval")
    return ExperimentConfig(
        subcommand=sub,
        primes=_parse_ints(ns.primes, "primes"),
        weight=parse_weight(ns.weight) if getattr(ns, "weight", None) else None,
        M=ns.M,
        P=getattr(ns, "P", 0.5),
        interval=interval,
        seed=ns.seed,
        threads=kernels.resolve_threads(ns.threads),
        output=ns.out,
        format=ns.format,
        options=opts,
    )


def _write(path: str, text: str):
    pth = Path(path)
    pth.parent.mkdir(parents=True, exist_ok=True)
    pth.write_text(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.config:
            obj = json.loads(Path(ns.config).read_text())
            # a run manifest carries its config under "config"
            cfg = ExperimentConfig.from_json(obj.get("config", obj) if "subcommand" not in obj else obj)
        else:
            cfg = config_from_args(ns)
        res = run(cfg)
    except InvalidInput as exc:
        print(f"trace-lab: error: {exc}", file=sys.stderr)
        return 2
    text = res.text(cfg.format)
    if cfg.output:
        _write(cfg.output, text)
        _write(str(Path(cfg.output).with_suffix(".manifest.json")), dumps(res.manifest(cfg)))
    else:
        sys.stdout.write(text)
    for path, body in res.files.items():
        _write(path, body)
    print(f"trace-lab: {cfg.subcommand}: {res.document['status']} ({res.wall_time:.2f}s)", file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
