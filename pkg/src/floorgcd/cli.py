"""Experiment harness: ``floorgcd <subcommand> [flags]``.

Every run writes one report (CSV or JSON) and, when ``--out`` is given, a
``<out>.manifest.json`` that records all parameters.  ``--manifest PATH``
replays a previous run.

Exit codes: 0 ok, 1 parse/usage error, 2 floor undecided, 3 resource guard.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .constants import (
    ConstantSyntaxError, FloorUndecided, PrecisionCeilingError, parse_constant,
    set_default_ceiling,
)
from .diophantine import (
    continued_fraction, liouville_witness, simultaneous_approx_search,
)
from .expsum import erdos_turan_bound, weyl_sums
from .polynomial import parse_polynomial
from .sieve import (
    TARGET, DEFAULT_Z, DivisorExplosion, choose_z, coprime_count, coprime_flags,
    divisor_count, legendre_expansion, mertens_product, omega_deviation_count,
    sifted_count, zeta2_partial,
)

SUBCOMMANDS = ("density", "sieve", "divisors", "weyl", "discrepancy", "cf",
               "witness", "omega", "approx")
# record-shaped results default to JSON, tables to CSV
JSON_DEFAULT = ("cf", "witness", "approx")


def fmt(v) -> str:
    """Fixed report formatting: 12 significant digits for floats."""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    if isinstance(v, Fraction):
        return fmt(float(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (float, np.floating, Fraction)):
        x = float(v)
        return x if not math.isfinite(x) else float(format(x, ".12g"))
    if isinstance(v, np.integer):
        return int(v)
    return v


def to_csv(rows: Sequence[dict]) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    buf = io.StringIO()
    buf.write(",".join(cols) + "\n")
    for r in rows:
        buf.write(",".join(fmt(r[c]) for c in cols) + "\n")
    return buf.getvalue()


def to_json(payload) -> str:
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"


def convergence_table(poly: str, X_list: Sequence[int], threads: int | None = None) -> str:
    """CSV of ``X, count, ratio, abs_error`` for each X, from a single scan."""
    X_list = [int(X) for X in X_list]
    if X_list != sorted(X_list):
        raise ValueError("X_list must be ascending")
    P = parse_polynomial(poly)
    running = np.cumsum(coprime_flags(P, X_list[-1], threads), dtype=np.int64)
    rows = []
    for X in X_list:
        c = int(running[X - 1])
        rows.append({"X": X, "count": c, "ratio": c / X, "abs_error": abs(c / X - TARGET)})
    return to_csv(rows)


# subcommand bodies return CSV rows or a JSON payload

def _density(cfg):
    P = parse_polynomial(cfg["poly"])
    rep = coprime_count(P, cfg["xmax"], cfg["checkpoints"], cfg["threads"])
    rows = [{"X": X, "count": c, "ratio": r, "abs_error": abs(r - TARGET)}
            for X, c, r in rep.checkpoints]
    return rows


def _sieve(cfg):
    P = parse_polynomial(cfg["poly"])
    X = cfg["xmax"]
    # the asymptotic z is below 3 at desk scale; report it next to the z actually used
    override = cfg["z"] if cfg["z"] is not None else DEFAULT_Z
    sc = choose_z(X, cfg["A"], cfg["epsilon"], override)
    z = sc.z
    value, _terms = legendre_expansion(P, X, z)
    return [{
        "X": X, "z": z, "formula_z": sc.formula_z if sc.formula_z is not None else float("nan"),
        "A": sc.A, "c": sc.c, "sifted_count": sifted_count(P, X, z),
        "legendre_value": value, "coprime_count": coprime_count(P, X, 1, cfg["threads"]).count,
        "zeta2_partial": zeta2_partial(z).approx, "mertens_product": mertens_product(z).approx,
    }]


def _divisors(cfg):
    P = parse_polynomial(cfg["poly"])
    X, T = cfg["xmax"], cfg["T"]
    rows = []
    for d in range(1, cfg["d_max"] + 1):
        dc = divisor_count(P, d, X)
        et = erdos_turan_bound(P, d, X, T).count_bound if X // d >= 1 else float("nan")
        rows.append({"d": d, "X": X, "count": dc.count, "expected": dc.expected,
                     "deviation": dc.deviation, "et_bound": et})
    return rows


def _weyl(cfg):
    P = parse_polynomial(cfg["poly"])
    vals = weyl_sums(P, cfg["d"], range(1, cfg["m_max"] + 1), cfg["xmax"])
    return [v.row() for v in vals]


def _discrepancy(cfg):
    P = parse_polynomial(cfg["poly"])
    X, d = cfg["xmax"], cfg["d"]
    rep = erdos_turan_bound(P, d, X, cfg["T"])
    dc = divisor_count(P, d, X)
    return [{"d": d, "X": X, "N": rep.N, "T": rep.T, "d_star": rep.d_star,
             "et_bound": rep.et_bound, "count_bound": rep.count_bound,
             "A_d": dc.count, "deviation": dc.deviation}]


def _cf(cfg):
    cf = continued_fraction(parse_constant(cfg["alpha"]), cfg["terms"])
    if cfg["format"] == "json":
        return {"alpha": cfg["alpha"], **cf.to_dict()}
    return [{"index": i, "a": a, "p": p, "q": q}
            for i, (a, (p, q)) in enumerate(zip(cf.quotients, cf.convergents))]


def _witness(cfg):
    w = liouville_witness(parse_constant(cfg["alpha"]), cfg["n"], cfg["q_max"])
    body = {"alpha": cfg["alpha"], "n": cfg["n"], "q_max": cfg["q_max"], "found": w is not None}
    if w is not None:
        body.update(p=w.p, q=w.q, err=float(w.err), bound=float(Fraction(1, w.q ** w.n)))
    return body if cfg["format"] == "json" else [body]


def _omega(cfg):
    rep = omega_deviation_count(cfg["xmax"], cfg["n_min"])
    X = rep.X
    hr = X / math.log(math.log(X)) ** (1 / 3) if X > math.e else float("nan")
    return [{"X": X, "n_min": rep.n_min, "count": rep.count, "fraction": rep.fraction,
             "hardy_ramanujan_bound": hr}]


def _approx(cfg):
    alphas = [a.strip() for a in cfg["alphas"].split(",") if a.strip()]
    got = simultaneous_approx_search([parse_constant(a) for a in alphas],
                                     cfg["xmax"], cfg["delta"])
    body = {"alphas": alphas, "X": cfg["xmax"], "delta": cfg["delta"],
            "found": got is not None, "q": got.q if got else None,
            "a": list(got.a) if got else None}
    if cfg["format"] == "json":
        return body
    return [{"q": body["q"] if got else "", "a": " ".join(map(str, got.a)) if got else "",
             "found": got is not None}]


_DISPATCH = {"density": _density, "sieve": _sieve, "divisors": _divisors, "weyl": _weyl,
             "discrepancy": _discrepancy, "cf": _cf, "witness": _witness, "omega": _omega,
             "approx": _approx}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--poly", default="sqrt(2)*x")
    common.add_argument("--alpha", default="sqrt(2)")
    common.add_argument("--alphas", default="sqrt(2)")
    common.add_argument("--xmax", type=int, default=10**4)
    common.add_argument("--checkpoints", type=int, default=12)
    common.add_argument("--z", type=float, default=None)
    common.add_argument("--epsilon", type=float, default=0.5)
    common.add_argument("--A", type=float, default=2.0)
    common.add_argument("--d", type=int, default=1)
    common.add_argument("--d-max", type=int, default=10)
    common.add_argument("--m-max", type=int, default=10)
    common.add_argument("--T", type=int, default=10)
    common.add_argument("--terms", type=int, default=10)
    common.add_argument("--n", type=int, default=2)
    common.add_argument("--q-max", type=int, default=10**4)
    common.add_argument("--delta", type=float, default=0.5)
    common.add_argument("--n-min", type=int, default=3)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--threads", type=int,
                        default=int(os.environ.get("FLOORGCD_THREADS", os.cpu_count() or 1)))
    common.add_argument("--precision-ceiling", type=int,
                        default=int(os.environ.get("FLOORGCD_PRECISION_CEILING", 4096)))
    common.add_argument("--seed", type=int, default=0)
    parser = _Parser(prog="floorgcd", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--manifest", default=None, help="replay a saved run manifest")
    sub = parser.add_subparsers(dest="subcommand")
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _validate(cfg: dict) -> None:
    if cfg["xmax"] < 1:
        raise ValueError("xmax must be >= 1")
    if cfg["threads"] < 1:
        raise ValueError("threads must be >= 1")


def render(cfg: dict) -> str:
    """The report text for a config (no files written)."""
    _validate(cfg)
    set_default_ceiling(cfg["precision_ceiling"])
    result = _DISPATCH[cfg["subcommand"]](cfg)
    if isinstance(result, dict) or cfg["format"] == "json":
        return to_json(result)
    return to_csv(result)


def run(cfg: dict) -> int:
    """Run one experiment; returns the process exit code."""
    try:
        text = render(cfg)
    except ConstantSyntaxError as exc:
        print(f"parse error: {exc} in {exc.text!r}", file=sys.stderr)
        return 1
    except FloorUndecided as exc:
        where = f" at x={exc.x}" if exc.x is not None else ""
        print(f"floor undecided{where}: {exc}", file=sys.stderr)
        return 2
    except (DivisorExplosion, PrecisionCeilingError) as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = cfg.get("out")
    if out is None:
        sys.stdout.write(text)
        return 0
    with open(out, "w", newline="\n") as fh:
        fh.write(text)
    manifest = {"version": __version__, "config": cfg}
    with open(out + ".manifest.json", "w", newline="\n") as fh:
        fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return 0


def config_from_args(argv: Sequence[str] | None = None) -> dict:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.manifest:
        with open(args.manifest) as fh:
            return json.load(fh)["config"]
    if args.subcommand is None:
        parser.error("a subcommand is required")
    cfg = vars(args)
    cfg.pop("manifest")
    if cfg["format"] is None:
        cfg["format"] = "json" if cfg["subcommand"] in JSON_DEFAULT else "csv"
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    return run(config_from_args(argv))


if __name__ == "__main__":
    raise SystemExit(main())
