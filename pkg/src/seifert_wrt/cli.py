"""Command-line front end.

Every subcommand writes JSON (with a ``schema_version`` field) or CSV to stdout or ``--output``.
Exit status: 0 on success, 1 on integrity or verification failures, 2 on bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from ._config import PRECISION_ENV

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    fmt: str = "json"
    precision: int | None = None
    output: str | None = None


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _rational(c: Fraction) -> dict:
    return {"num": str(c.numerator), "den": str(c.denominator)}


def _monomials(poly) -> list[dict]:
    return [{"q": q, "p": p, **_rational(c)} for (q, p), c in poly.items()]


def _json(payload: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **payload}, indent=2) + "\n"


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _k_range(text: str) -> tuple[int, int, int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"expected lo:hi[:stride], got {text!r}")
    try:
        lo, hi, *rest = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-integer k range {text!r}") from None
    stride = rest[0] if rest else 1
    if lo < 2 or hi < lo or stride < 1:
        raise argparse.ArgumentTypeError(f"need 2 <= lo <= hi and stride >= 1, got {text!r}")
    return lo, hi, stride


# subcommands; each returns (text, ok)


def cmd_verlinde(cfg: RunConfig):
    from .verlinde import verlinde_number

    p = cfg.params
    value = verlinde_number(p["g"], p["k"], p["ell"])
    if cfg.fmt == "csv":
        return _csv(["g", "k", "ell", "count"], [[p["g"], p["k"], p["ell"], value]]), True
    if cfg.fmt == "json":
        return _json({"g": p["g"], "k": p["k"], "ell": p["ell"], "count": str(value)}), True
    return f"{value}\n", True


def cmd_pm(cfg: RunConfig):
    from .xi_transform import pm

    m = cfg.params["m"]
    poly = pm(m)
    if cfg.fmt == "csv":
        return _csv(["q", "p", "num", "den"], [[r["q"], r["p"], r["num"], r["den"]] for r in _monomials(poly)]), True
    return _json({"m": m, "monomials": _monomials(poly)}), True


def cmd_pgm(cfg: RunConfig):
    from .verlinde import build_family

    g = cfg.params["g"]
    fam = build_family(g)
    entries = []
    for m, poly in enumerate(fam.polys):
        lam, power = fam.lambdas[m]
        entries.append({
            "m": m,
            "two_pi_power": poly.two_pi_power,
            "degree": poly.degree,
            "coefficients": [{"p": p, **_rational(c)} for (_, p), c in poly.poly.items()],
            "lambda": {**_rational(lam), "two_pi_power": power},
        })
    if cfg.fmt == "csv":
        rows = [[e["m"], c["p"], c["num"], c["den"], e["two_pi_power"]] for e in entries for c in e["coefficients"]]
        return _csv(["m", "p", "num", "den", "two_pi_power"], rows), True
    return _json({"g": g, "family": entries}), True


def cmd_xi(cfg: RunConfig):
    from .xi_transform import pm, xi_direct

    m, k = cfg.params["m"], cfg.params["k"]
    xi = xi_direct(m, k)
    poly = pm(m)
    rows = []
    for j in range(2 * k):
        x = Fraction(j, k)
        factor = 1 + (-1) ** (j + m)
        exact = factor * poly.evaluate(k, x)
        z = xi(j)
        rows.append([j, _num(x), _num(z.real), _num(z.imag), _num(exact)])
    header = ["j", "x", "re", "im", "polynomial"]
    if cfg.fmt == "json":
        return _json({"m": m, "k": k, "columns": header, "rows": rows}), True
    return _csv(header, rows), True


def cmd_zk(cfg: RunConfig):
    from .asymptotics_harness import compute_series
    from .moduli import SeifertData

    p = cfg.params
    lo, hi, stride = p["k_range"]
    sample = compute_series(SeifertData(p["g"], p["a"], p["b"]), lo, hi, stride)
    rows = [[int(k), _num(z.real), _num(z.imag)] for k, z in zip(sample.ks, sample.values)]
    if cfg.fmt == "json":
        return _json({"g": p["g"], "a": p["a"], "b": p["b"], "word": str(sample.word),
                      "columns": ["k", "re", "im"], "rows": rows}), True
    return _csv(["k", "re", "im"], rows), True


def cmd_components(cfg: RunConfig):
    from .moduli import SeifertData, predicted_expansion

    p = cfg.params
    s = SeifertData(p["g"], p["a"], p["b"])
    pred = predicted_expansion(s)
    out = []
    for x in pred.components:
        entry = {
            "class": x.label,
            "point": x.point,
            "r": [str(x.r.numerator), str(x.r.denominator)],
            "angle_p": x.angle_p,
            "angle_q": x.angle_q,
            "cs_phase": x.cs_phase,
            "n": str(x.exponent_n),
            "abs_a0": abs(x.a0),
        }
        if x.has_b_ladder:
            entry.update({"m": str(x.exponent_m), "abs_b0": abs(x.b0)})
        out.append(entry)
    if cfg.fmt == "csv":
        rows = [[e["class"], e["point"], "/".join(e["r"]), _num(e["angle_p"]), _num(e["angle_q"]),
                 _num(e["cs_phase"]), e["n"], _num(e["abs_a0"]), e.get("m", ""),
                 _num(e["abs_b0"]) if "abs_b0" in e else ""] for e in out]
        return _csv(["class", "point", "r", "angle_p", "angle_q", "cs_phase", "n", "abs_a0", "m", "abs_b0"], rows), True
    return _json({"seifert": {"g": s.g, "a": s.a, "b": s.b, "c": s.c, "d": s.d},
                  "normalization": pred.normalization, "components": out}), True


def cmd_verify(cfg: RunConfig):
    from .asymptotics_harness import compute_series, fit_expansion
    from .moduli import SeifertData

    p = cfg.params
    sample = compute_series(SeifertData(p["g"], p["a"], p["b"]), p["k_min"], p["k_max"])
    report = fit_expansion(sample)
    if cfg.fmt == "csv":
        rows = [[int(k), _num(z.real), _num(z.imag)] for k, z in zip(report.ks, report.residual)]
        return _csv(["k", "residual_re", "residual_im"], rows), report.passed
    return _json(report.as_dict()), report.passed


def cmd_sphase(cfg: RunConfig):
    from .stationary_phase import StationaryPhaseVerifier

    p = cfg.params
    sign = {"+": "plus", "-": "minus", "plus": "plus", "minus": "minus"}[p["sign"]]
    exact_odd = (sign, p["parity"]) == ("minus", "odd")
    k_min = p["k_min"] if p["k_min"] is not None else (20 if exact_odd else 80)
    levels = p["levels"] if p["levels"] is not None else (7 if exact_odd else 8)
    ks = [k_min * 2 ** j for j in range(levels)]
    est = StationaryPhaseVerifier(alpha=p["alpha"], parity=p["parity"], n=p["n"], sign=sign).fit(ks)
    report = est.report_
    if cfg.fmt == "csv":
        rows = [[int(k), _num(z.real), _num(z.imag)] for k, z in zip(report.ks, report.values)]
        return _csv(["k", "re", "im"], rows), report.passed
    payload = {"alpha": p["alpha"], "parity": p["parity"], "n": p["n"], "sign": sign,
               "k_ladder": [int(k) for k in ks], **report.as_dict()}
    return _json(payload), report.passed


COMMANDS = {
    "verlinde": cmd_verlinde,
    "pm": cmd_pm,
    "pgm": cmd_pgm,
    "xi": cmd_xi,
    "zk": cmd_zk,
    "components": cmd_components,
    "verify": cmd_verify,
    "sphase": cmd_sphase,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=["json", "csv"], default=None,
                        help="output format (default depends on the command)")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--precision", type=int, help=f"working precision in bits (sets {PRECISION_ENV})")

    parser = _Parser(prog="seifert-wrt", description="Quantum invariants of Seifert manifolds and their asymptotics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verlinde", parents=[common], help="Verlinde number N^{g,k}_l")
    p.add_argument("g", type=int)
    p.add_argument("k", type=int)
    p.add_argument("ell", type=int)

    p = sub.add_parser("pm", parents=[common], help="polynomial P_m as a monomial list")
    p.add_argument("m", type=int)

    p = sub.add_parser("pgm", parents=[common], help="polynomial family P_{g,m} with its power of 2 pi")
    p.add_argument("g", type=int)

    p = sub.add_parser("xi", parents=[common], help="Xi_{m,k} on the grid next to the polynomial prediction")
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)

    for name, helptext in (("zk", "the series Z_k"), ("components", "character variety components"),
                           ("verify", "fit Z_k against the predicted expansion")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("g", type=int)
        p.add_argument("a", type=int)
        p.add_argument("b", type=int)
        if name == "zk":
            p.add_argument("--k-range", type=_k_range, required=True, help="lo:hi[:stride]")
        if name == "verify":
            p.add_argument("--k-max", type=int, default=512)
            p.add_argument("--k-min", type=int, default=16)

    p = sub.add_parser("sphase", parents=[common], help="stationary-phase prediction against measurement")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--parity", choices=["even", "odd"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sign", choices=["+", "-", "plus", "minus"], default="+")
    p.add_argument("--k-min", type=int, default=None, help="first level of the doubling ladder")
    p.add_argument("--levels", type=int, default=None, help="number of ladder levels")
    return parser


DEFAULT_FORMAT = {"verlinde": "text", "xi": "csv", "zk": "csv"}


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "fmt", "output", "precision")}
    fmt = ns.fmt or DEFAULT_FORMAT.get(ns.command, "json")
    return RunConfig(ns.command, params, fmt, ns.precision, ns.output)


def run(argv=None) -> int:
    from .verlinde import IntegrityError

    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    saved = os.environ.get(PRECISION_ENV)
    if cfg.precision is not None:
        os.environ[PRECISION_ENV] = str(cfg.precision)
    try:
        text, ok = COMMANDS[cfg.command](cfg)
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IntegrityError, ArithmeticError, AssertionError) as exc:
        print(f"integrity failure: {exc}", file=sys.stderr)
        return EXIT_FAILED
    finally:
        if cfg.precision is not None:
            if saved is None:
                os.environ.pop(PRECISION_ENV, None)
            else:
                os.environ[PRECISION_ENV] = saved
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAILED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
