"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import appell, operators, series, spectral
from .clifford import Multivector, as_rational, blade_indices, format_rational
from .discrepancies import discrepancy_report
from .poly import CliffordPolynomial, falling_factorial, l1_level_points

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected an integer or p/q rational, got {text!r}") from exc


def positive_rational_arg(text: str) -> Fraction:
    q = rational_arg(text)
    if q <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive rational, got {text!r}")
    return q


def positive_float_arg(text: str) -> float:
    try:
        v = float(text) if "/" not in text else float(as_rational(text))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from exc
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def nonneg_int_arg(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return v


def dim_arg(text: str) -> int:
    v = nonneg_int_arg(text)
    if v < 1:
        raise argparse.ArgumentTypeError("n must be >= 1")
    return v


def multi_index_arg(text: str) -> tuple[int, ...]:
    try:
        alpha = tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not alpha or any(a < 0 for a in alpha):
        raise argparse.ArgumentTypeError(f"invalid multi-index {text!r}")
    return alpha


def float_list_arg(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


@dataclass
class RunConfig:
    args: argparse.Namespace

    @property
    def fmt(self) -> str:
        return self.args.format

    @property
    def out(self) -> str | None:
        return self.args.out


# output helpers

def blade_label(mask: int) -> str:
    idx = blade_indices(mask)
    return "".join(f"e{i}" for i in idx) if idx else "1"


def polynomial_rows(p: CliffordPolynomial) -> list[list[str]]:
    rows = []
    for alpha, mv in p.items():
        for mask, c in mv.items():
            rows.append([str(a) for a in alpha] + [blade_label(mask), format_rational(c)])
    return rows


def polynomial_csv(polys: Sequence[tuple[str, CliffordPolynomial]], n: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    labelled = len(polys) > 1
    w.writerow((["label"] if labelled else []) + [f"alpha{j}" for j in range(1, n + 1)]
               + ["blade", "coeff"])
    for label, p in polys:
        for row in polynomial_rows(p):
            w.writerow(([label] if labelled else []) + row)
    return buf.getvalue()


def rows_csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_polynomial(doc: dict, key: str = "polynomial") -> CliffordPolynomial:
    """Re-parse a polynomial emitted by a ``gen`` subcommand."""
    return CliffordPolynomial.from_json(doc[key], doc["n"])


def _q(v) -> str:
    return format_rational(Fraction(v))


def _family(args) -> appell.AppellFamilySpec:
    base = None
    if getattr(args, "base", None):
        try:
            base = Multivector.from_json(json.loads(args.base), args.n)
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"invalid --base multivector: {exc}") from exc
    if args.family == "charlier" and args.a is None:
        raise UsageError("--a is required for the charlier family")
    try:
        return appell.family(args.family, args.n, args.h, args.a, base)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _family_header(spec: appell.AppellFamilySpec) -> dict:
    doc = {"family": spec.name, "n": spec.n, "h": _q(spec.h)}
    a = getattr(spec.kappa, "a", None)
    if a is not None:
        doc["a"] = _q(a)
    if spec.base != Multivector.scalar(1, spec.n):
        doc["base"] = spec.base.to_json()
    return doc


# gen

def cmd_gen_appell(args):
    spec = _family(args)
    w = appell.appell_w(spec, args.k)
    if args.format == "csv":
        return EXIT_OK, polynomial_csv([("w", w)], spec.n)
    return EXIT_OK, {"kind": "appell", **_family_header(spec), "k": args.k, "polynomial": w.to_json()}


def cmd_gen_quasimonomial(args):
    n = len(args.alpha)
    if args.ladder == "central" and args.family != "falling":
        raise UsageError("the central ladder is only defined for the falling family")
    kappa = appell.family(args.family, n, args.h, args.a).kappa
    m = appell.quasi_monomial(args.ladder, kappa, args.alpha, args.h)
    if args.format == "csv":
        return EXIT_OK, polynomial_csv([("m", m)], n)
    return EXIT_OK, {"kind": "quasimonomial", "ladder": args.ladder, "family": args.family,
                     "n": n, "h": _q(args.h), "alpha": list(args.alpha), "polynomial": m.to_json()}


def cmd_gen_egf(args):
    spec = _family(args)
    egf = appell.egf_truncate(spec, args.K)
    if args.format == "csv":
        return EXIT_OK, polynomial_csv([(f"w{k}", w) for k, w in enumerate(egf.w)], spec.n)
    mu = appell.mu_table(spec.n, args.K).values
    return EXIT_OK, {"kind": "egf", **_family_header(spec), "K": args.K,
                     "mu": [_q(v) for v in mu],
                     "coefficients": [{"k": k, "polynomial": w.to_json()} for k, w in enumerate(egf.w)]}


def cmd_gen_falling(args):
    n = len(args.alpha)
    p = falling_factorial(args.alpha, args.h, n)
    if args.format == "csv":
        return EXIT_OK, polynomial_csv([("falling", p)], n)
    return EXIT_OK, {"kind": "falling", "n": n, "h": _q(args.h), "alpha": list(args.alpha),
                     "polynomial": p.to_json()}


def cmd_gen_hermite(args):
    n = len(args.alpha)
    p = appell.hermite_polynomial(args.alpha, n)
    if args.format == "csv":
        return EXIT_OK, polynomial_csv([("hermite", p)], n)
    return EXIT_OK, {"kind": "hermite", "n": n, "alpha": list(args.alpha), "polynomial": p.to_json()}


def cmd_gen_heat(args):
    n = len(args.alpha)
    sol = appell.heat_propagate(args.alpha, args.h, None, args.ladder)
    head = {"kind": "heat", "n": n, "h": _q(args.h), "alpha": list(args.alpha), "ladder": args.ladder}
    if args.t is not None:
        p = sol.at(args.t)
        if args.format == "csv":
            return EXIT_OK, polynomial_csv([("g", p)], n)
        return EXIT_OK, {**head, "t": _q(args.t), "polynomial": p.to_json()}
    if args.format == "csv":
        return EXIT_OK, polynomial_csv([(f"t^{m}", c) for m, c in enumerate(sol.coeffs)], n)
    return EXIT_OK, {**head, "t_coefficients": [{"power": m, "polynomial": c.to_json()}
                                                 for m, c in enumerate(sol.coeffs)]}


def cmd_gen_levelpoints(args):
    bound = args.bound if args.bound is not None else 2 * (args.k // 2)
    try:
        pts = l1_level_points(args.k, args.h, args.n, bound)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "csv":
        return EXIT_OK, rows_csv([f"x{j}" for j in range(1, args.n + 1)],
                                 [[_q(v) for v in p] for p in pts])
    return EXIT_OK, {"kind": "levelpoints", "n": args.n, "h": _q(args.h), "k": args.k,
                     "radius": _q(2 * (args.k // 2) * args.h), "count": len(pts),
                     "points": [[_q(v) for v in p] for p in pts]}


# verify

def _status(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_relations(args):
    rep = operators.relations_suite(args.n, args.h, args.degree)
    return _status(rep.passed), {"suite": "relations", "n": args.n, "h": _q(args.h),
                                 "degree": args.degree, "ok": rep.passed, "summary": rep.summary(),
                                 "checks": [c.to_json() for c in rep.checks]}


def cmd_verify_appell(args):
    spec = _family(args)
    rep = appell.appell_verify(spec, args.K)
    return _status(rep.passed), {"suite": "appell", **_family_header(spec), **rep.to_json()}


def cmd_verify_rodrigues(args):
    spec = _family(args)
    results = []
    for k in range(args.K + 1):
        r, w = appell.rodrigues_w(spec, k), appell.appell_w(spec, k)
        entry = {"k": k, "ok": r == w}
        if r != w:
            entry["rodrigues"] = r.to_json()
            entry["ladder"] = w.to_json()
        results.append(entry)
    ok = all(e["ok"] for e in results)
    passed = sum(e["ok"] for e in results)
    return _status(ok), {"suite": "rodrigues", **_family_header(spec), "K": args.K, "ok": ok,
                         "summary": f"{passed}/{len(results)} pass", "results": results}


def cmd_verify_intertwine(args):
    spec = _family(args)
    res = appell.intertwining_check(spec, args.degree)
    doc = {"suite": "intertwine", **_family_header(spec), "degree": args.degree, "ok": res.equal}
    if not res.equal:
        alpha, mask = res.witness
        doc["witness"] = {"alpha": list(alpha), "blade_mask": mask,
                          "left": res.left.to_json(), "right": res.right.to_json()}
    return _status(res.equal), doc


def cmd_verify_productrule(args):
    rep = operators.product_rule_check(args.h, args.degree, args.n, args.trials, args.seed)
    doc = {"suite": "productrule", "n": args.n, "h": _q(args.h), "degree": args.degree,
           "seed": args.seed, "checked": rep.checked, "ok": rep.passed,
           "failures": [{k: (v.to_json() if isinstance(v, CliffordPolynomial) else v)
                         for k, v in f.items()} for f in rep.failures]}
    return _status(rep.passed), doc


# check / series

def cmd_check_discrepancies(args):
    report = discrepancy_report()
    return EXIT_OK, {"count": len(report), "discrepancies": [d.to_json() for d in report]}


SERIES_KINDS = ("kappa", "pincherle", "lambda", "loglambda")


def cmd_series(args):
    spec = _family(args).kappa if args.family else None
    if spec is None:
        if not args.coeffs:
            raise UsageError("give --family or --coeffs")
        spec = series.CustomCoefficients(tuple(args.coeffs))
    N = args.order
    try:
        if args.what == "kappa":
            s = series.kappa_series(spec, N)
        elif args.what == "pincherle":
            s = series.pincherle_series(spec, N)
        elif args.what == "lambda":
            s = series.lambda_series_per_coordinate(spec, args.h, N)
        else:
            s = series.log_lambda_series_per_coordinate(spec, args.h, N)
    except (series.SeriesDomainError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    coeffs = [_q(c) for c in s.coeffs]
    if args.format == "csv":
        return EXIT_OK, rows_csv(["k", "coeff"], list(enumerate(coeffs)))
    return EXIT_OK, {"series": args.what, "family": spec.name, "order": N, "coefficients": coeffs}


# spectral (floating point)

def cmd_symbol(args):
    if args.grid % 2:
        raise UsageError("--grid must be even")
    rows = [list(p) + [mag] for p, mag in spectral.symbol_magnitudes(args.scheme, args.h, args.n, args.grid)]
    if args.format == "csv":
        return EXIT_OK, rows_csv([f"y{j}" for j in range(1, args.n + 1)] + ["abs2"],
                                 [[repr(float(v)) for v in r] for r in rows])
    return EXIT_OK, {"scheme": args.scheme, "n": args.n, "h": args.h, "grid": args.grid,
                     "rows": [[float(v) for v in r] for r in rows]}


def cmd_doublers(args):
    if args.grid % 2:
        raise UsageError("--grid must be even")
    zc = spectral.count_symbol_zeros(args.scheme, args.h, args.n, args.grid)
    return EXIT_OK, {"n": args.n, "h": args.h, "grid": args.grid, **zc.to_json()}


def cmd_dft(args):
    try:
        data = json.loads(args.data)
        g = {}
        for entry in data:
            x = tuple(as_rational(v) for v in entry["x"])
            g[x] = Multivector.from_json(entry["value"], len(x))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"invalid --data: {exc}") from exc
    if any(len(x) != len(args.y) for x in g):
        raise UsageError("lattice points and momentum have different dimensions")
    v = spectral.dft_finite(g, args.h, args.y)
    coeffs = [{"blade": list(blade_indices(m)), "re": c.real, "im": c.imag}
              for m, c in sorted(v.coeffs.items())]
    return EXIT_OK, {"y": list(args.y), "h": args.h, "value": coeffs}


def cmd_bessel(args):
    try:
        err = spectral.bessel_identity_check(args.s, args.u)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = err < args.tol
    return _status(ok), {"s": args.s, "u": args.u, "relative_error": err, "tol": args.tol, "ok": ok}


def cmd_quadinv(args):
    spec = _family(args)
    res = spectral.quadrature_inverse_check(spec, args.degree, args.S, args.steps, args.nodes)
    ok = res.error < args.tol
    return _status(ok), {**_family_header(spec), "degree": args.degree, "S": args.S,
                         "error": res.error, "tol": args.tol, "ok": ok}


# parser

def _common(p: argparse.ArgumentParser, fmt: bool = True) -> None:
    if fmt:
        p.add_argument("--format", choices=("json", "csv"), default="json")
    else:
        p.set_defaults(format="json")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--seed", type=int, default=0)


def _family_args(p: argparse.ArgumentParser, families=appell.FAMILIES, required=True) -> None:
    p.add_argument("--family", choices=families, required=required)
    p.add_argument("--n", type=dim_arg, default=1)
    p.add_argument("--h", type=positive_rational_arg, default=Fraction(1))
    p.add_argument("--a", type=rational_arg)
    p.add_argument("--base", help="base Clifford constant as multivector JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lattice-appell",
                                     description="Exact Clifford-valued Appell sets on the lattice hZ^n.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate polynomials").add_subparsers(dest="what", required=True)
    p = gen.add_parser("appell")
    _family_args(p)
    p.add_argument("--k", type=nonneg_int_arg, required=True)
    _common(p)
    p.set_defaults(func=cmd_gen_appell)

    p = gen.add_parser("quasimonomial")
    p.add_argument("--ladder", choices=("forward", "central"), default="forward")
    p.add_argument("--family", choices=appell.FAMILIES, default="falling")
    p.add_argument("--alpha", type=multi_index_arg, required=True)
    p.add_argument("--h", type=positive_rational_arg, default=Fraction(1))
    p.add_argument("--a", type=rational_arg)
    _common(p)
    p.set_defaults(func=cmd_gen_quasimonomial)

    p = gen.add_parser("egf")
    _family_args(p)
    p.add_argument("--K", type=nonneg_int_arg, required=True)
    _common(p)
    p.set_defaults(func=cmd_gen_egf)

    p = gen.add_parser("falling")
    p.add_argument("--alpha", type=multi_index_arg, required=True)
    p.add_argument("--h", type=positive_rational_arg, default=Fraction(1))
    _common(p)
    p.set_defaults(func=cmd_gen_falling)

    p = gen.add_parser("hermite")
    p.add_argument("--alpha", type=multi_index_arg, required=True)
    _common(p)
    p.set_defaults(func=cmd_gen_hermite)

    p = gen.add_parser("heat")
    p.add_argument("--alpha", type=multi_index_arg, required=True)
    p.add_argument("--h", type=positive_rational_arg, default=Fraction(1))
    p.add_argument("--t", type=rational_arg)
    p.add_argument("--ladder", choices=("forward", "central"), default="forward")
    _common(p)
    p.set_defaults(func=cmd_gen_heat)

    p = gen.add_parser("levelpoints")
    p.add_argument("--k", type=nonneg_int_arg, required=True)
    p.add_argument("--n", type=dim_arg, default=1)
    p.add_argument("--h", type=positive_rational_arg, default=Fraction(1))
    p.add_argument("--bound", type=nonneg_int_arg)
    _common(p)
    p.set_defaults(func=cmd_gen_levelpoints)

    ver = sub.add_parser("verify", help="run exact verification suites").add_subparsers(
        dest="what", required=True)
    p = ver.add_parser("relations")
    p.add_argument("--n", type=dim_arg, default=1)
    p.add_argument("--h", type=positive_rational_arg, default=Fraction(1))
    p.add_argument("--degree", type=nonneg_int_arg, default=6)
    _common(p, fmt=False)
    p.set_defaults(func=cmd_verify_relations)

    p = ver.add_parser("appell")
    _family_args(p)
    p.add_argument("--K", type=dim_arg, default=8)
    _common(p, fmt=False)
    p.set_defaults(func=cmd_verify_appell)

    p = ver.add_parser("rodrigues")
    _family_args(p)
    p.add_argument("--K", type=nonneg_int_arg, default=6)
    _common(p, fmt=False)
    p.set_defaults(func=cmd_verify_rodrigues)

    p = ver.add_parser("intertwine")
    _family_args(p)
    p.add_argument("--degree", type=nonneg_int_arg, default=5)
    _common(p, fmt=False)
    p.set_defaults(func=cmd_verify_intertwine)

    p = ver.add_parser("productrule")
    p.add_argument("--n", type=dim_arg, default=2)
    p.add_argument("--h", type=positive_rational_arg, default=Fraction(1))
    p.add_argument("--degree", type=nonneg_int_arg, default=3)
    p.add_argument("--trials", type=nonneg_int_arg, default=5)
    _common(p, fmt=False)
    p.set_defaults(func=cmd_verify_productrule)

    chk = sub.add_parser("check", help="cross-checks against published closed forms")
    chk = chk.add_subparsers(dest="what", required=True)
    p = chk.add_parser("discrepancies")
    _common(p, fmt=False)
    p.set_defaults(func=cmd_check_discrepancies)

    p = sub.add_parser("series", help="kappa / lambda coefficient tables")
    _family_args(p, required=False)
    p.add_argument("--coeffs", type=rational_arg, nargs="+",
                   help="custom kappa as a_0 a_1 ... with kappa = sum a_k t^k/k!")
    p.add_argument("--what", choices=SERIES_KINDS, default="kappa")
    p.add_argument("--order", type=nonneg_int_arg, default=8)
    _common(p)
    p.set_defaults(func=cmd_series)

    for name, func in (("symbol", cmd_symbol), ("doublers", cmd_doublers)):
        p = sub.add_parser(name)
        p.add_argument("--scheme", choices=spectral.SCHEMES, default="central")
        p.add_argument("--n", type=dim_arg, default=1)
        p.add_argument("--h", type=positive_float_arg, default=1.0)
        p.add_argument("--grid", type=dim_arg, default=32)
        _common(p, fmt=name == "symbol")
        p.set_defaults(func=func)

    p = sub.add_parser("dft")
    p.add_argument("--data", required=True,
                   help='JSON list of {"x": [p/q...], "value": multivector JSON}')
    p.add_argument("--y", type=float_list_arg, required=True)
    p.add_argument("--h", type=positive_float_arg, default=1.0)
    _common(p, fmt=False)
    p.set_defaults(func=cmd_dft)

    p = sub.add_parser("bessel")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    _common(p, fmt=False)
    p.set_defaults(func=cmd_bessel)

    p = sub.add_parser("quadinv")
    _family_args(p)
    p.add_argument("--degree", type=nonneg_int_arg, default=3)
    p.add_argument("--S", type=positive_float_arg, default=40.0)
    p.add_argument("--steps", type=dim_arg, default=80)
    p.add_argument("--nodes", type=dim_arg, default=16)
    p.add_argument("--tol", type=float, default=1e-10)
    _common(p, fmt=False)
    p.set_defaults(func=cmd_quadinv)
    return parser


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one parsed command; returns the exit code and the rendered artifact."""
    code, payload = config.args.func(config.args)
    text = payload if isinstance(payload, str) else dump_json(payload)
    return code, text


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = RunConfig(args)
    try:
        code, text = run(config)
    except (UsageError, ValueError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
