"""Command-line front end.

Every subcommand writes one artifact (stdout or ``--output``) that embeds the run
configuration. Exit status: 0 all checks passed, 1 a verification failed,
2 usage or precision error (reported on stderr as one JSON line).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from . import archimedean, auxiliary, decomposition, hecke_forms, lvalue, sym_power
from .sym_power import PrecisionError

PRECISION_ENV = "SYMLFUN_PRECISION"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    weight: int | None
    power: int | None
    truncation: int | None
    tolerance: float | None
    precision: str
    format: str
    output: str | None
    extra: dict

    def to_json(self) -> dict:
        return asdict(self)


def parse_precision(text: str) -> int | None:
    """``double`` -> None; ``high:BITS`` (or ``high``) -> mantissa bits."""
    text = text.strip().lower()
    if text == "double":
        return None
    if text.startswith("high"):
        _, _, bits = text.partition(":")
        return int(bits) if bits else auxiliary.DEFAULT_BITS
    raise UsageError(f"precision mode must be 'double' or 'high:BITS', got {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("usage", message)
        sys.exit(2)


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


# -- eigenform selection -----------------------------------------------------


def load_form(args, X: int) -> hecke_forms.Eigenform:
    if getattr(args, "eigenvalues", None):
        with open(args.eigenvalues) as fh:
            f = hecke_forms.import_eigenvalues(fh)
        if f.precision < X:
            raise PrecisionError(f"eigenvalue file covers m <= {f.precision}, need {X}")
        return f
    k = args.k
    if k in hecke_forms.DIM_ONE_WEIGHTS:
        return hecke_forms.hecke_eigenform(k, X)
    bits = parse_precision(args.precision)
    dps = 60 if bits is None else max(30, int(bits * 0.30103))
    return hecke_forms.eigenform_numeric(k, args.index, X, args.tol, dps=dps)


# -- subcommands -------------------------------------------------------------


def cmd_eigenform(args, out):
    f = load_form(args, args.X)
    buf = io.StringIO()
    hecke_forms.export_eigenvalues(f, buf, exact=args.exact)
    header, _, body = buf.getvalue().partition("\n")
    out.write(header + "\n" + "# config: " + json.dumps(args.config.to_json()) + "\n" + body)
    return True


def cmd_coeffs(args, out):
    f = load_form(args, args.X) if args.n > 0 else None
    series = sym_power.dirichlet_coeffs(args.n, f, args.X)
    if args.format == "json":
        _write_json(out, args, {"label": series.label, "truncation": series.truncation,
                                "lambda": [float(v) for v in series.coeffs[1:]]})
    else:
        sym_power.write_csv(series, out, comment="config: " + json.dumps(args.config.to_json()))
    return True


def cmd_verify_decomp(args, out):
    reports = []
    if args.level == "multiset":
        for n in range(1, args.n_max + 1):
            for r in range(args.r_max + 1):
                reports.append(decomposition.verify_multiset_report(n, r))
    elif args.level == "local":
        f = load_form(args, args.p)
        s = hecke_forms.satake_at(f, args.p)
        for n in range(1, args.n_max + 1):
            for r in range(args.r_max + 1):
                reports.append(decomposition.verify_local_identity(n, r, s, args.tol))
    else:
        f = load_form(args, args.X)
        for n in range(1, args.n_max + 1):
            for r in range(args.r_max + 1):
                reports.append(decomposition.verify_global_identity(n, r, f, args.X, args.tol))
    records = [rep.to_json() for rep in reports]
    _write_json(out, args, {"reports": records, "pass": all(r["pass"] for r in records)})
    return all(r["pass"] for r in records)


def cmd_aux_positivity(args, out):
    f = load_form(args, args.X)
    bits = parse_precision(args.precision) or auxiliary.DEFAULT_BITS
    rep = auxiliary.positivity_report(args.n, f, args.X, args.tol, bits)
    fm = auxiliary.factor_multiset(args.n)
    rep["factors"] = [list(t) for t in fm.factors]
    rep["pole_order"] = fm.pole_order
    rep["total_degree"] = fm.total_degree
    _write_json(out, args, rep)
    return rep["pass"]


def cmd_gamma(args, out):
    factors = archimedean.gamma_factors(args.n, args.k)
    _write_json(out, args, {
        "n": args.n, "k": args.k,
        "factors": [{"kind": g.kind, "shift": g.shift, "display": str(g)} for g in factors],
        "degree": archimedean.gamma_degree(factors),
    })
    return archimedean.gamma_degree(factors) == args.n + 1


def cmd_conductor(args, out):
    Q = archimedean.analytic_conductor(args.n, args.k, args.s)
    exact, bound = archimedean.log_conductor_bound(args.n, args.k)
    aux_log, aux_bound = archimedean.log_conductor_aux(args.n, args.k)
    _write_json(out, args, {"n": args.n, "k": args.k, "s": args.s, "Q": Q, "log_Q": exact,
                            "bound": bound, "log_Q_aux": aux_log, "aux_bound": aux_bound,
                            "aux_convention": "additive over symmetric-power factors"})
    return True


def cmd_zero_free(args, out):
    rem = archimedean.zero_free_endpoint(args.n, args.k, args.c)
    thm = archimedean.log_k_endpoint(args.n, args.k, args.c_n)
    _write_json(out, args, {"explicit_n": asdict(rem), "log_k": asdict(thm)})
    return True


def cmd_kernel_check(args, out):
    spec = lvalue.KernelSpec(args.r, args.x)
    closed = lvalue.kernel_closed_form(spec)
    value, tail = lvalue.kernel_quadrature(spec, args.height, args.nodes)
    err = abs(value - closed)
    _write_json(out, args, {"r": args.r, "x": args.x, "T": args.height, "closed_form": closed,
                            "quadrature": value, "error": err, "tail_bound": tail, "pass": err < tail})
    return err < tail


def cmd_lvalue(args, out):
    f = load_form(args, args.X)
    smooth = lvalue.l_value_at_1(args.n, f, args.X, args.target)
    euler = lvalue.euler_product_value(args.n, f, args.X)
    gap = abs(smooth.value - euler.value)
    agree = gap <= smooth.error_bound + euler.error_bound
    _write_json(out, args, {"n": args.n, "k": f.weight, "smoothed": smooth.to_json(),
                            "euler_product": euler.to_json(), "difference": gap, "agree": agree})
    return agree


def cmd_check_bound(args, out):
    f = load_form(args, args.X)
    rep = lvalue.check_bound(args.n, f, args.eps, args.C, args.X, args.target)
    _write_json(out, args, rep)
    return rep["pass"]


def cmd_zero_scan(args, out):
    f = load_form(args, args.X)
    a = args.a if args.a is not None else archimedean.zero_free_endpoint(args.n, f.weight, args.c).left_endpoint
    rep = lvalue.zero_scan(args.n, f, (a, 1.0), args.steps, args.X)
    if args.format == "json":
        _write_json(out, args, rep)
    else:
        out.write("# config: " + json.dumps(args.config.to_json()) + "\n")
        out.write(f"# HEURISTIC truncated-series scan; sign_change={rep['sign_change']} "
                  f"min_value={rep['min_value']!r}\n")
        out.write("sigma,value,tail_estimate\n")
        for row in rep["rows"]:
            out.write(f"{row['sigma']!r},{row['value']!r},{row['tail_estimate']!r}\n")
    return not rep["sign_change"]


def _sweep_cell(cell):
    n, k, c = cell
    return archimedean.sweep_row(n, k, c)


def cmd_sweep(args, out):
    ks = args.k_list if args.k_list else list(range(12, args.k_max + 1, 2))
    cells = sorted((n, k, args.c) for n in range(1, args.n_max + 1) for k in ks)
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_cell, cells, chunksize=max(1, len(cells) // (4 * args.workers))))
    else:
        rows = [_sweep_cell(c) for c in cells]
    rows.sort(key=lambda r: (r["n"], r["k"]))
    if args.format == "csv":
        out.write("# config: " + json.dumps(args.config.to_json()) + "\n")
        out.write("n,k,Q,log_Q,bound,endpoint\n")
        for r in rows:
            out.write(",".join(repr(r[c]) for c in ("n", "k", "Q", "log_Q", "bound", "endpoint")) + "\n")
    else:
        out.write(json.dumps({"config": args.config.to_json()}) + "\n")
        for r in rows:
            out.write(json.dumps(r) + "\n")
    return True


def _write_json(out, args, payload) -> None:
    json.dump({"config": args.config.to_json(), "result": payload}, out, indent=2, default=_jsonable)
    out.write("\n")


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"not JSON serialisable: {type(obj)}")


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    default_precision = os.environ.get(PRECISION_ENV, "double")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--precision", default=default_precision,
                        help=f"double | high:BITS (default from ${PRECISION_ENV})")

    form = argparse.ArgumentParser(add_help=False)
    form.add_argument("--k", type=int, default=12, help="weight of the eigenform")
    form.add_argument("--index", type=int, default=0, help="eigenform index when dim S_k > 1")
    form.add_argument("--eigenvalues", help="import eigenvalues from a text file")

    p = _Parser(prog="symlfun", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    s = sub.add_parser("eigenform", parents=[common, form])
    s.add_argument("--X", type=int, default=100)
    s.add_argument("--exact", action="store_true", help="export integer a_f(m)")
    s.set_defaults(func=cmd_eigenform, fmt="text")

    s = sub.add_parser("coeffs", parents=[common, form])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--X", type=int, default=1000)
    s.set_defaults(func=cmd_coeffs, fmt="csv")

    s = sub.add_parser("verify-decomp", parents=[common, form])
    s.add_argument("--level", choices=("multiset", "local", "global"), default="multiset")
    s.add_argument("--n-max", type=int, default=1)
    s.add_argument("--r-max", type=int, default=0)
    s.add_argument("--p", type=int, default=2, help="prime for --level local")
    s.add_argument("--X", type=int, default=1000)
    s.set_defaults(func=cmd_verify_decomp, fmt="json")

    s = sub.add_parser("aux-positivity", parents=[common, form])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--X", type=int, default=10**4)
    s.set_defaults(func=cmd_aux_positivity, fmt="json")

    s = sub.add_parser("gamma", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=12)
    s.set_defaults(func=cmd_gamma, fmt="json")

    s = sub.add_parser("conductor", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=12)
    s.add_argument("--s", type=float, default=0.0, help="evaluation point of the conductor")
    s.set_defaults(func=cmd_conductor, fmt="json")

    s = sub.add_parser("zero-free", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=12)
    s.add_argument("--c", type=float, default=1.0)
    s.add_argument("--c-n", type=float, default=1.0)
    s.set_defaults(func=cmd_zero_free, fmt="json")

    s = sub.add_parser("kernel-check", parents=[common])
    s.add_argument("--r", type=int, default=2)
    s.add_argument("--x", type=float, default=2.0)
    s.add_argument("--height", type=float, default=1e4)
    s.add_argument("--nodes", type=int, default=100)
    s.set_defaults(func=cmd_kernel_check, fmt="json")

    for name, func in (("lvalue", cmd_lvalue), ("check-bound", cmd_check_bound)):
        s = sub.add_parser(name, parents=[common, form])
        s.add_argument("--n", type=int, default=1)
        s.add_argument("--X", type=int, default=10**5)
        s.add_argument("--target", type=float, default=1e-3)
        if name == "check-bound":
            s.add_argument("--eps", type=float, default=0.1)
            s.add_argument("--C", type=float, default=1.0)
        s.set_defaults(func=func, fmt="json")

    s = sub.add_parser("zero-scan", parents=[common, form])
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--X", type=int, default=10**5)
    s.add_argument("--a", type=float, default=None, help="left end (default: 1 - c/(n^4 log nk))")
    s.add_argument("--c", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=100)
    s.set_defaults(func=cmd_zero_scan, fmt="csv")

    s = sub.add_parser("sweep", parents=[common])
    s.add_argument("--n-max", type=int, default=10)
    s.add_argument("--k-max", type=int, default=50)
    s.add_argument("--k-list", type=int, nargs="*")
    s.add_argument("--c", type=float, default=1.0)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep, fmt="json")
    return p


def _config(args) -> RunConfig:
    skip = {"func", "fmt", "subcommand", "output", "format", "tol", "precision", "k", "n", "X", "workers"}
    extra = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return RunConfig(
        subcommand=args.subcommand,
        weight=getattr(args, "k", None),
        power=getattr(args, "n", None),
        truncation=getattr(args, "X", None),
        tolerance=args.tol,
        precision=args.precision,
        format=args.format,
        output=args.output,
        extra=extra,
    )


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "json" if args.fmt == "json" else "csv"
    try:
        parse_precision(args.precision)
        args.config = _config(args)
        out = open(args.output, "w", newline="") if args.output else sys.stdout
        try:
            ok = args.func(args, out)
        finally:
            if args.output:
                out.close()
    except (UsageError, hecke_forms.EigenformError) as exc:
        _emit_error("usage", str(exc))
        return 2
    except (PrecisionError, lvalue.ConvergenceError, lvalue.QuadratureError) as exc:
        payload = {"error": "precision", "message": str(exc)}
        if getattr(exc, "x_needed", None):
            payload["x_needed"] = exc.x_needed
        sys.stderr.write(json.dumps(payload) + "\n")
        return 2
    except ValueError as exc:
        _emit_error("usage", str(exc))
        return 2
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
