"""Command-line driver. Every subcommand writes CSV blocks separated by blank lines.

Exit status is 0 when every pass flag is true, 1 on a verification failure
and 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from ._exact import as_exponent, as_number, as_rational, fmt
from .approx import (
    ApproxError,
    CauchyFailure,
    continuous_approx_char,
    dyadic_average,
    lp_simple_approx,
    uniform_limit_certificate,
)
from .borel import IntervalSet, dyadic_cover, symm_diff
from .curves import (
    CertificateError,
    HatPath,
    Simple,
    delta_preimage,
    delta_separation,
    hat_discretization,
    parse_curve,
)
from .lcs import FiniteDim, PointwiseSpace, parse_vector
from .lpnorm import (
    QuadratureError,
    hat_power_integral,
    hb_inequality_check,
    lp_distance,
    lp_seminorm,
    weak_integral,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


class Output:
    """Collects CSV blocks and the overall pass flag."""

    def __init__(self):
        self.blocks: list[list[list[str]]] = []
        self.ok = True

    def block(self, header, rows, pass_col: str | None = "pass"):
        rows = [[fmt(v) for v in r] for r in rows]
        self.blocks.append([list(header)] + rows)
        if pass_col is not None and pass_col in header:
            j = list(header).index(pass_col)
            self.ok = self.ok and all(r[j] == "true" for r in rows)

    def render(self) -> str:
        buf = io.StringIO()
        for i, blk in enumerate(self.blocks):
            if i:
                buf.write("\n")
            csv.writer(buf, lineterminator="\n").writerows(blk)
        return buf.getvalue()


# --------------------------------------------------------------------------
# config helpers


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def _pick(args, cfg: dict, name: str, default=None):
    val = getattr(args, name, None)
    if val is not None:
        return val
    return cfg.get(name, default)


def _int_list(raw) -> list[int]:
    """``"1-8"``, ``"1,2,4"``, ``[1, 2]`` or a single int."""
    if isinstance(raw, int):
        return [raw]
    if isinstance(raw, list):
        return [int(v) for v in raw]
    out = []
    for part in str(raw).split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out += list(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _num_list(raw, exact=True) -> list:
    if isinstance(raw, list):
        vals = raw
    elif isinstance(raw, (int, float)):
        vals = [raw]
    else:
        vals = [v for v in str(raw).split(",") if v.strip()]
    conv = as_rational if exact else as_number
    return [conv(v.strip() if isinstance(v, str) else v) for v in vals]


def _space(lit, default):
    if lit is None:
        return default
    if isinstance(lit, dict) and len(lit) == 1:
        (kind, body), = lit.items()
        if kind == "finite":
            if isinstance(body, int):
                return FiniteDim.coordinates(body)
            weights = tuple(tuple(as_rational(w) for w in row) for row in body["weights"])
            return FiniteDim(int(body["dim"]), weights)
        if kind == "pointwise":
            return PointwiseSpace(tuple(as_rational(x) for x in body))
    raise ConfigError(f"bad space literal {lit!r}")


def _interval_set(raw) -> IntervalSet:
    if isinstance(raw, IntervalSet):
        return raw
    if isinstance(raw, list):
        return IntervalSet.from_json(raw)
    return IntervalSet.parse(str(raw))


def _qs(space, raw):
    if raw is None:
        return list(space.active)
    items = raw if isinstance(raw, list) else str(raw).split(",")
    return [space.parse_index(v) for v in items]


# --------------------------------------------------------------------------
# subcommands


def cmd_pathology(args, cfg, out: Output):
    ns = _int_list(_pick(args, cfg, "n", "1-64"))
    xs = _num_list(_pick(args, cfg, "x", "1/10,1/5,3/10,2/5,1/2,3/5,7/10,4/5,9/10"))
    ps = _int_list(_pick(args, cfg, "p", "1,2,3"))
    if not ns or min(ns) < 1 or not ps or min(ps) < 1:
        raise ConfigError("n and p must be positive integers")
    space = PointwiseSpace(tuple(xs))
    rows = []
    for n in ns:
        for x in xs:
            for p in ps:
                res = lp_seminorm(HatPath(n, space), x, p, args.tol)
                closed = hat_power_integral(n, x, p)
                interior = 1 / Fraction(n) <= x <= 1 - 1 / Fraction(n)
                val = res.integral
                bound = Fraction(2, n)
                ok = abs(float(val - closed)) <= 1e-8 and val <= bound
                rows.append(["hat_path", space.seminorm_id(x), p, n, x, val, closed,
                             interior, bound, res.integral_error, res.method, ok])
    out.block(["curve", "seminorm", "p", "n", "x", "value_pow_p", "closed_form", "interior",
               "bound_2_over_n", "error_bound", "method", "pass"], rows)

    s_raw = _pick(args, cfg, "s")
    if s_raw is None:
        rng = random.Random(args.seed)
        ss = sorted({Fraction(rng.randrange(1, 1000), 1000) for _ in range(4)})
    else:
        ss = _num_list(s_raw)
    sep_rows = []
    for s in ss:
        row = [s]
        for s2 in ss:
            row.append("" if s == s2 else delta_separation(s, s2))
        sep_rows.append(row)
    out.block(["s"] + [fmt(s) for s in ss], sep_rows, pass_col=None)
    sep_ok = all(v == 1 for r in sep_rows for v in r[1:] if v != "")
    out.ok = out.ok and sep_ok

    pre_cfg = cfg.get("preimage") or [
        {"coords": [x], "intervals": [[lo, hi]]}
        for x in ss[:2]
        for lo, hi in (("1/2", "2"), ("-1/2", "1/2"), ("-1", "2"), ("2", "3"))
    ]
    pre_rows = []
    for item in pre_cfg:
        coords = [as_rational(c) for c in item["coords"]]
        ivs = [(as_rational(a), as_rational(b)) for a, b in item["intervals"]]
        pre = delta_preimage(coords, ivs)
        pre_rows.append([";".join(fmt(c) for c in coords),
                         ";".join(f"({fmt(a)} {fmt(b)})" for a, b in ivs),
                         pre.kind, pre.describe(), pre.measure, True])
    out.block(["coords", "open_sets", "kind", "preimage", "measure", "borel"], pre_rows,
              pass_col=None)
    out.block(["check", "rows", "pass"],
              [["hat_rate", len(rows), all(r[-1] for r in rows)],
               ["delta_separation", len(ss) * (len(ss) - 1), sep_ok],
               ["delta_preimage", len(pre_rows), True]])


def _curve_setup(args, cfg, default_space):
    space = _space(cfg.get("space"), default_space)
    lit = cfg.get("curve", {"pw": {"name": "linear"}})
    try:
        curve = parse_curve(lit, space)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad curve: {exc}") from exc
    return space, curve, curve.name


def cmd_dyadic(args, cfg, out: Output):
    space, curve, cid = _curve_setup(args, cfg, FiniteDim.coordinates(1))
    levels = _int_list(_pick(args, cfg, "levels", "0-8"))
    ps = [as_exponent(p) for p in _num_list(_pick(args, cfg, "p", "1"), exact=False)]
    qs = _qs(space, _pick(args, cfg, "q"))
    rows = []
    for q in qs:
        # a per-segment constant bounds the averaging error only without jumps
        lip = curve.lipschitz(q) if curve.continuous else None
        for p in ps:
            errs = []
            for n in levels:
                res = lp_distance(curve, dyadic_average(curve, n, args.tol), q, p, args.tol)
                errs.append(res)
            for i, (n, res) in enumerate(zip(levels, errs)):
                nxt = errs[i + 1].value if i + 1 < len(errs) else None
                ratio = "" if not nxt else (res.value / nxt if nxt else "")
                bound = "" if lip is None else lip * Fraction(1, 2**n)
                slack = res.abs_error_bound
                ok = bound == "" or float(res.value) <= float(bound) + slack
                if i:
                    ok = ok and float(res.value) <= float(errs[i - 1].value) + slack + errs[i - 1].abs_error_bound
                rows.append([cid, space.seminorm_id(q), p, n, res.value, res.abs_error_bound,
                             ratio, bound, ok])
    out.block(["curve", "seminorm", "p", "level", "error", "error_bound", "ratio_next",
               "lip_bound", "pass"], rows)


def cmd_density(args, cfg, out: Output):
    space, curve, cid = _curve_setup(args, cfg, FiniteDim.coordinates(1))
    eps_list = _num_list(_pick(args, cfg, "eps", "1/10,1/100"))
    p = as_exponent(_pick(args, cfg, "p", 1))
    qs = _qs(space, _pick(args, cfg, "q"))
    rows = []
    for q in qs:
        for eps in eps_list:
            _, rep = lp_simple_approx(curve, q, p, eps, args.tol)
            rows += [r.cells() for r in rep.rows]
    out.block(["operation", "seminorm", "p", "n_or_eps", "claimed_bound", "measured", "pass"],
              rows)


def cmd_urysohn(args, cfg, out: Output):
    A = _interval_set(_pick(args, cfg, "set", "[1/5, 3/5)"))
    space = _space(cfg.get("space"), FiniteDim.coordinates(1))
    y0_lit = cfg.get("y0")
    y0 = parse_vector(y0_lit, space) if y0_lit is not None else space.basis(0)
    ns = _int_list(_pick(args, cfg, "n", "1,2,4,8,16,32,64"))
    p = as_exponent(_pick(args, cfg, "p", 1))
    if not ns or min(ns) < 1:
        raise ConfigError("n must be positive")
    rows = []
    for n in ns:
        _, rep = continuous_approx_char(y0, A, n, space, p, args.tol)
        rows += [r.cells() for r in rep.rows]
    out.block(["operation", "seminorm", "p", "n_or_eps", "claimed_bound", "measured", "pass"],
              rows)


def cmd_cover(args, cfg, out: Output):
    A = _interval_set(_pick(args, cfg, "set", "[0, 1/3)"))
    eps_list = _num_list(_pick(args, cfg, "eps", "1/100"))
    rows = []
    for eps in eps_list:
        if eps <= 0:
            raise ConfigError("eps must be positive")
        cov = dyadic_cover(A, eps)
        err = symm_diff(A, cov.as_intervalset()).measure
        rows.append([str(A), eps, cov.level, cov.cells_str(), err, err < eps])
    out.block(["set", "eps", "level", "cells", "symm_diff", "pass"], rows)


def cmd_integrate(args, cfg, out: Output):
    space, curve, cid = _curve_setup(args, cfg, FiniteDim.coordinates(1))
    ps = [as_exponent(p) for p in _num_list(_pick(args, cfg, "p", "1,2"), exact=False)]
    qs = _qs(space, _pick(args, cfg, "q"))
    rows = []
    for q in qs:
        for p in ps:
            r = lp_seminorm(curve, q, p, args.tol)
            rows.append([cid, space.seminorm_id(q), p, r.value, r.abs_error_bound, r.cells,
                         r.method])
    out.block(["curve", "seminorm", "p", "value", "error_bound", "cells", "method"], rows,
              pass_col=None)
    z = weak_integral(curve, None, args.tol)
    fs = space.generating_functionals()
    out.block(["functional", "weak_integral"],
              [[i, f(z)] for i, f in enumerate(fs)], pass_col=None)
    hb = []
    for q in qs:
        chk = hb_inequality_check(curve, q, args.tol)
        hb.append([space.seminorm_id(q), chk.lhs, chk.rhs, chk.tolerance, chk.passed])
    out.block(["seminorm", "q_of_integral", "integral_of_q", "tolerance", "pass"], hb)


def _sequence(cfg, space):
    seq = cfg.get("sequence", {"hat_discretization": {"x": "1/2", "levels": [1, 2, 3, 4, 5]}})
    if isinstance(seq, list):
        return space, [parse_curve(lit, space) for lit in seq]
    if isinstance(seq, dict) and "hat_discretization" in seq:
        body = seq["hat_discretization"]
        x = as_rational(body.get("x", "1/2"))
        space = PointwiseSpace.at(x)
        out = []
        for j in _int_list(body.get("levels", [1, 2, 3, 4, 5])):
            n = 2**j
            out.append(hat_discretization(n, 2 * n, space))
        return space, out
    if isinstance(seq, dict) and "geometric" in seq:
        body = seq["geometric"]
        y0 = parse_vector(body.get("y0", {"coords": [1]}), space)
        count = int(body.get("count", 8))
        return space, [
            Simple(((y0.scale(1 - Fraction(1, 2**n)), IntervalSet.full()),), space)
            for n in range(1, count + 1)
        ]
    raise ConfigError(f"bad sequence literal {seq!r}")


def cmd_limit(args, cfg, out: Output):
    space = _space(cfg.get("space"), FiniteDim.coordinates(1))
    try:
        space, seq = _sequence(cfg, space)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad sequence: {exc}") from exc
    if not all(isinstance(s, Simple) for s in seq):
        raise ConfigError("limit sequences must consist of simple curves")
    depth = args.depth
    sched = cfg.get("eps")
    sched = None if sched is None else _num_list(sched)
    header = ["operation", "seminorm", "p", "n_or_eps", "claimed_bound", "measured", "pass"]
    try:
        res = uniform_limit_certificate(seq, sched, None, depth)
    except CauchyFailure as fail:
        out.block(header, [r.cells() for r in fail.report.rows])
        out.block(["level", "m", "n", "t", "seminorm", "gap"],
                  [[fail.level, fail.m, fail.n, fail.t, space.seminorm_id(fail.q), fail.gap]],
                  pass_col=None)
        out.ok = False
        return
    out.block(header, [r.cells() for r in res.report.rows])
    K = res.certificate.K
    out.block(["depth", "measure_bound", "excluded_measure", "tail_indices", "pass"],
              [[depth, Fraction(1, depth), K.excluded_measure,
                ";".join(str(i) for i in res.indices), K.excluded_measure < Fraction(1, depth)]])


COMMANDS = {
    "pathology": cmd_pathology,
    "dyadic": cmd_dyadic,
    "density": cmd_density,
    "urysohn": cmd_urysohn,
    "cover": cmd_cover,
    "integrate": cmd_integrate,
    "limit": cmd_limit,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file, or - for stdin")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled inputs")
    common.add_argument("--depth", type=int, default=20, help="levels in the limit pipeline")
    parser = argparse.ArgumentParser(prog="lusinlp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("pathology", parents=[common], help="hat/delta path reports")
    p.add_argument("--n", help="steepness list, e.g. 1-64")
    p.add_argument("--x", help="evaluation points, e.g. 1/10,1/2")
    p.add_argument("--p", help="exponents, e.g. 1,2,3")
    p.add_argument("--s", help="points for the separation matrix")
    p = sub.add_parser("dyadic", parents=[common], help="dyadic averaging convergence")
    p.add_argument("--levels")
    p.add_argument("--p")
    p.add_argument("--q")
    p = sub.add_parser("density", parents=[common], help="Lp simple approximation")
    p.add_argument("--eps")
    p.add_argument("--p")
    p.add_argument("--q")
    p = sub.add_parser("urysohn", parents=[common], help="continuous approximation of y0 chi_A")
    p.add_argument("--set")
    p.add_argument("--n")
    p.add_argument("--p")
    p = sub.add_parser("cover", parents=[common], help="dyadic covering of a set")
    p.add_argument("--set")
    p.add_argument("--eps")
    p = sub.add_parser("integrate", parents=[common], help="Lp seminorms and weak integral")
    p.add_argument("--p")
    p.add_argument("--q")
    sub.add_parser("limit", parents=[common], help="uniform limit of simple functions")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol <= 0 or args.depth < 1:
        parser.error("--tol must be positive and --depth at least 1")
    out = Output()
    try:
        cfg = _load_config(args.config)
        COMMANDS[args.command](args, cfg, out)
    except (ConfigError, KeyError, TypeError, ZeroDivisionError) as exc:
        print(f"lusinlp: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, ArithmeticError, ApproxError, CertificateError) as exc:
        print(f"lusinlp: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"lusinlp: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = out.render()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not out.ok:
        print("lusinlp: verification failed (see rows with pass=false)", file=sys.stderr)
    return EXIT_OK if out.ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
