"""Command-line front door: config parsing, subcommand dispatch, CSV emission.

Config files are flat ``key = value`` INI text with ``[instance]`` and
``[run]`` sections; any command-line flag overrides the file.  All outputs
are deterministic: identical config and seed produce byte-identical CSV
(header row, data rows, then ``# config_hash=...`` / ``# version=...``
comment lines; numbers carry 30 significant digits).
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import math
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from . import __version__
from .arith import build_arith_table
from .counting import (
    ApproxConfig,
    SieveSideParams,
    count_witnesses,
    sieve_side_counts,
)
from .errors import ConfigError, ContractError, DiophLabError, ResourceCapError
from .fixedreal import CVector, FixedReal, dioph_certify, parse_real
from .harness import (
    average_error_check,
    bound_audit,
    lower_bound_check,
    upper_bound_check,
)
from .fourier import VaalerPolynomial, sawtooth_array
from .parallel import map_ordered
from .vaughan import VaughanParams, b_array, vaughan_decompose

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3


def fmt30(value) -> str:
    """30-significant-digit decimal rendering for CSV round-tripping."""
    with localcontext() as ctx:
        ctx.prec = 30
        if isinstance(value, FixedReal):
            return value.decimal(30)
        if isinstance(value, Fraction):
            return format(Decimal(value.numerator) / Decimal(value.denominator))
        if isinstance(value, float):
            return format(Decimal(value) + 0)
        if isinstance(value, int):
            return str(value)
        return str(value)


def _config_hash(pairs: dict) -> str:
    semantic = {k: v for k, v in pairs.items() if k != "out"}
    blob = "\n".join(f"{k}={semantic[k]}" for k in sorted(semantic))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def write_csv(path: str, header: list[str], rows: list[list], pairs: dict) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt30(v) for v in row))
    lines.append(f"# config_hash={_config_hash(pairs)}")
    lines.append(f"# version={__version__}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


# ----------------------------------------------------------------------
# Config assembly
# ----------------------------------------------------------------------

_INSTANCE_KEYS = ("d", "c", "k", "eps", "A", "B")
_RUN_KEYS = ("alpha", "N", "Ngrid", "P", "Pgrid", "Q", "samples", "seed",
             "out", "Nbound", "a", "b", "J", "u", "points")


def _load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    values = {}
    for section in ("instance", "run"):
        if parser.has_section(section):
            values.update(dict(parser.items(section)))
    return values


def _merged(args: argparse.Namespace) -> dict:
    values: dict = {}
    if getattr(args, "config", None):
        values.update(_load_config_file(args.config))
    for key in _INSTANCE_KEYS + _RUN_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return values


def _instance(values: dict) -> ApproxConfig:
    try:
        c_text = values["c"]
        k = float(values["k"])
        eps = float(values["eps"])
    except KeyError as missing:
        raise ConfigError(f"missing instance key {missing}") from None
    a_lo = float(values.get("A", 1.0))
    b_hi = float(values.get("B", 2.0))
    cvec = CVector.parse(c_text, k)
    if "d" in values and int(values["d"]) != cvec.d:
        raise ConfigError(
            f"declared d={values['d']} but c has {cvec.d} components"
        )
    try:
        return ApproxConfig(c=cvec, epsilon=eps, A=a_lo, B=b_hi)
    except ContractError as err:
        raise ConfigError(str(err)) from None


def _n_grid(values: dict) -> list[int]:
    text = values.get("Ngrid")
    if text:
        return [int(t) for t in str(text).split(",") if t.strip()]
    return [2 ** e for e in range(10, 21)]


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def _cmd_search(values: dict) -> int:
    cfg = _instance(values)
    alpha = parse_real(str(values.get("alpha", "sqrt3")))
    n_max = int(values.get("N", 100000))
    out = str(values.get("out", "tuples.csv"))
    table = build_arith_table(int(math.ceil(alpha.to_float() * n_max)) + 2)
    count, tuples = count_witnesses(alpha, cfg, n_max, table)
    d = cfg.d
    header = (["p", "r"] + [f"q_{i}" for i in range(1, d + 1)]
              + ["slack0"] + [f"slack_{i}" for i in range(1, d + 1)])
    rows = []
    for t in tuples:
        rows.append([t.p, t.r, *t.q, t.slack0, *t.slack])
    write_csv(out, header, rows, values)
    print(f"witnesses: {count} (p <= {n_max}); wrote {out}")
    return EXIT_OK


def _cmd_integrate(values: dict) -> int:
    cfg = _instance(values)
    grid = _n_grid(values)
    a = float(values.get("a", cfg.A))
    b = float(values.get("b", cfg.B))
    out = str(values.get("out", "integrate.csv"))
    report = lower_bound_check(a, b, grid, cfg)
    header = ["N", "a", "b", "integral_exact", "target_main", "target_alt",
              "ratio"]
    rows = [[r.N, r.a, r.b, r.integral, r.target_main, r.target_alt, r.ratio]
            for r in report.rows]
    write_csv(out, header, rows, values)
    print(f"rows: {len(rows)}; trend nondecreasing: "
          f"{report.trend_nondecreasing}; regression ok: "
          f"{report.trend_regression_ok}; wrote {out}")
    bad = any(not math.isfinite(r.ratio) or r.ratio < 0 for r in report.rows)
    return EXIT_CHECK_FAILED if bad else EXIT_OK


def _cmd_upper(values: dict) -> int:
    cfg = _instance(values)
    grid = _n_grid(values)
    samples = int(values.get("samples", 12))
    seed = int(values.get("seed", 7))
    out = str(values.get("out", "upper.csv"))
    report = upper_bound_check(grid, cfg, samples, seed)
    header = ["N", "v_n", "target_main", "vn_over_target", "k_estimate"]
    rows = [[N, v, g, vg, report.k_est] for (N, v, g, vg) in report.rows]
    write_csv(out, header, rows, values)
    print(f"K_est={report.k_est:.6g}; wrote {out}")
    return EXIT_OK


def _cmd_audit(values: dict) -> int:
    cfg = _instance(values)
    if values.get("Pgrid"):
        p_list = [int(t) for t in str(values["Pgrid"]).split(",") if t.strip()]
    else:
        p_list = [int(values.get("P", 2 ** 13))]
    out = str(values.get("out", "audit.csv"))
    table = build_arith_table(int(math.ceil(cfg.B * max(p_list))) + 2)
    header = ["label", "P", "exact", "bound", "ratio", "J", "u"]
    degree = int(values["J"]) if values.get("J") else None
    split = float(values["u"]) if values.get("u") else None
    per_p = map_ordered(
        lambda P: bound_audit(P, cfg, table, degree=degree, u=split), p_list)
    rows = []
    failed = False
    for P, audit_rows in zip(p_list, per_p):
        for row in audit_rows:
            rows.append([row.label, P, row.exact_value, row.bound,
                         row.ratio, row.parameters["J"], row.parameters["u"]])
            if not (row.ratio > 0 and math.isfinite(row.ratio)):
                failed = True
    write_csv(out, header, rows, values)
    print(f"audit rows: {len(rows)}; wrote {out}")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _cmd_sieve_side(values: dict) -> int:
    cfg = _instance(values)
    alpha = parse_real(str(values.get("alpha", "sqrt3")))
    n_val = int(values.get("N", 10000))
    out = str(values.get("out", "sieve.csv"))
    q_cap = float(values["Q"]) if values.get("Q") else float(n_val) ** cfg.epsilon
    table = build_arith_table(max(n_val, 3))
    header = ["N", "t1", "t2", "S_exact", "main_term", "E_bound"]
    rows = []
    t1 = 1
    while t1 <= q_cap:
        t2 = 1
        while t1 * t2 <= q_cap:
            sp = SieveSideParams.from_config(cfg, n_val, t1, t2, Q=q_cap)
            res = sieve_side_counts(alpha, sp, cfg, table)
            rows.append([n_val, t1, t2, res.s_exact, res.main_term, res.e_bound])
            t2 += 1
        t1 += 1
    write_csv(out, header, rows, values)
    grid = [n_val // 10, n_val] if n_val >= 100 else [n_val]
    avg = average_error_check(grid, cfg, table,
                              alpha_samples=max(8, int(values.get("samples", 8))),
                              seed=int(values.get("seed", 1)))
    for N, lhs, target, ratio in avg:
        print(f"avg-error N={N}: lhs={lhs:.6g} target={target:.6g} "
              f"ratio={ratio:.6g}")
    print(f"sieve rows: {len(rows)}; wrote {out}")
    return EXIT_OK


def _cmd_vaaler_check(values: dict) -> int:
    import numpy as np

    grid_points = int(values.get("points", 10000))
    xs = (np.arange(grid_points) + 0.5) / grid_points
    ok = True
    for degree in (1, 5, 10, 50):
        poly = VaalerPolynomial.build(degree)
        psi_star = poly.psi_star(xs)
        tau = poly.tau(xs)
        budget = 2.0 ** -40
        nonneg = bool(np.all(tau >= -budget))
        majorized = bool(np.all(np.abs(psi_star - sawtooth_array(xs))
                                <= tau + budget))
        ok = ok and nonneg and majorized
        print(f"J={degree}: tau nonnegative: {nonneg}; "
              f"|psi*-psi| <= tau: {majorized}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _cmd_vaughan_check(values: dict) -> int:
    n_max = int(values.get("N", 10000))
    table = build_arith_table(max(100000, n_max))
    ok = True
    for uv in (5.0, 10.0, 31.0):
        params = VaughanParams(u=uv, v=uv, x=float(n_max))
        worst = 0.0
        for n in range(1, n_max + 1):
            a1, a2, a3, a4 = vaughan_decompose(table, n, params)
            lam = table.von_mangoldt(n) if n >= 2 else 0.0
            worst = max(worst, abs(a1 + a2 + a3 + a4 - lam))
        good = worst <= 1e-9
        ok = ok and good
        print(f"u=v={uv}: max identity error {worst:.3e}: "
              f"{'ok' if good else 'FAIL'}")
    import numpy as np

    bl = b_array(100000, 31.0, table)
    dl = np.zeros(100001, dtype=np.int64)  # divisor counts by direct sieve
    for dd in range(1, 100001):
        dl[dd::dd] += 1
    bound_ok = bool(np.all(np.abs(bl[1:]) <= dl[1:]))
    print(f"|b(l)| <= d(l) for l <= 1e5: {bound_ok}")
    ok = ok and bound_ok
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _cmd_dioph_certify(values: dict) -> int:
    try:
        c_text = values["c"]
        k = float(values["k"])
    except KeyError as missing:
        raise ConfigError(f"missing key {missing}") from None
    n_bound = int(values.get("Nbound", 50))
    cvec = CVector.parse(str(c_text), k)
    cert = dioph_certify(cvec, n_bound)
    print(f"C_est (finite-range certificate, max|v| <= {n_bound}): "
          f"{cert.c_est:.12g}")
    print(f"v_min: {list(cert.v_min)}")
    print(f"plain min dist: {cert.min_dist:.12g} at v = {list(cert.min_dist_v)}")
    return EXIT_OK


_COMMANDS = {
    "search": _cmd_search,
    "integrate": _cmd_integrate,
    "upper": _cmd_upper,
    "audit": _cmd_audit,
    "sieve-side": _cmd_sieve_side,
    "vaaler-check": _cmd_vaaler_check,
    "vaughan-check": _cmd_vaughan_check,
    "dioph-certify": _cmd_dioph_certify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diophlab",
        description="Prime-constrained simultaneous approximation lab",
    )
    sub = parser.add_subparsers(dest="command")
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config")
        p.add_argument("--d")
        p.add_argument("--c")
        p.add_argument("--k")
        p.add_argument("--eps")
        p.add_argument("--A")
        p.add_argument("--B")
        p.add_argument("--alpha")
        p.add_argument("--N")
        p.add_argument("--Ngrid")
        p.add_argument("--P")
        p.add_argument("--Pgrid")
        p.add_argument("--Q")
        p.add_argument("--samples")
        p.add_argument("--seed")
        p.add_argument("--out")
        p.add_argument("--Nbound")
        p.add_argument("--a")
        p.add_argument("--b")
        p.add_argument("--J")
        p.add_argument("--u")
        p.add_argument("--points")
    return parser


def dispatch(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return EXIT_CONFIG
    if not args.command:
        parser.print_usage()
        return EXIT_CONFIG
    try:
        values = _merged(args)
        return _COMMANDS[args.command](values)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceCapError as err:
        print(f"resource cap: {err}", file=sys.stderr)
        return EXIT_RESOURCE
    except DiophLabError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
