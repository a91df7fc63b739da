"""Command-line front end: sweep and wavefunction data as CSV/JSON and validation suites.

Exit codes: 0 success, 1 validation failure, 2 usage or parameter error.
Numbers in CSV output use 17 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

import numpy as np

from . import compare, herald, oracle, special, targets
from .errors import GPSError, NearConditionWarning, TruncationError
from .gaussian import (
    BeamSplitter,
    SqueezerPair,
    build_sigma,
    build_sigma_inverse,
    db_to_r,
    output_squeezing,
    output_squeezing_from_inputs,
    p_domain_sigma,
    reflectance_for_sigma11,
    solve_reflectance,
)

WAVEFUNCTION_COLUMNS = ("x", "psi_n", "target_cat", "abs_err")
P_DOMAIN_COLUMNS = ("p", "abs_psi_tilde", "abs_target_p")

EPILOG = """\
CSV schemas (column order is fixed):
  sigma        quantity,value
  wavefunction x,psi_n,target_cat,abs_err[,p,abs_psi_tilde,abs_target_p]
               (+ JSON sidecar <out>.json: fidelity, P(n), R, r_c, oscillation)
  sweep        db,r,P_gps_n<n>...,P_hom_n<n>...,P_conv_n<n>...,
               ratio_gps_conv_n<n>...,rate_gps_n<n>...,flags
  validate     suite,check,value,tolerance,status
"""


class UsageError(Exception):
    pass


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return "" if v is None else str(v)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o).__name__)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default, allow_nan=True) + "\n"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def parse_grid(text: str) -> tuple[float, float, float]:
    try:
        lo, hi, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise UsageError(f"grid must look like lo:hi:step, got {text!r}") from None
    if not (step > 0 and hi > lo):
        raise UsageError("grid needs hi > lo and step > 0")
    return lo, hi, step


def grid_values(text: str) -> np.ndarray:
    lo, hi, step = parse_grid(text)
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12)


def squeezers(args) -> SqueezerPair:
    if args.db is not None and (args.r1 is not None or args.r2 is not None):
        raise UsageError("--db and --r1/--r2 are mutually exclusive")
    if args.db is not None:
        return SqueezerPair.from_db(args.db)
    if args.r1 is None or args.r2 is None:
        raise UsageError("give either --db or both --r1 and --r2")
    return SqueezerPair(args.r1, args.r2)


def beam_splitter(args, sq: SqueezerPair) -> tuple[BeamSplitter, bool]:
    """Reflectance from --reflectance, --sigma11, or the GPS condition; flag if solved."""
    if args.reflectance is not None and getattr(args, "sigma11", None) is not None:
        raise UsageError("--reflectance and --sigma11 are mutually exclusive")
    if args.reflectance is not None:
        return BeamSplitter(args.reflectance), False
    if getattr(args, "sigma11", None) is not None:
        return reflectance_for_sigma11(sq, args.sigma11), False
    return solve_reflectance(sq), True


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_sigma(args) -> int:
    sq = squeezers(args)
    bs, solved = beam_splitter(args, sq)
    sigma = build_sigma(sq, bs)
    inv = build_sigma_inverse(sq, bs)
    tilde = p_domain_sigma(sigma)
    if args.reflectance is not None and not herald.is_gps(sigma):
        warnings.warn(f"R = {bs.R:.6g} gives sigma_11 = {sigma.s11:.6g} != 1", NearConditionWarning, stacklevel=2)
    report = {
        "r1": sq.r1,
        "r2": sq.r2,
        "R": bs.R,
        "T": bs.T,
        "solved_R": solved,
        "sigma": sigma.as_array().tolist(),
        "sigma_inverse": inv.as_array().tolist(),
        "sigma_p": tilde.as_array().tolist(),
        "det": sigma.det,
        "trace": sigma.trace,
        "gps_residual": sigma.s11 - 1.0,
        "r_c": output_squeezing(sigma),
    }
    if herald.is_gps(sigma):
        report["r_c_from_inputs"] = output_squeezing_from_inputs(sq)
    if args.format == "json":
        emit(dump_json(report), args.out)
    else:
        rows = []
        for k, v in report.items():
            if isinstance(v, list):
                for i, row in enumerate(v):
                    for j, x in enumerate(row):
                        rows.append((f"{k}_{i + 1}{j + 1}", x))
            else:
                rows.append((k, v))
        emit(to_csv(("quantity", "value"), rows), args.out)
    return 0


def _aligned_target(outcome, cat, grid):
    ov = targets.overlap(outcome.psi, cat, grid)
    return (1.0 if ov >= 0 else -1.0), float(ov) ** 2


def cmd_wavefunction(args) -> int:
    sq = squeezers(args)
    bs, _ = beam_splitter(args, sq)
    sigma = build_sigma(sq, bs)
    if not herald.is_gps(sigma):
        warnings.warn(f"sigma_11 = {sigma.s11:.6g} != 1: cat approximation not expected to hold",
                      NearConditionWarning, stacklevel=2)
    n = args.n
    outcome = herald.herald(sigma, n)
    r_t = output_squeezing(sigma)
    cat = targets.CatTarget(math.sqrt(n), n, r_t) if n > 0 else targets.CatTarget(0.0, 0, r_t)
    grid = outcome.grid(200)
    sign, fid = _aligned_target(outcome, cat, grid)
    xs = grid_values(args.grid)
    psi = np.asarray(outcome.psi(xs))
    tgt = sign * np.asarray(cat(xs))
    cols = [xs, psi, tgt, np.abs(psi - tgt)]
    header = list(WAVEFUNCTION_COLUMNS)
    if args.p_domain:
        ptil = np.abs(np.asarray(outcome.psi_p(xs)))
        pt = np.abs(np.asarray(targets.cat_wavefunction_p(cat, xs)))
        cols += [xs, ptil, pt]
        header += list(P_DOMAIN_COLUMNS)
    osc = herald.outcome_oscillation(outcome)
    meta = {
        "n": n,
        "r1": sq.r1,
        "r2": sq.r2,
        "R": bs.R,
        "sigma11": sigma.s11,
        "sigma12": sigma.s12,
        "sigma22": sigma.s22,
        "probability": outcome.prob,
        "r_c": outcome.r_c,
        "target": {"alpha": cat.alpha, "k": n, "r": r_t},
        "fidelity": fid,
        "oscillation": osc,
        "oscillation_flag": osc > herald.OSCILLATION_THRESHOLD,
        "columns": header,
    }
    rows = list(zip(*cols))
    if args.format == "json":
        emit(dump_json({"meta": meta, "columns": header, "rows": [[float(v) for v in r] for r in rows]}), args.out)
    else:
        emit(to_csv(header, rows), args.out)
        if args.out:
            with open(args.out + ".json", "w") as fh:
                fh.write(dump_json(meta))
        else:
            sys.stderr.write(dump_json(meta))
    return 0


def cmd_sweep(args) -> int:
    lo, hi, step = parse_grid(args.grid)
    ns = tuple(int(t) for t in args.n_list.split(","))
    methods = tuple(m.strip() for m in args.methods.split(","))
    try:
        spec = compare.SweepSpec.from_range(lo, hi, step, ns=ns, methods=methods, f_rep=args.frep)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    points = compare.sweep(spec)
    table = {(p.level_db, p.method, p.n): p for p in points}
    short = {"gps": "gps", "homodyne": "hom", "conventional": "conv"}
    header = ["db", "r"]
    for m in methods:
        header += [f"P_{short[m]}_n{n}" for n in ns]
    ratio = "gps" in methods and "conventional" in methods
    if ratio:
        header += [f"ratio_gps_conv_n{n}" for n in ns]
    if "gps" in methods:
        header += [f"rate_gps_n{n}" for n in ns]
    header.append("flags")
    rows = []
    for level in spec.levels_db:
        row = [level, db_to_r(level)]
        flags = []
        for m in methods:
            for n in ns:
                p = table[(level, m, n)]
                row.append(p.probability)
                if p.error:
                    flags.append(f"{short[m]}_n{n}:{p.error.split(':')[0]}")
        if ratio:
            for n in ns:
                g, c = table[(level, "gps", n)].probability, table[(level, "conventional", n)].probability
                row.append(g / c if c > 0 else math.nan)
        if "gps" in methods:
            row += [table[(level, "gps", n)].probability * args.frep for n in ns]
        row.append(";".join(flags))
        rows.append(row)
    if args.format == "json":
        emit(dump_json({"columns": header, "rows": rows}), args.out)
    else:
        emit(to_csv(header, rows), args.out)
    return 0


# --------------------------------------------------------------------------
# validation suites
# --------------------------------------------------------------------------


class Report:
    def __init__(self):
        self.rows: list[dict] = []

    def check(self, suite, name, value, tol, passed=None):
        ok = bool(value <= tol) if passed is None else bool(passed)
        self.rows.append({"suite": suite, "check": name, "value": float(value), "tolerance": float(tol),
                          "status": "pass" if ok else "fail"})

    def error(self, suite, name, exc):
        status = "truncation_error" if isinstance(exc, TruncationError) else "error"
        self.rows.append({"suite": suite, "check": name, "value": math.nan, "tolerance": math.nan,
                          "status": status, "message": str(exc)})

    @property
    def ok(self) -> bool:
        return all(r["status"] == "pass" for r in self.rows)


def _suite_gauss(rep: Report, args):
    rng = np.random.default_rng(0)
    worst_det = worst_inv = worst_s11 = 0.0
    for _ in range(200):
        r1, r2 = rng.uniform(0.01, 2.0), -rng.uniform(0.01, 2.0)
        sq = SqueezerPair(r1, r2)
        bs = BeamSplitter(rng.uniform(0, 1))
        s = build_sigma(sq, bs)
        worst_det = max(worst_det, abs(s.det / math.exp(2 * (r1 + r2)) - 1))
        prod = s.as_array() @ build_sigma_inverse(sq, bs).as_array()
        worst_inv = max(worst_inv, float(np.max(np.abs(prod - np.eye(2)))))
        worst_s11 = max(worst_s11, abs(build_sigma(sq, solve_reflectance(sq)).s11 - 1))
    rep.check("gauss", "det_conservation_rel", worst_det, 1e-12)
    rep.check("gauss", "sigma_times_inverse", worst_inv, 1e-12)
    rep.check("gauss", "solved_s11_residual", worst_s11, 1e-12)


def _suite_special(rep: Report, args):
    grid = special.QuadratureGrid(80)
    phis = special.eval_phi_all(30, grid.nodes)
    gram = (phis * grid.weights) @ phis.T
    rep.check("special", "orthonormality_n30", float(np.max(np.abs(gram - np.eye(31)))), 1e-10)
    worst = 0.0
    for n in range(0, 31, 5):
        for x in np.linspace(-6, 6, 25):
            # phi_0(y) phi_n(x - y) is a degree-n polynomial times exp(-(y - x/2)**2)
            g = special.hermite_grid(n, 1.0, center=x / 2)
            num = special.convolve_at(lambda y: special.eval_phi(0, y), lambda y: special.eval_phi(n, y), x, g)
            worst = max(worst, abs(float(num[0]) - special.vacuum_convolution(n, x)))
    rep.check("special", "vacuum_convolution_identity", worst, 1e-8)


def _config_sigma(args):
    sq = SqueezerPair.from_db(args.db)
    return sq, build_sigma(sq, solve_reflectance(sq))


def _suite_herald(rep: Report, args):
    _, sigma = _config_sigma(args)
    xs = np.linspace(-6, 6, 121)
    worst = 0.0
    for n in range(0, 21):
        worst = max(worst, float(np.max(np.abs(herald.herald_wavefunction_closed(sigma, n, xs)
                                                 - herald.herald_wavefunction_general(sigma, n, xs)))))
    rep.check("herald", "closed_vs_general_sup", worst, 1e-8)
    dp = max(abs(herald.prob_closed(sigma, n) - herald.prob_general(sigma, n)) for n in range(21))
    rep.check("herald", "prob_closed_vs_general", dp, 1e-8)
    total = sum(herald.prob_closed(sigma, n) for n in range(81))
    rep.check("herald", "completeness_deficit_n80", abs(1 - total), 1e-6)
    o = herald.herald(sigma, args.n)
    norm = special.integrate(lambda x: o.psi(x) ** 2, o.grid())
    rep.check("herald", f"norm_psi_{args.n}", abs(norm - 1), 1e-8)


def _suite_targets(rep: Report, args):
    worst = 0.0
    for n in (4, 6, 10, 16, 20):
        worst = max(worst, abs(targets.approx_target_fidelity(n) - targets.fn_rule(n)))
    rep.check("targets", "fn_rule_deviation", worst, 0.01)
    _, sigma = _config_sigma(args)
    o = herald.herald(sigma, args.n)
    cat = targets.CatTarget(math.sqrt(args.n), args.n, o.r_c)
    f = targets.fidelity(o.psi, cat, o.grid(200))
    rep.check("targets", f"fidelity_psi_{args.n}_vs_cat", 1 - f, 1 - targets.fn_rule(max(args.n, 1)) + 0.01)


def _suite_oracle(rep: Report, args):
    sq, sigma = _config_sigma(args)
    R = solve_reflectance(sq).R
    try:
        state = oracle.gps_fock_state(sq.r1, sq.r2, R, args.nmax)
    except TruncationError as exc:
        rep.error("oracle", "fock_state", exc)
        return
    rep.check("oracle", "tail_mass", state.tail, 10 * oracle.TAIL_LIMIT)
    n = args.n
    p_fock, heralded = oracle.herald_fock(state, n)
    rep.check("oracle", f"prob_agreement_n{n}", abs(p_fock - herald.prob_closed(sigma, n)), 1e-5)
    o = herald.herald(sigma, n)
    f = targets.fidelity(o.psi, lambda x: oracle.fock_to_wavefunction(heralded, x), o.grid(args.nmax + 200))
    rep.check("oracle", f"state_infidelity_n{n}", 1 - f, 1e-6)
    bsu = oracle.beam_splitter_unitary(R, args.nmax)
    rep.check("oracle", "unitarity", max(bsu.unitarity_residual(t) for t in range(0, args.nmax + 1, 5)), 1e-10)


def _suite_compare(rep: Report, args):
    r = db_to_r(args.db)
    g = compare.gps_success(r, args.n).probability
    h = compare.homodyne_method_success(r, args.n).probability
    c = compare.conventional_ps_success(r, args.n).probability
    rep.check("compare", f"gps_over_homodyne_n{args.n}", h / g, 1.0)
    rep.check("compare", f"homodyne_over_conventional_n{args.n}", c / h, 1.0)
    p10 = compare.gps_success(db_to_r(15), 10).probability
    rep.check("compare", "P10_at_15dB_minus_0.023", abs(p10 - 0.023), 0.001)


SUITES = {
    "gauss": _suite_gauss,
    "special": _suite_special,
    "herald": _suite_herald,
    "targets": _suite_targets,
    "oracle": _suite_oracle,
    "compare": _suite_compare,
}


def cmd_validate(args) -> int:
    names = list(SUITES) if args.suite == "all" else [s.strip() for s in args.suite.split(",")]
    for s in names:
        if s not in SUITES:
            raise UsageError(f"unknown suite {s!r}; choose from {', '.join(SUITES)} or all")
    rep = Report()
    for s in names:
        try:
            SUITES[s](rep, args)
        except TruncationError as exc:
            rep.error(s, "suite", exc)
    if args.format == "json":
        emit(dump_json({"passed": rep.ok, "checks": rep.rows}), args.out)
    else:
        rows = [(r["suite"], r["check"], r["value"], r["tolerance"], r["status"]) for r in rep.rows]
        emit(to_csv(("suite", "check", "value", "tolerance", "status"), rows), args.out)
    return 0 if rep.ok else 1


# --------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, fmt_default: str):
    p.add_argument("--format", choices=("csv", "json"), default=fmt_default)
    p.add_argument("--out", help="output path (default: stdout)")


def _squeezing_args(p: argparse.ArgumentParser):
    p.add_argument("--db", type=float, help="input squeezing in dB; inputs are (r, -r)")
    p.add_argument("--r1", type=float)
    p.add_argument("--r2", type=float)
    p.add_argument("--reflectance", type=float, help="override R (sigma_11 may then differ from 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpscat",
        description="Cat-state heralding by photon counting on two-mode Gaussian states.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sigma", help="sigma matrix report", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _squeezing_args(p)
    p.add_argument("--solve-r", action="store_true", help="solve R for sigma_11 = 1 (default without --reflectance)")
    _common(p, "json")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("wavefunction", help="heralded wavefunction vs target cat", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _squeezing_args(p)
    p.add_argument("--sigma11", type=float, help="choose R so that sigma_11 takes this value")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--grid", default="-6:6:0.01", help="x grid lo:hi:step (also used for p)")
    p.add_argument("--p-domain", action="store_true", help="add p-domain columns")
    _common(p, "csv")
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("sweep", help="success probabilities against input squeezing", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--grid", default="0.5:22:0.1", help="squeezing axis in dB, lo:hi:step")
    p.add_argument("--n", dest="n_list", default="5,10,20", help="comma-separated photon numbers")
    p.add_argument("--methods", default=",".join(compare.METHODS))
    p.add_argument("--frep", type=float, default=compare.DEFAULT_FREP, help="repetition rate in Hz")
    _common(p, "csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="run invariant suites", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--suite", default="all", help=f"all or comma list of: {', '.join(SUITES)}")
    p.add_argument("--db", type=float, default=5.0)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--nmax", type=int, default=60)
    _common(p, "json")
    p.set_defaults(func=cmd_validate)
    return parser


def _join_negative_values(argv: list[str]) -> list[str]:
    # lets "--grid -6:6:0.01" through; argparse would read -6:6:0.01 as an option
    out, i = [], 0
    while i < len(argv):
        if argv[i] in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


VALUE_FLAGS = {"--grid", "--db", "--r1", "--r2"}


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, GPSError, ValueError) as exc:
        sys.stdout.write(dump_json({"error": type(exc).__name__, "message": str(exc)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
