"""Command-line interface: ``weylmodes {info,equilibrium,verify,table}``.

Exit codes: 0 success, 1 failed check or no convergence, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction

from .equilibrium import equilibrium_report
from .errors import NoConvergence, UnsupportedRank
from .potentials import simple_pairings
from .rootsys import (
    MAX_CLASSICAL_RANK,
    Coupling,
    RootSystemId,
    all_supported,
    build_root_system,
    default_systems,
    rho_and_r,
)
from .verify import DEFAULT_TOL, SystemReport, VerificationReport, run_all

SIG_DIGITS = 12


class UsageError(Exception):
    pass


def num(x) -> float:
    """Float rounded to 12 significant digits (idempotent)."""
    return float(f"{float(x):.{SIG_DIGITS}g}")


def nums(xs) -> list[float]:
    return [num(x) for x in xs]


def exact(x: Fraction) -> str:
    return str(Fraction(x))


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return f"{float(x):.{SIG_DIGITS}g}"


def fmt_list(xs) -> str:
    return "[" + ", ".join(fmt(x) for x in xs) + "]"


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def coupling_dict(g: Coupling) -> dict:
    return {"long": num(g.g_long), "short": num(g.g_short)}


def system_record(rep: SystemReport) -> dict:
    """One entry of the JSON report."""
    if rep.error is not None or rep.rs is None:
        return {"system": str(rep.system), "error": rep.error, "pass": False}
    rs, eq, th = rep.rs, rep.equilibrium, rep.theorem
    return {
        "system": str(rep.system),
        "rank": rs.rank,
        "normalization": rs.normalization,
        "g": coupling_dict(rep.g),
        "q_bar": nums(eq.q_bar),
        "q_bar_simple_pairings": nums(simple_pairings(rs, eq.q_bar)),
        "eigs_a1": nums(eq.eigs_a1),
        "pred_2r_coroot": nums(th.predicted_coroot),
        "pred_2r_root": nums(th.predicted_root),
        "c_fit": num(eq.c_fit),
        "relation_residual": num(eq.relation_residual),
        "identity": {"lhs": rep.identity.lhs, "rhs": int(rep.identity.rhs), "pass": rep.identity.passed},
        "macdonald": {
            "lhs": num(rep.macdonald.lhs),
            "rhs": num(rep.macdonald.rhs),
            "rel_err": num(rep.macdonald.rel_err),
            "pass": rep.macdonald.passed,
        },
        "theorem": {
            "basis": th.basis,
            "max_rel_err_coroot": num(th.max_rel_err_coroot),
            "max_rel_err_root": num(th.max_rel_err_root),
            "literal_mismatch": th.literal_mismatch,
            "tol": th.tol,
            "pass": th.passed,
        },
        "relation13": {
            "c": num(rep.relation13.c),
            "residual": num(rep.relation13.residual),
            "pass": rep.relation13.passed,
        },
        "coincidence": {"distance": num(rep.coincidence.distance), "pass": rep.coincidence.passed},
        "gap": {
            "linear": [exact(x) for x in rep.gap.linear],
            "predicted": [exact(x) for x in rep.gap.predicted],
            "pass": rep.gap.passed,
        },
        "pass": rep.passed,
    }


def report_lines(rep: SystemReport) -> list[str]:
    name = str(rep.system)
    if rep.error is not None:
        return [f"FAIL  {name:<4} error        {rep.error}"]

    def line(ok, check, body):
        return f"{'PASS' if ok else 'FAIL'}  {name:<4} {check:<12} {body}"

    th, ide, mac = rep.theorem, rep.identity, rep.macdonald
    pred = th.predicted_coroot if th.basis == "coroot" else th.predicted_root
    err = th.max_rel_err_coroot if th.basis == "coroot" else th.max_rel_err_root
    body = f"eigs={fmt_list(th.eigs_computed)} pred_2r_{th.basis}={fmt_list(pred)} max_rel_err={err:.3e} tol={th.tol:g}"
    if th.basis == "coroot" and th.literal_mismatch:
        body += f" (root-basis {fmt_list(th.predicted_root)} differs)"
    if th.basis == "root" and not th.passed:
        body += f" mismatch: computed {fmt_list(th.eigs_computed)} vs {fmt_list(th.predicted_root)}"
    out = [line(th.passed, "theorem", body)]
    out.append(line(ide.passed, "identity", f"lhs={ide.lhs} rhs={fmt(ide.rhs)} exact"))
    rhs = fmt(float(mac.rhs))
    if len(str(mac.rhs)) <= 24:
        rhs += f" ({mac.rhs})"
    out.append(line(mac.passed, "macdonald", f"lhs={fmt(mac.lhs)} rhs={rhs} rel_err={mac.rel_err:.3e} tol={mac.tol:g}"))
    rel = rep.relation13
    out.append(line(rel.passed, "relation13", f"c={fmt(rel.c)} residual={rel.residual:.3e} tol={rel.tol:g}"))
    co = rep.coincidence
    out.append(line(co.passed, "coincidence", f"distance={co.distance:.3e} tol={co.tol:g}"))
    gap = rep.gap
    out.append(line(gap.passed, "gap", f"linear={fmt_list(gap.linear)} 2r_coroot={fmt_list(gap.predicted)} exact"))
    return out


TABLE_COLUMNS = [
    "system",
    "rank",
    "positive_roots",
    "degrees",
    "center_order",
    "r_root",
    "r_coroot",
    "eigs_a1",
    "c_fit",
    "macdonald_lhs",
    "macdonald_rhs",
    "identity_lhs",
    "identity_rhs",
]


def table_row(rep: SystemReport) -> dict:
    rs, eq = rep.rs, rep.equilibrium
    _, rc = rho_and_r(rs, rep.g)
    return {
        "system": str(rep.system),
        "rank": rs.rank,
        "positive_roots": len(rs.positive_roots),
        "degrees": list(rs.degrees),
        "center_order": rs.center_order,
        "r_root": [exact(x) for x in rc.r_root],
        "r_coroot": [exact(x) for x in rc.r_coroot],
        "eigs_a1": nums(eq.eigs_a1),
        "c_fit": num(eq.c_fit),
        "macdonald_lhs": num(rep.macdonald.lhs),
        "macdonald_rhs": num(rep.macdonald.rhs),
        "identity_lhs": rep.identity.lhs,
        "identity_rhs": int(rep.identity.rhs),
    }


def render_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([" ".join(fmt(v) for v in row[c]) if isinstance(row[c], list) else fmt(row[c]) for c in columns])
    return buf.getvalue()


# -- commands -------------------------------------------------------------


def _coupling(args) -> Coupling:
    if args.g_long < 0 or args.g_short < 0:
        raise UsageError("couplings must be nonnegative")
    return Coupling(args.g_long, args.g_short)


def _system(args):
    if args.system is None:
        raise UsageError("a system such as 'B3' is required")
    try:
        rid = RootSystemId.parse(args.system)
        return build_root_system(rid, max_rank=args.max_rank)
    except ValueError as exc:  # includes UnsupportedRank
        raise UsageError(str(exc)) from exc


def _systems(args) -> list[RootSystemId]:
    if args.all:
        return default_systems(args.deep)
    if args.every:
        return all_supported(args.max_rank)
    return [_system(args).id]


def cmd_info(args) -> int:
    rs = _system(args)
    g = _coupling(args)
    _, rc = rho_and_r(rs, g)
    info = {
        "system": str(rs.id),
        "rank": rs.rank,
        "normalization": rs.normalization,
        "positive_roots": len(rs.positive_roots),
        "num_roots": rs.num_roots,
        "degrees": list(rs.degrees),
        "weyl_order": rs.weyl_order,
        "center_order": rs.center_order,
        "cartan": [list(row) for row in rs.cartan],
        "highest_root": list(rs.highest_root.simple_coeffs),
        "simple_root_sq_lengths": [exact(r.sq_length) for r in rs.simple_roots],
        "g": coupling_dict(g),
        "r_root": [exact(x) for x in rc.r_root],
        "r_coroot": [exact(x) for x in rc.r_coroot],
    }
    if args.format == "json":
        args.out.write(dump_json(info))
    elif args.format == "csv":
        row = {k: v for k, v in info.items() if k not in ("cartan", "g")}
        args.out.write(render_csv([row], list(row)))
    else:
        w = args.out.write
        w(f"{rs.id}  rank {rs.rank}\n")
        w(f"positive roots {len(rs.positive_roots)}  |R| {rs.num_roots}\n")
        w(f"degrees {', '.join(map(str, rs.degrees))}\n")
        w(f"|W| {rs.weyl_order}\nz {rs.center_order}\n")
        w("cartan\n")
        for row in rs.cartan:
            w("  " + " ".join(f"{x:3d}" for x in row) + "\n")
        w(f"highest root {fmt_list(rs.highest_root.simple_coeffs)}\n")
        w(f"g long={fmt(g.g_long)} short={fmt(g.g_short)}\n")
        w(f"r_root ({', '.join(map(exact, rc.r_root))})\n")
        w(f"r_coroot ({', '.join(map(exact, rc.r_coroot))})\n")
    return 0


def cmd_equilibrium(args) -> int:
    rs = _system(args)
    g = _coupling(args)
    if not any(g.value(r.length_class) > 0 for r in rs.positive_roots):
        raise UsageError("coupling must be positive on at least one root length class")
    cmap = "raw" if args.literal_paper_mode else "matched"
    try:
        eq = equilibrium_report(rs, g, coupling_map=cmap)
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rec = {
        "system": str(rs.id),
        "rank": rs.rank,
        "normalization": rs.normalization,
        "g": coupling_dict(g),
        "coupling_map": cmap,
        "q_bar": nums(eq.q_bar),
        "q_bar_simple_pairings": nums(simple_pairings(rs, eq.q_bar)),
        "u_min": num(eq.u_min),
        "eigs_a1": nums(eq.eigs_a1),
        "eigs_a2": nums(eq.eigs_a2),
        "c_fit": num(eq.c_fit),
        "relation_residual": num(eq.relation_residual),
        "iterations": eq.iterations,
    }
    if args.format == "json":
        args.out.write(dump_json(rec))
    elif args.format == "csv":
        args.out.write(render_csv([rec], [k for k in rec if k != "g"]))
    else:
        w = args.out.write
        w(f"{rs.id}  g long={fmt(g.g_long)} short={fmt(g.g_short)}  coupling map {cmap}\n")
        w(f"q_bar {fmt_list(eq.q_bar)}\n")
        w(f"(q_bar, alpha_j) {fmt_list(simple_pairings(rs, eq.q_bar))}\n")
        w(f"U1 min {fmt(eq.u_min)}  iterations {eq.iterations}\n")
        w(f"eigs a1 {fmt_list(eq.eigs_a1)}\n")
        w(f"eigs a2 {fmt_list(eq.eigs_a2)}\n")
        w(f"c {fmt(eq.c_fit)}  residual {eq.relation_residual:.3e}\n")
    return 0


def _run(args) -> VerificationReport:
    systems = _systems(args)
    return run_all(systems, _coupling(args), args.tol, args.literal_paper_mode, max_rank=args.max_rank)


def cmd_verify(args) -> int:
    report = _run(args)
    if args.format == "json":
        args.out.write(dump_json({"pass": report.passed, "systems": [system_record(r) for r in report.records]}))
    elif args.format == "csv":
        rows = []
        for rep in report.records:
            if rep.error is not None:
                rows.append({"system": str(rep.system), "check": "error", "pass": False, "detail": rep.error})
                continue
            for line in report_lines(rep):
                status, _, check, detail = line.split(None, 3)
                rows.append({"system": str(rep.system), "check": check, "pass": status == "PASS", "detail": detail})
        args.out.write(render_csv(rows, ["system", "check", "pass", "detail"]))
    else:
        for rep in report.records:
            for line in report_lines(rep):
                args.out.write(line + "\n")
        n_fail = sum(not r.passed for r in report.records)
        args.out.write(f"{'PASS' if report.passed else 'FAIL'}: {len(report.records) - n_fail}/{len(report.records)} systems\n")
    return 0 if report.passed else 1


def cmd_table(args) -> int:
    report = _run(args)
    bad = [r for r in report.records if r.error is not None]
    rows = [table_row(r) for r in report.records if r.error is None]
    if args.format == "json":
        args.out.write(dump_json(rows))
    elif args.format == "csv":
        args.out.write(render_csv(rows, TABLE_COLUMNS))
    else:
        for row in rows:
            args.out.write("  ".join(f"{c}={fmt_list(row[c]) if isinstance(row[c], list) else fmt(row[c])}" for c in TABLE_COLUMNS) + "\n")
    for r in bad:
        print(f"error: {r.system}: {r.error}", file=sys.stderr)
    return 1 if bad else 0


COMMANDS = {"info": cmd_info, "equilibrium": cmd_equilibrium, "verify": cmd_verify, "table": cmd_table}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("system", nargs="?", help="root system, e.g. A3, B2, E8 (case-insensitive)")
    common.add_argument("--g-long", type=Fraction, default=Fraction(1), help="coupling on long roots")
    common.add_argument("--g-short", type=Fraction, default=Fraction(1), help="coupling on short roots")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative tolerance for numerical checks")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--all", action="store_true", help="run the default system list")
    common.add_argument("--deep", action="store_true", help="add E7 and E8 to --all")
    common.add_argument("--every", action="store_true", help="every supported system up to --max-rank")
    common.add_argument("--max-rank", type=int, default=MAX_CLASSICAL_RANK, help="rank ceiling for A-D families")
    common.add_argument(
        "--literal-paper-mode",
        action="store_true",
        help="judge frequencies by the root-basis expansion and pair U2 with the raw coupling",
    )
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="weylmodes", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="root system data and rho coefficients")
    sub.add_parser("equilibrium", parents=[common], help="alcove equilibrium and normal modes")
    sub.add_parser("verify", parents=[common], help="run the verification suite")
    sub.add_parser("table", parents=[common], help="one summary row per system")
    return p


def main(argv=None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.out = out or sys.stdout
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    if args.command in ("info", "equilibrium") and (args.all or args.every):
        print(f"error: {args.command} takes a single system", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except (UsageError, UnsupportedRank) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
