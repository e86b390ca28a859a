"""Command-line front end.

Exit codes: 0 success, 2 invalid arguments, 3 precondition refusal
(for example a mimic request beyond its validity bound), 4 numerical
failure reported by a solver.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext

import numpy as np

from .entanglement import werner_entanglement_boundary
from .lhv import GENERATOR_ID, mimic_report
from .linalg import NumericalFailure, ValidityError
from .polytope import audit_certificate, optimize_settings, quantum_behavior
from .regions import LpSettings, ScanConfig, check_point, scan, write_csv, write_json
from .states import XI_MAX, family_state, werner_thresholds


def parse_angle(text: str) -> float:
    """Angle in radians; accepts plain floats and the '0.25pi' shorthand."""
    s = text.strip().lower()
    try:
        if s.endswith("pi"):
            head = s[:-2].strip()
            factor = 1.0 if head in ("", "+") else float(head)
            return factor * np.pi
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


def _xi_arg(text: str) -> float:
    value = parse_angle(text)
    if not (0.0 <= value <= XI_MAX + 1e-12):
        raise argparse.ArgumentTypeError(f"xi must lie in [0, pi/4], got {text!r}")
    return value


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse probability {text!r}") from None
    if not (0.0 <= value <= 1.0):
        raise argparse.ArgumentTypeError(f"expected a value in [0, 1], got {text!r}")
    return value


def _settings_count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse settings count {text!r}") from None
    if not (1 <= value <= 6):
        raise argparse.ArgumentTypeError(f"settings per side must be 1..6, got {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _grid(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"grid must look like NxM, got {text!r}")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like NxM, got {text!r}") from None
    if n < 1 or m < 1:
        raise argparse.ArgumentTypeError("grid axes must be positive")
    return n, m


def _angle_range(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"range must look like LO:HI, got {text!r}")
    return _xi_arg(parts[0]), _xi_arg(parts[1])


def _prob_range(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"range must look like LO:HI, got {text!r}")
    return _probability(parts[0]), _probability(parts[1])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellgap",
        description="Entanglement, hidden-variable models, and Bell violation "
        "for a pure entangled state mixed with aligned product noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="classify a grid over the (xi, p) rectangle")
    p_scan.add_argument("--grid", type=_grid, default=(50, 50), help="N xi values x M p values, e.g. 100x100")
    p_scan.add_argument("--xi-range", type=_angle_range, default=(0.0, XI_MAX), metavar="LO:HI")
    p_scan.add_argument("--p-range", type=_prob_range, default=(0.0, 1.0), metavar="LO:HI")
    p_scan.add_argument("--settings", type=_settings_count, default=None, help="augment each point with an LP search at m settings per side (json only)")
    p_scan.add_argument("--restarts", type=_positive_int, default=20)
    p_scan.add_argument("--seed", type=int, default=0)
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    p_scan.add_argument("--out", default=None, help="output path (default stdout)")

    p_check = sub.add_parser("check", help="classify a single (p, xi) point")
    p_check.add_argument("--p", type=_probability, required=True)
    p_check.add_argument("--xi", type=_xi_arg, required=True, help="radians; accepts 0.25pi syntax")

    p_lp = sub.add_parser("lp", help="search settings minimizing the critical visibility")
    p_lp.add_argument("--p", type=_probability, required=True)
    p_lp.add_argument("--xi", type=_xi_arg, required=True)
    p_lp.add_argument("--settings", type=_settings_count, default=2, help="settings per side (1..6)")
    p_lp.add_argument("--restarts", type=_positive_int, default=50)
    p_lp.add_argument("--seed", type=int, default=0)
    p_lp.add_argument("--out", default=None)

    p_mimic = sub.add_parser("mimic-verify", help="verify the separable mimic exactly and by sampling")
    p_mimic.add_argument("--p", type=_probability, required=True)
    p_mimic.add_argument("--xi", type=_xi_arg, required=True)
    p_mimic.add_argument("--samples", type=_positive_int, default=1_000_000)
    p_mimic.add_argument("--seed", type=int, default=0)

    p_werner = sub.add_parser("werner", help="reference thresholds for Werner states")
    p_werner.add_argument("--d", type=int, choices=(2, 3, 4), default=2)

    return parser


def _open_out(path):
    if path is None:
        return nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8")


def _cmd_scan(args) -> int:
    if args.settings is not None and args.format == "csv":
        print("invalid arguments: the fixed CSV schema has no LP column; use --format json with --settings", file=sys.stderr)
        return 2
    lp = None if args.settings is None else LpSettings(m=args.settings, restarts=args.restarts)
    config = ScanConfig(
        xi_range=args.xi_range,
        p_range=args.p_range,
        n_xi=args.grid[0],
        n_p=args.grid[1],
        seed=args.seed,
        lp_settings=lp,
    )
    result = scan(config)
    with _open_out(args.out) as fh:
        if args.format == "csv":
            write_csv(result, fh)
        else:
            write_json(result, fh)
    return 0


def _cmd_check(args) -> int:
    report = check_point(args.p, args.xi)
    pt = report["point"]
    print(f"p = {pt['p']!r}")
    print(f"xi = {pt['xiRad']!r} rad ({pt['xiOverPi']!r} pi)")
    print(f"entangled: {str(pt['entangled']).lower()}")
    print(f"lhv_modelled: {str(pt['lhvModelled']).lower()} (bound {pt['lhvBound']!r})")
    print(f"bell_violating: {str(pt['bellViolating']).lower()} (threshold {pt['pStar']!r})")
    print(f"pt_min_eig: {pt['ptMinEig']!r}")
    print(f"region: {report['region']}")
    return 0


def _cmd_lp(args) -> int:
    state = family_state(args.p, args.xi)
    search = optimize_settings(state, m_a=args.settings, restarts=args.restarts, seed=args.seed)
    table = quantum_behavior(state, search.settings)
    payload = {
        "p": args.p,
        "xi": args.xi,
        "vMin": search.v_min,
        "restarts": search.restarts,
        "result": search.visibility.to_json_dict(),
        "certificateAudit": audit_certificate(search.visibility, table),
        "meta": {"seed": args.seed, "generator": GENERATOR_ID},
    }
    with _open_out(args.out) as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return 0


def _cmd_mimic_verify(args) -> int:
    report = mimic_report(args.p, args.xi, samples=args.samples, seed=args.seed)
    print(f"p = {report['p']!r}, xi = {report['xi']!r} rad")
    print(f"validity bound: {report['validityBound']!r}")
    print(f"exact correlation check over {report['exactPairs']} pairs: max deviation {report['exactMaxDeviation']!r}")
    print(f"monte carlo ({report['samples']} rounds, seed {report['seed']}, {report['generator']}):")
    print(f"  five-sigma band: {report['fiveSigmaBand']!r}")
    print(f"  max correlation deviation: {report['mcMaxCorrelationDeviation']!r}")
    print(f"  max equatorial marginal deviation: {report['mcMaxEquatorialMarginalDeviation']!r}")
    print(f"pass: {str(report['pass']).lower()}")
    return 0


def _cmd_werner(args) -> int:
    p_ent, p_lhv = werner_thresholds(args.d)
    print(f"d = {args.d}")
    print(f"entanglement threshold: {p_ent!r}")
    print(f"projective lhv threshold: {p_lhv!r}")
    print(f"gap: {p_lhv - p_ent!r}")
    if args.d == 2:
        boundary = werner_entanglement_boundary(2, tol=1e-9)
        print(f"ppt boundary (bisection): {boundary!r}")
    return 0


_COMMANDS = {
    "scan": _cmd_scan,
    "check": _cmd_check,
    "lp": _cmd_lp,
    "mimic-verify": _cmd_mimic_verify,
    "werner": _cmd_werner,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidityError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
