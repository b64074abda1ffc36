"""Command-line front end: construct, verify, spectrum, compare.

Exit codes separate failure families so CI can tell math from plumbing:

    0  success
    1  malformed input (expression/file/flag errors)
    2  domain violations (bad parameters, singular line or pole in box)
    3  a verification identity failed, or compared reports differ
    4  the eigensolver did not converge

All scalar inputs are exact texts like ``3/2`` or ``1 - sqrt2``; floats
appear only in numeric tolerances (--tol) and in spectrum output.  The
spectrum command writes a CSV table plus a JSON summary next to it
(``.csv`` replaced by ``.json``); both are byte-stable for identical
inputs.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .errors import (ConfigError, DomainError, IsopairError, ParseError,
                     SolverError)
from .pairs import (ALL_KINDS, KIND_1D_ORDER1, KIND_1D_ORDER2, KIND_3D_AXIAL,
                    KIND_3D_FAMILY, KIND_3D_SCREW, KIND_3D_TRANSLATIONAL)
from .parsing import parse_scalar

# flags each construction kind consumes (everything else is rejected)
_KIND_FLAGS = {
    KIND_1D_ORDER1: ("w", "c"),
    KIND_1D_ORDER2: ("v", "c", "d"),
    KIND_3D_TRANSLATIONAL: ("w", "Vyz", "c"),
    KIND_3D_AXIAL: ("w", "Vrhoz"),
    KIND_3D_SCREW: ("bz", "V"),
    KIND_3D_FAMILY: ("params",),
}


def _build_pair(args):
    provided = {name for name in
                ("w", "c", "v", "d", "Vyz", "Vrhoz", "bz", "V", "params")
                if getattr(args, name) is not None}
    allowed = set(_KIND_FLAGS[args.kind])
    stray = provided - allowed
    if stray:
        raise ConfigError(
            f"flags not used by {args.kind}: " +
            ", ".join(f"--{name}" for name in sorted(stray)))

    def need(name):
        if getattr(args, name) is None:
            raise ConfigError(f"{args.kind} needs --{name}")
        return getattr(args, name)

    def scalar_or(name, default="0"):
        raw = getattr(args, name)
        return parse_scalar(raw if raw is not None else default)

    if args.kind == KIND_1D_ORDER1:
        from .susy1d import build_order1

        return build_order1(need("w"), c=scalar_or("c"))
    if args.kind == KIND_1D_ORDER2:
        from .susy1d import build_order2

        return build_order2(need("v"), c=scalar_or("c"), d=scalar_or("d"))
    if args.kind == KIND_3D_TRANSLATIONAL:
        from .iso3d_first import build_translational

        return build_translational(need("w"), need("Vyz"), c=scalar_or("c"))
    if args.kind == KIND_3D_AXIAL:
        from .iso3d_first import build_axial

        return build_axial(need("w"), need("Vrhoz")).to_pair()
    if args.kind == KIND_3D_SCREW:
        from .iso3d_first import build_screw

        return build_screw(parse_scalar(need("bz")), need("V")).to_pair()
    from .iso3d_second import FamilyParams, build_family

    path = need("params")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as err:
        raise ConfigError(f"parameter file is not valid JSON: {err}") from None
    except OSError as err:
        raise ConfigError(f"cannot read parameter file: {err}") from None
    if not isinstance(data, dict):
        raise ConfigError("parameter file must contain a JSON object")
    return build_family(FamilyParams.from_dict(data)).to_pair()


def cmd_construct(args) -> int:
    from .pairfile import write_pair

    pair = _build_pair(args)
    write_pair(pair, args.output)
    print(pair.describe())
    print(f"wrote {args.output}")
    return 0


def cmd_verify(args) -> int:
    from .pairfile import read_pair, verify_pair

    pair = read_pair(args.pair)
    report = verify_pair(pair)
    out = args.output
    if out is None:
        out = args.pair[:-5] + ".verify.json" if args.pair.endswith(".json") \
            else args.pair + ".verify.json"
    with open(out, "w", encoding="utf-8") as handle:
        handle.write(report.to_json() + "\n")
    print(report)
    print(f"wrote {out}")
    return 0 if report.ok else 3


def cmd_spectrum(args) -> int:
    import os

    from .pairfile import read_pair
    from .spectra import BoxDomain, default_order, pair_spectrum

    csv_path = args.output
    json_path = csv_path[:-4] + ".json" if csv_path.endswith(".csv") \
        else csv_path + ".json"
    pair_file = os.path.realpath(args.pair)
    for out in (csv_path, json_path):
        if os.path.realpath(out) == pair_file:
            raise ConfigError(
                f"output {out!r} would overwrite the input pair file; "
                "choose a different -o name")

    pair = read_pair(args.pair)
    margin = Fraction(args.margin) if args.margin is not None else None
    box = BoxDomain.parse(args.box, frame=args.frame, exclusion_margin=margin)
    order = args.order if args.order is not None else default_order(box.dim)
    report = pair_spectrum(pair, box, n=args.n, k=args.k,
                           match_tol=args.tol, order=order)
    with open(csv_path, "w", encoding="utf-8") as handle:
        handle.write(report.to_csv())
    summary = report.summary()
    with open(json_path, "w", encoding="utf-8") as handle:
        handle.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(json.dumps(summary, indent=2, sort_keys=True))
    print(f"wrote {csv_path} and {json_path}")
    return 0


def _read_csv_rows(path: str) -> List[List[str]]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as err:
        raise ConfigError(f"cannot read CSV file: {err}") from None
    if not lines:
        raise ConfigError(f"{path} is empty")
    header = "index,E_H,E_Htilde,matched,abs_diff,intertwine_residual"
    if lines[0] != header:
        raise ConfigError(f"{path} does not carry the spectrum CSV header")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != 6:
            raise ConfigError(f"{path}: bad row {line!r}")
        rows.append(cells)
    return rows


def _cells_differ(a: str, b: str, tol: float) -> bool:
    if a == "" or b == "" or a == "ZERO_MODE" or b == "ZERO_MODE":
        return a != b
    try:
        return abs(float(a) - float(b)) > tol
    except ValueError:
        return a != b


def cmd_compare(args) -> int:
    rows_a = _read_csv_rows(args.first)
    rows_b = _read_csv_rows(args.second)
    problems = []
    if len(rows_a) != len(rows_b):
        problems.append(f"row counts differ: {len(rows_a)} vs {len(rows_b)}")
    labels = ("index", "E_H", "E_Htilde", "matched", "abs_diff",
              "intertwine_residual")
    for i, (ra, rb) in enumerate(zip(rows_a, rows_b)):
        for label, a, b in zip(labels, ra, rb):
            exact = label in ("index", "matched")
            if (a != b) if exact else _cells_differ(a, b, args.tol):
                problems.append(f"row {i}: {label} differs ({a!r} vs {b!r})")
    if problems:
        for line in problems:
            print(line)
        print(f"{len(problems)} difference(s) beyond tolerance {args.tol}")
        return 3
    print(f"reports agree within tolerance {args.tol}")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iso",
        description="Construct, verify, and cross-validate isospectral "
                    "partner Hamiltonian pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_con = sub.add_parser(
        "construct", help="build a partner pair and write it as JSON")
    p_con.add_argument("--kind", required=True, choices=ALL_KINDS)
    p_con.add_argument("--w", help="drift w (1d-order1, 3d-translational: "
                                   "w(x); 3d-axial: w(phi))")
    p_con.add_argument("--c", help="exact energy offset, e.g. '3/2'")
    p_con.add_argument("--v", help="second-order drift v(x)")
    p_con.add_argument("--d", help="exact splitting constant")
    p_con.add_argument("--Vyz", help="spectator potential V(y,z)")
    p_con.add_argument("--Vrhoz", help="spectator potential V(rho,z)")
    p_con.add_argument("--bz", help="screw pitch, exact rational")
    p_con.add_argument("--V", help="screw potential V(rho,xi)")
    p_con.add_argument("--params", help="family parameter JSON file")
    p_con.add_argument("-o", "--output", required=True,
                       help="pair file to write")
    p_con.set_defaults(func=cmd_construct)

    p_ver = sub.add_parser(
        "verify", help="re-run the exact symbolic checks on a pair file")
    p_ver.add_argument("pair", help="pair JSON file")
    p_ver.add_argument("-o", "--output",
                       help="report path (default: <pair>.verify.json)")
    p_ver.set_defaults(func=cmd_verify)

    p_spec = sub.add_parser(
        "spectrum", help="finite-difference spectra of both partners")
    p_spec.add_argument("pair", help="pair JSON file")
    p_spec.add_argument("--box", required=True,
                        help="'lo:hi' (1D) or 'lo:hi,lo:hi,lo:hi' (3D), "
                             "exact rational bounds")
    p_spec.add_argument("--n", required=True, type=int,
                        help="interior grid points per axis")
    p_spec.add_argument("--k", required=True, type=int,
                        help="number of lowest levels per operator")
    p_spec.add_argument("--tol", required=True, type=float,
                        help="greedy matching tolerance")
    p_spec.add_argument("--frame", choices=("standard", "rot45"),
                        default="standard")
    p_spec.add_argument("--order", type=int, choices=(2, 4),
                        help="stencil order (default: 2 in 1D, 4 in 3D)")
    p_spec.add_argument("--margin",
                        help="exact exclusion margin for singular planes "
                             "(default: one grid spacing)")
    p_spec.add_argument("-o", "--output", default="spectrum.csv",
                        help="CSV path (summary JSON written next to it)")
    p_spec.set_defaults(func=cmd_spectrum)

    p_cmp = sub.add_parser(
        "compare", help="diff two spectrum CSV files within a tolerance")
    p_cmp.add_argument("first")
    p_cmp.add_argument("second")
    p_cmp.add_argument("--tol", required=True, type=float)
    p_cmp.set_defaults(func=cmd_compare)
    return parser


# flags whose values may legitimately start with '-' (negative bounds,
# expressions like "-x"); merged into --flag=value so argparse keeps them
_DASH_VALUE_FLAGS = {"--box", "--w", "--v", "--V", "--Vyz", "--Vrhoz",
                     "--c", "--d", "--bz", "--margin", "--tol"}


def _merge_dash_values(argv: List[str]) -> List[str]:
    merged = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in _DASH_VALUE_FLAGS and i + 1 < len(argv):
            merged.append(f"{token}={argv[i + 1]}")
            i += 2
        else:
            merged.append(token)
            i += 1
    return merged


def main(argv: Optional[List[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = _parser().parse_args(_merge_dash_values(list(argv)))
    except SystemExit as exc:
        # argparse usage failures are input errors; --help stays success
        return 0 if not exc.code else 1
    try:
        return args.func(args)
    except (ParseError, ConfigError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except SolverError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    except DomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        # bad exact-rational texts (Fraction) and similar input slips
        print(f"error: {err}", file=sys.stderr)
        return 1
    except IsopairError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
