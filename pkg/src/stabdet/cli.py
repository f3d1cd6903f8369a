"""Command-line front end.

Commands: state, rdm, check, minimal, counterexample.  Exit codes: 0 for
success / Determined, 2 for parse or configuration errors, 3 for Inconsistent,
4 for Underdetermined.  The STABDET_CAP environment variable overrides the
dense-size caps; --cap takes precedence over it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import f2_pauli
from .stabilizer import (
    density_matrix,
    format_density_matrix,
    minimal_support_set,
    parse_generator_file,
    stabilizer_rdm,
)
from .graph_state import canonical_generators, parse_graph_file, state_vector
from .determination import (
    DETERMINED,
    INCONSISTENT,
    UNDERDETERMINED,
    DEFAULT_TOL,
    RdmConstraintSet,
    forcing_chain_mixed,
    forcing_chain_pure,
    parse_rdm_file,
    verify_counterexample,
)
from .f2_pauli import support

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INCONSISTENT = 3
EXIT_UNDERDETERMINED = 4

_STATUS_EXIT = {DETERMINED: EXIT_OK, INCONSISTENT: EXIT_INCONSISTENT,
                UNDERDETERMINED: EXIT_UNDERDETERMINED}


class CommandError(Exception):
    """Parse or configuration failure; maps to exit code 2."""


def _resolve_cap(args, default: int = f2_pauli.DENSE_MATRIX_CAP) -> int:
    if args.cap is not None:
        return args.cap
    env = os.environ.get("STABDET_CAP")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CommandError(f"STABDET_CAP must be an integer, got {env!r}")
    return default


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc}")


def _emit(args, name: str, content: str) -> None:
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / name).write_text(content)
    else:
        sys.stdout.write(f"# {name}\n{content}")


def _format_state_vector(vec: np.ndarray) -> str:
    lines = [f"dim={len(vec)}"]
    lines.extend(f"{z.real:.12g}{z.imag:+.12g}j" for z in vec)
    return "\n".join(lines) + "\n"


def cmd_state(args) -> int:
    try:
        graph = parse_graph_file(_read(args.graph))
        vec = state_vector(graph, cap=_resolve_cap(args, f2_pauli.DENSE_VECTOR_CAP))
        rho = density_matrix(canonical_generators(graph), cap=_resolve_cap(args))
    except ValueError as exc:
        raise CommandError(str(exc))
    _emit(args, "state.txt", _format_state_vector(vec))
    _emit(args, "rho.txt", format_density_matrix(rho))
    return EXIT_OK


def cmd_rdm(args) -> int:
    cap = _resolve_cap(args)
    try:
        gens = parse_generator_file(_read(args.generators))
        for spec in args.omega:
            omega = sorted(int(tok) for tok in spec.split(","))
            rho = stabilizer_rdm(gens, omega, cap=cap)
            name = "rdm_" + "".join(str(j) for j in omega) + ".txt"
            _emit(args, name, format_density_matrix(rho))
    except ValueError as exc:
        raise CommandError(str(exc))
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        graph = parse_graph_file(_read(args.graph))
        gens = canonical_generators(graph)
        if args.rdm:
            rdms = parse_rdm_file(_read(args.rdm), graph.n)
        else:
            rho = density_matrix(gens, cap=_resolve_cap(args))
            supports = [support(m) for m in gens.generators]
            rdms = RdmConstraintSet.from_state(rho, supports, graph.n)
        chain = forcing_chain_pure if args.pure else forcing_chain_mixed
        report = chain(graph, gens, rdms, tol=args.tol)
    except ValueError as exc:
        raise CommandError(str(exc))

    if args.json:
        print(json.dumps({"status": report.status,
                          "residual": report.max_residual,
                          "steps": len(report.forcing_log),
                          "message": report.message}))
    else:
        print("Reconstruction report")
        print(f"  mode: {'pure' if args.pure else 'mixed'}")
        print(f"  forcing steps: {len(report.forcing_log)}")
        if report.message:
            print(f"  note: {report.message}")
        if report.forcing_log:
            last = report.forcing_log[-1]
            print(f"  last step: entries {last.indices} by rule {last.rule!r}")
        print(f"status={report.status} residual={report.max_residual:.6g}")
    return _STATUS_EXIT[report.status]


def cmd_minimal(args) -> int:
    try:
        gens = parse_generator_file(_read(args.generators))
        supports = minimal_support_set(gens)
    except ValueError as exc:
        raise CommandError(str(exc))
    for omega in sorted(supports, key=lambda w: (len(w), sorted(w))):
        print(",".join(str(j) for j in sorted(omega)))
    return EXIT_OK


def cmd_counterexample(args) -> int:
    report = verify_counterexample(tol=args.tol)
    if args.json:
        print(json.dumps({
            "trace_distance": report.trace_distance,
            "shared_supports": {",".join(map(str, sorted(w))): dev
                                for w, dev in report.shared_supports.items()},
            "full_set_status": report.full_set_status,
            "all_pass": report.all_pass,
        }))
    else:
        print(f"trace distance between the two states: {report.trace_distance:.6g} "
              f"({'> 0.1' if report.states_differ else 'NOT > 0.1'})")
        for w, dev in sorted(report.shared_supports.items(),
                             key=lambda kv: sorted(kv[0])):
            print(f"  marginal on {sorted(w)} agrees to {dev:.3g}")
        print(f"shrunken-support marginals all agree: {report.marginals_agree}")
        for w, dev in sorted(report.distinguishing_supports.items(),
                             key=lambda kv: sorted(kv[0])):
            tag = "distinguishes" if dev > 1e-9 else "agrees"
            print(f"  full support {sorted(w)}: {tag} (deviation {dev:.3g})")
        print(f"full-support family result: {report.full_set_status}")
    return EXIT_OK if report.all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabdet")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                       help="absolute tolerance for equality checks")
        p.add_argument("--cap", type=int, default=None,
                       help="dense-size cap override (qubit count)")
        p.add_argument("--json", action="store_true",
                       help="emit a machine-readable summary")
        p.add_argument("--out", default=None,
                       help="output directory (default: stdout)")

    p = sub.add_parser("state", help="graph file -> state vector and density matrix")
    p.add_argument("graph")
    common(p)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("rdm", help="generator file -> reduced density matrices")
    p.add_argument("generators")
    p.add_argument("--omega", action="append", required=True,
                   help="comma-separated qubit indices; repeatable")
    common(p)
    p.set_defaults(func=cmd_rdm)

    p = sub.add_parser("check", help="run the determination check on a graph")
    p.add_argument("graph")
    p.add_argument("--rdm", default=None,
                   help="constraint file (default: self-check from the graph)")
    p.add_argument("--pure", action="store_true",
                   help="use the pure-state chain instead of the mixed one")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("minimal", help="minimal support set of a generator file")
    p.add_argument("generators")
    common(p)
    p.set_defaults(func=cmd_minimal)

    p = sub.add_parser("counterexample",
                       help="verify the 4-qubit shrunken-support counterexample")
    common(p)
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else 0
    if args.tol <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
