"""Command-line front end.

Exit codes: 0 ok, 2 parse error, 3 geometry error, 4 oracle/algebra
disagreement, 5 infeasible synthesis, 6 displacement left a face,
7 worked-example regression.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io, worked_example
from .contacts import immobilizes, penetration_matrix
from .errors import ImmobilizationError, LeftFace, NotCentredFeasible
from .geometry import face_volume, normals_from_vertices
from .oracle import OracleConfig, falsify
from .synthesis import apply_displacement, centred_contacts, centred_feasible_witness, centroid_contacts
from .tolerances import DEFAULT

EXIT_OK, EXIT_PARSE, EXIT_GEOMETRY, EXIT_DISAGREE = 0, 2, 3, 4
EXIT_INFEASIBLE, EXIT_LEFT_FACE, EXIT_REGRESSION = 5, 6, 7


class CommandError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _g(x) -> str:
    return format(float(x) + 0.0, ".9g")


def _vec(v) -> str:
    return "[" + ", ".join(_g(x) for x in v) + "]"


def _yes(flag, upper=False) -> str:
    word = "yes" if flag else "no"
    return word.upper() if upper else word


def _tolerances(args):
    return DEFAULT.with_overrides(sym=getattr(args, "tol_sym", None),
                                  apd=getattr(args, "tol_apd", None))


def _oracle_config(args) -> OracleConfig:
    cfg = OracleConfig()
    if getattr(args, "oracle_config", None):
        cfg = io.load_oracle_config(args.oracle_config)
    return OracleConfig(
        epsilon=args.epsilon if args.epsilon is not None else cfg.epsilon,
        n_random=args.n_random if args.n_random is not None else cfg.n_random,
        seed=args.seed if args.seed is not None else cfg.seed,
    )


def _load_simplex(args, tol):
    return io.load_simplex(args.input, tol)


def _agrees(verdict, report) -> bool:
    if verdict.immobilizes:
        return not report.refuted
    return not report.confirmed


def _emit(args, payload: dict, lines: list, out):
    if args.json:
        out.write(io.dumps(payload))
    else:
        out.write("\n".join(lines) + "\n")


def cmd_normals(args, out) -> int:
    s = _load_simplex(args, _tolerances(args))
    f = normals_from_vertices(s)
    faces = [face_volume(s, i) for i in range(s.n + 1)]
    payload = {**f.to_json(), "volume": s.volume, "face_volumes": faces,
               "swapped": bool(s.swapped)}
    lines = [f"n: {s.n}", f"volume: {_g(s.volume)}"]
    if s.swapped:
        lines.append("note: vertices 0 and 1 exchanged to make the orientation positive")
    for i, (k, kap) in enumerate(zip(f.normals, f.kappa)):
        lines.append(f"k_{i} = {_vec(k)}  kappa_{i} = {_g(kap)}  vol(F_{i}) = {_g(faces[i])}")
    lines.append("K =")
    lines += ["  " + _vec(row) for row in f.K]
    _emit(args, payload, lines, out)
    return EXIT_OK


def _verdict_lines(v):
    head = [f"symmetric: {_yes(v.symmetric)}"]
    if v.symmetric:
        head.append(f"APD: {_yes(v.almost_positive_definite)}")
    head.append(f"immobilizes: {_yes(v.immobilizes, upper=True)}")
    lines = [", ".join(head)]
    if v.margin is not None:
        lines.append(f"margin: {_g(v.margin)}")
    if v.eigenvalues is not None:
        lines.append(f"eigenvalues: {_vec(v.eigenvalues)}")
    lines.append(f"symmetric defect: {_g(v.symmetric_defect)}")
    if not v.strict:
        lines.append(f"warning: boundary contact at barycentric entries {list(v.boundary)}")
    return lines


def _oracle_lines(report):
    lines = [f"oracle: {report.verdict.value} ({report.reason}; {report.samples} samples, "
             f"worst psi {_g(report.worst_psi)})"]
    if report.witness is not None:
        coords = {k: v for k, v in report.witness.coords.items() if abs(v) > 1e-15}
        lines.append("witness S coords: " + ", ".join(f"({i},{j}): {_g(c)}"
                                                      for (i, j), c in coords.items()))
    return lines


def cmd_check(args, out) -> int:
    tol = _tolerances(args)
    s = _load_simplex(args, tol)
    c = io.load_contacts(args.contacts, s, tol)
    v = immobilizes(s, c, tol)
    payload = v.to_json()
    lines = _verdict_lines(v)
    code = EXIT_OK
    if args.oracle:
        report = falsify(s, c, _oracle_config(args), tol)
        payload["oracle"] = report.to_json()
        agree = _agrees(v, report)
        payload["oracle_agrees"] = agree
        lines += _oracle_lines(report)
        if not agree:
            lines.append("error: oracle disagrees with the algebraic verdict")
            code = EXIT_DISAGREE
    _emit(args, payload, lines, out)
    return code


def _parse_point(text, n):
    try:
        vals = json.loads(text) if text.strip().startswith("[") else [float(x) for x in text.split(",")]
        z = np.array(vals, dtype=float)
    except ValueError as exc:
        raise io.ParseError(f"--z: cannot parse {text!r} ({exc})") from None
    if z.shape != (n,):
        raise io.ParseError(f"--z: expected {n} coordinates, got {z.size}")
    return z


def _write_or_print(path, payload, out):
    text = io.dumps(payload)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_synthesize(args, out) -> int:
    tol = _tolerances(args)
    s = _load_simplex(args, tol)
    if args.mode == "centroid":
        c = centroid_contacts(s)
        payload = {"points": c.points, "barycentric": c.Lam.T}
    else:
        z = _parse_point(args.z, s.n) if args.z else centred_feasible_witness(s).z
        try:
            c, w = centred_contacts(s, z, tol)
        except NotCentredFeasible as exc:
            raise CommandError(EXIT_INFEASIBLE, str(exc)) from None
        payload = {"points": c.points, "barycentric": c.Lam.T, "centre": w.to_json()}
    v = immobilizes(s, c, tol)
    _write_or_print(args.output, payload, out)
    if args.output:
        out.write(f"wrote {args.output}; " + _verdict_lines(v)[0] + "\n")
    return EXIT_OK


def cmd_displace(args, out) -> int:
    tol = _tolerances(args)
    s = _load_simplex(args, tol)
    c = io.load_contacts(args.contacts, s, tol)
    coeffs = io.load_coeffs(args.coeffs)
    f = normals_from_vertices(s)
    before = penetration_matrix(f, c, tol)
    if not before.symmetric:
        raise CommandError(EXIT_GEOMETRY, "displacements need a contact set with symmetric A")
    try:
        moved = apply_displacement(s, c, coeffs, tol)
    except LeftFace as exc:
        raise CommandError(EXIT_LEFT_FACE, str(exc)) from None
    after = immobilizes(s, moved, tol)
    delta = None if after.eigenvalues is None else \
        float(after.eigenvalues[0] + after.eigenvalues[1]) - before.min_pair_sum
    payload = {
        "points": moved.points,
        "verdict": after.to_json(),
        "eigenvalues_before": before.eigenvalues,
        "min_pair_sum_before": before.min_pair_sum,
        "min_pair_sum_delta": delta,
    }
    lines = [f"eigenvalues before: {_vec(before.eigenvalues)}"]
    if after.eigenvalues is not None:
        lines.append(f"eigenvalues after:  {_vec(after.eigenvalues)}")
        lines.append(f"min pair sum: {_g(before.min_pair_sum)} -> "
                     f"{_g(before.min_pair_sum + delta)} (delta {_g(delta)})")
    lines += _verdict_lines(after)
    if args.output:
        _write_or_print(args.output, {"points": moved.points}, out)
        lines.append(f"wrote {args.output}")
    _emit(args, payload, lines, out)
    return EXIT_OK


def cmd_worked_example(args, out) -> int:
    ex = worked_example.build()
    v = ex.verdict
    scale = worked_example.reference_scale(ex.simplex.n)
    payload = {
        "vertices": ex.simplex.vertices,
        "normals_reference_scale": ex.normals_reference_scale,
        "normals": ex.fan.normals,
        "reference_scale": scale,
        "A_reference_scale": ex.A_reference_scale,
        "normals_max_error": ex.normals_error,
        "A_max_error": ex.A_error,
        "verdict": v.to_json(),
        "reproduced": ex.reproduced,
    }
    lines = [f"4-simplex, volume {_g(ex.simplex.volume)}",
             f"normals (scaled by (n-1)! = {_g(scale)}):"]
    lines += [f"  k_{i} = {_vec(k)}" for i, k in enumerate(ex.normals_reference_scale)]
    lines.append("A (same scaling) =")
    lines += ["  " + _vec(row) for row in ex.A_reference_scale]
    lines.append(f"max error: normals {_g(ex.normals_error)}, A {_g(ex.A_error)}")
    lines += _verdict_lines(v)
    code = EXIT_OK
    if args.oracle:
        report = falsify(ex.simplex, ex.contacts, _oracle_config(args))
        payload["oracle"] = report.to_json()
        lines += _oracle_lines(report)
        if not _agrees(v, report):
            code = EXIT_DISAGREE
    lines.append("reproduced: " + _yes(ex.reproduced))
    _emit(args, payload, lines, out)
    if not ex.reproduced:
        return EXIT_REGRESSION
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="immobilize",
                                description="Immobilization analysis for n-simplices.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, contacts=False):
        sp.add_argument("--input", required=True, help="simplex JSON file")
        if contacts:
            sp.add_argument("--contacts", required=True, help="contact set JSON file")
        sp.add_argument("--json", action="store_true", help="emit JSON")
        sp.add_argument("--tol-sym", type=float, default=None)
        sp.add_argument("--tol-apd", type=float, default=None)

    def oracle_opts(sp):
        sp.add_argument("--oracle", action="store_true", help="cross-check with the penetration oracle")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--epsilon", type=float, default=None)
        sp.add_argument("--n-random", type=int, default=None)
        sp.add_argument("--oracle-config", default=None, help="oracle config JSON file")

    sp = sub.add_parser("normals", help="normal fan of a simplex")
    common(sp)
    sp.set_defaults(func=cmd_normals)

    sp = sub.add_parser("check", help="decide immobilization of a contact set")
    common(sp, contacts=True)
    oracle_opts(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("synthesize", help="write an immobilizing contact set")
    common(sp)
    sp.add_argument("--mode", choices=["centroid", "centred"], default="centroid")
    sp.add_argument("--z", default=None, help="centre point, e.g. '0.2,0.3' (centred mode)")
    sp.add_argument("--output", default=None, help="contacts JSON to write (default stdout)")
    sp.set_defaults(func=cmd_synthesize)

    sp = sub.add_parser("displace", help="move a symmetric contact set along DeltaP_ij")
    common(sp, contacts=True)
    sp.add_argument("--coeffs", required=True, help="displacement coefficients JSON file")
    sp.add_argument("--output", default=None, help="displaced contacts JSON to write")
    sp.set_defaults(func=cmd_displace)

    sp = sub.add_parser("worked-example", help="reproduce the embedded 4-simplex example")
    sp.add_argument("--json", action="store_true")
    oracle_opts(sp)
    sp.set_defaults(func=cmd_worked_example)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except io.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ImmobilizationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY


if __name__ == "__main__":
    sys.exit(main())
