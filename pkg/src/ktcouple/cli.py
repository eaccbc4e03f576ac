"""Command line front end.

Instances are JSON documents with keys ``mu``, ``nu``, ``matrix`` and
optional ``name`` and ``description``; ``-`` reads the document from
standard input. All reports are stable ``key: value`` lines. Exit codes:
0 success, 1 verification failure, 2 usage or malformed input, 3 guarded
refusal of an oversized enumeration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .interp import InterpSpec, OperatorKernel, bracket_u_p, op_triple_norm, theta_inf_norm, theta_q_norm, weak_type_check
from .kt import kt_bracket
from .measure import MeasureSpace, WeightedMatrix
from .norms import (
    CoupleSpec,
    lorentz_pq_norm,
    lq_norm,
    mixed_inf_one,
    mixed_inf_one_T,
    mixed_weak_norm,
    mixed_weak_norm_T,
    weak_lp_norm,
)
from .rectnorm import GuardError, quad_norm, triple_norm, triple_norm_p1_degenerate
from .repro import repro_prop34, repro_remark23, repro_remark24, repro_varopoulos
from .splitting import CertificationError, split_p_q
from .harness import run_verification

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


class InstanceError(Exception):
    """The instance document is missing, malformed, or inconsistent."""


def load_instance(path: str) -> tuple[WeightedMatrix, dict]:
    """Reads an instance document from a file path or ``-`` for stdin."""
    try:
        if path == "-":
            payload = json.load(sys.stdin)
        else:
            with open(path, "r", encoding="utf-8") as handle:
                payload = json.load(handle)
    except OSError as exc:
        raise InstanceError(f"cannot read instance: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(payload, dict):
        raise InstanceError("instance document must be a JSON object")
    for key in ("mu", "nu", "matrix"):
        if key not in payload:
            raise InstanceError(f"instance document is missing {key!r}")
    try:
        matrix = WeightedMatrix(
            np.asarray(payload["matrix"], dtype=float),
            MeasureSpace(np.asarray(payload["mu"], dtype=float)),
            MeasureSpace(np.asarray(payload["nu"], dtype=float)),
        )
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"bad instance data: {exc}") from exc
    meta = {k: payload[k] for k in ("name", "description") if k in payload}
    return matrix, meta


def instance_to_dict(a: WeightedMatrix, name: str = "", description: str = "") -> dict:
    """Inverse of :func:`load_instance`; round-trips exactly."""
    doc = {
        "mu": a.row_space.masses.tolist(),
        "nu": a.col_space.masses.tolist(),
        "matrix": a.entries.tolist(),
    }
    if name:
        doc["name"] = name
    if description:
        doc["description"] = description
    return doc


class _Emitter:
    def __init__(self, digits: int):
        self.digits = digits

    def fmt(self, value) -> str:
        if isinstance(value, float):
            return f"{value:.{self.digits}g}"
        return str(value)

    def __call__(self, key: str, value):
        print(f"{key}: {self.fmt(value)}")


def _emit_header(emit, args, matrix_meta=None):
    emit("command", args.command)
    emit("seed", args.seed)
    if matrix_meta and "name" in matrix_meta:
        emit("instance", matrix_meta["name"])


def _indices(values) -> str:
    return ",".join(str(v) for v in values) if values else "-"


def _product_space(a: WeightedMatrix) -> MeasureSpace:
    return MeasureSpace(
        np.outer(a.row_space.masses, a.col_space.masses).ravel()
    )


def cmd_norm(args, emit) -> int:
    a, meta = load_instance(args.instance)
    _emit_header(emit, args, meta)
    emit("which", args.which)
    flat = a.entries.ravel()
    if args.which == "lq":
        _require(args, "q")
        emit("q", args.q)
        emit("value", lq_norm(flat, _product_space(a), args.q))
    elif args.which == "weak":
        _require(args, "p")
        emit("p", args.p)
        emit("value", weak_lp_norm(flat, _product_space(a), args.p))
    elif args.which == "lorentz":
        _require(args, "p")
        _require(args, "q")
        emit("p", args.p)
        emit("q", args.q)
        emit("value", lorentz_pq_norm(flat, _product_space(a), args.p, args.q))
    elif args.which == "mixed":
        emit("value", mixed_inf_one(a))
        emit("value_transposed", mixed_inf_one_T(a))
    else:  # mixed-weak
        _require(args, "p")
        _require(args, "q")
        emit("p", args.p)
        emit("q", args.q)
        emit("value", mixed_weak_norm(a, args.p, args.q))
        emit("value_transposed", mixed_weak_norm_T(a, args.p, args.q))
    return EXIT_OK


def _require(args, name: str):
    if getattr(args, name) is None:
        raise InstanceError(f"--{name} is required for this selection")


def cmd_rectnorm(args, emit) -> int:
    a, meta = load_instance(args.instance)
    _emit_header(emit, args, meta)
    emit("variant", args.variant)
    emit("t", args.t)
    if args.variant == "p1":
        emit("value", triple_norm_p1_degenerate(a, args.t))
        return EXIT_OK
    _require(args, "p")
    _require(args, "q")
    spec = CoupleSpec(args.p, args.q, args.t)
    emit("p", spec.p)
    emit("q", spec.q)
    fn = triple_norm if args.variant == "triple" else quad_norm
    res = fn(a, spec, override=args.guard_override)
    emit("value", res.value)
    emit("witness_rows", _indices(res.witness.rows))
    emit("witness_cols", _indices(res.witness.cols))
    emit("regime", res.regime)
    return EXIT_OK


def cmd_split(args, emit) -> int:
    a, meta = load_instance(args.instance)
    _emit_header(emit, args, meta)
    spec = CoupleSpec(args.p, args.q, args.t)
    emit("p", spec.p)
    emit("q", spec.q)
    emit("t", spec.t)
    res = split_p_q(a, spec, override=args.guard_override)
    upper = res.bound_a + spec.t * res.bound_b
    emit("scale", res.scale)
    emit("bound_a", res.bound_a)
    emit("bound_b", res.bound_b)
    emit("upper", upper)
    emit("cap_ratio", upper / (2.0 * res.scale) if res.scale > 0.0 else 0.0)
    emit("a_cells", " ".join(f"({i},{j})" for i, j in sorted(res.a_cells)) or "-")
    emit("stages", len(res.trace.stages))
    return EXIT_OK


def cmd_kt(args, emit) -> int:
    a, meta = load_instance(args.instance)
    _emit_header(emit, args, meta)
    spec = CoupleSpec(args.p, args.q, args.t)
    emit("p", spec.p)
    emit("q", spec.q)
    emit("t", spec.t)
    emit("oracle", args.oracle)
    bracket = kt_bracket(a, spec, oracle=args.oracle, override=args.guard_override)
    emit("lower", bracket.lower)
    emit("upper", bracket.upper)
    emit("width", bracket.upper - bracket.lower)
    emit("lower_source", bracket.lower_source)
    emit("upper_source", bracket.upper_source)
    b, c = bracket.decomposition
    emit("decomposition_norm", mixed_weak_norm(b, spec.p, spec.q))
    emit("decomposition_norm_transposed", mixed_weak_norm_T(c, spec.p, spec.q))
    return EXIT_OK


def cmd_interp(args, emit) -> int:
    a, meta = load_instance(args.instance)
    _emit_header(emit, args, meta)
    emit("which", args.which)
    kernel = OperatorKernel(a)
    if args.which == "op-norm":
        emit("t", args.t)
        emit("value", op_triple_norm(kernel, args.t, override=args.guard_override))
    elif args.which == "bracket-p":
        _require(args, "theta")
        emit("theta", args.theta)
        spec = InterpSpec(args.theta, math.inf)
        emit("value", bracket_u_p(kernel, spec, override=args.guard_override))
    elif args.which == "theta-inf":
        _require(args, "theta")
        emit("theta", args.theta)
        spec = InterpSpec(args.theta, math.inf)
        emit("value", theta_inf_norm(kernel, spec, override=args.guard_override))
    elif args.which == "weak-type":
        _require(args, "p")
        emit("p", args.p)
        emit("value", weak_type_check(kernel, args.p, override=args.guard_override))
    else:  # theta-q
        _require(args, "theta")
        emit("theta", args.theta)
        emit("q_outer", args.q_outer)
        emit("couple_p", args.couple_p)
        emit("couple_q", args.couple_q)
        emit("oracle", args.oracle)
        spec = InterpSpec(args.theta, args.q_outer)
        interval = theta_q_norm(
            a,
            spec,
            args.couple_p,
            args.couple_q,
            oracle=args.oracle,
            ratio=args.ratio,
            override=args.guard_override,
        )
        emit("lower", interval.lower)
        emit("upper", interval.upper)
        emit("width", interval.width)
        emit("midpoint", interval.midpoint)
    return EXIT_OK


def cmd_verify(args, emit) -> int:
    _emit_header(emit, args)
    report = run_verification(
        seed=args.seed, trials=args.trials, corrupt_split=args.corrupt_split
    )
    for prop in report.properties:
        total = prop.passed + prop.failed
        emit(f"property {prop.name}", f"{prop.passed}/{total} pass")
        if not prop.ok:
            emit(f"failure {prop.name}", prop.first_failure)
    emit("verdict", "pass" if report.ok else "fail")
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_repro(args, emit) -> int:
    _emit_header(emit, args)
    if args.case == "remark23":
        report = repro_remark23(args.n or 16, args.p)
    elif args.case == "remark24":
        sizes = tuple(int(s) for s in args.sizes.split(","))
        report = repro_remark24(sizes, args.p, args.q)
    elif args.case == "prop34":
        report = repro_prop34(args.n or 64, args.p, args.q, args.t)
    else:  # varopoulos
        report = repro_varopoulos(args.m, args.t, args.seed, args.trials)
    emit("case", report.case_id)
    for key, value in report.params.items():
        emit(f"param {key}", value)
    for check in report.checks:
        emit(
            f"check {check.name}",
            f"computed={check.computed:.12g} expected={check.expected:.12g} "
            f"relation={check.relation} tolerance={check.tolerance:g} "
            f"provenance={check.provenance} "
            f"verdict={'pass' if check.passed else 'fail'}",
        )
    for key, value in report.extras.items():
        emit(f"extra {key}", value)
    emit("verdict", "pass" if report.passed else "fail")
    return EXIT_OK if report.passed else EXIT_VERIFICATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kt-couple",
        description="K-functional brackets and rectangle norms for mixed-norm couples",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed echoed in reports and used by randomized commands")
    parser.add_argument("--digits", type=int, default=12, help="significant digits in printed values")
    parser.add_argument(
        "--guard-override",
        action="store_true",
        help="force enumerations past the cost guard",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    norm = sub.add_parser("norm", help="vector and mixed matrix norms")
    norm.add_argument("instance")
    norm.add_argument("--which", required=True, choices=["lq", "weak", "lorentz", "mixed", "mixed-weak"])
    norm.add_argument("--p", type=float)
    norm.add_argument("--q", type=float)
    norm.set_defaults(func=cmd_norm)

    rect = sub.add_parser("rectnorm", help="rectangle supremum norms")
    rect.add_argument("instance")
    rect.add_argument("--variant", default="triple", choices=["triple", "quad", "p1"])
    rect.add_argument("--p", type=float)
    rect.add_argument("--q", type=float)
    rect.add_argument("--t", type=float, required=True)
    rect.set_defaults(func=cmd_rectnorm)

    split = sub.add_parser("split", help="certified constructive splitting")
    split.add_argument("instance")
    split.add_argument("--p", type=float, default=math.inf)
    split.add_argument("--q", type=float, default=1.0)
    split.add_argument("--t", type=float, required=True)
    split.set_defaults(func=cmd_split)

    kt = sub.add_parser("kt", help="two-sided K-functional bracket")
    kt.add_argument("instance")
    kt.add_argument("--p", type=float, default=math.inf)
    kt.add_argument("--q", type=float, default=1.0)
    kt.add_argument("--t", type=float, required=True)
    kt.add_argument("--oracle", default="split", choices=["split", "lp", "mask"])
    kt.set_defaults(func=cmd_kt)

    interp = sub.add_parser("interp", help="operator interpolation quantities")
    interp.add_argument("instance")
    interp.add_argument(
        "--which",
        required=True,
        choices=["op-norm", "bracket-p", "theta-inf", "theta-q", "weak-type"],
    )
    interp.add_argument("--theta", type=float)
    interp.add_argument("--p", type=float)
    interp.add_argument("--t", type=float, default=1.0)
    interp.add_argument("--q-outer", dest="q_outer", type=float, default=math.inf)
    interp.add_argument("--couple-p", dest="couple_p", type=float, default=math.inf)
    interp.add_argument("--couple-q", dest="couple_q", type=float, default=1.0)
    interp.add_argument("--oracle", default="bracket", choices=["bracket", "lp"])
    interp.add_argument("--ratio", type=float, default=1.1)
    interp.set_defaults(func=cmd_interp)

    verify = sub.add_parser("verify", help="run the bundled property suites")
    verify.add_argument("--trials", type=int, default=40)
    verify.add_argument(
        "--corrupt-split",
        action="store_true",
        help="test hook: corrupt the splitting bound to prove failures are caught",
    )
    verify.set_defaults(func=cmd_verify)

    repro = sub.add_parser("repro", help="canned study cases with self-checks")
    repro.add_argument("case", choices=["remark23", "remark24", "prop34", "varopoulos"])
    repro.add_argument("--n", type=int)
    repro.add_argument("--m", type=int, default=3)
    repro.add_argument("--p", type=float, default=2.0)
    repro.add_argument("--q", type=float, default=1.0)
    repro.add_argument("--t", type=float, default=1.0)
    repro.add_argument("--sizes", default="4,16,64,256")
    repro.add_argument("--trials", type=int, default=100)
    repro.set_defaults(func=cmd_repro)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    emit = _Emitter(args.digits)
    try:
        return args.func(args, emit)
    except GuardError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except CertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (InstanceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    raise SystemExit(run())
