"""Command-line driver.

Exit status 0 on success, 1 when a target is infeasible or a certificate
fails (an error JSON is printed and written to ``error.json``), 2 when the
problem file is malformed.
"""
import argparse
import json
import os
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import catalog, figures
from . import geometry as geo
from . import oracle
from .counterexample import certify_counterexample
from .errors import CertificationFailed, Infeasible, InvalidKernel, NotInRange
from .levels import BOUNDARY_TOL
from .measure import VectorMeasure
from .purification import (TargetAllocation, TransitionKernel, check_conditions, kernel_targets,
                           purify, verify_partition)
from .ranges import compute_range, maximal_subset, minimal_subset, q_set, range_of_subset

OUT_ENV = "VECMEASURE_OUT"

_NUM = {"type": "number"}
_POLY = {
    "type": "object",
    "required": ["breakpoints", "coeffs"],
    "properties": {
        "breakpoints": {"type": "array", "items": _NUM, "minItems": 2},
        "coeffs": {"type": "array", "minItems": 1,
                   "items": {"type": "array", "items": _NUM, "minItems": 1, "maxItems": 3}},
    },
}
_VEC = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}
SCHEMA = {
    "type": "object",
    "required": ["measure"],
    "additionalProperties": False,
    "properties": {
        "measure": {
            "type": "object",
            "required": ["densities"],
            "properties": {"densities": {"type": "array", "items": _POLY, "minItems": 2, "maxItems": 3}},
        },
        "p": _VEC,
        "q": _VEC,
        "targets": {"type": "array", "items": _VEC, "minItems": 1},
        "residual_policy": {"enum": ["reject", "absorb-into-last"]},
        "kernel": {
            "type": "object",
            "required": ["labels", "weights"],
            "properties": {
                "labels": {"type": "array", "minItems": 1},
                "weights": {"type": "array", "items": _POLY, "minItems": 1},
            },
        },
        "options": {"type": "object"},
    },
}


class ProblemError(Exception):
    """Malformed problem file (exit status 2)."""


class InfeasibleError(Exception):
    """Infeasible target or failed certificate (exit status 1)."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload or {}


def load_problem(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemError(f"cannot read problem file: {exc}") from exc
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ProblemError(f"schema: {exc.message} at /{'/'.join(map(str, exc.absolute_path))}") from exc
    try:
        data["measure"] = VectorMeasure.from_json(data["measure"])
    except ValueError as exc:
        raise ProblemError(f"invalid density: {exc}") from exc
    return data


def _need(problem, key, cmd):
    if problem is None:
        raise ProblemError(f"{cmd} needs --problem")
    if key is not None and key not in problem:
        raise ProblemError(f"{cmd} needs '{key}' in the problem file")
    return problem if key is None else problem[key]


def _pair_measure(problem, cmd):
    mu = _need(problem, "measure", cmd)
    if mu.m != 2:
        raise ProblemError(f"{cmd} needs a two-dimensional measure")
    return mu


def _write(out, name, text):
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text, encoding="utf-8")
    return str(out / name)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _tol(args):
    return BOUNDARY_TOL if args.tol is None else args.tol


def cmd_range(args, problem, out):
    mu = _pair_measure(problem, "range")
    rng = compute_range(mu)
    svg, _ = figures.render(rng, rng.total)
    files = [
        _write(out, "range.json", _dump({"vertices": rng.region.to_json(), "total": rng.total.tolist(),
                                         "sampling_error": rng.sampling_error})),
        _write(out, "boundary.csv", figures.boundary_csv(rng)),
        _write(out, "range.svg", svg),
    ]
    return {"command": "range", "vertices": len(rng.region), "files": files}


def _in_range_or_fail(rng, p, tol):
    if not rng.contains(p, rng.tol + tol):
        raise InfeasibleError("target is not in the range", {"target": list(map(float, p))})


def cmd_qset(args, problem, out):
    mu = _pair_measure(problem, "qset")
    p = np.asarray(_need(problem, "p", "qset"), dtype=float)
    rng = compute_range(mu)
    _in_range_or_fail(rng, p, _tol(args))
    qs = q_set(rng, p, tol=rng.tol + _tol(args))
    f = _write(out, "qset.json", _dump({"p": p.tolist(), "vertices": qs.to_json()}))
    return {"command": "qset", "vertices": len(qs), "files": [f]}


def cmd_maximal(args, problem, out):
    mu = _pair_measure(problem, "maximal")
    p = np.asarray(_need(problem, "p", "maximal"), dtype=float)
    rng = compute_range(mu)
    _in_range_or_fail(rng, p, _tol(args))
    res = maximal_subset(mu, p, rng=rng, boundary_tol=max(_tol(args), BOUNDARY_TOL))
    gap = geo.hausdorff(range_of_subset(mu, res.z_star), res.q_set)
    body = {"p": p.tolist(), "z_star": res.z_star.to_json(), "a_star": res.a_star,
            "achieved": res.achieved.tolist(), "q_set": res.q_set.to_json(),
            "hausdorff_range_vs_qset": gap}
    return {"command": "maximal", "z_star": body["z_star"], "files": [_write(out, "maximal.json", _dump(body))]}


def cmd_minimal(args, problem, out):
    mu = _pair_measure(problem, "minimal")
    q = np.asarray(_need(problem, "q", "minimal"), dtype=float)
    rng = compute_range(mu)
    _in_range_or_fail(rng, q, _tol(args))
    m, region = minimal_subset(mu, q, rng=rng)
    body = {"q": q.tolist(), "m_star": m.to_json(), "achieved": mu.measure_of(m).tolist(),
            "range": region.to_json()}
    return {"command": "minimal", "m_star": body["m_star"], "files": [_write(out, "minimal.json", _dump(body))]}


def cmd_purify(args, problem, out):
    mu = _pair_measure(problem, "purify")
    if "kernel" in problem:
        try:
            t = kernel_targets(TransitionKernel.from_json(problem["kernel"]), mu)
        except InvalidKernel as exc:
            raise ProblemError(f"invalid kernel: {exc}") from exc
    elif "targets" in problem:
        t = TargetAllocation(problem["targets"], problem.get("residual_policy", "reject"))
    else:
        raise ProblemError("purify needs 'targets' or 'kernel' in the problem file")
    rng = compute_range(mu)
    kw = {"seed": args.seed} if args.seed is not None else {}
    if args.tol is not None:
        kw["tol"] = args.tol
    report = check_conditions(t, rng, **kw)
    if not report.feasible:
        raise InfeasibleError("targets are not realizable", {"report": report.to_dict()})
    try:
        res = purify(t, mu, check=False)
    except Infeasible as exc:
        raise InfeasibleError(str(exc), {"report": report.to_dict()}) from exc
    res.report = report
    body = res.to_json()
    body["targets"] = t.resolved(mu.total).tolist()
    body["verification"] = verify_partition(res.parts, t, mu).to_dict()
    return {"command": "purify", "passed": body["verification"]["passed"],
            "files": [_write(out, "partition.json", _dump(body))]}


def cmd_counterexample(args, problem, out):
    try:
        report = certify_counterexample()
    except CertificationFailed as exc:
        raise InfeasibleError(str(exc), {"report": exc.report.to_dict()}) from exc
    f = _write(out, "certificate.json", report.to_json(indent=2) + "\n")
    return {"command": "counterexample", "passed": report.passed, "files": [f]}


def cmd_figure(args, problem, out):
    mu = catalog.FIGURES[args.which]()
    svg, qs = figures.figure(mu, catalog.FIGURE_P, title=f"({args.which})")
    f = _write(out, f"figure_{args.which}.svg", svg)
    return {"command": "figure", "which": args.which, "q_set": qs.to_json() if len(qs) <= 8 else len(qs),
            "files": [f]}


def cmd_oracle_compare(args, problem, out):
    mu = _pair_measure(problem, "oracle-compare") if problem else catalog.linear_ratio()
    p = np.asarray(problem.get("p", catalog.FIGURE_P) if problem else catalog.FIGURE_P, dtype=float)
    rng = compute_range(mu)
    rows = oracle.compare(mu, rng)
    n = args.cells or 12
    atoms = oracle.AtomGrid.from_measure(mu, n)
    qs = q_set(rng, p, tol=rng.tol + _tol(args))
    bq = oracle.brute_force_qset(atoms, p)
    dil = float(bq.eps.max()) + atoms.max_atom_norm
    qrow = {"cells": n, "p": p.tolist(), "admissible_sets": bq.n_sets,
            "hull_minus_qset": geo.support_gap(bq.hull, qs),
            "qset_minus_hull": geo.support_gap(qs, bq.hull), "dilation": dil}
    table = ["cells  hausdorff(zonogon, range)  bound"]
    table += [f"{r['cells']:5d}  {r['hausdorff']:.3e}  {r['bound']:.3e}" for r in rows]
    print("\n".join(table), file=sys.stderr)
    f = _write(out, "oracle.json", _dump({"zonogon": rows, "qset": qrow}))
    return {"command": "oracle-compare", "files": [f]}


COMMANDS = {
    "range": cmd_range, "qset": cmd_qset, "maximal": cmd_maximal, "minimal": cmd_minimal,
    "purify": cmd_purify, "counterexample": cmd_counterexample, "figure": cmd_figure,
    "oracle-compare": cmd_oracle_compare,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", help="JSON problem file")
    common.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    common.add_argument("--tol", type=float, help="membership tolerance")
    common.add_argument("--cells", type=int, help="oracle cell count")
    common.add_argument("--seed", type=int, help="seed for sampled subset checks")
    parser = argparse.ArgumentParser(prog="vecmeasure", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "figure":
            sp.add_argument("which", choices=sorted(catalog.FIGURES))
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = Path(args.out or os.environ.get(OUT_ENV) or ".")
    try:
        problem = load_problem(args.problem) if args.problem else None
        summary = COMMANDS[args.command](args, problem, out)
    except ProblemError as exc:
        print(_dump({"error": "problem", "message": str(exc)}), end="")
        return 2
    except (InfeasibleError, NotInRange) as exc:
        body = {"error": "infeasible", "message": str(exc), **getattr(exc, "payload", {})}
        text = _dump(body)
        _write(out, "error.json", text)
        print(text, end="")
        return 1
    print(_dump(summary), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
