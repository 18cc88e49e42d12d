"""Command-line interface.

Every subcommand prints exactly one JSON document with sorted keys.  Exit
status 0 means the computation succeeded (including an affirmative
verdict), 1 means a decided negative verdict or a detected property
violation, and 2 means a malformed input or an exceeded resource cap, in
which case the document is a machine-readable error object.  Reports are
deterministic: they carry work-unit counters, never wall-clock timings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import verifier
from .core import (
    Instance,
    SetFamily,
    canonicalize,
    enumerate_objects,
    family_from_obj,
    family_to_obj,
    instance_from_obj,
    is_kappa_directed,
    set_caps_enabled,
)
from .cover import CovProblem, cov_bounds, cov_exact
from .derived import derived_cofibrant, derived_plain, get_object_function, revised_power_derived
from .errors import FamcatError, InputError, ResourceLimitError
from .factorization import LEFT_RIGHT, cute_reflection, factor, is_cute
from .homotopy import Diagram, ho_iso, ho_reaches, is_degenerate_limit, is_indecomposable, posetal_limit
from .labels import LABELS, label_set
from .lifting import GENERATOR_KINDS, SIDES, lifting_report, make_arrow


class _Parser(argparse.ArgumentParser):
    """Parser that reports usage problems as input errors, so the CLI can
    emit its JSON error object instead of argparse's plain-text exit."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise InputError(message)


def _load_json(text: str, what: str) -> object:
    """Parse a flag value that is either a JSON file path or inline JSON."""
    source = text
    if os.path.isfile(text):
        try:
            with open(text, encoding="utf-8") as handle:
                source = handle.read()
        except OSError as exc:
            raise InputError(f"cannot read {what} file: {exc}") from exc
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON for {what}: {exc}") from exc


def _instance(args: argparse.Namespace) -> Instance:
    if not getattr(args, "instance", None):
        raise InputError("--instance is required for this subcommand")
    return instance_from_obj(_load_json(args.instance, "--instance"))


def _family(args: argparse.Namespace, flag: str, inst: Instance | None) -> SetFamily:
    text = getattr(args, flag.lstrip("-").replace("-", "_"), None)
    if text is None:
        raise InputError(f"{flag} is required for this subcommand")
    fam = family_from_obj(_load_json(text, flag), None if inst is None else inst.n)
    return fam


def _pool(inst: Instance, spec: str | None) -> list[SetFamily] | None:
    """Pool grammar: ``standard``, or comma-separated tokens starting with
    ``all`` or ``file:PATH`` followed by filters ``directed``,
    ``member<=K``, ``count<=K``."""
    if spec is None:
        return None
    if spec == "standard":
        return verifier.standard_pool(inst)
    tokens = spec.split(",")
    base, filters = tokens[0], tokens[1:]
    if base == "all":
        pool = enumerate_objects(inst.n)
    elif base.startswith("file:"):
        with open(base[5:], "r", encoding="utf-8") as handle:
            raw = json.load(handle)
        if not isinstance(raw, list):
            raise InputError("pool file must hold a JSON list of families")
        pool = [family_from_obj(item, inst.n) for item in raw]
    else:
        raise InputError(f"unknown pool base {base!r}")
    for token in filters:
        if token == "directed":
            pool = [f for f in pool if is_kappa_directed(f, inst.kappa)]
        elif token.startswith("member<="):
            cap = int(token[len("member<="):])
            pool = [f for f in pool if f.max_member_size() <= cap]
        elif token.startswith("count<="):
            cap = int(token[len("count<="):])
            pool = [f for f in pool if len(f) <= cap]
        else:
            raise InputError(f"unknown pool filter {token!r}")
    return pool


def _emit(obj: dict, args: argparse.Namespace) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _add_common(sub: argparse.ArgumentParser, *, instance: bool = True) -> None:
    if instance:
        sub.add_argument("--instance", help="instance as a JSON object")
    sub.add_argument("--out", help="write the JSON document to this file")
    sub.add_argument(
        "--threads",
        type=int,
        default=1,
        help="accepted for interface stability; execution is sequential",
    )
    sub.add_argument(
        "--no-caps",
        action="store_true",
        help="disable the universe and pool-size resource caps",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="famcat", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    label = subs.add_parser("label", help="label set of one ordered pair")
    _add_common(label)
    label.add_argument("--source", required=False)
    label.add_argument("--target", required=False)
    label.add_argument("--label", choices=LABELS, help="exit 1 unless this label holds")

    lift = subs.add_parser("lift", help="lifting against a generator class")
    _add_common(lift)
    lift.add_argument("--source", required=False)
    lift.add_argument("--target", required=False)
    lift.add_argument("--kind", choices=GENERATOR_KINDS, required=True)
    lift.add_argument("--side", choices=SIDES, required=True)
    lift.add_argument("--bound", type=int, default=None)

    fac = subs.add_parser("factor", help="split an arrow through a middle object")
    _add_common(fac)
    fac.add_argument("--source", required=False)
    fac.add_argument("--target", required=False)
    fac.add_argument("--kind", choices=sorted(LEFT_RIGHT), required=True)

    cute = subs.add_parser("cute", help="cuteness test and optional reflection")
    _add_common(cute)
    cute.add_argument("--object", required=False)
    cute.add_argument("--pool-spec", default="all")
    cute.add_argument("--reflect", action="store_true")

    ho = subs.add_parser("ho", help="zigzag reachability between two objects")
    _add_common(ho)
    ho.add_argument("--source", required=False)
    ho.add_argument("--target", required=False)
    ho.add_argument("--pool-spec", default=None)
    ho.add_argument("--depth", type=int, default=4)
    ho.add_argument("--iso", action="store_true", help="decide mutual reachability")

    indec = subs.add_parser("indec", help="indecomposability of one arrow")
    _add_common(indec)
    indec.add_argument("--source", required=False)
    indec.add_argument("--target", required=False)
    indec.add_argument("--pool-spec", default=None)

    limit = subs.add_parser("limit", help="posetal limit or colimit of a diagram")
    _add_common(limit)
    limit.add_argument("--diagram", required=True, help='{"vertices": [...], "edges": [[i,j],...]}')
    limit.add_argument("--kind", choices=("limit", "colimit"), required=True)
    limit.add_argument("--degenerate", action="store_true")

    derive = subs.add_parser("derive", help="derived minimum of an object function")
    _add_common(derive)
    derive.add_argument("--object", required=False)
    derive.add_argument("--function", default="card")
    derive.add_argument(
        "--flavor", choices=("plain", "cofibrant", "revised"), default="cofibrant"
    )
    derive.add_argument("--pool-spec", default=None)
    derive.add_argument("--depth", type=int, default=None)

    cov = subs.add_parser("cov", help="minimum covering-family size")
    _add_common(cov, instance=False)
    cov.add_argument("--n", type=int, required=True)
    cov.add_argument("--delta", type=int, required=True)
    cov.add_argument("--theta", type=int, required=True)
    cov.add_argument("--sigma", type=int, required=True)
    cov.add_argument("--bounds-only", action="store_true")
    cov.add_argument("--node-cap", type=int, default=None)
    cov.add_argument("--no-symmetry", action="store_true")
    cov.add_argument("--no-bound-closing", action="store_true")

    verify = subs.add_parser("verify", help="batch verification suites")
    _add_common(verify)
    verify.add_argument(
        "--suite",
        choices=("axioms", "measurable", "equivariance", "m5-search", "claim2", "faults"),
        default="axioms",
    )
    verify.add_argument("--axioms", default=",".join(verifier.ALL_AXIOMS))
    verify.add_argument("--pool-spec", default=None)
    verify.add_argument("--object", help="target family for the claim2 suite")
    verify.add_argument("--bound", type=int, default=None)
    verify.add_argument("--budget", type=int, default=100_000)
    verify.add_argument("--trials", type=int, default=1000)
    verify.add_argument("--seed", type=int, default=42)

    enum = subs.add_parser("enumerate", help="enumerate pool families")
    _add_common(enum)
    enum.add_argument("--max-member-size", type=int, default=None)
    enum.add_argument("--max-family-size", type=int, default=None)
    enum.add_argument("--directed", action="store_true")
    enum.add_argument("--list", action="store_true", help="include the families themselves")

    return parser


def _run_label(args: argparse.Namespace) -> int:
    inst = _instance(args)
    x = _family(args, "--source", inst)
    y = _family(args, "--target", inst)
    report = label_set(inst, x, y)
    _emit(report.to_obj(), args)
    wanted = "plain" if args.label is None else args.label
    return 0 if report.labels.get(wanted, False) else 1


def _run_lift(args: argparse.Namespace) -> int:
    inst = _instance(args)
    f = make_arrow(inst, _family(args, "--source", inst), _family(args, "--target", inst))
    holds, failures, checked = lifting_report(
        inst, f, args.kind, args.side, args.bound
    )
    _emit(
        {
            "lifts": holds,
            "checked": checked,
            "failures": [
                {"source": g.source.to_sets(), "target": g.target.to_sets()}
                for g in failures
            ],
        },
        args,
    )
    return 0 if holds else 1


def _run_factor(args: argparse.Namespace) -> int:
    inst = _instance(args)
    x = _family(args, "--source", inst)
    y = _family(args, "--target", inst)
    result = factor(inst, args.kind, x, y)
    _emit(result.to_obj(), args)
    return 0


def _run_cute(args: argparse.Namespace) -> int:
    inst = _instance(args)
    x = _family(args, "--object", inst)
    pool = _pool(inst, args.pool_spec)
    if pool is None:
        pool = enumerate_objects(inst.n)
    verdict = is_cute(inst, x, pool)
    obj: dict = {"cute": verdict, "pool_size": len(pool)}
    if args.reflect:
        obj["reflection"] = family_to_obj(cute_reflection(inst, x, pool))
    _emit(obj, args)
    return 0 if verdict else 1


def _run_ho(args: argparse.Namespace) -> int:
    inst = _instance(args)
    x = _family(args, "--source", inst)
    y = _family(args, "--target", inst)
    pool = _pool(inst, args.pool_spec)
    if args.iso:
        status = ho_iso(inst, x, y, pool, depth=args.depth)
        _emit({"iso": status}, args)
        return 1 if status == "no" else 0
    result = ho_reaches(inst, x, y, pool, depth=args.depth)
    _emit(result.to_obj(), args)
    return 1 if result.status == "no" else 0


def _run_indec(args: argparse.Namespace) -> int:
    inst = _instance(args)
    x = _family(args, "--source", inst)
    y = _family(args, "--target", inst)
    pool = _pool(inst, args.pool_spec)
    result = is_indecomposable(inst, x, y, pool)
    _emit(result.to_obj(), args)
    return 0 if result.indecomposable else 1


def _run_limit(args: argparse.Namespace) -> int:
    inst = _instance(args)
    raw = _load_json(args.diagram, "--diagram")
    if not isinstance(raw, dict) or "vertices" not in raw or "edges" not in raw:
        raise InputError("--diagram needs 'vertices' and 'edges' keys")
    vertices = tuple(family_from_obj(v, inst.n) for v in raw["vertices"])
    edges = tuple((int(i), int(j)) for i, j in raw["edges"])
    diagram = Diagram(vertices, edges)
    bound = posetal_limit(inst, diagram, args.kind)
    obj = {
        "kind": args.kind,
        "bound": None if bound is None else family_to_obj(bound),
    }
    if args.degenerate and bound is not None:
        obj["degenerate"] = is_degenerate_limit(inst, diagram, args.kind)
    _emit(obj, args)
    return 0 if bound is not None else 1


def _run_derive(args: argparse.Namespace) -> int:
    inst = _instance(args)
    x = _family(args, "--object", inst)
    pool = _pool(inst, args.pool_spec)
    if args.flavor == "revised":
        result = revised_power_derived(inst, x, pool, depth=args.depth)
    else:
        fn = get_object_function(args.function)
        runner = derived_plain if args.flavor == "plain" else derived_cofibrant
        result = runner(inst, fn, x, pool, depth=args.depth)
    _emit(result.to_obj(), args)
    return 0


def _run_cov(args: argparse.Namespace) -> int:
    problem = CovProblem(args.n, args.delta, args.theta, args.sigma)
    if args.bounds_only:
        lower, upper = cov_bounds(problem)
        _emit({"problem": problem.to_obj(), "lower": lower, "upper": upper}, args)
        return 0
    solution = cov_exact(
        problem,
        symmetry=not args.no_symmetry,
        bound_closing=not args.no_bound_closing,
        node_cap=args.node_cap,
    )
    _emit({"problem": problem.to_obj(), **solution.to_obj()}, args)
    return 1 if solution.value is None else 0


def _run_verify(args: argparse.Namespace) -> int:
    if args.suite == "axioms":
        axioms = tuple(a for a in args.axioms.split(",") if a)
        if args.instance:
            inst = _instance(args)
            pool = _pool(inst, args.pool_spec)
            pools = None if pool is None else {inst: pool}
            report = verifier.run_axiom_suite([inst], pools, axioms)
        else:
            report = verifier.run_axiom_suite(axioms=axioms)
        _emit(report.to_obj(), args)
        return 0 if report.passed else 1
    if args.suite == "measurable":
        inst = _instance(args)
        report = verifier.check_measurable_equivalences(inst, _pool(inst, args.pool_spec))
        _emit(report.to_obj(), args)
        return 0 if report.passed else 1
    if args.suite == "equivariance":
        instances = [_instance(args)] if args.instance else None
        report = verifier.equivariance_suite(instances, trials=args.trials, seed=args.seed)
        _emit(report.to_obj(), args)
        return 0 if report.passed else 1
    if args.suite == "m5-search":
        inst = _instance(args)
        result = verifier.find_m5_counterexample_st(inst, budget=args.budget)
        _emit(result.to_obj(), args)
        return 1 if result.finding is not None else 0
    if args.suite == "claim2":
        inst = _instance(args)
        y = _family(args, "--object", inst)
        result = verifier.check_claim2_closure(inst, y, args.bound)
        _emit(result.to_obj(), args)
        return 0 if result.analog_holds else 1
    results = verifier.detect_faults()
    _emit({"faults": results}, args)
    return 0 if all(entry["detected"] for entry in results.values()) else 1


def _run_enumerate(args: argparse.Namespace) -> int:
    inst = _instance(args)
    pool = enumerate_objects(
        inst.n,
        max_member_size=args.max_member_size,
        max_family_size=args.max_family_size,
    )
    if args.directed:
        pool = [f for f in pool if is_kappa_directed(f, inst.kappa)]
    obj: dict = {"count": len(pool)}
    if args.list:
        obj["families"] = [family_to_obj(f) for f in pool]
    _emit(obj, args)
    return 0


_RUNNERS = {
    "label": _run_label,
    "lift": _run_lift,
    "factor": _run_factor,
    "cute": _run_cute,
    "ho": _run_ho,
    "indec": _run_indec,
    "limit": _run_limit,
    "derive": _run_derive,
    "cov": _run_cov,
    "verify": _run_verify,
    "enumerate": _run_enumerate,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise InputError("--threads must be at least 1")
        if getattr(args, "no_caps", False):
            set_caps_enabled(False)
        try:
            return _RUNNERS[args.command](args)
        finally:
            set_caps_enabled(True)
    except ResourceLimitError as exc:
        _print_error("resource", str(exc))
        return 2
    except (InputError, OSError, ValueError) as exc:
        _print_error("input", str(exc))
        return 2


def _print_error(kind: str, message: str) -> None:
    sys.stdout.write(
        json.dumps({"error": {"type": kind, "message": message}}, sort_keys=True) + "\n"
    )


if __name__ == "__main__":
    sys.exit(main())
