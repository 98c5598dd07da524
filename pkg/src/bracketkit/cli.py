"""Command-line front end.

Subcommands: gen, enum-ranges, packing, mnet, container, bracket, verify,
protocol-learn, protocol-disjoint, bench.  Exit status: 0 = all verified,
1 = verification failure, 2 = usage error.  Rationals are passed as "p/q"
strings; BRACKETKIT_THREADS caps the bench work pool.
"""

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .constructions import (
    base_mnet,
    boost_epsilon,
    build_bracket,
    build_container,
    default_provider,
    heavy_mnet,
)
from .errors import (
    BracketkitError,
    DegeneracyError,
    InputError,
    NonRealizableError,
    ResourceBudgetError,
)
from .families import family_from_json, family_to_json
from .geometry import (
    PointSet,
    enumerate_ball_ranges,
    enumerate_box_ranges,
    enumerate_halfspace_ranges,
    enumerate_polytope_ranges,
    jitter_points,
    lower_bound_instance,
    random_point_set,
)
from .packing import greedy_delta_packing, packing_bound_report
from .protocols import (
    DisjointnessInstance,
    LearningInstance,
    convex_disjointness_protocol,
    exact_hull_intersection,
    learn_halfspace_protocol,
)
from .rationals import floor_frac, format_fraction, parse_fraction
from .setsystem import SetSystem
from .verify import container_lower_bound, verify_bracket, verify_container, verify_mnet

CSV_COLUMNS = [
    "instance_id", "kind", "d", "n", "eps", "lambda", "eta",
    "family_size", "verified", "lower_bound", "runtime_ms",
]


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_points(path):
    return PointSet.from_json(_read(path))


def _load_system(path):
    return SetSystem.from_json(_read(path))


def _generate_points(kind, d, n, seed, jitter=None):
    if kind == "random":
        pts = random_point_set(d, n, seed)
    else:
        pts = lower_bound_instance(d, n, kind)
    if jitter is not None:
        pts = jitter_points(pts, jitter, seed)
    return pts


def _enumerate(points, family, k=2):
    if family == "halfspace":
        return enumerate_halfspace_ranges(points)
    if family == "ball":
        return enumerate_ball_ranges(points)
    if family == "box":
        return enumerate_box_ranges(points)
    if family == "polytope":
        return enumerate_polytope_ranges(points, k)
    raise InputError(f"unknown range family {family!r}")


def cmd_gen(args):
    jitter = parse_fraction(args.jitter, name="jitter") if args.jitter else None
    pts = _generate_points(args.kind, args.d, args.n, args.seed, jitter)
    _write(args.out, pts.to_json())
    print(f"wrote {args.kind} instance d={args.d} n={args.n} to {args.out}")
    return 0


def cmd_enum_ranges(args):
    pts = _load_points(args.points)
    system = _enumerate(pts, args.family, args.k)
    _write(args.out, system.to_json())
    print(f"{len(system.ranges)} distinct {args.family} ranges over n={system.n}")
    return 0


def cmd_packing(args):
    system = _load_system(args.system)
    delta = args.delta
    if "/" in delta:
        delta_int = floor_frac(parse_fraction(delta, name="delta") * system.n)
    else:
        delta_int = int(delta)
    packing = greedy_delta_packing(system, delta_int, shallow_cap=args.cap)
    payload = {
        "delta": packing.delta,
        "cap": packing.shallow_cap,
        "members": [sorted(_bits(m)) for m in packing.members],
    }
    _write(args.out, json.dumps(payload))
    print(f"packing size {len(packing.members)} at delta={delta_int} cap={args.cap}")
    if args.d0:
        report = packing_bound_report(packing, args.d0)
        print(
            f"haussler volume (n/delta)^d0 = {float(report.haussler_volume):.6g}; "
            f"empirical constant {report.empirical_constant:.6g}"
        )
        if report.shallow_expression is not None:
            print(f"shallow expression {report.shallow_expression:.6g} (psi_hat={report.shallow_psi_hat})")
    return 0


def _bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _verify_and_report(system, family):
    from .families import BracketFamily, ContainerFamily, MnetFamily

    if isinstance(family, MnetFamily):
        report = verify_mnet(system, family)
    elif isinstance(family, ContainerFamily):
        report = verify_container(system, family)
    elif isinstance(family, BracketFamily):
        report = verify_bracket(system, family)
    else:
        raise InputError("unknown family type")
    return report


def cmd_mnet(args):
    system = _load_system(args.system)
    lam = parse_fraction(args.lam, name="lambda")
    provider = default_provider()
    if args.algorithm == "heavy":
        family = heavy_mnet(system, lam, parse_fraction(args.eta, name="eta"), provider)
    elif args.algorithm == "boost":
        family = boost_epsilon(
            system, provider, parse_fraction(args.eps, name="eps"),
            parse_fraction(args.eta, name="eta"),
        )
    else:
        family = base_mnet(system, lam, parse_fraction(args.eps, name="eps"))
    _write(args.out, family_to_json(family))
    print(f"mnet with {len(family.pieces)} pieces (lambda={family.lam}, eps={family.eps})")
    return 0


def cmd_container(args):
    system = _load_system(args.system)
    family = build_container(system, parse_fraction(args.eps, name="eps"), default_provider())
    _write(args.out, family_to_json(family))
    print(f"container with {len(family.covers)} covers at eps={family.eps}")
    if args.lower_bound:
        print(f"packing lower bound: {container_lower_bound(system, family.eps)}")
    return 0


def cmd_bracket(args):
    system = _load_system(args.system)
    family = build_bracket(
        system, parse_fraction(args.eps, name="eps"), default_provider(), default_provider()
    )
    _write(args.out, family_to_json(family))
    print(f"bracket with {len(family.sets)} sets at eps={family.eps}")
    return 0


def cmd_verify(args):
    system = _load_system(args.system)
    family = family_from_json(_read(args.family), system)
    report = _verify_and_report(system, family)
    if report.passed:
        print(f"verified: {report.checked} ranges checked")
        return 0
    mask, reason = report.counterexample
    print(f"FAILED on range {sorted(_bits(mask))}: {reason}")
    return 1


def cmd_protocol_learn(args):
    domain = _load_points(args.points)
    data = json.loads(_read(args.instance))
    inst = LearningInstance(
        domain,
        tuple((int(i), int(l)) for i, l in data["alice"]),
        tuple((int(i), int(l)) for i, l in data["bob"]),
    )
    eps0 = parse_fraction(args.eps0, name="eps0")
    try:
        classifier, transcript = learn_halfspace_protocol(inst, eps0)
    except NonRealizableError as err:
        print(f"abort: non-realizable instance; certificate {list(err.certificate)}")
        return 1
    correct = all(classifier(i) == l for i, l in inst.alice + inst.bob)
    if args.transcript:
        _write(args.transcript, transcript.to_jsonl())
    if args.summary:
        _append_summary(args.summary, args.instance, transcript, correct)
    print(
        f"rounds={transcript.rounds} bits={transcript.total_bits} consistent={correct}"
    )
    return 0 if correct else 1


def cmd_protocol_disjoint(args):
    domain = _load_points(args.points)
    data = json.loads(_read(args.instance))
    inst = DisjointnessInstance(
        domain, tuple(int(i) for i in data["alice"]), tuple(int(j) for j in data["bob"])
    )
    eps0 = parse_fraction(args.eps0, name="eps0")
    answer, transcript = convex_disjointness_protocol(inst, eps0)
    oracle = exact_hull_intersection(domain, inst.alice, inst.bob)
    correct = (answer == "intersecting") == oracle.intersecting
    if args.transcript:
        _write(args.transcript, transcript.to_jsonl())
    if args.summary:
        _append_summary(args.summary, args.instance, transcript, correct)
    print(f"answer={answer} bits={transcript.total_bits} oracle_agrees={correct}")
    return 0 if correct else 1


def _append_summary(path, instance_id, transcript, correct):
    exists = os.path.exists(path)
    with open(path, "a", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        if not exists:
            writer.writerow(["instance_id", "rounds", "total_bits", "correct"])
        writer.writerow([instance_id, transcript.rounds, transcript.total_bits, correct])


@dataclass
class ExperimentSpec:
    instance_kind: str
    family: str
    d: int
    n_list: list
    seed: int
    construction: str
    eps_list: list
    lambda_list: list
    eta_list: list
    jitter: object
    out: str

    @staticmethod
    def from_json(text):
        data = json.loads(text)
        return ExperimentSpec(
            instance_kind=data.get("instance_kind", "random"),
            family=data.get("family", "halfspace"),
            d=int(data.get("d", 2)),
            n_list=[int(v) for v in data.get("n", [])],
            seed=int(data.get("seed", 0)),
            construction=data.get("construction", "container"),
            eps_list=[parse_fraction(v, name="eps") for v in data.get("eps", [])],
            lambda_list=[parse_fraction(v, name="lambda") for v in data.get("lambda", [])],
            eta_list=[parse_fraction(v, name="eta") for v in data.get("eta", [])],
            jitter=parse_fraction(data["jitter"], name="jitter") if data.get("jitter") else None,
            out=data.get("out", "results.csv"),
        )


def _grid_points(spec):
    eps_list = spec.eps_list or [None]
    lam_list = spec.lambda_list or [None]
    eta_list = spec.eta_list or [None]
    grid = []
    for n in spec.n_list:
        for eps in eps_list:
            for lam in lam_list:
                for eta in eta_list:
                    grid.append((n, eps, lam, eta))
    return grid


def _run_grid_point(spec, point):
    n, eps, lam, eta = point
    start = time.perf_counter()
    pts = _generate_points(spec.instance_kind, spec.d, n, spec.seed, spec.jitter)
    system = _enumerate(pts, spec.family)
    lower = ""
    if spec.construction == "container":
        family = build_container(system, eps, default_provider())
        report = verify_container(system, family)
        size = len(family.covers)
        lower = container_lower_bound(system, eps)
    elif spec.construction == "bracket":
        family = build_bracket(system, eps, default_provider(), default_provider())
        report = verify_bracket(system, family)
        size = len(family.sets)
    elif spec.construction == "mnet":
        family = heavy_mnet(system, lam, eta, default_provider())
        report = verify_mnet(system, family)
        size = len(family.pieces)
    else:
        raise InputError(f"unknown construction {spec.construction!r}")
    elapsed_ms = int(1000 * (time.perf_counter() - start))
    row = {
        "instance_id": f"{spec.instance_kind}-{spec.family}-d{spec.d}-n{n}-s{spec.seed}",
        "kind": f"{spec.instance_kind}/{spec.family}",
        "d": spec.d,
        "n": n,
        "eps": format_fraction(eps) if eps is not None else "",
        "lambda": format_fraction(lam) if lam is not None else "",
        "eta": format_fraction(eta) if eta is not None else "",
        "family_size": size,
        "verified": bool(report.passed),
        "lower_bound": lower,
        "runtime_ms": elapsed_ms,
    }
    return row, report


def cmd_bench(args):
    spec = ExperimentSpec.from_json(_read(args.spec))
    grid = _grid_points(spec)
    threads = int(os.environ.get("BRACKETKIT_THREADS", "0")) or min(4, os.cpu_count() or 1)
    rows = [None] * len(grid)
    failure = None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(_run_grid_point, spec, point): i for i, point in enumerate(grid)}
        for future, i in futures.items():
            row, report = future.result()
            rows[i] = row
            if not report.passed and failure is None:
                failure = report
    with open(spec.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    print(f"wrote {len(rows)} rows to {spec.out}")
    if failure is not None:
        mask, reason = failure.counterexample
        print(f"verification FAILED: range {sorted(_bits(mask))}: {reason}")
        return 1
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="bracketkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a point-set instance")
    p.add_argument("--kind", required=True, choices=["grid", "sphere", "moment-curve", "random"])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jitter", default=None, help="rational scale like 1/1024 for degeneracy breaking")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("enum-ranges", help="enumerate geometric ranges")
    p.add_argument("--points", required=True)
    p.add_argument("--family", required=True, choices=["halfspace", "ball", "box", "polytope"])
    p.add_argument("--k", type=int, default=2, help="constraint count for polytope ranges")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_enum_ranges)

    p = sub.add_parser("packing", help="greedy maximal delta-packing")
    p.add_argument("--system", required=True)
    p.add_argument("--delta", required=True, help="absolute count, or p/q of n")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--d0", type=int, default=0, help="VC dimension for the bound report")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_packing)

    p = sub.add_parser("mnet", help="build a verified Mnet")
    p.add_argument("--system", required=True)
    p.add_argument("--algorithm", default="heavy", choices=["heavy", "boost", "base"])
    p.add_argument("--lambda", dest="lam", default="1/2")
    p.add_argument("--eta", default="1/4")
    p.add_argument("--eps", default="1/4")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mnet)

    p = sub.add_parser("container", help="build a verified container family")
    p.add_argument("--system", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--lower-bound", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_container)

    p = sub.add_parser("bracket", help="build a verified uniform bracket")
    p.add_argument("--system", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("verify", help="verify a family JSON against a system JSON")
    p.add_argument("--system", required=True)
    p.add_argument("--family", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("protocol-learn", help="simulate distributed halfspace learning")
    p.add_argument("--points", required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--eps0", default="1/8")
    p.add_argument("--transcript", default=None)
    p.add_argument("--summary", default=None)
    p.set_defaults(func=cmd_protocol_learn)

    p = sub.add_parser("protocol-disjoint", help="simulate convex set disjointness")
    p.add_argument("--points", required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--eps0", default="1/8")
    p.add_argument("--transcript", default=None)
    p.add_argument("--summary", default=None)
    p.set_defaults(func=cmd_protocol_disjoint)

    p = sub.add_parser("bench", help="run an experiment grid to CSV")
    p.add_argument("--spec", required=True)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DegeneracyError, ResourceBudgetError, FileNotFoundError, json.JSONDecodeError) as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2
    except BracketkitError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
