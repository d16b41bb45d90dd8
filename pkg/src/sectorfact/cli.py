"""Batch command-line front end.

Loads fixtures from JSON, runs validation campaigns, and writes
machine-readable reports (optionally rendered as text).  Runs are
deterministic for fixed inputs and seed: reports carry no timestamps and
all numbers are exact rationals serialized as strings.

Exit codes: 0 all checks passed, 1 violations found, 2 schema errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .configspace import certify_homotopy, sample_causal_config
from .fixtures import (
    abelian_reflection_data,
    collapse_sector,
    cyclic_arc_category,
    diagonal_net,
    interval_category,
    interval_reflection_action,
    net_from_json,
    net_to_json,
    pauli_sector,
    qubit_net,
    qubit_reflection_data,
    standard_sector_family,
)
from .minkowski import (
    DoubleCone,
    MPoint,
    build_witness,
    causally_disjoint,
    cone_from_json,
    cone_included,
    cone_to_json,
    project_cone,
    ExhaustedRetries,
)
from .operad import validate_algebra, validate_equivariant_algebra, validate_operad
from .orthcat import (
    action_from_json,
    category_from_json,
    category_to_json,
    check_assumption_extension,
    check_assumption_orthocomplement,
    check_filtered,
    validate_category,
    validate_group_action,
)
from .reports import SchemaError, attach_citation, dump_json, render_text
from .sectors import (
    SectorGroupData,
    check_haag_duality,
    check_localized,
    check_perp_commutativity,
    check_transportable,
    diamond,
    diamond_covariance,
    find_covariance,
    g_act_sector,
    identity_sector,
    sector_algebra_assignment,
    sector_equivariant_assignment,
    validate_theorem_3_11,
)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_SCHEMA = 2


@dataclass
class CampaignSpec:
    """Resolved parameters of a batch campaign: validated before any work,
    so malformed requests exit with the schema code."""

    command: str
    inputs: list[str]
    seed: int = 0
    bound: int = 3
    retry_budget: int = 8
    counts: dict[str, int] = field(default_factory=dict)

    def validate(self) -> None:
        for name, value in {"bound": self.bound, "retry_budget": self.retry_budget,
                            **self.counts}.items():
            if value < 0:
                raise SchemaError(f"count {name} must be nonnegative, got {value}")
        for path in self.inputs:
            try:
                with open(path, "r", encoding="utf-8"):
                    pass
            except OSError as exc:
                raise SchemaError(f"input file not readable: {path}") from exc


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SECTORFACT_THREADS", "1")))
    except ValueError:
        return 1


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise SchemaError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc}") from exc


def _emit(doc: dict, args) -> None:
    doc = dict(doc)
    doc["tool_version"] = __version__
    if getattr(args, "paper_ref", False):
        doc = attach_citation(doc)
    payload = dump_json(doc)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    if getattr(args, "render", False) or not getattr(args, "out", None):
        sys.stdout.write(render_text(doc) if getattr(args, "render", False) else payload)


def _region_id(text: str) -> str:
    text = text.strip()
    if text.startswith("["):
        return text
    if "-" in text:
        a, b = text.split("-", 1)
        return f"[{int(a)},{int(b)}]"
    return f"[{int(text)},{int(text)}]"


def _exit_from_ok(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_VIOLATIONS


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def cmd_validate_category(args) -> int:
    cat = category_from_json(_load_json(args.infile))
    report = validate_category(cat).to_dict()
    extra = {}
    if args.filtered:
        extra["filtered"] = check_filtered(cat).to_dict()
    if args.orthocomplement:
        extra["orthocomplement"] = check_assumption_orthocomplement(cat).to_dict()
    if args.extension:
        extra["extension"] = check_assumption_extension(cat).to_dict()
    if extra:
        report["assumptions"] = extra
    _emit(report, args)
    ok = report["ok"] and all(
        v.get("holds", v.get("filtered", True)) for v in extra.values()
    )
    if report["schema_errors"]:
        return EXIT_SCHEMA
    return _exit_from_ok(ok)


def cmd_validate_action(args) -> int:
    spec = action_from_json(_load_json(args.infile))
    report = validate_group_action(spec).to_dict()
    _emit(report, args)
    if report["schema_errors"]:
        return EXIT_SCHEMA
    return _exit_from_ok(report["ok"])


def cmd_operad_check(args) -> int:
    cat = category_from_json(_load_json(args.infile))
    report = validate_operad(cat, bound=args.bound).to_dict()
    if args.dump:
        from .operad import enumerate_all_operations

        grouped: dict = {}
        for op in enumerate_all_operations(cat, args.bound):
            key = f"({','.join(op.sources)})->{op.target}"
            grouped.setdefault(key, []).append(list(op.arrows))
        with open(args.dump, "w", encoding="utf-8") as fh:
            fh.write(dump_json({"bound": args.bound, "operations": grouped}))
    _emit(report, args)
    if report["schema_errors"]:
        return EXIT_SCHEMA
    return _exit_from_ok(report["ok"])


def cmd_operad_algebra(args) -> int:
    net = net_from_json(_load_json(args.net))
    family = standard_sector_family(net)
    if args.equivariant:
        data = qubit_reflection_data(net)
        assign = sector_equivariant_assignment(net, data, family)
        report = validate_equivariant_algebra(
            net.category, assign, data.action, bound=args.bound
        ).to_dict()
    else:
        assign = sector_algebra_assignment(net, family)
        report = validate_algebra(net.category, assign, bound=args.bound).to_dict()
    _emit(report, args)
    if report["schema_errors"]:
        return EXIT_SCHEMA
    return _exit_from_ok(report["ok"])


def cmd_geometry_disjoint(args) -> int:
    a = cone_from_json(_load_json(args.cone_a))
    b = cone_from_json(_load_json(args.cone_b))
    verdict = causally_disjoint(a, b)
    _emit(
        {
            "check": "geometry-disjoint",
            "a": cone_to_json(a),
            "b": cone_to_json(b),
            "holds": verdict,
        },
        args,
    )
    return _exit_from_ok(verdict)


def cmd_geometry_include(args) -> int:
    inner = cone_from_json(_load_json(args.inner))
    outer = cone_from_json(_load_json(args.outer))
    verdict = cone_included(inner, outer)
    _emit(
        {
            "check": "geometry-include",
            "inner": cone_to_json(inner),
            "outer": cone_to_json(outer),
            "holds": verdict,
        },
        args,
    )
    return _exit_from_ok(verdict)


def cmd_geometry_project(args) -> int:
    cone = cone_from_json(_load_json(args.infile))
    shadow = project_cone(cone)
    _emit(
        {
            "check": "geometry-project",
            "cone": cone_to_json(cone),
            "shadow": shadow.to_json(),
            "holds": True,
        },
        args,
    )
    return EXIT_OK


def cmd_geometry_witness(args) -> int:
    spec = CampaignSpec(
        command="geometry-witness",
        inputs=[args.u1, args.u2, args.utilde],
        retry_budget=args.budget,
    )
    spec.validate()
    u1 = cone_from_json(_load_json(args.u1))
    u2 = cone_from_json(_load_json(args.u2))
    ut = cone_from_json(_load_json(args.utilde))
    try:
        diagram = build_witness(u1, u2, ut, retry_budget=args.budget)
    except ExhaustedRetries as exc:
        _emit(
            {"check": "witness-diagram", "holds": False, "reason": str(exc)}, args
        )
        return EXIT_VIOLATIONS
    doc = diagram.to_json(u1, u2, ut)
    doc["check"] = "witness-diagram"
    doc["holds"] = diagram.verified(u1, u2, ut)
    _emit(doc, args)
    return _exit_from_ok(doc["holds"])


def cmd_homotopy_verify(args) -> int:
    spec = CampaignSpec(
        command="homotopy-verify",
        inputs=[args.cone],
        seed=args.seed,
        counts={"m": args.m, "cases": args.cases},
    )
    spec.validate()
    cone = cone_from_json(_load_json(args.cone))
    seeds = [args.seed + i for i in range(args.cases)]

    def run_case(seed: int) -> dict:
        config = sample_causal_config(cone, args.m, seed=seed)
        report = certify_homotopy(config)
        case = {"seed": seed, "certified": report.certified}
        if args.detail:
            case["pairs"] = report.pairs
        return case

    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cases = list(pool.map(run_case, seeds))
    else:
        cases = [run_case(s) for s in seeds]
    certified = sum(1 for c in cases if c["certified"])
    doc = {
        "check": "homotopy-certification",
        "cone": cone_to_json(cone),
        "m": args.m,
        "cases": args.cases,
        "seed": args.seed,
        "certified": certified,
        "holds": certified == args.cases,
        "per_seed": cases,
    }
    _emit(doc, args)
    return _exit_from_ok(doc["holds"])


def cmd_sectors_haag(args) -> int:
    net = net_from_json(_load_json(args.net))
    if args.region:
        regions = [_region_id(args.region)]
    else:
        regions = [u for u in net.category.objects if net.orth_partners(u)]
    results = [check_haag_duality(net, u) for u in regions]
    doc = {
        "check": "haag-duality",
        "subject": net.name,
        "regions": results,
        "holds": all(r["holds"] for r in results),
    }
    _emit(doc, args)
    return _exit_from_ok(doc["holds"])


def cmd_sectors_perp(args) -> int:
    net = net_from_json(_load_json(args.net))
    report = check_perp_commutativity(net).to_dict()
    _emit(report, args)
    return _exit_from_ok(report["ok"])


def cmd_sectors_diamond(args) -> int:
    net = net_from_json(_load_json(args.net))
    family = standard_sector_family(net)
    violations = []
    checked = 0
    for u, sectors in sorted(family.items()):
        pool = [identity_sector(net, u)] + sectors
        for rho in pool:
            left = diamond(rho, identity_sector(net, u))
            right = diamond(identity_sector(net, u), rho)
            checked += 1
            if not (left.same_map(rho) and right.same_map(rho)):
                violations.append({"axiom": "monoid-unit", "sector": rho.label})
        for r1 in pool:
            for r2 in pool:
                for r3 in pool:
                    checked += 1
                    lhs = diamond(diamond(r1, r2), r3)
                    rhs = diamond(r1, diamond(r2, r3))
                    if not lhs.same_map(rhs):
                        violations.append(
                            {
                                "axiom": "monoid-associativity",
                                "sectors": [r1.label, r2.label, r3.label],
                            }
                        )
    from .sectors import INNER_MODEL_NOTE

    doc = {
        "check": "diamond-laws",
        "subject": net.name,
        "instances": checked,
        "violations": violations,
        "ok": not violations,
        "notes": {"model": INNER_MODEL_NOTE},
    }
    _emit(doc, args)
    return _exit_from_ok(doc["ok"])


def cmd_sectors_transport(args) -> int:
    net = net_from_json(_load_json(args.net))
    letters, _, region = args.sector.partition("@")
    rho = pauli_sector(net, letters, _region_id(region))
    report = check_transportable(rho, _region_id(args.target), net)
    doc = report.to_dict()
    doc["subject"] = net.name
    _emit(doc, args)
    return _exit_from_ok(report.found)


def cmd_sectors_equivariance(args) -> int:
    net = net_from_json(_load_json(args.net))
    if any(u in net.overrides for u in net.category.objects):
        data = abelian_reflection_data(net)
        family = {}
    else:
        data = qubit_reflection_data(net)
        family = standard_sector_family(net)
    impl = data.validate()
    doc = {
        "check": "group-implementation",
        "subject": net.name,
        "implementation": impl.to_dict(),
        "sectors": [],
    }
    ok = impl.ok
    group = data.action.group
    for u, sectors in sorted(family.items()):
        for rho in sectors:
            entry = {"sector": rho.label}
            moved = {g: g_act_sector(g, rho, data) for g in group.elements}
            entry["action_regions"] = {g: m.region for g, m in moved.items()}
            unit_ok = moved[group.unit()].same_map(rho)
            comp_ok = all(
                g_act_sector(g2, moved[g1], data).same_map(
                    g_act_sector(group.mult(g2, g1), rho, data)
                )
                for g1 in group.elements
                for g2 in group.elements
            )
            fam = find_covariance(rho, data)
            entry["action_laws"] = unit_ok and comp_ok
            entry["covariant"] = fam is not None
            ok = ok and entry["action_laws"] and entry["covariant"]
            doc["sectors"].append(entry)
    if not family and net.overrides:
        rho = collapse_sector(net)
        fam = find_covariance(rho, data)
        doc["sectors"].append(
            {"sector": rho.label, "covariant": fam is not None}
        )
    from .sectors import INNER_MODEL_NOTE

    doc["notes"] = {"model": INNER_MODEL_NOTE}
    doc["ok"] = ok
    _emit(doc, args)
    return _exit_from_ok(ok)


def cmd_sectors_theorem311(args) -> int:
    net = net_from_json(_load_json(args.net))
    family = standard_sector_family(net)
    report = validate_theorem_3_11(net, family, bound=args.bound).to_dict()
    _emit(report, args)
    return _exit_from_ok(report["ok"])


def cmd_report_render(args) -> int:
    doc = _load_json(args.infile)
    sys.stdout.write(render_text(doc))
    return EXIT_OK


def cmd_fixtures(args) -> int:
    from .orthcat import category_to_json

    bundled = {
        "intcat6": lambda: category_to_json(interval_category(6)),
        "intcat6-proper": lambda: category_to_json(interval_category(6, max_len=5)),
        "intcat4": lambda: category_to_json(interval_category(4)),
        "cyccat6": lambda: category_to_json(cyclic_arc_category(6)),
        "z2-intcat6": lambda: _action_json(interval_reflection_action(6)),
        "qubit2": lambda: net_to_json(qubit_net(2)),
        "qubit4": lambda: net_to_json(qubit_net(4)),
        "bits4": lambda: net_to_json(diagonal_net(4)),
        "unit-cone-m2": lambda: cone_to_json(
            DoubleCone(MPoint.of(-1, 0), MPoint.of(1, 0))
        ),
        "wide-cone-m2": lambda: cone_to_json(
            DoubleCone(MPoint.of(-5, 0), MPoint.of(5, 0))
        ),
        "cone-u1": lambda: cone_to_json(DoubleCone(MPoint.of(-1, 0), MPoint.of(1, 0))),
        "cone-u2": lambda: cone_to_json(DoubleCone(MPoint.of(-1, 4), MPoint.of(1, 4))),
        "cone-utilde": lambda: cone_to_json(
            DoubleCone(MPoint.of(-4, 2), MPoint.of(4, 2))
        ),
    }
    if args.action == "list":
        for name in sorted(bundled):
            sys.stdout.write(name + "\n")
        return EXIT_OK
    if args.name not in bundled:
        sys.stderr.write(f"unknown fixture {args.name}\n")
        return EXIT_SCHEMA
    payload = dump_json(bundled[args.name]())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _action_json(spec) -> dict:
    cat = spec.category
    return {
        "name": spec.name,
        "category": category_to_json(cat),
        "group": {
            "elements": list(spec.group.elements),
            "table": [
                {"a": a, "b": b, "result": spec.group.mult(a, b)}
                for a in spec.group.elements
                for b in spec.group.elements
            ],
        },
        "action": {
            g: {"objects": f.obj_map, "morphisms": f.mor_map}
            for g, f in spec.action.items()
        },
    }


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the JSON report to this path")
    p.add_argument("--render", action="store_true", help="print human-readable text")
    p.add_argument(
        "--paper-ref",
        action="store_true",
        help="annotate the report with the citation label of the check",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sectorfact",
        description="exact validation campaigns for finite orthogonal categories, "
        "double-cone geometry, and matrix-net sector calculus",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-category", help="category and orthogonality axioms")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--filtered", action="store_true", help="also check filteredness")
    p.add_argument(
        "--orthocomplement", action="store_true", help="also check orthogonal complements"
    )
    p.add_argument(
        "--extension", action="store_true", help="also check the extension property"
    )
    _add_common(p)
    p.set_defaults(func=cmd_validate_category)

    p = sub.add_parser("validate-action", help="group action axioms")
    p.add_argument("--in", dest="infile", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_validate_action)

    operad = sub.add_parser("operad", help="operad and algebra validation").add_subparsers(
        dest="subcommand", required=True
    )
    p = operad.add_parser("check", help="operad axioms up to an arity bound")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--dump", help="also write the operations grouped by (sources, target)")
    _add_common(p)
    p.set_defaults(func=cmd_operad_check)
    p = operad.add_parser("algebra", help="algebra diagrams for the sector model")
    p.add_argument("--net", required=True)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--equivariant", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_operad_algebra)

    geometry = sub.add_parser("geometry", help="double-cone predicates").add_subparsers(
        dest="subcommand", required=True
    )
    p = geometry.add_parser("disjoint", help="causal disjointness of two cones")
    p.add_argument("--a", dest="cone_a", required=True)
    p.add_argument("--b", dest="cone_b", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_geometry_disjoint)
    p = geometry.add_parser("include", help="inclusion of double cones")
    p.add_argument("--inner", required=True)
    p.add_argument("--outer", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_geometry_include)
    p = geometry.add_parser("project", help="spatial shadow of a cone")
    p.add_argument("--in", dest="infile", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_geometry_project)
    p = geometry.add_parser("witness", help="extension witness for a disjoint pair")
    p.add_argument("--u1", required=True)
    p.add_argument("--u2", required=True)
    p.add_argument("--utilde", required=True)
    p.add_argument("--budget", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_geometry_witness)

    homotopy = sub.add_parser("homotopy", help="configuration-space campaigns").add_subparsers(
        dest="subcommand", required=True
    )
    p = homotopy.add_parser("verify", help="certify sampled configurations")
    p.add_argument("--cone", required=True)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--detail", action="store_true", help="include per-pair certificates")
    _add_common(p)
    p.set_defaults(func=cmd_homotopy_verify)

    sectors = sub.add_parser("sectors", help="matrix-net sector calculus").add_subparsers(
        dest="subcommand", required=True
    )
    p = sectors.add_parser("haag", help="Haag duality as exact span equality")
    p.add_argument("--net", required=True)
    p.add_argument("--region", help="single region like 2-3; default: all eligible")
    _add_common(p)
    p.set_defaults(func=cmd_sectors_haag)
    p = sectors.add_parser("perp", help="commutation over orthogonal cospans")
    p.add_argument("--net", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sectors_perp)
    p = sectors.add_parser("diamond", help="monoid laws for the sector product")
    p.add_argument("--net", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sectors_diamond)
    p = sectors.add_parser("transport", help="search for a transporting unitary")
    p.add_argument("--net", required=True)
    p.add_argument("--sector", required=True, help="pattern@region, e.g. X@1-1")
    p.add_argument("--target", required=True, help="target region, e.g. 3-3")
    _add_common(p)
    p.set_defaults(func=cmd_sectors_transport)
    p = sectors.add_parser("equivariance", help="reflection symmetry suite")
    p.add_argument("--net", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sectors_equivariance)
    p = sectors.add_parser("theorem311", help="full structure-map validation")
    p.add_argument("--net", required=True)
    p.add_argument("--bound", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_sectors_theorem311)

    report = sub.add_parser("report", help="report utilities").add_subparsers(
        dest="subcommand", required=True
    )
    p = report.add_parser("render", help="render a JSON report as text")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_report_render)

    fixtures = sub.add_parser("fixtures", help="bundled inputs").add_subparsers(
        dest="action", required=True
    )
    p = fixtures.add_parser("list", help="list bundled fixture names")
    p.set_defaults(func=cmd_fixtures, action="list")
    p = fixtures.add_parser("export", help="write a bundled fixture as JSON")
    p.add_argument("name")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fixtures, action="export")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        sys.stderr.write(f"schema error: {exc}\n")
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
