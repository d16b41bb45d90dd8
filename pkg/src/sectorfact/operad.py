"""Prefactorization operads of finite orthogonal categories.

Operations are tuples of pairwise-orthogonal morphisms into a common
target; composition is arrow-wise composition with tuple concatenation and
the symmetric group acts by reindexing.  Validators check the operad
axioms, the algebra diagrams (unit, composition, permutation) on finite
spanning sets, and the equivariant-algebra coherence laws, all by
exhaustive enumeration up to an arity bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .orthcat import GroupActionSpec, OrthCategory
from .reports import PreconditionError, SchemaError, ValidationReport

__all__ = [
    "PrefactOperation",
    "make_operation",
    "point_operation",
    "enumerate_operations",
    "enumerate_all_operations",
    "compose",
    "permute",
    "validate_operad",
    "FiniteAlgebraAssignment",
    "validate_algebra",
    "EquivariantAlgebraAssignment",
    "validate_equivariant_algebra",
]


@dataclass(frozen=True, order=True)
class PrefactOperation:
    """Tuple of pairwise-orthogonal arrows U_i -> V; arity 0 is the point."""

    target: str
    sources: tuple[str, ...]
    arrows: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.arrows)

    def label(self) -> str:
        return f"({','.join(self.arrows)})->{self.target}" if self.arrows else f"pt_{self.target}"


def point_operation(target: str) -> PrefactOperation:
    return PrefactOperation(target=target, sources=(), arrows=())


def make_operation(cat: OrthCategory, arrows: Sequence[str], target: str | None = None) -> PrefactOperation:
    """Build and check an operation from arrow ids (target needed for arity 0)."""
    if not arrows:
        if target is None:
            raise PreconditionError("arity-0 operation needs an explicit target")
        if target not in set(cat.objects):
            raise SchemaError(f"unknown object {target}")
        return point_operation(target)
    ms = []
    for a in arrows:
        m = cat.morphisms.get(a)
        if m is None:
            raise SchemaError(f"unknown morphism {a}")
        ms.append(m)
    tgt = ms[0].tgt
    if any(m.tgt != tgt for m in ms):
        raise PreconditionError("arrows of an operation must share a target")
    if target is not None and target != tgt:
        raise PreconditionError(f"declared target {target} differs from arrow target {tgt}")
    for i in range(len(ms)):
        for j in range(len(ms)):
            if i != j and not cat.is_orth(ms[i].id, ms[j].id):
                raise PreconditionError(
                    f"arrows {ms[i].id} and {ms[j].id} are not orthogonal"
                )
    return PrefactOperation(tgt, tuple(m.src for m in ms), tuple(m.id for m in ms))


def enumerate_operations(
    cat: OrthCategory, sources: Sequence[str], target: str
) -> list[PrefactOperation]:
    """All operations with the given source tuple and target, sorted."""
    objset = set(cat.objects)
    if target not in objset:
        raise SchemaError(f"unknown object {target}")
    for u in sources:
        if u not in objset:
            raise SchemaError(f"unknown object {u}")
    if not sources:
        return [point_operation(target)]
    homs = [cat.hom(u, target) for u in sources]
    out = []
    for combo in itertools.product(*homs):
        if all(
            cat.is_orth(combo[i].id, combo[j].id)
            for i in range(len(combo))
            for j in range(len(combo))
            if i != j
        ):
            out.append(
                PrefactOperation(target, tuple(sources), tuple(m.id for m in combo))
            )
    return sorted(out)


def enumerate_all_operations(
    cat: OrthCategory, bound: int, target: str | None = None
) -> list[PrefactOperation]:
    """All operations of arity <= bound (into `target`, or every object)."""
    targets = [target] if target is not None else list(cat.objects)
    out = []
    for v in targets:
        out.append(point_operation(v))
        incoming = cat.into(v)
        level = [(m.id,) for m in incoming]
        for arity in range(1, bound + 1):
            for arrows in level:
                out.append(
                    PrefactOperation(
                        v,
                        tuple(cat.morphisms[a].src for a in arrows),
                        tuple(arrows),
                    )
                )
            if arity < bound:
                level = [
                    arrows + (m.id,)
                    for arrows in level
                    for m in incoming
                    if all(
                        cat.is_orth(a, m.id) and cat.is_orth(m.id, a) for a in arrows
                    )
                ]
    return sorted(out)


def compose(
    cat: OrthCategory, outer: PrefactOperation, inners: Sequence[PrefactOperation]
) -> PrefactOperation:
    """Operadic composition: arrow-wise composition, tuples concatenated.

    The result is checked to be pairwise orthogonal; closure of the
    orthogonality relation guarantees this on valid categories, so a
    failure here indicts the input category.
    """
    if len(inners) != outer.arity:
        raise PreconditionError(
            f"arity mismatch: outer expects {outer.arity} inner operations"
        )
    arrows: list[str] = []
    sources: list[str] = []
    for f_id, inner in zip(outer.arrows, inners):
        if inner.target != cat.morphisms[f_id].src:
            raise PreconditionError(
                f"inner target {inner.target} does not match source of {f_id}"
            )
        for g_id in inner.arrows:
            c = cat.compose(f_id, g_id)
            if c is None:
                raise PreconditionError(f"non-composable arrow pair ({f_id},{g_id})")
            arrows.append(c)
        sources.extend(inner.sources)
    for i in range(len(arrows)):
        for j in range(len(arrows)):
            if i != j and not cat.is_orth(arrows[i], arrows[j]):
                raise PreconditionError(
                    f"composite arrows {arrows[i]} and {arrows[j]} are not orthogonal"
                )
    return PrefactOperation(outer.target, tuple(sources), tuple(arrows))


def permute(op: PrefactOperation, sigma: Sequence[int]) -> PrefactOperation:
    """Right action: (f sigma)_i = f_{sigma(i)}; sigma is 0-based."""
    if sorted(sigma) != list(range(op.arity)):
        raise PreconditionError("sigma must be a permutation of the arity")
    return PrefactOperation(
        op.target,
        tuple(op.sources[s] for s in sigma),
        tuple(op.arrows[s] for s in sigma),
    )


def _inner_tuples(
    ops_by_target: dict[str, list[PrefactOperation]],
    sources: tuple[str, ...],
    budget: int,
):
    """All tuples (g_1,...,g_n) with g_i targeting sources[i], total arity <= budget."""
    if not sources:
        yield ()
        return
    head, rest = sources[0], sources[1:]
    for g in ops_by_target.get(head, []):
        remaining = budget - g.arity
        if remaining < 0:
            continue
        for tail in _inner_tuples(ops_by_target, rest, remaining):
            yield (g,) + tail


def validate_operad(cat: OrthCategory, bound: int = 3) -> ValidationReport:
    """Exhaustive unit/associativity/equivariance check up to an arity bound."""
    report = ValidationReport(check="operad-axioms", subject=cat.name)
    report.schema_errors = cat.schema_errors()
    if report.schema_errors:
        return report

    ops = enumerate_all_operations(cat, bound)
    ops_by_target: dict[str, list[PrefactOperation]] = {}
    for op in ops:
        ops_by_target.setdefault(op.target, []).append(op)

    def guarded(outer, inners, context):
        try:
            return compose(cat, outer, inners)
        except PreconditionError as exc:
            report.add(
                "composition-welldefined",
                {
                    "context": context,
                    "outer": outer.label(),
                    "inners": [g.label() for g in inners],
                    "detail": str(exc),
                },
            )
            return None

    # unit laws
    for op in ops:
        ids = tuple(
            PrefactOperation(u, (u,), (cat.identities[u],)) for u in op.sources
        )
        right = guarded(op, ids, "unit-right")
        if right is not None and right != op:
            report.add("unit-right", {"op": op.label(), "got": right.label()})
        unary_id = PrefactOperation(
            op.target, (op.target,), (cat.identities[op.target],)
        )
        left = guarded(unary_id, (op,), "unit-left")
        if left is not None and left != op:
            report.add("unit-left", {"op": op.label(), "got": left.label()})

    # associativity gamma(gamma(f;g);h) = gamma(f; gamma(g_i;h_i))
    for f in ops:
        if f.arity == 0:
            continue
        for gs in _inner_tuples(ops_by_target, f.sources, bound):
            fg = guarded(f, gs, "associativity")
            if fg is None:
                continue
            for hs in _inner_tuples(ops_by_target, fg.sources, bound):
                left = guarded(fg, hs, "associativity")
                if left is None:
                    continue
                pos = 0
                gh = []
                ok = True
                for g in gs:
                    block = hs[pos : pos + g.arity]
                    pos += g.arity
                    inner = guarded(g, block, "associativity")
                    if inner is None:
                        ok = False
                        break
                    gh.append(inner)
                if not ok:
                    continue
                right = guarded(f, gh, "associativity")
                if right is not None and left != right:
                    report.add(
                        "associativity",
                        {
                            "f": f.label(),
                            "g": [g.label() for g in gs],
                            "h": [h.label() for h in hs],
                        },
                    )

    # equivariance: gamma(f sigma; g_{sigma(1)},...) = gamma(f; g) sigma<k>
    for f in ops:
        if f.arity < 2:
            continue
        for gs in _inner_tuples(ops_by_target, f.sources, bound):
            fg = guarded(f, gs, "equivariance")
            if fg is None:
                continue
            for sigma in itertools.permutations(range(f.arity)):
                lhs = guarded(
                    permute(f, sigma), tuple(gs[s] for s in sigma), "equivariance"
                )
                if lhs is None:
                    continue
                expected_arrows: list[str] = []
                expected_sources: list[str] = []
                blocks = []
                pos = 0
                for g in gs:
                    blocks.append(
                        (fg.arrows[pos : pos + g.arity], fg.sources[pos : pos + g.arity])
                    )
                    pos += g.arity
                for s in sigma:
                    expected_arrows.extend(blocks[s][0])
                    expected_sources.extend(blocks[s][1])
                rhs = PrefactOperation(
                    fg.target, tuple(expected_sources), tuple(expected_arrows)
                )
                if lhs != rhs:
                    report.add(
                        "equivariance",
                        {
                            "f": f.label(),
                            "sigma": list(sigma),
                            "g": [g.label() for g in gs],
                        },
                    )
    return report


@dataclass
class FiniteAlgebraAssignment:
    """Algebra data evaluated on finite spanning sets.

    carrier(U) lists spanning elements of the carrier at U; structure(op)
    returns the map applied to element tuples; equal decides exact equality
    of carrier elements; describe renders an element for witnesses.
    """

    carrier: Callable[[str], Sequence[Any]]
    structure: Callable[[PrefactOperation], Callable[[tuple], Any]]
    equal: Callable[[Any, Any], bool]
    describe: Callable[[Any], str] = staticmethod(lambda x: str(x))
    name: str = ""


def validate_algebra(
    cat: OrthCategory, assign: FiniteAlgebraAssignment, bound: int = 3
) -> ValidationReport:
    """Check the unit, composition, and permutation diagrams of an algebra
    over the prefactorization operad on spanning elements, exactly."""
    report = ValidationReport(check="algebra-axioms", subject=assign.name or cat.name)
    ops = enumerate_all_operations(cat, bound)
    ops_by_target: dict[str, list[PrefactOperation]] = {}
    for op in ops:
        ops_by_target.setdefault(op.target, []).append(op)

    def apply(op: PrefactOperation, args: tuple, context: str):
        try:
            return assign.structure(op)(args)
        except PreconditionError as exc:
            report.add(
                "structure-arity", {"context": context, "op": op.label(), "detail": str(exc)}
            )
            return None

    def tuples_for(sources: tuple[str, ...]):
        return itertools.product(*(assign.carrier(u) for u in sources))

    # unit diagram: F(id_V) = id
    for v in cat.objects:
        unary = PrefactOperation(v, (v,), (cat.identities[v],))
        for x in assign.carrier(v):
            y = apply(unary, (x,), "unit")
            if y is not None and not assign.equal(x, y):
                report.add(
                    "unit-diagram",
                    {"object": v, "element": assign.describe(x), "got": assign.describe(y)},
                )

    # composition diagram: F(gamma(f;g)) = F(f) o (F(g_1) x ... x F(g_n))
    for f in ops:
        for gs in _inner_tuples(ops_by_target, f.sources, bound):
            try:
                fg = compose(cat, f, gs)
            except PreconditionError:
                continue
            for xs in tuples_for(fg.sources):
                lhs = apply(fg, tuple(xs), "composition")
                if lhs is None:
                    continue
                pos = 0
                mids = []
                for g in gs:
                    mid = apply(g, tuple(xs[pos : pos + g.arity]), "composition")
                    pos += g.arity
                    mids.append(mid)
                if any(m is None for m in mids):
                    continue
                rhs = apply(f, tuple(mids), "composition")
                if rhs is not None and not assign.equal(lhs, rhs):
                    report.add(
                        "composition-diagram",
                        {
                            "f": f.label(),
                            "g": [g.label() for g in gs],
                            "elements": [assign.describe(x) for x in xs],
                        },
                    )

    # permutation diagram: F(f sigma)(x sigma) = F(f)(x)
    for f in ops:
        if f.arity < 2:
            continue
        for sigma in itertools.permutations(range(f.arity)):
            fsig = permute(f, sigma)
            for xs in tuples_for(f.sources):
                lhs = apply(fsig, tuple(xs[s] for s in sigma), "permutation")
                rhs = apply(f, tuple(xs), "permutation")
                if lhs is None or rhs is None:
                    continue
                if not assign.equal(lhs, rhs):
                    report.add(
                        "permutation-diagram",
                        {
                            "f": f.label(),
                            "sigma": list(sigma),
                            "elements": [assign.describe(x) for x in xs],
                        },
                    )
    return report


@dataclass
class EquivariantAlgebraAssignment:
    """Equivariance data on top of an algebra assignment.

    iso(g, U) is the component of the algebra isomorphism at U, a map from
    carrier(U) to carrier(alpha_g(U)).
    """

    base: FiniteAlgebraAssignment
    iso: Callable[[str, str], Callable[[Any], Any]]
    name: str = ""


def validate_equivariant_algebra(
    cat: OrthCategory,
    assign: EquivariantAlgebraAssignment,
    action: GroupActionSpec,
    bound: int = 3,
) -> ValidationReport:
    """Check the unit law, the cocycle square, and naturality of the
    equivariance isomorphisms against the structure maps."""
    report = ValidationReport(
        check="equivariant-algebra-axioms", subject=assign.name or cat.name
    )
    base = assign.base
    unit = action.group.unit()
    if unit is None:
        report.schema_errors.append("group table has no identity element")
        return report
    for g in action.group.elements:
        if g not in action.action:
            report.schema_errors.append(f"missing functor for group element {g}")
        try:
            for u in cat.objects:
                assign.iso(g, u)
        except KeyError:
            report.schema_errors.append(f"missing isomorphism data for group element {g}")
    if report.schema_errors:
        return report

    # unit law
    for u in cat.objects:
        psi = assign.iso(unit, u)
        for x in base.carrier(u):
            if not base.equal(psi(x), x):
                report.add("iso-unit", {"object": u, "element": base.describe(x)})

    # cocycle square
    for g1 in action.group.elements:
        for g2 in action.group.elements:
            prod = action.group.mult(g2, g1)
            for u in cat.objects:
                mid = action.action[g1].apply_obj(u)
                for x in base.carrier(u):
                    two_step = assign.iso(g2, mid)(assign.iso(g1, u)(x))
                    one_step = assign.iso(prod, u)(x)
                    if not base.equal(two_step, one_step):
                        report.add(
                            "iso-cocycle",
                            {
                                "g1": g1,
                                "g2": g2,
                                "object": u,
                                "element": base.describe(x),
                            },
                        )

    # naturality against structure maps
    ops = enumerate_all_operations(cat, bound)
    for g in action.group.elements:
        functor = action.action[g]
        for op in ops:
            try:
                moved = make_operation(
                    cat,
                    [functor.apply_mor(a) for a in op.arrows],
                    target=functor.apply_obj(op.target),
                )
            except PreconditionError as exc:
                report.add(
                    "action-operation",
                    {"g": g, "op": op.label(), "detail": str(exc)},
                )
                continue
            for xs in itertools.product(*(base.carrier(u) for u in op.sources)):
                lhs = assign.iso(g, op.target)(base.structure(op)(tuple(xs)))
                moved_args = tuple(
                    assign.iso(g, u)(x) for u, x in zip(op.sources, xs)
                )
                rhs = base.structure(moved)(moved_args)
                if not base.equal(lhs, rhs):
                    report.add(
                        "iso-naturality",
                        {
                            "g": g,
                            "op": op.label(),
                            "elements": [base.describe(x) for x in xs],
                        },
                    )
    return report
