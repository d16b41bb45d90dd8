"""Finite orthogonal categories, orthogonal functors, and group actions.

An orthogonal category is a finite category together with a set of
distinguished cospan pairs ("orthogonal" pairs) that is closed under
transposition and under pre- and post-composition.  Everything here is
table-driven and validated exhaustively; validators return structured
reports listing each violated axiom with a witness, never bare booleans.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .reports import SchemaError, ValidationReport, Violation

__all__ = [
    "Morphism",
    "OrthCategory",
    "OrthFunctor",
    "GroupTable",
    "GroupActionSpec",
    "FilteredReport",
    "OrthocomplementReport",
    "ExtensionReport",
    "validate_category",
    "check_filtered",
    "check_assumption_orthocomplement",
    "check_assumption_extension",
    "validate_group_action",
    "category_to_json",
    "category_from_json",
    "action_from_json",
]


@dataclass(frozen=True, order=True)
class Morphism:
    id: str
    src: str
    tgt: str


class OrthCategory:
    """Finite category with a composition table and an orthogonality relation.

    `orth` stores ordered pairs of morphism ids; closure under transposition
    is an axiom checked by ``validate_category``, not a structural guarantee.
    """

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Iterable[Morphism],
        compose_table: dict[tuple[str, str], str],
        identities: dict[str, str],
        orth: Iterable[tuple[str, str]],
        name: str = "",
    ):
        self.objects = tuple(sorted(objects))
        self.morphisms = {m.id: m for m in morphisms}
        self.compose_table = dict(compose_table)
        self.identities = dict(identities)
        self.orth = frozenset(orth)
        self.name = name
        self._into: dict[str, list[Morphism]] = {u: [] for u in self.objects}
        self._outof: dict[str, list[Morphism]] = {u: [] for u in self.objects}
        self._hom: dict[tuple[str, str], list[Morphism]] = {}
        for m in sorted(self.morphisms.values()):
            if m.tgt in self._into:
                self._into[m.tgt].append(m)
            if m.src in self._outof:
                self._outof[m.src].append(m)
            self._hom.setdefault((m.src, m.tgt), []).append(m)

    # -- accessors -------------------------------------------------------

    def hom(self, src: str, tgt: str) -> list[Morphism]:
        return self._hom.get((src, tgt), [])

    def into(self, obj: str) -> list[Morphism]:
        return self._into.get(obj, [])

    def outof(self, obj: str) -> list[Morphism]:
        return self._outof.get(obj, [])

    def identity(self, obj: str) -> Morphism:
        return self.morphisms[self.identities[obj]]

    def compose(self, g: str, f: str) -> str | None:
        """Composite id of g after f, or None when undefined."""
        return self.compose_table.get((g, f))

    def is_orth(self, f1: str, f2: str) -> bool:
        return (f1, f2) in self.orth

    def is_thin(self) -> bool:
        return all(len(ms) <= 1 for ms in self._hom.values())

    def schema_errors(self) -> list[str]:
        errors = []
        objset = set(self.objects)
        for m in self.morphisms.values():
            if m.src not in objset:
                errors.append(f"morphism {m.id} has dangling source {m.src}")
            if m.tgt not in objset:
                errors.append(f"morphism {m.id} has dangling target {m.tgt}")
        for u in self.objects:
            mid = self.identities.get(u)
            if mid is None:
                errors.append(f"object {u} has no identity morphism")
            elif mid not in self.morphisms:
                errors.append(f"identity of {u} references unknown morphism {mid}")
            else:
                m = self.morphisms[mid]
                if m.src != u or m.tgt != u:
                    errors.append(f"identity of {u} is not an endomorphism: {mid}")
        for (g, f), r in self.compose_table.items():
            if g not in self.morphisms or f not in self.morphisms:
                errors.append(f"compose entry ({g},{f}) references unknown morphism")
                continue
            if r not in self.morphisms:
                errors.append(f"compose entry ({g},{f}) has unknown result {r}")
                continue
            mg, mf, mr = self.morphisms[g], self.morphisms[f], self.morphisms[r]
            if mf.tgt != mg.src:
                errors.append(f"compose entry ({g},{f}) is not composable")
            elif mr.src != mf.src or mr.tgt != mg.tgt:
                errors.append(f"compose entry ({g},{f}) -> {r} has wrong signature")
        for g in self.morphisms.values():
            for f in self.morphisms.values():
                if f.tgt == g.src and (g.id, f.id) not in self.compose_table:
                    errors.append(f"composable pair ({g.id},{f.id}) missing from table")
        for f1, f2 in sorted(self.orth):
            if f1 not in self.morphisms or f2 not in self.morphisms:
                errors.append(f"orth pair ({f1},{f2}) references unknown morphism")
        return sorted(set(errors))


def validate_category(cat: OrthCategory) -> ValidationReport:
    """Exhaustive axiom check; schema problems short-circuit axiom checks."""
    report = ValidationReport(check="validate-category", subject=cat.name)
    report.schema_errors = cat.schema_errors()
    if report.schema_errors:
        return report

    mors = sorted(cat.morphisms.values())
    # unit laws
    for f in mors:
        left = cat.compose(cat.identities[f.tgt], f.id)
        right = cat.compose(f.id, cat.identities[f.src])
        if left != f.id:
            report.add("unit-left", {"f": f.id, "got": left})
        if right != f.id:
            report.add("unit-right", {"f": f.id, "got": right})
    # associativity over all composable triples
    for f in mors:
        for g in cat.outof(f.tgt):
            gf = cat.compose(g.id, f.id)
            if gf is None:
                continue
            for h in cat.outof(g.tgt):
                hg = cat.compose(h.id, g.id)
                left = cat.compose(h.id, gf) if gf else None
                right = cat.compose(hg, f.id) if hg else None
                if left != right:
                    report.add(
                        "associativity",
                        {"h": h.id, "g": g.id, "f": f.id, "h(gf)": left, "(hg)f": right},
                    )
    # orthogonality axioms
    for f1, f2 in sorted(cat.orth):
        m1, m2 = cat.morphisms[f1], cat.morphisms[f2]
        if m1.tgt != m2.tgt:
            report.add("orth-cospan", {"pair": [f1, f2]})
            continue
        if (f2, f1) not in cat.orth:
            report.add("orth-transposition", {"pair": [f1, f2]})
        # one-step closures; the general g.f1.h1 / g.f2.h2 form follows by induction
        for g in cat.outof(m1.tgt):
            c1, c2 = cat.compose(g.id, f1), cat.compose(g.id, f2)
            if c1 and c2 and (c1, c2) not in cat.orth:
                report.add(
                    "orth-post-composition",
                    {"pair": [f1, f2], "g": g.id, "composite": [c1, c2]},
                )
        for h1 in cat.into(m1.src):
            c1 = cat.compose(f1, h1.id)
            if c1 and (c1, f2) not in cat.orth:
                report.add(
                    "orth-pre-composition",
                    {"pair": [f1, f2], "h": h1.id, "composite": [c1, f2]},
                )
        for h2 in cat.into(m2.src):
            c2 = cat.compose(f2, h2.id)
            if c2 and (f1, c2) not in cat.orth:
                report.add(
                    "orth-pre-composition",
                    {"pair": [f1, f2], "h": h2.id, "composite": [f1, c2]},
                )
    return report


@dataclass
class FilteredReport:
    check: str = "check-filtered"
    subject: str = ""
    thin: bool = True
    filtered: bool = False
    reason: str = ""
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "subject": self.subject,
            "thin": self.thin,
            "filtered": self.filtered,
            "reason": self.reason,
            "counterexample": self.counterexample,
        }


def check_filtered(cat: OrthCategory) -> FilteredReport:
    """Filteredness: nonempty, cocones for object pairs, coequalizing arrows
    for parallel pairs.  For thin categories this reduces to directedness."""
    report = FilteredReport(subject=cat.name, thin=cat.is_thin())
    if not cat.objects:
        report.reason = "category is empty"
        return report
    for a in cat.objects:
        for b in cat.objects:
            if a > b:
                continue
            if not any(
                cat.hom(a, v) and cat.hom(b, v) for v in cat.objects
            ):
                report.reason = "object pair admits no cocone"
                report.counterexample = {"pair": [a, b]}
                return report
    if not report.thin:
        for (src, tgt), ms in sorted(cat._hom.items()):
            for i, f in enumerate(ms):
                for g in ms[i + 1 :]:
                    if not any(
                        cat.compose(h.id, f.id) == cat.compose(h.id, g.id)
                        for h in cat.outof(tgt)
                    ):
                        report.reason = "parallel pair admits no coequalizing arrow"
                        report.counterexample = {"parallel": [f.id, g.id]}
                        return report
    report.filtered = True
    report.reason = "all cocone and coequalizer searches succeeded"
    return report


@dataclass
class OrthocomplementReport:
    check: str = "check-orthocomplement"
    subject: str = ""
    holds: bool = True
    per_object: dict[str, bool] = field(default_factory=dict)
    witness: str | None = None  # first object without an orthogonal cospan

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "subject": self.subject,
            "holds": self.holds,
            "per_object": self.per_object,
            "witness": self.witness,
        }


def check_assumption_orthocomplement(cat: OrthCategory) -> OrthocomplementReport:
    """Every object U admits some orthogonal cospan (U' -> V) perp (U -> V)."""
    report = OrthocomplementReport(subject=cat.name)
    by_source: dict[str, bool] = {u: False for u in cat.objects}
    for f1, f2 in cat.orth:
        m2 = cat.morphisms.get(f2)
        if m2 is not None:
            by_source[m2.src] = True
    for u in cat.objects:
        report.per_object[u] = by_source[u]
        if not by_source[u] and report.witness is None:
            report.witness = u
    report.holds = all(by_source.values()) if cat.objects else False
    return report


@dataclass
class ExtensionReport:
    check: str = "check-extension"
    subject: str = ""
    holds: bool = True
    cospans_checked: int = 0
    failure: dict | None = None  # first cospan with no seven-object diagram
    witness_example: dict | None = None  # diagram found for the first cospan

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "subject": self.subject,
            "holds": self.holds,
            "cospans_checked": self.cospans_checked,
            "failure": self.failure,
            "witness_example": self.witness_example,
        }


def _extension_side(
    cat: OrthCategory, u: str, w: Morphism
) -> dict[str, tuple[str, str]]:
    """For one leg U of a cospan into src(w): all b ids (V -> W) such that
    some a: U -> V and t: U' -> V satisfy t perp a and (b.t) perp w.
    Returns b -> (a, t) with one witnessing choice each."""
    out: dict[str, tuple[str, str]] = {}
    for b in cat.into(w.tgt):
        v = b.src
        alist = cat.hom(u, v)
        if not alist:
            continue
        done = False
        for a in alist:
            for t in cat.into(v):
                if (t.id, a.id) not in cat.orth:
                    continue
                bt = cat.compose(b.id, t.id)
                if bt is None or (bt, w.id) not in cat.orth:
                    continue
                out[b.id] = (a.id, t.id)
                done = True
                break
            if done:
                break
    return out


def check_assumption_extension(cat: OrthCategory) -> ExtensionReport:
    """For every orthogonal cospan (U1 -> T) perp (U2 -> T), search for the
    seven-object extension diagram: a morphism T -> W and orthogonal cospans
    with V1 perp V2 over W, Ui -> Vi, and primed legs Ui' -> Vi whose
    composites into W are orthogonal to T -> W."""
    report = ExtensionReport(subject=cat.name)
    seen: set[frozenset] = set()
    for f1, f2 in sorted(cat.orth):
        key = frozenset((f1, f2))
        if key in seen:
            continue
        seen.add(key)
        report.cospans_checked += 1
        m1, m2 = cat.morphisms[f1], cat.morphisms[f2]
        found = None
        for w in cat.outof(m1.tgt):
            side1 = _extension_side(cat, m1.src, w)
            if not side1:
                continue
            side2 = _extension_side(cat, m2.src, w)
            if not side2:
                continue
            for b1, (a1, t1) in sorted(side1.items()):
                for b2, (a2, t2) in sorted(side2.items()):
                    if (b1, b2) in cat.orth:
                        found = {
                            "cospan": [f1, f2],
                            "T_to_W": w.id,
                            "V1_to_W": b1,
                            "V2_to_W": b2,
                            "U1_to_V1": a1,
                            "U2_to_V2": a2,
                            "U1p_to_V1": t1,
                            "U2p_to_V2": t2,
                        }
                        break
                if found:
                    break
            if found:
                break
        if found is None:
            report.holds = False
            report.failure = {"cospan": [f1, f2], "target": m1.tgt}
            return report
        if report.witness_example is None:
            report.witness_example = found
    return report


class OrthFunctor:
    """Functor between orthogonal categories, given by object/morphism tables."""

    def __init__(
        self,
        source: OrthCategory,
        target: OrthCategory,
        obj_map: dict[str, str],
        mor_map: dict[str, str],
        name: str = "",
    ):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)
        self.name = name

    def violations(self) -> list[Violation]:
        out: list[Violation] = []
        src, tgt = self.source, self.target
        for u in src.objects:
            if self.obj_map.get(u) not in tgt.objects:
                out.append(Violation("functor-object-map", {"object": u}))
        for m in sorted(src.morphisms.values()):
            fm_id = self.mor_map.get(m.id)
            fm = tgt.morphisms.get(fm_id) if fm_id else None
            if fm is None:
                out.append(Violation("functor-morphism-map", {"morphism": m.id}))
                continue
            if fm.src != self.obj_map.get(m.src) or fm.tgt != self.obj_map.get(m.tgt):
                out.append(
                    Violation("functor-signature", {"morphism": m.id, "image": fm.id})
                )
        if out:
            return out
        for u in src.objects:
            if self.mor_map[src.identities[u]] != tgt.identities[self.obj_map[u]]:
                out.append(Violation("functor-identity", {"object": u}))
        for (g, f), r in sorted(src.compose_table.items()):
            img = tgt.compose(self.mor_map[g], self.mor_map[f])
            if img != self.mor_map[r]:
                out.append(
                    Violation("functor-composition", {"g": g, "f": f, "expected": img})
                )
        for f1, f2 in sorted(src.orth):
            if (self.mor_map[f1], self.mor_map[f2]) not in tgt.orth:
                out.append(
                    Violation(
                        "functor-orthogonality",
                        {"cospan": [f1, f2], "image": [self.mor_map[f1], self.mor_map[f2]]},
                    )
                )
        return out

    def apply_obj(self, u: str) -> str:
        return self.obj_map[u]

    def apply_mor(self, f: str) -> str:
        return self.mor_map[f]

    def is_identity(self) -> bool:
        return all(v == k for k, v in self.obj_map.items()) and all(
            v == k for k, v in self.mor_map.items()
        )

    @staticmethod
    def identity_on(cat: OrthCategory) -> "OrthFunctor":
        return OrthFunctor(
            cat,
            cat,
            {u: u for u in cat.objects},
            {m: m for m in cat.morphisms},
            name="id",
        )

    def after(self, other: "OrthFunctor") -> "OrthFunctor":
        """self o other."""
        return OrthFunctor(
            other.source,
            self.target,
            {u: self.obj_map[v] for u, v in other.obj_map.items()},
            {f: self.mor_map[g] for f, g in other.mor_map.items()},
            name=f"{self.name}.{other.name}",
        )

    def same_tables(self, other: "OrthFunctor") -> bool:
        return self.obj_map == other.obj_map and self.mor_map == other.mor_map


class GroupTable:
    """Finite group presented by a multiplication table."""

    def __init__(self, elements: Iterable[str], table: dict[tuple[str, str], str]):
        self.elements = tuple(elements)
        self.table = dict(table)

    def mult(self, a: str, b: str) -> str | None:
        return self.table.get((a, b))

    def schema_errors(self) -> list[str]:
        errors = []
        els = set(self.elements)
        for a in self.elements:
            for b in self.elements:
                r = self.table.get((a, b))
                if r is None or r not in els:
                    errors.append(f"multiplication table incomplete at ({a},{b})")
        if errors:
            return errors
        unit = self.unit()
        if unit is None:
            errors.append("group table has no identity element")
            return errors
        for a in self.elements:
            if not any(
                self.mult(a, b) == unit and self.mult(b, a) == unit
                for b in self.elements
            ):
                errors.append(f"element {a} has no inverse")
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    if self.mult(self.mult(a, b), c) != self.mult(a, self.mult(b, c)):
                        errors.append(f"group multiplication not associative at ({a},{b},{c})")
                        return errors
        return errors

    def unit(self) -> str | None:
        for e in self.elements:
            if all(
                self.mult(e, a) == a and self.mult(a, e) == a for a in self.elements
            ):
                return e
        return None


@dataclass
class GroupActionSpec:
    """Discrete group acting on an orthogonal category by orthogonal functors."""

    group: GroupTable
    action: dict[str, OrthFunctor]
    name: str = ""

    @property
    def category(self) -> OrthCategory:
        return next(iter(self.action.values())).source


def validate_group_action(spec: GroupActionSpec) -> ValidationReport:
    report = ValidationReport(check="validate-action", subject=spec.name)
    report.schema_errors = list(spec.group.schema_errors())
    missing = [g for g in spec.group.elements if g not in spec.action]
    report.schema_errors += [f"no functor assigned to group element {g}" for g in missing]
    if report.schema_errors:
        return report
    unit = spec.group.unit()
    for g in spec.group.elements:
        for v in spec.action[g].violations():
            report.add(
                "action-functor", {"g": g, "axiom": v.axiom, **v.witness}
            )
    if not spec.action[unit].is_identity():
        report.add("action-unit", {"e": unit})
    for g1 in spec.group.elements:
        for g2 in spec.group.elements:
            composite = spec.action[g1].after(spec.action[g2])
            expected = spec.action[spec.group.mult(g1, g2)]
            if not composite.same_tables(expected):
                diff = next(
                    (
                        f
                        for f in composite.mor_map
                        if composite.mor_map[f] != expected.mor_map[f]
                    ),
                    None,
                )
                report.add(
                    "action-composition",
                    {"g1": g1, "g2": g2, "product": spec.group.mult(g1, g2), "morphism": diff},
                )
    return report


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def category_to_json(cat: OrthCategory) -> dict:
    return {
        "name": cat.name,
        "objects": list(cat.objects),
        "morphisms": [
            {"id": m.id, "src": m.src, "tgt": m.tgt}
            for m in sorted(cat.morphisms.values())
        ],
        "compose": [
            {"g": g, "f": f, "result": r}
            for (g, f), r in sorted(cat.compose_table.items())
        ],
        "identities": dict(sorted(cat.identities.items())),
        "orth": sorted([list(p) for p in cat.orth]),
    }


def category_from_json(doc: dict) -> OrthCategory:
    try:
        objects = [str(u) for u in doc["objects"]]
        morphisms = [
            Morphism(str(m["id"]), str(m["src"]), str(m["tgt"]))
            for m in doc["morphisms"]
        ]
        compose = {
            (str(e["g"]), str(e["f"])): str(e["result"]) for e in doc.get("compose", [])
        }
        identities = {str(k): str(v) for k, v in doc.get("identities", {}).items()}
        orth = [(str(a), str(b)) for a, b in doc.get("orth", [])]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed category document: {exc}") from exc
    ids = [m.id for m in morphisms]
    if len(set(ids)) != len(ids):
        raise SchemaError("duplicate morphism ids")
    return OrthCategory(objects, morphisms, compose, identities, orth, name=str(doc.get("name", "")))


def action_from_json(doc: dict) -> GroupActionSpec:
    try:
        cat = category_from_json(doc["category"])
        group = GroupTable(
            [str(e) for e in doc["group"]["elements"]],
            {
                (str(e["a"]), str(e["b"])): str(e["result"])
                for e in doc["group"]["table"]
            },
        )
        action = {}
        for g, maps in doc["action"].items():
            action[str(g)] = OrthFunctor(
                cat,
                cat,
                {str(k): str(v) for k, v in maps["objects"].items()},
                {str(k): str(v) for k, v in maps["morphisms"].items()},
                name=str(g),
            )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed action document: {exc}") from exc
    return GroupActionSpec(group=group, action=action, name=str(doc.get("name", "")))
