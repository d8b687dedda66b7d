"""JSON document schemas for presheaves, subobjects, algebras, fuzzy sets.

One object per file.  Referenced names must resolve; the resulting values
are validated by their modules' own invariants (functoriality, closure,
order laws) before they are returned.
"""

import json

from . import lattice
from .fincat import FAMILY_BICOLOR, build_index_category, normal_form
from .fuzzy import FuzzySet, FuzzySubset
from .lattice import FiniteHeytingAlgebra
from .presheaf import FinitePresheaf, Subpresheaf


class DocumentError(ValueError):
    """A document that fails schema or cross-reference validation."""


def _require(doc, key, kind):
    if key not in doc:
        raise DocumentError(f"missing key {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        wanted = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise DocumentError(f"key {key!r} should be {wanted}")
    return value


def generator_name(category, g):
    if category.family == FAMILY_BICOLOR:
        return g.name
    degens, faces = normal_form(g)
    if len(faces) == 1 and not degens:
        return f"d{g.target}_{faces[0]}"
    if len(degens) == 1 and not faces:
        return f"s{g.target}_{degens[0]}"
    raise ValueError(f"{g} is not a generator")


def _generator_by_name(category, name):
    for g in category.generators:
        if generator_name(category, g) == name:
            return g
    raise DocumentError(f"unknown generator {name!r} for {category.kind}")


def _object_by_name(category, name):
    for c in category.objects:
        if str(c) == name:
            return c
    raise DocumentError(f"unknown object {name!r} for {category.kind}")


def load_json(path):
    with open(path, "r", encoding="utf-8") as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: not valid JSON ({exc})") from exc


def presheaf_from_doc(doc):
    """{"category": kind, "levels": {obj: [names]}, "actions": {gen: {elem: image}}}"""
    kind = _require(doc, "category", str)
    try:
        category = build_index_category(kind)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    levels = _require(doc, "levels", dict)
    carriers = {}
    for c in category.objects:
        carriers[c] = tuple(levels.get(str(c), ()))
        if len(set(carriers[c])) != len(carriers[c]):
            raise DocumentError(f"duplicate element names at level {c}")
    actions_doc = _require(doc, "actions", dict)
    gen_actions = {}
    for g in category.generators:
        name = generator_name(category, g)
        table_doc = actions_doc.get(name)
        if table_doc is None:
            if carriers[g.target]:
                raise DocumentError(f"missing action table for generator {name!r}")
            table_doc = {}
        index_src = {x: i for i, x in enumerate(carriers[g.source])}
        table = []
        for x in carriers[g.target]:
            if x not in table_doc:
                raise DocumentError(f"generator {name!r} has no image for element {x!r}")
            image = table_doc[x]
            if image not in index_src:
                raise DocumentError(
                    f"generator {name!r} sends {x!r} to unknown element {image!r}"
                )
            table.append(index_src[image])
        gen_actions[g] = tuple(table)
    try:
        return FinitePresheaf(category, carriers, gen_actions)
    except ValueError as exc:
        raise DocumentError(f"not a presheaf: {exc}") from exc


def presheaf_to_doc(P):
    category = P.category
    doc = {
        "category": category.kind,
        "levels": {str(c): [str(x) for x in P.carrier(c)] for c in category.objects},
        "actions": {},
    }
    for g in category.generators:
        name = generator_name(category, g)
        table = P.action_table(g)
        doc["actions"][name] = {
            str(P.carrier(g.target)[x]): str(P.carrier(g.source)[table[x]])
            for x in range(len(P.carrier(g.target)))
        }
    return doc


def subobject_from_doc(doc, P):
    """{"of": label, "levels": {obj: [names]}} resolved against a presheaf."""
    levels = _require(doc, "levels", dict)
    sets = {}
    for c in P.category.objects:
        names = levels.get(str(c), ())
        carrier = {str(x): x for x in P.carrier(c)}
        members = []
        for name in names:
            if name not in carrier:
                raise DocumentError(f"unknown element {name!r} at level {c}")
            members.append(carrier[name])
        sets[c] = members
    sub = Subpresheaf.from_sets(P, sets)
    problem = sub.closure_violation()
    if problem is not None:
        g, x = problem
        raise DocumentError(
            f"levels are not action-closed: element {P.carrier(g.target)[x]} "
            f"needs its image under {generator_name(P.category, g)}"
        )
    return sub


NAMED_ALGEBRAS = {
    "chain2": lambda: lattice.chain(2, ("0", "1")),
    "chain3": lambda: lattice.chain(3, ("0", "1/2", "1")),
    "chain4": lambda: lattice.chain(4, ("0", "1/3", "2/3", "1")),
    "chain5": lambda: lattice.chain(5, ("0", "1/4", "1/2", "3/4", "1")),
    "diamond": lambda: lattice.diamond(),
    "pentagon": lambda: lattice.pentagon(),
}


def heyting_from_doc(doc):
    """{"elements": [names], "covers": [[lower, upper], ...]} or a named algebra."""
    if isinstance(doc, str):
        if doc not in NAMED_ALGEBRAS:
            raise DocumentError(
                f"unknown algebra {doc!r}; known: {sorted(NAMED_ALGEBRAS)}"
            )
        return NAMED_ALGEBRAS[doc]()
    elements = _require(doc, "elements", list)
    covers = _require(doc, "covers", list)
    if len(set(elements)) != len(elements):
        raise DocumentError("duplicate element names")
    for pair in covers:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise DocumentError(f"cover {pair!r} should be [lower, upper]")
        for name in pair:
            if name not in elements:
                raise DocumentError(f"cover mentions unknown element {name!r}")
    return FiniteHeytingAlgebra.from_covers(tuple(elements), [tuple(p) for p in covers])


def fuzzyset_from_doc(doc):
    """{"algebra": doc-or-name, "carrier": [names], "membership": {name: element}}"""
    algebra = heyting_from_doc(_require(doc, "algebra", (str, dict)))
    problem = lattice.verify_heyting(algebra)
    if problem is not None:
        raise DocumentError(f"membership algebra is not Heyting: {problem}")
    carrier = _require(doc, "carrier", list)
    membership_doc = _require(doc, "membership", dict)
    name_index = {n: i for i, n in enumerate(algebra.names)}
    membership = []
    for x in carrier:
        if x not in membership_doc:
            raise DocumentError(f"element {x!r} has no membership value")
        value = membership_doc[x]
        if value not in name_index:
            raise DocumentError(f"unknown algebra element {value!r}")
        membership.append(name_index[value])
    return FuzzySet(algebra, tuple(carrier), tuple(membership))


def fuzzy_subset_from_doc(doc, A):
    """{"members": {element: membership}} resolved against an ambient fuzzy set."""
    members_doc = _require(doc, "members", dict)
    name_index = {n: i for i, n in enumerate(A.algebra.names)}
    element_index = {e: i for i, e in enumerate(A.elements)}
    members = []
    for name, value in sorted(members_doc.items()):
        if name not in element_index:
            raise DocumentError(f"unknown carrier element {name!r}")
        if value not in name_index:
            raise DocumentError(f"unknown algebra element {value!r}")
        members.append((element_index[name], name_index[value]))
    try:
        return FuzzySubset(A, tuple(sorted(members)))
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def nucleus_from_doc(doc):
    """{"algebra": doc-or-name, "map": {element: element}}"""
    algebra = heyting_from_doc(_require(doc, "algebra", (str, dict)))
    map_doc = _require(doc, "map", dict)
    name_index = {n: i for i, n in enumerate(algebra.names)}
    mapping = []
    for name in algebra.names:
        if name not in map_doc:
            raise DocumentError(f"map has no value for {name!r}")
        value = map_doc[name]
        if value not in name_index:
            raise DocumentError(f"unknown algebra element {value!r}")
        mapping.append(name_index[value])
    return algebra, tuple(mapping)
