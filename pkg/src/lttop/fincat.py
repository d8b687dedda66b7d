"""Finite index categories underlying the presheaf toposes we compute in.

Variance convention, fixed once and used by every other module: for a
category C built here, ``hom(a, b)`` is the set of C-morphisms a -> b, and
a presheaf X assigns to each f in hom(a, b) an action X(f): X(b) -> X(a)
(contravariant).  Morphisms of the simplex categories are stored as the
monotone maps themselves, so the face/degeneracy interchange laws hold by
function composition instead of by word rewriting.

Generators of the truncated simplex categories:

* ``face(k, i)`` in hom(k-1, k): the strictly monotone map that skips the
  value i.  Its action X(k) -> X(k-1) selects the i-th face, so the source
  of an edge (v0, v1) is its 1st face and the target its 0th.
* ``degeneracy(k, i)`` in hom(k+1, k): the monotone surjection repeating
  the value i.  Its action X(k) -> X(k+1) produces degenerate simplices.

Every morphism carries explicit source/target dimensions; nothing is
inferred from index ranges.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

DEFAULT_MAX_DIM = 4

FAMILY_SEMI = "semisimplex"
FAMILY_FULL = "simplex"
FAMILY_BICOLOR = "bicolgraph"

#: friendly kind -> (family, forced dimension or None)
KIND_ALIASES = {
    "set": (FAMILY_SEMI, 0),
    "graph": (FAMILY_SEMI, 1),
    "reflgraph": (FAMILY_FULL, 1),
    "bicolgraph": (FAMILY_BICOLOR, None),
    "semisimplex": (FAMILY_SEMI, None),
    "simplex": (FAMILY_FULL, None),
}


@dataclass(frozen=True, order=True)
class SimplexMorphism:
    """A monotone map {0..source} -> {0..target} between simplex objects."""

    source: int
    target: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.source + 1:
            raise ValueError(f"expected {self.source + 1} values, got {self.values}")
        if any(v < 0 or v > self.target for v in self.values):
            raise ValueError(f"values {self.values} out of range 0..{self.target}")
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise ValueError(f"values {self.values} are not monotone")

    @property
    def is_identity(self):
        return self.source == self.target and self.values == tuple(range(self.source + 1))

    @property
    def is_injective(self):
        return len(set(self.values)) == self.source + 1

    def __str__(self):
        return "(" + ",".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True, order=True)
class NamedMorphism:
    """A morphism of an explicitly tabulated category, identified by name."""

    source: str
    target: str
    name: str

    @property
    def is_identity(self):
        return self.name == "id"

    @property
    def is_injective(self):
        return True

    def __str__(self):
        return self.name


def simplex_identity(k):
    return SimplexMorphism(k, k, tuple(range(k + 1)))


def face(k, i):
    """The injection {0..k-1} -> {0..k} skipping i, i.e. hom(k-1, k)."""
    if not (1 <= k and 0 <= i <= k):
        raise ValueError(f"face({k}, {i}) out of range")
    return SimplexMorphism(k - 1, k, tuple(v for v in range(k + 1) if v != i))


def degeneracy(k, i):
    """The surjection {0..k+1} -> {0..k} repeating i, i.e. hom(k+1, k)."""
    if not (0 <= i <= k):
        raise ValueError(f"degeneracy({k}, {i}) out of range")
    values = list(range(i + 1)) + list(range(i, k + 1))
    return SimplexMorphism(k + 1, k, tuple(values))


def compose_simplex(g, f):
    """g after f for f: a -> b, g: b -> c."""
    if f.target != g.source:
        raise ValueError(f"cannot compose {g} after {f}")
    return SimplexMorphism(f.source, g.target, tuple(g.values[v] for v in f.values))


def normal_form(f):
    """Split a simplex morphism into (degeneracy indices, face indices).

    Returns ``(degens, faces)`` where ``degens`` is the strictly increasing
    tuple of positions j with f(j) = f(j+1) and ``faces`` is the strictly
    decreasing tuple of values missing from the image.  Recomposition:

        f = face(b, faces[0]) o ... o face(s+1, faces[-1])
              o degeneracy(s, degens[0]) o ... o degeneracy(a-1, degens[-1])

    where a = f.source, b = f.target, s = a - len(degens).  The pair is a
    bijection between morphisms and index tuples with these orderings.
    """
    degens = tuple(j for j in range(f.source) if f.values[j] == f.values[j + 1])
    image = set(f.values)
    faces = tuple(v for v in range(f.target, -1, -1) if v not in image)
    return degens, faces


def recompose(source, target, degens, faces):
    """Inverse of :func:`normal_form`; rebuilds the morphism from indices."""
    k = source
    result = simplex_identity(source)
    for j in reversed(degens):
        result = compose_simplex(degeneracy(k - 1, j), result)
        k -= 1
    for i in reversed(faces):
        result = compose_simplex(face(k + 1, i), result)
        k += 1
    if k != target:
        raise ValueError("index lists do not reach the target dimension")
    return result


class FiniteIndexCategory:
    """A finite category given by objects, hom sets, and composition.

    Instances are immutable after construction and safe to share between
    concurrent workers.
    """

    def __init__(self, kind, family, dim, objects, hom, generators, compose_fn, identity_fn, factor_fn):
        self.kind = kind
        self.family = family
        self.dim = dim
        self.objects = tuple(objects)
        self._hom = {pair: tuple(ms) for pair, ms in hom.items()}
        self.generators = tuple(generators)
        self._compose = compose_fn
        self._identity = identity_fn
        self._factor = factor_fn
        self._obj_index = {c: i for i, c in enumerate(self.objects)}

    def __repr__(self):
        return f"FiniteIndexCategory({self.kind!r})"

    @property
    def has_degeneracies(self):
        return self.family == FAMILY_FULL

    def obj_index(self, c):
        return self._obj_index[c]

    def hom(self, a, b):
        return self._hom.get((a, b), ())

    def identity(self, c):
        return self._identity(c)

    def compose(self, g, f):
        """g after f for f: a -> b, g: b -> c."""
        return self._compose(g, f)

    def factor(self, f):
        """A generator list [g1, ..., gm] with f = g1 o g2 o ... o gm."""
        return self._factor(f)

    def all_morphisms(self):
        for pair in sorted(self._hom, key=lambda p: (self._obj_index[p[0]], self._obj_index[p[1]])):
            yield from self._hom[pair]

    def composable_pairs(self):
        """Yield (f, g) with f: a -> b, g: b -> c over all such pairs."""
        for a, b in self._hom:
            for f in self._hom[(a, b)]:
                for b2, c in self._hom:
                    if b2 != b:
                        continue
                    for g in self._hom[(b2, c)]:
                        yield f, g

    def law_violation(self):
        """Exhaustively check the category laws; None if they all hold."""
        for (a, b), ms in self._hom.items():
            for f in ms:
                if self.compose(f, self.identity(a)) != f:
                    return ("identity", f)
                if self.compose(self.identity(b), f) != f:
                    return ("identity", f)
        for f, g in self.composable_pairs():
            gf = self.compose(g, f)
            if gf not in self._hom[(f.source, g.target)]:
                return ("closure", (f, g))
            for (c2, d), ms in self._hom.items():
                if c2 != g.target:
                    continue
                for h in ms:
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                        return ("associativity", (f, g, h))
        return None


def _build_simplex_category(kind, family, dim):
    strict = family == FAMILY_SEMI
    objects = tuple(range(dim + 1))
    hom = {}
    for a in objects:
        for b in objects:
            if strict:
                maps = itertools.combinations(range(b + 1), a + 1)
            else:
                maps = itertools.combinations_with_replacement(range(b + 1), a + 1)
            ms = tuple(sorted(SimplexMorphism(a, b, values) for values in maps))
            if ms:
                hom[(a, b)] = ms
    generators = [face(k, i) for k in range(1, dim + 1) for i in range(k + 1)]
    if not strict:
        generators += [degeneracy(k, i) for k in range(dim) for i in range(k + 1)]

    def factor_fn(f):
        degens, faces = normal_form(f)
        out = []
        k = f.target
        for i in faces:
            out.append(face(k, i))
            k -= 1
        s = k
        for pos, j in enumerate(degens):
            out.append(degeneracy(s + pos, j))
        return out

    return FiniteIndexCategory(
        kind,
        family,
        dim,
        objects,
        hom,
        generators,
        compose_simplex,
        simplex_identity,
        factor_fn,
    )


def _build_bicolor_category():
    objects = ("V", "E", "E'")
    gens = (
        NamedMorphism("V", "E", "s"),
        NamedMorphism("V", "E", "t"),
        NamedMorphism("V", "E'", "s'"),
        NamedMorphism("V", "E'", "t'"),
    )
    hom = {(c, c): (NamedMorphism(c, c, "id"),) for c in objects}
    hom[("V", "E")] = gens[:2]
    hom[("V", "E'")] = gens[2:]

    def compose_fn(g, f):
        if f.target != g.source:
            raise ValueError(f"cannot compose {g} after {f}")
        if f.is_identity:
            return g
        if g.is_identity:
            return f
        raise ValueError(f"no composite of {g} after {f}")

    def identity_fn(c):
        return NamedMorphism(c, c, "id")

    def factor_fn(f):
        return [] if f.is_identity else [f]

    return FiniteIndexCategory(
        "bicolgraph",
        FAMILY_BICOLOR,
        None,
        objects,
        hom,
        gens,
        compose_fn,
        identity_fn,
        factor_fn,
    )


@lru_cache(maxsize=None)
def _cached_category(family, dim):
    if family == FAMILY_BICOLOR:
        return _build_bicolor_category()
    kind = {(FAMILY_SEMI, 0): "set", (FAMILY_SEMI, 1): "graph", (FAMILY_FULL, 1): "reflgraph"}.get(
        (family, dim), f"{family}:{dim}"
    )
    return _build_simplex_category(kind, family, dim)


def build_index_category(kind, dim=None, max_dim=DEFAULT_MAX_DIM, allow_large=False):
    """Build one of the five built-in index categories.

    ``kind`` is one of ``set``, ``graph``, ``reflgraph``, ``bicolgraph``,
    ``semisimplex`` or ``simplex``; the latter two require ``dim``.  The
    dimension is refused above ``max_dim`` (subobject lattices explode)
    unless ``allow_large`` is set.
    """
    key = kind.strip().lower()
    if ":" in key:
        key, _, tail = key.partition(":")
        if dim is None:
            dim = int(tail)
    if key not in KIND_ALIASES:
        raise ValueError(f"unknown category kind {kind!r}")
    family, forced_dim = KIND_ALIASES[key]
    if forced_dim is not None:
        if dim is not None and dim != forced_dim:
            raise ValueError(f"{kind!r} has fixed dimension {forced_dim}")
        dim = forced_dim
    if family == FAMILY_BICOLOR:
        return _cached_category(family, None)
    if dim is None:
        raise ValueError(f"{kind!r} needs a dimension")
    if dim < 0:
        raise ValueError("dimension must be >= 0")
    if dim > max_dim and not allow_large:
        raise ValueError(
            f"dimension {dim} exceeds the cap {max_dim}; pass allow_large=True to override"
        )
    return _cached_category(family, dim)
