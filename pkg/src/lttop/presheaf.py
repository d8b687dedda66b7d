"""Finite presheaves, subpresheaves, and natural transformations.

A presheaf stores one finite carrier per object of the index category and
one action per generator; actions along arbitrary morphisms are derived
through the category's factorizations and validated against functoriality
exhaustively.  Subpresheaves are per-level bitmasks over a canonical
element order, so meets and joins are bitwise.
"""

from dataclasses import dataclass

from .fincat import FAMILY_FULL, FAMILY_SEMI, build_index_category, compose_simplex

DEFAULT_ENUMERATION_BOUND = 300


class FunctorialityError(ValueError):
    """Generator actions that do not assemble into a functor."""


class EnumerationBoundExceeded(RuntimeError):
    def __init__(self, total, bound):
        super().__init__(f"carrier has {total} elements, enumeration bound is {bound}")
        self.total = total
        self.bound = bound


class FinitePresheaf:
    """A finite presheaf over a built-in index category.

    ``carriers`` maps each object to an ordered tuple of element labels;
    ``gen_actions`` maps each generator f in hom(a, b) to an index tuple
    sending positions of carrier(b) to positions of carrier(a).  Instances
    are immutable after construction.
    """

    def __init__(self, category, carriers, gen_actions, validate=True):
        self.category = category
        self.carriers = tuple(tuple(carriers.get(c, ())) for c in category.objects)
        self._gen_actions = {g: tuple(gen_actions[g]) for g in category.generators}
        self._label_index = tuple({x: i for i, x in enumerate(level)} for level in self.carriers)
        self._actions = self._extend_actions()
        self._orbit_cache = None
        if validate:
            problem = self.functoriality_violation()
            if problem is not None:
                raise FunctorialityError(str(problem))

    def _extend_actions(self):
        actions = {}
        cat = self.category
        for c in cat.objects:
            n = len(self.carrier(c))
            actions[cat.identity(c)] = tuple(range(n))
        for g, table in self._gen_actions.items():
            if len(table) != len(self.carrier(g.target)):
                raise FunctorialityError(f"action table for {g} has the wrong length")
            limit = len(self.carrier(g.source))
            if any(not (0 <= v < limit) for v in table):
                raise FunctorialityError(f"action table for {g} is out of range")
            actions[g] = table
        for f in cat.all_morphisms():
            if f not in actions:
                actions[f] = self._compose_tables(cat.factor(f))
        return actions

    def _compose_tables(self, gens):
        # X(g1 o ... o gm) = X(gm) o ... o X(g1)
        if not gens:
            raise FunctorialityError("empty factorization for a non-identity morphism")
        out = list(range(len(self.carrier(gens[0].target))))
        for g in gens:
            table = self._gen_actions[g]
            out = [table[v] for v in out]
        return tuple(out)

    def functoriality_violation(self):
        """Exhaustive check that actions respect composition; None if ok."""
        cat = self.category
        for f, g in cat.composable_pairs():
            gf = cat.compose(g, f)
            left = self._actions[gf]
            via = tuple(self._actions[f][v] for v in self._actions[g])
            if left != via:
                return (f, g, gf)
        return None

    # -- basic access -------------------------------------------------

    def obj_index(self, c):
        return self.category.obj_index(c)

    def carrier(self, c):
        return self.carriers[self.category.obj_index(c)]

    def label_index(self, c, label):
        return self._label_index[self.category.obj_index(c)][label]

    def act(self, f, x):
        """Index of X(f)(x) for f in hom(a, b) and x an index into X(b)."""
        return self._actions[f][x]

    def action_table(self, f):
        return self._actions[f]

    def elements(self):
        for c in self.category.objects:
            for i in range(len(self.carrier(c))):
                yield c, i

    @property
    def total_size(self):
        return sum(len(level) for level in self.carriers)

    def __eq__(self, other):
        if not isinstance(other, FinitePresheaf):
            return NotImplemented
        return (
            self.category is other.category
            and self.carriers == other.carriers
            and self._gen_actions == other._gen_actions
        )

    def __hash__(self):
        return hash((id(self.category), self.carriers))

    def __repr__(self):
        sizes = ",".join(str(len(level)) for level in self.carriers)
        return f"FinitePresheaf({self.category.kind}; sizes={sizes})"

    # -- sieve support used by the classifying object ------------------

    def sieve_orbits(self):
        """For each element (c, x): per-level tuples of act(f, x) over hom(l, c).

        Cached; used to evaluate characteristic functions quickly.
        """
        if self._orbit_cache is None:
            cat = self.category
            orbits = {}
            for c in cat.objects:
                for x in range(len(self.carrier(c))):
                    per_level = []
                    for l in cat.objects:
                        per_level.append(tuple(self.act(f, x) for f in cat.hom(l, c)))
                    orbits[(c, x)] = tuple(per_level)
            self._orbit_cache = orbits
        return self._orbit_cache


@dataclass(frozen=True)
class Subpresheaf:
    """An action-closed choice of subsets, stored as per-level bitmasks."""

    presheaf: FinitePresheaf
    masks: tuple

    @staticmethod
    def from_sets(presheaf, sets):
        masks = []
        for c in presheaf.category.objects:
            mask = 0
            for label in sets.get(c, ()):
                mask |= 1 << presheaf.label_index(c, label)
            masks.append(mask)
        return Subpresheaf(presheaf, tuple(masks))

    @staticmethod
    def from_indices(presheaf, index_sets):
        masks = []
        for c in presheaf.category.objects:
            mask = 0
            for i in index_sets.get(c, ()):
                mask |= 1 << i
            masks.append(mask)
        return Subpresheaf(presheaf, tuple(masks))

    @staticmethod
    def full(presheaf):
        return Subpresheaf(
            presheaf, tuple((1 << len(level)) - 1 for level in presheaf.carriers)
        )

    @staticmethod
    def empty(presheaf):
        return Subpresheaf(presheaf, tuple(0 for _ in presheaf.carriers))

    def contains(self, c, x):
        return bool(self.masks[self.presheaf.obj_index(c)] >> x & 1)

    def level_indices(self, c):
        mask = self.masks[self.presheaf.obj_index(c)]
        return tuple(i for i in range(len(self.presheaf.carrier(c))) if mask >> i & 1)

    def level_labels(self, c):
        level = self.presheaf.carrier(c)
        return tuple(level[i] for i in self.level_indices(c))

    def meet(self, other):
        return Subpresheaf(self.presheaf, tuple(a & b for a, b in zip(self.masks, other.masks)))

    def join(self, other):
        return Subpresheaf(self.presheaf, tuple(a | b for a, b in zip(self.masks, other.masks)))

    def leq(self, other):
        return all(a & ~b == 0 for a, b in zip(self.masks, other.masks))

    @property
    def size(self):
        return sum(bin(m).count("1") for m in self.masks)

    @property
    def is_full(self):
        return self.masks == Subpresheaf.full(self.presheaf).masks

    def closure_violation(self):
        """None if closed under every generator action, else a witness."""
        A = self.presheaf
        for g in A.category.generators:
            src_pos = A.obj_index(g.source)
            tgt_pos = A.obj_index(g.target)
            table = A.action_table(g)
            mask = self.masks[tgt_pos]
            for x in range(len(A.carriers[tgt_pos])):
                if mask >> x & 1 and not self.masks[src_pos] >> table[x] & 1:
                    return (g, x)
        return None

    def __str__(self):
        parts = []
        for c in self.presheaf.category.objects:
            labels = ",".join(str(l) for l in self.level_labels(c))
            parts.append(f"{c}:{{{labels}}}")
        return " ".join(parts)


def generated_subpresheaf(presheaf, seeds):
    """Least subpresheaf containing ``seeds``, a set of (object, index) pairs."""
    cat = presheaf.category
    masks = [0 for _ in cat.objects]
    stack = list(seeds)
    while stack:
        c, x = stack.pop()
        pos = presheaf.obj_index(c)
        if masks[pos] >> x & 1:
            continue
        masks[pos] |= 1 << x
        for g in cat.generators:
            if g.target == c:
                stack.append((g.source, presheaf.act(g, x)))
    return Subpresheaf(presheaf, tuple(masks))


def enumerate_subpresheaves(presheaf, bound=DEFAULT_ENUMERATION_BOUND):
    """All action-closed level-wise subsets, sorted by level-wise bitmask.

    Works by branch-and-propagate over the element inclusion constraints:
    choosing an element forces its whole generator orbit in, excluding one
    forces everything mapping onto it out.
    """
    total = presheaf.total_size
    if total > bound:
        raise EnumerationBoundExceeded(total, bound)
    cat = presheaf.category
    elements = []
    position = {}
    for c, i in presheaf.elements():
        position[(c, i)] = len(elements)
        elements.append((c, i))
    succ = [set() for _ in elements]
    pred = [set() for _ in elements]
    for g in cat.generators:
        table = presheaf.action_table(g)
        for x in range(len(presheaf.carrier(g.target))):
            e = position[(g.target, x)]
            e2 = position[(g.source, table[x])]
            if e != e2:
                succ[e].add(e2)
                pred[e2].add(e)

    UNDECIDED, IN, OUT = 0, 1, 2
    results = []

    def propagate(state, seed, value):
        stack = [seed]
        trail = []
        while stack:
            e = stack.pop()
            if state[e] == value:
                continue
            if state[e] != UNDECIDED:
                for t in trail:
                    state[t] = UNDECIDED
                return None
            state[e] = value
            trail.append(e)
            stack.extend(succ[e] if value == IN else pred[e])
        return trail

    def undo(state, trail):
        for e in trail:
            state[e] = UNDECIDED

    def search(state, cursor):
        while cursor < len(elements) and state[cursor] != UNDECIDED:
            cursor += 1
        if cursor == len(elements):
            results.append(tuple(state))
            return
        for value in (OUT, IN):
            trail = propagate(state, cursor, value)
            if trail is not None:
                search(state, cursor + 1)
                undo(state, trail)

    search([UNDECIDED] * len(elements), 0)

    subs = []
    for state in results:
        masks = [0 for _ in cat.objects]
        for e, (c, i) in enumerate(elements):
            if state[e] == IN:
                masks[presheaf.obj_index(c)] |= 1 << i
        subs.append(Subpresheaf(presheaf, tuple(masks)))
    subs.sort(key=lambda s: s.masks)
    return tuple(subs)


# -- Yoneda objects, faces, boundaries ---------------------------------


def yoneda(category, k):
    """The representable presheaf y(k): level l carries hom(l, k)."""
    if k not in category.objects:
        raise ValueError(f"{k!r} is not an object of {category.kind}")
    carriers = {l: tuple(sorted(category.hom(l, k))) for l in category.objects}
    gen_actions = {}
    for g in category.generators:
        level = carriers[g.target]
        lookup = {m: i for i, m in enumerate(carriers[g.source])}
        gen_actions[g] = tuple(lookup[category.compose(m, g)] for m in level)
    return FinitePresheaf(category, carriers, gen_actions)


def _simplex_faces(category):
    if category.family not in (FAMILY_SEMI, FAMILY_FULL):
        raise ValueError(f"{category.kind} has no simplex faces")


def ith_face(category, k, i, yk=None):
    """The least subpresheaf of y(k) containing the i-th face generator."""
    _simplex_faces(category)
    if not (1 <= k <= category.dim and 0 <= i <= k):
        raise ValueError(f"face index ({k}, {i}) out of range")
    from .fincat import face as face_gen

    yk = yk if yk is not None else yoneda(category, k)
    seed = yk.label_index(k - 1, face_gen(k, i))
    return generated_subpresheaf(yk, [(k - 1, seed)])


def boundary(category, k, yk=None):
    """The join of all faces of y(k); empty when k = 0."""
    _simplex_faces(category)
    yk = yk if yk is not None else yoneda(category, k)
    result = Subpresheaf.empty(yk)
    if k == 0:
        return result
    for i in range(k + 1):
        result = result.join(ith_face(category, k, i, yk=yk))
    return result


# -- degeneracy bookkeeping between the semi and full variants ---------


def degen_set(sub, l):
    """The degenerate l-simplices determined by a sieve, per its recursion.

    ``sub`` is a subpresheaf of a Yoneda object whose element labels are
    simplex morphisms; the result is a set of (degenerate) simplex
    morphisms of dimension l, members of the matching full-simplex Yoneda
    level.
    """
    sets = degen_sets(sub, l)
    return sets[l]


def degen_sets(sub, up_to):
    from .fincat import degeneracy as degeneracy_gen

    result = {0: set()}
    for l in range(up_to):
        base = set(sub.level_labels(l)) if l <= sub.presheaf.category.dim else set()
        pool = base | result[l]
        nxt = set()
        for f in pool:
            for i in range(l + 1):
                nxt.add(compose_simplex(f, degeneracy_gen(l, i)))
        result[l + 1] = nxt
    return result


def add_degeneracies(sub_plus, full_category=None, y_full=None):
    """Transport a semi-simplex sieve to the full-simplex side (adds degeneracies)."""
    semi = sub_plus.presheaf.category
    if semi.family != FAMILY_SEMI:
        raise ValueError("expected a subpresheaf over a semi-simplex category")
    full_category = full_category or build_index_category("simplex", semi.dim)
    k = _yoneda_dimension(sub_plus.presheaf)
    y_full = y_full if y_full is not None else yoneda(full_category, k)
    seeds = []
    for l in semi.objects:
        for label in sub_plus.level_labels(l):
            seeds.append((l, y_full.label_index(l, label)))
    return generated_subpresheaf(y_full, seeds)


def strip_degeneracies(sub, semi_category=None, y_semi=None):
    """Transport a full-simplex sieve to the semi side (drops degeneracies)."""
    full = sub.presheaf.category
    if full.family != FAMILY_FULL:
        raise ValueError("expected a subpresheaf over a simplex category")
    semi_category = semi_category or build_index_category("semisimplex", full.dim)
    k = _yoneda_dimension(sub.presheaf)
    y_semi = y_semi if y_semi is not None else yoneda(semi_category, k)
    sets = {}
    for l in full.objects:
        sets[l] = tuple(label for label in sub.level_labels(l) if label.is_injective)
    return Subpresheaf.from_sets(y_semi, sets)


def _yoneda_dimension(yk):
    # a Yoneda object of a simplex category carries the identity at its dimension
    for c in reversed(yk.category.objects):
        for label in yk.carrier(c):
            if label.is_identity:
                return c
    raise ValueError("presheaf is not a Yoneda object")


# -- natural transformations -------------------------------------------


@dataclass(frozen=True)
class PresheafMorphism:
    """A natural transformation, stored as per-level index maps."""

    source: FinitePresheaf
    target: FinitePresheaf
    components: tuple

    def component(self, c, x):
        return self.components[self.source.obj_index(c)][x]

    def naturality_violation(self):
        for g in self.source.category.generators:
            for x in range(len(self.source.carrier(g.target))):
                lhs = self.target.act(g, self.component(g.target, x))
                rhs = self.component(g.source, self.source.act(g, x))
                if lhs != rhs:
                    return (g, x)
        return None

    def image(self):
        sets = {}
        for c in self.target.category.objects:
            pos = self.source.obj_index(c)
            sets[c] = {self.components[pos][x] for x in range(len(self.source.carrier(c)))}
        return Subpresheaf.from_indices(self.target, sets)


def sub_as_presheaf(sub):
    """Materialize a subpresheaf as a presheaf plus its inclusion data.

    Returns ``(presheaf, embed)`` where embed maps (object, new index) to
    the ambient index.
    """
    ambient = sub.presheaf
    cat = ambient.category
    chosen = {c: sub.level_indices(c) for c in cat.objects}
    new_index = {c: {x: i for i, x in enumerate(chosen[c])} for c in cat.objects}
    carriers = {c: tuple(ambient.carrier(c)[x] for x in chosen[c]) for c in cat.objects}
    gen_actions = {}
    for g in cat.generators:
        gen_actions[g] = tuple(
            new_index[g.source][ambient.act(g, x)] for x in chosen[g.target]
        )
    restricted = FinitePresheaf(cat, carriers, gen_actions, validate=False)
    embed = {c: dict(enumerate(chosen[c])) for c in cat.objects}
    return restricted, embed


def enumerate_morphisms(source, target, pinned=None):
    """Yield every natural transformation source -> target.

    ``pinned`` optionally fixes components as {(object, index): image}.
    Backtracks element by element, lowest level first, intersecting the
    candidate images allowed by naturality with already-assigned elements.
    """
    cat = source.category
    elements = list(source.elements())
    position = {e: n for n, e in enumerate(elements)}
    # constraints[(n)] = list of (generator, other position, side)
    constraints = [[] for _ in elements]
    for g in cat.generators:
        for x in range(len(source.carrier(g.target))):
            e_t = position[(g.target, x)]
            e_s = position[(g.source, source.act(g, x))]
            late, early = max(e_t, e_s), min(e_t, e_s)
            side = "target" if late == e_t else "source"
            constraints[late].append((g, x, early, side))

    n_elements = len(elements)
    assignment = [None] * n_elements

    def candidates(n):
        c, x = elements[n]
        opts = None
        if pinned and (c, x) in pinned:
            opts = [pinned[(c, x)]]
        for g, gx, early, side in constraints[n]:
            if side == "target":
                # assigning the acted-on element: act_target(g, y) must match
                want = assignment[early]
                pool = opts if opts is not None else range(len(target.carrier(c)))
                opts = [y for y in pool if target.act(g, y) == want]
            else:
                forced = target.act(g, assignment[early])
                if opts is None:
                    opts = [forced]
                else:
                    opts = [y for y in opts if y == forced]
            if not opts:
                return []
        if opts is None:
            opts = list(range(len(target.carrier(c))))
        return opts

    def search(n):
        if n == n_elements:
            comps = []
            cursor = 0
            for c in cat.objects:
                size = len(source.carrier(c))
                comps.append(tuple(assignment[cursor : cursor + size]))
                cursor += size
            yield PresheafMorphism(source, target, tuple(comps))
            return
        for y in candidates(n):
            assignment[n] = y
            yield from search(n + 1)
            assignment[n] = None

    yield from search(0)
