"""Closure operators, density, and the separated/complete/sheaf classifier.

Two closure routes are kept deliberately separate so they can check each
other: ``closure_via_chi`` reads the closure off the composite of a
topology with a characteristic function, while ``closure_recursive`` runs
the per-dimension recursion driven by the bit string (copy a level, or
fill every cell whose faces already lie in the closed level below).

The classifier decides separated/complete/sheaf from cell counts over
incidence tuples; ``factorization_check`` is its brute-force counterpart,
counting actual factorizations through dense subobjects over a corpus of
ambient presheaves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fincat import FAMILY_FULL, FAMILY_SEMI, face
from .omega import characteristic_function
from .presheaf import (
    FinitePresheaf,
    FunctorialityError,
    Subpresheaf,
    boundary,
    enumerate_morphisms,
    enumerate_subpresheaves,
    sub_as_presheaf,
    yoneda,
)

DEFAULT_CORPUS_BOUND = 6
DEFAULT_AMBIENT_BOUND = 3
DEFAULT_SEARCH_BUDGET = 200_000


class CorpusTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class ClosureResult:
    closed: Subpresheaf
    added: tuple  # per-level tuples of added element indices

    @property
    def added_total(self):
        return sum(len(level) for level in self.added)


def _added_levels(sub, closed):
    cat = sub.presheaf.category
    out = []
    for c in cat.objects:
        pos = cat.obj_index(c)
        extra = closed.masks[pos] & ~sub.masks[pos]
        out.append(tuple(i for i in range(len(sub.presheaf.carrier(c))) if extra >> i & 1))
    return tuple(out)


def closure_via_chi(j, sub):
    """The subobject classified by the topology composed with chi."""
    omega = j.omega
    A = sub.presheaf
    chi = characteristic_function(sub, omega)
    masks = []
    for c in A.category.objects:
        pos = A.category.obj_index(c)
        top = omega.top[pos]
        mapping = j.levels[pos]
        mask = 0
        for x in range(len(A.carrier(c))):
            if mapping[chi.component(c, x)] == top:
                mask |= 1 << x
        masks.append(mask)
    closed = Subpresheaf(A, tuple(masks))
    return ClosureResult(closed, _added_levels(sub, closed))


def closure_recursive(word, sub):
    """Dimension-by-dimension closure: copy on bit 0, fill by faces on bit 1."""
    A = sub.presheaf
    cat = A.category
    if cat.family not in (FAMILY_SEMI, FAMILY_FULL):
        raise ValueError("the recursive closure needs a simplex category")
    if len(word) != cat.dim + 1:
        raise ValueError(f"bit string {word!r} does not match dimension {cat.dim}")
    masks = list(sub.masks)
    for k in cat.objects:
        pos = cat.obj_index(k)
        full = (1 << len(A.carrier(k))) - 1
        if word[k] == "0":
            continue
        if k == 0:
            masks[pos] = full
            continue
        tables = [A.action_table(face(k, i)) for i in range(k + 1)]
        below = masks[cat.obj_index(k - 1)]
        mask = 0
        for x in range(len(A.carrier(k))):
            if all(below >> t[x] & 1 for t in tables):
                mask |= 1 << x
        masks[pos] = mask
    closed = Subpresheaf(A, tuple(masks))
    return ClosureResult(closed, _added_levels(sub, closed))


def is_dense_via_closure(j, sub):
    return closure_via_chi(j, sub).closed.is_full


def is_dense_by_bits(word, sub):
    """Density criterion: full at every dimension whose bit is 0."""
    A = sub.presheaf
    cat = A.category
    for k in cat.objects:
        pos = cat.obj_index(k)
        if word[k] == "0" and sub.masks[pos] != (1 << len(A.carrier(k))) - 1:
            return False
    return True


# -- cell-count predicates ------------------------------------------------


def incidence_of_cell(B, k, x):
    """The incidence tuple (faces d_k .. d_0) of a cell x in B(k)."""
    return tuple(B.act(face(k, i), x) for i in range(k, -1, -1))


def parallel_cells(B, k):
    """Map incidence tuple -> list of level-k cells sharing it."""
    table = {}
    for x in range(len(B.carrier(k))):
        table.setdefault(incidence_of_cell(B, k, x), []).append(x)
    return table


def k_simple(B, k):
    """At most one level-k cell per incidence tuple.

    Quantifying over all of B(k-1)^(k+1) or only over boundary-realizable
    tuples makes no difference here: unrealizable tuples have no cells.
    """
    if k == 0:
        return len(B.carrier(0)) <= 1
    return all(len(v) <= 1 for v in parallel_cells(B, k).values())


def is_boundary_tuple(B, k, tup):
    """Whether a tuple is the incidence tuple of some boundary map into B.

    A tuple (x_k, ..., x_0) can demand a filler only if some morphism from
    the hollow k-simplex sends the i-th facet to x_i; at dimension 1 that
    is every pair of vertices, but from dimension 2 on the facets must
    share subfaces, so tuples like (e, e, e) for a non-loop edge e are
    unrealizable and vacuously filled.
    """
    category = B.category
    hollow = boundary(category, k)
    hollow_presheaf, _ = sub_as_presheaf(hollow)
    from .fincat import face as face_gen

    pinned = {}
    for slot, i in enumerate(range(k, -1, -1)):
        label = face_gen(k, i)
        pinned[(k - 1, hollow_presheaf.label_index(k - 1, label))] = tup[slot]
    for _ in enumerate_morphisms(hollow_presheaf, B, pinned=pinned):
        return True
    return False


def boundary_tuples(B, k):
    """All boundary-realizable incidence tuples at dimension k."""
    hollow_presheaf, _ = sub_as_presheaf(boundary(B.category, k))
    from .fincat import face as face_gen

    positions = [
        hollow_presheaf.label_index(k - 1, face_gen(k, i)) for i in range(k, -1, -1)
    ]
    tuples = set()
    for h in enumerate_morphisms(hollow_presheaf, B):
        comp = h.components[B.category.obj_index(k - 1)]
        tuples.add(tuple(comp[p] for p in positions))
    return tuples


def k_complete(B, k):
    """At least one level-k cell over every boundary-realizable tuple.

    Restricting to realizable tuples (rather than all of B(k-1)^(k+1)) is
    what the factorization oracle validates: a dense mono can only ask for
    fillers over boundaries that map into B.  See the decisions ledger.
    """
    if k == 0:
        return len(B.carrier(0)) >= 1
    found = parallel_cells(B, k)
    return all(tup in found for tup in boundary_tuples(B, k))


def k_exact(B, k):
    return k_simple(B, k) and k_complete(B, k)


@dataclass(frozen=True)
class ClassifyReport:
    separated: bool
    complete: bool
    witnesses: tuple  # (k, "simple"|"complete", data)

    @property
    def sheaf(self):
        return self.separated and self.complete


def classify(B, word):
    """Separated/complete/sheaf flags for the bit-string topology."""
    cat = B.category
    if len(word) != cat.dim + 1:
        raise ValueError(f"bit string {word!r} does not match dimension {cat.dim}")
    separated = True
    complete = True
    witnesses = []
    for k in cat.objects:
        if word[k] != "1":
            continue
        if not k_simple(B, k):
            separated = False
            if k == 0:
                witnesses.append((k, "simple", tuple(range(len(B.carrier(0))))))
            else:
                for tup, cells in parallel_cells(B, k).items():
                    if len(cells) > 1:
                        witnesses.append((k, "simple", (tup, tuple(cells))))
                        break
        if not k_complete(B, k):
            complete = False
            if k == 0:
                witnesses.append((k, "complete", ()))
            else:
                found = parallel_cells(B, k)
                for tup in sorted(boundary_tuples(B, k)):
                    if tup not in found:
                        witnesses.append((k, "complete", tup))
                        break
    return ClassifyReport(separated, complete, tuple(witnesses))


# -- closure-operator axioms over a corpus --------------------------------


def pullback_subobject(h, sub):
    """Pullback of a subobject of the target of h along h, levelwise preimage."""
    A = h.source
    sets = {}
    for c in A.category.objects:
        sets[c] = [
            x
            for x in range(len(A.carrier(c)))
            if sub.contains(c, h.component(c, x))
        ]
    return Subpresheaf.from_indices(A, sets)


@dataclass(frozen=True)
class ClosureAxiomViolation:
    axiom: str
    context: tuple

    def __str__(self):
        return f"closure axiom {self.axiom} fails: {self.context}"


def closure_axiom_violation(j, presheaves, morphisms=()):
    """Check increasing/idempotent/monotone/pullback-stable on instances.

    ``presheaves`` supplies the ambient objects; ``morphisms`` an optional
    iterable of PresheafMorphisms used for pullback stability.  Returns
    None or the first violation.  (Strongness preservation is vacuous
    here: every presheaf mono is strong.)
    """
    for A in presheaves:
        subs = enumerate_subpresheaves(A)
        closed = {s: closure_via_chi(j, s).closed for s in subs}
        for s in subs:
            if not s.leq(closed[s]):
                return ClosureAxiomViolation("increasing", (A, s))
            if closure_via_chi(j, closed[s]).closed != closed[s]:
                return ClosureAxiomViolation("idempotent", (A, s))
        for s in subs:
            for t in subs:
                if s.leq(t) and not closed[s].leq(closed[t]):
                    return ClosureAxiomViolation("monotone", (A, s, t))
    for h in morphisms:
        subs = enumerate_subpresheaves(h.target)
        for s in subs:
            lhs = closure_via_chi(j, pullback_subobject(h, s)).closed
            rhs = pullback_subobject(h, closure_via_chi(j, s).closed)
            if lhs != rhs:
                return ClosureAxiomViolation("pullback-stability", (h, s))
    return None


# -- corpus generation -----------------------------------------------------


def _size_vectors(category, max_total):
    sizes = []
    n = len(category.objects)

    def rec(prefix, remaining):
        if len(prefix) == n:
            sizes.append(tuple(prefix))
            return
        for s in range(remaining + 1):
            rec(prefix + [s], remaining - s)

    rec([], max_total)
    return sizes


def _canonical_key(category, sizes, tables):
    perms = [list(itertools.permutations(range(s))) for s in sizes]
    best = None
    for combo in itertools.product(*perms):
        renamed = []
        for g, table in zip(category.generators, tables):
            src = category.obj_index(g.source)
            tgt = category.obj_index(g.target)
            inv_tgt = combo[tgt]
            new = [None] * len(table)
            for x, v in enumerate(table):
                new[inv_tgt[x]] = combo[src][v]
            renamed.append(tuple(new))
        key = tuple(renamed)
        if best is None or key < best:
            best = key
    return sizes, best


def _pair_checks(category):
    """Per-generator-prefix relation checks for backtracking generation.

    For composable generators g1: a -> b, g2: b -> c, the composite action
    must agree with the composite's canonical factorization.  Returns, for
    each position in the generator order, the list of checks that become
    decidable once that generator's table is assigned.
    """
    gens = list(category.generators)
    order = {g: n for n, g in enumerate(gens)}
    checks = [[] for _ in gens]
    for g1 in gens:
        for g2 in gens:
            if g1.target != g2.source:
                continue
            composite = category.compose(g2, g1)
            path = category.factor(composite)
            involved = [order[g1], order[g2]] + [order[h] for h in path]
            checks[max(involved)].append((g1, g2, tuple(path)))
    return checks


def _run_pair_check(tables, g1, g2, path, size_of):
    # X(g2 o g1) = X(g1) o X(g2); the left side comes from the canonical path
    via = list(range(size_of[g2.target]))
    for h in path:
        table = tables[h]
        via = [table[v] for v in via]
    direct = [tables[g1][tables[g2][x]] for x in range(size_of[g2.target])]
    return via == direct


def presheaf_corpus(category, max_total=DEFAULT_CORPUS_BOUND, up_to_iso=True):
    """Every presheaf with at most ``max_total`` elements, one per iso class.

    Generator tables are assigned one at a time, pruning with every
    relation that becomes decidable; survivors are validated exhaustively.
    Isomorph rejection hashes a canonical form obtained by minimizing over
    per-level renamings.
    """
    gens = list(category.generators)
    checks = _pair_checks(category)
    corpus = []
    seen = set()
    for sizes in _size_vectors(category, max_total):
        size_of = dict(zip(category.objects, sizes))
        if any(
            size_of[g.target] > 0 and size_of[g.source] == 0 for g in gens
        ):
            continue
        tables = {}

        def assign(pos):
            if pos == len(gens):
                carriers = {c: tuple(range(size_of[c])) for c in category.objects}
                try:
                    P = FinitePresheaf(category, carriers, dict(tables))
                except FunctorialityError:
                    return
                if up_to_iso:
                    key = _canonical_key(
                        category,
                        tuple(size_of[c] for c in category.objects),
                        tuple(tables[g] for g in gens),
                    )
                    if key in seen:
                        return
                    seen.add(key)
                corpus.append(P)
                return
            g = gens[pos]
            for table in itertools.product(range(size_of[g.source]), repeat=size_of[g.target]):
                tables[g] = table
                if all(
                    _run_pair_check(tables, g1, g2, path, size_of)
                    for g1, g2, path in checks[pos]
                ):
                    assign(pos + 1)
                del tables[g]

        assign(0)
    corpus.sort(key=lambda P: (P.total_size, tuple(len(l) for l in P.carriers)))
    return tuple(corpus)


# -- brute-force factorization oracle --------------------------------------


@dataclass(frozen=True)
class FactorizationReport:
    separated: bool
    complete: bool
    separated_witness: tuple | None
    complete_witness: tuple | None


def _restriction_key(g, sub):
    A = g.source
    out = []
    for c in A.category.objects:
        pos = A.category.obj_index(c)
        mask = sub.masks[pos]
        out.append(
            tuple(g.components[pos][x] for x in range(len(A.carrier(c))) if mask >> x & 1)
        )
    return tuple(out)


def default_ambients(category, max_total=DEFAULT_AMBIENT_BOUND):
    """Corpus of ambient objects: everything small plus the Yoneda objects.

    The Yoneda objects are always included because the hollow inclusion
    into y(k) is the discriminating dense mono for both directions of the
    classifier; small ambients add soundness coverage beyond it.
    """
    ambients = list(presheaf_corpus(category, max_total))
    if category.family in (FAMILY_SEMI, FAMILY_FULL):
        for k in category.objects:
            yk = yoneda(category, k)
            if yk not in ambients:
                ambients.append(yk)
    return tuple(ambients)


def factorization_check(B, j, ambients, budget=DEFAULT_SEARCH_BUDGET):
    """Count factorizations through dense subobjects, the slow honest way.

    For every ambient A, every dense proper subobject A' of A, and every
    morphism f: A' -> B, a separated B admits at most one extension of f
    to A and a complete B at least one.  Density is decided through the
    topology's own closure, not through its tag.
    """
    sep_witness = None
    comp_witness = None
    for A in ambients:
        subs = [s for s in enumerate_subpresheaves(A) if not s.is_full]
        dense = [s for s in subs if is_dense_via_closure(j, s)]
        if not dense:
            continue
        extensions = {}
        count = 0
        for g in enumerate_morphisms(A, B):
            count += 1
            if count > budget:
                raise CorpusTooLarge(f"more than {budget} morphisms from {A} to {B}")
            for s in dense:
                key = _restriction_key(g, s)
                extensions.setdefault(s.masks, {}).setdefault(key, []).append(g)
        for s in dense:
            table = extensions.get(s.masks, {})
            if sep_witness is None:
                for key, gs in table.items():
                    if len(gs) > 1:
                        sep_witness = (A, s, key, tuple(gs[:2]))
                        break
            if comp_witness is None:
                restricted, _ = sub_as_presheaf(s)
                for f in enumerate_morphisms(restricted, B):
                    key = tuple(f.components)
                    if key not in table:
                        comp_witness = (A, s, f)
                        break
        if sep_witness is not None and comp_witness is not None:
            break
    return FactorizationReport(
        separated=sep_witness is None,
        complete=comp_witness is None,
        separated_witness=sep_witness,
        complete_witness=comp_witness,
    )
