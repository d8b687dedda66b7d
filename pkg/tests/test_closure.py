"""Closure operators: the two computation routes, density, cell-count
classification, the closure axioms, and the factorization oracle."""

import itertools

import pytest

from lttop.fincat import build_index_category, face
from lttop.omega import classifying_object
from lttop.presheaf import (
    FinitePresheaf,
    Subpresheaf,
    enumerate_morphisms,
    enumerate_subpresheaves,
    yoneda,
)
from lttop.closure import (
    boundary_tuples,
    classify,
    closure_axiom_violation,
    closure_recursive,
    closure_via_chi,
    default_ambients,
    factorization_check,
    is_boundary_tuple,
    is_dense_by_bits,
    is_dense_via_closure,
    k_complete,
    k_exact,
    k_simple,
    presheaf_corpus,
    pullback_subobject,
)
from lttop.topology import construct_bitstring_topology, enumerate_topologies

GRAPH = build_index_category("graph")
REFL = build_index_category("reflgraph")
SEMI2 = build_index_category("semisimplex", 2)


@pytest.fixture(scope="module")
def omega_graph():
    return classifying_object(GRAPH)


def graph_presheaf(vertices, edges):
    """edges: mapping name -> (source index, target index)."""
    names = tuple(edges)
    return FinitePresheaf(
        GRAPH,
        {0: tuple(vertices), 1: names},
        {
            face(1, 1): tuple(edges[e][0] for e in names),
            face(1, 0): tuple(edges[e][1] for e in names),
        },
    )


PATH = graph_presheaf("abc", {"ab": (0, 1), "bc": (1, 2)})
PARALLEL = graph_presheaf("uv", {"e1": (0, 1), "e2": (0, 1)})
LOOP = graph_presheaf("v", {"l": (0, 0)})
COMPLETE2 = graph_presheaf("uv", {"uu": (0, 0), "uv": (0, 1), "vu": (1, 0), "vv": (1, 1)})


def test_discrete_closure_changes_nothing(omega_graph):
    j = construct_bitstring_topology(GRAPH, "00", omega=omega_graph)
    for sub in enumerate_subpresheaves(PATH):
        result = closure_via_chi(j, sub)
        assert result.closed == sub and result.added_total == 0


def test_trivial_closure_fills_everything(omega_graph):
    j = construct_bitstring_topology(GRAPH, "11", omega=omega_graph)
    sub = Subpresheaf.empty(PATH)
    assert closure_via_chi(j, sub).closed.is_full


def test_double_negation_closure_formula(omega_graph):
    # closure adds exactly the edges with both endpoints already in
    j = construct_bitstring_topology(GRAPH, "01", omega=omega_graph)
    for A in (PATH, PARALLEL, LOOP, COMPLETE2):
        for sub in enumerate_subpresheaves(A):
            closed = closure_via_chi(j, sub).closed
            assert closed.masks[0] == sub.masks[0]
            src = A.action_table(face(1, 1))
            tgt = A.action_table(face(1, 0))
            for e in range(len(A.carrier(1))):
                expected = bool(
                    sub.masks[0] >> src[e] & 1 and sub.masks[0] >> tgt[e] & 1
                )
                assert bool(closed.masks[1] >> e & 1) == expected


def test_vertex_filling_closure(omega_graph):
    # bit pattern 10 adds the vertices but never the edge
    j = construct_bitstring_topology(GRAPH, "10", omega=omega_graph)
    edge = graph_presheaf("uv", {"e": (0, 1)})
    result = closure_via_chi(j, Subpresheaf.empty(edge))
    assert result.closed.level_indices(0) == (0, 1)
    assert result.closed.level_indices(1) == ()


def test_recursive_closure_fills_a_triangle():
    omega = classifying_object(SEMI2)
    y2 = yoneda(SEMI2, 2)
    vertices_only = Subpresheaf.from_indices(
        y2, {0: range(3), 1: (), 2: ()}
    )
    result = closure_recursive("011", vertices_only)
    assert result.closed.is_full
    assert closure_via_chi(
        construct_bitstring_topology(SEMI2, "011", omega=omega), vertices_only
    ).closed.is_full
    untouched = closure_recursive("000", vertices_only)
    assert untouched.closed == vertices_only


@pytest.mark.parametrize("kind", ["graph", "reflgraph", "semisimplex:2", "simplex:2"])
def test_the_two_closure_routes_agree(kind):
    category = build_index_category(kind)
    omega = classifying_object(category)
    topologies = enumerate_topologies(category, omega=omega)
    for P in presheaf_corpus(category, 4):
        for sub in enumerate_subpresheaves(P):
            for j in topologies:
                assert (
                    closure_via_chi(j, sub).closed
                    == closure_recursive(j.tag, sub).closed
                )


def test_density(omega_graph):
    full = Subpresheaf.full(PATH)
    for word in ("00", "01", "10", "11"):
        j = construct_bitstring_topology(GRAPH, word, omega=omega_graph)
        assert is_dense_via_closure(j, full)
        for sub in enumerate_subpresheaves(PATH):
            assert is_dense_via_closure(j, sub) == is_dense_by_bits(word, sub)
        if word == "11":
            assert all(
                is_dense_via_closure(j, sub) for sub in enumerate_subpresheaves(PATH)
            )


def test_hollow_inclusion_is_dense_iff_the_bit_is_one():
    omega = classifying_object(SEMI2)
    from lttop.presheaf import boundary

    for k in (0, 1, 2):
        hollow = boundary(SEMI2, k)
        for bits in itertools.product("01", repeat=3):
            word = "".join(bits)
            j = construct_bitstring_topology(SEMI2, word, omega=omega)
            assert is_dense_via_closure(j, hollow) == (word[k] == "1")


def test_cell_count_predicates():
    assert k_simple(PATH, 1) and not k_complete(PATH, 1)
    assert not k_simple(PARALLEL, 1)
    assert k_complete(COMPLETE2, 1) and k_exact(COMPLETE2, 1)
    assert k_simple(LOOP, 0) and k_complete(LOOP, 0)
    assert k_exact(LOOP, 1)  # one vertex, one loop: complete graph on a point


def test_boundary_tuples_at_dimension_one_are_all_pairs():
    tuples = boundary_tuples(PATH, 1)
    assert tuples == set(itertools.product(range(3), repeat=2))


def test_unrealizable_tuples_are_recognized():
    # an edge between distinct vertices cannot bound a triangle three times
    B = FinitePresheaf(
        SEMI2,
        {0: ("u", "v"), 1: ("e",), 2: ()},
        {face(1, 1): (0,), face(1, 0): (1,), face(2, 0): (), face(2, 1): (), face(2, 2): ()},
    )
    assert not is_boundary_tuple(B, 2, (0, 0, 0))
    assert boundary_tuples(B, 2) == set()
    # so B is 2-complete even though it has no triangles at all
    assert k_complete(B, 2)
    assert classify(B, "001").complete


def test_classify_examples():
    assert classify(PARALLEL, "00").sheaf  # discrete: everything is a sheaf
    assert classify(PATH, "01").separated
    report = classify(PARALLEL, "01")
    assert not report.separated
    assert report.witnesses[0][:2] == (1, "simple")
    # terminal graph under the trivial topology
    assert classify(LOOP, "11").sheaf
    # empty presheaf under the trivial topology: separated but not complete
    empty = FinitePresheaf(GRAPH, {0: (), 1: ()}, {face(1, 1): (), face(1, 0): ()})
    report = classify(empty, "11")
    assert report.separated and not report.complete


def test_empty_set_is_separated_not_sheaf_for_the_trivial_topology():
    # decided by the factorization oracle, not only by cell counts
    one = build_index_category("set")
    omega = classifying_object(one)
    j = construct_bitstring_topology(one, "1", omega=omega)
    empty = FinitePresheaf(one, {0: ()}, {})
    singleton = FinitePresheaf(one, {0: ("x",)}, {})
    report = factorization_check(empty, j, (singleton, empty))
    assert report.separated and not report.complete
    assert classify(empty, "1").separated and not classify(empty, "1").complete
    # the singleton is the terminal object and therefore a sheaf
    report = factorization_check(singleton, j, (singleton, empty))
    assert report.separated and report.complete


def test_closure_axioms_on_corpus_instances(omega_graph):
    corpus = presheaf_corpus(GRAPH, 3)
    morphisms = [h for A in corpus for B in corpus for h in enumerate_morphisms(A, B)]
    for j in enumerate_topologies(GRAPH, omega=omega_graph):
        assert closure_axiom_violation(j, corpus, morphisms) is None


def test_pullback_subobject_is_levelwise_preimage():
    h = next(enumerate_morphisms(PATH, LOOP))
    full = Subpresheaf.full(LOOP)
    assert pullback_subobject(h, full).is_full
    empty = Subpresheaf.empty(LOOP)
    assert pullback_subobject(h, empty).size == 0


def test_factorization_oracle_finds_the_parallel_edge_pair(omega_graph):
    j = construct_bitstring_topology(GRAPH, "01", omega=omega_graph)
    ambients = default_ambients(GRAPH, 0)  # just the Yoneda objects
    report = factorization_check(PARALLEL, j, ambients)
    assert not report.separated
    ambient, sub, _, pair = report.separated_witness
    assert ambient.carrier(1) == (GRAPH.identity(1),)  # the walking edge
    assert sub.level_indices(1) == ()  # its hollow inclusion
    assert len(pair) == 2
    # a simple but incomplete graph admits a morphism with no extension
    report = factorization_check(PATH, j, ambients)
    assert report.separated and not report.complete


@pytest.mark.parametrize("kind,corpus_bound,ambient_bound", [
    ("graph", 4, 2),
    ("reflgraph", 5, 4),
    ("semisimplex:2", 4, 2),
])
def test_classifier_agrees_with_the_factorization_oracle(kind, corpus_bound, ambient_bound):
    category = build_index_category(kind)
    omega = classifying_object(category)
    topologies = enumerate_topologies(category, omega=omega)
    ambients = default_ambients(category, ambient_bound)
    for B in presheaf_corpus(category, corpus_bound):
        for j in topologies:
            predicted = classify(B, j.tag)
            observed = factorization_check(B, j, ambients)
            assert predicted.separated == observed.separated, (B, j.tag)
            assert predicted.complete == observed.complete, (B, j.tag)


def test_corpus_is_deduplicated_and_valid():
    corpus = presheaf_corpus(GRAPH, 3)
    # by hand: empty, 1-3 vertices, loop, loop+vertex, two loops? no: sizes
    # (1,2) means one vertex with two loops; (2,1) has two classes
    assert len(corpus) == 8
    for P in corpus:
        assert P.functoriality_violation() is None
        assert P.total_size <= 3
    keys = {tuple(len(l) for l in P.carriers) for P in corpus}
    assert (2, 1) in keys and (1, 2) in keys


def test_corpus_counts_without_iso_rejection_are_larger():
    raw = presheaf_corpus(GRAPH, 3, up_to_iso=False)
    assert len(raw) > len(presheaf_corpus(GRAPH, 3))
