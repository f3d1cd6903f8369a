"""End-to-end acceptance checks.

Each test prints a single PASS/FAIL line (run with ``pytest -s`` to see them)
and covers one headline guarantee of the package: the closed-form reduced
density matrices, the two reconstruction chains, the four-qubit
shrunken-support counterexample, the minimal-support reduction, invariance
under change of generating set, the exhaustive small-n uniqueness scan, and
the local-Clifford graph normal form.
"""

import itertools
import time

import numpy as np

from stabdet.f2_pauli import support
from stabdet.determination import (
    DETERMINED,
    RdmConstraintSet,
    COUNTEREXAMPLE_IMPOSTOR_GENERATORS,
    COUNTEREXAMPLE_SHARED_SUPPORTS,
    dense_partial_trace,
    forcing_chain_mixed,
    forcing_chain_pure,
    trace_distance,
    uniqueness_by_enumeration,
)
from stabdet.graph_state import Graph, canonical_generators, lc_to_graph, state_vector
from stabdet.stabilizer import (
    GeneratorSet,
    density_matrix,
    enumerate_group,
    minimal_support_set,
    recombine_generators,
    stabilizer_rdm,
)

from conftest import group_key, random_graph, random_invertible_f2, random_stabilizer_set


def _verdict(name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{tag}] {name}{suffix}")
    assert ok, f"{name}{suffix}"


def all_graphs(n):
    """Every simple graph on n vertices, by edge-set enumeration."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [e for k, e in enumerate(pairs) if mask >> k & 1])


def exact_rdms(g, supports=None):
    gens = canonical_generators(g)
    if supports is None:
        supports = [support(m) for m in gens.generators]
    return RdmConstraintSet.from_state(density_matrix(gens), supports, g.n)


def graph_corpus():
    """All graphs up to 4 vertices plus 100 random 5-vertex graphs."""
    corpus = [g for n in range(1, 5) for g in all_graphs(n)]
    rng = np.random.default_rng(2026)
    corpus.extend(random_graph(5, rng) for _ in range(100))
    return corpus


def test_closed_form_rdm_matches_dense_partial_trace():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 7))
        g = random_graph(n, rng)
        gens = canonical_generators(g)
        rho = density_matrix(gens)
        for m in gens.generators:
            omega = sorted(support(m))
            dev = np.max(np.abs(stabilizer_rdm(gens, omega)
                                - dense_partial_trace(rho, omega)))
            worst = max(worst, float(dev))
    elapsed = time.perf_counter() - start
    _verdict("closed-form RDM vs dense partial trace, 200 random graphs",
             worst < 1e-12 and elapsed < 30,
             f"max deviation {worst:.2e}, {elapsed:.1f}s")


def test_pure_reconstruction_over_graph_corpus():
    start = time.perf_counter()
    worst = 0.0
    for g in graph_corpus():
        report = forcing_chain_pure(g, canonical_generators(g), exact_rdms(g))
        assert report.status == DETERMINED, g.edges
        worst = max(worst, float(np.max(np.abs(report.state - state_vector(g)))))
    elapsed = time.perf_counter() - start
    _verdict("pure-state forcing chain recovers every corpus state vector",
             worst < 1e-9 and elapsed < 60,
             f"max deviation {worst:.2e}, {elapsed:.1f}s")


def test_mixed_reconstruction_over_graph_corpus():
    worst = 0.0
    for g in graph_corpus():
        report = forcing_chain_mixed(g, canonical_generators(g), exact_rdms(g))
        assert report.status == DETERMINED, g.edges
        rho = density_matrix(canonical_generators(g))
        worst = max(worst, float(np.max(np.abs(report.state - rho))))
        pairs = [step.indices for step in report.forcing_log]
        assert len(pairs) == len(set(pairs)), g.edges
        params = sum(1 if i == j else 2 for i, j in pairs)
        assert params == 4 ** g.n, g.edges
    _verdict("mixed forcing chain recovers every corpus projector, "
             "log covers all 4^n parameters once",
             worst < 1e-9, f"max deviation {worst:.2e}")


def test_shrunken_support_counterexample():
    g = Graph.path(4)
    rho_graph = density_matrix(canonical_generators(g))
    rho_other = density_matrix(
        GeneratorSet.from_strings(4, list(COUNTEREXAMPLE_IMPOSTOR_GENERATORS)))
    dist = trace_distance(rho_graph, rho_other)
    agree = max(
        float(np.max(np.abs(dense_partial_trace(rho_graph, sorted(w))
                            - dense_partial_trace(rho_other, sorted(w)))))
        for w in COUNTEREXAMPLE_SHARED_SUPPORTS)
    report = forcing_chain_mixed(g, canonical_generators(g), exact_rdms(g))
    _verdict("distinct states share the shrunken-support marginal family; "
             "the full family stays determining",
             dist > 0.1 and agree < 1e-12 and report.status == DETERMINED,
             f"trace distance {dist:.3f}, marginal deviation {agree:.2e}")


def test_minimal_support_reduction():
    p4 = minimal_support_set(canonical_generators(Graph.path(4)))
    ok = p4 == {frozenset({0, 1, 2}), frozenset({1, 2, 3})}
    for n in range(3, 7):
        strings = ["X" * n] + ["I" * j + "ZZ" + "I" * (n - 2 - j)
                               for j in range(n - 1)]
        gens = GeneratorSet.from_strings(n, strings)
        ok = ok and minimal_support_set(gens) == {frozenset(range(n))}
    _verdict("minimal support sets: two windows for the 4-path, "
             "one full window for GHZ(3..6)", ok)


def test_determination_survives_generator_recombination():
    g = Graph.path(4)
    gens = canonical_generators(g)
    rho = density_matrix(gens)
    rng = np.random.default_rng(307)
    all_ok = True
    for _ in range(50):
        new = recombine_generators(gens, random_invertible_f2(4, rng))
        rdms = RdmConstraintSet.from_state(
            rho, [support(m) for m in new.generators], 4)
        report = forcing_chain_mixed(g, new, rdms)
        all_ok = all_ok and report.status == DETERMINED
    _verdict("50 random invertible recombinations of the 4-path generators "
             "all remain determining", all_ok)


def test_exhaustive_uniqueness_scan_small_n():
    start = time.perf_counter()
    all_ok = True
    for n in (2, 3):
        for g in all_graphs(n):
            gens = canonical_generators(g)
            rho = density_matrix(gens)
            omegas = [support(m) for m in gens.generators]
            all_ok = all_ok and uniqueness_by_enumeration(rho, omegas, n)
    elapsed = time.perf_counter() - start
    _verdict("no other stabilizer state matches any graph state's marginal "
             "family at n=2,3 (exhaustive)",
             all_ok and elapsed < 300, f"{elapsed:.1f}s")


def test_local_clifford_graph_normal_form_round_trip():
    rng = np.random.default_rng(811)
    all_ok = True
    for _ in range(100):
        n = int(rng.integers(1, 6))
        gens = random_stabilizer_set(n, rng)
        graph, layer = lc_to_graph(gens)
        conj = GeneratorSet(tuple(layer.conjugate(m) for m in gens.generators), n)
        all_ok = all_ok and group_key(enumerate_group(conj)) == \
            group_key(enumerate_group(canonical_generators(graph)))
    _verdict("graph normal form: 100 random stabilizer sets conjugate onto "
             "their output graph's group", all_ok)
