import numpy as np
import pytest

from stabdet.f2_pauli import dense_matrix, format_pauli, identity, parse_pauli, support
from stabdet.stabilizer import (
    GeneratorSet,
    check_density_matrix,
    density_matrix,
    enumerate_group,
    enumerate_stabilizer_states,
    format_density_matrix,
    format_generator_file,
    generator_matrix,
    minimal_support_set,
    parse_density_matrix,
    parse_generator_file,
    recombine_generators,
    stabilizer_rdm,
    validate,
)
from stabdet.graph_state import Graph, canonical_generators

from conftest import (
    group_key,
    ptrace_by_summation,
    random_graph,
    random_invertible_f2,
    random_stabilizer_set,
)

GHZ3 = GeneratorSet.from_strings(3, ["XXX", "ZZI", "IZZ"])


def ghz_generators(n):
    strings = ["X" * n]
    for j in range(n - 1):
        strings.append("I" * j + "ZZ" + "I" * (n - 2 - j))
    return GeneratorSet.from_strings(n, strings)


def ghz_vector(n):
    vec = np.zeros(1 << n, dtype=complex)
    vec[0] = vec[-1] = 1 / np.sqrt(2)
    return vec


# --- validation ---

def test_validate_ghz3():
    assert validate(GHZ3).ok


def test_validate_dependent_set():
    report = validate(GeneratorSet.from_strings(2, ["XX", "YY", "ZZ"]))
    assert not report.ok
    assert not report.independent
    # the dependency realizes -I: XX * YY = -ZZ
    from stabdet.f2_pauli import multiply
    assert multiply(parse_pauli("XX"), parse_pauli("YY")) == parse_pauli("-ZZ")


def test_validate_anticommuting():
    report = validate(GeneratorSet.from_strings(1, ["X", "Z"]))
    assert not report.ok
    assert not report.commuting


def test_validate_imaginary_phase():
    from stabdet.f2_pauli import PauliOperator
    report = validate(GeneratorSet((PauliOperator(1, (0,), (1,)),), 1))
    assert not report.hermitian


# --- group enumeration ---

def test_enumerate_single_z():
    group = enumerate_group(GeneratorSet.from_strings(1, ["Z"]))
    assert group_key(group) == group_key([identity(1), parse_pauli("Z")])


def test_enumerate_ghz3_stabilizes_state():
    group = enumerate_group(GHZ3)
    assert len(group) == 8
    names = {format_pauli(m) for m in group}
    assert {"XXX", "ZZI", "IZZ", "ZIZ", "-YYX", "III"} <= names
    vec = ghz_vector(3)
    for m in group:
        assert np.allclose(dense_matrix(m) @ vec, vec)
    assert identity(3) in group
    assert parse_pauli("-III") not in group


def test_enumerate_empty_set():
    group = enumerate_group(GeneratorSet((), 2))
    assert group_key(group) == group_key([identity(2)])


# --- density matrices ---

def test_density_matrix_z():
    rho = density_matrix(GeneratorSet.from_strings(1, ["Z"]))
    assert np.allclose(rho, np.diag([1, 0]))


def test_density_matrix_ghz3_projector():
    vec = ghz_vector(3)
    assert np.max(np.abs(density_matrix(GHZ3) - np.outer(vec, vec.conj()))) < 1e-12


def test_density_matrix_impostor_rank2():
    rho = density_matrix(GeneratorSet.from_strings(4, ["XZII", "ZXZI", "IIZX"]))
    check_density_matrix(rho)
    # 3 generators on 4 qubits: rank 2^{4-3} = 2
    assert np.sum(np.linalg.eigvalsh(rho) > 1e-9) == 2


def test_density_matrix_rank_matches_generator_count():
    rng = np.random.default_rng(21)
    gens = random_stabilizer_set(4, rng)
    for l in range(5):
        partial = GeneratorSet(gens.generators[:l], 4)
        rho = density_matrix(partial)
        assert np.sum(np.linalg.eigvalsh(rho) > 1e-9) == 1 << (4 - l)


def test_group_elements_fix_projector():
    rng = np.random.default_rng(2)
    gens = random_stabilizer_set(3, rng)
    rho = density_matrix(gens)
    for m in enumerate_group(gens):
        assert np.max(np.abs(dense_matrix(m) @ rho - rho)) < 1e-12


# --- reduced density matrices ---

def test_rdm_ghz3():
    rho = stabilizer_rdm(GHZ3, [0, 1])
    assert np.allclose(rho, np.diag([0.5, 0, 0, 0.5]))


def test_rdm_full_set_is_density_matrix():
    assert np.allclose(stabilizer_rdm(GHZ3, [0, 1, 2]), density_matrix(GHZ3))


def test_rdm_matches_partial_trace_p4():
    gens = canonical_generators(Graph.path(4))
    rho = density_matrix(gens)
    got = stabilizer_rdm(gens, [0, 1, 2])
    want = ptrace_by_summation(rho, [0, 1, 2], 4)
    assert np.max(np.abs(got - want)) < 1e-12


def test_rdm_matches_partial_trace_random():
    rng = np.random.default_rng(17)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        gens = random_stabilizer_set(n, rng)
        rho = density_matrix(gens)
        size = int(rng.integers(1, n + 1))
        omega = sorted(rng.choice(n, size=size, replace=False).tolist())
        got = stabilizer_rdm(gens, omega)
        want = ptrace_by_summation(rho, omega, n)
        assert np.max(np.abs(got - want)) < 1e-12


def test_rdm_rejects_empty_omega():
    with pytest.raises(ValueError):
        stabilizer_rdm(GHZ3, [])


# --- recombination ---

def test_recombine_identity():
    out = recombine_generators(GHZ3, np.eye(3, dtype=np.uint8))
    assert out.generators == GHZ3.generators


def test_recombine_p4_product_support():
    gens = canonical_generators(Graph.path(4))
    r = np.eye(4, dtype=np.uint8)
    r[0, 2] = 1  # new generator 2 is M0 * M2
    out = recombine_generators(gens, r)
    assert support(out.generators[2]) == {0, 2, 3}


def test_recombine_preserves_group():
    rng = np.random.default_rng(31)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        gens = random_stabilizer_set(n, rng)
        out = recombine_generators(gens, random_invertible_f2(n, rng))
        assert group_key(enumerate_group(out)) == group_key(enumerate_group(gens))


def test_recombine_singular_raises():
    with pytest.raises(ValueError):
        recombine_generators(GHZ3, np.zeros((3, 3), dtype=np.uint8))


# --- minimal support sets ---

def test_minimal_support_ghz():
    for n in range(3, 7):
        assert minimal_support_set(ghz_generators(n)) == {frozenset(range(n))}


def test_minimal_support_p4():
    gens = canonical_generators(Graph.path(4))
    assert minimal_support_set(gens) == {frozenset({0, 1, 2}), frozenset({1, 2, 3})}


def test_minimal_support_antichain_unchanged():
    gens = GeneratorSet.from_strings(4, ["XZII", "IXZI", "IIXZ"])
    assert minimal_support_set(gens) == {frozenset({0, 1}), frozenset({1, 2}),
                                         frozenset({2, 3})}


def test_minimal_support_is_antichain_and_covers_dropped():
    rng = np.random.default_rng(41)
    for _ in range(10):
        gens = random_stabilizer_set(4, rng)
        kept = minimal_support_set(gens)
        for a in kept:
            assert not any(a < b for b in kept)
        for m in gens.generators:
            assert any(support(m) <= b for b in kept)


# --- exhaustive state enumeration ---

def test_enumerate_states_n1():
    states = enumerate_stabilizer_states(1)
    assert len(states) == 6
    eigvecs = []
    for mat in (np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]),
                np.array([[1, 0], [0, -1]])):
        for sign in (1, -1):
            w, v = np.linalg.eigh(sign * mat)
            vec = v[:, np.argmax(w)]
            eigvecs.append(np.outer(vec, vec.conj()))
    for target in eigvecs:
        assert any(np.max(np.abs(s - target)) < 1e-9 for s in states)


def test_enumerate_states_double_count_oracle():
    forward = enumerate_stabilizer_states(2)
    backward = enumerate_stabilizer_states(2, _reverse_order=True)
    assert len(forward) == len(backward) == 60
    keys = {np.round(s, 9).tobytes() for s in forward}
    assert keys == {np.round(s, 9).tobytes() for s in backward}


def test_enumerated_states_are_pure():
    for s in enumerate_stabilizer_states(2):
        assert np.max(np.abs(s @ s - s)) < 1e-12
        assert abs(np.trace(s) - 1) < 1e-12


def test_enumerate_states_cap():
    with pytest.raises(ValueError):
        enumerate_stabilizer_states(4)


# --- text formats ---

def test_generator_file_round_trip():
    text = format_generator_file(GHZ3)
    assert parse_generator_file(text).generators == GHZ3.generators


def test_generator_file_rejects_wrong_width():
    with pytest.raises(ValueError):
        parse_generator_file("3\nXX\n")


def test_density_matrix_text_round_trip():
    rho = density_matrix(GHZ3)
    again = parse_density_matrix(format_density_matrix(rho))
    assert np.max(np.abs(again - rho)) < 1e-11


def test_density_matrix_text_rejects_bad_header():
    with pytest.raises(ValueError):
        parse_density_matrix("4\n1 0 0 0\n")
