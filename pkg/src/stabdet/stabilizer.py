"""Stabilizer formalisms: validation, group enumeration, closed-form density
matrices and reduced density matrices, generator recombination, and minimal
support sets.

A set of l <= n pairwise commuting, independent, Hermitian Pauli operators
generates an Abelian group of 2^l elements that never contains minus the
identity: independence means only the trivial exponent vector reproduces the
identity binary part, and that product is +I because all phases are real and
the factors commute.  ``validate`` asserts exactly those three conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .f2_pauli import (
    DENSE_MATRIX_CAP,
    PauliOperator,
    dense_matrix,
    f2_rank,
    format_pauli,
    identity,
    multiply,
    commutes,
    parse_pauli,
    support,
    restrict,
)

ENUMERATION_CAP = 20

# DensityMatrix numeric invariants.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-9


@dataclass(frozen=True)
class GeneratorSet:
    """An ordered tuple of Pauli operators on a common qubit count."""

    generators: tuple
    n: int

    def __post_init__(self):
        for g in self.generators:
            if g.n != self.n:
                raise ValueError("all generators must act on the same qubit count")

    @property
    def l(self) -> int:
        return len(self.generators)

    @classmethod
    def from_strings(cls, n: int, strings: Iterable[str]) -> "GeneratorSet":
        gens = tuple(parse_pauli(s) for s in strings)
        return cls(gens, n)


@dataclass
class ValidationReport:
    commuting: bool
    independent: bool
    hermitian: bool
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.commuting and self.independent and self.hermitian


def generator_matrix(gens: GeneratorSet) -> np.ndarray:
    """2n x l binary matrix; column s is (u_s, v_s) stacked, z-block on top."""
    n, l = gens.n, gens.l
    m = np.zeros((2 * n, l), dtype=np.uint8)
    for s, g in enumerate(gens.generators):
        m[:n, s] = g.u
        m[n:, s] = g.v
    return m


def validate(gens: GeneratorSet) -> ValidationReport:
    """Check commutativity, GF(2) independence and Hermiticity of a generator set."""
    problems = []
    hermitian = True
    for s, g in enumerate(gens.generators):
        if not g.is_hermitian:
            hermitian = False
            problems.append(f"generator {s} has an imaginary phase")
    commuting = True
    for s in range(gens.l):
        for t in range(s + 1, gens.l):
            if not commutes(gens.generators[s], gens.generators[t]):
                commuting = False
                problems.append(f"generators {s} and {t} anticommute")
    independent = f2_rank(generator_matrix(gens)) == gens.l if gens.l else True
    if not independent:
        problems.append("binary parts are linearly dependent over GF(2)")
    return ValidationReport(commuting, independent, hermitian, problems)


def _require_valid(gens: GeneratorSet):
    report = validate(gens)
    if not report.ok:
        raise ValueError("invalid generator set: " + "; ".join(report.problems))


def enumerate_group(gens: GeneratorSet) -> list:
    """All 2^l products of the generators, phases exact.

    The exponent vectors are walked in Gray-code order so that each element is
    a single multiplication away from its predecessor; the output order is
    implementation-defined and results should be compared as sets.
    """
    _require_valid(gens)
    if gens.l > ENUMERATION_CAP:
        raise ValueError(f"enumeration cap exceeded: l={gens.l} > {ENUMERATION_CAP}")
    current = identity(gens.n)
    out = [current]
    prev_gray = 0
    for k in range(1, 1 << gens.l):
        gray = k ^ (k >> 1)
        flipped = (gray ^ prev_gray).bit_length() - 1
        current = multiply(current, gens.generators[flipped])
        out.append(current)
        prev_gray = gray
    return out


def density_matrix(gens: GeneratorSet, cap: int = DENSE_MATRIX_CAP) -> np.ndarray:
    """2^{-n} times the sum of all group elements.

    For l = n this is the rank-1 projector onto the stabilizer state; for
    l < n it is the maximally mixed state on the joint +1 eigenspace, of rank
    2^{n-l}.
    """
    if gens.n > cap:
        raise ValueError(f"dense rendering cap exceeded: n={gens.n} > {cap}")
    dim = 1 << gens.n
    rho = np.zeros((dim, dim), dtype=complex)
    for m in enumerate_group(gens):
        rho += dense_matrix(m, cap=cap)
    return rho / dim


def stabilizer_rdm(gens: GeneratorSet, omega: Iterable[int],
                   cap: int = DENSE_MATRIX_CAP) -> np.ndarray:
    """Reduced density matrix on omega: 2^{-|omega|} times the sum of the
    restrictions of all group elements supported inside omega."""
    omega = frozenset(int(j) for j in omega)
    if not omega:
        raise ValueError("empty index set")
    if any(j < 0 or j >= gens.n for j in omega):
        raise ValueError(f"index out of range for {gens.n} qubits: {sorted(omega)}")
    if len(omega) > cap:
        raise ValueError(f"dense rendering cap exceeded: |omega|={len(omega)} > {cap}")
    dim = 1 << len(omega)
    rho = np.zeros((dim, dim), dtype=complex)
    for m in enumerate_group(gens):
        if support(m) <= omega:
            rho += dense_matrix(restrict(m, omega), cap=cap)
    return rho / dim


def recombine_generators(gens: GeneratorSet, r_matrix) -> GeneratorSet:
    """New generator j is the product over i of gens[i]**R[i][j].

    R must be an invertible l x l matrix over GF(2); the recombined set
    generates the same group.
    """
    _require_valid(gens)
    r = np.array(r_matrix, dtype=np.uint8) % 2
    l = gens.l
    if r.shape != (l, l):
        raise ValueError(f"recombination matrix must be {l}x{l}")
    if f2_rank(r) != l:
        raise ValueError("recombination matrix is singular over GF(2)")
    new = []
    for j in range(l):
        prod = identity(gens.n)
        for i in range(l):
            if r[i, j]:
                prod = multiply(prod, gens.generators[i])
        new.append(prod)
    return GeneratorSet(tuple(new), gens.n)


def minimal_support_set(gens: GeneratorSet) -> set:
    """Supports of the generators retained after dropping dominated ones.

    A support is dropped when it is a strict subset of another generator's
    support; among equal supports only the lowest generator index is kept
    (the set return type deduplicates them anyway).
    """
    supports = [support(g) for g in gens.generators]
    retained = set()
    for s, sup in enumerate(supports):
        if any(sup < other for other in supports):
            continue
        retained.add(sup)
    return retained


def _all_nontrivial_paulis(n: int) -> list:
    """All 4^n - 1 unsigned non-identity Pauli binary parts on n qubits."""
    out = []
    for code in range(1, 1 << (2 * n)):
        u = tuple((code >> (2 * j)) & 1 for j in range(n))
        v = tuple((code >> (2 * j + 1)) & 1 for j in range(n))
        out.append(PauliOperator(0, u, v))
    return out


def enumerate_stabilizer_states(n: int, _reverse_order: bool = False) -> list:
    """Every distinct pure n-qubit stabilizer state as a dense projector.

    Enumerates all maximal commuting independent unsigned generator tuples,
    deduplicates by group span, then attaches every sign pattern.  The final
    projector-level deduplication key rounds entries to 1e-9.
    ``_reverse_order`` only changes the internal candidate order; it exists so
    tests can recount independently.
    """
    if n > 3:
        raise ValueError("exhaustive enumeration is capped at n = 3")
    candidates = _all_nontrivial_paulis(n)
    if _reverse_order:
        candidates = candidates[::-1]

    spans_seen = set()
    generator_tuples = []

    def span_key(ops):
        group = enumerate_group(GeneratorSet(tuple(ops), n))
        return frozenset((m.u, m.v) for m in group)

    def extend(chosen, start):
        if len(chosen) == n:
            key = span_key(chosen)
            if key not in spans_seen:
                spans_seen.add(key)
                generator_tuples.append(tuple(chosen))
            return
        for k in range(start, len(candidates)):
            cand = candidates[k]
            if all(commutes(cand, c) for c in chosen):
                stacked = generator_matrix(GeneratorSet(tuple(chosen) + (cand,), n))
                if f2_rank(stacked) == len(chosen) + 1:
                    extend(chosen + [cand], k + 1)

    extend([], 0)

    eye = np.eye(1 << n, dtype=complex)
    states = []
    seen = set()
    for gens in generator_tuples:
        dense = [dense_matrix(g) for g in gens]
        for signs in range(1 << n):
            proj = eye
            for i, d in enumerate(dense):
                sign = -1 if (signs >> i) & 1 else 1
                proj = proj @ (eye + sign * d) / 2
            key = np.round(proj, 9).tobytes()
            if key not in seen:
                seen.add(key)
                states.append(proj)
    return states


def check_density_matrix(rho: np.ndarray) -> None:
    """Assert the numeric density-matrix invariants; raises ValueError."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
        raise ValueError("matrix is not Hermitian")
    if abs(np.trace(rho).real - 1) > TRACE_TOL or abs(np.trace(rho).imag) > TRACE_TOL:
        raise ValueError("trace is not 1")
    if np.min(np.linalg.eigvalsh(rho)) < -PSD_TOL:
        raise ValueError("matrix has a negative eigenvalue")


# ---------------------------------------------------------------------------
# Text formats.
# ---------------------------------------------------------------------------

def parse_generator_file(text: str) -> GeneratorSet:
    """Line 1 is the qubit count, then one Pauli string per line."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty generator file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"line 1: expected qubit count, got {lines[0]!r}") from None
    gens = []
    for i, ln in enumerate(lines[1:], start=2):
        op = parse_pauli(ln)
        if op.n != n:
            raise ValueError(f"line {i}: operator acts on {op.n} qubits, expected {n}")
        gens.append(op)
    return GeneratorSet(tuple(gens), n)


def format_generator_file(gens: GeneratorSet) -> str:
    lines = [str(gens.n)]
    lines.extend(format_pauli(g) for g in gens.generators)
    return "\n".join(lines) + "\n"


def _format_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}j"


def format_density_matrix(rho: np.ndarray) -> str:
    """Header line 'dim=<2^k>' then a row-major text grid of 're+imj' entries."""
    lines = [f"dim={rho.shape[0]}"]
    for row in rho:
        lines.append(" ".join(_format_complex(z) for z in row))
    return "\n".join(lines) + "\n"


def parse_density_matrix(text: str) -> np.ndarray:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("dim="):
        raise ValueError("expected a 'dim=<2^k>' header line")
    dim = int(lines[0][4:])
    if len(lines) - 1 != dim:
        raise ValueError(f"expected {dim} matrix rows, got {len(lines) - 1}")
    rho = np.zeros((dim, dim), dtype=complex)
    for i, ln in enumerate(lines[1:]):
        tokens = ln.split()
        if len(tokens) != dim:
            raise ValueError(f"row {i}: expected {dim} entries, got {len(tokens)}")
        rho[i] = [complex(t) for t in tokens]
    return rho
