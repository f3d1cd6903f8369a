"""Reconstruction of graph states from the reduced density matrices on the
supports of a generating set, with independent oracles and the explicit
4-qubit counterexample showing that shrunken supports are not enough.

The two forcing chains execute the uniqueness arguments as algorithms: every
amplitude (pure chain) or matrix entry (mixed chain) of the candidate state is
pinned from the constraints one step at a time, and each step is recorded in a
forcing log.  Any constraint violation beyond tolerance flips the result to
Inconsistent with the first violated rule named; a constraint family that
cannot cover the needed supports yields Underdetermined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
import scipy.linalg

from .f2_pauli import f2_rank, identity, multiply, support
from .stabilizer import (
    GeneratorSet,
    density_matrix,
    parse_density_matrix,
    format_density_matrix,
    validate,
)
from .graph_state import Graph, canonical_generators, quadratic_form, sign_vector

DEFAULT_TOL = 1e-9

DETERMINED = "Determined"
INCONSISTENT = "Inconsistent"
UNDERDETERMINED = "Underdetermined"

RULE_NORMALIZATION = "trace-normalization"
RULE_DIAGONAL = "diagonal-uniform"
RULE_MAGNITUDE = "magnitude-equality"
RULE_TRANSLATION = "sign-translation"
RULE_MINOR_CHAIN = "minor-chain"
RULE_MINOR_COMPLETION = "minor-completion"
RULE_UNUSED_ENTRY = "unused-entry"
RULE_MISSING_SUPPORT = "missing-support"
RULE_BASIS = "x-parts-not-a-basis"


class MinorViolation(ValueError):
    """A required principal minor is negative beyond tolerance."""


@dataclass(frozen=True)
class ForcingStep:
    indices: tuple
    rule: str
    generator: Optional[int] = None


@dataclass
class ReconstructionReport:
    status: str
    state: Optional[np.ndarray]
    forcing_log: list = field(default_factory=list)
    max_residual: float = 0.0
    message: str = ""


@dataclass
class RdmConstraintSet:
    """Mapping from qubit-index subsets to density matrices of matching size."""

    n: int
    constraints: dict

    def __post_init__(self):
        normalized = {}
        for omega, rho in self.constraints.items():
            key = frozenset(int(j) for j in omega)
            if not key:
                raise ValueError("empty index set")
            if any(j < 0 or j >= self.n for j in key):
                raise ValueError(f"index out of range for {self.n} qubits: {sorted(key)}")
            rho = np.asarray(rho, dtype=complex)
            dim = 1 << len(key)
            if rho.shape != (dim, dim):
                raise ValueError(f"constraint on {sorted(key)} must be {dim}x{dim}")
            normalized[key] = rho
        self.constraints = normalized

    @classmethod
    def from_state(cls, rho: np.ndarray, omegas: Iterable, n: int) -> "RdmConstraintSet":
        return cls(n, {frozenset(w): dense_partial_trace(rho, w) for w in omegas})


def dense_partial_trace(rho: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Standard partial trace over the complement of ``keep``."""
    rho = np.asarray(rho)
    dim = rho.shape[0]
    n = dim.bit_length() - 1
    if rho.shape != (dim, dim) or (1 << n) != dim:
        raise ValueError("input must be a square matrix of power-of-two size")
    keep = sorted(set(int(j) for j in keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"bad index set {keep} for {n} qubits")
    arr = rho.reshape((2,) * (2 * n))
    m = n
    for j in [q for q in range(n) if q not in keep][::-1]:
        arr = np.trace(arr, axis1=j, axis2=j + m)
        m -= 1
    d = 1 << len(keep)
    return arr.reshape(d, d)


# ---------------------------------------------------------------------------
# Shared setup for the forcing chains.
# ---------------------------------------------------------------------------

def _index_bits(index: int, n: int) -> tuple:
    return tuple((index >> (n - 1 - j)) & 1 for j in range(n))


def _bits_index(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | (int(b) & 1)
    return out


def _restrict_index(index: int, omega_sorted: list, n: int) -> int:
    bits = _index_bits(index, n)
    return _bits_index(bits[j] for j in omega_sorted)


def _check_graph_group(g: Graph, gens: GeneratorSet) -> None:
    """Require that the generators lie in (and hence generate) the graph
    state's stabilizer group."""
    report = validate(gens)
    if not report.ok:
        raise ValueError("invalid generator set: " + "; ".join(report.problems))
    if gens.l != gens.n or gens.n != g.n:
        raise ValueError("need a full generating set on the graph's qubit count")
    canon = canonical_generators(g).generators
    for s, m in enumerate(gens.generators):
        if not any(m.v):
            raise ValueError(f"generator {s} has zero x-part; graph-form input required")
        prod = identity(g.n)
        for t in range(g.n):
            if m.v[t]:
                prod = multiply(prod, canon[t])
        if prod != m:
            raise ValueError(f"generator {s} is not an element of the graph's group")


@dataclass
class _ChainSetup:
    n: int
    omegas: list            # sorted index list per generator
    r_vectors: list         # x-part bit tuple per generator
    r_indices: list         # x-part as basis index per generator
    matrices: list          # constraint matrix restricted to each omega
    coords: list            # per basis index: exponent tuple in the r-basis
    signs: np.ndarray       # (-1)^{f} per basis index


def _prepare_chain(g: Graph, gens: GeneratorSet, rdms: RdmConstraintSet):
    """Common validation; returns (_ChainSetup, None) or (None, failure report)."""
    _check_graph_group(g, gens)
    if rdms.n != g.n:
        raise ValueError("constraint set qubit count does not match the graph")
    n = g.n

    omegas, matrices = [], []
    for s, m in enumerate(gens.generators):
        omega = support(m)
        exact = rdms.constraints.get(omega)
        if exact is not None:
            matrices.append(exact)
        else:
            superset = min((w for w in rdms.constraints if w >= omega),
                           key=lambda w: (len(w), sorted(w)), default=None)
            if superset is None:
                report = ReconstructionReport(
                    UNDERDETERMINED, None,
                    [ForcingStep((s,), RULE_MISSING_SUPPORT, s)],
                    message=f"no constraint covers support {sorted(omega)} "
                            f"of generator {s}")
                return None, report
            full = rdms.constraints[superset]
            inner = [sorted(superset).index(j) for j in sorted(omega)]
            matrices.append(dense_partial_trace(full, inner))
        omegas.append(sorted(omega))

    r_vectors = [m.v for m in gens.generators]
    basis = np.array(r_vectors, dtype=np.uint8).T
    if f2_rank(basis) != n:
        report = ReconstructionReport(
            UNDERDETERMINED, None, [ForcingStep((), RULE_BASIS)],
            message="generator x-parts do not span the full space")
        return None, report

    # Exponent tuple of every basis index in the r-basis, by direct expansion.
    coords = [None] * (1 << n)
    for code in range(1 << n):
        acc = 0
        for s in range(n):
            if (code >> s) & 1:
                acc ^= _bits_index(r_vectors[s])
        x = tuple((code >> s) & 1 for s in range(n))
        coords[acc] = x
    setup = _ChainSetup(
        n=n,
        omegas=omegas,
        r_vectors=list(r_vectors),
        r_indices=[_bits_index(v) for v in r_vectors],
        matrices=matrices,
        coords=coords,
        signs=sign_vector(g),
    )
    return setup, None


def _forcing_order(setup: _ChainSetup):
    """Basis indices ordered by exponent weight in the r-basis, then by index;
    the highest set exponent is the generator used to force each one."""
    items = []
    for idx in range(1 << setup.n):
        x = setup.coords[idx]
        weight = sum(x)
        top = max((s for s in range(setup.n) if x[s]), default=None)
        items.append((weight, idx, top))
    items.sort(key=lambda t: (t[0], t[1]))
    return items


def _expected_translation(setup: _ChainSetup, s: int, idx: int) -> float:
    """Target value of the constraint entry that links idx to idx + r_s."""
    other = idx ^ setup.r_indices[s]
    scale = 1.0 / (1 << len(setup.omegas[s]))
    return scale * setup.signs[idx] * setup.signs[other]


def _constraint_entries(setup: _ChainSetup, s: int, idx: int):
    """(diag at idx, diag at idx + r_s, off-diagonal entry) of constraint s."""
    omega = setup.omegas[s]
    i_w = _restrict_index(idx, omega, setup.n)
    j_w = _restrict_index(idx ^ setup.r_indices[s], omega, setup.n)
    mat = setup.matrices[s]
    return mat[i_w, i_w], mat[j_w, j_w], mat[i_w, j_w]


# ---------------------------------------------------------------------------
# Pure-state forcing chain.
# ---------------------------------------------------------------------------

def forcing_chain_pure(g: Graph, gens: GeneratorSet, rdms: RdmConstraintSet,
                       tol: float = DEFAULT_TOL) -> ReconstructionReport:
    """Reconstruct the graph state's amplitudes from the constraint family.

    Each amplitude index is expanded in the basis of generator x-parts and
    forced by stripping the highest set exponent first; the step checks the
    diagonal entries and the linking off-diagonal entry of the constraint on
    that generator's support.
    """
    setup, failure = _prepare_chain(g, gens, rdms)
    if failure is not None:
        return failure
    n = setup.n
    log = []
    residual = 0.0

    for weight, idx, top in _forcing_order(setup):
        if top is None:
            log.append(ForcingStep((0, 0), RULE_NORMALIZATION))
            continue
        d_i, d_j, off = _constraint_entries(setup, top, idx)
        scale = 1.0 / (1 << len(setup.omegas[top]))
        for value, tag in ((d_i, RULE_DIAGONAL), (d_j, RULE_DIAGONAL)):
            dev = abs(value - scale)
            residual = max(residual, dev)
            if dev > tol:
                log.append(ForcingStep((idx, idx ^ setup.r_indices[top]), tag, top))
                return ReconstructionReport(
                    INCONSISTENT, None, log, dev,
                    f"diagonal entry deviates by {dev:.3g} on the support of "
                    f"generator {top}")
        expected = _expected_translation(setup, top, idx)
        dev = abs(off - expected)
        residual = max(residual, dev)
        if dev > tol:
            log.append(ForcingStep((idx, idx ^ setup.r_indices[top]),
                                   RULE_TRANSLATION, top))
            return ReconstructionReport(
                INCONSISTENT, None, log, dev,
                f"translation entry deviates by {dev:.3g} on the support of "
                f"generator {top}")
        log.append(ForcingStep((idx, idx ^ setup.r_indices[top]),
                               RULE_TRANSLATION, top))

    state = setup.signs.astype(complex) / math.sqrt(1 << n)
    report = ReconstructionReport(DETERMINED, state, log, residual)
    _check_unused_entries(setup, state=np.outer(state, state.conj()),
                          report=report, tol=tol)
    return report


# ---------------------------------------------------------------------------
# Mixed-state forcing chain.
# ---------------------------------------------------------------------------

def forcing_chain_mixed(g: Graph, gens: GeneratorSet, rdms: RdmConstraintSet,
                        tol: float = DEFAULT_TOL) -> ReconstructionReport:
    """Pin every entry of a candidate Hermitian matrix from the constraints.

    Stage 1 pins the diagonal (diagonal sums, translation relations and trace
    normalization), stage 2 pins the entries one generator-translation apart
    (magnitude equality plus sign alignment), stage 3 pins the zero row by a
    chain of 3x3 principal minors over partial sums, and stage 4 completes the
    remaining entries with one more minor each.  Every one of the 4^n real
    parameters is logged exactly once (one log step per diagonal entry, one
    per unordered off-diagonal pair).
    """
    setup, failure = _prepare_chain(g, gens, rdms)
    if failure is not None:
        return failure
    n = setup.n
    dim = 1 << n
    log = []
    residual = 0.0
    rho = np.zeros((dim, dim), dtype=complex)

    def fail(indices, rule, generator, dev, what):
        log.append(ForcingStep(indices, rule, generator))
        return ReconstructionReport(INCONSISTENT, None, log, dev, what)

    # Stage 1: the diagonal.
    order = _forcing_order(setup)
    for weight, idx, top in order:
        if top is None:
            rho[idx, idx] = 1.0 / dim
            log.append(ForcingStep((0, 0), RULE_NORMALIZATION))
            continue
        d_i, d_j, _ = _constraint_entries(setup, top, idx)
        scale = 1.0 / (1 << len(setup.omegas[top]))
        for value in (d_i, d_j):
            dev = abs(value - scale)
            residual = max(residual, dev)
            if dev > tol:
                return fail((idx, idx), RULE_DIAGONAL, top, dev,
                            f"diagonal sum deviates by {dev:.3g} on the support "
                            f"of generator {top}")
        rho[idx, idx] = 1.0 / dim
        log.append(ForcingStep((idx, idx), RULE_DIAGONAL, top))

    # Stage 2: entries one generator-translation apart.
    for s in range(n):
        rs = setup.r_indices[s]
        scale = 1.0 / (1 << len(setup.omegas[s]))
        for i in range(dim):
            j = i ^ rs
            if j < i:
                continue
            _, _, off = _constraint_entries(setup, s, i)
            dev = abs(abs(off) - scale)
            residual = max(residual, dev)
            if dev > tol:
                return fail((i, j), RULE_MAGNITUDE, s, dev,
                            f"off-diagonal magnitude deviates by {dev:.3g} on "
                            f"the support of generator {s}")
            expected = _expected_translation(setup, s, i)
            dev = abs(off - expected)
            residual = max(residual, dev)
            if dev > tol:
                return fail((i, j), RULE_TRANSLATION, s, dev,
                            f"off-diagonal sign deviates by {dev:.3g} on the "
                            f"support of generator {s}")
            value = setup.signs[i] * setup.signs[j] / dim
            rho[i, j] = value
            rho[j, i] = value
            log.append(ForcingStep((i, j), RULE_TRANSLATION, s))

    pinned = {(i, i) for i in range(dim)}
    pinned.update((min(i, i ^ rs), max(i, i ^ rs))
                  for rs in setup.r_indices for i in range(dim))

    def minor_pin(a: int, b: int, j: int) -> complex:
        """Pin rho[a, j] from the known entries rho[a, b] and rho[b, j]; the
        3x3 principal minor on rows {a, b, j} is non-negative only at the
        returned value.  A negative minor at that value means the previously
        pinned entries were inconsistent."""
        value = rho[a, b] * rho[b, j] / rho[b, b]
        sub = np.array([
            [rho[a, a], rho[a, b], value],
            [rho[b, a], rho[b, b], rho[b, j]],
            [np.conj(value), rho[j, b], rho[j, j]],
        ])
        det = np.linalg.det(sub).real
        if det < -tol:
            raise MinorViolation(
                f"principal minor on rows {sorted({a, b, j})} is {det:.3g}")
        return value

    # Stage 3: the zero row, by chained minors over partial sums.
    for weight, j, top in order:
        if weight < 2:
            continue
        x = setup.coords[j]
        ks = [s for s in range(n) if x[s]]
        partial = 0
        for k in ks[:-1]:
            partial ^= setup.r_indices[k]
        value = minor_pin(0, partial, j)
        rho[0, j] = value
        rho[j, 0] = np.conj(value)
        log.append(ForcingStep((0, j), RULE_MINOR_CHAIN, ks[-1]))
        pinned.add((0, j))

    # Stage 4: everything else, one minor through the zero row each.
    for i in range(1, dim):
        for j in range(i + 1, dim):
            if (i, j) in pinned:
                continue
            value = minor_pin(i, 0, j)
            rho[i, j] = value
            rho[j, i] = np.conj(value)
            log.append(ForcingStep((i, j), RULE_MINOR_COMPLETION))

    report = ReconstructionReport(DETERMINED, rho, log, residual)
    _check_unused_entries(setup, state=rho, report=report, tol=tol)
    return report


def _check_unused_entries(setup: _ChainSetup, state: np.ndarray,
                          report: ReconstructionReport, tol: float) -> None:
    """Final hypothesis check: every constraint matrix must equal the marginal
    of the reconstructed state, including entries the chain never touched."""
    for s, mat in enumerate(setup.matrices):
        target = dense_partial_trace(state, setup.omegas[s])
        dev = float(np.max(np.abs(mat - target)))
        report.max_residual = max(report.max_residual, dev)
        if dev > tol:
            report.status = INCONSISTENT
            report.state = None
            report.forcing_log.append(ForcingStep((s,), RULE_UNUSED_ENTRY, s))
            report.message = (f"constraint on the support of generator {s} "
                              f"deviates by {dev:.3g} outside the forcing chain")
            return


# ---------------------------------------------------------------------------
# Independent analysis oracles.
# ---------------------------------------------------------------------------

KERNEL_CAP = 6


@dataclass
class KernelBasis:
    """Orthonormal (Hilbert-Schmidt) basis of traceless Hermitian matrices
    whose partial traces onto every given subset vanish."""

    n: int
    elements: list

    @property
    def dimension(self) -> int:
        return len(self.elements)


def _hermitian_basis(n: int):
    """Hilbert-Schmidt orthonormal basis of the real space of Hermitian
    2^n x 2^n matrices: diagonal units, symmetric and antisymmetric pairs."""
    dim = 1 << n
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for i in range(dim):
        m = np.zeros((dim, dim), dtype=complex)
        m[i, i] = 1.0
        yield m
    for i in range(dim):
        for j in range(i + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[i, j] = inv_sqrt2
            m[j, i] = inv_sqrt2
            yield m
            m = np.zeros((dim, dim), dtype=complex)
            m[i, j] = -1j * inv_sqrt2
            m[j, i] = 1j * inv_sqrt2
            yield m


def rdm_kernel(n: int, omegas: Iterable) -> KernelBasis:
    """Basis of the space of Hermitian perturbations invisible to the given
    marginals: trace zero and vanishing partial trace onto every subset."""
    if n > KERNEL_CAP:
        raise ValueError(f"kernel analysis capped at n = {KERNEL_CAP}")
    omegas = [sorted(set(int(j) for j in w)) for w in omegas]
    for w in omegas:
        if not w or w[0] < 0 or w[-1] >= n:
            raise ValueError(f"bad index set {w} for {n} qubits")
    basis = list(_hermitian_basis(n))
    columns = []
    for b in basis:
        col = [np.trace(b).real]
        for w in omegas:
            pt = dense_partial_trace(b, w)
            col.extend(pt.real.ravel())
            col.extend(pt.imag.ravel())
        columns.append(col)
    a = np.array(columns).T
    null = scipy.linalg.null_space(a)
    elements = []
    for k in range(null.shape[1]):
        m = sum(c * b for c, b in zip(null[:, k], basis))
        elements.append(m)
    return KernelBasis(n, elements)


def uniqueness_by_enumeration(target: np.ndarray, omegas: Iterable,
                              n: int, tol: float = 1e-9) -> bool:
    """True iff no other pure stabilizer state shares all marginals on the
    given subsets; exhaustive over the full n-qubit stabilizer-state list."""
    from .stabilizer import enumerate_stabilizer_states
    omegas = [sorted(set(int(j) for j in w)) for w in omegas]
    target = np.asarray(target, dtype=complex)
    target_marginals = [dense_partial_trace(target, w) for w in omegas]
    for state in enumerate_stabilizer_states(n):
        if np.max(np.abs(state - target)) < 1e-12:
            continue
        if all(np.max(np.abs(dense_partial_trace(state, w) - t)) < tol
               for w, t in zip(omegas, target_marginals)):
            return False
    return True


# ---------------------------------------------------------------------------
# The 4-qubit counterexample.
# ---------------------------------------------------------------------------

COUNTEREXAMPLE_IMPOSTOR_GENERATORS = ("XZII", "ZXZI", "IIZX")
COUNTEREXAMPLE_SHARED_SUPPORTS = ({0, 1, 2}, {0, 3}, {1, 3}, {2, 3})


@dataclass
class CounterexampleReport:
    trace_distance: float
    shared_supports: dict          # support -> max marginal deviation
    distinguishing_supports: dict  # support -> max marginal deviation
    full_set_status: str
    states_differ: bool
    marginals_agree: bool
    full_set_determined: bool

    @property
    def all_pass(self) -> bool:
        return self.states_differ and self.marginals_agree and self.full_set_determined


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    eigs = np.linalg.eigvalsh(np.asarray(a) - np.asarray(b))
    return 0.5 * float(np.sum(np.abs(eigs)))


def verify_counterexample(tol: float = DEFAULT_TOL) -> CounterexampleReport:
    """Compare the 4-qubit path graph state with the rank-2 mixed state of the
    dropped-generator set: they differ, yet agree on the marginals of the
    shrunken support family; the full support family still determines the
    graph state."""
    g = Graph.path(4)
    gens = canonical_generators(g)
    rho_g = density_matrix(gens)
    impostor = GeneratorSet.from_strings(4, COUNTEREXAMPLE_IMPOSTOR_GENERATORS)
    rho_i = density_matrix(impostor)

    dist = trace_distance(rho_g, rho_i)
    shared = {}
    for w in COUNTEREXAMPLE_SHARED_SUPPORTS:
        dev = float(np.max(np.abs(dense_partial_trace(rho_g, w)
                                  - dense_partial_trace(rho_i, w))))
        shared[frozenset(w)] = dev

    distinguishing = {}
    for m in gens.generators:
        w = support(m)
        dev = float(np.max(np.abs(dense_partial_trace(rho_g, w)
                                  - dense_partial_trace(rho_i, w))))
        distinguishing[w] = dev

    full_supports = [support(m) for m in gens.generators]
    rdms = RdmConstraintSet.from_state(rho_g, full_supports, 4)
    report = forcing_chain_mixed(g, gens, rdms, tol=tol)

    return CounterexampleReport(
        trace_distance=dist,
        shared_supports=shared,
        distinguishing_supports=distinguishing,
        full_set_status=report.status,
        states_differ=dist > 0.1,
        marginals_agree=all(dev < 1e-12 for dev in shared.values()),
        full_set_determined=report.status == DETERMINED,
    )


# ---------------------------------------------------------------------------
# Constraint file format.
# ---------------------------------------------------------------------------

def parse_rdm_file(text: str, n: int) -> RdmConstraintSet:
    """Repeated blocks: a line 'omega: i,j,k' followed by a density-matrix
    grid in the standard text format."""
    lines = text.splitlines()
    constraints = {}
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        if not line.startswith("omega:"):
            raise ValueError(f"line {i + 1}: expected 'omega: ...', got {line!r}")
        try:
            omega = frozenset(int(tok) for tok in line[6:].split(","))
        except ValueError:
            raise ValueError(f"line {i + 1}: bad index list {line!r}") from None
        i += 1
        while i < len(lines) and not lines[i].strip():
            i += 1
        if i >= len(lines) or not lines[i].strip().startswith("dim="):
            raise ValueError(f"line {i + 1}: expected 'dim=<2^k>' header")
        dim = int(lines[i].strip()[4:])
        block = lines[i:i + dim + 1]
        constraints[omega] = parse_density_matrix("\n".join(block))
        i += dim + 1
    return RdmConstraintSet(n, constraints)


def format_rdm_file(rdms: RdmConstraintSet) -> str:
    blocks = []
    for omega in sorted(rdms.constraints, key=lambda w: (len(w), sorted(w))):
        header = "omega: " + ",".join(str(j) for j in sorted(omega))
        blocks.append(header + "\n" + format_density_matrix(rdms.constraints[omega]))
    return "\n".join(blocks)
