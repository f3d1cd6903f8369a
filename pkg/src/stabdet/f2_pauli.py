"""Pauli operators in binary symplectic form, plus GF(2) linear algebra.

An n-qubit Pauli operator is a phase (one of 1, i, -1, -i, stored exactly as
an exponent of i) together with two length-n bit vectors ``u`` (z-part) and
``v`` (x-part).  Per qubit the encoding is

    (0, 0) -> I,   (0, 1) -> X,   (1, 0) -> Z,   (1, 1) -> Y.

Qubit 0 is the most significant bit of a computational-basis index, so the
bit string (x_0, ..., x_{n-1}) names basis state sum(x_j << (n-1-j)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Dense rendering caps (memory bound).  Vectors of dimension 2^n are allowed
# up to n = 12, full 2^n x 2^n matrices up to n = 10.
DENSE_VECTOR_CAP = 12
DENSE_MATRIX_CAP = 10

PHASES = (1, 1j, -1, -1j)  # i**k for k = 0..3

_SINGLE_QUBIT = {
    (0, 0): np.array([[1, 0], [0, 1]], dtype=complex),
    (0, 1): np.array([[0, 1], [1, 0]], dtype=complex),
    (1, 0): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
}

_CHAR_TO_BITS = {"I": (0, 0), "X": (0, 1), "Z": (1, 0), "Y": (1, 1)}
_BITS_TO_CHAR = {bits: ch for ch, bits in _CHAR_TO_BITS.items()}


def _build_product_phase_table() -> dict:
    """Phase exponent k in sigma_a sigma_b = i^k sigma_{a+b}, from dense 2x2 products."""
    table = {}
    for a, ma in _SINGLE_QUBIT.items():
        for b, mb in _SINGLE_QUBIT.items():
            c = (a[0] ^ b[0], a[1] ^ b[1])
            prod = ma @ mb
            for k, phase in enumerate(PHASES):
                if np.array_equal(prod, phase * _SINGLE_QUBIT[c]):
                    table[a, b] = k
                    break
    return table


_PRODUCT_PHASE = _build_product_phase_table()


@dataclass(frozen=True)
class PauliOperator:
    """A phased n-qubit Pauli operator.

    ``phase_exp`` is the exponent k of the overall phase i^k; ``u`` and ``v``
    are tuples of bits (z-part and x-part).
    """

    phase_exp: int
    u: tuple
    v: tuple

    def __post_init__(self):
        if len(self.u) != len(self.v):
            raise ValueError("z-part and x-part must have equal length")
        if self.phase_exp not in (0, 1, 2, 3):
            raise ValueError("phase exponent must be 0..3")

    @property
    def n(self) -> int:
        return len(self.u)

    @property
    def phase(self) -> complex:
        return PHASES[self.phase_exp]

    @property
    def is_hermitian(self) -> bool:
        # Tensor products of I, X, Y, Z are Hermitian; only the phase matters.
        return self.phase_exp in (0, 2)

    def __str__(self) -> str:
        return format_pauli(self)


def identity(n: int) -> PauliOperator:
    return PauliOperator(0, (0,) * n, (0,) * n)


def to_binary(op: PauliOperator) -> tuple:
    """Return the (u, v) pair of the operator; the phase is discarded."""
    return op.u, op.v


def from_binary(u: Sequence[int], v: Sequence[int], phase: complex = 1) -> PauliOperator:
    """Build a Pauli operator from its binary parts and an explicit phase."""
    u = tuple(int(b) & 1 for b in u)
    v = tuple(int(b) & 1 for b in v)
    if len(u) != len(v):
        raise ValueError("z-part and x-part must have equal length")
    for k, p in enumerate(PHASES):
        if phase == p:
            return PauliOperator(k, u, v)
    raise ValueError(f"phase must be one of 1, i, -1, -i, got {phase!r}")


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Exact product of two Pauli operators of equal size."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    k = a.phase_exp + b.phase_exp
    for ua, va, ub, vb in zip(a.u, a.v, b.u, b.v):
        k += _PRODUCT_PHASE[(ua, va), (ub, vb)]
    u = tuple(x ^ y for x, y in zip(a.u, b.u))
    v = tuple(x ^ y for x, y in zip(a.v, b.v))
    return PauliOperator(k % 4, u, v)


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """True iff the symplectic inner product u_a.v_b + v_a.u_b vanishes mod 2."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    s = 0
    for ua, va, ub, vb in zip(a.u, a.v, b.u, b.v):
        s ^= (ua & vb) ^ (va & ub)
    return s == 0


def support(op: PauliOperator) -> frozenset:
    """Qubit indices where the operator acts non-trivially (0-based)."""
    return frozenset(j for j in range(op.n) if (op.u[j], op.v[j]) != (0, 0))


def restrict(op: PauliOperator, omega: Iterable[int]) -> PauliOperator:
    """Tensor product of the factors at positions in omega, ascending, phase kept."""
    idx = sorted(set(int(j) for j in omega))
    if idx and (idx[0] < 0 or idx[-1] >= op.n):
        raise ValueError(f"index out of range for {op.n} qubits: {idx}")
    u = tuple(op.u[j] for j in idx)
    v = tuple(op.v[j] for j in idx)
    return PauliOperator(op.phase_exp, u, v)


def dense_matrix(op: PauliOperator, cap: int = DENSE_MATRIX_CAP) -> np.ndarray:
    """Dense 2^n x 2^n complex matrix of the operator."""
    if op.n > cap:
        raise ValueError(f"dense rendering cap exceeded: n={op.n} > {cap}")
    m = np.array([[1]], dtype=complex)
    for uj, vj in zip(op.u, op.v):
        m = np.kron(m, _SINGLE_QUBIT[uj, vj])
    return PHASES[op.phase_exp] * m


def parse_pauli(text: str) -> PauliOperator:
    """Parse the text form: optional '+'/'-' sign then characters from I, X, Y, Z."""
    s = text.strip()
    phase_exp = 0
    if s.startswith("+"):
        s = s[1:]
    elif s.startswith("-"):
        phase_exp = 2
        s = s[1:]
    if not s:
        raise ValueError(f"empty Pauli string in {text!r}")
    u, v = [], []
    for ch in s:
        if ch not in _CHAR_TO_BITS:
            raise ValueError(f"invalid Pauli character {ch!r} in {text!r}")
        uj, vj = _CHAR_TO_BITS[ch]
        u.append(uj)
        v.append(vj)
    return PauliOperator(phase_exp, tuple(u), tuple(v))


def format_pauli(op: PauliOperator) -> str:
    """Inverse of parse_pauli; imaginary phases are not expressible."""
    if op.phase_exp in (1, 3):
        raise ValueError("imaginary phase has no text form")
    sign = "-" if op.phase_exp == 2 else ""
    return sign + "".join(_BITS_TO_CHAR[uj, vj] for uj, vj in zip(op.u, op.v))


# ---------------------------------------------------------------------------
# GF(2) linear algebra on numpy uint8 matrices.
# ---------------------------------------------------------------------------

def _as_f2(m) -> np.ndarray:
    a = np.array(m, dtype=np.uint8) % 2
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return a


def f2_row_reduce(m) -> tuple:
    """Reduced row echelon form over GF(2) and the list of pivot columns.

    Pivot choice is deterministic: for each column, the first remaining row
    (lowest index) holding a 1.
    """
    a = _as_f2(m).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if a[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def f2_rank(m) -> int:
    """Rank over GF(2) via Gaussian elimination."""
    _, pivots = f2_row_reduce(m)
    return len(pivots)


def f2_solve(m, rhs):
    """Some x with m @ x = rhs over GF(2), or None if inconsistent.

    Deterministic: free variables are set to 0 under the fixed lowest-index
    pivot order, which makes the returned solution canonical.
    """
    a = _as_f2(m)
    b = np.array(rhs, dtype=np.uint8).reshape(-1) % 2
    if b.shape[0] != a.shape[0]:
        raise ValueError("dimension mismatch between matrix and right-hand side")
    aug = np.concatenate([a, b[:, None]], axis=1)
    red, pivots = f2_row_reduce(aug)
    cols = a.shape[1]
    if cols in pivots:
        return None  # a pivot in the augmented column: inconsistent
    x = np.zeros(cols, dtype=np.uint8)
    for i, c in enumerate(pivots):
        x[c] = red[i, cols]
    return x


def f2_null_space(m) -> list:
    """Basis of the kernel {x : m @ x = 0} over GF(2)."""
    a = _as_f2(m)
    red, pivots = f2_row_reduce(a)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        x = np.zeros(cols, dtype=np.uint8)
        x[fc] = 1
        for i, c in enumerate(pivots):
            x[c] = red[i, fc]
        basis.append(x)
    return basis


def f2_inverse(m) -> np.ndarray:
    """Inverse of a square matrix over GF(2); raises on singular input."""
    a = _as_f2(m)
    rows, cols = a.shape
    if rows != cols:
        raise ValueError("inverse requires a square matrix")
    aug = np.concatenate([a, np.eye(rows, dtype=np.uint8)], axis=1)
    red, pivots = f2_row_reduce(aug)
    if pivots[:rows] != list(range(rows)):
        raise ValueError("matrix is singular over GF(2)")
    return red[:, rows:]
