"""Shared helpers: random inputs and independent test-side oracles.

The oracles here are written from scratch against the definitions (index
summation, dense matrix algebra) so they do not share code paths with the
library implementations they check.
"""

import numpy as np

from stabdet import (
    GeneratorSet,
    Graph,
    LocalCliffordLayer,
    PauliOperator,
    canonical_generators,
    recombine_generators,
)
from stabdet.f2_pauli import f2_rank


def random_graph(n, rng):
    theta = np.zeros((n, n), dtype=np.uint8)
    for s in range(n):
        for t in range(s + 1, n):
            theta[s, t] = theta[t, s] = rng.integers(0, 2)
    return Graph(theta)


def random_invertible_f2(n, rng):
    while True:
        m = rng.integers(0, 2, size=(n, n)).astype(np.uint8)
        if f2_rank(m) == n:
            return m


def random_local_clifford_layer(n, rng):
    gates = []
    for _ in range(n):
        k = rng.integers(0, 4)
        gates.append(tuple(rng.choice(["H", "S", "X", "Z"]) for _ in range(k)))
    return LocalCliffordLayer(tuple(gates))


def random_stabilizer_set(n, rng):
    """A random valid full generator set: random graph generators pushed
    through a random local Clifford layer, random sign flips, then a random
    invertible recombination."""
    gens = canonical_generators(random_graph(n, rng))
    layer = random_local_clifford_layer(n, rng)
    ops = []
    for m in gens.generators:
        m = layer.conjugate(m)
        if rng.integers(0, 2):
            m = PauliOperator((m.phase_exp + 2) % 4, m.u, m.v)
        ops.append(m)
    return recombine_generators(GeneratorSet(tuple(ops), n),
                                random_invertible_f2(n, rng))


def random_pauli(n, rng, real_phase=False):
    u = tuple(int(b) for b in rng.integers(0, 2, size=n))
    v = tuple(int(b) for b in rng.integers(0, 2, size=n))
    k = int(rng.integers(0, 2)) * 2 if real_phase else int(rng.integers(0, 4))
    return PauliOperator(k, u, v)


def ptrace_by_summation(rho, keep, n):
    """Partial trace by direct index summation, independent of the library."""
    keep = sorted(keep)
    other = [j for j in range(n) if j not in keep]
    d = 1 << len(keep)
    out = np.zeros((d, d), dtype=complex)

    def full_index(kept_bits, other_bits):
        bits = [0] * n
        for b, j in zip(kept_bits, keep):
            bits[j] = b
        for b, j in zip(other_bits, other):
            bits[j] = b
        idx = 0
        for b in bits:
            idx = (idx << 1) | b
        return idx

    def bits_of(value, width):
        return [(value >> (width - 1 - k)) & 1 for k in range(width)]

    for i in range(d):
        for j in range(d):
            total = 0
            for e in range(1 << len(other)):
                eb = bits_of(e, len(other))
                total += rho[full_index(bits_of(i, len(keep)), eb),
                             full_index(bits_of(j, len(keep)), eb)]
            out[i, j] = total
    return out


def group_key(ops):
    return frozenset((m.phase_exp, m.u, m.v) for m in ops)
