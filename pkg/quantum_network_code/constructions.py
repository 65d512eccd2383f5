# Network generators.
#
# gen_lemma_l1 builds basis-linear networks whose error space has prescribed
# ranks (l1, l2, l3); the remaining generators give reference networks for
# tests and sweeps.

from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np

from . import fq_linalg as la
from .codeplan import error_vectors
from .errors import InvalidTriple
from .finite_field import FieldSpec
from .network import DagEdge, DagNetwork, DagNode, Layer, LayeredNetwork
from .simulate import haar_unitary


#
# --- Domain Types ---
#

@dataclass(frozen=True)
class RankTriple:
    """
    Target ranks (rank V-bar, rank V-bar', rank V-bar'^T V-bar) for m0 wires and m1 corruptions.
    """

    l1: int
    l2: int
    l3: int
    m0: int
    m1: int

    def validate(self) -> "RankTriple":
        """
        Raises:
            InvalidTriple: unless m1 >= l1 >= l3 >= 1, m1 >= l2 >= l3 and m0 >= l1 + l2 - l3
        """
        if not (self.m1 >= self.l1 >= self.l3 >= 1):
            raise InvalidTriple(f"need m1 >= l1 >= l3 >= 1, got m1={self.m1}, l1={self.l1}, l3={self.l3}")
        if not (self.m1 >= self.l2 >= self.l3):
            raise InvalidTriple(f"need m1 >= l2 >= l3, got m1={self.m1}, l2={self.l2}, l3={self.l3}")
        if self.m0 < self.l1 + self.l2 - self.l3:
            raise InvalidTriple(f"need m0 >= l1 + l2 - l3 = {self.l1 + self.l2 - self.l3}, got m0={self.m0}")
        return self

    @property
    def m_star(self) -> int:
        return self.l3

    @property
    def m_star_star(self) -> int:
        return self.l1 + self.l2 - self.l3

    def to_dict(self) -> dict:
        return {"l1": self.l1, "l2": self.l2, "l3": self.l3, "m0": self.m0, "m1": self.m1}


def valid_triples(m0: int, m1: int) -> Iterator[RankTriple]:
    """Every triple satisfying the realizability condition, in lexicographic order."""
    for l1 in range(1, m1 + 1):
        for l2 in range(1, m1 + 1):
            for l3 in range(1, min(l1, l2) + 1):
                if m0 >= l1 + l2 - l3:
                    yield RankTriple(l1, l2, l3, m0, m1)


#
# --- Helper Function: A_i Matrices ---
#

def _rank_matrices(t: RankTriple, spec: FieldSpec) -> List[np.ndarray]:
    """
    A_0 .. A_m1 for l1 >= l2 (0-based wire indices below).

        i <= l3:          transposition of wires 0 and i-1
        i = l3 + k:       block [[1,0,1],[1,1,0],[0,0,1]] on wires (0, l3+2k-2, l3+2k-1)
        i = l2 + k:       block [[1,0],[1,1]] on wires (0, 2 l2 - l3 + k - 1)
        i > l1:           identity
    """
    m0, GF = t.m0, spec.GF
    mats = [spec.identity(m0)]
    for i in range(1, t.m1 + 1):
        A = np.eye(m0, dtype=np.int64)
        if i <= t.l3:
            A[[0, i - 1]] = A[[i - 1, 0]]
        elif i <= t.l2:
            k = i - t.l3
            idx = [0, t.l3 + 2 * k - 2, t.l3 + 2 * k - 1]
            A[np.ix_(idx, idx)] = [[1, 0, 1], [1, 1, 0], [0, 0, 1]]
        elif i <= t.l1:
            k = i - t.l2
            idx = [0, 2 * t.l2 - t.l3 + k - 1]
            A[np.ix_(idx, idx)] = [[1, 0], [1, 1]]
        mats.append(GF(A))
    return mats


#
# --- Operations ---
#

def gen_lemma_l1(t: RankTriple, spec: FieldSpec) -> LayeredNetwork:
    """
    Basis-linear network with rank V-bar = l1, rank V-bar' = l2 and rank V-bar'^T V-bar = l3.

    Layers are gbar_{i-1} = A_i^-1 A_{i-1} for i = 1..m1 and gbar_m1 = I, so that
    v-bar_i = A_i e_1. When l1 < l2 the triple (l2, l1, l3) is generated and
    every layer is replaced by its inverse transpose, exchanging the
    computational and Fourier roles.

    Args:
        t: rank triple
        spec: field

    Returns:
        LayeredNetwork

    Raises:
        InvalidTriple: triple violates the realizability condition
    """
    t.validate()
    swapped = t.l1 < t.l2
    base = RankTriple(t.l2, t.l1, t.l3, t.m0, t.m1) if swapped else t

    A = _rank_matrices(base, spec)
    gbars = [la.inverse(A[i]) @ A[i - 1] for i in range(1, t.m1 + 1)]
    gbars.append(spec.identity(t.m0))
    if swapped:
        gbars = [la.inverse(g).T for g in gbars]
    return LayeredNetwork(spec, t.m0, t.m1, [Layer.basis_linear(g) for g in gbars])


def worst_case_network(m0: int, m1: int, spec: FieldSpec) -> LayeredNetwork:
    """
    Network with m_** = 2 m1 - 1, the smallest achievable rate.

    Raises:
        InvalidTriple: m0 < 2 m1 - 1
    """
    return gen_lemma_l1(RankTriple(m1, m1, 1, m0, m1), spec)


def realize_invariants(l_star: int, l_star_star: int, m0: int, m1: int, spec: FieldSpec) -> LayeredNetwork:
    """
    Basis-linear network with (m_*, m_**) = (l_star, l_star_star).

    Uses l3 = l_star, l1 = min(m1, l_star_star), l2 = l_star_star + l_star - l1.

    Raises:
        InvalidTriple: no triple realizes the pair
    """
    if l_star + l_star_star > 2 * m1:
        raise InvalidTriple(f"dim V = {l_star + l_star_star} exceeds 2*m1 = {2 * m1}")
    l1 = min(m1, l_star_star)
    triple = RankTriple(l1, l_star_star + l_star - l1, l_star, m0, m1)
    return gen_lemma_l1(triple, spec)


def measured_ranks(net: LayeredNetwork) -> Tuple[int, int, int]:
    """(rank V-bar, rank V-bar', rank V-bar'^T V-bar) of a basis-linear network."""
    dirs = error_vectors(net)
    if dirs.v_bar is None:
        raise InvalidTriple("ranks are defined for basis-linear networks only")
    Vbar = la.as_columns(dirs.v_bar)
    Vbar_p = la.as_columns(dirs.v_bar_prime)
    return la.rank(Vbar), la.rank(Vbar_p), la.rank(Vbar_p.T @ Vbar)


def identity_network(m0: int, m1: int, spec: FieldSpec) -> LayeredNetwork:
    """Every layer is the identity; each corruption hits the same wire."""
    return LayeredNetwork(spec, m0, m1, [Layer.basis_linear(spec.identity(m0)) for _ in range(m1 + 1)])


#
# --- Helper Function: Random Symplectic Blocks ---
#

def _random_invertible(spec: FieldSpec, n: int, rng: np.random.Generator):
    while True:
        A = spec.GF(rng.integers(0, spec.q, size=(n, n)))
        if la.rank(A) == n:
            return A


def _random_symplectic(spec: FieldSpec, m0: int, rng: np.random.Generator, depth: int):
    GF = spec.GF
    zero = spec.zeros((m0, m0))
    g = spec.identity(2 * m0)
    for _ in range(depth):
        # 1. Basis-linear lift diag(A, A^-T)
        A = _random_invertible(spec, m0, rng)
        g = la.block_diag(A, la.inverse(A).T) @ g

        # 2. Symmetric shear [[I, 0], [S, I]]
        upper = np.triu(rng.integers(0, spec.q, size=(m0, m0)))
        S = GF(upper) + GF(np.triu(upper, 1)).T
        shear = la.vstack([la.hstack([spec.identity(m0), zero]), la.hstack([S, spec.identity(m0)])])
        g = shear @ g

        # 3. Fourier on one register
        r = int(rng.integers(0, m0))
        F = spec.identity(2 * m0)
        F[r, r] = 0
        F[m0 + r, m0 + r] = 0
        F[m0 + r, r] = 1
        F[r, m0 + r] = spec.p - 1
        g = F @ g
    return g


def random_clifford_network(m0: int, m1: int, spec: FieldSpec, rng: np.random.Generator, depth: int = 2) -> LayeredNetwork:
    """Symplectic layers built from random basis-linear, shear and Fourier blocks."""
    layers = [Layer.symplectic(_random_symplectic(spec, m0, rng, depth)) for _ in range(m1 + 1)]
    return LayeredNetwork(spec, m0, m1, layers)


def random_basis_linear_network(m0: int, m1: int, spec: FieldSpec, rng: np.random.Generator) -> LayeredNetwork:
    layers = [Layer.basis_linear(_random_invertible(spec, m0, rng)) for _ in range(m1 + 1)]
    return LayeredNetwork(spec, m0, m1, layers)


def random_unitary_network(m0: int, m1: int, spec: FieldSpec, rng: np.random.Generator) -> LayeredNetwork:
    """Haar-random dense layers (no Clifford structure)."""
    dim = spec.q ** m0
    return LayeredNetwork(spec, m0, m1, [Layer.dense(haar_unitary(dim, rng)) for _ in range(m1 + 1)])


def six_channel_dag(spec: FieldSpec, symplectic_relay: bool = False) -> DagNetwork:
    """
    Six-channel unicast network with three relays and two corrupted edges.

        src -> recv (0), src -> n1 (1, 2), n1 -> recv (3, corrupted), n1 -> n2 (4),
        src -> n2 (5, 6), n2 -> n3 (7 corrupted, 8), n2 -> recv (9), src -> n3 (10),
        n3 -> recv (11, 12, 13)

    Args:
        spec: field
        symplectic_relay: give n2 a Fourier transform on its first wire

    Returns:
        DagNetwork with m0 = 6, m1 = 2
    """
    GF = spec.GF
    n1 = DagNode("n1", "basis_linear", GF([[1, 1], [0, 1]]))
    n2_linear = GF([[1, 0, 1], [1, 1, 0], [0, 0, 1]])
    if symplectic_relay:
        lift = la.block_diag(n2_linear, la.inverse(n2_linear).T)
        F = spec.identity(6)
        F[0, 0] = 0
        F[3, 3] = 0
        F[3, 0] = 1
        F[0, 3] = spec.p - 1
        n2 = DagNode("n2", "symplectic", F @ lift)
    else:
        n2 = DagNode("n2", "basis_linear", n2_linear)
    n3 = DagNode("n3", "basis_linear", GF([[1, 1, 0], [0, 1, 1], [0, 0, 1]]))

    links = [
        (0, "src", "recv"), (1, "src", "n1"), (2, "src", "n1"), (3, "n1", "recv"), (4, "n1", "n2"),
        (5, "src", "n2"), (6, "src", "n2"), (7, "n2", "n3"), (8, "n2", "n3"), (9, "n2", "recv"),
        (10, "src", "n3"), (11, "n3", "recv"), (12, "n3", "recv"), (13, "n3", "recv"),
    ]
    nodes = [DagNode("src"), n1, n2, n3, DagNode("recv")]
    edges = [DagEdge(i, tail, head) for i, tail, head in links]
    return DagNetwork(spec, "src", "recv", nodes, edges, corrupted=[3, 7])
