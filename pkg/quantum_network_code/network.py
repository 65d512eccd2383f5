# Network descriptions: the layered normal form and the DAG form.
#
# A LayeredNetwork has m1 + 1 global layers U_0 .. U_m1 over m0 wires;
# the i-th corruption hits register 1 between U_{i-1} and U_i. reorganize()
# turns a DAG with corrupted edges into that form by scheduling node
# operations topologically and swapping each corrupted edge onto wire 1.

from dataclasses import dataclass, field
from typing import Any, List, Optional

import networkx as nx
import numpy as np

from . import fq_linalg as la
from .errors import DegreeError, DimensionError, InvalidChannel, NotADag, NotClifford, NotSymplectic, SingularMatrix
from .feedback import ensure_feedback
from .finite_field import FieldSpec
from .simulate import AdaptiveAdversary, KrausChannel, embed_operator, wire_permutation_unitary
from .symplectic import SymplecticContext, is_symplectic
from .weyl_clifford import basis_linear_unitary, is_unitary, metaplectic

LAYER_KINDS = ("basis_linear", "symplectic", "dense")


#
# --- Domain Types ---
#

@dataclass
class Layer:
    """
    One global unitary of the layered form.

    Attributes:
        kind: 'basis_linear' (m0 x m0 matrix gbar, |x> -> |gbar x>),
            'symplectic' (2m0 x 2m0 matrix g) or 'dense' (explicit unitary)
        matrix: FieldArray for the first two kinds, complex ndarray for 'dense'
    """

    kind: str
    matrix: Any

    def __post_init__(self):
        if self.kind not in LAYER_KINDS:
            raise DimensionError(f"unknown layer kind '{self.kind}'")

    @classmethod
    def basis_linear(cls, gbar) -> "Layer":
        return cls("basis_linear", gbar)

    @classmethod
    def symplectic(cls, g) -> "Layer":
        return cls("symplectic", g)

    @classmethod
    def dense(cls, U) -> "Layer":
        return cls("dense", np.asarray(U, dtype=complex))

    def symplectic_matrix(self, ctx: SymplecticContext):
        """g for this layer; basis-linear gbar lifts to diag(gbar, gbar^-T)."""
        if self.kind == "basis_linear":
            return la.block_diag(self.matrix, la.inverse(self.matrix).T)
        if self.kind == "symplectic":
            return self.matrix
        raise NotClifford("dense layer has no symplectic description")

    def unitary(self, ctx: SymplecticContext, method: str = "stabilizer") -> np.ndarray:
        if self.kind == "basis_linear":
            return basis_linear_unitary(self.matrix, ctx.spec)
        if self.kind == "symplectic":
            return metaplectic(self.matrix, ctx, method)[0]
        return self.matrix


@dataclass
class LayeredNetwork:
    """
    Normal form with m1 corrupted intervals over m0 wires.

    Attributes:
        spec: field of the q-dimensional registers
        m0: number of channels
        m1: number of corrupted intervals
        layers: m1 + 1 layers U_0 .. U_m1
        corrupted_edges: DAG edge ids in corruption order, when built by reorganize
    """

    spec: FieldSpec
    m0: int
    m1: int
    layers: List[Layer]
    corrupted_edges: Optional[List[int]] = None
    synthesis: str = "stabilizer"
    _unitaries: Optional[List[np.ndarray]] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.m0 < 1 or self.m1 < 0:
            raise DimensionError(f"invalid register counts m0={self.m0}, m1={self.m1}")
        if len(self.layers) != self.m1 + 1:
            raise DimensionError(f"{len(self.layers)} layers for m1 = {self.m1} (expected {self.m1 + 1})")
        ctx = self.ctx
        for i, layer in enumerate(self.layers):
            if layer.kind == "basis_linear":
                if layer.matrix.shape != (self.m0, self.m0):
                    raise DimensionError(f"layer {i}: basis-linear matrix of shape {layer.matrix.shape}")
                if la.rank(layer.matrix) < self.m0:
                    raise SingularMatrix(f"layer {i}: basis-linear matrix is singular")
            elif layer.kind == "symplectic":
                if not is_symplectic(layer.matrix, ctx):
                    raise NotSymplectic(f"layer {i}: matrix is not symplectic")
            else:
                if layer.matrix.shape != (self.dim, self.dim):
                    raise DimensionError(f"layer {i}: dense unitary of shape {layer.matrix.shape}")
                if not is_unitary(layer.matrix):
                    raise DimensionError(f"layer {i}: dense matrix is not unitary")

    @property
    def ctx(self) -> SymplecticContext:
        return SymplecticContext(self.m0, self.spec)

    @property
    def dim(self) -> int:
        return self.spec.q ** self.m0

    @property
    def is_clifford(self) -> bool:
        return all(layer.kind != "dense" for layer in self.layers)

    @property
    def is_basis_linear(self) -> bool:
        return all(layer.kind == "basis_linear" for layer in self.layers)

    def symplectic_matrices(self) -> list:
        ctx = self.ctx
        return [layer.symplectic_matrix(ctx) for layer in self.layers]

    def basis_matrices(self) -> list:
        if not self.is_basis_linear:
            raise NotClifford("network is not basis-linear")
        return [layer.matrix for layer in self.layers]

    def unitaries(self) -> List[np.ndarray]:
        """Dense U_0 .. U_m1, synthesized once."""
        if self._unitaries is None:
            ctx = self.ctx
            self._unitaries = [layer.unitary(ctx, self.synthesis) for layer in self.layers]
        return self._unitaries

    def total_unitary(self) -> np.ndarray:
        """U_m1 ... U_0."""
        total = np.eye(self.dim, dtype=complex)
        for U in self.unitaries():
            total = U @ total
        return total


@dataclass
class DagNode:
    """Network node; intermediate nodes carry an operation on their in-edges (ordered by edge id)."""

    name: str
    kind: str = "identity"
    matrix: Any = None


@dataclass
class DagEdge:
    id: int
    tail: str
    head: str


@dataclass
class DagNetwork:
    """
    Unicast network as a DAG whose edges each carry one q-dimensional channel.

    Attributes:
        spec: field
        sender, receiver: node names
        nodes: all nodes; list order breaks scheduling ties
        edges: channels with unique ids
        corrupted: ids of the m1 corrupted edges
    """

    spec: FieldSpec
    sender: str
    receiver: str
    nodes: List[DagNode]
    edges: List[DagEdge]
    corrupted: List[int]

    @property
    def m0(self) -> int:
        return sum(1 for e in self.edges if e.tail == self.sender)

    @property
    def m1(self) -> int:
        return len(self.corrupted)

    def node(self, name: str) -> DagNode:
        for n in self.nodes:
            if n.name == name:
                return n
        raise DegreeError(f"unknown node '{name}'")

    def in_edges(self, name: str) -> List[DagEdge]:
        return sorted((e for e in self.edges if e.head == name), key=lambda e: e.id)

    def out_edges(self, name: str) -> List[DagEdge]:
        return sorted((e for e in self.edges if e.tail == name), key=lambda e: e.id)

    def graph(self) -> nx.MultiDiGraph:
        G = nx.MultiDiGraph()
        G.add_nodes_from(n.name for n in self.nodes)
        for e in self.edges:
            G.add_edge(e.tail, e.head, key=e.id)
        return G

    def validate(self):
        """
        Checks the unicast-network invariants.

        Raises:
            NotADag: cycle present
            DegreeError: degree, id or node-operation mismatch
        """
        names = [n.name for n in self.nodes]
        if len(set(names)) != len(names):
            raise DegreeError("duplicate node names")
        for required in (self.sender, self.receiver):
            if required not in names:
                raise DegreeError(f"node '{required}' missing")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise DegreeError("duplicate edge ids")
        for e in self.edges:
            if e.tail not in names or e.head not in names:
                raise DegreeError(f"edge {e.id} references an unknown node")

        G = self.graph()
        if not nx.is_directed_acyclic_graph(G):
            raise NotADag("network graph has a cycle")

        m0 = G.out_degree(self.sender)
        if m0 == 0 or G.in_degree(self.receiver) != m0:
            raise DegreeError(f"sender out-degree {m0} != receiver in-degree {G.in_degree(self.receiver)}")
        if G.in_degree(self.sender) or G.out_degree(self.receiver):
            raise DegreeError("sender must have no inputs and receiver no outputs")

        q = self.spec.q
        for node in self.nodes:
            if node.name in (self.sender, self.receiver):
                continue
            k = G.in_degree(node.name)
            if G.out_degree(node.name) != k:
                raise DegreeError(f"node '{node.name}' has in-degree {k} and out-degree {G.out_degree(node.name)}")
            expected = {"basis_linear": (k, k), "symplectic": (2 * k, 2 * k), "dense": (q ** k, q ** k)}
            if node.kind in expected and np.shape(node.matrix) != expected[node.kind]:
                raise DegreeError(f"node '{node.name}' operation has shape {np.shape(node.matrix)}, expected {expected[node.kind]}")
            if node.kind not in expected and node.kind != "identity":
                raise DegreeError(f"node '{node.name}' has unknown kind '{node.kind}'")

        if len(set(self.corrupted)) != len(self.corrupted):
            raise DegreeError("corrupted edge listed twice")
        missing = set(self.corrupted) - set(ids)
        if missing:
            raise DegreeError(f"corrupted edges {sorted(missing)} do not exist")


@dataclass
class CorruptionModel:
    """
    How Eve acts on the corrupted register.

    Modes: 'individual' (one Kraus channel per interval), 'adaptive'
    (unitaries on register x memory), 'mix' (replace by I/q), 'none'.
    """

    mode: str
    channels: Optional[List[KrausChannel]] = None
    adversary: Optional[AdaptiveAdversary] = None

    def __post_init__(self):
        if self.mode == "individual":
            if not self.channels:
                raise InvalidChannel("individual corruption needs channels")
            din, dout = self.channels[0].din, self.channels[0].dout
            if din != dout or any((c.din, c.dout) != (din, dout) for c in self.channels):
                raise InvalidChannel("corruption channels must act on one register of fixed dimension")
        elif self.mode == "adaptive":
            if self.adversary is None:
                raise InvalidChannel("adaptive corruption needs an adversary")
        elif self.mode not in ("mix", "none"):
            raise InvalidChannel(f"unknown corruption mode '{self.mode}'")

    @classmethod
    def individual(cls, channels) -> "CorruptionModel":
        return cls("individual", channels=list(channels))

    @classmethod
    def adaptive(cls, adversary: AdaptiveAdversary) -> "CorruptionModel":
        return cls("adaptive", adversary=adversary)

    @classmethod
    def mix_substitution(cls) -> "CorruptionModel":
        return cls("mix")

    @classmethod
    def none(cls) -> "CorruptionModel":
        return cls("none")


#
# --- Helper Function: Layer Accumulators ---
#

class _Accumulator:
    """Composes wire operations in one of the three layer representations."""

    def __init__(self, mode: str, spec: FieldSpec, m0: int):
        self.mode = mode
        self.spec = spec
        self.m0 = m0
        self.reset()

    def reset(self):
        if self.mode == "basis_linear":
            self.current = self.spec.identity(self.m0)
        elif self.mode == "symplectic":
            self.current = self.spec.identity(2 * self.m0)
        else:
            self.current = np.eye(self.spec.q ** self.m0, dtype=complex)

    def node(self, node: DagNode, wires: List[int]):
        if node.kind == "identity":
            return
        m0 = self.m0
        if self.mode == "dense":
            if node.kind == "dense":
                local = np.asarray(node.matrix, dtype=complex)
            elif node.kind == "basis_linear":
                local = basis_linear_unitary(node.matrix, self.spec)
            else:
                local = metaplectic(node.matrix, SymplecticContext(len(wires), self.spec))[0]
            op = embed_operator(local, wires, [self.spec.q] * m0)
        elif self.mode == "symplectic":
            if node.kind == "basis_linear":
                local = la.block_diag(node.matrix, la.inverse(node.matrix).T)
            else:
                local = node.matrix
            idx = list(wires) + [m0 + w for w in wires]
            op = self.spec.identity(2 * m0)
            op[np.ix_(idx, idx)] = local
        else:
            op = self.spec.identity(m0)
            op[np.ix_(wires, wires)] = node.matrix
        self.current = op @ self.current

    def permute(self, perm: List[int]):
        """Moves the register on wire w to wire perm[w]."""
        m0 = self.m0
        if self.mode == "dense":
            op = wire_permutation_unitary(perm, self.spec.q)
        else:
            P = np.zeros((m0, m0), dtype=np.int64)
            for w, target in enumerate(perm):
                P[target, w] = 1
            if self.mode == "symplectic":
                op = la.block_diag(self.spec.GF(P), self.spec.GF(P))
            else:
                op = self.spec.GF(P)
        self.current = op @ self.current

    def layer(self) -> Layer:
        return Layer(self.mode, self.current)


def _layer_mode(dag: DagNetwork) -> str:
    kinds = {n.kind for n in dag.nodes}
    if "dense" in kinds:
        return "dense"
    if "symplectic" in kinds:
        return "symplectic"
    return "basis_linear"


#
# --- Operations ---
#

def reorganize(dag: DagNetwork, feedback=None) -> LayeredNetwork:
    """
    Rewrites a DAG network in layered normal form.

    Steps:
        1. Event graph: DAG nodes plus one 'cut' event inside every corrupted edge
        2. Lexicographic topological order (nodes before cuts, then list order / edge id)
        3. Node events apply their operation on the wires of their in-edges;
           out-edges inherit those wires in id order
        4. A cut swaps its edge onto wire 0 and closes the current layer
        5. A final permutation puts the receiver's in-edges on wires 0..m0-1 by id

    Args:
        dag: validated DagNetwork
        feedback: optional progress sink

    Returns:
        LayeredNetwork: basis-linear if every node is, symplectic if all are
        Clifford, dense otherwise; corrupted_edges records the cut order
    """
    feedback = ensure_feedback(feedback)
    dag.validate()
    m0, spec = dag.m0, dag.spec
    corrupted = set(dag.corrupted)

    # 1. Event graph
    G = nx.DiGraph()
    order_index = {n.name: i for i, n in enumerate(dag.nodes)}
    for n in dag.nodes:
        G.add_node(("node", n.name))
    for e in dag.edges:
        if e.id in corrupted:
            G.add_edge(("node", e.tail), ("cut", e.id))
            G.add_edge(("cut", e.id), ("node", e.head))
        else:
            G.add_edge(("node", e.tail), ("node", e.head))

    def sort_key(event):
        kind, ident = event
        return (0, order_index[ident]) if kind == "node" else (1, ident)

    schedule = list(nx.lexicographical_topological_sort(G, key=sort_key))

    # 2. Walk the schedule
    mode = _layer_mode(dag)
    acc = _Accumulator(mode, spec, m0)
    position = {e.id: w for w, e in enumerate(dag.out_edges(dag.sender))}
    layers, cut_order = [], []

    for kind, ident in schedule:
        if kind == "node":
            if ident in (dag.sender, dag.receiver):
                continue
            ins = dag.in_edges(ident)
            outs = dag.out_edges(ident)
            wires = [position.pop(e.id) for e in ins]
            acc.node(dag.node(ident), wires)
            for e, w in zip(outs, wires):
                position[e.id] = w
        else:
            w = position[ident]
            if w != 0:
                other = next(eid for eid, pos in position.items() if pos == 0)
                perm = list(range(m0))
                perm[0], perm[w] = w, 0
                acc.permute(perm)
                position[ident], position[other] = 0, w
            layers.append(acc.layer())
            cut_order.append(ident)
            acc.reset()

    # 3. Receiver ordering
    perm = list(range(m0))
    for k, e in enumerate(dag.in_edges(dag.receiver)):
        perm[position[e.id]] = k
    acc.permute(perm)
    layers.append(acc.layer())

    feedback.pushConsoleInfo(f"Reorganized DAG: m0={m0}, m1={len(cut_order)}, {mode} layers, cut order {cut_order}")
    return LayeredNetwork(spec, m0, len(cut_order), layers, corrupted_edges=cut_order)
