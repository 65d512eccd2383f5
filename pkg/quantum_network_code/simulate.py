# Exact dense simulation of layered networks under corruption.
#
# Register order is fixed: network registers first (register 1 slowest),
# then any reference system, then the adversary's memory. Corruption always
# hits register 1.

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
import scipy.stats

from .errors import DimensionError, InvalidChannel, InvalidState, ResourceLimit
from .feedback import ensure_feedback

TP_TOL = 1e-10
PSD_TOL = 1e-10
RESOURCE_LIMIT = 4096


#
# --- Helper Function: Validation ---
#

def validate_density(rho: np.ndarray, dim: Optional[int] = None, name: str = "state") -> np.ndarray:
    """
    Checks that `rho` is a density matrix (Hermitian, PSD, unit trace).

    Raises:
        DimensionError: wrong shape
        InvalidState: otherwise invalid
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise DimensionError(f"{name} has dimension {rho.shape[0]}, expected {dim}")
    if np.max(np.abs(rho - rho.conj().T)) > PSD_TOL:
        raise InvalidState(f"{name} is not Hermitian")
    if abs(np.trace(rho) - 1.0) > PSD_TOL:
        raise InvalidState(f"{name} has trace {np.trace(rho).real:.6f}")
    if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
        raise InvalidState(f"{name} has a negative eigenvalue")
    return rho


def check_resources(q: int, m0: int, memory_dim: int = 1):
    size = q ** m0 * memory_dim
    if size > RESOURCE_LIMIT:
        raise ResourceLimit(f"q^m0 * memory_dim = {size} exceeds the exact-simulation limit {RESOURCE_LIMIT}")


#
# --- Domain Types ---
#

@dataclass
class KrausChannel:
    """Trace-preserving CP map given by Kraus operators (dout x din each)."""

    operators: List[np.ndarray]

    def __post_init__(self):
        if not self.operators:
            raise InvalidChannel("channel needs at least one Kraus operator")
        ops = [np.asarray(K, dtype=complex) for K in self.operators]
        shape = ops[0].shape
        if any(K.shape != shape for K in ops):
            raise InvalidChannel("Kraus operators differ in shape")
        total = sum(K.conj().T @ K for K in ops)
        if np.max(np.abs(total - np.eye(shape[1]))) > TP_TOL:
            raise InvalidChannel("Kraus operators are not trace preserving")
        self.operators = ops

    @property
    def din(self) -> int:
        return self.operators[0].shape[1]

    @property
    def dout(self) -> int:
        return self.operators[0].shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(K @ rho @ K.conj().T for K in self.operators)

    def tensor(self, other: "KrausChannel") -> "KrausChannel":
        return KrausChannel([np.kron(A, B) for A in self.operators for B in other.operators])

    def then(self, other: "KrausChannel") -> "KrausChannel":
        """Composition: apply self, then other."""
        return KrausChannel([B @ A for A in self.operators for B in other.operators])

    @classmethod
    def from_unitary(cls, U: np.ndarray) -> "KrausChannel":
        return cls([np.asarray(U, dtype=complex)])

    @classmethod
    def identity(cls, dim: int) -> "KrausChannel":
        return cls([np.eye(dim, dtype=complex)])

    @classmethod
    def depolarizing(cls, dim: int) -> "KrausChannel":
        """Full depolarization rho -> I/dim as dim^2 matrix units."""
        ops = []
        for i in range(dim):
            for j in range(dim):
                E = np.zeros((dim, dim), dtype=complex)
                E[i, j] = 1.0 / np.sqrt(dim)
                ops.append(E)
        return cls(ops)


@dataclass
class AdaptiveAdversary:
    """
    Eve with a persistent quantum memory.

    Attributes:
        memory_dim: memory dimension
        memory_state: initial memory density matrix
        unitaries: one unitary per corrupted interval, on (register 1) x memory
    """

    memory_dim: int
    memory_state: np.ndarray
    unitaries: List[np.ndarray]

    def __post_init__(self):
        self.memory_state = validate_density(self.memory_state, self.memory_dim, "memory state")
        for i, U in enumerate(self.unitaries):
            U = np.asarray(U, dtype=complex)
            if U.shape[0] != U.shape[1] or U.shape[0] % self.memory_dim:
                raise DimensionError(f"adversary unitary {i} has shape {U.shape}")
            if np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) > TP_TOL:
                raise InvalidChannel(f"adversary unitary {i} is not unitary")
            self.unitaries[i] = U

    def memory_vector(self) -> Optional[np.ndarray]:
        """Unit vector if the memory is pure, else None."""
        vals, vecs = np.linalg.eigh(self.memory_state)
        if vals[-1] < 1.0 - 1e-10:
            return None
        return vecs[:, -1]


#
# --- Helper Function: Tensor Index Bookkeeping ---
#

def permute_subsystems(op: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """
    Reorders tensor factors of an operator (or state vector).

    The output's k-th factor is the input's factor perm[k].
    """
    dims = list(dims)
    n = len(dims)
    total = int(np.prod(dims))
    new_dims = [dims[k] for k in perm]
    if op.ndim == 1:
        return op.reshape(dims).transpose(list(perm)).reshape(total)
    tensor = op.reshape(dims + dims)
    axes = list(perm) + [n + k for k in perm]
    return tensor.transpose(axes).reshape(int(np.prod(new_dims)), int(np.prod(new_dims)))


def embed_operator(op: np.ndarray, targets: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """
    Full operator acting as `op` on factors `targets` (in that order), identity elsewhere.
    """
    dims = list(dims)
    rest = [k for k in range(len(dims)) if k not in targets]
    order = list(targets) + rest
    rest_dim = int(np.prod([dims[k] for k in rest])) if rest else 1
    full = np.kron(op, np.eye(rest_dim))
    # full acts on factors in `order`; move them back to natural order
    inverse = np.argsort(order)
    return permute_subsystems(full, [dims[k] for k in order], list(inverse))


def wire_permutation_unitary(perm: Sequence[int], q: int) -> np.ndarray:
    """Unitary moving register k to position perm[k]."""
    n = len(perm)
    D = q ** n
    idx = np.arange(D)
    weights = q ** np.arange(n - 1, -1, -1)
    digits = (idx[:, None] // weights[None, :]) % q
    moved = np.zeros_like(digits)
    for k in range(n):
        moved[:, perm[k]] = digits[:, k]
    U = np.zeros((D, D), dtype=complex)
    U[moved @ weights, idx] = 1.0
    return U


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every factor not listed in `keep` (kept factors stay in order)."""
    dims = list(dims)
    n = len(dims)
    keep = sorted(keep)
    tensor = rho.reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # Trace the highest axes first so lower axis numbers stay valid
    for count, k in enumerate(sorted(traced, reverse=True)):
        remaining = n - count
        tensor = np.trace(tensor, axis1=k, axis2=k + remaining)
    kept_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return tensor.reshape(kept_dim, kept_dim)


def _apply_first(rho: np.ndarray, ops: Sequence[np.ndarray], q: int) -> np.ndarray:
    # sum_k (K x I) rho (K x I)^dagger on the leading q-dimensional factor
    rest = rho.shape[0] // q
    r = rho.reshape(q, rest, q, rest)
    out = np.zeros_like(r)
    for K in ops:
        out += np.einsum("ab,bxcy,dc->axdy", K, r, K.conj(), optimize=True)
    return out.reshape(rho.shape)


def _conjugate_leading(rho: np.ndarray, U: np.ndarray) -> np.ndarray:
    # (U x I) rho (U x I)^dagger
    D = U.shape[0]
    extra = rho.shape[0] // D
    r = rho.reshape(D, extra, D, extra)
    out = np.einsum("ab,bmcn,dc->amdn", U, r, U.conj(), optimize=True)
    return out.reshape(rho.shape)


def _check_input(net, rho_in: np.ndarray, reference_dim: int) -> np.ndarray:
    dim = net.dim * reference_dim
    return validate_density(rho_in, dim, "input state")


#
# --- Operations ---
#

def run_individual(net, gammas: Sequence[KrausChannel], rho_in: np.ndarray, reference_dim: int = 1) -> np.ndarray:
    """
    Applies U_0, then Gamma_i on register 1 followed by U_i for i = 1..m1.

    Args:
        net: LayeredNetwork
        gammas: m1 channels on one q-dimensional register
        rho_in: input density matrix on q^m0 * reference_dim dimensions
        reference_dim: untouched trailing reference system

    Returns:
        np.ndarray: output density matrix
    """
    check_resources(net.spec.q, net.m0)
    if len(gammas) != net.m1:
        raise DimensionError(f"{len(gammas)} corruption channels for m1 = {net.m1}")
    q = net.spec.q
    for i, gamma in enumerate(gammas):
        if gamma.din != q or gamma.dout != q:
            raise DimensionError(f"channel {i} acts on dimension {gamma.din}, expected {q}")
    rho = _check_input(net, rho_in, reference_dim)
    unitaries = net.unitaries()

    rho = _conjugate_leading(rho, unitaries[0])
    for i in range(net.m1):
        rho = _apply_first(rho, gammas[i].operators, q)
        rho = _conjugate_leading(rho, unitaries[i + 1])
    return rho


def run_adaptive(net, adv: AdaptiveAdversary, rho_in: np.ndarray, reference_dim: int = 1) -> np.ndarray:
    """
    Joint network x memory evolution; U~_i acts on register 1 and the memory.

    Returns:
        np.ndarray: output density matrix with the memory traced out
    """
    q, M = net.spec.q, adv.memory_dim
    check_resources(q, net.m0, M)
    if len(adv.unitaries) != net.m1:
        raise DimensionError(f"{len(adv.unitaries)} adversary unitaries for m1 = {net.m1}")
    for i, U in enumerate(adv.unitaries):
        if U.shape[0] != q * M:
            raise DimensionError(f"adversary unitary {i} acts on dimension {U.shape[0]}, expected {q * M}")
    rho = _check_input(net, rho_in, reference_dim)
    unitaries = net.unitaries()

    # 1. Attach the memory as the last factor
    joint = np.kron(rho, adv.memory_state)
    R = joint.shape[0] // (q * M)

    # 2. Alternate network layers and adversary interactions
    joint = _conjugate_leading(joint, unitaries[0])
    for i in range(net.m1):
        Ut = adv.unitaries[i].reshape(q, M, q, M)
        j6 = joint.reshape(q, R, M, q, R, M)
        j6 = np.einsum("ambn,bxnczo,dpco->axmdzp", Ut, j6, Ut.conj(), optimize=True)
        joint = _conjugate_leading(j6.reshape(joint.shape), unitaries[i + 1])

    # 3. Discard the memory
    D = joint.shape[0] // M
    return np.einsum("amdm->ad", joint.reshape(D, M, D, M))


def run_adaptive_pure(net, adv: Optional[AdaptiveAdversary], psi_in: np.ndarray, reference_dim: int = 1) -> np.ndarray:
    """
    State-vector version of run_adaptive for pure input and pure memory.

    Args:
        adv: adversary with pure memory, or None for an uncorrupted run

    Returns:
        np.ndarray: joint output vector (network, reference, memory)
    """
    q = net.spec.q
    M = adv.memory_dim if adv is not None else 1
    check_resources(q, net.m0, M)
    psi = np.asarray(psi_in, dtype=complex)
    if psi.shape != (net.dim * reference_dim,):
        raise DimensionError(f"input vector of shape {psi.shape}, expected ({net.dim * reference_dim},)")
    if adv is not None:
        mem = adv.memory_vector()
        if mem is None:
            raise InvalidState("pure-state simulation needs a pure memory state")
        psi = np.kron(psi, mem)
    unitaries = net.unitaries()
    D = net.dim

    def layer(vec, U):
        return (U @ vec.reshape(D, -1)).reshape(-1)

    psi = layer(psi, unitaries[0])
    for i in range(net.m1):
        if adv is not None:
            R = psi.shape[0] // (q * M)
            Ut = adv.unitaries[i].reshape(q, M, q, M)
            psi = np.einsum("ambn,bxn->axm", Ut, psi.reshape(q, R, M), optimize=True).reshape(-1)
        psi = layer(psi, unitaries[i + 1])
    return psi


def run_mix_substitution(net, rho_in: np.ndarray, reference_dim: int = 1) -> np.ndarray:
    """Replaces register 1 by I/q in every corrupted interval."""
    check_resources(net.spec.q, net.m0)
    q = net.spec.q
    rho = _check_input(net, rho_in, reference_dim)
    unitaries = net.unitaries()

    rho = _conjugate_leading(rho, unitaries[0])
    for i in range(net.m1):
        rest = rho.shape[0] // q
        reduced = np.einsum("axay->xy", rho.reshape(q, rest, q, rest))
        rho = np.kron(np.eye(q) / q, reduced)
        rho = _conjugate_leading(rho, unitaries[i + 1])
    return rho


def network_channel(net, gammas: Sequence[KrausChannel]) -> KrausChannel:
    """Kraus set of the whole network with individual corruptions."""
    q = net.spec.q
    rest = net.dim // q
    unitaries = net.unitaries()
    channel = KrausChannel.from_unitary(unitaries[0])
    for i in range(net.m1):
        lifted = KrausChannel([np.kron(K, np.eye(rest)) for K in gammas[i].operators])
        channel = channel.then(lifted).then(KrausChannel.from_unitary(unitaries[i + 1]))
    return channel


#
# --- Choi utilities ---
#

def choi_matrix(apply_fn: Callable[[np.ndarray], np.ndarray], din: int) -> np.ndarray:
    """sum_ij |i><j| x Lambda(|i><j|) (input factor first)."""
    blocks = []
    for i in range(din):
        row = []
        for j in range(din):
            E = np.zeros((din, din), dtype=complex)
            E[i, j] = 1.0
            row.append(apply_fn(E))
        blocks.append(row)
    return np.block(blocks)


def choi_from_kraus(channel: KrausChannel) -> np.ndarray:
    vecs = [K.T.reshape(-1) for K in channel.operators]  # |K>> = sum_i |i> x K|i>
    return sum(np.outer(v, v.conj()) for v in vecs)


def choi_to_kraus(choi: np.ndarray, din: int, dout: int, tol: float = 1e-12) -> KrausChannel:
    vals, vecs = np.linalg.eigh(choi)
    ops = [np.sqrt(val) * vecs[:, k].reshape(din, dout).T for k, val in enumerate(vals) if val > tol]
    return KrausChannel(ops)


def process_distance(choi_a: np.ndarray, choi_b: np.ndarray) -> float:
    """Max-abs entry of the Choi difference."""
    if choi_a.shape != choi_b.shape:
        raise DimensionError(f"Choi matrices of shapes {choi_a.shape} and {choi_b.shape}")
    return float(np.max(np.abs(choi_a - choi_b)))


#
# --- Random sampling ---
#

def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary (QR of a Ginibre matrix with phase fix)."""
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return scipy.stats.unitary_group.rvs(dim, random_state=rng)


def random_kraus(dim: int, count: int, rng: np.random.Generator) -> KrausChannel:
    """Random channel from the first `dim` columns of a Haar unitary on dim*count."""
    V = haar_unitary(dim * count, rng)[:, :dim]
    return KrausChannel([V[k * dim:(k + 1) * dim, :] for k in range(count)])


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    rank = rank or dim
    G = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_adversary(q: int, memory_dim: int, m1: int, rng: np.random.Generator, pure_memory: bool = True) -> AdaptiveAdversary:
    if pure_memory:
        mem = random_pure_state(memory_dim, rng)
        memory_state = np.outer(mem, mem.conj())
    else:
        memory_state = random_density(memory_dim, rng)
    unitaries = [haar_unitary(q * memory_dim, rng) for _ in range(m1)]
    return AdaptiveAdversary(memory_dim, memory_state, unitaries)


#
# --- Fidelity ---
#

def maximally_entangled(dim: int) -> np.ndarray:
    """(1/sqrt(dim)) sum_i |i>|i>."""
    return np.eye(dim, dtype=complex).reshape(-1) / np.sqrt(dim)


def _purify(rho: np.ndarray) -> np.ndarray:
    # sum_i sqrt(l_i) |e_i>|i>, purifying factor second
    vals, vecs = np.linalg.eigh(rho)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)[None, :]).reshape(-1)


def entanglement_fidelity(plan, net, corruption, feedback=None) -> float:
    """
    <Phi| (decode o network o encode x id)(Phi) |Phi> for a maximally entangled
    message-reference state Phi.

    Adaptive corruption with pure memory and the uncorrupted case use the
    state-vector path; individual and mix-substitution corruption use
    density matrices.

    Args:
        plan: CodePlan
        net: LayeredNetwork the plan was built for
        corruption: CorruptionModel

    Returns:
        float: fidelity in [0, 1]
    """
    feedback = ensure_feedback(feedback)
    q = net.spec.q
    Dm = plan.message_dim
    Dj = plan.junk_dim
    phi = maximally_entangled(Dm)
    mode = corruption.mode
    memory_dim = corruption.adversary.memory_dim if mode == "adaptive" else 1
    check_resources(q, net.m0, memory_dim)

    pure_memory = mode == "adaptive" and corruption.adversary.memory_vector() is not None
    if mode == "none" or pure_memory:
        # 1. |Phi>_{msg,ref} x |rho0 purification>_{junk,jref}, network factors first
        purified = _purify(plan.rho0)
        joint = np.kron(phi, purified)
        dims = [Dm, Dm, Dj, Dj]
        psi = permute_subsystems(joint, dims, [0, 2, 1, 3])
        psi = (plan.U_e @ psi.reshape(plan.U_e.shape[0], -1)).reshape(-1)

        # 2. Network with corruption, then U_d
        adv = corruption.adversary if mode == "adaptive" else None
        psi = run_adaptive_pure(net, adv, psi, reference_dim=Dm * Dj)
        M = memory_dim
        psi = (plan.U_d @ psi.reshape(plan.U_d.shape[0], -1)).reshape(-1)

        # 3. Overlap with Phi on (msg, ref), junk / jref / memory traced
        amps = psi.reshape(Dm, Dj, Dm, Dj, M)
        overlap = np.einsum("ijikm->jkm", amps) / np.sqrt(Dm)
        fidelity = float(np.sum(np.abs(overlap) ** 2))
    else:
        rho_phi = np.outer(phi, phi.conj())
        joint = np.kron(rho_phi, plan.rho0)
        rho = permute_subsystems(joint, [Dm, Dm, Dj], [0, 2, 1])
        rho = _conjugate_leading(rho, plan.U_e)
        if mode == "individual":
            rho = run_individual(net, corruption.channels, rho, reference_dim=Dm)
        elif mode == "adaptive":
            rho = run_adaptive(net, corruption.adversary, rho, reference_dim=Dm)
        elif mode == "mix":
            rho = run_mix_substitution(net, rho, reference_dim=Dm)
        else:
            raise ValueError(f"unknown corruption mode '{mode}'")
        rho = _conjugate_leading(rho, plan.U_d)
        out = partial_trace(rho, [Dm, Dj, Dm], [0, 2])
        fidelity = float(np.real(np.vdot(phi, out @ phi)))

    feedback.pushConsoleInfo(f"  Entanglement fidelity ({mode}): {fidelity:.12f}")
    return min(max(fidelity, 0.0), 1.0)
