# Entropic checks on network channels.
#
# All logarithms are base 2. Channels are KrausChannel instances; the
# environment of a channel is the register indexed by its Kraus operators.

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import scipy.optimize

from . import fq_linalg as la
from .errors import ConverseMismatch, DimensionError, InvalidChannel, InvalidState, NotInvertible
from .feedback import ensure_feedback
from .finite_field import FieldSpec
from .simulate import (KrausChannel, choi_from_kraus, network_channel, process_distance, random_density,
                       random_pure_state)
from .weyl_clifford import WeylLabel, weyl_space

DIRECT_TOL = 1e-6
CONVERSE_TOL = 1e-9
CLASSICAL_TOL = 1e-9
EIGEN_FLOOR = 1e-12


#
# --- Domain Types ---
#

@dataclass
class ChannelReport:
    """
    Outcome of one capacity check.

    Attributes:
        coherent_info_bits: measured value (mutual information for the classical check)
        bound_bits: the bound it is compared with
        verdict: 'pass' or 'fail'
        tolerance: slack allowed in the comparison
        rate_bits: code rate when the check is tied to a code plan
        dims: channel dimensions (input, output, environment)
        log_q: log2 of the register dimension, for log_q units
    """

    coherent_info_bits: float
    bound_bits: float
    verdict: str
    tolerance: float
    rate_bits: Optional[float] = None
    samples: int = 1
    dims: List[int] = field(default_factory=list)
    seed: Optional[int] = None
    log_q: float = 1.0
    details: Dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "value_bits": float(self.coherent_info_bits),
            "bound_bits": float(self.bound_bits),
            "value_log_q": float(self.coherent_info_bits / self.log_q),
            "bound_log_q": float(self.bound_bits / self.log_q),
            "rate_bits": None if self.rate_bits is None else float(self.rate_bits),
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "samples": self.samples,
            "dims": [int(d) for d in self.dims],
            "seed": self.seed,
            "details": self.details,
        }


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


#
# --- Entropies ---
#

def von_neumann_entropy(rho: np.ndarray) -> float:
    """
    -sum lambda log2 lambda over the eigenvalues of rho.

    Raises:
        InvalidState: eigenvalue below -1e-10
    """
    rho = np.asarray(rho, dtype=complex)
    vals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if vals.min() < -1e-10:
        raise InvalidState(f"density matrix has eigenvalue {vals.min():.3e}")
    vals = vals[vals > EIGEN_FLOOR]
    return float(-np.sum(vals * np.log2(vals)))


def environment_state(rho: np.ndarray, channel: KrausChannel) -> np.ndarray:
    """E[k, l] = Tr(K_k rho K_l^dagger) of the Stinespring dilation."""
    Ks = np.stack(channel.operators)
    KR = np.einsum("kij,jm->kim", Ks, rho)
    return np.einsum("kim,lim->kl", KR, Ks.conj())


def coherent_information(rho: np.ndarray, channel: KrausChannel) -> float:
    """
    I_c(rho, channel) = H(output) - H(environment).

    Raises:
        DimensionError: rho does not match the channel input
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (channel.din, channel.din):
        raise DimensionError(f"state of shape {rho.shape} for a channel with input dimension {channel.din}")
    out = channel.apply(rho)
    env = environment_state(rho, channel)
    return von_neumann_entropy(out) - von_neumann_entropy(env)


def additivity_gap(rho: np.ndarray, channel: KrausChannel) -> float:
    """|I_c(rho x rho, channel x channel) - 2 I_c(rho, channel)|."""
    single = coherent_information(rho, channel)
    double = coherent_information(np.kron(rho, rho), channel.tensor(channel))
    return abs(double - 2 * single)


#
# --- Pauli and measure-and-prepare channels ---
#

Distribution = Union[Mapping[WeylLabel, float], Callable[[WeylLabel], float]]


def pauli_channel(P: Distribution, spec: FieldSpec, n: int) -> KrausChannel:
    """
    Kraus set {sqrt(P(s, t)) W(s, t)} on n registers.

    Args:
        P: mapping from WeylLabel to probability, or a callable on labels
        spec: field
        n: number of registers

    Raises:
        InvalidChannel: negative probabilities or total != 1
    """
    space = weyl_space(spec, n)
    if callable(P):
        items = [(WeylLabel.from_vector(spec, a), float(P(WeylLabel.from_vector(spec, a)))) for a in space.all_labels()]
    else:
        items = [(label, float(prob)) for label, prob in P.items()]

    total = 0.0
    ops = []
    for label, prob in items:
        if label.spec != spec or label.n != n:
            raise InvalidChannel(f"label {label} does not belong to {n} registers over {spec}")
        if prob < 0:
            raise InvalidChannel(f"negative probability {prob} for label {label}")
        total += prob
        if prob > 0:
            ops.append(np.sqrt(prob) * space.operator(label.vector()))
    if abs(total - 1.0) > 1e-10:
        raise InvalidChannel(f"probabilities sum to {total}")
    return KrausChannel(ops)


def p_mix(spec: FieldSpec, n: int) -> Dict[WeylLabel, float]:
    """Uniform distribution over F_q^{2n}."""
    space = weyl_space(spec, n)
    labels = [WeylLabel.from_vector(spec, a) for a in space.all_labels()]
    return {label: 1.0 / len(labels) for label in labels}


def p_mix_z(spec: FieldSpec, n: int) -> Dict[WeylLabel, float]:
    """Uniform distribution over the X-only labels {(s, 0)}."""
    q = spec.q
    total = q ** n
    dist = {}
    for idx in range(total):
        s = tuple((idx // q ** (n - 1 - k)) % q for k in range(n))
        dist[WeylLabel(spec, s, (0,) * n)] = 1.0 / total
    return dist


def measure_prepare_channel(povm_vectors: Sequence[np.ndarray], states: Sequence[np.ndarray]) -> KrausChannel:
    """
    rho -> sum_k <phi_k| rho |phi_k> sigma_k for a rank-one POVM {|phi_k><phi_k|}.

    Raises:
        InvalidChannel: POVM elements do not sum to the identity
    """
    if len(povm_vectors) != len(states):
        raise DimensionError(f"{len(povm_vectors)} POVM vectors for {len(states)} prepared states")
    phis = [np.asarray(v, dtype=complex) for v in povm_vectors]
    din = len(phis[0])
    total = sum(np.outer(v, v.conj()) for v in phis)
    if np.max(np.abs(total - np.eye(din))) > 1e-10:
        raise InvalidChannel("POVM elements do not sum to the identity")

    ops = []
    for phi, sigma in zip(phis, states):
        vals, vecs = np.linalg.eigh(np.asarray(sigma, dtype=complex))
        for lam, psi in zip(vals, vecs.T):
            if lam > EIGEN_FLOOR:
                ops.append(np.sqrt(lam) * np.outer(psi, phi.conj()))
    return KrausChannel(ops)


def fourier_pinching(spec: FieldSpec) -> KrausChannel:
    """Measure in the Fourier basis and re-prepare the outcome."""
    space = weyl_space(spec, 1)
    vectors = [space.fourier_state(space.digits[y]) for y in range(space.dim)]
    return measure_prepare_channel(vectors, [np.outer(v, v.conj()) for v in vectors])


#
# --- Direct bound ---
#

def witness_input(net) -> np.ndarray:
    """U_0^dagger (|0><0| x I/q^(m0-1)) U_0."""
    q = net.spec.q
    rest = q ** (net.m0 - 1)
    zero = np.zeros((q, q), dtype=complex)
    zero[0, 0] = 1.0
    rho = np.kron(zero, np.eye(rest) / rest)
    U0 = net.unitaries()[0]
    return U0.conj().T @ rho @ U0


def verify_direct_bound(net, gammas: Sequence[KrausChannel], seed: Optional[int] = None, feedback=None) -> ChannelReport:
    """
    Checks max I_c >= (m0 - 2 m1 + 1) log2 q for one set of individual corruptions.

    The verdict uses the witness input alone. The maximally mixed input is
    evaluated too but only reported in `details`.

    Args:
        net: LayeredNetwork with any unitary layers
        gammas: m1 channels on register 1
        seed: recorded in the report
        feedback: optional progress sink

    Returns:
        ChannelReport
    """
    feedback = ensure_feedback(feedback)
    q = net.spec.q
    log_q = float(np.log2(q))
    channel = network_channel(net, gammas)

    # 1. Witness input, plus the maximally mixed input for reference
    witness = coherent_information(witness_input(net), channel)
    mixed = coherent_information(np.eye(net.dim) / net.dim, channel)
    value = witness

    # 2. Compare with the bound
    bound = (net.m0 - 2 * net.m1 + 1) * log_q
    ok = value >= bound - DIRECT_TOL
    feedback.pushConsoleInfo(f"  {'✓' if ok else '⚠'} I_c = {value:.6f} bits (bound {bound:.6f})")
    return ChannelReport(value, bound, _verdict(ok), DIRECT_TOL, samples=1,
                         dims=[channel.din, channel.dout, len(channel.operators)], seed=seed, log_q=log_q,
                         details={"witness_bits": witness, "maximally_mixed_bits": mixed})


#
# --- Converse ---
#

def decoded_mix_channel(plan, net) -> KrausChannel:
    """U_d o (network with register 1 replaced by I/q) o U_e."""
    spec = net.spec
    mix = pauli_channel(p_mix(spec, 1), spec, 1)
    network = network_channel(net, [mix] * net.m1)
    return KrausChannel.from_unitary(plan.U_e).then(network).then(KrausChannel.from_unitary(plan.U_d))


def expected_mix_channel(plan, spec: FieldSpec) -> KrausChannel:
    """Id on the message, full Weyl mixing on m_* registers, X mixing on the rest of the junk."""
    expected = KrausChannel.identity(plan.message_dim)
    expected = expected.tensor(pauli_channel(p_mix(spec, plan.m_star), spec, plan.m_star))
    pinched = plan.m_star_star - plan.m_star
    if pinched:
        expected = expected.tensor(pauli_channel(p_mix_z(spec, pinched), spec, pinched))
    return expected


def verify_converse(plan, net, feedback=None) -> ChannelReport:
    """
    Checks the decoded mix-substitution channel and its coherent information.

    Steps:
        1. Compare the Choi matrices of the decoded channel and
           Id x mixing(m_*) x X-mixing(m_** - m_*)
        2. I_c at (maximally mixed message) x |0><0| junk must equal the rate

    Raises:
        ConverseMismatch: Choi distance above 1e-9
    """
    feedback = ensure_feedback(feedback)
    spec = net.spec
    log_q = float(np.log2(spec.q))

    # 1. Factorization
    actual = decoded_mix_channel(plan, net)
    expected = expected_mix_channel(plan, spec)
    distance = process_distance(choi_from_kraus(actual), choi_from_kraus(expected))
    feedback.pushConsoleInfo(f"  Process distance: {distance:.3e}")
    if distance > CONVERSE_TOL:
        raise ConverseMismatch(f"decoded channel differs from the expected factorization by {distance:.3e}")

    # 2. Coherent information at the product input
    junk = np.zeros((plan.junk_dim, plan.junk_dim), dtype=complex)
    junk[0, 0] = 1.0
    rho = np.kron(np.eye(plan.message_dim) / plan.message_dim, junk)
    value = coherent_information(rho, actual)
    rate = plan.rate_bits
    ok = abs(value - rate) <= DIRECT_TOL
    feedback.pushConsoleInfo(f"  {'✓' if ok else '⚠'} I_c = {value:.6f} bits (rate {rate:.6f})")
    return ChannelReport(value, rate, _verdict(ok), DIRECT_TOL, rate_bits=rate,
                         dims=[actual.din, actual.dout, len(actual.operators)], log_q=log_q,
                         details={"process_distance": distance, "m_star": plan.m_star,
                                  "m_star_star": plan.m_star_star})


#
# --- Entanglement-breaking check ---
#

def _state_from_params(x: np.ndarray, d: int) -> Optional[np.ndarray]:
    A = (x[: d * d] + 1j * x[d * d:]).reshape(d, d)
    rho = A @ A.conj().T
    tr = np.trace(rho).real
    if tr < 1e-14:
        return None
    return rho / tr


def _params_from_state(rho: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(rho)
    A = vecs * np.sqrt(np.clip(vals, 0.0, None))[None, :]
    return np.concatenate([A.real.ravel(), A.imag.ravel()])


def maximize_coherent_information(channel: KrausChannel, rng: np.random.Generator, starts: int = 3,
                                  max_iter: int = 2000) -> Dict:
    """
    Multi-start Nelder-Mead over tau = A A^dagger / Tr.

    Starts: I/d, |0><0| and `starts` random states.

    Returns:
        dict: best value, best state, all start values
    """
    d = channel.din

    def objective(x):
        tau = _state_from_params(x, d)
        return 0.0 if tau is None else -coherent_information(tau, channel)

    pure = np.zeros((d, d), dtype=complex)
    pure[0, 0] = 1.0
    initial = [np.eye(d) / d, pure] + [random_density(d, rng) for _ in range(starts)]

    best_value, best_state, values = -np.inf, None, []
    for tau0 in initial:
        start_value = coherent_information(tau0, channel)
        res = scipy.optimize.minimize(objective, _params_from_state(tau0), method="Nelder-Mead",
                                      options={"maxiter": max_iter, "xatol": 1e-9, "fatol": 1e-12})
        tau = _state_from_params(res.x, d)
        value = -res.fun if tau is not None else 0.0
        # Nelder-Mead may end below its start
        if start_value >= value:
            tau, value = tau0, start_value
        values.append(float(value))
        if value > best_value:
            best_value, best_state = value, tau
    return {"value": float(best_value), "state": best_state, "start_values": values}


def eb_coherent_check(channelA: KrausChannel, channelB: KrausChannel, samples: int, seed: int = 0,
                      known_max: Optional[float] = None, feedback=None) -> ChannelReport:
    """
    For entanglement-breaking channelA, I_c(rho_AB, A x B) never exceeds max_tau I_c(tau, B).

    Args:
        channelA: entanglement-breaking channel (measure-and-prepare)
        channelB: any channel
        samples: random joint inputs to test
        seed: rng seed
        known_max: analytic max_tau I_c(tau, B) when available

    Returns:
        ChannelReport: coherent_info_bits is the product-input value, bound_bits
        the estimated maximum; pass iff every sample stays below the maximum and
        the product input reaches it
    """
    feedback = ensure_feedback(feedback)
    rng = np.random.default_rng(seed)
    dA, dB = channelA.din, channelB.din

    # 1. Right-hand side by optimization, never below the analytic value
    opt = maximize_coherent_information(channelB, rng)
    rhs = opt["value"] if known_max is None else max(opt["value"], known_max)
    gap = None if known_max is None else float(known_max - opt["value"])

    # 2. Random joint inputs
    joint = channelA.tensor(channelB)
    worst = -np.inf
    violations = 0
    for k in range(samples):
        if feedback.isCanceled():
            break
        if k % 2:
            psi = random_pure_state(dA * dB, rng)
            rho = np.outer(psi, psi.conj())
        else:
            rho = random_density(dA * dB, rng)
        value = coherent_information(rho, joint)
        worst = max(worst, value)
        if value > rhs + DIRECT_TOL:
            violations += 1

    # 3. Product input with a pure state on A reaches the maximum
    pure = np.zeros((dA, dA), dtype=complex)
    pure[0, 0] = 1.0
    tau = opt["state"]
    tau_value = coherent_information(tau, channelB)
    product_value = coherent_information(np.kron(pure, tau), joint)

    ok = violations == 0 and abs(product_value - tau_value) <= DIRECT_TOL and product_value >= rhs - DIRECT_TOL
    feedback.pushConsoleInfo(f"  {'✓' if ok else '⚠'} max sampled I_c = {worst:.6f}, max_tau I_c = {rhs:.6f}, "
                             f"product = {product_value:.6f}")
    return ChannelReport(product_value, rhs, _verdict(ok), DIRECT_TOL, samples=samples,
                         dims=[joint.din, joint.dout, len(joint.operators)], seed=seed,
                         details={"max_sample_bits": float(worst), "violations": violations,
                                  "optimizer_values": opt["start_values"], "optimizer_gap": gap})


#
# --- Classical bound ---
#

def _permutation_matrix(f: Sequence[int], N: int) -> np.ndarray:
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (N,) or not np.array_equal(np.sort(f), np.arange(N)):
        raise NotInvertible("node map is not a permutation of the message alphabet")
    T = np.zeros((N, N))
    T[np.arange(N), f] = 1.0
    return T


def _check_kernel(K: np.ndarray, d: int) -> np.ndarray:
    K = np.asarray(K, dtype=float)
    if K.shape != (d, d):
        raise DimensionError(f"corruption kernel of shape {K.shape}, expected ({d}, {d})")
    if K.min() < 0 or np.max(np.abs(K.sum(axis=1) - 1.0)) > 1e-10:
        raise InvalidChannel("corruption kernel is not row-stochastic")
    return K


def mutual_information(joint: np.ndarray) -> float:
    """I(X; Y) in bits for a joint distribution table joint[x, y]."""
    px = joint.sum(axis=1)
    py = joint.sum(axis=0)
    mask = joint > 0
    ratio = joint[mask] / np.outer(px, py)[mask]
    return float(np.sum(joint[mask] * np.log2(ratio)))


def classical_bound_check(d: int, m0: int, m1: int, f_list: Sequence[Sequence[int]],
                          kernels: Sequence[np.ndarray], seed: Optional[int] = None, feedback=None) -> ChannelReport:
    """
    Exact I(X_0; X_out) for the classical layered network with uniform input.

    Args:
        d: alphabet size of one channel
        m0: channel count; messages live in [d]^m0 (coordinate 1 most significant)
        m1: corrupted interval count
        f_list: m1 + 1 permutation tables f_0 .. f_m1 of length d^m0
        kernels: m1 row-stochastic d x d matrices acting on coordinate 1

    Returns:
        ChannelReport: pass iff I >= (m0 - m1) log2 d - 1e-9

    Raises:
        NotInvertible: a table is not a permutation
        InvalidChannel: a kernel is not stochastic
    """
    feedback = ensure_feedback(feedback)
    N = d ** m0
    if len(f_list) != m1 + 1:
        raise DimensionError(f"{len(f_list)} node maps for m1 = {m1} (expected {m1 + 1})")
    if len(kernels) != m1:
        raise DimensionError(f"{len(kernels)} corruption kernels for m1 = {m1}")

    # 1. Transition matrix f_0, K_1, f_1, ..., K_m1, f_m1
    rest = np.eye(N // d)
    T = _permutation_matrix(f_list[0], N)
    for i in range(m1):
        T = T @ np.kron(_check_kernel(kernels[i], d), rest)
        T = T @ _permutation_matrix(f_list[i + 1], N)

    # 2. Uniform input
    value = mutual_information(T / N)
    log_d = float(np.log2(d))
    bound = (m0 - m1) * log_d
    ok = value >= bound - CLASSICAL_TOL
    feedback.pushConsoleInfo(f"  {'✓' if ok else '⚠'} I(X_0; X_out) = {value:.9f} bits (bound {bound:.6f})")
    return ChannelReport(value, bound, _verdict(ok), CLASSICAL_TOL, dims=[N, N], seed=seed, log_q=log_d)


def random_linear_maps(p: int, m0: int, count: int, rng: np.random.Generator) -> List[List[int]]:
    """Permutation tables of `count` random invertible F_p-linear maps on F_p^m0."""
    spec = FieldSpec(p)
    N = p ** m0
    weights = p ** np.arange(m0 - 1, -1, -1)
    digits = spec.GF((np.arange(N)[:, None] // weights[None, :]) % p)
    maps = []
    while len(maps) < count:
        A = spec.GF(rng.integers(0, p, size=(m0, m0)))
        if la.rank(A) < m0:
            continue
        images = spec.to_ints(digits @ A.T) @ weights
        maps.append([int(x) for x in images])
    return maps


def random_kernel(d: int, rng: np.random.Generator) -> np.ndarray:
    """Row-stochastic d x d matrix with Dirichlet(1) rows."""
    return rng.dirichlet(np.ones(d), size=d)
