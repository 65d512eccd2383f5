# Code construction for Clifford networks with known corrupted positions.
#
# The plan depends only on the network layers g_0 .. g_m1: the error
# directions v_i span V, the adapted symplectic basis moves V onto the last
# m_** registers, and the first m0 - m_** registers carry the message.

from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np

from . import fq_linalg as la
from .errors import DimensionError, NoCapacity, NotClifford
from .feedback import ensure_feedback
from .simulate import partial_trace, validate_density, _conjugate_leading
from .symplectic import SymplecticContext, WBasis, build_w_basis, compute_invariants, plus_j_contained
from .weyl_clifford import MetaplecticCertificate, metaplectic


#
# --- Domain Types ---
#

@dataclass
class ErrorDirections:
    """
    Pulled-back corruption directions.

    Attributes:
        v: v_1 .. v_2m1 in F_q^{2 m0} (X directions then Z directions)
        v_bar: v-bar_i (basis-linear networks only)
        v_bar_prime: v-bar'_i (basis-linear networks only)
    """

    v: List[np.ndarray]
    v_bar: Optional[List[np.ndarray]] = None
    v_bar_prime: Optional[List[np.ndarray]] = None


@dataclass
class CodePlan:
    """Encoder / decoder for one Clifford network."""

    m0: int
    m1: int
    directions: ErrorDirections
    V_basis: List[np.ndarray]
    m_star: int
    m_star_star: int
    wbasis: WBasis
    g_star: np.ndarray
    U_e: np.ndarray
    U_d: np.ndarray
    rho0: np.ndarray
    q: int
    certificate: Optional[MetaplecticCertificate] = None
    v_plus_jv_contained: Optional[bool] = None

    @property
    def message_registers(self) -> int:
        return self.m0 - self.m_star_star

    @property
    def message_dim(self) -> int:
        return self.q ** self.message_registers

    @property
    def junk_dim(self) -> int:
        return self.q ** self.m_star_star

    @property
    def rate_bits(self) -> float:
        return self.message_registers * float(np.log2(self.q))

    @property
    def rate_log_q(self) -> int:
        return self.message_registers

    def to_dict(self, spec) -> dict:
        return {
            "field": spec.to_dict(),
            "m0": self.m0,
            "m1": self.m1,
            "m_star": self.m_star,
            "m_star_star": self.m_star_star,
            "message_registers": self.message_registers,
            "rate_bits": self.rate_bits,
            "rate_log_q": self.rate_log_q,
            "g_star": la.to_int_rows(self.g_star),
            "wbasis": {
                "w": la.to_int_rows(la.as_columns(self.wbasis.w)),
                "w_prime": la.to_int_rows(la.as_columns(self.wbasis.w_prime)),
            },
            "v_plus_jv_contained": self.v_plus_jv_contained,
            "certificate": self.certificate.to_dict() if self.certificate else None,
        }


#
# --- Operations ---
#

def error_vectors(net) -> ErrorDirections:
    """
    v_i = g_0^-1 ... g_{i-1}^-1 e_1 and v_{m1+i} = g_0^-1 ... g_{i-1}^-1 e_{m0+1}.

    For basis-linear networks also returns v-bar_i = gbar_0^-1 ... gbar_{i-1}^-1 e_1
    and v-bar'_i = gbar_0^T ... gbar_{i-1}^T e_1.

    Raises:
        NotClifford: a layer is a dense unitary
    """
    if not net.is_clifford:
        raise NotClifford("error directions need symplectic layers")
    ctx = net.ctx
    gs = net.symplectic_matrices()
    e1, ez = ctx.unit(0), ctx.unit(net.m0)

    # pullback = g_0^-1 ... g_{i-1}^-1, built left to right
    pullback = ctx.spec.identity(ctx.dim)
    x_dirs, z_dirs = [], []
    for i in range(net.m1):
        pullback = pullback @ la.inverse(gs[i])
        x_dirs.append(pullback @ e1)
        z_dirs.append(pullback @ ez)

    dirs = ErrorDirections(x_dirs + z_dirs)
    if net.is_basis_linear:
        gbars = net.basis_matrices()
        ebar = la.unit_vector(ctx.GF, net.m0, 0)
        inv_acc = ctx.spec.identity(net.m0)
        tr_acc = ctx.spec.identity(net.m0)
        dirs.v_bar, dirs.v_bar_prime = [], []
        for i in range(net.m1):
            inv_acc = inv_acc @ la.inverse(gbars[i])
            tr_acc = tr_acc @ gbars[i].T
            dirs.v_bar.append(inv_acc @ ebar)
            dirs.v_bar_prime.append(tr_acc @ ebar)
    return dirs


def _initial_state(choice, q: int, m_star_star: int) -> np.ndarray:
    dim = q ** m_star_star
    if isinstance(choice, str):
        if choice == "mixed":
            return np.eye(dim, dtype=complex) / dim
        if choice == "pure":
            rho = np.zeros((dim, dim), dtype=complex)
            rho[0, 0] = 1.0
            return rho
        raise DimensionError(f"unknown rho0 choice '{choice}'")
    return validate_density(choice, dim, "rho0")


def plan_code(net, rho0_choice: Union[str, np.ndarray] = "mixed", feedback=None, method: str = "stabilizer") -> CodePlan:
    """
    Builds the encoder U_e = U(g_*) and decoder U_d = U_e^-1 (U_m1 ... U_0)^-1.

    Args:
        net: Clifford LayeredNetwork
        rho0_choice: 'mixed' (default), 'pure' or a density matrix on m_** registers
        feedback: optional progress sink
        method: metaplectic synthesis path

    Returns:
        CodePlan

    Raises:
        NoCapacity: m_** >= m0
    """
    feedback = ensure_feedback(feedback)
    feedback.pushConsoleInfo("--- Code Plan ---")
    ctx: SymplecticContext = net.ctx

    # 1. Error space and invariants
    dirs = error_vectors(net)
    V_basis = la.independent_subset(dirs.v)
    # m1 = 0 leaves V empty and the network bounds do not apply
    m_star, m_star_star = compute_invariants(V_basis, ctx, net.m1 if net.m1 else None)
    feedback.pushConsoleInfo(f"  dim V: {len(V_basis)}")
    feedback.pushConsoleInfo(f"  m_*: {m_star}")
    feedback.pushConsoleInfo(f"  m_**: {m_star_star}")
    if m_star_star >= net.m0:
        raise NoCapacity(f"m_** = {m_star_star} >= m0 = {net.m0}: no message registers remain")

    # 2. Adapted symplectic basis and g_*
    wbasis = build_w_basis(V_basis, ctx)
    g_star = wbasis.matrix()
    contained = plus_j_contained(V_basis, wbasis, ctx) if net.is_basis_linear else None
    if contained is False:
        feedback.pushWarning("V + JV is not inside the protected span of a basis-linear network")

    # 3. Encoder and decoder unitaries
    U_e, certificate = metaplectic(g_star, ctx, method)
    U_total = net.total_unitary()
    U_d = U_e.conj().T @ U_total.conj().T
    rho0 = _initial_state(rho0_choice, ctx.spec.q, m_star_star)

    plan = CodePlan(net.m0, net.m1, dirs, V_basis, m_star, m_star_star, wbasis, g_star, U_e, U_d, rho0,
                    ctx.spec.q, certificate, contained)
    feedback.pushConsoleInfo(f"  Message registers: {plan.message_registers}")
    feedback.pushConsoleInfo(f"  Rate: {plan.rate_bits:.6f} bits ({plan.rate_log_q} log q)")
    return plan


def encode(plan: CodePlan, rho_msg: np.ndarray) -> np.ndarray:
    """rho -> U_e (rho x rho0) U_e^-1 on q^m0 dimensions."""
    rho_msg = validate_density(rho_msg, plan.message_dim, "message state")
    return _conjugate_leading(np.kron(rho_msg, plan.rho0), plan.U_e)


def decode(plan: CodePlan, rho_out: np.ndarray) -> np.ndarray:
    """rho -> Tr_{last m_**}(U_d rho U_d^-1)."""
    rho_out = np.asarray(rho_out, dtype=complex)
    D = plan.message_dim * plan.junk_dim
    if rho_out.shape != (D, D):
        raise DimensionError(f"received state has shape {rho_out.shape}, expected ({D}, {D})")
    rho = _conjugate_leading(rho_out, plan.U_d)
    return partial_trace(rho, [plan.message_dim, plan.junk_dim], [0])
