# Symplectic structure on F_q^{2 m0}.
#
# Vectors are (s, t) with s the X part (first m0 entries) and t the Z part.
# The F_q-valued form is fq_form(u, v) = u^T J v with J = [[0, -I], [I, 0]];
# its trace is the F_p pairing that governs Weyl commutation phases.

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import fq_linalg as la
from .errors import DegenerateForm, DimensionError, InternalError
from .finite_field import FieldElement, FieldSpec, ff_trace


#
# --- Domain Types ---
#

@dataclass(frozen=True)
class SymplecticContext:
    """Register count and field of a symplectic space F_q^{2 m0}."""

    m0: int
    spec: FieldSpec

    @property
    def dim(self) -> int:
        return 2 * self.m0

    @property
    def GF(self):
        return self.spec.GF

    @property
    def J(self):
        n = self.m0
        J = np.zeros((2 * n, 2 * n), dtype=np.int64)
        J[:n, n:] = (self.spec.p - 1) * np.eye(n, dtype=np.int64)
        J[n:, :n] = np.eye(n, dtype=np.int64)
        return self.GF(J)

    def unit(self, index: int):
        return la.unit_vector(self.GF, self.dim, index)


@dataclass
class WBasis:
    """
    Symplectic basis adapted to an error space V.

    Attributes:
        w: m0 vectors, the X-type columns of g_*
        w_prime: m0 vectors, the Z-type columns of g_*
        m_star: half-rank of the form restricted to V
        m_star_star: dim V - m_star
    """

    w: List[np.ndarray]
    w_prime: List[np.ndarray]
    m_star: int
    m_star_star: int

    def matrix(self):
        """g_* with columns [w_1 .. w_m0 | w'_1 .. w'_m0]."""
        return la.as_columns(list(self.w) + list(self.w_prime))

    def protected_span(self) -> List[np.ndarray]:
        """The last m** pairs, which absorb every error direction."""
        m0 = len(self.w)
        start = m0 - self.m_star_star
        return list(self.w[start:]) + list(self.w_prime[start:])


#
# --- Forms ---
#

def _check_length(u, ctx: SymplecticContext):
    if len(u) != ctx.dim:
        raise DimensionError(f"vector of length {len(u)} in a {ctx.dim}-dimensional symplectic space")


def fq_form(u, v, ctx: SymplecticContext):
    """u^T J v over F_q (a 0-d FieldArray)."""
    _check_length(u, ctx)
    _check_length(v, ctx)
    n = ctx.m0
    # u^T J v = -s_u . t_v + t_u . s_v
    return np.dot(u[n:], v[:n]) - np.dot(u[:n], v[n:])


def fp_pairing(u, v, ctx: SymplecticContext) -> int:
    """Trace of fq_form(u, v); the exponent in W(u) W(v) = omega^x W(v) W(u)."""
    value = fq_form(u, v, ctx)
    return ff_trace(FieldElement(ctx.spec, int(value)))


def gram_matrix(vectors: Sequence, ctx: SymplecticContext):
    """G[i, j] = fq_form(vectors[i], vectors[j])."""
    if not vectors:
        return ctx.GF(np.zeros((0, 0), dtype=np.int64))
    B = la.as_columns(list(vectors))
    return B.T @ ctx.J @ B


def is_symplectic(g, ctx: SymplecticContext) -> bool:
    """True iff g is 2m0 x 2m0 and g^T J g = J."""
    if g.shape != (ctx.dim, ctx.dim):
        return False
    J = ctx.J
    return bool(np.array_equal(np.asarray(g.T @ J @ g).view(np.ndarray), np.asarray(J).view(np.ndarray)))


def symplectic_complement(vectors: Sequence, ctx: SymplecticContext) -> List:
    """Basis of {x : fq_form(y, x) = 0 for all y in vectors}, i.e. Ker(B^T J)."""
    if not vectors:
        return [ctx.unit(i) for i in range(ctx.dim)]
    B = la.as_columns(list(vectors))
    return la.kernel_basis(B.T @ ctx.J)


#
# --- Helper Function: LC1 Diagonalization ---
#

def lc1_diagonalize(vectors: Sequence, ctx: SymplecticContext) -> Tuple[List, List]:
    """
    Hyperbolic basis of a subspace on which the form is nondegenerate.

    Inductive procedure: take the first remaining vector w, pick the first
    remaining v with fq_form(v, w) != 0, rescale it to the partner w', then
    project every other vector onto the form-complement of span{w, w'}.

    Args:
        vectors: spanning set of the subspace
        ctx: symplectic context

    Returns:
        tuple: (w, w_prime) with fq_form(w'_i, w_j) = delta_ij and
        fq_form(w_i, w_j) = fq_form(w'_i, w'_j) = 0
    """
    for v in vectors:
        _check_length(v, ctx)
    remaining = la.independent_subset(list(vectors))
    k2 = len(remaining)
    if k2 % 2 == 1:
        raise DegenerateForm(f"odd-dimensional span ({k2}) cannot carry a nondegenerate alternating form")
    if k2 and la.rank(gram_matrix(remaining, ctx)) < k2:
        raise DegenerateForm("form restricted to the span is degenerate")

    w_list, wp_list = [], []
    while remaining:
        # 1. Pivot vector and the first partner pairing with it
        w = remaining[0]
        partner_index = None
        for idx in range(1, len(remaining)):
            if int(fq_form(remaining[idx], w, ctx)) != 0:
                partner_index = idx
                break
        if partner_index is None:
            raise DegenerateForm("no partner found; restricted form is degenerate")

        # 2. Normalize so fq_form(w', w) = 1
        v = remaining[partner_index]
        wp = v / fq_form(v, w, ctx)
        w_list.append(w)
        wp_list.append(wp)

        # 3. x -> x + fq_form(x, w') w - fq_form(x, w) w' kills both pairings
        rest = [x for i, x in enumerate(remaining) if i not in (0, partner_index)]
        remaining = [x + fq_form(x, wp, ctx) * w - fq_form(x, w, ctx) * wp for x in rest]
    return w_list, wp_list


#
# --- Invariants ---
#

def _basis_of(V_basis: Sequence, ctx: SymplecticContext) -> List:
    for v in V_basis:
        _check_length(v, ctx)
    return la.independent_subset(list(V_basis))


def form_rank(V_basis: Sequence, ctx: SymplecticContext, complement_hint=None) -> int:
    """rank(P_V^T J P_V) for the projection built from `complement_hint`."""
    basis = _basis_of(V_basis, ctx)
    P = la.projection_onto(basis, complement_hint, n=ctx.dim, GF=ctx.GF)
    return la.rank(P.T @ ctx.J @ P)


def compute_invariants(V_basis: Sequence, ctx: SymplecticContext, m1: Optional[int] = None) -> Tuple[int, int]:
    """
    m_* = rank(P_V^T J P_V) / 2 and m_** = dim V - m_*.

    Args:
        V_basis: spanning set of the error space V
        ctx: symplectic context
        m1: corrupted interval count; enables the network bounds
            m_* >= 1, m_** >= m_* and m_** <= 2 m1 - 1

    Returns:
        tuple: (m_star, m_star_star)
    """
    basis = _basis_of(V_basis, ctx)
    r = form_rank(basis, ctx)
    if r % 2 == 1:
        raise InternalError(f"rank {r} of an alternating form is odd")
    m_star = r // 2
    m_star_star = len(basis) - m_star

    if m1 is not None:
        if m_star < 1:
            raise InternalError(f"m_* = {m_star} < 1 for a network error space")
        if m_star_star < m_star:
            raise InternalError(f"m_** = {m_star_star} < m_* = {m_star}")
        if m_star_star > 2 * m1 - 1:
            raise InternalError(f"m_** = {m_star_star} exceeds 2*m1 - 1 = {2 * m1 - 1}")
    return m_star, m_star_star


def radical(V_basis: Sequence, ctx: SymplecticContext) -> List:
    """V_2 = Ker(P_V^T J P_V) intersected with V."""
    basis = _basis_of(V_basis, ctx)
    if not basis:
        return []
    P = la.projection_onto(basis, n=ctx.dim, GF=ctx.GF)
    M = P.T @ ctx.J @ P
    B = la.as_columns(basis)
    # x = B c lies in Ker M iff (M B) c = 0
    return [B @ c for c in la.kernel_basis(M @ B)]


#
# --- Basis construction ---
#

def build_w_basis(V_basis: Sequence, ctx: SymplecticContext) -> WBasis:
    """
    Symplectic basis whose last m_** pairs contain the error space V.

    Steps:
        1. V_2 = radical of V, V_1 a complement of V_2 inside V
        2. LC-1 on V_1 gives m_* pairs
        3. each radical vector r_l gets a partner inside V_3 = V_1^perp,
           corrected so partners are mutually isotropic
        4. V_4 = span of those m_** pairs, V_5 = V_4^perp, LC-1 on V_5
           gives the first m0 - m_** pairs

    Ordering: [V_5 pairs][V_1 pairs][radical vectors with their partners].

    Returns:
        WBasis: satisfies fq_form(w'_i, w_j) = delta_ij, w's and w''s isotropic,
        and V inside the span of the last m_** pairs
    """
    basis = _basis_of(V_basis, ctx)
    GF = ctx.GF
    m_star, m_star_star = compute_invariants(basis, ctx)

    # 1. Radical and its complement in V
    V2 = radical(basis, ctx)
    V1 = la.greedy_complement(V2, ctx.dim, GF, candidates=basis)
    if len(V1) != 2 * m_star or len(V2) != m_star_star - m_star:
        raise InternalError(f"dim V_1 = {len(V1)}, dim V_2 = {len(V2)} inconsistent with (m_*, m_**) = ({m_star}, {m_star_star})")

    # 2. Hyperbolic pairs on V_1
    w1, w1p = lc1_diagonalize(V1, ctx)

    # 3. Partners for the radical vectors inside V_3 = V_1^perp
    V3 = symplectic_complement(V1, ctx)
    r_count = len(V2)
    radical_partners = []
    if r_count:
        A = la.as_columns(V2).T @ ctx.J  # row j: u -> fq_form(r_j, u)
        for l in range(r_count):
            # fq_form(u, r_j) = -fq_form(r_j, u) = delta_lj
            rhs = GF(np.zeros(r_count, dtype=np.int64))
            rhs[l] = ctx.spec.p - 1
            u = la.solve_particular(A, rhs)
            if u is None:
                raise InternalError(f"no vector pairs with radical vector {l}")
            _, w_bar = la.split_along(u, V1, V3) if V1 else (None, u)
            # Correction keeps the partners mutually isotropic
            w_new = w_bar
            for i, wp_i in enumerate(radical_partners):
                w_new = w_new + fq_form(w_bar, wp_i, ctx) * V2[i]
            radical_partners.append(w_new)

    tail_w = list(w1) + list(V2)
    tail_wp = list(w1p) + radical_partners

    # 4. Complement pairs from V_5 = V_4^perp
    V4 = tail_w + tail_wp
    V5 = symplectic_complement(V4, ctx) if V4 else [ctx.unit(i) for i in range(ctx.dim)]
    head_w, head_wp = lc1_diagonalize(V5, ctx) if V5 else ([], [])

    wbasis = WBasis(list(head_w) + tail_w, list(head_wp) + tail_wp, m_star, m_star_star)
    _check_w_basis(wbasis, basis, ctx)
    return wbasis


def _check_w_basis(wbasis: WBasis, V_basis: Sequence, ctx: SymplecticContext):
    m0 = ctx.m0
    if len(wbasis.w) != m0 or len(wbasis.w_prime) != m0:
        raise InternalError(f"basis has {len(wbasis.w)} + {len(wbasis.w_prime)} vectors, expected {m0} + {m0}")
    if not is_symplectic(wbasis.matrix(), ctx):
        raise InternalError("w / w' table violates the hyperbolic pairing conditions")
    protected = wbasis.protected_span()
    for v in V_basis:
        if not la.span_contains(protected, v):
            raise InternalError("error space is not inside the span of the last m_** pairs")


def plus_j_contained(V_basis: Sequence, wbasis: WBasis, ctx: SymplecticContext) -> bool:
    """Whether V + JV lies inside the span of the last m_** pairs."""
    protected = wbasis.protected_span()
    J = ctx.J
    return all(la.span_contains(protected, v) and la.span_contains(protected, J @ v) for v in V_basis)
