# Dense realizations of Weyl operators and Clifford unitaries.
#
# Computational basis |x>, x in F_q^n, is indexed with register 1 as the
# slowest-varying digit: idx(x) = sum_k x_k q^(n-1-k), where x_k is the
# packed integer of the k-th field element.
#
# W(s, t) = X(s) Z(t), X(s)|x> = |x + s>, Z(t)|x> = omega^tr(x.t) |x>.
# Every W is monomial, so most routines work on (perm, phase) pairs instead
# of dense matrices.

import functools
import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from . import fq_linalg as la
from .errors import DimensionError, NotSymplectic, ResourceLimit, SingularMatrix, SynthesisFailed
from .finite_field import FieldSpec
from .symplectic import SymplecticContext, is_symplectic

UNITARY_TOL = 1e-9
EXHAUSTIVE_CHECK_LIMIT = 81
CERTIFICATE_SAMPLE_SIZE = 64
CERTIFICATE_SEED = 0
NULLSPACE_DIM_LIMIT = 16


#
# --- Domain Types ---
#

@dataclass(frozen=True)
class WeylLabel:
    """Label (s, t) in F_q^{2n} of the Weyl operator W(s, t)."""

    spec: FieldSpec
    s: tuple
    t: tuple

    def __post_init__(self):
        if len(self.s) != len(self.t):
            raise DimensionError(f"label parts of lengths {len(self.s)} and {len(self.t)}")
        object.__setattr__(self, "s", tuple(int(x) for x in np.asarray(self.s).view(np.ndarray).ravel()))
        object.__setattr__(self, "t", tuple(int(x) for x in np.asarray(self.t).view(np.ndarray).ravel()))

    @property
    def n(self) -> int:
        return len(self.s)

    def vector(self):
        return self.spec.GF(np.array(self.s + self.t, dtype=np.int64))

    @classmethod
    def from_vector(cls, spec: FieldSpec, a) -> "WeylLabel":
        ints = np.asarray(a).view(np.ndarray).astype(np.int64)
        n = len(ints) // 2
        return cls(spec, tuple(ints[:n]), tuple(ints[n:]))


@dataclass
class MetaplecticCertificate:
    """Evidence that U W(a) U^-1 = c W(g a)."""

    method: str
    generator_phases: List[complex]
    max_deviation: float
    exhaustive: bool
    labels_checked: int

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "generator_phases": [[float(c.real), float(c.imag)] for c in self.generator_phases],
            "max_deviation": float(self.max_deviation),
            "exhaustive": bool(self.exhaustive),
            "labels_checked": int(self.labels_checked),
        }


class WeylSpace:
    """
    Index bookkeeping for n registers of dimension q.

    Args:
        spec: field
        n: number of registers
    """

    def __init__(self, spec: FieldSpec, n: int):
        self.spec = spec
        self.n = n
        self.q = spec.q
        self.dim = self.q ** n
        self._add = spec.add_table()
        self._trprod = spec.trace_product_table()
        self._omega_powers = np.exp(2j * np.pi * np.arange(spec.p) / spec.p)

        # digits[idx, k] is the packed element on register k
        idx = np.arange(self.dim)
        weights = self.q ** np.arange(n - 1, -1, -1)
        self.weights = weights
        self.digits = (idx[:, None] // weights[None, :]) % self.q

    def index(self, digits) -> np.ndarray:
        return np.asarray(digits, dtype=np.int64) @ self.weights

    def monomial(self, a) -> Tuple[np.ndarray, np.ndarray]:
        """
        (perm, phase) with W(a)|x> = phase[x] |perm[x]>.

        Args:
            a: length-2n label (FieldArray or integers), X part first
        """
        ints = np.asarray(a).view(np.ndarray).astype(np.int64)
        if len(ints) != 2 * self.n:
            raise DimensionError(f"label of length {len(ints)} for {self.n} registers")
        s, t = ints[: self.n], ints[self.n:]
        shifted = self._add[self.digits, s[None, :]]
        perm = self.index(shifted)
        exponent = self._trprod[self.digits, t[None, :]].sum(axis=1) % self.spec.p
        return perm, self._omega_powers[exponent]

    def operator(self, a) -> np.ndarray:
        perm, phase = self.monomial(a)
        W = np.zeros((self.dim, self.dim), dtype=complex)
        W[perm, np.arange(self.dim)] = phase
        return W

    def fourier_state(self, y) -> np.ndarray:
        ints = np.asarray(y).view(np.ndarray).astype(np.int64)
        if len(ints) != self.n:
            raise DimensionError(f"Fourier label of length {len(ints)} for {self.n} registers")
        exponent = self._trprod[self.digits, ints[None, :]].sum(axis=1) % self.spec.p
        return self._omega_powers[exponent] / np.sqrt(self.dim)

    def fourier_matrix(self) -> np.ndarray:
        """Unitary F with F|y> = |y>_F."""
        return np.stack([self.fourier_state(self.digits[y]) for y in range(self.dim)], axis=1)

    def all_labels(self):
        for idx in range(self.q ** (2 * self.n)):
            yield np.array([(idx // self.q ** (2 * self.n - 1 - k)) % self.q for k in range(2 * self.n)], dtype=np.int64)

    def generator_labels(self) -> List[np.ndarray]:
        """
        F_p-basis of F_q^{2n}: X generators (alpha^j e_r, 0) then Z generators (0, alpha^j e_r).
        """
        labels = []
        for part in (0, 1):
            for r in range(self.n):
                for j in range(self.spec.degree):
                    a = np.zeros(2 * self.n, dtype=np.int64)
                    a[part * self.n + r] = self.spec.p ** j
                    labels.append(a)
        return labels


@functools.lru_cache(maxsize=32)
def weyl_space(spec: FieldSpec, n: int) -> WeylSpace:
    return WeylSpace(spec, n)


def apply_monomial(perm, phase, M) -> np.ndarray:
    """W @ M for W given as (perm, phase); M is a vector or a matrix."""
    out = np.empty_like(M, dtype=complex)
    if M.ndim == 1:
        out[perm] = phase * M
    else:
        out[perm] = phase[:, None] * M
    return out


#
# --- Operations ---
#

def weyl(label: WeylLabel) -> np.ndarray:
    """Dense q^n x q^n matrix of W(s, t)."""
    return weyl_space(label.spec, label.n).operator(label.vector())


def fourier_state(y, spec: FieldSpec, n: int = 1) -> np.ndarray:
    """|y>_F = q^{-n/2} sum_x omega^tr(x.y) |x>."""
    ints = np.atleast_1d(np.asarray(y).view(np.ndarray).astype(np.int64))
    return weyl_space(spec, n).fourier_state(ints)


def basis_linear_unitary(gbar, spec: FieldSpec) -> np.ndarray:
    """
    Permutation unitary |x> -> |gbar x>.

    Raises:
        SingularMatrix: gbar is not invertible
    """
    n = gbar.shape[0]
    if gbar.shape != (n, n):
        raise DimensionError(f"basis-linear matrix must be square, got {gbar.shape}")
    if la.rank(gbar) < n:
        raise SingularMatrix("basis-linear matrix is singular")
    space = weyl_space(spec, n)
    X = spec.GF(space.digits)
    images = space.index(spec.to_ints(X @ gbar.T))
    U = np.zeros((space.dim, space.dim), dtype=complex)
    U[images, np.arange(space.dim)] = 1.0
    return U


def normalize_global_phase(U: np.ndarray) -> np.ndarray:
    """Rotates U so its first largest-magnitude entry is real positive."""
    flat = U.ravel()
    mags = np.abs(flat)
    k = int(np.nonzero(mags >= mags.max() - 1e-9)[0][0])
    return U * (np.conj(flat[k]) / mags[k])


def equal_up_to_phase(A: np.ndarray, B: np.ndarray) -> float:
    """max |A - c B| for the best global phase c (Frobenius-aligned)."""
    overlap = np.vdot(B, A)
    if abs(overlap) < 1e-15:
        return float(np.max(np.abs(A - B)))
    c = overlap / abs(overlap)
    return float(np.max(np.abs(A - c * B)))


def is_unitary(U: np.ndarray, tol: float = 1e-10) -> bool:
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) <= tol)


#
# --- Helper Function: Intertwining Check ---
#

def mn1_deviation(U: np.ndarray, g, space: WeylSpace, labels) -> Tuple[float, List[complex]]:
    """
    Max deviation of U W(a) = c W(g a) U over `labels`, and the fitted phases.

    Returns:
        tuple: (max entry deviation including ||c| - 1|, phases per label)
    """
    D = space.dim
    GF = space.spec.GF
    worst = 0.0
    phases = []
    for a in labels:
        perm, phase = space.monomial(a)
        UW = U[:, perm] * phase[None, :]
        ga = g @ GF(np.asarray(a, dtype=np.int64))
        WU = apply_monomial(*space.monomial(ga), U)
        c = np.vdot(WU, UW) / D
        phases.append(complex(c))
        worst = max(worst, float(np.max(np.abs(UW - c * WU))), abs(abs(c) - 1.0))
    return worst, phases


def _generator_phase(space: WeylSpace, image) -> complex:
    # p odd: (c W)^p = I needs c = 1. p = 2: W^2 = +-I, pick c in {1, i}
    if space.spec.p != 2:
        return 1.0 + 0j
    perm, phase = space.monomial(image)
    square = phase * phase[perm]
    return 1.0 + 0j if square[0].real > 0 else 1j


#
# --- Synthesis paths ---
#

def _synthesize_stabilizer(g, space: WeylSpace) -> Tuple[np.ndarray, List[complex]]:
    GF = space.spec.GF
    gens = space.generator_labels()
    n_gen = len(gens) // 2
    images = [g @ GF(a) for a in gens]
    monos = [space.monomial(b) for b in images]
    phases = [_generator_phase(space, b) for b in images]

    # 1. Projector onto the joint fixed vector of the Z-generator images
    D = space.dim
    p = space.spec.p
    M = np.eye(D, dtype=complex)
    for k in range(n_gen, 2 * n_gen):
        perm, phase = monos[k]
        acc = M.copy()
        power = M
        for _ in range(p - 1):
            power = phases[k] * apply_monomial(perm, phase, power)
            acc = acc + power
        M = acc / p
    norms = np.linalg.norm(M, axis=0)
    j = int(np.argmax(norms))
    if norms[j] < 1e-6:
        raise SynthesisFailed("Z-generator images have no common fixed vector")
    psi0 = M[:, j] / norms[j]

    # 2. U|x> = V_{x-gen} U|x - gen>, walking indices upward
    q, d = space.q, space.spec.degree
    U = np.zeros((D, D), dtype=complex)
    U[:, 0] = psi0
    for x in range(1, D):
        digits = space.digits[x]
        r = int(np.nonzero(digits)[0][0])
        coeffs = space.spec.coeffs(digits[r])
        jdx = int(np.nonzero(coeffs)[0][0])
        pred_digits = digits.copy()
        coeffs[jdx] -= 1
        pred_digits[r] = space.spec.from_coeffs(coeffs)
        pred = int(space.index(pred_digits))
        k = r * d + jdx
        perm, phase = monos[k]
        U[:, x] = phases[k] * apply_monomial(perm, phase, U[:, pred])
    return U, phases


def _synthesize_nullspace(g, space: WeylSpace) -> Tuple[np.ndarray, List[complex]]:
    D = space.dim
    if D > NULLSPACE_DIM_LIMIT:
        raise ResourceLimit(f"null-space synthesis limited to dimension {NULLSPACE_DIM_LIMIT}, got {D}")
    GF = space.spec.GF
    p = space.spec.p
    roots = [1, 1j, -1, -1j] if p == 2 else [np.exp(2j * np.pi * k / p) for k in range(p)]
    I = np.eye(D)

    # Columns of N span the current solution space of vec(U) (row-major)
    N = np.eye(D * D, dtype=complex)
    phases = []
    for a in space.generator_labels():
        W = space.operator(a)
        Wg = space.operator(g @ GF(a))
        for c in roots:
            constraint = np.kron(I, W.T) - c * np.kron(Wg, I)
            coeffs = scipy.linalg.null_space(constraint @ N)
            if coeffs.shape[1] > 0:
                N = N @ coeffs
                phases.append(complex(c))
                break
        else:
            raise SynthesisFailed(f"no phase satisfies the intertwining constraint for generator {a.tolist()}")

    if N.shape[1] != 1:
        raise SynthesisFailed(f"intertwiner space has dimension {N.shape[1]}, expected 1")
    U = N[:, 0].reshape(D, D)
    scale = np.real(np.trace(U.conj().T @ U)) / D
    return U / np.sqrt(scale), phases


def metaplectic(g, ctx: SymplecticContext, method: str = "stabilizer") -> Tuple[np.ndarray, MetaplecticCertificate]:
    """
    Unitary U(g) with U W(a) U^-1 = c_a W(g a) for every label a.

    Args:
        g: symplectic 2m0 x 2m0 matrix over F_q
        ctx: symplectic context (m0 registers)
        method: 'stabilizer' (any size) or 'nullspace' (dimension <= 16)

    Returns:
        tuple: (U with normalized global phase, certificate)
    """
    if not is_symplectic(g, ctx):
        raise NotSymplectic("matrix does not satisfy g^T J g = J")
    space = weyl_space(ctx.spec, ctx.m0)

    # 1. Synthesize
    if method == "stabilizer":
        U, _ = _synthesize_stabilizer(g, space)
    elif method == "nullspace":
        U, _ = _synthesize_nullspace(g, space)
    else:
        raise ValueError(f"unknown synthesis method '{method}'")

    # 2. Unitarity and phase convention
    if not is_unitary(U, UNITARY_TOL):
        raise SynthesisFailed("synthesized operator is not unitary")
    U = normalize_global_phase(U)

    # 3. Certificate over generators, then all labels when small or a seeded sample
    gen_dev, gen_phases = mn1_deviation(U, g, space, space.generator_labels())
    exhaustive = space.dim <= EXHAUSTIVE_CHECK_LIMIT
    if exhaustive:
        all_labels = list(space.all_labels())
        max_dev, _ = mn1_deviation(U, g, space, all_labels)
        checked = len(all_labels)
    else:
        rng = np.random.default_rng(CERTIFICATE_SEED)
        sample = list(rng.integers(0, space.q, size=(CERTIFICATE_SAMPLE_SIZE, 2 * space.n)))
        sample_dev, _ = mn1_deviation(U, g, space, sample)
        max_dev, checked = max(gen_dev, sample_dev), len(gen_phases) + len(sample)
    if max_dev > UNITARY_TOL:
        raise SynthesisFailed(f"intertwining relation violated by {max_dev:.3e}")

    return U, MetaplecticCertificate(method, gen_phases, max_dev, exhaustive, checked)
