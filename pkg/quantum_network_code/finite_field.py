# Exact arithmetic in F_q = F_p^d over a chosen modulus polynomial.
#
# Field elements use the integer encoding of `galois`: the coefficient list
# c_0 + c_1 x + ... + c_{d-1} x^{d-1} is packed little-endian in base p,
# value = sum(c_i * p**i). Vectors and matrices over F_q are plain galois
# FieldArrays built from FieldSpec.GF.

import functools
from dataclasses import dataclass
from typing import Optional, Sequence

import galois
import numpy as np

from .errors import DivisionByZero, FieldMismatch, InvalidField

#
# --- Built-in modulus table ---
#

# Ascending coefficient lists, monic. Degree-1 fields use x.
DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),        # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),     # x^3 + x + 1
    (3, 2): (2, 2, 1),        # x^2 + 2x + 2
    (3, 3): (1, 2, 0, 1),     # x^3 + 2x + 1
    (5, 2): (2, 4, 1),        # x^2 + 4x + 2
    (5, 3): (3, 3, 0, 1),     # x^3 + 3x + 3
}


def _poly_eval_mod_p(coeffs, x, p):
    value = 0
    for c in reversed(coeffs):
        value = (value * x + c) % p
    return value


def is_irreducible_modulus(p: int, modulus: Sequence[int]) -> bool:
    """
    Checks irreducibility of a monic polynomial over F_p.

    Degrees up to 3 are decided by an exhaustive root search (a reducible
    polynomial of degree <= 3 has a linear factor). Higher degrees defer to
    galois.Poly.is_irreducible.

    Args:
        p: prime characteristic
        modulus: ascending coefficient list

    Returns:
        bool: True when the polynomial is irreducible
    """
    degree = len(modulus) - 1
    if degree == 1:
        return True
    if degree <= 3:
        return all(_poly_eval_mod_p(modulus, x, p) != 0 for x in range(p))
    poly = galois.Poly(list(modulus), field=galois.GF(p), order="asc")
    return bool(poly.is_irreducible())


@functools.lru_cache(maxsize=None)
def _field_class(p: int, degree: int, modulus: tuple):
    if degree == 1:
        return galois.GF(p)
    poly = galois.Poly(list(modulus), field=galois.GF(p), order="asc")
    return galois.GF(p ** degree, irreducible_poly=poly)


@functools.lru_cache(maxsize=None)
def _tables(p: int, degree: int, modulus: tuple):
    # 1. Enumerate all q elements once
    GF = _field_class(p, degree, modulus)
    q = p ** degree
    elements = GF(np.arange(q))

    # 2. Addition and multiplication tables as integer arrays
    add = (elements[:, None] + elements[None, :]).view(np.ndarray).astype(np.int64)
    mul = (elements[:, None] * elements[None, :]).view(np.ndarray).astype(np.int64)
    neg = (-elements).view(np.ndarray).astype(np.int64)

    # 3. Trace of every element via its multiplication matrix
    spec = FieldSpec(p, degree, modulus)
    trace = np.array([ff_trace(FieldElement(spec, z)) for z in range(q)], dtype=np.int64)
    return add, mul, neg, trace


#
# --- Domain Types ---
#

@dataclass(frozen=True)
class FieldSpec:
    """
    The finite field F_q with q = p**degree.

    Attributes:
        p: prime characteristic
        degree: extension degree d_q >= 1
        modulus: monic irreducible polynomial over F_p, ascending coefficients
    """

    p: int
    degree: int = 1
    modulus: Optional[tuple] = None

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or self.p < 2 or not galois.is_prime(int(self.p)):
            raise InvalidField(f"characteristic {self.p} is not prime")
        if self.degree < 1:
            raise InvalidField(f"extension degree must be >= 1, got {self.degree}")

        modulus = self.modulus
        if modulus is None:
            if self.degree == 1:
                modulus = (0, 1)
            elif (self.p, self.degree) in DEFAULT_MODULI:
                modulus = DEFAULT_MODULI[(self.p, self.degree)]
            else:
                # Fall back to the Conway-style polynomial galois ships
                poly = galois.irreducible_poly(self.p, self.degree)
                modulus = tuple(int(c) for c in poly.coeffs[::-1])
        modulus = tuple(int(c) for c in modulus)

        if len(modulus) != self.degree + 1:
            raise InvalidField(f"modulus must have {self.degree + 1} coefficients, got {len(modulus)}")
        if modulus[-1] != 1:
            raise InvalidField("modulus must be monic")
        if any(c < 0 or c >= self.p for c in modulus):
            raise InvalidField(f"modulus coefficients must lie in [0, {self.p})")
        if not is_irreducible_modulus(self.p, modulus):
            raise InvalidField(f"modulus {list(modulus)} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", modulus)

    @property
    def q(self) -> int:
        return self.p ** self.degree

    @property
    def GF(self):
        """galois FieldArray class for this field."""
        return _field_class(self.p, self.degree, self.modulus)

    @property
    def omega(self) -> complex:
        """Primitive p-th root of unity exp(2 pi i / p)."""
        return complex(np.exp(2j * np.pi / self.p))

    # --- conversions ---

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, int(value))

    def array(self, values):
        """Wraps integers (or nested lists) into a FieldArray, checking the range."""
        ints = np.asarray(values, dtype=np.int64)
        if ints.size and (ints.min() < 0 or ints.max() >= self.q):
            raise InvalidField(f"field element out of range [0, {self.q})")
        return self.GF(ints)

    def to_ints(self, arr) -> np.ndarray:
        return np.asarray(arr).view(np.ndarray).astype(np.int64)

    def coeffs(self, value: int) -> np.ndarray:
        """Little-endian base-p digits of an element."""
        digits = np.zeros(self.degree, dtype=np.int64)
        v = int(value)
        for i in range(self.degree):
            digits[i] = v % self.p
            v //= self.p
        return digits

    def from_coeffs(self, coeffs) -> int:
        return int(sum(int(c) * self.p ** i for i, c in enumerate(coeffs)))

    def zeros(self, shape):
        return self.GF(np.zeros(shape, dtype=np.int64))

    def identity(self, n: int):
        return self.GF(np.eye(n, dtype=np.int64))

    def minus_one(self) -> int:
        return self.p - 1

    # --- lookup tables over all q elements ---

    def add_table(self) -> np.ndarray:
        return _tables(self.p, self.degree, self.modulus)[0]

    def mul_table(self) -> np.ndarray:
        return _tables(self.p, self.degree, self.modulus)[1]

    def neg_table(self) -> np.ndarray:
        return _tables(self.p, self.degree, self.modulus)[2]

    def trace_table(self) -> np.ndarray:
        """tr(z) in F_p for z = 0..q-1."""
        return _tables(self.p, self.degree, self.modulus)[3]

    def trace_product_table(self) -> np.ndarray:
        """tr(a*b) in F_p for all pairs of elements."""
        return self.trace_table()[self.mul_table()]

    def to_dict(self) -> dict:
        return {"p": int(self.p), "degree": int(self.degree), "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: dict) -> "FieldSpec":
        modulus = data.get("modulus")
        return cls(int(data["p"]), int(data.get("degree", 1)), tuple(modulus) if modulus is not None else None)

    def __str__(self):
        return f"GF({self.p}^{self.degree})" if self.degree > 1 else f"GF({self.p})"


@dataclass(frozen=True)
class FieldElement:
    """An element of F_q, stored as its packed integer."""

    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= int(self.value) < self.spec.q:
            raise InvalidField(f"value {self.value} is not an element of {self.spec}")
        object.__setattr__(self, "value", int(self.value))

    @property
    def coeffs(self) -> np.ndarray:
        return self.spec.coeffs(self.value)

    def to_galois(self):
        return self.spec.GF(self.value)

    def __add__(self, other):
        return ff_arith(self, other, "add")

    def __sub__(self, other):
        return ff_arith(self, other, "sub")

    def __mul__(self, other):
        return ff_arith(self, other, "mul")

    def __neg__(self):
        return ff_arith(self, None, "neg")

    def inverse(self):
        return ff_arith(self, None, "inv")

    def __int__(self):
        return self.value


#
# --- Operations ---
#

def ff_arith(a: FieldElement, b: Optional[FieldElement], kind: str) -> FieldElement:
    """
    Exact field arithmetic.

    Args:
        a: left operand
        b: right operand (ignored for 'neg' and 'inv')
        kind: one of add, sub, mul, inv, neg

    Returns:
        FieldElement: the result, reduced modulo the modulus polynomial
    """
    GF = a.spec.GF
    x = GF(a.value)

    if kind == "neg":
        return FieldElement(a.spec, int(-x))
    if kind == "inv":
        if a.value == 0:
            raise DivisionByZero(f"zero has no inverse in {a.spec}")
        return FieldElement(a.spec, int(GF(1) / x))

    if b is None or b.spec != a.spec:
        raise FieldMismatch(f"operands from {a.spec} and {getattr(b, 'spec', None)}")
    y = GF(b.value)
    if kind == "add":
        return FieldElement(a.spec, int(x + y))
    if kind == "sub":
        return FieldElement(a.spec, int(x - y))
    if kind == "mul":
        return FieldElement(a.spec, int(x * y))
    raise ValueError(f"unknown arithmetic kind '{kind}'")


def mul_matrix_rep(z: FieldElement) -> np.ndarray:
    """
    Matrix of x -> z*x over F_p in the polynomial basis {1, x, ..., x^{d-1}}.

    Column j holds the coefficients of z * x^j, so M @ coeffs(y) == coeffs(z*y) (mod p).

    Returns:
        np.ndarray: d x d integer matrix with entries in [0, p)
    """
    spec = z.spec
    GF = spec.GF
    zg = GF(z.value)
    columns = []
    for j in range(spec.degree):
        basis = GF(spec.p ** j)
        columns.append(spec.coeffs(int(zg * basis)))
    return np.stack(columns, axis=1)


def ff_trace(z: FieldElement) -> int:
    """Trace F_q -> F_p, the trace of mul_matrix_rep(z) reduced mod p."""
    return int(np.trace(mul_matrix_rep(z)) % z.spec.p)
