# Exact linear algebra over F_q on galois FieldArrays.
#
# FqVector is a 1-D FieldArray, FqMatrix a 2-D FieldArray. Row reduction, rank,
# null spaces and inverses are galois calls; the span helpers below (complements,
# projections, splits) are built on them.

from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateSpan, DimensionError, SingularMatrix

FqVector = np.ndarray
FqMatrix = np.ndarray


#
# --- Helper Function: Stacking ---
#

def _field_of(arr):
    return type(arr)


def as_columns(vectors: Sequence[FqVector], length: Optional[int] = None, GF=None) -> FqMatrix:
    """
    Stacks vectors as the columns of a matrix.

    Args:
        vectors: FqVectors of equal length
        length: row count to use when `vectors` is empty
        GF: field class to use when `vectors` is empty

    Returns:
        FqMatrix: len(vectors[0]) x len(vectors) matrix
    """
    if len(vectors) == 0:
        if length is None or GF is None:
            raise DimensionError("empty vector list needs an explicit length and field")
        return GF(np.zeros((length, 0), dtype=np.int64))
    GF = _field_of(vectors[0])
    ints = np.stack([np.asarray(v).view(np.ndarray) for v in vectors], axis=1)
    return GF(ints)


def columns_of(M: FqMatrix) -> List[FqVector]:
    return [M[:, j].copy() for j in range(M.shape[1])]


def hstack(blocks: Sequence[FqMatrix]) -> FqMatrix:
    GF = _field_of(blocks[0])
    return GF(np.hstack([np.asarray(b).view(np.ndarray) for b in blocks]))


def vstack(blocks: Sequence[FqMatrix]) -> FqMatrix:
    GF = _field_of(blocks[0])
    return GF(np.vstack([np.asarray(b).view(np.ndarray) for b in blocks]))


def block_diag(A: FqMatrix, B: FqMatrix) -> FqMatrix:
    GF = _field_of(A)
    out = np.zeros((A.shape[0] + B.shape[0], A.shape[1] + B.shape[1]), dtype=np.int64)
    out[: A.shape[0], : A.shape[1]] = np.asarray(A).view(np.ndarray)
    out[A.shape[0]:, A.shape[1]:] = np.asarray(B).view(np.ndarray)
    return GF(out)


def unit_vector(GF, n: int, index: int) -> FqVector:
    v = np.zeros(n, dtype=np.int64)
    v[index] = 1
    return GF(v)


#
# --- Helper Function: Row Reduction ---
#

def row_reduce(M: FqMatrix, ncols: Optional[int] = None) -> Tuple[FqMatrix, List[int]]:
    """
    Reduced row echelon form via FieldArray.row_reduce, plus the pivot columns.

    Args:
        M: matrix to reduce (not modified)
        ncols: only the first `ncols` columns are used as pivot columns

    Returns:
        tuple: (R, pivots) with R in reduced row echelon form
    """
    rows, cols = M.shape
    limit = cols if ncols is None else ncols
    if rows == 0 or limit == 0:
        return M.copy(), []
    R = M.row_reduce(ncols=limit)
    pivots = []
    for row in np.asarray(R[:, :limit]).view(np.ndarray):
        nz = np.flatnonzero(row)
        if nz.size:
            pivots.append(int(nz[0]))
    return R, pivots


#
# --- Operations ---
#

def rank(M: FqMatrix) -> int:
    if M.size == 0:
        return 0
    return int(np.linalg.matrix_rank(M))


def kernel_basis(M: FqMatrix) -> List[FqVector]:
    """
    Basis of the right null space {x : M x = 0}, from FieldArray.null_space.

    Returns:
        list: one FqVector per basis row; empty iff M has full column rank
    """
    GF = _field_of(M)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return [unit_vector(GF, cols, j) for j in range(cols)]
    if cols == 0:
        return []
    return [row.copy() for row in M.null_space()]


def inverse(M: FqMatrix) -> FqMatrix:
    """Inverse of a square matrix; raises SingularMatrix when none exists."""
    n, m = M.shape
    if n != m:
        raise DimensionError(f"inverse of a non-square {n}x{m} matrix")
    r = rank(M)
    if r < n:
        raise SingularMatrix(f"matrix has rank {r} < {n}")
    return np.linalg.inv(M)


def independent_subset(vectors: Sequence[FqVector]) -> List[FqVector]:
    """Greedy subset of `vectors` (in order) spanning the same space."""
    chosen = []
    current = 0
    for v in vectors:
        trial = chosen + [v]
        r = rank(as_columns(trial))
        if r > current:
            chosen.append(v)
            current = r
    return chosen


def greedy_complement(span: Sequence[FqVector], n: int, GF, candidates: Optional[Sequence[FqVector]] = None) -> List[FqVector]:
    """
    Extends `span` to a basis of F_q^n (or of span + candidates).

    Candidates default to the standard basis vectors in index order.
    """
    if candidates is None:
        candidates = [unit_vector(GF, n, i) for i in range(n)]
    chosen = list(span)
    current = rank(as_columns(chosen, n, GF)) if chosen else 0
    added = []
    for v in candidates:
        r = rank(as_columns(chosen + [v]))
        if r > current:
            chosen.append(v)
            added.append(v)
            current = r
    return added


def projection_onto(span: Sequence[FqVector], complement_hint: Optional[Sequence[FqVector]] = None,
                    n: Optional[int] = None, GF=None) -> FqMatrix:
    """
    Idempotent P with image span(span) and kernel the chosen complement.

    P = B diag(I_k, 0) B^{-1} with B = [span | complement].

    Args:
        span: independent FqVectors
        complement_hint: vectors completing `span` to a basis; greedy standard
            basis extension when omitted
        n, GF: ambient dimension and field, needed only when `span` is empty

    Returns:
        FqMatrix: n x n projection
    """
    if span:
        n = len(span[0])
        GF = _field_of(span[0])
    k = len(span)
    if k and rank(as_columns(span)) < k:
        raise DegenerateSpan(f"{k} spanning vectors are linearly dependent")

    complement = list(complement_hint) if complement_hint is not None else greedy_complement(span, n, GF)
    if k + len(complement) != n:
        raise DegenerateSpan(f"span ({k}) and complement ({len(complement)}) do not fill dimension {n}")

    B = as_columns(list(span) + complement, n, GF)
    B_inv = inverse(B)  # SingularMatrix if the hint is not a complement
    D = GF(np.zeros((n, n), dtype=np.int64))
    for i in range(k):
        D[i, i] = 1
    return B @ D @ B_inv


def solve_particular(A: FqMatrix, b: FqVector) -> Optional[FqVector]:
    """
    One solution of A x = b (free variables set to zero), or None if inconsistent.
    """
    GF = _field_of(A)
    rows, cols = A.shape
    augmented = hstack([A, GF(np.asarray(b).view(np.ndarray).reshape(rows, 1))])
    R, pivots = row_reduce(augmented, ncols=cols)
    # Inconsistent iff a zero row of A carries a nonzero right-hand side
    for i in range(len(pivots), rows):
        if int(R[i, cols]) != 0:
            return None
    x = GF(np.zeros(cols, dtype=np.int64))
    for row, pc in enumerate(pivots):
        x[pc] = R[row, cols]
    return x


def split_along(u: FqVector, first: Sequence[FqVector], second: Sequence[FqVector]) -> Tuple[FqVector, FqVector]:
    """
    Decomposes u = u1 + u2 with u1 in span(first), u2 in span(second).

    The two spans must form a direct sum containing u.
    """
    basis = list(first) + list(second)
    B = as_columns(basis)
    coeffs = solve_particular(B, u)
    if coeffs is None:
        raise DimensionError("vector lies outside the direct sum")
    k = len(first)
    GF = _field_of(u)
    u1 = as_columns(first, len(u), GF) @ coeffs[:k] if k else GF(np.zeros(len(u), dtype=np.int64))
    return u1, u - u1


def span_contains(basis: Sequence[FqVector], v: FqVector) -> bool:
    if not basis:
        return not np.any(np.asarray(v).view(np.ndarray))
    B = as_columns(basis)
    return rank(hstack([B, _field_of(v)(np.asarray(v).view(np.ndarray).reshape(-1, 1))])) == rank(B)


def to_int_rows(M: FqMatrix) -> list:
    """Row-major integer lists for serialization."""
    return np.asarray(M).view(np.ndarray).astype(np.int64).tolist()


def from_int_rows(rows, GF) -> FqMatrix:
    data = np.asarray(rows, dtype=np.int64)
    if data.ndim != 2:
        raise DimensionError(f"expected a 2-D integer matrix, got {data.ndim} dimensions")
    if data.size and (data.min() < 0 or data.max() >= GF.order):
        raise DimensionError(f"matrix entry outside [0, {GF.order})")
    return GF(data)
