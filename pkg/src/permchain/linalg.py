"""Dense exact matrices over F_{p^n}.

Entries are stored as integer codes (see ffield) in a 2-D numpy int16 array.
Row reduction uses deterministic pivoting: first nonzero column, first
nonzero row, so every basis this module produces is bit-identical across
runs.  Matrix products decompose codes into coefficient planes and go
through integer matmul, which keeps everything vectorized.
"""

from __future__ import annotations

import numpy as np

from .errors import FieldMismatch, NotSubspace
from .ffield import FqField, FqScalar


class FqMatrix:
    __slots__ = ("field", "a")

    def __init__(self, field: FqField, codes):
        self.field = field
        a = np.asarray(codes, dtype=np.int16)
        if a.ndim != 2:
            raise ValueError("FqMatrix requires a 2-D array")
        self.a = a

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(field: FqField, rows: int, cols: int) -> "FqMatrix":
        return FqMatrix(field, np.zeros((rows, cols), dtype=np.int16))

    @staticmethod
    def identity(field: FqField, n: int) -> "FqMatrix":
        return FqMatrix(field, np.eye(n, dtype=np.int16))

    @staticmethod
    def from_int_rows(field: FqField, rows) -> "FqMatrix":
        """Build from integer entries, reduced modulo p (prime subfield)."""
        a = np.asarray(rows, dtype=np.int64) % field.p
        return FqMatrix(field, a.astype(np.int16))

    @staticmethod
    def column(field: FqField, codes) -> "FqMatrix":
        return FqMatrix(field, np.asarray(codes, dtype=np.int16).reshape(-1, 1))

    # -- basics -------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def copy(self) -> "FqMatrix":
        return FqMatrix(self.field, self.a.copy())

    def __eq__(self, other):
        return (
            isinstance(other, FqMatrix)
            and self.field == other.field
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.field, self.a.shape, self.a.tobytes()))

    def is_zero(self) -> bool:
        return not self.a.any()

    def _check(self, other: "FqMatrix"):
        if self.field != other.field:
            raise FieldMismatch("matrices over different fields")

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        return FqMatrix(self.field, self.field.add[self.a, other.a])

    def __sub__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        return FqMatrix(self.field, self.field.sub[self.a, other.a])

    def __neg__(self) -> "FqMatrix":
        return FqMatrix(self.field, self.field.neg[self.a])

    def scale(self, code: int) -> "FqMatrix":
        return FqMatrix(self.field, self.field.mul[self.a, int(code)])

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        f = self.field
        p, n = f.p, f.n
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        A = self.a.astype(np.int64)
        B = other.a.astype(np.int64)
        if n == 1:
            return FqMatrix(f, ((A @ B) % p).astype(np.int16))
        pa = [(A // p ** i) % p for i in range(n)]
        pb = [(B // p ** i) % p for i in range(n)]
        conv = [None] * (2 * n - 1)
        for i in range(n):
            for j in range(n):
                prod = pa[i] @ pb[j]
                k = i + j
                conv[k] = prod if conv[k] is None else conv[k] + prod
        # w^k reduces to a coefficient row of the power basis table
        basis = f.power_basis
        planes = [np.zeros((self.rows, other.cols), dtype=np.int64) for _ in range(n)]
        for k in range(2 * n - 1):
            ck = conv[k] % p
            for i in range(n):
                if basis[k, i]:
                    planes[i] += ck * int(basis[k, i])
        code = sum((planes[i] % p) * (p ** i) for i in range(n))
        return FqMatrix(f, code.astype(np.int16))

    def kron(self, other: "FqMatrix") -> "FqMatrix":
        """Kronecker product; index (i, k) maps to i * other.rows + k."""
        self._check(other)
        f = self.field
        A, B = self.a, other.a
        out = f.mul[A[:, None, :, None], B[None, :, None, :]]
        return FqMatrix(f, out.reshape(self.rows * other.rows, self.cols * other.cols))

    @property
    def T(self) -> "FqMatrix":
        return FqMatrix(self.field, self.a.T.copy())

    def col(self, j: int) -> "FqMatrix":
        return FqMatrix(self.field, self.a[:, j : j + 1].copy())

    def take_cols(self, idx) -> "FqMatrix":
        return FqMatrix(self.field, self.a[:, list(idx)].copy())

    def entry(self, i: int, j: int) -> FqScalar:
        return FqScalar(self.field, int(self.a[i, j]))

    def trace(self) -> FqScalar:
        f = self.field
        acc = 0
        for i in range(min(self.rows, self.cols)):
            acc = int(f.add[acc, int(self.a[i, i])])
        return FqScalar(f, acc)

    def map_codes(self, table: np.ndarray) -> "FqMatrix":
        """Apply a code-indexed table entrywise (e.g. Frobenius)."""
        return FqMatrix(self.field, table[self.a].astype(np.int16))

    def __repr__(self):
        return f"FqMatrix(F{self.field.q}, {self.rows}x{self.cols})"


def hstack(mats) -> FqMatrix:
    mats = list(mats)
    return FqMatrix(mats[0].field, np.hstack([m.a for m in mats]))


def vstack(mats) -> FqMatrix:
    mats = list(mats)
    return FqMatrix(mats[0].field, np.vstack([m.a for m in mats]))


def block_diag(field: FqField, mats) -> FqMatrix:
    mats = list(mats)
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int16)
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return FqMatrix(field, out)


def rref(M: FqMatrix):
    """Reduced row echelon form.

    Returns (R, rank, pivot_cols).  Pivoting is deterministic: columns are
    scanned left to right and the first row with a nonzero entry is used.
    """
    f = M.field
    R = M.a.copy()
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        piv = int(R[r, c])
        if piv != 1:
            R[r] = f.mul[R[r], int(f.inv[piv])]
        factors = R[:, c].copy()
        factors[r] = 0
        if factors.any():
            R = f.sub[R, f.mul[factors[:, None], R[r][None, :]]]
        pivots.append(c)
        r += 1
    return FqMatrix(f, R), len(pivots), pivots


def rank(M: FqMatrix) -> int:
    return rref(M)[1]


def kernel_basis(M: FqMatrix) -> FqMatrix:
    """Columns form a basis of the right kernel {x : Mx = 0}."""
    f = M.field
    R, rk, pivots = rref(M)
    free = [j for j in range(M.cols) if j not in set(pivots)]
    out = np.zeros((M.cols, len(free)), dtype=np.int16)
    for k, j in enumerate(free):
        out[j, k] = 1
        for i, pc in enumerate(pivots):
            out[pc, k] = f.neg[int(R.a[i, j])]
    return FqMatrix(f, out)


def image_basis(M: FqMatrix) -> FqMatrix:
    """The pivot columns of M: a deterministic basis of the column space."""
    _, _, pivots = rref(M)
    return M.take_cols(pivots)


def solve(M: FqMatrix, b: FqMatrix):
    """One solution of Mx = b with free variables set to zero, or None."""
    X = solve_matrix(M, b)
    return X


def solve_matrix(M: FqMatrix, B: FqMatrix):
    """Solve MX = B columnwise; None if any column is inconsistent."""
    M._check(B)
    if M.rows != B.rows:
        raise ValueError("right-hand side has wrong number of rows")
    aug = hstack([M, B])
    R, rk, pivots = rref(aug)
    for pc in pivots:
        if pc >= M.cols:
            return None
    out = np.zeros((M.cols, B.cols), dtype=np.int16)
    for i, pc in enumerate(pivots):
        out[pc, :] = R.a[i, M.cols :]
    return FqMatrix(M.field, out)


def in_span(V: FqMatrix, W: FqMatrix) -> bool:
    """True when every column of W lies in the column span of V."""
    return solve_matrix(V, W) is not None


def quotient_space(V_basis: FqMatrix, W_basis: FqMatrix):
    """Quotient of span(V_basis) by span(W_basis).

    Both arguments are column bases in a common ambient space, with
    span(W) <= span(V) required.  Returns (section, projection) where
    projection maps V-coordinates onto quotient coordinates and section
    picks coordinate representatives: projection @ section = identity and
    projection kills the W-coordinates exactly.
    """
    f = V_basis.field
    v = V_basis.cols
    if W_basis.cols == 0:
        return FqMatrix.identity(f, v), FqMatrix.identity(f, v)
    X = solve_matrix(V_basis, W_basis)  # W in V-coordinates
    if X is None:
        raise NotSubspace("W_basis is not contained in the span of V_basis")
    R, rk, pivots = rref(X.T)
    free = [j for j in range(v) if j not in set(pivots)]
    qdim = v - rk
    # projection: reduce a coordinate vector by the echelon rows, keep free coords
    proj = np.zeros((qdim, v), dtype=np.int16)
    for k, j in enumerate(free):
        proj[k, j] = 1
        for i, pc in enumerate(pivots):
            # subtracting R row i scaled by the pivot coordinate
            proj[k, pc] = f.neg[int(R.a[i, j])]
    section = np.zeros((v, qdim), dtype=np.int16)
    for k, j in enumerate(free):
        section[j, k] = 1
    return FqMatrix(f, section), FqMatrix(f, proj)


def complete_to_basis(B: FqMatrix) -> list:
    """Indices of standard basis vectors extending the columns of B to a
    basis of the ambient space (deterministic, greedy by rref pivots)."""
    f = B.field
    n = B.rows
    aug = hstack([B, FqMatrix.identity(f, n)])
    _, _, pivots = rref(aug)
    return [pc - B.cols for pc in pivots if pc >= B.cols]
