"""Dense exact matrices over the table fields.

Vectors are rows and matrices act on the right, v -> v @ A.  Submodules are
row spaces and kernels are left kernels throughout.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError, InternalCheckError
from .fields import FqField, field_create, poly_mul, poly_scale, poly_sub, poly_trim


class FqMatrix:
    __slots__ = ("field", "a")

    def __init__(self, field: FqField, a):
        arr = np.asarray(a, dtype=np.int64)
        if arr.ndim != 2:
            raise InputError("matrix data must be two dimensional")
        self.field = field
        self.a = arr

    @classmethod
    def identity(cls, field: FqField, n: int) -> "FqMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FqField, r: int, c: int) -> "FqMatrix":
        return cls(field, np.zeros((r, c), dtype=np.int64))

    @property
    def shape(self):
        return self.a.shape

    @property
    def nrows(self):
        return self.a.shape[0]

    @property
    def ncols(self):
        return self.a.shape[1]

    def copy(self) -> "FqMatrix":
        return FqMatrix(self.field, self.a.copy())

    def __eq__(self, other):
        return (
            isinstance(other, FqMatrix)
            and self.field.q == other.field.q
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.field.q, self.a.shape, self.a.tobytes()))

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        return FqMatrix(self.field, self.field.add(self.a, other.a))

    def __sub__(self, other: "FqMatrix") -> "FqMatrix":
        return FqMatrix(self.field, self.field.sub(self.a, other.a))

    def __neg__(self) -> "FqMatrix":
        return FqMatrix(self.field, self.field.neg(self.a))

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        if self.ncols != other.nrows:
            raise InputError("matrix shape mismatch in product")
        F = self.field
        prod = F.mul(self.a[:, :, None], other.a[None, :, :])
        return FqMatrix(F, F.sum(prod, axis=1))

    def scale(self, c: int) -> "FqMatrix":
        return FqMatrix(self.field, self.field.mul(self.a, c))

    def t(self) -> "FqMatrix":
        return FqMatrix(self.field, self.a.T.copy())

    def trace(self) -> int:
        return int(self.field.sum(np.diagonal(self.a), axis=0))

    def is_zero(self) -> bool:
        return not self.a.any()

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and bool(
            np.array_equal(self.a, np.eye(self.nrows, dtype=np.int64))
        )

    def kron(self, other: "FqMatrix") -> "FqMatrix":
        F = self.field
        ra, ca = self.shape
        rb, cb = other.shape
        big = F.mul(self.a[:, None, :, None], other.a[None, :, None, :])
        return FqMatrix(F, big.reshape(ra * rb, ca * cb))

    def rref(self):
        """Reduced row echelon form: (R, pivots, T) with T @ self == R."""
        F = self.field
        R = self.a.copy()
        r, c = R.shape
        T = np.eye(r, dtype=np.int64)
        pivots = []
        row = 0
        for col in range(c):
            if row == r:
                break
            nz = np.nonzero(R[row:, col])[0]
            if nz.size == 0:
                continue
            pr = row + int(nz[0])
            if pr != row:
                R[[row, pr]] = R[[pr, row]]
                T[[row, pr]] = T[[pr, row]]
            inv = F.inv(int(R[row, col]))
            R[row] = F.mul(R[row], inv)
            T[row] = F.mul(T[row], inv)
            mask = R[:, col] != 0
            mask[row] = False
            if mask.any():
                f = R[mask, col][:, None]
                R[mask] = F.sub(R[mask], F.mul(f, R[row][None, :]))
                T[mask] = F.sub(T[mask], F.mul(f, T[row][None, :]))
            pivots.append(col)
            row += 1
        return FqMatrix(F, R), tuple(pivots), FqMatrix(F, T)

    def rank(self) -> int:
        return len(self.rref()[1])

    def left_nullspace(self) -> "FqMatrix":
        """Rows form a basis of {v : v @ self == 0}."""
        R, pivots, T = self.rref()
        return FqMatrix(self.field, T.a[len(pivots):].copy())

    def inverse(self) -> "FqMatrix":
        if self.nrows != self.ncols:
            raise InputError("only square matrices invert")
        R, pivots, T = self.rref()
        if len(pivots) != self.nrows:
            raise InputError("matrix is singular")
        return T

    def solve_rows(self, B: "FqMatrix"):
        """X with X @ self == B, or None when some row of B is outside the row space."""
        F = self.field
        R, pivots, T = self.rref()
        resid = B.a.copy()
        C = np.zeros((B.nrows, self.nrows), dtype=np.int64)
        for k, col in enumerate(pivots):
            f = resid[:, col].copy()
            C[:, k] = f
            resid = F.sub(resid, F.mul(f[:, None], R.a[k][None, :]))
        if resid.any():
            return None
        return FqMatrix(F, C) @ T

    def charpoly(self):
        """Monic characteristic polynomial as a code list, degree n at index n."""
        if self.nrows != self.ncols:
            raise InputError("characteristic polynomial needs a square matrix")
        F = self.field
        n = self.nrows
        H = self.a.copy()
        for m in range(n - 1):
            nz = np.nonzero(H[m + 1 :, m])[0]
            if nz.size == 0:
                continue
            i = m + 1 + int(nz[0])
            if i != m + 1:
                H[[m + 1, i]] = H[[i, m + 1]]
                H[:, [m + 1, i]] = H[:, [i, m + 1]]
            piv = int(H[m + 1, m])
            for r2 in range(m + 2, n):
                if H[r2, m] == 0:
                    continue
                u = F.div(int(H[r2, m]), piv)
                H[r2] = F.sub(H[r2], F.mul(u, H[m + 1]))
                H[:, m + 1] = F.add(H[:, m + 1], F.mul(u, H[:, r2]))
        polys = [[1]]
        for m in range(1, n + 1):
            p = poly_mul(F, [F.neg(int(H[m - 1, m - 1])), 1], polys[m - 1])
            prod = 1
            for i in range(m - 1, 0, -1):
                prod = F.mul(prod, int(H[i, i - 1]))
                if prod == 0:
                    break
                term = F.mul(int(H[i - 1, m - 1]), prod)
                if term:
                    p = poly_sub(F, p, poly_scale(F, term, polys[i - 1]))
            polys.append(p)
        cp = polys[n] + [0] * (n + 1 - len(polys[n]))
        if cp[n] != 1:
            raise InternalCheckError("characteristic polynomial lost monicity")
        return cp

    def __repr__(self):
        return "FqMatrix(GF(%d), %dx%d)" % (self.field.q, self.nrows, self.ncols)


def mat(field: FqField, rows) -> FqMatrix:
    return FqMatrix(field, rows)


def expand_entries(A: FqMatrix) -> FqMatrix:
    """Replace each entry by its regular multiplication block over the prime field.

    The result is an (r*s) x (c*s) matrix over GF(p) and the map is an algebra
    homomorphism for the row convention.
    """
    E = A.field
    if E.s == 1:
        return A.copy()
    P = field_create(E.p, 1)
    r, c = A.shape
    e = E.s
    out = np.zeros((r * e, c * e), dtype=np.int64)
    for i in range(r):
        for j in range(c):
            v = int(A.a[i, j])
            if v:
                out[i * e : (i + 1) * e, j * e : (j + 1) * e] = E.regular_matrix(v)
    return FqMatrix(P, out)


def contract_entries(A: FqMatrix, E: FqField):
    """Inverse of expand_entries when every block is a regular block, else None."""
    p = A.field.p
    if E.p != p:
        raise InputError("field characteristic mismatch")
    e = E.s
    if e == 1:
        return A.copy()
    r, c = A.shape
    if r % e or c % e:
        return None
    out = np.zeros((r // e, c // e), dtype=np.int64)
    for i in range(r // e):
        for j in range(c // e):
            block = A.a[i * e : (i + 1) * e, j * e : (j + 1) * e]
            v = E.from_digits(block[0])
            if not np.array_equal(E.regular_matrix(int(v)), block):
                return None
            out[i, j] = v
    return FqMatrix(E, out)


class EchelonBasis:
    """Incrementally maintained reduced echelon basis of a row space."""

    def __init__(self, field: FqField, ncols: int):
        self.field = field
        self.ncols = ncols
        self.rows = []
        self.pivots = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v):
        F = self.field
        v = np.array(v, dtype=np.int64)
        for row, piv in zip(self.rows, self.pivots):
            c = int(v[piv])
            if c:
                v = F.sub(v, F.mul(c, row))
        return v

    def insert(self, v) -> bool:
        """Add a vector; returns True when it enlarged the space."""
        F = self.field
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        v = F.mul(v, F.inv(int(v[piv])))
        for i, row in enumerate(self.rows):
            c = int(row[piv])
            if c:
                self.rows[i] = F.sub(row, F.mul(c, v))
        self.rows.append(v)
        self.pivots.append(piv)
        return True

    def insert_all(self, rows) -> int:
        n = 0
        for v in rows:
            if self.insert(v):
                n += 1
        return n

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def matrix(self) -> FqMatrix:
        order = np.argsort(np.array(self.pivots, dtype=np.int64)) if self.rows else []
        data = np.zeros((len(self.rows), self.ncols), dtype=np.int64)
        for k, i in enumerate(order):
            data[k] = self.rows[int(i)]
        return FqMatrix(self.field, data)

    def nonpivot_columns(self):
        pivset = set(self.pivots)
        return [c for c in range(self.ncols) if c not in pivset]
