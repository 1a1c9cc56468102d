"""Exact arithmetic in small finite fields and polynomial rings over them.

An element of GF(p**s) is an integer code whose base-p digits are the
coefficients of its residue polynomial, constant term in the least
significant digit.  The modulus is the least monic irreducible polynomial of
degree s in code order and the generator is the least code of full
multiplicative order, so the field is determined by (p, s) alone and every
value is reproducible across runs.  Array operations take and return numpy
int64 arrays of codes; scalars go in and out as python ints.

Polynomials over a field are python lists of codes indexed by degree.
"""

from __future__ import annotations

import random

import numpy as np

from .errors import InputError, InternalCheckError, ResourceLimitError
from .groups import is_prime

MAX_FIELD_SIZE = 1 << 20

_FIELDS = {}


def field_create(p: int, s: int) -> "FqField":
    """The canonical GF(p**s); instances are cached per (p, s)."""
    key = (p, s)
    if key not in _FIELDS:
        _FIELDS[key] = FqField(p, s)
    return _FIELDS[key]


def prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FqField:
    """GF(p**s) with exp/log tables over integer codes."""

    def __init__(self, p: int, s: int):
        if not is_prime(p):
            raise InputError("field characteristic must be prime, got %r" % (p,))
        if s < 1:
            raise InputError("field degree must be positive")
        if p**s > MAX_FIELD_SIZE:
            raise ResourceLimitError("field size %d exceeds table cap" % p**s)
        self.p = p
        self.s = s
        self.q = p**s
        self.modulus = self._find_modulus()
        self.generator = self._find_generator()
        self._build_tables()
        self._emb_cache = {}
        self._regmat_cache = {}

    # -- construction ---------------------------------------------------

    def _find_modulus(self):
        p, s = self.p, self.s
        if s == 1:
            return [0, 1]
        base = field_create(p, 1)
        for code in range(p**s, 2 * p**s):
            coeffs = _code_digits(code, p, s + 1)
            if is_irreducible(base, coeffs):
                return coeffs
        raise InternalCheckError("no irreducible modulus found")

    def _mul_codes_raw(self, a: int, b: int) -> int:
        """Table-free product used while the tables are being built."""
        p, s = self.p, self.s
        if s == 1:
            return (a * b) % p
        base = field_create(p, 1)
        fa = _code_digits(a, p, s)
        fb = _code_digits(b, p, s)
        prod = poly_mul(base, fa, fb)
        _, rem = poly_divmod(base, prod, self.modulus)
        rem = rem + [0] * (s - len(rem))
        return _digits_code(rem, p)

    def _pow_raw(self, a: int, k: int) -> int:
        out = 1
        base = a
        while k:
            if k & 1:
                out = self._mul_codes_raw(out, base)
            base = self._mul_codes_raw(base, base)
            k >>= 1
        return out

    def _find_generator(self) -> int:
        n = self.q - 1
        if n == 1:
            return 1
        checks = [n // ell for ell in prime_factors(n)]
        for cand in range(2, self.q):
            if all(self._pow_raw(cand, k) != 1 for k in checks):
                return cand
        raise InternalCheckError("no generator found")

    def _build_tables(self):
        n = self.q - 1
        exp = np.empty(n, dtype=np.int64)
        x = 1
        for i in range(n):
            exp[i] = x
            x = self._mul_codes_raw(x, self.generator)
        if x != 1:
            raise InternalCheckError("generator order is not q - 1")
        log = np.full(self.q, -1, dtype=np.int64)
        log[exp] = np.arange(n)
        self.exp = exp
        self.log = log

    # -- scalar/array arithmetic on codes --------------------------------

    def _out(self, arr):
        return int(arr) if arr.ndim == 0 else arr

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return self._out(a ^ b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pk = 1
        for _ in range(self.s):
            out += (((a // pk) + (b // pk)) % self.p) * pk
            pk *= self.p
        return self._out(out)

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return self._out(a.copy() if a.ndim else a)
        out = np.zeros(a.shape, dtype=np.int64)
        pk = 1
        for _ in range(self.s):
            out += ((self.p - (a // pk) % self.p) % self.p) * pk
            pk *= self.p
        return self._out(out)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a, b = np.broadcast_arrays(
            np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        )
        out = np.zeros(a.shape, dtype=np.int64)
        mask = (a != 0) & (b != 0)
        if mask.any():
            out[mask] = self.exp[(self.log[a[mask]] + self.log[b[mask]]) % (self.q - 1)]
        return self._out(out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise InputError("division by zero in GF(%d)" % self.q)
        return self._out(self.exp[(-self.log[a]) % (self.q - 1)])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow_int(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros(a.shape, dtype=np.int64)
        mask = a != 0
        out[mask] = self.exp[(self.log[a[mask]] * k) % (self.q - 1)]
        if k == 0:
            out[~mask] = 1
        elif k < 0 and (~mask).any():
            raise InputError("negative power of zero")
        return self._out(out)

    def frobenius(self, a, k: int = 1):
        """a ** (p**k), the k-fold Frobenius."""
        return self.pow_int(a, self.p ** (k % self.s))

    def dlog(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise InputError("discrete log of zero")
        return self._out(self.log[a])

    def from_dlog(self, k):
        k = np.asarray(k, dtype=np.int64)
        return self._out(self.exp[k % (self.q - 1)])

    def sum(self, arr, axis):
        """Field sum of an array of codes along an axis."""
        arr = np.asarray(arr, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(arr, axis=axis)
        out = np.zeros(np.sum(arr, axis=axis).shape, dtype=np.int64)
        pk = 1
        for _ in range(self.s):
            out += (((arr // pk) % self.p).sum(axis=axis) % self.p) * pk
            pk *= self.p
        return out

    def digits(self, a):
        """Base-p digit array, shape a.shape + (s,), constant term first."""
        a = np.asarray(a, dtype=np.int64)
        return np.stack(
            [(a // self.p**i) % self.p for i in range(self.s)], axis=-1
        )

    def from_digits(self, d):
        d = np.asarray(d, dtype=np.int64)
        weights = self.p ** np.arange(self.s, dtype=np.int64)
        return self._out((d % self.p) @ weights)

    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    # -- subfield structure ----------------------------------------------

    def embed_table(self, L: "FqField") -> np.ndarray:
        """Code table for the canonical embedding of self into L.

        The image of the residue class of x is the least root of this field's
        modulus inside L, which pins the embedding uniquely.
        """
        key = (L.p, L.s)
        if key in self._emb_cache:
            return self._emb_cache[key]
        if L.p != self.p or L.s % self.s != 0:
            raise InputError(
                "GF(%d) does not embed in GF(%d)" % (self.q, L.q)
            )
        if self.s == 1:
            table = np.arange(self.q, dtype=np.int64)
        else:
            roots = poly_roots(L, list(self.modulus))
            if not roots:
                raise InternalCheckError("modulus has no root in the extension")
            r = roots[0][0]
            codes = self.elements()
            table = np.zeros(self.q, dtype=np.int64)
            rpow = 1
            for i in range(self.s):
                digit = (codes // self.p**i) % self.p
                table = L.add(table, L.mul(digit, rpow))
                rpow = L.mul(rpow, r)
        table = np.asarray(table, dtype=np.int64)
        self._emb_cache[key] = table
        return table

    def regular_matrix(self, a: int) -> np.ndarray:
        """Multiplication by a on the power basis, as an s x s array over GF(p).

        Row i holds the digits of a * x**i, so the map is multiplicative for
        matrices acting on row vectors.
        """
        a = int(a)
        if a in self._regmat_cache:
            return self._regmat_cache[a]
        rows = np.zeros((self.s, self.s), dtype=np.int64)
        v = a
        for i in range(self.s):
            rows[i] = self.digits(v)
            if self.s > 1:
                v = self.mul(v, self.p)
        self._regmat_cache[a] = rows
        return rows

    def __repr__(self):
        return "GF(%d)" % self.q


def _code_digits(code: int, p: int, length: int):
    out = []
    for _ in range(length):
        out.append(code % p)
        code //= p
    return out


def _digits_code(digits, p: int) -> int:
    out = 0
    for d in reversed(digits):
        out = out * p + int(d)
    return out


# -- polynomials over a field: lists of codes indexed by degree ----------


def poly_trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_deg(f) -> int:
    return len(poly_trim(f)) - 1


def poly_add(F: FqField, f, g):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return poly_trim([F.add(a, b) for a, b in zip(f, g)])


def poly_neg(F: FqField, f):
    return [F.neg(a) for a in f]

def poly_sub(F: FqField, f, g):
    return poly_add(F, f, poly_neg(F, g))


def poly_scale(F: FqField, c, f):
    if c == 0:
        return []
    return [F.mul(c, a) for a in f]


def poly_mul(F: FqField, f, g):
    f = poly_trim(f)
    g = poly_trim(g)
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return out


def poly_divmod(F: FqField, f, g):
    f = poly_trim(f)
    g = poly_trim(g)
    if not g:
        raise InputError("polynomial division by zero")
    inv_lead = F.inv(g[-1])
    quo = [0] * max(0, len(f) - len(g) + 1)
    rem = list(f)
    while len(rem) >= len(g) and poly_trim(rem):
        rem = poly_trim(rem)
        if len(rem) < len(g):
            break
        c = F.mul(rem[-1], inv_lead)
        k = len(rem) - len(g)
        quo[k] = c
        for j, b in enumerate(g):
            rem[k + j] = F.sub(rem[k + j], F.mul(c, b))
    return poly_trim(quo), poly_trim(rem)


def poly_monic(F: FqField, f):
    f = poly_trim(f)
    if not f:
        return f
    return poly_scale(F, F.inv(f[-1]), f)


def poly_gcd(F: FqField, f, g):
    f, g = poly_trim(f), poly_trim(g)
    while g:
        f, g = g, poly_divmod(F, f, g)[1]
    return poly_monic(F, f)


def poly_xgcd(F: FqField, f, g):
    """Monic d with d = u*f + v*g; returns (d, u, v)."""
    r0, r1 = poly_trim(f), poly_trim(g)
    u0, u1 = [1], []
    v0, v1 = [], [1]
    while r1:
        q, r = poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, poly_sub(F, u0, poly_mul(F, q, u1))
        v0, v1 = v1, poly_sub(F, v0, poly_mul(F, q, v1))
    if not r0:
        return [], u0, v0
    c = F.inv(r0[-1])
    return poly_scale(F, c, r0), poly_scale(F, c, u0), poly_scale(F, c, v0)


def poly_mod(F: FqField, f, m):
    return poly_divmod(F, f, m)[1]


def poly_powmod(F: FqField, f, e: int, m):
    out = [1]
    base = poly_mod(F, f, m)
    while e:
        if e & 1:
            out = poly_mod(F, poly_mul(F, out, base), m)
        base = poly_mod(F, poly_mul(F, base, base), m)
        e >>= 1
    return out


def poly_eval(F: FqField, f, x):
    """Evaluate at a code or an array of codes by Horner's rule."""
    xarr = np.atleast_1d(np.asarray(x, dtype=np.int64))
    acc = np.zeros(xarr.shape, dtype=np.int64)
    for c in reversed(poly_trim(f)):
        acc = np.atleast_1d(np.asarray(F.add(F.mul(acc, xarr), c), dtype=np.int64))
    return acc if np.asarray(x).ndim else int(acc[0])


def poly_derivative(F: FqField, f):
    out = []
    for i in range(1, len(f)):
        c = f[i]
        k = i % F.p
        acc = 0
        for _ in range(k):
            acc = F.add(acc, c)
        out.append(acc)
    return poly_trim(out)


def is_irreducible(F: FqField, f) -> bool:
    """Rabin's test over GF(q)."""
    f = poly_trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if poly_trim(poly_sub(F, poly_powmod(F, x, F.q**n, f), x)):
        return False
    for ell in prime_factors(n):
        h = poly_sub(F, poly_powmod(F, x, F.q ** (n // ell), f), x)
        if poly_deg(poly_gcd(F, h, f)) != 0:
            return False
    return True


def _pth_root_poly(F: FqField, f):
    """g with g**p == f, for f whose exponents are all divisible by p."""
    out = []
    for i in range(0, len(f), F.p):
        out.append(F.frobenius(f[i], F.s - 1))
    return out


def _factor_squarefree(F: FqField, f, rng_salt: int):
    """Irreducible factors of a squarefree monic polynomial."""
    out = []
    h = [0, 1]
    d = 0
    f = list(f)
    while poly_deg(f) > 0:
        d += 1
        if poly_deg(f) < 2 * d:
            out.append(poly_monic(F, f))
            break
        h = poly_powmod(F, h, F.q, f)
        g = poly_gcd(F, poly_sub(F, h, [0, 1]), f)
        if poly_deg(g) > 0:
            out.extend(_split_equal_degree(F, g, d, rng_salt))
            f = poly_divmod(F, f, g)[0]
            h = poly_mod(F, h, f)
    return out


def _split_equal_degree(F: FqField, g, d: int, rng_salt: int):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles."""
    n = poly_deg(g)
    if n == d:
        return [poly_monic(F, g)]
    rng = random.Random((rng_salt * 1000003 + n * 101 + d) & 0x7FFFFFFF)
    while True:
        r = [rng.randrange(F.q) for _ in range(n)]
        r = poly_trim(r)
        if poly_deg(r) < 1:
            continue
        c = poly_gcd(F, r, g)
        if 0 < poly_deg(c) < n:
            break
        if F.p == 2:
            t = list(r)
            acc = list(r)
            for _ in range(F.s * d - 1):
                t = poly_mod(F, poly_mul(F, t, t), g)
                acc = poly_add(F, acc, t)
            c = poly_gcd(F, acc, g)
        else:
            h = poly_powmod(F, r, (F.q**d - 1) // 2, g)
            c = poly_gcd(F, poly_sub(F, h, [1]), g)
        if 0 < poly_deg(c) < n:
            break
    left = _split_equal_degree(F, c, d, rng_salt + 1)
    right = _split_equal_degree(F, poly_divmod(F, g, c)[0], d, rng_salt + 1)
    return left + right


def factor_poly(F: FqField, f):
    """Monic irreducible factors with multiplicities, deterministically sorted."""
    f = poly_trim(f)
    if len(f) < 2:
        raise InputError("cannot factor a constant polynomial")
    out = {}
    _factor_rec(F, poly_monic(F, f), 1, out)
    items = [(list(k), m) for k, m in out.items()]
    items.sort(key=lambda km: (len(km[0]), km[0]))
    return items


def _factor_rec(F: FqField, f, mult: int, out: dict):
    while poly_deg(f) > 0:
        df = poly_derivative(F, f)
        if not df:
            _factor_rec(F, _pth_root_poly(F, f), mult * F.p, out)
            return
        sf = poly_divmod(F, f, poly_gcd(F, f, df))[0]
        for irr in _factor_squarefree(F, sf, rng_salt=poly_deg(f)):
            m = 0
            while True:
                q, r = poly_divmod(F, f, irr)
                if r:
                    break
                f = q
                m += 1
            key = tuple(irr)
            out[key] = out.get(key, 0) + mult * m


def poly_roots(F: FqField, f):
    """Sorted (root, multiplicity) pairs over the field, by full scan."""
    f = poly_trim(f)
    if not f:
        raise InputError("the zero polynomial has every root")
    vals = poly_eval(F, f, F.elements())
    out = []
    for r in np.nonzero(vals == 0)[0]:
        r = int(r)
        m = 0
        g = f
        while True:
            q, rem = poly_divmod(F, g, [F.neg(r), 1])
            if rem:
                break
            g = q
            m += 1
        out.append((r, m))
    return out


# -- linear systems over Z/m ---------------------------------------------


def _int_factorization(m: int):
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            k = 0
            while m % d == 0:
                m //= d
                k += 1
            out.append((d, k))
        d += 1
    if m > 1:
        out.append((m, 1))
    return out


def _valuation(x: int, ell: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % ell == 0:
        x //= ell
        v += 1
    return v


def _solve_mod_prime_power(A, b, ell: int, k: int):
    m = ell**k
    nr = len(A)
    nc = len(A[0]) if nr else 0
    M = [[a % m for a in row] for row in A]
    rhs = [x % m for x in b]
    pivots = []
    used_cols = set()
    row = 0
    for _ in range(min(nr, nc)):
        best = None
        for r in range(row, nr):
            for c in range(nc):
                if c in used_cols or M[r][c] == 0:
                    continue
                v = _valuation(M[r][c], ell, k)
                if best is None or v < best[0]:
                    best = (v, r, c)
        if best is None:
            break
        v, r, c = best
        M[row], M[r] = M[r], M[row]
        rhs[row], rhs[r] = rhs[r], rhs[row]
        unit = M[row][c] // ell**v
        uinv = pow(unit, -1, m)
        M[row] = [(x * uinv) % m for x in M[row]]
        rhs[row] = (rhs[row] * uinv) % m
        for r2 in range(nr):
            if r2 == row or M[r2][c] == 0:
                continue
            if _valuation(M[r2][c], ell, k) < v:
                continue
            f = M[r2][c] // ell**v
            M[r2] = [(x - f * y) % m for x, y in zip(M[r2], M[row])]
            rhs[r2] = (rhs[r2] - f * rhs[row]) % m
        pivots.append((row, c, v))
        used_cols.add(c)
        row += 1
    for r in range(nr):
        if all(x == 0 for x in M[r]) and rhs[r] % m != 0:
            return None
    x = [0] * nc
    for r, c, v in reversed(pivots):
        acc = rhs[r]
        for c2 in range(nc):
            if c2 != c and M[r][c2]:
                acc = (acc - M[r][c2] * x[c2]) % m
        if acc % (ell**v) != 0:
            return None
        x[c] = (acc // ell**v) % m
    for r in range(nr):
        acc = sum(M[r][c] * x[c] for c in range(nc)) % m
        if acc != rhs[r] % m:
            return None
    return x


def solve_mod(A, b, m: int):
    """One solution x of A x = b over Z/m, or None when the system is unsolvable."""
    if m < 1:
        raise InputError("modulus must be positive")
    A = [list(map(int, row)) for row in A]
    b = list(map(int, b))
    if len(A) != len(b):
        raise InputError("system shape mismatch")
    nc = len(A[0]) if A else 0
    if m == 1:
        return [0] * nc
    parts = []
    for ell, k in _int_factorization(m):
        x = _solve_mod_prime_power(A, b, ell, k)
        if x is None:
            return None
        parts.append((ell**k, x))
    x = [0] * nc
    for c in range(nc):
        r, mod = 0, 1
        for pk, xs in parts:
            g = pow(mod, -1, pk)
            t = ((xs[c] - r) * g) % pk
            r += mod * t
            mod *= pk
        x[c] = r % m
    for row, rhs in zip(A, b):
        if sum(a * xi for a, xi in zip(row, x)) % m != rhs % m:
            raise InternalCheckError("recombined solution fails the system")
    return x
