"""Brauer characters, block idempotents, defect groups, and the descent to
fixed-point centralizers.

A Brauer character is stored exactly: for each p-regular class the multiset
of discrete logs of the eigenvalues of the representing matrix inside one
fixed ambient splitting field.  All block computations run in group-algebra
coordinates over a chosen coefficient field.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import InputError, InternalCheckError
from .fields import (
    FqField,
    factor_poly,
    field_create,
    poly_divmod,
    poly_mul,
    poly_roots,
    poly_xgcd,
)
from .groups import (
    Perm,
    PermGroup,
    Subgroup,
    _p_part,
    centralizer,
    conjugacy_data,
    p_subgroups_up_to_conjugacy,
)
from .matrices import EchelonBasis, FqMatrix
from .reps import MatrixRep, composition_factors, induce_rep


def splitting_degree(G: PermGroup, p: int) -> int:
    """Degree over GF(p) of a field with all needed eigenvalues for G and its
    subgroups: the order of p modulo the p'-part of the exponent."""
    m = G.exponent()
    while m % p == 0:
        m //= p
    if m == 1:
        return 1
    s = 1
    r = p % m
    while r != 1:
        r = (r * p) % m
        s += 1
    return s


def ambient_field(G: PermGroup, p: int) -> FqField:
    return field_create(p, splitting_degree(G, p))


@dataclass(frozen=True)
class BrauerChar:
    """Exact irreducible or virtual Brauer character of a group at a prime.

    values[i] is the sorted tuple of eigenvalue discrete logs on the i-th
    p-regular class (in class order).  The carrying module, when known, rides
    along outside equality and hashing.
    """

    group: PermGroup = dc_field(compare=False)
    p: int = 0
    field: FqField = dc_field(compare=False, default=None)
    values: tuple = ()
    group_key: tuple = ()
    q: int = 0
    rep: MatrixRep = dc_field(compare=False, default=None, repr=False)

    @property
    def degree(self) -> int:
        return len(self.values[0])

    def class_data(self):
        return conjugacy_data(self.group, self.p)

    def value_at(self, g: Perm):
        data = self.class_data()
        c = data.class_index[g]
        pos = data.p_regular.index(c)
        return self.values[pos]

    def fingerprint(self) -> str:
        data = self.class_data()
        payload = {
            "p": self.p,
            "q": self.q,
            "degree": self.degree,
            "values": [
                [list(data.reps[c].images), list(self.values[i])]
                for i, c in enumerate(data.p_regular)
            ],
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def is_defect_zero(self) -> bool:
        return _p_part(self.degree, self.p) == _p_part(self.group.order, self.p)

    def __repr__(self):
        return "BrauerChar(degree=%d, p=%d, fp=%s)" % (
            self.degree,
            self.p,
            self.fingerprint()[:8],
        )


def brauer_char_of(rep: MatrixRep, L: FqField, p: int) -> BrauerChar:
    """Eigenvalue character of a module, over the ambient splitting field L."""
    repL = rep if rep.field is L else rep.extend_field(L)
    data = conjugacy_data(rep.group, p)
    values = []
    for c in data.p_regular:
        r = data.reps[c]
        cp = repL.of(r).charpoly()
        roots = poly_roots(L, cp)
        if sum(m for _, m in roots) != rep.dim:
            raise InternalCheckError(
                "eigenvalues escape GF(%d); ambient field too small" % L.q
            )
        dlogs = []
        for root, m in roots:
            if root == 0:
                raise InternalCheckError("zero eigenvalue on a regular element")
            dlogs.extend([int(L.dlog(root))] * m)
        values.append(tuple(sorted(dlogs)))
    return BrauerChar(
        group=rep.group,
        p=p,
        field=L,
        values=tuple(values),
        group_key=rep.group.key(),
        q=L.q,
        rep=rep,
    )


def act_char(char: BrauerChar, t: int = 0, g: Perm = None) -> BrauerChar:
    """The pair action: value at h becomes frobenius**t of the value at g h g**-1.

    Composes as a right action in g and additively in t.
    """
    L = char.field
    data = char.class_data()
    values = []
    for i, c in enumerate(data.p_regular):
        r = data.reps[c]
        h = (g * r * g.inverse()) if g is not None else r
        if h not in char.group:
            raise InputError("acting element does not normalize the group")
        src = data.p_regular.index(data.class_index[h])
        moved = tuple(
            sorted((d * L.p ** (t % L.s)) % (L.q - 1) for d in char.values[src])
        )
        values.append(moved)
    rep = None
    if char.rep is not None:
        rep = char.rep
        if g is not None:
            rep = rep.twist_by_conjugation(g)
        if t % L.s:
            rep = rep.field_twist(t % L.s)
    return BrauerChar(
        group=char.group,
        p=char.p,
        field=L,
        values=tuple(values),
        group_key=char.group_key,
        q=char.q,
        rep=rep,
    )


def restrict_char(char: BrauerChar, sub: PermGroup) -> BrauerChar:
    data = conjugacy_data(sub, char.p)
    values = tuple(char.value_at(data.reps[c]) for c in data.p_regular)
    return BrauerChar(
        group=sub,
        p=char.p,
        field=char.field,
        values=values,
        group_key=sub.key(),
        q=char.q,
        rep=char.rep.restrict(sub) if char.rep is not None else None,
    )


def stabilizer_of_char(G: PermGroup, char: BrauerChar) -> Subgroup:
    """Elements of G whose conjugation action fixes the character."""
    elems = [g for g in G.elements if act_char(char, 0, g) == char]
    return Subgroup(G, elements=elems)


def ibr(G: PermGroup, p: int, L: FqField = None, seed: int = 0):
    """All irreducible Brauer characters at p, carrying their modules.

    Sorted by (degree, values); computed as the distinct composition factors
    of the regular module over the ambient splitting field.
    """
    if L is None:
        L = ambient_field(G, p)
    key = (p, L.q)
    if key in G._ibr_cache:
        return list(G._ibr_cache[key])
    reg = MatrixRep.regular(G, L)
    seen = {}
    total = 0
    for f in composition_factors(reg, seed=seed):
        ch = brauer_char_of(f, L, p)
        total += ch.degree
        if ch not in seen:
            seen[ch] = ch
    if total != G.order:
        raise InternalCheckError("composition factors of the regular module lost dimension")
    out = sorted(seen, key=lambda c: (c.degree, c.values))
    data = conjugacy_data(G, p)
    if len(out) != len(data.p_regular):
        raise InternalCheckError(
            "got %d irreducibles but %d p-regular classes"
            % (len(out), len(data.p_regular))
        )
    G._ibr_cache[key] = tuple(out)
    return list(out)


def constituents(rep: MatrixRep, L: FqField, p: int, seed: int = 0):
    """Composition multiplicities as a list of (irreducible BrauerChar, count)."""
    repL = rep if rep.field is L else rep.extend_field(L)
    counts = {}
    for f in composition_factors(repL, seed=seed):
        ch = brauer_char_of(f, L, p)
        counts[ch] = counts.get(ch, 0) + 1
    return sorted(counts.items(), key=lambda cm: (cm[0].degree, cm[0].values))


def multiplicity(rep: MatrixRep, char: BrauerChar, seed: int = 0) -> int:
    for ch, m in constituents(rep, char.field, char.p, seed=seed):
        if ch == char:
            return m
    return 0


def induce_char(char: BrauerChar, G: PermGroup) -> BrauerChar:
    if char.rep is None:
        raise InputError("induction needs the carrying module")
    return brauer_char_of(induce_rep(char.rep, G), char.field, char.p)


def decompose_char(target: BrauerChar, chars) -> list:
    """Multiplicities writing target as a nonnegative integer combination.

    Works purely on eigenvalue multisets: the feature vector of a character
    counts each discrete log per p-regular class, and those vectors are
    linearly independent for distinct irreducibles.  The rational solve is
    exact and the reconstruction is re-checked multiset by multiset.
    """
    from fractions import Fraction

    chars = list(chars)
    if any(c.q != target.q or c.group_key != target.group_key for c in chars):
        raise InputError("decomposition needs characters of one group and field")

    def features(ch):
        out = {}
        for i, vals in enumerate(ch.values):
            for v in vals:
                out[(i, v)] = out.get((i, v), 0) + 1
        return out

    feats = [features(c) for c in chars]
    tfeat = features(target)
    keys = set(tfeat)
    for f in feats:
        keys |= set(f)
    keys = sorted(keys)
    rows = [[Fraction(f.get(k, 0)) for f in feats] + [Fraction(tfeat.get(k, 0))] for k in keys]
    ncols = len(chars)
    pivot_of = {}
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            raise InternalCheckError("character features are linearly dependent")
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][col] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivot_of[col] = r
        r += 1
    for i in range(r, len(rows)):
        if rows[i][ncols]:
            raise InputError("character does not decompose over the given basis")
    mults = []
    for col in range(ncols):
        x = rows[pivot_of[col]][ncols]
        if x.denominator != 1 or x < 0:
            raise InputError("character does not decompose over the given basis")
        mults.append(int(x))
    check = {}
    for m, f in zip(mults, feats):
        if m == 0:
            continue
        for k, v in f.items():
            check[k] = check.get(k, 0) + m * v
    if check != tfeat:
        raise InternalCheckError("decomposition reconstruction failed")
    return mults


def clifford_correspondent(chi: BrauerChar, N: PermGroup, theta1: BrauerChar) -> BrauerChar:
    """The unique character of the stabilizer, over theta1, inducing chi.

    N must be normal in the group of chi, theta1 irreducible on N, and chi
    must lie over the orbit of theta1.
    """
    S = chi.group
    if not N.is_normal_in(S):
        raise InputError("Clifford correspondence needs a normal subgroup")
    T = stabilizer_of_char(S, theta1)
    L = chi.field
    p = chi.p
    basis_n = ibr(N, p, L)
    hits = []
    for xi in ibr(T, p, L):
        down = decompose_char(restrict_char(xi, N), basis_n)
        if down[basis_n.index(theta1)] == 0:
            continue
        if induce_char(xi, S) == chi:
            hits.append(xi)
    if len(hits) != 1:
        raise InternalCheckError(
            "expected one Clifford correspondent, found %d" % len(hits)
        )
    return hits[0]


# -- group algebra vectors, blocks -----------------------------------------


def delta_vector(G: PermGroup, g: Perm) -> np.ndarray:
    v = np.zeros(G.order, dtype=np.int64)
    v[G.index_of(g)] = 1
    return v


def _mult_table(G: PermGroup):
    if getattr(G, "_amul_table", None) is None:
        els = G.elements
        n = G.order
        t = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                t[i, j] = G.index_of(els[i] * els[j])
        G._amul_table = t
    return G._amul_table


def algebra_mul(F: FqField, G: PermGroup, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Convolution product of group-algebra coefficient vectors."""
    t = _mult_table(G)
    out = np.zeros(G.order, dtype=np.int64)
    for i in np.nonzero(a)[0]:
        row = t[int(i)]
        out[row] = F.add(out[row], F.mul(int(a[i]), b))
    return out


def class_sum_vectors(G: PermGroup, p: int):
    data = conjugacy_data(G, p)
    out = []
    for cls in data.classes:
        v = np.zeros(G.order, dtype=np.int64)
        for x in cls:
            v[G.index_of(x)] = 1
        out.append(v)
    return out


def _center_coords(G: PermGroup, p: int, vec: np.ndarray):
    """Coordinates of a central vector in the class-sum basis, or None."""
    data = conjugacy_data(G, p)
    coords = np.zeros(len(data.classes), dtype=np.int64)
    for i, cls in enumerate(data.classes):
        coords[i] = vec[G.index_of(data.reps[i])]
        idxs = [G.index_of(x) for x in cls]
        if not np.all(vec[idxs] == coords[i]):
            return None
    return coords


def block_idempotents(G: PermGroup, F: FqField, p: int, extra_rounds: int = 8):
    """Primitive central idempotents of F[G], as coefficient vectors.

    Refines along all class sums to a fixed point, then along seeded random
    central elements; the result is validated as a complete orthogonal
    decomposition of 1.
    """
    cache = getattr(G, "_block_cache", None)
    if cache is None:
        cache = G._block_cache = {}
    if (F.q, p) in cache:
        return [v.copy() for v in cache[(F.q, p)]]
    sums = class_sum_vectors(G, p)
    k = len(sums)
    one = delta_vector(G, G.identity)

    def refine(idems, z):
        out = []
        for e in idems:
            # Split e inside the commutative algebra e*F[ez] using the CRT
            # idempotents of the characteristic polynomial of multiplication.
            ez = algebra_mul(F, G, e, z)
            basis = EchelonBasis(F, G.order)
            basis.insert(e)
            frontier = [e]
            while frontier:
                new = []
                for v in frontier:
                    w = algebra_mul(F, G, v, ez)
                    if basis.insert(w):
                        new.append(w)
                frontier = new
            B = basis.matrix()
            imgs = FqMatrix(F, np.stack([algebra_mul(F, G, r, ez) for r in B.a]))
            T = B.solve_rows(imgs)
            if T is None:
                raise InternalCheckError("multiplication leaves the spanned algebra")
            cp = T.charpoly()
            factors = factor_poly(F, cp)
            if len(factors) == 1:
                out.append(e)
                continue
            for f, m in factors:
                fm = list(f)
                for _ in range(m - 1):
                    fm = poly_mul(F, fm, f)
                rest = poly_divmod(F, cp, fm)[0]
                d, a, _ = poly_xgcd(F, rest, fm)
                if d != [1]:
                    raise InternalCheckError("characteristic factors not coprime")
                u = poly_mul(F, a, rest)
                piece = np.zeros(G.order, dtype=np.int64)
                for c in reversed(u):
                    piece = algebra_mul(F, G, piece, ez)
                    if c:
                        piece = F.add(piece, F.mul(int(c), e))
                if piece.any():
                    out.append(piece)
        return out

    idems = [one]
    changed = True
    while changed:
        changed = False
        for z in sums:
            new = refine(idems, z)
            if len(new) != len(idems):
                idems = new
                changed = True
    # Random central elements catch splits no single class sum exposes.
    rng = random.Random(12345)
    for _ in range(extra_rounds):
        coeffs = [rng.randrange(F.q) for _ in range(k)]
        z = np.zeros(G.order, dtype=np.int64)
        for c, v in zip(coeffs, sums):
            if c:
                z = F.add(z, F.mul(c, v))
        new = refine(idems, z)
        if len(new) != len(idems):
            idems = new
    total = np.zeros(G.order, dtype=np.int64)
    for e in idems:
        if _center_coords(G, p, e) is None:
            raise InternalCheckError("idempotent left the center")
        if not np.array_equal(algebra_mul(F, G, e, e), e):
            raise InternalCheckError("refinement produced a non-idempotent")
        total = F.add(total, e)
    for i, e in enumerate(idems):
        for e2 in idems[i + 1 :]:
            if algebra_mul(F, G, e, e2).any():
                raise InternalCheckError("idempotents are not orthogonal")
    if not np.array_equal(total, one):
        raise InternalCheckError("idempotents do not sum to 1")
    idems.sort(key=lambda v: tuple(v))
    cache[(F.q, p)] = [v.copy() for v in idems]
    return idems


def central_action(rep: MatrixRep, F: FqField, vec: np.ndarray) -> FqMatrix:
    """Image of a group-algebra vector under a representation.

    The vector's field must embed in the representation's field.
    """
    L = rep.field
    table = F.embed_table(L)
    acc = FqMatrix.zeros(L, rep.dim, rep.dim)
    for i in np.nonzero(vec)[0]:
        g = rep.group.elements[int(i)]
        acc = acc + rep.of(g).scale(int(table[vec[i]]))
    return acc


def block_of_char(char: BrauerChar, F: FqField, p: int, blocks=None):
    """Index and vector of the block idempotent acting as identity on the module."""
    G = char.group
    if blocks is None:
        blocks = block_idempotents(G, F, p)
    hits = []
    for i, e in enumerate(blocks):
        m = central_action(char.rep, F, e)
        if m.is_identity():
            hits.append(i)
        elif not m.is_zero():
            raise InternalCheckError("block idempotent acts as a non-scalar")
    if len(hits) != 1:
        raise InternalCheckError("character lies in %d blocks" % len(hits))
    return hits[0], blocks[hits[0]]


def char_field_degree(char: BrauerChar) -> int:
    """Degree over GF(p) of the field generated by the character values."""
    L = char.field
    for e in range(1, L.s + 1):
        if L.s % e:
            continue
        k = L.p**e
        if all(
            tuple(sorted(d * k % (L.q - 1) for d in vals)) == vals
            for vals in char.values
        ):
            return e
    raise InternalCheckError("character values generate no subfield")


def char_value_field(char: BrauerChar) -> FqField:
    return field_create(char.p, char_field_degree(char))


def fixed_point_subgroup(N: PermGroup, D: PermGroup) -> Subgroup:
    return centralizer(N, D)


def trace_image_contains(M: PermGroup, F: FqField, D: PermGroup, vec) -> bool:
    """Whether vec lies in the relative trace image from the D-fixed points."""
    fixed_orbits = []
    seen = set()
    for x in M.elements:
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            new = []
            for y in frontier:
                for d in D.elements:
                    z = y.conj(d)
                    if z not in orbit:
                        orbit.add(z)
                        new.append(z)
            frontier = new
        seen |= orbit
        fixed_orbits.append(orbit)
    cosets = []
    covered = set()
    for g in M.elements:
        if g in covered:
            continue
        coset = frozenset(d * g for d in D.elements)
        covered |= coset
        cosets.append(min(coset))
    basis = EchelonBasis(F, M.order)
    for orbit in fixed_orbits:
        v = np.zeros(M.order, dtype=np.int64)
        for x in orbit:
            v[M.index_of(x)] = 1
        tr = np.zeros(M.order, dtype=np.int64)
        for t in cosets:
            moved = np.zeros(M.order, dtype=np.int64)
            for x in orbit:
                moved[M.index_of(x.conj(t))] = 1
            tr = F.add(tr, moved)
        basis.insert(tr)
    return basis.contains(np.asarray(vec, dtype=np.int64))


def defect_group(M: PermGroup, F: FqField, p: int, block_vec, prefer=None) -> Subgroup:
    """A defect group of a block: least p-subgroup whose relative trace image
    contains the block idempotent.  With prefer given, that subgroup is
    validated and returned in place of the scan's representative."""
    cands = p_subgroups_up_to_conjugacy(M, p)
    found = None
    for D in cands:
        if trace_image_contains(M, F, D, block_vec):
            found = D
            break
    if found is None:
        raise InternalCheckError("no p-subgroup carries the block idempotent")
    if prefer is not None:
        if prefer.order != found.order or not trace_image_contains(
            M, F, prefer, block_vec
        ):
            raise InputError("preferred subgroup is not a defect group of the block")
        return prefer
    return found


def covering_block(M: PermGroup, N: PermGroup, F: FqField, p: int, e_b: np.ndarray):
    """Block idempotent of F[M] not annihilating a given block of F[N].

    Uniqueness holds when M/N is a p-group, and is asserted.
    """
    lifted = np.zeros(M.order, dtype=np.int64)
    for i in np.nonzero(e_b)[0]:
        lifted[M.index_of(N.elements[int(i)])] = e_b[i]
    blocks = block_idempotents(M, F, p)
    hits = [e for e in blocks if algebra_mul(F, M, e, lifted).any()]
    if len(hits) != 1:
        raise InternalCheckError(
            "expected a unique covering block, found %d" % len(hits)
        )
    return hits[0]


def _restrict_vector(M: PermGroup, sub: PermGroup, vec: np.ndarray) -> np.ndarray:
    out = np.zeros(sub.order, dtype=np.int64)
    for i, x in enumerate(sub.elements):
        out[i] = vec[M.index_of(x)]
    return out


def dgn_correspondent(
    M: PermGroup,
    N: PermGroup,
    D: PermGroup,
    theta: BrauerChar,
    verify: bool = True,
) -> BrauerChar:
    """Defect-zero character of the D-fixed subgroup matched to theta.

    Requires: N normal in M with M/N a p-group, theta a defect-zero M-stable
    irreducible of N, and D a complement to N in M.  The block idempotent of
    theta, truncated to the centralizer of D in N, is a defect-zero block
    there; its unique irreducible is returned.  With verify, the induced
    multiplicity characterization is checked for every defect-zero candidate.
    """
    p = theta.p
    if theta.rep is None:
        raise InputError("theta must carry its module")
    if not N.is_normal_in(M):
        raise InputError("N must be normal in M")
    q = M.order // N.order
    if _p_part(q, p) != q:
        raise InputError("M/N must be a p-group")
    if not theta.is_defect_zero():
        raise InputError("theta must have defect zero")
    nset = set(N.elements)
    if (
        D.order != q
        or not D.is_subset(M)
        or any(not x.is_identity() and x in nset for x in D.elements)
    ):
        raise InputError("D must be a complement to N in M")
    for m in M.generators:
        if act_char(theta, 0, m) != theta:
            raise InputError("theta is not stable under M")
    E = char_value_field(theta)
    blocks_N = block_idempotents(N, E, p)
    _, e_theta = block_of_char(theta, E, p, blocks=blocks_N)
    C = centralizer(N, D)
    truncated = _restrict_vector(N, C, e_theta)
    if not truncated.any():
        raise InternalCheckError("block idempotent vanishes on the fixed points")
    blocks_C = block_idempotents(C, E, p)
    match = [e for e in blocks_C if np.array_equal(e, truncated)]
    if len(match) != 1:
        raise InternalCheckError("truncation is not a block idempotent")
    L = theta.field
    phi = None
    for ch in ibr(C, p, L):
        m = central_action(ch.rep, E, match[0])
        if m.is_identity():
            if phi is not None:
                raise InternalCheckError("two irreducibles in a defect-zero block")
            phi = ch
    if phi is None:
        raise InternalCheckError("no irreducible found in the matched block")
    if not phi.is_defect_zero():
        raise InternalCheckError("matched character has positive defect")
    if verify:
        for ch in ibr(C, p, L):
            if not ch.is_defect_zero():
                continue
            m = multiplicity(induce_rep(ch.rep, N), theta)
            if (m % p != 0) != (ch == phi):
                raise InternalCheckError(
                    "induced multiplicity check contradicts the block match"
                )
    return phi
