"""Matrix representations of finite groups over the table fields.

Modules are row spaces: a representation assigns to each group element a
matrix acting on row vectors, X(gh) = X(g) @ X(h).  Reducibility is decided
by random algebra elements with certified outcomes: an irreducible
characteristic polynomial certifies irreducibility outright, and a
multiplicity-one factor certifies through the standard one-vector test on the
module and its dual.
"""

from __future__ import annotations

import random

import numpy as np

from .errors import InputError, InternalCheckError, ResourceLimitError
from .fields import FqField, factor_poly, poly_trim
from .groups import GroupMap, Perm, PermGroup, _word_depth, conjugacy_data
from .matrices import EchelonBasis, FqMatrix


def row_times(F: FqField, v, M: FqMatrix):
    return F.sum(F.mul(np.asarray(v, dtype=np.int64)[:, None], M.a), axis=0)


def poly_at_matrix(F: FqField, f, A: FqMatrix) -> FqMatrix:
    n = A.nrows
    acc = FqMatrix.zeros(F, n, n)
    ident = FqMatrix.identity(F, n)
    for c in reversed(poly_trim(f)):
        acc = acc @ A + ident.scale(c)
    return acc


class MatrixRep:
    __slots__ = ("group", "field", "images", "dim")

    def __init__(self, group: PermGroup, field: FqField, images: dict, check=True):
        self.group = group
        self.field = field
        self.images = images
        self.dim = images[group.identity].nrows
        if check:
            self._verify()

    def _verify(self):
        if set(self.images) != set(self.group.elements):
            raise InputError("representation table does not cover the group")
        if not self.images[self.group.identity].is_identity():
            raise InputError("identity does not map to the identity matrix")
        for m in self.images.values():
            if m.shape != (self.dim, self.dim) or m.field.q != self.field.q:
                raise InputError("inconsistent matrix shapes or fields")
        elems = self.group.elements
        if self.group.order**2 <= 1024:
            pairs = [(x, y) for x in elems for y in elems]
        else:
            rng = random.Random(0)
            pairs = [(rng.choice(elems), rng.choice(elems)) for _ in range(600)]
        for x, y in pairs:
            if self.images[x] @ self.images[y] != self.images[x * y]:
                raise InputError("images do not define a homomorphism")

    @classmethod
    def from_callable(cls, group, field, fn, check=True) -> "MatrixRep":
        return cls(group, field, {g: fn(g) for g in group.elements}, check=check)

    @classmethod
    def trivial(cls, group, field) -> "MatrixRep":
        one = FqMatrix.identity(field, 1)
        return cls(group, field, {g: one for g in group.elements}, check=False)

    @classmethod
    def regular(cls, group, field) -> "MatrixRep":
        idx = {x: i for i, x in enumerate(group.elements)}
        n = group.order

        def img(g):
            m = np.zeros((n, n), dtype=np.int64)
            for x, i in idx.items():
                m[i, idx[x * g]] = 1
            return FqMatrix(field, m)

        return cls.from_callable(group, field, img, check=False)

    @classmethod
    def permutation(cls, group, field) -> "MatrixRep":
        n = group.degree

        def img(g):
            m = np.zeros((n, n), dtype=np.int64)
            for i in range(n):
                m[i, g.images[i]] = 1
            return FqMatrix(field, m)

        return cls.from_callable(group, field, img, check=False)

    @classmethod
    def from_gen_images(cls, group, field, gen_images, check=True) -> "MatrixRep":
        if group._words is None:
            raise InternalCheckError("group lacks word data for generator extension")
        if len(gen_images) != len(group.generators):
            raise InputError("one matrix per generator is required")
        table = {}
        order = sorted(group._words, key=lambda p: _word_depth(group._words, p))
        for x in order:
            w = group._words[x]
            if w is None:
                n = gen_images[0].nrows if gen_images else 1
                table[x] = FqMatrix.identity(field, n)
            else:
                parent, gi = w
                table[x] = table[parent] @ gen_images[gi]
        return cls(group, field, table, check=check)

    def of(self, g: Perm) -> FqMatrix:
        return self.images[g]

    def restrict(self, sub: PermGroup) -> "MatrixRep":
        if not sub.is_subset(self.group):
            raise InputError("restriction target is not a subgroup")
        return MatrixRep(
            sub, self.field, {g: self.images[g] for g in sub.elements}, check=False
        )

    def tensor(self, other: "MatrixRep") -> "MatrixRep":
        if other.group is not self.group and other.group.key() != self.group.key():
            raise InputError("tensor factors live on different groups")
        images = {g: self.images[g].kron(other.images[g]) for g in self.group.elements}
        return MatrixRep(self.group, self.field, images, check=False)

    def direct_sum(self, other: "MatrixRep") -> "MatrixRep":
        n, m = self.dim, other.dim

        def img(g):
            out = np.zeros((n + m, n + m), dtype=np.int64)
            out[:n, :n] = self.images[g].a
            out[n:, n:] = other.images[g].a
            return FqMatrix(self.field, out)

        return MatrixRep.from_callable(self.group, self.field, img, check=False)

    def dual(self) -> "MatrixRep":
        images = {g: self.images[g.inverse()].t() for g in self.group.elements}
        return MatrixRep(self.group, self.field, images, check=False)

    def field_twist(self, k: int) -> "MatrixRep":
        F = self.field
        images = {
            g: FqMatrix(F, F.frobenius(m.a, k)) for g, m in self.images.items()
        }
        return MatrixRep(self.group, F, images, check=False)

    def extend_field(self, L: FqField) -> "MatrixRep":
        table = self.field.embed_table(L)
        images = {g: FqMatrix(L, table[m.a]) for g, m in self.images.items()}
        return MatrixRep(self.group, L, images, check=False)

    def pullback(self, gmap: GroupMap) -> "MatrixRep":
        if gmap.codomain.key() != self.group.key():
            raise InputError("map codomain does not match the represented group")
        images = {x: self.images[gmap(x)] for x in gmap.domain.elements}
        return MatrixRep(gmap.domain, self.field, images, check=False)

    def twist_by_conjugation(self, a: Perm) -> "MatrixRep":
        """The representation g -> X(a g a**-1); a must normalize the group."""
        ai = a.inverse()
        images = {}
        for g in self.group.elements:
            h = a * g * ai
            if h not in self.group:
                raise InputError("conjugating element does not normalize the group")
            images[g] = self.images[h]
        return MatrixRep(self.group, self.field, images, check=False)

    def __repr__(self):
        return "MatrixRep(dim=%d over GF(%d), group order %d)" % (
            self.dim,
            self.field.q,
            self.group.order,
        )


def induce_rep(rep: MatrixRep, G: PermGroup) -> MatrixRep:
    """Induction along H <= G using the right transversal of least coset elements."""
    H = rep.group
    if not H.is_subset(G):
        raise InputError("induction needs the module's group inside the big group")
    hset = set(H.elements)
    seen = set()
    cosets = []
    for g in G.elements:
        if g in seen:
            continue
        coset = frozenset(h * g for h in hset)
        seen |= coset
        cosets.append(coset)
    cosets.sort(key=min)
    trans = [min(c) for c in cosets]
    coset_of = {}
    for i, c in enumerate(cosets):
        for x in c:
            coset_of[x] = i
    k, d = len(trans), rep.dim
    F = rep.field

    def img(g):
        out = np.zeros((k * d, k * d), dtype=np.int64)
        for i, t in enumerate(trans):
            y = t * g
            j = coset_of[y]
            out[i * d : (i + 1) * d, j * d : (j + 1) * d] = rep.of(
                y * trans[j].inverse()
            ).a
        return FqMatrix(F, out)

    return MatrixRep.from_callable(G, F, img, check=True)


def spin(rep: MatrixRep, vectors) -> EchelonBasis:
    """Smallest invariant row space containing the given vectors."""
    F = rep.field
    eb = EchelonBasis(F, rep.dim)
    acting = [rep.of(g) for g in rep.group.generators]
    frontier = []
    for v in np.atleast_2d(np.asarray(vectors, dtype=np.int64)):
        if eb.insert(v):
            frontier.append(np.array(v))
    while frontier:
        new = []
        for v in frontier:
            for X in acting:
                w = row_times(F, v, X)
                if eb.insert(w):
                    new.append(w)
        frontier = new
    return eb


def subrep(rep: MatrixRep, basis) -> MatrixRep:
    """Action on an invariant row space, in the coordinates of its echelon basis."""
    B = basis.matrix() if isinstance(basis, EchelonBasis) else basis
    images = {}
    for g in rep.group.elements:
        S = B.solve_rows(B @ rep.of(g))
        if S is None:
            raise InputError("row space is not invariant")
        images[g] = S
    return MatrixRep(rep.group, rep.field, images, check=False)


def quotient_rep(rep: MatrixRep, basis: EchelonBasis) -> MatrixRep:
    """Action on the quotient by an invariant row space.

    Coordinates are the nonpivot columns of the echelon basis, which map the
    canonical reduced representatives bijectively onto the quotient.
    """
    F = rep.field
    cols = basis.nonpivot_columns()
    images = {}
    for g in rep.group.elements:
        X = rep.of(g)
        m = np.zeros((len(cols), len(cols)), dtype=np.int64)
        for a, c in enumerate(cols):
            m[a] = basis.reduce(X.a[c])[cols]
        images[g] = FqMatrix(F, m)
    return MatrixRep(rep.group, F, images, check=False)


def _random_algebra_element(rep: MatrixRep, rng) -> FqMatrix:
    F = rep.field
    A = FqMatrix.zeros(F, rep.dim, rep.dim)
    for _ in range(rng.randrange(2, 5)):
        g = rng.choice(rep.group.elements)
        c = rng.randrange(1, F.q)
        A = A + rep.of(g).scale(c)
    return A


def find_proper_submodule(rep: MatrixRep, seed=0, tries=60):
    """An invariant proper nonzero row space, or None certifying irreducibility."""
    n = rep.dim
    if n == 0:
        raise InputError("the zero module has no composition structure")
    if n == 1:
        return None
    F = rep.field
    rng = random.Random(seed)
    for _ in range(tries):
        A = _random_algebra_element(rep, rng)
        factors = factor_poly(F, A.charpoly())
        if len(factors) == 1 and factors[0][1] == 1:
            # the algebra element acts with irreducible characteristic
            # polynomial, so no proper invariant subspace exists at all
            return None
        for f, mult in factors:
            fa = poly_at_matrix(F, f, A)
            ker = fa.left_nullspace()
            for v in ker.a:
                W = spin(rep, v)
                if W.dim < n:
                    return W
            if mult == 1 and ker.nrows:
                dual = rep.dual()
                kert = poly_at_matrix(F, f, A.t()).left_nullspace()
                Wd = spin(dual, kert.a[0])
                if Wd.dim == n:
                    return None
                perp = Wd.matrix().t().left_nullspace()
                eb = EchelonBasis(F, n)
                eb.insert_all(perp.a)
                if not 0 < eb.dim < n:
                    raise InternalCheckError("dual complement has the wrong size")
                return eb
    raise InternalCheckError(
        "no certified split after %d random algebra elements" % tries
    )


def composition_factors(rep: MatrixRep, seed=0):
    """Irreducible composition factors, with repetition, bottom of a series first."""
    out = []
    stack = [rep]
    while stack:
        V = stack.pop()
        if V.dim == 0:
            continue
        W = find_proper_submodule(V, seed=seed)
        if W is None:
            out.append(V)
        else:
            stack.append(quotient_rep(V, W))
            stack.append(subrep(V, W))
    return out


def character_key(rep: MatrixRep, p: int):
    """Canonical class-function key: characteristic polynomials on class reps.

    Two semisimple modules over the same field agree on this key exactly when
    they share all composition factors, so it separates irreducibles.
    """
    data = conjugacy_data(rep.group, p)
    return tuple(tuple(rep.of(r).charpoly()) for r in data.reps)


def intertwiner_space(rep1: MatrixRep, rep2: MatrixRep) -> FqMatrix:
    """Basis of {M : X1(g) M = M X2(g)}, rows flattened row-major."""
    if rep1.group.key() != rep2.group.key() or rep1.field.q != rep2.field.q:
        raise InputError("intertwiners need a common group and field")
    F = rep1.field
    n1, n2 = rep1.dim, rep2.dim
    if n1 * n2 > 4096:
        raise ResourceLimitError("intertwiner system too large")
    gens = list(rep1.group.generators) or [rep1.group.identity]
    blocks = []
    eye1 = FqMatrix.identity(F, n1)
    eye2 = FqMatrix.identity(F, n2)
    for g in gens:
        left = rep1.of(g).t().kron(eye2)
        right = eye1.kron(rep2.of(g))
        blocks.append(F.sub(left.a, right.a))
    big = FqMatrix(F, np.concatenate(blocks, axis=1))
    return big.left_nullspace()


def canonical_intertwiner(rep1: MatrixRep, rep2: MatrixRep):
    """The unique intertwiner scaled so its first nonzero entry is 1, or None."""
    space = intertwiner_space(rep1, rep2)
    if space.nrows != 1:
        return None
    F = rep1.field
    v = space.a[0]
    nz = np.nonzero(v)[0]
    v = F.mul(v, F.inv(int(v[nz[0]])))
    return FqMatrix(F, v.reshape(rep1.dim, rep2.dim))


def endomorphism_dim(rep: MatrixRep) -> int:
    return intertwiner_space(rep, rep).nrows


def is_absolutely_irreducible(rep: MatrixRep) -> bool:
    """Irreducible with scalar endomorphisms only."""
    if find_proper_submodule(rep) is not None:
        return False
    return endomorphism_dim(rep) == 1
