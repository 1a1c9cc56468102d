"""Finite-dimensional algebras carrying a group action by ring automorphisms.

Elements are coordinate rows over a finite field; multiplication comes from
structure constants on a labelled basis, and each acting group element is an
invertible matrix applied on the right of the coordinate row.  Fixed points,
relative traces, Brauer quotients and the permutation-basis structure used by
the Dade correspondence all reduce to exact linear algebra in this model.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from .brauer import algebra_mul, block_of_char, char_value_field, delta_vector
from .errors import InputError, InternalCheckError
from .fields import FqField, factor_poly
from .groups import (
    Perm,
    PermGroup,
    Subgroup,
    center,
    is_prime,
    maximal_subgroups,
    p_subgroups_up_to_conjugacy,
    quotient_group,
)
from .matrices import EchelonBasis, FqMatrix
from .reps import (
    MatrixRep,
    intertwiner_space,
    is_absolutely_irreducible,
    poly_at_matrix,
    row_times,
)

_VALIDATE_PAIR_CAP = 40000


@dataclass
class GAlgebra:
    """Associative unital algebra with a group acting by ring automorphisms.

    c[i, j, k] is the coefficient of basis element k in the product of basis
    elements i and j.  action[g] acts on coordinate rows from the right, so
    coords(x^g) = coords(x) @ action[g].
    """

    field: FqField
    labels: tuple
    c: np.ndarray
    one: np.ndarray
    group: PermGroup
    action: dict = dc_field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def mul(self, x, y) -> np.ndarray:
        F = self.field
        xy = F.mul(np.asarray(x)[:, None], np.asarray(y)[None, :])
        return F.sum(F.sum(F.mul(xy[:, :, None], self.c), axis=0), axis=0)

    def act(self, x, g: Perm) -> np.ndarray:
        return row_times(self.field, np.asarray(x), self.action[g])

    def basis_row(self, i: int) -> np.ndarray:
        row = np.zeros(self.dim, dtype=np.int64)
        row[i] = 1
        return row

    def left_mult_matrix(self, i: int) -> FqMatrix:
        return FqMatrix(self.field, self.c[i].copy())

    def right_mult_matrix(self, i: int) -> FqMatrix:
        return FqMatrix(self.field, self.c[:, i, :].copy())

    def validate(self, seed: int = 0) -> None:
        F = self.field
        d = self.dim
        if self.c.shape != (d, d, d) or self.one.shape != (d,):
            raise InputError("structure constant array has the wrong shape")
        for i in range(d):
            e = self.basis_row(i)
            if not np.array_equal(self.mul(e, self.one), e):
                raise InputError("right unit law fails on basis element %d" % i)
            if not np.array_equal(self.mul(self.one, e), e):
                raise InputError("left unit law fails on basis element %d" % i)
        rng = random.Random(seed)
        for _ in range(8):
            x, y, z = (
                np.array([rng.randrange(F.q) for _ in range(d)]) for _ in range(3)
            )
            if not np.array_equal(
                self.mul(self.mul(x, y), z), self.mul(x, self.mul(y, z))
            ):
                raise InputError("multiplication is not associative")
        elems = self.group.elements
        for g in elems:
            if g not in self.action:
                raise InputError("action matrix missing for a group element")
            if self.action[g].rank() != d:
                raise InputError("action matrix is singular")
            if not np.array_equal(self.act(self.one, g), self.one):
                raise InputError("action does not fix the identity")
        exhaustive = len(elems) * d * d <= _VALIDATE_PAIR_CAP
        gens = list(self.group.generators) or [self.group.identity]
        for g in (elems if exhaustive else gens):
            M = self.action[g]
            for i in range(d):
                ei = row_times(F, self.basis_row(i), M)
                for j in range(d):
                    lhs = row_times(F, self.c[i, j], M)
                    rhs = self.mul(ei, row_times(F, self.basis_row(j), M))
                    if not np.array_equal(lhs, rhs):
                        raise InputError(
                            "action of a group element is not multiplicative"
                        )
        pairs = (
            [(g, h) for g in elems for h in elems]
            if len(elems) ** 2 <= 4096
            else [(rng.choice(elems), rng.choice(elems)) for _ in range(64)]
        )
        for g, h in pairs:
            if not np.array_equal((self.action[g] @ self.action[h]).a, self.action[g * h].a):
                raise InputError("action matrices do not compose with the group law")


def matrix_conjugation_algebra(rep: MatrixRep) -> GAlgebra:
    """Full matrix algebra of a module with the group acting by conjugation.

    Basis e_(i,j); the action of g sends x to X(g)^-1 x X(g), which on
    row-major coordinates is the Kronecker matrix (X(g)^-1)^T (x) X(g).
    """
    n = rep.dim
    d = n * n
    F = rep.field
    c = np.zeros((d, d, d), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i * n + j, j * n + k, i * n + k] = 1
    one = np.zeros(d, dtype=np.int64)
    for i in range(n):
        one[i * n + i] = 1
    action = {}
    for g in rep.group.elements:
        X = rep.of(g)
        action[g] = X.inverse().t().kron(X)
    labels = tuple((i, j) for i in range(n) for j in range(n))
    A = GAlgebra(F, labels, c, one, rep.group, action)
    A.validate()
    return A


def group_conjugation_algebra(F: FqField, N: PermGroup, W: PermGroup) -> GAlgebra:
    """Group algebra F[N] with a group W of the same degree acting by conjugation."""
    elems = N.elements
    index = {g: i for i, g in enumerate(elems)}
    d = len(elems)
    c = np.zeros((d, d, d), dtype=np.int64)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            c[i, j, index[x * y]] = 1
    one = delta_vector(N, N.identity).copy()
    action = {}
    for w in W.elements:
        m = np.zeros((d, d), dtype=np.int64)
        for i, x in enumerate(elems):
            xw = x.conj(w)
            if xw not in index:
                raise InputError("the acting group does not normalize the base group")
            m[i, index[xw]] = 1
        action[w] = FqMatrix(F, m)
    A = GAlgebra(F, tuple(elems), c, one, W, action)
    A.validate()
    return A


@dataclass
class BlockAlgebraData:
    """Block algebra F[N]e together with its embedding data in F[N]."""

    algebra: GAlgebra
    base_group: PermGroup
    idempotent: np.ndarray
    basis_vectors: FqMatrix = dc_field(repr=False)

    def element_of(self, n: Perm) -> np.ndarray:
        """Coordinates of n e in the block basis."""
        F = self.algebra.field
        vec = algebra_mul(
            F, self.base_group, delta_vector(self.base_group, n), self.idempotent
        )
        sol = self.basis_vectors.solve_rows(FqMatrix(F, vec[None, :]))
        if sol is None:
            raise InternalCheckError("group element escapes the block basis")
        return sol.a[0].copy()


def theta_block_algebra(N: PermGroup, theta, W: PermGroup, F: FqField = None) -> BlockAlgebraData:
    """Block algebra F[N]e for the block of an irreducible character.

    The basis is chosen greedily from the spanning set {n e : n in N}, whole
    W-orbits at a time, so whenever the greedy pass completes the basis is
    stable under the conjugation action of W as a set.
    """
    if F is None:
        F = char_value_field(theta)
    p = theta.p
    _, e = block_of_char(theta, F, p)
    nelems = N.elements
    seen = set()
    orbits = []
    for n in nelems:
        if n in seen:
            continue
        orb = {n}
        frontier = [n]
        while frontier:
            new = []
            for x in frontier:
                for w in W.generators or [W.identity]:
                    y = x.conj(w)
                    if y not in orb:
                        orb.add(y)
                        new.append(y)
            frontier = new
        seen |= orb
        orbits.append(sorted(orb))
    for w in W.generators or [W.identity]:
        ew = np.zeros_like(e)
        for i, n in enumerate(nelems):
            ew[N.index_of(n.conj(w))] = e[i]
        if not np.array_equal(ew, e):
            raise InputError("the block idempotent is not stable under the action")
    if not np.array_equal(algebra_mul(F, N, e, e), e):
        raise InternalCheckError("block vector is not idempotent over this field")
    span = EchelonBasis(F, len(nelems))
    all_vecs = {n: algebra_mul(F, N, delta_vector(N, n), e) for n in nelems}
    span.insert_all(np.array([all_vecs[n] for n in nelems]))
    eb = EchelonBasis(F, len(nelems))
    chosen = []
    vectors = []
    for orb in orbits:
        vecs = [all_vecs[n] for n in orb]
        probe = EchelonBasis(F, len(nelems))
        if eb.dim:
            probe.insert_all(eb.matrix().a)
        if probe.insert_all(np.array(vecs)) != len(orb):
            continue
        eb.insert_all(np.array(vecs))
        chosen.extend(orb)
        vectors.extend(vecs)
    if eb.dim != span.dim:
        raise InputError("whole-orbit selection did not span the block")
    B = FqMatrix(F, np.array(vectors, dtype=np.int64))
    d = len(chosen)
    idem = FqMatrix(F, e[None, :])
    c = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            prod = algebra_mul(F, N, vectors[i], vectors[j])
            sol = B.solve_rows(FqMatrix(F, prod[None, :]))
            if sol is None:
                raise InternalCheckError("block basis is not closed under products")
            c[i, j] = sol.a[0]
    one = B.solve_rows(idem).a[0]
    index = {n: i for i, n in enumerate(chosen)}
    action = {}
    for w in W.elements:
        m = np.zeros((d, d), dtype=np.int64)
        ok = True
        for i, n in enumerate(chosen):
            nw = n.conj(w)
            if nw in index:
                m[i, index[nw]] = 1
            else:
                ok = False
                break
        if ok:
            action[w] = FqMatrix(F, m)
        else:
            rows = []
            for i in range(d):
                vw = np.zeros_like(vectors[i])
                for k, n in enumerate(nelems):
                    vw[N.index_of(n.conj(w))] = vectors[i][k]
                rows.append(vw)
            sol = B.solve_rows(FqMatrix(F, np.array(rows)))
            if sol is None:
                raise InternalCheckError("conjugation leaves the block basis span")
            action[w] = sol
    A = GAlgebra(F, tuple(chosen), c, one, W, action)
    A.validate()
    return BlockAlgebraData(A, N, e, B)


def fixed_points(A: GAlgebra, S: PermGroup) -> FqMatrix:
    """Echelon basis of the fixed subalgebra A^S, one row per basis vector."""
    d = A.dim
    gens = list(S.generators)
    if not gens:
        return FqMatrix.identity(A.field, d)
    blocks = []
    for g in gens:
        M = A.action[g].copy()
        for i in range(d):
            M.a[i, i] = A.field.sub(M.a[i, i], 1)
        blocks.append(M.a)
    stacked = FqMatrix(A.field, np.concatenate(blocks, axis=1))
    return stacked.left_nullspace()


def relative_trace(A: GAlgebra, T: PermGroup, S: PermGroup, x, transversal=None):
    """Sum of the conjugates of x over a right transversal of T in S."""
    if transversal is None:
        transversal = _right_transversal(T, S)
    F = A.field
    out = np.zeros(A.dim, dtype=np.int64)
    for g in transversal:
        out = F.add(out, A.act(x, g))
    return out


def _right_transversal(T: PermGroup, S: PermGroup):
    tset = set(T.elements)
    if not tset <= set(S.elements):
        raise InputError("trace source is not a subgroup of the target")
    seen = set()
    reps = []
    for g in S.elements:
        if g in seen:
            continue
        coset = sorted(t * g for t in tset)
        seen |= set(coset)
        reps.append(coset[0])
    return reps


def trace_image(A: GAlgebra, T: PermGroup, S: PermGroup, seed: int = 7) -> EchelonBasis:
    """Image of the relative trace map from A^T into A^S.

    The image cannot depend on the transversal; this is asserted by
    recomputing with representatives shifted by random elements of T.
    """
    base = _right_transversal(T, S)
    rng = random.Random(seed)
    telems = T.elements
    shuffled = [rng.choice(telems) * g for g in base]
    fixedT = fixed_points(A, T)
    out = EchelonBasis(A.field, A.dim)
    alt = EchelonBasis(A.field, A.dim)
    for row in fixedT.a:
        tr = relative_trace(A, T, S, row, transversal=base)
        out.insert(tr)
        alt.insert(relative_trace(A, T, S, row, transversal=shuffled))
    if not np.array_equal(out.matrix().a, alt.matrix().a):
        raise InternalCheckError("relative trace depended on the transversal")
    fixedS = fixed_points(A, S)
    span = EchelonBasis(A.field, A.dim)
    span.insert_all(fixedS.a)
    for row in out.matrix().a if out.dim else []:
        if not span.contains(row):
            raise InternalCheckError("trace image escapes the fixed subalgebra")
    return out


def algebra_center(A: GAlgebra) -> FqMatrix:
    """Echelon basis of the centre, as rows of coordinates."""
    F = A.field
    blocks = []
    for i in range(A.dim):
        L = A.left_mult_matrix(i)
        R = A.right_mult_matrix(i)
        blocks.append(F.sub(R.a, L.a))
    stacked = FqMatrix(F, np.concatenate(blocks, axis=1))
    return stacked.left_nullspace()


def _identity_is_relative_trace(rep: MatrixRep, V: PermGroup) -> bool:
    F = rep.field
    n = rep.dim
    basis = intertwiner_space(rep.restrict(V), rep.restrict(V))
    reps_ = _right_transversal(V, rep.group)
    inv = {g: rep.of(g).inverse() for g in reps_}
    image = EchelonBasis(F, n * n)
    for row in basis.a:
        B = FqMatrix(F, row.reshape(n, n).copy())
        acc = np.zeros((n, n), dtype=np.int64)
        for g in reps_:
            acc = F.add(acc, (inv[g] @ B @ rep.of(g)).a)
        image.insert(acc.reshape(n * n))
    return image.contains(FqMatrix.identity(F, n).a.reshape(n * n))


def vertex(rep: MatrixRep, p: int) -> Subgroup:
    """Minimal p-subgroup from which the identity endomorphism is a relative trace.

    The trace computations run directly in the endomorphism algebra of the
    module, with the group acting by conjugation.  The result is the least
    canonical representative of the unique minimal conjugacy class, and any
    subgroup passing the trace test contains a conjugate of it.
    """
    if not is_absolutely_irreducible(rep):
        raise InputError("vertex is defined here for absolutely irreducible modules")
    for V in p_subgroups_up_to_conjugacy(rep.group, p):
        if _identity_is_relative_trace(rep, V):
            return V
    raise InternalCheckError("the Sylow p-subgroup failed the relative trace test")


@dataclass
class BrauerQuotientData:
    """Brauer quotient of a G-algebra at a p-subgroup D of the acting group.

    fixed holds a row basis of A^D; ideal spans the sum of the trace images
    from the proper subgroups of D; quotient is None when the ideal is all of
    A^D.  br maps coordinate rows of A^D onto quotient coordinates.
    """

    source: GAlgebra
    D: PermGroup
    fixed: FqMatrix
    ideal: EchelonBasis
    quotient: GAlgebra = None
    _solver: FqMatrix = dc_field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return 0 if self.quotient is None else self.quotient.dim

    def br(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.quotient is None:
            if not self.ideal.contains(x):
                raise InputError("element lies outside the fixed subalgebra")
            return np.zeros(0, dtype=np.int64)
        sol = self._solver.solve_rows(FqMatrix(self.source.field, x[None, :]))
        if sol is None:
            raise InputError("element lies outside the fixed subalgebra")
        return sol.a[0][: self.quotient.dim].copy()


def brauer_quotient(A: GAlgebra, D: PermGroup) -> BrauerQuotientData:
    """Quotient of A^D by the relative traces from proper subgroups of D.

    Maximal subgroups suffice for the ideal because trace maps compose.  A
    zero quotient is a legal outcome.  The quotient multiplication is checked
    to make br multiplicative on a basis of A^D.
    """
    F = A.field
    fixed = fixed_points(A, D)
    ideal = EchelonBasis(F, A.dim)
    for Q in maximal_subgroups(D):
        img = trace_image(A, Q, D)
        if img.dim:
            ideal.insert_all(img.matrix().a)
    comp = []
    probe = EchelonBasis(F, A.dim)
    if ideal.dim:
        probe.insert_all(ideal.matrix().a)
    for row in fixed.a:
        if probe.insert(row):
            comp.append(row.copy())
    if not comp:
        return BrauerQuotientData(A, D, fixed, ideal)
    rows = comp + ([r for r in ideal.matrix().a] if ideal.dim else [])
    solver = FqMatrix(F, np.array(rows, dtype=np.int64))
    data = BrauerQuotientData(A, D, fixed, ideal, _solver=solver)
    dq = len(comp)
    cq = np.zeros((dq, dq, dq), dtype=np.int64)
    for i in range(dq):
        for j in range(dq):
            prod = A.mul(comp[i], comp[j])
            sol = solver.solve_rows(FqMatrix(F, prod[None, :]))
            if sol is None:
                raise InternalCheckError("fixed subalgebra is not closed under products")
            cq[i, j] = sol.a[0][:dq]
    oneq = solver.solve_rows(FqMatrix(F, A.one[None, :]))
    if oneq is None:
        raise InternalCheckError("identity escapes the fixed subalgebra")
    oneq = oneq.a[0][:dq].copy()
    if np.all(oneq == 0):
        raise InternalCheckError("identity fell into the trace ideal of a nonzero quotient")
    triv = PermGroup([Perm.identity(A.group.degree)], degree=A.group.degree)
    labels = tuple("q%d" % i for i in range(dq))
    quotient = GAlgebra(
        F, labels, cq, oneq, triv, {triv.identity: FqMatrix.identity(F, dq)}
    )
    quotient.validate()
    data.quotient = quotient
    for x in fixed.a:
        for y in fixed.a:
            lhs = data.br(A.mul(x, y))
            rhs = quotient.mul(data.br(x), data.br(y))
            if not np.array_equal(lhs, rhs):
                raise InternalCheckError("Brauer map is not multiplicative")
    return data


def _algebra_spin(F: FqField, gens, vectors) -> EchelonBasis:
    dim = gens[0].a.shape[0] if gens else len(np.atleast_2d(vectors)[0])
    eb = EchelonBasis(F, dim)
    frontier = []
    for v in np.atleast_2d(np.asarray(vectors, dtype=np.int64)):
        if eb.insert(v):
            frontier.append(np.array(v))
    while frontier:
        new = []
        for v in frontier:
            for X in gens:
                w = row_times(F, v, X)
                if eb.insert(w):
                    new.append(w)
        frontier = new
    return eb


def _random_element(F: FqField, gens, rng) -> FqMatrix:
    d = gens[0].a.shape[0]
    A = FqMatrix.identity(F, d).scale(rng.randrange(F.q))
    for _ in range(rng.randrange(1, 4)):
        M = FqMatrix.identity(F, d)
        for _ in range(rng.randrange(1, 4)):
            M = M @ rng.choice(gens)
        A = A + M.scale(rng.randrange(1, F.q))
    return A


def split_algebra_module(F: FqField, gens, seed: int = 0, tries: int = 60):
    """Proper nonzero row space invariant under all generators, or None.

    None certifies irreducibility: either some algebra element has an
    irreducible characteristic polynomial, or a multiplicity-one factor
    splits neither the module nor its transpose module.
    """
    n = gens[0].a.shape[0]
    if n == 1:
        return None
    rng = random.Random(seed)
    tgens = [g.t() for g in gens]
    for _ in range(tries):
        A = _random_element(F, gens, rng)
        factors = factor_poly(F, A.charpoly())
        if len(factors) == 1 and factors[0][1] == 1:
            return None
        for f, mult in factors:
            fa = poly_at_matrix(F, f, A)
            ker = fa.left_nullspace()
            for v in ker.a:
                W = _algebra_spin(F, gens, v)
                if W.dim < n:
                    return W
            if mult == 1 and ker.nrows:
                kert = poly_at_matrix(F, f, A.t()).left_nullspace()
                Wd = _algebra_spin(F, tgens, kert.a[0])
                if Wd.dim == n:
                    return None
                perp = Wd.matrix().t().left_nullspace()
                eb = EchelonBasis(F, n)
                eb.insert_all(perp.a)
                if not 0 < eb.dim < n:
                    raise InternalCheckError("transpose complement has the wrong size")
                return eb
    raise InternalCheckError("no certified split after %d random elements" % tries)


def _restrict_mats(F: FqField, gens, basis: EchelonBasis):
    B = basis.matrix()
    out = []
    for M in gens:
        S = B.solve_rows(B @ M)
        if S is None:
            raise InternalCheckError("row space is not invariant")
        out.append(S)
    return out


def _quotient_mats(F: FqField, gens, basis: EchelonBasis):
    cols = basis.nonpivot_columns()
    out = []
    for M in gens:
        m = np.zeros((len(cols), len(cols)), dtype=np.int64)
        for a, ccol in enumerate(cols):
            m[a] = basis.reduce(M.a[ccol])[cols]
        out.append(FqMatrix(F, m))
    return out


def algebra_composition_factors(F: FqField, gens, seed: int = 0):
    """Generator images on each composition factor, bottom of a series first."""
    out = []
    stack = [gens]
    while stack:
        mats = stack.pop()
        if mats[0].a.shape[0] == 0:
            continue
        W = split_algebra_module(F, mats, seed=seed)
        if W is None:
            out.append(mats)
        else:
            stack.append(_quotient_mats(F, mats, W))
            stack.append(_restrict_mats(F, mats, W))
    return out


@dataclass
class MatrixAlgebraData:
    """Identification of a GAlgebra with a full matrix algebra over its field."""

    algebra: GAlgebra
    degree: int
    images: list = dc_field(repr=False)
    _solver: FqMatrix = dc_field(default=None, repr=False)

    def to_matrix(self, x) -> FqMatrix:
        F = self.algebra.field
        acc = np.zeros((self.degree, self.degree), dtype=np.int64)
        for i, xi in enumerate(np.asarray(x)):
            if xi:
                acc = F.add(acc, self.images[i].scale(int(xi)).a)
        return FqMatrix(F, acc)

    def from_matrix(self, M: FqMatrix) -> np.ndarray:
        sol = self._solver.solve_rows(
            FqMatrix(self.algebra.field, M.a.reshape(1, -1).copy())
        )
        if sol is None:
            raise InternalCheckError("matrix outside the image of the algebra")
        return sol.a[0].copy()


def matrix_algebra_structure(A: GAlgebra, seed: int = 0):
    """Realize A as a full matrix algebra over its base field, or None.

    Splits the right regular module; A is a full matrix algebra exactly when
    its dimension is a perfect square l^2, its centre is the scalars, and a
    composition factor of dimension l carries a faithful action.
    """
    d = A.dim
    l = math.isqrt(d)
    if l * l != d:
        return None
    cen = algebra_center(A)
    if cen.nrows != 1:
        return None
    F = A.field
    regular = [A.right_mult_matrix(i) for i in range(d)]
    factors = algebra_composition_factors(F, regular, seed=seed)
    images = None
    for mats in factors:
        if mats[0].a.shape[0] == l:
            images = mats
            break
    if images is None:
        return None
    flat = np.array([M.a.reshape(-1) for M in images], dtype=np.int64)
    solver = FqMatrix(F, flat)
    if solver.rank() != d:
        return None
    data = MatrixAlgebraData(A, l, list(images), _solver=solver)
    if not data.to_matrix(A.one).is_identity():
        return None
    for i in range(d):
        for j in range(d):
            lhs = images[i] @ images[j]
            rhs = data.to_matrix(A.c[i, j])
            if not np.array_equal(lhs.a, rhs.a):
                raise InternalCheckError("regular factor action is not multiplicative")
    return data


def _induced_quotient_algebra(A: GAlgebra, bq: BrauerQuotientData, D: PermGroup):
    """Quotient of A at Z = bq.D as a GAlgebra with the induced D/Z action."""
    qm = quotient_group(D, bq.D)
    F = A.field
    dq = bq.quotient.dim
    lifted = bq._solver.a[:dq]
    action = {}
    for q in qm.group.elements:
        g = qm.section(q)
        rows = [bq.br(A.act(lifted[i], g)) for i in range(dq)]
        action[q] = FqMatrix(F, np.array(rows, dtype=np.int64))
    out = GAlgebra(
        F, bq.quotient.labels, bq.quotient.c, bq.quotient.one, qm.group, action
    )
    out.validate()
    return out, qm


def iterated_quotient_check(A: GAlgebra, D: PermGroup) -> bool:
    """Quotient at the centre of D followed by the induced D/Z quotient
    agrees with the direct quotient at D: equal kernels inside A^D and a
    multiplicative bijection between the two quotients.  Abelian D
    degenerates to a single step and returns True.
    """
    Z = center(D)
    direct = brauer_quotient(A, D)
    if Z.order == D.order:
        return True
    bqZ = brauer_quotient(A, Z)
    if bqZ.quotient is None:
        return direct.quotient is None
    induced_alg, qm = _induced_quotient_algebra(A, bqZ, D)
    second = brauer_quotient(induced_alg, qm.group)

    def composite(x):
        return second.br(bqZ.br(x))

    F = A.field
    fixedD = fixed_points(A, D)
    ker_direct = EchelonBasis(F, A.dim)
    ker_composite = EchelonBasis(F, A.dim)
    for row in fixedD.a:
        if np.all(direct.br(row) == 0):
            ker_direct.insert(row)
        if np.all(composite(row) == 0):
            ker_composite.insert(row)
    if not np.array_equal(ker_direct.matrix().a, ker_composite.matrix().a):
        return False
    if direct.quotient is None:
        return second.quotient is None
    if second.quotient is None or direct.dim != second.dim:
        return False
    dq = direct.dim
    lifted = direct._solver.a[:dq]
    U = FqMatrix(F, np.array([composite(r) for r in lifted], dtype=np.int64))
    if U.rank() != dq:
        return False
    for i in range(dq):
        for j in range(dq):
            prod = direct.quotient.c[i, j]
            lhs = row_times(F, prod, U)
            rhs = second.quotient.mul(U.a[i], U.a[j])
            if not np.array_equal(lhs, rhs):
                return False
    if not np.array_equal(row_times(F, direct.quotient.one, U), second.quotient.one):
        return False
    return True


@dataclass
class DadeData:
    """Witness that a matrix G-algebra has a stable basis in the Dade sense.

    perms[d] gives the index permutation of the basis under d; fixed_index is
    the least basis index in a trivial orbit; rho is the unique homomorphism
    from the acting p-group into the unit group implementing the action by
    conjugation, with rho(d)^order(d) = 1.
    """

    algebra: GAlgebra
    D: PermGroup
    structure: MatrixAlgebraData
    perms: dict
    fixed_index: int
    rho: dict


def dade_structure(A: GAlgebra, seed: int = 0):
    """Recognize A, with its own basis, as a Dade algebra for its acting group.

    Returns None when the basis is not permuted by the action or no basis
    element is fixed by the whole group; neither outcome proves the algebra
    is not Dade for some other basis.
    """
    D = A.group
    if D.order > 1:
        primes = {q for q in range(2, D.order + 1) if D.order % q == 0 and is_prime(q)}
        if len(primes) != 1:
            raise InputError("the acting group of a Dade algebra must be a p-group")
    struct = matrix_algebra_structure(A, seed=seed)
    if struct is None:
        raise InputError("Dade recognition needs a full matrix algebra")
    F = A.field
    d = A.dim
    perms = {}
    for g in D.elements:
        M = A.action[g].a
        pi = np.full(d, -1, dtype=np.int64)
        for i in range(d):
            nz = np.nonzero(M[i])[0]
            if len(nz) != 1 or M[i, nz[0]] != 1:
                return None
            pi[i] = nz[0]
        if len(set(pi.tolist())) != d:
            return None
        perms[g] = pi
    fixed_index = None
    for i in range(d):
        if all(perms[g][i] == i for g in D.elements):
            fixed_index = i
            break
    if fixed_index is None:
        return None
    l = struct.degree
    rho = {}
    rho_mats = {}
    for g in D.elements:
        blocks = []
        eye = FqMatrix.identity(F, l)
        for i in range(d):
            P = struct.to_matrix(A.act(A.basis_row(i), g))
            Q = struct.images[i]
            blocks.append(F.sub(eye.kron(P).a, Q.t().kron(eye).a))
        sol = FqMatrix(F, np.concatenate(blocks, axis=1)).left_nullspace()
        if sol.nrows != 1:
            raise InternalCheckError(
                "conjugating unit is not unique up to scalar (got %d)" % sol.nrows
            )
        R = FqMatrix(F, sol.a[0].reshape(l, l).copy())
        k = g.order()
        Rk = FqMatrix.identity(F, l)
        for _ in range(k):
            Rk = Rk @ R
        diag = Rk.a[0, 0]
        if not np.array_equal(Rk.a, FqMatrix.identity(F, l).scale(int(diag)).a):
            raise InternalCheckError("power of the conjugating unit is not scalar")
        lam = int(F.pow_int(F.inv(int(diag)), pow(k, -1, F.q - 1) if F.q > 2 else 1))
        R = R.scale(lam)
        rho_mats[g] = R
        rho[g] = struct.from_matrix(R)
    for g in D.elements:
        Rg = rho_mats[g]
        Ri = Rg.inverse()
        for i in range(d):
            lhs = Ri @ struct.images[i] @ Rg
            rhs = struct.to_matrix(A.act(A.basis_row(i), g))
            if not np.array_equal(lhs.a, rhs.a):
                raise InternalCheckError("normalized unit stopped conjugating")
    for g in D.elements:
        for h in D.elements:
            if not np.array_equal((rho_mats[g] @ rho_mats[h]).a, rho_mats[g * h].a):
                raise InternalCheckError("normalized units do not form a homomorphism")
    return DadeData(A, D, struct, perms, fixed_index, rho)


def dgn_via_brauer_quotient(N: PermGroup, D: PermGroup, theta, L: FqField):
    """Fixed-point correspondent of theta through the block-algebra quotient.

    Realizes the quotient of the block algebra at D as a matrix algebra and
    reads off the module of C = C_N(D) carried by the images of the
    centralizer elements.  Independent of the idempotent-truncation route.
    """
    from .brauer import brauer_char_of
    from .groups import centralizer

    data = theta_block_algebra(N, theta, D)
    bq = brauer_quotient(data.algebra, D)
    if bq.quotient is None:
        raise InternalCheckError("block quotient vanished at the defect group")
    struct = matrix_algebra_structure(bq.quotient)
    if struct is None:
        raise InternalCheckError("block quotient is not a matrix algebra")
    C = centralizer(N, D)
    images = {c: struct.to_matrix(bq.br(data.element_of(c))) for c in C.elements}
    rep = MatrixRep(C, data.algebra.field, images)
    return brauer_char_of(rep, L, theta.p)
