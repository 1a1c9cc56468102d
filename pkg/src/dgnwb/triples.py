"""Character triples with Galois descent data and their cohomology classes.

A triple (G, N, theta) couples an irreducible Brauer character theta of a
normal subgroup N to the conjugation action of G: every G-conjugate of theta
must be a Frobenius twist of theta.  From that seed the module builds a
realization of theta over its value field E, projective extensions of the
realization to the stabilizer of theta, the mu-functions that measure how
pair actions deform an extension, and a matrix function Y on all of G over
the prime field whose deviation from multiplicativity is a twisted 2-cocycle
of G/N.  The cohomology class of that cocycle is an invariant of the triple,
and matching classes between two compatible triples produces the pair of
projective representations witnessing the order relation between them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from .brauer import BrauerChar, act_char, brauer_char_of, char_value_field
from .errors import InputError, InternalCheckError
from .fields import FqField, field_create, solve_mod
from .groups import Perm, PermGroup, QuotientMap, Subgroup, quotient_group
from .matrices import FqMatrix, contract_entries, expand_entries
from .reps import (
    MatrixRep,
    canonical_intertwiner,
    composition_factors,
    is_absolutely_irreducible,
)

_EXHAUSTIVE_PAIR_CAP = 6000


def _scalar_of(M: FqMatrix):
    """The scalar c with M == c*I, or None."""
    c = int(M.a[0, 0])
    if M == FqMatrix.identity(M.field, M.nrows).scale(c):
        return c
    return None


def _ratio(A: FqMatrix, B: FqMatrix):
    """The scalar c with A == c*B, or None.  B must be nonzero."""
    nz = np.nonzero(B.a)
    if nz[0].size == 0:
        raise InputError("ratio against the zero matrix")
    i, j = int(nz[0][0]), int(nz[1][0])
    c = int(A.field.div(int(A.a[i, j]), int(B.a[i, j])))
    if A == B.scale(c):
        return c
    return None


@dataclass
class CharTriple:
    """A normal-subgroup character whose Frobenius orbit is conjugation
    stable, together with the Galois action this forces on its value field."""

    G: PermGroup
    N: PermGroup
    theta: BrauerChar
    p: int
    L: FqField
    E: FqField
    stabilizer: Subgroup
    sigma: dict = dc_field(repr=False)
    qm: QuotientMap = dc_field(repr=False)

    def sigma_of(self, g: Perm) -> int:
        if g not in self.G:
            raise InputError("element outside the triple's group")
        return self.sigma[g]

    def pair_stabilizes(self, t: int, g: Perm) -> bool:
        """Whether the pair (Frobenius^t, g) fixes the character."""
        if g not in self.G:
            raise InputError("element outside the triple's group")
        return (t + self.sigma[g.inverse()]) % self.E.s == 0


def make_triple(G: PermGroup, N: PermGroup, theta: BrauerChar) -> CharTriple:
    """Validate the conjugation data of (G, N, theta) and package it.

    Rejected when some conjugate of theta is not a Frobenius twist of theta;
    the offending group element is named in the error.
    """
    if not N.is_subset(G) or not N.is_normal_in(G):
        raise InputError("the character must live on a normal subgroup")
    if theta.group_key != N.key():
        raise InputError("character group does not match the normal subgroup")
    E = char_value_field(theta)
    twists = [act_char(theta, t) for t in range(E.s)]
    sigma = {}
    for g in G.elements:
        target = act_char(theta, 0, g.inverse())
        t = next((i for i, tw in enumerate(twists) if tw == target), None)
        if t is None:
            raise InputError(
                "conjugation by %r moves the character out of its Frobenius orbit"
                % (g,)
            )
        sigma[g] = t
    stabilizer = Subgroup(G, elements=[g for g in G.elements if sigma[g] == 0])
    if not stabilizer.is_normal_in(G):
        raise InternalCheckError("character stabilizer fails normality")
    return CharTriple(
        G=G,
        N=N,
        theta=theta,
        p=theta.p,
        L=theta.field,
        E=E,
        stabilizer=stabilizer,
        sigma=sigma,
        qm=quotient_group(G, N),
    )


def sigma_of(triple: CharTriple, g: Perm) -> int:
    """Frobenius exponent on E matching conjugation by g."""
    return triple.sigma_of(g)


def realize_over(triple: CharTriple) -> MatrixRep:
    """A representation of N over the value field E affording theta."""
    reg = MatrixRep.regular(triple.N, triple.E)
    for fac in composition_factors(reg):
        if fac.dim != triple.theta.degree:
            continue
        if brauer_char_of(fac, triple.L, triple.p) == triple.theta:
            if not is_absolutely_irreducible(fac):
                raise InternalCheckError(
                    "realization over the value field is not absolutely irreducible"
                )
            return fac
    raise InternalCheckError(
        "no factor of the regular module affords the character"
    )


def _check_realization(triple: CharTriple, X: MatrixRep):
    if X.group.key() != triple.N.key():
        raise InputError("realization lives on the wrong group")
    if X.field.q != triple.E.q:
        raise InputError("realization field is not the value field")
    if brauer_char_of(X, triple.L, triple.p) != triple.theta:
        raise InputError("realization does not afford the character")


def _normalize_transversal(qm: QuotientMap, transversal):
    if transversal is None:
        return list(qm.transversal)
    reps = list(transversal)
    seen = set()
    for r in reps:
        if r not in qm.domain:
            raise InputError("transversal element outside the group")
        i = qm.coset_index(r)
        if i in seen:
            raise InputError("transversal repeats a coset")
        seen.add(i)
    if len(seen) != len(qm.cosets):
        raise InputError("transversal misses a coset")
    return reps


@dataclass
class TwistedCocycle:
    """Factor set with coefficients in E twisted by a Frobenius action."""

    group: PermGroup
    field: FqField
    action: dict = dc_field(repr=False)
    values: dict = dc_field(repr=False)

    def value(self, x: Perm, y: Perm) -> int:
        return self.values[(x, y)]

    def act(self, code: int, y: Perm) -> int:
        return int(self.field.frobenius(code, self.action[y]))

    def validate(self):
        E = self.field
        elems = self.group.elements
        one = self.group.identity
        for x in elems:
            for y in elems:
                if self.values[(x, y)] == 0:
                    raise InternalCheckError("cocycle takes the value zero")
            if not 0 <= self.action[x] < E.s:
                raise InternalCheckError("action exponent out of range")
        for x in elems:
            for y in elems:
                got = (self.action[x] + self.action[y]) % E.s
                if self.action[x * y] % E.s != got:
                    raise InternalCheckError("action is not a homomorphism")
        for x in elems:
            if self.values[(one, x)] != 1 or self.values[(x, one)] != 1:
                raise InternalCheckError("cocycle is not normalized")
        for x in elems:
            for y in elems:
                v_xy = self.values[(x, y)]
                xy = x * y
                for z in elems:
                    left = E.mul(self.values[(xy, z)], self.act(v_xy, z))
                    right = E.mul(self.values[(x, y * z)], self.values[(y, z)])
                    if int(left) != int(right):
                        raise InternalCheckError(
                            "twisted cocycle identity fails at %r" % ((x, y, z),)
                        )

    def inverse(self) -> "TwistedCocycle":
        E = self.field
        inv = {k: int(E.inv(v)) for k, v in self.values.items()}
        return TwistedCocycle(self.group, E, dict(self.action), inv)

    def restrict(self, sub: PermGroup) -> "TwistedCocycle":
        if not sub.is_subset(self.group):
            raise InputError("restriction target is not a subgroup")
        vals = {
            (x, y): self.values[(x, y)] for x in sub.elements for y in sub.elements
        }
        act = {x: self.action[x] for x in sub.elements}
        return TwistedCocycle(sub, self.field, act, vals)


def trivial_cocycle(group: PermGroup, E: FqField, action=None) -> TwistedCocycle:
    act = dict(action) if action else {g: 0 for g in group.elements}
    vals = {(x, y): 1 for x in group.elements for y in group.elements}
    return TwistedCocycle(group, E, act, vals)


def apply_coboundary(cocycle: TwistedCocycle, gamma: dict) -> TwistedCocycle:
    """Multiply by the twisted coboundary of gamma; gamma(1) must be 1."""
    E = cocycle.field
    one = cocycle.group.identity
    if gamma.get(one, 1) != 1:
        raise InputError("coboundary data must be normalized at the identity")
    vals = {}
    for (x, y), v in cocycle.values.items():
        w = E.mul(v, cocycle.act(gamma[x], y))
        w = E.mul(w, gamma[y])
        vals[(x, y)] = int(E.div(w, gamma[x * y]))
    return TwistedCocycle(cocycle.group, E, dict(cocycle.action), vals)


def cohomologous(c1: TwistedCocycle, c2: TwistedCocycle):
    """A map gamma with c2 = c1 * (twisted coboundary of gamma), or None.

    The condition is linear in discrete logarithms, with the Frobenius twist
    acting as multiplication by p^t, so one complete solve over Z/(q-1)
    settles it; None is a definitive negative.
    """
    if c1.group.key() != c2.group.key():
        raise InputError("cocycles live on different groups")
    if c1.field.q != c2.field.q:
        raise InputError("cocycles take values in different fields")
    if any(
        c1.action[g] % c1.field.s != c2.action[g] % c1.field.s
        for g in c1.group.elements
    ):
        raise InputError("cocycles carry different Galois actions")
    E = c1.field
    mmod = E.q - 1
    elems = c1.group.elements
    if mmod == 1:
        return {g: 1 for g in elems}
    var = {g: i for i, g in enumerate(g for g in elems if not g.is_identity())}
    rows, rhs = [], []
    for x in elems:
        for y in elems:
            row = [0] * len(var)
            if not x.is_identity():
                row[var[x]] += pow(E.p, c1.action[y], mmod)
            if not y.is_identity():
                row[var[y]] += 1
            xy = x * y
            if not xy.is_identity():
                row[var[xy]] -= 1
            d = int(E.dlog(c2.values[(x, y)])) - int(E.dlog(c1.values[(x, y)]))
            rows.append([c % mmod for c in row])
            rhs.append(d % mmod)
    sol = solve_mod(rows, rhs, mmod)
    if sol is None:
        return None
    gamma = {c1.group.identity: 1}
    for g, i in var.items():
        gamma[g] = int(E.from_dlog(sol[i] % mmod))
    for x in elems:
        for y in elems:
            lhs = E.mul(c1.values[(x, y)], c1.act(gamma[x], y))
            lhs = E.mul(lhs, gamma[y])
            lhs = E.div(lhs, gamma[x * y])
            if int(lhs) != int(c2.values[(x, y)]):
                raise InternalCheckError("coboundary solution fails verification")
    return gamma


@dataclass
class CocycleClass:
    """Cohomology class of a triple, carried by one representative."""

    representative: TwistedCocycle

    def matches(self, other: "CocycleClass"):
        return cohomologous(self.representative, other.representative)


@dataclass
class ProjectiveExtension:
    """Projective representation of a subgroup S with N <= S <= G_theta that
    restricts to a fixed realization of theta on N."""

    triple: CharTriple
    group: PermGroup
    x: MatrixRep = dc_field(repr=False)
    images: dict = dc_field(repr=False)
    qm: QuotientMap = dc_field(repr=False)
    cocycle: TwistedCocycle = dc_field(repr=False)

    @property
    def degree(self) -> int:
        return self.x.dim

    def of(self, g: Perm) -> FqMatrix:
        return self.images[g]

    def factor(self, g: Perm, h: Perm) -> int:
        return self.cocycle.values[(self.qm.image(g), self.qm.image(h))]

    def restrict(self, sub: PermGroup) -> "ProjectiveExtension":
        if not (self.triple.N.is_subset(sub) and sub.is_subset(self.group)):
            raise InputError("restriction must sit between N and the domain")
        images = {g: self.images[g] for g in sub.elements}
        return _finish_extension(self.triple, sub, self.x, images)


def _pair_sample(elems, cap, salt):
    """Deterministic pair coverage: exhaustive below the cap, sampled above."""
    n = len(elems)
    if n * n <= cap:
        for x in elems:
            for y in elems:
                yield x, y
        return
    rng = random.Random(salt)
    for _ in range(cap // 20):
        yield rng.choice(elems), rng.choice(elems)


def _finish_extension(triple, S, X, images) -> ProjectiveExtension:
    E = triple.E
    N = triple.N
    qm = quotient_group(S, N)
    if not images[S.identity].is_identity():
        raise InternalCheckError("extension does not send 1 to the identity")
    for n in N.elements:
        if images[n] != X.of(n):
            raise InternalCheckError("extension does not restrict to the realization")
    gens = list(N.generators) or [N.identity]
    exhaustive = S.order * N.order <= _EXHAUSTIVE_PAIR_CAP
    nrange = N.elements if exhaustive else gens
    for g in S.elements:
        for n in nrange:
            if images[n * g] != X.of(n) @ images[g]:
                raise InternalCheckError("left coset normalization fails")
            if images[g * n] != images[g] @ X.of(n):
                raise InternalCheckError("right coset normalization fails")
    vals = {}
    for r1 in qm.transversal:
        for r2 in qm.transversal:
            c = _ratio(images[r1] @ images[r2], images[r1 * r2])
            if c is None or c == 0:
                raise InternalCheckError("extension product leaves the scalar line")
            vals[(qm.image(r1), qm.image(r2))] = c
    for g, h in _pair_sample(list(S.elements), _EXHAUSTIVE_PAIR_CAP, S.order):
        c = _ratio(images[g] @ images[h], images[g * h])
        if c != vals[(qm.image(g), qm.image(h))]:
            raise InternalCheckError("factor set is not constant on cosets")
    cocycle = TwistedCocycle(
        qm.group, E, {q: 0 for q in qm.group.elements}, vals
    )
    cocycle.validate()
    return ProjectiveExtension(triple, S, X, images, qm, cocycle)


def assoc_projective(
    triple: CharTriple, x_rep: MatrixRep = None, transversal=None
) -> ProjectiveExtension:
    """Extend a realization of theta projectively over the stabilizer.

    Each transversal element g gets the canonical intertwiner between the
    g-conjugated realization and the realization itself; the rest of the
    coset follows by left translation.
    """
    S = triple.stabilizer
    X = x_rep if x_rep is not None else realize_over(triple)
    _check_realization(triple, X)
    qm = quotient_group(S, triple.N)
    images = {}
    for r in _normalize_transversal(qm, transversal):
        if r in triple.N:
            T = X.of(r)
        else:
            T = canonical_intertwiner(X.twist_by_conjugation(r), X)
            if T is None:
                raise InternalCheckError("conjugated realization fails to intertwine")
        for n in triple.N.elements:
            images[n * r] = X.of(n) @ T
    return _finish_extension(triple, S, X, images)


@dataclass
class MuFunction:
    """Scalar deformation of an extension under one pair action."""

    pair: tuple
    extension: ProjectiveExtension = dc_field(repr=False)
    intertwiner: FqMatrix = dc_field(repr=False)
    values: dict = dc_field(repr=False)

    def at(self, h: Perm) -> int:
        return self.values[self.extension.qm.coset_index(h)]


def mu_of(P: ProjectiveExtension, a) -> MuFunction:
    """The function mu with P^a similar to mu * P, computed through the
    intertwiner of the N-restrictions."""
    t, g = a
    tr = P.triple
    if act_char(tr.theta, t, g) != tr.theta:
        raise InputError("pair does not stabilize the character")
    tE = t % tr.E.s
    X = P.x
    W = canonical_intertwiner(X.twist_by_conjugation(g).field_twist(tE), X)
    if W is None:
        raise InternalCheckError("twisted realization fails to intertwine")
    Wi = W.inverse()
    gi = g.inverse()
    E = tr.E
    exhaustive = P.group.order <= 100
    values = {}
    for r in P.qm.transversal:
        domain = (
            [n * r for n in tr.N.elements]
            if exhaustive
            else [r, list(tr.N.elements)[-1] * r]
        )
        for h in domain:
            moved = g * h * gi
            if moved not in P.images:
                raise InputError("pair does not normalize the extension domain")
            lhs = FqMatrix(E, E.frobenius(P.of(moved).a, tE))
            c = _ratio(lhs, W @ P.of(h) @ Wi)
            if c is None:
                raise InternalCheckError("pair action is not a scalar deformation")
            idx = P.qm.coset_index(h)
            if values.setdefault(idx, c) != c:
                raise InternalCheckError("mu value varies inside a coset")
    if values[0] != 1:
        raise InternalCheckError("mu is not normalized at the identity")
    return MuFunction(pair=(t, g), extension=P, intertwiner=W, values=values)


@dataclass
class YFunction:
    """Matrix function on G over the prime field coupling the embedded
    algebra of the realization to the conjugation action."""

    triple: CharTriple
    x: MatrixRep = dc_field(repr=False)
    images: dict = dc_field(repr=False)
    qm: QuotientMap = dc_field(repr=False)
    cocycle: TwistedCocycle = dc_field(repr=False)
    embed_change: tuple = dc_field(repr=False, default=None)

    def iota(self, M: FqMatrix) -> FqMatrix:
        out = expand_entries(M)
        if self.embed_change is not None:
            W, Wi = self.embed_change
            out = Wi @ out @ W
        return out

    def contract(self, M: FqMatrix):
        if self.embed_change is not None:
            W, Wi = self.embed_change
            M = W @ M @ Wi
        return contract_entries(M, self.triple.E)

    def of(self, g: Perm) -> FqMatrix:
        return self.images[g]

    def factor(self, g: Perm, h: Perm) -> int:
        return self.cocycle.values[(self.qm.image(g), self.qm.image(h))]


def build_y(
    triple: CharTriple,
    x_rep: MatrixRep = None,
    embed_change: FqMatrix = None,
    transversal=None,
) -> YFunction:
    """Solve for the coupling function over the prime field and read off its
    twisted cocycle on the quotient.

    The identity always represents the trivial coset regardless of the
    supplied transversal; the other representatives each get one linear
    solve, and the rest of the group follows by left translation.
    """
    X = x_rep if x_rep is not None else realize_over(triple)
    _check_realization(triple, X)
    E = triple.E
    m, s = X.dim, E.s
    ms = m * s
    Fp = field_create(triple.p, 1)
    change = None
    if embed_change is not None:
        if embed_change.nrows != ms or embed_change.ncols != ms:
            raise InputError("basis change has the wrong shape")
        change = (embed_change, embed_change.inverse())

    def iota(M):
        out = expand_entries(M)
        if change is not None:
            out = change[1] @ out @ change[0]
        return out

    reps = [
        triple.G.identity if r in triple.N else r
        for r in _normalize_transversal(triple.qm, transversal)
    ]
    gens = list(triple.N.generators)
    zcode = int(E.from_dlog(1)) if E.q > 2 else None
    eye = FqMatrix.identity(Fp, ms)
    solved = {}
    for r in reps:
        if r.is_identity():
            solved[r] = eye
            continue
        ri = r.inverse()
        constraints = [
            (iota(X.of(n)), iota(X.of(ri * n * r))) for n in gens
        ]
        if zcode is not None:
            t = triple.sigma[r]
            zmat = FqMatrix.identity(E, m).scale(zcode)
            zimg = FqMatrix.identity(E, m).scale(int(E.frobenius(zcode, t)))
            constraints.append((iota(zmat), iota(zimg)))
        if not constraints:
            solved[r] = eye
            continue
        blocks = [
            (A.t().kron(eye) - eye.kron(B)).a for A, B in constraints
        ]
        space = FqMatrix(Fp, np.concatenate(blocks, axis=1)).left_nullspace()
        if space.nrows != s:
            raise InternalCheckError(
                "coupling solution space has dimension %d, expected %d"
                % (space.nrows, s)
            )
        Y = FqMatrix(Fp, space.a[0].reshape(ms, ms).copy())
        try:
            Yi = Y.inverse()
        except InputError:
            raise InternalCheckError("nonzero coupling solution is singular")
        for A, B in constraints:
            if Yi @ A @ Y != B:
                raise InternalCheckError("coupling solve fails verification")
        solved[r] = Y
    images = {}
    for r in reps:
        for n in triple.N.elements:
            images[n * r] = iota(X.of(n)) @ solved[r]
    return _assemble_y(triple, X, images, change)


def _assemble_y(triple, X, images, change) -> YFunction:
    """Verify the three coupling clauses and extract the quotient cocycle."""
    E = triple.E
    Fp = images[triple.G.identity].field
    qm = triple.qm

    def iota(M):
        out = expand_entries(M)
        if change is not None:
            out = change[1] @ out @ change[0]
        return out

    def contract(M):
        if change is not None:
            M = change[0] @ M @ change[1]
        return contract_entries(M, E)

    for n in triple.N.elements:
        if images[n] != iota(X.of(n)):
            raise InternalCheckError("coupling differs from the embedding on N")
    gens = list(triple.N.generators)
    zcode = int(E.from_dlog(1)) if E.q > 2 else None
    inverses = {}
    for g in triple.G.elements:
        Y = images[g]
        Yi = Y.inverse()
        inverses[g] = Yi
        gi = g.inverse()
        for n in gens:
            if Yi @ iota(X.of(n)) @ Y != iota(X.of(gi * n * g)):
                raise InternalCheckError("conjugation clause fails")
        if zcode is not None:
            zmat = iota(FqMatrix.identity(E, X.dim).scale(zcode))
            moved = int(E.frobenius(zcode, triple.sigma[g]))
            zimg = iota(FqMatrix.identity(E, X.dim).scale(moved))
            if Yi @ zmat @ Y != zimg:
                raise InternalCheckError("scalar twist clause fails")
    exhaustive = triple.G.order * triple.N.order <= 4 * _EXHAUSTIVE_PAIR_CAP
    nrange = triple.N.elements if exhaustive else gens
    for g in triple.G.elements:
        for n in nrange:
            if images[g * n] != images[g] @ images[n]:
                raise InternalCheckError("right translation clause fails")
            if images[n * g] != images[n] @ images[g]:
                raise InternalCheckError("left translation clause fails")
    vals = {}
    for r1 in qm.transversal:
        q1 = qm.image(r1)
        for r2 in qm.transversal:
            D = inverses[r1 * r2] @ images[r1] @ images[r2]
            C = contract(D)
            c = None if C is None else _scalar_of(C)
            if not c:
                raise InternalCheckError("coupling defect is not an embedded scalar")
            vals[(q1, qm.image(r2))] = c
    for g, h in _pair_sample(list(triple.G.elements), _EXHAUSTIVE_PAIR_CAP, 11):
        D = inverses[g * h] @ images[g] @ images[h]
        C = contract(D)
        c = None if C is None else _scalar_of(C)
        if c != vals[(qm.image(g), qm.image(h))]:
            raise InternalCheckError("factor set is not constant on cosets")
    action = {qm.image(r): triple.sigma[r] % E.s for r in qm.transversal}
    cocycle = TwistedCocycle(qm.group, E, action, vals)
    cocycle.validate()
    return YFunction(triple, X, images, qm, cocycle, change)


def cocycle_class(triple: CharTriple, yf: YFunction = None) -> CocycleClass:
    """The cohomology class of the triple on its quotient group."""
    if yf is None:
        yf = build_y(triple)
    return CocycleClass(representative=yf.cocycle)


def projective_from_y(yf: YFunction, group: PermGroup = None) -> ProjectiveExtension:
    """Contract the coupling function on the stabilizer, where its images
    centralize the embedded scalars and so lie in the embedded algebra."""
    tr = yf.triple
    S = group if group is not None else tr.stabilizer
    if not (tr.N.is_subset(S) and S.is_subset(tr.stabilizer)):
        raise InputError("domain must sit between N and the stabilizer")
    images = {}
    for h in S.elements:
        C = yf.contract(yf.images[h])
        if C is None:
            raise InternalCheckError("stabilizer image escapes the embedded algebra")
        images[h] = C
    P = _finish_extension(tr, S, yf.x, images)
    for r1 in P.qm.transversal:
        for r2 in P.qm.transversal:
            if P.factor(r1, r2) != yf.factor(r1, r2):
                raise InternalCheckError("extension factor set deviates from the cocycle")
    return P


def mu_from_cocycle(yf: YFunction, a) -> dict:
    """Closed form of the mu-function of the extension carried by yf,
    evaluated from three cocycle values per element."""
    t, g = a
    tr = yf.triple
    if act_char(tr.theta, t, g) != tr.theta:
        raise InputError("pair does not stabilize the character")
    E = tr.E
    tE = t % E.s
    gi = g.inverse()
    base = yf.factor(g, gi)
    out = {}
    for h in tr.stabilizer.elements:
        v = E.mul(E.inv(yf.factor(g, h * gi)), E.inv(yf.factor(h, gi)))
        v = E.mul(v, base)
        out[h] = int(E.frobenius(v, tE))
    return out


@dataclass
class OrderReport:
    """Per-clause outcome of the order relation between two triples."""

    product_ok: bool
    stabilizers_ok: bool
    factors_ok: bool
    mu_ok: bool
    witnesses: dict = dc_field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return self.product_ok and self.stabilizers_ok and self.factors_ok and self.mu_ok


def _product_clause(t1: CharTriple, t2: CharTriple):
    G, N, H, C = t1.G, t1.N, t2.G, t2.N
    if not H.is_subset(G):
        return False, "smaller group is not a subgroup"
    nset = set(N.elements)
    inter = {h for h in H.elements if h in nset}
    if inter != set(C.elements):
        return False, "intersection with N is not the smaller normal subgroup"
    if N.order * H.order != G.order * len(inter):
        return False, "product of the subgroups does not fill the group"
    return True, None


def _pair_clause(t1: CharTriple, t2: CharTriple):
    """Compare the two pair stabilizers; also returns the common pair list."""
    if t1.L.q != t2.L.q:
        raise InputError("triples use different ambient fields")
    pairs = []
    for t in range(t1.L.s):
        for h in t2.G.elements:
            a = act_char(t1.theta, t, h) == t1.theta
            b = act_char(t2.theta, t, h) == t2.theta
            if a != b:
                return False, (t, h), pairs
            if a:
                pairs.append((t, h))
    return True, None, pairs


def order_check(
    t1: CharTriple, t2: CharTriple, P: ProjectiveExtension, Pp: ProjectiveExtension
) -> OrderReport:
    """Test the four order-relation clauses for (t1, t2) through (P, Pp).

    Failures are reported with witnesses, never raised.
    """
    witnesses = {}
    product_ok, why = _product_clause(t1, t2)
    if not product_ok:
        witnesses["product"] = why
    stab_ok, wit, pairs = _pair_clause(t1, t2)
    if not stab_ok:
        witnesses["stabilizers"] = wit
    h_theta = [h for h in t2.G.elements if h in t1.stabilizer]
    if set(h_theta) != set(t2.stabilizer.elements):
        stab_ok = False
        witnesses.setdefault("stabilizers", "theta and phi stabilizers differ")
    factors_ok = True
    if stab_ok:
        for x in h_theta:
            for y in h_theta:
                if P.factor(x, y) != Pp.factor(x, y):
                    factors_ok = False
                    witnesses["factors"] = (x, y)
                    break
            if not factors_ok:
                break
    else:
        factors_ok = False
        witnesses.setdefault("factors", "skipped: stabilizers differ")
    mu_ok = stab_ok
    if stab_ok:
        for a in pairs:
            m1 = mu_of(P, a)
            m2 = mu_of(Pp, a)
            bad = next((x for x in h_theta if m1.at(x) != m2.at(x)), None)
            if bad is not None:
                mu_ok = False
                witnesses["mu"] = (a, bad)
                break
    else:
        witnesses.setdefault("mu", "skipped: stabilizers differ")
    return OrderReport(
        product_ok=product_ok,
        stabilizers_ok=stab_ok,
        factors_ok=factors_ok,
        mu_ok=mu_ok,
        witnesses=witnesses,
    )


def _quotient_iso(src: QuotientMap, dst: QuotientMap) -> dict:
    """Isomorphism H/C -> G/N through inclusion, as a coset-element map."""
    iso = {}
    for q in src.group.elements:
        iso[q] = dst.image(src.section(q))
    if len(set(iso.values())) != dst.group.order:
        raise InternalCheckError("coset map is not a bijection")
    for a in src.group.elements:
        for b in src.group.elements:
            if iso[a * b] != iso[a] * iso[b]:
                raise InternalCheckError("coset map is not a homomorphism")
    return iso


def _transport(cocycle: TwistedCocycle, iso: dict, target: PermGroup) -> TwistedCocycle:
    vals = {(iso[x], iso[y]): v for (x, y), v in cocycle.values.items()}
    act = {iso[x]: a for x, a in cocycle.action.items()}
    return TwistedCocycle(target, cocycle.field, act, vals)


@dataclass
class OrderWitness:
    """Outcome of the class-matching pipeline between two triples."""

    ok: bool
    reason: str
    P: ProjectiveExtension
    P_prime: ProjectiveExtension
    y: YFunction
    y_prime: YFunction
    gamma: dict
    report: OrderReport


def order_witness(t1: CharTriple, t2: CharTriple) -> OrderWitness:
    """Try to produce projective representations witnessing t1 >= t2.

    Builds both coupling functions, compares their quotient cocycles up to
    twisted coboundary, rescales the smaller one so the factor sets agree on
    the nose, and verifies every order clause plus the closed form of each
    mu-function.  A class mismatch is reported, not raised; it does not
    refute the order relation itself.
    """
    okp, why = _product_clause(t1, t2)
    if not okp:
        raise InputError("group decomposition fails: %s" % why)
    ok2, wit, pairs = _pair_clause(t1, t2)
    if not ok2:
        raise InputError("pair stabilizers differ at %r" % (wit,))
    if t1.E.q != t2.E.q:
        raise InternalCheckError("value fields differ despite equal pair stabilizers")
    for h in t2.G.elements:
        if t1.sigma[h] % t1.E.s != t2.sigma[h] % t2.E.s:
            raise InternalCheckError("Galois actions disagree on the smaller group")
    y1 = build_y(t1)
    y2 = build_y(t2)
    iso = _quotient_iso(t2.qm, t1.qm)
    beta = _transport(y2.cocycle, iso, t1.qm.group)
    gamma_bar = cohomologous(beta, y1.cocycle)
    if gamma_bar is None:
        return OrderWitness(
            ok=False,
            reason="cohomology classes differ",
            P=None,
            P_prime=None,
            y=y1,
            y_prime=y2,
            gamma=None,
            report=None,
        )
    gamma = {q: gamma_bar[iso[q]] for q in t2.qm.group.elements}
    m2 = y2.x.dim
    images = {}
    for h in t2.G.elements:
        c = gamma[t2.qm.image(h)]
        images[h] = y2.images[h] @ y2.iota(FqMatrix.identity(t2.E, m2).scale(c))
    y2 = _assemble_y(t2, y2.x, images, y2.embed_change)
    for a in t2.qm.group.elements:
        for b in t2.qm.group.elements:
            if y2.cocycle.values[(a, b)] != y1.cocycle.values[(iso[a], iso[b])]:
                raise InternalCheckError("corrected factor set misses the target")
    P = projective_from_y(y1)
    Pp = projective_from_y(y2)
    report = order_check(t1, t2, P, Pp)
    if not report.ok:
        raise InternalCheckError(
            "order clauses fail after class matching: %r" % (report.witnesses,)
        )
    for a in pairs:
        closed = mu_from_cocycle(y1, a)
        direct = mu_of(P, a)
        for r in P.qm.transversal:
            if closed[r] != direct.at(r):
                raise InternalCheckError("mu closed form disagrees on the big triple")
        closed = mu_from_cocycle(y2, a)
        direct = mu_of(Pp, a)
        for r in Pp.qm.transversal:
            if closed[r] != direct.at(r):
                raise InternalCheckError("mu closed form disagrees on the small triple")
    return OrderWitness(
        ok=True,
        reason="",
        P=P,
        P_prime=Pp,
        y=y1,
        y_prime=y2,
        gamma=gamma,
        report=report,
    )
