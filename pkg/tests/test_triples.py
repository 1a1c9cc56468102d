"""Character triples: Galois descent data, coupling functions, cocycle
classes, and the order relation.

The quaternion-over-center triple at p = 7 is the workhorse for nontrivial
factor sets: the extension class of Q8 over its center stays nonzero after
pushing into GF(7)*, which the cohomology solver must detect.
"""

from __future__ import annotations

import random

import pytest

from dgnwb.brauer import act_char, dgn_correspondent, ibr
from dgnwb.errors import InputError, InternalCheckError
from dgnwb.fields import field_create
from dgnwb.fixtures import (
    cyclic,
    dihedral30,
    gl23,
    glauberman_group,
    quaternion8,
    symmetric3,
)
from dgnwb.groups import (
    Subgroup,
    center,
    centralizer,
    direct_product,
    normalizer,
    quotient_group,
)
from dgnwb.matrices import FqMatrix
from dgnwb.reps import MatrixRep
from dgnwb.triples import (
    CocycleClass,
    TwistedCocycle,
    apply_coboundary,
    assoc_projective,
    build_y,
    cocycle_class,
    cohomologous,
    make_triple,
    mu_from_cocycle,
    mu_of,
    order_check,
    order_witness,
    projective_from_y,
    realize_over,
    trivial_cocycle,
    _finish_extension,
)


def _gl23_triple():
    G, N, M = gl23()
    L = field_create(3, 2)
    theta = [c for c in ibr(N, 3, L) if c.degree == 2][0]
    return G, N, M, theta, make_triple(G, N, theta)


def _dihedral30_triple():
    """Character trivial on the 3-part, faithful on the 5-part; the flip
    inverts it, which is the square of Frobenius on GF(16)."""
    G, N, M = dihedral30()
    L = field_create(2, 4)
    c3 = next(g for g in N.elements if g.order() == 3)
    theta = [
        c
        for c in ibr(N, 2, L)
        if c.value_at(c3) == (0,) and len({c.value_at(n) for n in N.elements}) == 5
    ][0]
    return G, N, theta, make_triple(G, N, theta)


def _quaternion_center_triple():
    Q = quaternion8()
    Z = center(Q)
    L = field_create(7, 1)
    z = next(g for g in Z.elements if not g.is_identity())
    lam = next(c for c in ibr(Z, 7, L) if c.value_at(z) != (0,))
    return Q, Z, lam, make_triple(Q, Z, lam)


def _rand_invertible(F, n, rng):
    while True:
        M = FqMatrix(F, [[rng.randrange(F.q) for _ in range(n)] for _ in range(n)])
        try:
            M.inverse()
        except InputError:
            continue
        return M


def test_make_triple_invariant_character():
    G, N, M, theta, t = _gl23_triple()
    assert t.E.q == 3
    assert t.stabilizer.order == G.order
    assert all(v == 0 for v in t.sigma.values())
    assert t.pair_stabilizes(0, next(iter(G.elements)))
    assert t.pair_stabilizes(1, G.identity)


def test_make_triple_semilinear_s3():
    G = symmetric3()
    N = Subgroup(G, generators=[next(g for g in G.elements if g.order() == 3)])
    L = field_create(2, 2)
    theta = [c for c in ibr(N, 2, L) if len(set(c.values)) == 3][0]
    t = make_triple(G, N, theta)
    assert t.E.q == 4
    assert t.stabilizer.order == 3
    flip = next(g for g in G.elements if g not in N)
    assert t.sigma[flip] == 1
    # pair stabilizer formula against the raw action, over every pair
    for k in range(L.s):
        for g in G.elements:
            assert t.pair_stabilizes(k, g) == (act_char(theta, k, g) == theta)


def test_make_triple_rejects_orbit_escape():
    G, N, M = dihedral30()
    L = field_create(2, 4)
    faithful = [
        c for c in ibr(N, 2, L) if len({c.value_at(n) for n in N.elements}) == 15
    ][0]
    with pytest.raises(InputError):
        make_triple(G, N, faithful)


def test_make_triple_semilinear_dihedral30():
    G, N, theta, t = _dihedral30_triple()
    assert t.E.q == 16
    assert t.stabilizer.order == N.order
    flip = next(g for g in G.elements if g not in N)
    assert t.sigma[flip] == 2
    assert t.pair_stabilizes(2, flip)
    assert not t.pair_stabilizes(0, flip)


def test_sigma_is_additive():
    G, N, theta, t = _dihedral30_triple()
    for g in G.elements:
        for h in G.elements:
            assert t.sigma[g * h] == (t.sigma[g] + t.sigma[h]) % t.E.s


def test_realize_over_value_field():
    G, N, M, theta, t = _gl23_triple()
    X = realize_over(t)
    assert X.field.q == 3
    assert X.dim == 2
    # X carries theta even though theta's ambient field is GF(9)
    from dgnwb.brauer import brauer_char_of

    assert brauer_char_of(X, t.L, 3) == theta


def test_assoc_projective_extends_realization():
    G, N, M, theta, t = _gl23_triple()
    P = assoc_projective(t)
    X = P.x
    assert P.group.order == G.order
    for n in N.elements:
        assert P.of(n) == X.of(n)
    g = next(g for g in G.elements if g not in N)
    n = next(n for n in N.elements if not n.is_identity())
    assert P.of(n * g) == X.of(n) @ P.of(g)
    # factor set lands in the scalars and is recorded on the quotient
    c = P.factor(g, g)
    assert c != 0


def test_assoc_projective_transversal_invariance():
    G, N, M, theta, t = _gl23_triple()
    rng = random.Random(5)
    P1 = assoc_projective(t)
    reps = [rng.choice(list(co)) for co in t.qm.cosets]
    P2 = assoc_projective(t, transversal=reps)
    assert cohomologous(P1.cocycle, P2.cocycle) is not None


def test_build_y_invariant_case():
    G, N, M, theta, t = _gl23_triple()
    y = build_y(t)
    X = y.x
    for n in N.elements:
        assert y.of(n) == y.iota(X.of(n))
    g = next(g for g in G.elements if g not in N)
    n = next(n for n in N.elements if not n.is_identity())
    assert y.of(n * g) == y.of(n) @ y.of(g)
    assert y.of(g * n) == y.of(g) @ y.of(n)
    # class of the natural-module triple is trivial on S3
    triv = trivial_cocycle(y.qm.group, t.E, y.cocycle.action)
    assert cohomologous(y.cocycle, triv) is not None
    assert cocycle_class(t, y).matches(CocycleClass(triv)) is not None


def test_build_y_semilinear_scalar_clause():
    G, N, theta, t = _dihedral30_triple()
    y = build_y(t)
    E = t.E
    flip = next(g for g in G.elements if g not in N)
    z = int(E.from_dlog(1))
    zmat = y.iota(FqMatrix.identity(E, 1).scale(z))
    moved = y.iota(FqMatrix.identity(E, 1).scale(int(E.frobenius(z, 2))))
    Y = y.of(flip)
    assert Y.inverse() @ zmat @ Y == moved
    assert y.cocycle.action[y.qm.image(flip)] == 2


def test_cocycle_identity_independent_check():
    """Re-verify the twisted identity from raw values, not through validate."""
    Q, Z, lam, t = _quaternion_center_triple()
    y = build_y(t)
    c = y.cocycle
    E = c.field
    assert sorted(set(c.values.values())) == [1, 6]
    for x in c.group.elements:
        for yy in c.group.elements:
            for zz in c.group.elements:
                lhs = E.mul(
                    c.values[(x * yy, zz)],
                    E.frobenius(c.values[(x, yy)], c.action[zz]),
                )
                rhs = E.mul(c.values[(x, yy * zz)], c.values[(yy, zz)])
                assert int(lhs) == int(rhs)


def test_class_invariance_under_choices():
    rng = random.Random(11)
    G, N, theta, t = _dihedral30_triple()
    X = realize_over(t)
    C = _rand_invertible(t.E, X.dim, rng)
    Ci = C.inverse()
    X2 = MatrixRep(t.N, t.E, {g: Ci @ X.of(g) @ C for g in t.N.elements})
    W = _rand_invertible(field_create(2, 1), X.dim * t.E.s, rng)
    reps = [rng.choice(list(co)) for co in t.qm.cosets]
    ys = [
        build_y(t),
        build_y(t, x_rep=X2),
        build_y(t, embed_change=W),
        build_y(t, transversal=reps),
    ]
    for a in ys:
        for b in ys:
            assert cohomologous(a.cocycle, b.cocycle) is not None
    # the quaternion class must also survive every re-choice, nontrivially
    Q, Z, lam, tq = _quaternion_center_triple()
    Xq = realize_over(tq)
    Cq = _rand_invertible(tq.E, 1, rng)
    X2q = MatrixRep(tq.N, tq.E, {g: Xq.of(g) for g in tq.N.elements})
    repsq = [rng.choice(list(co)) for co in tq.qm.cosets]
    yq = [build_y(tq), build_y(tq, x_rep=X2q), build_y(tq, transversal=repsq)]
    triv = trivial_cocycle(yq[0].qm.group, tq.E, yq[0].cocycle.action)
    for a in yq:
        assert cohomologous(a.cocycle, triv) is None
        for b in yq:
            assert cohomologous(a.cocycle, b.cocycle) is not None


def test_planted_coboundary_recovery():
    rng = random.Random(3)
    cases = []
    Q, Z, lam, tq = _quaternion_center_triple()
    cases.append(build_y(tq).cocycle)
    G, N, theta, t = _dihedral30_triple()
    cases.append(build_y(t).cocycle)
    G3, N3, M3, th3, t3 = _gl23_triple()
    cases.append(build_y(t3).cocycle)
    for base in cases:
        E = base.field
        for _ in range(100):
            gamma = {
                g: 1 if g.is_identity() else rng.randrange(1, E.q)
                for g in base.group.elements
            }
            planted = apply_coboundary(base, gamma)
            found = cohomologous(base, planted)
            assert found is not None
            rebuilt = apply_coboundary(base, found)
            assert rebuilt.values == planted.values


def test_two_torsion_obstruction():
    """Over GF(9) the square classes of C2 are exactly the two cohomology
    classes; brute force over all eight candidate maps agrees."""
    C2 = cyclic(2)
    E = field_create(3, 2)
    x = next(g for g in C2.elements if not g.is_identity())
    triv = trivial_cocycle(C2, E)

    def diag(c):
        vals = {(a, b): 1 for a in C2.elements for b in C2.elements}
        vals[(x, x)] = c
        return TwistedCocycle(C2, E, {g: 0 for g in C2.elements}, vals)

    square = diag(int(E.pow_int(int(E.from_dlog(1)), 2)))
    nonsquare = diag(int(E.from_dlog(1)))
    square.validate()
    nonsquare.validate()
    assert cohomologous(triv, square) is not None
    assert cohomologous(triv, nonsquare) is None
    hits = []
    for code in range(1, 9):
        gamma = {C2.identity: 1, x: code}
        cand = apply_coboundary(triv, gamma)
        hits.append(cand.values == nonsquare.values)
    assert not any(hits)


def test_mu_matches_closed_form():
    Q, Z, lam, t = _quaternion_center_triple()
    y = build_y(t)
    P = projective_from_y(y)
    nontrivial = 0
    for g in Q.elements:
        direct = mu_of(P, (0, g))
        closed = mu_from_cocycle(y, (0, g))
        for h in Q.elements:
            assert closed[h] == direct.at(h)
        if any(direct.at(h) != 1 for h in Q.elements):
            nontrivial += 1
    assert nontrivial == 6


def test_mu_semilinear_pair():
    G, N, theta, t = _dihedral30_triple()
    y = build_y(t)
    P = projective_from_y(y)
    flip = next(g for g in G.elements if g not in N)
    m = mu_of(P, (2, flip))
    assert m.at(N.identity) == 1
    assert all(m.at(n) == 1 for n in N.elements)
    closed = mu_from_cocycle(y, (2, flip))
    assert all(closed[n] == m.at(n) for n in N.elements)
    with pytest.raises(InputError):
        mu_of(P, (0, flip))


def test_order_witness_gl23():
    G, N, M, theta, t1 = _gl23_triple()
    d = next(g for g in M.elements if g.order() == 3)
    D = Subgroup(G, generators=[d])
    H = normalizer(G, D)
    C = centralizer(N, D)
    assert (H.order, C.order) == (12, 2)
    phi = dgn_correspondent(M, N, D, theta)
    t2 = make_triple(H, C, phi)
    w = order_witness(t1, t2)
    assert w.ok
    assert w.report.ok
    assert w.P.degree == 2 and w.P_prime.degree == 1
    # factor sets agree on the nose over the smaller stabilizer
    for x in t2.stabilizer.elements:
        for yy in t2.stabilizer.elements:
            assert w.P.factor(x, yy) == w.P_prime.factor(x, yy)
    # reflexive case
    assert order_witness(t1, t1).ok


def test_order_witness_glauberman():
    G, N, M = glauberman_group()
    L = field_create(2, 4)
    inv = next(g for g in G.elements if g not in N)
    stable = [c for c in ibr(N, 2, L) if act_char(c, 0, inv) == c]
    theta = [
        c for c in stable if len({c.value_at(n) for n in N.elements}) == 5
    ][0]
    d = next(g for g in G.elements if g.order() == 2)
    D = Subgroup(G, generators=[d])
    H = normalizer(G, D)
    C = centralizer(N, D)
    phi = dgn_correspondent(M, N, D, theta)
    t1 = make_triple(G, N, theta)
    t2 = make_triple(H, C, phi)
    w = order_witness(t1, t2)
    assert w.ok
    triv = trivial_cocycle(w.y.qm.group, t1.E, w.y.cocycle.action)
    assert cohomologous(w.y.cocycle, triv) is not None


def test_order_witness_class_mismatch():
    """Central product trick: theta sees only the split direction, phi sees
    the quaternion direction, so the classes land on opposite sides."""
    Q = quaternion8()
    G = direct_product(Q, cyclic(2))
    qdeg = Q.degree
    Qsub = Subgroup(
        G,
        elements=[
            g
            for g in G.elements
            if all(g.images[i] == i for i in range(qdeg, G.degree))
        ],
    )
    Z = center(Qsub)
    w = next(
        g
        for g in G.elements
        if g.order() == 2
        and g not in Qsub
        and all(g.images[i] == i for i in range(qdeg))
    )
    N = Subgroup(
        G,
        elements=[z * (w if k else G.identity) for z in Z.elements for k in (0, 1)],
    )
    L = field_create(7, 1)
    theta = next(
        c
        for c in ibr(N, 7, L)
        if c.value_at(w) != (0,)
        and all(c.value_at(z) == (0,) for z in Z.elements)
    )
    z = next(g for g in Z.elements if not g.is_identity())
    lam = next(c for c in ibr(Z, 7, L) if c.value_at(z) != (0,))
    t1 = make_triple(G, N, theta)
    t2 = make_triple(Qsub, Z, lam)
    res = order_witness(t1, t2)
    assert not res.ok
    assert res.reason == "cohomology classes differ"
    assert res.P is None and res.gamma is None


def test_order_check_detects_mutation():
    """Rescaling one non-identity coset of the smaller extension must break
    either the factor clause or the mu clause."""
    G, N, M, theta, t1 = _gl23_triple()
    d = next(g for g in M.elements if g.order() == 3)
    D = Subgroup(G, generators=[d])
    H = normalizer(G, D)
    C = centralizer(N, D)
    phi = dgn_correspondent(M, N, D, theta)
    t2 = make_triple(H, C, phi)
    w = order_witness(t1, t2)
    Pp = w.P_prime
    bad = next(r for r in Pp.qm.transversal if not r.is_identity())
    E = t2.E
    images = {}
    for h in Pp.group.elements:
        scale = 2 if Pp.qm.coset_index(h) == Pp.qm.coset_index(bad) else 1
        images[h] = Pp.of(h).scale(scale)
    mutated = _finish_extension(t2, Pp.group, Pp.x, images)
    report = order_check(t1, t2, w.P, mutated)
    assert not report.ok
    assert not (report.factors_ok and report.mu_ok)
    assert report.product_ok and report.stabilizers_ok
    assert report.witnesses


def test_projective_from_y_matches_cocycle():
    G, N, theta, t = _dihedral30_triple()
    y = build_y(t)
    P = projective_from_y(y)
    assert P.group.order == t.stabilizer.order
    for g in P.group.elements:
        assert y.iota(P.of(g)) == y.of(g)
    # extension on a strictly smaller admissible domain
    sub = Subgroup(G, elements=N.elements)
    P2 = projective_from_y(y, group=sub)
    assert P2.group.order == N.order
