"""Bijection layer: twisted simples, the pairing on one subgroup, the family
over all intermediate subgroups, and the two verification harnesses.

Contexts are cached at module level because resolving one runs the full
defect-correspondent-witness pipeline.
"""

from __future__ import annotations

import dataclasses

import pytest

from dgnwb.bijection import (
    BijectionContext,
    DeltaFamily,
    PrimeBijection,
    VerificationReport,
    _lift_char,
    chars_over,
    delta_family,
    frobenius_orbit,
    make_context,
    prime_bijection,
    transport_char,
    twisted_simples,
    verify_corollary_b,
    verify_theorem_a,
    vertex_relation_check,
)
from dgnwb.brauer import act_char, brauer_char_of, decompose_char, ibr, restrict_char
from dgnwb.errors import InputError, InternalCheckError
from dgnwb.fields import field_create
from dgnwb.fixtures import (
    c5_inversion,
    cyclic,
    gl23_instance,
    glauberman_instance,
    quaternion8,
    trivial_defect_instance,
)
from dgnwb.groups import GroupMap, Perm, PermGroup, Subgroup, direct_product
from dgnwb.reps import extend_field
from dgnwb.triples import (
    TwistedCocycle,
    apply_coboundary,
    assoc_projective,
    make_triple,
    trivial_cocycle,
)

_CACHE = {}


def _ctx(name: str) -> BijectionContext:
    if name not in _CACHE:
        builder = {
            "gl23": gl23_instance,
            "glauberman": glauberman_instance,
            "trivial": trivial_defect_instance,
        }[name]
        G, N, M, theta = builder()
        _CACHE[name] = make_context(G, N, M, theta)
    return _CACHE[name]


def _family(name: str) -> DeltaFamily:
    key = "fam:" + name
    if key not in _CACHE:
        _CACHE[key] = delta_family(_ctx(name))
    return _CACHE[key]


# -- transport and lifting ----------------------------------------------------


def test_frobenius_orbit_sizes():
    assert len(frobenius_orbit(_ctx("gl23").theta)) == 1
    assert len(frobenius_orbit(_ctx("glauberman").theta)) == 4
    assert len(frobenius_orbit(_ctx("trivial").theta)) == 2


def test_transport_char_matches_act_char():
    ctx = _ctx("gl23")
    for h in ctx.G.generators:
        moved = transport_char(ctx.theta, 0, h, ctx.N)
        assert moved == act_char(ctx.theta, 0, h)


def test_transport_char_rejects_wrong_target():
    ctx = _ctx("gl23")
    with pytest.raises(InputError):
        transport_char(ctx.theta, 0, ctx.G.identity, ctx.M)


def test_lift_char_agrees_with_field_extension():
    ctx = _ctx("trivial")
    L2 = field_create(2, 4)
    for c in ibr(ctx.N, 2, ctx.L):
        lifted = _lift_char(c, L2)
        oracle = brauer_char_of(extend_field(c.rep, L2), L2, 2)
        assert lifted.values == oracle.values
    assert _lift_char(ctx.theta, ctx.L) is ctx.theta


# -- twisted simples ----------------------------------------------------------


def test_twisted_simples_trivial_cocycle_modular():
    # S3 quotient in characteristic 3: only the two linear modules survive
    ctx = _ctx("gl23")
    P = ctx.witness.P
    c = trivial_cocycle(P.qm.group, field_create(3, 1))
    sims = twisted_simples(c, ctx.L)
    assert sorted(s.dim for s in sims) == [1, 1]


def test_twisted_simples_nontrivial_class():
    # quaternion extension class over GF(7): one simple of dimension 2
    Q = quaternion8()
    L = field_create(7, 1)
    z = [x for x in Q.elements if x.order() == 2][0]
    Z = Subgroup(Q, elements=[Q.identity, z])
    lam = [c for c in ibr(Z, 7, L) if c.value_at(z) != c.value_at(Q.identity)][0]
    P = assoc_projective(make_triple(Q, Z, lam))
    sims = twisted_simples(P.cocycle.inverse(), L)
    assert [s.dim for s in sims] == [2]
    assert sims[0].field.q == 7


def test_twisted_simples_reject_semilinear_action():
    ctx = _ctx("trivial")
    qm = ctx.witness.P.qm
    action = {x: 1 for x in qm.group.elements}
    c = TwistedCocycle(
        qm.group,
        field_create(2, 2),
        action,
        {(x, y): 0 for x in qm.group.elements for y in qm.group.elements},
    )
    with pytest.raises(InputError):
        twisted_simples(c, ctx.L)


# -- the pairing on one subgroup ----------------------------------------------


def test_prime_bijection_bottom_layer_is_dgn():
    ctx = _ctx("gl23")
    b = prime_bijection(ctx.witness.P, ctx.witness.P_prime, ctx.N)
    assert b.forward == {ctx.theta: ctx.phi}


def test_prime_bijection_top_layer_counts():
    ctx = _ctx("gl23")
    b = prime_bijection(ctx.witness.P, ctx.witness.P_prime, ctx.G)
    dom = chars_over(ctx.G, ctx.N, ctx.p, ctx.L, [ctx.theta])
    cod = chars_over(ctx.H, ctx.C, ctx.p, ctx.L, [ctx.phi])
    assert sorted(c.degree for c in dom) == [2, 2]
    assert set(b.forward) == set(dom)
    assert set(b.forward.values()) == set(cod)
    for chi, psi in b.pairs():
        assert decompose_char(restrict_char(chi, ctx.N), [ctx.theta])
        assert decompose_char(restrict_char(psi, ctx.C), [ctx.phi])


def test_prime_bijection_rejects_disagreeing_factor_sets():
    ctx = _ctx("gl23")
    Pp = ctx.witness.P_prime
    q = Pp.qm.group
    gamma = {x: 1 if x.is_identity() else 2 for x in q.elements}
    shifted = dataclasses.replace(Pp, cocycle=apply_coboundary(Pp.cocycle, gamma))
    with pytest.raises(InputError):
        prime_bijection(ctx.witness.P, shifted, ctx.G)


def test_prime_bijection_rejects_domain_outside_range():
    ctx = _ctx("gl23")
    low = Subgroup(ctx.G, elements=[ctx.G.identity])
    with pytest.raises(InputError):
        prime_bijection(ctx.witness.P, ctx.witness.P_prime, low)


def test_vertex_relation_check_passes_on_top_layer():
    ctx = _ctx("gl23")
    b = prime_bijection(ctx.witness.P, ctx.witness.P_prime, ctx.G)
    rep = vertex_relation_check(b)
    assert rep.ok and rep.conditions == {"Vertex Relation": True}


# -- context resolution -------------------------------------------------------


def test_make_context_gl23_frozen_values():
    ctx = _ctx("gl23")
    assert (ctx.D.order, ctx.C.order, ctx.H.order) == (3, 2, 12)
    assert ctx.phi.fingerprint() == "9985d73c6af74bff"
    assert ctx.E.q == 3 and ctx.L.q == 9
    assert ctx.t1.stabilizer.order == ctx.G.order


def test_make_context_glauberman_frozen_values():
    ctx = _ctx("glauberman")
    assert (ctx.D.order, ctx.C.order, ctx.H.order) == (2, 5, 10)
    assert ctx.phi.degree == 1
    assert all(x.order() in (1, 5) for x in ctx.C.elements)


def test_make_context_trivial_defect_degenerates():
    ctx = _ctx("trivial")
    assert ctx.D.order == 1
    assert ctx.C.key() == ctx.N.key()
    assert ctx.H.order == ctx.G.order
    assert ctx.phi == ctx.theta
    assert ctx.t1.stabilizer.order == ctx.N.order


def test_make_context_rejects_fong_violation():
    G, N, M, theta = gl23_instance()
    minus1 = [x for x in N.elements if x.order() == 2][0]
    bad = Subgroup(G, elements=[G.identity, minus1])
    with pytest.raises(InputError, match="ND=M and N∩D=1"):
        make_context(G, N, M, theta, D=bad)


def test_make_context_rejects_unstable_theta():
    G, N, M, _ = glauberman_instance()
    L = field_create(2, 4)
    one = N.identity
    loose = [
        c
        for c in ibr(N, 2, L)
        if any(c.value_at(x) != c.value_at(one) for x in N.elements if x.order() == 3)
    ][0]
    with pytest.raises(InputError, match="stable"):
        make_context(G, N, M, loose)


def test_make_context_rejects_bad_layering():
    G, N, M, theta = gl23_instance()
    with pytest.raises(InputError):
        make_context(G, M, N, theta)


# -- the family ---------------------------------------------------------------


def test_delta_family_gl23_shape():
    fam = _family("gl23")
    assert sorted(s.order for s in fam.subgroups) == [8, 16, 16, 16, 24, 48]
    assert sorted(r.order for r in fam.class_reps) == [8, 16, 24, 48]
    sizes = {s.order: len(fam.maps[s.key()]) for s in fam.subgroups}
    assert sizes == {8: 1, 16: 2, 24: 1, 48: 2}


def test_delta_family_bottom_is_dgn():
    for name in ("gl23", "glauberman", "trivial"):
        fam = _family(name)
        ctx = fam.context
        assert fam.maps[ctx.N.key()][ctx.theta] == ctx.phi


def test_delta_family_orbit_layers():
    fam = _family("glauberman")
    ctx = fam.context
    assert len(fam.maps[ctx.N.key()]) == 4
    assert len(fam.maps[ctx.G.key()]) == 4


def test_delta_family_variant_invariance():
    ctx = _ctx("gl23")
    base = _family("gl23")
    for v in (1, 2):
        other = delta_family(ctx, variant=v)
        assert set(other.maps) == set(base.maps)
        for k in base.maps:
            assert other.maps[k] == base.maps[k]


def test_delta_family_restricted_build():
    ctx = _ctx("gl23")
    fam = delta_family(ctx, subgroups=[ctx.M])
    assert [s.order for s in fam.subgroups] == [24]
    assert fam.maps[ctx.M.key()] == _family("gl23").maps[ctx.M.key()]


def test_delta_family_rejects_stray_subgroup():
    ctx = _ctx("gl23")
    stray = Subgroup(ctx.G, elements=[ctx.G.identity])
    with pytest.raises(InputError):
        delta_family(ctx, subgroups=[stray])


def test_apply_linear_refuses_off_orbit_characters():
    fam = _family("gl23")
    ctx = fam.context
    lin = [c for c in ibr(ctx.G, ctx.p, ctx.L) if c.degree == 1][0]
    with pytest.raises(InputError):
        fam.apply_linear(ctx.G, lin)


# -- the verification harnesses -----------------------------------------------


def test_verify_theorem_a_exhaustive_gl23():
    rep = verify_theorem_a(_ctx("gl23"))
    assert rep.ok, rep.failed()


def test_verify_theorem_a_exhaustive_glauberman():
    rep = verify_theorem_a(_ctx("glauberman"))
    assert rep.ok, rep.failed()


def test_verify_theorem_a_exhaustive_trivial():
    rep = verify_theorem_a(_ctx("trivial"))
    assert rep.ok, rep.failed()
    assert set(rep.conditions) == {
        "Frobenius Equivariance",
        "Conjugation Compatibility",
        "Restriction Compatibility",
        "DGN Consistency",
        "Vertex Relation",
    }


def test_verify_theorem_a_quick_level():
    rep = verify_theorem_a(_ctx("trivial"), level="quick")
    assert rep.ok
    with pytest.raises(InputError):
        verify_theorem_a(_ctx("trivial"), level="full")


def test_verify_corollary_b_inner_automorphisms():
    ctx = _ctx("gl23")
    taus = [
        GroupMap.from_callable(ctx.G, ctx.G, lambda x, h=h: h * x * h.inverse())
        for h in ctx.H.generators
    ]
    rep = verify_corollary_b(ctx, taus)
    assert rep.ok, rep.failed()
    assert rep.witnesses["Automorphism Filter"] == {"kept": len(taus), "dropped": 0}


def test_verify_corollary_b_c5_inversion():
    ctx = _ctx("glauberman")
    rep = verify_corollary_b(ctx, [c5_inversion(ctx.G)])
    assert rep.ok, rep.failed()
    assert rep.witnesses["Automorphism Filter"] == {"kept": 1, "dropped": 0}
    assert rep.witnesses["Equivariance"] == []


def test_verify_corollary_b_filters_defect_movers():
    ctx = _ctx("glauberman")
    a = [x for x in ctx.N.elements if x.order() == 3][0]
    tau = GroupMap.from_callable(ctx.G, ctx.G, lambda x: a * x * a.inverse())
    rep = verify_corollary_b(ctx, [tau], level="quick")
    assert rep.ok
    assert rep.witnesses["Automorphism Filter"] == {"kept": 0, "dropped": 1}


def test_verify_corollary_b_rejects_bad_maps():
    ctx = _ctx("glauberman")
    flat = GroupMap.from_callable(ctx.G, ctx.G, lambda x: ctx.G.identity)
    with pytest.raises(InputError):
        verify_corollary_b(ctx, [flat])
    other = _ctx("gl23")
    stranger = GroupMap.from_callable(other.G, other.G, lambda x: x)
    with pytest.raises(InputError):
        verify_corollary_b(ctx, [stranger])


def test_verify_corollary_b_rejects_normal_subgroup_movers():
    A = cyclic(3)
    G = direct_product(A, A)
    N = Subgroup(G, generators=[G.generators[0]])
    L = field_create(2, 2)
    nontriv = [c for c in ibr(N, 2, L) if any(v != (0,) for v in c.values)][0]
    ctx = make_context(G, N, N, nontriv)
    swap = Perm([3, 4, 5, 0, 1, 2])
    swapi = swap.inverse()
    tau = GroupMap.from_callable(G, G, lambda x: swap * x * swapi)
    with pytest.raises(InputError, match="stabilize N"):
        verify_corollary_b(ctx, [tau])
