import random

import pytest

from dgnwb.errors import InputError, ResourceLimitError
from dgnwb.fixtures import (
    cyclic,
    dihedral,
    dihedral30,
    gl23,
    glauberman_group,
    groups_catalog,
    quaternion8,
    symmetric3,
)
from dgnwb.groups import (
    GroupMap,
    Perm,
    PermGroup,
    Subgroup,
    all_subgroups,
    center,
    centralizer,
    complements_to_normal,
    conjugacy_data,
    direct_product,
    group_from_json,
    group_to_json,
    holomorph_extension,
    maximal_subgroups,
    normalizer,
    overgroups,
    p_subgroups,
    p_subgroups_up_to_conjugacy,
    quotient_group,
    sylow_subgroup,
)


def test_perm_composition_is_left_to_right():
    p = Perm.from_cycles(3, [(0, 1)])
    q = Perm.from_cycles(3, [(1, 2)])
    assert (p * q).images == (2, 0, 1)
    assert (q * p).images == (1, 2, 0)


def test_perm_conj_is_right_action():
    x = Perm.from_cycles(3, [(0, 1, 2)])
    g = Perm.from_cycles(3, [(0, 1)])
    h = Perm.from_cycles(3, [(1, 2)])
    assert x.conj(g) == Perm.from_cycles(3, [(0, 2, 1)])
    assert x.conj(g * h) == x.conj(g).conj(h)


def test_perm_basics():
    x = Perm.from_cycles(6, [(0, 1, 2), (3, 4)])
    assert x.order() == 6
    assert (x * x.inverse()).is_identity()
    assert x**7 == x
    assert x**-1 == x.inverse()
    assert repr(Perm.identity(4)) == "()"


def test_fixture_orders():
    expected = {
        "C2": 2, "C3": 3, "C4": 4, "C6": 6, "C8": 8, "C12": 12,
        "S3": 6, "A4": 12, "D8": 8, "Q8": 8,
        "SL23": 24, "GL23": 48, "C15:C2a": 30, "C15:C2b": 30,
    }
    cat = groups_catalog()
    assert {k: g.order for k, g in cat.items()} == expected


def test_quaternion_structure():
    Q = quaternion8()
    assert Q.order == 8
    orders = sorted(x.order() for x in Q.elements)
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]
    assert center(Q).order == 2
    assert Q.exponent() == 4


def test_gl23_tower():
    G, N, M = gl23()
    assert G.order == 48 and M.order == 24 and N.order == 8
    assert N.is_subset(M) and M.is_subset(G)
    assert N.is_normal_in(G) and M.is_normal_in(G)
    assert center(G).order == 2


def test_conjugacy_class_counts():
    G, N, M = gl23()
    counts = {
        "S3": 3, "A4": 4, "D8": 5, "Q8": 5,
    }
    cat = groups_catalog()
    for name, n in counts.items():
        assert len(conjugacy_data(cat[name], 2).classes) == n, name
    assert len(conjugacy_data(M, 2).classes) == 7
    assert len(conjugacy_data(G, 2).classes) == 8


def test_p_regular_selection():
    G, N, M = gl23()
    # orders of GL(2,3) class reps: 1, 2, 2, 3, 4, 6, 8, 8
    data3 = conjugacy_data(G, 3)
    assert len(data3.p_regular) == 6
    data2 = conjugacy_data(G, 2)
    assert len(data2.p_regular) == 2
    # SL(2,3) reps have orders 1, 2, 3, 3, 4, 6, 6
    assert len(conjugacy_data(M, 3).p_regular) == 3
    assert len(conjugacy_data(M, 2).p_regular) == 3
    assert len(conjugacy_data(N, 3).p_regular) == 5


def test_class_ordering_and_power_map():
    S3 = symmetric3()
    data = conjugacy_data(S3, 2)
    assert [len(c) for c in data.classes] == [1, 3, 2]
    assert data.reps[0].is_identity()
    rng = random.Random(7)
    G, _, _ = gl23()
    gdata = conjugacy_data(G, 2)
    for _ in range(50):
        g = rng.choice(G.elements)
        k = rng.randrange(gdata.exponent)
        assert gdata.class_index[g**k] == gdata.power_map[k][gdata.class_index[g]]


def test_conjugacy_requires_prime():
    with pytest.raises(InputError):
        conjugacy_data(symmetric3(), 4)


def test_quotient_gl23_by_quaternion():
    G, N, M = gl23()
    qm = quotient_group(G, N)
    Q = qm.group
    assert Q.order == 6
    assert Q.exponent() == 6
    assert any(x * y != y * x for x in Q.elements for y in Q.elements)
    for q in Q.elements:
        assert qm.image(qm.section(q)) == q
    assert qm.transversal[0].is_identity()
    for g in G.elements:
        assert g in qm.cosets[qm.coset_index(g)]
    assert qm.preimage(Q.full_subgroup()).order == 48


def test_quotient_rejects_non_normal():
    S3 = symmetric3()
    H = Subgroup(S3, generators=[Perm.from_cycles(3, [(0, 1)])])
    with pytest.raises(InputError):
        quotient_group(S3, H)


def test_subgroup_validation():
    S3 = symmetric3()
    r = Perm.from_cycles(3, [(0, 1, 2)])
    with pytest.raises(InputError):
        Subgroup(S3, elements=[Perm.identity(3), r])
    with pytest.raises(InputError):
        Subgroup(S3, generators=[Perm.from_cycles(4, [(0, 1)])])
    C = Subgroup(S3, elements=[Perm.identity(3), r, r * r])
    assert C.order == 3 and C.is_normal_in(S3)


def test_all_subgroups_counts():
    assert [s.order for s in all_subgroups(symmetric3())] == [1, 2, 2, 2, 3, 6]
    assert [s.order for s in all_subgroups(quaternion8())] == [1, 2, 4, 4, 4, 8]
    assert [s.order for s in maximal_subgroups(quaternion8())] == [4, 4, 4]


def test_overgroups_of_quaternion_in_gl23():
    G, N, M = gl23()
    overs = overgroups(G, N)
    assert [s.order for s in overs] == [8, 16, 16, 16, 24, 48]
    assert all(N.is_subset(s) for s in overs)
    assert any(s.key_in_parent() == M.key_in_parent() for s in overs)


def test_p_subgroup_enumeration():
    S3 = symmetric3()
    assert [s.order for s in p_subgroups(S3, 2)] == [1, 2, 2, 2]
    assert [s.order for s in p_subgroups(S3, 3)] == [1, 3]
    assert [s.order for s in p_subgroups_up_to_conjugacy(S3, 2)] == [1, 2]
    G, N, M = gl23()
    reps3 = p_subgroups_up_to_conjugacy(M, 3)
    assert [s.order for s in reps3] == [1, 3]
    assert sylow_subgroup(M, 3).order == 3
    assert sylow_subgroup(G, 2).order == 16


def test_complements_in_fong_position():
    G, N, M = gl23()
    comps = complements_to_normal(M, N)
    assert len(comps) == 4
    nset = set(N.elements)
    for D in comps:
        assert D.order == 3
        assert all(x.is_identity() for x in D.elements if x in nset)
    D = comps[0]
    NM = normalizer(M, D)
    C = centralizer(N, D)
    assert NM.order == 6 and C.order == 2
    assert {d * c for d in D.elements for c in C.elements} == set(NM.elements)


def test_complements_when_quotient_trivial():
    _, N, _ = dihedral30()
    comps = complements_to_normal(N, N)
    assert len(comps) == 1 and comps[0].order == 1


def test_complements_reject_mixed_quotient():
    G, N, _ = gl23()
    with pytest.raises(InputError):
        complements_to_normal(G, N)


def test_glauberman_fixture_shape():
    G, N, M = glauberman_group()
    assert G.order == 30 and N.order == 15 and M.order == 30
    assert N.is_normal_in(G)
    comps = complements_to_normal(G, N)
    assert len(comps) == 3
    D = sylow_subgroup(G, 2)
    assert centralizer(N, D).order == 5


def test_dihedral30_fixture_shape():
    G, N, M = dihedral30()
    assert G.order == 30 and N.order == M.order == 15
    assert len(complements_to_normal(G, N)) == 15
    D = complements_to_normal(G, N)[0]
    assert centralizer(N, D).order == 1


def test_group_json_roundtrip():
    G = dihedral(4)
    H = group_from_json(group_to_json(G))
    assert H.key() == G.key()
    with pytest.raises(InputError):
        group_from_json({"degree": 3, "generators": [[0, 1, 1]]})
    with pytest.raises(InputError):
        group_from_json([1, 2])


def test_order_cap():
    with pytest.raises(ResourceLimitError):
        PermGroup([Perm.from_cycles(13, [tuple(range(13))])], max_order=10)


def test_group_map_extension_and_inverse():
    C3 = cyclic(3)
    inv = GroupMap.from_gen_images(C3, C3, [C3.generators[0] ** 2])
    assert inv.is_bijective()
    assert inv.kernel().order == 1
    assert inv.inverse()(C3.generators[0] ** 2) == C3.generators[0]
    S3 = symmetric3()
    sgn_target = cyclic(2)
    with pytest.raises(InputError):
        GroupMap.from_gen_images(S3, S3, [S3.generators[0], S3.identity])
    proj = GroupMap.from_gen_images(
        S3, sgn_target, [sgn_target.identity, sgn_target.generators[0]]
    )
    assert proj.kernel().order == 3
    assert proj.image().order == 2


def test_direct_product():
    P = direct_product(symmetric3(), cyclic(5))
    assert P.order == 30
    assert P.exponent() == 30


def test_holomorph_extension_inner():
    S3 = symmetric3()
    t = Perm.from_cycles(3, [(0, 1)])
    tau = GroupMap.from_callable(S3, S3, lambda x: x.conj(t))
    hd = holomorph_extension(S3, [tau])
    assert hd.group.order == 12
    assert hd.base.order == 6
    assert hd.base.is_normal_in(hd.group)
    # conjugation by the automorphism permutation realizes tau on the base copy
    sigma = hd.aut_perms[0]
    for x in S3.elements:
        assert hd.embed(x).conj(sigma) == hd.embed(tau(x))


def test_holomorph_extension_trivial():
    Q = quaternion8()
    hd = holomorph_extension(Q, [])
    assert hd.group.order == 8
    assert hd.embed.is_bijective()
