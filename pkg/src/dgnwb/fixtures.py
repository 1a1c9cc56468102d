"""Named example groups and ready-made verification instances.

The instance builders at the bottom import the character machinery lazily so
this module stays importable from the low-level tests.
"""

from __future__ import annotations

from .errors import InputError
from .groups import Perm, PermGroup, Subgroup


def cyclic(n: int) -> PermGroup:
    if n < 1:
        raise InputError("cyclic group order must be positive")
    if n == 1:
        return PermGroup([], degree=1)
    return PermGroup([Perm.from_cycles(n, [tuple(range(n))])], degree=n)


def symmetric3() -> PermGroup:
    return PermGroup([Perm.from_cycles(3, [(0, 1, 2)]), Perm.from_cycles(3, [(0, 1)])])


def alternating4() -> PermGroup:
    return PermGroup(
        [Perm.from_cycles(4, [(0, 1, 2)]), Perm.from_cycles(4, [(0, 1), (2, 3)])]
    )


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order 2n acting on n points."""
    if n < 3:
        raise InputError("dihedral fixture needs n >= 3")
    rot = Perm([(i + 1) % n for i in range(n)])
    ref = Perm([(-i) % n for i in range(n)])
    return PermGroup([rot, ref], degree=n)


_QUAT_MUL = {}


def _quat_table():
    # letters: 0 = 1, 1 = i, 2 = j, 3 = k; an element is (letter, sign)
    if _QUAT_MUL:
        return _QUAT_MUL
    rules = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }
    for (a, b), (c, s) in rules.items():
        for sa in (1, -1):
            for sb in (1, -1):
                _QUAT_MUL[(a, sa), (b, sb)] = (c, s * sa * sb)
    return _QUAT_MUL


def quaternion8() -> PermGroup:
    """Quaternion group of order 8 in its right regular action."""
    table = _quat_table()
    units = [(l, s) for l in range(4) for s in (1, -1)]
    idx = {u: i for i, u in enumerate(units)}

    def right_mult(u):
        return Perm([idx[table[(v, u)]] for v in units])

    return PermGroup([right_mult((1, 1)), right_mult((2, 1))], degree=8)


def _gl23_points():
    return [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]


def _gl23_perm(m):
    """Permutation of the nonzero row vectors of GF(3)^2 under v -> v*m."""
    pts = _gl23_points()
    idx = {v: i for i, v in enumerate(pts)}
    images = []
    for a, b in pts:
        w = ((a * m[0][0] + b * m[1][0]) % 3, (a * m[0][1] + b * m[1][1]) % 3)
        images.append(idx[w])
    return Perm(images)


def gl23():
    """GL(2,3) acting on the 8 nonzero vectors, with its quaternion normal
    subgroup and SL(2,3) in between. Returns (G, N, M)."""
    t1 = _gl23_perm(((1, 1), (0, 1)))
    t2 = _gl23_perm(((1, 0), (1, 1)))
    d = _gl23_perm(((2, 0), (0, 1)))
    G = PermGroup([t1, t2, d], degree=8)
    qi = _gl23_perm(((0, 1), (2, 0)))
    qj = _gl23_perm(((1, 1), (1, 2)))
    N = Subgroup(G, generators=[qi, qj])
    M = Subgroup(G, generators=[t1, t2])
    return G, N, M


def glauberman_group():
    """S3 x C5 realized as (C3 x C5) : C2 with the involution inverting the C3
    factor and centralizing the C5 factor. Returns (G, N, M) with M = G."""
    a = Perm.from_cycles(8, [(0, 1, 2)])
    c = Perm.from_cycles(8, [(3, 4, 5, 6, 7)])
    t = Perm.from_cycles(8, [(1, 2)])
    G = PermGroup([a, c, t], degree=8)
    N = Subgroup(G, generators=[a, c])
    return G, N, G.full_subgroup()


def dihedral30():
    """(C3 x C5) : C2 with the involution inverting both factors (dihedral of
    order 30). Returns (G, N, M) with M = N = C15."""
    a = Perm.from_cycles(8, [(0, 1, 2)])
    c = Perm.from_cycles(8, [(3, 4, 5, 6, 7)])
    t = Perm.from_cycles(8, [(1, 2), (4, 7), (5, 6)])
    G = PermGroup([a, c, t], degree=8)
    N = Subgroup(G, generators=[a, c])
    return G, N, N


def groups_catalog() -> dict:
    """Fixture groups of order at most 48 keyed by name."""
    cat = {}
    for n in (2, 3, 4, 6, 8, 12):
        cat["C%d" % n] = cyclic(n)
    cat["S3"] = symmetric3()
    cat["A4"] = alternating4()
    cat["D8"] = dihedral(4)
    cat["Q8"] = quaternion8()
    G, _, M = gl23()
    cat["SL23"] = M
    cat["GL23"] = G
    cat["C15:C2a"] = glauberman_group()[0]
    cat["C15:C2b"] = dihedral30()[0]
    return cat


def gl23_instance():
    """GL(2,3) over its quaternion subgroup with the 2-dimensional character
    at p = 3. Returns (G, N, M, theta) over GF(9)."""
    from .brauer import ibr
    from .fields import field_create

    G, N, M = gl23()
    L = field_create(3, 2)
    theta = [c for c in ibr(N, 3, L) if c.degree == 2][0]
    return G, N, M, theta


def glauberman_instance():
    """S3 x C5 over C15 at p = 2 with theta trivial on C3 and faithful on C5.
    Returns (G, N, M, theta) over GF(16)."""
    from .brauer import ibr
    from .fields import field_create

    G, N, M = glauberman_group()
    L = field_create(2, 4)
    one = N.identity
    c3 = [x for x in N.elements if x.order() == 3]
    c5 = [x for x in N.elements if x.order() == 5]
    for c in ibr(N, 2, L):
        if all(c.value_at(x) == c.value_at(one) for x in c3) and all(
            c.value_at(x) != c.value_at(one) for x in c5
        ):
            return G, N, M, c
    raise InputError("fixture character went missing")


def trivial_defect_instance():
    """S3 over its C3 at p = 2 with a faithful character; here M = N, the
    defect group is trivial, and the correspondence degenerates to identity.
    Returns (G, N, M, theta) over GF(4)."""
    from .brauer import ibr
    from .fields import field_create

    G = symmetric3()
    c3 = [x for x in G.elements if x.order() == 3]
    N = Subgroup(G, elements=[G.identity] + c3)
    L = field_create(2, 2)
    theta = [c for c in ibr(N, 2, L) if c.value_at(c3[0]) != c.value_at(N.identity)][0]
    return G, N, N, theta


def c5_inversion(G: PermGroup) -> "object":
    """The automorphism of the glauberman fixture inverting the C5 factor."""
    from .groups import GroupMap

    def invert(x):
        xi = x.inverse()
        return Perm([x.images[i] if i < 3 else xi.images[i] for i in range(8)])

    return GroupMap.from_callable(G, G, invert)


def instance_spec(name: str) -> dict:
    """JSON-ready verification spec for a named instance.

    Known names: gl23, glauberman, trivial. The dicts match the files under
    specs/ and are what the command line frontend parses.
    """
    if name == "gl23":
        G, N, M, theta = gl23_instance()
        return {
            "schema": 1,
            "name": "gl23",
            "p": 3,
            "field": 2,
            "degree": 8,
            "group": [list(g.images) for g in G.generators],
            "normal": [list(g.images) for g in N.generators],
            "middle": [list(g.images) for g in M.generators],
            "theta": {"degree": theta.degree, "fingerprint": theta.fingerprint()},
            "seed": 0,
        }
    if name == "glauberman":
        G, N, M, theta = glauberman_instance()
        return {
            "schema": 1,
            "name": "glauberman",
            "p": 2,
            "field": 4,
            "degree": 8,
            "group": [list(g.images) for g in G.generators],
            "normal": [list(g.images) for g in N.generators],
            "middle": [list(g.images) for g in M.generators],
            "theta": {"degree": theta.degree, "fingerprint": theta.fingerprint()},
            "automorphisms": [[0, 1, 2, 3, 7, 6, 5, 4]],
            "seed": 0,
        }
    if name == "trivial":
        G, N, M, theta = trivial_defect_instance()
        return {
            "schema": 1,
            "name": "trivial",
            "p": 2,
            "field": 2,
            "degree": 3,
            "group": [list(g.images) for g in G.generators],
            "normal": [list(g.images) for g in N.generators],
            "middle": [list(g.images) for g in M.generators],
            "theta": {"degree": theta.degree, "fingerprint": theta.fingerprint()},
            "seed": 0,
        }
    raise InputError("unknown instance name: %s" % name)
