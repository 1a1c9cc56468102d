"""Finite permutation groups at desk scale.

Eager element enumeration, conjugacy data with power maps, quotients,
normalizers and centralizers, p-subgroup and intermediate-subgroup machinery.
Products compose left to right: (p * q)(i) = q(p(i)), and x.conj(g) is
g^-1 * x * g, so conj is a right action.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import InputError, InternalCheckError, ResourceLimitError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class Perm:
    """Permutation of {0..degree-1} stored as a tuple of images."""

    __slots__ = ("images", "_hash")

    def __init__(self, images):
        self.images = tuple(images)
        self._hash = hash(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles) -> "Perm":
        images = list(range(degree))
        for cyc in cycles:
            for k, a in enumerate(cyc):
                images[a] = cyc[(k + 1) % len(cyc)]
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Perm") -> "Perm":
        q = other.images
        return Perm([q[i] for i in self.images])

    def inverse(self) -> "Perm":
        images = [0] * len(self.images)
        for i, j in enumerate(self.images):
            images[j] = i
        return Perm(images)

    def conj(self, g: "Perm") -> "Perm":
        """Image of self under conjugation by g, i.e. g^-1 * self * g."""
        gi = g.inverse()
        return gi * self * g

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(len(self.images))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def order(self) -> int:
        n = 1
        for cyc in self.cycles():
            n = _lcm(n, len(cyc))
        return n

    def cycles(self):
        seen = [False] * len(self.images)
        out = []
        for i in range(len(self.images)):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def __repr__(self):
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(i) for i in c) + ")" for c in cycs)


@dataclass(frozen=True)
class ClassData:
    """Conjugacy classes with p-regular selection and power maps.

    Classes are sorted by their least element, so the identity class is first.
    power_map[k][i] is the index of the class holding rep_i^k, for 0 <= k < exponent.
    """

    classes: tuple
    reps: tuple
    class_index: dict
    p_regular: tuple
    power_map: dict
    exponent: int

    def index_of(self, x: Perm) -> int:
        return self.class_index[x]


class PermGroup:
    """Group generated by permutations; every element is enumerated eagerly."""

    def __init__(self, generators, degree=None, max_order=10**6, _elements=None):
        gens = [g if isinstance(g, Perm) else Perm(g) for g in generators]
        if degree is None:
            if not gens:
                raise InputError("degree required for a trivial generating set")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise InputError("generators act on different degrees")
        self.degree = degree
        self.generators = tuple(g for g in gens if not g.is_identity())
        self.max_order = max_order
        if _elements is None:
            self._words = self._close(max_order)
            elements = tuple(sorted(self._words))
        else:
            elements = tuple(sorted(_elements))
            self._words = None
        self.elements = elements
        self.order = len(elements)
        self.identity = Perm.identity(degree)
        self._index = {p: i for i, p in enumerate(elements)}
        self._key = None
        self._exponent = None
        self._class_cache = {}
        self._psub_cache = {}
        self._all_subgroups = None
        self._ibr_cache = {}

    def _close(self, max_order):
        identity = Perm.identity(self.degree)
        words = {identity: None}
        frontier = [identity]
        while frontier:
            new = []
            for x in frontier:
                for gi, g in enumerate(self.generators):
                    y = x * g
                    if y not in words:
                        words[y] = (x, gi)
                        new.append(y)
                        if len(words) > max_order:
                            raise ResourceLimitError(
                                "group order exceeds cap %d" % max_order
                            )
            frontier = new
        return words

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p):
        return p in self._index

    def index_of(self, p: Perm) -> int:
        return self._index[p]

    def key(self):
        """Canonical hashable identity: (degree, sorted element tuple)."""
        if self._key is None:
            self._key = (self.degree, self.elements)
        return self._key

    def element_order(self, p: Perm) -> int:
        return p.order()

    def exponent(self) -> int:
        if self._exponent is None:
            n = 1
            for p in self.elements:
                n = _lcm(n, p.order())
            self._exponent = n
        return self._exponent

    def subgroup(self, generators=None, elements=None) -> "Subgroup":
        return Subgroup(self, generators=generators, elements=elements)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, elements=[self.identity])

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, elements=self.elements)

    def is_subset(self, other: "PermGroup") -> bool:
        """True when self's elements all lie in other (same degree)."""
        return self.degree == other.degree and all(p in other for p in self.elements)

    def is_normal_in(self, other: "PermGroup") -> bool:
        mine = set(self.elements)
        return self.is_subset(other) and all(
            s.conj(g) in mine for s in self.generators or self.elements
            for g in other.generators or other.elements
        )

    def __repr__(self):
        return "PermGroup(degree=%d, order=%d)" % (self.degree, self.order)


class Subgroup(PermGroup):
    """Subgroup of a parent group; elements are verified to be closed."""

    def __init__(self, parent: PermGroup, generators=None, elements=None):
        self.parent = parent
        if elements is not None:
            elems = set(elements)
            if not elems:
                raise InputError("a subgroup needs at least the identity")
            for x in elems:
                if x not in parent:
                    raise InputError("subgroup element outside the parent group")
            for x in elems:
                for y in elems:
                    if x * y not in elems:
                        raise InputError("element set is not closed under products")
            gens = _greedy_generators(sorted(elems))
            super().__init__(gens, degree=parent.degree, _elements=elems)
        else:
            gens = [g if isinstance(g, Perm) else Perm(g) for g in generators or []]
            for g in gens:
                if g not in parent:
                    raise InputError("subgroup generator outside the parent group")
            super().__init__(gens, degree=parent.degree)
        self._parent_key = None

    def key_in_parent(self):
        if self._parent_key is None:
            idx = tuple(sorted(self.parent.index_of(p) for p in self.elements))
            self._parent_key = (self.order, idx)
        return self._parent_key

    def conjugate(self, g: Perm) -> "Subgroup":
        return Subgroup(self.parent, elements=[x.conj(g) for x in self.elements])

    def __repr__(self):
        return "Subgroup(order=%d of %d)" % (self.order, self.parent.order)


def _greedy_generators(sorted_elems):
    """Small generating list chosen deterministically from a sorted element list."""
    degree = sorted_elems[0].degree
    gens = []
    have = {Perm.identity(degree)}
    target = len(sorted_elems)
    for x in sorted_elems:
        if x in have:
            continue
        gens.append(x)
        have = _closure_set(have | {x})
        if len(have) == target:
            break
    return gens


def _closure_set(seed):
    """Subgroup generated by the seed elements (finite, so words suffice)."""
    gens = list(seed)
    elems = set(seed)
    frontier = list(seed)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return elems


def subgroup_closure(parent: PermGroup, seed) -> Subgroup:
    """Subgroup of parent generated by the given elements."""
    return Subgroup(parent, generators=list(seed))


def group_from_generators(images_list, degree=None, max_order=10**6) -> PermGroup:
    """Build a group from raw image lists, validating the input."""
    if degree is None:
        if not images_list:
            raise InputError("empty generator list needs an explicit degree")
        degree = len(images_list[0])
    perms = []
    for images in images_list:
        if len(images) != degree:
            raise InputError("generator length %d does not match degree %d" % (len(images), degree))
        if sorted(images) != list(range(degree)):
            raise InputError("generator %r is not a permutation of 0..%d" % (images, degree - 1))
        perms.append(Perm(images))
    return PermGroup(perms, degree=degree, max_order=max_order)


def group_from_json(obj, max_order=10**6) -> PermGroup:
    if not isinstance(obj, dict) or "degree" not in obj or "generators" not in obj:
        raise InputError('group JSON must be {"degree": int, "generators": [[...], ...]}')
    return group_from_generators(obj["generators"], degree=obj["degree"], max_order=max_order)


def group_to_json(G: PermGroup) -> dict:
    return {"degree": G.degree, "generators": [list(g.images) for g in G.generators]}


def conjugacy_data(G: PermGroup, p: int) -> ClassData:
    """Conjugacy classes, p-regular selection, and the full power map."""
    if not is_prime(p):
        raise InputError("p must be prime, got %r" % (p,))
    if p in G._class_cache:
        return G._class_cache[p]
    gens = G.generators or (G.identity,)
    unseen = set(G.elements)
    classes = []
    while unseen:
        x = min(unseen)
        orbit = {x}
        frontier = [x]
        while frontier:
            new = []
            for y in frontier:
                for g in gens:
                    z = y.conj(g)
                    if z not in orbit:
                        orbit.add(z)
                        new.append(z)
            frontier = new
        unseen -= orbit
        classes.append(tuple(sorted(orbit)))
    classes.sort(key=lambda c: c[0])
    classes = tuple(classes)
    reps = tuple(c[0] for c in classes)
    class_index = {}
    for i, c in enumerate(classes):
        for x in c:
            class_index[x] = i
    p_regular = tuple(i for i, r in enumerate(reps) if gcd(r.order(), p) == 1)
    exp = G.exponent()
    power_map = {}
    for k in range(exp):
        power_map[k] = tuple(class_index[r**k] for r in reps)
    data = ClassData(
        classes=classes,
        reps=reps,
        class_index=class_index,
        p_regular=p_regular,
        power_map=power_map,
        exponent=exp,
    )
    G._class_cache[p] = data
    return data


def centralizer(G: PermGroup, x) -> Subgroup:
    """Centralizer in G of an element or of a subgroup."""
    if isinstance(x, PermGroup):
        targets = list(x.generators or x.elements)
    else:
        targets = [x]
    elems = [g for g in G.elements if all(t * g == g * t for t in targets)]
    return Subgroup(G, elements=elems)


def normalizer(G: PermGroup, S: PermGroup) -> Subgroup:
    sset = frozenset(S.elements)
    elems = [g for g in G.elements if frozenset(x.conj(g) for x in S.elements) == sset]
    return Subgroup(G, elements=elems)


def center(G: PermGroup) -> Subgroup:
    return centralizer(G, G)


class GroupMap:
    """Homomorphism between permutation groups stored as a full element table."""

    def __init__(self, domain: PermGroup, codomain: PermGroup, table: dict, check=True):
        self.domain = domain
        self.codomain = codomain
        self.table = table
        if check:
            self._verify()

    @classmethod
    def from_gen_images(cls, domain: PermGroup, codomain: PermGroup, images) -> "GroupMap":
        images = [g if isinstance(g, Perm) else Perm(g) for g in images]
        if len(images) != len(domain.generators):
            raise InputError(
                "expected %d generator images, got %d" % (len(domain.generators), len(images))
            )
        for im in images:
            if im not in codomain:
                raise InputError("generator image outside the codomain")
        if domain._words is None:
            raise InternalCheckError("domain lacks word data for generator extension")
        table = {}
        order = sorted(domain._words, key=lambda p: _word_depth(domain._words, p))
        for x in order:
            w = domain._words[x]
            if w is None:
                table[x] = codomain.identity
            else:
                parent, gi = w
                table[x] = table[parent] * images[gi]
        return cls(domain, codomain, table)

    @classmethod
    def from_callable(cls, domain: PermGroup, codomain: PermGroup, fn) -> "GroupMap":
        table = {x: fn(x) for x in domain.elements}
        return cls(domain, codomain, table)

    def _verify(self):
        if set(self.table) != set(self.domain.elements):
            raise InputError("map table does not cover the domain")
        for v in self.table.values():
            if v not in self.codomain:
                raise InputError("map image leaves the codomain")
        elems = self.domain.elements
        if self.domain.order <= 200:
            pairs = [(x, y) for x in elems for y in elems]
        else:
            import random

            rng = random.Random(0)
            pairs = [(rng.choice(elems), rng.choice(elems)) for _ in range(4000)]
        for x, y in pairs:
            if self.table[x * y] != self.table[x] * self.table[y]:
                raise InputError("generator images do not extend to a homomorphism")

    def __call__(self, x: Perm) -> Perm:
        return self.table[x]

    def image(self) -> Subgroup:
        return Subgroup(self.codomain, elements=set(self.table.values()))

    def kernel(self) -> Subgroup:
        ident = self.codomain.identity
        return Subgroup(self.domain, elements=[x for x in self.domain.elements if self.table[x] == ident])

    def is_bijective(self) -> bool:
        return len(set(self.table.values())) == self.domain.order == self.codomain.order

    def inverse(self) -> "GroupMap":
        if not self.is_bijective():
            raise InputError("map is not invertible")
        return GroupMap(self.codomain, self.domain, {v: k for k, v in self.table.items()}, check=False)

    def restrict(self, sub: PermGroup) -> "GroupMap":
        return GroupMap(sub, self.codomain, {x: self.table[x] for x in sub.elements}, check=False)


def _word_depth(words, p):
    d = 0
    while words[p] is not None:
        p = words[p][0]
        d += 1
    return d


@dataclass
class QuotientMap:
    """Quotient group G/N together with the projection and a transversal.

    Cosets are ordered by their least element, so coset 0 is N and
    transversal[0] is the identity.
    """

    group: PermGroup
    domain: PermGroup
    normal: PermGroup
    cosets: tuple
    transversal: tuple
    projection: GroupMap = field(repr=False)
    _coset_index: dict = field(repr=False)

    def coset_index(self, g: Perm) -> int:
        return self._coset_index[g]

    def image(self, g: Perm) -> Perm:
        return self.projection(g)

    def section(self, q: Perm) -> Perm:
        """Transversal representative of the coset labelled by where q sends point 0."""
        return self.transversal[q.images[0]]

    def preimage(self, qsub: PermGroup) -> Subgroup:
        elems = []
        for q in qsub.elements:
            elems.extend(self.cosets[q.images[0]])
        return Subgroup(self.domain, elements=elems)


def quotient_group(G: PermGroup, N: PermGroup) -> QuotientMap:
    if not N.is_subset(G):
        raise InputError("N is not a subgroup of G")
    if not N.is_normal_in(G):
        raise InputError("N is not normal in G")
    nset = set(N.elements)
    seen = set()
    cosets = []
    for g in G.elements:
        if g in seen:
            continue
        coset = frozenset(n * g for n in nset)
        seen |= coset
        cosets.append(coset)
    cosets.sort(key=min)
    cosets = tuple(cosets)
    transversal = tuple(min(c) for c in cosets)
    coset_index = {}
    for i, c in enumerate(cosets):
        for x in c:
            coset_index[x] = i
    deg = len(cosets)

    def qimage(g):
        return Perm([coset_index[transversal[i] * g] for i in range(deg)])

    qgens = [qimage(g) for g in G.generators] or [Perm.identity(deg)]
    Q = PermGroup(qgens, degree=deg)
    if Q.order * N.order != G.order:
        raise InternalCheckError("quotient order mismatch")
    projection = GroupMap.from_callable(G, Q, qimage)
    return QuotientMap(
        group=Q,
        domain=G,
        normal=N,
        cosets=cosets,
        transversal=transversal,
        projection=projection,
        _coset_index=coset_index,
    )


def all_subgroups(G: PermGroup, cap=64):
    """Every subgroup of G, for small G; closure of cyclic subgroups under joins."""
    if G.order > cap:
        raise ResourceLimitError("subgroup enumeration capped at order %d" % cap)
    if G._all_subgroups is not None:
        return list(G._all_subgroups)
    found = {frozenset([G.identity])}
    for x in G.elements:
        found.add(frozenset(_closure_set({G.identity, x})))
    while True:
        new = set()
        pairs = sorted(found, key=lambda s: (len(s), sorted(p.images for p in s)))
        for i, A in enumerate(pairs):
            for B in pairs[i + 1 :]:
                if A <= B or B <= A:
                    continue
                j = frozenset(_closure_set(A | B))
                if j not in found:
                    new.add(j)
        if not new:
            break
        found |= new
    subs = [Subgroup(G, elements=s) for s in found]
    subs.sort(key=lambda s: s.key_in_parent())
    G._all_subgroups = tuple(subs)
    return subs


def overgroups(G: PermGroup, N: PermGroup, quotient_cap=64):
    """All subgroups S with N <= S <= G, via subgroups of G/N; N must be normal."""
    qm = quotient_group(G, N)
    if qm.group.order > quotient_cap:
        raise ResourceLimitError(
            "quotient order %d exceeds cap %d" % (qm.group.order, quotient_cap)
        )
    out = [qm.preimage(S) for S in all_subgroups(qm.group, cap=quotient_cap)]
    out.sort(key=lambda s: s.key_in_parent())
    return out


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def p_subgroups(G: PermGroup, p: int):
    """All p-subgroups of G (including the trivial one), as Subgroups."""
    if not is_prime(p):
        raise InputError("p must be prime, got %r" % (p,))
    if p in G._psub_cache:
        return list(G._psub_cache[p])
    bound = _p_part(G.order, p)
    found = {frozenset([G.identity])}
    for x in G.elements:
        if x.order() != 1 and _p_part(x.order(), p) == x.order():
            found.add(frozenset(_closure_set({G.identity, x})))
    while True:
        new = set()
        pairs = sorted(found, key=lambda s: (len(s), sorted(q.images for q in s)))
        for i, A in enumerate(pairs):
            for B in pairs[i + 1 :]:
                if A <= B or B <= A:
                    continue
                j = _closure_set(A | B)
                if len(j) > bound or _p_part(len(j), p) != len(j):
                    continue
                fj = frozenset(j)
                if fj not in found:
                    new.add(fj)
        if not new:
            break
        found |= new
    subs = [Subgroup(G, elements=s) for s in found]
    subs.sort(key=lambda s: s.key_in_parent())
    G._psub_cache[p] = tuple(subs)
    return subs


def p_subgroups_up_to_conjugacy(G: PermGroup, p: int):
    """One canonical representative (least key) per conjugacy class of p-subgroups."""
    subs = {s.key_in_parent(): s for s in p_subgroups(G, p)}
    gens = G.generators or (G.identity,)
    reps = []
    seen = set()
    for key in sorted(subs):
        if key in seen:
            continue
        orbit = {key}
        frontier = [subs[key]]
        while frontier:
            new = []
            for S in frontier:
                for g in gens:
                    T = S.conjugate(g)
                    tk = T.key_in_parent()
                    if tk not in orbit:
                        orbit.add(tk)
                        new.append(T)
            frontier = new
        seen |= orbit
        reps.append(subs[key])
    return reps


def sylow_subgroup(G: PermGroup, p: int) -> Subgroup:
    bound = _p_part(G.order, p)
    cands = [s for s in p_subgroups_up_to_conjugacy(G, p) if s.order == bound]
    if len(cands) != 1:
        raise InternalCheckError("Sylow subgroups did not form one conjugacy class")
    return cands[0]


def complements_to_normal(G: PermGroup, N: PermGroup):
    """Complements D to a normal N when G/N is a p-group: DN = G, D cap N = 1."""
    if not N.is_normal_in(G):
        raise InputError("N is not normal in G")
    q = G.order // N.order
    if q == 1:
        return [G.trivial_subgroup()]
    ps = [p for p in range(2, q + 1) if is_prime(p) and q % p == 0]
    if len(ps) != 1 or _p_part(q, ps[0]) != q:
        raise InputError("G/N must be a p-group for complement search")
    p = ps[0]
    nset = set(N.elements)
    out = []
    for D in p_subgroups(G, p):
        if D.order == q and all(x.is_identity() or x not in nset for x in D.elements):
            out.append(D)
    out.sort(key=lambda s: s.key_in_parent())
    return out


def maximal_subgroups(G: PermGroup):
    subs = [s for s in all_subgroups(G) if s.order < G.order]
    out = []
    for s in subs:
        sset = set(s.elements)
        if not any(t.order > s.order and sset < set(t.elements) for t in subs):
            out.append(s)
    return out


def direct_product(A: PermGroup, B: PermGroup) -> PermGroup:
    """Direct product acting on the disjoint union of the two point sets."""
    d = A.degree + B.degree
    gens = []
    for g in A.generators:
        gens.append(Perm(list(g.images) + list(range(A.degree, d))))
    for g in B.generators:
        gens.append(Perm(list(range(A.degree)) + [A.degree + i for i in g.images]))
    return PermGroup(gens, degree=d)


@dataclass
class HolomorphData:
    """G extended by a list of automorphisms, acting on G's element list."""

    group: PermGroup
    base: Subgroup
    embed: GroupMap
    aut_perms: tuple
    point_of: dict

    def embed_subgroup(self, S: PermGroup) -> Subgroup:
        return Subgroup(self.group, elements=[self.embed(x) for x in S.elements])


def holomorph_extension(G: PermGroup, automorphisms) -> HolomorphData:
    """Faithful action of G extended by automorphisms on the |G| element points.

    G acts by right multiplication, each automorphism by its mapping; the
    subgroup generated is a semidirect product of G with the automorphism group
    generated by the supplied maps.
    """
    n = G.order
    idx = {x: i for i, x in enumerate(G.elements)}

    def right_mult(g):
        return Perm([idx[G.elements[i] * g] for i in range(n)])

    aut_perms = []
    for tau in automorphisms:
        if tau.domain is not G or tau.codomain is not G:
            raise InputError("automorphisms must map G to itself")
        if not tau.is_bijective():
            raise InputError("supplied map is not an automorphism")
        aut_perms.append(Perm([idx[tau(G.elements[i])] for i in range(n)]))
    gens = [right_mult(g) for g in G.generators] + aut_perms
    big = PermGroup(gens, degree=n, max_order=10**6)
    base = Subgroup(big, elements=[right_mult(g) for g in G.elements])
    if not base.is_normal_in(big):
        raise InternalCheckError("base copy of G is not normal in the extension")
    taus = PermGroup(aut_perms or [Perm.identity(n)], degree=n)
    if base.order * taus.order != big.order:
        raise InternalCheckError("extension is not a semidirect product of expected order")
    embed = GroupMap.from_callable(G, base, right_mult)
    return HolomorphData(
        group=big,
        base=base,
        embed=embed,
        aut_perms=tuple(aut_perms),
        point_of=idx,
    )
