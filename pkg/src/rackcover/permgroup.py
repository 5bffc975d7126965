"""Permutation groups: closures, orbit machinery, and the translation groups
generated by a left quasigroup's rows.

Composition convention throughout: (g * h)(x) = g(h(x)).
"""

from __future__ import annotations

from .errors import BadShape, BlocksNotPreserved, CapExceeded
from .partition import Partition

GROUP_CAP = 10 ** 6


class Permutation:
    __slots__ = ("image",)

    def __init__(self, image):
        self.image = tuple(int(x) for x in image)

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @property
    def degree(self):
        return len(self.image)

    def __call__(self, x):
        return self.image[x]

    def __mul__(self, other):
        return Permutation(self.image[i] for i in other.image)

    def inverse(self):
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(inv)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.image))

    def order(self):
        k, p = 1, self
        while not p.is_identity():
            p = p * self
            k += 1
        return k

    def cycle_type(self):
        seen = [False] * self.degree
        lengths = []
        for start in range(self.degree):
            if seen[start]:
                continue
            length, x = 0, start
            while not seen[x]:
                seen[x] = True
                x = self.image[x]
                length += 1
            lengths.append(length)
        return tuple(sorted(lengths, reverse=True))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self):
        return hash(self.image)

    def __lt__(self, other):
        return self.image < other.image

    def __repr__(self):
        return f"Permutation({list(self.image)})"

    def to_json(self):
        return list(self.image)


class PermGroup:
    """A finite permutation group with a fully enumerated element list."""

    __slots__ = ("degree", "generators", "elements", "_members")

    def __init__(self, degree, generators, elements):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(sorted(elements))
        self._members = frozenset(p.image for p in self.elements)

    @classmethod
    def closure(cls, generators, degree=None, cap=GROUP_CAP):
        gens = []
        seen_gens = set()
        for g in generators:
            if g.image not in seen_gens:
                seen_gens.add(g.image)
                gens.append(g)
        if degree is None:
            if not gens:
                raise BadShape("cannot infer degree from an empty generator list")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise BadShape("generators act on different degrees")
        identity = Permutation.identity(degree)
        elements = {identity.image: identity}
        frontier = [identity]
        while frontier:
            new = []
            for h in frontier:
                for g in gens:
                    p = g * h
                    if p.image not in elements:
                        elements[p.image] = p
                        new.append(p)
                        if len(elements) > cap:
                            raise CapExceeded(f"group closure exceeded cap {cap}")
            frontier = new
        return cls(degree, gens, elements.values())

    @classmethod
    def from_elements(cls, elements, generators=None, degree=None):
        elements = list(elements)
        if degree is None:
            degree = elements[0].degree
        if generators is None:
            generators = [p for p in sorted(elements) if not p.is_identity()] or [
                Permutation.identity(degree)
            ]
        return cls(degree, generators, elements)

    @classmethod
    def trivial(cls, degree):
        e = Permutation.identity(degree)
        return cls(degree, (e,), (e,))

    @property
    def order(self):
        return len(self.elements)

    @property
    def identity(self):
        return Permutation.identity(self.degree)

    def __contains__(self, p):
        return p.image in self._members

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, PermGroup)
            and self.degree == other.degree
            and self._members == other._members
        )

    def __hash__(self):
        return hash((self.degree, self._members))

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    def subgroup(self, elements):
        return PermGroup.from_elements(list(elements), degree=self.degree)

    def orbits(self):
        pairs = []
        for g in self.generators:
            pairs.extend((x, g(x)) for x in range(self.degree))
        return Partition.from_pairs(self.degree, pairs)

    def orbit_of(self, a):
        seen = {a}
        frontier = [a]
        while frontier:
            x = frontier.pop()
            for g in self.generators:
                y = g(x)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return sorted(seen)

    def stabilizer(self, a):
        return self.subgroup([p for p in self.elements if p(a) == a])

    def is_transitive(self):
        return len(self.orbit_of(0)) == self.degree

    def is_semiregular(self):
        return all(
            not any(p(x) == x for x in range(self.degree))
            for p in self.elements
            if not p.is_identity()
        )

    def is_regular(self):
        return self.is_transitive() and self.is_semiregular()

    def center(self):
        return self.subgroup(
            [p for p in self.elements if all(p * g == g * p for g in self.generators)]
        )

    def is_abelian(self):
        gens = self.generators
        return all(g * h == h * g for g in gens for h in gens)

    def is_trivial(self):
        return self.order == 1

    def is_nilpotent(self):
        """Return (True, class) using the lower central series, else (False, None)."""
        current = self
        cls_ = 0
        while not current.is_trivial():
            nxt = commutator_subgroup(self, current)
            if nxt.order == current.order:
                return False, None
            current = nxt
            cls_ += 1
        return True, cls_

    def subgroups(self, max_order=None, cap=20000):
        """All subgroups, optionally only those of order <= max_order."""
        if max_order is None:
            max_order = self.order
        found = {frozenset([self.identity.image])}
        queue = [frozenset([self.identity.image])]
        while queue:
            base = queue.pop()
            for g in self.elements:
                if g.image in base:
                    continue
                closed = _closed_subset(self, base | {g.image}, max_order)
                if closed is None or closed in found:
                    continue
                found.add(closed)
                queue.append(closed)
                if len(found) > cap:
                    raise CapExceeded(f"subgroup enumeration exceeded cap {cap}")
        groups = [
            self.subgroup([Permutation(img) for img in member_set])
            for member_set in found
        ]
        groups.sort(key=lambda h: (h.order, [p.image for p in h.elements]))
        return groups


def _closed_subset(G, images, max_order):
    elements = {img: Permutation(img) for img in images}
    frontier = list(elements.values())
    while frontier:
        new = []
        for h in frontier:
            for g in list(elements.values()):
                for p in (g * h, h * g):
                    if p.image not in elements:
                        if len(elements) >= max_order:
                            return None
                        elements[p.image] = p
                        new.append(p)
        frontier = new
    return frozenset(elements)


def is_normal_in(H, G):
    return all((g * h * g.inverse()) in H for g in G.generators for h in H.elements)


def core(G, H):
    """Largest normal subgroup of G contained in H: the intersection of conjugates."""
    members = set(H._members)
    for g in G.elements:
        ginv = g.inverse()
        members &= {(g * Permutation(img) * ginv).image for img in H._members}
    return G.subgroup([Permutation(img) for img in members])


def commutator_subgroup(G, N):
    comms = {(g * h * g.inverse() * h.inverse()) for g in G.elements for h in N.elements}
    return PermGroup.closure(sorted(comms), degree=G.degree)


# ------------------------------------------------- translation groups

def translations(Q):
    """The left translation L_x for each row x of the table."""
    return [Permutation(row) for row in Q.mul]


def lmlt(Q, cap=GROUP_CAP):
    """Left multiplication group, generated by all left translations."""
    return PermGroup.closure(translations(Q), degree=Q.size, cap=cap)


def dis(Q, cap=GROUP_CAP):
    """Displacement group, generated by L_a * L_b^{-1} over all pairs."""
    trans = translations(Q)
    invs = [t.inverse() for t in trans]
    gens = {(t * s).image for t in trans for s in invs}
    return PermGroup.closure([Permutation(img) for img in sorted(gens)], degree=Q.size, cap=cap)


def dis_rel(Q, alpha, cap=GROUP_CAP):
    """Relative displacement group of a partition: L_a * L_b^{-1} over pairs a alpha b."""
    trans = translations(Q)
    gens = {
        (trans[a] * trans[b].inverse()).image
        for a in range(Q.size)
        for b in range(Q.size)
        if alpha.same_block(a, b)
    }
    return PermGroup.closure([Permutation(img) for img in sorted(gens)], degree=Q.size, cap=cap)


def _pick_group(Q, which, cap):
    if which == "lmlt":
        return lmlt(Q, cap=cap)
    if which == "dis":
        return dis(Q, cap=cap)
    raise BadShape(f"unknown group selector {which!r}; expected 'lmlt' or 'dis'")


def kernel_subgroup(Q, alpha, which="lmlt", cap=GROUP_CAP):
    """Elements h of the chosen group with h(a) alpha a for every a."""
    G = _pick_group(Q, which, cap)
    ids = alpha.block_id
    kept = [h for h in G.elements if all(ids[h(a)] == ids[a] for a in range(Q.size))]
    return G.subgroup(kept)


def block_stabilizer(Q, alpha, a, which="lmlt", cap=GROUP_CAP):
    """Elements h of the chosen group with h(a) alpha a."""
    G = _pick_group(Q, which, cap)
    ids = alpha.block_id
    return G.subgroup([h for h in G.elements if ids[h(a)] == ids[a]])


def induced_action(G, alpha):
    """Action of G on the blocks of alpha.

    Returns (group on blocks, list of block permutations parallel to G.elements).
    Raises BlocksNotPreserved if some element splits a block.
    """
    ids = alpha.block_id
    reps = [b[0] for b in alpha.blocks()]
    images = []
    for g in G.elements:
        bp = [None] * alpha.nblocks
        for x in range(G.degree):
            b, target = ids[x], ids[g(x)]
            if bp[b] is None:
                bp[b] = target
            elif bp[b] != target:
                raise BlocksNotPreserved(f"{g!r} splits block {alpha.block_of(x)}")
        if sorted(bp) != list(range(alpha.nblocks)):
            raise BlocksNotPreserved(f"{g!r} does not permute the blocks")
        images.append(Permutation(bp))
    unique = {p.image: p for p in images}
    gen_images = []
    for g in G.generators:
        bp = tuple(ids[g(r)] for r in reps)
        gen_images.append(unique[bp])
    induced = PermGroup.from_elements(unique.values(), generators=gen_images, degree=alpha.nblocks)
    return induced, images
