"""Partitions of {0..n-1} in canonical first-occurrence labelling."""

from __future__ import annotations

from .errors import BadShape


class Partition:
    """A partition stored as a block-id vector.

    Block ids are normalised so that scanning 0..n-1 meets blocks in
    increasing id order; two partitions are equal iff their vectors are.
    """

    __slots__ = ("block_id", "nblocks")

    def __init__(self, block_id):
        ids = list(block_id)
        relabel = {}
        out = []
        for b in ids:
            if b not in relabel:
                relabel[b] = len(relabel)
            out.append(relabel[b])
        self.block_id = tuple(out)
        self.nblocks = len(relabel)

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def full(cls, n):
        return cls([0] * n)

    @classmethod
    def from_blocks(cls, n, blocks):
        ids = [None] * n
        for i, block in enumerate(blocks):
            for x in block:
                if not 0 <= x < n or ids[x] is not None:
                    raise BadShape(f"blocks do not partition 0..{n - 1}")
                ids[x] = i
        if any(b is None for b in ids):
            raise BadShape(f"blocks do not partition 0..{n - 1}")
        return cls(ids)

    @classmethod
    def from_pairs(cls, n, pairs):
        """Smallest equivalence containing the given pairs."""
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in pairs:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        return cls(find(x) for x in range(n))

    @property
    def degree(self):
        return len(self.block_id)

    def blocks(self):
        out = [[] for _ in range(self.nblocks)]
        for x, b in enumerate(self.block_id):
            out[b].append(x)
        return out

    def block_of(self, x):
        b = self.block_id[x]
        return [y for y, c in enumerate(self.block_id) if c == b]

    def same_block(self, x, y):
        return self.block_id[x] == self.block_id[y]

    def is_identity(self):
        return self.nblocks == self.degree

    def is_full(self):
        return self.nblocks == 1

    def is_uniform(self):
        sizes = {len(b) for b in self.blocks()}
        return len(sizes) == 1

    def refines(self, other):
        """True iff every block of self lies inside a block of other."""
        if self.degree != other.degree:
            raise BadShape("partitions of different degree")
        seen = {}
        for mine, theirs in zip(self.block_id, other.block_id):
            if mine in seen:
                if seen[mine] != theirs:
                    return False
            else:
                seen[mine] = theirs
        return True

    __le__ = refines

    def join(self, other):
        """Smallest common coarsening."""
        if self.degree != other.degree:
            raise BadShape("partitions of different degree")
        pairs = []
        first_in_block = {}
        for x, b in enumerate(other.block_id):
            if b in first_in_block:
                pairs.append((first_in_block[b], x))
            else:
                first_in_block[b] = x
        mine = {}
        for x, b in enumerate(self.block_id):
            if b in mine:
                pairs.append((mine[b], x))
            else:
                mine[b] = x
        return Partition.from_pairs(self.degree, pairs)

    def meet(self, other):
        """Largest common refinement."""
        if self.degree != other.degree:
            raise BadShape("partitions of different degree")
        return Partition(zip(self.block_id, other.block_id))

    def __eq__(self, other):
        return isinstance(other, Partition) and self.block_id == other.block_id

    def __hash__(self):
        return hash(self.block_id)

    def __repr__(self):
        body = "".join("{" + " ".join(map(str, b)) + "}" for b in self.blocks())
        return body

    def to_json(self):
        return list(self.block_id)
