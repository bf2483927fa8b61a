"""Symmetric group and non-crossing partition combinatorics.

Permutations are stored in one-line notation. The public constructor takes
1-based images, ``Permutation((2, 1))`` is the transposition of S_2, and the
0-based array is kept in ``Permutation.arr``.

Composition follows ``(s * t)(i) = s(t(i))``.  The reference full cycle
``gamma(p)`` maps ``i -> i - 1`` (and ``1 -> p``).
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DimensionError

#: Catalan numbers Cat_0 .. Cat_32 as exact integers.
CATALAN: tuple[int, ...] = tuple(math.comb(2 * m, m) // (m + 1) for m in range(33))


def catalan(m: int) -> int:
    """Return the Catalan number ``Cat_m``."""
    if m < 0:
        raise DimensionError("catalan index must be non-negative")
    if m < len(CATALAN):
        return CATALAN[m]
    return math.comb(2 * m, m) // (m + 1)


class Permutation:
    """An element of S_p in one-line notation.

    Parameters
    ----------
    images : sequence of int
        1-based images ``sigma(1), ..., sigma(p)``.
    """

    __slots__ = ("arr", "_cycles")

    def __init__(self, images: Iterable[int]):
        arr = tuple(int(i) - 1 for i in images)
        if sorted(arr) != list(range(len(arr))):
            raise DimensionError(f"not a permutation: {tuple(i + 1 for i in arr)}")
        self.arr = arr
        self._cycles = None

    @classmethod
    def from_zero_based(cls, arr: Iterable[int]) -> "Permutation":
        return cls(i + 1 for i in arr)

    @classmethod
    def identity(cls, p: int) -> "Permutation":
        return cls(range(1, p + 1))

    @classmethod
    def from_cycles(cls, p: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from 1-based cycles, ``(a b c)`` meaning ``a -> b -> c -> a``."""
        img = list(range(p))
        for cyc in cycles:
            cyc = [c - 1 for c in cyc]
            for j, c in enumerate(cyc):
                img[c] = cyc[(j + 1) % len(cyc)]
        return cls.from_zero_based(img)

    @property
    def p(self) -> int:
        return len(self.arr)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self.arr)

    def __call__(self, i: int) -> int:
        """Image of the 1-based point ``i``."""
        return self.arr[i - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        _check_same(self, other)
        a = self.arr
        return Permutation.from_zero_based(a[j] for j in other.arr)

    def inverse(self) -> "Permutation":
        inv = [0] * self.p
        for i, j in enumerate(self.arr):
            inv[j] = i
        return Permutation.from_zero_based(inv)

    __invert__ = inverse

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Disjoint cycles (1-based), each starting at its smallest point."""
        if self._cycles is None:
            seen = [False] * self.p
            out = []
            for s in range(self.p):
                if seen[s]:
                    continue
                cyc = []
                j = s
                while not seen[j]:
                    seen[j] = True
                    cyc.append(j + 1)
                    j = self.arr[j]
                out.append(tuple(cyc))
            self._cycles = tuple(out)
        return self._cycles

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle lengths as an integer partition (non-increasing)."""
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.arr == other.arr

    def __hash__(self):
        return hash(self.arr)

    def __repr__(self):
        return f"Permutation({self.images})"


def _check_same(a: Permutation, b: Permutation) -> None:
    if a.p != b.p:
        raise DimensionError(f"size mismatch: S_{a.p} vs S_{b.p}")


def gamma(p: int) -> Permutation:
    """The full cycle ``i -> i - 1`` of S_p."""
    return Permutation.from_zero_based((i - 1) % p for i in range(p))


def all_permutations(p: int) -> Iterator[Permutation]:
    for img in itertools.permutations(range(1, p + 1)):
        yield Permutation(img)


def cycle_count(sigma: Permutation) -> int:
    """Number of cycles ``#sigma``, fixed points included."""
    return len(sigma.cycles())


def length(sigma: Permutation) -> int:
    """Minimal number of transpositions, ``|sigma| = p - #sigma``."""
    return sigma.p - cycle_count(sigma)


def even_cycle_count(sigma: Permutation) -> int:
    return sum(1 for c in sigma.cycles() if len(c) % 2 == 0)


def is_on_geodesic(alpha: Permutation, beta: Permutation, gam: Permutation) -> bool:
    """True iff ``|a^-1 b| + |b^-1 g| = |a^-1 g|``."""
    _check_same(alpha, beta)
    _check_same(beta, gam)
    ai = alpha.inverse()
    return length(ai * beta) + length(beta.inverse() * gam) == length(ai * gam)


def is_full_cycle(sigma: Permutation) -> bool:
    return cycle_count(sigma) == 1


def mobius(sigma: Permutation) -> int:
    """Product over cycles of ``(-1)^(r-1) Cat_(r-1)``."""
    out = 1
    for c in sigma.cycles():
        r = len(c)
        out *= (-1) ** (r - 1) * catalan(r - 1)
    return out


# -- non-crossing partitions -------------------------------------------------

class NoncrossingPartition:
    """A non-crossing partition of ``{1..p}``.

    ``blocks`` is a tuple of sorted tuples, ordered by smallest element.
    """

    __slots__ = ("blocks", "p")

    def __init__(self, blocks: Iterable[Iterable[int]], p: int | None = None):
        blks = tuple(sorted(tuple(sorted(b)) for b in blocks if len(tuple(b)) > 0))
        pts = sorted(x for b in blks for x in b)
        if p is None:
            p = len(pts)
        if pts != list(range(1, p + 1)):
            raise DimensionError("blocks must partition {1..p}")
        if not _blocks_noncrossing(blks):
            raise DimensionError(f"crossing partition: {blks}")
        self.blocks = blks
        self.p = p

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def to_permutation(self, orientation: str = "gamma") -> Permutation:
        """Geodesic permutation with these blocks as cycles.

        ``orientation="gamma"`` orients each block ``b_j -> b_(j-1)`` like
        ``gamma``; ``"gamma_inv"`` uses increasing order.
        """
        img = list(range(self.p))
        for b in self.blocks:
            m = len(b)
            for j, x in enumerate(b):
                if orientation == "gamma":
                    img[x - 1] = b[(j - 1) % m] - 1
                elif orientation == "gamma_inv":
                    img[x - 1] = b[(j + 1) % m] - 1
                else:
                    raise ValueError(f"unknown orientation {orientation!r}")
        return Permutation.from_zero_based(img)

    def __eq__(self, other):
        return isinstance(other, NoncrossingPartition) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"NoncrossingPartition({self.blocks})"


def _blocks_noncrossing(blocks: Sequence[Sequence[int]]) -> bool:
    label = {}
    for bi, b in enumerate(blocks):
        for x in b:
            label[x] = bi
    # a crossing needs a < b < c < d with a~c, b~d in different blocks
    for b1, b2 in itertools.combinations(blocks, 2):
        for a, c in itertools.combinations(b1, 2):
            inside = [x for x in b2 if a < x < c]
            if inside and len(inside) != len(b2):
                return False
    return True


def _nc_lists(elems: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
    if not elems:
        yield []
        return
    yield from _extend((elems[0],), elems[1:])


def _extend(block, remaining):
    # close the current block
    for parts in _nc_lists(remaining):
        yield [block] + parts
    # or add remaining[j]; everything skipped over forms its own NC partition
    for j in range(len(remaining)):
        for gap in _nc_lists(remaining[:j]):
            for rest in _extend(block + (remaining[j],), remaining[j + 1:]):
                yield [rest[0]] + gap + rest[1:]


@lru_cache(maxsize=None)
def noncrossing_partitions(p: int) -> tuple[NoncrossingPartition, ...]:
    """All of NC(p), built recursively (``p <= 12`` is cheap)."""
    if p < 0:
        raise DimensionError("p must be non-negative")
    return tuple(NoncrossingPartition(bl, p) for bl in _nc_lists(tuple(range(1, p + 1))))


def partition_of(sigma: Permutation) -> tuple[tuple[int, ...], ...]:
    """Cycles of ``sigma`` as a set partition (sorted blocks)."""
    return tuple(sorted(tuple(sorted(c)) for c in sigma.cycles()))


def enumerate_geodesic(gam: Permutation) -> list[Permutation]:
    """All ``sigma`` with ``id - sigma - gam`` geodesic, for a full cycle ``gam``."""
    if not is_full_cycle(gam):
        raise DimensionError("enumerate_geodesic needs a full cycle")
    p = gam.p
    if p == 0:
        return [Permutation(())]
    order = [0]
    while len(order) < p:
        order.append(gam.arr[order[-1]])
    out = []
    for nc in noncrossing_partitions(p):
        img = list(range(p))
        for b in nc.blocks:
            pts = [order[x - 1] for x in b]
            for j, x in enumerate(pts):
                img[x] = pts[(j + 1) % len(pts)]
        out.append(Permutation.from_zero_based(img))
    return out


@lru_cache(maxsize=None)
def geodesic_permutations(p: int) -> tuple[Permutation, ...]:
    """Cached ``enumerate_geodesic(gamma(p))``."""
    return tuple(enumerate_geodesic(gamma(p)))


def kreweras(alpha: Permutation, gam: Permutation | None = None) -> Permutation:
    """Kreweras complement ``alpha^-1 gam`` of a geodesic ``alpha``."""
    if gam is None:
        gam = gamma(alpha.p)
    ident = Permutation.identity(alpha.p)
    if not is_on_geodesic(ident, alpha, gam):
        raise DimensionError("alpha is not on the geodesic id - alpha - gamma")
    return alpha.inverse() * gam


def meander_loops(alpha1: Permutation, alpha2: Permutation) -> int:
    """Loop count ``#(alpha1 (alpha2^Kr)^-1)`` for geodesic ``alpha1, alpha2``."""
    _check_same(alpha1, alpha2)
    g = gamma(alpha1.p)
    ident = Permutation.identity(alpha1.p)
    if not is_on_geodesic(ident, alpha1, g):
        raise DimensionError("alpha1 is not geodesic")
    return cycle_count(alpha1 * kreweras(alpha2, g).inverse())


def integer_partitions(p: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``p`` as non-increasing tuples, in reverse lexicographic order."""
    if largest is None:
        largest = p
    if p == 0:
        yield ()
        return
    for first in range(min(p, largest), 0, -1):
        for rest in integer_partitions(p - first, first):
            yield (first,) + rest


def class_size(shape: Sequence[int]) -> int:
    """Number of permutations with cycle type ``shape``."""
    p = sum(shape)
    denom = 1
    for r, m in _multiplicities(shape).items():
        denom *= r ** m * math.factorial(m)
    return math.factorial(p) // denom


def _multiplicities(shape):
    out: dict[int, int] = {}
    for r in shape:
        out[r] = out.get(r, 0) + 1
    return out


def permutation_array(p: int) -> np.ndarray:
    """All of S_p as a ``(p!, p)`` int8 array of 0-based images, lexicographic."""
    return np.array(list(itertools.permutations(range(p))), dtype=np.int8).reshape(-1, p)
