"""GF(2) linear algebra on sets of blocks.

Blocks are bitmasks, so a set of blocks is a set of vectors over GF(2) and
Gaussian elimination runs on whole ints.  The affine span of a set is its
first block XOR the linear span of the differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .core import SignedTrade, Unitrade, bits, foundation, is_trade, is_unitrade, projection
from .errors import InconsistentTrade, InvalidParameter, SpanTooLarge, UndefinedOnEmpty

SPAN_RANK_CAP = 25


@dataclass(frozen=True)
class Gf2Basis:
    """Affine subspace ``origin + span(rows)``, rows in reduced echelon form.

    Every row has a distinct leading (highest) bit and no other row has that
    bit set.
    """

    origin: int
    rows: tuple[int, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def size(self) -> int:
        return 1 << len(self.rows)

    def reduce(self, vec: int) -> int:
        """``vec`` minus its component in the row space."""
        for r in self.rows:
            if vec >> (r.bit_length() - 1) & 1:
                vec ^= r
        return vec

    def __contains__(self, block: int) -> bool:
        return self.reduce(block ^ self.origin) == 0

    def __iter__(self) -> Iterator[int]:
        for k in range(self.size):
            vec = self.origin
            for j, r in enumerate(self.rows):
                if k >> j & 1:
                    vec ^= r
            yield vec


def _echelon(vectors: Iterable[int]) -> tuple[int, ...]:
    pivots: dict[int, int] = {}  # leading bit -> row
    for vec in vectors:
        for lead in sorted(pivots, reverse=True):
            if vec >> lead & 1:
                vec ^= pivots[lead]
        if vec:
            lead = vec.bit_length() - 1
            for k, r in pivots.items():
                if r >> lead & 1:
                    pivots[k] = r ^ vec
            pivots[lead] = vec
    return tuple(pivots[k] for k in sorted(pivots, reverse=True))


def linear_rank(vectors: Iterable[int]) -> int:
    return len(_echelon(vectors))


def _blocks(S) -> list[int]:
    if isinstance(S, (SignedTrade, Unitrade)):
        return sorted(S.blocks)
    return list(S)


def affine_basis(S) -> Gf2Basis:
    """Echelon basis of the affine span of a nonempty block set."""
    blocks = _blocks(S)
    if not blocks:
        raise UndefinedOnEmpty("the empty set has no affine span")
    origin = blocks[0]
    return Gf2Basis(origin, _echelon(b ^ origin for b in blocks))


def affine_rank(S) -> int:
    """Dimension of the affine span; ``-1`` for the empty set."""
    blocks = _blocks(S)
    if not blocks:
        return -1
    return affine_basis(blocks).rank


def affine_span(S) -> set[int]:
    basis = affine_basis(S)
    if basis.rank > SPAN_RANK_CAP:
        raise SpanTooLarge(f"span of rank {basis.rank} exceeds the cap {SPAN_RANK_CAP}")
    return set(basis)


def span_complement(U: Unitrade, t: int) -> Unitrade:
    """``<U> \\ U``, again a [t]-unitrade."""
    if not U.blocks:
        raise UndefinedOnEmpty("span complement of the empty unitrade")
    if not is_unitrade(U, t):
        raise InvalidParameter(f"input is not a [{t}]-unitrade")
    span = affine_span(U.blocks)
    return Unitrade(U.v, frozenset(span - U.blocks))


def _bijective_on_span(basis: Gf2Basis, i: int) -> bool:
    keep = ~(1 << (i - 1))
    return linear_rank(r & keep for r in basis.rows) == basis.rank


def compress(T: SignedTrade) -> SignedTrade:
    """Project away elements until the foundation size equals the affine rank.

    Only projections that are injective on the affine span are used, so
    volume and affine rank are preserved.  The surviving elements are
    relabelled to ``1..afrk`` in their original order.
    """
    if not is_trade(T, 0):
        raise InconsistentTrade("compress needs a [0]-trade")
    if T.is_void():
        return T
    rank = affine_rank(T)
    while foundation(T).bit_count() > rank:
        basis = affine_basis(T)
        for b in sorted(bits(foundation(T)), reverse=True):
            if _bijective_on_span(basis, b + 1):
                T = projection(T, b + 1)
                break
        else:  # pragma: no cover - excluded by a dimension count
            raise AssertionError("no injective projection found")
    slot = {b: k for k, b in enumerate(bits(foundation(T)))}
    out = []
    for m, c in T.terms:
        k = 0
        for b in bits(m):
            k |= 1 << slot[b]
        out.append((k, c))
    return SignedTrade(T.v, tuple(sorted(out)))
