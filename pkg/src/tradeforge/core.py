"""Blocks, signed trades, unitrades and the elementary trade algebra.

A block is a plain ``int`` bitmask: bit ``i - 1`` set means element ``i`` is in
the block.  XOR of masks is the symmetric difference of the blocks, which is
the group operation of the group ring the trades live in.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    InconsistentTrade,
    InvalidMinimalForm,
    InvalidParameter,
    UndefinedOnVoid,
)

BLOCK_CAPACITY = 32
_COEFF_LIMIT = 1 << 63
# dense superset-sum transform above this foundation size costs too much memory
_DENSE_FOUNDATION_CAP = 22


# --------------------------------------------------------------------------
# blocks


def popcount(mask: int) -> int:
    return mask.bit_count()


def block(*elements: int) -> int:
    """Mask of the block containing the given 1-based elements."""
    mask = 0
    for e in elements:
        if not 1 <= e <= BLOCK_CAPACITY:
            raise InvalidParameter(f"element {e} outside 1..{BLOCK_CAPACITY}")
        mask |= 1 << (e - 1)
    return mask


def elements(mask: int) -> list[int]:
    """1-based elements of a block, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def bits(mask: int) -> Iterator[int]:
    """0-based bit positions set in ``mask``."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_tuple_string(mask: int, v: int) -> str:
    """Characteristic tuple, element 1 leftmost: {2,3,6}, v=7 -> '0110010'."""
    return "".join("1" if mask >> i & 1 else "0" for i in range(v))


def from_tuple_string(s: str) -> int:
    mask = 0
    for i, ch in enumerate(s):
        if ch == "1":
            mask |= 1 << i
        elif ch != "0":
            raise InvalidParameter(f"bad tuple character {ch!r}")
    return mask


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` (including 0 and ``mask``)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


# --------------------------------------------------------------------------
# value types


def _check_mask(mask: int, v: int) -> None:
    if mask < 0 or mask >> v:
        raise InvalidParameter(f"block {mask:#x} does not fit a {v}-element universe")


@dataclass(frozen=True)
class SignedTrade:
    """Integer-valued function on the blocks of a ``v``-set.

    ``terms`` holds ``(mask, coefficient)`` pairs with nonzero coefficients,
    sorted by mask.  Positive coefficients are multiplicities in the plus
    leg, negative ones in the minus leg.
    """

    v: int
    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if not 0 <= self.v <= BLOCK_CAPACITY:
            raise InvalidParameter(f"universe size {self.v} outside 0..{BLOCK_CAPACITY}")
        prev = -1
        for mask, c in self.terms:
            _check_mask(mask, self.v)
            if mask <= prev:
                raise InvalidParameter("terms must be strictly increasing in mask")
            if c == 0:
                raise InvalidParameter("zero coefficient stored")
            if not -_COEFF_LIMIT <= c < _COEFF_LIMIT:
                raise OverflowError(f"coefficient {c} exceeds 64-bit range")
            prev = mask

    @classmethod
    def from_dict(cls, v: int, coeffs: Mapping[int, int]) -> "SignedTrade":
        return cls(v, tuple(sorted((m, c) for m, c in coeffs.items() if c)))

    @classmethod
    def from_legs(cls, v: int, plus: Iterable[int], minus: Iterable[int]) -> "SignedTrade":
        acc: Counter = Counter()
        for m in plus:
            acc[m] += 1
        for m in minus:
            acc[m] -= 1
        return cls.from_dict(v, acc)

    @classmethod
    def monomial(cls, v: int, mask: int, coeff: int = 1) -> "SignedTrade":
        return cls.from_dict(v, {mask: coeff})

    @classmethod
    def void(cls, v: int) -> "SignedTrade":
        return cls(v)

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self.terms)

    @property
    def blocks(self) -> list[int]:
        return [m for m, _ in self.terms]

    def is_void(self) -> bool:
        return not self.terms

    def is_simple(self) -> bool:
        return all(abs(c) == 1 for _, c in self.terms)

    def legs(self) -> tuple[list[int], list[int]]:
        """Plus and minus legs as sorted multisets (lists with repeats)."""
        plus, minus = [], []
        for m, c in self.terms:
            (plus if c > 0 else minus).extend([m] * abs(c))
        return plus, minus

    def with_v(self, v: int) -> "SignedTrade":
        return SignedTrade(v, self.terms)

    def __neg__(self) -> "SignedTrade":
        return SignedTrade(self.v, tuple((m, -c) for m, c in self.terms))

    def __add__(self, other: "SignedTrade") -> "SignedTrade":
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return SignedTrade.from_dict(max(self.v, other.v), acc)

    def __sub__(self, other: "SignedTrade") -> "SignedTrade":
        return self + (-other)

    def __mul__(self, other):
        """Group-ring product (XOR convolution); ints scale coefficients."""
        if isinstance(other, int):
            return SignedTrade.from_dict(self.v, {m: c * other for m, c in self.terms})
        acc: dict[int, int] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                k = m1 ^ m2
                acc[k] = acc.get(k, 0) + c1 * c2
        return SignedTrade.from_dict(max(self.v, other.v), acc)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            name = "".join(f"x{e}" for e in elements(m)) or "1"
            mag = abs(c)
            body = name if mag == 1 else (f"{mag}" if m == 0 else f"{mag}{name}")
            parts.append(("-" if c < 0 else "+") + body)
        s = "".join(parts)
        return s[1:] if s[0] == "+" else s


@dataclass(frozen=True)
class Unitrade:
    """Plain set of blocks of a ``v``-set."""

    v: int
    blocks: frozenset[int] = frozenset()

    def __post_init__(self):
        if not 0 <= self.v <= BLOCK_CAPACITY:
            raise InvalidParameter(f"universe size {self.v} outside 0..{BLOCK_CAPACITY}")
        object.__setattr__(self, "blocks", frozenset(self.blocks))
        for m in self.blocks:
            _check_mask(m, self.v)

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def volume(self) -> int:
        return len(self.blocks) // 2

    def sorted_blocks(self) -> list[int]:
        return sorted(self.blocks)


def one(v: int) -> SignedTrade:
    return SignedTrade.monomial(v, 0)


def x(i: int, v: int) -> SignedTrade:
    """The singleton block ``{i}`` as a group-ring element."""
    return SignedTrade.monomial(v, block(i))


# --------------------------------------------------------------------------
# definition checks


def _compress(masks: np.ndarray, found: int) -> np.ndarray:
    out = np.zeros_like(masks)
    for j, b in enumerate(bits(found)):
        out |= ((masks >> b) & 1) << j
    return out


def _superset_sums(terms: Sequence[tuple[int, int]], found: int) -> np.ndarray:
    """Entry S (in compressed foundation coordinates) = sum of coefficients of blocks containing S."""
    k = found.bit_count()
    arr = np.zeros(1 << k, dtype=np.int64)
    masks = np.array([m for m, _ in terms], dtype=np.int64)
    coeffs = np.array([c for _, c in terms], dtype=np.int64)
    np.add.at(arr, _compress(masks, found), coeffs)
    for j in range(k):
        view = arr.reshape(-1, 2, 1 << j)
        view[:, 0, :] += view[:, 1, :]
    return arr


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}


def popcount_table(k: int) -> np.ndarray:
    """Popcounts of 0 .. 2**k - 1."""
    tab = _POPCOUNT_CACHE.get(k)
    if tab is None:
        tab = np.zeros(1 << k, dtype=np.int8)
        for j in range(k):
            tab[1 << j: 2 << j] = tab[: 1 << j] + 1
        _POPCOUNT_CACHE[k] = tab
    return tab


def _check_t(t: int, v: int) -> None:
    if t < 0 or t > v:
        raise InvalidParameter(f"strength t={t} outside 0..v={v}")


def _violations(terms: Sequence[tuple[int, int]], t: int, modulus: int | None) -> bool:
    """True if some |S| <= t has a nonzero (mod ``modulus``) superset sum."""
    if not terms:
        return False
    found = 0
    for m, _ in terms:
        found |= m
    k = found.bit_count()
    if k <= _DENSE_FOUNDATION_CAP:
        sums = _superset_sums(terms, found)
        small = popcount_table(k) <= t
        vals = sums[small]
        if modulus is not None:
            vals = vals % modulus
        return bool(np.any(vals))
    elems = list(bits(found))
    for size in range(min(t, k) + 1):
        for combo in combinations(elems, size):
            s = 0
            for b in combo:
                s |= 1 << b
            total = sum(c for m, c in terms if m & s == s)
            if (total % modulus if modulus else total) != 0:
                return True
    return False


def is_trade(T: SignedTrade, t: int) -> bool:
    """Every ``S`` with ``|S| <= t`` is covered equally by both legs."""
    _check_t(t, T.v)
    return not _violations(T.terms, t, None)


def is_unitrade(U: Unitrade, t: int) -> bool:
    """Every ``S`` with ``|S| <= t`` lies in an even number of blocks."""
    _check_t(t, U.v)
    return not _violations([(m, 1) for m in sorted(U.blocks)], t, 2)


def max_strength(T: SignedTrade) -> int:
    """Largest ``t`` with ``is_trade(T, t)``; -1 if not even a [0]-trade, ``v`` for void."""
    best = -1
    for t in range(T.v + 1):
        if not is_trade(T, t):
            break
        best = t
    return best


# --------------------------------------------------------------------------
# parameters


def volume(T: SignedTrade) -> int:
    return sum(c for _, c in T.terms if c > 0)


def foundation(T: SignedTrade) -> int:
    found = 0
    for m, _ in T.terms:
        found |= m
    return found


def replication(T: SignedTrade, alpha: int, beta: int = 0) -> int:
    """Plus-leg multiplicity of blocks containing ``alpha`` and missing ``beta``."""
    return sum(c for m, c in T.terms if c > 0 and m & alpha == alpha and not m & beta)


def _require_balanced(T: SignedTrade) -> None:
    if sum(c for _, c in T.terms) != 0:
        raise InconsistentTrade("legs have different sizes")


@dataclass(frozen=True)
class TradeStats:
    volume: int
    foundation: int
    replications: dict[int, int]  # element (1-based) -> r_i

    def odd_replication_count(self) -> int:
        return sum(1 for r in self.replications.values() if r % 2)


def stats(T: SignedTrade) -> TradeStats:
    """Volume, foundation and per-element replications of a [0]-trade."""
    _require_balanced(T)
    found = foundation(T)
    reps = {b + 1: replication(T, 1 << b) for b in bits(found)}
    return TradeStats(volume(T), found, reps)


# --------------------------------------------------------------------------
# transformations


def shift(T: SignedTrade, Y: int) -> SignedTrade:
    _check_mask(Y, T.v)
    return SignedTrade(T.v, tuple(sorted((m ^ Y, c) for m, c in T.terms)))


def projection(T: SignedTrade, i: int) -> SignedTrade:
    """Remove element ``i`` from every block, merging coefficients."""
    if not 1 <= i <= T.v:
        raise InvalidParameter(f"element {i} outside 1..{T.v}")
    keep = ~(1 << (i - 1))
    acc: dict[int, int] = {}
    for m, c in T.terms:
        k = m & keep
        acc[k] = acc.get(k, 0) + c
    return SignedTrade.from_dict(T.v, acc)


def is_degenerate(T: SignedTrade) -> bool:
    """True if some projection keeps the volume, i.e. ``T`` is an extension."""
    _require_balanced(T)
    if T.is_void():
        raise UndefinedOnVoid("degeneracy is undefined for the void trade")
    vol = volume(T)
    return any(volume(projection(T, b + 1)) == vol for b in bits(foundation(T)))


def has_parallel_elements(T: SignedTrade) -> bool:
    """True if two elements that split the blocks do so identically.

    Elements ``i != j`` are parallel when, over the blocks of ``T``, ``i`` is
    in exactly the blocks containing ``j``, or exactly those missing ``j``.
    Elements in all or none of the blocks are ignored.  Such a trade is
    obtained from one on fewer elements by substituting ``x_i x_j`` (up to
    shift) for ``x_i``.
    """
    _require_balanced(T)
    if T.is_void():
        raise UndefinedOnVoid("degeneracy is undefined for the void trade")
    masks = T.blocks
    full = (1 << len(masks)) - 1
    seen: set[int] = set()
    for b in range(T.v):
        col = 0
        for k, m in enumerate(masks):
            if m >> b & 1:
                col |= 1 << k
        if col in (0, full):
            continue
        key = min(col, col ^ full)
        if key in seen:
            return True
        seen.add(key)
    return False


def restrict(T: SignedTrade, alpha: int, beta: int) -> SignedTrade:
    """Blocks containing ``alpha`` and disjoint from ``beta``, unmodified."""
    if alpha & beta:
        raise InvalidParameter("alpha and beta must be disjoint")
    return SignedTrade(
        T.v, tuple((m, c) for m, c in T.terms if m & alpha == alpha and not m & beta)
    )


def reduce(T: SignedTrade) -> SignedTrade:
    """Shift by the set of elements whose replication exceeds half the volume."""
    _require_balanced(T)
    if T.is_void():
        raise UndefinedOnVoid("reduce is undefined for the void trade")
    vol = volume(T)
    heavy = 0
    for b in bits(foundation(T)):
        if 2 * replication(T, 1 << b) > vol:
            heavy |= 1 << b
    return shift(T, heavy)


def permute(T: SignedTrade, perm: Sequence[int]) -> SignedTrade:
    """Relabel elements: 0-based bit ``i`` goes to bit ``perm[i]``."""
    out = []
    for m, c in T.terms:
        k = 0
        for b in bits(m):
            k |= 1 << perm[b]
        out.append((k, c))
    out.sort()
    return SignedTrade(T.v, tuple(out))


def product_expand(
    X0: int, factors: Sequence[tuple[int, int]], v: int | None = None
) -> SignedTrade:
    """Expand ``X0 (X1 - Y1) ... (Xk - Yk)`` for pairwise disjoint blocks."""
    parts = [X0]
    for Xi, Yi in factors:
        if not Xi | Yi:
            raise InvalidMinimalForm("factor with X_i and Y_i both empty")
        parts.extend([Xi, Yi])
    union = 0
    for p in parts:
        if union & p:
            raise InvalidMinimalForm("blocks of a minimal form must be pairwise disjoint")
        union |= p
    if v is None:
        v = union.bit_length()
    acc = SignedTrade.monomial(v, X0)
    for Xi, Yi in factors:
        acc = acc * SignedTrade.from_dict(v, {Xi: 1, Yi: -1})
    return acc


def odd_support(multiset: Iterable[int], v: int) -> Unitrade:
    """Blocks of odd multiplicity."""
    counts = Counter(multiset)
    return Unitrade(v, frozenset(m for m, n in counts.items() if n % 2))


def legs_union(T: SignedTrade) -> Unitrade:
    """``odd(T+ ⊎ T-)``; for a simple trade this is the union of the legs."""
    return Unitrade(T.v, frozenset(m for m, c in T.terms if c % 2))


def split_at(T: SignedTrade, i: int) -> tuple[SignedTrade, SignedTrade]:
    """``(P, P')`` with ``T = P + x_i P'`` and ``i`` absent from both."""
    bit = 1 << (i - 1)
    P = {m: c for m, c in T.terms if not m & bit}
    Pp = {m ^ bit: c for m, c in T.terms if m & bit}
    return SignedTrade.from_dict(T.v, P), SignedTrade.from_dict(T.v, Pp)
