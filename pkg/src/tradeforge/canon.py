"""Equivalence group of a ``v``-set, canonical keys and automorphism counts.

The group acts on a trade by a shift, then a relabelling of the elements,
then an optional leg swap (negation).  Its order is ``2 * 2**v * v!``.

Canonical keys are computed by searching the transforms ``g`` for which
``g(T)`` is *normalised*: it contains the empty block with a positive
coefficient, that block has the least distance profile among the blocks,
and the element invariants increase with the bit index.  Normalisation is
a property of the image, so the set of normalising transforms is a union
of cosets of ``Aut(T)``; the least serialisation among the images is the
key and the number of transforms attaining it is ``|Aut(T)|``.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Sequence

import numpy as np

from .core import SignedTrade, bits, permute, shift
from .errors import InvalidComparison


@dataclass(frozen=True)
class Transform:
    """``T -> (-1 if swap) * relabel(perm, shift(T, shift_by))``.

    ``perm[i]`` is the new 0-based bit of old bit ``i``.
    """

    perm: tuple[int, ...]
    shift_by: int = 0
    swap: bool = False

    @classmethod
    def identity(cls, v: int) -> "Transform":
        return cls(tuple(range(v)))

    def __call__(self, T: SignedTrade) -> SignedTrade:
        out = permute(shift(T, self.shift_by), self.perm)
        return -out if self.swap else out

    def apply_mask(self, mask: int) -> int:
        m = mask ^ self.shift_by
        out = 0
        for b in bits(m):
            out |= 1 << self.perm[b]
        return out

    def then(self, other: "Transform") -> "Transform":
        """The transform ``T -> other(self(T))``."""
        # other(self(T)) = s2 s1 * P2 (Y2 + P1 (Y1 + X)) = s * P2P1 (P1^-1 Y2 + Y1 + X)
        inv1 = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv1[p] = i
        pulled = 0
        for b in bits(other.shift_by):
            pulled |= 1 << inv1[b]
        perm = tuple(other.perm[p] for p in self.perm)
        return Transform(perm, self.shift_by ^ pulled, self.swap != other.swap)

    def inverse(self) -> "Transform":
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        moved = 0
        for b in bits(self.shift_by):
            moved |= 1 << self.perm[b]
        return Transform(tuple(inv), moved, self.swap)


def group_order(v: int) -> int:
    return 2 * (1 << v) * math.factorial(v)


def all_transforms(v: int):
    for swap in (False, True):
        for Y in range(1 << v):
            for perm in permutations(range(v)):
                yield Transform(perm, Y, swap)


# --------------------------------------------------------------------------
# canonical search


@dataclass(frozen=True)
class CanonicalForm:
    key: bytes
    representative: SignedTrade
    aut_size: int


def serialize(T: SignedTrade) -> bytes:
    """Big-endian: v (1 byte), block count (4), masks (4 each), coefficients (8 each)."""
    n = len(T.terms)
    head = struct.pack(">BI", T.v, n)
    masks = struct.pack(f">{n}I", *(m for m, _ in T.terms))
    coeffs = struct.pack(f">{n}q", *(c for _, c in T.terms))
    return head + masks + coeffs


def deserialize(key: bytes) -> SignedTrade:
    v, n = struct.unpack_from(">BI", key, 0)
    masks = struct.unpack_from(f">{n}I", key, 5)
    coeffs = struct.unpack_from(f">{n}q", key, 5 + 4 * n)
    return SignedTrade(v, tuple(zip(masks, coeffs)))


@lru_cache(maxsize=None)
def _cell_perms(sizes: tuple[int, ...]) -> np.ndarray:
    """Rows: new slot of the j-th element in invariant order, for every cell-respecting perm."""
    per_cell = []
    start = 0
    for s in sizes:
        per_cell.append(list(permutations(range(start, start + s))))
        start += s
    rows = [sum(choice, ()) for choice in product(*per_cell)]
    return np.array(rows, dtype=np.int64).reshape(len(rows), start)


def _block_profiles(masks: np.ndarray, coeffs: np.ndarray) -> list[tuple]:
    dist = np.bitwise_count(masks[:, None] ^ masks[None, :]).astype(np.int64)
    rel = np.sign(coeffs)[:, None] * coeffs[None, :]
    profiles = []
    for r in range(len(masks)):
        pairs = sorted(zip(dist[r].tolist(), rel[r].tolist()))
        profiles.append((abs(int(coeffs[r])), tuple(pairs)))
    return profiles


def _element_invariants(masks: np.ndarray, coeffs: np.ndarray, v: int) -> list[tuple]:
    weights = np.bitwise_count(masks).tolist()
    cl = coeffs.tolist()
    inv = []
    for b in range(v):
        member = ((masks >> b) & 1).astype(bool).tolist()
        inv.append(tuple(sorted((w, c) for w, c, mem in zip(weights, cl, member) if mem)))
    return inv


def _refine(masks: np.ndarray, coeffs: np.ndarray, v: int, inv: list[tuple]) -> list[tuple]:
    """One colour-refinement round: add the multiset of co-member colours per block."""
    colour = {c: k for k, c in enumerate(sorted(set(inv)))}
    col = [colour[c] for c in inv]
    mlist = masks.tolist()
    cl = coeffs.tolist()
    block_sig = [tuple(sorted(col[b] for b in bits(m))) for m in mlist]
    out = []
    for b in range(v):
        bit = 1 << b
        out.append((col[b], tuple(sorted((sig, c) for m, c, sig in zip(mlist, cl, block_sig) if m & bit))))
    return out


def _best_for_anchor(masks: np.ndarray, coeffs: np.ndarray, v: int):
    """Least serialisation over cell-respecting relabellings of a normalised trade.

    Returns the sorted masks, their coefficients, and the relabellings
    (as bit -> new bit tuples) attaining it.
    """
    inv = _element_invariants(masks, coeffs, v)
    for _ in range(v):
        ncells = len(set(inv))
        if ncells == v:
            break
        new = _refine(masks, coeffs, v, inv)
        if len(set(new)) == ncells:
            break
        inv = new
    order = sorted(range(v), key=lambda b: inv[b])
    sizes: list[int] = []
    prev = object()
    for b in order:
        if inv[b] == prev:
            sizes[-1] += 1
        else:
            sizes.append(1)
            prev = inv[b]
    slots = _cell_perms(tuple(sizes))
    bit_matrix = (masks[:, None] >> np.array(order, dtype=np.int64)[None, :]) & 1
    new_masks = bit_matrix @ (np.int64(1) << slots).T  # (n, P)
    idx = np.argsort(new_masks, axis=0, kind="stable")
    sorted_masks = np.take_along_axis(new_masks, idx, axis=0)
    table = np.vstack([sorted_masks, coeffs[idx]])  # (2n, P)
    best = table[:, np.lexsort(table[::-1])[0]]
    ties = np.flatnonzero(np.all(table == best[:, None], axis=0))
    n = len(masks)
    return tuple(best[:n].tolist()), tuple(best[n:].tolist()), order, slots[ties]


def _relabelling(order: list[int], slot_row: np.ndarray) -> tuple[int, ...]:
    perm = [0] * len(order)
    for j, b in enumerate(order):
        perm[b] = int(slot_row[j])
    return tuple(perm)


def _search(T: SignedTrade, collect: bool):
    v = T.v
    masks = np.array([m for m, _ in T.terms], dtype=np.int64)
    coeffs = np.array([c for _, c in T.terms], dtype=np.int64)
    profiles = _block_profiles(masks, coeffs)
    least = min(profiles)
    best = None
    aut = 0
    winners: list[tuple[int, int, list[int], np.ndarray]] = []
    for r, prof in enumerate(profiles):
        if prof != least:
            continue
        sign = 1 if coeffs[r] > 0 else -1
        bm, bc, order, tie_slots = _best_for_anchor(masks ^ masks[r], coeffs * sign, v)
        key = (bm, bc)
        if best is None or key < best:
            best, aut = key, len(tie_slots)
            winners = []
        elif key == best:
            aut += len(tie_slots)
        else:
            continue
        if collect:
            winners.append((int(masks[r]), sign, order, tie_slots))
    rep = SignedTrade(v, tuple(zip(best[0], best[1])))
    transforms = []
    for anchor, sign, order, tie_slots in winners:
        for row in tie_slots:
            transforms.append(Transform(_relabelling(order, row), anchor, sign < 0))
    return CanonicalForm(serialize(rep), rep, aut), transforms


def canonical_form(T: SignedTrade) -> CanonicalForm:
    if T.is_void():
        return CanonicalForm(serialize(T), T, group_order(T.v))
    return _search(T, False)[0]


def canonicalizing_transforms(T: SignedTrade) -> list[Transform]:
    """Every transform sending ``T`` to its canonical representative."""
    if T.is_void():
        return list(all_transforms(T.v))
    return _search(T, True)[1]


def automorphisms(T: SignedTrade) -> list[Transform]:
    """All transforms fixing ``T``."""
    if T.is_void():
        return list(all_transforms(T.v))
    found = _search(T, True)[1]
    back = found[0].inverse()
    return [g.then(back) for g in found]


def canonical_key(T: SignedTrade) -> bytes:
    return canonical_form(T).key


def aut_size(T: SignedTrade) -> int:
    return canonical_form(T).aut_size


def orbit_size(T: SignedTrade) -> int:
    return group_order(T.v) // aut_size(T)


def are_equivalent(T1: SignedTrade, T2: SignedTrade) -> bool:
    if T1.v != T2.v:
        raise InvalidComparison(f"universe sizes differ: {T1.v} vs {T2.v}")
    return canonical_key(T1) == canonical_key(T2)


# --------------------------------------------------------------------------
# labeled orbits (dense)


@lru_cache(maxsize=None)
def perm_table(v: int) -> np.ndarray:
    """``table[p, mask]``: image of ``mask`` under the p-th permutation of ``range(v)``."""
    perms = np.array(list(permutations(range(v))), dtype=np.int64).reshape(-1, v)
    masks = np.arange(1 << v, dtype=np.int64)
    bitm = (masks[:, None] >> np.arange(v)[None, :]) & 1  # (2^v, v)
    return np.ascontiguousarray((bitm @ (np.int64(1) << perms).T).T)


def dense(T: SignedTrade, v: int | None = None) -> np.ndarray:
    v = T.v if v is None else v
    out = np.zeros(1 << v, dtype=np.int64)
    for m, c in T.terms:
        out[m] = c
    return out


def from_dense(vec: Sequence[int], v: int) -> SignedTrade:
    vec = np.asarray(vec)
    nz = np.flatnonzero(vec)
    return SignedTrade(v, tuple((int(m), int(vec[m])) for m in nz))


def labeled_orbit(T: SignedTrade, dtype=np.int8) -> np.ndarray:
    """All distinct images of ``T`` under the group, as dense rows of length ``2**v``."""
    v = T.v
    size = 1 << v
    if T.is_void():
        return np.zeros((1, size), dtype=dtype)
    masks = np.array([m for m, _ in T.terms], dtype=np.int64)
    coeffs = np.array([c for _, c in T.terms], dtype=dtype)
    images = perm_table(v)  # (v!, 2^v)
    shifted = masks[None, :] ^ np.arange(size, dtype=np.int64)[:, None]  # (2^v, n)
    moved = images[:, shifted].reshape(-1, len(masks))  # (v! * 2^v, n)
    rows = np.zeros((moved.shape[0], size), dtype=dtype)
    np.put_along_axis(rows, moved, np.broadcast_to(coeffs, moved.shape), axis=1)
    rows = np.unique(rows, axis=0)
    return np.unique(np.vstack([rows, -rows]), axis=0)
