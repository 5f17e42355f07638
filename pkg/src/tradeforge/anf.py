"""Algebraic normal forms of block sets and the weight-class test.

A set ``S`` of blocks of a ``v``-set is the support of a Boolean function in
``y_1..y_v``; its ANF coefficient vector is the binary Moebius transform of
the indicator.  [t]-unitrades are exactly the sets whose ANF has degree at
most ``v - t - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import Unitrade, elements, is_unitrade
from .errors import ClassificationFailure, InvalidParameter, UndefinedOnEmpty, UniverseTooLarge
from .gf2span import affine_rank, affine_span

ANF_UNIVERSE_CAP = 25


@dataclass(frozen=True)
class ANF:
    """``coeffs[m]`` is the coefficient of the monomial ``prod_{i in m} y_i``."""

    v: int
    coeffs: np.ndarray

    def monomials(self) -> list[int]:
        return np.flatnonzero(self.coeffs).tolist()

    def __eq__(self, other) -> bool:
        return isinstance(other, ANF) and self.v == other.v and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.v, self.coeffs.tobytes()))

    def __str__(self) -> str:
        names = ["".join(f"y{e}" for e in elements(m)) or "1" for m in self.monomials()]
        return " + ".join(names) or "0"


def _moebius(vec: np.ndarray, v: int) -> np.ndarray:
    """In-place butterfly over GF(2); the transform is its own inverse."""
    for i in range(v):
        step = 1 << i
        view = vec.reshape(-1, 2, step)
        view[:, 1, :] ^= view[:, 0, :]
    return vec


def _check_v(v: int) -> None:
    if v < 0:
        raise InvalidParameter("negative universe size")
    if v > ANF_UNIVERSE_CAP:
        raise UniverseTooLarge(f"dense transform capped at v={ANF_UNIVERSE_CAP}, got {v}")


def anf_from_set(S: Iterable[int], v: int) -> ANF:
    _check_v(v)
    vec = np.zeros(1 << v, dtype=np.uint8)
    for m in S:
        if not 0 <= m < 1 << v:
            raise InvalidParameter(f"block {m} is not a subset of a {v}-set")
        vec[m] = 1
    return ANF(v, _moebius(vec, v))


def anf_from_monomials(monomials: Iterable[int], v: int) -> ANF:
    _check_v(v)
    vec = np.zeros(1 << v, dtype=np.uint8)
    for m in monomials:
        vec[m] ^= 1
    return ANF(v, vec)


def set_from_anf(f: ANF) -> set[int]:
    return set(np.flatnonzero(_moebius(f.coeffs.copy(), f.v)).tolist())


def degree(f: ANF) -> int:
    """Largest monomial size; ``-1`` for the zero polynomial."""
    mons = np.flatnonzero(f.coeffs)
    if not len(mons):
        return -1
    return int(np.bitwise_count(mons).max())


# --------------------------------------------------------------------------
# classification of small unitrades


@dataclass(frozen=True)
class KasamiClass:
    """``tag`` is one of ``MinAffine``, ``TypeA``, ``TypeB``, ``OutOfRange``.

    For ``TypeA``/``TypeB`` the volume is ``2**(t+1) - 2**i``.  ``OutOfRange``
    keeps the volume so callers can run their own form checks.
    """

    tag: str
    i: int | None
    expected_afrk: int | None
    volume: int
    afrk: int


def kasami_classify(U: Unitrade, t: int) -> KasamiClass:
    """Class of a nonempty [t]-unitrade by its volume and affine rank."""
    if not U.blocks:
        raise UndefinedOnEmpty("cannot classify the empty unitrade")
    if not is_unitrade(U, t):
        raise InvalidParameter(f"input is not a [{t}]-unitrade")
    vol = len(U.blocks) // 2
    rank = affine_rank(U.blocks)
    if vol == 1 << t:
        if rank != t + 1 or affine_span(U.blocks) != set(U.blocks):
            raise ClassificationFailure(f"volume {vol} set is not a {t + 1}-dim affine subspace")
        return KasamiClass("MinAffine", t, t + 1, vol, rank)
    gap = (1 << (t + 1)) - vol
    if 0 < gap < 1 << t and gap & (gap - 1) == 0:
        i = gap.bit_length() - 1
        if rank == 2 * t + 2 - i:
            return KasamiClass("TypeA", i, rank, vol, rank)
        if rank == t + 3 and t - 1 <= 2 * i and i <= t - 2:
            return KasamiClass("TypeB", i, rank, vol, rank)
        raise ClassificationFailure(
            f"volume {vol} = 2^{t + 1} - 2^{i} with affine rank {rank} fits neither form"
        )
    return KasamiClass("OutOfRange", None, None, vol, rank)


def quadratic_sum_set(pairs: int, v: int | None = None) -> set[int]:
    """Ones of ``y1y2 + y3y4 + ... `` with ``pairs`` terms."""
    v = 2 * pairs if v is None else v
    return set_from_anf(anf_from_monomials(((0b11 << (2 * k)) for k in range(pairs)), v))


def _product(first: int, count: int) -> int:
    """Monomial ``y_first ... y_(first+count-1)`` as a mask."""
    return ((1 << count) - 1) << (first - 1)


def type_a_form(m: int, mu: int, v: int) -> ANF:
    """``y_1..y_(m-mu) (y_(m-mu+1)..y_m + y_(m+1)..y_(m+mu))``."""
    if not (2 <= mu <= m and m + mu <= v):
        raise InvalidParameter(f"type A needs 2 <= mu <= m and m + mu <= v, got m={m}, mu={mu}, v={v}")
    head = _product(1, m - mu)
    return anf_from_monomials([head | _product(m - mu + 1, mu), head | _product(m + 1, mu)], v)


def type_b_form(m: int, nu: int, v: int) -> ANF:
    """``y_1..y_(m-2) (y_(m-1) y_m + y_(m+1) y_(m+2) + ...)`` with ``nu`` pairs."""
    if not (nu >= 3 and m >= 2 and m + 2 * nu - 2 <= v):
        raise InvalidParameter(f"type B needs nu >= 3, m >= 2, m + 2nu - 2 <= v, got m={m}, nu={nu}, v={v}")
    head = _product(1, m - 2)
    return anf_from_monomials([head | _product(m - 1 + 2 * k, 2) for k in range(nu)], v)
