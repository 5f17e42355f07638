"""Explicit trade families.

Minimal trades, parity splits of linear spans and their merges (which give
simple trades of every volume strictly between ``2 * 2**t`` and
``2.5 * 2**t`` that can occur), and the parametrised forms of every [1]-trade
of volume 3 and every [2]-trade of volume 6.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import Iterator, Sequence

from .canon import canonical_key
from .core import SignedTrade, block, is_trade, product_expand, shift, volume
from .errors import (
    InvalidMinimalForm,
    InvalidParameter,
    InvalidTemplate,
    MergePreconditionViolated,
)


def minimal_trade(X0: int, pairs: Sequence[tuple[int, int]], v: int | None = None) -> SignedTrade:
    """``X0 (X1 - Y1) ... (Xk - Yk)``: a [k-1]-trade of volume ``2**(k-1)``."""
    if not pairs:
        raise InvalidMinimalForm("need at least one pair")
    return product_expand(X0, pairs, v)


@dataclass(frozen=True)
class ParityLegSpan:
    """Linear span of independent blocks.  A block goes to the plus leg when it
    is the sum of an odd (or even) number of generators."""

    generators: tuple[int, ...]
    positive_parity: str = "odd"

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.positive_parity not in ("odd", "even"):
            raise InvalidParameter(f"parity must be 'odd' or 'even', not {self.positive_parity!r}")
        if any(g == 0 for g in self.generators) or not _pairwise_disjoint(self.generators):
            raise InvalidParameter("generators must be nonempty and pairwise disjoint")

    def _graded(self) -> list[tuple[int, int]]:
        out = [(0, 0)]
        for g in self.generators:
            out += [(m ^ g, k ^ 1) for m, k in out]
        return out

    def span(self) -> list[int]:
        return [m for m, _ in self._graded()]

    def trade(self, v: int | None = None) -> SignedTrade:
        want = 1 if self.positive_parity == "odd" else 0
        if v is None:
            v = max((g.bit_length() for g in self.generators), default=0)
        coeffs = {m: 1 if k == want else -1 for m, k in self._graded()}
        return SignedTrade.from_dict(v, coeffs)


def merge_simple(T1: SignedTrade, T2: SignedTrade, t: int | None = None) -> SignedTrade:
    """Union of the plus legs against the union of the minus legs, with the
    blocks lying on both sides cancelled.

    With disjoint plus legs and disjoint minus legs this is just ``T1 + T2``.
    """
    if not (T1.is_simple() and T2.is_simple()):
        raise MergePreconditionViolated("both trades must be simple")
    c1, c2 = T1.coeffs, T2.coeffs
    for m, c in c1.items():
        if c2.get(m) == c:
            raise MergePreconditionViolated(f"block {m} lies on the same side of both trades")
    if t is not None and not (is_trade(T1, t) and is_trade(T2, t)):
        raise MergePreconditionViolated(f"inputs must be [{t}]-trades")
    v = max(T1.v, T2.v)
    return T1.with_v(v) + T2.with_v(v)


def _e(*elems: int) -> list[int]:
    return [block(i) for i in elems]


def spectrum_trade(t: int, i: int, family: str) -> SignedTrade:
    """Simple [t]-trade of volume ``2**(t+1) + 2**(t-1) - 2**i`` (``"ii"``) or
    ``2**(t+1) + 2**(t-1) - 3 * 2**i`` (``"iii"``), built from three parity
    splits merged twice."""
    if family == "ii":
        if not (t >= 2 and 0 <= i <= t - 2):
            raise InvalidParameter(f"family ii needs t >= 2 and 0 <= i <= t-2, got t={t}, i={i}")
        g4 = _e(*range(1, i + 1), t, *range(t + 4, 2 * t - i + 4))
        want = (1 << (t + 1)) + (1 << (t - 1)) - (1 << i)
        meet14 = 1 << (i + 1)
    elif family == "iii":
        if not (t >= 3 and 0 <= i <= t - 3):
            raise InvalidParameter(f"family iii needs t >= 3 and 0 <= i <= t-3, got t={t}, i={i}")
        g4 = _e(*range(1, i + 1), t, t + 1, *range(t + 4, 2 * t - i + 3))
        want = (1 << (t + 1)) + (1 << (t - 1)) - 3 * (1 << i)
        meet14 = 1 << (i + 2)
    else:
        raise InvalidParameter(f"unknown family {family!r}")
    g1 = _e(*range(1, t + 2))
    g2 = _e(*range(1, t), t + 2, t + 3)
    v = max(g.bit_length() for g in g1 + g2 + g4)
    assert len(g4) == t + 1
    # intersection sizes from the inclusion-exclusion count
    S1, S2, S4 = (set(ParityLegSpan(g).span()) for g in (g1, g2, g4))
    assert len(S1 & S2) == 1 << (t - 1)
    assert len(S1 & S4) == meet14
    assert len(S2 & S4) == 1 << i
    assert len(S1 & S2 & S4) == 1 << i
    T1 = ParityLegSpan(tuple(g1), "odd").trade(v)
    T2 = ParityLegSpan(tuple(g2), "even").trade(v)
    T4 = ParityLegSpan(tuple(g4), "even").trade(v)
    T3 = merge_simple(T1, T2)
    T5 = merge_simple(T3, T4)
    assert len(T5.terms) == 2 * want, (len(T5.terms), want)
    if not (T5.is_simple() and is_trade(T5, t)):
        raise AssertionError(f"construction failed at t={t}, i={i}, family {family}")
    return T5


@dataclass(frozen=True)
class Spectrum:
    exists: frozenset[int]
    not_exists: frozenset[int]
    valid_below: int  # 2.5 * 2**t


def known_simple_spectrum(t: int) -> Spectrum:
    """Volumes below ``2.5 * 2**t`` split into those attained by simple
    [t]-trades and those that are impossible."""
    if t < 1:
        raise InvalidParameter("the spectrum is tabulated for t >= 1")
    top = 5 << (t - 1)
    two = 1 << (t + 1)
    exists = {0, two}
    exists |= {two - (1 << i) for i in range(t + 1)}
    exists |= {two + (1 << (t - 1)) - (1 << i) for i in range(t - 1)}
    exists |= {two + (1 << (t - 1)) - 3 * (1 << i) for i in range(t - 2)}
    exists = {x for x in exists if x < top}
    return Spectrum(frozenset(exists), frozenset(set(range(top)) - exists), top)


# --------------------------------------------------------------------------
# volume-3 and volume-6 forms


def _pairwise_disjoint(blocks: Sequence[int]) -> bool:
    seen = 0
    for b in blocks:
        if seen & b:
            return False
        seen |= b
    return True


def _xor(blocks: Sequence[int]) -> int:
    out = 0
    for b in blocks:
        out ^= b
    return out


def _universe(v: int | None, blocks: Sequence[int]) -> int:
    need = max((b.bit_length() for b in blocks), default=0)
    if v is None:
        return need
    if need > v:
        raise InvalidTemplate(f"blocks need {need} elements, universe has {v}")
    return v


def vol3_template(Y: Sequence[int], Z: Sequence[int], shift_by: int = 0,
                  v: int | None = None) -> SignedTrade:
    """Shift of ``({Y1, Y2, Y3}, {Z1, Z2, Z3})``.

    Each triple is pairwise disjoint, the triples have the same union and no
    ``Yi`` equals a ``Zj``.  A triple may repeat the empty block, which gives
    the non-simple trades of this volume.
    """
    if len(Y) != 3 or len(Z) != 3:
        raise InvalidTemplate("need three Y blocks and three Z blocks")
    if not (_pairwise_disjoint(Y) and _pairwise_disjoint(Z)):
        raise InvalidTemplate("blocks within a triple must be disjoint")
    if _xor(Y) != _xor(Z):
        raise InvalidTemplate("the triples must have the same union")
    if set(Y) & set(Z):
        raise InvalidTemplate("some Y block equals a Z block")
    v = _universe(v, [*Y, *Z, shift_by])
    return shift(SignedTrade.from_legs(v, Y, Z), shift_by)


def _poly(v: int, *factors: tuple[int, int]) -> SignedTrade:
    """``(1 - A1)(1 - A2)...`` for pairs ``(0, Ai)``; general ``(P - Q)`` pairs allowed."""
    acc = SignedTrade.monomial(v, 0)
    for p, q in factors:
        acc = acc * SignedTrade.from_dict(v, {p: 1, q: -1} if p != q else {})
    return acc


VOL6_KINDS = ("P3-3", "P2-2", "P1-3", "P1-1")


def vol6_template(kind: str, *, X: int = 0, Y: Sequence[int] = (), Z: Sequence[int] = (),
                  v: int | None = None) -> SignedTrade:
    """The four forms of [2]-trades of volume 6.

    ``P3-3``: ``(1-XY1)(1-XY2)(1-XY3) - (1-XZ1)(1-XZ2)(1-XZ3)``;
    ``P2-2``: ``(1-Y1)(1-Y2)(1-Y3) - (1-Z1)(1-Z2)(1-Z3)`` with ``Y1Y2 = Z1Z2``;
    ``P1-3``: ``(1-Y1)(1-Y2)(1-Y3) - (1-Z1)(1-Z2)(1-Y1Y2Y3)``;
    ``P1-1``: ``({Y1,Y2,Y3,XZ1,XZ2,XZ3}, {Z1,Z2,Z3,XY1,XY2,XY3})`` with ``X`` nonempty.
    Juxtaposed blocks are XORed.
    """
    Y, Z = tuple(Y), tuple(Z)
    v = _universe(v, [X, *Y, *Z])
    if kind == "P3-3":
        _need(len(Y) == 3 and len(Z) == 3, "P3-3 takes three Y and three Z blocks")
        _need(_pairwise_disjoint((X, *Y)) and _pairwise_disjoint((X, *Z)), "X, Y and X, Z must be disjoint")
        _need(all(Y + Z) and len(set(Y + Z)) == 6, "Y and Z blocks must be six distinct nonempty sets")
        _need(_xor(Y) == _xor(Z), "Y1Y2Y3 must equal Z1Z2Z3")
        return _poly(v, *((0, X ^ y) for y in Y)) - _poly(v, *((0, X ^ z) for z in Z))
    if kind == "P2-2":
        _need(len(Y) == 3 and len(Z) == 3, "P2-2 takes three Y and three Z blocks")
        _need(_pairwise_disjoint(Y) and _pairwise_disjoint(Z), "each triple must be disjoint")
        _need(all(Y + Z) and len(set(Y + Z)) == 6, "Y and Z blocks must be six distinct nonempty sets")
        _need(Y[0] ^ Y[1] == Z[0] ^ Z[1], "Y1Y2 must equal Z1Z2")
        return _poly(v, *((0, y) for y in Y)) - _poly(v, *((0, z) for z in Z))
    if kind == "P1-3":
        _need(len(Y) == 3 and len(Z) == 2, "P1-3 takes three Y and two Z blocks")
        _need(all(Y + Z) and _pairwise_disjoint(Y + Z), "Y1, Y2, Y3, Z1, Z2 must be disjoint and nonempty")
        return _poly(v, *((0, y) for y in Y)) - _poly(v, (0, Z[0]), (0, Z[1]), (0, _xor(Y)))
    if kind == "P1-1":
        _need(len(Y) == 3 and len(Z) == 3, "P1-1 takes three Y and three Z blocks")
        _need(X != 0, "X must be nonempty")
        _need(_pairwise_disjoint((X, *Y)) and _pairwise_disjoint((X, *Z)), "X, Y and X, Z must be disjoint")
        _need(_xor(Y) == _xor(Z), "Y1Y2Y3 must equal Z1Z2Z3")
        _need(not set(Y) & set(Z), "some Y block equals a Z block")
        plus = [*Y, *(X ^ z for z in Z)]
        minus = [*Z, *(X ^ y for y in Y)]
        return SignedTrade.from_legs(v, plus, minus)
    raise InvalidTemplate(f"unknown kind {kind!r}; expected one of {VOL6_KINDS}")


def _need(ok: bool, msg: str) -> None:
    if not ok:
        raise InvalidTemplate(msg)


# --------------------------------------------------------------------------
# parameter sweeps
#
# Each element of {1..v} gets a role saying which of the template's blocks
# contain it.  Relabelling elements gives an equivalent trade, so it is
# enough to run over multisets of roles.


def _role_blocks(roles: Sequence[tuple], width: int) -> list[int]:
    """``roles[e]`` lists, per block slot, whether element ``e + 1`` is in it."""
    out = [0] * width
    for e, role in enumerate(roles):
        for slot in role:
            out[slot] |= 1 << e
    return out


def _assignments(v: int, roles: Sequence[tuple]) -> Iterator[list[int]]:
    width = 1 + max((s for r in roles for s in r), default=-1)
    for combo in combinations_with_replacement(range(len(roles)), v):
        yield _role_blocks([roles[k] for k in combo], width)


# slots: 0 = X, 1..3 = Y1..Y3, 4..6 = Z1..Z3
_YZ_ROLES = [()] + [(a, b) for a, b in product((1, 2, 3), (4, 5, 6))]
_XYZ_ROLES = _YZ_ROLES + [(0,)]
_P22_ROLES = [(a, b) if a or b else () for a, b in product((0, 1, 2, 3), (0, 4, 5, 6))
              if (a in (1, 2)) == (b in (4, 5))]
_P22_ROLES = [tuple(s for s in r if s) for r in _P22_ROLES]
_P13_ROLES = [(), (1,), (2,), (3,), (4,), (5,)]


def vol3_instances(v: int) -> Iterator[SignedTrade]:
    """Every template trade on ``{1..v}`` up to relabelling (shift left at zero)."""
    for blocks in _assignments(v, _YZ_ROLES):
        blocks += [0] * (7 - len(blocks))
        try:
            yield vol3_template(blocks[1:4], blocks[4:7], v=v)
        except InvalidTemplate:
            continue


def vol6_instances(v: int, kinds: Sequence[str] = VOL6_KINDS) -> Iterator[tuple[str, SignedTrade]]:
    for kind in kinds:
        roles = {"P3-3": _XYZ_ROLES, "P2-2": _P22_ROLES, "P1-3": _P13_ROLES, "P1-1": _XYZ_ROLES}[kind]
        for blocks in _assignments(v, roles):
            blocks += [0] * (7 - len(blocks))
            X, Y = blocks[0], blocks[1:4]
            Z = blocks[4:6] if kind == "P1-3" else blocks[4:7]
            try:
                yield kind, vol6_template(kind, X=X, Y=Y, Z=Z, v=v)
            except InvalidTemplate:
                continue


def template_keys(t: int, vol: int, v: int) -> set[bytes]:
    """Canonical keys of the template trades that really are [t]-trades of volume ``vol``."""
    if (t, vol) == (1, 3):
        trades = vol3_instances(v)
    elif (t, vol) == (2, 6):
        trades = (T for _, T in vol6_instances(v))
    else:
        raise InvalidParameter("templates exist for (t, vol) = (1, 3) and (2, 6)")
    return {canonical_key(T) for T in trades if volume(T) == vol and is_trade(T, t)}
