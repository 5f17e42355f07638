"""JSON Lines records for trades and unitrades.

``{"v": 3, "coeffs": [[0, 1], [3, -1]]}`` is a trade, ``{"v": 3, "blocks": [0, 3]}``
a unitrade.  Masks use bit ``i - 1`` for element ``i``.  Writers emit masks
in increasing order; readers accept any order but no repeated mask.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterator

from .core import SignedTrade, Unitrade
from .errors import TradeError


class RecordError(TradeError):
    pass


def trade_to_record(T: SignedTrade) -> dict:
    return {"v": T.v, "coeffs": [[m, c] for m, c in T.terms]}


def unitrade_to_record(U: Unitrade) -> dict:
    return {"v": U.v, "blocks": U.sorted_blocks()}


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise RecordError(f"{what} must be an integer, got {x!r}")
    return x


def trade_from_record(obj) -> SignedTrade:
    if not isinstance(obj, dict) or "coeffs" not in obj or "v" not in obj:
        raise RecordError("trade record needs 'v' and 'coeffs'")
    v = _int(obj["v"], "v")
    terms = []
    for pair in obj["coeffs"]:
        if not isinstance(pair, list) or len(pair) != 2:
            raise RecordError(f"coefficient entry {pair!r} is not a [mask, coeff] pair")
        terms.append((_int(pair[0], "mask"), _int(pair[1], "coeff")))
    if len({m for m, _ in terms}) != len(terms):
        raise RecordError("a mask appears twice")
    try:
        return SignedTrade(v, tuple(sorted(terms)))
    except (TradeError, OverflowError) as exc:
        raise RecordError(str(exc)) from exc


def unitrade_from_record(obj) -> Unitrade:
    if not isinstance(obj, dict) or "blocks" not in obj or "v" not in obj:
        raise RecordError("unitrade record needs 'v' and 'blocks'")
    v = _int(obj["v"], "v")
    blocks = [_int(b, "block") for b in obj["blocks"]]
    if len(set(blocks)) != len(blocks):
        raise RecordError("unitrade blocks must be distinct")
    try:
        return Unitrade(v, frozenset(blocks))
    except TradeError as exc:
        raise RecordError(str(exc)) from exc


@dataclass(frozen=True)
class Line:
    number: int
    value: object = None
    error: str | None = None


def read_lines(stream: IO[str], parse) -> Iterator[Line]:
    """Parse every nonblank line; failures come back as ``Line.error``."""
    for k, text in enumerate(stream, 1):
        if not text.strip():
            continue
        try:
            yield Line(k, parse(json.loads(text)))
        except (json.JSONDecodeError, RecordError) as exc:
            yield Line(k, error=str(exc))


def dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))
