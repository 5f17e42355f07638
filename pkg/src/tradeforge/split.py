"""Splitting a unitrade into the two legs of a simple trade.

Each block gets a sign; every set ``S`` with ``|S| <= t`` must be covered by
as many positive as negative blocks.  Search is plain backtracking: pick an
unsigned block from the tightest open constraint, and whenever a constraint
has used up its quota of one sign, force the rest of its blocks to the
other sign.
"""

from __future__ import annotations

from itertools import combinations

from .core import SignedTrade, Unitrade, bits, is_trade, is_unitrade, odd_support
from .errors import InvalidParameter, SearchBudgetExceeded

DEFAULT_SPLIT_BUDGET = 5_000_000


def _constraints(blocks: list[int], v: int, t: int) -> list[list[int]]:
    found = 0
    for b in blocks:
        found |= b
    elems = [1 << b for b in bits(found)]
    out = []
    # largest sets first: they are the tightest
    for k in range(min(t, len(elems)), -1, -1):
        for combo in combinations(elems, k):
            S = sum(combo)
            members = [j for j, b in enumerate(blocks) if b & S == S]
            if members:
                out.append(members)
    return out


def split_unitrade(U: Unitrade, t: int, budget: int = DEFAULT_SPLIT_BUDGET) -> SignedTrade | None:
    """A simple [t]-trade whose legs partition ``U``, or ``None`` if there is none.

    Raises ``SearchBudgetExceeded`` when ``budget`` search nodes were not enough.
    """
    if not is_unitrade(U, t):
        raise InvalidParameter(f"input is not a [{t}]-unitrade")
    blocks = U.sorted_blocks()
    n = len(blocks)
    if n == 0:
        return SignedTrade.void(U.v)
    cons = _constraints(blocks, U.v, t)
    half = [len(c) // 2 for c in cons]
    of_var: list[list[int]] = [[] for _ in range(n)]
    for k, c in enumerate(cons):
        for j in c:
            of_var[j].append(k)
    sign = [0] * n
    count = [[0, 0] for _ in cons]  # positives, negatives
    trail: list[int] = []
    nodes = 0

    def assign(j: int, s: int) -> bool:
        """Set ``sign[j] = s`` and propagate; False on a contradiction."""
        queue = [(j, s)]
        while queue:
            j, s = queue.pop()
            if sign[j]:
                if sign[j] != s:
                    return False
                continue
            sign[j] = s
            trail.append(j)
            side = 0 if s > 0 else 1
            for k in of_var[j]:
                count[k][side] += 1
            for k in of_var[j]:
                if count[k][side] > half[k]:
                    return False
                if count[k][side] == half[k]:
                    queue.extend((i, -s) for i in cons[k] if not sign[i])
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            j = trail.pop()
            side = 0 if sign[j] > 0 else 1
            for k in of_var[j]:
                count[k][side] -= 1
            sign[j] = 0

    def pick() -> int:
        best, best_free = -1, n + 1
        for k, c in enumerate(cons):
            free = len(c) - count[k][0] - count[k][1]
            if 0 < free < best_free:
                best_free = free
                best = next(i for i in c if not sign[i])
                if free == 1:
                    break
        return best

    def search() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"no decision after {budget} nodes")
        j = pick()
        if j < 0:
            return True
        for s in (1, -1):
            mark = len(trail)
            if assign(j, s) and search():
                return True
            undo(mark)
        return False

    # the leg swap is a symmetry, so the first block may be taken positive
    if not (assign(0, 1) and search()):
        return None
    T = SignedTrade.from_dict(U.v, dict(zip(blocks, sign)))
    plus, minus = T.legs()
    assert odd_support(plus + minus, U.v) == U and is_trade(T, t)
    return T


def brute_force_split(U: Unitrade, t: int) -> SignedTrade | None:
    """Try every signing; only for small sets."""
    blocks = U.sorted_blocks()
    n = len(blocks)
    if n > 24:
        raise InvalidParameter("brute force is limited to 24 blocks")
    for code in range(1 << max(0, n - 1)):
        signs = [1] + [1 if code >> k & 1 else -1 for k in range(n - 1)]
        T = SignedTrade.from_dict(U.v, dict(zip(blocks, signs[:n])))
        if is_trade(T, t):
            return T
    return None
