"""Recursive enumeration of volume-capped [t]-trades up to equivalence.

A [t]-trade ``T`` on ``{1..v}`` splits at element ``v`` as
``T = T' - (1 - x_v) T''`` where ``T'`` is its ``v``-projection (a [t]-trade on
``v - 1`` elements) and ``T''`` collects the blocks containing ``v`` (a
[t-1]-trade).  Up to the ``x_v``-shift, ``vol(T'') <= vol(T) / 2``.  So the
classes at ``(t, v, cap)`` come from class representatives ``T'`` at
``(t, v - 1, cap)`` combined with *all labeled* ``T''`` at
``(t - 1, v - 1, cap // 2)``.

Labeled trades on ``2^[w]`` are held as dense ``int8`` rows of length ``2**w``
indexed by block mask.
"""

from __future__ import annotations

import logging
import os
import random
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from .canon import (
    Transform,
    automorphisms,
    canonical_form,
    dense,
    deserialize,
    from_dense,
    group_order,
    labeled_orbit,
)
from .core import (
    SignedTrade,
    foundation,
    has_parallel_elements,
    is_degenerate,
    is_trade,
    stats,
    volume,
)
from .errors import EnumerationAborted, InvalidParameter

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 20_000_000
_ORBIT_GENERATORS = 12
DEGENERACY_DEFINITIONS = ("parallel", "projection")


def default_budget() -> int:
    return int(os.environ.get("TRADEFORGE_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class LevelSpec:
    """All [t]-trades with foundation inside ``{1..v}`` and volume ``<= vol_cap``."""

    t: int
    v: int
    vol_cap: int

    def __post_init__(self):
        if self.t < 0 or self.v < 0 or self.vol_cap < 0:
            raise InvalidParameter(f"negative level parameter in {self}")

    def parents(self) -> tuple["LevelSpec", "LevelSpec"]:
        return (
            LevelSpec(self.t, self.v - 1, self.vol_cap),
            LevelSpec(self.t - 1, self.v - 1, self.vol_cap // 2),
        )


@dataclass(frozen=True)
class ClassRecord:
    key: bytes
    representative: SignedTrade
    aut_size: int
    volume: int
    simple: bool
    degenerate: bool  # two parallel elements
    extension: bool  # some projection keeps the volume

    def flag(self, definition: str) -> bool:
        return self.degenerate if definition == "parallel" else self.extension

    @property
    def foundation_size(self) -> int:
        return foundation(self.representative).bit_count()


@dataclass(frozen=True)
class CellCounts:
    all: int = 0
    nondegenerate: int = 0
    simple: int = 0
    nondegenerate_simple: int = 0

    def format(self) -> str:
        return f"{self.all}({self.nondegenerate}) {self.simple}({self.nondegenerate_simple})"


@dataclass
class ClassTable:
    spec: LevelSpec
    records: list[ClassRecord] = field(default_factory=list)
    labeled_total: int = 0  # labeled solutions counted during generation

    def volumes(self) -> list[int]:
        return sorted({r.volume for r in self.records})

    def by_volume(self, vol: int) -> list[ClassRecord]:
        return [r for r in self.records if r.volume == vol]

    def counts(self, vol: int, definition: str = "parallel") -> CellCounts:
        """Cell counts; ``definition`` picks the degeneracy notion for the
        bracketed numbers (``"parallel"`` or ``"projection"``)."""
        if definition not in DEGENERACY_DEFINITIONS:
            raise InvalidParameter(f"unknown degeneracy definition {definition!r}")
        recs = self.by_volume(vol)
        if vol == 0:
            return CellCounts(len(recs), len(recs), len(recs), len(recs))
        return CellCounts(
            len(recs),
            sum(not r.flag(definition) for r in recs),
            sum(r.simple for r in recs),
            sum(r.simple and not r.flag(definition) for r in recs),
        )

    def keys(self) -> set[bytes]:
        return {r.key for r in self.records}


def _make_record(key: bytes, aut: int) -> ClassRecord:
    rep = deserialize(key)
    vol = volume(rep)
    return ClassRecord(
        key=key,
        representative=rep,
        aut_size=aut,
        volume=vol,
        simple=rep.is_simple(),
        degenerate=False if rep.is_void() else has_parallel_elements(rep),
        extension=False if rep.is_void() else is_degenerate(rep),
    )


# --------------------------------------------------------------------------
# labeled [0]-trades


def labeled_zero_trades(w: int, cap: int) -> np.ndarray:
    """Every [0]-trade on ``2^[w]`` of volume at most ``cap``, as dense rows."""
    size = 1 << w
    rows = [np.zeros(size, dtype=np.int8)]
    for k in range(1, cap + 1):
        plus_sets = list(combinations_with_replacement(range(size), k))
        for plus in plus_sets:
            taken = set(plus)
            for minus in plus_sets:
                if taken.isdisjoint(minus):
                    r = np.zeros(size, dtype=np.int8)
                    np.add.at(r, list(plus), 1)
                    np.add.at(r, list(minus), -1)
                    rows.append(r)
    return np.array(rows, dtype=np.int8)


def _classes_by_orbit_marking(rows: np.ndarray, v: int) -> dict[bytes, int]:
    seen: set[bytes] = set()
    found: dict[bytes, int] = {}
    for r in rows:
        if r.tobytes() in seen:
            continue
        T = from_dense(r, v)
        cf = canonical_form(T)
        found[cf.key] = cf.aut_size
        seen.update(o.tobytes() for o in labeled_orbit(T))
    return found


# --------------------------------------------------------------------------
# orbit reduction of candidate T'' under Aut(T')


def _index_map(g: Transform, w: int) -> np.ndarray:
    """``src`` with ``image[g(m)] = row[m]``, i.e. ``image = row[src]``."""
    src = np.empty(1 << w, dtype=np.int64)
    for m in range(1 << w):
        src[g.apply_mask(m)] = m
    return src


_HASH_CHUNK = 1 << 16


def _row_hashes(rows: np.ndarray, weights: np.ndarray) -> np.ndarray:
    out = np.empty(len(rows), dtype=np.uint64)
    for lo in range(0, len(rows), _HASH_CHUNK):
        part = rows[lo: lo + _HASH_CHUNK].astype(np.int64).view(np.uint64)
        out[lo: lo + _HASH_CHUNK] = part @ weights
    return out


def _orbit_representatives(
    cand: np.ndarray, tprime: np.ndarray, gens: list[Transform], w: int
) -> np.ndarray:
    """Indices of one candidate per orbit of the group generated by ``gens``
    together with the ``x_v``-shift involution ``T'' -> T' - T''``.

    Rows are located by a wrapping linear hash and every hit is confirmed
    exactly, so a collision can only leave two orbit pieces unmerged.
    """
    m = len(cand)
    if m <= 1:
        return np.arange(m)
    weights = np.random.default_rng(12345).integers(1, 2**63, size=cand.shape[1], dtype=np.uint64) | np.uint64(1)
    with np.errstate(over="ignore"):
        h = _row_hashes(cand, weights)
    order = np.argsort(h, kind="stable")
    hs = h[order]
    del h
    maps = [(_index_map(g, w), -1 if g.swap else 1) for g in gens]
    maps.append((None, 0))
    comp = np.arange(m)
    links = []
    for src, sign in maps:
        to = np.full(m, -1, dtype=np.int64)
        for lo in range(0, m, _HASH_CHUNK):
            part = cand[lo: lo + _HASH_CHUNK]
            if src is None:
                img = (tprime[None, :] - part).astype(np.int8)
            else:
                img = (part[:, src] * sign).astype(np.int8)
            with np.errstate(over="ignore"):
                hi = _row_hashes(img, weights)
            pos = np.minimum(np.searchsorted(hs, hi), m - 1)
            hit = order[pos]
            good = (hs[pos] == hi) & np.all(cand[hit] == img, axis=1)
            to[lo: lo + len(part)] = np.where(good, hit, -1)
        ok = to >= 0
        links.append((np.flatnonzero(ok), to[ok]))
    while True:
        before = comp.copy()
        for a, b in links:
            low = np.minimum(comp[a], comp[b])
            np.minimum.at(comp, a, low)
            np.minimum.at(comp, b, low)
        comp = comp[comp]
        if np.array_equal(comp, before):
            break
    return np.flatnonzero(comp == np.arange(m))


def _generators(T: SignedTrade, rng: random.Random) -> list[Transform]:
    auts = automorphisms(T)
    auts = [g for g in auts if g != Transform.identity(T.v)]
    if len(auts) <= _ORBIT_GENERATORS:
        return auts
    return rng.sample(auts, _ORBIT_GENERATORS)


# --------------------------------------------------------------------------
# the recursive step


def _combine(tprime: SignedTrade, aut_prime: int, L: np.ndarray, volL: np.ndarray,
             spec: LevelSpec, rng: random.Random):
    """Classes from one representative ``T'``; also returns the labeled count."""
    w = spec.v - 1
    cap, half = spec.vol_cap, spec.vol_cap // 2
    found: dict[bytes, int] = {}
    d = np.zeros(1 << w, dtype=np.int16)
    for m, c in tprime.terms:
        d[m] = c
    labeled = 0
    cand_rows = []
    chunk = max(1, 4_000_000 // max(1, L.shape[1]))
    for lo in range(0, len(L), chunk):
        Lc = L[lo: lo + chunk]
        P = d[None, :] - Lc
        volP = np.clip(P, 0, None).sum(axis=1)
        vl = volL[lo: lo + chunk]
        ok = volP + vl <= cap
        labeled += int(ok.sum()) + int((ok & (volP > half)).sum())
        keep = ok & (vl <= volP)
        cand_rows.append(Lc[keep])
    cand = np.concatenate(cand_rows) if cand_rows else np.zeros((0, 1 << w), np.int8)
    reps = _orbit_representatives(cand, d.astype(np.int8), _generators(tprime, rng), w)
    for i in reps:
        Tpp = cand[i].astype(np.int64)
        row = np.concatenate([d.astype(np.int64) - Tpp, Tpp])
        cf = canonical_form(from_dense(row, spec.v))
        found.setdefault(cf.key, cf.aut_size)
    factor = group_order(w) // aut_prime
    return found, labeled * factor, len(cand), len(reps)


_POOL_STATE: dict = {}


def _pool_task(args):
    terms, w, aut_prime, spec = args
    rng = random.Random(hash(terms) & 0xFFFF)
    tprime = SignedTrade(w, terms)
    found, labeled, _, _ = _combine(tprime, aut_prime, _POOL_STATE["L"], _POOL_STATE["volL"], spec, rng)
    return found, labeled


class Enumerator:
    """Memoising driver for the recursion; levels and labeled sets are cached."""

    def __init__(self, budget: int | None = None, jobs: int = 1):
        self.budget = default_budget() if budget is None else budget
        self.jobs = max(1, jobs)
        self._levels: dict[LevelSpec, ClassTable] = {}
        self._labeled: dict[LevelSpec, np.ndarray] = {}

    def level(self, spec: LevelSpec) -> ClassTable:
        table = self._levels.get(spec)
        if table is None:
            table = self._compute(spec)
            self._levels[spec] = table
        return table

    def levels(self) -> dict[LevelSpec, ClassTable]:
        """Every level computed so far, including the parents of requested ones."""
        return dict(self._levels)

    def drop_labeled(self) -> None:
        """Free the dense labeled rows; class tables stay cached."""
        self._labeled.clear()

    def labeled(self, spec: LevelSpec) -> np.ndarray:
        """All distinct labeled trades of a level, dense rows over ``2^[v]``."""
        rows = self._labeled.get(spec)
        if rows is not None:
            return rows
        if spec.t == 0:
            rows = labeled_zero_trades(spec.v, spec.vol_cap)
        else:
            table = self.level(spec)
            total = sum(group_order(spec.v) // r.aut_size for r in table.records)
            self._check_budget(total, spec)
            rows = np.concatenate([labeled_orbit(r.representative) for r in table.records])
        self._check_budget(len(rows), spec)
        self._labeled[spec] = rows
        return rows

    def _check_budget(self, n: int, spec: LevelSpec) -> None:
        if n > self.budget:
            raise EnumerationAborted(
                f"{n} labeled trades at {spec} exceed the budget of {self.budget}", partial=False
            )

    def _compute(self, spec: LevelSpec) -> ClassTable:
        if spec.t == 0 or spec.v == 0:
            # with no elements left only the void trade is a [t]-trade, t >= 1
            rows = self.labeled(LevelSpec(0, spec.v, spec.vol_cap if spec.t == 0 else 0))
            found = _classes_by_orbit_marking(rows, spec.v)
            table = ClassTable(spec, labeled_total=len(rows))
            table.records = [_make_record(k, a) for k, a in sorted(found.items())]
            return table
        prev, lower = spec.parents()
        reps = self.level(prev)
        L = self.labeled(lower)
        volL = np.clip(L, 0, None).sum(axis=1).astype(np.int32)
        w = spec.v - 1
        merged: dict[bytes, int] = {}
        tasks = [(r.representative.terms, w, r.aut_size, spec)
                 for r in reps.records if not r.representative.is_void()]
        # T' void: T = (x_v - 1) T'' and the group on the first v - 1 elements
        # commutes with that factor, so class representatives of T'' suffice
        void_found: dict[bytes, int] = {}
        for r in self.level(lower).records:
            row = np.concatenate([-dense(r.representative, w), dense(r.representative, w)])
            cf = canonical_form(from_dense(row, spec.v))
            void_found.setdefault(cf.key, cf.aut_size)
        labeled_total = len(L)  # every labeled T'' fits, none exceeds half the cap
        results = [(void_found, 0)]
        if self.jobs > 1 and len(tasks) > 1:
            results += self._run_parallel(tasks, L, volL)
        else:
            rng = random.Random(0)
            for terms, _, aut, _ in tasks:
                found, lab, ncand, nrep = _combine(SignedTrade(w, terms), aut, L, volL, spec, rng)
                results.append((found, lab))
        for found, lab in results:
            labeled_total += lab
            for k, a in found.items():
                merged.setdefault(k, a)
        table = ClassTable(spec, labeled_total=labeled_total)
        table.records = [_make_record(k, a) for k, a in sorted(merged.items())]
        log.info("level %s: %d classes from %d representatives", spec, len(table.records), len(tasks))
        return table

    def _run_parallel(self, tasks, L, volL):
        import multiprocessing as mp

        _POOL_STATE["L"], _POOL_STATE["volL"] = L, volL
        ctx = mp.get_context("fork")
        try:
            with ctx.Pool(self.jobs) as pool:
                return pool.map(_pool_task, tasks, chunksize=1)
        finally:
            _POOL_STATE.clear()


def enumerate_level(spec: LevelSpec, budget: int | None = None, jobs: int = 1,
                    enumerator: Enumerator | None = None) -> ClassTable:
    """Equivalence classes of [t]-trades on ``{1..v}`` with volume ``<= vol_cap``."""
    enumerator = enumerator or Enumerator(budget, jobs)
    return enumerator.level(spec)


# --------------------------------------------------------------------------
# validation and reporting


@dataclass(frozen=True)
class DoubleCount:
    lhs: int
    rhs: int

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


def double_count_check(spec: LevelSpec, table: ClassTable) -> DoubleCount:
    """Orbit-stabilizer total versus the labeled total counted during generation."""
    order = group_order(spec.v)
    lhs = sum(order // r.aut_size for r in table.records)
    return DoubleCount(lhs, table.labeled_total)


def table_report(t: int, v_max: int, cap: int, enumerator: Enumerator | None = None,
                 v_min: int = 0, definition: str = "parallel") -> str:
    """Text grid of ``a(b) c(d)`` cells, one row per ``v``, one column per volume."""
    enumerator = enumerator or Enumerator()
    rows: list[tuple[int, ClassTable | None]] = []
    for v in range(v_min, v_max + 1):
        try:
            rows.append((v, enumerator.level(LevelSpec(t, v, cap))))
        except EnumerationAborted:
            rows.append((v, None))
    vols = sorted({vol for _, tab in rows if tab for vol in tab.volumes()})
    header = ["vol."] + [str(x) for x in vols]
    lines = []
    for v, tab in rows:
        cells = [f"v={v}"]
        for vol in vols:
            if tab is None:
                cells.append("?")
            elif vol == 0:
                cells.append(str(tab.counts(0).all))
            else:
                c = tab.counts(vol, definition)
                cells.append(c.format() if c.all else "0")
        lines.append(cells)
    widths = [max(len(r[i]) for r in [header] + lines) for i in range(len(header))]
    fmt = lambda r: " | ".join(c.rjust(wd) for c, wd in zip(r, widths))
    out = [f"t={t}", fmt(header), "-+-".join("-" * wd for wd in widths)]
    out += [fmt(r) for r in lines]
    return "\n".join(out)


@dataclass
class ParityAudit:
    passed: bool
    odd_values: dict[int, set[int]]  # volume -> odd replication values seen
    counterexample: SignedTrade | None = None


_EXPECTED_PARITY = {6: 1, 8: 0, 10: 1}


def parity_audit(table: ClassTable) -> ParityAudit:
    """Odd-replication element counts of simple [2]-trades on exactly 5 elements.

    Volume 6 and 10 need an odd count, volume 8 an even count.
    """
    if table.spec.t != 2 or table.spec.v < 5 or table.spec.vol_cap < 10:
        raise InvalidParameter("parity audit needs the (t=2, v>=5, cap>=10) level")
    odd_values: dict[int, set[int]] = defaultdict(set)
    for rec in table.records:
        if rec.volume not in _EXPECTED_PARITY or not rec.simple or rec.foundation_size != 5:
            continue
        reps = stats(rec.representative).replications
        odd = [r for r in reps.values() if r % 2]
        odd_values[rec.volume].update(odd)
        if len(odd) % 2 != _EXPECTED_PARITY[rec.volume]:
            return ParityAudit(False, dict(odd_values), rec.representative)
    return ParityAudit(True, dict(odd_values))


def verify_soundness(table: ClassTable) -> list[ClassRecord]:
    """Records failing the [t]-trade condition or the volume cap."""
    # on v points a [v]-trade is already void, so larger t adds nothing
    t, cap = min(table.spec.t, table.spec.v), table.spec.vol_cap
    return [r for r in table.records if r.volume > cap or not is_trade(r.representative, t)]
