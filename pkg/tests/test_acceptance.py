"""Acceptance criteria 1-10.  Each test emits one PASS/FAIL line, repeated in
the terminal summary.  The full tables up to v = 7 take a few minutes."""

from __future__ import annotations

import random
import time

import pytest

from tradeforge.anf import anf_from_set, degree, kasami_classify, quadratic_sum_set
from tradeforge.canon import Transform, canonical_key
from tradeforge.construct import spectrum_trade, template_keys
from tradeforge.core import (
    Unitrade,
    is_trade,
    is_unitrade,
    legs_union,
    odd_support,
    projection,
    restrict,
    shift,
    volume,
)
from tradeforge.enumeration import LevelSpec, double_count_check, parity_audit, verify_soundness
from tradeforge.gf2span import affine_rank
from tradeforge.split import split_unitrade

from published import VOLUMES, expected

pytestmark = pytest.mark.slow

MAIN_TABLES = [(1, 3, 7), (2, 7, 7), (3, 15, 7), (4, 31, 7)]
EXTENDED = (2, 12, 5)


@pytest.fixture(scope="module")
def tables(enumerators):
    """``{(t, cap): {v: ClassTable}}`` for the four main tables and the extended one."""
    en = enumerators()
    out = {}
    for t, cap, v_max in MAIN_TABLES + [EXTENDED]:
        out[(t, cap)] = {v: en.level(LevelSpec(t, v, cap)) for v in range(v_max + 1)}
    en.drop_labeled()
    return out


def cells(tables, key):
    t, cap = key
    for v, tab in tables[key].items():
        vols = set(VOLUMES[key]) | {vol for vol in tab.volumes() if vol}
        if key == (2, 12):
            vols = {vol for vol in vols if vol >= 8}
        for vol in sorted(vols):
            yield v, vol, tab


def all_records(tables):
    for (t, cap), rows in tables.items():
        for v, tab in rows.items():
            for rec in tab.records:
                yield t, v, rec


def test_criterion_01_main_tables(tables, report):
    bad, n = [], 0
    for t, cap, _ in MAIN_TABLES:
        for v, vol, tab in cells(tables, (t, cap)):
            c = tab.counts(vol)
            want = expected(t, cap, v, vol)
            n += 1
            if (c.all, c.simple) != (want[0], want[2]):
                bad.append(f"t={t} v={v} vol={vol}: {c.all}/{c.simple} vs {want[0]}/{want[2]}")
    report(1, not bad, f"{n - len(bad)}/{n} cells match on all and simple counts" + (f"; {bad[:5]}" if bad else ""))
    assert not bad


def test_criterion_02_nondegenerate_counts(tables, report):
    mism, par_bad, n = [], [], 0
    for t, cap, _ in MAIN_TABLES:
        for v, vol, tab in cells(tables, (t, cap)):
            want = expected(t, cap, v, vol)
            n += 1
            ext = tab.counts(vol, "projection")
            par = tab.counts(vol, "parallel")
            if (ext.nondegenerate, ext.nondegenerate_simple) != (want[1], want[3]):
                mism.append(f"t={t} v={v} vol={vol}: {ext.nondegenerate}({ext.nondegenerate_simple})"
                            f" vs published {want[1]}({want[3]})")
            if (par.nondegenerate, par.nondegenerate_simple) != (want[1], want[3]):
                par_bad.append(f"t={t} v={v} vol={vol}")
    for line in mism:
        print("  extension-based discrepancy:", line)
    detail = (f"extension-based definition: {len(mism)}/{n} cells differ"
              + (f" (first: {mism[0]})" if mism else "")
              + f"; parallel-element definition: {n - len(par_bad)}/{n} cells match")
    report(2, not mism, detail)
    assert not par_bad, par_bad
    if mism:
        pytest.xfail(f"extension-based degeneracy does not reproduce {len(mism)} published cells")


def test_criterion_03_extended_table(tables, report):
    bad, n = [], 0
    for v, vol, tab in cells(tables, (2, 12)):
        c = tab.counts(vol)
        got = (c.all, c.nondegenerate, c.simple, c.nondegenerate_simple)
        n += 1
        if got != expected(2, 12, v, vol):
            bad.append(f"v={v} vol={vol}: {got}")
    c = tables[(2, 12)][5].counts(12)
    report(3, not bad, f"{n - len(bad)}/{n} cells match; (v=5, vol 12) = {c.all} all / {c.simple} simple")
    assert not bad


def test_criterion_04_double_count(tables, enumerators, report):
    levels = enumerators().levels()
    failed = [spec for spec, tab in levels.items() if not double_count_check(spec, tab).passed]
    unsound = [spec for spec, tab in levels.items() if verify_soundness(tab)]
    report(4, not failed and not unsound,
           f"{len(levels) - len(failed)}/{len(levels)} completed levels pass; {len(unsound)} unsound")
    assert not failed and not unsound


def test_criterion_05_parity_audit(tables, report):
    audit = parity_audit(tables[(2, 12)][5])
    seen = {vol: sorted(vals) for vol, vals in sorted(audit.odd_values.items())}
    report(5, audit.passed, f"odd-replication values by volume: {seen}")
    assert audit.passed


def test_criterion_06_spectrum_constructions(report):
    start, built, bad = time.perf_counter(), 0, []
    for t in range(2, 9):
        for fam, count, factor in (("ii", t - 1, 1), ("iii", t - 2, 3)):
            for i in range(count):
                T = spectrum_trade(t, i, fam)
                want = (1 << (t + 1)) + (1 << (t - 1)) - factor * (1 << i)
                built += 1
                if not (is_trade(T, t) and T.is_simple() and volume(T) == want):
                    bad.append((t, i, fam))
    secs = time.perf_counter() - start
    report(6, not bad and secs < 60, f"{built} trades for t <= 8 in {secs:.1f}s; failures {bad}")
    assert not bad and secs < 60


def test_criterion_07_type_b_witness(report):
    U = Unitrade(6, frozenset(quadratic_sum_set(3)))
    start = time.perf_counter()
    result = split_unitrade(U, 3)
    secs = time.perf_counter() - start
    ok = len(U.blocks) == 28 and is_unitrade(U, 3) and result is None and secs <= 600
    report(7, ok, f"{len(U.blocks)}-block [3]-unitrade: {'NONE' if result is None else 'split found'} in {secs:.3f}s")
    assert ok


def test_criterion_08_templates(tables, report):
    bad = []
    for v in range(6):
        if template_keys(1, 3, v) != {r.key for r in tables[(1, 3)][v].by_volume(3)}:
            bad.append(f"vol 3, v={v}")
        if template_keys(2, 6, v) != {r.key for r in tables[(2, 7)][v].by_volume(6)}:
            bad.append(f"vol 6, v={v}")
    vol5 = sum(len(tab.by_volume(5)) for key in ((2, 7), (2, 12)) for tab in tables[key].values())
    n3 = len(tables[(1, 3)][5].by_volume(3))
    n6 = len(tables[(2, 7)][5].by_volume(6))
    report(8, not bad and vol5 == 0,
           f"templates equal enumeration for v <= 5 ({n3} vol-3, {n6} vol-6 classes at v=5); "
           f"{vol5} classes of volume 5 at t=2; mismatches {bad}")
    assert not bad and vol5 == 0


def _random_set(rng: random.Random, v: int) -> set[int]:
    if rng.random() < 0.5:
        # sums of a few small subcubes hit low degrees often
        S: set[int] = set()
        for _ in range(rng.randint(1, 3)):
            free = [b for b in range(v) if rng.random() < 0.7]
            base = rng.getrandbits(v) if v else 0
            cube = {0}
            for b in free:
                cube |= {m | 1 << b for m in cube}
            base &= ~sum(1 << b for b in free)
            S ^= {m | base for m in cube}
        return S
    p = rng.random()
    return {m for m in range(1 << v) if rng.random() < p}


def _random_transform(rng: random.Random, v: int) -> Transform:
    perm = list(range(v))
    rng.shuffle(perm)
    return Transform(tuple(perm), rng.getrandbits(v) if v else 0, rng.random() < 0.5)


def test_criterion_09_property_suites(tables, report):
    rng = random.Random(20240901)
    counts = dict.fromkeys(("degree", "closure", "gaps", "orbit"), 0)
    violations = []
    # degree <=> unitrade on 10,000 random sets
    for _ in range(10_000):
        v = rng.randint(1, 8)
        S = _random_set(rng, v)
        deg = degree(anf_from_set(S, v))
        U = Unitrade(v, frozenset(S))
        for t in range(v):
            if is_unitrade(U, t) != (deg <= v - t - 1):
                violations.append(("degree", v, sorted(S), t))
        counts["degree"] += 1
    records = [(t, v, r) for t, v, r in all_records(tables) if not r.representative.is_void()]
    sample = rng.sample(records, 1000)
    # shift, projection and sub-trade closure
    for t, v, rec in sample:
        T = rec.representative
        Y = rng.getrandbits(v)
        i = rng.randint(1, v)
        alpha = rng.getrandbits(v)
        beta = rng.getrandbits(v) & ~alpha
        k = alpha.bit_count() + beta.bit_count()
        ok = is_trade(shift(T, Y), t) and volume(shift(T, Y)) == rec.volume
        ok &= is_trade(projection(T, i), t)
        if k <= t:
            ok &= is_trade(restrict(T, alpha, beta), t - k)
        if not ok:
            violations.append(("closure", t, v, rec.key.hex()))
        counts["closure"] += 1
    # volume gaps for the unitrade of every enumerated trade
    for t, v, rec in records:
        T = rec.representative
        U = odd_support([m for m, c in T.terms for _ in range(abs(c))], v)
        ok = is_unitrade(U, t)
        if U.blocks and U.volume < 1 << (t + 1):
            ok &= U.volume in {(1 << (t + 1)) - (1 << i) for i in range(t + 1)}
        if not ok:
            violations.append(("gaps", t, v, rec.key.hex()))
        counts["gaps"] += 1
    # canonical keys are constant on orbits
    for t, v, rec in sample:
        g = _random_transform(rng, v)
        if canonical_key(g(rec.representative)) != rec.key:
            violations.append(("orbit", t, v, rec.key.hex()))
        counts["orbit"] += 1
    report(9, not violations, f"checked {counts}; {len(violations)} violations")
    assert not violations, violations[:5]


def test_criterion_10_affine_rank(tables, report):
    type_a = rank_bound = 0
    bad = []
    for t, v, rec in all_records(tables):
        if t > 4 or not rec.simple or rec.volume == 0:
            continue
        T = rec.representative
        vol, r = rec.volume, affine_rank(T)
        gap = (1 << (t + 1)) - vol
        if 0 < gap < 1 << t and gap & (gap - 1) == 0:
            i = gap.bit_length() - 1
            k = kasami_classify(legs_union(T), t)
            type_a += 1
            if k.tag != "TypeA" or r != 2 * t + 2 - i:
                bad.append(("type A rank", t, v, vol, r))
        if t in (2, 3) and 3 << (t - 1) < vol < 5 << (t - 1) and vol != 1 << (t + 1):
            rank_bound += 1
            if r < t + 4:
                bad.append(("rank bound", t, v, vol, r))
    report(10, not bad and type_a and rank_bound,
           f"{type_a} simple trades of volume 2^(t+1)-2^i have the type A rank; "
           f"{rank_bound} simple [2]/[3]-trades in the window have rank >= t+4; failures {bad[:5]}")
    assert not bad and type_a and rank_bound
