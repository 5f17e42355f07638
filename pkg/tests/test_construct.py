from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from tradeforge.canon import canonical_key
from tradeforge.core import block, is_trade, product_expand, volume
from tradeforge.construct import (
    ParityLegSpan,
    known_simple_spectrum,
    merge_simple,
    minimal_trade,
    spectrum_trade,
    template_keys,
    vol3_template,
    vol6_template,
)
from tradeforge.errors import (
    InvalidMinimalForm,
    InvalidParameter,
    InvalidTemplate,
    MergePreconditionViolated,
)


def test_minimal_trade():
    T = minimal_trade(0, [(block(1), 0), (block(2), 0)])
    assert T == product_expand(0, [(block(1), 0), (block(2), 0)])
    assert is_trade(T, 1) and volume(T) == 2
    with pytest.raises(InvalidMinimalForm):
        minimal_trade(0, [])


def test_parity_leg_span():
    P = ParityLegSpan((block(1), block(2)))
    assert sorted(P.span()) == [0, 1, 2, 3]
    T = P.trade()
    assert T.coeffs == {1: 1, 2: 1, 0: -1, 3: -1}
    assert is_trade(T, 1)
    assert ParityLegSpan((block(1), block(2)), "even").trade() == -T
    with pytest.raises(InvalidParameter):
        ParityLegSpan((block(1), block(1)))
    with pytest.raises(InvalidParameter):
        ParityLegSpan((block(1),), "both")


@given(st.integers(1, 5), st.data())
def test_parity_span_is_trade_of_rank_minus_one(k, data):
    v = k + 2
    # element e goes to generator role[e], or to none when role[e] == k
    role = data.draw(st.lists(st.integers(0, k), min_size=v, max_size=v))
    gens = [sum(1 << e for e in range(v) if role[e] == j) for j in range(k)]
    if not all(gens):
        with pytest.raises(InvalidParameter):
            ParityLegSpan(tuple(gens))
        return
    T = ParityLegSpan(tuple(gens)).trade(v)
    assert T.is_simple() and volume(T) == 1 << (k - 1)
    assert is_trade(T, k - 1)
    assert not is_trade(T, k)


def test_merge_of_parity_splits():
    # the two splits share {0, {1}} with opposite signs, so two blocks cancel
    T = merge_simple(ParityLegSpan((block(1), block(2))).trade(3),
                     ParityLegSpan((block(1), block(3)), "even").trade(3))
    assert is_trade(T, 1) and T.is_simple() and volume(T) == 2
    with pytest.raises(MergePreconditionViolated):
        A = ParityLegSpan((block(1), block(2))).trade(3)
        merge_simple(A, A)
    with pytest.raises(MergePreconditionViolated):
        merge_simple(2 * minimal_trade(0, [(block(1), 0)]), minimal_trade(0, [(block(2), 0)]))


@pytest.mark.parametrize("t", range(2, 9))
def test_spectrum_volumes(t):
    for i in range(t - 1):
        T = spectrum_trade(t, i, "ii")
        assert volume(T) == (1 << (t + 1)) + (1 << (t - 1)) - (1 << i)
        assert T.is_simple() and is_trade(T, t)
    for i in range(t - 2):
        T = spectrum_trade(t, i, "iii")
        assert volume(T) == (1 << (t + 1)) + (1 << (t - 1)) - 3 * (1 << i)
        assert T.is_simple() and is_trade(T, t)


def test_spectrum_rejects_bad_parameters():
    with pytest.raises(InvalidParameter):
        spectrum_trade(2, 1, "ii")
    with pytest.raises(InvalidParameter):
        spectrum_trade(2, 0, "iii")
    with pytest.raises(InvalidParameter):
        spectrum_trade(3, 0, "iv")


def test_known_spectrum():
    s = known_simple_spectrum(2)
    assert s.valid_below == 10
    assert s.exists == {0, 4, 6, 7, 8, 9}
    assert s.not_exists == {1, 2, 3, 5}
    assert known_simple_spectrum(3).exists == {0, 8, 12, 14, 15, 16, 17, 18, 19}
    assert known_simple_spectrum(1).exists == {0, 2, 3, 4}
    with pytest.raises(InvalidParameter):
        known_simple_spectrum(0)


def test_spectrum_examples():
    assert volume(spectrum_trade(2, 0, "ii")) == 9
    assert volume(spectrum_trade(3, 0, "iii")) == 17
    T = spectrum_trade(3, 1, "ii")
    assert volume(T) == 18 and len(T.terms) == 36


def test_minimal_trade_examples():
    T = minimal_trade(0, [(block(1), block(2)), (block(3), block(4)), (block(5), block(6))])
    assert volume(T) == 4 and is_trade(T, 2)
    T = minimal_trade(block(1), [(block(2), block(3))])
    assert T.legs() == ([block(1, 2)], [block(1, 3)])
    with pytest.raises(InvalidMinimalForm):
        minimal_trade(0, [(block(1, 2), block(2))])


def test_merge_with_void():
    T = minimal_trade(0, [(block(1), 0), (block(2), 0)])
    assert merge_simple(T, T.void(2)) == T


def test_vol3_template():
    T = vol3_template([block(1), block(2), block(3, 4)], [block(3), block(4), block(1, 2)])
    assert is_trade(T, 1) and volume(T) == 3 and T.is_simple() and T.v == 4
    assert vol3_template([block(1), block(2), block(3, 4)], [block(1, 2), block(3), block(4)],
                         shift_by=block(5)).v == 5
    T = vol3_template([block(1), block(2), block(3)], [block(1, 2, 3), 0, 0])
    assert is_trade(T, 1) and volume(T) == 3 and not T.is_simple()
    with pytest.raises(InvalidTemplate):
        vol3_template([block(1), block(1), block(2)], [0, 0, block(2)])
    with pytest.raises(InvalidTemplate):
        vol3_template([block(1), block(2), 0], [block(1), block(2), 0])


def test_vol6_template_examples():
    T = vol6_template("P3-3", X=0, Y=[block(1), block(2), block(3, 4)], Z=[block(3), block(4), block(1, 2)])
    assert is_trade(T, 2) and volume(T) == 6
    T = vol6_template("P1-3", Y=[block(1), block(2), block(3)], Z=[block(4), block(5)])
    assert is_trade(T, 2) and volume(T) == 6
    with pytest.raises(InvalidTemplate):
        vol6_template("P1-1", X=0, Y=[block(1), block(2), block(3)], Z=[block(4), block(5), block(6)])
    with pytest.raises(InvalidTemplate):
        vol6_template("P9", Y=[])


@pytest.mark.parametrize("v", range(3, 6))
def test_templates_match_enumeration(enumerators, v):
    from tradeforge.enumeration import LevelSpec
    assert template_keys(1, 3, v) == {r.key for r in enumerators(3).level(LevelSpec(1, v, 3)).by_volume(3)}
    assert template_keys(2, 6, v) == {r.key for r in enumerators(7).level(LevelSpec(2, v, 7)).by_volume(6)}
