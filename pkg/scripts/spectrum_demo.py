"""Build the simple trades between 2 and 2.5 times 2^t and print their invariants.

Usage: python3 scripts/spectrum_demo.py [--t-max 8]
"""

from __future__ import annotations

import argparse

from tradeforge import affine_rank, is_trade, known_simple_spectrum, spectrum_trade, volume
from tradeforge.core import foundation


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-max", type=int, default=8)
    args = ap.parse_args()
    print(f"{'t':>2} {'i':>2} kind {'vol':>5} {'found':>5} {'afrk':>4}  check")
    for t in range(2, args.t_max + 1):
        for kind, count in (("ii", t - 1), ("iii", t - 2)):
            for i in range(count):
                T = spectrum_trade(t, i, kind)
                ok = is_trade(T, t) and T.is_simple()
                print(f"{t:>2} {i:>2} {kind:>4} {volume(T):>5} {foundation(T).bit_count():>5} "
                      f"{affine_rank(T):>4}  {'ok' if ok else 'FAIL'}")
        s = known_simple_spectrum(t)
        print(f"   volumes below {s.valid_below} with a simple [{t}]-trade: {sorted(s.exists)}")


if __name__ == "__main__":
    main()
