"""Print the class-count tables for t = 1..4 (v <= 7) and the extended t = 2 table.

Usage: python3 scripts/reproduce_tables.py [--v-max 7] [--definition parallel|projection] [--jobs N]
"""

from __future__ import annotations

import argparse
import logging
import time

from tradeforge.enumeration import Enumerator, LevelSpec, double_count_check, table_report

CAPS = {1: 3, 2: 7, 3: 15, 4: 31}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--v-max", type=int, default=7)
    ap.add_argument("--t", type=int, nargs="*", default=sorted(CAPS))
    ap.add_argument("--definition", choices=("parallel", "projection"), default="parallel")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--extended", action="store_true", help="also run t=2 with cap 12 up to v=5")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    runs = [(t, CAPS[t], args.v_max) for t in args.t]
    if args.extended:
        runs.append((2, 12, min(args.v_max, 5)))
    for t, cap, v_max in runs:
        start = time.perf_counter()
        E = Enumerator(jobs=args.jobs)
        print(table_report(t, v_max, cap, E, definition=args.definition))
        checks = [double_count_check(LevelSpec(t, v, cap), E.level(LevelSpec(t, v, cap))).passed
                  for v in range(v_max + 1)]
        print(f"cap {cap}: double count {'passed' if all(checks) else 'FAILED'} "
              f"on {len(checks)} levels, {time.perf_counter() - start:.1f}s\n", flush=True)


if __name__ == "__main__":
    main()
