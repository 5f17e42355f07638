"""Command-line entry point: ``tradeforge <command> ...``.

Exit codes: 0 success, 1 error, 2 budget exhausted, 3 verification failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from .anf import kasami_classify
from .canon import canonical_form
from .construct import minimal_trade, spectrum_trade, vol3_template, vol6_template, VOL6_KINDS
from .core import (
    SignedTrade,
    block,
    foundation,
    has_parallel_elements,
    is_degenerate,
    is_trade,
    legs_union,
    max_strength,
    to_tuple_string,
    volume,
)
from .enumeration import (
    DEGENERACY_DEFINITIONS,
    Enumerator,
    LevelSpec,
    default_budget,
    double_count_check,
    table_report,
)
from .errors import EnumerationAborted, SearchBudgetExceeded, TradeError
from .gf2span import affine_rank
from .records import dumps, read_lines, trade_from_record, trade_to_record, unitrade_from_record
from .split import split_unitrade

EXIT_OK, EXIT_ERROR, EXIT_BUDGET, EXIT_FAILED = 0, 1, 2, 3
TABLE_CAPS = {1: 3, 2: 7, 3: 15, 4: 31}

log = logging.getLogger("tradeforge")


class CliError(Exception):
    pass


@contextmanager
def _open_in(path: str):
    if path == "-":
        yield sys.stdin
        return
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    with fh:
        yield fh


@contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        fh = open(path, "w", encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from exc
    with fh:
        yield fh


def _records(path: str, parse):
    """Parsed records; malformed lines are reported and make the command fail."""
    good, bad = [], 0
    with _open_in(path) as fh:
        for line in read_lines(fh, parse):
            if line.error:
                print(f"{path}:{line.number}: {line.error}", file=sys.stderr)
                bad += 1
            else:
                good.append((line.number, line.value))
    return good, bad


def _block_arg(text: str) -> int:
    """``"1,3"`` or ``"13"`` lists elements; ``"0"`` or ``""`` is the empty block."""
    text = text.strip()
    if text in ("", "0", "-"):
        return 0
    parts = text.split(",") if "," in text else list(text)
    return block(*(int(p) for p in parts))


# --------------------------------------------------------------------------
# commands


def cmd_enumerate(args) -> int:
    spec = LevelSpec(args.t, args.v, args.max_vol)
    E = Enumerator(budget=args.budget, jobs=args.jobs)
    try:
        table = E.level(spec)
    except EnumerationAborted as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    dc = double_count_check(spec, table)
    summary = {
        "t": spec.t, "v": spec.v, "max_vol": spec.vol_cap,
        "classes": len(table.records),
        "volumes": {str(vol): dict(vars(table.counts(vol, args.definition)))
                    for vol in table.volumes()},
        "aut_sizes": [r.aut_size for r in table.records],
        "double_count": {"lhs": dc.lhs, "rhs": dc.rhs, "passed": dc.passed},
    }
    if args.out:
        with _open_out(args.out) as fh:
            for r in table.records:
                fh.write(dumps(trade_to_record(r.representative)) + "\n")
        with _open_out(args.out + ".summary.json") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    for vol in table.volumes():
        print(f"vol {vol}: {table.counts(vol, args.definition).format()}")
    print(f"double count {dc.lhs} = {dc.rhs}: {'pass' if dc.passed else 'FAIL'}")
    return EXIT_OK if dc.passed else EXIT_FAILED


def cmd_tables(args) -> int:
    cap = args.max_vol if args.max_vol is not None else TABLE_CAPS.get(args.t)
    if cap is None:
        raise CliError(f"no default volume cap for t={args.t}; pass --max-vol")
    E = Enumerator(budget=args.budget, jobs=args.jobs)
    print(table_report(args.t, args.v_max, cap, E, definition=args.definition))
    return EXIT_OK


def cmd_verify(args) -> int:
    recs, bad = _records(args.file, trade_from_record)
    failed = 0
    for n, T in recs:
        if not is_trade(T, args.t):
            print(f"{args.file}:{n}: not a [{args.t}]-trade", file=sys.stderr)
            failed += 1
    print(f"{len(recs) - failed} of {len(recs) + bad} records are [{args.t}]-trades")
    if bad:
        return EXIT_ERROR
    return EXIT_FAILED if failed else EXIT_OK


def _kasami_text(T: SignedTrade, t: int) -> str:
    if T.is_void() or not T.is_simple() or t < 0:
        return "-"
    try:
        k = kasami_classify(legs_union(T), t)
    except TradeError as exc:
        return f"error({exc})"
    return k.tag if k.i is None else f"{k.tag}(i={k.i})"


def cmd_classify(args) -> int:
    recs, bad = _records(args.file, trade_from_record)
    for n, T in recs:
        t = args.t if args.t is not None else max_strength(T)
        if t >= 0 and not is_trade(T, t):
            print(f"{args.file}:{n}: not a [{t}]-trade", file=sys.stderr)
            bad += 1
            continue
        void = T.is_void()
        fields = {
            "line": n, "t": t, "volume": volume(T) if t >= 0 else None,
            "found": foundation(T).bit_count(), "afrk": affine_rank(T),
            "simple": T.is_simple(),
            "degenerate": None if void or t < 0 else has_parallel_elements(T),
            "extension": None if void or t < 0 else is_degenerate(T),
            "kasami": _kasami_text(T, t),
        }
        if args.pretty:
            plus, minus = T.legs()
            fields["plus"] = [to_tuple_string(m, T.v) for m in plus]
            fields["minus"] = [to_tuple_string(m, T.v) for m in minus]
        print(json.dumps(fields))
    return EXIT_ERROR if bad else EXIT_OK


def cmd_canon(args) -> int:
    recs, bad = _records(args.file, trade_from_record)
    for n, T in recs:
        cf = canonical_form(T)
        print(json.dumps({"line": n, "key": cf.key.hex(), "aut": cf.aut_size,
                          "representative": trade_to_record(cf.representative)}))
    return EXIT_ERROR if bad else EXIT_OK


def cmd_split(args) -> int:
    recs, bad = _records(args.file, unitrade_from_record)
    unknown = False
    for n, U in recs:
        try:
            T = split_unitrade(U, args.t, args.budget)
        except SearchBudgetExceeded:
            print("UNKNOWN")
            unknown = True
            continue
        except TradeError as exc:
            print(f"{args.file}:{n}: {exc}", file=sys.stderr)
            bad += 1
            continue
        print("NONE" if T is None else dumps(trade_to_record(T)))
    if bad:
        return EXIT_ERROR
    return EXIT_BUDGET if unknown else EXIT_OK


def cmd_construct(args) -> int:
    if args.family == "minimal":
        pairs = [tuple(_block_arg(p) for p in pair.split(":")) for pair in args.pairs]
        if any(len(p) != 2 for p in pairs):
            raise CliError("pairs are written X:Y")
        T = minimal_trade(_block_arg(args.x0), pairs, args.v)
    elif args.family == "spectrum":
        T = spectrum_trade(args.t, args.i, args.kind)
    elif args.family == "vol3":
        T = vol3_template([_block_arg(b) for b in args.y], [_block_arg(b) for b in args.z],
                          _block_arg(args.shift), args.v)
    else:
        T = vol6_template(args.kind, X=_block_arg(args.x), Y=[_block_arg(b) for b in args.y],
                          Z=[_block_arg(b) for b in args.z], v=args.v)
    with _open_out(args.out) as fh:
        fh.write(dumps(trade_to_record(T)) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def _budget(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("budget must be nonnegative")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tradeforge", description="Trades on the Boolean lattice.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)
    budget_help = "labeled-trade (or search-node) budget; default $TRADEFORGE_BUDGET"

    p = sub.add_parser("enumerate", help="classes of [t]-trades on v elements up to a volume")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--max-vol", type=int, required=True)
    p.add_argument("--out", help="JSON Lines file of representatives; a .summary.json sidecar is written next to it")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=_budget, default=None, help=budget_help)
    p.add_argument("--definition", choices=DEGENERACY_DEFINITIONS, default="parallel")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("tables", help="print the a(b) c(d) grid")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--v-max", type=int, required=True)
    p.add_argument("--max-vol", type=int, default=None, help="default 2^(t+1) - 1 for t <= 4")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=_budget, default=None, help=budget_help)
    p.add_argument("--definition", choices=DEGENERACY_DEFINITIONS, default="parallel")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="check every trade record is a [t]-trade")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="invariants of each trade record")
    p.add_argument("--t", type=int, default=None, help="default: the largest t the trade satisfies")
    p.add_argument("--pretty", action="store_true", help="also print legs as 0/1 strings")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("canon", help="canonical keys and automorphism counts")
    p.add_argument("file")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("split", help="split unitrade records into simple trades")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--budget", type=_budget, default=None, help=budget_help)
    p.add_argument("file")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("construct", help="build a trade from one of the explicit families")
    p.add_argument("--out", default=None)
    fam = p.add_subparsers(dest="family", required=True)
    q = fam.add_parser("minimal", help="X0 (X1 - Y1) ... (Xk - Yk)")
    q.add_argument("--x0", default="0")
    q.add_argument("--pairs", nargs="+", required=True, metavar="X:Y")
    q.add_argument("--v", type=int, default=None)
    q = fam.add_parser("spectrum", help="simple trades between 2 and 2.5 times 2^t")
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--i", type=int, required=True)
    q.add_argument("--kind", choices=("ii", "iii"), default="ii")
    q = fam.add_parser("vol3", help="[1]-trade of volume 3")
    q.add_argument("--y", nargs=3, required=True)
    q.add_argument("--z", nargs=3, required=True)
    q.add_argument("--shift", default="0")
    q.add_argument("--v", type=int, default=None)
    q = fam.add_parser("vol6", help="[2]-trade of volume 6")
    q.add_argument("--kind", choices=VOL6_KINDS, required=True)
    q.add_argument("--x", default="0")
    q.add_argument("--y", nargs=3, required=True)
    q.add_argument("--z", nargs="+", required=True)
    q.add_argument("--v", type=int, default=None)
    p.set_defaults(func=cmd_construct)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    if getattr(args, "budget", "unset") is None:
        args.budget = default_budget()
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except TradeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
