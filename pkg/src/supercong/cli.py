"""Command-line interface: ``supercong {list,check,scan,report,selftest}``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import scan
from .checkers import CheckConfig, Status, UnknownCheckError, list_checks, run_check

CONFIG_ENV = "SUPERCONG_CONFIG"
BOOL_KEYS = {"resume", "no_timing"}

# (check, p, status, lhs, rhs, witness subset, branch or None for any)
SELFTEST = (
    ("E1.1", 5, Status.HOLDS, "1", "1", {}, None),
    ("T2.2", 5, Status.HOLDS, "12", "12", {"a": 1}, None),
    ("T2.9", 5, Status.HOLDS, "13", "13", {"a": 1}, None),
    ("T2.10", 5, Status.HOLDS, "7", "7", {}, None),
    ("T2.5a", 7, Status.HOLDS, "3", "3", {"A": -2}, None),
    ("C2.2", 5, Status.HOLDS, "4", "4", {}, None),
    ("C2.3", 7, Status.HOLDS, "0", "0", {}, None),
    ("T2.12a", 5, Status.HOLDS, "1", "1", {}, None),
    ("E1.1", 3, Status.HOLDS, "8", "8", {}, None),
    ("T2.2", 7, Status.HOLDS, "0", "0", {}, "4|p-3"),
)
SELFTEST_SKIPS = (("CJ2.1", 3, "p divides constant 648"),)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="supercong", description="Numerical checks of supercongruences modulo p^2.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="list registered checks")

    check = sub.add_parser("check", help="run one check at one prime")
    check.add_argument("--id", required=True)
    check.add_argument("--p", type=int, required=True)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--sample", type=int, default=32)

    sc = sub.add_parser("scan", help="run checks over a prime range into a JSONL file")
    sc.add_argument("--ids", required=True, help="comma separated ids, or 'all'")
    sc.add_argument("--pmin", type=int, required=True)
    sc.add_argument("--pmax", type=int, required=True)
    sc.add_argument("--out", type=Path, required=True)
    sc.add_argument("--jobs", type=int, default=1)
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--sample", type=int, default=32)
    sc.add_argument("--resume", action="store_true")
    sc.add_argument("--no-timing", action="store_true", help="write ms=0 for reproducible output")
    sc.add_argument("--qseries-n", type=int, default=500)
    sc.add_argument("--dump-eta", type=Path, default=None, help="directory for eta_a.csv and eta_b.csv")

    rep = sub.add_parser("report", help="summarize a JSONL result file")
    rep.add_argument("--in", dest="in_path", type=Path, required=True)

    sub.add_parser("selftest", help="run the built-in example table")
    return parser


def _subparsers(parser: argparse.ArgumentParser) -> dict[str, argparse.ArgumentParser]:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return dict(action.choices)
    return {}


def config_tokens(path: Path, command: str, parser: argparse.ArgumentParser) -> list[str]:
    """Translate ``key=value`` lines into flag tokens for ``command``.

    Keys are flag names without dashes (``qseries-n`` or ``qseries_n``).
    A key no subcommand knows is a usage error; keys that belong to
    other subcommands are ignored.
    """
    subs = _subparsers(parser)
    known = {name: {opt for a in p._actions for opt in a.option_strings} for name, p in subs.items()}
    everything = set().union(*known.values())
    tokens = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = key.strip(), value.strip()
        flag = "--" + key.replace("_", "-")
        if flag not in everything:
            raise UsageError(f"{path}:{n}: unknown config key {key!r}")
        if flag not in known.get(command, ()):
            continue
        if key.replace("-", "_") in BOOL_KEYS:
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(flag)
            elif value.lower() not in ("0", "false", "no", "off"):
                raise UsageError(f"{path}:{n}: {key} expects a boolean")
        else:
            tokens += [flag, value]
    return tokens


def parse(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    cfg_path = os.environ.get(CONFIG_ENV)
    commands = _subparsers(parser)
    idx = next((i for i, tok in enumerate(argv) if tok in commands), None)
    if cfg_path and idx is not None:
        # file values go first so explicit flags, parsed later, win
        extra = config_tokens(Path(cfg_path), argv[idx], parser)
        argv = argv[: idx + 1] + extra + argv[idx + 1:]
    return parser.parse_args(argv)


def _cmd_list(args) -> int:
    for cid, location, modulus, hyp in list_checks():
        print(f"{cid}\t{location}\t{modulus}\t{hyp}")
    return scan.EXIT_OK


def _cmd_check(args) -> int:
    cfg = CheckConfig(seed=args.seed, sample_count=args.sample)
    outcome = run_check(args.id, args.p, cfg)
    print(scan.dumps(scan.to_record(outcome)))
    return scan.EXIT_FAILS if outcome.status is Status.FAILS else scan.EXIT_OK


def _cmd_scan(args) -> int:
    plan = scan.ScanPlan(
        ids=scan.parse_ids(args.ids), pmin=args.pmin, pmax=args.pmax, out_path=args.out,
        jobs=args.jobs, seed=args.seed, sample=args.sample, resume=args.resume,
        timing=not args.no_timing, qseries_N=args.qseries_n, dump_eta=args.dump_eta,
    )
    return scan.execute(plan)


def _cmd_report(args) -> int:
    return scan.report(args.in_path)


def selftest(stream=None) -> int:
    stream = stream or sys.stdout
    bad = 0
    for cid, p, status, lhs, rhs, witness, branch in SELFTEST:
        o = run_check(cid, p)
        ok = (o.status is status and o.lhs == lhs and o.rhs == rhs and branch in (None, o.branch)
              and all((o.witness or {}).get(k) == v for k, v in witness.items()))
        bad += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {cid}@{p}: {o.status.value} lhs={o.lhs} rhs={o.rhs}", file=stream)
    for cid, p, reason in SELFTEST_SKIPS:
        o = run_check(cid, p)
        ok = o.status is Status.SKIPPED and o.reason == reason
        bad += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {cid}@{p}: {o.status.value} ({o.reason})", file=stream)
    print(f"selftest: {len(SELFTEST) + len(SELFTEST_SKIPS) - bad} passed, {bad} failed", file=stream)
    return scan.EXIT_FAILS if bad else scan.EXIT_OK


COMMANDS = {
    "list": _cmd_list,
    "check": _cmd_check,
    "scan": _cmd_scan,
    "report": _cmd_report,
    "selftest": lambda args: selftest(),
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return scan.EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, UnknownCheckError, ValueError, OverflowError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"supercong: {msg}", file=sys.stderr)
        return scan.EXIT_USAGE
    except OSError as exc:
        print(f"supercong: I/O error: {exc}", file=sys.stderr)
        return scan.EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
