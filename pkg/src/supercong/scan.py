"""Batch scans over prime ranges with JSON Lines persistence."""
from __future__ import annotations

import json
import logging
import os
import sys
import tempfile
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from math import isqrt
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .checkers import DEFAULT_CONFIG, ORDER, REGISTRY, CheckConfig, CheckOutcome, Status, get_spec, run_all

logger = logging.getLogger(__name__)

PRIME_LIMIT = 1 << 31
SEGMENT = 1 << 18

EXIT_OK, EXIT_FAILS, EXIT_USAGE = 0, 1, 2

RECORD_KEYS = ("check", "p", "status", "reason", "lhs", "rhs", "modulus", "witness", "ms")
REQUIRED_KEYS = {"check", "p", "status", "lhs", "rhs", "modulus", "ms"}


class RecordError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def sieve_primes(pmin: int, pmax: int) -> list[int]:
    """All primes in [pmin, pmax], by a segmented sieve of Eratosthenes."""
    if pmin < 0 or pmax >= PRIME_LIMIT:
        raise OverflowError(f"bounds must lie in [0, 2^31), got [{pmin}, {pmax}]")
    if pmax < 2 or pmin > pmax:
        return []
    root = isqrt(pmax)
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for i in range(2, isqrt(root) + 1):
        if small[i]:
            small[i * i::i] = False
    base = np.flatnonzero(small)
    out = []
    lo = max(pmin, 2)
    while lo <= pmax:
        hi = min(lo + SEGMENT, pmax + 1)
        seg = np.ones(hi - lo, dtype=bool)
        for q in base:
            q = int(q)
            start = max(q * q, (lo + q - 1) // q * q)
            if start >= hi:
                continue
            seg[start - lo::q] = False
        out.extend((np.flatnonzero(seg) + lo).tolist())
        lo = hi
    return out


@dataclass
class ScanPlan:
    ids: list[str]
    pmin: int
    pmax: int
    out_path: Path
    jobs: int = 1
    seed: int = 0
    sample: int = 32
    resume: bool = False
    timing: bool = True
    qseries_N: int = 500
    dump_eta: Path | None = None
    config: CheckConfig = field(init=False)

    def __post_init__(self):
        if not 3 <= self.pmin <= self.pmax < PRIME_LIMIT:
            raise ValueError(f"need 3 <= pmin <= pmax < 2^31, got pmin={self.pmin}, pmax={self.pmax}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.sample < 1:
            raise ValueError("sample must be >= 1")
        for i in self.ids:
            get_spec(i)
        self.ids = [i for i in ORDER if i in set(self.ids)]
        self.out_path = Path(self.out_path)
        self.config = CheckConfig(seed=self.seed, sample_count=self.sample, qseries_N=self.qseries_N)


def parse_ids(text: str) -> list[str]:
    if text.strip().lower() == "all":
        return list(ORDER)
    ids = [t.strip() for t in text.split(",") if t.strip()]
    for i in ids:
        get_spec(i)
    return ids


def to_record(o: CheckOutcome, timing: bool = True) -> dict:
    rec = {"check": o.check, "p": o.p, "status": o.status.value}
    if o.status is Status.SKIPPED:
        rec["reason"] = o.reason or ""
    rec["lhs"] = o.lhs
    rec["rhs"] = o.rhs
    rec["modulus"] = o.modulus
    witness = dict(o.witness or {})
    if o.branch:
        witness[f"branch:{o.branch}"] = 1
    if witness:
        rec["witness"] = witness
    rec["ms"] = round(o.elapsed_ms, 3) if timing else 0
    return rec


def dumps(rec: dict) -> str:
    return json.dumps(rec, ensure_ascii=False, separators=(",", ":"))


def validate_record(rec, lineno: int) -> dict:
    if not isinstance(rec, dict):
        raise RecordError(lineno, "not a JSON object")
    keys = set(rec)
    if not REQUIRED_KEYS <= keys or not keys <= set(RECORD_KEYS):
        raise RecordError(lineno, f"bad key set {sorted(keys)}")
    if rec["status"] not in ("holds", "fails", "skipped"):
        raise RecordError(lineno, f"bad status {rec['status']!r}")
    if ("reason" in rec) != (rec["status"] == "skipped"):
        raise RecordError(lineno, "reason must be present exactly for skipped records")
    if not isinstance(rec["p"], int) or not isinstance(rec["check"], str):
        raise RecordError(lineno, "bad check or p")
    if "witness" in rec and not (
        isinstance(rec["witness"], dict) and all(isinstance(v, int) for v in rec["witness"].values())
    ):
        raise RecordError(lineno, "witness must map strings to integers")
    return rec


def read_records(path: Path, *, tolerate_tail: bool = False) -> list[tuple[dict, str]]:
    """Parse a JSONL file into (record, raw line) pairs.

    With ``tolerate_tail`` a malformed final line (an interrupted write)
    is dropped instead of raising.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    out = []
    for n, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            rec = validate_record(json.loads(line), n)
        except (json.JSONDecodeError, RecordError) as exc:
            if tolerate_tail and n == len(lines):
                logger.warning("dropping truncated last line %d of %s", n, path)
                break
            if isinstance(exc, RecordError):
                raise
            raise RecordError(n, f"invalid JSON ({exc.msg})") from None
        out.append((rec, line))
    return out


def _sort_key(rec: dict):
    return rec["p"], rec["check"]


def _evaluate(p: int, ids: list[str], cfg: CheckConfig, timing: bool) -> list[str]:
    return [dumps(to_record(o, timing)) for o in run_all(p, cfg, ids)]


def _rewrite_sorted(path: Path) -> list[dict]:
    records = read_records(path, tolerate_tail=True)
    records.sort(key=lambda pair: _sort_key(pair[0]))
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        for _, line in records:
            fh.write(line.rstrip() + "\n")
    os.replace(tmp, path)
    return [rec for rec, _ in records]


def execute(plan: ScanPlan, evaluate=_evaluate) -> int:
    """Run ``plan``; returns 0 when nothing fails, 1 otherwise.

    Records are appended as primes complete, then the file is rewritten
    sorted by (p, check) so the output does not depend on ``jobs``.
    """
    path = plan.out_path
    done: set[tuple[int, str]] = set()
    if plan.resume and path.exists():
        done = {(rec["p"], rec["check"]) for rec, _ in read_records(path, tolerate_tail=True)}
        _rewrite_sorted(path)
    else:
        path.write_text("", encoding="utf-8")

    if plan.dump_eta is not None:
        _dump_eta(plan.dump_eta, plan.qseries_N)

    prime_free = [i for i in plan.ids if REGISTRY[i].prime_free]
    per_prime = [i for i in plan.ids if not REGISTRY[i].prime_free]
    work = []
    for p in sieve_primes(plan.pmin, plan.pmax):
        pending = [i for i in per_prime if (p, i) not in done]
        if pending:
            work.append((p, pending))
    fresh = [i for i in prime_free if (0, i) not in done]
    logger.info("scan: %d primes pending, %d already recorded", len(work), len(done))

    with path.open("a", encoding="utf-8") as out:
        if fresh:
            for line in evaluate(3, fresh, plan.config, plan.timing):
                out.write(line + "\n")
        if plan.jobs == 1:
            for p, ids in work:
                for line in evaluate(p, ids, plan.config, plan.timing):
                    out.write(line + "\n")
        else:
            with ProcessPoolExecutor(max_workers=plan.jobs) as pool:
                futures = [pool.submit(evaluate, p, ids, plan.config, plan.timing) for p, ids in work]
                for fut in as_completed(futures):
                    for line in fut.result():
                        out.write(line + "\n")
    records = _rewrite_sorted(path)
    return EXIT_FAILS if any(r["status"] == "fails" for r in records) else EXIT_OK


def _dump_eta(directory: Path, N: int) -> None:
    from .qseries import a_spec, b_spec, dump_csv, expand

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    dump_csv(expand(a_spec(N)), directory / "eta_a.csv")
    dump_csv(expand(b_spec(N)), directory / "eta_b.csv")


def report(in_path, stream: TextIO | None = None) -> int:
    """Print per-check holds/fails/skipped counts and every failing record."""
    stream = stream or sys.stdout
    try:
        records = read_records(Path(in_path))
    except RecordError as exc:
        print(f"malformed record at {exc}", file=sys.stderr)
        return EXIT_USAGE
    counts: dict[str, Counter] = {}
    fails = []
    total_ms = 0.0
    for rec, line in records:
        counts.setdefault(rec["check"], Counter())[rec["status"]] += 1
        total_ms += rec["ms"]
        if rec["status"] == "fails":
            fails.append((rec, line))
    order = {cid: n for n, cid in enumerate(ORDER)}
    print("check holds fails skipped", file=stream)
    for cid in sorted(counts, key=lambda c: (order.get(c, len(order)), c)):
        c = counts[cid]
        print(f"{cid} {c['holds']} {c['fails']} {c['skipped']}", file=stream)
    if fails:
        print(f"FAILS ({len(fails)}):", file=stream)
        for rec, line in fails:
            kind = "conjecture counterexample candidate" if rec["check"].startswith(("CJ", "ZW")) \
                else "proved statement: implementation bug"
            print(f"[{kind}] {line}", file=stream)
    print(f"total elapsed: {total_ms:.3f} ms", file=stream)
    return EXIT_FAILS if fails else EXIT_OK


def iter_outcome_lines(outcomes: Iterable[CheckOutcome], timing: bool = True) -> Iterable[str]:
    for o in outcomes:
        yield dumps(to_record(o, timing))
