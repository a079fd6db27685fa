"""Batch front end: INI config in, JSON report out, exit code as verdict.

Commands
--------
enumerate   term/value listings and counts for the six configuration sets
construct   run the inductive block construction, emit a certificate
verify      re-check a previously emitted certificate file from scratch
probe       evaluate oracle membership over a range (naturals instance)
hindman     finite monochromatic subset-sums search / coloring sweep

Exit codes: 0 pass, 1 fail (verdict negative / mismatch), 2 search or
term budget exhausted, 3 configuration error.

Reports are JSON with sorted keys; ``--no-timestamp`` drops the timestamp
*and* wall-clock stats so identical runs emit byte-identical files.
Output files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import re
import sys
import tempfile
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from . import configurations as cfg
from . import kernel
from . import oracles as orc
from .weakring import (
    DomainMismatch,
    EndomapSemiring,
    MatrixSemiring,
    NaturalSemiring,
    WeakRing,
)

SCHEMA_VERSION = 1

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_EXHAUSTED = 2
EXIT_CONFIG = 3


class ConfigError(Exception):
    """A problem with the config file or flag values."""


# ---------------------------------------------------------------------------
# Config plumbing
# ---------------------------------------------------------------------------

_REQUIRED = object()


def _load_config(path: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";",))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path!r}: {exc}") from exc
    return cp


def _get(cp, section: str, key: str, default=_REQUIRED) -> str:
    if cp.has_option(section, key):
        return cp.get(section, key).strip()
    if default is _REQUIRED:
        raise ConfigError(f"missing [{section}] {key}")
    return default


def _get_int(cp, section: str, key: str, default=_REQUIRED) -> Optional[int]:
    raw = _get(cp, section, key, default)
    if raw is default and raw is not _REQUIRED:
        return default  # type: ignore[return-value]
    if isinstance(raw, int) or raw is None:
        return raw
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} must be an integer, got {raw!r}") from None


def _get_bool(cp, section: str, key: str, default: bool) -> bool:
    raw = _get(cp, section, key, None)
    if raw is None:
        return default
    low = raw.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"[{section}] {key} must be a boolean, got {raw!r}")


def _fraction(raw: str, where: str) -> Fraction:
    try:
        return Fraction(raw.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{where} must be an exact rational like '1/5', got {raw!r}") from None


def _int_list(raw: str, where: str) -> List[int]:
    try:
        return [int(tok.strip()) for tok in raw.split(",")]
    except ValueError:
        raise ConfigError(f"{where} must be a comma list of integers, got {raw!r}") from None


def _json_value(raw: str, where: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{where} must be JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def build_ring(cp) -> WeakRing:
    kind = _get(cp, "ring", "kind")
    try:
        if kind == "naturals":
            return NaturalSemiring()
        if kind == "matrix":
            return MatrixSemiring(dim=_get_int(cp, "ring", "dimension", 2))
        if kind == "endomap":
            return EndomapSemiring(modulus=_get_int(cp, "ring", "modulus", 3))
    except ValueError as exc:
        raise ConfigError(f"[ring] {exc}") from exc
    raise ConfigError(f"[ring] kind must be naturals|matrix|endomap, got {kind!r}")


def _element(ring: WeakRing, raw: str, where: str):
    try:
        return ring.element_from_json(_json_value(raw, where))
    except DomainMismatch as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def build_family(cp, ring: WeakRing, default_horizon: int) -> cfg.SequenceFamily:
    """Build the sequence family from [sequences].

    ``horizon`` defaults to whatever the invoking command needs; explicit
    sequences fix their own horizon.  Randomized kinds require a seed.
    """
    kind = _get(cp, "sequences", "kind")
    count = _get_int(cp, "sequences", "count", None)

    if kind == "explicit":
        rows = []
        i = 1
        while cp.has_option("sequences", f"seq{i}"):
            data = _json_value(_get(cp, "sequences", f"seq{i}"), f"[sequences] seq{i}")
            if not isinstance(data, list) or not data:
                raise ConfigError(f"[sequences] seq{i} must be a nonempty JSON list")
            rows.append([_element(ring, json.dumps(x), f"[sequences] seq{i}") for x in data])
            i += 1
        if not rows:
            raise ConfigError("[sequences] explicit kind needs seq1, seq2, ...")
        if count is not None and count != len(rows):
            raise ConfigError(f"[sequences] count={count} but {len(rows)} sequences given")
        if len({len(r) for r in rows}) != 1:
            raise ConfigError("[sequences] explicit sequences must share one length")
        return cfg.SequenceFamily.from_rows(ring, rows)

    horizon = _get_int(cp, "sequences", "horizon", None) or default_horizon
    if horizon < 1:
        raise ConfigError(f"[sequences] horizon must be >= 1, got {horizon}")

    if kind == "constant":
        values = []
        i = 1
        while cp.has_option("sequences", f"value{i}"):
            values.append(_element(ring, _get(cp, "sequences", f"value{i}"), f"[sequences] value{i}"))
            i += 1
        if not values:
            raise ConfigError("[sequences] constant kind needs value1, value2, ...")
        if count is not None and count != len(values):
            raise ConfigError(f"[sequences] count={count} but {len(values)} values given")
        return cfg.SequenceFamily.from_function(
            ring, len(values), horizon, lambda i, n: values[i - 1]
        )

    if kind == "arithmetic":
        if ring.kind != "naturals":
            raise ConfigError("[sequences] arithmetic kind works on the naturals instance only")
        start = _int_list(_get(cp, "sequences", "start"), "[sequences] start")
        step = _int_list(_get(cp, "sequences", "step"), "[sequences] step")
        if len(start) != len(step):
            raise ConfigError("[sequences] start and step must have equal lengths")
        if count is not None and count != len(start):
            raise ConfigError(f"[sequences] count={count} but {len(start)} entries given")
        if any(v < 0 for v in start) or any(v < 0 for v in step):
            raise ConfigError("[sequences] start/step must be non-negative")
        from .weakring import Natural

        return cfg.SequenceFamily.from_function(
            ring, len(start), horizon, lambda i, n: Natural(start[i - 1] + step[i - 1] * n)
        )

    if kind == "powers":
        if ring.kind != "naturals":
            raise ConfigError("[sequences] powers kind works on the naturals instance only")
        bases = _int_list(_get(cp, "sequences", "base"), "[sequences] base")
        if count is not None and count != len(bases):
            raise ConfigError(f"[sequences] count={count} but {len(bases)} bases given")
        if any(b < 1 for b in bases):
            raise ConfigError("[sequences] powers bases must be >= 1")
        from .weakring import Natural

        return cfg.SequenceFamily.from_function(
            ring, len(bases), horizon, lambda i, n: Natural(bases[i - 1] ** n)
        )

    if kind == "random":
        import random as _random

        if not cp.has_option("sequences", "seed"):
            raise ConfigError("[sequences] random kind requires an explicit seed")
        seed = _get_int(cp, "sequences", "seed")
        bound = _get_int(cp, "sequences", "bound", 9)
        if count is None:
            raise ConfigError("[sequences] random kind requires count")
        rng = _random.Random(seed)
        rows = [
            [ring.random_element(rng, bound) for _ in range(horizon)] for _ in range(count)
        ]
        return cfg.SequenceFamily.from_rows(ring, rows)

    raise ConfigError(
        f"[sequences] kind must be explicit|constant|arithmetic|powers|random, got {kind!r}"
    )


_DEFAULT_CHARACTERS = {"naturals": "identity", "matrix": "entry-sum"}


def build_oracle(cp, ring: WeakRing) -> orc.SetOracle:
    """Intersection of the base systems declared as [oracle] baseN.* keys."""
    if not cp.has_section("oracle"):
        raise ConfigError("missing [oracle] section")
    indices = sorted(
        {
            int(m.group(1))
            for key in cp.options("oracle")
            for m in [re.match(r"base(\d+)\.", key)]
            if m
        }
    )
    if not indices:
        raise ConfigError("[oracle] needs at least base1.alpha / base1.interval")
    bases: List[orc.SetOracle] = []
    for i in indices:
        prefix = f"base{i}."
        alpha = _fraction(_get(cp, "oracle", prefix + "alpha"), f"[oracle] {prefix}alpha")
        interval_raw = _get(cp, "oracle", prefix + "interval")
        parts = interval_raw.split(",")
        if len(parts) != 2:
            raise ConfigError(
                f"[oracle] {prefix}interval must be 'start, end', got {interval_raw!r}"
            )
        start = _fraction(parts[0], f"[oracle] {prefix}interval start")
        end = _fraction(parts[1], f"[oracle] {prefix}interval end")
        char_name = _get(
            cp, "oracle", prefix + "character", _DEFAULT_CHARACTERS.get(ring.kind)
        )
        if char_name is None:
            raise ConfigError(
                f"[oracle] {prefix}character is required: no additive character "
                f"ships for the {ring.kind!r} instance"
            )
        try:
            system = orc.RotationSystem.from_endpoints(
                alpha, start, end, orc.get_character(char_name)
            )
        except ValueError as exc:
            raise ConfigError(f"[oracle] {prefix}*: {exc}") from exc
        bases.append(orc.base_oracle(ring, system))
    oracle = bases[0]
    for extra in bases[1:]:
        oracle = orc.intersect(oracle, extra)
    return oracle


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _pairs_json(ring: WeakRing, pairs) -> List[dict]:
    return [
        {"term": t.to_json(), "value": ring.element_to_json(v)} for t, v in pairs
    ]


def cmd_enumerate(cp, args) -> Tuple[dict, int]:
    ring = build_ring(cp)
    k = _get_int(cp, "run", "k")
    if k < 1:
        raise ConfigError(f"[run] k must be >= 1, got {k}")
    term_cap = _get_int(cp, "run", "term_cap", cfg.DEFAULT_TERM_CAP)
    fam = build_family(cp, ring, default_horizon=k)
    if fam.horizon < k:
        raise ConfigError(f"[run] k={k} exceeds the family horizon {fam.horizon}")
    xs = fam.rows[0]
    try:
        sets = {
            "fs": _pairs_json(ring, cfg.finite_sums(ring, xs, k, term_cap)),
            "fp": _pairs_json(ring, cfg.finite_products(ring, xs, k, term_cap)),
            "ap": _pairs_json(ring, cfg.all_products(ring, xs, k, term_cap)),
            "zfs": _pairs_json(ring, cfg.zigzag_finite_sums(fam, k, term_cap)),
            "zfp": _pairs_json(ring, cfg.zigzag_finite_products(fam, k, term_cap)),
            "zap": _pairs_json(ring, cfg.zigzag_all_products(fam, k, term_cap)),
        }
    except cfg.BudgetExceeded as exc:
        return (
            {"status": "budget-exceeded", "error": str(exc), "needed": exc.needed, "cap": exc.cap},
            EXIT_EXHAUSTED,
        )
    report = {
        "status": "ok",
        "ring": ring.descriptor(),
        "k": k,
        "l": fam.l,
        "counts": {name: len(listing) for name, listing in sets.items()},
        "sets": sets,
    }
    return report, EXIT_PASS


def cmd_construct(cp, args) -> Tuple[dict, int]:
    ring = build_ring(cp)
    n_blocks = _get_int(cp, "run", "blocks")
    window = args.horizon or _get_int(cp, "run", "horizon", kernel.DEFAULT_WINDOW)
    budget = args.budget or _get_int(cp, "run", "budget", kernel.DEFAULT_BUDGET)
    term_cap = _get_int(cp, "run", "term_cap", cfg.DEFAULT_TERM_CAP)
    if n_blocks < 1:
        raise ConfigError(f"[run] blocks must be >= 1, got {n_blocks}")
    fam = build_family(cp, ring, default_horizon=n_blocks * window)
    oracle = build_oracle(cp, ring)
    include_timing = not args.no_timestamp
    try:
        system, cert = kernel.construct_blocks(
            fam, oracle, n_blocks, window=window, budget=budget, term_cap=term_cap
        )
    except kernel.SearchExhausted as exc:
        report = {
            "status": "search-exhausted",
            "error": str(exc),
            "search": {"candidates_tried": exc.candidates_tried, "reason": exc.reason},
            "certificate": exc.partial.to_json_dict(include_timing) if exc.partial else None,
        }
        return report, EXIT_EXHAUSTED
    except cfg.BudgetExceeded as exc:
        return (
            {"status": "budget-exceeded", "error": str(exc), "needed": exc.needed, "cap": exc.cap},
            EXIT_EXHAUSTED,
        )
    status = "pass" if cert.overall_pass else "fail"
    report = {
        "status": status,
        "blocks": system.to_json(),
        "certificate": cert.to_json_dict(include_timing),
    }
    return report, EXIT_PASS if cert.overall_pass else EXIT_FAIL


def cmd_verify(cp, args) -> Tuple[dict, int]:
    cert_path = _get(cp, "run", "certificate")
    try:
        with open(cert_path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read certificate {cert_path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"certificate {cert_path!r} is not JSON: {exc}") from exc
    payload = data.get("certificate") if isinstance(data.get("certificate"), dict) else data
    if not isinstance(payload, dict) or "checks" not in payload:
        raise ConfigError(f"{cert_path!r} does not contain a certificate")
    try:
        fresh, identical = kernel.recheck_certificate(payload)
    except (KeyError, ValueError, DomainMismatch) as exc:
        raise ConfigError(f"certificate {cert_path!r} is malformed: {exc}") from exc
    status = "pass" if fresh.overall_pass else "fail"
    report = {
        "status": status,
        "identical": identical,
        "certificate": fresh.to_json_dict(include_timing=not args.no_timestamp),
    }
    ok = identical and fresh.overall_pass
    return report, EXIT_PASS if ok else EXIT_FAIL


def cmd_probe(cp, args) -> Tuple[dict, int]:
    ring = build_ring(cp)
    if ring.kind != "naturals":
        raise ConfigError("probe works on the naturals instance only")
    oracle = build_oracle(cp, ring)
    raw = _get(cp, "run", "range")
    m = re.fullmatch(r"(\d+)\s*\.\.\s*(\d+)", raw)
    if not m:
        raise ConfigError(f"[run] range must look like '1..20', got {raw!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise ConfigError(f"[run] range is empty: {raw!r}")
    from .weakring import Natural

    members = [s for s in range(lo, hi + 1) if oracle.member(Natural(s))]
    report = {
        "status": "ok",
        "range": [lo, hi],
        "members": [str(s) for s in members],
        "count": len(members),
    }
    return report, EXIT_PASS


def _witness_json(w: kernel.HindmanWitness) -> dict:
    return {
        "color": w.color,
        "values": list(w.values),
        "finite_sums": list(w.finite_sums),
    }


def cmd_hindman(cp, args) -> Tuple[dict, int]:
    k = _get_int(cp, "run", "length")
    distinct = _get_bool(cp, "run", "distinct", False)
    if cp.has_option("run", "coloring"):
        tokens = [tok.strip() for tok in _get(cp, "run", "coloring").split(",")]
        coloring = [int(t) if t.isdigit() else t for t in tokens]
        witness = kernel.hindman_search(coloring, k, distinct_values=distinct)
        report = {
            "status": "witness" if witness else "no-witness",
            "n": len(coloring),
            "k": k,
            "distinct": distinct,
            "witness": _witness_json(witness) if witness else None,
        }
        return report, EXIT_PASS if witness else EXIT_FAIL
    if not _get_bool(cp, "run", "sweep", False):
        raise ConfigError("[run] hindman needs either coloring=... or sweep=true")
    n = _get_int(cp, "run", "n")
    colors = _get_int(cp, "run", "colors")
    results = kernel.hindman_sweep(n, colors, k, distinct_values=distinct)
    failures = [list(coloring) for coloring, w in results if w is None]
    report = {
        "status": "all-witnessed" if not failures else "missing-witness",
        "n": n,
        "k": k,
        "colors": colors,
        "distinct": distinct,
        "colorings": len(results),
        "failures": failures,
        "witnesses": sum(1 for _, w in results if w is not None),
    }
    return report, EXIT_PASS if not failures else EXIT_FAIL


_COMMANDS = {
    "enumerate": cmd_enumerate,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "probe": cmd_probe,
    "hindman": cmd_hindman,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _write_report(report: dict, out_path: Optional[str]) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path is None:
        sys.stdout.write(text)
        return
    path = Path(out_path)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent) or ".", prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zigzagip",
        description="Construct and certify zigzag sum/product configurations "
        "inside rotation-recurrence membership sets (exact arithmetic).",
    )
    parser.add_argument("--config", required=True, help="INI config file")
    parser.add_argument("--command", required=True, choices=sorted(_COMMANDS))
    parser.add_argument("--out", help="report path (default: [run] out, else stdout)")
    parser.add_argument(
        "--horizon", type=int, help="per-block search window override (construct)"
    )
    parser.add_argument("--budget", type=int, help="candidate budget override (construct)")
    parser.add_argument(
        "--no-timestamp",
        action="store_true",
        help="omit the timestamp and wall-clock stats for byte-identical reruns",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="worker hint; execution is sequential and deterministic either way",
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    if args.horizon is not None and args.horizon < 1:
        print("error: --horizon must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    if args.budget is not None and args.budget < 1:
        print("error: --budget must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cp = _load_config(args.config)
        handler = _COMMANDS[args.command]
        payload, code = handler(cp, args)
        out_path = args.out or _get(cp, "run", "out", None)
        report = {"schema": SCHEMA_VERSION, "command": args.command, "jobs": args.jobs}
        if not args.no_timestamp:
            report["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        report.update(payload)
        _write_report(report, out_path)
        return code
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (cfg.IndexOutOfHorizon, DomainMismatch, kernel.NotAWeakRing) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except cfg.BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
