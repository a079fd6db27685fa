"""Inductive block construction, avoidance sets, and certification.

The constructor builds strictly separated index blocks H_1 < H_2 < ... one
at a time.  Before choosing block j+1 it collects every zigzag sum and
every zigzag arbitrary-order product B of the subsystem built so far, and
forms the avoidance oracle

    D = X  and  (shift by b) X  and  (left / right / two-sided quotient
        by b, b') X      for all b, b' in B,

with 1 + 3|B| + |B|^2 base leaves.  The next block is the first candidate
H (ascending max element, then ascending size, then lexicographic) whose
row sums all satisfy D.  Landing in D is exactly what makes the extended
configuration stay inside the base oracle X: sums extend through the
shifts, products through the quotients.

``verify_configuration`` is the independent half: given any subsystem it
re-enumerates every zigzag sum and product and tests the base oracle
directly, emitting a self-contained certificate that can be re-checked
from its JSON serialization alone.

A small finite partition search (monochromatic finite sums over {1..N})
rounds out the kernel for the desk-scale pigeonhole experiments.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from . import configurations as cfg
from . import oracles as orc
from .weakring import DomainMismatch, Element, WeakRing, ring_from_descriptor

DEFAULT_WINDOW = 12
DEFAULT_BUDGET = 100_000


class NotAWeakRing(Exception):
    """The construction needs both distributive laws; the instance lacks one."""


class SearchExhausted(Exception):
    """No candidate block satisfied the avoidance oracle within bounds."""

    def __init__(
        self,
        message: str,
        candidates_tried: int,
        reason: str,
        partial: Optional["Certificate"] = None,
    ) -> None:
        super().__init__(message)
        self.candidates_tried = candidates_tried
        self.reason = reason  # 'horizon' or 'budget'
        self.partial = partial


# ---------------------------------------------------------------------------
# Block search
# ---------------------------------------------------------------------------


def iter_block_candidates(p: int, horizon: int) -> Iterator[Tuple[int, ...]]:
    """Finite subsets of (p, horizon], ascending max, then size, then lex."""
    for top in range(p + 1, horizon + 1):
        inner = range(p + 1, top)
        for size in range(1, top - p + 1):
            for rest in itertools.combinations(inner, size - 1):
                yield rest + (top,)


def _search_block(
    fam: cfg.SequenceFamily,
    p: int,
    oracle: orc.SetOracle,
    horizon: int,
    budget: int,
) -> Tuple[Tuple[int, ...], int]:
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    if horizon <= p:
        raise ValueError(f"horizon {horizon} does not open a window beyond p={p}")
    if horizon > fam.horizon:
        raise cfg.IndexOutOfHorizon(
            f"search horizon {horizon} exceeds family horizon {fam.horizon}"
        )
    if fam.ring != oracle.ring:
        raise DomainMismatch("family and oracle live over different instances")
    if budget < 1:
        raise ValueError(f"budget must be positive, got {budget}")

    tried = 0
    for candidate in iter_block_candidates(p, horizon):
        if tried >= budget:
            raise SearchExhausted(
                f"budget {budget} exhausted after {tried} candidates",
                candidates_tried=tried,
                reason="budget",
            )
        tried += 1
        ok = True
        for i in range(1, fam.l + 1):
            y = fam.ring.fold_add(fam.entry(i, t) for t in candidate)
            if not oracle.member(y):
                ok = False
                break
        if ok:
            return candidate, tried
    raise SearchExhausted(
        f"no block in ({p}, {horizon}] satisfies the oracle ({tried} candidates)",
        candidates_tried=tried,
        reason="horizon",
    )


def find_block(
    fam: cfg.SequenceFamily,
    p: int,
    oracle: orc.SetOracle,
    horizon: int,
    budget: int = DEFAULT_BUDGET,
) -> Tuple[int, ...]:
    """First block H subset of (p, horizon] whose row sums all satisfy the oracle."""
    block, _ = _search_block(fam, p, oracle, horizon, budget)
    return block


# ---------------------------------------------------------------------------
# Avoidance oracle
# ---------------------------------------------------------------------------


def build_avoidance(base: orc.SetOracle, values: Iterable[Element]) -> orc.SetOracle:
    """Intersect base with every shift/quotient demanded by the value set.

    Leaves appear in documented order: the base set itself, additive shifts,
    left quotients, right quotients, then two-sided quotients in row-major
    pair order; elements are sorted by the ring's canonical order.  With
    m distinct values the tree holds 1 + 3m + m^2 base leaves.
    """
    ring = base.ring
    vals = sorted(set(values), key=ring.sort_key)
    if not vals:
        return base
    parts: List[orc.SetOracle] = [base]
    parts.extend(orc.additive_shift(b, base) for b in vals)
    parts.extend(orc.left_quotient(b, base) for b in vals)
    parts.extend(orc.right_quotient(b, base) for b in vals)
    parts.extend(
        orc.two_sided_quotient(b, u, base) for b in vals for u in vals
    )
    return orc.intersect_all(parts)


def configuration_values(fam: cfg.SequenceFamily) -> List[Element]:
    """Distinct zigzag sum and arbitrary-order product values, sorted."""
    k, l = fam.horizon, fam.l
    seen = set()
    for term in cfg.iter_sum_terms(k, l):
        seen.add(cfg.evaluate_term(fam, term))
    for term in cfg.iter_ordered_product_terms(k, l):
        seen.add(cfg.evaluate_term(fam, term))
    return sorted(seen, key=fam.ring.sort_key)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass
class CheckRecord:
    """One verified term: the formal term, its exact value, the verdict."""

    term: cfg.FormalTerm
    value: Element
    member: bool

    def to_json(self, ring: WeakRing) -> dict:
        return {
            "term": self.term.to_json(),
            "value": ring.element_to_json(self.value),
            "member": self.member,
        }


def _is_increasing(word: Tuple[int, ...]) -> bool:
    return all(a < b for a, b in zip(word, word[1:]))


@dataclass
class Certificate:
    """Self-contained record of one verification run.

    Serializes to JSON carrying the ring descriptor, the oracle provenance,
    the blocks (when the subsystem came from a block construction), the
    subsystem itself, and the full ordered check list, so a verifier can
    rebuild everything and re-derive the verdicts from scratch.
    """

    ring: WeakRing
    oracle: orc.SetOracle
    family: cfg.SequenceFamily
    checks: List[CheckRecord]
    blocks: Optional[cfg.BlockSystem] = None
    stats: Dict = field(default_factory=dict)

    @property
    def zfs_pass(self) -> bool:
        return all(c.member for c in self.checks if c.term.kind == cfg.SUM)

    @property
    def zap_pass(self) -> bool:
        return all(c.member for c in self.checks if c.term.kind == cfg.ORDERED_PRODUCT)

    @property
    def zfp_pass(self) -> bool:
        """Implied verdict on increasing-order products (a subset of the checks)."""
        return all(
            c.member
            for c in self.checks
            if c.term.kind == cfg.ORDERED_PRODUCT and _is_increasing(c.term.indices)
        )

    @property
    def overall_pass(self) -> bool:
        return all(c.member for c in self.checks)

    def failing_checks(self) -> List[CheckRecord]:
        return [c for c in self.checks if not c.member]

    def summary(self) -> dict:
        failing = self.failing_checks()
        out = {
            "terms_checked": len(self.checks),
            "zfs_terms": sum(1 for c in self.checks if c.term.kind == cfg.SUM),
            "zap_terms": sum(
                1 for c in self.checks if c.term.kind == cfg.ORDERED_PRODUCT
            ),
            "zfs_pass": self.zfs_pass,
            "zap_pass": self.zap_pass,
            "zfp_pass": self.zfp_pass,
            "overall_pass": self.overall_pass,
            "failures": len(failing),
        }
        if failing:
            out["first_failure"] = failing[0].to_json(self.ring)
        return out

    def to_json_dict(self, include_timing: bool = True) -> dict:
        stats = dict(self.stats)
        if not include_timing:
            stats.pop("elapsed_seconds", None)
        return {
            "ring": self.ring.descriptor(),
            "oracle": self.oracle.to_provenance(),
            "blocks": self.blocks.to_json() if self.blocks is not None else None,
            "subsystem": {
                "l": self.family.l,
                "rows": [
                    [self.ring.element_to_json(x) for x in row]
                    for row in self.family.rows
                ],
            },
            "checks": [c.to_json(self.ring) for c in self.checks],
            "summary": self.summary(),
            "stats": stats,
        }


def verify_configuration(
    fam: cfg.SequenceFamily,
    oracle: orc.SetOracle,
    term_cap: int = cfg.DEFAULT_TERM_CAP,
    blocks: Optional[cfg.BlockSystem] = None,
    stats: Optional[Dict] = None,
) -> Certificate:
    """Re-enumerate every zigzag sum and product of fam and test the oracle.

    The verdict list is deterministic: all sum terms in enumeration order,
    then all arbitrary-order product terms.  A family with horizon 0 (an
    empty prefix, as arises in partial-progress reporting) certifies
    vacuously with an empty check list.
    """
    if fam.ring != oracle.ring:
        raise DomainMismatch("family and oracle live over different instances")
    k, l = fam.horizon, fam.l
    checks: List[CheckRecord] = []
    if k >= 1:
        total = cfg.sum_term_count(k, l) + cfg.ordered_product_term_count(k, l)
        if total > term_cap:
            raise cfg.BudgetExceeded(
                f"verification needs {total} terms, cap is {term_cap}", total, term_cap
            )
        for term in cfg.iter_sum_terms(k, l):
            v = cfg.evaluate_term(fam, term)
            checks.append(CheckRecord(term, v, oracle.member(v)))
        for term in cfg.iter_ordered_product_terms(k, l):
            v = cfg.evaluate_term(fam, term)
            checks.append(CheckRecord(term, v, oracle.member(v)))
    return Certificate(
        ring=fam.ring,
        oracle=oracle,
        family=fam,
        checks=checks,
        blocks=blocks,
        stats=dict(stats or {}),
    )


def recheck_certificate(data: dict) -> Tuple[Certificate, bool]:
    """Rebuild everything from certificate JSON and re-derive the verdicts.

    Returns the freshly computed certificate and whether its check list is
    identical (as JSON) to the stored one.  Nothing from the stored verdicts
    is trusted; only the ring descriptor, oracle provenance, blocks, and
    subsystem values are read.
    """
    ring = ring_from_descriptor(data["ring"])
    oracle = orc.from_provenance(ring, data["oracle"])
    sub = data["subsystem"]
    rows = tuple(
        tuple(ring.element_from_json(x) for x in row) for row in sub["rows"]
    )
    if len(rows) != sub.get("l", len(rows)):
        raise ValueError("subsystem row count disagrees with its declared l")
    fam = cfg.SequenceFamily(ring, rows)
    blocks = (
        cfg.BlockSystem.from_json(data["blocks"]) if data.get("blocks") is not None else None
    )
    fresh = verify_configuration(fam, oracle, blocks=blocks, stats=data.get("stats", {}))
    identical = [c.to_json(ring) for c in fresh.checks] == data.get("checks")
    return fresh, identical


# ---------------------------------------------------------------------------
# Inductive construction
# ---------------------------------------------------------------------------


def construct_blocks(
    fam: cfg.SequenceFamily,
    base: orc.SetOracle,
    n_blocks: int,
    window: int = DEFAULT_WINDOW,
    budget: int = DEFAULT_BUDGET,
    term_cap: int = cfg.DEFAULT_TERM_CAP,
) -> Tuple[cfg.BlockSystem, Certificate]:
    """Build n strictly separated blocks whose subsystem certifies against base.

    Each block is searched in the window (p, p + window] where p is the
    previous block's max (0 initially).  The avoidance oracle for block
    j+1 is rebuilt from scratch from the j-block subsystem's value set.
    On failure the raised ``SearchExhausted`` carries a partial certificate
    for the blocks found so far.
    """
    if fam.ring.distributivity != "both":
        raise NotAWeakRing(
            f"instance {fam.ring.name!r} is {fam.ring.distributivity}; "
            "the construction needs both distributive laws"
        )
    if fam.ring != base.ring:
        raise DomainMismatch("family and base oracle live over different instances")
    if n_blocks < 1:
        raise ValueError(f"n_blocks must be >= 1, got {n_blocks}")
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")

    t0 = time.perf_counter()
    blocks: List[Tuple[int, ...]] = []
    block_stats: List[dict] = []
    p = 0
    for _ in range(n_blocks):
        if blocks:
            sub = cfg.sum_subsystem(fam, cfg.BlockSystem(tuple(blocks)))
            avoid = build_avoidance(base, configuration_values(sub))
        else:
            avoid = build_avoidance(base, ())
        try:
            block, tried = _search_block(fam, p, avoid, p + window, budget)
        except SearchExhausted as exc:
            partial_system = cfg.BlockSystem(tuple(blocks))
            partial = verify_configuration(
                cfg.sum_subsystem(fam, partial_system),
                base,
                term_cap,
                blocks=partial_system,
                stats={
                    "blocks": block_stats,
                    "elapsed_seconds": time.perf_counter() - t0,
                },
            )
            exc.partial = partial
            raise
        blocks.append(block)
        block_stats.append(
            {
                "block": list(block),
                "candidates_tried": tried,
                "avoidance_leaves": avoid.leaf_count(),
            }
        )
        p = block[-1]

    system = cfg.BlockSystem(tuple(blocks))
    cert = verify_configuration(
        cfg.sum_subsystem(fam, system),
        base,
        term_cap,
        blocks=system,
        stats={"blocks": block_stats, "elapsed_seconds": time.perf_counter() - t0},
    )
    return system, cert


# ---------------------------------------------------------------------------
# Finite partition search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HindmanWitness:
    """A tuple whose nonempty subset sums are monochromatic."""

    color: object
    values: Tuple[int, ...]
    finite_sums: Tuple[int, ...]


def _normalize_coloring(coloring) -> Dict[int, object]:
    if isinstance(coloring, dict):
        colors = dict(coloring)
    else:
        colors = {i + 1: c for i, c in enumerate(coloring)}
    if not colors:
        raise ValueError("coloring must cover a nonempty initial segment")
    n = len(colors)
    if set(colors) != set(range(1, n + 1)):
        raise ValueError("coloring must cover exactly 1..N")
    return colors


def hindman_search(
    coloring, k: int, distinct_values: bool = False
) -> Optional[HindmanWitness]:
    """First k-tuple in {1..N} whose nonempty subset sums are one color.

    Candidates run in nondecreasing lexicographic order (strictly increasing
    when ``distinct_values``); tuples with any subset sum above N are not
    checkable and are skipped.  Returns None when no witness exists.
    """
    colors = _normalize_coloring(coloring)
    n = len(colors)
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive int, got {k!r}")
    combine = itertools.combinations if distinct_values else itertools.combinations_with_replacement
    for xs in combine(range(1, n + 1), k):
        sums = [
            sum(xs[i] for i in picks)
            for size in range(1, k + 1)
            for picks in itertools.combinations(range(k), size)
        ]
        if max(sums) > n:
            continue
        palette = {colors[v] for v in sums}
        if len(palette) == 1:
            return HindmanWitness(
                color=palette.pop(),
                values=xs,
                finite_sums=tuple(sorted(set(sums))),
            )
    return None


def hindman_sweep(
    n: int, num_colors: int, k: int, distinct_values: bool = False
) -> List[Tuple[Tuple[int, ...], Optional[HindmanWitness]]]:
    """Run hindman_search over every num_colors-coloring of {1..N}."""
    if n < 1 or num_colors < 1:
        raise ValueError("n and num_colors must be positive")
    out = []
    for coloring in itertools.product(range(1, num_colors + 1), repeat=n):
        out.append((coloring, hindman_search(coloring, k, distinct_values)))
    return out
