"""Configuration sets as explicit formal terms with exact values.

Six finite configuration sets are enumerated here, each as a list of
``(FormalTerm, value)`` pairs so that certificates can name every checked
instance:

single sequence x_1, ..., x_k            family x_{i,n}, i = 1..l
--------------------------------         ---------------------------------
finite sums       sum over F             zigzag finite sums      one row
finite products   increasing order       zigzag finite products  choice per
all products      any injective order    zigzag all products     position

A *zigzag* term picks, at every participating position n, which of the l
sequences contributes (the selector).  Counts are closed-form:

    |FS| = |FP| = 2^k - 1                |ZFS| = |ZFP| = (l+1)^k - 1
    |AP| = sum_{r=1..k} k!/(k-r)!        |ZAP| = sum_{r=1..k} k!/(k-r)! l^r

Enumeration order is deterministic: ascending term size, then ascending
index word (lexicographic), then ascending selector (lexicographic); the
materializing helpers guard against blowups with a hard term cap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Sequence, Tuple

from .weakring import DomainMismatch, Element, WeakRing

DEFAULT_TERM_CAP = 10**6

SUM = "sum"
INCREASING_PRODUCT = "increasing-product"
ORDERED_PRODUCT = "ordered-product"

_KINDS = (SUM, INCREASING_PRODUCT, ORDERED_PRODUCT)


class IndexOutOfHorizon(Exception):
    """An index beyond the available sequence entries was requested."""


class BudgetExceeded(Exception):
    """A materializing enumeration would exceed its term cap."""

    def __init__(self, message: str, needed: int, cap: int) -> None:
        super().__init__(message)
        self.needed = needed
        self.cap = cap


# ---------------------------------------------------------------------------
# Formal terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FormalTerm:
    """One formal configuration instance.

    ``indices`` is the word of positions used (strictly increasing for sums
    and increasing products, merely pairwise distinct for ordered products)
    and ``selector`` assigns to each slot the contributing sequence (1-based;
    all ones in the single-sequence case).
    """

    kind: str
    indices: Tuple[int, ...]
    selector: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown term kind {self.kind!r}")
        idx, sel = self.indices, self.selector
        if not idx:
            raise ValueError("a formal term needs at least one index")
        if len(sel) != len(idx):
            raise ValueError("selector length must match index word length")
        if any(not isinstance(i, int) or i < 1 for i in idx):
            raise ValueError(f"indices must be positive ints, got {idx!r}")
        if any(not isinstance(s, int) or s < 1 for s in sel):
            raise ValueError(f"selector entries must be positive ints, got {sel!r}")
        if self.kind in (SUM, INCREASING_PRODUCT):
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"{self.kind} index word must be strictly increasing: {idx!r}")
        elif len(set(idx)) != len(idx):
            raise ValueError(f"ordered-product index word must be injective: {idx!r}")

    @property
    def size(self) -> int:
        return len(self.indices)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "indices": list(self.indices),
            "selector": list(self.selector),
        }

    @staticmethod
    def from_json(data: dict) -> "FormalTerm":
        if not isinstance(data, dict):
            raise ValueError(f"bad formal-term payload {data!r}")
        return FormalTerm(
            kind=data.get("kind"),
            indices=tuple(data.get("indices", ())),
            selector=tuple(data.get("selector", ())),
        )


# ---------------------------------------------------------------------------
# Block systems and sequence families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockSystem:
    """Strictly separated finite index blocks: max H_j < min H_{j+1}."""

    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        norm = []
        for raw in self.blocks:
            block = tuple(sorted(set(raw)))
            if not block:
                raise ValueError("blocks must be nonempty")
            if any(not isinstance(i, int) or i < 1 for i in block):
                raise ValueError(f"block indices must be positive ints, got {raw!r}")
            norm.append(block)
        for left, right in zip(norm, norm[1:]):
            if left[-1] >= right[0]:
                raise ValueError(
                    f"blocks must be strictly separated, got max {left[-1]} before min {right[0]}"
                )
        object.__setattr__(self, "blocks", tuple(norm))

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def max_index(self) -> int:
        return self.blocks[-1][-1] if self.blocks else 0

    def prefix(self, count: int) -> "BlockSystem":
        return BlockSystem(self.blocks[:count])

    def to_json(self) -> List[List[int]]:
        return [list(b) for b in self.blocks]

    @staticmethod
    def from_json(data) -> "BlockSystem":
        if not isinstance(data, list):
            raise ValueError(f"bad block-system payload {data!r}")
        return BlockSystem(tuple(tuple(b) for b in data))


@dataclass(frozen=True)
class SequenceFamily:
    """l sequences over one ring, indexed 1-based: entry(i, n) = x_{i,n}."""

    ring: WeakRing
    rows: Tuple[Tuple[Element, ...], ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("a family needs at least one sequence")
        horizon = len(self.rows[0])
        for row in self.rows:
            if len(row) != horizon:
                raise ValueError("all sequences in a family must share one horizon")
            for x in row:
                self.ring.check_element(x)

    @property
    def l(self) -> int:
        return len(self.rows)

    @property
    def horizon(self) -> int:
        return len(self.rows[0])

    def entry(self, i: int, n: int) -> Element:
        """x_{i,n} with 1-based i (sequence) and n (position)."""
        if not 1 <= i <= self.l:
            raise IndexOutOfHorizon(f"sequence index {i} outside 1..{self.l}")
        if not 1 <= n <= self.horizon:
            raise IndexOutOfHorizon(f"position {n} outside horizon 1..{self.horizon}")
        return self.rows[i - 1][n - 1]

    def prefix(self, k: int) -> "SequenceFamily":
        if k > self.horizon:
            raise IndexOutOfHorizon(f"prefix {k} exceeds horizon {self.horizon}")
        return SequenceFamily(self.ring, tuple(row[:k] for row in self.rows))

    @classmethod
    def from_rows(cls, ring: WeakRing, rows: Iterable[Iterable[Element]]) -> "SequenceFamily":
        return cls(ring, tuple(tuple(row) for row in rows))

    @classmethod
    def from_function(
        cls, ring: WeakRing, l: int, horizon: int, fn: Callable[[int, int], Element]
    ) -> "SequenceFamily":
        """Build rows from fn(i, n), both arguments 1-based."""
        return cls(
            ring,
            tuple(
                tuple(fn(i, n) for n in range(1, horizon + 1)) for i in range(1, l + 1)
            ),
        )

    @classmethod
    def single(cls, ring: WeakRing, xs: Iterable[Element]) -> "SequenceFamily":
        return cls(ring, (tuple(xs),))


def sum_subsystem(fam: SequenceFamily, blocks: BlockSystem) -> SequenceFamily:
    """Row-wise block sums: y_{i,j} = sum over t in H_j of x_{i,t}."""
    if len(blocks) and blocks.max_index > fam.horizon:
        raise IndexOutOfHorizon(
            f"block index {blocks.max_index} exceeds family horizon {fam.horizon}"
        )
    ring = fam.ring
    rows = tuple(
        tuple(ring.fold_add(fam.entry(i, t) for t in block) for block in blocks.blocks)
        for i in range(1, fam.l + 1)
    )
    return SequenceFamily(ring, rows)


# ---------------------------------------------------------------------------
# Term enumeration
# ---------------------------------------------------------------------------


def iter_sum_terms(k: int, l: int) -> Iterator[FormalTerm]:
    """All zigzag sum terms over positions 1..k and sequences 1..l."""
    _check_kl(k, l)
    for size in range(1, k + 1):
        for word in itertools.combinations(range(1, k + 1), size):
            for sel in itertools.product(range(1, l + 1), repeat=size):
                yield FormalTerm(SUM, word, sel)


def iter_increasing_product_terms(k: int, l: int) -> Iterator[FormalTerm]:
    """All zigzag increasing-order product terms."""
    _check_kl(k, l)
    for size in range(1, k + 1):
        for word in itertools.combinations(range(1, k + 1), size):
            for sel in itertools.product(range(1, l + 1), repeat=size):
                yield FormalTerm(INCREASING_PRODUCT, word, sel)


def iter_ordered_product_terms(k: int, l: int) -> Iterator[FormalTerm]:
    """All zigzag arbitrary-order (injective word) product terms."""
    _check_kl(k, l)
    for size in range(1, k + 1):
        for word in itertools.permutations(range(1, k + 1), size):
            for sel in itertools.product(range(1, l + 1), repeat=size):
                yield FormalTerm(ORDERED_PRODUCT, word, sel)


def sum_term_count(k: int, l: int) -> int:
    _check_kl(k, l)
    return (l + 1) ** k - 1


def increasing_product_term_count(k: int, l: int) -> int:
    return sum_term_count(k, l)


def ordered_product_term_count(k: int, l: int) -> int:
    _check_kl(k, l)
    return sum(math.perm(k, r) * l**r for r in range(1, k + 1))


def _check_kl(k: int, l: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive int, got {k!r}")
    if not isinstance(l, int) or l < 1:
        raise ValueError(f"l must be a positive int, got {l!r}")


def evaluate_term(fam: SequenceFamily, term: FormalTerm) -> Element:
    """Exact value of a formal term over the family, in the listed order."""
    ring = fam.ring
    factors = (fam.entry(s, n) for n, s in zip(term.indices, term.selector))
    if term.kind == SUM:
        return ring.fold_add(factors)
    return ring.fold_mul(factors)


# ---------------------------------------------------------------------------
# Materialized configuration sets
# ---------------------------------------------------------------------------

TermValue = Tuple[FormalTerm, Element]


def _materialize(
    fam: SequenceFamily,
    k: int,
    terms: Iterator[FormalTerm],
    count: int,
    term_cap: int,
) -> List[TermValue]:
    if k > fam.horizon:
        raise IndexOutOfHorizon(f"k={k} exceeds family horizon {fam.horizon}")
    if count > term_cap:
        raise BudgetExceeded(
            f"enumeration needs {count} terms, cap is {term_cap}", count, term_cap
        )
    return [(t, evaluate_term(fam, t)) for t in terms]


def zigzag_finite_sums(
    fam: SequenceFamily, k: int, term_cap: int = DEFAULT_TERM_CAP
) -> List[TermValue]:
    """All (l+1)^k - 1 zigzag sums over the first k positions."""
    return _materialize(
        fam, k, iter_sum_terms(k, fam.l), sum_term_count(k, fam.l), term_cap
    )


def zigzag_finite_products(
    fam: SequenceFamily, k: int, term_cap: int = DEFAULT_TERM_CAP
) -> List[TermValue]:
    """All (l+1)^k - 1 zigzag increasing-order products."""
    return _materialize(
        fam,
        k,
        iter_increasing_product_terms(k, fam.l),
        increasing_product_term_count(k, fam.l),
        term_cap,
    )


def zigzag_all_products(
    fam: SequenceFamily, k: int, term_cap: int = DEFAULT_TERM_CAP
) -> List[TermValue]:
    """All zigzag products over injective index words of length 1..k."""
    return _materialize(
        fam,
        k,
        iter_ordered_product_terms(k, fam.l),
        ordered_product_term_count(k, fam.l),
        term_cap,
    )


def _single_family(ring: WeakRing, xs: Sequence[Element], k: int) -> SequenceFamily:
    _check_kl(k, 1)
    if len(xs) < k:
        raise IndexOutOfHorizon(f"k={k} exceeds sequence length {len(xs)}")
    return SequenceFamily.single(ring, xs)


def finite_sums(
    ring: WeakRing, xs: Sequence[Element], k: int, term_cap: int = DEFAULT_TERM_CAP
) -> List[TermValue]:
    """All 2^k - 1 nonempty-subset sums of a single sequence.

    Implemented directly over subsets (not via the zigzag enumerator) so the
    l=1 collapse is a meaningful cross-check rather than a tautology.
    """
    fam = _single_family(ring, xs, k)
    if 2**k - 1 > term_cap:
        raise BudgetExceeded(f"enumeration needs {2**k - 1} terms", 2**k - 1, term_cap)
    out: List[TermValue] = []
    for size in range(1, k + 1):
        for word in itertools.combinations(range(1, k + 1), size):
            term = FormalTerm(SUM, word, (1,) * size)
            out.append((term, ring.fold_add(fam.entry(1, n) for n in word)))
    return out


def finite_products(
    ring: WeakRing, xs: Sequence[Element], k: int, term_cap: int = DEFAULT_TERM_CAP
) -> List[TermValue]:
    """All 2^k - 1 increasing-order subset products of a single sequence."""
    fam = _single_family(ring, xs, k)
    if 2**k - 1 > term_cap:
        raise BudgetExceeded(f"enumeration needs {2**k - 1} terms", 2**k - 1, term_cap)
    out: List[TermValue] = []
    for size in range(1, k + 1):
        for word in itertools.combinations(range(1, k + 1), size):
            term = FormalTerm(INCREASING_PRODUCT, word, (1,) * size)
            out.append((term, ring.fold_mul(fam.entry(1, n) for n in word)))
    return out


def all_products(
    ring: WeakRing, xs: Sequence[Element], k: int, term_cap: int = DEFAULT_TERM_CAP
) -> List[TermValue]:
    """Products over every injective index word of length 1..k."""
    fam = _single_family(ring, xs, k)
    count = ordered_product_term_count(k, 1)
    if count > term_cap:
        raise BudgetExceeded(f"enumeration needs {count} terms", count, term_cap)
    out: List[TermValue] = []
    for size in range(1, k + 1):
        for word in itertools.permutations(range(1, k + 1), size):
            term = FormalTerm(ORDERED_PRODUCT, word, (1,) * size)
            out.append((term, ring.fold_mul(fam.entry(1, n) for n in word)))
    return out


def value_set(pairs: Iterable[TermValue]) -> set:
    """Distinct values of a term/value listing."""
    return {v for _, v in pairs}
