"""Desk-scale rectangle lower bounds for the deterministic protocols.

The counting argument behind both bounds is the same: pick a set E of
guaranteed yes-pairs, show that no single 1-monochromatic rectangle can hold
two members of E whose intersection size equals a forbidden value, and divide
|E| by the exact maximum size of a family avoiding that value.  The maximum
family is found by exact search (maximum clique on the compatibility graph,
branch and bound with greedy-coloring bounds), so everything here is a
certificate at small n rather than an asymptotic claim.  The asymptotic
thresholds from the literature are reported for reference, never asserted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable

import numpy as np

from . import _kernels
from ._limits import check_exhaustive
from .bitcore import BitString
from .errors import ParameterError


@dataclass(frozen=True)
class ConflictFamilyResult:
    """Exact maximum family whose pairwise intersection sizes avoid one value."""

    n: int
    forbidden: int
    max_size: int
    witness: tuple[BitString, ...]
    universe_size: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "l": self.forbidden,
            "max_size": self.max_size,
            "witness": [str(w) for w in self.witness],
            "universe_size": self.universe_size,
        }


def _compatibility_words(masks: np.ndarray, forbidden: int) -> np.ndarray:
    """Bitset adjacency of the graph joining words whose AND-weight is not forbidden."""
    v = masks.shape[0]
    inter = np.bitwise_count(masks[:, None] & masks[None, :])
    compat = inter != forbidden
    np.fill_diagonal(compat, False)
    words = ((v + 63) // 64) * 8  # bytes, padded to whole uint64 words
    packed = np.packbits(compat, axis=1, bitorder="little")
    if packed.shape[1] < words:
        packed = np.pad(packed, ((0, 0), (0, words - packed.shape[1])))
    return np.ascontiguousarray(packed).view("<u8")


def max_family_avoiding(
    n: int, forbidden: int, universe: Iterable[int] | None = None
) -> ConflictFamilyResult:
    """Exact maximum family in the universe with no pair intersecting in `forbidden` places.

    The default universe is all of {0,1}^n; callers may restrict it (for
    example to one Hamming-weight slice).  Returns a witness family of
    maximum size; the search is deterministic, so reruns reproduce it.
    """
    if not 0 <= forbidden <= n:
        raise ParameterError(f"forbidden size {forbidden} out of range for n={n}")
    check_exhaustive(n, "exact family search")
    if universe is None:
        masks = np.arange(1 << n, dtype=np.uint64)
    else:
        masks = np.array(sorted(set(int(u) for u in universe)), dtype=np.uint64)
        if masks.size and int(masks.max()) >= (1 << n):
            raise ParameterError("universe contains words longer than n bits")
    if masks.size == 0:
        return ConflictFamilyResult(n, forbidden, 0, (), 0)
    adj = _compatibility_words(masks, forbidden)
    size, members = _kernels.max_clique(adj, masks.size)
    witness = tuple(BitString.from_int(int(masks[i]), n) for i in members)
    return ConflictFamilyResult(n, forbidden, size, witness, masks.size)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _ceil_log2(c: int) -> int:
    return (c - 1).bit_length()


@dataclass(frozen=True)
class RectangleBound:
    """Rectangle-count lower bound c1_lower and the implied bit bound."""

    n: int
    forbidden: int
    pattern_count: int  # |E|, the diagonal/antidiagonal yes-set being split
    family_max: int
    witness: tuple[BitString, ...]
    c1_lower: int
    bit_lower: int
    k: int | None = None
    lam: Fraction | None = None
    reference_thresholds: dict | None = None

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "forbidden": self.forbidden,
            "pattern_count": self.pattern_count,
            "family_max": self.family_max,
            "witness": [str(w) for w in self.witness],
            "c1_lower": self.c1_lower,
            "bit_lower": self.bit_lower,
        }
        if self.k is not None:
            out["k"] = self.k
        if self.lam is not None:
            out["lambda"] = f"{self.lam.numerator}/{self.lam.denominator}"
        if self.reference_thresholds:
            out["reference_thresholds"] = self.reference_thresholds
        return out


def eqk_rectangle_bound(n: int, k: int) -> RectangleBound:
    """Lower bound for the equality-at-distance-k problem, even k, n/2 <= k <= n.

    E is the diagonal over the middle weight slice; two diagonal points whose
    words intersect in floor((n-k)/2) places would put a distance-k pair into
    the same 1-rectangle, so within a rectangle the slice words must avoid
    that intersection size.  The family search runs inside the slice, which
    is exactly the set E projects to.
    """
    if k % 2 != 0:
        raise ParameterError(f"k must be even, got {k}")
    if 2 * k < n or k > n:
        raise ParameterError(f"need n/2 <= k <= n, got n={n}, k={k}")
    check_exhaustive(n, "rectangle bound")
    half = n // 2
    forbidden = (n - k) // 2
    slice_masks = [v for v in range(1 << n) if v.bit_count() == half]
    fam = max_family_avoiding(n, forbidden, universe=slice_masks)
    e_size = comb(n, half)
    c1 = _ceil_div(e_size, fam.max_size)
    return RectangleBound(
        n=n,
        forbidden=forbidden,
        pattern_count=e_size,
        family_max=fam.max_size,
        witness=fam.witness,
        c1_lower=c1,
        bit_lower=_ceil_log2(c1),
        k=k,
        reference_thresholds={"diagonal_vs_2n_over_n": 2**n / n},
    )


def disj_rectangle_bound(n: int, lam) -> RectangleBound:
    """Lower bound for the disjointness promise problem, n divisible by 4.

    E pairs every middle-weight word with its complement; two such pairs whose
    words intersect in exactly n/4 places would force an on-promise no-pair
    into the same 1-rectangle, so the family search forbids intersection n/4
    inside the weight band.
    """
    lam = Fraction(lam)
    if n % 4 != 0:
        raise ParameterError(f"n must be divisible by 4, got {n}")
    if not 0 < lam <= Fraction(1, 4):
        raise ParameterError(f"lambda must lie in (0, 1/4], got {lam}")
    check_exhaustive(n, "rectangle bound")
    lo, hi = lam * n, (1 - lam) * n
    band = [v for v in range(1 << n) if lo <= v.bit_count() <= hi]
    fam = max_family_avoiding(n, n // 4, universe=band)
    e_size = len(band)
    c1 = _ceil_div(e_size, fam.max_size)
    return RectangleBound(
        n=n,
        forbidden=n // 4,
        pattern_count=e_size,
        family_max=fam.max_size,
        witness=fam.witness,
        c1_lower=c1,
        bit_lower=_ceil_log2(c1),
        lam=lam,
        reference_thresholds={"family_vs_1_99n": 1.99**n, "band_vs_2n_over_2": 2**n / 2},
    )
