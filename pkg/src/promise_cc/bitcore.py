"""Bitstrings, Hamming statistics, and the four promise-problem families.

Words are written the way they are indexed in the protocols: position 1 is the
leftmost character of the ASCII form, so "110" has its first two bits set.
Python-level indexing is 0-based from the left.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Union

from ._limits import check_exhaustive
from .errors import DimensionMismatch, ParameterError


class BitString:
    """Fixed-length binary word.  Immutable and hashable."""

    __slots__ = ("_mask", "_n")

    def __init__(self, bits: Union[str, Iterable[int]]):
        if isinstance(bits, str):
            if not bits or set(bits) - {"0", "1"}:
                raise ParameterError(f"not a binary string: {bits!r}")
            self._n = len(bits)
            self._mask = int(bits, 2)
        else:
            seq = tuple(bits)
            if not seq or any(b not in (0, 1) for b in seq):
                raise ParameterError(f"bits must be a nonempty 0/1 sequence, got {seq!r}")
            self._n = len(seq)
            mask = 0
            for b in seq:
                mask = (mask << 1) | b
            self._mask = mask

    @classmethod
    def from_int(cls, value: int, n: int) -> "BitString":
        """Word of length n whose ASCII form is value written in binary (MSB first)."""
        if n < 1 or not 0 <= value < (1 << n):
            raise ParameterError(f"value {value} out of range for length {n}")
        obj = object.__new__(cls)
        obj._mask = value
        obj._n = n
        return obj

    @property
    def mask(self) -> int:
        """Integer whose binary digits (MSB first) spell the word."""
        return self._mask

    def weight(self) -> int:
        return self._mask.bit_count()

    def complement(self) -> "BitString":
        return BitString.from_int(self._mask ^ ((1 << self._n) - 1), self._n)

    def ones(self) -> tuple[int, ...]:
        """0-based positions carrying a 1, ascending."""
        return tuple(i for i in range(self._n) if self[i])

    def __len__(self) -> int:
        return self._n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self._n:
            raise IndexError(i)
        return (self._mask >> (self._n - 1 - i)) & 1

    def __iter__(self) -> Iterator[int]:
        return ((self._mask >> (self._n - 1 - i)) & 1 for i in range(self._n))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitString)
            and self._n == other._n
            and self._mask == other._mask
        )

    def __hash__(self) -> int:
        return hash((self._n, self._mask))

    def __str__(self) -> str:
        return format(self._mask, f"0{self._n}b")

    def __repr__(self) -> str:
        return f"BitString({str(self)!r})"


class HammingStats(NamedTuple):
    weight_x: int
    weight_y: int
    distance: int
    and_weight: int


def hamming_stats(x: BitString, y: BitString) -> HammingStats:
    """Weights, Hamming distance and intersection size of two equal-length words.

    Satisfies distance == weight_x + weight_y - 2 * and_weight.
    """
    if len(x) != len(y):
        raise DimensionMismatch(f"length mismatch: {len(x)} vs {len(y)}")
    return HammingStats(
        weight_x=x.mask.bit_count(),
        weight_y=y.mask.bit_count(),
        distance=(x.mask ^ y.mask).bit_count(),
        and_weight=(x.mask & y.mask).bit_count(),
    )


class Family(str, Enum):
    """The four promise families.

    EQ_K:          yes iff H(x,y)=0, no iff H(x,y)=k           (k >= n/2)
    DJ_K:          yes iff W(x)=0,   no iff W(x)=k             (k >= n/2, single input)
    DISJ_LAMBDA:   yes iff |x^y|=0,  no iff lam*n <= |x^y| <= (1-lam)*n   (0 < lam <= 1/4)
    DISJ_PRIME_K:  yes iff |x^y|=0,  no iff |x^y|=k            (k >= n/2)
    """

    EQ_K = "eqk"
    DJ_K = "djk"
    DISJ_LAMBDA = "disj"
    DISJ_PRIME_K = "disjk"


class Label(Enum):
    YES = "yes"
    NO = "no"
    OFF_PROMISE = "off_promise"


_PAIR_FAMILIES = (Family.EQ_K, Family.DISJ_LAMBDA, Family.DISJ_PRIME_K)
_K_FAMILIES = (Family.EQ_K, Family.DJ_K, Family.DISJ_PRIME_K)


@dataclass(frozen=True)
class PromiseInstance:
    """One input (or input pair) of a promise family together with its parameters.

    The label is derived, never stored, so it cannot disagree with the
    family predicate.
    """

    family: Family
    x: BitString
    y: BitString | None = None
    k: int | None = None
    lam: Fraction | None = None

    def __post_init__(self) -> None:
        if self.family in _PAIR_FAMILIES:
            if self.y is None:
                raise ParameterError(f"{self.family.value} needs two inputs")
            if len(self.x) != len(self.y):
                raise DimensionMismatch(
                    f"length mismatch: {len(self.x)} vs {len(self.y)}"
                )
        elif self.y is not None:
            raise ParameterError(f"{self.family.value} takes a single input")
        _check_params(self.family, len(self.x), self.k, self.lam)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def label(self) -> Label:
        return classify(self)

    def to_json(self) -> dict:
        out: dict = {"family": self.family.value, "n": self.n, "x": str(self.x)}
        if self.y is not None:
            out["y"] = str(self.y)
        if self.k is not None:
            out["k"] = self.k
        if self.lam is not None:
            out["lambda"] = f"{self.lam.numerator}/{self.lam.denominator}"
        out["label"] = self.label.value
        return out


def _check_params(family: Family, n: int, k: int | None, lam: Fraction | None) -> None:
    if family in _K_FAMILIES:
        if lam is not None:
            raise ParameterError(f"{family.value} takes k, not lambda")
        if k is None:
            raise ParameterError(f"{family.value} needs the parameter k")
        if k < 1 or 2 * k < n:
            raise ParameterError(f"{family.value} needs k >= n/2 >= 1, got k={k}, n={n}")
    else:
        if k is not None:
            raise ParameterError("disj takes lambda, not k")
        if lam is None:
            raise ParameterError("disj needs the parameter lambda")
        if not 0 < lam <= Fraction(1, 4):
            raise ParameterError(f"lambda must lie in (0, 1/4], got {lam}")


def classify(instance: PromiseInstance) -> Label:
    """Label an instance by its family predicate, exactly.

    Rational thresholds (lambda * n) are compared as fractions; no floating
    point enters the classification.
    """
    fam = instance.family
    n = instance.n
    if fam is Family.DJ_K:
        w = instance.x.weight()
        if w == 0:
            return Label.YES
        return Label.NO if w == instance.k else Label.OFF_PROMISE
    stats = hamming_stats(instance.x, instance.y)
    if fam is Family.EQ_K:
        if stats.distance == 0:
            return Label.YES
        return Label.NO if stats.distance == instance.k else Label.OFF_PROMISE
    m = stats.and_weight
    if m == 0:
        return Label.YES
    if fam is Family.DISJ_PRIME_K:
        return Label.NO if m == instance.k else Label.OFF_PROMISE
    if instance.lam * n <= m <= (1 - instance.lam) * n:
        return Label.NO
    return Label.OFF_PROMISE


def enumerate_promise(
    family: Family, n: int, param: Union[int, Fraction]
) -> Iterator[PromiseInstance]:
    """Every on-promise instance of the family at length n, exactly once.

    Order is lexicographic on (x, y) so runs are reproducible and streams can
    be restarted.  Refuses n above the exhaustive limit.
    """
    check_exhaustive(n, f"enumerating {family.value}")
    k = param if family in _K_FAMILIES else None
    lam = Fraction(param) if family is Family.DISJ_LAMBDA else None
    _check_params(family, n, k, lam)
    if family is Family.DJ_K:
        for xv in range(1 << n):
            inst = PromiseInstance(family, BitString.from_int(xv, n), k=k)
            if inst.label is not Label.OFF_PROMISE:
                yield inst
        return
    for xv in range(1 << n):
        x = BitString.from_int(xv, n)
        for yv in range(1 << n):
            inst = PromiseInstance(
                family, x, BitString.from_int(yv, n), k=k, lam=lam
            )
            if inst.label is not Label.OFF_PROMISE:
                yield inst
