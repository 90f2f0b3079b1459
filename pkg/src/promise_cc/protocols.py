"""Executable two-party protocols with transcripts and cost accounting.

Conventions shared by every runner:

* Exact mode evolves the statevector and reports the probability of output 1;
  the recorded output is the majority outcome (ties round down).  Sample mode
  draws measurement outcomes from the seeded per-shot generator and reports
  the tally over `shots` runs.
* The party who measures or decides holds the output; a final 1-bit classical
  message is counted whenever the other party must learn the result.
* Quantum messages cost ceil(log2 d) qubits for a d-dimensional state,
  classical messages their bit length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import NamedTuple

import numpy as np

from . import qsim
from ._rng import shot_generator
from .bitcore import BitString, hamming_stats
from .errors import DimensionMismatch, ParameterError, PromiseViolation
from .qsim import StateVector

CLASSICAL = "classical"
QUANTUM = "quantum"


def qubits_for(dim: int) -> int:
    """Qubits needed to carry a dim-dimensional state."""
    return (dim - 1).bit_length()


class Message(NamedTuple):
    direction: str  # "A->B" or "B->A"
    kind: str  # CLASSICAL or QUANTUM
    size: int  # bits if classical, qubits if quantum
    payload: object = None  # StateVector, tuple of bits/positions, or None

    def to_json(self) -> dict:
        return {"direction": self.direction, "kind": self.kind, "size": self.size}


@dataclass(slots=True)
class ProtocolTranscript:
    messages: list[Message]
    output: int
    output_probability: float
    shots: int | None = None  # sample-mode tally base, None in exact mode

    @property
    def qubit_cost(self) -> int:
        return sum(m.size for m in self.messages if m.kind == QUANTUM)

    @property
    def bit_cost(self) -> int:
        return sum(m.size for m in self.messages if m.kind == CLASSICAL)

    @property
    def total_cost(self) -> int:
        return self.qubit_cost + self.bit_cost

    def to_json(self) -> dict:
        out = {
            "messages": [m.to_json() for m in self.messages],
            "qubit_cost": self.qubit_cost,
            "bit_cost": self.bit_cost,
            "total_cost": self.total_cost,
            "output": self.output,
            "output_probability": self.output_probability,
        }
        if self.shots is not None:
            out["shots"] = self.shots
        return out


@dataclass(frozen=True)
class RepetitionPolicy:
    """Round count bringing the one-sided error of a repeated protocol below epsilon."""

    lam: Fraction
    epsilon: Fraction
    repetitions: int

    @staticmethod
    def _validate(lam: Fraction, epsilon: Fraction) -> tuple[Fraction, Fraction]:
        lam = Fraction(lam)
        epsilon = Fraction(epsilon)
        if not 0 < lam <= Fraction(1, 4):
            raise ParameterError(f"lambda must lie in (0, 1/4], got {lam}")
        if not 0 < epsilon < 1:
            raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
        return lam, epsilon

    @classmethod
    def for_quantum(cls, lam, epsilon=Fraction(1, 3)) -> "RepetitionPolicy":
        # single-round rejection probability on no-instances is at least 3*lam
        lam, epsilon = cls._validate(lam, epsilon)
        reps = max(1, math.ceil(math.log2(epsilon) / math.log2(1 - 3 * lam)))
        return cls(lam, epsilon, reps)

    @classmethod
    def for_probabilistic(cls, lam, epsilon=Fraction(1, 3)) -> "RepetitionPolicy":
        # each sampled position hits the intersection with probability >= lam
        lam, epsilon = cls._validate(lam, epsilon)
        reps = max(1, math.ceil(math.log2(epsilon) / math.log2(1 - lam)))
        return cls(lam, epsilon, reps)


def _finish(messages, prob, mode, seed, shots, sampler=None) -> ProtocolTranscript:
    """Common exact/sample bookkeeping; sampler(rng) may replace Bernoulli(prob)."""
    if mode == "exact":
        return ProtocolTranscript(messages, int(prob > 0.5), float(prob), None)
    if mode != "sample":
        raise ParameterError(f"mode must be 'exact' or 'sample', got {mode!r}")
    if shots < 1:
        raise ParameterError("sample mode needs shots >= 1")
    tally = 0
    for j in range(shots):
        rng = shot_generator(seed, j)
        if sampler is not None:
            tally += sampler(rng)
        else:
            tally += int(rng.random() < prob)
    output = int(2 * tally > shots)
    return ProtocolTranscript(messages, output, tally / shots, shots)


# ---------------------------------------------------------------------------
# quantum equality-at-distance-k protocol
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _eqk_ops(n: int, k: int):
    rot = qsim.bias_rotation(n, k)
    spread = qsim.uniform_spread(n)
    return rot, spread, spread.inverse(), rot.inverse()


def eqk_accept_prob_closed_form(n: int, k: int, h: int) -> float:
    """Probability that the quantum equality protocol outputs 1 at distance h.

    Derived by tracking the single surviving |0> amplitude through the
    pipeline: ((k - h) / k) ** 2.  Valid on and off promise.
    """
    if k < 1 or 2 * k < n:
        raise ParameterError(f"need k >= n/2 >= 1, got n={n}, k={k}")
    if not 0 <= h <= n:
        raise ParameterError(f"distance {h} out of range for n={n}")
    return ((k - h) / k) ** 2


def run_eqk_quantum(
    x: BitString,
    y: BitString,
    k: int,
    mode: str = "exact",
    seed: int | None = None,
    shots: int = 1,
) -> ProtocolTranscript:
    """One quantum message of ceil(log2(n+1)) qubits; output 1 iff Bob measures |0>.

    Off-promise pairs are allowed and report the off-promise acceptance
    probability (the closed-form oracle covers those too).
    """
    n = len(x)
    if len(y) != n:
        raise DimensionMismatch(f"length mismatch: {n} vs {len(y)}")
    rot, spread, spread_inv, rot_inv = _eqk_ops(n, k)
    v = np.zeros(n + 1, dtype=np.complex128)
    v[0] = 1.0
    v = rot.apply_raw(v)
    v = spread.apply_raw(v)
    v = qsim.phase_oracle(x).apply_raw(v)
    sent = StateVector.wrap(v)
    v = qsim.phase_oracle(y).apply_raw(v)
    v = spread_inv.apply_raw(v)
    v = rot_inv.apply_raw(v)
    a = v[0]
    prob = float(a.real * a.real + a.imag * a.imag)
    messages = [Message("A->B", QUANTUM, qubits_for(n + 1), sent)]
    return _finish(messages, prob, mode, seed, shots)


# ---------------------------------------------------------------------------
# quantum disjointness protocol
# ---------------------------------------------------------------------------


def disj_accept_prob_closed_form(n: int, m: int) -> float:
    """Single-round probability of output 1 when the inputs overlap in m places."""
    if not 0 <= m <= n:
        raise ParameterError(f"overlap {m} out of range for n={n}")
    return ((n - 2 * m) / n) ** 2


def _disj_round(x: BitString, y: BitString):
    """Evolve one round; returns (alice_state, bob_state, accept probability)."""
    n = len(x)
    v = np.zeros(2 * n, dtype=np.complex128)
    v[0] = 1.0
    v = qsim.spread_column(n).apply_raw(v)
    swap = qsim.marked_swap(x)
    v = swap.apply_raw(v)
    sent_ab = StateVector.wrap(v)
    v = qsim.marked_phase(y).apply_raw(v)
    sent_ba = StateVector.wrap(v)
    v = swap.apply_raw(v)
    v = qsim.collect_row(n).apply_raw(v)
    a = v[0]
    return sent_ab, sent_ba, float(a.real * a.real + a.imag * a.imag)


def run_disj_quantum_once(
    x: BitString,
    y: BitString,
    mode: str = "exact",
    seed: int | None = None,
    shots: int = 1,
) -> ProtocolTranscript:
    """Single round over 2n basis states: two quantum messages plus the result bit."""
    n = len(x)
    if len(y) != n:
        raise DimensionMismatch(f"length mismatch: {n} vs {len(y)}")
    sent_ab, sent_ba, prob = _disj_round(x, y)
    q = qubits_for(2 * n)
    transcript = _finish([], prob, mode, seed, shots)
    transcript.messages = [
        Message("A->B", QUANTUM, q, sent_ab),
        Message("B->A", QUANTUM, q, sent_ba),
        Message("A->B", CLASSICAL, 1, (transcript.output,)),
    ]
    return transcript


def run_disj_quantum(
    x: BitString,
    y: BitString,
    policy: RepetitionPolicy | None = None,
    lam=Fraction(1, 4),
    epsilon=Fraction(1, 3),
    mode: str = "exact",
    seed: int | None = None,
    shots: int = 1,
) -> ProtocolTranscript:
    """Repeat the single round; output 1 only if every round measures the accept state.

    Exact mode multiplies the identical per-round probabilities.  One-sided:
    disjoint inputs are accepted with certainty regardless of the policy.
    """
    n = len(x)
    if len(y) != n:
        raise DimensionMismatch(f"length mismatch: {n} vs {len(y)}")
    if policy is None:
        policy = RepetitionPolicy.for_quantum(lam, epsilon)
    reps = policy.repetitions
    sent_ab, sent_ba, p_once = _disj_round(x, y)
    prob = p_once**reps

    def sampler(rng) -> int:
        return int(all(rng.random() < p_once for _ in range(reps)))

    transcript = _finish([], prob, mode, seed, shots, sampler=sampler)
    q = qubits_for(2 * n)
    messages = []
    for _ in range(reps):
        messages.append(Message("A->B", QUANTUM, q, sent_ab))
        messages.append(Message("B->A", QUANTUM, q, sent_ba))
        messages.append(Message("A->B", CLASSICAL, 1, None))
    transcript.messages = messages
    return transcript


# ---------------------------------------------------------------------------
# probabilistic disjointness protocol
# ---------------------------------------------------------------------------


def disj_prob_exact_error(weight: int, overlap: int, sample_size: int) -> Fraction:
    """Exact probability that position sampling misses the intersection.

    Alice samples s = min(sample_size, weight) of her one-positions without
    replacement; the miss probability is hypergeometric,
    C(weight-overlap, s) / C(weight, s), and zero once weight-overlap < s.
    """
    if not 0 <= overlap <= weight:
        raise ParameterError(f"overlap {overlap} out of range for weight {weight}")
    if sample_size < 0:
        raise ParameterError("sample_size must be nonnegative")
    s = min(sample_size, weight)
    if weight - overlap < s:
        return Fraction(0)
    return Fraction(comb(weight - overlap, s), comb(weight, s))


def run_disj_probabilistic(
    x: BitString,
    y: BitString,
    lam=None,
    epsilon=Fraction(1, 3),
    sample_size: int | None = None,
    mode: str = "exact",
    seed: int | None = None,
    shots: int = 1,
) -> ProtocolTranscript:
    """Alice sends sampled one-positions; Bob answers 0 iff he holds a 1 there too.

    When Alice has fewer ones than the sample size she sends all of them, so
    Bob then decides exactly; this keeps the protocol one-sided at every n.
    The position message costs s * ceil(log2 n) bits plus the result bit.
    """
    n = len(x)
    if len(y) != n:
        raise DimensionMismatch(f"length mismatch: {n} vs {len(y)}")
    if sample_size is None:
        if lam is None:
            raise ParameterError("need lambda or an explicit sample_size")
        sample_size = RepetitionPolicy.for_probabilistic(lam, epsilon).repetitions
    if sample_size < 1:
        raise ParameterError("sample_size must be >= 1")
    weight = x.weight()
    overlap = hamming_stats(x, y).and_weight
    s = min(sample_size, weight)
    bits_per_pos = (n - 1).bit_length()
    prob = float(disj_prob_exact_error(weight, overlap, sample_size))

    ones = x.ones()

    def sampler(rng) -> int:
        if s == len(ones):
            chosen = ones
        else:
            chosen = rng.choice(len(ones), size=s, replace=False)
            chosen = tuple(ones[int(i)] for i in chosen)
        return int(all(y[p] == 0 for p in chosen))

    transcript = _finish([], prob, mode, seed, shots, sampler=sampler)
    transcript.messages = [
        Message("A->B", CLASSICAL, s * bits_per_pos, None),
        Message("B->A", CLASSICAL, 1, (transcript.output,)),
    ]
    return transcript


# ---------------------------------------------------------------------------
# deterministic protocols (contracted on promise inputs only)
# ---------------------------------------------------------------------------


def _check_det_params(x: BitString, y: BitString, k: int) -> int:
    n = len(x)
    if len(y) != n:
        raise DimensionMismatch(f"length mismatch: {n} vs {len(y)}")
    if k < 1 or 2 * k < n or k > n:
        raise ParameterError(f"deterministic protocol needs n/2 <= k <= n, got k={k}, n={n}")
    return n


def run_eqk_deterministic(x: BitString, y: BitString, k: int) -> ProtocolTranscript:
    """Parity exchange for odd k, prefix comparison for even k.

    Odd k: equal weight parities force distance 0, differing parities force
    distance k.  Even k: matching the first n-k+1 positions caps the distance
    at k-1, which on promise means 0.
    """
    n = _check_det_params(x, y, k)
    distance = (x.mask ^ y.mask).bit_count()
    if distance != 0 and distance != k:
        raise PromiseViolation(f"eqk promise violated for x={x}, y={y} (distance {distance})")
    if k % 2 == 1:
        wx = x.mask.bit_count() & 1
        parity_bit = 1 - wx
        output = int(wx == (y.mask.bit_count() & 1))
        messages = [
            Message("A->B", CLASSICAL, 1, (parity_bit,)),
            Message("B->A", CLASSICAL, 1, (output,)),
        ]
    else:
        length = n - k + 1
        prefix = x.mask >> (k - 1)
        output = int(prefix == y.mask >> (k - 1))
        messages = [Message("A->B", CLASSICAL, length, prefix)]
    return ProtocolTranscript(messages, output, 1.0, None)


def run_disj_prime_deterministic(x: BitString, y: BitString, k: int) -> ProtocolTranscript:
    """Constant-cost protocol for intersection size promised to be 0 or k (k >= n/2).

    A weight below k on either side already certifies disjointness; otherwise
    the weights sum past n, forcing the intersection, except in the k = n/2
    boundary case where equal weights n/2 are resolved by comparing the first
    bit (equal supports versus complementary supports).
    """
    n = _check_det_params(x, y, k)
    overlap = (x.mask & y.mask).bit_count()
    if overlap != 0 and overlap != k:
        raise PromiseViolation(f"disjk promise violated for x={x}, y={y} (overlap {overlap})")
    wx, wy = x.mask.bit_count(), y.mask.bit_count()
    if 2 * k > n:
        if wx < k:
            return ProtocolTranscript([Message("A->B", CLASSICAL, 1, (1,))], 1, 1.0, None)
        output = int(wy < k)
        messages = [
            Message("A->B", CLASSICAL, 1, (0,)),
            Message("B->A", CLASSICAL, 1, (output,)),
        ]
        return ProtocolTranscript(messages, output, 1.0, None)
    # k == n/2
    if wx < k:
        return ProtocolTranscript([Message("A->B", CLASSICAL, 1, (1,))], 1, 1.0, None)
    if wx == k:
        first = Message("A->B", CLASSICAL, 2, (0, x[0]))
        if wy < k:
            output = 1
        elif wy == k:
            output = int(y[0] != x[0])
        else:
            output = 0
    else:
        first = Message("A->B", CLASSICAL, 1, (0,))
        output = int(wy < k)
    messages = [first, Message("B->A", CLASSICAL, 1, (output,))]
    return ProtocolTranscript(messages, output, 1.0, None)
