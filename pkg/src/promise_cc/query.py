"""Query algorithms for the single-input weight promise problem.

The quantum algorithm decides "all zeros" versus "weight exactly k" with a
single phase query; the deterministic decision tree needs n-k+1 queries, and
the adversary argument below shows no deterministic tree of depth n-k can
succeed.  A strict mode covers the looser "weight greater than k" reading of
the no-case, under which the quantum algorithm is no longer exact (its
acceptance probability is simply reported) and n-k deterministic queries
suffice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import qsim
from .bitcore import BitString
from .errors import ParameterError, PromiseViolation
from .protocols import _eqk_ops


@dataclass(frozen=True)
class QueryRun:
    queries_used: int
    output: int
    output_probability: float

    def to_json(self) -> dict:
        return {
            "queries": self.queries_used,
            "output": self.output,
            "probability": self.output_probability,
        }


def djk_accept_prob_closed_form(n: int, k: int, w: int) -> float:
    """Acceptance probability of the 1-query algorithm at Hamming weight w."""
    if k < 1 or 2 * k < n:
        raise ParameterError(f"need k >= n/2 >= 1, got n={n}, k={k}")
    if not 0 <= w <= n:
        raise ParameterError(f"weight {w} out of range for n={n}")
    return ((k - w) / k) ** 2


def run_djk_quantum(x: BitString, k: int) -> QueryRun:
    """Single-query algorithm; outputs 1 iff the final measurement lands on |0>.

    Runs on any input and reports the acceptance probability, so off-promise
    behavior (and the strict-mode non-exactness for w > k) is visible rather
    than hidden.
    """
    n = len(x)
    rot, spread, spread_inv, rot_inv = _eqk_ops(n, k)
    v = np.zeros(n + 1, dtype=np.complex128)
    v[0] = 1.0
    v = rot.apply_raw(v)
    v = spread.apply_raw(v)
    v = qsim.phase_oracle(x).apply_raw(v)  # the one query
    v = spread_inv.apply_raw(v)
    v = rot_inv.apply_raw(v)
    prob = float(abs(v[0]) ** 2)
    return QueryRun(queries_used=1, output=int(prob > 0.5), output_probability=prob)


def _check_promise(x: BitString, k: int, strict: bool) -> None:
    w = x.weight()
    if strict:
        ok = w == 0 or w > k
    else:
        ok = w in (0, k)
    if not ok:
        raise PromiseViolation(f"weight {w} violates the promise for k={k}")


def run_djk_deterministic(x: BitString, k: int, strict: bool = False) -> QueryRun:
    """Query a fixed prefix and accept iff it is all zeros.

    Default promise (weight 0 or exactly k): n-k+1 queried zeros cap the
    weight at k-1, forcing weight 0.  Strict promise (weight 0 or > k):
    n-k queried zeros already cap the weight at k.
    """
    n = len(x)
    if k < 1 or 2 * k < n:
        raise ParameterError(f"need k >= n/2 >= 1, got n={n}, k={k}")
    if k > n:
        raise ParameterError(f"need k <= n, got k={k}, n={n}")
    _check_promise(x, k, strict)
    budget = n - k if strict else n - k + 1
    output = int(all(x[i] == 0 for i in range(budget)))
    return QueryRun(queries_used=budget, output=output, output_probability=1.0)


Tree = Callable[[Callable[[int], int]], int]


@dataclass(frozen=True)
class AdversaryWitness:
    """Two promise inputs a depth-limited tree cannot tell apart."""

    yes_input: BitString
    no_input: BitString
    queried: tuple[int, ...]
    tree_output: int

    def to_json(self) -> dict:
        return {
            "yes_input": str(self.yes_input),
            "no_input": str(self.no_input),
            "queried": list(self.queried),
            "tree_output": self.tree_output,
        }


def _default_tree(n: int, k: int) -> Tree:
    def tree(query: Callable[[int], int]) -> int:
        return int(all(query(i) == 0 for i in range(n - k)))

    return tree


def _run_tree(tree: Tree, bits: Callable[[int], int], n: int, depth: int):
    queried: list[int] = []
    seen: set[int] = set()

    def query(i: int) -> int:
        if not 0 <= i < n:
            raise ParameterError(f"query position {i} out of range")
        if i not in seen:
            seen.add(i)
            queried.append(i)
            if len(seen) > depth:
                raise ParameterError(
                    f"tree queried more than {depth} distinct positions"
                )
        return bits(i)

    return tree(query), tuple(queried)


def adversary_check(n: int, k: int, tree: Tree | None = None) -> AdversaryWitness:
    """Defeat a deterministic decision tree of depth n-k with an all-zeros adversary.

    The tree is driven with every answer 0; since at most n-k positions get
    queried, at least k positions remain free to host a weight-k string that
    is indistinguishable from the all-zeros string along the queried path.
    The pair (one yes-instance, one no-instance) reaches the same leaf, so the
    tree errs on one of them.
    """
    if k < 1 or 2 * k < n or k > n:
        raise ParameterError(f"need n/2 <= k <= n, got n={n}, k={k}")
    if tree is None:
        tree = _default_tree(n, k)
    out_zero, queried = _run_tree(tree, lambda i: 0, n, n - k)
    free = [i for i in range(n) if i not in set(queried)]
    support = free[:k]
    mask = 0
    for i in support:
        mask |= 1 << (n - 1 - i)
    no_input = BitString.from_int(mask, n)
    out_no, queried_no = _run_tree(tree, lambda i: no_input[i], n, n - k)
    if out_no != out_zero or queried_no != queried:
        raise ParameterError("tree is not deterministic: runs diverged on equal answers")
    return AdversaryWitness(
        yes_input=BitString.from_int(0, n),
        no_input=no_input,
        queried=queried,
        tree_output=out_zero,
    )
