"""Finite automata with quantum and classical states, and the DFA reduction.

The automaton model applies one unitary per scanned symbol (chosen by the
current classical state), threads a deterministic classical transition
alongside, and measures once at the end: the acceptance probability is the
squared norm of the projection onto the accepting basis states.  Words are
given over the plain alphabet; the end-markers are added internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping

import numpy as np

from . import qsim
from ._limits import check_exhaustive
from .bitcore import BitString, Family, Label, enumerate_promise
from .errors import (
    DimensionMismatch,
    ParameterError,
    ReductionInputError,
)
from .protocols import CLASSICAL, Message, ProtocolTranscript
from .qsim import UnitaryOp

LEFT_END = "¢"  # cent sign
RIGHT_END = "$"


@dataclass(frozen=True)
class Mo1qcfa:
    """Measure-once one-way automaton with quantum and classical states."""

    quantum_dim: int
    classical_states: tuple[str, ...]
    alphabet: tuple[str, ...]
    quantum_transition: Mapping[tuple[str, str], UnitaryOp]
    classical_transition: Mapping[tuple[str, str], str]
    initial_quantum: int
    initial_classical: str
    accepting: frozenset[int]
    input_length: int | None = None  # builders pin the exact word length

    def __post_init__(self) -> None:
        full = tuple(self.alphabet) + (LEFT_END, RIGHT_END)
        for s in self.classical_states:
            for sym in full:
                if (s, sym) not in self.quantum_transition:
                    raise ParameterError(f"quantum transition missing for ({s!r}, {sym!r})")
                if (s, sym) not in self.classical_transition:
                    raise ParameterError(f"classical transition missing for ({s!r}, {sym!r})")
        for op in self.quantum_transition.values():
            if op.dim != self.quantum_dim:
                raise DimensionMismatch("transition unitary has wrong dimension")
        if self.initial_classical not in self.classical_states:
            raise ParameterError("initial classical state unknown")
        if not 0 <= self.initial_quantum < self.quantum_dim:
            raise ParameterError("initial quantum state out of range")
        if not self.accepting <= set(range(self.quantum_dim)):
            raise ParameterError("accepting set out of range")

    def to_json(self) -> dict:
        return {
            "quantum_dim": self.quantum_dim,
            "classical_states": list(self.classical_states),
            "alphabet": list(self.alphabet),
            "initial_quantum": self.initial_quantum,
            "initial_classical": self.initial_classical,
            "accepting": sorted(self.accepting),
            "input_length": self.input_length,
            "transitions": [
                {
                    "state": s,
                    "symbol": sym,
                    "next_state": self.classical_transition[(s, sym)],
                    "unitary": self.quantum_transition[(s, sym)].to_json(),
                }
                for s in self.classical_states
                for sym in tuple(self.alphabet) + (LEFT_END, RIGHT_END)
            ],
        }


def simulate_mo1qcfa(automaton: Mo1qcfa, word: str) -> float:
    """Exact acceptance probability of the automaton on the given word."""
    if automaton.input_length is not None and len(word) != automaton.input_length:
        raise DimensionMismatch(
            f"input length {len(word)} != expected {automaton.input_length}"
        )
    alphabet = set(automaton.alphabet)
    for sym in word:
        if sym not in alphabet:
            raise ParameterError(f"symbol {sym!r} outside the input alphabet")
    vec = np.zeros(automaton.quantum_dim, dtype=np.complex128)
    vec[automaton.initial_quantum] = 1.0
    state = automaton.initial_classical
    theta = automaton.quantum_transition
    delta = automaton.classical_transition
    for sym in (LEFT_END, *word, RIGHT_END):
        key = (state, sym)
        vec = theta[key].apply_raw(vec)
        state = delta[key]
    total = 0.0
    for i in automaton.accepting:
        a = vec[i]
        total += a.real * a.real + a.imag * a.imag
    return float(total)


def _flip_at(dim: int, index: int) -> UnitaryOp:
    signs = np.ones(dim, dtype=np.int8)
    signs[index] = -1
    return UnitaryOp.diagonal_phase(signs)


def _total_maps(states, symbols, theta, delta, advance, ident):
    """Fill the off-path (state, symbol) slots with identity plus normal advance.

    Malformed words (which the promise never produces) then read through
    harmlessly instead of leaving the transition functions partial.
    """
    for s in states:
        for sym in symbols:
            if (s, sym) not in theta:
                theta[(s, sym)] = ident
                delta[(s, sym)] = advance.get(s, s)


def build_automaton_eqk(n: int, k: int) -> Mo1qcfa:
    """Automaton deciding distance-0 versus distance-k words of the form x#y.

    n+1 quantum basis states and 2n+2 classical states: the classical track
    holds the head position within the current pass plus a pass marker, so
    the same position-indexed sign flips serve both halves of the word.
    """
    rot = qsim.bias_rotation(n, k)
    spread = qsim.uniform_spread(n)
    dim = n + 1
    open_op = UnitaryOp.dense(spread.materialize() @ rot.materialize())
    close_op = UnitaryOp.dense(
        rot.inverse().materialize() @ spread.inverse().materialize()
    )
    ident = qsim.identity(dim)

    states = tuple(f"x{i}" for i in range(1, n + 2)) + tuple(
        f"y{i}" for i in range(1, n + 2)
    )
    theta: dict[tuple[str, str], UnitaryOp] = {}
    delta: dict[tuple[str, str], str] = {}
    flips = {i: _flip_at(dim, i) for i in range(1, n + 1)}
    for pass_name in ("x", "y"):
        for i in range(1, n + 1):
            here = f"{pass_name}{i}"
            after = f"{pass_name}{i + 1}"
            theta[(here, "0")] = ident
            delta[(here, "0")] = after
            theta[(here, "1")] = flips[i]
            delta[(here, "1")] = after
    theta[("x1", LEFT_END)] = open_op
    delta[("x1", LEFT_END)] = "x1"
    theta[(f"x{n + 1}", "#")] = ident
    delta[(f"x{n + 1}", "#")] = "y1"
    theta[(f"y{n + 1}", RIGHT_END)] = close_op
    delta[(f"y{n + 1}", RIGHT_END)] = f"y{n + 1}"

    symbols = ("0", "1", "#", LEFT_END, RIGHT_END)
    advance = {}
    for pass_name in ("x", "y"):
        for i in range(1, n + 1):
            advance[f"{pass_name}{i}"] = f"{pass_name}{i + 1}"
    _total_maps(states, symbols, theta, delta, advance, ident)

    return Mo1qcfa(
        quantum_dim=dim,
        classical_states=states,
        alphabet=("0", "1", "#"),
        quantum_transition=theta,
        classical_transition=delta,
        initial_quantum=0,
        initial_classical="x1",
        accepting=frozenset({0}),
        input_length=2 * n + 1,
    )


def build_automaton_disj(n: int) -> Mo1qcfa:
    """Automaton for disjointness words of the form x#y#x over 2n quantum states.

    First x-pass swaps each marked level pair, the y-pass applies sign flips
    on the upper block, the second x-pass undoes the swaps, and the final
    unitary collects the uniform component back onto the accepting state.
    """
    if n < 1:
        raise ParameterError("need n >= 1")
    dim = 2 * n
    ident = qsim.identity(dim)
    swaps = {i: UnitaryOp.pair_swap(dim, [(i - 1, n + i - 1)]) for i in range(1, n + 1)}
    phases = {i: _flip_at(dim, n + i - 1) for i in range(1, n + 1)}

    states = tuple(
        f"{p}{i}" for p in ("a", "b", "c") for i in range(1, n + 2)
    )
    theta: dict[tuple[str, str], UnitaryOp] = {}
    delta: dict[tuple[str, str], str] = {}
    for i in range(1, n + 1):
        for p, ops in (("a", swaps), ("b", phases), ("c", swaps)):
            here, after = f"{p}{i}", f"{p}{i + 1}"
            theta[(here, "0")] = ident
            delta[(here, "0")] = after
            theta[(here, "1")] = ops[i]
            delta[(here, "1")] = after
    theta[("a1", LEFT_END)] = qsim.spread_column(n)
    delta[("a1", LEFT_END)] = "a1"
    theta[(f"a{n + 1}", "#")] = ident
    delta[(f"a{n + 1}", "#")] = "b1"
    theta[(f"b{n + 1}", "#")] = ident
    delta[(f"b{n + 1}", "#")] = "c1"
    theta[(f"c{n + 1}", RIGHT_END)] = qsim.collect_row(n)
    delta[(f"c{n + 1}", RIGHT_END)] = f"c{n + 1}"

    symbols = ("0", "1", "#", LEFT_END, RIGHT_END)
    advance = {}
    for p in ("a", "b", "c"):
        for i in range(1, n + 1):
            advance[f"{p}{i}"] = f"{p}{i + 1}"
    _total_maps(states, symbols, theta, delta, advance, ident)

    return Mo1qcfa(
        quantum_dim=dim,
        classical_states=states,
        alphabet=("0", "1", "#"),
        quantum_transition=theta,
        classical_transition=delta,
        initial_quantum=0,
        initial_classical="a1",
        accepting=frozenset({0}),
        input_length=3 * n + 2,
    )


def eqk_word(x: BitString, y: BitString) -> str:
    if len(x) != len(y):
        raise DimensionMismatch(f"length mismatch: {len(x)} vs {len(y)}")
    return f"{x}#{y}"


def disj_word(x: BitString, y: BitString) -> str:
    if len(x) != len(y):
        raise DimensionMismatch(f"length mismatch: {len(x)} vs {len(y)}")
    return f"{x}#{y}#{x}"


# ---------------------------------------------------------------------------
# DFA model and the reduction to a deterministic protocol
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dfa:
    states: tuple[Hashable, ...]
    alphabet: tuple[str, ...]
    transition: Mapping[tuple[Hashable, str], Hashable]
    start: Hashable
    accepting: frozenset

    def __post_init__(self) -> None:
        state_set = set(self.states)
        for s in self.states:
            for sym in self.alphabet:
                nxt = self.transition.get((s, sym))
                if nxt is None or nxt not in state_set:
                    raise ParameterError(f"transition not total at ({s!r}, {sym!r})")
        if self.start not in state_set or not self.accepting <= state_set:
            raise ParameterError("start or accepting states unknown")

    @property
    def n_states(self) -> int:
        return len(self.states)

    def run(self, word: str, start: Hashable | None = None) -> Hashable:
        state = self.start if start is None else start
        for sym in word:
            state = self.transition[(state, sym)]
        return state

    def accepts(self, word: str) -> bool:
        return self.run(word) in self.accepting


@dataclass(frozen=True)
class DfaProtocol:
    """Three-message deterministic protocol obtained from a DFA for x#y#x words."""

    dfa: Dfa
    n: int

    @property
    def state_bits(self) -> int:
        return (self.dfa.n_states - 1).bit_length()

    @property
    def bit_cost(self) -> int:
        return 1 + 2 * self.state_bits

    def run(self, x: BitString, y: BitString) -> ProtocolTranscript:
        if len(x) != self.n or len(y) != self.n:
            raise DimensionMismatch(f"inputs must have length {self.n}")
        index = {s: i for i, s in enumerate(self.dfa.states)}
        s1 = self.dfa.run(f"{x}#")
        s2 = self.dfa.run(f"{y}#", start=s1)
        s3 = self.dfa.run(str(x), start=s2)
        output = int(s3 in self.dfa.accepting)
        messages = [
            Message("A->B", CLASSICAL, self.state_bits, (index[s1],)),
            Message("B->A", CLASSICAL, self.state_bits, (index[s2],)),
            Message("A->B", CLASSICAL, 1, (output,)),
        ]
        return ProtocolTranscript(messages, output, 1.0, None)


def dfa_to_protocol(dfa: Dfa, n: int, verify: bool = True) -> DfaProtocol:
    """Wrap a DFA for the x#y#x disjointness words as a communication protocol.

    With verify=True every promise pair at this n is checked against the DFA
    verdict first (refusing DFAs that do not solve the problem); the check is
    exhaustive, so n is subject to the usual size limit.
    """
    if set("01#") - set(dfa.alphabet):
        raise ReductionInputError("DFA alphabet must contain 0, 1 and #")
    if verify:
        check_exhaustive(n, "verifying a DFA")
        for inst in enumerate_promise(Family.DISJ_LAMBDA, n, Fraction(1, 4)):
            want = inst.label is Label.YES
            if dfa.accepts(disj_word(inst.x, inst.y)) != want:
                raise ReductionInputError(
                    f"DFA disagrees with the promise on x={inst.x}, y={inst.y}"
                )
    return DfaProtocol(dfa, n)
