"""Exact simulation of two-party promise-problem protocols at desk scale.

Subpackages by concern:

* bitcore   — bitstrings, Hamming statistics, the four promise families
* qsim      — small dense statevector simulation and the protocol unitaries
* protocols — executable protocols with transcripts and cost accounting
* query     — the single-query weight algorithm and the decision-tree adversary
* automata  — quantum/classical finite automata and the DFA reduction
* bounds    — exact conflict-family search and rectangle lower bounds
* cli       — the promise-cc command-line front end
"""

from ._kernels import backend
from .bitcore import (
    BitString,
    Family,
    HammingStats,
    Label,
    PromiseInstance,
    classify,
    enumerate_promise,
    hamming_stats,
)
from .bounds import (
    ConflictFamilyResult,
    RectangleBound,
    disj_rectangle_bound,
    eqk_rectangle_bound,
    max_family_avoiding,
)
from .automata import (
    Dfa,
    Mo1qcfa,
    build_automaton_disj,
    build_automaton_eqk,
    dfa_to_protocol,
    simulate_mo1qcfa,
)
from .protocols import (
    Message,
    ProtocolTranscript,
    RepetitionPolicy,
    disj_accept_prob_closed_form,
    disj_prob_exact_error,
    eqk_accept_prob_closed_form,
    run_disj_probabilistic,
    run_disj_quantum,
    run_disj_quantum_once,
    run_eqk_deterministic,
    run_eqk_quantum,
    run_disj_prime_deterministic,
)
from .qsim import StateVector, UnitaryOp, apply, complete_unitary, measure_prob
from .query import (
    AdversaryWitness,
    QueryRun,
    adversary_check,
    djk_accept_prob_closed_form,
    run_djk_deterministic,
    run_djk_quantum,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
