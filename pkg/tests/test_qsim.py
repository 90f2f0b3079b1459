import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from promise_cc import qsim
from promise_cc.bitcore import BitString
from promise_cc.errors import DimensionMismatch, ParameterError
from promise_cc.qsim import OpKind, StateVector, UnitaryOp


def unitarity_defect(op):
    m = op.materialize()
    return np.max(np.abs(m.conj().T @ m - np.eye(op.dim)))


# ---------------------------------------------------------------------------
# rotation construction
# ---------------------------------------------------------------------------


def test_bias_rotation_degenerate_block():
    # 2k - n = 0 collapses the diagonal entries
    m = qsim.bias_rotation(4, 2).materialize()
    assert np.allclose(m[:2, :2], [[0.0, -1.0], [1.0, 0.0]], atol=1e-15)
    assert np.allclose(m[2:, 2:], np.eye(3), atol=0)


def test_bias_rotation_half_block():
    m = qsim.bias_rotation(2, 2).materialize()
    r = math.sqrt(0.5)
    assert np.allclose(m[:2, :2], [[r, -r], [r, r]], atol=1e-15)


def test_bias_rotation_roundtrip():
    op = qsim.bias_rotation(6, 4)
    e0 = np.zeros(7, dtype=np.complex128)
    e0[0] = 1.0
    back = op.inverse().apply_raw(op.apply_raw(e0))
    assert abs(back[0] - 1.0) < 1e-14
    assert np.max(np.abs(back[1:])) < 1e-14


def test_bias_rotation_rejects_small_k():
    with pytest.raises(ParameterError):
        qsim.bias_rotation(4, 1)


# ---------------------------------------------------------------------------
# completion
# ---------------------------------------------------------------------------


def test_uniform_spread_completed_column():
    # with two columns prescribed, the only free column is forced up to sign,
    # and the deterministic completion picks the +,- version
    m = qsim.uniform_spread(2).materialize()
    r = 1 / math.sqrt(2)
    assert np.allclose(m[:, 0], [1, 0, 0], atol=1e-15)
    assert np.allclose(m[:, 1], [0, r, r], atol=1e-15)
    assert np.allclose(m[:, 2], [0, r, -r], atol=1e-14)


def test_spread_column_unitary():
    op = qsim.spread_column(2)
    assert op.dim == 4
    assert unitarity_defect(op) <= 1e-12
    r = 1 / math.sqrt(2)
    assert np.allclose(op.materialize()[:, 0], [r, r, 0, 0], atol=1e-15)


def test_collect_row_unitary():
    op = qsim.collect_row(2)
    r = 1 / math.sqrt(2)
    assert np.allclose(op.materialize()[0], [r, r, 0, 0], atol=1e-15)
    assert unitarity_defect(op) <= 1e-12


def test_complete_identity_returned_unchanged():
    eye = np.eye(5)
    op = qsim.complete_unitary(5, columns={i: eye[:, i] for i in range(5)})
    assert np.array_equal(op.materialize(), np.eye(5, dtype=complex))


def test_complete_rejects_nonorthonormal():
    with pytest.raises(ParameterError):
        qsim.complete_unitary(3, columns={0: [1, 0, 0], 1: [1, 0, 0]})
    with pytest.raises(ParameterError):
        qsim.complete_unitary(3, columns={0: [0.5, 0.5, 0]})


def test_complete_requires_exactly_one_side():
    with pytest.raises(ParameterError):
        qsim.complete_unitary(3)
    with pytest.raises(ParameterError):
        qsim.complete_unitary(3, columns={0: [1, 0, 0]}, rows={0: [1, 0, 0]})


def test_complete_deterministic_bit_identical():
    col = np.zeros(9)
    col[1:] = 1 / math.sqrt(8)
    a = qsim.complete_unitary(9, columns={2: col}).materialize()
    b = qsim.complete_unitary(9, columns={2: col}).materialize()
    assert np.array_equal(a, b)


def test_complete_with_complex_prescription():
    col = np.array([1j / math.sqrt(2), 0, 1 / math.sqrt(2), 0])
    op = qsim.complete_unitary(4, columns={0: col})
    assert unitarity_defect(op) <= 1e-12
    assert np.allclose(op.materialize()[:, 0], col, atol=1e-15)


def test_complete_rows_places_prescribed_row():
    row = np.array([0.6, 0.8, 0, 0, 0])
    op = qsim.complete_unitary(5, rows={0: row})
    assert np.allclose(op.materialize()[0], row, atol=1e-15)
    assert unitarity_defect(op) <= 1e-12


# ---------------------------------------------------------------------------
# application and measurement
# ---------------------------------------------------------------------------


def test_phase_oracle_example():
    psi = StateVector(np.array([0, 1, 1]) / math.sqrt(2))
    out = qsim.apply(qsim.phase_oracle(BitString("10")), psi)
    assert np.allclose(out.amplitudes, np.array([0, -1, 1]) / math.sqrt(2), atol=1e-15)


def test_pair_swap_example():
    a, b, c, d = 0.5, 0.5j, -0.5, 0.5
    psi = StateVector([a, b, c, d])
    out = qsim.apply(qsim.marked_swap(BitString("11")), psi)
    assert np.allclose(out.amplitudes, [c, d, a, b], atol=0)


def test_identity_leaves_state_alone():
    psi = StateVector(np.ones(6) / math.sqrt(6))
    out = qsim.apply(qsim.identity(6), psi)
    assert np.array_equal(out.amplitudes, psi.amplitudes)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        qsim.identity(3).apply_raw(np.ones(4, dtype=np.complex128) / 2)


def test_measure_prob_basics():
    assert qsim.measure_prob(StateVector.basis(4, 0), 0) == 1.0
    psi = StateVector(np.array([1, 1]) / math.sqrt(2))
    assert abs(qsim.measure_prob(psi, 0) - 0.5) < 1e-15
    with pytest.raises(DimensionMismatch):
        qsim.measure_prob(psi, 2)


def test_state_vector_normalization_enforced():
    with pytest.raises(ParameterError):
        StateVector([1.0, 1.0])
    with pytest.raises(ParameterError):
        StateVector.basis(3, 5)


def test_op_json_kinds():
    assert qsim.phase_oracle(BitString("10")).to_json()["kind"] == "diagonal_phase"
    assert qsim.marked_swap(BitString("10")).to_json()["pairs"] == [[0, 2]]
    js = qsim.bias_rotation(2, 2).to_json()
    assert js["kind"] == "rotation_block" and len(js["block"]) == 2
    assert "matrix" in qsim.uniform_spread(2).to_json()


def test_state_json_pairs():
    js = StateVector([1j, 0]).to_json()
    assert js == [[0.0, 1.0], [0.0, 0.0]]


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------


@st.composite
def structured_op_and_state(draw):
    dim = draw(st.integers(min_value=2, max_value=130))
    kind = draw(st.sampled_from(["diag", "swap", "rot", "dense_from_completion"]))
    if kind == "diag":
        signs = draw(st.lists(st.sampled_from([1, -1]), min_size=dim, max_size=dim))
        op = UnitaryOp.diagonal_phase(signs)
    elif kind == "swap":
        k = draw(st.integers(min_value=0, max_value=dim // 2))
        idx = draw(st.permutations(range(dim)))
        op = UnitaryOp.pair_swap(dim, [(idx[2 * i], idx[2 * i + 1]) for i in range(k)])
    elif kind == "rot":
        theta = draw(st.floats(min_value=-3.14, max_value=3.14, allow_nan=False))
        op = UnitaryOp.rotation_block(dim, math.cos(theta), math.sin(theta))
    else:
        col = np.zeros(dim)
        col[draw(st.integers(min_value=0, max_value=dim - 1))] = 1.0
        op = qsim.complete_unitary(dim, columns={0: col})
    raw = draw(
        st.lists(
            st.tuples(
                st.floats(min_value=-1, max_value=1, allow_nan=False),
                st.floats(min_value=-1, max_value=1, allow_nan=False),
            ),
            min_size=dim,
            max_size=dim,
        )
    )
    vec = np.array([complex(re, im) for re, im in raw])
    norm = np.linalg.norm(vec)
    if norm < 1e-3:
        vec = np.zeros(dim, dtype=np.complex128)
        vec[0] = 1.0
    else:
        vec = vec / norm
    return op, StateVector(vec)


@settings(max_examples=60, deadline=None)
@given(structured_op_and_state())
def test_structured_apply_matches_dense(pair):
    op, psi = pair
    fast = op.apply_raw(psi.amplitudes)
    dense = op.materialize() @ psi.amplitudes
    assert np.max(np.abs(fast - dense)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(structured_op_and_state())
def test_apply_preserves_norm(pair):
    op, psi = pair
    out = qsim.apply(op, psi)
    assert abs(np.linalg.norm(out.amplitudes) - 1.0) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_protocol_unitaries_pass_unitarity(data):
    n = data.draw(st.integers(min_value=1, max_value=64))
    k = data.draw(st.integers(min_value=(n + 1) // 2, max_value=n + 4))
    for op in (
        qsim.bias_rotation(n, k),
        qsim.uniform_spread(n),
        qsim.spread_column(n),
        qsim.collect_row(n),
    ):
        assert unitarity_defect(op) <= 1e-12
