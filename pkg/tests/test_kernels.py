import numpy as np
import pytest

from helpers import naive_max_family
from promise_cc import _kernels, _pykernels

BACKENDS = [pytest.param(_pykernels, id="pure")]
if _kernels.compiled is not None:
    BACKENDS.append(pytest.param(_kernels.compiled, id="compiled"))


def random_state(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


@pytest.mark.parametrize("backend", BACKENDS)
def test_diagonal_phase_matches_numpy(backend):
    rng = np.random.default_rng(1)
    for d in (2, 7, 64, 129):
        signs = rng.choice(np.array([1, -1], dtype=np.int8), size=d)
        vec = random_state(rng, d)
        assert np.array_equal(backend.diagonal_phase(signs, vec), vec * signs)


@pytest.mark.parametrize("backend", BACKENDS)
def test_pair_swap_matches_reference(backend):
    rng = np.random.default_rng(2)
    d = 16
    vec = random_state(rng, d)
    idx_a = np.array([0, 3, 7], dtype=np.intp)
    idx_b = np.array([8, 11, 15], dtype=np.intp)
    out = backend.pair_swap(idx_a, idx_b, vec)
    ref = vec.copy()
    ref[idx_a], ref[idx_b] = vec[idx_b], vec[idx_a]
    assert np.array_equal(out, ref)


@pytest.mark.parametrize("backend", BACKENDS)
def test_rotation_block_matches_reference(backend):
    rng = np.random.default_rng(3)
    vec = random_state(rng, 9)
    c, s = np.cos(0.7), np.sin(0.7)
    out = backend.rotation_block(c, s, vec)
    assert out[0] == pytest.approx(c * vec[0] - s * vec[1], abs=1e-15)
    assert out[1] == pytest.approx(s * vec[0] + c * vec[1], abs=1e-15)
    assert np.array_equal(out[2:], vec[2:])


@pytest.mark.parametrize("backend", BACKENDS)
def test_dense_matvec_matches_numpy(backend):
    rng = np.random.default_rng(4)
    for d in (2, 5, 33):
        mat = np.ascontiguousarray(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
        vec = random_state(rng, d)
        assert np.allclose(backend.dense_matvec(mat, vec), mat @ vec, atol=1e-12)


def random_graph_words(rng, n, p):
    dense = rng.random((n, n)) < p
    dense = np.triu(dense, 1)
    dense = dense | dense.T
    words = ((n + 63) // 64) * 8
    packed = np.packbits(dense, axis=1, bitorder="little")
    if packed.shape[1] < words:
        packed = np.pad(packed, ((0, 0), (0, words - packed.shape[1])))
    return np.ascontiguousarray(packed).view("<u8"), dense


def clique_ok(dense, members):
    return all(dense[a, b] for i, a in enumerate(members) for b in members[i + 1 :])


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("n, p", [(1, 0.5), (12, 0.3), (30, 0.5), (70, 0.8), (70, 0.1)])
def test_max_clique_valid_and_backends_agree(backend, n, p):
    rng = np.random.default_rng(n * 100 + int(p * 10))
    words, dense = random_graph_words(rng, n, p)
    size, members = backend.max_clique(words, n)
    assert size == len(members)
    assert clique_ok(dense, list(members))
    ref_size, ref_members = _pykernels.max_clique(words, n)
    assert size == ref_size
    assert np.array_equal(members, ref_members)


def test_max_clique_matches_family_oracle():
    # conflict-graph complement built exactly as bounds does it
    from promise_cc.bounds import max_family_avoiding

    for n in (3, 4, 5):
        for l in range(n + 1):
            assert max_family_avoiding(n, l).max_size == naive_max_family(n, l)


def test_empty_graph():
    size, members = _pykernels.max_clique(np.zeros((0, 8), dtype=np.uint64), 0)
    assert size == 0 and members.size == 0


def test_backend_selection_reports():
    from promise_cc import _kernels as k

    assert k.backend() in ("pure", "compiled")
    assert k.BACKEND == k.backend()
