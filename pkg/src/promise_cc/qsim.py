"""Small dense complex statevector simulation.

Everything here is exact linear algebra on vectors of dimension at most a few
hundred: the protocol unitaries, deterministic completion of partially
prescribed unitaries, and projective measurement probabilities.  Structured
operators (diagonal signs, index-pair swaps, a 2x2 rotation block) apply in
O(d) without materializing a matrix, which keeps the per-symbol automaton
steps cheap; dense operators are used only where a completed matrix is
genuinely needed.
"""

from __future__ import annotations

import math
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .bitcore import BitString
from .errors import DimensionMismatch, ParameterError

NORM_ATOL = 1e-10
UNITARY_ATOL = 1e-12
PRESCRIBED_ATOL = 1e-10
COMPLETION_RESIDUAL = 1e-8


class StateVector:
    """Unit-norm complex amplitude vector over d basis states."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        arr = np.array(amplitudes, dtype=np.complex128, copy=True).reshape(-1)
        norm2 = float(np.vdot(arr, arr).real)
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise ParameterError(f"state not normalized: |psi|^2 = {norm2}")
        arr.setflags(write=False)
        self.amplitudes = arr

    @classmethod
    def wrap(cls, arr: np.ndarray) -> "StateVector":
        """Adopt a freshly produced complex128 array without copying it."""
        norm2 = float(np.vdot(arr, arr).real)
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise ParameterError(f"state not normalized: |psi|^2 = {norm2}")
        arr.setflags(write=False)
        obj = object.__new__(cls)
        obj.amplitudes = arr
        return obj

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        if not 0 <= index < dim:
            raise ParameterError(f"basis index {index} out of range for dim {dim}")
        arr = np.zeros(dim, dtype=np.complex128)
        arr[index] = 1.0
        return cls(arr)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def to_json(self) -> list[list[float]]:
        return [[float(a.real), float(a.imag)] for a in self.amplitudes]

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim})"


class OpKind(Enum):
    DENSE = "dense"
    DIAGONAL_PHASE = "diagonal_phase"
    PAIR_SWAP = "pair_swap"
    ROTATION_BLOCK = "rotation_block"


class UnitaryOp:
    """A unitary stored either densely or in one of the structured forms."""

    __slots__ = ("kind", "dim", "_payload", "_applier")

    def __init__(self, kind: OpKind, dim: int, payload):
        self.kind = kind
        self.dim = dim
        self._payload = payload
        if kind is OpKind.DIAGONAL_PHASE:
            if payload.min() == 1:  # all +1: a genuine identity, skip the kernel
                self._applier = lambda vec: vec
            else:
                self._applier = lambda vec: _kernels.diagonal_phase(payload, vec)
        elif kind is OpKind.PAIR_SWAP:
            a, b = payload
            self._applier = lambda vec: _kernels.pair_swap(a, b, vec)
        elif kind is OpKind.ROTATION_BLOCK:
            c, s = payload
            self._applier = lambda vec: _kernels.rotation_block(c, s, vec)
        else:
            self._applier = lambda vec: _kernels.dense_matvec(payload, vec)

    @classmethod
    def dense(cls, matrix) -> "UnitaryOp":
        mat = np.array(matrix, dtype=np.complex128, copy=True, order="C")
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ParameterError(f"not a square matrix: shape {mat.shape}")
        dev = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
        if dev > UNITARY_ATOL:
            raise ParameterError(f"matrix not unitary: max |M^H M - I| = {dev}")
        mat.setflags(write=False)
        return cls(OpKind.DENSE, mat.shape[0], mat)

    @classmethod
    def diagonal_phase(cls, signs: Iterable[int]) -> "UnitaryOp":
        arr = np.array(list(signs), dtype=np.int8)
        if arr.ndim != 1 or not np.all(np.abs(arr) == 1):
            raise ParameterError("signs must be a vector of +-1")
        arr.setflags(write=False)
        return cls(OpKind.DIAGONAL_PHASE, arr.shape[0], arr)

    @classmethod
    def pair_swap(cls, dim: int, pairs: Iterable[tuple[int, int]]) -> "UnitaryOp":
        plist = [(int(a), int(b)) for a, b in pairs]
        touched = [i for p in plist for i in p]
        if len(set(touched)) != len(touched):
            raise ParameterError("swap pairs must be disjoint")
        if any(not 0 <= i < dim for i in touched):
            raise ParameterError("swap index out of range")
        idx_a = np.array([p[0] for p in plist], dtype=np.intp)
        idx_b = np.array([p[1] for p in plist], dtype=np.intp)
        idx_a.setflags(write=False)
        idx_b.setflags(write=False)
        return cls(OpKind.PAIR_SWAP, dim, (idx_a, idx_b))

    @classmethod
    def rotation_block(cls, dim: int, c: float, s: float) -> "UnitaryOp":
        if dim < 2:
            raise ParameterError("rotation block needs dim >= 2")
        if abs(c * c + s * s - 1.0) > UNITARY_ATOL:
            raise ParameterError(f"rotation entries not normalized: c={c}, s={s}")
        return cls(OpKind.ROTATION_BLOCK, dim, (float(c), float(s)))

    def apply_raw(self, vec: np.ndarray) -> np.ndarray:
        """Apply to a bare complex128 array of matching length."""
        if vec.shape[0] != self.dim:
            raise DimensionMismatch(f"op dim {self.dim} vs state dim {vec.shape[0]}")
        return self._applier(vec)

    def materialize(self) -> np.ndarray:
        """Dense matrix form (always unitary within UNITARY_ATOL)."""
        if self.kind is OpKind.DENSE:
            return self._payload
        if self.kind is OpKind.DIAGONAL_PHASE:
            return np.diag(self._payload.astype(np.complex128))
        mat = np.eye(self.dim, dtype=np.complex128)
        if self.kind is OpKind.PAIR_SWAP:
            idx_a, idx_b = self._payload
            for a, b in zip(idx_a, idx_b):
                mat[a, a] = mat[b, b] = 0.0
                mat[a, b] = mat[b, a] = 1.0
        else:
            c, s = self._payload
            mat[0, 0] = c
            mat[0, 1] = -s
            mat[1, 0] = s
            mat[1, 1] = c
        return mat

    def inverse(self) -> "UnitaryOp":
        if self.kind is OpKind.DENSE:
            return UnitaryOp.dense(self._payload.conj().T)
        if self.kind is OpKind.ROTATION_BLOCK:
            c, s = self._payload
            inv = UnitaryOp(OpKind.ROTATION_BLOCK, self.dim, (c, -s))
            return inv
        # sign flips and transpositions are involutions
        return self

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind.value, "dim": self.dim}
        if self.kind is OpKind.DIAGONAL_PHASE:
            out["signs"] = [int(s) for s in self._payload]
        elif self.kind is OpKind.PAIR_SWAP:
            out["pairs"] = [[int(a), int(b)] for a, b in zip(*self._payload)]
        elif self.kind is OpKind.ROTATION_BLOCK:
            out["block"] = [
                [self._payload[0], -self._payload[1]],
                [self._payload[1], self._payload[0]],
            ]
        else:
            out["matrix"] = [
                [[float(v.real), float(v.imag)] for v in row] for row in self._payload
            ]
        return out

    def __repr__(self) -> str:
        return f"UnitaryOp({self.kind.value}, dim={self.dim})"


def identity(dim: int) -> UnitaryOp:
    return UnitaryOp.diagonal_phase(np.ones(dim, dtype=np.int8))


def apply(op: UnitaryOp, psi: StateVector) -> StateVector:
    """op applied to psi; norm is preserved within NORM_ATOL by construction."""
    return StateVector.wrap(op.apply_raw(psi.amplitudes))


def measure_prob(psi: StateVector, outcome_index: int) -> float:
    """Probability of the standard-basis outcome at the given index."""
    if not 0 <= outcome_index < psi.dim:
        raise DimensionMismatch(f"index {outcome_index} out of range for dim {psi.dim}")
    a = psi.amplitudes[outcome_index]
    return float(a.real * a.real + a.imag * a.imag)


@lru_cache(maxsize=None)
def bias_rotation(n: int, k: int) -> UnitaryOp:
    """Rotation on levels 0,1 of a (n+1)-dimensional space.

    Sends the start state to sqrt((2k-n)/2k)|0> + sqrt(n/2k)|1>; the bias is
    what makes the final interference cancel exactly at distance/weight k.
    Needs k >= n/2 (otherwise the diagonal entry would be imaginary).
    """
    if k < 1 or 2 * k < n:
        raise ParameterError(f"need k >= n/2 and k >= 1, got n={n}, k={k}")
    c = math.sqrt((2 * k - n) / (2 * k))
    s = math.sqrt(n / (2 * k))
    return UnitaryOp.rotation_block(n + 1, c, s)


@lru_cache(maxsize=None)
def uniform_spread(n: int) -> UnitaryOp:
    """(n+1)-dim unitary fixing |0> and mapping |1> to the uniform state over |1..n>."""
    col1 = np.zeros(n + 1)
    col1[1:] = 1.0 / math.sqrt(n)
    return complete_unitary(n + 1, columns={0: np.eye(n + 1)[0], 1: col1})


@lru_cache(maxsize=1 << 16)
def _phase_oracle_cached(n: int, mask: int, lead: int) -> UnitaryOp:
    signs = np.ones(lead + n, dtype=np.int8)
    for i in range(n):
        if (mask >> (n - 1 - i)) & 1:
            signs[lead + i] = -1
    signs.setflags(write=False)
    return UnitaryOp(OpKind.DIAGONAL_PHASE, lead + n, signs)


def phase_oracle(bits: BitString, lead: int = 1) -> UnitaryOp:
    """Diagonal +-1 phases: index lead+i picks up (-1)**bits[i]; lower indices fixed."""
    return _phase_oracle_cached(len(bits), bits.mask, lead)


@lru_cache(maxsize=None)
def spread_column(n: int) -> UnitaryOp:
    """2n-dim unitary whose first column is uniform over the lower block |1,0>..|n,0>."""
    col0 = np.zeros(2 * n)
    col0[:n] = 1.0 / math.sqrt(n)
    return complete_unitary(2 * n, columns={0: col0})


@lru_cache(maxsize=None)
def collect_row(n: int) -> UnitaryOp:
    """2n-dim unitary whose first row is uniform over the lower block."""
    row0 = np.zeros(2 * n)
    row0[:n] = 1.0 / math.sqrt(n)
    return complete_unitary(2 * n, rows={0: row0})


@lru_cache(maxsize=1 << 16)
def _marked_swap_cached(n: int, mask: int) -> UnitaryOp:
    ones = [i for i in range(n) if (mask >> (n - 1 - i)) & 1]
    idx_a = np.array(ones, dtype=np.intp)
    idx_b = idx_a + n
    idx_a.setflags(write=False)
    idx_b.setflags(write=False)
    return UnitaryOp(OpKind.PAIR_SWAP, 2 * n, (idx_a, idx_b))


def marked_swap(bits: BitString) -> UnitaryOp:
    """Swap amplitudes of |i,0> and |i,1> (indices i and n+i) where bits[i] is 1."""
    return _marked_swap_cached(len(bits), bits.mask)


@lru_cache(maxsize=1 << 16)
def _marked_phase_cached(n: int, mask: int) -> UnitaryOp:
    signs = np.ones(2 * n, dtype=np.int8)
    for i in range(n):
        if (mask >> (n - 1 - i)) & 1:
            signs[n + i] = -1
    signs.setflags(write=False)
    return UnitaryOp(OpKind.DIAGONAL_PHASE, 2 * n, signs)


def marked_phase(bits: BitString) -> UnitaryOp:
    """Flip the sign of |i,1> (index n+i) where bits[i] is 1; lower block fixed."""
    return _marked_phase_cached(len(bits), bits.mask)


def _check_orthonormal(vectors: np.ndarray) -> None:
    gram = vectors.conj() @ vectors.T
    dev = np.max(np.abs(gram - np.eye(vectors.shape[0])))
    if dev > PRESCRIBED_ATOL:
        raise ParameterError(f"prescribed vectors not orthonormal: max deviation {dev}")


def complete_unitary(
    dim: int,
    columns: Mapping[int, np.ndarray] | None = None,
    rows: Mapping[int, np.ndarray] | None = None,
) -> UnitaryOp:
    """Deterministically extend prescribed orthonormal columns (or rows) to a unitary.

    Free slots are filled in increasing index order by orthonormalizing the
    standard basis vectors e_0, e_1, ... against everything accepted so far;
    basis vectors whose residual norm falls below COMPLETION_RESIDUAL are
    skipped.  The same prescription always yields a bit-identical matrix.
    """
    if (columns is None) == (rows is None):
        raise ParameterError("prescribe exactly one of columns or rows")
    if rows is not None:
        fixed = {i: np.asarray(v, dtype=np.complex128).conj() for i, v in rows.items()}
        completed = complete_unitary(dim, columns=fixed)
        return UnitaryOp.dense(completed.materialize().conj().T)

    fixed = {int(i): np.asarray(v, dtype=np.complex128).reshape(-1) for i, v in columns.items()}
    for i, v in fixed.items():
        if not 0 <= i < dim:
            raise ParameterError(f"column index {i} out of range")
        if v.shape[0] != dim:
            raise DimensionMismatch(f"column {i} has length {v.shape[0]}, expected {dim}")
    if fixed:
        _check_orthonormal(np.vstack([fixed[i] for i in sorted(fixed)]))

    mat = np.zeros((dim, dim), dtype=np.complex128)
    accepted: list[np.ndarray] = []
    for i in sorted(fixed):
        mat[:, i] = fixed[i]
        accepted.append(fixed[i])
    pointer = 0
    for j in range(dim):
        if j in fixed:
            continue
        while True:
            if pointer >= dim:
                raise ParameterError("completion exhausted the standard basis")
            cand = np.zeros(dim, dtype=np.complex128)
            cand[pointer] = 1.0
            pointer += 1
            for v in accepted:
                cand -= np.vdot(v, cand) * v
            residual = math.sqrt(float(np.sum(np.abs(cand) ** 2)))
            if residual >= COMPLETION_RESIDUAL:
                cand /= residual
                # a second orthogonalization pass keeps the completion
                # unitary to full precision even for larger dimensions
                for v in accepted:
                    cand -= np.vdot(v, cand) * v
                cand /= math.sqrt(float(np.sum(np.abs(cand) ** 2)))
                break
        mat[:, j] = cand
        accepted.append(cand)
    return UnitaryOp.dense(mat)
