from fractions import Fraction

import numpy as np
import pytest

from promise_cc.bitcore import (
    BitString,
    Family,
    Label,
    PromiseInstance,
    classify,
    enumerate_promise,
    hamming_stats,
)
from promise_cc.errors import DimensionMismatch, LimitExceeded, ParameterError


def test_bitstring_construction_and_views():
    b = BitString("1010")
    assert str(b) == "1010"
    assert len(b) == 4
    assert list(b) == [1, 0, 1, 0]
    assert b[0] == 1 and b[3] == 0
    assert b.weight() == 2
    assert str(b.complement()) == "0101"
    assert b.ones() == (0, 2)
    assert BitString([1, 0, 1, 0]) == b
    assert BitString.from_int(0b1010, 4) == b
    assert hash(BitString("1010")) == hash(b)


def test_bitstring_rejects_garbage():
    with pytest.raises(ParameterError):
        BitString("10a0")
    with pytest.raises(ParameterError):
        BitString("")
    with pytest.raises(ParameterError):
        BitString([0, 2])
    with pytest.raises(ParameterError):
        BitString.from_int(16, 4)


@pytest.mark.parametrize(
    "x, y, expected",
    [
        ("0000", "0000", (0, 0, 0, 0)),
        ("1100", "0110", (2, 2, 2, 1)),
        ("1111", "1111", (4, 4, 0, 4)),
    ],
)
def test_hamming_stats_examples(x, y, expected):
    assert tuple(hamming_stats(BitString(x), BitString(y))) == expected


def test_hamming_stats_length_mismatch():
    with pytest.raises(DimensionMismatch):
        hamming_stats(BitString("10"), BitString("100"))


def test_distance_identity_exhaustive():
    # distance == wx + wy - 2*overlap over every pair, n <= 10, via vectorized popcounts
    for n in range(1, 11):
        vals = np.arange(1 << n, dtype=np.uint32)
        wx = np.bitwise_count(vals)
        dist = np.bitwise_count(vals[:, None] ^ vals[None, :])
        overlap = np.bitwise_count(vals[:, None] & vals[None, :])
        assert np.array_equal(dist, wx[:, None] + wx[None, :] - 2 * overlap)


def test_hamming_stats_matches_mask_arithmetic():
    for n in range(1, 7):
        for xv in range(1 << n):
            for yv in range(1 << n):
                s = hamming_stats(BitString.from_int(xv, n), BitString.from_int(yv, n))
                assert s.weight_x == bin(xv).count("1")
                assert s.weight_y == bin(yv).count("1")
                assert s.distance == bin(xv ^ yv).count("1")
                assert s.and_weight == bin(xv & yv).count("1")


@pytest.mark.parametrize(
    "family, x, y, k, lam, expected",
    [
        (Family.EQ_K, "1010", "1010", 2, None, Label.YES),
        (Family.EQ_K, "1010", "1001", 2, None, Label.NO),
        (Family.EQ_K, "1010", "1011", 2, None, Label.OFF_PROMISE),
        (Family.DJ_K, "00", None, 2, None, Label.YES),
        (Family.DJ_K, "11", None, 2, None, Label.NO),
        (Family.DJ_K, "01", None, 2, None, Label.OFF_PROMISE),
        # overlap 1 equals lambda*n exactly: the closed no-interval includes it
        (Family.DISJ_LAMBDA, "1100", "1000", None, Fraction(1, 4), Label.NO),
        (Family.DISJ_LAMBDA, "1100", "0011", None, Fraction(1, 4), Label.YES),
        (Family.DISJ_LAMBDA, "1111", "1111", None, Fraction(1, 4), Label.OFF_PROMISE),
        (Family.DISJ_PRIME_K, "1110", "1110", 3, None, Label.NO),
        (Family.DISJ_PRIME_K, "1000", "0100", 3, None, Label.YES),
        (Family.DISJ_PRIME_K, "1100", "1000", 3, None, Label.OFF_PROMISE),
    ],
)
def test_classify_examples(family, x, y, k, lam, expected):
    inst = PromiseInstance(
        family, BitString(x), BitString(y) if y else None, k=k, lam=lam
    )
    assert classify(inst) is expected
    assert inst.label is expected


def test_classify_parameter_errors():
    with pytest.raises(ParameterError):
        PromiseInstance(Family.DISJ_LAMBDA, BitString("10"), BitString("01"), lam=Fraction(1, 3))
    with pytest.raises(ParameterError):
        PromiseInstance(Family.EQ_K, BitString("1000"), BitString("1000"), k=1)
    with pytest.raises(ParameterError):
        PromiseInstance(Family.EQ_K, BitString("10"), BitString("10"), lam=Fraction(1, 4))
    with pytest.raises(ParameterError):
        PromiseInstance(Family.DJ_K, BitString("10"), BitString("01"), k=2)
    with pytest.raises(DimensionMismatch):
        PromiseInstance(Family.EQ_K, BitString("10"), BitString("100"), k=2)


def test_enumerate_eqk_n2():
    instances = list(enumerate_promise(Family.EQ_K, 2, 2))
    labels = [inst.label for inst in instances]
    assert labels.count(Label.YES) == 4
    assert labels.count(Label.NO) == 4
    for inst in instances:
        if inst.label is Label.NO:
            assert inst.y == inst.x.complement()


def test_enumerate_djk_n2():
    instances = list(enumerate_promise(Family.DJ_K, 2, 2))
    assert [(str(i.x), i.label) for i in instances] == [
        ("00", Label.YES),
        ("11", Label.NO),
    ]


def test_enumerate_disj_counts():
    instances = list(enumerate_promise(Family.DISJ_LAMBDA, 4, Fraction(1, 4)))
    labels = [inst.label for inst in instances]
    # each coordinate independently avoids (1,1) for a yes-pair
    assert labels.count(Label.YES) == 3**4
    # only (1111, 1111) has overlap 4 > 3, everything else with overlap >= 1 is no
    assert labels.count(Label.NO) == 4**4 - 3**4 - 1


@pytest.mark.parametrize(
    "family, n, param",
    [
        (Family.EQ_K, 4, 2),
        (Family.EQ_K, 6, 4),
        (Family.DJ_K, 6, 3),
        (Family.DISJ_LAMBDA, 4, Fraction(1, 4)),
        (Family.DISJ_LAMBDA, 6, Fraction(1, 8)),
        (Family.DISJ_PRIME_K, 4, 2),
        (Family.DISJ_PRIME_K, 6, 4),
    ],
)
def test_enumerate_matches_classify_filter(family, n, param):
    stream = [(str(i.x), str(i.y) if i.y else None, i.label) for i in enumerate_promise(family, n, param)]
    expected = []
    for xv in range(1 << n):
        x = BitString.from_int(xv, n)
        if family is Family.DJ_K:
            inst = PromiseInstance(family, x, k=param)
            if inst.label is not Label.OFF_PROMISE:
                expected.append((str(x), None, inst.label))
            continue
        for yv in range(1 << n):
            kwargs = {"k": param} if family is not Family.DISJ_LAMBDA else {"lam": param}
            inst = PromiseInstance(family, x, BitString.from_int(yv, n), **kwargs)
            if inst.label is not Label.OFF_PROMISE:
                expected.append((str(inst.x), str(inst.y), inst.label))
    assert stream == expected


def test_enumerate_stream_restartable():
    gen = enumerate_promise(Family.EQ_K, 3, 2)
    first = [(str(i.x), str(i.y)) for i in gen]
    second = [(str(i.x), str(i.y)) for i in enumerate_promise(Family.EQ_K, 3, 2)]
    assert first == second


def test_enumerate_limit(monkeypatch):
    with pytest.raises(LimitExceeded):
        next(enumerate_promise(Family.EQ_K, 13, 8))
    monkeypatch.setenv("PROMISE_CC_MAX_N", "4")
    with pytest.raises(LimitExceeded):
        next(enumerate_promise(Family.EQ_K, 5, 4))
    monkeypatch.setenv("PROMISE_CC_MAX_N", "13")
    assert next(enumerate_promise(Family.EQ_K, 13, 8))


def test_instance_json_round():
    inst = PromiseInstance(Family.DISJ_LAMBDA, BitString("1100"), BitString("0011"), lam=Fraction(1, 4))
    js = inst.to_json()
    assert js == {
        "family": "disj",
        "n": 4,
        "x": "1100",
        "y": "0011",
        "lambda": "1/4",
        "label": "yes",
    }
