import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vilenkin.grid import GridFunction, convolve_direct, integrate
from vilenkin.group import GroupPoint, RadixSequence, RangeError, ShapeError, digit_table
from vilenkin.kernels import dirichlet
from vilenkin.summability import partial_sum
from vilenkin.transform import (CoefficientVector, character_matrix, convolve_fast, forward,
                                forward_naive, inverse, rademacher, vilenkin_function)

B2 = RadixSequence.parse("2^8")
R = RadixSequence.parse("2,3,4,3,2")


def _psi_oracle(n, radix, N):
    """exp(2 pi i sum n_k x_k / m_k) evaluated digit by digit."""
    digits = digit_table(radix, N)
    nd = [(n // radix.M[k]) % radix.m[k] for k in range(N)]
    phase = sum(nd[k] * digits[:, k] / radix.m[k] for k in range(N))
    return np.exp(2j * np.pi * phase)


def test_rademacher():
    digits = digit_table(B2, 4)
    for k in range(4):
        r = rademacher(k, B2, 4).values
        assert np.allclose(r, (-1.0) ** digits[:, k])
        assert r[0] == 1
    for k in range(5):
        r = rademacher(k, R, 5).values
        assert np.allclose(r ** R.m[k], 1)
    with pytest.raises(RangeError):
        rademacher(4, B2, 4)


def test_vilenkin_function_examples():
    assert np.allclose(vilenkin_function(0, R, 5).values, 1)
    for k in range(5):
        assert vilenkin_function(R.M[k], R, 5).max_dev(rademacher(k, R, 5)) < 1e-15
    psi3 = vilenkin_function(3, B2, 4)
    assert psi3.max_dev(rademacher(0, B2, 4) * rademacher(1, B2, 4)) < 1e-15
    for n in range(R.M[5]):
        assert np.max(np.abs(vilenkin_function(n, R, 5).values - _psi_oracle(n, R, 5))) < 1e-12


@pytest.mark.parametrize("spec,N", [("2^8", 8), ("2,3,4,3,2", 5), ("3^5", 5)])
def test_gram_identity(spec, N):
    r = RadixSequence.parse(spec)
    M = r.M[N]
    C = np.array([_psi_oracle(n, r, N) for n in range(M)])
    assert np.max(np.abs(C - character_matrix(r, N))) < 1e-12
    assert np.max(np.abs(C @ C.conj().T / M - np.eye(M))) < 1e-10


def test_forward_examples(rng):
    N = 5
    for n in (0, 1, 7, 143):
        c = forward(vilenkin_function(n, R, N))
        assert c.max_dev(CoefficientVector.unit(R, N, n)) < 1e-12
    t = 37
    point = GroupPoint.from_index(t, R, N)
    for n in range(N + 1):
        f = GridFunction.indicator(R, N, n, point) * R.M[n]
        c = forward(f).coefficients
        expected = np.zeros(R.M[N], dtype=complex)
        expected[:R.M[n]] = np.conj([_psi_oracle(j, R, N)[t] for j in range(R.M[n])])
        assert np.max(np.abs(c - expected)) < 1e-12
    f, g = GridFunction.random(R, N, rng), GridFunction.random(R, N, rng)
    lin = forward(f * 2.0 + g).coefficients
    assert np.max(np.abs(lin - (2 * forward_naive(f).coefficients + forward_naive(g).coefficients))) < 1e-12


def test_forward_naive(rng):
    for spec, N in (("2^8", 8), ("2,3,4,3,2", 5), ("3^5", 5)):
        r = RadixSequence.parse(spec)
        for _ in range(100):
            f = GridFunction.random(r, N, rng)
            assert forward(f).max_dev(forward_naive(f)) <= 1e-10
        c = forward_naive(GridFunction.constant(r, N))
        assert c.max_dev(CoefficientVector.unit(r, N, 0)) < 1e-12
        f = GridFunction.random(r, N, rng)
        parseval = np.sum(np.abs(forward(f).coefficients) ** 2)
        assert parseval == pytest.approx(np.mean(np.abs(f.values) ** 2), rel=1e-12)


def test_matches_numpy_fftn(rng):
    # independent cross-check: the digit grid is a C-order array with x_0 on the last axis
    f = GridFunction.random(R, 5, rng)
    shape = tuple(reversed(R.m))
    ref = np.fft.fftn(f.values.reshape(shape)) / f.size
    assert np.max(np.abs(ref.ravel() - forward(f).coefficients)) < 1e-12


def test_inverse(rng):
    f = GridFunction.random(R, 5, rng)
    assert inverse(forward(f)).max_dev(f) < 1e-12
    assert inverse(CoefficientVector.unit(R, 5, 11)).max_dev(vilenkin_function(11, R, 5)) < 1e-12
    zero = CoefficientVector(R, 5, np.zeros(R.M[5]))
    assert np.all(inverse(zero).values == 0)


def test_convolution(rng):
    f, g = GridFunction.random(R, 5, rng), GridFunction.random(R, 5, rng)
    h = convolve_fast(f, g)
    assert h.max_dev(convolve_direct(f, g)) < 1e-10
    prod = forward(f).coefficients * forward(g).coefficients
    assert np.max(np.abs(forward(h).coefficients - prod)) < 1e-10
    for n in (1, 5, 40, 100):
        assert convolve_fast(f, dirichlet(n, R, 5)).max_dev(partial_sum(f, n)) < 1e-12
    one = GridFunction.constant(R, 5)
    assert convolve_fast(f, one).max_dev(one * integrate(f)) < 1e-12
    with pytest.raises(ShapeError):
        convolve_fast(f, GridFunction.zeros(R, 4))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(2, 5), min_size=1, max_size=4), st.integers(0, 2**32 - 1))
def test_roundtrip_property(m, seed):
    r = RadixSequence(tuple(m))
    f = GridFunction.random(r, len(m), np.random.default_rng(seed))
    assert inverse(forward(f)).max_dev(f) < 1e-12
    assert forward(f).max_dev(forward_naive(f)) < 1e-12


def test_coefficient_csv(rng):
    c = forward(GridFunction.random(R, 5, rng))
    assert CoefficientVector.from_csv(c.to_csv(), R, 5).max_dev(c) == 0
