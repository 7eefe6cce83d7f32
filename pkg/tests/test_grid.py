import numpy as np
import pytest

from vilenkin.grid import (GridFunction, combine, convolve_direct, coset_average, integrate, lp_norm,
                           translate, weak_lp_norm)
from vilenkin.group import DomainError, GroupPoint, RadixSequence, ShapeError
from vilenkin.kernels import dirichlet, paley
from vilenkin.summability import partial_sum
from vilenkin.transform import vilenkin_function

R = RadixSequence.parse("2,3,4,3,2")
N = 5


def test_integrate_examples():
    assert integrate(GridFunction.constant(R, N)) == pytest.approx(1)
    for n in range(1, 30):
        assert abs(integrate(vilenkin_function(n, R, N))) < 1e-13
    for n in range(N + 1):
        assert integrate(dirichlet(R.M[n], R, N)) == pytest.approx(1, abs=1e-12)


def test_lp_norm_examples():
    for p in (1 / 3, 0.5, 1, 2, np.inf):
        assert lp_norm(vilenkin_function(7, R, N), p) == pytest.approx(1)
        assert lp_norm(GridFunction.zeros(R, N), p) == 0
        for n in range(N + 1):
            Mn = R.M[n]
            expected = Mn if np.isinf(p) else Mn ** (1 - 1 / p)
            # the Paley form keeps the zeros exact; rounding noise would dominate at p < 1
            assert lp_norm(paley(n, R, N), p) == pytest.approx(expected, rel=1e-12)
            if p >= 1:
                assert lp_norm(dirichlet(Mn, R, N), p) == pytest.approx(expected, rel=1e-10)
    with pytest.raises(DomainError):
        lp_norm(GridFunction.zeros(R, N), 0)


def test_weak_norm_examples(rng):
    assert weak_lp_norm(GridFunction.constant(R, N, -2.5), 0.5) == pytest.approx(2.5, rel=1e-11)
    for n in range(N + 1):
        Mn = R.M[n]
        f = GridFunction.indicator(R, N, n) * Mn
        assert weak_lp_norm(f, 1 / 3) == pytest.approx(Mn ** (1 - 3), rel=1e-11)
    for _ in range(100):
        f = GridFunction.random(R, N, rng)
        for p in (1 / 3, 0.5, 1, 2):
            assert weak_lp_norm(f, p) <= lp_norm(f, p) + 1e-12


def test_translate(rng):
    f = GridFunction.random(R, N, rng)
    assert translate(f, GroupPoint.zero(R, N)).max_dev(f) == 0
    for n in (0, 5, 17, 100):
        psi = vilenkin_function(n, R, N)
        for t in (1, 7, 50):
            h = GroupPoint.from_index(t, R, N)
            assert translate(psi, h).max_dev(psi * np.conj(psi.at(h))) < 1e-12
    h = GroupPoint.from_index(33, R, N)
    assert lp_norm(translate(f, h), 1.5) == pytest.approx(lp_norm(f, 1.5))
    with pytest.raises(ShapeError):
        translate(f, GroupPoint.zero(R, N - 1))


def test_convolution_examples(rng):
    f = GridFunction.random(R, N, rng)
    one = GridFunction.constant(R, N)
    assert convolve_direct(f, one).max_dev(one * integrate(f)) < 1e-12
    for n in range(N + 1):
        Sn = convolve_direct(f, dirichlet(R.M[n], R, N))
        assert Sn.max_dev(coset_average(f, n)) < 1e-12
        assert Sn.max_dev(partial_sum(f, R.M[n])) < 1e-12
    delta = GridFunction.indicator(R, N, N) * R.M[N]
    assert convolve_direct(delta, f).max_dev(f) < 1e-12
    g = GridFunction.random(R, N, rng)
    assert convolve_direct(f, g).max_dev(convolve_direct(g, f)) < 1e-10


def test_combine(rng):
    f = GridFunction.random(R, N, rng)
    assert np.all(combine(f, f, "sub").values == 0)
    assert np.allclose(combine(vilenkin_function(9, R, N), None, "abs").values, 1)
    block = dirichlet(R.M[3], R, N) - dirichlet(R.M[2], R, N)
    assert abs(integrate(block)) < 1e-12
    with pytest.raises(ShapeError):
        combine(f, GridFunction.zeros(R, N - 1), "add")


def test_csv_roundtrip(rng):
    f = GridFunction.random(R, N, rng)
    g = GridFunction.from_csv(f.to_csv(), R, N)
    assert g.max_dev(f) == 0


def test_read_only(rng):
    f = GridFunction.random(R, N, rng)
    with pytest.raises(ValueError):
        f.values[0] = 1
