import pytest

from vilenkin.checks import run_verify
from vilenkin.group import RadixSequence, RangeError


@pytest.mark.parametrize("spec,N", [("2^6", 6), ("3^5", 5), ("2,3,2,3,2,3", 6)])
def test_verify_all_pass(spec, N):
    results = run_verify(RadixSequence.parse(spec), N)
    failed = [r.check for r in results if not r.passed]
    assert not failed


def test_verify_mixed_flags_only_stated_dirichlet_bound():
    results = run_verify(RadixSequence.parse("2,3,4,3,2"), 5)
    failed = [r.check for r in results if not r.passed]
    assert failed == ["dirichlet_lower"]
    lukomskii = next(r for r in results if r.check == "lukomskii_sandwich")
    assert lukomskii.passed


def test_verify_sampled_above_exhaustive_limit():
    results = run_verify(RadixSequence.parse("2^12"), 12, suites=("transform", "kernels"))
    names = {r.check for r in results}
    assert "gram_identity" not in names and "dirichlet_closed" in names
    assert all(r.passed for r in results)


def test_verify_rejects_bad_resolution():
    with pytest.raises(RangeError):
        run_verify(RadixSequence.parse("2^4"), 5)
