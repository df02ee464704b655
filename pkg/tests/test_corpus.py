"""Fixed test-function corpus: membership, parsing of parameterized ids, and
the structural smoothness claims behind each member's kind label."""

import numpy as np
import pytest

from gshift import (
    CORPUS_VERSION,
    ParameterDomainError,
    default_corpus,
    eval_jacobi,
    get_function,
    list_functions,
)
from gshift.corpus import CorpusFunction

from conftest import EIGEN_BASIS


class TestFixedCorpus:
    def test_membership_and_version(self):
        ids = [f.id for f in default_corpus()]
        assert CORPUS_VERSION == "1.0"
        for expected in (
            "poly:0",
            "poly:8",
            "eig:2",
            "eig:5",
            "eig:8",
            "abspow:0.5",
            "abspow:1.0",
            "abspow:1.5",
            "exp",
            "cubic_c1",
        ):
            assert expected in ids
        assert len(ids) == len(set(ids))

    def test_listing_is_deterministic_and_described(self):
        rows = list_functions()
        assert rows == list_functions()
        for row in rows:
            assert row["id"] and row["kind"] and row["description"]

    def test_members_are_vectorized_callables(self):
        xs = np.linspace(-1, 1, 17)
        for member in default_corpus():
            vals = member(xs)
            assert np.shape(vals) == xs.shape
            assert np.all(np.isfinite(vals))

    def test_eigen_members_match_basis(self):
        xs = np.linspace(-0.9, 0.9, 9)
        for n in (2, 5, 8):
            member = get_function(f"eig:{n}")
            np.testing.assert_allclose(member(xs), eval_jacobi(EIGEN_BASIS, n, xs), atol=1e-12)

    def test_piecewise_cubic_is_c1_but_not_c2(self):
        f = get_function("cubic_c1")
        kink = -0.2
        h = 1e-6
        left_d = (f(kink) - f(kink - h)) / h
        right_d = (f(kink + h) - f(kink)) / h
        assert abs(left_d - right_d) < 1e-4  # first derivative continuous
        left_dd = (f(kink) - 2 * f(kink - h) + f(kink - 2 * h)) / h**2
        right_dd = (f(kink + 2 * h) + f(kink) - 2 * f(kink + h)) / h**2
        assert abs(left_dd - right_dd) > 0.5  # second derivative jumps


class TestParameterizedIds:
    def test_shifted_corner_parsing(self):
        f = get_function("absshift:0.5")
        assert f(np.array([0.5]))[0] == pytest.approx(0.0)
        assert f(np.array([0.75]))[0] == pytest.approx(0.25)

    def test_power_parsing(self):
        f = get_function("abspow:2.0")
        assert f(np.array([1.25]))[0] == pytest.approx(1.0)

    def test_monomial_coefficients(self):
        f = get_function("polycoef:1,0,-2")
        xs = np.linspace(-1, 1, 7)
        np.testing.assert_allclose(f(xs), 1.0 - 2.0 * xs**2, atol=1e-14)

    def test_rejects_malformed_ids(self):
        for bad in ("absshift:2.0", "abspow:0", "abspow:-1", "eig:-1", "nosuch", "polycoef:"):
            with pytest.raises(ParameterDomainError):
                get_function(bad)

    def test_corpus_function_exposes_metadata(self):
        member = get_function("exp")
        assert isinstance(member, CorpusFunction)
        assert member.kind == "analytic"
