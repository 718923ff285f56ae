import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klconc import conjectures
from klconc.core import kl_divergence
from klconc.exact import exact_binomial_mgf

SMALL_NS = range(1, 41)
SMALL_PS = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0]
SMALL_XS = [0.0, 0.2, 0.5, 0.8, 0.99]


class TestHalfKl:
    def test_below_branch(self):
        assert conjectures.half_kl(0.3, 0.5) == 0.0

    def test_at_equality(self):
        assert conjectures.half_kl(0.5, 0.5) == 0.0

    def test_point_mass(self):
        assert conjectures.half_kl(1.0, 0.5) == pytest.approx(math.log(2), abs=1e-15)

    def test_infinite(self):
        assert conjectures.half_kl(0.5, 0.0) == math.inf

    def test_branch_identity_grid(self):
        for p_hat in np.linspace(0.0, 1.0, 21):
            for q in np.linspace(0.01, 0.99, 20):
                full = kl_divergence([p_hat, 1 - p_hat], [q, 1 - q])
                split = conjectures.half_kl(p_hat, q) + conjectures.half_kl(
                    1 - p_hat, 1 - q
                )
                assert split == pytest.approx(full, abs=1e-13)


class TestOrderingSandwich:
    def test_pointwise(self):
        for x in conjectures.DEFAULT_XS:
            lo = conjectures.naive_sqrt_bound(x)
            mid = conjectures.conjectured_mgf_bound(x)
            hi = 1.0 / (1.0 - x)
            assert lo <= mid + 1e-14
            assert mid <= hi + 1e-14


class TestImplicationIdentity:
    def test_symmetric_point(self):
        lhs, rhs = conjectures.verify_conjecture_implication(2, 0.5, 0.5)
        assert lhs == pytest.approx(1.5, abs=1e-12)
        assert rhs == pytest.approx(lhs, rel=1e-12)

    def test_x_zero(self):
        lhs, rhs = conjectures.verify_conjecture_implication(9, 0.3, 0.0)
        assert lhs == pytest.approx(1.0, abs=1e-12)
        assert rhs == pytest.approx(1.0, abs=1e-12)

    @given(
        st.integers(1, 100),
        st.floats(0.0, 1.0, allow_nan=False),
        st.floats(0.0, 0.99, allow_nan=False),
    )
    @settings(max_examples=200, deadline=None)
    def test_fuzz(self, n, p, x):
        lhs, rhs = conjectures.verify_conjecture_implication(n, p, x)
        assert rhs == pytest.approx(lhs, rel=1e-12, abs=1e-12)


class TestMainScan:
    def test_margin_at_symmetric_point(self):
        margin = conjectures.conjectured_mgf_bound(0.5) - exact_binomial_mgf(2, 0.5, 0.5)
        assert margin == pytest.approx(2 * math.sqrt(2) - 1 - 1.5, abs=1e-12)
        assert margin == pytest.approx(0.3284271247, abs=1e-9)

    def test_x_zero_margin_zero(self):
        res = conjectures.scan_conjecture_main(ns=range(1, 20), ps=SMALL_PS, xs=[0.0])
        assert res.worst_margin == pytest.approx(0.0, abs=1e-13)
        assert not res.falsified

    def test_small_grid_clean(self):
        res = conjectures.scan_conjecture_main(ns=SMALL_NS, ps=SMALL_PS, xs=SMALL_XS)
        assert res.counterexamples == []
        assert res.worst_margin >= conjectures.VIOLATION_THRESHOLD

    def test_counterexamples_iff_threshold(self):
        res = conjectures.scan_conjecture_main(ns=SMALL_NS, ps=SMALL_PS, xs=SMALL_XS)
        assert bool(res.counterexamples) == (
            res.worst_margin < conjectures.VIOLATION_THRESHOLD
        )

    def test_regression_guard_naive_bound(self):
        # the scanner must flag the known violation of 1/sqrt(1-x)
        res = conjectures.scan_conjecture_main(
            ns=[2], ps=[0.5], xs=[0.5], bound_fn=conjectures.naive_sqrt_bound
        )
        assert res.falsified
        n, p, x, margin = res.counterexamples[0]
        assert (n, p, x) == (2, 0.5, 0.5)
        assert margin == pytest.approx(math.sqrt(2) - 1.5, abs=1e-12)
        assert res.worst_point == (2, 0.5, 0.5)


class TestHalfScan:
    def test_x_zero(self):
        res = conjectures.scan_conjecture_half(ns=range(1, 20), ps=SMALL_PS, xs=[0.0])
        assert res.worst_margin == pytest.approx(0.0, abs=1e-13)

    def test_degenerate_p_one(self):
        for x in (0.1, 0.5, 0.9):
            res = conjectures.scan_conjecture_half(ns=[5], ps=[1.0], xs=[x])
            assert res.worst_margin == pytest.approx(
                conjectures.naive_sqrt_bound(x) - 1.0, abs=1e-12
            )

    def test_small_grid_clean(self):
        res = conjectures.scan_conjecture_half(ns=SMALL_NS, ps=SMALL_PS, xs=SMALL_XS)
        assert res.counterexamples == []


class TestSerialization:
    def test_json_dict(self):
        res = conjectures.scan_conjecture_main(ns=[2], ps=[0.5], xs=[0.5])
        d = res.to_dict()
        assert d["schema_version"] == 1
        assert d["worst_point"] == {"n": 2, "p": 0.5, "x": 0.5}
        assert d["counterexamples"] == []

    def test_margins_stream(self):
        buf = io.StringIO()
        conjectures.scan_conjecture_main(
            ns=[2], ps=[0.25, 0.5], xs=[0.5], margins_stream=buf
        )
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "n,p,x,exact,bound,margin"
        assert len(lines) == 3


def test_worst_margin_by_n_shrinks():
    traj = conjectures.worst_margin_by_n(ns=[1, 5, 20, 80], which="main")
    margins = [m for _, m in traj]
    assert all(m >= conjectures.VIOLATION_THRESHOLD for m in margins)
    assert margins[-1] < margins[0]
